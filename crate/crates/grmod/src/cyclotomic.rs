//! Exact arithmetic in `Z[ζ_e]` ≅ `Z[x]/Φ_e(x)` in the power basis
//! 1, ζ, …, ζ^{φ(e)−1}, together with the integer-matrix regular
//! representation that lets ζ act on torsion modules.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

/// Coefficients of the e-th cyclotomic polynomial, ascending, monic of
/// degree φ(e). Computed by recursive exact division:
/// Φ_e = (x^e − 1) / ∏_{d | e, d < e} Φ_d.
pub fn cyclotomic_polynomial(e: u64) -> Vec<BigInt> {
    assert!(e >= 1);
    let mut table: std::collections::BTreeMap<u64, Vec<BigInt>> = std::collections::BTreeMap::new();
    for d in divisors(e) {
        let mut p = x_pow_minus_one(d);
        for d2 in divisors(d) {
            if d2 < d {
                let phi_d2 = table[&d2].clone();
                p = poly_exact_div(&p, &phi_d2);
            }
        }
        table.insert(d, p);
    }
    table.remove(&e).unwrap()
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut divs = Vec::new();
    let mut i = 1;
    while i * i <= n {
        if n % i == 0 {
            divs.push(i);
            if i != n / i {
                divs.push(n / i);
            }
        }
        i += 1;
    }
    divs.sort_unstable();
    divs
}

pub fn euler_phi(n: u64) -> u64 {
    (1..=n).filter(|k| num_integer::gcd(*k, n) == 1).count() as u64
}

fn x_pow_minus_one(n: u64) -> Vec<BigInt> {
    let mut c = vec![BigInt::zero(); n as usize + 1];
    c[0] = -BigInt::one();
    c[n as usize] = BigInt::one();
    c
}

fn poly_trim(p: &mut Vec<BigInt>) {
    while p.len() > 1 && p.last().map(|x| x.is_zero()).unwrap_or(false) {
        p.pop();
    }
}

pub(crate) fn poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

/// Exact division by a monic divisor; panics if the division is not exact.
fn poly_exact_div(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let (q, r) = poly_div_rem_monic(num, den);
    assert!(
        r.iter().all(|x| x.is_zero()),
        "polynomial division was not exact"
    );
    q
}

/// Division with remainder by a monic divisor.
fn poly_div_rem_monic(num: &[BigInt], den: &[BigInt]) -> (Vec<BigInt>, Vec<BigInt>) {
    assert!(
        den.last().map(|x| x.is_one()).unwrap_or(false),
        "divisor must be monic"
    );
    let dd = den.len() - 1;
    let mut rem = num.to_vec();
    poly_trim(&mut rem);
    if rem.len() <= dd {
        return (vec![BigInt::zero()], rem);
    }
    let mut quot = vec![BigInt::zero(); rem.len() - dd];
    for i in (dd..rem.len()).rev() {
        let c = rem[i].clone();
        if c.is_zero() {
            continue;
        }
        quot[i - dd] = c.clone();
        for (j, d) in den.iter().enumerate() {
            let idx = i - dd + j;
            let x = &rem[idx] - &c * d;
            rem[idx] = x;
        }
    }
    rem.truncate(dd.max(1));
    poly_trim(&mut rem);
    (quot, rem)
}

/// The ring `Z[ζ_e]` presented as `Z[x]/Φ_e(x)`. The polynomial is computed once
/// per ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycloRing {
    exponent: u64,
    phi: Vec<BigInt>,
}

/// An element of `Z[ζ_e]` as a coefficient vector of length φ(e) in the power
/// basis; the conductor travels with the element so ring mismatches are
/// detectable.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CycloElement {
    exponent: u64,
    coeffs: Vec<BigInt>,
}

impl CycloElement {
    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }
}

impl CycloRing {
    pub fn new(e: u64) -> Self {
        assert!(e >= 1, "conductor must be >= 1");
        CycloRing {
            exponent: e,
            phi: cyclotomic_polynomial(e),
        }
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    /// φ(e), the rank of the ring over Z.
    pub fn degree(&self) -> usize {
        self.phi.len() - 1
    }

    pub fn phi_coeffs(&self) -> &[BigInt] {
        &self.phi
    }

    fn check(&self, a: &CycloElement) -> Result<()> {
        if a.exponent != self.exponent {
            return Err(Error::RingMismatch(format!(
                "element of Z[zeta_{}] used in Z[zeta_{}]",
                a.exponent, self.exponent
            )));
        }
        Ok(())
    }

    pub fn element(&self, coeffs: Vec<BigInt>) -> Result<CycloElement> {
        if coeffs.len() != self.degree() {
            return Err(Error::DimensionMismatch {
                expected: self.degree(),
                found: coeffs.len(),
            });
        }
        Ok(CycloElement {
            exponent: self.exponent,
            coeffs,
        })
    }

    pub fn zero(&self) -> CycloElement {
        CycloElement {
            exponent: self.exponent,
            coeffs: vec![BigInt::zero(); self.degree()],
        }
    }

    pub fn one(&self) -> CycloElement {
        let mut z = self.zero();
        z.coeffs[0] = BigInt::one();
        z
    }

    fn reduce(&self, poly: &[BigInt]) -> Vec<BigInt> {
        let (_, mut r) = poly_div_rem_monic(poly, &self.phi);
        r.resize(self.degree(), BigInt::zero());
        r
    }

    pub fn add(&self, a: &CycloElement, b: &CycloElement) -> Result<CycloElement> {
        self.check(a)?;
        self.check(b)?;
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect();
        Ok(CycloElement {
            exponent: self.exponent,
            coeffs,
        })
    }

    pub fn mul(&self, a: &CycloElement, b: &CycloElement) -> Result<CycloElement> {
        self.check(a)?;
        self.check(b)?;
        if self.degree() == 0 {
            return Ok(self.zero());
        }
        let prod = poly_mul(&a.coeffs, &b.coeffs);
        Ok(CycloElement {
            exponent: self.exponent,
            coeffs: self.reduce(&prod),
        })
    }

    /// ζ_e^k in the power basis; k is reduced modulo e first.
    pub fn zeta_power(&self, k: i64) -> CycloElement {
        let e = self.exponent as i64;
        let k = k.rem_euclid(e) as usize;
        let mut poly = vec![BigInt::zero(); k + 1];
        poly[k] = BigInt::one();
        CycloElement {
            exponent: self.exponent,
            coeffs: self.reduce(&poly),
        }
    }

    /// Matrix of multiplication-by-a in the power basis; column j holds the
    /// coefficients of a·ζ^j.
    pub fn regular_rep(&self, a: &CycloElement) -> Result<IntMatrix> {
        self.check(a)?;
        let n = self.degree();
        let mut cols: Vec<Vec<BigInt>> = Vec::with_capacity(n);
        let mut cur = a.coeffs.clone();
        for _ in 0..n {
            cols.push(cur.clone());
            // multiply by x and reduce mod Φ_e
            let mut shifted = vec![BigInt::zero(); n + 1];
            for (i, c) in cur.iter().enumerate() {
                shifted[i + 1] = c.clone();
            }
            cur = self.reduce(&shifted);
        }
        Ok(IntMatrix::from_columns(n, &cols))
    }

    /// Companion matrix of Φ_e = regular representation of ζ itself.
    pub fn companion(&self) -> IntMatrix {
        self.regular_rep(&self.zeta_power(1)).unwrap()
    }
}
