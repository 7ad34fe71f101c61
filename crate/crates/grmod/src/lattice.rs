//! Full-rank sublattices of Zᵏ in a canonical Hermite basis.
//!
//! A subgroup of ⊕ Z/dᵢ is represented throughout the crate as the full-rank
//! lattice of its preimages in Zᵏ, which always contains diag(d)·Zᵏ. The
//! canonical basis (lower-triangular, positive diagonal, reduced off-diagonal
//! entries) makes subgroup equality plain matrix equality.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::matrix::{column_hermite, kernel_basis, smith_normal_form, IntMatrix};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LatticeBasis {
    dim: usize,
    basis: IntMatrix, // columns form the basis; canonical lower-triangular HNF
}

impl std::fmt::Debug for LatticeBasis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "LatticeBasis({})", self.basis.render())
    }
}

impl LatticeBasis {
    /// Zᵏ itself.
    pub fn full(dim: usize) -> Self {
        LatticeBasis {
            dim,
            basis: IntMatrix::identity(dim),
        }
    }

    /// diag(d)·Zᵏ, the zero subgroup of ⊕ Z/dᵢ.
    pub fn from_diagonal(d: &[BigInt]) -> Self {
        assert!(
            d.iter().all(|x| x.is_positive()),
            "diagonal entries must be >= 1"
        );
        LatticeBasis {
            dim: d.len(),
            basis: IntMatrix::diagonal(d),
        }
    }

    /// Canonicalize a generating set that is known to span a full-rank lattice.
    pub fn from_generators(dim: usize, gens: &[Vec<BigInt>]) -> Result<Self> {
        for g in gens {
            if g.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: g.len(),
                });
            }
        }
        let basis = column_hermite(dim, gens, None);
        if basis.cols() != dim {
            return Err(Error::RankDeficient {
                dim,
                rank: basis.cols(),
            });
        }
        Ok(LatticeBasis { dim, basis })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn basis_columns(&self) -> Vec<Vec<BigInt>> {
        self.basis.columns()
    }

    /// |det| of the basis; positive by canonicality (product of the diagonal).
    pub fn determinant(&self) -> BigInt {
        let mut d = BigInt::one();
        for i in 0..self.dim {
            d *= self.basis.at(i, i);
        }
        d
    }

    /// Solve basis·x = v over Z by forward substitution.
    pub fn coordinates_of(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        if v.len() != self.dim {
            return None;
        }
        let mut x = vec![BigInt::zero(); self.dim];
        for i in 0..self.dim {
            let mut rhs = v[i].clone();
            for j in 0..i {
                rhs -= self.basis.at(i, j) * &x[j];
            }
            let (q, r) = rhs.div_rem(self.basis.at(i, i));
            if !r.is_zero() {
                return None;
            }
            x[i] = q;
        }
        Some(x)
    }

    pub fn contains_vector(&self, v: &[BigInt]) -> bool {
        self.coordinates_of(v).is_some()
    }

    pub fn contains(&self, other: &LatticeBasis) -> bool {
        self.dim == other.dim
            && other
                .basis_columns()
                .iter()
                .all(|c| self.contains_vector(c))
    }
}

/// Canonical basis of the lattice spanned by `generators` together with
/// diag(d)·Zᵏ.
pub fn hermite_lattice(generators: &[Vec<BigInt>], d: &[BigInt]) -> Result<LatticeBasis> {
    let dim = d.len();
    if d.iter().any(|x| !x.is_positive()) {
        return Err(Error::InvalidDiagonal);
    }
    for g in generators {
        if g.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: g.len(),
            });
        }
    }
    let basis = column_hermite(dim, generators, Some(d));
    debug_assert_eq!(basis.cols(), dim);
    Ok(LatticeBasis { dim, basis })
}

/// Canonical basis of L₁ ∩ L₂.
pub fn lattice_intersection(b1: &LatticeBasis, b2: &LatticeBasis) -> Result<LatticeBasis> {
    if b1.dim() != b2.dim() {
        return Err(Error::DimensionMismatch {
            expected: b1.dim(),
            found: b2.dim(),
        });
    }
    let k = b1.dim();
    // Pairs (x, y) with B₁x = B₂y; the intersection is B₁·{x-part}.
    let stacked = IntMatrix::from_fn(k, 2 * k, |i, j| {
        if j < k {
            b1.basis().at(i, j).clone()
        } else {
            -b2.basis().at(i, j - k)
        }
    });
    let ker = kernel_basis(&stacked);
    let gens: Vec<Vec<BigInt>> = ker.iter().map(|v| b1.basis().mul_vec(&v[..k])).collect();
    LatticeBasis::from_generators(k, &gens)
}

/// Exact index [outer : inner]; errors if inner ⊄ outer.
pub fn lattice_index(outer: &LatticeBasis, inner: &LatticeBasis) -> Result<BigInt> {
    if outer.dim() != inner.dim() {
        return Err(Error::DimensionMismatch {
            expected: outer.dim(),
            found: inner.dim(),
        });
    }
    if !outer.contains(inner) {
        return Err(Error::NotContained);
    }
    let (num, den) = (inner.determinant(), outer.determinant());
    let (q, r) = num.div_rem(&den);
    debug_assert!(r.is_zero());
    Ok(q)
}

pub(crate) fn check_endomorphism(u: &IntMatrix, d: &[BigInt]) -> Result<()> {
    let k = d.len();
    if u.rows() != k || u.cols() != k {
        return Err(Error::DimensionMismatch {
            expected: k,
            found: u.rows().max(u.cols()),
        });
    }
    if d.iter().any(|x| !x.is_positive()) {
        return Err(Error::InvalidDiagonal);
    }
    for l in 0..k {
        for i in 0..k {
            if !(u.at(i, l) * &d[l]).mod_floor(&d[i]).is_zero() {
                return Err(Error::NotEndomorphism { row: i, col: l });
            }
        }
    }
    Ok(())
}

/// Preimage lattice {x ∈ Zᵏ : U·x ∈ diag(d)·Zᵏ} of an endomorphism of ⊕ Z/dᵢ;
/// the kernel subgroup is this lattice modulo diag(d)·Zᵏ.
pub fn kernel_mod(u: &IntMatrix, d: &[BigInt]) -> Result<LatticeBasis> {
    check_endomorphism(u, d)?;
    let k = d.len();
    let stacked = IntMatrix::from_fn(k, 2 * k, |i, j| {
        if j < k {
            u.at(i, j).clone()
        } else if i == j - k {
            -d[i].clone()
        } else {
            BigInt::zero()
        }
    });
    let ker = kernel_basis(&stacked);
    let gens: Vec<Vec<BigInt>> = ker.iter().map(|v| v[..k].to_vec()).collect();
    hermite_lattice(&gens, d)
}

/// Lattice spanned by the columns of U together with diag(d)·Zᵏ; its classes
/// modulo diag(d)·Zᵏ form the image subgroup.
pub fn image_mod(u: &IntMatrix, d: &[BigInt]) -> Result<LatticeBasis> {
    check_endomorphism(u, d)?;
    hermite_lattice(&u.columns(), d)
}

/// Invariant factors (each > 1, ascending divisibility chain) of outer/inner.
pub fn quotient_invariants(outer: &LatticeBasis, inner: &LatticeBasis) -> Result<Vec<BigInt>> {
    if outer.dim() != inner.dim() {
        return Err(Error::DimensionMismatch {
            expected: outer.dim(),
            found: inner.dim(),
        });
    }
    let k = outer.dim();
    let mut cols = Vec::with_capacity(k);
    for c in inner.basis_columns() {
        match outer.coordinates_of(&c) {
            Some(x) => cols.push(x),
            None => return Err(Error::NotContained),
        }
    }
    let rel = IntMatrix::from_columns(k, &cols);
    let snf = smith_normal_form(&rel);
    let mut inv = Vec::new();
    for i in 0..k {
        let s = snf.s.at(i, i);
        debug_assert!(!s.is_zero());
        if !s.is_one() {
            inv.push(s.clone());
        }
    }
    Ok(inv)
}
