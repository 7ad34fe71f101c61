//! Dense integer matrices with arbitrary-precision entries, plus the two
//! normal-form algorithms (Smith, column-style Hermite) that every other
//! computation in this crate reduces to.
//!
//! Matrices act on column vectors; a column of a matrix is the image of a
//! basis vector. All algorithms here are exact; entries are `BigInt` because
//! normal-form intermediates outgrow any fixed width.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>, // row-major
}

impl std::fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.render())
    }
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn diagonal(entries: &[BigInt]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, e) in entries.iter().enumerate() {
            m.set(i, i, e.clone());
        }
        m
    }

    /// Build from row slices of machine integers; test and construction helper.
    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        let data = rows.iter().flatten().map(|&x| BigInt::from(x)).collect();
        IntMatrix {
            rows: r,
            cols: c,
            data,
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        IntMatrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.at(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<BigInt>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn from_columns(rows: usize, cols: &[Vec<BigInt>]) -> Self {
        assert!(cols.iter().all(|c| c.len() == rows), "ragged columns");
        IntMatrix::from_fn(rows, cols.len(), |i, j| cols[j][i].clone())
    }

    pub fn transpose(&self) -> Self {
        IntMatrix::from_fn(self.cols, self.rows, |i, j| self.at(j, i).clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(
            self.cols, other.rows,
            "dimension mismatch in matrix product"
        );
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.at(i, l);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.at(l, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(
            self.cols,
            v.len(),
            "dimension mismatch in matrix-vector product"
        );
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.at(i, j) * &v[j]).sum())
            .collect()
    }

    pub fn add(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        IntMatrix::from_fn(self.rows, self.cols, |i, j| self.at(i, j) + other.at(i, j))
    }

    pub fn sub(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        IntMatrix::from_fn(self.rows, self.cols, |i, j| self.at(i, j) - other.at(i, j))
    }

    pub fn scale(&self, c: &BigInt) -> IntMatrix {
        IntMatrix::from_fn(self.rows, self.cols, |i, j| self.at(i, j) * c)
    }

    /// Reduce entry (i, j) into `[0, moduli[i])`; row i of an endomorphism of
    /// ⊕ Z/dᵢ is only meaningful modulo dᵢ.
    pub fn reduced_rows_mod(&self, moduli: &[BigInt]) -> IntMatrix {
        assert_eq!(self.rows, moduli.len());
        IntMatrix::from_fn(self.rows, self.cols, |i, j| {
            self.at(i, j).mod_floor(&moduli[i])
        })
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert!(self.is_square(), "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a: Vec<Vec<BigInt>> = (0..n).map(|i| self.column_major_row(i)).collect();
        let mut sign = 1i32;
        let mut prev = BigInt::one();
        for t in 0..n - 1 {
            if a[t][t].is_zero() {
                match (t + 1..n).find(|&i| !a[i][t].is_zero()) {
                    Some(i) => {
                        a.swap(t, i);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in t + 1..n {
                for j in t + 1..n {
                    let num = &a[t][t] * &a[i][j] - &a[i][t] * &a[t][j];
                    a[i][j] = num
                        .checked_div(&prev)
                        .expect("Bareiss pivot divides exactly");
                }
                a[i][t] = BigInt::zero();
            }
            prev = a[t][t].clone();
        }
        let d = a[n - 1][n - 1].clone();
        if sign < 0 {
            -d
        } else {
            d
        }
    }

    fn column_major_row(&self, i: usize) -> Vec<BigInt> {
        (0..self.cols).map(|j| self.at(i, j).clone()).collect()
    }

    pub fn render(&self) -> String {
        let rows: Vec<String> = (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| self.at(i, j).to_string())
                    .collect::<Vec<_>>()
                    .join(", ")
            })
            .collect();
        format!("[{}]", rows.join("; "))
    }
}

/// U·A·V = S with U, V unimodular and S diagonal, s₁ | s₂ | …, all sᵢ ≥ 0.
/// Only S is canonical; U and V depend on pivoting order.
#[derive(Debug, Clone)]
pub struct SmithDecomposition {
    pub s: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

pub fn smith_normal_form(a: &IntMatrix) -> SmithDecomposition {
    let full = smith_with_inverses(a);
    SmithDecomposition {
        s: full.s,
        u: full.u,
        v: full.v,
    }
}

/// Smith decomposition together with the inverses of the transforms;
/// quotient presentations need U⁻¹ and it is cheap to track alongside U.
pub(crate) struct SmithFull {
    pub s: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub u_inv: IntMatrix,
    #[allow(dead_code)]
    pub v_inv: IntMatrix,
}

pub(crate) fn smith_with_inverses(a: &IntMatrix) -> SmithFull {
    let (rows, cols) = (a.rows(), a.cols());
    let mut s = a.clone();
    let mut u = IntMatrix::identity(rows);
    let mut u_inv = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let mut v_inv = IntMatrix::identity(cols);

    // Row op on S mirrors on U; the inverse op applies to columns of U⁻¹.
    fn row_sub(m: &mut IntMatrix, i: usize, t: usize, q: &BigInt) {
        for j in 0..m.cols() {
            let x = m.at(i, j) - q * m.at(t, j);
            m.set(i, j, x);
        }
    }
    fn col_add(m: &mut IntMatrix, t: usize, i: usize, q: &BigInt) {
        for r in 0..m.rows() {
            let x = m.at(r, t) + q * m.at(r, i);
            m.set(r, t, x);
        }
    }
    fn col_sub(m: &mut IntMatrix, j: usize, t: usize, q: &BigInt) {
        for r in 0..m.rows() {
            let x = m.at(r, j) - q * m.at(r, t);
            m.set(r, j, x);
        }
    }
    fn row_add(m: &mut IntMatrix, t: usize, j: usize, q: &BigInt) {
        for c in 0..m.cols() {
            let x = m.at(t, c) + q * m.at(j, c);
            m.set(t, c, x);
        }
    }
    fn swap_rows(m: &mut IntMatrix, i: usize, j: usize) {
        for c in 0..m.cols() {
            let a = m.at(i, c).clone();
            let b = m.at(j, c).clone();
            m.set(i, c, b);
            m.set(j, c, a);
        }
    }
    fn swap_cols(m: &mut IntMatrix, i: usize, j: usize) {
        for r in 0..m.rows() {
            let a = m.at(r, i).clone();
            let b = m.at(r, j).clone();
            m.set(r, i, b);
            m.set(r, j, a);
        }
    }

    let min = rows.min(cols);
    for t in 0..min {
        'pivot: loop {
            // Smallest nonzero entry of the trailing submatrix becomes the pivot.
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if !s.at(i, j).is_zero()
                        && best
                            .map(|(bi, bj)| s.at(i, j).abs() < s.at(bi, bj).abs())
                            .unwrap_or(true)
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break 'pivot };
            if pi != t {
                swap_rows(&mut s, pi, t);
                swap_rows(&mut u, pi, t);
                swap_cols(&mut u_inv, pi, t);
            }
            if pj != t {
                swap_cols(&mut s, pj, t);
                swap_cols(&mut v, pj, t);
                swap_rows(&mut v_inv, pj, t);
            }

            let mut retry = false;
            for i in t + 1..rows {
                if s.at(i, t).is_zero() {
                    continue;
                }
                let q = s.at(i, t) / s.at(t, t);
                if !q.is_zero() {
                    row_sub(&mut s, i, t, &q);
                    row_sub(&mut u, i, t, &q);
                    col_add(&mut u_inv, t, i, &q);
                }
                if !s.at(i, t).is_zero() {
                    retry = true;
                }
            }
            if retry {
                continue 'pivot;
            }
            for j in t + 1..cols {
                if s.at(t, j).is_zero() {
                    continue;
                }
                let q = s.at(t, j) / s.at(t, t);
                if !q.is_zero() {
                    col_sub(&mut s, j, t, &q);
                    col_sub(&mut v, j, t, &q);
                    row_add(&mut v_inv, t, j, &q);
                }
                if !s.at(t, j).is_zero() {
                    retry = true;
                }
            }
            if retry {
                continue 'pivot;
            }
            // Divisibility fix-up: the pivot must divide everything that is left.
            let mut offender = None;
            'scan: for i in t + 1..rows {
                for j in t + 1..cols {
                    if !(s.at(i, j) % s.at(t, t)).is_zero() {
                        offender = Some(i);
                        break 'scan;
                    }
                }
            }
            if let Some(i) = offender {
                let one = BigInt::one();
                row_add(&mut s, t, i, &one);
                row_add(&mut u, t, i, &one);
                // inverse of (row_t += row_i) is col_i -= col_t
                col_sub(&mut u_inv, i, t, &one);
                continue 'pivot;
            }
            break 'pivot;
        }
        if s.at(t, t).is_negative() {
            for j in 0..cols {
                let x = -s.at(t, j);
                s.set(t, j, x);
            }
            for j in 0..rows {
                let x = -u.at(t, j);
                u.set(t, j, x);
            }
            for i in 0..rows {
                let x = -u_inv.at(i, t);
                u_inv.set(i, t, x);
            }
        }
    }
    SmithFull {
        s,
        u,
        v,
        u_inv,
        v_inv,
    }
}

/// Canonical column-style Hermite form of the lattice spanned by `cols`
/// (and, when `row_moduli = Some(d)`, the vectors dᵢ·eᵢ as well).
///
/// The result's columns are the canonical basis ordered by pivot row:
/// each pivot is positive, entries above a pivot vanish, and entries of a
/// pivot row in earlier columns lie in [0, pivot). With `row_moduli` the
/// lattice is full rank by construction and the result is dim × dim
/// lower-triangular; row entries are kept reduced modulo dᵢ throughout,
/// which bounds intermediate growth.
pub fn column_hermite(
    dim: usize,
    cols: &[Vec<BigInt>],
    row_moduli: Option<&[BigInt]>,
) -> IntMatrix {
    for c in cols {
        assert_eq!(c.len(), dim, "generator has wrong dimension");
    }
    if let Some(m) = row_moduli {
        assert_eq!(m.len(), dim);
        assert!(m.iter().all(|x| x.is_positive()), "moduli must be >= 1");
    }
    let mut active: Vec<Vec<BigInt>> = cols.to_vec();
    let mut placed: Vec<(usize, Vec<BigInt>)> = Vec::new();

    for row in 0..dim {
        if let Some(m) = row_moduli {
            // dᵢ·eᵢ lies in the lattice, so it may be appended at any time; it
            // reduces this row's entries without touching any other row.
            let mut reducer = vec![BigInt::zero(); dim];
            reducer[row] = m[row].clone();
            for c in active.iter_mut() {
                let q = c[row].div_floor(&m[row]);
                if !q.is_zero() {
                    c[row] -= q * &m[row];
                }
            }
            active.push(reducer);
        }
        loop {
            let mut best: Option<usize> = None;
            for (idx, c) in active.iter().enumerate() {
                if !c[row].is_zero()
                    && best
                        .map(|b| c[row].abs() < active[b][row].abs())
                        .unwrap_or(true)
                {
                    best = Some(idx);
                }
            }
            let Some(p) = best else { break };
            let mut clean = true;
            for idx in 0..active.len() {
                if idx == p || active[idx][row].is_zero() {
                    continue;
                }
                let q = &active[idx][row] / &active[p][row];
                if !q.is_zero() {
                    for r in 0..dim {
                        let x = &active[idx][r] - &q * &active[p][r];
                        active[idx][r] = x;
                    }
                }
                if !active[idx][row].is_zero() {
                    clean = false;
                }
            }
            if clean {
                let pivot = active.swap_remove(p);
                placed.push((row, pivot));
                break;
            }
        }
        active.retain(|c| c.iter().any(|x| !x.is_zero()));
    }

    placed.sort_by_key(|(row, _)| *row);
    // Normalize: positive pivots, earlier columns reduced at each pivot row.
    for a in 0..placed.len() {
        let (prow, _) = placed[a];
        if placed[a].1[prow].is_negative() {
            for x in placed[a].1.iter_mut() {
                *x = -std::mem::take(x);
            }
        }
        let pivot_col = placed[a].1.clone();
        let pivot = pivot_col[prow].clone();
        for b in 0..a {
            let q = placed[b].1[prow].div_floor(&pivot);
            if !q.is_zero() {
                for r in 0..dim {
                    let x = &placed[b].1[r] - &q * &pivot_col[r];
                    placed[b].1[r] = x;
                }
            }
        }
    }
    let cols: Vec<Vec<BigInt>> = placed.into_iter().map(|(_, c)| c).collect();
    IntMatrix::from_columns(dim, &cols)
}

/// Basis of the integer kernel {x : A·x = 0}, as a list of column vectors.
pub fn kernel_basis(a: &IntMatrix) -> Vec<Vec<BigInt>> {
    let (rows, cols) = (a.rows(), a.cols());
    let mut work: Vec<Vec<BigInt>> = a.columns();
    let mut trans: Vec<Vec<BigInt>> = (0..cols)
        .map(|j| {
            let mut e = vec![BigInt::zero(); cols];
            e[j] = BigInt::one();
            e
        })
        .collect();

    let mut used: Vec<bool> = vec![false; cols];
    for row in 0..rows {
        loop {
            let mut best: Option<usize> = None;
            for idx in 0..cols {
                if used[idx] || work[idx][row].is_zero() {
                    continue;
                }
                if best
                    .map(|b| work[idx][row].abs() < work[b][row].abs())
                    .unwrap_or(true)
                {
                    best = Some(idx);
                }
            }
            let Some(p) = best else { break };
            let mut clean = true;
            for idx in 0..cols {
                if idx == p || used[idx] || work[idx][row].is_zero() {
                    continue;
                }
                let q = &work[idx][row] / &work[p][row];
                if !q.is_zero() {
                    for r in 0..rows {
                        let x = &work[idx][r] - &q * &work[p][r];
                        work[idx][r] = x;
                    }
                    for r in 0..cols {
                        let x = &trans[idx][r] - &q * &trans[p][r];
                        trans[idx][r] = x;
                    }
                }
                if !work[idx][row].is_zero() {
                    clean = false;
                }
            }
            if clean {
                used[p] = true;
                break;
            }
        }
    }
    (0..cols)
        .filter(|&idx| work[idx].iter().all(|x| x.is_zero()))
        .map(|idx| trans[idx].clone())
        .collect()
}

/// Inverse of a unimodular integer matrix.
pub fn inverse_unimodular(m: &IntMatrix) -> Result<IntMatrix> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch {
            expected: m.rows(),
            found: m.cols(),
        });
    }
    let full = smith_with_inverses(m);
    let n = m.rows();
    for i in 0..n {
        if !full.s.at(i, i).is_one() {
            return Err(Error::NotUnimodular);
        }
    }
    // U·M·V = I  =>  M⁻¹ = V·U
    Ok(full.v.mul(&full.u))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_traits::{One, Signed, Zero};
    use proptest::prelude::*;

    fn divisibility_chain(s: &IntMatrix) -> bool {
        let min = s.rows().min(s.cols());
        for i in 0..min.saturating_sub(1) {
            let a = s.at(i, i);
            let b = s.at(i + 1, i + 1);
            if a.is_zero() {
                if !b.is_zero() {
                    return false;
                }
            } else if !(b % a).is_zero() {
                return false;
            }
        }
        true
    }

    fn is_diagonal(s: &IntMatrix) -> bool {
        (0..s.rows()).all(|i| (0..s.cols()).all(|j| i == j || s.at(i, j).is_zero()))
    }

    #[test]
    fn snf_identity() {
        let a = IntMatrix::identity(3);
        let d = smith_normal_form(&a);
        assert_eq!(d.s, IntMatrix::identity(3));
    }

    #[test]
    fn snf_zero() {
        let a = IntMatrix::zeros(2, 2);
        let d = smith_normal_form(&a);
        assert!(d.s.is_zero());
        assert_eq!(d.u.determinant().abs(), BigInt::one());
        assert_eq!(d.v.determinant().abs(), BigInt::one());
    }

    /// Oracle for 2×2 invariant factors: s₁ = gcd of entries,
    /// s₂ = gcd of 2×2 minors divided by s₁.
    fn snf_2x2_oracle(m: &[[i64; 2]; 2]) -> (BigInt, BigInt) {
        let entries = [m[0][0], m[0][1], m[1][0], m[1][1]];
        let s1 = entries
            .iter()
            .fold(0i64, |acc, &x| num_integer::gcd(acc, x));
        let minor = (m[0][0] * m[1][1] - m[0][1] * m[1][0]).abs();
        (BigInt::from(s1), BigInt::from(minor / s1))
    }

    #[test]
    fn snf_2x2_against_minor_oracle() {
        let m = [[2i64, 4], [6, 8]];
        let (s1, s2) = snf_2x2_oracle(&m);
        assert_eq!((s1.clone(), s2.clone()), (BigInt::from(2), BigInt::from(4)));
        let a = IntMatrix::from_rows(&[vec![2, 4], vec![6, 8]]);
        let d = smith_normal_form(&a);
        assert_eq!(d.s.at(0, 0), &s1);
        assert_eq!(d.s.at(1, 1), &s2);
        assert_eq!(d.u.mul(&a).mul(&d.v), d.s);
    }

    #[test]
    fn bareiss_determinant_small() {
        let a = IntMatrix::from_rows(&[vec![2, 0, 1], vec![1, 3, 2], vec![0, 1, -1]]);
        // cofactor expansion oracle
        assert_eq!(
            a.determinant(),
            BigInt::from(2 * (3 * -1 - 2 * 1) - 0 + 1 * (1 * 1 - 0))
        );
    }

    #[test]
    fn kernel_of_rank_one() {
        let a = IntMatrix::from_rows(&[vec![2, 4]]);
        let ker = kernel_basis(&a);
        assert_eq!(ker.len(), 1);
        let v = &ker[0];
        assert!((BigInt::from(2) * &v[0] + BigInt::from(4) * &v[1]).is_zero());
        assert!(!v.iter().all(|x| x.is_zero()));
    }

    #[test]
    fn hermite_canonical_form_shape() {
        // span{(1,1)} + diag(2,2)·Z² inside Z²
        let h = column_hermite(
            2,
            &[vec![BigInt::one(), BigInt::one()]],
            Some(&[BigInt::from(2), BigInt::from(2)]),
        );
        assert_eq!(h, IntMatrix::from_rows(&[vec![1, 0], vec![1, 2]]));
    }

    #[test]
    fn echelon_form_is_canonical_for_rank_deficient_lattices() {
        // two generating sets of the same rank-2 lattice in Z^3
        let b = |x: i64| BigInt::from(x);
        let g1 = vec![vec![b(2), b(0), b(4)], vec![b(0), b(3), b(6)]];
        let g2 = vec![
            vec![b(2), b(3), b(10)], // g1[0] + g1[1]
            vec![b(0), b(3), b(6)],  // g1[1]
            vec![b(6), b(6), b(24)], // 3·g1[0] + 2·g1[1]
        ];
        let h1 = column_hermite(3, &g1, None);
        let h2 = column_hermite(3, &g2, None);
        assert_eq!(h1, h2);
        assert_eq!(h1.cols(), 2);
    }

    #[test]
    fn inverse_of_unimodular() {
        let m = IntMatrix::from_rows(&[vec![1, 2], vec![0, 1]]);
        let inv = inverse_unimodular(&m).unwrap();
        assert_eq!(m.mul(&inv), IntMatrix::identity(2));
        assert_eq!(inv.mul(&m), IntMatrix::identity(2));
    }

    proptest! {
        #[test]
        fn snf_reconstructs(rows in 1usize..5, cols in 1usize..5,
                            seed in proptest::collection::vec(-50i64..50, 16)) {
            let a = IntMatrix::from_fn(rows, cols, |i, j| BigInt::from(seed[(i * cols + j) % seed.len()]));
            let d = smith_normal_form(&a);
            prop_assert_eq!(d.u.mul(&a).mul(&d.v), d.s.clone());
            prop_assert_eq!(d.u.determinant().abs(), BigInt::one());
            prop_assert_eq!(d.v.determinant().abs(), BigInt::one());
            prop_assert!(is_diagonal(&d.s));
            prop_assert!(divisibility_chain(&d.s));
            prop_assert!((0..rows.min(cols)).all(|i| !d.s.at(i, i).is_negative()));
        }

        #[test]
        fn kernel_vectors_annihilate(rows in 1usize..4, cols in 1usize..5,
                                     seed in proptest::collection::vec(-9i64..9, 20)) {
            let a = IntMatrix::from_fn(rows, cols, |i, j| BigInt::from(seed[(i * cols + j) % seed.len()]));
            for v in kernel_basis(&a) {
                prop_assert!(a.mul_vec(&v).iter().all(|x| x.is_zero()));
            }
        }
    }
}
