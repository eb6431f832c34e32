//! Dense integer matrices and the exact integer linear algebra behind every
//! lattice computation: Smith and Hermite normal forms, determinants,
//! integer kernels and rational congruence diagonalization.
//!
//! Lattice data is stored as `i64`; every derived quantity is computed with
//! `BigInt` and converted back with an explicit overflow check.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Row-major integer matrix.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn diagonal(entries: &[i64]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, &d) in entries.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    /// Builds a matrix from rows; all rows must have the same length.
    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Ok(IntMatrix { rows: r, cols: c, data: rows.iter().flatten().copied().collect() })
    }

    /// Builds a matrix whose columns are the given vectors (all of length `rows`).
    pub fn from_columns(rows: usize, columns: &[Vec<i64>]) -> Result<Self> {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            if col.len() != rows {
                return Err(Error::BadLength { expected: rows, got: col.len() });
            }
            for (i, &x) in col.iter().enumerate() {
                m[(i, j)] = x;
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn columns(&self) -> Vec<Vec<i64>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    /// Checked product.
    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc: i128 = 0;
                for k in 0..self.cols {
                    acc += self[(i, k)] as i128 * other[(k, j)] as i128;
                }
                out[(i, j)] = i64::try_from(acc).map_err(|_| Error::Overflow("matrix product"))?;
            }
        }
        Ok(out)
    }

    /// Checked matrix-vector product.
    pub fn mul_vec(&self, v: &[i64]) -> Result<Vec<i64>> {
        if v.len() != self.cols {
            return Err(Error::BadLength { expected: self.cols, got: v.len() });
        }
        (0..self.rows)
            .map(|i| {
                let acc: i128 = self.row(i).iter().zip(v).map(|(&a, &b)| a as i128 * b as i128).sum();
                i64::try_from(acc).map_err(|_| Error::Overflow("matrix-vector product"))
            })
            .collect()
    }

    /// `aᵀ · self · b` for a square `self`.
    pub fn bilinear(&self, a: &[i64], b: &[i64]) -> i128 {
        let mut acc = 0i128;
        for i in 0..self.rows {
            if a[i] == 0 {
                continue;
            }
            let mut row = 0i128;
            for j in 0..self.cols {
                row += self[(i, j)] as i128 * b[j] as i128;
            }
            acc += a[i] as i128 * row;
        }
        acc
    }

    /// Congruence transform `basisᵀ · self · basis`.
    pub fn congruence(&self, basis: &IntMatrix) -> Result<IntMatrix> {
        basis.transpose().mul(self)?.mul(basis)
    }

    pub fn block_diagonal(blocks: &[&IntMatrix]) -> IntMatrix {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let m: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(n, m);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out[(r0 + i, c0 + j)] = b[(i, j)];
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    pub fn scale(&self, n: i64) -> Result<IntMatrix> {
        let data = self
            .data
            .iter()
            .map(|&x| x.checked_mul(n).ok_or(Error::Overflow("scaling")))
            .collect::<Result<Vec<_>>>()?;
        Ok(IntMatrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn to_big(&self) -> BigMatrix {
        (0..self.rows).map(|i| self.row(i).iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    pub fn from_big(m: &BigMatrix) -> Result<IntMatrix> {
        let rows: Vec<Vec<i64>> = m
            .iter()
            .map(|r| r.iter().map(|x| x.to_i64().ok_or(Error::Overflow("BigInt to i64"))).collect())
            .collect::<Result<_>>()?;
        if rows.is_empty() {
            return Ok(IntMatrix::zeros(0, 0));
        }
        IntMatrix::from_rows(&rows)
    }

    pub fn det(&self) -> Result<BigInt> {
        if !self.is_square() {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        Ok(det_big(&self.to_big()))
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = i64;
    fn index(&self, (i, j): (usize, usize)) -> &i64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i64 {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.to_rows()).finish()
    }
}

/// Arbitrary-precision matrix, row-major `Vec<Vec<_>>`.
pub type BigMatrix = Vec<Vec<BigInt>>;

pub fn big_identity(n: usize) -> BigMatrix {
    (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect()
}

pub fn big_zeros(r: usize, c: usize) -> BigMatrix {
    vec![vec![BigInt::zero(); c]; r]
}

pub fn big_mul(a: &BigMatrix, b: &BigMatrix) -> BigMatrix {
    let n = a.len();
    let k = b.len();
    let m = b.first().map_or(0, Vec::len);
    let mut out = big_zeros(n, m);
    for i in 0..n {
        for t in 0..k {
            if a[i][t].is_zero() {
                continue;
            }
            for j in 0..m {
                out[i][j] += &a[i][t] * &b[t][j];
            }
        }
    }
    out
}

pub fn big_mul_vec(a: &BigMatrix, v: &[BigInt]) -> Vec<BigInt> {
    a.iter().map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum()).collect()
}

pub fn big_transpose(a: &BigMatrix) -> BigMatrix {
    let r = a.len();
    let c = a.first().map_or(0, Vec::len);
    (0..c).map(|j| (0..r).map(|i| a[i][j].clone()).collect()).collect()
}

pub fn big_column(a: &BigMatrix, j: usize) -> Vec<BigInt> {
    a.iter().map(|row| row[j].clone()).collect()
}

/// Bareiss fraction-free determinant.
pub fn det_big(m: &BigMatrix) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}

/// Result of a Smith normal form computation: `u · m · v = d`.
#[derive(Clone, Debug)]
pub struct SnfResult {
    /// Diagonal of `d` (length `min(rows, cols)`), non-negative, each
    /// entry dividing the next; zeros trail.
    pub diagonal: Vec<BigInt>,
    pub u: BigMatrix,
    pub u_inv: BigMatrix,
    pub v: BigMatrix,
    rows: usize,
    cols: usize,
}

impl SnfResult {
    /// The full diagonal matrix `d`.
    pub fn d(&self) -> BigMatrix {
        let mut d = big_zeros(self.rows, self.cols);
        for (i, x) in self.diagonal.iter().enumerate() {
            d[i][i] = x.clone();
        }
        d
    }

    pub fn rank(&self) -> usize {
        self.diagonal.iter().filter(|x| !x.is_zero()).count()
    }

    /// Non-zero diagonal entries.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.diagonal.iter().filter(|x| !x.is_zero()).cloned().collect()
    }
}

/// Smith normal form with deterministic pivoting (smallest absolute value,
/// ties broken lexicographically by position).
pub fn snf(m: &IntMatrix) -> SnfResult {
    snf_big(&m.to_big(), m.rows(), m.cols())
}

pub fn snf_big(m: &BigMatrix, rows: usize, cols: usize) -> SnfResult {
    let mut a = m.clone();
    let mut u = big_identity(rows);
    let mut u_inv = big_identity(rows);
    let mut v = big_identity(cols);
    let steps = rows.min(cols);

    for t in 0..steps {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if a[i][j].is_zero() {
                        continue;
                    }
                    let better = match best {
                        None => true,
                        Some((bi, bj)) => a[i][j].abs() < a[bi][bj].abs(),
                    };
                    if better {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break };
            if pi != t {
                a.swap(pi, t);
                u.swap(pi, t);
                for row in u_inv.iter_mut() {
                    row.swap(pi, t);
                }
            }
            if pj != t {
                for row in a.iter_mut() {
                    row.swap(pj, t);
                }
                for row in v.iter_mut() {
                    row.swap(pj, t);
                }
            }

            let mut dirty = false;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                row_axpy(&mut a, i, t, &q);
                row_axpy(&mut u, i, t, &q);
                // u_inv ← u_inv · (I + q e_i e_tᵀ): column t += q · column i
                for row in u_inv.iter_mut() {
                    let add = &q * &row[i];
                    row[t] += add;
                }
                if !a[i][t].is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                col_axpy(&mut a, j, t, &q);
                col_axpy(&mut v, j, t, &q);
                if !a[t][j].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // divisibility: fold an offending row into the pivot row
            let p = a[t][t].clone();
            let offender = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !a[i][j].is_multiple_of(&p)));
            match offender {
                Some(i) => {
                    // row t += row i
                    let ri = a[i].clone();
                    for (x, y) in a[t].iter_mut().zip(ri) {
                        *x += y;
                    }
                    let ui = u[i].clone();
                    for (x, y) in u[t].iter_mut().zip(ui) {
                        *x += y;
                    }
                    // u_inv ← u_inv · (I − e_t e_iᵀ): column i −= column t
                    for row in u_inv.iter_mut() {
                        let sub = row[t].clone();
                        row[i] -= sub;
                    }
                }
                None => break,
            }
        }
        if t < rows && t < cols && a[t][t].is_negative() {
            for x in a[t].iter_mut() {
                *x = -x.clone();
            }
            for x in u[t].iter_mut() {
                *x = -x.clone();
            }
            for row in u_inv.iter_mut() {
                row[t] = -row[t].clone();
            }
        }
    }

    let diagonal = (0..steps).map(|i| a[i][i].clone()).collect();
    SnfResult { diagonal, u, u_inv, v, rows, cols }
}

/// row_i −= q · row_t
fn row_axpy(a: &mut BigMatrix, i: usize, t: usize, q: &BigInt) {
    let rt = a[t].clone();
    for (x, y) in a[i].iter_mut().zip(rt.iter()) {
        *x -= q * y;
    }
}

/// col_j −= q · col_t
fn col_axpy(a: &mut BigMatrix, j: usize, t: usize, q: &BigInt) {
    for row in a.iter_mut() {
        let sub = q * &row[t];
        row[j] -= sub;
    }
}

/// Column-style Hermite normal form of the lattice spanned by the columns of
/// `gens` (an `n × m` matrix of rank `n`). Returns an upper-triangular `n × n`
/// basis with positive diagonal and entries above the diagonal reduced into
/// `[0, pivot)`.
pub fn hnf_basis(gens: &BigMatrix, n: usize) -> Result<BigMatrix> {
    let mut cols: Vec<Vec<BigInt>> = big_transpose(gens);
    cols.retain(|c| c.iter().any(|x| !x.is_zero()));
    let mut basis: Vec<Option<Vec<BigInt>>> = vec![None; n];
    for r in (0..n).rev() {
        // gcd-combine all remaining columns on row r
        loop {
            let nz: Vec<usize> = (0..cols.len()).filter(|&j| !cols[j][r].is_zero()).collect();
            if nz.len() <= 1 {
                break;
            }
            let p = *nz.iter().min_by(|&&x, &&y| cols[x][r].abs().cmp(&cols[y][r].abs()).then(x.cmp(&y))).unwrap();
            for &j in &nz {
                if j == p {
                    continue;
                }
                let q = cols[j][r].div_floor(&cols[p][r]);
                let cp = cols[p].clone();
                for (x, y) in cols[j].iter_mut().zip(cp.iter()) {
                    *x -= &q * y;
                }
            }
        }
        let Some(p) = (0..cols.len()).find(|&j| !cols[j][r].is_zero()) else {
            return Err(Error::DependentVectors);
        };
        let mut c = cols.remove(p);
        if c[r].is_negative() {
            c.iter_mut().for_each(|x| *x = -x.clone());
        }
        basis[r] = Some(c);
        cols.retain(|c| c.iter().any(|x| !x.is_zero()));
    }
    let mut b: Vec<Vec<BigInt>> = basis.into_iter().map(|c| c.expect("pivot")).collect();
    for j in 0..n {
        for i in (0..j).rev() {
            let q = b[j][i].div_floor(&b[i][i]);
            if q.is_zero() {
                continue;
            }
            let bi = b[i].clone();
            for (x, y) in b[j].iter_mut().zip(bi.iter()) {
                *x -= &q * y;
            }
        }
    }
    Ok(big_transpose(&b))
}

/// Solves `basis · c = v` for an upper-triangular basis, returning `None` when
/// `v` is not in the lattice.
pub fn solve_upper(basis: &BigMatrix, v: &[BigInt]) -> Option<Vec<BigInt>> {
    let n = basis.len();
    let mut c = vec![BigInt::zero(); n];
    for i in (0..n).rev() {
        let mut r = v[i].clone();
        for j in i + 1..n {
            r -= &basis[i][j] * &c[j];
        }
        let (q, rem) = r.div_rem(&basis[i][i]);
        if !rem.is_zero() {
            return None;
        }
        c[i] = q;
    }
    Some(c)
}

/// Saturated basis (as columns) of `{x ∈ Zⁿ : m · x = 0}` for an `r × n` matrix.
pub fn integer_kernel(m: &BigMatrix, cols: usize) -> BigMatrix {
    let rows = m.len();
    let s = snf_big(m, rows, cols);
    let rank = s.rank();
    let kernel: Vec<Vec<BigInt>> = (rank..cols).map(|j| big_column(&s.v, j)).collect();
    if kernel.is_empty() {
        return vec![Vec::new(); cols];
    }
    big_transpose(&kernel)
}

/// Rational inverse of a non-singular integer matrix.
pub fn rational_inverse(m: &IntMatrix) -> Result<Vec<Vec<BigRational>>> {
    let n = m.rows();
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..2 * n)
                .map(|j| {
                    if j < n {
                        BigRational::from_integer(BigInt::from(m[(i, j)]))
                    } else if j - n == i {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect()
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !a[i][c].is_zero()).ok_or(Error::Degenerate)?;
        a.swap(p, c);
        let piv = a[c][c].clone();
        for x in a[c].iter_mut() {
            *x = &*x / &piv;
        }
        for i in 0..n {
            if i == c || a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].clone();
            let rc = a[c].clone();
            for (x, y) in a[i].iter_mut().zip(rc.iter()) {
                *x -= &f * y;
            }
        }
    }
    Ok(a.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Inertia `(positive, negative, zero)` of a symmetric matrix by exact
/// symmetric Gaussian elimination over the rationals. A zero diagonal pivot
/// with a non-zero off-diagonal partner is eliminated as a hyperbolic 2×2
/// block contributing one positive and one negative direction.
pub fn inertia(m: &IntMatrix) -> (usize, usize, usize) {
    let mut s: Vec<Vec<BigRational>> = (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| BigRational::from_integer(BigInt::from(m[(i, j)]))).collect())
        .collect();
    let (mut pos, mut neg, mut zero) = (0, 0, 0);
    while !s.is_empty() {
        let n = s.len();
        if let Some(i) = (0..n).find(|&i| !s[i][i].is_zero()) {
            let d = s[i][i].clone();
            if d.is_positive() {
                pos += 1;
            } else {
                neg += 1;
            }
            let col: Vec<BigRational> = (0..n).map(|k| s[k][i].clone()).collect();
            let mut next = Vec::with_capacity(n - 1);
            for r in (0..n).filter(|&r| r != i) {
                let row: Vec<BigRational> = (0..n)
                    .filter(|&c| c != i)
                    .map(|c| &s[r][c] - &col[r] * &col[c] / &d)
                    .collect();
                next.push(row);
            }
            s = next;
            continue;
        }
        let off = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).find(|&(i, j)| i < j && !s[i][j].is_zero());
        match off {
            Some((i, j)) => {
                pos += 1;
                neg += 1;
                // Schur complement of P = [[0, b], [b, 0]]: S' = S − B P⁻¹ Bᵀ,
                // P⁻¹ = [[0, 1/b], [1/b, 0]].
                let b = s[i][j].clone();
                let rest: Vec<usize> = (0..n).filter(|&k| k != i && k != j).collect();
                let next: Vec<Vec<BigRational>> = rest
                    .iter()
                    .map(|&r| {
                        rest.iter()
                            .map(|&c| {
                                let corr = (&s[r][i] * &s[c][j] + &s[r][j] * &s[c][i]) / &b;
                                &s[r][c] - corr
                            })
                            .collect()
                    })
                    .collect();
                s = next;
            }
            None => {
                zero += n;
                break;
            }
        }
    }
    (pos, neg, zero)
}

pub fn gcd_i64(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

pub fn lcm_i64(a: i64, b: i64) -> i64 {
    a.lcm(&b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(rows: &[&[i64]]) -> BigMatrix {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    fn check_snf(m: &IntMatrix) -> SnfResult {
        let s = snf(m);
        let prod = big_mul(&big_mul(&s.u, &m.to_big()), &s.v);
        assert_eq!(prod, s.d());
        assert_eq!(big_mul(&s.u, &s.u_inv), big_identity(m.rows()));
        assert_eq!(det_big(&s.u).abs(), BigInt::one());
        assert_eq!(det_big(&s.v).abs(), BigInt::one());
        let f = s.invariant_factors();
        for w in f.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]));
        }
        s
    }

    #[test]
    fn snf_examples() {
        let s = check_snf(&IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]).unwrap());
        assert_eq!(s.diagonal, vec![BigInt::from(1), BigInt::from(1)]);
        let s = check_snf(&IntMatrix::diagonal(&[2, 4]));
        assert_eq!(s.diagonal, vec![BigInt::from(2), BigInt::from(4)]);
        let s = check_snf(&IntMatrix::from_rows(&[vec![4, 2], vec![2, 4]]).unwrap());
        assert_eq!(s.diagonal, vec![BigInt::from(2), BigInt::from(6)]);
    }

    #[test]
    fn snf_rectangular_and_divisibility() {
        check_snf(&IntMatrix::from_rows(&[vec![6, 4, 0], vec![0, 10, 15]]).unwrap());
        check_snf(&IntMatrix::diagonal(&[6, 4]));
        let s = check_snf(&IntMatrix::diagonal(&[3, 2]));
        assert_eq!(s.diagonal, vec![BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn hnf_keeps_scaled_basis() {
        let gens = big(&[&[2, 0, 1], &[0, 2, 1]]);
        let b = hnf_basis(&gens, 2).unwrap();
        assert_eq!(b, big(&[&[2, 1], &[0, 1]]));
        assert_eq!(solve_upper(&b, &[BigInt::from(1), BigInt::from(1)]), Some(vec![BigInt::zero(), BigInt::one()]));
        assert_eq!(solve_upper(&b, &[BigInt::from(1), BigInt::from(0)]), None);
    }

    #[test]
    fn inertia_handles_hyperbolic_pivots() {
        assert_eq!(inertia(&IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]).unwrap()), (1, 1, 0));
        assert_eq!(inertia(&IntMatrix::diagonal(&[2, -3, 0])), (1, 1, 1));
        let m = IntMatrix::from_rows(&[vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 0]]).unwrap();
        assert_eq!(inertia(&m), (1, 1, 1));
    }

    #[test]
    fn kernel_is_saturated() {
        let m = big(&[&[2, 4, 6]]);
        let k = integer_kernel(&m, 3);
        assert_eq!(k.len(), 3);
        assert_eq!(k[0].len(), 2);
        let prod = big_mul(&m, &k);
        assert!(prod.iter().flatten().all(Zero::is_zero));
        let s = snf_big(&k, 3, 2);
        assert!(s.invariant_factors().iter().all(One::is_one));
    }

    #[test]
    fn determinant() {
        let m = IntMatrix::from_rows(&[vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]]).unwrap();
        assert_eq!(m.det().unwrap(), BigInt::from(4));
        assert_eq!(IntMatrix::zeros(0, 0).det().unwrap(), BigInt::one());
    }
}
