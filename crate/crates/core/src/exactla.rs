//! Dense linear algebra over the rationals with arbitrary-precision entries.
//!
//! Every subspace is stored by its reduced row echelon basis, so two
//! subspaces are equal exactly when their stored bases are equal.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}x{}]", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "{}", if r == 0 { " " } else { "; " })?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
        }
        Ok(())
    }
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            data: vec![Q::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Q::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Q>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::ShapeMismatch("ragged rows".into()));
        }
        Ok(RationalMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Builds a matrix with explicit shape, so 0-row matrices keep their column count.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Q>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "{} entries for a {}x{} matrix",
                data.len(),
                rows,
                cols
            )));
        }
        Ok(RationalMatrix { rows, cols, data })
    }

    pub fn from_i64(rows: usize, cols: usize, entries: &[i64]) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count");
        RationalMatrix {
            rows,
            cols,
            data: entries.iter().map(|&x| q(x)).collect(),
        }
    }

    pub fn column(v: &[Q]) -> Self {
        RationalMatrix {
            rows: v.len(),
            cols: 1,
            data: v.to_vec(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, r: usize, c: usize) -> &Q {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Q) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Q] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col(&self, c: usize) -> Vec<Q> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn entries(&self) -> &[Q] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.data[idx] += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Q]) -> Result<Vec<Q>> {
        if self.cols != v.len() {
            return Err(Error::ShapeMismatch(format!(
                "cannot apply {}x{} to a vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|r| {
                let mut acc = Q::zero();
                for (a, b) in self.row(r).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += a * b;
                    }
                }
                acc
            })
            .collect())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&Q, &Q) -> Q) -> Result<Self> {
        if self.shape() != other.shape() {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| f(a, b))
            .collect();
        Ok(RationalMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn scale(&self, s: &Q) -> Self {
        RationalMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    /// Kronecker product; row index `i * other.rows + k`, column index `j * other.cols + l`.
    pub fn kron(&self, other: &Self) -> Self {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut out = Self::zeros(rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        let b = other.get(k, l);
                        if b.is_zero() {
                            continue;
                        }
                        out.set(i * other.rows + k, j * other.cols + l, a * b);
                    }
                }
            }
        }
        out
    }

    /// Block diagonal matrix `diag(self, other)`.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.rows + other.rows, self.cols + other.cols);
        out.paste(0, 0, self);
        out.paste(self.rows, self.cols, other);
        out
    }

    pub fn block_diagonal(blocks: &[RationalMatrix]) -> Self {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(rows, cols);
        let (mut r, mut c) = (0, 0);
        for b in blocks {
            out.paste(r, c, b);
            r += b.rows;
            c += b.cols;
        }
        out
    }

    pub fn paste(&mut self, r0: usize, c0: usize, block: &Self) {
        for r in 0..block.rows {
            for c in 0..block.cols {
                self.set(r0 + r, c0 + c, block.get(r, c).clone());
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        let mut out = Self::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                out.set(r, c, self.get(r0 + r, c0 + c).clone());
            }
        }
        out
    }

    pub fn hstack(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows {
            return Err(Error::ShapeMismatch("hstack row counts differ".into()));
        }
        let mut out = Self::zeros(self.rows, self.cols + other.cols);
        out.paste(0, 0, self);
        out.paste(0, self.cols, other);
        Ok(out)
    }

    pub fn vstack(&self, other: &Self) -> Result<Self> {
        if self.cols != other.cols {
            return Err(Error::ShapeMismatch("vstack column counts differ".into()));
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(RationalMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    /// Reduced row echelon form together with the pivot columns.
    pub fn rref(&self) -> (RationalMatrix, Vec<usize>) {
        let mut rows: Vec<Vec<Q>> = (0..self.rows).map(|r| self.row(r).to_vec()).collect();
        let mut pivots = Vec::new();
        let mut lead = 0;
        for c in 0..self.cols {
            if lead == rows.len() {
                break;
            }
            let Some(p) = (lead..rows.len()).find(|&r| !rows[r][c].is_zero()) else {
                continue;
            };
            rows.swap(lead, p);
            let inv = rows[lead][c].recip();
            for x in rows[lead][c..].iter_mut() {
                if !x.is_zero() {
                    *x *= &inv;
                }
            }
            let pivot_row = rows[lead].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r == lead || row[c].is_zero() {
                    continue;
                }
                let factor = row[c].clone();
                for (x, p) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                    if !p.is_zero() {
                        *x -= &factor * p;
                    }
                }
            }
            pivots.push(c);
            lead += 1;
        }
        let data = rows.into_iter().flatten().collect();
        (
            RationalMatrix {
                rows: self.rows,
                cols: self.cols,
                data,
            },
            pivots,
        )
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn is_injective(&self) -> bool {
        self.rank() == self.cols
    }

    pub fn is_surjective(&self) -> bool {
        self.rank() == self.rows
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// Null space as a subspace of `Q^cols`.
    pub fn kernel(&self) -> Subspace {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut vectors = Vec::with_capacity(free.len());
        for &f in &free {
            let mut v = vec![Q::zero(); self.cols];
            v[f] = Q::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -r.get(i, f).clone();
            }
            vectors.push(v);
        }
        Subspace::span(self.cols, &vectors)
    }

    /// Column space as a subspace of `Q^rows`.
    pub fn image(&self) -> Subspace {
        let vectors: Vec<Vec<Q>> = (0..self.cols).map(|c| self.col(c)).collect();
        Subspace::span(self.rows, &vectors)
    }

    /// Some `x` with `self * x = b`, or `None` when the system is inconsistent.
    pub fn solve(&self, b: &[Q]) -> Result<Option<Vec<Q>>> {
        if b.len() != self.rows {
            return Err(Error::ShapeMismatch("right-hand side length".into()));
        }
        let aug = self.hstack(&RationalMatrix::column(b))?;
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![Q::zero(); self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = r.get(i, self.cols).clone();
        }
        Ok(Some(x))
    }

    pub fn inverse(&self) -> Option<RationalMatrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        if n == 0 {
            return Some(Self::identity(0));
        }
        let aug = self.hstack(&Self::identity(n)).ok()?;
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(r.block(0, n, n, n))
    }
}

/// A subspace of `Q^ambient`, stored by its reduced row echelon basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: RationalMatrix,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: RationalMatrix::zeros(0, ambient),
            pivots: vec![],
        }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: RationalMatrix::identity(ambient),
            pivots: (0..ambient).collect(),
        }
    }

    pub fn span(ambient: usize, vectors: &[Vec<Q>]) -> Self {
        let data: Vec<Q> = vectors
            .iter()
            .inspect(|v| assert_eq!(v.len(), ambient, "vector length"))
            .flat_map(|v| v.iter().cloned())
            .collect();
        let m = RationalMatrix {
            rows: vectors.len(),
            cols: ambient,
            data,
        };
        Self::from_row_space(&m)
    }

    /// The span of the rows of `m`.
    pub fn from_row_space(m: &RationalMatrix) -> Self {
        let (r, pivots) = m.rref();
        let basis = r.block(0, 0, pivots.len(), m.cols);
        Subspace {
            ambient: m.cols,
            basis,
            pivots,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    /// Basis vectors as rows, in reduced echelon form.
    pub fn basis(&self) -> &RationalMatrix {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn basis_vector(&self, i: usize) -> Vec<Q> {
        self.basis.row(i).to_vec()
    }

    /// Coordinates of `v` in the echelon basis, or `None` if `v` is outside.
    pub fn coordinates(&self, v: &[Q]) -> Option<Vec<Q>> {
        assert_eq!(v.len(), self.ambient, "vector length");
        let coords: Vec<Q> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let mut residual = v.to_vec();
        for (i, c) in coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (x, b) in residual.iter_mut().zip(self.basis.row(i)) {
                if !b.is_zero() {
                    *x -= c * b;
                }
            }
        }
        residual.iter().all(Zero::is_zero).then_some(coords)
    }

    pub fn contains(&self, v: &[Q]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.ambient == other.ambient && (0..self.dim()).all(|i| other.contains(self.basis.row(i)))
    }

    /// `ambient x dim` matrix whose columns are the basis vectors.
    pub fn inclusion(&self) -> RationalMatrix {
        self.basis.transpose()
    }

    /// Coordinates of the columns of `m` (each inside this subspace) as a `dim x m.cols` matrix.
    pub fn coordinates_of_columns(&self, m: &RationalMatrix) -> Result<RationalMatrix> {
        if m.rows() != self.ambient {
            return Err(Error::ShapeMismatch(
                "column length differs from ambient".into(),
            ));
        }
        let mut out = RationalMatrix::zeros(self.dim(), m.cols());
        for c in 0..m.cols() {
            let coords = self
                .coordinates(&m.col(c))
                .ok_or_else(|| Error::Internal(format!("column {c} is not in the subspace")))?;
            for (r, x) in coords.into_iter().enumerate() {
                out.set(r, c, x);
            }
        }
        Ok(out)
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        if self.ambient != other.ambient {
            return Err(Error::ShapeMismatch("ambient dimensions differ".into()));
        }
        Ok(Self::from_row_space(&self.basis.vstack(&other.basis)?))
    }

    /// The non-pivot coordinates, which index a complement of this subspace.
    pub fn free_coordinates(&self) -> Vec<usize> {
        (0..self.ambient)
            .filter(|c| !self.pivots.contains(c))
            .collect()
    }

    /// Surjection `Q^ambient -> Q^(ambient - dim)` whose kernel is exactly this subspace.
    pub fn quotient_map(&self) -> RationalMatrix {
        let free = self.free_coordinates();
        let mut out = RationalMatrix::zeros(free.len(), self.ambient);
        for j in 0..self.ambient {
            // Residual of e_j after subtracting its pivot components.
            let mut e = vec![Q::zero(); self.ambient];
            e[j] = Q::one();
            if let Some(i) = self.pivots.iter().position(|&p| p == j) {
                for (x, b) in e.iter_mut().zip(self.basis.row(i)) {
                    *x -= b;
                }
            }
            for (row, &f) in free.iter().enumerate() {
                out.set(row, j, e[f].clone());
            }
        }
        out
    }

    /// A right inverse of [`Subspace::quotient_map`].
    pub fn quotient_section(&self) -> RationalMatrix {
        let free = self.free_coordinates();
        let mut out = RationalMatrix::zeros(self.ambient, free.len());
        for (j, &f) in free.iter().enumerate() {
            out.set(f, j, Q::one());
        }
        out
    }
}

pub fn rref(m: &RationalMatrix) -> (RationalMatrix, Vec<usize>) {
    m.rref()
}

pub fn kernel_basis(m: &RationalMatrix) -> Subspace {
    m.kernel()
}

pub fn image_basis(m: &RationalMatrix) -> Subspace {
    m.image()
}

pub fn solve(m: &RationalMatrix, b: &[Q]) -> Result<Option<Vec<Q>>> {
    m.solve(b)
}

pub fn kron(m: &RationalMatrix, n: &RationalMatrix) -> RationalMatrix {
    m.kron(n)
}

pub fn direct_sum(m: &RationalMatrix, n: &RationalMatrix) -> RationalMatrix {
    m.direct_sum(n)
}

pub fn quotient_map(ambient_dim: usize, sub: &Subspace) -> Result<RationalMatrix> {
    if sub.ambient_dim() != ambient_dim {
        return Err(Error::ShapeMismatch("subspace ambient differs".into()));
    }
    Ok(sub.quotient_map())
}

/// Formats a rational as `p` or `p/q`.
pub fn format_q(x: &Q) -> String {
    x.to_string()
}

pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let parsed: std::result::Result<Q, _> = s.parse();
    match parsed {
        Ok(v) => Ok(v),
        Err(_) => Err(Error::Parse(format!("`{s}` is not a rational"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: usize, cols: usize, e: &[i64]) -> RationalMatrix {
        RationalMatrix::from_i64(rows, cols, e)
    }

    #[test]
    fn identity_has_trivial_kernel() {
        assert_eq!(RationalMatrix::identity(3).kernel().dim(), 0);
    }

    #[test]
    fn kernel_of_row_sum() {
        let k = m(1, 2, &[1, 1]).kernel();
        assert_eq!(k.dim(), 1);
        assert!(k.contains(&[q(1), q(-1)]));
        assert_eq!(k, Subspace::span(2, &[vec![q(-3), q(3)]]));
    }

    #[test]
    fn zero_sized_matrices() {
        let a = RationalMatrix::zeros(0, 3);
        assert_eq!(a.kernel().dim(), 3);
        assert_eq!(a.image().dim(), 0);
        let b = RationalMatrix::zeros(2, 0);
        assert!(b.is_injective());
        assert_eq!(a.mul(&RationalMatrix::zeros(3, 4)).unwrap().shape(), (0, 4));
        assert_eq!(
            b.mul(&RationalMatrix::zeros(0, 5)).unwrap(),
            RationalMatrix::zeros(2, 5)
        );
    }

    #[test]
    fn shape_mismatch_is_rejected() {
        assert!(m(2, 2, &[1, 0, 0, 1]).mul(&m(3, 1, &[1, 2, 3])).is_err());
        assert!(m(1, 2, &[1, 2]).solve(&[q(1), q(2)]).is_err());
    }

    #[test]
    fn solve_and_inverse() {
        let a = m(2, 2, &[2, 1, 1, 1]);
        let x = a.solve(&[q(3), q(2)]).unwrap().unwrap();
        assert_eq!(x, vec![q(1), q(1)]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv).unwrap(), RationalMatrix::identity(2));
        assert!(m(2, 2, &[1, 2, 2, 4]).inverse().is_none());
        assert!(m(2, 2, &[1, 2, 2, 4])
            .solve(&[q(1), q(0)])
            .unwrap()
            .is_none());
    }

    #[test]
    fn quotient_map_kills_exactly_the_subspace() {
        let sub = Subspace::span(3, &[vec![q(1), q(2), q(0)], vec![q(0), q(1), q(1)]]);
        let p = sub.quotient_map();
        assert_eq!(p.shape(), (1, 3));
        assert!(p.mul(&sub.inclusion()).unwrap().is_zero());
        assert!(p.is_surjective());
        assert_eq!(
            p.mul(&sub.quotient_section()).unwrap(),
            RationalMatrix::identity(1)
        );
        assert_eq!(p.kernel(), sub);
    }

    #[test]
    fn rational_text_round_trip() {
        for s in ["0", "-3", "5/7", "-1/2"] {
            assert_eq!(format_q(&parse_q(s).unwrap()), s);
        }
        assert_eq!(format_q(&parse_q("2/4").unwrap()), "1/2");
        assert!(parse_q("x").is_err());
    }
}
