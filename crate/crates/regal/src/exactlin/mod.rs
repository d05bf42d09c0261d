//! Exact rational linear algebra: dense RREF, canonical subspaces, and the
//! sparse elimination engine shared by every higher module.
//!
//! All arithmetic is over arbitrary-precision rationals; nothing is ever
//! rounded. A [`Subspace`] is stored as its reduced row echelon basis, which
//! is a canonical form: two subspaces are equal iff their stored bases are
//! identical entry for entry.

pub mod sparse;

pub use sparse::{rank_mod_p, rank_mod_p_residues, ModInt, SparseMatrix};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational scalar. Always in lowest terms with positive denominator.
pub type Rat = num_rational::BigRational;

/// Shorthand for a rational from an integer pair.
pub fn rat(numer: i64, denom: i64) -> Rat {
    Rat::new(numer.into(), denom.into())
}

/// Shorthand for an integer rational.
pub fn rint(n: i64) -> Rat {
    Rat::from_integer(n.into())
}

/// Parses the canonical string form `a/b` (or plain `a`).
pub fn parse_rat(s: &str) -> Result<Rat> {
    use num_bigint::BigInt;
    let t = s.trim();
    let bad = |msg: &str| Error::Format(format!("bad rational {s:?}: {msg}"));
    let (n, d) = match t.split_once('/') {
        Some((a, b)) => (a.trim(), Some(b.trim())),
        None => (t, None),
    };
    let numer: BigInt = n.parse().map_err(|_| bad("unreadable numerator"))?;
    let denom: BigInt = match d {
        Some(b) => b.parse().map_err(|_| bad("unreadable denominator"))?,
        None => BigInt::one(),
    };
    if denom.is_zero() {
        return Err(bad("zero denominator"));
    }
    Ok(Rat::new(numer, denom))
}

/// Canonical string form: `a` when the denominator is 1, else `a/b`.
pub fn format_rat(r: &Rat) -> String {
    r.to_string()
}

/// Row-major dense matrix of rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rat::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(DenseMatrix {
            rows: nrows,
            cols: ncols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &Rat {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rat) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn rows_vec(&self) -> Vec<Vec<Rat>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> DenseMatrix {
        let mut t = DenseMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.at(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "matrix product {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = DenseMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.at(k, j);
                    if !b.is_zero() {
                        let v = out.at(i, j) + a * b;
                        out.set(i, j, v);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch("matrix sum".into()));
        }
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a += b;
        }
        Ok(out)
    }

    /// Kronecker product, row-major on both factors.
    pub fn kron(&self, other: &DenseMatrix) -> DenseMatrix {
        let mut out = DenseMatrix::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.at(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        let b = other.at(k, l);
                        if !b.is_zero() {
                            out.set(i * other.rows + k, j * other.cols + l, a * b);
                        }
                    }
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    pub fn rank(&self) -> usize {
        rref(self).1
    }
}

/// Reduced row echelon form together with the rank.
///
/// The result is canonical: pivots are 1, pivot columns are otherwise zero,
/// zero rows are dropped, and pivot columns increase strictly row by row.
pub fn rref(m: &DenseMatrix) -> (DenseMatrix, usize) {
    let mut rows = m.rows_vec();
    let pivots = rref_rows(&mut rows, m.ncols());
    rows.truncate(pivots.len());
    let rank = pivots.len();
    (DenseMatrix::from_rows(rows).expect("rectangular"), rank)
}

/// In-place RREF on a list of rows; returns the pivot columns in order.
/// Zero rows end up at the bottom and are not truncated here.
pub(crate) fn rref_rows(rows: &mut Vec<Vec<Rat>>, ncols: usize) -> Vec<usize> {
    let nrows = rows.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == nrows {
            break;
        }
        // Partial pivoting by largest absolute value keeps intermediate
        // numerators small on the structured matrices we see.
        let mut best: Option<usize> = None;
        for i in r..nrows {
            if !rows[i][col].is_zero() {
                match best {
                    None => best = Some(i),
                    Some(b) => {
                        if rows[i][col].abs() > rows[b][col].abs() {
                            best = Some(i)
                        }
                    }
                }
            }
        }
        let Some(pivot_row) = best else { continue };
        rows.swap(r, pivot_row);
        let inv = {
            let p = &rows[r][col];
            p.recip()
        };
        for v in rows[r][col..].iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        for i in 0..nrows {
            if i == r || rows[i][col].is_zero() {
                continue;
            }
            let factor = rows[i][col].clone();
            for j in col..ncols {
                let sub = &factor * &rows[r][j];
                if !sub.is_zero() {
                    rows[i][j] -= sub;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    pivots
}

/// A linear subspace of a coordinate space, in canonical RREF basis form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    basis: DenseMatrix,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: DenseMatrix::zeros(0, ambient),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: DenseMatrix::identity(ambient),
            pivots: (0..ambient).collect(),
        }
    }

    /// Canonical subspace spanned by the given vectors.
    pub fn span(vectors: &[Vec<Rat>], ambient: usize) -> Result<Self> {
        if let Some(v) = vectors.iter().find(|v| v.len() != ambient) {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} in ambient dimension {}",
                v.len(),
                ambient
            )));
        }
        let mut rows: Vec<Vec<Rat>> = vectors.to_vec();
        let pivots = rref_rows(&mut rows, ambient);
        rows.truncate(pivots.len());
        Ok(Subspace {
            ambient,
            basis: DenseMatrix::from_rows(rows)?,
            pivots,
        })
    }

    /// Span of sparse rows given as (index, coefficient) lists.
    pub fn span_sparse(rows: &[Vec<(usize, Rat)>], ambient: usize) -> Result<Self> {
        let mut dense = Vec::with_capacity(rows.len());
        for r in rows {
            let mut v = vec![Rat::zero(); ambient];
            for (j, c) in r {
                if *j >= ambient {
                    return Err(Error::DimensionMismatch(format!(
                        "index {j} in ambient dimension {ambient}"
                    )));
                }
                v[*j] += c;
            }
            dense.push(v);
        }
        Self::span(&dense, ambient)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn basis(&self) -> &DenseMatrix {
        &self.basis
    }

    pub fn basis_rows(&self) -> impl Iterator<Item = &[Rat]> {
        (0..self.dim()).map(|i| self.basis.row(i))
    }

    pub fn pivot_columns(&self) -> &[usize] {
        &self.pivots
    }

    pub fn quotient_dim(&self) -> usize {
        self.ambient - self.dim()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    /// Residue of `v` after eliminating every pivot coordinate; zero iff
    /// `v` lies in the subspace.
    pub fn reduce(&self, v: &[Rat]) -> Result<Vec<Rat>> {
        if v.len() != self.ambient {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} in ambient dimension {}",
                v.len(),
                self.ambient
            )));
        }
        let mut out = v.to_vec();
        for (i, &p) in self.pivots.iter().enumerate() {
            if out[p].is_zero() {
                continue;
            }
            let factor = out[p].clone();
            for (j, b) in self.basis.row(i).iter().enumerate() {
                if !b.is_zero() {
                    out[j] -= &factor * b;
                }
            }
        }
        Ok(out)
    }

    /// Membership test by exact reduction.
    pub fn contains(&self, v: &[Rat]) -> Result<bool> {
        Ok(self.reduce(v)?.iter().all(|c| c.is_zero()))
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> Result<bool> {
        for row in self.basis_rows() {
            if !other.contains(row)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch(format!(
                "subspace sum: ambient {} vs {}",
                self.ambient, other.ambient
            )));
        }
        let mut rows: Vec<Vec<Rat>> = self.basis.rows_vec();
        rows.extend(other.basis.rows_vec());
        Subspace::span(&rows, self.ambient)
    }

    /// Intersection computed through annihilators:
    /// `u ∩ w = ann(ann(u) + ann(w))`.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch(format!(
                "subspace intersection: ambient {} vs {}",
                self.ambient, other.ambient
            )));
        }
        let result = self
            .annihilator()
            .sum(&other.annihilator())?
            .annihilator();
        #[cfg(debug_assertions)]
        {
            let s = self.sum(other).expect("same ambient");
            debug_assert_eq!(
                s.dim() + result.dim(),
                self.dim() + other.dim(),
                "Grassmann identity violated"
            );
        }
        Ok(result)
    }

    /// Orthogonal complement under the coordinate dot product.
    ///
    /// Basis vectors come from the standard RREF kernel construction: one
    /// vector per free column, re-canonicalized.
    pub fn annihilator(&self) -> Subspace {
        let k = self.dim();
        let n = self.ambient;
        let pivot_set: Vec<bool> = {
            let mut s = vec![false; n];
            for &p in &self.pivots {
                s[p] = true;
            }
            s
        };
        let mut kernel_rows = Vec::with_capacity(n - k);
        for f in 0..n {
            if pivot_set[f] {
                continue;
            }
            let mut v = vec![Rat::zero(); n];
            v[f] = Rat::one();
            for (i, &p) in self.pivots.iter().enumerate() {
                let b = self.basis.at(i, f);
                if !b.is_zero() {
                    v[p] = -b.clone();
                }
            }
            kernel_rows.push(v);
        }
        Subspace::span(&kernel_rows, n).expect("kernel vectors have ambient length")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(vals: &[i64]) -> Vec<Rat> {
        vals.iter().map(|&x| rint(x)).collect()
    }

    #[test]
    fn rref_identity_is_fixed() {
        let m = DenseMatrix::identity(2);
        let (r, rank) = rref(&m);
        assert_eq!(rank, 2);
        assert_eq!(r, m);
    }

    #[test]
    fn rref_dependent_rows() {
        let m = DenseMatrix::from_rows(vec![v(&[1, 2]), v(&[2, 4])]).unwrap();
        let (r, rank) = rref(&m);
        assert_eq!(rank, 1);
        assert_eq!(r.rows_vec(), vec![v(&[1, 2])]);
    }

    #[test]
    fn rref_is_idempotent() {
        let m = DenseMatrix::from_rows(vec![v(&[0, 2, 1]), v(&[3, 1, 0]), v(&[3, 3, 1])]).unwrap();
        let (r1, _) = rref(&m);
        let (r2, _) = rref(&r1);
        assert_eq!(r1, r2);
    }

    #[test]
    fn span_empty_is_zero_subspace() {
        let s = Subspace::span(&[], 4).unwrap();
        assert_eq!(s.dim(), 0);
        assert_eq!(s.quotient_dim(), 4);
    }

    #[test]
    fn span_e1_e1_plus_e2() {
        let s = Subspace::span(&[v(&[1, 0, 0]), v(&[1, 1, 0])], 3).unwrap();
        assert_eq!(s.dim(), 2);
        assert_eq!(s.pivot_columns(), &[0, 1]);
    }

    #[test]
    fn sum_and_intersect_trivial_cases() {
        let u = Subspace::span(&[v(&[1, 0])], 2).unwrap();
        let w = Subspace::span(&[v(&[0, 1])], 2).unwrap();
        assert_eq!(u.sum(&u).unwrap(), u);
        assert_eq!(u.intersect(&u).unwrap(), u);
        assert!(u.intersect(&w).unwrap().is_zero());
    }

    #[test]
    fn annihilator_of_zero_is_full() {
        let z = Subspace::zero(3);
        assert_eq!(z.annihilator(), Subspace::full(3));
    }

    #[test]
    fn manin_relation_annihilator_dim() {
        // span{y⊗x − 2·x⊗y} inside dim 4: complement has dimension 3.
        let r = Subspace::span(&[v(&[0, -2, 1, 0])], 4).unwrap();
        let ann = r.annihilator();
        assert_eq!(ann.dim(), 3);
        assert_eq!(ann.annihilator(), r);
    }

    #[test]
    fn member_zero_vector_and_outside() {
        let u = Subspace::span(&[v(&[1, 0])], 2).unwrap();
        assert!(u.contains(&v(&[0, 0])).unwrap());
        assert!(!u.contains(&v(&[0, 1])).unwrap());
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let u = Subspace::span(&[v(&[1, 0])], 2).unwrap();
        assert!(matches!(
            u.contains(&v(&[1, 0, 0])),
            Err(Error::DimensionMismatch(_))
        ));
        assert!(Subspace::span(&[v(&[1, 0, 0])], 2).is_err());
    }

    #[test]
    fn rational_string_round_trip() {
        let r = rat(-6, 4);
        assert_eq!(format_rat(&r), "-3/2");
        assert_eq!(parse_rat("-3/2").unwrap(), r);
        assert_eq!(format_rat(&rint(7)), "7");
        assert_eq!(parse_rat("7").unwrap(), rint(7));
        assert!(parse_rat("1/0").is_err());
        assert_eq!(parse_rat("2/-4").unwrap(), rat(-1, 2));
    }
}
