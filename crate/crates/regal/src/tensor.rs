//! Indexing and subspace constructions on tensor powers.
//!
//! Coordinates of `V^{⊗n}` with `dim V = d` are indexed by words of length
//! `n` over the alphabet `[0, d)`. The linear index is big-endian row-major:
//! `index(w) = Σ w_k · d^{n−1−k}`, so the first tensor factor is the most
//! significant digit. Every module of this crate shares that convention,
//! including the file formats.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exactlin::{Rat, Subspace};

/// A word of generator indices, the label of one coordinate of a tensor
/// power.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(pub Vec<u32>);

impl Word {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn to_index(&self, d: usize) -> usize {
        word_to_index(&self.0, d)
    }

    pub fn from_index(d: usize, len: usize, index: usize) -> Self {
        Word(index_to_word(d, len, index))
    }
}

pub fn word_to_index(letters: &[u32], d: usize) -> usize {
    let mut idx = 0usize;
    for &l in letters {
        debug_assert!((l as usize) < d);
        idx = idx * d + l as usize;
    }
    idx
}

pub fn index_to_word(d: usize, len: usize, mut index: usize) -> Vec<u32> {
    let mut out = vec![0u32; len];
    for k in (0..len).rev() {
        out[k] = (index % d) as u32;
        index /= d;
    }
    debug_assert_eq!(index, 0);
    out
}

/// The tensor power `V^{⊗n}` of a `d`-dimensional space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TensorSpace {
    pub d: usize,
    pub n: usize,
}

impl TensorSpace {
    pub fn new(d: usize, n: usize) -> Self {
        TensorSpace { d, n }
    }

    pub fn ambient(&self) -> usize {
        self.d.pow(self.n as u32)
    }

    pub fn words(&self) -> impl Iterator<Item = Word> + '_ {
        let d = self.d;
        let n = self.n;
        (0..self.ambient()).map(move |i| Word::from_index(d, n, i))
    }
}

/// Kronecker product of subspaces: the span of all pairwise tensor products
/// of basis vectors, in the concatenated index order.
pub fn kron(u: &Subspace, w: &Subspace) -> Subspace {
    let ambient = u.ambient_dim() * w.ambient_dim();
    let mut rows = Vec::with_capacity(u.dim() * w.dim());
    for a in u.basis_rows() {
        for b in w.basis_rows() {
            let mut row = Vec::new();
            for (i, x) in a.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                for (j, y) in b.iter().enumerate() {
                    if !y.is_zero() {
                        row.push((i * w.ambient_dim() + j, x * y));
                    }
                }
            }
            rows.push(row);
        }
    }
    Subspace::span_sparse(&rows, ambient).expect("indices in range")
}

/// Applies a coordinate permutation to a subspace and re-canonicalizes.
pub fn permute_coordinates(u: &Subspace, perm: &dyn Fn(usize) -> usize) -> Subspace {
    let n = u.ambient_dim();
    let mut rows = Vec::with_capacity(u.dim());
    for b in u.basis_rows() {
        let mut row = Vec::new();
        for (i, x) in b.iter().enumerate() {
            if !x.is_zero() {
                row.push((perm(i), x.clone()));
            }
        }
        rows.push(row);
    }
    Subspace::span_sparse(&rows, n).expect("permutation stays in range")
}

/// The interleaving permutation: a subspace of `E^{⊗N} ⊗ E'^{⊗N}` becomes a
/// subspace of `(E ⊗ E')^{⊗N}` by sending the word pair
/// `(a_1…a_N, b_1…b_N)` to `((a_1,b_1)…(a_N,b_N))`.
pub fn interleave_pi(u: &Subspace, d_e: usize, d_e2: usize, n: usize) -> Result<Subspace> {
    let expected = d_e.pow(n as u32) * d_e2.pow(n as u32);
    if u.ambient_dim() != expected {
        return Err(Error::DimensionMismatch(format!(
            "interleave: ambient {} but d_E^N * d_E'^N = {}",
            u.ambient_dim(),
            expected
        )));
    }
    let pair_base = d_e * d_e2;
    let perm = |idx: usize| {
        let b_part = idx % d_e2.pow(n as u32);
        let a_part = idx / d_e2.pow(n as u32);
        let a = index_to_word(d_e, n, a_part);
        let b = index_to_word(d_e2, n, b_part);
        let mut out = 0usize;
        for k in 0..n {
            out = out * pair_base + (a[k] as usize) * d_e2 + b[k] as usize;
        }
        out
    };
    Ok(permute_coordinates(u, &perm))
}

/// Per-pair leg swap on `(X ⊗ Y)^{⊗n}` coordinates: positions with
/// `swaps[k]` set have their pair `(a,b)` reinterpreted as `(b,a)`. With the
/// identity pattern the coordinates are returned unchanged; applying a
/// pattern twice is the identity.
pub fn reindex_dual(u: &Subspace, d_x: usize, d_y: usize, swaps: &[bool]) -> Result<Subspace> {
    let n = swaps.len();
    let pair = d_x * d_y;
    if u.ambient_dim() != pair.pow(n as u32) {
        return Err(Error::DimensionMismatch(format!(
            "reindex: ambient {} but (d_X*d_Y)^n = {}",
            u.ambient_dim(),
            pair.pow(n as u32)
        )));
    }
    if swaps.iter().all(|s| !s) {
        return Ok(u.clone());
    }
    let perm = |idx: usize| {
        let mut digits = index_to_word(pair, n, idx);
        for k in 0..n {
            if swaps[k] {
                let a = digits[k] as usize / d_y;
                let b = digits[k] as usize % d_y;
                digits[k] = (b * d_x + a) as u32;
            }
        }
        word_to_index(&digits, pair)
    };
    Ok(permute_coordinates(u, &perm))
}

/// Embeds `r ⊂ E^{⊗N}` as `E^{⊗i} ⊗ r ⊗ E^{⊗(n−N−i)}` inside `E^{⊗n}`.
pub fn shift_embed(r: &Subspace, d: usize, deg_n: usize, n: usize, i: usize) -> Result<Subspace> {
    if r.ambient_dim() != d.pow(deg_n as u32) {
        return Err(Error::DimensionMismatch(format!(
            "relation space ambient {} is not {}^{}",
            r.ambient_dim(),
            d,
            deg_n
        )));
    }
    if n < deg_n || i > n - deg_n {
        return Err(Error::PositionOutOfRange {
            position: i,
            degree: n,
        });
    }
    let right = n - deg_n - i;
    let right_size = d.pow(right as u32);
    let left_size = d.pow(i as u32);
    let ambient = d.pow(n as u32);
    let mut rows = Vec::new();
    for b in r.basis_rows() {
        let support: Vec<(usize, &Rat)> = b
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(j, x)| (j, x))
            .collect();
        for lw in 0..left_size {
            for rw in 0..right_size {
                let row: Vec<(usize, Rat)> = support
                    .iter()
                    .map(|(j, x)| {
                        ((lw * r.ambient_dim() + j) * right_size + rw, (*x).clone())
                    })
                    .collect();
                rows.push(row);
            }
        }
    }
    Subspace::span_sparse(&rows, ambient)
}

/// Degree-`n` component of the two-sided ideal generated by `r`: the sum of
/// all shift embeddings of `r` into `E^{⊗n}`.
pub fn ideal_component(r: &Subspace, d: usize, deg_n: usize, n: usize) -> Result<Subspace> {
    if n < deg_n {
        return Err(Error::PositionOutOfRange {
            position: 0,
            degree: n,
        });
    }
    let mut acc = Subspace::zero(d.pow(n as u32));
    for i in 0..=(n - deg_n) {
        acc = acc.sum(&shift_embed(r, d, deg_n, n, i)?)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::{rint, Subspace};

    fn manin_r(q: i64) -> Subspace {
        // span{y⊗x − q·x⊗y} in d = 2, word order xx, xy, yx, yy.
        Subspace::span(
            &[vec![rint(0), rint(-q), rint(1), rint(0)]],
            4,
        )
        .unwrap()
    }

    #[test]
    fn word_index_round_trip_exhaustive() {
        for d in 1..=3usize {
            for n in 0..=6usize {
                let space = TensorSpace::new(d, n);
                for idx in 0..space.ambient() {
                    let w = Word::from_index(d, n, idx);
                    assert_eq!(w.to_index(d), idx);
                }
            }
        }
    }

    #[test]
    fn kron_of_full_spaces_is_full() {
        let u = Subspace::full(2);
        let w = Subspace::full(3);
        assert_eq!(kron(&u, &w), Subspace::full(6));
    }

    #[test]
    fn kron_of_basis_lines() {
        let e0 = Subspace::span(&[vec![rint(1), rint(0)]], 2).unwrap();
        let e1 = Subspace::span(&[vec![rint(0), rint(1)]], 2).unwrap();
        let k = kron(&e0, &e1);
        assert_eq!(k.dim(), 1);
        assert_eq!(k.pivot_columns(), &[1]);
    }

    #[test]
    fn kron_dimension_is_multiplicative() {
        let r = manin_r(2);
        let ann = r.annihilator();
        let k = kron(&r, &ann);
        assert_eq!(k.dim(), r.dim() * ann.dim());
    }

    #[test]
    fn interleave_n1_is_identity() {
        let u = Subspace::span(&[vec![rint(1), rint(2), rint(0), rint(0)]], 4).unwrap();
        assert_eq!(interleave_pi(&u, 2, 2, 1).unwrap(), u);
    }

    #[test]
    fn interleave_involution_via_inverse() {
        // For d_E = d_E' the interleave map is its own inverse composed with
        // the same reading, so applying it twice returns the input.
        let r = manin_r(2);
        let k = kron(&r, &r.annihilator());
        let once = interleave_pi(&k, 2, 2, 2).unwrap();
        let twice = interleave_pi(&once, 2, 2, 2).unwrap();
        assert_eq!(twice, k);
        assert_eq!(once.dim(), k.dim());
    }

    #[test]
    fn reindex_identity_and_involution() {
        let r = manin_r(2);
        let k = interleave_pi(&kron(&r, &r.annihilator()), 2, 2, 2).unwrap();
        assert_eq!(reindex_dual(&k, 2, 2, &[false, false]).unwrap(), k);
        let s = reindex_dual(&k, 2, 2, &[true, true]).unwrap();
        assert_eq!(reindex_dual(&s, 2, 2, &[true, true]).unwrap(), k);
        assert_eq!(s.dim(), k.dim());
    }

    #[test]
    fn shift_embed_degenerate_and_counts() {
        let r = manin_r(2);
        assert_eq!(shift_embed(&r, 2, 2, 2, 0).unwrap(), r);
        let s = shift_embed(&r, 2, 2, 3, 0).unwrap();
        assert_eq!(s.dim(), 2);
        assert!(matches!(
            shift_embed(&r, 2, 2, 3, 2),
            Err(Error::PositionOutOfRange { .. })
        ));
    }

    #[test]
    fn manin_ideal_component_degree_three() {
        let r = manin_r(2);
        let i3 = ideal_component(&r, 2, 2, 3).unwrap();
        assert_eq!(i3.dim(), 4);
        // dim A_3 = 8 − 4 = 4, the commutative count.
        assert_eq!(i3.quotient_dim(), 4);
    }

    #[test]
    fn shift_of_member_stays_in_higher_component() {
        let r = manin_r(2);
        let i3 = ideal_component(&r, 2, 2, 3).unwrap();
        let i4 = ideal_component(&r, 2, 2, 4).unwrap();
        for row in i3.basis_rows() {
            let row_space = Subspace::span(&[row.to_vec()], 8).unwrap();
            for i in 0..=1 {
                let shifted = shift_embed(&row_space, 2, 3, 4, i).unwrap();
                assert!(shifted.is_subspace_of(&i4).unwrap());
            }
        }
    }
}
