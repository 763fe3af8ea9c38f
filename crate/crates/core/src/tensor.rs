//! Six-fold tensor products of q-oscillator words acting on
//! `F_{q^3} (x) F_q (x) F_{q^3} (x) F_q (x) F_{q^3} (x) F_q`, restricted to
//! the finite weight blocks.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::qboson::{term_action, Flavor, Op};
use crate::scalar::{Poly, Scalar};

pub const SLOT_FLAVORS: [Flavor; 6] =
    [Flavor::Three, Flavor::One, Flavor::Three, Flavor::One, Flavor::Three, Flavor::One];

/// Occupation numbers of the six Fock slots.
pub type State = [u32; 6];

/// One normal-ordered monomial per slot: `(j, m)` for `L(j) k^m`.
pub type MonoKey = [(i32, u32); 6];

/// The conserved pair `(P, Q) = (a+b+2c+d+e, b+3c+2d+3e+f)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WeightVector {
    #[serde(rename = "P")]
    pub p: i32,
    #[serde(rename = "Q")]
    pub q: i32,
}

impl WeightVector {
    pub fn new(p: i32, q: i32) -> WeightVector {
        WeightVector { p, q }
    }

    pub fn of_state(s: &State) -> WeightVector {
        let s: Vec<i32> = s.iter().map(|&x| x as i32).collect();
        WeightVector {
            p: s[0] + s[1] + 2 * s[2] + s[3] + s[4],
            q: s[1] + 3 * s[2] + 2 * s[3] + 3 * s[4] + s[5],
        }
    }

    /// Weight change produced by the per-slot ladder shifts.
    pub fn of_shift(d: &[i32; 6]) -> WeightVector {
        WeightVector {
            p: d[0] + d[1] + 2 * d[2] + d[3] + d[4],
            q: d[1] + 3 * d[2] + 2 * d[3] + 3 * d[4] + d[5],
        }
    }

    pub fn add(&self, o: &WeightVector) -> WeightVector {
        WeightVector { p: self.p + o.p, q: self.q + o.q }
    }

    pub fn in_range(&self, pmax: i32, qmax: i32) -> bool {
        self.p >= 0 && self.q >= 0 && self.p <= pmax && self.q <= qmax
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.p, self.q)
    }
}

/// States of a block in lexicographic order.
pub fn block_basis(w: WeightVector) -> Vec<State> {
    let mut out = Vec::new();
    if w.p < 0 || w.q < 0 {
        return out;
    }
    let (p, q) = (w.p, w.q);
    for a in 0..=p {
        for b in 0..=(p - a) {
            for c in 0..=((p - a - b) / 2) {
                for d in 0..=(p - a - b - 2 * c) {
                    let e = p - a - b - 2 * c - d;
                    let f = q - (b + 3 * c + 2 * d + 3 * e);
                    if f >= 0 {
                        out.push([a as u32, b as u32, c as u32, d as u32, e as u32, f as u32]);
                    }
                }
            }
        }
    }
    out.sort();
    out
}

/// All nonempty blocks with `P <= pmax`, `Q <= qmax`, in the order
/// `(P + Q, P)` ascending.
pub fn blocks_in_range(pmax: i32, qmax: i32) -> Vec<WeightVector> {
    let mut out = Vec::new();
    for p in 0..=pmax {
        for q in 0..=qmax {
            let w = WeightVector::new(p, q);
            if !block_basis(w).is_empty() {
                out.push(w);
            }
        }
    }
    out.sort_by_key(|w| (w.p + w.q, w.p));
    out
}

/// Linear combination of six-fold tensor products.
#[derive(Clone, Debug, Default)]
pub struct TensorWord {
    pub terms: Vec<(Scalar, [Op; 6])>,
}

impl TensorWord {
    pub fn new() -> TensorWord {
        TensorWord::default()
    }

    pub fn push(&mut self, coef: Scalar, factors: [Op; 6]) {
        if coef.is_zero() || factors.iter().any(|f| f.is_zero()) {
            return;
        }
        debug_assert!(factors.iter().zip(SLOT_FLAVORS).all(|(f, fl)| f.flavor() == fl));
        self.terms.push((coef, factors));
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Canonical expansion into products of normal-ordered monomials.
    pub fn expand(&self) -> Expanded {
        let mut acc: BTreeMap<MonoKey, Scalar> = BTreeMap::new();
        for (coef, factors) in &self.terms {
            let mut partial: Vec<(Vec<(i32, u32)>, Scalar)> = vec![(Vec::new(), coef.clone())];
            for f in factors {
                let mut next = Vec::with_capacity(partial.len() * f.terms().len());
                for (key, c) in &partial {
                    for (&jm, cf) in f.terms() {
                        let mut k = key.clone();
                        k.push(jm);
                        next.push((k, c.mul(cf)));
                    }
                }
                partial = next;
            }
            for (k, c) in partial {
                let key: MonoKey = [k[0], k[1], k[2], k[3], k[4], k[5]];
                let e = acc.entry(key).or_default();
                *e = e.add(&c);
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Expanded { terms: acc }
    }
}

/// A tensor word expanded into monomials with combined coefficients.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Expanded {
    pub terms: BTreeMap<MonoKey, Scalar>,
}

impl Expanded {
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Per-slot ladder shift shared by all terms; `None` when the terms
    /// disagree (or the word is empty).
    pub fn slot_shift(&self) -> Option<[i32; 6]> {
        let mut it = self.terms.keys();
        let first = it.next()?;
        let s: [i32; 6] = std::array::from_fn(|i| first[i].0);
        for k in it {
            for i in 0..6 {
                if k[i].0 != s[i] {
                    return None;
                }
            }
        }
        Some(s)
    }

    /// Weight shift shared by all terms; `None` if inhomogeneous or empty.
    pub fn weight_shift(&self) -> Option<WeightVector> {
        let mut it = self.terms.keys();
        let first = it.next()?;
        let w = WeightVector::of_shift(&std::array::from_fn(|i| first[i].0));
        for k in it {
            if WeightVector::of_shift(&std::array::from_fn(|i| k[i].0)) != w {
                return None;
            }
        }
        Some(w)
    }

    /// Action on a single basis state.
    pub fn apply(&self, s: &State) -> BTreeMap<State, Scalar> {
        let mut out: BTreeMap<State, Scalar> = BTreeMap::new();
        'terms: for (key, c) in &self.terms {
            let mut tgt = [0u32; 6];
            let mut p = Poly::one();
            for i in 0..6 {
                let (j, m) = key[i];
                match term_action(SLOT_FLAVORS[i], j, m, s[i]) {
                    Some((n, f)) => {
                        tgt[i] = n;
                        p = p.mul(&f);
                    }
                    None => continue 'terms,
                }
            }
            if p.is_zero() {
                continue;
            }
            let v = c.mul(&Scalar::from_poly(p));
            let e = out.entry(tgt).or_default();
            *e = e.add(&v);
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    /// Matrix of the operator from block `src` into block `src + shift`.
    pub fn block_map(&self, src: WeightVector) -> Option<BlockMap> {
        let shift = self.weight_shift()?;
        let dst = src.add(&shift);
        let src_basis = block_basis(src);
        let dst_basis = block_basis(dst);
        let index: BTreeMap<State, usize> = dst_basis.iter().enumerate().map(|(i, s)| (*s, i)).collect();
        let mut cols = Vec::with_capacity(src_basis.len());
        for s in &src_basis {
            let img = self.apply(s);
            let mut col: Vec<(usize, Scalar)> = img
                .into_iter()
                .map(|(t, c)| (*index.get(&t).expect("image lies in the target block"), c))
                .collect();
            col.sort_by_key(|e| e.0);
            cols.push(col);
        }
        Some(BlockMap { src, dst, rows: dst_basis.len(), cols })
    }
}

/// Sparse (column-major) matrix of an operator between two blocks.
#[derive(Clone, Debug)]
pub struct BlockMap {
    pub src: WeightVector,
    pub dst: WeightVector,
    pub rows: usize,
    pub cols: Vec<Vec<(usize, Scalar)>>,
}

/// Dense square or rectangular matrix of scalars, `m[row][col]`.
pub type Dense = Vec<Vec<Scalar>>;

pub fn dense_zero(rows: usize, cols: usize) -> Dense {
    vec![vec![Scalar::zero(); cols]; rows]
}

impl BlockMap {
    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_empty())
    }

    /// `self * f` where `f` is a dense matrix on the source block.
    pub fn mul_dense_right(&self, f: &Dense) -> Dense {
        let ncols = f.first().map(|r| r.len()).unwrap_or(0);
        let mut out = dense_zero(self.rows, ncols);
        for (k, col) in self.cols.iter().enumerate() {
            for (r, m) in col {
                for c in 0..ncols {
                    if f[k][c].is_zero() {
                        continue;
                    }
                    out[*r][c] = out[*r][c].add(&m.mul(&f[k][c]));
                }
            }
        }
        out
    }

    /// `f * self` where `f` is a dense matrix on the target block.
    pub fn mul_dense_left(&self, f: &Dense) -> Dense {
        let nrows = f.len();
        let mut out = dense_zero(nrows, self.ncols());
        for (c, col) in self.cols.iter().enumerate() {
            for (k, m) in col {
                for r in 0..nrows {
                    if f[r][*k].is_zero() {
                        continue;
                    }
                    out[r][c] = out[r][c].add(&f[r][*k].mul(m));
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn block_dimensions() {
        assert_eq!(block_basis(WeightVector::new(0, 0)).len(), 1);
        assert_eq!(block_basis(WeightVector::new(2, 4)).len(), 9);
        assert_eq!(block_basis(WeightVector::new(3, 6)).len(), 20);
        let total: usize = blocks_in_range(3, 6).iter().map(|w| block_basis(*w).len().pow(2)).sum();
        assert_eq!(total, 1342);
        assert!(block_basis(WeightVector::new(2, 4)).contains(&[1, 0, 0, 1, 0, 2]));
    }

    #[test]
    fn basis_is_lexicographic_and_homogeneous() {
        for w in blocks_in_range(3, 6) {
            let b = block_basis(w);
            assert!(b.windows(2).all(|x| x[0] < x[1]));
            assert!(b.iter().all(|s| WeightVector::of_state(s) == w));
        }
    }
}
