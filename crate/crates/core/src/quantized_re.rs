//! The quantized G2 reflection equation: its 64 components as six-fold
//! q-oscillator words, their verification against the intertwiner, the
//! correspondence with the 49 intertwining relations and the boundary
//! vector identities.

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::aq_g2::{coproduct_word, state_norm, IntertwinerTable, Variant};
use crate::lj::{j_entry, l_entry, UParams};
use crate::qboson::Op;
use crate::scalar::{pochhammer, Scalar};
use crate::tensor::{blocks_in_range, Expanded, State, TensorWord, WeightVector, SLOT_FLAVORS};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Lhs,
    Rhs,
}

/// Component index `(a, b, c, i, j, k)` for the transition
/// `v_i (x) v_j (x) v_k -> v_a (x) v_b (x) v_c`.
pub type Component = [u8; 6];

pub fn all_components() -> Vec<Component> {
    (0..64u8).map(|n| std::array::from_fn(|s| (n >> (5 - s)) & 1)).collect()
}

pub fn component_label(c: &Component) -> String {
    c.iter().map(|b| char::from(b'0' + b)).collect()
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QreError {
    #[error("component {0}: not proportional to t_{{{1},{2}}}")]
    NotProportional(String, usize, usize),
}

struct Tables {
    l: Vec<Op>,
    j: Vec<Op>,
}

impl Tables {
    fn new(u: &UParams) -> Tables {
        let l = (0..16u8).map(|n| l_entry(n >> 3 & 1, n >> 2 & 1, n >> 1 & 1, n & 1)).collect();
        let j = (0..64u8)
            .map(|n| j_entry(n >> 5 & 1, n >> 4 & 1, n >> 3 & 1, n >> 2 & 1, n >> 1 & 1, n & 1, u))
            .collect();
        Tables { l, j }
    }

    /// `L^{c d}_{a b}`.
    fn l(&self, a: u8, b: u8, c: u8, d: u8) -> &Op {
        &self.l[(a << 3 | b << 2 | c << 1 | d) as usize]
    }

    /// `J^{l m n}_{a b c}`.
    fn j(&self, a: u8, b: u8, c: u8, l: u8, m: u8, n: u8) -> &Op {
        &self.j[(a << 5 | b << 4 | c << 3 | l << 2 | m << 1 | n) as usize]
    }
}

/// One side of a component, summed over the twelve internal indices.
pub fn assemble_component(side: Side, comp: Component, u: &UParams) -> TensorWord {
    assemble_with(&Tables::new(u), side, comp)
}

fn assemble_with(t: &Tables, side: Side, comp: Component) -> TensorWord {
    let [a, b, c, i, j, k] = comp;
    let mut w = TensorWord::new();
    for n in 0..4096u16 {
        let bit = |s: u16| (n >> s & 1) as u8;
        let (a1, a2, b1, b2, b3, g1, g2) = (bit(0), bit(1), bit(2), bit(3), bit(4), bit(5), bit(6));
        let (l1, l2, l3, m1, m2) = (bit(7), bit(8), bit(9), bit(10), bit(11));
        let f: [&Op; 6] = match side {
            Side::Lhs => [
                t.l(a1, a2, a, b),
                t.j(b1, b3, b2, a1, c, a2),
                t.l(g1, g2, b2, b3),
                t.j(l2, m1, m2, g1, b1, g2),
                t.l(l3, l1, m2, m1),
                t.j(k, j, i, l3, l2, l1),
            ],
            Side::Rhs => [
                t.l(j, i, a2, a1),
                t.j(k, a1, a2, b3, b1, b2),
                t.l(b3, b2, g2, g1),
                t.j(b1, g1, g2, m1, l2, m2),
                t.l(m1, m2, l1, l3),
                t.j(l2, l3, l1, b, c, a),
            ],
        };
        if f.iter().any(|o| o.is_zero()) {
            continue;
        }
        w.push(Scalar::one(), f.map(|o| o.clone()));
    }
    w
}

/// The printed correspondence `(abcijk; i'j')` between the 64 components and
/// the generators `t_{i',j'}`.
pub const INTERTWINING_CORRESPONDENCE: [&str; 64] = [
    "000000:77", "000001:74", "000010:75", "000011:72", "000100:76", "000101:73", "000110:74", "000111:71",
    "001000:47", "001001:44", "001010:45", "001011:42", "001100:46", "001101:43", "001110:44", "001111:41",
    "010000:57", "010001:54", "010010:55", "010011:52", "010100:56", "010101:53", "010110:54", "010111:51",
    "011000:27", "011001:24", "011010:25", "011011:22", "011100:26", "011101:23", "011110:24", "011111:21",
    "100000:67", "100001:64", "100010:65", "100011:62", "100100:66", "100101:63", "100110:64", "100111:61",
    "101000:37", "101001:34", "101010:35", "101011:32", "101100:36", "101101:33", "101110:34", "101111:31",
    "110000:47", "110001:44", "110010:45", "110011:42", "110100:46", "110101:43", "110110:44", "110111:41",
    "111000:17", "111001:14", "111010:15", "111011:12", "111100:16", "111101:13", "111110:14", "111111:11",
];

/// `(i', j')` paired with a component.
pub fn corresponding_generator(comp: &Component) -> (usize, usize) {
    let label = component_label(comp);
    let entry = INTERTWINING_CORRESPONDENCE
        .iter()
        .find(|e| e.starts_with(&label))
        .expect("every component is listed");
    let b = entry.as_bytes();
    ((b[7] - b'0') as usize, (b[8] - b'0') as usize)
}

/// The constant `c` with `x = c y` termwise, if any.
fn proportionality(x: &Expanded, y: &Expanded) -> Option<Scalar> {
    if x.terms.len() != y.terms.len() {
        return None;
    }
    let mut c: Option<Scalar> = None;
    for (key, xv) in &x.terms {
        let yv = y.terms.get(key)?;
        let r = xv.div(yv).ok()?;
        match &c {
            None => c = Some(r),
            Some(c0) if *c0 == r => {}
            Some(_) => return None,
        }
    }
    Some(c.unwrap_or_else(Scalar::one))
}

/// Checks that both sides of a component equal those of its partner
/// generator up to one common constant, which is returned.
pub fn match_intertwining(comp: Component, u: &UParams) -> Result<(usize, usize, Scalar), QreError> {
    let (ip, jp) = corresponding_generator(&comp);
    let t = Tables::new(u);
    let lhs = assemble_with(&t, Side::Lhs, comp).expand();
    let rhs = assemble_with(&t, Side::Rhs, comp).expand();
    let direct = coproduct_word(ip, jp, Variant::Direct).expand();
    let reversed = coproduct_word(ip, jp, Variant::Reversed).expand();
    let err = || QreError::NotProportional(component_label(&comp), ip, jp);
    let c1 = proportionality(&lhs, &direct).ok_or_else(err)?;
    let c2 = proportionality(&rhs, &reversed).ok_or_else(err)?;
    if c1 != c2 {
        return Err(err());
    }
    Ok((ip, jp, c1))
}

#[derive(Clone, Debug, Serialize)]
pub struct CorrespondenceEntry {
    pub component: String,
    pub generator: (usize, usize),
    /// The common constant, or `None` when the sides are not proportional.
    pub constant: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CorrespondenceReport {
    pub u_mode: &'static str,
    pub entries: Vec<CorrespondenceEntry>,
}

impl CorrespondenceReport {
    pub fn passed(&self) -> bool {
        self.entries.len() == 64 && self.entries.iter().all(|e| e.constant.is_some())
    }
}

/// `match_intertwining` for every component.
pub fn match_all_components(u: &UParams) -> CorrespondenceReport {
    let entries = all_components()
        .par_iter()
        .map(|&comp| CorrespondenceEntry {
            component: component_label(&comp),
            generator: corresponding_generator(&comp),
            constant: match_intertwining(comp, u).ok().map(|(_, _, c)| c.to_string()),
        })
        .collect();
    CorrespondenceReport { u_mode: u.mode.label(), entries }
}

#[derive(Clone, Debug, Serialize)]
pub struct ComponentCheck {
    pub component: String,
    pub blocks_checked: usize,
    pub max_block_dim: usize,
    pub failures: Vec<String>,
    pub elapsed_ms: u128,
}

#[derive(Clone, Debug, Serialize)]
pub struct QreReport {
    pub pmax: i32,
    pub qmax: i32,
    pub u_mode: &'static str,
    pub components: Vec<ComponentCheck>,
}

impl QreReport {
    pub fn passed(&self) -> bool {
        self.components.len() == 64 && self.components.iter().all(|c| c.failures.is_empty())
    }
}

/// `lhs F_B = F_{B'} rhs` for all 64 components and all blocks with
/// source and target in range.
pub fn verify_qre(table: &IntertwinerTable, pmax: i32, qmax: i32, u: &UParams) -> QreReport {
    let t = Tables::new(u);
    let blocks = blocks_in_range(pmax, qmax);
    let components = all_components()
        .par_iter()
        .map(|&comp| {
            let start = Instant::now();
            let lhs = assemble_with(&t, Side::Lhs, comp).expand();
            let rhs = assemble_with(&t, Side::Rhs, comp).expand();
            let mut failures = Vec::new();
            let mut checked = 0;
            let mut max_dim = 0;
            let shift = match (lhs.weight_shift(), rhs.weight_shift()) {
                (Some(a), Some(b)) if a == b => Some(a),
                (None, None) => None,
                _ => {
                    failures.push("sides have different weight shifts".to_string());
                    None
                }
            };
            if let Some(shift) = shift {
                for &src in &blocks {
                    let dst = src.add(&shift);
                    let (Some(fs), Some(fd)) = (table.block(src), table.block(dst)) else { continue };
                    if !dst.in_range(pmax, qmax) {
                        continue;
                    }
                    let a = lhs.block_map(src).expect("homogeneous");
                    let b = rhs.block_map(src).expect("homogeneous");
                    checked += 1;
                    max_dim = max_dim.max(fs.dim()).max(fd.dim());
                    if a.mul_dense_right(&fs.matrix) != b.mul_dense_left(&fd.matrix) {
                        failures.push(format!("block {src}"));
                    }
                }
            }
            ComponentCheck {
                component: component_label(&comp),
                blocks_checked: checked,
                max_block_dim: max_dim,
                failures,
                elapsed_ms: start.elapsed().as_millis(),
            }
        })
        .collect();
    QreReport { pmax, qmax, u_mode: u.mode.label(), components }
}

/// `prod 1/(Q;Q)_n` with `Q = q^3` on the odd slots and `q` on the even ones.
pub fn boundary_weight(s: &State) -> Scalar {
    let mut den = Scalar::one();
    for (i, &n) in s.iter().enumerate() {
        let b = Scalar::q_pow(SLOT_FLAVORS[i].s());
        den = den.mul(&pochhammer(&b, &b, n));
    }
    den.inv().expect("nonzero")
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundaryBlock {
    #[serde(flatten)]
    pub weight: WeightVector,
    pub dim: usize,
    /// `F |chi xi chi xi chi xi> = |...>` restricted to the block.
    pub ket: bool,
    /// `<chi xi chi xi chi xi| F = <...|` restricted to the block.
    pub bra: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundaryReport {
    pub blocks: Vec<BoundaryBlock>,
    pub note: &'static str,
}

impl BoundaryReport {
    pub fn all_hold(&self) -> bool {
        self.blocks.iter().all(|b| b.ket && b.bra)
    }
}

/// Both boundary vector identities on every block with `P <= pmax`, `Q <= qmax`.
pub fn verify_boundary_conjecture(table: &IntertwinerTable, pmax: i32, qmax: i32) -> BoundaryReport {
    let blocks = table
        .blocks
        .values()
        .filter(|b| b.weight().in_range(pmax, qmax))
        .collect::<Vec<_>>()
        .par_iter()
        .map(|b| {
            let d = b.dim();
            let w: Vec<Scalar> = b.basis.iter().map(boundary_weight).collect();
            // The dual vector pairs through <m|m> = (Q^2;Q^2)_m.
            let wn: Vec<Scalar> = b.basis.iter().zip(&w).map(|(s, x)| x.mul(&state_norm(s))).collect();
            let f = &b.matrix;
            let ket = (0..d).all(|r| {
                let s = (0..d).fold(Scalar::zero(), |acc, c| acc.add(&f[r][c].mul(&w[c])));
                s == w[r]
            });
            let bra = (0..d).all(|c| {
                let s = (0..d).fold(Scalar::zero(), |acc, r| acc.add(&wn[r].mul(&f[r][c])));
                s == wn[c]
            });
            BoundaryBlock { weight: b.weight(), dim: d, ket, bra }
        })
        .collect();
    BoundaryReport {
        blocks,
        note: "finite-block evidence for the boundary vector identities, not a proof",
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qboson::Flavor;

    #[test]
    fn worked_component_lhs_is_single_term() {
        let u = UParams::generic();
        let lhs = assemble_component(Side::Lhs, [1, 1, 1, 1, 0, 0], &u).expand();
        assert_eq!(lhs.terms.len(), 1);
        let k1 = Op::k(Flavor::One);
        let k3 = Op::k(Flavor::Three);
        let want = TensorWord {
            terms: vec![(
                Scalar::one(),
                [Op::identity(Flavor::Three), k1.clone(), k3.clone(), k1.pow(2), k3, Op::a_minus(Flavor::One)],
            )],
        }
        .expand();
        assert_eq!(lhs, want);
        let rhs = assemble_component(Side::Rhs, [1, 1, 1, 1, 0, 0], &u).expand();
        assert_eq!(rhs, coproduct_word(1, 6, Variant::Reversed).expand());
    }

    #[test]
    fn correspondence_table_shape() {
        assert_eq!(corresponding_generator(&[0, 0, 0, 0, 0, 0]), (7, 7));
        assert_eq!(corresponding_generator(&[1, 1, 1, 1, 0, 0]), (1, 6));
        assert_eq!(corresponding_generator(&[0, 0, 0, 0, 0, 1]), (7, 4));
        assert_eq!(corresponding_generator(&[0, 0, 0, 1, 1, 0]), (7, 4));
        let labels: Vec<String> = all_components().iter().map(component_label).collect();
        for (e, l) in INTERTWINING_CORRESPONDENCE.iter().zip(&labels) {
            assert!(e.starts_with(l.as_str()));
        }
    }

    #[test]
    fn every_component_matches_its_generator() {
        let u = UParams::generic();
        for comp in all_components() {
            let r = match_intertwining(comp, &u);
            assert!(r.is_ok(), "{:?}", r);
        }
        assert!(match_all_components(&u).passed());
    }

    #[test]
    fn boundary_weight_vacuum() {
        assert!(boundary_weight(&[0; 6]).is_one());
        assert_eq!(boundary_weight(&[0, 1, 0, 0, 0, 0]), crate::scalar::sc("1/(1 - q)"));
    }
}
