use rayon::prelude::*;
use serde::Serialize;

use super::solve::{relations, Relation};
use super::table::IntertwinerTable;
use super::generators;
use crate::scalar::{pochhammer, Scalar, Var};
use crate::tensor::{Dense, State, WeightVector, SLOT_FLAVORS};

#[derive(Clone, Debug, Serialize)]
pub struct BlockCheck {
    #[serde(flatten)]
    pub weight: WeightVector,
    pub dim: usize,
    pub involution: bool,
    pub integral: bool,
    pub symmetric: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PropsReport {
    pub blocks: Vec<BlockCheck>,
    pub relations_checked: usize,
    pub relation_failures: Vec<String>,
}

impl PropsReport {
    pub fn passed(&self) -> bool {
        self.relation_failures.is_empty()
            && self.blocks.iter().all(|b| b.involution && b.integral && b.symmetric)
    }
}

pub(crate) fn dense_mul(a: &Dense, b: &Dense) -> Dense {
    let n = b.first().map(|r| r.len()).unwrap_or(0);
    let mut out = vec![vec![Scalar::zero(); n]; a.len()];
    for (i, ra) in a.iter().enumerate() {
        for (k, x) in ra.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for j in 0..n {
                if !b[k][j].is_zero() {
                    out[i][j] = out[i][j].add(&x.mul(&b[k][j]));
                }
            }
        }
    }
    out
}

/// Descriptions of the relations `A F_src = F_dst B` that fail exactly.
pub(crate) fn relation_failures(table: &IntertwinerTable, rels: &[Relation]) -> Vec<String> {
    rels.par_iter()
        .filter_map(|rel| {
            let fs = &table.block(rel.src)?.matrix;
            let fd = &table.block(rel.dst)?.matrix;
            let lhs = rel.a.mul_dense_right(fs);
            let rhs = rel.b.mul_dense_left(fd);
            (lhs != rhs).then(|| format!("t_{{{},{}}} on block {}", rel.gen.0, rel.gen.1, rel.src))
        })
        .collect()
}

/// Checks every relation whose blocks are both in the table; returns the failures.
pub fn verify_relations(table: &IntertwinerTable) -> Vec<String> {
    let gens = generators();
    relation_failures(table, &relations(&gens, table.pmax, table.qmax))
}

/// `prod (q^6;q^6)_n` over the `q^3` slots times `prod (q^2;q^2)_n` over the `q` slots.
pub fn state_norm(s: &State) -> Scalar {
    let mut acc = Scalar::one();
    for (i, &n) in s.iter().enumerate() {
        let b = Scalar::q_pow(2 * SLOT_FLAVORS[i].s() as i32);
        acc = acc.mul(&pochhammer(&b, &b, n));
    }
    acc
}

fn is_in_zq(x: &Scalar) -> bool {
    x.den().is_one()
        && x.num().terms().iter().all(|(m, _)| {
            let e = m.exp(Var::V);
            e >= 0 && e % 2 == 0 && Var::ALL.iter().all(|&v| v == Var::V || m.exp(v) == 0)
        })
}

/// Involutivity, integrality, the norm symmetry and all intertwining relations.
pub fn check_intertwiner_props(table: &IntertwinerTable) -> PropsReport {
    let blocks: Vec<BlockCheck> = table
        .blocks
        .values()
        .collect::<Vec<_>>()
        .par_iter()
        .map(|b| {
            let f = &b.matrix;
            let d = b.dim();
            let sq = dense_mul(f, f);
            let involution = (0..d).all(|i| (0..d).all(|j| if i == j { sq[i][j].is_one() } else { sq[i][j].is_zero() }));
            let integral = f.iter().flatten().all(is_in_zq);
            let norms: Vec<Scalar> = b.basis.iter().map(state_norm).collect();
            let symmetric = (0..d).all(|r| (0..d).all(|c| f[r][c].mul(&norms[r]) == f[c][r].mul(&norms[c])));
            BlockCheck { weight: b.weight(), dim: d, involution, integral, symmetric }
        })
        .collect();
    let gens = generators();
    let rels = relations(&gens, table.pmax, table.qmax);
    let relation_failures = relation_failures(table, &rels);
    PropsReport { blocks, relations_checked: rels.len(), relation_failures }
}
