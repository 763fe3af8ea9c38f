//! Block-by-block solution of the intertwining relations.
//!
//! Each block is solved modulo several primes at many integer points
//! `v = 2, 3, ...`, the entries are interpolated as polynomials in `q`,
//! lifted by Chinese remaindering and finally checked exactly against every
//! relation whose source and target blocks are in range.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use rayon::prelude::*;
use thiserror::Error;

use super::table::{IntertwinerBlock, IntertwinerTable};
use super::{generators, props, Generator};
use crate::modp::{crt_symmetric, Echelon, Fp, PRIMES};
use crate::scalar::{Mono, Poly, Scalar, Var};
use crate::tensor::{block_basis, blocks_in_range, BlockMap, WeightVector};

#[derive(Clone, Debug)]
pub struct SolveOptions {
    /// Primes used in the first reconstruction attempt.
    pub primes: usize,
    /// Evaluation points used before the degree check.
    pub initial_points: usize,
    pub max_points: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { primes: 2, initial_points: 24, max_points: 1024 }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolveError {
    #[error("block {0}: the relations do not determine the block uniquely")]
    Underdetermined(WeightVector),
    #[error("block {0}: the relations are inconsistent")]
    Inconsistent(WeightVector),
    #[error("no admissible evaluation point found")]
    NoPoints,
    #[error("degree exceeds the point budget")]
    DegreeBudget,
    #[error("reconstructed table violates {0} relations")]
    Verification(usize),
}

/// One generator restricted to a source block whose image block is in range.
#[derive(Clone, Debug)]
pub(crate) struct Relation {
    pub gen: (usize, usize),
    pub src: WeightVector,
    pub dst: WeightVector,
    /// Direct side, multiplying the intertwiner on the left.
    pub a: BlockMap,
    /// Reversed side, multiplying the intertwiner on the right.
    pub b: BlockMap,
}

pub(crate) fn relations(gens: &[Generator], pmax: i32, qmax: i32) -> Vec<Relation> {
    let blocks = blocks_in_range(pmax, qmax);
    let pairs: Vec<(usize, WeightVector)> =
        (0..gens.len()).flat_map(|g| blocks.iter().map(move |&w| (g, w))).collect();
    pairs
        .par_iter()
        .filter_map(|&(g, src)| {
            let gen = &gens[g];
            let dst = src.add(&gen.shift);
            if !dst.in_range(pmax, qmax) || block_basis(dst).is_empty() {
                return None;
            }
            let (a, b) = gen.action(src);
            if a.is_zero() && b.is_zero() {
                return None;
            }
            Some(Relation { gen: (gen.i, gen.j), src, dst, a, b })
        })
        .collect()
}

type Mat = Vec<Vec<u64>>;

pub(crate) struct PointEval {
    fp: Fp,
    v: u64,
    vinv: u64,
}

impl PointEval {
    pub(crate) fn new(fp: Fp, v: u64) -> PointEval {
        PointEval { fp, v, vinv: fp.inv(v) }
    }

    fn vpow(&self, e: i32) -> u64 {
        let base = if e < 0 { self.vinv } else { self.v };
        self.fp.pow(base, e.unsigned_abs() as u64)
    }

    fn poly(&self, p: &Poly) -> u64 {
        let mut acc = 0;
        for (m, c) in p.terms() {
            let t = self.fp.mul(self.fp.from_bigint(c), self.vpow(m.exp(Var::V)));
            acc = self.fp.add(acc, t);
        }
        acc
    }

    pub(crate) fn scalar(&self, s: &Scalar) -> Option<u64> {
        let n = self.poly(s.num());
        let d = self.poly(s.den());
        if d == 0 {
            return None;
        }
        Some(if d == 1 { n } else { self.fp.mul(n, self.fp.inv(d)) })
    }

    pub(crate) fn map(&self, m: &BlockMap) -> Option<Mat> {
        let mut out = vec![vec![0u64; m.ncols()]; m.rows];
        for (c, col) in m.cols.iter().enumerate() {
            for (r, x) in col {
                out[*r][c] = self.scalar(x)?;
            }
        }
        Some(out)
    }
}

pub(crate) fn matmul(fp: &Fp, a: &Mat, b: &Mat) -> Mat {
    let n = b.first().map(|r| r.len()).unwrap_or(0);
    let mut out = vec![vec![0u64; n]; a.len()];
    for (i, ra) in a.iter().enumerate() {
        for (k, &x) in ra.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for j in 0..n {
                if b[k][j] != 0 {
                    out[i][j] = fp.add(out[i][j], fp.mul(x, b[k][j]));
                }
            }
        }
    }
    out
}

fn transpose(a: &Mat, cols: usize) -> Mat {
    (0..cols).map(|j| a.iter().map(|r| r[j]).collect()).collect()
}

/// How a block is determined from the blocks solved before it.
#[derive(Clone, Debug)]
enum Plan {
    Vacuum,
    /// `A X = F_dst B` for the listed lowering relations.
    Left(Vec<usize>),
    /// `X B = A F_src` for the listed relations arriving from below.
    Right(Vec<usize>),
    /// All relations touching the block, as one Kronecker system.
    Global(Vec<usize>),
}

/// Adds the rows of the Kronecker system for block `w` contributed by
/// relation `rel`, with the other block taken from `known`.
pub(crate) fn kronecker_rows(
    fp: &Fp,
    pe: &PointEval,
    w: WeightVector,
    d: usize,
    rel: &Relation,
    known: &dyn Fn(WeightVector) -> Option<Mat>,
    ech: &mut Echelon,
) -> Option<()> {
    let n = d * d;
    let a = pe.map(&rel.a)?;
    let b = pe.map(&rel.b)?;
    if rel.src == w && rel.dst == w {
        for i in 0..d {
            for c in 0..d {
                let mut row = vec![0u64; n + 1];
                for k in 0..d {
                    row[k * d + c] = fp.add(row[k * d + c], a[i][k]);
                    row[i * d + k] = fp.sub(row[i * d + k], b[k][c]);
                }
                ech.push(row);
            }
        }
    } else if rel.src == w {
        let Some(fd) = known(rel.dst) else { return Some(()) };
        let rhs = matmul(fp, &fd, &b);
        for i in 0..a.len() {
            for c in 0..d {
                let mut row = vec![0u64; n + 1];
                for k in 0..d {
                    row[k * d + c] = a[i][k];
                }
                row[n] = rhs[i][c];
                ech.push(row);
            }
        }
    } else if rel.dst == w {
        let Some(fs) = known(rel.src) else { return Some(()) };
        let rhs = matmul(fp, &a, &fs);
        let ds = fs.len();
        for r in 0..d {
            for c in 0..ds {
                let mut row = vec![0u64; n + 1];
                for k in 0..d {
                    row[r * d + k] = b[k][c];
                }
                row[n] = rhs[r][c];
                ech.push(row);
            }
        }
    }
    Some(())
}

struct Solver {
    fp_plans: Fp,
    blocks: Vec<WeightVector>,
    pos: BTreeMap<WeightVector, usize>,
    dims: Vec<usize>,
    rels: Vec<Relation>,
    plans: Vec<Plan>,
}

impl Solver {
    fn new(pmax: i32, qmax: i32) -> Solver {
        let gens = generators();
        let blocks = blocks_in_range(pmax, qmax);
        let pos = blocks.iter().enumerate().map(|(i, w)| (*w, i)).collect();
        let dims = blocks.iter().map(|w| block_basis(*w).len()).collect();
        let rels = relations(&gens, pmax, qmax);
        Solver { fp_plans: Fp::new(PRIMES[0]), blocks, pos, dims, rels, plans: Vec::new() }
    }

    fn before(&self, a: WeightVector, b: WeightVector) -> bool {
        self.pos[&a] < self.pos[&b]
    }

    /// Picks, for every block, a small set of relations of full rank at a
    /// sample point.
    fn make_plans(&mut self) -> Result<(), SolveError> {
        let fp = self.fp_plans;
        let pe = PointEval::new(fp, 1_000_003);
        let mut plans = Vec::with_capacity(self.blocks.len());
        for (bi, &w) in self.blocks.iter().enumerate() {
            let d = self.dims[bi];
            if w == WeightVector::new(0, 0) {
                plans.push(Plan::Vacuum);
                continue;
            }
            let mut ech = Echelon::new(fp, d);
            let mut chosen = Vec::new();
            for (ri, rel) in self.rels.iter().enumerate() {
                if rel.src != w || rel.dst == w || !self.before(rel.dst, w) {
                    continue;
                }
                let a = pe.map(&rel.a).ok_or(SolveError::NoPoints)?;
                let mut raised = false;
                for row in a {
                    let mut r = row;
                    r.push(0);
                    raised |= ech.push(r);
                }
                if raised {
                    chosen.push(ri);
                }
                if ech.is_full() {
                    break;
                }
            }
            if ech.is_full() {
                plans.push(Plan::Left(chosen));
                continue;
            }
            let mut ech = Echelon::new(fp, d);
            let mut chosen = Vec::new();
            for (ri, rel) in self.rels.iter().enumerate() {
                if rel.dst != w || rel.src == w || !self.before(rel.src, w) {
                    continue;
                }
                let b = pe.map(&rel.b).ok_or(SolveError::NoPoints)?;
                let mut raised = false;
                for mut r in transpose(&b, b.first().map(|x| x.len()).unwrap_or(0)) {
                    r.push(0);
                    raised |= ech.push(r);
                }
                if raised {
                    chosen.push(ri);
                }
                if ech.is_full() {
                    break;
                }
            }
            if ech.is_full() {
                plans.push(Plan::Right(chosen));
                continue;
            }
            let touching: Vec<usize> = self
                .rels
                .iter()
                .enumerate()
                .filter(|(_, r)| (r.src == w && self.pos[&r.dst] <= bi) || (r.dst == w && self.pos[&r.src] <= bi))
                .map(|(i, _)| i)
                .collect();
            plans.push(Plan::Global(touching));
        }
        self.plans = plans;
        Ok(())
    }

    /// All blocks at one point, or `None` if the point is degenerate.
    fn solve_point(&self, fp: &Fp, v: u64) -> Result<Option<Vec<Mat>>, SolveError> {
        let pe = PointEval::new(*fp, v);
        let mut sol: Vec<Mat> = Vec::with_capacity(self.blocks.len());
        for (bi, &w) in self.blocks.iter().enumerate() {
            let d = self.dims[bi];
            let x = match &self.plans[bi] {
                Plan::Vacuum => vec![vec![1u64]],
                Plan::Left(ids) => {
                    let mut a_rows = Vec::new();
                    let mut rhs_rows = Vec::new();
                    for &ri in ids {
                        let rel = &self.rels[ri];
                        let (Some(a), Some(b)) = (pe.map(&rel.a), pe.map(&rel.b)) else { return Ok(None) };
                        let fd = &sol[self.pos[&rel.dst]];
                        rhs_rows.extend(matmul(fp, fd, &b));
                        a_rows.extend(a);
                    }
                    match fp.solve(&a_rows, &rhs_rows) {
                        Ok(x) => x,
                        Err(crate::modp::SolveFailure::RankDeficient) => return Ok(None),
                        Err(_) => return Err(SolveError::Inconsistent(w)),
                    }
                }
                Plan::Right(ids) => {
                    let mut bt_rows = Vec::new();
                    let mut rhs_rows = Vec::new();
                    for &ri in ids {
                        let rel = &self.rels[ri];
                        let (Some(a), Some(b)) = (pe.map(&rel.a), pe.map(&rel.b)) else { return Ok(None) };
                        let fs = &sol[self.pos[&rel.src]];
                        let l = matmul(fp, &a, fs);
                        let ds = fs.len();
                        bt_rows.extend(transpose(&b, ds));
                        rhs_rows.extend(transpose(&l, ds));
                    }
                    match fp.solve(&bt_rows, &rhs_rows) {
                        Ok(xt) => transpose(&xt, d),
                        Err(crate::modp::SolveFailure::RankDeficient) => return Ok(None),
                        Err(_) => return Err(SolveError::Inconsistent(w)),
                    }
                }
                Plan::Global(ids) => {
                    let mut ech = Echelon::new(*fp, d * d);
                    let known = |u: WeightVector| -> Option<Mat> {
                        let i = self.pos[&u];
                        if i < bi {
                            Some(sol[i].clone())
                        } else {
                            None
                        }
                    };
                    for &ri in ids {
                        if kronecker_rows(fp, &pe, w, d, &self.rels[ri], &known, &mut ech).is_none() {
                            return Ok(None);
                        }
                    }
                    if ech.is_inconsistent() {
                        return Err(SolveError::Inconsistent(w));
                    }
                    let Some(x) = ech.solution() else {
                        return Err(SolveError::Underdetermined(w));
                    };
                    x.chunks(d).map(|c| c.to_vec()).collect()
                }
            };
            sol.push(x);
        }
        Ok(Some(sol))
    }

    /// Values at `n` admissible points, continuing from `have`.
    fn collect_points(
        &self,
        fp: &Fp,
        n: usize,
        have: &mut Vec<(u64, Vec<Mat>)>,
        next_v: &mut u64,
    ) -> Result<(), SolveError> {
        let mut misses = 0;
        while have.len() < n {
            let v = *next_v;
            *next_v += 1;
            match self.solve_point(fp, v)? {
                Some(sol) => have.push((fp.mul(v, v), sol)),
                None => {
                    misses += 1;
                    if misses > 64 {
                        return Err(SolveError::NoPoints);
                    }
                }
            }
        }
        Ok(())
    }
}

/// Per-entry interpolated coefficients in `q` (ascending).
fn interpolate_all(fp: &Fp, pts: &[(u64, Vec<Mat>)], dims: &[usize]) -> Vec<Vec<Vec<Vec<u64>>>> {
    let xs: Vec<u64> = pts.iter().map(|p| p.0).collect();
    dims.iter()
        .enumerate()
        .map(|(bi, &d)| {
            (0..d)
                .map(|r| {
                    (0..d)
                        .map(|c| {
                            let ys: Vec<u64> = pts.iter().map(|p| p.1[bi][r][c]).collect();
                            fp.interpolate(&xs, &ys)
                        })
                        .collect()
                })
                .collect()
        })
        .collect()
}

fn max_degree(coeffs: &[Vec<Vec<Vec<u64>>>]) -> usize {
    coeffs
        .iter()
        .flatten()
        .flatten()
        .map(|c| c.iter().rposition(|&x| x != 0).map(|i| i + 1).unwrap_or(0))
        .max()
        .unwrap_or(0)
}

/// Solves the intertwining relations on all blocks with `P <= pmax`,
/// `Q <= qmax`, normalised by `F|0> = |0>`, and verifies the result exactly.
pub fn solve_intertwiner(pmax: i32, qmax: i32, opts: &SolveOptions) -> Result<IntertwinerTable, SolveError> {
    let mut solver = Solver::new(pmax, qmax);
    solver.make_plans()?;
    let margin = 4;

    // Fix the number of points with the first prime.
    let fp0 = Fp::new(PRIMES[0]);
    let mut pts0 = Vec::new();
    let mut next_v = 2u64;
    let mut n = opts.initial_points.max(margin + 1);
    let coeffs0 = loop {
        solver.collect_points(&fp0, n, &mut pts0, &mut next_v)?;
        let c = interpolate_all(&fp0, &pts0, &solver.dims);
        if max_degree(&c) + margin <= n {
            break c;
        }
        if n >= opts.max_points {
            return Err(SolveError::DegreeBudget);
        }
        n = (2 * n).min(opts.max_points);
    };

    let mut residues = vec![coeffs0];
    let mut used = vec![PRIMES[0]];
    let mut nprimes = opts.primes.clamp(1, PRIMES.len());
    loop {
        while used.len() < nprimes {
            let p = PRIMES[used.len()];
            let fp = Fp::new(p);
            let mut pts = Vec::new();
            let mut nv = 2u64;
            solver.collect_points(&fp, n, &mut pts, &mut nv)?;
            residues.push(interpolate_all(&fp, &pts, &solver.dims));
            used.push(p);
        }
        let table = reconstruct(&solver, &residues, &used, pmax, qmax);
        let failures = props::relation_failures(&table, &solver.rels);
        if failures.is_empty() {
            return Ok(table);
        }
        if nprimes >= PRIMES.len() {
            return Err(SolveError::Verification(failures.len()));
        }
        nprimes += 1;
    }
}

fn reconstruct(
    solver: &Solver,
    residues: &[Vec<Vec<Vec<Vec<u64>>>>],
    primes: &[u64],
    pmax: i32,
    qmax: i32,
) -> IntertwinerTable {
    let mut blocks = BTreeMap::new();
    for (bi, &w) in solver.blocks.iter().enumerate() {
        let d = solver.dims[bi];
        let matrix = (0..d)
            .map(|r| {
                (0..d)
                    .map(|c| {
                        let len = residues[0][bi][r][c].len();
                        let terms: Vec<(Mono, BigInt)> = (0..len)
                            .filter_map(|k| {
                                let rs: Vec<u64> = residues.iter().map(|res| res[bi][r][c][k]).collect();
                                let x = crt_symmetric(&rs, primes);
                                (x != BigInt::from(0)).then(|| (Mono::var(Var::V, 2 * k as i32), x))
                            })
                            .collect();
                        Scalar::from_poly(Poly::from_terms(terms))
                    })
                    .collect()
            })
            .collect();
        blocks.insert(w, IntertwinerBlock { p: w.p, q: w.q, basis: block_basis(w), matrix });
    }
    IntertwinerTable { pmax, qmax, blocks }
}

/// Outcome of re-solving one block from all relations touching it, with
/// every other block taken from a table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlobalCheck {
    pub weight: WeightVector,
    pub unknowns: usize,
    pub rank: usize,
    pub consistent: bool,
    pub matches_table: bool,
}

/// Kronecker-form re-solve of block `w` modulo `PRIMES[0]` at `v = v0`.
pub fn solve_block_global(table: &IntertwinerTable, w: WeightVector, v0: u64) -> Option<GlobalCheck> {
    let fp = Fp::new(PRIMES[0]);
    let pe = PointEval::new(fp, v0);
    let blk = table.block(w)?;
    let d = blk.dim();
    let gens = generators();
    let rels = relations(&gens, table.pmax, table.qmax);
    let known = |u: WeightVector| -> Option<Mat> {
        let b = table.block(u)?;
        b.matrix.iter().map(|r| r.iter().map(|x| pe.scalar(x)).collect()).collect()
    };
    let mut ech = Echelon::new(fp, d * d);
    if w == WeightVector::new(0, 0) {
        let mut row = vec![0u64; 2];
        row[0] = 1;
        row[1] = 1;
        ech.push(row);
    }
    for rel in rels.iter().filter(|r| r.src == w || r.dst == w) {
        kronecker_rows(&fp, &pe, w, d, rel, &known, &mut ech)?;
    }
    let consistent = !ech.is_inconsistent();
    let rank = ech.rank();
    let mine = known(w)?;
    let matches_table = match ech.solution() {
        Some(x) => x.chunks(d).zip(&mine).all(|(a, b)| a == b.as_slice()),
        None => false,
    };
    Some(GlobalCheck { weight: w, unknowns: d * d, rank, consistent, matches_table })
}

