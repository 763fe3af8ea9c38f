//! Spectral-parameter matrices obtained by closing products of `L` (base `q^3`)
//! and `J` (base `q`) with a trace or with boundary vectors.
//!
//! A multi-index over `arity` factors of `(C^2)^{(x)n}` is packed into a `u32`:
//! factor 0 occupies the most significant `n` bits and, inside a factor, site 1
//! is the most significant bit.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lj::{j_entry, l_entry, UMode, UParams};
use crate::qboson::{Flavor, Op};
use crate::scalar::{pochhammer, Scalar, Var};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ReductionError {
    #[error("malformed index {0:?}")]
    BadIndex(String),
    #[error("malformed matrix dump: {0}")]
    BadDump(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Kind {
    #[serde(rename = "tr")]
    Trace,
    #[serde(rename = "bv")]
    Boundary,
}

impl Kind {
    pub fn label(self) -> &'static str {
        match self {
            Kind::Trace => "tr",
            Kind::Boundary => "bv",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl std::str::FromStr for Kind {
    type Err = String;
    fn from_str(s: &str) -> Result<Kind, String> {
        match s {
            "tr" | "trace" => Ok(Kind::Trace),
            "bv" | "boundary" => Ok(Kind::Boundary),
            _ => Err(format!("unknown kind {s:?} (expected tr or bv)")),
        }
    }
}

/// Bits of one factor, site 1 first.
pub fn site_bits(x: u32, n: usize) -> Vec<u8> {
    (0..n).map(|i| ((x >> (n - 1 - i)) & 1) as u8).collect()
}

/// `|e_1 + ... + e_k>` inside one factor.
pub fn e_prefix(k: usize, n: usize) -> u32 {
    ((1u32 << k) - 1) << (n - k)
}

/// Splits a packed multi-index into its factors.
pub fn split_index(idx: u32, n: usize, arity: usize) -> Vec<u32> {
    let mask = (1u32 << n) - 1;
    (0..arity).map(|f| (idx >> ((arity - 1 - f) * n)) & mask).collect()
}

pub fn join_index(factors: &[u32], n: usize) -> u32 {
    factors.iter().fold(0, |acc, &f| (acc << n) | f)
}

/// `"01,10"` form of a packed multi-index.
pub fn format_index(idx: u32, n: usize, arity: usize) -> String {
    split_index(idx, n, arity)
        .iter()
        .map(|&f| site_bits(f, n).iter().map(|b| char::from(b'0' + b)).collect::<String>())
        .collect::<Vec<_>>()
        .join(",")
}

pub fn parse_index(s: &str, n: usize, arity: usize) -> Result<u32, ReductionError> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != arity || parts.iter().any(|p| p.len() != n || !p.chars().all(|c| c == '0' || c == '1')) {
        return Err(ReductionError::BadIndex(s.to_string()));
    }
    let factors: Vec<u32> = parts.iter().map(|p| u32::from_str_radix(p, 2).expect("checked bits")).collect();
    Ok(join_index(&factors, n))
}

/// Sparse matrix of an operator on `arity` copies of `(C^2)^{(x)n}`, keyed by
/// `(in, out)`, so that `M |in> = sum_out entry * |out>`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralMatrix {
    pub n: usize,
    pub arity: usize,
    pub kind: Kind,
    pub umode: UMode,
    pub entries: BTreeMap<(u32, u32), Scalar>,
}

#[derive(Serialize, Deserialize)]
struct EntryJson {
    #[serde(rename = "in")]
    inp: String,
    out: String,
    value: String,
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    n: usize,
    arity: usize,
    kind: Kind,
    umode: String,
    entries: Vec<EntryJson>,
}

impl SpectralMatrix {
    pub fn dim(&self) -> u32 {
        1 << (self.n * self.arity)
    }

    pub fn entry(&self, inp: u32, out: u32) -> Scalar {
        self.entries.get(&(inp, out)).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Nonzero `(out, value)` pairs of the image of `|inp>`.
    pub fn column(&self, inp: u32) -> impl Iterator<Item = (u32, &Scalar)> {
        self.entries.range((inp, 0)..=(inp, u32::MAX)).map(|(&(_, o), v)| (o, v))
    }

    pub fn factors(&self, idx: u32) -> Vec<u32> {
        split_index(idx, self.n, self.arity)
    }

    pub fn label(&self, idx: u32) -> String {
        format_index(idx, self.n, self.arity)
    }

    /// Multiplies every entry by `f(in, value)`; zero results are dropped.
    pub fn map_entries(&self, f: impl Fn(u32, &Scalar) -> Scalar) -> SpectralMatrix {
        let mut m = self.clone();
        m.entries = self
            .entries
            .iter()
            .map(|(&k, v)| (k, f(k.0, v)))
            .filter(|(_, v)| !v.is_zero())
            .collect();
        m
    }

    pub fn to_json(&self) -> serde_json::Value {
        let entries = self
            .entries
            .iter()
            .map(|(&(i, o), v)| EntryJson { inp: self.label(i), out: self.label(o), value: v.to_string() })
            .collect();
        let j = MatrixJson { n: self.n, arity: self.arity, kind: self.kind, umode: self.umode.label().into(), entries };
        serde_json::to_value(j).expect("matrix serialises")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<SpectralMatrix, ReductionError> {
        let j: MatrixJson = serde_json::from_value(v.clone()).map_err(|e| ReductionError::BadDump(e.to_string()))?;
        let umode = match j.umode.as_str() {
            "generic" => UMode::Generic,
            "spec" => UMode::Specialized,
            other => return Err(ReductionError::BadDump(format!("umode {other:?}"))),
        };
        if !(2..=3).contains(&j.arity) || j.n == 0 || j.n * j.arity > 30 {
            return Err(ReductionError::BadDump(format!("shape n={} arity={}", j.n, j.arity)));
        }
        let mut entries = BTreeMap::new();
        for e in j.entries {
            let i = parse_index(&e.inp, j.n, j.arity)?;
            let o = parse_index(&e.out, j.n, j.arity)?;
            let v: Scalar = e.value.parse().map_err(|err| ReductionError::BadDump(format!("{}: {err}", e.value)))?;
            if !v.is_zero() {
                entries.insert((i, o), v);
            }
        }
        Ok(SpectralMatrix { n: j.n, arity: j.arity, kind: j.kind, umode, entries })
    }
}

/// One site of a product word: local input bits, output bits and operator.
struct SiteEntry {
    inp: Vec<u8>,
    out: Vec<u8>,
    op: Op,
}

fn l_sites() -> Vec<SiteEntry> {
    let mut v = Vec::new();
    for idx in 0..16u8 {
        let b = |i: u8| (idx >> (3 - i)) & 1;
        let op = l_entry(b(0), b(1), b(2), b(3));
        if !op.is_zero() {
            v.push(SiteEntry { inp: vec![b(0), b(1)], out: vec![b(2), b(3)], op });
        }
    }
    v
}

fn j_sites(u: &UParams) -> Vec<SiteEntry> {
    let mut v = Vec::new();
    for idx in 0..64u8 {
        let b = |i: u8| (idx >> (5 - i)) & 1;
        let op = j_entry(b(0), b(1), b(2), b(3), b(4), b(5), u);
        if !op.is_zero() {
            v.push(SiteEntry { inp: vec![b(0), b(1), b(2)], out: vec![b(3), b(4), b(5)], op });
        }
    }
    v
}

/// Every choice of one site entry per site, as index lists.
fn words(nsites: usize, choices: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..nsites {
        out = out
            .into_iter()
            .flat_map(|w| {
                (0..choices).map(move |c| {
                    let mut w2 = w.clone();
                    w2.push(c);
                    w2
                })
            })
            .collect();
    }
    out
}

fn pack(bits_per_site: &[&[u8]], n: usize, arity: usize) -> u32 {
    let mut factors = vec![0u32; arity];
    for (site, bits) in bits_per_site.iter().enumerate() {
        for (f, &b) in bits.iter().enumerate() {
            factors[f] |= (b as u32) << (n - 1 - site);
        }
    }
    join_index(&factors, n)
}

fn build(sites: &[SiteEntry], n: usize, arity: usize, flavor: Flavor, close: impl Fn(&[u32], &Op) -> Scalar + Sync) -> BTreeMap<(u32, u32), Scalar> {
    let ws = words(n, sites.len());
    ws.par_iter()
        .filter_map(|w| {
            let mut op = Op::identity(flavor);
            for &c in w {
                op = op.compose(&sites[c].op).expect("single flavor");
            }
            let ins: Vec<&[u8]> = w.iter().map(|&c| sites[c].inp.as_slice()).collect();
            let outs: Vec<&[u8]> = w.iter().map(|&c| sites[c].out.as_slice()).collect();
            let i = pack(&ins, n, arity);
            let o = pack(&outs, n, arity);
            let val = close(&split_index(i, n, arity), &op);
            (!val.is_zero()).then_some(((i, o), val))
        })
        .collect()
}

/// `q^{-3d/2} (1 - z q^{3d})` with `d = |l - m|`.
pub fn trace_normaliser(l: u32, m: u32) -> Scalar {
    let d = l.abs_diff(m) as i32;
    let z = Scalar::var(Var::Z);
    Scalar::v_pow(-3 * d).mul(&Scalar::one().sub(&z.mul(&Scalar::q_pow(3 * d))))
}

/// Two-factor matrix from products of `L`.
pub fn build_r(kind: Kind, n: usize) -> SpectralMatrix {
    assert!(n >= 1, "n must be positive");
    let entries = build(&l_sites(), n, 2, Flavor::Three, |f, op| match kind {
        Kind::Trace => {
            let t = op.trace_z();
            if t.is_zero() {
                t
            } else {
                t.mul(&trace_normaliser(f[0].count_ones(), f[1].count_ones()))
            }
        }
        Kind::Boundary => op.sandwich_reduced(),
    });
    SpectralMatrix { n, arity: 2, kind, umode: UMode::Generic, entries }
}

/// Three-factor matrix from products of `J`.
pub fn build_g(kind: Kind, n: usize, u: &UParams) -> SpectralMatrix {
    assert!(n >= 1, "n must be positive");
    let entries = build(&j_sites(u), n, 3, Flavor::One, |_, op| match kind {
        Kind::Trace => op.trace_z(),
        Kind::Boundary => op.sandwich_reduced(),
    });
    SpectralMatrix { n, arity: 3, kind, umode: u.mode, entries }
}

#[derive(Clone, Debug, Serialize)]
pub struct HighestCheck {
    pub input: String,
    pub output: String,
    pub expected: String,
    pub found: String,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct HighestReport {
    pub checks: Vec<HighestCheck>,
}

impl HighestReport {
    pub fn passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.ok)
    }
}

/// Closed-form values of distinguished entries; for `R` the whole column is compared.
pub fn highest_entry_checks(m: &SpectralMatrix) -> HighestReport {
    let n = m.n;
    let mut checks = Vec::new();
    let mut push = |inp: u32, out: u32, want: Scalar, whole_column: bool| {
        let found = m.entry(inp, out);
        let mut ok = found == want;
        if whole_column {
            ok &= m.column(inp).all(|(o, _)| o == out);
        }
        checks.push(HighestCheck {
            input: m.label(inp),
            output: m.label(out),
            expected: want.to_string(),
            found: found.to_string(),
            ok,
        });
    };
    let z = Scalar::var(Var::Z);
    let q = Scalar::q();
    match (m.arity, m.kind) {
        (2, Kind::Trace) => {
            for l in 0..=n {
                for k in 0..=n {
                    let i = join_index(&[e_prefix(l, n), e_prefix(k, n)], n);
                    let sign = if l > k && (l - k) % 2 == 1 { -1 } else { 1 };
                    push(i, i, Scalar::from_i64(sign), true);
                }
            }
        }
        (2, Kind::Boundary) => push(0, 0, Scalar::one(), true),
        (3, kind) => {
            let ones = e_prefix(n, n);
            for l in 0..=n {
                for k in 0..=n {
                    let (a, b) = (e_prefix(l, n), e_prefix(k, n));
                    if l <= k {
                        let d = (k + n - l) as i32;
                        let want = match kind {
                            Kind::Trace => Scalar::v_pow(d).div(&Scalar::one().sub(&z.mul(&Scalar::q_pow(d)))),
                            Kind::Boundary => Scalar::v_pow(d)
                                .mul(&pochhammer(&z, &q, d as u32))
                                .div(&pochhammer(&q.mul(&z).neg(), &q, d as u32)),
                        }
                        .expect("nonzero denominator");
                        push(join_index(&[a, b, 0], n), join_index(&[a, b, ones], n), want, false);
                    }
                    if l >= k {
                        let d = (l + n - k) as i32;
                        let sign = Scalar::from_i64(if d % 2 == 1 { -1 } else { 1 });
                        let want = match kind {
                            Kind::Trace => Scalar::v_pow(d).div(&Scalar::one().sub(&z.mul(&Scalar::q_pow(d)))),
                            Kind::Boundary => Scalar::v_pow(d)
                                .mul(&pochhammer(&z, &q, d as u32))
                                .div(&pochhammer(&q.mul(&z).neg(), &q, d as u32)),
                        }
                        .expect("nonzero denominator")
                        .mul(&sign);
                        push(join_index(&[a, b, ones], n), join_index(&[a, b, 0], n), want, false);
                    }
                }
            }
        }
        _ => unreachable!("arity is 2 or 3"),
    }
    HighestReport { checks }
}

#[derive(Clone, Debug, Serialize)]
pub struct BlockInfo {
    pub key: Vec<u32>,
    pub dim: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct BlockReport {
    pub blocks: Vec<BlockInfo>,
    pub stray: Vec<String>,
}

impl BlockReport {
    pub fn passed(&self) -> bool {
        self.stray.is_empty()
    }
}

fn componentwise_sum(a: u32, b: u32, n: usize) -> Vec<u32> {
    let (x, y) = (site_bits(a, n), site_bits(b, n));
    x.iter().zip(&y).map(|(&p, &q)| (p + q) as u32).collect()
}

/// Block key of an input index: `(|a|, |b|)` for the trace `R`, `(|a|, |b|, |c|)`
/// for the trace `G`, and the componentwise sum `a + b` for boundary kinds.
fn block_key(m: &SpectralMatrix, idx: u32) -> Vec<u32> {
    let f = m.factors(idx);
    match m.kind {
        Kind::Trace => f.iter().map(|x| x.count_ones()).collect(),
        Kind::Boundary => componentwise_sum(f[0], f[1], m.n),
    }
}

/// Reason an entry breaks the selection rules, if any.
fn weight_law_violation(m: &SpectralMatrix, inp: u32, out: u32) -> Option<&'static str> {
    let (a, b) = (m.factors(inp), m.factors(out));
    if componentwise_sum(a[0], a[1], m.n) != componentwise_sum(b[0], b[1], m.n) {
        return Some("a + b != c + d");
    }
    if m.kind == Kind::Boundary {
        return None;
    }
    let w = |x: u32| x.count_ones() as i64;
    let n = m.n as i64;
    if m.arity == 2 {
        if w(a[0]) != w(b[0]) || w(a[1]) != w(b[1]) {
            return Some("|a| != |c| or |b| != |d|");
        }
    } else {
        let (l, mm, k, kp) = (w(a[0]), w(a[1]), w(a[2]), w(b[2]));
        if w(b[0]) != l + k + kp - n || w(b[1]) != mm - k - kp + n {
            return Some("target outside the graded sum");
        }
    }
    None
}

/// Exhaustive scan of the selection rules on every stored entry.
pub fn weight_law_violations(m: &SpectralMatrix) -> Vec<String> {
    m.entries
        .keys()
        .filter_map(|&(i, o)| weight_law_violation(m, i, o).map(|why| format!("{} -> {}: {why}", m.label(i), m.label(o))))
        .collect()
}

/// Groups input indices into the blocks preserved by the matrix and reports
/// every entry that leaves its block or breaks a selection rule.
pub fn block_decomposition(m: &SpectralMatrix) -> BlockReport {
    let mut blocks: BTreeMap<Vec<u32>, usize> = BTreeMap::new();
    for i in 0..m.dim() {
        *blocks.entry(block_key(m, i)).or_default() += 1;
    }
    let mut stray = weight_law_violations(m);
    let conserved = m.arity == 2 || m.kind == Kind::Boundary;
    if conserved {
        for &(i, o) in m.entries.keys() {
            if block_key(m, i) != block_key(m, o) {
                stray.push(format!("{} -> {}: leaves block {:?}", m.label(i), m.label(o), block_key(m, i)));
            }
        }
    }
    let blocks = blocks.into_iter().map(|(key, dim)| BlockInfo { key, dim }).collect();
    BlockReport { blocks, stray }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qboson::{boundary_normaliser_series, truncated_sandwich_oracle, truncated_trace_oracle};
    use crate::scalar::{sc, Series};

    #[test]
    fn index_round_trip() {
        for i in 0..64 {
            let s = format_index(i, 2, 3);
            assert_eq!(parse_index(&s, 2, 3).unwrap(), i);
        }
        assert_eq!(format_index(0b0110, 2, 2), "01,10");
        assert!(parse_index("01,1", 2, 2).is_err());
    }

    #[test]
    fn r_trace_n1_is_signed_identity() {
        let r = build_r(Kind::Trace, 1);
        for i in 0..2u32 {
            for j in 0..2u32 {
                let idx = join_index(&[i, j], 1);
                let col: Vec<_> = r.column(idx).collect();
                let sign = if i * (1 - j) == 1 { -1 } else { 1 };
                assert_eq!(col, vec![(idx, &Scalar::from_i64(sign))]);
            }
        }
    }

    #[test]
    fn r_boundary_six_vertex() {
        let r = build_r(Kind::Boundary, 1);
        let i = parse_index("1,0", 1, 2).unwrap();
        assert_eq!(r.entry(i, parse_index("0,1", 1, 2).unwrap()), sc("(1 + q^3)/(1 + q^3*z)"));
        assert_eq!(r.entry(i, i), sc("-q^(3/2)*(1 - z)/(1 + q^3*z)"));
    }

    #[test]
    fn g_trace_vacuum_column() {
        let g = build_g(Kind::Trace, 1, &UParams::generic());
        let col: Vec<_> = g.column(0).collect();
        assert_eq!(col, vec![(1, &sc("q^(1/2)/(1 - q*z)"))]);
    }

    #[test]
    fn highest_entries_and_blocks() {
        for n in 1..=2 {
            for kind in [Kind::Trace, Kind::Boundary] {
                let r = build_r(kind, n);
                assert!(highest_entry_checks(&r).passed(), "R {kind} n={n}");
                assert!(block_decomposition(&r).passed(), "R {kind} n={n}");
                let g = build_g(kind, n, &UParams::generic());
                let h = highest_entry_checks(&g);
                assert!(h.passed(), "G {kind} n={n}: {:?}", h.checks.iter().filter(|c| !c.ok).collect::<Vec<_>>());
                let b = block_decomposition(&g);
                assert!(b.passed(), "G {kind} n={n}: {:?}", b.stray);
            }
        }
    }

    #[test]
    fn trace_block_shapes() {
        let r1 = block_decomposition(&build_r(Kind::Trace, 1));
        assert_eq!(r1.blocks.len(), 4);
        assert!(r1.blocks.iter().all(|b| b.dim == 1));
        let r2 = block_decomposition(&build_r(Kind::Trace, 2));
        assert_eq!(r2.blocks.len(), 9);
        assert_eq!(r2.blocks.iter().find(|b| b.key == vec![1, 1]).unwrap().dim, 4);
    }

    #[test]
    fn boundary_vacuum_at_zero_spectral_parameter() {
        let r = build_r(Kind::Boundary, 2);
        let at0 = r.entry(0, 0).subst_scalar(Var::Z, &Scalar::zero());
        assert!(at0.is_one());
    }

    #[test]
    fn boundary_entries_agree_with_series_oracle() {
        // The full sandwich of the word behind each sampled entry equals the
        // reduced entry times the boundary normaliser, order by order in z.
        let u = UParams::default_specialized();
        let g = build_g(Kind::Boundary, 2, &u);
        let sites = j_sites(&u);
        let order = 6;
        let norm = boundary_normaliser_series(Flavor::One, order);
        for w in words(2, sites.len()).iter().step_by(37) {
            let (s0, s1) = (&sites[w[0]], &sites[w[1]]);
            let i = pack(&[&s0.inp, &s1.inp], 2, 3);
            let o = pack(&[&s0.out, &s1.out], 2, 3);
            let op = s0.op.compose(&s1.op).unwrap();
            // Extra states so that the ladder shift cannot truncate low orders.
            let oracle = truncated_sandwich_oracle(&op, order as u32 + 4);
            let built = Series::expand(&g.entry(i, o), order).unwrap().mul(&norm);
            assert_eq!(oracle.coeffs[..=order], built.coeffs[..], "{} -> {}", g.label(i), g.label(o));
        }
    }

    #[test]
    fn trace_entries_agree_with_series_oracle() {
        let r = build_r(Kind::Trace, 2);
        let sites = l_sites();
        let order = 5;
        for w in words(2, sites.len()) {
            let (s0, s1) = (&sites[w[0]], &sites[w[1]]);
            let i = pack(&[&s0.inp, &s1.inp], 2, 2);
            let o = pack(&[&s0.out, &s1.out], 2, 2);
            let op = s0.op.compose(&s1.op).unwrap();
            let f = r.factors(i);
            let rho = trace_normaliser(f[0].count_ones(), f[1].count_ones());
            let oracle = truncated_trace_oracle(&op, order);
            let built = Series::expand(&r.entry(i, o).div(&rho).unwrap(), order).unwrap();
            assert_eq!(oracle, built, "{} -> {}", r.label(i), r.label(o));
        }
    }
}
