//! Yang-Baxter and G2 reflection equation checks for reduced matrices.
//!
//! Symbolic mode clears denominators: each factor `M(z)` is replaced by
//! `D_M(z) M(z)` with `D_M` the lcm of its entry denominators. Both sides of
//! each equation contain the same multiset of `(matrix, argument)` factors, so
//! the polynomial residual vanishes iff the rational one does. Point mode
//! evaluates every factor at exact rational `(v, x, y, u1, u3, u4)`.

use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::lj::UMode;
use crate::reduction::{format_index, join_index, split_index, Kind, SpectralMatrix};
use crate::scalar::{gcd, Mono, Point, Poly, Scalar, Var};

/// Exponent pairs `(a, b)` of the spectral arguments `x^a y^b`, in the order
/// in which they appear on the left-hand side of the G2 equation.
pub const G2_ARGUMENTS: [(i32, i32); 6] = [(1, 0), (1, 1), (2, 3), (1, 2), (1, 3), (0, 1)];

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum VerifyMode {
    Symbolic,
    Points { count: usize, seed: u64, height: i64 },
}

impl VerifyMode {
    pub fn points(count: usize, seed: u64) -> VerifyMode {
        VerifyMode::Points { count, seed, height: 97 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Residual {
    pub input: String,
    pub output: String,
    /// A leading term of the residual (symbolic) or its value (points).
    pub detail: String,
    pub point: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct EquationReport {
    pub equation: String,
    pub kind: Kind,
    pub n: usize,
    pub umode: UMode,
    pub mode: VerifyMode,
    pub points_used: usize,
    pub entries_checked: usize,
    pub residuals: Vec<Residual>,
    pub elapsed_ms: u128,
}

impl EquationReport {
    pub fn passed(&self) -> bool {
        self.residuals.is_empty() && self.entries_checked > 0
    }
}

/// Where a matrix acts inside `V (x) V (x) V`: local factor `a` sits in space `spaces[a]`.
#[derive(Clone, Copy, Debug)]
pub struct Placement<'a> {
    pub matrix: &'a SpectralMatrix,
    pub spaces: &'a [usize],
    pub arg: (i32, i32),
}

/// The operator `R_{ij}(x^a y^b)`: first factor of `R` on space `i`.
fn r_at<'a>(m: &'a SpectralMatrix, spaces: &'a [usize], arg: (i32, i32)) -> Placement<'a> {
    Placement { matrix: m, spaces, arg }
}

/// Both sides of `R12(x) R13(xy) R23(y) = R23(y) R13(xy) R12(x)`, leftmost first.
pub fn ybe_sides(r: &SpectralMatrix) -> (Vec<Placement<'_>>, Vec<Placement<'_>>) {
    const S12: [usize; 2] = [0, 1];
    const S13: [usize; 2] = [0, 2];
    const S23: [usize; 2] = [1, 2];
    let lhs = vec![r_at(r, &S12, (1, 0)), r_at(r, &S13, (1, 1)), r_at(r, &S23, (0, 1))];
    let rhs = vec![r_at(r, &S23, (0, 1)), r_at(r, &S13, (1, 1)), r_at(r, &S12, (1, 0))];
    (lhs, rhs)
}

/// Both sides of the G2 reflection equation
/// `R12(x) G132(xy) R23(x^2y^3) G213(xy^2) R31(xy^3) G321(y)
///  = G231(y) R13(xy^3) G123(xy^2) R32(x^2y^3) G312(xy) R21(x)`,
/// leftmost first. `G_{ijk}` puts the first factor of `G` on space `i`, the
/// second on `j` and the third on `k`, like `R_{ij}`.
pub fn g2_sides<'a>(r: &'a SpectralMatrix, g: &'a SpectralMatrix) -> (Vec<Placement<'a>>, Vec<Placement<'a>>) {
    const R12: [usize; 2] = [0, 1];
    const R13: [usize; 2] = [0, 2];
    const R23: [usize; 2] = [1, 2];
    const R21: [usize; 2] = [1, 0];
    const R31: [usize; 2] = [2, 0];
    const R32: [usize; 2] = [2, 1];
    const G123: [usize; 3] = [0, 1, 2];
    const G132: [usize; 3] = [0, 2, 1];
    const G213: [usize; 3] = [1, 0, 2];
    const G231: [usize; 3] = [1, 2, 0];
    const G312: [usize; 3] = [2, 0, 1];
    const G321: [usize; 3] = [2, 1, 0];
    let [a1, a2, a3, a4, a5, a6] = G2_ARGUMENTS;
    let lhs = vec![
        r_at(r, &R12, a1),
        r_at(g, &G132, a2),
        r_at(r, &R23, a3),
        r_at(g, &G213, a4),
        r_at(r, &R31, a5),
        r_at(g, &G321, a6),
    ];
    let rhs = vec![
        r_at(g, &G231, a6),
        r_at(r, &R13, a5),
        r_at(g, &G123, a4),
        r_at(r, &R32, a3),
        r_at(g, &G312, a2),
        r_at(r, &R21, a1),
    ];
    (lhs, rhs)
}

/// Coefficient ring for the residual products.
trait Coeff: Clone + Send + Sync {
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn describe(&self) -> String;
}

impl Coeff for Poly {
    fn is_zero(&self) -> bool {
        Poly::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        Poly::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        Poly::sub(self, o)
    }
    fn neg(&self) -> Self {
        Poly::neg(self)
    }
    fn mul(&self, o: &Self) -> Self {
        Poly::mul(self, o)
    }
    fn describe(&self) -> String {
        match self.last() {
            Some((m, c)) => {
                let t = Scalar::from_poly(Poly::term(m.clone(), c.clone()));
                format!("{} terms, leading {}", self.len(), t)
            }
            None => "0".into(),
        }
    }
}

impl Coeff for BigRational {
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn describe(&self) -> String {
        self.to_string()
    }
}

/// Columns of a matrix lowered to a coefficient ring: local input -> `(local output, value)`.
struct Local<T> {
    n: usize,
    arity: usize,
    cols: Vec<Vec<(u32, T)>>,
}

type Vector<T> = BTreeMap<u32, T>;

fn apply<T: Coeff>(local: &Local<T>, spaces: &[usize], v: &Vector<T>) -> Vector<T> {
    let n = local.n;
    let mut out: Vector<T> = BTreeMap::new();
    for (&g, c) in v {
        let mut f = split_index(g, n, 3);
        let li: Vec<u32> = spaces.iter().map(|&s| f[s]).collect();
        for (lo, val) in &local.cols[join_index(&li, n) as usize] {
            for (a, part) in split_index(*lo, n, local.arity).into_iter().enumerate() {
                f[spaces[a]] = part;
            }
            let t = c.mul(val);
            let key = join_index(&f, n);
            match out.get_mut(&key) {
                Some(e) => *e = e.add(&t),
                None => {
                    out.insert(key, t);
                }
            }
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Product of the factors (leftmost first) applied to `|col>`.
fn image<T: Coeff>(side: &[(&Local<T>, &[usize])], col: u32, one: &T) -> Vector<T> {
    let mut v = BTreeMap::from([(col, one.clone())]);
    for (local, spaces) in side.iter().rev() {
        v = apply(local, spaces, &v);
        if v.is_empty() {
            break;
        }
    }
    v
}

fn residuals<T: Coeff>(
    lhs: &[(&Local<T>, &[usize])],
    rhs: &[(&Local<T>, &[usize])],
    n: usize,
    one: &T,
    point: Option<usize>,
) -> Vec<Residual> {
    let dim = 1u32 << (3 * n);
    (0..dim)
        .into_par_iter()
        .flat_map_iter(|c| {
            let mut l = image(lhs, c, one);
            let r = image(rhs, c, one);
            for (k, b) in r {
                let d = match l.get(&k) {
                    Some(a) => a.sub(&b),
                    None => b.neg(),
                };
                l.insert(k, d);
            }
            l.into_iter()
                .filter(|(_, d)| !d.is_zero())
                .map(|(k, d)| Residual {
                    input: format_index(c, n, 3),
                    output: format_index(k, n, 3),
                    detail: d.describe(),
                    point,
                })
                .collect::<Vec<_>>()
        })
        .collect()
}

/// `lcm` of all entry denominators: monomial part, integer content and
/// primitive part are combined separately.
fn common_denominator(m: &SpectralMatrix) -> Poly {
    let mut mono = Mono::one();
    let mut content = BigInt::one();
    let mut part = Poly::one();
    for v in m.entries.values() {
        let d = v.den();
        let lo = d.min_exps();
        for var in Var::ALL {
            mono.0[var.index()] = mono.0[var.index()].max(lo.exp(var));
        }
        let c = d.content();
        content = content.lcm(&c);
        let free = d.shift(&lo.pow(-1)).div_int_exact(&c);
        if free.is_constant() {
            continue;
        }
        let g = gcd(&part, &free);
        part = part.mul(&free.div_exact(&g).expect("gcd divides"));
    }
    part.shift(&mono).scale(&content)
}

fn arg_mono(arg: (i32, i32)) -> Mono {
    Mono::var(Var::X, arg.0).mul(&Mono::var(Var::Y, arg.1))
}

/// `D(z) M(z)` with `z = x^a y^b`, as polynomial columns.
fn lower_symbolic(m: &SpectralMatrix, arg: (i32, i32)) -> Local<Poly> {
    let d = common_denominator(m);
    let sub = arg_mono(arg);
    let mut cols = vec![Vec::new(); 1 << (m.n * m.arity)];
    for (&(i, o), v) in &m.entries {
        let scaled = v.num().mul(&d.div_exact(v.den()).expect("denominator divides the lcm"));
        cols[i as usize].push((o, scaled.subst_mono(Var::Z, &sub)));
    }
    Local { n: m.n, arity: m.arity, cols }
}

/// `M(z)` at an exact point, or `None` on a pole.
fn lower_point(m: &SpectralMatrix, arg: (i32, i32), at: &Point) -> Option<Local<BigRational>> {
    let x = at.get(Var::X).expect("x is set");
    let y = at.get(Var::Y).expect("y is set");
    let z = pow(x, arg.0) * pow(y, arg.1);
    let at = at.clone().with(Var::Z, z);
    let mut cols = vec![Vec::new(); 1 << (m.n * m.arity)];
    for (&(i, o), v) in &m.entries {
        let val = v.eval(&at).ok()?;
        if !Zero::is_zero(&val) {
            cols[i as usize].push((o, val));
        }
    }
    Some(Local { n: m.n, arity: m.arity, cols })
}

fn pow(b: &BigRational, e: i32) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..e.unsigned_abs() {
        acc *= b;
    }
    if e < 0 {
        acc.recip()
    } else {
        acc
    }
}

fn sample_rational(rng: &mut ChaCha8Rng, height: i64) -> BigRational {
    loop {
        let num = rng.gen_range(1..=height) * if rng.gen_bool(0.5) { -1 } else { 1 };
        let den = rng.gen_range(1..=height);
        let r = BigRational::new(BigInt::from(num), BigInt::from(den));
        // q = 1 and z = 1 style degeneracies make many factors vanish.
        if r.abs() != BigRational::one() {
            return r;
        }
    }
}

fn sample_point(rng: &mut ChaCha8Rng, height: i64) -> Point {
    let mut p = Point::new();
    for v in [Var::V, Var::X, Var::Y, Var::U1, Var::U3, Var::U4] {
        p.set(v, sample_rational(rng, height));
    }
    p
}

/// Distinct `(matrix, argument)` factors of a side pair, by address.
fn distinct<'a>(sides: &[&[Placement<'a>]]) -> Vec<(&'a SpectralMatrix, (i32, i32))> {
    let mut out: Vec<(&SpectralMatrix, (i32, i32))> = Vec::new();
    for side in sides {
        for p in side.iter() {
            if !out.iter().any(|(m, a)| std::ptr::eq(*m, p.matrix) && *a == p.arg) {
                out.push((p.matrix, p.arg));
            }
        }
    }
    out
}

fn wire<'l, T>(side: &[Placement<'_>], keys: &[(&SpectralMatrix, (i32, i32))], lowered: &'l [Local<T>]) -> Vec<(&'l Local<T>, &'static [usize])>
where
{
    side.iter()
        .map(|p| {
            let k = keys.iter().position(|(m, a)| std::ptr::eq(*m, p.matrix) && *a == p.arg).expect("factor lowered");
            (&lowered[k], spaces_static(p.spaces))
        })
        .collect()
}

/// Placements use the constant slices above; re-borrow them as `'static`.
fn spaces_static(s: &[usize]) -> &'static [usize] {
    const ALL: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    const PAIRS: [[usize; 2]; 6] = [[0, 1], [0, 2], [1, 0], [1, 2], [2, 0], [2, 1]];
    if s.len() == 3 {
        ALL.iter().find(|a| a[..] == *s).expect("permutation of three spaces")
    } else {
        PAIRS.iter().find(|a| a[..] == *s).expect("ordered pair of spaces")
    }
}

/// Checks `prod lhs = prod rhs` on `V^{(x)3}` in the requested mode.
pub fn verify_sides(equation: &str, lhs: &[Placement<'_>], rhs: &[Placement<'_>], mode: &VerifyMode) -> EquationReport {
    let start = Instant::now();
    let first = lhs[0].matrix;
    let n = first.n;
    let umode = if lhs.iter().chain(rhs).any(|p| p.matrix.umode == UMode::Generic && p.matrix.arity == 3) {
        UMode::Generic
    } else {
        lhs.iter().chain(rhs).find(|p| p.matrix.arity == 3).map(|p| p.matrix.umode).unwrap_or(UMode::Generic)
    };
    let keys = distinct(&[lhs, rhs]);
    let dim = 1usize << (3 * n);
    let mut residuals_found = Vec::new();
    let mut points_used = 0;
    match mode {
        VerifyMode::Symbolic => {
            let lowered: Vec<Local<Poly>> = keys.par_iter().map(|(m, a)| lower_symbolic(m, *a)).collect();
            let l = wire(lhs, &keys, &lowered);
            let r = wire(rhs, &keys, &lowered);
            residuals_found = residuals(&l, &r, n, &Poly::one(), None);
        }
        VerifyMode::Points { count, seed, height } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let mut attempts = 0;
            while points_used < *count {
                attempts += 1;
                assert!(attempts < 1000 * count.max(&1), "could not find pole-free sample points");
                let at = sample_point(&mut rng, *height);
                let lowered: Option<Vec<Local<BigRational>>> = keys.iter().map(|(m, a)| lower_point(m, *a, &at)).collect();
                let Some(lowered) = lowered else { continue };
                let l = wire(lhs, &keys, &lowered);
                let r = wire(rhs, &keys, &lowered);
                residuals_found.extend(residuals(&l, &r, n, &BigRational::one(), Some(points_used)));
                points_used += 1;
            }
        }
    }
    EquationReport {
        equation: equation.to_string(),
        kind: first.kind,
        n,
        umode,
        mode: mode.clone(),
        points_used,
        entries_checked: dim * dim * points_used.max(1),
        residuals: residuals_found,
        elapsed_ms: start.elapsed().as_millis(),
    }
}

pub fn verify_ybe(r: &SpectralMatrix, mode: &VerifyMode) -> EquationReport {
    assert_eq!(r.arity, 2, "the Yang-Baxter equation needs a two-factor matrix");
    let (l, rr) = ybe_sides(r);
    verify_sides("YBE", &l, &rr, mode)
}

pub fn verify_g2re(r: &SpectralMatrix, g: &SpectralMatrix, mode: &VerifyMode) -> EquationReport {
    assert!(r.arity == 2 && g.arity == 3, "expects R (two factors) and G (three factors)");
    assert!(r.kind == g.kind && r.n == g.n, "R and G must share kind and n");
    let (l, rr) = g2_sides(r, g);
    verify_sides("G2RE", &l, &rr, mode)
}

/// `R_{l,m}(z) -> phi(l - m, z) R_{l,m}(z)` with `l = |a|`, `m = |b|` of the input.
pub fn rescale_r(r: &SpectralMatrix, phi: impl Fn(i64) -> Scalar) -> SpectralMatrix {
    r.map_entries(|inp, v| {
        let f = r.factors(inp);
        v.mul(&phi(f[0].count_ones() as i64 - f[1].count_ones() as i64))
    })
}

/// `1 + c d z`.
pub fn linear_phi(c: &BigRational) -> impl Fn(i64) -> Scalar + '_ {
    move |d| {
        let cd = Scalar::from_ratio(&(c * BigRational::from_integer(BigInt::from(d))));
        Scalar::one().add(&cd.mul(&Scalar::var(Var::Z)))
    }
}

/// The G2 equation with `R^tr` rescaled blockwise by `1 + c (l - m) z`.
pub fn rescaling_check(r: &SpectralMatrix, g: &SpectralMatrix, c: &BigRational, mode: &VerifyMode) -> EquationReport {
    assert_eq!(r.kind, Kind::Trace, "the blockwise rescaling is defined for the trace kind");
    let rs = rescale_r(r, linear_phi(c));
    let mut rep = verify_g2re(&rs, g, mode);
    rep.equation = format!("G2RE rescaled by 1 + ({c})(l-m)z");
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lj::UParams;
    use crate::reduction::{build_g, build_r};

    #[test]
    fn ybe_n1_symbolic() {
        for kind in [Kind::Trace, Kind::Boundary] {
            let rep = verify_ybe(&build_r(kind, 1), &VerifyMode::Symbolic);
            assert!(rep.passed(), "{kind}: {:?}", rep.residuals);
            assert_eq!(rep.entries_checked, 64);
        }
    }

    #[test]
    fn g2re_n1_symbolic_generic() {
        let u = UParams::generic();
        for kind in [Kind::Trace, Kind::Boundary] {
            let rep = verify_g2re(&build_r(kind, 1), &build_g(kind, 1, &u), &VerifyMode::Symbolic);
            assert!(rep.passed(), "{kind}: {:?}", &rep.residuals[..rep.residuals.len().min(5)]);
        }
    }

    #[test]
    fn residual_detects_wrong_placements() {
        // Reading G_{ijk} as "space 1 carries factor i" swaps the two 3-cycles.
        let u = UParams::generic();
        for kind in [Kind::Trace, Kind::Boundary] {
            let r = build_r(kind, 1);
            let g = build_g(kind, 1, &u);
            let (l, mut rr) = g2_sides(&r, &g);
            rr[0].spaces = spaces_static(&[2, 0, 1]);
            rr[4].spaces = spaces_static(&[1, 2, 0]);
            let rep = verify_sides("swapped", &l, &rr, &VerifyMode::Symbolic);
            assert!(!rep.passed(), "{kind}");
        }
    }

    #[test]
    fn rescaling_outside_the_difference_family_breaks_the_equation() {
        let r = build_r(Kind::Trace, 1);
        let g = build_g(Kind::Trace, 1, &UParams::generic());
        let good = rescaling_check(&r, &g, &BigRational::one(), &VerifyMode::Symbolic);
        assert!(good.passed(), "{:?}", good.residuals);
        // phi_{l,m} = 1 + l z is not a function of l - m.
        let bad = r.map_entries(|inp, v| {
            let l = r.factors(inp)[0].count_ones() as i64;
            v.mul(&Scalar::one().add(&Scalar::from_i64(l).mul(&Scalar::var(Var::Z))))
        });
        assert!(!verify_g2re(&bad, &g, &VerifyMode::Symbolic).passed());
    }

    #[test]
    fn n2_points_both_kinds() {
        let u = UParams::default_specialized();
        for kind in [Kind::Trace, Kind::Boundary] {
            let r = build_r(kind, 2);
            let ybe = verify_ybe(&r, &VerifyMode::points(2, 7));
            assert!(ybe.passed(), "{kind}: {:?}", ybe.residuals.first());
            let g2 = verify_g2re(&r, &build_g(kind, 2, &u), &VerifyMode::points(1, 11));
            assert!(g2.passed(), "{kind}: {:?}", g2.residuals.first());
            assert_eq!(g2.points_used, 1);
        }
    }

    #[test]
    fn symbolic_and_point_modes_agree_on_a_failure() {
        let r = build_r(Kind::Boundary, 1);
        let g = build_g(Kind::Boundary, 1, &UParams::generic());
        let (l, mut rr) = g2_sides(&r, &g);
        rr.swap(0, 2);
        assert!(!verify_sides("perturbed", &l, &rr, &VerifyMode::Symbolic).passed());
        assert!(!verify_sides("perturbed", &l, &rr, &VerifyMode::points(2, 3)).passed());
    }
}
