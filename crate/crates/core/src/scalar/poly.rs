use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Number of symbolic variables tracked by a monomial.
pub const NVARS: usize = 7;

/// Symbolic variables. `V` is the square root of `q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    V = 0,
    Z = 1,
    X = 2,
    Y = 3,
    U1 = 4,
    U3 = 5,
    U4 = 6,
}

impl Var {
    pub const ALL: [Var; NVARS] = [Var::V, Var::Z, Var::X, Var::Y, Var::U1, Var::U3, Var::U4];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Var::V => "v",
            Var::Z => "z",
            Var::X => "x",
            Var::Y => "y",
            Var::U1 => "u1",
            Var::U3 => "u3",
            Var::U4 => "u4",
        }
    }
}

/// Exponent vector. Negative entries are allowed transiently (Laurent terms);
/// a canonical `Scalar` never stores them.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Mono(pub [i32; NVARS]);

impl Mono {
    pub fn one() -> Mono {
        Mono([0; NVARS])
    }

    pub fn var(v: Var, e: i32) -> Mono {
        let mut m = [0; NVARS];
        m[v.index()] = e;
        Mono(m)
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().map(|&e| e as i64).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, o: &Mono) -> Mono {
        let mut m = self.0;
        for i in 0..NVARS {
            m[i] += o.0[i];
        }
        Mono(m)
    }

    pub fn div(&self, o: &Mono) -> Mono {
        let mut m = self.0;
        for i in 0..NVARS {
            m[i] -= o.0[i];
        }
        Mono(m)
    }

    pub fn pow(&self, k: i32) -> Mono {
        let mut m = self.0;
        for e in m.iter_mut() {
            *e *= k;
        }
        Mono(m)
    }

    pub fn exp(&self, v: Var) -> i32 {
        self.0[v.index()]
    }

    pub fn is_nonneg(&self) -> bool {
        self.0.iter().all(|&e| e >= 0)
    }
}

// Graded order: total degree first, then lexicographic on the exponent vector.
impl Ord for Mono {
    fn cmp(&self, o: &Self) -> Ordering {
        self.degree().cmp(&o.degree()).then_with(|| self.0.cmp(&o.0))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

/// Sparse multivariate Laurent polynomial with integer coefficients.
/// Terms are kept sorted ascending in the graded order with no zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: Vec<(Mono, BigInt)>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({})", crate::scalar::text::format_poly(self, false))
    }
}

impl Poly {
    pub fn zero() -> Poly {
        Poly { terms: Vec::new() }
    }

    pub fn one() -> Poly {
        Poly::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Poly {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly { terms: vec![(Mono::one(), c)] }
        }
    }

    pub fn from_i64(c: i64) -> Poly {
        Poly::constant(BigInt::from(c))
    }

    pub fn term(m: Mono, c: BigInt) -> Poly {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly { terms: vec![(m, c)] }
        }
    }

    pub fn var(v: Var) -> Poly {
        Poly::term(Mono::var(v, 1), BigInt::one())
    }

    pub fn var_pow(v: Var, e: i32) -> Poly {
        Poly::term(Mono::var(v, e), BigInt::one())
    }

    /// Builds a polynomial from arbitrary terms, combining duplicates.
    pub fn from_terms(mut terms: Vec<(Mono, BigInt)>) -> Poly {
        terms.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        let mut out: Vec<(Mono, BigInt)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some(last) if last.0 == m => last.1 += c,
                _ => {
                    if let Some(last) = out.last() {
                        if last.1.is_zero() {
                            out.pop();
                        }
                    }
                    out.push((m, c));
                }
            }
        }
        if let Some(last) = out.last() {
            if last.1.is_zero() {
                out.pop();
            }
        }
        Poly { terms: out }
    }

    pub fn terms(&self) -> &[(Mono, BigInt)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Mono, BigInt)> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn constant_value(&self) -> Option<BigInt> {
        if self.terms.is_empty() {
            Some(BigInt::zero())
        } else if self.is_constant() {
            Some(self.terms[0].1.clone())
        } else {
            None
        }
    }

    /// Smallest term in the graded order; used for sign normalisation.
    pub fn first(&self) -> Option<&(Mono, BigInt)> {
        self.terms.first()
    }

    /// Largest term in the graded order; used as the division leader.
    pub fn last(&self) -> Option<&(Mono, BigInt)> {
        self.terms.last()
    }

    pub fn neg(&self) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect() }
    }

    pub fn add(&self, o: &Poly) -> Poly {
        self.merge(o, false)
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.merge(o, true)
    }

    fn merge(&self, o: &Poly, negate: bool) -> Poly {
        if o.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return if negate { o.neg() } else { o.clone() };
        }
        let mut out = Vec::with_capacity(self.terms.len() + o.terms.len());
        let (mut i, mut j) = (0, 0);
        let a = &self.terms;
        let b = &o.terms;
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push((b[j].0, if negate { -&b[j].1 } else { b[j].1.clone() }));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                    if !c.is_zero() {
                        out.push((a[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        for t in &b[j..] {
            out.push((t.0, if negate { -&t.1 } else { t.1.clone() }));
        }
        Poly { terms: out }
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        if o.terms.len() == 1 {
            return self.mul_term(&o.terms[0].0, &o.terms[0].1);
        }
        if self.terms.len() == 1 {
            return o.mul_term(&self.terms[0].0, &self.terms[0].1);
        }
        let mut prods = Vec::with_capacity(self.terms.len() * o.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                prods.push((ma.mul(mb), ca * cb));
            }
        }
        Poly::from_terms(prods)
    }

    /// Multiplication by a single term; the graded order is preserved.
    pub fn mul_term(&self, m: &Mono, c: &BigInt) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(mm, cc)| (mm.mul(m), cc * c)).collect() }
    }

    pub fn shift(&self, m: &Mono) -> Poly {
        Poly { terms: self.terms.iter().map(|(mm, cc)| (mm.mul(m), cc.clone())).collect() }
    }

    pub fn scale(&self, c: &BigInt) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, cc)| (*m, cc * c)).collect() }
    }

    /// Divides every coefficient by `c`, which must divide each of them.
    pub fn div_int_exact(&self, c: &BigInt) -> Poly {
        if c.is_one() {
            return self.clone();
        }
        Poly { terms: self.terms.iter().map(|(m, cc)| (*m, cc / c)).collect() }
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut acc = Poly::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Non-negative integer gcd of the coefficients (zero for the zero polynomial).
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for (_, c) in &self.terms {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    pub fn min_exps(&self) -> Mono {
        let mut m = [i32::MAX; NVARS];
        for (mm, _) in &self.terms {
            for i in 0..NVARS {
                m[i] = m[i].min(mm.0[i]);
            }
        }
        if self.terms.is_empty() {
            m = [0; NVARS];
        }
        Mono(m)
    }

    pub fn max_exps(&self) -> Mono {
        let mut m = [i32::MIN; NVARS];
        for (mm, _) in &self.terms {
            for i in 0..NVARS {
                m[i] = m[i].max(mm.0[i]);
            }
        }
        if self.terms.is_empty() {
            m = [0; NVARS];
        }
        Mono(m)
    }

    pub fn uses(&self, v: Var) -> bool {
        let i = v.index();
        self.terms.iter().any(|(m, _)| m.0[i] != 0)
    }

    pub fn vars_mask(&self) -> u32 {
        let mut mask = 0;
        for (m, _) in &self.terms {
            for i in 0..NVARS {
                if m.0[i] != 0 {
                    mask |= 1 << i;
                }
            }
        }
        mask
    }

    /// Exact division. Returns `None` when `d` does not divide `self`
    /// in the Laurent polynomial ring.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        assert!(!d.is_zero(), "division by the zero polynomial");
        if self.is_zero() {
            return Some(Poly::zero());
        }
        if d.terms.len() == 1 {
            let (m, c) = &d.terms[0];
            let inv = Mono([0; NVARS]).div(m);
            let mut out = Vec::with_capacity(self.terms.len());
            for (mm, cc) in &self.terms {
                let (q, r) = cc.div_rem(c);
                if !r.is_zero() {
                    return None;
                }
                out.push((mm.mul(&inv), q));
            }
            return Some(Poly { terms: out });
        }
        let sa = self.min_exps();
        let sd = d.min_exps();
        let a = self.shift(&Mono::one().div(&sa));
        let dd = d.shift(&Mono::one().div(&sd));
        let (lm, lc) = dd.terms.last().cloned().unwrap();
        let mut rem = a;
        let mut quot: Vec<(Mono, BigInt)> = Vec::new();
        while let Some((rm, rc)) = rem.terms.last().cloned() {
            let e = rm.div(&lm);
            if !e.is_nonneg() {
                return None;
            }
            let (q, r) = rc.div_rem(&lc);
            if !r.is_zero() {
                return None;
            }
            rem = rem.sub(&dd.mul_term(&e, &q));
            quot.push((e, q));
        }
        let q = Poly::from_terms(quot);
        Some(q.shift(&sa.div(&sd)))
    }

    /// Coefficients with respect to `v`: `(exponent, coefficient)` pairs,
    /// each coefficient free of `v`, exponents ascending.
    pub fn coeffs_in(&self, v: Var) -> Vec<(i32, Poly)> {
        let i = v.index();
        let mut buckets: std::collections::BTreeMap<i32, Vec<(Mono, BigInt)>> = Default::default();
        for (m, c) in &self.terms {
            let mut mm = *m;
            let e = mm.0[i];
            mm.0[i] = 0;
            buckets.entry(e).or_default().push((mm, c.clone()));
        }
        buckets.into_iter().map(|(e, t)| (e, Poly::from_terms(t))).collect()
    }

    /// Replaces `v` by a monomial (which may involve other variables).
    pub fn subst_mono(&self, v: Var, m: &Mono) -> Poly {
        let i = v.index();
        let terms = self
            .terms
            .iter()
            .map(|(mm, c)| {
                let e = mm.0[i];
                let mut base = *mm;
                base.0[i] = 0;
                (base.mul(&m.pow(e)), c.clone())
            })
            .collect();
        Poly::from_terms(terms)
    }

    /// Replaces `v` by a polynomial. Negative powers of `v` are not allowed.
    pub fn subst_poly(&self, v: Var, p: &Poly) -> Poly {
        let mut acc = Poly::zero();
        let coeffs = self.coeffs_in(v);
        let mut powers: Vec<Poly> = vec![Poly::one()];
        for (e, c) in coeffs {
            assert!(e >= 0, "negative power in polynomial substitution");
            while powers.len() <= e as usize {
                let next = powers.last().unwrap().mul(p);
                powers.push(next);
            }
            acc = acc.add(&c.mul(&powers[e as usize]));
        }
        acc
    }

    pub fn is_sign_positive(&self) -> bool {
        self.terms.first().map(|t| t.1.is_positive()).unwrap_or(true)
    }
}
