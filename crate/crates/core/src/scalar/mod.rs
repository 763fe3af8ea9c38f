//! Exact rational functions in `v` (with `q = v^2`), `z`, `x`, `y` and the
//! gauge parameters `u1, u3, u4`.

mod gcd;
mod poly;
mod series;
pub mod text;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub use gcd::gcd;
pub use poly::{Mono, Poly, Var, NVARS};
pub use series::Series;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("pole at evaluation point")]
    Pole,
    #[error("variable {0} has no value at the evaluation point")]
    Unassigned(&'static str),
    #[error("parse error: {0}")]
    Parse(String),
}

/// Canonical reduced fraction `num/den`.
///
/// Both polynomials have non-negative exponents and no common factor
/// (monomial, polynomial or integer); the smallest term of `den` in the
/// graded order has a positive coefficient.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    num: Poly,
    den: Poly,
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl Scalar {
    pub fn zero() -> Scalar {
        Scalar { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> Scalar {
        Scalar { num: Poly::one(), den: Poly::one() }
    }

    pub fn from_i64(c: i64) -> Scalar {
        Scalar::from_int(BigInt::from(c))
    }

    pub fn from_int(c: BigInt) -> Scalar {
        Scalar { num: Poly::constant(c), den: Poly::one() }
    }

    pub fn from_ratio(r: &BigRational) -> Scalar {
        Scalar::build(Poly::constant(r.numer().clone()), Poly::constant(r.denom().clone()), false)
    }

    pub fn from_poly(p: Poly) -> Scalar {
        Scalar::build(p, Poly::one(), false)
    }

    pub fn var(v: Var) -> Scalar {
        Scalar::from_poly(Poly::var(v))
    }

    /// `v^e` for any integer `e`.
    pub fn v_pow(e: i32) -> Scalar {
        Scalar::from_poly(Poly::var_pow(Var::V, e))
    }

    pub fn q() -> Scalar {
        Scalar::v_pow(2)
    }

    /// `q^e = v^(2e)`.
    pub fn q_pow(e: i32) -> Scalar {
        Scalar::v_pow(2 * e)
    }

    /// `r = q + q^-1`.
    pub fn r() -> Scalar {
        Scalar::q().add(&Scalar::q_pow(-1))
    }

    /// `u2 = (r - u3 u4) / u1`, the generic solution of `u1 u2 + u3 u4 = r`.
    pub fn generic_u2() -> Scalar {
        let t = Scalar::r().sub(&Scalar::var(Var::U3).mul(&Scalar::var(Var::U4)));
        t.div(&Scalar::var(Var::U1)).expect("u1 is a nonzero symbol")
    }

    pub fn new(num: Poly, den: Poly) -> Result<Scalar, ScalarError> {
        if den.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Scalar::build(num, den, true))
    }

    /// Canonicalises `num/den`. When `reduce` is false the caller guarantees
    /// that the two polynomials share no non-monomial factor.
    fn build(num: Poly, den: Poly, reduce: bool) -> Scalar {
        if num.is_zero() {
            return Scalar::zero();
        }
        let mn = num.min_exps();
        let md = den.min_exps();
        let mut s = [0i32; NVARS];
        for i in 0..NVARS {
            s[i] = -mn.0[i].min(md.0[i]);
        }
        let shift = Mono(s);
        let (mut num, mut den) = if shift.is_one() { (num, den) } else { (num.shift(&shift), den.shift(&shift)) };
        if reduce && !den.is_monomial() && !num.is_monomial() {
            let g = gcd(&num, &den);
            if !g.is_one() {
                num = num.div_exact(&g).expect("gcd divides numerator");
                den = den.div_exact(&g).expect("gcd divides denominator");
            }
        }
        let c = num.content().gcd(&den.content());
        if !c.is_one() {
            num = num.div_int_exact(&c);
            den = den.div_int_exact(&c);
        }
        if !den.is_sign_positive() {
            num = num.neg();
            den = den.neg();
        }
        Scalar { num, den }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// True when the denominator is a single term (a Laurent polynomial in
    /// disguise, possibly with a rational coefficient).
    pub fn is_laurent(&self) -> bool {
        self.den.is_monomial()
    }

    pub fn neg(&self) -> Scalar {
        Scalar { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn add(&self, o: &Scalar) -> Scalar {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den.is_monomial() && o.den.is_monomial() {
            let (mb, cb) = &self.den.terms()[0];
            let (md, cd) = &o.den.terms()[0];
            let mut l = [0; NVARS];
            for i in 0..NVARS {
                l[i] = mb.0[i].max(md.0[i]);
            }
            let lm = Mono(l);
            let lc = cb.lcm(cd);
            let fa = Poly::term(lm.div(mb), &lc / cb);
            let fc = Poly::term(lm.div(md), &lc / cd);
            let num = self.num.mul(&fa).add(&o.num.mul(&fc));
            return Scalar::build(num, Poly::term(lm, lc), false);
        }
        if self.den == o.den {
            return Scalar::build(self.num.add(&o.num), self.den.clone(), true);
        }
        let g = gcd(&self.den, &o.den);
        if g.is_one() {
            let num = self.num.mul(&o.den).add(&o.num.mul(&self.den));
            return Scalar::build(num, self.den.mul(&o.den), false);
        }
        let b1 = self.den.div_exact(&g).expect("gcd divides");
        let d1 = o.den.div_exact(&g).expect("gcd divides");
        let num = self.num.mul(&d1).add(&o.num.mul(&b1));
        if num.is_zero() {
            return Scalar::zero();
        }
        let g2 = gcd(&num, &g);
        let (num, g) = if g2.is_one() {
            (num, g)
        } else {
            (num.div_exact(&g2).expect("gcd divides"), g.div_exact(&g2).expect("gcd divides"))
        };
        Scalar::build(num, b1.mul(&d1).mul(&g), false)
    }

    pub fn sub(&self, o: &Scalar) -> Scalar {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Scalar) -> Scalar {
        if self.is_zero() || o.is_zero() {
            return Scalar::zero();
        }
        if self.den.is_monomial() && o.den.is_monomial() {
            return Scalar::build(self.num.mul(&o.num), self.den.mul(&o.den), false);
        }
        let (a, d) = cancel(&self.num, &o.den);
        let (c, b) = cancel(&o.num, &self.den);
        Scalar::build(a.mul(&c), b.mul(&d), false)
    }

    pub fn inv(&self) -> Result<Scalar, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Scalar::build(self.den.clone(), self.num.clone(), false))
    }

    pub fn div(&self, o: &Scalar) -> Result<Scalar, ScalarError> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn powi(&self, e: i64) -> Result<Scalar, ScalarError> {
        if e < 0 {
            return self.inv()?.powi(-e);
        }
        let e = e as u32;
        Ok(Scalar::build(self.num.pow(e), self.den.pow(e), false))
    }

    /// Substitutes a monomial for a variable, e.g. `z -> x^2 y^3`.
    pub fn subst_mono(&self, v: Var, m: &Mono) -> Scalar {
        Scalar::build(self.num.subst_mono(v, m), self.den.subst_mono(v, m), true)
    }

    pub fn subst_scalar(&self, v: Var, s: &Scalar) -> Scalar {
        let eval = |p: &Poly| -> Scalar {
            let mut acc = Scalar::zero();
            for (e, c) in p.coeffs_in(v) {
                acc = acc.add(&Scalar::from_poly(c).mul(&s.powi(e as i64).expect("nonzero substitution")));
            }
            acc
        };
        eval(&self.num).div(&eval(&self.den)).expect("substitution produced a zero denominator")
    }

    pub fn uses(&self, v: Var) -> bool {
        self.num.uses(v) || self.den.uses(v)
    }

    pub fn eval(&self, at: &Point) -> Result<BigRational, ScalarError> {
        let d = at.eval_poly(&self.den)?;
        if d.is_zero() {
            return Err(ScalarError::Pole);
        }
        Ok(at.eval_poly(&self.num)? / d)
    }
}

fn cancel(a: &Poly, b: &Poly) -> (Poly, Poly) {
    if a.is_monomial() || b.is_monomial() {
        return (a.clone(), b.clone());
    }
    let g = gcd(a, b);
    if g.is_one() {
        (a.clone(), b.clone())
    } else {
        (a.div_exact(&g).expect("gcd divides"), b.div_exact(&g).expect("gcd divides"))
    }
}

/// `(a; b)_m = prod_{i<m} (1 - a b^i)`.
pub fn pochhammer(a: &Scalar, b: &Scalar, m: u32) -> Scalar {
    let mut acc = Scalar::one();
    let mut t = a.clone();
    for _ in 0..m {
        acc = acc.mul(&Scalar::one().sub(&t));
        t = t.mul(b);
    }
    acc
}

/// Values for (some of) the variables; used for exact evaluation.
#[derive(Clone, Debug, Default)]
pub struct Point {
    values: [Option<BigRational>; NVARS],
}

impl Point {
    pub fn new() -> Point {
        Point::default()
    }

    pub fn with(mut self, v: Var, x: BigRational) -> Point {
        self.values[v.index()] = Some(x);
        self
    }

    pub fn set(&mut self, v: Var, x: BigRational) {
        self.values[v.index()] = Some(x);
    }

    pub fn get(&self, v: Var) -> Option<&BigRational> {
        self.values[v.index()].as_ref()
    }

    pub fn eval_poly(&self, p: &Poly) -> Result<BigRational, ScalarError> {
        let mut acc = BigRational::zero();
        let mut cache: Vec<std::collections::HashMap<i32, BigRational>> = vec![Default::default(); NVARS];
        for (m, c) in p.terms() {
            let mut t = BigRational::from_integer(c.clone());
            for v in Var::ALL {
                let e = m.exp(v);
                if e == 0 {
                    continue;
                }
                let x = self.values[v.index()].as_ref().ok_or(ScalarError::Unassigned(v.name()))?;
                if x.is_zero() && e < 0 {
                    return Err(ScalarError::Pole);
                }
                let pw = cache[v.index()].entry(e).or_insert_with(|| pow_rational(x, e));
                t *= &*pw;
            }
            acc += t;
        }
        Ok(acc)
    }
}

fn pow_rational(x: &BigRational, e: i32) -> BigRational {
    let base = if e < 0 { x.recip() } else { x.clone() };
    num_traits::pow(base, e.unsigned_abs() as usize)
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&text::format_scalar(self))
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({})", text::format_scalar(self))
    }
}

impl FromStr for Scalar {
    type Err = ScalarError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        text::parse_scalar(s)
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl From<i64> for Scalar {
    fn from(c: i64) -> Self {
        Scalar::from_i64(c)
    }
}

/// Convenience for literals in tests and tables; panics on malformed input.
pub fn sc(s: &str) -> Scalar {
    s.parse().unwrap_or_else(|e| panic!("bad scalar literal '{s}': {e}"))
}

/// Rational number `n/d`.
pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cancellation() {
        let a = sc("(1 - q^2*z)/(1 - q*z)");
        let b = sc("1 - q*z");
        assert_eq!(a.mul(&b), sc("1 - q^2*z"));
    }

    #[test]
    fn r_identity() {
        assert_eq!(sc("q + q^(-1)"), Scalar::r());
        assert_eq!(Scalar::r().to_string(), "(1 + q^2)/q");
    }

    #[test]
    fn printing_matches_ascending_order() {
        let s = sc("-q^3*(1 - z)/(1 - q^6*z)");
        assert_eq!(s.to_string(), "(-q^3 + q^3*z)/(1 - q^6*z)");
        assert_eq!(sc("q^(3/2)").to_string(), "v^3");
    }

    #[test]
    fn sign_normalised_on_denominator() {
        let s = sc("1/(q - 1)");
        assert_eq!(s.to_string(), "-1/(1 - q)");
    }

    #[test]
    fn round_trip() {
        for t in ["(1 - q^6)/(1 - q^3)", "u1*u3/(1 + q^2) - z", "2/3*v^3*x^2/(1 + y)", "(r - u3*u4)/u1"] {
            let s = sc(t);
            assert_eq!(sc(&s.to_string()), s, "{t}");
        }
    }

    #[test]
    fn pochhammer_cases() {
        let q = Scalar::q();
        assert_eq!(pochhammer(&q, &q, 0), Scalar::one());
        assert_eq!(pochhammer(&q, &q, 2), sc("(1 - q)*(1 - q^2)"));
        assert_eq!(pochhammer(&sc("z"), &q, 3), sc("(1 - z)*(1 - q*z)*(1 - q^2*z)"));
    }

    #[test]
    fn evaluation() {
        let at = Point::new().with(Var::V, rat(1, 2)).with(Var::Z, rat(1, 3));
        let s = sc("1/(1 - q*z)");
        assert_eq!(s.eval(&at).unwrap(), rat(12, 11));
        let at = Point::new().with(Var::V, rat(2, 3));
        assert_eq!(Scalar::v_pow(-2).eval(&at).unwrap(), rat(9, 4));
    }

    #[test]
    fn pole_detected() {
        let at = Point::new().with(Var::V, rat(1, 1)).with(Var::Z, rat(1, 1));
        assert_eq!(sc("1/(1 - q*z)").eval(&at), Err(ScalarError::Pole));
    }

    #[test]
    fn serde_round_trip() {
        let s = sc("(1 - q^6*z)/(1 + u1)");
        let j = serde_json::to_string(&s).unwrap();
        let back: Scalar = serde_json::from_str(&j).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn series_geometric() {
        let s = Series::expand(&sc("1/(1 - q*z)"), 3).unwrap();
        assert_eq!(s.coeffs, vec![sc("1"), sc("q"), sc("q^2"), sc("q^3")]);
    }
}
