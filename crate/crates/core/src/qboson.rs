//! q-oscillator algebra on the Fock spaces with base `q` and `q^3`.
//!
//! Operators are kept in normal form `sum coef * L(j) * k^m` where `L(j)` is
//! `(a+)^j` for `j > 0` and `(a-)^(-j)` for `j < 0`.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::scalar::{pochhammer, Poly, Scalar, ScalarError, Series, Var};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QBosonError {
    #[error("flavor mismatch: {0:?} vs {1:?}")]
    FlavorMismatch(Flavor, Flavor),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// Fock flavor with base `Q = q^s`, `s` in {1, 3}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Flavor {
    One,
    Three,
}

impl Flavor {
    pub fn s(self) -> i32 {
        match self {
            Flavor::One => 1,
            Flavor::Three => 3,
        }
    }

    /// `Q^e` as a scalar.
    pub fn base_pow(self, e: i32) -> Scalar {
        Scalar::q_pow(self.s() * e)
    }

    /// `Q^(e/2)`.
    pub fn base_half_pow(self, e: i32) -> Scalar {
        Scalar::v_pow(self.s() * e)
    }

    /// Pairing `<m|m> = (Q^2; Q^2)_m`.
    pub fn pairing(self, m: u32) -> Scalar {
        let q2 = self.base_pow(2);
        pochhammer(&q2, &q2, m)
    }
}

/// Normal-ordered q-oscillator word: map `(j, m) -> coefficient`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Op {
    flavor: Flavor,
    terms: BTreeMap<(i32, u32), Scalar>,
}

impl fmt::Debug for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let (p, m, k) = match self.flavor {
            Flavor::One => ("a+", "a-", "k"),
            Flavor::Three => ("A+", "A-", "K"),
        };
        let mut parts = Vec::new();
        for (&(j, e), c) in &self.terms {
            let mut s = format!("({c})");
            if j > 0 {
                s.push_str(&format!("*{p}^{j}"));
            } else if j < 0 {
                s.push_str(&format!("*{m}^{}", -j));
            }
            if e > 0 {
                s.push_str(&format!("*{k}^{e}"));
            }
            parts.push(s);
        }
        f.write_str(&parts.join(" + "))
    }
}

impl Op {
    pub fn zero(flavor: Flavor) -> Op {
        Op { flavor, terms: BTreeMap::new() }
    }

    pub fn identity(flavor: Flavor) -> Op {
        Op::monomial(flavor, Scalar::one(), 0, 0)
    }

    pub fn scalar(flavor: Flavor, c: Scalar) -> Op {
        Op::monomial(flavor, c, 0, 0)
    }

    /// `c * L(j) * k^m`.
    pub fn monomial(flavor: Flavor, c: Scalar, j: i32, m: u32) -> Op {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((j, m), c);
        }
        Op { flavor, terms }
    }

    pub fn a_plus(flavor: Flavor) -> Op {
        Op::monomial(flavor, Scalar::one(), 1, 0)
    }

    pub fn a_minus(flavor: Flavor) -> Op {
        Op::monomial(flavor, Scalar::one(), -1, 0)
    }

    pub fn k(flavor: Flavor) -> Op {
        Op::monomial(flavor, Scalar::one(), 0, 1)
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn terms(&self) -> &BTreeMap<(i32, u32), Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn insert(&mut self, key: (i32, u32), c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(old) => {
                let s = old.add(&c);
                if s.is_zero() {
                    self.terms.remove(&key);
                } else {
                    *old = s;
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    pub fn add(&self, o: &Op) -> Result<Op, QBosonError> {
        self.check(o)?;
        let mut out = self.clone();
        for (k, c) in &o.terms {
            out.insert(*k, c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Scalar) -> Op {
        let mut out = Op::zero(self.flavor);
        if c.is_zero() {
            return out;
        }
        for (k, cc) in &self.terms {
            out.terms.insert(*k, cc.mul(c));
        }
        out
    }

    pub fn neg(&self) -> Op {
        self.scale(&Scalar::from_i64(-1))
    }

    fn check(&self, o: &Op) -> Result<(), QBosonError> {
        if self.flavor != o.flavor {
            return Err(QBosonError::FlavorMismatch(self.flavor, o.flavor));
        }
        Ok(())
    }

    /// Product `self * o` in normal form.
    pub fn compose(&self, o: &Op) -> Result<Op, QBosonError> {
        self.check(o)?;
        let fl = self.flavor;
        let mut out = Op::zero(fl);
        for (&(j1, m1), c1) in &self.terms {
            for (&(j2, m2), c2) in &o.terms {
                // L(j1) k^m1 L(j2) k^m2 = Q^(m1 j2) L(j1) L(j2) k^(m1+m2)
                let c = c1.mul(c2).mul(&fl.base_pow(m1 as i32 * j2));
                let (j, poly) = ladder_product(fl, j1, j2);
                for (e, pc) in poly.into_iter().enumerate() {
                    if pc.is_zero() {
                        continue;
                    }
                    out.insert((j, m1 + m2 + 2 * e as u32), c.mul(&pc));
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, n: u32) -> Op {
        let mut acc = Op::identity(self.flavor);
        for _ in 0..n {
            acc = acc.compose(self).expect("same flavor");
        }
        acc
    }

    /// Action on the basis vector `|n>`: map `n' -> coefficient`.
    pub fn apply_to_state(&self, n: u32) -> BTreeMap<u32, Scalar> {
        let mut out: BTreeMap<u32, Scalar> = BTreeMap::new();
        for (&(j, m), c) in &self.terms {
            if let Some((n2, p)) = term_action(self.flavor, j, m, n) {
                let v = c.mul(&Scalar::from_poly(p));
                let e = out.entry(n2).or_default();
                *e = e.add(&v);
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    /// `Tr(z^h w)` in closed form.
    pub fn trace_z(&self) -> Scalar {
        let fl = self.flavor;
        let z = Scalar::var(Var::Z);
        let mut acc = Scalar::zero();
        for (&(j, m), c) in &self.terms {
            if j != 0 {
                continue;
            }
            let m = m as i32;
            let den = Scalar::one().sub(&z.mul(&fl.base_pow(m)));
            let t = c.mul(&fl.base_half_pow(m)).div(&den).expect("1 - z Q^m is nonzero");
            acc = acc.add(&t);
        }
        acc
    }

    /// Boundary sandwich `<b| z^h w |b>` divided by `(-Qz;Q)_inf/(z;Q)_inf`,
    /// where `|b> = sum_m |m>/(Q;Q)_m` and likewise for the dual vector.
    pub fn sandwich_reduced(&self) -> Scalar {
        let fl = self.flavor;
        let z = Scalar::var(Var::Z);
        let qq = fl.base_pow(1);
        let mqq = qq.neg();
        let mqz = mqq.mul(&z);
        let mut acc = Scalar::zero();
        for (&(j, m), c) in &self.terms {
            let jb = j.unsigned_abs();
            let mi = m as i32;
            let mut t = c.mul(&fl.base_half_pow(mi));
            t = t.mul(&pochhammer(&mqq, &qq, jb));
            t = t.mul(&pochhammer(&z, &qq, m));
            t = t.div(&pochhammer(&mqz, &qq, jb + m)).expect("nonzero pochhammer");
            if j > 0 {
                t = t.mul(&z.powi(jb as i64).unwrap());
            } else if j < 0 {
                t = t.mul(&fl.base_pow(mi * jb as i32));
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Net ladder numbers present in the word.
    pub fn ladder_shifts(&self) -> Vec<i32> {
        let mut v: Vec<i32> = self.terms.keys().map(|k| k.0).collect();
        v.dedup();
        v
    }
}

/// `k^m` then `L(j)` applied to `|n>` for a single normal-ordered term.
/// Returns the target state and the (Laurent polynomial) coefficient.
pub fn term_action(fl: Flavor, j: i32, m: u32, n: u32) -> Option<(u32, Poly)> {
    let s = fl.s();
    let kpow = Poly::var_pow(Var::V, s * m as i32 * (2 * n as i32 + 1));
    if j >= 0 {
        return Some((n + j as u32, kpow));
    }
    let jb = (-j) as u32;
    if n < jb {
        return None;
    }
    let mut p = kpow;
    for i in 0..jb {
        // (1 - Q^(2(n-i)))
        let e = 4 * s * (n - i) as i32;
        p = p.mul(&Poly::one().sub(&Poly::var_pow(Var::V, e)));
    }
    Some((n - jb, p))
}

/// `L(j1) L(j2) = L(j) * sum_e c_e k^(2e)`; returns `(j, [c_0, c_1, ...])`.
fn ladder_product(fl: Flavor, j1: i32, j2: i32) -> (i32, Vec<Scalar>) {
    if j1 >= 0 && j2 >= 0 || j1 <= 0 && j2 <= 0 {
        return (j1 + j2, vec![Scalar::one()]);
    }
    let p = j1.unsigned_abs() as i32;
    let r = j2.unsigned_abs() as i32;
    let n = p.min(r);
    let mut poly = vec![Scalar::one()];
    for t in 0..n {
        let rr = r - t;
        // a+^p a-^r contracts with (1 - Q^(-1-2(r-1)) k^2); a-^p a+^r with (1 - Q^(1+2(r-1)) k^2).
        let e = if j1 > 0 { -1 - 2 * (rr - 1) } else { 1 + 2 * (rr - 1) };
        let c = fl.base_pow(e).neg();
        let mut next = vec![Scalar::zero(); poly.len() + 1];
        for (i, a) in poly.iter().enumerate() {
            next[i] = next[i].add(a);
            next[i + 1] = next[i + 1].add(&a.mul(&c));
        }
        poly = next;
    }
    (j1 + j2, poly)
}

/// Truncated series of `Tr(z^h w)`: coefficient of `z^n` is `<n|w|n>/<n|n>`.
pub fn truncated_trace_oracle(w: &Op, order: usize) -> Series {
    let mut s = Series::zero(order);
    for n in 0..=order as u32 {
        if let Some(c) = w.apply_to_state(n).get(&n) {
            s.coeffs[n as usize] = c.clone();
        }
    }
    s
}

/// Truncated double sum `sum_{n,n'} b_n b_n' <n| z^h w |n'>` with
/// `b_n = 1/(Q;Q)_n`, states restricted to `n, n' <= cutoff`.
pub fn truncated_sandwich_oracle(w: &Op, cutoff: u32) -> Series {
    let fl = w.flavor;
    let qq = fl.base_pow(1);
    let b: Vec<Scalar> = (0..=cutoff).map(|n| pochhammer(&qq, &qq, n).inv().unwrap()).collect();
    let mut s = Series::zero(cutoff as usize);
    for n2 in 0..=cutoff {
        for (n, c) in w.apply_to_state(n2) {
            if n > cutoff {
                continue;
            }
            let t = c.mul(&b[n2 as usize]).mul(&b[n as usize]).mul(&fl.pairing(n));
            s.coeffs[n as usize] = s.coeffs[n as usize].add(&t);
        }
    }
    s
}

/// Series of `(-Qz;Q)_inf / (z;Q)_inf = sum_j (-Q;Q)_j/(Q;Q)_j z^j`.
pub fn boundary_normaliser_series(fl: Flavor, order: usize) -> Series {
    let qq = fl.base_pow(1);
    let mq = qq.neg();
    let coeffs = (0..=order as u32)
        .map(|j| pochhammer(&mq, &qq, j).div(&pochhammer(&qq, &qq, j)).unwrap())
        .collect();
    Series { coeffs }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::sc;

    const F1: Flavor = Flavor::One;
    const F3: Flavor = Flavor::Three;

    #[test]
    fn contraction_relations() {
        let am = Op::a_minus(F1);
        let ap = Op::a_plus(F1);
        let k = Op::k(F1);
        let lhs = am.compose(&ap).unwrap();
        let rhs = Op::identity(F1).add(&Op::monomial(F1, sc("-q"), 0, 2)).unwrap();
        assert_eq!(lhs, rhs);
        let lhs = ap.compose(&am).unwrap();
        let rhs = Op::identity(F1).add(&Op::monomial(F1, sc("-1/q"), 0, 2)).unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(k.compose(&ap).unwrap(), Op::monomial(F1, sc("q"), 1, 1));
        assert_eq!(k.compose(&am).unwrap(), Op::monomial(F1, sc("1/q"), -1, 1));
    }

    #[test]
    fn flavor_three_contraction() {
        let am = Op::a_minus(F3);
        let ap = Op::a_plus(F3);
        let lhs = am.compose(&ap).unwrap();
        let rhs = Op::identity(F3).add(&Op::monomial(F3, sc("-q^3"), 0, 2)).unwrap();
        assert_eq!(lhs, rhs);
        let on1 = lhs.apply_to_state(1);
        assert_eq!(on1.get(&1), Some(&sc("1 - q^12")));
    }

    #[test]
    fn flavor_mismatch() {
        assert!(Op::k(F1).compose(&Op::k(F3)).is_err());
    }

    #[test]
    fn state_actions() {
        assert!(Op::a_minus(F1).apply_to_state(0).is_empty());
        let kk = Op::k(F3).apply_to_state(2);
        assert_eq!(kk.get(&2), Some(&Scalar::v_pow(15)));
        let ap_am = Op::a_plus(F1).compose(&Op::a_minus(F1)).unwrap();
        for m in 0..=10u32 {
            let got = ap_am.apply_to_state(m);
            let want = sc("1").sub(&Scalar::q_pow(2 * m as i32));
            if m == 0 {
                assert!(got.is_empty());
            } else {
                assert_eq!(got.get(&m), Some(&want));
            }
        }
    }

    #[test]
    fn trace_examples() {
        assert_eq!(Op::k(F3).trace_z(), sc("q^(3/2)/(1 - q^3*z)"));
        assert_eq!(Op::identity(F1).trace_z(), sc("1/(1 - z)"));
        let w = Op::a_plus(F3).compose(&Op::a_minus(F3)).unwrap();
        assert_eq!(w.trace_z(), sc("1/(1 - z) - 1/(1 - q^6*z)"));
    }

    #[test]
    fn sandwich_examples() {
        assert_eq!(Op::k(F1).sandwich_reduced(), sc("q^(1/2)*(1 - z)/(1 + q*z)"));
        assert_eq!(Op::a_plus(F1).sandwich_reduced(), sc("(1 + q)*z/(1 + q*z)"));
        assert_eq!(Op::a_plus(F3).sandwich_reduced(), sc("(1 + q^3)*z/(1 + q^3*z)"));
    }

    #[test]
    fn sandwich_oracle_identity_and_lowering() {
        let s = truncated_sandwich_oracle(&Op::identity(F1), 10);
        let want = boundary_normaliser_series(F1, 10);
        assert_eq!(s.coeffs[..6], want.coeffs[..6]);
        let s = truncated_sandwich_oracle(&Op::a_minus(F1), 10);
        assert_eq!(s.coeffs[0], sc("1 + q"));
    }
}
