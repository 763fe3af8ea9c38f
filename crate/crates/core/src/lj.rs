//! The q-oscillator valued amplitude tables `L` (base `q^3`) and `J` (base `q`).
//!
//! Index convention: `l_entry(a, b, c, d)` is `L^{c d}_{a b}` and
//! `j_entry(a, b, c, l, m, n)` is `J^{l m n}_{a b c}`; lower indices are inputs.

use serde::Serialize;
use thiserror::Error;

use crate::qboson::{Flavor, Op};
use crate::scalar::{Scalar, Var};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum UParamsError {
    #[error("u1*u2 + u3*u4 - r = {0}, expected 0")]
    Constraint(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum UMode {
    Generic,
    Specialized,
}

impl UMode {
    pub fn label(self) -> &'static str {
        match self {
            UMode::Generic => "generic",
            UMode::Specialized => "spec",
        }
    }
}

/// Gauge parameters with `u1 u2 + u3 u4 = r`.
#[derive(Clone, Debug, PartialEq)]
pub struct UParams {
    pub mode: UMode,
    pub u1: Scalar,
    pub u2: Scalar,
    pub u3: Scalar,
    pub u4: Scalar,
}

impl UParams {
    /// Symbols `u1, u3, u4` with `u2` eliminated.
    pub fn generic() -> UParams {
        UParams {
            mode: UMode::Generic,
            u1: Scalar::var(Var::U1),
            u2: Scalar::generic_u2(),
            u3: Scalar::var(Var::U3),
            u4: Scalar::var(Var::U4),
        }
    }

    pub fn specialized(u1: Scalar, u2: Scalar, u3: Scalar, u4: Scalar) -> Result<UParams, UParamsError> {
        let res = u1.mul(&u2).add(&u3.mul(&u4)).sub(&Scalar::r());
        if !res.is_zero() {
            return Err(UParamsError::Constraint(res.to_string()));
        }
        Ok(UParams { mode: UMode::Specialized, u1, u2, u3, u4 })
    }

    /// `(1, 1, 1, r - 1)`.
    pub fn default_specialized() -> UParams {
        let one = Scalar::one();
        UParams::specialized(one.clone(), one.clone(), one, Scalar::r().sub(&Scalar::one()))
            .expect("default specialisation satisfies the constraint")
    }

    pub fn constraint_residual(&self) -> Scalar {
        self.u1.mul(&self.u2).add(&self.u3.mul(&self.u4)).sub(&Scalar::r())
    }
}

/// `L^{c d}_{a b}` (base `q^3`).
pub fn l_entry(a: u8, b: u8, c: u8, d: u8) -> Op {
    let f = Flavor::Three;
    match (a, b, c, d) {
        (0, 0, 0, 0) | (1, 1, 1, 1) => Op::identity(f),
        (0, 1, 0, 1) => Op::k(f),
        (1, 0, 1, 0) => Op::k(f).neg(),
        (0, 1, 1, 0) => Op::a_plus(f),
        (1, 0, 0, 1) => Op::a_minus(f),
        _ => Op::zero(f),
    }
}

/// `1 - r k^2`.
pub fn sigma_tilde() -> Op {
    let f = Flavor::One;
    Op::identity(f).add(&Op::monomial(f, Scalar::r().neg(), 0, 2)).expect("same flavor")
}

fn prod(ops: &[Op]) -> Op {
    let mut acc = Op::identity(Flavor::One);
    for o in ops {
        acc = acc.compose(o).expect("same flavor");
    }
    acc
}

/// `J^{l m n}_{a b c}` (base `q`).
pub fn j_entry(a: u8, b: u8, c: u8, l: u8, m: u8, n: u8, u: &UParams) -> Op {
    let f = Flavor::One;
    let ap = Op::a_plus(f);
    let am = Op::a_minus(f);
    let k = Op::k(f);
    let rinv = Scalar::r().inv().expect("r is nonzero");
    if a == b && l == m && a == l {
        return match (c, n) {
            (0, 0) => ap,
            (0, 1) => k,
            (1, 0) => k.neg(),
            _ => am,
        };
    }
    match ((a, b, c), (l, m, n)) {
        ((0, 1, 0), (0, 1, 0)) => prod(&[k, ap]).scale(&u.u1),
        ((0, 1, 0), (0, 1, 1)) => prod(&[k.clone(), k]),
        ((0, 1, 1), (0, 1, 0)) => sigma_tilde().scale(&rinv.mul(&u.u1).mul(&u.u3)),
        ((0, 1, 1), (0, 1, 1)) => prod(&[k, am]).scale(&u.u3),
        ((1, 0, 0), (1, 0, 0)) => prod(&[ap, k]).scale(&u.u2.neg()),
        ((1, 0, 0), (1, 0, 1)) => sigma_tilde().scale(&rinv.mul(&u.u2).mul(&u.u4)),
        ((1, 0, 1), (1, 0, 0)) => prod(&[k.clone(), k]),
        ((1, 0, 1), (1, 0, 1)) => prod(&[am, k]).scale(&u.u4.neg()),
        ((0, 1, 0), (1, 0, 0)) => prod(&[ap.clone(), ap]),
        ((0, 1, 0), (1, 0, 1)) => prod(&[k, ap]).scale(&u.u4),
        ((0, 1, 1), (1, 0, 0)) => prod(&[ap, k]).scale(&u.u3.neg()),
        ((0, 1, 1), (1, 0, 1)) => sigma_tilde().scale(&rinv.mul(&u.u3).mul(&u.u4)),
        ((1, 0, 0), (0, 1, 0)) => sigma_tilde().scale(&rinv.mul(&u.u1).mul(&u.u2)),
        ((1, 0, 0), (0, 1, 1)) => prod(&[k, am]).scale(&u.u2),
        ((1, 0, 1), (0, 1, 0)) => prod(&[am, k]).scale(&u.u1.neg()),
        ((1, 0, 1), (0, 1, 1)) => prod(&[am.clone(), am]),
        _ => Op::zero(f),
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct WeightLawReport {
    pub nonzero_l: usize,
    pub nonzero_j: usize,
    pub violations: Vec<String>,
}

impl WeightLawReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `h L = L (h + b - d)`, `h J = J (h + 1 + b - c - m - n)` and the
/// index conservation laws, both on the normal-form terms and on states.
pub fn check_weight_laws(u: &UParams) -> WeightLawReport {
    let mut rep = WeightLawReport::default();
    let bits = [0u8, 1];
    for a in bits {
        for b in bits {
            for c in bits {
                for d in bits {
                    let op = l_entry(a, b, c, d);
                    if op.is_zero() {
                        continue;
                    }
                    rep.nonzero_l += 1;
                    let name = format!("L^{{{c}{d}}}_{{{a}{b}}}");
                    if a + b != c + d {
                        rep.violations.push(format!("{name}: index sum"));
                    }
                    check_shift(&op, b as i32 - d as i32, &name, &mut rep.violations);
                }
            }
        }
    }
    for idx in 0..64u8 {
        let bit = |i: u8| (idx >> (5 - i)) & 1;
        let (a, b, c, l, m, n) = (bit(0), bit(1), bit(2), bit(3), bit(4), bit(5));
        let op = j_entry(a, b, c, l, m, n, u);
        if op.is_zero() {
            continue;
        }
        rep.nonzero_j += 1;
        let name = format!("J^{{{l}{m}{n}}}_{{{a}{b}{c}}}");
        if a + b != l + m {
            rep.violations.push(format!("{name}: index sum"));
        }
        let shift = 1 + b as i32 - c as i32 - m as i32 - n as i32;
        check_shift(&op, shift, &name, &mut rep.violations);
    }
    rep
}

fn check_shift(op: &Op, shift: i32, name: &str, out: &mut Vec<String>) {
    if op.ladder_shifts().iter().any(|&j| j != shift) {
        out.push(format!("{name}: ladder content {:?} != {shift}", op.ladder_shifts()));
    }
    for s in 0..=8u32 {
        for n in op.apply_to_state(s).keys() {
            if *n as i64 != s as i64 + shift as i64 {
                out.push(format!("{name}: |{s}> -> |{n}>"));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::sc;

    #[test]
    fn l_examples() {
        assert_eq!(l_entry(0, 1, 0, 1), Op::k(Flavor::Three));
        assert_eq!(l_entry(1, 0, 1, 0), Op::k(Flavor::Three).neg());
        assert!(l_entry(0, 0, 1, 1).is_zero());
    }

    #[test]
    fn j_examples() {
        let u = UParams::generic();
        for a in [0, 1] {
            assert_eq!(j_entry(a, a, 0, a, a, 1, &u), Op::k(Flavor::One));
        }
        assert!(j_entry(0, 0, 0, 1, 1, 1, &u).is_zero());
        let want = sigma_tilde().scale(&sc("u1*u2/r"));
        assert_eq!(j_entry(1, 0, 0, 0, 1, 0, &u), want);
        // u2 k a- on |m> gives u2 q^(m-1/2) (1-q^(2m)) |m-1>.
        let act = j_entry(1, 0, 0, 0, 1, 1, &u).apply_to_state(3);
        assert_eq!(act.get(&2), Some(&sc("u2*q^(5/2)*(1 - q^6)")));
    }

    #[test]
    fn weight_laws_and_counts() {
        let rep = check_weight_laws(&UParams::generic());
        assert!(rep.passed(), "{:?}", rep.violations);
        assert_eq!(rep.nonzero_l, 6);
        assert_eq!(rep.nonzero_j, 24);
    }

    #[test]
    fn free_fermion_relations() {
        let f = Flavor::Three;
        let pm = Op::a_plus(f).compose(&Op::a_minus(f)).unwrap();
        let mp = Op::a_minus(f).compose(&Op::a_plus(f)).unwrap();
        let k2 = Op::k(f).pow(2);
        assert_eq!(pm, Op::identity(f).add(&k2.scale(&sc("-q^(-3)"))).unwrap());
        assert_eq!(mp, Op::identity(f).add(&k2.scale(&sc("-q^3"))).unwrap());
    }

    #[test]
    fn specialised_constraint() {
        let u = UParams::default_specialized();
        assert!(u.constraint_residual().is_zero());
        assert!(UParams::generic().constraint_residual().is_zero());
        assert!(UParams::specialized(sc("1"), sc("1"), sc("1"), sc("1")).is_err());
    }
}
