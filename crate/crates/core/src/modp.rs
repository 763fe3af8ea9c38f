//! Arithmetic in prime fields `Z/p` with `p < 2^63`: evaluation of
//! polynomials, linear solves, interpolation and Chinese remaindering.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::scalar::{Poly, Scalar, Var};

/// Primes used for modular reconstruction.
pub const PRIMES: [u64; 4] = [
    2_305_843_009_213_693_951, // 2^61 - 1
    4_611_686_018_427_387_847, // 2^62 - 57
    9_223_372_036_854_775_783, // 2^63 - 25
    4_611_686_018_427_387_817, // 2^62 - 87
];

#[derive(Clone, Copy, Debug)]
pub struct Fp {
    pub p: u64,
}

impl Fp {
    pub fn new(p: u64) -> Fp {
        Fp { p }
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a as u128 + b as u128;
        (s % self.p as u128) as u64
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            self.p - (b - a)
        }
    }

    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    pub fn pow(&self, a: u64, mut e: u64) -> u64 {
        let mut acc = 1u64;
        let mut b = a % self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        acc
    }

    /// Inverse of a nonzero element.
    pub fn inv(&self, a: u64) -> u64 {
        assert!(a % self.p != 0, "inverse of zero");
        self.pow(a, self.p - 2)
    }

    pub fn from_bigint(&self, c: &BigInt) -> u64 {
        let r = c.mod_floor(&BigInt::from(self.p));
        r.to_u64().unwrap()
    }

    pub fn from_i64(&self, c: i64) -> u64 {
        c.rem_euclid(self.p as i64) as u64
    }

    /// Evaluates a Laurent polynomial in `v` only; `None` if other variables occur.
    pub fn eval_poly_v(&self, p: &Poly, v: u64) -> Option<u64> {
        let vinv = self.inv(v);
        let mut acc = 0u64;
        for (m, c) in p.terms() {
            let mut t = self.from_bigint(c);
            for var in Var::ALL {
                let e = m.exp(var);
                if e == 0 {
                    continue;
                }
                if var != Var::V {
                    return None;
                }
                let base = if e < 0 { vinv } else { v };
                t = self.mul(t, self.pow(base, e.unsigned_abs() as u64));
            }
            acc = self.add(acc, t);
        }
        Some(acc)
    }

    /// Evaluates a scalar in `v` only; `None` on a pole or other variables.
    pub fn eval_scalar_v(&self, s: &Scalar, v: u64) -> Option<u64> {
        let n = self.eval_poly_v(s.num(), v)?;
        let d = self.eval_poly_v(s.den(), v)?;
        if d == 0 {
            return None;
        }
        Some(self.mul(n, self.inv(d)))
    }

    /// Solves `a x = b` (many right-hand sides) for `x` with `a` of full
    /// column rank. Rows beyond the rank must be consistent.
    pub fn solve(&self, a: &[Vec<u64>], b: &[Vec<u64>]) -> Result<Vec<Vec<u64>>, SolveFailure> {
        let nrows = a.len();
        let n = a.first().map(|r| r.len()).unwrap_or(0);
        let nrhs = b.first().map(|r| r.len()).unwrap_or(0);
        let mut m: Vec<Vec<u64>> = a
            .iter()
            .zip(b)
            .map(|(ra, rb)| ra.iter().chain(rb.iter()).copied().collect())
            .collect();
        let width = n + nrhs;
        let mut row = 0;
        for col in 0..n {
            let piv = (row..nrows).find(|&r| m[r][col] != 0);
            let Some(pr) = piv else {
                return Err(SolveFailure::RankDeficient);
            };
            m.swap(row, pr);
            let inv = self.inv(m[row][col]);
            for j in col..width {
                m[row][j] = self.mul(m[row][j], inv);
            }
            for r in 0..nrows {
                if r == row || m[r][col] == 0 {
                    continue;
                }
                let f = m[r][col];
                for j in col..width {
                    let t = self.mul(f, m[row][j]);
                    m[r][j] = self.sub(m[r][j], t);
                }
            }
            row += 1;
        }
        for r in n..nrows {
            if m[r][n..].iter().any(|&x| x != 0) {
                return Err(SolveFailure::Inconsistent);
            }
        }
        Ok(m[..n].iter().map(|r| r[n..].to_vec()).collect())
    }

    /// Rank of a matrix.
    pub fn rank(&self, a: &[Vec<u64>]) -> usize {
        let mut m = a.to_vec();
        let nrows = m.len();
        let n = m.first().map(|r| r.len()).unwrap_or(0);
        let mut row = 0;
        for col in 0..n {
            let Some(pr) = (row..nrows).find(|&r| m[r][col] != 0) else {
                continue;
            };
            m.swap(row, pr);
            let inv = self.inv(m[row][col]);
            for r in row + 1..nrows {
                if m[r][col] == 0 {
                    continue;
                }
                let f = self.mul(m[r][col], inv);
                for j in col..n {
                    let t = self.mul(f, m[row][j]);
                    m[r][j] = self.sub(m[r][j], t);
                }
            }
            row += 1;
        }
        row
    }

    /// Coefficients (ascending) of the polynomial of degree `< xs.len()`
    /// through the points `(xs[i], ys[i])`.
    pub fn interpolate(&self, xs: &[u64], ys: &[u64]) -> Vec<u64> {
        let n = xs.len();
        // Newton divided differences.
        let mut dd = ys.to_vec();
        for level in 1..n {
            for i in (level..n).rev() {
                let num = self.sub(dd[i], dd[i - 1]);
                let den = self.sub(xs[i], xs[i - level]);
                dd[i] = self.mul(num, self.inv(den));
            }
        }
        // Expand the Newton form into monomial coefficients.
        let mut coeffs = vec![0u64; n];
        for i in (0..n).rev() {
            // coeffs <- coeffs * (x - xs[i]) + dd[i]
            let mut next = vec![0u64; n];
            for k in 0..n {
                if coeffs[k] == 0 {
                    continue;
                }
                if k + 1 < n {
                    next[k + 1] = self.add(next[k + 1], coeffs[k]);
                }
                let t = self.mul(coeffs[k], xs[i]);
                next[k] = self.sub(next[k], t);
            }
            next[0] = self.add(next[0], dd[i]);
            coeffs = next;
        }
        coeffs
    }
}

/// Row-reduced echelon form of an augmented system `[A | b]`, filled one
/// equation at a time.
#[derive(Clone, Debug)]
pub struct Echelon {
    fp: Fp,
    n: usize,
    rows: Vec<Vec<u64>>,
    pivots: Vec<usize>,
    inconsistent: bool,
}

impl Echelon {
    /// `n` unknowns; every pushed row has `n + 1` entries (the last is the RHS).
    pub fn new(fp: Fp, n: usize) -> Echelon {
        Echelon { fp, n, rows: Vec::new(), pivots: Vec::new(), inconsistent: false }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.n
    }

    pub fn is_inconsistent(&self) -> bool {
        self.inconsistent
    }

    /// Adds an equation; returns whether it raised the rank.
    pub fn push(&mut self, mut row: Vec<u64>) -> bool {
        let fp = self.fp;
        for (r, &pc) in self.rows.iter().zip(&self.pivots) {
            let f = row[pc];
            if f == 0 {
                continue;
            }
            for j in pc..=self.n {
                if r[j] != 0 {
                    row[j] = fp.sub(row[j], fp.mul(f, r[j]));
                }
            }
        }
        let Some(pc) = (0..self.n).find(|&j| row[j] != 0) else {
            if row[self.n] != 0 {
                self.inconsistent = true;
            }
            return false;
        };
        let inv = fp.inv(row[pc]);
        for x in row[pc..].iter_mut() {
            *x = fp.mul(*x, inv);
        }
        for r in self.rows.iter_mut() {
            let f = r[pc];
            if f == 0 {
                continue;
            }
            for j in pc..=self.n {
                if row[j] != 0 {
                    r[j] = fp.sub(r[j], fp.mul(f, row[j]));
                }
            }
        }
        self.rows.push(row);
        self.pivots.push(pc);
        true
    }

    /// The unique solution when the rank is full and the system consistent.
    pub fn solution(&self) -> Option<Vec<u64>> {
        if !self.is_full() || self.inconsistent {
            return None;
        }
        let mut x = vec![0u64; self.n];
        for (r, &pc) in self.rows.iter().zip(&self.pivots) {
            x[pc] = r[self.n];
        }
        Some(x)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveFailure {
    RankDeficient,
    Inconsistent,
}

/// Combines residues into the symmetric representative modulo the product.
pub fn crt_symmetric(residues: &[u64], primes: &[u64]) -> BigInt {
    let mut x = BigInt::zero();
    let mut m = BigInt::one();
    for (&r, &p) in residues.iter().zip(primes) {
        let pb = BigInt::from(p);
        // x + m * t = r (mod p)
        let fp = Fp::new(p);
        let xm = fp.from_bigint(&x);
        let mm = fp.from_bigint(&m);
        let t = fp.mul(fp.sub(r, xm), fp.inv(mm));
        x += &m * BigInt::from(t);
        m *= &pb;
    }
    let half = &m / 2;
    if x > half {
        x -= &m;
    }
    x
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let fp = Fp::new(n);
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'bases: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = fp.pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = fp.mul(x, x);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes_are_prime() {
        for p in PRIMES {
            assert!(is_prime_u64(p), "{p}");
        }
        assert!(!is_prime_u64(2_305_843_009_213_693_953));
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        let fp = Fp::new(PRIMES[0]);
        let poly = [5u64, 0, fp.from_i64(-3), 7];
        let xs: Vec<u64> = (2..8).collect();
        let ys: Vec<u64> = xs
            .iter()
            .map(|&x| poly.iter().rev().fold(0, |acc, &c| fp.add(fp.mul(acc, x), c)))
            .collect();
        let c = fp.interpolate(&xs, &ys);
        assert_eq!(&c[..4], &poly);
        assert!(c[4..].iter().all(|&x| x == 0));
    }

    #[test]
    fn crt_signed() {
        let v = BigInt::from(-123_456_789_012_345_678_901i128);
        let rs: Vec<u64> = PRIMES[..2].iter().map(|&p| Fp::new(p).from_bigint(&v)).collect();
        assert_eq!(crt_symmetric(&rs, &PRIMES[..2]), v);
    }

    #[test]
    fn echelon_matches_solve() {
        let fp = Fp::new(101);
        let mut e = Echelon::new(fp, 2);
        assert!(e.push(vec![1, 2, 5]));
        assert!(!e.push(vec![2, 4, 10]));
        assert!(e.push(vec![3, 4, 11]));
        assert_eq!(e.solution(), Some(vec![1, 2]));
        assert!(!e.push(vec![4, 6, 17]));
        assert!(e.is_inconsistent());
    }

    #[test]
    fn solve_overdetermined() {
        let fp = Fp::new(101);
        let a = vec![vec![1, 2], vec![3, 4], vec![4, 6]];
        let b = vec![vec![5], vec![11], vec![16]];
        let x = fp.solve(&a, &b).unwrap();
        assert_eq!(x, vec![vec![1], vec![2]]);
        let b = vec![vec![5], vec![11], vec![17]];
        assert_eq!(fp.solve(&a, &b), Err(SolveFailure::Inconsistent));
    }
}
