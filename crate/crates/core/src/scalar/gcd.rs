//! Multivariate polynomial gcd over the integers.
//!
//! Recursive content / primitive part decomposition with a subresultant
//! remainder sequence in the main variable. Univariate inputs go through a
//! modular algorithm first, which matters for the high-degree q-Pochhammer
//! denominators of boundary sums.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::poly::{Mono, Poly, Var, NVARS};
use crate::modp::{crt_symmetric, is_prime_u64, Fp};

/// Greatest common divisor, normalised to content 1 with a positive first term.
/// Both inputs may carry negative exponents; the result never does.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() && b.is_zero() {
        return Poly::zero();
    }
    if a.is_zero() {
        return normalise(strip_laurent(b));
    }
    if b.is_zero() {
        return normalise(strip_laurent(a));
    }
    // Monomials are units in the Laurent ring, so they are stripped first.
    let a1 = strip_laurent(a);
    let b1 = strip_laurent(b);
    normalise(gcd_rec(&a1, &b1))
}

fn strip_laurent(p: &Poly) -> Poly {
    let m = p.min_exps();
    p.shift(&Mono::one().div(&m))
}

fn normalise(p: Poly) -> Poly {
    if p.is_zero() {
        return p;
    }
    let c = p.content();
    let mut p = p.div_int_exact(&c);
    if !p.is_sign_positive() {
        p = p.neg();
    }
    p
}

/// gcd of two polynomials with non-negative exponents and no monomial factor.
fn gcd_rec(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    if a == b {
        return a.clone();
    }
    let ma = a.vars_mask();
    let mb = b.vars_mask();
    if ma != mb {
        // A variable present in only one input cannot divide the gcd: replace
        // that input by the gcd of its coefficients in the variable.
        let only_a = ma & !mb;
        if only_a != 0 {
            let v = first_var(only_a);
            return gcd_with_coeffs(b, a, v);
        }
        let v = first_var(mb & !ma);
        return gcd_with_coeffs(a, b, v);
    }
    if ma.count_ones() == 1 {
        if let Some(g) = modular_univariate(a, b, first_var(ma)) {
            return g;
        }
    }
    // Main variable: smallest combined degree.
    let ea = a.max_exps();
    let eb = b.max_exps();
    let mut best: Option<(Var, i32)> = None;
    for v in Var::ALL {
        if ma & (1 << v.index()) == 0 {
            continue;
        }
        let d = ea.exp(v).max(eb.exp(v));
        if best.map(|(_, bd)| d < bd).unwrap_or(true) {
            best = Some((v, d));
        }
    }
    let (x, _) = best.unwrap();
    let ua = Uni::from_poly(a, x);
    let ub = Uni::from_poly(b, x);
    let ca = ua.content();
    let cb = ub.content();
    let gc = gcd_rec_any(&ca, &cb);
    let pa = ua.div_coeffs(&ca);
    let pb = ub.div_coeffs(&cb);
    let gp = if pa.deg() >= pb.deg() { subresultant(pa, pb) } else { subresultant(pb, pa) };
    let gp = gp.primitive();
    gc.mul(&gp.to_poly())
}

/// gcd for inputs that may carry monomial factors.
fn gcd_rec_any(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    let ma = a.min_exps();
    let mb = b.min_exps();
    let mut mg = [0; NVARS];
    for i in 0..NVARS {
        mg[i] = ma.0[i].min(mb.0[i]);
    }
    let a1 = a.shift(&Mono::one().div(&ma));
    let b1 = b.shift(&Mono::one().div(&mb));
    let g = normalise(gcd_rec(&a1, &b1));
    g.shift(&Mono(mg))
}

fn gcd_with_coeffs(other: &Poly, p: &Poly, v: Var) -> Poly {
    let mut g = other.clone();
    for (_, c) in p.coeffs_in(v) {
        g = gcd_rec_any(&g, &c);
        if g.is_constant() {
            return Poly::one();
        }
    }
    normalise(g)
}

fn first_var(mask: u32) -> Var {
    Var::ALL[mask.trailing_zeros() as usize]
}

/// Dense univariate view: `coeffs[i]` multiplies `x^i` and is free of `x`.
#[derive(Clone, Debug)]
struct Uni {
    x: Var,
    coeffs: Vec<Poly>,
}

impl Uni {
    fn from_poly(p: &Poly, x: Var) -> Uni {
        let parts = p.coeffs_in(x);
        let deg = parts.last().map(|(e, _)| *e).unwrap_or(0);
        let mut coeffs = vec![Poly::zero(); deg as usize + 1];
        for (e, c) in parts {
            assert!(e >= 0);
            coeffs[e as usize] = c;
        }
        Uni { x, coeffs }
    }

    fn to_poly(&self) -> Poly {
        let mut terms = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            let m = Mono::var(self.x, i as i32);
            for (mm, cc) in c.terms() {
                terms.push((mm.mul(&m), cc.clone()));
            }
        }
        Poly::from_terms(terms)
    }

    fn deg(&self) -> usize {
        self.coeffs.len() - 1
    }

    fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_zero()
    }

    fn lc(&self) -> &Poly {
        self.coeffs.last().unwrap()
    }

    fn trim(&mut self) {
        while self.coeffs.len() > 1 && self.coeffs.last().unwrap().is_zero() {
            self.coeffs.pop();
        }
    }

    fn content(&self) -> Poly {
        let mut g = Poly::zero();
        for c in &self.coeffs {
            if c.is_zero() {
                continue;
            }
            g = if g.is_zero() { normalise(c.clone()) } else { gcd_rec_any(&g, c) };
            if g.is_one() {
                break;
            }
        }
        g
    }

    fn div_coeffs(&self, d: &Poly) -> Uni {
        if d.is_one() {
            return self.clone();
        }
        Uni {
            x: self.x,
            coeffs: self
                .coeffs
                .iter()
                .map(|c| c.div_exact(d).expect("content must divide every coefficient"))
                .collect(),
        }
    }

    fn scale(&self, c: &Poly) -> Uni {
        Uni { x: self.x, coeffs: self.coeffs.iter().map(|a| a.mul(c)).collect() }
    }

    fn primitive(&self) -> Uni {
        let c = self.content();
        if c.is_zero() {
            return self.clone();
        }
        let mut p = self.div_coeffs(&c);
        let int_c = p.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(&c.content()));
        if !int_c.is_one() && !int_c.is_zero() {
            p.coeffs = p.coeffs.iter().map(|c| c.div_int_exact(&int_c)).collect();
        }
        let lead_neg = p.lc().first().map(|t| t.1.is_negative()).unwrap_or(false);
        if lead_neg {
            p.coeffs = p.coeffs.iter().map(|c| c.neg()).collect();
        }
        p
    }

    /// Pseudo-remainder of `self` by `b`.
    fn prem(&self, b: &Uni) -> Uni {
        let db = b.deg();
        let lcb = b.lc().clone();
        let mut r = self.clone();
        let mut e = self.deg() as i64 - db as i64 + 1;
        while !r.is_zero() && r.deg() >= db {
            let k = r.deg() - db;
            let lr = r.lc().clone();
            let mut next = r.scale(&lcb);
            for (i, bc) in b.coeffs.iter().enumerate() {
                if bc.is_zero() {
                    continue;
                }
                let t = bc.mul(&lr);
                next.coeffs[i + k] = next.coeffs[i + k].sub(&t);
            }
            next.coeffs.pop();
            if next.coeffs.is_empty() {
                next.coeffs.push(Poly::zero());
            }
            next.trim();
            r = next;
            e -= 1;
        }
        if e > 0 {
            r = r.scale(&lcb.pow(e as u32));
        }
        r
    }
}

/// Subresultant remainder sequence; `a` and `b` primitive, `deg a >= deg b`.
fn subresultant(a: Uni, b: Uni) -> Uni {
    let mut a = a;
    let mut b = b;
    let mut g = Poly::one();
    let mut h = Poly::one();
    loop {
        if b.is_zero() {
            return a;
        }
        let delta = a.deg() - b.deg();
        let r = a.prem(&b);
        if r.is_zero() {
            return b;
        }
        if r.deg() == 0 {
            return Uni { x: a.x, coeffs: vec![Poly::one()] };
        }
        let divisor = g.mul(&h.pow(delta as u32));
        let next = r.div_coeffs(&divisor);
        a = b;
        b = next;
        g = a.lc().clone();
        // h <- g^delta / h^(delta - 1)
        if delta == 0 {
            // h unchanged: h^1 * g^0
        } else {
            let num = g.pow(delta as u32);
            let den = h.pow(delta as u32 - 1);
            h = num.div_exact(&den).expect("subresultant h update must be exact");
        }
    }
}

fn dense(p: &Poly, x: Var) -> Vec<BigInt> {
    let deg = p.max_exps().exp(x) as usize;
    let mut out = vec![BigInt::zero(); deg + 1];
    for (m, c) in p.terms() {
        out[m.exp(x) as usize] = c.clone();
    }
    out
}

fn sparse(c: &[BigInt], x: Var) -> Poly {
    Poly::from_terms(c.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (Mono::var(x, i as i32), c.clone())).collect())
}

fn trim_mod(a: &mut Vec<u64>) {
    while a.len() > 1 && *a.last().unwrap() == 0 {
        a.pop();
    }
}

/// Monic gcd over `Z/p`.
fn gcd_mod(fp: &Fp, a: &[u64], b: &[u64]) -> Vec<u64> {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    trim_mod(&mut a);
    trim_mod(&mut b);
    while !(b.len() == 1 && b[0] == 0) {
        let inv = fp.inv(*b.last().unwrap());
        while a.len() >= b.len() && !(a.len() == 1 && a[0] == 0) {
            let k = a.len() - b.len();
            let f = fp.mul(*a.last().unwrap(), inv);
            for (i, bc) in b.iter().enumerate() {
                a[i + k] = fp.sub(a[i + k], fp.mul(f, *bc));
            }
            a.pop();
            if a.is_empty() {
                a.push(0);
            }
            trim_mod(&mut a);
        }
        std::mem::swap(&mut a, &mut b);
    }
    let inv = fp.inv(*a.last().unwrap());
    a.iter().map(|c| fp.mul(*c, inv)).collect()
}

/// Exact quotient in `Z[x]`, or `None` if `d` does not divide `a`.
fn divides(d: &[BigInt], a: &[BigInt]) -> bool {
    if a.len() < d.len() {
        return false;
    }
    let mut r = a.to_vec();
    let ld = d.last().unwrap();
    for k in (0..=a.len() - d.len()).rev() {
        let top = &r[k + d.len() - 1];
        if top.is_zero() {
            continue;
        }
        let (q, rem) = top.div_rem(ld);
        if !rem.is_zero() {
            return false;
        }
        for (i, dc) in d.iter().enumerate() {
            if !dc.is_zero() {
                r[i + k] -= &q * dc;
            }
        }
    }
    r.iter().all(|c| c.is_zero())
}

/// Brown's modular gcd for two polynomials in the single variable `x`
/// with non-negative exponents. Images modulo 62-bit primes are combined
/// until the lift stabilises and then confirmed by exact division, so the
/// result is always correct; `None` only if the prime supply runs out.
fn modular_univariate(a: &Poly, b: &Poly, x: Var) -> Option<Poly> {
    let (ca, cb) = (a.content(), b.content());
    let c = ca.gcd(&cb);
    let da: Vec<BigInt> = dense(a, x).iter().map(|t| t / &ca).collect();
    let db: Vec<BigInt> = dense(b, x).iter().map(|t| t / &cb).collect();
    let l = da.last().unwrap().gcd(db.last().unwrap());
    let mut primes: Vec<u64> = Vec::new();
    let mut images: Vec<Vec<u64>> = Vec::new();
    let mut last: Option<Vec<BigInt>> = None;
    let mut cand = (1u64 << 62) - 1;
    let mut tried = 0;
    while tried < 64 {
        cand -= 2;
        if !is_prime_u64(cand) {
            continue;
        }
        tried += 1;
        let fp = Fp::new(cand);
        let (la, lb) = (fp.from_bigint(da.last().unwrap()), fp.from_bigint(db.last().unwrap()));
        if la == 0 || lb == 0 {
            continue;
        }
        let am: Vec<u64> = da.iter().map(|t| fp.from_bigint(t)).collect();
        let bm: Vec<u64> = db.iter().map(|t| fp.from_bigint(t)).collect();
        let g = gcd_mod(&fp, &am, &bm);
        if g.len() == 1 {
            return Some(Poly::constant(c));
        }
        match images.first().map(|i| i.len()) {
            Some(d) if g.len() > d => continue,
            Some(d) if g.len() < d => {
                primes.clear();
                images.clear();
                last = None;
            }
            _ => {}
        }
        let lm = fp.from_bigint(&l);
        images.push(g.iter().map(|t| fp.mul(*t, lm)).collect());
        primes.push(cand);
        let lifted: Vec<BigInt> = (0..g.len())
            .map(|i| {
                let res: Vec<u64> = images.iter().map(|im| im[i]).collect();
                crt_symmetric(&res, &primes)
            })
            .collect();
        if last.as_ref() == Some(&lifted) {
            let cont = lifted.iter().fold(BigInt::zero(), |g, t| g.gcd(t));
            let mut pp: Vec<BigInt> = lifted.iter().map(|t| t / &cont).collect();
            if pp.last().unwrap().is_negative() {
                pp = pp.iter().map(|t| -t).collect();
            }
            if divides(&pp, &da) && divides(&pp, &db) {
                return Some(sparse(&pp, x).scale(&c));
            }
        }
        last = Some(lifted);
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Poly {
        crate::scalar::text::parse_poly(s).unwrap()
    }

    #[test]
    fn gcd_of_products() {
        let a = p("(1 - v^2*z)*(1 + v)");
        let b = p("(1 - v^2*z)*(3 - v)");
        assert_eq!(gcd(&a, &b), p("1 - v^2*z"));
    }

    #[test]
    fn gcd_univariate_with_content() {
        let a = p("6*(v^2 - 1)");
        let b = p("4*(v - 1)^2");
        assert_eq!(gcd(&a, &b), p("v - 1").neg());
    }

    #[test]
    fn gcd_disjoint_variables() {
        let a = p("(1 + z)*(u1 + v)");
        let b = p("(1 + z)*(2 + x)");
        assert_eq!(gcd(&a, &b), p("1 + z"));
    }

    #[test]
    fn gcd_coprime() {
        assert!(gcd(&p("1 + v + z"), &p("1 - v*z")).is_one());
    }

    #[test]
    fn gcd_with_monomials() {
        let a = p("v^3*z*(1 + z)");
        let b = p("v^5*(1 + z)^2");
        assert_eq!(gcd(&a, &b), p("1 + z"));
    }

    #[test]
    fn gcd_trivariate() {
        let f = p("u1*v^2 + u3*u4 - z");
        let a = f.mul(&p("u1 + x"));
        let b = f.mul(&p("u3 - v*u4 + 1"));
        let g = gcd(&a, &b);
        assert!(g == f || g == f.neg());
    }

    #[test]
    fn modular_path_agrees_with_subresultant() {
        let poch = |n: i32| (1..=n).fold(Poly::one(), |a, k| a.mul(&p(&format!("1 - v^{}", 2 * k))));
        let cases = [
            (poch(12).mul(&p("1 + v^10")), poch(9).mul(&p("(1 - v^14)^2*(2 + v^2)"))),
            (poch(7).mul(&p("6*(3 - v)")), poch(7).mul(&p("4*(1 + v^3)"))),
            (p("(1 + v)^5*(1 - 2*v)"), p("(1 + v)^3*(7 + v^4)")),
        ];
        for (a, b) in cases {
            let g = gcd(&a, &b);
            let (ua, ub) = (Uni::from_poly(&a, Var::V).primitive(), Uni::from_poly(&b, Var::V).primitive());
            let sr = if ua.deg() >= ub.deg() { subresultant(ua, ub) } else { subresultant(ub, ua) };
            let content = a.content().gcd(&b.content());
            assert_eq!(g, normalise(sr.primitive().to_poly().scale(&content)));
            assert!(a.div_exact(&g).is_some() && b.div_exact(&g).is_some());
        }
    }
}
