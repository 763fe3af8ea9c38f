//! Positive roots of G2 from the reduced word (1,2,1,2,1,2) and the planar
//! three-particle scattering picture whose consistency is a Pappus incidence.

use serde::Serialize;
use thiserror::Error;

/// `c1 alpha_1 + c2 alpha_2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RootVector {
    pub c1: i64,
    pub c2: i64,
}

impl RootVector {
    pub const fn new(c1: i64, c2: i64) -> RootVector {
        RootVector { c1, c2 }
    }

    /// `s1(alpha_1) = -alpha_1`, `s1(alpha_2) = alpha_1 + alpha_2`.
    pub fn s1(self) -> RootVector {
        RootVector::new(-self.c1 + self.c2, self.c2)
    }

    /// `s2(alpha_1) = alpha_1 + 3 alpha_2`, `s2(alpha_2) = -alpha_2`.
    pub fn s2(self) -> RootVector {
        RootVector::new(self.c1, 3 * self.c1 - self.c2)
    }

    pub fn reflect(self, i: u8) -> RootVector {
        match i {
            1 => self.s1(),
            2 => self.s2(),
            _ => panic!("G2 has simple reflections 1 and 2"),
        }
    }
}

impl std::fmt::Display for RootVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let term = |c: i64, s: &str| match c {
            0 => None,
            1 => Some(s.to_string()),
            _ => Some(format!("{c}{s}")),
        };
        let parts: Vec<String> = [term(self.c1, "a1"), term(self.c2, "a2")].into_iter().flatten().collect();
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

pub const REDUCED_WORD: [u8; 6] = [1, 2, 1, 2, 1, 2];

/// `theta_k = s_{i_1} ... s_{i_{k-1}} (alpha_{i_k})`.
pub fn positive_roots() -> Vec<RootVector> {
    (0..6)
        .map(|k| {
            let simple = if REDUCED_WORD[k] == 1 { RootVector::new(1, 0) } else { RootVector::new(0, 1) };
            REDUCED_WORD[..k].iter().rev().fold(simple, |r, &i| r.reflect(i))
        })
        .collect()
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("degenerate angles u = {u}, v = {v}: need 0 < v < u < pi/2")]
    Degenerate { u: f64, v: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Pt {
    pub x: f64,
    pub y: f64,
}

impl Pt {
    fn new(x: f64, y: f64) -> Pt {
        Pt { x, y }
    }
    fn sub(self, o: Pt) -> Pt {
        Pt::new(self.x - o.x, self.y - o.y)
    }
}

/// Line through `p` with direction `d`.
#[derive(Clone, Copy, Debug)]
struct Line {
    p: Pt,
    d: Pt,
}

fn cross(a: Pt, b: Pt) -> f64 {
    a.x * b.y - a.y * b.x
}

fn intersect(a: Line, b: Line) -> Pt {
    let den = cross(a.d, b.d);
    let t = cross(b.p.sub(a.p), b.d) / den;
    Pt::new(a.p.x + t * a.d.x, a.p.y + t * a.d.y)
}

/// Angle at `at` between the rays towards `p` and `q`.
fn angle(at: Pt, p: Pt, q: Pt) -> f64 {
    let (a, b) = (p.sub(at), q.sub(at));
    cross(a, b).abs().atan2(a.x * b.x + a.y * b.y)
}

#[derive(Clone, Debug, Serialize)]
pub struct PappusConfig {
    pub u: f64,
    pub v: f64,
    pub w: f64,
    pub o: [Pt; 3],
    pub p: [Pt; 3],
    pub q: [Pt; 3],
    /// Far points on the incoming world-lines of particles 1, 2, 3.
    pub a: [Pt; 3],
    pub theta: [f64; 6],
}

#[derive(Clone, Debug, Serialize)]
pub struct PappusReport {
    pub tan_identity: f64,
    pub angle_errors: [f64; 6],
    pub collinearity: f64,
    pub on_boundary: f64,
    pub tolerance: f64,
}

impl PappusReport {
    pub fn passed(&self) -> bool {
        let t = self.tolerance;
        self.tan_identity < t && self.angle_errors.iter().all(|e| *e < t) && self.collinearity < t && self.on_boundary < t
    }
}

/// Builds the configuration from `|O1 O2| = 1` and the reflection angles
/// `u` of particle 2 and `v` of particle 1. Particle 3 is then forced to
/// reflect below `P3` and pass through `P1`; the Pappus property is that its
/// incoming line meets particle 1 exactly above `O2`.
///
/// The boundary is the horizontal axis (time) and particle `i` reflects at
/// `O_i` with angle `phi_i`: `y = tan(phi_i) |t - o_i|`.
pub fn build_pappus(u: f64, v: f64) -> Result<(PappusConfig, PappusReport), GeometryError> {
    let half_pi = std::f64::consts::FRAC_PI_2;
    if !(v > 0.0 && u > v && u < half_pi) || u - v < 1e-12 {
        return Err(GeometryError::Degenerate { u, v });
    }
    let (o1, o2) = (Pt::new(1.0, 0.0), Pt::new(0.0, 0.0));
    let incoming = |o: Pt, phi: f64| Line { p: o, d: Pt::new(-1.0, phi.tan()) };
    let outgoing = |o: Pt, phi: f64| Line { p: o, d: Pt::new(1.0, phi.tan()) };
    let vertical = |o: Pt| Line { p: o, d: Pt::new(0.0, 1.0) };
    let boundary = Line { p: o2, d: Pt::new(1.0, 0.0) };

    let in1 = incoming(o1, v);
    let out2 = outgoing(o2, u);
    let p3 = intersect(out2, in1);
    let o3 = intersect(vertical(p3), boundary);
    let p1 = intersect(out2, vertical(o1));
    // Particle 3 reflects at O3 towards P1.
    let d = p1.sub(o3);
    let w = d.y.atan2(d.x);
    let out3 = outgoing(o3, w);
    let in3 = incoming(o3, w);
    let in2 = incoming(o2, u);
    let p2 = intersect(in3, vertical(o2));

    let q3 = intersect(in2, in1);
    let q1 = intersect(in3, out2);
    let q2 = intersect(out3, in1);
    // Incoming lines run to the upper left; the far points must lie beyond
    // every intersection, which recede quickly as u approaches v.
    let min_x = [p1, p2, p3, q1, q2, q3].iter().fold(0.0f64, |m, p| m.min(p.x));
    let far = |l: Line| {
        let t = l.p.x - min_x + 1.0;
        Pt::new(l.p.x + t * l.d.x, l.p.y + t * l.d.y)
    };
    let (a1, a2, a3) = (far(in1), far(in2), far(in3));

    let theta = [
        angle(q3, a2, a1),
        angle(p2, a3, a1),
        angle(q1, a3, o2),
        angle(p3, a1, o2),
        angle(q2, a1, o3),
        angle(p1, o2, o3),
    ];
    let want = [u - v, w - v, u + w, u + v, v + w, w - u];
    let mut angle_errors = [0.0; 6];
    for k in 0..6 {
        angle_errors[k] = (theta[k] - want[k]).abs();
    }
    // P2, P3, O1 collinear, normalised by the lengths involved.
    let (e1, e2) = (p3.sub(p2), o1.sub(p2));
    let collinearity = cross(e1, e2).abs() / (e1.x.hypot(e1.y) * e2.x.hypot(e2.y));
    let report = PappusReport {
        tan_identity: (w.tan() - (u.tan() + v.tan())).abs(),
        angle_errors,
        collinearity,
        on_boundary: o1.y.abs().max(o2.y.abs()).max(o3.y.abs()),
        tolerance: 1e-9,
    };
    let cfg = PappusConfig { u, v, w, o: [o1, o2, o3], p: [p1, p2, p3], q: [q1, q2, q3], a: [a1, a2, a3], theta };
    Ok((cfg, report))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots_in_order() {
        let r = positive_roots();
        let want = [(1, 0), (1, 1), (2, 3), (1, 2), (1, 3), (0, 1)];
        assert_eq!(r, want.map(|(a, b)| RootVector::new(a, b)));
        assert_eq!(r[2].to_string(), "2a1 + 3a2");
    }

    #[test]
    fn reflections_are_involutions() {
        for c1 in -3..=3 {
            for c2 in -3..=3 {
                let x = RootVector::new(c1, c2);
                assert_eq!(x.s1().s1(), x);
                assert_eq!(x.s2().s2(), x);
            }
        }
        // (s1 s2)^6 = 1 in the Weyl group of G2.
        let x = RootVector::new(2, -5);
        let mut y = x;
        for _ in 0..6 {
            y = y.s2().s1();
        }
        assert_eq!(y, x);
    }

    #[test]
    fn sample_configuration() {
        let (cfg, rep) = build_pappus(0.5, 0.3).unwrap();
        assert!(rep.passed(), "{rep:?}");
        assert!(cfg.o[2].x > cfg.o[1].x && cfg.o[2].x < cfg.o[0].x);
    }

    #[test]
    fn nearly_equal_angles() {
        for (u, v) in [(0.4012, 0.3667), (0.9, 0.899), (1.2, 0.05)] {
            let (_, rep) = build_pappus(u, v).unwrap();
            assert!(rep.passed(), "u={u} v={v}: {rep:?}");
        }
    }

    #[test]
    fn degenerate_angles_rejected() {
        assert!(build_pappus(0.4, 0.4).is_err());
        assert!(build_pappus(0.3, 0.5).is_err());
        assert!(build_pappus(1.6, 0.1).is_err());
    }

    #[test]
    fn small_angle_limit_is_additive() {
        for eps in [1e-2, 1e-3, 1e-4] {
            let (cfg, _) = build_pappus(2.0 * eps, eps).unwrap();
            let rel = (cfg.w - 3.0 * eps).abs() / (3.0 * eps);
            assert!(rel < eps, "eps={eps}: {rel}");
        }
    }
}
