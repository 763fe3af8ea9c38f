use super::{Poly, Scalar, ScalarError, Var};

/// Power series in `z` truncated after `z^order`, with coefficients free of `z`.
#[derive(Clone, Debug, PartialEq)]
pub struct Series {
    pub coeffs: Vec<Scalar>,
}

impl Series {
    pub fn zero(order: usize) -> Series {
        Series { coeffs: vec![Scalar::zero(); order + 1] }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Expansion of a scalar around `z = 0`.
    pub fn expand(s: &Scalar, order: usize) -> Result<Series, ScalarError> {
        let num = split(s.num(), s.den(), order);
        let den = split(s.den(), s.den(), order);
        let d0 = den[0].clone();
        if d0.is_zero() {
            return Err(ScalarError::Pole);
        }
        let inv0 = d0.inv()?;
        let mut c: Vec<Scalar> = Vec::with_capacity(order + 1);
        for n in 0..=order {
            let mut acc = num[n].clone();
            for i in 1..=n {
                if den[i].is_zero() || c[n - i].is_zero() {
                    continue;
                }
                acc = acc.sub(&den[i].mul(&c[n - i]));
            }
            c.push(acc.mul(&inv0));
        }
        Ok(Series { coeffs: c })
    }

    pub fn add(&self, o: &Series) -> Series {
        let n = self.order().min(o.order());
        Series { coeffs: (0..=n).map(|i| self.coeffs[i].add(&o.coeffs[i])).collect() }
    }

    pub fn mul(&self, o: &Series) -> Series {
        let n = self.order().min(o.order());
        let mut out = vec![Scalar::zero(); n + 1];
        for i in 0..=n {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=n - i {
                if o.coeffs[j].is_zero() {
                    continue;
                }
                out[i + j] = out[i + j].add(&self.coeffs[i].mul(&o.coeffs[j]));
            }
        }
        Series { coeffs: out }
    }
}

/// Coefficients of `p / lead(den)` in powers of `z`, where the z-free
/// normalisation is irrelevant because numerator and denominator share it.
fn split(p: &Poly, _den: &Poly, order: usize) -> Vec<Scalar> {
    let mut out = vec![Scalar::zero(); order + 1];
    for (e, c) in p.coeffs_in(Var::Z) {
        assert!(e >= 0, "negative power of z in a canonical scalar");
        if (e as usize) <= order {
            out[e as usize] = Scalar::from_poly(c);
        }
    }
    out
}
