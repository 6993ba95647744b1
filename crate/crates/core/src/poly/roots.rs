//! Arbitrary-precision complex root approximation with inclusion radii.
//!
//! Roots are held in binary fixed point: an integer pair `(re, im)` stands for
//! `(re + i im) * 2^-prec`. Approximations come from Aberth iteration, first
//! in `f64` for a starting point and then at full precision. Each root carries
//! an inclusion radius `d * |p(z_i)| / |lc * prod_{j != i} (z_i - z_j)|`; when
//! these disks are pairwise disjoint each one holds exactly one root.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{FromPrimitive, Signed, Zero};

use super::{bigint_to_f64, IntPolynomial};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Fixed {
    pub re: BigInt,
    pub im: BigInt,
}

impl Fixed {
    fn zero() -> Self {
        Self {
            re: BigInt::zero(),
            im: BigInt::zero(),
        }
    }

    fn from_int(x: &BigInt, prec: u32) -> Self {
        Self {
            re: x << prec,
            im: BigInt::zero(),
        }
    }

    fn from_f64(z: Complex64, prec: u32) -> Self {
        let conv = |x: f64| {
            if !x.is_finite() {
                return BigInt::zero();
            }
            if prec >= 60 {
                BigInt::from_f64(x * 2f64.powi(60)).unwrap_or_default() << (prec - 60)
            } else {
                BigInt::from_f64(x * 2f64.powi(prec as i32)).unwrap_or_default()
            }
        };
        Self {
            re: conv(z.re),
            im: conv(z.im),
        }
    }

    fn add(&self, o: &Self) -> Self {
        Self {
            re: &self.re + &o.re,
            im: &self.im + &o.im,
        }
    }

    fn sub(&self, o: &Self) -> Self {
        Self {
            re: &self.re - &o.re,
            im: &self.im - &o.im,
        }
    }

    fn mul(&self, o: &Self, prec: u32) -> Self {
        Self {
            re: (&self.re * &o.re - &self.im * &o.im) >> prec,
            im: (&self.re * &o.im + &self.im * &o.re) >> prec,
        }
    }

    fn div(&self, o: &Self, prec: u32) -> Option<Self> {
        let den = &o.re * &o.re + &o.im * &o.im;
        if den.is_zero() {
            return None;
        }
        let re = &self.re * &o.re + &self.im * &o.im;
        let im = &self.im * &o.re - &self.re * &o.im;
        Some(Self {
            re: (re << prec) / &den,
            im: (im << prec) / &den,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// `log2 |z|` of the represented value; `-inf` for zero.
    pub fn log2_abs(&self, prec: u32) -> f64 {
        let bits = self.re.bits().max(self.im.bits());
        if bits == 0 {
            return f64::NEG_INFINITY;
        }
        let shift = bits.saturating_sub(60);
        let re = bigint_to_f64(&(&self.re >> shift));
        let im = bigint_to_f64(&(&self.im >> shift));
        re.hypot(im).log2() + shift as f64 - f64::from(prec)
    }

    #[cfg(test)]
    pub fn to_complex(&self, prec: u32) -> Complex64 {
        let scale = |x: &BigInt| {
            let bits = x.bits();
            let shift = bits.saturating_sub(60);
            bigint_to_f64(&(x >> shift)) * 2f64.powf(shift as f64 - f64::from(prec))
        };
        Complex64::new(scale(&self.re), scale(&self.im))
    }
}

/// Horner evaluation of `p` and `p'` at a fixed-point complex number.
fn eval_with_derivative(p: &IntPolynomial, z: &Fixed, prec: u32) -> (Fixed, Fixed) {
    let mut val = Fixed::zero();
    let mut der = Fixed::zero();
    for c in p.coeffs().iter().rev() {
        der = der.mul(z, prec).add(&val);
        val = val.mul(z, prec).add(&Fixed::from_int(c, prec));
    }
    (val, der)
}

fn eval(p: &IntPolynomial, z: &Fixed, prec: u32) -> Fixed {
    let mut val = Fixed::zero();
    for c in p.coeffs().iter().rev() {
        val = val.mul(z, prec).add(&Fixed::from_int(c, prec));
    }
    val
}

/// Root approximations with certified inclusion radii.
#[derive(Debug, Clone)]
pub(crate) struct RootEnclosure {
    pub prec: u32,
    pub roots: Vec<Fixed>,
    /// `log2` of each inclusion radius.
    pub log2_radius: Vec<f64>,
    /// True when every pair of inclusion disks is disjoint.
    pub isolated: bool,
}

impl RootEnclosure {
    #[cfg(test)]
    pub fn complex(&self, i: usize) -> Complex64 {
        self.roots[i].to_complex(self.prec)
    }

    /// Largest modulus among the approximations, plus radius.
    pub fn log2_max_modulus(&self) -> f64 {
        self.roots
            .iter()
            .zip(&self.log2_radius)
            .map(|(z, r)| log2_add(z.log2_abs(self.prec), *r))
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

pub(crate) fn log2_add(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if lo == f64::NEG_INFINITY {
        return hi;
    }
    hi + (1.0 + (lo - hi).exp2()).log2()
}

fn initial_guesses(p: &IntPolynomial) -> Vec<Complex64> {
    let d = p.degree();
    let coeffs: Vec<f64> = p.coeffs().iter().map(bigint_to_f64).collect();
    let lead = coeffs[d];
    // Fujiwara-style radius estimate.
    let mut radius: f64 = 0.0;
    for (i, c) in coeffs[..d].iter().enumerate() {
        let r = (c / lead).abs().powf(1.0 / (d - i) as f64);
        radius = radius.max(r);
    }
    if !radius.is_finite() || radius == 0.0 {
        radius = 1.0;
    }
    let mut z: Vec<Complex64> = (0..d)
        .map(|k| Complex64::from_polar(radius, std::f64::consts::TAU * k as f64 / d as f64 + 0.4))
        .collect();
    if coeffs.iter().any(|c| !c.is_finite()) {
        return z;
    }
    let horner = |x: Complex64| {
        let mut v = Complex64::zero();
        let mut dv = Complex64::zero();
        for &c in coeffs.iter().rev() {
            dv = dv * x + v;
            v = v * x + c;
        }
        (v, dv)
    };
    for _ in 0..500 {
        let mut moved: f64 = 0.0;
        for i in 0..d {
            let (v, dv) = horner(z[i]);
            if v == Complex64::zero() {
                continue;
            }
            let ratio = v / dv;
            let s: Complex64 = (0..d)
                .filter(|&j| j != i)
                .map(|j| (z[i] - z[j]).inv())
                .sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if w.is_finite() {
                z[i] -= w;
                moved = moved.max(w.norm() / z[i].norm().max(1.0));
            }
        }
        if moved < 1e-14 {
            break;
        }
    }
    z
}

/// Aberth refinement at `prec` fractional bits starting from `start`.
fn refine(p: &IntPolynomial, start: Vec<Fixed>, prec: u32, max_iter: usize) -> Vec<Fixed> {
    let d = p.degree();
    let mut z = start;
    let one = Fixed {
        re: BigInt::from(1) << prec,
        im: BigInt::zero(),
    };
    let nudge = Fixed {
        re: BigInt::from(1) << (prec / 2),
        im: BigInt::from(1) << (prec / 3),
    };
    let tolerance_bits = 24u64;
    for _ in 0..max_iter {
        let mut worst = 0u64;
        for i in 0..d {
            let (v, dv) = eval_with_derivative(p, &z[i], prec);
            if v.is_zero() {
                continue;
            }
            let Some(ratio) = v.div(&dv, prec) else {
                z[i] = z[i].add(&nudge);
                worst = u64::MAX;
                continue;
            };
            let mut s = Fixed::zero();
            let mut collided = false;
            for j in (0..d).filter(|&j| j != i) {
                match one.div(&z[i].sub(&z[j]), prec) {
                    Some(t) => s = s.add(&t),
                    None => collided = true,
                }
            }
            if collided {
                z[i] = z[i].add(&nudge);
                worst = u64::MAX;
                continue;
            }
            let den = one.sub(&ratio.mul(&s, prec));
            let w = ratio.div(&den, prec).unwrap_or(ratio);
            worst = worst.max(w.re.bits().max(w.im.bits()));
            z[i] = z[i].sub(&w);
        }
        if worst <= tolerance_bits {
            break;
        }
    }
    z
}

fn enclose(p: &IntPolynomial, roots: Vec<Fixed>, prec: u32) -> RootEnclosure {
    let d = p.degree();
    let lead_log2 = bigint_to_f64(&p.leading().abs()).log2();
    let coeff_sum: f64 = p.coeffs().iter().map(|c| bigint_to_f64(&c.abs())).sum();
    let mut log2_radius = Vec::with_capacity(d);
    for i in 0..d {
        let zi = &roots[i];
        let val = eval(p, zi, prec);
        // Horner rounding: at most (d + 1) ulps scaled by the coefficient mass.
        let mag = zi.log2_abs(prec).max(0.0);
        let horner_err = ((d + 1) as f64).log2() + coeff_sum.log2() + d as f64 * log2_add(mag, 0.0)
            - f64::from(prec)
            + 2.0;
        let num = log2_add(val.log2_abs(prec), horner_err);
        let mut den = lead_log2;
        for (j, zj) in roots.iter().enumerate() {
            if j != i {
                den += zi.sub(zj).log2_abs(prec);
            }
        }
        let r = (d as f64).log2() + num - den + 0.01;
        log2_radius.push(if r.is_nan() { f64::INFINITY } else { r });
    }
    let mut isolated = log2_radius.iter().all(|r| r.is_finite());
    'outer: for i in 0..d {
        for j in i + 1..d {
            let gap = roots[i].sub(&roots[j]).log2_abs(prec);
            if gap <= log2_add(log2_radius[i], log2_radius[j]) + 0.01 {
                isolated = false;
                break 'outer;
            }
        }
    }
    RootEnclosure {
        prec,
        roots,
        log2_radius,
        isolated,
    }
}

/// Approximates all complex roots of a squarefree `p` (degree >= 1) at
/// `prec` fractional bits, optionally continuing from an earlier enclosure.
pub(crate) fn enclose_roots(
    p: &IntPolynomial,
    prec: u32,
    previous: Option<&RootEnclosure>,
) -> RootEnclosure {
    let start: Vec<Fixed> = match previous {
        Some(prev) => prev
            .roots
            .iter()
            .map(|z| {
                let shift = prec.saturating_sub(prev.prec);
                Fixed {
                    re: &z.re << shift,
                    im: &z.im << shift,
                }
            })
            .collect(),
        None => initial_guesses(p)
            .into_iter()
            .map(|z| Fixed::from_f64(z, prec))
            .collect(),
    };
    let roots = refine(p, start, prec, 400);
    enclose(p, roots, prec)
}

/// Root modulus upper bound as `log2`, used for precision planning.
pub(crate) fn log2_abs_int(x: &BigInt) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let shift = x.bits().saturating_sub(60);
    bigint_to_f64(&(x.abs() >> shift)).log2() + shift as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_roots_are_enclosed() {
        let p = IntPolynomial::from_high_first(&[1, -18, 1]);
        let enc = enclose_roots(&p, 128, None);
        assert!(enc.isolated);
        let mut re: Vec<f64> = (0..2).map(|i| enc.complex(i).re).collect();
        re.sort_by(f64::total_cmp);
        assert!((re[1] - (9.0 + 4.0 * 5f64.sqrt())).abs() < 1e-12);
        assert!(enc.log2_radius.iter().all(|r| *r < -80.0));
    }

    #[test]
    fn gaussian_roots_of_x2_plus_1() {
        let p = IntPolynomial::from_high_first(&[1, 0, 1]);
        let enc = enclose_roots(&p, 96, None);
        assert!(enc.isolated);
        for i in 0..2 {
            let z = enc.complex(i);
            assert!(z.re.abs() < 1e-20);
            assert!((z.im.abs() - 1.0).abs() < 1e-20);
        }
    }

    #[test]
    fn precision_can_be_raised_from_previous() {
        let p = IntPolynomial::from_high_first(&[1, -24, 156, -424, -186, -424, 156, -24, 1]);
        let low = enclose_roots(&p, 80, None);
        let high = enclose_roots(&p, 400, Some(&low));
        assert!(high.isolated);
        assert!(high.log2_radius.iter().all(|r| *r < -300.0));
    }
}
