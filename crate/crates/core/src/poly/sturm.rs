//! Sturm sequences and exact real-root isolation with rational endpoints.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use super::{sign_of, IntPolynomial};

/// Signed pseudo-remainder sequence of a polynomial and its derivative.
///
/// Every remainder is negated up to a positive scalar and reduced to its
/// primitive part, so sign variations agree with the classical Sturm chain.
#[derive(Debug, Clone)]
pub struct SturmSequence {
    polys: Vec<IntPolynomial>,
}

impl SturmSequence {
    pub fn new(p: &IntPolynomial) -> Self {
        let mut polys = vec![p.clone()];
        if p.degree() == 0 {
            return Self { polys };
        }
        polys.push(p.derivative());
        loop {
            let n = polys.len();
            let (a, b) = (&polys[n - 2], &polys[n - 1]);
            let r = a.pseudo_rem(b);
            if r.is_zero() {
                break;
            }
            // prem multiplies by lc(b)^(deg a - deg b + 1); undo its sign.
            let e = a.degree() - b.degree() + 1;
            let scale_negative = b.leading().is_negative() && e % 2 == 1;
            let content = r.content();
            let mut next = IntPolynomial::new(r.coeffs().iter().map(|c| c / &content).collect());
            if !scale_negative {
                next = -&next;
            }
            polys.push(next);
        }
        Self { polys }
    }

    pub fn polys(&self) -> &[IntPolynomial] {
        &self.polys
    }

    fn variations<I: Iterator<Item = i8>>(signs: I) -> usize {
        let mut last = 0i8;
        let mut count = 0;
        for s in signs.filter(|&s| s != 0) {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }

    /// Sign variations at a finite point (zeros skipped).
    pub fn variations_at(&self, x: &BigRational) -> usize {
        Self::variations(self.polys.iter().map(|p| p.sign_at(x)))
    }

    pub fn variations_at_pos_inf(&self) -> usize {
        Self::variations(self.polys.iter().map(|p| sign_of(&p.leading())))
    }

    pub fn variations_at_neg_inf(&self) -> usize {
        Self::variations(self.polys.iter().map(|p| {
            let s = sign_of(&p.leading());
            if p.degree() % 2 == 1 {
                -s
            } else {
                s
            }
        }))
    }

    /// Distinct real roots in the open interval `(lo, hi)`; `None` is infinite.
    pub fn count_open(&self, lo: Option<&BigRational>, hi: Option<&BigRational>) -> usize {
        let v_lo = lo.map_or_else(|| self.variations_at_neg_inf(), |x| self.variations_at(x));
        let v_hi = hi.map_or_else(|| self.variations_at_pos_inf(), |x| self.variations_at(x));
        let hi_root = hi.is_some_and(|x| self.polys[0].sign_at(x) == 0);
        (v_lo - v_hi).saturating_sub(usize::from(hi_root))
    }
}

/// Number of distinct real roots of `p` in the open interval `(lo, hi)`.
///
/// `None` endpoints stand for `-inf` / `+inf`. The count is taken on the
/// squarefree part, so multiplicities are ignored.
pub fn sturm_count(p: &IntPolynomial, lo: Option<&BigRational>, hi: Option<&BigRational>) -> usize {
    if p.is_constant() {
        return 0;
    }
    SturmSequence::new(&p.squarefree_part()).count_open(lo, hi)
}

/// Interval with rational endpoints isolating one real root of `poly`.
///
/// Either `lo < hi` and the open interval holds exactly one root, or
/// `lo == hi` and the endpoint is itself an exact rational root.
#[derive(Clone, PartialEq, Eq)]
pub struct RootInterval {
    pub lo: BigRational,
    pub hi: BigRational,
    pub poly: IntPolynomial,
}

impl RootInterval {
    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn midpoint(&self) -> BigRational {
        (&self.lo + &self.hi) / BigRational::from_integer(2.into())
    }

    /// Closed containment, so an exact root interval contains its root.
    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_f64(&self, x: f64) -> bool {
        rational_to_f64(&self.lo) <= x && x <= rational_to_f64(&self.hi)
    }

    /// Halves the interval until its width is below `eps`.
    pub fn refine(&mut self, eps: &BigRational) {
        let s_lo = self.poly.sign_at(&self.lo);
        while !self.is_exact() && &self.width() >= eps {
            let mid = self.midpoint();
            let s_mid = self.poly.sign_at(&mid);
            if s_mid == 0 {
                self.lo = mid.clone();
                self.hi = mid;
            } else if s_mid == s_lo {
                self.lo = mid;
            } else {
                self.hi = mid;
            }
        }
    }
}

impl fmt::Debug for RootInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}] root of {}", self.lo, self.hi, self.poly)
    }
}

impl Serialize for RootInterval {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("RootInterval", 3)?;
        st.serialize_field("lo", &self.lo.to_string())?;
        st.serialize_field("hi", &self.hi.to_string())?;
        st.serialize_field("poly", &self.poly)?;
        st.end()
    }
}

pub(crate) fn rational_to_f64(x: &BigRational) -> f64 {
    num_traits::ToPrimitive::to_f64(x).unwrap_or(f64::NAN)
}

/// Integer strictly larger than the modulus of every complex root.
pub(crate) fn cauchy_bound(p: &IntPolynomial) -> BigInt {
    let lead = p.leading().abs();
    let max = p.coeffs()[..p.degree()]
        .iter()
        .map(Signed::abs)
        .max()
        .unwrap_or_default();
    // 1 + max|a_i| / |a_n|, rounded up, plus one for strictness.
    let (q, r) = num_integer::Integer::div_rem(&max, &lead);
    q + BigInt::from(if r.is_zero() { 2 } else { 3 })
}

fn split(
    seq: &SturmSequence,
    poly: &IntPolynomial,
    lo: BigRational,
    hi: BigRational,
    count: usize,
    out: &mut Vec<RootInterval>,
) {
    if count == 0 {
        return;
    }
    if count == 1 {
        out.push(off_roots(seq, poly, lo, hi));
        return;
    }
    let mid = (&lo + &hi) / BigRational::from_integer(2.into());
    let mid_is_root = poly.sign_at(&mid) == 0;
    let left = seq.count_open(Some(&lo), Some(&mid));
    split(seq, poly, lo, mid.clone(), left, out);
    if mid_is_root {
        out.push(RootInterval {
            lo: mid.clone(),
            hi: mid.clone(),
            poly: poly.clone(),
        });
    }
    let right = count - left - usize::from(mid_is_root);
    split(seq, poly, mid, hi, right, out);
}

/// Disjoint isolating intervals for every real root of `p`, ascending, each
/// of width below `eps` (or exact).
pub fn isolate_real_roots(p: &IntPolynomial, eps: &BigRational) -> Vec<RootInterval> {
    if p.is_constant() {
        return Vec::new();
    }
    let sf = p.squarefree_part();
    let seq = SturmSequence::new(&sf);
    let b = BigRational::from_integer(cauchy_bound(&sf));
    let total = seq.count_open(Some(&-b.clone()), Some(&b));
    let mut out = Vec::new();
    split(&seq, &sf, -b.clone(), b, total, &mut out);
    for r in &mut out {
        r.refine(eps);
    }
    out
}

/// Isolating interval of width below `eps` for the largest real root of `p`.
pub fn largest_real_root(p: &IntPolynomial, eps: &BigRational) -> Option<RootInterval> {
    if p.is_constant() {
        return None;
    }
    let sf = p.squarefree_part();
    let seq = SturmSequence::new(&sf);
    let mut hi = BigRational::from_integer(cauchy_bound(&sf));
    if seq.count_open(None, Some(&hi)) == 0 {
        return None;
    }
    let mut lo = -hi.clone();
    // Shrink [lo, hi] keeping exactly the topmost root inside.
    loop {
        let above = seq.count_open(Some(&lo), Some(&hi));
        if above == 1 {
            break;
        }
        let mid = (&lo + &hi) / BigRational::from_integer(2.into());
        if sf.sign_at(&mid) == 0 && seq.count_open(Some(&mid), Some(&hi)) == 0 {
            let mut r = RootInterval {
                lo: mid.clone(),
                hi: mid,
                poly: sf.clone(),
            };
            r.refine(eps);
            return Some(r);
        }
        if seq.count_open(Some(&mid), Some(&hi)) >= 1 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut r = off_roots(&seq, &sf, lo, hi);
    r.refine(eps);
    Some(r)
}

/// Given exactly one root in the open interval `(lo, hi)`, moves any endpoint
/// that is itself a root of `poly` inward so both endpoint signs are nonzero.
fn off_roots(
    seq: &SturmSequence,
    poly: &IntPolynomial,
    mut lo: BigRational,
    mut hi: BigRational,
) -> RootInterval {
    let two = BigRational::from_integer(2.into());
    while poly.sign_at(&lo) == 0 || poly.sign_at(&hi) == 0 {
        let mid = (&lo + &hi) / &two;
        if poly.sign_at(&mid) == 0 {
            return RootInterval {
                lo: mid.clone(),
                hi: mid,
                poly: poly.clone(),
            };
        }
        if seq.count_open(Some(&lo), Some(&mid)) == 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    RootInterval {
        lo,
        hi,
        poly: poly.clone(),
    }
}

/// Exact rational `10^-k`.
pub(crate) fn pow10_inv(k: u32) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(10).pow(k))
}
