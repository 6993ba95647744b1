//! Complete factorization over the integers.
//!
//! The pipeline strips the content, splits off a squarefree decomposition,
//! removes rational roots, and reconstructs the remaining factors from subsets
//! of numerically enclosed complex roots. Every candidate is confirmed by
//! exact division, and the working precision is raised until the enclosure
//! guarantees that each true factor rounds to its exact integer coefficients.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::roots::{enclose_roots, log2_abs_int, RootEnclosure};
use super::{IntPolynomial, PolyError};

/// Largest squarefree degree handed to root-subset reconstruction.
pub const MAX_RECONSTRUCTION_DEGREE: usize = 24;

const INITIAL_PRECISION: u32 = 96;
const MAX_PRECISION: u32 = 1 << 16;
/// Bit length past which divisor enumeration for rational roots is skipped.
const DIVISOR_BITS: u64 = 40;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactorizationResult {
    #[serde(serialize_with = "crate::ser::bigint")]
    pub content: BigInt,
    /// Primitive irreducible factors with positive leading coefficient, each
    /// paired with its multiplicity, sorted by degree then coefficients.
    pub factors: Vec<(IntPolynomial, u32)>,
}

impl FactorizationResult {
    /// Multiplies the factorization back out.
    pub fn expand(&self) -> IntPolynomial {
        self.factors.iter().fold(
            IntPolynomial::constant(self.content.clone()),
            |acc, (f, m)| &acc * &f.pow(*m),
        )
    }

    pub fn is_irreducible(&self) -> bool {
        self.content.abs().is_one() && self.factors.len() == 1 && self.factors[0].1 == 1
    }

    /// Human-readable product such as `(x - 1)^2 (x^2 - 18x + 1)`.
    pub fn to_string_in(&self, var: &str) -> String {
        let mut parts = Vec::new();
        if !self.content.is_one() {
            parts.push(self.content.to_string());
        }
        for (f, m) in &self.factors {
            let body = format!("({})", f.to_string_in(var));
            parts.push(if *m == 1 { body } else { format!("{body}^{m}") });
        }
        parts.join(" ")
    }
}

fn canonical_order(a: &IntPolynomial, b: &IntPolynomial) -> Ordering {
    a.degree()
        .cmp(&b.degree())
        .then_with(|| a.coeffs().iter().rev().cmp(b.coeffs().iter().rev()))
}

/// Yun's squarefree decomposition of a primitive polynomial: `(part, multiplicity)`.
fn squarefree_decomposition(f: &IntPolynomial) -> Vec<(IntPolynomial, u32)> {
    let mut out = Vec::new();
    if f.degree() == 0 {
        return out;
    }
    let mut c = f.gcd(&f.derivative());
    let mut w = f.div_exact(&c).expect("gcd divides").primitive_part();
    let mut i = 1;
    while c.degree() > 0 {
        let y = w.gcd(&c);
        let z = w.div_exact(&y).expect("gcd divides").primitive_part();
        if z.degree() > 0 {
            out.push((z, i));
        }
        i += 1;
        c = c.div_exact(&y).expect("gcd divides").primitive_part();
        w = y;
    }
    if w.degree() > 0 {
        out.push((w, i));
    }
    out
}

fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs();
    if n.bits() > DIVISOR_BITS {
        return None;
    }
    let n: u64 = n.try_into().ok()?;
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(BigInt::from(d));
            if d * d != n {
                large.push(BigInt::from(n / d));
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    Some(small)
}

/// Splits off every rational root of a squarefree primitive polynomial.
/// Returns the linear factors, the cofactor, and whether the search was
/// exhaustive.
fn split_rational_roots(g: &IntPolynomial) -> (Vec<IntPolynomial>, IntPolynomial, bool) {
    let mut linear = Vec::new();
    let mut rest = g.clone();
    if rest.constant_term().is_zero() {
        linear.push(IntPolynomial::x());
        rest = rest.div_exact(&IntPolynomial::x()).expect("x divides");
    }
    if rest.degree() == 0 {
        return (linear, rest, true);
    }
    let (Some(nums), Some(dens)) = (divisors(&rest.constant_term()), divisors(&rest.leading()))
    else {
        return (linear, rest, false);
    };
    'outer: for q in &dens {
        for p in &nums {
            if !p.gcd(q).is_one() {
                continue;
            }
            for sign in [1, -1] {
                if rest.degree() == 0 {
                    break 'outer;
                }
                let r = BigRational::new(p * BigInt::from(sign), q.clone());
                if rest.sign_at(&r) == 0 {
                    let lin = IntPolynomial::new(vec![-(p * BigInt::from(sign)), q.clone()]);
                    rest = rest.div_exact(&lin).expect("rational root factor divides");
                    linear.push(lin);
                }
            }
        }
    }
    (linear, rest, true)
}

/// A real root or a complex-conjugate pair, as fixed-point real coefficients
/// of `x - r` or `x^2 - 2 Re(z) x + |z|^2`.
struct RootUnit {
    degree: usize,
    /// Low-degree-first, excluding the monic leading term.
    coeffs: Vec<BigInt>,
    /// Sum of the unit's roots in fixed point.
    trace: BigInt,
}

fn build_units(enc: &RootEnclosure) -> Option<Vec<RootUnit>> {
    let prec = enc.prec;
    let d = enc.roots.len();
    let mut used = vec![false; d];
    let mut units = Vec::new();
    for i in 0..d {
        if used[i] {
            continue;
        }
        let z = &enc.roots[i];
        let im_log2 = if z.im.is_zero() {
            f64::NEG_INFINITY
        } else {
            log2_abs_int(&z.im) - f64::from(prec)
        };
        used[i] = true;
        if im_log2 <= enc.log2_radius[i] {
            units.push(RootUnit {
                degree: 1,
                coeffs: vec![-z.re.clone()],
                trace: z.re.clone(),
            });
            continue;
        }
        // Partner: the unused root nearest to the conjugate.
        let partner = (0..d)
            .filter(|&j| !used[j])
            .min_by(|&a, &b| {
                let da = conj_distance(z, &enc.roots[a]);
                let db = conj_distance(z, &enc.roots[b]);
                da.cmp(&db)
            })?;
        let w = &enc.roots[partner];
        if !w.im.is_negative() == !z.im.is_negative() {
            return None;
        }
        used[partner] = true;
        // Average the pair so the quadratic is exactly real.
        let re = (&z.re + &w.re) >> 1u32;
        let im = (&z.im - &w.im) >> 1u32;
        let norm = (&re * &re + &im * &im) >> prec;
        units.push(RootUnit {
            degree: 2,
            coeffs: vec![norm, -(&re << 1u32)],
            trace: re << 1u32,
        });
    }
    Some(units)
}

fn conj_distance(z: &super::roots::Fixed, w: &super::roots::Fixed) -> BigInt {
    let dr = &z.re - &w.re;
    let di = &z.im + &w.im;
    dr.abs() + di.abs()
}

/// Fixed-point product of the selected units as a monic polynomial.
fn unit_product(units: &[RootUnit], pick: &[usize], prec: u32) -> Vec<BigInt> {
    let one = BigInt::one() << prec;
    let mut acc = vec![one.clone()];
    for &u in pick {
        let unit = &units[u];
        let mut factor = unit.coeffs.clone();
        factor.push(one.clone());
        let mut next = vec![BigInt::zero(); acc.len() + factor.len() - 1];
        for (i, a) in acc.iter().enumerate() {
            for (j, b) in factor.iter().enumerate() {
                next[i + j] += (a * b) >> prec;
            }
        }
        acc = next;
    }
    acc
}

fn round_fixed(x: &BigInt, prec: u32) -> BigInt {
    (x + (BigInt::one() << (prec - 1))) >> prec
}

/// Distance from `x * 2^-prec` to the nearest integer is below 1/4.
fn near_integer(x: &BigInt, prec: u32) -> bool {
    let rounded = round_fixed(x, prec) << prec;
    let diff = (x - rounded).abs();
    diff < (BigInt::one() << (prec - 2))
}

/// `log2` bound on the coefficient error of `lead * prod (x - z)` over any
/// subset of the enclosed roots.
fn reconstruction_error_log2(enc: &RootEnclosure, lead: &BigInt) -> f64 {
    let d = enc.roots.len() as f64;
    let eps = enc
        .log2_radius
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max)
        .max(-f64::from(enc.prec) + d.log2() + 2.0);
    let modulus = super::roots::log2_add(enc.log2_max_modulus().max(0.0), 0.0);
    log2_abs_int(lead) + d + d.log2() + d * modulus + eps + 1.0
}

struct Search<'a> {
    units: &'a [RootUnit],
    alive: &'a [bool],
    prec: u32,
    lead: &'a BigInt,
    target: usize,
    poly: &'a IntPolynomial,
}

impl Search<'_> {
    /// Depth-first search over unit subsets with total degree `target`.
    fn run(&self, start: usize, deg: usize, trace: &BigInt, pick: &mut Vec<usize>) -> Option<(IntPolynomial, Vec<usize>)> {
        if deg == self.target {
            if !near_integer(&(trace * self.lead), self.prec) {
                return None;
            }
            let monic = unit_product(self.units, pick, self.prec);
            let cand = IntPolynomial::new(
                monic
                    .iter()
                    .map(|c| round_fixed(&(c * self.lead), self.prec))
                    .collect(),
            )
            .primitive_part();
            if cand.degree() != self.target {
                return None;
            }
            return self
                .poly
                .div_exact(&cand)
                .map(|_| (cand, pick.clone()));
        }
        for u in start..self.units.len() {
            if !self.alive[u] || deg + self.units[u].degree > self.target {
                continue;
            }
            pick.push(u);
            let t = trace + &self.units[u].trace;
            if let Some(hit) = self.run(u + 1, deg + self.units[u].degree, &t, pick) {
                return Some(hit);
            }
            pick.pop();
        }
        None
    }
}

/// Splits a squarefree primitive polynomial without rational roots into
/// irreducible factors by root-subset reconstruction.
fn reconstruct(h: &IntPolynomial) -> Result<Vec<IntPolynomial>, PolyError> {
    let d = h.degree();
    if d > MAX_RECONSTRUCTION_DEGREE {
        return Err(PolyError::DegreeTooLarge(d, MAX_RECONSTRUCTION_DEGREE));
    }
    let lead = h.leading();
    let mut prec = INITIAL_PRECISION;
    let mut prev: Option<RootEnclosure> = None;
    let (enc, units) = loop {
        let enc = enclose_roots(h, prec, prev.as_ref());
        if enc.isolated && reconstruction_error_log2(&enc, &lead) < -2.0 {
            if let Some(units) = build_units(&enc) {
                break (enc, units);
            }
        }
        if prec >= MAX_PRECISION {
            return Err(PolyError::PrecisionExhausted(prec));
        }
        prec *= 2;
        prev = Some(enc);
    };

    let mut alive = vec![true; units.len()];
    let mut rest = h.clone();
    let mut found = Vec::new();
    let mut target = 1;
    while 2 * target <= rest.degree() {
        let rest_lead = rest.leading();
        let search = Search {
            units: &units,
            alive: &alive,
            prec: enc.prec,
            lead: &rest_lead,
            target,
            poly: &rest,
        };
        match search.run(0, 0, &BigInt::zero(), &mut Vec::new()) {
            Some((factor, picked)) => {
                for u in picked {
                    alive[u] = false;
                }
                rest = rest.div_exact(&factor).expect("candidate divides").primitive_part();
                found.push(factor);
            }
            None => target += 1,
        }
    }
    if rest.degree() > 0 {
        found.push(rest);
    }
    Ok(found)
}

/// Factors a squarefree primitive polynomial into irreducibles.
fn factor_squarefree(g: &IntPolynomial) -> Result<Vec<IntPolynomial>, PolyError> {
    if g.degree() <= 1 {
        return Ok(vec![g.clone()]);
    }
    let (mut out, rest, exhaustive) = split_rational_roots(g);
    match rest.degree() {
        0 => {}
        1 => out.push(rest),
        2 | 3 if exhaustive => out.push(rest),
        _ => out.extend(reconstruct(&rest)?),
    }
    Ok(out)
}

/// Complete factorization of `p` over the integers.
pub fn factor_over_integers(p: &IntPolynomial) -> Result<FactorizationResult, PolyError> {
    if p.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    let mut content = p.content();
    if p.leading().is_negative() {
        content = -content;
    }
    let prim = p.primitive_part();
    let mut factors = Vec::new();
    for (part, mult) in squarefree_decomposition(&prim) {
        for f in factor_squarefree(&part)? {
            factors.push((f.primitive_part(), mult));
        }
    }
    factors.sort_by(|a, b| canonical_order(&a.0, &b.0).then(a.1.cmp(&b.1)));
    Ok(FactorizationResult { content, factors })
}

/// True iff `p` is irreducible over the rationals with unit content.
pub fn is_irreducible(p: &IntPolynomial) -> Result<bool, PolyError> {
    if p.is_constant() {
        return Ok(false);
    }
    Ok(factor_over_integers(p)?.is_irreducible())
}
