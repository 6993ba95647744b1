//! Independent low-tech cross-checks for the exact library: floating power
//! iteration, numeric polynomial roots, brute-force factor search, and a
//! concrete replay of half-twist weight updates.
//!
//! Nothing here depends on the exact library; inputs are plain vectors.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("root iteration did not reach the requested tolerance")]
    PrecisionExhausted,
    #[error("search space of {0} candidates exceeds the limit")]
    SearchSpaceTooLarge(u128),
    #[error("degree {0} is outside the supported range")]
    UnsupportedDegree(usize),
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("twist at {puncture} finds no spine branch at {branch}")]
    NotCarried { puncture: usize, branch: usize },
    #[error("final spine differs from the initial spine")]
    SpineMismatch,
    #[error("vector has length {found}, expected {expected}")]
    LengthMismatch { expected: usize, found: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerIteration {
    pub estimate: f64,
    pub converged: bool,
}

/// Dominant eigenvalue of a nonnegative matrix by normalized power iteration.
pub fn power_iteration(m: &[Vec<f64>], iterations: usize) -> PowerIteration {
    let n = m.len();
    let mut v = vec![1.0 / n as f64; n];
    let mut estimate = 0.0;
    for _ in 0..iterations {
        let w: Vec<f64> = m
            .iter()
            .map(|row| row.iter().zip(&v).map(|(a, b)| a * b).sum())
            .collect();
        let norm: f64 = w.iter().sum();
        if norm == 0.0 {
            return PowerIteration { estimate: 0.0, converged: false };
        }
        let next = norm / v.iter().sum::<f64>();
        v = w.into_iter().map(|x| x / norm).collect();
        if (next - estimate).abs() <= 1e-13 * next.abs() {
            return PowerIteration { estimate: next, converged: true };
        }
        estimate = next;
    }
    PowerIteration { estimate, converged: false }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NumericRootSet {
    pub roots: Vec<Complex64>,
    /// `|p(z)| / sum |a_i| max(1, |z|)^i` for each root.
    pub residuals: Vec<f64>,
}

fn horner(coeffs: &[f64], z: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(Complex64::zero(), |acc, &c| acc * z + c)
}

fn relative_residual(coeffs: &[f64], z: Complex64) -> f64 {
    let scale: f64 = coeffs
        .iter()
        .rev()
        .fold(0.0, |acc, &c| acc * z.norm().max(1.0) + c.abs());
    horner(coeffs, z).norm() / scale.max(f64::MIN_POSITIVE)
}

/// All complex roots of a squarefree polynomial (low-degree-first
/// coefficients) by Durand-Kerner iteration, accepted when every relative
/// residual is below `tolerance`.
pub fn numeric_roots(coeffs: &[f64], tolerance: f64) -> Result<NumericRootSet, OracleError> {
    let end = coeffs.iter().rposition(|&c| c != 0.0).ok_or(OracleError::ZeroPolynomial)?;
    let monic: Vec<f64> = coeffs[..=end].iter().map(|c| c / coeffs[end]).collect();
    let d = end;
    if d == 0 {
        return Ok(NumericRootSet { roots: vec![], residuals: vec![] });
    }
    let radius = 1.0 + monic[..d].iter().map(|c| c.abs()).fold(0.0, f64::max);
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..d).map(|k| seed.powu(k as u32) * radius.min(2.0)).collect();
    for _ in 0..20_000 {
        let mut delta = 0.0f64;
        for i in 0..d {
            let denom = (0..d)
                .filter(|&j| j != i)
                .fold(Complex64::one(), |acc, j| acc * (z[i] - z[j]));
            if denom.norm() == 0.0 {
                z[i] += Complex64::new(1e-8, 1e-8);
                continue;
            }
            let step = horner(&monic, z[i]) / denom;
            z[i] -= step;
            delta = delta.max(step.norm() / z[i].norm().max(1.0));
        }
        if delta < 1e-15 {
            break;
        }
    }
    let residuals: Vec<f64> = z.iter().map(|&r| relative_residual(&monic, r)).collect();
    if residuals.iter().any(|&r| r.is_nan() || r >= tolerance) {
        return Err(OracleError::PrecisionExhausted);
    }
    Ok(NumericRootSet { roots: z, residuals })
}

/// Low-degree-first integer polynomial helpers.
fn degree(p: &[i128]) -> usize {
    p.iter().rposition(|&c| c != 0).unwrap_or(0)
}

fn trim(mut p: Vec<i128>) -> Vec<i128> {
    while p.len() > 1 && *p.last().unwrap() == 0 {
        p.pop();
    }
    p
}

/// Exact quotient `p / g` if `g` divides `p` over the integers.
fn divide(p: &[i128], g: &[i128]) -> Option<Vec<i128>> {
    let dg = degree(g);
    let dp = degree(p);
    if dg > dp {
        return None;
    }
    let lead = g[dg];
    let mut r: Vec<i128> = p[..=dp].to_vec();
    let mut q = vec![0i128; dp - dg + 1];
    for i in (0..=dp - dg).rev() {
        let c = r[i + dg];
        if c % lead != 0 {
            return None;
        }
        let t = c / lead;
        q[i] = t;
        for j in 0..=dg {
            r[i + j] -= t * g[j];
        }
    }
    r.iter().all(|&c| c == 0).then_some(q)
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 { a.abs() } else { gcd(b, a % b) }
}

fn primitive(p: Vec<i128>) -> (i128, Vec<i128>) {
    let c = p.iter().fold(0, |g, &x| gcd(g, x));
    let c = if p[degree(&p)] < 0 { -c } else { c };
    (c, p.into_iter().map(|x| x / c).collect())
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn divisors(x: i128) -> Vec<i128> {
    let x = x.abs();
    (1..=x).filter(|d| x % d == 0).collect()
}

/// A nontrivial factor of primitive `p` of degree `k`, by exhaustive search.
fn find_factor(p: &[i128], k: usize, bound: i128) -> Option<Vec<i128>> {
    let d = degree(p);
    let leads = divisors(p[d]);
    let consts: Vec<i128> = divisors(p[0]).into_iter().flat_map(|c| [c, -c]).collect();
    let mut g = vec![0i128; k + 1];
    for &lead in &leads {
        for &c0 in &consts {
            g[k] = lead;
            g[0] = c0;
            if let Some(found) = search_middle(p, &mut g, 1, k, bound) {
                return Some(found);
            }
        }
    }
    None
}

fn search_middle(p: &[i128], g: &mut Vec<i128>, i: usize, k: usize, bound: i128) -> Option<Vec<i128>> {
    if i >= k {
        return divide(p, g).map(|_| g.clone());
    }
    for c in -bound..=bound {
        g[i] = c;
        if let Some(f) = search_middle(p, g, i + 1, k, bound) {
            return Some(f);
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BruteFactorization {
    pub content: i64,
    /// Irreducible primitive factors with positive leading coefficient,
    /// repeated by multiplicity, low-degree-first, sorted.
    pub factors: Vec<Vec<i64>>,
}

const SEARCH_LIMIT: u128 = 50_000_000;

/// Complete factorization of a degree-at-most-4 integer polynomial by
/// exhaustive search for factors whose middle coefficients lie within
/// `min(max_coeff, Mignotte bound)`. Returns `None` when `p` is irreducible.
pub fn brute_force_factors(coeffs: &[i64], max_coeff: i64) -> Result<Option<BruteFactorization>, OracleError> {
    let p = trim(coeffs.iter().map(|&c| i128::from(c)).collect());
    if p.iter().all(|&c| c == 0) {
        return Err(OracleError::ZeroPolynomial);
    }
    let d = degree(&p);
    if d > 4 {
        return Err(OracleError::UnsupportedDegree(d));
    }
    let (content, prim) = primitive(p);
    let norm = (prim.iter().map(|&c| (c * c) as f64).sum::<f64>()).sqrt().ceil() as i128;
    let mut pending = vec![prim];
    let mut done: Vec<Vec<i128>> = Vec::new();
    while let Some(f) = pending.pop() {
        let df = degree(&f);
        if df == 0 {
            continue;
        }
        if f[0] == 0 {
            done.push(vec![0, 1]);
            pending.push(divide(&f, &[0, 1]).expect("x divides"));
            continue;
        }
        let mut split = None;
        for k in 1..=df / 2 {
            let mignotte = i128::from(binomial(k as u64, k as u64 / 2) as i64) * norm;
            let bound = mignotte.min(i128::from(max_coeff));
            let space = (divisors(f[df]).len() * divisors(f[0]).len() * 2) as u128
                * (2 * bound as u128 + 1).pow(k.saturating_sub(1) as u32);
            if space > SEARCH_LIMIT {
                return Err(OracleError::SearchSpaceTooLarge(space));
            }
            if let Some(g) = find_factor(&f, k, bound) {
                split = Some(g);
                break;
            }
        }
        match split {
            Some(g) => {
                let h = divide(&f, &g).expect("factor divides");
                pending.push(primitive(g).1);
                pending.push(primitive(h).1);
            }
            None => done.push(f),
        }
    }
    if done.len() == 1 && content.abs() == 1 {
        return Ok(None);
    }
    let mut factors: Vec<Vec<i64>> = done
        .into_iter()
        .map(|f| f.into_iter().map(|c| c as i64).collect())
        .collect();
    factors.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.iter().rev().cmp(b.iter().rev())));
    Ok(Some(BruteFactorization { content: content as i64, factors }))
}

/// Applies a twist word to a concrete weight vector, one elementary twist
/// at a time. `word[t]` lists `(puncture, power)` pairs of the `t`-th
/// multi-twist; the first multi-twist is applied first.
pub fn replay_word(n: usize, word: &[Vec<(usize, u32)>], v: &[BigInt]) -> Result<Vec<BigInt>, OracleError> {
    if v.len() != n {
        return Err(OracleError::LengthMismatch { expected: n, found: v.len() });
    }
    let mut w = v.to_vec();
    let Some(first) = word.first() else {
        return Ok(w);
    };
    let start: BTreeSet<usize> = first.iter().map(|&(p, _)| (p + n - 1) % n).collect();
    let mut spine = start.clone();
    for set in word {
        for &(j, l) in set {
            let b = (j + n - 1) % n;
            if !spine.remove(&b) {
                return Err(OracleError::NotCarried { puncture: j, branch: b });
            }
            spine.insert(j);
            let l = BigInt::from(l);
            let (wb, wj) = (w[b].clone(), w[j].clone());
            w[b] = &l * &wj + (&l - 1) * &wb;
            w[j] = (&l + 1) * &wj + &l * &wb;
        }
    }
    if spine != start {
        return Err(OracleError::SpineMismatch);
    }
    Ok(w)
}
