//! Trace-field data for the dilatation: the minimal polynomial of λ, its
//! reduction in the variable `y = x + 1/x`, and the number of conjugates on
//! the unit circle.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::factor::factor_over_integers;
use super::sturm::{largest_real_root, sturm_count, SturmSequence};
use super::{sign_of, IntPolynomial, PolyError};

/// Isolation width used when locating λ among the factors.
const LAMBDA_EPS_DIGITS: u32 = 12;

/// Chebyshev-like basis `z_k(y)` for `x^k + x^-k`, with `z_0 = 2`.
fn z_basis(m: usize) -> Vec<IntPolynomial> {
    let y = IntPolynomial::x();
    let mut out = vec![IntPolynomial::from_i64(&[2])];
    if m >= 1 {
        out.push(y.clone());
    }
    for k in 2..=m {
        let next = &(&y * &out[k - 1]) - &out[k - 2];
        out.push(next);
    }
    out
}

/// The unique `q` of degree `m` with `p(x) / x^m = q(x + 1/x)`.
pub fn chebyshev_reduce(p: &IntPolynomial) -> Result<IntPolynomial, PolyError> {
    if p.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    if !p.is_self_reciprocal() {
        return Err(PolyError::NotReciprocal);
    }
    let d = p.degree();
    if d % 2 == 1 {
        return Err(PolyError::OddDegree(d));
    }
    let m = d / 2;
    let z = z_basis(m);
    let mut q = IntPolynomial::constant(p.coeff(m));
    for (k, zk) in z.iter().enumerate().skip(1) {
        q = &q + &zk.scale(&p.coeff(m + k));
    }
    Ok(q)
}

/// Inverse of [`chebyshev_reduce`]: the self-reciprocal `p` of degree `2 deg q`.
pub fn chebyshev_expand(q: &IntPolynomial) -> IntPolynomial {
    if q.is_zero() {
        return IntPolynomial::zero();
    }
    let m = q.degree();
    let z = z_basis(m);
    let mut rest = q.clone();
    let mut coeffs = vec![BigInt::zero(); 2 * m + 1];
    for k in (1..=m).rev() {
        let c = rest.coeff(k);
        coeffs[m + k] = c.clone();
        coeffs[m - k] = c.clone();
        rest = &rest - &z[k].scale(&c);
    }
    coeffs[m] = rest.coeff(0);
    IntPolynomial::new(coeffs)
}

/// True iff the squarefree part of `q` has only real roots.
pub fn is_totally_real(q: &IntPolynomial) -> bool {
    if q.is_constant() {
        return false;
    }
    let sf = q.squarefree_part();
    sturm_count(&sf, None, None) == sf.degree()
}

fn contains_root(f: &IntPolynomial, lo: &BigRational, hi: &BigRational) -> bool {
    if lo == hi {
        return f.sign_at(lo) == 0;
    }
    f.sign_at(lo) == 0 || f.sign_at(hi) == 0 || sturm_count(f, Some(lo), Some(hi)) > 0
}

/// The irreducible factor of `charpoly` that vanishes at its largest real root.
pub fn minimal_poly_of_lambda(charpoly: &IntPolynomial) -> Result<IntPolynomial, PolyError> {
    if charpoly.is_constant() {
        return Err(PolyError::Constant);
    }
    let eps = super::sturm::pow10_inv(LAMBDA_EPS_DIGITS);
    let root = largest_real_root(charpoly, &eps).ok_or(PolyError::NoRealRoot)?;
    let factors = factor_over_integers(charpoly)?;
    factors
        .factors
        .into_iter()
        .map(|(f, _)| f)
        .find(|f| contains_root(f, &root.lo, &root.hi))
        .ok_or(PolyError::NoRealRoot)
}

/// `x^d f(1/x)` scaled by the sign of `f(0)` so the leading coefficient is positive.
fn normalized_reciprocal(f: &IntPolynomial) -> IntPolynomial {
    let r = f.reciprocal();
    if sign_of(&f.constant_term()) < 0 {
        -r
    } else {
        r
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceFieldReport {
    pub lambda_min_poly: IntPolynomial,
    /// The self-reciprocal polynomial that was reduced: `f` or `f * f*`.
    pub reciprocal_source: IntPolynomial,
    pub q: IntPolynomial,
    pub totally_real: bool,
    pub unit_circle_pairs: usize,
}

/// Trace-field report for the dilatation λ of a Perron-Frobenius `charpoly`.
pub fn trace_field_poly(charpoly: &IntPolynomial) -> Result<TraceFieldReport, PolyError> {
    let f = minimal_poly_of_lambda(charpoly)?;
    if f.constant_term().is_zero() {
        return Err(PolyError::ZeroConstantTerm);
    }
    let source = if f.is_self_reciprocal() && f.degree() % 2 == 0 {
        f.clone()
    } else {
        &f * &normalized_reciprocal(&f)
    };
    let q = chebyshev_reduce(&source)?;
    let totally_real = q.squarefree_part().degree() == q.degree() && is_totally_real(&q);
    let unit_circle_pairs = unit_circle_conjugates(&f)?;
    Ok(TraceFieldReport {
        lambda_min_poly: f,
        reciprocal_source: source,
        q,
        totally_real,
        unit_circle_pairs,
    })
}

/// Number of complex-conjugate root pairs of an irreducible polynomial lying
/// on the unit circle.
pub fn unit_circle_conjugates(f: &IntPolynomial) -> Result<usize, PolyError> {
    if f.is_constant() {
        return Err(PolyError::Constant);
    }
    let fact = factor_over_integers(f)?;
    if !fact.is_irreducible() {
        return Err(PolyError::Reducible);
    }
    if f.degree() % 2 == 1 || !(f.is_self_reciprocal() || (-f.clone()).is_self_reciprocal()) {
        return Ok(0);
    }
    let f = if f.leading().is_negative() { -f.clone() } else { f.clone() };
    let q = chebyshev_reduce(&f)?;
    let two = BigRational::from_integer(BigInt::from(2));
    let seq = SturmSequence::new(&q.squarefree_part());
    Ok(seq.count_open(Some(&-two.clone()), Some(&two)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_high_first(c)
    }

    const P_PSI_PRIME: [i64; 9] = [1, -24, 156, -424, -186, -424, 156, -24, 1];

    #[test]
    fn reduce_known_palindromes() {
        assert_eq!(chebyshev_reduce(&p(&[1, -18, 1])).unwrap(), p(&[1, -18]));
        assert_eq!(
            chebyshev_reduce(&p(&[1, -28, 6, -28, 1])).unwrap(),
            p(&[1, -28, 4])
        );
        assert_eq!(
            chebyshev_reduce(&p(&P_PSI_PRIME)).unwrap(),
            p(&[1, -24, 152, -352, -496])
        );
        assert_eq!(chebyshev_reduce(&p(&[1, 0, 1])).unwrap(), p(&[1, 0]));
    }

    #[test]
    fn reduce_rejects_bad_input() {
        assert_eq!(
            chebyshev_reduce(&p(&[1, -15, 7, -1])),
            Err(PolyError::NotReciprocal)
        );
        assert_eq!(chebyshev_reduce(&p(&[1, 1])), Err(PolyError::OddDegree(1)));
    }

    #[test]
    fn expand_inverts_reduce() {
        let f = p(&P_PSI_PRIME);
        assert_eq!(chebyshev_expand(&chebyshev_reduce(&f).unwrap()), f);
    }

    #[test]
    fn totally_real_examples() {
        assert!(is_totally_real(&p(&[1, -18])));
        assert!(is_totally_real(&p(&[1, -28, 4])));
        assert!(!is_totally_real(&p(&[1, -24, 152, -352, -496])));
    }

    #[test]
    fn trace_field_of_d() {
        let f = &(&p(&[1, 1]) * &p(&[1, -15, 7, -1])) * &p(&[1, -7, 15, -1]);
        let r = trace_field_poly(&f).unwrap();
        assert_eq!(r.lambda_min_poly, p(&[1, -15, 7, -1]));
        assert_eq!(r.q, p(&[1, -22, 124, -232]));
        assert!(!r.totally_real);
        assert_eq!(r.unit_circle_pairs, 0);
    }

    #[test]
    fn unit_circle_examples() {
        assert_eq!(unit_circle_conjugates(&p(&[1, -18, 1])).unwrap(), 0);
        assert_eq!(unit_circle_conjugates(&p(&[1, -28, 6, -28, 1])).unwrap(), 1);
        assert_eq!(unit_circle_conjugates(&p(&[1, -15, 7, -1])).unwrap(), 0);
        assert!(unit_circle_conjugates(&p(&P_PSI_PRIME)).unwrap() >= 1);
        assert_eq!(
            unit_circle_conjugates(&p(&[1, 0, -1])),
            Err(PolyError::Reducible)
        );
    }
}
