//! Symbolic half-twist updates on a rotating-spine train track.
//!
//! Each branch weight is stored as an integer linear form in the initial
//! weights, so running a word once yields the whole transition matrix.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::construction::{ConstructionSpec, MultiTwistSet, Puncture};
use crate::spectral::IntMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NotCarried {
    #[error("step {step}: twist at {puncture} needs spine branch {branch}, spine is {spine:?}")]
    MissingBranch { step: usize, puncture: usize, branch: usize, spine: Vec<usize> },
    #[error("step {step}: puncture {puncture} is already on the spine {spine:?}")]
    AlreadyOnSpine { step: usize, puncture: usize, spine: Vec<usize> },
    #[error("final spine {found:?} differs from initial spine {expected:?}")]
    SpineMismatch { expected: Vec<usize>, found: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("word is not carried by the track: {0}")]
    NotCarried(#[from] NotCarried),
    #[error("twists at {0} and {1} engage a common branch")]
    OverlappingPairs(usize, usize),
    #[error("expected {expected} weights, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
}

/// Spine membership plus each puncture-loop branch weight as a linear form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TrackState {
    n: usize,
    spine: BTreeSet<usize>,
    #[serde(skip)]
    forms: Vec<Vec<BigInt>>,
    step: usize,
}

impl TrackState {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn spine(&self) -> &BTreeSet<usize> {
        &self.spine
    }

    pub fn form(&self, i: usize) -> &[BigInt] {
        &self.forms[i]
    }

    fn spine_vec(&self) -> Vec<usize> {
        self.spine.iter().copied().collect()
    }
}

/// Identity forms with the spine just counter-clockwise of the first set.
pub fn initial_state(spec: &ConstructionSpec) -> TrackState {
    let n = spec.n();
    let forms = (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    let spine = spec.word()[0]
        .punctures()
        .map(|p| p.predecessor(n).index())
        .collect();
    TrackState { n, spine, forms, step: 0 }
}

fn check_twist(state: &TrackState, j: Puncture) -> Result<usize, NotCarried> {
    let b = j.predecessor(state.n).index();
    if !state.spine.contains(&b) {
        return Err(NotCarried::MissingBranch {
            step: state.step,
            puncture: j.index(),
            branch: b,
            spine: state.spine_vec(),
        });
    }
    if state.spine.contains(&j.index()) {
        return Err(NotCarried::AlreadyOnSpine {
            step: state.step,
            puncture: j.index(),
            spine: state.spine_vec(),
        });
    }
    Ok(b)
}

/// `(w_b, w_j) -> (l w_j + (l-1) w_b, (l+1) w_j + l w_b)`.
fn local_update(fj: &[BigInt], fb: &[BigInt], l: u32) -> (Vec<BigInt>, Vec<BigInt>) {
    let l = BigInt::from(l);
    let lm = &l - 1;
    let lp = &l + 1;
    let new_b = fj.iter().zip(fb).map(|(x, y)| &l * x + &lm * y).collect();
    let new_j = fj.iter().zip(fb).map(|(x, y)| &lp * x + &l * y).collect();
    (new_b, new_j)
}

/// A single half-twist `D_j^l`; the spine branch at `j - 1` moves to `j`.
pub fn apply_half_twists(state: &TrackState, j: Puncture, l: u32) -> Result<TrackState, EngineError> {
    let b = check_twist(state, j)?;
    let mut next = state.clone();
    let (nb, nj) = local_update(&state.forms[j.index()], &state.forms[b], l);
    next.forms[b] = nb;
    next.forms[j.index()] = nj;
    next.spine.remove(&b);
    next.spine.insert(j.index());
    next.step += 1;
    Ok(next)
}

/// All elementary twists of `set`, each read from the same pre-state.
pub fn apply_multi_twist(state: &TrackState, set: &MultiTwistSet) -> Result<TrackState, EngineError> {
    let n = state.n;
    let twists: Vec<(Puncture, u32)> = set.twists().collect();
    for (a, &(p, _)) in twists.iter().enumerate() {
        for &(q, _) in &twists[a + 1..] {
            let bp = p.predecessor(n).index();
            let bq = q.predecessor(n).index();
            if p.index() == bq || q.index() == bp || p == q {
                return Err(EngineError::OverlappingPairs(p.index(), q.index()));
            }
        }
    }
    let mut next = state.clone();
    for &(j, l) in &twists {
        let b = check_twist(state, j)?;
        let (nb, nj) = local_update(&state.forms[j.index()], &state.forms[b], l);
        next.forms[b] = nb;
        next.forms[j.index()] = nj;
        next.spine.remove(&b);
    }
    for &(j, _) in &twists {
        next.spine.insert(j.index());
    }
    next.step += 1;
    Ok(next)
}

/// Runs the word and returns the spine after each multi-twist, starting with
/// the initial spine.
pub fn spine_trace(spec: &ConstructionSpec) -> Result<Vec<Vec<usize>>, EngineError> {
    let mut state = initial_state(spec);
    let mut trace = vec![state.spine_vec()];
    for set in spec.word() {
        state = apply_multi_twist(&state, set)?;
        trace.push(state.spine_vec());
    }
    Ok(trace)
}

fn run(spec: &ConstructionSpec) -> Result<TrackState, EngineError> {
    let start = initial_state(spec);
    let end = spec
        .word()
        .iter()
        .try_fold(start.clone(), |s, set| apply_multi_twist(&s, set))?;
    if end.spine != start.spine {
        return Err(NotCarried::SpineMismatch {
            expected: start.spine_vec(),
            found: end.spine_vec(),
        }
        .into());
    }
    Ok(end)
}

/// Nonnegative integer matrix of the induced action on branch weights:
/// `(M v)[i]` is the new weight of branch `i`.
#[derive(Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct TransitionMatrix(IntMatrix);

impl TransitionMatrix {
    pub fn matrix(&self) -> &IntMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> IntMatrix {
        self.0
    }

    pub fn n(&self) -> usize {
        self.0.dim()
    }

    pub fn to_csv(&self) -> String {
        self.0.to_csv()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.0).expect("matrix serializes")
    }
}

impl fmt::Debug for TransitionMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(&self.0, f)
    }
}

impl fmt::Display for TransitionMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

pub fn transition_matrix(spec: &ConstructionSpec) -> Result<TransitionMatrix, EngineError> {
    let end = run(spec)?;
    let m = IntMatrix::from_rows(end.forms).expect("forms are n x n");
    Ok(TransitionMatrix(m))
}

/// The four tracks whose weight cones are written out by hand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum TrackFamily {
    /// `tau`, for `{{0,3},{1,4},{2,5}}` on six punctures.
    A,
    /// `tau-bar`, for `{{0,2,4},{1,3,5}}`.
    B,
    /// `tau'`, for `{{0,4},{1,5},{2,6},{3}}` on seven punctures.
    C,
    /// `tau-bar'`, for `{{0,3,5},{1,4,6},{2}}`.
    D,
}

impl TrackFamily {
    pub const ALL: [TrackFamily; 4] = [TrackFamily::A, TrackFamily::B, TrackFamily::C, TrackFamily::D];

    pub fn dimension(self) -> usize {
        match self {
            TrackFamily::A | TrackFamily::B => 6,
            TrackFamily::C | TrackFamily::D => 7,
        }
    }
}

/// Integer linear form `sum c_i w_i` over the weight symbols `a, b, c, ...`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinearForm(pub Vec<(usize, i64)>);

impl LinearForm {
    fn eval(&self, w: &[BigRational]) -> BigRational {
        self.0
            .iter()
            .fold(BigRational::zero(), |acc, &(i, c)| acc + &w[i] * BigInt::from(c))
    }

    fn sum_minus(plus: &[usize], minus: &[usize]) -> Self {
        LinearForm(
            plus.iter()
                .map(|&i| (i, 1))
                .chain(minus.iter().map(|&i| (i, -1)))
                .collect(),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Constraint {
    /// Every weight strictly positive.
    AllPositive,
    /// The form vanishes (a switch condition).
    Equation(LinearForm),
    /// Each form strictly positive and the three values satisfy the triangle
    /// inequalities.
    Triangle([LinearForm; 3]),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AdmissibleCone {
    pub family: TrackFamily,
    pub constraints: Vec<Constraint>,
}

impl AdmissibleCone {
    /// The cone preserved by the track's transition matrix.
    ///
    /// For `C` the switch condition is `a + b + c + g = d + e + f`; the
    /// hand-written `a + b + d + f = c + e + g` is kept in [`Self::as_printed`].
    pub fn for_track(family: TrackFamily) -> Self {
        let constraints = match family {
            TrackFamily::C => vec![
                Constraint::AllPositive,
                Constraint::Equation(LinearForm::sum_minus(&[0, 1, 2, 6], &[3, 4, 5])),
            ],
            _ => return Self::as_printed(family),
        };
        AdmissibleCone { family, constraints }
    }

    /// Constraints transcribed verbatim.
    pub fn as_printed(family: TrackFamily) -> Self {
        let diff = |p: &[usize], m: &[usize]| LinearForm::sum_minus(p, m);
        let specific = match family {
            TrackFamily::A => Constraint::Equation(diff(&[0, 1, 5], &[2, 3, 4])),
            TrackFamily::B => {
                Constraint::Triangle([diff(&[1], &[0]), diff(&[3], &[2]), diff(&[5], &[4])])
            }
            TrackFamily::C => Constraint::Equation(diff(&[0, 1, 3, 5], &[2, 4, 6])),
            TrackFamily::D => {
                Constraint::Triangle([diff(&[2], &[0, 1]), diff(&[4], &[3]), diff(&[6], &[5])])
            }
        };
        AdmissibleCone {
            family,
            constraints: vec![Constraint::AllPositive, specific],
        }
    }
}

/// True iff `weights` satisfies every constraint of `cone`.
pub fn admissibility_check(cone: &AdmissibleCone, weights: &[BigRational]) -> Result<bool, EngineError> {
    let dim = cone.family.dimension();
    if weights.len() != dim {
        return Err(EngineError::DimensionMismatch { expected: dim, found: weights.len() });
    }
    Ok(cone.constraints.iter().all(|c| match c {
        Constraint::AllPositive => weights.iter().all(Signed::is_positive),
        Constraint::Equation(f) => f.eval(weights).is_zero(),
        Constraint::Triangle(forms) => {
            let [x, y, z] = forms.clone().map(|f| f.eval(weights));
            x.is_positive()
                && y.is_positive()
                && z.is_positive()
                && x <= &y + &z
                && y <= &x + &z
                && z <= &x + &y
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::{word_from_partition, Powers};

    fn phi() -> ConstructionSpec {
        word_from_partition(&[vec![0, 3], vec![1, 4], vec![2, 5]], &Powers::Uniform(2)).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn rats(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| BigRational::from_integer(x.into())).collect()
    }

    #[test]
    fn initial_spines() {
        assert_eq!(initial_state(&phi()).spine(), &BTreeSet::from([2, 5]));
        let bar = word_from_partition(&[vec![0, 2, 4], vec![1, 3, 5]], &Powers::Uniform(2)).unwrap();
        assert_eq!(initial_state(&bar).spine(), &BTreeSet::from([1, 3, 5]));
    }

    #[test]
    fn single_twist_update() {
        let s = apply_half_twists(&initial_state(&phi()), Puncture(0), 2).unwrap();
        assert_eq!(s.form(5), ints(&[2, 0, 0, 0, 0, 1]).as_slice());
        assert_eq!(s.form(0), ints(&[3, 0, 0, 0, 0, 2]).as_slice());
        assert_eq!(s.spine(), &BTreeSet::from([0, 2]));
    }

    #[test]
    fn twist_off_the_spine_is_not_carried() {
        let err = apply_half_twists(&initial_state(&phi()), Puncture(1), 2).unwrap_err();
        assert!(matches!(err, EngineError::NotCarried(NotCarried::MissingBranch { branch: 0, .. })));
    }

    #[test]
    fn spine_rotates_and_returns() {
        let trace = spine_trace(&phi()).unwrap();
        assert_eq!(trace, vec![vec![2, 5], vec![0, 3], vec![1, 4], vec![2, 5]]);
    }

    #[test]
    fn matrix_a() {
        let m = transition_matrix(&phi()).unwrap();
        assert_eq!(m.matrix().row(0), ints(&[3, 2, 0, 0, 0, 2]).as_slice());
        assert_eq!(m.matrix().row(5), ints(&[6, 0, 8, 12, 6, 3]).as_slice());
        assert_eq!(m.to_csv().lines().next(), Some("3,2,0,0,0,2"));
        assert!(m.to_json().starts_with(r#"[["3","2","0","0","0","2"]"#));
    }

    #[test]
    fn unreturned_spine_is_reported() {
        let spec = ConstructionSpec::custom(6, vec![MultiTwistSet::uniform(&[0, 3], 2)]).unwrap();
        assert!(matches!(
            transition_matrix(&spec),
            Err(EngineError::NotCarried(NotCarried::SpineMismatch { .. }))
        ));
    }

    #[test]
    fn overlapping_pairs() {
        let mut s = initial_state(&phi());
        s.spine = BTreeSet::from([0, 2]);
        let set = MultiTwistSet::new([(1, 2), (3, 2)]);
        assert_eq!(apply_multi_twist(&s, &set).unwrap().spine(), &BTreeSet::from([1, 3]));
        let touching = MultiTwistSet::new([(1, 2), (2, 2)]);
        assert_eq!(
            apply_multi_twist(&s, &touching),
            Err(EngineError::OverlappingPairs(1, 2))
        );
    }

    #[test]
    fn cone_examples() {
        let a = AdmissibleCone::for_track(TrackFamily::A);
        let b = AdmissibleCone::for_track(TrackFamily::B);
        assert!(admissibility_check(&a, &rats(&[1, 1, 1, 1, 1, 1])).unwrap());
        assert!(admissibility_check(&b, &rats(&[1, 2, 1, 2, 1, 2])).unwrap());
        assert!(!admissibility_check(&a, &rats(&[2, 1, 1, 1, 1, 1])).unwrap());
        assert_eq!(
            admissibility_check(&a, &rats(&[1, 1])),
            Err(EngineError::DimensionMismatch { expected: 6, found: 2 })
        );
    }
}
