//! Punctures, multi-twist sets and twist words on the `n`-punctured sphere.
//!
//! Labels are 0-based and increase clockwise. Words are applied left to
//! right, so `word[0]` is the first multi-twist performed.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

pub type Partition = Vec<Vec<usize>>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("need at least 4 punctures, got {0}")]
    TooFewPunctures(usize),
    #[error("puncture {puncture} out of range for n = {n}")]
    OutOfRange { puncture: usize, n: usize },
    #[error("one-based label 0 is not allowed")]
    ZeroLabel,
    #[error("word is empty")]
    EmptyWord,
    #[error("multi-twist set {0:?} contains punctures at cyclic distance < 2")]
    NotDisjoint(Vec<usize>),
    #[error("sets do not partition {{0, ..., {0}}}")]
    NotAPartition(usize),
    #[error("partition is not evenly spaced")]
    NotEvenlySpaced,
    #[error("power {power} on puncture {puncture} is below 2")]
    PowerTooSmall { puncture: usize, power: u32 },
    #[error("power on puncture {0} must be at least 1")]
    ZeroPower(usize),
    #[error("no power given for puncture {0}")]
    MissingPower(usize),
    #[error("power given for puncture {0}, which is not in any set")]
    UnusedPower(usize),
    #[error("construction requires an evenly spaced or modified base, got {0}")]
    InvalidBase(Provenance),
    #[error("staggered set {0:?} is not a valid multi-twist")]
    StaggeredOverlap(Vec<usize>),
    #[error("parse error: {0}")]
    Parse(String),
}

/// A puncture label, a residue mod `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Puncture(pub usize);

impl Puncture {
    pub fn new(index: usize, n: usize) -> Result<Self, ConstructionError> {
        if index < n {
            Ok(Puncture(index))
        } else {
            Err(ConstructionError::OutOfRange { puncture: index, n })
        }
    }

    pub fn index(self) -> usize {
        self.0
    }

    /// The cyclic shift `j -> j + 1 mod n`.
    pub fn rotate(self, n: usize) -> Puncture {
        Puncture((self.0 + 1) % n)
    }

    /// The puncture immediately counter-clockwise, `j - 1 mod n`.
    pub fn predecessor(self, n: usize) -> Puncture {
        Puncture((self.0 + n - 1) % n)
    }
}

impl fmt::Display for Puncture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub fn cyclic_distance(p: usize, q: usize, n: usize) -> usize {
    let d = (p + n - q) % n;
    d.min(n - d)
}

/// Simultaneous half-twists: each puncture carries its own power.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiTwistSet {
    powers: BTreeMap<Puncture, u32>,
}

impl MultiTwistSet {
    pub fn new(powers: impl IntoIterator<Item = (usize, u32)>) -> Self {
        MultiTwistSet {
            powers: powers.into_iter().map(|(p, l)| (Puncture(p), l)).collect(),
        }
    }

    pub fn uniform(punctures: &[usize], power: u32) -> Self {
        Self::new(punctures.iter().map(|&p| (p, power)))
    }

    pub fn punctures(&self) -> impl Iterator<Item = Puncture> + '_ {
        self.powers.keys().copied()
    }

    pub fn indices(&self) -> Vec<usize> {
        self.powers.keys().map(|p| p.0).collect()
    }

    pub fn twists(&self) -> impl Iterator<Item = (Puncture, u32)> + '_ {
        self.powers.iter().map(|(&p, &l)| (p, l))
    }

    pub fn power(&self, p: Puncture) -> Option<u32> {
        self.powers.get(&p).copied()
    }

    pub fn len(&self) -> usize {
        self.powers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.powers.is_empty()
    }

    pub fn min_power(&self) -> Option<u32> {
        self.powers.values().copied().min()
    }

    fn relabel(&self, f: impl Fn(usize) -> usize) -> Self {
        Self::new(self.twists().map(|(p, l)| (f(p.0), l)))
    }
}

impl Serialize for MultiTwistSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("MultiTwistSet", 2)?;
        st.serialize_field("punctures", &self.indices())?;
        st.serialize_field("powers", &self.powers.values().collect::<Vec<_>>())?;
        st.end()
    }
}

/// True iff every two members have cyclic distance at least 2.
pub fn validate_disjoint(set: &MultiTwistSet, n: usize) -> bool {
    let idx = set.indices();
    idx.iter().all(|&p| p < n)
        && idx
            .iter()
            .enumerate()
            .all(|(i, &p)| idx[i + 1..].iter().all(|&q| cyclic_distance(p, q, n) >= 2))
}

fn is_disjoint_set(set: &[usize], n: usize) -> bool {
    let s: BTreeSet<usize> = set.iter().copied().collect();
    s.len() == set.len() && validate_disjoint(&MultiTwistSet::uniform(set, 1), n)
}

/// True iff `sets` partition `{0, ..., n-1}` and the shift maps each set to the next.
pub fn validate_evenly_spaced(sets: &[Vec<usize>], n: usize) -> Result<bool, ConstructionError> {
    let mut seen = vec![false; n];
    for &p in sets.iter().flatten() {
        if p >= n || seen[p] {
            return Err(ConstructionError::NotAPartition(n));
        }
        seen[p] = true;
    }
    if !seen.iter().all(|&b| b) {
        return Err(ConstructionError::NotAPartition(n));
    }
    let as_set = |v: &Vec<usize>| v.iter().copied().collect::<BTreeSet<_>>();
    let k = sets.len();
    Ok((0..k).all(|i| {
        let shifted: BTreeSet<usize> = sets[i].iter().map(|&p| (p + 1) % n).collect();
        shifted == as_set(&sets[(i + 1) % k])
    }))
}

/// Evenly spaced partitions up to rotation, one per divisor `k` of `n`
/// with `1 < k < n`, largest `k` first.
pub fn enumerate_even_partitions(n: usize) -> Vec<Partition> {
    (2..n)
        .rev()
        .filter(|&k| n.is_multiple_of(k))
        .map(|k| (0..k).map(|i| (i..n).step_by(k).collect()).collect())
        .collect()
}

/// Exponents for the elementary twists: a scalar, or one per puncture.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Powers {
    Uniform(u32),
    PerPuncture(BTreeMap<usize, u32>),
}

impl Powers {
    fn assign(&self, sets: &[Vec<usize>]) -> Result<Vec<MultiTwistSet>, ConstructionError> {
        if let Powers::PerPuncture(map) = self {
            let used: BTreeSet<usize> = sets.iter().flatten().copied().collect();
            if let Some(&p) = map.keys().find(|p| !used.contains(p)) {
                return Err(ConstructionError::UnusedPower(p));
            }
        }
        sets.iter()
            .map(|s| {
                s.iter()
                    .map(|&p| {
                        let l = match self {
                            Powers::Uniform(l) => *l,
                            Powers::PerPuncture(m) => {
                                *m.get(&p).ok_or(ConstructionError::MissingPower(p))?
                            }
                        };
                        if l == 0 {
                            return Err(ConstructionError::ZeroPower(p));
                        }
                        Ok((p, l))
                    })
                    .collect::<Result<Vec<_>, _>>()
                    .map(MultiTwistSet::new)
            })
            .collect()
    }

    /// Accepts a scalar (`2`) or an object keyed by puncture (`{"0": 3, "3": 2}`).
    pub fn parse_json(s: &str) -> Result<Self, ConstructionError> {
        let parse_err = |m: String| ConstructionError::Parse(m);
        let power = |v: &serde_json::Value| {
            v.as_u64()
                .and_then(|x| u32::try_from(x).ok())
                .ok_or_else(|| parse_err(format!("invalid power {v}")))
        };
        match serde_json::from_str::<serde_json::Value>(s).map_err(|e| parse_err(e.to_string()))? {
            serde_json::Value::Object(map) => map
                .iter()
                .map(|(k, v)| {
                    let p = k
                        .trim()
                        .parse::<usize>()
                        .map_err(|_| parse_err(format!("invalid puncture {k:?}")))?;
                    Ok((p, power(v)?))
                })
                .collect::<Result<BTreeMap<_, _>, _>>()
                .map(Powers::PerPuncture),
            v => power(&v).map(Powers::Uniform),
        }
    }
}

/// How a word was produced; decides which hypotheses certification checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Provenance {
    Theorem1,
    Theorem2Modified { insertions: usize },
    Staggered,
    Custom,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Theorem1 => write!(f, "theorem1"),
            Provenance::Theorem2Modified { insertions } => {
                write!(f, "theorem2-modified ({insertions} insertion(s))")
            }
            Provenance::Staggered => write!(f, "staggered"),
            Provenance::Custom => write!(f, "custom"),
        }
    }
}

/// How the user wrote the labels; reports echo both forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LabelBase {
    #[default]
    Zero,
    One,
}

impl LabelBase {
    pub fn offset(self) -> usize {
        match self {
            LabelBase::Zero => 0,
            LabelBase::One => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ConstructionSpec {
    n: usize,
    word: Vec<MultiTwistSet>,
    provenance: Provenance,
    /// Number of sets in the underlying evenly spaced partition.
    original_sets: usize,
    label_base: LabelBase,
}

impl ConstructionSpec {
    fn checked(
        n: usize,
        word: Vec<MultiTwistSet>,
        provenance: Provenance,
        original_sets: usize,
    ) -> Result<Self, ConstructionError> {
        if n < 4 {
            return Err(ConstructionError::TooFewPunctures(n));
        }
        if word.is_empty() || word.iter().any(MultiTwistSet::is_empty) {
            return Err(ConstructionError::EmptyWord);
        }
        for set in &word {
            if let Some(p) = set.punctures().find(|p| p.0 >= n) {
                return Err(ConstructionError::OutOfRange { puncture: p.0, n });
            }
            if !validate_disjoint(set, n) {
                return Err(ConstructionError::NotDisjoint(set.indices()));
            }
        }
        Ok(ConstructionSpec {
            n,
            word,
            provenance,
            original_sets,
            label_base: LabelBase::Zero,
        })
    }

    /// Arbitrary word of valid multi-twists; carried-ness is left to the engine.
    pub fn custom(n: usize, word: Vec<MultiTwistSet>) -> Result<Self, ConstructionError> {
        let k = word.len();
        Self::checked(n, word, Provenance::Custom, k)
    }

    /// Arbitrary word from sets in execution order, powers assigned as for
    /// a partition. The sets need not cover `0..n`.
    pub fn custom_from_sets(
        n: usize,
        sets: &[Vec<usize>],
        powers: &Powers,
    ) -> Result<Self, ConstructionError> {
        Self::custom(n, powers.assign(sets)?)
    }

    /// Evenly spaced word allowing powers of 1; certification later requires 2.
    pub fn from_partition(
        sets: &[Vec<usize>],
        powers: &Powers,
    ) -> Result<Self, ConstructionError> {
        let n = sets.iter().map(Vec::len).sum();
        if n < 4 {
            return Err(ConstructionError::TooFewPunctures(n));
        }
        if !validate_evenly_spaced(sets, n)? {
            return Err(ConstructionError::NotEvenlySpaced);
        }
        let word = powers.assign(sets)?;
        Self::checked(n, word, Provenance::Theorem1, sets.len())
    }

    pub fn with_label_base(mut self, base: LabelBase) -> Self {
        self.label_base = base;
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn word(&self) -> &[MultiTwistSet] {
        &self.word
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn original_sets(&self) -> usize {
        self.original_sets
    }

    pub fn label_base(&self) -> LabelBase {
        self.label_base
    }

    pub fn sets(&self) -> Partition {
        self.word.iter().map(MultiTwistSet::indices).collect()
    }

    /// Sets in the labels the user supplied.
    pub fn raw_sets(&self) -> Partition {
        let off = self.label_base.offset();
        self.word
            .iter()
            .map(|s| s.indices().into_iter().map(|p| p + off).collect())
            .collect()
    }

    pub fn all_powers_at_least(&self, min: u32) -> bool {
        self.word.iter().all(|s| s.min_power().is_some_and(|l| l >= min))
    }

    /// Composition order, rightmost applied first: `D_{mu_k} ... D_{mu_1}`.
    pub fn word_string(&self, base: LabelBase) -> String {
        let off = base.offset();
        self.word
            .iter()
            .rev()
            .flat_map(|s| s.twists().collect::<Vec<_>>().into_iter().rev())
            .map(|(p, l)| match l {
                1 => format!("D_{}", p.0 + off),
                _ => format!("D_{}^{}", p.0 + off, l),
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl Serialize for ConstructionSpec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("ConstructionSpec", 7)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("provenance", &self.provenance)?;
        st.serialize_field("original_sets", &self.original_sets)?;
        st.serialize_field("label_base", &self.label_base)?;
        st.serialize_field("word", &self.word)?;
        st.serialize_field("raw_sets", &self.raw_sets())?;
        st.serialize_field("word_string", &self.word_string(self.label_base))?;
        st.end()
    }
}

/// Word of an evenly spaced partition with every power at least 2.
pub fn word_from_partition(
    sets: &[Vec<usize>],
    powers: &Powers,
) -> Result<ConstructionSpec, ConstructionError> {
    let spec = ConstructionSpec::from_partition(sets, powers)?;
    for set in spec.word() {
        if let Some((p, l)) = set.twists().find(|&(_, l)| l < 2) {
            return Err(ConstructionError::PowerTooSmall { puncture: p.0, power: l });
        }
    }
    Ok(spec)
}

/// Inserts one new puncture and a singleton twist on it.
///
/// With `k` original sets, labels `j >= k` move to `j + 1` and the singleton
/// `{k}` is placed directly after the original sets, ahead of any earlier
/// insertions.
pub fn modify_insert_singleton(
    spec: &ConstructionSpec,
    power: u32,
) -> Result<ConstructionSpec, ConstructionError> {
    let insertions = match spec.provenance {
        Provenance::Theorem1 => 0,
        Provenance::Theorem2Modified { insertions } => insertions,
        other => return Err(ConstructionError::InvalidBase(other)),
    };
    if power == 0 {
        return Err(ConstructionError::ZeroPower(spec.original_sets));
    }
    let k = spec.original_sets;
    let mut word: Vec<MultiTwistSet> = spec
        .word
        .iter()
        .map(|s| s.relabel(|j| if j >= k { j + 1 } else { j }))
        .collect();
    word.insert(k, MultiTwistSet::uniform(&[k], power));
    let mut out = ConstructionSpec::checked(
        spec.n + 1,
        word,
        Provenance::Theorem2Modified { insertions: insertions + 1 },
        k,
    )?;
    out.label_base = spec.label_base;
    Ok(out)
}

/// Staggered word on `p` sets `{i, i + s, ..., i + (m-1) s}` (mod `p`),
/// `s = ceil(p / k)`, `m = |mu_1|`, applied for `i = 0, ..., p-1`.
pub fn staggered_word(
    spec: &ConstructionSpec,
    power: u32,
) -> Result<ConstructionSpec, ConstructionError> {
    if !matches!(
        spec.provenance,
        Provenance::Theorem1 | Provenance::Theorem2Modified { .. }
    ) {
        return Err(ConstructionError::InvalidBase(spec.provenance));
    }
    if power == 0 {
        return Err(ConstructionError::ZeroPower(0));
    }
    let p = spec.n;
    let k = spec.original_sets;
    let m = spec.word[0].len();
    let stride = p.div_ceil(k);
    let mut word = Vec::with_capacity(p);
    for i in 0..p {
        let set: Vec<usize> = (0..m).map(|t| (i + t * stride) % p).collect();
        if !is_disjoint_set(&set, p) {
            return Err(ConstructionError::StaggeredOverlap(set));
        }
        word.push(MultiTwistSet::uniform(&set, power));
    }
    let mut out = ConstructionSpec::checked(p, word, Provenance::Staggered, k)?;
    out.label_base = spec.label_base;
    Ok(out)
}

/// Converts 1-based labels to 0-based.
pub fn relabel_one_based(sets: &[Vec<usize>]) -> Result<Partition, ConstructionError> {
    sets.iter()
        .map(|s| {
            s.iter()
                .map(|&p| p.checked_sub(1).ok_or(ConstructionError::ZeroLabel))
                .collect()
        })
        .collect()
}

/// Parses `"0,3;1,4;2,5"`.
pub fn parse_partition(s: &str) -> Result<Partition, ConstructionError> {
    s.split(';')
        .map(|set| {
            set.split(',')
                .map(|tok| {
                    tok.trim()
                        .parse::<usize>()
                        .map_err(|e| ConstructionError::Parse(format!("{tok:?}: {e}")))
                })
                .collect::<Result<Vec<_>, _>>()
        })
        .collect()
}

/// Renders a partition in the `"0,3;1,4;2,5"` format.
pub fn format_partition(sets: &[Vec<usize>]) -> String {
    sets.iter()
        .map(|s| s.iter().map(ToString::to_string).collect::<Vec<_>>().join(","))
        .collect::<Vec<_>>()
        .join(";")
}
