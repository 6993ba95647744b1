//! End-to-end analysis: word, matrix, Perron root, factorization,
//! trace field, classification. Also the batch survey and report renderers.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error as ThisError;

use crate::construction::{
    enumerate_even_partitions, format_partition, modify_insert_singleton, word_from_partition,
    ConstructionSpec, Powers, Provenance,
};
use crate::engine::{spine_trace, transition_matrix};
use crate::numfmt::{to_exact_string, to_significant};
use crate::poly::{factor_over_integers, trace_field_poly, FactorizationResult, IntPolynomial, RootInterval, TraceFieldReport};
use crate::spectral::{char_poly, determinant, is_primitive, spectral_radius, IntMatrix, Primitivity};
use crate::Error;

pub const DEFAULT_EPSILON_EXPONENT: u32 = 9;
pub const DECIMAL_DIGITS: u32 = 10;
pub const DEFAULT_SURVEY_CAP: usize = 16;

/// `10^-9`.
pub fn default_epsilon() -> BigRational {
    BigRational::new(1.into(), BigInt::from(10u32).pow(DEFAULT_EPSILON_EXPONENT))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct ClassificationFlags {
    /// A Galois conjugate of λ lies on the unit circle.
    pub penner_excluded: bool,
    /// The field generated by λ + 1/λ is not totally real.
    pub thurston_excluded: bool,
    pub neither_construction: bool,
}

impl ClassificationFlags {
    pub fn from_invariants(unit_circle_pairs: usize, totally_real: bool) -> Self {
        let penner_excluded = unit_circle_pairs >= 1;
        let thurston_excluded = !totally_real;
        ClassificationFlags {
            penner_excluded,
            thurston_excluded,
            neither_construction: penner_excluded && thurston_excluded,
        }
    }
}

pub fn classify_obstructions(report: &AnalysisReport) -> ClassificationFlags {
    ClassificationFlags::from_invariants(
        report.trace_field.unit_circle_pairs,
        report.trace_field.totally_real,
    )
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StretchFactor {
    pub interval: RootInterval,
    /// Midpoint to ten significant digits.
    pub decimal: String,
    pub lo: String,
    pub hi: String,
    pub min_poly: IntPolynomial,
    pub min_poly_string: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certification {
    pub certified: bool,
    pub construction_hypothesis: bool,
    pub powers_at_least_two: bool,
    pub carried: bool,
    pub primitive: bool,
    /// Large, generic and birecurrent tracks are not checked by machine.
    pub geometric_conditions: &'static str,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AnalysisReport {
    pub spec: ConstructionSpec,
    pub spine_trace: Vec<Vec<usize>>,
    pub matrix: IntMatrix,
    #[serde(serialize_with = "crate::ser::bigint")]
    pub determinant: BigInt,
    pub char_poly: IntPolynomial,
    pub char_poly_string: String,
    pub primitivity: Primitivity,
    pub certification: Certification,
    pub stretch_factor: StretchFactor,
    pub factorization: FactorizationResult,
    pub factorization_string: String,
    pub trace_field: TraceFieldReport,
    pub q_string: String,
    pub classification: ClassificationFlags,
}

impl AnalysisReport {
    pub fn certified(&self) -> bool {
        self.certification.certified
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_markdown(&self) -> String {
        let mut s = String::new();
        let spec = &self.spec;
        let _ = writeln!(s, "# Analysis: n = {}, {}", spec.n(), spec.provenance());
        let _ = writeln!(s);
        let _ = writeln!(s, "- partition (0-based): `{}`", format_partition(&spec.sets()));
        let _ = writeln!(s, "- partition (as given): `{}`", format_partition(&spec.raw_sets()));
        let _ = writeln!(s, "- word: `{}`", spec.word_string(spec.label_base()));
        let _ = writeln!(s, "- certified: **{}**", self.certified());
        let c = &self.certification;
        let _ = writeln!(
            s,
            "  - construction hypothesis: {}, powers >= 2: {}, carried: {}, primitive: {}",
            c.construction_hypothesis, c.powers_at_least_two, c.carried, c.primitive
        );
        let _ = writeln!(s, "  - geometric conditions: {}", c.geometric_conditions);
        let _ = writeln!(s);
        let _ = writeln!(s, "## Transition matrix");
        let _ = writeln!(s);
        let _ = writeln!(s, "```");
        let _ = writeln!(s, "{}", self.matrix);
        let _ = writeln!(s, "```");
        let _ = writeln!(s);
        let _ = writeln!(s, "- determinant: {}", self.determinant);
        let exp = self
            .primitivity
            .exponent
            .map_or_else(|| "none".to_string(), |e| e.to_string());
        let _ = writeln!(s, "- primitive: {} (exponent {exp})", self.primitivity.primitive);
        let _ = writeln!(s, "- spine trace: {:?}", self.spine_trace);
        let _ = writeln!(s);
        let _ = writeln!(s, "## Stretch factor");
        let _ = writeln!(s);
        let sf = &self.stretch_factor;
        let _ = writeln!(s, "- λ ≈ {}", sf.decimal);
        let _ = writeln!(s, "- certified interval: [{}, {}]", sf.lo, sf.hi);
        let _ = writeln!(s, "- minimal polynomial: `{}`", sf.min_poly_string);
        let _ = writeln!(s);
        let _ = writeln!(s, "## Number theory");
        let _ = writeln!(s);
        let _ = writeln!(s, "- characteristic polynomial: `{}`", self.char_poly_string);
        let _ = writeln!(s, "- factorization: `{}`", self.factorization_string);
        let _ = writeln!(s, "- trace-field polynomial: `q(y) = {}`", self.q_string);
        let _ = writeln!(s, "- totally real: {}", self.trace_field.totally_real);
        let _ = writeln!(s, "- unit-circle conjugate pairs: {}", self.trace_field.unit_circle_pairs);
        let _ = writeln!(s);
        let _ = writeln!(s, "## Classification");
        let _ = writeln!(s);
        let f = &self.classification;
        let _ = writeln!(s, "| penner_excluded | thurston_excluded | neither_construction |");
        let _ = writeln!(s, "|---|---|---|");
        let _ = writeln!(
            s,
            "| {} | {} | {} |",
            f.penner_excluded, f.thurston_excluded, f.neither_construction
        );
        s
    }
}

/// Full analysis of one word at isolation width `eps`.
pub fn analyze(spec: &ConstructionSpec, eps: &BigRational) -> Result<AnalysisReport, Error> {
    let trace = spine_trace(spec)?;
    let matrix = transition_matrix(spec)?.into_matrix();
    let det = determinant(&matrix);
    let cp = char_poly(&matrix);
    let primitivity = is_primitive(&matrix)?;
    let interval = spectral_radius(&matrix, eps)?;
    let factorization = factor_over_integers(&cp)?;
    let trace_field = trace_field_poly(&cp)?;

    let construction_hypothesis = matches!(
        spec.provenance(),
        Provenance::Theorem1 | Provenance::Theorem2Modified { .. } | Provenance::Staggered
    );
    let powers_at_least_two = spec.all_powers_at_least(2);
    let certification = Certification {
        certified: construction_hypothesis && powers_at_least_two && primitivity.primitive,
        construction_hypothesis,
        powers_at_least_two,
        carried: true,
        primitive: primitivity.primitive,
        geometric_conditions: "asserted per construction family, not verified",
    };
    let min_poly = trace_field.lambda_min_poly.clone();
    let stretch_factor = StretchFactor {
        decimal: to_significant(&interval.midpoint(), DECIMAL_DIGITS),
        lo: to_exact_string(&interval.lo),
        hi: to_exact_string(&interval.hi),
        min_poly_string: min_poly.to_string_in("x"),
        min_poly,
        interval,
    };
    let classification =
        ClassificationFlags::from_invariants(trace_field.unit_circle_pairs, trace_field.totally_real);
    Ok(AnalysisReport {
        spec: spec.clone(),
        spine_trace: trace,
        matrix,
        determinant: det,
        char_poly_string: cp.to_string_in("x"),
        char_poly: cp,
        primitivity,
        certification,
        stretch_factor,
        factorization_string: factorization.to_string_in("x"),
        factorization,
        q_string: trace_field.q.to_string_in("y"),
        trace_field,
        classification,
    })
}

#[derive(Debug, Clone)]
pub struct SurveyOptions {
    pub n_min: usize,
    pub n_max: usize,
    pub power: u32,
    /// Also include variants with 1..=modify singleton insertions.
    pub modify: usize,
    pub eps: BigRational,
    pub cap: usize,
}

impl SurveyOptions {
    pub fn new(n_min: usize, n_max: usize, power: u32) -> Self {
        SurveyOptions {
            n_min,
            n_max,
            power,
            modify: 0,
            eps: default_epsilon(),
            cap: DEFAULT_SURVEY_CAP,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, ThisError)]
pub enum SurveyError {
    #[error("n = {n} exceeds the survey cap {cap}")]
    ExceedsCap { n: usize, cap: usize },
    #[error("empty range {0}..={1}")]
    EmptyRange(usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SurveySummary {
    pub lambda: String,
    pub lambda_lo: String,
    pub lambda_hi: String,
    pub min_poly: String,
    pub q: String,
    pub certified: bool,
    pub primitive_exponent: Option<u32>,
    pub totally_real: bool,
    pub unit_circle_pairs: usize,
    pub classification: ClassificationFlags,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SurveyRow {
    pub n: usize,
    pub base_n: usize,
    pub k: usize,
    pub insertions: usize,
    pub partition: String,
    pub outcome: Result<SurveySummary, String>,
}

impl SurveyRow {
    fn sort_key(&self) -> (usize, String) {
        (self.n, self.partition.clone())
    }
}

fn summarize(report: &AnalysisReport) -> SurveySummary {
    SurveySummary {
        lambda: report.stretch_factor.decimal.clone(),
        lambda_lo: report.stretch_factor.lo.clone(),
        lambda_hi: report.stretch_factor.hi.clone(),
        min_poly: report.stretch_factor.min_poly_string.clone(),
        q: report.q_string.clone(),
        certified: report.certified(),
        primitive_exponent: report.primitivity.exponent,
        totally_real: report.trace_field.totally_real,
        unit_circle_pairs: report.trace_field.unit_circle_pairs,
        classification: report.classification,
    }
}

fn survey_row(
    base_n: usize,
    sets: &[Vec<usize>],
    insertions: usize,
    opts: &SurveyOptions,
) -> SurveyRow {
    let built = word_from_partition(sets, &Powers::Uniform(opts.power)).and_then(|s| {
        (0..insertions).try_fold(s, |acc, _| modify_insert_singleton(&acc, opts.power))
    });
    let (n, partition, outcome) = match built {
        Ok(spec) => (
            spec.n(),
            format_partition(&spec.sets()),
            analyze(&spec, &opts.eps).map(|r| summarize(&r)).map_err(|e| e.to_string()),
        ),
        Err(e) => (base_n + insertions, format_partition(sets), Err(Error::from(e).to_string())),
    };
    SurveyRow {
        n,
        base_n,
        k: sets.len(),
        insertions,
        partition,
        outcome,
    }
}

/// One row per evenly spaced partition (and requested modifications) for
/// each `n` in range, computed in parallel and sorted by `(n, partition)`.
pub fn survey(opts: &SurveyOptions) -> Result<Vec<SurveyRow>, SurveyError> {
    if opts.n_min > opts.n_max {
        return Err(SurveyError::EmptyRange(opts.n_min, opts.n_max));
    }
    if opts.n_max > opts.cap {
        return Err(SurveyError::ExceedsCap { n: opts.n_max, cap: opts.cap });
    }
    let jobs: Vec<(usize, Vec<Vec<usize>>, usize)> = (opts.n_min.max(4)..=opts.n_max)
        .flat_map(|n| {
            enumerate_even_partitions(n)
                .into_iter()
                .flat_map(move |p| (0..=opts.modify).map(move |i| (n, p.clone(), i)))
        })
        .collect();
    let mut rows: Vec<SurveyRow> = jobs
        .par_iter()
        .map(|(n, sets, i)| survey_row(*n, sets, *i, opts))
        .collect();
    rows.sort_by_key(SurveyRow::sort_key);
    Ok(rows)
}

const SURVEY_COLUMNS: [&str; 11] = [
    "n", "k", "insertions", "partition", "lambda", "min_poly", "q", "certified",
    "totally_real", "unit_circle_pairs", "neither_construction",
];

fn survey_cells(row: &SurveyRow) -> Vec<String> {
    let mut cells = vec![
        row.n.to_string(),
        row.k.to_string(),
        row.insertions.to_string(),
        row.partition.clone(),
    ];
    match &row.outcome {
        Ok(s) => cells.extend([
            s.lambda.clone(),
            s.min_poly.clone(),
            s.q.clone(),
            s.certified.to_string(),
            s.totally_real.to_string(),
            s.unit_circle_pairs.to_string(),
            s.classification.neither_construction.to_string(),
        ]),
        Err(e) => {
            cells.push(format!("error: {e}"));
            cells.extend(std::iter::repeat_n(String::new(), 6));
        }
    }
    cells
}

pub fn survey_to_markdown(rows: &[SurveyRow]) -> String {
    let mut s = format!("| {} |\n", SURVEY_COLUMNS.join(" | "));
    let _ = writeln!(s, "|{}", "---|".repeat(SURVEY_COLUMNS.len()));
    for row in rows {
        let _ = writeln!(s, "| {} |", survey_cells(row).join(" | "));
    }
    s
}

pub fn survey_to_csv(rows: &[SurveyRow]) -> String {
    let quote = |c: &str| {
        if c.contains([',', '"', '\n']) {
            format!("\"{}\"", c.replace('"', "\"\""))
        } else {
            c.to_string()
        }
    };
    let mut s = SURVEY_COLUMNS.join(",");
    s.push('\n');
    for row in rows {
        let cells: Vec<String> = survey_cells(row).iter().map(|c| quote(c)).collect();
        s.push_str(&cells.join(","));
        s.push('\n');
    }
    s
}

pub fn survey_to_json(rows: &[SurveyRow]) -> String {
    serde_json::to_string_pretty(rows).expect("survey serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn phi_report() {
        let r = analyze(&catalog::phi(), &default_epsilon()).unwrap();
        assert!(r.certified());
        assert!(r.stretch_factor.decimal.starts_with("17.9442719"));
        assert!(r.trace_field.totally_real);
        assert_eq!(r.trace_field.unit_circle_pairs, 0);
        assert_eq!(
            r.classification,
            ClassificationFlags::from_invariants(0, true)
        );
        assert_eq!(classify_obstructions(&r), r.classification);
    }

    #[test]
    fn power_one_is_uncertified() {
        let spec = ConstructionSpec::from_partition(
            &[vec![0, 3], vec![1, 4], vec![2, 5]],
            &Powers::Uniform(1),
        )
        .unwrap();
        let r = analyze(&spec, &default_epsilon()).unwrap();
        assert!(!r.certified());
        assert!(!r.certification.powers_at_least_two);
    }

    #[test]
    fn classification_truth_table() {
        for pairs in 0..3 {
            for real in [false, true] {
                let f = ClassificationFlags::from_invariants(pairs, real);
                assert_eq!(f.penner_excluded, pairs >= 1);
                assert_eq!(f.thurston_excluded, !real);
                assert_eq!(f.neither_construction, f.penner_excluded && f.thurston_excluded);
            }
        }
    }

    #[test]
    fn survey_counts() {
        let six = survey(&SurveyOptions::new(6, 6, 2)).unwrap();
        assert_eq!(six.len(), 2);
        assert!(survey(&SurveyOptions::new(5, 5, 2)).unwrap().is_empty());
        assert_eq!(survey(&SurveyOptions::new(4, 8, 2)).unwrap().len(), 5);
        assert_eq!(
            survey(&SurveyOptions::new(4, 17, 2)),
            Err(SurveyError::ExceedsCap { n: 17, cap: 16 })
        );
    }

    #[test]
    fn renderers_have_one_line_per_row() {
        let rows = survey(&SurveyOptions::new(6, 6, 2)).unwrap();
        assert_eq!(survey_to_csv(&rows).lines().count(), 3);
        assert_eq!(survey_to_markdown(&rows).lines().count(), 4);
        let md = analyze(&catalog::phi(), &default_epsilon()).unwrap().to_markdown();
        assert!(md.contains("x^2 - 18x + 1"));
    }
}
