//! Serialized reports.
//!
//! Rationals are written as `"p/q"` strings (always with a denominator) and
//! big integers as decimal strings, so JSON reports are exact and stable
//! under diffing. Key order follows the struct declarations below.

use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::action::WitnessBounds;
use crate::linalg::{Rational, RationalMatrix};
use crate::model::Amenability;
use crate::simplicity::{AnalysisReport, InstanceSummary, Timing, TruncationRow, Verdict, WitnessSummary};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReportError {
    #[error("malformed rational {0:?}")]
    Rational(String),
    #[error("malformed integer {0:?}")]
    Integer(String),
    #[error("malformed matrix: {0}")]
    Matrix(String),
}

pub fn format_rational(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

pub fn parse_rational(s: &str) -> Result<Rational, ReportError> {
    let bad = || ReportError::Rational(s.to_string());
    let (p, q) = s.split_once('/').unwrap_or((s, "1"));
    let p = BigInt::from_str(p).map_err(|_| bad())?;
    let q = BigInt::from_str(q).map_err(|_| bad())?;
    if q == BigInt::from(0) {
        return Err(bad());
    }
    Ok(Rational::new(p, q))
}

fn parse_int<T: FromStr>(s: &str) -> Result<T, ReportError> {
    s.parse().map_err(|_| ReportError::Integer(s.to_string()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PsiEntry {
    pub element: String,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruncationEntry {
    pub agent: String,
    pub depth: usize,
    pub count: String,
    pub ratio: String,
    pub gap: String,
}

/// The machine-readable form of an [`AnalysisReport`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub instance: InstanceSummary,
    pub psi: Vec<PsiEntry>,
    pub gram_matrix: Vec<Vec<String>>,
    pub scale: String,
    pub scaled_matrix: Vec<Vec<String>>,
    pub determinant: String,
    pub scaled_determinant: String,
    pub gram_psd: bool,
    pub matrix_criterion: bool,
    pub kernel_criterion: bool,
    pub criteria_agree: bool,
    pub amenability: Amenability,
    pub verdict: Verdict,
    pub kirchberg: bool,
    pub witness_bounds: Option<WitnessBounds>,
    pub witness: Option<WitnessSummary>,
    pub truncation: Vec<TruncationEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
}

impl From<&AnalysisReport> for ReportDocument {
    fn from(r: &AnalysisReport) -> Self {
        ReportDocument {
            instance: r.summary.clone(),
            psi: r.psi.iter().map(|(e, v)| PsiEntry { element: e.clone(), value: format_rational(v) }).collect(),
            gram_matrix: r.gram.to_rows().iter().map(|row| row.iter().map(format_rational).collect()).collect(),
            scale: r.scale.to_string(),
            scaled_matrix: r.scaled_matrix.iter().map(|row| row.iter().map(|x| x.to_string()).collect()).collect(),
            determinant: format_rational(&r.determinant),
            scaled_determinant: r.scaled_determinant.to_string(),
            gram_psd: r.gram_psd,
            matrix_criterion: r.matrix_criterion,
            kernel_criterion: r.kernel_criterion,
            criteria_agree: r.criteria_agree,
            amenability: r.amenability,
            verdict: r.verdict,
            kirchberg: r.kirchberg,
            witness_bounds: r.witness_bounds,
            witness: r.witness.clone(),
            truncation: r
                .truncation
                .iter()
                .map(|t| TruncationEntry {
                    agent: t.agent.clone(),
                    depth: t.depth,
                    count: t.count.to_string(),
                    ratio: format_rational(&t.ratio),
                    gap: format_rational(&t.gap),
                })
                .collect(),
            timing: r.timing,
        }
    }
}

impl TryFrom<ReportDocument> for AnalysisReport {
    type Error = ReportError;

    fn try_from(d: ReportDocument) -> Result<Self, ReportError> {
        let gram_rows = d
            .gram_matrix
            .iter()
            .map(|row| row.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        let gram = RationalMatrix::from_rows(gram_rows).map_err(|e| ReportError::Matrix(e.to_string()))?;
        Ok(AnalysisReport {
            summary: d.instance,
            psi: d
                .psi
                .into_iter()
                .map(|p| Ok((p.element, parse_rational(&p.value)?)))
                .collect::<Result<_, ReportError>>()?,
            gram,
            scale: parse_int(&d.scale)?,
            scaled_matrix: d
                .scaled_matrix
                .iter()
                .map(|row| row.iter().map(|s| parse_int::<BigInt>(s)).collect::<Result<Vec<_>, _>>())
                .collect::<Result<_, _>>()?,
            determinant: parse_rational(&d.determinant)?,
            scaled_determinant: parse_int(&d.scaled_determinant)?,
            gram_psd: d.gram_psd,
            matrix_criterion: d.matrix_criterion,
            kernel_criterion: d.kernel_criterion,
            criteria_agree: d.criteria_agree,
            amenability: d.amenability,
            verdict: d.verdict,
            kirchberg: d.kirchberg,
            witness_bounds: d.witness_bounds,
            witness: d.witness,
            truncation: d
                .truncation
                .into_iter()
                .map(|t| {
                    Ok(TruncationRow {
                        agent: t.agent,
                        depth: t.depth,
                        count: parse_int::<BigUint>(&t.count)?,
                        ratio: parse_rational(&t.ratio)?,
                        gap: parse_rational(&t.gap)?,
                    })
                })
                .collect::<Result<_, ReportError>>()?,
            timing: d.timing,
        })
    }
}

pub fn to_json(report: &AnalysisReport) -> String {
    let mut s = serde_json::to_string_pretty(&ReportDocument::from(report)).expect("report serializes");
    s.push('\n');
    s
}

pub fn from_json(text: &str) -> Result<AnalysisReport, Box<dyn std::error::Error + Send + Sync>> {
    let doc: ReportDocument = serde_json::from_str(text)?;
    Ok(AnalysisReport::try_from(doc)?)
}

/// A plain-text rendering for people.
pub fn render_text(r: &AnalysisReport, emit_matrix: bool) -> String {
    let mut out = String::new();
    let s = &r.summary;
    let name = if s.name.is_empty() { "(unnamed)" } else { s.name.as_str() };
    let _ = writeln!(out, "instance     {name}");
    let _ = writeln!(out, "|A| = {}, |B| = {}, X = {{{}}}", s.order_a, s.order_b, s.alphabet.join(", "));
    let _ = writeln!(out, "Y            {{{}}}", s.hom_letters.join(", "));
    let _ = writeln!(out, "|ℬ·𝒜|        {}", s.ba_size);
    let _ = writeln!(out, "nucleus      {{{}}} ({} agents)", s.nucleus.join(", "), s.nucleus.len());
    let _ = writeln!(out, "ψ");
    for (e, v) in &r.psi {
        let _ = writeln!(out, "  {e:<10} {v}");
    }
    if emit_matrix {
        let _ = writeln!(out, "Gram matrix = (1/{}) ·", r.scale);
        for row in &r.scaled_matrix {
            let cells: Vec<String> = row.iter().map(|x| format!("{x:>4}")).collect();
            let _ = writeln!(out, "  [{}]", cells.join(""));
        }
    }
    let _ = writeln!(out, "scale        {}", r.scale);
    let _ = writeln!(out, "det (scaled) {}", r.scaled_determinant);
    let _ = writeln!(out, "det          {}", r.determinant);
    let _ = writeln!(out, "Gram PSD     {}", r.gram_psd);
    let _ = writeln!(out, "matrix criterion  {}", r.matrix_criterion);
    let _ = writeln!(out, "kernel criterion  {}", r.kernel_criterion);
    let _ = writeln!(out, "amenability  {:?}", r.amenability);
    let _ = writeln!(out, "verdict      {}", r.verdict.as_str());
    let _ = writeln!(out, "Kirchberg    {}", r.kirchberg);
    match (&r.witness, r.witness_bounds) {
        (Some(w), _) => {
            let _ = writeln!(
                out,
                "non-Hausdorff witness: {} on ({})^∞, escape letter {} at depth {}, cycle [{}]",
                w.agent,
                w.period,
                w.escape,
                w.depth,
                w.phases.join(" → ")
            );
        }
        (None, Some(b)) => {
            let _ = writeln!(out, "non-Hausdorff witness: none with period ≤ {}", b.max_period);
        }
        (None, None) => {}
    }
    if let Some(t) = r.truncation.first() {
        let _ = writeln!(out, "truncation at depth {}", t.depth);
        for t in &r.truncation {
            let _ = writeln!(out, "  {:<10} ratio {} gap {}", t.agent, t.ratio, t.gap);
        }
    }
    if let Some(t) = r.timing {
        let _ = writeln!(out, "elapsed      {} µs", t.total_micros);
    }
    out
}
