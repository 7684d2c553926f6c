//! The simplicity decision for `O_G`.
//!
//! When the groupoid of germs is amenable, `O_G` is simple exactly when the
//! `|A| × |A|` Gram matrix `[ψ(a⁻¹b)]` is invertible. Independently, the
//! algebraic (Steinberg) algebra is simple exactly when the linearised maps
//! `λ̃ : ℂA → ℂB`, `λ ∈ ℬ·𝒜`, have trivial common kernel, and the two
//! conditions are equivalent. [`analyze`] evaluates both and treats any
//! disagreement as a defect.

use std::collections::BTreeSet;
use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::action::{find_nonhausdorff_witness, Witness, WitnessBounds};
use crate::linalg::{LinalgError, Rational, RationalMatrix};
use crate::measure::{solve_psi, truncation_series, MeasureError, PsiTable};
use crate::model::{amenability_sufficient, Amenability, MultispinalInstance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Verdict {
    Simple,
    NotSimple,
    #[serde(rename = "ConditionalOnAmenability-Simple")]
    ConditionalSimple,
    #[serde(rename = "ConditionalOnAmenability-NotSimple")]
    ConditionalNotSimple,
}

impl Verdict {
    pub fn from_criterion(invertible: bool, amenability: Amenability) -> Self {
        match (amenability, invertible) {
            (Amenability::Established, true) => Verdict::Simple,
            (Amenability::Established, false) => Verdict::NotSimple,
            (Amenability::Unknown, true) => Verdict::ConditionalSimple,
            (Amenability::Unknown, false) => Verdict::ConditionalNotSimple,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Simple => "Simple",
            Verdict::NotSimple => "NotSimple",
            Verdict::ConditionalSimple => "ConditionalOnAmenability-Simple",
            Verdict::ConditionalNotSimple => "ConditionalOnAmenability-NotSimple",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("internal defect: matrix criterion = {matrix}, kernel criterion = {kernel}")]
    CriteriaDisagreement { matrix: bool, kernel: bool },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnalysisOptions {
    /// Depth of the fixed-word truncation check for every agent; `None` skips it.
    pub truncation_depth: Option<usize>,
    /// Bounds for the non-Hausdorff witness search; `None` skips it.
    pub witness_bounds: Option<WitnessBounds>,
    /// Record wall-clock timings. Off by default so reports are reproducible.
    pub record_timing: bool,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions {
            truncation_depth: Some(12),
            witness_bounds: Some(WitnessBounds::default()),
            record_timing: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceSummary {
    pub name: String,
    pub order_a: usize,
    pub order_b: usize,
    pub alphabet: Vec<String>,
    pub hom_letters: Vec<String>,
    pub aut_letters: Vec<String>,
    pub ba_size: usize,
    pub nucleus: Vec<String>,
}

impl InstanceSummary {
    pub fn of(inst: &MultispinalInstance) -> Self {
        let letters = |xs: &[usize]| xs.iter().map(|&x| inst.alphabet()[x].clone()).collect();
        InstanceSummary {
            name: inst.name().to_string(),
            order_a: inst.group_a().order(),
            order_b: inst.group_b().order(),
            alphabet: inst.alphabet().to_vec(),
            hom_letters: letters(inst.hom_letters()),
            aut_letters: letters(inst.aut_letters()),
            ba_size: inst.ba().len(),
            nucleus: inst.nucleus().iter().map(|&g| inst.agent_label(g).to_string()).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncationRow {
    pub agent: String,
    pub depth: usize,
    pub count: BigUint,
    pub ratio: Rational,
    pub gap: Rational,
}

/// A non-Hausdorff witness with letters and agents spelled out by label.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessSummary {
    pub agent: String,
    pub period: String,
    pub escape: String,
    pub depth: usize,
    pub phases: Vec<String>,
}

impl WitnessSummary {
    pub fn new(inst: &MultispinalInstance, w: &Witness) -> Self {
        WitnessSummary {
            agent: inst.agent_label(w.agent).to_string(),
            period: inst.format_word(&w.period),
            escape: inst.alphabet()[w.escape].clone(),
            depth: w.depth,
            phases: w.phases.iter().map(|&p| inst.agent_label(p).to_string()).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Timing {
    pub total_micros: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnalysisReport {
    pub summary: InstanceSummary,
    /// `ψ(a)` for every `a ∈ A`, in declared order.
    pub psi: Vec<(String, Rational)>,
    pub gram: RationalMatrix,
    pub scale: BigInt,
    pub scaled_matrix: Vec<Vec<BigInt>>,
    pub determinant: Rational,
    /// `det(scale · gram) = scaleⁿ · det(gram)`.
    pub scaled_determinant: BigInt,
    pub gram_psd: bool,
    pub matrix_criterion: bool,
    pub kernel_criterion: bool,
    pub criteria_agree: bool,
    pub amenability: Amenability,
    pub verdict: Verdict,
    pub kirchberg: bool,
    pub witness_bounds: Option<WitnessBounds>,
    pub witness: Option<WitnessSummary>,
    pub truncation: Vec<TruncationRow>,
    pub timing: Option<Timing>,
}

/// `[ψ(aᵢ⁻¹aⱼ)]` in the declared order of `A`.
pub fn gram_matrix(inst: &MultispinalInstance, table: &PsiTable) -> RationalMatrix {
    let a = inst.group_a();
    let n = a.order();
    let m = RationalMatrix::from_fn(n, n, |i, j| table.value(a.mul(a.inv(i), j)).clone());
    assert!(m.is_symmetric(), "ψ(a⁻¹b) = ψ(b⁻¹a) must hold");
    assert!((0..n).all(|i| m.get(i, i).is_one()), "Gram diagonal must be ψ(e) = 1");
    m
}

/// `(s, s·M)` with `s` the least common denominator of the entries.
pub fn scaled_integer_form(m: &RationalMatrix) -> (BigInt, Vec<Vec<BigInt>>) {
    m.integer_form()
}

/// The Gram matrix is invertible.
pub fn matrix_criterion(inst: &MultispinalInstance, table: &PsiTable) -> bool {
    !gram_matrix(inst, table).determinant().expect("square").is_zero()
}

/// The stacked 0/1 matrices of `λ̃` for `λ ∈ ℬ·𝒜` (column `a` has a single 1
/// in row `λ(a)` of its block).
pub fn stacked_kernel_matrix(inst: &MultispinalInstance) -> RationalMatrix {
    let a = inst.group_a();
    let nb = inst.group_b().order();
    let ba = inst.ba();
    RationalMatrix::from_fn(ba.len() * nb, a.order(), |r, c| {
        let (block, row) = (r / nb, r % nb);
        if ba[block].apply(c) == row {
            Rational::one()
        } else {
            Rational::zero()
        }
    })
}

/// `⋂_{λ ∈ ℬ·𝒜} ker λ̃ = {0}` in `ℂA`, i.e. the stacked matrix has full column rank.
///
/// Rows of the stacked matrix are indicator vectors of fibres `λ⁻¹(b)`; many
/// coincide, so only distinct fibres are ranked.
pub fn kernel_criterion(inst: &MultispinalInstance) -> bool {
    let a = inst.group_a();
    let fibres: BTreeSet<Vec<bool>> = inst
        .ba()
        .iter()
        .flat_map(|lambda| inst.group_b().elements().map(move |b| a.elements().map(|g| lambda.apply(g) == b).collect()))
        .filter(|row: &Vec<bool>| row.contains(&true))
        .collect();
    if fibres.len() < a.order() {
        return false;
    }
    let rows =
        fibres.into_iter().map(|r| r.into_iter().map(|x| if x { Rational::one() } else { Rational::zero() }).collect());
    RationalMatrix::from_rows(rows.collect()).expect("nonempty fibres").rank() == a.order()
}

pub fn analyze(inst: &MultispinalInstance, options: &AnalysisOptions) -> Result<AnalysisReport, AnalysisError> {
    let started = Instant::now();
    let a = inst.group_a();

    let table = solve_psi(inst)?;
    let gram = gram_matrix(inst, &table);
    let (scale, scaled_matrix) = scaled_integer_form(&gram);
    let determinant = gram.determinant()?;
    let scaled_determinant = {
        let scaled = &determinant * Rational::from_integer(num_traits::pow(scale.clone(), a.order()));
        assert!(scaled.is_integer());
        scaled.to_integer()
    };
    let gram_psd = gram.is_psd()?;

    let matrix_criterion = !determinant.is_zero();
    let kernel_criterion = kernel_criterion(inst);
    if matrix_criterion != kernel_criterion {
        return Err(AnalysisError::CriteriaDisagreement { matrix: matrix_criterion, kernel: kernel_criterion });
    }

    let amenability = amenability_sufficient(inst);
    let verdict = Verdict::from_criterion(matrix_criterion, amenability);

    let witness =
        options.witness_bounds.and_then(|b| find_nonhausdorff_witness(inst, b)).map(|w| WitnessSummary::new(inst, &w));

    let mut truncation = Vec::new();
    if let Some(depth) = options.truncation_depth {
        for &g in inst.agents() {
            let last = truncation_series(inst, &table, g, depth)?.pop().expect("nonempty series");
            truncation.push(TruncationRow {
                agent: inst.agent_label(g).to_string(),
                depth,
                count: last.count,
                ratio: last.ratio,
                gap: last.gap,
            });
        }
    }

    let summary = InstanceSummary::of(inst);

    let timing = options
        .record_timing
        .then(|| Timing { total_micros: started.elapsed().as_micros().try_into().unwrap_or(u64::MAX) });

    Ok(AnalysisReport {
        summary,
        psi: a.elements().map(|g| (a.label(g).to_string(), table.value(g).clone())).collect(),
        gram,
        scale,
        scaled_matrix,
        determinant,
        scaled_determinant,
        gram_psd,
        matrix_criterion,
        kernel_criterion,
        criteria_agree: true,
        amenability,
        verdict,
        kirchberg: verdict == Verdict::Simple,
        witness_bounds: options.witness_bounds,
        witness,
        truncation,
        timing,
    })
}

/// Sanity check on a report: every entry of the Gram matrix lies in `[0, 1]`.
pub fn gram_entries_in_unit_interval(m: &RationalMatrix) -> bool {
    m.entries().iter().all(|q| !q.is_negative() && q <= &Rational::one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::linalg::int;

    fn ints(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn grigorchuk_gram_matrix_matches_display() {
        let g = fixtures::grigorchuk();
        let t = solve_psi(&g).unwrap();
        let (s, n) = scaled_integer_form(&gram_matrix(&g, &t));
        assert_eq!(s, BigInt::from(7));
        assert_eq!(n, ints(&[&[7, 1, 2, 4], &[1, 7, 4, 2], &[2, 4, 7, 1], &[4, 2, 1, 7]]));
        assert!(matrix_criterion(&g, &t));
        assert!(kernel_criterion(&g));
        assert_eq!(stacked_kernel_matrix(&g).rows(), 6);
    }

    #[test]
    fn nonsimple_variant_fails_both_criteria() {
        let g = fixtures::nonsimple_variant();
        let t = solve_psi(&g).unwrap();
        assert!(!matrix_criterion(&g, &t));
        assert!(!kernel_criterion(&g));
        let (s, n) = scaled_integer_form(&gram_matrix(&g, &t));
        assert_eq!(s, BigInt::from(3));
        assert_eq!(n, ints(&[&[3, 1, 0, 2], &[1, 3, 2, 0], &[0, 2, 3, 1], &[2, 0, 1, 3]]));
    }

    #[test]
    fn identity_scale() {
        let (s, _) = scaled_integer_form(&RationalMatrix::identity(3));
        assert_eq!(s, BigInt::one());
    }

    #[test]
    fn verdict_gating() {
        assert_eq!(Verdict::from_criterion(true, Amenability::Established), Verdict::Simple);
        assert_eq!(Verdict::from_criterion(false, Amenability::Established), Verdict::NotSimple);
        assert_eq!(Verdict::from_criterion(true, Amenability::Unknown), Verdict::ConditionalSimple);
        assert_eq!(Verdict::from_criterion(false, Amenability::Unknown), Verdict::ConditionalNotSimple);
    }

    #[test]
    fn analyze_fixtures() {
        let r = analyze(&fixtures::grigorchuk(), &AnalysisOptions::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Simple);
        assert!(r.kirchberg && r.gram_psd && r.criteria_agree);
        assert_eq!(r.scaled_determinant, BigInt::from(896));
        assert_eq!(r.determinant, int(896) / int(2401));
        assert_eq!(r.witness.as_ref().unwrap().agent, "d");
        assert!(r.timing.is_none());

        let r = analyze(&fixtures::nonsimple_variant(), &AnalysisOptions::default()).unwrap();
        assert_eq!(r.verdict, Verdict::NotSimple);
        assert!(!r.kirchberg);
        assert!(r.scaled_determinant.is_zero());

        let r = analyze(&fixtures::z3_squared(), &AnalysisOptions::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Simple);
        assert_eq!(r.scale, BigInt::from(14));
        assert_eq!(r.scaled_determinant, BigInt::from(634894848u64));
    }
}
