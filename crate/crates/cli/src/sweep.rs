//! Randomized cross-checks of the two simplicity criteria.

use std::collections::BTreeMap;

use multispinal::measure::solve_psi;
use multispinal::model::amenability_sufficient;
use multispinal::simplicity::{gram_entries_in_unit_interval, gram_matrix, kernel_criterion, AnalysisError, Verdict};
use multispinal::MultispinalInstance;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("{instance}: {source}")]
    Analysis { instance: String, source: AnalysisError },
    #[error("{instance}: Gram matrix {property}")]
    Gram { instance: String, property: &'static str },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepSummary {
    pub instances: usize,
    pub largest_a: usize,
    pub verdicts: BTreeMap<String, usize>,
}

/// Checks one instance and returns its verdict.
pub fn check_instance(inst: &MultispinalInstance) -> Result<Verdict, SweepError> {
    let name = || inst.name().to_string();
    let analysis = |source: AnalysisError| SweepError::Analysis { instance: name(), source };
    let gram_fault = |property| SweepError::Gram { instance: name(), property };

    let table = solve_psi(inst).map_err(|e| analysis(e.into()))?;
    let gram = gram_matrix(inst, &table);
    if !gram.is_symmetric() {
        return Err(gram_fault("is not symmetric"));
    }
    if !(0..gram.rows()).all(|i| gram.get(i, i).is_one()) {
        return Err(gram_fault("has a diagonal entry other than 1"));
    }
    if !gram_entries_in_unit_interval(&gram) {
        return Err(gram_fault("has an entry outside [0, 1]"));
    }
    if !gram.is_psd().map_err(|e| analysis(e.into()))? {
        return Err(gram_fault("is not positive semidefinite"));
    }
    let matrix = !gram.determinant().map_err(|e| analysis(e.into()))?.is_zero();
    let kernel = kernel_criterion(inst);
    if matrix != kernel {
        return Err(analysis(AnalysisError::CriteriaDisagreement { matrix, kernel }));
    }
    Ok(Verdict::from_criterion(matrix, amenability_sufficient(inst)))
}

pub fn sweep(instances: impl IntoIterator<Item = MultispinalInstance>) -> Result<SweepSummary, SweepError> {
    let mut summary = SweepSummary { instances: 0, largest_a: 0, verdicts: BTreeMap::new() };
    for inst in instances {
        let verdict = check_instance(&inst)?;
        summary.instances += 1;
        summary.largest_a = summary.largest_a.max(inst.group_a().order());
        *summary.verdicts.entry(verdict.as_str().to_string()).or_default() += 1;
    }
    Ok(summary)
}
