//! Exact fixed-point measures `ψ(g) = μ(Fix g)` under the uniform Bernoulli
//! measure, and the KMS values they determine.
//!
//! Reading one letter splits the fixed set of `a ∈ A` as
//! `Fix(a) = ⋃ₓ x·Fix(Ψ(x)(a))`, and the `B`-action is free, so `μ(Fix b)` is
//! `1` for `b = e` and `0` otherwise. Hence for every `a ≠ e`
//!
//! ```text
//! ψ(a) = (1/|X|) · ( Σ_{x ∈ X∖Y} ψ(Ψ(x)(a)) + |{y ∈ Y : Ψ(y)(a) = 1_B}| )
//! ```
//!
//! The automorphism letters contribute a substochastic matrix `T` with row
//! sums `|X∖Y|/|X| < 1`, so `I − T` is strictly diagonally dominant and the
//! system has a unique solution.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::action::{fixed_count_table, Agent};
use crate::linalg::{LinalgError, Rational, RationalMatrix};
use crate::model::{LetterMap, MultispinalInstance};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MeasureError {
    #[error("internal defect: the ψ system is singular")]
    InternalSingular,
    #[error("agent {0:?} does not belong to this instance")]
    UnknownAgent(Agent),
    #[error("internal defect: truncation ratios violate monotone convergence for {agent:?} at depth {depth}")]
    TruncationViolation { agent: Agent, depth: usize },
}

/// The linear system `(I − T)·ψ = rhs` over the unknowns `A ∖ {e}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PsiSystem {
    /// Element indices of `A`, in declared order.
    pub unknowns: Vec<usize>,
    pub matrix: RationalMatrix,
    pub rhs: Vec<Rational>,
}

/// `ψ` on every element of `A`, plus the system it was solved from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PsiTable {
    values: Vec<Rational>,
    b_order: usize,
    alphabet_size: usize,
    system: Option<PsiSystem>,
}

impl PsiTable {
    /// `ψ(a)` for `a` an element index of `A`.
    pub fn value(&self, a: usize) -> &Rational {
        &self.values[a]
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    /// `None` only when `A` is trivial.
    pub fn system(&self) -> Option<&PsiSystem> {
        self.system.as_ref()
    }
}

pub fn solve_psi(inst: &MultispinalInstance) -> Result<PsiTable, MeasureError> {
    let a = inst.group_a();
    let b = inst.group_b();
    let m = inst.alphabet_size();
    let unknowns: Vec<usize> = a.non_identity().collect();
    let position = |g: usize| unknowns.iter().position(|&u| u == g);
    let width = BigRational::new(One::one(), m.into());

    let mut values = vec![Rational::zero(); a.order()];
    values[a.identity()] = Rational::one();
    let mut system = None;

    if !unknowns.is_empty() {
        let n = unknowns.len();
        let mut t = vec![vec![Rational::zero(); n]; n];
        let mut rhs = vec![Rational::zero(); n];
        for (i, &g) in unknowns.iter().enumerate() {
            for x in 0..m {
                match inst.psi(x) {
                    LetterMap::Aut(h) => {
                        let j = position(h.apply(g)).expect("automorphisms fix only the identity");
                        t[i][j] += &width;
                    }
                    LetterMap::Hom(h) => {
                        if h.apply(g) == b.identity() {
                            rhs[i] += &width;
                        }
                    }
                }
            }
        }
        let matrix = RationalMatrix::from_fn(n, n, |i, j| {
            let id = if i == j { Rational::one() } else { Rational::zero() };
            id - &t[i][j]
        });
        for i in 0..n {
            let off: Rational = (0..n).filter(|&j| j != i).map(|j| matrix.get(i, j).abs()).sum();
            assert!(matrix.get(i, i) > &off, "ψ system is not strictly diagonally dominant at row {i}");
        }
        let solution = matrix.solve(&rhs).map_err(|e| match e {
            LinalgError::Singular => MeasureError::InternalSingular,
            other => panic!("ψ system is malformed: {other}"),
        })?;
        for (&g, v) in unknowns.iter().zip(solution) {
            values[g] = v;
        }
        system = Some(PsiSystem { unknowns, matrix, rhs });
    }

    Ok(PsiTable { values, b_order: b.order(), alphabet_size: m, system })
}

/// `ψ(g)`: `1` on the identity, `0` on nontrivial `B`-agents (they fix no
/// point), and the solved value on `A`-agents.
pub fn psi_value(table: &PsiTable, g: Agent) -> Result<Rational, MeasureError> {
    match g {
        Agent::Identity => Ok(Rational::one()),
        Agent::Aut(a) if a < table.values.len() => Ok(table.values[a].clone()),
        Agent::Perm(b) if b < table.b_order => Ok(Rational::zero()),
        _ => Err(MeasureError::UnknownAgent(g)),
    }
}

/// The KMS state on `S_u g S_v*`: `δ_{u,v} · |X|^{-|u|} · ψ(g)`.
pub fn kms_value(table: &PsiTable, u: &[usize], g: Agent, v: &[usize]) -> Result<Rational, MeasureError> {
    let psi = psi_value(table, g)?;
    if u != v {
        return Ok(Rational::zero());
    }
    let scale = num_traits::pow(BigRational::from_integer(table.alphabet_size.into()), u.len());
    Ok(psi / scale)
}

/// One point of the convergence `|Fixₙ(g)| / |X|ⁿ ↓ ψ(g)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncationCheck {
    pub agent: Agent,
    pub depth: usize,
    pub count: BigUint,
    pub ratio: Rational,
    pub psi: Rational,
    pub gap: Rational,
}

/// Truncation data for `g` at every depth `0..=depth`, checking that each gap
/// is nonnegative and that gaps never increase.
pub fn truncation_series(
    inst: &MultispinalInstance,
    table: &PsiTable,
    g: Agent,
    depth: usize,
) -> Result<Vec<TruncationCheck>, MeasureError> {
    let psi = psi_value(table, g)?;
    let counts = fixed_count_table(inst, depth);
    let idx = inst.agent_index(g);
    let mut out: Vec<TruncationCheck> = Vec::with_capacity(depth + 1);
    for (n, row) in counts.iter().enumerate() {
        let count = row[idx].clone();
        let denom = num_traits::pow(BigUint::from(inst.alphabet_size()), n);
        let ratio = Rational::new(count.clone().into(), denom.into());
        let gap = &ratio - &psi;
        let violates = gap.is_negative() || out.last().is_some_and(|prev| gap > prev.gap);
        if violates {
            return Err(MeasureError::TruncationViolation { agent: g, depth: n });
        }
        out.push(TruncationCheck { agent: g, depth: n, count, ratio, psi: psi.clone(), gap });
    }
    Ok(out)
}

/// Truncation data for `g` at depth `n`, also checking the step to `n + 1`.
pub fn truncation_check(
    inst: &MultispinalInstance,
    table: &PsiTable,
    g: Agent,
    n: usize,
) -> Result<TruncationCheck, MeasureError> {
    let mut series = truncation_series(inst, table, g, n + 1)?;
    series.truncate(n + 1);
    Ok(series.pop().expect("depth n is present"))
}

/// `ψ` of every agent, handy for reports.
pub fn psi_of_agents(inst: &MultispinalInstance, table: &PsiTable) -> Vec<(Agent, Rational)> {
    inst.agents().iter().map(|&g| (g, psi_value(table, g).expect("instance agent"))).collect()
}
