//! The self-similar action as a finite-state transducer.
//!
//! The states ("agents") are the elements of `A ⊔ B` with the two identities
//! merged. Reading a letter `x`, an agent emits a letter and moves to its
//! restriction:
//!
//! ```text
//! a(xw) = x · Ψ(x)(a)(w)      a ∈ A
//! b(xw) = b(x) · w            b ∈ B
//! ```
//!
//! so an `A`-agent never moves the letter it reads, and a nontrivial
//! `B`-agent always does (the `B`-action is free).

use std::collections::{BTreeSet, HashSet, VecDeque};

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{LetterMap, MultispinalInstance};

/// A finite word over the alphabet, as letter indices.
pub type Word = Vec<usize>;

/// One state of the transducer.
///
/// Non-identity agents on different sides are never equal: an `A`-agent
/// fixes every first letter while a nontrivial `B`-agent fixes none.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Agent {
    Identity,
    /// A non-identity element of `A`.
    Aut(usize),
    /// A non-identity element of `B`.
    Perm(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ActionError {
    #[error("agents {0:?} and {1:?} lie on different sides; h⁻¹g is not an agent")]
    SideMismatch(Agent, Agent),
    #[error("an eventually periodic word needs a nonempty period")]
    EmptyPeriod,
}

/// The infinite word `preperiod · period^∞`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EventuallyPeriodicWord {
    preperiod: Word,
    period: Word,
}

impl EventuallyPeriodicWord {
    pub fn new(preperiod: Word, period: Word) -> Result<Self, ActionError> {
        if period.is_empty() {
            return Err(ActionError::EmptyPeriod);
        }
        Ok(EventuallyPeriodicWord { preperiod, period })
    }

    /// `period^∞`.
    pub fn periodic(period: Word) -> Result<Self, ActionError> {
        Self::new(Vec::new(), period)
    }

    pub fn preperiod(&self) -> &[usize] {
        &self.preperiod
    }

    pub fn period(&self) -> &[usize] {
        &self.period
    }

    pub fn letter(&self, i: usize) -> usize {
        if i < self.preperiod.len() {
            self.preperiod[i]
        } else {
            self.period[(i - self.preperiod.len()) % self.period.len()]
        }
    }

    /// The prefix `w^{(n)}` of length `n`.
    pub fn prefix(&self, n: usize) -> Word {
        (0..n).map(|i| self.letter(i)).collect()
    }
}

/// Outcome of comparing the germs `[g, w]` and `[h, w]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GermVerdict {
    /// `g` and `h` coincide on the cylinder of the prefix of this length.
    Equal(usize),
    /// `g(w)` and `h(w)` first differ at this position.
    DifferentImage(usize),
    /// `g(w) = h(w)` but `h⁻¹g` is nontrivial on every neighbourhood of `w`.
    DifferentGerm,
}

/// One transition: `g(x w) = y · g|_x(w)`.
pub fn step(inst: &MultispinalInstance, g: Agent, x: usize) -> (usize, Agent) {
    match g {
        Agent::Identity => (x, Agent::Identity),
        Agent::Aut(a) => {
            let next = match inst.psi(x) {
                LetterMap::Aut(h) => inst.aut_agent(h.apply(a)),
                LetterMap::Hom(h) => inst.perm_agent(h.apply(a)),
            };
            (x, next)
        }
        Agent::Perm(b) => (inst.action().act(b, x), Agent::Identity),
    }
}

/// `(g(u), g|_u)`.
pub fn apply_word(inst: &MultispinalInstance, g: Agent, u: &[usize]) -> (Word, Agent) {
    let mut cur = g;
    let image = u
        .iter()
        .map(|&x| {
            let (y, next) = step(inst, cur, x);
            cur = next;
            y
        })
        .collect();
    (image, cur)
}

/// Applies `g₁g₂⋯gₙ` to `u`, rightmost factor first. Returns the image and,
/// for each factor, its restriction at the word it was applied to, so the
/// restriction of the product is the product of the returned agents.
pub fn apply_product(inst: &MultispinalInstance, gs: &[Agent], u: &[usize]) -> (Word, Vec<Agent>) {
    let mut word = u.to_vec();
    let mut restrictions = vec![Agent::Identity; gs.len()];
    for (i, &g) in gs.iter().enumerate().rev() {
        let (image, r) = apply_word(inst, g, &word);
        word = image;
        restrictions[i] = r;
    }
    (word, restrictions)
}

/// `counts[n][agent_index(g)] = |{u ∈ Xⁿ : g(u) = u}|` for `n = 0..=depth`.
///
/// Dynamic programming over agents: `u = x·v` is fixed by `g` iff `g` fixes
/// `x` and `g|_x` fixes `v`.
pub fn fixed_count_table(inst: &MultispinalInstance, depth: usize) -> Vec<Vec<BigUint>> {
    let agents = inst.agents();
    let m = inst.alphabet_size();
    // For each agent, the restrictions at the letters it fixes.
    let transitions: Vec<Vec<usize>> = agents
        .iter()
        .map(|&g| {
            (0..m)
                .filter_map(|x| {
                    let (y, r) = step(inst, g, x);
                    (y == x).then(|| inst.agent_index(r))
                })
                .collect()
        })
        .collect();
    let mut table = vec![vec![BigUint::one(); agents.len()]];
    for n in 1..=depth {
        let prev = &table[n - 1];
        let row = transitions.iter().map(|ts| ts.iter().map(|&r| &prev[r]).sum()).collect();
        table.push(row);
    }
    table
}

/// `|{u ∈ Xⁿ : g(u) = u}|`.
pub fn fixed_count(inst: &MultispinalInstance, g: Agent, n: usize) -> BigUint {
    fixed_count_table(inst, n)[n][inst.agent_index(g)].clone()
}

/// `h⁻¹g` as an agent, when `g` and `h` lie on the same side.
pub fn relative(inst: &MultispinalInstance, g: Agent, h: Agent) -> Result<Agent, ActionError> {
    Ok(match (g, h) {
        (_, Agent::Identity) => g,
        (Agent::Identity, Agent::Aut(y)) => Agent::Aut(inst.group_a().inv(y)),
        (Agent::Identity, Agent::Perm(y)) => Agent::Perm(inst.group_b().inv(y)),
        (Agent::Aut(x), Agent::Aut(y)) => {
            let a = inst.group_a();
            inst.aut_agent(a.mul(a.inv(y), x))
        }
        (Agent::Perm(x), Agent::Perm(y)) => {
            let b = inst.group_b();
            inst.perm_agent(b.mul(b.inv(y), x))
        }
        _ => return Err(ActionError::SideMismatch(g, h)),
    })
}

/// Decides `[g, w] = [h, w]` by walking `k = h⁻¹g` along `w`.
///
/// The walk stops when `k` moves a letter, when the restriction becomes the
/// identity, or when a (restriction, period phase) state repeats. In the last
/// case the restriction stays a nontrivial agent forever, and a nontrivial
/// agent moves some point of every cylinder (faithfulness), so no
/// neighbourhood of `w` is fixed by `k`.
pub fn decide_germ(
    inst: &MultispinalInstance,
    g: Agent,
    h: Agent,
    w: &EventuallyPeriodicWord,
) -> Result<GermVerdict, ActionError> {
    let mut k = relative(inst, g, h)?;
    let mut seen = HashSet::new();
    let pre = w.preperiod().len();
    let mut pos = 0;
    loop {
        if k == Agent::Identity {
            return Ok(GermVerdict::Equal(pos));
        }
        if pos >= pre && !seen.insert((k, (pos - pre) % w.period().len())) {
            debug_assert!(
                moved_word(inst, k, 2 * inst.agents().len()).is_some(),
                "nontrivial agent {k:?} fixes every short word"
            );
            return Ok(GermVerdict::DifferentGerm);
        }
        let x = w.letter(pos);
        let (y, next) = step(inst, k, x);
        if y != x {
            return Ok(GermVerdict::DifferentImage(pos));
        }
        k = next;
        pos += 1;
    }
}

/// `g = h` on the cylinder `uX^ω`, i.e. `(h⁻¹g)(u) = u` and `(h⁻¹g)|_u = e`.
pub fn agrees_on_cylinder(inst: &MultispinalInstance, g: Agent, h: Agent, u: &[usize]) -> Result<bool, ActionError> {
    let k = relative(inst, g, h)?;
    let (image, r) = apply_word(inst, k, u);
    Ok(image == u && r == Agent::Identity)
}

/// A shortest word of length at most `max_len` moved by `g`, if any.
pub fn moved_word(inst: &MultispinalInstance, g: Agent, max_len: usize) -> Option<Word> {
    let mut visited = HashSet::from([g]);
    let mut queue = VecDeque::from([(g, Vec::new())]);
    while let Some((k, prefix)) = queue.pop_front() {
        if prefix.len() >= max_len {
            continue;
        }
        for x in 0..inst.alphabet_size() {
            let (y, r) = step(inst, k, x);
            let mut word = prefix.clone();
            word.push(x);
            if y != x {
                return Some(word);
            }
            if visited.insert(r) {
                queue.push_back((r, word));
            }
        }
    }
    None
}

/// The greatest set `S` of agents with `S = {g|_x : g ∈ S, x ∈ X}`: the
/// agents that occur as restrictions at arbitrarily large depth.
pub fn restriction_fixpoint(inst: &MultispinalInstance) -> BTreeSet<Agent> {
    let mut current: BTreeSet<Agent> = inst.agents().iter().copied().collect();
    loop {
        let next: BTreeSet<Agent> =
            current.iter().flat_map(|&g| (0..inst.alphabet_size()).map(move |x| step(inst, g, x).1)).collect();
        if next == current {
            return current;
        }
        current = next;
    }
}

/// Search bounds for [`find_nonhausdorff_witness`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessBounds {
    pub max_period: usize,
    /// Preperiods over `X \ Y` only move the starting agent inside `A \ {e}`,
    /// which the search already ranges over, so this bound never changes the
    /// outcome. It is kept so reports echo the requested bounds.
    pub max_preperiod: usize,
}

impl Default for WitnessBounds {
    fn default() -> Self {
        WitnessBounds { max_period: 3, max_preperiod: 4 }
    }
}

/// Evidence that the groupoid of germs is not Hausdorff.
///
/// With `w = period^∞`, the agent fixes `w` and has nontrivial germ there,
/// yet it is the identity on every cylinder `w^{(k)} y X^ω` where the phase
/// `k` satisfies `phases[k mod L] ∈ ker Ψ(y)`. Those cylinders accumulate at
/// `w`, so `[agent, w]` and `[e, w]` cannot be separated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub agent: Agent,
    pub period: Word,
    pub escape: usize,
    /// First depth `k` at which the restriction lies in `ker Ψ(escape)`.
    pub depth: usize,
    /// Restrictions `a₀ = agent, a_{k+1} = Ψ(v_k)(a_k)` over one full cycle.
    pub phases: Vec<Agent>,
}

/// Bounded search for a non-Hausdorffness witness.
///
/// Order: period length, then periods lexicographically by letter index,
/// then escape depth, then agent in declared order, then escape letter.
/// `None` means nothing was found within the bounds, not that the groupoid
/// is Hausdorff.
pub fn find_nonhausdorff_witness(inst: &MultispinalInstance, bounds: WitnessBounds) -> Option<Witness> {
    let a = inst.group_a();
    let aut_letters = inst.aut_letters();
    for len in 1..=bounds.max_period {
        for period in words_over(aut_letters, len).filter(|v| is_primitive(v)) {
            let mut best: Option<Witness> = None;
            for start in a.non_identity() {
                let phases = aut_cycle(inst, start, &period);
                let hit = phases.iter().enumerate().find_map(|(k, &ak)| {
                    inst.hom_letters()
                        .iter()
                        .find(|&&y| inst.psi(y).map().apply(ak) == inst.group_b().identity())
                        .map(|&y| (k, y))
                });
                if let Some((depth, escape)) = hit {
                    if best.as_ref().is_none_or(|b| depth < b.depth) {
                        best = Some(Witness {
                            agent: Agent::Aut(start),
                            period: period.clone(),
                            escape,
                            depth,
                            phases: phases.into_iter().map(Agent::Aut).collect(),
                        });
                    }
                }
            }
            if best.is_some() {
                return best;
            }
        }
    }
    None
}

/// The purely periodic orbit of `(a, 0)` under `(a, i) ↦ (Ψ(v_i)(a), i+1 mod |v|)`.
/// Automorphisms make this map a bijection, so the orbit returns to its start.
fn aut_cycle(inst: &MultispinalInstance, start: usize, period: &[usize]) -> Vec<usize> {
    let mut out = vec![start];
    let mut cur = start;
    let mut phase = 0;
    loop {
        cur = inst.psi(period[phase]).map().apply(cur);
        phase = (phase + 1) % period.len();
        if cur == start && phase == 0 {
            return out;
        }
        out.push(cur);
    }
}

fn words_over(letters: &[usize], len: usize) -> impl Iterator<Item = Word> + '_ {
    let total = letters.len().pow(len as u32);
    (0..total).map(move |mut i| {
        let mut w = vec![0; len];
        for slot in w.iter_mut().rev() {
            *slot = letters[i % letters.len()];
            i /= letters.len();
        }
        w
    })
}

fn is_primitive(w: &[usize]) -> bool {
    let n = w.len();
    (1..n).filter(|&d| n.is_multiple_of(d)).all(|d| (0..n).any(|i| w[i] != w[i % d]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn agent(inst: &MultispinalInstance, label: &str) -> Agent {
        inst.agent_by_label(label).unwrap()
    }

    #[test]
    fn steps_follow_the_grigorchuk_relations() {
        let g = fixtures::grigorchuk();
        // b(0w) = 0a(w)
        assert_eq!(step(&g, agent(&g, "b"), 0), (0, agent(&g, "a")));
        // a(0w) = 1w
        assert_eq!(step(&g, agent(&g, "a"), 0), (1, Agent::Identity));
        for x in 0..2 {
            assert_eq!(step(&g, Agent::Identity, x), (x, Agent::Identity));
        }
        // d(1w) = 1b(w)
        assert_eq!(apply_word(&g, agent(&g, "d"), &[1]), (vec![1], agent(&g, "b")));
    }

    #[test]
    fn words_and_products() {
        let g = fixtures::grigorchuk();
        assert_eq!(apply_word(&g, agent(&g, "b"), &[0, 1]), (vec![0, 0], Agent::Identity));
        assert_eq!(apply_word(&g, Agent::Identity, &[1, 0, 1]), (vec![1, 0, 1], Agent::Identity));
        assert_eq!(apply_product(&g, &[], &[1, 0]), (vec![1, 0], vec![]));
        let a = agent(&g, "a");
        assert_eq!(apply_product(&g, &[a, a], &[0, 1]), (vec![0, 1], vec![Agent::Identity, Agent::Identity]));
    }

    #[test]
    fn fixed_counts() {
        let g = fixtures::grigorchuk();
        assert_eq!(fixed_count(&g, agent(&g, "b"), 1), BigUint::from(2u32));
        assert_eq!(fixed_count(&g, Agent::Identity, 10), BigUint::from(1024u32));
        assert_eq!(fixed_count(&g, agent(&g, "a"), 5), BigUint::from(0u32));
        assert_eq!(fixed_count(&g, Agent::Identity, 70), BigUint::one() << 70);
    }

    #[test]
    fn germ_decisions() {
        let g = fixtures::grigorchuk();
        let d = agent(&g, "d");
        let ones = EventuallyPeriodicWord::periodic(vec![1]).unwrap();
        let zeros = EventuallyPeriodicWord::periodic(vec![0]).unwrap();
        assert_eq!(decide_germ(&g, d, Agent::Identity, &ones).unwrap(), GermVerdict::DifferentGerm);
        assert_eq!(decide_germ(&g, d, Agent::Identity, &zeros).unwrap(), GermVerdict::Equal(1));
        assert_eq!(decide_germ(&g, d, d, &ones).unwrap(), GermVerdict::Equal(0));
        let a = agent(&g, "a");
        assert_eq!(decide_germ(&g, a, Agent::Identity, &zeros).unwrap(), GermVerdict::DifferentImage(0));
        assert_eq!(decide_germ(&g, a, d, &zeros), Err(ActionError::SideMismatch(a, d)));
    }

    #[test]
    fn cylinder_agreement() {
        let g = fixtures::grigorchuk();
        let d = agent(&g, "d");
        assert!(agrees_on_cylinder(&g, d, Agent::Identity, &[1, 1, 1, 0]).unwrap());
        assert!(!agrees_on_cylinder(&g, d, Agent::Identity, &[1, 1]).unwrap());
        assert!(agrees_on_cylinder(&g, d, d, &[1]).unwrap());
        // d·b = c: c = b on 1X^ω? c|_1 = d, b|_1 = c; b⁻¹c = d, d|_1 = b ≠ e.
        assert!(!agrees_on_cylinder(&g, agent(&g, "c"), agent(&g, "b"), &[1]).unwrap());
        assert!(agrees_on_cylinder(&g, agent(&g, "c"), agent(&g, "b"), &[0]).unwrap());
    }

    #[test]
    fn grigorchuk_witness() {
        let g = fixtures::grigorchuk();
        let w = find_nonhausdorff_witness(&g, WitnessBounds::default()).unwrap();
        assert_eq!(w.agent, agent(&g, "d"));
        assert_eq!(w.period, vec![1]);
        assert_eq!(w.escape, 0);
        assert_eq!(w.depth, 0);
        let phases: Vec<&str> = w.phases.iter().map(|&p| g.agent_label(p)).collect();
        assert_eq!(phases, ["d", "b", "c"]);
    }

    #[test]
    fn moved_words() {
        let g = fixtures::grigorchuk();
        assert_eq!(moved_word(&g, agent(&g, "a"), 1), Some(vec![0]));
        // b(01) = 00? no: b|_0 = a moves the second letter.
        assert_eq!(moved_word(&g, agent(&g, "b"), 4), Some(vec![0, 0]));
        assert_eq!(moved_word(&g, Agent::Identity, 6), None);
    }

    #[test]
    fn primitive_periods() {
        assert!(is_primitive(&[1]));
        assert!(is_primitive(&[0, 1]));
        assert!(!is_primitive(&[1, 1]));
        assert!(!is_primitive(&[0, 1, 0, 1]));
        let ws: Vec<Word> = words_over(&[2, 5], 2).collect();
        assert_eq!(ws, vec![vec![2, 2], vec![2, 5], vec![5, 2], vec![5, 5]]);
    }
}
