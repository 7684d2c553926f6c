//! Validated multispinal instances `G(A, B, Ψ)`.
//!
//! An instance bundles a finite group `A`, a finite group `B` acting freely
//! on the alphabet `X`, and a letter map `Ψ` sending each letter either to an
//! automorphism of `A` or to a homomorphism `A → B`. Letters of the second
//! kind form the set `Y`.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::action::{self, Agent, Word};
use crate::group::{FiniteAction, FiniteGroup, GroupError, Homomorphism};

/// `Ψ(x)`: either an automorphism of `A` or a homomorphism `A → B`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LetterMap {
    Aut(Homomorphism),
    Hom(Homomorphism),
}

impl LetterMap {
    pub fn map(&self) -> &Homomorphism {
        match self {
            LetterMap::Aut(h) | LetterMap::Hom(h) => h,
        }
    }

    pub fn is_hom(&self) -> bool {
        matches!(self, LetterMap::Hom(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("every letter maps into Hom(A, B); at least one automorphism letter is required")]
    EmptyAutPart,
    #[error("every letter maps into Aut(A); at least one homomorphism letter is required")]
    EmptyHomPart,
    #[error("the homomorphisms in ℬ·𝒜 have common kernel {{{}}}, expected only the identity", .common_kernel.join(", "))]
    NotFaithful { common_kernel: Vec<String> },
    #[error("Ψ has {found} entries for an alphabet of {expected} letters")]
    PsiLength { expected: usize, found: usize },
    #[error("the action is by a group other than B")]
    ActionGroupMismatch,
    #[error("Ψ({letter}) is tagged as an automorphism but is not a bijection A → A")]
    NotAnAutomorphism { letter: String },
    #[error("Ψ({letter}) is tagged as a homomorphism but does not map A → B")]
    WrongSignature { letter: String },
    #[error("unknown letter {0:?}")]
    UnknownLetter(String),
}

/// Sufficient condition for amenability of the groupoid of germs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Amenability {
    Established,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultispinalInstance {
    name: String,
    a: Arc<FiniteGroup>,
    b: Arc<FiniteGroup>,
    action: FiniteAction,
    psi: Vec<LetterMap>,
    hom_letters: Vec<usize>,
    aut_letters: Vec<usize>,
    ba: Vec<Homomorphism>,
    agents: Vec<Agent>,
    nucleus: Vec<Agent>,
}

impl MultispinalInstance {
    /// Validates the standing assumptions and caches `Y`, `ℬ·𝒜` and the nucleus.
    pub fn build(
        a: Arc<FiniteGroup>,
        b: Arc<FiniteGroup>,
        action: FiniteAction,
        psi: Vec<LetterMap>,
    ) -> Result<Self, ModelError> {
        let alphabet = action.alphabet();
        if psi.len() != alphabet.len() {
            return Err(ModelError::PsiLength { expected: alphabet.len(), found: psi.len() });
        }
        if **action.group() != *b {
            return Err(ModelError::ActionGroupMismatch);
        }
        for (x, m) in psi.iter().enumerate() {
            let letter = || alphabet[x].clone();
            match m {
                LetterMap::Aut(h) => {
                    if **h.source() != *a || **h.target() != *a || !h.is_automorphism() {
                        return Err(ModelError::NotAnAutomorphism { letter: letter() });
                    }
                }
                LetterMap::Hom(h) => {
                    if **h.source() != *a || **h.target() != *b {
                        return Err(ModelError::WrongSignature { letter: letter() });
                    }
                }
            }
        }
        let hom_letters: Vec<usize> = (0..psi.len()).filter(|&x| psi[x].is_hom()).collect();
        let aut_letters: Vec<usize> = (0..psi.len()).filter(|&x| !psi[x].is_hom()).collect();
        if hom_letters.is_empty() {
            return Err(ModelError::EmptyHomPart);
        }
        if aut_letters.is_empty() {
            return Err(ModelError::EmptyAutPart);
        }

        let homs: Vec<Homomorphism> = hom_letters.iter().map(|&y| psi[y].map().clone()).collect();
        let auts: Vec<Homomorphism> = aut_letters.iter().map(|&x| psi[x].map().clone()).collect();
        let ba = closure_ba(&homs, &auts);

        let common_kernel: Vec<usize> =
            a.elements().filter(|&g| ba.iter().all(|l| l.apply(g) == b.identity())).collect();
        if common_kernel.len() > 1 {
            return Err(ModelError::NotFaithful {
                common_kernel: common_kernel.iter().map(|&g| a.label(g).to_string()).collect(),
            });
        }

        let agents = std::iter::once(Agent::Identity)
            .chain(a.non_identity().map(Agent::Aut))
            .chain(b.non_identity().map(Agent::Perm))
            .collect();

        let mut inst = MultispinalInstance {
            name: String::new(),
            a,
            b,
            action,
            psi,
            hom_letters,
            aut_letters,
            ba,
            agents,
            nucleus: Vec::new(),
        };
        inst.nucleus = inst.nucleus_by_formula();
        let fixpoint: Vec<Agent> = action::restriction_fixpoint(&inst).into_iter().collect();
        assert_eq!(inst.nucleus, fixpoint, "nucleus formula disagrees with the restriction fixpoint");
        Ok(inst)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn group_a(&self) -> &Arc<FiniteGroup> {
        &self.a
    }

    pub fn group_b(&self) -> &Arc<FiniteGroup> {
        &self.b
    }

    pub fn action(&self) -> &FiniteAction {
        &self.action
    }

    pub fn alphabet(&self) -> &[String] {
        self.action.alphabet()
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet().len()
    }

    pub fn psi(&self, x: usize) -> &LetterMap {
        &self.psi[x]
    }

    pub fn psi_maps(&self) -> &[LetterMap] {
        &self.psi
    }

    /// The letters `Y` where `Ψ` lands in `Hom(A, B)`, in alphabet order.
    pub fn hom_letters(&self) -> &[usize] {
        &self.hom_letters
    }

    /// The letters `X \ Y`.
    pub fn aut_letters(&self) -> &[usize] {
        &self.aut_letters
    }

    pub fn is_hom_letter(&self, x: usize) -> bool {
        self.psi[x].is_hom()
    }

    /// The set `ℬ·𝒜`, in discovery order.
    pub fn ba(&self) -> &[Homomorphism] {
        &self.ba
    }

    /// Every agent: the identity, then `A \ {e}`, then `B \ {e}`.
    pub fn agents(&self) -> &[Agent] {
        &self.agents
    }

    pub fn agent_index(&self, g: Agent) -> usize {
        match g {
            Agent::Identity => 0,
            Agent::Aut(a) => a + (a < self.a.identity()) as usize,
            Agent::Perm(b) => self.a.order() + b - (b > self.b.identity()) as usize,
        }
    }

    /// The nucleus `A ∪ ⋃_{y ∈ Y} Ψ(y)(A)` as sorted agents.
    pub fn nucleus(&self) -> &[Agent] {
        &self.nucleus
    }

    fn nucleus_by_formula(&self) -> Vec<Agent> {
        let mut set: BTreeSet<Agent> = self.a.elements().map(|g| self.aut_agent(g)).collect();
        for &y in &self.hom_letters {
            set.extend(self.psi[y].map().image().into_iter().map(|g| self.perm_agent(g)));
        }
        set.into_iter().collect()
    }

    /// The agent of `a ∈ A`, unifying `1_A` with the identity agent.
    pub fn aut_agent(&self, a: usize) -> Agent {
        if a == self.a.identity() {
            Agent::Identity
        } else {
            Agent::Aut(a)
        }
    }

    /// The agent of `b ∈ B`, unifying `1_B` with the identity agent.
    pub fn perm_agent(&self, b: usize) -> Agent {
        if b == self.b.identity() {
            Agent::Identity
        } else {
            Agent::Perm(b)
        }
    }

    pub fn agent_label(&self, g: Agent) -> &str {
        match g {
            Agent::Identity => self.a.label(self.a.identity()),
            Agent::Aut(a) => self.a.label(a),
            Agent::Perm(b) => self.b.label(b),
        }
    }

    /// Looks an agent up by label, trying `A` before `B`.
    pub fn agent_by_label(&self, label: &str) -> Option<Agent> {
        if let Some(a) = self.a.index_of(label) {
            return Some(self.aut_agent(a));
        }
        self.b.index_of(label).map(|b| self.perm_agent(b))
    }

    pub fn letter_index(&self, letter: &str) -> Option<usize> {
        self.alphabet().iter().position(|l| l == letter)
    }

    fn single_char_letters(&self) -> bool {
        self.alphabet().iter().all(|l| l.chars().count() == 1)
    }

    /// Parses a finite word. With single-character letters the word is read
    /// character by character; otherwise letters are separated by commas or
    /// whitespace.
    pub fn parse_word(&self, text: &str) -> Result<Word, ModelError> {
        let lookup = |s: &str| self.letter_index(s).ok_or_else(|| ModelError::UnknownLetter(s.to_string()));
        if self.single_char_letters() && !text.contains([',', ' ']) {
            text.chars().map(|c| lookup(&c.to_string())).collect()
        } else {
            text.split([',', ' ']).filter(|s| !s.is_empty()).map(lookup).collect()
        }
    }

    pub fn format_word(&self, word: &[usize]) -> String {
        let letters: Vec<&str> = word.iter().map(|&x| self.alphabet()[x].as_str()).collect();
        letters.join(if self.single_char_letters() { "" } else { "," })
    }
}

/// The fixpoint `ℬ·𝒜`: start from the distinct members of `homs`, then keep
/// right-composing with every member of `auts` until no new map appears.
/// Maps are compared extensionally.
pub fn closure_ba(homs: &[Homomorphism], auts: &[Homomorphism]) -> Vec<Homomorphism> {
    let mut seen = BTreeSet::new();
    let mut out: Vec<Homomorphism> = Vec::new();
    for h in homs {
        if seen.insert(h.map().to_vec()) {
            out.push(h.clone());
        }
    }
    let mut frontier = 0;
    while frontier < out.len() {
        let lambda = out[frontier].clone();
        for alpha in auts {
            let next = lambda.compose(alpha).expect("𝒜 consists of maps A → A");
            if seen.insert(next.map().to_vec()) {
                out.push(next);
            }
        }
        frontier += 1;
    }
    out
}

/// `Established` when `B` acts transitively on `X` and the images `Ψ(y)(A)`
/// cover `B`: the group is then self-replicating with nucleus `A ∪ B`, and
/// contracting self-replicating groups have amenable groupoids of germs.
pub fn amenability_sufficient(inst: &MultispinalInstance) -> Amenability {
    let b = inst.group_b();
    let mut covered = vec![false; b.order()];
    for &y in inst.hom_letters() {
        for g in inst.psi(y).map().image() {
            covered[g] = true;
        }
    }
    if inst.action().is_transitive() && covered.iter().all(|&c| c) {
        Amenability::Established
    } else {
        Amenability::Unknown
    }
}
