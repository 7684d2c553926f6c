//! Finite groups given extensionally by Cayley tables.
//!
//! Element indices are the computational identity of an element; labels only
//! appear in reports. The declared element order of a group is kept as-is and
//! becomes the row/column order of every matrix built over it.

use std::collections::VecDeque;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Which group axiom failed during [`FiniteGroup::validate`], with a witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupAxiom {
    Empty,
    DuplicateLabel(String),
    NotSquare { row: usize, len: usize },
    EntryOutOfRange { row: usize, col: usize, value: usize },
    RepeatedInRow { row: usize, value: usize },
    RepeatedInColumn { col: usize, value: usize },
    NoIdentity,
    NotAssociative { x: usize, y: usize, z: usize },
}

impl fmt::Display for GroupAxiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupAxiom::Empty => write!(f, "the element list is empty"),
            GroupAxiom::DuplicateLabel(l) => write!(f, "label {l:?} is declared twice"),
            GroupAxiom::NotSquare { row, len } => {
                write!(f, "row {row} has {len} entries (table must be square)")
            }
            GroupAxiom::EntryOutOfRange { row, col, value } => {
                write!(f, "entry ({row}, {col}) = {value} is not an element index")
            }
            GroupAxiom::RepeatedInRow { row, value } => {
                write!(f, "Latin square fails: {value} repeats in row {row}")
            }
            GroupAxiom::RepeatedInColumn { col, value } => {
                write!(f, "Latin square fails: {value} repeats in column {col}")
            }
            GroupAxiom::NoIdentity => write!(f, "no two-sided identity element"),
            GroupAxiom::NotAssociative { x, y, z } => {
                write!(f, "associativity fails for ({x}, {y}, {z})")
            }
        }
    }
}

/// Why a family of permutations is not a group action.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ActionDefect {
    EmptyAlphabet,
    DuplicateLetter(String),
    WrongCount { expected: usize, found: usize },
    NotAPermutation { element: usize },
    IdentityMoves { letter: usize },
    NotMultiplicative { g: usize, h: usize },
}

impl fmt::Display for ActionDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ActionDefect::EmptyAlphabet => write!(f, "the alphabet is empty"),
            ActionDefect::DuplicateLetter(l) => write!(f, "letter {l:?} is declared twice"),
            ActionDefect::WrongCount { expected, found } => {
                write!(f, "expected {expected} permutations, found {found}")
            }
            ActionDefect::NotAPermutation { element } => {
                write!(f, "the map of element {element} is not a permutation of the alphabet")
            }
            ActionDefect::IdentityMoves { letter } => {
                write!(f, "the identity moves letter {letter}")
            }
            ActionDefect::NotMultiplicative { g, h } => {
                write!(f, "(g·h)(x) ≠ g(h(x)) for g = {g}, h = {h}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("not a group: {0}")]
    NotAGroup(GroupAxiom),
    #[error("not a homomorphism: the map is not multiplicative at ({x}, {y})")]
    NotAHomomorphism { x: usize, y: usize },
    #[error("map has length {found}, expected {expected}")]
    MapLength { expected: usize, found: usize },
    #[error("map sends {index} to {value}, which is not an element of the target")]
    MapOutOfRange { index: usize, value: usize },
    #[error("cannot compose: the inner map does not land in the source of the outer map")]
    DomainMismatch,
    #[error("not an action: {0}")]
    NotAnAction(ActionDefect),
    #[error("action is not free: element {element} fixes letter {letter}")]
    NotFree { element: usize, letter: usize },
}

/// A finite group stored as a Cayley table over element indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    labels: Vec<String>,
    /// Row-major `n × n`; `table[i * n + j]` is the index of `gᵢ·gⱼ`.
    table: Vec<usize>,
    identity: usize,
    inverse: Vec<usize>,
}

impl FiniteGroup {
    /// Checks every group axiom and returns the group with its declared order.
    pub fn validate(labels: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self, GroupError> {
        let bad = |axiom| Err(GroupError::NotAGroup(axiom));
        let n = labels.len();
        if n == 0 {
            return bad(GroupAxiom::Empty);
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return bad(GroupAxiom::DuplicateLabel(l.clone()));
            }
        }
        if table.len() != n {
            return bad(GroupAxiom::NotSquare { row: table.len().min(n), len: table.len() });
        }
        let mut flat = Vec::with_capacity(n * n);
        for (row, entries) in table.iter().enumerate() {
            if entries.len() != n {
                return bad(GroupAxiom::NotSquare { row, len: entries.len() });
            }
            for (col, &value) in entries.iter().enumerate() {
                if value >= n {
                    return bad(GroupAxiom::EntryOutOfRange { row, col, value });
                }
            }
            flat.extend_from_slice(entries);
        }

        let mut seen = vec![usize::MAX; n];
        for row in 0..n {
            for col in 0..n {
                let v = flat[row * n + col];
                if seen[v] == row {
                    return bad(GroupAxiom::RepeatedInRow { row, value: v });
                }
                seen[v] = row;
            }
        }
        seen.fill(usize::MAX);
        for col in 0..n {
            for row in 0..n {
                let v = flat[row * n + col];
                if seen[v] == col {
                    return bad(GroupAxiom::RepeatedInColumn { col, value: v });
                }
                seen[v] = col;
            }
        }

        let Some(identity) = (0..n).find(|&e| (0..n).all(|g| flat[e * n + g] == g && flat[g * n + e] == g)) else {
            return bad(GroupAxiom::NoIdentity);
        };

        for x in 0..n {
            for y in 0..n {
                let xy = flat[x * n + y];
                for z in 0..n {
                    if flat[xy * n + z] != flat[x * n + flat[y * n + z]] {
                        return bad(GroupAxiom::NotAssociative { x, y, z });
                    }
                }
            }
        }

        // Latin rows guarantee a right inverse; associativity makes it two-sided.
        let inverse = (0..n).map(|g| (0..n).find(|&h| flat[g * n + h] == identity).expect("Latin row")).collect();

        Ok(FiniteGroup { labels, table: flat, identity, inverse })
    }

    /// The cyclic group `ℤ_n` with elements `0..n` labelled by their residues.
    pub fn cyclic(n: usize) -> Result<Self, GroupError> {
        Self::cyclic_product(&[n])
    }

    /// The direct product `ℤ_{n₁} × ⋯ × ℤ_{n_k}`.
    ///
    /// Elements are listed lexicographically with the first component most
    /// significant. A single factor is labelled `"3"`, several factors are
    /// labelled component-wise, e.g. `"(1,0)"`.
    pub fn cyclic_product(orders: &[usize]) -> Result<Self, GroupError> {
        if orders.is_empty() || orders.contains(&0) {
            return Err(GroupError::NotAGroup(GroupAxiom::Empty));
        }
        let n: usize = orders.iter().product();
        let digits = |mut i: usize| {
            let mut d = vec![0; orders.len()];
            for k in (0..orders.len()).rev() {
                d[k] = i % orders[k];
                i /= orders[k];
            }
            d
        };
        let index = |d: &[usize]| d.iter().zip(orders).fold(0, |acc, (x, m)| acc * m + x);
        let labels = (0..n)
            .map(|i| {
                let d = digits(i);
                if d.len() == 1 {
                    d[0].to_string()
                } else {
                    let parts: Vec<String> = d.iter().map(|x| x.to_string()).collect();
                    format!("({})", parts.join(","))
                }
            })
            .collect();
        let table = (0..n)
            .map(|i| {
                let di = digits(i);
                (0..n)
                    .map(|j| {
                        let dj = digits(j);
                        let sum: Vec<usize> = (0..orders.len()).map(|k| (di[k] + dj[k]) % orders[k]).collect();
                        index(&sum)
                    })
                    .collect()
            })
            .collect();
        Self::validate(labels, table)
    }

    pub fn order(&self) -> usize {
        self.labels.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.table[x * self.order() + y]
    }

    #[inline]
    pub fn inv(&self, x: usize) -> usize {
        self.inverse[x]
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// The Cayley table as nested rows, in declared order.
    pub fn table(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.order()).map(|r| r.to_vec()).collect()
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order()
    }

    pub fn non_identity(&self) -> impl Iterator<Item = usize> + '_ {
        self.elements().filter(move |&g| g != self.identity)
    }

    pub fn element_order(&self, x: usize) -> usize {
        let mut k = 1;
        let mut p = x;
        while p != self.identity {
            p = self.mul(p, x);
            k += 1;
        }
        k
    }

    /// A generating set chosen greedily in declared order.
    pub fn generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = vec![false; self.order()];
        span[self.identity] = true;
        for g in self.elements() {
            if span[g] {
                continue;
            }
            gens.push(g);
            // Regenerate the subgroup spanned by `gens`.
            let mut queue = VecDeque::from([self.identity]);
            span.fill(false);
            span[self.identity] = true;
            while let Some(x) = queue.pop_front() {
                for &s in &gens {
                    let y = self.mul(x, s);
                    if !span[y] {
                        span[y] = true;
                        queue.push_back(y);
                    }
                }
            }
        }
        gens
    }
}

/// Compares groups by pointer first, falling back to structural equality.
fn same_group(a: &Arc<FiniteGroup>, b: &Arc<FiniteGroup>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// A homomorphism between finite groups, verified at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Homomorphism {
    source: Arc<FiniteGroup>,
    target: Arc<FiniteGroup>,
    map: Vec<usize>,
}

impl Homomorphism {
    pub fn new(source: &Arc<FiniteGroup>, target: &Arc<FiniteGroup>, map: Vec<usize>) -> Result<Self, GroupError> {
        if map.len() != source.order() {
            return Err(GroupError::MapLength { expected: source.order(), found: map.len() });
        }
        if let Some((index, &value)) = map.iter().enumerate().find(|(_, &v)| v >= target.order()) {
            return Err(GroupError::MapOutOfRange { index, value });
        }
        if map[source.identity()] != target.identity() {
            let e = source.identity();
            return Err(GroupError::NotAHomomorphism { x: e, y: e });
        }
        for x in source.elements() {
            for y in source.elements() {
                if map[source.mul(x, y)] != target.mul(map[x], map[y]) {
                    return Err(GroupError::NotAHomomorphism { x, y });
                }
            }
        }
        Ok(Homomorphism { source: Arc::clone(source), target: Arc::clone(target), map })
    }

    pub fn identity(group: &Arc<FiniteGroup>) -> Self {
        Homomorphism { source: Arc::clone(group), target: Arc::clone(group), map: group.elements().collect() }
    }

    /// The map sending everything to the identity of `target`.
    pub fn trivial(source: &Arc<FiniteGroup>, target: &Arc<FiniteGroup>) -> Self {
        Homomorphism {
            source: Arc::clone(source),
            target: Arc::clone(target),
            map: vec![target.identity(); source.order()],
        }
    }

    pub fn source(&self) -> &Arc<FiniteGroup> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteGroup> {
        &self.target
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    /// True iff source and target coincide and the map is a bijection.
    pub fn is_automorphism(&self) -> bool {
        if !same_group(&self.source, &self.target) {
            return false;
        }
        let mut hit = vec![false; self.target.order()];
        self.map.iter().all(|&y| !std::mem::replace(&mut hit[y], true))
    }

    /// `self ∘ inner`: apply `inner` first.
    pub fn compose(&self, inner: &Homomorphism) -> Result<Homomorphism, GroupError> {
        if !same_group(&inner.target, &self.source) {
            return Err(GroupError::DomainMismatch);
        }
        Ok(Homomorphism {
            source: Arc::clone(&inner.source),
            target: Arc::clone(&self.target),
            map: inner.map.iter().map(|&x| self.map[x]).collect(),
        })
    }

    /// Element indices `a` with `self(a) = 1`, in declared order.
    pub fn kernel(&self) -> Vec<usize> {
        let e = self.target.identity();
        let ker: Vec<usize> = self.source.elements().filter(|&a| self.map[a] == e).collect();
        debug_assert!(ker.iter().all(|&x| {
            ker.contains(&self.source.inv(x)) && ker.iter().all(|&y| ker.contains(&self.source.mul(x, y)))
        }));
        ker
    }

    /// The image as a sorted, deduplicated list of target indices.
    pub fn image(&self) -> Vec<usize> {
        let mut img = self.map.clone();
        img.sort_unstable();
        img.dedup();
        img
    }
}

/// Every homomorphism `source → target`, in lexicographic order of the images
/// of `source.generators()`.
pub fn homomorphisms(source: &Arc<FiniteGroup>, target: &Arc<FiniteGroup>) -> Vec<Homomorphism> {
    let gens = source.generators();
    // Only images whose order divides the generator's order can extend.
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .map(|&g| {
            let k = source.element_order(g);
            target.elements().filter(|&t| k.is_multiple_of(target.element_order(t))).collect()
        })
        .collect();

    let mut out = Vec::new();
    let mut choice = vec![0usize; gens.len()];
    'outer: loop {
        let images: Vec<usize> = choice.iter().zip(&candidates).map(|(&c, cs)| cs[c]).collect();
        if let Some(map) = extend_from_generators(source, target, &gens, &images) {
            if let Ok(h) = Homomorphism::new(source, target, map) {
                out.push(h);
            }
        }
        for k in (0..choice.len()).rev() {
            choice[k] += 1;
            if choice[k] < candidates[k].len() {
                continue 'outer;
            }
            choice[k] = 0;
        }
        break;
    }
    out
}

/// Every automorphism of `group`.
pub fn automorphisms(group: &Arc<FiniteGroup>) -> Vec<Homomorphism> {
    homomorphisms(group, group).into_iter().filter(Homomorphism::is_automorphism).collect()
}

fn extend_from_generators(
    source: &FiniteGroup,
    target: &FiniteGroup,
    gens: &[usize],
    images: &[usize],
) -> Option<Vec<usize>> {
    let mut map = vec![usize::MAX; source.order()];
    map[source.identity()] = target.identity();
    let mut queue = VecDeque::from([source.identity()]);
    while let Some(x) = queue.pop_front() {
        for (&s, &t) in gens.iter().zip(images) {
            let y = source.mul(x, s);
            let v = target.mul(map[x], t);
            if map[y] == usize::MAX {
                map[y] = v;
                queue.push_back(y);
            } else if map[y] != v {
                return None;
            }
        }
    }
    Some(map)
}

/// A verified free action of a finite group on an ordered alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteAction {
    group: Arc<FiniteGroup>,
    alphabet: Vec<String>,
    /// `perms[g][x]` is the index of `g(x)`.
    perms: Vec<Vec<usize>>,
    transitive: bool,
}

impl FiniteAction {
    /// Checks that `perms` is a left action (`(gh)(x) = g(h(x))`) and that it is free.
    pub fn validate(
        group: &Arc<FiniteGroup>,
        alphabet: Vec<String>,
        perms: Vec<Vec<usize>>,
    ) -> Result<Self, GroupError> {
        let defect = |d| Err(GroupError::NotAnAction(d));
        let m = alphabet.len();
        if m == 0 {
            return defect(ActionDefect::EmptyAlphabet);
        }
        for (i, l) in alphabet.iter().enumerate() {
            if alphabet[..i].contains(l) {
                return defect(ActionDefect::DuplicateLetter(l.clone()));
            }
        }
        if perms.len() != group.order() {
            return defect(ActionDefect::WrongCount { expected: group.order(), found: perms.len() });
        }
        for (element, p) in perms.iter().enumerate() {
            let mut hit = vec![false; m];
            let ok = p.len() == m && p.iter().all(|&y| y < m && !std::mem::replace(&mut hit[y], true));
            if !ok {
                return defect(ActionDefect::NotAPermutation { element });
            }
        }
        if let Some(letter) = (0..m).find(|&x| perms[group.identity()][x] != x) {
            return defect(ActionDefect::IdentityMoves { letter });
        }
        for g in group.elements() {
            for h in group.elements() {
                let gh = group.mul(g, h);
                if (0..m).any(|x| perms[gh][x] != perms[g][perms[h][x]]) {
                    return defect(ActionDefect::NotMultiplicative { g, h });
                }
            }
        }
        for element in group.non_identity() {
            if let Some(letter) = (0..m).find(|&x| perms[element][x] == x) {
                return Err(GroupError::NotFree { element, letter });
            }
        }
        let transitive = (0..m).all(|x| perms.iter().any(|p| p[0] == x));
        Ok(FiniteAction { group: Arc::clone(group), alphabet, perms, transitive })
    }

    /// Left translation of a group on its own elements, with the element
    /// labels as letters.
    pub fn left_translation(group: &Arc<FiniteGroup>) -> Self {
        let perms = group.elements().map(|g| group.elements().map(|x| group.mul(g, x)).collect()).collect();
        Self::validate(group, group.labels().to_vec(), perms).expect("left translation is a free action")
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    #[inline]
    pub fn act(&self, g: usize, x: usize) -> usize {
        self.perms[g][x]
    }

    pub fn perms(&self) -> &[Vec<usize>] {
        &self.perms
    }

    pub fn is_transitive(&self) -> bool {
        self.transitive
    }
}
