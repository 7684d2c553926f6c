//! Seeded random multispinal instances with `|A| ≤ 16`, `|B| ≤ 4`, `|X| ≤ 4`.
//!
//! With `|B| ≤ 4` the group `B` is abelian, so faithfulness forces `A` to
//! embed in a power of `B`; the catalogue below only pairs groups for which
//! that is possible. `X` is a disjoint union of regular `B`-orbits.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::group::{automorphisms, homomorphisms, FiniteAction, FiniteGroup, Homomorphism};
use crate::model::{LetterMap, MultispinalInstance};

/// `(B, A, number of B-orbits in X)`, all as cyclic-product orders.
const SHAPES: &[(&[usize], &[usize], usize)] = &[
    (&[2], &[2], 1),
    (&[2], &[2, 2], 1),
    (&[2], &[2, 2], 2),
    (&[2], &[2, 2, 2], 1),
    (&[2], &[2, 2, 2], 2),
    (&[2], &[2, 2, 2, 2], 1),
    (&[2], &[2, 2, 2, 2], 2),
    (&[3], &[3], 1),
    (&[3], &[3, 3], 1),
    (&[4], &[2], 1),
    (&[4], &[4], 1),
    (&[4], &[2, 2], 1),
    (&[4], &[2, 4], 1),
    (&[4], &[4, 4], 1),
    (&[4], &[2, 2, 4], 1),
    (&[2, 2], &[2, 2], 1),
    (&[2, 2], &[2, 2, 2], 1),
    (&[2, 2], &[2, 2, 2, 2], 1),
];

const ATTEMPTS_PER_SHAPE: usize = 200;

/// Groups and their maps for one `(A, B)` pair of the catalogue.
struct ShapeData {
    a: Arc<FiniteGroup>,
    b: Arc<FiniteGroup>,
    auts: Arc<Vec<Homomorphism>>,
    homs: Arc<Vec<Homomorphism>>,
}

type ShapeCache = HashMap<(Vec<usize>, Vec<usize>), Arc<ShapeData>>;

/// Enumerating `Aut(ℤ₂⁴)` dominates generation, so shape data is shared by
/// every generator in the process. Contents depend only on the key, so
/// sharing cannot affect reproducibility.
fn shape_data(b_orders: &[usize], a_orders: &[usize]) -> Arc<ShapeData> {
    static CACHE: OnceLock<Mutex<ShapeCache>> = OnceLock::new();
    let key = (b_orders.to_vec(), a_orders.to_vec());
    if let Some(hit) = CACHE.get_or_init(Default::default).lock().expect("cache lock").get(&key) {
        return Arc::clone(hit);
    }
    let a = Arc::new(FiniteGroup::cyclic_product(a_orders).expect("valid orders"));
    let b = Arc::new(FiniteGroup::cyclic_product(b_orders).expect("valid orders"));
    let data = Arc::new(ShapeData { auts: Arc::new(automorphisms(&a)), homs: Arc::new(homomorphisms(&a, &b)), a, b });
    let mut cache = CACHE.get_or_init(Default::default).lock().expect("cache lock");
    Arc::clone(cache.entry(key).or_insert(data))
}

/// An endless, reproducible stream of valid instances.
pub struct RandomInstances {
    rng: ChaCha8Rng,
    seed: u64,
    produced: usize,
}

impl RandomInstances {
    pub fn new(seed: u64) -> Self {
        RandomInstances { rng: ChaCha8Rng::seed_from_u64(seed), seed, produced: 0 }
    }

    fn try_shape(&mut self, b_orders: &[usize], a_orders: &[usize], orbits: usize) -> Option<MultispinalInstance> {
        let data = shape_data(b_orders, a_orders);
        let (a, b, auts, homs) = (&data.a, &data.b, &data.auts, &data.homs);

        let nb = b.order();
        let m = nb * orbits;
        let alphabet: Vec<String> = (0..m).map(|i| i.to_string()).collect();
        let perms = b.elements().map(|g| (0..m).map(|x| (x / nb) * nb + b.mul(g, x % nb)).collect()).collect();
        let action = FiniteAction::validate(b, alphabet, perms).expect("regular orbits are free");

        for _ in 0..ATTEMPTS_PER_SHAPE {
            let hom_count = self.rng.gen_range(1..m);
            let mut letters: Vec<usize> = (0..m).collect();
            letters.shuffle(&mut self.rng);
            let mut is_hom = vec![false; m];
            for &y in &letters[..hom_count] {
                is_hom[y] = true;
            }
            let psi = is_hom
                .iter()
                .map(|&h| {
                    if h {
                        LetterMap::Hom(homs.choose(&mut self.rng).expect("trivial map exists").clone())
                    } else {
                        LetterMap::Aut(auts.choose(&mut self.rng).expect("identity exists").clone())
                    }
                })
                .collect();
            if let Ok(inst) = MultispinalInstance::build(Arc::clone(a), Arc::clone(b), action.clone(), psi) {
                return Some(inst);
            }
        }
        None
    }
}

impl Iterator for RandomInstances {
    type Item = MultispinalInstance;

    fn next(&mut self) -> Option<MultispinalInstance> {
        loop {
            let &(b, a, orbits) = SHAPES.choose(&mut self.rng).expect("nonempty catalogue");
            if let Some(inst) = self.try_shape(b, a, orbits) {
                let name = format!("random-{}-{}", self.seed, self.produced);
                self.produced += 1;
                return Some(inst.with_name(name));
            }
        }
    }
}

/// The first `count` instances of the stream for `seed`.
pub fn random_instances(seed: u64, count: usize) -> Vec<MultispinalInstance> {
    RandomInstances::new(seed).take(count).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproducible_and_within_bounds() {
        let xs = random_instances(7, 12);
        let ys = random_instances(7, 12);
        assert_eq!(xs, ys);
        for inst in &xs {
            assert!(inst.group_a().order() <= 16);
            assert!(inst.group_b().order() <= 4);
            assert!(inst.alphabet_size() <= 4);
        }
    }
}
