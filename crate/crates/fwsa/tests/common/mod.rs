//! Shared generators for the integration tests.

#![allow(dead_code)]

use fwsa::category::{all_vectors, Category, LabeledSet, Morphism};
use fwsa::group::FiniteAbelianGroup;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Every legal object of the category up to the given size, in every
/// labeling order, not only canonical representatives.
pub fn all_objects(cat: &Category, max_size: usize) -> Vec<LabeledSet> {
    let order = cat.group().order();
    let mut out = Vec::new();
    for n in 0..=max_size {
        for labels in all_vectors(order, n) {
            let x = LabeledSet::new(labels);
            if cat.validate_object(&x).is_ok() {
                out.push(x);
            }
        }
    }
    out
}

pub fn random_object(
    rng: &mut ChaCha8Rng,
    group: &FiniteAbelianGroup,
    max_size: usize,
) -> LabeledSet {
    let n = rng.gen_range(0..=max_size);
    LabeledSet::new((0..n).map(|_| rng.gen_range(0..group.order())).collect())
}

/// A random pointed surjection out of `x`; the target labels are forced by
/// the fiber sums, so the result is valid by construction.
pub fn random_morphism_from(
    rng: &mut ChaCha8Rng,
    group: &FiniteAbelianGroup,
    x: &LabeledSet,
) -> (Morphism, LabeledSet) {
    let n = x.size();
    let k = if n == 0 { 0 } else { rng.gen_range(1..=n) };
    let map: Vec<usize> = loop {
        let m: Vec<usize> = (0..n).map(|_| rng.gen_range(0..k)).collect();
        let mut hit = vec![false; k];
        for &y in &m {
            hit[y] = true;
        }
        if hit.iter().all(|&h| h) {
            break m;
        }
    };
    let pointing: Vec<usize> = (0..n).map(|_| rng.gen_range(0..group.order())).collect();
    let mut labels = vec![0usize; k];
    for (i, &y) in map.iter().enumerate() {
        labels[y] = group.add(labels[y], x.label(i));
    }
    (
        Morphism {
            map,
            pointing,
            tgt_size: k,
        },
        LabeledSet::new(labels),
    )
}
