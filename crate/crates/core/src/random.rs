//! Seeded generators for test and benchmark inputs.

use std::collections::HashMap;
use std::sync::Arc;

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{AlgElem, AlgebraExt, TwistedAlgebra};
use crate::cocycle::{coboundary_from_cochain, Cocycle};
use crate::groupoid::{disjoint_union, pair_groupoid, FiniteGroupoid};

/// The generator used throughout for reproducible runs.
pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn coefficient(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

/// Element with independent coefficients uniform in the unit square.
pub fn element(alg: &Arc<TwistedAlgebra>, rng: &mut impl Rng) -> AlgElem {
    let coeffs = (0..alg.dim()).map(|_| coefficient(rng)).collect();
    alg.from_coeffs(coeffs).expect("length matches")
}

/// Random element supported on the arrows with `mask[i]` set.
pub fn element_on(alg: &Arc<TwistedAlgebra>, mask: &[bool], rng: &mut impl Rng) -> AlgElem {
    let coeffs = mask
        .iter()
        .map(|&keep| if keep { coefficient(rng) } else { Complex64::new(0.0, 0.0) })
        .collect();
    alg.from_coeffs(coeffs).expect("length matches")
}

/// Random element supported on the (interior of the) isotropy.
pub fn isotropy_element(alg: &Arc<TwistedAlgebra>, rng: &mut impl Rng) -> AlgElem {
    let mask = alg.groupoid().interior_isotropy().mask().to_vec();
    element_on(alg, &mask, rng)
}

/// Cochain with values in `0..order`, zero on units.
pub fn cochain(g: &FiniteGroupoid, order: u32, rng: &mut impl Rng) -> Vec<u32> {
    g.arrows()
        .map(|a| if g.is_unit(a) { 0 } else { rng.random_range(0..order) })
        .collect()
}

/// Random coboundary `δb` of order `order`.
pub fn coboundary(g: &Arc<FiniteGroupoid>, order: u32, rng: &mut impl Rng) -> Cocycle {
    let b = cochain(g, order, rng);
    coboundary_from_cochain(g.clone(), order, &b).expect("cochain vanishes on units")
}

/// A random finite effective groupoid with at most `max_elements` arrows.
///
/// Finite effective groupoids are exactly the principal ones, i.e. disjoint
/// unions of pair groupoids; component sizes are drawn at random and the
/// arrows get shuffled ids so the basis order carries no structure.
pub fn effective_groupoid(max_elements: usize, rng: &mut impl Rng) -> FiniteGroupoid {
    assert!(max_elements >= 1);
    let mut sizes = Vec::new();
    let mut used = 0;
    loop {
        let room = ((max_elements - used) as f64).sqrt() as usize;
        if room == 0 {
            break;
        }
        sizes.push(rng.random_range(1..=room));
        used += sizes.last().unwrap().pow(2);
        if rng.random_bool(0.4) {
            break;
        }
    }
    let mut g: Option<FiniteGroupoid> = None;
    for (c, &n) in sizes.iter().enumerate() {
        let part = pair_groupoid(n).relabel(|s| format!("{s}#{c}")).expect("renaming is injective");
        g = Some(match g {
            None => part,
            Some(acc) => disjoint_union(&acc, &part).expect("component ids are distinct"),
        });
    }
    let g = g.expect("at least one component");
    let mut ids: Vec<usize> = (0..g.len()).collect();
    ids.shuffle(rng);
    let rename: HashMap<String, String> =
        g.names().iter().zip(&ids).map(|(s, i)| (s.clone(), format!("x{i:02}"))).collect();
    g.relabel(|s| rename[s].clone()).expect("renaming is injective")
}

/// A random effective groupoid with a random `μ_2` or `μ_4` cocycle.
pub fn effective_twisted(max_elements: usize, rng: &mut impl Rng) -> Cocycle {
    let g = Arc::new(effective_groupoid(max_elements, rng));
    let order = if rng.random_bool(0.5) { 2 } else { 4 };
    coboundary(&g, order, rng)
}
