mod common;

use std::sync::Arc;

use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;

use common::alg;
use twistalg::groupoid::pair_groupoid;
use twistalg::linalg::{self, CMatrix};
use twistalg::state::{self, StateFunctional};
use twistalg::{fixtures, io, random, rep, seeded, structure, AlgebraExt, Cocycle, MatrixAlgebra, TwistedAlgebra};

/// Either a named fixture or a random effective groupoid with a random
/// coboundary twist.
fn cocycle_strategy() -> impl Strategy<Value = Cocycle> {
    prop_oneof![
        (0..fixtures::NAMES.len()).prop_map(|i| fixtures::by_name(fixtures::NAMES[i]).unwrap()),
        any::<u64>().prop_map(|seed| random::effective_twisted(12, &mut seeded(seed))),
    ]
}

fn fixture_strategy() -> impl Strategy<Value = Arc<TwistedAlgebra>> {
    (0..fixtures::NAMES.len()).prop_map(|i| alg(fixtures::NAMES[i]))
}

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, failure_persistence: None, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn groupoid_axioms(sigma in cocycle_strategy()) {
        let g = sigma.groupoid();
        for a in g.arrows() {
            let inv = g.inverse(a);
            prop_assert_eq!(g.inverse(inv), a);
            prop_assert_eq!(g.compose(a, inv), Some(g.range(a)));
            prop_assert_eq!(g.compose(inv, a), Some(g.source(a)));
            prop_assert!(g.is_unit(g.range(a)) && g.is_unit(g.source(a)));
            prop_assert_eq!(g.compose(g.range(a), a), Some(a));
            prop_assert_eq!(g.compose(a, g.source(a)), Some(a));
            for b in g.arrows() {
                let composable = g.source(a) == g.range(b);
                prop_assert_eq!(g.compose(a, b).is_some(), composable);
                if let Some(ab) = g.compose(a, b) {
                    prop_assert_eq!(g.range(ab), g.range(a));
                    prop_assert_eq!(g.source(ab), g.source(b));
                    for c in g.arrows().filter(|&c| g.range(c) == g.source(b)) {
                        let left = g.compose(ab, c);
                        let right = g.compose(a, g.compose(b, c).unwrap());
                        prop_assert_eq!(left, right);
                    }
                }
            }
        }
    }

    #[test]
    fn isotropy_is_a_subgroupoid_and_orbits_partition(sigma in cocycle_strategy()) {
        let g = sigma.groupoid();
        let iso = g.isotropy();
        for a in iso.members() {
            prop_assert!(iso.contains(g.inverse(a)));
            for b in iso.members() {
                if let Some(ab) = g.compose(a, b) {
                    prop_assert!(iso.contains(ab));
                }
            }
        }
        let orbits = g.orbits();
        let mut seen: Vec<_> = orbits.iter().flatten().copied().collect();
        seen.sort();
        prop_assert_eq!(seen, g.units().to_vec());
        for orbit in &orbits {
            for a in g.arrows() {
                prop_assert_eq!(orbit.contains(&g.range(a)), orbit.contains(&g.source(a)));
            }
        }
    }

    #[test]
    fn cocycle_identity_and_twist_axioms(sigma in cocycle_strategy()) {
        let g = sigma.groupoid();
        for (a, b, ab) in g.composable_pairs() {
            for c in g.arrows().filter(|&c| g.range(c) == g.source(b)) {
                let bc = g.compose(b, c).unwrap();
                let lhs = sigma.value(a, b) * sigma.value(ab, c);
                let rhs = sigma.value(b, c) * sigma.value(a, bc);
                prop_assert!((lhs - rhs).norm() < 1e-12);
            }
            if g.is_unit(a) || g.is_unit(b) {
                prop_assert_eq!(sigma.exponent(a, b), 0);
            }
        }
        prop_assert!(sigma.validate_twist_axioms().all_pass());
        prop_assert!(sigma.conjugate().validate_twist_axioms().all_pass());
    }

    #[test]
    fn twist_group_laws(sigma in cocycle_strategy()) {
        let g = sigma.groupoid();
        let elems = sigma.twist_elements();
        for &x in &elems {
            let inv = sigma.twist_inverse(x);
            let left = sigma.twist_multiply(x, inv).unwrap();
            prop_assert_eq!(left.base, g.range(x.base));
            prop_assert_eq!(left.phase, 0);
            for &y in elems.iter().filter(|y| g.range(y.base) == g.source(x.base)) {
                let xy = sigma.twist_multiply(x, y).unwrap();
                for &z in elems.iter().filter(|z| g.range(z.base) == g.source(y.base)) {
                    let l = sigma.twist_multiply(xy, z).unwrap();
                    let r = sigma.twist_multiply(x, sigma.twist_multiply(y, z).unwrap()).unwrap();
                    prop_assert_eq!(l, r);
                }
            }
        }
    }

    #[test]
    fn coboundaries_are_cocycles(seed in any::<u64>(), which in 0..fixtures::NAMES.len(), order in prop::sample::select(vec![2u32, 3, 4, 6])) {
        let g = fixtures::by_name(fixtures::NAMES[which]).unwrap().groupoid().clone();
        let db = random::coboundary(&g, order, &mut seeded(seed));
        prop_assert!(db.validate_twist_axioms().all_pass());
        let b = random::cochain(&g, order, &mut seeded(seed));
        for (x, y, xy) in g.composable_pairs() {
            let expected = (b[x.0] + b[y.0] + order - b[xy.0]) % order;
            prop_assert_eq!(db.exponent(x, y), expected);
        }
    }

    #[test]
    fn algebra_identities(a in fixture_strategy(), seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let f = random::element(&a, &mut rng);
        let g = random::element(&a, &mut rng);
        let h = random::element(&a, &mut rng);
        prop_assert!((&(&(&f * &g) * &h) - &(&f * &(&g * &h))).sup_norm() < 1e-12);
        prop_assert!((&(&f * &g).involute() - &(&g.involute() * &f.involute())).sup_norm() < 1e-12);
        prop_assert!((&(&f * &(&g + &h)) - &(&(&f * &g) + &(&f * &h))).sup_norm() < 1e-12);
        prop_assert_eq!(&(&a.unit_element() * &f), &f);
        prop_assert_eq!(f.involute().involute(), f.clone());
        let direct = common::convolve(&a, f.coeffs(), g.coeffs());
        prop_assert!(common::elem_distance(&(&f * &g), &direct) < 1e-12);
    }

    #[test]
    fn reduced_norm_bounds(a in fixture_strategy(), seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let f = random::element(&a, &mut rng);
        let g = random::element(&a, &mut rng);
        let n = rep::reduced_norm(&f);
        let sup = f.sup_norm();
        let l1: f64 = f.coeffs().iter().map(|z| z.norm()).sum();
        prop_assert!(sup <= n + 1e-12 && n <= l1 + 1e-12);
        prop_assert!(rep::reduced_norm(&(&f * &g)) <= n * rep::reduced_norm(&g) + 1e-10);
        prop_assert!((rep::reduced_norm(&f.involute()) - n).abs() < 1e-10);
        let nn = rep::reduced_norm(&(&f.involute() * &f));
        prop_assert!((nn - n * n).abs() <= 1e-9 * n * n);
        prop_assert!((n - common::norm(&a, f.coeffs())).abs() < 1e-10);
    }

    #[test]
    fn expectation_identity(a in fixture_strategy(), seed in any::<u64>()) {
        let f = random::element(&a, &mut seeded(seed));
        let e = structure::expect_onto_units(&(&f.involute() * &f));
        let g = a.groupoid();
        for &u in g.units() {
            let direct: f64 = g.source_fiber(u).iter().map(|&x| f.coeff(x).norm_sqr()).sum();
            prop_assert!((e.coeff(u) - Complex64::new(direct, 0.0)).norm() < 1e-12);
        }
        prop_assert_eq!(structure::expect_onto_units(&e), e.clone());
        let iso = structure::expect_onto_isotropy(&f);
        prop_assert_eq!(structure::expect_onto_isotropy(&iso), iso);
    }

    #[test]
    fn serialization_round_trips(sigma in cocycle_strategy()) {
        let g = sigma.groupoid();
        let keep = (!sigma.is_trivial()).then_some(&sigma);
        let text = io::serialize_groupoid(g, keep);
        let (g2, c2) = io::parse_groupoid_str(&text).unwrap();
        prop_assert_eq!(g2.as_ref(), g.as_ref());
        let c2 = c2.unwrap_or_else(|| Cocycle::trivial(g2.clone()));
        if sigma.is_trivial() {
            prop_assert!(c2.is_trivial());
        } else {
            prop_assert_eq!(c2.order(), sigma.order());
            prop_assert_eq!(c2.entries(), sigma.entries());
        }
    }
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn block_dimensions_add_up(sigma in cocycle_strategy(), seed in any::<u64>()) {
        let a = TwistedAlgebra::new(sigma);
        let blocks = rep::wedderburn_blocks(&rep::algebra_image(&a).unwrap(), seed).unwrap();
        prop_assert_eq!(blocks.sizes.iter().map(|d| d * d).sum::<usize>(), a.dim());
    }

    #[test]
    fn cohomologous_twists_have_equal_blocks(sigma in cocycle_strategy(), seed in any::<u64>()) {
        let g = sigma.groupoid().clone();
        let db = random::coboundary(&g, 4, &mut seeded(seed));
        let before = rep::wedderburn_blocks(&rep::algebra_image(&TwistedAlgebra::new(sigma.clone())).unwrap(), seed).unwrap();
        let after = rep::wedderburn_blocks(&rep::algebra_image(&TwistedAlgebra::new(sigma.product(&db).unwrap())).unwrap(), seed).unwrap();
        prop_assert_eq!(before.sizes, after.sizes);
    }

    #[test]
    fn pair_groupoids_are_effective_and_minimal(n in 1usize..=5) {
        let g = pair_groupoid(n);
        prop_assert!(g.is_effective() && g.is_minimal());
        prop_assert_eq!(g.len(), n * n);
        let blocks = rep::wedderburn_blocks(&rep::algebra_image(&TwistedAlgebra::untwisted(g)).unwrap(), 0).unwrap();
        prop_assert_eq!(blocks.sizes, vec![n]);
    }

    #[test]
    fn left_kernel_and_multiplicative_domain(n in 1usize..=3, rank in 1usize..=3, full in any::<bool>(), seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let a = Arc::new(if full { MatrixAlgebra::full(n) } else { state::diagonal_algebra(n) });
        let rho = random_density(n, rank.min(n), &mut rng);
        let phi = StateFunctional::new(a.clone(), rho).unwrap();

        // L_φ is a left ideal on which φ vanishes: |φ(b l)|² ≤ φ(l*l) φ(bb*) = 0
        let kernel = phi.null_space();
        for l in &kernel {
            prop_assert!(a.contains(l, 1e-9));
            prop_assert!(phi.eval(&(l.adjoint() * l)).norm() < 1e-12);
            for _ in 0..4 {
                let b = a.project(&random_matrix(n, &mut rng));
                prop_assert!(phi.eval(&(&b * l)).norm() < 1e-12 * (1.0 + linalg::frobenius(&b)));
            }
        }

        // M_φ is a unital *-subalgebra on which φ is multiplicative
        let md = state::mult_domain(&phi);
        prop_assert!(md.consistent);
        let m = MatrixAlgebra::from_spanning(md.unitized.state.algebra().ambient_dim(), md.basis.clone());
        prop_assert!(m.closure_residual() < 1e-8);
        prop_assert!(md.contains(&CMatrix::identity(n, n)));
        let psi = &md.unitized.state;
        for x in &md.basis {
            prop_assert!(m.contains(&x.adjoint(), 1e-8));
            for y in &md.basis {
                prop_assert!((psi.eval(&(x * y)) - psi.eval(x) * psi.eval(y)).norm() < 1e-8);
            }
        }
    }
}

fn random_matrix(n: usize, rng: &mut impl Rng) -> CMatrix {
    CMatrix::from_fn(n, n, |_, _| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
}

/// A density matrix of the given rank.
fn random_density(n: usize, rank: usize, rng: &mut impl Rng) -> CMatrix {
    let v = CMatrix::from_fn(n, rank, |_, _| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    let rho = &v * v.adjoint();
    let tr = rho.trace().re;
    rho / Complex64::new(tr, 0.0)
}
