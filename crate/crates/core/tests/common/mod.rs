//! Independent reference computations shared by the integration tests.
//!
//! Nothing here goes through the precomputed product table, the regular
//! representation code or the eigen-based norm of the library.

#![allow(dead_code)]

use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use twistalg::{AlgElem, Arrow, TwistedAlgebra};

pub type C = Complex64;

pub const FIXTURES: [&str; 10] = ["t1", "z2", "z2_proj", "k4", "k4_sigma", "r2", "r2_disjoint", "b2", "g6", "swap"];

pub fn alg(name: &str) -> Arc<TwistedAlgebra> {
    TwistedAlgebra::new(twistalg::fixtures::by_name(name).expect("fixture"))
}

/// `(fg)(γ) = Σ_{αβ=γ} σ(α,β) f(α) g(β)` over all pairs of arrows.
pub fn convolve(alg: &TwistedAlgebra, f: &[C], g: &[C]) -> Vec<C> {
    let gr = alg.groupoid();
    let sigma = alg.cocycle();
    let n = gr.len();
    let mut out = vec![C::new(0.0, 0.0); n];
    for a in 0..n {
        for b in 0..n {
            if let Some(c) = gr.compose(Arrow(a), Arrow(b)) {
                out[c.0] += sigma.value(Arrow(a), Arrow(b)) * f[a] * g[b];
            }
        }
    }
    out
}

/// `f*(γ) = conj σ(γ,γ⁻¹) conj f(γ⁻¹)`.
pub fn involute(alg: &TwistedAlgebra, f: &[C]) -> Vec<C> {
    let gr = alg.groupoid();
    (0..gr.len())
        .map(|i| {
            let inv = gr.inverse(Arrow(i));
            (alg.cocycle().value(Arrow(i), inv) * f[inv.0]).conj()
        })
        .collect()
}

/// Left convolution by `f` on functions supported in `G_u`, column `j`
/// being `f * δ_{γ_j}` read off on the fiber.
pub fn rep_matrix(alg: &TwistedAlgebra, f: &[C], u: Arrow) -> DMatrix<C> {
    let gr = alg.groupoid();
    let fiber: Vec<usize> = (0..gr.len()).filter(|&i| gr.source(Arrow(i)) == u).collect();
    let k = fiber.len();
    let mut m = DMatrix::zeros(k, k);
    for (j, &col) in fiber.iter().enumerate() {
        let mut delta = vec![C::new(0.0, 0.0); gr.len()];
        delta[col] = C::new(1.0, 0.0);
        let image = convolve(alg, f, &delta);
        for (i, &row) in fiber.iter().enumerate() {
            m[(i, j)] = image[row];
        }
        debug_assert!(
            (0..gr.len()).all(|x| fiber.contains(&x) || image[x].norm() == 0.0),
            "left convolution preserves the source fiber"
        );
    }
    m
}

/// Largest singular value over all regular representations.
pub fn norm(alg: &TwistedAlgebra, f: &[C]) -> f64 {
    alg.groupoid()
        .units()
        .iter()
        .map(|&u| {
            let m = rep_matrix(alg, f, u);
            m.singular_values().iter().copied().fold(0.0, f64::max)
        })
        .fold(0.0, f64::max)
}

/// `|I^G| − |I^G_u|` counted straight from range and source.
pub fn expected_kernel_dim(alg: &TwistedAlgebra, u: Arrow) -> usize {
    let g = alg.groupoid();
    let iso = g.arrows().filter(|&a| g.range(a) == g.source(a)).count();
    let at_u = g.arrows().filter(|&a| g.range(a) == u && g.source(a) == u).count();
    iso - at_u
}

pub fn sup_distance(a: &[C], b: &[C]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn elem_distance(a: &AlgElem, b: &[C]) -> f64 {
    sup_distance(a.coeffs(), b)
}

pub fn matrix_distance(a: &DMatrix<C>, b: &DMatrix<C>) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}
