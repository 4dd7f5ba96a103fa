//! A small dense primal-dual interior-point solver for real semidefinite
//! programs in standard form:
//!
//! ```text
//!   minimize ⟨C, X⟩  subject to  ⟨A_k, X⟩ = b_k,  X ⪰ 0
//! ```
//!
//! Infeasible-start path following with the HKM search direction and a
//! Mehrotra predictor-corrector step. Sized for the desk-scale problems of
//! the state lab (matrices up to a few dozen rows).

use nalgebra::{Cholesky, DMatrix, DVector};
use thiserror::Error;

type Mat = DMatrix<f64>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SdpError {
    #[error("equality constraints are inconsistent (residual {0:e})")]
    Infeasible(f64),
    #[error("no convergence after {0} iterations (gap {1:e}, infeasibility {2:e})")]
    NotConverged(usize, f64, f64),
    #[error("search direction could not be computed")]
    Breakdown,
}

#[derive(Debug, Clone)]
pub struct SdpProblem {
    pub c: Mat,
    pub a: Vec<Mat>,
    pub b: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct SdpSolution {
    pub x: Mat,
    pub y: DVector<f64>,
    pub z: Mat,
    pub primal_objective: f64,
    pub dual_objective: f64,
    pub iterations: usize,
}

fn inner(a: &Mat, b: &Mat) -> f64 {
    a.dot(b)
}

fn sym(m: &Mat) -> Mat {
    (m + m.transpose()) * 0.5
}

/// Replace the constraints by an orthonormal, linearly independent system
/// with the same solution set.
fn orthonormalize(a: &[Mat], b: &[f64]) -> Result<(Vec<Mat>, Vec<f64>), SdpError> {
    let mut qs: Vec<Mat> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    for (ak, &bk) in a.iter().zip(b) {
        let scale = ak.norm().max(1.0);
        let (mut m, mut v) = (ak.clone(), bk);
        for _ in 0..2 {
            for (q, &beta) in qs.iter().zip(&betas) {
                let p = inner(q, &m);
                m -= q * p;
                v -= p * beta;
            }
        }
        let norm = m.norm();
        if norm <= 1e-10 * scale {
            if v.abs() > 1e-8 * (1.0 + bk.abs()) {
                return Err(SdpError::Infeasible(v.abs()));
            }
            continue;
        }
        qs.push(m / norm);
        betas.push(v / norm);
    }
    Ok((qs, betas))
}

/// Largest step `α ≤ 1` keeping `X + αΔX ⪰ 0`, assuming `X ≻ 0`.
fn max_step(x: &Mat, dx: &Mat) -> Option<f64> {
    let chol = Cholesky::new(x.clone())?;
    let l = chol.l();
    let linv = l.clone().try_inverse()?;
    let w = sym(&(&linv * dx * linv.transpose()));
    let min_eig = w.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min);
    Some(if min_eig >= 0.0 { f64::INFINITY } else { -1.0 / min_eig })
}

pub fn solve(problem: &SdpProblem, tol: f64) -> Result<SdpSolution, SdpError> {
    const MAX_ITER: usize = 150;
    let n = problem.c.nrows();
    let (a, b) = orthonormalize(&problem.a, &problem.b)?;
    let m = a.len();
    let c = sym(&problem.c);
    let b = DVector::from_vec(b);
    let op = |x: &Mat| DVector::from_iterator(m, a.iter().map(|ak| inner(ak, x)));
    let adj = |y: &DVector<f64>| {
        let mut out = Mat::zeros(n, n);
        for (ak, &yk) in a.iter().zip(y.iter()) {
            out += ak * yk;
        }
        out
    };

    let mut x = Mat::identity(n, n);
    let mut z = Mat::identity(n, n);
    let mut y = DVector::zeros(m);
    let (bnorm, cnorm) = (1.0 + b.norm(), 1.0 + c.norm());

    for iter in 0..MAX_ITER {
        let rp = &b - op(&x);
        let rd = &c - &z - adj(&y);
        let mu = inner(&x, &z) / n as f64;
        let pobj = inner(&c, &x);
        let dobj = b.dot(&y);
        let pinf = rp.norm() / bnorm;
        let dinf = rd.norm() / cnorm;
        let gap = inner(&x, &z) / (1.0 + pobj.abs() + dobj.abs());
        if pinf < tol && dinf < tol && gap < tol {
            return Ok(SdpSolution {
                x,
                y,
                z,
                primal_objective: pobj,
                dual_objective: dobj,
                iterations: iter,
            });
        }

        let zinv = Cholesky::new(z.clone()).ok_or(SdpError::Breakdown)?.inverse();
        // Schur complement M_ij = ⟨A_i, X A_j Z⁻¹⟩
        let xa_zinv: Vec<Mat> = a.iter().map(|aj| &x * aj * &zinv).collect();
        let mut schur = Mat::zeros(m, m);
        for i in 0..m {
            for j in i..m {
                let v = inner(&a[i], &sym(&xa_zinv[j]));
                schur[(i, j)] = v;
                schur[(j, i)] = v;
            }
        }
        let schur_chol = Cholesky::new(schur.clone());
        let solve_schur = |rhs: &DVector<f64>| -> Option<DVector<f64>> {
            match &schur_chol {
                Some(ch) => Some(ch.solve(rhs)),
                None => schur.clone().lu().solve(rhs),
            }
        };

        // direction for the complementarity target `target` (a matrix R with
        // X Z + ΔX Z + X ΔZ = target)
        let direction = |target: &Mat| -> Option<(Mat, DVector<f64>, Mat)> {
            // ΔX = (target − XZ) Z⁻¹ − X ΔZ Z⁻¹ with ΔZ = Rd − Aᵀ Δy
            let base = (target - &x * &z) * &zinv - &x * &rd * &zinv;
            let rhs = &rp - op(&sym(&base));
            let dy = solve_schur(&rhs)?;
            let dz = &rd - adj(&dy);
            let dx = sym(&(base + &x * adj(&dy) * &zinv));
            Some((dx, dy, dz))
        };

        // predictor
        let (dx_a, _, dz_a) = direction(&Mat::zeros(n, n)).ok_or(SdpError::Breakdown)?;
        let ap = max_step(&x, &dx_a).ok_or(SdpError::Breakdown)?.min(1.0);
        let ad = max_step(&z, &dz_a).ok_or(SdpError::Breakdown)?.min(1.0);
        let mu_aff = inner(&(&x + &dx_a * ap), &(&z + &dz_a * ad)) / n as f64;
        let sigma = (mu_aff / mu).clamp(0.0, 1.0).powi(3);

        // corrector
        let target = Mat::identity(n, n) * (sigma * mu) - &dx_a * &dz_a;
        let (dx, dy, dz) = direction(&target).ok_or(SdpError::Breakdown)?;
        let ap = (0.98 * max_step(&x, &dx).ok_or(SdpError::Breakdown)?).min(1.0);
        let ad = (0.98 * max_step(&z, &dz).ok_or(SdpError::Breakdown)?).min(1.0);
        x += &dx * ap;
        y += &dy * ad;
        z += &dz * ad;
        x = sym(&x);
        z = sym(&z);

        if iter + 1 == MAX_ITER {
            return Err(SdpError::NotConverged(MAX_ITER, gap, pinf.max(dinf)));
        }
    }
    unreachable!("loop returns")
}
