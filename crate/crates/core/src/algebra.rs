//! The twisted convolution *-algebra `C_c(G, σ)` of a finite groupoid.
//!
//! Elements are dense coefficient vectors indexed by the canonical arrow
//! order. With the discrete topology every singleton is a bisection, so the
//! point masses `δ_γ` span the algebra and
//! `δ_α δ_β = σ(α,β) δ_{αβ}` when `s(α) = r(β)` (and `0` otherwise).
//!
//! The twist picture is not a separate algebra: the algebra over `σ` is the
//! twisted groupoid algebra of the twist `E_{σ̄}`, with
//! `δ^T_(γ,k) = exp(−2πik/m) δ_γ` ([`TwistedAlgebra::twist_delta`]).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_complex::Complex64;
use thiserror::Error;

use crate::cocycle::{phase, Cocycle, TwistElement};
use crate::groupoid::{Arrow, FiniteGroupoid, SubGroupoid};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("elements belong to different algebras")]
    ContextMismatch,
    #[error("subset is not a subgroupoid of this algebra's groupoid")]
    NotASubgroupoid,
    #[error("coefficient vector has length {got}, expected {expected}")]
    BadLength { expected: usize, got: usize },
}

/// The context `(G, σ)` together with its precomputed multiplication data.
#[derive(Debug, Clone, PartialEq)]
pub struct TwistedAlgebra {
    cocycle: Cocycle,
    // (α, β, αβ, σ(α,β)) for every composable pair
    products: Vec<(Arrow, Arrow, Arrow, Complex64)>,
}

impl TwistedAlgebra {
    pub fn new(cocycle: Cocycle) -> Arc<Self> {
        let products = cocycle
            .groupoid()
            .composable_pairs()
            .map(|(a, b, c)| (a, b, c, cocycle.value(a, b)))
            .collect();
        Arc::new(TwistedAlgebra { cocycle, products })
    }

    /// Untwisted convolution algebra of `g`.
    pub fn untwisted(g: FiniteGroupoid) -> Arc<Self> {
        Self::new(Cocycle::trivial(Arc::new(g)))
    }

    /// The algebra `Σ_c(G; E_τ) ≅ C_c(G, τ̄)` of the twist built from `τ`.
    pub fn of_twist(tau: &Cocycle) -> Arc<Self> {
        Self::new(tau.conjugate())
    }

    pub fn cocycle(&self) -> &Cocycle {
        &self.cocycle
    }

    /// The cocycle of the twist whose `δ^T` generators live here (`σ̄`).
    pub fn twist_cocycle(&self) -> Cocycle {
        self.cocycle.conjugate()
    }

    pub fn groupoid(&self) -> &FiniteGroupoid {
        self.cocycle.groupoid()
    }

    pub fn dim(&self) -> usize {
        self.groupoid().len()
    }

    pub fn products(&self) -> &[(Arrow, Arrow, Arrow, Complex64)] {
        &self.products
    }

    pub fn arrow(&self, name: &str) -> Result<Arrow, AlgebraError> {
        self.groupoid()
            .arrow(name)
            .ok_or_else(|| AlgebraError::UnknownElement(name.to_string()))
    }
}

/// A finitely supported function on the groupoid.
#[derive(Clone)]
pub struct AlgElem {
    alg: Arc<TwistedAlgebra>,
    coeffs: Vec<Complex64>,
}

impl fmt::Debug for AlgElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g = self.alg.groupoid();
        f.debug_map()
            .entries(self.support().map(|a| (g.name(a), self.coeffs[a.0])))
            .finish()
    }
}

impl PartialEq for AlgElem {
    fn eq(&self, other: &Self) -> bool {
        self.same_context(other) && self.coeffs == other.coeffs
    }
}

pub trait AlgebraExt {
    fn zero(&self) -> AlgElem;
    fn delta(&self, a: Arrow) -> AlgElem;
    fn delta_named(&self, name: &str) -> Result<AlgElem, AlgebraError>;
    fn unit_element(&self) -> AlgElem;
    fn twist_delta(&self, eps: TwistElement) -> AlgElem;
    fn from_coeffs(&self, coeffs: Vec<Complex64>) -> Result<AlgElem, AlgebraError>;
    fn from_named(&self, coeffs: &[(&str, Complex64)]) -> Result<AlgElem, AlgebraError>;
}

impl AlgebraExt for Arc<TwistedAlgebra> {
    fn zero(&self) -> AlgElem {
        AlgElem {
            alg: self.clone(),
            coeffs: vec![Complex64::new(0.0, 0.0); self.dim()],
        }
    }

    /// Point mass at `a`.
    fn delta(&self, a: Arrow) -> AlgElem {
        let mut f = self.zero();
        f.coeffs[a.0] = Complex64::new(1.0, 0.0);
        f
    }

    fn delta_named(&self, name: &str) -> Result<AlgElem, AlgebraError> {
        Ok(self.delta(self.arrow(name)?))
    }

    /// `Σ_{x ∈ G^(0)} δ_x`.
    fn unit_element(&self) -> AlgElem {
        let mut f = self.zero();
        for &u in self.groupoid().units() {
            f.coeffs[u.0] = Complex64::new(1.0, 0.0);
        }
        f
    }

    /// `δ^T_(γ,k) = exp(−2πik/m) δ_γ` for `(γ,k)` in the twist `E_{σ̄}`.
    fn twist_delta(&self, eps: TwistElement) -> AlgElem {
        let m = self.cocycle().order();
        let mut f = self.zero();
        f.coeffs[eps.base.0] = phase(m - eps.phase % m, m);
        f
    }

    fn from_coeffs(&self, coeffs: Vec<Complex64>) -> Result<AlgElem, AlgebraError> {
        if coeffs.len() != self.dim() {
            return Err(AlgebraError::BadLength {
                expected: self.dim(),
                got: coeffs.len(),
            });
        }
        Ok(AlgElem {
            alg: self.clone(),
            coeffs,
        })
    }

    fn from_named(&self, coeffs: &[(&str, Complex64)]) -> Result<AlgElem, AlgebraError> {
        let mut f = self.zero();
        for &(name, c) in coeffs {
            f.coeffs[self.arrow(name)?.0] += c;
        }
        Ok(f)
    }
}

impl AlgElem {
    pub fn algebra(&self) -> &Arc<TwistedAlgebra> {
        &self.alg
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, a: Arrow) -> Complex64 {
        self.coeffs[a.0]
    }

    pub fn support(&self) -> impl Iterator<Item = Arrow> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != Complex64::new(0.0, 0.0))
            .map(|(i, _)| Arrow(i))
    }

    pub fn same_context(&self, other: &AlgElem) -> bool {
        Arc::ptr_eq(&self.alg, &other.alg) || *self.alg == *other.alg
    }

    fn check(&self, other: &AlgElem) -> Result<(), AlgebraError> {
        if self.same_context(other) {
            Ok(())
        } else {
            Err(AlgebraError::ContextMismatch)
        }
    }

    fn zip_with(&self, other: &AlgElem, op: impl Fn(Complex64, Complex64) -> Complex64) -> Result<AlgElem, AlgebraError> {
        self.check(other)?;
        Ok(AlgElem {
            alg: self.alg.clone(),
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| op(a, b)).collect(),
        })
    }

    pub fn try_add(&self, other: &AlgElem) -> Result<AlgElem, AlgebraError> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn try_sub(&self, other: &AlgElem) -> Result<AlgElem, AlgebraError> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, c: Complex64) -> AlgElem {
        AlgElem {
            alg: self.alg.clone(),
            coeffs: self.coeffs.iter().map(|&a| c * a).collect(),
        }
    }

    /// `(fg)(γ) = Σ_{αβ=γ} σ(α,β) f(α) g(β)`.
    pub fn convolve(&self, other: &AlgElem) -> Result<AlgElem, AlgebraError> {
        self.check(other)?;
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeffs.len()];
        for &(a, b, c, s) in self.alg.products() {
            let (fa, gb) = (self.coeffs[a.0], other.coeffs[b.0]);
            if fa != Complex64::new(0.0, 0.0) && gb != Complex64::new(0.0, 0.0) {
                out[c.0] += s * fa * gb;
            }
        }
        Ok(AlgElem {
            alg: self.alg.clone(),
            coeffs: out,
        })
    }

    /// `f*(γ) = conj σ(γ,γ⁻¹) · conj f(γ⁻¹)`.
    pub fn involute(&self) -> AlgElem {
        let g = self.alg.groupoid();
        let sigma = self.alg.cocycle();
        let coeffs = g
            .arrows()
            .map(|a| {
                let inv = g.inverse(a);
                (sigma.value(a, inv) * self.coeffs[inv.0]).conj()
            })
            .collect();
        AlgElem {
            alg: self.alg.clone(),
            coeffs,
        }
    }

    /// Zero the coefficients off `sub`.
    pub fn restrict(&self, sub: &SubGroupoid<'_>) -> Result<AlgElem, AlgebraError> {
        if sub.parent() != self.alg.groupoid() {
            return Err(AlgebraError::NotASubgroupoid);
        }
        Ok(self.restrict_mask(sub.mask()))
    }

    pub(crate) fn restrict_mask(&self, mask: &[bool]) -> AlgElem {
        AlgElem {
            alg: self.alg.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(mask)
                .map(|(&c, &keep)| if keep { c } else { Complex64::new(0.0, 0.0) })
                .collect(),
        }
    }

    /// `‖f‖_∞`.
    pub fn sup_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// `f = Σ f(γ) δ_γ`, in canonical order.
    pub fn generator_decomposition(&self) -> Vec<(Arrow, Complex64)> {
        self.support().map(|a| (a, self.coeffs[a.0])).collect()
    }

    pub fn is_supported_in(&self, mask: &[bool]) -> bool {
        self.support().all(|a| mask[a.0])
    }

    /// Support with coefficients rounded to `digits` decimals; only for
    /// deduplicating test samples.
    pub fn fingerprint(&self, digits: i32) -> Vec<(usize, i64, i64)> {
        let scale = 10f64.powi(digits);
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| (i, (c.re * scale).round() as i64, (c.im * scale).round() as i64))
            .filter(|&(_, re, im)| re != 0 || im != 0)
            .collect()
    }
}

impl Add for &AlgElem {
    type Output = AlgElem;
    fn add(self, rhs: &AlgElem) -> AlgElem {
        self.try_add(rhs).expect("same algebra")
    }
}

impl Sub for &AlgElem {
    type Output = AlgElem;
    fn sub(self, rhs: &AlgElem) -> AlgElem {
        self.try_sub(rhs).expect("same algebra")
    }
}

impl Mul for &AlgElem {
    type Output = AlgElem;
    fn mul(self, rhs: &AlgElem) -> AlgElem {
        self.convolve(rhs).expect("same algebra")
    }
}

impl Neg for &AlgElem {
    type Output = AlgElem;
    fn neg(self) -> AlgElem {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}
