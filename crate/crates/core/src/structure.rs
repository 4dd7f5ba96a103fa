//! Structural maps of the twisted groupoid algebra: the conditional
//! expectations onto the units and onto the isotropy, the isotropy
//! embedding and its coset block structure, the quotients onto the isotropy
//! group algebras, compression by unit point masses, the universal property
//! of twisted group algebras, the uniqueness check for homomorphisms and the
//! simplicity criterion.
//!
//! Compression uses `b = δ_u`. In the discrete model the indicator of a unit
//! is continuous with compact support, and for any `f`
//! `(δ_u f δ_u)(γ) = f(γ)` if `r(γ) = s(γ) = u` and `0` otherwise, so the
//! compressed element is supported in `G_u^u` exactly.

use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{AlgElem, AlgebraExt, TwistedAlgebra};
use crate::cocycle::{phase, Cocycle, TwistElement};
use crate::groupoid::Arrow;
use crate::linalg::{self, CMatrix, ONE};
use crate::rep::{self, regular_rep, RepError, StarHom, RELATION_TOL};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StructureError {
    #[error("element is not supported in the isotropy (offending `{0}`)")]
    SupportViolation(String),
    #[error("unknown unit `{0}`")]
    UnknownUnit(String),
    #[error("homomorphism has not been validated")]
    UnvalidatedHom,
    #[error("groupoid has {0} units; a group is required")]
    NotAGroup(usize),
    #[error("image of `{0}` is not unitary (residual {1:e})")]
    NotUnitary(String, f64),
    #[error("twisted relation fails for ({0}, {1}) (residual {2:e})")]
    RelationViolation(String, String, f64),
    #[error("element belongs to a different algebra")]
    ContextMismatch,
    #[error(transparent)]
    Rep(#[from] RepError),
}

/// `Φ_r`: restriction to the unit space.
pub fn expect_onto_units(f: &AlgElem) -> AlgElem {
    let g = f.algebra().groupoid();
    f.restrict(&g.unit_space()).expect("own unit space")
}

/// `Ψ_r^I`: restriction to the interior of the isotropy.
pub fn expect_onto_isotropy(f: &AlgElem) -> AlgElem {
    let g = f.algebra().groupoid();
    f.restrict(&g.interior_isotropy()).expect("own isotropy")
}

/// The subalgebra `C_c(I^G, σ|)` and its inclusion `ι` by extension by zero.
#[derive(Debug, Clone)]
pub struct IsotropyEmbedding {
    big: Arc<TwistedAlgebra>,
    iso: Arc<TwistedAlgebra>,
    // iso arrow → big arrow
    embedding: Vec<Arrow>,
    mask: Vec<bool>,
}

impl IsotropyEmbedding {
    pub fn new(big: &Arc<TwistedAlgebra>) -> Self {
        let g = big.groupoid();
        let iso_sub = g.interior_isotropy();
        let mask = iso_sub.mask().to_vec();
        let (iso_g, embedding) = iso_sub.to_groupoid();
        let iso_g = Arc::new(iso_g);
        let iso = TwistedAlgebra::new(big.cocycle().restrict(iso_g, &embedding));
        IsotropyEmbedding {
            big: big.clone(),
            iso,
            embedding,
            mask,
        }
    }

    pub fn big(&self) -> &Arc<TwistedAlgebra> {
        &self.big
    }

    pub fn isotropy_algebra(&self) -> &Arc<TwistedAlgebra> {
        &self.iso
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn embedding(&self) -> &[Arrow] {
        &self.embedding
    }

    /// `ι(f)`: the same coefficients viewed in the big algebra.
    pub fn iota(&self, f: &AlgElem) -> Result<AlgElem, StructureError> {
        if **f.algebra() != *self.iso {
            return Err(StructureError::ContextMismatch);
        }
        let mut coeffs = self.big.zero().coeffs().to_vec();
        for (a, c) in f.generator_decomposition() {
            coeffs[self.embedding[a.0].0] = c;
        }
        Ok(self.big.from_coeffs(coeffs).expect("length"))
    }

    /// Read an isotropy-supported element of the big algebra as an element
    /// of the isotropy algebra.
    pub fn lift(&self, f: &AlgElem) -> Result<AlgElem, StructureError> {
        if **f.algebra() != *self.big {
            return Err(StructureError::ContextMismatch);
        }
        if let Some(bad) = f.support().find(|a| !self.mask[a.0]) {
            return Err(StructureError::SupportViolation(self.big.groupoid().name(bad).to_string()));
        }
        let coeffs = self.embedding.iter().map(|&a| f.coeff(a)).collect();
        Ok(self.iso.from_coeffs(coeffs).expect("length"))
    }

    fn iso_arrow(&self, big: Arrow) -> Arrow {
        Arrow(self.embedding.binary_search(&big).expect("isotropy arrow"))
    }

    fn big_unit(&self, name: &str) -> Result<Arrow, StructureError> {
        self.big
            .groupoid()
            .unit(name)
            .map_err(|_| StructureError::UnknownUnit(name.to_string()))
    }

    /// Partition of `G_u` into the classes `γ·I^G_u`.
    pub fn coset_blocks(&self, u: Arrow) -> Result<CosetDecomposition, StructureError> {
        coset_blocks(&self.big, u)
    }

    /// Check that `π_u(ι(f))` is block diagonal along the coset partition,
    /// and that the block of the class of `γ` has the spectrum of
    /// `π^I_{r(γ)}(f)`.
    pub fn verify_block_structure(&self, f: &AlgElem, u: Arrow) -> Result<BlockReport, StructureError> {
        let big_f = self.iota(f)?;
        let cosets = self.coset_blocks(u)?;
        let rep = regular_rep(&big_f, u)?;
        let g = self.big.groupoid();
        let position = |a: Arrow| rep.basis.iter().position(|&b| b == a).expect("fiber");
        let class_of: Vec<usize> = rep
            .basis
            .iter()
            .map(|&a| cosets.classes.iter().position(|c| c.contains(&a)).expect("partition"))
            .collect();
        let mut off_block: f64 = 0.0;
        for i in 0..rep.basis.len() {
            for j in 0..rep.basis.len() {
                if class_of[i] != class_of[j] {
                    off_block = off_block.max(rep.matrix[(i, j)].norm());
                }
            }
        }
        let mut classes = Vec::new();
        for class in &cosets.classes {
            let idx: Vec<usize> = class.iter().map(|&a| position(a)).collect();
            let block = CMatrix::from_fn(idx.len(), idx.len(), |i, j| rep.matrix[(idx[i], idx[j])]);
            let v = g.range(class[0]);
            let iso_rep = regular_rep(f, self.iso_arrow(v))?;
            let distance = linalg::multiset_distance(&linalg::eigenvalues(&block), &linalg::eigenvalues(&iso_rep.matrix))
                .unwrap_or(f64::INFINITY);
            classes.push(ClassReport {
                representative: g.name(class[0]).to_string(),
                range: g.name(v).to_string(),
                size: class.len(),
                eigenvalue_distance: distance,
            });
        }
        Ok(BlockReport {
            unit: g.name(u).to_string(),
            off_block_max: off_block,
            max_eigenvalue_distance: classes.iter().map(|c| c.eigenvalue_distance).fold(0.0, f64::max),
            classes,
        })
    }

    /// `Q_u` onto the twisted group algebra of `G_u^u`.
    pub fn quotient(&self, unit: &str) -> Result<QuotientMap, StructureError> {
        let u = self.big_unit(unit)?;
        let g = self.big.groupoid();
        let (group, to_big) = g.isotropy_group_with_embedding(u).expect("unit");
        let group = Arc::new(group);
        let cocycle = self.big.cocycle().restrict(group.clone(), &to_big);
        let to_iso = to_big.iter().map(|&a| self.iso_arrow(a)).collect();
        Ok(QuotientMap {
            unit: u,
            iso: self.iso.clone(),
            group: TwistedAlgebra::new(cocycle),
            to_iso,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CosetDecomposition {
    pub unit: Arrow,
    /// Classes of `G_u`, each in canonical order; classes ordered by their
    /// first element.
    pub classes: Vec<Vec<Arrow>>,
}

/// `γ ∼ γ'` in `G_u` iff `γ'γ⁻¹ ∈ I^G`, i.e. iff `r(γ) = r(γ')`.
pub fn coset_blocks(alg: &Arc<TwistedAlgebra>, u: Arrow) -> Result<CosetDecomposition, StructureError> {
    let g = alg.groupoid();
    if u.0 >= g.len() || !g.is_unit(u) {
        return Err(StructureError::UnknownUnit(format!("#{}", u.0)));
    }
    let iso = g.interior_isotropy();
    let mut classes: Vec<Vec<Arrow>> = Vec::new();
    for a in g.source_fiber(u) {
        let found = classes.iter_mut().find(|c| {
            let rep = c[0];
            iso.contains(g.compose(a, g.inverse(rep)).expect("same source"))
        });
        match found {
            Some(c) => c.push(a),
            None => classes.push(vec![a]),
        }
    }
    Ok(CosetDecomposition { unit: u, classes })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassReport {
    pub representative: String,
    pub range: String,
    pub size: usize,
    pub eigenvalue_distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockReport {
    pub unit: String,
    pub off_block_max: f64,
    pub max_eigenvalue_distance: f64,
    pub classes: Vec<ClassReport>,
}

/// `Q_u`: restriction of isotropy-supported functions to `I^G_u`.
#[derive(Debug, Clone)]
pub struct QuotientMap {
    unit: Arrow,
    iso: Arc<TwistedAlgebra>,
    group: Arc<TwistedAlgebra>,
    // group arrow → iso arrow
    to_iso: Vec<Arrow>,
}

impl QuotientMap {
    pub fn unit(&self) -> Arrow {
        self.unit
    }

    pub fn group_algebra(&self) -> &Arc<TwistedAlgebra> {
        &self.group
    }

    pub fn apply(&self, f: &AlgElem) -> Result<AlgElem, StructureError> {
        if **f.algebra() != *self.iso {
            return Err(StructureError::ContextMismatch);
        }
        let coeffs = self.to_iso.iter().map(|&a| f.coeff(a)).collect();
        Ok(self.group.from_coeffs(coeffs).expect("length"))
    }

    /// Matrix of `Q_u` in the point-mass bases.
    pub fn matrix(&self) -> CMatrix {
        let mut m = CMatrix::zeros(self.group.dim(), self.iso.dim());
        for (i, a) in self.to_iso.iter().enumerate() {
            m[(i, a.0)] = ONE;
        }
        m
    }

    /// Basis of `ker Q_u`, as coefficient vectors on `I^G`.
    pub fn kernel_basis(&self) -> Vec<AlgElem> {
        linalg::null_space(&self.matrix(), rep::RANK_TOL)
            .into_iter()
            .map(|v| self.iso.from_coeffs(v.iter().copied().collect()).expect("length"))
            .collect()
    }

    pub fn kernel_dim(&self) -> usize {
        self.iso.dim() - linalg::rank(&self.matrix(), rep::RANK_TOL)
    }

    /// Whether `f` vanishes on `I^G_u`.
    pub fn kills(&self, f: &AlgElem, tol: f64) -> bool {
        self.to_iso.iter().all(|&a| f.coeff(a).norm() <= tol)
    }
}

/// Convenience wrapper: `Q_u(f)` for `f` in the isotropy algebra.
pub fn quotient_to_isotropy_group(
    emb: &IsotropyEmbedding,
    f: &AlgElem,
    unit: &str,
) -> Result<AlgElem, StructureError> {
    emb.quotient(unit)?.apply(f)
}

#[derive(Debug, Clone)]
pub struct CompressionCertificate {
    pub unit: Arrow,
    pub compressor: AlgElem,
    pub compressed: AlgElem,
    pub support_in_isotropy: bool,
    pub support_in_isotropy_group: bool,
    pub compressor_norm: f64,
    pub compressor_positive: bool,
    pub compressor_at_unit: num_complex::Complex64,
}

impl CompressionCertificate {
    pub fn holds(&self) -> bool {
        self.support_in_isotropy
            && self.support_in_isotropy_group
            && (self.compressor_norm - 1.0).abs() < 1e-9
            && self.compressor_positive
            && self.compressor_at_unit == ONE
    }
}

/// Compress `f` by `b = δ_u`.
pub fn compress(f: &AlgElem, unit: &str) -> Result<CompressionCertificate, StructureError> {
    let alg = f.algebra();
    let g = alg.groupoid();
    let u = g.unit(unit).map_err(|_| StructureError::UnknownUnit(unit.to_string()))?;
    let b = alg.delta(u);
    let compressed = &(&b * f) * &b;
    let iso = g.interior_isotropy();
    let (vals, _) = linalg::hermitian_eigen(&rep::direct_sum_rep(&b));
    let support_in_isotropy = compressed.support().all(|a| iso.contains(a));
    let support_in_isotropy_group = compressed.support().all(|a| g.range(a) == u && g.source(a) == u);
    Ok(CompressionCertificate {
        unit: u,
        support_in_isotropy,
        support_in_isotropy_group,
        compressor_norm: rep::reduced_norm(&b),
        compressor_positive: vals.iter().all(|&v| v >= -1e-12) && b == b.involute(),
        compressor_at_unit: b.coeff(u),
        compressor: b,
        compressed,
    })
}

/// The homomorphism `C*(Γ, τ̄) → M_n` induced by a `τ̄`-twisted unitary
/// representation `u` of the group `Γ`, where `τ` is the cocycle of the
/// twist. On twist generators it sends `δ^T_(γ,k)` to `exp(−2πik/m) u_γ`.
pub fn universal_hom(tau: &Cocycle, unitaries: Vec<CMatrix>) -> Result<StarHom, StructureError> {
    let g = tau.groupoid();
    if !g.is_group() {
        return Err(StructureError::NotAGroup(g.units().len()));
    }
    if unitaries.len() != g.len() {
        return Err(RepError::MissingImage {
            expected: g.len(),
            got: unitaries.len(),
        }
        .into());
    }
    let n = unitaries[0].nrows();
    if unitaries.iter().any(|m| m.shape() != (n, n)) {
        return Err(RepError::DimensionMismatch(n).into());
    }
    let id = CMatrix::identity(n, n);
    for a in g.arrows() {
        let r = linalg::max_abs(&(&unitaries[a.0].adjoint() * &unitaries[a.0] - &id));
        if r > RELATION_TOL {
            return Err(StructureError::NotUnitary(g.name(a).to_string(), r));
        }
    }
    let bar = tau.conjugate();
    for (a, b, ab) in g.composable_pairs() {
        let lhs = &unitaries[a.0] * &unitaries[b.0];
        let rhs = &unitaries[ab.0] * bar.value(a, b);
        let r = linalg::max_abs(&(lhs - rhs));
        if r > RELATION_TOL {
            return Err(StructureError::RelationViolation(g.name(a).to_string(), g.name(b).to_string(), r));
        }
    }
    let alg = TwistedAlgebra::of_twist(tau);
    Ok(rep::build_hom(alg, n, unitaries)?)
}

/// `t_ε = exp(−2πik/m) u_γ` for `ε = (γ, k)`.
pub fn twist_image(tau: &Cocycle, unitaries: &[CMatrix], eps: TwistElement) -> CMatrix {
    let m = tau.order();
    &unitaries[eps.base.0] * phase(m - eps.phase % m, m)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UniquenessReport {
    pub inj_full: bool,
    pub inj_on_isotropy: bool,
    pub rank_full: usize,
    pub rank_on_isotropy: usize,
    pub theorem_consistent: bool,
}

/// Compare injectivity of `Ψ` with injectivity of `Ψ∘ι`.
pub fn uniqueness_check(h: &StarHom) -> Result<UniquenessReport, StructureError> {
    if !h.is_validated() {
        return Err(StructureError::UnvalidatedHom);
    }
    let g = h.algebra().groupoid();
    let iso = g.interior_isotropy();
    let rank_full = h.rank();
    let rank_on_isotropy = h.rank_on(iso.mask());
    let inj_full = rank_full == g.len();
    let inj_on_isotropy = rank_on_isotropy == iso.len();
    Ok(UniquenessReport {
        inj_full,
        inj_on_isotropy,
        rank_full,
        rank_on_isotropy,
        theorem_consistent: inj_full == inj_on_isotropy,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SimplicityReport {
    pub effective: bool,
    pub minimal: bool,
    /// `Some(minimal)` when the groupoid is effective; the groupoid
    /// criterion says nothing otherwise.
    pub criterion_verdict: Option<bool>,
    pub oracle_blocks: Vec<usize>,
    pub oracle_simple: bool,
    pub consistent: Option<bool>,
    pub seed: u64,
}

/// Simplicity by the groupoid criterion (effective + minimal) against the
/// Wedderburn block oracle.
pub fn simplicity_report(alg: &Arc<TwistedAlgebra>, seed: u64) -> Result<SimplicityReport, StructureError> {
    let g = alg.groupoid();
    let (effective, minimal) = (g.is_effective(), g.is_minimal());
    let image = rep::algebra_image(alg)?;
    let blocks = rep::wedderburn_blocks(&image, seed)?;
    let oracle_simple = blocks.is_simple();
    let criterion_verdict = effective.then_some(minimal);
    Ok(SimplicityReport {
        effective,
        minimal,
        criterion_verdict,
        oracle_simple,
        consistent: criterion_verdict.map(|v| v == oracle_simple),
        oracle_blocks: blocks.sizes,
        seed,
    })
}

/// The homomorphism that keeps the regular representations at `keep` and
/// drops the others: `T_γ = ⊕_{u ∈ keep} π_u(δ_γ)`.
pub fn block_quotient_hom(alg: &Arc<TwistedAlgebra>, keep: &[&str]) -> Result<StarHom, StructureError> {
    let g = alg.groupoid();
    let units = keep
        .iter()
        .map(|&name| g.unit(name).map_err(|_| StructureError::UnknownUnit(name.to_string())))
        .collect::<Result<Vec<_>, _>>()?;
    let images: Vec<CMatrix> = g
        .arrows()
        .map(|a| {
            let blocks: Vec<CMatrix> = units
                .iter()
                .map(|&u| regular_rep(&alg.delta(a), u).expect("unit").matrix)
                .collect();
            linalg::direct_sum(&blocks)
        })
        .collect();
    let dim = images.first().map_or(0, |m| m.nrows());
    Ok(rep::build_hom(alg.clone(), dim, images)?)
}
