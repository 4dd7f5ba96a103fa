//! Regular representations, the reduced norm, concrete matrix algebras and
//! their Wedderburn decomposition, and *-homomorphisms given on generators.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{AlgElem, AlgebraExt, TwistedAlgebra};
use crate::groupoid::Arrow;
use crate::linalg::{self, CMatrix, CVector, ONE, ZERO};
use num_complex::Complex64;

/// Relative rank threshold for linear independence tests.
pub const RANK_TOL: f64 = 1e-8;
/// Tolerance on generator relations of a homomorphism.
pub const RELATION_TOL: f64 = 1e-9;
/// Eigenvalue gap below which two central eigenvalues count as ambiguous.
pub const BLOCK_GAP: f64 = 1e-6;
const BLOCK_RETRIES: usize = 5;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RepError {
    #[error("unknown unit #{0}")]
    UnknownUnit(usize),
    #[error("span is not closed under product/adjoint (residual {0:e})")]
    ClosureFailure(f64),
    #[error("image has linear dimension {got}, expected {expected}")]
    RankDeficient { expected: usize, got: usize },
    #[error("central eigenvalues could not be separated after {0} attempts")]
    ToleranceAmbiguity(usize),
    #[error("generator relation fails for ({0}, {1}) (residual {2:e})")]
    RelationViolation(String, String, f64),
    #[error("adjoint relation fails at `{0}` (residual {1:e})")]
    AdjointViolation(String, f64),
    #[error("expected {expected} generator images, got {got}")]
    MissingImage { expected: usize, got: usize },
    #[error("generator images must all be {0}×{0}")]
    DimensionMismatch(usize),
}

/// `π_u(f)` on `ℓ²(G_u)`, basis in canonical order.
#[derive(Debug, Clone, PartialEq)]
pub struct RepMatrix {
    pub unit: Arrow,
    pub basis: Vec<Arrow>,
    pub matrix: CMatrix,
}

/// Matrix of left twisted convolution by `f` on `ℓ²(G_u)`:
/// `M[γ', γ] = σ(γ'γ⁻¹, γ) f(γ'γ⁻¹)`.
pub fn regular_rep(f: &AlgElem, u: Arrow) -> Result<RepMatrix, RepError> {
    let alg = f.algebra();
    let g = alg.groupoid();
    if u.0 >= g.len() || !g.is_unit(u) {
        return Err(RepError::UnknownUnit(u.0));
    }
    let sigma = alg.cocycle();
    let basis = g.source_fiber(u);
    let n = basis.len();
    let mut m = CMatrix::zeros(n, n);
    for (j, &col) in basis.iter().enumerate() {
        let col_inv = g.inverse(col);
        for (i, &row) in basis.iter().enumerate() {
            let eta = g.compose(row, col_inv).expect("same source fiber");
            let c = f.coeff(eta);
            if c != ZERO {
                m[(i, j)] = sigma.value(eta, col) * c;
            }
        }
    }
    Ok(RepMatrix { unit: u, basis, matrix: m })
}

/// `⊕_u π_u(f)`, units in canonical order. Its size is `|G|`.
pub fn direct_sum_rep(f: &AlgElem) -> CMatrix {
    let g = f.algebra().groupoid();
    let blocks: Vec<CMatrix> = g
        .units()
        .iter()
        .map(|&u| regular_rep(f, u).expect("unit").matrix)
        .collect();
    linalg::direct_sum(&blocks)
}

/// `‖f‖_r = max_u ‖π_u(f)‖`.
pub fn reduced_norm(f: &AlgElem) -> f64 {
    let g = f.algebra().groupoid();
    g.units()
        .iter()
        .map(|&u| linalg::spectral_norm(&regular_rep(f, u).expect("unit").matrix))
        .fold(0.0, f64::max)
}

/// A *-subalgebra of `M_n`, stored as a spanning set plus a
/// Frobenius-orthonormal basis of the span.
#[derive(Debug, Clone)]
pub struct MatrixAlgebra {
    n: usize,
    spanning: Vec<CMatrix>,
    basis: Vec<CMatrix>,
}

impl MatrixAlgebra {
    /// Span of `spanning`; closure is not checked (see [`Self::check_closure`]).
    pub fn from_spanning(n: usize, spanning: Vec<CMatrix>) -> Self {
        let cols: Vec<CVector> = spanning.iter().map(linalg::vectorize).collect();
        let basis = linalg::column_space(&cols, 1e-10)
            .iter()
            .map(|v| linalg::unvectorize(v, n))
            .collect();
        MatrixAlgebra { n, spanning, basis }
    }

    /// The *-algebra generated by `gens` (products and adjoints until the
    /// dimension stabilizes).
    pub fn generated_by(n: usize, gens: Vec<CMatrix>) -> Self {
        let mut spanning = gens.clone();
        spanning.extend(gens.iter().map(|g| g.adjoint()));
        let mut alg = Self::from_spanning(n, spanning);
        loop {
            let before = alg.dim();
            let mut next = alg.basis.clone();
            for a in &alg.basis {
                for b in &alg.basis {
                    next.push(a * b);
                }
            }
            alg = Self::from_spanning(n, next);
            if alg.dim() == before {
                return alg;
            }
        }
    }

    /// All of `M_n`.
    pub fn full(n: usize) -> Self {
        let units = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| {
                let mut m = CMatrix::zeros(n, n);
                m[(i, j)] = ONE;
                m
            })
            .collect();
        Self::from_spanning(n, units)
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    /// Linear dimension.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[CMatrix] {
        &self.basis
    }

    pub fn spanning(&self) -> &[CMatrix] {
        &self.spanning
    }

    /// Coordinates in the orthonormal basis: `⟨B_i, m⟩ = tr(B_i† m)`.
    pub fn coordinates(&self, m: &CMatrix) -> CVector {
        CVector::from_iterator(self.dim(), self.basis.iter().map(|b| b.dotc(m)))
    }

    pub fn from_coordinates(&self, c: &CVector) -> CMatrix {
        let mut out = CMatrix::zeros(self.n, self.n);
        for (b, &x) in self.basis.iter().zip(c.iter()) {
            out += b.scale(1.0) * x;
        }
        out
    }

    /// Orthogonal projection onto the span.
    pub fn project(&self, m: &CMatrix) -> CMatrix {
        self.from_coordinates(&self.coordinates(m))
    }

    /// Frobenius distance from `m` to the span (an upper bound on the
    /// operator-norm distance).
    pub fn distance(&self, m: &CMatrix) -> f64 {
        linalg::frobenius(&(m - self.project(m)))
    }

    pub fn contains(&self, m: &CMatrix, tol: f64) -> bool {
        self.distance(m) <= tol * (1.0 + linalg::frobenius(m))
    }

    /// Largest residual of `B_i B_j` and `B_i†` outside the span.
    pub fn closure_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for a in &self.basis {
            worst = worst.max(self.distance(&a.adjoint()));
            for b in &self.basis {
                worst = worst.max(self.distance(&(a * b)));
            }
        }
        worst
    }

    pub fn check_closure(&self, tol: f64) -> Result<(), RepError> {
        let r = self.closure_residual();
        if r <= tol {
            Ok(())
        } else {
            Err(RepError::ClosureFailure(r))
        }
    }

    pub fn is_subalgebra_of(&self, other: &MatrixAlgebra, tol: f64) -> bool {
        self.n == other.n && self.basis.iter().all(|b| other.contains(b, tol))
    }

    /// Orthonormal basis of the center.
    pub fn center(&self) -> Vec<CMatrix> {
        let d = self.dim();
        if d == 0 {
            return Vec::new();
        }
        // Column j, block i: coordinates of [B_j, B_i].
        let mut l = CMatrix::zeros(d * d, d);
        for (j, bj) in self.basis.iter().enumerate() {
            for (i, bi) in self.basis.iter().enumerate() {
                let comm = bj * bi - bi * bj;
                let c = self.coordinates(&comm);
                l.view_mut((i * d, j), (d, 1)).copy_from(&c);
            }
        }
        let kernel = linalg::null_space(&l, RANK_TOL);
        let mats: Vec<CVector> = kernel.iter().map(|c| linalg::vectorize(&self.from_coordinates(c))).collect();
        linalg::column_space(&mats, 1e-10)
            .iter()
            .map(|v| linalg::unvectorize(v, self.n))
            .collect()
    }

    /// The unit of the algebra (every finite-dimensional C*-algebra has one).
    pub fn unit(&self) -> Option<CMatrix> {
        let d = self.dim();
        if d == 0 {
            return None;
        }
        // Solve e B_i = B_i and B_i e = B_i for e = Σ c_j B_j.
        let mut l = CMatrix::zeros(2 * d * d, d);
        let mut rhs = CVector::zeros(2 * d * d);
        for (i, bi) in self.basis.iter().enumerate() {
            let target = self.coordinates(bi);
            rhs.rows_mut(2 * i * d, d).copy_from(&target);
            rhs.rows_mut((2 * i + 1) * d, d).copy_from(&target);
            for (j, bj) in self.basis.iter().enumerate() {
                l.view_mut((2 * i * d, j), (d, 1)).copy_from(&self.coordinates(&(bj * bi)));
                l.view_mut(((2 * i + 1) * d, j), (d, 1)).copy_from(&self.coordinates(&(bi * bj)));
            }
        }
        let c = l.clone().svd(true, true).solve(&rhs, 1e-12).ok()?;
        if (&l * &c - &rhs).norm() > 1e-8 * (1.0 + rhs.norm()) {
            return None;
        }
        Some(self.from_coordinates(&c))
    }

    pub fn contains_identity(&self, tol: f64) -> bool {
        self.contains(&CMatrix::identity(self.n, self.n), tol)
    }
}

/// `⊕_u π_u(C_c(G,σ))`, spanned by the images of the point masses.
pub fn algebra_image(alg: &Arc<TwistedAlgebra>) -> Result<MatrixAlgebra, RepError> {
    let g = alg.groupoid();
    let spanning: Vec<CMatrix> = g.arrows().map(|a| direct_sum_rep(&alg.delta(a))).collect();
    let image = MatrixAlgebra::from_spanning(g.len(), spanning);
    if image.dim() != g.len() {
        return Err(RepError::RankDeficient {
            expected: g.len(),
            got: image.dim(),
        });
    }
    image.check_closure(1e-9)?;
    Ok(image)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockDecomposition {
    /// Block sizes `d_i`, ascending.
    pub sizes: Vec<usize>,
    pub center_dim: usize,
    pub seed: u64,
    pub attempts: usize,
}

impl BlockDecomposition {
    pub fn is_simple(&self) -> bool {
        self.sizes.len() == 1
    }

    pub fn dimension(&self) -> usize {
        self.sizes.iter().map(|d| d * d).sum()
    }
}

/// Matrix-block sizes of a finite-dimensional C*-algebra, from the spectral
/// projections of a random Hermitian central element.
pub fn wedderburn_blocks(a: &MatrixAlgebra, seed: u64) -> Result<BlockDecomposition, RepError> {
    let center = a.center();
    let k = center.len();
    let n = a.ambient_dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 1..=BLOCK_RETRIES {
        let mut h = CMatrix::zeros(n, n);
        for z in &center {
            let (x, y): (f64, f64) = (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            let herm = z + z.adjoint();
            let skew = (z - z.adjoint()) * Complex64::new(0.0, 1.0);
            h += herm * Complex64::new(x, 0.0) + skew * Complex64::new(y, 0.0);
        }
        let (vals, vecs) = linalg::hermitian_eigen(&h);
        let scale = vals.iter().map(|v| v.abs()).fold(1.0, f64::max);
        let mut ambiguous = false;
        let mut clusters: Vec<Vec<usize>> = Vec::new();
        for (i, &v) in vals.iter().enumerate() {
            match clusters.last_mut() {
                Some(c) if (v - vals[*c.last().expect("nonempty")]).abs() <= BLOCK_GAP * scale => {
                    if (v - vals[*c.last().expect("nonempty")]).abs() > 1e-9 * scale {
                        ambiguous = true;
                    }
                    c.push(i)
                }
                _ => clusters.push(vec![i]),
            }
        }
        if ambiguous {
            continue;
        }
        let mut sizes = Vec::new();
        let mut perfect = true;
        for cluster in &clusters {
            let cols: Vec<CVector> = cluster.iter().map(|&i| vecs.column(i).into_owned()).collect();
            let v = CMatrix::from_columns(&cols);
            let p = &v * v.adjoint();
            let images: Vec<CVector> = a.basis().iter().map(|b| linalg::vectorize(&(b * &p))).collect();
            let r = linalg::column_space(&images, RANK_TOL).len();
            if r == 0 {
                continue;
            }
            let d = (r as f64).sqrt().round() as usize;
            if d * d != r {
                perfect = false;
            }
            sizes.push(d);
        }
        sizes.sort();
        let dec = BlockDecomposition {
            sizes,
            center_dim: k,
            seed,
            attempts: attempt,
        };
        if perfect && dec.sizes.len() == k && dec.dimension() == a.dim() {
            return Ok(dec);
        }
    }
    Err(RepError::ToleranceAmbiguity(BLOCK_RETRIES))
}

/// A *-homomorphism out of `C_c(G,σ)`, given by the images `T_γ` of the
/// point masses.
#[derive(Debug, Clone)]
pub struct StarHom {
    alg: Arc<TwistedAlgebra>,
    dim: usize,
    images: Vec<CMatrix>,
    validated: bool,
}

impl StarHom {
    /// Wrap images without checking any relation.
    pub fn unvalidated(alg: Arc<TwistedAlgebra>, dim: usize, images: Vec<CMatrix>) -> Result<Self, RepError> {
        if images.len() != alg.dim() {
            return Err(RepError::MissingImage {
                expected: alg.dim(),
                got: images.len(),
            });
        }
        if images.iter().any(|m| m.shape() != (dim, dim)) {
            return Err(RepError::DimensionMismatch(dim));
        }
        Ok(StarHom {
            alg,
            dim,
            images,
            validated: false,
        })
    }

    pub fn algebra(&self) -> &Arc<TwistedAlgebra> {
        &self.alg
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn images(&self) -> &[CMatrix] {
        &self.images
    }

    pub fn is_validated(&self) -> bool {
        self.validated
    }

    /// `Ψ(f) = Σ f(γ) T_γ`.
    pub fn apply(&self, f: &AlgElem) -> CMatrix {
        let mut out = CMatrix::zeros(self.dim, self.dim);
        for (a, c) in f.generator_decomposition() {
            out += &self.images[a.0] * c;
        }
        out
    }

    /// Check `Ψ(δ_α)Ψ(δ_β) = Ψ(δ_α δ_β)` and `Ψ(δ_γ)† = Ψ(δ_γ*)` on all
    /// generators; tolerance is relative to the largest image.
    pub fn validate(mut self, tol: f64) -> Result<Self, RepError> {
        let g = self.alg.groupoid();
        let scale = 1.0 + self.images.iter().map(linalg::max_abs).fold(0.0, f64::max).powi(2);
        for a in g.arrows() {
            let da = self.alg.delta(a);
            let adj = self.apply(&da.involute());
            let r = linalg::max_abs(&(&self.images[a.0].adjoint() - adj));
            if r > tol * scale {
                return Err(RepError::AdjointViolation(g.name(a).to_string(), r));
            }
            for b in g.arrows() {
                let lhs = &self.images[a.0] * &self.images[b.0];
                let rhs = self.apply(&(&da * &self.alg.delta(b)));
                let r = linalg::max_abs(&(lhs - rhs));
                if r > tol * scale {
                    return Err(RepError::RelationViolation(g.name(a).to_string(), g.name(b).to_string(), r));
                }
            }
        }
        self.validated = true;
        Ok(self)
    }

    /// Rank of `f ↦ Ψ(f)` restricted to coefficients where `mask` is set.
    pub fn rank_on(&self, mask: &[bool]) -> usize {
        let cols: Vec<CVector> = self
            .images
            .iter()
            .zip(mask)
            .filter(|(_, &keep)| keep)
            .map(|(m, _)| linalg::vectorize(m))
            .collect();
        if cols.is_empty() || self.dim == 0 {
            return 0;
        }
        linalg::rank(&CMatrix::from_columns(&cols), RANK_TOL)
    }

    pub fn rank(&self) -> usize {
        self.rank_on(&vec![true; self.images.len()])
    }

    pub fn is_injective(&self) -> bool {
        self.rank() == self.images.len()
    }
}

/// Validate generator images into a [`StarHom`].
pub fn build_hom(alg: Arc<TwistedAlgebra>, dim: usize, images: Vec<CMatrix>) -> Result<StarHom, RepError> {
    StarHom::unvalidated(alg, dim, images)?.validate(RELATION_TOL)
}

/// `T_γ = ⊕_u π_u(δ_γ)`.
pub fn identity_hom(alg: &Arc<TwistedAlgebra>) -> StarHom {
    let images = alg.groupoid().arrows().map(|a| direct_sum_rep(&alg.delta(a))).collect();
    build_hom(alg.clone(), alg.dim(), images).expect("regular representation is a *-homomorphism")
}

/// `T_γ = π_u(δ_γ)` for a single unit.
pub fn regular_hom(alg: &Arc<TwistedAlgebra>, u: Arrow) -> Result<StarHom, RepError> {
    let g = alg.groupoid();
    let dim = g.source_fiber(u).len();
    let images = g
        .arrows()
        .map(|a| regular_rep(&alg.delta(a), u).map(|r| r.matrix))
        .collect::<Result<Vec<_>, _>>()?;
    build_hom(alg.clone(), dim, images)
}

/// The all-zero homomorphism into `M_dim`.
pub fn zero_hom(alg: &Arc<TwistedAlgebra>, dim: usize) -> StarHom {
    let images = vec![CMatrix::zeros(dim, dim); alg.dim()];
    build_hom(alg.clone(), dim, images).expect("zero map is a *-homomorphism")
}
