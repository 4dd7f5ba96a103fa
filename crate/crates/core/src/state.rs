//! States on concrete C*-subalgebras of `M_n`: left kernels, multiplicative
//! domains, compressibility certificates and extension of states from a
//! subalgebra.
//!
//! A state is stored through its Riesz matrix `ρ` (inside the algebra's
//! span), with `φ(a) = tr(ρ† a)`.

use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::algebra::{AlgebraExt, TwistedAlgebra};
use crate::linalg::{self, CMatrix, CVector, ONE, ZERO};
use crate::rep::{self, MatrixAlgebra};
use crate::sdp::{self, SdpError, SdpProblem};

/// A *-subalgebra of some `M_n`.
pub type ConcreteAlgebra = MatrixAlgebra;

/// Default tolerance for state axioms and membership tests.
pub const STATE_TOL: f64 = 1e-9;
/// Extensions whose probe values differ by more than this are distinct.
pub const UNIQUENESS_TOL: f64 = 1e-7;

#[derive(Debug, Error)]
pub enum StateError {
    #[error("not a state: {0}")]
    NotAState(String),
    #[error("not a subalgebra: {0}")]
    NotASubalgebra(String),
    #[error("no state extension exists: {0}")]
    Infeasible(String),
    #[error("ambient dimensions differ ({0} vs {1})")]
    DimensionMismatch(usize, usize),
    #[error("semidefinite solver failed: {0}")]
    Solver(#[from] SdpError),
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn check_algebra(a: &ConcreteAlgebra, what: &str) -> Result<(), StateError> {
    let r = a.closure_residual();
    if r > 1e-8 {
        return Err(StateError::NotASubalgebra(format!("{what} is not closed (residual {r:.3e})")));
    }
    if a.dim() == 0 {
        return Err(StateError::NotASubalgebra(format!("{what} is zero")));
    }
    Ok(())
}

fn check_inclusion(a: &ConcreteAlgebra, b: &ConcreteAlgebra) -> Result<(), StateError> {
    if a.ambient_dim() != b.ambient_dim() {
        return Err(StateError::DimensionMismatch(a.ambient_dim(), b.ambient_dim()));
    }
    check_algebra(a, "A")?;
    check_algebra(b, "B")?;
    if !b.is_subalgebra_of(a, 1e-8) {
        return Err(StateError::NotASubalgebra("B is not contained in A".into()));
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct StateFunctional {
    algebra: Arc<ConcreteAlgebra>,
    riesz: CMatrix,
}

impl StateFunctional {
    /// Validates positivity and `φ(1_A) = 1`.
    pub fn new(algebra: Arc<ConcreteAlgebra>, riesz: CMatrix) -> Result<Self, StateError> {
        let n = algebra.ambient_dim();
        if riesz.shape() != (n, n) {
            return Err(StateError::DimensionMismatch(n, riesz.nrows()));
        }
        let phi = Self::unchecked(algebra, riesz);
        let unit = phi
            .algebra
            .unit()
            .ok_or_else(|| StateError::NotAState("algebra has no unit".into()))?;
        let at_unit = phi.eval(&unit);
        if (at_unit - ONE).norm() > STATE_TOL * 10.0 {
            return Err(StateError::NotAState(format!("φ(1) = {at_unit}, expected 1")));
        }
        let (vals, _) = linalg::hermitian_eigen(&phi.gram());
        let gram_herm = linalg::max_abs(&(phi.gram() - phi.gram().adjoint()));
        let lowest = vals.first().copied().unwrap_or(0.0);
        if lowest < -STATE_TOL * 10.0 || gram_herm > 1e-8 {
            return Err(StateError::NotAState(format!("not positive (min φ(a*a) eigenvalue {lowest:.3e})")));
        }
        Ok(phi)
    }

    fn unchecked(algebra: Arc<ConcreteAlgebra>, riesz: CMatrix) -> Self {
        let riesz = algebra.project(&riesz);
        StateFunctional { algebra, riesz }
    }

    /// The vector state `a ↦ ⟨v, a v⟩` (with `v` normalized).
    pub fn vector_state(algebra: Arc<ConcreteAlgebra>, v: &CVector) -> Result<Self, StateError> {
        let v = v / c(v.norm());
        Self::new(algebra, &v * v.adjoint())
    }

    pub fn algebra(&self) -> &Arc<ConcreteAlgebra> {
        &self.algebra
    }

    pub fn riesz(&self) -> &CMatrix {
        &self.riesz
    }

    pub fn eval(&self, a: &CMatrix) -> Complex64 {
        self.riesz.dotc(a)
    }

    /// `H_ij = φ(b_i* b_j)` over the orthonormal basis of the algebra.
    pub fn gram(&self) -> CMatrix {
        let b = self.algebra.basis();
        CMatrix::from_fn(b.len(), b.len(), |i, j| self.eval(&(b[i].adjoint() * &b[j])))
    }

    /// Restriction to a subalgebra.
    pub fn restrict(&self, sub: Arc<ConcreteAlgebra>) -> Result<Self, StateError> {
        if !sub.is_subalgebra_of(&self.algebra, 1e-8) {
            return Err(StateError::NotASubalgebra("restriction target is not contained in the domain".into()));
        }
        Ok(Self::unchecked(sub, self.riesz.clone()))
    }

    /// Largest difference `|φ(b) − ψ(b)|` over the orthonormal basis of
    /// `sub`.
    pub fn max_deviation_on(&self, other: &StateFunctional, sub: &ConcreteAlgebra) -> f64 {
        sub.basis()
            .iter()
            .map(|b| (self.eval(b) - other.eval(b)).norm())
            .fold(0.0, f64::max)
    }

    /// Orthonormal basis of the left kernel `L_φ = {a : φ(a*a) = 0}`.
    pub fn null_space(&self) -> Vec<CMatrix> {
        let (vals, vecs) = linalg::hermitian_eigen(&self.gram());
        let top = vals.last().copied().unwrap_or(0.0).max(1.0);
        vals.iter()
            .enumerate()
            .filter(|(_, &v)| v <= STATE_TOL * top)
            .map(|(k, _)| self.algebra.from_coordinates(&vecs.column(k).into_owned()))
            .collect()
    }

    /// Purity via the GNS representation: `φ` is pure iff `π_φ` is
    /// irreducible, i.e. `dim(A/L_φ)² = dim π_φ(A)`.
    pub fn is_pure(&self) -> bool {
        let b = self.algebra.basis();
        let d = b.len();
        let gns = d - self.null_space().len();
        // ker π_φ = {a : φ(b_i* a b_j) = 0 for all i, j}
        let mut l = CMatrix::zeros(d * d, d);
        for (k, bk) in b.iter().enumerate() {
            for i in 0..d {
                for j in 0..d {
                    l[(i * d + j, k)] = self.eval(&(b[i].adjoint() * bk * &b[j]));
                }
            }
        }
        let image_dim = d - linalg::null_space(&l, 1e-8).len();
        gns * gns == image_dim
    }

    pub fn in_null_space(&self, a: &CMatrix) -> bool {
        self.algebra.contains(a, 1e-8) && self.eval(&(a.adjoint() * a)).re.abs() <= 1e-8 * (1.0 + linalg::frobenius(a).powi(2))
    }
}

/// An algebra containing the ambient identity, with the state moved along.
#[derive(Debug, Clone)]
pub struct Unitized {
    pub state: StateFunctional,
    /// Whether a unit was adjoined (ambient grows by one).
    pub adjoined: bool,
}

impl Unitized {
    pub fn of(phi: &StateFunctional) -> Self {
        if phi.algebra.contains_identity(1e-9) {
            return Unitized { state: phi.clone(), adjoined: false };
        }
        let n = phi.algebra.ambient_dim();
        let grow = |a: &CMatrix| {
            let mut out = CMatrix::zeros(n + 1, n + 1);
            out.view_mut((0, 0), (n, n)).copy_from(a);
            out
        };
        let mut spanning: Vec<CMatrix> = phi.algebra.basis().iter().map(grow).collect();
        spanning.push(CMatrix::identity(n + 1, n + 1));
        let algebra = Arc::new(MatrixAlgebra::from_spanning(n + 1, spanning));
        let mut riesz = grow(&phi.riesz);
        riesz[(n, n)] = ONE - phi.riesz.trace();
        Unitized {
            state: StateFunctional::unchecked(algebra, riesz),
            adjoined: true,
        }
    }

    /// Image of an element of the original algebra.
    pub fn embed(&self, a: &CMatrix) -> CMatrix {
        if !self.adjoined {
            return a.clone();
        }
        let n = a.nrows();
        let mut out = CMatrix::zeros(n + 1, n + 1);
        out.view_mut((0, 0), (n, n)).copy_from(a);
        out
    }
}

/// The multiplicative domain `M_φ = {a : φ(ab) = φ(a)φ(b), φ(ba) = φ(b)φ(a) ∀b}`,
/// computed in the unitization.
#[derive(Debug, Clone)]
pub struct MultDomain {
    pub unitized: Unitized,
    /// Orthonormal basis (matrices in the unitized ambient).
    pub basis: Vec<CMatrix>,
    /// Dimension of `{a : a − φ(a)1 ∈ L_φ ∩ L_φ*}`.
    pub ideal_dim: usize,
    /// Both descriptions give the same subspace.
    pub consistent: bool,
}

impl MultDomain {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Membership for an element of the original algebra.
    pub fn contains(&self, a: &CMatrix) -> bool {
        let x = self.unitized.embed(a);
        let proj = self.basis.iter().fold(CMatrix::zeros(x.nrows(), x.ncols()), |acc, b| acc + b * b.dotc(&x));
        linalg::frobenius(&(&x - proj)) <= 1e-7 * (1.0 + linalg::frobenius(&x))
    }
}

fn projector(vs: &[CVector], d: usize) -> CMatrix {
    vs.iter().fold(CMatrix::zeros(d, d), |acc, v| acc + v * v.adjoint())
}

fn same_subspace(a: &[CVector], b: &[CVector], d: usize) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let pb = projector(b, d);
    a.iter().all(|v| (v - &pb * v).norm() <= 1e-6)
}

pub fn mult_domain(phi: &StateFunctional) -> MultDomain {
    let unitized = Unitized::of(phi);
    let psi = &unitized.state;
    let alg = psi.algebra.clone();
    let basis = alg.basis();
    let d = basis.len();
    let w: Vec<Complex64> = basis.iter().map(|b| psi.eval(b)).collect();

    // linear conditions on the coordinates c of a = Σ c_j b_j
    let mut l = CMatrix::zeros(2 * d, d);
    for i in 0..d {
        for j in 0..d {
            l[(2 * i, j)] = psi.eval(&(&basis[j] * &basis[i])) - w[j] * w[i];
            l[(2 * i + 1, j)] = psi.eval(&(&basis[i] * &basis[j])) - w[i] * w[j];
        }
    }
    let direct = linalg::null_space(&l, 1e-8);

    // a − φ(a)1 ∈ L_φ ∩ L_φ*
    let left: Vec<CVector> = psi.null_space().iter().map(|m| alg.coordinates(m)).collect();
    let right: Vec<CVector> = psi.null_space().iter().map(|m| alg.coordinates(&m.adjoint())).collect();
    let eye = CMatrix::identity(d, d);
    let mut stacked = CMatrix::zeros(2 * d, d);
    stacked.view_mut((0, 0), (d, d)).copy_from(&(&eye - projector(&left, d)));
    stacked.view_mut((d, 0), (d, d)).copy_from(&(&eye - projector(&right, d)));
    let both = linalg::null_space(&stacked, 1e-8);
    let one = alg.coordinates(&CMatrix::identity(alg.ambient_dim(), alg.ambient_dim()));
    let wrow = CMatrix::from_fn(1, d, |_, j| w[j]);
    let t = (&eye - projector(&both, d)) * (&eye - &one * wrow);
    let via_ideal = linalg::null_space(&t, 1e-8);

    let consistent = same_subspace(&direct, &via_ideal, d);
    let mats: Vec<CVector> = direct.iter().map(|c| linalg::vectorize(&alg.from_coordinates(c))).collect();
    let n = alg.ambient_dim();
    MultDomain {
        basis: linalg::column_space(&mats, 1e-10).iter().map(|v| linalg::unvectorize(v, n)).collect(),
        ideal_dim: via_ideal.len(),
        consistent,
        unitized,
    }
}

/// Outcome of testing `a` against the unitary peak set
/// `U_φ = {a : ‖a‖ = 1 = |φ(a)|}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PeakCheck {
    pub member: bool,
    pub in_mult_domain: bool,
}

impl PeakCheck {
    /// Members of the peak set lie in the multiplicative domain.
    pub fn holds(&self) -> bool {
        !self.member || self.in_mult_domain
    }
}

pub fn in_unitary_peak_set(phi: &StateFunctional, domain: &MultDomain, a: &CMatrix) -> PeakCheck {
    let member = phi.algebra.contains(a, 1e-8)
        && (linalg::spectral_norm(a) - 1.0).abs() <= STATE_TOL
        && (phi.eval(a).norm() - 1.0).abs() <= STATE_TOL;
    PeakCheck {
        member,
        in_mult_domain: domain.contains(a),
    }
}

#[derive(Debug, Clone)]
pub struct CompressOptions {
    /// Random elements of `A` tested on top of its basis.
    pub samples: usize,
    pub seed: u64,
    /// Candidates tried in addition to the generated spectral projections.
    pub extra_candidates: Vec<CMatrix>,
}

impl Default for CompressOptions {
    fn default() -> Self {
        CompressOptions { samples: 16, seed: 0, extra_candidates: Vec::new() }
    }
}

#[derive(Debug, Clone)]
pub struct CompressionSearch {
    /// A positive norm-one `b ∈ B` with `φ(b) = 1` and `bAb ⊆ B`.
    pub certificate: Option<CMatrix>,
    /// Admissible candidate with the smallest compression defect, and that defect.
    pub best: Option<(CMatrix, f64)>,
    pub candidates_tried: usize,
    pub admissible: usize,
}

fn random_element(alg: &ConcreteAlgebra, rng: &mut ChaCha8Rng) -> CMatrix {
    let coords = CVector::from_fn(alg.dim(), |_, _| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    let m = alg.from_coordinates(&coords);
    let norm = linalg::frobenius(&m).max(1e-300);
    m / c(norm)
}

fn random_hermitian(alg: &ConcreteAlgebra, rng: &mut ChaCha8Rng) -> CMatrix {
    let m = random_element(alg, rng);
    (&m + m.adjoint()) * c(0.5)
}

/// Spectral projections of `h`, one per eigenvalue cluster.
fn spectral_projections(h: &CMatrix) -> Vec<CMatrix> {
    let (vals, vecs) = linalg::hermitian_eigen(h);
    let n = vals.len();
    let mut out = Vec::new();
    let mut start = 0;
    for k in 1..=n {
        if k == n || vals[k] - vals[k - 1] > 1e-8 {
            let cols = vecs.columns(start, k - start);
            out.push(&cols * cols.adjoint());
            start = k;
        }
    }
    out
}

fn candidates(b_alg: &ConcreteAlgebra, opts: &CompressOptions) -> Vec<CMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut herms: Vec<CMatrix> = Vec::new();
    for b in b_alg.basis() {
        herms.push((b + b.adjoint()) * c(0.5));
        herms.push((b - b.adjoint()) * Complex64::new(0.0, -0.5));
    }
    for _ in 0..3 {
        herms.push(random_hermitian(b_alg, &mut rng));
    }
    let mut out: Vec<CMatrix> = b_alg.unit().into_iter().collect();
    for h in &herms {
        let projs = spectral_projections(h);
        if projs.len() <= 6 {
            for mask in 1u32..(1 << projs.len()) {
                let n = h.nrows();
                let sum = (0..projs.len())
                    .filter(|k| mask & (1 << k) != 0)
                    .fold(CMatrix::zeros(n, n), |acc, k| acc + &projs[k]);
                out.push(sum);
            }
        } else {
            out.extend(projs);
        }
    }
    out.extend(opts.extra_candidates.iter().cloned());
    out
}

/// Is `b` positive, of norm one, in `B`, with `φ(b) = 1`?
fn admissible(b: &CMatrix, phi: &StateFunctional) -> bool {
    if !phi.algebra.contains(b, 1e-8) || linalg::max_abs(&(b - b.adjoint())) > 1e-9 {
        return false;
    }
    let (vals, _) = linalg::hermitian_eigen(b);
    let (lo, hi) = (vals[0], vals[vals.len() - 1]);
    lo >= -STATE_TOL && (hi - 1.0).abs() <= STATE_TOL && (phi.eval(b) - ONE).norm() <= STATE_TOL
}

/// Search for a compressibility certificate of `φ` (a state on `B ⊆ A`).
pub fn is_compressible(
    a_alg: &ConcreteAlgebra,
    phi: &StateFunctional,
    opts: &CompressOptions,
) -> Result<CompressionSearch, StateError> {
    check_inclusion(a_alg, &phi.algebra)?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x5eed);
    let mut tests: Vec<CMatrix> = a_alg.basis().to_vec();
    tests.extend((0..opts.samples).map(|_| random_element(a_alg, &mut rng)));

    let cands = candidates(&phi.algebra, opts);
    let mut search = CompressionSearch {
        certificate: None,
        best: None,
        candidates_tried: cands.len(),
        admissible: 0,
    };
    for b in cands {
        if !admissible(&b, phi) {
            continue;
        }
        search.admissible += 1;
        let defect = tests
            .iter()
            .map(|a| phi.algebra.distance(&(&b * a * &b)) / linalg::frobenius(a).max(1e-300))
            .fold(0.0, f64::max);
        if search.best.as_ref().is_none_or(|(_, d)| defect < *d) {
            search.best = Some((b.clone(), defect));
        }
        if defect <= 1e-8 {
            search.certificate = Some(b);
            break;
        }
    }
    Ok(search)
}

#[derive(Debug, Clone)]
pub struct ExtendOptions {
    /// Random Hermitian directions along which extensions are maximized and
    /// minimized (at least 8 are used).
    pub probes: usize,
    pub seed: u64,
}

impl Default for ExtendOptions {
    fn default() -> Self {
        ExtendOptions { probes: 8, seed: 0 }
    }
}

#[derive(Debug, Clone)]
pub struct Extension {
    /// One state on `A` restricting to `φ`.
    pub extension: StateFunctional,
    pub unique: bool,
    /// Largest `max − min` of a probe over the set of extensions.
    pub spread: f64,
    /// Two extensions differing by `spread` on a probe, when not unique.
    pub witnesses: Option<(StateFunctional, StateFunctional)>,
    /// Dimension of the subspace the extensions' densities live on.
    pub face_dim: usize,
    pub probes: usize,
}

/// Real symmetric embedding of a Hermitian matrix.
fn real_embed(h: &CMatrix) -> DMatrix<f64> {
    let n = h.nrows();
    let mut out = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let z = h[(i, j)];
            out[(i, j)] = z.re;
            out[(i + n, j + n)] = z.re;
            out[(i, j + n)] = -z.im;
            out[(i + n, j)] = z.im;
        }
    }
    out
}

fn real_unembed(s: &DMatrix<f64>) -> CMatrix {
    let n = s.nrows() / 2;
    CMatrix::from_fn(n, n, |i, j| {
        let re = 0.5 * (s[(i, j)] + s[(i + n, j + n)]);
        let im = 0.5 * (s[(i + n, j)] - s[(i, j + n)]);
        Complex64::new(re, im)
    })
}

struct ExtensionProblem {
    face: CMatrix,
    constraints: Vec<DMatrix<f64>>,
    values: Vec<f64>,
}

impl ExtensionProblem {
    fn build(a_alg: &ConcreteAlgebra, phi: &StateFunctional) -> Result<Self, StateError> {
        let n = a_alg.ambient_dim();
        let unit = a_alg.unit().ok_or_else(|| StateError::NotASubalgebra("A has no unit".into()))?;
        // densities vanish on range(1 − 1_A) and on range(Σ l*l), l ∈ L_φ
        let k = phi
            .null_space()
            .iter()
            .fold(CMatrix::zeros(n, n), |acc, l| acc + l.adjoint() * l);
        let mut stacked = CMatrix::zeros(2 * n, n);
        stacked.view_mut((0, 0), (n, n)).copy_from(&k);
        stacked.view_mut((n, 0), (n, n)).copy_from(&(CMatrix::identity(n, n) - &unit));
        let face_cols = linalg::null_space(&stacked, 1e-9);
        if face_cols.is_empty() {
            return Err(StateError::Infeasible("no density is compatible with the kernel of φ".into()));
        }
        let face = CMatrix::from_columns(&face_cols);
        let r = face.ncols();

        let mut constraints = vec![real_embed(&CMatrix::identity(r, r)) * 0.5];
        let mut values = vec![1.0];
        for b in phi.algebra.basis() {
            let cb = face.adjoint() * b * &face;
            let h1 = (&cb + cb.adjoint()) * c(0.5);
            let h2 = (&cb - cb.adjoint()) * Complex64::new(0.0, -0.5);
            let v = phi.eval(b);
            constraints.push(real_embed(&h1) * 0.5);
            values.push(v.re);
            constraints.push(real_embed(&h2) * 0.5);
            values.push(v.im);
        }
        Ok(ExtensionProblem { face, constraints, values })
    }

    /// Density (in the ambient) optimizing `tr(D h)`; `sign = 0` for a
    /// feasible point only.
    fn solve(&self, h: &CMatrix, sign: f64) -> Result<CMatrix, StateError> {
        let fh = self.face.adjoint() * h * &self.face;
        let problem = SdpProblem {
            c: real_embed(&fh) * (-0.5 * sign),
            a: self.constraints.clone(),
            b: self.values.clone(),
        };
        let sol = sdp::solve(&problem, 1e-10).map_err(|e| match e {
            SdpError::Infeasible(r) => StateError::Infeasible(format!("constraints inconsistent (residual {r:.3e})")),
            other => StateError::Solver(other),
        })?;
        let d = real_unembed(&sol.x);
        Ok(&self.face * d * self.face.adjoint())
    }
}

/// Extend `φ` (a state on `B`) to `A ⊇ B` and decide whether the extension
/// is unique.
pub fn extend_state(
    a_alg: &Arc<ConcreteAlgebra>,
    phi: &StateFunctional,
    opts: &ExtendOptions,
) -> Result<Extension, StateError> {
    check_inclusion(a_alg, &phi.algebra)?;
    let problem = ExtensionProblem::build(a_alg, phi)?;
    let n = a_alg.ambient_dim();
    let as_state = |d: CMatrix| StateFunctional::unchecked(a_alg.clone(), d);

    let base = as_state(problem.solve(&CMatrix::zeros(n, n), 0.0)?);
    let deviation = base.max_deviation_on(phi, &phi.algebra);
    if deviation > 1e-6 {
        return Err(StateError::Infeasible(format!("best extension misses φ by {deviation:.3e}")));
    }

    let probes = opts.probes.max(8);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut spread = 0.0;
    let mut witnesses = None;
    if problem.face.ncols() > 1 {
        for _ in 0..probes {
            let h = random_hermitian(a_alg, &mut rng);
            let hi = as_state(problem.solve(&h, 1.0)?);
            let lo = as_state(problem.solve(&h, -1.0)?);
            let gap = hi.eval(&h).re - lo.eval(&h).re;
            if gap > spread {
                spread = gap;
                witnesses = Some((hi, lo));
            }
        }
    }
    let unique = spread <= UNIQUENESS_TOL;
    Ok(Extension {
        extension: base,
        unique,
        spread,
        witnesses: if unique { None } else { witnesses },
        face_dim: problem.face.ncols(),
        probes,
    })
}

/// Compressibility search and extension together.
#[derive(Debug, Clone)]
pub struct StateReport {
    pub compression: CompressionSearch,
    pub extension: Extension,
}

impl StateReport {
    /// A certificate forces a unique extension.
    pub fn consistent(&self) -> bool {
        self.compression.certificate.is_none() || self.extension.unique
    }
}

pub fn analyze(
    a_alg: &Arc<ConcreteAlgebra>,
    phi: &StateFunctional,
    compress: &CompressOptions,
    extend: &ExtendOptions,
) -> Result<StateReport, StateError> {
    Ok(StateReport {
        compression: is_compressible(a_alg, phi, compress)?,
        extension: extend_state(a_alg, phi, extend)?,
    })
}

/// State problem attached to a twisted groupoid algebra and a unit `u`:
/// `A = ⊕_v π_v(C(G,σ))`, `B` the image of the functions on units, and `φ`
/// the vector state at the basis vector `δ_u ∈ ℓ²(G_u)`, i.e. `ev_u ∘ Φ_r`
/// on `B`.
pub fn unit_state_problem(
    alg: &Arc<TwistedAlgebra>,
    unit: &str,
) -> Result<(Arc<ConcreteAlgebra>, StateFunctional), StateError> {
    let g = alg.groupoid();
    let u = g
        .unit(unit)
        .map_err(|_| StateError::NotAState(format!("`{unit}` is not a unit")))?;
    let a = Arc::new(rep::algebra_image(alg).map_err(|e| StateError::NotASubalgebra(e.to_string()))?);
    let b = Arc::new(MatrixAlgebra::from_spanning(
        g.len(),
        g.units().iter().map(|&v| rep::direct_sum_rep(&alg.delta(v))).collect(),
    ));
    let mut offset = 0;
    for &v in g.units() {
        let fiber = g.source_fiber(v);
        if v == u {
            offset += fiber.iter().position(|&x| x == u).expect("unit in its fiber");
            break;
        }
        offset += fiber.len();
    }
    let e = CVector::from_fn(g.len(), |i, _| if i == offset { ONE } else { ZERO });
    Ok((a, StateFunctional::vector_state(b, &e)?))
}

/// The diagonal subalgebra of `M_n`.
pub fn diagonal_algebra(n: usize) -> ConcreteAlgebra {
    let gens = (0..n)
        .map(|i| {
            let mut m = CMatrix::zeros(n, n);
            m[(i, i)] = ONE;
            m
        })
        .collect();
    MatrixAlgebra::from_spanning(n, gens)
}

/// Scalar multiples of the identity in `M_n`.
pub fn scalar_algebra(n: usize) -> ConcreteAlgebra {
    MatrixAlgebra::from_spanning(n, vec![CMatrix::identity(n, n)])
}

/// Matrix unit `e_ij` in `M_n`.
pub fn matrix_unit(n: usize, i: usize, j: usize) -> CMatrix {
    let mut m = CMatrix::from_element(n, n, ZERO);
    m[(i, j)] = ONE;
    m
}
