//! μ_m-valued 2-cocycles and the finite twist `E_σ = G ×_σ μ_m`.
//!
//! Phases are stored as exponents `k ∈ Z_m`, standing for `exp(2πik/m)`.
//! All algebraic identities are checked in integer arithmetic; complex
//! numbers appear only through [`phase`].

use std::sync::Arc;

use num_complex::Complex64;
use thiserror::Error;

use crate::groupoid::{Arrow, FiniteGroupoid};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CocycleError {
    #[error("cocycle order must be positive")]
    ZeroOrder,
    #[error("cocycle identity fails on ({0}, {1}, {2})")]
    CocycleIdentityViolation(String, String, String),
    #[error("normalization fails at `{0}`")]
    NormalizationViolation(String),
    #[error("pair ({0}, {1}) is not composable")]
    NonComposablePair(String, String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("cochain must vanish on the unit `{0}`")]
    CochainOnUnit(String),
    #[error("cocycles live on different groupoids")]
    GroupoidMismatch,
}

/// `exp(2πik/m)`, exact at multiples of a quarter turn.
pub fn phase(k: u32, m: u32) -> Complex64 {
    let k = k % m;
    if (4 * k) % m == 0 {
        return match 4 * k / m {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * f64::from(k) / f64::from(m))
}

/// A normalized μ_m-valued 2-cocycle on a finite groupoid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cocycle {
    groupoid: Arc<FiniteGroupoid>,
    order: u32,
    // row-major n×n exponents; zero off the composable pairs
    table: Vec<u32>,
}

impl Cocycle {
    /// The trivial cocycle (`m = 1`).
    pub fn trivial(groupoid: Arc<FiniteGroupoid>) -> Self {
        let n = groupoid.len();
        Cocycle {
            groupoid,
            order: 1,
            table: vec![0; n * n],
        }
    }

    pub fn groupoid(&self) -> &Arc<FiniteGroupoid> {
        &self.groupoid
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Exponent of `σ(a, b)`; zero when the pair is not composable.
    #[inline]
    pub fn exponent(&self, a: Arrow, b: Arrow) -> u32 {
        self.table[a.0 * self.groupoid.len() + b.0]
    }

    #[inline]
    pub fn value(&self, a: Arrow, b: Arrow) -> Complex64 {
        phase(self.exponent(a, b), self.order)
    }

    pub fn is_trivial(&self) -> bool {
        self.table.iter().all(|&k| k == 0)
    }

    /// Nonzero entries as `(a, b, k)`, in canonical order.
    pub fn entries(&self) -> Vec<(Arrow, Arrow, u32)> {
        self.groupoid
            .composable_pairs()
            .map(|(a, b, _)| (a, b, self.exponent(a, b)))
            .filter(|&(_, _, k)| k != 0)
            .collect()
    }

    fn from_table(groupoid: Arc<FiniteGroupoid>, order: u32, table: Vec<u32>) -> Result<Self, CocycleError> {
        let c = Cocycle { groupoid, order, table };
        c.validate()?;
        Ok(c)
    }

    fn validate(&self) -> Result<(), CocycleError> {
        let g = &*self.groupoid;
        let m = self.order;
        for a in g.arrows() {
            if self.exponent(g.range(a), a) != 0 || self.exponent(a, g.source(a)) != 0 {
                return Err(CocycleError::NormalizationViolation(g.name(a).to_string()));
            }
        }
        for (a, b, ab) in g.composable_pairs() {
            for c in g.arrows() {
                let Some(bc) = g.compose(b, c) else { continue };
                let lhs = (self.exponent(a, b) + self.exponent(ab, c)) % m;
                let rhs = (self.exponent(a, bc) + self.exponent(b, c)) % m;
                if lhs != rhs {
                    return Err(CocycleError::CocycleIdentityViolation(
                        g.name(a).to_string(),
                        g.name(b).to_string(),
                        g.name(c).to_string(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// The cocycle `σ̄`: exponents negated mod m.
    pub fn conjugate(&self) -> Cocycle {
        let m = self.order;
        Cocycle {
            groupoid: self.groupoid.clone(),
            order: m,
            table: self.table.iter().map(|&k| (m - k % m) % m).collect(),
        }
    }

    /// Same cocycle written over `μ_{m·factor}`.
    pub fn lift(&self, factor: u32) -> Cocycle {
        assert!(factor > 0);
        Cocycle {
            groupoid: self.groupoid.clone(),
            order: self.order * factor,
            table: self.table.iter().map(|&k| k * factor).collect(),
        }
    }

    /// Pointwise product `σ·τ`, written over `μ_lcm(m, m')`.
    pub fn product(&self, other: &Cocycle) -> Result<Cocycle, CocycleError> {
        if self.groupoid != other.groupoid {
            return Err(CocycleError::GroupoidMismatch);
        }
        let l = lcm(self.order, other.order);
        let (x, y) = (self.lift(l / self.order), other.lift(l / other.order));
        Ok(Cocycle {
            groupoid: self.groupoid.clone(),
            order: l,
            table: x.table.iter().zip(&y.table).map(|(a, b)| (a + b) % l).collect(),
        })
    }

    /// `σ` restricted to a subgroupoid given by its embedding into the parent.
    pub fn restrict(&self, sub: Arc<FiniteGroupoid>, embedding: &[Arrow]) -> Cocycle {
        let n = sub.len();
        let mut table = vec![0; n * n];
        for (a, b, _) in sub.composable_pairs() {
            table[a.0 * n + b.0] = self.exponent(embedding[a.0], embedding[b.0]);
        }
        Cocycle {
            groupoid: sub,
            order: self.order,
            table,
        }
    }

    pub fn twist_element(&self, base: Arrow, phase: u32) -> TwistElement {
        TwistElement {
            base,
            phase: phase % self.order,
        }
    }

    /// `(α,w)(β,z) = (αβ, σ(α,β)wz)`.
    pub fn twist_multiply(&self, x: TwistElement, y: TwistElement) -> Result<TwistElement, CocycleError> {
        let g = &*self.groupoid;
        let base = g.compose(x.base, y.base).ok_or_else(|| {
            CocycleError::NonComposablePair(g.name(x.base).to_string(), g.name(y.base).to_string())
        })?;
        Ok(TwistElement {
            base,
            phase: (self.exponent(x.base, y.base) + x.phase + y.phase) % self.order,
        })
    }

    /// `(α,w)⁻¹ = (α⁻¹, conj σ(α,α⁻¹) · w̄)`.
    pub fn twist_inverse(&self, x: TwistElement) -> TwistElement {
        let m = self.order;
        let inv = self.groupoid.inverse(x.base);
        TwistElement {
            base: inv,
            phase: (2 * m - self.exponent(x.base, inv) % m - x.phase) % m,
        }
    }

    /// Every element of `E_σ`, ordered by base then phase.
    pub fn twist_elements(&self) -> Vec<TwistElement> {
        self.groupoid
            .arrows()
            .flat_map(|a| (0..self.order).map(move |k| TwistElement { base: a, phase: k }))
            .collect()
    }

    /// Exhaustive check of the twist axioms on `E_σ`.
    pub fn validate_twist_axioms(&self) -> TwistReport {
        check_twist_axioms(self)
    }
}

/// Build a cocycle from explicit entries; unlisted pairs default to 0.
pub fn build_cocycle(
    groupoid: Arc<FiniteGroupoid>,
    order: u32,
    entries: &[(Arrow, Arrow, u32)],
) -> Result<Cocycle, CocycleError> {
    if order == 0 {
        return Err(CocycleError::ZeroOrder);
    }
    let n = groupoid.len();
    let mut table = vec![0; n * n];
    for &(a, b, k) in entries {
        if groupoid.compose(a, b).is_none() {
            return Err(CocycleError::NonComposablePair(
                groupoid.name(a).to_string(),
                groupoid.name(b).to_string(),
            ));
        }
        table[a.0 * n + b.0] = k % order;
    }
    Cocycle::from_table(groupoid, order, table)
}

/// Same as [`build_cocycle`] but with entries given by element ids.
pub fn build_cocycle_named(
    groupoid: Arc<FiniteGroupoid>,
    order: u32,
    entries: &[(&str, &str, u32)],
) -> Result<Cocycle, CocycleError> {
    let lookup = |s: &str| groupoid.arrow(s).ok_or_else(|| CocycleError::UnknownElement(s.to_string()));
    let resolved = entries
        .iter()
        .map(|&(a, b, k)| Ok((lookup(a)?, lookup(b)?, k)))
        .collect::<Result<Vec<_>, CocycleError>>()?;
    build_cocycle(groupoid, order, &resolved)
}

/// `δb(α,β) = b(α) + b(β) − b(αβ)` for a cochain `b` vanishing on units.
pub fn coboundary_from_cochain(
    groupoid: Arc<FiniteGroupoid>,
    order: u32,
    cochain: &[u32],
) -> Result<Cocycle, CocycleError> {
    if order == 0 {
        return Err(CocycleError::ZeroOrder);
    }
    assert_eq!(cochain.len(), groupoid.len(), "cochain must cover every element");
    for &u in groupoid.units() {
        if cochain[u.0] % order != 0 {
            return Err(CocycleError::CochainOnUnit(groupoid.name(u).to_string()));
        }
    }
    let n = groupoid.len();
    let b = |a: Arrow| cochain[a.0] % order;
    let mut table = vec![0; n * n];
    for (x, y, xy) in groupoid.composable_pairs() {
        table[x.0 * n + y.0] = (b(x) + b(y) + order - b(xy)) % order;
    }
    Cocycle::from_table(groupoid, order, table)
}

fn lcm(a: u32, b: u32) -> u32 {
    fn gcd(a: u32, b: u32) -> u32 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}

/// An element `(γ, k)` of `E_σ`, meaning `(γ, exp(2πik/m))`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TwistElement {
    pub base: Arrow,
    pub phase: u32,
}

/// Outcome of [`Cocycle::validate_twist_axioms`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistReport {
    pub elements: usize,
    pub inclusion_homomorphism: bool,
    pub quotient_homomorphism: bool,
    pub unit_space_bijection: bool,
    pub exact: bool,
    /// Local triviality holds vacuously in the finite discrete model.
    pub locally_trivial: bool,
    pub central: bool,
    pub associative: bool,
    pub inverses: bool,
    pub first_violation: Option<String>,
}

impl TwistReport {
    pub fn all_pass(&self) -> bool {
        self.first_violation.is_none()
    }
}

fn check_twist_axioms(sigma: &Cocycle) -> TwistReport {
    let g = &*sigma.groupoid;
    let m = sigma.order;
    let elems = sigma.twist_elements();
    let mut report = TwistReport {
        elements: elems.len(),
        inclusion_homomorphism: true,
        quotient_homomorphism: true,
        unit_space_bijection: true,
        exact: true,
        locally_trivial: true,
        central: true,
        associative: true,
        inverses: true,
        first_violation: None,
    };
    let fail = |flag: &mut bool, what: String, first: &mut Option<String>| {
        *flag = false;
        first.get_or_insert(what);
    };
    let mul = |x, y| sigma.twist_multiply(x, y);
    let incl = |u: Arrow, z: u32| TwistElement { base: u, phase: z % m };

    // i(x,z)i(x,w) = i(x,zw), and products in E_σ project to products in G.
    for &u in g.units() {
        for z in 0..m {
            for w in 0..m {
                if mul(incl(u, z), incl(u, w)).ok() != Some(incl(u, z + w)) {
                    fail(&mut report.inclusion_homomorphism, format!("i at {}", g.name(u)), &mut report.first_violation);
                }
            }
        }
    }
    for &x in &elems {
        for &y in &elems {
            match (g.compose(x.base, y.base), mul(x, y)) {
                (Some(c), Ok(xy)) if xy.base == c => {}
                (None, Err(_)) => {}
                _ => fail(
                    &mut report.quotient_homomorphism,
                    format!("q on ({}, {})", g.name(x.base), g.name(y.base)),
                    &mut report.first_violation,
                ),
            }
        }
    }
    // Units of E_σ are exactly (x, 0), and q maps them bijectively onto G^(0).
    let twist_units: Vec<TwistElement> = elems
        .iter()
        .copied()
        .filter(|&e| mul(e, e).ok() == Some(e))
        .collect();
    let mut bases: Vec<Arrow> = twist_units.iter().map(|e| e.base).collect();
    bases.sort();
    if bases != g.units() || twist_units.iter().any(|e| e.phase != 0) {
        fail(&mut report.unit_space_bijection, "unit space".into(), &mut report.first_violation);
    }
    // exactness: q⁻¹(x) = i({x} × μ_m)
    for &u in g.units() {
        let fibre: Vec<TwistElement> = elems.iter().copied().filter(|e| e.base == u).collect();
        let image: Vec<TwistElement> = (0..m).map(|z| incl(u, z)).collect();
        if fibre != image {
            fail(&mut report.exact, format!("fibre over {}", g.name(u)), &mut report.first_violation);
        }
    }
    // centrality: i(r(ε),z)ε = ε i(s(ε),z)
    for &e in &elems {
        for z in 0..m {
            let left = mul(incl(g.range(e.base), z), e);
            let right = mul(e, incl(g.source(e.base), z));
            if left.is_err() || left != right {
                fail(&mut report.central, format!("centrality at {}", g.name(e.base)), &mut report.first_violation);
            }
        }
    }
    for &x in &elems {
        let inv = sigma.twist_inverse(x);
        let (r, s) = (incl(g.range(x.base), 0), incl(g.source(x.base), 0));
        if mul(x, inv).ok() != Some(r) || mul(inv, x).ok() != Some(s) {
            fail(&mut report.inverses, format!("inverse of {}", g.name(x.base)), &mut report.first_violation);
        }
        for &y in &elems {
            let Ok(xy) = mul(x, y) else { continue };
            for &z in &elems {
                let Ok(yz) = mul(y, z) else { continue };
                if mul(xy, z) != mul(x, yz) {
                    fail(&mut report.associative, "associativity".into(), &mut report.first_violation);
                }
            }
        }
    }
    report
}
