//! Finite (discrete, Hausdorff) étale groupoids.
//!
//! A [`FiniteGroupoid`] stores its arrows in lexicographic order of their ids.
//! That order is the canonical basis order used by every matrix built
//! downstream. Every subset of a finite discrete groupoid is open, so the
//! interior of the isotropy coincides with the isotropy itself; see
//! [`FiniteGroupoid::interior_isotropy`].

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

/// Index of an arrow in the canonical (lexicographic) order of its groupoid.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Arrow(pub usize);

impl Arrow {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupoidError {
    #[error("groupoid has no elements")]
    Empty,
    #[error("groupoid has no units")]
    NoUnits,
    #[error("duplicate element id `{0}`")]
    DuplicateElement(String),
    #[error("unknown element id `{0}`")]
    UnknownElement(String),
    #[error("{map} map is missing a value for `{element}`")]
    MissingMap { map: &'static str, element: String },
    #[error("missing composite for composable pair ({0}, {1})")]
    MissingComposite(String, String),
    #[error("pair ({0}, {1}) is not composable but a composite `{2}` was given")]
    NonComposableEntry(String, String, String),
    #[error("conflicting composites for ({0}, {1}): `{2}` and `{3}`")]
    ConflictingComposite(String, String, String, String),
    #[error("range/source of composite {0}·{1} = {2} do not match its factors")]
    CompositeEndpoints(String, String, String),
    #[error("composition is not associative on ({0}, {1}, {2})")]
    NonAssociative(String, String, String),
    #[error("bad unit `{0}`: {1}")]
    BadUnit(String, &'static str),
    #[error("element `{0}` has no two-sided inverse")]
    BadInverse(String),
    #[error("unknown unit `{0}`")]
    UnknownUnit(String),
    #[error("bad multiplication table: {0}")]
    BadTable(String),
    #[error("bad group action: {0}")]
    BadAction(String),
    #[error("element ids of the two groupoids overlap (`{0}`)")]
    NameCollision(String),
}

/// Raw description of a groupoid before validation.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GroupoidSpec {
    pub elements: Vec<String>,
    pub units: Vec<String>,
    pub range: BTreeMap<String, String>,
    pub source: BTreeMap<String, String>,
    /// Triples `(a, b, c)` meaning `a·b = c`.
    pub compose: Vec<(String, String, String)>,
}

/// A validated finite groupoid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroupoid {
    names: Vec<String>,
    index: HashMap<String, usize>,
    is_unit: Vec<bool>,
    units: Vec<Arrow>,
    range: Vec<Arrow>,
    source: Vec<Arrow>,
    inverse: Vec<Arrow>,
    // row-major n×n, `None` off the composable pairs
    table: Vec<Option<Arrow>>,
}

/// Validate a raw description against the groupoid axioms.
pub fn build_groupoid(spec: &GroupoidSpec) -> Result<FiniteGroupoid, GroupoidError> {
    if spec.elements.is_empty() {
        return Err(GroupoidError::Empty);
    }
    if spec.units.is_empty() {
        return Err(GroupoidError::NoUnits);
    }
    let mut names = spec.elements.clone();
    names.sort();
    for w in names.windows(2) {
        if w[0] == w[1] {
            return Err(GroupoidError::DuplicateElement(w[0].clone()));
        }
    }
    let index: HashMap<String, usize> =
        names.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
    let n = names.len();
    let lookup = |s: &str| -> Result<usize, GroupoidError> {
        index
            .get(s)
            .copied()
            .ok_or_else(|| GroupoidError::UnknownElement(s.to_string()))
    };

    let mut is_unit = vec![false; n];
    for u in &spec.units {
        let i = lookup(u)?;
        if is_unit[i] {
            return Err(GroupoidError::DuplicateElement(u.clone()));
        }
        is_unit[i] = true;
    }

    let read_map = |map: &BTreeMap<String, String>, which: &'static str| {
        for key in map.keys() {
            lookup(key)?;
        }
        names
            .iter()
            .map(|name| {
                let target = map.get(name).ok_or_else(|| GroupoidError::MissingMap {
                    map: which,
                    element: name.clone(),
                })?;
                lookup(target).map(Arrow)
            })
            .collect::<Result<Vec<_>, _>>()
    };
    let range = read_map(&spec.range, "range")?;
    let source = read_map(&spec.source, "source")?;

    for i in 0..n {
        for (end, which) in [(range[i], "range is not a unit"), (source[i], "source is not a unit")] {
            if !is_unit[end.0] {
                return Err(GroupoidError::BadUnit(names[end.0].clone(), which));
            }
        }
        if is_unit[i] && (range[i].0 != i || source[i].0 != i) {
            return Err(GroupoidError::BadUnit(names[i].clone(), "range/source of a unit must be itself"));
        }
    }

    let mut table: Vec<Option<Arrow>> = vec![None; n * n];
    for (a, b, c) in &spec.compose {
        let (ia, ib, ic) = (lookup(a)?, lookup(b)?, lookup(c)?);
        if source[ia] != range[ib] {
            return Err(GroupoidError::NonComposableEntry(a.clone(), b.clone(), c.clone()));
        }
        match table[ia * n + ib] {
            Some(prev) if prev.0 != ic => {
                return Err(GroupoidError::ConflictingComposite(
                    a.clone(),
                    b.clone(),
                    names[prev.0].clone(),
                    c.clone(),
                ))
            }
            _ => table[ia * n + ib] = Some(Arrow(ic)),
        }
    }

    for a in 0..n {
        for b in 0..n {
            if source[a] != range[b] {
                continue;
            }
            let Some(c) = table[a * n + b] else {
                return Err(GroupoidError::MissingComposite(names[a].clone(), names[b].clone()));
            };
            if range[c.0] != range[a] || source[c.0] != source[b] {
                return Err(GroupoidError::CompositeEndpoints(
                    names[a].clone(),
                    names[b].clone(),
                    names[c.0].clone(),
                ));
            }
        }
    }

    for x in 0..n {
        let idempotent_loop =
            range[x].0 == x && source[x].0 == x && table[x * n + x] == Some(Arrow(x));
        if is_unit[x] && !idempotent_loop {
            return Err(GroupoidError::BadUnit(names[x].clone(), "unit is not idempotent"));
        }
        if !is_unit[x] && idempotent_loop {
            return Err(GroupoidError::BadUnit(names[x].clone(), "idempotent loop not listed as a unit"));
        }
    }
    for a in 0..n {
        if table[range[a].0 * n + a] != Some(Arrow(a)) || table[a * n + source[a].0] != Some(Arrow(a)) {
            return Err(GroupoidError::BadUnit(names[a].clone(), "units do not act as identities on this element"));
        }
    }

    for a in 0..n {
        for b in (0..n).filter(|&b| source[a] == range[b]) {
            let ab = table[a * n + b].expect("checked above");
            for c in (0..n).filter(|&c| source[b] == range[c]) {
                let bc = table[b * n + c].expect("checked above");
                if table[ab.0 * n + c] != table[a * n + bc.0] {
                    return Err(GroupoidError::NonAssociative(
                        names[a].clone(),
                        names[b].clone(),
                        names[c].clone(),
                    ));
                }
            }
        }
    }

    let mut inverse = Vec::with_capacity(n);
    for a in 0..n {
        let inv = (0..n).find(|&b| {
            source[a] == range[b]
                && table[a * n + b] == Some(range[a])
                && table[b * n + a] == Some(source[a])
        });
        match inv {
            Some(b) => inverse.push(Arrow(b)),
            None => return Err(GroupoidError::BadInverse(names[a].clone())),
        }
    }

    let units = (0..n).filter(|&i| is_unit[i]).map(Arrow).collect();
    Ok(FiniteGroupoid {
        names,
        index,
        is_unit,
        units,
        range,
        source,
        inverse,
        table,
    })
}

/// A subset of arrows closed under composition and inversion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubGroupoid<'g> {
    parent: &'g FiniteGroupoid,
    members: Vec<bool>,
}

impl<'g> SubGroupoid<'g> {
    /// Checks closure; returns `None` if `members` is not a subgroupoid.
    pub fn new(parent: &'g FiniteGroupoid, members: Vec<bool>) -> Option<Self> {
        assert_eq!(members.len(), parent.len());
        let sub = SubGroupoid { parent, members };
        sub.is_closed().then_some(sub)
    }

    fn is_closed(&self) -> bool {
        let g = self.parent;
        for a in g.arrows().filter(|&a| self.contains(a)) {
            if !self.contains(g.inverse(a)) || !self.contains(g.range(a)) || !self.contains(g.source(a)) {
                return false;
            }
            for b in g.arrows().filter(|&b| self.contains(b)) {
                if let Some(c) = g.compose(a, b) {
                    if !self.contains(c) {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn parent(&self) -> &'g FiniteGroupoid {
        self.parent
    }

    #[inline]
    pub fn contains(&self, a: Arrow) -> bool {
        self.members[a.0]
    }

    pub fn members(&self) -> impl Iterator<Item = Arrow> + '_ {
        self.parent.arrows().filter(|&a| self.contains(a))
    }

    pub fn len(&self) -> usize {
        self.members.iter().filter(|&&m| m).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn mask(&self) -> &[bool] {
        &self.members
    }

    /// The subgroupoid as a groupoid in its own right, with the map back
    /// into the parent. Ids are preserved, so the canonical order is too.
    pub fn to_groupoid(&self) -> (FiniteGroupoid, Vec<Arrow>) {
        let g = self.parent;
        let embedding: Vec<Arrow> = self.members().collect();
        let spec = GroupoidSpec {
            elements: embedding.iter().map(|&a| g.name(a).to_string()).collect(),
            units: g.units().iter().filter(|&&u| self.contains(u)).map(|&u| g.name(u).to_string()).collect(),
            range: embedding.iter().map(|&a| (g.name(a).to_string(), g.name(g.range(a)).to_string())).collect(),
            source: embedding.iter().map(|&a| (g.name(a).to_string(), g.name(g.source(a)).to_string())).collect(),
            compose: g
                .composable_pairs()
                .filter(|&(a, b, _)| self.contains(a) && self.contains(b))
                .map(|(a, b, c)| (g.name(a).to_string(), g.name(b).to_string(), g.name(c).to_string()))
                .collect(),
        };
        let sub = build_groupoid(&spec).expect("closed subset of a valid groupoid is a groupoid");
        (sub, embedding)
    }
}

impl FiniteGroupoid {
    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn arrows(&self) -> impl Iterator<Item = Arrow> + Clone {
        (0..self.names.len()).map(Arrow)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, a: Arrow) -> &str {
        &self.names[a.0]
    }

    pub fn arrow(&self, name: &str) -> Option<Arrow> {
        self.index.get(name).copied().map(Arrow)
    }

    pub fn unit(&self, name: &str) -> Result<Arrow, GroupoidError> {
        match self.arrow(name) {
            Some(a) if self.is_unit(a) => Ok(a),
            _ => Err(GroupoidError::UnknownUnit(name.to_string())),
        }
    }

    pub fn units(&self) -> &[Arrow] {
        &self.units
    }

    pub fn is_unit(&self, a: Arrow) -> bool {
        self.is_unit[a.0]
    }

    pub fn range(&self, a: Arrow) -> Arrow {
        self.range[a.0]
    }

    pub fn source(&self, a: Arrow) -> Arrow {
        self.source[a.0]
    }

    pub fn inverse(&self, a: Arrow) -> Arrow {
        self.inverse[a.0]
    }

    /// `a·b`, defined exactly when `source(a) == range(b)`.
    #[inline]
    pub fn compose(&self, a: Arrow, b: Arrow) -> Option<Arrow> {
        self.table[a.0 * self.names.len() + b.0]
    }

    pub fn composable_pairs(&self) -> impl Iterator<Item = (Arrow, Arrow, Arrow)> + '_ {
        self.arrows()
            .flat_map(move |a| self.arrows().map(move |b| (a, b)))
            .filter_map(move |(a, b)| self.compose(a, b).map(|c| (a, b, c)))
    }

    /// Source fiber `G_u = s⁻¹(u)` in canonical order.
    pub fn source_fiber(&self, u: Arrow) -> Vec<Arrow> {
        self.arrows().filter(|&a| self.source(a) == u).collect()
    }

    /// Range fiber `G^u = r⁻¹(u)` in canonical order.
    pub fn range_fiber(&self, u: Arrow) -> Vec<Arrow> {
        self.arrows().filter(|&a| self.range(a) == u).collect()
    }

    pub fn is_isotropy(&self, a: Arrow) -> bool {
        self.range(a) == self.source(a)
    }

    pub fn isotropy(&self) -> SubGroupoid<'_> {
        let members = self.arrows().map(|a| self.is_isotropy(a)).collect();
        SubGroupoid::new(self, members).expect("isotropy is closed")
    }

    /// Interior of the isotropy. The topology is discrete, so this is the
    /// whole isotropy bundle.
    pub fn interior_isotropy(&self) -> SubGroupoid<'_> {
        self.isotropy()
    }

    pub fn unit_space(&self) -> SubGroupoid<'_> {
        let members = self.arrows().map(|a| self.is_unit(a)).collect();
        SubGroupoid::new(self, members).expect("unit space is closed")
    }

    /// The isotropy group `G_u^u` as a one-unit groupoid.
    pub fn isotropy_group(&self, u: Arrow) -> Result<FiniteGroupoid, GroupoidError> {
        self.isotropy_group_with_embedding(u).map(|(g, _)| g)
    }

    pub fn isotropy_group_with_embedding(
        &self,
        u: Arrow,
    ) -> Result<(FiniteGroupoid, Vec<Arrow>), GroupoidError> {
        if u.0 >= self.len() || !self.is_unit(u) {
            return Err(GroupoidError::UnknownUnit(format!("#{}", u.0)));
        }
        let members = self
            .arrows()
            .map(|a| self.range(a) == u && self.source(a) == u)
            .collect();
        let sub = SubGroupoid::new(self, members).expect("isotropy group is closed");
        Ok(sub.to_groupoid())
    }

    /// Orbits of the unit space, each sorted, ordered by their first unit.
    pub fn orbits(&self) -> Vec<Vec<Arrow>> {
        let n = self.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for a in self.arrows() {
            let (r, s) = (find(&mut parent, self.range(a).0), find(&mut parent, self.source(a).0));
            if r != s {
                parent[r.max(s)] = r.min(s);
            }
        }
        let mut parts: BTreeMap<usize, Vec<Arrow>> = BTreeMap::new();
        for &u in &self.units {
            let root = find(&mut parent, u.0);
            parts.entry(root).or_default().push(u);
        }
        let mut out: Vec<Vec<Arrow>> = parts.into_values().collect();
        out.sort();
        out
    }

    pub fn is_minimal(&self) -> bool {
        self.orbits().len() == 1
    }

    pub fn is_effective(&self) -> bool {
        self.interior_isotropy().members().all(|a| self.is_unit(a))
    }

    pub fn is_group(&self) -> bool {
        self.units.len() == 1
    }

    /// Raw description reproducing this groupoid.
    pub fn to_spec(&self) -> GroupoidSpec {
        GroupoidSpec {
            elements: self.names.clone(),
            units: self.units.iter().map(|&u| self.name(u).to_string()).collect(),
            range: self.arrows().map(|a| (self.name(a).to_string(), self.name(self.range(a)).to_string())).collect(),
            source: self.arrows().map(|a| (self.name(a).to_string(), self.name(self.source(a)).to_string())).collect(),
            compose: self
                .composable_pairs()
                .map(|(a, b, c)| (self.name(a).to_string(), self.name(b).to_string(), self.name(c).to_string()))
                .collect(),
        }
    }

    /// Rename every element; `rename` must be injective.
    pub fn relabel(&self, rename: impl Fn(&str) -> String) -> Result<FiniteGroupoid, GroupoidError> {
        let spec = self.to_spec();
        let r = |s: &String| rename(s);
        build_groupoid(&GroupoidSpec {
            elements: spec.elements.iter().map(r).collect(),
            units: spec.units.iter().map(r).collect(),
            range: spec.range.iter().map(|(k, v)| (r(k), r(v))).collect(),
            source: spec.source.iter().map(|(k, v)| (r(k), r(v))).collect(),
            compose: spec.compose.iter().map(|(a, b, c)| (r(a), r(b), r(c))).collect(),
        })
    }
}

impl fmt::Display for FiniteGroupoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "groupoid with {} elements, {} units",
            self.len(),
            self.units.len()
        )
    }
}

/// The pair groupoid on `n` points: arrows `(i,j)`, 1-based, with
/// `(i,j)(j,k) = (i,k)`.
pub fn pair_groupoid(n: usize) -> FiniteGroupoid {
    assert!(n > 0, "pair groupoid needs at least one point");
    let name = |i: usize, j: usize| format!("({i},{j})");
    let mut spec = GroupoidSpec::default();
    for i in 1..=n {
        spec.units.push(name(i, i));
        for j in 1..=n {
            spec.elements.push(name(i, j));
            spec.range.insert(name(i, j), name(i, i));
            spec.source.insert(name(i, j), name(j, j));
            for k in 1..=n {
                spec.compose.push((name(i, j), name(j, k), name(i, k)));
            }
        }
    }
    build_groupoid(&spec).expect("pair groupoid is valid")
}

/// A finite group, given by element names and a multiplication table
/// `table[i][j] = index of names[i]·names[j]`, as a one-unit groupoid.
pub fn group_as_groupoid(names: &[&str], table: &[Vec<usize>]) -> Result<FiniteGroupoid, GroupoidError> {
    let n = names.len();
    if n == 0 {
        return Err(GroupoidError::Empty);
    }
    if table.len() != n || table.iter().any(|row| row.len() != n || row.iter().any(|&k| k >= n)) {
        return Err(GroupoidError::BadTable("table must be n×n with entries < n".into()));
    }
    let identity = (0..n)
        .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
        .ok_or_else(|| GroupoidError::BadTable("no identity".into()))?;
    for x in 0..n {
        if !(0..n).any(|y| table[x][y] == identity && table[y][x] == identity) {
            return Err(GroupoidError::BadTable(format!("`{}` has no inverse", names[x])));
        }
        for y in 0..n {
            for z in 0..n {
                if table[table[x][y]][z] != table[x][table[y][z]] {
                    return Err(GroupoidError::BadTable(format!(
                        "not associative on ({}, {}, {})",
                        names[x], names[y], names[z]
                    )));
                }
            }
        }
    }
    let e = names[identity].to_string();
    let spec = GroupoidSpec {
        elements: names.iter().map(|s| s.to_string()).collect(),
        units: vec![e.clone()],
        range: names.iter().map(|s| (s.to_string(), e.clone())).collect(),
        source: names.iter().map(|s| (s.to_string(), e.clone())).collect(),
        compose: (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| (names[i].to_string(), names[j].to_string(), names[table[i][j]].to_string()))
            .collect(),
    };
    build_groupoid(&spec)
}

/// Disjoint union; element ids of the two groupoids must not overlap.
pub fn disjoint_union(a: &FiniteGroupoid, b: &FiniteGroupoid) -> Result<FiniteGroupoid, GroupoidError> {
    let left: BTreeSet<&String> = a.names.iter().collect();
    if let Some(clash) = b.names.iter().find(|s| left.contains(s)) {
        return Err(GroupoidError::NameCollision(clash.clone()));
    }
    let (sa, sb) = (a.to_spec(), b.to_spec());
    let mut spec = sa;
    spec.elements.extend(sb.elements);
    spec.units.extend(sb.units);
    spec.range.extend(sb.range);
    spec.source.extend(sb.source);
    spec.compose.extend(sb.compose);
    build_groupoid(&spec)
}

/// Transformation groupoid of a finite group acting on a finite set.
///
/// `action[g][x]` is the index of `g·x`. Arrows are `(g,x)` with
/// `r(g,x) = (e, g·x)`, `s(g,x) = (e, x)` and `(g, h·x)(h, x) = (gh, x)`.
pub fn transformation_groupoid(
    group: &[&str],
    table: &[Vec<usize>],
    points: &[&str],
    action: &[Vec<usize>],
) -> Result<FiniteGroupoid, GroupoidError> {
    // validates the group table
    let as_groupoid = group_as_groupoid(group, table)?;
    let e = group
        .iter()
        .position(|&g| as_groupoid.is_unit(as_groupoid.arrow(g).expect("known")))
        .expect("group has an identity");
    let (ng, np) = (group.len(), points.len());
    if np == 0 {
        return Err(GroupoidError::BadAction("empty point set".into()));
    }
    if action.len() != ng || action.iter().any(|row| row.len() != np || row.iter().any(|&y| y >= np)) {
        return Err(GroupoidError::BadAction("action must be |group|×|points| with entries < |points|".into()));
    }
    for x in 0..np {
        if action[e][x] != x {
            return Err(GroupoidError::BadAction(format!("identity moves `{}`", points[x])));
        }
        for g in 0..ng {
            for h in 0..ng {
                if action[g][action[h][x]] != action[table[g][h]][x] {
                    return Err(GroupoidError::BadAction(format!(
                        "{}·({}·{}) ≠ ({}{})·{}",
                        group[g], group[h], points[x], group[g], group[h], points[x]
                    )));
                }
            }
        }
    }
    let name = |g: usize, x: usize| format!("({},{})", group[g], points[x]);
    let mut spec = GroupoidSpec::default();
    for x in 0..np {
        spec.units.push(name(e, x));
        for g in 0..ng {
            spec.elements.push(name(g, x));
            spec.range.insert(name(g, x), name(e, action[g][x]));
            spec.source.insert(name(g, x), name(e, x));
            for h in 0..ng {
                spec.compose.push((name(g, action[h][x]), name(h, x), name(table[g][h], x)));
            }
        }
    }
    build_groupoid(&spec)
}
