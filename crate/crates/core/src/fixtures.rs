//! The shipped fixture library, built in code.
//!
//! The same objects are stored as `.gpd` files under `fixtures/` at the
//! repository root; an integration test keeps the two in sync.

use std::sync::Arc;

use crate::cocycle::{build_cocycle_named, Cocycle};
use crate::groupoid::{
    build_groupoid, disjoint_union, group_as_groupoid, pair_groupoid, transformation_groupoid, FiniteGroupoid,
    GroupoidSpec,
};

/// One unit `u`, nothing else.
pub fn t1() -> FiniteGroupoid {
    build_groupoid(&GroupoidSpec {
        elements: vec!["u".into()],
        units: vec!["u".into()],
        range: [("u".into(), "u".into())].into(),
        source: [("u".into(), "u".into())].into(),
        compose: vec![("u".into(), "u".into(), "u".into())],
    })
    .expect("valid")
}

/// Z/2 = {e, g}.
pub fn z2() -> FiniteGroupoid {
    group_as_groupoid(&["e", "g"], &[vec![0, 1], vec![1, 0]]).expect("valid")
}

/// Z/2 with `σ(g,g) = −1` (m = 2).
pub fn z2_proj() -> Cocycle {
    build_cocycle_named(Arc::new(z2()), 2, &[("g", "g", 1)]).expect("valid")
}

/// Klein four-group {e, a, b, ab}, with a = (1,0), b = (0,1).
pub fn k4() -> FiniteGroupoid {
    let names = ["e", "a", "b", "ab"];
    let table = (0..4)
        .map(|i| (0..4).map(|j| i ^ j).collect())
        .collect::<Vec<Vec<usize>>>();
    group_as_groupoid(&names, &table).expect("valid")
}

/// K4 with the bicharacter `k((x1,x2),(y1,y2)) = x2·y1` over μ_2.
pub fn k4_sigma() -> Cocycle {
    let coords = [("e", (0, 0)), ("a", (1, 0)), ("b", (0, 1)), ("ab", (1, 1))];
    let mut entries = Vec::new();
    for &(x, (_, x2)) in &coords {
        for &(y, (y1, _)) in &coords {
            if x2 * y1 == 1 {
                entries.push((x, y, 1));
            }
        }
    }
    build_cocycle_named(Arc::new(k4()), 2, &entries).expect("valid")
}

/// Pair groupoid on {1, 2}.
pub fn r2() -> FiniteGroupoid {
    pair_groupoid(2)
}

/// Two disjoint copies of R2; the second copy's ids carry a trailing `'`.
pub fn r2_disjoint() -> FiniteGroupoid {
    let second = r2().relabel(|s| format!("{s}'")).expect("injective");
    disjoint_union(&r2(), &second).expect("disjoint")
}

/// Two copies of Z/2 over units `e1`, `e2`.
pub fn b2() -> FiniteGroupoid {
    let first = z2().relabel(|s| format!("{s}1")).expect("injective");
    let second = z2().relabel(|s| format!("{s}2")).expect("injective");
    disjoint_union(&first, &second).expect("disjoint")
}

/// B2 ⊔ R2.
pub fn g6() -> FiniteGroupoid {
    disjoint_union(&b2(), &r2()).expect("disjoint")
}

/// Z/2 = {e, s} acting on {1, 2} by swapping.
pub fn swap() -> FiniteGroupoid {
    transformation_groupoid(&["e", "s"], &[vec![0, 1], vec![1, 0]], &["1", "2"], &[vec![0, 1], vec![1, 0]])
        .expect("valid")
}

fn trivial(g: FiniteGroupoid) -> Cocycle {
    Cocycle::trivial(Arc::new(g))
}

/// Look a fixture up by its file stem.
pub fn by_name(name: &str) -> Option<Cocycle> {
    Some(match name {
        "t1" => trivial(t1()),
        "z2" => trivial(z2()),
        "z2_proj" => z2_proj(),
        "k4" => trivial(k4()),
        "k4_sigma" => k4_sigma(),
        "r2" => trivial(r2()),
        "r2_disjoint" => trivial(r2_disjoint()),
        "b2" => trivial(b2()),
        "g6" => trivial(g6()),
        "swap" => trivial(swap()),
        _ => return None,
    })
}

pub const NAMES: [&str; 10] = [
    "t1",
    "z2",
    "z2_proj",
    "k4",
    "k4_sigma",
    "r2",
    "r2_disjoint",
    "b2",
    "g6",
    "swap",
];

/// Every fixture with its name.
pub fn all() -> Vec<(&'static str, Cocycle)> {
    NAMES.iter().map(|&n| (n, by_name(n).expect("listed"))).collect()
}
