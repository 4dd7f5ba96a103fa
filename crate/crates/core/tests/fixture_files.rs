use std::path::PathBuf;

use twistalg::{fixtures, io, structure, Cocycle};

fn path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

#[test]
fn groupoid_files_match_builtin_fixtures() {
    for name in fixtures::NAMES {
        let (g, c) = io::parse_groupoid_file(path(&format!("{name}.gpd"))).unwrap();
        let expected = fixtures::by_name(name).unwrap();
        assert_eq!(g.as_ref(), expected.groupoid().as_ref(), "{name}");
        let c = c.unwrap_or_else(|| Cocycle::trivial(g.clone()));
        assert_eq!(c.is_trivial(), expected.is_trivial(), "{name}");
        if !expected.is_trivial() {
            assert_eq!((c.order(), c.entries()), (expected.order(), expected.entries()), "{name}");
        }
    }
}

#[test]
fn hom_file_is_the_block_quotient() {
    let b2 = io::algebra_of(io::parse_groupoid_file(path("b2.gpd")).unwrap().0, None);
    let h = io::parse_hom_file(path("b2_kill_fiber2.hom"), &b2).unwrap().validate(1e-9).unwrap();
    let expected = structure::block_quotient_hom(&b2, &["e1"]).unwrap();
    assert_eq!(h.images(), expected.images());
}

#[test]
fn state_files_parse() {
    for name in ["m2_diag_ev11", "m2_scalars", "c2_scalars", "r2_unit", "b2_unit"] {
        let p = io::parse_states_file(path(&format!("{name}.states"))).unwrap();
        assert!(p.subalgebra.is_subalgebra_of(&p.algebra, 1e-9), "{name}");
    }
}
