use std::sync::Arc;

use lfuzzord::claims::{find, registry, resolve};
use lfuzzord::error::CliError;
use lfuzzord::format::{
    group_from_doc, lorder_doc, lorder_from_doc, parse_frame_ref, parse_json, parse_op, parse_subset, Elt, GroupDoc,
    LoadedGroup, LorderDoc,
};
use lfuzzord_core::enumerate::lordered_sets;
use lfuzzord_core::group::CmpOp;
use lfuzzord_core::{Frame, FrameElt};
use proptest::prelude::*;

fn chain3() -> Arc<Frame> {
    Arc::new(Frame::chain(3).unwrap())
}

fn fixture(name: &str) -> String {
    std::fs::read_to_string(format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

#[test]
fn fixtures_parse() {
    let f = chain3();
    let p = lorder_from_doc(&parse_json::<LorderDoc>(&fixture("chain-3pt.json"), "chain").unwrap(), &f).unwrap();
    assert_eq!(p.size(), 3);
    assert!(lorder_from_doc(&parse_json::<LorderDoc>(&fixture("m-symmetric.json"), "m").unwrap(), &f).is_ok());
    for (name, finite) in [("z-cone.json", false), ("crisp-z.json", false), ("crisp-z2.json", false), ("z4.json", true)] {
        let doc: GroupDoc = parse_json(&fixture(name), name).unwrap();
        let g = group_from_doc(&doc, &f, Some(4)).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(matches!(g, LoadedGroup::Finite(..)), finite, "{name}");
    }
}

#[test]
fn parse_errors_carry_position() {
    let err = parse_json::<LorderDoc>("{\n  \"e\": [[\"1\",]]\n}", "inline").unwrap_err();
    match err {
        CliError::Parse { line, .. } => assert_eq!(line, 2),
        e => panic!("{e}"),
    }
}

#[test]
fn comparison_operators() {
    assert_eq!(parse_op(">=").unwrap(), CmpOp::Ge);
    assert_eq!(parse_op("lt").unwrap(), CmpOp::Lt);
    assert_eq!(parse_op("==").unwrap(), CmpOp::Eq);
    assert_eq!(parse_op("mod 3").unwrap(), CmpOp::Mod(3));
    assert_eq!(parse_op("%2").unwrap(), CmpOp::Mod(2));
    assert!(parse_op("mod 0").is_err());
    assert!(parse_op("~").is_err());
}

#[test]
fn elements_by_name_or_index() {
    let f = chain3();
    let m = f.parse("m").unwrap();
    assert_eq!(Elt::Name("m".into()).resolve(&f).unwrap(), m);
    assert_eq!(Elt::Index(m.0 as usize).resolve(&f).unwrap(), m);
    assert!(Elt::Index(3).resolve(&f).is_err());
    assert!(Elt::Name("q".into()).resolve(&f).is_err());
}

#[test]
fn frame_references() {
    assert_eq!(parse_frame_ref("chain:4").unwrap().size(), 4);
    assert_eq!(parse_frame_ref("bool:2").unwrap().size(), 4);
    assert!(parse_frame_ref("chain:x").is_err());
}

#[test]
fn subsets_inline_and_json() {
    let f = chain3();
    let p = lordered_sets(f.clone(), 3, true).next().unwrap();
    let a = parse_subset("0:1, 2:m", &p).unwrap();
    let b = parse_subset("{\"entries\": {\"0\": \"1\", \"2\": \"m\"}}", &p).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.get(&2), f.parse("m").unwrap());
    assert_eq!(a.get(&1), f.bottom());
    assert!(parse_subset("3:1", &p).is_err());
    assert!(parse_subset("0", &p).is_err());
}

#[test]
fn registry_ids_are_unique() {
    let mut ids: Vec<&str> = registry().iter().map(|c| c.id).collect();
    let n = ids.len();
    ids.sort_unstable();
    ids.dedup();
    assert_eq!(ids.len(), n);
    assert!(registry().iter().all(|c| !c.statement.is_empty()));
    assert!(find("thm-riesz").is_some());
}

#[test]
fn resolve_expands_all_and_prefixes() {
    assert_eq!(resolve(&["all".into()]).unwrap().len(), registry().len());
    let quo: Vec<&str> = resolve(&["thm-quotient".into(), "thm-quotient-i".into()]).unwrap().iter().map(|c| c.id).collect();
    assert_eq!(quo, ["thm-quotient-i", "thm-quotient-ii"]);
    assert!(matches!(resolve(&["nope".into()]), Err(CliError::UnknownClaim(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lorder_documents_round_trip(n in 1usize..=3, pick in any::<prop::sample::Index>()) {
        let f = chain3();
        let all: Vec<_> = lordered_sets(f.clone(), n, true).collect();
        let p = &all[pick.index(all.len())];
        let text = serde_json::to_string(&lorder_doc(p)).unwrap();
        let back = lorder_from_doc(&parse_json::<LorderDoc>(&text, "rt").unwrap(), &f).unwrap();
        prop_assert_eq!(back.table(), p.table());
    }

    #[test]
    fn index_and_name_agree(i in 0u16..3) {
        let f = chain3();
        let v = FrameElt(i);
        prop_assert_eq!(Elt::Name(f.name(v).to_string()).resolve(&f).unwrap(), v);
    }
}
