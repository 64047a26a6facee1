//! Replays the fuzz targets' round-trip properties over the checked-in seeds.

use std::path::PathBuf;
use zperiod::assign::{format_assignment, parse_assignment};
use zperiod::duality::{dualize, SymmetricBigraph};
use zperiod::graph::{parse_graph_json, Bigraph, BipartiteQuiver};
use zperiod::laurent::LaurentPoly;
use zperiod::spec::parse_spec;

fn seeds(target: &str) -> Vec<(String, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<(String, String)> = std::fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| {
            let p = e.unwrap().path();
            (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read_to_string(&p).unwrap())
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

fn ids(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| s.to_string()).collect()
}

#[test]
fn bigraph_json_seeds() {
    let mut accepted = 0;
    for (name, text) in seeds("bigraph_json") {
        if let Ok(g) = Bigraph::from_json(&text) {
            assert_eq!(Bigraph::from_json(&g.to_json()).unwrap(), g, "{name}");
            accepted += 1;
        }
    }
    assert_eq!(accepted, 5);
}

#[test]
fn quiver_json_seeds() {
    let mut accepted = 0;
    for (name, text) in seeds("quiver_json") {
        if let Ok(q) = parse_graph_json(&text) {
            let again = BipartiteQuiver::from_quiver_json(&q.to_quiver_json()).unwrap();
            assert_eq!(again.to_quiver_json(), q.to_quiver_json(), "{name}");
            accepted += 1;
        }
    }
    assert_eq!(accepted, 2);
}

#[test]
fn symmetric_json_seeds() {
    for (name, text) in seeds("symmetric_json") {
        let sb = SymmetricBigraph::from_json(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(SymmetricBigraph::from_json(&sb.to_json()).unwrap(), sb, "{name}");
        dualize(&sb).unwrap();
    }
}

#[test]
fn spec_grammar_seeds() {
    for (name, text) in seeds("spec_grammar") {
        let spec = parse_spec(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(parse_spec(&spec.to_string()).unwrap(), spec, "{name}");
    }
}

#[test]
fn laurent_text_seeds() {
    let ids = ids(&["a", "b", "c", "r1c1", "b'"]);
    for (name, text) in seeds("laurent_text") {
        let p = LaurentPoly::parse(&text, &ids).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(LaurentPoly::parse(&p.to_text(&ids), &ids).unwrap(), p, "{name}");
    }
}

#[test]
fn assignment_seeds() {
    let ids = ids(&["a", "b", "c", "r1c1", "e1+"]);
    for (name, text) in seeds("assignment") {
        let v = parse_assignment(&text, &ids).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(parse_assignment(&format_assignment(&v, &ids), &ids).unwrap(), v, "{name}");
    }
}

mod arbitrary_input {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(512))]

        #[test]
        fn parsers_never_panic(s in ".{0,80}", frag in "[a-z0-9(),:*/+ ^_{}'x-]{0,40}") {
            let names = ids(&["a", "b", "c"]);
            for text in [&s, &frag] {
                let _ = parse_spec(text);
                let _ = LaurentPoly::parse(text, &names);
                let _ = parse_assignment(text, &names);
                let _ = parse_graph_json(text);
                let _ = SymmetricBigraph::from_json(text);
            }
        }
    }
}
