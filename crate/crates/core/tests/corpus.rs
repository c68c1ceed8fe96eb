//! Golden files: canonical files round-trip byte for byte.

use std::fs;
use std::path::PathBuf;

use segcover::exact::{exact_discrete, DEFAULT_NODE_BUDGET};
use segcover::io::{
    parse_cover, parse_graph, parse_instance, serialize_cover, serialize_graph, serialize_instance, vertex_cover_reduction,
};
use segcover::verify_cover;

fn corpus() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/corpus")
}

fn files(ext: &str) -> Vec<PathBuf> {
    let mut out: Vec<PathBuf> = fs::read_dir(corpus())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == ext))
        .collect();
    out.sort();
    out
}

#[test]
fn instances_round_trip() {
    let seg = files("seg");
    assert!(seg.len() >= 8);
    for path in seg {
        let text = fs::read_to_string(&path).unwrap();
        let inst = parse_instance(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(serialize_instance(&inst), text, "{}", path.display());
    }
}

#[test]
fn covers_and_graphs_round_trip() {
    for path in files("cov") {
        let text = fs::read_to_string(&path).unwrap();
        assert_eq!(serialize_cover(&parse_cover(&text).unwrap()), text);
        let inst = parse_instance(&fs::read_to_string(path.with_extension("seg")).unwrap()).unwrap();
        let cover = parse_cover(&text).unwrap().to_cover(inst.segments.len()).unwrap();
        assert!(verify_cover(&inst.segments, &cover).unwrap().feasible);
    }
    for path in files("vc") {
        let text = fs::read_to_string(&path).unwrap();
        assert_eq!(serialize_graph(&parse_graph(&text).unwrap()), text);
    }
}

#[test]
fn stored_reduction_matches_generator() {
    let g = parse_graph(&fs::read_to_string(corpus().join("c4.vc")).unwrap()).unwrap();
    let stored = fs::read_to_string(corpus().join("c4-reduction.seg")).unwrap();
    let inst = vertex_cover_reduction(&g);
    assert_eq!(serialize_instance(&inst), stored);
    let (cover, _) = exact_discrete(&inst.segments, &inst.squares, DEFAULT_NODE_BUDGET).unwrap();
    assert_eq!(cover.len(), 2);
}
