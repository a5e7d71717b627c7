mod common;

use common::*;
use kisin::decorate::{decorate, render_moebius};
use kisin::gene::{symbol_checks, Symbol, Symbols};
use kisin::pipeline::{canonical, enumerate_abstract_genes, run_pipeline, Input, Options};
use kisin::random::nonempty_corpus;
use kisin::Error;
use std::collections::{BTreeMap, BTreeSet};

#[test]
fn two_factor_example_report() {
    let r = run_pipeline(&Input::Params(example(5)), &Options::default()).unwrap();
    let j = r.json();
    assert_eq!(j["schema"], 1);
    assert_eq!(j["point_count"], 861);
    assert_eq!(j["dimension"], 3);
    assert_eq!(j["connected"], true);
    assert_eq!(j["empty"], false);
    let factors = j["factors"].as_array().unwrap();
    assert_eq!(factors.len(), 2);
    assert_eq!(factors[0]["orientation"], "///");
    assert_eq!(factors[0]["component_dimensions"], serde_json::json!([1, 1, 1, 1]));
    assert_eq!(factors[1]["slope_changes"], serde_json::json!([2]));
    let mut dims: Vec<u64> = j["components"].as_array().unwrap().iter().map(|c| c["dimension"].as_u64().unwrap()).collect();
    dims.sort();
    assert_eq!(dims, vec![2, 2, 2, 2, 3, 3, 3, 3]);
    assert_eq!(j["validation"]["all_passed"], true);
    let total: u64 = j["census"].as_array().unwrap().iter().map(|c| c["count"].as_u64().unwrap()).sum();
    assert_eq!(total, 861);
}

#[test]
fn two_factor_example_drawing() {
    let s = Symbols::parse(EX_GENE).unwrap();
    let want = [
        "B   B   B   B   A   A   A   A   A   A   A",
        "A   A   A   B - A   B   A   A   A   A   A - ~",
        "  /   /   /       \\   /   \\   \\   X   \\     ~",
        "B   B   B   B - B   A   AB  0   A   AB  0   ~",
    ];
    assert_eq!(render_moebius(&s, &decorate(&s)), want.join("\n") + "\n");
}

#[test]
fn single_point_report() {
    let r = run_pipeline(&Input::Params(single_point(5)), &Options::default()).unwrap();
    assert_eq!(r.components.len(), 1);
    assert_eq!(r.dimension, Some(0));
    assert_eq!(r.components[0].shape(), "[1:0]x[1:0]x[1:0]x[1:0]x[1:0]x[1:0]x[0:1]x[0:1]x[0:1]x[0:1]x[0:1]");
}

#[test]
fn zero_zero_gene_is_empty() {
    let r = run_pipeline(&Input::Abstract(Symbols::parse("A,0,B|B,0,A").unwrap()), &Options::default()).unwrap();
    assert!(r.empty);
    assert!(r.components.is_empty());
    assert_eq!(r.points.as_deref(), Some(&[][..]));
    assert_eq!(r.json()["census"], serde_json::json!([]));
}

#[test]
fn reports_are_deterministic() {
    let opt = Options { oracle: true, ..Options::default() };
    for input in [Input::Params(example(5)), Input::Params(line_case()), Input::Abstract(Symbols::parse(SINGLE_GENE).unwrap())] {
        let a = serde_json::to_string(&run_pipeline(&input, &opt).unwrap().json()).unwrap();
        let b = serde_json::to_string(&run_pipeline(&input, &opt).unwrap().json()).unwrap();
        assert_eq!(a, b);
    }
}

#[test]
fn oracle_mode_embeds_verdicts() {
    let opt = Options { oracle: true, ..Options::default() };
    for pr in nonempty_corpus(5, 3, 10, 8).unwrap() {
        let r = run_pipeline(&Input::Params(pr), &opt).unwrap();
        let o = r.oracle.as_ref().unwrap();
        assert!(o.exhaustive && o.checked == 216 && o.passed());
        assert_eq!(r.json()["oracle"]["passed"], true);
    }
    let r = run_pipeline(&Input::Params(example(5)), &opt).unwrap();
    let o = r.oracle.unwrap();
    assert!(!o.exhaustive && o.passed() && o.checked == 2861);
}

#[test]
fn budget_is_reported() {
    let opt = Options { budget: 100, ..Options::default() };
    let e = run_pipeline(&Input::Params(example(5)), &opt).unwrap_err();
    assert!(matches!(e, Error::BudgetExceeded { .. }));
    assert_eq!(e.exit_code(), 3);
}

fn shape_set(f: usize, zz: bool) -> BTreeSet<String> {
    enumerate_abstract_genes(f, zz, 6).unwrap().iter().flat_map(|e| e.shapes.clone()).collect()
}

#[test]
fn two_column_table_contains_small_varieties() {
    let shapes = shape_set(2, false);
    for s in ["[1:0]x[1:0]", "[0:1]x[1:0]", "P1x[1:0]"] {
        assert!(shapes.contains(s), "{s} missing from {shapes:?}");
    }
    let no_zz = enumerate_abstract_genes(2, false, 6).unwrap();
    let with_zz = enumerate_abstract_genes(2, true, 6).unwrap();
    assert!(no_zz.iter().all(|e| !e.empty));
    assert!(with_zz.len() > no_zz.len());
    assert!(with_zz.iter().filter(|e| !no_zz.contains(e)).all(|e| e.empty));
}

#[test]
fn three_column_table_shapes() {
    let table = enumerate_abstract_genes(3, false, 6).unwrap();
    assert!(!table.is_empty());
    for e in &table {
        assert!(!e.empty && !e.shapes.is_empty(), "{}", e.canonical);
        for s in &e.shapes {
            for part in s.split('x') {
                assert!(part.starts_with("P1") || part.starts_with('['), "{s}");
            }
        }
    }
}

#[test]
fn orbits_partition_all_sequences() {
    for f in 1..=3 {
        let n = 2 * f;
        let mut orbits: BTreeMap<Symbols, usize> = BTreeMap::new();
        for code in 0..4usize.pow(n as u32) {
            let x: Vec<Symbol> = (0..n).map(|k| Symbol::ALL[(code >> (2 * k)) & 3]).collect();
            let s = Symbols::new(x).unwrap();
            if symbol_checks(&s).iter().all(|c| c.passed) {
                *orbits.entry(canonical(&s)).or_insert(0) += 1;
            }
        }
        let table = enumerate_abstract_genes(f, true, 6).unwrap();
        let got: BTreeMap<Symbols, usize> = table.iter().map(|e| (e.canonical.clone(), e.orbit_size)).collect();
        assert_eq!(got, orbits, "f = {f}");
    }
}

#[test]
fn enumeration_cap() {
    assert!(matches!(enumerate_abstract_genes(7, false, 6), Err(Error::BudgetExceeded { .. })));
}
