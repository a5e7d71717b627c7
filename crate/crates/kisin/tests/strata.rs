mod common;

use common::*;
use kisin::decorate::decorate;
use kisin::field::{P1, Point};
use kisin::gene::Symbols;
use kisin::pipeline::{run_pipeline, Input, Options};
use kisin::random::nonempty_corpus;
use kisin::strata::{
    coarse_le, delta_genre, fiber_descriptor, genre_of_point, ring_descriptor, strata_census, Coarse, Genre, GenreVector,
    RingDescriptor,
};
use kisin::variety::{build_equations, enumerate_points, reduce_diagram};
use kisin::Error;
use std::collections::{BTreeMap, BTreeSet};

const L: u64 = 5;

fn varieties() -> Vec<(kisin::Gene, Vec<Point>)> {
    let mut out = Vec::new();
    for f in 2..=4 {
        for pr in nonempty_corpus(5, f, 30, 3).unwrap() {
            let g = kisin::compute_gene(&pr).unwrap();
            let sys = build_equations(&g.symbols, &decorate(&g.symbols));
            let pts = enumerate_points(&sys, L, 1 << 20).unwrap();
            out.push((g, pts));
        }
    }
    out
}

#[test]
fn delta_formula_on_non_cross_gaps() {
    let mut n = 0;
    for (g, pts) in varieties() {
        let d = decorate(&g.symbols);
        for pt in &pts {
            let gv = genre_of_point(&g.symbols, &d, pt, L).unwrap();
            for i in (0..g.f()).filter(|&i| !d.is_cross(i)) {
                assert_eq!(gv.coarse()[i], delta_genre(pt, i, L), "{} gap {i} at {pt:?}", g.symbols);
                n += 1;
            }
        }
    }
    assert!(n > 500);
}

#[test]
fn genre_is_local_to_factors() {
    for (g, pts) in varieties() {
        let d = decorate(&g.symbols);
        let rd = reduce_diagram(&build_equations(&g.symbols, &d));
        let f = g.f();
        for fv in &rd.factors {
            let cols = fv.columns();
            let inner: Vec<usize> = (0..f).filter(|i| cols.contains(i) && cols.contains(&((i + 1) % f))).collect();
            let mut seen: BTreeMap<Vec<P1>, Vec<Genre>> = BTreeMap::new();
            for pt in &pts {
                let key: Vec<P1> = cols.iter().map(|&c| pt[c]).collect();
                let gv = genre_of_point(&g.symbols, &d, pt, L).unwrap();
                let local: Vec<Genre> = inner.iter().map(|&i| gv.fine[i]).collect();
                let prev = seen.entry(key).or_insert_with(|| local.clone());
                assert_eq!(*prev, local, "{}: genre on factor {:?} moved with other factors", g.symbols, cols);
            }
        }
    }
}

#[test]
fn every_point_in_one_stratum() {
    for (g, pts) in varieties() {
        let d = decorate(&g.symbols);
        let census = strata_census(&g.symbols, &d, &pts, &[], L).unwrap();
        assert_eq!(census.strata.values().sum::<u64>(), pts.len() as u64);
        let keys: BTreeSet<&Point> = census.points.iter().map(|r| &r.point).collect();
        assert_eq!(keys.len(), pts.len());
    }
}

#[test]
fn line_case_stratification() {
    let r = run_pipeline(&Input::Params(line_case()), &Options::default()).unwrap();
    let c = r.census.as_ref().unwrap();
    assert_eq!(c.strata.get("II,I"), Some(&1));
    assert_eq!(c.strata.get("I,II"), Some(&1));
    assert_eq!(c.strata.get("I,I"), Some(&4));
    // the two special points lie in the closure of the generic stratum
    for rec in &c.points {
        assert!(coarse_le(&[Coarse::I, Coarse::I], &rec.genre.coarse()));
    }
    let d = decorate(&r.symbols);
    let end = r.census.as_ref().unwrap().points.iter().find(|p| p.genre.coarse_key() == "II,I").unwrap();
    assert_eq!(fiber_descriptor(&r.symbols, &d, &end.point, L).unwrap(), RingDescriptor { balls: 1, annuli: vec![1] });
    assert_eq!(r.candidates.len(), 1);
    assert_eq!(r.candidates[0].1, Ok(RingDescriptor { balls: 1, annuli: vec![2] }));
}

#[test]
fn ab_zero_column_is_type_two() {
    for (g, pts) in varieties() {
        let d = decorate(&g.symbols);
        let abz: Vec<usize> = (0..g.f())
            .filter(|&c| {
                use kisin::Symbol::*;
                matches!(g.symbols.couple(c), (AB, O) | (O, AB))
            })
            .collect();
        for pt in &pts {
            let gv = genre_of_point(&g.symbols, &d, pt, L).unwrap();
            for &c in &abz {
                assert_eq!(gv.fine[c], Genre::II);
            }
        }
    }
}

#[test]
fn off_variety_point_is_rejected() {
    let s = Symbols::parse("A,B|AB,0").unwrap();
    let d = decorate(&s);
    let bad = vec![P1::Affine(0), P1::Infinity];
    assert!(matches!(genre_of_point(&s, &d, &bad, L), Err(Error::PointNotOnVariety)));
}

#[test]
fn descriptors() {
    assert_eq!(ring_descriptor(&GenreVector { fine: vec![Genre::II] }), RingDescriptor { balls: 0, annuli: vec![1] });
    let all_i = GenreVector { fine: vec![Genre::IEta; 4] };
    assert_eq!(ring_descriptor(&all_i), RingDescriptor { balls: 4, annuli: vec![] });
    let census = strata_census(&Symbols::parse("0,A|0,B").unwrap(), &decorate(&Symbols::parse("0,A|0,B").unwrap()), &[], &[], L).unwrap();
    assert!(census.strata.is_empty());
}
