mod common;

use common::*;
use kisin::decorate::decorate;
use kisin::field::P1;
use kisin::gene::Symbol;
use kisin::lattice::{
    column_case, frobenius_core, frobenius_numerator, integrality_check, lattice_description, matrix_from_case,
    passage_matrix, same_span, Completion, LatticeCase,
};
use kisin::random::{corpus, nonempty_corpus};
use kisin::variety::{build_equations, enumerate_points};
use kisin::{compute_gene, Error};
use num_bigint::BigInt;
use num_integer::Integer;

const L: u64 = 5;

fn instances() -> Vec<kisin::Gene> {
    let mut out = Vec::new();
    for f in 2..=4 {
        for pr in nonempty_corpus(5, f, 30, 21).unwrap().into_iter().chain(corpus(5, f, 10, 21).unwrap()) {
            out.push(compute_gene(&pr).unwrap());
        }
    }
    out
}

fn variety(g: &kisin::Gene) -> Vec<Vec<P1>> {
    enumerate_points(&build_equations(&g.symbols, &decorate(&g.symbols)), L, 1 << 20).unwrap()
}

#[test]
fn description_round_trip() {
    let mut n = 0;
    for g in instances() {
        for pt in variety(&g) {
            let desc = lattice_description(&g, &pt, L).unwrap();
            for (i, case) in desc.iter().enumerate() {
                let m = passage_matrix(&g, &pt, i, L, Completion::Standard).unwrap();
                for c in [Completion::Standard, Completion::Alternate] {
                    let rebuilt = matrix_from_case(&g, i, case, L, c);
                    assert!(same_span(&m, &rebuilt), "{} column {i}", g.symbols);
                    assert!(same_span(&rebuilt, &m));
                }
                if let LatticeCase::BalancedFirst { line, exponents, gap } = case {
                    let other = if *line == P1::Affine(1) { P1::Affine(2) } else { P1::Affine(1) };
                    let moved = LatticeCase::BalancedFirst { line: other, exponents: exponents.clone(), gap: gap.clone() };
                    assert!(!same_span(&m, &matrix_from_case(&g, i, &moved, L, Completion::Standard)));
                }
                n += 1;
            }
        }
    }
    assert!(n > 100);
}

#[test]
fn description_cases_follow_symbols() {
    for g in instances() {
        let f = g.f();
        for pt in variety(&g) {
            for (i, case) in lattice_description(&g, &pt, L).unwrap().iter().enumerate() {
                let (top, bottom) = g.symbols.couple(i);
                match case {
                    LatticeCase::Diagonal { exponents } => {
                        assert_eq!(bottom, Symbol::O);
                        let nu = BigInt::from(g.params.nu.clone());
                        assert_eq!(&exponents.0 + &exponents.1, nu);
                    }
                    LatticeCase::Antidiagonal { .. } => assert_eq!(top, Symbol::O),
                    LatticeCase::BalancedFirst { line, gap, .. } | LatticeCase::BalancedSecond { line, gap, .. } => {
                        assert!(top != Symbol::O && bottom != Symbol::O);
                        assert_eq!(*line, pt[i]);
                        assert!(*gap > BigInt::from(0));
                    }
                }
                assert!(i < f);
            }
        }
    }
}

#[test]
fn balanced_origin_uses_identity_completion() {
    for g in instances() {
        for pt in variety(&g) {
            for i in 0..g.f() {
                if let Ok(LatticeCase::BalancedFirst { line: P1::Affine(0), .. }) = column_case(&g, &pt, i) {
                    let m = passage_matrix(&g, &pt, i, L, Completion::Standard).unwrap();
                    // (a, b) = (1, 0) and (a', b') = (1, 0)
                    assert!(m.m[1][0].is_zero() && m.m[0][1].is_zero());
                    return;
                }
            }
        }
    }
    panic!("no balanced column at [1:0] in the sample");
}

#[test]
fn numerator_structure() {
    for g in instances() {
        let nu = BigInt::from(g.params.nu.clone());
        let e = BigInt::from(g.params.e.clone());
        for pt in variety(&g) {
            for i in 0..g.f() {
                let k = frobenius_numerator(&g, &pt, i, L, Completion::Standard).unwrap();
                assert!(k.max_terms() <= 8);
                assert_eq!(k.det().valuation(), Some(&(&nu + &nu + &e)));
                if i + 1 < g.f() {
                    for d in [&k.m[0][0], &k.m[1][1]] {
                        for x in d.terms.keys() {
                            assert!(*x >= nu);
                            assert_eq!((x - &nu).mod_floor(&e), BigInt::from(0));
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn verdict_ignores_completion_and_theta() {
    for g in instances().into_iter().take(40) {
        let g2 = compute_gene(&g.params.with_theta(3).unwrap()).unwrap();
        for pt in all_points(g.f(), L) {
            let a = integrality_check(&g, &pt, L);
            assert_eq!(a, kisin::lattice::integrality_check_with(&g, &pt, L, Completion::Alternate));
            assert_eq!(a, integrality_check(&g2, &pt, L));
        }
    }
}

#[test]
fn violating_a_product_equation_fails() {
    let g = compute_gene(&line_case()).unwrap();
    assert!(integrality_check(&g, &[P1::Affine(1), P1::Affine(0)], L));
    // column 1 is pinned at [1:0] by the zero symbol; [0:1] breaks it
    assert!(!integrality_check(&g, &[P1::Affine(1), P1::Infinity], L));
}

#[test]
fn single_point_example_is_integral() {
    let g = compute_gene(&single_point(5)).unwrap();
    let pt: Vec<P1> = (0..11).map(|i| if i <= 5 { P1::Affine(0) } else { P1::Infinity }).collect();
    assert!(integrality_check(&g, &pt, L));
    let mut moved = pt.clone();
    moved[3] = P1::Affine(2);
    assert!(!integrality_check(&g, &moved, L));
}

#[test]
fn theta_divisible_by_field_is_rejected() {
    let pr = line_case().with_theta(5).unwrap();
    let g = compute_gene(&pr).unwrap();
    assert!(matches!(frobenius_core(&g, 1, 5), Err(Error::RejectTheta)));
    assert!(frobenius_core(&g, 1, 7).is_ok());
}

#[test]
fn debug_dump_lists_terms() {
    let g = compute_gene(&line_case()).unwrap();
    let m = passage_matrix(&g, &[P1::Affine(0), P1::Affine(0)], 1, L, Completion::Standard).unwrap();
    let text = m.to_string();
    assert!(text.starts_with("[[1*u^"), "{text}");
}
