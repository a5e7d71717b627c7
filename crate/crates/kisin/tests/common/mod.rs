#![allow(dead_code)]

use kisin::expr::eval;
use kisin::field::{P1, Point};
use kisin::Params;
use num_bigint::{BigInt, BigUint};

pub const EX_H: &str = "(p-1)/2 + (p-1)*p^3 + (p-1)*p^5 + p^8 + p^9 + p^10";
pub const EX_GAMMA: &str = "-(p+3)/2 - p^2 - 2*p^3 - p^5";
pub const EX_GAMMA_PRIME: &str = "-p^5 - p^7";
pub const EX_GENE: &str = "A A A B A B A A A A A | B B B B B A AB 0 A AB 0";

/// α_0 … α_21 of the f = 11 example, as polynomials in p.
pub const EX_ALPHA: [&str; 22] = [
    "p^5+p^7",
    "1+p^6+p^8",
    "1+p+p^7+p^9",
    "1+p+p^2+p^8+p^10",
    "1+p+p^2+p^3+p^9",
    "p+p^2+p^3+p^4+p^10",
    "p+p^2+p^3+p^4+p^5",
    "p^2+p^3+p^4+p^5+p^6",
    "(p-1)+p^3+p^4+p^5+p^6+p^7",
    "(p-1)*p+p^4+p^5+p^6+p^7+p^8",
    "(p-1)*p^2+p^5+p^6+p^7+p^8+p^9",
    "(p-3)/2+(p-1)*p^3+p^6+p^7+p^8+p^9+p^10",
    "(p-1)+(p-3)/2*p+(p-1)*p^4+p^7+p^8+p^9+p^10",
    "(p^2-1)+(p-3)/2*p^2+(p-1)*p^5+p^8+p^9+p^10",
    "(p^3-1)+(p-3)/2*p^3+(p-1)*p^6+p^9+p^10",
    "(p-1)/2*p^4+(p-1)*p^7+p^10",
    "p+(p-1)/2*p^5+(p-1)*p^8",
    "p^2+(p-1)/2*p^6+(p-1)*p^9",
    "(p-1)+p^3+(p-1)/2*p^7+(p-1)*p^10",
    "(p^2-1)+p^4+(p-1)/2*p^8",
    "(p^3-1)+p^5+(p-1)/2*p^9",
    "(p^4-1)+p^6+(p-1)/2*p^10",
];

/// γ of the single-point example; γ′ is forced by the determinant.
pub const SINGLE_GAMMA: &str = "-1 - p^4 - p^5 - p^7";
pub const SINGLE_GENE: &str = "A A A A A AB 0 0 B AB 0 | B B B A B A A B B B A";

pub fn ev(src: &str, p: u64) -> BigInt {
    eval(src, &BigInt::from(p)).unwrap()
}

pub fn example(p: u64) -> Params {
    Params::new(&BigUint::from(p), 11, &ev(EX_H, p), &ev(EX_GAMMA, p), &ev(EX_GAMMA_PRIME, p), 1).unwrap()
}

pub fn single_point(p: u64) -> Params {
    let pr = example(p);
    let h = ev(EX_H, p);
    let g = ev(SINGLE_GAMMA, p);
    let nu = BigInt::from(pr.nu.clone());
    Params::new(&BigUint::from(p), 11, &h, &g, &(&h - 1 - &nu - &g), 1).unwrap()
}

/// The f = 2 gene `A,B|AB,0` whose variety is one projective line.
pub fn line_case() -> Params {
    Params::from_i64(5, 2, 2, -3, -1).unwrap()
}

pub fn all_points(f: usize, l: u64) -> Vec<Point> {
    let mut out: Vec<Point> = vec![Vec::new()];
    for _ in 0..f {
        out = out
            .into_iter()
            .flat_map(|p| {
                P1::all(l).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    out
}
