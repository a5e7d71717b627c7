//! α-sequences and the 2f-periodic gene of `(h, γ, γ′)`.

use crate::error::{Error, Result};
use crate::params::Params;
use num_bigint::{BigInt, BigUint, ToBigInt};
use num_integer::Integer;
use num_traits::One;
#[cfg(test)]
use num_traits::Zero;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    A,
    B,
    AB,
    /// the symbol `0`, serialized as `"O"`
    O,
}

impl Symbol {
    pub const ALL: [Symbol; 4] = [Symbol::A, Symbol::B, Symbol::AB, Symbol::O];

    pub fn as_str(self) -> &'static str {
        match self {
            Symbol::A => "A",
            Symbol::B => "B",
            Symbol::AB => "AB",
            Symbol::O => "O",
        }
    }

    /// Exchange `A` and `B`.
    pub fn tau(self) -> Symbol {
        match self {
            Symbol::A => Symbol::B,
            Symbol::B => Symbol::A,
            s => s,
        }
    }

    pub fn parse(s: &str) -> Result<Symbol> {
        match s.trim() {
            "A" | "a" => Ok(Symbol::A),
            "B" | "b" => Ok(Symbol::B),
            "AB" | "ab" => Ok(Symbol::AB),
            "0" | "O" | "o" => Ok(Symbol::O),
            other => Err(Error::Parse(format!("unknown symbol {other:?}"))),
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // the human-facing form uses the digit
        f.write_str(match self {
            Symbol::O => "0",
            s => s.as_str(),
        })
    }
}

/// A bare symbol sequence `(X_i)_{i ∈ ℤ/2f}`; column `c` holds `(X_c, X_{c+f})`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbols {
    pub f: usize,
    pub x: Vec<Symbol>,
}

impl Symbols {
    pub fn new(x: Vec<Symbol>) -> Result<Symbols> {
        if x.len() < 2 || !x.len().is_multiple_of(2) {
            return Err(Error::InvalidGene(format!("need an even length >= 2, got {}", x.len())));
        }
        Ok(Symbols { f: x.len() / 2, x })
    }

    /// Parse `"A,A,B,0|B,AB,0,A"` (top row, then bottom row). Whitespace
    /// may replace commas.
    pub fn parse(s: &str) -> Result<Symbols> {
        let (top, bottom) = s
            .split_once('|')
            .ok_or_else(|| Error::Parse("expected 'top|bottom'".into()))?;
        let row = |r: &str| -> Result<Vec<Symbol>> {
            r.split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(Symbol::parse)
                .collect()
        };
        let t = row(top)?;
        let b = row(bottom)?;
        if t.len() != b.len() || t.is_empty() {
            return Err(Error::Parse(format!("rows have lengths {} and {}", t.len(), b.len())));
        }
        let mut x = t;
        x.extend(b);
        Symbols::new(x)
    }

    pub fn at(&self, i: usize) -> Symbol {
        self.x[i % (2 * self.f)]
    }

    /// `(X_c, X_{c+f})`
    pub fn couple(&self, c: usize) -> (Symbol, Symbol) {
        (self.at(c), self.at(c + self.f))
    }

    /// `X′_i = X_{i+k}`.
    pub fn rotate(&self, k: usize) -> Symbols {
        let n = 2 * self.f;
        Symbols { f: self.f, x: (0..n).map(|i| self.at(i + k % n)).collect() }
    }

    pub fn tau(&self) -> Symbols {
        Symbols { f: self.f, x: self.x.iter().map(|s| s.tau()).collect() }
    }

    /// Exchange the rows of every couple.
    pub fn row_swapped(&self) -> Symbols {
        self.rotate(self.f)
    }

    pub fn has_zero_zero(&self) -> bool {
        (0..self.f).any(|c| self.couple(c) == (Symbol::O, Symbol::O))
    }
}

impl fmt::Display for Symbols {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let row = |r: &[Symbol]| r.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(",");
        write!(f, "{}|{}", row(&self.x[..self.f]), row(&self.x[self.f..]))
    }
}

/// Space-separated rendering, `"A A B | B AB 0"`.
pub fn spaced(s: &Symbols) -> String {
    let row = |r: &[Symbol]| r.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(" ");
    format!("{} | {}", row(&s.x[..s.f]), row(&s.x[s.f..]))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gene {
    pub params: Params,
    pub alpha: Vec<BigUint>,
    pub alpha_prime: Vec<BigUint>,
    pub symbols: Symbols,
    pub epsilon: Vec<bool>,
}

impl Gene {
    pub fn f(&self) -> usize {
        self.params.f
    }
    pub fn alpha(&self, i: usize) -> &BigUint {
        &self.alpha[i % (2 * self.f())]
    }
    pub fn alpha_prime(&self, i: usize) -> &BigUint {
        &self.alpha_prime[i % (2 * self.f())]
    }
}

/// ⌊pⁱh/(q+1)⌋ for `i ∈ [0, 2f)` by direct division.
fn floors_direct(pr: &Params) -> Vec<BigUint> {
    let q1 = &pr.q + 1u32;
    let mut pw = BigUint::one();
    let mut out = Vec::with_capacity(2 * pr.f);
    for _ in 0..2 * pr.f {
        out.push((&pw * &pr.h) / &q1);
        pw *= &pr.p;
    }
    out
}

/// The same floors from the digits: the `h_i` are the base-p digits of the
/// purely periodic part of h/(q+1), so multiplying by p shifts one digit in.
fn floors_from_digits(pr: &Params) -> Vec<BigUint> {
    let q1 = &pr.q + 1u32;
    let mut acc = &pr.h / &q1;
    let mut out = Vec::with_capacity(2 * pr.f);
    for i in 0..2 * pr.f {
        out.push(acc.clone());
        acc = acc * &pr.p + pr.h_digit(i);
    }
    out
}

fn reduce(x: &BigInt, e: &BigUint) -> BigUint {
    x.mod_floor(&e.to_bigint().unwrap()).to_biguint().unwrap()
}

/// α-sequence against the character `g`: `(⌊pⁱh/(q+1)⌋ − pⁱ g) mod e`.
fn alphas(pr: &Params, floors: &[BigUint], g: &BigUint) -> Vec<BigUint> {
    let mut pw = BigUint::one();
    let mut out = Vec::with_capacity(floors.len());
    for fl in floors {
        let v = fl.to_bigint().unwrap() - (&pw * g).to_bigint().unwrap();
        out.push(reduce(&v, &pr.e));
        pw = (pw * &pr.p) % &pr.e;
    }
    out
}

/// Interval classification of α with the ε-shifts.
pub fn classify(pr: &Params, alpha: &BigUint, eps_i: bool, eps_i_f: bool) -> Symbol {
    let nu_p = &pr.nu / &pr.p;
    let lo = &nu_p + u32::from(eps_i_f);
    let hi_base = (&pr.p - 1u32) * &nu_p;
    let hi = if eps_i { hi_base - 1u32 } else { hi_base };
    if *alpha < lo {
        Symbol::A
    } else if *alpha <= hi {
        Symbol::AB
    } else if *alpha <= pr.nu {
        Symbol::B
    } else {
        Symbol::O
    }
}

pub fn compute_gene(pr: &Params) -> Result<Gene> {
    let direct = floors_direct(pr);
    let via_digits = floors_from_digits(pr);
    if let Some(i) = (0..direct.len()).find(|&i| direct[i] != via_digits[i]) {
        return Err(Error::InternalMismatch(format!("alpha_{i}: two evaluations disagree")));
    }
    let alpha = alphas(pr, &direct, &pr.gamma_prime);
    let alpha_prime = alphas(pr, &direct, &pr.gamma);
    let f = pr.f;
    let pm1 = &pr.p - 1u32;
    let epsilon: Vec<bool> = pr.h_digits.iter().map(|d| *d == pm1).collect();
    let x = (0..2 * f)
        .map(|i| classify(pr, &alpha[i], epsilon[i], epsilon[(i + f) % (2 * f)]))
        .collect();
    Ok(Gene { params: pr.clone(), alpha, alpha_prime, symbols: Symbols { f, x }, epsilon })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Transform {
    FrobeniusTwist,
    SwapCharacters,
    ShiftEmbedding(usize),
}

/// Recompute the gene after transforming the parameters.
pub fn transform_gene(g: &Gene, op: Transform) -> Result<Gene> {
    let pr = &g.params;
    let (h, ga, gp) = match op {
        Transform::FrobeniusTwist => (&pr.h * &pr.q, pr.gamma.clone(), pr.gamma_prime.clone()),
        Transform::SwapCharacters => (pr.h.clone(), pr.gamma_prime.clone(), pr.gamma.clone()),
        Transform::ShiftEmbedding(n) => {
            let pn = num_traits::pow(pr.p.clone(), n);
            (&pr.h * &pn, &pr.gamma * &pn, &pr.gamma_prime * &pn)
        }
    };
    let np = Params::new(
        &pr.p,
        pr.f,
        &h.to_bigint().unwrap(),
        &ga.to_bigint().unwrap(),
        &gp.to_bigint().unwrap(),
        pr.theta,
    )?;
    compute_gene(&np)
}

/// One named structural check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    /// first offending index, when it failed
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn check(name: &'static str, failure: Option<String>) -> Check {
    Check { name, passed: failure.is_none(), detail: failure }
}

/// Checks that only need the symbols.
pub fn symbol_checks(s: &Symbols) -> Vec<Check> {
    let n = 2 * s.f;
    let ab_then_zero = (0..n).find(|&i| s.at(i) == Symbol::AB && s.at(i + 1) != Symbol::O);
    let zero_after = (0..n)
        .find(|&i| s.at(i + 1) == Symbol::O && !matches!(s.at(i), Symbol::O | Symbol::AB));
    let all_ab = (0..s.f).all(|c| {
        let (a, b) = s.couple(c);
        matches!((a, b), (Symbol::A, Symbol::B) | (Symbol::B, Symbol::A))
    });
    vec![
        check("ab_followed_by_zero", ab_then_zero.map(|i| format!("i = {i}"))),
        check("zero_preceded_by_zero_or_ab", zero_after.map(|i| format!("i = {i}"))),
        check("not_all_couples_a_b", all_ab.then(|| "every couple is {A,B}".to_string())),
    ]
}

/// Full report for a computed gene.
pub fn validate_gene(g: &Gene) -> ValidationReport {
    let pr = &g.params;
    let f = pr.f;
    let n = 2 * f;
    let e = &pr.e;
    let nu = &pr.nu;
    let mut checks = Vec::new();

    let mut rec = None;
    for i in 0..n {
        let lin = &pr.p * g.alpha(i) + pr.h_digit(i);
        let next = g.alpha(i + 1);
        let ok = match g.symbols.at(i) {
            Symbol::A | Symbol::AB => lin == *next,
            Symbol::B => lin >= *e && &lin - e == *next,
            Symbol::O => &lin % e == *next,
        };
        if !ok && rec.is_none() {
            rec = Some(format!("i = {i}"));
        }
    }
    checks.push(check("alpha_recurrence", rec));
    checks.extend(symbol_checks(&g.symbols));

    let nondeg = pr.degeneracy_flags().rho_nondegenerate;
    let has_zero = g.symbols.x.contains(&Symbol::O);
    checks.push(check(
        "zero_present_when_nondegenerate",
        (nondeg && !has_zero).then(|| "no 0 symbol".to_string()),
    ));

    let dual = (0..n).find(|&i| (g.alpha_prime(i) + g.alpha(i + f)) % e != nu % e);
    checks.push(check("dual_sum_congruence", dual.map(|i| format!("i = {i}"))));

    let twist = transform_gene(g, Transform::FrobeniusTwist).ok();
    let twist_fail = match &twist {
        Some(t) => (0..n).find(|&i| t.symbols.at(i) != g.symbols.at(i + f)).map(|i| format!("i = {i}")),
        None => Some("twisted parameters rejected".into()),
    };
    checks.push(check("frobenius_twist_rotates", twist_fail));
    let swap = transform_gene(g, Transform::SwapCharacters).ok();
    let swap_fail = match &swap {
        Some(t) => (0..n)
            .find(|&i| t.symbols.at(i) != g.symbols.at(i + f).tau())
            .map(|i| format!("i = {i}")),
        None => Some("swapped parameters rejected".into()),
    };
    checks.push(check("swap_characters_rotates_and_relabels", swap_fail));

    let zero_iff = (0..n).find(|&i| {
        let above = g.alpha(i) + g.alpha_prime(i + f) > *nu;
        above != (g.symbols.at(i) == Symbol::O)
    });
    checks.push(check("zero_iff_sum_exceeds_nu", zero_iff.map(|i| format!("i = {i}"))));

    let balanced = (0..f).find(|&i| {
        let both = g.symbols.at(i) != Symbol::O && g.symbols.at(i + f) != Symbol::O;
        both && !(g.alpha(i) + g.alpha_prime(i + f) == *nu && g.alpha_prime(i) + g.alpha(i + f) == *nu)
    });
    checks.push(check("balanced_sums_equal_nu", balanced.map(|i| format!("i = {i}"))));

    let generic = pr.degeneracy_flags().generic;
    let gen_fail = (0..f).find(|&i| generic && g.symbols.at(i) != Symbol::O && g.symbols.at(i + f) != Symbol::O);
    checks.push(check("generic_has_zero_in_every_column", gen_fail.map(|i| format!("column {i}"))));

    ValidationReport { checks }
}

impl fmt::Display for Gene {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&spaced(&self.symbols))
    }
}
