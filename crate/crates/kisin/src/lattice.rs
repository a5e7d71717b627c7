//! Lattice-level oracle: passage matrices, Frobenius numerators, the
//! integrality test and the genre read off matrix corners.

use crate::error::{Error, Result};
use crate::field::{coord, inv_mod, P1};
use crate::gene::{Gene, Symbol};
use crate::laurent::{Laurent, LaurentMatrix};
use crate::strata::{Genre, GenreVector};
use num_bigint::{BigInt, ToBigInt};
use num_traits::Signed;

/// How the complementary pair of a balanced column is filled in. Both make
/// `a a′ − b b′` a unit; the integrality verdict may not depend on the choice.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Completion {
    Standard,
    Alternate,
}

fn complete(x: u64, y: u64, l: u64, c: Completion) -> (u64, u64) {
    match c {
        Completion::Standard => {
            if !x.is_multiple_of(l) {
                (1, 0)
            } else {
                (0, 1)
            }
        }
        Completion::Alternate => {
            if !x.is_multiple_of(l) && !y.is_multiple_of(l) {
                (0, l - 1)
            } else {
                (1, 1)
            }
        }
    }
}

/// Shape of one column's lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LatticeCase {
    /// `X_{i+f} = 0`: `diag(u^{α_i}, u^{α′_{i+f}})`
    Diagonal { exponents: (BigInt, BigInt) },
    /// `X_i = 0`: antidiagonal with `u^{α′_i}`, `u^{α_{i+f}}`
    Antidiagonal { exponents: (BigInt, BigInt) },
    /// both symbols nonzero, `α_i + α_{i+f} < ν`: the line sits in the first column
    BalancedFirst { line: P1, exponents: (BigInt, BigInt), gap: BigInt },
    /// both symbols nonzero, `α_i + α_{i+f} > ν`: the line sits in the second column
    BalancedSecond { line: P1, exponents: (BigInt, BigInt), gap: BigInt },
}

impl LatticeCase {
    pub fn tag(&self) -> &'static str {
        match self {
            LatticeCase::Diagonal { .. } => "diagonal",
            LatticeCase::Antidiagonal { .. } => "antidiagonal",
            LatticeCase::BalancedFirst { .. } => "balanced_first",
            LatticeCase::BalancedSecond { .. } => "balanced_second",
        }
    }
}

fn bi(x: &num_bigint::BigUint) -> BigInt {
    x.to_bigint().unwrap()
}

/// Description of column `i` at `point`.
pub fn column_case(g: &Gene, point: &[P1], i: usize) -> Result<LatticeCase> {
    let f = g.f();
    let s = &g.symbols;
    let (top, bottom) = (s.at(i), s.at(i + f));
    if top == Symbol::O && bottom == Symbol::O {
        return Err(Error::PointNotOnVariety);
    }
    if bottom == Symbol::O {
        if coord(point, i + f) != 0 {
            return Err(Error::PointNotOnVariety);
        }
        return Ok(LatticeCase::Diagonal { exponents: (bi(g.alpha(i)), bi(g.alpha_prime(i + f))) });
    }
    if top == Symbol::O {
        if coord(point, i) != 0 {
            return Err(Error::PointNotOnVariety);
        }
        return Ok(LatticeCase::Antidiagonal { exponents: (bi(g.alpha_prime(i)), bi(g.alpha(i + f))) });
    }
    let nu = bi(&g.params.nu);
    let delta = &nu - bi(g.alpha(i)) - bi(g.alpha(i + f));
    let line = point[i];
    let exponents = (bi(g.alpha(i)), bi(g.alpha(i + f)));
    if delta.is_positive() {
        Ok(LatticeCase::BalancedFirst { line, exponents, gap: delta })
    } else if delta.is_negative() {
        Ok(LatticeCase::BalancedSecond { line, exponents, gap: -delta })
    } else {
        Err(Error::InternalMismatch(format!("column {i}: alpha_i + alpha_(i+f) = nu")))
    }
}

/// `P^{(i)} = [[a u^{α_i}, b′ u^{α′_i}], [b u^{α_{i+f}}, a′ u^{α′_{i+f}}]]`.
pub fn passage_matrix(g: &Gene, point: &[P1], i: usize, l: u64, c: Completion) -> Result<LaurentMatrix> {
    let f = g.f();
    let case = column_case(g, point, i)?;
    let (x, y) = point[i % f].coords();
    let (a, b, bp, ap) = match case {
        LatticeCase::Diagonal { .. } => (1, 0, 0, 1),
        LatticeCase::Antidiagonal { .. } => (0, 1, 1, 0),
        LatticeCase::BalancedFirst { .. } => {
            let (ap, bp) = complete(x, y, l, c);
            (x, y, bp, ap)
        }
        LatticeCase::BalancedSecond { .. } => {
            let (a, b) = complete(x, y, l, c);
            (a, b, y, x)
        }
    };
    let m = |c: u64, e: &num_bigint::BigUint| Laurent::monomial(c, bi(e), l);
    Ok(LaurentMatrix::new(
        [
            [m(a, g.alpha(i)), m(bp, g.alpha_prime(i))],
            [m(b, g.alpha(i + f)), m(ap, g.alpha_prime(i + f))],
        ],
        l,
    ))
}

/// `G^{(i)}`: `diag(u^{h_i}, u^{h_{i+f}})`, twisted by θ at the seam.
pub fn frobenius_core(g: &Gene, i: usize, l: u64) -> Result<LaurentMatrix> {
    let f = g.f();
    let pr = &g.params;
    let h = |k: usize| bi(pr.h_digit(k));
    if i < f - 1 {
        Ok(LaurentMatrix::new(
            [[Laurent::monomial(1, h(i), l), Laurent::zero()], [Laurent::zero(), Laurent::monomial(1, h(i + f), l)]],
            l,
        ))
    } else {
        let t = pr.theta % l;
        if t == 0 {
            return Err(Error::RejectTheta);
        }
        Ok(LaurentMatrix::new(
            [
                [Laurent::zero(), Laurent::monomial(inv_mod(t, l), h(2 * f - 1), l)],
                [Laurent::monomial(1, h(f - 1), l), Laurent::zero()],
            ],
            l,
        ))
    }
}

/// `K^{(i)} = adj(P^{(i+1)}) · G^{(i)} · φ(P^{(i)})`.
pub fn frobenius_numerator(g: &Gene, point: &[P1], i: usize, l: u64, c: Completion) -> Result<LaurentMatrix> {
    let f = g.f();
    let pi = passage_matrix(g, point, i, l, c)?;
    let pj = passage_matrix(g, point, (i + 1) % f, l, c)?;
    let p = bi(&g.params.p);
    Ok(pj.adjugate().mul(&frobenius_core(g, i, l)?).mul(&pi.frobenius(&p)))
}

fn vanishing_ok(g: &Gene, point: &[P1], l: u64) -> bool {
    (0..2 * g.f()).all(|k| g.symbols.at(k) != Symbol::O || coord(point, k).is_multiple_of(l))
}

fn numerators(g: &Gene, point: &[P1], l: u64, c: Completion) -> Result<Vec<LaurentMatrix>> {
    (0..g.f()).map(|i| frobenius_numerator(g, point, i, l, c)).collect()
}

fn low_free(k: &LaurentMatrix, nu: &BigInt) -> bool {
    k.entries().all(|x| x.valuation().is_none_or(|v| v >= nu))
}

/// The lattice of `point` is Frobenius-stable: the coordinates attached to
/// `0` symbols vanish and no `K^{(i)}` has a monomial below `u^ν`.
pub fn integrality_check_with(g: &Gene, point: &[P1], l: u64, c: Completion) -> bool {
    if point.len() != g.f() || !vanishing_ok(g, point, l) {
        return false;
    }
    let nu = bi(&g.params.nu);
    match numerators(g, point, l, c) {
        Ok(ks) => ks.iter().all(|k| low_free(k, &nu)),
        Err(_) => false,
    }
}

pub fn integrality_check(g: &Gene, point: &[P1], l: u64) -> bool {
    integrality_check_with(g, point, l, Completion::Standard)
}

/// Corner reading: `I_η` when the bottom-right entry of `K^{(i)}` has a
/// `u^ν` term, `I_η′` when the top-left one does, `II` otherwise.
pub fn genre_from_matrices(g: &Gene, point: &[P1], l: u64) -> Result<GenreVector> {
    if !integrality_check(g, point, l) {
        return Err(Error::NotIntegral);
    }
    let nu = bi(&g.params.nu);
    let ks = numerators(g, point, l, Completion::Standard)?;
    let fine = ks
        .iter()
        .map(|k| {
            if k.m[1][1].coeff(&nu) != 0 {
                Genre::IEta
            } else if k.m[0][0].coeff(&nu) != 0 {
                Genre::IEtaPrime
            } else {
                Genre::II
            }
        })
        .collect();
    Ok(GenreVector { fine })
}

/// Per-column lattice shapes of `point`.
pub fn lattice_description(g: &Gene, point: &[P1], l: u64) -> Result<Vec<LatticeCase>> {
    let sys_ok = vanishing_ok(g, point, l);
    if !sys_ok {
        return Err(Error::PointNotOnVariety);
    }
    (0..g.f()).map(|i| column_case(g, point, i)).collect()
}

/// Rebuild a passage matrix from its description.
pub fn matrix_from_case(g: &Gene, i: usize, case: &LatticeCase, l: u64, c: Completion) -> LaurentMatrix {
    let f = g.f();
    let mut pt = vec![P1::Affine(0); f];
    if let LatticeCase::BalancedFirst { line, .. } | LatticeCase::BalancedSecond { line, .. } = case {
        pt[i] = *line;
    }
    if let LatticeCase::Antidiagonal { .. } = case {
        pt[i] = P1::Infinity;
    }
    passage_matrix(g, &pt, i, l, c).expect("description comes from a valid column")
}

/// Same column span over F_l[[u]]: `adj(M)·N / det M` is an invertible integral matrix.
pub fn same_span(m: &LaurentMatrix, n: &LaurentMatrix) -> bool {
    let dm = m.det();
    let dn = n.det();
    if dm.terms.len() != 1 || dn.is_zero() {
        return false;
    }
    let v = dm.valuation().unwrap().clone();
    let x = m.adjugate().mul(n);
    let integral = x.entries().all(|e| e.valuation().is_none_or(|w| *w >= v));
    integral && dn.valuation() == Some(&v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gene::compute_gene;
    use crate::params::Params;

    #[test]
    fn small_case_matrices() {
        // gene A,B|AB,0 at p = 5, f = 2
        let pr = Params::from_i64(5, 2, 2, -3, -1).unwrap();
        let g = compute_gene(&pr).unwrap();
        let pt = vec![P1::Affine(0), P1::Affine(0)];
        let p1 = passage_matrix(&g, &pt, 1, 5, Completion::Standard).unwrap();
        // X_3 = 0 gives the diagonal form
        assert!(p1.m[0][1].is_zero() && p1.m[1][0].is_zero());
        assert_eq!(p1.det().valuation(), Some(&BigInt::from(5)));
        assert!(integrality_check(&g, &pt, 5));
        let bad = vec![P1::Affine(0), P1::Infinity];
        assert!(!integrality_check(&g, &bad, 5));
    }
}
