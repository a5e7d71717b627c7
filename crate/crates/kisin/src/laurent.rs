//! Sparse Laurent polynomials in `u` over F_l and 2×2 matrices of them.

use num_bigint::BigInt;
use std::collections::BTreeMap;
use std::fmt;

/// `Σ c_k u^k`; zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Laurent {
    pub terms: BTreeMap<BigInt, u64>,
}

impl Laurent {
    pub fn zero() -> Laurent {
        Laurent::default()
    }

    pub fn monomial(c: u64, e: BigInt, l: u64) -> Laurent {
        let mut t = BTreeMap::new();
        if !c.is_multiple_of(l) {
            t.insert(e, c % l);
        }
        Laurent { terms: t }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Smallest exponent, `None` for zero.
    pub fn valuation(&self) -> Option<&BigInt> {
        self.terms.keys().next()
    }

    pub fn coeff(&self, e: &BigInt) -> u64 {
        self.terms.get(e).copied().unwrap_or(0)
    }

    fn add_term(&mut self, e: BigInt, c: u64, l: u64) {
        let slot = self.terms.entry(e.clone()).or_insert(0);
        *slot = (*slot + c) % l;
        if *slot == 0 {
            self.terms.remove(&e);
        }
    }

    pub fn add(&self, o: &Laurent, l: u64) -> Laurent {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(e.clone(), *c, l);
        }
        r
    }

    pub fn neg(&self, l: u64) -> Laurent {
        Laurent { terms: self.terms.iter().map(|(e, c)| (e.clone(), (l - c) % l)).collect() }
    }

    pub fn mul(&self, o: &Laurent, l: u64) -> Laurent {
        let mut r = Laurent::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &o.terms {
                r.add_term(ea + eb, (*ca as u128 * *cb as u128 % l as u128) as u64, l);
            }
        }
        r
    }

    /// `u ↦ u^p` (coefficients of a prime field are Frobenius-fixed).
    pub fn frobenius(&self, p: &BigInt) -> Laurent {
        Laurent { terms: self.terms.iter().map(|(e, c)| (e * p, *c)).collect() }
    }
}

impl fmt::Display for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(e, c)| format!("{c}*u^{e}")).collect();
        f.write_str(&parts.join(" + "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentMatrix {
    pub m: [[Laurent; 2]; 2],
    pub modulus: u64,
}

impl LaurentMatrix {
    pub fn new(m: [[Laurent; 2]; 2], modulus: u64) -> LaurentMatrix {
        LaurentMatrix { m, modulus }
    }

    pub fn mul(&self, o: &LaurentMatrix) -> LaurentMatrix {
        let l = self.modulus;
        let e = |i: usize, j: usize| self.m[i][0].mul(&o.m[0][j], l).add(&self.m[i][1].mul(&o.m[1][j], l), l);
        LaurentMatrix { m: [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]], modulus: l }
    }

    pub fn adjugate(&self) -> LaurentMatrix {
        let l = self.modulus;
        let m = &self.m;
        LaurentMatrix {
            m: [[m[1][1].clone(), m[0][1].neg(l)], [m[1][0].neg(l), m[0][0].clone()]],
            modulus: l,
        }
    }

    pub fn det(&self) -> Laurent {
        let l = self.modulus;
        self.m[0][0].mul(&self.m[1][1], l).add(&self.m[0][1].mul(&self.m[1][0], l).neg(l), l)
    }

    pub fn frobenius(&self, p: &BigInt) -> LaurentMatrix {
        let f = |x: &Laurent| x.frobenius(p);
        LaurentMatrix {
            m: [[f(&self.m[0][0]), f(&self.m[0][1])], [f(&self.m[1][0]), f(&self.m[1][1])]],
            modulus: self.modulus,
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = &Laurent> {
        self.m.iter().flat_map(|r| r.iter())
    }

    /// Smallest exponent over all entries.
    pub fn min_exponent(&self) -> Option<BigInt> {
        self.entries().filter_map(|x| x.valuation().cloned()).min()
    }

    pub fn max_terms(&self) -> usize {
        self.entries().map(|x| x.terms.len()).max().unwrap_or(0)
    }
}

impl fmt::Display for LaurentMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.m[0][0], self.m[0][1], self.m[1][0], self.m[1][1])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mono(c: u64, e: i64) -> Laurent {
        Laurent::monomial(c, BigInt::from(e), 5)
    }

    #[test]
    fn arithmetic() {
        let a = mono(2, -1).add(&mono(3, 4), 5);
        let b = mono(3, 1);
        let p = a.mul(&b, 5);
        assert_eq!(p.coeff(&BigInt::from(0)), 1);
        assert_eq!(p.coeff(&BigInt::from(5)), 4);
        assert!(a.add(&a.neg(5), 5).is_zero());
        assert_eq!(a.frobenius(&BigInt::from(5)).valuation(), Some(&BigInt::from(-5)));
        assert_eq!(mono(2, 3).to_string(), "2*u^3");
    }

    #[test]
    fn adjugate_gives_determinant() {
        let m = LaurentMatrix::new([[mono(1, 2), mono(3, 0)], [mono(4, 1), mono(2, -1)]], 5);
        let prod = m.adjugate().mul(&m);
        let d = m.det();
        assert_eq!(prod.m[0][0], d);
        assert_eq!(prod.m[1][1], d);
        assert!(prod.m[0][1].is_zero() && prod.m[1][0].is_zero());
    }
}
