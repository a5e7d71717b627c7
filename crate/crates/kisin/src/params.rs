//! Arithmetic input: `(p, f, h, γ, γ′, θ)` and the constants derived from it.

use crate::error::{Error, Result};
use num_bigint::{BigInt, BigUint, ToBigInt};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

/// Validated parameters. All residues are stored in their canonical range.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Params {
    pub p: BigUint,
    pub f: usize,
    pub q: BigUint,
    pub e: BigUint,
    pub nu: BigUint,
    /// residue modulo q² − 1
    pub h: BigUint,
    /// residues modulo e
    pub gamma: BigUint,
    pub gamma_prime: BigUint,
    pub theta: u64,
    /// `h_i` for `i ∈ [0, 2f)`, with `h_{i+f} = p − 1 − h_i`
    pub h_digits: Vec<BigUint>,
    /// base-`p` digits of `c ≡ γ − γ′ (mod e)`, least significant first
    pub c_digits: Vec<BigUint>,
}

/// Flags of the non-degeneracy and genericity conditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DegeneracyFlags {
    pub rho_nondegenerate: bool,
    pub type_nondegenerate: bool,
    pub generic: bool,
}

fn modp(x: &BigInt, m: &BigUint) -> BigUint {
    let m = m.to_bigint().unwrap();
    x.mod_floor(&m).to_biguint().unwrap()
}

/// Deterministic Miller–Rabin for the sizes we meet (exact below 3.3·10²⁴,
/// overwhelmingly reliable beyond).
pub fn is_prime(n: &BigUint) -> bool {
    let two = BigUint::from(2u32);
    if *n < two {
        return false;
    }
    const BASES: [u32; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];
    for b in BASES {
        let b = BigUint::from(b);
        if *n == b {
            return true;
        }
        if (n % &b).is_zero() {
            return false;
        }
    }
    let one = BigUint::one();
    let nm1 = n - &one;
    let mut d = nm1.clone();
    let mut s = 0u32;
    while d.is_even() {
        d >>= 1;
        s += 1;
    }
    'outer: for b in BASES {
        let mut x = BigUint::from(b).modpow(&d, n);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == nm1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// ν = p + p² + … + p^{f−1}.
pub fn nu_of(p: &BigUint, f: usize) -> BigUint {
    let mut acc = BigUint::zero();
    let mut pw = p.clone();
    for _ in 1..f {
        acc += &pw;
        pw *= p;
    }
    acc
}

fn check_prime(p: &BigUint) -> Result<()> {
    if *p < BigUint::from(5u32) {
        return Err(Error::RejectSmallPrime(p.to_string()));
    }
    if !is_prime(p) {
        return Err(Error::RejectNotPrime(p.to_string()));
    }
    Ok(())
}

/// Digits `(h_0, …, h_{2f−1})` with `h ≡ 1 + Σ_{i<f} h_i p^{f−1−i} (mod q+1)`
/// and `h_{i+f} = p − 1 − h_i`.
pub fn digits(h: &BigInt, p: &BigUint, f: usize) -> Result<Vec<BigUint>> {
    let q = num_traits::pow(p.clone(), f);
    let q1 = &q + 1u32;
    let hr = modp(h, &q1);
    if hr.is_zero() {
        return Err(Error::RejectReducible(h.to_string()));
    }
    let mut r = hr - 1u32;
    let mut low = vec![BigUint::zero(); f];
    for i in (0..f).rev() {
        low[i] = &r % p;
        r /= p;
    }
    debug_assert!(r.is_zero());
    let pm1 = p - 1u32;
    let mut out = low.clone();
    out.extend(low.iter().map(|d| &pm1 - d));
    Ok(out)
}

impl Params {
    /// Reduce and validate an input tuple. `h`, `gamma`, `gamma_prime` may be
    /// negative; they are reduced modulo `q² − 1` and `e`.
    pub fn new(
        p: &BigUint,
        f: usize,
        h: &BigInt,
        gamma: &BigInt,
        gamma_prime: &BigInt,
        theta: u64,
    ) -> Result<Params> {
        check_prime(p)?;
        if f < 2 {
            return Err(Error::RejectDegree(f, 2));
        }
        if theta == 0 {
            return Err(Error::RejectTheta);
        }
        let q = num_traits::pow(p.clone(), f);
        let e = &q - 1u32;
        let nu = nu_of(p, f);
        let qq = &q * &q - 1u32;
        let h = modp(h, &qq);
        let h_digits = digits(&h.to_bigint().unwrap(), p, f)?;
        let gamma = modp(gamma, &e);
        let gamma_prime = modp(gamma_prime, &e);
        if gamma == gamma_prime {
            return Err(Error::RejectEqualCharacters);
        }
        let lhs = modp(&(h.to_bigint().unwrap() - 1), &e);
        let rhs = (&gamma + &gamma_prime + &nu) % &e;
        if lhs != rhs {
            return Err(Error::RejectDeterminant);
        }
        let mut c = modp(&(gamma.to_bigint().unwrap() - gamma_prime.to_bigint().unwrap()), &e);
        let mut c_digits = Vec::with_capacity(f);
        for _ in 0..f {
            c_digits.push(&c % p);
            c /= p;
        }
        Ok(Params { p: p.clone(), f, q, e, nu, h, gamma, gamma_prime, theta, h_digits, c_digits })
    }

    /// Convenience constructor from machine integers.
    pub fn from_i64(p: u64, f: usize, h: i64, gamma: i64, gamma_prime: i64) -> Result<Params> {
        Params::new(&BigUint::from(p), f, &BigInt::from(h), &BigInt::from(gamma), &BigInt::from(gamma_prime), 1)
    }

    /// Same parameters with a different θ.
    pub fn with_theta(&self, theta: u64) -> Result<Params> {
        if theta == 0 {
            return Err(Error::RejectTheta);
        }
        Ok(Params { theta, ..self.clone() })
    }

    /// `h_i` with the index read modulo `2f`.
    pub fn h_digit(&self, i: usize) -> &BigUint {
        &self.h_digits[i % (2 * self.f)]
    }

    /// p as a machine word when it fits.
    pub fn p_u64(&self) -> Option<u64> {
        self.p.to_u64()
    }

    pub fn degeneracy_flags(&self) -> DegeneracyFlags {
        degeneracy_flags(self)
    }
}

/// Solve for `h` from its digit vector and the two characters.
pub fn realize_h(
    digit_vector: &[BigUint],
    gamma: &BigInt,
    gamma_prime: &BigInt,
    p: &BigUint,
    f: usize,
) -> Result<BigUint> {
    check_prime(p)?;
    if digit_vector.len() != f {
        return Err(Error::Parse(format!("expected {f} digits, got {}", digit_vector.len())));
    }
    if digit_vector.iter().any(|d| d >= p) {
        return Err(Error::Parse("digits must lie in [0, p-1]".into()));
    }
    let q = num_traits::pow(p.clone(), f);
    let e = &q - 1u32;
    let q1 = &q + 1u32;
    let nu = nu_of(p, f);
    let mut r = BigUint::zero();
    for d in digit_vector {
        r = r * p + d;
    }
    // r ≤ q − 1, so 1 + r is never 0 mod q+1
    let a = (&r + 1u32) % &q1;
    let b = modp(&(gamma + gamma_prime + nu.to_bigint().unwrap() + 1), &e);
    // h ≡ a (q+1), h ≡ b (q−1); the moduli share exactly the factor 2.
    let two = BigUint::from(2u32);
    if (&a % &two) != (&b % &two) {
        return Err(Error::NoSolution(
            "parity of the digit sum is incompatible with gamma + gamma'".into(),
        ));
    }
    // h = a + (q+1)·t with (q+1)t ≡ b − a (mod q−1); divide by 2.
    let m = &e / &two;
    let n = &q1 / &two;
    let diff = modp(&(b.to_bigint().unwrap() - a.to_bigint().unwrap()), &e) / &two;
    let inv = mod_inverse(&(&n % &m), &m).expect("(q+1)/2 and (q-1)/2 are coprime");
    let t = (diff * inv) % &m;
    let modulus = &q * &q - 1u32;
    let h = (a + &q1 * t) % modulus;
    Ok(h)
}

fn mod_inverse(a: &BigUint, m: &BigUint) -> Option<BigUint> {
    if m.is_one() {
        return Some(BigUint::zero());
    }
    let a = a.to_bigint().unwrap();
    let m_i = m.to_bigint().unwrap();
    let g = a.extended_gcd(&m_i);
    if !g.gcd.is_one() {
        return None;
    }
    Some(g.x.mod_floor(&m_i).to_biguint().unwrap())
}

pub fn degeneracy_flags(params: &Params) -> DegeneracyFlags {
    let p = &params.p;
    let pm1 = p - 1u32;
    let pm2 = p - 2u32;
    let f = params.f;
    let low = &params.h_digits[..f];
    let rho_nondegenerate = low.iter().any(|d| !d.is_zero() && *d != pm1);
    let type_nondegenerate = params
        .c_digits
        .iter()
        .any(|c| !c.is_zero() && !c.is_one() && *c != pm2 && *c != pm1);
    let generic = low.iter().all(|d| !d.is_zero() && *d <= pm2);
    DegeneracyFlags { rho_nondegenerate, type_nondegenerate, generic }
}
