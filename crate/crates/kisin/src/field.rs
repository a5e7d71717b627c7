//! Points of (P¹)^f over a small prime field.

use crate::error::{Error, Result};
use std::fmt;

/// A point of P¹ in one of the two standard charts: `[1:t]` or `[0:1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum P1 {
    Affine(u64),
    Infinity,
}

impl P1 {
    /// `[1:0]`
    pub const ORIGIN: P1 = P1::Affine(0);

    /// Homogeneous coordinates `(x, y)` of `[x:y]`.
    pub fn coords(self) -> (u64, u64) {
        match self {
            P1::Affine(t) => (1, t),
            P1::Infinity => (0, 1),
        }
    }

    /// Normalize a nonzero pair modulo `l`.
    pub fn from_coords(x: u64, y: u64, l: u64) -> Option<P1> {
        let (x, y) = (x % l, y % l);
        if x == 0 {
            if y == 0 {
                None
            } else {
                Some(P1::Infinity)
            }
        } else {
            Some(P1::Affine(y * inv_mod(x, l) % l))
        }
    }

    /// `[x:y] ↦ [y:x]`
    pub fn swapped(self, l: u64) -> P1 {
        let (x, y) = self.coords();
        P1::from_coords(y, x, l).expect("nonzero")
    }

    /// All `l + 1` points, affine chart first.
    pub fn all(l: u64) -> impl Iterator<Item = P1> {
        (0..l).map(P1::Affine).chain(std::iter::once(P1::Infinity))
    }
}

impl fmt::Display for P1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            P1::Affine(t) => write!(f, "[1:{t}]"),
            P1::Infinity => write!(f, "[0:1]"),
        }
    }
}

impl std::str::FromStr for P1 {
    type Err = Error;
    fn from_str(s: &str) -> Result<P1> {
        let t = s.trim();
        let inner = t
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("bad projective point {s:?}")))?;
        let (a, b) = inner
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("bad projective point {s:?}")))?;
        let a: u64 = a.trim().parse().map_err(|_| Error::Parse(format!("bad coordinate in {s:?}")))?;
        let b: u64 = b.trim().parse().map_err(|_| Error::Parse(format!("bad coordinate in {s:?}")))?;
        match (a, b) {
            (1, t) => Ok(P1::Affine(t)),
            (0, 1) => Ok(P1::Infinity),
            _ => Err(Error::Parse(format!("{s:?} is not in the form [1:t] or [0:1]"))),
        }
    }
}

/// A point of (P¹)^f; entry `c` is `[x_c : x_{c+f}]`.
pub type Point = Vec<P1>;

/// Coordinate `x_k` of a point, `k` read modulo `2f`.
pub fn coord(point: &[P1], k: usize) -> u64 {
    let f = point.len();
    let k = k % (2 * f);
    let (x, y) = point[k % f].coords();
    if k < f {
        x
    } else {
        y
    }
}

pub fn format_point(point: &[P1]) -> String {
    point.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

pub fn inv_mod(a: u64, l: u64) -> u64 {
    pow_mod(a % l, l - 2, l)
}

pub fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = (r as u128 * b as u128 % m as u128) as u64;
        }
        b = (b as u128 * b as u128 % m as u128) as u64;
        e >>= 1;
    }
    r
}

/// Accept a prime field order.
pub fn check_field(l: u64) -> Result<u64> {
    if l >= 2 && crate::params::is_prime(&num_bigint::BigUint::from(l)) && l < (1 << 31) {
        Ok(l)
    } else {
        Err(Error::InvalidField(l))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn charts_roundtrip() {
        for l in [2u64, 5, 13] {
            for x in P1::all(l) {
                let (a, b) = x.coords();
                assert_eq!(P1::from_coords(a * 3, b * 3, l), if l == 3 { None } else { Some(x) });
                assert_eq!(x.swapped(l).swapped(l), x);
                assert_eq!(x.to_string().parse::<P1>().unwrap(), x);
            }
        }
        assert_eq!(P1::all(5).count(), 6);
    }

    #[test]
    fn coordinates_wrap() {
        let pt = vec![P1::Affine(2), P1::Infinity];
        assert_eq!(coord(&pt, 0), 1);
        assert_eq!(coord(&pt, 2), 2);
        assert_eq!(coord(&pt, 1), 0);
        assert_eq!(coord(&pt, 3), 1);
        assert_eq!(coord(&pt, 4), 1);
    }
}
