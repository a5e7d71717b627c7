//! Genre of a point, the census of strata, and ring descriptors.

use crate::components::{Component, NodeState};
use crate::decorate::{Decoration, Letter, LinkKind, Row};
use crate::error::{Error, Result};
use crate::field::{coord, P1, Point};
use crate::gene::{Symbol, Symbols};
use crate::variety::{build_equations, FactorKind, ReducedDiagram};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Genre {
    IEta,
    IEtaPrime,
    II,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Coarse {
    I,
    II,
}

impl Genre {
    pub fn coarse(self) -> Coarse {
        match self {
            Genre::II => Coarse::II,
            _ => Coarse::I,
        }
    }
    pub fn as_str(self) -> &'static str {
        match self {
            Genre::IEta => "I_eta",
            Genre::IEtaPrime => "I_eta'",
            Genre::II => "II",
        }
    }
    fn swapped(self) -> Genre {
        match self {
            Genre::IEta => Genre::IEtaPrime,
            Genre::IEtaPrime => Genre::IEta,
            Genre::II => Genre::II,
        }
    }
}

impl fmt::Display for Coarse {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Coarse::I => "I",
            Coarse::II => "II",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GenreVector {
    pub fine: Vec<Genre>,
}

impl GenreVector {
    pub fn coarse(&self) -> Vec<Coarse> {
        self.fine.iter().map(|g| g.coarse()).collect()
    }
    /// `"I,II,I"`
    pub fn coarse_key(&self) -> String {
        self.coarse().iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
    }
    pub fn fine_key(&self) -> String {
        self.fine.iter().map(|g| g.as_str()).collect::<Vec<_>>().join(",")
    }
}

/// Componentwise order with `I ≤ II`: the closure of the stratum of `a`
/// contains that of `b` iff `a ≤ b`.
pub fn coarse_le(a: &[Coarse], b: &[Coarse]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x <= y)
}

/// Genre from the symbols, links and coordinates.
pub fn genre_of_point(s: &Symbols, d: &Decoration, point: &[P1], l: u64) -> Result<GenreVector> {
    let f = s.f;
    if !build_equations(s, d).satisfied(point, l) {
        return Err(Error::PointNotOnVariety);
    }
    let ab_zero = |c: usize| matches!(s.couple(c), (Symbol::AB, Symbol::O) | (Symbol::O, Symbol::AB));
    let Some(dom) = &d.dominance else {
        if (0..f).all(ab_zero) {
            return Ok(GenreVector { fine: vec![Genre::II; f] });
        }
        return Err(Error::InvalidGene("no dominant letter".into()));
    };
    let x = |k: usize| coord(point, k) % l;
    let mut fine = Vec::with_capacity(f);
    for i in 0..f {
        if ab_zero(i) {
            fine.push(Genre::II);
            continue;
        }
        let j = (i + 1) % f;
        let flip = dom[i] == Letter::B;
        let sym = |k: usize| if flip { s.at(k).tau() } else { s.at(k) };
        let (xi, xif, xi1, xif1) = (x(i), x(i + f), x(i + 1), x(i + f + 1));
        let g = if dom[i] == dom[j] {
            let td = d.has(i, LinkKind::TopDown);
            let bu = d.has(i, LinkKind::BottomUp);
            match (td, bu) {
                (false, false) => Genre::II,
                (true, true) => Genre::IEtaPrime,
                (true, false) => {
                    if xi == 0 && xif1 == 0 {
                        Genre::II
                    } else if xif1 != 0 {
                        Genre::IEta
                    } else {
                        Genre::IEtaPrime
                    }
                }
                (false, true) => {
                    if xif == 0 && xi1 == 0 {
                        Genre::II
                    } else if xi1 != 0 {
                        Genre::IEta
                    } else {
                        Genre::IEtaPrime
                    }
                }
            }
        } else {
            let top = sym(i) == Symbol::A;
            let bottom = sym(i + f) == Symbol::A;
            debug_assert_eq!(top, d.has_horizontal(i, Row::Top));
            let vanish = match (top, bottom) {
                (true, true) => (xi * xi1 % l + l - xif * xif1 % l).is_multiple_of(l),
                (true, false) => xi * xi1 % l == 0,
                (false, true) => xif * xif1 % l == 0,
                (false, false) => false,
            };
            if vanish {
                Genre::II
            } else {
                Genre::IEtaPrime
            }
        };
        fine.push(if flip { g.swapped() } else { g });
    }
    Ok(GenreVector { fine })
}

/// `δ(P_i, P_{i+1}⁻¹)` with `[u:v]⁻¹ = [v:u]`; the point after column
/// `f−1` is column 0 with its coordinates exchanged.
pub fn delta_genre(point: &[P1], i: usize, l: u64) -> Coarse {
    let f = point.len();
    let next_inv = if i + 1 < f { point[i + 1].swapped(l) } else { point[0] };
    if point[i] == next_inv {
        Coarse::II
    } else {
        Coarse::I
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointRecord {
    pub point: Point,
    pub genre: GenreVector,
    /// indices into the component list
    pub components: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Census {
    /// coarse key → number of points
    pub strata: BTreeMap<String, u64>,
    pub points: Vec<PointRecord>,
}

pub fn strata_census(
    s: &Symbols,
    d: &Decoration,
    points: &[Point],
    components: &[Component],
    l: u64,
) -> Result<Census> {
    let mut census = Census::default();
    for pt in points {
        let genre = genre_of_point(s, d, pt, l)?;
        *census.strata.entry(genre.coarse_key()).or_insert(0) += 1;
        let comps = components.iter().enumerate().filter(|(_, c)| c.contains(pt, l)).map(|(k, _)| k).collect();
        census.points.push(PointRecord { point: pt.clone(), genre, components: comps });
    }
    Ok(census)
}

/// Balls and annuli: `I` gives one power-series variable, `II` a factor
/// `UV + p^m` of depth `m`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RingDescriptor {
    pub balls: usize,
    pub annuli: Vec<usize>,
}

pub fn ring_descriptor(g: &GenreVector) -> RingDescriptor {
    let annuli = g.fine.iter().filter(|x| **x == Genre::II).map(|_| 1).collect::<Vec<_>>();
    RingDescriptor { balls: g.fine.len() - annuli.len(), annuli }
}

pub fn fiber_descriptor(s: &Symbols, d: &Decoration, point: &[P1], l: u64) -> Result<RingDescriptor> {
    Ok(ring_descriptor(&genre_of_point(s, d, point, l)?))
}

/// Gaps `g` whose genre reads the factor: column `g` or `g+1` is in it.
pub fn factor_gaps(f: usize, columns: &BTreeSet<usize>) -> Vec<usize> {
    (0..f).filter(|&g| columns.contains(&g) || columns.contains(&((g + 1) % f))).collect()
}

/// Candidate descriptor for a chain of lines: `ℓ` balls (plus one per
/// contracted cross) and one annulus of depth `ℓ+1`. The factor must be a
/// chain without slope change whose points have the chain stratification:
/// exactly `ℓ+1` special points, each with a single `II` at its own gap.
pub fn chain_candidate(
    s: &Symbols,
    d: &Decoration,
    rd: &ReducedDiagram,
    factor: usize,
    l: u64,
) -> Result<RingDescriptor> {
    let fv = rd.factors.get(factor).ok_or_else(|| Error::NotAChain(format!("no factor {factor}")))?;
    if fv.kind != FactorKind::Chain || !fv.slope_changes().is_empty() {
        return Err(Error::NotAChain(format!("{} factor with slope changes {:?}", fv.kind.as_str(), fv.slope_changes())));
    }
    let base = crate::variety::witness_point(rd, l).ok_or(Error::PointNotOnVariety)?;
    let cols = fv.columns();
    let gaps = factor_gaps(rd.f, &cols);
    let mut special: BTreeSet<usize> = BTreeSet::new();
    let mut n_special = 0;
    let pats = crate::components::factor_components(fv)?;
    let mut seen: BTreeSet<Point> = BTreeSet::new();
    for pat in &pats {
        let free: Vec<usize> = (0..fv.len()).filter(|&k| pat[k] == NodeState::Free).collect();
        for x in P1::all(l) {
            let mut pt = base.clone();
            for (k, node) in fv.nodes.iter().enumerate() {
                let local = match pat[k] {
                    NodeState::Free => x,
                    NodeState::Pinned(p) => p.to_p1(l),
                };
                for &(c, flip) in &node.columns {
                    pt[c] = if flip { local.swapped(l) } else { local };
                }
            }
            if free.is_empty() && x != P1::Affine(0) {
                continue;
            }
            if !seen.insert(pt.clone()) {
                continue;
            }
            let g = genre_of_point(s, d, &pt, l)?;
            let iis: Vec<usize> = gaps.iter().copied().filter(|&q| g.fine[q] == Genre::II).collect();
            match iis.len() {
                0 => {}
                1 => {
                    n_special += 1;
                    if !special.insert(iis[0]) {
                        return Err(Error::NotAChain("two special points share a gap".into()));
                    }
                }
                _ => return Err(Error::NotAChain("a point carries several II".into())),
            }
        }
    }
    let len = fv.len();
    if n_special != len + 1 {
        return Err(Error::NotAChain(format!("{n_special} special points, expected {}", len + 1)));
    }
    Ok(RingDescriptor { balls: cols.len(), annuli: vec![len + 1] })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn descriptor_counts() {
        let g = GenreVector { fine: vec![Genre::II] };
        assert_eq!(ring_descriptor(&g), RingDescriptor { balls: 0, annuli: vec![1] });
        let g = GenreVector { fine: vec![Genre::IEta, Genre::IEtaPrime, Genre::IEta] };
        assert_eq!(ring_descriptor(&g), RingDescriptor { balls: 3, annuli: vec![] });
    }

    #[test]
    fn order_is_componentwise() {
        use Coarse::*;
        assert!(coarse_le(&[I, I], &[I, II]));
        assert!(!coarse_le(&[II, I], &[I, II]));
    }
}
