//! Irreducible components of the factors and of the whole variety,
//! intersections, connectivity, and the component-count polynomial.

use crate::error::{Error, Result};
use crate::field::{P1, Point};
use crate::variety::{
    FactorKind, FactorNode, FactorVariety, LocalLink, NodeKind, Orientation, Pin, ReducedDiagram,
};
use num_bigint::BigUint;
use num_traits::{One, Zero};
use std::collections::{BTreeMap, BTreeSet};

/// Per-node state of a component: a free line or a pinned point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NodeState {
    Free,
    Pinned(Pin),
}

impl NodeState {
    fn zero_at(self, r: u8) -> bool {
        matches!(self, NodeState::Pinned(p) if p.vanishes_at(r))
    }
}

/// A subset of `[1, ℓ]` (one-based node positions of a chain).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExprimableSet {
    pub indices: BTreeSet<usize>,
}

/// The intervals `[j_m, j_{m+1}]` cut out by the slope changes.
pub fn slope_intervals(len: usize, changes: &[usize]) -> Vec<(usize, usize)> {
    let mut pts = vec![1];
    pts.extend_from_slice(changes);
    pts.push(len);
    pts.windows(2).map(|w| (w[0], w[1])).collect()
}

pub fn is_exprimable(set: &BTreeSet<usize>, intervals: &[(usize, usize)]) -> bool {
    intervals.iter().all(|&(a, b)| set.range(a..=b).count() <= 1)
}

fn maximal_among(family: Vec<BTreeSet<usize>>, len: usize, intervals: &[(usize, usize)]) -> Vec<BTreeSet<usize>> {
    // the exprimable family is closed under taking subsets, so maximality
    // only needs one-element extensions
    let mut out: Vec<BTreeSet<usize>> = family
        .into_iter()
        .filter(|s| {
            (1..=len).all(|i| {
                if s.contains(&i) {
                    return true;
                }
                let mut t = s.clone();
                t.insert(i);
                !is_exprimable(&t, intervals)
            })
        })
        .collect();
    out.sort();
    out
}

/// Maximal exprimable sets of a chain with `len` nodes and the given
/// one-based slope changes, by a depth-first walk that keeps a count per
/// interval.
pub fn maximal_exprimable_sets(len: usize, changes: &[usize]) -> Vec<BTreeSet<usize>> {
    let intervals = slope_intervals(len, changes);
    let mut family = Vec::new();
    let mut counts = vec![0u8; intervals.len()];
    let mut cur = BTreeSet::new();
    fn rec(
        i: usize,
        len: usize,
        iv: &[(usize, usize)],
        counts: &mut Vec<u8>,
        cur: &mut BTreeSet<usize>,
        out: &mut Vec<BTreeSet<usize>>,
    ) {
        if i > len {
            out.push(cur.clone());
            return;
        }
        rec(i + 1, len, iv, counts, cur, out);
        let hits: Vec<usize> = (0..iv.len()).filter(|&m| iv[m].0 <= i && i <= iv[m].1).collect();
        if hits.iter().all(|&m| counts[m] == 0) {
            for &m in &hits {
                counts[m] += 1;
            }
            cur.insert(i);
            rec(i + 1, len, iv, counts, cur, out);
            cur.remove(&i);
            for &m in &hits {
                counts[m] -= 1;
            }
        }
    }
    rec(1, len, &intervals, &mut counts, &mut cur, &mut family);
    maximal_among(family, len, &intervals)
}

/// Brute-force reference over all subsets (for `len` up to about 20).
pub fn maximal_exprimable_sets_brute(len: usize, changes: &[usize]) -> Vec<BTreeSet<usize>> {
    let intervals = slope_intervals(len, changes);
    let family: Vec<BTreeSet<usize>> = (0u64..(1u64 << len))
        .map(|m| (1..=len).filter(|&i| m >> (i - 1) & 1 == 1).collect::<BTreeSet<usize>>())
        .filter(|s| is_exprimable(s, &intervals))
        .collect();
    let mut out: Vec<BTreeSet<usize>> = family
        .iter()
        .filter(|s| !family.iter().any(|t| t.len() > s.len() && s.is_subset(t)))
        .cloned()
        .collect();
    out.sort();
    out
}

/// Maximal exprimable sets of a chain factor.
pub fn maximal_exprimables(fv: &FactorVariety) -> Result<Vec<ExprimableSet>> {
    if fv.kind != FactorKind::Chain {
        return Err(Error::NotAChain(format!("{} factor", fv.kind.as_str())));
    }
    Ok(maximal_exprimable_sets(fv.len(), &fv.slope_changes())
        .into_iter()
        .map(|indices| ExprimableSet { indices })
        .collect())
}

fn link_ok(st: &[NodeState], l: &LocalLink) -> bool {
    st[l.a].zero_at(l.ra) || st[l.b].zero_at(l.rb)
}

fn domain(kind: NodeKind) -> Vec<NodeState> {
    match kind {
        NodeKind::Line => vec![NodeState::Free, NodeState::Pinned(Pin::Infinity), NodeState::Pinned(Pin::Origin)],
        NodeKind::TwoPoints => vec![NodeState::Pinned(Pin::Infinity), NodeState::Pinned(Pin::Origin)],
        NodeKind::SwapFixed => vec![NodeState::Pinned(Pin::PlusOne), NodeState::Pinned(Pin::MinusOne)],
    }
}

/// Whether pinned node `k` could be freed without breaking a relation.
fn can_free(fv: &FactorVariety, st: &[NodeState], k: usize) -> bool {
    if fv.nodes[k].kind != NodeKind::Line || st[k] == NodeState::Free {
        return false;
    }
    let mut t = st.to_vec();
    t[k] = NodeState::Free;
    fv.links.iter().filter(|l| l.a == k || l.b == k).all(|l| link_ok(&t, l))
}

/// All maximal pin patterns: valid assignments in which no single pinned
/// line can be freed. Works for every factor kind.
pub fn maximal_patterns(fv: &FactorVariety) -> Vec<Vec<NodeState>> {
    let n = fv.len();
    // node k's constraints are decided once max(k, neighbours) is assigned
    let mut ready_at: Vec<Vec<usize>> = vec![Vec::new(); n];
    for k in 0..n {
        let last = fv
            .links
            .iter()
            .filter(|l| l.a == k || l.b == k)
            .map(|l| l.a.max(l.b))
            .chain(std::iter::once(k))
            .max()
            .unwrap();
        ready_at[last].push(k);
    }
    let mut out = Vec::new();
    let mut st: Vec<NodeState> = Vec::with_capacity(n);
    fn rec(
        fv: &FactorVariety,
        ready_at: &[Vec<usize>],
        st: &mut Vec<NodeState>,
        out: &mut Vec<Vec<NodeState>>,
    ) {
        let k = st.len();
        if k == fv.len() {
            out.push(st.clone());
            return;
        }
        for s in domain(fv.nodes[k].kind) {
            st.push(s);
            let links_ok = fv.links.iter().filter(|l| l.a.max(l.b) == k).all(|l| link_ok(st, l));
            let maximal_ok = links_ok && ready_at[k].iter().all(|&j| !can_free(fv, st, j));
            if maximal_ok {
                rec(fv, ready_at, st, out);
            }
            st.pop();
        }
    }
    rec(fv, &ready_at, &mut st, &mut out);
    out.sort();
    out
}

/// The pin pattern of `V_S`: free at `S`, and elsewhere the values forced by
/// propagating along the chain from the free nodes.
pub fn pattern_of_exprimable(fv: &FactorVariety, set: &ExprimableSet) -> Result<Vec<NodeState>> {
    let n = fv.len();
    let mut st: Vec<Option<NodeState>> = vec![None; n];
    for &i in &set.indices {
        st[i - 1] = Some(NodeState::Free);
    }
    let mismatch = || Error::InternalMismatch(format!("exprimable set {:?} has no consistent pattern", set.indices));
    loop {
        let mut changed = false;
        for l in &fv.links {
            for (u, ru, v, rv) in [(l.a, l.ra, l.b, l.rb), (l.b, l.rb, l.a, l.ra)] {
                // node u is nonzero at ru (free, or pinned with the other
                // coordinate zero) => v must vanish at rv
                let forces = match st[u] {
                    Some(NodeState::Free) => true,
                    Some(NodeState::Pinned(p)) => !p.vanishes_at(ru),
                    None => false,
                };
                if forces {
                    let want = NodeState::Pinned(Pin::zero_at(rv));
                    match st[v] {
                        None => {
                            st[v] = Some(want);
                            changed = true;
                        }
                        Some(s) if s == want => {}
                        Some(_) => return Err(mismatch()),
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    let pat: Vec<NodeState> = st.into_iter().collect::<Option<Vec<_>>>().ok_or_else(mismatch)?;
    if !fv.links.iter().all(|l| link_ok(&pat, l)) || (0..n).any(|k| can_free(fv, &pat, k)) {
        return Err(mismatch());
    }
    Ok(pat)
}

/// Component patterns of one factor.
pub fn factor_components(fv: &FactorVariety) -> Result<Vec<Vec<NodeState>>> {
    match fv.kind {
        FactorKind::Chain => {
            let mut pats = maximal_exprimables(fv)?
                .iter()
                .map(|s| pattern_of_exprimable(fv, s))
                .collect::<Result<Vec<_>>>()?;
            pats.sort();
            Ok(pats)
        }
        _ => Ok(maximal_patterns(fv)),
    }
}

/// State of one column inside a global component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ColumnState {
    Pinned(Pin),
    /// free on the line of fusion class `class`, swapped when `flip`
    Free { class: usize, flip: bool },
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Component {
    pub columns: Vec<ColumnState>,
    pub dimension: usize,
    /// index of the chosen pattern in each factor
    pub choice: Vec<usize>,
}

impl Component {
    pub fn contains(&self, point: &[P1], l: u64) -> bool {
        let mut line: BTreeMap<usize, P1> = BTreeMap::new();
        for (c, st) in self.columns.iter().enumerate() {
            match *st {
                ColumnState::Pinned(p) => {
                    if point[c] != p.to_p1(l) {
                        return false;
                    }
                }
                ColumnState::Free { class, flip } => {
                    let local = if flip { point[c].swapped(l) } else { point[c] };
                    if *line.entry(class).or_insert(local) != local {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// All F_l-points.
    pub fn points(&self, l: u64) -> Vec<Point> {
        let classes: BTreeSet<usize> = self
            .columns
            .iter()
            .filter_map(|s| match s {
                ColumnState::Free { class, .. } => Some(*class),
                _ => None,
            })
            .collect();
        let classes: Vec<usize> = classes.into_iter().collect();
        let mut out = Vec::new();
        let mut idx = vec![0usize; classes.len()];
        let vals: Vec<P1> = P1::all(l).collect();
        loop {
            let at: BTreeMap<usize, P1> = classes.iter().zip(&idx).map(|(&c, &i)| (c, vals[i])).collect();
            out.push(
                self.columns
                    .iter()
                    .map(|s| match *s {
                        ColumnState::Pinned(p) => p.to_p1(l),
                        ColumnState::Free { class, flip } => {
                            let x = at[&class];
                            if flip {
                                x.swapped(l)
                            } else {
                                x
                            }
                        }
                    })
                    .collect(),
            );
            let mut k = 0;
            loop {
                if k == idx.len() {
                    return out;
                }
                idx[k] += 1;
                if idx[k] < vals.len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
        }
    }

    /// Per-column shape: `P1`, `P1=c` (same line as column c), `P1=~c`
    /// (swapped), or the pinned point.
    pub fn shape(&self) -> String {
        let mut first: BTreeMap<usize, (usize, bool)> = BTreeMap::new();
        self.columns
            .iter()
            .enumerate()
            .map(|(c, s)| match *s {
                ColumnState::Pinned(p) => p.to_string(),
                ColumnState::Free { class, flip } => match first.get(&class) {
                    None => {
                        first.insert(class, (c, flip));
                        "P1".to_string()
                    }
                    Some(&(c0, f0)) => {
                        if f0 == flip {
                            format!("P1={c0}")
                        } else {
                            format!("P1=~{c0}")
                        }
                    }
                },
            })
            .collect::<Vec<_>>()
            .join("x")
    }
}

/// Two components meet iff no column carries two different pins.
pub fn components_meet(a: &Component, b: &Component) -> bool {
    a.columns.iter().zip(&b.columns).all(|(x, y)| match (x, y) {
        (ColumnState::Pinned(p), ColumnState::Pinned(q)) => p == q,
        _ => true,
    })
}

fn patterns_meet(a: &[NodeState], b: &[NodeState]) -> bool {
    a.iter().zip(b).all(|(x, y)| match (x, y) {
        (NodeState::Pinned(p), NodeState::Pinned(q)) => p == q,
        _ => true,
    })
}

/// Global components: products of factor components with the pinned columns.
pub fn components_of(rd: &ReducedDiagram, cap: u64) -> Result<Vec<Component>> {
    if rd.contradiction {
        return Ok(Vec::new());
    }
    let per: Vec<Vec<Vec<NodeState>>> = rd.factors.iter().map(factor_components).collect::<Result<_>>()?;
    let mut total: u64 = 1;
    for p in &per {
        total = total.saturating_mul(p.len() as u64);
    }
    if total > cap {
        return Err(Error::BudgetExceeded { needed: total.to_string(), cap });
    }
    let pinned = rd.pinned();
    let mut out = Vec::with_capacity(total as usize);
    let mut idx = vec![0usize; per.len()];
    loop {
        let mut cols: Vec<ColumnState> = pinned
            .iter()
            .map(|p| p.map_or(ColumnState::Pinned(Pin::Origin), ColumnState::Pinned))
            .collect();
        let mut dim = 0;
        for (fi, fv) in rd.factors.iter().enumerate() {
            let pat = &per[fi][idx[fi]];
            for (k, node) in fv.nodes.iter().enumerate() {
                if pat[k] == NodeState::Free {
                    dim += 1;
                }
                for &(c, flip) in &node.columns {
                    cols[c] = match pat[k] {
                        NodeState::Free => ColumnState::Free { class: node.class, flip },
                        NodeState::Pinned(p) => ColumnState::Pinned(p.flipped_if(flip)),
                    };
                }
            }
        }
        out.push(Component { columns: cols, dimension: dim, choice: idx.clone() });
        let mut k = 0;
        loop {
            if k == idx.len() {
                return Ok(out);
            }
            idx[k] += 1;
            if idx[k] < per[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

pub fn dimension(rd: &ReducedDiagram) -> Result<Option<usize>> {
    if rd.contradiction {
        return Ok(None);
    }
    let mut d = 0;
    for fv in &rd.factors {
        let comps = factor_components(fv)?;
        d += comps.iter().map(|p| p.iter().filter(|s| **s == NodeState::Free).count()).max().unwrap_or(0);
    }
    Ok(Some(d))
}

/// Edges of the intersection graph of a factor's components.
pub fn intersection_graph(patterns: &[Vec<NodeState>]) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for i in 0..patterns.len() {
        for j in i + 1..patterns.len() {
            if patterns_meet(&patterns[i], &patterns[j]) {
                edges.push((i, j));
            }
        }
    }
    edges
}

/// Intersection graph of a chain's maximal exprimable sets read off the
/// indices: `S` and `T` meet iff in every interval their chosen indices
/// differ by at most one.
pub fn intersection_graph_from_indices(len: usize, changes: &[usize], sets: &[ExprimableSet]) -> Vec<(usize, usize)> {
    let iv = slope_intervals(len, changes);
    let mut edges = Vec::new();
    for i in 0..sets.len() {
        for j in i + 1..sets.len() {
            let ok = iv.iter().all(|&(a, b)| {
                sets[i].indices.range(a..=b).all(|&x| sets[j].indices.range(a..=b).all(|&y| x.abs_diff(y) <= 1))
            });
            if ok {
                edges.push((i, j));
            }
        }
    }
    edges
}

pub fn graph_connected(n: usize, edges: &[(usize, usize)]) -> bool {
    if n == 0 {
        return true;
    }
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut Vec<usize>, x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    for &(a, b) in edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        parent[ra] = rb;
    }
    let r = find(&mut parent, 0);
    (0..n).all(|x| find(&mut parent, x) == r)
}

/// A product of varieties is connected iff each factor is.
pub fn is_connected(rd: &ReducedDiagram) -> Result<bool> {
    for fv in &rd.factors {
        let pats = factor_components(fv)?;
        if !graph_connected(pats.len(), &intersection_graph(&pats)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `P₀ = 1, P₁ = X, P₂ = 2X, P_ℓ = X (P_{ℓ−2} + P_{ℓ−3})`; coefficient `d`
/// at index `d`.
pub fn count_polynomial(len: usize) -> Vec<BigUint> {
    let mut polys: Vec<Vec<BigUint>> = vec![
        vec![BigUint::one()],
        vec![BigUint::zero(), BigUint::one()],
        vec![BigUint::zero(), BigUint::from(2u32)],
    ];
    for l in 3..=len {
        let (a, b) = (&polys[l - 2], &polys[l - 3]);
        let mut next = vec![BigUint::zero(); a.len().max(b.len()) + 1];
        for (d, c) in a.iter().enumerate() {
            next[d + 1] += c;
        }
        for (d, c) in b.iter().enumerate() {
            next[d + 1] += c;
        }
        polys.push(next);
    }
    let mut p = polys.swap_remove(len);
    while p.len() > 1 && p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

pub fn format_polynomial(coeffs: &[BigUint]) -> String {
    let terms: Vec<String> = coeffs
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, c)| !c.is_zero())
        .map(|(d, c)| match d {
            0 => c.to_string(),
            1 if c.is_one() => "X".to_string(),
            1 => format!("{c}X"),
            _ if c.is_one() => format!("X^{d}"),
            _ => format!("{c}X^{d}"),
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

/// A chain of `orientation.len() + 1` lines (for tests and tables).
pub fn synthetic_chain(orientation: &[Orientation]) -> FactorVariety {
    synthetic(orientation, None)
}

/// A loop: the chain plus a closing relation between the last and first
/// nodes on local coordinates `(r_last, r_first)`.
pub fn synthetic_loop(orientation: &[Orientation], closing: (u8, u8)) -> FactorVariety {
    synthetic(orientation, Some(closing))
}

fn synthetic(orientation: &[Orientation], closing: Option<(u8, u8)>) -> FactorVariety {
    let n = orientation.len() + 1;
    let nodes = (0..n)
        .map(|k| FactorNode { class: k, kind: NodeKind::Line, columns: vec![(k, false)], gauge: false })
        .collect();
    let mut links: Vec<LocalLink> = orientation
        .iter()
        .enumerate()
        .map(|(k, o)| match o {
            Orientation::Down => LocalLink { a: k, ra: 0, b: k + 1, rb: 1 },
            Orientation::Up => LocalLink { a: k, ra: 1, b: k + 1, rb: 0 },
        })
        .collect();
    let (kind, twisted) = match closing {
        Some((rl, rf)) => {
            links.push(LocalLink { a: n - 1, ra: rl, b: 0, rb: rf });
            (FactorKind::Loop, Some(rl == rf))
        }
        None => (FactorKind::Chain, None),
    };
    FactorVariety { kind, nodes, links, orientation: orientation.to_vec(), twisted }
}

/// Orientation vector of the fully alternating chain of length `len`.
pub fn alternating(len: usize) -> Vec<Orientation> {
    (0..len.saturating_sub(1)).map(|k| if k % 2 == 0 { Orientation::Down } else { Orientation::Up }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[usize]) -> BTreeSet<usize> {
        v.iter().copied().collect()
    }

    #[test]
    fn monotone_chain_singletons() {
        let fv = synthetic_chain(&[Orientation::Down, Orientation::Down]);
        let sets: Vec<_> = maximal_exprimables(&fv).unwrap().into_iter().map(|s| s.indices).collect();
        assert_eq!(sets, vec![set(&[1]), set(&[2]), set(&[3])]);
        let pats = factor_components(&fv).unwrap();
        let e = intersection_graph(&pats);
        assert!(e.contains(&(0, 1)) && e.contains(&(1, 2)) && !e.contains(&(0, 2)));
    }

    #[test]
    fn alternating_three() {
        let fv = synthetic_chain(&alternating(3));
        let sets: Vec<_> = maximal_exprimables(&fv).unwrap().into_iter().map(|s| s.indices).collect();
        assert_eq!(sets, vec![set(&[1, 3]), set(&[2])]);
    }

    #[test]
    fn single_node() {
        let fv = synthetic_chain(&[]);
        assert_eq!(maximal_exprimables(&fv).unwrap().len(), 1);
        assert_eq!(factor_components(&fv).unwrap(), vec![vec![NodeState::Free]]);
    }

    #[test]
    fn small_polynomials() {
        let b = |v: &[u32]| v.iter().map(|&x| BigUint::from(x)).collect::<Vec<_>>();
        assert_eq!(count_polynomial(0), b(&[1]));
        assert_eq!(count_polynomial(2), b(&[0, 2]));
        assert_eq!(count_polynomial(3), b(&[0, 1, 1]));
        assert_eq!(format_polynomial(&count_polynomial(3)), "X^2 + X");
    }

    #[test]
    fn dp_matches_brute_force() {
        for len in 1..=9 {
            for mask in 0u32..(1 << (len - 1)) {
                let o: Vec<Orientation> = (0..len - 1)
                    .map(|k| if mask >> k & 1 == 1 { Orientation::Up } else { Orientation::Down })
                    .collect();
                let fv = synthetic_chain(&o);
                let ch = fv.slope_changes();
                assert_eq!(maximal_exprimable_sets(len, &ch), maximal_exprimable_sets_brute(len, &ch));
            }
        }
    }
}
