//! Equations of the variety, the reduced diagram, factors, and brute-force
//! point enumeration.

use crate::decorate::{Decoration, LinkKind};
use crate::error::{Error, Result};
use crate::field::{coord, P1, Point};
use crate::gene::{Symbol, Symbols};
use rayon::prelude::*;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// Coordinates are `x_k`, `k ∈ ℤ/2f`; column `c` is `[x_c : x_{c+f}]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Equation {
    /// `x_i = 0`
    Vanish(usize),
    /// `x_i x_{i+f+1} = x_{i+1} x_{i+f}`
    Cross(usize),
    /// `x_a x_b = 0`
    ProductZero(usize, usize),
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Equation::Vanish(i) => write!(f, "x{i} = 0"),
            Equation::Cross(i) => write!(f, "cross({i})"),
            Equation::ProductZero(a, b) => write!(f, "x{a}*x{b} = 0"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquationSystem {
    pub f: usize,
    pub equations: Vec<Equation>,
}

impl EquationSystem {
    /// Largest column an equation reads.
    pub fn last_column(&self, eq: &Equation) -> usize {
        let f = self.f;
        match *eq {
            Equation::Vanish(k) => k % f,
            Equation::ProductZero(a, b) => (a % f).max(b % f),
            Equation::Cross(i) => (i % f).max((i + 1) % f),
        }
    }

    pub fn holds(&self, eq: &Equation, point: &[P1], l: u64) -> bool {
        let f = self.f;
        let x = |k: usize| coord(point, k) % l;
        match *eq {
            Equation::Vanish(k) => x(k) == 0,
            Equation::ProductZero(a, b) => x(a) * x(b) % l == 0,
            Equation::Cross(i) => {
                let lhs = x(i) * x(i + f + 1) % l;
                let rhs = x(i + 1) * x(i + f) % l;
                lhs == rhs
            }
        }
    }

    pub fn satisfied(&self, point: &[P1], l: u64) -> bool {
        point.len() == self.f && self.equations.iter().all(|e| self.holds(e, point, l))
    }
}

pub fn build_equations(s: &Symbols, d: &Decoration) -> EquationSystem {
    let f = s.f;
    let n = 2 * f;
    let mut equations: Vec<Equation> =
        (0..n).filter(|&i| s.at(i) == Symbol::O).map(Equation::Vanish).collect();
    for i in 0..f {
        let td = d.has(i, LinkKind::TopDown);
        let bu = d.has(i, LinkKind::BottomUp);
        match (td, bu) {
            (true, true) => equations.push(Equation::Cross(i)),
            (true, false) => equations.push(Equation::ProductZero(i, (i + f + 1) % n)),
            (false, true) => equations.push(Equation::ProductZero((i + 1) % n, i + f)),
            (false, false) => {}
        }
    }
    EquationSystem { f, equations }
}

/// A pinned projective point, independent of the field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pin {
    /// `[1:0]`
    Origin,
    /// `[0:1]`
    Infinity,
    /// `[1:1]`
    PlusOne,
    /// `[1:-1]`
    MinusOne,
}

impl Pin {
    pub fn to_p1(self, l: u64) -> P1 {
        match self {
            Pin::Origin => P1::Affine(0),
            Pin::Infinity => P1::Infinity,
            Pin::PlusOne => P1::Affine(1 % l),
            Pin::MinusOne => P1::Affine((l - 1) % l),
        }
    }
    /// The pin with its two coordinates exchanged.
    pub fn swapped(self) -> Pin {
        match self {
            Pin::Origin => Pin::Infinity,
            Pin::Infinity => Pin::Origin,
            Pin::PlusOne => Pin::PlusOne,
            Pin::MinusOne => Pin::MinusOne,
        }
    }
    pub fn flipped_if(self, flip: bool) -> Pin {
        if flip {
            self.swapped()
        } else {
            self
        }
    }
    /// Pin whose coordinate `row` (0 first, 1 second) vanishes.
    pub fn zero_at(row: u8) -> Pin {
        if row == 0 {
            Pin::Infinity
        } else {
            Pin::Origin
        }
    }
    /// Whether coordinate `row` of this pin vanishes.
    pub fn vanishes_at(self, row: u8) -> bool {
        matches!((self, row), (Pin::Infinity, 0) | (Pin::Origin, 1))
    }
}

impl fmt::Display for Pin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Pin::Origin => "[1:0]",
            Pin::Infinity => "[0:1]",
            Pin::PlusOne => "[1:1]",
            Pin::MinusOne => "[1:-1]",
        })
    }
}

/// What a free fusion class can be.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NodeKind {
    /// a full projective line
    Line,
    /// the class is identified with its own swap: `{[1:1], [1:-1]}`
    SwapFixed,
    /// `u v = 0` on one line: `{[1:0], [0:1]}`
    TwoPoints,
}

/// A surviving product relation `u_{a, ra} · u_{b, rb} = 0` between class
/// coordinates. `gap` is the column gap it came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClassLink {
    pub a: usize,
    pub ra: u8,
    pub b: usize,
    pub rb: u8,
    pub gap: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Orientation {
    /// `y_k z_{k+1} = 0`
    Down,
    /// `z_k y_{k+1} = 0`
    Up,
}

impl Orientation {
    pub fn glyph(self) -> char {
        match self {
            Orientation::Down => '\\',
            Orientation::Up => '/',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FactorKind {
    Chain,
    Loop,
    Irregular,
}

impl FactorKind {
    pub fn as_str(self) -> &'static str {
        match self {
            FactorKind::Chain => "chain",
            FactorKind::Loop => "loop",
            FactorKind::Irregular => "irregular",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorNode {
    /// smallest column of the fusion class
    pub class: usize,
    pub kind: NodeKind,
    /// `(column, flip)`: the column's point is the node's local point,
    /// swapped when `flip`
    pub columns: Vec<(usize, bool)>,
    /// local coordinate `r` is class coordinate `r ^ gauge`
    pub gauge: bool,
}

/// A product relation in the node's local coordinates (0 = y, 1 = z).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LocalLink {
    pub a: usize,
    pub ra: u8,
    pub b: usize,
    pub rb: u8,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorVariety {
    pub kind: FactorKind,
    pub nodes: Vec<FactorNode>,
    pub links: Vec<LocalLink>,
    /// chains: `ℓ − 1` entries; loops: `ℓ − 1` path entries (the closing
    /// link is `links.last()`)
    pub orientation: Vec<Orientation>,
    /// loops: whether the closing link pairs equal local coordinates
    pub twisted: Option<bool>,
}

impl FactorVariety {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }
    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
    pub fn columns(&self) -> BTreeSet<usize> {
        self.nodes.iter().flat_map(|n| n.columns.iter().map(|c| c.0)).collect()
    }
    /// Slope-change indices `j ∈ [2, ℓ−1]` (one-based).
    pub fn slope_changes(&self) -> Vec<usize> {
        let o = &self.orientation;
        (2..self.len()).filter(|&j| o[j - 2] != o[j - 1]).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedDiagram {
    pub f: usize,
    /// per column: smallest column of its fusion class and the swap relating
    /// the column's coordinates to the class's
    pub class_of: Vec<(usize, bool)>,
    /// per class (by smallest column): pinned value in class coordinates
    pub class_pins: BTreeMap<usize, Pin>,
    pub class_kinds: BTreeMap<usize, NodeKind>,
    pub links: Vec<ClassLink>,
    pub contradiction: bool,
    pub factors: Vec<FactorVariety>,
}

impl ReducedDiagram {
    /// Column-level pins.
    pub fn pinned(&self) -> Vec<Option<Pin>> {
        (0..self.f)
            .map(|c| {
                let (r, s) = self.class_of[c];
                self.class_pins.get(&r).map(|p| p.flipped_if(s))
            })
            .collect()
    }

    /// Fusion classes with at least two columns.
    pub fn fusion_classes(&self) -> Vec<Vec<usize>> {
        let mut m: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for c in 0..self.f {
            m.entry(self.class_of[c].0).or_default().push(c);
        }
        m.into_values().filter(|v| v.len() > 1).collect()
    }

    /// True when some class is `SwapFixed` or `TwoPoints`, or a factor is
    /// neither a chain nor a loop.
    pub fn is_irregular(&self) -> bool {
        self.factors.iter().any(|f| f.kind == FactorKind::Irregular)
    }
}

struct Classes {
    parent: Vec<usize>,
    parity: Vec<bool>,
    swap_fixed: Vec<bool>,
}

impl Classes {
    fn new(n: usize) -> Classes {
        Classes { parent: (0..n).collect(), parity: vec![false; n], swap_fixed: vec![false; n] }
    }
    fn find(&mut self, c: usize) -> (usize, bool) {
        if self.parent[c] == c {
            return (c, false);
        }
        let (r, p) = self.find(self.parent[c]);
        self.parity[c] ^= p;
        self.parent[c] = r;
        (r, self.parity[c])
    }
    /// column `b` = column `a`, swapped when `swap`
    fn union(&mut self, a: usize, b: usize, swap: bool) {
        let (ra, pa) = self.find(a);
        let (rb, pb) = self.find(b);
        if ra == rb {
            if pa ^ pb != swap {
                self.swap_fixed[ra] = true;
            }
            return;
        }
        self.parent[rb] = ra;
        self.parity[rb] = pa ^ pb ^ swap;
        self.swap_fixed[ra] |= self.swap_fixed[rb];
    }
}

/// Class coordinate of `x_k`.
fn class_coord(class_of: &[(usize, bool)], f: usize, k: usize) -> (usize, u8) {
    let k = k % (2 * f);
    let (r, s) = class_of[k % f];
    let row = u8::from(k >= f) ^ u8::from(s);
    (r, row)
}

/// Fuse crosses, pin vanishing coordinates, and propagate product relations
/// to a fixpoint.
pub fn reduce_diagram(sys: &EquationSystem) -> ReducedDiagram {
    let f = sys.f;
    let mut uf = Classes::new(f);
    for eq in &sys.equations {
        if let Equation::Cross(i) = *eq {
            uf.union(i % f, (i + 1) % f, i % f == f - 1);
        }
    }
    // canonical representative: smallest column of the class
    let roots: Vec<(usize, bool)> = (0..f).map(|c| uf.find(c)).collect();
    let mut min_of: BTreeMap<usize, usize> = BTreeMap::new();
    for (c, &(r, _)) in roots.iter().enumerate() {
        min_of.entry(r).or_insert(c);
    }
    let class_of: Vec<(usize, bool)> = (0..f)
        .map(|c| {
            let (r, p) = roots[c];
            let m = min_of[&r];
            (m, p ^ roots[m].1)
        })
        .collect();
    let mut kinds: BTreeMap<usize, NodeKind> = BTreeMap::new();
    for (&r, &m) in &min_of {
        kinds.insert(m, if uf.swap_fixed[r] { NodeKind::SwapFixed } else { NodeKind::Line });
    }

    let mut pins: BTreeMap<usize, Pin> = BTreeMap::new();
    let mut contradiction = false;
    let mut pending: Vec<ClassLink> = Vec::new();
    let mut zeros: Vec<(usize, u8)> = Vec::new();
    for eq in &sys.equations {
        match *eq {
            Equation::Vanish(k) => zeros.push(class_coord(&class_of, f, k)),
            Equation::ProductZero(a, b) => {
                let (ca, ra) = class_coord(&class_of, f, a);
                let (cb, rb) = class_coord(&class_of, f, b);
                let gap = gap_of(f, a, b);
                pending.push(ClassLink { a: ca, ra, b: cb, rb, gap });
            }
            Equation::Cross(_) => {}
        }
    }

    let pin_zero = |pins: &mut BTreeMap<usize, Pin>, kinds: &BTreeMap<usize, NodeKind>, c: usize, r: u8| -> bool {
        // returns false on contradiction
        if kinds[&c] == NodeKind::SwapFixed {
            return false;
        }
        match pins.get(&c) {
            Some(p) => p.vanishes_at(r),
            None => {
                pins.insert(c, Pin::zero_at(r));
                true
            }
        }
    };
    for (c, r) in zeros {
        if !pin_zero(&mut pins, &kinds, c, r) {
            contradiction = true;
        }
    }
    let is_zero = |pins: &BTreeMap<usize, Pin>, c: usize, r: u8| pins.get(&c).is_some_and(|p| p.vanishes_at(r));
    let is_unit = |pins: &BTreeMap<usize, Pin>, kinds: &BTreeMap<usize, NodeKind>, c: usize, r: u8| {
        kinds[&c] == NodeKind::SwapFixed || pins.get(&c).is_some_and(|p| !p.vanishes_at(r))
    };
    loop {
        let mut changed = false;
        let mut rest = Vec::new();
        for l in std::mem::take(&mut pending) {
            if is_zero(&pins, l.a, l.ra) || is_zero(&pins, l.b, l.rb) {
                changed = true;
                continue;
            }
            if is_unit(&pins, &kinds, l.a, l.ra) {
                contradiction |= !pin_zero(&mut pins, &kinds, l.b, l.rb);
                changed = true;
                continue;
            }
            if is_unit(&pins, &kinds, l.b, l.rb) {
                contradiction |= !pin_zero(&mut pins, &kinds, l.a, l.ra);
                changed = true;
                continue;
            }
            if l.a == l.b && l.ra == l.rb {
                contradiction |= !pin_zero(&mut pins, &kinds, l.a, l.ra);
                changed = true;
                continue;
            }
            if l.a == l.b {
                kinds.insert(l.a, NodeKind::TwoPoints);
                changed = true;
                continue;
            }
            rest.push(l);
        }
        pending = rest;
        if !changed || contradiction {
            break;
        }
    }
    // a pinned TwoPoints class is just pinned
    for c in pins.keys() {
        if kinds[c] == NodeKind::TwoPoints {
            kinds.insert(*c, NodeKind::Line);
        }
    }
    pending.sort();
    pending.dedup();
    let factors = if contradiction { Vec::new() } else { split_factors_inner(f, &class_of, &pins, &kinds, &pending) };
    ReducedDiagram { f, class_of, class_pins: pins, class_kinds: kinds, links: pending, contradiction, factors }
}

/// Column gap a product relation belongs to: `x_i x_{i+f+1}` and
/// `x_{i+1} x_{i+f}` both live on gap `i`.
fn gap_of(f: usize, a: usize, b: usize) -> usize {
    let n = 2 * f;
    let (a, b) = (a % n, b % n);
    if a < f && b == (a + f + 1) % n {
        a
    } else if b >= f && a == (b + 1 + n - f) % n {
        b - f
    } else if ((a % f) + 1) % f == b % f {
        a % f
    } else {
        b % f
    }
}

/// Maximal link-connected groups of free classes.
pub fn split_factors(rd: &ReducedDiagram) -> Vec<FactorVariety> {
    rd.factors.clone()
}

fn split_factors_inner(
    f: usize,
    class_of: &[(usize, bool)],
    pins: &BTreeMap<usize, Pin>,
    kinds: &BTreeMap<usize, NodeKind>,
    links: &[ClassLink],
) -> Vec<FactorVariety> {
    let free: Vec<usize> = kinds.keys().copied().filter(|c| !pins.contains_key(c)).collect();
    let mut adj: BTreeMap<usize, Vec<usize>> = free.iter().map(|&c| (c, Vec::new())).collect();
    for (k, l) in links.iter().enumerate() {
        adj.get_mut(&l.a).unwrap().push(k);
        adj.get_mut(&l.b).unwrap().push(k);
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for &c in &free {
        if seen.contains(&c) {
            continue;
        }
        let mut comp = vec![c];
        let mut stack = vec![c];
        seen.insert(c);
        let mut edge_ids = BTreeSet::new();
        while let Some(u) = stack.pop() {
            for &k in &adj[&u] {
                edge_ids.insert(k);
                let l = links[k];
                let v = if l.a == u { l.b } else { l.a };
                if seen.insert(v) {
                    comp.push(v);
                    stack.push(v);
                }
            }
        }
        let edges: Vec<ClassLink> = edge_ids.into_iter().map(|k| links[k]).collect();
        out.push(build_factor(f, class_of, kinds, &comp, &edges));
    }
    // order factors by their first column along the band
    out.sort_by_key(|fv| fv.nodes.iter().flat_map(|n| n.columns.iter().map(|c| c.0)).min());
    out
}

fn build_factor(
    f: usize,
    class_of: &[(usize, bool)],
    kinds: &BTreeMap<usize, NodeKind>,
    comp: &[usize],
    edges: &[ClassLink],
) -> FactorVariety {
    let all_lines = comp.iter().all(|c| kinds[c] == NodeKind::Line);
    let degree = |c: usize| edges.iter().filter(|l| l.a == c || l.b == c).count();
    let n = comp.len();
    let is_path = edges.len() + 1 == n && comp.iter().all(|&c| degree(c) <= 2);
    // connected with every degree two: a single cycle
    let is_cycle = n >= 2 && edges.len() == n && comp.iter().all(|&c| degree(c) == 2);
    let kind = if all_lines && is_path {
        FactorKind::Chain
    } else if all_lines && is_cycle {
        FactorKind::Loop
    } else {
        FactorKind::Irregular
    };

    // order the classes
    let order: Vec<usize>;
    let mut used_edges: Vec<ClassLink> = Vec::new();
    match kind {
        FactorKind::Chain | FactorKind::Loop => {
            let min_col = |c: usize| (0..f).filter(|&x| class_of[x].0 == c).min().unwrap();
            let start = if kind == FactorKind::Chain {
                let ends: Vec<usize> = comp.iter().copied().filter(|&c| degree(c) <= 1).collect();
                // prefer the end whose link leaves it going forward along the band
                let leaves = |c: usize| edges.iter().any(|l| class_of[l.gap].0 == c && class_of[(l.gap + 1) % f].0 != c);
                let mut cand: Vec<usize> = ends.iter().copied().filter(|&c| leaves(c)).collect();
                if cand.is_empty() {
                    cand = ends.clone();
                }
                *cand.iter().min_by_key(|&&c| min_col(c)).unwrap()
            } else {
                *comp.iter().min_by_key(|&&c| min_col(c)).unwrap()
            };
            let mut ord = vec![start];
            let mut remaining: Vec<ClassLink> = edges.to_vec();
            let mut cur = start;
            while !remaining.is_empty() {
                // prefer the forward edge out of `cur`
                let pick = remaining
                    .iter()
                    .enumerate()
                    .filter(|(_, l)| l.a == cur || l.b == cur)
                    .min_by_key(|(_, l)| (class_of[l.gap].0 != cur, l.gap))
                    .map(|(k, _)| k);
                let Some(k) = pick else { break };
                let l = remaining.remove(k);
                let next = if l.a == cur { l.b } else { l.a };
                used_edges.push(l);
                if next == start {
                    break;
                }
                ord.push(next);
                cur = next;
            }
            order = ord;
        }
        FactorKind::Irregular => {
            let mut o = comp.to_vec();
            o.sort();
            order = o;
            used_edges = edges.to_vec();
        }
    }
    let pos: BTreeMap<usize, usize> = order.iter().enumerate().map(|(k, &c)| (c, k)).collect();

    // gauge: make every path link pair opposite local coordinates
    let mut gauge = vec![false; order.len()];
    if kind != FactorKind::Irregular {
        for l in used_edges.iter().take(order.len() - 1) {
            let (pa, ra, pb, rb) = if pos[&l.a] + 1 == pos[&l.b] {
                (pos[&l.a], l.ra, pos[&l.b], l.rb)
            } else {
                (pos[&l.b], l.rb, pos[&l.a], l.ra)
            };
            let la = ra ^ u8::from(gauge[pa]);
            gauge[pb] = (rb ^ (1 - la)) == 1;
        }
    }
    let nodes: Vec<FactorNode> = order
        .iter()
        .enumerate()
        .map(|(k, &c)| FactorNode {
            class: c,
            kind: kinds[&c],
            columns: (0..f).filter(|&x| class_of[x].0 == c).map(|x| (x, class_of[x].1 ^ gauge[k])).collect(),
            gauge: gauge[k],
        })
        .collect();
    let local = |l: &ClassLink| LocalLink {
        a: pos[&l.a],
        ra: l.ra ^ u8::from(gauge[pos[&l.a]]),
        b: pos[&l.b],
        rb: l.rb ^ u8::from(gauge[pos[&l.b]]),
    };
    let links: Vec<LocalLink> = used_edges.iter().map(local).collect();
    let mut orientation = Vec::new();
    let mut twisted = None;
    if kind != FactorKind::Irregular {
        for l in links.iter().take(order.len() - 1) {
            let first = if l.a < l.b { l.ra } else { l.rb };
            orientation.push(if first == 0 { Orientation::Down } else { Orientation::Up });
        }
        if kind == FactorKind::Loop {
            let c = links.last().unwrap();
            twisted = Some(c.ra == c.rb);
        }
    }
    FactorVariety { kind, nodes, links, orientation, twisted }
}

/// Emptiness from the symbols alone.
pub fn is_empty(s: &Symbols) -> bool {
    s.has_zero_zero()
}

fn total_budget(l: u64, f: usize) -> Option<u64> {
    (l + 1).checked_pow(f as u32)
}

/// Every point of (P¹(F_l))^f satisfying the system, sorted.
pub fn enumerate_points(sys: &EquationSystem, l: u64, budget: u64) -> Result<Vec<Point>> {
    crate::field::check_field(l)?;
    let f = sys.f;
    match total_budget(l, f) {
        Some(n) if n <= budget => {}
        other => {
            return Err(Error::BudgetExceeded {
                needed: other.map_or_else(|| format!("({}+1)^{}", l, f), |n| n.to_string()),
                cap: budget,
            })
        }
    }
    let mut by_col: Vec<Vec<Equation>> = vec![Vec::new(); f];
    for e in &sys.equations {
        by_col[sys.last_column(e)].push(*e);
    }
    let firsts: Vec<P1> = P1::all(l).collect();
    let mut pts: Vec<Point> = firsts
        .par_iter()
        .flat_map_iter(|&x0| {
            let mut out = Vec::new();
            let mut cur = vec![P1::Infinity; f];
            cur[0] = x0;
            if by_col[0].iter().all(|e| sys.holds(e, &cur, l)) {
                dfs(sys, &by_col, l, 1, &mut cur, &mut out);
            }
            out
        })
        .collect();
    pts.sort();
    Ok(pts)
}

fn dfs(sys: &EquationSystem, by_col: &[Vec<Equation>], l: u64, c: usize, cur: &mut Point, out: &mut Vec<Point>) {
    if c == sys.f {
        out.push(cur.clone());
        return;
    }
    for x in P1::all(l) {
        cur[c] = x;
        if by_col[c].iter().all(|e| sys.holds(e, cur, l)) {
            dfs(sys, by_col, l, c + 1, cur, out);
        }
    }
}

/// Local states of one node in a point assignment.
fn node_domain(kind: NodeKind) -> &'static [Pin] {
    match kind {
        NodeKind::Line => &[Pin::Origin, Pin::Infinity],
        NodeKind::SwapFixed => &[Pin::PlusOne, Pin::MinusOne],
        NodeKind::TwoPoints => &[Pin::Origin, Pin::Infinity],
    }
}

fn local_zero(p: Pin, r: u8) -> bool {
    p.vanishes_at(r)
}

/// Walk the free nodes left to right, setting each to `[1:0]` or `[0:1]`
/// (backtracking when a loop closes badly).
pub fn witness_point(rd: &ReducedDiagram, l: u64) -> Option<Point> {
    if rd.contradiction {
        return None;
    }
    let mut cols: Vec<Option<Pin>> = rd.pinned();
    for fv in &rd.factors {
        let mut st: Vec<Pin> = Vec::new();
        if !witness_factor(fv, &mut st) {
            return None;
        }
        for (k, node) in fv.nodes.iter().enumerate() {
            for &(c, flip) in &node.columns {
                cols[c] = Some(st[k].flipped_if(flip));
            }
        }
    }
    cols.into_iter().map(|p| p.map(|p| p.to_p1(l))).collect()
}

fn witness_factor(fv: &FactorVariety, st: &mut Vec<Pin>) -> bool {
    let k = st.len();
    if k == fv.nodes.len() {
        return true;
    }
    for &p in node_domain(fv.nodes[k].kind) {
        st.push(p);
        let ok = fv.links.iter().all(|l| {
            if l.a.max(l.b) != k {
                return true;
            }
            local_zero(st[l.a], l.ra) || local_zero(st[l.b], l.rb)
        });
        if ok && witness_factor(fv, st) {
            return true;
        }
        st.pop();
    }
    false
}

/// Points of the reduced diagram over F_l, expanded back to columns.
pub fn reduced_points(rd: &ReducedDiagram, l: u64, budget: u64) -> Result<Vec<Point>> {
    crate::field::check_field(l)?;
    if rd.contradiction {
        return Ok(Vec::new());
    }
    let pinned = rd.pinned();
    let mut partial: Vec<Vec<(usize, P1)>> = vec![Vec::new()];
    let mut count: u64 = 1;
    for fv in &rd.factors {
        let pts = factor_points(fv, l);
        count = count.saturating_mul(pts.len() as u64);
        if count > budget {
            return Err(Error::BudgetExceeded { needed: format!(">{budget}"), cap: budget });
        }
        let mut next = Vec::new();
        for base in &partial {
            for fp in &pts {
                let mut b = base.clone();
                for (k, node) in fv.nodes.iter().enumerate() {
                    for &(c, flip) in &node.columns {
                        b.push((c, if flip { fp[k].swapped(l) } else { fp[k] }));
                    }
                }
                next.push(b);
            }
        }
        partial = next;
    }
    let mut out: Vec<Point> = partial
        .into_iter()
        .map(|assign| {
            let mut pt: Point = (0..rd.f).map(|c| pinned[c].map_or(P1::Infinity, |p| p.to_p1(l))).collect();
            for (c, x) in assign {
                pt[c] = x;
            }
            pt
        })
        .collect();
    out.sort();
    out.dedup();
    Ok(out)
}

/// Local points `(y:z)` of one factor over F_l.
pub fn factor_points(fv: &FactorVariety, l: u64) -> Vec<Vec<P1>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    factor_points_rec(fv, l, &mut cur, &mut out);
    out
}

fn node_points(kind: NodeKind, l: u64) -> Vec<P1> {
    match kind {
        NodeKind::Line => P1::all(l).collect(),
        NodeKind::TwoPoints => vec![P1::Affine(0), P1::Infinity],
        NodeKind::SwapFixed => {
            let mut v = vec![P1::Affine(1 % l), P1::Affine((l - 1) % l)];
            v.dedup();
            v
        }
    }
}

fn factor_points_rec(fv: &FactorVariety, l: u64, cur: &mut Vec<P1>, out: &mut Vec<Vec<P1>>) {
    let k = cur.len();
    if k == fv.nodes.len() {
        out.push(cur.clone());
        return;
    }
    for x in node_points(fv.nodes[k].kind, l) {
        cur.push(x);
        let ok = fv.links.iter().all(|lk| {
            if lk.a.max(lk.b) != k {
                return true;
            }
            let ca = coord_of(cur[lk.a], lk.ra);
            let cb = coord_of(cur[lk.b], lk.rb);
            (ca * cb).is_multiple_of(l)
        });
        if ok {
            factor_points_rec(fv, l, cur, out);
        }
        cur.pop();
    }
}

fn coord_of(x: P1, r: u8) -> u64 {
    let (a, b) = x.coords();
    if r == 0 {
        a
    } else {
        b
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decorate::decorate;

    fn sys_of(s: &str) -> (Symbols, EquationSystem) {
        let s = Symbols::parse(s).unwrap();
        let d = decorate(&s);
        let e = build_equations(&s, &d);
        (s, e)
    }

    #[test]
    fn empty_system_single_column() {
        let sys = EquationSystem { f: 1, equations: vec![] };
        assert_eq!(enumerate_points(&sys, 5, 1000).unwrap().len(), 6);
        let sys = EquationSystem { f: 1, equations: vec![Equation::Vanish(0)] };
        assert_eq!(enumerate_points(&sys, 5, 1000).unwrap(), vec![vec![P1::Infinity]]);
    }

    #[test]
    fn zero_a_ab_zero() {
        let (_, sys) = sys_of("0,A|AB,0");
        let mut eqs = sys.equations.clone();
        eqs.sort();
        let mut want = vec![Equation::Vanish(0), Equation::Vanish(3), Equation::ProductZero(1, 0)];
        want.sort();
        assert_eq!(eqs, want);
        let pts = enumerate_points(&sys, 5, 1000).unwrap();
        assert_eq!(pts, vec![vec![P1::Infinity, P1::Affine(0)]]);
        let rd = reduce_diagram(&sys);
        assert!(rd.factors.is_empty());
        assert_eq!(witness_point(&rd, 5), Some(pts[0].clone()));
    }

    #[test]
    fn zero_zero_contradicts() {
        let (s, sys) = sys_of("0,A|0,AB");
        assert!(is_empty(&s));
        assert!(reduce_diagram(&sys).contradiction);
        assert!(enumerate_points(&sys, 5, 1000).unwrap().is_empty());
        assert_eq!(witness_point(&reduce_diagram(&sys), 5), None);
    }

    #[test]
    fn budget_is_enforced() {
        let sys = EquationSystem { f: 6, equations: vec![] };
        assert!(matches!(enumerate_points(&sys, 5, 1000), Err(Error::BudgetExceeded { .. })));
        assert!(matches!(enumerate_points(&sys, 4, u64::MAX), Err(Error::InvalidField(4))));
    }

    #[test]
    fn seam_cross_swaps() {
        // f = 2 with crosses at both gaps: columns fuse through one swap
        let sys = EquationSystem { f: 2, equations: vec![Equation::Cross(0), Equation::Cross(1)] };
        let rd = reduce_diagram(&sys);
        assert_eq!(rd.class_kinds[&0], NodeKind::SwapFixed);
        let pts = enumerate_points(&sys, 5, 1000).unwrap();
        assert_eq!(pts, reduced_points(&rd, 5, 1000).unwrap());
        assert_eq!(pts.len(), 2);
    }
}
