//! End-to-end report: gene → decoration → equations → reduced diagram →
//! components → census, as deterministic JSON.

use crate::components::{components_of, is_connected, ColumnState, Component};
use crate::decorate::{decorate, render_moebius, Decoration, LinkKind, Row};
use crate::error::{Error, Result};
use crate::field::{check_field, format_point, P1, Point};
use crate::gene::{compute_gene, symbol_checks, validate_gene, Check, Gene, Symbol, Symbols};
use crate::lattice::{genre_from_matrices, integrality_check};
use crate::params::Params;
use crate::strata::{chain_candidate, ring_descriptor, strata_census, Census, RingDescriptor};
use crate::variety::{
    build_equations, reduce_diagram, reduced_points, Equation, EquationSystem, FactorKind, FactorVariety, ReducedDiagram,
};
use rand::seq::SliceRandom;
use rand::Rng;
use serde_json::{json, Map, Value};
use std::collections::{BTreeMap, BTreeSet};

pub const SCHEMA: u64 = 1;

#[derive(Debug, Clone)]
pub enum Input {
    Params(Params),
    Abstract(Symbols),
}

#[derive(Debug, Clone)]
pub struct Options {
    /// prime field for points
    pub field: u64,
    /// maximal number of points enumerated
    pub budget: u64,
    /// maximal number of global components
    pub cap: u64,
    /// run the lattice cross-check
    pub oracle: bool,
    /// seed for the oracle's random sample when exhaustive search is too large
    pub seed: u64,
    /// skip the census (and point lists)
    pub census: bool,
}

impl Default for Options {
    fn default() -> Options {
        Options { field: 5, budget: 1_000_000, cap: 100_000, oracle: false, seed: 0, census: true }
    }
}

/// Everything computed for one input; `json()` renders it.
#[derive(Debug, Clone)]
pub struct Report {
    pub gene: Option<Gene>,
    pub symbols: Symbols,
    pub decoration: Decoration,
    pub equations: EquationSystem,
    pub reduced: ReducedDiagram,
    pub components: Vec<Component>,
    pub dimension: Option<usize>,
    pub connected: Option<bool>,
    pub empty: bool,
    pub points: Option<Vec<Point>>,
    pub census: Option<Census>,
    pub candidates: Vec<(usize, std::result::Result<RingDescriptor, String>)>,
    pub checks: Vec<Check>,
    pub oracle: Option<OracleVerdict>,
    pub field: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleVerdict {
    pub exhaustive: bool,
    pub checked: u64,
    pub integrality_mismatches: Vec<Point>,
    pub genre_mismatches: Vec<Point>,
}

impl OracleVerdict {
    pub fn passed(&self) -> bool {
        self.integrality_mismatches.is_empty() && self.genre_mismatches.is_empty()
    }
}

pub fn run_pipeline(input: &Input, opt: &Options) -> Result<Report> {
    let l = check_field(opt.field)?;
    let (gene, symbols) = match input {
        Input::Params(pr) => {
            let g = compute_gene(pr)?;
            let s = g.symbols.clone();
            (Some(g), s)
        }
        Input::Abstract(s) => (None, s.clone()),
    };
    let mut checks = match &gene {
        Some(g) => validate_gene(g).checks,
        None => symbol_checks(&symbols),
    };
    let decoration = decorate(&symbols);
    let equations = build_equations(&symbols, &decoration);
    let reduced = reduce_diagram(&equations);
    let components = components_of(&reduced, opt.cap)?;
    let empty = components.is_empty();
    let dimension = components.iter().map(|c| c.dimension).max();
    let connected = if empty || reduced.is_irregular() { None } else { Some(is_connected(&reduced)?) };

    checks.push(Check {
        name: "empty_iff_zero_zero_couple",
        passed: empty == symbols.has_zero_zero() || reduced.is_irregular(),
        detail: None,
    });

    let (points, census) = if opt.census {
        let pts = reduced_points(&reduced, l, opt.budget)?;
        let in_union = pts.iter().all(|p| components.iter().any(|c| c.contains(p, l)));
        checks.push(Check {
            name: "points_covered_by_components",
            passed: in_union,
            detail: None,
        });
        checks.push(Check {
            name: "points_satisfy_equations",
            passed: pts.iter().all(|p| equations.satisfied(p, l)),
            detail: None,
        });
        let census = strata_census(&symbols, &decoration, &pts, &components, l)?;
        (Some(pts), Some(census))
    } else {
        (None, None)
    };

    let mut candidates = Vec::new();
    if !empty {
        for (k, fv) in reduced.factors.iter().enumerate() {
            if fv.kind == FactorKind::Chain && fv.slope_changes().is_empty() {
                let c = chain_candidate(&symbols, &decoration, &reduced, k, l).map_err(|e| e.to_string());
                candidates.push((k, c));
            }
        }
    }

    let oracle = match (&gene, opt.oracle) {
        (Some(g), true) => Some(oracle_check(g, &equations, l, opt.budget, opt.seed)?),
        _ => None,
    };

    Ok(Report {
        gene,
        symbols,
        decoration,
        equations,
        reduced,
        components,
        dimension,
        connected,
        empty,
        points,
        census,
        candidates,
        checks,
        oracle,
        field: l,
    })
}

/// Compare the equations with lattice integrality, exhaustively when
/// `(l+1)^f ≤ budget`, else on 2000 uniform points plus up to 1000 variety
/// points; genres are compared on every point that passes.
pub fn oracle_check(g: &Gene, sys: &EquationSystem, l: u64, budget: u64, seed: u64) -> Result<OracleVerdict> {
    let f = g.f();
    let all: Vec<P1> = P1::all(l).collect();
    let total = (l + 1).checked_pow(f as u32);
    let exhaustive = total.is_some_and(|n| n <= budget);
    let candidates: Vec<Point> = if exhaustive {
        let mut out: Vec<Point> = vec![Vec::new()];
        for _ in 0..f {
            out = out
                .into_iter()
                .flat_map(|p| {
                    all.iter().map(move |x| {
                        let mut q = p.clone();
                        q.push(*x);
                        q
                    })
                })
                .collect();
        }
        out
    } else {
        let mut rng = crate::random::seeded(seed);
        let mut pts: Vec<Point> = (0..2000).map(|_| (0..f).map(|_| all[rng.gen_range(0..all.len())]).collect()).collect();
        // uniform samples almost never land on the variety
        let rd = reduce_diagram(sys);
        if let Ok(v) = reduced_points(&rd, l, budget) {
            let mut v = v;
            v.shuffle(&mut rng);
            pts.extend(v.into_iter().take(1000));
        }
        pts
    };
    let d = decorate(&g.symbols);
    let mut verdict = OracleVerdict {
        exhaustive,
        checked: candidates.len() as u64,
        integrality_mismatches: Vec::new(),
        genre_mismatches: Vec::new(),
    };
    for pt in candidates {
        let a = sys.satisfied(&pt, l);
        let b = integrality_check(g, &pt, l);
        if a != b {
            verdict.integrality_mismatches.push(pt);
            continue;
        }
        if a {
            let ga = crate::strata::genre_of_point(&g.symbols, &d, &pt, l)?;
            let gb = genre_from_matrices(g, &pt, l)?;
            if ga != gb {
                verdict.genre_mismatches.push(pt);
            }
        }
    }
    Ok(verdict)
}

fn s(x: impl ToString) -> Value {
    Value::String(x.to_string())
}

fn strs<T: std::fmt::Display>(xs: &[T]) -> Value {
    Value::Array(xs.iter().map(s).collect())
}

pub fn params_json(pr: &Params) -> Value {
    let fl = pr.degeneracy_flags();
    json!({
        "p": s(&pr.p),
        "f": pr.f,
        "q": s(&pr.q),
        "e": s(&pr.e),
        "nu": s(&pr.nu),
        "h": s(&pr.h),
        "gamma": s(&pr.gamma),
        "gamma_prime": s(&pr.gamma_prime),
        "theta": s(pr.theta),
        "h_digits": strs(&pr.h_digits),
        "c_digits": strs(&pr.c_digits),
        "flags": {
            "rho_nondegenerate": fl.rho_nondegenerate,
            "type_nondegenerate": fl.type_nondegenerate,
            "generic": fl.generic,
        },
    })
}

pub fn symbols_json(sy: &Symbols) -> Value {
    let row = |r: &[Symbol]| Value::Array(r.iter().map(|x| s(x.as_str())).collect());
    json!({
        "text": s(sy),
        "top": row(&sy.x[..sy.f]),
        "bottom": row(&sy.x[sy.f..]),
    })
}

pub fn gene_json(g: Option<&Gene>, sy: &Symbols) -> Value {
    let mut m = symbols_json(sy);
    if let Some(g) = g {
        m["alpha"] = strs(&g.alpha);
        m["alpha_prime"] = strs(&g.alpha_prime);
    }
    m
}

pub fn decoration_json(sy: &Symbols, d: &Decoration) -> Value {
    let dom = d.dominance.as_ref().map(|v| Value::Array(v.iter().map(|l| s(l.symbol().as_str())).collect()));
    let links: Vec<Value> = d
        .diagonal_links
        .iter()
        .map(|l| json!({"kind": l.kind.as_str(), "column": l.column}))
        .collect();
    let horiz: Vec<Value> = d
        .horizontal_links
        .iter()
        .map(|h| {
            json!({"row": match h.row { Row::Top => "top", Row::Bottom => "bottom" }, "column": h.column})
        })
        .collect();
    let crosses: Vec<usize> = (0..sy.f).filter(|&c| d.is_cross(c)).collect();
    json!({
        "dominance": dom.unwrap_or(Value::Null),
        "links": links,
        "horizontal_links": horiz,
        "crosses": crosses,
        "render": render_moebius(sy, d),
    })
}

pub fn equations_json(sys: &EquationSystem) -> Value {
    Value::Array(
        sys.equations
            .iter()
            .map(|e| match *e {
                Equation::Vanish(i) => json!({"type": "vanish", "index": i, "text": e.to_string()}),
                Equation::Cross(i) => json!({"type": "cross", "gap": i, "text": e.to_string()}),
                Equation::ProductZero(a, b) => json!({"type": "product_zero", "a": a, "b": b, "text": e.to_string()}),
            })
            .collect(),
    )
}

fn factor_json(fv: &FactorVariety) -> Value {
    let nodes: Vec<Value> = fv
        .nodes
        .iter()
        .map(|n| json!({"class": n.class, "columns": n.columns.iter().map(|c| c.0).collect::<Vec<_>>()}))
        .collect();
    let pats = crate::components::factor_components(fv).unwrap_or_default();
    let dims: Vec<usize> = pats
        .iter()
        .map(|p| p.iter().filter(|x| **x == crate::components::NodeState::Free).count())
        .collect();
    json!({
        "kind": fv.kind.as_str(),
        "length": fv.len(),
        "columns": fv.columns().into_iter().collect::<Vec<_>>(),
        "nodes": nodes,
        "orientation": fv.orientation.iter().map(|o| o.glyph()).collect::<String>(),
        "slope_changes": fv.slope_changes(),
        "twisted": fv.twisted,
        "component_dimensions": dims,
    })
}

pub fn component_json(c: &Component) -> Value {
    let mut pinned = Map::new();
    let mut free = Vec::new();
    for (k, st) in c.columns.iter().enumerate() {
        match st {
            ColumnState::Pinned(p) => {
                pinned.insert(k.to_string(), s(p));
            }
            ColumnState::Free { .. } => free.push(k),
        }
    }
    json!({
        "indices": free,
        "pinned": Value::Object(pinned),
        "dimension": c.dimension,
        "shape": c.shape(),
        "choice": c.choice,
    })
}

pub fn descriptor_json(d: &RingDescriptor) -> Value {
    json!({"balls": d.balls, "annuli": d.annuli})
}

impl Report {
    pub fn json(&self) -> Value {
        let l = self.field;
        let rd = &self.reduced;
        let pinned: Vec<Value> = rd.pinned().iter().map(|p| p.map_or(Value::Null, s)).collect();
        let mut out = json!({
            "schema": SCHEMA,
            "field": l,
            "input": if self.gene.is_some() { "params" } else { "abstract" },
            "params": self.gene.as_ref().map_or(Value::Null, |g| params_json(&g.params)),
            "gene": gene_json(self.gene.as_ref(), &self.symbols),
            "decoration": decoration_json(&self.symbols, &self.decoration),
            "equations": equations_json(&self.equations),
            "reduced": {
                "pinned": pinned,
                "fusion_classes": rd.fusion_classes(),
                "contradiction": rd.contradiction,
                "irregular": rd.is_irregular(),
            },
            "factors": rd.factors.iter().map(factor_json).collect::<Vec<_>>(),
            "components": self.components.iter().map(component_json).collect::<Vec<_>>(),
            "dimension": self.dimension,
            "connected": self.connected,
            "empty": self.empty,
            "validation": {
                "all_passed": self.checks.iter().all(|c| c.passed),
                "checks": self.checks.iter().map(|c| json!({"name": c.name, "passed": c.passed, "detail": c.detail})).collect::<Vec<_>>(),
            },
        });
        if let (Some(pts), Some(census)) = (&self.points, &self.census) {
            out["point_count"] = json!(pts.len());
            out["census"] = Value::Array(
                census.strata.iter().map(|(k, n)| json!({"genre": k, "count": n})).collect(),
            );
            out["points"] = Value::Array(
                census
                    .points
                    .iter()
                    .map(|r| {
                        json!({
                            "point": r.point.iter().map(s).collect::<Vec<_>>(),
                            "genre": r.genre.fine_key(),
                            "coarse": r.genre.coarse_key(),
                            "components": r.components,
                            "fiber": descriptor_json(&ring_descriptor(&r.genre)),
                        })
                    })
                    .collect(),
            );
        }
        let cands: Vec<Value> = self
            .candidates
            .iter()
            .map(|(k, c)| match c {
                Ok(d) => json!({"factor": k, "label": "candidate", "descriptor": descriptor_json(d)}),
                Err(e) => json!({"factor": k, "label": "candidate", "descriptor": null, "reason": e}),
            })
            .collect();
        out["descriptors"] = Value::Array(cands);
        if let Some(o) = &self.oracle {
            let fmt = |v: &[Point]| v.iter().map(|p| format_point(p)).collect::<Vec<_>>();
            out["oracle"] = json!({
                "exhaustive": o.exhaustive,
                "checked": o.checked,
                "integrality_mismatches": fmt(&o.integrality_mismatches),
                "genre_mismatches": fmt(&o.genre_mismatches),
                "passed": o.passed(),
            });
        }
        out
    }
}

/// Textual link count used in summaries.
pub fn link_summary(d: &Decoration) -> String {
    let td = d.diagonal_links.iter().filter(|l| l.kind == LinkKind::TopDown).count();
    let bu = d.diagonal_links.len() - td;
    format!("{td} top-down, {bu} bottom-up, {} horizontal", d.horizontal_links.len())
}

/// One orbit of abstract genes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbstractEntry {
    pub canonical: Symbols,
    pub orbit_size: usize,
    pub empty: bool,
    pub irregular: bool,
    pub dimension: Option<usize>,
    pub shapes: Vec<String>,
}

impl AbstractEntry {
    pub fn json(&self) -> Value {
        json!({
            "gene": self.canonical.to_string(),
            "orbit_size": self.orbit_size,
            "empty": self.empty,
            "irregular": self.irregular,
            "dimension": self.dimension,
            "components": self.shapes,
        })
    }
}

/// Stable under rotation of the 2f-cycle and the A↔B relabel.
pub fn orbit(s: &Symbols) -> BTreeSet<Symbols> {
    let n = 2 * s.f;
    let mut out = BTreeSet::new();
    for k in 0..n {
        let r = s.rotate(k);
        out.insert(r.tau());
        out.insert(r);
    }
    out
}

pub fn canonical(s: &Symbols) -> Symbols {
    orbit(s).into_iter().next().expect("orbit is never empty")
}

fn admissible_pair(a: Symbol, b: Symbol) -> bool {
    (a != Symbol::AB || b == Symbol::O) && (b != Symbol::O || matches!(a, Symbol::O | Symbol::AB))
}

/// Every symbol sequence satisfying the cyclic neighbour rules, not all
/// couples `{A,B}`, optionally without `(0,0)` couples; one entry per orbit.
pub fn enumerate_abstract_genes(f: usize, include_zero_zero: bool, cap: usize) -> Result<Vec<AbstractEntry>> {
    if f < 1 {
        return Err(Error::RejectDegree(f, 1));
    }
    if f > cap {
        return Err(Error::BudgetExceeded { needed: format!("f = {f}"), cap: cap as u64 });
    }
    let n = 2 * f;
    let mut raw = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn rec(n: usize, cur: &mut Vec<Symbol>, raw: &mut Vec<Vec<Symbol>>) {
        if cur.len() == n {
            if admissible_pair(cur[n - 1], cur[0]) {
                raw.push(cur.clone());
            }
            return;
        }
        for x in Symbol::ALL {
            if cur.last().is_some_and(|&p| !admissible_pair(p, x)) {
                continue;
            }
            cur.push(x);
            rec(n, cur, raw);
            cur.pop();
        }
    }
    rec(n, &mut cur, &mut raw);
    let mut reps: BTreeMap<Symbols, usize> = BTreeMap::new();
    for x in raw {
        let s = Symbols { f, x };
        if symbol_checks(&s).iter().any(|c| !c.passed) {
            continue;
        }
        if !include_zero_zero && s.has_zero_zero() {
            continue;
        }
        *reps.entry(canonical(&s)).or_insert(0) += 1;
    }
    let mut out = Vec::with_capacity(reps.len());
    for (c, size) in reps {
        let d = decorate(&c);
        let rd = reduce_diagram(&build_equations(&c, &d));
        let comps = components_of(&rd, 1_000_000)?;
        out.push(AbstractEntry {
            orbit_size: size,
            empty: comps.is_empty(),
            irregular: rd.is_irregular(),
            dimension: comps.iter().map(|x| x.dimension).max(),
            shapes: comps.iter().map(|x| x.shape()).collect(),
            canonical: c,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orbit_contains_relabel() {
        let s = Symbols::parse("A,B|AB,0").unwrap();
        let o = orbit(&s);
        assert!(o.contains(&s.tau()));
        assert!(o.contains(&s.rotate(1)));
        assert_eq!(canonical(&s.rotate(3)), canonical(&s));
    }

    #[test]
    fn zero_zero_report_is_empty() {
        let s = Symbols::parse("0,A|0,AB").unwrap();
        let r = run_pipeline(&Input::Abstract(s), &Options::default()).unwrap();
        assert!(r.empty && r.components.is_empty());
        assert_eq!(r.json()["schema"], 1);
    }
}
