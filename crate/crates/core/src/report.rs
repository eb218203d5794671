//! The JSON report: a versioned envelope holding one block per operation.
//!
//! Integers that fit in `u64` are JSON numbers and larger ones are decimal
//! strings. Rationals are `{"exact": "p/q", "approx": "..."}`; intervals
//! are `{"lo": .., "hi": ..}` of such rationals. Nothing machine-dependent
//! (timings, worker count) is written unless asked for, so equal inputs give
//! byte-identical reports.

use crate::coloring::{ColoringCensus, DeviationCensus};
use crate::constructions::{BoxSet, CornerBoundReport, CornerConstruction, ExtremalScan, ForcingReport, Window};
use crate::exact::{self, Interval};
use crate::grid::EquationSpec;
use crate::hypergraph::{DeltaBoundRow, HypothesisReport, ContainerParameters, RainbowHypergraph};
use crate::solutions::SolutionCensus;
use crate::template::{ContainerReport, TemplateClassification};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use serde::Serialize;
use serde_json::{json, Value};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize)]
pub struct Block {
    pub op: String,
    /// The statement or construction the block evaluates.
    pub anchor: String,
    pub result: Value,
}

/// Opt-in runtime facts; excluded from the default report.
#[derive(Clone, Debug, Serialize)]
pub struct Runtime {
    pub workers: usize,
    pub elapsed_ms: u128,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub tool: String,
    pub version: String,
    pub command: String,
    pub config: Value,
    pub seed: Option<u64>,
    pub blocks: Vec<Block>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime: Option<Runtime>,
}

impl Report {
    pub fn new(command: &str, config: Value, seed: Option<u64>) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            tool: "bkh".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            config,
            seed,
            blocks: Vec::new(),
            runtime: None,
        }
    }

    pub fn push(&mut self, op: &str, anchor: &str, result: Value) {
        self.blocks.push(Block {
            op: op.into(),
            anchor: anchor.into(),
            result,
        });
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report values are always serializable");
        s.push('\n');
        s
    }
}

pub fn uint(v: u128) -> Value {
    match u64::try_from(v) {
        Ok(x) => Value::from(x),
        Err(_) => Value::from(v.to_string()),
    }
}

pub fn bigint(v: &BigInt) -> Value {
    match i64::try_from(v) {
        Ok(x) => Value::from(x),
        Err(_) => Value::from(v.to_string()),
    }
}

pub fn biguint(v: &BigUint) -> Value {
    match u64::try_from(v) {
        Ok(x) => Value::from(x),
        Err(_) => Value::from(v.to_string()),
    }
}

pub fn rational(q: &BigRational) -> Value {
    json!({ "exact": exact::render(q), "approx": exact::approx(q) })
}

pub fn interval(i: &Interval) -> Value {
    json!({ "lo": rational(&i.lo), "hi": rational(&i.hi) })
}

pub fn uints(v: &[u128]) -> Value {
    Value::Array(v.iter().map(|&x| uint(x)).collect())
}

pub fn spec(s: &EquationSpec) -> Value {
    json!({
        "ambient": s.ambient.to_string(),
        "d": s.d,
        "n": s.n,
        "groups": s.groups,
        "r": s.r,
    })
}

pub fn solution_census(c: &SolutionCensus) -> Value {
    json!({
        "f": uint(c.f),
        "m1": c.m1.map(uint),
        "m2": c.m2.map(uint),
        "families": uint(c.families),
    })
}

pub fn coloring_census(c: &ColoringCensus) -> Value {
    json!({
        "g": uint(c.g),
        "by_palette_size": uints(&c.by_palette_size),
        "lower_bound": bigint(&c.lower_bound),
        "ratio_to_asymptotic": c.ratio_to_asymptotic.as_ref().map(rational),
        "nodes": c.nodes,
    })
}

pub fn deviation_census(c: &DeviationCensus) -> Value {
    json!({
        "colors": c.colors,
        "count": uint(c.count),
        "inside": uint(c.inside),
        "by_deviation_size": uints(&c.by_deviation_size),
    })
}

pub fn hypergraph(h: &RainbowHypergraph, deltas: &[(usize, u128)]) -> Value {
    json!({
        "uniformity": h.uniformity,
        "f": uint(h.f),
        "vertices": uint(h.vertices),
        "edges": uint(h.edges),
        "avg_degree": rational(&h.avg_degree()),
        "codegrees": deltas.iter().map(|&(j, c)| json!({ "j": j, "delta": uint(c) })).collect::<Vec<_>>(),
    })
}

pub fn parameters(p: &ContainerParameters) -> Value {
    json!({
        "epsilon": interval(&p.epsilon),
        "tau": interval(&p.tau),
        "tau_cap": rational(&p.tau_cap),
        "tau_ok": p.tau_ok,
    })
}

pub fn hypothesis(r: &HypothesisReport) -> Value {
    json!({
        "parameters": parameters(&r.params),
        "codegree_function": interval(&r.codegree),
        "codegree_cap": interval(&r.codegree_cap),
        "codegree_ok": r.codegree_ok,
        "log_target": interval(&r.log_target),
        "hypothesis_ok": r.hypothesis_ok,
    })
}

pub fn delta_bounds(rows: &[DeltaBoundRow]) -> Value {
    Value::Array(
        rows.iter()
            .map(|r| json!({ "j": r.j, "delta": uint(r.delta), "bound": rational(&r.bound), "holds": r.holds }))
            .collect(),
    )
}

pub fn classification(c: &TemplateClassification) -> Value {
    json!({
        "x_sizes": c.x_sizes,
        "x_low": c.x_low,
        "x_high": c.x_high,
        "good": c.good,
        "good_threshold": interval(&c.good_threshold),
        "dominant_colors": c.dominant.0,
        "dominant_size": c.dominant.1,
        "dominant_large": c.dominant_large,
        "high_small": c.high_small,
    })
}

pub fn containers(c: &ContainerReport) -> Value {
    json!({
        "coverage": c.coverage,
        "uncovered": c.uncovered,
        "rainbow_counts": uints(&c.rainbow_counts),
        "rainbow_bound": interval(&c.rainbow_bound),
        "rainbow_ok": c.rainbow_ok,
        "size": c.size,
        "size_exponent": interval(&c.size_exponent),
        "size_ok": c.size_ok,
    })
}

pub fn window(w: &Window) -> Value {
    json!({
        "lo": w.lo,
        "hi": w.hi,
        "lo_exact": exact::render(&w.lo_exact),
        "hi_exact": exact::render(&w.hi_exact),
        "lo_closed": w.lo_closed,
        "hi_closed": w.hi_closed,
        "inequality": w.render(),
    })
}

pub fn box_set(b: &BoxSet) -> Value {
    json!({
        "name": b.name,
        "size": uint(b.size()),
        "windows": b.windows.iter().map(window).collect::<Vec<_>>(),
    })
}

pub fn corner(c: &CornerConstruction) -> Value {
    json!({
        "v": c.v.to_string(),
        "a": rational(&c.a),
        "a_sets": c.a_sets.iter().map(box_set).collect::<Vec<_>>(),
        "b_sets": c.b_sets.iter().map(box_set).collect::<Vec<_>>(),
        "pairwise_disjoint": c.pairwise_disjoint,
        "product_lower_bound": bigint(&c.lower_bound()),
    })
}

pub fn forcing(f: &ForcingReport) -> Value {
    json!({ "samples": f.samples, "passes": f.passes, "seed": f.seed })
}

pub fn corner_bound(b: &CornerBoundReport) -> Value {
    json!({
        "through_point": uint(b.through_point),
        "lower_bound": bigint(&b.lower_bound),
        "holds": b.holds,
    })
}

/// The ranking summary of a scan; rows go to CSV.
pub fn extremal(s: &ExtremalScan) -> Value {
    let mut ranking: Vec<_> = s.rows.iter().collect();
    ranking.sort_by(|a, b| b.g.cmp(&a.g).then_with(|| a.mask.cmp(&b.mask)));
    json!({
        "subsets": s.rows.len(),
        "evaluated": s.evaluated,
        "max_g": uint(s.max_g),
        "maximizers": s.maximizers,
        "full_grid_g": uint(s.rows.iter().find(|r| r.is_full_grid).map_or(0, |r| r.g)),
        "full_grid_unique_max": s.full_grid_unique_max,
        "sparse_threshold": interval(&s.sparse_threshold),
        "dense_threshold": interval(&s.dense_threshold),
        "top": ranking
            .iter()
            .take(10)
            .map(|r| json!({ "mask": r.mask, "size": r.size, "g": uint(r.g) }))
            .collect::<Vec<_>>(),
    })
}

/// CSV rows `mask,size,g` in subset order.
pub fn extremal_csv(s: &ExtremalScan) -> String {
    let mut out = String::from("mask,size,g\n");
    for r in &s.rows {
        out.push_str(&format!("{},{},{}\n", r.mask, r.size, r.g));
    }
    out
}
