//! Browser bindings. Every export takes an input string (a fixture name,
//! building-set JSON or a graph edge list) and returns a JSON string.

use std::f64::consts::TAU;

use num_traits::ToPrimitive;
use removahedra::geometry::{
    btree_point, delta_formula, is_removahedron_realizable, skew_delta_formula, skew_point,
    SkewParams,
};
use removahedra::minkowski::canonical_weights;
use removahedra::nested::{exchangeable_closure_witness, flip_context, FlipGraph};
use removahedra::rational::{self, int};
use removahedra::{fixtures, io, BuildingSet, Graph, Rational, RationalPoint};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Largest ground set the demo accepts, to keep the page responsive.
const MAX_ELEMENTS: usize = 7;

struct Input {
    building: BuildingSet,
    graph: Option<Graph>,
}

fn graph_fixture(name: &str) -> Option<Graph> {
    let upper = name.to_ascii_uppercase();
    let (kind, n) = upper.split_at(1);
    let n: usize = n.parse().ok()?;
    match kind {
        "C" => Graph::cycle(n).ok(),
        "P" => Graph::path(n).ok(),
        "K" => Graph::complete(n).ok(),
        _ => None,
    }
}

fn load(input: &str) -> Result<Input, String> {
    let text = input.trim();
    let loaded = if text.starts_with('{') {
        Input {
            building: io::parse_building_set(text).map_err(|e| e.to_string())?,
            graph: None,
        }
    } else if let Some(g) = graph_fixture(text) {
        Input {
            building: g.building_set().map_err(|e| e.to_string())?,
            graph: Some(g),
        }
    } else if let Some(b) = fixtures::by_name(text) {
        Input {
            building: b,
            graph: None,
        }
    } else {
        let g = io::parse_graph(text).map_err(|e| e.to_string())?;
        Input {
            building: g.building_set().map_err(|e| e.to_string())?,
            graph: Some(g),
        }
    };
    if loaded.building.n() > MAX_ELEMENTS {
        return Err(format!(
            "at most {MAX_ELEMENTS} elements are supported here"
        ));
    }
    Ok(loaded)
}

fn parse_gamma(gamma: &str) -> Result<Option<SkewParams>, String> {
    let gamma = gamma.trim();
    if gamma.is_empty() {
        return Ok(None);
    }
    let g = rational::parse(gamma).map_err(|e| e.to_string())?;
    SkewParams::new(g).map(Some).map_err(|e| e.to_string())
}

/// Planar image of a point: coordinate `i` pulls along the angle `2πi/n`.
fn project(p: &RationalPoint) -> [f64; 2] {
    let n = p.0.len() as f64;
    p.0.iter().enumerate().fold([0.0, 0.0], |[x, y], (i, c)| {
        let c = c.to_f64().unwrap_or(0.0);
        let angle = TAU * i as f64 / n;
        [x + c * angle.cos(), y + c * angle.sin()]
    })
}

fn witness(b: &BuildingSet, w: Option<(removahedra::Block, removahedra::Block)>) -> Value {
    match w {
        None => Value::Bool(true),
        Some((x, y)) => json!({
            "holds": false,
            "blocks": [b.fmt_block(x), b.fmt_block(y)],
            "intersection": b.fmt_block(x.intersection(y)),
        }),
    }
}

pub fn analyze_value(input: &str) -> Result<Value, String> {
    let Input { building: b, graph } = load(input)?;
    let chordful = graph
        .as_ref()
        .map(Graph::is_chordful)
        .transpose()
        .map_err(|e| e.to_string())?;
    let decision = is_removahedron_realizable(&b).map_err(|e| e.to_string())?;
    let exchangeable = exchangeable_closure_witness(&b).map_err(|e| e.to_string())?;
    Ok(json!({
        "elements": b.ground().block_names(b.full()),
        "blocks": b.blocks().iter().map(|&x| b.fmt_block(x)).collect::<Vec<_>>(),
        "closed_under_intersection": witness(&b, b.intersection_witness()),
        "exchangeable_closure": witness(&b, exchangeable),
        "chordful": chordful,
        "realizable": decision.is_realizable(),
    }))
}

pub fn realize_value(input: &str, gamma: &str) -> Result<Value, String> {
    let b = load(input)?.building;
    let params = parse_gamma(gamma)?;
    let graph = FlipGraph::new(&b).map_err(|e| e.to_string())?;
    let points = graph
        .trees
        .iter()
        .map(|t| match &params {
            None => btree_point(t),
            Some(p) => skew_point(t, p),
        })
        .collect::<removahedra::Result<Vec<_>>>()
        .map_err(|e| e.to_string())?;
    let mut failing = 0;
    let mut edges = Vec::with_capacity(graph.flips.len());
    for f in &graph.flips {
        let ctx =
            flip_context(&graph.trees[f.from], &graph.trees[f.to]).map_err(|e| e.to_string())?;
        let delta: Rational = match &params {
            None => int(delta_formula(&ctx)),
            Some(p) => skew_delta_formula(&ctx, p),
        };
        let positive = delta > int(0);
        failing += usize::from(!positive);
        edges.push(json!({
            "from": f.from,
            "to": f.to,
            "removed": b.fmt_block(f.removed),
            "added": b.fmt_block(f.added),
            "delta": rational::format(&delta),
            "positive": positive,
        }));
    }
    let vertices: Vec<Value> = graph
        .nested
        .iter()
        .zip(&points)
        .map(|(n, p)| {
            json!({
                "nested": n.fmt(&b),
                "point": p.to_string(),
                "xy": project(p),
            })
        })
        .collect();
    Ok(json!({
        "gamma": params.as_ref().map(|p| rational::format(p.gamma())),
        "realizable": failing == 0,
        "failing_flips": failing,
        "vertices": vertices,
        "edges": edges,
    }))
}

pub fn decompose_value(input: &str) -> Result<Value, String> {
    let b = load(input)?.building;
    let w = canonical_weights(&b).map_err(|e| e.to_string())?;
    let mut out = io::weights_json(&w);
    out["decomposition"] = Value::String(w.decomposition());
    Ok(out)
}

fn to_js(v: Result<Value, String>) -> Result<String, JsValue> {
    v.map(|v| v.to_string()).map_err(|e| JsValue::from_str(&e))
}

/// Closure properties, chordfulness and the realizability verdict.
#[wasm_bindgen]
pub fn analyze(input: &str) -> Result<String, JsValue> {
    to_js(analyze_value(input))
}

/// Flip graph with one point per maximal tree and the coefficient of every
/// flip. An empty `gamma` selects the removahedron, otherwise its skew form.
#[wasm_bindgen]
pub fn realize(input: &str, gamma: &str) -> Result<String, JsValue> {
    to_js(realize_value(input, gamma))
}

/// Minkowski decomposition into simplices for intersection-closed inputs.
#[wasm_bindgen]
pub fn decompose(input: &str) -> Result<String, JsValue> {
    to_js(decompose_value(input))
}
