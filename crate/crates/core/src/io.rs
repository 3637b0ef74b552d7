//! Text formats: JSON building sets, nested sets, trees, polytopes and
//! weights, plus a plain edge-list format for graphs.
//!
//! Rationals are always written as `"p/q"` strings, or `"p"` for integers.

use serde::Deserialize;
use serde_json::{json, Value};

use crate::building::{BuildingSet, Graph};
use crate::error::{Error, Result};
use crate::geometry::{HPolytope, TreeVertex};
use crate::minkowski::MinkowskiWeights;
use crate::nested::{BTree, NestedSet};
use crate::rational::{self, RationalPoint};
use crate::set::{Block, GroundSet};

fn json_error(e: serde_json::Error) -> Error {
    Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BuildingSetFile {
    ground: Vec<String>,
    blocks: Vec<Vec<String>>,
}

/// Parses `{"ground": [...], "blocks": [[...], ...]}`.
pub fn parse_building_set(text: &str) -> Result<BuildingSet> {
    let file: BuildingSetFile = serde_json::from_str(text).map_err(json_error)?;
    let ground = GroundSet::new(file.ground)?;
    BuildingSet::from_names(ground, &file.blocks)
}

pub fn building_set_json(b: &BuildingSet) -> Value {
    json!({
        "ground": b.ground().names(),
        "blocks": b.blocks().iter().map(|&x| b.ground().block_names(x)).collect::<Vec<_>>(),
    })
}

/// Parses an edge list: the first content line names the vertices, every
/// later line holds one edge `u v`. Blank lines and `#` comments are skipped.
pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("")))
        .filter(|(_, l)| !l.trim().is_empty());
    let Some((_, header)) = lines.next() else {
        return Err(Error::Parse {
            line: 1,
            column: 1,
            message: "missing vertex line".into(),
        });
    };
    let vertices = GroundSet::new(header.split_whitespace())?;
    let mut edges = Vec::new();
    for (line, content) in lines {
        let tokens = tokens_with_columns(content);
        let at = |column: usize, message: String| Error::Parse {
            line,
            column,
            message,
        };
        if tokens.len() != 2 {
            let column = tokens.get(2).map_or(1, |t| t.0);
            return Err(at(
                column,
                format!("expected an edge `u v`, found {} tokens", tokens.len()),
            ));
        }
        let mut ends = [0; 2];
        for (k, (column, name)) in tokens.iter().enumerate() {
            ends[k] = vertices
                .index_of(name)
                .map_err(|_| at(*column, format!("unknown vertex `{name}`")))?;
        }
        if ends[0] == ends[1] {
            return Err(at(tokens[1].0, format!("self-loop at `{}`", tokens[0].1)));
        }
        edges.push((ends[0], ends[1]));
    }
    Graph::new(vertices, edges)
}

/// Whitespace-separated tokens with their 1-based character columns.
fn tokens_with_columns(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start: Option<(usize, usize)> = None;
    for (col, (byte, ch)) in line.char_indices().enumerate() {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some((col + 1, byte)),
            (true, Some((c, b))) => {
                out.push((c, &line[b..byte]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some((c, b)) = start {
        out.push((c, &line[b..]));
    }
    out
}

pub fn graph_text(g: &Graph) -> String {
    let mut out = g.vertices().names().join(" ");
    out.push('\n');
    for (u, v) in g.edges() {
        out.push_str(&format!(
            "{} {}\n",
            g.vertices().name(u),
            g.vertices().name(v)
        ));
    }
    out
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct NestedFile {
    nested: Vec<Vec<String>>,
}

pub fn parse_nested(b: &BuildingSet, text: &str) -> Result<NestedSet> {
    let file: NestedFile = serde_json::from_str(text).map_err(json_error)?;
    let members = file
        .nested
        .iter()
        .map(|names| b.ground().block(names))
        .collect::<Result<Vec<Block>>>()?;
    NestedSet::new(b, members)
}

pub fn nested_members_json(b: &BuildingSet, n: &NestedSet) -> Value {
    json!(n
        .members()
        .iter()
        .map(|&x| b.ground().block_names(x))
        .collect::<Vec<_>>())
}

pub fn nested_json(b: &BuildingSet, n: &NestedSet) -> Value {
    json!({ "nested": nested_members_json(b, n) })
}

fn tree_node_json(ground: &GroundSet, t: &BTree, v: usize) -> Value {
    json!({
        "label": ground.block_names(t.label(v)),
        "children": t.children(v).iter().map(|&c| tree_node_json(ground, t, c)).collect::<Vec<_>>(),
    })
}

/// The bare node object `{"label": [...], "children": [...]}` of the root.
pub fn tree_node(ground: &GroundSet, t: &BTree) -> Value {
    tree_node_json(ground, t, t.root())
}

pub fn tree_json(ground: &GroundSet, t: &BTree) -> Value {
    json!({ "tree": tree_node(ground, t) })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TreeNode {
    label: Vec<String>,
    #[serde(default)]
    children: Vec<TreeNode>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TreeFile {
    tree: TreeNode,
}

/// Parses `{"tree": {...}}` and validates it against `b`.
pub fn parse_tree(b: &BuildingSet, text: &str) -> Result<BTree> {
    let file: TreeFile = serde_json::from_str(text).map_err(json_error)?;
    let mut labels = Vec::new();
    let mut parent = Vec::new();
    let mut stack = vec![(&file.tree, None)];
    while let Some((node, up)) = stack.pop() {
        let index = labels.len();
        labels.push(b.ground().block(&node.label)?);
        parent.push(up);
        for child in node.children.iter().rev() {
            stack.push((child, Some(index)));
        }
    }
    let t = BTree::from_parts(labels, parent)?;
    t.validate(b)?;
    Ok(t)
}

pub fn point_json(p: &RationalPoint) -> Value {
    json!(p.to_strings())
}

pub fn vrep_json(ground: &GroundSet, vertices: &[TreeVertex]) -> Value {
    json!({
        "vertices": vertices
            .iter()
            .map(|v| json!({ "tree": tree_node(ground, &v.tree), "point": point_json(&v.point) }))
            .collect::<Vec<_>>(),
    })
}

/// Points without trees, as produced by the oracle.
pub fn points_json(points: &[RationalPoint]) -> Value {
    json!({
        "vertices": points.iter().map(|p| json!({ "point": point_json(p) })).collect::<Vec<_>>(),
    })
}

pub fn hrep_json(p: &HPolytope) -> Value {
    json!({
        "ground": p.ground.names(),
        "sum": rational::format(&p.sum),
        "constraints": p
            .constraints
            .iter()
            .map(|(block, rhs)| json!({
                "block": p.ground.block_names(*block),
                "rhs": rational::format(rhs),
            }))
            .collect::<Vec<_>>(),
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Constraint {
    block: Vec<String>,
    rhs: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct HrepFile {
    ground: Vec<String>,
    sum: String,
    constraints: Vec<Constraint>,
}

pub fn parse_hrep(text: &str) -> Result<HPolytope> {
    let file: HrepFile = serde_json::from_str(text).map_err(json_error)?;
    let ground = GroundSet::new(file.ground)?;
    let constraints = file
        .constraints
        .iter()
        .map(|c| Ok((ground.block(&c.block)?, rational::parse(&c.rhs)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(HPolytope {
        sum: rational::parse(&file.sum)?,
        ground,
        constraints,
    })
}

pub fn weights_json(w: &MinkowskiWeights) -> Value {
    json!({
        "weights": w
            .summands()
            .iter()
            .map(|(block, y)| json!({
                "block": w.ground().block_names(*block),
                "y": rational::format(y),
            }))
            .collect::<Vec<_>>(),
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Weight {
    block: Vec<String>,
    y: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct WeightsFile {
    weights: Vec<Weight>,
}

pub fn parse_weights(ground: &GroundSet, text: &str) -> Result<MinkowskiWeights> {
    let file: WeightsFile = serde_json::from_str(text).map_err(json_error)?;
    let weights = file
        .weights
        .iter()
        .map(|w| Ok((ground.block(&w.block)?, rational::parse(&w.y)?)))
        .collect::<Result<Vec<_>>>()?;
    MinkowskiWeights::new(ground.clone(), weights)
}
