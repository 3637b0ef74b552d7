use std::path::Path;

use anyhow::{bail, Context, Result};
use removahedra::{fixtures, io, BuildingSet, Graph};

/// Graph fixtures `Cn`, `Pn` and `Kn`.
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

pub struct Loaded {
    pub building: BuildingSet,
    pub graph: Option<Graph>,
}

pub fn load(input: &str, graph: bool) -> Result<Loaded> {
    let path = Path::new(input);
    if path.exists() {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {input}"))?;
        return if graph {
            let g = io::parse_graph(&text).with_context(|| format!("in {input}"))?;
            Ok(Loaded {
                building: g.building_set()?,
                graph: Some(g),
            })
        } else {
            Ok(Loaded {
                building: io::parse_building_set(&text).with_context(|| format!("in {input}"))?,
                graph: None,
            })
        };
    }
    if graph {
        if let Some(g) = graph_fixture(input) {
            return Ok(Loaded {
                building: g.building_set()?,
                graph: Some(g),
            });
        }
    } else if let Some(b) = fixtures::by_name(input) {
        // Graph fixtures keep their graph so chordfulness can be reported.
        let graph = graph_fixture(input).filter(|g| g.building_set().ok().as_ref() == Some(&b));
        return Ok(Loaded { building: b, graph });
    }
    bail!("no such file or fixture: {input}")
}
