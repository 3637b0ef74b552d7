//! Named building sets used by the tests, the CLI and the demo.

use crate::building::{BuildingSet, Graph};
use crate::set::{Block, GroundSet};

fn numbered(n: usize, blocks: &[&[usize]]) -> BuildingSet {
    let ground = GroundSet::numbered(n).expect("small ground set");
    let blocks = blocks
        .iter()
        .map(|xs| Block::from_indices(xs.iter().map(|x| x - 1)));
    BuildingSet::new(ground, blocks).expect("fixture is a building set")
}

fn all_subsets_except(n: usize, missing: &[&[usize]]) -> BuildingSet {
    let missing: Vec<Block> = missing
        .iter()
        .map(|xs| Block::from_indices(xs.iter().map(|x| x - 1)))
        .collect();
    let ground = GroundSet::numbered(n).expect("small ground set");
    let blocks: Vec<Block> = ground.subsets().filter(|b| !missing.contains(b)).collect();
    BuildingSet::new(ground, blocks).expect("fixture is a building set")
}

/// All nonempty subsets of `[4]` (complete graph `K4`).
pub fn b0() -> BuildingSet {
    all_subsets_except(4, &[])
}

/// `K4` minus the edge `{1,3}`.
pub fn b1() -> BuildingSet {
    all_subsets_except(4, &[&[1, 3]])
}

/// `K4` minus the edges `{1,3}` and `{1,4}`.
pub fn b2() -> BuildingSet {
    all_subsets_except(4, &[&[1, 3], &[1, 4], &[1, 3, 4]])
}

pub fn b3() -> BuildingSet {
    numbered(
        5,
        &[
            &[1],
            &[2],
            &[3],
            &[4],
            &[5],
            &[1, 2, 3],
            &[1, 3, 4, 5],
            &[1, 2, 3, 4, 5],
        ],
    )
}

pub fn b4() -> BuildingSet {
    numbered(
        5,
        &[
            &[1],
            &[2],
            &[3],
            &[4],
            &[5],
            &[1, 2, 3, 4],
            &[3, 4, 5],
            &[1, 2, 3, 4, 5],
        ],
    )
}

/// The triangle-shaped removahedron `{1},{2},{3},{1,2},{1,2,3}` on `[3]`.
pub fn b5_prime() -> BuildingSet {
    numbered(3, &[&[1], &[2], &[3], &[1, 2], &[1, 2, 3]])
}

pub fn cycle(n: usize) -> BuildingSet {
    Graph::cycle(n)
        .and_then(|g| g.building_set())
        .expect("cycle graph is connected")
}

pub fn path(n: usize) -> BuildingSet {
    Graph::path(n)
        .and_then(|g| g.building_set())
        .expect("path graph is connected")
}

/// The named fixtures, in a fixed order.
pub fn all() -> Vec<(&'static str, BuildingSet)> {
    vec![
        ("B0", b0()),
        ("B1", b1()),
        ("B2", b2()),
        ("B3", b3()),
        ("B4", b4()),
        ("B5'", b5_prime()),
        ("C4", cycle(4)),
        ("C5", cycle(5)),
        ("C6", cycle(6)),
        ("P3", path(3)),
        ("P4", path(4)),
        ("P5", path(5)),
    ]
}

/// Looks a fixture up by name (case-insensitive; `B5p` is accepted for `B5'`).
pub fn by_name(name: &str) -> Option<BuildingSet> {
    let mut key = name.to_ascii_uppercase();
    if key == "B5P" {
        key = "B5'".to_string();
    }
    all().into_iter().find(|(n, _)| *n == key).map(|(_, b)| b)
}
