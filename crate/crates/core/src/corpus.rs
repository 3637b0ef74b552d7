//! Seeded random instances: connected graphs and building sets.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::building::{BuildingSet, Graph};
use crate::set::{Block, GroundSet};

/// The generator behind every randomized suite; stable across platforms.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random spanning tree plus each remaining edge with probability `p`.
pub fn connected_graph<R: Rng>(rng: &mut R, n: usize, p: f64) -> Graph {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut edges = Vec::new();
    for i in 1..n {
        let j = rng.gen_range(0..i);
        edges.push((order[i].min(order[j]), order[i].max(order[j])));
    }
    for u in 0..n {
        for v in u + 1..n {
            if !edges.contains(&(u, v)) && rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::new(GroundSet::numbered(n).expect("small"), edges).expect("valid edges")
}

/// Closes `seeds` plus singletons and the ground set under unions of
/// intersecting members, and also under intersections when asked.
fn close(n: usize, seeds: Vec<Block>, intersections: bool) -> BuildingSet {
    let mut family: Vec<Block> = seeds;
    family.extend((0..n).map(Block::singleton));
    family.push(Block::full(n));
    family.retain(|b| !b.is_empty());
    family.sort();
    family.dedup();
    loop {
        let mut added = Vec::new();
        for (i, &a) in family.iter().enumerate() {
            for &b in &family[i + 1..] {
                if a.intersects(b) {
                    added.push(a.union(b));
                    if intersections {
                        added.push(a.intersection(b));
                    }
                }
            }
        }
        added.retain(|b| family.binary_search(b).is_err());
        if added.is_empty() {
            break;
        }
        family.extend(added);
        family.sort();
        family.dedup();
    }
    BuildingSet::new(GroundSet::numbered(n).expect("small"), family)
        .expect("closure is a connected building set")
}

fn random_blocks<R: Rng>(rng: &mut R, n: usize, count: usize) -> Vec<Block> {
    (0..count)
        .map(|_| {
            let size = rng.gen_range(2..n.max(3));
            let mut elements: Vec<usize> = (0..n).collect();
            elements.shuffle(rng);
            Block::from_indices(elements.into_iter().take(size))
        })
        .collect()
}

/// A connected building set closed under intersection, grown from a few
/// random blocks.
pub fn intersection_closed<R: Rng>(rng: &mut R, n: usize) -> BuildingSet {
    let count = rng.gen_range(1..=n);
    close(n, random_blocks(rng, n, count), true)
}

/// A connected building set, usually not closed under intersection.
pub fn building_set<R: Rng>(rng: &mut R, n: usize) -> BuildingSet {
    let count = rng.gen_range(1..=n);
    close(n, random_blocks(rng, n, count), false)
}
