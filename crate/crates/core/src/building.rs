//! Building sets, graphical building sets and their structural predicates.

use std::fmt;

use crate::error::{Error, Result};
use crate::set::{Block, GroundSet};

/// A validated connected building set.
///
/// Blocks are deduplicated and kept in canonical order. Membership is a
/// lookup table over all `2^n` subsets of the ground set.
#[derive(Clone)]
pub struct BuildingSet {
    ground: GroundSet,
    blocks: Vec<Block>,
    member: Vec<bool>,
    intersection_witness: Option<(Block, Block)>,
}

impl BuildingSet {
    /// Validates the building-set axioms and connectedness.
    pub fn new(ground: GroundSet, blocks: impl IntoIterator<Item = Block>) -> Result<Self> {
        let full = ground.full();
        let mut blocks: Vec<Block> = blocks.into_iter().collect();
        for &block in &blocks {
            if block.is_empty() {
                return Err(Error::EmptyBlock);
            }
            if !block.is_subset(full) {
                return Err(Error::UnknownElement(format!("{block:?}")));
            }
        }
        blocks.sort();
        blocks.dedup();

        let mut member = vec![false; 1 << ground.len()];
        for &block in &blocks {
            member[block.mask() as usize] = true;
        }
        for i in 0..ground.len() {
            if !member[Block::singleton(i).mask() as usize] {
                return Err(Error::MissingSingleton(
                    ground.fmt_block(Block::singleton(i)),
                ));
            }
        }
        for (k, &a) in blocks.iter().enumerate() {
            for &b in &blocks[k + 1..] {
                if a.intersects(b) && !member[a.union(b).mask() as usize] {
                    return Err(Error::UnionMissing(
                        ground.fmt_block(a),
                        ground.fmt_block(b),
                    ));
                }
            }
        }
        if !member[full.mask() as usize] {
            return Err(Error::NotConnected(
                "the ground set is not a block".to_string(),
            ));
        }

        let intersection_witness = blocks.iter().enumerate().find_map(|(k, &a)| {
            blocks[k + 1..].iter().find_map(|&b| {
                let c = a.intersection(b);
                (!c.is_empty() && !member[c.mask() as usize]).then_some((a, b))
            })
        });

        Ok(Self {
            ground,
            blocks,
            member,
            intersection_witness,
        })
    }

    /// Building set from element-name lists.
    pub fn from_names<S: AsRef<str>>(ground: GroundSet, blocks: &[Vec<S>]) -> Result<Self> {
        let blocks = blocks
            .iter()
            .map(|names| ground.block(names.iter().map(AsRef::as_ref)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(ground, blocks)
    }

    /// All nonempty subsets of `1..=n`.
    pub fn complete(n: usize) -> Result<Self> {
        let ground = GroundSet::numbered(n)?;
        let blocks: Vec<Block> = ground.subsets().collect();
        Self::new(ground, blocks)
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn n(&self) -> usize {
        self.ground.len()
    }

    pub fn full(&self) -> Block {
        self.ground.full()
    }

    /// All blocks in canonical order, including the ground set.
    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    /// Blocks other than the ground set.
    pub fn proper_blocks(&self) -> impl Iterator<Item = Block> + '_ {
        let full = self.full();
        self.blocks.iter().copied().filter(move |&b| b != full)
    }

    pub fn contains(&self, block: Block) -> bool {
        self.member
            .get(block.mask() as usize)
            .copied()
            .unwrap_or(false)
    }

    pub fn fmt_block(&self, block: Block) -> String {
        self.ground.fmt_block(block)
    }

    pub fn is_closed_under_intersection(&self) -> bool {
        self.intersection_witness.is_none()
    }

    /// First pair of blocks (canonical order) meeting outside the building set.
    pub fn intersection_witness(&self) -> Option<(Block, Block)> {
        self.intersection_witness
    }

    fn require_intersection_closed(&self) -> Result<()> {
        match self.intersection_witness {
            None => Ok(()),
            Some((a, b)) => Err(Error::NotIntersectionClosed(
                self.fmt_block(a),
                self.fmt_block(b),
            )),
        }
    }

    /// Inclusion-minimal block containing `r`.
    pub fn hull(&self, r: Block) -> Result<Block> {
        self.require_intersection_closed()?;
        if r.is_empty() {
            return Err(Error::EmptyBlock);
        }
        Ok(self
            .blocks
            .iter()
            .filter(|b| r.is_subset(**b))
            .fold(self.full(), |acc, &b| acc.intersection(b)))
    }

    /// Hull of `{s, t}`.
    pub fn path(&self, s: usize, t: usize) -> Result<Block> {
        self.hull(Block::singleton(s).union(Block::singleton(t)))
    }

    /// Every path `path(s, t)`, deduplicated and sorted.
    pub fn all_paths(&self) -> Result<Vec<Block>> {
        self.require_intersection_closed()?;
        let n = self.n();
        let mut paths = Vec::new();
        for s in 0..n {
            for t in s..n {
                paths.push(self.path(s, t)?);
            }
        }
        paths.sort();
        paths.dedup();
        Ok(paths)
    }

    /// Returns a block `B` and element `x` such that the members of
    /// `summands` lying between `{x}` and `B` do not cover `B`, if any.
    pub fn generating_witness(&self, summands: &[Block]) -> Result<Option<(Block, usize)>> {
        if let Some(&c) = summands.iter().find(|c| !self.contains(**c)) {
            return Err(Error::BlockNotInBuildingSet(self.fmt_block(c)));
        }
        for &block in &self.blocks {
            for x in block.iter() {
                let cover = summands
                    .iter()
                    .filter(|c| c.contains(x) && c.is_subset(block))
                    .fold(Block::EMPTY, |acc, &c| acc.union(c));
                if cover != block {
                    return Ok(Some((block, x)));
                }
            }
        }
        Ok(None)
    }

    pub fn is_generating(&self, summands: &[Block]) -> Result<bool> {
        Ok(self.generating_witness(summands)?.is_none())
    }

    /// Maximal blocks contained in `x`; they partition `x`.
    pub fn components_within(&self, x: Block) -> Vec<Block> {
        let mut parts = Vec::new();
        let mut rest = x;
        while let Some(e) = rest.first() {
            let part = self
                .blocks
                .iter()
                .filter(|b| b.contains(e) && b.is_subset(x))
                .fold(Block::singleton(e), |acc, &b| acc.union(b));
            parts.push(part);
            rest = rest.minus(part);
        }
        parts
    }
}

impl fmt::Debug for BuildingSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set()
            .entries(self.blocks.iter().map(|&b| self.fmt_block(b)))
            .finish()
    }
}

impl PartialEq for BuildingSet {
    fn eq(&self, other: &Self) -> bool {
        self.ground == other.ground && self.blocks == other.blocks
    }
}

impl Eq for BuildingSet {}

/// Simple undirected graph on a ground set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    vertices: GroundSet,
    adjacency: Vec<u32>,
}

impl Graph {
    pub fn new(
        vertices: GroundSet,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let n = vertices.len();
        let mut adjacency = vec![0u32; n];
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!("edge ({u}, {v}) out of range")));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!(
                    "self-loop at `{}`",
                    vertices.name(u)
                )));
            }
            adjacency[u] |= 1 << v;
            adjacency[v] |= 1 << u;
        }
        Ok(Self {
            vertices,
            adjacency,
        })
    }

    pub fn from_names<S: AsRef<str>>(vertices: GroundSet, edges: &[(S, S)]) -> Result<Self> {
        let edges = edges
            .iter()
            .map(|(u, v)| {
                Ok((
                    vertices.index_of(u.as_ref())?,
                    vertices.index_of(v.as_ref())?,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(vertices, edges)
    }

    pub fn path(n: usize) -> Result<Self> {
        Self::new(GroundSet::numbered(n)?, (1..n).map(|i| (i - 1, i)))
    }

    pub fn cycle(n: usize) -> Result<Self> {
        Self::new(GroundSet::numbered(n)?, (0..n).map(|i| (i, (i + 1) % n)))
    }

    pub fn complete(n: usize) -> Result<Self> {
        let edges = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)));
        Self::new(GroundSet::numbered(n)?, edges)
    }

    pub fn vertices(&self) -> &GroundSet {
        &self.vertices
    }

    pub fn n(&self) -> usize {
        self.vertices.len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u] >> v & 1 == 1
    }

    pub fn neighbors(&self, v: usize) -> Block {
        Block::from_mask(self.adjacency[v])
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.n())
            .flat_map(|u| {
                self.neighbors(u)
                    .iter()
                    .filter(move |&v| v > u)
                    .map(move |v| (u, v))
            })
            .collect()
    }

    /// Whether `set` is nonempty and induces a connected subgraph.
    pub fn induces_connected(&self, set: Block) -> bool {
        let Some(start) = set.first() else {
            return false;
        };
        let mut seen = Block::singleton(start);
        let mut frontier = seen;
        while !frontier.is_empty() {
            let reach = frontier
                .iter()
                .fold(Block::EMPTY, |acc, v| acc.union(self.neighbors(v)))
                .intersection(set);
            frontier = reach.minus(seen);
            seen = seen.union(frontier);
        }
        seen == set
    }

    pub fn is_connected(&self) -> bool {
        self.induces_connected(self.vertices.full())
    }

    /// Vertex sets of all connected induced subgraphs.
    pub fn building_set(&self) -> Result<BuildingSet> {
        if !self.is_connected() {
            return Err(Error::NotConnected("graph is disconnected".to_string()));
        }
        let blocks: Vec<Block> = self
            .vertices
            .subsets()
            .filter(|&s| self.induces_connected(s))
            .collect();
        BuildingSet::new(self.vertices.clone(), blocks)
    }

    /// Every cycle induces a clique. Decided through the graphical building
    /// set: the graph is chordful exactly when that set is closed under
    /// intersection.
    pub fn is_chordful(&self) -> Result<bool> {
        Ok(self.building_set()?.is_closed_under_intersection())
    }
}
