//! Ground sets and blocks.
//!
//! A [`Block`] is a subset of the ground set stored as a bitmask over ground
//! indices. Ground sets are small (at most [`MAX_GROUND`] elements) so every
//! set operation is a single machine-word operation.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// Largest ground set accepted anywhere in the crate.
pub const MAX_GROUND: usize = 12;

/// Ordered list of distinct element names. The order fixes coordinate order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroundSet {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl GroundSet {
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(Error::EmptyGround);
        }
        if names.len() > MAX_GROUND {
            return Err(Error::GroundTooLarge {
                size: names.len(),
                limit: MAX_GROUND,
            });
        }
        let mut index = HashMap::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::DuplicateElement(name.clone()));
            }
        }
        Ok(Self { names, index })
    }

    /// Ground set `1, 2, ..., n`.
    pub fn numbered(n: usize) -> Result<Self> {
        Self::new((1..=n).map(|i| i.to_string()))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownElement(name.to_string()))
    }

    pub fn full(&self) -> Block {
        Block::full(self.len())
    }

    /// Block from element names; fails on unknown names or an empty list.
    pub fn block<I, S>(&self, names: I) -> Result<Block>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut mask = 0u32;
        for name in names {
            mask |= 1 << self.index_of(name.as_ref())?;
        }
        if mask == 0 {
            return Err(Error::EmptyBlock);
        }
        Ok(Block(mask))
    }

    pub fn block_names(&self, block: Block) -> Vec<String> {
        block.iter().map(|i| self.names[i].clone()).collect()
    }

    /// Renders a block as `{a,b,c}` with element names.
    pub fn fmt_block(&self, block: Block) -> String {
        format!("{{{}}}", self.block_names(block).join(","))
    }

    /// Iterates over every nonempty subset of the ground set.
    pub fn subsets(&self) -> impl Iterator<Item = Block> {
        (1u32..(1u32 << self.len())).map(Block)
    }
}

/// A subset of the ground set, stored as a bitmask over ground indices.
///
/// Blocks order lexicographically by their sorted member lists, so
/// `{1} < {1,2} < {1,2,3} < {1,3} < {2}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Block(u32);

impl Block {
    pub const EMPTY: Block = Block(0);

    pub fn from_mask(mask: u32) -> Self {
        Block(mask)
    }

    pub fn full(n: usize) -> Self {
        Block(((1u64 << n) - 1) as u32)
    }

    pub fn singleton(i: usize) -> Self {
        Block(1 << i)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        Block(indices.into_iter().fold(0, |m, i| m | (1 << i)))
    }

    pub fn mask(self) -> u32 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn is_subset(self, other: Block) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_proper_subset(self, other: Block) -> bool {
        self != other && self.is_subset(other)
    }

    pub fn intersects(self, other: Block) -> bool {
        self.0 & other.0 != 0
    }

    pub fn is_disjoint(self, other: Block) -> bool {
        !self.intersects(other)
    }

    pub fn union(self, other: Block) -> Block {
        Block(self.0 | other.0)
    }

    pub fn intersection(self, other: Block) -> Block {
        Block(self.0 & other.0)
    }

    pub fn minus(self, other: Block) -> Block {
        Block(self.0 & !other.0)
    }

    /// Smallest member index.
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    /// Member indices in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let i = rest.trailing_zeros();
                rest &= rest - 1;
                Some(i as usize)
            }
        })
    }

    /// Nested sets and trees are only ever compared as
    /// "either nested or disjoint"; this is the (N1) relation.
    pub fn nested_or_disjoint(self, other: Block) -> bool {
        self.is_subset(other) || other.is_subset(self) || self.is_disjoint(other)
    }
}

impl Ord for Block {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b) = (self.0, other.0);
        if a == b {
            return Ordering::Equal;
        }
        let i = (a ^ b).trailing_zeros();
        let above = if i >= 31 { 0 } else { u32::MAX << (i + 1) };
        // Both lists agree below element i; exactly one of them contains i.
        if a >> i & 1 == 1 {
            if b & above == 0 {
                Ordering::Greater
            } else {
                Ordering::Less
            }
        } else if a & above == 0 {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }
}

impl PartialOrd for Block {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", i + 1)?;
        }
        f.write_str("}")
    }
}
