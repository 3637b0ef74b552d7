//! Nested sets, B-trees, the nested complex and flips between maximal
//! nested sets.

use std::collections::HashMap;
use std::rc::Rc;

use crate::building::BuildingSet;
use crate::error::{Error, Result};
use crate::set::Block;

/// Largest ground set for which nested complexes are enumerated.
pub const ENUMERATION_LIMIT: usize = 8;

fn require_enumerable(b: &BuildingSet) -> Result<()> {
    if b.n() > ENUMERATION_LIMIT {
        return Err(Error::GroundTooLarge {
            size: b.n(),
            limit: ENUMERATION_LIMIT,
        });
    }
    Ok(())
}

/// A validated nested set. Members are kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NestedSet {
    members: Vec<Block>,
}

impl NestedSet {
    pub fn new(b: &BuildingSet, members: impl IntoIterator<Item = Block>) -> Result<Self> {
        let mut members: Vec<Block> = members.into_iter().collect();
        members.sort();
        members.dedup();
        if let Some(reason) = nested_violation(b, &members)? {
            return Err(Error::NotNested(reason));
        }
        Ok(Self { members })
    }

    pub(crate) fn from_sorted(members: Vec<Block>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        Self { members }
    }

    pub fn empty() -> Self {
        Self {
            members: Vec::new(),
        }
    }

    pub fn members(&self) -> &[Block] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, block: Block) -> bool {
        self.members.binary_search(&block).is_ok()
    }

    /// Maximal nested sets of a connected building set have `n - 1` members.
    pub fn is_maximal_in(&self, b: &BuildingSet) -> bool {
        self.members.len() + 1 == b.n()
    }

    fn without(&self, block: Block) -> Vec<Block> {
        self.members
            .iter()
            .copied()
            .filter(|&m| m != block)
            .collect()
    }

    pub fn fmt(&self, b: &BuildingSet) -> String {
        let parts: Vec<String> = self.members.iter().map(|&m| b.fmt_block(m)).collect();
        format!("{{{}}}", parts.join(","))
    }
}

/// Checks (N1) and (N2) for a candidate family of proper blocks.
pub fn is_nested(b: &BuildingSet, members: &[Block]) -> Result<bool> {
    Ok(nested_violation(b, members)?.is_none())
}

fn nested_violation(b: &BuildingSet, members: &[Block]) -> Result<Option<String>> {
    for &m in members {
        if m == b.full() {
            return Err(Error::GroundSetMember);
        }
        if !b.contains(m) {
            return Err(Error::BlockNotInBuildingSet(b.fmt_block(m)));
        }
    }
    for (i, &x) in members.iter().enumerate() {
        for &y in &members[i + 1..] {
            if !x.nested_or_disjoint(y) {
                return Ok(Some(format!(
                    "{} and {} overlap",
                    b.fmt_block(x),
                    b.fmt_block(y)
                )));
            }
        }
    }
    for (i, &x) in members.iter().enumerate() {
        if let Some(union) = disjoint_union_in(b, x, &members[i + 1..]) {
            return Ok(Some(format!(
                "disjoint members have union {} in the building set",
                b.fmt_block(union)
            )));
        }
    }
    Ok(None)
}

/// Searches for pairwise disjoint members of `others`, at least one, which
/// together with `seed` (disjoint from all of them) form a block.
fn disjoint_union_in(b: &BuildingSet, seed: Block, others: &[Block]) -> Option<Block> {
    fn go(b: &BuildingSet, union: Block, count: usize, rest: &[Block]) -> Option<Block> {
        if count >= 2 && b.contains(union) {
            return Some(union);
        }
        for (i, &y) in rest.iter().enumerate() {
            if y.is_disjoint(union) {
                if let Some(found) = go(b, union.union(y), count + 1, &rest[i + 1..]) {
                    return Some(found);
                }
            }
        }
        None
    }
    let candidates: Vec<Block> = others
        .iter()
        .copied()
        .filter(|y| y.is_disjoint(seed))
        .collect();
    go(b, seed, 1, &candidates)
}

/// Whether `current ∪ {new}` is nested, given that `current` already is.
fn extends(b: &BuildingSet, current: &[Block], new: Block) -> bool {
    current.iter().all(|&m| m.nested_or_disjoint(new))
        && disjoint_union_in(b, new, current).is_none()
}

/// Rooted tree with label sets partitioning the ground set.
///
/// Nodes are indexed by the smallest element of their label, so for a
/// maximal tree node `i` is ground element `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BTree {
    labels: Vec<Block>,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    descendants: Vec<Block>,
    root: usize,
}

impl BTree {
    /// Builds a tree from labels and parent pointers. Nodes are re-indexed
    /// into canonical order.
    pub fn from_parts(labels: Vec<Block>, parent: Vec<Option<usize>>) -> Result<Self> {
        let k = labels.len();
        if parent.len() != k || k == 0 {
            return Err(Error::NotNested("malformed tree".to_string()));
        }
        let mut order: Vec<usize> = (0..k).collect();
        order.sort_by_key(|&v| labels[v].first());
        let mut new_index = vec![0; k];
        for (new, &old) in order.iter().enumerate() {
            new_index[old] = new;
        }
        let labels: Vec<Block> = order.iter().map(|&old| labels[old]).collect();
        let parent: Vec<Option<usize>> = order
            .iter()
            .map(|&old| parent[old].map(|p| new_index[p]))
            .collect();

        let mut children = vec![Vec::new(); k];
        let mut roots = Vec::new();
        for (v, p) in parent.iter().enumerate() {
            match p {
                Some(p) if *p < k && *p != v => children[*p].push(v),
                Some(_) => return Err(Error::NotNested("malformed parent pointer".to_string())),
                None => roots.push(v),
            }
        }
        if roots.len() != 1 {
            return Err(Error::NotNested(
                "tree must have exactly one root".to_string(),
            ));
        }
        let root = roots[0];

        let mut descendants = vec![Block::EMPTY; k];
        let mut visited = 0;
        fn fill(
            v: usize,
            labels: &[Block],
            children: &[Vec<usize>],
            descendants: &mut [Block],
            visited: &mut usize,
        ) -> Block {
            *visited += 1;
            let mut d = labels[v];
            for &c in &children[v] {
                d = d.union(fill(c, labels, children, descendants, visited));
            }
            descendants[v] = d;
            d
        }
        fill(root, &labels, &children, &mut descendants, &mut visited);
        if visited != k {
            return Err(Error::NotNested(
                "parent pointers contain a cycle".to_string(),
            ));
        }
        Ok(Self {
            labels,
            parent,
            children,
            descendants,
            root,
        })
    }

    /// Checks the B-tree conditions against `b`.
    pub fn validate(&self, b: &BuildingSet) -> Result<()> {
        let mut seen = Block::EMPTY;
        for &label in &self.labels {
            if label.is_empty() || label.intersects(seen) {
                return Err(Error::NotNested(
                    "labels do not partition the ground set".into(),
                ));
            }
            seen = seen.union(label);
        }
        if seen != b.full() {
            return Err(Error::NotNested(
                "labels do not partition the ground set".into(),
            ));
        }
        for &d in &self.descendants {
            if !b.contains(d) {
                return Err(Error::NotNested(format!(
                    "descendant set {} is not a block",
                    b.fmt_block(d)
                )));
            }
        }
        NestedSet::new(b, self.nested_members()).map(|_| ())
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn label(&self, v: usize) -> Block {
        self.labels[v]
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    /// Union of the labels of `v` and everything below it.
    pub fn descendants(&self, v: usize) -> Block {
        self.descendants[v]
    }

    pub fn is_maximal(&self) -> bool {
        self.labels.iter().all(|l| l.len() == 1)
    }

    /// Node carrying ground element `e`.
    pub fn node_of(&self, e: usize) -> Option<usize> {
        self.labels.iter().position(|l| l.contains(e))
    }

    fn nested_members(&self) -> Vec<Block> {
        (0..self.len())
            .filter(|&v| v != self.root)
            .map(|v| self.descendants[v])
            .collect()
    }

    /// Descendant sets of all non-root nodes.
    pub fn nested_set(&self) -> NestedSet {
        let mut members = self.nested_members();
        members.sort();
        NestedSet::from_sorted(members)
    }
}

/// Tree whose non-root descendant sets are the members of `n`.
pub fn btree_from_nested(b: &BuildingSet, n: &NestedSet) -> Result<BTree> {
    if let Some(reason) = nested_violation(b, n.members())? {
        return Err(Error::NotNested(reason));
    }
    let full = b.full();
    let mut sets: Vec<Block> = n.members().to_vec();
    sets.push(full);
    // Parent is the smallest strict superset; the family is laminar.
    let parent: Vec<Option<usize>> = sets
        .iter()
        .map(|&x| {
            sets.iter()
                .enumerate()
                .filter(|(_, &y)| x.is_proper_subset(y))
                .min_by_key(|(_, y)| y.len())
                .map(|(i, _)| i)
        })
        .collect();
    let labels: Vec<Block> = sets
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            sets.iter()
                .enumerate()
                .filter(|(j, _)| parent[*j] == Some(i))
                .fold(x, |acc, (_, &c)| acc.minus(c))
        })
        .collect();
    BTree::from_parts(labels, parent)
}

/// Descendant sets of the non-root nodes of `t`.
pub fn nested_from_btree(t: &BTree) -> NestedSet {
    t.nested_set()
}

/// Whether `n` is an inclusion-maximal nested set, decided by trying every
/// proper block.
pub fn is_inclusion_maximal(b: &BuildingSet, n: &NestedSet) -> bool {
    b.proper_blocks()
        .filter(|&c| !n.contains(c))
        .all(|c| !extends(b, n.members(), c))
}

/// The nested complex, or only its facets when `maximal_only` is set, sorted.
pub fn nested_complex(b: &BuildingSet, maximal_only: bool) -> Result<Vec<NestedSet>> {
    require_enumerable(b)?;
    if maximal_only {
        let mut out: Vec<NestedSet> = maximal_btrees(b)?.iter().map(BTree::nested_set).collect();
        out.sort();
        return Ok(out);
    }
    let proper: Vec<Block> = b.proper_blocks().collect();
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn go(
        b: &BuildingSet,
        proper: &[Block],
        start: usize,
        current: &mut Vec<Block>,
        out: &mut Vec<NestedSet>,
    ) {
        out.push(NestedSet::from_sorted(current.clone()));
        for i in start..proper.len() {
            if extends(b, current, proper[i]) {
                current.push(proper[i]);
                go(b, proper, i + 1, current, out);
                current.pop();
            }
        }
    }
    go(b, &proper, 0, &mut current, &mut out);
    out.sort();
    Ok(out)
}

#[derive(Clone)]
struct PartialTree {
    root: usize,
    edges: Vec<(usize, usize)>,
}

/// All maximal B-trees: pick a root in the block, split the rest into its
/// maximal sub-blocks and recurse.
pub fn maximal_btrees(b: &BuildingSet) -> Result<Vec<BTree>> {
    require_enumerable(b)?;
    let mut memo: HashMap<Block, Rc<Vec<PartialTree>>> = HashMap::new();
    fn trees(
        b: &BuildingSet,
        block: Block,
        memo: &mut HashMap<Block, Rc<Vec<PartialTree>>>,
    ) -> Rc<Vec<PartialTree>> {
        if let Some(hit) = memo.get(&block) {
            return hit.clone();
        }
        let mut out = Vec::new();
        for r in block.iter() {
            let parts = b.components_within(block.minus(Block::singleton(r)));
            let mut combos = vec![PartialTree {
                root: r,
                edges: Vec::new(),
            }];
            for part in parts {
                let subtrees = trees(b, part, memo);
                let mut next = Vec::with_capacity(combos.len() * subtrees.len());
                for combo in &combos {
                    for sub in subtrees.iter() {
                        let mut edges = combo.edges.clone();
                        edges.extend_from_slice(&sub.edges);
                        edges.push((sub.root, r));
                        next.push(PartialTree { root: r, edges });
                    }
                }
                combos = next;
            }
            out.extend(combos);
        }
        let out = Rc::new(out);
        memo.insert(block, out.clone());
        out
    }
    let n = b.n();
    let mut result = Vec::new();
    for partial in trees(b, b.full(), &mut memo).iter() {
        let mut parent = vec![None; n];
        for &(child, p) in &partial.edges {
            parent[child] = Some(p);
        }
        let labels = (0..n).map(Block::singleton).collect();
        result.push(BTree::from_parts(labels, parent)?);
    }
    result.sort_by_cached_key(BTree::nested_set);
    Ok(result)
}

/// The unique flip of a maximal nested set at `removed`, found by trying
/// every block outside `n`.
pub fn flip(b: &BuildingSet, n: &NestedSet, removed: Block) -> Result<(NestedSet, Block)> {
    if !n.is_maximal_in(b) {
        return Err(Error::NotMaximal);
    }
    if !n.contains(removed) {
        return Err(Error::NotNested(format!(
            "{} is not a member of {}",
            b.fmt_block(removed),
            n.fmt(b)
        )));
    }
    let rest = n.without(removed);
    let mut found = None;
    for candidate in b.proper_blocks() {
        if candidate == removed || n.contains(candidate) || !extends(b, &rest, candidate) {
            continue;
        }
        if found.is_some() {
            return Err(Error::MultipleFlipsFound(b.fmt_block(removed)));
        }
        found = Some(candidate);
    }
    let added = found.ok_or_else(|| Error::NoFlipFound(b.fmt_block(removed)))?;
    let mut members = rest;
    members.push(added);
    members.sort();
    Ok((NestedSet::from_sorted(members), added))
}

/// Edge of the flip graph between two maximal nested sets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Flip {
    /// Index of the smaller nested set.
    pub from: usize,
    pub to: usize,
    /// Member of `from` missing from `to`.
    pub removed: Block,
    /// Member of `to` missing from `from`.
    pub added: Block,
}

/// Maximal B-trees (sorted by nested set) and every flip between them.
#[derive(Clone, Debug)]
pub struct FlipGraph {
    pub trees: Vec<BTree>,
    pub nested: Vec<NestedSet>,
    pub flips: Vec<Flip>,
}

impl FlipGraph {
    /// Groups maximal nested sets by their codimension-one faces; every
    /// such face must lie in exactly two of them.
    pub fn new(b: &BuildingSet) -> Result<Self> {
        let trees = maximal_btrees(b)?;
        let nested: Vec<NestedSet> = trees.iter().map(BTree::nested_set).collect();
        let mut ridges: HashMap<Vec<Block>, Vec<(usize, Block)>> = HashMap::new();
        for (i, n) in nested.iter().enumerate() {
            for &m in n.members() {
                ridges.entry(n.without(m)).or_default().push((i, m));
            }
        }
        let mut flips = Vec::with_capacity(ridges.len());
        for sides in ridges.values() {
            match sides.as_slice() {
                [(i, x), (j, y)] => {
                    let (from, removed, to, added) = if i < j {
                        (*i, *x, *j, *y)
                    } else {
                        (*j, *y, *i, *x)
                    };
                    flips.push(Flip {
                        from,
                        to,
                        removed,
                        added,
                    });
                }
                [(_, x)] => return Err(Error::NoFlipFound(b.fmt_block(*x))),
                [(_, x), ..] => return Err(Error::MultipleFlipsFound(b.fmt_block(*x))),
                [] => unreachable!("ridge entries are created non-empty"),
            }
        }
        flips.sort();
        Ok(Self {
            trees,
            nested,
            flips,
        })
    }

    pub fn is_connected(&self) -> bool {
        let k = self.nested.len();
        if k == 0 {
            return true;
        }
        let mut adjacency = vec![Vec::new(); k];
        for f in &self.flips {
            adjacency[f.from].push(f.to);
            adjacency[f.to].push(f.from);
        }
        let mut seen = vec![false; k];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &w in &adjacency[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

/// Children of the contracted node of a flip, with their subtree sizes.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ChildClass {
    pub members: Vec<usize>,
    pub sizes: Vec<u64>,
}

impl ChildClass {
    /// Sum of subtree sizes.
    pub fn delta(&self) -> u64 {
        self.sizes.iter().sum()
    }

    /// Sum of products of subtree sizes over unordered pairs of members.
    pub fn pi(&self) -> u64 {
        let mut total = 0;
        for (i, &a) in self.sizes.iter().enumerate() {
            for &b in &self.sizes[i + 1..] {
                total += a * b;
            }
        }
        total
    }

    fn push(&mut self, member: usize, size: u64) {
        self.members.push(member);
        self.sizes.push(size);
    }
}

/// Local picture of a flip between adjacent maximal trees `t` and `t'`:
/// `s` is a child of `s'` in `t` and its parent in `t'`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlipContext {
    pub s: usize,
    pub s_prime: usize,
    /// `D(s, t)`, the member of `N(t)` that the flip removes.
    pub removed: Block,
    /// `D(s', t')`, the member it adds.
    pub added: Block,
    /// Children of `s` in both trees.
    pub stay_s: ChildClass,
    /// Children of `s'` in both trees.
    pub stay_s_prime: ChildClass,
    /// Children of `s` in `t` and of `s'` in `t'`.
    pub moved_to_s_prime: ChildClass,
    /// Children of `s'` in `t` and of `s` in `t'`.
    pub moved_to_s: ChildClass,
}

pub fn flip_context(t: &BTree, t2: &BTree) -> Result<FlipContext> {
    if !t.is_maximal() || !t2.is_maximal() {
        return Err(Error::NotMaximal);
    }
    let (n, n2) = (t.nested_set(), t2.nested_set());
    if n.len() != n2.len() {
        return Err(Error::NotAdjacent);
    }
    let removed: Vec<Block> = n
        .members()
        .iter()
        .copied()
        .filter(|&m| !n2.contains(m))
        .collect();
    let added: Vec<Block> = n2
        .members()
        .iter()
        .copied()
        .filter(|&m| !n.contains(m))
        .collect();
    let ([removed], [added]) = (removed.as_slice(), added.as_slice()) else {
        return Err(Error::NotAdjacent);
    };
    let s = (0..t.len())
        .find(|&v| v != t.root() && t.descendants(v) == *removed)
        .ok_or(Error::NotAdjacent)?;
    let s_prime = (0..t2.len())
        .find(|&v| v != t2.root() && t2.descendants(v) == *added)
        .ok_or(Error::NotAdjacent)?;
    if t.parent(s) != Some(s_prime) || t2.parent(s_prime) != Some(s) {
        return Err(Error::NotAdjacent);
    }

    let mut ctx = FlipContext {
        s,
        s_prime,
        removed: *removed,
        added: *added,
        stay_s: ChildClass::default(),
        stay_s_prime: ChildClass::default(),
        moved_to_s_prime: ChildClass::default(),
        moved_to_s: ChildClass::default(),
    };
    let mut kids: Vec<usize> = t
        .children(s)
        .iter()
        .chain(t.children(s_prime))
        .copied()
        .filter(|&x| x != s)
        .collect();
    kids.sort_unstable();
    let mut kids2: Vec<usize> = t2
        .children(s)
        .iter()
        .chain(t2.children(s_prime))
        .copied()
        .filter(|&x| x != s_prime)
        .collect();
    kids2.sort_unstable();
    if kids != kids2 {
        return Err(Error::NotAdjacent);
    }
    for x in kids {
        let size = t.descendants(x).len() as u64;
        if t2.descendants(x).len() as u64 != size {
            return Err(Error::NotAdjacent);
        }
        let class = match (t.parent(x) == Some(s), t2.parent(x) == Some(s)) {
            (true, true) => &mut ctx.stay_s,
            (false, false) => &mut ctx.stay_s_prime,
            (true, false) => &mut ctx.moved_to_s_prime,
            (false, true) => &mut ctx.moved_to_s,
        };
        class.push(x, size);
    }
    Ok(ctx)
}

/// Unordered pairs `{B, B'}` exchanged by some flip, each as `(min, max)`.
pub fn exchangeable_pairs(b: &BuildingSet) -> Result<Vec<(Block, Block)>> {
    let graph = FlipGraph::new(b)?;
    let mut pairs: Vec<(Block, Block)> = graph
        .flips
        .iter()
        .map(|f| (f.removed.min(f.added), f.removed.max(f.added)))
        .collect();
    pairs.sort();
    pairs.dedup();
    Ok(pairs)
}

/// First exchangeable pair whose intersection is nonempty and not a block.
pub fn exchangeable_closure_witness(b: &BuildingSet) -> Result<Option<(Block, Block)>> {
    Ok(exchangeable_pairs(b)?.into_iter().find(|&(x, y)| {
        let c = x.intersection(y);
        !c.is_empty() && !b.contains(c)
    }))
}

/// Every exchangeable pair meets in a block or not at all.
pub fn exchangeable_closure_holds(b: &BuildingSet) -> Result<bool> {
    Ok(exchangeable_closure_witness(b)?.is_none())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::building::Graph;
    use crate::fixtures;

    fn blk(b: &BuildingSet, xs: &[&str]) -> Block {
        b.ground().block(xs.iter().copied()).unwrap()
    }

    fn ns(b: &BuildingSet, sets: &[&[&str]]) -> NestedSet {
        NestedSet::new(b, sets.iter().map(|xs| blk(b, xs))).unwrap()
    }

    #[test]
    fn nestedness_examples() {
        let b0 = fixtures::b0();
        assert!(!is_nested(&b0, &[blk(&b0, &["1"]), blk(&b0, &["2"])]).unwrap());
        let b3 = fixtures::b3();
        assert!(!is_nested(
            &b3,
            &[blk(&b3, &["1", "2", "3"]), blk(&b3, &["1", "3", "4", "5"])]
        )
        .unwrap());
        let p3 = fixtures::path(3);
        assert!(is_nested(&p3, &[blk(&p3, &["1"]), blk(&p3, &["3"])]).unwrap());
        assert_eq!(is_nested(&p3, &[p3.full()]), Err(Error::GroundSetMember));
        assert!(matches!(
            is_nested(&p3, &[Block::from_indices([0, 2])]),
            Err(Error::BlockNotInBuildingSet(_))
        ));
    }

    #[test]
    fn three_disjoint_members_checked() {
        // No two of {1},{2},{3} union to a block of B3, but all three do.
        let b3 = fixtures::b3();
        let pair_ok = is_nested(&b3, &[blk(&b3, &["1"]), blk(&b3, &["2"])]).unwrap();
        assert!(pair_ok);
        let triple =
            is_nested(&b3, &[blk(&b3, &["1"]), blk(&b3, &["2"]), blk(&b3, &["3"])]).unwrap();
        assert!(!triple);
    }

    #[test]
    fn complex_sizes() {
        let p3 = fixtures::path(3);
        assert_eq!(nested_complex(&p3, true).unwrap().len(), 5);
        let k3 = BuildingSet::complete(3).unwrap();
        assert_eq!(nested_complex(&k3, true).unwrap().len(), 6);
        let single = BuildingSet::complete(1).unwrap();
        assert_eq!(
            nested_complex(&single, false).unwrap(),
            vec![NestedSet::empty()]
        );
        assert_eq!(
            nested_complex(&single, true).unwrap(),
            vec![NestedSet::empty()]
        );
        // Pentagon: 5 vertices, 5 edges, one 2-face.
        assert_eq!(nested_complex(&p3, false).unwrap().len(), 11);
    }

    #[test]
    fn maximal_enumerations_agree() {
        for (name, b) in fixtures::all() {
            let all = nested_complex(&b, false).unwrap();
            let facets: Vec<NestedSet> = all
                .iter()
                .filter(|n| is_inclusion_maximal(&b, n))
                .cloned()
                .collect();
            assert!(facets.iter().all(|n| n.is_maximal_in(&b)), "{name}");
            assert_eq!(facets, nested_complex(&b, true).unwrap(), "{name}");
        }
    }

    #[test]
    fn tree_conversions() {
        let p3 = fixtures::path(3);
        let chain = btree_from_nested(&p3, &ns(&p3, &[&["1"], &["1", "2"]])).unwrap();
        assert_eq!(chain.root(), 2);
        assert_eq!(chain.parent(1), Some(2));
        assert_eq!(chain.parent(0), Some(1));
        assert_eq!(chain.descendants(1), blk(&p3, &["1", "2"]));

        let cherry = btree_from_nested(&p3, &ns(&p3, &[&["1"], &["3"]])).unwrap();
        assert_eq!(cherry.root(), 1);
        assert_eq!(cherry.children(1), &[0, 2]);
        assert_eq!(nested_from_btree(&cherry), ns(&p3, &[&["1"], &["3"]]));

        // Non-maximal: label sets need not be singletons.
        let coarse = btree_from_nested(&p3, &ns(&p3, &[&["1", "2"]])).unwrap();
        assert_eq!(coarse.len(), 2);
        assert!(!coarse.is_maximal());
        assert_eq!(coarse.label(coarse.root()), blk(&p3, &["3"]));
        assert!(coarse.validate(&p3).is_ok());
    }

    #[test]
    fn round_trips() {
        for (name, b) in fixtures::all() {
            for n in nested_complex(&b, false).unwrap() {
                let t = btree_from_nested(&b, &n).unwrap();
                t.validate(&b).unwrap();
                assert_eq!(nested_from_btree(&t), n, "{name}");
            }
            for t in maximal_btrees(&b).unwrap() {
                assert_eq!(btree_from_nested(&b, &t.nested_set()).unwrap(), t, "{name}");
            }
        }
    }

    #[test]
    fn flip_examples() {
        let p3 = fixtures::path(3);
        let n = ns(&p3, &[&["1"], &["1", "2"]]);
        let (n2, added) = flip(&p3, &n, blk(&p3, &["1", "2"])).unwrap();
        assert_eq!(n2, ns(&p3, &[&["1"], &["3"]]));
        assert_eq!(added, blk(&p3, &["3"]));
        let (n3, added) = flip(&p3, &n, blk(&p3, &["1"])).unwrap();
        assert_eq!(n3, ns(&p3, &[&["2"], &["1", "2"]]));
        assert_eq!(added, blk(&p3, &["2"]));
        assert_eq!(
            flip(&p3, &n2, blk(&p3, &["3"])).unwrap(),
            (n.clone(), blk(&p3, &["1", "2"]))
        );

        assert_eq!(
            flip(&p3, &ns(&p3, &[&["1"]]), blk(&p3, &["1"])),
            Err(Error::NotMaximal)
        );
        assert!(matches!(
            flip(&p3, &n, blk(&p3, &["3"])),
            Err(Error::NotNested(_))
        ));
    }

    #[test]
    fn flip_search_matches_ridge_grouping() {
        for (name, b) in fixtures::all() {
            let graph = FlipGraph::new(&b).unwrap();
            assert!(graph.is_connected(), "{name}");
            for f in &graph.flips {
                let (n2, added) = flip(&b, &graph.nested[f.from], f.removed).unwrap();
                assert_eq!(n2, graph.nested[f.to], "{name}");
                assert_eq!(added, f.added, "{name}");
                // Involution.
                let (back, removed) = flip(&b, &n2, added).unwrap();
                assert_eq!(back, graph.nested[f.from]);
                assert_eq!(removed, f.removed);
            }
            let expected_flips = graph.nested.len() * (b.n() - 1) / 2;
            assert_eq!(graph.flips.len(), expected_flips, "{name}");
        }
    }

    #[test]
    fn flip_context_examples() {
        let p3 = fixtures::path(3);
        let t = btree_from_nested(&p3, &ns(&p3, &[&["1"], &["1", "2"]])).unwrap();
        let t2 = btree_from_nested(&p3, &ns(&p3, &[&["1"], &["3"]])).unwrap();
        let ctx = flip_context(&t, &t2).unwrap();
        assert_eq!((ctx.s, ctx.s_prime), (1, 2));
        assert_eq!(ctx.stay_s.members, vec![0]);
        assert_eq!(ctx.stay_s.delta(), 1);
        assert!(ctx.stay_s_prime.members.is_empty());
        assert!(ctx.moved_to_s_prime.members.is_empty());
        assert!(ctx.moved_to_s.members.is_empty());

        let k3 = BuildingSet::complete(3).unwrap();
        let t = btree_from_nested(&k3, &ns(&k3, &[&["1"], &["1", "2"]])).unwrap();
        let t2 = btree_from_nested(&k3, &ns(&k3, &[&["2"], &["1", "2"]])).unwrap();
        let ctx = flip_context(&t, &t2).unwrap();
        assert_eq!((ctx.s, ctx.s_prime), (0, 1));
        assert_eq!(ctx.stay_s, ChildClass::default());
        assert_eq!(ctx.stay_s_prime, ChildClass::default());
        assert_eq!(ctx.moved_to_s, ChildClass::default());
        assert_eq!(ctx.moved_to_s_prime, ChildClass::default());

        assert_eq!(flip_context(&t, &t), Err(Error::NotAdjacent));
        let far = btree_from_nested(&k3, &ns(&k3, &[&["3"], &["2", "3"]])).unwrap();
        assert_eq!(flip_context(&t, &far), Err(Error::NotAdjacent));
    }

    #[test]
    fn flip_context_symmetry() {
        for (name, b) in fixtures::all() {
            let graph = FlipGraph::new(&b).unwrap();
            for f in &graph.flips {
                let (t, t2) = (&graph.trees[f.from], &graph.trees[f.to]);
                let fwd = flip_context(t, t2).unwrap();
                let back = flip_context(t2, t).unwrap();
                assert_eq!(fwd.s, back.s_prime, "{name}");
                assert_eq!(fwd.s_prime, back.s, "{name}");
                assert_eq!(fwd.stay_s, back.stay_s_prime, "{name}");
                assert_eq!(fwd.stay_s_prime, back.stay_s, "{name}");
                assert_eq!(fwd.moved_to_s, back.moved_to_s, "{name}");
                assert_eq!(fwd.moved_to_s_prime, back.moved_to_s_prime, "{name}");
                assert_eq!(t.parent(fwd.s), Some(fwd.s_prime));
                assert_eq!(t.descendants(fwd.s), fwd.removed);
            }
        }
    }

    #[test]
    fn exchangeable_examples() {
        let b4 = fixtures::b4();
        let pairs = exchangeable_pairs(&b4).unwrap();
        let big = blk(&b4, &["1", "2", "3", "4"]);
        let small = blk(&b4, &["3", "4", "5"]);
        assert!(pairs.contains(&(big.min(small), big.max(small))));
        assert!(!exchangeable_closure_holds(&b4).unwrap());
        // {1,2,3} and {1,3,4,5} swap across the ridge {{1},{3},{4}}, and
        // they meet in {1,3}, which is not a block.
        let b3 = fixtures::b3();
        assert_eq!(
            exchangeable_closure_witness(&b3).unwrap(),
            Some((blk(&b3, &["1", "2", "3"]), blk(&b3, &["1", "3", "4", "5"])))
        );
        let ridge = ns(&b3, &[&["1"], &["3"], &["4"]]);
        let mut with_small = ridge.members().to_vec();
        with_small.push(blk(&b3, &["1", "2", "3"]));
        let mut with_big = ridge.members().to_vec();
        with_big.push(blk(&b3, &["1", "3", "4", "5"]));
        assert!(NestedSet::new(&b3, with_small).unwrap().is_maximal_in(&b3));
        assert!(NestedSet::new(&b3, with_big).unwrap().is_maximal_in(&b3));

        let k2 = BuildingSet::complete(2).unwrap();
        assert_eq!(
            exchangeable_pairs(&k2).unwrap(),
            vec![(Block::singleton(0), Block::singleton(1))]
        );
    }

    #[test]
    fn graphical_nested_is_pairwise() {
        for g in [
            Graph::cycle(5).unwrap(),
            Graph::path(4).unwrap(),
            Graph::complete(4).unwrap(),
        ] {
            let b = g.building_set().unwrap();
            let proper: Vec<Block> = b.proper_blocks().collect();
            // All families of up to three blocks.
            for i in 0..proper.len() {
                for j in i..proper.len() {
                    for k in j..proper.len() {
                        let mut fam = vec![proper[i], proper[j], proper[k]];
                        fam.sort();
                        fam.dedup();
                        let pairwise = fam.iter().enumerate().all(|(x, &p)| {
                            fam[x + 1..].iter().all(|&q| {
                                p.is_subset(q) || q.is_subset(p) || !b.contains(p.union(q))
                            })
                        });
                        assert_eq!(is_nested(&b, &fam).unwrap(), pairwise, "{fam:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn too_large_for_enumeration() {
        let b = BuildingSet::complete(9).unwrap();
        assert!(matches!(
            nested_complex(&b, true),
            Err(Error::GroundTooLarge { .. })
        ));
    }
}
