//! Path-counting vertices, the flip coefficient and removahedron
//! realizability, together with the skew (`gamma^k`) variant.
//!
//! Everything here is exact. A maximal B-tree `t` gives the point `p(t)`
//! whose coordinate at `s` counts the tree paths (including the trivial
//! one) whose topmost vertex is `s`. Across a flip `t -> t'` the points
//! differ by `delta(t, t') * (e_s - e_s')`, and the removahedron realizes
//! the nested fan exactly when every such coefficient is positive.

use num_traits::{One, Zero};

use crate::building::BuildingSet;
use crate::error::{Error, Result};
use crate::nested::{flip_context, BTree, FlipContext, FlipGraph, NestedSet};
use crate::rational::{self, int, pairs_with_repetition, pow, Rational, RationalPoint};
use crate::set::{Block, GroundSet};

/// `{x : sum(x) = sum, sum_{s in B} x_s >= rhs for every constraint (B, rhs)}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HPolytope {
    pub ground: GroundSet,
    pub sum: Rational,
    pub constraints: Vec<(Block, Rational)>,
}

impl HPolytope {
    pub fn n(&self) -> usize {
        self.ground.len()
    }

    pub fn contains(&self, x: &RationalPoint) -> bool {
        x.sum() == self.sum
            && self
                .constraints
                .iter()
                .all(|(block, rhs)| block_sum(x, *block) >= *rhs)
    }
}

pub fn block_sum(x: &RationalPoint, block: Block) -> Rational {
    block
        .iter()
        .fold(Rational::zero(), |acc, i| acc + &x.coords()[i])
}

fn hrep_with(b: &BuildingSet, rhs: impl Fn(usize) -> Rational) -> HPolytope {
    HPolytope {
        ground: b.ground().clone(),
        sum: rhs(b.n()),
        constraints: b
            .proper_blocks()
            .map(|block| (block, rhs(block.len())))
            .collect(),
    }
}

/// `sum_{s in B} x_s >= |B|(|B|+1)/2` for every proper block, on the
/// hyperplane `sum x = n(n+1)/2`.
pub fn removahedron_hrep(b: &BuildingSet) -> HPolytope {
    hrep_with(b, |k| int(pairs_with_repetition(k)))
}

/// Number of tree paths with topmost vertex `v`, for every node.
fn path_counts(t: &BTree) -> Vec<i64> {
    (0..t.len())
        .map(|v| {
            let sizes: Vec<i64> = t
                .children(v)
                .iter()
                .map(|&c| t.descendants(c).len() as i64)
                .collect();
            let mut count = 1 + sizes.iter().sum::<i64>();
            for (i, a) in sizes.iter().enumerate() {
                for b in &sizes[i + 1..] {
                    count += a * b;
                }
            }
            count
        })
        .collect()
}

/// The vertex `p(t)` of a maximal B-tree.
pub fn btree_point(t: &BTree) -> Result<RationalPoint> {
    if !t.is_maximal() {
        return Err(Error::NotMaximal);
    }
    Ok(RationalPoint::from_ints(path_counts(t)))
}

/// The flip coefficient read off the local picture of a flip.
pub fn delta_formula(ctx: &FlipContext) -> i64 {
    let d_s = ctx.stay_s.delta() as i64;
    let d_sp = ctx.stay_s_prime.delta() as i64;
    let d_r = ctx.moved_to_s_prime.delta() as i64;
    let d_rp = ctx.moved_to_s.delta() as i64;
    let pi_r = ctx.moved_to_s_prime.pi() as i64;
    let pi_rp = ctx.moved_to_s.pi() as i64;
    (d_s + 1) * (d_sp + 1) + d_rp * (d_s + d_sp + d_r + 2) + pi_rp - pi_r
}

/// Checks `q' - q = coefficient * (e_s - e_s')`.
fn check_difference(
    ctx: &FlipContext,
    q: &RationalPoint,
    q2: &RationalPoint,
    coefficient: &Rational,
) -> Result<()> {
    let diff = q2 - q;
    for (i, d) in diff.coords().iter().enumerate() {
        let expected = if i == ctx.s {
            coefficient.clone()
        } else if i == ctx.s_prime {
            -coefficient.clone()
        } else {
            Rational::zero()
        };
        if *d != expected {
            return Err(Error::CrossCheckFailed(format!(
                "point difference {diff:?} is not {} * (e_{} - e_{})",
                rational::format(coefficient),
                ctx.s + 1,
                ctx.s_prime + 1
            )));
        }
    }
    Ok(())
}

/// `delta(t, t')`, evaluated from the flip classification and checked
/// against `p(t') - p(t)`.
pub fn delta(t: &BTree, t2: &BTree) -> Result<i64> {
    let ctx = flip_context(t, t2)?;
    let value = delta_formula(&ctx);
    check_difference(&ctx, &btree_point(t)?, &btree_point(t2)?, &int(value))?;
    Ok(value)
}

/// The normal direction `sum_{N in n} 1bar_N` of a nested set, where
/// `1bar_R` projects the indicator of `R` onto the sum-zero hyperplane.
pub fn cone_functional(n_ground: usize, n: &NestedSet) -> RationalPoint {
    let total = Rational::from_integer(n_ground.into());
    let mut f = RationalPoint::zero(n_ground);
    for &member in n.members() {
        let shift = Rational::from_integer(member.len().into()) / &total;
        for (i, x) in f.0.iter_mut().enumerate() {
            if member.contains(i) {
                *x += Rational::one();
            }
            *x -= &shift;
        }
    }
    f
}

/// A functional in the relative interior of the maximal cone of `n`.
pub fn interior_functional(b: &BuildingSet, n: &NestedSet) -> Result<RationalPoint> {
    if !n.is_maximal_in(b) {
        return Err(Error::NotMaximal);
    }
    Ok(cone_functional(b.n(), n))
}

/// Vertex of a maximal tree with its nested set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeVertex {
    pub tree: BTree,
    pub nested: NestedSet,
    pub point: RationalPoint,
}

/// A flip whose coefficient is not positive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlipCertificate {
    pub from: NestedSet,
    pub to: NestedSet,
    pub context: FlipContext,
    pub delta: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decision {
    /// One vertex per maximal nested set, in nested-set order.
    Realizable(Vec<TreeVertex>),
    /// Every failing flip, smallest pair of nested sets first.
    NotRealizable(Vec<FlipCertificate>),
}

impl Decision {
    pub fn is_realizable(&self) -> bool {
        matches!(self, Decision::Realizable(_))
    }
}

/// Local picture and coefficient of one checked flip.
pub(crate) struct ScannedFlip {
    pub context: FlipContext,
    pub delta: Rational,
}

fn scan<P, D>(b: &BuildingSet, point: P, coefficient: D, stop_early: bool) -> Result<Decision>
where
    P: Fn(&BTree) -> Result<RationalPoint>,
    D: Fn(&FlipContext) -> Rational,
{
    let graph = FlipGraph::new(b)?;
    let points = graph.trees.iter().map(&point).collect::<Result<Vec<_>>>()?;
    let mut failures = Vec::new();
    for f in &graph.flips {
        let scanned = scan_flip(&graph, &points, f.from, f.to, &coefficient)?;
        if scanned.delta <= Rational::zero() {
            failures.push(FlipCertificate {
                from: graph.nested[f.from].clone(),
                to: graph.nested[f.to].clone(),
                context: scanned.context,
                delta: scanned.delta,
            });
            if stop_early {
                break;
            }
        }
    }
    if !failures.is_empty() {
        return Ok(Decision::NotRealizable(failures));
    }
    let vertices = graph
        .trees
        .into_iter()
        .zip(graph.nested)
        .zip(points)
        .map(|((tree, nested), point)| TreeVertex {
            tree,
            nested,
            point,
        })
        .collect();
    Ok(Decision::Realizable(vertices))
}

fn scan_flip<D>(
    graph: &FlipGraph,
    points: &[RationalPoint],
    from: usize,
    to: usize,
    coefficient: &D,
) -> Result<ScannedFlip>
where
    D: Fn(&FlipContext) -> Rational,
{
    let context = flip_context(&graph.trees[from], &graph.trees[to])?;
    let delta = coefficient(&context);
    check_difference(&context, &points[from], &points[to], &delta)?;
    Ok(ScannedFlip { context, delta })
}

/// Decides whether the removahedron realizes the nested fan, scanning
/// every flip once. Failing flips are all reported.
pub fn is_removahedron_realizable(b: &BuildingSet) -> Result<Decision> {
    scan(b, btree_point, |ctx| int(delta_formula(ctx)), false)
}

/// Like [`is_removahedron_realizable`] but stops at the first failing flip.
pub fn removahedron_realizable(b: &BuildingSet) -> Result<bool> {
    Ok(scan(b, btree_point, |ctx| int(delta_formula(ctx)), true)?.is_realizable())
}

/// Base of the skew right-hand sides `gamma^|B|`; always greater than 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkewParams {
    gamma: Rational,
}

impl SkewParams {
    pub fn new(gamma: Rational) -> Result<Self> {
        if gamma <= int(2) {
            return Err(Error::GammaTooSmall(rational::format(&gamma)));
        }
        Ok(Self { gamma })
    }

    pub fn gamma(&self) -> &Rational {
        &self.gamma
    }

    fn power(&self, k: usize) -> Rational {
        pow(&self.gamma, k)
    }
}

/// Solves `sum_{r in D(s)} x_r = gamma^|D(s)|` leaf-up: each coordinate is
/// `gamma^|D(s)|` minus the children's `gamma^|D(c)|`.
pub fn skew_point(t: &BTree, params: &SkewParams) -> Result<RationalPoint> {
    if !t.is_maximal() {
        return Err(Error::NotMaximal);
    }
    Ok(RationalPoint(
        (0..t.len())
            .map(|v| {
                t.children(v)
                    .iter()
                    .fold(params.power(t.descendants(v).len()), |acc, &c| {
                        acc - params.power(t.descendants(c).len())
                    })
            })
            .collect(),
    ))
}

pub fn skew_delta_formula(ctx: &FlipContext, params: &SkewParams) -> Rational {
    let d_s = ctx.stay_s.delta() as usize;
    let d_sp = ctx.stay_s_prime.delta() as usize;
    let d_r = ctx.moved_to_s_prime.delta() as usize;
    let d_rp = ctx.moved_to_s.delta() as usize;
    let big_gamma = |sizes: &[u64]| {
        sizes
            .iter()
            .fold(Rational::zero(), |acc, &k| acc + params.power(k as usize))
    };
    params.power(2 + d_s + d_rp + d_sp + d_r)
        - params.power(1 + d_sp + d_r)
        - params.power(1 + d_s + d_r)
        + big_gamma(&ctx.moved_to_s_prime.sizes)
        - big_gamma(&ctx.moved_to_s.sizes)
}

/// Skew flip coefficient, checked against the skew point difference.
pub fn skew_delta(t: &BTree, t2: &BTree, params: &SkewParams) -> Result<Rational> {
    let ctx = flip_context(t, t2)?;
    let value = skew_delta_formula(&ctx, params);
    check_difference(
        &ctx,
        &skew_point(t, params)?,
        &skew_point(t2, params)?,
        &value,
    )?;
    Ok(value)
}

/// `sum_{s in B} x_s >= gamma^|B|` on `sum x = gamma^n`.
pub fn skew_removahedron_hrep(b: &BuildingSet, params: &SkewParams) -> HPolytope {
    hrep_with(b, |k| params.power(k))
}

pub fn skew_realizability(b: &BuildingSet, params: &SkewParams) -> Result<Decision> {
    scan(
        b,
        |t| skew_point(t, params),
        |ctx| skew_delta_formula(ctx, params),
        false,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::nested::{btree_from_nested, maximal_btrees};

    fn tree(b: &BuildingSet, sets: &[&[&str]]) -> BTree {
        let n = NestedSet::new(
            b,
            sets.iter()
                .map(|xs| b.ground().block(xs.iter().copied()).unwrap()),
        )
        .unwrap();
        btree_from_nested(b, &n).unwrap()
    }

    /// Counts pairs `{u, v}` (u = v allowed) by their lowest common ancestor.
    fn brute_force_point(t: &BTree) -> Vec<i64> {
        let ancestors = |mut v: usize| {
            let mut chain = vec![v];
            while let Some(p) = t.parent(v) {
                chain.push(p);
                v = p;
            }
            chain
        };
        let mut counts = vec![0; t.len()];
        for u in 0..t.len() {
            for v in u..t.len() {
                let au = ancestors(u);
                let av = ancestors(v);
                let top = *au.iter().find(|a| av.contains(a)).unwrap();
                counts[top] += 1;
            }
        }
        counts
    }

    #[test]
    fn triangle_points() {
        let b5 = fixtures::b5_prime();
        let chain = tree(&b5, &[&["1"], &["1", "2"]]);
        assert_eq!(
            btree_point(&chain).unwrap(),
            RationalPoint::from_ints([1, 2, 3])
        );
        let root1 = tree(&b5, &[&["2"], &["3"]]);
        assert_eq!(root1.root(), 0);
        assert_eq!(
            btree_point(&root1).unwrap(),
            RationalPoint::from_ints([4, 1, 1])
        );
        let single = maximal_btrees(&BuildingSet::complete(1).unwrap()).unwrap();
        assert_eq!(
            btree_point(&single[0]).unwrap(),
            RationalPoint::from_ints([1])
        );
    }

    #[test]
    fn points_match_brute_force_counts() {
        for (name, b) in fixtures::all() {
            for t in maximal_btrees(&b).unwrap() {
                let p = btree_point(&t).unwrap();
                assert_eq!(p, RationalPoint::from_ints(brute_force_point(&t)), "{name}");
            }
        }
    }

    #[test]
    fn point_requires_maximal_tree() {
        let p3 = fixtures::path(3);
        let coarse = tree(&p3, &[&["1", "2"]]);
        assert_eq!(btree_point(&coarse), Err(Error::NotMaximal));
    }

    #[test]
    fn hrep_values() {
        let b0 = removahedron_hrep(&fixtures::b0());
        assert_eq!(b0.sum, int(10));
        let g = fixtures::b0().ground().clone();
        let pair = b0
            .constraints
            .iter()
            .find(|(blk, _)| *blk == g.block(["1", "2"]).unwrap())
            .unwrap();
        assert_eq!(pair.1, int(3));
        assert_eq!(b0.constraints.len(), 14);

        let b5 = removahedron_hrep(&fixtures::b5_prime());
        assert_eq!(b5.sum, int(6));
        let rendered: Vec<(String, i64)> = b5
            .constraints
            .iter()
            .map(|(blk, rhs)| {
                (
                    b5.ground.fmt_block(*blk),
                    rhs.to_integer().try_into().unwrap(),
                )
            })
            .collect();
        assert_eq!(
            rendered,
            vec![
                ("{1}".into(), 1),
                ("{1,2}".into(), 3),
                ("{2}".into(), 1),
                ("{3}".into(), 1)
            ]
        );
    }

    #[test]
    fn delta_examples() {
        let p3 = fixtures::path(3);
        let t = tree(&p3, &[&["1"], &["1", "2"]]);
        let t2 = tree(&p3, &[&["1"], &["3"]]);
        assert_eq!(delta(&t, &t2).unwrap(), 2);
        assert_eq!(delta(&t2, &t).unwrap(), 2);

        let k3 = BuildingSet::complete(3).unwrap();
        let t = tree(&k3, &[&["1"], &["1", "2"]]);
        let t2 = tree(&k3, &[&["2"], &["1", "2"]]);
        assert_eq!(delta(&t, &t2).unwrap(), 1);
    }

    #[test]
    fn cycle_has_a_non_positive_flip() {
        let c4 = fixtures::cycle(4);
        let graph = FlipGraph::new(&c4).unwrap();
        let deltas: Vec<i64> = graph
            .flips
            .iter()
            .map(|f| delta(&graph.trees[f.from], &graph.trees[f.to]).unwrap())
            .collect();
        assert!(deltas.contains(&0));
        // The failing flip has two moved subtrees of size one.
        let Decision::NotRealizable(certs) = is_removahedron_realizable(&c4).unwrap() else {
            panic!("C4 is realizable");
        };
        let zero = certs.iter().find(|c| c.delta == int(0)).unwrap();
        assert_eq!(zero.context.moved_to_s_prime.members.len(), 2);
        assert_eq!(zero.context.moved_to_s_prime.pi(), 1);
        assert!(zero.context.stay_s.members.is_empty());
        assert!(zero.context.stay_s_prime.members.is_empty());
        assert!(zero.context.moved_to_s.members.is_empty());
    }

    #[test]
    fn realizability_examples() {
        assert!(!is_removahedron_realizable(&fixtures::b1())
            .unwrap()
            .is_realizable());
        assert!(is_removahedron_realizable(&fixtures::b2())
            .unwrap()
            .is_realizable());
        assert!(is_removahedron_realizable(&fixtures::b3())
            .unwrap()
            .is_realizable());
        assert!(removahedron_realizable(&fixtures::b4()).unwrap());
        assert!(!removahedron_realizable(&fixtures::cycle(5)).unwrap());
    }

    #[test]
    fn interior_functionals() {
        let b5 = fixtures::b5_prime();
        let g = b5.ground().clone();
        let n =
            NestedSet::new(&b5, [g.block(["1"]).unwrap(), g.block(["1", "2"]).unwrap()]).unwrap();
        assert_eq!(
            interior_functional(&b5, &n).unwrap(),
            RationalPoint::from_ints([1, 0, -1])
        );
        let k2 = BuildingSet::complete(2).unwrap();
        let n = NestedSet::new(&k2, [Block::singleton(0)]).unwrap();
        let f = interior_functional(&k2, &n).unwrap();
        assert_eq!(f.to_strings(), vec!["1/2", "-1/2"]);
        assert_eq!(
            interior_functional(&b5, &NestedSet::empty()),
            Err(Error::NotMaximal)
        );
        for (_, b) in fixtures::all() {
            for n in crate::nested::nested_complex(&b, true).unwrap() {
                assert_eq!(interior_functional(&b, &n).unwrap().sum(), int(0));
            }
        }
    }

    #[test]
    fn skew_examples() {
        let three = SkewParams::new(int(3)).unwrap();
        let single = maximal_btrees(&BuildingSet::complete(1).unwrap()).unwrap();
        assert_eq!(
            skew_point(&single[0], &three).unwrap(),
            RationalPoint::from_ints([3])
        );
        let k3 = BuildingSet::complete(3).unwrap();
        let chain = tree(&k3, &[&["1"], &["1", "2"]]);
        assert_eq!(
            skew_point(&chain, &three).unwrap(),
            RationalPoint::from_ints([3, 6, 18])
        );
        let other = tree(&k3, &[&["2"], &["1", "2"]]);
        assert_eq!(skew_delta(&chain, &other, &three).unwrap(), int(3));

        assert!(matches!(
            SkewParams::new(int(2)),
            Err(Error::GammaTooSmall(_))
        ));
        assert!(SkewParams::new(rational::parse("5/2").unwrap()).is_ok());
    }

    #[test]
    fn skew_segment_hrep() {
        let k2 = BuildingSet::complete(2).unwrap();
        let p = skew_removahedron_hrep(&k2, &SkewParams::new(int(3)).unwrap());
        assert_eq!(p.sum, int(9));
        assert!(p.constraints.iter().all(|(_, rhs)| *rhs == int(3)));
        assert!(p.contains(&RationalPoint::from_ints([3, 6])));
        assert!(p.contains(&RationalPoint::from_ints([6, 3])));
        assert!(!p.contains(&RationalPoint::from_ints([2, 7])));
    }

    #[test]
    fn skew_subtree_sums() {
        let params = SkewParams::new(rational::parse("5/2").unwrap()).unwrap();
        for (name, b) in fixtures::all() {
            for t in maximal_btrees(&b).unwrap() {
                let p = skew_point(&t, &params).unwrap();
                for v in 0..t.len() {
                    let d = t.descendants(v);
                    assert_eq!(block_sum(&p, d), pow(params.gamma(), d.len()), "{name}");
                }
            }
        }
    }
}
