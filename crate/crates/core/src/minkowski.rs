//! Minkowski sums of dilated simplex faces `sum_C y_C * Delta_C`, their
//! right-hand sides `z_R = sum_{C subset of R} y_C`, and the faces indexed by
//! nested sets.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use crate::building::BuildingSet;
use crate::error::{Error, Result};
use crate::geometry::HPolytope;
use crate::nested::{is_nested, NestedSet};
use crate::oracle::normal_fan_matches;
use crate::rational::{self, Rational, RationalPoint};
use crate::set::{Block, GroundSet};

/// Nonnegative dilation coefficients, one per summand simplex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinkowskiWeights {
    ground: GroundSet,
    weights: BTreeMap<Block, Rational>,
}

impl MinkowskiWeights {
    /// Zero weights are dropped; negative weights and blocks outside the
    /// ground set are rejected.
    pub fn new(
        ground: GroundSet,
        weights: impl IntoIterator<Item = (Block, Rational)>,
    ) -> Result<Self> {
        let full = ground.full();
        let mut map: BTreeMap<Block, Rational> = BTreeMap::new();
        for (block, y) in weights {
            if block.is_empty() {
                return Err(Error::EmptyBlock);
            }
            if !block.is_subset(full) {
                return Err(Error::UnknownElement(format!("{block:?}")));
            }
            if y.is_negative() {
                return Err(Error::CrossCheckFailed(format!(
                    "negative weight {} on {}",
                    rational::format(&y),
                    ground.fmt_block(block)
                )));
            }
            *map.entry(block).or_insert_with(Rational::zero) += y;
        }
        map.retain(|_, y| !y.is_zero());
        if map.is_empty() {
            return Err(Error::CrossCheckFailed("all weights are zero".into()));
        }
        Ok(Self {
            ground,
            weights: map,
        })
    }

    /// Weight one on every listed block.
    pub fn unit(ground: GroundSet, blocks: impl IntoIterator<Item = Block>) -> Result<Self> {
        Self::new(ground, blocks.into_iter().map(|b| (b, Rational::one())))
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn get(&self, block: Block) -> Rational {
        self.weights
            .get(&block)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Blocks with positive weight, in block order.
    pub fn support(&self) -> Vec<Block> {
        self.weights.keys().copied().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Block, &Rational)> {
        self.weights.iter().map(|(b, y)| (*b, y))
    }

    /// Summands largest first, then in block order.
    pub fn summands(&self) -> Vec<(Block, Rational)> {
        let mut out: Vec<(Block, Rational)> = self.iter().map(|(b, y)| (b, y.clone())).collect();
        out.sort_by(|a, b| b.0.len().cmp(&a.0.len()).then(a.0.cmp(&b.0)));
        out
    }

    /// Renders the sum as `2 Δ{1,2,3} + Δ{1,2} + ...`.
    pub fn decomposition(&self) -> String {
        self.summands()
            .iter()
            .map(|(block, y)| {
                let name = format!("Δ{}", self.ground.fmt_block(*block));
                if y.is_one() {
                    name
                } else {
                    format!("{} {name}", rational::format(y))
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// `y_S` = number of unordered pairs `{s, t}` (with `s = t` allowed) whose
/// path is `S`.
pub fn canonical_weights(b: &BuildingSet) -> Result<MinkowskiWeights> {
    let mut pairs = Vec::new();
    for s in 0..b.n() {
        for t in s..b.n() {
            pairs.push((b.path(s, t)?, Rational::one()));
        }
    }
    MinkowskiWeights::new(b.ground().clone(), pairs)
}

/// Right-hand sides `z_R` indexed by the bitmask of `R`, with `z_{} = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeformationRHS {
    ground: GroundSet,
    z: Vec<Rational>,
}

impl DeformationRHS {
    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn z(&self, r: Block) -> &Rational {
        &self.z[r.mask() as usize]
    }

    /// Supermodularity, checked on the local exchanges
    /// `z(R+i) + z(R+j) <= z(R+i+j) + z(R)`, which imply the global form.
    pub fn is_supermodular(&self) -> bool {
        let n = self.ground.len();
        (0..1u32 << n).all(|r| {
            (0..n).filter(|&i| r >> i & 1 == 0).all(|i| {
                (i + 1..n).filter(|&j| r >> j & 1 == 0).all(|j| {
                    let (ri, rj) = (r | 1 << i, r | 1 << j);
                    let z = |m: u32| &self.z[m as usize];
                    z(ri) + z(rj) <= z(ri | 1 << j) + z(r)
                })
            })
        })
    }
}

pub fn weights_to_rhs(w: &MinkowskiWeights) -> DeformationRHS {
    let n = w.ground.len();
    let mut z = vec![Rational::zero(); 1 << n];
    for (c, y) in w.iter() {
        // Add y to every superset of c.
        let rest = Block::full(n).minus(c).mask();
        let mut sub = rest;
        loop {
            z[(sub | c.mask()) as usize] += y;
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
    }
    DeformationRHS {
        ground: w.ground.clone(),
        z,
    }
}

/// `{x : sum(x) = z_ground, sum_R x >= z_R}` for proper `R` with `z_R > 0`.
/// Singletons are always kept, so the description stays exact when some
/// `z_s` vanishes.
pub fn defo_hrep(z: &DeformationRHS) -> HPolytope {
    let ground = z.ground.clone();
    let full = ground.full();
    let constraints = ground
        .subsets()
        .filter(|&r| r != full)
        .filter(|&r| r.len() == 1 || z.z(r).is_positive())
        .map(|r| (r, z.z(r).clone()))
        .collect();
    HPolytope {
        sum: z.z(full).clone(),
        ground,
        constraints,
    }
}

/// Vertex of the Minkowski sum maximizing `f`: the sum of `y_C e_c` where
/// `c` is the unique maximizer of `f` on `C`.
pub fn minkowski_vertex(w: &MinkowskiWeights, f: &RationalPoint) -> Result<RationalPoint> {
    let mut x = RationalPoint::zero(w.ground.len());
    for (c, y) in w.iter() {
        let best = c
            .iter()
            .map(|i| &f.coords()[i])
            .max()
            .expect("nonempty block");
        let mut argmax = c.iter().filter(|&i| f.coords()[i] == *best);
        let i = argmax.next().expect("maximum is attained");
        if argmax.next().is_some() {
            return Err(Error::NonGenericFunctional(w.ground.fmt_block(c)));
        }
        x.0[i] += y;
    }
    Ok(x)
}

/// The face `F_n = sum_C y_C * Delta_{C ∩ X_{N(C)}}` of a nested set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NestedFace {
    /// `(C, y_C, C ∩ X_{N(C)})` for every summand.
    pub summands: Vec<(Block, Rational, Block)>,
    pub dimension: usize,
}

/// Dimension of `sum_i Delta_{A_i}`: each connected component of the
/// hypergraph with edges `A_i` contributes its size minus one.
pub fn simplex_sum_dimension(faces: &[Block], n: usize) -> usize {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        parent[x] = r;
        r
    }
    let mut touched = Block::EMPTY;
    let mut dim = 0;
    for face in faces {
        touched = touched.union(*face);
        let mut it = face.iter();
        let Some(first) = it.next() else { continue };
        for e in it {
            let (a, b) = (find(&mut parent, first), find(&mut parent, e));
            if a != b {
                parent[a] = b;
                dim += 1;
            }
        }
    }
    dim
}

pub fn face_of_nested(b: &BuildingSet, w: &MinkowskiWeights, n: &NestedSet) -> Result<NestedFace> {
    if !is_nested(b, n.members())? {
        return Err(Error::NotNested(n.fmt(b)));
    }
    let support = w.support();
    if let Some((block, x)) = b.generating_witness(&support)? {
        return Err(Error::NotGenerating {
            block: b.fmt_block(block),
            element: b.ground().name(x).to_string(),
        });
    }
    let mut members: Vec<Block> = n.members().to_vec();
    members.push(b.full());
    let label = |m: Block| {
        members
            .iter()
            .filter(|o| o.is_proper_subset(m))
            .fold(m, |acc, &o| acc.minus(o))
    };
    let summands: Vec<(Block, Rational, Block)> = w
        .iter()
        .map(|(c, y)| {
            let owner = members
                .iter()
                .copied()
                .filter(|m| c.is_subset(*m))
                .min_by_key(|m| m.len())
                .expect("the ground set contains every summand");
            (c, y.clone(), c.intersection(label(owner)))
        })
        .collect();
    let faces: Vec<Block> = summands.iter().map(|s| s.2).collect();
    Ok(NestedFace {
        dimension: simplex_sum_dimension(&faces, b.n()),
        summands,
    })
}

/// Whether the Minkowski sum of `w` has the nested fan of `b` as its
/// normal fan, decided by the vertex-enumeration oracle.
pub fn mink_realizes_fan(b: &BuildingSet, w: &MinkowskiWeights) -> Result<bool> {
    if let Some(c) = w.support().into_iter().find(|c| !b.contains(*c)) {
        return Err(Error::BlockNotInBuildingSet(b.fmt_block(c)));
    }
    normal_fan_matches(b, &defo_hrep(&weights_to_rhs(w)))
}
