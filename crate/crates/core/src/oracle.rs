//! Brute-force exact vertex enumeration for polytopes of the form
//! `{x : sum(x) = c, sum_{s in B} x_s >= z_B}`.
//!
//! Every vertex is the unique solution of the sum equation together with
//! `n - 1` tight constraints whose normals are independent. The search walks
//! all such constraint subsets depth-first, keeping the chosen rows in
//! fraction-free reduced echelon form (every pivot equals the current
//! determinant), so each leaf costs one row reduction and one feasibility
//! sweep. Nothing here shares code with the combinatorial side of the crate.

#![allow(clippy::needless_range_loop)]

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::building::BuildingSet;
use crate::error::{Error, Result};
use crate::geometry::{block_sum, cone_functional, HPolytope};
use crate::nested::{nested_complex, NestedSet};
use crate::rational::{affine_dimension, Rational, RationalPoint};

/// Hard limit on the ground set size for vertex enumeration.
pub const ORACLE_LIMIT: usize = 8;

const MAX_N: usize = ORACLE_LIMIT;
const WIDTH: usize = MAX_N + 1;
/// Scaled right-hand sides must stay below this so that every minor fits
/// comfortably in an `i128`.
const RHS_BOUND: i128 = 1 << 60;

/// Vertices of a polytope with the constraints tight at each of them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexSet {
    /// Sorted.
    pub vertices: Vec<RationalPoint>,
    /// Indices into the polytope's constraint list, per vertex.
    pub incidence: Vec<Vec<usize>>,
}

impl VertexSet {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Indices of the vertices minimizing `<f, x>`.
    pub fn argmin(&self, f: &RationalPoint) -> Vec<usize> {
        let values: Vec<Rational> = self.vertices.iter().map(|v| f.dot(v)).collect();
        let Some(best) = values.iter().min() else {
            return Vec::new();
        };
        (0..values.len()).filter(|&i| values[i] == *best).collect()
    }

    /// Constraint sets that define facets of a polytope of dimension `dim`,
    /// each given by the vertices on it. Constraints defining the same facet
    /// are merged.
    pub fn facets(&self, dim: usize) -> Vec<Vec<usize>> {
        let constraints = self
            .incidence
            .iter()
            .flatten()
            .copied()
            .max()
            .map_or(0, |m| m + 1);
        let mut facets: Vec<Vec<usize>> = Vec::new();
        for c in 0..constraints {
            let on: Vec<usize> = (0..self.len())
                .filter(|&v| self.incidence[v].contains(&c))
                .collect();
            let points: Vec<&RationalPoint> = on.iter().map(|&v| &self.vertices[v]).collect();
            if dim >= 1 && affine_dimension(&points) == Some(dim - 1) && !facets.contains(&on) {
                facets.push(on);
            }
        }
        facets
    }

    /// First vertex lying on a number of facets other than `dim`.
    pub fn non_simple_vertex(&self, dim: usize) -> Option<usize> {
        let facets = self.facets(dim);
        (0..self.len()).find(|&v| facets.iter().filter(|f| f.contains(&v)).count() != dim)
    }

    pub fn is_simple(&self, dim: usize) -> bool {
        self.non_simple_vertex(dim).is_none()
    }
}

/// Integer form of a polytope: everything multiplied by a common denominator.
struct Scaled {
    n: usize,
    scale: BigInt,
    sum: i128,
    masks: Vec<u32>,
    rhs: Vec<i128>,
    /// Constraint indices, smallest blocks first, for early rejection.
    check_order: Vec<usize>,
}

impl Scaled {
    fn new(p: &HPolytope) -> Result<Self> {
        let denominator = p
            .constraints
            .iter()
            .map(|(_, r)| r.denom().clone())
            .fold(p.sum.denom().clone(), |acc, d| acc.lcm(&d));
        let scale = |r: &Rational| -> Result<i128> {
            let v: BigInt = r.numer() * (&denominator / r.denom());
            v.to_i128()
                .filter(|v| v.abs() < RHS_BOUND)
                .ok_or(Error::Overflow)
        };
        let mut check_order: Vec<usize> = (0..p.constraints.len()).collect();
        check_order.sort_by_key(|&i| p.constraints[i].0.len());
        Ok(Self {
            n: p.n(),
            scale: denominator.clone(),
            sum: scale(&p.sum)?,
            masks: p.constraints.iter().map(|(b, _)| b.mask()).collect(),
            rhs: p
                .constraints
                .iter()
                .map(|(_, r)| scale(r))
                .collect::<Result<_>>()?,
            check_order,
        })
    }

    fn row(&self, i: usize) -> [i128; WIDTH] {
        let mut row = [0; WIDTH];
        for (j, entry) in row.iter_mut().enumerate().take(self.n) {
            *entry = i128::from(self.masks[i] >> j & 1);
        }
        row[self.n] = self.rhs[i];
        row
    }

    fn homogeneous_row(&self, i: usize) -> [i128; WIDTH] {
        let mut row = self.row(i);
        row[self.n] = 0;
        row
    }
}

/// Rows in reduced echelon form, all pivots equal to `det`.
#[derive(Clone, Copy)]
struct Echelon {
    rows: [[i128; WIDTH]; MAX_N],
    pivots: [usize; MAX_N],
    len: usize,
    det: i128,
}

impl Echelon {
    fn start(n: usize, sum: i128) -> Self {
        let mut rows = [[0; WIDTH]; MAX_N];
        rows[0][..n].fill(1);
        rows[0][n] = sum;
        Self {
            rows,
            pivots: [0; MAX_N],
            len: 1,
            det: 1,
        }
    }

    /// Eliminates the pivot columns from `row`; `None` if it becomes zero on
    /// the coefficient part. Returns the reduced row and its pivot column,
    /// pivot made positive.
    fn reduce(&self, n: usize, row: &[i128; WIDTH]) -> Option<([i128; WIDTH], usize)> {
        let mut r = [0; WIDTH];
        for j in 0..=n {
            r[j] = self.det * row[j];
        }
        for k in 0..self.len {
            let factor = row[self.pivots[k]];
            if factor != 0 {
                for j in 0..=n {
                    r[j] -= factor * self.rows[k][j];
                }
            }
        }
        let pc = (0..n).find(|&j| r[j] != 0)?;
        if r[pc] < 0 {
            for x in r.iter_mut().take(n + 1) {
                *x = -*x;
            }
        }
        Some((r, pc))
    }

    fn push(&self, n: usize, r: [i128; WIDTH], pc: usize) -> Echelon {
        let mut next = *self;
        let new_det = r[pc];
        for k in 0..self.len {
            let factor = self.rows[k][pc];
            for j in 0..=n {
                let v = new_det * self.rows[k][j] - factor * r[j];
                debug_assert_eq!(v % self.det, 0);
                next.rows[k][j] = v / self.det;
            }
        }
        next.rows[self.len] = r;
        next.pivots[self.len] = pc;
        next.len += 1;
        next.det = new_det;
        next
    }

    fn add(&self, n: usize, row: &[i128; WIDTH]) -> Option<Echelon> {
        let (r, pc) = self.reduce(n, row)?;
        Some(self.push(n, r, pc))
    }
}

/// Walks all independent constraint subsets that bring the echelon form to
/// `target` rows and hands each to `leaf` with the next unused index.
fn search<R, L>(
    scaled: &Scaled,
    state: &Echelon,
    start: usize,
    target: usize,
    row_of: &R,
    leaf: &mut L,
) where
    R: Fn(usize) -> [i128; WIDTH],
    L: FnMut(&Echelon, usize),
{
    if state.len == target {
        leaf(state, start);
        return;
    }
    let needed = target - state.len;
    let m = scaled.masks.len();
    for i in start..m {
        if m - i < needed {
            break;
        }
        if let Some(next) = state.add(scaled.n, &row_of(i)) {
            search(scaled, &next, i + 1, target, row_of, leaf);
        }
    }
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Fails with `Unbounded` when the recession cone
/// `{y : sum(y) = 0, <a_i, y> >= 0}` is not `{0}`.
fn check_bounded(scaled: &Scaled) -> Result<()> {
    let n = scaled.n;
    if n == 1 {
        return Ok(());
    }
    // A line in the recession cone: the normals do not span.
    let mut span = Echelon::start(n, 0);
    for i in 0..scaled.masks.len() {
        if let Some(next) = span.add(n, &scaled.homogeneous_row(i)) {
            span = next;
        }
    }
    if span.len < n {
        return Err(Error::Unbounded);
    }
    // Pointed cone: any nonzero cone has an extreme ray cut out by the sum
    // equation and n - 2 independent tight constraints.
    let mut ray_found = false;
    let mut leaf = |state: &Echelon, _: usize| {
        if ray_found {
            return;
        }
        let free = (0..n)
            .find(|j| !state.pivots[..state.len].contains(j))
            .expect("one free column");
        let mut y = [0i128; MAX_N];
        y[free] = state.det;
        for k in 0..state.len {
            y[state.pivots[k]] = -state.rows[k][free];
        }
        for sign in [1, -1] {
            let ok = scaled.masks.iter().all(|&mask| {
                let dot: i128 = (0..n).filter(|j| mask >> j & 1 == 1).map(|j| y[j]).sum();
                sign * dot >= 0
            });
            if ok {
                ray_found = true;
            }
        }
    };
    let start = Echelon::start(n, 0);
    search(
        scaled,
        &start,
        0,
        n - 1,
        &|i| scaled.homogeneous_row(i),
        &mut leaf,
    );
    if ray_found {
        return Err(Error::Unbounded);
    }
    Ok(())
}

/// Number of constraint subsets the vertex search may visit, `C(m, n - 1)`
/// for `m` constraints; callers use it to skip hopeless instances.
pub fn search_size(p: &HPolytope) -> u128 {
    let (m, k) = (p.constraints.len() as u128, p.n().saturating_sub(1) as u128);
    if k > m {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (m - i) / (i + 1))
}

/// Exact vertex set of `p`, with incidences.
pub fn enumerate_vertices(p: &HPolytope) -> Result<VertexSet> {
    let n = p.n();
    if n > ORACLE_LIMIT {
        return Err(Error::GroundTooLarge {
            size: n,
            limit: ORACLE_LIMIT,
        });
    }
    let scaled = Scaled::new(p)?;
    check_bounded(&scaled)?;

    let mut keys: HashSet<Vec<i128>> = HashSet::new();
    let mut leaf = |state: &Echelon, start: usize| {
        for i in start..scaled.masks.len() {
            let Some((r, pc)) = state.reduce(n, &scaled.row(i)) else {
                continue;
            };
            // Solve without committing the row: x = coords / denominator.
            let denominator = r[pc];
            let mut coords = [0i128; MAX_N];
            coords[pc] = r[n];
            for k in 0..state.len {
                let v = denominator * state.rows[k][n] - state.rows[k][pc] * r[n];
                debug_assert_eq!(v % state.det, 0);
                coords[state.pivots[k]] = v / state.det;
            }
            let feasible = scaled.check_order.iter().all(|&c| {
                let mask = scaled.masks[c];
                let lhs: i128 = (0..n)
                    .filter(|j| mask >> j & 1 == 1)
                    .map(|j| coords[j])
                    .sum();
                lhs >= scaled.rhs[c] * denominator
            });
            if feasible {
                let g = coords[..n].iter().fold(denominator, |g, &x| gcd(g, x));
                let mut key: Vec<i128> = coords[..n].iter().map(|x| x / g).collect();
                key.push(denominator / g);
                keys.insert(key);
            }
        }
    };
    if n == 1 {
        keys.insert(vec![scaled.sum, 1]);
    } else {
        let start = Echelon::start(n, scaled.sum);
        search(&scaled, &start, 0, n - 1, &|i| scaled.row(i), &mut leaf);
    }

    // Undo the scaling; every vertex is re-checked in exact arithmetic.
    let mut vertices: Vec<RationalPoint> = keys
        .into_iter()
        .map(|key| {
            let den = BigInt::from(key[n]) * &scaled.scale;
            RationalPoint(
                key[..n]
                    .iter()
                    .map(|&x| Rational::new(BigInt::from(x), den.clone()))
                    .collect(),
            )
        })
        .collect();
    vertices.retain(|v| p.contains(v));
    vertices.sort();
    vertices.dedup();
    if vertices.is_empty() {
        return Err(Error::Empty);
    }
    let incidence: Vec<Vec<usize>> = vertices
        .iter()
        .map(|v| {
            (0..p.constraints.len())
                .filter(|&i| block_sum(v, p.constraints[i].0) == p.constraints[i].1)
                .collect()
        })
        .collect();
    Ok(VertexSet {
        vertices,
        incidence,
    })
}

/// Vertices of `p` minimizing `<f, x>`.
pub fn minimize(p: &HPolytope, f: &RationalPoint) -> Result<Vec<RationalPoint>> {
    let vs = enumerate_vertices(p)?;
    Ok(vs
        .argmin(f)
        .into_iter()
        .map(|i| vs.vertices[i].clone())
        .collect())
}

/// Equality of polytopes, decided on their exact vertex sets.
pub fn polytopes_equal(p1: &HPolytope, p2: &HPolytope) -> Result<bool> {
    if p1.ground != p2.ground {
        return Ok(false);
    }
    Ok(enumerate_vertices(p1)?.vertices == enumerate_vertices(p2)?.vertices)
}

/// Why a polytope does or does not have the nested fan as its normal fan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FanReport {
    pub vertices: usize,
    pub maximal_nested_sets: usize,
    /// Maximal nested sets whose interior functional has several minimizers.
    pub ties: Vec<NestedSet>,
    /// Pairs of maximal nested sets sent to the same vertex.
    pub collisions: Vec<(NestedSet, NestedSet)>,
}

impl FanReport {
    pub fn matches(&self) -> bool {
        self.vertices == self.maximal_nested_sets
            && self.ties.is_empty()
            && self.collisions.is_empty()
    }
}

pub fn normal_fan_report(b: &BuildingSet, p: &HPolytope) -> Result<FanReport> {
    let vs = enumerate_vertices(p)?;
    let maximal = nested_complex(b, true)?;
    let mut ties = Vec::new();
    let mut owner: Vec<Option<usize>> = vec![None; vs.len()];
    let mut collisions = Vec::new();
    for (k, n) in maximal.iter().enumerate() {
        match vs.argmin(&cone_functional(b.n(), n))[..] {
            [v] => match owner[v] {
                Some(first) => collisions.push((maximal[first].clone(), n.clone())),
                None => owner[v] = Some(k),
            },
            _ => ties.push(n.clone()),
        }
    }
    Ok(FanReport {
        vertices: vs.len(),
        maximal_nested_sets: maximal.len(),
        ties,
        collisions,
    })
}

/// True when `p` has one vertex per maximal nested set of `b`, each the
/// unique minimizer of a functional inside the corresponding cone.
pub fn normal_fan_matches(b: &BuildingSet, p: &HPolytope) -> Result<bool> {
    Ok(normal_fan_report(b, p)?.matches())
}
