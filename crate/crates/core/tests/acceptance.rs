//! End-to-end acceptance suite. Each criterion prints one PASS/FAIL line;
//! the test fails unless every criterion passes or fails in exactly the way
//! recorded in `KNOWN_FAILURES`.

use std::io::Write;
use std::time::Instant;

use num_traits::Zero;

use removahedra::building::{BuildingSet, Graph};
use removahedra::corpus;
use removahedra::fixtures;
use removahedra::geometry::{
    btree_point, delta_formula, is_removahedron_realizable, removahedron_hrep,
    removahedron_realizable, skew_realizability, skew_removahedron_hrep, Decision, FlipCertificate,
    SkewParams,
};
use removahedra::minkowski::{
    canonical_weights, defo_hrep, mink_realizes_fan, weights_to_rhs, MinkowskiWeights,
};
use removahedra::nested::{
    btree_from_nested, exchangeable_closure_holds, exchangeable_closure_witness, flip_context,
    nested_complex, FlipGraph,
};
use removahedra::oracle::{enumerate_vertices, normal_fan_matches, polytopes_equal};
use removahedra::rational::{int, Rational};
use removahedra::{Block, RationalPoint};

type Outcome = Result<String, String>;
type Criterion<'a> = Box<dyn Fn() -> Outcome + 'a>;

/// Criteria that cannot hold as stated, with the reason the suite expects.
const KNOWN_FAILURES: &[(usize, &str)] = &[(
    5,
    "exchangeable closure fails: {1,2,3} and {1,3,4,5} are exchangeable and meet in {1,3}",
)];

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn blk(xs: &[usize]) -> Block {
    Block::from_indices(xs.iter().map(|x| x - 1))
}

fn points(list: &[&[i64]]) -> Vec<RationalPoint> {
    let mut v: Vec<RationalPoint> = list
        .iter()
        .map(|p| RationalPoint::from_ints(p.iter().copied()))
        .collect();
    v.sort();
    v
}

fn permutations(n: i64) -> Vec<RationalPoint> {
    let mut out = Vec::new();
    let mut perm: Vec<i64> = (1..=n).collect();
    // Heap's algorithm.
    fn heap(k: usize, perm: &mut Vec<i64>, out: &mut Vec<RationalPoint>) {
        if k <= 1 {
            out.push(RationalPoint::from_ints(perm.iter().copied()));
            return;
        }
        for i in 0..k {
            heap(k - 1, perm, out);
            let j = if k.is_multiple_of(2) { i } else { 0 };
            perm.swap(j, k - 1);
        }
    }
    let len = perm.len();
    heap(len, &mut perm, &mut out);
    out.sort();
    out.dedup();
    out
}

/// Nested-set axioms checked from scratch: members pairwise nested or
/// disjoint, and no union of two or more pairwise disjoint members is a block.
fn brute_nested(b: &BuildingSet, family: &[Block]) -> bool {
    for (i, &x) in family.iter().enumerate() {
        for &y in &family[i + 1..] {
            if !(x.is_subset(y) || y.is_subset(x) || x.is_disjoint(y)) {
                return false;
            }
        }
    }
    for mask in 1u32..1 << family.len() {
        if mask.count_ones() < 2 {
            continue;
        }
        let chosen: Vec<Block> = (0..family.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| family[i])
            .collect();
        let disjoint = chosen
            .iter()
            .enumerate()
            .all(|(i, x)| chosen[i + 1..].iter().all(|y| x.is_disjoint(*y)));
        if disjoint && b.contains(chosen.iter().fold(Block::EMPTY, |acc, x| acc.union(*x))) {
            return false;
        }
    }
    true
}

/// Number of `(n-1)`-subsets of proper blocks that are nested.
fn brute_maximal_count(b: &BuildingSet) -> usize {
    let proper: Vec<Block> = b.proper_blocks().collect();
    let k = b.n() - 1;
    let mut count = 0;
    let mut stack: Vec<usize> = Vec::new();
    fn go(
        b: &BuildingSet,
        proper: &[Block],
        k: usize,
        start: usize,
        stack: &mut Vec<usize>,
        count: &mut usize,
    ) {
        let family: Vec<Block> = stack.iter().map(|&i| proper[i]).collect();
        if !brute_nested(b, &family) {
            return;
        }
        if stack.len() == k {
            *count += 1;
            return;
        }
        for i in start..proper.len() {
            stack.push(i);
            go(b, proper, k, i + 1, stack, count);
            stack.pop();
        }
    }
    go(b, &proper, k, 0, &mut stack, &mut count);
    count
}

/// Every vertex set spanned by a cycle must be a clique. A set is spanned by
/// a cycle when its induced subgraph is Hamiltonian.
fn brute_chordful(g: &Graph) -> bool {
    let n = g.n();
    for mask in 0u32..1 << n {
        if mask.count_ones() < 3 {
            continue;
        }
        let vs: Vec<usize> = (0..n).filter(|v| mask >> v & 1 == 1).collect();
        let clique = vs
            .iter()
            .enumerate()
            .all(|(i, &u)| vs[i + 1..].iter().all(|&v| g.has_edge(u, v)));
        if !clique && hamiltonian(g, &vs) {
            return false;
        }
    }
    true
}

fn hamiltonian(g: &Graph, vs: &[usize]) -> bool {
    let k = vs.len();
    // reach[set][last]: a path from vs[0] through `set` ending at `last`.
    let mut reach = vec![vec![false; k]; 1 << k];
    reach[1][0] = true;
    for set in 1usize..1 << k {
        for last in 0..k {
            if !reach[set][last] {
                continue;
            }
            for next in 0..k {
                if set >> next & 1 == 0 && g.has_edge(vs[last], vs[next]) {
                    reach[set | 1 << next][next] = true;
                }
            }
        }
    }
    (1..k).any(|last| reach[(1 << k) - 1][last] && g.has_edge(vs[last], vs[0]))
}

/// Re-derives a failing flip from its two nested sets.
fn recheck_certificate(b: &BuildingSet, c: &FlipCertificate) -> Result<(), String> {
    let t = btree_from_nested(b, &c.from).map_err(|e| e.to_string())?;
    let t2 = btree_from_nested(b, &c.to).map_err(|e| e.to_string())?;
    let diff = &btree_point(&t2).unwrap() - &btree_point(&t).unwrap();
    let mut expected = RationalPoint::zero(b.n());
    expected.0[c.context.s] = c.delta.clone();
    expected.0[c.context.s_prime] = -c.delta.clone();
    check(
        diff == expected,
        format!("certificate difference {diff} does not match"),
    )?;
    check(
        c.delta <= Rational::zero(),
        "certificate has a positive coefficient",
    )
}

fn intersection_closed_corpus() -> Vec<BuildingSet> {
    let mut rng = corpus::rng(2024);
    let sizes = [3, 4, 5, 4, 5, 6, 4, 5, 5, 4];
    (0..110)
        .map(|i| corpus::intersection_closed(&mut rng, sizes[i % sizes.len()]))
        .collect()
}

fn criterion_1() -> Outcome {
    let b = fixtures::b5_prime();
    let Decision::Realizable(vertices) =
        is_removahedron_realizable(&b).map_err(|e| e.to_string())?
    else {
        return Err("not realizable".into());
    };
    let mut got: Vec<RationalPoint> = vertices.iter().map(|v| v.point.clone()).collect();
    got.sort();
    let want = points(&[&[1, 2, 3], &[2, 1, 3], &[1, 4, 1], &[4, 1, 1]]);
    check(got == want, format!("vertices {got:?}"))?;
    let oracle = enumerate_vertices(&removahedron_hrep(&b)).unwrap().vertices;
    check(oracle == want, format!("oracle vertices {oracle:?}"))?;
    let w = canonical_weights(&b).unwrap();
    let expected: Vec<(Block, Rational)> = vec![
        (blk(&[1, 2, 3]), int(2)),
        (blk(&[1, 2]), int(1)),
        (blk(&[1]), int(1)),
        (blk(&[2]), int(1)),
        (blk(&[3]), int(1)),
    ];
    check(
        w.summands() == expected,
        format!("weights {}", w.decomposition()),
    )?;
    Ok(w.decomposition())
}

fn criterion_2() -> Outcome {
    let b = fixtures::b0();
    let vs = enumerate_vertices(&removahedron_hrep(&b)).unwrap();
    check(vs.len() == 24, format!("{} vertices", vs.len()))?;
    check(
        vs.vertices == permutations(4),
        "vertices are not the permutations of (1,2,3,4)",
    )?;
    check(vs.is_simple(3), "not simple")?;
    Ok("24 permutation vertices, simple".into())
}

fn criterion_3() -> Outcome {
    let b = fixtures::b1();
    let Decision::NotRealizable(certs) = is_removahedron_realizable(&b).unwrap() else {
        return Err("realizable".into());
    };
    for c in &certs {
        recheck_certificate(&b, c)?;
    }
    let vs = enumerate_vertices(&removahedron_hrep(&b)).unwrap();
    let bad = vs.non_simple_vertex(3).ok_or("oracle says simple")?;
    Ok(format!(
        "{} failing flips, delta = {}; vertex {} is not simple",
        certs.len(),
        certs[0].delta,
        vs.vertices[bad]
    ))
}

fn criterion_4() -> Outcome {
    let b = fixtures::b2();
    check(removahedron_realizable(&b).unwrap(), "not realizable")?;
    check(
        normal_fan_matches(&b, &removahedron_hrep(&b)).unwrap(),
        "normal fan mismatch",
    )?;
    let vertices = enumerate_vertices(&removahedron_hrep(&b)).unwrap().len();
    let maximal = nested_complex(&b, true).unwrap().len();
    let brute = brute_maximal_count(&b);
    check(
        vertices == maximal && maximal == brute,
        format!("{vertices} vertices, {maximal} / {brute} maximal nested sets"),
    )?;
    Ok(format!(
        "{vertices} vertices = {maximal} maximal nested sets"
    ))
}

fn criterion_5() -> Outcome {
    let b = fixtures::b3();
    check(removahedron_realizable(&b).unwrap(), "not realizable")?;
    check(
        !b.is_closed_under_intersection(),
        "closed under intersection",
    )?;
    check(
        normal_fan_matches(&b, &removahedron_hrep(&b)).unwrap(),
        "oracle disagrees",
    )?;
    if let Some((x, y)) = exchangeable_closure_witness(&b).unwrap() {
        return Err(format!(
            "exchangeable closure fails: {} and {} are exchangeable and meet in {}",
            b.fmt_block(x),
            b.fmt_block(y),
            b.fmt_block(x.intersection(y))
        ));
    }
    Ok("realizable, not intersection-closed, exchangeable closure holds".into())
}

fn criterion_6() -> Outcome {
    let b = fixtures::b4();
    check(removahedron_realizable(&b).unwrap(), "not realizable")?;
    check(
        !exchangeable_closure_holds(&b).unwrap(),
        "exchangeable closure holds",
    )?;
    let graph = FlipGraph::new(&b).unwrap();
    let (big, small) = (blk(&[1, 2, 3, 4]), blk(&[3, 4, 5]));
    let mut seen = 0;
    for f in &graph.flips {
        if (f.removed, f.added) == (big, small) || (f.removed, f.added) == (small, big) {
            let ctx = flip_context(&graph.trees[f.from], &graph.trees[f.to]).unwrap();
            let d = delta_formula(&ctx);
            check(d == 1, format!("delta {d}"))?;
            let diff = &btree_point(&graph.trees[f.to]).unwrap()
                - &btree_point(&graph.trees[f.from]).unwrap();
            check(
                diff.0[ctx.s] == int(1) && diff.0[ctx.s_prime] == int(-1),
                "point difference",
            )?;
            seen += 1;
        }
    }
    check(seen > 0, "no such flip")?;
    Ok(format!(
        "{seen} flips exchange {{1,2,3,4}} and {{3,4,5}}, all with delta = 1"
    ))
}

fn criterion_7() -> Outcome {
    let mut notes = Vec::new();
    for n in 4..=6 {
        let g = Graph::cycle(n).unwrap();
        check(
            !g.is_chordful().unwrap() && !brute_chordful(&g),
            format!("C{n} chordful"),
        )?;
        let b = g.building_set().unwrap();
        let Decision::NotRealizable(certs) = is_removahedron_realizable(&b).unwrap() else {
            return Err(format!("C{n} realizable"));
        };
        for c in &certs {
            recheck_certificate(&b, c)?;
        }
        notes.push(format!("C{n}: {} certificates", certs.len()));
    }
    Ok(notes.join(", "))
}

fn criterion_8() -> Outcome {
    let mut rng = corpus::rng(8);
    let mut counts = [0usize; 2];
    for i in 0..240 {
        let n = 2 + i % 6;
        let p = [0.15, 0.3, 0.5, 0.7][i % 4];
        let g = corpus::connected_graph(&mut rng, n, p);
        let chordful = brute_chordful(&g);
        let b = g.building_set().unwrap();
        let closed = b.is_closed_under_intersection();
        let realizable = removahedron_realizable(&b).unwrap();
        check(
            chordful == closed && closed == realizable && g.is_chordful().unwrap() == chordful,
            format!("discrepancy on {:?}: chordful {chordful}, closed {closed}, realizable {realizable}", g.edges()),
        )?;
        counts[usize::from(chordful)] += 1;
    }
    Ok(format!(
        "240 graphs ({} chordful, {} not), no discrepancy",
        counts[1], counts[0]
    ))
}

fn criterion_9(corpus: &[BuildingSet]) -> Outcome {
    let mut flips = 0;
    let mut instances: Vec<BuildingSet> = fixtures::all().into_iter().map(|(_, b)| b).collect();
    instances.extend(corpus.iter().cloned());
    for b in &instances {
        let graph = FlipGraph::new(b).unwrap();
        let pts: Vec<RationalPoint> = graph
            .trees
            .iter()
            .map(|t| btree_point(t).unwrap())
            .collect();
        for (t, p) in graph.trees.iter().zip(&pts) {
            for v in 0..t.len() {
                let d = t.descendants(v);
                let k = d.len() as i64;
                let sum = d.iter().fold(Rational::zero(), |acc, i| acc + &p.0[i]);
                check(
                    sum == int(k * (k + 1) / 2),
                    format!("subtree sum at {d:?} in {b:?}"),
                )?;
            }
        }
        for f in &graph.flips {
            let ctx = flip_context(&graph.trees[f.from], &graph.trees[f.to]).unwrap();
            let back = flip_context(&graph.trees[f.to], &graph.trees[f.from]).unwrap();
            let d = int(delta_formula(&ctx));
            check(
                d == int(delta_formula(&back)),
                format!("asymmetric flip in {b:?}"),
            )?;
            let mut expected = RationalPoint::zero(b.n());
            expected.0[ctx.s] = d.clone();
            expected.0[ctx.s_prime] = -d;
            check(
                &pts[f.to] - &pts[f.from] == expected,
                format!("point difference in {b:?}"),
            )?;
            flips += 1;
        }
    }
    Ok(format!("{} instances, {flips} flips", instances.len()))
}

fn criterion_10(corpus: &[BuildingSet]) -> Outcome {
    let mut instances: Vec<BuildingSet> = fixtures::all()
        .into_iter()
        .map(|(_, b)| b)
        .filter(BuildingSet::is_closed_under_intersection)
        .collect();
    instances.extend(corpus.iter().cloned());
    for b in &instances {
        let w = canonical_weights(b).unwrap();
        let z = weights_to_rhs(&w);
        for &block in b.blocks() {
            let k = block.len() as i64;
            check(
                *z.z(block) == int(k * (k + 1) / 2),
                format!("weight sum on {} in {b:?}", b.fmt_block(block)),
            )?;
        }
        check(
            polytopes_equal(&removahedron_hrep(b), &defo_hrep(&z)).unwrap(),
            format!("polytopes differ for {b:?}"),
        )?;
    }
    Ok(format!("{} intersection-closed instances", instances.len()))
}

fn criterion_11() -> Outcome {
    let mut counts = Vec::new();
    for n in 3..=5 {
        let b = fixtures::path(n);
        // Induced subpaths of a path are exactly its blocks.
        let w = MinkowskiWeights::unit(b.ground().clone(), b.blocks().iter().copied()).unwrap();
        check(
            mink_realizes_fan(&b, &w).unwrap(),
            format!("P{n} fan mismatch"),
        )?;
        let defo = defo_hrep(&weights_to_rhs(&w));
        check(
            polytopes_equal(&defo, &removahedron_hrep(&b)).unwrap(),
            format!("P{n} differs from Remo"),
        )?;
        let vertices = enumerate_vertices(&defo).unwrap().len();
        let brute = brute_maximal_count(&b);
        let catalan = [1, 1, 2, 5, 14, 42][n];
        check(
            vertices == brute && brute == catalan,
            format!("P{n}: {vertices} vertices, {brute} nested"),
        )?;
        counts.push(vertices.to_string());
    }
    Ok(format!("vertex counts {}", counts.join(", ")))
}

fn criterion_12(corpus: &[BuildingSet]) -> Outcome {
    let mut instances: Vec<BuildingSet> = fixtures::all().into_iter().map(|(_, b)| b).collect();
    instances.extend(corpus.iter().take(40).cloned());
    let mut rng = corpus::rng(12);
    instances.extend((0..30).map(|i| corpus::building_set(&mut rng, 3 + i % 3)));
    for gamma in [int(3), int(5) / int(2)] {
        let params = SkewParams::new(gamma.clone()).unwrap();
        for b in &instances {
            check(
                skew_realizability(b, &params).unwrap().is_realizable(),
                format!("non-positive skew flip in {b:?}"),
            )?;
            check(
                normal_fan_matches(b, &skew_removahedron_hrep(b, &params)).unwrap(),
                format!("skew fan mismatch for {b:?} at gamma {gamma}"),
            )?;
        }
    }
    Ok(format!("{} instances, gamma 3 and 5/2", instances.len()))
}

#[test]
fn acceptance() {
    let corpus = intersection_closed_corpus();
    let criteria: Vec<(&str, Criterion)> = vec![
        ("triangle vertices and decomposition", Box::new(criterion_1)),
        (
            "complete building set gives the permutahedron",
            Box::new(criterion_2),
        ),
        (
            "K4 minus an edge is not realizable, not simple",
            Box::new(criterion_3),
        ),
        ("K4 minus two edges is realizable", Box::new(criterion_4)),
        (
            "realizable without intersection closure",
            Box::new(criterion_5),
        ),
        (
            "realizable without exchangeable closure",
            Box::new(criterion_6),
        ),
        ("cycles are not realizable", Box::new(criterion_7)),
        (
            "chordful, closed and realizable agree on graphs",
            Box::new(criterion_8),
        ),
        (
            "flip differences, symmetry, subtree sums",
            Box::new(|| criterion_9(&corpus)),
        ),
        (
            "Minkowski sum equals the removahedron",
            Box::new(|| criterion_10(&corpus)),
        ),
        (
            "path associahedra from subpath sums",
            Box::new(criterion_11),
        ),
        (
            "skew removahedra realize every fan",
            Box::new(|| criterion_12(&corpus)),
        ),
    ];
    let mut unexpected = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let number = i + 1;
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        let line = match &outcome {
            Ok(detail) => format!("criterion {number:>2}: PASS  {name} ({detail}; {secs:.1}s)"),
            Err(reason) => format!("criterion {number:>2}: FAIL  {name} ({reason}; {secs:.1}s)"),
        };
        // Written to the stdout handle so the lines survive test capture.
        let _ = writeln!(std::io::stdout().lock(), "{line}");
        let known = KNOWN_FAILURES
            .iter()
            .find(|(n, _)| *n == number)
            .map(|(_, r)| *r);
        match (outcome, known) {
            (Ok(_), None) => {}
            (Err(reason), Some(expected)) if reason == expected => {}
            (Ok(_), Some(_)) => unexpected.push(format!(
                "criterion {number} passed but is listed as a known failure"
            )),
            (Err(reason), _) => unexpected.push(format!("criterion {number}: {reason}")),
        }
    }
    assert!(unexpected.is_empty(), "{unexpected:#?}");
}
