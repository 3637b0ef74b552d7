use std::fmt::Write as _;

use anyhow::{bail, Context, Result};
use serde_json::{json, Value};

use removahedra::corpus;
use removahedra::geometry::{
    delta, is_removahedron_realizable, removahedron_hrep, skew_realizability,
    skew_removahedron_hrep, Decision, FlipCertificate, HPolytope, SkewParams, TreeVertex,
};
use removahedra::io;
use removahedra::minkowski::{canonical_weights, defo_hrep, mink_realizes_fan, weights_to_rhs};
use removahedra::nested::{exchangeable_closure_witness, nested_complex, ChildClass, FlipGraph};
use removahedra::oracle::{enumerate_vertices, normal_fan_report, polytopes_equal, search_size};
use removahedra::rational::{self, int, Rational};
use removahedra::{BuildingSet, Graph, RationalPoint};

use crate::input::{load, Loaded};
use crate::report::Report;
use crate::{Args, Command, Format};

/// Largest constraint-subset count the oracle is asked to scan.
const ORACLE_BUDGET: u128 = 20_000_000;

pub fn run(args: &Args) -> Result<Report> {
    check_flags(args)?;
    if args.command == Command::Verify && args.input.is_none() {
        return verify_suite(args.seed.unwrap_or(0));
    }
    let Some(input) = args.input.as_deref() else {
        bail!("missing INPUT");
    };
    let loaded = load(input, args.graph)?;
    let b = &loaded.building;
    match args.command {
        Command::Validate => Ok(validate(b)),
        Command::Analyze => analyze(&loaded, args.certificates),
        Command::Nested => nested(b, args.maximal),
        Command::Realize => realize(b, args.certificates),
        Command::Skew => skew(
            b,
            &gamma(args)?.unwrap_or_else(|| int(3)),
            args.certificates,
        ),
        Command::Decompose => decompose(b),
        Command::Verify => {
            let gammas = match gamma(args)? {
                Some(g) => vec![g],
                None => default_gammas(),
            };
            let mut report = verify(b, &gammas)?;
            if let Some(seed) = args.seed {
                let suite = verify_suite(seed)?;
                report.text.push_str(&suite.text);
                report.result["suite"] = suite.result;
                report.exit = report.exit.max(suite.exit);
            }
            Ok(report)
        }
        Command::Export => export(b, gamma(args)?.as_ref(), args.format),
    }
}

fn check_flags(args: &Args) -> Result<()> {
    let c = args.command;
    if args.maximal && c != Command::Nested {
        bail!("--maximal only applies to `nested`");
    }
    if args.gamma.is_some() && !matches!(c, Command::Skew | Command::Verify | Command::Export) {
        bail!("--gamma only applies to `skew`, `verify` and `export`");
    }
    if args.seed.is_some() && c != Command::Verify {
        bail!("--seed only applies to `verify`");
    }
    if matches!(args.format, Format::Hrep | Format::Vrep) && c != Command::Export {
        bail!("--format hrep|vrep only applies to `export`");
    }
    Ok(())
}

fn default_gammas() -> Vec<Rational> {
    vec![int(3), int(5) / int(2)]
}

fn gamma(args: &Args) -> Result<Option<Rational>> {
    let Some(text) = &args.gamma else {
        return Ok(None);
    };
    let g = rational::parse(text).context("--gamma")?;
    SkewParams::new(g.clone())?;
    Ok(Some(g))
}

fn names(b: &BuildingSet, members: &[usize]) -> Vec<String> {
    members
        .iter()
        .map(|&i| b.ground().name(i).to_string())
        .collect()
}

fn class_text(b: &BuildingSet, class: &ChildClass) -> String {
    format!("{{{}}}", names(b, &class.members).join(","))
}

fn certificate_json(b: &BuildingSet, c: &FlipCertificate) -> Value {
    let ctx = &c.context;
    json!({
        "from": io::nested_members_json(b, &c.from),
        "to": io::nested_members_json(b, &c.to),
        "removed": b.ground().block_names(ctx.removed),
        "added": b.ground().block_names(ctx.added),
        "s": b.ground().name(ctx.s),
        "s_prime": b.ground().name(ctx.s_prime),
        "S": names(b, &ctx.stay_s.members),
        "S_prime": names(b, &ctx.stay_s_prime.members),
        "R": names(b, &ctx.moved_to_s_prime.members),
        "R_prime": names(b, &ctx.moved_to_s.members),
        "delta": rational::format(&c.delta),
    })
}

fn certificate_text(b: &BuildingSet, c: &FlipCertificate) -> String {
    let ctx = &c.context;
    format!(
        "flip {} -> {}\n  exchanges {} for {}\n  s = {}, s' = {}, S = {}, S' = {}, R = {}, R' = {}\n  delta = {}\n",
        c.from.fmt(b),
        c.to.fmt(b),
        b.fmt_block(ctx.removed),
        b.fmt_block(ctx.added),
        b.ground().name(ctx.s),
        b.ground().name(ctx.s_prime),
        class_text(b, &ctx.stay_s),
        class_text(b, &ctx.stay_s_prime),
        class_text(b, &ctx.moved_to_s_prime),
        class_text(b, &ctx.moved_to_s),
        rational::format(&c.delta),
    )
}

/// Certificates to report: the first one, or all of them.
fn chosen(certs: &[FlipCertificate], all: bool) -> &[FlipCertificate] {
    if all {
        certs
    } else {
        &certs[..certs.len().min(1)]
    }
}

fn vertices_text(b: &BuildingSet, vertices: &[TreeVertex]) -> String {
    let mut out = String::new();
    for v in vertices {
        let _ = writeln!(out, "  {}  {}", v.point, v.nested.fmt(b));
    }
    out
}

fn validate(b: &BuildingSet) -> Report {
    let text = format!(
        "valid connected building set\nelements: {}\nblocks: {}\n",
        b.n(),
        b.blocks().len()
    );
    Report::new(
        text,
        json!({
            "valid": true,
            "elements": b.n(),
            "blocks": b.blocks().len(),
            "building_set": io::building_set_json(b),
        }),
    )
}

fn witness_text(
    b: &BuildingSet,
    w: Option<(removahedra::Block, removahedra::Block)>,
) -> (bool, String) {
    match w {
        None => (true, "true".into()),
        Some((x, y)) => (
            false,
            format!(
                "false ({} and {} meet in {})",
                b.fmt_block(x),
                b.fmt_block(y),
                b.fmt_block(x.intersection(y))
            ),
        ),
    }
}

fn analyze(loaded: &Loaded, all: bool) -> Result<Report> {
    let b = &loaded.building;
    let (closed, closed_text) = witness_text(b, b.intersection_witness());
    let (exchangeable, exchangeable_text) = witness_text(b, exchangeable_closure_witness(b)?);
    let chordful = loaded.graph.as_ref().map(Graph::is_chordful).transpose()?;
    let maximal = nested_complex(b, true)?.len();
    let decision = is_removahedron_realizable(b)?;

    let mut text = String::new();
    let _ = writeln!(text, "elements: {}", b.n());
    let _ = writeln!(text, "blocks: {}", b.blocks().len());
    let _ = writeln!(text, "connected: true");
    let _ = writeln!(text, "closed under intersection: {closed_text}");
    let _ = writeln!(text, "exchangeable closure: {exchangeable_text}");
    if let Some(c) = chordful {
        let _ = writeln!(text, "chordful: {c}");
    }
    let _ = writeln!(text, "maximal nested sets: {maximal}");
    let _ = writeln!(text, "realizable: {}", decision.is_realizable());
    let mut report = Report::new(
        String::new(),
        json!({
            "elements": b.n(),
            "blocks": b.blocks().len(),
            "connected": true,
            "closed_under_intersection": closed,
            "exchangeable_closure": exchangeable,
            "chordful": chordful,
            "maximal_nested_sets": maximal,
            "realizable": decision.is_realizable(),
        }),
    );
    if let Decision::NotRealizable(certs) = &decision {
        for c in chosen(certs, all) {
            text.push_str(&certificate_text(b, c));
            report.certificates.push(certificate_json(b, c));
        }
    }
    report.text = text;
    Ok(report)
}

fn nested(b: &BuildingSet, maximal: bool) -> Result<Report> {
    let sets = nested_complex(b, maximal)?;
    let mut text = format!(
        "{} {}nested sets\n",
        sets.len(),
        if maximal { "maximal " } else { "" }
    );
    for n in &sets {
        let _ = writeln!(text, "  {}", n.fmt(b));
    }
    Ok(Report::new(
        text,
        json!({
            "maximal": maximal,
            "count": sets.len(),
            "nested": sets.iter().map(|n| io::nested_members_json(b, n)).collect::<Vec<_>>(),
        }),
    ))
}

fn decision_report(b: &BuildingSet, decision: Decision, label: &str, all: bool) -> Report {
    match decision {
        Decision::Realizable(vertices) => {
            let text = format!(
                "{label}REALIZABLE: {} vertices\n{}",
                vertices.len(),
                vertices_text(b, &vertices)
            );
            let mut result = io::vrep_json(b.ground(), &vertices);
            result["realizable"] = json!(true);
            Report::new(text, result)
        }
        Decision::NotRealizable(certs) => {
            let mut text = format!(
                "{label}NOT REALIZABLE: {} flip{} with delta <= 0\n",
                certs.len(),
                if certs.len() == 1 { "" } else { "s" }
            );
            let shown = chosen(&certs, all);
            for c in shown {
                text.push_str(&certificate_text(b, c));
            }
            let mut report = Report::new(
                text,
                json!({ "realizable": false, "failing_flips": certs.len() }),
            );
            report.certificates = shown.iter().map(|c| certificate_json(b, c)).collect();
            report.exit = 1;
            report
        }
    }
}

fn realize(b: &BuildingSet, all: bool) -> Result<Report> {
    Ok(decision_report(b, is_removahedron_realizable(b)?, "", all))
}

fn skew(b: &BuildingSet, gamma: &Rational, all: bool) -> Result<Report> {
    let params = SkewParams::new(gamma.clone())?;
    let label = format!("gamma = {}: ", rational::format(gamma));
    let mut report = decision_report(b, skew_realizability(b, &params)?, &label, all);
    report.result["gamma"] = json!(rational::format(gamma));
    Ok(report)
}

fn decompose(b: &BuildingSet) -> Result<Report> {
    let w = canonical_weights(b)?;
    let mut text = format!("Remo = {}\n", w.decomposition());
    for (block, y) in w.summands() {
        let _ = writeln!(text, "  {}  {}", b.fmt_block(block), rational::format(&y));
    }
    let mut result = io::weights_json(&w);
    result["decomposition"] = json!(w.decomposition());
    Ok(Report::new(text, result))
}

fn oracle_fits(p: &HPolytope) -> bool {
    p.n() <= removahedra::oracle::ORACLE_LIMIT && search_size(p) <= ORACLE_BUDGET
}

struct Checks {
    rows: Vec<(String, &'static str, String)>,
}

impl Checks {
    fn push(&mut self, name: impl Into<String>, ok: bool, detail: impl Into<String>) {
        self.rows
            .push((name.into(), if ok { "ok" } else { "FAILED" }, detail.into()));
    }

    fn skip(&mut self, name: impl Into<String>, detail: impl Into<String>) {
        self.rows.push((name.into(), "skipped", detail.into()));
    }

    fn failed(&self) -> bool {
        self.rows.iter().any(|r| r.1 == "FAILED")
    }
}

fn verify_checks(b: &BuildingSet, gammas: &[Rational]) -> Result<Checks> {
    let mut checks = Checks { rows: Vec::new() };
    let graph = FlipGraph::new(b)?;
    let symmetric = graph.flips.iter().all(|f| {
        let (t, t2) = (&graph.trees[f.from], &graph.trees[f.to]);
        matches!((delta(t, t2), delta(t2, t)), (Ok(a), Ok(b)) if a == b)
    });
    checks.push(
        "flip coefficients match point differences both ways",
        symmetric,
        format!("{} flips", graph.flips.len()),
    );
    let decision = is_removahedron_realizable(b)?;
    let remo = removahedron_hrep(b);
    if oracle_fits(&remo) {
        let fan = normal_fan_report(b, &remo)?;
        checks.push(
            "combinatorial decision agrees with oracle",
            fan.matches() == decision.is_realizable(),
            format!(
                "realizable = {}, oracle vertices = {}, maximal nested sets = {}",
                decision.is_realizable(),
                fan.vertices,
                fan.maximal_nested_sets
            ),
        );
        if let Decision::Realizable(vertices) = &decision {
            let mut points: Vec<RationalPoint> = vertices.iter().map(|v| v.point.clone()).collect();
            points.sort();
            let oracle = enumerate_vertices(&remo)?.vertices;
            checks.push("tree points are the oracle vertices", points == oracle, "");
        }
    } else {
        checks.skip(
            "combinatorial decision agrees with oracle",
            "oracle search too large",
        );
    }
    for g in gammas {
        let params = SkewParams::new(g.clone())?;
        let name = format!("skew gamma = {} realizes the fan", rational::format(g));
        let combinatorial = skew_realizability(b, &params)?.is_realizable();
        let hrep = skew_removahedron_hrep(b, &params);
        if oracle_fits(&hrep) {
            let oracle = normal_fan_report(b, &hrep)?.matches();
            checks.push(
                name,
                combinatorial && oracle,
                format!("flips positive = {combinatorial}, oracle = {oracle}"),
            );
        } else {
            checks.push(
                name,
                combinatorial,
                "flips positive; oracle search too large",
            );
        }
    }
    if b.is_closed_under_intersection() {
        let w = canonical_weights(b)?;
        let z = weights_to_rhs(&w);
        let identity = b.blocks().iter().all(|&block| {
            let k = block.len() as i64;
            *z.z(block) == int(k * (k + 1) / 2)
        });
        checks.push(
            "weights sum to |B|(|B|+1)/2 on every block",
            identity,
            w.decomposition(),
        );
        let defo = defo_hrep(&z);
        if oracle_fits(&remo) && oracle_fits(&defo) {
            checks.push(
                "Minkowski sum equals the removahedron",
                polytopes_equal(&remo, &defo)?,
                "",
            );
            checks.push(
                "Minkowski sum realizes the fan",
                mink_realizes_fan(b, &w)?,
                "",
            );
        } else {
            checks.skip(
                "Minkowski sum equals the removahedron",
                "oracle search too large",
            );
        }
    }
    Ok(checks)
}

fn checks_report(b: &BuildingSet, checks: &Checks) -> Report {
    let mut text = String::new();
    for (name, status, detail) in &checks.rows {
        let _ = write!(text, "{status:>7}  {name}");
        if !detail.is_empty() {
            let _ = write!(text, " ({detail})");
        }
        text.push('\n');
    }
    let mut report = Report::new(
        text,
        json!({
            "elements": b.n(),
            "checks": checks.rows.iter().map(|(name, status, detail)| json!({
                "check": name,
                "status": status,
                "detail": detail,
            })).collect::<Vec<_>>(),
        }),
    );
    report.exit = u8::from(checks.failed());
    report
}

fn verify(b: &BuildingSet, gammas: &[Rational]) -> Result<Report> {
    Ok(checks_report(b, &verify_checks(b, gammas)?))
}

/// Random graphs, intersection-closed and general building sets, each
/// fully cross-checked.
fn verify_suite(seed: u64) -> Result<Report> {
    let mut rng = corpus::rng(seed);
    let mut instances: Vec<(String, BuildingSet)> = Vec::new();
    for i in 0..8 {
        let n = 3 + i % 3;
        let g = corpus::connected_graph(&mut rng, n, 0.35);
        instances.push((
            format!("graph {}", io::graph_text(&g).trim().replace('\n', "; ")),
            g.building_set()?,
        ));
    }
    for i in 0..8 {
        let b = corpus::intersection_closed(&mut rng, 3 + i % 3);
        instances.push((format!("closed {}", block_list(&b)), b));
    }
    for i in 0..8 {
        let b = corpus::building_set(&mut rng, 3 + i % 3);
        instances.push((format!("general {}", block_list(&b)), b));
    }
    let mut text = format!("randomized suite, seed {seed}\n");
    let mut rows = Vec::new();
    let mut failed = false;
    for (name, b) in &instances {
        let checks = verify_checks(b, &default_gammas())?;
        let bad = checks.failed();
        failed |= bad;
        let realizable = is_removahedron_realizable(b)?.is_realizable();
        let _ = writeln!(
            text,
            "{:>7}  {name}  (realizable = {realizable}, {} checks)",
            if bad { "FAILED" } else { "ok" },
            checks.rows.len()
        );
        rows.push(json!({ "instance": name, "realizable": realizable, "ok": !bad }));
    }
    let mut report = Report::new(text, json!({ "seed": seed, "instances": rows }));
    report.exit = u8::from(failed);
    Ok(report)
}

fn block_list(b: &BuildingSet) -> String {
    b.proper_blocks()
        .filter(|x| x.len() > 1)
        .map(|x| b.fmt_block(x))
        .collect::<Vec<_>>()
        .join(" ")
}

fn export(b: &BuildingSet, gamma: Option<&Rational>, format: Format) -> Result<Report> {
    let (hrep, decision) = match gamma {
        Some(g) => {
            let params = SkewParams::new(g.clone())?;
            (
                skew_removahedron_hrep(b, &params),
                skew_realizability(b, &params)?,
            )
        }
        None => (removahedron_hrep(b), is_removahedron_realizable(b)?),
    };
    let h = io::hrep_json(&hrep);
    let needs_vertices = matches!(format, Format::Vrep | Format::Json | Format::Text);
    let v = if needs_vertices {
        if !oracle_fits(&hrep) {
            bail!(
                "vertex enumeration too large for this polytope ({} constraints)",
                hrep.constraints.len()
            );
        }
        let points = enumerate_vertices(&hrep)?.vertices;
        let trees: Vec<TreeVertex> = match decision {
            Decision::Realizable(vertices) => vertices,
            Decision::NotRealizable(_) => Vec::new(),
        };
        json!({
            "vertices": points.iter().map(|p| {
                match trees.iter().find(|t| t.point == *p) {
                    Some(t) => json!({ "tree": io::tree_node(b.ground(), &t.tree), "point": io::point_json(p) }),
                    None => json!({ "point": io::point_json(p) }),
                }
            }).collect::<Vec<_>>(),
        })
    } else {
        Value::Null
    };
    let mut text = String::new();
    let _ = writeln!(text, "sum = {}", h["sum"].as_str().unwrap_or_default());
    for c in h["constraints"].as_array().into_iter().flatten() {
        let block: Vec<&str> = c["block"]
            .as_array()
            .into_iter()
            .flatten()
            .filter_map(Value::as_str)
            .collect();
        let _ = writeln!(
            text,
            "x({}) >= {}",
            block.join(","),
            c["rhs"].as_str().unwrap_or_default()
        );
    }
    if let Some(vs) = v["vertices"].as_array() {
        let _ = writeln!(text, "{} vertices", vs.len());
        for vertex in vs {
            let coords: Vec<&str> = vertex["point"]
                .as_array()
                .into_iter()
                .flatten()
                .filter_map(Value::as_str)
                .collect();
            let _ = writeln!(text, "  ({})", coords.join(","));
        }
    }
    let mut report = Report::new(text, json!({ "hrep": h.clone(), "vrep": v.clone() }));
    report.raw = Some(if format == Format::Vrep { v } else { h });
    Ok(report)
}
