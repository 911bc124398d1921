//! The command-line front end: diameter runs, gadget lemma checks,
//! reduction builders, end-to-end round trips, and instance generation,
//! all emitting reproducible reports that embed their configuration and
//! graph hashes.

use std::collections::BTreeSet;
use std::fs;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::{MatchingError, ReductionError};
use crate::gadgets::{
    enumerate_city_reduced_cycles, enumerate_simple_cycles, forall_cycle_state, forall_harness,
    is_regular, ladder_cycle_verdict, ladder_harness, ladder_transfer_graph, logical_edge_used,
    min_well_behaved_ladder_sequence, min_well_behaved_tower_sequence, tower_harness, tower_plan,
    xor_harness, Dir, ForallVerdict, LadderVerdict,
};
use crate::graph::{DirectedGraph, UndirectedGraph};
use crate::io::{export_dot, export_graph_json, import_graph_json};
use crate::matching::enumerate_perfect_matchings;
use crate::reduction::folklore::build_folklore_hc;
use crate::reduction::ham_instance::test_instances;
use crate::reduction::inapprox::build_inapprox;
use crate::reduction::{
    build_gh, extract_ham_cycle, oracle_ham_provider, synthesize_flip_sequence, CnfFormula,
    HamInstance, Pattern, ScaleProfile,
};
use crate::skeleton::{
    polytope_diameter, validate_flip_sequence, DEFAULT_MATCHING_CAP, DEFAULT_STATE_BUDGET,
};

/// All requested checks passed.
pub const EXIT_OK: i32 = 0;
/// A requested check failed (with a counterexample in the report).
pub const EXIT_CHECK_FAILED: i32 = 1;
/// An input failed to parse or an option was invalid.
pub const EXIT_PARSE: i32 = 2;
/// An enumeration cap or search budget was exceeded.
pub const EXIT_CAP: i32 = 3;
/// The input graph has no perfect matching.
pub const EXIT_NO_MATCHING: i32 = 4;
/// A round-trip stage contradicted a guaranteed invariant.
pub const EXIT_LEMMA: i32 = 5;

#[derive(Parser)]
#[command(
    name = "matchpoly",
    version,
    about = "Exact tools for the bipartite perfect matching polytope: \
             flip distances, gadget checks, and hardness constructions"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Worker threads for parallel searches (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report (or exported graph) here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Exact skeleton diameter of the perfect matching polytope of a graph.
    Diam {
        /// Graph JSON file.
        graph: PathBuf,
        /// Cap on the number of perfect matchings enumerated.
        #[arg(long, default_value_t = DEFAULT_MATCHING_CAP)]
        cap: usize,
        /// State budget for the witness distance search.
        #[arg(long, default_value_t = DEFAULT_STATE_BUDGET)]
        budget: usize,
        /// Decide "diameter <= threshold"; a "no" answer exits nonzero.
        #[arg(long)]
        threshold: Option<usize>,
    },
    /// Exhaustive checks of the gadget lemmas.
    Verify {
        #[command(subcommand)]
        lemma: Lemma,
    },
    /// Build a reduction graph and report its census.
    Reduce {
        /// Which construction to build.
        #[arg(long, value_enum)]
        kind: Kind,
        /// Instance file: HamInstance JSON (gh), DIMACS CNF (folklore), or
        /// undirected graph JSON (inapprox).
        input: PathBuf,
        /// Scale profile as "city_height,branch_width,city_width".
        #[arg(long)]
        profile: Option<String>,
    },
    /// Full pipeline on one instance: build, project, synthesize, validate,
    /// extract, and cross-check against the oracle, for every pattern.
    Roundtrip {
        /// HamInstance JSON file.
        input: PathBuf,
        /// Scale profile as "city_height,branch_width,city_width".
        #[arg(long)]
        profile: Option<String>,
    },
    /// Emit instances: the fixed desk corpus, or seeded random ones.
    Gen {
        /// RNG seed; omitted means the fixed desk corpus.
        #[arg(long)]
        seed: Option<u64>,
        /// Number of instances to generate (seeded mode).
        #[arg(long, default_value_t = 10)]
        count: usize,
    },
}

#[derive(Subcommand)]
enum Lemma {
    /// Tower heights: minimum locked-to-default length is 2h - 2, and every
    /// pair of boundary states admits an exact 2h plan.
    Tower {
        #[arg(long, default_value_t = 3)]
        h: usize,
    },
    /// Ladder states: exactly 8, transfer diameter 2, and minimum
    /// open-to-default length 4 with direction-consistent flips.
    Ladder,
    /// Exclusive-or coupling: every regular cycle uses exactly one of the
    /// two coupled edges, in both orientations.
    Xor,
    /// Branch gadget: every regular cycle picks one side and one ladder;
    /// no simple cycle touches more than four ladders.
    Forall {
        #[arg(long, default_value_t = 1)]
        t: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Gh,
    Folklore,
    Inapprox,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
    Dot,
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

pub fn run() -> i32 {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        // Best effort; a pool may already exist in-process.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let sink = Sink {
        format: cli.format,
        out: cli.out.clone(),
    };
    match dispatch(cli.cmd, &sink) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

/// Where and how reports are written.
struct Sink {
    format: Format,
    out: Option<PathBuf>,
}

impl Sink {
    /// Emits the report; `dot` is the DOT rendering for commands that have
    /// one.
    fn emit(&self, report: &Value, dot: Option<&str>) -> Result<(), Failure> {
        let text = match self.format {
            Format::Json => serde_json::to_string_pretty(report).expect("report is serializable"),
            Format::Table => {
                let mut lines = Vec::new();
                flatten("", report, &mut lines);
                lines.join("\n")
            }
            Format::Dot => dot
                .map(str::to_owned)
                .ok_or_else(|| Failure::new(EXIT_PARSE, "DOT output is not available here"))?,
        };
        match &self.out {
            Some(path) => fs::write(path, text + "\n")
                .map_err(|e| Failure::new(EXIT_PARSE, format!("cannot write {path:?}: {e}"))),
            None => {
                println!("{text}");
                Ok(())
            }
        }
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<String>) {
    match v {
        Value::Object(map) => {
            for (k, val) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten(&key, val, out);
            }
        }
        other => out.push(format!("{prefix}: {other}")),
    }
}

fn read_file(path: &PathBuf) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| Failure::new(EXIT_PARSE, format!("cannot read {path:?}: {e}")))
}

/// Parses "city_height,branch_width,city_width"; default is the smallest
/// desk profile.
fn parse_profile(text: Option<&str>) -> Result<ScaleProfile, Failure> {
    let Some(text) = text else {
        return Ok(ScaleProfile::minimal());
    };
    let parts: Vec<&str> = text.split(',').collect();
    let nums: Option<Vec<usize>> = parts.iter().map(|p| p.trim().parse().ok()).collect();
    match nums.as_deref() {
        Some([h, t, w]) => {
            let profile = ScaleProfile {
                city_height: *h,
                city_width: *w,
                forall_width: *t,
            };
            profile
                .validate()
                .map_err(|e| Failure::new(EXIT_PARSE, e.to_string()))?;
            Ok(profile)
        }
        _ => Err(Failure::new(
            EXIT_PARSE,
            format!("--profile expects \"city_height,branch_width,city_width\", got {text:?}"),
        )),
    }
}

fn profile_report(p: &ScaleProfile, n: usize) -> Value {
    let full = *p == ScaleProfile::full_scale(n);
    json!({
        "city_height": p.city_height,
        "city_width": p.city_width,
        "branch_width": p.forall_width,
        "scale": if full { "full" } else { "desk" },
    })
}

fn dispatch(cmd: Cmd, sink: &Sink) -> Result<i32, Failure> {
    match cmd {
        Cmd::Diam {
            graph,
            cap,
            budget,
            threshold,
        } => cmd_diam(&graph, cap, budget, threshold, sink),
        Cmd::Verify { lemma } => cmd_verify(lemma, sink),
        Cmd::Reduce {
            kind,
            input,
            profile,
        } => cmd_reduce(kind, &input, profile.as_deref(), sink),
        Cmd::Roundtrip { input, profile } => cmd_roundtrip(&input, profile.as_deref(), sink),
        Cmd::Gen { seed, count } => cmd_gen(seed, count, sink),
    }
}

fn cmd_diam(
    path: &PathBuf,
    cap: usize,
    budget: usize,
    threshold: Option<usize>,
    sink: &Sink,
) -> Result<i32, Failure> {
    let bytes = read_file(path)?;
    let (g, _) =
        import_graph_json(&bytes).map_err(|e| Failure::new(EXIT_PARSE, e.to_string()))?;
    let rep = polytope_diameter(&g, cap).map_err(|e| match e {
        MatchingError::NoPerfectMatching => Failure::new(EXIT_NO_MATCHING, e.to_string()),
        MatchingError::CapExceeded { .. } | MatchingError::BudgetExceeded(_) => {
            Failure::new(EXIT_CAP, e.to_string())
        }
        other => Failure::new(EXIT_PARSE, other.to_string()),
    })?;
    let decision = threshold.map(|t| rep.diameter <= t);
    let report = json!({
        "command": "diam",
        "graph_hash": g.hash_hex(),
        "config": {"cap": cap, "budget": budget, "threshold": threshold},
        "diameter": rep.diameter,
        "circuit_diameter": rep.circuit_diameter,
        "matching_count": rep.matching_count,
        "witness": {
            "from": rep.witness_pair.0.edges(),
            "to": rep.witness_pair.1.edges(),
            "flips": rep.witness.cycles,
        },
        "decision": decision,
    });
    let dot = export_dot(&g, Some(&rep.witness_pair.0));
    sink.emit(&report, Some(&dot))?;
    Ok(if decision == Some(false) {
        EXIT_CHECK_FAILED
    } else {
        EXIT_OK
    })
}

fn cmd_verify(lemma: Lemma, sink: &Sink) -> Result<i32, Failure> {
    let (report, pass) = match lemma {
        Lemma::Tower { h } => verify_tower(h)?,
        Lemma::Ladder => verify_ladder(),
        Lemma::Xor => verify_xor(),
        Lemma::Forall { t } => verify_forall(t)?,
    };
    sink.emit(&report, None)?;
    Ok(if pass { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn verify_tower(h: usize) -> Result<(Value, bool), Failure> {
    if !(2..=5).contains(&h) {
        return Err(Failure::new(
            EXIT_CAP,
            format!("exhaustive tower check supports 2 <= h <= 5, got {h}"),
        ));
    }
    let har = tower_harness(h);
    let min = min_well_behaved_tower_sequence(&har, &har.tower_locked(), &har.tower_default())
        .map(|s| s.len());
    // Boundary states: harness matchings with the closing edge unmatched.
    let states: Vec<_> = enumerate_perfect_matchings(&har.graph, 1_000_000)
        .expect("tower harness is small")
        .into_iter()
        .filter(|m| !m.contains(har.closing[0]))
        .collect();
    let mut exact_plan_failures = 0usize;
    for a in &states {
        for b in &states {
            if tower_plan(&har, a, b, 2 * h).is_none() {
                exact_plan_failures += 1;
            }
        }
    }
    let pass = min == Some(2 * h - 2) && exact_plan_failures == 0;
    let report = json!({
        "command": "verify tower",
        "config": {"h": h},
        "graph_hash": har.graph.hash_hex(),
        "min_locked_to_default": min,
        "expected_min": 2 * h - 2,
        "boundary_states": states.len(),
        "exact_plan_failures": exact_plan_failures,
        "pass": pass,
    });
    Ok((report, pass))
}

fn verify_ladder() -> (Value, bool) {
    let har = ladder_harness();
    let (states, moves) = ladder_transfer_graph(&har);
    // Breadth-first search over pair-moves.
    let mut ecc = 0usize;
    for s in 0..states.len() {
        let mut dist = vec![usize::MAX; states.len()];
        dist[s] = 0;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            for mv in &moves {
                if mv.from == x && dist[mv.to] == usize::MAX {
                    dist[mv.to] = dist[x] + 1;
                    queue.push_back(mv.to);
                }
            }
        }
        ecc = ecc.max(dist.iter().copied().max().unwrap());
    }
    let min_bottom = min_well_behaved_ladder_sequence(
        &har,
        &har.ladder_bottom_open(),
        &har.ladder_default(),
        Some(Dir::Bottom),
    )
    .map(|s| s.len());
    let min_top = min_well_behaved_ladder_sequence(
        &har,
        &har.ladder_top_open(),
        &har.ladder_default(),
        Some(Dir::Top),
    )
    .map(|s| s.len());
    let pass = states.len() == 8
        && ecc == 2
        && min_bottom == Some(4)
        && min_top == Some(4);
    let report = json!({
        "command": "verify ladder",
        "graph_hash": har.graph.hash_hex(),
        "semi_default_states": states.len(),
        "transfer_diameter": ecc,
        "pair_moves": moves.len(),
        "min_bottom_open_to_default": min_bottom,
        "min_top_open_to_default": min_top,
        "pass": pass,
    });
    (report, pass)
}

fn verify_xor() -> (Value, bool) {
    let mut orientations = Vec::new();
    let mut pass = true;
    for mirrored in [false, true] {
        let har = xor_harness(mirrored);
        let mut regular = 0usize;
        let mut violations = 0usize;
        let total = enumerate_simple_cycles(&har.graph, |cycle| {
            let mut bm = vec![false; har.graph.edge_count()];
            for &e in cycle {
                bm[e] = true;
            }
            if is_regular(&har.graph, &har.reg, &bm) {
                regular += 1;
                let used0 = logical_edge_used(&har.graph, &har.reg, 0, &bm);
                let used1 = logical_edge_used(&har.graph, &har.reg, 1, &bm);
                if !(used0 ^ used1) {
                    violations += 1;
                }
            }
            true
        });
        pass &= violations == 0 && regular >= 2;
        orientations.push(json!({
            "mirrored": mirrored,
            "graph_hash": har.graph.hash_hex(),
            "cycles": total,
            "regular_cycles": regular,
            "violations": violations,
        }));
    }
    let report = json!({
        "command": "verify xor",
        "orientations": orientations,
        "pass": pass,
    });
    (report, pass)
}

fn verify_forall(t: usize) -> Result<(Value, bool), Failure> {
    if !(1..=2).contains(&t) {
        return Err(Failure::new(
            EXIT_CAP,
            format!("exhaustive branch-gadget check supports t in 1..=2, got {t}"),
        ));
    }
    let har = forall_harness(t, crate::gadgets::CityScale::MINIMAL);
    let mut regular = 0usize;
    let mut violations = 0usize;
    let mut max_ladders = 0usize;
    let total = enumerate_city_reduced_cycles(&har.graph, &har.reg, |cycle| {
        let mut bm = vec![false; har.graph.edge_count()];
        for &e in cycle {
            bm[e] = true;
        }
        let touched = har
            .reg
            .ladders
            .iter()
            .filter(|l| ladder_cycle_verdict(&har.graph, l, &bm) != LadderVerdict::Untouched)
            .count();
        max_ladders = max_ladders.max(touched);
        if is_regular(&har.graph, &har.reg, &bm) {
            regular += 1;
            match forall_cycle_state(&har.graph, &har.reg, 0, &bm) {
                ForallVerdict::Top { ladders } | ForallVerdict::Bottom { ladders } => {
                    if ladders.len() != 1 {
                        violations += 1;
                    }
                }
                _ => violations += 1,
            }
        }
        true
    });
    let pass = violations == 0 && regular >= 2 && max_ladders <= 4;
    let report = json!({
        "command": "verify forall",
        "config": {"t": t},
        "graph_hash": har.graph.hash_hex(),
        "cycles": total,
        "regular_cycles": regular,
        "max_ladders_any_cycle": max_ladders,
        "violations": violations,
        "pass": pass,
    });
    Ok((report, pass))
}

/// Undirected instance files for the inapprox construction (also the output
/// schema of the folklore builder): `{"vertices": n, "edges": [[u, v]]}`.
#[derive(serde::Serialize, serde::Deserialize)]
struct UndirectedDoc {
    vertices: usize,
    edges: Vec<(usize, usize)>,
}

fn undirected_dot(g: &UndirectedGraph) -> String {
    let mut out = String::from("graph G {\n  node [shape=circle, fontsize=10];\n");
    for v in 0..g.vertex_count() {
        out.push_str(&format!("  v{v};\n"));
    }
    for &(u, v) in g.edges() {
        out.push_str(&format!("  v{u} -- v{v};\n"));
    }
    out.push_str("}\n");
    out
}

fn cmd_reduce(
    kind: Kind,
    input: &PathBuf,
    profile: Option<&str>,
    sink: &Sink,
) -> Result<i32, Failure> {
    let bytes = read_file(input)?;
    match kind {
        Kind::Gh => {
            let inst = HamInstance::from_json(&bytes)
                .map_err(|e| Failure::new(EXIT_PARSE, e.to_string()))?;
            let profile = parse_profile(profile)?;
            let n = inst.vertex_count();
            let k = inst.pair_count();
            let gh = build_gh(inst, profile)
                .map_err(|e| Failure::new(EXIT_PARSE, e.to_string()))?;
            let census = gh.reg.census();
            let report = json!({
                "command": "reduce gh",
                "profile": profile_report(&gh.profile, n),
                "instance": {"vertices": n, "pairs": k},
                "graph_hash": gh.graph.hash_hex(),
                "census": {
                    "vertices": gh.graph.vertex_count(),
                    "edges": gh.graph.edge_count(),
                    "towers": census.towers,
                    "cities": census.cities,
                    "ladders": census.ladders,
                    "xors": census.xors,
                    "foralls": census.foralls,
                    "anchor_vertices": gh.v_s.len(),
                },
                "graph": serde_json::from_str::<Value>(
                    &export_graph_json(&gh.graph, &gh.reg.to_docs())
                ).expect("just serialized"),
            });
            let dot = export_dot(&gh.graph, None);
            sink.emit(&report, Some(&dot))?;
        }
        Kind::Folklore => {
            let text = String::from_utf8_lossy(&bytes);
            let cnf = CnfFormula::parse_dimacs(&text)
                .map_err(|e| Failure::new(EXIT_PARSE, e.to_string()))?;
            let fg = build_folklore_hc(&cnf)
                .map_err(|e| Failure::new(EXIT_PARSE, e.to_string()))?;
            let n = fg.graph.vertex_count();
            let m = cnf.clauses.len();
            let doc = UndirectedDoc {
                vertices: n,
                edges: fg.graph.edges().to_vec(),
            };
            let report = json!({
                "command": "reduce folklore",
                "instance": {"variables": cnf.num_vars, "clauses": m},
                "census": {
                    "vertices": n,
                    "edges": fg.graph.edge_count(),
                    "bound_60m_plus_3": 60 * m + 3,
                    "within_bound": n <= 60 * m + 3,
                },
                "graph": serde_json::to_value(&doc).expect("serializable"),
            });
            let dot = undirected_dot(&fg.graph);
            sink.emit(&report, Some(&dot))?;
        }
        Kind::Inapprox => {
            let doc: UndirectedDoc = serde_json::from_slice(&bytes)
                .map_err(|e| Failure::new(EXIT_PARSE, e.to_string()))?;
            let h = UndirectedGraph::build(doc.vertices, doc.edges)
                .map_err(|e| Failure::new(EXIT_PARSE, e.to_string()))?;
            let profile = parse_profile(profile)?;
            let ig = build_inapprox(&h, profile.city_scale())
                .map_err(|e| Failure::new(EXIT_PARSE, e.to_string()))?;
            let report = json!({
                "command": "reduce inapprox",
                "profile": profile_report(&profile, h.vertex_count()),
                "instance": {"vertices": h.vertex_count(), "edges": h.edge_count()},
                "graph_hash": ig.graph.hash_hex(),
                "census": {
                    "vertices": ig.graph.vertex_count(),
                    "edges": ig.graph.edge_count(),
                    "cities": ig.reg.cities.len(),
                    "crossing_edges": 2 * h.edge_count(),
                    "anchor_vertices": ig.v_s.len(),
                },
                "graph": serde_json::from_str::<Value>(
                    &export_graph_json(&ig.graph, &ig.reg.to_docs())
                ).expect("just serialized"),
            });
            let dot = export_dot(&ig.graph, None);
            sink.emit(&report, Some(&dot))?;
        }
    }
    Ok(EXIT_OK)
}

fn cmd_roundtrip(input: &PathBuf, profile: Option<&str>, sink: &Sink) -> Result<i32, Failure> {
    let bytes = read_file(input)?;
    let inst =
        HamInstance::from_json(&bytes).map_err(|e| Failure::new(EXIT_PARSE, e.to_string()))?;
    let profile = parse_profile(profile)?;
    profile
        .validate_for_synthesis()
        .map_err(|e| Failure::new(EXIT_PARSE, e.to_string()))?;
    let n = inst.vertex_count();
    let k = inst.pair_count();
    let gh = build_gh(inst, profile).map_err(|e| Failure::new(EXIT_PARSE, e.to_string()))?;
    profile
        .ensure_searchable(gh.graph.vertex_count())
        .map_err(|e| Failure::new(EXIT_CAP, e.to_string()))?;
    let m_def = gh.default_matching();
    let mut pattern_reports = Vec::new();
    let mut all_consistent = true;
    for bits in 0..(1u64 << k) {
        let pattern = Pattern::new((0..k).map(|j| bits >> j & 1 == 1).collect());
        let m_p = gh
            .pattern_matching(&pattern)
            .map_err(|e| Failure::new(EXIT_PARSE, e.to_string()))?;
        let (_, projection) = gh
            .semi_default_projection(&m_p)
            .expect("pattern matchings project");
        let provider = oracle_ham_provider(&gh.instance);
        match synthesize_flip_sequence(&gh, &m_p, &m_def, provider) {
            Ok(syn) => {
                let mut stage_ok = validate_flip_sequence(&gh.graph, &syn.seq)
                    .map(|end| end.edges() == m_def.edges())
                    .unwrap_or(false)
                    && syn.seq.cycles.len() == 2 * gh.profile.city_height;
                let mut extracted = Vec::new();
                for cycle in &syn.seq.cycles {
                    match extract_ham_cycle(&gh, cycle) {
                        Ok((route, pat)) => {
                            stage_ok &= route_checks(&gh.instance, &pat, &route);
                            extracted.push(json!({"route": route, "picks": pat.picks}));
                        }
                        Err(e) => {
                            stage_ok = false;
                            extracted.push(json!({"error": e.to_string()}));
                        }
                    }
                }
                all_consistent &= stage_ok;
                pattern_reports.push(json!({
                    "picks": pattern.picks,
                    "status": "synthesized",
                    "projection_flips": projection.cycles.len(),
                    "cycles": syn.seq.cycles.len(),
                    "consistent": stage_ok,
                    "extracted": extracted,
                }));
            }
            Err(ReductionError::HamProviderFailed(arcs)) => {
                pattern_reports.push(json!({
                    "picks": pattern.picks,
                    "status": "refuted",
                    "refuting_arcs": arcs,
                }));
            }
            Err(e) => return Err(Failure::new(EXIT_LEMMA, e.to_string())),
        }
    }
    let report = json!({
        "command": "roundtrip",
        "profile": profile_report(&gh.profile, n),
        "instance": {"vertices": n, "pairs": k},
        "graph_hash": gh.graph.hash_hex(),
        "patterns": pattern_reports,
        "consistent": all_consistent,
    });
    sink.emit(&report, None)?;
    Ok(if all_consistent { EXIT_OK } else { EXIT_LEMMA })
}

/// The extracted route must be a Hamiltonian cycle using the chosen pair
/// arcs and none of the rejected ones.
fn route_checks(instance: &HamInstance, pattern: &Pattern, route: &[usize]) -> bool {
    let n = instance.vertex_count();
    if route.len() != n || route.iter().collect::<BTreeSet<_>>().len() != n {
        return false;
    }
    let mut used = vec![false; instance.h.arc_count()];
    for w in 0..n {
        match instance.h.arc_between(route[w], route[(w + 1) % n]) {
            Some(a) => used[a] = true,
            None => return false,
        }
    }
    pattern
        .picks
        .iter()
        .zip(&instance.pairs)
        .all(|(&pick, &[e, eb])| used[if pick { e } else { eb }] && !used[if pick { eb } else { e }])
}

fn cmd_gen(seed: Option<u64>, count: usize, sink: &Sink) -> Result<i32, Failure> {
    let instances: Vec<HamInstance> = match seed {
        None => test_instances::desk_corpus(),
        Some(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..count).map(|_| random_instance(&mut rng)).collect()
        }
    };
    let docs: Vec<Value> = instances
        .iter()
        .map(|i| serde_json::from_str(&i.to_json()).expect("just serialized"))
        .collect();
    let report = json!({
        "command": "gen",
        "config": {"seed": seed, "count": instances.len()},
        "instances": docs,
    });
    sink.emit(&report, None)?;
    Ok(EXIT_OK)
}

/// A random instance: a Hamiltonian ring on a shuffled vertex order, a
/// branch pair at vertex 0, and extra arcs away from the designated tail.
fn random_instance(rng: &mut ChaCha8Rng) -> HamInstance {
    let n = rng.gen_range(4..=7);
    let mut order: Vec<usize> = (1..n).collect();
    order.shuffle(rng);
    order.insert(0, 0);
    let mut arcs: Vec<(usize, usize)> = (0..n).map(|i| (order[i], order[(i + 1) % n])).collect();
    let succ = order[1];
    let mut second = rng.gen_range(1..n);
    while second == succ {
        second = rng.gen_range(1..n);
    }
    arcs.push((0, second));
    for u in 1..n {
        for v in 0..n {
            if u != v && !arcs.contains(&(u, v)) && rng.gen_bool(0.3) {
                arcs.push((u, v));
            }
        }
    }
    let pair = [0usize, n];
    let h = DirectedGraph::build(n, arcs).expect("generator avoids duplicates");
    HamInstance::new(h, vec![pair]).expect("generator satisfies pair invariants")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profile_parsing() {
        assert_eq!(parse_profile(None).unwrap(), ScaleProfile::minimal());
        let p = parse_profile(Some("4, 2, 3")).unwrap();
        assert_eq!(
            p,
            ScaleProfile {
                city_height: 4,
                city_width: 3,
                forall_width: 2
            }
        );
        assert!(parse_profile(Some("4,2")).is_err());
        assert!(parse_profile(Some("a,b,c")).is_err());
        // Zero city height violates the profile invariants.
        assert!(parse_profile(Some("0,1,1")).is_err());
    }

    #[test]
    fn generated_instances_are_valid_and_deterministic() {
        let mut r1 = ChaCha8Rng::seed_from_u64(7);
        let mut r2 = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10 {
            let a = random_instance(&mut r1);
            let b = random_instance(&mut r2);
            assert_eq!(a.h.arcs(), b.h.arcs());
            assert_eq!(a.pairs, b.pairs);
        }
    }

    #[test]
    fn table_flattening_is_line_per_leaf() {
        let v = json!({"a": {"b": 1, "c": [2, 3]}, "d": "x"});
        let mut lines = Vec::new();
        flatten("", &v, &mut lines);
        assert_eq!(lines, vec!["a.b: 1", "a.c: [2,3]", "d: \"x\""]);
    }
}
