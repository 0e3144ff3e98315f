use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use serde_json::{json, Value};

use holant_core::arith::{ArithError, QuadExt, Rat};
use holant_core::dichotomy::{classify_ternary, verify_case_identities, DichotomyError};
use holant_core::grid::rx3c::{rx3c_to_grid, SetSystem};
use holant_core::grid::search::gadget_search;
use holant_core::grid::{EvalOptions, GridError, Polarity, SignatureGrid};
use holant_core::interp::{interpolate_holant_with_d, substitute_d, InterpError};
use holant_core::io::{self, IoError};
use holant_core::linalg::Mat2;
use holant_core::planar::holographic::{solve_holographic, EmbeddedHypergraph};
use holant_core::planar::{count_pm, count_pm_bruteforce, PlanarError};
use holant_core::sig::{SigError, SymSig, Tensor};
use holant_core::tractable::{solve_with, Outcome, SolveOptions, TractableError, TractableInstance};

use crate::{Command, Format};

const EXIT_REFUSED: u8 = 3;
const EXIT_MISMATCH: u8 = 4;

/// Largest graph the matching enumeration oracle is run on.
const PM_ORACLE_VERTICES: usize = 40;
/// Largest set system the subset enumeration oracle is run on.
const SUBSET_ORACLE_SETS: usize = 20;

pub struct Report {
    text: Vec<String>,
    json: Value,
    pub code: u8,
}

impl Report {
    fn new(text: Vec<String>, json: Value) -> Self {
        Self { text, json, code: 0 }
    }

    pub fn print(&self, format: Format) {
        match format {
            Format::Text => {
                for line in &self.text {
                    println!("{line}");
                }
            }
            Format::Json => println!("{}", serde_json::to_string_pretty(&self.json).expect("serializable")),
        }
    }
}

/// 2 for anything traced back to the input, 1 otherwise.
pub fn exit_code(e: &anyhow::Error) -> u8 {
    let input = e.chain().any(|c| {
        c.is::<IoError>()
            || c.is::<std::io::Error>()
            || c.is::<GridError>()
            || c.is::<PlanarError>()
            || c.is::<SigError>()
            || c.is::<ArithError>()
            || c.is::<DichotomyError>()
            || c.is::<InterpError>()
            || c.is::<TractableError>()
    });
    if input {
        2
    } else {
        1
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn opts(max_edges: Option<usize>) -> EvalOptions {
    max_edges.map(EvalOptions::with_max_edges).unwrap_or_default()
}

fn signature(text: &str) -> Result<SymSig> {
    io::parse_signature(text).with_context(|| format!("parsing signature {text:?}"))
}

fn load_grid(path: &Path, f: Option<&str>) -> Result<SignatureGrid> {
    let grid = io::grid_from_json(&read(path)?)?.grid;
    match f {
        None => Ok(grid),
        Some(text) => {
            let t = signature(text)?.to_tensor();
            let mut g = grid.clone();
            for (v, vert) in grid.vertices().iter().enumerate() {
                if vert.polarity.iter().all(|&p| p == Polarity::L) {
                    g = g.with_signature(v, t.clone())?;
                }
            }
            Ok(g)
        }
    }
}

fn oracle_json(checked: Option<bool>) -> Value {
    match checked {
        Some(ok) => json!(if ok { "match" } else { "mismatch" }),
        None => json!("skipped"),
    }
}

fn oracle_line(checked: Option<bool>, want: Option<&Rat>, why_skipped: &str) -> String {
    match (checked, want) {
        (Some(true), _) => "oracle: match".into(),
        (Some(false), Some(w)) => format!("oracle: MISMATCH (brute force {w})"),
        (Some(false), None) => "oracle: MISMATCH".into(),
        (None, _) => format!("oracle: skipped ({why_skipped})"),
    }
}

fn with_oracle(mut report: Report, got: &Rat, want: Option<Rat>, why_skipped: &str) -> Report {
    let checked = want.as_ref().map(|w| w == got);
    report.text.push(oracle_line(checked, want.as_ref(), why_skipped));
    report.json["oracle"] = oracle_json(checked);
    if let Some(w) = &want {
        report.json["oracle_value"] = json!(io::rat_to_string(w));
    }
    if checked == Some(false) {
        report.code = EXIT_MISMATCH;
    }
    report
}

pub fn run(cmd: &Command, max_edges: Option<usize>) -> Result<Report> {
    let eval = opts(max_edges);
    match cmd {
        Command::Classify { signature: s } => classify(&signature(s)?),
        Command::Eval { input, signature } => {
            let g = load_grid(input, signature.as_deref())?;
            let v = g.holant_with(&eval)?;
            Ok(Report::new(
                vec![format!("holant: {v}")],
                json!({ "value": io::rat_to_string(&v), "edges": g.edges().len() }),
            ))
        }
        Command::Solve {
            input,
            signature,
            oracle,
            brute_force,
        } => solve(&load_grid(input, signature.as_deref())?, &eval, *oracle, *brute_force),
        Command::PmCount { input, oracle } => {
            let g = io::planar_graph_from_json(&read(input)?)?;
            let v = count_pm(&g)?;
            let report = Report::new(
                vec![format!("perfect matchings: {v}")],
                json!({ "value": io::rat_to_string(&v), "vertices": g.vertex_count(), "edges": g.edges().len() }),
            );
            if !oracle {
                return Ok(report);
            }
            let want = (g.vertex_count() <= PM_ORACLE_VERTICES).then(|| count_pm_bruteforce(&g));
            Ok(with_oracle(report, &v, want, "graph too large to enumerate"))
        }
        Command::SolvePlanarCover { input, oracle } => planar_cover(&read(input)?, &eval, *oracle),
        Command::Contract { input } => {
            let g = io::grid_from_json(&read(input)?)?.grid;
            let t = g.contract_with(&eval)?;
            let pol: String = g
                .dangling_polarity()
                .iter()
                .map(|p| if *p == Polarity::L { 'L' } else { 'R' })
                .collect();
            let mut text = vec![format!("tensor ({pol}): {t}")];
            let mut js = json!({ "signature": io::tensor_to_json(&t), "polarity": pol });
            if let Ok(s) = t.to_symsig() {
                text.push(format!("symmetric: {s}"));
                js["symmetric"] = io::sig_to_json(&s);
            }
            Ok(Report::new(text, js))
        }
        Command::SearchGadget {
            signature: s,
            target,
            polarity,
            max_f,
            max_eq,
        } => search(&signature(s)?, target, polarity.as_deref(), *max_f, *max_eq),
        Command::InterpDemo { signature: s, input } => interp_demo(&signature(s)?, input.as_deref(), &eval),
        Command::VerifyIdentities { seed, trials } => {
            let reports = verify_case_identities(*seed, *trials)?;
            let text: Vec<String> = reports
                .iter()
                .map(|r| format!("{} {r}", if r.ok() { "PASS" } else { "FAIL" }))
                .collect();
            let js: Vec<Value> = reports
                .iter()
                .map(|r| json!({ "name": r.name, "trials": r.trials, "passed": r.passed, "on_locus": r.on_locus }))
                .collect();
            let mut report = Report::new(text, json!({ "identities": js }));
            if reports.iter().any(|r| !r.ok()) {
                report.code = EXIT_MISMATCH;
            }
            Ok(report)
        }
        Command::X3cCount { input, oracle } => {
            let (system, _) = io::hypergraph_from_json(&read(input)?)?;
            let grid = rx3c_to_grid(&system, &SymSig::from_ints(&[0, 1, 0, 0]))?;
            let v = grid.holant_with(&eval)?;
            let report = Report::new(
                vec![format!("exact covers: {v}")],
                json!({ "value": io::rat_to_string(&v) }),
            );
            if !oracle {
                return Ok(report);
            }
            let want = (system.sets.len() <= SUBSET_ORACLE_SETS).then(|| count_subsets(&system, |c| c == 1));
            Ok(with_oracle(report, &v, want, "too many sets to enumerate"))
        }
    }
}

fn classify(f: &SymSig) -> Result<Report> {
    let c = classify_ternary(f)?;
    let text = vec![c.to_string(), format!("citation: {}", c.citation.tag())];
    let js = json!({
        "signature": io::sig_to_json(f),
        "verdict": if c.is_tractable() { "FP" } else { "#P-hard" },
        "case": c.case().map(|k| k.number()),
        "case_name": c.case().map(|k| k.name()),
        "cases": c.cases.iter().map(|k| k.number()).collect::<Vec<_>>(),
        "citation": c.citation.tag(),
    });
    Ok(Report::new(text, js))
}

fn solve(grid: &SignatureGrid, eval: &EvalOptions, oracle: bool, brute_force: bool) -> Result<Report> {
    let inst = TractableInstance::from_grid(grid.clone())?;
    let opts = SolveOptions {
        fallback: brute_force,
        eval: eval.clone(),
    };
    let outcome = solve_with(&inst, &opts)?;
    let (value, report) = match &outcome {
        Outcome::Solved { value, case } => (
            value.clone(),
            Report::new(
                vec![format!("value: {value}"), format!("solver: {} (case {})", case.name(), case.number())],
                json!({ "value": io::rat_to_string(value), "solver": case.name(), "case": case.number() }),
            ),
        ),
        Outcome::BruteForce { value, .. } => (
            value.clone(),
            Report::new(
                vec![format!("value: {value}"), "solver: brute force (#P-hard signature)".into()],
                json!({ "value": io::rat_to_string(value), "solver": "brute force" }),
            ),
        ),
        Outcome::Refused(c) => {
            let mut r = Report::new(
                vec![format!("refused: {c}"), format!("citation: {}", c.citation.tag())],
                json!({ "refused": true, "verdict": "#P-hard", "citation": c.citation.tag() }),
            );
            r.code = EXIT_REFUSED;
            return Ok(r);
        }
    };
    if !oracle {
        return Ok(report);
    }
    let want = (grid.edges().len() <= eval.max_edges)
        .then(|| grid.holant_with(eval))
        .transpose()?;
    Ok(with_oracle(report, &value, want, "edge count above the brute-force cap"))
}

fn planar_cover(text: &str, eval: &EvalOptions, oracle: bool) -> Result<Report> {
    let v: Value = serde_json::from_str(text).map_err(IoError::from)?;
    let (pg, system) = if v.get("vertices").is_some() {
        (io::grid_from_json(text)?.planar()?, None)
    } else {
        let h = io::embedded_hypergraph_from_json(text)?;
        (h.to_planar_grid(&SymSig::from_ints(&[0, 1, 1, 0]))?, Some(h))
    };
    let value = solve_holographic(&pg)?;
    let report = Report::new(
        vec![format!("moderate covers: {value}")],
        json!({ "value": io::rat_to_string(&value) }),
    );
    if !oracle {
        return Ok(report);
    }
    let want = if pg.grid().edges().len() <= eval.max_edges {
        Some(pg.grid().holant_with(eval)?)
    } else {
        system
            .as_ref()
            .filter(|h: &&EmbeddedHypergraph| h.system.sets.len() <= SUBSET_ORACLE_SETS)
            .map(|h| count_subsets(&h.system, |c| c == 1 || c == 2))
    };
    Ok(with_oracle(report, &value, want, "instance above the brute-force caps"))
}

/// Subsets of sets whose coverage count `c` of every element passes `ok`.
fn count_subsets(s: &SetSystem, ok: impl Fn(usize) -> bool) -> Rat {
    let mut total = 0u64;
    for mask in 0u64..1 << s.sets.len() {
        let good = s.ground.iter().all(|x| {
            let c: usize = s
                .sets
                .iter()
                .enumerate()
                .filter(|(j, _)| mask >> j & 1 == 1)
                .map(|(_, set)| set.iter().filter(|y| *y == x).count())
                .sum();
            ok(c)
        });
        total += good as u64;
    }
    Rat::from_integer(total.into())
}

fn search(f: &SymSig, target: &str, polarity: Option<&str>, max_f: usize, max_eq: usize) -> Result<Report> {
    let w = io::parse_signature(target)?.values().to_vec();
    let pol: Vec<Polarity> = match polarity {
        Some(p) => p
            .chars()
            .map(|c| match c {
                'L' => Ok(Polarity::L),
                'R' => Ok(Polarity::R),
                other => Err(anyhow!("polarity letters must be L or R, got {other:?}")),
            })
            .collect::<Result<_>>()?,
        None => vec![Polarity::L; w.len().saturating_sub(1)],
    };
    let k = pol.len();
    let t = if w.len() == k + 1 {
        SymSig::new(w).to_tensor()
    } else if w.len() == 1 << k {
        Tensor::new(k, w)?
    } else {
        bail!("target has {} weights; arity {k} needs {} or {}", w.len(), k + 1, 1 << k);
    };
    let hit = gadget_search(f, &t, &pol, max_f, max_eq)?;
    let (nf, ne) = hit.size;
    Ok(Report::new(
        vec![
            format!("found: {nf} copies of f, {ne} equalities"),
            format!("scale: {}", hit.scale),
            format!("gadget: {}", io::grid_to_json(&hit.gadget, None)),
        ],
        json!({
            "f_vertices": nf,
            "equalities": ne,
            "scale": io::rat_to_string(&hit.scale),
            "gadget": io::grid_to_json(&hit.gadget, None),
        }),
    ))
}

/// Triple edge between `f` and `=3`, two of its edges carrying identity
/// placeholders.
fn default_interp_grid(f: &SymSig) -> SignatureGrid {
    let mut g = SignatureGrid::new();
    g.add_left(f.to_tensor());
    g.add_right(holant_core::grid::gadgets::equality_tensor(3));
    for s in 0..3 {
        g.link(0, s, 1, s);
    }
    let id = Tensor::from_mat2(&Mat2::identity());
    g.subdivide_edge(0, id.clone());
    g.subdivide_edge(1, id);
    g
}

fn quad_text(q: &QuadExt) -> String {
    q.to_string()
}

fn interp_demo(f: &SymSig, input: Option<&Path>, eval: &EvalOptions) -> Result<Report> {
    let grid = match input {
        Some(p) => load_grid(p, None)?,
        None => default_interp_grid(f),
    };
    let ds: Vec<usize> = grid
        .vertices()
        .iter()
        .enumerate()
        .filter(|(_, v)| v.polarity == [Polarity::L, Polarity::R])
        .map(|(i, _)| i)
        .collect();
    let r = interpolate_holant_with_d(&grid, &ds, f, eval)?;
    let direct = substitute_d(&grid, &ds, f)?.holant_with(eval)?;
    let mut text = vec![format!("placeholders: {}", ds.len())];
    text.push("system: sum_k node_k^s * c_k = value_s".into());
    let mut rows = Vec::new();
    for (s, v) in r.evaluations.iter().enumerate() {
        text.push(format!("  s = {s}: value {v}"));
        rows.push(json!({ "s": s, "value": io::rat_to_string(v) }));
    }
    text.push(format!(
        "nodes: [{}]",
        r.nodes.iter().map(quad_text).collect::<Vec<_>>().join(", ")
    ));
    text.push(format!(
        "solution: [{}]",
        r.coefficients.iter().map(quad_text).collect::<Vec<_>>().join(", ")
    ));
    text.push(format!("interpolated: {}", r.value));
    text.push(format!("direct: {direct}"));
    let ok = r.value == direct;
    text.push(format!("oracle: {}", if ok { "match" } else { "MISMATCH" }));
    let js = json!({
        "placeholders": ds,
        "evaluations": rows,
        "nodes": r.nodes.iter().map(io::quad_to_json).collect::<Vec<_>>(),
        "solution": r.coefficients.iter().map(io::quad_to_json).collect::<Vec<_>>(),
        "interpolated": io::quad_to_json(&r.value),
        "direct": io::quad_to_json(&direct),
        "oracle": oracle_json(Some(ok)),
    });
    let mut report = Report::new(text, js);
    if !ok {
        report.code = EXIT_MISMATCH;
    }
    Ok(report)
}
