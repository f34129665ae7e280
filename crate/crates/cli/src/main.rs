use clap::{Args, Parser, Subcommand};
use qgs_core::algebra::{haar_suite, ComponentModel, Haar, HaarConfig, HaarSuiteConfig};
use qgs_core::bilabeled::{square_diagonal_gadget, BiLabeledGraph};
use qgs_core::graphs::{FiniteGraph, GraphProvider, GroupSpec, DEFAULT_VERTEX_BUDGET};
use qgs_core::morspace::{
    analyze_window, check_conjugate, finite_pair_classes, irreducibles, mu_assignment, quantum_orbits, Category, ClosureConfig,
    MorContext, SpectralConfig, Window, WindowReport,
};
use qgs_core::quantiso::{check_correspondence, planar_iso_test, DEFAULT_DEPTH};
use qgs_core::quantization::{fiber_span_rank, noncrossing_even_count, relation_vectors, signed_relation_vectors, DEFAULT_TUPLE_BUDGET};
use qgs_core::{Error, Rational, Result, SCHEMA};
use serde_json::{json, Value};
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "qgs", version, about = "Quantum automorphism groups of graphs")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// Finite graph in the text format (`finite <n>` then `edge u v`).
    #[arg(long, global = true)]
    graph: Option<String>,
    /// Provider description: a JSON file or inline JSON.
    #[arg(long, global = true)]
    provider: Option<String>,
    /// Group description: a JSON file or inline JSON.
    #[arg(long, global = true)]
    group: Option<String>,
    #[arg(long, global = true, default_value = "planar")]
    category: String,
    #[arg(long, global = true)]
    depth: Option<usize>,
    /// Window radius for infinite providers.
    #[arg(long, global = true, default_value_t = 6)]
    radius: usize,
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<String>,
    #[arg(long, global = true, default_value_t = DEFAULT_VERTEX_BUDGET)]
    budget_vertices: usize,
    #[arg(long, global = true, default_value_t = 20_000)]
    budget_closure: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Quantum orbits of vertices.
    Orbits,
    /// Minimal projections with their left and right dimensions.
    Dims,
    /// Modular function and the scaling group.
    Mu,
    /// Positivity, modularity and invariance checks of the Haar functionals.
    HaarCheck,
    /// Compares two graphs by planar homomorphism counts.
    PlanarIso {
        #[arg(long)]
        g1: String,
        #[arg(long)]
        g2: String,
    },
    /// Relation supports and fiber-span ranks of a Cayley graph.
    Quantize {
        #[arg(long, default_value_t = 4)]
        nmax: usize,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Orbits => "orbits",
            Command::Dims => "dims",
            Command::Mu => "mu",
            Command::HaarCheck => "haar-check",
            Command::PlanarIso { .. } => "planar-iso",
            Command::Quantize { .. } => "quantize",
        }
    }
}

fn exact(v: impl Into<Value>) -> Value {
    json!({ "value": v.into(), "regime": "exact", "tol": 0.0 })
}

fn float(v: f64, tol: f64) -> Value {
    json!({ "value": v, "regime": "float", "tol": tol })
}

fn rat(r: &Rational) -> String {
    r.to_string()
}

fn read_source(s: &str, field: &str) -> Result<String> {
    if s.trim_start().starts_with('{') {
        return Ok(s.to_string());
    }
    std::fs::read_to_string(s).map_err(|e| Error::input(field, format!("{s}: {e}")))
}

fn read_json(s: &str, field: &str) -> Result<Value> {
    serde_json::from_str(&read_source(s, field)?).map_err(|e| Error::input(field, format!("bad JSON: {e}")))
}

fn read_graph(path: &str, field: &str) -> Result<FiniteGraph> {
    FiniteGraph::parse(&read_source(path, field)?)
}

impl Common {
    fn category(&self) -> Result<Category> {
        self.category.parse()
    }

    fn closure(&self, max_size: usize) -> ClosureConfig {
        ClosureConfig { max_size, max_basis: self.budget_closure, ..Default::default() }
    }

    fn provider(&self) -> Result<GraphProvider> {
        match (&self.graph, &self.provider, &self.group) {
            (Some(g), None, _) => Ok(GraphProvider::finite(read_graph(g, "graph")?)),
            (None, Some(p), _) => GraphProvider::from_json(&read_json(p, "provider")?),
            (None, None, Some(g)) => GraphProvider::cayley(&GroupSpec::from_json(&read_json(g, "group")?)?),
            (Some(_), Some(_), _) => Err(Error::input("graph", "give either --graph or --provider")),
            (None, None, None) => Err(Error::input("graph", "one of --graph, --provider or --group is required")),
        }
    }

    fn window(&self, p: &GraphProvider) -> Result<(Window, WindowReport)> {
        let w = Window::new(p, &p.base(), self.radius, 2, self.budget_vertices)?;
        let gadgets = [BiLabeledGraph::adjacency(), square_diagonal_gadget()];
        let rep = analyze_window(&w, &gadgets, self.depth.unwrap_or(2))?;
        Ok((w, rep))
    }

    fn finite_context(&self, g: &FiniteGraph, max_size: usize) -> Result<MorContext> {
        MorContext::new(g, self.category()?, &self.closure(max_size))
    }
}

fn keyed(w: &Window, v: usize) -> String {
    w.ball.keys[v].clone()
}

fn orbits(c: &Common) -> Result<Value> {
    let p = c.provider()?;
    if let Some(g) = p.finite_graph() {
        let ctx = c.finite_context(g, c.depth.unwrap_or(4))?;
        let orb = quantum_orbits(&ctx);
        return Ok(json!({
            "vertices": g.vertex_count(),
            "orbit_count": exact(orb.count()),
            "orbits": orb.classes(),
            "exactness": orb.exactness,
            "compact": true,
        }));
    }
    let (w, rep) = c.window(&p)?;
    let classes: Vec<Vec<String>> = rep
        .orbits
        .classes()
        .into_iter()
        .filter(|cl| rep.counted[cl[0]])
        .map(|cl| cl.into_iter().map(|v| keyed(&w, v)).collect())
        .collect();
    let center_orbit: Vec<String> =
        rep.orbits.members(rep.orbits.orbit_of[w.ball.center]).into_iter().map(|v| keyed(&w, v)).collect();
    Ok(json!({
        "center": keyed(&w, w.ball.center),
        "window_vertices": w.graph().vertex_count(),
        "orbits_seen": exact(classes.len()),
        "center_orbit": center_orbit,
        "orbits": classes,
        "exactness": rep.orbits.exactness,
        "stable": rep.stable,
        "compact": match rep.compact { Some(false) => "noncompact", Some(true) => "compact", None => "undetermined" },
    }))
}

fn class_json(pairs: usize, dl: u64, dr: u64, rho: &Rational) -> Value {
    json!({ "pairs": pairs, "d_left": exact(dl), "d_right": exact(dr), "rho": exact(rat(rho)) })
}

fn dims(c: &Common) -> Result<(Value, bool)> {
    let p = c.provider()?;
    let Some(g) = p.finite_graph() else {
        let (w, rep) = c.window(&p)?;
        let classes: Vec<Value> = rep
            .classes
            .iter()
            .map(|cl| {
                let mut v = class_json(cl.pairs.len(), cl.d_left, cl.d_right, &cl.rho());
                v["example"] = json!([keyed(&w, cl.pairs[0].0), keyed(&w, cl.pairs[0].1)]);
                v
            })
            .collect();
        return Ok((json!({ "pair_classes": classes, "exactness": rep.orbits.exactness }), true));
    };
    let k_top = c.depth.unwrap_or(1);
    let ctx = c.finite_context(g, (2 * k_top).max(2))?;
    let orb = quantum_orbits(&ctx);
    let pair: Vec<Value> =
        finite_pair_classes(&ctx)?.iter().map(|cl| class_json(cl.pairs.len(), cl.d_left, cl.d_right, &cl.rho())).collect();
    let cfg = SpectralConfig { tol: c.tol, seed: c.seed, ..Default::default() };
    let irr = irreducibles(&ctx, k_top, &orb, &cfg)?;
    let mut ok = true;
    let mut projs = Vec::new();
    for (pr, class) in &irr.all {
        let cj = check_conjugate(pr)?;
        ok &= cj.first < c.tol && cj.second < c.tol;
        projs.push(json!({
            "k": pr.k,
            "class": class,
            "block": [pr.block.0, pr.block.1],
            "rank": pr.rank(),
            "d_left": exact(pr.d_left),
            "d_right": exact(pr.d_right),
            "conjugate_first": float(cj.first, c.tol),
            "conjugate_second": float(cj.second, c.tol),
            "trace_left": float(cj.trace_left, c.tol),
            "trace_right": float(cj.trace_right, c.tol),
        }));
    }
    Ok((
        json!({
            "pair_classes": pair,
            "irreducible_classes": exact(irr.reps.len()),
            "minimal_projections": projs,
            "exactness": orb.exactness,
        }),
        ok,
    ))
}

/// `None` unless some orbit has two trusted members to compare.
fn window_unimodular(rep: &WindowReport) -> Option<bool> {
    let mut seen = std::collections::HashMap::new();
    let comparable = (0..rep.counted.len())
        .filter(|&v| rep.counted[v])
        .any(|v| seen.insert(rep.orbits.orbit_of[v], v).is_some());
    comparable.then(|| rep.mu.constant_on_orbits(&rep.orbits.orbit_of, Some(&rep.counted)))
}

fn mu(c: &Common) -> Result<Value> {
    let p = c.provider()?;
    if let Some(g) = p.finite_graph() {
        let ctx = c.finite_context(g, c.depth.unwrap_or(3).max(2))?;
        let m = mu_assignment(g.vertex_count(), 0, &finite_pair_classes(&ctx)?)?;
        let orb = quantum_orbits(&ctx);
        let table: Vec<Value> = m.mu.iter().map(|x| x.as_ref().map(|r| json!(rat(r))).unwrap_or(Value::Null)).collect();
        return Ok(json!({ "base": 0, "mu": table, "orbits": orb.classes(), "unimodular": m.constant_on_orbits(&orb.orbit_of, None), "regime": "exact" }));
    }
    let (w, rep) = c.window(&p)?;
    let mut table = serde_json::Map::new();
    for v in 0..w.graph().vertex_count() {
        if rep.counted[v] {
            if let Some(m) = &rep.mu.mu[v] {
                table.insert(keyed(&w, v), json!(rat(m)));
            }
        }
    }
    let center = keyed(&w, w.ball.center);
    let mut out = json!({
        "center": center,
        "mu": table,
        "unimodular": window_unimodular(&rep),
        "classes": rep.classes.iter().map(|cl| class_json(cl.pairs.len(), cl.d_left, cl.d_right, &cl.rho())).collect::<Vec<_>>(),
        "exactness": rep.orbits.exactness,
        "regime": "exact",
    });
    if let Some(tree) = p.orientation() {
        let parent = tree.parent(&center)?;
        if let Some(pv) = w.ball.vertex(&parent) {
            if let Some(r) = rep.mu.ratio(w.ball.center, pv) {
                out["parent_child_ratio"] = exact(rat(&r));
            }
        }
    }
    Ok(out)
}

fn haar_check(c: &Common) -> Result<(Value, bool)> {
    let p = c.provider()?;
    let cfg = HaarConfig { category: c.category()?, max_level: 5, closure: c.closure(5) };
    let h = Haar::<f64>::for_provider(&p, &cfg)?;
    let suite = HaarSuiteConfig { samples: 200, max_n: c.depth.unwrap_or(2), seed: c.seed, tol: c.tol };
    let mut ok = true;
    let mut bases = Vec::new();
    for e in 0..h.nv() {
        let r = haar_suite(&h, e, &suite)?;
        ok &= r.passed;
        bases.push(json!({
            "base": e,
            "min_positivity": float(r.min_positivity, -c.tol),
            "trace_property": float(r.trace_property, c.tol),
            "left_invariance": float(r.left_invariance, c.tol),
            "invariance_words": r.invariance_words,
            "right_modular": float(r.right_modular, c.tol),
            "base_point": float(r.base_point, c.tol),
            "kappa_trace": float(r.kappa_trace, c.tol),
            "passed": r.passed,
        }));
    }
    let model = ComponentModel::new(&h, 2, &SpectralConfig { tol: c.tol, seed: c.seed, ..Default::default() })?;
    let defect = model.completeness_defect(2)?;
    ok &= defect < 1e-6;
    Ok((
        json!({
            "vertices": h.nv(),
            "orbits": h.orbits.classes(),
            "unimodular": h.mu.constant_on_orbits(&h.orbits.orbit_of, None),
            "bases": bases,
            "components": model.count(),
            "completeness_defect": float(defect, 1e-6),
            "passed": ok,
        }),
        ok,
    ))
}

fn planar_iso(c: &Common, g1: &str, g2: &str) -> Result<Value> {
    let a = read_graph(g1, "g1")?;
    let b = read_graph(g2, "g2")?;
    let depth = c.depth.unwrap_or(DEFAULT_DEPTH);
    let verdict = planar_iso_test(&a, &b, depth)?;
    let mut out = serde_json::to_value(&verdict).map_err(|e| Error::Numerical(e.to_string()))?;
    out["regime"] = json!("exact");
    if !verdict.distinguished() && a.vertex_count() == b.vertex_count() && a.vertex_count() <= 6 {
        let corr = check_correspondence(&a, &b, 2, 3)?;
        out["correspondence"] = serde_json::to_value(&corr).map_err(|e| Error::Numerical(e.to_string()))?;
    }
    Ok(out)
}

fn quantize(c: &Common, nmax: usize) -> Result<Value> {
    let src = c.group.as_deref().ok_or_else(|| Error::input("group", "--group is required"))?;
    let g = GroupSpec::from_json(&read_json(src, "group")?)?;
    let symmetric = g.is_symmetric();
    let supports = if symmetric { relation_vectors(&g, nmax)? } else { signed_relation_vectors(&g, nmax)? };
    let mut ranks = Vec::new();
    if symmetric {
        for k in 1..=(nmax / 2).min(3) {
            let r = fiber_span_rank(&g, k, k, c.depth.unwrap_or(1), c.budget_vertices.min(DEFAULT_TUPLE_BUDGET))?;
            ranks.push(json!({
                "n": k,
                "m": k,
                "generated": r.generated,
                "rank": exact(r.rank),
                "radius": r.radius,
                "noncrossing_even": noncrossing_even_count(2 * k)?,
            }));
        }
    }
    Ok(json!({
        "group": g.description(),
        "generators": g.generator_names(),
        "symmetric": symmetric,
        "supports": supports,
        "ranks": ranks,
        "regime": "exact",
    }))
}

fn config_echo(cli: &Cli) -> Value {
    let c = &cli.common;
    let mut v = json!({
        "graph": c.graph,
        "provider": c.provider,
        "group": c.group,
        "category": c.category,
        "depth": c.depth,
        "radius": c.radius,
        "tol": c.tol,
        "seed": c.seed,
        "out": c.out,
        "budget_vertices": c.budget_vertices,
        "budget_closure": c.budget_closure,
    });
    match &cli.command {
        Command::PlanarIso { g1, g2 } => {
            v["g1"] = json!(g1);
            v["g2"] = json!(g2);
        }
        Command::Quantize { nmax } => v["nmax"] = json!(nmax),
        _ => {}
    }
    v
}

fn run(cli: &Cli) -> Result<(Value, bool)> {
    let c = &cli.common;
    match &cli.command {
        Command::Orbits => Ok((orbits(c)?, true)),
        Command::Dims => dims(c),
        Command::Mu => Ok((mu(c)?, true)),
        Command::HaarCheck => haar_check(c),
        Command::PlanarIso { g1, g2 } => Ok((planar_iso(c, g1, g2)?, true)),
        Command::Quantize { nmax } => Ok((quantize(c, *nmax)?, true)),
    }
}

fn emit(cli: &Cli, report: &Value) -> Result<()> {
    let text = serde_json::to_string_pretty(report).map_err(|e| Error::Numerical(e.to_string()))?;
    match &cli.common.out {
        Some(path) => std::fs::write(path, text + "\n").map_err(|e| Error::input("out", format!("{path}: {e}"))),
        None => {
            use std::io::Write;
            // a closed pipe (e.g. `| head`) is not an error worth reporting
            let _ = writeln!(std::io::stdout(), "{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = run(&cli).and_then(|(result, ok)| {
        let report = json!({
            "schema": SCHEMA,
            "command": cli.command.name(),
            "version": env!("CARGO_PKG_VERSION"),
            "config": config_echo(&cli),
            "status": if ok { "ok" } else { "tolerance_exceeded" },
            "result": result,
        });
        emit(&cli, &report)?;
        Ok(ok)
    });
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(3),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
