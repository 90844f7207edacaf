//! Command-line front end: config ingestion, experiment orchestration,
//! report emission.
//!
//! Exit codes: 0 success, 1 usage/schema error, 2 precision failure,
//! 3 verification failure (a plan's predicted bound not met).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use equidist_core::classifier;
use equidist_core::construct::{
    build_counterexample_poly, build_counterexample_polyvec, build_counterexample_scalar,
    build_counterexample_vector, dirichlet_simultaneous, nodist_construct, witness_find_multi,
    CounterexamplePlan, NoDistPlan,
};
use equidist_core::diagnostics;
use equidist_core::error::Error as CoreError;
use equidist_core::exactnum::eval::set_max_working_bits;
use equidist_core::exactnum::rational::{decimal_string, parse_rational, Rational};
use equidist_core::generator;
use equidist_core::independence;
use equidist_core::{Config, PolynomialSR, SymbolicReal};

#[derive(Parser)]
#[command(name = "equidist", version, about = "mod-1 distribution laboratory for perturbed polynomial sequences")]
struct Cli {
    /// worker threads (affects wall time only; outputs are identical)
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Theorem-backed verdicts for a configuration
    Classify(ClassifyArgs),
    /// Distribution diagnostics over a generated range
    Analyze(AnalyzeArgs),
    /// Emit the sequence as CSV
    Gen(GenArgs),
    /// Exact independence verdicts for the configuration's numbers
    Independence(ClassifyArgs),
    /// Build a counterexample plan or the no-distribution function
    Construct(ConstructArgs),
    /// Smallest n whose point lands within eps of a target
    Witness(WitnessArgs),
    /// Re-run a plan's predicted checks against its recorded floors
    Verify(VerifyArgs),
    /// Smallest k with all k*theta_i near an integer (exhaustive)
    Dirichlet(DirichletArgs),
}

#[derive(Args)]
struct ClassifyArgs {
    config: PathBuf,
}

#[derive(Args)]
struct AnalyzeArgs {
    config: PathBuf,
    /// number of points to generate
    #[arg(long, default_value_t = 10_000)]
    n: u64,
    /// output precision bits (radius below 2^-F)
    #[arg(short = 'F', long, default_value_t = 64)]
    precision: u32,
    /// Weyl vector a1[,a2,...]
    #[arg(long)]
    weyl: Option<String>,
    /// grid cells per axis for box discrepancy / covering / drift
    #[arg(long, default_value_t = 64)]
    grid: usize,
    /// atom scan: delta,mass_min,q_max (rationals and an integer)
    #[arg(long)]
    atoms: Option<String>,
    /// also compute the covering radius
    #[arg(long)]
    covering: bool,
    /// drift between two prefixes: n1,n2
    #[arg(long)]
    drift: Option<String>,
    /// drift on one box a,b (with --drift)
    #[arg(long)]
    drift_box: Option<String>,
    /// write a two-column histogram (bin center, mass) of coordinate 0
    #[arg(long)]
    emit_hist: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    config: PathBuf,
    /// inclusive index range n1,n2
    #[arg(long, default_value = "1,1000")]
    range: String,
    #[arg(short = 'F', long, default_value_t = 64)]
    precision: u32,
    /// output path (stdout when absent)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ConstructArgs {
    /// construction request JSON (see README for the schema)
    request: PathBuf,
    /// write the plan here (stdout when absent)
    #[arg(long)]
    out: Option<PathBuf>,
    /// also write the ready-to-run config
    #[arg(long)]
    emit_config: Option<PathBuf>,
}

#[derive(Args)]
struct WitnessArgs {
    config: PathBuf,
    /// target point, one rational per coordinate: 0.5 or 1/2,1/3
    #[arg(long)]
    target: String,
    /// torus tolerance
    #[arg(long, default_value = "1/100")]
    eps: String,
    #[arg(long, default_value_t = 1_000_000)]
    nmax: u64,
    #[arg(short = 'F', long, default_value_t = 64)]
    precision: u32,
}

#[derive(Args)]
struct VerifyArgs {
    plan: PathBuf,
    /// simulation length for counterexample plans
    #[arg(long, default_value_t = 10_000)]
    n: u64,
    #[arg(short = 'F', long, default_value_t = 64)]
    precision: u32,
}

#[derive(Args)]
struct DirichletArgs {
    /// config supplying the basis
    config: PathBuf,
    /// the numbers, as JSON symbolic reals separated by ';', e.g.
    /// {"gen":"sqrt2"};{"gen":"sqrt3"}
    #[arg(long)]
    thetas: String,
    #[arg(long, short = 'Q')]
    q: u64,
}

enum CliError {
    Usage(String),
    Precision(String),
    Verification(String),
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        if e.is_precision() {
            CliError::Precision(e.to_string())
        } else {
            CliError::Usage(e.to_string())
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Usage(format!("io: {e}"))
    }
}

fn main() -> ExitCode {
    // EQUIDIST_MAX_BITS caps working precision (default 4096)
    if let Ok(v) = std::env::var("EQUIDIST_MAX_BITS") {
        match v.parse::<u32>() {
            Ok(bits) => set_max_working_bits(bits),
            Err(_) => {
                eprintln!("error: EQUIDIST_MAX_BITS must be an integer");
                return ExitCode::from(1);
            }
        }
    }
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    if let Some(k) = cli.threads {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(k).build_global();
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(CliError::Precision(m)) => {
            eprintln!("precision failure: {m}");
            ExitCode::from(2)
        }
        Err(CliError::Verification(m)) => {
            eprintln!("verification failure: {m}");
            ExitCode::from(3)
        }
    }
}

fn load_config(path: &PathBuf) -> Result<Config, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))?;
    Ok(Config::from_json(&text)?)
}

fn parse_rat_arg(field: &str, s: &str) -> Result<Rational, CliError> {
    parse_rational(s).map_err(|_| CliError::Usage(format!("field {field}: bad rational `{s}`")))
}

fn parse_rat_list(field: &str, s: &str) -> Result<Vec<Rational>, CliError> {
    s.split(',').map(|p| parse_rat_arg(field, p.trim())).collect()
}

fn emit(value: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(value).expect("serializable"));
}

fn run(cmd: Command) -> Result<(), CliError> {
    match cmd {
        Command::Classify(a) => {
            let cfg = load_config(&a.config)?;
            let verdict = classifier::classify(&cfg)?;
            emit(&serde_json::to_value(&verdict).expect("serializable"));
            Ok(())
        }
        Command::Independence(a) => {
            let cfg = load_config(&a.config)?;
            let report = independence_report(&cfg)?;
            emit(&report);
            Ok(())
        }
        Command::Analyze(a) => analyze(a),
        Command::Gen(a) => {
            let cfg = load_config(&a.config)?;
            let (n1, n2) = {
                let parts: Vec<&str> = a.range.split(',').collect();
                if parts.len() != 2 {
                    return Err(CliError::Usage("field range: expected n1,n2".into()));
                }
                let lo: u64 = parts[0].trim().parse().map_err(|_| {
                    CliError::Usage("field range: n1 must be an integer".into())
                })?;
                let hi: u64 = parts[1].trim().parse().map_err(|_| {
                    CliError::Usage("field range: n2 must be an integer".into())
                })?;
                (lo, hi)
            };
            let pts = generator::generate(&cfg, n1, n2, a.precision)?;
            match a.out {
                Some(path) => {
                    let mut f = std::fs::File::create(path)?;
                    generator::write_csv(&pts, &mut f)?;
                }
                None => {
                    let mut out = std::io::stdout().lock();
                    generator::write_csv(&pts, &mut out)?;
                }
            }
            Ok(())
        }
        Command::Construct(a) => construct(a),
        Command::Witness(a) => {
            let cfg = load_config(&a.config)?;
            let target = parse_rat_list("target", &a.target)?;
            let eps = parse_rat_arg("eps", &a.eps)?;
            let found = witness_find_multi(&cfg, &[target.clone()], &eps, a.nmax, a.precision)?;
            match found[0] {
                Some(n) => emit(&json!({ "found": n })),
                None => emit(&json!({ "found": null, "nmax": a.nmax })),
            }
            Ok(())
        }
        Command::Verify(a) => verify(a),
        Command::Dirichlet(a) => {
            let cfg = load_config(&a.config)?;
            let thetas: Vec<SymbolicReal> = a
                .thetas
                .split(';')
                .map(|s| {
                    serde_json::from_str::<SymbolicReal>(s.trim())
                        .map_err(|e| CliError::Usage(format!("field thetas: {e}")))
                })
                .collect::<Result<_, _>>()?;
            let k = dirichlet_simultaneous(&cfg.basis, &thetas, a.q)?;
            emit(&json!({ "k": k, "q": a.q }));
            Ok(())
        }
    }
}

fn independence_report(cfg: &Config) -> Result<serde_json::Value, CliError> {
    use equidist_core::model::config::SequenceSpec;
    use equidist_core::model::periodic::reduce_to_unit_period;
    let verdict = classifier::classify(cfg)?;
    let mut out = json!({
        "assumption": verdict.assumption,
        "classification": serde_json::to_value(&verdict).expect("serializable"),
    });
    // the raw independence verdicts behind the rules
    match &cfg.sequence {
        SequenceSpec::Scalar(s) => {
            if s.p0.degree() == 1 {
                let mut numbers = vec![s.p0.coeff(1)];
                for p in &s.perturbations {
                    let (_, gamma) = reduce_to_unit_period(&cfg.basis, &p.f)?;
                    numbers.push(gamma);
                }
                let v = independence::rational_independence(&numbers);
                out["rational_independence_of_alpha_and_reciprocal_periods"] =
                    serde_json::to_value(&v).expect("serializable");
            }
        }
        SequenceSpec::Vector { components } => {
            let mains: Vec<PolynomialSR> = components.iter().map(|c| c.p0.clone()).collect();
            let v = independence::q_independence_polys(&mains);
            out["q_independence_of_mains"] = serde_json::to_value(&v).expect("serializable");
        }
        SequenceSpec::Torus { .. } => {}
    }
    Ok(out)
}

fn analyze(a: AnalyzeArgs) -> Result<(), CliError> {
    let cfg = load_config(&a.config)?;
    let pts = generator::generate(&cfg, 1, a.n, a.precision)?;
    let d = cfg.dimension();
    let mut out = serde_json::Map::new();
    out.insert("n".into(), json!(a.n));

    if d == 1 {
        let r = diagnostics::star_discrepancy_1d(&pts)?;
        out.insert("star_discrepancy".into(), serde_json::to_value(&r).expect("ser"));
    } else {
        let r = diagnostics::box_discrepancy(&pts, a.grid)?;
        out.insert("box_discrepancy".into(), serde_json::to_value(&r).expect("ser"));
    }

    if let Some(w) = &a.weyl {
        let vector: Vec<i64> = w
            .split(',')
            .map(|s| s.trim().parse().map_err(|_| CliError::Usage("field weyl: integers".into())))
            .collect::<Result<_, _>>()?;
        let r = diagnostics::weyl_sum(&pts, &vector)?;
        out.insert("weyl".into(), serde_json::to_value(&r).expect("ser"));
    }

    if let Some(spec) = &a.atoms {
        let parts: Vec<&str> = spec.split(',').collect();
        if parts.len() != 3 {
            return Err(CliError::Usage("field atoms: expected delta,mass_min,q_max".into()));
        }
        let delta = parse_rat_arg("atoms.delta", parts[0])?;
        let mass = parse_rat_arg("atoms.mass_min", parts[1])?;
        let qmax: u64 = parts[2]
            .trim()
            .parse()
            .map_err(|_| CliError::Usage("field atoms.q_max: integer".into()))?;
        let r = diagnostics::atom_scan(&pts, &delta, &mass, qmax)?;
        out.insert("atoms".into(), serde_json::to_value(&r).expect("ser"));
    }

    if a.covering {
        let r = diagnostics::covering_radius(&pts, a.grid)?;
        out.insert("covering_radius".into(), json!(format!("{r:.10}")));
    }

    if let Some(spec) = &a.drift {
        let parts: Vec<&str> = spec.split(',').collect();
        if parts.len() != 2 {
            return Err(CliError::Usage("field drift: expected n1,n2".into()));
        }
        let n1: usize = parts[0].trim().parse().map_err(|_| CliError::Usage("field drift.n1".into()))?;
        let n2: usize = parts[1].trim().parse().map_err(|_| CliError::Usage("field drift.n2".into()))?;
        if d != 1 {
            return Err(CliError::Usage(
                "field drift: implemented for 1-dimensional sequences".into(),
            ));
        }
        {
            let r = diagnostics::cesaro_drift(&pts, n1, n2, a.grid.min(32))?;
            out.insert("cesaro_drift".into(), serde_json::to_value(&r).expect("ser"));
            if let Some(bx) = &a.drift_box {
                let bounds = parse_rat_list("drift_box", bx)?;
                if bounds.len() != 2 {
                    return Err(CliError::Usage("field drift_box: expected a,b".into()));
                }
                let tol = Rational::new(1.into(), (a.grid as i64).into());
                let r = diagnostics::drift_on_box(&pts, n1, n2, &bounds[0], &bounds[1], &tol)?;
                out.insert("drift_on_box".into(), serde_json::to_value(&r).expect("ser"));
            }
        }
    }

    if let Some(path) = &a.emit_hist {
        let bins = a.grid.max(2);
        let mut counts = vec![0u64; bins];
        for p in &pts {
            let x = p.coords[0].value.to_f64().clamp(0.0, 1.0 - 1e-12);
            counts[(x * bins as f64) as usize] += 1;
        }
        let mut text = String::new();
        for (i, c) in counts.iter().enumerate() {
            text.push_str(&format!(
                "{:.8} {:.8}\n",
                (i as f64 + 0.5) / bins as f64,
                *c as f64 / pts.len() as f64
            ));
        }
        std::fs::write(path, text)?;
    }

    emit(&serde_json::Value::Object(out));
    Ok(())
}

#[derive(serde::Deserialize)]
struct ConstructRequest {
    basis: equidist_core::Basis,
    kind: String,
    #[serde(default)]
    epsilon: Option<String>,
    #[serde(default)]
    alpha: Option<SymbolicReal>,
    #[serde(default)]
    alphas: Option<Vec<SymbolicReal>>,
    #[serde(default)]
    betas: Option<Vec<SymbolicReal>>,
    #[serde(default)]
    p0: Option<PolynomialSR>,
    #[serde(default)]
    args: Option<Vec<PolynomialSR>>,
    #[serde(default)]
    qs: Option<Vec<PolynomialSR>>,
    #[serde(default)]
    depth: Option<u32>,
    #[serde(default)]
    scan_limit: Option<u64>,
}

fn construct(a: ConstructArgs) -> Result<(), CliError> {
    let text = std::fs::read_to_string(&a.request)
        .map_err(|e| CliError::Usage(format!("request {}: {e}", a.request.display())))?;
    let req: ConstructRequest =
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("request parse: {e}")))?;
    let eps = match &req.epsilon {
        Some(e) => parse_rat_arg("epsilon", e)?,
        None => Rational::new(1.into(), 10.into()),
    };
    let missing = |f: &str| CliError::Usage(format!("field {f} required for kind {}", req.kind));

    let (plan_json, config) = match req.kind.as_str() {
        "scalar" => {
            let alpha = req.alpha.as_ref().ok_or_else(|| missing("alpha"))?;
            let betas = req.betas.clone().unwrap_or_default();
            let plan = build_counterexample_scalar(&req.basis, alpha, &betas, &eps)?;
            let cfg = plan.config.clone();
            (serde_json::to_value(&plan).expect("ser"), cfg)
        }
        "poly" => {
            let p0 = req.p0.as_ref().ok_or_else(|| missing("p0"))?;
            let args = req.args.clone().ok_or_else(|| missing("args"))?;
            let betas = req.betas.clone().ok_or_else(|| missing("betas"))?;
            let plan = build_counterexample_poly(&req.basis, p0, &args, &betas, &eps)?;
            let cfg = plan.config.clone();
            (serde_json::to_value(&plan).expect("ser"), cfg)
        }
        "vector" => {
            let alphas = req.alphas.clone().ok_or_else(|| missing("alphas"))?;
            let betas = req.betas.clone().ok_or_else(|| missing("betas"))?;
            let plan = build_counterexample_vector(&req.basis, &alphas, &betas, &eps)?;
            let cfg = plan.config.clone();
            (serde_json::to_value(&plan).expect("ser"), cfg)
        }
        "polyvec" => {
            let qs = req.qs.clone().ok_or_else(|| missing("qs"))?;
            let args = req.args.clone().ok_or_else(|| missing("args"))?;
            let betas = req.betas.clone().ok_or_else(|| missing("betas"))?;
            let plan = build_counterexample_polyvec(&req.basis, &qs, &args, &betas, &eps)?;
            let cfg = plan.config.clone();
            (serde_json::to_value(&plan).expect("ser"), cfg)
        }
        "nodist" => {
            let alpha = req.alpha.as_ref().ok_or_else(|| missing("alpha"))?;
            let depth = req.depth.unwrap_or(2);
            let limit = req.scan_limit.unwrap_or(300_000);
            let plan = nodist_construct(&req.basis, alpha, depth, limit)?;
            let cfg = plan.config.clone();
            (serde_json::to_value(&plan).expect("ser"), cfg)
        }
        other => return Err(CliError::Usage(format!("unknown construction kind `{other}`"))),
    };

    let text = serde_json::to_string_pretty(&plan_json).expect("ser");
    match &a.out {
        Some(p) => std::fs::write(p, text)?,
        None => println!("{text}"),
    }
    if let Some(p) = &a.emit_config {
        std::fs::write(p, config.to_json())?;
    }
    Ok(())
}

#[derive(serde::Deserialize)]
#[serde(untagged)]
enum AnyPlan {
    NoDist(NoDistPlan),
    Counter(CounterexamplePlan),
}

fn verify(a: VerifyArgs) -> Result<(), CliError> {
    let text = std::fs::read_to_string(&a.plan)
        .map_err(|e| CliError::Usage(format!("plan {}: {e}", a.plan.display())))?;
    let plan: AnyPlan =
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("plan parse: {e}")))?;
    match plan {
        AnyPlan::Counter(p) => verify_counterexample(&p, a.n, a.precision),
        AnyPlan::NoDist(p) => verify_nodist(&p, a.precision),
    }
}

fn verify_counterexample(plan: &CounterexamplePlan, n: u64, precision: u32) -> Result<(), CliError> {
    let mut report = serde_json::Map::new();
    report.insert("kind".into(), json!(plan.kind));
    if plan.trivial {
        // the unperturbed sequence already fails: check the classifier
        let v = classifier::classify(&plan.config)?;
        let ok = v.uniform != classifier::Uniform::Guaranteed;
        report.insert("classifier_uniform".into(), json!(format!("{:?}", v.uniform)));
        emit(&serde_json::Value::Object(report));
        return if ok {
            Ok(())
        } else {
            Err(CliError::Verification(
                "trivial plan classified as uniformly distributed".into(),
            ))
        };
    }
    let floor = parse_rat_arg("mass_floor", &plan.mass_floor)?;
    let slack = Rational::new(1.into(), 50.into()); // finite-N allowance 0.02
    let needed = (&floor - &slack).max(Rational::new(1.into(), 1000.into()));

    // the stream carrying the predicted atoms
    let stream = plan.combined_config.as_ref().unwrap_or(&plan.config);
    let pts = generator::generate(stream, 1, n, precision)?;
    let delta = parse_rational("1/1000000").expect("const");
    let atoms = diagnostics::atom_scan(&pts, &delta, &needed, plan.m_bound.max(1))?;
    report.insert("atoms".into(), serde_json::to_value(&atoms).expect("ser"));

    let hit = atoms.clusters.iter().find(|c| {
        c.label
            .as_ref()
            .is_some_and(|l| plan.predicted_atoms.contains(l))
    });
    let ok_mass = match hit {
        Some(c) => {
            report.insert("atom_hit".into(), json!(c.label));
            report.insert("atom_mass".into(), json!(decimal_string(&c.mass, 20)));
            c.mass >= needed
        }
        None => false,
    };

    if let Some(weyl) = &plan.weyl_vector {
        let vec_pts = generator::generate(&plan.config, 1, n, precision)?;
        let w = diagnostics::weyl_sum(&vec_pts, weyl)?;
        report.insert("weyl".into(), serde_json::to_value(&w).expect("ser"));
    }

    // the provenance-marked config must classify as definitely not u.d.
    let v = classifier::classify(&plan.config)?;
    let ok_class = v.uniform == classifier::Uniform::NotUD;
    report.insert("classifier_uniform".into(), json!(format!("{:?}", v.uniform)));

    emit(&serde_json::Value::Object(report));
    if !ok_mass {
        return Err(CliError::Verification(format!(
            "no predicted atom reached the floor {} (with 1/50 finite-sample allowance)",
            plan.mass_floor
        )));
    }
    if !ok_class {
        return Err(CliError::Verification("constructed config not classified NotUD".into()));
    }
    Ok(())
}

fn verify_nodist(plan: &NoDistPlan, precision: u32) -> Result<(), CliError> {
    let mut report = serde_json::Map::new();
    let Some((_, m_last)) = plan.ladder() else {
        return Err(CliError::Verification("plan has no stages".into()));
    };
    // exact structural checks
    let total = parse_rat_arg("total_modified_length", &plan.total_modified_length)?;
    if total >= Rational::new(1.into(), 8.into()) {
        return Err(CliError::Verification("total modified length reached 1/8".into()));
    }
    let h0 = equidist_core::PeriodicFunction::h0();
    for (pos, val) in plan.h_final.points() {
        if val > &h0.value_at(pos) {
            return Err(CliError::Verification(format!(
                "h exceeds the base sawtooth at {pos}"
            )));
        }
    }

    // regenerate and recount at every recorded ladder point
    let pts = generator::generate(&plan.config, 1, m_last, precision)?;
    let q78 = parse_rational("7/8").expect("const");
    let q1516 = parse_rational("15/16").expect("const");
    let one = Rational::new(1.into(), 1.into());
    let count_in = |upto: u64, lo: &Rational| -> u64 {
        pts[..upto as usize]
            .iter()
            .filter(|p| {
                let c = &p.coords[0];
                !c.wrap && &c.position() > lo && c.position() < one
            })
            .count() as u64
    };
    let mut stage_reports = Vec::new();
    for s in &plan.stages {
        let upper = count_in(s.n_next, &q78);
        let conc = count_in(s.m_next, &q1516);
        let upper_ok = upper * 4 <= s.n_next;
        let conc_ok = conc * 8 >= 3 * s.m_next;
        stage_reports.push(json!({
            "n_next": s.n_next,
            "upper_count": upper,
            "upper_ok": upper_ok,
            "m_next": s.m_next,
            "concentration_count": conc,
            "concentration_ok": conc_ok,
        }));
        if !upper_ok || !conc_ok {
            report.insert("stages".into(), json!(stage_reports));
            emit(&serde_json::Value::Object(report));
            return Err(CliError::Verification(format!(
                "stage counts violated at N={} / M={}",
                s.n_next, s.m_next
            )));
        }
    }
    report.insert("stages".into(), json!(stage_reports));

    // distribution contrast between the final ladder scales
    if let Some((n_last, m_last)) = plan.ladder() {
        let tol = Rational::new(1.into(), 64.into());
        let drift =
            diagnostics::drift_on_box(&pts, n_last as usize, m_last as usize, &q78, &one, &tol)?;
        let hard_ok = drift.hard >= Rational::new(1.into(), 16.into());
        let torus_ok = drift.torus <= Rational::new(1.into(), 32.into());
        report.insert("drift".into(), serde_json::to_value(&drift).expect("ser"));
        emit(&serde_json::Value::Object(report));
        if !hard_ok {
            return Err(CliError::Verification(
                "interval-metric drift on (7/8,1) below 1/16".into(),
            ));
        }
        if !torus_ok {
            return Err(CliError::Verification("torus-metric drift above 1/32".into()));
        }
    }
    Ok(())
}
