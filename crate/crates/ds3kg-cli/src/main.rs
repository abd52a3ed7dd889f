use clap::{Args, Parser, Subcommand, ValueEnum};
use ds3kg::fields::{FieldConfig, Perturbation, PhysParams};
use ds3kg::geometry::chart_for;
use ds3kg::integrate::{default_solve_setup, end_to_end, GridSpec};
use ds3kg::report::{catalog_doc, verify, VerifyOptions, VerifyReport};
use ds3kg::{Case, CaseId, Complex64, Error};
use serde::Serialize;
use std::collections::BTreeMap;
use std::io::Write;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "ds3kg", version, about = "Klein-Gordon symmetry reduction on 3D de Sitter space")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Subalgebra catalog with computed integrability data.
    Catalog(CatalogArgs),
    /// Runs the residual checks and reports them as JSON.
    Verify(VerifyArgs),
    /// Samples an assembled solution on a grid.
    Solve(SolveArgs),
    /// Exports chart embedding samples as CSV.
    Chart(ChartArgs),
}

#[derive(Args, Debug, Clone)]
struct Phys {
    #[arg(long, default_value_t = 0.1)]
    e: f64,
    #[arg(long, default_value_t = 0.5)]
    m: f64,
    #[arg(long, default_value_t = 0.0)]
    zeta: f64,
    #[arg(long, default_value_t = 1.0)]
    mu: f64,
    #[arg(long, default_value_t = 0.3)]
    mu1: f64,
    #[arg(long, default_value_t = -0.2)]
    mu2: f64,
    /// Family parameter of g1_3a and g3_3a (a > 0).
    #[arg(long)]
    a: Option<f64>,
}

impl Phys {
    fn params(&self) -> Result<PhysParams, Error> {
        let p = PhysParams { e: self.e, m: self.m, zeta: self.zeta, mu: self.mu, mu1: self.mu1, mu2: self.mu2 };
        p.validate()?;
        Ok(p)
    }
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug)]
struct CatalogArgs {
    #[command(flatten)]
    phys: Phys,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Case id (e.g. g3_2), a comma-separated list, or `all`.
    #[arg(long, default_value = "all")]
    case: String,
    #[command(flatten)]
    phys: Phys,
    #[arg(long = "J", default_value_t = 1.0)]
    j: f64,
    /// Spectral parameter "a+bi"; defaults to the per-case in-domain value.
    #[arg(long, value_parser = parse_complex)]
    lambda: Option<Complex64>,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Injected fault: none, chi:EPS or form:EPS.
    #[arg(long, value_parser = parse_perturbation, default_value = "none")]
    perturb: Perturbation,
    /// Tolerance override KEY=VALUE, repeatable.
    #[arg(long = "tol", value_parser = parse_tol)]
    tol: Vec<(String, f64)>,
    /// Points per chart for the embedding checks.
    #[arg(long, default_value_t = 200)]
    chart_points: usize,
    /// Probe points for field and Killing checks.
    #[arg(long, default_value_t = 50)]
    probe_points: usize,
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[arg(long)]
    case: String,
    #[command(flatten)]
    phys: Phys,
    #[arg(long = "J", default_value_t = 1.0)]
    j: f64,
    #[arg(long, value_parser = parse_complex)]
    lambda: Option<Complex64>,
    /// Grid "lo:hi:n,lo:hi:n,lo:hi:n" in chart coordinates.
    #[arg(long, value_parser = parse_grid)]
    grid: Option<GridSpec>,
    /// Basis member (1 or 2).
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
    which: u8,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Also write the JSON summary to this file.
    #[arg(long)]
    summary: Option<std::path::PathBuf>,
}

#[derive(Args, Debug)]
struct ChartArgs {
    #[arg(long)]
    case: String,
    #[arg(long)]
    a: Option<f64>,
    /// Grid "lo:hi:n,..."; defaults to a cell-centred grid over the chart box.
    #[arg(long, value_parser = parse_grid)]
    grid: Option<GridSpec>,
    /// Cells per axis for the default grid.
    #[arg(long, default_value_t = 5)]
    n: usize,
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let body = t.strip_suffix('i').ok_or_else(|| format!("complex value `{s}` must have the form a+bi"))?;
    // split at the last sign that is not an exponent sign and not leading
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'))
        .ok_or_else(|| format!("complex value `{s}` must have the form a+bi"))?;
    let re: f64 = body[..split].parse().map_err(|_| format!("bad real part in `{s}`"))?;
    let im_s = &body[split..];
    let im: f64 = im_s.parse().map_err(|_| format!("bad imaginary part in `{s}`"))?;
    Ok(Complex64::new(re, im))
}

fn parse_perturbation(s: &str) -> Result<Perturbation, String> {
    if s == "none" {
        return Ok(Perturbation::None);
    }
    let (kind, eps) = s.split_once(':').ok_or_else(|| format!("perturbation `{s}` must be none, chi:EPS or form:EPS"))?;
    let eps: f64 = eps.parse().map_err(|_| format!("bad epsilon in `{s}`"))?;
    match kind {
        "chi" => Ok(Perturbation::Chi(eps)),
        "form" => Ok(Perturbation::Form(eps)),
        _ => Err(format!("unknown perturbation kind `{kind}`")),
    }
}

fn parse_tol(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("tolerance `{s}` must be KEY=VALUE"))?;
    let v: f64 = v.parse().map_err(|_| format!("bad tolerance value in `{s}`"))?;
    if v.is_nan() || v <= 0.0 {
        return Err(format!("tolerance in `{s}` must be positive"));
    }
    Ok((k.to_string(), v))
}

fn parse_grid(s: &str) -> Result<GridSpec, String> {
    let axes: Vec<&str> = s.split(',').collect();
    if axes.len() != 3 {
        return Err(format!("grid `{s}` needs three axes lo:hi:n"));
    }
    let mut ranges = [(0.0, 0.0); 3];
    let mut counts = [0usize; 3];
    for (k, ax) in axes.iter().enumerate() {
        let parts: Vec<&str> = ax.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("grid axis `{ax}` must be lo:hi:n"));
        }
        let lo: f64 = parts[0].parse().map_err(|_| format!("bad grid bound `{}`", parts[0]))?;
        let hi: f64 = parts[1].parse().map_err(|_| format!("bad grid bound `{}`", parts[1]))?;
        let n: usize = parts[2].parse().map_err(|_| format!("bad grid count `{}`", parts[2]))?;
        if n < 2 {
            return Err("grid counts must be at least 2".into());
        }
        if hi.is_nan() || lo.is_nan() || hi <= lo {
            return Err(format!("grid axis `{ax}` needs lo < hi"));
        }
        ranges[k] = (lo, hi);
        counts[k] = n;
    }
    Ok(GridSpec { ranges, counts })
}

enum Failure {
    Usage(String),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain(_)
            | Error::UnknownCase(_)
            | Error::MissingParameter(_)
            | Error::Unsupported(..)
            | Error::OutOfRange(_) => Failure::Usage(e.to_string()),
            _ => Failure::Verification(e.to_string()),
        }
    }
}

fn resolve_case(name: &str, a: Option<f64>) -> Result<Case, Failure> {
    let id: CaseId = name.parse()?;
    Ok(Case::new(id, a)?)
}

fn json<T: Serialize>(v: &T) -> Result<String, Failure> {
    serde_json::to_string_pretty(v).map_err(|e| Failure::Verification(e.to_string()))
}

fn emit(s: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(s.as_bytes());
    let _ = out.flush();
}

fn cmd_catalog(args: CatalogArgs) -> Result<bool, Failure> {
    let doc = catalog_doc(args.phys.a, args.phys.params()?)?;
    emit(&(json(&doc)? + "\n"));
    for d in &doc.table3_diff {
        eprintln!("note: integrability row differs from the reference: {d}");
    }
    Ok(true)
}

fn summary_table(r: &VerifyReport) {
    eprintln!("{:<7} {:<5} {:<40}", "case", "pass", "failing checks");
    for c in &r.cases {
        let failing: Vec<String> = c
            .checks
            .iter()
            .filter(|(_, v)| !v.pass)
            .map(|(k, v)| format!("{k}={:.1e}", v.residual))
            .chain(c.errors.iter().cloned())
            .collect();
        eprintln!("{:<7} {:<5} {}", c.case, if c.pass { "yes" } else { "NO" }, failing.join(", "));
    }
}

fn cmd_verify(args: VerifyArgs) -> Result<bool, Failure> {
    let params = args.phys.params()?;
    let ids: Vec<CaseId> = if args.case == "all" {
        CaseId::ALL.to_vec()
    } else {
        let mut ids = args
            .case
            .split(',')
            .map(|name| resolve_case(name.trim(), args.phys.a).map(|c| c.id))
            .collect::<Result<Vec<_>, _>>()?;
        ids.sort();
        ids.dedup();
        ids
    };
    if let Some(a) = args.phys.a {
        Case::new(CaseId::G33a, Some(a))?;
    }
    let opts = VerifyOptions {
        params,
        a: args.phys.a,
        j: args.j,
        seed: args.seed,
        perturbation: args.perturb,
        chart_points: args.chart_points,
        probe_points: args.probe_points,
        lambda: args.lambda,
    };
    let mut report = verify(&ids, &opts)?;
    let overrides: BTreeMap<String, f64> = args.tol.into_iter().collect();
    report.override_tolerances(&overrides);
    emit(&(json(&report)? + "\n"));
    summary_table(&report);
    Ok(report.pass)
}

#[derive(Serialize)]
struct SolveSummary {
    schema: u32,
    case: String,
    parameter_a: Option<f64>,
    params: PhysParams,
    j: f64,
    lambda: Complex64,
    which: u8,
    grid: GridSpec,
    samples: usize,
    dropped: usize,
    record: ds3kg::integrate::ParamRecord,
    max_residual: f64,
    tolerance: f64,
    pass: bool,
}

fn cmd_solve(args: SolveArgs) -> Result<bool, Failure> {
    let case = resolve_case(&args.case, args.phys.a)?;
    let params = args.phys.params()?;
    let (default_grid, default_lambda) = default_solve_setup(case.id)?;
    let grid = args.grid.unwrap_or(default_grid);
    let lambda = args.lambda.unwrap_or(default_lambda);
    let cfg = FieldConfig::new(case, params)?;
    let run = end_to_end(&cfg, args.j, lambda, &grid, args.which as usize)?;
    if run.dropped > 0 {
        eprintln!("warning: {} grid nodes dropped at branch points", run.dropped);
    }
    let tol = ds3kg::integrate::END_TO_END_TOL;
    let summary = SolveSummary {
        schema: ds3kg::report::SCHEMA,
        case: case.id.cli_name(),
        parameter_a: case.a,
        params,
        j: args.j,
        lambda,
        which: args.which,
        grid,
        samples: run.samples.len(),
        dropped: run.dropped,
        record: run.record.clone(),
        max_residual: run.max_residual,
        tolerance: tol,
        pass: run.max_residual < tol,
    };
    let summary_json = json(&summary)? + "\n";
    if let Some(path) = &args.summary {
        std::fs::write(path, &summary_json).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?;
    }
    match args.format {
        Format::Json => emit(&summary_json),
        Format::Csv => {
            let names = chart_for(case).coord_names;
            let mut s = format!("{},{},{},re_phi,im_phi,residual\n", names[0], names[1], names[2]);
            for p in &run.samples {
                s += &format!(
                    "{},{},{},{:.16e},{:.16e},{:.6e}\n",
                    nz(p.xi[0]),
                    nz(p.xi[1]),
                    nz(p.xi[2]),
                    nz(p.phi.re),
                    nz(p.phi.im),
                    p.residual
                );
            }
            emit(&s);
            eprintln!("max residual {:.3e} over {} nodes", run.max_residual, run.samples.len());
        }
    }
    Ok(summary.pass)
}

fn cmd_chart(args: ChartArgs) -> Result<bool, Failure> {
    let case = resolve_case(&args.case, args.a)?;
    let chart = chart_for(case);
    let pts: Vec<[f64; 3]> = match &args.grid {
        Some(g) => g.points(),
        None => {
            if args.n < 1 {
                return Err(Failure::Usage("--n must be at least 1".into()));
            }
            let axis = |(lo, hi): (f64, f64)| -> Vec<f64> {
                (0..args.n).map(|i| lo + (hi - lo) * (i as f64 + 0.5) / args.n as f64).collect()
            };
            let (a, b, c) = (axis(chart.domain[0]), axis(chart.domain[1]), axis(chart.domain[2]));
            let mut v = Vec::with_capacity(a.len() * b.len() * c.len());
            for &x in &a {
                for &y in &b {
                    for &z in &c {
                        v.push([x, y, z]);
                    }
                }
            }
            v
        }
    };
    if let Some(bad) = pts.iter().find(|p| !chart.contains(**p)) {
        return Err(Failure::Usage(format!("grid point {bad:?} outside the chart box {:?}", chart.domain)));
    }
    let n = chart.coord_names;
    let mut s = format!("case,{},{},{},x0,x1,x2,x3,hyperboloid_residual\n", n[0], n[1], n[2]);
    let mut worst: f64 = 0.0;
    for p in &pts {
        let x = chart.map(*p);
        let r = x.hyperboloid_residual();
        worst = worst.max(r);
        s += &format!(
            "{},{},{},{},{:.16e},{:.16e},{:.16e},{:.16e},{:.3e}\n",
            case.id.cli_name(),
            nz(p[0]),
            nz(p[1]),
            nz(p[2]),
            nz(x.x[0]),
            nz(x.x[1]),
            nz(x.x[2]),
            nz(x.x[3]),
            r
        );
    }
    emit(&s);
    Ok(worst < 1e-12)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Catalog(a) => cmd_catalog(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Solve(a) => cmd_solve(a),
        Command::Chart(a) => cmd_chart(a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Verification(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}

/// Folds -0.0 into 0.0 so printed tables do not depend on the sign of zero.
fn nz(v: f64) -> f64 {
    v + 0.0
}
