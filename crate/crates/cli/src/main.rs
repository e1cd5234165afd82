//! `szego`: compute, predict and verify zeros of scaled partial sums.
//!
//! Exit codes: 0 success, 1 numerical or check failure, 2 usage or configuration error.

mod config;
mod svg;

use std::fs::File;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use szego::curve::{phi, trace};
use szego::harness::{
    buckholtz_from_roots, disk_from_roots, exp_section_roots, exterior_from_roots, match_predictions, match_rows,
    rate_fit, rate_row, ratio_limit_check, root_rows, write_csv, write_json, MatchReport, RateModel, RateRow,
    RatioSite,
};
use szego::laplace::{
    boundary_demo, comparison_table, interior_demo, log_power, watson, builtin_watson, ComparisonRow, ENVELOPE_LAMBDAS,
    LOG_POWER_DEMO,
};
use szego::predict::{
    arc_predicted_zeros, corner_gate, corner_predicted_zeros, write_predictions_csv, write_predictions_json, ArcPoint,
    PredictionRecord,
};
use szego::rootfind::{all_roots_with, RootOptions};
use szego::series::{make_family, partial_sum, FamilyKind, FunctionFamily, RadiusMode};
use szego::{Complex64, RootSet};

use config::{Overrides, RunConfig};
use svg::{write_plot, PlotPoint, Style};

/// Failures, split by exit code.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numeric(szego::Error),
    Check(Vec<String>),
}

impl From<szego::Error> for CliError {
    fn from(e: szego::Error) -> Self {
        match e {
            szego::Error::UnknownFamily(_) | szego::Error::Parameter(_) => CliError::Usage(e.to_string()),
            e => CliError::Numeric(e),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Numeric(e.into())
    }
}

#[derive(Parser, Debug)]
#[command(name = "szego", version, about = "Zeros of scaled partial sums of entire functions")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// JSON run configuration; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, env = "SZEGO_OUT_DIR")]
    out: Option<PathBuf>,
    /// Family name, e.g. exp, sin, confluent.
    #[arg(long, global = true)]
    family: Option<String>,
    /// Family parameters as a JSON object, e.g. '{"alpha": -0.5, "beta": -2.5}'.
    #[arg(long, global = true)]
    params: Option<String>,
    /// Comma-separated list of n.
    #[arg(long, global = true, value_delimiter = ',')]
    n: Option<Vec<usize>>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    root_tol: Option<f64>,
    #[arg(long, global = true)]
    radius_factor: Option<f64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Maclaurin coefficients as scaled mantissa/exponent pairs.
    Coeffs {
        #[arg(long, default_value_t = 64)]
        count: usize,
    },
    /// Zeros of p_{n-1}(r_n z): CSV and a scaled-plane plot with the limit curve.
    Roots {
        #[arg(long, value_enum, default_value_t = Radius::Standard)]
        radius: Radius,
    },
    /// Samples of the limit curve.
    Curve {
        /// Order; defaults to the family's order.
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long, default_value_t = 512)]
        m: usize,
    },
    /// Arc and corner predicted zeros.
    Predict {
        /// Comma-separated arc arguments; default ±0.3, ±0.4, ..., ±1.2.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        args: Option<Vec<f64>>,
        /// Tower indices -k..=k at each argument.
        #[arg(long, default_value_t = 0)]
        k: i64,
        #[arg(long, default_value_t = 2)]
        corner_count: usize,
    },
    /// Run the quantitative checks for the family; exit 1 when one fails.
    Verify,
    /// Asymptotic series against quadrature.
    Laplace {
        #[arg(long, value_enum, default_value_t = Demo::All)]
        demo: Demo,
        #[arg(long, value_delimiter = ',', default_values_t = [20.0, 50.0, 100.0])]
        lambdas: Vec<f64>,
    },
    /// Roots, predictions and matches for every n, with a summary table.
    Report,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Radius {
    Standard,
    MittagLefflerCorrected,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Demo {
    WatsonDemo,
    LogPower,
    Boundary,
    Interior,
    All,
}

struct Ctx {
    cfg: RunConfig,
    fam: FunctionFamily,
    dir: PathBuf,
}

impl Ctx {
    fn new(common: Common) -> Result<Self, CliError> {
        let cfg = RunConfig::load(
            common.config.as_deref(),
            Overrides {
                family: common.family,
                params: common.params,
                n_list: common.n,
                output_dir: common.out,
                root_tol: common.root_tol,
                radius_factor: common.radius_factor,
                seed: common.seed,
            },
        )?;
        let fam = make_family(&cfg.family.name, &cfg.family.params)?;
        std::fs::create_dir_all(&cfg.output_dir)
            .map_err(|e| CliError::Usage(format!("output dir {} not writable: {e}", cfg.output_dir.display())))?;
        let dir = cfg.output_dir.clone();
        Ok(Ctx { cfg, fam, dir })
    }

    fn file(&self, name: &str) -> Result<File, CliError> {
        Ok(File::create(self.dir.join(name))?)
    }

    fn stem(&self) -> String {
        self.fam.name.clone()
    }

    fn roots(&self, poly: &szego::series::PartialSumPoly) -> Result<RootSet, CliError> {
        let opts = RootOptions {
            tol: self.cfg.tolerances.root_tol,
            seed: self.cfg.seed,
            ..RootOptions::default()
        };
        Ok(all_roots_with(poly, &opts)?)
    }

    /// Root sets for every n, computed concurrently, in input order.
    fn roots_for(&self, mode: RadiusMode) -> Result<Vec<RootSet>, CliError> {
        self.cfg
            .n_list
            .par_iter()
            .map(|&n| self.roots(&partial_sum(&self.fam, n, mode)?))
            .collect()
    }

    fn require_min_n(&self, min: usize) -> Result<(), CliError> {
        self.cfg.require_min_n(min)
    }
}

fn curve_points(lambda: f64, m: usize) -> Result<Vec<PlotPoint>, CliError> {
    let samples = trace(lambda, m)?;
    let upper = samples.iter().map(|s| (s.xi.re, s.xi.im));
    let lower = samples.iter().rev().map(|s| (s.xi.re, -s.xi.im));
    Ok(upper
        .chain(lower)
        .map(|(x, y)| PlotPoint { series: "curve".into(), x, y })
        .collect())
}

fn cmd_coeffs(ctx: &Ctx, count: usize) -> Result<(), CliError> {
    #[derive(Serialize)]
    struct Row {
        family: String,
        k: usize,
        mantissa_re: f64,
        mantissa_im: f64,
        exponent2: i64,
    }
    let rows: Vec<Row> = ctx
        .fam
        .coefficients(count)?
        .iter()
        .enumerate()
        .map(|(k, c)| Row {
            family: ctx.fam.name.clone(),
            k,
            mantissa_re: c.mantissa().re,
            mantissa_im: c.mantissa().im,
            exponent2: c.exponent(),
        })
        .collect();
    write_csv(&rows, ctx.file(&format!("{}_coeffs.csv", ctx.stem()))?)?;
    Ok(())
}

fn cmd_roots(ctx: &Ctx, radius: Radius) -> Result<(), CliError> {
    ctx.require_min_n(2)?;
    let mode = match radius {
        Radius::Standard => RadiusMode::Standard,
        Radius::MittagLefflerCorrected => RadiusMode::MittagLefflerCorrected,
    };
    let sets = ctx.roots_for(mode)?;
    let curve = curve_points(ctx.fam.growth.lambda, 256)?;
    for rs in &sets {
        let stem = format!("{}_n{}_roots", ctx.stem(), rs.n);
        write_csv(&root_rows(rs), ctx.file(&format!("{stem}.csv"))?)?;
        let mut pts = curve.clone();
        pts.extend(rs.roots.iter().map(|z| PlotPoint { series: "roots".into(), x: z.re, y: z.im }));
        write_plot(
            &ctx.dir,
            &format!("{stem}_plot"),
            &format!("zeros of p_{}(r_n z), {}", rs.n - 1, ctx.fam.name),
            &[("curve", Style::Line("#888")), ("roots", Style::Dots("#c00"))],
            &pts,
        )?;
    }
    Ok(())
}

fn cmd_curve(ctx: &Ctx, lambda: Option<f64>, m: usize) -> Result<(), CliError> {
    let lambda = lambda.unwrap_or(ctx.fam.growth.lambda);
    #[derive(Serialize)]
    struct Row {
        arg: f64,
        re: f64,
        im: f64,
        tau: f64,
        re_phi: f64,
    }
    let samples = trace(lambda, m)?;
    let rows = samples
        .iter()
        .map(|s| {
            Ok(Row {
                arg: s.arg,
                re: s.xi.re,
                im: s.xi.im,
                tau: s.tau,
                re_phi: phi(s.xi, lambda)?.re,
            })
        })
        .collect::<Result<Vec<_>, szego::Error>>()?;
    let stem = format!("curve_lambda{lambda}");
    write_csv(&rows, ctx.file(&format!("{stem}.csv"))?)?;
    write_plot(
        &ctx.dir,
        &format!("{stem}_plot"),
        &format!("limit curve, lambda = {lambda}"),
        &[("curve", Style::Line("#000"))],
        &curve_points(lambda, m)?,
    )
}

fn default_args() -> Vec<f64> {
    (3..=12).flat_map(|j| [j as f64 / 10.0, -(j as f64) / 10.0]).collect()
}

fn predictions(ctx: &Ctx, n: usize, args: &[f64], k: i64, corner_count: usize) -> Result<Vec<PredictionRecord>, CliError> {
    let mut out = Vec::new();
    for &a in args {
        let p = ArcPoint::at_arg(&ctx.fam, a, n)?;
        match arc_predicted_zeros(&p, -k..=k) {
            Ok(r) => out.extend(r),
            Err(szego::Error::Degenerate(_)) => {}
            Err(e) => return Err(e.into()),
        }
    }
    if corner_count > 0 && corner_gate(&ctx.fam).is_ok() {
        out.extend(corner_predicted_zeros(&ctx.fam, n, corner_count, RadiusMode::Standard)?);
    }
    Ok(out)
}

fn cmd_predict(ctx: &Ctx, args: Option<Vec<f64>>, k: i64, corner_count: usize) -> Result<(), CliError> {
    ctx.require_min_n(3)?;
    let args = args.unwrap_or_else(default_args);
    let mut all = Vec::new();
    for &n in &ctx.cfg.n_list {
        all.extend(predictions(ctx, n, &args, k, corner_count)?);
    }
    write_predictions_csv(&all, ctx.file(&format!("{}_predictions.csv", ctx.stem()))?)?;
    write_predictions_json(&all, ctx.file(&format!("{}_predictions.json", ctx.stem()))?)?;
    Ok(())
}

#[derive(Serialize)]
struct CheckRecord {
    check: String,
    n: Option<usize>,
    pass: bool,
    detail: String,
}

fn check(name: &str, n: Option<usize>, pass: bool, detail: String) -> CheckRecord {
    CheckRecord {
        check: name.to_string(),
        n,
        pass,
        detail,
    }
}

fn matched_fraction(rep: &MatchReport, total: usize) -> f64 {
    rep.pairs.iter().filter(|p| p.normalized_error <= 10.0).count() as f64 / total.max(1) as f64
}

fn cmd_verify(ctx: &Ctx) -> Result<(), CliError> {
    ctx.require_min_n(3)?;
    let fam = &ctx.fam;
    let sets = ctx.roots_for(RadiusMode::Standard)?;
    let mut checks = Vec::new();
    let mut matches = Vec::new();
    let mut rates: Vec<RateRow> = Vec::new();
    let mut medians = Vec::new();
    for rs in &sets {
        let preds = predictions(ctx, rs.n, &default_args(), 0, 0)?;
        let rep = match_predictions(&preds, rs, ctx.cfg.tolerances.radius_factor);
        let frac = matched_fraction(&rep, preds.len());
        checks.push(check("arc_match", Some(rs.n), frac >= 0.9, format!("{:.3} of {} predictions matched", frac, preds.len())));
        let mut e: Vec<f64> = rep.pairs.iter().map(|p| p.abs_error).collect();
        e.sort_by(f64::total_cmp);
        if let Some(m) = e.get(e.len() / 2) {
            medians.push((rs.n, *m));
        }
        matches.extend(match_rows(&rep));
        if corner_gate(fam).is_ok() {
            let cp = corner_predicted_zeros(fam, rs.n, 2, RadiusMode::Standard)?;
            let rep = match_predictions(&cp, rs, ctx.cfg.tolerances.radius_factor);
            let ok = rep.pairs.len() == cp.len() && rep.pairs.iter().all(|p| p.normalized_error <= 10.0);
            checks.push(check("corner_match", Some(rs.n), ok, format!("{} of {} corner predictions matched", rep.pairs.len(), cp.len())));
            matches.extend(match_rows(&rep));
        }
    }
    if medians.len() >= 3 && medians.iter().all(|m| m.1 > 0.0) {
        rates.push(rate_row(&fam.name, "arc_match_median", &rate_fit(&medians, RateModel::LognOverN)?));
    }
    if matches!(fam.kind, FamilyKind::Exp) {
        for &n in &ctx.cfg.n_list {
            let rs = exp_section_roots(fam, n)?;
            let d = disk_from_roots(&rs);
            checks.push(check("enestrom_kakeya", Some(n), d.pass, format!("max |z| = {:.9}", d.max_modulus)));
            let b = buckholtz_from_roots(&rs)?;
            checks.push(check("buckholtz", Some(n), b.pass, format!("{:.4} <= {:.4}", b.max_distance, b.bound)));
        }
        if sets.len() >= 3 {
            let ex = exterior_from_roots(fam, &sets, (0.5, 1.0))?;
            for r in &ex.rows {
                let ok = r.all_exterior && (0.5..=1.5).contains(&r.normalized);
                checks.push(check("exterior_approach", Some(r.n), ok, format!("normalized {:.3}", r.normalized)));
            }
            rates.push(rate_row(&fam.name, "exterior_approach", &ex.fit));
            let corner_w = [Complex64::new(-0.5, 0.0), Complex64::new(-1.0, 0.0), Complex64::new(-1.0, 1.0), Complex64::new(-1.0, -1.0)];
            let arc_w = [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0), Complex64::new(0.0, 1.0), Complex64::new(0.0, -1.0)];
            let xi = Complex64::new(0.0, (-1f64).exp());
            for (name, site, ws) in [("corner_ratio", RatioSite::Corner, &corner_w[..]), ("arc_ratio", RatioSite::Arc { xi }, &arc_w[..])] {
                let rows = ratio_limit_check(fam, site, ws, &ctx.cfg.n_list)?;
                for w in ws {
                    let e: Vec<f64> = rows.iter().filter(|r| r.w == *w).map(|r| r.error).collect();
                    let ok = szego::harness::decreasing_with_one_inversion(&e);
                    let shown: Vec<String> = e.iter().map(|x| format!("{x:.3e}")).collect();
                    checks.push(check(name, None, ok, format!("w = {w}: errors {}", shown.join(", "))));
                }
                write_json(&rows, ctx.file(&format!("{}_{name}.json", ctx.stem()))?)?;
            }
        }
    }
    write_csv(&matches, ctx.file(&format!("{}_matches.csv", ctx.stem()))?)?;
    write_json(&matches, ctx.file(&format!("{}_matches.json", ctx.stem()))?)?;
    write_csv(&rates, ctx.file(&format!("{}_rates.csv", ctx.stem()))?)?;
    write_json(&rates, ctx.file(&format!("{}_rates.json", ctx.stem()))?)?;
    write_json(&checks, ctx.file(&format!("{}_checks.json", ctx.stem()))?)?;
    for c in &checks {
        println!("{} {}{}: {}", if c.pass { "PASS" } else { "FAIL" }, c.check, c.n.map(|n| format!(" n={n}")).unwrap_or_default(), c.detail);
    }
    let failed: Vec<String> = checks.iter().filter(|c| !c.pass).map(|c| c.check.clone()).collect();
    if failed.is_empty() { Ok(()) } else { Err(CliError::Check(failed)) }
}

fn cmd_laplace(ctx: &Ctx, demo: Demo, lambdas: &[f64]) -> Result<(), CliError> {
    if lambdas.iter().any(|l| !(*l > 0.0)) {
        return Err(CliError::Usage("lambdas must be positive".into()));
    }
    let mut rows: Vec<ComparisonRow> = comparison_table(lambdas, 5)?;
    rows.retain(|r| match demo {
        Demo::WatsonDemo => r.integrand != "log_power_demo",
        Demo::LogPower => r.integrand == "log_power_demo",
        Demo::All => true,
        _ => false,
    });
    #[derive(Serialize)]
    struct Envelope {
        demo: String,
        series: String,
        constant: f64,
    }
    let mut env = Vec::new();
    if matches!(demo, Demo::Boundary | Demo::All) {
        let (s, c) = boundary_demo(&ENVELOPE_LAMBDAS)?;
        env.push(Envelope { demo: "boundary".into(), series: s.to_string(), constant: c });
    }
    if matches!(demo, Demo::Interior | Demo::All) {
        let (s, c) = interior_demo(&ENVELOPE_LAMBDAS)?;
        env.push(Envelope { demo: "interior".into(), series: s.to_string(), constant: c });
    }
    let mut series = Vec::new();
    if matches!(demo, Demo::WatsonDemo | Demo::All) {
        for w in builtin_watson() {
            series.push((w.name.to_string(), watson(&(w.expansion)(6), 6)?.to_string()));
        }
    }
    if matches!(demo, Demo::LogPower | Demo::All) {
        series.push(("log_power_demo".into(), log_power(LOG_POWER_DEMO.0, LOG_POWER_DEMO.1, 6)?.to_string()));
    }
    if !rows.is_empty() {
        write_csv(&rows, ctx.file("laplace_comparison.csv")?)?;
        write_json(&rows, ctx.file("laplace_comparison.json")?)?;
        for r in &rows {
            println!("{} lambda={} m={} err={:.3e} omitted={:.3e} {}", r.integrand, r.lambda, r.terms, r.abs_error, r.first_omitted, if r.within { "ok" } else { "OUTSIDE" });
        }
    }
    if !env.is_empty() {
        write_json(&env, ctx.file("laplace_envelopes.json")?)?;
        for e in &env {
            println!("{} envelope constant {:.4}: {}", e.demo, e.constant, e.series);
        }
    }
    if !series.is_empty() {
        let mut f = ctx.file("laplace_series.txt")?;
        for (name, s) in &series {
            use std::io::Write;
            writeln!(f, "{name}: {s}")?;
        }
    }
    Ok(())
}

fn cmd_report(ctx: &Ctx) -> Result<(), CliError> {
    ctx.require_min_n(3)?;
    let sets = ctx.roots_for(RadiusMode::Standard)?;
    #[derive(Serialize)]
    struct Summary {
        family: String,
        n: usize,
        roots: usize,
        max_residual: f64,
        predictions: usize,
        matched: usize,
        median_normalized_error: Option<f64>,
    }
    let mut summary = Vec::new();
    let mut roots = Vec::new();
    let mut matches = Vec::new();
    let mut preds_all = Vec::new();
    for rs in &sets {
        let preds = predictions(ctx, rs.n, &default_args(), 0, 2)?;
        let rep = match_predictions(&preds, rs, ctx.cfg.tolerances.radius_factor);
        let mut e: Vec<f64> = rep.pairs.iter().map(|p| p.normalized_error).collect();
        e.sort_by(f64::total_cmp);
        summary.push(Summary {
            family: ctx.fam.name.clone(),
            n: rs.n,
            roots: rs.roots.len(),
            max_residual: rs.max_residual(),
            predictions: preds.len(),
            matched: rep.pairs.len(),
            median_normalized_error: e.get(e.len() / 2).copied(),
        });
        roots.extend(root_rows(rs));
        matches.extend(match_rows(&rep));
        preds_all.extend(preds);
    }
    let stem = ctx.stem();
    write_csv(&roots, ctx.file(&format!("{stem}_roots.csv"))?)?;
    write_json(&roots, ctx.file(&format!("{stem}_roots.json"))?)?;
    write_csv(&matches, ctx.file(&format!("{stem}_matches.csv"))?)?;
    write_json(&matches, ctx.file(&format!("{stem}_matches.json"))?)?;
    write_predictions_csv(&preds_all, ctx.file(&format!("{stem}_predictions.csv"))?)?;
    write_json(&summary, ctx.file(&format!("{stem}_summary.json"))?)?;
    let mut md = format!("# {} report\n\n| n | roots | max residual | predictions | matched | median normalized error |\n|---|---|---|---|---|---|\n", ctx.fam.name);
    for s in &summary {
        md.push_str(&format!(
            "| {} | {} | {:.2e} | {} | {} | {} |\n",
            s.n,
            s.roots,
            s.max_residual,
            s.predictions,
            s.matched,
            s.median_normalized_error.map_or("-".into(), |e| format!("{e:.3}"))
        ));
    }
    std::fs::write(ctx.dir.join(format!("{stem}_summary.md")), md)?;
    print!("{}", std::fs::read_to_string(ctx.dir.join(format!("{stem}_summary.md")))?);
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    let ctx = Ctx::new(cli.common)?;
    match cli.command {
        Command::Coeffs { count } => cmd_coeffs(&ctx, count),
        Command::Roots { radius } => cmd_roots(&ctx, radius),
        Command::Curve { lambda, m } => cmd_curve(&ctx, lambda, m),
        Command::Predict { args, k, corner_count } => cmd_predict(&ctx, args, k, corner_count),
        Command::Verify => cmd_verify(&ctx),
        Command::Laplace { demo, lambdas } => cmd_laplace(&ctx, demo, &lambdas),
        Command::Report => cmd_report(&ctx),
    }
}

fn failure_record(dir: Option<&Path>, kind: &str, message: &str) {
    let rec = serde_json::json!({ "status": "failure", "kind": kind, "message": message });
    eprintln!("{rec}");
    if let Some(d) = dir {
        let _ = std::fs::write(d.join("failure.json"), format!("{rec}\n"));
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = cli.common.out.clone().or_else(|| std::env::var_os("SZEGO_OUT_DIR").map(PathBuf::from));
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(CliError::Numeric(e)) => {
            failure_record(out.as_deref().filter(|d| d.is_dir()), "numerical", &e.to_string());
            ExitCode::from(1)
        }
        Err(CliError::Check(failed)) => {
            failure_record(out.as_deref().filter(|d| d.is_dir()), "check", &format!("failed checks: {}", failed.join(", ")));
            ExitCode::from(1)
        }
    }
}
