//! Batch front end: spectral density tables, spectral function grids,
//! matching-point convergence studies, and named benchmark presets.

mod spec;
mod table;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use rayon::prelude::*;
use sldens::appell::Method;
use sldens::density::{auto_density_with, density_at};
use sldens::reference::ExactExample;
use sldens::spectral::{rho_grid_with, PAPER16};
use sldens::Potential;
use spec::{parse_lambdas, parse_method, parse_potential};
use std::fs::File;
use std::io::Write;
use std::time::Instant;
use table::{fmt_value, Format, Table};

#[derive(Parser)]
#[command(
    name = "sldens",
    about = "Spectral density and spectral function computation for singular Sturm-Liouville problems on (0, inf)",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct OutputArgs {
    /// Output encoding: csv or text
    #[arg(long, default_value = "text")]
    format: String,
    /// Output path (stdout when omitted)
    #[arg(long)]
    out: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Spectral density f(lambda), one row per lambda
    Density {
        /// Potential spec: rational:A=<v>,B=<v> or barrier:ell=<n>,a=<v>
        #[arg(long)]
        potential: String,
        /// Comma list of lambda values, or grid:paper16
        #[arg(long)]
        lambda: String,
        /// Matching refinement tolerance
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        /// Approximant override: F1, F2, F3 or fN
        #[arg(long)]
        method: Option<String>,
        /// Order used by fN (also the default order for the converge table)
        #[arg(long = "N", default_value_t = 6)]
        n: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Spectral function rho over an ordered lambda grid
    Rho {
        #[arg(long)]
        potential: String,
        #[arg(long)]
        lambda: String,
        /// rho(0), added to every accumulated value
        #[arg(long, default_value_t = 0.0)]
        rho0: f64,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long)]
        method: Option<String>,
        #[arg(long = "N", default_value_t = 6)]
        n: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Density vs. matching point for every applicable approximant
    Converge {
        #[arg(long)]
        potential: String,
        /// Single lambda value
        #[arg(long)]
        lambda: f64,
        /// Comma list of matching points (default: 8 doublings from the heuristic)
        #[arg(long)]
        x: Option<String>,
        #[arg(long = "N", default_value_t = 6)]
        n: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Named reproduction presets: t8.1 t8.2 t8.3 t8.4 t9.1 t9.2-errors
    Table {
        preset: String,
        #[command(flatten)]
        output: OutputArgs,
    },
}

fn main() {
    let args = match expand_config_args(std::env::args().collect()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::exit(2);
        }
    };
    let cli = Cli::parse_from(args);
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::exit(2);
        }
    }
}

/// `--config <path>` loads key=value lines whose keys are the flag names
/// (potential, lambda, tol, rho0, method, N, format, out, x); values from
/// the file fill in flags not given explicitly on the command line.
fn expand_config_args(mut args: Vec<String>) -> Result<Vec<String>> {
    let Some(pos) = args.iter().position(|a| a == "--config") else {
        return Ok(args);
    };
    if pos + 1 >= args.len() {
        bail!("--config requires a file path");
    }
    let path = args[pos + 1].clone();
    args.drain(pos..=pos + 1);
    let text =
        std::fs::read_to_string(&path).with_context(|| format!("cannot read config {path}"))?;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .with_context(|| format!("{path}:{}: expected key=value", lineno + 1))?;
        let flag = format!("--{}", key.trim());
        if !args.iter().any(|a| *a == flag) {
            args.push(flag);
            args.push(value.trim().to_string());
        }
    }
    Ok(args)
}

fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Density {
            potential,
            lambda,
            tol,
            method,
            n,
            output,
        } => {
            let p = parse_potential(&potential)?;
            let lambdas = sorted(parse_lambdas(&lambda)?);
            let method = method.map(|m| parse_method(&m, n)).transpose()?;
            run_density(&p, &lambdas, tol, method, &output)
        }
        Command::Rho {
            potential,
            lambda,
            rho0,
            tol,
            method,
            n,
            output,
        } => {
            let p = parse_potential(&potential)?;
            let lambdas = sorted(parse_lambdas(&lambda)?);
            let method = method.map(|m| parse_method(&m, n)).transpose()?;
            run_rho(&p, &lambdas, rho0, tol, method, &output)
        }
        Command::Converge {
            potential,
            lambda,
            x,
            n,
            output,
        } => {
            let p = parse_potential(&potential)?;
            let xs = match x {
                Some(list) => sorted(parse_lambdas(&list)?),
                None => default_x_ladder(&p, lambda)?,
            };
            run_converge(&p, lambda, &xs, n, &output)
        }
        Command::Table { preset, output } => run_table(&preset, &output),
    }
}

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

fn parse_format(output: &OutputArgs) -> Result<Format> {
    match output.format.as_str() {
        "csv" => Ok(Format::Csv),
        "text" => Ok(Format::Text),
        other => bail!("unknown format '{other}' (expected csv or text)"),
    }
}

fn emit(table: &Table, output: &OutputArgs) -> Result<()> {
    let format = parse_format(output)?;
    match &output.out {
        Some(path) => {
            let mut f = File::create(path).with_context(|| format!("cannot create {path}"))?;
            table.write(format, &mut f)?;
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            table.write(format, &mut lock)?;
            lock.flush()?;
        }
    }
    Ok(())
}

fn run_density(
    p: &Potential,
    lambdas: &[f64],
    tol: f64,
    method: Option<Method>,
    output: &OutputArgs,
) -> Result<i32> {
    parse_format(output)?; // fail on bad format before computing
    let results: Vec<_> = lambdas
        .par_iter()
        .map(|&lam| auto_density_with(p, lam, tol, method))
        .collect();
    let mut t = Table::new(vec!["lambda", "f", "x_match", "err_est", "method", "status"]);
    let mut failures = 0;
    for (lam, r) in lambdas.iter().zip(results) {
        match r {
            Ok(est) => t.push_row(vec![
                fmt_value(*lam),
                fmt_value(est.value),
                fmt_value(est.x_match),
                est.err_est.map(fmt_value).unwrap_or_else(|| "nan".into()),
                est.method.to_string(),
                "ok".into(),
            ]),
            Err(e) => {
                failures += 1;
                t.push_row(vec![
                    fmt_value(*lam),
                    "nan".into(),
                    "nan".into(),
                    "nan".into(),
                    "-".into(),
                    format!("FAILED: {e}"),
                ]);
            }
        }
    }
    emit(&t, output)?;
    Ok(if failures > 0 { 1 } else { 0 })
}

fn run_rho(
    p: &Potential,
    lambdas: &[f64],
    rho0: f64,
    tol: f64,
    method: Option<Method>,
    output: &OutputArgs,
) -> Result<i32> {
    parse_format(output)?;
    let grid = rho_grid_with(p, lambdas, rho0, tol, method)?;
    let mut t = Table::new(vec!["lambda", "rho", "est_error", "f_evals", "status"]);
    let mut failures = 0;
    for (j, &lam) in grid.lambdas.iter().enumerate() {
        let rec = &grid.intervals[j];
        let status = match &rec.failure {
            Some(msg) => {
                failures += 1;
                format!("FAILED: {msg}")
            }
            None if !rec.converged => {
                failures += 1;
                "FAILED: quadrature budget exhausted".into()
            }
            None => "ok".into(),
        };
        t.push_row(vec![
            fmt_value(lam),
            fmt_value(grid.rho[j]),
            fmt_value(rec.est_error),
            rec.f_evals.to_string(),
            status,
        ]);
    }
    emit(&t, output)?;
    Ok(if failures > 0 { 1 } else { 0 })
}

fn default_x_ladder(p: &Potential, lambda: f64) -> Result<Vec<f64>> {
    let x0 = sldens::frobenius::series_cutoff(p, lambda)
        .map_err(|e| anyhow::anyhow!("invalid lambda: {e}"))?;
    let start = sldens::density::matching_heuristic(p.q1(), p.q0(), lambda)
        .max(1.25 * x0)
        .max(1.0);
    Ok((0..8).map(|k| start * 2f64.powi(k)).collect())
}

fn run_converge(
    p: &Potential,
    lambda: f64,
    xs: &[f64],
    n: usize,
    output: &OutputArgs,
) -> Result<i32> {
    parse_format(output)?;
    let mut methods = vec![Method::F1, Method::F2, Method::F3];
    if p.is_rational() {
        methods.push(Method::FN(n));
    }
    let mut headers = vec!["x".to_string()];
    headers.extend(methods.iter().map(|m| m.to_string()));
    let mut t = Table::new(headers);

    let cells: Vec<Vec<Option<f64>>> = xs
        .par_iter()
        .map(|&x| {
            methods
                .iter()
                .map(|&m| density_at(p, lambda, x, m).ok().map(|d| d.value))
                .collect()
        })
        .collect();
    for (x, row) in xs.iter().zip(&cells) {
        let mut out = vec![fmt_value(*x)];
        out.extend(
            row.iter()
                .map(|c| c.map(fmt_value).unwrap_or_else(|| "nan".into())),
        );
        t.push_row(out);
    }
    emit(&t, output)?;
    // a study is usable when the largest matching point produced a value
    // for every applicable approximant
    let last_ok = cells
        .last()
        .map(|row| row.iter().all(|c| c.is_some()))
        .unwrap_or(false);
    Ok(if last_ok { 0 } else { 1 })
}

/// Matching points used by the reference density tables, per lambda.
const TABLE8_POINTS: [(f64, f64); 16] = [
    (0.1, 320.0),
    (0.2, 225.0),
    (0.4, 160.0),
    (1.0, 100.0),
    (2.0, 71.0),
    (4.0, 50.0),
    (10.0, 32.0),
    (20.0, 22.5),
    (40.0, 16.0),
    (100.0, 10.0),
    (200.0, 7.0),
    (400.0, 5.0),
    (1000.0, 3.2),
    (2000.0, 2.2),
    (4000.0, 1.6),
    (10000.0, 1.0),
];

fn conv_err(approx: f64, exact: f64) -> f64 {
    if exact.abs() < 1.0 {
        approx - exact
    } else {
        (approx - exact) / exact
    }
}

fn density_error_table(example: &ExactExample) -> Table {
    let p = example.potential();
    let mut t = Table::new(vec!["lambda", "x", "F1", "F2", "F3", "f6"]);
    let rows: Vec<Vec<String>> = TABLE8_POINTS
        .par_iter()
        .map(|&(lam, x)| {
            let exact = example.density(lam);
            let mut row = vec![fmt_value(lam), fmt_value(x)];
            for m in [Method::F1, Method::F2, Method::F3, Method::FN(6)] {
                let cell = match density_at(&p, lam, x, m) {
                    Ok(est) => format!("{:+.2e}", conv_err(est.value, exact)),
                    Err(_) => "nan".into(),
                };
                row.push(cell);
            }
            row
        })
        .collect();
    for r in rows {
        t.push_row(r);
    }
    t
}

fn barrier_table() -> Table {
    let mut t = Table::new(vec!["lambda", "x", "l=0", "l=1", "l=2"]);
    for lam in [7.0, 10.0, 20.0, 40.0] {
        for x in [5.0, 10.0, 15.0, 20.0, 25.0] {
            let mut row = vec![fmt_value(lam), fmt_value(x)];
            for ell in 0..=2u32 {
                let p = Potential::barrier(ell, 1.0);
                let cell = match density_at(&p, lam, x, Method::F3) {
                    Ok(est) => fmt_value(est.value),
                    Err(_) => "nan".into(),
                };
                row.push(cell);
            }
            t.push_row(row);
        }
    }
    t
}

fn bessel_rho_table() -> Result<Table> {
    let ex = ExactExample::BesselInt { n: 1 };
    let grid = [1.0, 2.0, 4.0, 10.0, 20.0, 40.0];
    let g = sldens::spectral::rho_grid(&ex.potential(), &grid, 0.0, 1e-7)?;
    let mut t = Table::new(vec!["lambda", "rho", "exact", "err"]);
    for (j, &lam) in grid.iter().enumerate() {
        let exact = lam * lam / 16.0;
        t.push_row(vec![
            fmt_value(lam),
            fmt_value(g.rho[j]),
            fmt_value(exact),
            format!("{:+.2e}", conv_err(g.rho[j], exact)),
        ]);
    }
    Ok(t)
}

fn auto_error_table() -> Result<Table> {
    let examples = [
        ExactExample::BesselInt { n: 1 },
        ExactExample::Hydrogen { ell: 1, a: 1.0 },
        ExactExample::Coulomb { ell: 1, a: -1.0 },
        ExactExample::BesselFrac { nu: 1.0 / 3.0 },
    ];
    let mut t = Table::new(vec!["potential", "tau", "max_err", "seconds"]);
    for ex in &examples {
        for tau in [1e-4, 1e-6, 1e-8] {
            let started = Instant::now();
            let p = ex.potential();
            let g = sldens::spectral::rho_grid(&p, &PAPER16, 0.0, tau)?;
            let secs = started.elapsed().as_secs_f64();
            let max_err = if matches!(ex, ExactExample::Hydrogen { .. }) {
                (1..PAPER16.len())
                    .map(|j| {
                        let want = sldens::spectral::oracle_between(ex, PAPER16[0], PAPER16[j]);
                        conv_err(g.rho[j] - g.rho[0], want).abs()
                    })
                    .fold(0.0f64, f64::max)
            } else {
                (0..PAPER16.len())
                    .map(|j| {
                        let want = sldens::spectral::rho_closed_form_oracle(ex, PAPER16[j]);
                        conv_err(g.rho[j], want).abs()
                    })
                    .fold(0.0f64, f64::max)
            };
            t.push_row(vec![
                ex.label(),
                format!("{tau:.0e}"),
                format!("{max_err:.2e}"),
                format!("{secs:.2}"),
            ]);
        }
    }
    Ok(t)
}

fn run_table(preset: &str, output: &OutputArgs) -> Result<i32> {
    parse_format(output)?;
    let t = match preset {
        "t8.1" => density_error_table(&ExactExample::Hydrogen { ell: 1, a: 1.0 }),
        "t8.2" => density_error_table(&ExactExample::Hydrogen { ell: 2, a: 1.0 }),
        "t8.3" => density_error_table(&ExactExample::BesselFrac { nu: 1.0 / 3.0 }),
        "t8.4" => barrier_table(),
        "t9.1" => bessel_rho_table()?,
        "t9.2-errors" => auto_error_table()?,
        other => bail!("unknown table preset '{other}'"),
    };
    emit(&t, output)?;
    Ok(0)
}
