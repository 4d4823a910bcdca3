//! `triport`: run, sweep, search and verify the teleportation protocol from
//! the command line.
//!
//! Exit status is 0 on success, 1 for invalid arguments and 2 when
//! `verify` finds a failing check.

mod angle;
mod format;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use triport::analysis::quadrature::protocol_average_fidelity;
use triport::analysis::search::{averaged_search, correction_fidelities, MAXIMIZER_TOL};
use triport::analysis::QuadratureSpec;
use triport::protocol::{Branch, OutcomeRecord, Protocol};
use triport::qstates::input_state;
use triport::verify::{run_criterion, CriterionReport, VerifyOptions, CRITERIA};
use triport::{ChannelKind, ChannelSpec, InputSpec, MeasurementSpec};

use crate::angle::parse_angle;
use crate::format::{opt12, sig12};

#[derive(Parser)]
#[command(
    name = "triport",
    version,
    about = "Two-qubit teleportation over GHZ and W channels"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run all eight measurement branches for one configuration.
    Run(RunArgs),
    /// Sweep one parameter and tabulate the chosen quantities.
    Sweep(SweepArgs),
    /// Score all sixteen Pauli-pair corrections for one branch.
    Search(SearchArgs),
    /// Run the acceptance checks.
    Verify(VerifyArgs),
}

#[derive(Args, Clone)]
struct Setup {
    /// Channel kind: ghz or w.
    #[arg(long, default_value = "ghz")]
    channel: ChannelKind,
    /// White-noise visibility in [0, 1].
    #[arg(long, default_value_t = 1.0)]
    w: f64,
    /// Input polar angle, radians or a multiple of pi such as pi/3.
    #[arg(long, default_value = "pi/2", value_parser = parse_angle, allow_hyphen_values = true)]
    theta: f64,
    /// Input azimuth.
    #[arg(long, default_value = "0", value_parser = parse_angle, allow_hyphen_values = true)]
    phi: f64,
    /// Measurement phase on qubit 5.
    #[arg(long, default_value = "0", value_parser = parse_angle, allow_hyphen_values = true)]
    lambda: f64,
    /// Measurement polar angle on qubit 5.
    #[arg(long, default_value = "pi/2", value_parser = parse_angle, allow_hyphen_values = true)]
    mu: f64,
}

impl Setup {
    fn channel(&self) -> Result<ChannelSpec> {
        Ok(ChannelSpec::new(self.channel, self.w)?)
    }

    fn input(&self) -> Result<InputSpec> {
        Ok(InputSpec::new(self.theta, self.phi)?)
    }

    fn measurement(&self) -> Result<MeasurementSpec> {
        Ok(MeasurementSpec::new(self.lambda, self.mu)?)
    }

    fn protocol(&self) -> Result<Protocol> {
        Ok(Protocol::new(self.channel()?, self.measurement()?))
    }
}

#[derive(Args, Clone, Copy)]
struct Quad {
    /// Gauss-Legendre order in cos(theta) for sphere averages.
    #[arg(long, default_value_t = 32)]
    quad_theta: usize,
    /// Uniform points in phi for sphere averages.
    #[arg(long, default_value_t = 64)]
    quad_phi: usize,
}

impl Quad {
    fn spec(&self) -> Result<QuadratureSpec> {
        Ok(QuadratureSpec::new(self.quad_theta, self.quad_phi)?)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Text,
}

#[derive(Args, Clone)]
struct Output {
    /// Write to this file instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

impl Output {
    fn sink(&self) -> Result<Box<dyn Write>> {
        Ok(match &self.out {
            Some(path) => Box::new(BufWriter::new(
                File::create(path).with_context(|| format!("cannot create {}", path.display()))?,
            )),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        })
    }
}

fn csv_writer(sink: Box<dyn Write>) -> csv::Writer<Box<dyn Write>> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(sink)
}

/// Space-separated columns, each padded to the width of its widest cell.
fn write_table(out: &mut dyn Write, rows: &[Vec<String>]) -> io::Result<()> {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| {
            rows.iter()
                .filter_map(|r| r.get(c))
                .map(|s| s.chars().count())
                .max()
                .unwrap_or(0)
        })
        .collect();
    for row in rows {
        let line: Vec<String> = row
            .iter()
            .zip(&widths)
            .map(|(cell, &w)| format!("{cell:<w$}"))
            .collect();
        writeln!(out, "{}", line.join("  ").trim_end())?;
    }
    Ok(())
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    setup: Setup,
    #[command(flatten)]
    quad: Quad,
    #[command(flatten)]
    output: Output,
}

/// Probability as printed: branches below the reachability floor show 0.
fn shown_probability(rec: &OutcomeRecord) -> String {
    sig12(if rec.reachable() { rec.probability } else { 0.0 })
}

fn branch_cells(rec: &OutcomeRecord, input: &InputSpec) -> Vec<String> {
    let pi = input_state(input);
    vec![
        rec.branch.j().to_string(),
        rec.branch.k().to_string(),
        shown_probability(rec),
        opt12(rec.fidelity(&pi)),
        opt12(rec.concurrence()),
    ]
}

fn cmd_run(args: &RunArgs) -> Result<()> {
    let protocol = args.setup.protocol()?;
    let input = args.setup.input()?;
    let quad = args.quad.spec()?;
    let records = protocol.run(&input)?;
    let avg = protocol_average_fidelity(&protocol, &quad);

    let header = ["j", "k", "p", "F", "C"].map(String::from).to_vec();
    let mut rows = vec![header];
    rows.extend(records.iter().map(|r| branch_cells(r, &input)));

    let mut sink = args.output.sink()?;
    match args.output.format {
        Format::Csv => {
            rows.push(vec![
                "avg".into(),
                String::new(),
                String::new(),
                sig12(avg),
                String::new(),
            ]);
            let mut w = csv_writer(sink);
            for row in &rows {
                w.write_record(row)?;
            }
            w.flush()?;
        }
        Format::Text => {
            let s = &args.setup;
            writeln!(
                sink,
                "{} channel, w = {}, theta = {}, phi = {}, lambda = {}, mu = {}",
                s.channel, s.w, s.theta, s.phi, s.lambda, s.mu
            )?;
            write_table(&mut sink, &rows)?;
            writeln!(
                sink,
                "<F> = {} ({}x{} quadrature)",
                sig12(avg),
                quad.theta_nodes(),
                quad.phi_nodes()
            )?;
            sink.flush()?;
        }
    }
    Ok(())
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SweepParam {
    Theta,
    Phi,
    Lambda,
    Mu,
    W,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SweepQuantity {
    /// Branch probabilities.
    #[value(name = "p")]
    P,
    /// Branch fidelities.
    #[value(name = "F")]
    F,
    /// Branch concurrences.
    #[value(name = "C")]
    C,
    /// Sphere-averaged fidelity.
    #[value(name = "avgF")]
    AvgF,
    /// Total probability of the W channel's Bell-output branches.
    #[value(name = "pswap")]
    PSwap,
}

impl SweepQuantity {
    fn label(self) -> &'static str {
        match self {
            SweepQuantity::P => "p",
            SweepQuantity::F => "F",
            SweepQuantity::C => "C",
            SweepQuantity::AvgF => "avgF",
            SweepQuantity::PSwap => "pswap",
        }
    }

    fn per_branch(self) -> bool {
        matches!(self, SweepQuantity::P | SweepQuantity::F | SweepQuantity::C)
    }
}

#[derive(Args)]
struct SweepArgs {
    /// Parameter to sweep.
    #[arg(long, value_enum)]
    param: SweepParam,
    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
    start: f64,
    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
    stop: f64,
    /// Number of points, endpoints included.
    #[arg(long, default_value_t = 11)]
    steps: usize,
    /// Comma-separated subset of p, F, C, avgF, pswap.
    #[arg(long, value_enum, value_delimiter = ',', default_value = "p,F,C")]
    quantities: Vec<SweepQuantity>,
    #[command(flatten)]
    setup: Setup,
    #[command(flatten)]
    quad: Quad,
    #[command(flatten)]
    output: Output,
}

fn param_name(p: SweepParam) -> &'static str {
    match p {
        SweepParam::Theta => "theta",
        SweepParam::Phi => "phi",
        SweepParam::Lambda => "lambda",
        SweepParam::Mu => "mu",
        SweepParam::W => "w",
    }
}

fn with_param(setup: &Setup, param: SweepParam, value: f64) -> Setup {
    let mut s = setup.clone();
    match param {
        SweepParam::Theta => s.theta = value,
        SweepParam::Phi => s.phi = value,
        SweepParam::Lambda => s.lambda = value,
        SweepParam::Mu => s.mu = value,
        SweepParam::W => s.w = value,
    }
    s
}

fn cmd_sweep(args: &SweepArgs) -> Result<()> {
    if args.steps < 2 {
        bail!("invalid steps = {}: need at least 2 points", args.steps);
    }
    if args.start.partial_cmp(&args.stop) != Some(std::cmp::Ordering::Less) {
        bail!(
            "invalid sweep range: start = {} must be below stop = {}",
            args.start,
            args.stop
        );
    }
    if args.quantities.is_empty() {
        bail!("no quantities requested");
    }
    if args.quantities.contains(&SweepQuantity::PSwap) && args.setup.channel != ChannelKind::W {
        bail!("pswap is only defined for the W channel");
    }
    let quad = args.quad.spec()?;

    let mut header = vec![param_name(args.param).to_string()];
    for &q in &args.quantities {
        if q.per_branch() {
            header.extend(Branch::all().map(|b| format!("{}_{}{}", q.label(), b.j(), b.k())));
        } else {
            header.push(q.label().to_string());
        }
    }

    // Validate every point before producing any output.
    let n = args.steps;
    let points: Vec<(f64, Setup)> = (0..n)
        .map(|i| {
            let v = args.start + (args.stop - args.start) * i as f64 / (n - 1) as f64;
            let setup = with_param(&args.setup, args.param, v);
            setup.protocol()?;
            setup.input()?;
            Ok((v, setup))
        })
        .collect::<Result<_>>()?;

    let mut rows = vec![header];
    for (v, setup) in points {
        let protocol = setup.protocol()?;
        let input = setup.input()?;
        let pi = input_state(&input);
        let records = protocol.run(&input)?;
        let mut row = vec![sig12(v)];
        for &q in &args.quantities {
            match q {
                SweepQuantity::P => row.extend(records.iter().map(shown_probability)),
                SweepQuantity::F => row.extend(records.iter().map(|r| opt12(r.fidelity(&pi)))),
                SweepQuantity::C => row.extend(records.iter().map(|r| opt12(r.concurrence()))),
                SweepQuantity::AvgF => row.push(sig12(protocol_average_fidelity(&protocol, &quad))),
                SweepQuantity::PSwap => {
                    let swap = Branch::w_swap_branches();
                    let p: f64 = records
                        .iter()
                        .filter(|r| swap.contains(&r.branch))
                        .map(|r| r.probability)
                        .sum();
                    row.push(sig12(p));
                }
            }
        }
        rows.push(row);
    }

    let mut sink = args.output.sink()?;
    match args.output.format {
        Format::Csv => {
            let mut w = csv_writer(sink);
            for row in &rows {
                w.write_record(row)?;
            }
            w.flush()?;
        }
        Format::Text => {
            write_table(&mut sink, &rows)?;
            sink.flush()?;
        }
    }
    Ok(())
}

#[derive(Args)]
struct SearchArgs {
    /// Bell outcome on qubits 3, 4 (1 to 4).
    #[arg(long)]
    j: usize,
    /// Outcome on qubit 5 (1 or 2).
    #[arg(long)]
    k: usize,
    /// Score by the sphere-averaged contribution <p F> instead of the
    /// fidelity for the given input.
    #[arg(long)]
    averaged: bool,
    #[command(flatten)]
    setup: Setup,
    #[command(flatten)]
    quad: Quad,
    #[command(flatten)]
    output: Output,
}

fn cmd_search(args: &SearchArgs) -> Result<()> {
    let branch = Branch::new(args.j, args.k)?;
    let protocol = args.setup.protocol()?;
    let published = protocol.table().row(branch).to_vec();

    let (score_name, scores, note) = if args.averaged {
        let quad = args.quad.spec()?;
        let found = averaged_search(&protocol, &quad)
            .into_iter()
            .find(|s| s.branch == branch)
            .expect("every branch is searched");
        if !found.reachable() {
            bail!("branch {branch} is unreachable for this channel and measurement");
        }
        let note = format!("<p> = {}", sig12(found.probability));
        ("pF_avg", found.scores, note)
    } else {
        let input = args.setup.input()?;
        let record = protocol
            .run(&input)?
            .into_iter()
            .find(|r| r.branch == branch)
            .expect("every branch is run");
        let Some(rho) = record.conditioned.as_ref() else {
            bail!(
                "branch {branch} is unreachable for this configuration (p = {:e})",
                record.probability
            );
        };
        let note = format!("p = {}", sig12(record.probability));
        ("F", correction_fidelities(rho, &input_state(&input)), note)
    };

    let best = scores.iter().map(|&(_, s)| s).fold(f64::NEG_INFINITY, f64::max);
    let yes_no = |b: bool| if b { "yes" } else { "no" }.to_string();
    let mut rows = vec![["b", "c", score_name, "maximizer", "published"]
        .map(String::from)
        .to_vec()];
    for (choice, s) in &scores {
        rows.push(vec![
            choice.b.to_string(),
            choice.c.to_string(),
            sig12(*s),
            yes_no(*s >= best - MAXIMIZER_TOL),
            yes_no(published.contains(choice)),
        ]);
    }

    let mut sink = args.output.sink()?;
    match args.output.format {
        Format::Csv => {
            let mut w = csv_writer(sink);
            for row in &rows {
                w.write_record(row)?;
            }
            w.flush()?;
        }
        Format::Text => {
            writeln!(sink, "{} channel, branch {branch}, {note}", args.setup.channel)?;
            write_table(&mut sink, &rows)?;
            sink.flush()?;
        }
    }
    Ok(())
}

#[derive(Args)]
struct VerifyArgs {
    /// Run only these criteria (repeatable); all by default.
    #[arg(long = "criterion", value_parser = clap::value_parser!(u8).range(1..=11))]
    criteria: Vec<u8>,
    /// Tolerance for every quadrature comparison.
    #[arg(long)]
    quadrature_tol: Option<f64>,
    /// Tolerance for every pointwise comparison.
    #[arg(long)]
    pointwise_tol: Option<f64>,
    /// Seed for the randomized criteria.
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    quad: Quad,
    #[command(flatten)]
    output: Output,
}

fn cmd_verify(args: &VerifyArgs) -> Result<bool> {
    for tol in [args.quadrature_tol, args.pointwise_tol].into_iter().flatten() {
        if !(tol >= 0.0 && tol.is_finite()) {
            bail!("invalid tolerance {tol}: must be finite and non-negative");
        }
    }
    let defaults = VerifyOptions::default();
    let opts = VerifyOptions {
        quad: args.quad.spec()?,
        quadrature_tol: args.quadrature_tol,
        pointwise_tol: args.pointwise_tol,
        seed: args.seed.unwrap_or(defaults.seed),
        ..defaults
    };
    let ids: Vec<u8> = if args.criteria.is_empty() {
        CRITERIA.iter().map(|&(id, _)| id).collect()
    } else {
        args.criteria.clone()
    };
    let reports: Vec<CriterionReport> = ids.iter().map(|&id| run_criterion(id, &opts)).collect();
    let all_passed = reports.iter().all(CriterionReport::passed);

    let mut sink = args.output.sink()?;
    match args.output.format {
        Format::Csv => {
            let mut w = csv_writer(sink);
            w.write_record(["criterion", "check", "expected", "actual", "tolerance", "passed"])?;
            for report in &reports {
                for c in &report.checks {
                    w.write_record([
                        report.id.to_string(),
                        c.name.clone(),
                        sig12(c.expected),
                        sig12(c.actual),
                        format!("{:e}", c.tolerance),
                        c.passed.to_string(),
                    ])?;
                }
            }
            w.flush()?;
        }
        Format::Text => {
            for report in &reports {
                writeln!(sink, "{}", report.summary())?;
                for c in &report.checks {
                    writeln!(sink, "    {c}")?;
                }
            }
            let failed = reports.iter().filter(|r| !r.passed()).count();
            writeln!(
                sink,
                "{} of {} criteria passed",
                reports.len() - failed,
                reports.len()
            )?;
            sink.flush()?;
        }
    }
    Ok(all_passed)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { 1 } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    let outcome = match &cli.command {
        Command::Run(args) => cmd_run(args).map(|_| true),
        Command::Sweep(args) => cmd_sweep(args).map(|_| true),
        Command::Search(args) => cmd_search(args).map(|_| true),
        Command::Verify(args) => cmd_verify(args),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}
