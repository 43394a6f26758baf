//! Command-line tables for Clebsch-Gordan limits, the relational clock curves,
//! noiseless-subsystem sectors and the exact small-spin pipeline.

pub mod output;

use std::collections::BTreeSet;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use relspin::am::{cg_limit_parallel, clebsch_gordan, CgQuery};
use relspin::channels::decompose_su2;
use relspin::composite::{CouplingTree, ParticleSystem};
use relspin::network::SpinNetwork;
use relspin::toy::{
    exact_demo, fig1a_distribution, fig1b_curve, uniform_theta_grid, ClockReadout, ExactDemoConfig, ToyModelConfig,
};
use relspin::{Complex, HalfInt};
use serde::Serialize;

use output::{fmt_f64, fmt_opt, render, Table};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] relspin::Error),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// 2 for bad input, 3 when a numerical accuracy guard refuses the request.
    pub fn exit_code(&self) -> i32 {
        use relspin::Error as E;
        match self {
            CliError::Core(E::Accuracy(_) | E::Drift(_) | E::DimensionLimit { .. }) => 3,
            CliError::Core(_) => 2,
            CliError::Io(_) => 1,
        }
    }
}

/// A complex amplitude written as `a`, `bi` or `a+bi`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Amplitude(pub Complex);

impl FromStr for Amplitude {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let bad = || format!("not a complex number: {s:?}");
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let num = |x: &str| -> Result<f64, String> {
            match x {
                "" | "+" => Ok(1.0),
                "-" => Ok(-1.0),
                _ => x.parse::<f64>().map_err(|_| bad()),
            }
        };
        let z = match t.strip_suffix('i') {
            None => Complex::new(t.parse::<f64>().map_err(|_| bad())?, 0.0),
            Some(rest) => {
                // Split at the last sign that is not part of an exponent.
                let cut = rest
                    .char_indices()
                    .skip(1)
                    .filter(|&(i, c)| (c == '+' || c == '-') && !matches!(rest.as_bytes()[i - 1], b'e' | b'E'))
                    .map(|(i, _)| i)
                    .last();
                match cut {
                    Some(i) => Complex::new(rest[..i].parse::<f64>().map_err(|_| bad())?, num(&rest[i..])?),
                    None => Complex::new(0.0, num(rest)?),
                }
            }
        };
        if !z.re.is_finite() || !z.im.is_finite() {
            return Err(bad());
        }
        Ok(Amplitude(z))
    }
}

impl fmt::Display for Amplitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Complex { re, im } = self.0;
        if im == 0.0 {
            write!(f, "{re:?}")
        } else {
            write!(f, "{re:?}{}{:?}i", if im < 0.0 { "-" } else { "+" }, im.abs())
        }
    }
}

impl Serialize for Amplitude {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// A `label=spin` pair such as `S=1/2`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LabelledSpin {
    pub label: String,
    pub spin: HalfInt,
}

impl FromStr for LabelledSpin {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (label, spin) = s.split_once('=').ok_or_else(|| format!("expected label=spin, got {s:?}"))?;
        let spin = spin.parse::<HalfInt>().map_err(|e| e.to_string())?;
        Ok(LabelledSpin { label: label.trim().to_string(), spin })
    }
}

#[derive(Debug, Parser)]
#[command(name = "relspin", version, about = "Relational spin model tables")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Omit the timestamp so identical arguments give identical bytes.
    #[arg(long, global = true)]
    pub reproducible: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// One Clebsch-Gordan coefficient <j1 m1; j2 m2 | J M>.
    Cg(CgArgs),
    /// |<S s; G G | G+s, G+s>|^2 for a list of gyroscope spins.
    Limits(LimitsArgs),
    /// Distribution of the clock-gyroscope reading.
    Fig1a(Fig1aArgs),
    /// Antiparallel probability against clock angle for several clock sizes.
    Fig1b(Fig1bArgs),
    /// Sector dimensions and multiplicities of a collection of spins.
    Nss(NssArgs),
    /// Exact small-spin pipeline against the closed form.
    ExactDemo(ExactDemoArgs),
    /// Edge list of the spin network of a coupling tree.
    Network(NetworkArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct CgArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub j1: HalfInt,
    #[arg(long, allow_hyphen_values = true)]
    pub m1: HalfInt,
    #[arg(long, allow_hyphen_values = true)]
    pub j2: HalfInt,
    #[arg(long, allow_hyphen_values = true)]
    pub m2: HalfInt,
    #[arg(long = "J", allow_hyphen_values = true)]
    #[serde(rename = "J")]
    pub j: HalfInt,
    #[arg(long = "M", allow_hyphen_values = true)]
    #[serde(rename = "M")]
    pub m: HalfInt,
}

#[derive(Debug, Args, Serialize)]
pub struct LimitsArgs {
    /// Gyroscope spins.
    #[arg(long = "gyro", value_delimiter = ',', default_value = "10,30,100,300")]
    pub gyro: Vec<HalfInt>,
    /// System spin.
    #[arg(long, default_value = "1/2")]
    pub spin: HalfInt,
    /// System projection.
    #[arg(long, allow_hyphen_values = true, default_value = "-1/2")]
    pub s: HalfInt,
}

#[derive(Debug, Args, Serialize)]
pub struct StateArgs {
    #[arg(long, allow_hyphen_values = true, default_value = "1")]
    pub alpha: Amplitude,
    #[arg(long, allow_hyphen_values = true, default_value = "0")]
    pub beta: Amplitude,
}

#[derive(Debug, Args, Serialize)]
pub struct Fig1aArgs {
    #[arg(long, default_value = "20")]
    pub clock: HalfInt,
    /// Magnet ratio, a positive even integer.
    #[arg(long, default_value_t = 10)]
    pub lambda: u32,
    #[command(flatten)]
    #[serde(flatten)]
    pub state: StateArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct Fig1bArgs {
    #[arg(long, value_delimiter = ',', default_value = "20,40,100")]
    pub clock: Vec<HalfInt>,
    #[arg(long, default_value_t = 10)]
    pub lambda: u32,
    #[command(flatten)]
    #[serde(flatten)]
    pub state: StateArgs,
    /// Number of equally spaced target angles in [0, pi].
    #[arg(long, default_value_t = 181)]
    pub points: usize,
    /// `total-spin` or `clock-gyroscope`.
    #[arg(long, default_value = "total-spin")]
    pub readout: ClockReadout,
}

#[derive(Debug, Args, Serialize)]
pub struct NssArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    pub spins: Vec<HalfInt>,
}

#[derive(Debug, Args, Serialize)]
pub struct ExactDemoArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub state: StateArgs,
    #[arg(long, default_value = "2")]
    pub magnet: HalfInt,
    #[arg(long, default_value = "1")]
    pub clock_magnet: HalfInt,
    #[arg(long, default_value = "2")]
    pub clock: HalfInt,
    #[arg(long, default_value = "4")]
    pub gyroscope: HalfInt,
}

#[derive(Debug, Args, Serialize)]
pub struct NetworkArgs {
    /// Particles as `label=spin`.
    #[arg(long = "particle", required = true)]
    pub particles: Vec<LabelledSpin>,
    /// Coupling tree such as `((S,M),(C,N))`; defaults to a left comb.
    #[arg(long)]
    pub tree: Option<String>,
    /// Emit JSON lines instead of the CSV edge list.
    #[arg(long)]
    pub json: bool,
}

fn params<T: Serialize>(args: &T) -> serde_json::Value {
    serde_json::to_value(args).expect("arguments are plain data")
}

fn config(state: &StateArgs, clock: HalfInt, lambda: u32) -> relspin::Result<ToyModelConfig> {
    ToyModelConfig::new(state.alpha.0, state.beta.0, clock, lambda)
}

pub fn cmd_cg(a: &CgArgs) -> Result<Table, CliError> {
    let c: f64 = clebsch_gordan(&CgQuery::new(a.j1, a.m1, a.j2, a.m2, a.j, a.m))?;
    let mut t = Table::new(vec!["j1", "m1", "j2", "m2", "J", "M", "coefficient"]);
    let mut row: Vec<String> = [a.j1, a.m1, a.j2, a.m2, a.j, a.m].iter().map(|h| h.to_string()).collect();
    row.push(fmt_f64(c));
    t.push(row);
    Ok(t)
}

pub fn cmd_limits(a: &LimitsArgs) -> Result<Table, CliError> {
    let mut t = Table::new(vec!["G", "squared_coefficient"]);
    for &g in &a.gyro {
        let v: f64 = cg_limit_parallel(a.spin, a.s, g)?;
        t.push(vec![g.to_string(), fmt_f64(v)]);
    }
    Ok(t)
}

pub fn cmd_fig1a(a: &Fig1aArgs) -> Result<Table, CliError> {
    let table = fig1a_distribution(&config(&a.state, a.clock, a.lambda)?)?;
    let mut t = Table::new(vec!["u", "P_u", "arcsine_reference"]);
    for r in &table.rows {
        t.push(vec![r.u.to_string(), fmt_f64(r.p_u), fmt_opt(r.reference)]);
    }
    Ok(t)
}

pub fn cmd_fig1b(a: &Fig1bArgs) -> Result<Table, CliError> {
    let grid = uniform_theta_grid(a.points);
    let configs = a
        .clock
        .iter()
        .map(|&c| Ok(config(&a.state, c, a.lambda)?.with_theta_grid(grid.clone())?.with_readout(a.readout)))
        .collect::<Result<Vec<_>, CliError>>()?;
    // One worker per clock size; rows are assembled in argument order.
    let curves = std::thread::scope(|s| {
        let handles: Vec<_> = configs.iter().map(|cfg| s.spawn(move || fig1b_curve(cfg))).collect();
        handles.into_iter().map(|h| h.join().expect("curve worker panicked")).collect::<Vec<_>>()
    });
    let mut t = Table::new(vec!["theta", "C", "P_antiparallel", "orthodox_reference"]);
    for curve in curves {
        let curve = curve?;
        for r in &curve.rows {
            t.push(vec![fmt_f64(r.theta), curve.clock.to_string(), fmt_opt(r.p_antiparallel), fmt_opt(r.reference)]);
        }
    }
    Ok(t)
}

pub fn cmd_nss(a: &NssArgs) -> Result<Table, CliError> {
    let sys = ParticleSystem::new(a.spins.iter().enumerate().map(|(i, &s)| (format!("p{}", i + 1), s)))?;
    let dec = decompose_su2(&sys)?;
    let mut t = Table::new(vec!["J", "m_J", "n_J"]);
    for s in dec.sectors() {
        t.push(vec![s.j.to_string(), s.dim.to_string(), s.multiplicity.to_string()]);
    }
    Ok(t)
}

pub fn cmd_exact_demo(a: &ExactDemoArgs) -> Result<Table, CliError> {
    let cfg = ExactDemoConfig {
        alpha: a.state.alpha.0,
        beta: a.state.beta.0,
        magnet: a.magnet,
        clock_magnet: a.clock_magnet,
        clock: a.clock,
        gyroscope: a.gyroscope,
    };
    let cmp = exact_demo(&cfg)?;
    let keys: BTreeSet<_> = cmp.exact.keys().chain(cmp.closed_form.keys()).copied().collect();
    let mut t = Table::new(vec!["J_SCG", "J_CG", "p_exact", "p_closed_form"]);
    for k in keys {
        let get = |m: &std::collections::BTreeMap<_, f64>| m.get(&k).copied().unwrap_or(0.0);
        t.push(vec![k.0.to_string(), k.1.to_string(), fmt_f64(get(&cmp.exact)), fmt_f64(get(&cmp.closed_form))]);
    }
    Ok(t)
}

fn network(a: &NetworkArgs) -> Result<SpinNetwork, CliError> {
    let sys = ParticleSystem::new(a.particles.iter().map(|p| (p.label.clone(), p.spin)))?;
    let tree = match &a.tree {
        Some(s) => s.parse::<CouplingTree>()?,
        None => relspin::channels::sequential_tree(&sys),
    };
    Ok(SpinNetwork::from_coupling_tree(&sys, &tree)?)
}

pub fn cmd_network(a: &NetworkArgs) -> Result<Table, CliError> {
    let sn = network(a)?;
    let mut t = Table::new(vec!["edge", "tail", "head", "kind", "j"]);
    let vname = |v: Option<usize>| v.map(|i| sn.vertices()[i].name.clone()).unwrap_or_default();
    for e in sn.edges() {
        let kind = serde_json::to_value(e.kind).expect("edge kinds serialize");
        t.push(vec![
            format!("\"{}\"", e.name),
            format!("\"{}\"", vname(e.tail)),
            format!("\"{}\"", vname(e.head)),
            kind.as_str().unwrap_or_default().to_string(),
            e.j.map(|j| j.to_string()).unwrap_or_default(),
        ]);
    }
    Ok(t)
}

fn subcommand_name(c: &Command) -> &'static str {
    match c {
        Command::Cg(_) => "cg",
        Command::Limits(_) => "limits",
        Command::Fig1a(_) => "fig1a",
        Command::Fig1b(_) => "fig1b",
        Command::Nss(_) => "nss",
        Command::ExactDemo(_) => "exact-demo",
        Command::Network(_) => "network",
    }
}

/// The full output text, manifest line included.
pub fn execute(cli: &Cli) -> Result<String, CliError> {
    let name = subcommand_name(&cli.command);
    let (p, table) = match &cli.command {
        Command::Cg(a) => (params(a), cmd_cg(a)?),
        Command::Limits(a) => (params(a), cmd_limits(a)?),
        Command::Fig1a(a) => (params(a), cmd_fig1a(a)?),
        Command::Fig1b(a) => (params(a), cmd_fig1b(a)?),
        Command::Nss(a) => (params(a), cmd_nss(a)?),
        Command::ExactDemo(a) => (params(a), cmd_exact_demo(a)?),
        Command::Network(a) if a.json => {
            let body = network(a)?.to_json_lines()?;
            let manifest = output::RunManifest::new(name, params(a), &body, cli.reproducible);
            return Ok(manifest.line() + &body);
        }
        Command::Network(a) => (params(a), cmd_network(a)?),
    };
    Ok(render(name, p, &table, cli.reproducible))
}

/// Runs the command and writes its output to `--out` or standard output.
pub fn run(cli: &Cli) -> Result<(), CliError> {
    let text = execute(cli)?;
    match &cli.out {
        Some(path) => std::fs::write(path, text)?,
        None => {
            use std::io::Write;
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
        }
    }
    Ok(())
}
