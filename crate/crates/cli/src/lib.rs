//! Command-line front end for `dcwalk`.
//!
//! Every command is a pure function of its arguments (and seed): it
//! returns the text to print and whether all requested checks passed.

pub mod input;
pub mod output;
pub mod verify;

use std::collections::HashMap;
use std::fs;
use std::path::PathBuf;
use std::str::FromStr;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use dcwalk::chain::{
    chi_square, convergence_report, is_ergodic, is_reversible, rational_spectrum, stationary,
    step_distribution, tv_distance, verify_eigenvalue, Distribution, RationalChain,
};
use dcwalk::cosets::{double_cosets, SubgroupSpec};
use dcwalk::exact::{format_rational, to_f64, Rational};
use dcwalk::linalg::Matrix;
use dcwalk::perm::{generate_group, GroupElements, DEFAULT_CAP};
use dcwalk::shuffle::{
    binomial_mixture_weights, mixture_matrix, predicted_spectrum, simultaneous_spectra,
    skewed_matrix, to_bottom_right, type_s_matrix, ShuffleParams,
};
use dcwalk::sim::{empirical_matrix, exact_chain, simulate_replicates, SimConfig, Start};
use dcwalk::weights::{check_lumping_hh, check_lumping_hk_with, lumped_matrix, KRange, Witness};
use output::{q, qm, qs, render_matrix, reversed, Format};
use serde_json::{json, Value};

/// Environment variable read for the default simulation seed.
pub const SEED_ENV: &str = "DCWALK_SEED";

#[derive(Debug, Parser)]
#[command(name = "dcwalk", version, about = "Double coset lumping and skewed shuffle analysis")]
pub struct Cli {
    /// Key-value config file (`key = value` per line) supplying defaults
    /// for flags not given on the command line.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Output format.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Also render decimals with this many digits after the point.
    #[arg(long, global = true)]
    pub precision: Option<usize>,

    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Double cosets H\G/K: least representatives and sizes.
    Cosets(GroupArgs),
    /// Decide whether a weighted walk lumps on H\G/K.
    CheckLumping(LumpingArgs),
    /// The lumped transition matrix on H\G/K.
    Lumped(LumpingArgs),
    /// Lumped matrices of the skewed shuffle family.
    Shuffle(ShuffleArgs),
    /// Stationary law, spectrum and convergence of a rational chain.
    Analyze(AnalyzeArgs),
    /// Monte Carlo simulation of the shuffle walk projected to types.
    Simulate(SimulateArgs),
    /// Reproduce the worked n = 10, r = 4 examples exactly.
    VerifyPaper(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct GroupArgs {
    /// Group: `sym:N`, `young:a,b,…`, `cyclic:N`, `trivial:N` or a file.
    #[arg(long)]
    pub group: String,
    #[arg(long)]
    pub subgroup_h: String,
    /// Defaults to H.
    #[arg(long)]
    pub subgroup_k: Option<String>,
    /// Enumeration cap for every group.
    #[arg(long)]
    pub cap: Option<usize>,
}

#[derive(Debug, Args)]
pub struct LumpingArgs {
    #[command(flatten)]
    pub groups: GroupArgs,
    /// Weight: `shuffle:n,r[,s]`, `uniform`, or a file of `<cycle> <p/q>` lines.
    #[arg(long)]
    pub weight: String,
    /// Test the two-sided condition against every k ∈ K, not just generators.
    #[arg(long)]
    pub all_k: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mixture {
    /// Weight type s by C(r, s).
    Binomial,
}

#[derive(Debug, Args)]
pub struct ShuffleArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub r: usize,
    /// Type s shuffle (r − s cards from the top block, s from below).
    #[arg(long = "type")]
    pub kind: Option<usize>,
    #[arg(long, value_enum, conflicts_with = "kind")]
    pub mixture: Option<Mixture>,
    /// Include eigenvalues and the stationary law.
    #[arg(long)]
    pub spectrum: bool,
    /// Index from x = r down to 0, as in the displayed matrices.
    #[arg(long)]
    pub paper_orientation: bool,
    /// Shorthand for `--format latex`.
    #[arg(long)]
    pub latex: bool,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// JSON array of rows of "p/q" strings, inline or a file path.
    #[arg(long)]
    pub matrix: String,
    /// Starting law, JSON array or comma list, inline or a file path.
    #[arg(long)]
    pub theta: Option<String>,
    /// Report chi-square and total variation for t = 0..=t-max.
    #[arg(long)]
    pub t_max: Option<u32>,
    /// Input and output vectors are indexed from the last state down.
    #[arg(long)]
    pub paper_orientation: bool,
    /// Add floating-point eigenvalues (exploration only; not certified).
    #[arg(long)]
    pub approximate: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Trajectory,
    Summary,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub r: usize,
    #[arg(long = "type")]
    pub kind: Option<usize>,
    #[arg(long)]
    pub steps: Option<usize>,
    #[arg(long)]
    pub replicates: Option<usize>,
    /// Falls back to $DCWALK_SEED, then the config file, then 0.
    #[arg(long, env = SEED_ENV)]
    pub seed: Option<u64>,
    /// Start from a representative of this type instead of the identity.
    #[arg(long)]
    pub start_type: Option<usize>,
    #[arg(long, value_enum, default_value = "summary")]
    pub emit: Emit,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Machine-readable report, one record per check.
    #[arg(long)]
    pub json: bool,
}

/// Text to print and whether every requested check passed.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub text: String,
    pub success: bool,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { text, success: true }
    }
}

struct Config(HashMap<String, String>);

impl Config {
    fn load(path: Option<&PathBuf>) -> Result<Self> {
        match path {
            None => Ok(Config(HashMap::new())),
            Some(p) => {
                let text = fs::read_to_string(p).with_context(|| format!("reading config {}", p.display()))?;
                Ok(Config(input::parse_config(&text)?))
            }
        }
    }

    fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        match self.0.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|e| anyhow::anyhow!("config key {key}: {e}")),
        }
    }

    fn or<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        match flag {
            Some(v) => Ok(Some(v)),
            None => self.get(key),
        }
    }
}

struct Common {
    format: Format,
    precision: Option<usize>,
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serialisable");
    s.push('\n');
    s
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let config = Config::load(cli.config.as_ref())?;
    let common = Common {
        format: config.or(cli.format, "format")?.unwrap_or_default(),
        precision: config.or(cli.precision, "precision")?,
    };
    match &cli.command {
        Command::Cosets(a) => cosets(a, &config, &common),
        Command::CheckLumping(a) => check_lumping(a, &config),
        Command::Lumped(a) => lumped(a, &config, &common),
        Command::Shuffle(a) => shuffle(a, &common),
        Command::Analyze(a) => analyze(a, &config, &common),
        Command::Simulate(a) => simulate(a, &config, &common),
        Command::VerifyPaper(a) => verify_paper(a),
    }
}

struct Groups {
    group: GroupElements,
    h: SubgroupSpec,
    k: Option<SubgroupSpec>,
}

fn load_groups(a: &GroupArgs, config: &Config) -> Result<Groups> {
    let cap = config.or(a.cap, "cap")?.unwrap_or(DEFAULT_CAP);
    let spec = input::parse_group(&a.group)?;
    let group = generate_group(&spec, cap)?;
    let h = SubgroupSpec::generate(&input::parse_group(&a.subgroup_h)?, cap)?;
    let k = a
        .subgroup_k
        .as_deref()
        .map(|s| -> Result<SubgroupSpec> { Ok(SubgroupSpec::generate(&input::parse_group(s)?, cap)?) })
        .transpose()?;
    Ok(Groups { group, h, k })
}

fn cosets(a: &GroupArgs, config: &Config, common: &Common) -> Result<Outcome> {
    let g = load_groups(a, config)?;
    let k = g.k.as_ref().unwrap_or(&g.h);
    let d = double_cosets(&g.group, &g.h, k)?;
    let text = match common.format {
        Format::Csv | Format::Table => {
            let mut s = String::from("rep,size\n");
            for (r, n) in d.representatives().iter().zip(d.sizes()) {
                s.push_str(&format!("\"{r}\",{n}\n"));
            }
            s
        }
        _ => pretty(&json!({ "reps": d.representatives(), "sizes": d.sizes(), "count": d.count() })),
    };
    Ok(Outcome::ok(text))
}

fn witness_json(w: &Witness) -> Value {
    match w {
        Witness::TwoSided { k, x, y, lhs, rhs } => json!({
            "kind": "two_sided", "k": k, "x": x, "y": y, "lhs": q(lhs), "rhs": q(rhs),
            "message": w.to_string(),
        }),
        Witness::LeftCoset { x, y, lhs, rhs } => json!({
            "kind": "left_coset", "x": x, "y": y, "lhs": q(lhs), "rhs": q(rhs),
            "message": w.to_string(),
        }),
        Witness::Orbit { beta, gamma, lhs, rhs } => json!({
            "kind": "orbit", "beta": beta, "gamma": gamma, "lhs": q(lhs), "rhs": q(rhs),
            "message": w.to_string(),
        }),
    }
}

fn check_lumping(a: &LumpingArgs, config: &Config) -> Result<Outcome> {
    let g = load_groups(&a.groups, config)?;
    let w = input::parse_weight(&a.weight, g.group.degree(), &g.group)?;
    let (criterion, verdict) = match &g.k {
        None if !a.all_k => ("H = K", check_lumping_hh(&g.group, &g.h, &w)?),
        k => {
            let k = k.as_ref().unwrap_or(&g.h);
            let range = if a.all_k { KRange::AllElements } else { KRange::Generators };
            ("two-sided", check_lumping_hk_with(&g.group, &g.h, k, &w, range)?)
        }
    };
    let v = json!({
        "lumps": verdict.lumps,
        "criterion": criterion,
        "witness": verdict.witness.as_ref().map(witness_json),
    });
    Ok(Outcome::ok(pretty(&v)))
}

fn lumped(a: &LumpingArgs, config: &Config, common: &Common) -> Result<Outcome> {
    let g = load_groups(&a.groups, config)?;
    let w = input::parse_weight(&a.weight, g.group.degree(), &g.group)?;
    let k = g.k.as_ref().unwrap_or(&g.h);
    let chain = lumped_matrix(&g.group, &g.h, k, &w)?;
    let text = match common.format {
        Format::Json => {
            let d = double_cosets(&g.group, &g.h, k)?;
            pretty(&json!({
                "labels": chain.labels(),
                "sizes": d.sizes(),
                "matrix": qm(chain.matrix()),
            }))
        }
        f => render_matrix(f, chain.labels(), chain.matrix(), chain.matrix()),
    };
    Ok(Outcome::ok(text))
}

/// Eigenvalues and stationary law of a shuffle chain, indexed x = 0..r.
fn shuffle_spectrum(a: &ShuffleArgs, chain: &RationalChain) -> Result<(Vec<Rational>, Distribution)> {
    let r = a.r;
    let descending: Vec<Rational> = match (a.kind, a.mixture) {
        (Some(s), _) if s != r => simultaneous_spectra(a.n, r)?.eigenvalues[s].clone(),
        (_, Some(Mixture::Binomial)) => {
            let sp = simultaneous_spectra(a.n, r)?;
            let w = binomial_mixture_weights(r);
            let total: Rational = w.values().sum();
            (0..=r)
                .map(|k| w.iter().map(|(s, ws)| ws * &sp.eigenvalues[*s][k]).sum::<Rational>() / &total)
                .collect()
        }
        _ => predicted_spectrum(a.n, r)?.eigenvalues_descending(),
    };
    let pi = stationary(chain)?;
    Ok((reversed(&descending), pi))
}

fn shuffle(a: &ShuffleArgs, common: &Common) -> Result<Outcome> {
    let format = if a.latex { Format::Latex } else { common.format };
    ShuffleParams::new(a.n, a.r, a.kind)?;
    let chain = match (a.kind, a.mixture) {
        (Some(s), _) => type_s_matrix(a.n, a.r, s)?,
        (None, Some(Mixture::Binomial)) => mixture_matrix(a.n, a.r, &binomial_mixture_weights(a.r))?,
        (None, None) => skewed_matrix(a.n, a.r)?,
    };
    let flip = |v: &[Rational]| if a.paper_orientation { reversed(v) } else { v.to_vec() };
    let shown: Matrix = if a.paper_orientation { to_bottom_right(chain.matrix()) } else { chain.matrix().clone() };
    let labels: Vec<String> = if a.paper_orientation { reversed(chain.labels()) } else { chain.labels().to_vec() };
    let spectrum = if a.spectrum { Some(shuffle_spectrum(a, &chain)?) } else { None };
    let certified = spectrum
        .as_ref()
        .map(|(eigs, _)| eigs.iter().all(|l| verify_eigenvalue(&chain, l)));

    let text = match format {
        Format::Json => {
            let mut v = json!({
                "n": a.n,
                "r": a.r,
                "type": a.kind,
                "mixture": a.mixture.map(|_| "binomial"),
                "orientation": if a.paper_orientation { "paper" } else { "ascending" },
                "labels": labels,
                "matrix": qm(&shown),
            });
            if let Some((eigs, pi)) = &spectrum {
                v["spectrum"] = json!({
                    "eigenvalues": qs(&flip(eigs)),
                    "stationary": qs(&flip(pi.probabilities())),
                    "certified": certified,
                });
            }
            pretty(&v)
        }
        f => {
            let mut s = render_matrix(f, &labels, &shown, chain.matrix());
            if let Some((eigs, pi)) = &spectrum {
                let (e, p) = (flip(eigs), flip(pi.probabilities()));
                match f {
                    Format::Latex => {
                        let show = |v: &[Rational]| v.iter().map(format_rational).collect::<Vec<_>>().join(", ");
                        s.push_str(&format!("\n% eigenvalues (x = r..0): ({})\n", show(&reversed(eigs))));
                        s.push_str(&format!("% stationary (x = r..0): ({})\n", show(&reversed(pi.probabilities()))));
                    }
                    _ => {
                        s.push_str("\nx,eigenvalue,stationary\n");
                        for (i, (l, pv)) in e.iter().zip(&p).enumerate() {
                            s.push_str(&format!("{},{},{}\n", labels[i], format_rational(l), format_rational(pv)));
                        }
                    }
                }
            }
            if !s.ends_with('\n') {
                s.push('\n');
            }
            s
        }
    };
    Ok(Outcome {
        text,
        success: certified.unwrap_or(true),
    })
}

fn approximate_eigenvalues(m: &Matrix) -> Vec<(f64, f64)> {
    let n = m.len();
    let a = nalgebra::DMatrix::from_fn(n, n, |i, j| to_f64(&m[i][j]));
    let mut eigs: Vec<(f64, f64)> = a.complex_eigenvalues().iter().map(|c| (c.re, c.im)).collect();
    eigs.sort_by(|x, y| y.0.total_cmp(&x.0).then(y.1.total_cmp(&x.1)));
    eigs
}

fn analyze(a: &AnalyzeArgs, config: &Config, common: &Common) -> Result<Outcome> {
    let text = input::inline_or_file(&a.matrix)?;
    let mut m = input::parse_matrix_json(&text)?;
    if a.paper_orientation {
        m = to_bottom_right(&m);
    }
    let chain = RationalChain::from_matrix(m)?;
    let flip = |v: &[Rational]| if a.paper_orientation { reversed(v) } else { v.to_vec() };
    let t_max = config.or(a.t_max, "t-max")?.unwrap_or(10);
    let erg = is_ergodic(&chain);
    let mut v = json!({
        "dim": chain.dim(),
        "orientation": if a.paper_orientation { "paper" } else { "ascending" },
        "ergodic": { "irreducible": erg.irreducible, "aperiodic": erg.aperiodic },
    });
    let pi = stationary(&chain);
    match &pi {
        Ok(pi) => {
            v["stationary"] = qs(&flip(pi.probabilities()));
            let rev = is_reversible(&chain, pi);
            v["reversible"] = json!(rev.reversible);
        }
        Err(e) => v["stationary"] = json!({ "error": e.to_string() }),
    }
    match rational_spectrum(&chain) {
        Ok(spec) => {
            let mut list: Vec<Value> = spec
                .iter()
                .map(|(l, mult)| json!({ "value": q(l), "multiplicity": mult }))
                .collect();
            list.reverse();
            v["eigenvalues"] = Value::Array(list);
        }
        Err(e) => v["eigenvalues"] = json!({ "error": e.to_string() }),
    }
    let mut success = true;
    if let Some(theta_arg) = &a.theta {
        let raw = input::parse_vector(&input::inline_or_file(theta_arg)?)?;
        let theta = Distribution::new(flip(&raw))?;
        match convergence_report(&chain, &theta) {
            Ok(rep) => {
                let coefficients: Vec<Value> = rep
                    .coefficients()
                    .iter()
                    .map(|(l, c)| json!({ "eigenvalue": q(l), "c2": q(c) }))
                    .collect();
                let mut rows = Vec::new();
                for t in 0..=t_max {
                    let dist = step_distribution(&chain, &theta, t);
                    let chi = chi_square(&dist, &rep.stationary);
                    let tv = tv_distance(&dist, &rep.stationary);
                    let identity = chi == rep.chi_square_at(t);
                    let holds = rep.bound_holds(&tv, t);
                    success &= identity && holds;
                    let digits = common.precision.unwrap_or(15).max(1) as u32;
                    rows.push(json!({
                        "t": t,
                        "distribution": qs(&flip(dist.probabilities())),
                        "chi_square": q(&chi),
                        "chi_square_identity": identity,
                        "tv": output::q_with_decimal(&tv, common.precision),
                        "bound_squared": q(&rep.tv_bound_squared_at(t)),
                        "bound_decimal": rep.tv_bound_decimal_at(t, digits),
                        "bound_holds": holds,
                    }));
                }
                v["convergence"] = json!({ "coefficients": coefficients, "rows": rows });
            }
            Err(e) => v["convergence"] = json!({ "error": e.to_string() }),
        }
    }
    if a.approximate {
        let p = common.precision.unwrap_or(6);
        let eigs: Vec<Value> = approximate_eigenvalues(chain.matrix())
            .iter()
            .map(|(re, im)| json!({ "re": format!("{re:.p$}"), "im": format!("{im:.p$}") }))
            .collect();
        v["approximate_eigenvalues"] = Value::Array(eigs);
    }
    Ok(Outcome { text: pretty(&v), success })
}

fn simulate(a: &SimulateArgs, config: &Config, common: &Common) -> Result<Outcome> {
    let params = ShuffleParams::new(a.n, a.r, a.kind)?;
    let steps = config.or(a.steps, "steps")?.unwrap_or(1_000);
    let replicates = config.or(a.replicates, "replicates")?.unwrap_or(1);
    let seed = config.or(a.seed, "seed")?.unwrap_or(0);
    let mut cfg = SimConfig::shuffle(params, steps, replicates, seed);
    if let Some(x) = config.or(a.start_type, "start-type")? {
        cfg = cfg.with_start(Start::Type(x));
    }
    let trajectories = simulate_replicates(&cfg)?;
    let text = match a.emit {
        Emit::Trajectory => {
            let multi = trajectories.len() > 1;
            let mut s = String::from(if multi { "replicate,step,type\n" } else { "step,type\n" });
            for tr in &trajectories {
                for (step, x) in tr.types.iter().enumerate() {
                    if multi {
                        s.push_str(&format!("{},{step},{x}\n", tr.replicate));
                    } else {
                        s.push_str(&format!("{step},{x}\n"));
                    }
                }
            }
            s
        }
        Emit::Summary => {
            let exact = exact_chain(&cfg.walk)?;
            let emp = empirical_matrix(&trajectories, a.r);
            let p = common.precision.unwrap_or(6);
            let fmt = |x: f64| format!("{x:.p$}");
            let rows = |m: &[Option<Vec<f64>>]| -> Value {
                Value::Array(
                    m.iter()
                        .map(|r| match r {
                            Some(r) => Value::Array(r.iter().map(|&x| json!(fmt(x))).collect()),
                            None => Value::Null,
                        })
                        .collect(),
                )
            };
            let pi = stationary(&exact).ok();
            let occupation_error = pi.as_ref().map(|pi| {
                pi.probabilities()
                    .iter()
                    .zip(&emp.occupation)
                    .map(|(e, o)| (to_f64(e) - o).abs())
                    .fold(0.0, f64::max)
            });
            let outside = emp.outside_sigma(&exact, 5.0);
            pretty(&json!({
                "n": a.n,
                "r": a.r,
                "type": a.kind,
                "steps": steps,
                "replicates": replicates,
                "seed": seed,
                "counts": emp.counts,
                "estimates": rows(&emp.estimates),
                "std_errors": rows(&emp.std_errors),
                "exact": qm(exact.matrix()),
                "max_abs_error": fmt(emp.max_abs_error(&exact)),
                "outside_5_sigma": outside,
                "occupation": emp.occupation.iter().map(|&x| fmt(x)).collect::<Vec<_>>(),
                "stationary": pi.as_ref().map(|pi| qs(pi.probabilities())),
                "max_occupation_error": occupation_error.map(fmt),
            }))
        }
    };
    Ok(Outcome::ok(text))
}

fn verify_paper(a: &VerifyArgs) -> Result<Outcome> {
    let checks = verify::run_checks(verify::Sources::default());
    let text = if a.json {
        pretty(&verify::render_json(&checks))
    } else {
        verify::render_text(&checks)
    };
    Ok(Outcome {
        text,
        success: verify::all_passed(&checks),
    })
}

/// Parses arguments, runs, writes output; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match run(&cli) {
        Ok(outcome) => {
            let written = match &cli.out {
                Some(path) => fs::write(path, &outcome.text).with_context(|| format!("writing {}", path.display())),
                None => {
                    print!("{}", outcome.text);
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: {e:#}");
                return 2;
            }
            if outcome.success {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            2
        }
    }
}
