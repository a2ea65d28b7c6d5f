use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use binloc_core::fitness::{count_local_maxima, DeJongFunction, DeJongSpec, OneMaxTarget};
use binloc_core::gea::{run_es, run_ga_with, run_sa, EsConfig, GaConfig, SaConfig};
use binloc_core::locality::{locality_report, point_locality, rothlauf_dm};
use binloc_core::markov::{absorption_probabilities, evolve_with, MarkovModel, Schedule, MARKOV_MAX_ELL};
use binloc_core::{Representation, RepresentationKind};
use clap::{Args, Parser, Subcommand};
use serde::{Serialize, Serializer};

use crate::error::{CliError, CliResult};
use crate::experiments::{reproduce, Profile, ReproduceId};
use crate::format::{fixed3, sig6};
use crate::manifest::{sidecar_path, ExperimentManifest};
use crate::output::{locality_row, stats_table, write_file, Table, LOCALITY_HEADER};
use crate::verify::{run_verify, VerifyOptions};
use crate::{plot, reprfile};

/// Locality metrics, representation constructors and evolutionary experiments
/// for bitstring-to-integer representations.
#[derive(Debug, Parser)]
#[command(name = "binloc", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Command {
    /// Build or inspect representations.
    #[command(subcommand)]
    Repr(ReprCommand),
    /// Locality metrics.
    #[command(subcommand)]
    Locality(LocalityCommand),
    /// Fitness landscape analysis.
    #[command(subcommand)]
    Fitness(FitnessCommand),
    /// Simulated annealing on generalized ONEMAX.
    Sa(SaArgs),
    /// (1+1)-ES on generalized ONEMAX.
    Es(EsArgs),
    /// Generational GA on a De Jong function.
    Ga(GaArgs),
    /// Exact Markov-chain prediction of simulated annealing.
    Markov(MarkovArgs),
    /// Check the locality bounds and identities; exit 4 on any failure.
    Verify(VerifyArgs),
    /// Rerun a published experiment and write its CSV series.
    Reproduce(ReproduceArgs),
    /// Plot CSV series as SVG.
    Plot(PlotArgs),
    /// Rerun the command recorded in a manifest.
    Replay {
        manifest: PathBuf,
    },
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum ReprCommand {
    /// Write a representation as JSON.
    Make {
        #[arg(long, value_parser = parse_kind)]
        #[serde(serialize_with = "ser_kind")]
        kind: RepresentationKind,
        #[arg(long, default_value_t = 5)]
        ell: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print a representation and its metrics.
    Inspect(ReprOpts),
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum LocalityCommand {
    /// CSV row with point locality, d_m and (optionally) general locality.
    Report {
        #[command(flatten)]
        repr: ReprOpts,
        /// Also compute general locality and distance distortion.
        #[arg(long)]
        general: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum FitnessCommand {
    /// List the local maxima of generalized ONEMAX under a representation.
    LocalMaxima {
        #[arg(long)]
        repr_file: Option<PathBuf>,
        #[command(flatten)]
        repr: ReprOpts,
        #[arg(long)]
        target: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// `sb`, `brg`, `ngg`, `ubl`, another constructor name, or `file:PATH`.
#[derive(Debug, Clone, PartialEq)]
enum ReprArg {
    Kind(RepresentationKind),
    File(PathBuf),
}

impl FromStr for ReprArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if let Some(path) = s.strip_prefix("file:") {
            return Ok(ReprArg::File(path.into()));
        }
        parse_kind(s).map(ReprArg::Kind)
    }
}

impl fmt::Display for ReprArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReprArg::Kind(k) => f.write_str(k.name()),
            ReprArg::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

impl Serialize for ReprArg {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

fn parse_kind(s: &str) -> Result<RepresentationKind, String> {
    let name = match s {
        "ngg32" => "ngg",
        "ubl32" => "ubl",
        other => other,
    };
    RepresentationKind::from_name(name).ok_or_else(|| {
        let names: Vec<&str> = RepresentationKind::ALL.iter().map(|k| k.name()).collect();
        format!("unknown representation {s:?}; expected one of {} or file:PATH", names.join(", "))
    })
}

fn ser_kind<S: Serializer>(k: &RepresentationKind, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(k.name())
}

#[derive(Debug, Clone, Args, Serialize)]
struct ReprOpts {
    #[arg(long, default_value = "sb")]
    repr: ReprArg,
    /// Bit length for constructed representations (files carry their own).
    #[arg(long, default_value_t = 5)]
    ell: u32,
    /// Seed for randomized constructors.
    #[arg(long, default_value_t = 0)]
    repr_seed: u64,
}

impl ReprOpts {
    fn build(&self) -> CliResult<Representation> {
        match &self.repr {
            ReprArg::Kind(k) => Ok(k.build(self.ell, self.repr_seed)?),
            ReprArg::File(p) => reprfile::read_repr(p),
        }
    }
}

#[derive(Debug, Args, Serialize)]
struct SaArgs {
    #[command(flatten)]
    repr: ReprOpts,
    #[arg(long)]
    target: u32,
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    #[arg(long, default_value_t = 2000)]
    generations: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 50.0)]
    t0: f64,
    #[arg(long, default_value_t = 0.995)]
    cooling: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
struct EsArgs {
    #[command(flatten)]
    repr: ReprOpts,
    #[arg(long)]
    target: u32,
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    #[arg(long, default_value_t = 1000)]
    generations: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0.2)]
    mutation_rate: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
struct GaArgs {
    #[arg(long, default_value = "f1", value_parser = parse_function)]
    #[serde(serialize_with = "ser_function")]
    function: DeJongFunction,
    /// Representation applied to each dimension; NGG and UBL are generalized
    /// to the slice width.
    #[arg(long, default_value = "sb")]
    repr: ReprArg,
    #[arg(long, default_value_t = 0)]
    repr_seed: u64,
    #[arg(long, default_value_t = 3000)]
    trials: u64,
    #[arg(long, default_value_t = 30)]
    generations: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 30)]
    population: usize,
    #[arg(long, default_value_t = 0.95)]
    crossover_rate: f64,
    #[arg(long, default_value_t = 0.01)]
    mutation_rate: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_function(s: &str) -> Result<DeJongFunction, String> {
    DeJongFunction::from_name(s).ok_or_else(|| format!("unknown function {s:?}; expected f1..f5"))
}

fn ser_function<S: Serializer>(f: &DeJongFunction, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(f.name())
}

#[derive(Debug, Args, Serialize)]
struct MarkovArgs {
    #[command(flatten)]
    repr: ReprOpts,
    #[arg(long)]
    target: u32,
    #[arg(long, default_value_t = 50.0)]
    t0: f64,
    #[arg(long, default_value_t = 0.995)]
    cooling: f64,
    /// Generations to report; generation 1 is the uniform start.
    #[arg(long, default_value_t = 2000)]
    generations: u32,
    /// Hold the temperature fixed instead of cooling.
    #[arg(long)]
    fixed_temp: Option<f64>,
    /// Print the zero-temperature absorption probabilities instead.
    #[arg(long)]
    absorption: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
struct VerifyArgs {
    #[arg(long, default_value_t = 8)]
    max_ell: u32,
    /// Random representations per width for the expectation check.
    #[arg(long, default_value_t = 100_000)]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Additionally check this representation.
    #[arg(long)]
    repr_file: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
struct ReproduceArgs {
    id: ReproduceId,
    #[arg(long, value_enum, default_value = "quick")]
    profile: Profile,
    /// Overrides the profile's trial count.
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "results")]
    out_dir: PathBuf,
}

#[derive(Debug, Args, Serialize)]
struct PlotArgs {
    #[arg(long = "csv", required = true)]
    csvs: Vec<PathBuf>,
    #[arg(long, default_value = "mean_fitness")]
    column: String,
    #[arg(long)]
    title: Option<String>,
    #[arg(long)]
    out: PathBuf,
}

/// Entry point shared by the binary and `replay`.
pub fn main_with(argv: Vec<String>) -> ExitCode {
    let cli = match Cli::try_parse_from(std::iter::once("binloc".to_string()).chain(argv.iter().cloned())) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command, &argv) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Writes `table` to `out` with a manifest beside it, or to stdout.
fn emit(table: &Table, out: Option<&Path>, command: &Command, argv: &[String], seed: Option<u64>) -> CliResult<()> {
    table.emit(out)?;
    if let Some(path) = out {
        let mut m = ExperimentManifest::new(command_name(command), argv, parameters(command), seed);
        m.outputs.push(path.to_path_buf());
        m.write(&sidecar_path(path))?;
    }
    Ok(())
}

fn parameters(command: &Command) -> serde_json::Value {
    serde_json::to_value(command).unwrap_or(serde_json::Value::Null)
}

fn command_name(command: &Command) -> &'static str {
    match command {
        Command::Repr(ReprCommand::Make { .. }) => "repr make",
        Command::Repr(ReprCommand::Inspect(_)) => "repr inspect",
        Command::Locality(_) => "locality report",
        Command::Fitness(_) => "fitness local-maxima",
        Command::Sa(_) => "sa",
        Command::Es(_) => "es",
        Command::Ga(_) => "ga",
        Command::Markov(_) => "markov",
        Command::Verify(_) => "verify",
        Command::Reproduce(_) => "reproduce",
        Command::Plot(_) => "plot",
        Command::Replay { .. } => "replay",
    }
}

fn run(command: Command, argv: &[String]) -> CliResult<()> {
    match &command {
        Command::Repr(ReprCommand::Make { kind, ell, seed, out }) => {
            let r = kind.build(*ell, *seed)?;
            match out {
                Some(path) => reprfile::write_repr(path, &r),
                None => {
                    println!("{}", reprfile::to_json(&r));
                    Ok(())
                }
            }
        }
        Command::Repr(ReprCommand::Inspect(opts)) => {
            let r = opts.build()?;
            let p = point_locality(&r).value();
            println!("ell: {}", r.ell());
            println!("perm: {:?}", r.perm());
            println!("gray: {}", r.is_gray());
            println!("point_locality: {p} ({})", fixed3(*p.numer() as u128, *p.denom() as u128));
            println!("dm: {}", rothlauf_dm(&r));
            Ok(())
        }
        Command::Locality(LocalityCommand::Report { repr, general, out }) => {
            let r = repr.build()?;
            let mut t = Table::new(&LOCALITY_HEADER);
            t.push(locality_row(&locality_report(&r, *general)?));
            emit(&t, out.as_deref(), &command, argv, None)
        }
        Command::Fitness(FitnessCommand::LocalMaxima {
            repr_file,
            repr,
            target,
            out,
        }) => {
            let r = match repr_file {
                Some(p) => reprfile::read_repr(p)?,
                None => repr.build()?,
            };
            let report = count_local_maxima(&OneMaxTarget::new(r.ell(), *target)?, &r)?;
            eprintln!("local maxima: {}", report.count);
            let mut t = Table::new(&["genotype", "bits", "phenotype", "fitness"]);
            for m in &report.maxima {
                t.push(vec![
                    m.genotype.to_string(),
                    format!("{:0width$b}", m.genotype, width = r.ell() as usize),
                    m.phenotype.to_string(),
                    m.fitness.to_string(),
                ]);
            }
            emit(&t, out.as_deref(), &command, argv, None)
        }
        Command::Sa(a) => {
            let r = a.repr.build()?;
            let cfg = SaConfig {
                ell: r.ell(),
                target: a.target,
                initial_temperature: a.t0,
                cooling_factor: a.cooling,
                max_generations: a.generations,
                trials: a.trials,
                master_seed: a.seed,
            };
            let stats = run_sa(&cfg, &r)?;
            emit(&stats_table(&stats), a.out.as_deref(), &command, argv, Some(a.seed))
        }
        Command::Es(a) => {
            let r = a.repr.build()?;
            let cfg = EsConfig {
                ell: r.ell(),
                target: a.target,
                mutation_rate: a.mutation_rate,
                max_generations: a.generations,
                trials: a.trials,
                master_seed: a.seed,
                start: None,
            };
            let report = run_es(&cfg, &r)?;
            emit(&stats_table(&report.stats), a.out.as_deref(), &command, argv, Some(a.seed))?;
            let summary = format!(
                "mean_generations_to_optimum,converged_fraction\n{},{}\n",
                report.mean_generations_to_optimum.map(sig6).unwrap_or_default(),
                sig6(report.converged_fraction)
            );
            if a.out.is_some() {
                print!("{summary}");
            } else {
                eprint!("{summary}");
            }
            Ok(())
        }
        Command::Ga(a) => {
            let spec = DeJongSpec::classical(a.function);
            let (kind, r) = match &a.repr {
                ReprArg::Kind(k) => (*k, k.build_generalized(spec.bits_per_dim, a.repr_seed)?),
                ReprArg::File(p) => (RepresentationKind::Sb, reprfile::read_repr(p)?),
            };
            let cfg = GaConfig {
                spec,
                representation: kind,
                representation_seed: a.repr_seed,
                population_size: a.population,
                crossover_rate: a.crossover_rate,
                mutation_rate: a.mutation_rate,
                generations: a.generations,
                trials: a.trials,
                master_seed: a.seed,
                ..GaConfig::new(spec, kind)
            };
            let stats = run_ga_with(&cfg, &r)?;
            emit(&stats_table(&stats), a.out.as_deref(), &command, argv, Some(a.seed))
        }
        Command::Markov(a) => {
            let r = a.repr.build()?;
            if r.ell() > MARKOV_MAX_ELL {
                return Err(CliError::Validation(format!("markov supports at most {MARKOV_MAX_ELL} bits")));
            }
            let schedule = match a.fixed_temp {
                Some(t) => Schedule::Fixed(t),
                None => Schedule::Cooling {
                    initial: a.t0,
                    factor: a.cooling,
                },
            };
            let model = MarkovModel::new(r.clone(), a.target, schedule)?;
            let maxima = count_local_maxima(&OneMaxTarget::new(r.ell(), a.target)?, &r)?.maxima;
            if a.absorption {
                let absorbed = absorption_probabilities(&model)?;
                let mut t = Table::new(&["phenotype", "genotype", "probability"]);
                for (m, p) in &absorbed.maxima {
                    t.push(vec![m.phenotype.to_string(), m.genotype.to_string(), sig6(*p)]);
                }
                return emit(&t, a.out.as_deref(), &command, argv, None);
            }
            if a.generations == 0 {
                return Err(CliError::Validation("need at least one generation".into()));
            }
            let mut header = vec!["generation".to_string(), "mass_at_optimum".to_string()];
            header.extend(maxima.iter().map(|m| format!("mass_at_{}", m.phenotype)));
            let mut t = Table::new(&header);
            evolve_with(&model, a.generations as usize - 1, |step, p| {
                let mut row = vec![(step + 1).to_string()];
                let at = |phenotype: u32| -> f64 {
                    p.iter()
                        .enumerate()
                        .filter(|&(g, _)| r.phenotype(g as u32) == phenotype)
                        .map(|(_, m)| m)
                        .sum()
                };
                row.push(sig6(at(a.target)));
                row.extend(maxima.iter().map(|m| sig6(p[m.genotype as usize])));
                t.push(row);
            });
            emit(&t, a.out.as_deref(), &command, argv, None)
        }
        Command::Verify(a) => {
            let extra = a.repr_file.as_deref().map(reprfile::read_repr).transpose()?;
            let checks = run_verify(&VerifyOptions {
                max_ell: a.max_ell,
                samples: a.samples,
                seed: a.seed,
                extra,
            })?;
            let mut stdout = std::io::stdout().lock();
            for c in &checks {
                let _ = writeln!(stdout, "{}", c.line());
            }
            let failed = checks.iter().filter(|c| !c.passed).count();
            let _ = writeln!(stdout, "{} checks, {failed} failed", checks.len());
            if failed > 0 {
                Err(CliError::CheckFailed(failed))
            } else {
                Ok(())
            }
        }
        Command::Reproduce(a) => {
            let trials = a.trials.unwrap_or_else(|| a.profile.trials(a.id));
            let outputs = reproduce(a.id, trials, a.seed)?;
            let mut params = parameters(&command);
            params["reproduce"]["trials"] = trials.into();
            let mut m = ExperimentManifest::new("reproduce", argv, params, Some(a.seed));
            for o in &outputs {
                let path = a.out_dir.join(&o.file_name);
                write_file(&path, &o.table.render()?)?;
                m.outputs.push(path);
            }
            let id = serde_json::to_value(a.id).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
            m.write(&a.out_dir.join(format!("{id}.manifest.json")))?;
            for path in &m.outputs {
                println!("{}", path.display());
            }
            Ok(())
        }
        Command::Plot(a) => plot::plot_files(&a.csvs, &a.column, a.title.as_deref(), &a.out),
        Command::Replay { manifest } => {
            let m = ExperimentManifest::read(manifest)?;
            if m.argv.first().is_some_and(|c| c == "replay") {
                return Err(CliError::Validation("a manifest cannot replay another replay".into()));
            }
            match main_with(m.argv) {
                code if code == ExitCode::SUCCESS => Ok(()),
                _ => Err(CliError::Validation("replayed command failed".into())),
            }
        }
    }
}
