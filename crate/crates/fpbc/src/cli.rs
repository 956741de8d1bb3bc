//! The `fpbc` command line.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use fpbc_core::braid::{random_word, reduce_to_w4, synthesize, tableau_of, DEFAULT_LENGTH_CEILING};
use fpbc_core::braid_cost::{analytic_bound, exhaustive_fraction, CubicLattice, EXHAUSTIVE_LIMIT};
use fpbc_core::compiler::{compile, CompileError, Executor};
use fpbc_core::dense::{simulate_circuit_exact, Distribution};
use fpbc_core::device::{exact_shift, DeviceWarning};
use fpbc_core::layout::{
    check_realizable, config_for_parity, omega_shift, readout_operator, uniform_couplings, LadderLayout,
};
use fpbc_core::rng::substream;

use crate::formats::{self, FormatError, LayoutFile};
use crate::manifest::{manifest_path, write_atomic, RunManifest};
use crate::parallel;
use crate::selftest;

#[derive(Debug, Parser)]
#[command(name = "fpbc", version, about = "Fermion-parity-based computation toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct Output {
    /// Write results here instead of stdout; the manifest goes to `<path>.manifest.json`.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compile a circuit into an adaptive measurement program.
    Compile {
        #[arg(long)]
        circuit: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Sample a compiled program on the magic register.
    Run {
        #[arg(long)]
        program: PathBuf,
        #[arg(long, default_value_t = 1000)]
        shots: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Report exact probabilities instead of sampling.
        #[arg(long)]
        exact: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Output distribution of a circuit by direct dense simulation.
    Oracle {
        #[arg(long)]
        circuit: PathBuf,
        #[arg(long, conflicts_with = "shots")]
        exact: bool,
        #[arg(long)]
        shots: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: Output,
    },
    /// Bus/ground configuration measuring the parity of the given MZMs (1-based).
    Layout {
        #[arg(long, value_delimiter = ',')]
        mzms: Vec<usize>,
        #[arg(long)]
        columns: usize,
        /// JSON list of {"e_m", "a"}, one per tri-junction; default A = (1,1,1).
        #[arg(long)]
        couplings: Option<PathBuf>,
        /// Plates reach only vertical islands.
        #[arg(long)]
        sparse: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Resonator frequency shift for a layout configuration.
    Shift {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        device: PathBuf,
        #[arg(long, default_value_t = 0)]
        photons: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Estimate the fraction of R-measurable parity operators.
    BraidCost {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        c: usize,
        #[arg(long)]
        r: usize,
        #[arg(long = "R")]
        big_r: usize,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Enumerate every even sample instead of sampling.
        #[arg(long)]
        exhaustive: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Re-synthesize a braid word from its tableau.
    Synthesize {
        #[arg(long, required_unless_present = "random_length")]
        word: Option<PathBuf>,
        /// Start from a random word of this length instead.
        #[arg(long, conflicts_with = "word")]
        random_length: Option<usize>,
        #[arg(long)]
        modes: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Rewrite the result into weight-2 and weight-4 factors.
        #[arg(long)]
        w4: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Run the built-in invariant checks.
    Selftest,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    User(String),
    #[error("internal invariant failed: {0}")]
    Invariant(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::User(_) => 1,
            CliError::Invariant(_) => 2,
        }
    }
}

impl From<FormatError> for CliError {
    fn from(e: FormatError) -> Self {
        match e {
            FormatError::Tampered(_) => CliError::Invariant(e.to_string()),
            e => CliError::User(e.to_string()),
        }
    }
}

fn user(e: impl ToString) -> CliError {
    CliError::User(e.to_string())
}

fn compile_error(e: CompileError) -> CliError {
    match e {
        CompileError::InvalidCircuit(_) => CliError::User(formats::compile_message(&e)),
        e => CliError::Invariant(e.to_string()),
    }
}

struct Ctx {
    manifest: RunManifest,
}

impl Ctx {
    fn read(&mut self, path: &Path) -> Result<String, CliError> {
        let bytes = std::fs::read(path).map_err(|e| user(format!("{}: {e}", path.display())))?;
        self.manifest.add_input(path, &bytes);
        String::from_utf8(bytes).map_err(|_| user(format!("{}: not UTF-8", path.display())))
    }

    fn emit(mut self, out: &Output, body: String) -> Result<(), CliError> {
        self.manifest.add_output(
            out.output
                .as_deref()
                .map_or("stdout".into(), |p| p.display().to_string())
                .as_str(),
            body.as_bytes(),
        );
        let manifest = serde_json::to_string_pretty(&self.manifest).expect("serializable") + "\n";
        match &out.output {
            Some(p) => {
                write_atomic(p, body.as_bytes()).map_err(|e| user(format!("{}: {e}", p.display())))?;
                write_atomic(&manifest_path(p), manifest.as_bytes()).map_err(|e| user(format!("manifest: {e}")))?;
            }
            None => {
                print!("{body}");
                eprint!("{manifest}");
            }
        }
        Ok(())
    }
}

fn json_only(out: &Output, command: &str) -> Result<(), CliError> {
    if out.format == Format::Csv {
        return Err(user(format!("{command} output has no CSV form")));
    }
    Ok(())
}

fn render_map<V: Serialize + Copy>(map: &BTreeMap<String, V>, format: Format, value: &str) -> String {
    match format {
        Format::Json => formats::to_json(map),
        Format::Csv => formats::csv_rows(["bitstring", value], map.iter().map(|(k, v)| (k.clone(), *v))),
    }
}

fn render_record<T: Serialize>(value: &T, format: Format) -> String {
    match format {
        Format::Json => formats::to_json(value),
        Format::Csv => formats::csv_record(value),
    }
}

fn counts(samples: &[String]) -> BTreeMap<String, u64> {
    let mut m = BTreeMap::new();
    for s in samples {
        *m.entry(s.clone()).or_insert(0) += 1;
    }
    m
}

#[derive(Debug, Serialize)]
struct ShiftReport {
    omega_shift: f64,
    exact_shift: f64,
    relative_error: f64,
    dispersive_constant: f64,
    delta_eps0: f64,
    delta_eps1: f64,
    factor: f64,
    warnings: String,
}

#[derive(Debug, Serialize)]
struct CostReport {
    estimate: f64,
    stderr: f64,
    bound: f64,
    trials: u64,
    approximate: u64,
    division_counterexamples: u64,
    exhaustive: bool,
}

/// Execute a parsed command line; `argv` is recorded in the manifest.
pub fn run(cli: Cli, argv: &[String]) -> Result<(), CliError> {
    parallel::init_threads();
    let seed = match &cli.command {
        Command::Run { seed, exact: false, .. }
        | Command::BraidCost {
            seed,
            exhaustive: false,
            ..
        } => Some(*seed),
        Command::Oracle {
            seed, shots: Some(_), ..
        } => Some(*seed),
        Command::Synthesize {
            seed,
            random_length: Some(_),
            ..
        } => Some(*seed),
        _ => None,
    };
    let name = argv.get(1).cloned().unwrap_or_default();
    let mut ctx = Ctx {
        manifest: RunManifest::new(&name, argv.get(2..).unwrap_or(&[]), seed),
    };
    match cli.command {
        Command::Compile { circuit, out } => {
            json_only(&out, "compile")?;
            let c = formats::parse_circuit(&ctx.read(&circuit)?)?;
            let p = compile(&c).map_err(compile_error)?;
            let s = p.default_branch.stats();
            eprintln!(
                "compiled: {} quantum, {} coin, {} derived steps",
                s.quantum, s.coin, s.derived
            );
            ctx.emit(&out, formats::program_json(&p))
        }
        Command::Run {
            program,
            shots,
            seed,
            exact,
            out,
        } => {
            let p = formats::parse_program(&ctx.read(&program)?)?;
            let body = if exact {
                let d = Executor::new(&p).exact_distribution().map_err(compile_error)?;
                render_map(&d.probs, out.format, "probability")
            } else {
                let samples = parallel::run_program(&p, shots, seed).map_err(compile_error)?;
                render_map(&counts(&samples), out.format, "count")
            };
            ctx.emit(&out, body)
        }
        Command::Oracle {
            circuit,
            exact: _,
            shots,
            seed,
            out,
        } => {
            let c = formats::parse_circuit(&ctx.read(&circuit)?)?;
            let d = match shots {
                None => simulate_circuit_exact(&c).map_err(user)?,
                Some(n) => {
                    let samples = parallel::sample_dense(&c, n, seed).map_err(user)?;
                    Distribution::from_counts(samples.iter().map(|s| s.as_str()))
                }
            };
            ctx.emit(&out, render_map(&d.probs, out.format, "probability"))
        }
        Command::Layout {
            mzms,
            columns,
            couplings,
            sparse,
            out,
        } => {
            json_only(&out, "layout")?;
            let layout = if sparse {
                LadderLayout::sparse(columns)
            } else {
                LadderLayout::new(columns)
            }
            .map_err(user)?;
            let mut set = BTreeSet::new();
            for m in &mzms {
                let k = m.checked_sub(1).ok_or_else(|| user("MZM labels start at 1"))?;
                if !set.insert(k) {
                    return Err(user(format!("MZM {m} listed twice")));
                }
            }
            let cpl = match couplings {
                Some(p) => formats::parse_couplings(&ctx.read(&p)?)?,
                None => uniform_couplings(&layout),
            };
            let config = config_for_parity(&set, &layout).map_err(user)?;
            let q = readout_operator(&config, &layout, &cpl).map_err(user)?;
            if q.q_string.modes().collect::<BTreeSet<_>>() != set {
                return Err(CliError::Invariant(
                    "measured operator support differs from the target".into(),
                ));
            }
            let sorted: Vec<usize> = set.into_iter().collect();
            let file = LayoutFile::of(&layout, sparse, &sorted, &config, &cpl, &q);
            ctx.emit(&out, formats::to_json(&file))
        }
        Command::Shift {
            config,
            device,
            photons,
            out,
        } => {
            let file: LayoutFile = formats::from_json(&ctx.read(&config)?)?;
            let (layout, cfg, cpl) = file.to_parts()?;
            check_realizable(&layout, &cfg).map_err(user)?;
            let dev = formats::parse_device(&ctx.read(&device)?)?;
            let shift = omega_shift(&cfg, &layout, &cpl, &dev).map_err(user)?;
            let q = readout_operator(&cfg, &layout, &cpl).map_err(user)?;
            let exact = exact_shift(&dev, q.scalar.abs(), photons);
            let warnings: Vec<String> = dev
                .warnings(photons)
                .into_iter()
                .map(|w| match w {
                    DeviceWarning::LowJosephsonRatio(r) => format!("E_J/E_C = {r:.3} is below 20"),
                    DeviceWarning::WeakDispersion(r) => format!("dw^2/(g^2(n+1)) = {r:.3} is below 10"),
                })
                .collect();
            for w in &warnings {
                eprintln!("warning: {w}");
            }
            let [e0, e1] = dev.delta_eps();
            let report = ShiftReport {
                omega_shift: shift,
                exact_shift: exact,
                relative_error: ((exact - shift.abs()) / exact).abs(),
                dispersive_constant: dev.dispersive_constant(),
                delta_eps0: e0,
                delta_eps1: e1,
                factor: shift / (dev.dispersive_constant() / 2.0 * (e0 + e1)),
                warnings: warnings.join("; "),
            };
            ctx.emit(&out, render_record(&report, out.format))
        }
        Command::BraidCost {
            m,
            d,
            c,
            r,
            big_r,
            trials,
            seed,
            exhaustive,
            out,
        } => {
            let lattice = CubicLattice::new(m, d, c, r).map_err(user)?;
            if big_r == 0 {
                return Err(user("R must be positive"));
            }
            let bound = analytic_bound(m, d, r, big_r);
            let report = if exhaustive {
                if lattice.mzms() > EXHAUSTIVE_LIMIT {
                    return Err(user(format!(
                        "exhaustive enumeration needs m^d*c <= {EXHAUSTIVE_LIMIT}"
                    )));
                }
                let e = exhaustive_fraction(&lattice, big_r).map_err(user)?;
                CostReport {
                    estimate: e.fraction(),
                    stderr: 0.0,
                    bound,
                    trials: e.samples,
                    approximate: 0,
                    division_counterexamples: e.counterexamples,
                    exhaustive: true,
                }
            } else {
                let t = parallel::estimate_fraction_parallel(&lattice, big_r, trials, seed).map_err(user)?;
                let (estimate, stderr) = t.estimate();
                CostReport {
                    estimate,
                    stderr,
                    bound,
                    trials: t.trials,
                    approximate: t.approximate,
                    division_counterexamples: t.counterexamples,
                    exhaustive: false,
                }
            };
            if report.division_counterexamples > 0 {
                return Err(CliError::Invariant(format!(
                    "{} R-measurable samples admit no even division",
                    report.division_counterexamples
                )));
            }
            ctx.emit(&out, render_record(&report, out.format))
        }
        Command::Synthesize {
            word,
            random_length,
            modes,
            seed,
            w4,
            out,
        } => {
            json_only(&out, "synthesize")?;
            if modes == 0 || modes % 2 == 1 {
                return Err(user("--modes must be a positive even number"));
            }
            let input = match (word, random_length) {
                (Some(p), _) => formats::parse_word(&ctx.read(&p)?, modes)?,
                (None, Some(len)) => random_word(modes, len, modes, &mut substream(seed, "synthesize", 0)),
                (None, None) => return Err(user("give --word or --random-length")),
            };
            let target = tableau_of(&input, modes).map_err(user)?;
            let mut result = synthesize(&target).map_err(|e| CliError::Invariant(e.to_string()))?;
            if w4 {
                result =
                    reduce_to_w4(&result, DEFAULT_LENGTH_CEILING).map_err(|e| CliError::Invariant(e.to_string()))?;
            }
            let got = tableau_of(&result, modes).map_err(|e| CliError::Invariant(e.to_string()))?;
            if got != target {
                return Err(CliError::Invariant("synthesized word has a different tableau".into()));
            }
            eprintln!(
                "input {} factors, output {} factors, max weight {}",
                input.len(),
                result.len(),
                result.max_weight()
            );
            ctx.emit(&out, formats::to_json(&formats::word_records(&result)))
        }
        Command::Selftest => {
            let results = selftest::run_all();
            let mut failed = 0;
            for (name, r) in &results {
                match r {
                    Ok(()) => println!("ok   {name}"),
                    Err(e) => {
                        failed += 1;
                        println!("FAIL {name}: {e}");
                    }
                }
            }
            if failed > 0 {
                return Err(CliError::Invariant(format!("{failed} self-test(s) failed")));
            }
            Ok(())
        }
    }
}

/// Parse `argv` and run; returns the process exit status.
pub fn main_with(argv: Vec<String>) -> i32 {
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(cli, &argv) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
