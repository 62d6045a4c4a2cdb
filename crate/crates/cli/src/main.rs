use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use aspectra::commands::{self, CompareArgs, FormKind, Outcome, RunConfig, SpectrumArgs, Suite, EXIT_USAGE};
use aspectra_core::poly::DEFAULT_PRIME;
use aspectra_core::spectra::{Method, ProbeKind, SymbolicLimits, VerifyOptions};
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "aspectra", version, about = "Echelon forms and pencil spectra for affine Weyl groups of type Ã_n")]
struct Cli {
    /// Write the JSON report to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Master seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Include wall-clock timings (makes output run-dependent).
    #[arg(long, global = true)]
    timings: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormArg {
    Echelon,
    Block,
    Tilde,
}

#[derive(Clone, Copy, ValueEnum)]
enum SetArg {
    #[value(name = "K")]
    K,
    #[value(name = "scriptK")]
    ScriptK,
}

impl From<SetArg> for ProbeKind {
    fn from(s: SetArg) -> Self {
        match s {
            SetArg::K => ProbeKind::K,
            SetArg::ScriptK => ProbeKind::ScriptK,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Symbolic,
    Pit,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Symbolic => Method::Symbolic,
            MethodArg::Pit => Method::Pit,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Relations,
    Theorem47,
    Echelon,
    Lemma21,
    Theorem52,
    Theorem32,
    Oracle,
    Proofstep,
    All,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::Relations => Suite::Relations,
            SuiteArg::Theorem47 => Suite::Theorem47,
            SuiteArg::Echelon => Suite::Echelon,
            SuiteArg::Lemma21 => Suite::Lemma21,
            SuiteArg::Theorem52 => Suite::Theorem52,
            SuiteArg::Theorem32 => Suite::Theorem32,
            SuiteArg::Oracle => Suite::Oracle,
            SuiteArg::Proofstep => Suite::Proofstep,
            SuiteArg::All => Suite::All,
        }
    }
}

#[derive(clap::Args)]
struct Limits {
    /// Largest representation dimension for exact determinants.
    #[arg(long, default_value_t = SymbolicLimits::default().max_dim)]
    max_dim: usize,
    /// Largest probe-set size for exact determinants.
    #[arg(long, default_value_t = SymbolicLimits::default().max_vars)]
    max_vars: usize,
}

impl From<&Limits> for SymbolicLimits {
    fn from(l: &Limits) -> Self {
        SymbolicLimits { max_dim: l.max_dim, max_vars: l.max_vars }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Rewrite a word into an echelon form.
    Rewrite {
        #[arg(long)]
        n: usize,
        /// Space-separated letters such as `a1 a2 g1^-1`.
        #[arg(long, allow_hyphen_values = true)]
        word: String,
        #[arg(long, value_enum, default_value = "tilde")]
        form: FormArg,
        /// Include every admissible move.
        #[arg(long)]
        trace: bool,
    },
    /// List a probe set.
    Probe {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "K")]
        kind: SetArg,
    },
    /// Pencil determinant of one representation.
    Spectrum {
        #[arg(long)]
        n: usize,
        /// Representation, e.g. `tits`, `perm:standard`, `sum(perm:trivial,perm:sign)`, `conj(tits,seed=7)`.
        #[arg(long)]
        rep: String,
        #[arg(long, value_enum, default_value = "K")]
        set: SetArg,
        #[arg(long, value_enum, default_value = "symbolic")]
        method: MethodArg,
        /// Number of evaluation points for the randomized method.
        #[arg(long, default_value_t = 4)]
        trials: u32,
        #[arg(long, default_value_t = DEFAULT_PRIME)]
        prime: u64,
        #[command(flatten)]
        limits: Limits,
    },
    /// Compare two representations by divisors and by characters.
    Compare {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        rep1: String,
        #[arg(long)]
        rep2: String,
        #[arg(long, value_enum, default_value = "K")]
        set: SetArg,
        #[arg(long, value_enum, default_value = "symbolic")]
        method: MethodArg,
        /// Characters are compared on all words of at most this length.
        #[arg(long, default_value_t = 8)]
        char_budget: usize,
        #[arg(long, default_value_t = 4)]
        trials: u32,
        #[arg(long, default_value_t = DEFAULT_PRIME)]
        prime: u64,
        /// With the symbolic method, also run the randomized test.
        #[arg(long)]
        cross_check: bool,
        #[command(flatten)]
        limits: Limits,
    },
    /// Run verification suites.
    Verify {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, value_enum, default_value = "all")]
        suite: SuiteArg,
    },
}

fn run(cli: &Cli) -> Result<Outcome, aspectra_core::Error> {
    let cfg = RunConfig { seed: cli.seed, timings: cli.timings };
    match &cli.command {
        Command::Rewrite { n, word, form, trace } => {
            let form = match form {
                FormArg::Echelon => FormKind::Echelon,
                FormArg::Block => FormKind::Block,
                FormArg::Tilde => FormKind::Tilde,
            };
            commands::rewrite(*n, word, form, *trace, &cfg)
        }
        Command::Probe { n, kind } => commands::probe(*n, (*kind).into(), &cfg),
        Command::Spectrum { n, rep, set, method, trials, prime, limits } => commands::spectrum(
            &SpectrumArgs {
                n: *n,
                rep,
                kind: (*set).into(),
                method: (*method).into(),
                limits: limits.into(),
                points: *trials,
                prime: *prime,
            },
            &cfg,
        ),
        Command::Compare { n, rep1, rep2, set, method, char_budget, trials, prime, cross_check, limits } => {
            let opts = VerifyOptions {
                method: (*method).into(),
                limits: limits.into(),
                pit_trials: *trials,
                prime: *prime,
                cross_check: *cross_check,
                char_budget: *char_budget,
            };
            commands::compare(&CompareArgs { n: *n, rep1, rep2, kind: (*set).into(), opts }, &cfg)
        }
        Command::Verify { n, suite } => commands::verify(*n, (*suite).into(), &cfg),
    }
}

fn configure_threads() {
    if let Some(k) = std::env::var("ASPECTRA_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        // Only fails if a pool already exists, which cannot happen here.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(k).build_global();
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads();
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            if matches!(e, aspectra_core::Error::FeasibilityExceeded { .. }) {
                eprintln!("hint: pass `--method pit`, or raise `--max-dim` / `--max-vars`");
            }
            return ExitCode::from(commands::error_exit(&e) as u8);
        }
    };
    for line in &outcome.diagnostics {
        eprintln!("{line}");
    }
    let mut text = serde_json::to_string_pretty(&outcome.document).expect("JSON values serialize");
    text.push('\n');
    let written = match &cli.out {
        Some(path) => std::fs::write(path, &text),
        None => std::io::stdout().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write output: {e}");
        return ExitCode::from(EXIT_USAGE as u8);
    }
    ExitCode::from(outcome.exit as u8)
}
