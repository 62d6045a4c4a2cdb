//! Command implementations. Each returns a JSON document and an exit code;
//! `main` only parses arguments and writes output.

use aspectra_core::affine::AffineModel;
use aspectra_core::echelon::{a_echelon, block_echelon, tilde_echelon};
use aspectra_core::poly::is_prime;
use aspectra_core::reps::RepSpec;
use aspectra_core::spectra::{
    pencil, pencil_divisor, verify_character_determination, Method, ProbeKind, SymbolicLimits, VerifyOptions,
};
use aspectra_core::words::parse_word;
use aspectra_core::Error;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::json;
use crate::suites::{self, SuiteOutcome};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// A finished command: the document to print and the process exit code.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub document: Value,
    pub exit: i32,
    /// Lines for standard error, such as critical violations.
    pub diagnostics: Vec<String>,
}

impl Outcome {
    fn ok(document: Value) -> Self {
        Outcome { document, exit: EXIT_OK, diagnostics: Vec::new() }
    }
}

/// Settings shared by every command.
#[derive(Debug, Clone, Copy, Default)]
pub struct RunConfig {
    pub seed: u64,
    pub timings: bool,
}

impl RunConfig {
    /// A seed for one named piece of work, drawn from the master seed so
    /// that each piece is reproducible on its own.
    pub fn derived_seed(&self, stream: u64) -> u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        rng.next_u64()
    }
}

fn envelope(command: &str, config: Value, result: Value) -> Value {
    json!({
        "tool": "aspectra",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "config": config,
        "result": result,
    })
}

/// Exit code for a library error: every error is a rejected input.
pub fn error_exit(_e: &Error) -> i32 {
    EXIT_USAGE
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormKind {
    Echelon,
    Block,
    Tilde,
}

pub fn rewrite(n: usize, word: &str, form: FormKind, with_trace: bool, cfg: &RunConfig) -> Result<Outcome, Error> {
    let w = parse_word(word, n)?;
    let config = json!({ "n": n, "word": word, "form": format!("{form:?}").to_lowercase(), "trace": with_trace, "seed": cfg.seed });
    let result = match form {
        FormKind::Echelon | FormKind::Block => {
            let e = a_echelon(&w)?;
            if form == FormKind::Echelon {
                json!({ "input": json::word(&w), "form": e.to_string(), "word": json::word(&e.to_word()), "cycleType": e.cycle_type() })
            } else {
                let b = block_echelon(&e);
                let blocks: Vec<[usize; 2]> = b.blocks().iter().map(|b| [b.start, b.end]).collect();
                json!({ "input": json::word(&w), "blocks": blocks, "word": json::word(&b.to_word()), "cycleType": e.cycle_type() })
            }
        }
        FormKind::Tilde => {
            let model = AffineModel::new(n)?;
            let t = tilde_echelon(&model, &w)?;
            let mut v = json!({
                "input": json::word(&w),
                "form": json::tilde_form(&t),
                "display": t.to_string(),
                "word": json::word(&t.to_word()),
                "moves": t.trace.steps.len(),
            });
            if with_trace {
                v["trace"] = json::trace(&t.trace);
            }
            v
        }
    };
    Ok(Outcome::ok(envelope("rewrite", config, result)))
}

pub fn probe(n: usize, kind: ProbeKind, cfg: &RunConfig) -> Result<Outcome, Error> {
    let p = suites::probe_set(n, kind)?;
    let config = json!({ "n": n, "kind": kind.to_string(), "seed": cfg.seed });
    Ok(Outcome::ok(envelope("probe", config, json::probe_set(&p))))
}

pub struct SpectrumArgs<'a> {
    pub n: usize,
    pub rep: &'a str,
    pub kind: ProbeKind,
    pub method: Method,
    pub limits: SymbolicLimits,
    pub points: u32,
    pub prime: u64,
}

/// The pencil determinant of one representation: exactly, or as values
/// modulo a prime at seeded random points.
pub fn spectrum(a: &SpectrumArgs<'_>, cfg: &RunConfig) -> Result<Outcome, Error> {
    let spec = RepSpec::parse(a.rep)?;
    let rho = spec.build(a.n)?;
    let probe = suites::probe_set(a.n, a.kind)?;
    let config = json!({
        "n": a.n,
        "rep": spec.to_string(),
        "set": a.kind.to_string(),
        "method": a.method.to_string(),
        "seed": cfg.seed,
    });
    let result = match a.method {
        Method::Symbolic => {
            let d = pencil_divisor(&rho, &probe, &a.limits)?;
            json!({
                "dim": d.dim,
                "probeSet": json::probe_set(&probe),
                "determinant": json::poly(&d.poly),
                "display": d.poly.to_string(),
            })
        }
        Method::Pit => {
            if !is_prime(a.prime) {
                return Err(Error::BadPrime { prime: a.prime, reason: "not prime" });
            }
            let m = pencil(&rho, &probe)?;
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.derived_seed(0));
            let mut evaluations = Vec::new();
            for _ in 0..a.points {
                let point: Vec<u64> = (0..m.arity()).map(|_| rng.random_range(0..a.prime)).collect();
                let value = aspectra_core::poly::det_mod(m.eval_mod(&point, a.prime)?, m.dim(), a.prime);
                evaluations.push(json!({ "point": point, "value": value }));
            }
            json!({
                "dim": m.dim(),
                "probeSet": json::probe_set(&probe),
                "prime": a.prime,
                "degreeBound": m.degree_bound(),
                "evaluations": evaluations,
            })
        }
    };
    Ok(Outcome::ok(envelope("spectrum", config, result)))
}

pub struct CompareArgs<'a> {
    pub n: usize,
    pub rep1: &'a str,
    pub rep2: &'a str,
    pub kind: ProbeKind,
    pub opts: VerifyOptions,
}

/// Compares two representations; exits with a violation when divisors
/// agree but characters do not.
pub fn compare(a: &CompareArgs<'_>, cfg: &RunConfig) -> Result<Outcome, Error> {
    let s1 = RepSpec::parse(a.rep1)?;
    let s2 = RepSpec::parse(a.rep2)?;
    let (r1, r2) = (s1.build(a.n)?, s2.build(a.n)?);
    let probe = suites::probe_set(a.n, a.kind)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.derived_seed(0));
    let report = verify_character_determination(&r1, &r2, &probe, &a.opts, &mut rng)?;
    let config = json!({
        "n": a.n,
        "rep1": s1.to_string(),
        "rep2": s2.to_string(),
        "set": a.kind.to_string(),
        "method": a.opts.method.to_string(),
        "charBudget": a.opts.char_budget,
        "trials": a.opts.pit_trials,
        "prime": a.opts.prime,
        "crossCheck": a.opts.cross_check,
        "seed": cfg.seed,
    });
    let exit = if report.has_critical() { EXIT_VIOLATION } else { EXIT_OK };
    let diagnostics = report
        .violations
        .iter()
        .map(|v| format!("{}: {}", if v.critical { "CRITICAL" } else { "warning" }, v.message))
        .collect();
    Ok(Outcome { document: envelope("compare", config, json::report(&report, &probe)), exit, diagnostics })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
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

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Relations => "relations",
            Suite::Theorem47 => "theorem47",
            Suite::Echelon => "echelon",
            Suite::Lemma21 => "lemma21",
            Suite::Theorem52 => "theorem52",
            Suite::Theorem32 => "theorem32",
            Suite::Oracle => "oracle",
            Suite::Proofstep => "proofstep",
            Suite::All => "all",
        }
    }
}

/// Sizes used by `verify`.
pub const RANDOM_WORDS: usize = 500;
pub const RANDOM_WORD_LENGTH: usize = 12;
pub const CONJUGATE_TUPLES: usize = 20;
pub const CONJUGATES_PER_REP: usize = 5;
pub const CHAR_BUDGET: usize = 8;
pub const MULTISETS_PER_RANK: usize = 100;
pub const MAX_SIGNATURE_WEIGHT: usize = 4;

/// Runs the selected suites at rank `n`. Suites that need the outcome of
/// others (the scriptK comparison and the randomized-test oracle) run them
/// first.
pub fn run_suites(n: usize, suite: Suite, cfg: &RunConfig) -> Result<Vec<SuiteOutcome>, Error> {
    let want = |s: Suite| suite == s || suite == Suite::All;
    let ns = [n];
    let mut out = Vec::new();
    if want(Suite::Relations) {
        out.push(suites::relations(&ns)?);
    }
    if want(Suite::Theorem47) {
        out.push(suites::theorem47(&ns)?);
    }
    if want(Suite::Echelon) {
        out.push(suites::echelon(&ns, RANDOM_WORDS, RANDOM_WORD_LENGTH, cfg.derived_seed(1))?);
    }
    let needs_lemma = want(Suite::Lemma21) || want(Suite::Oracle);
    let needs_k = want(Suite::Theorem52) || want(Suite::Theorem32) || want(Suite::Oracle);
    let needs_script = want(Suite::Theorem32) || want(Suite::Oracle);
    let mut records = Vec::new();
    if needs_lemma {
        let (o, r) = suites::lemma21(CONJUGATE_TUPLES, cfg.derived_seed(2))?;
        records.extend(r);
        if want(Suite::Lemma21) {
            out.push(o);
        }
    }
    if needs_k {
        let seed = cfg.derived_seed(3);
        let k = suites::spectral("theorem52", ProbeKind::K, &ns, &ns, CONJUGATES_PER_REP, CHAR_BUDGET, seed)?;
        records.extend(k.pit_records.iter().cloned());
        if needs_script {
            let s = suites::theorem32(&k, &ns, &ns, CONJUGATES_PER_REP, CHAR_BUDGET, seed)?;
            records.extend(s.pit_records.iter().cloned());
            if want(Suite::Theorem52) {
                out.push(k.outcome);
            }
            if want(Suite::Theorem32) {
                out.push(s.outcome);
            }
        } else if want(Suite::Theorem52) {
            out.push(k.outcome);
        }
    }
    if want(Suite::Oracle) {
        out.push(suites::oracle(&records));
    }
    if want(Suite::Proofstep) {
        out.push(suites::proofstep(&ns, MULTISETS_PER_RANK, MAX_SIGNATURE_WEIGHT, cfg.derived_seed(4))?);
    }
    Ok(out)
}

pub fn verify(n: usize, suite: Suite, cfg: &RunConfig) -> Result<Outcome, Error> {
    let outcomes = run_suites(n, suite, cfg)?;
    let passed = outcomes.iter().all(SuiteOutcome::passed);
    let config = json!({ "n": n, "suite": suite.name(), "seed": cfg.seed });
    let result = json!({
        "passed": passed,
        "suites": outcomes.iter().map(|o| o.to_json(cfg.timings)).collect::<Vec<_>>(),
    });
    let diagnostics = outcomes
        .iter()
        .flat_map(|o| {
            let critical = o.critical.iter().map(move |m| format!("CRITICAL [{}]: {m}", o.name));
            critical.chain(o.violations.iter().map(move |m| format!("violation [{}]: {m}", o.name)))
        })
        .collect();
    let exit = if passed { EXIT_OK } else { EXIT_VIOLATION };
    Ok(Outcome { document: envelope("verify", config, result), exit, diagnostics })
}
