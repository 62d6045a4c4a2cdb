//! End-to-end acceptance run: nine criteria, each printed as one PASS/FAIL
//! line with its check count and wall time. Exits non-zero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use aspectra::commands::RunConfig;
use aspectra::suites::{self, PitRecord, SuiteOutcome};
use aspectra_core::spectra::ProbeKind;

const CONJUGATES: usize = 5;
const CHAR_BUDGET: usize = 8;

struct Line {
    number: usize,
    title: &'static str,
    passed: bool,
    checks: usize,
    elapsed: Duration,
    limit: Duration,
    notes: Vec<String>,
}

impl Line {
    fn from_outcomes(number: usize, title: &'static str, limit_secs: u64, outcomes: &[&SuiteOutcome]) -> Line {
        let mut notes = Vec::new();
        for o in outcomes {
            notes.extend(o.critical.iter().map(|m| format!("CRITICAL: {m}")));
            notes.extend(o.violations.iter().cloned());
        }
        Line {
            number,
            title,
            passed: outcomes.iter().all(|o| o.passed()),
            checks: outcomes.iter().map(|o| o.checks).sum(),
            elapsed: outcomes.iter().map(|o| o.elapsed).sum(),
            limit: Duration::from_secs(limit_secs),
            notes,
        }
    }

    fn report(&self) -> bool {
        let in_time = self.elapsed < self.limit;
        let ok = self.passed && in_time;
        println!(
            "criterion {} ({}): {} [{} checks, {:.2} s, limit {} s]",
            self.number,
            self.title,
            if ok { "PASS" } else { "FAIL" },
            self.checks,
            self.elapsed.as_secs_f64(),
            self.limit.as_secs()
        );
        if !in_time {
            println!("    over time limit");
        }
        for note in self.notes.iter().take(if self.passed { usize::MAX } else { 10 }) {
            println!("    {note}");
        }
        ok
    }
}

fn main() -> ExitCode {
    // `cargo test` passes harness flags such as `--list`; answer those
    // without running anything.
    if std::env::args().any(|a| a == "--list") {
        println!("acceptance: test");
        return ExitCode::SUCCESS;
    }
    let cfg = RunConfig { seed: 0, timings: true };
    let started = Instant::now();
    let mut lines = Vec::new();

    let relations = suites::relations(&[2, 3, 4, 5]).expect("relations suite runs");
    lines.push(Line::from_outcomes(1, "relations, n = 2..5", 10, &[&relations]));

    let lattice = suites::theorem47(&[2, 3, 4, 5]).expect("lattice suite runs");
    lines.push(Line::from_outcomes(2, "lattice subgroup and quotient, n = 2..5", 5, &[&lattice]));

    let echelon = suites::echelon(&[2, 3], 500, 12, cfg.derived_seed(1)).expect("echelon suite runs");
    lines.push(Line::from_outcomes(3, "echelon forms: all of S_4, 500 random words", 60, &[&echelon]));

    let (conjugate_tuples, mut records) = suites::lemma21(20, cfg.derived_seed(2)).expect("trace-sum suite runs");
    lines.push(Line::from_outcomes(4, "signature trace sums of conjugate tuples", 30, &[&conjugate_tuples]));

    let seed = cfg.derived_seed(3);
    let run = |name, kind, ns: &[usize], contra: &[usize]| {
        suites::spectral(name, kind, ns, contra, CONJUGATES, CHAR_BUDGET, seed).expect("spectral suite runs")
    };
    let positive = run("positive", ProbeKind::K, &[2, 3], &[]);
    lines.push(Line::from_outcomes(5, "conjugate representations on K, n = 2, 3", 300, &[&positive.outcome]));

    let contrapositive = run("contrapositive", ProbeKind::K, &[], &[2]);
    lines.push(Line::from_outcomes(6, "inequivalent pairs on K, n = 2", 120, &[&contrapositive.outcome]));

    let positive_script = suites::theorem32(&positive, &[2, 3], &[], CONJUGATES, CHAR_BUDGET, seed).expect("runs");
    let contrapositive_script =
        suites::theorem32(&contrapositive, &[], &[2], CONJUGATES, CHAR_BUDGET, seed).expect("runs");
    lines.push(Line::from_outcomes(
        7,
        "criteria 5-6 on scriptK with identical verdicts",
        300,
        &[&positive_script.outcome, &contrapositive_script.outcome],
    ));

    for r in [&positive, &contrapositive, &positive_script, &contrapositive_script] {
        records.extend(r.pit_records.iter().cloned());
    }
    let oracle = suites::oracle(&records);
    let mut line = Line::from_outcomes(8, "randomized identity test agrees with exact verdicts", 60, &[&oracle]);
    let expected = 20 + 2 * (positive.verdicts.len() + contrapositive.verdicts.len());
    if records.len() != expected {
        line.passed = false;
        line.notes.push(format!("{} randomized comparisons recorded, expected {expected}", records.len()));
    }
    if let Some(note) = bound_note(&records) {
        line.notes.push(note);
    }
    lines.push(line);

    let proofstep = suites::proofstep(&[2, 3], 100, 4, cfg.derived_seed(4)).expect("arrangement suite runs");
    lines.push(Line::from_outcomes(9, "arrangements of echelon alphabets, n = 2, 3", 60, &[&proofstep]));

    let mut all = true;
    for l in &lines {
        all &= l.report();
    }
    println!(
        "acceptance: {} of {} criteria passed in {:.1} s",
        lines.iter().filter(|l| l.passed && l.elapsed < l.limit).count(),
        lines.len(),
        started.elapsed().as_secs_f64()
    );
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn bound_note(records: &[PitRecord]) -> Option<String> {
    let worst = records.iter().map(|r| r.pit.error_bound()).max()?;
    let l = aspectra::json::log10(&worst)?;
    Some(format!("largest false-equal bound over {} comparisons: 10^{l:.2}", records.len()))
}
