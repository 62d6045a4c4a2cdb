//! Verification suites. Each suite runs a family of exact checks and
//! collects every failure; randomness is drawn from one seeded generator
//! before any parallel work starts, so results do not depend on scheduling.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use aspectra_core::affine::{quotient_to_finite, AffineModel, FinitePermutation};
use aspectra_core::echelon::{a_echelon, block_echelon, lift_to_word, tilde_echelon, Block, EchelonForm};
use aspectra_core::lattice::{
    coordinates, g_defining_word, rewrite_a_g, rewrite_a_p, rewrite_block_g, rewrite_p_p, BlockSide, PForm, PSide,
};
use aspectra_core::matrix::Matrix;
use aspectra_core::poly::{pit_equal, PitVerdict, PolyMatrix, DEFAULT_PRIME};
use aspectra_core::reps::{battery, perm_quotient, random_invertible, tits, MatrixRep, PermKind};
use aspectra_core::spectra::{
    character_difference, probe_set_k, probe_set_script_k, trace_sum, verify_on_ball, word_ball, K1Alphabet, Method,
    ProbeKind, ProbeSet, SymbolicLimits, VerifyOptions,
};
use aspectra_core::words::{apply_move, cyclically_adjacent, enumerate_moves, Letter, Word};
use aspectra_core::{Error, Rational};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::json;

/// The result of one suite.
#[derive(Debug, Clone)]
pub struct SuiteOutcome {
    pub name: &'static str,
    pub checks: usize,
    pub violations: Vec<String>,
    /// Failures that can only come from an implementation error, such as
    /// equal divisors with unequal characters.
    pub critical: Vec<String>,
    pub details: Value,
    pub elapsed: Duration,
}

impl SuiteOutcome {
    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.critical.is_empty()
    }

    pub fn to_json(&self, timings: bool) -> Value {
        let mut v = json!({
            "suite": self.name,
            "passed": self.passed(),
            "checks": self.checks,
            "violations": self.violations,
            "critical": self.critical,
            "details": self.details,
        });
        if timings {
            v["seconds"] = json!(self.elapsed.as_secs_f64());
        }
        v
    }
}

#[derive(Default)]
struct Tally {
    checks: usize,
    violations: Vec<String>,
    critical: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.violations.push(msg());
        }
    }

    fn absorb(&mut self, other: Tally) {
        self.checks += other.checks;
        self.violations.extend(other.violations);
        self.critical.extend(other.critical);
    }

    fn finish(self, name: &'static str, details: Value, started: Instant) -> SuiteOutcome {
        SuiteOutcome {
            name,
            checks: self.checks,
            violations: self.violations,
            critical: self.critical,
            details,
            elapsed: started.elapsed(),
        }
    }
}

fn words_equal(model: &AffineModel, tits: &MatrixRep, lhs: &Word, rhs: &Word) -> (bool, bool) {
    let affine = model.eval(lhs) == model.eval(rhs);
    let matrix = tits.image(lhs).expect("rank checked") == tits.image(rhs).expect("rank checked");
    (affine, matrix)
}

fn check_relation(t: &mut Tally, model: &AffineModel, tits: &MatrixRep, label: &str, lhs: &Word, rhs: &Word) {
    let (affine, matrix) = words_equal(model, tits, lhs, rhs);
    t.check(affine, || format!("n={}: {label}: `{lhs}` = `{rhs}` fails in the affine model", model.rank()));
    t.check(matrix, || format!("n={}: {label}: `{lhs}` = `{rhs}` fails for the Tits matrices", model.rank()));
}

/// Coxeter relations and every lattice relation, checked in the affine
/// model and in the Tits representation.
pub fn relations(ns: &[usize]) -> aspectra_core::Result<SuiteOutcome> {
    let started = Instant::now();
    let per_rank: Vec<aspectra_core::Result<(Tally, Value)>> = ns
        .par_iter()
        .map(|&n| {
            let model = AffineModel::new(n)?;
            let tits = tits(n)?;
            let mut t = Tally::default();
            let mut counts = [0usize; 5];
            let empty = Word::empty(n);
            for i in 1..=n + 1 {
                let ai = Word::from_a(n, &[i, i]);
                check_relation(&mut t, &model, &tits, "a_i^2 = 1", &ai, &empty);
                for j in i + 1..=n + 1 {
                    if cyclically_adjacent(i, j, n) {
                        let braid = Word::from_a(n, &[i, j, i, j, i, j]);
                        check_relation(&mut t, &model, &tits, "(a_i a_j)^3 = 1", &braid, &empty);
                    } else {
                        let (l, r) = (Word::from_a(n, &[i, j]), Word::from_a(n, &[j, i]));
                        check_relation(&mut t, &model, &tits, "a_i a_j = a_j a_i", &l, &r);
                    }
                    counts[0] += 1;
                }
            }
            for i in 1..=n + 1 {
                for j in 1..=n + 1 {
                    for side in [PSide::Direct, PSide::Inverse] {
                        let r = rewrite_a_p(i, j, side, n);
                        check_relation(&mut t, &model, &tits, &format!("a_{i}-p_{j} {side:?}"), &r.lhs, &r.rhs);
                        counts[1] += 1;
                    }
                    for form in [PForm::Direct, PForm::BothInverse, PForm::Mixed] {
                        let r = rewrite_p_p(i, j, form, n);
                        check_relation(&mut t, &model, &tits, &format!("p_{i}-p_{j} {form:?}"), &r.lhs, &r.rhs);
                        counts[2] += 1;
                    }
                }
            }
            for k in 1..=n + 1 {
                for j in 1..=n {
                    let r = rewrite_a_g(k, j, n);
                    check_relation(&mut t, &model, &tits, &format!("a_{k}-g_{j}"), &r.lhs, &r.rhs);
                    counts[3] += 1;
                }
            }
            for p in 1..=n {
                for k in p + 1..=n.min(p + 3) {
                    let block = Block { start: p, end: k };
                    for j in 1..=n {
                        for side in [BlockSide::Left, BlockSide::Right] {
                            match rewrite_block_g(block, j, side, n) {
                                Ok(r) => {
                                    let label = format!("a_{p}..a_{k} with g_{j} {side:?}");
                                    check_relation(&mut t, &model, &tits, &label, &r.lhs, &r.rhs);
                                    counts[4] += 1;
                                }
                                Err(Error::NoBlockRelation { .. }) => {
                                    t.check(j + 1 == p || j == k + 1, || {
                                        format!("n={n}: no block relation for a_{p}..a_{k} and g_{j}")
                                    });
                                }
                                Err(e) => return Err(e),
                            }
                        }
                    }
                }
            }
            let details = json!({
                "n": n,
                "coxeterPairs": counts[0],
                "aP": counts[1],
                "pP": counts[2],
                "aG": counts[3],
                "blockG": counts[4],
            });
            Ok((t, details))
        })
        .collect();
    let mut tally = Tally::default();
    let mut details = Vec::new();
    for r in per_rank {
        let (t, d) = r?;
        tally.absorb(t);
        details.push(d);
    }
    Ok(tally.finish("relations", json!(details), started))
}

fn generated_group_size(gens: &[FinitePermutation]) -> usize {
    let size = gens[0].size();
    let mut seen = BTreeSet::from([FinitePermutation::identity(size)]);
    let mut frontier = vec![FinitePermutation::identity(size)];
    while let Some(p) = frontier.pop() {
        for g in gens {
            let q = p.compose(g);
            if seen.insert(q.clone()) {
                frontier.push(q);
            }
        }
    }
    seen.len()
}

/// The lattice subgroup is abelian and normal, and the quotient is
/// S_{n+1} with `a_{n+1}` going to the transposition `(1, n+1)`.
pub fn theorem47(ns: &[usize]) -> aspectra_core::Result<SuiteOutcome> {
    let started = Instant::now();
    let mut t = Tally::default();
    let mut details = Vec::new();
    for &n in ns {
        let model = AffineModel::new(n)?;
        for i in 1..=n + 1 {
            for j in 1..=n + 1 {
                let (gi, gj) = (g_defining_word(i, n), g_defining_word(j, n));
                let ok = model.eval(&gi.concat(&gj)) == model.eval(&gj.concat(&gi));
                t.check(ok, || format!("n={n}: g_{i} g_{j} != g_{j} g_{i}"));
            }
        }
        for k in 1..=n + 1 {
            for j in 1..=n {
                for g in [Letter::g(j), Letter::g_inv(j)] {
                    let w = Word::new(n, vec![Letter::A(k), g, Letter::A(k)])?;
                    let image = model.eval(&w);
                    t.check(quotient_to_finite(&image).is_identity(), || {
                        format!("n={n}: a_{k} {g} a_{k} leaves the lattice subgroup")
                    });
                    t.check(coordinates(&model, &image).is_ok(), || {
                        format!("n={n}: a_{k} {g} a_{k} has no coordinates")
                    });
                }
            }
        }
        let size = n + 1;
        let gens: Vec<FinitePermutation> =
            (1..=n).map(|i| quotient_to_finite(&model.eval(&Word::from_a(n, &[i])))).collect();
        for (i, g) in gens.iter().enumerate() {
            t.check(*g == FinitePermutation::transposition(size, i + 1, i + 2), || {
                format!("n={n}: a_{} does not map to ({} {})", i + 1, i + 1, i + 2)
            });
        }
        let order = generated_group_size(&gens);
        let factorial: usize = (1..=size).product();
        t.check(order == factorial, || format!("n={n}: quotient images generate {order} elements, not {factorial}"));
        let last = model.eval(&Word::from_a(n, &[n + 1]));
        let swap = FinitePermutation::transposition(size, 1, size);
        t.check(quotient_to_finite(&last) == swap, || format!("n={n}: a_{} does not map to (1 {size})", n + 1));
        let residue = swap.lift().inverse().compose(&last);
        let coords = coordinates(&model, &residue);
        t.check(coords.is_ok(), || format!("n={n}: a_{} differs from (1 {size}) outside the lattice", n + 1));
        details.push(json!({
            "n": n,
            "quotientOrder": order,
            "lastGeneratorLattice": coords.ok().map(|c| json::lattice(&c)),
        }));
    }
    Ok(t.finish("theorem47", json!(details), started))
}

/// Breadth-first search over length-nonincreasing admissible moves for a
/// word of echelon shape with the given cycle type.
pub fn bfs_echelon(model: &AffineModel, x: &Word, cycle_type: &[usize], max_states: usize) -> Option<Word> {
    let mut seen = BTreeSet::from([x.clone()]);
    let mut queue = std::collections::VecDeque::from([x.clone()]);
    while let Some(w) = queue.pop_front() {
        if EchelonForm::from_word(&w).is_some() && quotient_to_finite(&model.eval(&w)).cycle_type() == cycle_type {
            return Some(w);
        }
        for m in enumerate_moves(&w, model) {
            let Ok(next) = apply_move(&w, &m, model) else { continue };
            if next.len() <= x.len() && seen.len() < max_states && seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    None
}

fn battery_characters(reps: &[(String, MatrixRep)], w: &Word) -> Vec<Rational> {
    reps.iter().map(|(_, r)| r.character(w).expect("rank checked")).collect()
}

pub fn random_word<R: Rng + ?Sized>(rng: &mut R, n: usize, len: usize) -> Word {
    let letters = (0..len)
        .map(|_| match rng.random_range(0..3) {
            0 => Letter::A(rng.random_range(1..=n + 1)),
            1 => Letter::g(rng.random_range(1..=n)),
            _ => Letter::g_inv(rng.random_range(1..=n)),
        })
        .collect();
    Word::new(n, letters).expect("letters in range")
}

/// Every element of S_{n+1} (n <= 4) through the A_n echelon
/// constructions, cross-checked by move search; then `count` random words
/// through the Ã-echelon form.
pub fn echelon(ns: &[usize], count: usize, max_len: usize, seed: u64) -> aspectra_core::Result<SuiteOutcome> {
    let started = Instant::now();
    let mut t = Tally::default();
    let mut details = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for &n in ns.iter().filter(|&&n| n <= 4) {
        let model = AffineModel::new(n)?;
        let reps = battery(n)?;
        let perms = all_permutations(n + 1);
        let results: Vec<Tally> = perms
            .par_iter()
            .map(|sigma| {
                let mut t = Tally::default();
                let x = lift_to_word(sigma, n);
                let e = a_echelon(&x).expect("finite alphabet");
                let ew = e.to_word();
                let ct = sigma.cycle_type();
                t.check(EchelonForm::from_word(&ew).as_ref() == Some(&e), || {
                    format!("n={n}: `{ew}` is not of echelon shape")
                });
                t.check(e.cycle_type() == ct, || format!("n={n}: echelon form of `{x}` changes the cycle type"));
                t.check(ew.len() <= x.len(), || format!("n={n}: echelon form of `{x}` is longer"));
                t.check(battery_characters(&reps, &x) == battery_characters(&reps, &ew), || {
                    format!("n={n}: `{x}` and `{ew}` have different characters")
                });
                let b = block_echelon(&e);
                t.check(b.to_echelon().cycle_type() == ct, || {
                    format!("n={n}: block form of `{ew}` changes the cycle type")
                });
                t.check(battery_characters(&reps, &x) == battery_characters(&reps, &b.to_word()), || {
                    format!("n={n}: `{x}` and its block form have different characters")
                });
                let found = bfs_echelon(&model, &x, &ct, 200_000);
                t.check(found.is_some(), || format!("n={n}: move search from `{x}` finds no echelon form"));
                t
            })
            .collect();
        let mut sub = Tally::default();
        results.into_iter().for_each(|r| sub.absorb(r));
        details.push(json!({ "n": n, "finiteElements": perms.len(), "checks": sub.checks }));
        t.absorb(sub);
    }
    let jobs: Vec<(usize, Word)> = (0..count)
        .map(|k| {
            let n = ns[k % ns.len()];
            let len = rng.random_range(0..=max_len);
            (n, random_word(&mut rng, n, len))
        })
        .collect();
    let batteries: Vec<(usize, Vec<(String, MatrixRep)>)> =
        ns.iter().map(|&n| Ok((n, battery(n)?))).collect::<aspectra_core::Result<_>>()?;
    let results: Vec<Tally> = jobs
        .par_iter()
        .map(|(n, w)| {
            let mut t = Tally::default();
            let model = AffineModel::new(*n).expect("rank checked");
            let reps = &batteries.iter().find(|(m, _)| m == n).expect("battery built").1;
            match tilde_echelon(&model, w) {
                Ok(f) => {
                    t.check(f.check_shape().is_ok(), || {
                        format!("n={n}: `{w}` -> `{f}`: {}", f.check_shape().unwrap_err())
                    });
                    t.check(f.trace.verify(&model).is_ok(), || format!("n={n}: trace for `{w}` does not replay"));
                    t.check(f.trace.current() == &f.to_word(), || format!("n={n}: trace for `{w}` ends elsewhere"));
                    t.check(battery_characters(reps, w) == battery_characters(reps, &f.to_word()), || {
                        format!("n={n}: `{w}` and `{f}` have different characters")
                    });
                }
                Err(e) => t.check(false, || format!("n={n}: tilde echelon of `{w}` failed: {e}")),
            }
            t
        })
        .collect();
    let mut sub = Tally::default();
    results.into_iter().for_each(|r| sub.absorb(r));
    details.push(json!({ "randomWords": count, "maxLength": max_len, "checks": sub.checks }));
    t.absorb(sub);
    Ok(t.finish("echelon", json!(details), started))
}

fn all_permutations(size: usize) -> Vec<FinitePermutation> {
    let mut current: Vec<usize> = (1..=size).collect();
    let mut out = Vec::new();
    loop {
        out.push(FinitePermutation::from_images(current.clone()).expect("a permutation"));
        let Some(i) = (0..size - 1).rev().find(|&i| current[i] < current[i + 1]) else { return out };
        let j = (i + 1..size).rev().find(|&j| current[j] > current[i]).expect("successor");
        current.swap(i, j);
        current[i + 1..].reverse();
    }
}

/// A randomized comparison recorded next to the exact verdict it should
/// reproduce.
#[derive(Debug, Clone)]
pub struct PitRecord {
    pub label: String,
    pub symbolic_equal: bool,
    pub pit: PitVerdict,
}

impl PitRecord {
    fn to_json(&self) -> Value {
        json!({ "label": self.label, "symbolicEqual": self.symbolic_equal, "pit": json::pit(&self.pit) })
    }
}

fn signatures(k: usize, max_weight: usize) -> Vec<Vec<usize>> {
    fn rec(k: usize, left: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == k {
            if prefix.iter().sum::<usize>() > 0 {
                out.push(prefix.clone());
            }
            return;
        }
        for c in 0..=left {
            prefix.push(c);
            rec(k, left - c, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(k, max_weight, &mut Vec::new(), &mut out);
    out
}

fn random_rational_matrix<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Matrix {
    Matrix::from_rows(
        (0..dim)
            .map(|_| {
                (0..dim)
                    .map(|_| Rational::new(rng.random_range(-4i64..=4).into(), rng.random_range(1i64..=3).into()))
                    .collect()
            })
            .collect(),
    )
}

/// Simultaneously conjugate matrix tuples have equal signature trace sums
/// and equal pencil determinants.
pub fn lemma21(tuples: usize, seed: u64) -> aspectra_core::Result<(SuiteOutcome, Vec<PitRecord>)> {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let jobs: Vec<(Vec<Matrix>, Matrix, u64)> = (0..tuples)
        .map(|_| {
            let a: Vec<Matrix> = (0..3).map(|_| random_rational_matrix(3, &mut rng)).collect();
            (a, random_invertible(3, &mut rng), rng.random())
        })
        .collect();
    let sigs = signatures(3, 4);
    let results: Vec<aspectra_core::Result<(Tally, PitRecord)>> = jobs
        .par_iter()
        .enumerate()
        .map(|(k, (a, c, pit_seed))| {
            let mut t = Tally::default();
            let inv = c.inverse()?;
            let b: Vec<Matrix> = a.iter().map(|m| inv.mul(m).mul(c)).collect();
            for m in &sigs {
                let lhs = trace_sum(a, m, 6)?;
                let rhs = trace_sum(&b, m, 6)?;
                t.check(lhs == rhs, || format!("tuple {k}: trace sums differ at signature {m:?}"));
            }
            let (pa, pb) = (PolyMatrix::pencil(a)?, PolyMatrix::pencil(&b)?);
            let equal = pa.det_symbolic() == pb.det_symbolic();
            t.check(equal, || format!("tuple {k}: pencil determinants differ"));
            let pit = pit_equal(&pa, &pb, 4, DEFAULT_PRIME, &mut ChaCha8Rng::seed_from_u64(*pit_seed))?;
            Ok((t, PitRecord { label: format!("lemma21 tuple {k}"), symbolic_equal: equal, pit }))
        })
        .collect();
    let mut tally = Tally::default();
    let mut records = Vec::new();
    for r in results {
        let (t, rec) = r?;
        tally.absorb(t);
        records.push(rec);
    }
    let details = json!({ "tuples": tuples, "signatures": sigs.len(), "maxWeight": 4 });
    Ok((tally.finish("lemma21", details, started), records))
}

/// One divisor/character comparison with its outcome.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub label: String,
    pub divisor_equal: bool,
    pub char_equal: bool,
}

/// Output of the spectral suites.
#[derive(Debug, Clone)]
pub struct SpectralRun {
    pub outcome: SuiteOutcome,
    pub verdicts: Vec<Verdict>,
    pub pit_records: Vec<PitRecord>,
}

/// Equal-dimension pairs of inequivalent representations at rank `n`.
pub fn inequivalent_pairs(n: usize) -> aspectra_core::Result<Vec<(String, MatrixRep, String, MatrixRep)>> {
    let triv = perm_quotient(n, PermKind::Trivial)?;
    let sign = perm_quotient(n, PermKind::Sign)?;
    let std = perm_quotient(n, PermKind::Standard)?;
    let power = |r: &MatrixRep, k: usize| -> aspectra_core::Result<MatrixRep> {
        (1..k).try_fold(r.clone(), |acc, _| acc.direct_sum(r))
    };
    let label = |name: &str, k: usize| if k == 1 { name.to_string() } else { format!("{name}^{k}") };
    Ok(vec![
        (label("trivial", n + 1), power(&triv, n + 1)?, "trivial+standard".into(), triv.direct_sum(&std)?),
        (label("sign", n), power(&sign, n)?, "standard".into(), std.clone()),
        (format!("trivial+{}", label("sign", n - 1)), triv.direct_sum(&power(&sign, n - 1)?)?, "standard".into(), std),
    ])
}

pub fn probe_set(n: usize, kind: ProbeKind) -> aspectra_core::Result<ProbeSet> {
    match kind {
        ProbeKind::ScriptK => probe_set_script_k(n),
        _ => probe_set_k(n),
    }
}

/// Symbolic limits large enough for the rank-3 probe sets.
pub const SUITE_LIMITS: SymbolicLimits = SymbolicLimits { max_dim: 10, max_vars: 12 };

struct Job {
    n: usize,
    label: String,
    rho1: MatrixRep,
    rho2: MatrixRep,
    positive: bool,
    seed: u64,
}

/// Representations against rational conjugates of themselves (divisors and
/// characters must agree), and inequivalent equal-dimension pairs at
/// `contrapositive_ns` (characters differ on a short word, so divisors must
/// differ).
pub fn spectral(
    name: &'static str,
    kind: ProbeKind,
    ns: &[usize],
    contrapositive_ns: &[usize],
    conjugates: usize,
    char_budget: usize,
    seed: u64,
) -> aspectra_core::Result<SpectralRun> {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut jobs = Vec::new();
    for &n in ns {
        for (rname, rho) in battery(n)? {
            for c in 0..conjugates {
                let cm = random_invertible(rho.dim(), &mut rng);
                jobs.push(Job {
                    n,
                    label: format!("n={n} {rname} vs conjugate #{c}"),
                    rho2: rho.conjugate(&cm)?,
                    rho1: rho.clone(),
                    positive: true,
                    seed: rng.random(),
                });
            }
        }
    }
    for &n in contrapositive_ns {
        for (l1, r1, l2, r2) in inequivalent_pairs(n)? {
            jobs.push(Job {
                n,
                label: format!("n={n} {l1} vs {l2}"),
                rho1: r1,
                rho2: r2,
                positive: false,
                seed: rng.random(),
            });
        }
    }
    let mut ranks: Vec<usize> = jobs.iter().map(|j| j.n).collect();
    ranks.sort_unstable();
    ranks.dedup();
    let shared: Vec<(usize, ProbeSet, aspectra_core::spectra::WordBall, aspectra_core::spectra::WordBall)> = ranks
        .iter()
        .map(|&n| {
            let model = AffineModel::new(n)?;
            Ok((n, probe_set(n, kind)?, word_ball(&model, char_budget), word_ball(&model, 4)))
        })
        .collect::<aspectra_core::Result<_>>()?;
    let opts = VerifyOptions {
        method: Method::Symbolic,
        limits: SUITE_LIMITS,
        pit_trials: 4,
        prime: DEFAULT_PRIME,
        cross_check: true,
        char_budget,
    };
    type Compared = (Tally, Verdict, Option<PitRecord>, Value);
    let results: Vec<aspectra_core::Result<Compared>> = jobs
        .par_iter()
        .map(|job| {
            let (_, probe, ball, short_ball) = shared.iter().find(|s| s.0 == job.n).expect("shared data built");
            let mut t = Tally::default();
            let mut rng = ChaCha8Rng::seed_from_u64(job.seed);
            let report = verify_on_ball(&job.rho1, &job.rho2, probe, &opts, ball, &mut rng)?;
            for v in &report.violations {
                let line = format!("{}: {}", job.label, v.message);
                if v.critical {
                    t.critical.push(line);
                } else {
                    t.violations.push(line);
                }
            }
            if job.positive {
                t.check(report.divisor_equal, || format!("{}: divisors differ", job.label));
                t.check(report.char_equal, || format!("{}: characters differ", job.label));
            } else {
                let short = character_difference(&job.rho1, &job.rho2, short_ball)?;
                t.check(short.is_some(), || format!("{}: characters agree on all words of length <= 4", job.label));
                t.check(!report.divisor_equal, || format!("{}: divisors agree", job.label));
            }
            let record = report.pit.clone().map(|pit| PitRecord {
                label: format!("{name} {}", job.label),
                symbolic_equal: report.divisor_equal,
                pit,
            });
            let verdict = Verdict {
                label: job.label.clone(),
                divisor_equal: report.divisor_equal,
                char_equal: report.char_equal,
            };
            let summary = json!({
                "label": job.label,
                "dims": [report.dims.0, report.dims.1],
                "divisorEqual": report.divisor_equal,
                "charEqual": report.char_equal,
                "charWitness": report.char_witness.as_ref().map(json::word),
                "ballSize": report.ball_size,
            });
            Ok((t, verdict, record, summary))
        })
        .collect();
    let mut tally = Tally::default();
    let mut verdicts = Vec::new();
    let mut records = Vec::new();
    let mut summaries = Vec::new();
    for r in results {
        let (t, v, rec, s) = r?;
        tally.absorb(t);
        verdicts.push(v);
        records.extend(rec);
        summaries.push(s);
    }
    let probes: Vec<Value> = shared.iter().map(|(_, p, _, _)| json::probe_set(p)).collect();
    let details = json!({ "probeSets": probes, "comparisons": summaries });
    Ok(SpectralRun { outcome: tally.finish(name, details, started), verdicts, pit_records: records })
}

/// The spectral suite on K, then again on scriptK with identical verdicts
/// required.
pub fn theorem32(
    k_run: &SpectralRun,
    ns: &[usize],
    contrapositive_ns: &[usize],
    conjugates: usize,
    char_budget: usize,
    seed: u64,
) -> aspectra_core::Result<SpectralRun> {
    let mut run = spectral("theorem32", ProbeKind::ScriptK, ns, contrapositive_ns, conjugates, char_budget, seed)?;
    let same = run.verdicts == k_run.verdicts;
    run.outcome.checks += 1;
    if !same {
        for (a, b) in k_run.verdicts.iter().zip(&run.verdicts) {
            if a != b {
                run.outcome.violations.push(format!("verdicts differ between K and scriptK: {a:?} vs {b:?}"));
            }
        }
        if k_run.verdicts.len() != run.verdicts.len() {
            run.outcome.violations.push("K and scriptK runs compared different numbers of pairs".into());
        }
    }
    run.outcome.details["verdictsMatchK"] = json!(same);
    Ok(run)
}

/// Randomized verdicts agree with exact ones and every equal verdict has a
/// false-equal bound of at most `10^-60`.
pub fn oracle(records: &[PitRecord]) -> SuiteOutcome {
    let started = Instant::now();
    let mut t = Tally::default();
    let limit = Rational::new(1.into(), BigInt::from(10).pow(60));
    for r in records {
        t.check(r.pit.equal == r.symbolic_equal, || {
            format!("{}: randomized verdict {} vs symbolic {}", r.label, r.pit.equal, r.symbolic_equal)
        });
        t.check(r.pit.error_bound() <= limit, || format!("{}: error bound above 1e-60", r.label));
        t.check(r.pit.trials == 4 && r.pit.prime == DEFAULT_PRIME, || format!("{}: unexpected parameters", r.label));
    }
    let worst = records
        .iter()
        .map(|r| r.pit.error_bound())
        .max()
        .map(|b| json!({ "exact": json::rational(&b), "log10": json::log10(&b) }));
    let details = json!({
        "comparisons": records.len(),
        "worstBound": worst,
        "records": records.iter().map(PitRecord::to_json).collect::<Vec<_>>(),
    });
    t.finish("oracle", details, started)
}

/// Multisets cut from Ã-echelon forms of random words: every arrangement
/// must have the battery characters of the original word.
pub fn proofstep(ns: &[usize], per_rank: usize, max_weight: usize, seed: u64) -> aspectra_core::Result<SuiteOutcome> {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = Tally::default();
    let mut details = Vec::new();
    for &n in ns {
        let model = AffineModel::new(n)?;
        let reps = battery(n)?;
        let k = probe_set_k(n)?;
        let mut jobs = Vec::new();
        let mut attempts = 0;
        while jobs.len() < per_rank {
            attempts += 1;
            if attempts > 1000 * per_rank {
                t.check(false, || format!("n={n}: could not draw {per_rank} multisets"));
                break;
            }
            let len = rng.random_range(1..=12);
            let w = random_word(&mut rng, n, len);
            let form = tilde_echelon(&model, &w)?;
            let k1 = K1Alphabet::from_form(&form.block_part, &form.lattice_part);
            if (2..=max_weight).contains(&k1.weight()) {
                jobs.push((w, form, k1, rng.random::<u64>()));
            }
        }
        let results: Vec<aspectra_core::Result<(Tally, usize)>> = jobs
            .par_iter()
            .map(|(w, form, k1, s)| {
                let mut t = Tally::default();
                for l in &k1.letters {
                    t.check(k.words().contains(l), || format!("n={n}: `{l}` from `{form}` is not in K"));
                }
                let canonical = k1.spell(&k1.canonical());
                t.check(canonical == form.to_word(), || format!("n={n}: alphabet for `{form}` spells `{canonical}`"));
                t.check(battery_characters(&reps, w) == battery_characters(&reps, &canonical), || {
                    format!("n={n}: `{w}` and `{canonical}` have different characters")
                });
                let report = aspectra_core::spectra::signature_conjugacy_check(
                    k1,
                    &reps,
                    24,
                    &mut ChaCha8Rng::seed_from_u64(*s),
                )?;
                t.checks += report.arrangements_checked;
                t.violations.extend(report.violations.into_iter().map(|v| format!("n={n}, from `{form}`: {v}")));
                Ok((t, report.arrangements_checked))
            })
            .collect();
        let mut arrangements = 0;
        for r in results {
            let (sub, a) = r?;
            arrangements += a;
            t.absorb(sub);
        }
        details.push(json!({ "n": n, "multisets": jobs.len(), "arrangements": arrangements }));
    }
    Ok(t.finish("proofstep", json!(details), started))
}
