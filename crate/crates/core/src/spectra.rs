//! Probe sets, pencil divisors `det(x_1 ρ(w_1) + .. + x_k ρ(w_k) - I)`,
//! signature trace sums, and the end-to-end check that equal divisors on a
//! probe set go together with equal characters.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

use crate::affine::{quotient_to_finite, AffineModel, AffinePermutation};
use crate::echelon::{echelon_for_cycle_type, Block, BlockEchelonForm};
use crate::lattice::LatticeElement;
use crate::matrix::Matrix;
use crate::poly::{pit_equal, MultiPoly, PitVerdict, PolyMatrix};
use crate::reps::MatrixRep;
use crate::words::{Letter, Word};
use crate::{check_rank, Error, Rational, Result};

/// Where a probe set came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProbeKind {
    /// Block echelon forms with blocks of length at most 2, then the
    /// lattice generators and their inverses.
    K,
    /// One representative per conjugacy class of S_{n+1}, then the lattice
    /// generators and their inverses.
    ScriptK,
    Custom,
}

impl fmt::Display for ProbeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProbeKind::K => "K",
            ProbeKind::ScriptK => "scriptK",
            ProbeKind::Custom => "custom",
        })
    }
}

/// An ordered list of distinct group elements; position `i` is the
/// variable `x_{i+1}` of every pencil built on it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbeSet {
    rank: usize,
    kind: ProbeKind,
    words: Vec<Word>,
}

impl ProbeSet {
    /// A custom probe set; rejects words with equal images.
    pub fn custom(rank: usize, words: Vec<Word>) -> Result<Self> {
        Self::build(rank, ProbeKind::Custom, words)
    }

    fn build(rank: usize, kind: ProbeKind, words: Vec<Word>) -> Result<Self> {
        let model = AffineModel::new(rank)?;
        let mut seen = BTreeMap::new();
        for w in &words {
            if w.rank() != rank {
                return Err(Error::RankMismatch(w.rank(), rank));
            }
            if seen.insert(model.eval(w), ()).is_some() {
                return Err(Error::DuplicateProbe(alloc::format!("{w}")));
            }
        }
        Ok(ProbeSet { rank, kind, words })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn kind(&self) -> ProbeKind {
        self.kind
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// The sub-list at the given positions, in that order.
    pub fn subset(&self, positions: &[usize]) -> Result<ProbeSet> {
        ProbeSet::custom(self.rank, positions.iter().map(|&i| self.words[i].clone()).collect())
    }
}

impl fmt::Display for ProbeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, w) in self.words.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            if w.is_empty() {
                f.write_str("1")?;
            } else {
                write!(f, "{w}")?;
            }
        }
        Ok(())
    }
}

/// Orders words by length, then by their letter index sequence.
fn shortlex(words: &mut [Word]) {
    words.sort_by_key(|w| (w.len(), w.letters().iter().map(|l| l.index()).collect::<Vec<_>>()));
}

fn lattice_letters(n: usize) -> impl Iterator<Item = Word> {
    (1..=n)
        .map(Letter::g)
        .chain((1..=n).map(Letter::g_inv))
        .map(move |l| Word::new(n, alloc::vec![l]).expect("valid lattice letter"))
}

/// Every non-empty block echelon form over `a_1..a_n` whose blocks have
/// length 1 or 2, then `g_1..g_n`, then `g_1^-1..g_n^-1`.
pub fn probe_set_k(n: usize) -> Result<ProbeSet> {
    check_rank(n)?;
    assert!(n < 32, "probe enumeration limited to n < 32");
    let mut forms = Vec::new();
    for mask in 1u32..(1 << n) {
        let indices: Vec<usize> = (1..=n).filter(|i| mask & (1 << (i - 1)) != 0).collect();
        let mut blocks: Vec<Block> = Vec::new();
        for &i in &indices {
            match blocks.last_mut() {
                Some(b) if b.end + 1 == i => b.end = i,
                _ => blocks.push(Block { start: i, end: i }),
            }
        }
        if blocks.iter().all(|b| b.len() <= 2) {
            if let Ok(form) = BlockEchelonForm::new(n, blocks) {
                forms.push(form.to_word());
            }
        }
    }
    shortlex(&mut forms);
    forms.extend(lattice_letters(n));
    ProbeSet::build(n, ProbeKind::K, forms)
}

/// Partitions of `total` into parts of size at most `max`, largest part
/// first.
fn partitions(total: usize, max: usize) -> Vec<Vec<usize>> {
    if total == 0 {
        return alloc::vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in (1..=max.min(total)).rev() {
        for mut rest in partitions(total - first, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// One compact echelon representative per partition of `n+1` (the empty
/// word for the identity class), then `g_1..g_n`, then `g_1^-1..g_n^-1`.
pub fn probe_set_script_k(n: usize) -> Result<ProbeSet> {
    check_rank(n)?;
    let mut reps: Vec<Word> = partitions(n + 1, n + 1).iter().map(|p| echelon_for_cycle_type(p, n).to_word()).collect();
    shortlex(&mut reps);
    reps.extend(lattice_letters(n));
    ProbeSet::build(n, ProbeKind::ScriptK, reps)
}

/// Caps on symbolic determinant work.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SymbolicLimits {
    pub max_dim: usize,
    pub max_vars: usize,
}

impl Default for SymbolicLimits {
    fn default() -> Self {
        SymbolicLimits { max_dim: 10, max_vars: 10 }
    }
}

impl SymbolicLimits {
    pub fn check(&self, dim: usize, vars: usize) -> Result<()> {
        if dim > self.max_dim || vars > self.max_vars {
            return Err(Error::FeasibilityExceeded { dim, vars, max_dim: self.max_dim, max_vars: self.max_vars });
        }
        Ok(())
    }
}

/// `det(Σ x_i ρ(w_i) - I)` for a probe set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectralDivisor {
    pub poly: MultiPoly,
    pub dim: usize,
    pub probe_kind: ProbeKind,
    probe_words: Vec<Word>,
}

/// The pencil `Σ x_i ρ(w_i) - I` over a probe set.
pub fn pencil(rho: &MatrixRep, probe: &ProbeSet) -> Result<PolyMatrix> {
    if rho.rank() != probe.rank() {
        return Err(Error::RankMismatch(rho.rank(), probe.rank()));
    }
    let mats = probe.words().iter().map(|w| rho.image(w)).collect::<Result<Vec<Matrix>>>()?;
    if mats.is_empty() {
        return PolyMatrix::from_entries(rho.dim(), 0, {
            let mut e = alloc::vec![MultiPoly::zero(0); rho.dim() * rho.dim()];
            for i in 0..rho.dim() {
                e[i * rho.dim() + i] = MultiPoly::constant(0, -Rational::one());
            }
            e
        });
    }
    PolyMatrix::pencil(&mats)
}

pub fn pencil_divisor(rho: &MatrixRep, probe: &ProbeSet, limits: &SymbolicLimits) -> Result<SpectralDivisor> {
    limits.check(rho.dim(), probe.len())?;
    let p = pencil(rho, probe)?;
    Ok(SpectralDivisor {
        poly: p.det_symbolic(),
        dim: rho.dim(),
        probe_kind: probe.kind(),
        probe_words: probe.words().to_vec(),
    })
}

/// Equality of divisors on the same probe set. Pencils of different sizes
/// never compare equal.
pub fn divisors_equal(d1: &SpectralDivisor, d2: &SpectralDivisor) -> Result<bool> {
    if d1.probe_kind != d2.probe_kind || d1.probe_words != d2.probe_words {
        return Err(Error::ProbeSetMismatch);
    }
    Ok(d1.dim == d2.dim && d1.poly == d2.poly)
}

/// Calls `f` on every distinct arrangement of the multiset with the given
/// multiplicities, in lexicographic order.
fn for_each_arrangement(counts: &[usize], mut f: impl FnMut(&[usize])) {
    let mut seq: Vec<usize> = counts.iter().enumerate().flat_map(|(i, &c)| core::iter::repeat_n(i, c)).collect();
    loop {
        f(&seq);
        let len = seq.len();
        let Some(i) = (0..len.saturating_sub(1)).rev().find(|&i| seq[i] < seq[i + 1]) else {
            return;
        };
        let j = (i + 1..len).rev().find(|&j| seq[j] > seq[i]).expect("successor exists");
        seq.swap(i, j);
        seq[i + 1..].reverse();
    }
}

/// Number of distinct arrangements of the multiset.
pub fn arrangement_count(counts: &[usize]) -> u128 {
    let mut total = 0usize;
    let mut acc: u128 = 1;
    for &c in counts {
        for k in 1..=c {
            total += 1;
            acc = acc * total as u128 / k as u128;
        }
    }
    acc
}

/// Default bound on `|m|` for [`trace_sum`].
pub const TRACE_SUM_BOUND: usize = 6;

/// `Σ Tr(A_{j_1} .. A_{j_k})` over all distinct products in which `A_i`
/// occurs exactly `m_i` times.
pub fn trace_sum(mats: &[Matrix], m: &[usize], bound: usize) -> Result<Rational> {
    if mats.len() != m.len() {
        return Err(Error::ArityMismatch(m.len(), mats.len()));
    }
    let weight: usize = m.iter().sum();
    if weight > bound {
        return Err(Error::SignatureBound { weight, bound });
    }
    let dim = mats.first().map_or(0, Matrix::rows);
    let mut acc = Rational::zero();
    for_each_arrangement(m, |seq| {
        acc += seq.iter().fold(Matrix::identity(dim), |p, &i| p.mul(&mats[i])).trace();
    });
    Ok(acc)
}

/// Distinct elements of word length at most `radius` in `a_1..a_{n+1}`,
/// each with a shortest word, in breadth-first order. Every element but the
/// identity records its BFS parent and the letter appended to it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordBall {
    pub radius: usize,
    pub words: Vec<Word>,
    parents: Vec<Option<(usize, usize)>>,
}

impl WordBall {
    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// `χ_ρ` on every element, one matrix product per element.
    pub fn characters(&self, rho: &MatrixRep) -> Result<Vec<Rational>> {
        if self.words.first().is_some_and(|w| w.rank() != rho.rank()) {
            return Err(Error::RankMismatch(self.words[0].rank(), rho.rank()));
        }
        let mut images: Vec<Matrix> = Vec::with_capacity(self.words.len());
        for parent in &self.parents {
            let m = match *parent {
                None => Matrix::identity(rho.dim()),
                Some((k, i)) => images[k].mul(rho.letter_image(Letter::A(i))),
            };
            images.push(m);
        }
        Ok(images.iter().map(Matrix::trace).collect())
    }
}

pub fn word_ball(model: &AffineModel, radius: usize) -> WordBall {
    let n = model.rank();
    let mut seen: BTreeMap<AffinePermutation, ()> = BTreeMap::new();
    seen.insert(AffinePermutation::identity(n), ());
    let mut images = alloc::vec![AffinePermutation::identity(n)];
    let mut ball = WordBall { radius, words: alloc::vec![Word::empty(n)], parents: alloc::vec![None] };
    let mut frontier_start = 0;
    for _ in 0..radius {
        let frontier_end = ball.words.len();
        for k in frontier_start..frontier_end {
            for i in 1..=n + 1 {
                let image = images[k].compose(model.letter_image(Letter::A(i)));
                if seen.insert(image.clone(), ()).is_none() {
                    let w = ball.words[k].concat(&Word::from_a(n, &[i]));
                    ball.words.push(w);
                    ball.parents.push(Some((k, i)));
                    images.push(image);
                }
            }
        }
        frontier_start = frontier_end;
    }
    ball
}

/// First element of the ball on which the two characters differ.
pub fn character_difference(rho1: &MatrixRep, rho2: &MatrixRep, ball: &WordBall) -> Result<Option<Word>> {
    let c1 = ball.characters(rho1)?;
    let c2 = ball.characters(rho2)?;
    Ok(c1.iter().zip(&c2).position(|(a, b)| a != b).map(|k| ball.words[k].clone()))
}

/// How divisors are compared.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Symbolic,
    Pit,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Symbolic => "symbolic",
            Method::Pit => "pit",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyOptions {
    pub method: Method,
    pub limits: SymbolicLimits,
    pub pit_trials: u32,
    pub prime: u64,
    /// With the symbolic method, also run the randomized test and flag any
    /// disagreement.
    pub cross_check: bool,
    /// Characters are compared on every element of word length up to this.
    pub char_budget: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            method: Method::Symbolic,
            limits: SymbolicLimits::default(),
            pit_trials: 4,
            prime: crate::poly::DEFAULT_PRIME,
            cross_check: false,
            char_budget: 8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    /// Divisors agree while characters differ: impossible unless the
    /// implementation is wrong.
    pub critical: bool,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub probe_kind: ProbeKind,
    pub probe_size: usize,
    pub dims: (usize, usize),
    pub method: Method,
    pub divisor_equal: bool,
    pub pit: Option<PitVerdict>,
    pub char_budget: usize,
    pub ball_size: usize,
    pub char_equal: bool,
    pub char_witness: Option<Word>,
    pub violations: Vec<Violation>,
}

impl Report {
    /// Equal divisors were not observed together with unequal characters.
    pub fn consistent(&self) -> bool {
        !(self.divisor_equal && !self.char_equal)
    }

    pub fn has_critical(&self) -> bool {
        self.violations.iter().any(|v| v.critical)
    }
}

/// Compares divisors on `probe` and characters on the word ball, and flags
/// equal divisors with unequal characters.
pub fn verify_character_determination<R: Rng + ?Sized>(
    rho1: &MatrixRep,
    rho2: &MatrixRep,
    probe: &ProbeSet,
    opts: &VerifyOptions,
    rng: &mut R,
) -> Result<Report> {
    let model = AffineModel::new(rho1.rank())?;
    verify_on_ball(rho1, rho2, probe, opts, &word_ball(&model, opts.char_budget), rng)
}

/// As [`verify_character_determination`], with characters compared on a
/// precomputed ball, which must have radius `opts.char_budget`.
pub fn verify_on_ball<R: Rng + ?Sized>(
    rho1: &MatrixRep,
    rho2: &MatrixRep,
    probe: &ProbeSet,
    opts: &VerifyOptions,
    ball: &WordBall,
    rng: &mut R,
) -> Result<Report> {
    if rho1.rank() != rho2.rank() {
        return Err(Error::RankMismatch(rho1.rank(), rho2.rank()));
    }
    if ball.radius != opts.char_budget {
        return Err(Error::DimensionMismatch(ball.radius, opts.char_budget));
    }
    let mut violations = Vec::new();
    let same_dim = rho1.dim() == rho2.dim();

    let mut pit = None;
    let divisor_equal = match opts.method {
        Method::Symbolic => {
            let d1 = pencil_divisor(rho1, probe, &opts.limits)?;
            let d2 = pencil_divisor(rho2, probe, &opts.limits)?;
            let eq = divisors_equal(&d1, &d2)?;
            if opts.cross_check && same_dim {
                let v = pit_equal(&pencil(rho1, probe)?, &pencil(rho2, probe)?, opts.pit_trials, opts.prime, rng)?;
                if v.equal != eq {
                    violations.push(Violation {
                        critical: true,
                        message: alloc::format!("randomized verdict {} disagrees with symbolic verdict {eq}", v.equal),
                    });
                }
                pit = Some(v);
            }
            eq
        }
        Method::Pit if same_dim => {
            let v = pit_equal(&pencil(rho1, probe)?, &pencil(rho2, probe)?, opts.pit_trials, opts.prime, rng)?;
            let eq = v.equal;
            pit = Some(v);
            eq
        }
        Method::Pit => false,
    };

    let char_witness = character_difference(rho1, rho2, ball)?;
    let char_equal = char_witness.is_none();
    if divisor_equal {
        if let Some(w) = &char_witness {
            violations.push(Violation {
                critical: true,
                message: alloc::format!(
                    "divisors agree on {} but characters differ at `{w}`: {} vs {}",
                    probe.kind(),
                    rho1.character(w)?,
                    rho2.character(w)?
                ),
            });
        }
    }
    Ok(Report {
        probe_kind: probe.kind(),
        probe_size: probe.len(),
        dims: (rho1.dim(), rho2.dim()),
        method: opts.method,
        divisor_equal,
        pit,
        char_budget: opts.char_budget,
        ball_size: ball.len(),
        char_equal,
        char_witness,
        violations,
    })
}

/// A sub-alphabet of `K` in which an Ã-echelon form is written, with the
/// multiplicity of each letter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct K1Alphabet {
    pub letters: Vec<Word>,
    pub multiplicities: Vec<usize>,
}

impl K1Alphabet {
    /// Cuts `Δ_1 .. Δ_k g^ℓ` into elements of `K`: each block of length at
    /// least 3, `a_p .. a_h`, closes the running element with `a_p a_{p+1}`,
    /// contributes the single letters `a_{p+2} .. a_{h-1}`, and starts the
    /// next element with `a_h`. Each nonzero `ℓ_j` contributes
    /// `g_j^{sign ℓ_j}` with multiplicity `|ℓ_j|`.
    pub fn from_form(form: &BlockEchelonForm, l: &LatticeElement) -> Self {
        let n = form.rank();
        let mut letters: Vec<Vec<Letter>> = Vec::new();
        let mut current: Vec<Letter> = Vec::new();
        for b in form.blocks() {
            if b.len() <= 2 {
                current.extend(b.letters());
            } else {
                current.extend([Letter::A(b.start), Letter::A(b.start + 1)]);
                letters.push(core::mem::take(&mut current));
                letters.extend((b.start + 2..b.end).map(|i| alloc::vec![Letter::A(i)]));
                current.push(Letter::A(b.end));
            }
        }
        if !current.is_empty() {
            letters.push(current);
        }
        let mut multiplicities = alloc::vec![1; letters.len()];
        for j in 1..=n {
            let e = l.get(j);
            if e != 0 {
                letters.push(alloc::vec![Letter::g_signed(j, e.signum())]);
                multiplicities.push(e.unsigned_abs() as usize);
            }
        }
        K1Alphabet {
            letters: letters.into_iter().map(|ls| Word::new(n, ls).expect("valid letters")).collect(),
            multiplicities,
        }
    }

    pub fn weight(&self) -> usize {
        self.multiplicities.iter().sum()
    }

    /// The word spelled by the given arrangement of alphabet positions.
    pub fn spell(&self, arrangement: &[usize]) -> Word {
        let n = self.letters.first().map_or(2, Word::rank);
        arrangement.iter().fold(Word::empty(n), |acc, &i| acc.concat(&self.letters[i]))
    }

    /// The arrangement in alphabet order, which spells the echelon form.
    pub fn canonical(&self) -> Vec<usize> {
        self.multiplicities.iter().enumerate().flat_map(|(i, &c)| core::iter::repeat_n(i, c)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignatureReport {
    pub arrangements_checked: usize,
    pub exhaustive: bool,
    pub violations: Vec<String>,
}

/// Checks that every arrangement of the multiset has the characters of the
/// canonical arrangement under each representation. All arrangements are
/// visited when there are at most `max_arrangements`; otherwise that many
/// random shuffles are drawn.
pub fn signature_conjugacy_check<R: Rng + ?Sized>(
    alphabet: &K1Alphabet,
    reps: &[(String, MatrixRep)],
    max_arrangements: usize,
    rng: &mut R,
) -> Result<SignatureReport> {
    let reference_word = alphabet.spell(&alphabet.canonical());
    let reference = reps.iter().map(|(_, r)| r.character(&reference_word)).collect::<Result<Vec<_>>>()?;
    let mut violations = Vec::new();
    let mut checked = 0;
    let mut check = |seq: &[usize]| -> Result<()> {
        let w = alphabet.spell(seq);
        for ((name, r), expected) in reps.iter().zip(&reference) {
            let got = r.character(&w)?;
            if &got != expected {
                violations.push(alloc::format!("{name}: χ(`{w}`) = {got} but χ(`{reference_word}`) = {expected}"));
            }
        }
        checked += 1;
        Ok(())
    };
    let exhaustive = arrangement_count(&alphabet.multiplicities) <= max_arrangements as u128;
    if exhaustive {
        let mut result = Ok(());
        for_each_arrangement(&alphabet.multiplicities, |seq| {
            if result.is_ok() {
                result = check(seq);
            }
        });
        result?;
    } else {
        let mut seq = alphabet.canonical();
        for _ in 0..max_arrangements {
            seq.shuffle(rng);
            check(&seq)?;
        }
    }
    Ok(SignatureReport { arrangements_checked: checked, exhaustive, violations })
}

/// Cycle type of a word's image in S_{n+1}.
pub fn cycle_type(model: &AffineModel, w: &Word) -> Vec<usize> {
    quotient_to_finite(&model.eval(w)).cycle_type()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::int;
    use crate::reps::{perm_quotient, PermKind};
    use alloc::string::ToString;
    use alloc::vec;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn probe_set_k_small() {
        let k2 = probe_set_k(2).unwrap();
        assert_eq!(k2.len(), 7);
        assert_eq!(k2.to_string(), "a1, a2, a1 a2, g1, g2, g1^-1, g2^-1");
        let k3 = probe_set_k(3).unwrap();
        assert_eq!(k3.len(), 12);
        assert_eq!(k3.to_string(), "a1, a2, a3, a1 a2, a1 a3, a2 a3, g1, g2, g3, g1^-1, g2^-1, g3^-1");
    }

    #[test]
    fn probe_set_script_k_small() {
        let s2 = probe_set_script_k(2).unwrap();
        assert_eq!(s2.to_string(), "1, a1, a1 a2, g1, g2, g1^-1, g2^-1");
        let s3 = probe_set_script_k(3).unwrap();
        assert_eq!(s3.len(), 5 + 6);
        let model = AffineModel::new(3).unwrap();
        let mut types: Vec<Vec<usize>> = s3.words()[..5].iter().map(|w| cycle_type(&model, w)).collect();
        types.sort();
        let mut expected = partitions(4, 4);
        expected.sort();
        assert_eq!(types, expected);
    }

    #[test]
    fn duplicate_probes_rejected() {
        let w = Word::from_a(2, &[1]);
        let same = Word::from_a(2, &[1, 2, 2]);
        assert!(matches!(ProbeSet::custom(2, vec![w, same]), Err(Error::DuplicateProbe(_))));
    }

    #[test]
    fn one_dimensional_divisors() {
        let k = ProbeSet::custom(2, vec![Word::from_a(2, &[1]), Word::from_a(2, &[2])]).unwrap();
        let lim = SymbolicLimits::default();
        let triv = pencil_divisor(&perm_quotient(2, PermKind::Trivial).unwrap(), &k, &lim).unwrap();
        assert_eq!(triv.poly.to_string(), "x1 + x2 - 1");
        let sign = pencil_divisor(&perm_quotient(2, PermKind::Sign).unwrap(), &k, &lim).unwrap();
        assert_eq!(sign.poly.to_string(), "-x1 - x2 - 1");
        assert!(!divisors_equal(&triv, &sign).unwrap());
        let std = pencil_divisor(&perm_quotient(2, PermKind::Standard).unwrap(), &k, &lim).unwrap();
        assert_eq!(std.poly.total_degree(), Some(2));
        assert_eq!(std.poly.constant_term(), int(1));
        let other = ProbeSet::custom(2, vec![Word::from_a(2, &[1])]).unwrap();
        let d = pencil_divisor(&perm_quotient(2, PermKind::Trivial).unwrap(), &other, &lim).unwrap();
        assert_eq!(divisors_equal(&triv, &d), Err(Error::ProbeSetMismatch));
    }

    #[test]
    fn feasibility_limits() {
        let k3 = probe_set_k(3).unwrap();
        let r = perm_quotient(3, PermKind::Trivial).unwrap();
        assert!(matches!(
            pencil_divisor(&r, &k3, &SymbolicLimits::default()),
            Err(Error::FeasibilityExceeded { vars: 12, .. })
        ));
        assert!(pencil_divisor(&r, &k3, &SymbolicLimits { max_dim: 10, max_vars: 12 }).is_ok());
    }

    #[test]
    fn trace_sum_examples() {
        let a = Matrix::from_i64(2, 2, &[1, 2, 3, 4]);
        let b = Matrix::from_i64(2, 2, &[0, 1, 1, 1]);
        let mats = [a.clone(), b.clone()];
        assert_eq!(trace_sum(&mats, &[1, 0], 6).unwrap(), a.trace());
        assert_eq!(trace_sum(&mats, &[2, 1], 6).unwrap(), int(3) * a.mul(&a).mul(&b).trace());
        assert_eq!(trace_sum(&mats, &[4, 3], 6), Err(Error::SignatureBound { weight: 7, bound: 6 }));
        assert_eq!(arrangement_count(&[2, 1, 1]), 12);
    }

    #[test]
    fn word_ball_sizes() {
        let model = AffineModel::new(2).unwrap();
        // spherical growth of the affine Weyl group of type A_2: 1, 3, 6, 9, ...
        let sizes: Vec<usize> = (0..=3).map(|r| word_ball(&model, r).len()).collect();
        let ball = word_ball(&model, 3);
        let tits = crate::reps::tits(2).unwrap();
        let direct: Vec<Rational> = ball.words.iter().map(|w| tits.character(w).unwrap()).collect();
        assert_eq!(ball.characters(&tits).unwrap(), direct);
        assert_eq!(sizes, [1, 4, 10, 19]);
    }

    #[test]
    fn k1_alphabet_cuts_long_blocks() {
        let form = BlockEchelonForm::new(6, vec![Block { start: 1, end: 1 }, Block { start: 3, end: 6 }]).unwrap();
        let l = LatticeElement(vec![-1, 0, 2, 0, 0, 0]);
        let k1 = K1Alphabet::from_form(&form, &l);
        let shown: Vec<String> = k1.letters.iter().map(|w| w.to_string()).collect();
        assert_eq!(shown, ["a1 a3 a4", "a5", "a6", "g1^-1", "g3"]);
        assert_eq!(k1.multiplicities, [1, 1, 1, 1, 2]);
        assert_eq!(k1.spell(&k1.canonical()), form.to_word().concat(&l.to_word()));
        let k = probe_set_k(6).unwrap();
        assert!(k1.letters.iter().all(|w| k.words().contains(w)));
    }

    #[test]
    fn signature_check_small() {
        let reps = crate::reps::battery(2).unwrap();
        let k1 = K1Alphabet {
            letters: vec![Word::from_a(2, &[1, 2]), Word::new(2, vec![Letter::g(1)]).unwrap()],
            multiplicities: vec![1, 2],
        };
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let rep = signature_conjugacy_check(&k1, &reps, 100, &mut rng).unwrap();
        assert_eq!(rep.arrangements_checked, 3);
        assert!(rep.exhaustive && rep.violations.is_empty());
    }
}
