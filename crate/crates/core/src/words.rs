//! Group words over the Coxeter letters `a_1..a_{n+1}` and the lattice letters
//! `g_1..g_n`, and the admissible move calculus acting on them.
//!
//! Move positions count from 1, as they are rendered in traces: `Cancel(p)`
//! acts on letters `p` and `p + 1`, `Circular(k)` moves the first `k` letters
//! to the back.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::{check_rank, Error, Result};

/// Normalizes an arbitrary integer index into `1..=n+1`.
pub fn cyclic_index(i: i64, n: usize) -> usize {
    let m = n as i64 + 1;
    ((i - 1).rem_euclid(m) + 1) as usize
}

/// A Coxeter generator index in `1..=n+1`, with wrap-around arithmetic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GeneratorIndex {
    value: usize,
    rank: usize,
}

impl GeneratorIndex {
    pub fn new(value: usize, rank: usize) -> Result<Self> {
        check_rank(rank)?;
        if value == 0 || value > rank + 1 {
            return Err(Error::IndexOutOfRange { letter: 'a', index: value, max: rank + 1 });
        }
        Ok(GeneratorIndex { value, rank })
    }

    pub fn value(self) -> usize {
        self.value
    }

    pub fn succ(self) -> Self {
        self.offset(1)
    }

    pub fn pred(self) -> Self {
        self.offset(-1)
    }

    pub fn offset(self, by: i64) -> Self {
        GeneratorIndex { value: cyclic_index(self.value as i64 + by, self.rank), rank: self.rank }
    }
}

/// One letter of a word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    /// Coxeter generator `a_i`, an involution.
    A(usize),
    /// Lattice generator `g_j` (or its inverse).
    G { index: usize, inverse: bool },
}

impl Letter {
    pub fn g(index: usize) -> Letter {
        Letter::G { index, inverse: false }
    }

    pub fn g_inv(index: usize) -> Letter {
        Letter::G { index, inverse: true }
    }

    /// `g_j^sign` for `sign = ±1`.
    pub fn g_signed(index: usize, sign: i64) -> Letter {
        Letter::G { index, inverse: sign < 0 }
    }

    pub fn inverse(self) -> Letter {
        match self {
            Letter::A(i) => Letter::A(i),
            Letter::G { index, inverse } => Letter::G { index, inverse: !inverse },
        }
    }

    pub fn is_coxeter(self) -> bool {
        matches!(self, Letter::A(_))
    }

    pub fn index(self) -> usize {
        match self {
            Letter::A(i) => i,
            Letter::G { index, .. } => index,
        }
    }

    fn check(self, n: usize) -> Result<()> {
        match self {
            Letter::A(i) if i == 0 || i > n + 1 => Err(Error::IndexOutOfRange { letter: 'a', index: i, max: n + 1 }),
            Letter::G { index, .. } if index == 0 || index > n => {
                Err(Error::IndexOutOfRange { letter: 'g', index, max: n })
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Letter::A(i) => write!(f, "a{i}"),
            Letter::G { index, inverse: false } => write!(f, "g{index}"),
            Letter::G { index, inverse: true } => write!(f, "g{index}^-1"),
        }
    }
}

/// Whether Coxeter generators `a_i` and `a_j` of Ã_n are joined in the
/// cyclic diagram.
pub fn cyclically_adjacent(i: usize, j: usize, n: usize) -> bool {
    let d = (i as i64 - j as i64).rem_euclid(n as i64 + 1) as usize;
    d == 1 || d == n
}

/// A word of rank `n`; every letter respects the rank bounds.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    rank: usize,
    letters: Vec<Letter>,
}

impl Word {
    pub fn new(rank: usize, letters: Vec<Letter>) -> Result<Word> {
        check_rank(rank)?;
        for l in &letters {
            l.check(rank)?;
        }
        Ok(Word { rank, letters })
    }

    /// Builds a word of Coxeter letters; panics on out-of-range indices.
    pub fn from_a(rank: usize, indices: &[usize]) -> Word {
        Word::new(rank, indices.iter().map(|&i| Letter::A(i)).collect()).expect("valid a-word")
    }

    pub(crate) fn from_letters_unchecked(rank: usize, letters: Vec<Letter>) -> Word {
        debug_assert!(letters.iter().all(|l| l.check(rank).is_ok()));
        Word { rank, letters }
    }

    pub fn empty(rank: usize) -> Word {
        Word { rank, letters: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        assert_eq!(self.rank, other.rank, "rank mismatch in concat");
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word { rank: self.rank, letters }
    }

    /// The word of the inverse element: reversed, each letter inverted.
    pub fn inverse(&self) -> Word {
        Word { rank: self.rank, letters: self.letters.iter().rev().map(|l| l.inverse()).collect() }
    }

    /// Whether the word uses only `a_1..a_n`.
    pub fn is_finite_alphabet(&self) -> bool {
        self.letters.iter().all(|l| matches!(*l, Letter::A(i) if i <= self.rank))
    }

    /// Cancels adjacent `a_i a_i` and `g_j g_j^-1` pairs until none remain.
    /// Only performed on request; parsing never rewrites.
    pub fn free_reduce(&self) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(self.letters.len());
        for &l in &self.letters {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word { rank: self.rank, letters: out }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, l) in self.letters.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Parses the whitespace-separated token grammar
/// `("a"|"g") digits ("^" signed-integer)?`; the token `1` stands for the
/// identity and contributes no letters.
pub fn parse_word(text: &str, rank: usize) -> Result<Word> {
    check_rank(rank)?;
    let mut letters = Vec::new();
    let mut offset = 0;
    for token in text.split_ascii_whitespace() {
        let position = offset + text[offset..].find(token).expect("token from text");
        offset = position + token.len();
        parse_token(token, position, rank, &mut letters)?;
    }
    Ok(Word { rank, letters })
}

fn parse_token(token: &str, position: usize, rank: usize, out: &mut Vec<Letter>) -> Result<()> {
    if token == "1" {
        return Ok(());
    }
    let syntax = |at: usize, message: String| Error::Syntax { position: position + at, message };
    let mut chars = token.char_indices();
    let kind = match chars.next() {
        Some((_, c @ ('a' | 'g'))) => c,
        Some((_, c)) => return Err(syntax(0, format!("expected `a` or `g`, found `{c}`"))),
        None => unreachable!(),
    };
    let body = &token[1..];
    let (digits, exponent) = match body.find('^') {
        Some(k) => (&body[..k], Some((k + 2, &body[k + 1..]))),
        None => (body, None),
    };
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(syntax(1, format!("expected an index after `{kind}`")));
    }
    let index: usize = digits.parse().map_err(|_| syntax(1, "index too large".to_string()))?;
    let exponent: i64 = match exponent {
        None => 1,
        Some((at, e)) => {
            let valid = !e.is_empty()
                && e.strip_prefix(['-', '+']).unwrap_or(e).bytes().all(|b| b.is_ascii_digit())
                && !e.trim_start_matches(['-', '+']).is_empty();
            if !valid {
                return Err(syntax(at, format!("malformed exponent `{e}`")));
            }
            e.parse().map_err(|_| syntax(at, format!("exponent `{e}` out of range")))?
        }
    };
    match kind {
        'a' => {
            Letter::A(index).check(rank)?;
            if exponent != 1 && exponent != -1 {
                return Err(syntax(0, format!("a-letters take exponent ±1 only, found {exponent}")));
            }
            out.push(Letter::A(index));
        }
        _ => {
            Letter::g(index).check(rank)?;
            if exponent == 0 {
                return Err(syntax(0, "g-letters take a nonzero exponent".to_string()));
            }
            let l = Letter::g_signed(index, exponent);
            out.extend(core::iter::repeat_n(l, exponent.unsigned_abs() as usize));
        }
    }
    Ok(())
}

/// Names of the derived relations the rewriting engine applies as macro moves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    /// `g g^-1 -> 1`.
    FreeReduction,
    /// Exchange of an `a_k` with a `g_j` letter.
    CoxeterLattice,
    /// Moving a `g_j` across a block `a_p..a_k`.
    BlockLattice,
    /// Splitting an element into finite part times lattice part.
    Decomposition,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::FreeReduction => "free-reduction",
            Rule::CoxeterLattice => "coxeter-lattice",
            Rule::BlockLattice => "block-lattice",
            Rule::Decomposition => "decomposition",
        })
    }
}

/// A single step of the move calculus.
///
/// The first four variants are the primitive admissible transformations.
/// `Relation` and `Conjugate` are macro moves built from derived relations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AdmissibleMove {
    Cancel(usize),
    Commute(usize),
    Circular(usize),
    Braid(usize),
    /// Replace `len` letters starting at `position` by `replacement`, which
    /// must represent the same group element.
    Relation {
        position: usize,
        len: usize,
        replacement: Vec<Letter>,
        rule: Rule,
    },
    /// Replace `w` by `result`, where `result = by · w · by^-1` as elements.
    Conjugate {
        by: Word,
        result: Word,
    },
}

impl AdmissibleMove {
    /// Whether the move keeps the group element (as opposed to only its
    /// conjugacy class).
    pub fn preserves_element(&self) -> bool {
        !matches!(self, AdmissibleMove::Circular(_) | AdmissibleMove::Conjugate { .. })
    }
}

impl fmt::Display for AdmissibleMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AdmissibleMove::Cancel(p) => write!(f, "cancel@{p}"),
            AdmissibleMove::Commute(p) => write!(f, "commute@{p}"),
            AdmissibleMove::Circular(k) => write!(f, "circular@{k}"),
            AdmissibleMove::Braid(p) => write!(f, "braid@{p}"),
            AdmissibleMove::Relation { position, len, rule, .. } => {
                write!(f, "{rule}@{position}+{len}")
            }
            AdmissibleMove::Conjugate { by, .. } => write!(f, "conjugate[{by}]"),
        }
    }
}

/// The relation oracle the move calculus consults. The words module itself
/// knows only the Coxeter diagram; everything involving lattice letters is
/// delegated.
pub trait MoveRules {
    /// Whether two adjacent letters may be swapped.
    fn commutes(&self, x: Letter, y: Letter) -> bool;
    /// Whether two letter sequences represent the same group element.
    fn same_element(&self, rank: usize, lhs: &[Letter], rhs: &[Letter]) -> bool;
}

/// Commutation of Coxeter letters per the Ã_n diagram.
pub fn coxeter_letters_commute(i: usize, j: usize, n: usize) -> bool {
    i != j && !cyclically_adjacent(i, j, n)
}

fn not_applicable(msg: String) -> Error {
    Error::MoveNotApplicable(msg)
}

/// Applies `m` to `w`, checking its precondition first.
pub fn apply_move(w: &Word, m: &AdmissibleMove, rules: &impl MoveRules) -> Result<Word> {
    let n = w.rank;
    let len = w.len();
    let pair = |p: usize| -> Result<(Letter, Letter)> {
        if p == 0 || p + 1 > len {
            return Err(not_applicable(format!("position {p} outside word of length {len}")));
        }
        Ok((w.letters[p - 1], w.letters[p]))
    };
    let mut letters = w.letters.clone();
    match m {
        AdmissibleMove::Cancel(p) => {
            let (x, y) = pair(*p)?;
            if x != y || !x.is_coxeter() {
                return Err(not_applicable(format!("cancel@{p} needs equal Coxeter letters, found {x} {y}")));
            }
            letters.drain(p - 1..p + 1);
        }
        AdmissibleMove::Commute(p) => {
            let (x, y) = pair(*p)?;
            if x == y || !rules.commutes(x, y) {
                return Err(not_applicable(format!("commute@{p}: {x} and {y} do not commute")));
            }
            letters.swap(p - 1, *p);
        }
        AdmissibleMove::Circular(k) => {
            if *k == 0 || *k >= len {
                return Err(not_applicable(format!("circular split {k} must lie in 1..{len}")));
            }
            letters.rotate_left(*k);
        }
        AdmissibleMove::Braid(p) => {
            if *p == 0 || p + 2 > len {
                return Err(not_applicable(format!("braid@{p} outside word of length {len}")));
            }
            match (letters[p - 1], letters[*p], letters[p + 1]) {
                (Letter::A(i), Letter::A(j), Letter::A(k)) if i == k && cyclically_adjacent(i, j, n) => {
                    letters[p - 1] = Letter::A(j);
                    letters[*p] = Letter::A(i);
                    letters[p + 1] = Letter::A(j);
                }
                (x, y, z) => {
                    return Err(not_applicable(format!("braid@{p}: {x} {y} {z} is not a_i a_(i±1) a_i")));
                }
            }
        }
        AdmissibleMove::Relation { position, len: span, replacement, .. } => {
            if *position == 0 || position + span > len + 1 {
                return Err(not_applicable(format!("relation span {position}+{span} outside word")));
            }
            for l in replacement {
                l.check(n)?;
            }
            let range = position - 1..position - 1 + span;
            if !rules.same_element(n, &w.letters[range.clone()], replacement) {
                return Err(not_applicable(format!("{m}: replacement is a different element")));
            }
            letters.splice(range, replacement.iter().copied());
        }
        AdmissibleMove::Conjugate { by, result } => {
            if by.rank != n || result.rank != n {
                return Err(Error::RankMismatch(n, by.rank.max(result.rank)));
            }
            let conj = by.concat(w).concat(&by.inverse());
            if !rules.same_element(n, &conj.letters, &result.letters) {
                return Err(not_applicable("conjugate: result differs from by·w·by^-1".to_string()));
            }
            letters = result.letters.clone();
        }
    }
    Ok(Word { rank: n, letters })
}

/// All applicable primitive moves, ordered by kind (cancel, commute,
/// circular, braid) and then by position.
pub fn enumerate_moves(w: &Word, rules: &impl MoveRules) -> Vec<AdmissibleMove> {
    let n = w.rank;
    let ls = &w.letters;
    let mut out = Vec::new();
    for p in 1..ls.len() {
        if ls[p - 1] == ls[p] && ls[p].is_coxeter() {
            out.push(AdmissibleMove::Cancel(p));
        }
    }
    for p in 1..ls.len() {
        if ls[p - 1] != ls[p] && rules.commutes(ls[p - 1], ls[p]) {
            out.push(AdmissibleMove::Commute(p));
        }
    }
    for k in 1..ls.len() {
        out.push(AdmissibleMove::Circular(k));
    }
    for p in 1..ls.len().saturating_sub(1) {
        if let (Letter::A(i), Letter::A(j), Letter::A(k)) = (ls[p - 1], ls[p], ls[p + 1]) {
            if i == k && cyclically_adjacent(i, j, n) {
                out.push(AdmissibleMove::Braid(p));
            }
        }
    }
    out
}

/// A recorded rewriting derivation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MoveTrace {
    pub initial: Word,
    pub steps: Vec<(AdmissibleMove, Word)>,
}

impl MoveTrace {
    pub fn new(initial: Word) -> Self {
        MoveTrace { initial, steps: Vec::new() }
    }

    pub fn current(&self) -> &Word {
        self.steps.last().map(|(_, w)| w).unwrap_or(&self.initial)
    }

    /// Applies `m` to the current word and records the step.
    pub fn push(&mut self, m: AdmissibleMove, rules: &impl MoveRules) -> Result<&Word> {
        let next = apply_move(self.current(), &m, rules)?;
        self.steps.push((m, next));
        Ok(self.current())
    }

    /// Whether every step keeps the group element.
    pub fn preserves_element(&self) -> bool {
        self.steps.iter().all(|(m, _)| m.preserves_element())
    }

    /// Replays every step and checks it reproduces the recorded word.
    pub fn verify(&self, rules: &impl MoveRules) -> Result<()> {
        let mut w = self.initial.clone();
        for (k, (m, recorded)) in self.steps.iter().enumerate() {
            w = apply_move(&w, m, rules)?;
            if &w != recorded {
                return Err(Error::TraceMismatch { step: k + 1 });
            }
        }
        Ok(())
    }
}

impl fmt::Display for MoveTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "   {}", self.initial)?;
        for (m, w) in &self.steps {
            writeln!(f, "-> {w}    [{m}]")?;
        }
        Ok(())
    }
}
