//! Normal forms: the A_n echelon form `δ_1 .. δ_n`, its block echelon
//! compaction, and the Ã-echelon form `Δ_1 .. Δ_k g_1^{ℓ_1} .. g_n^{ℓ_n}`.
//!
//! The A_n forms are built directly from the cycle type of the image in
//! S_{n+1}. The Ã-echelon form replays the lattice part of the rewriting
//! argument literally, so every step lands in a [`MoveTrace`] that can be
//! replayed against the affine model.

use alloc::vec::Vec;
use core::fmt;

use crate::affine::{quotient_to_finite, AffineModel, FinitePermutation};
use crate::lattice::{coordinates, rewrite_block_g, BlockSide, LatticeElement};
use crate::words::{AdmissibleMove, Letter, MoveTrace, Rule, Word};
use crate::{check_rank, Error, Result};

/// A run `a_start a_{start+1} .. a_end` of consecutive Coxeter letters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Block {
    pub start: usize,
    pub end: usize,
}

impl Block {
    pub fn len(&self) -> usize {
        self.end + 1 - self.start
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> {
        (self.start..=self.end).map(Letter::A)
    }
}

/// `δ_1 δ_2 .. δ_n` with `δ_i ∈ {1, a_i}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EchelonForm {
    rank: usize,
    flags: Vec<bool>,
}

impl EchelonForm {
    pub fn new(rank: usize, flags: Vec<bool>) -> Result<Self> {
        check_rank(rank)?;
        if flags.len() != rank {
            return Err(Error::DimensionMismatch(flags.len(), rank));
        }
        Ok(EchelonForm { rank, flags })
    }

    /// Reads an echelon form off a word whose indices strictly increase
    /// within `1..=n`; `None` if the word has another shape.
    pub fn from_word(w: &Word) -> Option<Self> {
        let mut flags = alloc::vec![false; w.rank()];
        let mut last = 0;
        for l in w.letters() {
            match *l {
                Letter::A(i) if i > last && i <= w.rank() => {
                    flags[i - 1] = true;
                    last = i;
                }
                _ => return None,
            }
        }
        Some(EchelonForm { rank: w.rank(), flags })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn flags(&self) -> &[bool] {
        &self.flags
    }

    pub fn to_word(&self) -> Word {
        let letters = (1..=self.rank).filter(|&i| self.flags[i - 1]).map(Letter::A).collect();
        Word::from_letters_unchecked(self.rank, letters)
    }

    /// Maximal runs of present letters.
    pub fn blocks(&self) -> Vec<Block> {
        let mut out = Vec::new();
        let mut i = 1;
        while i <= self.rank {
            if self.flags[i - 1] {
                let start = i;
                while i < self.rank && self.flags[i] {
                    i += 1;
                }
                out.push(Block { start, end: i });
            }
            i += 1;
        }
        out
    }

    /// Cycle type of the image in S_{n+1}: a block of length `b` is a
    /// `(b+1)`-cycle.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.blocks().iter().map(|b| b.len() + 1).collect();
        let moved: usize = t.iter().sum();
        t.extend(core::iter::repeat_n(1, self.rank + 1 - moved));
        t.sort_unstable_by(|a, b| b.cmp(a));
        t
    }
}

impl fmt::Display for EchelonForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, &present) in self.flags.iter().enumerate() {
            if k > 0 {
                f.write_str("·")?;
            }
            if present {
                write!(f, "a{}", k + 1)?;
            } else {
                f.write_str("1")?;
            }
        }
        Ok(())
    }
}

/// Blocks over `a_1..a_n` separated by exactly one omitted index.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BlockEchelonForm {
    rank: usize,
    blocks: Vec<Block>,
}

impl BlockEchelonForm {
    pub fn new(rank: usize, blocks: Vec<Block>) -> Result<Self> {
        check_rank(rank)?;
        for (k, b) in blocks.iter().enumerate() {
            if b.start == 0 || b.end < b.start || b.end > rank {
                return Err(Error::InvalidBlock { start: b.start, end: b.end, rank });
            }
            if k > 0 && b.start != blocks[k - 1].end + 2 {
                return Err(Error::InvalidBlock { start: b.start, end: b.end, rank });
            }
        }
        Ok(BlockEchelonForm { rank, blocks })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn to_echelon(&self) -> EchelonForm {
        let mut flags = alloc::vec![false; self.rank];
        for b in &self.blocks {
            for i in b.start..=b.end {
                flags[i - 1] = true;
            }
        }
        EchelonForm { rank: self.rank, flags }
    }

    pub fn to_word(&self) -> Word {
        Word::from_letters_unchecked(self.rank, self.blocks.iter().flat_map(Block::letters).collect())
    }
}

/// `Δ_1 .. Δ_k g_1^{ℓ_1} .. g_n^{ℓ_n}` together with the derivation that
/// produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TildeEchelonForm {
    pub block_part: BlockEchelonForm,
    pub lattice_part: LatticeElement,
    pub trace: MoveTrace,
}

impl TildeEchelonForm {
    pub fn to_word(&self) -> Word {
        self.block_part.to_word().concat(&self.lattice_part.to_word())
    }

    /// Interior block indices carry no exponent, and a length-1 block `a_p`
    /// has `|ℓ_p| <= 1`.
    pub fn check_shape(&self) -> core::result::Result<(), alloc::string::String> {
        for b in self.block_part.blocks() {
            if b.len() == 1 {
                if self.lattice_part.get(b.start).abs() > 1 {
                    return Err(alloc::format!("|ℓ_{}| > 1 after single block a{}", b.start, b.start));
                }
            } else if let Some(i) = (b.start + 1..=b.end).find(|&i| self.lattice_part.get(i) != 0) {
                return Err(alloc::format!("interior index {i} of block a{}..a{} carries an exponent", b.start, b.end));
            }
        }
        Ok(())
    }
}

impl fmt::Display for TildeEchelonForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w = self.to_word();
        if w.is_empty() {
            f.write_str("1")
        } else {
            write!(f, "{w}")
        }
    }
}

/// A reduced word in `a_1..a_n` for the finite lift of `sigma`, found by
/// sorting the window with adjacent transpositions.
pub fn lift_to_word(sigma: &FinitePermutation, n: usize) -> Word {
    let mut window = sigma.images().to_vec();
    let mut swaps = Vec::new();
    let mut sorted = false;
    while !sorted {
        sorted = true;
        for i in 0..window.len() - 1 {
            if window[i] > window[i + 1] {
                window.swap(i, i + 1);
                swaps.push(i + 1);
                sorted = false;
            }
        }
    }
    Word::from_letters_unchecked(n, swaps.into_iter().rev().map(Letter::A).collect())
}

/// Splits `w = x m` with `x` a word in `a_1..a_n` and `m` in the lattice
/// subgroup.
pub fn decompose(model: &AffineModel, w: &Word) -> (Word, LatticeElement) {
    let n = model.rank();
    let p = model.eval(w);
    let sigma = quotient_to_finite(&p);
    let x = lift_to_word(&sigma, n);
    let m = sigma.lift().inverse().compose(&p);
    let l = coordinates(model, &m).expect("x^-1 w is a translation");
    (x, l)
}

/// The compact echelon form of a cycle type: blocks of lengths `λ_t - 1`
/// placed from index 1 with one gap between them.
pub fn echelon_for_cycle_type(cycle_type: &[usize], n: usize) -> EchelonForm {
    let mut lengths: Vec<usize> = cycle_type.iter().filter(|&&c| c > 1).map(|c| c - 1).collect();
    lengths.sort_unstable_by(|a, b| b.cmp(a));
    let mut flags = alloc::vec![false; n];
    let mut at = 1;
    for len in lengths {
        for i in at..at + len {
            flags[i - 1] = true;
        }
        at += len + 1;
    }
    EchelonForm { rank: n, flags }
}

/// An echelon form conjugate to `x` (a word in `a_1..a_n`). Words already
/// of echelon shape are returned unchanged; anything else gets the compact
/// form of its cycle type.
pub fn a_echelon(x: &Word) -> Result<EchelonForm> {
    if !x.is_finite_alphabet() {
        return Err(Error::MoveNotApplicable(alloc::format!("`{x}` is not a word in a_1..a_n")));
    }
    if let Some(e) = EchelonForm::from_word(x) {
        return Ok(e);
    }
    let model = AffineModel::new(x.rank())?;
    let ct = quotient_to_finite(&model.eval(x)).cycle_type();
    Ok(echelon_for_cycle_type(&ct, x.rank()))
}

/// Closes every gap between consecutive blocks down to one omitted index,
/// keeping the first block in place and the block order.
pub fn block_echelon(e: &EchelonForm) -> BlockEchelonForm {
    let mut blocks = Vec::new();
    let mut next: Option<usize> = None;
    for b in e.blocks() {
        let start = next.unwrap_or(b.start);
        let nb = Block { start, end: start + b.len() - 1 };
        next = Some(nb.end + 2);
        blocks.push(nb);
    }
    BlockEchelonForm { rank: e.rank(), blocks }
}

/// A permutation `c` with `c σ c^-1 = τ`; `σ` and `τ` must share a cycle
/// type.
pub fn conjugator(sigma: &FinitePermutation, tau: &FinitePermutation) -> FinitePermutation {
    let mut from = sigma.cycles();
    let mut to = tau.cycles();
    from.sort_by_key(|c| core::cmp::Reverse(c.len()));
    to.sort_by_key(|c| core::cmp::Reverse(c.len()));
    assert_eq!(
        from.iter().map(Vec::len).collect::<Vec<_>>(),
        to.iter().map(Vec::len).collect::<Vec<_>>(),
        "conjugator needs equal cycle types"
    );
    let mut images = alloc::vec![0; sigma.size()];
    for (cf, ct) in from.iter().zip(&to) {
        for (&x, &y) in cf.iter().zip(ct) {
            images[x - 1] = y;
        }
    }
    FinitePermutation::from_images(images).expect("cycle matching is a bijection")
}

/// Applies validated moves to a running trace.
struct Rewriter<'a> {
    model: &'a AffineModel,
    trace: MoveTrace,
}

impl Rewriter<'_> {
    fn letters(&self) -> &[Letter] {
        self.trace.current().letters()
    }

    fn push(&mut self, m: AdmissibleMove) -> Result<()> {
        self.trace.push(m, self.model).map(|_| ())
    }

    /// Swaps the letters at 0-based `idx` and `idx + 1`.
    fn swap(&mut self, idx: usize) -> Result<()> {
        self.push(AdmissibleMove::Commute(idx + 1))
    }

    fn bubble_right(&mut self, mut idx: usize, to: usize) -> Result<()> {
        while idx < to {
            self.swap(idx)?;
            idx += 1;
        }
        Ok(())
    }

    fn relation(&mut self, idx: usize, len: usize, replacement: Vec<Letter>, rule: Rule) -> Result<()> {
        self.push(AdmissibleMove::Relation { position: idx + 1, len, replacement, rule })
    }

    /// Moves the last `count` letters to the front.
    fn rotate_to_front(&mut self, count: usize) -> Result<()> {
        let len = self.letters().len();
        if count == 0 || count == len {
            return Ok(());
        }
        self.push(AdmissibleMove::Circular(len - count))
    }

    /// Slides the lattice letter at `idx` rightwards into its sorted place in
    /// the tail, cancelling against an inverse letter if it meets one.
    fn settle(&mut self, mut idx: usize) -> Result<()> {
        let Letter::G { index, inverse } = self.letters()[idx] else {
            unreachable!("settle is only called on lattice letters");
        };
        loop {
            match self.letters().get(idx + 1).copied() {
                None => return Ok(()),
                Some(Letter::A(_)) => {}
                Some(Letter::G { index: other, inverse: inv }) if other == index => {
                    if inv != inverse {
                        self.relation(idx, 2, Vec::new(), Rule::FreeReduction)?;
                    }
                    return Ok(());
                }
                Some(Letter::G { index: other, .. }) if other > index => return Ok(()),
                Some(_) => {}
            }
            self.swap(idx)?;
            idx += 1;
        }
    }
}

/// Index in the word of the first letter of the `g_j` run, for a word laid
/// out as `blocks ++ g_1^{ℓ_1} .. g_n^{ℓ_n}`.
fn run_start(block_len: usize, l: &LatticeElement, j: usize) -> usize {
    block_len + (1..j).map(|i| l.get(i).unsigned_abs() as usize).sum::<usize>()
}

/// The Ã-echelon form of `w`: decompose, bring the finite part to block
/// echelon form by a conjugation, then absorb lattice exponents block by
/// block from left to right.
pub fn tilde_echelon(model: &AffineModel, w: &Word) -> Result<TildeEchelonForm> {
    let n = model.rank();
    if w.rank() != n {
        return Err(Error::RankMismatch(w.rank(), n));
    }
    let mut rw = Rewriter { model, trace: MoveTrace::new(w.clone()) };

    let (x, mut l) = decompose(model, w);
    let split = x.concat(&l.to_word());
    if &split != w {
        rw.relation(0, w.len(), split.letters().to_vec(), Rule::Decomposition)?;
    }

    let form = block_echelon(&a_echelon(&x)?);
    let head = form.to_word();
    if head != x {
        let sigma = quotient_to_finite(&model.eval(&x));
        let tau = quotient_to_finite(&model.eval(&head));
        let c = conjugator(&sigma, &tau);
        let c_lift = c.lift();
        let m = model.eval(&l.to_word());
        l = coordinates(model, &c_lift.compose(&m).compose(&c_lift.inverse()))?;
        let result = head.concat(&l.to_word());
        rw.push(AdmissibleMove::Conjugate { by: lift_to_word(&c, n), result })?;
    }

    let block_len = head.len();
    let mut offset = 0;
    for &b in form.blocks() {
        if b.len() == 1 {
            absorb_single(&mut rw, &mut l, b.start, offset, block_len)?;
        } else {
            absorb_block(&mut rw, &mut l, b, offset, block_len)?;
        }
        offset += b.len();
    }

    let out = TildeEchelonForm { block_part: form, lattice_part: l, trace: rw.trace };
    debug_assert_eq!(out.trace.current(), &out.to_word());
    Ok(out)
}

/// Case of a single-letter block `a_p` at word index `pos`: while
/// `|ℓ_p| >= 2`, rotate one `g_p` to the front, pass it through `a_p`
/// (turning it into `g_p^-1`) and cancel it against the tail.
fn absorb_single(rw: &mut Rewriter<'_>, l: &mut LatticeElement, p: usize, pos: usize, block_len: usize) -> Result<()> {
    while l.get(p).abs() >= 2 {
        let s = l.get(p).signum();
        let last = run_start(block_len, l, p) + l.get(p).unsigned_abs() as usize - 1;
        let end = rw.letters().len() - 1;
        rw.bubble_right(last, end)?;
        rw.rotate_to_front(1)?;
        rw.bubble_right(0, pos)?;
        rw.relation(pos, 2, alloc::vec![Letter::A(p), Letter::g_signed(p, -s)], Rule::CoxeterLattice)?;
        rw.settle(pos + 1)?;
        l.0[p - 1] -= 2 * s;
    }
    Ok(())
}

/// Case of a block `a_p .. a_h` at word index `pos`: clockwise
/// transformations move the exponent of the highest nonzero interior index
/// `j` down to `j - 1` until only `ℓ_p` survives.
fn absorb_block(rw: &mut Rewriter<'_>, l: &mut LatticeElement, b: Block, pos: usize, block_len: usize) -> Result<()> {
    while let Some(j) = (b.start + 1..=b.end).rev().find(|&j| l.get(j) != 0) {
        let e = l.get(j);
        let s = e.signum();
        let count = e.unsigned_abs() as usize;
        let first = run_start(block_len, l, j);
        // run to the back of the word, last letter first
        let end = rw.letters().len() - 1;
        for k in 0..count {
            rw.bubble_right(first + count - 1 - k, end - k)?;
        }
        rw.rotate_to_front(count)?;
        for k in 0..count {
            rw.bubble_right(count - 1 - k, pos + count - 1 - k)?;
        }
        // g_j^s Δ = Δ g_{j-1}^s, one letter at a time
        let rel = rewrite_block_g(b, j, BlockSide::Left, rw.model.rank())?;
        let mut replacement: Vec<Letter> = b.letters().collect();
        let moved = if s > 0 { rel.rhs.letters()[b.len()] } else { Letter::g_inv(j - 1) };
        replacement.push(moved);
        for k in 0..count {
            rw.relation(pos + count - 1 - k, b.len() + 1, replacement.clone(), Rule::BlockLattice)?;
        }
        for k in 0..count {
            rw.settle(pos + b.len() + count - 1 - k)?;
        }
        l.0[j - 2] += e;
        l.0[j - 1] = 0;
    }
    Ok(())
}
