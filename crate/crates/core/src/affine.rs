//! Window-notation model of Ã_n as the affine symmetric group.
//!
//! An affine permutation is a bijection `f: Z -> Z` with
//! `f(i + n + 1) = f(i) + n + 1`, stored as its window `[f(1), .., f(n+1)]`.
//! Products compose right to left, so the word `x_1 x_2 .. x_k` evaluates to
//! `x_1 ∘ x_2 ∘ .. ∘ x_k`, matching the order of matrix products in
//! representations.

use alloc::vec::Vec;
use core::fmt;

use crate::lattice;
use crate::words::{Letter, Word};
use crate::{check_rank, Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AffinePermutation {
    window: Vec<i64>,
}

impl AffinePermutation {
    pub fn identity(n: usize) -> Self {
        AffinePermutation { window: (1..=n as i64 + 1).collect() }
    }

    /// Validates distinct residues and the window-sum normalization.
    pub fn from_window(window: Vec<i64>) -> Result<Self> {
        let m = window.len() as i64;
        if m < 3 {
            return Err(Error::InvalidWindow(alloc::format!("window length {m} < 3")));
        }
        let mut seen = alloc::vec![false; m as usize];
        for &v in &window {
            let r = (v - 1).rem_euclid(m) as usize;
            if seen[r] {
                return Err(Error::InvalidWindow(alloc::format!("repeated residue of {v}")));
            }
            seen[r] = true;
        }
        if window.iter().sum::<i64>() != m * (m + 1) / 2 {
            return Err(Error::InvalidWindow("window sum is not (n+1)(n+2)/2".into()));
        }
        Ok(AffinePermutation { window })
    }

    pub fn rank(&self) -> usize {
        self.window.len() - 1
    }

    pub fn window(&self) -> &[i64] {
        &self.window
    }

    fn period(&self) -> i64 {
        self.window.len() as i64
    }

    /// `f(i)` for any integer `i`.
    pub fn apply(&self, i: i64) -> i64 {
        let m = self.period();
        let r = (i - 1).rem_euclid(m);
        let q = (i - 1).div_euclid(m);
        self.window[r as usize] + q * m
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.window.len(), other.window.len(), "rank mismatch in compose");
        let p = AffinePermutation { window: other.window.iter().map(|&v| self.apply(v)).collect() };
        debug_assert!(p.sum_invariant_holds());
        p
    }

    pub fn inverse(&self) -> Self {
        let m = self.period();
        let mut window = alloc::vec![0; self.window.len()];
        for (k, &v) in self.window.iter().enumerate() {
            // f(k+1) = v  =>  f^-1(v) = k+1, and v = r + q m with r in 1..=m
            let r = (v - 1).rem_euclid(m);
            let q = (v - 1).div_euclid(m);
            window[r as usize] = k as i64 + 1 - q * m;
        }
        AffinePermutation { window }
    }

    pub fn is_identity(&self) -> bool {
        self.window.iter().enumerate().all(|(k, &v)| v == k as i64 + 1)
    }

    fn sum_invariant_holds(&self) -> bool {
        let m = self.period();
        self.window.iter().sum::<i64>() == m * (m + 1) / 2
    }

    /// Whether the image in S_{n+1} is trivial, i.e. the element lies in the
    /// translation subgroup.
    pub fn is_translation(&self) -> bool {
        quotient_to_finite(self).is_identity()
    }
}

impl fmt::Display for AffinePermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.window)
    }
}

/// A permutation of `{1, .., n+1}` in one-line notation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FinitePermutation {
    images: Vec<usize>,
}

impl FinitePermutation {
    pub fn identity(size: usize) -> Self {
        FinitePermutation { images: (1..=size).collect() }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let mut seen = alloc::vec![false; images.len()];
        for &v in &images {
            if v == 0 || v > images.len() || seen[v - 1] {
                return Err(Error::InvalidWindow(alloc::format!("{images:?} is not a bijection")));
            }
            seen[v - 1] = true;
        }
        Ok(FinitePermutation { images })
    }

    /// The transposition exchanging `i` and `j`.
    pub fn transposition(size: usize, i: usize, j: usize) -> Self {
        let mut p = Self::identity(size);
        p.images.swap(i - 1, j - 1);
        p
    }

    pub fn size(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i - 1]
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        FinitePermutation { images: other.images.iter().map(|&v| self.apply(v)).collect() }
    }

    pub fn inverse(&self) -> Self {
        let mut images = alloc::vec![0; self.images.len()];
        for (k, &v) in self.images.iter().enumerate() {
            images[v - 1] = k + 1;
        }
        FinitePermutation { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(k, &v)| v == k + 1)
    }

    /// Disjoint cycles, each starting at its smallest element, ordered by
    /// that element. Fixed points are included as 1-cycles.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = alloc::vec![false; self.images.len()];
        let mut out = Vec::new();
        for start in 1..=self.images.len() {
            if seen[start - 1] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x - 1] {
                seen[x - 1] = true;
                cycle.push(x);
                x = self.apply(x);
            }
            out.push(cycle);
        }
        out
    }

    /// Cycle lengths in non-increasing order (a partition of `n+1`).
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        t.sort_unstable_by(|a, b| b.cmp(a));
        t
    }

    /// The affine permutation with this window (the finite lift).
    pub fn lift(&self) -> AffinePermutation {
        AffinePermutation { window: self.images.iter().map(|&v| v as i64).collect() }
    }
}

/// A vector of `n+1` integers summing to zero.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TranslationVector(pub Vec<i64>);

impl TranslationVector {
    pub fn zero(n: usize) -> Self {
        TranslationVector(alloc::vec![0; n + 1])
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &Self) -> Self {
        TranslationVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// The permutation action `(σ·v)_i = v_{σ^-1(i)}`.
    pub fn permute(&self, sigma: &FinitePermutation) -> Self {
        let inv = sigma.inverse();
        TranslationVector((1..=self.0.len()).map(|i| self.0[inv.apply(i) - 1]).collect())
    }

    /// The pure translation `i ↦ i + (n+1) v_i`.
    pub fn to_affine(&self) -> AffinePermutation {
        let m = self.0.len() as i64;
        AffinePermutation { window: self.0.iter().enumerate().map(|(k, &c)| k as i64 + 1 + m * c).collect() }
    }
}

/// Image of the Coxeter generator `a_i`: for `i <= n` the periodic swap of
/// `i` and `i+1`, for `i = n+1` the periodic swap of `n+1` and `n+2`.
pub fn generator_image(i: usize, n: usize) -> AffinePermutation {
    assert!((1..=n + 1).contains(&i), "generator index {i} out of range for rank {n}");
    let mut window: Vec<i64> = (1..=n as i64 + 1).collect();
    if i <= n {
        window.swap(i - 1, i);
    } else {
        window[n] = n as i64 + 2;
        window[0] = 0;
    }
    AffinePermutation { window }
}

/// Reduces window values modulo `n+1`: the quotient map onto S_{n+1}.
pub fn quotient_to_finite(p: &AffinePermutation) -> FinitePermutation {
    let m = p.period();
    FinitePermutation { images: p.window.iter().map(|&v| ((v - 1).rem_euclid(m) + 1) as usize).collect() }
}

/// Writes `p = t ∘ σ̃` with `σ̃` the finite lift of the quotient image and
/// `t` a pure translation; returns the vector of `t`.
pub fn translation_vector(p: &AffinePermutation) -> TranslationVector {
    let sigma_inv = quotient_to_finite(p).inverse();
    let m = p.period();
    TranslationVector(
        (1..=p.window.len())
            .map(|i| {
                let d = p.apply(sigma_inv.apply(i) as i64) - i as i64;
                debug_assert_eq!(d.rem_euclid(m), 0);
                d / m
            })
            .collect(),
    )
}

/// Evaluates words of a fixed rank. Images of the lattice letters are
/// obtained once by expanding `g_j = p_j^-1 p_{j+1}` through the defining
/// words of `p_i`.
#[derive(Debug, Clone)]
pub struct AffineModel {
    rank: usize,
    generators: Vec<AffinePermutation>,
    lattice: Vec<(AffinePermutation, AffinePermutation)>,
}

impl AffineModel {
    pub fn new(n: usize) -> Result<Self> {
        check_rank(n)?;
        let generators: Vec<_> = (1..=n + 1).map(|i| generator_image(i, n)).collect();
        let mut model = AffineModel { rank: n, generators, lattice: Vec::new() };
        model.lattice = (1..=n)
            .map(|j| {
                let g = model.eval(&lattice::g_defining_word(j, n));
                let inv = g.inverse();
                (g, inv)
            })
            .collect();
        Ok(model)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn letter_image(&self, l: Letter) -> &AffinePermutation {
        match l {
            Letter::A(i) => &self.generators[i - 1],
            Letter::G { index, inverse: false } => &self.lattice[index - 1].0,
            Letter::G { index, inverse: true } => &self.lattice[index - 1].1,
        }
    }

    pub fn eval_letters(&self, letters: &[Letter]) -> AffinePermutation {
        letters.iter().fold(AffinePermutation::identity(self.rank), |acc, &l| acc.compose(self.letter_image(l)))
    }

    /// Product of the letter images in word order.
    pub fn eval(&self, w: &Word) -> AffinePermutation {
        assert_eq!(w.rank(), self.rank, "rank mismatch in eval");
        self.eval_letters(w.letters())
    }
}

/// One-shot evaluation; builds a model for the word's rank.
pub fn eval_word(w: &Word) -> AffinePermutation {
    AffineModel::new(w.rank()).expect("word rank is valid").eval(w)
}

pub fn equal(p: &AffinePermutation, q: &AffinePermutation) -> bool {
    p == q
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::parse_word;
    use alloc::vec;

    fn w(text: &str, n: usize) -> Word {
        parse_word(text, n).unwrap()
    }

    #[test]
    fn generator_windows() {
        assert_eq!(generator_image(1, 2).window(), &[2, 1, 3]);
        assert_eq!(generator_image(3, 2).window(), &[0, 2, 4]);
        for n in 2..=6 {
            for i in 1..=n + 1 {
                let g = generator_image(i, n);
                assert!(g.compose(&g).is_identity());
                AffinePermutation::from_window(g.window().to_vec()).unwrap();
            }
        }
    }

    #[test]
    fn coxeter_relations_hold_exhaustively() {
        for n in 2..=5 {
            for i in 1..=n + 1 {
                for j in 1..=n + 1 {
                    let s = generator_image(i, n).compose(&generator_image(j, n));
                    let order = if i == j {
                        1
                    } else if crate::words::cyclically_adjacent(i, j, n) {
                        3
                    } else {
                        2
                    };
                    let mut p = AffinePermutation::identity(n);
                    for k in 1..=order {
                        p = p.compose(&s);
                        assert_eq!(p.is_identity(), k == order, "n={n} i={i} j={j} k={k}");
                    }
                }
            }
        }
    }

    #[test]
    fn eval_examples() {
        let m = AffineModel::new(2).unwrap();
        assert!(m.eval(&Word::empty(2)).is_identity());
        assert!(m.eval(&w("a1 a1", 2)).is_identity());
        let g1 = m.eval(&w("a3 a2 a3 a1", 2));
        assert_eq!(&g1, m.letter_image(Letter::g(1)));
        assert!(quotient_to_finite(&g1).is_identity());
        assert!(!translation_vector(&g1).is_zero());
    }

    #[test]
    fn inverse_and_window_validation() {
        let m = AffineModel::new(3).unwrap();
        let p = m.eval(&w("a4 a2 a3 a1 a4 g2", 3));
        assert!(p.compose(&p.inverse()).is_identity());
        assert!(p.inverse().compose(&p).is_identity());
        assert!(AffinePermutation::from_window(vec![1, 2, 2]).is_err());
        assert!(AffinePermutation::from_window(vec![1, 2, 6]).is_err());
        assert!(AffinePermutation::from_window(vec![0, 2, 4]).is_ok());
    }

    #[test]
    fn quotient_examples() {
        for n in 2..=6 {
            let m = AffineModel::new(n).unwrap();
            assert!(quotient_to_finite(&AffinePermutation::identity(n)).is_identity());
            // s_n .. s_2 s_1 s_2 .. s_n in S_{n+1}
            let mut expected = FinitePermutation::identity(n + 1);
            let seq = (2..=n).rev().chain(core::iter::once(1)).chain(2..=n);
            for i in seq {
                expected = expected.compose(&FinitePermutation::transposition(n + 1, i, i + 1));
            }
            assert_eq!(expected, FinitePermutation::transposition(n + 1, 1, n + 1));
            assert_eq!(quotient_to_finite(m.letter_image(Letter::A(n + 1))), expected);
            for j in 1..=n {
                assert!(quotient_to_finite(m.letter_image(Letter::g(j))).is_identity());
            }
        }
    }

    #[test]
    fn translations_add_and_are_independent() {
        let m = AffineModel::new(2).unwrap();
        let t1 = m.letter_image(Letter::g(1));
        let t2 = m.letter_image(Letter::g(2));
        let v1 = translation_vector(t1);
        let v2 = translation_vector(t2);
        assert_eq!(translation_vector(&t1.compose(t2)), v1.add(&v2));
        assert_eq!(v1.0.iter().sum::<i64>(), 0);
        // independent: the 2x2 minor on the first two coordinates is nonzero
        assert_ne!(v1.0[0] * v2.0[1] - v1.0[1] * v2.0[0], 0);
        assert_eq!(v1.to_affine(), *t1);
    }

    #[test]
    fn finite_permutation_cycles() {
        let p = FinitePermutation::from_images(vec![2, 3, 1, 5, 4, 6]).unwrap();
        assert_eq!(p.cycles(), vec![vec![1, 2, 3], vec![4, 5], vec![6]]);
        assert_eq!(p.cycle_type(), vec![3, 2, 1]);
        assert!(FinitePermutation::from_images(vec![1, 1]).is_err());
    }
}
