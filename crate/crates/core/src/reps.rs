//! Matrix representations of Ã_n: the Tits reflection representation,
//! lifts of S_{n+1} representations through the quotient, and the
//! constructions (sums, tensors, conjugates) used to build test batteries.

use alloc::boxed::Box;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::affine::FinitePermutation;
use crate::lattice::g_defining_word;
use crate::matrix::{int, Matrix};
use crate::words::{cyclically_adjacent, Letter, Word};
use crate::{check_rank, Error, Rational, Result};

/// A representation given by the images of `a_1..a_{n+1}`, checked against
/// every Coxeter relation of the cyclic diagram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixRep {
    rank: usize,
    dim: usize,
    a_images: Vec<Matrix>,
    /// `(ρ(g_j), ρ(g_j^-1))` for `j = 1..=n+1`.
    g_images: Vec<(Matrix, Matrix)>,
}

impl MatrixRep {
    pub fn new(rank: usize, a_images: Vec<Matrix>) -> Result<Self> {
        check_rank(rank)?;
        if a_images.len() != rank + 1 {
            return Err(Error::InvalidRepresentation(alloc::format!(
                "expected {} generator images, got {}",
                rank + 1,
                a_images.len()
            )));
        }
        let dim = a_images[0].rows();
        for (i, m) in a_images.iter().enumerate() {
            if m.rows() != dim || m.cols() != dim {
                return Err(Error::InvalidRepresentation(alloc::format!("image of a{} is not {dim}x{dim}", i + 1)));
            }
            if !m.mul(m).is_identity() {
                return Err(Error::InvalidRepresentation(alloc::format!("image of a{} does not square to I", i + 1)));
            }
        }
        for i in 1..=rank + 1 {
            for j in i + 1..=rank + 1 {
                let prod = a_images[i - 1].mul(&a_images[j - 1]);
                let order = if cyclically_adjacent(i, j, rank) { 3 } else { 2 };
                if !prod.pow(order).is_identity() {
                    return Err(Error::InvalidRepresentation(alloc::format!("(a{i} a{j})^{order} is not I")));
                }
            }
        }
        let mut rep = MatrixRep { rank, dim, a_images, g_images: Vec::new() };
        rep.g_images = (1..=rank + 1)
            .map(|j| {
                let g = rep.product(g_defining_word(j, rank).letters());
                let inv = g.inverse().expect("products of involutions are invertible");
                (g, inv)
            })
            .collect();
        Ok(rep)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn a_images(&self) -> &[Matrix] {
        &self.a_images
    }

    pub fn letter_image(&self, l: Letter) -> &Matrix {
        match l {
            Letter::A(i) => &self.a_images[i - 1],
            Letter::G { index, inverse: false } => &self.g_images[index - 1].0,
            Letter::G { index, inverse: true } => &self.g_images[index - 1].1,
        }
    }

    fn product(&self, letters: &[Letter]) -> Matrix {
        letters.iter().fold(Matrix::identity(self.dim), |acc, &l| acc.mul(self.letter_image(l)))
    }

    /// `ρ(w)`, using the stored images of lattice letters.
    pub fn image(&self, w: &Word) -> Result<Matrix> {
        self.check_word(w)?;
        Ok(self.product(w.letters()))
    }

    /// `χ_ρ(w) = Tr ρ(w)`.
    pub fn character(&self, w: &Word) -> Result<Rational> {
        Ok(self.image(w)?.trace())
    }

    /// The character computed with every lattice letter spelled out in
    /// `a`-letters first.
    pub fn character_expanded(&self, w: &Word) -> Result<Rational> {
        self.check_word(w)?;
        let mut letters = Vec::new();
        for &l in w.letters() {
            match l {
                Letter::A(_) => letters.push(l),
                Letter::G { index, inverse } => {
                    let word = g_defining_word(index, self.rank);
                    if inverse {
                        letters.extend(word.letters().iter().rev().map(|l| l.inverse()));
                    } else {
                        letters.extend_from_slice(word.letters());
                    }
                }
            }
        }
        Ok(self.product(&letters).trace())
    }

    fn check_word(&self, w: &Word) -> Result<()> {
        if w.rank() != self.rank {
            return Err(Error::RankMismatch(w.rank(), self.rank));
        }
        Ok(())
    }

    pub fn direct_sum(&self, other: &MatrixRep) -> Result<MatrixRep> {
        self.combine(other, Matrix::block_diag)
    }

    pub fn tensor(&self, other: &MatrixRep) -> Result<MatrixRep> {
        self.combine(other, Matrix::kron)
    }

    fn combine(&self, other: &MatrixRep, f: impl Fn(&Matrix, &Matrix) -> Matrix) -> Result<MatrixRep> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch(self.rank, other.rank));
        }
        MatrixRep::new(self.rank, self.a_images.iter().zip(&other.a_images).map(|(a, b)| f(a, b)).collect())
    }

    /// `g ↦ C^-1 ρ(g) C`.
    pub fn conjugate(&self, c: &Matrix) -> Result<MatrixRep> {
        if c.rows() != self.dim || c.cols() != self.dim {
            return Err(Error::DimensionMismatch(c.rows(), self.dim));
        }
        let inv = c.inverse()?;
        MatrixRep::new(self.rank, self.a_images.iter().map(|a| inv.mul(a).mul(c)).collect())
    }
}

/// The geometric representation on `R^{n+1}`: `a_i` fixes `e_j` for
/// non-adjacent `j`, sends `e_j ↦ e_j + e_i` for adjacent `j` and
/// `e_i ↦ -e_i`.
pub fn tits(n: usize) -> Result<MatrixRep> {
    check_rank(n)?;
    let size = n + 1;
    let images = (1..=size)
        .map(|i| {
            let mut m = Matrix::identity(size);
            m[(i - 1, i - 1)] = int(-1);
            for j in (1..=size).filter(|&j| j != i && cyclically_adjacent(i, j, n)) {
                m[(i - 1, j - 1)] = Rational::one();
            }
            m
        })
        .collect();
    MatrixRep::new(n, images)
}

/// Representations of S_{n+1}, lifted to Ã_n through the quotient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PermKind {
    Trivial,
    Sign,
    /// The reflection representation on the sum-zero subspace, in the basis
    /// `e_i - e_{i+1}`.
    Standard,
    Natural,
    /// The regular representation; limited to `n <= 3`.
    Regular,
}

impl PermKind {
    pub const ALL: [PermKind; 5] =
        [PermKind::Trivial, PermKind::Sign, PermKind::Standard, PermKind::Natural, PermKind::Regular];

    pub fn name(self) -> &'static str {
        match self {
            PermKind::Trivial => "trivial",
            PermKind::Sign => "sign",
            PermKind::Standard => "standard",
            PermKind::Natural => "natural",
            PermKind::Regular => "regular",
        }
    }

    fn from_name(s: &str) -> Option<Self> {
        PermKind::ALL.into_iter().find(|k| k.name() == s)
    }
}

fn sign(sigma: &FinitePermutation) -> i64 {
    if (sigma.size() - sigma.cycles().len()).is_multiple_of(2) {
        1
    } else {
        -1
    }
}

fn natural_matrix(sigma: &FinitePermutation) -> Matrix {
    let s = sigma.size();
    let mut m = Matrix::zeros(s, s);
    for k in 1..=s {
        m[(sigma.apply(k) - 1, k - 1)] = Rational::one();
    }
    m
}

/// `σ` on the basis `f_i = e_i - e_{i+1}`, with `e_a - e_b` written as a
/// signed run of consecutive `f`s.
fn standard_matrix(sigma: &FinitePermutation) -> Matrix {
    let n = sigma.size() - 1;
    let mut m = Matrix::zeros(n, n);
    for i in 1..=n {
        let (a, b) = (sigma.apply(i), sigma.apply(i + 1));
        let (lo, hi, s) = if a < b { (a, b, 1) } else { (b, a, -1) };
        for k in lo..hi {
            m[(k - 1, i - 1)] = int(s);
        }
    }
    m
}

fn all_permutations(size: usize) -> Vec<FinitePermutation> {
    let mut current: Vec<usize> = (1..=size).collect();
    let mut out = Vec::new();
    loop {
        out.push(FinitePermutation::from_images(current.clone()).expect("a permutation"));
        let Some(i) = (0..size.saturating_sub(1)).rev().find(|&i| current[i] < current[i + 1]) else {
            return out;
        };
        let j = (i + 1..size).rev().find(|&j| current[j] > current[i]).expect("successor exists");
        current.swap(i, j);
        current[i + 1..].reverse();
    }
}

fn regular_matrix(sigma: &FinitePermutation, elements: &[FinitePermutation]) -> Matrix {
    let d = elements.len();
    let mut m = Matrix::zeros(d, d);
    for (k, tau) in elements.iter().enumerate() {
        let image = sigma.compose(tau);
        let row = elements.binary_search(&image).expect("closed under multiplication");
        m[(row, k)] = Rational::one();
    }
    m
}

/// The image of `σ ∈ S_{n+1}` in the given representation.
pub fn perm_image(kind: PermKind, sigma: &FinitePermutation) -> Matrix {
    match kind {
        PermKind::Trivial => Matrix::identity(1),
        PermKind::Sign => Matrix::from_i64(1, 1, &[sign(sigma)]),
        PermKind::Standard => standard_matrix(sigma),
        PermKind::Natural => natural_matrix(sigma),
        PermKind::Regular => regular_matrix(sigma, &all_permutations(sigma.size())),
    }
}

/// `a_i ↦ (i, i+1)` for `i <= n` and `a_{n+1} ↦ (1, n+1)`.
pub fn perm_quotient(n: usize, kind: PermKind) -> Result<MatrixRep> {
    check_rank(n)?;
    if kind == PermKind::Regular && n > 3 {
        return Err(Error::RepSpec(alloc::format!("perm:regular is limited to n <= 3, got n = {n}")));
    }
    let size = n + 1;
    let images = (1..=size)
        .map(|i| {
            let t = if i <= n {
                FinitePermutation::transposition(size, i, i + 1)
            } else {
                FinitePermutation::transposition(size, 1, size)
            };
            perm_image(kind, &t)
        })
        .collect();
    MatrixRep::new(n, images)
}

/// Random invertible matrix with small rational entries.
pub fn random_invertible<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Matrix {
    loop {
        let rows = (0..dim)
            .map(|_| {
                (0..dim)
                    .map(|_| Rational::new(rng.random_range(-5i64..=5).into(), rng.random_range(1i64..=4).into()))
                    .collect()
            })
            .collect();
        let m = Matrix::from_rows(rows);
        if !m.determinant().is_zero() {
            return m;
        }
    }
}

/// Random integer matrix of determinant 1: a product of a unit lower and a
/// unit upper triangular matrix with small entries.
pub fn random_unimodular<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Matrix {
    let mut lower = Matrix::identity(dim);
    let mut upper = Matrix::identity(dim);
    for i in 0..dim {
        for j in 0..i {
            lower[(i, j)] = int(rng.random_range(-2..=2));
            upper[(j, i)] = int(rng.random_range(-2..=2));
        }
    }
    lower.mul(&upper)
}

/// The fixed battery of test representations, with their spec names.
pub fn battery(n: usize) -> Result<Vec<(String, MatrixRep)>> {
    ["tits", "perm:trivial", "perm:sign", "perm:standard", "sum(perm:trivial,perm:sign,perm:standard)"]
        .into_iter()
        .map(|s| Ok((s.to_string(), RepSpec::parse(s)?.build(n)?)))
        .collect()
}

/// The representation mini-language:
/// `tits | perm:<kind> | sum(spec,..) | tensor(spec,spec) | conj(spec,seed=<int>)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RepSpec {
    Tits,
    Perm(PermKind),
    Sum(Vec<RepSpec>),
    Tensor(Box<RepSpec>, Box<RepSpec>),
    Conj(Box<RepSpec>, u64),
}

impl RepSpec {
    pub fn parse(text: &str) -> Result<RepSpec> {
        let mut p = SpecParser { src: text.as_bytes(), pos: 0 };
        let spec = p.spec()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.error("trailing input"));
        }
        Ok(spec)
    }

    pub fn build(&self, n: usize) -> Result<MatrixRep> {
        match self {
            RepSpec::Tits => tits(n),
            RepSpec::Perm(k) => perm_quotient(n, *k),
            RepSpec::Sum(parts) => {
                let mut it = parts.iter();
                let first = it.next().ok_or_else(|| Error::RepSpec("empty sum".into()))?.build(n)?;
                it.try_fold(first, |acc, s| acc.direct_sum(&s.build(n)?))
            }
            RepSpec::Tensor(a, b) => a.build(n)?.tensor(&b.build(n)?),
            RepSpec::Conj(inner, seed) => {
                let rep = inner.build(n)?;
                let c = random_unimodular(rep.dim(), &mut ChaCha8Rng::seed_from_u64(*seed));
                rep.conjugate(&c)
            }
        }
    }
}

impl fmt::Display for RepSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RepSpec::Tits => f.write_str("tits"),
            RepSpec::Perm(k) => write!(f, "perm:{}", k.name()),
            RepSpec::Sum(parts) => {
                f.write_str("sum(")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{p}")?;
                }
                f.write_str(")")
            }
            RepSpec::Tensor(a, b) => write!(f, "tensor({a},{b})"),
            RepSpec::Conj(a, seed) => write!(f, "conj({a},seed={seed})"),
        }
    }
}

struct SpecParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl SpecParser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::RepSpec(alloc::format!("{msg} at byte {}", self.pos))
    }

    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
    }

    fn ident(&mut self) -> &str {
        self.skip_ws();
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(|c| c.is_ascii_alphanumeric() || *c == b'_') {
            self.pos += 1;
        }
        core::str::from_utf8(&self.src[start..self.pos]).expect("ascii")
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        self.skip_ws();
        if self.src.get(self.pos) == Some(&c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&alloc::format!("expected `{}`", c as char)))
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        let hit = self.src.get(self.pos) == Some(&c);
        if hit {
            self.pos += 1;
        }
        hit
    }

    fn spec(&mut self) -> Result<RepSpec> {
        let start = self.pos;
        let name = self.ident().to_string();
        match name.as_str() {
            "tits" => Ok(RepSpec::Tits),
            "perm" => {
                self.expect(b':')?;
                let kind = self.ident().to_string();
                PermKind::from_name(&kind).map(RepSpec::Perm).ok_or(Error::UnknownRep(alloc::format!("perm:{kind}")))
            }
            "sum" => {
                self.expect(b'(')?;
                let mut parts = alloc::vec![self.spec()?];
                while self.eat(b',') {
                    parts.push(self.spec()?);
                }
                self.expect(b')')?;
                Ok(RepSpec::Sum(parts))
            }
            "tensor" => {
                self.expect(b'(')?;
                let a = self.spec()?;
                self.expect(b',')?;
                let b = self.spec()?;
                self.expect(b')')?;
                Ok(RepSpec::Tensor(Box::new(a), Box::new(b)))
            }
            "conj" => {
                self.expect(b'(')?;
                let a = self.spec()?;
                self.expect(b',')?;
                if self.ident() != "seed" {
                    return Err(self.error("expected `seed=`"));
                }
                self.expect(b'=')?;
                let digits = self.ident();
                let seed = digits.parse().map_err(|_| Error::RepSpec(alloc::format!("bad seed `{digits}`")))?;
                self.expect(b')')?;
                Ok(RepSpec::Conj(Box::new(a), seed))
            }
            "" => {
                self.pos = start;
                Err(self.error("expected a representation"))
            }
            other => Err(Error::UnknownRep(other.to_string())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::parse_word;

    #[test]
    fn tits_examples() {
        let r = tits(2).unwrap();
        assert_eq!(r.a_images()[0], Matrix::from_i64(3, 3, &[-1, 1, 1, 0, 1, 0, 0, 0, 1]));
        assert_eq!(r.character(&Word::from_a(2, &[1])).unwrap(), int(1));
        assert_eq!(r.character(&Word::empty(2)).unwrap(), int(3));
        for n in 2..=5 {
            assert!(tits(n).unwrap().a_images().iter().all(Matrix::is_integral));
        }
    }

    #[test]
    fn quotient_reps_kill_the_lattice() {
        for n in 2..=4 {
            for kind in PermKind::ALL {
                if kind == PermKind::Regular && n > 3 {
                    assert!(perm_quotient(n, kind).is_err());
                    continue;
                }
                let r = perm_quotient(n, kind).unwrap();
                for j in 1..=n {
                    assert!(r.letter_image(Letter::g(j)).is_identity());
                }
            }
            let std = perm_quotient(n, PermKind::Standard).unwrap();
            let nat = perm_quotient(n, PermKind::Natural).unwrap();
            for i in 1..=n + 1 {
                let w = Word::from_a(n, &[i]);
                assert_eq!(std.character(&w).unwrap(), int(n as i64 - 2));
                assert_eq!(nat.character(&w).unwrap() - int(1), std.character(&w).unwrap());
            }
        }
        let sign = perm_quotient(2, PermKind::Sign).unwrap();
        assert_eq!(sign.character(&Word::from_a(2, &[1, 2])).unwrap(), int(1));
        assert_eq!(perm_quotient(3, PermKind::Regular).unwrap().dim(), 24);
    }

    #[test]
    fn invalid_images_are_rejected() {
        let i = Matrix::identity(1);
        let neg = Matrix::from_i64(1, 1, &[-1]);
        assert!(MatrixRep::new(2, alloc::vec![i.clone(), i.clone(), i.clone()]).is_ok());
        assert!(matches!(
            MatrixRep::new(2, alloc::vec![i.clone(), neg, i.clone()]),
            Err(Error::InvalidRepresentation(_))
        ));
        assert!(MatrixRep::new(2, alloc::vec![i.clone(), i]).is_err());
    }

    #[test]
    fn expanded_characters_agree() {
        let r = tits(3).unwrap();
        let w = parse_word("a1 g2 a4 g3^-1 g1", 3).unwrap();
        assert_eq!(r.character(&w).unwrap(), r.character_expanded(&w).unwrap());
    }

    #[test]
    fn spec_round_trip() {
        for s in [
            "tits",
            "perm:standard",
            "sum(perm:trivial,perm:sign,perm:standard)",
            "tensor(tits,perm:sign)",
            "conj(tits,seed=7)",
        ] {
            let spec = RepSpec::parse(s).unwrap();
            assert_eq!(spec.to_string(), s);
        }
        assert_eq!(RepSpec::parse(" sum( tits , perm:sign ) ").unwrap().to_string(), "sum(tits,perm:sign)");
        assert!(matches!(RepSpec::parse("perm:fancy"), Err(Error::UnknownRep(_))));
        assert!(matches!(RepSpec::parse("bogus"), Err(Error::UnknownRep(_))));
        assert!(matches!(RepSpec::parse("sum(tits"), Err(Error::RepSpec(_))));
        let c = RepSpec::parse("conj(tits,seed=3)").unwrap().build(2).unwrap();
        let t = tits(2).unwrap();
        let w = Word::from_a(2, &[1, 3, 2]);
        assert_eq!(c.character(&w).unwrap(), t.character(&w).unwrap());
    }

    #[test]
    fn battery_dimensions() {
        let dims: Vec<usize> = battery(3).unwrap().iter().map(|(_, r)| r.dim()).collect();
        assert_eq!(dims, [4, 1, 1, 3, 5]);
    }
}
