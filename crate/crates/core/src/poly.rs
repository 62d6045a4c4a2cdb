//! Sparse multivariate polynomials with exact rational coefficients,
//! polynomial matrices, symbolic determinants and modular identity tests.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use crate::matrix::Matrix;
use crate::{Error, Rational, Result};

/// An exponent vector, ordered graded-lexicographically: total degree
/// first, then lexicographically with `x_1` most significant.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(arity: usize) -> Self {
        Monomial(alloc::vec![0; arity])
    }

    pub fn var(arity: usize, i: usize) -> Self {
        let mut e = alloc::vec![0; arity];
        e[i] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn div(&self, other: &Monomial) -> Option<Monomial> {
        self.0.iter().zip(&other.0).map(|(a, b)| a.checked_sub(*b)).collect::<Option<_>>().map(Monomial)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial in a fixed number of variables `x_1..x_arity`; no stored
/// coefficient is zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    arity: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl MultiPoly {
    pub fn zero(arity: usize) -> Self {
        MultiPoly { arity, terms: BTreeMap::new() }
    }

    pub fn one(arity: usize) -> Self {
        Self::constant(arity, Rational::one())
    }

    pub fn constant(arity: usize, c: Rational) -> Self {
        let mut p = Self::zero(arity);
        p.add_term(Monomial::one(arity), c);
        p
    }

    /// The variable `x_{i+1}` (0-based `i`).
    pub fn var(arity: usize, i: usize) -> Self {
        assert!(i < arity, "variable index out of range");
        let mut p = Self::zero(arity);
        p.add_term(Monomial::var(arity, i), Rational::one());
        p
    }

    /// Sums the given terms, dropping zeros.
    pub fn from_terms(arity: usize, terms: impl IntoIterator<Item = (Vec<u32>, Rational)>) -> Result<Self> {
        let mut p = Self::zero(arity);
        for (e, c) in terms {
            if e.len() != arity {
                return Err(Error::ArityMismatch(e.len(), arity));
            }
            p.add_term(Monomial(e), c);
        }
        Ok(p)
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            alloc::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            alloc::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in increasing graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coefficient(&Monomial::one(self.arity))
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    fn same_arity(&self, other: &MultiPoly) -> Result<()> {
        if self.arity == other.arity {
            Ok(())
        } else {
            Err(Error::ArityMismatch(self.arity, other.arity))
        }
    }

    pub fn checked_add(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.same_arity(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.same_arity(other)?;
        let mut out = MultiPoly::zero(self.arity);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(self.arity);
        }
        MultiPoly { arity: self.arity, terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect() }
    }

    /// `self / d` when `d` divides `self` exactly; `None` otherwise.
    pub fn div_exact(&self, d: &MultiPoly) -> Option<MultiPoly> {
        if self.arity != d.arity {
            return None;
        }
        let (lm, lc) = d.leading()?;
        let mut rem = self.clone();
        let mut quot = MultiPoly::zero(self.arity);
        while let Some((m, c)) = rem.leading() {
            let qm = m.div(lm)?;
            let qc = c / lc;
            for (dm, dc) in &d.terms {
                rem.add_term(qm.mul(dm), -(&qc * dc));
            }
            quot.add_term(qm, qc);
        }
        Some(quot)
    }

    pub fn eval(&self, point: &[Rational]) -> Result<Rational> {
        if point.len() != self.arity {
            return Err(Error::ArityMismatch(point.len(), self.arity));
        }
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                if e > 0 {
                    t *= num_traits::pow(x.clone(), e as usize);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Evaluation over `Z/pZ`; every coefficient denominator must be a unit.
    pub fn eval_mod(&self, point: &[u64], p: u64) -> Result<u64> {
        if point.len() != self.arity {
            return Err(Error::ArityMismatch(point.len(), self.arity));
        }
        let mut acc = 0;
        for (m, c) in &self.terms {
            let mut t = rational_mod(c, p)?;
            for (&x, &e) in point.iter().zip(&m.0) {
                t = mul_mod(t, pow_mod(x % p, e as u64, p), p);
            }
            acc = add_mod(acc, t, p);
        }
        Ok(acc)
    }

    /// Substitutes `x_{var+1} = value`; the arity is unchanged.
    pub fn specialize(&self, var: usize, value: &Rational) -> MultiPoly {
        let mut out = MultiPoly::zero(self.arity);
        for (m, c) in &self.terms {
            let mut e = m.0.clone();
            let k = core::mem::replace(&mut e[var], 0);
            let factor = if k == 0 { Rational::one() } else { num_traits::pow(value.clone(), k as usize) };
            out.add_term(Monomial(e), c * factor);
        }
        out
    }

    /// Sets every variable outside `keep` to zero and renumbers the kept
    /// ones in the given order.
    pub fn restrict_to(&self, keep: &[usize]) -> MultiPoly {
        let mut out = MultiPoly::zero(keep.len());
        for (m, c) in &self.terms {
            let kept: u32 = keep.iter().map(|&k| m.0[k]).sum();
            if kept == m.degree() {
                out.add_term(Monomial(keep.iter().map(|&k| m.0[k]).collect()), c.clone());
            }
        }
        out
    }
}

impl<'a> Add<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        self.checked_add(rhs).expect("arity mismatch in polynomial add")
    }
}

impl<'a> Sub<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self.checked_sub(rhs).expect("arity mismatch in polynomial sub")
    }
}

impl<'a> Mul<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        self.checked_mul(rhs).expect("arity mismatch in polynomial mul")
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&-Rational::one())
    }
}

impl fmt::Display for MultiPoly {
    /// Leading term first, e.g. `x1*x2 - x1 - x2 + 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            match (k, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let a = c.abs();
            let vars: Vec<_> = m.0.iter().enumerate().filter(|(_, &e)| e > 0).collect();
            if vars.is_empty() || !a.is_one() {
                write!(f, "{a}")?;
                if !vars.is_empty() {
                    f.write_str("*")?;
                }
            }
            for (t, (i, &e)) in vars.iter().enumerate() {
                if t > 0 {
                    f.write_str("*")?;
                }
                write!(f, "x{}", i + 1)?;
                if e > 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        Ok(())
    }
}

/// A square matrix of polynomials of one arity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    dim: usize,
    arity: usize,
    entries: Vec<MultiPoly>,
}

/// Largest dimension for which [`PolyMatrix::det_symbolic`] expands minors
/// rather than eliminating.
pub const EXPANSION_CUTOFF: usize = 8;

impl PolyMatrix {
    pub fn from_entries(dim: usize, arity: usize, entries: Vec<MultiPoly>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch(entries.len(), dim * dim));
        }
        if let Some(e) = entries.iter().find(|e| e.arity() != arity) {
            return Err(Error::ArityMismatch(e.arity(), arity));
        }
        Ok(PolyMatrix { dim, arity, entries })
    }

    pub fn from_matrix(m: &Matrix, arity: usize) -> Self {
        assert!(m.is_square());
        PolyMatrix {
            dim: m.rows(),
            arity,
            entries: m.entries().iter().map(|c| MultiPoly::constant(arity, c.clone())).collect(),
        }
    }

    /// The pencil `x_1 A_1 + .. + x_k A_k - I`.
    pub fn pencil(mats: &[Matrix]) -> Result<Self> {
        let dim = mats.first().map_or(0, Matrix::rows);
        let k = mats.len();
        let mut entries = alloc::vec![MultiPoly::zero(k); dim * dim];
        for (v, a) in mats.iter().enumerate() {
            if a.rows() != dim || a.cols() != dim {
                return Err(Error::DimensionMismatch(a.rows(), dim));
            }
            for (e, c) in entries.iter_mut().zip(a.entries()) {
                e.add_term(Monomial::var(k, v), c.clone());
            }
        }
        for i in 0..dim {
            entries[i * dim + i].add_term(Monomial::one(k), -Rational::one());
        }
        Ok(PolyMatrix { dim, arity: k, entries })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn get(&self, i: usize, j: usize) -> &MultiPoly {
        &self.entries[i * self.dim + j]
    }

    pub fn mul(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        if self.arity != other.arity {
            return Err(Error::ArityMismatch(self.arity, other.arity));
        }
        let n = self.dim;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = MultiPoly::zero(self.arity);
                for k in 0..n {
                    acc = &acc + &(self.get(i, k) * other.get(k, j));
                }
                entries.push(acc);
            }
        }
        Ok(PolyMatrix { dim: n, arity: self.arity, entries })
    }

    pub fn eval(&self, point: &[Rational]) -> Result<Matrix> {
        let vals = self.entries.iter().map(|e| e.eval(point)).collect::<Result<Vec<_>>>()?;
        Ok(Matrix::from_rows(vals.chunks(self.dim.max(1)).take(self.dim).map(<[_]>::to_vec).collect()))
    }

    /// Row-major residues of the evaluated entries.
    pub fn eval_mod(&self, point: &[u64], p: u64) -> Result<Vec<u64>> {
        self.entries.iter().map(|e| e.eval_mod(point, p)).collect()
    }

    /// Sum over rows of the largest entry degree: a bound on the degree of
    /// the determinant.
    pub fn degree_bound(&self) -> u32 {
        (0..self.dim).map(|i| (0..self.dim).filter_map(|j| self.get(i, j).total_degree()).max().unwrap_or(0)).sum()
    }

    /// Exact determinant: minor expansion up to [`EXPANSION_CUTOFF`],
    /// fraction-free elimination beyond.
    pub fn det_symbolic(&self) -> MultiPoly {
        if self.dim <= EXPANSION_CUTOFF {
            self.det_expansion()
        } else {
            self.det_bareiss()
        }
    }

    /// Laplace expansion along successive rows with every minor over a
    /// column subset computed once.
    pub fn det_expansion(&self) -> MultiPoly {
        let n = self.dim;
        if n == 0 {
            return MultiPoly::one(self.arity);
        }
        assert!(n < 32, "minor expansion limited to dimension < 32");
        // minors of rows 0..r over column sets of size r+1
        let mut prev: BTreeMap<u32, MultiPoly> = BTreeMap::new();
        prev.insert(0, MultiPoly::one(self.arity));
        for r in 0..n {
            let mut next: BTreeMap<u32, MultiPoly> = BTreeMap::new();
            for (&mask, minor) in &prev {
                if minor.is_zero() {
                    continue;
                }
                for c in (0..n).filter(|c| mask & (1 << c) == 0) {
                    let entry = self.get(r, c);
                    if entry.is_zero() {
                        continue;
                    }
                    // expanding along the last row: the sign counts chosen
                    // columns to the right of c
                    let above = (mask >> c).count_ones() as usize;
                    let term = entry * minor;
                    let term = if above % 2 == 1 { -&term } else { term };
                    let slot = next.entry(mask | (1 << c)).or_insert_with(|| MultiPoly::zero(self.arity));
                    *slot = &*slot + &term;
                }
            }
            prev = next;
        }
        prev.remove(&((1u32 << n) - 1)).unwrap_or_else(|| MultiPoly::zero(self.arity))
    }

    /// Bareiss fraction-free elimination with exact polynomial division.
    pub fn det_bareiss(&self) -> MultiPoly {
        let n = self.dim;
        let mut m = self.entries.clone();
        let mut prev = MultiPoly::one(self.arity);
        let mut negate = false;
        for k in 0..n {
            let Some(piv) = (k..n).find(|&r| !m[r * n + k].is_zero()) else {
                return MultiPoly::zero(self.arity);
            };
            if piv != k {
                for c in 0..n {
                    m.swap(piv * n + c, k * n + c);
                }
                negate = !negate;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &(&m[k * n + k] * &m[i * n + j]) - &(&m[i * n + k] * &m[k * n + j]);
                    m[i * n + j] = num.div_exact(&prev).expect("Bareiss quotients are exact");
                }
            }
            prev = m[k * n + k].clone();
        }
        let det = if n == 0 { MultiPoly::one(self.arity) } else { m[n * n - 1].clone() };
        if negate {
            -&det
        } else {
            det
        }
    }
}

pub(crate) fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 + b as u128) % p as u128) as u64
}

pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, p);
        }
        b = mul_mod(b, b, p);
        e >>= 1;
    }
    acc
}

/// Inverse modulo a prime.
pub(crate) fn inv_mod(a: u64, p: u64) -> Option<u64> {
    (!a.is_multiple_of(p)).then(|| pow_mod(a, p - 2, p))
}

fn bigint_mod(v: &BigInt, p: u64) -> u64 {
    v.mod_floor(&BigInt::from(p)).to_u64().expect("residue fits in u64")
}

pub fn rational_mod(c: &Rational, p: u64) -> Result<u64> {
    let d = inv_mod(bigint_mod(c.denom(), p), p).ok_or(Error::DenominatorVanishes(p))?;
    Ok(mul_mod(bigint_mod(c.numer(), p), d, p))
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'bases: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Determinant of a row-major `dim x dim` matrix over `Z/pZ`.
pub fn det_mod(mut m: Vec<u64>, dim: usize, p: u64) -> u64 {
    let mut det = 1;
    for k in 0..dim {
        let Some(piv) = (k..dim).find(|&r| m[r * dim + k] != 0) else {
            return 0;
        };
        if piv != k {
            for c in 0..dim {
                m.swap(piv * dim + c, k * dim + c);
            }
            det = (p - det) % p;
        }
        let pv = m[k * dim + k];
        det = mul_mod(det, pv, p);
        let inv = inv_mod(pv, p).expect("nonzero pivot");
        for r in k + 1..dim {
            let f = mul_mod(m[r * dim + k], inv, p);
            if f == 0 {
                continue;
            }
            for c in k..dim {
                let sub = mul_mod(f, m[k * dim + c], p);
                m[r * dim + c] = (m[r * dim + c] + p - sub) % p;
            }
        }
    }
    det
}

/// The Mersenne prime `2^61 - 1`.
pub const DEFAULT_PRIME: u64 = (1 << 61) - 1;

/// Outcome of a randomized determinant comparison.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PitVerdict {
    pub equal: bool,
    /// A point where the determinants differ; conclusive on its own.
    pub witness: Option<Vec<u64>>,
    pub trials: u32,
    pub prime: u64,
    pub degree_bound: u32,
}

impl PitVerdict {
    /// Bound on the probability that unequal determinants agreed on every
    /// trial: `(degree / prime)^trials`, exactly. Zero for an unequal verdict.
    pub fn error_bound(&self) -> Rational {
        if !self.equal {
            return Rational::zero();
        }
        let ratio = Rational::new(BigInt::from(self.degree_bound), BigInt::from(self.prime));
        num_traits::pow(ratio, self.trials as usize)
    }
}

/// Compares `det M` and `det N` at `trials` uniform points of `(Z/pZ)^k`.
pub fn pit_equal<R: Rng + ?Sized>(
    m: &PolyMatrix,
    n: &PolyMatrix,
    trials: u32,
    prime: u64,
    rng: &mut R,
) -> Result<PitVerdict> {
    if m.dim != n.dim {
        return Err(Error::DimensionMismatch(m.dim, n.dim));
    }
    if m.arity != n.arity {
        return Err(Error::ArityMismatch(m.arity, n.arity));
    }
    if !is_prime(prime) {
        return Err(Error::BadPrime { prime, reason: "not prime" });
    }
    let degree_bound = m.degree_bound().max(n.degree_bound()).max(1);
    if u64::from(degree_bound) >= prime {
        return Err(Error::BadPrime { prime, reason: "not larger than the determinant degree" });
    }
    let mut verdict = PitVerdict { equal: true, witness: None, trials, prime, degree_bound };
    for _ in 0..trials {
        let point: Vec<u64> = (0..m.arity).map(|_| rng.random_range(0..prime)).collect();
        let a = det_mod(m.eval_mod(&point, prime)?, m.dim, prime);
        let b = det_mod(n.eval_mod(&point, prime)?, n.dim, prime);
        if a != b {
            verdict.equal = false;
            verdict.witness = Some(point);
            break;
        }
    }
    Ok(verdict)
}
