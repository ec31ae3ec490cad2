//! Integer words in the commuting unit phases `L[k,l]`, 1 <= l < k <= n.
//!
//! The algebra with n conjugate generator pairs carries one independent phase
//! per unordered pair of distinct coordinates. Words multiply by adding
//! exponents, so they form the free abelian group on the pairs (k,l) with
//! l < k. Conjugation inverts a word because every phase has modulus one.

use std::collections::BTreeMap;

use num::complex::Complex64;

use crate::error::{Error, Result};
use crate::theta::ThetaMatrix;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PhaseWord {
    n: u32,
    exps: BTreeMap<(u32, u32), i64>,
}

impl PhaseWord {
    /// The empty word (the scalar 1).
    pub fn identity(n: u32) -> Self {
        PhaseWord {
            n,
            exps: BTreeMap::new(),
        }
    }

    /// The single phase between coordinates `k` and `l`.
    ///
    /// Indices in either order denote inverse phases, so `(l, k)` yields the
    /// inverse of `(k, l)`; equal indices give the identity.
    pub fn generator(n: u32, k: u32, l: u32) -> Result<Self> {
        let mut w = PhaseWord::identity(n);
        w.multiply_pair(k, l, 1)?;
        Ok(w)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn is_identity(&self) -> bool {
        self.exps.is_empty()
    }

    /// Multiplies the phase for coordinates (k, l) raised to `e` into the word.
    pub fn multiply_pair(&mut self, k: u32, l: u32, e: i64) -> Result<()> {
        if k == 0 || l == 0 || k > self.n || l > self.n {
            return Err(Error::GeneratorOutOfRange {
                index: k.max(l),
                n: self.n,
            });
        }
        if k == l || e == 0 {
            return Ok(());
        }
        let (key, exp) = if k > l { ((k, l), e) } else { ((l, k), -e) };
        let slot = self.exps.entry(key).or_insert(0);
        *slot += exp;
        if *slot == 0 {
            self.exps.remove(&key);
        }
        Ok(())
    }

    /// Signed exponent of the phase between `k` and `l` (`k > l` is the stored
    /// orientation; the transpose reads as the negation).
    pub fn exponent(&self, k: u32, l: u32) -> i64 {
        if k > l {
            self.exps.get(&(k, l)).copied().unwrap_or(0)
        } else if l > k {
            -self.exponent(l, k)
        } else {
            0
        }
    }

    /// Stored factors in canonical order: ((k, l), exponent) with l < k.
    pub fn factors(&self) -> impl Iterator<Item = ((u32, u32), i64)> + '_ {
        self.exps.iter().map(|(&p, &e)| (p, e))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::SignatureMismatch(format!(
                "phase words over n={} and n={}",
                self.n, other.n
            )));
        }
        let mut out = self.clone();
        for (&(k, l), &e) in &other.exps {
            out.multiply_pair(k, l, e)?;
        }
        Ok(out)
    }

    /// Inverse word; equals the complex conjugate since every phase is unitary.
    pub fn inverse(&self) -> Self {
        PhaseWord {
            n: self.n,
            exps: self.exps.iter().map(|(&p, &e)| (p, -e)).collect(),
        }
    }

    pub fn pow(&self, e: i64) -> Self {
        if e == 0 {
            return PhaseWord::identity(self.n);
        }
        PhaseWord {
            n: self.n,
            exps: self.exps.iter().map(|(&p, &x)| (p, x * e)).collect(),
        }
    }

    /// Evaluates the word at a concrete deformation matrix.
    pub fn eval(&self, theta: &ThetaMatrix) -> Result<Complex64> {
        if theta.n() != self.n {
            return Err(Error::SignatureMismatch(format!(
                "phase word over n={} evaluated at a deformation matrix with n={}",
                self.n,
                theta.n()
            )));
        }
        Ok(theta.eval_exponents(self.factors()))
    }
}
