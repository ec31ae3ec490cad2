//! Scalars of the coefficient ring.
//!
//! Exact scalars are finite sums of Gaussian-rational multiples of phase
//! words, i.e. elements of Q(i) adjoined the phases and their inverses.
//! Numeric scalars are complex doubles used when every phase has been
//! evaluated at a concrete deformation matrix.

use std::collections::BTreeMap;

use num::complex::Complex64;
use num::rational::BigRational;
use num::Zero;

use crate::error::{Error, Result};
use crate::phase::PhaseWord;
use crate::rational::GaussianRational;
use crate::theta::ThetaMatrix;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactScalar {
    n: u32,
    terms: BTreeMap<PhaseWord, GaussianRational>,
}

impl ExactScalar {
    pub fn zero(n: u32) -> Self {
        ExactScalar {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(n: u32) -> Self {
        Self::from_gaussian(n, GaussianRational::one())
    }

    pub fn from_gaussian(n: u32, g: GaussianRational) -> Self {
        Self::from_term(PhaseWord::identity(n), g)
    }

    pub fn from_word(word: PhaseWord) -> Self {
        Self::from_term(word, GaussianRational::one())
    }

    pub fn from_term(word: PhaseWord, g: GaussianRational) -> Self {
        let mut s = ExactScalar::zero(word.n());
        s.insert(word, g);
        s
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .all(|(w, g)| w.is_identity() && g.is_one())
    }

    /// Terms in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&PhaseWord, &GaussianRational)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// The value as a plain Gaussian rational, when no phase word occurs.
    pub fn as_gaussian(&self) -> Option<GaussianRational> {
        match self.terms.len() {
            0 => Some(GaussianRational::zero()),
            1 => {
                let (w, g) = self.terms.iter().next().unwrap();
                w.is_identity().then(|| g.clone())
            }
            _ => None,
        }
    }

    fn insert(&mut self, word: PhaseWord, g: GaussianRational) {
        debug_assert_eq!(word.n(), self.n);
        if g.is_zero() {
            return;
        }
        match self.terms.entry(word) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(g);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().add(&g);
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    fn check_n(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::SignatureMismatch(format!(
                "scalars over n={} and n={}",
                self.n, other.n
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_n(other)?;
        let mut out = self.clone();
        for (w, g) in &other.terms {
            out.insert(w.clone(), g.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_n(other)?;
        let mut out = ExactScalar::zero(self.n);
        for (wa, ga) in &self.terms {
            for (wb, gb) in &other.terms {
                out.insert(wa.mul(wb)?, ga.mul(gb));
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        ExactScalar {
            n: self.n,
            terms: self.terms.iter().map(|(w, g)| (w.clone(), g.neg())).collect(),
        }
    }

    /// Complex conjugate: conjugates coefficients and inverts phase words.
    pub fn conj(&self) -> Self {
        let mut out = ExactScalar::zero(self.n);
        for (w, g) in &self.terms {
            out.insert(w.inverse(), g.conj());
        }
        out
    }

    pub fn scale(&self, g: &GaussianRational) -> Self {
        let mut out = ExactScalar::zero(self.n);
        for (w, c) in &self.terms {
            out.insert(w.clone(), c.mul(g));
        }
        out
    }

    /// Multiplies every term by the given phase word.
    pub fn mul_word(&self, word: &PhaseWord) -> Result<Self> {
        let mut out = ExactScalar::zero(self.n);
        for (w, g) in &self.terms {
            out.insert(w.mul(word)?, g.clone());
        }
        Ok(out)
    }

    pub fn eval(&self, theta: &ThetaMatrix) -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for (w, g) in &self.terms {
            acc += g.to_complex() * w.eval(theta)?;
        }
        Ok(acc)
    }

    /// Sum of |re| + |im| over all terms: an exact bound that vanishes iff the
    /// scalar is zero, used to report exact residual magnitudes.
    pub fn l1_bound(&self) -> BigRational {
        self.terms
            .values()
            .map(|g| g.l1_norm())
            .fold(BigRational::zero(), |a, b| a + b)
    }
}

/// A complex double; the invariant is that stored values are finite.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NumericScalar(Complex64);

impl NumericScalar {
    pub fn new(value: Complex64) -> Result<Self> {
        if value.re.is_finite() && value.im.is_finite() {
            Ok(NumericScalar(value))
        } else {
            Err(Error::NonFinite)
        }
    }

    pub fn zero() -> Self {
        NumericScalar(Complex64::new(0.0, 0.0))
    }

    pub fn one() -> Self {
        NumericScalar(Complex64::new(1.0, 0.0))
    }

    pub fn value(&self) -> Complex64 {
        self.0
    }

    pub fn abs(&self) -> f64 {
        self.0.norm()
    }
}

/// A coefficient in either representation. All coefficients of one element
/// share the representation selected by the element's signature.
#[derive(Clone, Debug, PartialEq)]
pub enum Coeff {
    Exact(ExactScalar),
    Numeric(NumericScalar),
}

impl Coeff {
    pub fn is_zero(&self) -> bool {
        match self {
            Coeff::Exact(s) => s.is_zero(),
            Coeff::Numeric(s) => s.value() == Complex64::new(0.0, 0.0),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Coeff::Exact(s) => s.is_one(),
            Coeff::Numeric(s) => s.value() == Complex64::new(1.0, 0.0),
        }
    }

    fn pair<'a>(&'a self, other: &'a Self) -> Result<Either<'a>> {
        match (self, other) {
            (Coeff::Exact(a), Coeff::Exact(b)) => Ok(Either::Exact(a, b)),
            (Coeff::Numeric(a), Coeff::Numeric(b)) => Ok(Either::Numeric(a, b)),
            _ => Err(Error::SignatureMismatch(
                "mixed exact and numeric coefficients".into(),
            )),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        match self.pair(other)? {
            Either::Exact(a, b) => Ok(Coeff::Exact(a.add(b)?)),
            Either::Numeric(a, b) => Ok(Coeff::Numeric(NumericScalar::new(a.value() + b.value())?)),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        match self.pair(other)? {
            Either::Exact(a, b) => Ok(Coeff::Exact(a.mul(b)?)),
            Either::Numeric(a, b) => Ok(Coeff::Numeric(NumericScalar::new(a.value() * b.value())?)),
        }
    }

    pub fn neg(&self) -> Self {
        match self {
            Coeff::Exact(s) => Coeff::Exact(s.neg()),
            Coeff::Numeric(s) => Coeff::Numeric(NumericScalar(-s.value())),
        }
    }

    pub fn conj(&self) -> Self {
        match self {
            Coeff::Exact(s) => Coeff::Exact(s.conj()),
            Coeff::Numeric(s) => Coeff::Numeric(NumericScalar(s.value().conj())),
        }
    }

    /// Multiplies by a phase word, evaluating it when the coefficient is
    /// numeric (which requires the deformation matrix).
    pub fn apply_word(&self, word: &PhaseWord, theta: Option<&ThetaMatrix>) -> Result<Self> {
        if word.is_identity() {
            return Ok(self.clone());
        }
        match self {
            Coeff::Exact(s) => Ok(Coeff::Exact(s.mul_word(word)?)),
            Coeff::Numeric(s) => {
                let th = theta.ok_or(Error::MissingTheta)?;
                Ok(Coeff::Numeric(NumericScalar::new(s.value() * word.eval(th)?)?))
            }
        }
    }

    /// |.| for numeric coefficients; the l1 bound for exact ones.
    pub fn magnitude_f64(&self) -> f64 {
        match self {
            Coeff::Exact(s) => crate::rational::rational_to_f64(&s.l1_bound()),
            Coeff::Numeric(s) => s.abs(),
        }
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        match (self, other) {
            (Coeff::Exact(a), Coeff::Exact(b)) => a == b,
            (Coeff::Numeric(a), Coeff::Numeric(b)) => (a.value() - b.value()).norm() <= tol,
            _ => false,
        }
    }
}

enum Either<'a> {
    Exact(&'a ExactScalar, &'a ExactScalar),
    Numeric(&'a NumericScalar, &'a NumericScalar),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theta::Angle;
    use num::BigInt;

    fn lam(n: u32, k: u32, l: u32) -> ExactScalar {
        ExactScalar::from_word(PhaseWord::generator(n, k, l).unwrap())
    }

    #[test]
    fn phase_times_inverse_cancels_to_one() {
        let a = lam(2, 2, 1);
        let b = a.conj();
        assert_eq!(a.mul(&b).unwrap(), ExactScalar::one(2));
    }

    #[test]
    fn conjugate_inverts_phases_and_coefficients() {
        let g = GaussianRational::new(
            BigRational::new(BigInt::from(1), BigInt::from(2)),
            BigRational::new(BigInt::from(3), BigInt::from(4)),
        );
        let s = ExactScalar::from_term(PhaseWord::generator(2, 2, 1).unwrap(), g.clone());
        let c = s.conj();
        let (w, coeff) = c.terms().next().unwrap();
        assert_eq!(*w, PhaseWord::generator(2, 2, 1).unwrap().inverse());
        assert_eq!(*coeff, g.conj());
        assert_eq!(c.conj(), s);
    }

    #[test]
    fn sums_cancel_exactly() {
        let one_plus_i = ExactScalar::from_gaussian(
            1,
            GaussianRational::new(BigRational::from(BigInt::from(1)), BigRational::from(BigInt::from(1))),
        );
        let one_minus_i = one_plus_i.conj();
        let two = ExactScalar::from_gaussian(1, GaussianRational::from_integers(2, 1));
        assert_eq!(one_plus_i.add(&one_minus_i).unwrap(), two);
        assert!(one_plus_i.sub(&one_plus_i).unwrap().is_zero());
    }

    #[test]
    fn distinct_words_do_not_merge() {
        let s = lam(3, 2, 1).add(&lam(3, 3, 1)).unwrap();
        assert_eq!(s.term_count(), 2);
        assert!(s.as_gaussian().is_none());
    }

    #[test]
    fn eval_is_multiplicative_on_corner_angle() {
        let mut th = ThetaMatrix::zero(2);
        th.set(2, 1, Angle::PiMultiple(BigRational::new(BigInt::from(1), BigInt::from(2))))
            .unwrap();
        let two_lambda = lam(2, 2, 1).scale(&GaussianRational::from_integers(2, 1));
        assert_eq!(two_lambda.eval(&th).unwrap(), Complex64::new(0.0, 2.0));
    }

    #[test]
    fn numeric_scalar_rejects_non_finite() {
        assert!(NumericScalar::new(Complex64::new(f64::INFINITY, 0.0)).is_err());
        assert!(NumericScalar::new(Complex64::new(0.0, f64::NAN)).is_err());
    }

    #[test]
    fn mixed_coefficient_modes_are_rejected() {
        let a = Coeff::Exact(ExactScalar::one(2));
        let b = Coeff::Numeric(NumericScalar::one());
        assert!(a.add(&b).is_err());
    }
}
