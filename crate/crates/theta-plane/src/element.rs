//! Elements of the deformed coordinate algebra.
//!
//! An element is a finite sum of normal-form monomials with coefficients in
//! the scalar ring selected by its signature: symbolic phase sums in exact
//! mode, complex doubles in numeric mode. Multiplication reorders nothing at
//! the word level; it combines exponent vectors and one phase word per
//! monomial pair, so products stay in normal form by construction.

use std::collections::BTreeMap;
use std::sync::Arc;

use num::rational::BigRational;

use crate::error::{Error, Result};
use crate::index::MultiIndex;
use crate::phase::PhaseWord;
use crate::rational::{rational_to_f64, GaussianRational};
use crate::scalar::{Coeff, ExactScalar, NumericScalar};
use crate::theta::ThetaMatrix;

/// Coefficient representation of an algebra instance.
#[derive(Clone, Debug, PartialEq)]
pub enum Mode {
    Exact,
    /// Every phase evaluated at this deformation matrix.
    Numeric(Arc<ThetaMatrix>),
}

/// Shape of one algebra instance: n conjugate generator pairs, m real
/// coordinates (2n, or 2n+1 when the central generator x is present), and the
/// coefficient mode. Elements and matrices interoperate only within equal
/// signatures.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraSignature {
    n: u32,
    m: u32,
    mode: Mode,
}

impl AlgebraSignature {
    pub fn exact(n: u32, m: u32) -> Result<Self> {
        Self::validate(n, m)?;
        Ok(AlgebraSignature {
            n,
            m,
            mode: Mode::Exact,
        })
    }

    pub fn numeric(m: u32, theta: Arc<ThetaMatrix>) -> Result<Self> {
        let n = theta.n();
        Self::validate(n, m)?;
        Ok(AlgebraSignature {
            n,
            m,
            mode: Mode::Numeric(theta),
        })
    }

    fn validate(n: u32, m: u32) -> Result<()> {
        if n == 0 {
            return Err(Error::SignatureMismatch("n must be at least 1".into()));
        }
        if m != 2 * n && m != 2 * n + 1 {
            return Err(Error::SignatureMismatch(format!(
                "m must be 2n or 2n+1 (got n={n}, m={m})"
            )));
        }
        Ok(())
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// Whether the central hermitian generator x exists (odd m).
    pub fn has_central(&self) -> bool {
        self.m % 2 == 1
    }

    pub fn mode(&self) -> &Mode {
        &self.mode
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.mode, Mode::Exact)
    }

    pub fn theta(&self) -> Option<&ThetaMatrix> {
        match &self.mode {
            Mode::Exact => None,
            Mode::Numeric(th) => Some(th),
        }
    }

    pub fn check_same(&self, other: &Self) -> Result<()> {
        if self != other {
            return Err(Error::SignatureMismatch(format!(
                "operands live in different algebras (n={}, m={}, {} vs n={}, m={}, {})",
                self.n,
                self.m,
                mode_name(&self.mode),
                other.n,
                other.m,
                mode_name(&other.mode)
            )));
        }
        Ok(())
    }

    pub fn coeff_zero(&self) -> Coeff {
        match self.mode {
            Mode::Exact => Coeff::Exact(ExactScalar::zero(self.n)),
            Mode::Numeric(_) => Coeff::Numeric(NumericScalar::zero()),
        }
    }

    pub fn coeff_one(&self) -> Coeff {
        match self.mode {
            Mode::Exact => Coeff::Exact(ExactScalar::one(self.n)),
            Mode::Numeric(_) => Coeff::Numeric(NumericScalar::one()),
        }
    }

    pub fn coeff_from_gaussian(&self, g: &GaussianRational) -> Coeff {
        match self.mode {
            Mode::Exact => Coeff::Exact(ExactScalar::from_gaussian(self.n, g.clone())),
            Mode::Numeric(_) => Coeff::Numeric(
                NumericScalar::new(g.to_complex()).expect("rational converts to finite double"),
            ),
        }
    }

    /// A coefficient holding one symbolic phase word; exact mode only.
    pub fn coeff_from_word(&self, word: PhaseWord) -> Result<Coeff> {
        match self.mode {
            Mode::Exact => Ok(Coeff::Exact(ExactScalar::from_word(word))),
            Mode::Numeric(_) => Err(Error::PhaseInNumericMode),
        }
    }
}

fn mode_name(mode: &Mode) -> &'static str {
    match mode {
        Mode::Exact => "exact",
        Mode::Numeric(_) => "numeric",
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Element {
    sig: AlgebraSignature,
    coeffs: BTreeMap<MultiIndex, Coeff>,
}

impl Element {
    pub fn zero(sig: AlgebraSignature) -> Self {
        Element {
            sig,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one(sig: AlgebraSignature) -> Self {
        let c = sig.coeff_one();
        let idx = MultiIndex::constant(sig.n());
        let mut e = Element::zero(sig);
        e.insert_term(idx, c).expect("constant one is finite");
        e
    }

    pub fn z(sig: AlgebraSignature, j: u32) -> Result<Self> {
        let idx = MultiIndex::z(sig.n(), j)?;
        Self::monomial(sig, idx, None)
    }

    pub fn zb(sig: AlgebraSignature, j: u32) -> Result<Self> {
        let idx = MultiIndex::zb(sig.n(), j)?;
        Self::monomial(sig, idx, None)
    }

    pub fn x(sig: AlgebraSignature) -> Result<Self> {
        if !sig.has_central() {
            return Err(Error::NoCentralGenerator);
        }
        let idx = MultiIndex::x(sig.n());
        Self::monomial(sig, idx, None)
    }

    /// A single monomial with the given coefficient (default 1).
    pub fn monomial(sig: AlgebraSignature, idx: MultiIndex, coeff: Option<Coeff>) -> Result<Self> {
        if idx.n() != sig.n() {
            return Err(Error::SignatureMismatch(format!(
                "monomial over n={} in an algebra with n={}",
                idx.n(),
                sig.n()
            )));
        }
        if idx.t() > 0 && !sig.has_central() {
            return Err(Error::NoCentralGenerator);
        }
        let coeff = coeff.unwrap_or_else(|| sig.coeff_one());
        check_mode(&sig, &coeff)?;
        let mut e = Element::zero(sig);
        e.insert_term(idx, coeff)?;
        Ok(e)
    }

    pub fn from_gaussian(sig: AlgebraSignature, g: &GaussianRational) -> Self {
        let c = sig.coeff_from_gaussian(g);
        let idx = MultiIndex::constant(sig.n());
        let mut e = Element::zero(sig);
        e.insert_term(idx, c).expect("rational constant is finite");
        e
    }

    pub fn sig(&self) -> &AlgebraSignature {
        &self.sig
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1
            && self
                .coeffs
                .get(&MultiIndex::constant(self.sig.n()))
                .is_some_and(|c| c.is_one())
    }

    pub fn term_count(&self) -> usize {
        self.coeffs.len()
    }

    /// Terms in canonical (graded-lexicographic) order.
    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Coeff)> {
        self.coeffs.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &MultiIndex> {
        self.coeffs.keys()
    }

    pub fn coeff(&self, idx: &MultiIndex) -> Option<&Coeff> {
        self.coeffs.get(idx)
    }

    /// The coefficient at an index, zero if absent.
    pub fn coeff_or_zero(&self, idx: &MultiIndex) -> Coeff {
        self.coeffs
            .get(idx)
            .cloned()
            .unwrap_or_else(|| self.sig.coeff_zero())
    }

    fn insert_term(&mut self, idx: MultiIndex, coeff: Coeff) -> Result<()> {
        if coeff.is_zero() {
            return Ok(());
        }
        match self.coeffs.entry(idx) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().add(&coeff)?;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.sig.check_same(&other.sig)?;
        let mut out = self.clone();
        for (idx, c) in &other.coeffs {
            out.insert_term(idx.clone(), c.clone())?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Element {
            sig: self.sig.clone(),
            coeffs: self
                .coeffs
                .iter()
                .map(|(i, c)| (i.clone(), c.neg()))
                .collect(),
        }
    }

    /// Multiplies every coefficient by a scalar of the matching mode.
    pub fn scale(&self, c: &Coeff) -> Result<Self> {
        check_mode(&self.sig, c)?;
        let mut out = Element::zero(self.sig.clone());
        for (idx, a) in &self.coeffs {
            out.insert_term(idx.clone(), a.mul(c)?)?;
        }
        Ok(out)
    }

    pub fn scale_gaussian(&self, g: &GaussianRational) -> Self {
        self.scale(&self.sig.coeff_from_gaussian(g))
            .expect("coefficient mode matches by construction")
    }

    /// The twisted product. Each pair of monomials contributes its exponent
    /// sum and one phase word; in numeric mode the word is evaluated at the
    /// signature's deformation matrix.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.sig.check_same(&other.sig)?;
        let theta = self.sig.theta();
        let mut out = Element::zero(self.sig.clone());
        for (ia, ca) in &self.coeffs {
            for (ib, cb) in &other.coeffs {
                let (word, idx) = ia.twisted_mul(ib)?;
                let c = ca.mul(cb)?.apply_word(&word, theta)?;
                out.insert_term(idx, c)?;
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Result<Self> {
        let mut out = Element::one(self.sig.clone());
        for _ in 0..e {
            out = out.mul(self)?;
        }
        Ok(out)
    }

    /// The adjoint: conjugates coefficients, swaps each monomial's
    /// holomorphic and conjugate exponents and multiplies in the reordering
    /// phase of the swap.
    pub fn star(&self) -> Self {
        let theta = self.sig.theta();
        let mut out = Element::zero(self.sig.clone());
        for (idx, c) in &self.coeffs {
            let (word, sidx) = idx.star_data();
            let sc = c
                .conj()
                .apply_word(&word, theta)
                .expect("unit phases keep coefficients finite");
            out.insert_term(sidx, sc)
                .expect("adjoint terms have distinct indices");
        }
        out
    }

    /// Total degree; -1 for the zero element.
    pub fn degree(&self) -> i64 {
        self.coeffs
            .keys()
            .map(|i| i.total_degree() as i64)
            .max()
            .unwrap_or(-1)
    }

    /// Drops every monomial of total degree above `d`.
    pub fn truncate(&self, d: u32) -> Self {
        Element {
            sig: self.sig.clone(),
            coeffs: self
                .coeffs
                .iter()
                .filter(|(i, _)| i.total_degree() <= d)
                .map(|(i, c)| (i.clone(), c.clone()))
                .collect(),
        }
    }

    /// Keeps only the monomials of total degree exactly `d`.
    pub fn homogeneous_part(&self, d: u32) -> Self {
        Element {
            sig: self.sig.clone(),
            coeffs: self
                .coeffs
                .iter()
                .filter(|(i, _)| i.total_degree() == d)
                .map(|(i, c)| (i.clone(), c.clone()))
                .collect(),
        }
    }

    /// Degree-zero coefficient.
    pub fn constant_coeff(&self) -> Coeff {
        self.coeff_or_zero(&MultiIndex::constant(self.sig.n()))
    }

    /// Whether star(a) = a, exactly or within `tol` coefficientwise.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        let diff = match self.sub(&self.star()) {
            Ok(d) => d,
            Err(_) => return false,
        };
        diff.is_zero_within(tol)
    }

    /// Exact mode: zero element. Numeric mode: all coefficients within `tol`.
    pub fn is_zero_within(&self, tol: f64) -> bool {
        if self.sig.is_exact() {
            self.is_zero()
        } else {
            self.max_magnitude_f64() <= tol
        }
    }

    /// Largest coefficient magnitude (l1 bound of exact coefficients).
    pub fn max_magnitude_f64(&self) -> f64 {
        self.coeffs
            .values()
            .map(|c| c.magnitude_f64())
            .fold(0.0, f64::max)
    }

    /// Exact mode only: the largest l1 bound over coefficients, as a rational.
    pub fn max_l1_rational(&self) -> Option<BigRational> {
        use num::Zero;
        if !self.sig.is_exact() {
            return None;
        }
        let mut best = BigRational::zero();
        for c in self.coeffs.values() {
            if let Coeff::Exact(s) = c {
                let b = s.l1_bound();
                if b > best {
                    best = b;
                }
            }
        }
        Some(best)
    }

    /// Evaluates every phase at `theta`, mapping an exact element to the
    /// numeric element with the same support.
    pub fn eval(&self, theta: &Arc<ThetaMatrix>) -> Result<Element> {
        if !self.sig.is_exact() {
            return Err(Error::SignatureMismatch(
                "evaluation applies to exact elements".into(),
            ));
        }
        if theta.n() != self.sig.n() {
            return Err(Error::SignatureMismatch(format!(
                "deformation matrix has n={} but the element has n={}",
                theta.n(),
                self.sig.n()
            )));
        }
        let sig = AlgebraSignature::numeric(self.sig.m(), Arc::clone(theta))?;
        let mut out = Element::zero(sig);
        for (idx, c) in &self.coeffs {
            let value = match c {
                Coeff::Exact(s) => s.eval(theta)?,
                Coeff::Numeric(_) => unreachable!("exact signature holds exact coefficients"),
            };
            out.insert_term(idx.clone(), Coeff::Numeric(NumericScalar::new(value)?))?;
        }
        Ok(out)
    }

    /// Schwartz-style decay diagnostic: checks that
    /// (1 + sum_j (p_j^2 + q_j^2))^r * |a_(p,q,t)| < c over the support.
    /// Exact coefficients are evaluated at `theta` to take magnitudes.
    pub fn decay_within(&self, r: u32, c: &BigRational, theta: &ThetaMatrix) -> Result<bool> {
        let bound = rational_to_f64(c);
        for (idx, coeff) in &self.coeffs {
            let weight: u64 = 1 + idx
                .p()
                .iter()
                .zip(idx.q())
                .map(|(a, b)| (*a as u64).pow(2) + (*b as u64).pow(2))
                .sum::<u64>();
            let weight = (weight as f64).powi(r as i32);
            let mag = match coeff {
                Coeff::Exact(s) => s.eval(theta)?.norm(),
                Coeff::Numeric(v) => v.abs(),
            };
            if weight * mag >= bound {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Coefficientwise comparison: exact equality in exact mode, absolute
    /// tolerance in numeric mode.
    pub fn eq_within(&self, other: &Self, tol: f64) -> bool {
        if self.sig != other.sig {
            return false;
        }
        match self.sub(other) {
            Ok(diff) => diff.is_zero_within(tol),
            Err(_) => false,
        }
    }
}

fn check_mode(sig: &AlgebraSignature, c: &Coeff) -> Result<()> {
    let ok = match (sig.mode(), c) {
        (Mode::Exact, Coeff::Exact(s)) => s.n() == sig.n(),
        (Mode::Numeric(_), Coeff::Numeric(_)) => true,
        _ => false,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::SignatureMismatch(
            "coefficient does not match the algebra signature".into(),
        ))
    }
}
