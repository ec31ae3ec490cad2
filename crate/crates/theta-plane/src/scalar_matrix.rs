//! Constant (degree-0) matrices and the unitary that diagonalizes a constant
//! projector, in both coefficient modes.

use crate::element::{AlgebraSignature, Element, Mode};
use crate::error::{Error, Result};
use crate::matrix::AlgMatrix;
use crate::rational::{rationalize, GaussianRational};
use crate::scalar::{Coeff, ExactScalar, NumericScalar};
use num::complex::Complex64;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, Debug, PartialEq)]
pub enum ScalarEntries {
    Exact(Vec<GaussianRational>),
    Numeric(Vec<Complex64>),
}

/// An N×N grid of plain numbers: exact Gaussian rationals or complex doubles.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarMatrix {
    size: usize,
    entries: ScalarEntries,
}

impl ScalarMatrix {
    pub fn zero(size: usize, exact: bool) -> Self {
        assert!(size > 0);
        let entries = if exact {
            ScalarEntries::Exact(vec![GaussianRational::zero(); size * size])
        } else {
            ScalarEntries::Numeric(vec![Complex64::new(0.0, 0.0); size * size])
        };
        ScalarMatrix { size, entries }
    }

    pub fn identity(size: usize, exact: bool) -> Self {
        let mut m = ScalarMatrix::zero(size, exact);
        for k in 0..size {
            match &mut m.entries {
                ScalarEntries::Exact(v) => v[k * size + k] = GaussianRational::one(),
                ScalarEntries::Numeric(v) => v[k * size + k] = Complex64::new(1.0, 0.0),
            }
        }
        m
    }

    pub fn standard_projector(size: usize, rank: usize, exact: bool) -> Self {
        assert!(rank <= size);
        let mut m = ScalarMatrix::zero(size, exact);
        for k in 0..rank {
            match &mut m.entries {
                ScalarEntries::Exact(v) => v[k * size + k] = GaussianRational::one(),
                ScalarEntries::Numeric(v) => v[k * size + k] = Complex64::new(1.0, 0.0),
            }
        }
        m
    }

    pub fn from_exact(size: usize, entries: Vec<GaussianRational>) -> Result<Self> {
        if entries.len() != size * size || size == 0 {
            return Err(Error::ShapeMismatch(format!(
                "expected {}, got {} entries",
                size * size,
                entries.len()
            )));
        }
        Ok(ScalarMatrix {
            size,
            entries: ScalarEntries::Exact(entries),
        })
    }

    pub fn from_numeric(size: usize, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != size * size || size == 0 {
            return Err(Error::ShapeMismatch(format!(
                "expected {}, got {} entries",
                size * size,
                entries.len()
            )));
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(ScalarMatrix {
            size,
            entries: ScalarEntries::Numeric(entries),
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.entries, ScalarEntries::Exact(_))
    }

    pub fn entries(&self) -> &ScalarEntries {
        &self.entries
    }

    pub fn exact_entry(&self, r: usize, c: usize) -> Option<&GaussianRational> {
        match &self.entries {
            ScalarEntries::Exact(v) => Some(&v[r * self.size + c]),
            ScalarEntries::Numeric(_) => None,
        }
    }

    /// The entry as a complex double (exact entries are evaluated).
    pub fn numeric_entry(&self, r: usize, c: usize) -> Complex64 {
        match &self.entries {
            ScalarEntries::Exact(v) => v[r * self.size + c].to_complex(),
            ScalarEntries::Numeric(v) => v[r * self.size + c],
        }
    }

    pub fn to_numeric(&self) -> ScalarMatrix {
        let v = (0..self.size * self.size)
            .map(|i| self.numeric_entry(i / self.size, i % self.size))
            .collect();
        ScalarMatrix {
            size: self.size,
            entries: ScalarEntries::Numeric(v),
        }
    }

    fn check_pair(&self, other: &Self) -> Result<()> {
        if self.size != other.size {
            return Err(Error::ShapeMismatch(format!(
                "{0}x{0} vs {1}x{1}",
                self.size, other.size
            )));
        }
        if self.is_exact() != other.is_exact() {
            return Err(Error::SignatureMismatch(
                "mixed exact and numeric scalar matrices".into(),
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_pair(other)?;
        Ok(match (&self.entries, &other.entries) {
            (ScalarEntries::Exact(a), ScalarEntries::Exact(b)) => ScalarMatrix {
                size: self.size,
                entries: ScalarEntries::Exact(
                    a.iter().zip(b).map(|(x, y)| x.add(y)).collect(),
                ),
            },
            (ScalarEntries::Numeric(a), ScalarEntries::Numeric(b)) => ScalarMatrix {
                size: self.size,
                entries: ScalarEntries::Numeric(a.iter().zip(b).map(|(x, y)| x + y).collect()),
            },
            _ => unreachable!("check_pair rejects mixed modes"),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_pair(other)?;
        Ok(match (&self.entries, &other.entries) {
            (ScalarEntries::Exact(a), ScalarEntries::Exact(b)) => ScalarMatrix {
                size: self.size,
                entries: ScalarEntries::Exact(
                    a.iter().zip(b).map(|(x, y)| x.sub(y)).collect(),
                ),
            },
            (ScalarEntries::Numeric(a), ScalarEntries::Numeric(b)) => ScalarMatrix {
                size: self.size,
                entries: ScalarEntries::Numeric(a.iter().zip(b).map(|(x, y)| x - y).collect()),
            },
            _ => unreachable!("check_pair rejects mixed modes"),
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_pair(other)?;
        let n = self.size;
        Ok(match (&self.entries, &other.entries) {
            (ScalarEntries::Exact(a), ScalarEntries::Exact(b)) => {
                let mut out = vec![GaussianRational::zero(); n * n];
                for r in 0..n {
                    for c in 0..n {
                        let mut acc = GaussianRational::zero();
                        for j in 0..n {
                            acc = acc.add(&a[r * n + j].mul(&b[j * n + c]));
                        }
                        out[r * n + c] = acc;
                    }
                }
                ScalarMatrix {
                    size: n,
                    entries: ScalarEntries::Exact(out),
                }
            }
            (ScalarEntries::Numeric(a), ScalarEntries::Numeric(b)) => {
                let mut out = vec![Complex64::new(0.0, 0.0); n * n];
                for r in 0..n {
                    for c in 0..n {
                        let mut acc = Complex64::new(0.0, 0.0);
                        for j in 0..n {
                            acc += a[r * n + j] * b[j * n + c];
                        }
                        out[r * n + c] = acc;
                    }
                }
                ScalarMatrix {
                    size: n,
                    entries: ScalarEntries::Numeric(out),
                }
            }
            _ => unreachable!("check_pair rejects mixed modes"),
        })
    }

    pub fn adjoint(&self) -> Self {
        let n = self.size;
        match &self.entries {
            ScalarEntries::Exact(a) => {
                let mut out = Vec::with_capacity(n * n);
                for r in 0..n {
                    for c in 0..n {
                        out.push(a[c * n + r].conj());
                    }
                }
                ScalarMatrix {
                    size: n,
                    entries: ScalarEntries::Exact(out),
                }
            }
            ScalarEntries::Numeric(a) => {
                let mut out = Vec::with_capacity(n * n);
                for r in 0..n {
                    for c in 0..n {
                        out.push(a[c * n + r].conj());
                    }
                }
                ScalarMatrix {
                    size: n,
                    entries: ScalarEntries::Numeric(out),
                }
            }
        }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.size).map(|k| self.numeric_entry(k, k)).sum()
    }

    pub fn max_abs(&self) -> f64 {
        match &self.entries {
            ScalarEntries::Exact(a) => a
                .iter()
                .map(|g| g.to_complex().norm())
                .fold(0.0, f64::max),
            ScalarEntries::Numeric(a) => a.iter().map(|z| z.norm()).fold(0.0, f64::max),
        }
    }

    pub fn is_zero_within(&self, tol: f64) -> bool {
        match &self.entries {
            ScalarEntries::Exact(a) => a.iter().all(|g| g.is_zero()),
            ScalarEntries::Numeric(_) => self.max_abs() <= tol,
        }
    }

    /// Constant algebra matrix with these entries; the signature's mode must
    /// match the grid's.
    pub fn embed(&self, sig: &AlgebraSignature) -> Result<AlgMatrix> {
        let n = self.size;
        let idx = crate::index::MultiIndex::constant(sig.n());
        AlgMatrix::from_fn(sig.clone(), n, |r, c| {
            let coeff = match (&self.entries, sig.mode()) {
                (ScalarEntries::Exact(v), Mode::Exact) => {
                    Coeff::Exact(ExactScalar::from_gaussian(sig.n(), v[r * n + c].clone()))
                }
                (ScalarEntries::Numeric(v), Mode::Numeric(_)) => Coeff::Numeric(
                    NumericScalar::new(v[r * n + c]).expect("grid entries are finite"),
                ),
                (ScalarEntries::Exact(v), Mode::Numeric(_)) => Coeff::Numeric(
                    NumericScalar::new(v[r * n + c].to_complex()).expect("rationals are finite"),
                ),
                (ScalarEntries::Numeric(_), Mode::Exact) => {
                    // caught below; placeholder keeps the closure total
                    Coeff::Exact(ExactScalar::zero(sig.n()))
                }
            };
            Element::monomial(sig.clone(), idx.clone(), Some(coeff))
                .expect("constant monomials are valid in every signature")
        })
        .and_then(|m| {
            if !self.is_exact() && sig.is_exact() {
                Err(Error::SignatureMismatch(
                    "cannot embed a numeric grid into an exact algebra".into(),
                ))
            } else {
                Ok(m)
            }
        })
    }
}

/// The degree-0 coefficient of every entry. Exact entries must be phase-free
/// numbers; constant phase units cannot be represented in a plain grid.
pub fn scalar_part(p: &AlgMatrix) -> Result<ScalarMatrix> {
    let n = p.size();
    if p.sig().is_exact() {
        let mut out = Vec::with_capacity(n * n);
        for ((_, _), e) in p.entries() {
            match e.constant_coeff() {
                Coeff::Exact(s) => {
                    let g = s.as_gaussian().ok_or_else(|| {
                        Error::ExactDiagonalizationUnavailable(
                            "a degree-0 coefficient carries phase units; evaluate at a \
                             deformation matrix and rerun in numeric mode"
                                .into(),
                        )
                    })?;
                    out.push(g);
                }
                Coeff::Numeric(_) => unreachable!("exact signature carries exact coefficients"),
            }
        }
        ScalarMatrix::from_exact(n, out)
    } else {
        let mut out = Vec::with_capacity(n * n);
        for ((_, _), e) in p.entries() {
            match e.constant_coeff() {
                Coeff::Numeric(v) => out.push(v.value()),
                Coeff::Exact(_) => unreachable!("numeric signature carries numeric coefficients"),
            }
        }
        ScalarMatrix::from_numeric(n, out)
    }
}

/// Unitary Q with Q·A·Q* = diag(1,..,1,0,..,0) for a constant projector A,
/// together with the rank. Exact grids are handled by pivoted Gram–Schmidt
/// over the Gaussian rationals, which needs every normalization to stay
/// rational; when that fails the entries are rationalized from a numeric
/// solution, and if re-unitarization still fails the caller is told that an
/// exact answer needs a pre-diagonalized constant part.
pub fn diagonalize_scalar_projector(a: &ScalarMatrix, tol: f64) -> Result<(ScalarMatrix, usize)> {
    match &a.entries {
        ScalarEntries::Exact(_) => diagonalize_exact(a),
        ScalarEntries::Numeric(_) => diagonalize_numeric(a, tol),
    }
}

fn diagonalize_exact(a: &ScalarMatrix) -> Result<(ScalarMatrix, usize)> {
    let n = a.size;
    let diff = a.mul(a)?.sub(a)?;
    if !diff.is_zero_within(0.0) {
        return Err(Error::NotAProjector("A^2 != A for the constant part".into()));
    }
    if !a.sub(&a.adjoint())?.is_zero_within(0.0) {
        return Err(Error::NotHermitian("A* != A for the constant part".into()));
    }
    let r = exact_rank_from_trace(a)?;

    if let Some(q) = exact_gram_schmidt(a, r) {
        return Ok((q, r));
    }

    // Rationalize a numeric diagonalizer and retry the exact orthonormalization
    // on its rows.
    let (qn, rn) = diagonalize_numeric(&a.to_numeric(), 1e-9)?;
    if rn != r {
        return Err(Error::Internal(format!(
            "numeric rank {rn} disagrees with exact trace {r}"
        )));
    }
    let mut rows: Vec<Vec<GaussianRational>> = Vec::with_capacity(n);
    for k in 0..n {
        let mut row = Vec::with_capacity(n);
        for l in 0..n {
            let z = qn.numeric_entry(k, l);
            let re = rationalize(z.re, 1e-12).ok_or_else(exact_unavailable)?;
            let im = rationalize(z.im, 1e-12).ok_or_else(exact_unavailable)?;
            row.push(GaussianRational::new(re, im));
        }
        rows.push(row);
    }
    let q = exact_orthonormalize_rows(rows).ok_or_else(exact_unavailable)?;
    let q = ScalarMatrix::from_exact(n, q.into_iter().flatten().collect())?;
    verify_exact_diagonalization(a, &q, r)?;
    Ok((q, r))
}

fn exact_unavailable() -> Error {
    Error::ExactDiagonalizationUnavailable(
        "the constant part has no rational orthonormal eigenbasis within reach; \
         supply a projector whose constant part is already diag(1..1,0..0), or \
         run in numeric mode"
            .into(),
    )
}

fn exact_rank_from_trace(a: &ScalarMatrix) -> Result<usize> {
    let mut tr = GaussianRational::zero();
    for k in 0..a.size {
        tr = tr.add(a.exact_entry(k, k).expect("exact grid"));
    }
    if !tr.im().is_zero() || !tr.re().denom().is_one() || tr.re().is_negative() {
        return Err(Error::NotAProjector(format!(
            "trace {} of the constant part is not a nonnegative integer",
            tr
        )));
    }
    let r = tr
        .re()
        .numer()
        .to_usize()
        .filter(|&r| r <= a.size)
        .ok_or_else(|| {
            Error::NotAProjector(format!("trace {tr} exceeds the matrix size {}", a.size))
        })?;
    Ok(r)
}

fn column(a: &ScalarMatrix, c: usize) -> Vec<GaussianRational> {
    (0..a.size)
        .map(|r| a.exact_entry(r, c).expect("exact grid").clone())
        .collect()
}

fn dot(u: &[GaussianRational], v: &[GaussianRational]) -> GaussianRational {
    let mut acc = GaussianRational::zero();
    for (x, y) in u.iter().zip(v) {
        acc = acc.add(&x.conj().mul(y));
    }
    acc
}

fn norm_sqr_vec(u: &[GaussianRational]) -> BigRational {
    u.iter()
        .map(|x| x.norm_sqr())
        .fold(BigRational::zero(), |acc, x| acc + x)
}

fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let ns = r.numer().sqrt();
    if &(&ns * &ns) != r.numer() {
        return None;
    }
    let ds = r.denom().sqrt();
    if &(&ds * &ds) != r.denom() {
        return None;
    }
    Some(BigRational::new(ns, ds))
}

fn subtract_projections(
    v: &[GaussianRational],
    basis: &[Vec<GaussianRational>],
) -> Vec<GaussianRational> {
    let mut w = v.to_vec();
    for u in basis {
        let c = dot(u, &w);
        for (wi, ui) in w.iter_mut().zip(u) {
            *wi = wi.sub(&c.mul(ui));
        }
    }
    w
}

/// Orthonormal basis adapted to range(A) then ker(A), as matrix rows
/// Q = U*; None when some pivot step admits no rational normalization.
fn exact_gram_schmidt(a: &ScalarMatrix, r: usize) -> Option<ScalarMatrix> {
    let n = a.size;
    let id = ScalarMatrix::identity(n, true);
    let complement = id.sub(a).expect("shapes match");

    let mut basis: Vec<Vec<GaussianRational>> = Vec::with_capacity(n);
    for (source, want) in [(a, r), (&complement, n - r)] {
        let mut taken = 0;
        let mut candidates: Vec<Vec<GaussianRational>> =
            (0..n).map(|c| column(source, c)).collect();
        while taken < want {
            let mut pick = None;
            for (ci, v) in candidates.iter().enumerate() {
                let w = subtract_projections(v, &basis);
                let nn = norm_sqr_vec(&w);
                if nn.is_zero() {
                    continue;
                }
                if let Some(norm) = rational_sqrt(&nn) {
                    pick = Some((ci, w, norm));
                    break;
                }
            }
            let (ci, w, norm) = pick?;
            candidates.remove(ci);
            let inv = GaussianRational::from_rational(norm).inv().expect("norm > 0");
            basis.push(w.iter().map(|x| x.mul(&inv)).collect());
            taken += 1;
        }
    }

    // Q rows are the conjugates of the basis vectors: Q = U*.
    let mut entries = Vec::with_capacity(n * n);
    for u in &basis {
        for x in u {
            entries.push(x.conj());
        }
    }
    let q = ScalarMatrix::from_exact(n, entries).expect("square by construction");
    Some(q)
}

/// Exact Gram–Schmidt on given rows (already expected to be near-orthonormal);
/// None when a normalization leaves the rationals.
fn exact_orthonormalize_rows(rows: Vec<Vec<GaussianRational>>) -> Option<Vec<Vec<GaussianRational>>> {
    let mut basis: Vec<Vec<GaussianRational>> = Vec::with_capacity(rows.len());
    for row in rows {
        // rows of Q are conjugated basis vectors; orthonormalize the vectors
        let v: Vec<GaussianRational> = row.iter().map(|x| x.conj()).collect();
        let w = subtract_projections(&v, &basis);
        let nn = norm_sqr_vec(&w);
        if nn.is_zero() {
            return None;
        }
        let norm = rational_sqrt(&nn)?;
        let inv = GaussianRational::from_rational(norm).inv().expect("norm > 0");
        basis.push(w.iter().map(|x| x.mul(&inv)).collect());
    }
    Some(
        basis
            .into_iter()
            .map(|u| u.into_iter().map(|x| x.conj()).collect())
            .collect(),
    )
}

fn verify_exact_diagonalization(a: &ScalarMatrix, q: &ScalarMatrix, r: usize) -> Result<()> {
    let id = ScalarMatrix::identity(a.size, true);
    if !q.mul(&q.adjoint())?.sub(&id)?.is_zero_within(0.0) {
        return Err(exact_unavailable());
    }
    let target = ScalarMatrix::standard_projector(a.size, r, true);
    if !q.mul(a)?.mul(&q.adjoint())?.sub(&target)?.is_zero_within(0.0) {
        return Err(exact_unavailable());
    }
    Ok(())
}

fn diagonalize_numeric(a: &ScalarMatrix, tol: f64) -> Result<(ScalarMatrix, usize)> {
    let n = a.size;
    let a = a.to_numeric();
    let check_tol = tol.max(1e-12);
    if a.mul(&a)?.sub(&a)?.max_abs() > check_tol {
        return Err(Error::NotAProjector(format!(
            "|A^2 - A| = {:.3e} exceeds {check_tol:.3e}",
            a.mul(&a)?.sub(&a)?.max_abs()
        )));
    }
    if a.sub(&a.adjoint())?.max_abs() > check_tol {
        return Err(Error::NotHermitian(format!(
            "|A - A*| = {:.3e} exceeds {check_tol:.3e}",
            a.sub(&a.adjoint())?.max_abs()
        )));
    }
    let tr = a.trace();
    let r = tr.re.round();
    if (tr.re - r).abs() > 0.1 || tr.im.abs() > 0.1 || r < 0.0 || r > n as f64 {
        return Err(Error::NotAProjector(format!(
            "trace {tr} of the constant part is not close to an integer rank"
        )));
    }
    let r = r as usize;

    let id = ScalarMatrix::identity(n, false);
    let complement = id.sub(&a)?;
    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    for (source, want) in [(&a, r), (&complement, n - r)] {
        let mut taken = 0;
        let cols: Vec<Vec<Complex64>> = (0..n)
            .map(|c| (0..n).map(|row| source.numeric_entry(row, c)).collect())
            .collect();
        let mut residuals: Vec<Vec<Complex64>> = cols;
        while taken < want {
            for w in residuals.iter_mut() {
                *w = subtract_projections_num(w, &basis);
            }
            let (best, norm) = residuals
                .iter()
                .enumerate()
                .map(|(i, w)| (i, norm_num(w)))
                .max_by(|x, y| x.1.total_cmp(&y.1))
                .ok_or_else(|| Error::Internal("empty pivot pool".into()))?;
            if norm < 1e-7 {
                return Err(Error::NotAProjector(
                    "numeric pivoting found fewer independent columns than the trace rank".into(),
                ));
            }
            let w = residuals.remove(best);
            basis.push(w.iter().map(|x| x / norm).collect());
            taken += 1;
        }
    }

    let mut entries = Vec::with_capacity(n * n);
    for u in &basis {
        for x in u {
            entries.push(x.conj());
        }
    }
    let q = ScalarMatrix::from_numeric(n, entries)?;

    let verify_tol = tol.max(1e-10);
    let id = ScalarMatrix::identity(n, false);
    let target = ScalarMatrix::standard_projector(n, r, false);
    if q.mul(&q.adjoint())?.sub(&id)?.max_abs() > verify_tol
        || q.mul(&a)?.mul(&q.adjoint())?.sub(&target)?.max_abs() > verify_tol
    {
        return Err(Error::NotAProjector(
            "numeric diagonalization failed to verify; the input is too far from a projector"
                .into(),
        ));
    }
    Ok((q, r))
}

fn subtract_projections_num(v: &[Complex64], basis: &[Vec<Complex64>]) -> Vec<Complex64> {
    let mut w = v.to_vec();
    for u in basis {
        let c: Complex64 = u.iter().zip(w.iter()).map(|(ui, wi)| ui.conj() * wi).sum();
        for (wi, ui) in w.iter_mut().zip(u) {
            *wi -= c * ui;
        }
    }
    w
}

fn norm_num(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::parse_element;

    fn gr(num: i64, den: i64) -> GaussianRational {
        GaussianRational::from_integers(num, den)
    }

    #[test]
    fn scalar_part_drops_positive_degree() {
        let sig = AlgebraSignature::exact(2, 4).unwrap();
        let mut m = AlgMatrix::zero(sig.clone(), 2);
        m.set_entry(0, 0, parse_element("1/2 + z1", &sig).unwrap()).unwrap();
        m.set_entry(0, 1, parse_element("z2*zb1", &sig).unwrap()).unwrap();
        let s = scalar_part(&m).unwrap();
        assert_eq!(s.exact_entry(0, 0).unwrap(), &gr(1, 2));
        assert!(s.exact_entry(0, 1).unwrap().is_zero());
        assert!(s.exact_entry(1, 1).unwrap().is_zero());
    }

    #[test]
    fn scalar_part_is_multiplicative_on_the_degree_zero_block() {
        let sig = AlgebraSignature::exact(2, 4).unwrap();
        let mut p = AlgMatrix::zero(sig.clone(), 2);
        p.set_entry(0, 0, parse_element("1/2 + z1", &sig).unwrap()).unwrap();
        p.set_entry(1, 0, parse_element("i + zb2", &sig).unwrap()).unwrap();
        p.set_entry(1, 1, parse_element("3", &sig).unwrap()).unwrap();
        let q = p.adjoint();
        let lhs = scalar_part(&p.mul(&q, None).unwrap()).unwrap();
        let rhs = scalar_part(&p).unwrap().mul(&scalar_part(&q).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn scalar_part_rejects_constant_phase_units() {
        let sig = AlgebraSignature::exact(2, 4).unwrap();
        let mut m = AlgMatrix::zero(sig.clone(), 1);
        m.set_entry(0, 0, parse_element("L[2,1]", &sig).unwrap()).unwrap();
        assert!(matches!(
            scalar_part(&m),
            Err(Error::ExactDiagonalizationUnavailable(_))
        ));
    }

    #[test]
    fn exact_diagonalization_of_standard_forms() {
        let a = ScalarMatrix::standard_projector(3, 2, true);
        let (q, r) = diagonalize_scalar_projector(&a, 0.0).unwrap();
        assert_eq!(r, 2);
        assert_eq!(q, ScalarMatrix::identity(3, true));

        let zero = ScalarMatrix::zero(2, true);
        let (q, r) = diagonalize_scalar_projector(&zero, 0.0).unwrap();
        assert_eq!(r, 0);
        assert_eq!(q, ScalarMatrix::identity(2, true));
    }

    #[test]
    fn exact_diagonalization_of_a_permuted_projector() {
        // diag(0, 1): rank 1, Q is the swap permutation
        let a = ScalarMatrix::from_exact(
            2,
            vec![gr(0, 1), gr(0, 1), gr(0, 1), gr(1, 1)],
        )
        .unwrap();
        let (q, r) = diagonalize_scalar_projector(&a, 0.0).unwrap();
        assert_eq!(r, 1);
        verify_exact_diagonalization(&a, &q, r).unwrap();
    }

    #[test]
    fn exact_diagonalization_with_rational_rotation() {
        // projector onto span of (3/5, 4/5): entries (9/25, 12/25; 12/25, 16/25)
        let a = ScalarMatrix::from_exact(
            2,
            vec![gr(9, 25), gr(12, 25), gr(12, 25), gr(16, 25)],
        )
        .unwrap();
        let (q, r) = diagonalize_scalar_projector(&a, 0.0).unwrap();
        assert_eq!(r, 1);
        verify_exact_diagonalization(&a, &q, r).unwrap();
    }

    #[test]
    fn exact_diagonalization_with_complex_entries() {
        // projector onto span of (3/5, 4i/5)
        let i4 = GaussianRational::new(BigRational::zero(), BigRational::new(4.into(), 5.into()));
        let v = [GaussianRational::from_integers(3, 5), i4];
        let mut entries = Vec::new();
        for a in &v {
            for b in &v {
                entries.push(a.mul(&b.conj()));
            }
        }
        let a = ScalarMatrix::from_exact(2, entries).unwrap();
        let (q, r) = diagonalize_scalar_projector(&a, 0.0).unwrap();
        assert_eq!(r, 1);
        verify_exact_diagonalization(&a, &q, r).unwrap();
    }

    #[test]
    fn averaging_projector_needs_numeric_mode() {
        let a = ScalarMatrix::from_exact(
            2,
            vec![gr(1, 2), gr(1, 2), gr(1, 2), gr(1, 2)],
        )
        .unwrap();
        assert!(matches!(
            diagonalize_scalar_projector(&a, 0.0),
            Err(Error::ExactDiagonalizationUnavailable(_))
        ));

        let (q, r) = diagonalize_scalar_projector(&a.to_numeric(), 1e-9).unwrap();
        assert_eq!(r, 1);
        // first row rotates (1,1)/sqrt(2) to e1
        let s = 0.5f64.sqrt();
        assert!((q.numeric_entry(0, 0).norm() - s).abs() < 1e-12);
        assert!((q.numeric_entry(0, 1).norm() - s).abs() < 1e-12);
    }

    #[test]
    fn non_projectors_are_rejected() {
        let a = ScalarMatrix::from_exact(1, vec![gr(1, 3)]).unwrap();
        assert!(matches!(
            diagonalize_scalar_projector(&a, 0.0),
            Err(Error::NotAProjector(_))
        ));
        let b = ScalarMatrix::from_exact(
            2,
            vec![gr(1, 1), gr(1, 1), gr(0, 1), gr(0, 1)],
        )
        .unwrap();
        assert!(matches!(
            diagonalize_scalar_projector(&b, 0.0),
            Err(Error::NotAProjector(_)) | Err(Error::NotHermitian(_))
        ));
    }

    #[test]
    fn embedding_matches_modes() {
        let sig = AlgebraSignature::exact(2, 4).unwrap();
        let a = ScalarMatrix::standard_projector(2, 1, true);
        let m = a.embed(&sig).unwrap();
        assert!(m.entry(0, 0).is_one());
        assert!(m.entry(1, 1).is_zero());

        let numeric = a.to_numeric();
        assert!(matches!(
            numeric.embed(&sig),
            Err(Error::SignatureMismatch(_))
        ));
    }
}
