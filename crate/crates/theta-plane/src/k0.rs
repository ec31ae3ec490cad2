//! K-theory classes of projector matrices. Over this algebra the class of a
//! projector is determined by a single integer (its rank after
//! trivialization), and direct sums add ranks.

use crate::error::{Error, Result};
use crate::matrix::{AlgMatrix, JetContext};
use crate::scalar_matrix::scalar_part;
use crate::trivialize::trivialize;
use num::complex::Complex64;
use num::Zero;

/// The class of a projector in the K₀ group, which here is infinite cyclic
/// with the rank-one free module as generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct K0Class(pub i64);

impl K0Class {
    pub fn rank(self) -> i64 {
        self.0
    }
}

impl std::ops::Add for K0Class {
    type Output = K0Class;
    fn add(self, rhs: K0Class) -> K0Class {
        K0Class(self.0 + rhs.0)
    }
}

impl std::ops::Sub for K0Class {
    type Output = K0Class;
    fn sub(self, rhs: K0Class) -> K0Class {
        K0Class(self.0 - rhs.0)
    }
}

impl std::fmt::Display for K0Class {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Computes the class of a projector. An exact projector with no positive
/// degree terms is handled by its trace; everything else goes through the
/// trivialization, whose rank is the class.
pub fn k0_class(p: &AlgMatrix, ctx: &JetContext) -> Result<K0Class> {
    if !p.is_projector(ctx)? {
        return Err(Error::NotAProjector(format!(
            "input fails the projector check modulo degree {} (tol {})",
            ctx.degree, ctx.tol
        )));
    }
    if p.sig().is_exact() && p.degree() <= 0 {
        let tr = scalar_part(p)?.trace();
        return rank_from_trace(tr, p.size());
    }
    let out = trivialize(p, ctx)?;
    Ok(K0Class(out.rank as i64))
}

/// Two projectors lie in the same class exactly when their ranks agree; they
/// need not have the same matrix size.
pub fn equivalent(p: &AlgMatrix, q: &AlgMatrix, ctx: &JetContext) -> Result<bool> {
    Ok(k0_class(p, ctx)? == k0_class(q, ctx)?)
}

fn rank_from_trace(tr: Complex64, size: usize) -> Result<K0Class> {
    if !tr.im.is_zero() || !tr.re.is_finite() {
        return Err(Error::NotAProjector(format!(
            "projector trace must be a real integer, got {tr}"
        )));
    }
    let rounded = tr.re.round();
    if (tr.re - rounded).abs() > 1e-9 || rounded < 0.0 || rounded > size as f64 {
        return Err(Error::NotAProjector(format!(
            "projector trace must be an integer in 0..={size}, got {}",
            tr.re
        )));
    }
    Ok(K0Class(rounded as i64))
}
