//! Gaussian rationals: complex numbers with rational real and imaginary parts.

use num::complex::Complex64;
use num::rational::BigRational;
use num::traits::ToPrimitive;
use num::{BigInt, One, Signed, Zero};

/// Element of Q(i), kept in lowest terms with positive denominators.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GaussianRational {
    re: BigRational,
    im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussianRational { re, im }
    }

    pub fn from_rational(re: BigRational) -> Self {
        GaussianRational {
            re,
            im: BigRational::zero(),
        }
    }

    /// Small-integer convenience constructor: `num/den`.
    pub fn from_integers(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::from_rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn zero() -> Self {
        Self::from_rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Self::from_rational(BigRational::one())
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        GaussianRational {
            re: BigRational::zero(),
            im: BigRational::one(),
        }
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        GaussianRational {
            re: &self.re + &other.re,
            im: &self.im + &other.im,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        GaussianRational {
            re: &self.re - &other.re,
            im: &self.im - &other.im,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        GaussianRational {
            re: &self.re * &other.re - &self.im * &other.im,
            im: &self.re * &other.im + &self.im * &other.re,
        }
    }

    pub fn neg(&self) -> Self {
        GaussianRational {
            re: -self.re.clone(),
            im: -self.im.clone(),
        }
    }

    pub fn conj(&self) -> Self {
        GaussianRational {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    /// |z|^2 as an exact rational.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// |re| + |im|, an exact upper bound for |z| up to a factor sqrt(2).
    pub fn l1_norm(&self) -> BigRational {
        self.re.abs() + self.im.abs()
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(GaussianRational {
            re: &self.re / &n,
            im: -&self.im / &n,
        })
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(rational_to_f64(&self.re), rational_to_f64(&self.im))
    }
}

/// Rounds a big rational to the nearest f64.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// The exact rational value of a finite f64.
pub fn f64_to_rational(x: f64) -> Option<BigRational> {
    BigRational::from_float(x)
}

/// Best rational approximation to `x` with |x - p/q| <= tol, found by walking
/// the continued-fraction convergents. Returns the first convergent within
/// tolerance, which also has the smallest denominator among all such rationals.
pub fn rationalize(x: f64, tol: f64) -> Option<BigRational> {
    if !x.is_finite() {
        return None;
    }
    let target = f64_to_rational(x)?;
    let tol_r = f64_to_rational(tol.abs())?;
    let mut frac = target.clone();
    // convergents p_k/q_k
    let mut p_prev = BigInt::one();
    let mut p_cur = frac.to_integer();
    let mut q_prev = BigInt::zero();
    let mut q_cur = BigInt::one();
    for _ in 0..64 {
        let approx = BigRational::new(p_cur.clone(), q_cur.clone());
        if (&approx - &target).abs() <= tol_r {
            return Some(approx);
        }
        let rem = &frac - frac.trunc();
        if rem.is_zero() {
            return Some(approx);
        }
        frac = rem.recip();
        let a = frac.to_integer();
        let p_next = &a * &p_cur + &p_prev;
        let q_next = &a * &q_cur + &q_prev;
        p_prev = p_cur;
        p_cur = p_next;
        q_prev = q_cur;
        q_cur = q_next;
    }
    let approx = BigRational::new(p_cur, q_cur);
    ((&approx - &target).abs() <= tol_r).then_some(approx)
}

impl std::fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "{}i", self.im)
        } else {
            write!(f, "{}{}{}i", self.re, if self.im.is_negative() { "" } else { "+" }, self.im)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(re_n: i64, re_d: i64, im_n: i64, im_d: i64) -> GaussianRational {
        GaussianRational::new(
            BigRational::new(BigInt::from(re_n), BigInt::from(re_d)),
            BigRational::new(BigInt::from(im_n), BigInt::from(im_d)),
        )
    }

    #[test]
    fn product_of_conjugate_pair_is_real() {
        let a = g(1, 1, 1, 1); // 1 + i
        let b = a.conj(); // 1 - i
        assert_eq!(a.mul(&b), GaussianRational::from_integers(2, 1));
    }

    #[test]
    fn lowest_terms_are_canonical() {
        let a = GaussianRational::from_integers(2, 4);
        let b = GaussianRational::from_integers(1, 2);
        assert_eq!(a, b);
        let c = GaussianRational::from_integers(1, -2);
        assert_eq!(c, GaussianRational::from_integers(-1, 2));
    }

    #[test]
    fn i_squared_is_minus_one() {
        let i = GaussianRational::i();
        assert_eq!(i.mul(&i), GaussianRational::from_integers(-1, 1));
    }

    #[test]
    fn norm_and_inverse() {
        let a = g(3, 5, 4, 5);
        assert_eq!(a.norm_sqr(), BigRational::one());
        let inv = a.inv().unwrap();
        assert_eq!(a.mul(&inv), GaussianRational::one());
        assert!(GaussianRational::zero().inv().is_none());
    }

    #[test]
    fn rationalize_recovers_simple_fractions() {
        assert_eq!(rationalize(0.6, 1e-12).unwrap(), BigRational::new(BigInt::from(3), BigInt::from(5)));
        assert_eq!(rationalize(-0.75, 1e-12).unwrap(), BigRational::new(BigInt::from(-3), BigInt::from(4)));
        assert_eq!(rationalize(0.0, 1e-12).unwrap(), BigRational::zero());
        let third = rationalize(1.0 / 3.0, 1e-9).unwrap();
        assert_eq!(third, BigRational::new(BigInt::from(1), BigInt::from(3)));
    }

    #[test]
    fn f64_round_trip_is_exact() {
        for x in [0.1, -2.375, 1.0 / 3.0, 6.02e23] {
            let r = f64_to_rational(x).unwrap();
            assert_eq!(rational_to_f64(&r), x);
        }
    }
}
