//! Normal-form monomial exponents.
//!
//! A monomial is z_1^{p_1}..z_n^{p_n} zb_1^{q_1}..zb_n^{q_n} x^t, with the
//! central generator x present only when the algebra has an odd number of
//! real coordinates. The product of two normal-form monomials is again a
//! normal-form monomial times a single phase word; `twisted_mul` computes
//! that word directly from the exponents.

use crate::error::{Error, Result};
use crate::phase::PhaseWord;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiIndex {
    p: Vec<u32>,
    q: Vec<u32>,
    t: u32,
}

impl MultiIndex {
    pub fn new(p: Vec<u32>, q: Vec<u32>, t: u32) -> Self {
        assert_eq!(p.len(), q.len(), "holomorphic and conjugate exponent lists differ in length");
        MultiIndex { p, q, t }
    }

    pub fn constant(n: u32) -> Self {
        MultiIndex {
            p: vec![0; n as usize],
            q: vec![0; n as usize],
            t: 0,
        }
    }

    /// The generator z_j, 1-based.
    pub fn z(n: u32, j: u32) -> Result<Self> {
        if j == 0 || j > n {
            return Err(Error::GeneratorOutOfRange { index: j, n });
        }
        let mut m = Self::constant(n);
        m.p[(j - 1) as usize] = 1;
        Ok(m)
    }

    /// The generator zb_j, 1-based.
    pub fn zb(n: u32, j: u32) -> Result<Self> {
        if j == 0 || j > n {
            return Err(Error::GeneratorOutOfRange { index: j, n });
        }
        let mut m = Self::constant(n);
        m.q[(j - 1) as usize] = 1;
        Ok(m)
    }

    pub fn x(n: u32) -> Self {
        let mut m = Self::constant(n);
        m.t = 1;
        m
    }

    pub fn n(&self) -> u32 {
        self.p.len() as u32
    }

    pub fn p(&self) -> &[u32] {
        &self.p
    }

    pub fn q(&self) -> &[u32] {
        &self.q
    }

    pub fn t(&self) -> u32 {
        self.t
    }

    pub fn total_degree(&self) -> u32 {
        self.p.iter().sum::<u32>() + self.q.iter().sum::<u32>() + self.t
    }

    pub fn is_constant(&self) -> bool {
        self.total_degree() == 0
    }

    /// Swaps the holomorphic and conjugate exponents, as the adjoint does.
    pub fn swapped(&self) -> Self {
        MultiIndex {
            p: self.q.clone(),
            q: self.p.clone(),
            t: self.t,
        }
    }

    fn check_n(&self, other: &Self) -> Result<()> {
        if self.p.len() != other.p.len() {
            return Err(Error::SignatureMismatch(format!(
                "monomials over n={} and n={}",
                self.p.len(),
                other.p.len()
            )));
        }
        Ok(())
    }

    /// Componentwise sum of exponents (the product index, without the phase).
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_n(other)?;
        Ok(MultiIndex {
            p: self.p.iter().zip(&other.p).map(|(a, b)| a + b).collect(),
            q: self.q.iter().zip(&other.q).map(|(a, b)| a + b).collect(),
            t: self.t + other.t,
        })
    }

    /// Product of two normal-form monomials.
    ///
    /// Writing self = (p, q, t) and other = (r, s, u), the result index is
    /// (p + r, q + s, t + u) and the phase exponent at the pair (k, l) with
    /// l < k is p_k r_l + q_k s_l + r_k q_l - q_k r_l. The central generator
    /// contributes no phase.
    pub fn twisted_mul(&self, other: &Self) -> Result<(PhaseWord, MultiIndex)> {
        self.check_n(other)?;
        let n = self.p.len();
        let mut word = PhaseWord::identity(n as u32);
        for k in 1..n {
            for l in 0..k {
                let (pk, qk) = (self.p[k] as i64, self.q[k] as i64);
                let (rl, sl) = (other.p[l] as i64, other.q[l] as i64);
                let (rk, qll) = (other.p[k] as i64, self.q[l] as i64);
                let e = pk * rl + qk * sl + rk * qll - qk * rl;
                word.multiply_pair((k + 1) as u32, (l + 1) as u32, e)
                    .expect("pair indices are in range by construction");
            }
        }
        Ok((word, self.add(other)?))
    }

    /// Phase and index of the adjoint monomial: the adjoint of z^p zb^q x^t is
    /// the phase with exponent p_k p_l + q_k q_l at each pair l < k, times
    /// z^q zb^p x^t.
    pub fn star_data(&self) -> (PhaseWord, MultiIndex) {
        let n = self.p.len();
        let mut word = PhaseWord::identity(n as u32);
        for k in 1..n {
            for l in 0..k {
                let e = self.p[k] as i64 * self.p[l] as i64 + self.q[k] as i64 * self.q[l] as i64;
                word.multiply_pair((k + 1) as u32, (l + 1) as u32, e)
                    .expect("pair indices are in range by construction");
            }
        }
        (word, self.swapped())
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MultiIndex {
    /// Graded-lexicographic: total degree first; ties compare the monomial as
    /// a word in the alphabet z1 < .. < zn < zb1 < .. < zbn < x, so within a
    /// degree `z1^2` sorts before `z1*z2`. On exponent vectors that word
    /// comparison puts the larger entry first at the first difference.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| word_lex(&self.p, &other.p))
            .then_with(|| word_lex(&self.q, &other.q))
            .then_with(|| self.t.cmp(&other.t))
    }
}

fn word_lex(a: &[u32], b: &[u32]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        match y.cmp(x) {
            std::cmp::Ordering::Equal => continue,
            other => return other,
        }
    }
    b.len().cmp(&a.len())
}

/// All componentwise splits m = (p, q) with p + q equal to the given exponent
/// vector, in lexicographic order of p.
pub fn component_splits(m: &[u32]) -> Vec<(Vec<u32>, Vec<u32>)> {
    let mut out = Vec::new();
    let mut p = vec![0u32; m.len()];
    loop {
        let q: Vec<u32> = m.iter().zip(&p).map(|(total, a)| total - a).collect();
        out.push((p.clone(), q));
        // increment p within the box [0, m]
        let mut pos = m.len();
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            if p[pos] < m[pos] {
                p[pos] += 1;
                for slot in p.iter_mut().skip(pos + 1) {
                    *slot = 0;
                }
                break;
            }
        }
    }
}
