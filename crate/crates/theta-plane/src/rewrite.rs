//! Multiplication by explicit generator-word rewriting.
//!
//! This is the slow, relation-by-relation route: concatenate the generator
//! words of two monomials and bubble the result into normal order, applying
//! one defining relation per adjacent transposition. The closed-form product
//! in `MultiIndex::twisted_mul` must agree with it everywhere; the property
//! tests treat this module as the ground truth.

use crate::element::Element;
use crate::error::Result;
use crate::index::MultiIndex;
use crate::phase::PhaseWord;

/// One generator occurrence, coordinates 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Letter {
    Z(u32),
    Zb(u32),
    X,
}

impl Letter {
    /// Position class in normal order: all Z first (by coordinate), then all
    /// Zb (by coordinate), then X.
    fn rank(&self) -> (u8, u32) {
        match self {
            Letter::Z(j) => (0, *j),
            Letter::Zb(j) => (1, *j),
            Letter::X => (2, 0),
        }
    }
}

/// The generator word of a normal-form monomial.
pub fn word_of(idx: &MultiIndex) -> Vec<Letter> {
    let mut word = Vec::with_capacity(idx.total_degree() as usize);
    for (j, &e) in idx.p().iter().enumerate() {
        word.extend(std::iter::repeat_n(Letter::Z(j as u32 + 1), e as usize));
    }
    for (j, &e) in idx.q().iter().enumerate() {
        word.extend(std::iter::repeat_n(Letter::Zb(j as u32 + 1), e as usize));
    }
    word.extend(std::iter::repeat_n(Letter::X, idx.t() as usize));
    word
}

/// The generator word of the adjoint of a monomial, before reordering:
/// reverse the word and swap each generator with its conjugate (x is fixed).
pub fn star_word(idx: &MultiIndex) -> Vec<Letter> {
    word_of(idx)
        .into_iter()
        .rev()
        .map(|g| match g {
            Letter::Z(j) => Letter::Zb(j),
            Letter::Zb(j) => Letter::Z(j),
            Letter::X => Letter::X,
        })
        .collect()
}

/// Sorts a word into normal order with leftmost-first adjacent swaps,
/// accumulating one relation phase per swap. Returns the phase word and the
/// exponent vector of the sorted word.
pub fn normal_order(n: u32, mut word: Vec<Letter>) -> (PhaseWord, MultiIndex) {
    let mut phase = PhaseWord::identity(n);
    loop {
        let mut swapped = false;
        let mut i = 0;
        while i + 1 < word.len() {
            if word[i].rank() > word[i + 1].rank() {
                apply_swap_phase(&mut phase, word[i], word[i + 1]);
                word.swap(i, i + 1);
                swapped = true;
                // restart the scan so every swap is the leftmost available one
                break;
            }
            i += 1;
        }
        if !swapped {
            break;
        }
    }
    let mut p = vec![0u32; n as usize];
    let mut q = vec![0u32; n as usize];
    let mut t = 0u32;
    for g in &word {
        match g {
            Letter::Z(j) => p[(*j - 1) as usize] += 1,
            Letter::Zb(j) => q[(*j - 1) as usize] += 1,
            Letter::X => t += 1,
        }
    }
    (phase, MultiIndex::new(p, q, t))
}

/// Phase for exchanging the adjacent pair (left, right) -> (right, left).
///
/// The defining relations, read as rewrite rules toward normal order:
///   z_a z_b   = L[a,b] z_b z_a        (a > b)
///   zb_a zb_b = L[a,b] zb_b zb_a      (a > b)
///   zb_a z_b  = L[b,a] z_b zb_a       (any a, b; L[b,a] = 1 when a = b)
///   x g       = g x                   (no phase)
fn apply_swap_phase(phase: &mut PhaseWord, left: Letter, right: Letter) {
    match (left, right) {
        (Letter::Z(a), Letter::Z(b)) | (Letter::Zb(a), Letter::Zb(b)) => {
            phase
                .multiply_pair(a, b, 1)
                .expect("letters index valid coordinates");
        }
        (Letter::Zb(a), Letter::Z(b)) => {
            phase
                .multiply_pair(b, a, 1)
                .expect("letters index valid coordinates");
        }
        (Letter::X, _) => {}
        (l, r) => unreachable!("pair {l:?}, {r:?} is already in normal order"),
    }
}

/// Product of two elements computed purely by word rewriting.
pub fn mul_rewrite(a: &Element, b: &Element) -> Result<Element> {
    a.sig().check_same(b.sig())?;
    let n = a.sig().n();
    let theta = a.sig().theta();
    let mut out = Element::zero(a.sig().clone());
    for (ia, ca) in a.terms() {
        for (ib, cb) in b.terms() {
            let mut word = word_of(ia);
            word.extend(word_of(ib));
            let (phase, idx) = normal_order(n, word);
            let c = ca.mul(cb)?.apply_word(&phase, theta)?;
            let term = Element::monomial(a.sig().clone(), idx, Some(c))?;
            out = out.add(&term)?;
        }
    }
    Ok(out)
}

/// Adjoint computed purely by word rewriting.
pub fn star_rewrite(a: &Element) -> Result<Element> {
    let n = a.sig().n();
    let theta = a.sig().theta();
    let mut out = Element::zero(a.sig().clone());
    for (idx, c) in a.terms() {
        let (phase, sidx) = normal_order(n, star_word(idx));
        let sc = c.conj().apply_word(&phase, theta)?;
        let term = Element::monomial(a.sig().clone(), sidx, Some(sc))?;
        out = out.add(&term)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::element::AlgebraSignature;

    fn generators(sig: &AlgebraSignature) -> Vec<Element> {
        let mut gens = Vec::new();
        for j in 1..=sig.n() {
            gens.push(Element::z(sig.clone(), j).unwrap());
            gens.push(Element::zb(sig.clone(), j).unwrap());
        }
        if sig.has_central() {
            gens.push(Element::x(sig.clone()).unwrap());
        }
        gens
    }

    #[test]
    fn rewrite_agrees_with_the_closed_form_on_all_generator_pairs() {
        for sig in [
            AlgebraSignature::exact(3, 6).unwrap(),
            AlgebraSignature::exact(2, 5).unwrap(),
        ] {
            let gens = generators(&sig);
            for a in &gens {
                for b in &gens {
                    let fast = a.mul(b).unwrap();
                    let slow = mul_rewrite(a, b).unwrap();
                    assert_eq!(fast, slow, "generator pair disagreed");
                }
            }
        }
    }

    #[test]
    fn rewrite_agrees_on_a_degree_three_pair() {
        let sig = AlgebraSignature::exact(2, 4).unwrap();
        let z1 = Element::z(sig.clone(), 1).unwrap();
        let z2 = Element::z(sig.clone(), 2).unwrap();
        let zb1 = Element::zb(sig.clone(), 1).unwrap();
        let zb2 = Element::zb(sig, 2).unwrap();
        let a = z2.mul(&zb1).unwrap().mul(&z1).unwrap();
        let b = zb2.mul(&z2).unwrap().mul(&zb1).unwrap();
        assert_eq!(a.mul(&b).unwrap(), mul_rewrite(&a, &b).unwrap());
    }

    #[test]
    fn star_rewrite_matches_star() {
        let sig = AlgebraSignature::exact(3, 7).unwrap();
        let z1 = Element::z(sig.clone(), 1).unwrap();
        let z3 = Element::z(sig.clone(), 3).unwrap();
        let zb2 = Element::zb(sig.clone(), 2).unwrap();
        let x = Element::x(sig.clone()).unwrap();
        let e = z3
            .mul(&zb2)
            .unwrap()
            .mul(&z1)
            .unwrap()
            .mul(&x)
            .unwrap()
            .add(&z1)
            .unwrap();
        assert_eq!(e.star(), star_rewrite(&e).unwrap());
    }

    #[test]
    fn normal_order_counts_inverse_phase_for_conjugate_crossings() {
        // zb2 z1 -> L[2,1]^-1 z1 zb2
        let word = vec![Letter::Zb(2), Letter::Z(1)];
        let (phase, idx) = normal_order(2, word);
        assert_eq!(phase, PhaseWord::generator(2, 2, 1).unwrap().inverse());
        assert_eq!(idx, MultiIndex::new(vec![1, 0], vec![0, 1], 0));
    }
}
