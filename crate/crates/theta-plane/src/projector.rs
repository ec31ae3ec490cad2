//! Projector coefficient analysis: the Gram identity on rows, the check that
//! exact projectors are constant, and a mechanical replay of the
//! support-elimination argument behind that fact.

use crate::element::AlgebraSignature;
use crate::error::{Error, Result};
use crate::index::MultiIndex;
use crate::matrix::AlgMatrix;
use crate::phase::PhaseWord;
use crate::scalar::Coeff;
use std::collections::{BTreeMap, BTreeSet};

/// Coefficient of z^M z̄^M in Σ_l p_{k,l}·star(p_{k,l}), computed two ways:
/// once by direct multiplication, once as a phase-weighted sum over index
/// pairs (the splits p+q = M plus cross terms). The two must agree exactly;
/// disagreement means the twisted arithmetic itself is broken. `row` is
/// 0-based.
pub fn top_gram_check(p: &AlgMatrix, row: usize, m_target: &[u32]) -> Result<Coeff> {
    let sig = p.sig();
    if !sig.is_exact() {
        return Err(Error::SignatureMismatch(
            "the Gram check needs exact coefficients".into(),
        ));
    }
    if m_target.len() != sig.n() as usize {
        return Err(Error::ShapeMismatch(format!(
            "index vector has {} components, the algebra has {}",
            m_target.len(),
            sig.n()
        )));
    }
    if row >= p.size() {
        return Err(Error::ShapeMismatch(format!(
            "row {row} outside a {0}x{0} matrix",
            p.size()
        )));
    }

    let target = MultiIndex::new(m_target.to_vec(), m_target.to_vec(), 0);

    // route (i): multiply and read the coefficient
    let mut direct = sig.coeff_zero();
    for l in 0..p.size() {
        let e = p.entry(row, l);
        let prod = e.mul(&e.star())?;
        direct = direct.add(&prod.coeff_or_zero(&target))?;
    }

    // route (ii): enumerate coefficient pairs of each entry
    let mut paired = sig.coeff_zero();
    for l in 0..p.size() {
        let e = p.entry(row, l);
        for (ma, ca) in e.terms() {
            for (mb, cb) in e.terms() {
                let fits = (0..sig.n() as usize).all(|j| {
                    ma.p()[j] + mb.q()[j] == m_target[j] && ma.q()[j] + mb.p()[j] == m_target[j]
                }) && ma.t() + mb.t() == 0;
                if !fits {
                    continue;
                }
                let (star_phase, swapped) = mb.star_data();
                let (mul_phase, _) = ma.twisted_mul(&swapped)?;
                let word = star_phase.mul(&mul_phase)?;
                let term = ca.mul(&cb.conj())?.apply_word(&word, None)?;
                paired = paired.add(&term)?;
            }
        }
    }

    if !direct.add(&paired.neg())?.is_zero() {
        return Err(Error::Internal(format!(
            "Gram coefficient mismatch at row {row}: direct and pairwise sums disagree"
        )));
    }
    Ok(direct)
}

/// For an exactly verified projector (P = P* = P·P with no truncation),
/// collects every positive-degree coefficient; the returned list is empty
/// unless the arithmetic is broken, since such projectors are constant.
pub fn assert_scalar_projector_poly(
    p: &AlgMatrix,
) -> Result<Vec<(usize, usize, MultiIndex)>> {
    if !p.sig().is_exact() {
        return Err(Error::SignatureMismatch(
            "constancy of projectors is an exact-mode statement".into(),
        ));
    }
    let sq = p.mul(p, None)?;
    if sq != *p || p.adjoint() != *p {
        return Err(Error::NotAProjector(
            "input is not an exact projector (P·P = P = P* fails without truncation)".into(),
        ));
    }
    let mut violations = Vec::new();
    for ((r, c), e) in p.entries() {
        for (idx, _) in e.terms() {
            if idx.total_degree() > 0 {
                violations.push((r, c, idx.clone()));
            }
        }
    }
    Ok(violations)
}

/// Summary of a completed support-elimination run.
#[derive(Clone, Debug, PartialEq)]
pub struct RigidityReport {
    pub n: u32,
    pub m: u32,
    pub max_degree: u32,
    pub classes_eliminated: usize,
    pub pairs_inspected: usize,
}

/// Replays, with every step verified by enumeration, the argument that an
/// exact projector supported in degrees ≤ `max_degree` has no positive-degree
/// coefficients — for any matrix size at once.
///
/// The row identity p_{k,k} = Σ_l p_{k,l}·star(p_{k,l}) is read off at the
/// monomial z^M z̄^M x^{2T}. Candidate support indices are grouped into classes
/// by (p+q, t); classes are processed by descending degree, then descending
/// lexicographic key. For the current class the routine enumerates every index
/// pair that could contribute to that monomial and checks that each one is
/// either (a) the diagonal pair of a current-class member — all of which carry
/// the same phase word, ∏ λ_{r,s}^{M_r M_s}, so their sum is a positive
/// combination that forces the coefficients to vanish — or (b) involves an
/// index eliminated earlier. The left-hand-side index (M,M,2T) must itself be
/// eliminated or out of range. Any other outcome is an error: the elimination
/// claim would be unsound.
pub fn rigidity_scan(n: u32, m: u32, max_degree: u32) -> Result<RigidityReport> {
    let sig = AlgebraSignature::exact(n, m)?;
    let odd = sig.has_central();
    if max_degree == 0 {
        return Ok(RigidityReport {
            n,
            m,
            max_degree,
            classes_eliminated: 0,
            pairs_inspected: 0,
        });
    }

    let universe = enumerate_indices(n, odd, max_degree);

    // class key: (p+q, t)
    let class_key = |idx: &MultiIndex| -> (Vec<u32>, u32) {
        let sum: Vec<u32> = idx.p().iter().zip(idx.q()).map(|(a, b)| a + b).collect();
        (sum, idx.t())
    };
    let mut classes: BTreeMap<(Vec<u32>, u32), Vec<MultiIndex>> = BTreeMap::new();
    for idx in &universe {
        if idx.total_degree() > 0 {
            classes.entry(class_key(idx)).or_default().push(idx.clone());
        }
    }

    // descending degree, then descending lexicographic key
    let mut order: Vec<(Vec<u32>, u32)> = classes.keys().cloned().collect();
    order.sort_by(|a, b| {
        let deg = |k: &(Vec<u32>, u32)| k.0.iter().sum::<u32>() + k.1;
        deg(b).cmp(&deg(a)).then_with(|| b.cmp(a))
    });

    let mut killed: BTreeSet<MultiIndex> = BTreeSet::new();
    let mut pairs_inspected = 0usize;

    for key in &order {
        let (m_vec, t_half) = key;
        let members = &classes[key];

        // the common phase word every diagonal pair must carry
        let mut expected = PhaseWord::identity(n);
        for k in 2..=n {
            for l in 1..k {
                let e = i64::from(m_vec[(k - 1) as usize]) * i64::from(m_vec[(l - 1) as usize]);
                expected.multiply_pair(k, l, e)?;
            }
        }

        for a in &universe {
            for b in &universe {
                let fits = (0..n as usize)
                    .all(|j| a.p()[j] + b.q()[j] == m_vec[j] && a.q()[j] + b.p()[j] == m_vec[j])
                    && a.t() + b.t() == 2 * t_half;
                if !fits {
                    continue;
                }
                pairs_inspected += 1;
                if killed.contains(a) || killed.contains(b) {
                    continue;
                }
                if a != b || class_key(a) != *key {
                    return Err(Error::Internal(format!(
                        "support elimination is unsound at class ({m_vec:?}, {t_half}): \
                         live contribution from the pair {a:?}, {b:?}"
                    )));
                }
                let (star_phase, swapped) = a.star_data();
                let (mul_phase, _) = a.twisted_mul(&swapped)?;
                let word = star_phase.mul(&mul_phase)?;
                if word != expected {
                    return Err(Error::Internal(format!(
                        "diagonal pair of {a:?} carries an unexpected phase word"
                    )));
                }
            }
        }

        // the left-hand side's own coefficient at (M, M, 2T)
        let lhs = MultiIndex::new(m_vec.clone(), m_vec.clone(), 2 * t_half);
        if lhs.total_degree() <= max_degree && !killed.contains(&lhs) {
            return Err(Error::Internal(format!(
                "support elimination is unsound at class ({m_vec:?}, {t_half}): \
                 the diagonal-entry coefficient {lhs:?} is still live"
            )));
        }

        for member in members {
            killed.insert(member.clone());
        }
    }

    let positive: usize = universe.iter().filter(|i| i.total_degree() > 0).count();
    if killed.len() != positive {
        return Err(Error::Internal(
            "support elimination terminated without clearing all positive degrees".into(),
        ));
    }

    Ok(RigidityReport {
        n,
        m,
        max_degree,
        classes_eliminated: order.len(),
        pairs_inspected,
    })
}

/// Every index of total degree ≤ `dmax` (t fixed to 0 without a central
/// generator).
fn enumerate_indices(n: u32, odd: bool, dmax: u32) -> Vec<MultiIndex> {
    let slots = 2 * n as usize + usize::from(odd);
    let mut out = Vec::new();
    let mut current = vec![0u32; slots];
    fill(&mut out, &mut current, 0, dmax, n as usize, odd);
    out
}

fn fill(
    out: &mut Vec<MultiIndex>,
    current: &mut Vec<u32>,
    slot: usize,
    budget: u32,
    n: usize,
    odd: bool,
) {
    if slot == current.len() {
        let p = current[..n].to_vec();
        let q = current[n..2 * n].to_vec();
        let t = if odd { current[2 * n] } else { 0 };
        out.push(MultiIndex::new(p, q, t));
        return;
    }
    for v in 0..=budget {
        current[slot] = v;
        fill(out, current, slot + 1, budget - v, n, odd);
    }
    current[slot] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::element::Element;
    use crate::text::parse_element;

    fn sig(n: u32, m: u32) -> AlgebraSignature {
        AlgebraSignature::exact(n, m).unwrap()
    }

    fn elem(s: &AlgebraSignature, t: &str) -> Element {
        parse_element(t, s).unwrap()
    }

    #[test]
    fn gram_coefficient_of_a_single_generator() {
        let s = sig(1, 2);
        let p = AlgMatrix::from_entries(s.clone(), 1, vec![elem(&s, "z1 + zb1")]).unwrap();
        // z1*zb1 in (z1+zb1)(zb1+z1): z1·zb1 and zb1·z1 both land there → 2
        let c = top_gram_check(&p, 0, &[1]).unwrap();
        assert_eq!(c, elem(&s, "2").constant_coeff());

        let constant = AlgMatrix::from_entries(s.clone(), 1, vec![elem(&s, "1")]).unwrap();
        assert!(top_gram_check(&constant, 0, &[1]).unwrap().is_zero());

        let single = AlgMatrix::from_entries(s.clone(), 1, vec![elem(&s, "z1")]).unwrap();
        assert_eq!(top_gram_check(&single, 0, &[1]).unwrap(), s.coeff_one());
    }

    #[test]
    fn gram_routes_agree_on_hermitian_matrices() {
        let s = sig(2, 4);
        let h = AlgMatrix::from_entries(
            s.clone(),
            2,
            vec![
                elem(&s, "z1*zb1 + 2"),
                elem(&s, "z1^2 + i * z2 + L[2,1] * zb2"),
                elem(&s, "star(z1^2 + i * z2 + L[2,1] * zb2)"),
                elem(&s, "z2*zb2 - 1/3"),
            ],
        )
        .unwrap();
        assert!(h.is_self_adjoint(0.0));
        for m_vec in [[0, 0], [1, 0], [0, 1], [1, 1], [2, 0], [0, 2]] {
            // the assertion inside the call is the test
            top_gram_check(&h, 0, &m_vec).unwrap();
            top_gram_check(&h, 1, &m_vec).unwrap();
        }
        // pinned: (z1*zb1)·(z1*zb1) and z1^2·zb1^2 each contribute 1 at M=(2,0)
        let c = top_gram_check(&h, 0, &[2, 0]).unwrap();
        assert_eq!(c, elem(&s, "2").constant_coeff());
    }

    #[test]
    fn constant_projectors_have_no_positive_degree_terms() {
        let s = sig(2, 4);
        let p = AlgMatrix::standard_projector(s.clone(), 2, 1);
        assert!(assert_scalar_projector_poly(&p).unwrap().is_empty());

        let avg = AlgMatrix::from_entries(
            s.clone(),
            2,
            vec![
                elem(&s, "1/2"),
                elem(&s, "1/2"),
                elem(&s, "1/2"),
                elem(&s, "1/2"),
            ],
        )
        .unwrap();
        assert!(assert_scalar_projector_poly(&avg).unwrap().is_empty());
    }

    #[test]
    fn non_projectors_fail_the_precondition() {
        let s = sig(1, 2);
        let p = AlgMatrix::from_entries(s.clone(), 1, vec![elem(&s, "z1*zb1")]).unwrap();
        assert!(matches!(
            assert_scalar_projector_poly(&p),
            Err(Error::NotAProjector(_))
        ));
    }

    #[test]
    fn support_elimination_covers_small_planes() {
        for (n, m) in [(1, 2), (1, 3), (2, 4), (2, 5)] {
            let report = rigidity_scan(n, m, 2).unwrap();
            assert!(report.classes_eliminated > 0);
            assert!(report.pairs_inspected > 0);
        }
    }

    #[test]
    fn support_elimination_at_higher_degree() {
        let report = rigidity_scan(2, 4, 3).unwrap();
        assert!(report.classes_eliminated > report.n as usize);
    }

    #[test]
    fn index_enumeration_counts() {
        // degree ≤ 2 in 2 slots: C(2+2,2) = 6 compositions
        assert_eq!(enumerate_indices(1, false, 2).len(), 6);
        // 3 slots (odd m): C(3+2,2) = 10
        assert_eq!(enumerate_indices(1, true, 2).len(), 10);
    }
}
