//! Square matrices over the deformed coordinate ring, with products optionally
//! truncated to a fixed jet degree.

use crate::element::{AlgebraSignature, Element};
use crate::error::{Error, Result};
use crate::text::{format_element, parse_element};
use crate::theta::ThetaMatrix;
use num::rational::BigRational;
use num::Zero;
use std::sync::Arc;

/// Truncation degree and the coefficient tolerance used by numeric-mode
/// comparisons. Exact-mode comparisons ignore `tol` and demand equality.
#[derive(Clone, Debug, PartialEq)]
pub struct JetContext {
    pub degree: u32,
    pub tol: f64,
}

impl JetContext {
    pub fn new(degree: u32, tol: f64) -> Result<Self> {
        if !tol.is_finite() || tol < 0.0 {
            return Err(Error::NonFinite);
        }
        Ok(JetContext { degree, tol })
    }

    pub fn exact(degree: u32) -> Self {
        JetContext { degree, tol: 0.0 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AlgMatrix {
    sig: AlgebraSignature,
    size: usize,
    entries: Vec<Element>, // row-major
}

impl AlgMatrix {
    pub fn zero(sig: AlgebraSignature, size: usize) -> Self {
        assert!(size > 0, "matrices have positive size");
        let entries = vec![Element::zero(sig.clone()); size * size];
        AlgMatrix { sig, size, entries }
    }

    pub fn identity(sig: AlgebraSignature, size: usize) -> Self {
        let mut m = AlgMatrix::zero(sig.clone(), size);
        for k in 0..size {
            m.entries[k * size + k] = Element::one(sig.clone());
        }
        m
    }

    pub fn from_entries(sig: AlgebraSignature, size: usize, entries: Vec<Element>) -> Result<Self> {
        if size == 0 || entries.len() != size * size {
            return Err(Error::ShapeMismatch(format!(
                "expected {size}x{size} = {} entries, got {}",
                size * size,
                entries.len()
            )));
        }
        for e in &entries {
            sig.check_same(e.sig())?;
        }
        Ok(AlgMatrix { sig, size, entries })
    }

    pub fn from_fn(
        sig: AlgebraSignature,
        size: usize,
        mut f: impl FnMut(usize, usize) -> Element,
    ) -> Result<Self> {
        let mut entries = Vec::with_capacity(size * size);
        for r in 0..size {
            for c in 0..size {
                entries.push(f(r, c));
            }
        }
        AlgMatrix::from_entries(sig, size, entries)
    }

    /// diag(1,..,1,0,..,0) with `rank` ones.
    pub fn standard_projector(sig: AlgebraSignature, size: usize, rank: usize) -> Self {
        assert!(rank <= size);
        let mut m = AlgMatrix::zero(sig.clone(), size);
        for k in 0..rank {
            m.entries[k * size + k] = Element::one(sig.clone());
        }
        m
    }

    pub fn sig(&self) -> &AlgebraSignature {
        &self.sig
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// 0-based access.
    pub fn entry(&self, row: usize, col: usize) -> &Element {
        &self.entries[row * self.size + col]
    }

    pub fn set_entry(&mut self, row: usize, col: usize, e: Element) -> Result<()> {
        self.sig.check_same(e.sig())?;
        self.entries[row * self.size + col] = e;
        Ok(())
    }

    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), &Element)> {
        let size = self.size;
        self.entries
            .iter()
            .enumerate()
            .map(move |(i, e)| ((i / size, i % size), e))
    }

    fn check_shapes(&self, other: &Self) -> Result<()> {
        self.sig.check_same(&other.sig)?;
        if self.size != other.size {
            return Err(Error::ShapeMismatch(format!(
                "{0}x{0} vs {1}x{1}",
                self.size, other.size
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_shapes(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.add(b))
            .collect::<Result<Vec<_>>>()?;
        AlgMatrix::from_entries(self.sig.clone(), self.size, entries)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_shapes(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.sub(b))
            .collect::<Result<Vec<_>>>()?;
        AlgMatrix::from_entries(self.sig.clone(), self.size, entries)
    }

    pub fn neg(&self) -> Self {
        AlgMatrix {
            sig: self.sig.clone(),
            size: self.size,
            entries: self.entries.iter().map(|e| e.neg()).collect(),
        }
    }

    pub fn scale(&self, s: &Element) -> Result<Self> {
        let entries = self
            .entries
            .iter()
            .map(|e| s.mul(e))
            .collect::<Result<Vec<_>>>()?;
        AlgMatrix::from_entries(self.sig.clone(), self.size, entries)
    }

    /// Matrix product; entries truncated to `ctx.degree` when a context is
    /// given.
    pub fn mul(&self, other: &Self, ctx: Option<&JetContext>) -> Result<Self> {
        self.check_shapes(other)?;
        let n = self.size;
        let mut entries = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                let mut acc = Element::zero(self.sig.clone());
                for j in 0..n {
                    let a = self.entry(r, j);
                    let b = other.entry(j, c);
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    acc = acc.add(&a.mul(b)?)?;
                }
                if let Some(ctx) = ctx {
                    acc = acc.truncate(ctx.degree);
                }
                entries.push(acc);
            }
        }
        AlgMatrix::from_entries(self.sig.clone(), self.size, entries)
    }

    /// Conjugate transpose: (A*)_{k,l} = star(A_{l,k}).
    pub fn adjoint(&self) -> Self {
        let n = self.size;
        let mut entries = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                entries.push(self.entry(c, r).star());
            }
        }
        AlgMatrix {
            sig: self.sig.clone(),
            size: n,
            entries,
        }
    }

    pub fn truncate(&self, degree: u32) -> Self {
        AlgMatrix {
            sig: self.sig.clone(),
            size: self.size,
            entries: self.entries.iter().map(|e| e.truncate(degree)).collect(),
        }
    }

    pub fn homogeneous_part(&self, degree: u32) -> Self {
        AlgMatrix {
            sig: self.sig.clone(),
            size: self.size,
            entries: self
                .entries
                .iter()
                .map(|e| e.homogeneous_part(degree))
                .collect(),
        }
    }

    /// Largest entry degree; −1 for the zero matrix.
    pub fn degree(&self) -> i64 {
        self.entries.iter().map(|e| e.degree()).max().unwrap_or(-1)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn is_zero_within(&self, tol: f64) -> bool {
        self.entries.iter().all(|e| e.is_zero_within(tol))
    }

    pub fn is_self_adjoint(&self, tol: f64) -> bool {
        self.sub(&self.adjoint())
            .map(|d| d.is_zero_within(tol))
            .unwrap_or(false)
    }

    /// Equality of truncations to `ctx.degree`, within `ctx.tol` in numeric
    /// mode.
    pub fn eq_mod(&self, other: &Self, ctx: &JetContext) -> bool {
        if self.check_shapes(other).is_err() {
            return false;
        }
        self.truncate(ctx.degree)
            .sub(&other.truncate(ctx.degree))
            .map(|d| d.is_zero_within(ctx.tol))
            .unwrap_or(false)
    }

    /// P·P ≡ P and P* ≡ P modulo degree > ctx.degree.
    pub fn is_projector(&self, ctx: &JetContext) -> Result<bool> {
        let p = self.truncate(ctx.degree);
        let sq = p.mul(&p, Some(ctx))?;
        Ok(sq.eq_mod(&p, ctx) && p.adjoint().eq_mod(&p, ctx))
    }

    /// U·U* ≡ I ≡ U*·U modulo degree > ctx.degree.
    pub fn is_unitary_mod(&self, ctx: &JetContext) -> Result<bool> {
        let id = AlgMatrix::identity(self.sig.clone(), self.size);
        let adj = self.adjoint();
        Ok(self.mul(&adj, Some(ctx))?.eq_mod(&id, ctx)
            && adj.mul(self, Some(ctx))?.eq_mod(&id, ctx))
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        self.sig.check_same(&other.sig)?;
        let n = self.size + other.size;
        let mut out = AlgMatrix::zero(self.sig.clone(), n);
        for ((r, c), e) in self.entries() {
            out.entries[r * n + c] = e.clone();
        }
        for ((r, c), e) in other.entries() {
            out.entries[(self.size + r) * n + (self.size + c)] = e.clone();
        }
        Ok(out)
    }

    /// Largest coefficient magnitude across entries (l1 bound in exact mode).
    pub fn max_magnitude_f64(&self) -> f64 {
        self.entries
            .iter()
            .map(|e| e.max_magnitude_f64())
            .fold(0.0, f64::max)
    }

    /// Exact mode: largest coefficient l1 bound, as a rational.
    pub fn max_l1_rational(&self) -> Option<BigRational> {
        if !self.sig.is_exact() {
            return None;
        }
        let mut best = BigRational::zero();
        for e in &self.entries {
            if let Some(b) = e.max_l1_rational() {
                if b > best {
                    best = b;
                }
            }
        }
        Some(best)
    }

    pub fn eval(&self, theta: &Arc<ThetaMatrix>) -> Result<Self> {
        let entries = self
            .entries
            .iter()
            .map(|e| e.eval(theta))
            .collect::<Result<Vec<_>>>()?;
        let sig = entries
            .first()
            .map(|e: &Element| e.sig().clone())
            .expect("matrices are nonempty");
        AlgMatrix::from_entries(sig, self.size, entries)
    }
}

// ---------------------------------------------------------------------------
// file form

/// Parses the line-based matrix file: a header `matrix N=<int> m=<int>
/// mode=<exact|numeric>` followed by `[k,l] <expr>` cell lines (1-based,
/// missing cells are zero). Numeric mode needs the deformation angles to
/// interpret coefficients.
pub fn parse_matrix(text: &str, theta: Option<Arc<ThetaMatrix>>) -> Result<AlgMatrix> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, raw)| {
            let body = match raw.find('#') {
                Some(p) => &raw[..p],
                None => raw,
            };
            (i + 1, body.trim())
        })
        .filter(|(_, body)| !body.is_empty());

    let (header_line, header) = lines
        .next()
        .ok_or_else(|| Error::Parse {
            pos: 0,
            msg: "empty matrix file".into(),
        })?;
    let (size, m, mode_word) = parse_matrix_header(header_line, header)?;
    let n = m / 2;
    let sig = match mode_word.as_str() {
        "exact" => AlgebraSignature::exact(n, m)?,
        "numeric" => {
            let theta = theta.ok_or(Error::MissingTheta)?;
            if theta.n() != n {
                return Err(Error::SignatureMismatch(format!(
                    "deformation matrix has n={}, file declares n={n}",
                    theta.n()
                )));
            }
            AlgebraSignature::numeric(m, theta)?
        }
        other => {
            return Err(Error::Parse {
                pos: header_line,
                msg: format!("line {header_line}: unknown mode `{other}`"),
            })
        }
    };

    let mut mat = AlgMatrix::zero(sig.clone(), size as usize);
    let mut seen = std::collections::BTreeSet::new();
    for (line_no, body) in lines {
        let rest = body.strip_prefix('[').ok_or_else(|| Error::Parse {
            pos: line_no,
            msg: format!("line {line_no}: expected `[k,l] <expr>`"),
        })?;
        let (cell, expr) = rest.split_once(']').ok_or_else(|| Error::Parse {
            pos: line_no,
            msg: format!("line {line_no}: unterminated cell index"),
        })?;
        let (k, l) = cell.split_once(',').ok_or_else(|| Error::Parse {
            pos: line_no,
            msg: format!("line {line_no}: cell index needs `k,l`"),
        })?;
        let k: usize = k.trim().parse().map_err(|_| Error::Parse {
            pos: line_no,
            msg: format!("line {line_no}: bad row index `{}`", k.trim()),
        })?;
        let l: usize = l.trim().parse().map_err(|_| Error::Parse {
            pos: line_no,
            msg: format!("line {line_no}: bad column index `{}`", l.trim()),
        })?;
        if k == 0 || l == 0 || k > size as usize || l > size as usize {
            return Err(Error::Parse {
                pos: line_no,
                msg: format!("line {line_no}: cell [{k},{l}] outside {size}x{size}"),
            });
        }
        if !seen.insert((k, l)) {
            return Err(Error::DuplicateCell {
                row: k,
                col: l,
                line: line_no,
            });
        }
        let e = parse_element(expr, &sig)?;
        mat.set_entry(k - 1, l - 1, e)?;
    }
    Ok(mat)
}

fn parse_matrix_header(line_no: usize, header: &str) -> Result<(u32, u32, String)> {
    let bad = |msg: String| Error::Parse {
        pos: line_no,
        msg: format!("line {line_no}: {msg}"),
    };
    let mut words = header.split_whitespace();
    if words.next() != Some("matrix") {
        return Err(bad("matrix files start with `matrix N=.. m=.. mode=..`".into()));
    }
    let mut size = None;
    let mut m = None;
    let mut mode = None;
    for w in words {
        let (key, value) = w
            .split_once('=')
            .ok_or_else(|| bad(format!("expected key=value, got `{w}`")))?;
        match key {
            "N" => {
                let v: u32 = value
                    .parse()
                    .map_err(|_| bad(format!("bad size `{value}`")))?;
                if v == 0 {
                    return Err(bad("size must be positive".into()));
                }
                size = Some(v);
            }
            "m" => {
                let v: u32 = value
                    .parse()
                    .map_err(|_| bad(format!("bad dimension `{value}`")))?;
                m = Some(v);
            }
            "mode" => mode = Some(value.to_string()),
            other => return Err(bad(format!("unknown header key `{other}`"))),
        }
    }
    match (size, m, mode) {
        (Some(s), Some(m), Some(mode)) => Ok((s, m, mode)),
        _ => Err(bad("header needs N=, m= and mode=".into())),
    }
}

pub fn format_matrix(mat: &AlgMatrix) -> String {
    let mode = if mat.sig().is_exact() { "exact" } else { "numeric" };
    let mut out = format!("matrix N={} m={} mode={mode}\n", mat.size(), mat.sig().m());
    for ((r, c), e) in mat.entries() {
        if !e.is_zero() {
            out.push_str(&format!("[{},{}] {}\n", r + 1, c + 1, format_element(e)));
        }
    }
    out
}

impl std::fmt::Display for AlgMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", format_matrix(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::element::Mode;

    fn sig() -> AlgebraSignature {
        AlgebraSignature::exact(2, 4).unwrap()
    }

    fn elem(s: &AlgebraSignature, text: &str) -> Element {
        parse_element(text, s).unwrap()
    }

    fn mat2(s: &AlgebraSignature, texts: [&str; 4]) -> AlgMatrix {
        AlgMatrix::from_entries(
            s.clone(),
            2,
            texts.iter().map(|t| elem(s, t)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn identity_is_neutral() {
        let s = sig();
        let a = mat2(&s, ["z1", "z2 + 1", "zb1", "0"]);
        let id = AlgMatrix::identity(s.clone(), 2);
        assert_eq!(id.mul(&a, None).unwrap(), a);
        assert_eq!(a.mul(&id, None).unwrap(), a);
    }

    #[test]
    fn product_matches_entrywise_expansion() {
        let s = sig();
        let a = mat2(&s, ["z1", "z2", "zb1", "zb2"]);
        let sq = a.mul(&a, None).unwrap();
        assert_eq!(sq.entry(0, 0), &elem(&s, "z1^2 + z2*zb1"));
        assert_eq!(sq.entry(0, 1), &elem(&s, "z1*z2 + z2*zb2"));
        assert_eq!(sq.entry(1, 0), &elem(&s, "zb1*z1 + zb2*zb1"));
        assert_eq!(sq.entry(1, 1), &elem(&s, "zb1*z2 + zb2^2"));
    }

    #[test]
    fn adjoint_is_transpose_of_star() {
        let s = sig();
        let a = mat2(&s, ["0", "z1", "0", "0"]);
        let adj = a.adjoint();
        assert!(adj.entry(0, 1).is_zero());
        assert_eq!(adj.entry(1, 0), &elem(&s, "zb1"));
        assert_eq!(adj.adjoint(), a);
    }

    #[test]
    fn adjoint_reverses_products() {
        let s = sig();
        let a = mat2(&s, ["z1", "z2", "1", "zb2"]);
        let b = mat2(&s, ["zb1", "0", "z1*z2", "i"]);
        let lhs = a.mul(&b, None).unwrap().adjoint();
        let rhs = b.adjoint().mul(&a.adjoint(), None).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn product_truncates_to_context_degree() {
        let s = sig();
        let a = mat2(&s, ["z1", "0", "0", "z2^2"]);
        let ctx = JetContext::exact(2);
        let sq = a.mul(&a, Some(&ctx)).unwrap();
        assert_eq!(sq.entry(0, 0), &elem(&s, "z1^2"));
        assert!(sq.entry(1, 1).is_zero()); // z2^4 dropped

        // truncating first then multiplying mod D agrees
        let both = a.truncate(2).mul(&a.truncate(2), Some(&ctx)).unwrap();
        assert!(both.eq_mod(&sq, &ctx));
    }

    #[test]
    fn projector_checks() {
        let s = sig();
        let ctx = JetContext::exact(4);
        assert!(AlgMatrix::standard_projector(s.clone(), 2, 1)
            .is_projector(&ctx)
            .unwrap());
        let not = mat2(&s, ["z1", "0", "0", "0"]);
        assert!(!not.is_projector(&ctx).unwrap());
        // hermitian but not idempotent
        let herm = mat2(&s, ["z1 + zb1", "0", "0", "0"]);
        assert!(!herm.is_projector(&ctx).unwrap());
    }

    #[test]
    fn diagonal_gram_identity_for_projectors() {
        // p_{k,k} = sum_l p_{k,l} star(p_{k,l}) for P = P* = P^2
        let s = sig();
        let p = mat2(&s, ["1/2", "1/2", "1/2", "1/2"]);
        let ctx = JetContext::exact(4);
        assert!(p.is_projector(&ctx).unwrap());
        for k in 0..2 {
            let mut sum = Element::zero(s.clone());
            for l in 0..2 {
                sum = sum
                    .add(&p.entry(k, l).mul(&p.entry(k, l).star()).unwrap())
                    .unwrap();
            }
            assert_eq!(&sum, p.entry(k, k));
        }
    }

    #[test]
    fn unitary_check_accepts_constant_rotation() {
        let s = sig();
        let ctx = JetContext::exact(3);
        let u = mat2(&s, ["3/5", "4/5", "-4/5", "3/5"]);
        assert!(u.is_unitary_mod(&ctx).unwrap());
        let not = mat2(&s, ["1", "z1", "0", "1"]);
        assert!(!not.is_unitary_mod(&ctx).unwrap());
    }

    #[test]
    fn direct_sum_blocks() {
        let s = sig();
        let p = AlgMatrix::standard_projector(s.clone(), 1, 1);
        let q = AlgMatrix::standard_projector(s.clone(), 2, 0);
        let d = p.direct_sum(&q).unwrap();
        assert_eq!(d.size(), 3);
        assert!(d.entry(0, 0).is_one());
        assert!(d.entry(1, 1).is_zero());
        let ctx = JetContext::exact(2);
        assert!(d.is_projector(&ctx).unwrap());
    }

    #[test]
    fn shape_and_signature_mismatches_are_rejected() {
        let s = sig();
        let a = AlgMatrix::identity(s.clone(), 2);
        let b = AlgMatrix::identity(s.clone(), 3);
        assert!(matches!(a.mul(&b, None), Err(Error::ShapeMismatch(_))));
        let other = AlgMatrix::identity(AlgebraSignature::exact(3, 6).unwrap(), 2);
        assert!(matches!(a.add(&other), Err(Error::SignatureMismatch(_))));
    }

    #[test]
    fn file_round_trip() {
        let s = sig();
        let m = mat2(&s, ["z1*zb1", "1/2 + i", "0", "L[2,1] * z2"]);
        let text = format_matrix(&m);
        let back = parse_matrix(&text, None).unwrap();
        assert_eq!(m, back);
        assert_eq!(format_matrix(&back), text);
    }

    #[test]
    fn file_parsing_rejects_bad_input() {
        assert!(matches!(
            parse_matrix("", None),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse_matrix("matrix N=2 m=4\n", None),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse_matrix("matrix N=2 m=4 mode=exact\n[1,1] z1\n[1,1] z2\n", None),
            Err(Error::DuplicateCell { row: 1, col: 1, line: 3 })
        ));
        assert!(matches!(
            parse_matrix("matrix N=2 m=4 mode=exact\n[3,1] z1\n", None),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse_matrix("matrix N=2 m=4 mode=numeric\n[1,1] 1\n", None),
            Err(Error::MissingTheta)
        ));
        assert!(matches!(
            parse_matrix("matrix N=2 m=4 mode=magic\n", None),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn numeric_file_uses_theta() {
        let theta = Arc::new(ThetaMatrix::zero(2));
        let m = parse_matrix(
            "matrix N=1 m=4 mode=numeric\n[1,1] 1/2\n",
            Some(theta.clone()),
        )
        .unwrap();
        assert!(matches!(m.sig().mode(), Mode::Numeric(_)));
        let text = format_matrix(&m);
        assert_eq!(parse_matrix(&text, Some(theta)).unwrap(), m);
    }

    #[test]
    fn comments_and_blanks_are_ignored() {
        let text = "# projector\nmatrix N=2 m=4 mode=exact\n\n[1,1] 1 # unit\n";
        let m = parse_matrix(text, None).unwrap();
        assert!(m.entry(0, 0).is_one());
        assert!(m.entry(1, 1).is_zero());
    }
}
