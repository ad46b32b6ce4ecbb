use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use super::multi::{binomial, falling, Mono, MultiIndex};
use super::poly::{Poly, PolyXY, Vars};
use crate::cplx::{r, C64, I};
use crate::{Error, Result};

/// Differential operator `Σ c_{ab} x^a ∂^b` with polynomial coefficients,
/// stored in normal order (multiplications left of derivatives).
#[derive(Clone, Debug, PartialEq)]
pub struct DiffOp {
    n: usize,
    terms: BTreeMap<Mono, C64>,
}

impl DiffOp {
    pub fn zero(n: usize) -> Self {
        DiffOp {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::term(n, MultiIndex::zero(n), MultiIndex::zero(n), r(1.0))
    }

    /// The single term `coef · x^a ∂^b`.
    pub fn term(n: usize, a: MultiIndex, b: MultiIndex, coef: C64) -> Self {
        let mut out = Self::zero(n);
        out.add_term(Mono::new(a, b), coef);
        out
    }

    /// Multiplication by `x_k`.
    pub fn mul_var(n: usize, k: usize) -> Self {
        Self::term(n, MultiIndex::unit(n, k), MultiIndex::zero(n), r(1.0))
    }

    /// `∂/∂x_k`.
    pub fn partial(n: usize, k: usize) -> Self {
        Self::term(n, MultiIndex::zero(n), MultiIndex::unit(n, k), r(1.0))
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (Mono, C64)>) -> Result<Self> {
        let mut out = Self::zero(n);
        for (m, coef) in terms {
            if m.p.dim() != n || m.q.dim() != n {
                return Err(Error::DimensionMismatch(format!(
                    "operator term of dimension {} in dimension {n}",
                    m.p.dim().max(m.q.dim())
                )));
            }
            out.add_term(m, coef);
        }
        Ok(out)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms `(x-powers, derivative orders) → coefficient` in graded order.
    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &C64)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, a: &MultiIndex, b: &MultiIndex) -> C64 {
        self.terms
            .get(&Mono::new(a.clone(), b.clone()))
            .copied()
            .unwrap_or_default()
    }

    /// Highest derivative order present.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.q.degree()).max()
    }

    fn add_term(&mut self, m: Mono, coef: C64) {
        if coef == C64::default() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Occupied(mut e) => {
                *e.get_mut() += coef;
                if *e.get() == C64::default() {
                    e.remove();
                }
            }
            Entry::Vacant(e) => {
                e.insert(coef);
            }
        }
    }

    fn check_dim(&self, other: &DiffOp) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(format!(
                "operators of dimension {} and {}",
                self.n, other.n
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &DiffOp) -> Result<DiffOp> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (m, coef) in &other.terms {
            out.add_term(m.clone(), *coef);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &DiffOp) -> Result<DiffOp> {
        self.add(&other.scale(r(-1.0)))
    }

    pub fn scale(&self, s: C64) -> DiffOp {
        let mut out = Self::zero(self.n);
        for (m, coef) in &self.terms {
            out.add_term(m.clone(), coef * s);
        }
        out
    }

    /// Normal-ordered product `self ∘ other`.
    ///
    /// Uses `∂^b x^c = Σ_k (b choose k) c!/(c-k)! x^{c-k} ∂^{b-k}`.
    pub fn compose(&self, other: &DiffOp) -> Result<DiffOp> {
        self.check_dim(other)?;
        let mut out = Self::zero(self.n);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let (a, b) = (&m1.p, &m1.q);
                let (cc, d) = (&m2.p, &m2.q);
                for k in b.below() {
                    if !k.le(cc) {
                        continue;
                    }
                    let weight: f64 = (0..self.n)
                        .map(|i| {
                            let (bi, ci, ki) = (b.entries()[i], cc.entries()[i], k.entries()[i]);
                            binomial(bi, ki) * falling(ci, ki)
                        })
                        .product();
                    let xs = a.add(&cc.checked_sub(&k).expect("k ≤ c"));
                    let ds = b.checked_sub(&k).expect("k ≤ b").add(d);
                    out.add_term(Mono::new(xs, ds), c1 * c2 * weight);
                }
            }
        }
        Ok(out)
    }

    /// `[self, other] = self∘other − other∘self`.
    pub fn commutator(&self, other: &DiffOp) -> Result<DiffOp> {
        self.compose(other)?.sub(&other.compose(self)?)
    }

    /// Applies the operator to a polynomial, differentiating the first
    /// variable family (`x` for phase-space polynomials, `z` for complex ones).
    pub fn apply<V: Vars>(&self, f: &Poly<V>) -> Result<Poly<V>> {
        if f.dim() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "operator of dimension {} applied to polynomial of dimension {}",
                self.n,
                f.dim()
            )));
        }
        let zero = MultiIndex::zero(self.n);
        let mut out = Poly::zero(self.n);
        for (m, coef) in &self.terms {
            let df = f.derivative_multi(&m.q, &zero);
            let xa = Poly::monomial(self.n, m.p.clone(), zero.clone(), *coef);
            out = &out + &(&xa * &df);
        }
        Ok(out)
    }

    pub fn max_abs_diff(&self, other: &DiffOp) -> f64 {
        let mut keys: Vec<&Mono> = self.terms.keys().chain(other.terms.keys()).collect();
        keys.sort();
        keys.dedup();
        keys.into_iter()
            .map(|m| {
                let a = self.terms.get(m).copied().unwrap_or_default();
                let b = other.terms.get(m).copied().unwrap_or_default();
                (a - b).norm()
            })
            .fold(0.0, f64::max)
    }
}

impl fmt::Display for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, coef)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}", super::text::format_coef(*coef))?;
            super::text::write_factors(f, "x", &m.p)?;
            super::text::write_factors(f, "d", &m.q)?;
        }
        Ok(())
    }
}

/// Classical Weyl quantization of a polynomial symbol on `ℝ²ⁿ`.
///
/// `x^a y^s ↦ i^{|s|} Σ_{r ≤ s} (s choose r) 2^{-|r|} a!/(a-r)! x^{a-r} ∂^{s-r}`.
pub fn weyl_quantize_poly(f: &PolyXY) -> DiffOp {
    let n = f.dim();
    let mut out = DiffOp::zero(n);
    for (m, coef) in f.terms() {
        let (a, s) = (&m.p, &m.q);
        let phase = I.powu(s.degree());
        for rr in s.below() {
            if !rr.le(a) {
                continue;
            }
            let weight: f64 = (0..n)
                .map(|k| {
                    let (ak, sk, rk) = (a.entries()[k], s.entries()[k], rr.entries()[k]);
                    binomial(sk, rk) * falling(ak, rk) * 0.5f64.powi(rk as i32)
                })
                .product();
            let xs = a.checked_sub(&rr).expect("r ≤ a");
            let ds = s.checked_sub(&rr).expect("r ≤ s");
            out.add_term(Mono::new(xs, ds), coef * phase * weight);
        }
    }
    out
}

/// Inverse of [`weyl_quantize_poly`]: the polynomial symbol of a differential
/// operator, found by eliminating top-degree terms.
pub fn weyl_symbol(d: &DiffOp) -> PolyXY {
    let n = d.dim();
    let mut rest = d.clone();
    let mut symbol = PolyXY::zero(n);
    let minus_i = -I;
    while let Some((m, coef)) = rest.terms.iter().next_back().map(|(m, c)| (m.clone(), *c)) {
        let term = PolyXY::monomial(n, m.p.clone(), m.q.clone(), coef * minus_i.powu(m.q.degree()));
        let quantized = weyl_quantize_poly(&term);
        rest = rest.sub(&quantized).expect("same dimension");
        rest.terms.remove(&m);
        symbol = &symbol + &term;
    }
    symbol
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Slot;

    fn e(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    #[test]
    fn canonical_commutation() {
        let d = DiffOp::partial(1, 0);
        let x = DiffOp::mul_var(1, 0);
        let dx = d.compose(&x).unwrap();
        let expected = x.compose(&d).unwrap().add(&DiffOp::identity(1)).unwrap();
        assert_eq!(dx, expected);
        assert_eq!(dx.compose(&DiffOp::identity(1)).unwrap(), dx);
    }

    #[test]
    fn quantization_examples() {
        let x = PolyXY::var(1, Slot::First(0));
        let y = PolyXY::var(1, Slot::Second(0));
        assert_eq!(weyl_quantize_poly(&x), DiffOp::mul_var(1, 0));
        assert_eq!(weyl_quantize_poly(&y), DiffOp::partial(1, 0).scale(I));
        let xy = weyl_quantize_poly(&(&x * &y));
        assert_eq!(xy.coefficient(&e(&[1]), &e(&[1])), I);
        assert_eq!(xy.coefficient(&e(&[0]), &e(&[0])), I * 0.5);
        assert_eq!(xy.len(), 2);

        let wx = weyl_quantize_poly(&x);
        let wy = weyl_quantize_poly(&y);
        assert_eq!(wx.commutator(&wy).unwrap(), DiffOp::identity(1).scale(-I));
    }

    #[test]
    fn symbol_round_trip() {
        let x = PolyXY::var(2, Slot::First(0));
        let y1 = PolyXY::var(2, Slot::Second(1));
        let y0 = PolyXY::var(2, Slot::Second(0));
        let f = &(&(&x * &x) * &(&y0 * &y1)).scale(r(3.0)) + &(&x * &y0).scale(I);
        let back = weyl_symbol(&weyl_quantize_poly(&f));
        assert!(back.max_abs_diff(&f) < 1e-14);
    }

    #[test]
    fn apply_to_polynomial() {
        let x = PolyXY::var(1, Slot::First(0));
        let x3 = x.pow(3);
        let d = DiffOp::partial(1, 0);
        assert_eq!(d.apply(&x3).unwrap(), (&x * &x).scale(r(3.0)));
    }
}
