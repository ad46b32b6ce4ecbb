use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::marker::PhantomData;
use std::ops::{Add, Mul, Neg, Sub};

use super::multi::{falling, Mono, MultiIndex};
use crate::cplx::{c, r, C64, I};
use crate::{Error, Result};

/// Names the two variable families of a polynomial ring.
pub trait Vars: Clone + std::fmt::Debug + PartialEq {
    const FIRST: &'static str;
    const SECOND: &'static str;
}

/// Holomorphic/antiholomorphic coordinates `(z, z̄)` on `ℂⁿ`.
#[derive(Clone, Debug, PartialEq)]
pub struct ZVars;

/// Phase-space coordinates `(x, y)` on `ℝ²ⁿ`.
#[derive(Clone, Debug, PartialEq)]
pub struct XYVars;

impl Vars for ZVars {
    const FIRST: &'static str = "z";
    const SECOND: &'static str = "zb";
}

impl Vars for XYVars {
    const FIRST: &'static str = "x";
    const SECOND: &'static str = "y";
}

/// Selects a variable: `First(k)` is `z_k` (or `x_k`), `Second(k)` is `z̄_k` (or `y_k`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Slot {
    First(usize),
    Second(usize),
}

/// Sparse polynomial `Σ c_{pq} u^p v^q` with complex coefficients.
///
/// Only nonzero coefficients are stored; a coefficient that cancels to exactly
/// zero is removed.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly<V: Vars> {
    n: usize,
    terms: BTreeMap<Mono, C64>,
    _vars: PhantomData<V>,
}

pub type PolyZ = Poly<ZVars>;
pub type PolyXY = Poly<XYVars>;

impl<V: Vars> Poly<V> {
    pub fn zero(n: usize) -> Self {
        Poly {
            n,
            terms: BTreeMap::new(),
            _vars: PhantomData,
        }
    }

    pub fn constant(n: usize, value: C64) -> Self {
        Self::monomial(n, MultiIndex::zero(n), MultiIndex::zero(n), value)
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, r(1.0))
    }

    pub fn monomial(n: usize, p: MultiIndex, q: MultiIndex, coef: C64) -> Self {
        let mut out = Self::zero(n);
        out.add_term(Mono::new(p, q), coef);
        out
    }

    pub fn var(n: usize, slot: Slot) -> Self {
        let z = MultiIndex::zero(n);
        match slot {
            Slot::First(k) => Self::monomial(n, MultiIndex::unit(n, k), z, r(1.0)),
            Slot::Second(k) => Self::monomial(n, z, MultiIndex::unit(n, k), r(1.0)),
        }
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (Mono, C64)>) -> Result<Self> {
        let mut out = Self::zero(n);
        for (m, coef) in terms {
            if m.p.dim() != n || m.q.dim() != n {
                return Err(Error::DimensionMismatch(format!(
                    "monomial of dimension {} in a polynomial of dimension {n}",
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

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in graded order.
    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &C64)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, p: &MultiIndex, q: &MultiIndex) -> C64 {
        self.terms
            .get(&Mono::new(p.clone(), q.clone()))
            .copied()
            .unwrap_or_default()
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Mono::degree).max()
    }

    pub(crate) fn add_term(&mut self, m: Mono, coef: C64) {
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

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(format!(
                "polynomials of dimension {} and {}",
                self.n, other.n
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (m, coef) in &other.terms {
            out.add_term(m.clone(), *coef);
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut out = Self::zero(self.n);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(Mono::new(m1.p.add(&m2.p), m1.q.add(&m2.q)), c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut out = Self::zero(self.n);
        for (m, coef) in &self.terms {
            out.add_term(m.clone(), coef * s);
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(self.n), |acc, _| &acc * self)
    }

    /// Formal partial derivative of the given order.
    pub fn derivative(&self, slot: Slot, order: u32) -> Self {
        let mut out = Self::zero(self.n);
        for (m, coef) in &self.terms {
            let (p, q) = (&m.p, &m.q);
            let (k, e) = match slot {
                Slot::First(k) => (k, p.entries()[k]),
                Slot::Second(k) => (k, q.entries()[k]),
            };
            if e < order {
                continue;
            }
            let factor = falling(e, order);
            let key = match slot {
                Slot::First(_) => Mono::new(p.with(k, e - order), q.clone()),
                Slot::Second(_) => Mono::new(p.clone(), q.with(k, e - order)),
            };
            out.add_term(key, coef * factor);
        }
        out
    }

    /// Mixed derivative `∂_first^alpha ∂_second^beta`.
    pub fn derivative_multi(&self, alpha: &MultiIndex, beta: &MultiIndex) -> Self {
        let mut out = Self::zero(self.n);
        for (m, coef) in &self.terms {
            let (Some(p), Some(q)) = (m.p.checked_sub(alpha), m.q.checked_sub(beta)) else {
                continue;
            };
            let factor: f64 = m
                .p
                .entries()
                .iter()
                .zip(alpha.entries())
                .chain(m.q.entries().iter().zip(beta.entries()))
                .map(|(&e, &d)| falling(e, d))
                .product();
            out.add_term(Mono::new(p, q), coef * factor);
        }
        out
    }

    /// Evaluates with independent values for the two variable families.
    pub fn eval_pair(&self, u: &[C64], v: &[C64]) -> C64 {
        self.terms
            .iter()
            .map(|(m, coef)| coef * monomial_value(&m.p, u) * monomial_value(&m.q, v))
            .sum()
    }

    /// Substitutes `first_k → a_k · first_k`, `second_k → b_k · second_k`.
    pub fn rescale_vars(&self, a: &[C64], b: &[C64]) -> Self {
        let mut out = Self::zero(self.n);
        for (m, coef) in &self.terms {
            let s = monomial_value(&m.p, a) * monomial_value(&m.q, b);
            out.add_term(m.clone(), coef * s);
        }
        out
    }

    /// Largest coefficient modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
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

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Drops coefficients with modulus at most `tol`. For display only.
    pub fn pruned(&self, tol: f64) -> Self {
        let mut out = self.clone();
        out.terms.retain(|_, v| v.norm() > tol);
        out
    }
}

pub(crate) fn monomial_value(p: &MultiIndex, u: &[C64]) -> C64 {
    p.entries()
        .iter()
        .zip(u)
        .fold(r(1.0), |acc, (&e, x)| acc * x.powu(e))
}

impl PolyZ {
    /// Value at `z`, with `z̄` the complex conjugate.
    pub fn eval(&self, z: &[C64]) -> C64 {
        let zb: Vec<C64> = z.iter().map(|w| w.conj()).collect();
        self.eval_pair(z, &zb)
    }

    /// Complex conjugate as a function: swaps `z ↔ z̄` and conjugates coefficients.
    pub fn conj(&self) -> PolyZ {
        let mut out = PolyZ::zero(self.n);
        for (m, coef) in &self.terms {
            out.add_term(Mono::new(m.q.clone(), m.p.clone()), coef.conj());
        }
        out
    }

    /// Pullback along `j(x, y) = x + iy`.
    pub fn to_xy(&self) -> PolyXY {
        let n = self.n;
        let mut out = PolyXY::zero(n);
        let z: Vec<PolyXY> = (0..n)
            .map(|k| &PolyXY::var(n, Slot::First(k)) + &PolyXY::var(n, Slot::Second(k)).scale(I))
            .collect();
        let zb: Vec<PolyXY> = (0..n)
            .map(|k| &PolyXY::var(n, Slot::First(k)) - &PolyXY::var(n, Slot::Second(k)).scale(I))
            .collect();
        for (m, coef) in &self.terms {
            let mut term = PolyXY::constant(n, *coef);
            for k in 0..n {
                term = &(&term * &z[k].pow(m.p.entries()[k])) * &zb[k].pow(m.q.entries()[k]);
            }
            out = &out + &term;
        }
        out
    }
}

impl PolyXY {
    /// Value at a real point `(x, y)`.
    pub fn eval(&self, x: &[f64], y: &[f64]) -> C64 {
        let xc: Vec<C64> = x.iter().map(|&v| r(v)).collect();
        let yc: Vec<C64> = y.iter().map(|&v| r(v)).collect();
        self.eval_pair(&xc, &yc)
    }

    /// Inverse of [`PolyZ::to_xy`]: `x = (z + z̄)/2`, `y = (z - z̄)/(2i)`.
    pub fn to_z(&self) -> PolyZ {
        let n = self.n;
        let mut out = PolyZ::zero(n);
        let x: Vec<PolyZ> = (0..n)
            .map(|k| (&PolyZ::var(n, Slot::First(k)) + &PolyZ::var(n, Slot::Second(k))).scale(r(0.5)))
            .collect();
        let y: Vec<PolyZ> = (0..n)
            .map(|k| {
                (&PolyZ::var(n, Slot::First(k)) - &PolyZ::var(n, Slot::Second(k))).scale(c(0.0, -0.5))
            })
            .collect();
        for (m, coef) in &self.terms {
            let mut term = PolyZ::constant(n, *coef);
            for k in 0..n {
                term = &(&term * &x[k].pow(m.p.entries()[k])) * &y[k].pow(m.q.entries()[k]);
            }
            out = &out + &term;
        }
        out
    }

    /// `f ↦ f(x, s·y)`.
    pub fn scale_y(&self, s: f64) -> PolyXY {
        self.rescale_vars(&vec![r(1.0); self.n], &vec![r(s); self.n])
    }
}

impl<V: Vars> Add for &Poly<V> {
    type Output = Poly<V>;
    fn add(self, rhs: Self) -> Poly<V> {
        self.try_add(rhs).expect("polynomial dimensions differ")
    }
}

impl<V: Vars> Sub for &Poly<V> {
    type Output = Poly<V>;
    fn sub(self, rhs: Self) -> Poly<V> {
        self.try_add(&-rhs).expect("polynomial dimensions differ")
    }
}

impl<V: Vars> Mul for &Poly<V> {
    type Output = Poly<V>;
    fn mul(self, rhs: Self) -> Poly<V> {
        self.try_mul(rhs).expect("polynomial dimensions differ")
    }
}

impl<V: Vars> Neg for &Poly<V> {
    type Output = Poly<V>;
    fn neg(self) -> Poly<V> {
        self.scale(r(-1.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(n: usize, k: usize) -> PolyXY {
        PolyXY::var(n, Slot::First(k))
    }
    fn y(n: usize, k: usize) -> PolyXY {
        PolyXY::var(n, Slot::Second(k))
    }

    #[test]
    fn products() {
        let z = PolyZ::var(1, Slot::First(0));
        let zb = PolyZ::var(1, Slot::Second(0));
        let zzb = &z * &zb;
        assert_eq!(zzb.len(), 1);
        assert_eq!(
            zzb.coefficient(&MultiIndex::new(vec![1]), &MultiIndex::new(vec![1])),
            r(1.0)
        );
        assert_eq!(&zzb * &PolyZ::one(1), zzb);

        let w = &x(1, 0) + &y(1, 0).scale(I);
        let wb = &x(1, 0) - &y(1, 0).scale(I);
        let expected = &(&x(1, 0) * &x(1, 0)) + &(&y(1, 0) * &y(1, 0));
        assert_eq!(&w * &wb, expected);
    }

    #[test]
    fn derivatives() {
        let x2 = &x(1, 0) * &x(1, 0);
        assert_eq!(x2.derivative(Slot::First(0), 1), x(1, 0).scale(r(2.0)));
        assert!(x(1, 0).derivative(Slot::Second(0), 1).is_zero());
        let z = PolyZ::var(1, Slot::First(0));
        let zb = PolyZ::var(1, Slot::Second(0));
        let f = &z * &(&zb * &zb);
        assert_eq!(f.derivative(Slot::Second(0), 1), (&z * &zb).scale(r(2.0)));
    }

    #[test]
    fn exact_cancellation_prunes() {
        let f = &x(2, 1) - &x(2, 1);
        assert!(f.is_zero());
        assert!(x(1, 0).try_add(&x(2, 0)).is_err());
    }

    #[test]
    fn pullback_round_trip() {
        let z = PolyZ::var(2, Slot::First(1));
        let zb = PolyZ::var(2, Slot::Second(0));
        let f = &(&z * &zb).scale(c(1.0, 2.0)) + &PolyZ::constant(2, r(3.0));
        assert!(f.to_xy().to_z().max_abs_diff(&f) < 1e-15);
        let pt = [c(0.3, -0.7), c(1.1, 0.4)];
        let lhs = f.eval(&pt);
        let rhs = f.to_xy().eval(&[0.3, 1.1], &[-0.7, 0.4]);
        assert!((lhs - rhs).norm() < 1e-14);
        assert!((f.conj().eval(&pt) - lhs.conj()).norm() < 1e-14);
    }
}
