//! Noncommutative algebra of q-difference operators `Σ a_ij xⁱ T^j` with
//! `T x = q x T`, characteristic data at the four boundaries and local
//! Frobenius series.

mod config;
pub mod roots;

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{QError, Result};
use crate::C64;

pub use config::{char_roots, configuration, frobenius_series, is_nonlog, Boundary, Configuration};

/// Normally ordered q-difference operator: x-powers to the left of T-powers.
#[derive(Debug, Clone, PartialEq)]
pub struct QDiffOperator {
    q: C64,
    coeffs: BTreeMap<(i32, i32), C64>,
}

/// Serialized coefficient `a_ij`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoeffRecord {
    pub i: i32,
    pub j: i32,
    pub re: f64,
    pub im: f64,
}

/// Laurent polynomial `Σ c_k y^k`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LaurentPoly {
    pub coeffs: BTreeMap<i32, C64>,
}

impl LaurentPoly {
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, y: C64) -> C64 {
        self.coeffs.iter().map(|(&k, c)| c * y.powi(k)).sum()
    }

    /// `Σ |c_k| |y|^k`, the natural scale for judging `|eval(y)|`.
    pub fn scale(&self, y: C64) -> f64 {
        self.coeffs.iter().map(|(&k, c)| c.norm() * y.norm().powi(k)).sum()
    }

    /// Nonzero roots with multiplicity (the monomial factor is dropped).
    pub fn roots(&self) -> Result<Vec<C64>> {
        let (&lo, _) = self.coeffs.iter().next().ok_or(QError::ZeroPolynomial)?;
        let (&hi, _) = self.coeffs.iter().next_back().unwrap();
        let dense: Vec<C64> = (lo..=hi).map(|k| self.coeffs.get(&k).copied().unwrap_or_default()).collect();
        let mut r = roots::poly_roots(&dense)?;
        r.retain(|z| z.norm() > 0.0);
        Ok(r)
    }
}

const CANCEL: f64 = 8.0 * f64::EPSILON;

impl QDiffOperator {
    pub fn zero(q: C64) -> Self {
        QDiffOperator { q, coeffs: BTreeMap::new() }
    }

    pub fn identity(q: C64) -> Self {
        Self::monomial(q, 0, 0, C64::new(1.0, 0.0))
    }

    pub fn constant(q: C64, c: C64) -> Self {
        Self::monomial(q, 0, 0, c)
    }

    /// `c xⁱ T^j`.
    pub fn monomial(q: C64, i: i32, j: i32, c: C64) -> Self {
        let mut op = Self::zero(q);
        if c != C64::new(0.0, 0.0) {
            op.coeffs.insert((i, j), c);
        }
        op
    }

    /// `c₀ + c₁ T`.
    pub fn linear_t(q: C64, c0: C64, c1: C64) -> Self {
        Self::from_terms(q, [((0, 0), c0), ((0, 1), c1)])
    }

    /// `x − c`.
    pub fn x_minus(q: C64, c: C64) -> Self {
        Self::from_terms(q, [((1, 0), C64::new(1.0, 0.0)), ((0, 0), -c)])
    }

    pub fn from_terms<I: IntoIterator<Item = ((i32, i32), C64)>>(q: C64, terms: I) -> Self {
        let mut op = Self::zero(q);
        for (k, c) in terms {
            *op.coeffs.entry(k).or_default() += c;
        }
        op.coeffs.retain(|_, c| *c != C64::new(0.0, 0.0));
        op
    }

    pub fn from_records(q: C64, recs: &[CoeffRecord]) -> Self {
        Self::from_terms(q, recs.iter().map(|r| ((r.i, r.j), C64::new(r.re, r.im))))
    }

    pub fn to_records(&self) -> Vec<CoeffRecord> {
        self.coeffs.iter().map(|(&(i, j), c)| CoeffRecord { i, j, re: c.re, im: c.im }).collect()
    }

    pub fn q(&self) -> C64 {
        self.q
    }

    pub fn coeffs(&self) -> &BTreeMap<(i32, i32), C64> {
        &self.coeffs
    }

    pub fn coeff(&self, i: i32, j: i32) -> C64 {
        self.coeffs.get(&(i, j)).copied().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `(min i, max i)` over the support.
    pub fn x_range(&self) -> Option<(i32, i32)> {
        let lo = self.coeffs.keys().map(|k| k.0).min()?;
        let hi = self.coeffs.keys().map(|k| k.0).max()?;
        Some((lo, hi))
    }

    /// `(min j, max j)` over the support.
    pub fn t_range(&self) -> Option<(i32, i32)> {
        let lo = self.coeffs.keys().map(|k| k.1).min()?;
        let hi = self.coeffs.keys().map(|k| k.1).max()?;
        Some((lo, hi))
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn scale(&self, c: C64) -> Self {
        Self::from_terms(self.q, self.coeffs.iter().map(|(&k, v)| (k, v * c)))
    }

    fn check_q(&self, other: &Self) {
        assert!((self.q - other.q).norm() <= 1e-15 * self.q.norm(), "operators built over different q");
    }

    fn combine(&self, other: &Self, sign: f64) -> Self {
        self.check_q(other);
        let mut out = self.coeffs.clone();
        for (k, b) in &other.coeffs {
            let a = out.get(k).copied().unwrap_or_default();
            let s = a + b * sign;
            if s.norm() <= CANCEL * (a.norm() + b.norm()) {
                out.remove(k);
            } else {
                out.insert(*k, s);
            }
        }
        QDiffOperator { q: self.q, coeffs: out }
    }

    /// Normally ordered product, using `T^j xᵏ = q^{jk} xᵏ T^j`.
    pub fn multiply(&self, r: &Self) -> Self {
        self.check_q(r);
        let mut acc: BTreeMap<(i32, i32), (C64, f64)> = BTreeMap::new();
        for (&(i, j), a) in &self.coeffs {
            for (&(k, l), b) in &r.coeffs {
                let v = a * b * self.q.powi(j * k);
                let e = acc.entry((i + k, j + l)).or_default();
                e.0 += v;
                e.1 += v.norm();
            }
        }
        let coeffs = acc.into_iter().filter(|(_, (v, s))| v.norm() > CANCEL * s).map(|(k, (v, _))| (k, v)).collect();
        QDiffOperator { q: self.q, coeffs }
    }

    /// `Σ a_ij xⁱ f(q^j x)`.
    pub fn apply<F: Fn(C64) -> Result<C64>>(&self, f: F, x: C64) -> Result<C64> {
        Ok(self.apply_terms(f, x)?.0)
    }

    /// The applied sum together with `Σ |a_ij xⁱ f(q^j x)|`.
    pub fn apply_terms<F: Fn(C64) -> Result<C64>>(&self, f: F, x: C64) -> Result<(C64, f64)> {
        if x == C64::new(0.0, 0.0) && self.coeffs.keys().any(|k| k.0 < 0) {
            return Err(QError::Domain("negative x-power at x = 0".into()));
        }
        let mut cache: BTreeMap<i32, C64> = BTreeMap::new();
        let mut sum = C64::new(0.0, 0.0);
        let mut abs = 0.0;
        for (&(i, j), a) in &self.coeffs {
            let fv = match cache.get(&j) {
                Some(v) => *v,
                None => {
                    let v = f(self.q.powi(j) * x)?;
                    cache.insert(j, v);
                    v
                }
            };
            let t = a * x.powi(i) * fv;
            sum += t;
            abs += t.norm();
        }
        Ok((sum, abs))
    }

    /// `L_m(y) = Σ_j a_{M'+m, j} y^j` with `M'` the minimal x-power.
    pub fn l_poly(&self, m: i32) -> LaurentPoly {
        let Some((lo, _)) = self.x_range() else { return LaurentPoly::default() };
        let coeffs = self.coeffs.iter().filter(|(k, _)| k.0 == lo + m).map(|(k, c)| (k.1, *c)).collect();
        LaurentPoly { coeffs }
    }

    /// `P_m(x) = Σ_i a_{i, N'+m} x^i` with `N'` the minimal T-power.
    pub fn p_poly(&self, m: i32) -> LaurentPoly {
        let Some((lo, _)) = self.t_range() else { return LaurentPoly::default() };
        let coeffs = self.coeffs.iter().filter(|(k, _)| k.1 == lo + m).map(|(k, c)| (k.0, *c)).collect();
        LaurentPoly { coeffs }
    }

    /// Conjugation `x^{-μ} ∘ L ∘ x^{μ}`: `a_ij ↦ a_ij q^{jμ}`.
    pub fn gauge_power(&self, mu: C64) -> Self {
        let lq = self.q.ln();
        Self::from_terms(self.q, self.coeffs.iter().map(|(&(i, j), c)| ((i, j), c * (mu * lq * j as f64).exp())))
    }

    /// Left multiplication by `xᵃ T^b`.
    pub fn shift(&self, a: i32, b: i32) -> Self {
        Self::monomial(self.q, a, b, C64::new(1.0, 0.0)).multiply(self)
    }

    /// Left-shifts the support so that both minimal exponents are zero.
    pub fn normal_form(&self) -> Self {
        match (self.x_range(), self.t_range()) {
            (Some((xi, _)), Some((tj, _))) => self.shift(-xi, -tj),
            _ => self.clone(),
        }
    }

    /// Operator acting on `g(z) = f(1/z)`: `x ↦ z⁻¹`, `T ↦ T⁻¹`, then shifted to
    /// minimal exponents zero.
    pub fn invert_variable(&self) -> Self {
        let flipped = Self::from_terms(self.q, self.coeffs.iter().map(|(&(i, j), c)| ((-i, -j), *c)));
        flipped.normal_form()
    }

    /// Divides by the coefficient at `pivot`.
    pub fn normalized_at(&self, pivot: (i32, i32)) -> Result<Self> {
        let p = self.coeff(pivot.0, pivot.1);
        if p == C64::new(0.0, 0.0) {
            return Err(QError::Invalid(format!("pivot {pivot:?} is not in the support")));
        }
        Ok(self.scale(p.inv()))
    }

    /// Lexicographically highest `(i, j)` in the support.
    pub fn top_key(&self) -> Option<(i32, i32)> {
        self.coeffs.keys().next_back().copied()
    }

    /// Max coefficientwise distance between the operators after normalising both at `pivot`.
    pub fn deviation_at(&self, other: &Self, pivot: (i32, i32)) -> Result<f64> {
        let a = self.normalized_at(pivot)?;
        let b = other.normalized_at(pivot)?;
        let mut keys: Vec<(i32, i32)> = a.coeffs.keys().chain(b.coeffs.keys()).copied().collect();
        keys.sort();
        keys.dedup();
        Ok(keys.iter().map(|&(i, j)| (a.coeff(i, j) - b.coeff(i, j)).norm()).fold(0.0, f64::max))
    }

    /// Whether `self = c · other` for some constant `c`, to relative tolerance `tol`.
    pub fn proportional_to(&self, other: &Self, tol: f64) -> bool {
        match other.top_key() {
            Some(k) if self.coeff(k.0, k.1) != C64::new(0.0, 0.0) => self
                .deviation_at(other, k)
                .map(|d| d <= tol * other.normalized_at(k).unwrap().max_abs())
                .unwrap_or(false),
            _ => false,
        }
    }
}

/// Free-function form of [`QDiffOperator::multiply`].
pub fn op_multiply(l: &QDiffOperator, r: &QDiffOperator) -> QDiffOperator {
    l.multiply(r)
}

/// Free-function form of [`QDiffOperator::apply`].
pub fn op_apply<F: Fn(C64) -> Result<C64>>(l: &QDiffOperator, f: F, x: C64) -> Result<C64> {
    l.apply(f, x)
}

pub fn gauge_power(l: &QDiffOperator, mu: C64) -> QDiffOperator {
    l.gauge_power(mu)
}

pub fn invert_variable(l: &QDiffOperator) -> QDiffOperator {
    l.invert_variable()
}

impl Add for &QDiffOperator {
    type Output = QDiffOperator;
    fn add(self, rhs: &QDiffOperator) -> QDiffOperator {
        self.combine(rhs, 1.0)
    }
}

impl Sub for &QDiffOperator {
    type Output = QDiffOperator;
    fn sub(self, rhs: &QDiffOperator) -> QDiffOperator {
        self.combine(rhs, -1.0)
    }
}

impl Mul for &QDiffOperator {
    type Output = QDiffOperator;
    fn mul(self, rhs: &QDiffOperator) -> QDiffOperator {
        self.multiply(rhs)
    }
}

impl Neg for &QDiffOperator {
    type Output = QDiffOperator;
    fn neg(self) -> QDiffOperator {
        self.scale(C64::new(-1.0, 0.0))
    }
}

impl Add for QDiffOperator {
    type Output = QDiffOperator;
    fn add(self, rhs: QDiffOperator) -> QDiffOperator {
        &self + &rhs
    }
}

impl Sub for QDiffOperator {
    type Output = QDiffOperator;
    fn sub(self, rhs: QDiffOperator) -> QDiffOperator {
        &self - &rhs
    }
}

impl Mul for QDiffOperator {
    type Output = QDiffOperator;
    fn mul(self, rhs: QDiffOperator) -> QDiffOperator {
        &self * &rhs
    }
}

impl Mul<C64> for QDiffOperator {
    type Output = QDiffOperator;
    fn mul(self, rhs: C64) -> QDiffOperator {
        self.scale(rhs)
    }
}

impl Neg for QDiffOperator {
    type Output = QDiffOperator;
    fn neg(self) -> QDiffOperator {
        -&self
    }
}
