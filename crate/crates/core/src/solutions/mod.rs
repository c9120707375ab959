//! Closed-form solution families, residual verification and the symmetry
//! groups acting on them.
//!
//! Every family is exposed as a [`SolutionHandle`]: a labelled evaluator
//! together with the annulus where its series or sums converge and the
//! operator it is claimed to satisfy.

mod catalog;
mod groups;
mod integrals;
mod series;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{QError, Result};
use crate::opalgebra::QDiffOperator;
use crate::sampling::Sampler;
use crate::{QContext, C64};

pub use catalog::{expand_label, family_labels, resolve, resolve_with, Family};
pub use groups::{
    composite_gauge, g1_orbit, group_action, relation_defects, relations, solution_transport, transport_state, walk,
    word_defect, Action, GaugeFactor, Group, GroupState, PointMap, Relation, RelationDefect, G1_EXTRA_RELATION,
};
pub use integrals::{
    andrews_integral, andrews_rhs, check_intcalcu, check_intcalcu_tilde, cocycle_check, g1_andrews, g1_from_phi2,
    g1_radius, lemma_value, lemma_value_tilde, lemma_value_tilde_fitted, numerical_rank, phi2, phi2_tilde, phi3,
    phi3_single, phi3_tilde, phi3_tilde_single, relation_matrix, special_phi3, special_phi3_literal,
    special_phi3_tilde, special_phi3_tilde_literal, Endpoint, IntCalcu, DEFAULT_SIGMA, RELATION_COLUMNS,
};
pub use series::{
    e2_domain, e2_extra, e2_series, e3_domain, e3_series, heine_domain, heine_extra, heine_extra_domain,
    heine_solution, terminating_e2_params, terminating_heine_params, HEINE_GENERIC, HEINE_TERMINATING, THMSER2_GENERIC,
    THMSER2_TERMINATING,
};

/// Residual floor added to the normalising sum.
pub const RESIDUAL_FLOOR: f64 = 1e-30;

/// Convergence region `inner < |x| < outer`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Annulus {
    pub inner: f64,
    pub outer: f64,
}

impl Annulus {
    pub const ALL: Annulus = Annulus { inner: 0.0, outer: f64::INFINITY };
    pub const EMPTY: Annulus = Annulus { inner: 1.0, outer: 0.0 };

    pub fn disc(r: f64) -> Self {
        Annulus { inner: 0.0, outer: r }
    }

    pub fn exterior(r: f64) -> Self {
        Annulus { inner: r, outer: f64::INFINITY }
    }

    pub fn intersect(self, o: Annulus) -> Annulus {
        Annulus { inner: self.inner.max(o.inner), outer: self.outer.min(o.outer) }
    }

    /// The full plane when `ok`, otherwise empty.
    pub fn when(ok: bool) -> Annulus {
        if ok {
            Annulus::ALL
        } else {
            Annulus::EMPTY
        }
    }

    pub fn contains(&self, x: C64) -> bool {
        let r = x.norm();
        r > self.inner && r < self.outer
    }

    pub fn is_empty(&self) -> bool {
        !(self.inner < self.outer)
    }

    /// Image under `x ↦ k·x^e` with `e = ±1`, as a constraint on `x`.
    pub fn pull_back(self, k: C64, e: i32) -> Annulus {
        let m = k.norm();
        if e > 0 {
            Annulus { inner: self.inner / m, outer: self.outer / m }
        } else {
            let inv = |r: f64| {
                if r == 0.0 {
                    f64::INFINITY
                } else if r.is_infinite() {
                    0.0
                } else {
                    m / r
                }
            };
            Annulus { inner: inv(self.outer), outer: inv(self.inner) }
        }
    }

    /// Radii `[lo, hi]` where `x`, `qx` and `x/q` all stay inside, clipped to a
    /// practical window.
    pub fn sample_window(&self, q: C64) -> Result<(f64, f64)> {
        self.sample_window_for(q, (-1, 1))
    }

    /// As [`Annulus::sample_window`], keeping `qʲx` inside for `j` in `shifts`
    /// (widened to include `−1..=1`).
    pub fn sample_window_for(&self, q: C64, shifts: (i32, i32)) -> Result<(f64, f64)> {
        let qm = q.norm();
        let (jlo, jhi) = (shifts.0.min(-1), shifts.1.max(1));
        let lo0 = self.inner / qm.powi(jhi) * 1.25;
        let hi = (self.outer * qm.powi(-jlo) * 0.8).min(3.0f64.max(lo0 * 8.0));
        let lo = lo0.max(hi / 40.0);
        if !(lo < hi) || self.is_empty() {
            return Err(QError::OutOfDomain(vec![]));
        }
        Ok((lo, hi))
    }

    /// `n` logarithmically spaced points on the positive axis inside the window.
    pub fn sample_points(&self, n: usize, q: C64) -> Result<Vec<C64>> {
        let (lo, hi) = self.sample_window(q)?;
        Ok(log_space(lo, hi, n))
    }

    pub fn sample_points_for(&self, n: usize, q: C64, shifts: (i32, i32)) -> Result<Vec<C64>> {
        let (lo, hi) = self.sample_window_for(q, shifts)?;
        Ok(log_space(lo, hi, n))
    }

    /// `n` random points on the positive axis, log-uniform in the window.
    pub fn random_points(&self, n: usize, q: C64, s: &mut Sampler) -> Result<Vec<C64>> {
        let (lo, hi) = self.sample_window(q)?;
        Ok((0..n).map(|_| C64::new(s.uniform(lo.ln(), hi.ln()).exp(), 0.0)).collect())
    }
}

fn log_space(lo: f64, hi: f64, n: usize) -> Vec<C64> {
    if n == 1 {
        return vec![C64::new((lo * hi).sqrt(), 0.0)];
    }
    (0..n)
        .map(|k| {
            let s = k as f64 / (n - 1) as f64;
            C64::new((lo.ln() + s * (hi.ln() - lo.ln())).exp(), 0.0)
        })
        .collect()
}

type Evaluator = Arc<dyn Fn(C64) -> Result<C64> + Send + Sync>;

/// A labelled solution candidate of a q-difference equation.
#[derive(Clone)]
pub struct SolutionHandle {
    pub label: String,
    pub domain: Annulus,
    pub operator: QDiffOperator,
    /// Narrower region for default sample points, where the evaluator is
    /// accurate.
    pub sample_region: Option<Annulus>,
    eval: Evaluator,
}

impl fmt::Debug for SolutionHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SolutionHandle").field("label", &self.label).field("domain", &self.domain).finish()
    }
}

impl SolutionHandle {
    pub fn new<F>(label: impl Into<String>, domain: Annulus, operator: QDiffOperator, f: F) -> Self
    where
        F: Fn(C64) -> Result<C64> + Send + Sync + 'static,
    {
        SolutionHandle { label: label.into(), domain, operator, sample_region: None, eval: Arc::new(f) }
    }

    pub fn eval(&self, x: C64) -> Result<C64> {
        (self.eval)(x)
    }

    pub fn evaluator(&self) -> Evaluator {
        self.eval.clone()
    }

    /// Multiplies the evaluator by a constant.
    pub fn scaled(&self, c: C64) -> SolutionHandle {
        let e = self.eval.clone();
        SolutionHandle { eval: Arc::new(move |x| Ok(c * e(x)?)), label: format!("{}*c", self.label), ..self.clone() }
    }

    pub fn with_sample_region(mut self, r: Annulus) -> Self {
        self.sample_region = Some(r);
        self
    }

    pub fn sample_points(&self, n: usize) -> Result<Vec<C64>> {
        let dom = match self.sample_region {
            Some(r) => self.domain.intersect(r),
            None => self.domain,
        };
        dom.sample_points_for(n, self.operator.q(), self.operator.t_range().unwrap_or((0, 0)))
    }
}

/// Max over `xs` of `|L f(x)| / (Σ|a_ij xⁱ f(qʲx)| + 10⁻³⁰)`.
pub fn residual(l: &QDiffOperator, f: &SolutionHandle, xs: &[C64], _ctx: &QContext) -> Result<f64> {
    let q = l.q();
    let (jlo, jhi) = l.t_range().unwrap_or((0, 0));
    let bad: Vec<C64> =
        xs.iter().copied().filter(|&x| (jlo.min(-1)..=jhi.max(1)).any(|j| !f.domain.contains(q.powi(j) * x))).collect();
    if !bad.is_empty() {
        return Err(QError::OutOfDomain(bad));
    }
    let mut worst = 0.0f64;
    for &x in xs {
        let (v, s) = l.apply_terms(|y| f.eval(y), x)?;
        worst = worst.max(v.norm() / (s + RESIDUAL_FLOOR));
    }
    Ok(worst)
}

/// Residual of a handle under its own operator at `n` default points.
pub fn self_residual(f: &SolutionHandle, n: usize, ctx: &QContext) -> Result<f64> {
    residual(&f.operator, f, &f.sample_points(n)?, ctx)
}

/// `f(x)g(qx) − f(qx)g(x)`.
pub fn casoratian(f: &SolutionHandle, g: &SolutionHandle, x: C64, ctx: &QContext) -> Result<C64> {
    let qx = ctx.q * x;
    let bad: Vec<C64> = [x, qx].into_iter().filter(|&y| !(f.domain.contains(y) && g.domain.contains(y))).collect();
    if !bad.is_empty() {
        return Err(QError::OutOfDomain(bad));
    }
    Ok(f.eval(x)? * g.eval(qx)? - f.eval(qx)? * g.eval(x)?)
}
