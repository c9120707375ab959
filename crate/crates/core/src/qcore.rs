//! q-arithmetic: Pochhammer symbols, the theta function and Jackson integrals.
//!
//! Everything is evaluated in double-precision complex arithmetic under a
//! [`QContext`], which fixes `q` together with the truncation policy shared by
//! every product and series in the crate.

use serde::{Deserialize, Serialize};

use crate::error::{QError, Result};
use crate::C64;

/// Number of consecutive sub-tolerance terms required before a sum or product stops.
pub const TAIL_RUN: usize = 3;

/// Global numeric policy: the base `q`, the term budget and the tolerances.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QContext {
    #[serde(with = "crate::cser")]
    pub q: C64,
    pub max_terms: usize,
    pub tail_tol: f64,
    pub eq_tol: f64,
}

impl Default for QContext {
    fn default() -> Self {
        QContext { q: C64::new(0.5, 0.0), max_terms: 512, tail_tol: 1e-16, eq_tol: 1e-8 }
    }
}

impl QContext {
    pub fn new(q: C64) -> Result<Self> {
        let ctx = QContext { q, ..Default::default() };
        ctx.validate()?;
        Ok(ctx)
    }

    /// Context with a real base `q`. Panics unless `0 < |q| < 1`.
    pub fn real(q: f64) -> Self {
        Self::new(C64::new(q, 0.0)).expect("0 < |q| < 1")
    }

    pub fn with_max_terms(mut self, n: usize) -> Self {
        self.max_terms = n;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let m = self.q.norm();
        if !(m > 0.0 && m < 1.0) {
            return Err(QError::Invalid(format!("|q| = {m} is not in (0, 1)")));
        }
        if self.max_terms == 0 {
            return Err(QError::Invalid("max_terms must be positive".into()));
        }
        if !(self.tail_tol > 0.0 && self.tail_tol < self.eq_tol) {
            return Err(QError::Invalid("need 0 < tail_tol < eq_tol".into()));
        }
        Ok(())
    }

    /// `q^e` on the principal branch of `log q`.
    pub fn qpow(&self, e: C64) -> C64 {
        if e == C64::new(0.0, 0.0) {
            return C64::new(1.0, 0.0);
        }
        (e * self.q.ln()).exp()
    }

    pub fn qpow_re(&self, e: f64) -> C64 {
        self.qpow(C64::new(e, 0.0))
    }

    /// Principal `Log z / Log q`, so that `q^{log_q(z)} = z`.
    pub fn log_q(&self, z: C64) -> C64 {
        z.ln() / self.q.ln()
    }

    /// Relative comparison under `eq_tol`.
    pub fn close(&self, a: C64, b: C64) -> bool {
        rel_close(a, b, self.eq_tol)
    }
}

pub fn rel_close(a: C64, b: C64, tol: f64) -> bool {
    (a - b).norm() <= tol * a.norm().max(b.norm()).max(f64::MIN_POSITIVE)
}

/// `z^e` on the principal branch; `0^e` is an error unless `e = 0`.
pub fn cpow(z: C64, e: C64) -> Result<C64> {
    if e == C64::new(0.0, 0.0) {
        return Ok(C64::new(1.0, 0.0));
    }
    if z == C64::new(0.0, 0.0) {
        return Err(QError::Domain("0 raised to a complex power".into()));
    }
    Ok((e * z.ln()).exp())
}

fn one() -> C64 {
    C64::new(1.0, 0.0)
}

/// Infinite q-Pochhammer symbol `(a; q)_∞`.
pub fn qpoch_inf(a: C64, ctx: &QContext) -> Result<C64> {
    let mut p = one();
    let mut t = a;
    let mut small = 0;
    for _ in 0..ctx.max_terms {
        if t.norm() < ctx.tail_tol {
            small += 1;
            if small >= TAIL_RUN {
                return Ok(p);
            }
        } else {
            small = 0;
        }
        p *= one() - t;
        t *= ctx.q;
    }
    Err(QError::Budget(ctx.max_terms))
}

/// `(a_1, ..., a_k; q)_∞`.
pub fn qpoch_inf_many(args: &[C64], ctx: &QContext) -> Result<C64> {
    args.iter().try_fold(one(), |p, &a| Ok(p * qpoch_inf(a, ctx)?))
}

/// `∏(num)_∞ / ∏(den)_∞`, failing on a vanishing denominator.
pub fn qpoch_ratio(num: &[C64], den: &[C64], ctx: &QContext) -> Result<C64> {
    let d = qpoch_inf_many(den, ctx)?;
    if d == C64::new(0.0, 0.0) {
        return Err(QError::Pole(format!("denominator Pochhammer vanishes for {den:?}")));
    }
    Ok(qpoch_inf_many(num, ctx)? / d)
}

/// Finite q-Pochhammer symbol `(a; q)_m` for any integer `m`.
pub fn qpoch_fin(a: C64, m: i64, ctx: &QContext) -> Result<C64> {
    let mut p = one();
    if m >= 0 {
        let mut t = a;
        for _ in 0..m {
            p *= one() - t;
            t *= ctx.q;
        }
        return Ok(p);
    }
    let qi = ctx.q.inv();
    let mut t = a * qi;
    for k in 1..=(-m) {
        let f = one() - t;
        if f.norm() <= 1e-15 {
            return Err(QError::Pole(format!("(a)_{m} with a q^-{k} = 1")));
        }
        p /= f;
        t *= qi;
    }
    Ok(p)
}

/// Jacobi theta function `θ(t) = (t, q/t; q)_∞`.
pub fn theta(t: C64, ctx: &QContext) -> Result<C64> {
    if t == C64::new(0.0, 0.0) {
        return Err(QError::Domain("theta(0)".into()));
    }
    Ok(qpoch_inf(t, ctx)? * qpoch_inf(ctx.q / t, ctx)?)
}

/// Lattice weight of a Jackson integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    /// `d_q t`: weight `τ qⁿ`.
    Dqt,
    /// `d_q t / t`: weight 1.
    DqtOverT,
}

impl Measure {
    fn weight(self, t: C64) -> C64 {
        match self {
            Measure::Dqt => t,
            Measure::DqtOverT => one(),
        }
    }
}

/// Running sum that stops after [`TAIL_RUN`] consecutive negligible terms.
struct TailSum {
    sum: C64,
    small: usize,
    tol: f64,
}

impl TailSum {
    fn new(tol: f64) -> Self {
        TailSum { sum: C64::new(0.0, 0.0), small: 0, tol }
    }

    /// Adds a term; returns true once the tail criterion is met.
    fn push(&mut self, term: C64) -> bool {
        self.sum += term;
        if term.norm() <= self.tol * self.sum.norm() {
            self.small += 1;
        } else {
            self.small = 0;
        }
        self.small >= TAIL_RUN
    }
}

/// `∫_0^τ f(t) dμ = (1−q) Σ_{n≥0} f(τqⁿ) w(n)`.
pub fn jackson_0_to_tau<F>(f: F, tau: C64, measure: Measure, ctx: &QContext) -> Result<C64>
where
    F: Fn(C64) -> Result<C64>,
{
    let mut acc = TailSum::new(ctx.tail_tol);
    let mut t = tau;
    for _ in 0..ctx.max_terms {
        if acc.push(f(t)? * measure.weight(t)) {
            return Ok((one() - ctx.q) * acc.sum);
        }
        t *= ctx.q;
    }
    Err(QError::NonDecaying(ctx.max_terms))
}

/// `∫_0^{τ∞} f(t) d_qt/t = (1−q) Σ_{n∈ℤ} f(τqⁿ)`.
pub fn jackson_bilateral<F>(f: F, tau: C64, ctx: &QContext) -> Result<C64>
where
    F: Fn(C64) -> Result<C64>,
{
    let pos = jackson_0_to_tau(&f, tau, Measure::DqtOverT, ctx)? / (one() - ctx.q);
    let mut acc = TailSum::new(ctx.tail_tol);
    acc.sum = pos;
    let qi = ctx.q.inv();
    let mut t = tau * qi;
    for _ in 0..ctx.max_terms {
        if acc.push(f(t)?) {
            return Ok((one() - ctx.q) * acc.sum);
        }
        t *= qi;
    }
    Err(QError::NonDecaying(ctx.max_terms))
}

/// Jordan–Pochhammer integrand `t^power ∏(num_i t)_∞ / ∏(den_j t)_∞`.
///
/// Lattice sums walk the q-grid with the exact one-step ratio instead of
/// re-evaluating every product, which keeps large-|t| tails free of overflow.
#[derive(Debug, Clone, PartialEq)]
pub struct JordanPochhammer {
    pub power: C64,
    pub num: Vec<C64>,
    pub den: Vec<C64>,
}

impl JordanPochhammer {
    pub fn new(power: C64, num: Vec<C64>, den: Vec<C64>) -> Self {
        JordanPochhammer { power, num, den }
    }

    pub fn eval(&self, t: C64, ctx: &QContext) -> Result<C64> {
        let pn: Vec<C64> = self.num.iter().map(|c| c * t).collect();
        let pd: Vec<C64> = self.den.iter().map(|c| c * t).collect();
        Ok(cpow(t, self.power)? * qpoch_ratio(&pn, &pd, ctx)?)
    }

    /// `f(qt)/f(t)`, or `None` when a numerator factor of `f(t)` vanishes.
    fn step(&self, t: C64, ctx: &QContext) -> Result<Option<C64>> {
        let mut r = ctx.qpow(self.power);
        for c in &self.num {
            let f = one() - c * t;
            if f.norm() < 1e-13 {
                return Ok(None);
            }
            r /= f;
        }
        for c in &self.den {
            r *= one() - c * t;
        }
        Ok(Some(r))
    }

    /// One-sided Jackson integral `∫_0^τ`.
    pub fn jackson(&self, tau: C64, measure: Measure, ctx: &QContext) -> Result<C64> {
        Ok((one() - ctx.q) * self.lattice_pos(tau, measure, ctx)?)
    }

    /// Bilateral Jackson integral `∫_0^{τ∞}` under the given measure.
    pub fn jackson_bilateral(&self, tau: C64, measure: Measure, ctx: &QContext) -> Result<C64> {
        let pos = self.lattice_pos(tau, measure, ctx)?;
        let mut acc = TailSum::new(ctx.tail_tol);
        acc.sum = pos;
        let wq = match measure {
            Measure::Dqt => ctx.q,
            Measure::DqtOverT => one(),
        };
        let qi = ctx.q.inv();
        let mut v = self.eval(tau, ctx)? * measure.weight(tau);
        let mut t = tau * qi;
        for _ in 0..ctx.max_terms {
            // f(t) w(t) = f(qt) w(qt) / (ratio(t) · wq)
            let r = match self.step(t, ctx)? {
                None => return Ok((one() - ctx.q) * acc.sum),
                Some(r) => r * wq,
            };
            if r == C64::new(0.0, 0.0) {
                return Err(QError::Pole(format!("integrand pole at t = {t}")));
            }
            v /= r;
            if acc.push(v) {
                return Ok((one() - ctx.q) * acc.sum);
            }
            t *= qi;
        }
        Err(QError::NonDecaying(ctx.max_terms))
    }

    fn lattice_pos(&self, tau: C64, measure: Measure, ctx: &QContext) -> Result<C64> {
        let wq = match measure {
            Measure::Dqt => ctx.q,
            Measure::DqtOverT => one(),
        };
        let mut acc = TailSum::new(ctx.tail_tol);
        let mut t = tau;
        let mut v = self.eval(tau, ctx)? * measure.weight(tau);
        for _ in 0..ctx.max_terms {
            if acc.push(v) {
                return Ok(acc.sum);
            }
            match self.step(t, ctx)? {
                Some(r) => v *= r * wq,
                None => {
                    let f = self;
                    return jackson_0_to_tau(|s| f.eval(s, ctx), tau, measure, ctx).map(|s| s / (one() - ctx.q));
                }
            }
            t *= ctx.q;
        }
        Err(QError::NonDecaying(ctx.max_terms))
    }
}
