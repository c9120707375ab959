//! Constructors for the named q-difference operators, their parameter
//! records and expected configurations, degeneration checks and the rigidity
//! reconstruction of an operator from its configuration.

mod degeneration;
mod rigidity;

use serde::{Deserialize, Serialize};

use crate::error::{QError, Result};
use crate::opalgebra::{Configuration, QDiffOperator};
use crate::{QContext, C64};

pub use degeneration::{verify_degeneration, DegenerationBase, DegenerationKind, DegenerationReport, Verdict};
pub use rigidity::{reconstruct_from_configuration, RigidityResult};

/// Half-width of the integer window used for `∉ q^ℤ` checks.
pub const GENERICITY_WINDOW: i32 = 64;
/// Minimal distance from `q^k` accepted as generic.
pub const GENERICITY_GAP: f64 = 1e-6;

fn one() -> C64 {
    C64::new(1.0, 0.0)
}

/// `Err` if `z` lies within [`GENERICITY_GAP`] of some `q^k`, `|k| ≤ 64`.
pub fn check_generic(what: &str, z: C64, ctx: &QContext) -> Result<()> {
    for k in -GENERICITY_WINDOW..=GENERICITY_WINDOW {
        if (z - ctx.q.powi(k)).norm() <= GENERICITY_GAP {
            return Err(QError::Genericity(format!("{what} = {z} is q^{k}")));
        }
    }
    Ok(())
}

fn check_balance(lhs: C64, rhs: C64, ctx: &QContext) -> Result<()> {
    let d = (lhs - rhs).norm() / lhs.norm().max(rhs.norm()).max(f64::MIN_POSITIVE);
    if d > ctx.eq_tol {
        return Err(QError::Balance(d));
    }
    Ok(())
}

pub fn e1(v: &[C64]) -> C64 {
    v.iter().sum()
}

pub fn e2(v: &[C64]) -> C64 {
    let mut s = C64::new(0.0, 0.0);
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            s += v[i] * v[j];
        }
    }
    s
}

pub fn e3(v: &[C64]) -> C64 {
    let mut s = C64::new(0.0, 0.0);
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            for k in j + 1..v.len() {
                s += v[i] * v[j] * v[k];
            }
        }
    }
    s
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeineParams {
    #[serde(with = "crate::cser")]
    pub a: C64,
    #[serde(with = "crate::cser")]
    pub b: C64,
    #[serde(with = "crate::cser")]
    pub c: C64,
}

impl HeineParams {
    pub fn new(a: C64, b: C64, c: C64) -> Self {
        HeineParams { a, b, c }
    }

    /// `c ∉ q^{-ℤ≥0}` (the series at the origin exists).
    pub fn validate(&self, ctx: &QContext) -> Result<()> {
        for n in 0..=GENERICITY_WINDOW {
            if (self.c * ctx.q.powi(n) - one()).norm() <= GENERICITY_GAP {
                return Err(QError::Genericity(format!("c = q^-{n}")));
            }
        }
        Ok(())
    }
}

/// Parameters of the degree-two equation: `a₀ = q^α`, with the balance
/// `a₁a₂A = q^{α+1}b₁b₂B`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Params2 {
    #[serde(with = "crate::cser")]
    pub alpha: C64,
    #[serde(with = "crate::cser::seq")]
    pub a: [C64; 2],
    #[serde(with = "crate::cser::seq")]
    pub b: [C64; 2],
    #[serde(rename = "A", with = "crate::cser")]
    pub big_a: C64,
    #[serde(rename = "B", with = "crate::cser")]
    pub big_b: C64,
}

impl Params2 {
    /// Fills in `B` from the balance condition.
    pub fn balanced(alpha: C64, a: [C64; 2], b: [C64; 2], big_a: C64, ctx: &QContext) -> Self {
        let big_b = a[0] * a[1] * big_a / (ctx.qpow(alpha + 1.0) * b[0] * b[1]);
        Params2 { alpha, a, b, big_a, big_b }
    }

    pub fn qalpha(&self, ctx: &QContext) -> C64 {
        ctx.qpow(self.alpha)
    }

    /// `λ = log_q(B/A)`.
    pub fn lambda(&self, ctx: &QContext) -> C64 {
        ctx.log_q(self.big_b / self.big_a)
    }

    pub fn check_balance(&self, ctx: &QContext) -> Result<()> {
        check_balance(
            self.a[0] * self.a[1] * self.big_a,
            ctx.qpow(self.alpha + 1.0) * self.b[0] * self.b[1] * self.big_b,
            ctx,
        )
    }

    pub fn validate(&self, ctx: &QContext) -> Result<()> {
        self.check_balance(ctx)?;
        check_generic("B/A", self.big_b / self.big_a, ctx)
    }
}

/// Parameters of the degree-three equation with `a₁a₂a₃A = q²b₁b₂b₃B`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Params3 {
    #[serde(with = "crate::cser::seq")]
    pub a: [C64; 3],
    #[serde(with = "crate::cser::seq")]
    pub b: [C64; 3],
    #[serde(rename = "A", with = "crate::cser")]
    pub big_a: C64,
    #[serde(rename = "B", with = "crate::cser")]
    pub big_b: C64,
}

impl Params3 {
    pub fn balanced(a: [C64; 3], b: [C64; 3], big_a: C64, ctx: &QContext) -> Self {
        let big_b = a[0] * a[1] * a[2] * big_a / (ctx.q * ctx.q * b[0] * b[1] * b[2]);
        Params3 { a, b, big_a, big_b }
    }

    pub fn lambda(&self, ctx: &QContext) -> C64 {
        ctx.log_q(self.big_b / self.big_a)
    }

    pub fn check_balance(&self, ctx: &QContext) -> Result<()> {
        check_balance(
            self.a[0] * self.a[1] * self.a[2] * self.big_a,
            ctx.q * ctx.q * self.b[0] * self.b[1] * self.b[2] * self.big_b,
            ctx,
        )
    }

    pub fn validate(&self, ctx: &QContext) -> Result<()> {
        self.check_balance(ctx)?;
        check_generic("B/A", self.big_b / self.big_a, ctx)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct H2Params {
    #[serde(with = "crate::cser::seq")]
    pub h: [C64; 2],
    #[serde(with = "crate::cser::seq")]
    pub l: [C64; 2],
    #[serde(with = "crate::cser::seq")]
    pub t: [C64; 2],
    #[serde(with = "crate::cser")]
    pub alpha1: C64,
    #[serde(with = "crate::cser")]
    pub alpha2: C64,
}

impl H2Params {
    /// `λ₀ = (h₁+h₂−l₁−l₂−α₁−α₂+1)/2`.
    pub fn lambda0(&self) -> C64 {
        (self.h[0] + self.h[1] - self.l[0] - self.l[1] - self.alpha1 - self.alpha2 + 1.0) / 2.0
    }

    /// `q^{(h₁+h₂+l₁+l₂+α₁+α₂)/2}`.
    pub fn p(&self, ctx: &QContext) -> C64 {
        ctx.qpow((self.h[0] + self.h[1] + self.l[0] + self.l[1] + self.alpha1 + self.alpha2) / 2.0)
    }

    /// Coefficient of `x` in the operator.
    pub fn e_coefficient(&self, ctx: &QContext) -> C64 {
        let qp = |e: C64| ctx.qpow(-e);
        self.p(ctx) * ((qp(self.h[1]) + qp(self.l[1])) * self.t[0] + (qp(self.h[0]) + qp(self.l[0])) * self.t[1])
    }

    /// Degree-two parameters whose operator gauges to this one by `x^{λ₀}`:
    /// `α = λ₀+α₁`, `B = A q^{−α₂−λ₀}`, `a_i = B q^{h_i+1/2}t_i`, `b_i = A q^{l_i−1/2}t_i`.
    pub fn to_params2(&self, big_a: C64, ctx: &QContext) -> Params2 {
        let lam0 = self.lambda0();
        let big_b = big_a * ctx.qpow(-self.alpha2 - lam0);
        let a = [0, 1].map(|i| big_b * ctx.qpow(self.h[i] + 0.5) * self.t[i]);
        let b = [0, 1].map(|i| big_a * ctx.qpow(self.l[i] - 0.5) * self.t[i]);
        Params2 { alpha: lam0 + self.alpha1, a, b, big_a, big_b }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct H3Params {
    #[serde(with = "crate::cser::seq")]
    pub h: [C64; 3],
    #[serde(with = "crate::cser::seq")]
    pub l: [C64; 3],
    #[serde(with = "crate::cser::seq")]
    pub t: [C64; 3],
    #[serde(with = "crate::cser")]
    pub alpha: C64,
}

impl H3Params {
    /// `ν = (Σh − Σl + 1)/2`.
    pub fn nu(&self) -> C64 {
        (self.h.iter().sum::<C64>() - self.l.iter().sum::<C64>() + 1.0) / 2.0
    }

    /// Degree-three parameters that gauge to this equation: `q^{-ν} = B/A`,
    /// `b_i = A q^{l_i−1/2}t_i`, `a_i = B q^{h_i+1/2}t_i`.
    pub fn to_params3(&self, big_a: C64, ctx: &QContext) -> Params3 {
        let big_b = big_a * ctx.qpow(-self.nu());
        let a = [0, 1, 2].map(|i| big_b * ctx.qpow(self.h[i] + 0.5) * self.t[i]);
        let b = [0, 1, 2].map(|i| big_a * ctx.qpow(self.l[i] - 0.5) * self.t[i]);
        Params3 { a, b, big_a, big_b }
    }
}

/// Parameters of the q-Heun operator `A⁽⁴⁾ − E`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeunParams {
    #[serde(with = "crate::cser::seq")]
    pub h: [C64; 2],
    #[serde(with = "crate::cser::seq")]
    pub l: [C64; 2],
    #[serde(with = "crate::cser::seq")]
    pub t: [C64; 2],
    #[serde(with = "crate::cser")]
    pub alpha1: C64,
    #[serde(with = "crate::cser")]
    pub alpha2: C64,
    #[serde(with = "crate::cser")]
    pub beta: C64,
    #[serde(rename = "E", with = "crate::cser")]
    pub e: C64,
}

impl HeunParams {
    /// `λ± = (h₁+h₂−l₁−l₂−α₁−α₂±β)/2`.
    pub fn lambda_pm(&self) -> (C64, C64) {
        let s = self.h[0] + self.h[1] - self.l[0] - self.l[1] - self.alpha1 - self.alpha2;
        ((s + self.beta) / 2.0, (s - self.beta) / 2.0)
    }
}

/// Parameters of the degree-three q-Heun operator `A⁽³⁾ − E`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Heun3Params {
    #[serde(with = "crate::cser::seq")]
    pub h: [C64; 3],
    #[serde(with = "crate::cser::seq")]
    pub l: [C64; 3],
    #[serde(with = "crate::cser::seq")]
    pub t: [C64; 3],
    #[serde(with = "crate::cser")]
    pub beta: C64,
    #[serde(rename = "E", with = "crate::cser")]
    pub e: C64,
}

impl Heun3Params {
    /// `μ± = (Σh − Σl + 3 ± β)/2`.
    pub fn mu_pm(&self) -> (C64, C64) {
        let s = self.h.iter().sum::<C64>() - self.l.iter().sum::<C64>() + 3.0;
        ((s + self.beta) / 2.0, (s - self.beta) / 2.0)
    }
}

fn x(q: C64) -> QDiffOperator {
    QDiffOperator::monomial(q, 1, 0, one())
}

fn xp(q: C64, i: i32, c: C64) -> QDiffOperator {
    QDiffOperator::monomial(q, i, 0, c)
}

fn tinv(q: C64) -> QDiffOperator {
    QDiffOperator::monomial(q, 0, -1, one())
}

fn t1(q: C64) -> QDiffOperator {
    QDiffOperator::monomial(q, 0, 1, one())
}

fn lin(q: C64, c0: C64, c1: C64) -> QDiffOperator {
    QDiffOperator::linear_t(q, c0, c1)
}

/// `∏ (x − r)`.
fn x_product(q: C64, roots: &[C64]) -> QDiffOperator {
    roots.iter().fold(QDiffOperator::identity(q), |acc, &r| acc * QDiffOperator::x_minus(q, r))
}

fn sum(ops: Vec<QDiffOperator>) -> QDiffOperator {
    ops.into_iter().reduce(|a, b| a + b).expect("nonempty")
}

/// `x(1−aT)(1−bT) − (1−T)(1−cq⁻¹T)`.
pub fn build_heine(p: &HeineParams, ctx: &QContext) -> QDiffOperator {
    let q = ctx.q;
    let left = x(q) * lin(q, one(), -p.a) * lin(q, one(), -p.b);
    let right = lin(q, one(), -one()) * lin(q, one(), -p.c / q);
    left - right
}

pub fn build_e3(p: &Params3, ctx: &QContext) -> Result<QDiffOperator> {
    p.check_balance(ctx)?;
    Ok(e3_operator(p, ctx))
}

/// The degree-three operator without the balance check.
pub fn e3_operator(p: &Params3, ctx: &QContext) -> QDiffOperator {
    let q = ctx.q;
    let (ba, bb) = (p.big_a, p.big_b);
    let body = sum(vec![
        xp(q, 3, one()) * lin(q, bb, -ba) * lin(q, bb, -ba * q),
        xp(q, 2, -one()) * lin(q, e1(&p.a), -q * e1(&p.b)) * lin(q, bb, -ba),
        x(q) * lin(q, e2(&p.a), -q * e2(&p.b)) * lin(q, one(), -one()),
        lin(q, one(), -q.inv()) * lin(q, one(), -one()) * (-e3(&p.a) / bb),
    ]);
    body * tinv(q)
}

pub fn build_e2(p: &Params2, ctx: &QContext) -> Result<QDiffOperator> {
    p.check_balance(ctx)?;
    Ok(e2_operator(p, ctx))
}

/// The degree-two operator without the balance check.
pub fn e2_operator(p: &Params2, ctx: &QContext) -> QDiffOperator {
    let q = ctx.q;
    let qa = p.qalpha(ctx);
    let (ba, bb) = (p.big_a, p.big_b);
    let body = sum(vec![
        xp(q, 2, one()) * lin(q, one(), -qa) * lin(q, bb, -ba),
        xp(q, 1, -one()) * lin(q, e1(&p.a), -qa * e1(&p.b)) * lin(q, one(), -one()),
        lin(q, one(), -q.inv()) * lin(q, one(), -one()) * (e2(&p.a) / bb),
    ]);
    body * tinv(q)
}

pub fn build_h2(p: &H2Params, ctx: &QContext) -> QDiffOperator {
    let q = ctx.q;
    let u = [0, 1].map(|i| ctx.qpow(p.h[i] + 0.5) * p.t[i]);
    let v = [0, 1].map(|i| ctx.qpow(p.l[i] - 0.5) * p.t[i]);
    let c0 = -p.p(ctx) * (ctx.qpow_re(0.5) + ctx.qpow_re(-0.5)) * p.t[0] * p.t[1];
    sum(vec![
        x_product(q, &u) * tinv(q),
        (x_product(q, &v) * t1(q)).scale(ctx.qpow(p.alpha1 + p.alpha2)),
        xp(q, 2, -(ctx.qpow(p.alpha1) + ctx.qpow(p.alpha2))),
        xp(q, 1, p.e_coefficient(ctx)),
        QDiffOperator::constant(q, c0),
    ])
}

pub fn build_h3(p: &H3Params, ctx: &QContext) -> QDiffOperator {
    let q = ctx.q;
    let u = [0, 1, 2].map(|i| ctx.qpow(p.h[i] + 0.5) * p.t[i]);
    let v = [0, 1, 2].map(|i| ctx.qpow(p.l[i] - 0.5) * p.t[i]);
    let s: C64 = p.h.iter().sum::<C64>() + p.l.iter().sum::<C64>();
    let tt = p.t[0] * p.t[1] * p.t[2];
    let c2 = ctx.qpow_re(0.5) * (0..3).map(|i| (ctx.qpow(p.h[i]) + ctx.qpow(p.l[i])) * p.t[i]).sum::<C64>();
    let c1 =
        -ctx.qpow((s + 1.0) / 2.0) * tt * (0..3).map(|i| (ctx.qpow(-p.h[i]) + ctx.qpow(-p.l[i])) / p.t[i]).sum::<C64>();
    let c0 = ctx.qpow(s / 2.0) * (q + 1.0) * tt;
    let bracket = QDiffOperator::from_terms(q, [((3, 0), -(q + 1.0)), ((2, 0), c2), ((1, 0), c1), ((0, 0), c0)]);
    sum(vec![
        x_product(q, &u) * tinv(q),
        (x_product(q, &v) * t1(q)).scale(ctx.qpow(p.alpha * 2.0 + 1.0)),
        bracket.scale(ctx.qpow(p.alpha)),
    ])
}

/// `x(A⁽⁴⁾ − E)` as a Laurent operator.
pub fn build_qheun(p: &HeunParams, ctx: &QContext) -> QDiffOperator {
    let q = ctx.q;
    let u = [0, 1].map(|i| ctx.qpow(p.h[i] + 0.5) * p.t[i]);
    let v = [0, 1].map(|i| ctx.qpow(p.l[i] - 0.5) * p.t[i]);
    let pp = ctx.qpow((p.h[0] + p.h[1] + p.l[0] + p.l[1] + p.alpha1 + p.alpha2) / 2.0);
    let c0 = -pp * (ctx.qpow(p.beta / 2.0) + ctx.qpow(-p.beta / 2.0)) * p.t[0] * p.t[1];
    sum(vec![
        x_product(q, &u) * tinv(q),
        (x_product(q, &v) * t1(q)).scale(ctx.qpow(p.alpha1 + p.alpha2)),
        xp(q, 2, -(ctx.qpow(p.alpha1) + ctx.qpow(p.alpha2))),
        xp(q, 1, -p.e),
        QDiffOperator::constant(q, c0),
    ])
}

/// `x(A⁽³⁾ − E)` as a Laurent operator.
pub fn build_qheun3(p: &Heun3Params, ctx: &QContext) -> QDiffOperator {
    let q = ctx.q;
    let u = [0, 1, 2].map(|i| ctx.qpow(p.h[i] + 0.5) * p.t[i]);
    let v = [0, 1, 2].map(|i| ctx.qpow(p.l[i] - 0.5) * p.t[i]);
    let s: C64 = p.h.iter().sum::<C64>() + p.l.iter().sum::<C64>();
    let c2 = (0..3).map(|i| (ctx.qpow(p.h[i]) + ctx.qpow(p.l[i])) * p.t[i]).sum::<C64>();
    let c0 = ctx.qpow(s / 2.0) * (ctx.qpow(p.beta / 2.0) + ctx.qpow(-p.beta / 2.0)) * p.t[0] * p.t[1] * p.t[2];
    sum(vec![
        x_product(q, &u) * tinv(q),
        x_product(q, &v) * t1(q),
        QDiffOperator::from_terms(
            q,
            [((3, 0), -(ctx.qpow_re(0.5) + ctx.qpow_re(-0.5))), ((2, 0), c2), ((1, 0), -p.e), ((0, 0), c0)],
        ),
    ])
}

fn cfg(
    x0: Vec<C64>,
    xinf: Vec<C64>,
    t0: Vec<C64>,
    tinf: Vec<C64>,
    d0: Option<C64>,
    dinf: Option<C64>,
) -> Configuration {
    Configuration { roots_x0: x0, roots_xinf: xinf, roots_t0: t0, roots_tinf: tinf, double_x0: d0, double_xinf: dinf }
}

pub fn expected_heine(p: &HeineParams, ctx: &QContext) -> Configuration {
    let q = ctx.q;
    cfg(vec![one(), q / p.c], vec![p.a.inv(), p.b.inv()], vec![one()], vec![p.c / (p.a * p.b * q)], None, None)
}

pub fn expected_e3(p: &Params3, ctx: &QContext) -> Configuration {
    let q = ctx.q;
    let r = p.big_b / p.big_a;
    cfg(
        vec![one(), q],
        vec![r, r / q],
        p.a.iter().map(|a| a / p.big_b).collect(),
        p.b.iter().map(|b| b / p.big_a).collect(),
        Some(one()),
        Some(r / q),
    )
}

pub fn expected_e2(p: &Params2, ctx: &QContext) -> Configuration {
    let q = ctx.q;
    cfg(
        vec![one(), q],
        vec![p.qalpha(ctx).inv(), p.big_b / p.big_a],
        p.a.iter().map(|a| a / p.big_b).collect(),
        p.b.iter().map(|b| b / p.big_a).collect(),
        Some(one()),
        None,
    )
}

fn t_roots<const N: usize>(h: &[C64; N], l: &[C64; N], t: &[C64; N], ctx: &QContext) -> (Vec<C64>, Vec<C64>) {
    ((0..N).map(|i| ctx.qpow(h[i] + 0.5) * t[i]).collect(), (0..N).map(|i| ctx.qpow(l[i] - 0.5) * t[i]).collect())
}

pub fn expected_h2(p: &H2Params, ctx: &QContext) -> Configuration {
    let l0 = ctx.qpow(p.lambda0());
    let (t0, tinf) = t_roots(&p.h, &p.l, &p.t, ctx);
    cfg(vec![l0, l0 * ctx.q], vec![ctx.qpow(-p.alpha1), ctx.qpow(-p.alpha2)], t0, tinf, Some(l0), None)
}

pub fn expected_h3(p: &H3Params, ctx: &QContext) -> Configuration {
    let a0 = ctx.qpow(p.nu() - p.alpha);
    let ainf = ctx.qpow(-p.alpha - 1.0);
    let (t0, tinf) = t_roots(&p.h, &p.l, &p.t, ctx);
    cfg(vec![a0, a0 * ctx.q], vec![ainf * ctx.q, ainf], t0, tinf, Some(a0), Some(ainf))
}

/// The x = 0 exponents of the cleared q-Heun operator are `λ± + 1`.
pub fn expected_qheun(p: &HeunParams, ctx: &QContext) -> Configuration {
    let (lp, lm) = p.lambda_pm();
    let (t0, tinf) = t_roots(&p.h, &p.l, &p.t, ctx);
    cfg(
        vec![ctx.qpow(lp + 1.0), ctx.qpow(lm + 1.0)],
        vec![ctx.qpow(-p.alpha1), ctx.qpow(-p.alpha2)],
        t0,
        tinf,
        None,
        None,
    )
}

pub fn expected_qheun3(p: &Heun3Params, ctx: &QContext) -> Configuration {
    let (mp, mm) = p.mu_pm();
    let (t0, tinf) = t_roots(&p.h, &p.l, &p.t, ctx);
    let lo = ctx.qpow_re(-0.5);
    cfg(vec![ctx.qpow(mp), ctx.qpow(mm)], vec![lo, ctx.qpow_re(0.5)], t0, tinf, None, Some(lo))
}

/// A named equation together with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "equation", content = "params", rename_all = "snake_case")]
pub enum Equation {
    Heine(HeineParams),
    E2(Params2),
    E3(Params3),
    H2(H2Params),
    H3(H3Params),
    Qheun(HeunParams),
    Qheun3(Heun3Params),
}

impl Equation {
    pub fn name(&self) -> &'static str {
        match self {
            Equation::Heine(_) => "heine",
            Equation::E2(_) => "e2",
            Equation::E3(_) => "e3",
            Equation::H2(_) => "h2",
            Equation::H3(_) => "h3",
            Equation::Qheun(_) => "qheun",
            Equation::Qheun3(_) => "qheun3",
        }
    }

    pub fn validate(&self, ctx: &QContext) -> Result<()> {
        match self {
            Equation::Heine(p) => p.validate(ctx),
            Equation::E2(p) => p.validate(ctx),
            Equation::E3(p) => p.validate(ctx),
            _ => Ok(()),
        }
    }

    pub fn build(&self, ctx: &QContext) -> Result<QDiffOperator> {
        Ok(match self {
            Equation::Heine(p) => build_heine(p, ctx),
            Equation::E2(p) => build_e2(p, ctx)?,
            Equation::E3(p) => build_e3(p, ctx)?,
            Equation::H2(p) => build_h2(p, ctx),
            Equation::H3(p) => build_h3(p, ctx),
            Equation::Qheun(p) => build_qheun(p, ctx),
            Equation::Qheun3(p) => build_qheun3(p, ctx),
        })
    }

    /// Like [`Equation::build`] but skips the balance check.
    pub fn operator_unchecked(&self, ctx: &QContext) -> QDiffOperator {
        match self {
            Equation::E2(p) => e2_operator(p, ctx),
            Equation::E3(p) => e3_operator(p, ctx),
            other => other.build(ctx).expect("only the balanced families can fail"),
        }
    }

    pub fn expected_configuration(&self, ctx: &QContext) -> Configuration {
        match self {
            Equation::Heine(p) => expected_heine(p, ctx),
            Equation::E2(p) => expected_e2(p, ctx),
            Equation::E3(p) => expected_e3(p, ctx),
            Equation::H2(p) => expected_h2(p, ctx),
            Equation::H3(p) => expected_h3(p, ctx),
            Equation::Qheun(p) => expected_qheun(p, ctx),
            Equation::Qheun3(p) => expected_qheun3(p, ctx),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opalgebra::{configuration, is_nonlog, Boundary};
    use crate::qcore::rel_close;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn p3(ctx: &QContext) -> Params3 {
        Params3::balanced(
            [c(0.8, 0.3), c(1.3, -0.5), c(-0.6, 0.9)],
            [c(1.1, 0.2), c(0.5, -0.7), c(0.9, 0.9)],
            c(0.7, -0.4),
            ctx,
        )
    }

    fn h3() -> H3Params {
        H3Params {
            h: [c(0.1, 0.2), c(-0.3, 0.1), c(0.25, -0.15)],
            l: [c(0.2, -0.1), c(0.05, 0.2), c(-0.4, 0.0)],
            t: [c(0.9, 0.3), c(-1.2, 0.4), c(0.6, -1.1)],
            alpha: c(0.3, -0.2),
        }
    }

    #[test]
    fn symmetric_functions() {
        let v = [c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)];
        assert_eq!(e1(&v), c(6.0, 0.0));
        assert_eq!(e2(&v), c(11.0, 0.0));
        assert_eq!(e3(&v), c(6.0, 0.0));
    }

    #[test]
    fn e3_balance_and_figure() {
        let ctx = QContext::real(0.5);
        let p = p3(&ctx);
        let l = build_e3(&p, &ctx).unwrap();
        let cf = configuration(&l, &ctx).unwrap();
        assert!(cf.matches(&expected_e3(&p, &ctx), 1e-8), "{cf:?}");
        assert_eq!(is_nonlog(&l, c(1.0, 0.0), Boundary::X0, &ctx), Ok(true));
        let mut bad = p;
        bad.big_b *= 1.01;
        assert!(matches!(build_e3(&bad, &ctx), Err(QError::Balance(_))));
    }

    #[test]
    fn h3_figure_and_gauge_to_e3() {
        let ctx = QContext::real(0.43);
        let p = h3();
        let l = build_h3(&p, &ctx);
        let cf = configuration(&l, &ctx).unwrap();
        assert!(cf.matches(&expected_h3(&p, &ctx), 1e-8), "{cf:?}");
        assert_eq!(is_nonlog(&l, ctx.qpow(-p.alpha), Boundary::XInf, &ctx), Ok(true));
        let e = build_e3(&p.to_params3(c(0.8, 0.5), &ctx), &ctx).unwrap();
        let g = e.gauge_power(-(p.nu() - p.alpha));
        assert!(g.proportional_to(&l, 1e-12));
    }

    #[test]
    fn h2_gauges_to_e2() {
        let ctx = QContext::real(0.45);
        let p = H2Params {
            h: [c(0.1, 0.2), c(-0.3, 0.1)],
            l: [c(0.2, -0.1), c(0.05, 0.2)],
            t: [c(0.9, 0.3), c(-1.2, 0.4)],
            alpha1: c(0.3, -0.2),
            alpha2: c(-0.1, 0.25),
        };
        let p2 = p.to_params2(c(0.9, 0.3), &ctx);
        p2.check_balance(&ctx).unwrap();
        let g = build_e2(&p2, &ctx).unwrap().gauge_power(-p.lambda0());
        assert!(g.proportional_to(&build_h2(&p, &ctx), 1e-12));
    }

    #[test]
    fn h2_is_limit_of_qheun_at_beta_one() {
        let ctx = QContext::real(0.5);
        let p = H2Params {
            h: [c(0.1, 0.2), c(-0.3, 0.1)],
            l: [c(0.2, -0.1), c(0.05, 0.2)],
            t: [c(0.9, 0.3), c(-1.2, 0.4)],
            alpha1: c(0.3, -0.2),
            alpha2: c(-0.1, 0.25),
        };
        let hp = HeunParams {
            h: p.h,
            l: p.l,
            t: p.t,
            alpha1: p.alpha1,
            alpha2: p.alpha2,
            beta: c(1.0, 0.0),
            e: -p.e_coefficient(&ctx),
        };
        assert!(build_qheun(&hp, &ctx).deviation_at(&build_h2(&p, &ctx), (2, 0)).unwrap() < 1e-14);
        let l = build_h2(&p, &ctx);
        assert!(configuration(&l, &ctx).unwrap().matches(&expected_h2(&p, &ctx), 1e-8));
    }

    #[test]
    fn heun_energy_touches_one_coefficient() {
        let ctx = QContext::real(0.5);
        let base = Heun3Params {
            h: [c(0.1, 0.2), c(-0.3, 0.1), c(0.25, -0.15)],
            l: [c(0.2, -0.1), c(0.05, 0.2), c(-0.4, 0.0)],
            t: [c(0.9, 0.3), c(-1.2, 0.4), c(0.6, -1.1)],
            beta: c(0.4, 0.1),
            e: c(0.3, 0.0),
        };
        let other = Heun3Params { e: c(-1.7, 0.2), ..base };
        let (l1, l2) = (build_qheun3(&base, &ctx), build_qheun3(&other, &ctx));
        let diff = &l1 - &l2;
        assert_eq!(diff.coeffs().keys().copied().collect::<Vec<_>>(), vec![(1, 0)]);
        let (c1, c2) = (configuration(&l1, &ctx).unwrap(), configuration(&l2, &ctx).unwrap());
        assert!(c1.matches(&c2, 1e-10));
        assert!(c1.matches(&expected_qheun3(&base, &ctx), 1e-8));
    }

    #[test]
    fn heine_expected_and_product_relation() {
        let ctx = QContext::real(0.5);
        let p = HeineParams::new(c(0.7, 0.3), c(1.4, -0.2), c(0.45, 0.8));
        let cf = configuration(&build_heine(&p, &ctx), &ctx).unwrap();
        assert!(cf.matches(&expected_heine(&p, &ctx), 1e-8));
        assert!(cf.product_defect() < 1e-12);
        assert!(HeineParams::new(p.a, p.b, ctx.q.powi(-3)).validate(&ctx).is_err());
    }

    #[test]
    fn genericity_window() {
        let ctx = QContext::real(0.5);
        assert!(check_generic("r", ctx.q.powi(5), &ctx).is_err());
        assert!(check_generic("r", c(0.3, 0.1), &ctx).is_ok());
        let p =
            Params2::balanced(c(0.4, 0.1), [c(1.0, 0.2), c(0.6, -0.3)], [c(0.8, 0.0), c(1.2, 0.5)], c(0.9, 0.1), &ctx);
        assert!(p.check_balance(&ctx).is_ok());
        assert!(rel_close(p.lambda(&ctx), ctx.log_q(p.big_b / p.big_a), 1e-15));
    }
}
