//! Jackson-integral solutions of the degree-three and degree-two equations,
//! their single-endpoint values, the cocycle relation and the closed forms of
//! the degenerate case `aᵢ = bᵢ`, `A = q²B`.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;

use crate::equations::{build_e3, check_generic, H2Params, Params2, Params3};
use crate::error::{QError, Result};
use crate::qcore::{cpow, qpoch_ratio, JordanPochhammer, Measure};
use crate::qseries::appell_phi1;
use crate::{QContext, C64};

/// Base point of the bilateral sum used for the endpoint at infinity.
pub const DEFAULT_SIGMA: C64 = C64::new(0.7, 0.2);

fn zero() -> C64 {
    C64::new(0.0, 0.0)
}

fn one() -> C64 {
    C64::new(1.0, 0.0)
}

/// Endpoint of a Jackson integral. Indices are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Endpoint {
    Zero,
    /// `q/a_i`
    QOverA(u8),
    /// `q/(Ax)`
    QOverAx,
    /// `b_i`
    B(u8),
    /// `Bx`
    Bx,
    /// `σ·∞`, the bilateral sum through [`DEFAULT_SIGMA`].
    SigmaInfinity,
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Endpoint::Zero => write!(f, "0"),
            Endpoint::QOverA(i) => write!(f, "q/a{i}"),
            Endpoint::QOverAx => write!(f, "q/Ax"),
            Endpoint::B(i) => write!(f, "b{i}"),
            Endpoint::Bx => write!(f, "Bx"),
            Endpoint::SigmaInfinity => write!(f, "inf"),
        }
    }
}

impl FromStr for Endpoint {
    type Err = QError;

    fn from_str(s: &str) -> Result<Self> {
        let idx = |t: &str| t.parse::<u8>().ok().filter(|i| (1..=3).contains(i));
        let bad = || QError::Invalid(format!("unknown endpoint {s:?}"));
        Ok(match s.trim() {
            "0" => Endpoint::Zero,
            "q/Ax" => Endpoint::QOverAx,
            "Bx" => Endpoint::Bx,
            "inf" => Endpoint::SigmaInfinity,
            t if t.starts_with("q/a") => Endpoint::QOverA(idx(&t[3..]).ok_or_else(bad)?),
            t if t.starts_with('b') => Endpoint::B(idx(&t[1..]).ok_or_else(bad)?),
            _ => return Err(bad()),
        })
    }
}

impl Endpoint {
    /// Endpoints of the plain integrals for an equation with `n` pairs `(aᵢ, bᵢ)`.
    pub fn tau_set(n: u8, with_zero: bool) -> Vec<Endpoint> {
        let mut v: Vec<Endpoint> = if with_zero { vec![Endpoint::Zero] } else { vec![] };
        v.extend((1..=n).map(Endpoint::QOverA));
        v.push(Endpoint::QOverAx);
        v
    }

    /// Endpoints of the tilde integrals.
    pub fn sigma_set(n: u8, with_infinity: bool) -> Vec<Endpoint> {
        let mut v: Vec<Endpoint> = (1..=n).map(Endpoint::B).collect();
        v.push(Endpoint::Bx);
        if with_infinity {
            v.push(Endpoint::SigmaInfinity);
        }
        v
    }

    /// Unordered pairs from a list, in lexicographic order.
    pub fn pairs(set: &[Endpoint]) -> Vec<(Endpoint, Endpoint)> {
        let mut out = Vec::new();
        for i in 0..set.len() {
            for j in i + 1..set.len() {
                out.push((set[i], set[j]));
            }
        }
        out
    }
}

fn inadmissible(e: Endpoint, what: &str) -> QError {
    QError::Invalid(format!("endpoint {e} is not admissible for {what}"))
}

fn tau_value(e: Endpoint, a: &[C64], big_a: C64, x: C64, ctx: &QContext, what: &str) -> Result<Option<C64>> {
    match e {
        Endpoint::Zero if what.starts_with("phi2") => Ok(None),
        Endpoint::QOverA(i) if (i as usize) <= a.len() && i >= 1 => Ok(Some(ctx.q / a[i as usize - 1])),
        Endpoint::QOverAx => Ok(Some(ctx.q / (big_a * x))),
        _ => Err(inadmissible(e, what)),
    }
}

fn sigma_value(e: Endpoint, b: &[C64], big_b: C64, x: C64, what: &str) -> Result<Option<C64>> {
    match e {
        Endpoint::SigmaInfinity if what.starts_with("phi2") => Ok(None),
        Endpoint::B(i) if (i as usize) <= b.len() && i >= 1 => Ok(Some(b[i as usize - 1])),
        Endpoint::Bx => Ok(Some(big_b * x)),
        _ => Err(inadmissible(e, what)),
    }
}

fn phi3_integrand(p: &Params3, x: C64) -> JordanPochhammer {
    let mut num = vec![p.big_a * x];
    num.extend(p.a);
    let mut den = vec![p.big_b * x];
    den.extend(p.b);
    JordanPochhammer::new(zero(), num, den)
}

fn phi3_tilde_integrand(p: &Params3, x: C64, ctx: &QContext) -> JordanPochhammer {
    let q = ctx.q;
    let mut num = vec![q / (p.big_b * x)];
    num.extend(p.b.map(|b| q / b));
    let mut den = vec![q / (p.big_a * x)];
    den.extend(p.a.map(|a| q / a));
    JordanPochhammer::new(zero(), num, den)
}

fn phi2_integrand(p: &Params2, x: C64) -> JordanPochhammer {
    let mut num = vec![p.big_a * x];
    num.extend(p.a);
    let mut den = vec![p.big_b * x];
    den.extend(p.b);
    JordanPochhammer::new(p.alpha, num, den)
}

fn phi2_tilde_integrand(p: &Params2, x: C64, ctx: &QContext) -> JordanPochhammer {
    let q = ctx.q;
    let mut num = vec![q / (p.big_b * x)];
    num.extend(p.b.map(|b| q / b));
    let mut den = vec![q / (p.big_a * x)];
    den.extend(p.a.map(|a| q / a));
    JordanPochhammer::new(zero(), num, den)
}

/// `∫_0^τ (Axt, a₁t, a₂t, a₃t)_∞/(Bxt, b₁t, b₂t, b₃t)_∞ d_qt`.
pub fn phi3_single(p: &Params3, tau: Endpoint, x: C64, ctx: &QContext) -> Result<C64> {
    let t = tau_value(tau, &p.a, p.big_a, x, ctx, "phi3")?.expect("phi3 has no zero endpoint");
    phi3_integrand(p, x).jackson(t, Measure::Dqt, ctx)
}

/// `φ₃(x; τ₁, τ₂) = ∫_{τ₁}^{τ₂}` of the degree-three integrand.
///
/// Genericity of `B/A` is not enforced here: the sums stay well defined on
/// the lattice `B/A ∈ q^ℤ`, which the degenerate closed forms rely on.
pub fn phi3(p: &Params3, t1: Endpoint, t2: Endpoint, x: C64, ctx: &QContext) -> Result<C64> {
    tau_value(t1, &p.a, p.big_a, x, ctx, "phi3")?;
    tau_value(t2, &p.a, p.big_a, x, ctx, "phi3")?;
    if t1 == t2 {
        return Ok(zero());
    }
    Ok(phi3_single(p, t2, x, ctx)? - phi3_single(p, t1, x, ctx)?)
}

/// `x^λ ∫_0^σ (qs/(Bx), qs/b₁, qs/b₂, qs/b₃)_∞/(qs/(Ax), qs/a₁, qs/a₂, qs/a₃)_∞ d_qs`.
pub fn phi3_tilde_single(p: &Params3, sigma: Endpoint, x: C64, ctx: &QContext) -> Result<C64> {
    let s = sigma_value(sigma, &p.b, p.big_b, x, "phi3_tilde")?.expect("phi3_tilde has no infinite endpoint");
    Ok(cpow(x, p.lambda(ctx))? * phi3_tilde_integrand(p, x, ctx).jackson(s, Measure::Dqt, ctx)?)
}

/// `φ̃₃(x; σ₁, σ₂)`, the tilde integral between two σ-endpoints.
pub fn phi3_tilde(p: &Params3, s1: Endpoint, s2: Endpoint, x: C64, ctx: &QContext) -> Result<C64> {
    sigma_value(s1, &p.b, p.big_b, x, "phi3_tilde")?;
    sigma_value(s2, &p.b, p.big_b, x, "phi3_tilde")?;
    if s1 == s2 {
        return Ok(zero());
    }
    Ok(phi3_tilde_single(p, s2, x, ctx)? - phi3_tilde_single(p, s1, x, ctx)?)
}

fn check_lambda2(p: &Params2, ctx: &QContext) -> Result<()> {
    check_generic("B/A", p.big_b / p.big_a, ctx)
}

fn phi2_single(p: &Params2, tau: Endpoint, x: C64, ctx: &QContext) -> Result<C64> {
    match tau_value(tau, &p.a, p.big_a, x, ctx, "phi2")? {
        None => Ok(zero()),
        Some(t) => phi2_integrand(p, x).jackson(t, Measure::DqtOverT, ctx),
    }
}

/// `φ₂(x; τ₁, τ₂) = ∫_{τ₁}^{τ₂} t^α (Axt, a₁t, a₂t)_∞/(Bxt, b₁t, b₂t)_∞ d_qt/t`.
pub fn phi2(p: &Params2, t1: Endpoint, t2: Endpoint, x: C64, ctx: &QContext) -> Result<C64> {
    check_lambda2(p, ctx)?;
    tau_value(t1, &p.a, p.big_a, x, ctx, "phi2")?;
    tau_value(t2, &p.a, p.big_a, x, ctx, "phi2")?;
    if t1 == t2 {
        return Ok(zero());
    }
    Ok(phi2_single(p, t2, x, ctx)? - phi2_single(p, t1, x, ctx)?)
}

fn phi2_tilde_single(p: &Params2, sigma: Endpoint, x: C64, ctx: &QContext) -> Result<C64> {
    let f = phi2_tilde_integrand(p, x, ctx);
    match sigma_value(sigma, &p.b, p.big_b, x, "phi2_tilde")? {
        None => f.jackson_bilateral(DEFAULT_SIGMA, Measure::Dqt, ctx),
        Some(s) => f.jackson(s, Measure::Dqt, ctx),
    }
}

/// `φ̃₂(x; σ₁, σ₂) = x^λ ∫_{σ₁}^{σ₂} (qs/(Bx), qs/b₁, qs/b₂)_∞/(qs/(Ax), qs/a₁, qs/a₂)_∞ d_qs`.
pub fn phi2_tilde(p: &Params2, s1: Endpoint, s2: Endpoint, x: C64, ctx: &QContext) -> Result<C64> {
    check_lambda2(p, ctx)?;
    sigma_value(s1, &p.b, p.big_b, x, "phi2_tilde")?;
    sigma_value(s2, &p.b, p.big_b, x, "phi2_tilde")?;
    if s1 == s2 {
        return Ok(zero());
    }
    let d = phi2_tilde_single(p, s2, x, ctx)? - phi2_tilde_single(p, s1, x, ctx)?;
    Ok(cpow(x, p.lambda(ctx))? * d)
}

/// Value of the degree-three operator on a one-sided integral: `(1−q)q(A−B)x²`.
pub fn lemma_value(p: &Params3, x: C64, ctx: &QContext) -> C64 {
    (one() - ctx.q) * ctx.q * (p.big_a - p.big_b) * x * x
}

/// Printed value on a one-sided tilde integral: `(1−q)q⁻¹(B−A)x^{λ+1}`.
pub fn lemma_value_tilde(p: &Params3, x: C64, ctx: &QContext) -> Result<C64> {
    Ok((one() - ctx.q) / ctx.q * (p.big_b - p.big_a) * cpow(x, p.lambda(ctx) + 1.0)?)
}

/// Measured value on a one-sided tilde integral: the printed one times `q²b₁b₂b₃/A`.
pub fn lemma_value_tilde_fitted(p: &Params3, x: C64, ctx: &QContext) -> Result<C64> {
    let k = ctx.q * ctx.q * p.b[0] * p.b[1] * p.b[2] / p.big_a;
    Ok(lemma_value_tilde(p, x, ctx)? * k)
}

fn rel_dev(v: C64, target: C64) -> f64 {
    (v - target).norm() / target.norm().max(f64::MIN_POSITIVE)
}

/// Relative deviation of `E₃ ∫_0^τ` from [`lemma_value`].
pub fn check_intcalcu(p: &Params3, tau: Endpoint, x: C64, ctx: &QContext) -> Result<f64> {
    let l = build_e3(p, ctx)?;
    let v = l.apply(|y| phi3_single(p, tau, y, ctx), x)?;
    Ok(rel_dev(v, lemma_value(p, x, ctx)))
}

/// Deviations of `E₃` on a one-sided tilde integral from the printed and
/// the measured constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntCalcu {
    pub literal: f64,
    pub fitted: f64,
}

pub fn check_intcalcu_tilde(p: &Params3, sigma: Endpoint, x: C64, ctx: &QContext) -> Result<IntCalcu> {
    let l = build_e3(p, ctx)?;
    let v = l.apply(|y| phi3_tilde_single(p, sigma, y, ctx), x)?;
    Ok(IntCalcu {
        literal: rel_dev(v, lemma_value_tilde(p, x, ctx)?),
        fitted: rel_dev(v, lemma_value_tilde_fitted(p, x, ctx)?),
    })
}

/// `|φ₃(τ₁,τ₂) + φ₃(τ₂,τ₃) + φ₃(τ₃,τ₁)| / max |φ₃|`.
pub fn cocycle_check(p: &Params3, t1: Endpoint, t2: Endpoint, t3: Endpoint, x: C64, ctx: &QContext) -> Result<f64> {
    let v = [phi3(p, t1, t2, x, ctx)?, phi3(p, t2, t3, x, ctx)?, phi3(p, t3, t1, x, ctx)?];
    let m = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if m == 0.0 {
        return Ok(0.0);
    }
    Ok(v.iter().sum::<C64>().norm() / m)
}

/// Cocycle relations among the six integrals over four endpoints, columns
/// ordered `(12), (13), (23), (14), (24), (34)`.
pub fn relation_matrix() -> [[f64; 6]; 4] {
    [
        [1.0, -1.0, 1.0, 0.0, 0.0, 0.0],
        [1.0, 0.0, 0.0, -1.0, 1.0, 0.0],
        [0.0, 1.0, 0.0, -1.0, 0.0, 1.0],
        [0.0, 0.0, 1.0, 0.0, -1.0, 1.0],
    ]
}

/// Column order of [`relation_matrix`] as endpoint index pairs.
pub const RELATION_COLUMNS: [(usize, usize); 6] = [(0, 1), (0, 2), (1, 2), (0, 3), (1, 3), (2, 3)];

/// Rank via singular values above `1e-10·σ_max`.
pub fn numerical_rank(rows: &[[f64; 6]]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let m = DMatrix::from_fn(rows.len(), 6, |i, j| rows[i][j]);
    let sv = m.singular_values();
    let smax = sv.iter().copied().fold(0.0, f64::max);
    sv.iter().filter(|&&s| s > 1e-10 * smax).count()
}

fn special_taus(p: &Params3, t1: Endpoint, t2: Endpoint, x: C64, ctx: &QContext) -> Result<(C64, C64)> {
    let v1 = tau_value(t1, &p.a, p.big_a, x, ctx, "phi3")?.expect("no zero endpoint");
    let v2 = tau_value(t2, &p.a, p.big_a, x, ctx, "phi3")?.expect("no zero endpoint");
    Ok((v1, v2))
}

fn special_sigmas(p: &Params3, s1: Endpoint, s2: Endpoint, x: C64) -> Result<(C64, C64)> {
    let v1 = sigma_value(s1, &p.b, p.big_b, x, "phi3_tilde")?.expect("no infinite endpoint");
    let v2 = sigma_value(s2, &p.b, p.big_b, x, "phi3_tilde")?.expect("no infinite endpoint");
    Ok((v1, v2))
}

/// Closed form of `φ₃` when `aᵢ = bᵢ` and `A = q²B`: `(τ₂−τ₁)/((1−Bxτ₁)(1−Bxτ₂))`.
pub fn special_phi3(p: &Params3, t1: Endpoint, t2: Endpoint, x: C64, ctx: &QContext) -> Result<C64> {
    let (u, v) = special_taus(p, t1, t2, x, ctx)?;
    let bx = p.big_b * x;
    Ok((v - u) / ((one() - bx * u) * (one() - bx * v)))
}

/// The printed closed form, which carries an extra factor `1−q`.
pub fn special_phi3_literal(p: &Params3, t1: Endpoint, t2: Endpoint, x: C64, ctx: &QContext) -> Result<C64> {
    Ok((one() - ctx.q) * special_phi3(p, t1, t2, x, ctx)?)
}

/// Closed form of `φ̃₃` in the same case: `(qB)²(σ₂−σ₁)/((qBx−σ₁)(qBx−σ₂))`.
pub fn special_phi3_tilde(p: &Params3, s1: Endpoint, s2: Endpoint, x: C64, ctx: &QContext) -> Result<C64> {
    let (u, v) = special_sigmas(p, s1, s2, x)?;
    let qb = ctx.q * p.big_b;
    Ok(qb * qb * (v - u) / ((qb * x - u) * (qb * x - v)))
}

pub fn special_phi3_tilde_literal(p: &Params3, s1: Endpoint, s2: Endpoint, x: C64, ctx: &QContext) -> Result<C64> {
    Ok((one() - ctx.q) * special_phi3_tilde(p, s1, s2, x, ctx)?)
}

/// `∫_0^1 t^α (qt, b₁x₁t, b₂x₂t)_∞/(ct/q^α, x₁t, x₂t)_∞ d_qt/t`.
pub fn andrews_integral(alpha: C64, b1: C64, b2: C64, c: C64, x1: C64, x2: C64, ctx: &QContext) -> Result<C64> {
    let qa = ctx.qpow(alpha);
    let f = JordanPochhammer::new(alpha, vec![ctx.q, b1 * x1, b2 * x2], vec![c / qa, x1, x2]);
    f.jackson(one(), Measure::DqtOverT, ctx)
}

/// `(1−q)(q, c)_∞/(q^α, c/q^α)_∞ · Φ⁽¹⁾(q^α; b₁, b₂; c; x₁, x₂)`.
pub fn andrews_rhs(alpha: C64, b1: C64, b2: C64, c: C64, x1: C64, x2: C64, ctx: &QContext) -> Result<C64> {
    let qa = ctx.qpow(alpha);
    let k = qpoch_ratio(&[ctx.q, c], &[qa, c / qa], ctx)?;
    Ok((one() - ctx.q) * k * appell_phi1(qa, b1, b2, c, x1, x2, ctx)?)
}

/// Radius beyond which both Appell arguments of [`g1_andrews`] are inside the unit disc.
pub fn g1_radius(p: &H2Params, ctx: &QContext) -> f64 {
    (0..2).map(|i| (ctx.qpow(p.l[i] + 0.5) * p.t[i]).norm()).fold(0.0, f64::max)
}

/// `x^{−α₁} Φ⁽¹⁾(q^{λ₀+α₁}; q^{λ₀+α₁−h₂+l₂}, q^{λ₀+α₁−h₁+l₁}; q^{α₁−α₂+1}; q^{l₁+1/2}t₁/x, q^{l₂+1/2}t₂/x)`.
pub fn g1_andrews(p: &H2Params, x: C64, ctx: &QContext) -> Result<C64> {
    let lam0 = p.lambda0();
    let e = lam0 + p.alpha1;
    let x1 = ctx.qpow(p.l[0] + 0.5) * p.t[0] / x;
    let x2 = ctx.qpow(p.l[1] + 0.5) * p.t[1] / x;
    if x1.norm() >= 1.0 || x2.norm() >= 1.0 {
        return Err(QError::OutOfDomain(vec![x]));
    }
    let v = appell_phi1(
        ctx.qpow(e),
        ctx.qpow(e - p.h[1] + p.l[1]),
        ctx.qpow(e - p.h[0] + p.l[0]),
        ctx.qpow(p.alpha1 - p.alpha2 + 1.0),
        x1,
        x2,
        ctx,
    )?;
    Ok(cpow(x, -p.alpha1)? * v)
}

/// The same function through `φ₂(x; 0, q/(Ax))` of the associated degree-two
/// parameters ([`H2Params::to_params2`]).
pub fn g1_from_phi2(p: &H2Params, big_a: C64, x: C64, ctx: &QContext) -> Result<C64> {
    let lam0 = p.lambda0();
    let p2 = p.to_params2(big_a, ctx);
    let k = qpoch_ratio(
        &[ctx.qpow(lam0 + p.alpha1), ctx.qpow(1.0 - p.alpha2 - lam0)],
        &[ctx.q, ctx.qpow(p.alpha1 - p.alpha2 + 1.0)],
        ctx,
    )?;
    let v = phi2(&p2, Endpoint::Zero, Endpoint::QOverAx, x, ctx)?;
    Ok(k / (one() - ctx.q) * cpow(big_a / ctx.q, lam0 + p.alpha1)? * cpow(x, lam0)? * v)
}
