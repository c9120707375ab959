//! Series solutions: the six `₈W₇` solutions of the degree-three equation,
//! the `₃φ₂` solutions of the degree-two equation and the 32 solutions of
//! the Heine equation, each with its convergence region.

use super::Annulus;
use crate::equations::{HeineParams, Params2, Params3};
use crate::error::{QError, Result};
use crate::qcore::{cpow, qpoch_ratio};
use crate::qseries::{phi_of, w87};
use crate::{QContext, C64};

/// Degree-two series that satisfy the equation for generic parameters.
pub const THMSER2_GENERIC: [u8; 3] = [1, 2, 4];

/// Heine solutions that hold for generic parameters.
pub const HEINE_GENERIC: [u8; 16] = [1, 2, 3, 4, 5, 6, 7, 8, 17, 18, 19, 20, 21, 22, 23, 24];

/// Heine solutions that hold only when one series terminates.
pub const HEINE_TERMINATING: [u8; 16] = [9, 10, 11, 12, 13, 14, 15, 16, 25, 26, 27, 28, 29, 30, 31, 32];

/// Degree-two series that hold only when terminating.
pub const THMSER2_TERMINATING: [u8; 3] = [3, 5, 6];

fn zero() -> C64 {
    C64::new(0.0, 0.0)
}

fn one() -> C64 {
    C64::new(1.0, 0.0)
}

fn out_of_range(kind: &str, which: u8) -> QError {
    QError::Invalid(format!("no {kind} solution #{which}"))
}

fn pr(num: &[C64], den: &[C64], ctx: &QContext) -> Result<C64> {
    qpoch_ratio(num, den, ctx)
}

/// Region where [`e3_series`] `which` converges.
pub fn e3_domain(which: u8, p: &Params3, ctx: &QContext) -> Result<Annulus> {
    let q = ctx.q;
    let [a1, _, _] = p.a;
    let b3 = p.b[2];
    Ok(match which {
        1 | 4 => Annulus::disc((a1 / (q * p.big_b)).norm()),
        2 | 3 => Annulus::when(converges(q * b3 / a1, ctx)),
        5 => Annulus::exterior((q * b3 / p.big_a).norm()),
        6 => Annulus::when(converges(q * p.big_b / p.big_a, ctx)),
        _ => return Err(out_of_range("degree-three", which)),
    })
}

/// The `₈W₇` series solutions of the degree-three equation, `which ∈ 1..=6`.
pub fn e3_series(which: u8, p: &Params3, x: C64, ctx: &QContext) -> Result<C64> {
    p.validate(ctx)?;
    let q = ctx.q;
    let [a1, a2, a3] = p.a;
    let [b1, b2, b3] = p.b;
    let (ba, bb) = (p.big_a, p.big_b);
    let ax = ba * x;
    let bx = bb * x;
    match which {
        1 => Ok(pr(&[q * ax / a2], &[q * bx / a2], ctx)?
            * w87(a3 * ba / (a2 * bb), q * b1 / a2, q * b2 / a2, q * b3 / a2, a3 / bx, ba / bb, q * bx / a1, ctx)?),
        2 => Ok(pr(
            &[a3 * ax / (b1 * b3), a3 * ax / (b2 * b3), q * ax / a2],
            &[q * bx / a1, q * bx / a2, q * a3 * ax / (a2 * b3)],
            ctx,
        )? * w87(
            a3 * ax / (a2 * b3),
            q * bx / a2,
            q * b1 / a2,
            q * b2 / a2,
            a3 / b3,
            ax / b3,
            q * b3 / a1,
            ctx,
        )?),
        3 => Ok(x.inv()
            * pr(
                &[q * a1 / ax, ax / a1, a2 * a3 / (b3 * bx), q * a2 / ax, q * a3 / ax],
                &[q * bx / a1, q * b1 / ax, q * b2 / ax, q * b3 / ax, q * a2 * a3 / (b3 * ax)],
                ctx,
            )?
            * w87(a2 * a3 / (b3 * ax), q * b1 / ax, q * bb / ba, q * b2 / ax, a2 / b3, a3 / b3, q * b3 / a1, ctx)?),
        4 => Ok(x.inv()
            * pr(
                &[
                    q * a1 / ax,
                    q * a2 / ax,
                    q * a3 / ax,
                    ax / a1,
                    a2 * a3 / (b1 * bx),
                    a2 * a3 / (b2 * bx),
                    a2 * a3 / (b3 * bx),
                ],
                &[q * b1 / ax, q * b2 / ax, q * b3 / ax, q * a2 * a3 / (ax * bx)],
                ctx,
            )?
            * w87(a2 * a3 / (ax * bx), q * b1 / ax, q * b2 / ax, q * b3 / ax, a2 / bx, a3 / bx, q * bx / a1, ctx)?),
        5 => Ok(pr(&[q * ax / a1, a1 / ax, a2 * a3 / (b3 * bx)], &[q * b1 / ax, q * b2 / ax, q * bx / a1], ctx)?
            * w87(a2 * a3 / (a1 * b3), q * bx / a1, q * b1 / a1, q * b2 / a1, a2 / b3, a3 / b3, q * b3 / ax, ctx)?),
        6 => Ok(pr(
            &[q * ax / a1, a1 / ax, a2 * a3 / (b1 * bx), a2 * a3 / (b2 * bx), a2 * a3 / (b3 * bx)],
            &[q * b1 / ax, q * b2 / ax, q * b3 / ax, q * bx / a1, q * a2 * a3 / (a1 * bx)],
            ctx,
        )? * w87(
            a2 * a3 / (a1 * bx),
            q * b1 / a1,
            q * b2 / a1,
            q * b3 / a1,
            a2 / bx,
            a3 / bx,
            q * bb / ba,
            ctx,
        )?),
        _ => Err(out_of_range("degree-three", which)),
    }
}

/// Whether a geometric tail with ratio `z` drops below `tail_tol` within
/// `max_terms` terms.
fn converges(z: C64, ctx: &QContext) -> bool {
    z.norm() < ctx.tail_tol.powf(1.0 / ctx.max_terms as f64)
}

/// Region where [`e2_series`] `which` converges; `7` is [`e2_extra`].
pub fn e2_domain(which: u8, p: &Params2, ctx: &QContext) -> Result<Annulus> {
    let q = ctx.q;
    Ok(match which {
        1 => Annulus::disc((p.a[1] / (q * p.big_b)).norm()),
        2 => Annulus::when(converges(p.a[0] / p.b[1], ctx)),
        3 | 5 | 6 => Annulus::ALL,
        4 => Annulus::exterior((q * p.b[0] / p.big_a).norm()),
        7 => Annulus::when(converges(p.qalpha(ctx), ctx)),
        _ => return Err(out_of_range("degree-two", which)),
    })
}

/// The `₃φ₂` series of the degree-two equation, `which ∈ 1..=6`.
pub fn e2_series(which: u8, p: &Params2, x: C64, ctx: &QContext) -> Result<C64> {
    p.validate(ctx)?;
    let q = ctx.q;
    let qa = p.qalpha(ctx);
    let q1a = q / qa;
    let [a1, a2] = p.a;
    let [b1, b2] = p.b;
    let (ba, bb) = (p.big_a, p.big_b);
    let ax = ba * x;
    let bx = bb * x;
    match which {
        1 => phi_of(&[qa, ba / bb, a1 / bx], &[ba * a1 / (bb * b1), ba * a1 / (bb * b2)], q * bx / a2, ctx),
        2 => Ok(pr(&[q * ax / a2], &[q * bx / a2], ctx)?
            * phi_of(&[q * b2 / a2, ba / bb, ax / b1], &[ba * a1 / (bb * b1), q * ax / a2], a1 / b2, ctx)?),
        3 => Ok(pr(&[q * ax / a2], &[q * bx / a2], ctx)?
            * phi_of(&[q * b1 / a2, q * b2 / a2, ba / bb], &[q1a * ba / bb, q * ax / a2], q, ctx)?),
        4 => Ok(pr(&[ax / b2], &[q * b1 * bx / (a1 * a2)], ctx)?
            * phi_of(&[qa, a1 / b1, a2 / b1], &[a1 * a2 / (b1 * bx), a1 * a2 / (b1 * b2)], q * b1 / ax, ctx)?),
        5 => Ok(pr(&[ax / b1, ax / b2], &[ax / a2, q * bx / a1], ctx)?
            * phi_of(&[q * bb / ba, a2 / b2, q * b1 / ax], &[q1a * a2 / b2, q * a2 / ax], q, ctx)?),
        6 => phi_of(&[qa, ba / bb, ax / b1], &[a1 * ba / (b1 * bb), a2 * ba / (b1 * bb)], q, ctx),
        _ => Err(out_of_range("degree-two", which)),
    }
}

/// A further solution with argument `q^α`, convergent when `|q^α| < 1`.
pub fn e2_extra(p: &Params2, x: C64, ctx: &QContext) -> Result<C64> {
    p.validate(ctx)?;
    let q = ctx.q;
    let [a1, a2] = p.a;
    let [b1, b2] = p.b;
    let ax = p.big_a * x;
    let bx = p.big_b * x;
    Ok(pr(&[q * ax / a2], &[q * bx / a2], ctx)?
        * phi_of(&[q * b1 / a2, q * b2 / a2, q * bx / a2], &[q * a1 / a2, q * ax / a2], p.qalpha(ctx), ctx)?)
}

/// Parameters on which the argument-`q` series `which ∈ {3, 5, 6}` terminate
/// after `n` terms, obtained from `base` and rebalanced through `B`.
pub fn terminating_e2_params(which: u8, base: &Params2, n: u32, ctx: &QContext) -> Result<Params2> {
    let qn = ctx.q.powi(n as i32);
    let (mut alpha, mut a, mut b) = (base.alpha, base.a, base.b);
    match which {
        3 => b[0] = a[1] / (qn * ctx.q),
        5 => a[1] = b[1] / qn,
        6 => alpha = C64::new(-(n as f64), 0.0),
        _ => return Err(QError::Invalid(format!("degree-two solution #{which} has no terminating family"))),
    }
    let p = Params2::balanced(alpha, a, b, base.big_a, ctx);
    p.validate(ctx)?;
    Ok(p)
}

/// Region where [`heine_solution`] `k` converges.
pub fn heine_domain(k: u8, p: &HeineParams, ctx: &QContext) -> Result<Annulus> {
    let q = ctx.q;
    let (a, b, c) = (p.a, p.b, p.c);
    let n = |z: C64| z.norm();
    Ok(match k {
        1 | 3 => Annulus::disc(1.0),
        2 | 4 => Annulus::disc(n(c / (a * b))),
        5 | 7 => Annulus::exterior(n(c * q / (a * b))),
        6 | 8 => Annulus::exterior(n(q)),
        17 => Annulus::disc(20.0 / n(b)),
        18 => Annulus::disc(20.0 / n(a)),
        19 => Annulus::disc(20.0 * n(c / (b * q))),
        20 => Annulus::disc(20.0 * n(c / (a * q))),
        21 => Annulus::exterior(n(q * q / b) / 20.0),
        22 => Annulus::exterior(n(q * q / a) / 20.0),
        23 => Annulus::exterior(n(c * q / b) / 20.0),
        24 => Annulus::exterior(n(c * q / a) / 20.0),
        9..=16 | 25..=32 => Annulus::ALL,
        _ => return Err(out_of_range("Heine", k)),
    })
}

/// The Heine solutions `k ∈ 1..=32`. Exponents of `z` use the principal
/// branch of `log_q`.
pub fn heine_solution(k: u8, p: &HeineParams, z: C64, ctx: &QContext) -> Result<C64> {
    p.validate(ctx)?;
    let q = ctx.q;
    let (a, b, c) = (p.a, p.b, p.c);
    let (al, be, ga) = (ctx.log_q(a), ctx.log_q(b), ctx.log_q(c));
    let zg = || cpow(z, one() - ga);
    let za = || cpow(z, -al);
    let zb = || cpow(z, -be);
    let o = zero();
    let abz = a * b * z / c;
    let inf_pre = || pr(&[q / z], &[c * q / (a * b * z)], ctx);
    let zero_pre = || pr(&[abz], &[z], ctx);
    match k {
        1 => phi_of(&[a, b], &[c], z, ctx),
        2 => Ok(zero_pre()? * phi_of(&[c / a, c / b], &[c], abz, ctx)?),
        3 => Ok(zg()? * phi_of(&[a * q / c, b * q / c], &[q * q / c], z, ctx)?),
        4 => Ok(zg()? * zero_pre()? * phi_of(&[q / a, q / b], &[q * q / c], abz, ctx)?),
        5 => Ok(za()? * phi_of(&[a, a * q / c], &[a * q / b], c * q / (a * b * z), ctx)?),
        6 => Ok(za()? * inf_pre()? * phi_of(&[q / b, c / b], &[a * q / b], q / z, ctx)?),
        7 => Ok(zb()? * phi_of(&[b, b * q / c], &[b * q / a], c * q / (a * b * z), ctx)?),
        8 => Ok(zb()? * inf_pre()? * phi_of(&[q / a, c / a], &[b * q / a], q / z, ctx)?),
        9 => phi_of(&[a, b, abz], &[a * b * q / c, o], q, ctx),
        10 => Ok(zero_pre()? * phi_of(&[c / a, c / b, z], &[c * q / (a * b), o], q, ctx)?),
        11 => Ok(zg()? * phi_of(&[a * q / c, b * q / c, abz], &[a * b * q / c, o], q, ctx)?),
        12 => Ok(zg()? * zero_pre()? * phi_of(&[q / a, q / b, z], &[c * q / (a * b), o], q, ctx)?),
        13 => Ok(za()? * phi_of(&[a, a * q / c, q / z], &[a * b * q / c, o], q, ctx)?),
        14 => Ok(za()? * inf_pre()? * phi_of(&[q / b, c / b, c * q / (a * b * z)], &[c * q / (a * b), o], q, ctx)?),
        15 => Ok(zb()? * phi_of(&[b, b * q / c, q / z], &[a * b * q / c, o], q, ctx)?),
        16 => Ok(zb()? * inf_pre()? * phi_of(&[q / a, c / a, c * q / (a * b * z)], &[c * q / (a * b), o], q, ctx)?),
        17 => Ok(pr(&[a * z], &[z], ctx)? * phi_of(&[c / b, a], &[c, a * z], b * z, ctx)?),
        18 => Ok(pr(&[b * z], &[z], ctx)? * phi_of(&[b, c / a], &[c, b * z], a * z, ctx)?),
        19 => Ok(zg()?
            * pr(&[a * q * z / c], &[z], ctx)?
            * phi_of(&[a * q / c, q / b], &[q * q / c, a * q * z / c], b * q * z / c, ctx)?),
        20 => Ok(zg()?
            * pr(&[b * q * z / c], &[z], ctx)?
            * phi_of(&[b * q / c, q / a], &[q * q / c, b * q * z / c], a * q * z / c, ctx)?),
        21 => {
            Ok(pr(&[abz], &[b * z / c], ctx)?
                * phi_of(&[c / b, a], &[a * q / b, c * q / (b * z)], q * q / (b * z), ctx)?)
        }
        22 => {
            Ok(pr(&[abz], &[a * z / c], ctx)?
                * phi_of(&[c / a, b], &[b * q / a, c * q / (a * z)], q * q / (a * z), ctx)?)
        }
        23 => Ok(zg()?
            * pr(&[abz], &[b * z / q], ctx)?
            * phi_of(&[a * q / c, q / b], &[a * q / b, q * q / (b * z)], c * q / (b * z), ctx)?),
        24 => Ok(zg()?
            * pr(&[abz], &[a * z / q], ctx)?
            * phi_of(&[b * q / c, q / a], &[b * q / a, q * q / (a * z)], c * q / (a * z), ctx)?),
        25 => Ok(pr(&[a * z], &[z], ctx)? * phi_of(&[c / b, a, o], &[a * q / b, a * z], q, ctx)?),
        26 => Ok(pr(&[b * z], &[z], ctx)? * phi_of(&[c / a, b, o], &[b * q / a, b * z], q, ctx)?),
        27 => Ok(zg()?
            * pr(&[a * q * z / c], &[z], ctx)?
            * phi_of(&[q / b, a * q / c, o], &[a * q / b, a * q * z / c], q, ctx)?),
        28 => Ok(zg()?
            * pr(&[b * q * z / c], &[z], ctx)?
            * phi_of(&[q / a, b * q / c, o], &[b * q / a, b * q * z / c], q, ctx)?),
        29 => Ok(za()?
            * pr(&[c * q / (b * z)], &[c * q / (a * b * z)], ctx)?
            * phi_of(&[c / b, a, o], &[c, c * q / (b * z)], q, ctx)?),
        30 => Ok(za()?
            * pr(&[q * q / (b * z)], &[c * q / (a * b * z)], ctx)?
            * phi_of(&[q / b, a * q / c, o], &[q * q / c, q * q / (b * z)], q, ctx)?),
        31 => Ok(zb()?
            * pr(&[c * q / (a * z)], &[c * q / (a * b * z)], ctx)?
            * phi_of(&[c / a, b, o], &[c, c * q / (a * z)], q, ctx)?),
        32 => Ok(zb()?
            * pr(&[q * q / (a * z)], &[c * q / (a * b * z)], ctx)?
            * phi_of(&[q / a, b * q / c, o], &[q * q / c, q * q / (a * z)], q, ctx)?),
        _ => Err(out_of_range("Heine", k)),
    }
}

/// Parameters making the argument-`q` Heine solution `k` terminate after `n`
/// terms. Only the entries in [`HEINE_TERMINATING`] have such a family.
pub fn terminating_heine_params(k: u8, base: &HeineParams, n: u32, ctx: &QContext) -> Result<HeineParams> {
    let q = ctx.q;
    let qn = q.powi(n as i32);
    let mut p = *base;
    match k {
        9 | 13 | 25 | 29 => p.a = qn.inv(),
        10 => p.a = p.c * qn,
        11 => p.a = p.c / (qn * q),
        12 | 16 | 28 | 32 => p.a = qn * q,
        14 | 27 | 30 => p.b = qn * q,
        15 | 26 | 31 => p.b = qn.inv(),
        _ => return Err(QError::Invalid(format!("Heine solution #{k} has no terminating family"))),
    }
    p.validate(ctx)?;
    Ok(p)
}

/// Region of [`heine_extra`] `k`.
pub fn heine_extra_domain(k: u8, p: &HeineParams, ctx: &QContext) -> Result<Annulus> {
    match k {
        1 => Ok(Annulus::ALL),
        2 => Ok(Annulus::when(converges(p.a, ctx))),
        _ => Err(out_of_range("extra Heine", k)),
    }
}

/// Two further Heine solutions. `1` is `₃φ₁(a, b, q/z; abq/c; z/c)`, which
/// diverges unless it terminates; `2` is `(bz)_∞/(z)_∞ ₂φ₁(c/a, z; bz; a)`.
pub fn heine_extra(k: u8, p: &HeineParams, z: C64, ctx: &QContext) -> Result<C64> {
    p.validate(ctx)?;
    let q = ctx.q;
    let (a, b, c) = (p.a, p.b, p.c);
    match k {
        1 => phi_of(&[a, b, q / z], &[a * b * q / c], z / c, ctx),
        2 => Ok(pr(&[b * z], &[z], ctx)? * phi_of(&[c / a, z], &[b * z], a, ctx)?),
        _ => Err(out_of_range("extra Heine", k)),
    }
}
