//! Basic hypergeometric series: `ᵣφₛ`, `₃ψ₃`, the very-well-poised `₈W₇`
//! and the Appell–Jackson double series `Φ⁽¹⁾`, plus the classical
//! transformations used to cross-check them.

use serde::{Deserialize, Serialize};

use crate::error::{QError, Result};
use crate::qcore::{qpoch_inf_many, qpoch_ratio, JordanPochhammer, Measure, QContext, TAIL_RUN};
use crate::C64;

fn one() -> C64 {
    C64::new(1.0, 0.0)
}

fn zero() -> C64 {
    C64::new(0.0, 0.0)
}

/// Parameters of `ᵣφₛ(numerator; denominator; argument)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhiSpec {
    #[serde(with = "crate::cser::seq")]
    pub numerator: Vec<C64>,
    #[serde(with = "crate::cser::seq")]
    pub denominator: Vec<C64>,
    #[serde(with = "crate::cser")]
    pub argument: C64,
}

impl PhiSpec {
    pub fn new(numerator: &[C64], denominator: &[C64], argument: C64) -> Self {
        PhiSpec { numerator: numerator.to_vec(), denominator: denominator.to_vec(), argument }
    }
}

/// Returns `k ≥ 0` when `a = q^{-k}`, i.e. when `(a)_n` vanishes for `n > k`.
pub fn termination_order(a: C64, ctx: &QContext) -> Option<usize> {
    if a.norm() == 0.0 {
        return None;
    }
    let k = (-a.norm().ln() / ctx.q.norm().ln()).round();
    if !(0.0..=ctx.max_terms as f64).contains(&k) {
        return None;
    }
    let k = k as i32;
    if (a * ctx.q.powi(k) - one()).norm() < 1e-11 {
        Some(k as usize)
    } else {
        None
    }
}

fn first_termination(params: &[C64], ctx: &QContext) -> Option<usize> {
    params.iter().filter_map(|&a| termination_order(a, ctx)).min()
}

struct Series {
    sum: C64,
    term: C64,
    small: usize,
    tol: f64,
}

impl Series {
    fn new(tol: f64) -> Self {
        Series { sum: one(), term: one(), small: 0, tol }
    }

    /// Multiplies the current term by `ratio` and accumulates it.
    fn step(&mut self, ratio: C64) -> bool {
        self.term *= ratio;
        self.sum += self.term;
        if self.term == zero() {
            return true;
        }
        if self.term.norm() <= self.tol * self.sum.norm() {
            self.small += 1;
        } else {
            self.small = 0;
        }
        self.small >= TAIL_RUN
    }
}

/// `ᵣφₛ` with the normalisation `[(−1)ⁿ q^{C(n,2)}]^{1+s−r}`.
pub fn phi(spec: &PhiSpec, ctx: &QContext) -> Result<C64> {
    let q = ctx.q;
    let r = spec.numerator.len() as i32;
    let s = spec.denominator.len() as i32;
    let e = 1 + s - r;
    let z = spec.argument;
    let stop = first_termination(&spec.numerator, ctx);
    if z == zero() || stop == Some(0) {
        return Ok(one());
    }
    if stop.is_none() {
        if e < 0 {
            return Err(QError::Divergent(format!("non-terminating {r}phi{s}")));
        }
        if e == 0 && z.norm() >= 1.0 {
            return Err(QError::Divergent(format!("|argument| = {} >= 1", z.norm())));
        }
    }
    let sign = if e % 2 == 0 { 1.0 } else { -1.0 };
    let mut acc = Series::new(ctx.tail_tol);
    let mut qn = one();
    let limit = stop.unwrap_or(ctx.max_terms);
    for n in 0..limit {
        let mut ratio = z * sign * qn.powi(e);
        for a in &spec.numerator {
            ratio *= one() - a * qn;
        }
        for b in &spec.denominator {
            let f = one() - b * qn;
            if f.norm() < 1e-14 {
                return Err(QError::Pole(format!("denominator parameter {b} at n = {n}")));
            }
            ratio /= f;
        }
        ratio /= one() - qn * q;
        let done = acc.step(ratio);
        if done && stop.is_none() {
            return Ok(acc.sum);
        }
        qn *= q;
    }
    if stop.is_some() {
        Ok(acc.sum)
    } else {
        Err(QError::NonDecaying(ctx.max_terms))
    }
}

/// Shorthand for `phi(PhiSpec::new(num, den, z))`.
pub fn phi_of(num: &[C64], den: &[C64], z: C64, ctx: &QContext) -> Result<C64> {
    phi(&PhiSpec::new(num, den, z), ctx)
}

/// Bilateral `₃ψ₃(a; b; z) = Σ_{n∈ℤ} (a₁,a₂,a₃)ₙ/(b₁,b₂,b₃)ₙ zⁿ`.
pub fn psi33(a: [C64; 3], b: [C64; 3], z: C64, ctx: &QContext) -> Result<C64> {
    let q = ctx.q;
    let inner = (b[0] * b[1] * b[2] / (a[0] * a[1] * a[2])).norm();
    if !(inner < z.norm() && z.norm() < 1.0) {
        return Err(QError::Domain(format!("|z| = {} outside the annulus ({inner}, 1)", z.norm())));
    }
    let mut pos = Series::new(ctx.tail_tol);
    let mut qn = one();
    let mut done = false;
    for _ in 0..ctx.max_terms {
        let mut ratio = z;
        for i in 0..3 {
            let d = one() - b[i] * qn;
            if d.norm() < 1e-14 {
                return Err(QError::Pole(format!("(b)_n vanishes for b = {}", b[i])));
            }
            ratio *= (one() - a[i] * qn) / d;
        }
        if pos.step(ratio) {
            done = true;
            break;
        }
        qn *= q;
    }
    if !done {
        return Err(QError::NonDecaying(ctx.max_terms));
    }
    // negative side: term_{-(n+1)} / term_{-n} = ∏ (1 − b q^{-(n+1)}) / (1 − a q^{-(n+1)}) / z
    let qi = q.inv();
    let mut neg = Series::new(ctx.tail_tol);
    neg.sum = pos.sum;
    let mut qm = qi;
    for _ in 0..ctx.max_terms {
        let mut ratio = z.inv();
        for i in 0..3 {
            let nf = one() - b[i] * qm;
            if nf.norm() < 1e-13 {
                return Ok(neg.sum);
            }
            let d = one() - a[i] * qm;
            if d.norm() < 1e-14 {
                return Err(QError::Pole(format!("(a)_(-n) pole for a = {}", a[i])));
            }
            ratio *= nf / d;
        }
        if neg.step(ratio) {
            return Ok(neg.sum);
        }
        qm *= qi;
    }
    Err(QError::NonDecaying(ctx.max_terms))
}

/// Very-well-poised `₈W₇(a; b, c, d, e, f; z)`.
pub fn w87(a: C64, b: C64, c: C64, d: C64, e: C64, f: C64, z: C64, ctx: &QContext) -> Result<C64> {
    let q = ctx.q;
    let outer = [b, c, d, e, f];
    let stop = first_termination(&outer, ctx);
    if stop.is_none() && z.norm() >= 1.0 {
        return Err(QError::Divergent(format!("8W7 with |z| = {}", z.norm())));
    }
    if z == zero() || stop == Some(0) {
        return Ok(one());
    }
    let mut acc = Series::new(ctx.tail_tol);
    let mut qn = one();
    let limit = stop.unwrap_or(ctx.max_terms);
    for n in 0..limit {
        let w0 = one() - a * qn * qn;
        if w0.norm() < 1e-14 {
            return Err(QError::Pole("well-poised weight 1 - a q^{2n} vanishes".into()));
        }
        let mut ratio = z * (one() - a * qn * qn * q * q) / w0 * (one() - a * qn);
        for p in outer {
            ratio *= one() - p * qn;
            let den = one() - q * a * qn / p;
            if den.norm() < 1e-14 {
                return Err(QError::Pole(format!("(qa/{p})_n vanishes at n = {n}")));
            }
            ratio /= den;
        }
        ratio /= one() - qn * q;
        let done = acc.step(ratio);
        if done && stop.is_none() {
            return Ok(acc.sum);
        }
        qn *= q;
    }
    if stop.is_some() {
        Ok(acc.sum)
    } else {
        Err(QError::NonDecaying(ctx.max_terms))
    }
}

/// Whether `z = a²q²/(bcdef)` to `eq_tol`.
pub fn is_balanced_w87(a: C64, b: C64, c: C64, d: C64, e: C64, f: C64, z: C64, ctx: &QContext) -> bool {
    let target = a * a * ctx.q * ctx.q / (b * c * d * e * f);
    ctx.close(z, target)
}

/// Appell–Jackson `Φ⁽¹⁾(a; b₁, b₂; c; x₁, x₂)`, summed by anti-diagonals.
pub fn appell_phi1(a: C64, b1: C64, b2: C64, c: C64, x1: C64, x2: C64, ctx: &QContext) -> Result<C64> {
    if x1.norm() >= 1.0 || x2.norm() >= 1.0 {
        return Err(QError::Divergent("Phi1 needs |x1|, |x2| < 1".into()));
    }
    let q = ctx.q;
    let mut u1 = vec![one()];
    let mut u2 = vec![one()];
    let mut outer = one();
    let mut sum = zero();
    let mut small = 0;
    let mut qs = one();
    for s in 0..ctx.max_terms {
        if s > 0 {
            let k = s - 1;
            let qk = q.powi(k as i32);
            u1.push(u1[k] * (one() - b1 * qk) / (one() - qk * q) * x1);
            u2.push(u2[k] * (one() - b2 * qk) / (one() - qk * q) * x2);
            let d = one() - c * qs / q;
            if d.norm() < 1e-14 {
                return Err(QError::Pole("(c)_s vanishes".into()));
            }
            outer *= (one() - a * qs / q) / d;
        }
        let block: C64 = (0..=s).map(|k| u1[k] * u2[s - k]).sum::<C64>() * outer;
        sum += block;
        if block.norm() <= ctx.tail_tol * sum.norm() {
            small += 1;
            if small >= TAIL_RUN {
                return Ok(sum);
            }
        } else {
            small = 0;
        }
        qs *= q;
    }
    Err(QError::NonDecaying(ctx.max_terms))
}

/// Right-hand side of Heine's transformation:
/// `(a)_∞/(c)_∞ · (bz)_∞/(z)_∞ · ₂φ₁(c/a, z; bz; a)`.
pub fn heine_transform_rhs(a: C64, b: C64, c: C64, z: C64, ctx: &QContext) -> Result<C64> {
    let pre = qpoch_ratio(&[a, b * z], &[c, z], ctx)?;
    Ok(pre * phi_of(&[c / a, z], &[b * z], a, ctx)?)
}

/// Right-hand side of the Bailey transformation of a balanced `₈W₇(a; b, c, d, e, f; a²q²/(bcdef))`.
pub fn bailey_w87_rhs(a: C64, b: C64, c: C64, d: C64, e: C64, f: C64, ctx: &QContext) -> Result<C64> {
    let q = ctx.q;
    let mu = q * a * a / (b * c * d);
    let pre = qpoch_ratio(
        &[a * q, a * q / (e * f), mu * q / e, mu * q / f],
        &[a * q / e, a * q / f, mu * q, mu * q / (e * f)],
        ctx,
    )?;
    Ok(pre * w87(mu, mu * b / a, mu * c / a, mu * d / a, e, f, a * q / (e * f), ctx)?)
}

/// Parameters `(a, b, c, d, e, f, g, h)` of the Jackson-integral representation of `₈W₇`,
/// subject to `cd = abefgh` and `|ah| < 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct W87IntegralParams {
    pub a: C64,
    pub b: C64,
    pub c: C64,
    pub d: C64,
    pub e: C64,
    pub f: C64,
    pub g: C64,
    pub h: C64,
}

impl W87IntegralParams {
    /// `∫_a^b (qt/a, qt/b, ct, dt)_∞ / (et, ft, gt, ht)_∞ d_qt`.
    pub fn integral(&self, ctx: &QContext) -> Result<C64> {
        let p = self;
        let q = ctx.q;
        let jp = JordanPochhammer::new(zero(), vec![q / p.a, q / p.b, p.c, p.d], vec![p.e, p.f, p.g, p.h]);
        Ok(jp.jackson(p.b, Measure::Dqt, ctx)? - jp.jackson(p.a, Measure::Dqt, ctx)?)
    }

    /// The `₈W₇` side of the same identity.
    pub fn series(&self, ctx: &QContext) -> Result<C64> {
        let W87IntegralParams { a, b, c, d, e, f, g, h } = *self;
        let q = ctx.q;
        let cd = c * d;
        let pre = qpoch_inf_many(&[q, b * q / a, a / b, cd / (e * h), cd / (f * h), cd / (g * h), b * c, b * d], ctx)?
            / qpoch_inf_many(&[a * e, a * f, a * g, b * e, b * f, b * g, b * h, b * cd / h], ctx)?;
        let w = w87(b * cd / (h * q), b * e, b * f, b * g, c / h, d / h, a * h, ctx)?;
        Ok(b * (one() - q) * pre * w)
    }
}

/// The six displayed `₈W₇ → ₃φ₂` limit formulas.
///
/// Each takes base parameters `(a, b, c, d, e, f)` and a scale `ℓ`; odd
/// indices send `ℓ → ∞` and even ones `ℓ → 0`. Forms 4 and 6 are evaluated
/// through their Bailey-transformed middle expression because the original
/// `₈W₇` argument leaves the unit disc along the limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct W87Limit(pub u8);

impl W87Limit {
    pub const ALL: [W87Limit; 6] = [W87Limit(1), W87Limit(2), W87Limit(3), W87Limit(4), W87Limit(5), W87Limit(6)];

    pub fn to_infinity(self) -> bool {
        self.0 % 2 == 1
    }

    /// Default three-point scale sequence.
    pub fn scales(self) -> [f64; 3] {
        if self.to_infinity() {
            [1e2, 1e3, 1e4]
        } else {
            [1e-2, 1e-3, 1e-4]
        }
    }

    pub fn lhs(self, p: [C64; 6], l: f64, ctx: &QContext) -> Result<C64> {
        let [a, b, c, d, e, f] = p;
        let q = ctx.q;
        let l = C64::new(l, 0.0);
        match self.0 {
            1 | 2 => w87(a * l, b * l, c * l, d, e, f, a * a * q * q / (b * c * d * e * f), ctx),
            3 => {
                let b = b * l;
                w87(a, b, c, d, e, f, (a * q).powi(2) / (b * c * d * e * f), ctx)
            }
            4 => {
                let b = b * l;
                let mu = q * a * a / (b * c * d);
                let pre = qpoch_ratio(&[a * q, a * q / (e * f)], &[a * q / e, a * q / f], ctx)?;
                Ok(pre * w87(mu, mu * b / a, mu * c / a, mu * d / a, e, f, a * q / (e * f), ctx)?)
            }
            5 => {
                let aq2 = (a * q).powi(2);
                let pre = qpoch_ratio(&[aq2 * l / (b * c * d), a * q * l / e, a * q * l / f], &[a * q * l * l], ctx)?;
                let z = aq2 / (b * c * d * e * f * l);
                Ok(pre * w87(a * l * l, b * l, c * l, d * l, e * l, f * l, z, ctx)?)
            }
            6 => {
                let aq2 = (a * q).powi(2);
                let mu = q * a * a / (b * c * d);
                let pre = qpoch_ratio(
                    &[a * q * l * l, a * q / (e * f), aq2 / (b * c * d * e), aq2 / (b * c * d * f)],
                    &[aq2 * l / (b * c * d), a * q * l / e, a * q * l / f],
                    ctx,
                )?;
                Ok(pre * w87(mu * l, mu * b / a, mu * c / a, mu * d / a, e * l, f * l, a * q / (e * f), ctx)?)
            }
            k => Err(QError::Invalid(format!("no limit formula {k}"))),
        }
    }

    pub fn rhs(self, p: [C64; 6], ctx: &QContext) -> Result<C64> {
        let [a, b, c, d, e, f] = p;
        let q = ctx.q;
        let aq2 = (a * q).powi(2);
        match self.0 {
            1 => phi_of(&[d, e, f], &[a * q / b, a * q / c], q, ctx),
            2 => phi_of(&[d, e, f], &[a * q / b, a * q / c], aq2 / (b * c * d * e * f), ctx),
            3 | 4 => {
                let pre = qpoch_ratio(&[a * q, a * q / (e * f)], &[a * q / e, a * q / f], ctx)?;
                let z = if self.0 == 3 { a * q / (e * f) } else { q };
                Ok(pre * phi_of(&[a * q / (c * d), e, f], &[a * q / c, a * q / d], z, ctx)?)
            }
            5 | 6 => {
                let pre = qpoch_inf_many(&[a * q / (e * f), aq2 / (b * c * d * e), aq2 / (b * c * d * f)], ctx)?;
                let z = if self.0 == 5 { q } else { a * q / (e * f) };
                let s = phi_of(
                    &[a * q / (b * c), a * q / (c * d), a * q / (b * d)],
                    &[aq2 / (b * c * d * e), aq2 / (b * c * d * f)],
                    z,
                    ctx,
                )?;
                Ok(pre * s)
            }
            k => Err(QError::Invalid(format!("no limit formula {k}"))),
        }
    }

    /// Relative deviation `|lhs(ℓ) − rhs| / |rhs|` for each scale.
    pub fn deviations(self, p: [C64; 6], scales: &[f64], ctx: &QContext) -> Result<Vec<f64>> {
        let target = self.rhs(p, ctx)?;
        scales.iter().map(|&l| Ok((self.lhs(p, l, ctx)? - target).norm() / target.norm())).collect()
    }
}
