use serde::{Deserialize, Serialize};

use super::{build_e2, build_e3, build_h2, build_h3, build_heine, H2Params, H3Params, HeineParams, Params2, Params3};
use crate::error::{QError, Result};
use crate::opalgebra::QDiffOperator;
use crate::{QContext, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DegenerationKind {
    #[serde(rename = "E3->E2")]
    E3ToE2,
    #[serde(rename = "H3->H2")]
    H3ToH2,
    #[serde(rename = "H2->Heine")]
    H2ToHeine,
}

impl DegenerationKind {
    /// Whether the scale parameter goes to zero rather than infinity.
    pub fn to_zero(self) -> bool {
        matches!(self, DegenerationKind::H2ToHeine)
    }

    pub fn default_scales(self) -> Vec<f64> {
        if self.to_zero() {
            vec![1e-6, 1e-9, 1e-12]
        } else {
            vec![1e6, 1e9, 1e12]
        }
    }
}

/// Fixed data of a degeneration; the scale enters as described per variant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DegenerationBase {
    /// `a₃ = s·u`, `b₃ = q^{α−1}a₃`; the limit is the degree-two operator of `p`.
    E3ToE2 {
        p: Params2,
        #[serde(with = "crate::cser")]
        u: C64,
    },
    /// `t₃ ↦ s·t₃`; the limit has `(α₁, α₂) = (α, α − h₃ + l₃)`.
    H3ToH2 { p: H3Params },
    /// `t₁ = 1`, `h₁ = 1/2`, `h₂ = l₂ + α₁ + α₂ + l₁ − 3/2`, `t₂ = s·t2`;
    /// the limit is `x·q·T⁻¹` times the Heine operator with
    /// `a = q^{α₁}`, `b = q^{α₂}`, `c = q^{α₁+α₂+l₁−1/2}`.
    H2ToHeine {
        #[serde(with = "crate::cser")]
        alpha1: C64,
        #[serde(with = "crate::cser")]
        alpha2: C64,
        #[serde(with = "crate::cser::seq")]
        l: [C64; 2],
        #[serde(with = "crate::cser")]
        t2: C64,
    },
}

impl DegenerationBase {
    pub fn kind(&self) -> DegenerationKind {
        match self {
            DegenerationBase::E3ToE2 { .. } => DegenerationKind::E3ToE2,
            DegenerationBase::H3ToH2 { .. } => DegenerationKind::H3ToH2,
            DegenerationBase::H2ToHeine { .. } => DegenerationKind::H2ToHeine,
        }
    }

    pub fn operator_at(&self, s: f64, ctx: &QContext) -> Result<QDiffOperator> {
        match *self {
            DegenerationBase::E3ToE2 { p, u } => {
                let a3 = u * s;
                let b3 = ctx.qpow(p.alpha - 1.0) * a3;
                let p3 = Params3 { a: [p.a[0], p.a[1], a3], b: [p.b[0], p.b[1], b3], big_a: p.big_a, big_b: p.big_b };
                build_e3(&p3, ctx)
            }
            DegenerationBase::H3ToH2 { p } => {
                let mut p = p;
                p.t[2] *= s;
                Ok(build_h3(&p, ctx))
            }
            DegenerationBase::H2ToHeine { .. } => Ok(build_h2(&self.h2_params(s), ctx)),
        }
    }

    fn h2_params(&self, s: f64) -> H2Params {
        let DegenerationBase::H2ToHeine { alpha1, alpha2, l, t2 } = *self else { unreachable!() };
        let h = [C64::new(0.5, 0.0), l[1] + alpha1 + alpha2 + l[0] - 1.5];
        H2Params { h, l, t: [C64::new(1.0, 0.0), t2 * s], alpha1, alpha2 }
    }

    pub fn limit_operator(&self, ctx: &QContext) -> Result<QDiffOperator> {
        match *self {
            DegenerationBase::E3ToE2 { p, .. } => build_e2(&p, ctx),
            DegenerationBase::H3ToH2 { p } => {
                let h2 = H2Params {
                    h: [p.h[0], p.h[1]],
                    l: [p.l[0], p.l[1]],
                    t: [p.t[0], p.t[1]],
                    alpha1: p.alpha,
                    alpha2: p.alpha - p.h[2] + p.l[2],
                };
                Ok(build_h2(&h2, ctx))
            }
            DegenerationBase::H2ToHeine { alpha1, alpha2, l, .. } => {
                let hp = HeineParams::new(ctx.qpow(alpha1), ctx.qpow(alpha2), ctx.qpow(alpha1 + alpha2 + l[0] - 0.5));
                let prefix = QDiffOperator::monomial(ctx.q, 1, -1, ctx.q);
                Ok(prefix * build_heine(&hp, ctx))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
    Informational,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegenerationReport {
    pub kind: DegenerationKind,
    pub pivot: (i32, i32),
    pub scales: Vec<f64>,
    pub deviations: Vec<f64>,
    pub verdict: Verdict,
}

/// Compares the pivot-normalised operator at each scale with the limit
/// operator. Passes iff the deviations strictly decrease and the last one is
/// below `10·eq_tol`; a single scale yields an informational report.
pub fn verify_degeneration(base: &DegenerationBase, scales: &[f64], ctx: &QContext) -> Result<DegenerationReport> {
    let kind = base.kind();
    if scales.is_empty() {
        return Err(QError::Invalid("empty scale sequence".into()));
    }
    let ordered = scales.windows(2).all(|w| if kind.to_zero() { w[1] < w[0] } else { w[1] > w[0] });
    if !ordered || scales.iter().any(|s| !(s.is_finite() && *s > 0.0)) {
        return Err(QError::Invalid(format!("scale sequence {scales:?} is not monotone toward the limit")));
    }
    let limit = base.limit_operator(ctx)?;
    let pivot = limit.top_key().ok_or(QError::ZeroPolynomial)?;
    let mut deviations = Vec::with_capacity(scales.len());
    for &s in scales {
        let big = base.operator_at(s, ctx)?;
        deviations.push(big.deviation_at(&limit, pivot).unwrap_or(f64::INFINITY));
    }
    let verdict = if scales.len() == 1 {
        Verdict::Informational
    } else if deviations.windows(2).all(|w| w[1] < w[0]) && *deviations.last().unwrap() < ctx.eq_tol * 10.0 {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(DegenerationReport { kind, pivot, scales: scales.to_vec(), deviations, verdict })
}
