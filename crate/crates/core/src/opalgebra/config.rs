use serde::{Deserialize, Serialize};

use super::roots::{multiset_match, sort_roots};
use super::{LaurentPoly, QDiffOperator};
use crate::error::{QError, Result};
use crate::{QContext, C64};

/// Ratio tolerance for pairing two roots into `{a, aq}`.
const PAIR_TOL: f64 = 1e-8;
/// Relative tolerance for accepting a value as a boundary root.
const ROOT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    X0,
    XInf,
    T0,
    TInf,
}

impl Boundary {
    pub const ALL: [Boundary; 4] = [Boundary::X0, Boundary::XInf, Boundary::T0, Boundary::TInf];

    pub fn name(self) -> &'static str {
        match self {
            Boundary::X0 => "x0",
            Boundary::XInf => "xinf",
            Boundary::T0 => "T0",
            Boundary::TInf => "Tinf",
        }
    }
}

/// Characteristic roots at the four boundaries, plus verified non-logarithmic
/// double points stored as the member `a` of the pair `{a, aq}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Configuration {
    #[serde(with = "crate::cser::seq")]
    pub roots_x0: Vec<C64>,
    #[serde(with = "crate::cser::seq")]
    pub roots_xinf: Vec<C64>,
    #[serde(rename = "roots_T0", with = "crate::cser::seq")]
    pub roots_t0: Vec<C64>,
    #[serde(rename = "roots_Tinf", with = "crate::cser::seq")]
    pub roots_tinf: Vec<C64>,
    #[serde(with = "crate::cser::opt")]
    pub double_x0: Option<C64>,
    #[serde(with = "crate::cser::opt")]
    pub double_xinf: Option<C64>,
}

impl Configuration {
    pub fn roots(&self, b: Boundary) -> &[C64] {
        match b {
            Boundary::X0 => &self.roots_x0,
            Boundary::XInf => &self.roots_xinf,
            Boundary::T0 => &self.roots_t0,
            Boundary::TInf => &self.roots_tinf,
        }
    }

    /// Relative defect of `∏x0 · ∏T∞ = ∏x∞ · ∏T0`.
    pub fn product_defect(&self) -> f64 {
        let p = |v: &[C64]| v.iter().product::<C64>();
        let lhs = p(&self.roots_x0) * p(&self.roots_tinf);
        let rhs = p(&self.roots_xinf) * p(&self.roots_t0);
        (lhs - rhs).norm() / lhs.norm().max(rhs.norm()).max(1e-300)
    }

    /// Boundaries whose roots differ from `expected` at relative tolerance `tol`.
    pub fn mismatches(&self, expected: &Configuration, tol: f64) -> Vec<Boundary> {
        Boundary::ALL.into_iter().filter(|&b| !multiset_match(self.roots(b), expected.roots(b), tol)).collect()
    }

    /// Same roots everywhere and the same double-point flags.
    pub fn matches(&self, expected: &Configuration, tol: f64) -> bool {
        let opt = |a: Option<C64>, b: Option<C64>| match (a, b) {
            (None, None) => true,
            (Some(a), Some(b)) => (a - b).norm() <= tol * b.norm(),
            _ => false,
        };
        self.mismatches(expected, tol).is_empty()
            && opt(self.double_x0, expected.double_x0)
            && opt(self.double_xinf, expected.double_xinf)
    }
}

fn boundary_poly(l: &QDiffOperator, b: Boundary) -> LaurentPoly {
    match b {
        Boundary::X0 => l.l_poly(0),
        Boundary::XInf => l.x_range().map(|(lo, hi)| l.l_poly(hi - lo)).unwrap_or_default(),
        Boundary::T0 => l.p_poly(0),
        Boundary::TInf => l.t_range().map(|(lo, hi)| l.p_poly(hi - lo)).unwrap_or_default(),
    }
}

/// Roots of the boundary polynomial, sorted by modulus then argument.
pub fn char_roots(l: &QDiffOperator, at: Boundary, _ctx: &QContext) -> Result<Vec<C64>> {
    let p = boundary_poly(l, at);
    let mut r = p.roots()?;
    sort_roots(&mut r);
    Ok(r)
}

fn is_root(p: &LaurentPoly, y: C64) -> bool {
    p.eval(y).norm() <= ROOT_TOL * p.scale(y)
}

/// Non-logarithmic test for a double point: at `x = 0` the pair is `{a, aq}`
/// and the test is `L₁(a) = 0`; at `x = ∞` the pair is `{a, aq⁻¹}` and the
/// test is `L_{M−1}(a) = 0`.
pub fn is_nonlog(l: &QDiffOperator, a: C64, side: Boundary, ctx: &QContext) -> Result<bool> {
    let (lo, hi) = l.x_range().ok_or(QError::ZeroPolynomial)?;
    let m = hi - lo;
    let (lead, next, step) = match side {
        Boundary::X0 => (l.l_poly(0), l.l_poly(1), ctx.q),
        Boundary::XInf => (l.l_poly(m), l.l_poly(m - 1), ctx.q.inv()),
        _ => return Err(QError::Invalid("non-log test is defined at x = 0 and x = ∞ only".into())),
    };
    if !is_root(&lead, a) {
        return Err(QError::Precondition(format!("{a} is not a characteristic root at {}", side.name())));
    }
    if !is_root(&lead, a * step) {
        if let Some(n) = (2..=8).find(|&n| is_root(&lead, a * step.powi(n))) {
            return Err(QError::Unsupported(format!("exponent gap {n} at {}", side.name())));
        }
        return Err(QError::Precondition(format!("{a} is not part of a double point at {}", side.name())));
    }
    let v = next.eval(a).norm();
    Ok(v == 0.0 || v < ctx.eq_tol * next.scale(a))
}

fn find_pair(roots: &[C64], q: C64) -> Vec<(C64, C64)> {
    let mut out = Vec::new();
    for (i, &r1) in roots.iter().enumerate() {
        for (j, &r2) in roots.iter().enumerate() {
            if i != j && r1.norm() > 0.0 && (r2 / r1 - q).norm() < PAIR_TOL {
                out.push((r1, r2));
            }
        }
    }
    out
}

pub fn configuration(l: &QDiffOperator, ctx: &QContext) -> Result<Configuration> {
    let roots_x0 = char_roots(l, Boundary::X0, ctx)?;
    let roots_xinf = char_roots(l, Boundary::XInf, ctx)?;
    let roots_t0 = char_roots(l, Boundary::T0, ctx)?;
    let roots_tinf = char_roots(l, Boundary::TInf, ctx)?;
    let double_x0 = find_pair(&roots_x0, ctx.q)
        .into_iter()
        .find(|&(a, _)| is_nonlog(l, a, Boundary::X0, ctx).unwrap_or(false))
        .map(|(a, _)| a);
    let double_xinf = find_pair(&roots_xinf, ctx.q)
        .into_iter()
        .find(|&(_, b)| is_nonlog(l, b, Boundary::XInf, ctx).unwrap_or(false))
        .map(|(a, _)| a);
    Ok(Configuration { roots_x0, roots_xinf, roots_t0, roots_tinf, double_x0, double_xinf })
}

/// Coefficients `c₀ = 1, c₁, …, c_n` of the local solution `Σ cₖ x^{λ+k}` at
/// `x = 0`, where `q^λ = lam_root` is a root of `L₀`.
///
/// A resonant step whose right-hand side vanishes (the non-logarithmic case)
/// takes `cₖ = 0`.
pub fn frobenius_series(l: &QDiffOperator, lam_root: C64, n_terms: usize, ctx: &QContext) -> Result<Vec<C64>> {
    let (lo, hi) = l.x_range().ok_or(QError::ZeroPolynomial)?;
    let m = (hi - lo) as usize;
    let polys: Vec<LaurentPoly> = (0..=m).map(|k| l.l_poly(k as i32)).collect();
    let l0 = &polys[0];
    let r0 = l0.eval(lam_root).norm();
    if r0 > ROOT_TOL * l0.scale(lam_root) {
        return Err(QError::NotARoot(r0 / l0.scale(lam_root).max(1e-300)));
    }
    let mut c = vec![C64::new(1.0, 0.0)];
    let mut ypow = vec![lam_root];
    for n in 1..=n_terms {
        ypow.push(ypow[n - 1] * ctx.q);
        let mut rhs = C64::new(0.0, 0.0);
        let mut scale = 0.0;
        for i in 1..=m.min(n) {
            let t = c[n - i] * polys[i].eval(ypow[n - i]);
            rhs += t;
            scale += t.norm();
        }
        let d = l0.eval(ypow[n]);
        if d.norm() <= 1e-10 * l0.scale(ypow[n]) {
            if rhs.norm() <= ctx.eq_tol * scale.max(1e-300) {
                c.push(C64::new(0.0, 0.0));
                continue;
            }
            return Err(QError::Resonance(n));
        }
        c.push(-rhs / d);
    }
    Ok(c)
}
