use std::ops::RangeInclusive;

use nalgebra::DMatrix;

use crate::error::{QError, Result};
use crate::opalgebra::{Configuration, QDiffOperator};
use crate::C64;

/// Outcome of solving for an operator with prescribed configuration.
#[derive(Debug, Clone)]
pub struct RigidityResult {
    /// Operator spanned by the (numerically) smallest right singular vector.
    pub operator: QDiffOperator,
    /// Dimension of the numerical nullspace; `1` means the configuration fixes the operator up to scale.
    pub nullity: usize,
    /// Singular values, descending.
    pub singular_values: Vec<f64>,
}

/// Solves the homogeneous linear system imposed by `cfg` on the coefficients
/// `a_ij`, `i ∈ xs`, `j ∈ ts`: boundary roots at all four sides plus the
/// non-logarithmic conditions of the double points.
pub fn reconstruct_from_configuration(
    cfg: &Configuration,
    xs: RangeInclusive<i32>,
    ts: RangeInclusive<i32>,
    q: C64,
) -> Result<RigidityResult> {
    let (i0, i1, j0, j1) = (*xs.start(), *xs.end(), *ts.start(), *ts.end());
    if i1 < i0 || j1 < j0 {
        return Err(QError::Invalid("empty support".into()));
    }
    let nj = (j1 - j0 + 1) as usize;
    let keys: Vec<(i32, i32)> = xs.clone().flat_map(|i| ts.clone().map(move |j| (i, j))).collect();
    let idx = |i: i32, j: i32| (i - i0) as usize * nj + (j - j0) as usize;
    let n = keys.len();
    let mut rows: Vec<Vec<C64>> = Vec::new();
    let x_row = |i: i32, y: C64| {
        let mut r = vec![C64::new(0.0, 0.0); n];
        for j in j0..=j1 {
            r[idx(i, j)] = y.powi(j);
        }
        r
    };
    for &y in &cfg.roots_x0 {
        rows.push(x_row(i0, y));
    }
    if let Some(a) = cfg.double_x0 {
        rows.push(x_row(i0 + 1, a));
    }
    for &y in &cfg.roots_xinf {
        rows.push(x_row(i1, y));
    }
    if let Some(a) = cfg.double_xinf {
        rows.push(x_row(i1 - 1, a * q));
    }
    let t_row = |j: i32, x: C64| {
        let mut r = vec![C64::new(0.0, 0.0); n];
        for i in i0..=i1 {
            r[idx(i, j)] = x.powi(i);
        }
        r
    };
    for &x in &cfg.roots_t0 {
        rows.push(t_row(j0, x));
    }
    for &x in &cfg.roots_tinf {
        rows.push(t_row(j1, x));
    }
    let m = rows.len().max(n);
    let mut mat = DMatrix::<C64>::zeros(m, n);
    for (r, row) in rows.iter().enumerate() {
        let norm = row.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
        for (c, z) in row.iter().enumerate() {
            mat[(r, c)] = z / norm;
        }
    }
    let svd = mat.svd(false, true);
    let v_t = svd.v_t.ok_or_else(|| QError::Invalid("singular value decomposition failed".into()))?;
    let sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    let smax = sv.iter().copied().fold(0.0, f64::max);
    let (kmin, _) = sv.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)).unwrap();
    let nullity = sv.iter().filter(|&&s| s <= 1e-9 * smax).count() + n.saturating_sub(sv.len());
    let terms = keys.iter().enumerate().map(|(k, &key)| (key, v_t[(kmin, k)].conj()));
    let mut sorted = sv.clone();
    sorted.sort_by(|a, b| b.total_cmp(a));
    Ok(RigidityResult { operator: QDiffOperator::from_terms(q, terms), nullity, singular_values: sorted })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equations::{build_h2, build_h3, expected_h2, expected_h3, H2Params, H3Params};
    use crate::QContext;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn h3_is_rigid() {
        let ctx = QContext::real(0.5);
        let p = H3Params {
            h: [c(0.1, 0.2), c(-0.3, 0.1), c(0.25, -0.15)],
            l: [c(0.2, -0.1), c(0.05, 0.2), c(-0.4, 0.0)],
            t: [c(0.9, 0.3), c(-1.2, 0.4), c(0.6, -1.1)],
            alpha: c(0.3, -0.2),
        };
        let r = reconstruct_from_configuration(&expected_h3(&p, &ctx), 0..=3, -1..=1, ctx.q).unwrap();
        assert_eq!(r.nullity, 1, "{:?}", r.singular_values);
        assert!(r.operator.proportional_to(&build_h3(&p, &ctx), 1e-9));
    }

    #[test]
    fn h2_is_rigid() {
        let ctx = QContext::real(0.45);
        let p = H2Params {
            h: [c(0.1, 0.2), c(-0.3, 0.1)],
            l: [c(0.2, -0.1), c(0.05, 0.2)],
            t: [c(0.9, 0.3), c(-1.2, 0.4)],
            alpha1: c(0.3, -0.2),
            alpha2: c(-0.1, 0.25),
        };
        let r = reconstruct_from_configuration(&expected_h2(&p, &ctx), 0..=2, -1..=1, ctx.q).unwrap();
        assert_eq!(r.nullity, 1);
        assert!(r.operator.proportional_to(&build_h2(&p, &ctx), 1e-9));
        let mut loose = expected_h2(&p, &ctx);
        loose.double_x0 = None;
        assert_eq!(reconstruct_from_configuration(&loose, 0..=2, -1..=1, ctx.q).unwrap().nullity, 2);
    }
}
