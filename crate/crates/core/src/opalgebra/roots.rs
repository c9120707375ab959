//! Durand–Kerner simultaneous root finding for small complex polynomials.

use crate::error::{QError, Result};
use crate::C64;

/// Relative residual target for accepted roots.
pub const ROOT_RESIDUAL: f64 = 1e-13;

fn horner(a: &[C64], z: C64) -> (C64, f64) {
    let mut v = C64::new(0.0, 0.0);
    let mut scale = 0.0;
    let zn = z.norm();
    for c in a.iter().rev() {
        v = v * z + c;
        scale = scale * zn + c.norm();
    }
    (v, scale)
}

fn horner_deriv(a: &[C64], z: C64) -> C64 {
    let mut d = C64::new(0.0, 0.0);
    for (k, c) in a.iter().enumerate().skip(1).rev() {
        d = d * z + c * k as f64;
    }
    d
}

/// All roots of `Σ coeffs[k] y^k`, with multiplicity.
///
/// Coefficients below `1e-14·max|c|` at the top are treated as zero.
pub fn poly_roots(coeffs: &[C64]) -> Result<Vec<C64>> {
    let big = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if big == 0.0 {
        return Err(QError::ZeroPolynomial);
    }
    let cut = 1e-14 * big;
    let hi = coeffs.iter().rposition(|c| c.norm() > cut).unwrap();
    let lo = coeffs.iter().position(|c| c.norm() > cut).unwrap();
    let mut roots = vec![C64::new(0.0, 0.0); lo];
    let a: Vec<C64> = coeffs[lo..=hi].iter().map(|c| c / coeffs[hi]).collect();
    let n = a.len() - 1;
    match n {
        0 => return Ok(roots),
        1 => {
            roots.push(-a[0]);
            return Ok(roots);
        }
        _ => {}
    }
    let radius = a[0].norm().powf(1.0 / n as f64).max(1e-300);
    let mut z: Vec<C64> =
        (0..n).map(|k| C64::from_polar(radius, 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4)).collect();
    for _ in 0..1000 {
        let mut moved = 0.0f64;
        for k in 0..n {
            let (p, _) = horner(&a, z[k]);
            let mut den = C64::new(1.0, 0.0);
            for j in 0..n {
                if j != k {
                    den *= z[k] - z[j];
                }
            }
            if den.norm() == 0.0 {
                den = C64::new(1e-300, 0.0);
            }
            let w = p / den;
            z[k] -= w;
            moved = moved.max(w.norm() / z[k].norm().max(1e-300));
        }
        if moved < 1e-16 {
            break;
        }
    }
    for zk in z.iter_mut() {
        for _ in 0..3 {
            let (p, _) = horner(&a, *zk);
            let d = horner_deriv(&a, *zk);
            if d.norm() == 0.0 {
                break;
            }
            let cand = *zk - p / d;
            if horner(&a, cand).0.norm() < p.norm() {
                *zk = cand;
            } else {
                break;
            }
        }
    }
    let worst = z
        .iter()
        .map(|&r| {
            let (p, s) = horner(&a, r);
            p.norm() / s.max(1e-300)
        })
        .fold(0.0, f64::max);
    if worst > ROOT_RESIDUAL {
        return Err(QError::RootFinding(worst));
    }
    roots.extend(z);
    Ok(roots)
}

/// Orders roots by modulus, then by argument.
pub fn sort_roots(roots: &mut [C64]) {
    roots.sort_by(|x, y| {
        let (mx, my) = (x.norm(), y.norm());
        if (mx - my).abs() <= 1e-12 * mx.max(my) {
            x.arg().partial_cmp(&y.arg()).unwrap_or(std::cmp::Ordering::Equal)
        } else {
            mx.partial_cmp(&my).unwrap_or(std::cmp::Ordering::Equal)
        }
    });
}

/// Whether two root multisets agree within a relative tolerance.
///
/// Each expected root is paired with its nearest unused computed root.
pub fn multiset_match(found: &[C64], expected: &[C64], tol: f64) -> bool {
    if found.len() != expected.len() {
        return false;
    }
    let mut used = vec![false; found.len()];
    for e in expected {
        let best = found
            .iter()
            .enumerate()
            .filter(|(i, _)| !used[*i])
            .min_by(|(_, a), (_, b)| (*a - e).norm().partial_cmp(&(*b - e).norm()).unwrap());
        match best {
            Some((i, f)) if (f - e).norm() <= tol * e.norm().max(1e-300) => used[i] = true,
            _ => return false,
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn from_roots(r: &[C64]) -> Vec<C64> {
        let mut p = vec![c(1.0, 0.0)];
        for &z in r {
            let mut next = vec![c(0.0, 0.0); p.len() + 1];
            for (k, a) in p.iter().enumerate() {
                next[k + 1] += a;
                next[k] -= a * z;
            }
            p = next;
        }
        p
    }

    #[test]
    fn recovers_known_roots() {
        let r = [c(1.0, 0.0), c(0.5, 0.0), c(-0.3, 1.2), c(2.0, -0.7)];
        let mut got = poly_roots(&from_roots(&r)).unwrap();
        sort_roots(&mut got);
        assert!(multiset_match(&got, &r, 1e-12));
    }

    #[test]
    fn zero_roots_and_linear() {
        let got = poly_roots(&[c(0.0, 0.0), c(2.0, 0.0), c(-1.0, 0.0)]).unwrap();
        assert!(multiset_match(&got[1..], &[c(2.0, 0.0)], 1e-14));
        assert_eq!(got[0], c(0.0, 0.0));
        assert!(poly_roots(&[c(0.0, 0.0)]).is_err());
    }

    #[test]
    fn scaling_invariance() {
        let r = [c(0.3, 0.4), c(-1.1, 0.2), c(0.9, -0.9)];
        let p = from_roots(&r);
        let scaled: Vec<C64> = p.iter().map(|a| a * c(3.0, -2.0)).collect();
        let a = poly_roots(&p).unwrap();
        let b = poly_roots(&scaled).unwrap();
        assert!(multiset_match(&a, &b, 1e-12));
    }
}
