//! Textual labels for the solution families and their resolution into
//! [`SolutionHandle`]s.
//!
//! Labels: `thmint3.phi3[t1,t2]`, `thmint3.tilde[s1,s2]`,
//! `thmint2.phi2[t1,t2]`, `thmint2.tilde[s1,s2]`, `thmser3.1`…`6`,
//! `thmser2.1`…`6`, `thmser2.extra`, `heine.1`…`32`, `heine_extra.1`…`2` and
//! `h2.g1`. `all` expands to every label of the equation and `<prefix>.all`
//! to those starting with the prefix, e.g. `thmser3.all` or `thmint3.phi3.all`.

use std::fmt;
use std::str::FromStr;

use super::integrals::{g1_andrews, g1_radius, phi2, phi2_tilde, phi3, phi3_tilde, Endpoint};
use super::series::{
    e2_domain, e2_extra, e2_series, e3_domain, e3_series, heine_domain, heine_extra, heine_extra_domain, heine_solution,
};
use super::{Annulus, SolutionHandle};
use crate::equations::Equation;
use crate::error::{QError, Result};
use crate::opalgebra::QDiffOperator;
use crate::QContext;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Phi3(Endpoint, Endpoint),
    Phi3Tilde(Endpoint, Endpoint),
    Phi2(Endpoint, Endpoint),
    Phi2Tilde(Endpoint, Endpoint),
    Ser3(u8),
    Ser2(u8),
    Ser2Extra,
    Heine(u8),
    HeineExtra(u8),
    G1,
}

impl Family {
    /// Name of the equation the family solves.
    pub fn equation(&self) -> &'static str {
        match self {
            Family::Phi3(..) | Family::Phi3Tilde(..) | Family::Ser3(_) => "e3",
            Family::Phi2(..) | Family::Phi2Tilde(..) | Family::Ser2(_) | Family::Ser2Extra => "e2",
            Family::Heine(_) | Family::HeineExtra(_) => "heine",
            Family::G1 => "h2",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Phi3(a, b) => write!(f, "thmint3.phi3[{a},{b}]"),
            Family::Phi3Tilde(a, b) => write!(f, "thmint3.tilde[{a},{b}]"),
            Family::Phi2(a, b) => write!(f, "thmint2.phi2[{a},{b}]"),
            Family::Phi2Tilde(a, b) => write!(f, "thmint2.tilde[{a},{b}]"),
            Family::Ser3(i) => write!(f, "thmser3.{i}"),
            Family::Ser2(i) => write!(f, "thmser2.{i}"),
            Family::Ser2Extra => write!(f, "thmser2.extra"),
            Family::Heine(i) => write!(f, "heine.{i}"),
            Family::HeineExtra(i) => write!(f, "heine_extra.{i}"),
            Family::G1 => write!(f, "h2.g1"),
        }
    }
}

fn bad(s: &str) -> QError {
    QError::Invalid(format!("unknown solution label {s:?}"))
}

fn pair(s: &str, body: &str) -> Result<(Endpoint, Endpoint)> {
    let inner = body.strip_prefix('[').and_then(|b| b.strip_suffix(']')).ok_or_else(|| bad(s))?;
    let (a, b) = inner.split_once(',').ok_or_else(|| bad(s))?;
    Ok((a.parse()?, b.parse()?))
}

fn index(s: &str, body: &str, max: u8) -> Result<u8> {
    body.parse::<u8>().ok().filter(|i| (1..=max).contains(i)).ok_or_else(|| bad(s))
}

impl FromStr for Family {
    type Err = QError;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t == "thmser2.extra" {
            return Ok(Family::Ser2Extra);
        }
        if t == "h2.g1" {
            return Ok(Family::G1);
        }
        let (prefix, rest) = t.split_once('.').ok_or_else(|| bad(s))?;
        Ok(match prefix {
            "thmint3" | "thmint2" => {
                let open = rest.find('[').ok_or_else(|| bad(s))?;
                let (kind, body) = rest.split_at(open);
                let (a, b) = pair(s, body)?;
                match (prefix, kind) {
                    ("thmint3", "phi3") => Family::Phi3(a, b),
                    ("thmint3", "tilde") => Family::Phi3Tilde(a, b),
                    ("thmint2", "phi2") => Family::Phi2(a, b),
                    ("thmint2", "tilde") => Family::Phi2Tilde(a, b),
                    _ => return Err(bad(s)),
                }
            }
            "thmser3" => Family::Ser3(index(s, rest, 6)?),
            "thmser2" => Family::Ser2(index(s, rest, 6)?),
            "heine" => Family::Heine(index(s, rest, 32)?),
            "heine_extra" => Family::HeineExtra(index(s, rest, 2)?),
            _ => return Err(bad(s)),
        })
    }
}

fn integral_labels(kind: &str, set: &[Endpoint]) -> Vec<String> {
    Endpoint::pairs(set).into_iter().map(|(a, b)| format!("{kind}[{a},{b}]")).collect()
}

/// Every label that applies to the named equation.
pub fn family_labels(equation: &str) -> Vec<String> {
    match equation {
        "e3" => {
            let mut v = integral_labels("thmint3.phi3", &Endpoint::tau_set(3, false));
            v.extend(integral_labels("thmint3.tilde", &Endpoint::sigma_set(3, false)));
            v.extend((1..=6).map(|i| format!("thmser3.{i}")));
            v
        }
        "e2" => {
            let mut v = integral_labels("thmint2.phi2", &Endpoint::tau_set(2, true));
            v.extend(integral_labels("thmint2.tilde", &Endpoint::sigma_set(2, true)));
            v.extend((1..=6).map(|i| format!("thmser2.{i}")));
            v.push("thmser2.extra".into());
            v
        }
        "heine" => {
            let mut v: Vec<String> = (1..=32).map(|i| format!("heine.{i}")).collect();
            v.extend((1..=2).map(|i| format!("heine_extra.{i}")));
            v
        }
        "h2" => vec!["h2.g1".into()],
        _ => vec![],
    }
}

/// Expands `all` and `<prefix>.all`; other labels pass through unchanged.
pub fn expand_label(label: &str, equation: &str) -> Result<Vec<String>> {
    let all = family_labels(equation);
    if label == "all" {
        return Ok(all);
    }
    if let Some(prefix) = label.strip_suffix(".all") {
        let v: Vec<String> = all
            .into_iter()
            .filter(|l| l.strip_prefix(prefix).is_some_and(|r| r.starts_with('.') || r.starts_with('[')))
            .collect();
        if v.is_empty() {
            return Err(bad(label));
        }
        return Ok(v);
    }
    Ok(vec![label.to_string()])
}

fn mismatch(f: &Family, eq: &Equation) -> QError {
    QError::Invalid(format!("{f} solves {}, not {}", f.equation(), eq.name()))
}

/// Builds the handle for `label` at the given equation.
pub fn resolve(label: &str, eq: &Equation, ctx: &QContext) -> Result<SolutionHandle> {
    resolve_with(label, eq, eq.build(ctx)?, ctx)
}

/// [`resolve`] with a caller-supplied operator attached to the handle.
pub fn resolve_with(label: &str, eq: &Equation, op: QDiffOperator, ctx: &QContext) -> Result<SolutionHandle> {
    let fam: Family = label.parse()?;
    let c = *ctx;
    let name = fam.to_string();
    match (fam, *eq) {
        (Family::Phi3(a, b), Equation::E3(p)) => {
            phi3(&p, a, b, C64ONE, ctx)?;
            let h = SolutionHandle::new(name, Annulus::ALL, op, move |x| phi3(&p, a, b, x, &c));
            Ok(h.with_sample_region(Annulus::disc(INTEGRAL_REACH / p.big_b.norm())))
        }
        (Family::Phi3Tilde(a, b), Equation::E3(p)) => {
            phi3_tilde(&p, a, b, C64ONE, ctx)?;
            Ok(SolutionHandle::new(name, Annulus::ALL, op, move |x| phi3_tilde(&p, a, b, x, &c)))
        }
        (Family::Phi2(a, b), Equation::E2(p)) => {
            phi2(&p, a, b, C64ONE, ctx)?;
            let dom = Annulus::when(a != Endpoint::Zero && b != Endpoint::Zero || p.qalpha(ctx).norm() < 1.0);
            let h = SolutionHandle::new(name, dom, op, move |x| phi2(&p, a, b, x, &c));
            Ok(h.with_sample_region(Annulus::disc(INTEGRAL_REACH / p.big_b.norm())))
        }
        (Family::Phi2Tilde(a, b), Equation::E2(p)) => {
            phi2_tilde(&p, a, b, C64ONE, ctx)?;
            let inf = a == Endpoint::SigmaInfinity || b == Endpoint::SigmaInfinity;
            let dom = Annulus::when(!inf || p.qalpha(ctx).norm() < 1.0);
            Ok(SolutionHandle::new(name, dom, op, move |x| phi2_tilde(&p, a, b, x, &c)))
        }
        (Family::Ser3(i), Equation::E3(p)) => {
            Ok(SolutionHandle::new(name, e3_domain(i, &p, ctx)?, op, move |x| e3_series(i, &p, x, &c)))
        }
        (Family::Ser2(i), Equation::E2(p)) => {
            Ok(SolutionHandle::new(name, e2_domain(i, &p, ctx)?, op, move |x| e2_series(i, &p, x, &c)))
        }
        (Family::Ser2Extra, Equation::E2(p)) => {
            Ok(SolutionHandle::new(name, e2_domain(7, &p, ctx)?, op, move |x| e2_extra(&p, x, &c)))
        }
        (Family::Heine(i), Equation::Heine(p)) => {
            Ok(SolutionHandle::new(name, heine_domain(i, &p, ctx)?, op, move |z| heine_solution(i, &p, z, &c)))
        }
        (Family::HeineExtra(i), Equation::Heine(p)) => {
            Ok(SolutionHandle::new(name, heine_extra_domain(i, &p, ctx)?, op, move |z| heine_extra(i, &p, z, &c)))
        }
        (Family::G1, Equation::H2(p)) => {
            let dom = Annulus::exterior(g1_radius(&p, ctx));
            Ok(SolutionHandle::new(name, dom, op, move |x| g1_andrews(&p, x, &c)))
        }
        (f, e) => Err(mismatch(&f, &e)),
    }
}

/// Largest `|Bx|` used for default sample points of integral solutions.
const INTEGRAL_REACH: f64 = 8.0;

const C64ONE: crate::C64 = crate::C64::new(1.0, 0.0);
