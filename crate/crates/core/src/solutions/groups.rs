//! Symmetry groups acting on parameters, with the gauge factors that carry
//! solutions of one equation to solutions of its image.
//!
//! A word `[w₀, w₁, …]` acts by applying `s_{w₀}` first. For a solution
//! family `F`, the transported function is
//! `G_{w₀}(st)(x) · G_{w₁}(s_{w₀}st)(x₁) ⋯ F(final)(x_k)`, where `xᵢ` are the
//! images of `x` under the point maps of the generators.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Annulus, SolutionHandle};
use crate::equations::{Equation, HeineParams, Params2, Params3};
use crate::error::{QError, Result};
use crate::qcore::{cpow, qpoch_ratio};
use crate::{QContext, C64};

fn one() -> C64 {
    C64::new(1.0, 0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Group {
    /// Four generators on the Heine parameters `(a, b, c; z)`.
    G1,
    /// Four generators on the degree-two parameters.
    G2,
    /// Six generators on the degree-three parameters.
    G3,
}

impl Group {
    pub fn generators(self) -> u8 {
        match self {
            Group::G1 | Group::G2 => 4,
            Group::G3 => 6,
        }
    }

    pub fn of(eq: &Equation) -> Result<Group> {
        match eq {
            Equation::Heine(_) => Ok(Group::G1),
            Equation::E2(_) => Ok(Group::G2),
            Equation::E3(_) => Ok(Group::G3),
            other => Err(QError::Unsupported(format!("no symmetry group for {}", other.name()))),
        }
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Group::G1 => "G1",
            Group::G2 => "G2",
            Group::G3 => "G3",
        };
        f.write_str(s)
    }
}

/// Parameters together with the point `x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupState {
    pub params: Equation,
    pub x: C64,
}

impl GroupState {
    pub fn new(params: Equation, x: C64) -> Self {
        GroupState { params, x }
    }

    pub fn group(&self) -> Result<Group> {
        Group::of(&self.params)
    }

    /// Coordinates used for comparisons; the degree-two exponent enters as `q^α`.
    pub fn coordinates(&self, ctx: &QContext) -> Vec<C64> {
        let mut v = match self.params {
            Equation::Heine(p) => vec![p.a, p.b, p.c],
            Equation::E2(p) => vec![p.qalpha(ctx), p.a[0], p.a[1], p.b[0], p.b[1], p.big_a, p.big_b],
            Equation::E3(p) => vec![p.a[0], p.a[1], p.a[2], p.b[0], p.b[1], p.b[2], p.big_a, p.big_b],
            _ => vec![],
        };
        v.push(self.x);
        v
    }

    /// Largest relative coordinate difference.
    pub fn distance(&self, other: &GroupState, ctx: &QContext) -> f64 {
        let (u, v) = (self.coordinates(ctx), other.coordinates(ctx));
        if u.len() != v.len() {
            return f64::INFINITY;
        }
        u.iter().zip(&v).map(|(a, b)| (a - b).norm() / a.norm().max(f64::MIN_POSITIVE)).fold(0.0, f64::max)
    }
}

/// Multiplier relating a solution at the image parameters to one at the source.
#[derive(Debug, Clone, PartialEq)]
pub enum GaugeFactor {
    Trivial,
    /// `x^p`.
    Power(C64),
    /// `∏(nᵢx)_∞ / ∏(dⱼx)_∞`.
    PochRatio {
        num: Vec<C64>,
        den: Vec<C64>,
    },
}

impl GaugeFactor {
    pub fn eval(&self, x: C64, ctx: &QContext) -> Result<C64> {
        match self {
            GaugeFactor::Trivial => Ok(one()),
            GaugeFactor::Power(p) => cpow(x, *p),
            GaugeFactor::PochRatio { num, den } => {
                let n: Vec<C64> = num.iter().map(|c| c * x).collect();
                let d: Vec<C64> = den.iter().map(|c| c * x).collect();
                qpoch_ratio(&n, &d, ctx)
            }
        }
    }
}

/// Point map `x ↦ k·x^e`, `e = ±1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointMap {
    pub k: C64,
    pub e: i32,
}

impl PointMap {
    pub const IDENTITY: PointMap = PointMap { k: C64::new(1.0, 0.0), e: 1 };

    pub fn apply(&self, x: C64) -> C64 {
        self.k * x.powi(self.e)
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &PointMap) -> PointMap {
        PointMap { k: next.k * self.k.powi(next.e), e: self.e * next.e }
    }
}

/// Result of one generator.
#[derive(Debug, Clone, PartialEq)]
pub struct Action {
    pub state: GroupState,
    pub gauge: GaugeFactor,
    pub map: PointMap,
}

fn bad_generator(g: Group, i: u8) -> QError {
    QError::Invalid(format!("{g} has no generator s{i}"))
}

fn act_g1(i: u8, p: &HeineParams, ctx: &QContext) -> Result<(HeineParams, GaugeFactor, PointMap)> {
    let q = ctx.q;
    let (a, b, c) = (p.a, p.b, p.c);
    Ok(match i {
        1 => (HeineParams::new(b, a, c), GaugeFactor::Trivial, PointMap::IDENTITY),
        2 => (
            HeineParams::new(a * q / c, b * q / c, q * q / c),
            GaugeFactor::Power(one() - ctx.log_q(c)),
            PointMap::IDENTITY,
        ),
        3 => (
            HeineParams::new(c / a, c / b, c),
            GaugeFactor::PochRatio { num: vec![a * b / c], den: vec![one()] },
            PointMap { k: a * b / c, e: 1 },
        ),
        4 => (
            HeineParams::new(a, a * q / c, a * q / b),
            GaugeFactor::Power(-ctx.log_q(a)),
            PointMap { k: c * q / (a * b), e: -1 },
        ),
        _ => return Err(bad_generator(Group::G1, i)),
    })
}

fn act_g2(i: u8, p: &Params2, ctx: &QContext) -> Result<(Params2, GaugeFactor, PointMap)> {
    let q = ctx.q;
    let qa = p.qalpha(ctx);
    let [a1, a2] = p.a;
    let [b1, b2] = p.b;
    let (ba, bb) = (p.big_a, p.big_b);
    let mk = |qa: C64, a: [C64; 2], b: [C64; 2], big_b: C64| Params2 { alpha: ctx.log_q(qa), a, b, big_a: ba, big_b };
    Ok(match i {
        1 => (
            mk(ba / bb, [a1 * ba / (qa * bb), a2 * ba / (qa * bb)], [b1, b2], ba / qa),
            GaugeFactor::Trivial,
            PointMap::IDENTITY,
        ),
        2 => (Params2 { a: [a2, a1], ..*p }, GaugeFactor::Trivial, PointMap::IDENTITY),
        3 => (Params2 { b: [b2, b1], ..*p }, GaugeFactor::Trivial, PointMap::IDENTITY),
        4 => {
            let k = a1 * ba / (q * b1 * bb);
            (
                mk(qa / k, [a1, a2 * k], [a1 * ba / (q * bb), b2], a1 * ba / (q * b1)),
                GaugeFactor::PochRatio { num: vec![ba / b1], den: vec![q * bb / a1] },
                PointMap::IDENTITY,
            )
        }
        _ => return Err(bad_generator(Group::G2, i)),
    })
}

fn act_g3(i: u8, p: &Params3, ctx: &QContext) -> Result<(Params3, GaugeFactor, PointMap)> {
    let q = ctx.q;
    let [a1, a2, a3] = p.a;
    let [b1, b2, b3] = p.b;
    let (ba, bb) = (p.big_a, p.big_b);
    let id = PointMap::IDENTITY;
    Ok(match i {
        1 => {
            let k = a1 * ba / (q * b1 * bb);
            let np = Params3 {
                a: [a1, a2 * k, a3 * k],
                b: [a1 * ba / (q * bb), b2, b3],
                big_a: ba,
                big_b: a1 * ba / (q * b1),
            };
            (np, GaugeFactor::PochRatio { num: vec![ba / b1], den: vec![q * bb / a1] }, id)
        }
        2 => {
            let ab = ba * bb;
            let np = Params3 { a: [ab / b1, ab / b2, ab / b3], b: [ab / a1, ab / a2, ab / a3], big_a: ba, big_b: bb };
            (np, GaugeFactor::Power(p.lambda(ctx)), PointMap { k: one(), e: -1 })
        }
        3 => (Params3 { a: [a2, a1, a3], ..*p }, GaugeFactor::Trivial, id),
        4 => (Params3 { a: [a1, a3, a2], ..*p }, GaugeFactor::Trivial, id),
        5 => (Params3 { b: [b2, b1, b3], ..*p }, GaugeFactor::Trivial, id),
        6 => (Params3 { b: [b1, b3, b2], ..*p }, GaugeFactor::Trivial, id),
        _ => return Err(bad_generator(Group::G3, i)),
    })
}

/// Applies generator `s_i` to `state`.
pub fn group_action(i: u8, state: &GroupState, ctx: &QContext) -> Result<Action> {
    let (params, gauge, map) = match state.params {
        Equation::Heine(p) => {
            let (p, g, m) = act_g1(i, &p, ctx)?;
            (Equation::Heine(p), g, m)
        }
        Equation::E2(p) => {
            let (p, g, m) = act_g2(i, &p, ctx)?;
            (Equation::E2(p), g, m)
        }
        Equation::E3(p) => {
            let (p, g, m) = act_g3(i, &p, ctx)?;
            (Equation::E3(p), g, m)
        }
        ref other => return Err(QError::Unsupported(format!("no symmetry group for {}", other.name()))),
    };
    Ok(Action { state: GroupState { params, x: map.apply(state.x) }, gauge, map })
}

/// The sequence of actions along `word`, `s_{w₀}` first.
pub fn walk(word: &[u8], state: &GroupState, ctx: &QContext) -> Result<Vec<Action>> {
    let mut out = Vec::with_capacity(word.len());
    let mut st = *state;
    for &i in word {
        let a = group_action(i, &st, ctx)?;
        st = a.state;
        out.push(a);
    }
    Ok(out)
}

/// Final state after `word`.
pub fn transport_state(word: &[u8], state: &GroupState, ctx: &QContext) -> Result<GroupState> {
    Ok(walk(word, state, ctx)?.last().map(|a| a.state).unwrap_or(*state))
}

/// Product of the gauge factors along `word`, evaluated at `x`, and the
/// image of `x` under the composed point map.
pub fn composite_gauge(word: &[u8], state: &GroupState, x: C64, ctx: &QContext) -> Result<(C64, C64)> {
    let mut g = one();
    let mut y = x;
    for a in walk(word, state, ctx)? {
        g *= a.gauge.eval(y, ctx)?;
        y = a.map.apply(y);
    }
    Ok((g, y))
}

/// A defining relation, a word acting trivially.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relation {
    pub name: String,
    pub word: Vec<u8>,
}

impl Relation {
    fn power(base: &[u8], n: usize) -> Self {
        let body: String = base.iter().map(|i| format!("s{i}")).collect();
        let name = if base.len() == 1 { format!("{body}^{n}") } else { format!("({body})^{n}") };
        Relation { name, word: base.repeat(n) }
    }

    fn word(w: &[u8]) -> Self {
        Relation { name: w.iter().map(|i| format!("s{i}")).collect(), word: w.to_vec() }
    }
}

/// Defining relations of each group.
pub fn relations(g: Group) -> Vec<Relation> {
    let mut r: Vec<Relation> = (1..=g.generators()).map(|i| Relation::power(&[i], 2)).collect();
    let pw = |pairs: &[([u8; 2], usize)]| pairs.iter().map(|(b, n)| Relation::power(b, *n)).collect::<Vec<_>>();
    match g {
        Group::G1 => {
            for i in 1..=3u8 {
                for j in i + 1..=3 {
                    r.push(Relation::power(&[i, j], 2));
                }
            }
            for i in 1..=3u8 {
                r.push(Relation::power(&[i, 4], 4));
            }
            for i in 1..=3u8 {
                for j in 1..=3u8 {
                    if i != j {
                        r.push(Relation::power(&[i, j, 4], 2));
                    }
                }
            }
        }
        Group::G2 => r.extend(pw(&[([1, 2], 2), ([1, 3], 2), ([1, 4], 2), ([2, 3], 2), ([2, 4], 3), ([3, 4], 3)])),
        Group::G3 => {
            r.extend(pw(&[
                ([1, 2], 2),
                ([1, 4], 2),
                ([1, 6], 2),
                ([1, 3], 3),
                ([1, 5], 3),
                ([3, 5], 2),
                ([3, 6], 2),
                ([4, 5], 2),
                ([4, 6], 2),
                ([3, 4], 3),
                ([5, 6], 3),
                ([2, 3], 4),
                ([2, 4], 4),
                ([2, 5], 4),
                ([2, 6], 4),
            ]));
            r.push(Relation::word(&[2, 3, 2, 5]));
            r.push(Relation::word(&[2, 4, 2, 6]));
        }
    }
    r
}

/// A relation of the Heine maps that does not follow from the defining ones:
/// `s₄s₁s₄ = s₂`.
pub const G1_EXTRA_RELATION: [u8; 4] = [1, 4, 2, 4];

/// How far a word is from acting trivially.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelationDefect {
    pub relation: Relation,
    /// Largest relative change of the parameters and the point.
    pub params: f64,
    /// `|G(x)/G(qx) − 1|` for the composite gauge `G`; zero iff the gauge is
    /// a q-periodic multiplier at the probe point.
    pub gauge: f64,
}

pub fn word_defect(relation: &Relation, state: &GroupState, ctx: &QContext) -> Result<RelationDefect> {
    let end = transport_state(&relation.word, state, ctx)?;
    let params = state.distance(&end, ctx);
    let (g0, _) = composite_gauge(&relation.word, state, state.x, ctx)?;
    let (g1, _) = composite_gauge(&relation.word, state, ctx.q * state.x, ctx)?;
    Ok(RelationDefect { relation: relation.clone(), params, gauge: (g0 / g1 - one()).norm() })
}

/// Defects of all defining relations at `state`.
pub fn relation_defects(state: &GroupState, ctx: &QContext) -> Result<Vec<RelationDefect>> {
    relations(state.group()?).iter().map(|r| word_defect(r, state, ctx)).collect()
}

/// Orbit of a Heine state (parameters and point) under the four generators.
pub fn g1_orbit(state: &GroupState, ctx: &QContext) -> Result<Vec<GroupState>> {
    if state.group()? != Group::G1 {
        return Err(QError::Invalid("orbit enumeration is for Heine states".into()));
    }
    let mut orbit = vec![*state];
    let mut frontier = vec![*state];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for s in &frontier {
            for i in 1..=4 {
                let t = group_action(i, s, ctx)?.state;
                if orbit.iter().all(|u| t.distance(u, ctx) > 1e-9) {
                    orbit.push(t);
                    next.push(t);
                }
            }
        }
        frontier = next;
        if orbit.len() > 4096 {
            return Err(QError::Budget(4096));
        }
    }
    Ok(orbit)
}

/// Transports the family `family` along `word`: the result solves the
/// equation at `params`.
pub fn solution_transport<F>(
    word: &[u8],
    params: &Equation,
    base: &str,
    family: F,
    ctx: &QContext,
) -> Result<SolutionHandle>
where
    F: Fn(&Equation) -> Result<SolutionHandle>,
{
    let start = GroupState::new(*params, one());
    let steps = walk(word, &start, ctx)?;
    let end = steps.last().map(|a| a.state.params).unwrap_or(*params);
    let target = family(&end)?;
    let total = steps.iter().fold(PointMap::IDENTITY, |m, a| m.then(&a.map));
    let domain: Annulus = target.domain.pull_back(total.k, total.e);
    if domain.is_empty() {
        return Err(QError::OutOfDomain(vec![]));
    }
    let gauges: Vec<(GaugeFactor, PointMap)> = steps.iter().map(|a| (a.gauge.clone(), a.map)).collect();
    let inner = target.evaluator();
    let c = *ctx;
    let word_name: String = word.iter().map(|i| format!("s{i}")).collect();
    let label = if word.is_empty() { base.to_string() } else { format!("{word_name}*{base}") };
    let region = target.sample_region.map(|r| r.pull_back(total.k, total.e));
    let handle = SolutionHandle::new(label, domain, params.build(ctx)?, move |x| {
        let mut g = one();
        let mut y = x;
        for (gauge, map) in &gauges {
            g *= gauge.eval(y, &c)?;
            y = map.apply(y);
        }
        Ok(g * inner(y)?)
    });
    Ok(match region {
        Some(r) => handle.with_sample_region(r),
        None => handle,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn states(ctx: &QContext) -> Vec<GroupState> {
        vec![
            GroupState::new(Equation::Heine(HeineParams::new(c(0.7, 0.4), c(-0.5, 0.8), c(1.3, -0.6))), c(0.8, 0.3)),
            GroupState::new(
                Equation::E2(Params2::balanced(
                    c(0.6, 0.3),
                    [c(0.4, 0.2), c(0.6, -0.3)],
                    [c(0.8, 0.0), c(1.2, 0.5)],
                    c(0.9, 0.1),
                    ctx,
                )),
                c(0.6, -0.2),
            ),
            GroupState::new(
                Equation::E3(Params3::balanced(
                    [c(1.4, 0.3), c(0.9, -0.5), c(-0.6, 0.9)],
                    [c(0.5, 0.2), c(0.5, -0.7), c(0.4, 0.3)],
                    c(0.7, -0.4),
                    ctx,
                )),
                c(0.7, 0.1),
            ),
        ]
    }

    #[test]
    fn defining_relations_hold() {
        let ctx = QContext::real(0.5);
        for st in states(&ctx) {
            for d in relation_defects(&st, &ctx).unwrap() {
                assert!(d.params < 1e-12, "{}: {:?}", st.group().unwrap(), d);
            }
        }
    }

    #[test]
    fn actions_preserve_balance() {
        let ctx = QContext::real(0.5);
        for st in states(&ctx) {
            for i in 1..=st.group().unwrap().generators() {
                let t = group_action(i, &st, &ctx).unwrap().state;
                match t.params {
                    Equation::E2(p) => p.check_balance(&ctx).unwrap(),
                    Equation::E3(p) => p.check_balance(&ctx).unwrap(),
                    _ => {}
                }
            }
            assert!(group_action(9, &st, &ctx).is_err());
        }
    }

    #[test]
    fn heine_orbit_and_extra_relation() {
        let ctx = QContext::real(0.5);
        let st = states(&ctx)[0];
        assert_eq!(g1_orbit(&st, &ctx).unwrap().len(), 16);
        let r = Relation::word(&G1_EXTRA_RELATION);
        assert!(word_defect(&r, &st, &ctx).unwrap().params < 1e-12);
    }

    #[test]
    fn point_maps_compose() {
        let m = PointMap { k: c(2.0, 0.0), e: -1 }.then(&PointMap { k: c(3.0, 0.0), e: -1 });
        assert_eq!(m.e, 1);
        assert!((m.apply(c(5.0, 0.0)) - c(7.5, 0.0)).norm() < 1e-12);
    }
}
