//! The five subcommands. Each returns the records to emit, or an input error.

use qhyp_core::equations::{verify_degeneration, DegenerationBase, DegenerationKind, Equation, Verdict as DegVerdict};
use qhyp_core::opalgebra::{configuration, QDiffOperator};
use qhyp_core::qcore::qpoch_ratio;
use qhyp_core::sampling::Sampler;
use qhyp_core::solutions::{
    casoratian, cocycle_check, expand_label, g1_orbit, numerical_rank, phi3, relation_defects, relation_matrix,
    residual, resolve, resolve_with, Endpoint, Family, GroupState, SolutionHandle, RELATION_COLUMNS,
};
use qhyp_core::{QContext, QError, C64};
use serde_json::{json, Value};

use crate::job::{invalid, Input, InputError, Job};
use crate::report::{cx, Report, Verdict};

pub const RESIDUAL_TOL: f64 = 1e-8;
pub const EXACT_TOL: f64 = 1e-12;
pub const EXPECTED_G1_ORBIT: usize = 32;

fn equation(job: &Job) -> Input<Equation> {
    job.equation.ok_or_else(|| InputError("missing `equation`".into()))
}

fn operator(job: &Job, eq: &Equation) -> Input<QDiffOperator> {
    if job.check_balance {
        Ok(eq.build(&job.ctx)?)
    } else {
        Ok(eq.operator_unchecked(&job.ctx))
    }
}

fn params_value(eq: &Equation) -> Value {
    serde_json::to_value(eq).expect("serializable")["params"].take()
}

fn header(r: &mut Report, job: &Job) {
    let mut f = json!({
        "command": job.command.name(),
        "seed": job.seed,
        "samples": job.samples,
        "ctx": job.ctx,
        "check_balance": job.check_balance,
    });
    if let Some(eq) = &job.equation {
        f["equation"] = eq.name().into();
        f["params"] = params_value(eq);
    }
    r.push("job", Verdict::Info, f);
}

/// Expanded labels in job order, without duplicates; every one must name a
/// family of `eq`.
fn labels(job: &Job, eq: &Equation) -> Input<Vec<String>> {
    let mut out: Vec<String> = Vec::new();
    for l in &job.labels {
        for e in expand_label(l, eq.name())? {
            let fam: Family = e.parse()?;
            if fam.equation() != eq.name() {
                return invalid(format!("{e} solves {}, not {}", fam.equation(), eq.name()));
            }
            if !out.contains(&e) {
                out.push(e);
            }
        }
    }
    if out.is_empty() {
        return invalid(format!("no solution families for {}", eq.name()));
    }
    Ok(out)
}

/// Errors that mean "not applicable at these parameters" rather than a broken check.
fn is_domain(e: &QError) -> bool {
    matches!(e, QError::OutOfDomain(_) | QError::Domain(_) | QError::Divergent(_))
}

fn error_row(r: &mut Report, check: &str, e: &QError, mut fields: Value) {
    fields["detail"] = match e {
        QError::OutOfDomain(v) if v.is_empty() => "no sample points inside the domain".into(),
        e => e.to_string().into(),
    };
    r.push(check, if is_domain(e) { Verdict::Skip } else { Verdict::Error }, fields);
}

pub fn config(job: &Job) -> Input<Report> {
    let ctx = &job.ctx;
    let mut r = Report::default();
    header(&mut r, job);
    if let Some(recs) = &job.operator {
        let op = QDiffOperator::from_records(ctx.q, recs);
        if op.is_zero() {
            return invalid("the operator has no nonzero coefficients");
        }
        let cfg = configuration(&op, ctx)?;
        let f = json!({ "source": "operator", "configuration": cfg, "product_defect": cfg.product_defect() });
        r.push("configuration", Verdict::Info, f);
        return Ok(r);
    }
    let eq = equation(job)?;
    let op = operator(job, &eq)?;
    let f = json!({ "source": "equation", "equation": eq.name() });
    match configuration(&op, ctx) {
        Ok(cfg) => {
            let expected = eq.expected_configuration(ctx);
            let mismatches: Vec<&str> = cfg.mismatches(&expected, ctx.eq_tol).iter().map(|b| b.name()).collect();
            let mut f = f;
            f["computed"] = serde_json::to_value(&cfg).expect("serializable");
            f["expected"] = serde_json::to_value(&expected).expect("serializable");
            f["mismatches"] = mismatches.into();
            f["product_defect"] = cfg.product_defect().into();
            f["tolerance"] = ctx.eq_tol.into();
            r.pass_if("configuration", cfg.matches(&expected, ctx.eq_tol), f);
        }
        Err(e) => error_row(&mut r, "configuration", &e, f),
    }
    Ok(r)
}

fn label_residual(h: &SolutionHandle, n: usize, ctx: &QContext) -> Result<(f64, usize), QError> {
    let xs = h.sample_points(n)?;
    Ok((residual(&h.operator, h, &xs, ctx)?, xs.len()))
}

pub fn verify(job: &Job) -> Input<Report> {
    let ctx = &job.ctx;
    let eq = equation(job)?;
    let labels = labels(job, &eq)?;
    let op = operator(job, &eq)?;
    let mut r = Report::default();
    header(&mut r, job);
    for label in labels {
        let f = json!({ "label": label });
        match resolve_with(&label, &eq, op.clone(), ctx).and_then(|h| label_residual(&h, job.samples, ctx)) {
            Ok((v, n)) => {
                let f = json!({ "label": label, "residual": v, "points": n, "tolerance": RESIDUAL_TOL });
                r.pass_if("residual", v < RESIDUAL_TOL, f);
            }
            Err(e) => error_row(&mut r, "residual", &e, f),
        }
    }
    Ok(r)
}

fn relative_casoratian(f: &SolutionHandle, g: &SolutionHandle, x: C64, ctx: &QContext) -> Result<f64, QError> {
    let w = casoratian(f, g, x, ctx)?;
    let qx = ctx.q * x;
    let scale = (f.eval(x)? * g.eval(qx)?).norm() + (f.eval(qx)? * g.eval(x)?).norm();
    Ok(w.norm() / scale.max(f64::MIN_POSITIVE))
}

fn heine_with_small_a(s: &mut Sampler, ctx: &QContext) -> qhyp_core::equations::HeineParams {
    s.until(|s| s.heine(ctx), |p| p.a.norm() < 0.9)
}

pub fn relations(job: &Job) -> Input<Report> {
    let ctx = &job.ctx;
    let eq = equation(job)?;
    let Equation::E3(p) = eq else {
        return invalid(format!("relations run on the degree-three equation, not {}", eq.name()));
    };
    let mut s = job.sampler(1);
    let xs: Vec<C64> = (0..job.samples).map(|_| C64::new(s.uniform(0.3, 1.5), 0.0)).collect();
    let mut r = Report::default();
    header(&mut r, job);

    let ends = Endpoint::tau_set(3, false);
    for (i, j, k) in [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)] {
        let name = format!("[{},{},{}]", ends[i], ends[j], ends[k]);
        let worst = xs
            .iter()
            .try_fold(0.0f64, |m, &x| Ok::<_, QError>(m.max(cocycle_check(&p, ends[i], ends[j], ends[k], x, ctx)?)));
        match worst {
            Ok(d) => {
                r.pass_if("cocycle", d < EXACT_TOL, json!({ "endpoints": name, "defect": d, "tolerance": EXACT_TOL }))
            }
            Err(e) => error_row(&mut r, "cocycle", &e, json!({ "endpoints": name })),
        }
    }

    let m = relation_matrix();
    let mut rows_defect = Ok(0.0f64);
    for &x in &xs {
        let v: Result<Vec<C64>, QError> =
            RELATION_COLUMNS.iter().map(|&(i, j)| phi3(&p, ends[i], ends[j], x, ctx)).collect();
        rows_defect = rows_defect.and_then(|d| {
            let v = v?;
            let scale = v.iter().map(|z| z.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
            Ok(m.iter()
                .map(|row| row.iter().zip(&v).map(|(&c, &z)| z * c).sum::<C64>().norm() / scale)
                .fold(d, f64::max))
        });
    }
    match rows_defect {
        Ok(d) => r.pass_if("relation_matrix_rows", d < EXACT_TOL, json!({ "defect": d, "tolerance": EXACT_TOL })),
        Err(e) => error_row(&mut r, "relation_matrix_rows", &e, json!({})),
    }
    let rank = numerical_rank(&m);
    r.pass_if("relation_matrix_rank", rank == 3, json!({ "rank": rank, "expected": 3, "matrix": m }));

    let heine = heine_with_small_a(&mut s, ctx);
    let states = [
        ("G1", GroupState::new(Equation::Heine(s.heine(ctx)), xs[0])),
        ("G2", GroupState::new(Equation::E2(s.params2(ctx)), xs[0])),
        ("G3", GroupState::new(eq, xs[0])),
    ];
    for (g, st) in states {
        match relation_defects(&st, ctx) {
            Ok(ds) => {
                for d in ds {
                    let f = json!({ "group": g, "relation": d.relation.name, "params_defect": d.params, "gauge_defect": d.gauge, "tolerance": EXACT_TOL });
                    r.pass_if("group_relation", d.params < EXACT_TOL, f);
                }
            }
            Err(e) => error_row(&mut r, "group_relation", &e, json!({ "group": g })),
        }
    }

    let orbit_state = GroupState::new(Equation::Heine(heine), C64::new(0.7, 0.0));
    match g1_orbit(&orbit_state, ctx) {
        Ok(o) => {
            let f = json!({ "group": "G1", "size": o.len(), "expected": EXPECTED_G1_ORBIT, "note": "the generators satisfy s4 s1 s4 = s2 on parameters" });
            r.pass_if("g1_orbit", o.len() == EXPECTED_G1_ORBIT, f);
        }
        Err(e) => error_row(&mut r, "g1_orbit", &e, json!({ "group": "G1" })),
    }

    let labels: Vec<String> = Endpoint::pairs(&ends).iter().map(|(a, b)| format!("thmint3.phi3[{a},{b}]")).collect();
    let handles: Result<Vec<SolutionHandle>, QError> = labels.iter().map(|l| resolve(l, &eq, ctx)).collect();
    match handles {
        Ok(hs) => {
            for i in 0..hs.len() {
                for j in i + 1..hs.len() {
                    let f = json!({ "first": labels[i], "second": labels[j], "x": cx(xs[0]) });
                    match relative_casoratian(&hs[i], &hs[j], xs[0], ctx) {
                        Ok(w) => {
                            let mut f = f;
                            f["relative"] = w.into();
                            r.push("casoratian", Verdict::Info, f);
                        }
                        Err(e) => error_row(&mut r, "casoratian", &e, f),
                    }
                }
            }
        }
        Err(e) => error_row(&mut r, "casoratian", &e, json!({})),
    }

    let heine_eq = Equation::Heine(heine);
    let expected = qpoch_ratio(&[heine.a], &[heine.c], ctx)?;
    let zs = [C64::new(0.3, 0.2), C64::new(-0.5, 0.1), C64::new(0.1, -0.7)];
    let dev = resolve("heine.1", &heine_eq, ctx).and_then(|f| {
        let g = resolve("heine_extra.2", &heine_eq, ctx)?;
        zs.iter().try_fold(0.0f64, |m, &z| {
            let ratio = f.eval(z)? / g.eval(z)?;
            Ok(m.max((ratio - expected).norm() / expected.norm()))
        })
    });
    let f = json!({ "params": params_value(&heine_eq), "expected": cx(expected), "tolerance": RESIDUAL_TOL });
    match dev {
        Ok(d) => {
            let mut f = f;
            f["deviation"] = d.into();
            r.pass_if("heine_connection", d < RESIDUAL_TOL, f);
        }
        Err(e) => error_row(&mut r, "heine_connection", &e, f),
    }
    Ok(r)
}

fn draw_base(kind: DegenerationKind, s: &mut Sampler, ctx: &QContext) -> DegenerationBase {
    match kind {
        DegenerationKind::E3ToE2 => DegenerationBase::E3ToE2 { p: s.params2(ctx), u: s.complex() },
        DegenerationKind::H3ToH2 => DegenerationBase::H3ToH2 { p: s.h3() },
        DegenerationKind::H2ToHeine => DegenerationBase::H2ToHeine {
            alpha1: s.exponent(),
            alpha2: s.exponent(),
            l: [s.exponent(), s.exponent()],
            t2: s.complex(),
        },
    }
}

pub fn limits(job: &Job) -> Input<Report> {
    let ctx = &job.ctx;
    let spec = &job.limits;
    let kinds = match (&spec.base, &spec.kinds) {
        (Some(b), Some(k)) if k.as_slice() != [b.kind()] => {
            return invalid("`limits.kinds` disagrees with `limits.base`")
        }
        (Some(b), _) => vec![b.kind()],
        (None, Some(k)) if k.is_empty() => return invalid("`limits.kinds` is empty"),
        (None, Some(k)) => k.clone(),
        (None, None) => vec![DegenerationKind::E3ToE2, DegenerationKind::H3ToH2, DegenerationKind::H2ToHeine],
    };
    let mut s = job.sampler(2);
    let mut r = Report::default();
    header(&mut r, job);
    for kind in kinds {
        let base = spec.base.unwrap_or_else(|| draw_base(kind, &mut s, ctx));
        let scales = spec.scales.clone().unwrap_or_else(|| kind.default_scales());
        let rep = verify_degeneration(&base, &scales, ctx)?;
        let verdict = match rep.verdict {
            DegVerdict::Pass => Verdict::Pass,
            DegVerdict::Fail => Verdict::Fail,
            DegVerdict::Informational => Verdict::Info,
        };
        let f = json!({
            "kind": kind,
            "base": base,
            "scales": rep.scales,
            "deviations": rep.deviations,
            "pivot": [rep.pivot.0, rep.pivot.1],
            "tolerance": ctx.eq_tol * 10.0,
        });
        r.push("degeneration", verdict, f);
    }
    Ok(r)
}

/// CSV of `|f(x)|` on log-spaced positive reals; cells outside a domain stay empty.
pub fn sample(job: &Job) -> Input<String> {
    let ctx = &job.ctx;
    let eq = equation(job)?;
    let labels = labels(job, &eq)?;
    let op = operator(job, &eq)?;
    let handles: Vec<Option<SolutionHandle>> =
        labels.iter().map(|l| resolve_with(l, &eq, op.clone(), ctx).ok()).collect();
    let [lo, hi] = match job.range {
        Some(r) => r,
        None => {
            let windows: Vec<Vec<C64>> = handles.iter().flatten().filter_map(|h| h.sample_points(2).ok()).collect();
            if windows.is_empty() {
                return invalid("no sample window: every family is out of domain; pass `range`");
            }
            let lo = windows.iter().map(|w| w[0].re).fold(f64::INFINITY, f64::min);
            let hi = windows.iter().map(|w| w[w.len() - 1].re).fold(0.0, f64::max);
            [lo, hi]
        }
    };
    let n = job.samples;
    let mut out = String::from("x");
    for l in &labels {
        out.push(',');
        out.push_str(l);
    }
    out.push('\n');
    for k in 0..n {
        let t = if n == 1 { 0.5 } else { k as f64 / (n - 1) as f64 };
        let x = (lo.ln() + t * (hi.ln() - lo.ln())).exp();
        out.push_str(&x.to_string());
        for h in &handles {
            out.push(',');
            let z = C64::new(x, 0.0);
            if let Some(v) = h.as_ref().filter(|h| h.domain.contains(z)).and_then(|h| h.eval(z).ok()) {
                out.push_str(&v.norm().to_string());
            }
        }
        out.push('\n');
    }
    Ok(out)
}
