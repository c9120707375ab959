//! Acceptance report.
//!
//! Prints one PASS/FAIL line per criterion with the measured numbers below
//! it. Criteria that cannot hold as stated are reported as FAIL and the run
//! asserts that known outcome, so an unexpected change in either direction
//! makes the test fail.

use std::process::ExitCode;
use std::time::Instant;

use qhyp_core::equations::{verify_degeneration, DegenerationBase, Equation, HeineParams, Params3, Verdict};
use qhyp_core::opalgebra::{configuration, is_nonlog, Boundary};
use qhyp_core::qcore::{qpoch_fin, qpoch_ratio};
use qhyp_core::qseries::{bailey_w87_rhs, phi_of, psi33, w87, W87IntegralParams, W87Limit};
use qhyp_core::sampling::Sampler;
use qhyp_core::solutions::{
    andrews_integral, andrews_rhs, casoratian, check_intcalcu, check_intcalcu_tilde, cocycle_check, family_labels,
    g1_andrews, g1_from_phi2, g1_orbit, g1_radius, numerical_rank, phi3, phi3_tilde, relation_defects, relation_matrix,
    resolve, self_residual, solution_transport, special_phi3, special_phi3_literal, special_phi3_tilde,
    special_phi3_tilde_literal, terminating_e2_params, terminating_heine_params, Annulus, Endpoint, Group, GroupState,
    SolutionHandle, HEINE_GENERIC, HEINE_TERMINATING, RELATION_COLUMNS, THMSER2_GENERIC, THMSER2_TERMINATING,
};
use qhyp_core::{QContext, QError, C64};

const TOL: f64 = 1e-8;
const EXACT: f64 = 1e-12;
const DRAWS: usize = 20;

struct Outcome {
    pass: bool,
    /// Some sub-check differs from its recorded outcome.
    surprise: bool,
    summary: String,
    details: Vec<String>,
}

impl Outcome {
    fn new(summary: impl Into<String>) -> Self {
        Outcome { pass: true, surprise: false, summary: summary.into(), details: Vec::new() }
    }

    /// Records a sub-check; `known` is its expected verdict.
    fn check(&mut self, ok: bool, known: bool, line: String) {
        let tag = match (ok, known) {
            (true, _) => "PASS",
            (false, false) => "FAIL (known)",
            (false, true) => "FAIL",
        };
        self.details.push(format!("{tag:<12} {line}"));
        self.pass &= ok;
        if ok != known {
            self.details.push(format!("{:<12} ^ outcome differs from the recorded one", "!!"));
            self.surprise = true;
        }
    }

    fn info(&mut self, line: String) {
        self.details.push(format!("{:<12} {line}", "INFO"));
    }
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn e(x: f64) -> String {
    format!("{x:.1e}")
}

fn list(xs: &[f64]) -> String {
    xs.iter().map(|x| format!("{x:e}")).collect::<Vec<_>>().join(", ")
}

fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / b.norm().max(f64::MIN_POSITIVE)
}

fn max(v: impl IntoIterator<Item = f64>) -> f64 {
    v.into_iter().fold(0.0, f64::max)
}

fn decreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] < w[0])
}

// ---------------------------------------------------------------- criterion 1

fn configurations() -> Outcome {
    let ctx = QContext::default();
    let mut out = Outcome::new("configurations match the expected figures; double points are non-logarithmic");
    let kinds: [(&str, fn(&mut Sampler, &QContext) -> Equation); 7] = [
        ("heine", |s, c| Equation::Heine(s.heine(c))),
        ("qheun", |s, _| Equation::Qheun(s.heun())),
        ("qheun3", |s, _| Equation::Qheun3(s.heun3())),
        ("h2", |s, _| Equation::H2(s.h2())),
        ("h3", |s, _| Equation::H3(s.h3())),
        ("e2", |s, c| Equation::E2(s.params2(c))),
        ("e3", |s, c| Equation::E3(s.params3(c))),
    ];
    let start = Instant::now();
    for (k, (name, draw)) in kinds.iter().enumerate() {
        let mut s = Sampler::new(100 + k as u64);
        let (mut matched, mut nonlog, mut doubles, mut defect) = (0, 0, 0, 0.0f64);
        for _ in 0..50 {
            let eq = draw(&mut s, &ctx);
            let l = eq.build(&ctx).unwrap();
            let cfg = configuration(&l, &ctx).unwrap();
            let want = eq.expected_configuration(&ctx);
            matched += cfg.matches(&want, TOL) as usize;
            defect = defect.max(cfg.product_defect());
            let sides = [(want.double_x0, Boundary::X0, c(1.0, 0.0)), (want.double_xinf, Boundary::XInf, ctx.q)];
            for (point, side, shift) in sides {
                if let Some(a) = point {
                    doubles += 1;
                    nonlog += matches!(is_nonlog(&l, a * shift, side, &ctx), Ok(true)) as usize;
                }
            }
        }
        out.check(
            matched == 50 && nonlog == doubles,
            true,
            format!(
                "{name:<7} {matched}/50 match, {nonlog}/{doubles} double points non-log, product defect {}",
                e(defect)
            ),
        );
    }
    let secs = start.elapsed().as_secs_f64();
    out.check(secs < 10.0, true, format!("runtime {secs:.2} s (limit 10 s)"));
    out
}

// ---------------------------------------------------------------- criterion 2

fn degree_three_integrals() -> Outcome {
    let ctx = QContext::default();
    let mut out = Outcome::new("integral solutions of the degree-three equation");
    let mut s = Sampler::new(200);
    let labels: Vec<String> = family_labels("e3").into_iter().filter(|l| l.starts_with("thmint3")).collect();
    let (mut worst, mut errors, mut runs) = (0.0f64, Vec::new(), 0);
    let (mut lemma, mut tilde_lit, mut tilde_fit) = (0.0f64, 0.0f64, 0.0f64);
    let start = Instant::now();
    for _ in 0..DRAWS {
        let p = s.params3(&ctx);
        let eq = Equation::E3(p);
        for label in &labels {
            match resolve(label, &eq, &ctx).and_then(|h| self_residual(&h, 10, &ctx)) {
                Ok(r) => {
                    worst = worst.max(r);
                    runs += 1;
                }
                Err(err) => errors.push(format!("{label}: {err}")),
            }
        }
        let x = c(s.uniform(0.3, 1.5), 0.0);
        for tau in Endpoint::tau_set(3, false) {
            lemma = lemma.max(check_intcalcu(&p, tau, x, &ctx).unwrap());
        }
        for sigma in Endpoint::sigma_set(3, false) {
            let d = check_intcalcu_tilde(&p, sigma, x, &ctx).unwrap();
            tilde_lit = tilde_lit.max(d.literal);
            tilde_fit = tilde_fit.max(d.fitted);
        }
    }
    out.check(
        worst < TOL && errors.is_empty(),
        true,
        format!(
            "{} labels x {DRAWS} draws x 10 points: {runs} runs, max residual {}, {} errors",
            labels.len(),
            e(worst),
            errors.len()
        ),
    );
    for err in errors.iter().take(3) {
        out.info(err.clone());
    }
    out.check(lemma < TOL, true, format!("one-sided value (1-q)q(A-B)x^2: max rel. deviation {}", e(lemma)));
    out.check(
        tilde_lit < TOL,
        false,
        format!("one-sided tilde value (1-q)q^-1(B-A)x^(lambda+1) as printed: max rel. deviation {}", e(tilde_lit)),
    );
    out.check(
        tilde_fit < TOL,
        true,
        format!("same with constant times q^2 b1 b2 b3/A: max rel. deviation {}", e(tilde_fit)),
    );
    let secs = start.elapsed().as_secs_f64();
    out.check(secs < 60.0, true, format!("runtime {secs:.2} s (limit 60 s)"));
    out
}

// ---------------------------------------------------------------- criterion 3

fn degree_two_integrals() -> Outcome {
    let ctx = QContext::default();
    let mut out = Outcome::new("integral solutions of the degree-two equation and the Appell correspondence");
    let mut s = Sampler::new(300);
    let labels: Vec<String> = family_labels("e2").into_iter().filter(|l| l.starts_with("thmint2")).collect();
    let (mut worst, mut runs, mut errors) = (0.0f64, 0, Vec::new());
    for _ in 0..DRAWS {
        let eq = Equation::E2(s.params2(&ctx));
        for label in &labels {
            match resolve(label, &eq, &ctx).and_then(|h| self_residual(&h, 10, &ctx)) {
                Ok(r) => {
                    worst = worst.max(r);
                    runs += 1;
                }
                Err(err) => errors.push(format!("{label}: {err}")),
            }
        }
    }
    out.check(
        worst < TOL && errors.is_empty(),
        true,
        format!(
            "{} labels (with 0 and infinity) x {DRAWS} draws: {runs} runs, max residual {}",
            labels.len(),
            e(worst)
        ),
    );
    for err in errors.iter().take(3) {
        out.info(err.clone());
    }

    let mut dev = 0.0f64;
    for _ in 0..DRAWS {
        let alpha = s.positive_exponent();
        let (b1, b2, cc) = (s.complex(), s.complex(), s.complex());
        let (x1, x2) = (s.complex_in(0.05, 0.8), s.complex_in(0.05, 0.8));
        if let (Ok(u), Ok(v)) =
            (andrews_integral(alpha, b1, b2, cc, x1, x2, &ctx), andrews_rhs(alpha, b1, b2, cc, x1, x2, &ctx))
        {
            dev = dev.max(rel(u, v));
        }
    }
    out.check(dev < TOL, true, format!("Jackson integral = Appell series: max rel. deviation {}", e(dev)));

    let (mut dev, mut n) = (0.0f64, 0);
    for _ in 0..DRAWS {
        let p = s.h2();
        let big_a = s.complex();
        let x = c(2.0 * g1_radius(&p, &ctx) + 0.5, 0.3);
        if let (Ok(u), Ok(v)) = (g1_andrews(&p, x, &ctx), g1_from_phi2(&p, big_a, x, &ctx)) {
            dev = dev.max(rel(u, v));
            n += 1;
        }
    }
    out.check(
        dev < TOL && n >= DRAWS / 2,
        true,
        format!("Appell solution of H2 = integral with endpoints 0, q/(Ax): {n} draws, max rel. deviation {}", e(dev)),
    );
    out
}

// ---------------------------------------------------------------- criterion 4

fn sweep(labels: &[String], eqs: &[Equation], ctx: &QContext) -> (f64, usize, usize) {
    let (mut worst, mut runs, mut empty) = (0.0f64, 0, 0);
    for eq in eqs {
        for label in labels {
            match resolve(label, eq, ctx).and_then(|h| self_residual(&h, 10, ctx)) {
                Ok(r) => {
                    worst = worst.max(r);
                    runs += 1;
                }
                Err(QError::OutOfDomain(_)) | Err(QError::Invalid(_)) => empty += 1,
                Err(err) => panic!("{label}: {err}"),
            }
        }
    }
    (worst, runs, empty)
}

/// Series with arguments close to the unit circle need more than the default
/// number of terms.
fn long_ctx() -> QContext {
    QContext { max_terms: 4096, ..QContext::default() }
}

fn series_solutions() -> Outcome {
    let ctx = long_ctx();
    let mut out = Outcome::new("series solutions of the degree-three, degree-two and Heine equations");
    let mut s = Sampler::new(400);

    let e3: Vec<Equation> = (0..10 * DRAWS).map(|_| Equation::E3(s.params3(&ctx))).collect();
    for i in 1..=6 {
        let label = format!("thmser3.{i}");
        let inside: Vec<Equation> = e3
            .iter()
            .filter(|eq| resolve(&label, eq, &ctx).is_ok_and(|h| h.sample_points(1).is_ok()))
            .take(DRAWS)
            .copied()
            .collect();
        let (r, runs, _) = sweep(std::slice::from_ref(&label), &inside, &ctx);
        out.check(r < TOL && runs == DRAWS, true, format!("{label}: {runs} draws in domain, max residual {}", e(r)));
    }

    let base2: Vec<_> = (0..DRAWS).map(|_| s.params2(&ctx)).collect();
    let e2: Vec<Equation> = base2.iter().map(|p| Equation::E2(*p)).collect();
    let mut pool = Sampler::new(450);
    let pool: Vec<Equation> = (0..10 * DRAWS).map(|_| Equation::E2(pool.params2(&ctx))).collect();
    for i in 1..=6u8 {
        let label = format!("thmser2.{i}");
        let inside: Vec<Equation> = pool
            .iter()
            .filter(|eq| resolve(&label, eq, &ctx).is_ok_and(|h| h.sample_points(1).is_ok()))
            .take(DRAWS)
            .copied()
            .collect();
        let (r, runs, _) = sweep(std::slice::from_ref(&label), &inside, &ctx);
        let known = THMSER2_GENERIC.contains(&i);
        out.check(r < TOL && runs == DRAWS, known, format!("{label}: {runs} draws in domain, max residual {}", e(r)));
    }
    for i in THMSER2_TERMINATING {
        let eqs: Vec<Equation> = base2
            .iter()
            .flat_map(|p| (1..=3).filter_map(move |n| terminating_e2_params(i, p, n, &long_ctx()).ok()))
            .map(Equation::E2)
            .collect();
        let (r, runs, _) = sweep(&[format!("thmser2.{i}")], &eqs, &ctx);
        out.info(format!("thmser2.{i} when terminating (n = 1..3): {runs} runs, max residual {}", e(r)));
    }
    let (r, runs, _) = sweep(&["thmser2.extra".into()], &e2, &ctx);
    out.info(format!("thmser2.extra: {runs} runs, max residual {}", e(r)));

    let base: Vec<HeineParams> = (0..DRAWS).map(|_| s.heine(&ctx)).collect();
    let heine: Vec<Equation> = base.iter().map(|p| Equation::Heine(*p)).collect();
    let generic: Vec<String> = HEINE_GENERIC.iter().map(|k| format!("heine.{k}")).collect();
    let (r, runs, _) = sweep(&generic, &heine, &ctx);
    out.check(r < TOL && runs > 0, true, format!("heine list, 16 generic entries: {runs} runs, max residual {}", e(r)));
    let mut failing = Vec::new();
    for k in HEINE_TERMINATING {
        let (r, _, _) = sweep(&[format!("heine.{k}")], &heine, &ctx);
        if r >= TOL {
            failing.push(k);
        }
    }
    out.check(
        failing.is_empty(),
        false,
        format!(
            "heine list, argument-q entries at generic parameters: {} of 16 exceed 1e-8 ({failing:?})",
            failing.len()
        ),
    );
    let (mut r, mut runs) = (0.0f64, 0);
    for k in HEINE_TERMINATING {
        let eqs: Vec<Equation> = base
            .iter()
            .flat_map(|p| (1..=3).filter_map(move |n| terminating_heine_params(k, p, n, &long_ctx()).ok()))
            .map(Equation::Heine)
            .collect();
        let (rk, nk, _) = sweep(&[format!("heine.{k}")], &eqs, &ctx);
        r = r.max(rk);
        runs += nk;
    }
    out.info(format!("the same 16 entries when terminating (n = 1..3): {runs} runs, max residual {}", e(r)));
    let (r, runs, _) = sweep(&["heine_extra.2".into()], &heine, &ctx);
    out.info(format!("heine_extra.2: {runs} runs, max residual {}", e(r)));
    out
}

// ---------------------------------------------------------------- criterion 5

fn closed_form_handle(p: Params3, t: (Endpoint, Endpoint), tilde: bool, ctx: QContext) -> SolutionHandle {
    let op = Equation::E3(p).build(&ctx).unwrap();
    SolutionHandle::new("", Annulus::ALL, op, move |x| {
        if tilde {
            special_phi3_tilde(&p, t.0, t.1, x, &ctx)
        } else {
            special_phi3(&p, t.0, t.1, x, &ctx)
        }
    })
}

/// `|W(f, g)| / (|f(x)g(qx)| + |f(qx)g(x)|)`.
fn casoratian_rel(f: &SolutionHandle, g: &SolutionHandle, x: C64, ctx: &QContext) -> f64 {
    let (fx, fqx, gx, gqx) =
        (f.eval(x).unwrap(), f.eval(ctx.q * x).unwrap(), g.eval(x).unwrap(), g.eval(ctx.q * x).unwrap());
    casoratian(f, g, x, ctx).unwrap().norm() / ((fx * gqx).norm() + (fqx * gx).norm())
}

fn special_case() -> Outcome {
    let ctx = QContext::default();
    let mut out = Outcome::new("closed forms when a_i = b_i and A = q^2 B; Casoratian pattern");
    let mut s = Sampler::new(500);
    let taus = [Endpoint::QOverA(1), Endpoint::QOverA(2), Endpoint::QOverA(3)];
    let sigmas = [Endpoint::B(1), Endpoint::B(2), Endpoint::B(3)];
    let (mut dev, mut dev_lit, mut dev_t, mut dev_t_lit) = (0.0f64, f64::INFINITY, 0.0f64, f64::INFINITY);
    let mut draws = Vec::new();
    for _ in 0..DRAWS {
        let a = [s.complex(), s.complex(), s.complex()];
        let p = Params3::balanced(a, a, s.complex(), &ctx);
        draws.push(p);
        for x in [c(0.45, 0.1), c(1.3, -0.2)] {
            for (t1, t2) in Endpoint::pairs(&taus) {
                let v = phi3(&p, t1, t2, x, &ctx).unwrap();
                dev = dev.max(rel(v, special_phi3(&p, t1, t2, x, &ctx).unwrap()));
                dev_lit = dev_lit.min(rel(v, special_phi3_literal(&p, t1, t2, x, &ctx).unwrap()));
            }
            for (s1, s2) in Endpoint::pairs(&sigmas) {
                let v = phi3_tilde(&p, s1, s2, x, &ctx).unwrap();
                dev_t = dev_t.max(rel(v, special_phi3_tilde(&p, s1, s2, x, &ctx).unwrap()));
                dev_t_lit = dev_t_lit.min(rel(v, special_phi3_tilde_literal(&p, s1, s2, x, &ctx).unwrap()));
            }
        }
    }
    out.check(dev_lit < 1e-10, false, format!("phi3 vs printed closed form: min rel. deviation {}", e(dev_lit)));
    out.check(
        dev_t_lit < 1e-10,
        false,
        format!("tilde phi3 vs printed closed form: min rel. deviation {}", e(dev_t_lit)),
    );
    out.check(dev < 1e-10, true, format!("phi3 vs closed form without the factor 1-q: max rel. deviation {}", e(dev)));
    out.check(
        dev_t < 1e-10,
        true,
        format!("tilde phi3 vs closed form without the factor 1-q: max rel. deviation {}", e(dev_t)),
    );

    let all_taus = [Endpoint::QOverAx, taus[0], taus[1], taus[2]];
    let all_sigmas = [Endpoint::Bx, sigmas[0], sigmas[1], sigmas[2]];
    let tau_pairs = Endpoint::pairs(&all_taus);
    let sigma_pairs = Endpoint::pairs(&all_sigmas);
    let index = |e: Endpoint| match e {
        Endpoint::QOverAx | Endpoint::Bx => 0,
        Endpoint::QOverA(i) | Endpoint::B(i) => i,
        _ => unreachable!(),
    };
    let (mut min_indep, mut max_dep, mut min_zero) = (f64::INFINITY, 0.0f64, f64::INFINITY);
    let x = c(0.45, 0.1);
    for p in &draws[..5] {
        let phis: Vec<_> = tau_pairs.iter().map(|&t| closed_form_handle(*p, t, false, ctx)).collect();
        let tildes: Vec<_> = sigma_pairs.iter().map(|&t| closed_form_handle(*p, t, true, ctx)).collect();
        for i in 0..6 {
            for j in i + 1..6 {
                min_indep = min_indep.min(casoratian_rel(&phis[i], &phis[j], x, &ctx));
                min_indep = min_indep.min(casoratian_rel(&tildes[i], &tildes[j], x, &ctx));
            }
            for j in 0..6 {
                let (a, b) = (tau_pairs[i], sigma_pairs[j]);
                let mut u = [index(a.0), index(a.1)];
                let mut v = [index(b.0), index(b.1)];
                u.sort();
                v.sort();
                let w = casoratian_rel(&phis[i], &tildes[j], x, &ctx);
                if u != v {
                    min_indep = min_indep.min(w);
                } else if u[0] == 0 {
                    min_zero = min_zero.min(w);
                } else {
                    max_dep = max_dep.max(w);
                }
            }
        }
        // Numerical integrals agree with the closed-form pattern.
        let num = |t: (Endpoint, Endpoint), tilde: bool| {
            let p = *p;
            SolutionHandle::new("", Annulus::ALL, Equation::E3(p).build(&ctx).unwrap(), move |x| {
                if tilde {
                    phi3_tilde(&p, t.0, t.1, x, &QContext::default())
                } else {
                    phi3(&p, t.0, t.1, x, &QContext::default())
                }
            })
        };
        let f = num((taus[0], taus[1]), false);
        max_dep = max_dep.max(casoratian_rel(&f, &num((sigmas[0], sigmas[1]), true), x, &ctx));
        min_indep = min_indep.min(casoratian_rel(&f, &num((taus[0], taus[2]), false), x, &ctx));
    }
    out.check(min_indep > 1e-6, true, format!("Casoratian of independent pairs: min relative size {}", e(min_indep)));
    out.check(
        max_dep < EXACT,
        true,
        format!(
            "Casoratian of phi3(q/a_i, q/a_j) and tilde phi3(b_i, b_j), i, j >= 1: max relative size {}",
            e(max_dep)
        ),
    );
    out.check(
        min_zero < EXACT,
        false,
        format!("same with a_0 = Ax, b_0 = Bx (index 0): min relative size {}; the ratio is not constant", e(min_zero)),
    );

    let p = s.params3(&ctx);
    let f = resolve("thmint3.phi3[q/a1,q/a2]", &Equation::E3(p), &ctx).unwrap();
    let g = resolve("thmint3.tilde[b1,b2]", &Equation::E3(p), &ctx).unwrap();
    let w: Vec<String> = [0.3, 0.7, 1.4].iter().map(|&r| e(casoratian_rel(&f, &g, c(r, 0.0), &ctx))).collect();
    out.info(format!("general parameters, phi3(q/a1,q/a2) vs tilde phi3(b1,b2): relative Casoratian {w:?}"));
    out
}

// ---------------------------------------------------------------- criterion 6

fn identities() -> Outcome {
    let ctx = QContext::default();
    let q = ctx.q;
    let mut out = Outcome::new("transformation and summation identities");
    let mut s = Sampler::new(600);

    let dev = max((0..DRAWS).map(|_| {
        let (a, z) = (s.complex(), s.complex_in(0.05, 0.9));
        rel(phi_of(&[a], &[], z, &ctx).unwrap(), qpoch_ratio(&[a * z], &[z], &ctx).unwrap())
    }));
    out.check(dev < TOL, true, format!("q-binomial theorem: max rel. deviation {}", e(dev)));

    let mut dev = 0.0f64;
    for _ in 0..DRAWS {
        let (a, cc) = (s.complex(), s.complex());
        for n in 1..=5u32 {
            let lhs = phi_of(&[a, q.powi(-(n as i32))], &[cc], q, &ctx);
            let rhs = qpoch_fin(cc / a, n as i64, &ctx)
                .and_then(|u| Ok(u / qpoch_fin(cc, n as i64, &ctx)? * a.powi(n as i32)));
            if let (Ok(l), Ok(r)) = (lhs, rhs) {
                dev = dev.max(rel(l, r));
            }
        }
    }
    out.check(dev < TOL, true, format!("q-Vandermonde, n = 1..5: max rel. deviation {}", e(dev)));

    let long = QContext { max_terms: 2_000_000, ..ctx };
    let (mut worst, mut monotone) = (0.0f64, true);
    let hs = [1e-2, 1e-3, 1e-4];
    let ladder: Vec<f64> = (0..6).map(|k| 2e-2 / f64::powi(2.0, k)).collect();
    for _ in 0..DRAWS {
        let a = [s.complex_in(1.0, 2.0), s.complex_in(1.0, 2.0), s.complex_in(1.0, 2.0)];
        let b = [s.complex_in(0.3, 0.9), s.complex_in(0.3, 0.9), s.complex_in(0.3, 0.9)];
        let target = qpoch_ratio(&a, &b, &ctx).unwrap();
        let scaled = |h: f64| psi33(a, b, c(1.0 - h, 0.0), &long).unwrap() * h;
        let errs: Vec<f64> = hs.iter().map(|&h| rel(scaled(h), target)).collect();
        monotone &= decreasing(&errs);
        // Polynomial extrapolation to h = 0 over a halving ladder.
        let v: Vec<C64> = ladder.iter().map(|&h| scaled(h)).collect();
        let w = |i: usize| {
            (0..ladder.len()).filter(|&j| j != i).map(|j| ladder[j] / (ladder[j] - ladder[i])).product::<f64>()
        };
        let extrapolated: C64 = (0..ladder.len()).map(|i| v[i] * w(i)).sum();
        worst = worst.max(rel(extrapolated, target));
    }
    out.check(
        worst < TOL && monotone,
        true,
        format!("bilateral 3psi3 limit at z = 1-1e-2, 1-1e-3, 1-1e-4: errors decrease: {monotone}; extrapolated from h = 2e-2 / 2^k, k < 6: max rel. deviation {}", e(worst)),
    );

    let mut dev = 0.0f64;
    let mut n = 0;
    for _ in 0..DRAWS {
        let p = s.until(
            |s| {
                let (a, b, cc, e1, f, g) = (
                    s.complex_in(0.3, 1.5),
                    s.complex_in(0.3, 1.5),
                    s.complex(),
                    s.complex_in(0.3, 1.5),
                    s.complex_in(0.3, 1.5),
                    s.complex_in(0.3, 1.5),
                );
                let h = s.complex_in(0.1, 0.5);
                W87IntegralParams { a, b, c: cc, d: a * b * e1 * f * g * h / cc, e: e1, f, g, h }
            },
            |p| matches!((p.integral(&ctx), p.series(&ctx)), (Ok(_), Ok(_))),
        );
        dev = dev.max(rel(p.integral(&ctx).unwrap(), p.series(&ctx).unwrap()));
        n += 1;
    }
    out.check(
        dev < TOL,
        true,
        format!("Jackson integral = very-well-poised 8W7 ({n} draws): max rel. deviation {}", e(dev)),
    );

    let mut dev = 0.0f64;
    for _ in 0..DRAWS {
        let (a, b, cc, d, e1, f) = s.until(
            |s| (s.complex(), s.complex(), s.complex(), s.complex(), s.complex(), s.complex()),
            |&(a, b, cc, d, e1, f)| {
                let z = a * a * q * q / (b * cc * d * e1 * f);
                z.norm() < 0.9
                    && (a * q / (e1 * f)).norm() < 0.9
                    && w87(a, b, cc, d, e1, f, z, &ctx).is_ok()
                    && bailey_w87_rhs(a, b, cc, d, e1, f, &ctx).is_ok()
            },
        );
        let z = a * a * q * q / (b * cc * d * e1 * f);
        dev =
            dev.max(rel(w87(a, b, cc, d, e1, f, z, &ctx).unwrap(), bailey_w87_rhs(a, b, cc, d, e1, f, &ctx).unwrap()));
    }
    out.check(dev < TOL, true, format!("Bailey transformation of a balanced 8W7: max rel. deviation {}", e(dev)));

    let mut dev = 0.0f64;
    for _ in 0..DRAWS {
        let p = s.until(
            |s| HeineParams::new(s.complex_in(0.3, 0.9), s.complex(), s.complex()),
            |p| p.validate(&ctx).is_ok(),
        );
        let k = qpoch_ratio(&[p.a], &[p.c], &ctx).unwrap();
        for z in [c(0.3, 0.2), c(-0.5, 0.1), c(0.1, -0.7)] {
            let eq = Equation::Heine(p);
            let f = resolve("heine.1", &eq, &ctx).unwrap();
            let g = resolve("heine_extra.2", &eq, &ctx).unwrap();
            dev = dev.max(rel(f.eval(z).unwrap() / g.eval(z).unwrap(), k));
        }
    }
    out.check(dev < TOL, true, format!("Heine transformation constant (a)_inf/(c)_inf: max rel. deviation {}", e(dev)));
    out
}

// ---------------------------------------------------------------- criterion 7

fn degenerations() -> Outcome {
    let ctx = QContext::default();
    let mut out = Outcome::new("degenerations of operators and of the 8W7 solutions");
    let mut s = Sampler::new(700);
    let draws: [(&str, fn(&mut Sampler, &QContext) -> DegenerationBase); 3] = [
        ("E3 -> E2 (a3 -> inf)", |s, c| DegenerationBase::E3ToE2 { p: s.params2(c), u: s.complex() }),
        ("H3 -> H2 (t3 -> inf)", |s, _| DegenerationBase::H3ToH2 { p: s.h3() }),
        ("H2 -> Heine (t2 -> 0)", |s, _| DegenerationBase::H2ToHeine {
            alpha1: s.exponent(),
            alpha2: s.exponent(),
            l: [s.exponent(), s.exponent()],
            t2: s.complex(),
        }),
    ];
    for (name, draw) in draws {
        let (mut passed, mut last) = (0, 0.0f64);
        let mut scales = Vec::new();
        for _ in 0..DRAWS {
            let base = draw(&mut s, &ctx);
            scales = base.kind().default_scales();
            let r = verify_degeneration(&base, &scales, &ctx).unwrap();
            passed += (r.verdict == Verdict::Pass) as usize;
            last = last.max(*r.deviations.last().unwrap());
        }
        out.check(
            passed == DRAWS,
            true,
            format!("{name}, scales [{}]: {passed}/{DRAWS} monotone, max final deviation {}", list(&scales), e(last)),
        );
    }

    let base = [c(0.9, 0.2), c(0.7, -0.3), c(1.1, 0.4), c(0.6, 0.5), c(0.8, -0.6), c(1.2, 0.1)];
    for lim in W87Limit::ALL {
        let scales: Vec<f64> = if lim.to_infinity() { vec![1e4, 1e6, 1e8] } else { vec![1e-4, 1e-6, 1e-8] };
        let d = lim.deviations(base, &scales, &ctx);
        let (ok, text) = match &d {
            Ok(d) => (
                decreasing(d) && *d.last().unwrap() < 1e-7,
                format!("{:?}", d.iter().map(|&x| e(x)).collect::<Vec<_>>()),
            ),
            Err(err) => (false, err.to_string()),
        };
        let known = matches!(lim.0, 2 | 3 | 6);
        out.check(ok, known, format!("8W7 -> 3phi2 limit {}, scales [{}]: deviations {text}", lim.0, list(&scales)));
    }
    out
}

// ---------------------------------------------------------------- criterion 8

fn groups() -> Outcome {
    let ctx = long_ctx();
    let mut out = Outcome::new("symmetry groups: relations, orbit size, transport of solutions");
    let mut s = Sampler::new(800);
    for g in [Group::G1, Group::G2, Group::G3] {
        let (mut params, mut gauge, mut n) = (0.0f64, 0.0f64, 0);
        for _ in 0..DRAWS {
            let x = c(s.uniform(0.3, 2.0), 0.0);
            let eq = match g {
                Group::G1 => Equation::Heine(s.heine(&ctx)),
                Group::G2 => Equation::E2(s.params2(&ctx)),
                Group::G3 => Equation::E3(s.params3(&ctx)),
            };
            for d in relation_defects(&GroupState::new(eq, x), &ctx).unwrap() {
                params = params.max(d.params);
                gauge = gauge.max(d.gauge);
                n += 1;
            }
        }
        out.check(
            params < EXACT,
            true,
            format!("{g:?}: {n} relation checks, max parameter defect {}, max gauge defect {}", e(params), e(gauge)),
        );
    }

    let sizes: Vec<usize> = (0..5)
        .map(|_| g1_orbit(&GroupState::new(Equation::Heine(s.heine(&ctx)), c(0.7, 0.0)), &ctx).unwrap().len())
        .collect();
    out.check(
        sizes.iter().all(|&n| n == 32),
        false,
        format!("G1 orbit of generic states has 32 points: sizes {sizes:?}"),
    );
    if !sizes.iter().all(|&n| n == 16) {
        out.check(false, true, "orbit size differs from the recorded 16".into());
    }

    let cases: [(Group, &[&str]); 3] = [
        (Group::G1, &["heine.1", "heine.3", "heine.5", "heine.7"]),
        (Group::G2, &["thmser2.1", "thmser2.2", "thmser2.4"]),
        (Group::G3, &["thmser3.1", "thmser3.2", "thmser3.3", "thmser3.4", "thmser3.5", "thmser3.6"]),
    ];
    for (g, bases) in cases {
        let (mut worst, mut covered) = (0.0f64, vec![false; g.generators() as usize]);
        for _ in 0..5 {
            let eq = match g {
                Group::G1 => Equation::Heine(s.heine(&ctx)),
                Group::G2 => Equation::E2(s.params2(&ctx)),
                Group::G3 => Equation::E3(s.params3(&ctx)),
            };
            for i in 1..=g.generators() {
                for base in bases {
                    let b = base.to_string();
                    let fam = move |eq: &Equation| resolve(&b, eq, &long_ctx());
                    let Ok(h) = solution_transport(&[i], &eq, base, fam, &ctx) else { continue };
                    let Ok(r) = self_residual(&h, 10, &ctx) else { continue };
                    worst = worst.max(r);
                    covered[i as usize - 1] = true;
                }
            }
        }
        out.check(
            worst < TOL && covered.iter().all(|&v| v),
            true,
            format!(
                "{g:?}: every generator transports solutions, max residual {} (generators covered {covered:?})",
                e(worst)
            ),
        );
    }
    out
}

// ---------------------------------------------------------------- criterion 9

fn relation_structure() -> Outcome {
    let ctx = QContext::default();
    let mut out = Outcome::new("cocycle identity and the rank of the relation matrix");
    let mut s = Sampler::new(900);
    let ends = Endpoint::tau_set(3, false);
    let (mut cocycle, mut rows) = (0.0f64, 0.0f64);
    let m = relation_matrix();
    for _ in 0..DRAWS {
        let p = s.params3(&ctx);
        let x = c(s.uniform(0.3, 1.5), 0.0);
        for (i, j, k) in [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)] {
            cocycle = cocycle.max(cocycle_check(&p, ends[i], ends[j], ends[k], x, &ctx).unwrap());
        }
        let v: Vec<C64> = RELATION_COLUMNS.iter().map(|&(i, j)| phi3(&p, ends[i], ends[j], x, &ctx).unwrap()).collect();
        let scale = max(v.iter().map(|z| z.norm()));
        for row in &m {
            let sum: C64 = row.iter().zip(&v).map(|(&r, &z)| z * r).sum();
            rows = rows.max(sum.norm() / scale);
        }
    }
    out.check(cocycle < EXACT, true, format!("cocycle over all endpoint triples: max defect {}", e(cocycle)));
    out.check(
        rows < EXACT,
        true,
        format!("each row of the 4x6 matrix annihilates the integrals: max defect {}", e(rows)),
    );
    let rank = numerical_rank(&m);
    out.check(rank == 3, true, format!("numerical rank of the 4x6 matrix: {rank}"));
    out
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("1", configurations),
        ("2", degree_three_integrals),
        ("3", degree_two_integrals),
        ("4", series_solutions),
        ("5", special_case),
        ("6", identities),
        ("7", degenerations),
        ("8", groups),
        ("9", relation_structure),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let total = Instant::now();
    let mut surprises = Vec::new();
    println!("acceptance report");
    for (id, run) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| f == id) {
            continue;
        }
        let t = Instant::now();
        let o = run();
        let secs = t.elapsed().as_secs_f64();
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        let note = if !o.pass && !o.surprise { " [known]" } else { "" };
        println!("{verdict} criterion {id}: {}{note} ({secs:.2} s)", o.summary);
        for d in &o.details {
            println!("    {d}");
        }
        if o.surprise {
            surprises.push(id);
        }
    }
    let secs = total.elapsed().as_secs_f64();
    println!("total {secs:.1} s (target 300 s)");
    if surprises.is_empty() {
        println!("all outcomes as recorded");
        ExitCode::SUCCESS
    } else {
        println!("unexpected outcomes in criteria {surprises:?}");
        ExitCode::FAILURE
    }
}
