//! Seeded random parameter draws.
//!
//! Moduli lie in `[0.3, 2]` with uniform phases, exponents are small complex
//! numbers, and draws failing a genericity window are redrawn.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::equations::{check_generic, H2Params, H3Params, HeineParams, Heun3Params, HeunParams, Params2, Params3};
use crate::{QContext, C64};

const MAX_REDRAWS: usize = 10_000;

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.gen_range(lo..hi)
    }

    /// Modulus in `[0.3, 2]`, phase in `(−π, π)`.
    pub fn complex(&mut self) -> C64 {
        self.complex_in(0.3, 2.0)
    }

    pub fn complex_in(&mut self, rmin: f64, rmax: f64) -> C64 {
        let r = self.uniform(rmin, rmax);
        let th = self.uniform(-std::f64::consts::PI, std::f64::consts::PI);
        C64::from_polar(r, th)
    }

    /// Real `q ∈ [0.3, 0.6]`.
    pub fn q(&mut self) -> f64 {
        self.uniform(0.3, 0.6)
    }

    /// Small complex exponent.
    pub fn exponent(&mut self) -> C64 {
        C64::new(self.uniform(-0.5, 0.5), self.uniform(-0.3, 0.3))
    }

    /// Exponent with real part in `[0.2, 1.5]`, so that `|q^α| < 1`.
    pub fn positive_exponent(&mut self) -> C64 {
        C64::new(self.uniform(0.2, 1.5), self.uniform(-1.0, 1.0))
    }

    /// Redraws `draw` until `ok` accepts the value.
    pub fn until<T>(&mut self, mut draw: impl FnMut(&mut Self) -> T, ok: impl Fn(&T) -> bool) -> T {
        for _ in 0..MAX_REDRAWS {
            let v = draw(self);
            if ok(&v) {
                return v;
            }
        }
        panic!("no admissible draw after {MAX_REDRAWS} attempts");
    }

    pub fn heine(&mut self, ctx: &QContext) -> HeineParams {
        self.until(
            |s| HeineParams::new(s.complex(), s.complex(), s.complex()),
            |p| p.validate(ctx).is_ok() && check_generic("c", p.c, ctx).is_ok(),
        )
    }

    pub fn params3(&mut self, ctx: &QContext) -> Params3 {
        self.until(
            |s| {
                let a = [s.complex(), s.complex(), s.complex()];
                let b = [s.complex(), s.complex(), s.complex()];
                Params3::balanced(a, b, s.complex(), ctx)
            },
            |p| p.validate(ctx).is_ok(),
        )
    }

    pub fn params2(&mut self, ctx: &QContext) -> Params2 {
        self.until(
            |s| {
                let alpha = s.positive_exponent();
                let a = [s.complex(), s.complex()];
                let b = [s.complex(), s.complex()];
                Params2::balanced(alpha, a, b, s.complex(), ctx)
            },
            |p| p.validate(ctx).is_ok() && check_generic("q^α", p.qalpha(ctx), ctx).is_ok(),
        )
    }

    pub fn h2(&mut self) -> H2Params {
        H2Params {
            h: [self.exponent(), self.exponent()],
            l: [self.exponent(), self.exponent()],
            t: [self.complex(), self.complex()],
            alpha1: self.exponent(),
            alpha2: self.exponent(),
        }
    }

    pub fn h3(&mut self) -> H3Params {
        H3Params {
            h: [self.exponent(), self.exponent(), self.exponent()],
            l: [self.exponent(), self.exponent(), self.exponent()],
            t: [self.complex(), self.complex(), self.complex()],
            alpha: self.exponent(),
        }
    }

    pub fn heun(&mut self) -> HeunParams {
        HeunParams {
            h: [self.exponent(), self.exponent()],
            l: [self.exponent(), self.exponent()],
            t: [self.complex(), self.complex()],
            alpha1: self.exponent(),
            alpha2: self.exponent(),
            beta: self.exponent(),
            e: self.complex(),
        }
    }

    pub fn heun3(&mut self) -> Heun3Params {
        Heun3Params {
            h: [self.exponent(), self.exponent(), self.exponent()],
            l: [self.exponent(), self.exponent(), self.exponent()],
            t: [self.complex(), self.complex(), self.complex()],
            beta: self.exponent(),
            e: self.complex(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_in_range() {
        let ctx = QContext::real(0.5);
        let (mut s1, mut s2) = (Sampler::new(7), Sampler::new(7));
        assert_eq!(s1.params3(&ctx), s2.params3(&ctx));
        for _ in 0..100 {
            let z = s1.complex();
            assert!((0.3..=2.0).contains(&z.norm()));
            let q = s1.q();
            assert!((0.3..0.6).contains(&q));
        }
        let p = s1.params2(&ctx);
        assert!(ctx.qpow(p.alpha).norm() < 1.0);
    }
}
