//! Reference implementations used only by the integration tests: a 200-bit
//! complex recursion and a few helpers.

#![allow(dead_code)]

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const PREC: usize = 200;
const RM: RoundingMode = RoundingMode::ToEven;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform(r: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    r.gen_range(lo..hi)
}

pub fn big(x: f64) -> BigFloat {
    BigFloat::from_f64(x, PREC)
}

pub fn to_f64(x: &BigFloat) -> f64 {
    let mut cc = Consts::new().expect("constants cache");
    let s = x.format(Radix::Dec, RM, &mut cc).expect("format");
    s.parse().unwrap_or_else(|_| panic!("unparsable {s}"))
}

#[derive(Clone, Debug)]
pub struct BigC {
    pub re: BigFloat,
    pub im: BigFloat,
}

impl BigC {
    pub fn from(z: Complex64) -> Self {
        BigC {
            re: big(z.re),
            im: big(z.im),
        }
    }
    pub fn real(x: BigFloat) -> Self {
        BigC {
            re: x,
            im: big(0.0),
        }
    }
    pub fn to_c(&self) -> Complex64 {
        c(to_f64(&self.re), to_f64(&self.im))
    }
    pub fn add(&self, o: &BigC) -> BigC {
        BigC {
            re: self.re.add(&o.re, PREC, RM),
            im: self.im.add(&o.im, PREC, RM),
        }
    }
    pub fn sub(&self, o: &BigC) -> BigC {
        BigC {
            re: self.re.sub(&o.re, PREC, RM),
            im: self.im.sub(&o.im, PREC, RM),
        }
    }
    pub fn mul(&self, o: &BigC) -> BigC {
        let rr = self.re.mul(&o.re, PREC, RM);
        let ii = self.im.mul(&o.im, PREC, RM);
        let ri = self.re.mul(&o.im, PREC, RM);
        let ir = self.im.mul(&o.re, PREC, RM);
        BigC {
            re: rr.sub(&ii, PREC, RM),
            im: ri.add(&ir, PREC, RM),
        }
    }
    pub fn scale(&self, k: &BigFloat) -> BigC {
        BigC {
            re: self.re.mul(k, PREC, RM),
            im: self.im.mul(k, PREC, RM),
        }
    }
    pub fn conj(&self) -> BigC {
        BigC {
            re: self.re.clone(),
            im: self.im.neg(),
        }
    }
    pub fn norm_sqr(&self) -> BigFloat {
        self.re
            .mul(&self.re, PREC, RM)
            .add(&self.im.mul(&self.im, PREC, RM), PREC, RM)
    }
    pub fn div(&self, o: &BigC) -> BigC {
        let d = o.norm_sqr();
        let num = self.mul(&o.conj());
        BigC {
            re: num.re.div(&d, PREC, RM),
            im: num.im.div(&d, PREC, RM),
        }
    }
}

pub fn one() -> BigC {
    BigC::from(c(1.0, 0.0))
}

/// `ρ = (1 − |α|²)^{1/2}` at 200 bits.
pub fn big_rho(a: &BigC) -> BigFloat {
    big(1.0).sub(&a.norm_sqr(), PREC, RM).sqrt(PREC, RM)
}

/// Orthonormal recursion at 200 bits: returns `(φⱼ(z), φⱼ*(z))` for `j ≤ n`.
pub fn big_orthonormal(alphas: &[Complex64], z: Complex64, n: usize) -> Vec<(BigC, BigC)> {
    let zb = BigC::from(z);
    let mut out = vec![(one(), one())];
    for k in 0..n {
        let a = BigC::from(alphas[k]);
        let inv = big(1.0).div(&big_rho(&a), PREC, RM);
        let (phi, star) = out[k].clone();
        let next = zb.mul(&phi).sub(&a.conj().mul(&star)).scale(&inv);
        let next_star = star.sub(&a.mul(&zb).mul(&phi)).scale(&inv);
        out.push((next, next_star));
    }
    out
}

/// Monic recursion `Φₙ₊₁ = zΦₙ − ᾱₙΦₙ*` at 200 bits.
pub fn big_monic(alphas: &[Complex64], z: Complex64, n: usize) -> BigC {
    let zb = BigC::from(z);
    let (mut phi, mut star) = (one(), one());
    for a in alphas.iter().take(n) {
        let a = BigC::from(*a);
        let next = zb.mul(&phi).sub(&a.conj().mul(&star));
        let next_star = star.sub(&a.mul(&zb).mul(&phi));
        phi = next;
        star = next_star;
    }
    phi
}

/// `Δₙ(ζ)` straight from its defining quotient, at 200 bits.
pub fn big_delta(alphas: &[Complex64], zeta: Complex64, gamma: f64, n: usize) -> Complex64 {
    let states = big_orthonormal(alphas, zeta, n + 1);
    let mut kernel = big(0.0);
    for (phi, _) in states.iter().take(n + 1) {
        kernel = kernel.add(&phi.norm_sqr(), PREC, RM);
    }
    let g = big(gamma);
    let ratio = big(1.0).sub(&g, PREC, RM).div(&g, PREC, RM);
    let denom = BigC::real(ratio.add(&kernel, PREC, RM));
    let a = BigC::from(alphas[n]);
    let numer = states[n + 1].0.conj().mul(&states[n].1).scale(&big_rho(&a));
    numer.div(&denom).to_c()
}

/// Relative distance `|a − b| / max(|b|, tiny)`.
pub fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}
