//! Overflow-safe Szegő recursion.
//!
//! [`ScaledPolyState`] holds `φₙ(z) = u·2^e`, `φₙ*(z) = v·2^{e*}` and the
//! diagonal kernel `Kₙ(z,z)`. On the unit circle `|φₙ| = |φₙ*|`, so both share
//! one exponent; off the circle they are scaled independently.

use std::f64::consts::LN_2;

use num_complex::Complex64;

use crate::coeffs::CoefficientSequence;
use crate::error::{Error, Result};
use crate::matrix::TransferMatrix2;
use crate::scaled::{ldexp, ldexp_c, Scaled};

const CIRCLE_TOL: f64 = 1e-12;

pub(crate) fn on_circle(z: Complex64) -> bool {
    (z.norm() - 1.0).abs() <= CIRCLE_TOL
}

/// `ρ = (1 − |α|²)^{1/2}`, with an admissibility check.
pub(crate) fn rho(alpha: Complex64, index: usize) -> Result<f64> {
    let m = alpha.norm();
    if !(m < 1.0) {
        return Err(Error::Admissibility { index, modulus: m });
    }
    Ok(((1.0 - m) * (1.0 + m)).sqrt())
}

/// `(φₙ(z), φₙ*(z))` plus the running kernel and monic norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledPolyState {
    pub n: usize,
    pub z: Complex64,
    /// Mantissa of `φₙ(z)`.
    pub u: Complex64,
    /// Mantissa of `φₙ*(z)`.
    pub v: Complex64,
    /// Binary exponent of `φₙ(z)`.
    pub exp2: i64,
    /// Binary exponent of `φₙ*(z)`; equal to `exp2` on the unit circle.
    pub exp2_star: i64,
    kernel: Scaled,
    /// `log‖Φₙ‖ = ∑_{j<n} log ρⱼ`.
    pub lognorm: f64,
}

impl ScaledPolyState {
    /// `φ₀ = φ₀* = 1`, `K₀ = 1`.
    pub fn initial(z: Complex64) -> Self {
        ScaledPolyState {
            n: 0,
            z,
            u: Complex64::new(1.0, 0.0),
            v: Complex64::new(1.0, 0.0),
            exp2: 0,
            exp2_star: 0,
            kernel: Scaled::ONE,
            lognorm: 0.0,
        }
    }

    pub fn phi(&self) -> Scaled {
        Scaled {
            mant: self.u,
            exp2: self.exp2,
        }
    }

    pub fn phi_star(&self) -> Scaled {
        Scaled {
            mant: self.v,
            exp2: self.exp2_star,
        }
    }

    /// `Kₙ(z,z) = ∑_{j≤n} |φⱼ(z)|²`.
    pub fn kernel(&self) -> Scaled {
        self.kernel
    }

    /// Natural-log scale `s` with `φₙ = u·eˢ`.
    pub fn logscale(&self) -> f64 {
        self.exp2 as f64 * LN_2
    }

    /// `log|φₙ(z)|`.
    pub fn log_abs_phi(&self) -> f64 {
        self.phi().ln_abs()
    }

    /// Kernel mantissa: `Kₙ(z,z) = k_acc · e^{2s}`.
    pub fn k_acc(&self) -> f64 {
        ldexp(self.kernel.mant.re, self.kernel.exp2 - 2 * self.exp2)
    }

    /// Monic `Φₙ(z) = ‖Φₙ‖ φₙ(z)`.
    pub fn monic(&self) -> Scaled {
        self.phi() * Scaled::exp_real(self.lognorm)
    }

    pub fn is_finite(&self) -> bool {
        self.u.re.is_finite()
            && self.u.im.is_finite()
            && self.v.re.is_finite()
            && self.v.im.is_finite()
            && self.kernel.is_finite()
            && self.lognorm.is_finite()
    }
}

/// One step of the recursion
/// `φₙ₊₁ = ρ⁻¹(zφₙ − ᾱφₙ*)`, `φₙ₊₁* = ρ⁻¹(φₙ* − αzφₙ)`.
pub fn szego_step(state: &ScaledPolyState, alpha: Complex64) -> Result<ScaledPolyState> {
    let r = rho(alpha, state.n)?;
    let z = state.z;
    let phi = state.phi();
    let star = state.phi_star();
    let next = (phi * z - star * alpha.conj()).scale_real(1.0 / r);
    let next_star = (star - phi * (alpha * z)).scale_real(1.0 / r);

    let (u, exp2, v, exp2_star) = if on_circle(z) {
        let e = match (next.is_zero(), next_star.is_zero()) {
            (true, true) => 0,
            (true, false) => next_star.exp2,
            (false, true) => next.exp2,
            (false, false) => next.exp2.max(next_star.exp2),
        };
        (
            ldexp_c(next.mant, next.exp2 - e),
            e,
            ldexp_c(next_star.mant, next_star.exp2 - e),
            e,
        )
    } else {
        (next.mant, next.exp2, next_star.mant, next_star.exp2)
    };

    let sq = Scaled::new(Complex64::new(u.norm_sqr(), 0.0), 2 * exp2);
    Ok(ScaledPolyState {
        n: state.n + 1,
        z,
        u,
        v,
        exp2,
        exp2_star,
        kernel: state.kernel + sq,
        lognorm: state.lognorm + r.ln(),
    })
}

/// State after `n` steps from `φ₀ = φ₀* = 1`.
pub fn evaluate(seq: &CoefficientSequence, z: Complex64, n: usize) -> Result<ScaledPolyState> {
    let mut state = ScaledPolyState::initial(z);
    for k in 0..n {
        state = szego_step(&state, seq.alpha(k)?)?;
    }
    Ok(state)
}

/// Iterates the recursion, yielding the state at `0, 1, …, n` in order.
pub fn trajectory(
    seq: &CoefficientSequence,
    z: Complex64,
    n: usize,
    mut visit: impl FnMut(&ScaledPolyState),
) -> Result<ScaledPolyState> {
    let mut state = ScaledPolyState::initial(z);
    visit(&state);
    for k in 0..n {
        state = szego_step(&state, seq.alpha(k)?)?;
        visit(&state);
    }
    Ok(state)
}

/// `Kₙ(z,ζ) = ∑_{j≤n} conj(φⱼ(ζ)) φⱼ(z)`, summed in scaled arithmetic.
pub fn cd_kernel(
    seq: &CoefficientSequence,
    z: Complex64,
    zeta: Complex64,
    n: usize,
) -> Result<Scaled> {
    let mut at_z = ScaledPolyState::initial(z);
    let mut at_zeta = ScaledPolyState::initial(zeta);
    let mut sum = Scaled::ONE;
    for k in 0..n {
        let a = seq.alpha(k)?;
        at_z = szego_step(&at_z, a)?;
        at_zeta = szego_step(&at_zeta, a)?;
        sum = sum + at_zeta.phi().conj() * at_z.phi();
    }
    Ok(sum)
}

/// `Aₙ(z) = ρ⁻¹ [[z, −ᾱ], [−zα, 1]]`.
pub fn transfer_matrix(alpha: Complex64, z: Complex64) -> Result<TransferMatrix2> {
    let r = rho(alpha, 0)?;
    Ok(TransferMatrix2::new(
        z / r,
        -alpha.conj() / r,
        -z * alpha / r,
        Complex64::new(1.0 / r, 0.0),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn free_case() {
        let z = Complex64::from_polar(1.0, 0.7);
        let seq = CoefficientSequence::constant(c(0.0, 0.0)).unwrap();
        let st = evaluate(&seq, z, 9).unwrap();
        assert!((st.phi().to_complex() - z.powi(9)).norm() < 1e-13);
        assert!((st.phi_star().to_complex() - c(1.0, 0.0)).norm() < 1e-13);
        assert!((st.kernel().re() - 10.0).abs() < 1e-12);

        let st = evaluate(&seq, c(1.0, 0.0), 5).unwrap();
        assert_eq!(st.phi().to_complex(), c(1.0, 0.0));
        assert_eq!(st.phi_star().to_complex(), c(1.0, 0.0));
        assert_eq!(st.kernel().re(), 6.0);
    }

    #[test]
    fn constant_at_one_is_closed_product() {
        let seq = CoefficientSequence::constant(c(-0.5, 0.0)).unwrap();
        for n in [1, 10, 37] {
            let st = evaluate(&seq, c(1.0, 0.0), n).unwrap();
            let expect = 0.5 * n as f64 * 3f64.ln();
            assert!((st.log_abs_phi() - expect).abs() < 1e-12 * n as f64);
        }
        let st = evaluate(&seq, c(1.0, 0.0), 10).unwrap();
        assert!((st.phi().re() - 243.0).abs() < 1e-10);
    }

    #[test]
    fn circle_invariants() {
        let seq = CoefficientSequence::constant(c(-0.5, 0.2)).unwrap();
        let z = Complex64::from_polar(1.0, 0.4);
        let mut prev_k = 0.0;
        let mut prev_kernel = Scaled::ZERO;
        trajectory(&seq, z, 3000, |st| {
            let m = st.u.norm().max(st.v.norm());
            assert!((0.5..=2.0).contains(&m));
            assert!((st.u.norm() - st.v.norm()).abs() <= 1e-10 * m);
            let k = st.kernel();
            if st.n > 0 {
                assert!((k - prev_kernel).re() > 0.0);
            }
            prev_kernel = k;
            prev_k = st.k_acc();
        })
        .unwrap();
        assert!(prev_k > 0.0);
    }

    #[test]
    fn transfer_matrix_examples() {
        let m = transfer_matrix(c(0.0, 0.0), c(0.0, 1.0)).unwrap();
        assert_eq!(m, TransferMatrix2::diagonal(c(0.0, 1.0), c(1.0, 0.0)));
        let m = transfer_matrix(c(-0.5, 0.0), c(1.0, 0.0)).unwrap();
        let r = 0.75f64.sqrt();
        assert!((m.a - c(1.0 / r, 0.0)).norm() < 1e-15);
        assert!((m.b - c(0.5 / r, 0.0)).norm() < 1e-15);
        assert!((m.trace().norm() - 2.0 / r).abs() < 1e-14);
        assert!(transfer_matrix(c(1.0, 0.0), c(1.0, 0.0)).is_err());
    }

    #[test]
    fn matrix_step_matches_recursion() {
        let seq =
            CoefficientSequence::table(vec![c(0.3, 0.4), c(-0.2, 0.1), c(0.5, -0.5), c(0.0, 0.7)])
                .unwrap();
        for z in [c(0.3, 0.2), c(0.0, 1.0), c(1.5, -0.5)] {
            let mut t = TransferMatrix2::IDENTITY;
            for k in 0..4 {
                let a = seq.alpha(k).unwrap();
                let m = transfer_matrix(a, z).unwrap();
                assert!((m.det() - z).norm() <= 1e-12 * z.norm().max(1.0));
                t = m * t;
            }
            let v = t.apply([c(1.0, 0.0), c(1.0, 0.0)]);
            let st = evaluate(&seq, z, 4).unwrap();
            assert!((v[0] - st.phi().to_complex()).norm() < 1e-12 * v[0].norm().max(1.0));
            assert!((v[1] - st.phi_star().to_complex()).norm() < 1e-12 * v[1].norm().max(1.0));
        }
    }

    #[test]
    fn inadmissible_step_errors() {
        let st = ScaledPolyState::initial(c(1.0, 0.0));
        assert!(matches!(
            szego_step(&st, c(0.6, 0.8)),
            Err(Error::Admissibility { index: 0, .. })
        ));
    }

    #[test]
    fn free_kernel_is_geometric_sum() {
        let seq = CoefficientSequence::constant(c(0.0, 0.0)).unwrap();
        let z = c(0.4, 0.3);
        let zeta = Complex64::from_polar(1.0, 1.1);
        let k = cd_kernel(&seq, z, zeta, 12).unwrap().to_complex();
        let q = zeta.conj() * z;
        let expect = (c(1.0, 0.0) - q.powi(13)) / (c(1.0, 0.0) - q);
        assert!((k - expect).norm() < 1e-13);
    }

    #[test]
    fn diagonal_kernel_is_real() {
        let seq = CoefficientSequence::constant(c(-0.4, 0.3)).unwrap();
        let zeta = Complex64::from_polar(1.0, 0.2);
        let k = cd_kernel(&seq, zeta, zeta, 500).unwrap();
        let st = evaluate(&seq, zeta, 500).unwrap();
        assert!(k.mant.im.abs() < 1e-12 * k.mant.norm());
        let kr = (k / st.kernel()).to_complex();
        assert!((kr - c(1.0, 0.0)).norm() < 1e-10);
    }
}
