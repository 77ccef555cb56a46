//! From Jacobi parameters on the real line to sieved Verblunsky coefficients.
//!
//! Scaling the off-diagonal Jacobi parameters by `y/2` and applying the
//! inverse Szegő map gives coefficients `αₙ` fixed by
//! `αₙ = (y/2)² a²ₙ₊₁/(1 − αₙ₋₁) − 1`, `α₋₁ = −1`. Sieving then interleaves
//! zeros: `0, α₀, 0, α₁, …`.

use std::fmt;
use std::sync::Arc;

use crate::asymptotics::{LimitMethod, LimitReport};
use crate::error::{Error, Result};
use num_complex::Complex64;

type RealRule = Arc<dyn Fn(usize) -> f64 + Send + Sync>;

/// Jacobi parameters `aₙ` (off-diagonal), `bₙ` (diagonal) and the scaling `y`.
#[derive(Clone)]
pub struct JacobiSpec {
    off_diagonal: RealRule,
    diagonal: RealRule,
    scale: f64,
}

impl fmt::Debug for JacobiSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("JacobiSpec")
            .field("scale", &self.scale)
            .finish_non_exhaustive()
    }
}

impl JacobiSpec {
    /// Symmetric parameters (`bₙ ≡ 0`) with `aₙ = off_diagonal(n)`, `n ≥ 1`.
    pub fn new(
        off_diagonal: impl Fn(usize) -> f64 + Send + Sync + 'static,
        scale: f64,
    ) -> Result<Self> {
        Self::with_diagonal(off_diagonal, |_| 0.0, scale)
    }

    /// Only `bₙ ≡ 0` is supported; a nonzero diagonal is rejected when read.
    pub fn with_diagonal(
        off_diagonal: impl Fn(usize) -> f64 + Send + Sync + 'static,
        diagonal: impl Fn(usize) -> f64 + Send + Sync + 'static,
        scale: f64,
    ) -> Result<Self> {
        if !(scale > 0.0 && scale <= 2.0) {
            return Err(Error::InvalidParameter(format!(
                "scale {scale} outside (0, 2]"
            )));
        }
        Ok(JacobiSpec {
            off_diagonal: Arc::new(off_diagonal),
            diagonal: Arc::new(diagonal),
            scale,
        })
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn a(&self, n: usize) -> f64 {
        (self.off_diagonal)(n)
    }

    /// `(y/2)²`.
    pub fn coupling(&self) -> f64 {
        let h = 0.5 * self.scale;
        h * h
    }

    /// `a_y = (1 − (y/2)²)^{1/2}`, the modulus of the limiting coefficient.
    pub fn limit_modulus(&self) -> f64 {
        (1.0 - self.coupling()).sqrt()
    }

    /// `2θ_y` with `θ_y = arccos(y/2)`: where the support of the sieved
    /// measure begins.
    pub fn gap_edge(&self) -> f64 {
        2.0 * (0.5 * self.scale).acos()
    }
}

/// `α₀, …, α_{n_max}` by forward recursion.
pub fn sieved_alphas(spec: &JacobiSpec, n_max: usize) -> Result<Vec<f64>> {
    let coupling = spec.coupling();
    let mut prev = -1.0;
    let mut out = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let b = (spec.diagonal)(n + 1);
        if b != 0.0 {
            return Err(Error::InvalidParameter(format!(
                "diagonal parameter b_{} = {b} is not zero",
                n + 1
            )));
        }
        let a = spec.a(n + 1);
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "off-diagonal parameter a_{} = {a} is not positive",
                n + 1
            )));
        }
        let alpha = coupling * a * a / (1.0 - prev) - 1.0;
        if !(alpha.abs() < 1.0) {
            return Err(Error::Admissibility {
                index: n,
                modulus: alpha.abs(),
            });
        }
        out.push(alpha);
        prev = alpha;
    }
    Ok(out)
}

/// `[0, α₀, 0, α₁, …]`.
pub fn interleave_opuc(alphas: &[f64]) -> Vec<f64> {
    alphas.iter().flat_map(|a| [0.0, *a]).collect()
}

/// Largest `|((y/2)aₙ₊₁)² − (1 − α_{2n−1})(1 + α_{2n+1})|` over the sieved
/// sequence, with `α₋₁ = −1`.
pub fn sieving_residual(spec: &JacobiSpec, sieved: &[f64]) -> f64 {
    let coupling = spec.coupling();
    let odd = |k: isize| -> f64 {
        if k < 0 {
            -1.0
        } else {
            sieved[k as usize]
        }
    };
    (0..sieved.len() / 2)
        .map(|n| {
            let a = spec.a(n + 1);
            let lhs = coupling * a * a;
            let rhs = (1.0 - odd(2 * n as isize - 1)) * (1.0 + odd(2 * n as isize + 1));
            (lhs - rhs).abs()
        })
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BvPropagation {
    /// Tail value, last increment and `∑|αₙ₊₁ − αₙ|`.
    pub report: LimitReport,
    /// Largest residual of the increment identity
    /// `αₙ − αₙ₋₁ = c(a²ₙ₊₁ − a²ₙ)/(1−αₙ₋₁) + c a²ₙ(αₙ₋₁ − αₙ₋₂)/((1−αₙ₋₁)(1−αₙ₋₂))`.
    pub max_residual: f64,
}

/// Variation of the sieved coefficients, and the identity expressing their
/// increments through the increments of `a²ₙ`.
pub fn bv_propagation_check(spec: &JacobiSpec, n_max: usize) -> Result<BvPropagation> {
    if n_max < 1 {
        return Err(Error::InvalidParameter("n_max must be at least 1".into()));
    }
    let alphas = sieved_alphas(spec, n_max)?;
    let c = spec.coupling();
    let at = |k: isize| -> f64 {
        if k < 0 {
            -1.0
        } else {
            alphas[k as usize]
        }
    };
    let mut max_residual: f64 = 0.0;
    for n in 1..=n_max {
        let k = n as isize;
        let (a1, a0) = (spec.a(n + 1), spec.a(n));
        let (p1, p2) = (at(k - 1), at(k - 2));
        let rhs = c * (a1 * a1 - a0 * a0) / (1.0 - p1)
            + c * a0 * a0 * (p1 - p2) / ((1.0 - p1) * (1.0 - p2));
        max_residual = max_residual.max(((at(k) - p1) - rhs).abs());
    }
    let bv_partial = alphas.windows(2).map(|w| (w[1] - w[0]).abs()).sum();
    Ok(BvPropagation {
        report: LimitReport {
            estimate: Complex64::new(alphas[n_max], 0.0),
            method: LimitMethod::TailValue,
            err_indicator: (alphas[n_max] - alphas[n_max - 1]).abs(),
            bv_partial,
            n_used: n_max,
            divergence_warning: false,
        },
        max_residual,
    })
}

/// Partial sums `∑_{n=1}^{N} (aₙ − 1)²` at each requested `N` (ascending).
pub fn killip_simon_partial_sums(spec: &JacobiSpec, checkpoints: &[usize]) -> Vec<(usize, f64)> {
    let mut out = Vec::with_capacity(checkpoints.len());
    let mut sum = 0.0;
    let mut n = 0;
    for &target in checkpoints {
        while n < target {
            n += 1;
            let d = spec.a(n) - 1.0;
            sum += d * d;
        }
        out.push((target, sum));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unscaled_constant_drifts_to_zero() {
        let spec = JacobiSpec::new(|_| 1.0, 2.0).unwrap();
        let a = sieved_alphas(&spec, 2000).unwrap();
        assert_eq!(a[0], -0.5);
        assert!(a.iter().all(|x| *x < 0.0 && *x > -1.0));
        assert!(a[2000].abs() < 1e-2);
        assert_eq!(spec.limit_modulus(), 0.0);
    }

    #[test]
    fn half_scale_constant_limit() {
        let spec = JacobiSpec::new(|_| 1.0, 1.0).unwrap();
        let a = sieved_alphas(&spec, 200).unwrap();
        assert!((a[200] + 0.75f64.sqrt()).abs() < 1e-8);
    }

    #[test]
    fn interleaving() {
        assert_eq!(interleave_opuc(&[0.25]), vec![0.0, 0.25]);
        assert_eq!(interleave_opuc(&[1.0, 2.0]), vec![0.0, 1.0, 0.0, 2.0]);
    }

    #[test]
    fn identities_hold() {
        let spec = JacobiSpec::new(|n| 1.0 - (n as f64 + 1.0).powf(-0.6), 1.0).unwrap();
        let a = sieved_alphas(&spec, 1000).unwrap();
        let sieved = interleave_opuc(&a);
        assert!(sieving_residual(&spec, &sieved) < 1e-12);
        let bv = bv_propagation_check(&spec, 1000).unwrap();
        assert!(bv.max_residual < 1e-12);
    }

    #[test]
    fn geometric_approach_has_converged_variation() {
        let spec = JacobiSpec::new(|n| 1.0 - 0.5f64.powi(n as i32), 1.0).unwrap();
        let a = bv_propagation_check(&spec, 100).unwrap().report.bv_partial;
        let b = bv_propagation_check(&spec, 400).unwrap().report.bv_partial;
        assert!((b - a).abs() < 1e-8);
    }

    #[test]
    fn inadmissible_table_is_rejected() {
        let spec = JacobiSpec::new(|_| 2.5, 2.0).unwrap();
        assert!(matches!(
            sieved_alphas(&spec, 10),
            Err(Error::Admissibility { .. })
        ));
        let spec = JacobiSpec::with_diagonal(|_| 1.0, |_| 0.1, 1.0).unwrap();
        assert!(sieved_alphas(&spec, 3).is_err());
        assert!(JacobiSpec::new(|_| 1.0, 0.0).is_err());
    }

    #[test]
    fn larger_scale_means_smaller_limit() {
        let lims: Vec<f64> = [0.5, 1.0, 1.5, 1.9]
            .iter()
            .map(|y| {
                let spec = JacobiSpec::new(|_| 1.0, *y).unwrap();
                sieved_alphas(&spec, 3000).unwrap()[3000].abs()
            })
            .collect();
        assert!(lims.windows(2).all(|w| w[1] < w[0]));
    }
}
