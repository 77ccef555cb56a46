//! Adding a point mass: `dν = (1−γ)dμ + γδ_ω`.
//!
//! Three formulas for `αₙ(dν)` are provided (Geronimus, Simon and the `Δₙ`
//! formula), plus a Levinson recursion on exact moments for the case
//! `dμ = dθ/2π`, which serves as an independent reference.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use num_complex::Complex64;

use crate::coeffs::CoefficientSequence;
use crate::error::{Error, Result};
use crate::scaled::Scaled;
use crate::szego::{cd_kernel, rho, szego_step, ScaledPolyState};

/// Location `ω` and weight `γ` of the added mass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointMassSpec {
    omega: f64,
    gamma: f64,
}

impl PointMassSpec {
    /// `omega` is reduced to `[0, 2π)`; `gamma` must lie in `(0, 1)`.
    pub fn new(omega: f64, gamma: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "weight {gamma} outside (0, 1)"
            )));
        }
        if !omega.is_finite() {
            return Err(Error::InvalidParameter("angle must be finite".into()));
        }
        Ok(PointMassSpec {
            omega: omega.rem_euclid(TAU),
            gamma,
        })
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// `ζ = e^{iω}`, exact at quarter turns.
    pub fn zeta(&self) -> Complex64 {
        match self.omega {
            0.0 => Complex64::new(1.0, 0.0),
            w if w == FRAC_PI_2 => Complex64::new(0.0, 1.0),
            w if w == PI => Complex64::new(-1.0, 0.0),
            w if w == 3.0 * FRAC_PI_2 => Complex64::new(0.0, -1.0),
            w => Complex64::from_polar(1.0, w),
        }
    }

    /// `(1−γ)/γ`.
    pub fn weight_ratio(&self) -> f64 {
        (1.0 - self.gamma) / self.gamma
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PerturbationMethod {
    Geronimus,
    Simon,
    DeltaFormula,
    MomentOracle,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerturbationResult {
    pub n: usize,
    pub alpha_nu: Complex64,
    pub delta_n: Complex64,
    pub method: PerturbationMethod,
}

/// One term of the `Δ` stream.
#[derive(Debug, Clone, Copy)]
pub struct DeltaTerm {
    pub n: usize,
    /// `αₙ(dμ)`.
    pub alpha: Complex64,
    /// `ρₙ`.
    pub rho: f64,
    /// `Δₙ(ζ)`.
    pub delta: Complex64,
    /// `conj(φₙ₊₁(ζ)) φₙ*(ζ)`.
    pub numer: Scaled,
    /// `(1−γ)/γ + Kₙ(ζ,ζ)`.
    pub denom: Scaled,
    /// Polynomial state at `n` (before the step).
    pub state: ScaledPolyState,
}

/// Produces `Δ₀, Δ₁, …` with one recursion step each.
pub struct DeltaStream<'a> {
    seq: &'a CoefficientSequence,
    ratio: f64,
    state: ScaledPolyState,
}

impl<'a> DeltaStream<'a> {
    pub fn new(seq: &'a CoefficientSequence, spec: &PointMassSpec) -> Self {
        DeltaStream {
            seq,
            ratio: spec.weight_ratio(),
            state: ScaledPolyState::initial(spec.zeta()),
        }
    }

    pub fn state(&self) -> &ScaledPolyState {
        &self.state
    }

    pub fn next_term(&mut self) -> Result<DeltaTerm> {
        let n = self.state.n;
        let alpha = self.seq.alpha(n)?;
        let r = rho(alpha, n)?;
        let next = szego_step(&self.state, alpha)?;
        let numer = next.phi().conj() * self.state.phi_star();
        let denom = self.state.kernel().add_real(self.ratio);
        let delta = (numer / denom).to_complex() * r;
        let term = DeltaTerm {
            n,
            alpha,
            rho: r,
            delta,
            numer,
            denom,
            state: self.state,
        };
        self.state = next;
        Ok(term)
    }
}

/// `Δₙ(ζ) = ρₙ conj(φₙ₊₁(ζ)) φₙ*(ζ) / ((1−γ)/γ + Kₙ(ζ,ζ))`.
pub fn delta_n(seq: &CoefficientSequence, spec: &PointMassSpec, n: usize) -> Result<Complex64> {
    let mut stream = DeltaStream::new(seq, spec);
    loop {
        let t = stream.next_term()?;
        if t.n == n {
            return Ok(t.delta);
        }
    }
}

/// `αₙ₋₁(dν)` from the monic polynomial of `dν` at `z = 0`:
/// `Φₙ(0,dν) = Φₙ(0) − Φₙ(ζ) Kₙ₋₁(0,ζ) / ((1−γ)/γ + Kₙ₋₁(ζ,ζ))`
/// with `Φₙ(0) = −conj(αₙ₋₁)`.
pub fn geronimus_alpha(
    seq: &CoefficientSequence,
    spec: &PointMassSpec,
    n: usize,
) -> Result<Complex64> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "geronimus_alpha needs n >= 1".into(),
        ));
    }
    let zeta = spec.zeta();
    let mut state = ScaledPolyState::initial(zeta);
    for k in 0..n - 1 {
        state = szego_step(&state, seq.alpha(k)?)?;
    }
    let alpha_prev = seq.alpha(n - 1)?;
    let denom = state.kernel().add_real(spec.weight_ratio());
    let monic_at_zeta = szego_step(&state, alpha_prev)?.monic();
    let kernel_origin = cd_kernel(seq, Complex64::new(0.0, 0.0), zeta, n - 1)?;
    let correction = (monic_at_zeta * kernel_origin / denom).to_complex();
    let monic_at_origin = -alpha_prev.conj() - correction;
    Ok(-monic_at_origin.conj())
}

/// `αₙ(dν) = αₙ − qₙ⁻¹ γ conj(φₙ₊₁(ζ)) ∑_{j≤n} α_{j−1} (‖Φₙ₊₁‖/‖Φⱼ‖) φⱼ(ζ)`
/// with `qₙ = (1−γ) + γKₙ(ζ,ζ)` and `α₋₁ = −1`.
pub fn simon_alpha(seq: &CoefficientSequence, spec: &PointMassSpec, n: usize) -> Result<Complex64> {
    let gamma = spec.gamma();
    let mut state = ScaledPolyState::initial(spec.zeta());
    let mut visited = Vec::with_capacity(n + 1);
    let mut prev_alpha = Complex64::new(-1.0, 0.0);
    for k in 0..=n {
        visited.push((prev_alpha, state.phi(), state.lognorm));
        let a = seq.alpha(k)?;
        if k == n {
            break;
        }
        state = szego_step(&state, a)?;
        prev_alpha = a;
    }
    let alpha_n = seq.alpha(n)?;
    let next = szego_step(&state, alpha_n)?;
    let top = next.lognorm;
    let sum = visited.iter().fold(Scaled::ZERO, |acc, (a, phi, lognorm)| {
        acc + *phi * Scaled::exp_real(top - lognorm) * *a
    });
    let q = state.kernel().scale_real(gamma).add_real(1.0 - gamma);
    let correction = (next.phi().conj() * sum / q).to_complex() * gamma;
    Ok(alpha_n - correction)
}

/// The coefficients `αₙ(dν) = αₙ + Δₙ` for `n < len`, as a table.
pub fn perturbed_sequence(
    seq: &CoefficientSequence,
    spec: &PointMassSpec,
    len: usize,
) -> Result<CoefficientSequence> {
    let mut stream = DeltaStream::new(seq, spec);
    let mut table = Vec::with_capacity(len);
    for _ in 0..len {
        let t = stream.next_term()?;
        table.push(t.alpha + t.delta);
    }
    CoefficientSequence::table(table)
}

/// Bundles one of the three formulas into a [`PerturbationResult`].
pub fn perturb(
    seq: &CoefficientSequence,
    spec: &PointMassSpec,
    n: usize,
    method: PerturbationMethod,
) -> Result<PerturbationResult> {
    let base = seq.alpha(n)?;
    let alpha_nu = match method {
        PerturbationMethod::Geronimus => geronimus_alpha(seq, spec, n + 1)?,
        PerturbationMethod::Simon => simon_alpha(seq, spec, n)?,
        PerturbationMethod::DeltaFormula => base + delta_n(seq, spec, n)?,
        PerturbationMethod::MomentOracle => {
            if !matches!(seq.limit(), Some(l) if l == Complex64::new(0.0, 0.0))
                || seq.class() != crate::coeffs::AsymptoticClass::Constant
            {
                return Err(Error::InvalidParameter(
                    "moment oracle needs the free base sequence".into(),
                ));
            }
            moment_oracle_alpha(MomentBase::Free, spec, n)?[n]
        }
    };
    Ok(PerturbationResult {
        n,
        alpha_nu,
        delta_n: alpha_nu - base,
        method,
    })
}

/// Base measures with closed-form moments.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MomentBase {
    /// `dθ/2π`, all `αₙ = 0`.
    Free,
}

const BREAKDOWN_MARGIN: f64 = 1e-12;

/// `α₀(dν), …, αₙ(dν)` by the Levinson recursion on the moments
/// `∫ zᵏ dν = (1−γ)[k=0] + γ e^{ikω}`.
pub fn moment_oracle_alpha(
    base: MomentBase,
    spec: &PointMassSpec,
    n: usize,
) -> Result<Vec<Complex64>> {
    let MomentBase::Free = base;
    let gamma = spec.gamma();
    let omega = spec.omega();
    let moment = |k: usize| -> Complex64 {
        if k == 0 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::from_polar(gamma, k as f64 * omega)
        }
    };
    // coefficients of the monic Φₖ, lowest degree first
    let mut poly = vec![Complex64::new(1.0, 0.0)];
    let mut norm2 = 1.0;
    let mut out = Vec::with_capacity(n + 1);
    for step in 0..=n {
        let pairing: Complex64 = poly
            .iter()
            .enumerate()
            .map(|(i, p)| p * moment(i + 1))
            .sum();
        let alpha_conj = pairing / norm2;
        let alpha = alpha_conj.conj();
        let m = alpha.norm();
        if m >= 1.0 - BREAKDOWN_MARGIN {
            return Err(Error::NumericalBreakdown { step, modulus: m });
        }
        out.push(alpha);
        let k = poly.len() - 1;
        let mut next = vec![Complex64::new(0.0, 0.0); k + 2];
        for (i, slot) in next.iter_mut().enumerate() {
            let shifted = if i > 0 {
                poly[i - 1]
            } else {
                Complex64::new(0.0, 0.0)
            };
            let reversed = if i <= k {
                poly[k - i].conj()
            } else {
                Complex64::new(0.0, 0.0)
            };
            *slot = shifted - alpha_conj * reversed;
        }
        poly = next;
        norm2 *= (1.0 - m) * (1.0 + m);
    }
    Ok(out)
}
