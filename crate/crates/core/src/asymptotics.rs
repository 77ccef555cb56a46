//! Drivers for the large-`n` behavior of `Δₙ(ζ)`.
//!
//! Eigen-tracking of slowly varying transfer matrices, Cesàro–Stolz limit
//! extraction from `Γₙ = conj(φₙ₊₁)φₙ*` and `Θₙ = (1−γ)/γ + Kₙ`,
//! bounded-variation diagnostics, and the twisted, decaying-perturbation and
//! periodic drivers.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::coeffs::{CoefficientSequence, DecaySpec};
use crate::error::{Error, Result};
use crate::matrix::TransferMatrix2;
use crate::pointmass::{DeltaStream, DeltaTerm, PointMassSpec};
use crate::scaled::Scaled;
use crate::spectral::{eigen_pair, period_matrix};
use crate::szego::{evaluate, rho, transfer_matrix, ScaledPolyState};

const HYPERBOLIC_MARGIN: f64 = 1e-6;
const HYPERBOLIC_RUN: usize = 10;
const DEGENERATE_WEIGHT: f64 = 1e-14;

/// `ζⁿ` for unit `ζ`, exact at quarter turns.
pub fn unit_power(zeta: Complex64, n: usize) -> Complex64 {
    let quarter = [
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 1.0),
        Complex64::new(-1.0, 0.0),
        Complex64::new(0.0, -1.0),
    ];
    if let Some(q) = quarter.iter().position(|w| *w == zeta) {
        return quarter[(q * n) % 4];
    }
    Complex64::from_polar(1.0, (n as f64 * zeta.arg()).rem_euclid(TAU))
}

// ---------------------------------------------------------------------------
// Eigen-tracking

/// Diagonalized dynamics of `(φₙ₊₁, φₙ₊₁*)` from index `n_start` on.
///
/// With `Aₖ = Gₖ Dₖ Gₖ⁻¹`, `w = G_N⁻¹(φ_{N+1}, φ*_{N+1})` and
/// `Pₙ = ∏_{k=N+1}^{n} λ₁,ₖ`, the state satisfies
/// `(φₙ₊₁, φₙ₊₁*) = Gₙ Pₙ (f₁w₁, f₂w₂)`.
#[derive(Debug, Clone, Copy)]
pub struct KoomanTrack {
    pub n: usize,
    pub n_start: usize,
    /// Eigenvector matrix `Gₙ`.
    pub g: TransferMatrix2,
    /// `(λ₁,ₙ, λ₂,ₙ)`, matched to the columns of `g`.
    pub lambdas: (Complex64, Complex64),
    /// `log Pₙ`: real part `log|Pₙ|`, imaginary part the phase in `[0, 2π)`.
    pub log_p: Complex64,
    pub f1: Complex64,
    pub f2: Complex64,
    /// Mantissa of `w`; the true vector is `w · 2^w_exp2`.
    pub w: [Complex64; 2],
    pub w_exp2: i64,
    /// `(f₁w₁, f₂w₂)`, kept separately so a vanishing `wᵢ` loses nothing.
    pub coords: [Complex64; 2],
    /// Largest `‖GDG⁻¹ − A‖/‖A‖` seen along the track.
    pub max_diagonalization_residual: f64,
    /// Largest `||λ₁λ₂| − 1|` seen along the track.
    pub max_unimodularity_defect: f64,
}

impl KoomanTrack {
    /// `f₂/f₁`.
    pub fn ratio(&self) -> Complex64 {
        self.f2 / self.f1
    }

    /// `Gₙ Pₙ (f₁w₁, f₂w₂)`, which should equal `(φₙ₊₁, φₙ₊₁*)`.
    pub fn reconstruct(&self) -> [Scaled; 2] {
        let p = Scaled::exp_real(self.log_p.re) * Complex64::from_polar(1.0, self.log_p.im);
        let p = Scaled {
            mant: p.mant,
            exp2: p.exp2 + self.w_exp2,
        };
        let v = self.g.apply(self.coords);
        [p * v[0], p * v[1]]
    }
}

fn hyperbolic_diagonalization(
    seq: &CoefficientSequence,
    zeta: Complex64,
    k: usize,
) -> Result<(TransferMatrix2, crate::spectral::EigenPair)> {
    let a = transfer_matrix(seq.alpha(k)?, zeta).map_err(|e| match e {
        Error::Admissibility { modulus, .. } => Error::Admissibility { index: k, modulus },
        other => other,
    })?;
    let trace_abs = a.trace().norm();
    if !(trace_abs > 2.0) {
        return Err(Error::Hyperbolicity {
            index: k,
            trace_abs,
        });
    }
    let e = eigen_pair(&a).map_err(|_| Error::Hyperbolicity {
        index: k,
        trace_abs,
    })?;
    Ok((a, e))
}

/// First index `N` with `|Tr A_k(ζ)| > 2 + 10⁻⁶` for `k = N, …, N+9`.
pub fn hyperbolic_start(seq: &CoefficientSequence, zeta: Complex64, limit: usize) -> Result<usize> {
    let mut run = 0;
    let mut last = 0.0;
    for k in 0..limit {
        last = transfer_matrix(seq.alpha(k)?, zeta)?.trace().norm();
        if last > 2.0 + HYPERBOLIC_MARGIN {
            run += 1;
            if run == HYPERBOLIC_RUN {
                return Ok(k + 1 - HYPERBOLIC_RUN);
            }
        } else {
            run = 0;
        }
    }
    Err(Error::Hyperbolicity {
        index: limit,
        trace_abs: last,
    })
}

fn cosine(u: [Complex64; 2], v: [Complex64; 2]) -> f64 {
    let dot = u[0].conj() * v[0] + u[1].conj() * v[1];
    let nu = (u[0].norm_sqr() + u[1].norm_sqr()).sqrt();
    let nv = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
    dot.norm() / (nu * nv)
}

fn weighted(y: Complex64, w: Complex64, w_size: f64) -> Complex64 {
    if w.norm() > DEGENERATE_WEIGHT * w_size {
        y / w
    } else {
        y / w_size
    }
}

/// Tracks the diagonalized recursion from `n_start` to `n`.
pub fn kooman_track(
    seq: &CoefficientSequence,
    zeta: Complex64,
    n_start: usize,
    n: usize,
) -> Result<KoomanTrack> {
    if n < n_start {
        return Err(Error::InvalidParameter(format!(
            "track end {n} precedes start {n_start}"
        )));
    }
    let state = evaluate(seq, zeta, n_start + 1)?;
    let (a, e) = hyperbolic_diagonalization(seq, zeta, n_start)?;
    let mut g = e.vectors();
    let mut lambdas = (e.lambda1, e.lambda2);
    let residual = |a: &TransferMatrix2, g: &TransferMatrix2, l: (Complex64, Complex64)| {
        (*g * TransferMatrix2::diagonal(l.0, l.1) * g.inverse()).distance(a) / a.norm()
    };
    let mut max_res = residual(&a, &g, lambdas);
    let mut max_defect = ((lambdas.0 * lambdas.1).norm() - 1.0).abs();

    let w_exp2 = state.exp2.max(state.exp2_star);
    let start = [
        crate::scaled::ldexp_c(state.u, state.exp2 - w_exp2),
        crate::scaled::ldexp_c(state.v, state.exp2_star - w_exp2),
    ];
    let w = g.inverse().apply(start);
    let w_size = (w[0].norm_sqr() + w[1].norm_sqr()).sqrt();
    let mut y = w;
    let mut log_p = Complex64::new(0.0, 0.0);

    for k in n_start + 1..=n {
        let (a, e) = hyperbolic_diagonalization(seq, zeta, k)?;
        let (mut v1, mut v2, mut l1, mut l2) = (e.eigvec1, e.eigvec2, e.lambda1, e.lambda2);
        let prev1 = g.column(0);
        if cosine(prev1, v2) > cosine(prev1, v1) {
            std::mem::swap(&mut v1, &mut v2);
            std::mem::swap(&mut l1, &mut l2);
        }
        let g_next = TransferMatrix2::from_columns(v1, v2);
        let step =
            TransferMatrix2::diagonal(Complex64::new(1.0, 0.0), l2 / l1) * g_next.inverse() * g;
        y = step.apply(y);
        log_p += Complex64::new(l1.norm().ln(), l1.arg());
        log_p.im = log_p.im.rem_euclid(TAU);
        g = g_next;
        lambdas = (l1, l2);
        max_res = max_res.max(residual(&a, &g, lambdas));
        max_defect = max_defect.max(((l1 * l2).norm() - 1.0).abs());
    }

    Ok(KoomanTrack {
        n,
        n_start,
        g,
        lambdas,
        log_p,
        f1: weighted(y[0], w[0], w_size),
        f2: weighted(y[1], w[1], w_size),
        w,
        w_exp2,
        coords: y,
        max_diagonalization_residual: max_res,
        max_unimodularity_defect: max_defect,
    })
}

// ---------------------------------------------------------------------------
// Limit extraction

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimitMethod {
    TailValue,
    CesaroStolz,
}

/// Estimated limit of a sequence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitReport {
    pub estimate: Complex64,
    pub method: LimitMethod,
    /// Spread of the estimator over its window (nonnegative).
    pub err_indicator: f64,
    /// `∑ |x_{n+p} − xₙ|` of the sequence the estimate was taken from.
    pub bv_partial: f64,
    pub n_used: usize,
    /// Set when the denominator of a Cesàro–Stolz run looks bounded.
    pub divergence_warning: bool,
}

/// Averages `(Γₙ − Γₙ₋₁)/(Θₙ − Θₙ₋₁)` over `n ∈ [horizon/10, horizon]`.
pub fn cesaro_stolz_limit(
    numer: &[Scaled],
    denom: &[Scaled],
    horizon: usize,
) -> Result<LimitReport> {
    if horizon < 2 || numer.len() <= horizon || denom.len() <= horizon {
        return Err(Error::InvalidParameter(format!(
            "horizon {horizon} needs {} terms of each sequence",
            horizon + 1
        )));
    }
    let mut quotients = Vec::with_capacity(horizon);
    for n in 1..=horizon {
        let step = denom[n] - denom[n - 1];
        if step.is_zero() || !(step.mant.re > 0.0) {
            return Err(Error::Monotonicity { index: n });
        }
        quotients.push(((numer[n] - numer[n - 1]) / step).to_complex());
    }
    let window = &quotients[(horizon / 10).max(1) - 1..];
    let estimate = window.iter().sum::<Complex64>() / window.len() as f64;
    let spread = window
        .iter()
        .map(|q| (q - estimate).norm())
        .fold(0.0, f64::max);
    let bv_partial = quotients.windows(2).map(|w| (w[1] - w[0]).norm()).sum();

    let growth = |top: &Scaled, bottom: &Scaled| {
        if bottom.mant.re > 0.0 {
            (*top / *bottom).re()
        } else {
            f64::INFINITY
        }
    };
    let bounded = growth(&denom[horizon], &denom[0]) <= 1e6
        || growth(&denom[horizon], &denom[horizon / 2]) < 1.0 + 1e-8;

    Ok(LimitReport {
        estimate,
        method: LimitMethod::CesaroStolz,
        err_indicator: spread,
        bv_partial,
        n_used: horizon,
        divergence_warning: bounded,
    })
}

/// `Δ₀, …, Δ_{n_max}` in one pass of the recursion.
pub fn delta_sequence(
    seq: &CoefficientSequence,
    spec: &PointMassSpec,
    n_max: usize,
) -> Result<Vec<Complex64>> {
    Ok(delta_terms(seq, spec, n_max)?
        .iter()
        .map(|t| t.delta)
        .collect())
}

/// Full per-index data behind [`delta_sequence`].
pub fn delta_terms(
    seq: &CoefficientSequence,
    spec: &PointMassSpec,
    n_max: usize,
) -> Result<Vec<DeltaTerm>> {
    let mut stream = DeltaStream::new(seq, spec);
    (0..=n_max).map(|_| stream.next_term()).collect()
}

/// Cesàro–Stolz estimate of `lim Δₙ`, run on `ρₙΓₙ` over `Θₙ`.
pub fn delta_limit(
    seq: &CoefficientSequence,
    spec: &PointMassSpec,
    horizon: usize,
) -> Result<LimitReport> {
    let terms = delta_terms(seq, spec, horizon)?;
    let numer: Vec<Scaled> = terms.iter().map(|t| t.numer.scale_real(t.rho)).collect();
    let denom: Vec<Scaled> = terms.iter().map(|t| t.denom).collect();
    cesaro_stolz_limit(&numer, &denom, horizon)
}

/// Last value, last increment and stride-`p` variation of `x`.
pub fn bv_report(x: &[Complex64], stride: usize) -> Result<LimitReport> {
    if stride == 0 || x.len() < 2 * stride {
        return Err(Error::InvalidParameter(format!(
            "{} values cannot carry stride {stride}",
            x.len()
        )));
    }
    let n = x.len() - 1;
    Ok(LimitReport {
        estimate: x[n],
        method: LimitMethod::TailValue,
        err_indicator: (x[n] - x[n - stride]).norm(),
        bv_partial: x[stride..].iter().zip(x).map(|(a, b)| (a - b).norm()).sum(),
        n_used: n,
        divergence_warning: false,
    })
}

// ---------------------------------------------------------------------------
// Twisted coefficients

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwistedReport {
    /// Cesàro–Stolz estimate of `lim ζⁿΔₙ` from `ρₙζⁿΓₙ` over `Θₙ`.
    pub cesaro_stolz: LimitReport,
    /// Direct tail of `ζⁿΔₙ`.
    pub tail: LimitReport,
}

/// `lim ζⁿΔₙ(ζ)` for `αₙ = L ζ̄ⁿ` with the mass placed at `ζ`.
pub fn twisted_limit_check(
    l: Complex64,
    zeta: Complex64,
    spec: &PointMassSpec,
    n_max: usize,
) -> Result<TwistedReport> {
    if (spec.zeta() - zeta).norm() > 1e-12 {
        return Err(Error::InvalidParameter(
            "point mass must sit at the twist point".into(),
        ));
    }
    let seq = CoefficientSequence::twisted(l, zeta)?;
    let terms = delta_terms(&seq, spec, n_max)?;
    let numer: Vec<Scaled> = terms
        .iter()
        .map(|t| t.numer.scale_real(t.rho) * unit_power(zeta, t.n))
        .collect();
    let denom: Vec<Scaled> = terms.iter().map(|t| t.denom).collect();
    let twisted: Vec<Complex64> = terms
        .iter()
        .map(|t| t.delta * unit_power(zeta, t.n))
        .collect();
    Ok(TwistedReport {
        cesaro_stolz: cesaro_stolz_limit(&numer, &denom, n_max)?,
        tail: bv_report(&twisted, 1)?,
    })
}

/// Both sides of
/// `ζⁿ⁻¹(ρₙφ*ₙ₊₁ − ρₙ₋₁φ*ₙ₋₁)/φₙ = −(ζⁿαₙ + ζⁿ⁻¹αₙ₋₁)` at `z = ζ`.
pub fn twisted_quotient_identity(
    seq: &CoefficientSequence,
    zeta: Complex64,
    n: usize,
) -> Result<(Complex64, Complex64)> {
    if n == 0 {
        return Err(Error::InvalidParameter("identity needs n >= 1".into()));
    }
    let before = evaluate(seq, zeta, n - 1)?;
    let prev_alpha = seq.alpha(n - 1)?;
    let at = crate::szego::szego_step(&before, prev_alpha)?;
    let alpha = seq.alpha(n)?;
    let after = crate::szego::szego_step(&at, alpha)?;
    let diff = after.phi_star().scale_real(rho(alpha, n)?)
        - before.phi_star().scale_real(rho(prev_alpha, n - 1)?);
    let lhs = (diff / at.phi()).to_complex() * unit_power(zeta, n - 1);
    let rhs = -(unit_power(zeta, n) * alpha + unit_power(zeta, n - 1) * prev_alpha);
    Ok((lhs, rhs))
}

// ---------------------------------------------------------------------------
// Decaying perturbation of a negative constant at ζ = 1

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Corollary1Checkpoint {
    pub n: usize,
    /// `Δₙ(1)`.
    pub delta: f64,
    /// `(Δₙ(1) + 2L)/cₙ`.
    pub ratio: f64,
    /// `Kₙ₋₁(1,1)/φₙ(1)²`.
    pub auxiliary: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Corollary1Report {
    /// Tail of `(Δₙ(1) + 2L)/cₙ`.
    pub ratio: LimitReport,
    /// `Kₙ₋₁(1,1)/φₙ(1)²` at `n_max`.
    pub auxiliary: f64,
    pub checkpoints: Vec<Corollary1Checkpoint>,
}

/// `(Δₙ(1) + 2L)/cₙ` for `αₙ = L + cₙ`, `L < 0`, mass at `ζ = 1`.
///
/// At `ζ = 1` with real coefficients, `φₙ(1) = φₙ*(1)` is real and
/// `Δₙ = (1 − αₙ)/(Sₙ + ((1−γ)/γ)/φₙ²)` with `Sₙ = Kₙ/φₙ²`. Writing
/// `Sₙ = S* + eₙ`, `S* = (1−L)/(−2L)`, the offset `Δₙ + 2L` is assembled from
/// `cₙ`, `eₙ` and `1/φₙ²` directly, so no digits are lost to cancellation
/// even when `cₙ` is far below machine precision relative to `L`.
pub fn corollary1_rate(
    l: f64,
    decay: DecaySpec,
    spec: &PointMassSpec,
    n_max: usize,
    checkpoints: &[usize],
) -> Result<Corollary1Report> {
    if !(l < 0.0 && l > -1.0) {
        return Err(Error::InvalidParameter(format!(
            "limit {l} must lie in (-1, 0)"
        )));
    }
    if decay.amplitude.im != 0.0 {
        return Err(Error::InvalidParameter(
            "decay amplitude must be real".into(),
        ));
    }
    if spec.omega() != 0.0 {
        return Err(Error::InvalidParameter("mass must sit at zeta = 1".into()));
    }
    if n_max < 2 {
        return Err(Error::InvalidParameter("n_max must be at least 2".into()));
    }
    let seq = CoefficientSequence::constant_plus_decay(Complex64::new(l, 0.0), decay)?;
    let weight = spec.weight_ratio();
    let fixed = (1.0 - l) / (-2.0 * l);

    let mut kernel_ratio = 1.0; // Sₙ
    let mut offset = 1.0 - fixed; // eₙ
    let mut log_phi2: f64 = 0.0; // log φₙ(1)²
    let mut ratios = Vec::with_capacity(n_max + 1);
    let mut marks = Vec::new();
    let mut auxiliary = f64::NAN;

    for n in 0..=n_max {
        let alpha = seq.alpha(n)?.re;
        // taken from the profile: αₙ − L rounds to zero once cₙ ≪ ε|L|
        let cn = decay.value(n).re;
        let tail = weight * (-log_phi2).exp();
        let shifted = (-cn + 2.0 * l * offset + 2.0 * l * tail) / (kernel_ratio + tail);
        let ratio = if cn != 0.0 { shifted / cn } else { f64::NAN };
        ratios.push(Complex64::new(ratio, 0.0));
        if n == n_max {
            auxiliary = kernel_ratio - 1.0;
        }
        if checkpoints.contains(&n) {
            marks.push(Corollary1Checkpoint {
                n,
                delta: shifted - 2.0 * l,
                ratio,
                auxiliary: kernel_ratio - 1.0,
            });
        }
        let growth = (1.0 + alpha) / (1.0 - alpha);
        offset = growth * offset + 2.0 * fixed * cn / ((1.0 - alpha) * (1.0 - l));
        kernel_ratio = 1.0 + kernel_ratio * growth;
        log_phi2 += (-alpha).ln_1p() - alpha.ln_1p();
    }

    let first_defined = ratios.iter().position(|r| r.re.is_finite()).unwrap_or(0);
    let mut ratio = bv_report(&ratios[first_defined..], 1)?;
    ratio.n_used = n_max;
    Ok(Corollary1Report {
        ratio,
        auxiliary,
        checkpoints: marks,
    })
}

// ---------------------------------------------------------------------------
// Periodic backgrounds

/// `Bₖ(ζ) = A(α_{(k+1)p−1}, ζ) ⋯ A(α_{kp}, ζ)`.
pub fn periodic_block(
    seq: &CoefficientSequence,
    p: usize,
    k: usize,
    zeta: Complex64,
) -> Result<TransferMatrix2> {
    if p == 0 {
        return Err(Error::InvalidParameter("period must be positive".into()));
    }
    let alphas = (k * p..(k + 1) * p)
        .map(|n| seq.alpha(n))
        .collect::<Result<Vec<_>>>()?;
    period_matrix(&alphas, zeta)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicResidueReport {
    /// One report per residue `j = 0, …, p−1`; `err_indicator` is the
    /// horizon-doubling increment `|Δ_{Kp+j} − Δ_{(K/2)p+j}|`.
    pub residues: Vec<LimitReport>,
    /// `ζ` lies inside the bands; estimates are then reported as zero.
    pub in_band: bool,
    /// `|Tr B_∞(ζ)|`.
    pub trace_abs: f64,
    /// Largest `|Δₙ|` over the last tenth of the run.
    pub tail_max: f64,
    /// `∑ |Δ_{n+p} − Δₙ|` over the run.
    pub stride_bv: f64,
}

/// Limits of `Δ_{kp+j}` as `k → ∞`, one per residue `j`.
pub fn periodic_residue_limits(
    seq: &CoefficientSequence,
    p: usize,
    spec: &PointMassSpec,
    k_max: usize,
) -> Result<PeriodicResidueReport> {
    if p == 0 || k_max < 2 {
        return Err(Error::InvalidParameter(
            "period and block horizon must be positive".into(),
        ));
    }
    let background = seq
        .periodic_limit()
        .ok_or_else(|| Error::InvalidParameter("sequence has no periodic background".into()))?;
    if !p.is_multiple_of(background.len()) {
        return Err(Error::InvalidParameter(format!(
            "period {p} is not a multiple of the background period {}",
            background.len()
        )));
    }
    let betas: Vec<Complex64> = (0..p).map(|j| background[j % background.len()]).collect();
    let trace_abs = period_matrix(&betas, spec.zeta())?.trace().norm();
    if (trace_abs - 2.0).abs() <= 1e-12 {
        return Err(Error::OutOfGap {
            theta: spec.omega(),
        });
    }
    let in_band = trace_abs < 2.0;

    let total = (k_max + 1) * p;
    let deltas = delta_sequence(seq, spec, total - 1)?;
    let tail_max = deltas[total - total / 10..]
        .iter()
        .map(|d| d.norm())
        .fold(0.0, f64::max);
    let stride_bv = deltas[p..]
        .iter()
        .zip(&deltas)
        .map(|(a, b)| (a - b).norm())
        .sum();

    let residues = (0..p)
        .map(|j| {
            let xs: Vec<Complex64> = (0..=k_max).map(|k| deltas[k * p + j]).collect();
            let bv_partial = xs.windows(2).map(|w| (w[1] - w[0]).norm()).sum();
            LimitReport {
                estimate: if in_band {
                    Complex64::new(0.0, 0.0)
                } else {
                    xs[k_max]
                },
                method: LimitMethod::TailValue,
                err_indicator: (xs[k_max] - xs[k_max / 2]).norm(),
                bv_partial,
                n_used: k_max * p + j,
                divergence_warning: false,
            }
        })
        .collect();

    Ok(PeriodicResidueReport {
        residues,
        in_band,
        trace_abs,
        tail_max,
        stride_bv,
    })
}

// ---------------------------------------------------------------------------
// Pure-point regime

/// Adds the same mass location twice: first with `spec`, then with weight
/// `second_weight` on top of the already perturbed coefficients. Returns the
/// second-stage `Δ₀, …, Δ_{n_max}`.
pub fn two_stage_same_point(
    base: &CoefficientSequence,
    spec: &PointMassSpec,
    second_weight: f64,
    n_max: usize,
) -> Result<Vec<Complex64>> {
    let first = crate::pointmass::perturbed_sequence(base, spec, n_max + 1)?;
    let second = PointMassSpec::new(spec.omega(), second_weight)?;
    delta_sequence(&first, &second, n_max)
}

/// Least-squares line through `(x, y)` points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

pub fn linear_fit(points: &[(f64, f64)]) -> LinearFit {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = points.iter().map(|p| (p.1 - my).powi(2)).sum();
    let slope = sxy / sxx;
    LinearFit {
        slope,
        intercept: my - slope * mx,
        r_squared: if syy > 0.0 {
            sxy * sxy / (sxx * syy)
        } else {
            1.0
        },
    }
}

/// Fit of `log|xₙ|` against `n` over `range`.
pub fn log_linear_fit(x: &[Complex64], range: std::ops::RangeInclusive<usize>) -> LinearFit {
    let pts: Vec<(f64, f64)> = range.map(|n| (n as f64, x[n].norm().ln())).collect();
    linear_fit(&pts)
}

/// `log|φₙ(ζ)|/n`.
pub fn growth_rate(state: &ScaledPolyState) -> f64 {
    state.log_abs_phi() / state.n as f64
}
