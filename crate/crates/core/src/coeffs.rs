//! Verblunsky coefficient sequences.
//!
//! A [`CoefficientSequence`] is a pure function `n ↦ αₙ` in the open unit disk,
//! tagged with the asymptotic class the rest of the crate cares about
//! (constant, bounded variation, periodic, twisted, custom).

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Shape of a decaying perturbation `cₙ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DecayForm {
    /// `cₙ = rⁿ`, `0 < r < 1`.
    Geometric { ratio: f64 },
    /// `cₙ = n^{-q}` for `n ≥ 1`, `c₀ = 0`.
    PowerLaw { exponent: f64 },
    /// `cₙ = 1/n` for `n ≥ 1`, `c₀ = 0`.
    Harmonic,
}

/// A decaying perturbation `amplitude · cₙ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecaySpec {
    pub form: DecayForm,
    pub amplitude: Complex64,
}

impl DecaySpec {
    pub fn geometric(ratio: f64, amplitude: Complex64) -> Self {
        DecaySpec {
            form: DecayForm::Geometric { ratio },
            amplitude,
        }
    }

    pub fn power_law(exponent: f64, amplitude: Complex64) -> Self {
        DecaySpec {
            form: DecayForm::PowerLaw { exponent },
            amplitude,
        }
    }

    pub fn harmonic(amplitude: Complex64) -> Self {
        DecaySpec {
            form: DecayForm::Harmonic,
            amplitude,
        }
    }

    fn validate(&self) -> Result<()> {
        match self.form {
            DecayForm::Geometric { ratio } if !(ratio > 0.0 && ratio < 1.0) => Err(
                Error::InvalidParameter(format!("geometric ratio {ratio} outside (0, 1)")),
            ),
            DecayForm::PowerLaw { exponent } if !(exponent > 0.0 && exponent.is_finite()) => Err(
                Error::InvalidParameter(format!("power-law exponent {exponent} must be positive")),
            ),
            _ if !self.amplitude.norm().is_finite() => Err(Error::InvalidParameter(
                "decay amplitude must be finite".into(),
            )),
            _ => Ok(()),
        }
    }

    /// The real profile `cₙ` (without the amplitude).
    pub fn profile(&self, n: usize) -> f64 {
        match self.form {
            DecayForm::Geometric { ratio } => ratio.powi(n as i32),
            DecayForm::PowerLaw { exponent } if n > 0 => (n as f64).powf(-exponent),
            DecayForm::Harmonic if n > 0 => 1.0 / n as f64,
            _ => 0.0,
        }
    }

    /// `amplitude · cₙ`.
    pub fn value(&self, n: usize) -> Complex64 {
        self.amplitude * self.profile(n)
    }

    /// Largest value of the profile over all `n`.
    fn profile_max(&self) -> f64 {
        1.0
    }

    /// Every profile here is monotone and tends to zero, so every one is of
    /// bounded variation.
    pub fn is_bv(&self) -> bool {
        match self.form {
            DecayForm::Geometric { .. } | DecayForm::Harmonic => true,
            DecayForm::PowerLaw { exponent } => exponent > 0.0,
        }
    }
}

/// Declared asymptotic behavior of a sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AsymptoticClass {
    Constant,
    BoundedVariation,
    Periodic,
    Twisted,
    Custom,
}

/// Descriptor from which a [`CoefficientSequence`] is built.
#[derive(Clone)]
pub enum SequenceSpec {
    /// `αₙ ≡ L`.
    Constant(Complex64),
    /// `αₙ = L + amplitude · cₙ`.
    ConstantPlusDecay { limit: Complex64, decay: DecaySpec },
    /// `αₙ = β_{n mod p}`.
    Periodic(Vec<Complex64>),
    /// `αₙ = β_{n mod p} + amplitude · cₙ`.
    PeriodicPlusDecay {
        betas: Vec<Complex64>,
        decay: DecaySpec,
    },
    /// `αₙ = L · ζ̄ⁿ`, so that `ζⁿ αₙ = L`.
    Twisted { limit: Complex64, zeta: Complex64 },
    /// Finite table; reading past the end is an error.
    Table(Arc<[Complex64]>),
    /// Arbitrary rule, checked for admissibility at evaluation time.
    Function(Arc<dyn Fn(usize) -> Complex64 + Send + Sync>),
}

impl fmt::Debug for SequenceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SequenceSpec::Constant(l) => f.debug_tuple("Constant").field(l).finish(),
            SequenceSpec::ConstantPlusDecay { limit, decay } => f
                .debug_struct("ConstantPlusDecay")
                .field("limit", limit)
                .field("decay", decay)
                .finish(),
            SequenceSpec::Periodic(b) => f.debug_tuple("Periodic").field(b).finish(),
            SequenceSpec::PeriodicPlusDecay { betas, decay } => f
                .debug_struct("PeriodicPlusDecay")
                .field("betas", betas)
                .field("decay", decay)
                .finish(),
            SequenceSpec::Twisted { limit, zeta } => f
                .debug_struct("Twisted")
                .field("limit", limit)
                .field("zeta", zeta)
                .finish(),
            SequenceSpec::Table(t) => write!(f, "Table(len = {})", t.len()),
            SequenceSpec::Function(_) => write!(f, "Function(..)"),
        }
    }
}

/// An admissible Verblunsky coefficient sequence. Cheap to clone and safe to
/// share across threads.
#[derive(Debug, Clone)]
pub struct CoefficientSequence {
    spec: SequenceSpec,
    /// `arg ζ` for twisted sequences.
    twist_angle: f64,
}

fn check_disk(index: usize, a: Complex64) -> Result<()> {
    let m = a.norm();
    if m < 1.0 && m.is_finite() {
        Ok(())
    } else {
        Err(Error::Admissibility { index, modulus: m })
    }
}

/// Checks `β + t·amplitude` stays in the disk for every `t ∈ [0, t_max]`.
/// The disk is convex, so the two endpoints decide it.
fn check_segment(index: usize, base: Complex64, decay: &DecaySpec) -> Result<()> {
    check_disk(index, base)?;
    check_disk(index, base + decay.amplitude * decay.profile_max())
}

/// Builds a sequence, validating the parameters against the disk.
pub fn make_sequence(spec: SequenceSpec) -> Result<CoefficientSequence> {
    CoefficientSequence::new(spec)
}

impl CoefficientSequence {
    pub fn new(spec: SequenceSpec) -> Result<Self> {
        let mut twist_angle = 0.0;
        match &spec {
            SequenceSpec::Constant(l) => check_disk(0, *l)?,
            SequenceSpec::ConstantPlusDecay { limit, decay } => {
                decay.validate()?;
                check_segment(0, *limit, decay)?;
            }
            SequenceSpec::Periodic(betas) => {
                if betas.is_empty() {
                    return Err(Error::InvalidParameter("empty period".into()));
                }
                for (j, b) in betas.iter().enumerate() {
                    check_disk(j, *b)?;
                }
            }
            SequenceSpec::PeriodicPlusDecay { betas, decay } => {
                if betas.is_empty() {
                    return Err(Error::InvalidParameter("empty period".into()));
                }
                decay.validate()?;
                for (j, b) in betas.iter().enumerate() {
                    check_segment(j, *b, decay)?;
                }
            }
            SequenceSpec::Twisted { limit, zeta } => {
                check_disk(0, *limit)?;
                if (zeta.norm() - 1.0).abs() > 1e-12 {
                    return Err(Error::InvalidParameter(format!(
                        "twist {zeta} is not on the unit circle"
                    )));
                }
                twist_angle = zeta.arg();
            }
            SequenceSpec::Table(t) => {
                for (j, a) in t.iter().enumerate() {
                    check_disk(j, *a)?;
                }
            }
            SequenceSpec::Function(_) => {}
        }
        Ok(CoefficientSequence { spec, twist_angle })
    }

    pub fn constant(limit: Complex64) -> Result<Self> {
        Self::new(SequenceSpec::Constant(limit))
    }

    pub fn constant_plus_decay(limit: Complex64, decay: DecaySpec) -> Result<Self> {
        Self::new(SequenceSpec::ConstantPlusDecay { limit, decay })
    }

    pub fn periodic(betas: Vec<Complex64>) -> Result<Self> {
        Self::new(SequenceSpec::Periodic(betas))
    }

    pub fn periodic_plus_decay(betas: Vec<Complex64>, decay: DecaySpec) -> Result<Self> {
        Self::new(SequenceSpec::PeriodicPlusDecay { betas, decay })
    }

    pub fn twisted(limit: Complex64, zeta: Complex64) -> Result<Self> {
        Self::new(SequenceSpec::Twisted { limit, zeta })
    }

    pub fn table(values: Vec<Complex64>) -> Result<Self> {
        Self::new(SequenceSpec::Table(values.into()))
    }

    pub fn function(f: impl Fn(usize) -> Complex64 + Send + Sync + 'static) -> Self {
        CoefficientSequence {
            spec: SequenceSpec::Function(Arc::new(f)),
            twist_angle: 0.0,
        }
    }

    pub fn spec(&self) -> &SequenceSpec {
        &self.spec
    }

    /// `αₙ`.
    pub fn alpha(&self, n: usize) -> Result<Complex64> {
        match &self.spec {
            SequenceSpec::Constant(l) => Ok(*l),
            SequenceSpec::ConstantPlusDecay { limit, decay } => Ok(*limit + decay.value(n)),
            SequenceSpec::Periodic(b) => Ok(b[n % b.len()]),
            SequenceSpec::PeriodicPlusDecay { betas, decay } => {
                Ok(betas[n % betas.len()] + decay.value(n))
            }
            SequenceSpec::Twisted { limit, .. } => Ok(*limit * self.twist_conj_power(n)),
            SequenceSpec::Table(t) => t.get(n).copied().ok_or(Error::TableExhausted {
                index: n,
                len: t.len(),
            }),
            SequenceSpec::Function(f) => {
                let a = f(n);
                check_disk(n, a)?;
                Ok(a)
            }
        }
    }

    /// `α₀, …, α_{len-1}`.
    pub fn take(&self, len: usize) -> Result<Vec<Complex64>> {
        (0..len).map(|n| self.alpha(n)).collect()
    }

    /// `ζ̄ⁿ` for a twisted sequence, exact for quarter turns.
    fn twist_conj_power(&self, n: usize) -> Complex64 {
        let SequenceSpec::Twisted { zeta, .. } = &self.spec else {
            return Complex64::new(1.0, 0.0);
        };
        let quarter = [
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(-1.0, 0.0),
            Complex64::new(0.0, -1.0),
        ];
        if let Some(q) = quarter.iter().position(|w| w == zeta) {
            // ζ = iᵠ, so ζ̄ⁿ = i^{-qn}
            let k = (4 - (q * n) % 4) % 4;
            return quarter[k];
        }
        let phase = (-(n as f64) * self.twist_angle).rem_euclid(std::f64::consts::TAU);
        Complex64::from_polar(1.0, phase)
    }

    pub fn class(&self) -> AsymptoticClass {
        match &self.spec {
            SequenceSpec::Constant(_) => AsymptoticClass::Constant,
            SequenceSpec::ConstantPlusDecay { .. } => AsymptoticClass::BoundedVariation,
            SequenceSpec::Periodic(_) | SequenceSpec::PeriodicPlusDecay { .. } => {
                AsymptoticClass::Periodic
            }
            SequenceSpec::Twisted { .. } => AsymptoticClass::Twisted,
            SequenceSpec::Table(_) | SequenceSpec::Function(_) => AsymptoticClass::Custom,
        }
    }

    /// The constant limit `L`, when the sequence declares one.
    pub fn limit(&self) -> Option<Complex64> {
        match &self.spec {
            SequenceSpec::Constant(l) => Some(*l),
            SequenceSpec::ConstantPlusDecay { limit, .. } => Some(*limit),
            SequenceSpec::Periodic(b) | SequenceSpec::PeriodicPlusDecay { betas: b, .. }
                if b.len() == 1 =>
            {
                Some(b[0])
            }
            _ => None,
        }
    }

    /// The periodic background `β₀, …, β_{p-1}`, when the sequence declares one.
    /// Constant sequences report period one.
    pub fn periodic_limit(&self) -> Option<Vec<Complex64>> {
        match &self.spec {
            SequenceSpec::Periodic(b) | SequenceSpec::PeriodicPlusDecay { betas: b, .. } => {
                Some(b.clone())
            }
            SequenceSpec::Constant(l) | SequenceSpec::ConstantPlusDecay { limit: l, .. } => {
                Some(vec![*l])
            }
            _ => None,
        }
    }

    /// Whether the sequence is known analytically to have bounded variation.
    pub fn is_bv(&self) -> bool {
        match &self.spec {
            SequenceSpec::Constant(_) | SequenceSpec::Periodic(_) | SequenceSpec::Table(_) => true,
            SequenceSpec::ConstantPlusDecay { decay, .. } => decay.is_bv(),
            // bounded variation with stride p, not stride 1
            SequenceSpec::PeriodicPlusDecay { betas, decay } => betas.len() == 1 && decay.is_bv(),
            SequenceSpec::Twisted { limit, zeta } => {
                limit.norm() == 0.0 || (*zeta - Complex64::new(1.0, 0.0)).norm() == 0.0
            }
            SequenceSpec::Function(_) => false,
        }
    }
}

/// `∑_{n=0}^{N-1} |α_{n+p} − αₙ|`, the first `N` terms of the stride-`p`
/// variation.
pub fn bv_partial_sum(seq: &CoefficientSequence, stride: usize, terms: usize) -> Result<f64> {
    if stride == 0 || terms == 0 {
        return Err(Error::InvalidParameter(
            "stride and term count must be positive".into(),
        ));
    }
    let mut sum = 0.0;
    for n in 0..terms {
        sum += (seq.alpha(n + stride)? - seq.alpha(n)?).norm();
    }
    Ok(sum)
}
