//! Complex numbers with an explicit binary exponent.
//!
//! Orthonormal polynomials evaluated in a spectral gap grow like `|λ₁|ⁿ`, which
//! overflows `f64` after a few hundred steps. [`Scaled`] stores `m · 2^e` with
//! the exponent kept as an integer, so products and quotients of such values
//! are exact in the exponent and only the mantissa sees rounding.

use std::f64::consts::LN_2;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;

/// `mant · 2^exp2`, with `|mant|` normally kept in `[1/2, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scaled {
    pub mant: Complex64,
    pub exp2: i64,
}

/// Multiplies `x` by `2^k` without intermediate overflow.
pub fn ldexp(x: f64, k: i64) -> f64 {
    let mut x = x;
    let mut k = k;
    while k > 1000 {
        x *= 2f64.powi(1000);
        k -= 1000;
        if x.is_infinite() {
            return x;
        }
    }
    while k < -1000 {
        x *= 2f64.powi(-1000);
        k += 1000;
        if x == 0.0 {
            return x;
        }
    }
    libm::ldexp(x, k as i32)
}

pub(crate) fn ldexp_c(z: Complex64, k: i64) -> Complex64 {
    Complex64::new(ldexp(z.re, k), ldexp(z.im, k))
}

/// Binary exponent `e` such that `max(|re|, |im|) = f · 2^e` with `f ∈ [1/2, 1)`.
/// Returns `None` for zero.
pub(crate) fn binary_exponent(z: Complex64) -> Option<i64> {
    let m = z.re.abs().max(z.im.abs());
    if m == 0.0 || !m.is_finite() {
        return None;
    }
    Some(libm::frexp(m).1 as i64)
}

impl Scaled {
    pub const ZERO: Scaled = Scaled {
        mant: Complex64::new(0.0, 0.0),
        exp2: 0,
    };
    pub const ONE: Scaled = Scaled {
        mant: Complex64::new(1.0, 0.0),
        exp2: 0,
    };

    pub fn new(mant: Complex64, exp2: i64) -> Self {
        Scaled { mant, exp2 }.normalized()
    }

    pub fn from_real(x: f64) -> Self {
        Scaled::new(Complex64::new(x, 0.0), 0)
    }

    /// `e^x` as a positive real scaled value; valid far outside the `f64` range.
    pub fn exp_real(x: f64) -> Self {
        let k = (x / LN_2).floor();
        let rest = x - k * LN_2;
        Scaled::new(Complex64::new(rest.exp(), 0.0), k as i64)
    }

    /// Positive real `c + m · 2^e` style helper: `self + x` for real `x`.
    pub fn add_real(self, x: f64) -> Self {
        self + Scaled::from_real(x)
    }

    pub fn normalized(self) -> Self {
        match binary_exponent(self.mant) {
            Some(e) => Scaled {
                mant: ldexp_c(self.mant, -e),
                exp2: self.exp2 + e,
            },
            None if self.mant.re == 0.0 && self.mant.im == 0.0 => Scaled::ZERO,
            None => self,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.mant.re == 0.0 && self.mant.im == 0.0
    }

    pub fn is_finite(&self) -> bool {
        self.mant.re.is_finite() && self.mant.im.is_finite()
    }

    pub fn conj(self) -> Self {
        Scaled {
            mant: self.mant.conj(),
            exp2: self.exp2,
        }
    }

    pub fn scale_real(self, x: f64) -> Self {
        Scaled::new(self.mant * x, self.exp2)
    }

    /// Natural log of the modulus; `-inf` for zero.
    pub fn ln_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        self.mant.norm().ln() + self.exp2 as f64 * LN_2
    }

    /// Modulus as a scaled real.
    pub fn abs(&self) -> Scaled {
        Scaled::new(Complex64::new(self.mant.norm(), 0.0), self.exp2)
    }

    /// Principal square root of a scaled value.
    pub fn sqrt(&self) -> Scaled {
        let (m, e) = if self.exp2.rem_euclid(2) == 0 {
            (self.mant, self.exp2)
        } else {
            (self.mant * 2.0, self.exp2 - 1)
        };
        Scaled::new(m.sqrt(), e / 2)
    }

    /// Converts to an ordinary complex number (may overflow or underflow).
    pub fn to_complex(&self) -> Complex64 {
        ldexp_c(self.mant, self.exp2)
    }

    /// Real part, converted to `f64`.
    pub fn re(&self) -> f64 {
        ldexp(self.mant.re, self.exp2)
    }

    /// Ratio `self / other` returned as an ordinary complex number.
    pub fn ratio(&self, other: &Scaled) -> Complex64 {
        (*self / *other).to_complex()
    }
}

impl From<Complex64> for Scaled {
    fn from(z: Complex64) -> Self {
        Scaled::new(z, 0)
    }
}

impl From<f64> for Scaled {
    fn from(x: f64) -> Self {
        Scaled::from_real(x)
    }
}

impl Mul for Scaled {
    type Output = Scaled;
    fn mul(self, rhs: Scaled) -> Scaled {
        Scaled::new(self.mant * rhs.mant, self.exp2 + rhs.exp2)
    }
}

impl Mul<Complex64> for Scaled {
    type Output = Scaled;
    fn mul(self, rhs: Complex64) -> Scaled {
        Scaled::new(self.mant * rhs, self.exp2)
    }
}

impl Div for Scaled {
    type Output = Scaled;
    fn div(self, rhs: Scaled) -> Scaled {
        Scaled::new(self.mant / rhs.mant, self.exp2 - rhs.exp2)
    }
}

impl Add for Scaled {
    type Output = Scaled;
    fn add(self, rhs: Scaled) -> Scaled {
        if self.is_zero() {
            return rhs;
        }
        if rhs.is_zero() {
            return self;
        }
        let e = self.exp2.max(rhs.exp2);
        let m = ldexp_c(self.mant, self.exp2 - e) + ldexp_c(rhs.mant, rhs.exp2 - e);
        Scaled::new(m, e)
    }
}

impl Neg for Scaled {
    type Output = Scaled;
    fn neg(self) -> Scaled {
        Scaled {
            mant: -self.mant,
            exp2: self.exp2,
        }
    }
}

impl Sub for Scaled {
    type Output = Scaled;
    fn sub(self, rhs: Scaled) -> Scaled {
        self + (-rhs)
    }
}
