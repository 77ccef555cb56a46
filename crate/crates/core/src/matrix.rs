use std::ops::Mul;

use num_complex::Complex64;

/// A 2×2 complex matrix `[[a, b], [c, d]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferMatrix2 {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl TransferMatrix2 {
    pub const IDENTITY: TransferMatrix2 = TransferMatrix2 {
        a: Complex64::new(1.0, 0.0),
        b: Complex64::new(0.0, 0.0),
        c: Complex64::new(0.0, 0.0),
        d: Complex64::new(1.0, 0.0),
    };

    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        TransferMatrix2 { a, b, c, d }
    }

    /// Matrix with the given columns.
    pub fn from_columns(first: [Complex64; 2], second: [Complex64; 2]) -> Self {
        TransferMatrix2::new(first[0], second[0], first[1], second[1])
    }

    pub fn diagonal(x: Complex64, y: Complex64) -> Self {
        TransferMatrix2::new(x, Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), y)
    }

    pub fn trace(&self) -> Complex64 {
        self.a + self.d
    }

    pub fn det(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }

    pub fn column(&self, j: usize) -> [Complex64; 2] {
        if j == 0 {
            [self.a, self.c]
        } else {
            [self.b, self.d]
        }
    }

    pub fn apply(&self, v: [Complex64; 2]) -> [Complex64; 2] {
        [self.a * v[0] + self.b * v[1], self.c * v[0] + self.d * v[1]]
    }

    pub fn inverse(&self) -> TransferMatrix2 {
        let det = self.det();
        TransferMatrix2::new(self.d / det, -self.b / det, -self.c / det, self.a / det)
    }

    pub fn scale(&self, k: Complex64) -> TransferMatrix2 {
        TransferMatrix2::new(self.a * k, self.b * k, self.c * k, self.d * k)
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        (self.a.norm_sqr() + self.b.norm_sqr() + self.c.norm_sqr() + self.d.norm_sqr()).sqrt()
    }

    /// Frobenius norm of `self − other`.
    pub fn distance(&self, other: &TransferMatrix2) -> f64 {
        TransferMatrix2::new(
            self.a - other.a,
            self.b - other.b,
            self.c - other.c,
            self.d - other.d,
        )
        .norm()
    }

    pub fn is_finite(&self) -> bool {
        [self.a, self.b, self.c, self.d]
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

impl Mul for TransferMatrix2 {
    type Output = TransferMatrix2;
    fn mul(self, r: TransferMatrix2) -> TransferMatrix2 {
        TransferMatrix2::new(
            self.a * r.a + self.b * r.c,
            self.a * r.b + self.b * r.d,
            self.c * r.a + self.d * r.c,
            self.c * r.b + self.d * r.d,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_and_product() {
        let m = TransferMatrix2::new(
            Complex64::new(1.0, 2.0),
            Complex64::new(0.5, 0.0),
            Complex64::new(-0.3, 0.1),
            Complex64::new(2.0, -1.0),
        );
        assert!((m * m.inverse()).distance(&TransferMatrix2::IDENTITY) < 1e-14);
        assert!(((m * m).det() - m.det() * m.det()).norm() < 1e-13);
        let v = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)];
        let w = m.apply(v);
        assert_eq!(w[0], m.a + m.b * Complex64::new(0.0, 1.0));
    }
}
