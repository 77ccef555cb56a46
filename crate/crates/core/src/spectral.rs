//! Gaps, bands and eigen-structure of transfer matrices.
//!
//! A point `e^{iθ}` lies in a gap of a `p`-periodic background `β` when the
//! one-period transfer matrix is hyperbolic, `|Tr T_p(e^{iθ})| > 2`. For a
//! constant background `L` the single gap is `|θ| < 2 arcsin|L|`.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::TransferMatrix2;
use crate::szego::transfer_matrix;

const EDGE_TOL: f64 = 1e-12;
const DEGENERACY_TOL: f64 = 1e-10;
const FIRST_SLOT_TOL: f64 = 1e-8;

/// Reduces an angle to `(−π, π]`.
pub fn canonical_angle(theta: f64) -> f64 {
    let t = theta.rem_euclid(TAU);
    if t > PI {
        t - TAU
    } else {
        t
    }
}

/// `T_p(z) = A(β_{p−1}, z) ⋯ A(β₀, z)`.
pub fn period_matrix(betas: &[Complex64], z: Complex64) -> Result<TransferMatrix2> {
    let mut t = TransferMatrix2::IDENTITY;
    for (j, b) in betas.iter().enumerate() {
        t = transfer_matrix(*b, z).map_err(|e| match e {
            Error::Admissibility { modulus, .. } => Error::Admissibility { index: j, modulus },
            other => other,
        })? * t;
    }
    Ok(t)
}

/// `|Tr T_p(e^{iθ})|`.
pub fn trace_modulus(betas: &[Complex64], theta: f64) -> Result<f64> {
    Ok(period_matrix(betas, Complex64::from_polar(1.0, theta))?
        .trace()
        .norm())
}

/// Whether `e^{iθ}` lies strictly inside a gap of the periodic background
/// `betas` (a constant `L` is the one-element slice). Band edges count as
/// bands.
pub fn in_gap(betas: &[Complex64], theta: f64) -> Result<bool> {
    if betas.is_empty() {
        return Err(Error::InvalidParameter("empty period".into()));
    }
    Ok(trace_modulus(betas, canonical_angle(theta))? > 2.0 + EDGE_TOL)
}

/// Open arcs of the circle outside the bands.
#[derive(Debug, Clone, PartialEq)]
pub struct GapGeometry {
    /// `(θ_lo, θ_hi)` with `θ_lo ∈ (−π, π]` and `θ_lo < θ_hi < θ_lo + 2π`;
    /// an arc through `θ = π` has `θ_hi > π`.
    pub arcs: Vec<(f64, f64)>,
    /// Number of bands.
    pub band_count: usize,
}

impl GapGeometry {
    pub fn contains(&self, theta: f64) -> bool {
        let t = canonical_angle(theta);
        self.arcs.iter().any(|&(lo, hi)| {
            let shifted = if t < lo { t + TAU } else { t };
            shifted > lo && shifted < hi
        })
    }

    /// Midpoint angle of each arc, in `(−π, π]`.
    pub fn midpoints(&self) -> Vec<f64> {
        self.arcs
            .iter()
            .map(|&(lo, hi)| canonical_angle(0.5 * (lo + hi)))
            .collect()
    }

    /// Band edges, in `(−π, π]`, ascending.
    pub fn edges(&self) -> Vec<f64> {
        let mut e: Vec<f64> = self
            .arcs
            .iter()
            .flat_map(|&(lo, hi)| [canonical_angle(lo), canonical_angle(hi)])
            .collect();
        e.sort_by(f64::total_cmp);
        e
    }
}

/// Samples `|Tr T_p| − 2` on `grid` equally spaced angles, bisects every sign
/// change to width `tol`, and returns the gaps.
pub fn compute_bands(betas: &[Complex64], grid: usize, tol: f64) -> Result<GapGeometry> {
    let p = betas.len();
    if p == 0 {
        return Err(Error::InvalidParameter("empty period".into()));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "tolerance {tol} must be positive"
        )));
    }
    if grid < 16 * p {
        return Err(Error::Resolution(format!(
            "{grid} samples for period {p}; need at least {}",
            16 * p
        )));
    }
    let excess = |theta: f64| -> Result<f64> { Ok(trace_modulus(betas, theta)? - 2.0) };
    let is_gap = |x: f64| x > EDGE_TOL;

    let step = TAU / grid as f64;
    let thetas: Vec<f64> = (0..=grid).map(|i| -PI + step * i as f64).collect();
    let values = thetas
        .iter()
        .map(|t| excess(*t))
        .collect::<Result<Vec<_>>>()?;

    let mut crossings = Vec::new();
    for i in 0..grid {
        let (l, r) = (is_gap(values[i]), is_gap(values[i + 1]));
        let mid = is_gap(excess(0.5 * (thetas[i] + thetas[i + 1]))?);
        if l == r && mid != l {
            return Err(Error::Resolution(format!(
                "two crossings between {} and {}",
                thetas[i],
                thetas[i + 1]
            )));
        }
        if l != r {
            let (mut lo, mut hi) = (thetas[i], thetas[i + 1]);
            while hi - lo > tol {
                let m = 0.5 * (lo + hi);
                if is_gap(excess(m)?) == l {
                    lo = m;
                } else {
                    hi = m;
                }
            }
            // entering a gap when moving counterclockwise iff the left sample is a band
            crossings.push((0.5 * (lo + hi), !l));
        }
    }

    let mut arcs = Vec::new();
    if crossings.is_empty() {
        if is_gap(values[0]) {
            return Err(Error::Resolution("no band found".into()));
        }
    } else {
        // crossings alternate between entering and leaving a gap
        let m = crossings.len();
        for k in 0..m {
            let (lo, entering) = crossings[k];
            if entering {
                let (hi, _) = crossings[(k + 1) % m];
                let hi = if hi <= lo { hi + TAU } else { hi };
                arcs.push((lo, hi));
            }
        }
    }
    let band_count = arcs.len().max(1);
    Ok(GapGeometry { arcs, band_count })
}

/// Eigenvalues ordered by modulus and eigenvectors normalized to a unit
/// first entry (second entry when the first nearly vanishes).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenPair {
    pub lambda1: Complex64,
    pub lambda2: Complex64,
    pub eigvec1: [Complex64; 2],
    pub eigvec2: [Complex64; 2],
}

impl EigenPair {
    /// Eigenvector matrix with columns `eigvec1`, `eigvec2`.
    pub fn vectors(&self) -> TransferMatrix2 {
        TransferMatrix2::from_columns(self.eigvec1, self.eigvec2)
    }
}

fn eigenvector(m: &TransferMatrix2, lambda: Complex64) -> [Complex64; 2] {
    let from_first = [m.b, lambda - m.a];
    let from_second = [lambda - m.d, m.c];
    let norm = |v: &[Complex64; 2]| (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
    let v = if norm(&from_first) >= norm(&from_second) {
        from_first
    } else {
        from_second
    };
    let size = norm(&v);
    if size == 0.0 {
        // scalar matrix: every vector is an eigenvector
        return [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
    }
    if v[0].norm() >= FIRST_SLOT_TOL * size {
        [Complex64::new(1.0, 0.0), v[1] / v[0]]
    } else {
        [v[0] / v[1], Complex64::new(1.0, 0.0)]
    }
}

/// Eigen-decomposition of a 2×2 matrix, `|λ₁| ≥ |λ₂|`.
pub fn eigen_pair(m: &TransferMatrix2) -> Result<EigenPair> {
    let tr = m.trace();
    let det = m.det();
    let root = (tr * tr - det * 4.0).sqrt();
    let plus = tr + root;
    let minus = tr - root;
    let big = if plus.norm() >= minus.norm() {
        plus
    } else {
        minus
    } * 0.5;
    let small = if big.norm() > 0.0 {
        det / big
    } else {
        Complex64::new(0.0, 0.0)
    };
    let gap = big.norm() - small.norm();
    if !(gap >= DEGENERACY_TOL) {
        return Err(Error::Degenerate { gap });
    }
    Ok(EigenPair {
        lambda1: big,
        lambda2: small,
        eigvec1: eigenvector(m, big),
        eigvec2: eigenvector(m, small),
    })
}

fn gap_radicand(l: Complex64, theta: f64) -> Result<(f64, f64)> {
    let t = canonical_angle(theta);
    let half_sin = (0.5 * t).sin();
    let radicand = l.norm_sqr() - half_sin * half_sin;
    if !(radicand > 0.0) {
        return Err(Error::OutOfGap { theta });
    }
    Ok((t, radicand))
}

/// `lim Δₙ(e^{iθ})` for coefficients tending to `L`:
/// `conj(h^{1/2}) ((ζ−1) − h^{1/2}) / (2L̄)` with
/// `h^{1/2} = 2e^{iθ/2} (|L|² − sin²(θ/2))^{1/2}`.
pub fn delta_infinity(l: Complex64, theta: f64) -> Result<Complex64> {
    let (t, radicand) = gap_radicand(l, theta)?;
    let zeta = Complex64::from_polar(1.0, t);
    let h_half = Complex64::from_polar(2.0 * radicand.sqrt(), 0.5 * t);
    Ok(h_half.conj() * ((zeta - 1.0) - h_half) / (l.conj() * 2.0))
}

/// `lim αₙ(dν) = L e^{iω}` with
/// `cos ω = (2sin²(θ/2) − |L|²)/|L|²`, `sin ω = 2 sin(θ/2) (|L|² − sin²(θ/2))^{1/2}/|L|²`.
pub fn limit_phase(l: Complex64, theta: f64) -> Result<Complex64> {
    let (t, radicand) = gap_radicand(l, theta)?;
    let m2 = l.norm_sqr();
    let s = (0.5 * t).sin();
    let cos_w = (2.0 * s * s - m2) / m2;
    let sin_w = 2.0 * s * radicand.sqrt() / m2;
    debug_assert!((cos_w * cos_w + sin_w * sin_w - 1.0).abs() < 1e-12);
    Ok(l * Complex64::from_polar(1.0, sin_w.atan2(cos_w)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_3, FRAC_PI_6};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn constant_gap_membership() {
        let l = [c(-0.5, 0.0)];
        assert!(in_gap(&l, 0.0).unwrap());
        assert!(!in_gap(&l, PI).unwrap());
        assert!(!in_gap(&l, FRAC_PI_3).unwrap());
        assert!(!in_gap(&l, -FRAC_PI_3).unwrap());
        assert!(in_gap(&l, TAU - 0.1).unwrap());
    }

    #[test]
    fn constant_band_edges() {
        let g = compute_bands(&[c(-0.5, 0.0)], 64, 1e-13).unwrap();
        assert_eq!(g.arcs.len(), 1);
        let (lo, hi) = g.arcs[0];
        assert!((lo + FRAC_PI_3).abs() < 1e-8);
        assert!((hi - FRAC_PI_3).abs() < 1e-8);
        assert!(g.contains(0.0) && !g.contains(2.0));

        let free = compute_bands(&[c(0.0, 0.0)], 64, 1e-12).unwrap();
        assert!(free.arcs.is_empty());
        assert_eq!(free.band_count, 1);

        assert!(matches!(
            compute_bands(&[c(0.5, 0.0), c(-0.5, 0.0)], 31, 1e-10),
            Err(Error::Resolution(_))
        ));
    }

    #[test]
    fn gap_through_pi_wraps() {
        let betas = [c(0.5, 0.0), c(-0.5, 0.0)];
        let g = compute_bands(&betas, 64, 1e-13).unwrap();
        assert_eq!(g.arcs.len(), 1);
        let (lo, hi) = g.arcs[0];
        assert!(hi > PI && lo < PI);
        assert!(g.contains(PI) && g.contains(-PI + 0.1) && !g.contains(0.0));
        // dense scan agrees away from the edges
        let samples = 20_000;
        for i in 0..samples {
            let t = -PI + TAU * (i as f64 + 0.5) / samples as f64;
            let near_edge = g
                .edges()
                .iter()
                .any(|e| (canonical_angle(t - e)).abs() < 1e-9);
            if !near_edge {
                assert_eq!(
                    g.contains(t),
                    trace_modulus(&betas, t).unwrap() > 2.0,
                    "{t}"
                );
            }
        }
    }

    #[test]
    fn eigen_pair_at_one() {
        let l = c(-0.5, 0.0);
        let a = transfer_matrix(l, c(1.0, 0.0)).unwrap();
        let e = eigen_pair(&a).unwrap();
        let r = 0.75f64.sqrt();
        assert!((e.lambda1 - c(3f64.sqrt(), 0.0)).norm() < 1e-14);
        assert!((e.lambda2 - c(1.0 / 3f64.sqrt(), 0.0)).norm() < 1e-14);
        // τ = ρλ are the roots y± = 1 ± |L|
        assert!((e.lambda1 * r - c(1.5, 0.0)).norm() < 1e-14);
        assert!((e.lambda2 * r - c(0.5, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn eigenvector_ratio_matches_closed_form() {
        let l = c(-0.5, 0.0);
        let zeta = Complex64::from_polar(1.0, FRAC_PI_6);
        let a = transfer_matrix(l, zeta).unwrap();
        let e = eigen_pair(&a).unwrap();
        let r = 0.75f64.sqrt();
        let tau1 = e.lambda1 * r;
        let ratio = (zeta - tau1) / l.conj();
        assert!((e.eigvec1[1] - ratio).norm() < 1e-12);
        for (lam, v) in [(e.lambda1, e.eigvec1), (e.lambda2, e.eigvec2)] {
            let av = a.apply(v);
            let res = ((av[0] - lam * v[0]).norm_sqr() + (av[1] - lam * v[1]).norm_sqr()).sqrt();
            assert!(res < 1e-12);
        }
        assert!((e.lambda1 * e.lambda2 - zeta).norm() < 1e-12);
    }

    #[test]
    fn elliptic_is_degenerate() {
        let a = transfer_matrix(c(-0.5, 0.0), c(-1.0, 0.0)).unwrap();
        assert!(matches!(eigen_pair(&a), Err(Error::Degenerate { .. })));
    }

    #[test]
    fn delta_infinity_examples() {
        let l = c(-0.5, 0.0);
        assert!((delta_infinity(l, 0.0).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
        assert!(matches!(
            delta_infinity(l, FRAC_PI_3),
            Err(Error::OutOfGap { .. })
        ));
        assert!(matches!(limit_phase(l, 2.0), Err(Error::OutOfGap { .. })));
        for l in [c(-0.5, 0.0), c(0.3, -0.4), c(0.0, 0.9)] {
            assert!((limit_phase(l, 0.0).unwrap() + l).norm() < 1e-15);
        }
        let lp = limit_phase(l, FRAC_PI_6).unwrap();
        let di = delta_infinity(l, FRAC_PI_6).unwrap();
        assert!((lp - (l + di)).norm() < 1e-12);
        assert!((lp.norm() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn delta_infinity_has_no_branch_jumps() {
        let l = c(0.2, -0.6);
        let edge = 2.0 * l.norm().asin();
        let steps = 1000;
        let mut prev = None;
        for i in 1..steps {
            let t = -edge + 2.0 * edge * i as f64 / steps as f64;
            let d = delta_infinity(l, t).unwrap();
            if let Some(p) = prev {
                let jump: Complex64 = d - p;
                assert!(jump.norm() < 0.2, "jump {} at {t}", jump.norm());
            }
            prev = Some(d);
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn limit_identities(r in 0.05f64..0.95, arg in 0.0f64..TAU, frac in -0.999f64..0.999) {
                let l = Complex64::from_polar(r, arg);
                let theta = 2.0 * (frac * r).asin();
                let d = delta_infinity(l, theta).unwrap();
                prop_assert!(((d + l).norm() - r).abs() < 1e-12);
                prop_assert!((limit_phase(l, theta).unwrap() - (l + d)).norm() < 1e-12);
                let a = transfer_matrix(l, Complex64::from_polar(1.0, theta)).unwrap();
                prop_assert!(in_gap(&[l], theta).unwrap() == eigen_pair(&a).is_ok());
            }
        }
    }
}
