//! Simultaneous complex root approximation (Aberth–Ehrlich) with exact
//! residual certification.
//!
//! Approximations are computed in `f64` on the square-free part of the input,
//! then each one is certified by evaluating the exact rational polynomial at
//! the (exactly representable) approximation. The inclusion disks
//! `D(z_i, r_i)` with `r_i = deg · |g(z_i)| / |lc · ∏_{j≠i} (z_i − z_j)|`
//! contain all roots; when they are pairwise disjoint each holds exactly one.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::polyarith::RatPoly;

const MAX_ITERATIONS: usize = 2000;

/// Certified root approximations.
#[derive(Clone, Debug)]
pub struct CertifiedRoots {
    pub centers: Vec<Complex64>,
    pub radii: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RootFailure {
    NoConvergence,
    OverlappingDisks,
}

fn eval_f64(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::zero();
    let mut dp = Complex64::zero();
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// `|g(z)|` with `g` evaluated exactly at the rational point `z`.
fn exact_modulus(g: &RatPoly, z: Complex64) -> f64 {
    let (Some(x), Some(y)) = (BigRational::from_float(z.re), BigRational::from_float(z.im)) else {
        return f64::INFINITY;
    };
    let mut re = BigRational::zero();
    let mut im = BigRational::zero();
    for c in g.coeffs().iter().rev() {
        let nre = &re * &x - &im * &y + c;
        let nim = &re * &y + &im * &x;
        re = nre;
        im = nim;
    }
    (&re * &re + &im * &im).to_f64().map_or(f64::INFINITY, f64::sqrt)
}

/// All complex roots of a square-free rational polynomial of positive degree.
pub fn certified_roots(g: &RatPoly) -> Result<CertifiedRoots, RootFailure> {
    let deg = g.degree().unwrap_or(0);
    if deg == 0 {
        return Ok(CertifiedRoots { centers: Vec::new(), radii: Vec::new() });
    }
    let coeffs: Vec<Complex64> = g
        .coeffs()
        .iter()
        .map(|c| Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0))
        .collect();
    let lead = coeffs[deg];
    let radius = (coeffs[0] / lead).norm().powf(1.0 / deg as f64).max(1e-3);
    let mut z: Vec<Complex64> = (0..deg)
        .map(|i| Complex64::from_polar(radius, 2.0 * std::f64::consts::PI * i as f64 / deg as f64 + 0.4))
        .collect();

    let mut converged = false;
    for _ in 0..MAX_ITERATIONS {
        let mut max_step: f64 = 0.0;
        for i in 0..deg {
            let (p, dp) = eval_f64(&coeffs, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = (0..deg).filter(|&j| j != i).map(|j| (z[i] - z[j]).inv()).sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if !step.is_finite() {
                continue;
            }
            z[i] -= step;
            max_step = max_step.max(step.norm() / (1.0 + z[i].norm()));
        }
        if max_step < 1e-15 {
            converged = true;
            break;
        }
    }
    if !converged || z.iter().any(|w| !w.is_finite()) {
        return Err(RootFailure::NoConvergence);
    }

    let lead_abs = g.leading_coeff().and_then(ToPrimitive::to_f64).map_or(f64::NAN, f64::abs);
    let radii: Vec<f64> = (0..deg)
        .map(|i| {
            let denom: f64 = (0..deg).filter(|&j| j != i).map(|j| (z[i] - z[j]).norm()).product::<f64>() * lead_abs;
            // slack for the f64 rounding in the denominator
            deg as f64 * exact_modulus(g, z[i]) / denom * (1.0 + 1e-9)
        })
        .collect();
    for i in 0..deg {
        if !radii[i].is_finite() {
            return Err(RootFailure::OverlappingDisks);
        }
        for j in i + 1..deg {
            if (z[i] - z[j]).norm() <= radii[i] + radii[j] {
                return Err(RootFailure::OverlappingDisks);
            }
        }
    }
    Ok(CertifiedRoots { centers: z, radii })
}
