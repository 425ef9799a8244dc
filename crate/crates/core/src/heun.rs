//! Confluent Heun function by Frobenius series.
//!
//! `HeunC(α, β, γ, δ, η, z)` is the solution regular at `z = 0` with
//! `HeunC(.., 0) = 1` of
//!
//! ```text
//! z(z-1) y'' + (α z² + (β - α + γ + 2) z - β - 1) y'
//!     + ( ((β + γ + 2)α + 2δ)/2 · z - ((β + 1)α - (γ + 1)β - γ - 2η - 1)/2 ) y = 0
//! ```
//!
//! The series converges for `|z| < 1` (the next singular point is `z = 1`).

use crate::error::{Error, Result};

/// Parameters of the confluent Heun equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeunParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
    pub eta: f64,
}

/// Relative size of the running term at which the series is truncated.
pub const SERIES_TOLERANCE: f64 = 1e-14;
const MAX_TERMS: usize = 1_000_000;

/// Evaluates `HeunC(params, z)` for `|z| < 1`.
pub fn heun_c(p: &HeunParams, z: f64) -> Result<f64> {
    if z.is_nan() || z.abs() >= 1.0 {
        return Err(Error::OutOfDisk { z });
    }
    if p.beta <= -1.0 && p.beta.fract() == 0.0 {
        return Err(Error::Domain(format!(
            "beta = {} is a negative integer; the regular series is undefined",
            p.beta
        )));
    }
    let lin = 0.5 * ((p.beta + p.gamma + 2.0) * p.alpha + 2.0 * p.delta);
    let cst = 0.5 * ((p.beta + 1.0) * p.alpha - (p.gamma + 1.0) * p.beta - p.gamma - 2.0 * p.eta - 1.0);
    let first_order = p.beta - p.alpha + p.gamma + 2.0;

    // z^k balance: (k+1)(k+1+β) c_{k+1} = (k(k-1) + k·first_order - cst) c_k + (α(k-1) + lin) c_{k-1}
    let (mut prev, mut cur) = (0.0, 1.0);
    let mut sum = 1.0;
    let mut zk = 1.0;
    let mut quiet = 0;
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        let next = ((kf * (kf - 1.0) + kf * first_order - cst) * cur + (p.alpha * (kf - 1.0) + lin) * prev)
            / ((kf + 1.0) * (kf + 1.0 + p.beta));
        zk *= z;
        let term = next * zk;
        sum += term;
        prev = cur;
        cur = next;
        // two consecutive small terms, so a single accidental near-zero does not stop early
        if term.abs() <= SERIES_TOLERANCE * sum.abs() {
            quiet += 1;
            if quiet >= 2 {
                return Ok(sum);
            }
        } else {
            quiet = 0;
        }
        if !sum.is_finite() {
            break;
        }
    }
    Err(Error::SeriesDivergence { terms: MAX_TERMS })
}

/// Exponent of the `(1 + ξ²)` prefactor, a root of `s(s - 1) = 1/16` at `ξ² = -1`.
pub fn prefactor_exponent() -> f64 {
    0.5 + 5f64.sqrt() / 4.0
}

/// Heun parameters of the odd radial solution for energy `epsilon` and angular number `l`.
pub fn radial_params(epsilon: f64, l: u32) -> HeunParams {
    let l2 = f64::from(l * l);
    HeunParams {
        alpha: 0.0,
        beta: 0.5,
        gamma: 5f64.sqrt() / 2.0,
        delta: -epsilon / 4.0,
        eta: 0.125 - l2 / 4.0 + epsilon / 4.0,
    }
}

/// The radial solution with `χ(0) = 0`, `χ'(0) = 1`:
///
/// `χ(ξ) = ξ (1 + ξ²)^{1/2 + √5/4} HeunC(0, ½, √5/2, -ε/4, η, -ξ²)`.
///
/// Only valid for `ξ² < 1`; beyond that use shooting.
pub fn heun_wavefunction(epsilon: f64, l: u32, xi: f64) -> Result<f64> {
    if !epsilon.is_finite() || !xi.is_finite() || xi < 0.0 {
        return Err(Error::Domain(format!(
            "need finite epsilon and xi >= 0, got epsilon = {epsilon}, xi = {xi}"
        )));
    }
    let z = -xi * xi;
    let h = heun_c(&radial_params(epsilon, l), z)?;
    Ok(xi * (1.0 + xi * xi).powf(prefactor_exponent()) * h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::{radial_values_at, solve_modes, RadialProblem};
    use approx::assert_relative_eq;

    #[test]
    fn value_at_origin() {
        assert_eq!(heun_c(&radial_params(3.0, 1), 0.0).unwrap(), 1.0);
        assert_eq!(heun_wavefunction(12.0, 0, 0.0).unwrap(), 0.0);
        assert_eq!(heun_wavefunction(-0.3, 4, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn outside_disk() {
        assert!(matches!(heun_wavefunction(1.0, 0, 1.0), Err(Error::OutOfDisk { .. })));
        assert!(matches!(heun_wavefunction(1.0, 0, 1.5), Err(Error::OutOfDisk { .. })));
        assert!(heun_wavefunction(1.0, 0, -0.1).is_err());
    }

    #[test]
    fn reduces_to_geometric_series() {
        // α = δ = η = 0, β = 0, γ = -1 gives z(z-1)y'' + (z-1)y' = 0 → y = 1
        let p = HeunParams {
            alpha: 0.0,
            beta: 0.0,
            gamma: -1.0,
            delta: 0.0,
            eta: 0.0,
        };
        assert_relative_eq!(heun_c(&p, 0.7).unwrap(), 1.0, epsilon = 1e-14);

        // α = δ = 0 is hypergeometric; β = 0, γ = 1, η = 0 gives 2F1(1, 1; 1; z) = 1/(1 - z)
        let p = HeunParams {
            alpha: 0.0,
            beta: 0.0,
            gamma: 1.0,
            delta: 0.0,
            eta: 0.0,
        };
        for z in [-0.5, 0.3, 0.8] {
            assert_relative_eq!(heun_c(&p, z).unwrap(), 1.0 / (1.0 - z), max_relative = 1e-12);
        }
    }

    #[test]
    fn satisfies_the_differential_equation() {
        let p = HeunParams {
            alpha: 0.7,
            beta: 0.5,
            gamma: 1.1,
            delta: -0.4,
            eta: 0.3,
        };
        let z = 0.35;
        let h = 1e-4;
        let y = |z| heun_c(&p, z).unwrap();
        let d1 = (y(z + h) - y(z - h)) / (2.0 * h);
        let d2 = (y(z + h) - 2.0 * y(z) + y(z - h)) / (h * h);
        let lin = 0.5 * ((p.beta + p.gamma + 2.0) * p.alpha + 2.0 * p.delta);
        let cst = 0.5 * ((p.beta + 1.0) * p.alpha - (p.gamma + 1.0) * p.beta - p.gamma - 2.0 * p.eta - 1.0);
        let residual = z * (z - 1.0) * d2
            + (p.alpha * z * z + (p.beta - p.alpha + p.gamma + 2.0) * z - p.beta - 1.0) * d1
            + (lin * z - cst) * y(z);
        assert!(residual.abs() < 1e-6, "{residual}");
    }

    #[test]
    fn matches_shooting_trajectory() {
        let problem = RadialProblem::new(0.5, 0).unwrap();
        let eps = solve_modes(&problem, 1).unwrap().modes[0].epsilon;
        let pts = [0.1, 0.2, 0.3, 0.4];
        let shot = radial_values_at(&problem, eps, &pts).unwrap();
        for (x, s) in pts.iter().zip(shot) {
            assert_relative_eq!(heun_wavefunction(eps, 0, *x).unwrap(), s, max_relative = 1e-8);
        }
    }

    #[test]
    fn matches_shooting_off_eigenvalue() {
        for (eps, l) in [(7.3, 1), (-0.2, 0), (150.0, 2)] {
            let problem = RadialProblem::new(0.9, l).unwrap();
            let pts = [0.2, 0.5, 0.8, 0.9];
            let shot = radial_values_at(&problem, eps, &pts).unwrap();
            for (x, s) in pts.iter().zip(shot) {
                let h = heun_wavefunction(eps, l, *x).unwrap();
                assert!(
                    (h - s).abs() <= 1e-9 * s.abs().max(1e-3),
                    "eps={eps} l={l} x={x}: {h} vs {s}"
                );
            }
        }
    }

    #[test]
    fn zero_at_eigenvalue() {
        let problem = RadialProblem::new(0.5, 0).unwrap();
        let eps = solve_modes(&problem, 1).unwrap().modes[0].epsilon;
        let at_wall = heun_wavefunction(eps, 0, 0.5).unwrap();
        let peak = (1..50)
            .map(|i| heun_wavefunction(eps, 0, 0.01 * i as f64).unwrap().abs())
            .fold(0.0, f64::max);
        assert!(at_wall.abs() <= 1e-7 * peak);
    }
}
