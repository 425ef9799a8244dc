//! Radial spectrum of a particle on a helicoid stripe.
//!
//! In `ξ = ωρ` and `ε = 2mE/ħ²ω²` the radial equation is
//!
//! ```text
//! ε χ = -χ'' + [ l²/(1+ξ²) - (1 + ξ²/2) / (2(1+ξ²)²) ] χ,   χ(0) = χ(ξ_max) = 0
//! ```
//!
//! [`solve_modes`] shoots from `ξ = 0` with `χ'(0) = 1`, brackets mode `n`
//! by counting nodes (Sturm oscillation) and refines with Brent's method.
//! [`finite_difference_spectrum`] is an independent oracle built on the
//! symmetric tridiagonal discretisation.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::effective_potential_dimensionless;
use crate::ode::{self, Tolerances};
use crate::roots;

/// The dimensionless boundary-value problem on `[0, xi_max]` for one `l`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialProblem {
    xi_max: f64,
    l: u32,
}

impl RadialProblem {
    pub fn new(xi_max: f64, l: u32) -> Result<Self> {
        if !(xi_max.is_finite() && xi_max > 0.0) {
            return Err(Error::Domain(format!("xi_max must be > 0, got {xi_max}")));
        }
        Ok(Self { xi_max, l })
    }

    pub fn xi_max(&self) -> f64 {
        self.xi_max
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn potential(&self, xi: f64) -> f64 {
        effective_potential_dimensionless(self.l, xi)
    }
}

/// One bound state. `n` counts from 1; mode `n` has `n - 1` interior nodes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialMode {
    pub n: usize,
    pub l: u32,
    pub epsilon: f64,
}

/// The lowest modes of one [`RadialProblem`], ascending in `epsilon`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub problem: RadialProblem,
    pub modes: Vec<RadialMode>,
}

impl Spectrum {
    pub fn epsilons(&self) -> Vec<f64> {
        self.modes.iter().map(|m| m.epsilon).collect()
    }

    pub fn mode(&self, n: usize) -> Option<&RadialMode> {
        self.modes.iter().find(|m| m.n == n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShootingConfig {
    pub tolerances: Tolerances,
    /// Largest `ε` the bracket search may reach before giving up.
    pub epsilon_ceiling: f64,
    /// Relative tolerance on refined eigenvalues.
    pub rtol: f64,
}

impl Default for ShootingConfig {
    fn default() -> Self {
        Self {
            tolerances: Tolerances::default(),
            epsilon_ceiling: 1e9,
            rtol: 1e-13,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryPoint {
    pub xi: f64,
    pub chi: f64,
    pub dchi: f64,
}

/// Result of one shot at fixed `ε`.
#[derive(Debug, Clone, PartialEq)]
pub struct Shot {
    pub epsilon: f64,
    /// `χ(ξ_max; ε)`.
    pub boundary_value: f64,
    /// `max |χ|` over the accepted steps.
    pub peak: f64,
    /// Sign changes strictly inside `(0, ξ_max)`, ignoring the final step.
    pub interior_nodes: usize,
    /// Sign changes over the whole trajectory including `ξ_max`. By Sturm
    /// oscillation this is the number of eigenvalues below `ε`.
    pub eigenvalues_below: usize,
    pub trajectory: Option<Vec<TrajectoryPoint>>,
}

#[derive(Default)]
struct SignCounter {
    last: f64,
    changes: usize,
}

impl SignCounter {
    fn push(&mut self, v: f64) {
        if v == 0.0 {
            return;
        }
        if self.last != 0.0 && v.signum() != self.last.signum() {
            self.changes += 1;
        }
        self.last = v;
    }
}

fn step_cap(problem: &RadialProblem, epsilon: f64) -> f64 {
    let k = (epsilon.abs() + f64::from(problem.l * problem.l) + 1.0).sqrt();
    (problem.xi_max / 64.0).min(0.2 / k)
}

fn shoot(
    problem: &RadialProblem,
    epsilon: f64,
    config: &ShootingConfig,
    stops: &[f64],
    mut visit: impl FnMut(f64, &[f64; 2]),
) -> Result<[f64; 2]> {
    if !epsilon.is_finite() {
        return Err(Error::Domain(format!("epsilon must be finite, got {epsilon}")));
    }
    let tol = Tolerances {
        h_max: config.tolerances.h_max.min(step_cap(problem, epsilon)),
        ..config.tolerances
    };
    let rhs = |xi: f64, y: &[f64; 2]| [y[1], (problem.potential(xi) - epsilon) * y[0]];
    ode::integrate(rhs, 0.0, [0.0, 1.0], problem.xi_max, stops, &tol, &mut visit).map_err(|e| {
        Error::IntegrationFailure {
            epsilon,
            reason: e.to_string(),
        }
    })
}

/// Shoots from `χ(0) = 0, χ'(0) = 1` to `ξ_max`.
pub fn integrate_radial(problem: &RadialProblem, epsilon: f64) -> Result<Shot> {
    integrate_radial_with(problem, epsilon, &ShootingConfig::default(), false)
}

pub fn integrate_radial_with(
    problem: &RadialProblem,
    epsilon: f64,
    config: &ShootingConfig,
    keep_trajectory: bool,
) -> Result<Shot> {
    let mut peak = 0.0f64;
    let mut all = SignCounter::default();
    let mut interior = SignCounter::default();
    let mut previous: Option<f64> = None;
    let mut trajectory = keep_trajectory.then(Vec::new);
    let end = shoot(problem, epsilon, config, &[], |xi, y| {
        peak = peak.max(y[0].abs());
        all.push(y[0]);
        // defer by one sample so the endpoint never contributes
        if let Some(prev) = previous.replace(y[0]) {
            interior.push(prev);
        }
        if let Some(t) = trajectory.as_mut() {
            t.push(TrajectoryPoint {
                xi,
                chi: y[0],
                dchi: y[1],
            });
        }
    })?;
    Ok(Shot {
        epsilon,
        boundary_value: end[0],
        peak,
        interior_nodes: interior.changes,
        eigenvalues_below: all.changes,
        trajectory,
    })
}

/// `χ(ξ; ε)` at each of the sorted `points` in `(0, ξ_max]`, same normalisation
/// as [`integrate_radial`].
pub fn radial_values_at(problem: &RadialProblem, epsilon: f64, points: &[f64]) -> Result<Vec<f64>> {
    if points.windows(2).any(|w| w[1] <= w[0]) || points.iter().any(|&p| !(p > 0.0 && p <= problem.xi_max)) {
        return Err(Error::Domain(
            "evaluation points must be increasing inside (0, xi_max]".into(),
        ));
    }
    let mut out = vec![f64::NAN; points.len()];
    let mut next = 0;
    shoot(problem, epsilon, &ShootingConfig::default(), points, |xi, y| {
        if next < points.len() && xi == points[next] {
            out[next] = y[0];
            next += 1;
        }
    })?;
    Ok(out)
}

/// Lowest `count` eigenvalues by shooting.
pub fn solve_modes(problem: &RadialProblem, count: usize) -> Result<Spectrum> {
    solve_modes_with(problem, count, &ShootingConfig::default())
}

pub fn solve_modes_with(problem: &RadialProblem, count: usize, config: &ShootingConfig) -> Result<Spectrum> {
    if count == 0 {
        return Err(Error::Domain("count must be >= 1".into()));
    }
    let below = |eps: f64| integrate_radial_with(problem, eps, config, false).map(|s| s.eigenvalues_below);

    // The bracket never dips below -1/2, so nothing lies under `lo` initially.
    let mut lo: f64 = -0.5;
    let mut below_lo = 0usize;
    let mut modes = Vec::with_capacity(count);
    for n in 1..=count {
        // Comparison with the bare box: the potential never exceeds l².
        let box_level = (n as f64 * std::f64::consts::PI / problem.xi_max).powi(2);
        let mut hi = (lo.max(0.0) + box_level + f64::from(problem.l * problem.l) + 1.0).min(config.epsilon_ceiling);
        let mut below_hi = below(hi)?;
        while below_hi < n {
            if hi >= config.epsilon_ceiling {
                return Err(Error::SearchExhausted {
                    n,
                    ceiling: config.epsilon_ceiling,
                });
            }
            lo = hi;
            below_lo = below_hi;
            hi = (2.0 * hi.max(1.0)).min(config.epsilon_ceiling);
            below_hi = below(hi)?;
        }

        let mut iterations = 0;
        while !(below_lo == n - 1 && below_hi == n) {
            iterations += 1;
            if iterations > 200 || hi - lo <= f64::EPSILON * hi.abs() {
                return Err(Error::SearchExhausted {
                    n,
                    ceiling: config.epsilon_ceiling,
                });
            }
            let mid = 0.5 * (lo + hi);
            let c = below(mid)?;
            if c >= n {
                hi = mid;
                below_hi = c;
            } else {
                lo = mid;
                below_lo = c;
            }
        }

        let boundary = |eps: f64| integrate_radial_with(problem, eps, config, false).map(|s| s.boundary_value);
        let epsilon = roots::brent(boundary, lo, hi, 0.0, config.rtol, 200)?;

        let check = integrate_radial_with(problem, epsilon, config, false)?;
        if check.interior_nodes != n - 1 {
            return Err(Error::NodeMismatch {
                n,
                epsilon,
                nodes: check.interior_nodes,
                expected: n - 1,
            });
        }
        modes.push(RadialMode {
            n,
            l: problem.l,
            epsilon,
        });
        lo = hi;
        below_lo = below_hi;
    }
    Ok(Spectrum {
        problem: *problem,
        modes,
    })
}

/// Solves many problems in parallel; output order matches input order.
pub fn solve_many(problems: &[RadialProblem], count: usize) -> Result<Vec<Spectrum>> {
    problems.par_iter().map(|p| solve_modes(p, count)).collect()
}

/// Samples `χ(ξ_max; ε)` on an even grid of `samples` points in `[eps_lo, eps_hi]`.
pub fn boundary_residual_curve(
    problem: &RadialProblem,
    eps_lo: f64,
    eps_hi: f64,
    samples: usize,
) -> Result<Vec<(f64, f64)>> {
    if samples < 2 || eps_lo.is_nan() || eps_hi.is_nan() || eps_hi <= eps_lo {
        return Err(Error::Domain("need samples >= 2 and eps_hi > eps_lo".into()));
    }
    (0..samples)
        .into_par_iter()
        .map(|i| {
            let eps = eps_lo + (eps_hi - eps_lo) * i as f64 / (samples - 1) as f64;
            integrate_radial(problem, eps).map(|s| (eps, s.boundary_value))
        })
        .collect()
}

/// Number of eigenvalues of the symmetric tridiagonal matrix below `x`
/// (Sturm count via the LDLᵀ pivots).
fn sturm_count(diag: &[f64], off: f64, x: f64) -> usize {
    let off2 = off * off;
    let tiny = f64::MIN_POSITIVE.sqrt();
    let mut count = 0;
    let mut d = 1.0;
    for (i, &a) in diag.iter().enumerate() {
        d = if i == 0 { a - x } else { a - x - off2 / d };
        if d == 0.0 {
            d = -tiny;
        }
        if d < 0.0 {
            count += 1;
        }
    }
    count
}

/// Lowest `count` eigenvalues of `-u'' + V u = λu` on `[0, xi_max]` with
/// Dirichlet ends, central differences on `grid_points` intervals.
pub fn finite_difference_eigenvalues<V>(xi_max: f64, grid_points: usize, count: usize, potential: V) -> Result<Vec<f64>>
where
    V: Fn(f64) -> f64,
{
    if grid_points < 1000 {
        return Err(Error::Domain(format!("grid_points must be >= 1000, got {grid_points}")));
    }
    if !(xi_max.is_finite() && xi_max > 0.0) {
        return Err(Error::Domain(format!("xi_max must be > 0, got {xi_max}")));
    }
    let interior = grid_points - 1;
    if count == 0 || count > interior {
        return Err(Error::Domain(format!("count must be in 1..={interior}, got {count}")));
    }
    let h = xi_max / grid_points as f64;
    let inv_h2 = 1.0 / (h * h);
    let diag: Vec<f64> = (1..grid_points)
        .map(|i| 2.0 * inv_h2 + potential(i as f64 * h))
        .collect();
    let off = -inv_h2;

    // Gershgorin bounds
    let lower = diag.iter().fold(f64::INFINITY, |m, &d| m.min(d)) - 2.0 * inv_h2;
    let upper = diag.iter().fold(f64::NEG_INFINITY, |m, &d| m.max(d)) + 2.0 * inv_h2;

    let mut out = Vec::with_capacity(count);
    let mut floor = lower;
    for k in 0..count {
        let (mut lo, mut hi) = (floor, upper);
        for _ in 0..200 {
            if hi - lo <= 2.0 * f64::EPSILON * lo.abs().max(hi.abs()) + f64::MIN_POSITIVE {
                break;
            }
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if sturm_count(&diag, off, mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let lambda = 0.5 * (lo + hi);
        out.push(lambda);
        floor = lo;
    }
    Ok(out)
}

/// Finite-difference oracle for [`solve_modes`].
pub fn finite_difference_spectrum(problem: &RadialProblem, grid_points: usize, count: usize) -> Result<Spectrum> {
    let eps = finite_difference_eigenvalues(problem.xi_max, grid_points, count, |xi| problem.potential(xi))?;
    Ok(Spectrum {
        problem: *problem,
        modes: eps
            .into_iter()
            .enumerate()
            .map(|(i, epsilon)| RadialMode {
                n: i + 1,
                l: problem.l,
                epsilon,
            })
            .collect(),
    })
}

/// Hard-wall energy in the flat (large-ξ, Bessel-asymptotic) limit,
/// `unit/ρ_B² · [(n + ½)π + lπ/2 + π/4]²`. Here `n` starts at 0.
pub fn flat_energy(n: u32, l: u32, rho_b: f64, energy_unit: f64) -> Result<f64> {
    if !(rho_b.is_finite() && rho_b > 0.0) {
        return Err(Error::Domain(format!("rho_B must be > 0, got {rho_b}")));
    }
    if !(energy_unit.is_finite() && energy_unit > 0.0) {
        return Err(Error::Domain(format!("energy unit must be > 0, got {energy_unit}")));
    }
    let pi = std::f64::consts::PI;
    let k = (f64::from(n) + 0.5) * pi + f64::from(l) * pi / 2.0 + pi / 4.0;
    Ok(energy_unit / (rho_b * rho_b) * k * k)
}
