//! Adaptive Dormand–Prince 5(4) integrator for small first-order systems.

/// Step-size controller settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub rtol: f64,
    pub atol: f64,
    /// Upper bound on a single step; `f64::INFINITY` leaves it to the controller.
    pub h_max: f64,
    pub max_steps: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            rtol: 1e-12,
            atol: 1e-14,
            h_max: f64::INFINITY,
            max_steps: 2_000_000,
        }
    }
}

/// Why an integration stopped early.
#[derive(Debug, Clone, PartialEq)]
pub enum OdeFailure {
    StepUnderflow { x: f64, h: f64 },
    TooManySteps { x: f64 },
    NonFinite { x: f64 },
}

impl std::fmt::Display for OdeFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            OdeFailure::StepUnderflow { x, h } => write!(f, "step size {h:e} underflowed at x = {x}"),
            OdeFailure::TooManySteps { x } => write!(f, "step budget exhausted at x = {x}"),
            OdeFailure::NonFinite { x } => write!(f, "non-finite state at x = {x}"),
        }
    }
}

// Dormand–Prince tableau.
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

// b - b* (fifth minus fourth order weights)
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

fn axpy<const N: usize>(y: &[f64; N], terms: &[(f64, &[f64; N])], h: f64) -> [f64; N] {
    let mut out = *y;
    for (c, k) in terms {
        for i in 0..N {
            out[i] += h * c * k[i];
        }
    }
    out
}

/// Integrates `y' = f(x, y)` from `x0` to `x_end > x0`.
///
/// `observer` sees the initial point, every accepted step and every entry of
/// `stops` (sorted, inside `(x0, x_end]`), where the integrator lands exactly.
/// Returns the state at `x_end`.
pub fn integrate<const N: usize, F, O>(
    mut f: F,
    x0: f64,
    y0: [f64; N],
    x_end: f64,
    stops: &[f64],
    tol: &Tolerances,
    mut observer: O,
) -> Result<[f64; N], OdeFailure>
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
    O: FnMut(f64, &[f64; N]),
{
    debug_assert!(x_end > x0);
    let span = x_end - x0;
    let mut x = x0;
    let mut y = y0;
    observer(x, &y);

    let mut k1 = f(x, &y);
    let mut h = (0.01 * span).min(tol.h_max);
    let h_floor = 1e-14 * span.max(x_end.abs());
    let mut stop_iter = stops.iter().copied().filter(|&s| s > x0 && s < x_end).peekable();

    for _ in 0..tol.max_steps {
        let target = stop_iter.peek().copied().unwrap_or(x_end);
        let mut step = h.min(target - x);
        let landing = step >= target - x;
        if landing {
            step = target - x;
        }

        let k2 = f(x + C2 * step, &axpy(&y, &[(A21, &k1)], step));
        let k3 = f(x + C3 * step, &axpy(&y, &[(A31, &k1), (A32, &k2)], step));
        let k4 = f(x + C4 * step, &axpy(&y, &[(A41, &k1), (A42, &k2), (A43, &k3)], step));
        let k5 = f(
            x + C5 * step,
            &axpy(&y, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)], step),
        );
        let k6 = f(
            x + step,
            &axpy(&y, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)], step),
        );
        let y_new = axpy(&y, &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)], step);
        let k7 = f(x + step, &y_new);

        let mut err = 0.0f64;
        for i in 0..N {
            let e = step * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let scale = tol.atol + tol.rtol * y[i].abs().max(y_new[i].abs());
            err = err.max((e / scale).abs());
        }
        if !err.is_finite() || y_new.iter().any(|v| !v.is_finite()) {
            if step <= h_floor {
                return Err(OdeFailure::NonFinite { x });
            }
            h = 0.1 * step;
            continue;
        }

        if err <= 1.0 {
            x = if landing { target } else { x + step };
            y = y_new;
            k1 = k7;
            if landing {
                stop_iter.next();
            }
            observer(x, &y);
            if x >= x_end {
                return Ok(y);
            }
            let grow = if err == 0.0 {
                5.0
            } else {
                (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
            };
            // keep the controller's estimate when a short landing step was forced
            h = (step * grow).max(if landing { h } else { 0.0 }).min(tol.h_max);
        } else {
            h = step * (0.9 * err.powf(-0.2)).clamp(0.1, 1.0);
            if h < h_floor {
                return Err(OdeFailure::StepUnderflow { x, h });
            }
        }
    }
    Err(OdeFailure::TooManySteps { x })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn harmonic_oscillator() {
        let tol = Tolerances::default();
        let y = integrate(
            |_, y: &[f64; 2]| [y[1], -y[0]],
            0.0,
            [0.0, 1.0],
            10.0,
            &[],
            &tol,
            |_, _| {},
        )
        .unwrap();
        assert_relative_eq!(y[0], 10f64.sin(), epsilon = 1e-10);
        assert_relative_eq!(y[1], 10f64.cos(), epsilon = 1e-10);
    }

    #[test]
    fn lands_on_stops() {
        let tol = Tolerances::default();
        let mut seen = Vec::new();
        integrate(
            |_, y: &[f64; 1]| [y[0]],
            0.0,
            [1.0],
            1.0,
            &[0.25, 0.5],
            &tol,
            |x, y| seen.push((x, y[0])),
        )
        .unwrap();
        for s in [0.25, 0.5, 1.0] {
            let &(x, v) = seen.iter().find(|(x, _)| *x == s).expect("stop visited");
            assert_relative_eq!(v, x.exp(), max_relative = 1e-11);
        }
    }

    #[test]
    fn step_cap_is_respected() {
        let tol = Tolerances {
            h_max: 0.01,
            ..Tolerances::default()
        };
        let mut xs = Vec::new();
        integrate(|_, _: &[f64; 1]| [1.0], 0.0, [0.0], 1.0, &[], &tol, |x, _| xs.push(x)).unwrap();
        assert!(xs.windows(2).all(|w| w[1] - w[0] <= 0.01 + 1e-15));
    }

    #[test]
    fn blow_up_reports_failure() {
        let tol = Tolerances::default();
        // y' = y², y(0) = 1 blows up at x = 1
        let r = integrate(|_, y: &[f64; 1]| [y[0] * y[0]], 0.0, [1.0], 2.0, &[], &tol, |_, _| {});
        assert!(r.is_err());
    }
}
