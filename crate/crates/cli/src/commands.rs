//! Subcommand bodies. Each validates its flags, runs the core routines and
//! returns the rendered output.

use rayon::prelude::*;
use serde::Serialize;

use helix_otto::geometry::{geometric_potential, height_for_constant_area, helicoid_area, principal_curvatures};
use helix_otto::otto::{r_grid, sweep_model};
use helix_otto::spectrum::{integrate_radial, solve_many};
use helix_otto::{BathParams, CycleModel, HelicoidGeometry, Mode, RadialProblem, Substance, SweepRow};

use crate::args::{
    BathArgs, CycleArgs, Format, GeometryArgs, PlotKind, Preset, SpectrumArgs, SubstanceArgs, SweepArgs,
};
use crate::format::{csv, g12, g12_opt};
use crate::plot::{Marker, Plot, Series};

/// Why a command stopped; decides the exit status.
#[derive(Debug)]
pub enum Failure {
    /// Bad flags or flag values.
    Usage(String),
    /// A solver or model error.
    Numeric(String),
    /// Reading or writing files.
    Io(String),
}

impl From<helix_otto::Error> for Failure {
    fn from(e: helix_otto::Error) -> Self {
        Failure::Numeric(e.to_string())
    }
}

type Outcome = Result<String, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn positive(name: &str, v: f64) -> Result<f64, Failure> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(usage(format!("--{name} must be a finite number > 0, got {v}")))
    }
}

fn non_negative(name: &str, v: f64) -> Result<f64, Failure> {
    if v.is_finite() && v >= 0.0 {
        Ok(v)
    } else {
        Err(usage(format!("--{name} must be a finite number >= 0, got {v}")))
    }
}

fn in_range(name: &str, v: usize, lo: usize, hi: usize) -> Result<usize, Failure> {
    if (lo..=hi).contains(&v) {
        Ok(v)
    } else {
        Err(usage(format!("--{name} must lie in {lo}..={hi}, got {v}")))
    }
}

fn json<T: Serialize + ?Sized>(value: &T) -> Outcome {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Failure::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

#[derive(Serialize)]
struct CurvatureRow {
    rho: f64,
    kappa1: f64,
    kappa2: f64,
    mean: f64,
    gaussian: f64,
    v_geom: f64,
}

#[derive(Serialize)]
struct GeometryReport {
    omega: f64,
    omega_r: f64,
    radius: f64,
    height: f64,
    area: f64,
    omega2: Option<f64>,
    companion_height: Option<f64>,
    height_ratio: Option<f64>,
    samples: Vec<CurvatureRow>,
}

pub fn geometry(a: &GeometryArgs) -> Outcome {
    let radius = positive("radius", a.radius)?;
    let height = positive("height", a.height)?;
    in_range("samples", a.samples, 2, 1_000_000)?;
    let omega = match (a.omega, a.omega_r) {
        (Some(w), _) => non_negative("omega", w)?,
        (None, Some(x)) => non_negative("omega-r", x)? / radius,
        (None, None) => return Err(usage("one of --omega or --omega-r is required")),
    };
    let omega2 = match (a.omega2, a.omega_r2) {
        (Some(w), _) => Some(non_negative("omega2", w)?),
        (None, Some(x)) => Some(non_negative("omega-r2", x)? / radius),
        (None, None) => None,
    };
    let g = HelicoidGeometry::new(omega, radius, height)?;
    let samples = (0..a.samples)
        .map(|i| {
            // land exactly on R at the last sample
            let rho = if i + 1 == a.samples {
                radius
            } else {
                radius * i as f64 / (a.samples - 1) as f64
            };
            let c = principal_curvatures(&g, rho)?;
            Ok(CurvatureRow {
                rho,
                kappa1: c.kappa1,
                kappa2: c.kappa2,
                mean: c.mean,
                gaussian: c.gaussian,
                v_geom: geometric_potential(&g, rho, 1.0)?,
            })
        })
        .collect::<helix_otto::Result<Vec<_>>>()?;
    let companion_height = omega2
        .map(|w2| height_for_constant_area(omega, w2, radius, height))
        .transpose()?;
    let report = GeometryReport {
        omega,
        omega_r: omega * radius,
        radius,
        height,
        area: helicoid_area(&g),
        omega2,
        companion_height,
        height_ratio: companion_height.map(|h2| h2 / height),
        samples,
    };
    match a.format {
        Format::Json => json(&report),
        Format::Csv => Ok(csv(
            &["rho", "kappa1", "kappa2", "mean", "gaussian", "v_geom"],
            report.samples.iter().map(|s| {
                vec![
                    g12(s.rho),
                    g12(s.kappa1),
                    g12(s.kappa2),
                    g12(s.mean),
                    g12(s.gaussian),
                    g12(s.v_geom),
                ]
            }),
        )),
        Format::Svg => {
            let col = |f: fn(&CurvatureRow) -> f64, label: &str| {
                Series::from_points(label, report.samples.iter().map(|s| (s.rho, f(s))))
            };
            Ok(Plot {
                title: format!("Helicoid curvatures, omega R = {}", g12(report.omega_r)),
                x_label: "rho".into(),
                y_label: "curvature, V_S (units of hbar^2/2m)".into(),
                series: vec![
                    col(|s| s.kappa1, "kappa1"),
                    col(|s| s.kappa2, "kappa2"),
                    col(|s| s.mean, "M"),
                    col(|s| s.gaussian, "K_G"),
                    col(|s| s.v_geom, "V_S"),
                ],
                markers: Vec::new(),
                zero_line: true,
                x_range: None,
            }
            .render())
        }
    }
}

#[derive(Serialize)]
struct SpectrumRow {
    xi_max: f64,
    l: u32,
    n: usize,
    epsilon: f64,
}

pub fn spectrum(a: &SpectrumArgs) -> Outcome {
    let xi_max = positive("xi-max", a.xi_max)?;
    in_range("count", a.count, 1, 10_000)?;
    if a.l_max > 10_000 {
        return Err(usage(format!("--l-max must be <= 10000, got {}", a.l_max)));
    }
    in_range("samples", a.samples, 2, 1_000_000)?;
    let problems = (0..=a.l_max)
        .map(|l| RadialProblem::new(xi_max, l))
        .collect::<helix_otto::Result<Vec<_>>>()?;
    let spectra = solve_many(&problems, a.count)?;
    let rows: Vec<SpectrumRow> = spectra
        .iter()
        .flat_map(|s| {
            s.modes.iter().map(move |m| SpectrumRow {
                xi_max,
                l: m.l,
                n: m.n,
                epsilon: m.epsilon,
            })
        })
        .collect();
    match a.format {
        Format::Csv => Ok(csv(
            &["xi_max", "l", "n", "epsilon"],
            rows.iter()
                .map(|r| vec![g12(r.xi_max), r.l.to_string(), r.n.to_string(), g12(r.epsilon)]),
        )),
        Format::Json => json(&rows),
        Format::Svg => {
            // the residual is scaled by the trajectory peak so curves for
            // different l share an axis
            let top = rows.iter().map(|r| r.epsilon).fold(f64::NEG_INFINITY, f64::max);
            let lo = -0.5;
            let hi = top + 0.1 * (top - lo) + 0.5;
            let mut series = Vec::new();
            for p in &problems {
                let points = (0..a.samples)
                    .into_par_iter()
                    .map(|i| {
                        let eps = lo + (hi - lo) * i as f64 / (a.samples - 1) as f64;
                        integrate_radial(p, eps).map(|s| (eps, s.boundary_value / s.peak.max(f64::MIN_POSITIVE)))
                    })
                    .collect::<helix_otto::Result<Vec<_>>>()?;
                series.push(Series::from_points(format!("l = {}", p.l()), points));
            }
            let markers = rows
                .iter()
                .map(|r| Marker {
                    x: r.epsilon,
                    y: 0.0,
                    label: format!("n={} l={}: {}", r.n, r.l, g12(r.epsilon)),
                    color: r.l as usize,
                })
                .collect();
            Ok(Plot {
                title: format!("Boundary value vs energy, xi_max = {}", g12(xi_max)),
                x_label: "epsilon".into(),
                y_label: "chi(xi_max; epsilon) / max|chi|".into(),
                series,
                markers,
                zero_line: true,
                x_range: None,
            }
            .render())
        }
    }
}

fn preset_substance(p: Preset) -> Substance {
    match p {
        Preset::Flat => Substance::Flat,
        Preset::CurvedUp => Substance::Helicoid {
            xi_cold: 0.5,
            xi_hot: 1.0,
        },
        Preset::CurvedDown => Substance::Helicoid {
            xi_cold: 1.0,
            xi_hot: 0.5,
        },
    }
}

fn default_r_grid(p: Preset) -> (f64, f64, f64) {
    match p {
        Preset::Flat => (0.2, 8.0, 0.01),
        Preset::CurvedUp => (0.3, 3.0, 0.01),
        Preset::CurvedDown => (1.0, 10.0, 0.01),
    }
}

fn resolve_substance(s: &SubstanceArgs) -> Result<Substance, Failure> {
    match (s.preset, s.flat, s.xi_cold, s.xi_hot) {
        (Some(p), ..) => Ok(preset_substance(p)),
        (None, true, ..) => Ok(Substance::Flat),
        (None, false, Some(c), Some(h)) => Ok(Substance::Helicoid {
            xi_cold: positive("xi-cold", c)?,
            xi_hot: positive("xi-hot", h)?,
        }),
        _ => Err(usage(
            "choose a substance: --preset, --flat, or both --xi-cold and --xi-hot",
        )),
    }
}

fn resolve_bath(b: &BathArgs) -> Result<(BathParams, usize), Failure> {
    let bath = BathParams::new(positive("theta", b.theta)?, positive("varsigma", b.varsigma)?)?;
    Ok((bath, in_range("level-count", b.level_count, 2, 64)?))
}

fn substance_label(s: Substance) -> String {
    match s {
        Substance::Flat => "flat".into(),
        Substance::Helicoid { xi_cold, xi_hot } => format!("helicoid xi {} -> {}", g12(xi_cold), g12(xi_hot)),
    }
}

#[derive(Serialize)]
struct CycleReport {
    substance: &'static str,
    xi_cold: Option<f64>,
    xi_hot: Option<f64>,
    r: f64,
    theta: f64,
    varsigma: f64,
    level_count: usize,
    q_cold: f64,
    q_hot: f64,
    work: f64,
    efficiency: Option<f64>,
    cop: Option<f64>,
    mode: Mode,
    boundary: bool,
    alpha: Option<f64>,
    alpha_min: Option<f64>,
    warning: Option<String>,
    cold_levels: Vec<f64>,
    hot_levels: Vec<f64>,
}

pub fn cycle(a: &CycleArgs) -> Outcome {
    let substance = resolve_substance(&a.substance)?;
    let (bath, level_count) = resolve_bath(&a.bath)?;
    let r = positive("r", a.r)?;
    let model = CycleModel::new(substance, bath, level_count)?;
    let levels = model.levels_at(r)?;
    let result = model.evaluate(r)?;
    let alpha = model.config(r)?.alpha();
    let alpha_min = model.alpha_min().transpose()?;
    let warning = match (alpha, alpha_min) {
        (Some(al), Some(min)) if al <= min => Some(format!(
            "alpha = {} <= alpha_min = {}: positive work is impossible",
            g12(al),
            g12(min)
        )),
        _ => None,
    };
    let (kind, xi_cold, xi_hot) = match substance {
        Substance::Flat => ("flat", None, None),
        Substance::Helicoid { xi_cold, xi_hot } => ("helicoid", Some(xi_cold), Some(xi_hot)),
    };
    json(&CycleReport {
        substance: kind,
        xi_cold,
        xi_hot,
        r,
        theta: bath.theta,
        varsigma: bath.varsigma,
        level_count,
        q_cold: result.q_cold,
        q_hot: result.q_hot,
        work: result.work,
        efficiency: result.efficiency,
        cop: result.cop,
        mode: result.mode,
        boundary: result.boundary,
        alpha,
        alpha_min,
        warning,
        cold_levels: levels.cold().to_vec(),
        hot_levels: levels.hot().to_vec(),
    })
}

fn parse_range(s: &str) -> Result<(f64, f64, f64), Failure> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || usage(format!("--r expects lo:hi:step, got `{s}`"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let v: Vec<f64> = parts
        .iter()
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| bad())?;
    Ok((v[0], v[1], v[2]))
}

const MAX_GRID: f64 = 1e7;

pub fn sweep(a: &SweepArgs) -> Outcome {
    let substance = resolve_substance(&a.substance)?;
    let (bath, level_count) = resolve_bath(&a.bath)?;
    let (lo, hi, step) = match (&a.r, a.substance.preset) {
        (Some(s), _) => parse_range(s)?,
        (None, Some(p)) => default_r_grid(p),
        (None, None) => return Err(usage("--r lo:hi:step is required without --preset")),
    };
    positive("r lower bound", lo)?;
    positive("r step", step)?;
    if !(hi.is_finite() && hi >= lo) {
        return Err(usage(format!("--r upper bound must be >= lower bound, got {lo}:{hi}")));
    }
    if (hi - lo) / step > MAX_GRID {
        return Err(usage(format!("--r grid would exceed {MAX_GRID} points")));
    }
    let grid = r_grid(lo, hi, step).map_err(|e| usage(e.to_string()))?;
    let model = CycleModel::new(substance, bath, level_count)?;
    let rows = sweep_model(&model, &grid)?;
    match a.format {
        Format::Csv => Ok(csv(
            &["r", "q_cold", "q_hot", "work", "eta_norm", "cop_norm", "mode"],
            rows.iter().map(|r| {
                vec![
                    g12(r.r),
                    g12(r.q_cold),
                    g12(r.q_hot),
                    g12(r.work),
                    g12_opt(r.eta_norm),
                    g12_opt(r.cop_norm),
                    r.mode.as_str().to_string(),
                ]
            }),
        )),
        Format::Json => json(&rows),
        Format::Svg => Ok(sweep_plot(&rows, a.plot, substance).render()),
    }
}

fn sweep_plot(rows: &[SweepRow], kind: PlotKind, substance: Substance) -> Plot {
    let name = substance_label(substance);
    let col =
        |label: &str, f: fn(&SweepRow) -> Option<f64>| Series::from_optional(label, rows.iter().map(|r| (r.r, f(r))));
    let (title, y_label, series) = match kind {
        PlotKind::Heats => (
            format!("Heat exchanges and work, {name}"),
            "Q~, W~ (units of hbar^2/2m rho_c^2)",
            vec![
                col("W~", |r| Some(r.work)),
                col("Q~_c", |r| Some(r.q_cold)),
                col("Q~_h", |r| Some(r.q_hot)),
            ],
        ),
        PlotKind::Efficiency => (
            format!("Engine efficiency, {name}"),
            "eta / (1 - 1/theta)",
            vec![col("eta / eta_Carnot", |r| r.eta_norm)],
        ),
        PlotKind::Cop => (
            format!("Refrigerator COP, {name}"),
            "COP (theta - 1)",
            vec![col("COP / COP_Carnot", |r| r.cop_norm)],
        ),
    };
    Plot {
        title,
        x_label: "r = rho_c / rho_h".into(),
        y_label: y_label.into(),
        series,
        markers: Vec::new(),
        zero_line: kind == PlotKind::Heats,
        x_range: rows.first().zip(rows.last()).map(|(a, b)| (a.r, b.r)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_parsing() {
        assert_eq!(parse_range("0.2:8:0.01").unwrap(), (0.2, 8.0, 0.01));
        assert!(matches!(parse_range("1:2"), Err(Failure::Usage(_))));
        assert!(matches!(parse_range("a:2:1"), Err(Failure::Usage(_))));
    }

    #[test]
    fn substance_resolution() {
        let s = SubstanceArgs {
            preset: None,
            flat: false,
            xi_cold: None,
            xi_hot: None,
        };
        assert!(matches!(resolve_substance(&s), Err(Failure::Usage(_))));
        let s = SubstanceArgs {
            preset: Some(Preset::CurvedDown),
            ..s
        };
        assert_eq!(
            resolve_substance(&s).unwrap(),
            Substance::Helicoid {
                xi_cold: 1.0,
                xi_hot: 0.5
            }
        );
    }

    #[test]
    fn validation_helpers() {
        assert!(positive("x", 0.0).is_err());
        assert!(positive("x", f64::NAN).is_err());
        assert!(non_negative("x", 0.0).is_ok());
        assert!(in_range("n", 0, 1, 3).is_err());
    }
}
