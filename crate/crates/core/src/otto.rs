//! Quantum Otto cycle over a discrete spectrum.
//!
//! Energies are measured in `ħ²/(2m ρ_c²)`. A level with dimensionless
//! eigenvalue `ε(ξ)` sits at `ξ_c² ε(ξ_c)` at the cold endpoint and at
//! `r² ξ_h² ε(ξ_h)` at the hot endpoint, with `r = ρ_c/ρ_h`. The flat strip uses
//! the hard-wall Bessel levels instead, scaled by `1` and `r²`.
//!
//! Populations are thermal with inverse temperatures `ς` (cold) and `ς/θ`
//! (hot). Heats follow the general sums
//!
//! ```text
//! Q_h = Σ E_n^h (p_n^h - p_n^c),   Q_c = Σ E_n^c (p_n^c - p_n^h),   W = Q_h + Q_c
//! ```

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::roots;
use crate::spectrum::{flat_energy, solve_modes, RadialProblem};

/// Bath temperatures as `θ = T_h/T_c` and `ς = ħ²/(2m k_B ρ_c² T_c)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BathParams {
    pub theta: f64,
    pub varsigma: f64,
}

impl BathParams {
    pub fn new(theta: f64, varsigma: f64) -> Result<Self> {
        if !(theta.is_finite() && theta > 0.0) {
            return Err(Error::Domain(format!("theta must be > 0, got {theta}")));
        }
        if !(varsigma.is_finite() && varsigma > 0.0) {
            return Err(Error::Domain(format!("varsigma must be > 0, got {varsigma}")));
        }
        Ok(Self { theta, varsigma })
    }

    /// Inverse temperature of the cold bath in level-energy units.
    pub fn beta_cold(&self) -> f64 {
        self.varsigma
    }

    pub fn beta_hot(&self) -> f64 {
        self.varsigma / self.theta
    }

    /// Carnot efficiency `1 - T_c/T_h`.
    pub fn carnot_efficiency(&self) -> f64 {
        1.0 - 1.0 / self.theta
    }

    /// Carnot refrigerator COP `T_c/(T_h - T_c)`.
    pub fn carnot_cop(&self) -> f64 {
        1.0 / (self.theta - 1.0)
    }
}

impl Default for BathParams {
    /// `T_h = 12 T_c`, `ς = 1`.
    fn default() -> Self {
        Self {
            theta: 12.0,
            varsigma: 1.0,
        }
    }
}

/// What the working substance is made of.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Substance {
    /// Hard-wall levels of a flat sample.
    Flat,
    /// Helicoid stripe of dimensionless width `xi_cold` at the cold endpoint
    /// and `xi_hot` at the hot endpoint.
    Helicoid { xi_cold: f64, xi_hot: f64 },
}

impl Substance {
    fn validate(&self) -> Result<()> {
        if let Substance::Helicoid { xi_cold, xi_hot } = *self {
            for (name, v) in [("xi_cold", xi_cold), ("xi_hot", xi_hot)] {
                if !(v.is_finite() && v > 0.0) {
                    return Err(Error::Domain(format!("{name} must be > 0, got {v}")));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CycleConfig {
    pub substance: Substance,
    /// Compression ratio `ρ_c/ρ_h`.
    pub r: f64,
    pub bath: BathParams,
    pub level_count: usize,
}

impl CycleConfig {
    pub fn new(substance: Substance, r: f64, bath: BathParams, level_count: usize) -> Result<Self> {
        substance.validate()?;
        if !(r.is_finite() && r > 0.0) {
            return Err(Error::Domain(format!("r must be > 0, got {r}")));
        }
        if level_count < 2 {
            return Err(Error::Domain(format!("level_count must be >= 2, got {level_count}")));
        }
        Ok(Self {
            substance,
            r,
            bath,
            level_count,
        })
    }

    /// `α = (ω_h/ω_c)² = r² (ξ_h/ξ_c)²`; undefined for the flat strip.
    pub fn alpha(&self) -> Option<f64> {
        match self.substance {
            Substance::Flat => None,
            Substance::Helicoid { xi_cold, xi_hot } => Some((self.r * xi_hot / xi_cold).powi(2)),
        }
    }
}

/// Quantum numbers of a working level. For helicoid levels `n` starts at 1;
/// for flat levels it is the hard-wall index starting at 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelLabel {
    pub n: usize,
    pub l: u32,
}

/// Level energies at the two stroke endpoints, same labels in the same order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorkingLevels {
    cold: Vec<f64>,
    hot: Vec<f64>,
    labels: Vec<LevelLabel>,
}

impl WorkingLevels {
    pub fn new(cold: Vec<f64>, hot: Vec<f64>, labels: Vec<LevelLabel>) -> Result<Self> {
        if cold.len() != hot.len() || cold.len() != labels.len() {
            return Err(Error::Contract(format!(
                "level lists differ in length: cold {}, hot {}, labels {}",
                cold.len(),
                hot.len(),
                labels.len()
            )));
        }
        if cold.len() < 2 {
            return Err(Error::Contract("need at least two levels".into()));
        }
        for (name, list) in [("cold", &cold), ("hot", &hot)] {
            if list.iter().any(|e| !e.is_finite()) {
                return Err(Error::Contract(format!("{name} levels must be finite")));
            }
            if list.windows(2).any(|w| w[1] <= w[0]) {
                return Err(Error::Contract(format!(
                    "{name} levels must be strictly increasing: {list:?}"
                )));
            }
        }
        Ok(Self { cold, hot, labels })
    }

    /// Unlabelled levels, numbered 1.. with `l = 0`.
    pub fn unlabelled(cold: Vec<f64>, hot: Vec<f64>) -> Result<Self> {
        let labels = (1..=cold.len()).map(|n| LevelLabel { n, l: 0 }).collect();
        Self::new(cold, hot, labels)
    }

    pub fn cold(&self) -> &[f64] {
        &self.cold
    }

    pub fn hot(&self) -> &[f64] {
        &self.hot
    }

    pub fn labels(&self) -> &[LevelLabel] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.cold.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cold.is_empty()
    }

    /// `Δ_c = E_e^c - E_g^c` for the lowest two levels.
    pub fn gap_cold(&self) -> f64 {
        self.cold[1] - self.cold[0]
    }

    /// `Δ_h = E_e^h - E_g^h` for the lowest two levels.
    pub fn gap_hot(&self) -> f64 {
        self.hot[1] - self.hot[0]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Engine,
    Refrigerator,
    Heater,
}

impl Mode {
    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::Engine => "engine",
            Mode::Refrigerator => "refrigerator",
            Mode::Heater => "heater",
        }
    }
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A mode label; `boundary` marks an exact zero in one of the three sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub mode: Mode,
    pub boundary: bool,
}

/// Heats and work of one cycle, dimensionless in `ħ²/(2m ρ_c²)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CycleResult {
    pub q_cold: f64,
    pub q_hot: f64,
    pub work: f64,
    pub efficiency: Option<f64>,
    pub cop: Option<f64>,
    pub mode: Mode,
    pub boundary: bool,
}

/// Thermal occupations `e^{-βE_n}/Z`, shifted by the lowest level so large
/// `βE` cannot overflow. `beta = 0` gives the uniform distribution.
pub fn boltzmann_populations(levels: &[f64], beta: f64) -> Result<Vec<f64>> {
    if levels.is_empty() {
        return Err(Error::Domain("no levels".into()));
    }
    if !(beta.is_finite() && beta >= 0.0) {
        return Err(Error::Domain(format!(
            "inverse temperature must be finite and >= 0, got {beta}"
        )));
    }
    let e_min = levels.iter().copied().fold(f64::INFINITY, f64::min);
    let weights: Vec<f64> = levels.iter().map(|&e| (-beta * (e - e_min)).exp()).collect();
    let z: f64 = weights.iter().sum();
    Ok(weights.into_iter().map(|w| w / z).collect())
}

/// Sign-based operation mode.
pub fn classify_mode(q_cold: f64, q_hot: f64, work: f64) -> Classification {
    let boundary = q_cold == 0.0 || q_hot == 0.0 || work == 0.0;
    let mode = if work > 0.0 && q_hot > 0.0 && q_cold < 0.0 {
        Mode::Engine
    } else if work < 0.0 && q_cold > 0.0 && q_hot < 0.0 {
        Mode::Refrigerator
    } else {
        Mode::Heater
    };
    Classification { mode, boundary }
}

/// Runs the four strokes on `levels` with the baths of `config`.
pub fn cycle_heats(config: &CycleConfig, levels: &WorkingLevels) -> Result<CycleResult> {
    if levels.len() != config.level_count {
        return Err(Error::Contract(format!(
            "config expects {} levels, got {}",
            config.level_count,
            levels.len()
        )));
    }
    heats_for(&config.bath, levels)
}

fn heats_for(bath: &BathParams, levels: &WorkingLevels) -> Result<CycleResult> {
    let p_cold = boltzmann_populations(&levels.cold, bath.beta_cold())?;
    let p_hot = boltzmann_populations(&levels.hot, bath.beta_hot())?;
    // Σ (p_n^h - p_n^c) = 0, so energies are taken relative to each endpoint's
    // ground level; otherwise the ground term is lost once p_0 rounds to 1.
    let (hot0, cold0) = (levels.hot[0], levels.cold[0]);
    let mut q_hot = 0.0;
    let mut q_cold = 0.0;
    for i in 1..levels.len() {
        let dp = p_hot[i] - p_cold[i];
        q_hot += (levels.hot[i] - hot0) * dp;
        q_cold -= (levels.cold[i] - cold0) * dp;
    }
    let work = q_hot + q_cold;
    let Classification { mode, boundary } = classify_mode(q_cold, q_hot, work);
    Ok(CycleResult {
        q_cold,
        q_hot,
        work,
        efficiency: (mode == Mode::Engine).then(|| work / q_hot),
        cop: (mode == Mode::Refrigerator).then(|| q_cold / work.abs()),
        mode,
        boundary,
    })
}

/// Lower bound `δ_c/δ_h` on `α` for the gap to widen on the hot side.
pub fn alpha_bound(delta_c: f64, delta_h: f64) -> Result<f64> {
    if !(delta_c > 0.0 && delta_h > 0.0) {
        return Err(Error::Domain(format!("gaps must be > 0, got {delta_c} and {delta_h}")));
    }
    Ok(delta_c / delta_h)
}

/// Two-level efficiency `1 - Δ_c/Δ_h`; meaningful in engine mode only.
pub fn efficiency(levels: &WorkingLevels) -> Result<f64> {
    let gap_hot = levels.gap_hot();
    if gap_hot == 0.0 {
        return Err(Error::DegenerateSpectrum("hot gap is zero".into()));
    }
    Ok(1.0 - levels.gap_cold() / gap_hot)
}

/// `Q_c/|W|` for a refrigerator cycle.
pub fn coefficient_of_performance(result: &CycleResult) -> Result<f64> {
    if result.mode != Mode::Refrigerator {
        return Err(Error::Contract(format!(
            "COP needs refrigerator mode, cycle is {}",
            result.mode
        )));
    }
    Ok(result.q_cold / result.work.abs())
}

/// A substance with its level structure solved once; cycles at any `r` are
/// then cheap to evaluate.
#[derive(Debug, Clone, PartialEq)]
pub struct CycleModel {
    substance: Substance,
    bath: BathParams,
    labels: Vec<LevelLabel>,
    /// Level energies at `r = 1` in `ħ²/(2m ρ_c²)`.
    cold_base: Vec<f64>,
    hot_base: Vec<f64>,
    /// Dimensionless `ε_e - ε_g` at each endpoint (helicoid only).
    deltas: Option<(f64, f64)>,
}

impl CycleModel {
    pub fn new(substance: Substance, bath: BathParams, level_count: usize) -> Result<Self> {
        substance.validate()?;
        if level_count < 2 {
            return Err(Error::Domain(format!("level_count must be >= 2, got {level_count}")));
        }
        let candidates = level_count;
        match substance {
            Substance::Flat => {
                let mut levels = Vec::new();
                for n in 0..candidates {
                    for l in 0..candidates as u32 {
                        levels.push((flat_energy(n as u32, l, 1.0, 1.0)?, LevelLabel { n, l }));
                    }
                }
                let chosen = lowest(levels, level_count);
                let base: Vec<f64> = chosen.iter().map(|c| c.0).collect();
                Ok(Self {
                    substance,
                    bath,
                    labels: chosen.iter().map(|c| c.1).collect(),
                    cold_base: base.clone(),
                    hot_base: base,
                    deltas: None,
                })
            }
            Substance::Helicoid { xi_cold, xi_hot } => {
                let solve = |xi: f64| -> Result<Vec<(f64, LevelLabel)>> {
                    let mut out = Vec::new();
                    for l in 0..candidates as u32 {
                        for m in solve_modes(&RadialProblem::new(xi, l)?, candidates)?.modes {
                            out.push((m.epsilon, LevelLabel { n: m.n, l }));
                        }
                    }
                    Ok(out)
                };
                let cold_eps = solve(xi_cold)?;
                let hot_eps = solve(xi_hot)?;
                let chosen = lowest(cold_eps, level_count);
                let labels: Vec<LevelLabel> = chosen.iter().map(|c| c.1).collect();
                let hot_for = |label: &LevelLabel| {
                    hot_eps
                        .iter()
                        .find(|(_, lab)| lab == label)
                        .map(|(e, _)| *e)
                        .expect("hot spectrum holds every candidate label")
                };
                let cold_eps: Vec<f64> = chosen.iter().map(|c| c.0).collect();
                let hot_eps: Vec<f64> = labels.iter().map(hot_for).collect();
                Ok(Self {
                    substance,
                    bath,
                    deltas: Some((cold_eps[1] - cold_eps[0], hot_eps[1] - hot_eps[0])),
                    cold_base: cold_eps.iter().map(|e| xi_cold * xi_cold * e).collect(),
                    hot_base: hot_eps.iter().map(|e| xi_hot * xi_hot * e).collect(),
                    labels,
                })
            }
        }
    }

    pub fn substance(&self) -> Substance {
        self.substance
    }

    pub fn bath(&self) -> BathParams {
        self.bath
    }

    pub fn level_count(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[LevelLabel] {
        &self.labels
    }

    /// Dimensionless gaps `(δ_c, δ_h)`; `None` for the flat strip.
    pub fn deltas(&self) -> Option<(f64, f64)> {
        self.deltas
    }

    /// `δ_c/δ_h`, the bound `α` must exceed; `None` for the flat strip.
    pub fn alpha_min(&self) -> Option<Result<f64>> {
        self.deltas.map(|(c, h)| alpha_bound(c, h))
    }

    pub fn config(&self, r: f64) -> Result<CycleConfig> {
        CycleConfig::new(self.substance, r, self.bath, self.level_count())
    }

    pub fn levels_at(&self, r: f64) -> Result<WorkingLevels> {
        if !(r.is_finite() && r > 0.0) {
            return Err(Error::Domain(format!("r must be > 0, got {r}")));
        }
        let r2 = r * r;
        WorkingLevels::new(
            self.cold_base.clone(),
            self.hot_base.iter().map(|e| r2 * e).collect(),
            self.labels.clone(),
        )
    }

    pub fn evaluate(&self, r: f64) -> Result<CycleResult> {
        let config = self.config(r)?;
        cycle_heats(&config, &self.levels_at(r)?)
    }

    pub fn work(&self, r: f64) -> Result<f64> {
        Ok(self.evaluate(r)?.work)
    }
}

fn lowest(mut levels: Vec<(f64, LevelLabel)>, count: usize) -> Vec<(f64, LevelLabel)> {
    levels.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.l.cmp(&b.1.l)).then(a.1.n.cmp(&b.1.n)));
    levels.truncate(count);
    levels
}

/// Scan resolution used by [`work_window`].
pub const WINDOW_SCAN_STEP: f64 = 1e-3;

/// Locates the two roots of `W(r)` in `[r_lo, r_hi]` bounding the engine window.
pub fn work_window(model: &CycleModel, r_lo: f64, r_hi: f64) -> Result<(f64, f64)> {
    if !(r_lo > 0.0 && r_hi > r_lo && r_hi.is_finite()) {
        return Err(Error::Domain(format!("need 0 < r_lo < r_hi, got [{r_lo}, {r_hi}]")));
    }
    let steps = ((r_hi - r_lo) / WINDOW_SCAN_STEP).ceil() as usize;
    let samples: Vec<(f64, f64)> = (0..=steps)
        .into_par_iter()
        .map(|i| {
            let r = (r_lo + i as f64 * WINDOW_SCAN_STEP).min(r_hi);
            model.work(r).map(|w| (r, w))
        })
        .collect::<Result<_>>()?;

    let mut brackets = Vec::new();
    let mut last: Option<(f64, f64)> = None;
    for &(r, w) in &samples {
        if w == 0.0 {
            continue;
        }
        if let Some((r0, w0)) = last {
            if w0.signum() != w.signum() {
                brackets.push((r0, r));
            }
        }
        last = Some((r, w));
    }
    if brackets.len() != 2 {
        let at: Vec<String> = brackets.iter().map(|(a, b)| format!("[{a:.3}, {b:.3}]")).collect();
        return Err(Error::Topology {
            found: brackets.len(),
            detail: format!("scan of [{r_lo}, {r_hi}] at step {WINDOW_SCAN_STEP}: {}", at.join(" ")),
        });
    }
    let refine = |(a, b): (f64, f64)| roots::brent(|r| model.work(r), a, b, 1e-12, 0.0, 200);
    Ok((refine(brackets[0])?, refine(brackets[1])?))
}

/// A sweep over the compression ratio.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub substance: Substance,
    pub bath: BathParams,
    pub level_count: usize,
    pub r_grid: Vec<f64>,
}

/// One sweep row. Efficiency and COP are normalised by their Carnot values
/// and left empty outside the mode they belong to.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub r: f64,
    pub q_cold: f64,
    pub q_hot: f64,
    pub work: f64,
    pub eta_norm: Option<f64>,
    pub cop_norm: Option<f64>,
    pub mode: Mode,
    pub boundary: bool,
}

/// `lo, lo + step, …` up to `hi` inclusive (with a 1e-9 step slack).
pub fn r_grid(lo: f64, hi: f64, step: f64) -> Result<Vec<f64>> {
    if !(lo > 0.0 && lo.is_finite() && hi.is_finite() && hi >= lo && step > 0.0 && step.is_finite()) {
        return Err(Error::Domain(format!(
            "need 0 < lo <= hi and step > 0, got {lo}:{hi}:{step}"
        )));
    }
    let n = ((hi - lo) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| lo + i as f64 * step).collect())
}

pub fn sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    let model = CycleModel::new(spec.substance, spec.bath, spec.level_count)?;
    sweep_model(&model, &spec.r_grid)
}

/// Evaluates every `r` (in parallel); rows come back in grid order.
pub fn sweep_model(model: &CycleModel, grid: &[f64]) -> Result<Vec<SweepRow>> {
    if grid.is_empty() {
        return Err(Error::Domain("empty r grid".into()));
    }
    if grid.iter().any(|&r| !(r > 0.0 && r.is_finite())) || grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Domain("r grid must be positive and strictly increasing".into()));
    }
    let bath = model.bath();
    grid.par_iter()
        .map(|&r| {
            let c = model.evaluate(r)?;
            Ok(SweepRow {
                r,
                q_cold: c.q_cold,
                q_hot: c.q_hot,
                work: c.work,
                eta_norm: c
                    .efficiency
                    .filter(|_| bath.theta > 1.0)
                    .map(|e| e / bath.carnot_efficiency()),
                cop_norm: c.cop.filter(|_| bath.theta > 1.0).map(|e| e / bath.carnot_cop()),
                mode: c.mode,
                boundary: c.boundary,
            })
        })
        .collect()
}
