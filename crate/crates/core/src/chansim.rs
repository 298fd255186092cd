//! Channel realisations and the Monte-Carlo rate harness.
//!
//! Geometry: `S2` and `S1` are fixed points in the plane. `D1` and `E` sit on
//! rings around `S1`, `D2` on a ring around `S2`. Ring radii are uniform on
//! `[1, R]` and angles uniform on `[0, 2π)`. Every entry of a line-of-sight
//! link is `d^{-c/2} e^{jθ}` with an independent uniform phase.

use std::f64::consts::{FRAC_1_SQRT_2, TAU};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::ComplexMatrix;
use crate::precoder::{self, ChannelSet};
use crate::region::{self, AntennaConfig, SdofPoint};
use crate::verifier;

/// Resample budget for rank-deficient draws.
pub const MAX_DRAW_ATTEMPTS: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Geometry {
    /// Position of the first source, meters.
    pub s1: [f64; 2],
    #[serde(default)]
    pub s2: [f64; 2],
    /// Outer ring radius `R`, meters.
    pub radius: f64,
    /// With `false`, channels are unit-variance complex Gaussian.
    #[serde(default = "yes")]
    pub enabled: bool,
    /// Draw fresh receiver positions for every trial.
    #[serde(default = "yes")]
    pub resample_rings: bool,
}

fn yes() -> bool {
    true
}

fn default_exponent() -> f64 {
    3.5
}

fn default_trials() -> usize {
    1000
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepVariable {
    /// Moves `S1` along the x axis to the given distance from `S2`.
    Distance,
    /// Eavesdropper channel uncertainty.
    Alpha,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub variable: SweepVariable,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub config: AntennaConfig,
    #[serde(default)]
    pub target: Option<SdofPoint>,
    pub geometry: Geometry,
    #[serde(default = "default_exponent")]
    pub pathloss_exponent: f64,
    pub noise_power_dbm: f64,
    pub power_dbm: f64,
    #[serde(default)]
    pub uncertainty_alpha: f64,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub sweep: Option<Sweep>,
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidScenario(m));
        self.config
            .validate()
            .map_err(|e| Error::InvalidScenario(e.to_string()))?;
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        let g = &self.geometry;
        if !(g.radius.is_finite() && g.radius >= 1.0) {
            return bad(format!(
                "ring radius must be at least 1 m, got {}",
                g.radius
            ));
        }
        if g.enabled && self.source_distance() < 1.0 {
            return bad("sources must be at least 1 m apart".into());
        }
        if !(self.pathloss_exponent.is_finite() && self.pathloss_exponent >= 0.0) {
            return bad("path loss exponent must be non-negative".into());
        }
        if !(self.uncertainty_alpha.is_finite() && self.uncertainty_alpha >= 0.0) {
            return bad("uncertainty alpha must be non-negative".into());
        }
        if !self.noise_power_dbm.is_finite() || !self.power_dbm.is_finite() {
            return bad("power levels must be finite".into());
        }
        if let Some(sw) = &self.sweep {
            if sw.values.is_empty() {
                return bad("sweep needs at least one value".into());
            }
            for v in &sw.values {
                let ok = match sw.variable {
                    SweepVariable::Distance => v.is_finite() && *v >= 1.0,
                    SweepVariable::Alpha => v.is_finite() && *v >= 0.0,
                };
                if !ok {
                    return bad(format!("sweep value {v} out of range"));
                }
            }
        }
        Ok(())
    }

    pub fn source_distance(&self) -> f64 {
        distance(self.geometry.s1, self.geometry.s2)
    }

    /// Transmit power over noise power, linear.
    pub fn snr(&self) -> f64 {
        10f64.powf((self.power_dbm - self.noise_power_dbm) / 10.0)
    }

    /// Copy with the sweep variable set to `x`.
    pub fn at(&self, variable: SweepVariable, x: f64) -> Scenario {
        let mut s = self.clone();
        match variable {
            SweepVariable::Distance => {
                s.geometry.s1 = [s.geometry.s2[0] + x, s.geometry.s2[1]];
            }
            SweepVariable::Alpha => s.uncertainty_alpha = x,
        }
        s
    }
}

fn distance(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

fn crandn<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re * FRAC_1_SQRT_2, im * FRAC_1_SQRT_2)
    })
}

/// Six independent standard complex Gaussian channels for `cfg`.
pub fn gaussian_channels<R: Rng + ?Sized>(cfg: &AntennaConfig, rng: &mut R) -> ChannelSet {
    ChannelSet {
        h11: crandn(rng, cfg.nd1, cfg.ns1),
        h12: crandn(rng, cfg.nd1, cfg.ns2),
        h21: crandn(rng, cfg.nd2, cfg.ns1),
        h22: crandn(rng, cfg.nd2, cfg.ns2),
        g1: crandn(rng, cfg.ne, cfg.ns1),
        g2: crandn(rng, cfg.ne, cfg.ns2),
    }
}

/// Full-rank Gaussian channels drawn from `seed`, redrawn up to
/// [`MAX_DRAW_ATTEMPTS`] times.
pub fn seeded_channels(cfg: &AntennaConfig, seed: u64) -> Result<ChannelSet> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_DRAW_ATTEMPTS {
        let ch = gaussian_channels(cfg, &mut rng);
        if ch.is_full_rank() {
            return Ok(ch);
        }
    }
    Err(Error::DegenerateDraw {
        attempts: MAX_DRAW_ATTEMPTS,
    })
}

/// Unit-magnitude entries with independent uniform phases.
pub fn random_phase<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        Complex64::from_polar(1.0, rng.random_range(0.0..TAU))
    })
}

fn pathloss_amplitude(distance: f64, c: f64) -> f64 {
    distance.max(1.0).powf(-c / 2.0)
}

/// Line-of-sight link: every entry `d^{-c/2} e^{jθ}`.
pub fn los_channel<R: Rng + ?Sized>(
    rows: usize,
    cols: usize,
    distance: f64,
    c: f64,
    rng: &mut R,
) -> ComplexMatrix {
    random_phase(rows, cols, rng) * Complex64::new(pathloss_amplitude(distance, c), 0.0)
}

/// `d^{-c/2} ((1+α)^{-1/2} Ḡ + (α/(1+α))^{1/2} ΔḠ)` with Gaussian `ΔḠ`.
pub fn uncertain_eve_channel<R: Rng + ?Sized>(
    gbar: &ComplexMatrix,
    alpha: f64,
    distance: f64,
    c: f64,
    rng: &mut R,
) -> ComplexMatrix {
    let (known, error) = uncertainty_weights(alpha);
    let delta = crandn(rng, gbar.nrows(), gbar.ncols());
    let amp = pathloss_amplitude(distance, c);
    (gbar * Complex64::new(known, 0.0) + delta * Complex64::new(error, 0.0))
        * Complex64::new(amp, 0.0)
}

/// Weights on the estimate and on the error term.
pub fn uncertainty_weights(alpha: f64) -> (f64, f64) {
    if alpha.is_infinite() {
        return (0.0, 1.0);
    }
    ((1.0 / (1.0 + alpha)).sqrt(), (alpha / (1.0 + alpha)).sqrt())
}

/// Channels for one trial: the estimate used for the precoder design and
/// the realisation the rates are evaluated on.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialDraw {
    pub estimate: ChannelSet,
    pub actual: ChannelSet,
}

/// Receiver positions `(D1, D2, E)` for one trial.
fn place_receivers<R: Rng + ?Sized>(sc: &Scenario, rng: &mut R) -> [[f64; 2]; 3] {
    let g = &sc.geometry;
    let d12 = sc.source_distance();
    let cap = g.radius.min(d12.max(1.0));
    let mut ring = |center: [f64; 2]| loop {
        let r = rng.random_range(1.0..=g.radius);
        let phi = rng.random_range(0.0..TAU);
        if r <= cap {
            return [center[0] + r * phi.cos(), center[1] + r * phi.sin()];
        }
    };
    [ring(g.s1), ring(g.s2), ring(g.s1)]
}

fn trial_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn draw_once<R: Rng + ?Sized>(sc: &Scenario, positions: &[[f64; 2]; 3], rng: &mut R) -> TrialDraw {
    let cfg = &sc.config;
    let alpha = sc.uncertainty_alpha;
    if !sc.geometry.enabled {
        let est = gaussian_channels(cfg, rng);
        if alpha == 0.0 {
            return TrialDraw {
                actual: est.clone(),
                estimate: est,
            };
        }
        let mut actual = est.clone();
        actual.g1 = uncertain_eve_channel(&est.g1, alpha, 1.0, 0.0, rng);
        actual.g2 = uncertain_eve_channel(&est.g2, alpha, 1.0, 0.0, rng);
        return TrialDraw {
            estimate: est,
            actual,
        };
    }
    let c = sc.pathloss_exponent;
    let g = &sc.geometry;
    let [d1, d2, e] = *positions;
    let h11 = los_channel(cfg.nd1, cfg.ns1, distance(g.s1, d1), c, rng);
    let h12 = los_channel(cfg.nd1, cfg.ns2, distance(g.s2, d1), c, rng);
    let h21 = los_channel(cfg.nd2, cfg.ns1, distance(g.s1, d2), c, rng);
    let h22 = los_channel(cfg.nd2, cfg.ns2, distance(g.s2, d2), c, rng);
    let (de1, de2) = (distance(g.s1, e), distance(g.s2, e));
    let gbar1 = random_phase(cfg.ne, cfg.ns1, rng);
    let gbar2 = random_phase(cfg.ne, cfg.ns2, rng);
    let scaled = |m: &ComplexMatrix, d: f64| m * Complex64::new(pathloss_amplitude(d, c), 0.0);
    let estimate = ChannelSet {
        h11,
        h12,
        h21,
        h22,
        g1: scaled(&gbar1, de1),
        g2: scaled(&gbar2, de2),
    };
    let actual = if alpha == 0.0 {
        estimate.clone()
    } else {
        ChannelSet {
            g1: uncertain_eve_channel(&gbar1, alpha, de1, c, rng),
            g2: uncertain_eve_channel(&gbar2, alpha, de2, c, rng),
            ..estimate.clone()
        }
    };
    TrialDraw { estimate, actual }
}

/// Deterministic draw for `(scenario.seed, trial_index)`.
///
/// Rank-deficient realisations are redrawn from the same stream up to
/// [`MAX_DRAW_ATTEMPTS`] times.
/// With `resample_rings` off, every trial shares one receiver layout drawn
/// from a dedicated stream.
pub fn draw_trial(sc: &Scenario, trial_index: u64) -> Result<TrialDraw> {
    let mut rng = trial_rng(sc.seed, trial_index);
    let mut positions = if sc.geometry.resample_rings {
        place_receivers(sc, &mut rng)
    } else {
        place_receivers(sc, &mut trial_rng(sc.seed, u64::MAX))
    };
    for attempt in 0..MAX_DRAW_ATTEMPTS {
        if attempt > 0 && sc.geometry.resample_rings {
            positions = place_receivers(sc, &mut rng);
        }
        let draw = draw_once(sc, &positions, &mut rng);
        if draw.estimate.is_full_rank() && draw.actual.is_full_rank() {
            return Ok(draw);
        }
    }
    Err(Error::DegenerateDraw {
        attempts: MAX_DRAW_ATTEMPTS,
    })
}

pub fn draw_channels(sc: &Scenario, trial_index: u64) -> Result<ChannelSet> {
    draw_trial(sc, trial_index).map(|d| d.actual)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveRecord {
    pub x: f64,
    pub mean_rs1: f64,
    pub se_rs1: f64,
    pub mean_rs2: f64,
    pub se_rs2: f64,
    pub failures: usize,
}

pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 8 {
        return xs.iter().sum();
    }
    let (a, b) = xs.split_at(xs.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}

/// Mean and standard error of the mean.
pub fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = pairwise_sum(xs) / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let sq: Vec<f64> = xs.iter().map(|x| (x - mean).powi(2)).collect();
    let var = pairwise_sum(&sq) / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

fn run_trial(sc: &Scenario, target: SdofPoint, index: u64) -> Result<(f64, f64)> {
    let draw = draw_trial(sc, index)?;
    let pair = precoder::construct(&draw.estimate, target, sc.snr())?;
    let r = verifier::rates(&draw.actual, &pair)?;
    Ok((r.rs1(), r.rs2()))
}

/// Averages the secrecy rates over `scenario.trials` independent draws.
/// Trials that fail are counted and left out of the averages.
pub fn monte_carlo(sc: &Scenario, target: SdofPoint, x: f64) -> Result<CurveRecord> {
    sc.validate()?;
    let cfg = sc.config;
    let region = region::boundary(&cfg);
    if !region.contains(target) {
        return Err(Error::TargetInfeasible {
            d1: target.d1,
            d2: target.d2,
        });
    }
    let outcomes: Vec<Result<(f64, f64)>> = (0..sc.trials as u64)
        .into_par_iter()
        .map(|i| run_trial(sc, target, i))
        .collect();
    let mut rs1 = Vec::with_capacity(outcomes.len());
    let mut rs2 = Vec::with_capacity(outcomes.len());
    let mut failures = 0;
    for o in outcomes {
        match o {
            Ok((a, b)) => {
                rs1.push(a);
                rs2.push(b);
            }
            Err(_) => failures += 1,
        }
    }
    let (mean_rs1, se_rs1) = mean_se(&rs1);
    let (mean_rs2, se_rs2) = mean_se(&rs2);
    Ok(CurveRecord {
        x,
        mean_rs1,
        se_rs1,
        mean_rs2,
        se_rs2,
        failures,
    })
}

/// One record per sweep value, or a single record at the scenario as given.
pub fn run_sweep(sc: &Scenario, target: SdofPoint) -> Result<Vec<CurveRecord>> {
    sc.validate()?;
    match &sc.sweep {
        None => Ok(vec![monte_carlo(sc, target, sc.source_distance())?]),
        Some(sw) => sw
            .values
            .iter()
            .map(|&x| monte_carlo(&sc.at(sw.variable, x), target, x))
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scenario(cfg: (usize, usize, usize, usize, usize)) -> Scenario {
        Scenario {
            config: AntennaConfig::new(cfg.0, cfg.1, cfg.2, cfg.3, cfg.4).unwrap(),
            target: None,
            geometry: Geometry {
                s1: [50.0, 0.0],
                s2: [0.0, 0.0],
                radius: 10.0,
                enabled: true,
                resample_rings: true,
            },
            pathloss_exponent: 3.5,
            noise_power_dbm: -60.0,
            power_dbm: 0.0,
            uncertainty_alpha: 0.0,
            trials: 200,
            seed: 5,
            sweep: None,
        }
    }

    #[test]
    fn los_magnitudes() {
        let mut g = ChaCha8Rng::seed_from_u64(1);
        for z in los_channel(3, 2, 1.0, 3.5, &mut g).iter() {
            assert!((z.norm() - 1.0).abs() < 1e-12);
        }
        for z in los_channel(3, 2, 10.0, 3.5, &mut g).iter() {
            assert!((z.norm() - 0.017_782_794_1).abs() < 1e-9);
        }
    }

    // Kolmogorov-Smirnov against U[0, 2π) with the asymptotic p-value.
    fn ks_uniform_p(mut xs: Vec<f64>) -> f64 {
        xs.sort_by(f64::total_cmp);
        let n = xs.len() as f64;
        let mut d: f64 = 0.0;
        for (i, x) in xs.iter().enumerate() {
            let f = x / TAU;
            d = d.max((i as f64 + 1.0) / n - f).max(f - i as f64 / n);
        }
        let lam = (n.sqrt() + 0.12 + 0.11 / n.sqrt()) * d;
        let mut p = 0.0;
        for k in 1..100 {
            let k = k as f64;
            p += 2.0 * (-1f64).powf(k - 1.0) * (-2.0 * k * k * lam * lam).exp();
        }
        p.clamp(0.0, 1.0)
    }

    #[test]
    fn phases_are_uniform() {
        let mut g = ChaCha8Rng::seed_from_u64(2);
        let m = random_phase(100, 100, &mut g);
        let phases: Vec<f64> = m.iter().map(|z| z.arg().rem_euclid(TAU)).collect();
        assert_eq!(phases.len(), 10_000);
        assert!(ks_uniform_p(phases) > 0.01);
    }

    #[test]
    fn uncertainty_weight_values() {
        let (a, b) = uncertainty_weights(0.1);
        assert!((a - 0.953_462_589_2).abs() < 1e-9);
        assert!((b - 0.301_511_344_6).abs() < 1e-9);
        assert_eq!(uncertainty_weights(0.0), (1.0, 0.0));
        assert_eq!(uncertainty_weights(f64::INFINITY), (0.0, 1.0));
        let (a, b) = uncertainty_weights(1e12);
        assert!(a < 1e-5 && (b - 1.0).abs() < 1e-9);
    }

    #[test]
    fn zero_alpha_keeps_estimate() {
        let mut g = ChaCha8Rng::seed_from_u64(3);
        let gbar = random_phase(2, 3, &mut g);
        let got = uncertain_eve_channel(&gbar, 0.0, 1.0, 3.5, &mut g);
        assert_eq!(got, gbar);
        let d = draw_trial(&scenario((4, 2, 4, 2, 4)), 0).unwrap();
        assert_eq!(d.actual, d.estimate);
    }

    #[test]
    fn alpha_mixes_in_error_term() {
        let mut sc = scenario((4, 2, 4, 2, 4));
        sc.uncertainty_alpha = 0.1;
        let d = draw_trial(&sc, 0).unwrap();
        assert_eq!(d.actual.h11, d.estimate.h11);
        assert_ne!(d.actual.g1, d.estimate.g1);
    }

    #[test]
    fn gaussian_moments() {
        let cfg = AntennaConfig::new(40, 40, 40, 40, 40).unwrap();
        let mut g = ChaCha8Rng::seed_from_u64(4);
        let mut vals = Vec::new();
        for _ in 0..4 {
            vals.extend(gaussian_channels(&cfg, &mut g).h11.iter().copied());
        }
        let n = vals.len() as f64;
        let mean: Complex64 = vals.iter().sum::<Complex64>() / n;
        let power: f64 = vals.iter().map(|z| z.norm_sqr()).sum::<f64>() / n;
        let pseudo: Complex64 = vals.iter().map(|z| z * z).sum::<Complex64>() / n;
        assert!(mean.norm() < 0.05);
        assert!((power - 1.0).abs() < 0.05);
        assert!(pseudo.norm() < 0.05);
    }

    #[test]
    fn cross_link_scale_at_ten_meters() {
        let mut sc = scenario((2, 2, 2, 2, 2));
        sc.geometry.s1 = [10.0, 0.0];
        sc.geometry.radius = 1.0;
        // D1 lies exactly 1 m from S1, so its distance to S2 is within [9, 11].
        let d = draw_trial(&sc, 0).unwrap();
        for z in d.actual.h12.iter() {
            let n = z.norm();
            assert!(n <= 9f64.powf(-1.75) && n >= 11f64.powf(-1.75), "{n}");
        }
        for z in d.actual.h11.iter() {
            assert!((z.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn draws_are_deterministic() {
        let sc = scenario((4, 2, 4, 2, 4));
        assert_eq!(draw_trial(&sc, 17).unwrap(), draw_trial(&sc, 17).unwrap());
        assert_ne!(draw_trial(&sc, 17).unwrap(), draw_trial(&sc, 18).unwrap());
        let mut other = sc.clone();
        other.seed = 6;
        assert_ne!(
            draw_trial(&sc, 17).unwrap(),
            draw_trial(&other, 17).unwrap()
        );
    }

    #[test]
    fn fixed_layout_shares_positions() {
        let mut sc = scenario((2, 2, 2, 2, 2));
        sc.geometry.resample_rings = false;
        sc.pathloss_exponent = 2.0;
        let a = draw_trial(&sc, 0).unwrap().actual;
        let b = draw_trial(&sc, 1).unwrap().actual;
        assert!((a.h11[(0, 0)].norm() - b.h11[(0, 0)].norm()).abs() < 1e-12);
        assert_ne!(a.h11, b.h11);
    }

    #[test]
    fn thread_count_does_not_change_results() {
        let mut sc = scenario((4, 2, 4, 2, 4));
        sc.trials = 64;
        let t = SdofPoint::new(1, 1);
        let one = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let four = rayon::ThreadPoolBuilder::new()
            .num_threads(4)
            .build()
            .unwrap();
        let a = one.install(|| monte_carlo(&sc, t, 0.0).unwrap());
        let b = four.install(|| monte_carlo(&sc, t, 0.0).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn standard_error_shrinks_with_trials() {
        let mut sc = scenario((4, 2, 4, 2, 4));
        let t = SdofPoint::new(1, 1);
        sc.trials = 100;
        let small = monte_carlo(&sc, t, 0.0).unwrap();
        sc.trials = 1600;
        let large = monte_carlo(&sc, t, 0.0).unwrap();
        let ratio = small.se_rs1 / large.se_rs1;
        assert!((2.0..8.0).contains(&ratio), "{ratio}");
        assert_eq!(large.failures, 0);
    }

    #[test]
    fn mean_and_se() {
        let (m, s) = mean_se(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m, 2.5);
        assert!((s - (5.0f64 / 12.0).sqrt()).abs() < 1e-15);
        assert_eq!(mean_se(&[7.0]), (7.0, 0.0));
        assert!(mean_se(&[]).0.is_nan());
        let xs: Vec<f64> = (0..1000).map(|i| i as f64 * 0.1).collect();
        assert!((pairwise_sum(&xs) - 49950.0).abs() < 1e-9);
    }

    #[test]
    fn infeasible_target_rejected() {
        let sc = scenario((4, 2, 4, 2, 4));
        assert!(matches!(
            monte_carlo(&sc, SdofPoint::new(3, 3), 0.0),
            Err(Error::TargetInfeasible { .. })
        ));
    }

    #[test]
    fn invalid_scenarios() {
        let mut sc = scenario((4, 2, 4, 2, 4));
        sc.trials = 0;
        assert!(matches!(sc.validate(), Err(Error::InvalidScenario(_))));
        let mut sc = scenario((4, 2, 4, 2, 4));
        sc.geometry.radius = 0.5;
        assert!(sc.validate().is_err());
        let mut sc = scenario((4, 2, 4, 2, 4));
        sc.sweep = Some(Sweep {
            variable: SweepVariable::Alpha,
            values: vec![-1.0],
        });
        assert!(sc.validate().is_err());
    }

    #[test]
    fn seeded_channels_repeat() {
        let cfg = AntennaConfig::new(3, 2, 2, 2, 3).unwrap();
        let a = seeded_channels(&cfg, 9).unwrap();
        assert_eq!(a, seeded_channels(&cfg, 9).unwrap());
        assert!(a.is_full_rank());
        assert_ne!(a, seeded_channels(&cfg, 10).unwrap());
    }

    #[test]
    fn snr_conversion() {
        let sc = scenario((1, 1, 1, 1, 1));
        assert!((sc.snr() - 1e6).abs() < 1e-6);
    }
}
