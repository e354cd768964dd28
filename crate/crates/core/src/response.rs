//! Physical responses by modal superposition: time histories at a point,
//! speed envelopes, dynamic amplification and resonance speeds.
//!
//! Each mode contributes a bending coordinate `q_n`, driven by the axle loads,
//! and in the analytical model a torsional coordinate `p_n`, driven by the
//! axle torques. The vertical displacement at `(x, y)` is
//! `u = Σ q_n φ_n(x) − y Σ p_n ϕ_n(x)`.

use rayon::prelude::*;

use crate::config::ms_to_kmh;
use crate::deck::{DeckProperties, RunSettings};
use crate::eigen::{self, Mode, Model};
use crate::error::{Error, Result};
use crate::integrator;
use crate::loads::{Convoy, ForceSampler, Train};

/// Response at one point over a passage and its free-vibration tail.
#[derive(Debug, Clone, PartialEq)]
pub struct ResponseHistory {
    /// Sample times [s], starting at 0 with spacing `dt`.
    pub times: Vec<f64>,
    /// Vertical displacement [m].
    pub u: Vec<f64>,
    /// Vertical acceleration [m/s²].
    pub u_ddot: Vec<f64>,
    /// Twist `Σ p_n ϕ_n(x)` [rad]; analytical model only.
    pub theta: Option<Vec<f64>>,
    /// Displacement with inertia and damping dropped, from the same modal forces.
    pub u_quasi_static: Vec<f64>,
    /// Per-mode `(q_n, p_n)` traces, when requested.
    pub modal: Option<Vec<ModalTrace>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModalTrace {
    pub q: Vec<f64>,
    pub p: Option<Vec<f64>>,
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

impl ResponseHistory {
    pub fn max_abs_u(&self) -> f64 {
        max_abs(&self.u)
    }

    pub fn max_abs_u_ddot(&self) -> f64 {
        max_abs(&self.u_ddot)
    }

    /// `max |u| / max |u_qs|`.
    pub fn daf(&self) -> Result<f64> {
        let qs = max_abs(&self.u_quasi_static);
        if qs == 0.0 {
            return Err(Error::UndefinedDaf);
        }
        Ok(self.max_abs_u() / qs)
    }
}

/// Maxima over a range of speeds.
#[derive(Debug, Clone, PartialEq)]
pub struct EnvelopeResult {
    /// Speeds [m/s], strictly increasing.
    pub speeds: Vec<f64>,
    pub max_abs_u: Vec<f64>,
    pub max_abs_u_ddot: Vec<f64>,
}

impl EnvelopeResult {
    pub fn len(&self) -> usize {
        self.speeds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.speeds.is_empty()
    }

    /// Speeds [m/s] at which `values` has a local maximum (endpoints excluded).
    pub fn local_maxima(&self, values: &[f64]) -> Vec<f64> {
        values
            .windows(3)
            .enumerate()
            .filter(|(_, w)| w[1] > w[0] && w[1] >= w[2])
            .map(|(i, _)| self.speeds[i + 1])
            .collect()
    }
}

/// Speeds `v_min, v_min + v_step, …` up to `v_max` (inclusive within 1e-9 steps).
pub fn speed_grid(v_min: f64, v_max: f64, v_step: f64) -> Result<Vec<f64>> {
    if !(v_min > 0.0) || !v_min.is_finite() {
        return Err(Error::validation(
            "v_min",
            format!("{v_min} must be positive"),
        ));
    }
    if !(v_max >= v_min) || !v_max.is_finite() {
        return Err(Error::validation(
            "v_max",
            format!("{v_max} must be at least v_min = {v_min}"),
        ));
    }
    if !(v_step > 0.0) || !v_step.is_finite() {
        return Err(Error::validation(
            "v_step",
            format!("{v_step} must be positive"),
        ));
    }
    let count = ((v_max - v_min) / v_step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|k| v_min + k as f64 * v_step).collect())
}

/// A deck with its modes solved once, reused across runs.
#[derive(Debug, Clone)]
pub struct Analysis {
    deck: DeckProperties,
    modes: Vec<Mode>,
    settings: RunSettings,
}

impl Analysis {
    pub fn new(deck: &DeckProperties, model: Model, settings: &RunSettings) -> Result<Self> {
        settings.validate(deck)?;
        let modes = eigen::find_modes(deck, model, settings.n_modes)?;
        Self::with_modes(deck, modes, settings)
    }

    /// Uses already computed modes of `deck`.
    pub fn with_modes(
        deck: &DeckProperties,
        modes: Vec<Mode>,
        settings: &RunSettings,
    ) -> Result<Self> {
        settings.validate(deck)?;
        if modes.is_empty() {
            return Err(Error::validation("n_modes", "no modes supplied"));
        }
        Ok(Self {
            deck: *deck,
            modes,
            settings: *settings,
        })
    }

    pub fn deck(&self) -> &DeckProperties {
        &self.deck
    }

    pub fn modes(&self) -> &[Mode] {
        &self.modes
    }

    pub fn settings(&self) -> &RunSettings {
        &self.settings
    }

    /// Lowest frequency among the modes [Hz].
    pub fn fundamental_hz(&self) -> f64 {
        self.modes
            .iter()
            .map(Mode::frequency_hz)
            .fold(f64::INFINITY, f64::min)
    }

    /// `dt` warning for the highest retained mode, if any.
    pub fn time_step_warning(&self) -> Option<String> {
        let f_max = self
            .modes
            .iter()
            .map(Mode::frequency_hz)
            .fold(0.0, f64::max);
        self.settings.time_step_warning(f_max)
    }

    pub fn run(&self, convoy: &Convoy) -> Result<ResponseHistory> {
        self.simulate(convoy, false)
    }

    /// As [`Analysis::run`], keeping the modal coordinate traces.
    pub fn run_with_traces(&self, convoy: &Convoy) -> Result<ResponseHistory> {
        self.simulate(convoy, true)
    }

    fn simulate(&self, convoy: &Convoy, keep_traces: bool) -> Result<ResponseHistory> {
        let deck = &self.deck;
        let dt = self.settings.dt;
        let x = self.settings.x_eval(deck);
        let y = self.settings.lateral_offset;
        let t_end = convoy.exit_time(deck.span_length) + self.settings.tail(self.fundamental_hz());
        let steps = (t_end / dt - 1e-9).ceil().max(1.0) as usize;
        let times: Vec<f64> = (0..=steps).map(|i| i as f64 * dt).collect();
        let sampler = ForceSampler::new(convoy, deck)?;

        let mut u = vec![0.0; times.len()];
        let mut u_ddot = vec![0.0; times.len()];
        let mut u_qs = vec![0.0; times.len()];
        let mut theta = self.modes[0].tors_coeffs.map(|_| vec![0.0; times.len()]);
        let mut traces = keep_traces.then(Vec::new);

        for mode in &self.modes {
            let w2 = mode.omega * mode.omega;
            let phi = mode.flex_at(x);
            let forcing: Vec<f64> = times.iter().map(|&t| sampler.flexural(mode, t)).collect();
            let q = integrator::integrate(mode.omega, deck.damping_ratio, dt, &forcing)?;
            for i in 0..times.len() {
                u[i] += q[i].w * phi;
                u_ddot[i] += q[i].w_ddot * phi;
                u_qs[i] += forcing[i] / w2 * phi;
            }
            let mut p_trace = None;
            if mode.tors_coeffs.is_some() && mode.modal_mass_tors > 0.0 {
                let psi = mode.tors_at(x);
                let torque: Vec<f64> = times.iter().map(|&t| sampler.torsional(mode, t)).collect();
                let p =
                    integrator::integrate(mode.omega, deck.torsional_damping_ratio, dt, &torque)?;
                let th = theta.as_mut().expect("analytical modes carry torsion");
                for i in 0..times.len() {
                    th[i] += p[i].w * psi;
                    u[i] -= y * p[i].w * psi;
                    u_ddot[i] -= y * p[i].w_ddot * psi;
                    u_qs[i] -= y * torque[i] / w2 * psi;
                }
                p_trace = Some(p.iter().map(|s| s.w).collect());
            }
            if let Some(tr) = traces.as_mut() {
                tr.push(ModalTrace {
                    q: q.iter().map(|s| s.w).collect(),
                    p: p_trace,
                });
            }
        }
        Ok(ResponseHistory {
            times,
            u,
            u_ddot,
            theta,
            u_quasi_static: u_qs,
            modal: traces,
        })
    }

    /// Maximum displacement and acceleration at each speed, run in parallel.
    pub fn envelope(
        &self,
        train: &Train,
        speeds: &[f64],
        eccentricity: f64,
    ) -> Result<EnvelopeResult> {
        if let Some(w) = speeds.windows(2).find(|w| w[1] <= w[0]) {
            return Err(Error::validation(
                "speeds",
                format!("not increasing at {} m/s", w[1]),
            ));
        }
        let maxima: Vec<(f64, f64)> = speeds
            .par_iter()
            .map(|&v| {
                let run = || -> Result<(f64, f64)> {
                    let h = self.run(&train.at_speed(v, eccentricity)?)?;
                    Ok((h.max_abs_u(), h.max_abs_u_ddot()))
                };
                run().map_err(|e| Error::AtSpeed {
                    speed_kmh: ms_to_kmh(v),
                    source: Box::new(e),
                })
            })
            .collect::<Result<_>>()?;
        Ok(EnvelopeResult {
            speeds: speeds.to_vec(),
            max_abs_u: maxima.iter().map(|m| m.0).collect(),
            max_abs_u_ddot: maxima.iter().map(|m| m.1).collect(),
        })
    }

    pub fn daf(&self, convoy: &Convoy) -> Result<f64> {
        self.run(convoy)?.daf()
    }
}

/// Response history of one passage.
pub fn time_history(
    deck: &DeckProperties,
    model: Model,
    convoy: &Convoy,
    settings: &RunSettings,
) -> Result<ResponseHistory> {
    Analysis::new(deck, model, settings)?.run(convoy)
}

/// Envelope over `v_min..=v_max` in steps of `v_step` [m/s].
pub fn envelope(
    deck: &DeckProperties,
    model: Model,
    train: &Train,
    (v_min, v_max, v_step): (f64, f64, f64),
    eccentricity: f64,
    settings: &RunSettings,
) -> Result<EnvelopeResult> {
    let speeds = speed_grid(v_min, v_max, v_step)?;
    Analysis::new(deck, model, settings)?.envelope(train, &speeds, eccentricity)
}

/// Dynamic amplification factor of the displacement at one speed.
pub fn daf(
    deck: &DeckProperties,
    model: Model,
    convoy: &Convoy,
    settings: &RunSettings,
) -> Result<f64> {
    Analysis::new(deck, model, settings)?.daf(convoy)
}

/// Resonance speeds `v_i = f₀ D / i` [m/s] for `i = 1..=i_max`.
pub fn resonance_speeds(f0: f64, spacing: f64, i_max: usize) -> Result<Vec<f64>> {
    if !(f0 > 0.0) || !f0.is_finite() {
        return Err(Error::validation("f0", format!("{f0} must be positive")));
    }
    if !(spacing > 0.0) || !spacing.is_finite() {
        return Err(Error::validation(
            "D",
            format!("{spacing} must be positive"),
        ));
    }
    if i_max == 0 {
        return Err(Error::validation("imax", "must be at least 1"));
    }
    Ok((1..=i_max).map(|i| f0 * spacing / i as f64).collect())
}
