//! Parametric studies: skew angle, torsional-to-flexural stiffness ratio and
//! span length (with sections redesigned at depth L/14).

use rayon::prelude::*;

use crate::config::{kmh_to_ms, ms_to_kmh};
use crate::deck::{DeckProperties, RunSettings};
use crate::eigen::Model;
use crate::error::{Error, Result};
use crate::loads::Train;
use crate::presets::SpanFixture;
use crate::response::{speed_grid, Analysis, EnvelopeResult};

/// Swept deck parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parameter {
    /// Skew angle, values in degrees.
    SkewAngle,
    /// `GJ/EI`.
    StiffnessRatio,
    /// Span length [m], one value per fixture.
    SpanLength,
}

impl std::str::FromStr for Parameter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "skew" => Ok(Parameter::SkewAngle),
            "ratio" => Ok(Parameter::StiffnessRatio),
            "span" => Ok(Parameter::SpanLength),
            _ => Err(Error::validation(
                "param",
                format!("`{s}` is not skew, ratio or span"),
            )),
        }
    }
}

/// Inputs shared by every point of a study.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub parameter: Parameter,
    /// Parameter values, strictly increasing.
    pub values: Vec<f64>,
    pub base_deck: DeckProperties,
    pub train: Train,
    pub eccentricity: f64,
    /// `(v_min, v_max, v_step)` [m/s].
    pub speed_range: (f64, f64, f64),
    pub settings: RunSettings,
    pub model: Model,
}

impl SweepSpec {
    /// Simplified-model study over `values`.
    pub fn new(
        parameter: Parameter,
        values: Vec<f64>,
        base_deck: DeckProperties,
        train: Train,
        speed_range: (f64, f64, f64),
        settings: RunSettings,
    ) -> Self {
        Self {
            parameter,
            values,
            base_deck,
            train,
            eccentricity: 0.0,
            speed_range,
            settings,
            model: Model::Simplified,
        }
    }

    fn check_values(&self) -> Result<()> {
        if self.values.is_empty() {
            return Err(Error::validation("values", "no parameter values"));
        }
        if let Some(w) = self.values.windows(2).find(|w| !(w[1] > w[0])) {
            return Err(Error::validation(
                "values",
                format!("not strictly increasing at {}", w[1]),
            ));
        }
        for &v in &self.values {
            match self.parameter {
                Parameter::SkewAngle if !(0.0..=40.0).contains(&v) => {
                    return Err(Error::validation(
                        "alpha_deg",
                        format!("{v} outside [0, 40]"),
                    ));
                }
                Parameter::StiffnessRatio if !(v > 0.0) => {
                    return Err(Error::validation("GJ/EI", format!("{v} must be positive")));
                }
                Parameter::StiffnessRatio if !(0.5..=1.5).contains(&v) => {
                    return Err(Error::validation(
                        "GJ/EI",
                        format!("{v} outside [0.5, 1.5]"),
                    ));
                }
                _ => {}
            }
        }
        Ok(())
    }
}

/// Result at one parameter value.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub value: f64,
    pub f1_hz: f64,
    pub envelope: EnvelopeResult,
    pub max_u: f64,
    pub max_a: f64,
}

fn envelope_point(
    value: f64,
    deck: &DeckProperties,
    spec: &SweepSpec,
    speeds: &[f64],
) -> Result<SweepPoint> {
    let analysis = Analysis::new(deck, spec.model, &spec.settings)?;
    let envelope = analysis.envelope(&spec.train, speeds, spec.eccentricity)?;
    let max_u = envelope.max_abs_u.iter().copied().fold(0.0, f64::max);
    let max_a = envelope.max_abs_u_ddot.iter().copied().fold(0.0, f64::max);
    Ok(SweepPoint {
        value,
        f1_hz: analysis.fundamental_hz(),
        envelope,
        max_u,
        max_a,
    })
}

fn sweep_with<F>(spec: &SweepSpec, deck_at: F) -> Result<Vec<SweepPoint>>
where
    F: Fn(f64) -> Result<DeckProperties> + Sync,
{
    spec.check_values()?;
    let (v0, v1, dv) = spec.speed_range;
    let speeds = speed_grid(v0, v1, dv)?;
    spec.values
        .par_iter()
        .map(|&value| envelope_point(value, &deck_at(value)?, spec, &speeds))
        .collect()
}

/// Envelopes and `f₁` for each skew angle [deg].
pub fn sweep_skew(spec: &SweepSpec) -> Result<Vec<SweepPoint>> {
    sweep_with(spec, |deg| Ok(spec.base_deck.with_skew(deg.to_radians())))
}

/// Envelopes for each `GJ/EI`, with `J` adjusted at fixed `EI`.
pub fn sweep_stiffness(spec: &SweepSpec) -> Result<Vec<SweepPoint>> {
    sweep_with(spec, |ratio| spec.base_deck.with_stiffness_ratio(ratio))
}

/// Interior grid value where the slope of `values` changes most,
/// i.e. the largest `|second difference|`. `None` with fewer than 3 points.
pub fn slope_change_point(points: &[(f64, f64)]) -> Option<f64> {
    points
        .windows(3)
        .map(|w| {
            let s0 = (w[1].1 - w[0].1) / (w[1].0 - w[0].0);
            let s1 = (w[2].1 - w[1].1) / (w[2].0 - w[1].0);
            (w[1].0, (s1 - s0).abs())
        })
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(x, _)| x)
}

/// Span study result for one fixture.
#[derive(Debug, Clone, PartialEq)]
pub struct SpanPoint {
    pub span: f64,
    /// `(α [deg], f₁ [Hz])` over the angle grid.
    pub f1_by_angle: Vec<(f64, f64)>,
    /// `f₁(α_max) − f₁(α_min)` [Hz].
    pub delta_f1: f64,
    /// `f₁` at the base deck's skew angle [Hz].
    pub f1_hz: f64,
    /// Predicted second resonance speed `f₁ D / 2` [m/s].
    pub second_resonance: f64,
    /// Speed of the largest displacement within ±15 km/h of it [m/s].
    pub peak_speed: f64,
    pub max_u: f64,
    pub max_a: f64,
    pub daf: f64,
}

/// Half width of the search window around the second resonance speed [km/h].
pub const RESONANCE_WINDOW_KMH: f64 = 15.0;

/// Frequency surface and second-resonance response for each fixture.
///
/// `angles_deg` is the skew grid of the frequency surface; the resonance runs
/// use the base deck's angle. `spacing` is the train's regular axle spacing
/// `D`. Speeds within the window are spaced by the sweep's `v_step`.
pub fn sweep_span(
    spec: &SweepSpec,
    fixtures: &[SpanFixture],
    angles_deg: &[f64],
    spacing: f64,
) -> Result<Vec<SpanPoint>> {
    if fixtures.is_empty() {
        return Err(Error::validation("fixtures", "no span fixtures"));
    }
    if angles_deg.is_empty() {
        return Err(Error::validation("angles", "no skew angles"));
    }
    if !(spacing > 0.0) {
        return Err(Error::validation(
            "D",
            format!("{spacing} must be positive"),
        ));
    }
    let dv = spec.speed_range.2;
    fixtures
        .par_iter()
        .map(|fx| {
            let deck = fx.deck(&spec.base_deck)?;
            let f1_by_angle = angles_deg
                .iter()
                .map(|&a| {
                    let d = deck.with_skew(a.to_radians());
                    let modes = crate::eigen::find_modes(&d, spec.model, 1)?;
                    Ok((a, modes[0].frequency_hz()))
                })
                .collect::<Result<Vec<_>>>()?;
            let delta_f1 = f1_by_angle.last().map(|l| l.1).unwrap_or(0.0) - f1_by_angle[0].1;

            let analysis = Analysis::new(&deck, spec.model, &spec.settings)?;
            let f1 = analysis.fundamental_hz();
            let v2 = f1 * spacing / 2.0;
            let lo = kmh_to_ms(ms_to_kmh(v2) - RESONANCE_WINDOW_KMH).max(dv);
            let hi = kmh_to_ms(ms_to_kmh(v2) + RESONANCE_WINDOW_KMH);
            let speeds = speed_grid(lo, hi, dv)?;
            let env = analysis.envelope(&spec.train, &speeds, spec.eccentricity)?;
            let k = (0..env.len())
                .max_by(|&i, &j| env.max_abs_u[i].total_cmp(&env.max_abs_u[j]))
                .expect("non-empty speed grid");
            let convoy = spec.train.at_speed(env.speeds[k], spec.eccentricity)?;
            let h = analysis.run(&convoy)?;
            Ok(SpanPoint {
                span: fx.span,
                f1_by_angle,
                delta_f1,
                f1_hz: f1,
                second_resonance: v2,
                peak_speed: env.speeds[k],
                max_u: env.max_abs_u[k],
                max_a: env.max_abs_u_ddot[k],
                daf: h.daf()?,
            })
        })
        .collect()
}
