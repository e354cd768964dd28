//! Moving loads and the modal forces they generate.
//!
//! Each axle is a point load travelling at constant speed. Its modal
//! projection is the mode shape sampled at the axle position; axles that
//! have not yet entered or have already left the span contribute nothing.
//! In the analytical model each axle also applies a torque: a skew term
//! `P L (ε − ε²) cot α / (2(1 + K cot²α))` plus the eccentricity term `P e`.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use crate::deck::DeckProperties;
use crate::eigen::Mode;
use crate::error::{Error, Result};

const HSLM_A1: &str = include_str!("../data/hslm_a1.txt");

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axle {
    /// Distance behind the first axle [m].
    pub offset: f64,
    /// Axle load [N].
    pub load: f64,
}

/// Ordered axle set; speed is supplied per run.
#[derive(Debug, Clone, PartialEq)]
pub struct Train {
    axles: Arc<[Axle]>,
}

impl Train {
    /// Validates offsets (first 0, strictly increasing) and loads (positive).
    pub fn new(axles: Vec<Axle>) -> Result<Self> {
        let first = axles
            .first()
            .ok_or_else(|| Error::validation("train", "no axles"))?;
        if first.offset != 0.0 {
            return Err(Error::validation(
                "train",
                format!("first axle offset is {}, expected 0", first.offset),
            ));
        }
        for (k, a) in axles.iter().enumerate() {
            if !a.offset.is_finite() || !a.load.is_finite() {
                return Err(Error::validation(
                    "train",
                    format!("axle {} is not finite", k + 1),
                ));
            }
            if !(a.load > 0.0) {
                return Err(Error::validation(
                    "train",
                    format!("axle {} load {} is not positive", k + 1, a.load),
                ));
            }
        }
        if let Some(k) = axles.windows(2).position(|w| w[1].offset <= w[0].offset) {
            return Err(Error::validation(
                "train",
                format!(
                    "axle offsets must increase strictly: axle {} at {} m follows {} m",
                    k + 2,
                    axles[k + 1].offset,
                    axles[k].offset
                ),
            ));
        }
        Ok(Self {
            axles: axles.into(),
        })
    }

    /// One load at offset 0.
    pub fn single(load: f64) -> Result<Self> {
        Self::new(vec![Axle { offset: 0.0, load }])
    }

    /// Parses the `offset_m load_kN` text format.
    pub fn parse(text: &str) -> Result<Self> {
        let mut axles = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut cols = line.split_whitespace();
            let (Some(d), Some(p), None) = (cols.next(), cols.next(), cols.next()) else {
                return Err(Error::parse(
                    idx + 1,
                    format!("expected `offset_m load_kN`, got `{line}`"),
                ));
            };
            let offset: f64 = d
                .parse()
                .map_err(|_| Error::parse(idx + 1, format!("`{d}` is not a number")))?;
            let load_kn: f64 = p
                .parse()
                .map_err(|_| Error::parse(idx + 1, format!("`{p}` is not a number")))?;
            axles.push(Axle {
                offset,
                load: load_kn * 1000.0,
            });
        }
        Self::new(axles)
    }

    /// Reads a train file.
    pub fn load_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_owned(),
            source,
        })?;
        Self::parse(&text)
    }

    /// The bundled HSLM-A1 train (50 axles of 170 kN, regular spacing 18 m).
    pub fn hslm_a1() -> Self {
        Self::parse(HSLM_A1).expect("bundled HSLM-A1 table is valid")
    }

    pub fn axles(&self) -> &[Axle] {
        &self.axles
    }

    pub fn total_load(&self) -> f64 {
        self.axles.iter().map(|a| a.load).sum()
    }

    /// Distance from the first to the last axle [m].
    pub fn length(&self) -> f64 {
        self.axles.last().map_or(0.0, |a| a.offset)
    }

    /// Every axle load multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(
            self.axles
                .iter()
                .map(|a| Axle {
                    offset: a.offset,
                    load: a.load * factor,
                })
                .collect(),
        )
    }

    /// Counts of consecutive axle spacings, keyed by spacing in millimetres.
    pub fn spacing_histogram(&self) -> BTreeMap<i64, usize> {
        let mut hist = BTreeMap::new();
        for w in self.axles.windows(2) {
            *hist
                .entry(((w[1].offset - w[0].offset) * 1000.0).round() as i64)
                .or_insert(0) += 1;
        }
        hist
    }

    pub fn at_speed(&self, speed: f64, eccentricity: f64) -> Result<Convoy> {
        Convoy::new(self.clone(), speed, eccentricity)
    }
}

/// A train travelling at constant speed with a lateral load eccentricity.
#[derive(Debug, Clone, PartialEq)]
pub struct Convoy {
    train: Train,
    /// Speed [m/s].
    pub speed: f64,
    /// Load eccentricity from the deck's mass centre [m].
    pub eccentricity: f64,
}

/// Where an axle sits at a given instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxlePosition {
    /// `ε_k = (v t − d_k) / L`.
    pub fraction: f64,
    /// `0 ≤ ε_k ≤ 1`.
    pub active: bool,
}

impl Convoy {
    pub fn new(train: Train, speed: f64, eccentricity: f64) -> Result<Self> {
        if !(speed > 0.0) || !speed.is_finite() {
            return Err(Error::validation(
                "v",
                format!("speed {speed} must be positive"),
            ));
        }
        if !eccentricity.is_finite() {
            return Err(Error::validation("e", "eccentricity is not finite"));
        }
        Ok(Self {
            train,
            speed,
            eccentricity,
        })
    }

    pub fn train(&self) -> &Train {
        &self.train
    }

    pub fn axles(&self) -> &[Axle] {
        self.train.axles()
    }

    /// Time at which the last axle leaves a span of length `span`.
    pub fn exit_time(&self, span: f64) -> f64 {
        (self.train.length() + span) / self.speed
    }

    /// Position of axle `k` (0-based) at time `t` on a span of length `span`.
    pub fn axle_position_fraction(&self, k: usize, t: f64, span: f64) -> AxlePosition {
        let fraction = (self.speed * t - self.axles()[k].offset) / span;
        AxlePosition {
            fraction,
            active: (0.0..=1.0).contains(&fraction),
        }
    }

    /// Indices of the axles on a span of length `span` at time `t`.
    pub fn active_range(&self, t: f64, span: f64) -> std::ops::Range<usize> {
        let front = self.speed * t;
        let axles = self.axles();
        let lo = axles.partition_point(|a| a.offset < front - span);
        let hi = axles.partition_point(|a| a.offset <= front);
        lo..hi.max(lo)
    }
}

/// Skew part of the torque per unit axle load [m]:
/// `L (ε − ε²) cot α / (2(1 + K cot²α))`, evaluated as
/// `L (ε − ε²) tan α / (2(tan²α + K))` so that α = 0 gives exactly 0.
pub fn skew_torque_factor(fraction: f64, span: f64, skew_angle: f64, stiffness_ratio: f64) -> f64 {
    let t = skew_angle.tan();
    span * (fraction - fraction * fraction) * t / (2.0 * (t * t + stiffness_ratio))
}

/// Samples modal forces of one convoy on one deck.
#[derive(Debug, Clone)]
pub struct ForceSampler<'a> {
    convoy: &'a Convoy,
    span: f64,
    skew_angle: f64,
    stiffness_ratio: f64,
}

impl<'a> ForceSampler<'a> {
    pub fn new(convoy: &'a Convoy, deck: &DeckProperties) -> Result<Self> {
        let c = deck.derive_constants()?;
        Ok(Self {
            convoy,
            span: deck.span_length,
            skew_angle: deck.skew_angle,
            stiffness_ratio: c.stiffness_ratio,
        })
    }

    /// `Σ_active P_k φ_n(vt − d_k) / M_f`.
    pub fn flexural(&self, mode: &Mode, t: f64) -> f64 {
        let front = self.convoy.speed * t;
        let axles = self.convoy.axles();
        let mut sum = 0.0;
        for a in &axles[self.convoy.active_range(t, self.span)] {
            sum += a.load * mode.flex_at(front - a.offset);
        }
        sum / mode.modal_mass_flex
    }

    /// Total torque of the active axles weighted by the torsional shape,
    /// divided by `M_t`. Zero for modes without torsional mass.
    pub fn torsional(&self, mode: &Mode, t: f64) -> f64 {
        if mode.modal_mass_tors <= 0.0 {
            return 0.0;
        }
        let front = self.convoy.speed * t;
        let axles = self.convoy.axles();
        let mut sum = 0.0;
        for a in &axles[self.convoy.active_range(t, self.span)] {
            let x = front - a.offset;
            let arm = skew_torque_factor(
                x / self.span,
                self.span,
                self.skew_angle,
                self.stiffness_ratio,
            ) + self.convoy.eccentricity;
            sum += a.load * arm * mode.tors_at(x);
        }
        sum / mode.modal_mass_tors
    }
}

/// Flexural modal force of a convoy at time `t`.
pub fn modal_flexural_force(
    mode: &Mode,
    convoy: &Convoy,
    t: f64,
    deck: &DeckProperties,
) -> Result<f64> {
    Ok(ForceSampler::new(convoy, deck)?.flexural(mode, t))
}

/// Torsional modal force of a convoy at time `t`.
pub fn modal_torsional_force(
    mode: &Mode,
    convoy: &Convoy,
    t: f64,
    deck: &DeckProperties,
) -> Result<f64> {
    Ok(ForceSampler::new(convoy, deck)?.torsional(mode, t))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_minimal_train() {
        let t = Train::parse("0 170\n").unwrap();
        assert_eq!(
            t.axles(),
            &[Axle {
                offset: 0.0,
                load: 170000.0
            }]
        );
    }

    #[test]
    fn rejects_bad_trains() {
        assert!(matches!(
            Train::parse("0 170\n3 170\n2 170\n"),
            Err(Error::Validation { .. })
        ));
        assert!(matches!(
            Train::parse("0 170\n3 170\n3 170\n"),
            Err(Error::Validation { .. })
        ));
        assert!(matches!(
            Train::parse("0 -1\n"),
            Err(Error::Validation { .. })
        ));
        assert!(matches!(
            Train::parse("# nothing\n\n"),
            Err(Error::Validation { .. })
        ));
        assert!(matches!(
            Train::parse("0 170\nfoo 1\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            Train::parse("0 170 2\n"),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn hslm_a1_aggregates() {
        let t = Train::hslm_a1();
        assert_eq!(t.axles().len(), 50);
        assert!(t.axles().iter().all(|a| a.load == 170000.0));
        // leading axles of consecutive articulated bogies
        let lead: Vec<f64> = t
            .axles()
            .iter()
            .skip(6)
            .step_by(2)
            .take(19)
            .map(|a| a.offset)
            .collect();
        let regular = lead
            .windows(2)
            .filter(|w| ((w[1] - w[0]) - 18.0).abs() < 1e-9)
            .count();
        assert!(regular >= 17, "{regular}");
    }

    #[test]
    fn position_fraction() {
        let conv = Train::single(170e3).unwrap().at_speed(27.78, 0.0).unwrap();
        let p = conv.axle_position_fraction(0, 0.0, 15.0);
        assert_eq!(p.fraction, 0.0);
        assert!(p.active);
        let p = conv.axle_position_fraction(0, 15.0 / 27.78, 15.0);
        assert!((p.fraction - 1.0).abs() < 1e-15);

        let train = Train::new(vec![
            Axle {
                offset: 0.0,
                load: 1.0,
            },
            Axle {
                offset: 18.0,
                load: 1.0,
            },
        ])
        .unwrap();
        let conv = train.at_speed(190.0 / 3.6, 0.0).unwrap();
        let p = conv.axle_position_fraction(1, 0.2, 24.0);
        assert!(p.fraction < 0.0);
        assert!(!p.active);
        assert!(((190.0 / 3.6 * 0.2 - 18.0) / 24.0 - p.fraction).abs() < 1e-15);
    }

    #[test]
    fn active_range_matches_fraction_rule() {
        let conv = Train::hslm_a1().at_speed(50.0, 0.0).unwrap();
        for i in 0..2000 {
            let t = i as f64 * 0.005;
            let r = conv.active_range(t, 24.0);
            for k in 0..conv.axles().len() {
                assert_eq!(
                    r.contains(&k),
                    conv.axle_position_fraction(k, t, 24.0).active,
                    "t={t} k={k}"
                );
            }
        }
    }

    #[test]
    fn skew_torque_values() {
        let k = (3.2e10 * 1.3921) / (1.28e10 * 2.6741);
        let a = 10f64.to_radians();
        let per_axle = 170e3 * skew_torque_factor(0.5, 24.0, a, k);
        let cot = 1.0 / a.tan();
        let direct = 170e3 * 24.0 * 0.25 * cot / (2.0 * (1.0 + k * cot * cot));
        assert!((per_axle - direct).abs() < 1e-9 * direct);
        assert!((per_axle - 6.75e4).abs() < 0.01e4);
        assert_eq!(skew_torque_factor(0.0, 24.0, a, k), 0.0);
        assert_eq!(skew_torque_factor(1.0, 24.0, a, k), 0.0);
        assert_eq!(skew_torque_factor(0.3, 24.0, 0.0, k), 0.0);
    }

    #[test]
    fn skew_torque_shape() {
        let k = 1.3;
        for deg in [5.0, 20.0, 40.0] {
            let a = f64::to_radians(deg);
            let peak = skew_torque_factor(0.5, 24.0, a, k);
            for i in 0..=100 {
                let e = i as f64 / 100.0;
                let v = skew_torque_factor(e, 24.0, a, k);
                let mirrored = skew_torque_factor(1.0 - e, 24.0, a, k);
                assert!((v - mirrored).abs() < 1e-12 * peak);
                assert!(v <= peak);
            }
        }
        // decreasing towards α = 0 over (0°, 45°]
        let mut prev = f64::INFINITY;
        for deg in (1..=45).rev() {
            let v = skew_torque_factor(0.3, 24.0, f64::to_radians(deg as f64), k);
            assert!(v < prev);
            prev = v;
        }
    }

    #[test]
    fn convoy_validation() {
        let t = Train::single(1.0).unwrap();
        assert!(t.at_speed(0.0, 0.0).is_err());
        assert!(t.at_speed(f64::NAN, 0.0).is_err());
        assert!(t.at_speed(10.0, f64::INFINITY).is_err());
    }
}
