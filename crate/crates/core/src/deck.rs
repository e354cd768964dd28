//! Deck and run parameters shared by every solver.
//!
//! All quantities are strict SI: lengths in m, masses per length in kg/m,
//! stiffnesses in N·m², angles in radians.

use crate::error::{Error, Result};

/// Largest supported skew angle, 60°.
pub const MAX_SKEW: f64 = std::f64::consts::FRAC_PI_3;

/// Geometry, stiffness, mass, skew and damping of one simply-supported deck.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeckProperties {
    /// Clear span `L` [m].
    pub span_length: f64,
    /// Young's modulus `E` [N/m²].
    pub elastic_modulus: f64,
    /// Poisson ratio `ν`.
    pub poisson_ratio: f64,
    /// Second moment of area `I` [m⁴].
    pub second_moment: f64,
    /// Torsion constant `J` [m⁴].
    pub torsion_constant: f64,
    /// Mass per unit length `m` [kg/m].
    pub mass_per_length: f64,
    /// Radius of gyration `r` [m].
    pub gyration_radius: f64,
    /// Skew angle `α` [rad].
    pub skew_angle: f64,
    /// Flexural modal damping ratio `ξ`.
    pub damping_ratio: f64,
    /// Torsional modal damping ratio `ξ_t`.
    pub torsional_damping_ratio: f64,
}

/// Stiffness quantities derived from a [`DeckProperties`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedConstants {
    /// Shear modulus `G = E / (2(1+ν))` [N/m²].
    pub shear_modulus: f64,
    /// Flexural rigidity `EI` [N·m²].
    pub flexural_rigidity: f64,
    /// Torsional rigidity `GJ` [N·m²].
    pub torsional_rigidity: f64,
    /// Stiffness ratio `K = EI / GJ`.
    pub stiffness_ratio: f64,
}

fn check(field: &str, value: f64, ok: bool, expect: &str) -> Result<()> {
    if !value.is_finite() {
        return Err(Error::validation(field, format!("{value} is not finite")));
    }
    if !ok {
        return Err(Error::validation(
            field,
            format!("{value} violates {expect}"),
        ));
    }
    Ok(())
}

impl DeckProperties {
    pub fn validate(&self) -> Result<()> {
        check("L", self.span_length, self.span_length > 0.0, "L > 0")?;
        check(
            "E",
            self.elastic_modulus,
            self.elastic_modulus > 0.0,
            "E > 0",
        )?;
        let nu = self.poisson_ratio;
        check("nu", nu, (0.0..0.5).contains(&nu), "0 <= nu < 0.5")?;
        check("I", self.second_moment, self.second_moment > 0.0, "I > 0")?;
        check(
            "J",
            self.torsion_constant,
            self.torsion_constant > 0.0,
            "J > 0",
        )?;
        check(
            "m",
            self.mass_per_length,
            self.mass_per_length > 0.0,
            "m > 0",
        )?;
        check(
            "r",
            self.gyration_radius,
            self.gyration_radius >= 0.0,
            "r >= 0",
        )?;
        let a = self.skew_angle;
        check(
            "alpha_deg",
            a,
            (0.0..=MAX_SKEW).contains(&a),
            "0 <= alpha <= 60 deg",
        )?;
        let xi = self.damping_ratio;
        check("xi", xi, (0.0..1.0).contains(&xi), "0 <= xi < 1")?;
        let xt = self.torsional_damping_ratio;
        check("xi_t", xt, (0.0..1.0).contains(&xt), "0 <= xi_t < 1")?;
        Ok(())
    }

    /// Validates the deck and returns `G`, `EI`, `GJ` and `K`.
    pub fn derive_constants(&self) -> Result<DerivedConstants> {
        self.validate()?;
        let shear_modulus = self.elastic_modulus / (2.0 * (1.0 + self.poisson_ratio));
        let flexural_rigidity = self.elastic_modulus * self.second_moment;
        let torsional_rigidity = shear_modulus * self.torsion_constant;
        Ok(DerivedConstants {
            shear_modulus,
            flexural_rigidity,
            torsional_rigidity,
            stiffness_ratio: flexural_rigidity / torsional_rigidity,
        })
    }

    /// Copy of the deck with a new skew angle [rad].
    pub fn with_skew(&self, skew_angle: f64) -> Self {
        Self {
            skew_angle,
            ..*self
        }
    }

    /// Copy of the deck with `J` chosen so that `GJ = ratio · EI`.
    pub fn with_stiffness_ratio(&self, ratio: f64) -> Result<Self> {
        check("GJ/EI", ratio, ratio > 0.0, "GJ/EI > 0")?;
        let c = self.derive_constants()?;
        Ok(Self {
            torsion_constant: ratio * c.flexural_rigidity / c.shear_modulus,
            ..*self
        })
    }

    /// Copy of the deck with every stiffness scaled so that `EI` and `GJ`
    /// take the given values at the deck's current `E` and `ν`.
    pub fn with_rigidities(&self, flexural: f64, torsional: f64) -> Result<Self> {
        let c = self.derive_constants()?;
        Ok(Self {
            second_moment: flexural / self.elastic_modulus,
            torsion_constant: torsional / c.shear_modulus,
            ..*self
        })
    }
}

/// Numerical settings for one dynamic run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunSettings {
    pub n_modes: usize,
    /// Time step [s].
    pub dt: f64,
    /// Evaluation abscissa [m]; `None` means mid-span.
    pub eval_position: Option<f64>,
    /// Lateral offset of the evaluation point from the centreline [m].
    pub lateral_offset: f64,
    /// Free-vibration time kept after the last axle leaves [s]; `None` means `5/f₁`.
    pub tail_time: Option<f64>,
}

impl Default for RunSettings {
    fn default() -> Self {
        Self {
            n_modes: 5,
            dt: 0.001,
            eval_position: None,
            lateral_offset: 0.0,
            tail_time: None,
        }
    }
}

impl RunSettings {
    pub fn validate(&self, deck: &DeckProperties) -> Result<()> {
        if self.n_modes == 0 {
            return Err(Error::validation("n_modes", "must be at least 1"));
        }
        check("dt", self.dt, self.dt > 0.0, "dt > 0")?;
        let x = self.x_eval(deck);
        check(
            "x_eval",
            x,
            (0.0..=deck.span_length).contains(&x),
            "0 <= x_eval <= L",
        )?;
        check("y_eval", self.lateral_offset, true, "")?;
        if let Some(tail) = self.tail_time {
            check("tail_time", tail, tail >= 0.0, "tail_time >= 0")?;
        }
        Ok(())
    }

    pub fn x_eval(&self, deck: &DeckProperties) -> f64 {
        self.eval_position.unwrap_or(0.5 * deck.span_length)
    }

    pub fn tail(&self, f1_hz: f64) -> f64 {
        self.tail_time.unwrap_or(5.0 / f1_hz)
    }

    /// Warning text when `dt` is coarser than `1/(20 f_max)`.
    ///
    /// The stepping is exact for piecewise-linear forcing, so a coarse step only
    /// limits how finely the moving-load forcing is sampled; it is reported, not
    /// rejected.
    pub fn time_step_warning(&self, f_max_hz: f64) -> Option<String> {
        let limit = 1.0 / (20.0 * f_max_hz);
        (self.dt > limit).then(|| {
            format!(
                "dt = {} s exceeds 1/(20 f_max) = {:.3e} s for f_max = {:.3} Hz",
                self.dt, limit, f_max_hz
            )
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example_2() -> DeckProperties {
        DeckProperties {
            span_length: 24.0,
            elastic_modulus: 3.2e10,
            poisson_ratio: 0.25,
            second_moment: 1.3921,
            torsion_constant: 2.6741,
            mass_per_length: 9774.0,
            gyration_radius: 0.5967,
            skew_angle: 10f64.to_radians(),
            damping_ratio: 0.01,
            torsional_damping_ratio: 0.0,
        }
    }

    #[test]
    fn shear_modulus_from_poisson() {
        let c = example_2().derive_constants().unwrap();
        assert_eq!(c.shear_modulus, 1.28e10);
        let nu0 = DeckProperties {
            poisson_ratio: 0.0,
            ..example_2()
        };
        assert_eq!(nu0.derive_constants().unwrap().shear_modulus, 1.6e10);
    }

    #[test]
    fn stiffness_ratio_example_2() {
        let c = example_2().derive_constants().unwrap();
        let expected = (3.2e10 * 1.3921) / (1.28e10 * 2.6741);
        assert!((c.stiffness_ratio - expected).abs() < 1e-14 * expected);
        assert!((c.stiffness_ratio - 1.3015).abs() < 5e-5);
    }

    #[test]
    fn rejects_out_of_range_fields() {
        let bad = DeckProperties {
            poisson_ratio: 0.5,
            ..example_2()
        };
        match bad.derive_constants() {
            Err(Error::Validation { field, .. }) => assert_eq!(field, "nu"),
            other => panic!("unexpected {other:?}"),
        }
        let bad = DeckProperties {
            span_length: f64::NAN,
            ..example_2()
        };
        assert!(matches!(bad.validate(), Err(Error::Validation { field, .. }) if field == "L"));
        let bad = example_2().with_skew(61f64.to_radians());
        assert!(bad.validate().is_err());
        let bad = DeckProperties {
            damping_ratio: 1.0,
            ..example_2()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn stiffness_ratio_override() {
        let d = example_2().with_stiffness_ratio(1.0).unwrap();
        let c = d.derive_constants().unwrap();
        assert!((c.torsional_rigidity / c.flexural_rigidity - 1.0).abs() < 1e-14);
        assert!(example_2().with_stiffness_ratio(0.0).is_err());
    }

    #[test]
    fn run_settings_defaults() {
        let s = RunSettings::default();
        let d = example_2();
        s.validate(&d).unwrap();
        assert_eq!(s.x_eval(&d), 12.0);
        assert_eq!(s.tail(5.0), 1.0);
        assert!(s.time_step_warning(145.6).is_some());
        assert!(s.time_step_warning(10.0).is_none());
        let bad = RunSettings {
            eval_position: Some(25.0),
            ..s
        };
        assert!(bad.validate(&d).is_err());
    }
}
