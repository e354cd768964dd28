use super::Model;
use crate::error::{Error, Result};

/// One eigenpair of the deck.
///
/// Shape coefficients are normalized so that `(C₁, …, C₆)` has unit
/// Euclidean norm, with the sign fixed so the flexural shape is positive at
/// mid-span (quarter-span when mid-span is a node).
#[derive(Debug, Clone, PartialEq)]
pub struct Mode {
    /// 1-based position in the returned list.
    pub index: usize,
    pub model: Model,
    /// Circular frequency ω [rad/s].
    pub omega: f64,
    /// Flexural wavenumber β [1/m].
    pub beta: f64,
    /// Torsional wavenumber λ [1/m]; `None` for the simplified model.
    pub lambda: Option<f64>,
    /// `C₁..C₄` of `C₁ sin βx + C₂ cos βx + C₃ sinh βx + C₄ cosh βx`.
    pub flex_coeffs: [f64; 4],
    /// `C₅, C₆` of `C₅ sin λx + C₆ cos λx`.
    pub tors_coeffs: Option<[f64; 2]>,
    /// `∫₀ᴸ m φ² dx`.
    pub modal_mass_flex: f64,
    /// `∫₀ᴸ m r² ϕ² dx`.
    pub modal_mass_tors: f64,
    pub(crate) span: f64,
    /// Coefficients of `e^{−βx}` and `e^{β(x−L)}`, equivalent to `C₃, C₄`
    /// but free of cancellation when evaluated.
    pub(crate) decay: [f64; 2],
}

impl Mode {
    pub fn frequency_hz(&self) -> f64 {
        self.omega / std::f64::consts::TAU
    }

    pub fn span(&self) -> f64 {
        self.span
    }

    /// Share of the modal kinetic energy carried by bending,
    /// `M_f / (M_f + M_t)`.
    pub fn flexural_share(&self) -> f64 {
        self.modal_mass_flex / (self.modal_mass_flex + self.modal_mass_tors)
    }

    fn check(&self, x: f64) -> Result<()> {
        if (0.0..=self.span).contains(&x) {
            Ok(())
        } else {
            Err(Error::Domain(format!("x = {x} outside [0, {}]", self.span)))
        }
    }

    /// `[sin βx, cos βx, e^{−βx}, e^{β(x−L)}]`
    #[inline]
    fn flex_terms(&self, x: f64) -> (f64, f64, f64, f64) {
        let (s, c) = (self.beta * x).sin_cos();
        let e1 = (-self.beta * x).exp();
        let e2 = (self.beta * (x - self.span)).exp();
        (s, c, e1, e2)
    }

    /// Flexural shape without range checking.
    #[inline]
    pub(crate) fn flex_at(&self, x: f64) -> f64 {
        let (s, c, e1, e2) = self.flex_terms(x);
        let [c1, c2, ..] = self.flex_coeffs;
        c1 * s + c2 * c + self.decay[0] * e1 + self.decay[1] * e2
    }

    #[inline]
    pub(crate) fn slope_at(&self, x: f64) -> f64 {
        let (s, c, e1, e2) = self.flex_terms(x);
        let [c1, c2, ..] = self.flex_coeffs;
        self.beta * (c1 * c - c2 * s - self.decay[0] * e1 + self.decay[1] * e2)
    }

    #[inline]
    pub(crate) fn curvature_at(&self, x: f64) -> f64 {
        let (s, c, e1, e2) = self.flex_terms(x);
        let [c1, c2, ..] = self.flex_coeffs;
        self.beta * self.beta * (-c1 * s - c2 * c + self.decay[0] * e1 + self.decay[1] * e2)
    }

    /// Torsional shape without range checking; zero in the simplified model.
    #[inline]
    pub(crate) fn tors_at(&self, x: f64) -> f64 {
        match (self.tors_coeffs, self.lambda) {
            (Some([c5, c6]), Some(lambda)) => {
                let (s, c) = (lambda * x).sin_cos();
                c5 * s + c6 * c
            }
            _ => 0.0,
        }
    }

    #[inline]
    pub(crate) fn tors_slope_at(&self, x: f64) -> f64 {
        match (self.tors_coeffs, self.lambda) {
            (Some([c5, c6]), Some(lambda)) => {
                let (s, c) = (lambda * x).sin_cos();
                lambda * (c5 * c - c6 * s)
            }
            _ => 0.0,
        }
    }

    pub fn eval_flex_shape(&self, x: f64) -> Result<f64> {
        self.check(x)?;
        Ok(self.flex_at(x))
    }

    pub fn eval_flex_slope(&self, x: f64) -> Result<f64> {
        self.check(x)?;
        Ok(self.slope_at(x))
    }

    pub fn eval_flex_curvature(&self, x: f64) -> Result<f64> {
        self.check(x)?;
        Ok(self.curvature_at(x))
    }

    pub fn eval_tors_shape(&self, x: f64) -> Result<f64> {
        self.check(x)?;
        Ok(self.tors_at(x))
    }

    pub fn eval_tors_slope(&self, x: f64) -> Result<f64> {
        self.check(x)?;
        Ok(self.tors_slope_at(x))
    }
}
