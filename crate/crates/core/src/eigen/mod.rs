//! Free vibration of the skew deck: characteristic matrices, roots of the
//! transcendental determinant, mode shapes, modal masses and orthogonality.
//!
//! Two models are supported. The analytical model couples vertical bending
//! with torsion through skew support conditions (six unknown coefficients per
//! mode). The simplified model keeps bending only and replaces the skew
//! supports by rotational springs of stiffness `k_θ = 2GJ/(L cot²α)`.
//!
//! Roots are located on a uniform grid in β, then refined by Brent's method.
//! The determinant and the null vector are computed with the hyperbolic
//! columns expressed as `e^{−βx}` and `e^{β(x−L)}`, which keeps every entry
//! bounded; [`assemble_analytical`] and [`assemble_simplified`] return the
//! conventional `sinh/cosh` form with the `x = L` rows divided by `cosh βL`.

mod matrix;
mod mode;
mod orthogonality;

use nalgebra::DMatrix;

pub use matrix::{Basis, CharacteristicMatrix, MatrixCoefficients};
pub use mode::Mode;
pub use orthogonality::{coupled_orthogonality_residual, orthogonality_residual};

use crate::deck::DeckProperties;
use crate::error::{Error, Result};
use crate::quadrature;
use crate::roots;

/// Which deck model to solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Model {
    /// Coupled bending–torsion beam with skew support conditions.
    Analytical,
    /// Bending-only beam on rotational springs.
    Simplified,
}

impl std::str::FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "analytical" => Ok(Model::Analytical),
            "simplified" => Ok(Model::Simplified),
            _ => Err(Error::validation(
                "model",
                format!("`{s}` is not analytical or simplified"),
            )),
        }
    }
}

/// Which roots count towards the requested number of modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeSelection {
    /// Every root, in frequency order.
    All,
    /// Only roots whose kinetic energy is mostly flexural (`M_f > M_t`).
    ///
    /// The analytical model also has torsion-dominated roots; the bending
    /// frequencies tabulated for skew decks skip them.
    FlexuralDominant,
}

/// Equivalent rotational support stiffness of the simplified model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpringBoundary {
    /// `k_θ` [N·m/rad].
    pub k_theta: f64,
}

impl SpringBoundary {
    /// `k_θ = 2GJ/(L cot²α)`, evaluated as `2GJ tan²α / L` so that α = 0 gives 0.
    pub fn from_deck(deck: &DeckProperties) -> Result<Self> {
        let c = deck.derive_constants()?;
        let t = deck.skew_angle.tan();
        Ok(Self {
            k_theta: 2.0 * c.torsional_rigidity * t * t / deck.span_length,
        })
    }
}

/// Rank tolerance on `σ_min/σ_max` at an accepted root.
pub const RANK_TOL: f64 = 1e-8;
/// Relative tolerance of the root refinement in β.
pub const ROOT_REL_TOL: f64 = 1e-12;
/// Relative tolerance of the modal mass quadrature.
pub const MASS_REL_TOL: f64 = 1e-10;
const MAX_EXTENSIONS: usize = 8;

/// Constants needed to evaluate the characteristic matrix.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Beam {
    pub(crate) model: Model,
    pub(crate) span: f64,
    pub(crate) ei: f64,
    pub(crate) gj: f64,
    pub(crate) mass: f64,
    pub(crate) gyration: f64,
    pub(crate) sin_a: f64,
    pub(crate) cos_a: f64,
    pub(crate) k_theta: f64,
}

impl Beam {
    fn new(deck: &DeckProperties, model: Model, spring: Option<SpringBoundary>) -> Result<Self> {
        let c = deck.derive_constants()?;
        let spring = match spring {
            Some(s) => {
                if !(s.k_theta >= 0.0) || !s.k_theta.is_finite() {
                    return Err(Error::validation(
                        "k_theta",
                        format!("{} must be finite and >= 0", s.k_theta),
                    ));
                }
                s
            }
            None => SpringBoundary::from_deck(deck)?,
        };
        Ok(Self {
            model,
            span: deck.span_length,
            ei: c.flexural_rigidity,
            gj: c.torsional_rigidity,
            mass: deck.mass_per_length,
            gyration: deck.gyration_radius,
            sin_a: deck.skew_angle.sin(),
            cos_a: deck.skew_angle.cos(),
            k_theta: spring.k_theta,
        })
    }

    pub(crate) fn lambda(&self, beta: f64) -> f64 {
        self.gyration * beta * beta * (self.ei / self.gj).sqrt()
    }

    fn omega(&self, beta: f64) -> f64 {
        beta * beta * (self.ei / self.mass).sqrt()
    }

    fn scan_determinant(&self, beta: f64) -> f64 {
        self.assemble(beta, Basis::Exponential)
            .map(|m| m.entries.determinant())
            .unwrap_or(f64::NAN)
    }

    /// Builds the normalized mode at an accepted root.
    fn mode_at(&self, beta: f64) -> Result<Mode> {
        let m = self.assemble(beta, Basis::Exponential)?;
        let (vector, sigma) = null_vector(&m.entries);
        let ratio_min = sigma[sigma.len() - 1] / sigma[0];
        if ratio_min > RANK_TOL {
            return Err(Error::SpuriousRoot {
                beta,
                ratio: ratio_min,
            });
        }
        let ratio_2 = sigma[sigma.len() - 2] / sigma[0];
        if ratio_2 < RANK_TOL {
            return Err(Error::RepeatedRoot {
                beta,
                ratio: ratio_2,
            });
        }
        let l = self.span;
        let decay_l = (-beta * l).exp();
        let (d3, d4) = (vector[2], vector[3]);
        let mut flex = [vector[0], vector[1], d4 * decay_l - d3, d3 + d4 * decay_l];
        let mut decay = [d3, d4];
        let mut tors = match self.model {
            Model::Analytical => Some([vector[4], vector[5]]),
            Model::Simplified => None,
        };
        let norm = flex
            .iter()
            .chain(tors.iter().flatten())
            .map(|c| c * c)
            .sum::<f64>()
            .sqrt();
        let lambda = (self.model == Model::Analytical).then(|| self.lambda(beta));
        let mut mode = Mode {
            index: 0,
            model: self.model,
            omega: self.omega(beta),
            beta,
            lambda,
            flex_coeffs: flex,
            tors_coeffs: tors,
            modal_mass_flex: 0.0,
            modal_mass_tors: 0.0,
            span: l,
            decay,
        };
        let sign_ref = [0.5 * l, 0.25 * l]
            .iter()
            .map(|&x| mode.flex_at(x))
            .chain([0.5 * l, 0.25 * l].iter().map(|&x| mode.tors_at(x)))
            .find(|v| v.abs() > 1e-8)
            .unwrap_or(1.0);
        let scale = sign_ref.signum() / norm;
        flex.iter_mut().for_each(|c| *c *= scale);
        decay.iter_mut().for_each(|c| *c *= scale);
        if let Some(t) = tors.as_mut() {
            t.iter_mut().for_each(|c| *c *= scale);
        }
        mode.flex_coeffs = flex;
        mode.decay = decay;
        mode.tors_coeffs = tors;
        let (mf, mt) = modal_masses_for(&mode, self.mass, self.gyration)?;
        mode.modal_mass_flex = mf;
        mode.modal_mass_tors = mt;
        Ok(mode)
    }
}

/// Right singular vector of the smallest singular value, and the singular
/// values sorted in decreasing order.
fn null_vector(a: &DMatrix<f64>) -> (Vec<f64>, Vec<f64>) {
    let svd = a.clone().svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    let min = *order.last().expect("non-empty matrix");
    let vector = v_t.row(min).iter().copied().collect();
    let sigma = order.iter().map(|&i| svd.singular_values[i]).collect();
    (vector, sigma)
}

fn modal_masses_for(mode: &Mode, mass: f64, gyration: f64) -> Result<(f64, f64)> {
    let l = mode.span;
    let mf = mass * quadrature::integrate(|x| mode.flex_at(x).powi(2), 0.0, l, MASS_REL_TOL, 0.0)?;
    let mt = if mode.tors_coeffs.is_some() && gyration > 0.0 {
        mass * gyration
            * gyration
            * quadrature::integrate(|x| mode.tors_at(x).powi(2), 0.0, l, MASS_REL_TOL, 0.0)?
    } else {
        0.0
    };
    Ok((mf, mt))
}

/// `(M_f, M_t)` of a mode: `∫ m φ² dx` and `∫ m r² ϕ² dx` by composite
/// Gauss–Legendre quadrature converged to 1e-10 relative.
pub fn modal_masses(mode: &Mode, deck: &DeckProperties) -> Result<(f64, f64)> {
    modal_masses_for(mode, deck.mass_per_length, deck.gyration_radius)
}

/// Characteristic matrix of the analytical model at `beta`, `sinh/cosh` form.
pub fn assemble_analytical(deck: &DeckProperties, beta: f64) -> Result<CharacteristicMatrix> {
    Beam::new(deck, Model::Analytical, None)?.assemble(beta, Basis::Hyperbolic)
}

/// Characteristic matrix of the simplified model at `beta`, `sinh/cosh` form.
pub fn assemble_simplified(deck: &DeckProperties, beta: f64) -> Result<CharacteristicMatrix> {
    Beam::new(deck, Model::Simplified, None)?.assemble(beta, Basis::Hyperbolic)
}

/// Simplified-model matrix with an explicit support stiffness.
pub fn assemble_simplified_with_spring(
    deck: &DeckProperties,
    spring: SpringBoundary,
    beta: f64,
) -> Result<CharacteristicMatrix> {
    Beam::new(deck, Model::Simplified, Some(spring))?.assemble(beta, Basis::Hyperbolic)
}

/// Configured eigenvalue problem for one deck.
#[derive(Debug, Clone)]
pub struct EigenProblem {
    beam: Beam,
    selection: ModeSelection,
}

impl EigenProblem {
    /// Analytical problems keep flexure-dominated roots by default.
    pub fn new(deck: &DeckProperties, model: Model) -> Result<Self> {
        let selection = match model {
            Model::Analytical => ModeSelection::FlexuralDominant,
            Model::Simplified => ModeSelection::All,
        };
        Ok(Self {
            beam: Beam::new(deck, model, None)?,
            selection,
        })
    }

    pub fn with_selection(mut self, selection: ModeSelection) -> Self {
        self.selection = selection;
        self
    }

    /// Overrides `k_θ` (simplified model).
    pub fn with_spring(mut self, spring: SpringBoundary) -> Result<Self> {
        if !(spring.k_theta >= 0.0) || !spring.k_theta.is_finite() {
            return Err(Error::validation(
                "k_theta",
                format!("{} must be finite and >= 0", spring.k_theta),
            ));
        }
        self.beam.k_theta = spring.k_theta;
        Ok(self)
    }

    pub fn model(&self) -> Model {
        self.beam.model
    }

    /// Scaled determinant used for root scanning.
    pub fn determinant(&self, beta: f64) -> f64 {
        self.beam.scan_determinant(beta)
    }

    /// The `n_modes` lowest selected modes.
    ///
    /// The initial scan covers β up to the wavenumber at 1.5 times the
    /// frequency of the `(n_modes+1)`-th pinned–pinned mode, in steps of
    /// `π/(40L)`. When [`ModeSelection::FlexuralDominant`] discards roots the
    /// scan continues over further windows of the same width.
    pub fn solve(&self, n_modes: usize) -> Result<Vec<Mode>> {
        if n_modes == 0 {
            return Err(Error::validation("n_modes", "must be at least 1"));
        }
        let l = self.beam.span;
        let step = std::f64::consts::PI / (40.0 * l);
        let window = 1.5f64.sqrt() * (n_modes + 1) as f64 * std::f64::consts::PI / l;
        let extensions = match self.selection {
            ModeSelection::All => 0,
            ModeSelection::FlexuralDominant => MAX_EXTENSIONS,
        };
        let mut modes = Vec::with_capacity(n_modes);
        let mut start = 0.25 * step;
        for pass in 0..=extensions {
            let end = window * (pass + 1) as f64;
            let brackets =
                roots::sign_change_brackets(|b| self.beam.scan_determinant(b), start, end, step);
            for (lo, hi) in brackets {
                let beta = roots::brent(
                    |b| self.beam.scan_determinant(b),
                    lo,
                    hi,
                    ROOT_REL_TOL,
                    0.0,
                    200,
                )
                .ok_or(Error::SpuriousRoot {
                    beta: lo,
                    ratio: f64::NAN,
                })?;
                let mut mode = self.beam.mode_at(beta)?;
                let keep = match self.selection {
                    ModeSelection::All => true,
                    ModeSelection::FlexuralDominant => mode.modal_mass_flex > mode.modal_mass_tors,
                };
                if keep {
                    mode.index = modes.len() + 1;
                    modes.push(mode);
                    if modes.len() == n_modes {
                        return Ok(modes);
                    }
                }
            }
            start = end;
        }
        Err(Error::InsufficientScanRange {
            found: modes.len(),
            requested: n_modes,
            beta_max: start,
        })
    }
}

/// Lowest `n_modes` modes of a deck with the model's default selection.
pub fn find_modes(deck: &DeckProperties, model: Model, n_modes: usize) -> Result<Vec<Mode>> {
    EigenProblem::new(deck, model)?.solve(n_modes)
}
