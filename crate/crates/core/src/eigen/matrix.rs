//! Boundary-condition (characteristic) matrices of both deck models.
//!
//! Columns hold the flexural coefficients `C₁..C₄` of
//! `φ(x) = C₁ sin βx + C₂ cos βx + C₃ sinh βx + C₄ cosh βx`, followed in the
//! analytical model by the torsional coefficients `C₅, C₆` of
//! `ϕ(x) = C₅ sin λx + C₆ cos λx`.
//!
//! Rows, analytical model (6×6):
//!
//! | row | condition |
//! |-----|-----------|
//! | 1, 2 | `φ(0) = 0`, `φ(L) = 0` |
//! | 3, 4 | `ϕ cos α − φ' sin α = 0` at 0 and L |
//! | 5, 6 | `(GJ ϕ' sin α + EI φ'' cos α) / (EIβ²) = 0` at 0 and L |
//!
//! Rows, simplified model (4×4): `φ(0)`, `φ(L)`, then
//! `(EI φ''(0) − k_θ φ'(0)) / (EIβ²)` and `(EI φ''(L) + k_θ φ'(L)) / (EIβ²)`.
//!
//! Every row evaluated at `x = L` is divided by `cosh βL`. The moment rows are
//! divided by `EIβ²`. Both are positive row scalings, so roots are unchanged.

use nalgebra::DMatrix;

use super::{Beam, Model};
use crate::error::{Error, Result};

/// Function basis used for the hyperbolic part of the flexural shape.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Basis {
    /// `sinh βx, cosh βx`, with rows at `x = L` divided by `cosh βL`.
    Hyperbolic,
    /// `e^{−βx}, e^{β(x−L)}`: bounded on [0, L] and well conditioned for large βL.
    Exponential,
}

/// Unscaled internal coefficients of the characteristic matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MatrixCoefficients {
    /// `a₁ = β sin α`, `a₂ = EIβ² cos α`, `a₃ = GJλ sin α`.
    Analytical { a1: f64, a2: f64, a3: f64 },
    /// Last-row entries `a₄₁..a₄₄` of the spring-supported beam matrix.
    Simplified {
        a41: f64,
        a42: f64,
        a43: f64,
        a44: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct CharacteristicMatrix {
    pub beta: f64,
    /// Torsional wavenumber λ (analytical model only).
    pub lambda: Option<f64>,
    pub basis: Basis,
    pub entries: DMatrix<f64>,
    pub coefficients: MatrixCoefficients,
}

impl CharacteristicMatrix {
    pub fn order(&self) -> usize {
        self.entries.nrows()
    }

    pub fn determinant(&self) -> f64 {
        self.entries.clone().determinant()
    }

    /// Singular values in decreasing order.
    pub fn singular_values(&self) -> Vec<f64> {
        let mut s: Vec<f64> = self
            .entries
            .clone()
            .singular_values()
            .iter()
            .copied()
            .collect();
        s.sort_by(|a, b| b.total_cmp(a));
        s
    }
}

/// Values of the four flexural basis functions (or a derivative) at one end.
///
/// `order` is the derivative order 0, 1 or 2. Rows at `x = L` in the
/// hyperbolic basis come back already divided by `cosh βL`.
pub(crate) fn flex_row(basis: Basis, beta: f64, l: f64, at_end: bool, order: u8) -> [f64; 4] {
    let x = if at_end { l } else { 0.0 };
    let (s, c) = (beta * x).sin_cos();
    let (trig_scale, h1, h2) = match (basis, at_end) {
        (Basis::Hyperbolic, false) => (1.0, 0.0, 1.0),
        (Basis::Hyperbolic, true) => {
            // sinh(βL)/cosh(βL), cosh(βL)/cosh(βL), and 1/cosh(βL) without overflow
            let q = (-2.0 * beta * l).exp();
            (
                2.0 * (-beta * l).exp() / (1.0 + q),
                (1.0 - q) / (1.0 + q),
                1.0,
            )
        }
        (Basis::Exponential, _) => (1.0, (-beta * x).exp(), (beta * (x - l)).exp()),
    };
    let (s, c) = (s * trig_scale, c * trig_scale);
    let b2 = beta * beta;
    match (basis, order) {
        // hyperbolic columns: h1 = sinh-like, h2 = cosh-like
        (Basis::Hyperbolic, 0) => [s, c, h1, h2],
        (Basis::Hyperbolic, 1) => [beta * c, -beta * s, beta * h2, beta * h1],
        (Basis::Hyperbolic, _) => [-b2 * s, -b2 * c, b2 * h1, b2 * h2],
        // exponential columns: h1 = e^{−βx}, h2 = e^{β(x−L)}
        (Basis::Exponential, 0) => [s, c, h1, h2],
        (Basis::Exponential, 1) => [beta * c, -beta * s, -beta * h1, beta * h2],
        (Basis::Exponential, _) => [-b2 * s, -b2 * c, b2 * h1, b2 * h2],
    }
}

/// Torsional basis values `[sin λx, cos λx]` (or first derivative) at one end,
/// scaled like the matching flexural row.
fn tors_row(basis: Basis, beta: f64, lambda: f64, l: f64, at_end: bool, order: u8) -> [f64; 2] {
    let x = if at_end { l } else { 0.0 };
    let (s, c) = (lambda * x).sin_cos();
    let scale = if basis == Basis::Hyperbolic && at_end {
        let q = (-2.0 * beta * l).exp();
        2.0 * (-beta * l).exp() / (1.0 + q)
    } else {
        1.0
    };
    match order {
        0 => [scale * s, scale * c],
        _ => [scale * lambda * c, -scale * lambda * s],
    }
}

impl Beam {
    pub(crate) fn assemble(&self, beta: f64, basis: Basis) -> Result<CharacteristicMatrix> {
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(Error::Domain(format!("beta must be positive, got {beta}")));
        }
        let l = self.span;
        let b2 = beta * beta;
        match self.model {
            Model::Analytical => {
                let lambda = self.lambda(beta);
                let mut a = DMatrix::zeros(6, 6);
                for (k, at_end) in [false, true].into_iter().enumerate() {
                    let d0 = flex_row(basis, beta, l, at_end, 0);
                    let d1 = flex_row(basis, beta, l, at_end, 1);
                    let d2 = flex_row(basis, beta, l, at_end, 2);
                    let t0 = tors_row(basis, beta, lambda, l, at_end, 0);
                    let t1 = tors_row(basis, beta, lambda, l, at_end, 1);
                    for j in 0..4 {
                        a[(k, j)] = d0[j];
                        a[(2 + k, j)] = -self.sin_a * d1[j];
                        a[(4 + k, j)] = self.cos_a * d2[j] / b2;
                    }
                    for j in 0..2 {
                        a[(2 + k, 4 + j)] = self.cos_a * t0[j];
                        a[(4 + k, 4 + j)] = self.gj * self.sin_a * t1[j] / (self.ei * b2);
                    }
                }
                Ok(CharacteristicMatrix {
                    beta,
                    lambda: Some(lambda),
                    basis,
                    entries: a,
                    coefficients: MatrixCoefficients::Analytical {
                        a1: beta * self.sin_a,
                        a2: self.ei * b2 * self.cos_a,
                        a3: self.gj * lambda * self.sin_a,
                    },
                })
            }
            Model::Simplified => {
                let k = self.k_theta;
                let mut b = DMatrix::zeros(4, 4);
                for (row, at_end) in [false, true].into_iter().enumerate() {
                    let d0 = flex_row(basis, beta, l, at_end, 0);
                    let d1 = flex_row(basis, beta, l, at_end, 1);
                    let d2 = flex_row(basis, beta, l, at_end, 2);
                    // reaction moment opposes the end slope at both supports
                    let sign = if at_end { 1.0 } else { -1.0 };
                    for j in 0..4 {
                        b[(row, j)] = d0[j];
                        b[(2 + row, j)] = (self.ei * d2[j] + sign * k * d1[j]) / (self.ei * b2);
                    }
                }
                let bl = beta * l;
                let (s, c) = bl.sin_cos();
                let (sh, ch) = (bl.sinh(), bl.cosh());
                let ei_b2 = self.ei * b2;
                Ok(CharacteristicMatrix {
                    beta,
                    lambda: None,
                    basis,
                    entries: b,
                    coefficients: MatrixCoefficients::Simplified {
                        a41: k * beta * c - ei_b2 * s,
                        a42: -k * beta * s - ei_b2 * c,
                        a43: k * beta * ch + ei_b2 * sh,
                        a44: k * beta * sh + ei_b2 * ch,
                    },
                })
            }
        }
    }
}
