//! Exact stepping of `ẅ + 2ξωẇ + ω²w = Q(t)` for forcing that is linear
//! between grid points.
//!
//! With `Q` interpolated linearly over each step, the recurrences
//!
//! ```text
//! w_{i+1} = A w_i + B ẇ_i + C Q_i + D Q_{i+1}
//! ẇ_{i+1} = A' w_i + B' ẇ_i + C' Q_i + D' Q_{i+1}
//! ```
//!
//! reproduce the analytical solution at every grid point.

use crate::error::{Error, Result};

/// Recurrence coefficients for one `(ω, ξ, Δt)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepCoefficients {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub a_p: f64,
    pub b_p: f64,
    pub c_p: f64,
    pub d_p: f64,
    pub omega: f64,
    pub xi: f64,
    pub dt: f64,
}

impl StepCoefficients {
    /// Underdamped coefficients; `ξ ≥ 1` is rejected.
    pub fn new(omega: f64, xi: f64, dt: f64) -> Result<Self> {
        if !(omega > 0.0) || !omega.is_finite() {
            return Err(Error::validation(
                "omega",
                format!("{omega} must be positive"),
            ));
        }
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(Error::validation("dt", format!("{dt} must be positive")));
        }
        if xi >= 1.0 {
            return Err(Error::UnsupportedDamping(xi));
        }
        if !(xi >= 0.0) {
            return Err(Error::validation("xi", format!("{xi} must be in [0, 1)")));
        }
        let root = (1.0 - xi * xi).sqrt();
        let wd = omega * root;
        let (s, c) = (wd * dt).sin_cos();
        let e = (-xi * omega * dt).exp();
        let k = omega * omega;
        let wdt = omega * dt;
        let r = xi / root;

        let a = e * (r * s + c);
        let b = e * s / wd;
        let cc = (2.0 * xi / wdt
            + e * (((1.0 - 2.0 * xi * xi) / (wd * dt) - r) * s - (1.0 + 2.0 * xi / wdt) * c))
            / k;
        let d = (1.0 - 2.0 * xi / wdt
            + e * ((2.0 * xi * xi - 1.0) / (wd * dt) * s + 2.0 * xi / wdt * c))
            / k;
        let a_p = -e * omega / root * s;
        let b_p = e * (c - r * s);
        let c_p = (-1.0 / dt + e * ((omega / root + xi / (dt * root)) * s + c / dt)) / k;
        let d_p = (1.0 - e * (r * s + c)) / (k * dt);
        Ok(Self {
            a,
            b,
            c: cc,
            d,
            a_p,
            b_p,
            c_p,
            d_p,
            omega,
            xi,
            dt,
        })
    }

    /// Advances one step with forcing `q0` at the start and `q1` at the end.
    #[inline]
    pub fn step(&self, state: ModalState, q0: f64, q1: f64) -> ModalState {
        let w = self.a * state.w + self.b * state.w_dot + self.c * q0 + self.d * q1;
        let w_dot = self.a_p * state.w + self.b_p * state.w_dot + self.c_p * q0 + self.d_p * q1;
        ModalState {
            w,
            w_dot,
            w_ddot: q1 - 2.0 * self.xi * self.omega * w_dot - self.omega * self.omega * w,
        }
    }
}

/// Generalized coordinate, its rate and its acceleration.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ModalState {
    pub w: f64,
    pub w_dot: f64,
    pub w_ddot: f64,
}

impl ModalState {
    /// State with the acceleration taken from the equation of motion.
    pub fn with_rates(w: f64, w_dot: f64, q: f64, omega: f64, xi: f64) -> Self {
        Self {
            w,
            w_dot,
            w_ddot: q - 2.0 * xi * omega * w_dot - omega * omega * w,
        }
    }
}

/// States at `t = 0, Δt, …` for forcing sampled on the same grid, starting
/// from rest.
pub fn integrate(omega: f64, xi: f64, dt: f64, forcing: &[f64]) -> Result<Vec<ModalState>> {
    let coeffs = StepCoefficients::new(omega, xi, dt)?;
    Ok(integrate_with(
        &coeffs,
        ModalState::with_rates(0.0, 0.0, forcing.first().copied().unwrap_or(0.0), omega, xi),
        forcing,
    ))
}

/// As [`integrate`] from a given initial state.
pub fn integrate_with(
    coeffs: &StepCoefficients,
    initial: ModalState,
    forcing: &[f64],
) -> Vec<ModalState> {
    let mut out = Vec::with_capacity(forcing.len());
    if forcing.is_empty() {
        return out;
    }
    let mut state = initial;
    out.push(state);
    for q in forcing.windows(2) {
        state = coeffs.step(state, q[0], q[1]);
        out.push(state);
    }
    out
}
