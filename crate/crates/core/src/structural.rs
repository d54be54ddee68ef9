//! IS-LM-supply block and its reduced form.
//!
//! ```text
//!   IS      y = k_is g - s r + u_d
//!   LM      m = y + p - b_lm r - u_m
//!   supply  y = e (p - p_e)
//! ```
//!
//! Eliminating `r` and `p` gives `y = alpha_m (m - p_e) + alpha_g g +
//! alpha_ud u_d + alpha_um u_m` with common denominator
//! `D = 1 + 1/e + b_lm/s`, and `p = p_e + c y` with `c = 1/e`.
//!
//! Game modules work in units of the output effect of `m`: the policy mix is
//! `M = m + (alpha_g/alpha_m) g` and the composite shock is
//! `u = (alpha_ud u_d + alpha_um u_m)/alpha_m`, so that
//! `y = alpha_m (M - M_e + u)` with `M_e = p_e` under rational expectations.

use crate::error::{ensure_finite, ensure_positive, PolicyError, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StructuralParams {
    /// Fiscal multiplier in the IS curve.
    pub k_is: f64,
    /// Interest sensitivity of goods demand.
    pub s: f64,
    /// Interest semi-elasticity of money demand.
    pub b_lm: f64,
    /// Slope of the surprise supply curve.
    pub e: f64,
}

impl StructuralParams {
    pub fn new(k_is: f64, s: f64, b_lm: f64, e: f64) -> Result<Self> {
        let params = StructuralParams { k_is, s, b_lm, e };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        ensure_positive("structural.k_is", self.k_is)?;
        ensure_positive("structural.s", self.s)?;
        ensure_positive("structural.b_lm", self.b_lm)?;
        ensure_positive("structural.e", self.e)
    }

    fn denominator(&self) -> Result<f64> {
        let d = 1.0 / self.e + 1.0 + self.b_lm / self.s;
        if d.is_finite() && d > f64::MIN_POSITIVE {
            Ok(d)
        } else {
            Err(PolicyError::SingularSystem { denominator: d })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct StructuralShock {
    /// Goods-demand shock.
    pub u_d: f64,
    /// Money-demand shock.
    pub u_m: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StructuralSolution {
    pub y: f64,
    pub p: f64,
    pub r: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedForm {
    pub alpha_m: f64,
    pub alpha_g: f64,
    pub alpha_ud: f64,
    pub alpha_um: f64,
    /// Price response to output, `p = p_e + c y`.
    pub c: f64,
}

impl ReducedForm {
    /// Output implied by the reduced form.
    pub fn output(&self, m: f64, g: f64, p_e: f64, shock: StructuralShock) -> f64 {
        self.alpha_m * (m - p_e)
            + self.alpha_g * g
            + self.alpha_ud * shock.u_d
            + self.alpha_um * shock.u_m
    }

    pub fn price(&self, p_e: f64, y: f64) -> f64 {
        p_e + self.c * y
    }

    /// Units of `m` equivalent to one unit of `g`.
    pub fn fiscal_scale(&self) -> f64 {
        self.alpha_g / self.alpha_m
    }

    /// Aggregate policy mix `M = m + (alpha_g/alpha_m) g`.
    pub fn policy_mix(&self, m: f64, g: f64) -> f64 {
        m + self.fiscal_scale() * g
    }

    /// Expected price level that zeroes anticipated output: with no shocks and
    /// policy at its anticipated value, `p_e = M_e`.
    pub fn rational_expected_price(&self, m_e: f64, g_e: f64) -> f64 {
        self.policy_mix(m_e, g_e)
    }
}

/// Solves the three structural equations for `(y, p, r)`.
pub fn structural_solve(
    params: &StructuralParams,
    m: f64,
    g: f64,
    p_e: f64,
    shock: StructuralShock,
) -> Result<StructuralSolution> {
    params.validate()?;
    for (name, v) in [
        ("m", m),
        ("g", g),
        ("p_e", p_e),
        ("u_d", shock.u_d),
        ("u_m", shock.u_m),
    ] {
        ensure_finite(name, v)?;
    }
    let d = params.denominator()?;
    let ratio = params.b_lm / params.s;
    let y = (m - p_e + ratio * params.k_is * g + ratio * shock.u_d + shock.u_m) / d;
    let p = p_e + y / params.e;
    let r = (params.k_is * g + shock.u_d - y) / params.s;
    Ok(StructuralSolution { y, p, r })
}

pub fn reduced_form_coefficients(params: &StructuralParams) -> Result<ReducedForm> {
    params.validate()?;
    let d = params.denominator()?;
    let ratio = params.b_lm / params.s;
    Ok(ReducedForm {
        alpha_m: 1.0 / d,
        alpha_g: ratio * params.k_is / d,
        alpha_ud: ratio / d,
        alpha_um: 1.0 / d,
        c: 1.0 / params.e,
    })
}

/// Demand disturbance in policy-mix units.
pub fn composite_shock(params: &StructuralParams, shock: StructuralShock) -> Result<f64> {
    let rf = reduced_form_coefficients(params)?;
    Ok((rf.alpha_ud * shock.u_d + rf.alpha_um * shock.u_m) / rf.alpha_m)
}
