//! Closed-economy policy game in reduced form.
//!
//! Output and prices follow `y = M - M_e + u` and `p = M_e + c y`, and the
//! authorities' loss is `L = p^2 + w_y (y - k_target)^2`.

use std::fmt;

use crate::error::{ensure_finite, ensure_non_negative, ensure_positive, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossParams {
    /// Weight on the output gap.
    pub w_y: f64,
    /// Desired output in excess of the natural level.
    pub k_target: f64,
}

impl LossParams {
    pub fn new(w_y: f64, k_target: f64) -> Result<Self> {
        let loss = LossParams { w_y, k_target };
        loss.validate()?;
        Ok(loss)
    }

    pub fn validate(&self) -> Result<()> {
        ensure_positive("loss.w_y", self.w_y)?;
        ensure_non_negative("loss.k_target", self.k_target)
    }

    pub fn loss(&self, p: f64, y: f64) -> f64 {
        p * p + self.w_y * (y - self.k_target) * (y - self.k_target)
    }

    /// Anticipated inflation under discretion, `w_y k_target / c`.
    pub fn inflation_bias(&self, c: f64) -> f64 {
        self.w_y * self.k_target / c
    }

    /// Expected loss at zero inflation and zero output gap.
    pub fn first_best(&self) -> f64 {
        self.w_y * self.k_target * self.k_target
    }
}

impl Default for LossParams {
    fn default() -> Self {
        LossParams {
            w_y: 1.0,
            k_target: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RegimeKind {
    Discretion,
    Commitment,
    InflationTargeting,
}

impl fmt::Display for RegimeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RegimeKind::Discretion => "discretion",
            RegimeKind::Commitment => "commitment",
            RegimeKind::InflationTargeting => "targeting",
        })
    }
}

/// Order of play between a committed central bank and a discretionary
/// fiscal authority that moves after observing `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TimingRule {
    /// `m = -u`, no response to fiscal policy.
    FixedMonetary,
    /// `m = -u - g`: fiscal actions are fully offset.
    DisciplineRule,
    /// `g = 0` imposed, `m = -u`.
    FiscalNorm,
}

/// Affine policy reaction `intercept + slope * u`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineRule {
    pub intercept: f64,
    pub slope: f64,
}

impl AffineRule {
    pub fn at(&self, u: f64) -> f64 {
        self.intercept + self.slope * u
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedOutcome {
    pub loss_params: LossParams,
    pub c: f64,
    pub shock: f64,
    /// Anticipated policy mix `M_e`.
    pub anticipated_mix: f64,
    /// Realized policy mix as a function of the shock.
    pub mix_rule: AffineRule,
    /// Realized policy mix at `shock`.
    pub mix: f64,
    /// Monetary part of the mix.
    pub m: f64,
    /// Fiscal part of the mix (in units of output effect).
    pub g: f64,
    /// Anticipated fiscal instrument.
    pub g_e: f64,
    pub y: f64,
    pub p: f64,
    pub expected_loss: f64,
}

impl ClosedOutcome {
    /// Loss realized under this outcome's policy rule when the shock is `u`.
    pub fn realized_loss_at(&self, u: f64) -> f64 {
        realized_loss(
            &self.loss_params,
            self.c,
            self.anticipated_mix,
            self.mix_rule.at(u),
            u,
        )
    }

    pub fn realized_loss(&self) -> f64 {
        self.loss_params.loss(self.p, self.y)
    }
}

/// Loss when the mix `mix` is played against expectations `anticipated_mix`.
pub fn realized_loss(loss: &LossParams, c: f64, anticipated_mix: f64, mix: f64, u: f64) -> f64 {
    let y = mix - anticipated_mix + u;
    let p = anticipated_mix + c * y;
    loss.loss(p, y)
}

fn check(loss: &LossParams, c: f64, u: f64) -> Result<()> {
    loss.validate()?;
    ensure_positive("c", c)?;
    ensure_finite("u", u)
}

fn stabilizing_outcome(
    loss: &LossParams,
    c: f64,
    u: f64,
    anticipated: f64,
    g: f64,
    g_e: f64,
) -> ClosedOutcome {
    let mix_rule = AffineRule {
        intercept: anticipated,
        slope: -1.0,
    };
    let mix = mix_rule.at(u);
    let y = (mix_rule.intercept - anticipated) + (mix_rule.slope + 1.0) * u;
    ClosedOutcome {
        loss_params: *loss,
        c,
        shock: u,
        anticipated_mix: anticipated,
        mix_rule,
        mix,
        m: mix - g,
        g,
        g_e,
        y,
        p: anticipated + c * y,
        expected_loss: anticipated * anticipated + loss.first_best(),
    }
}

/// Discretionary equilibrium: the mix is chosen after expectations form.
pub fn discretion_equilibrium(loss: &LossParams, c: f64, u: f64) -> Result<ClosedOutcome> {
    check(loss, c, u)?;
    Ok(stabilizing_outcome(
        loss,
        c,
        u,
        loss.inflation_bias(c),
        0.0,
        0.0,
    ))
}

/// Committed rule `M = -u` with `M_e = 0`.
pub fn commitment_equilibrium(loss: &LossParams, c: f64, u: f64) -> Result<ClosedOutcome> {
    check(loss, c, u)?;
    Ok(stabilizing_outcome(loss, c, u, 0.0, 0.0, 0.0))
}

/// Central bank minimizing `p^2` alone. Without supply shocks this coincides
/// with commitment.
pub fn inflation_targeting_equilibrium(loss: &LossParams, c: f64, u: f64) -> Result<ClosedOutcome> {
    commitment_equilibrium(loss, c, u)
}

pub fn regime_equilibrium(
    regime: RegimeKind,
    loss: &LossParams,
    c: f64,
    u: f64,
) -> Result<ClosedOutcome> {
    match regime {
        RegimeKind::Discretion => discretion_equilibrium(loss, c, u),
        RegimeKind::Commitment => commitment_equilibrium(loss, c, u),
        RegimeKind::InflationTargeting => inflation_targeting_equilibrium(loss, c, u),
    }
}

/// Four-stage game: rule announced, expectations formed, shock and `m`
/// observed, then the fiscal authority picks `g` at discretion.
pub fn timing_game(rule: TimingRule, loss: &LossParams, c: f64, u: f64) -> Result<ClosedOutcome> {
    check(loss, c, u)?;
    let outcome = match rule {
        // Fiscal FOC at the last stage is the discretionary FOC on M = m + g.
        TimingRule::FixedMonetary => {
            let bias = loss.inflation_bias(c);
            stabilizing_outcome(loss, c, u, bias, bias, bias)
        }
        // g has no effect on M; the fiscal authority is indifferent and stays at 0.
        TimingRule::DisciplineRule => stabilizing_outcome(loss, c, u, 0.0, 0.0, 0.0),
        TimingRule::FiscalNorm => stabilizing_outcome(loss, c, u, 0.0, 0.0, 0.0),
    };
    Ok(outcome)
}

/// Expected loss of a regime. All regimes fully absorb demand shocks, so the
/// result does not depend on the shock variance.
pub fn expected_loss_closed(
    regime: RegimeKind,
    loss: &LossParams,
    c: f64,
    shock_variance: f64,
) -> Result<f64> {
    loss.validate()?;
    ensure_positive("c", c)?;
    ensure_non_negative("shock_variance", shock_variance)?;
    Ok(match regime {
        RegimeKind::Discretion => {
            let bias = loss.inflation_bias(c);
            bias * bias + loss.first_best()
        }
        RegimeKind::Commitment | RegimeKind::InflationTargeting => loss.first_best(),
    })
}
