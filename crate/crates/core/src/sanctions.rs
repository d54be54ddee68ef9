//! Linear sanctions on national fiscal instruments and regime welfare.
//!
//! A contract with rate `t` adds `t g_i` to country `i`'s loss: deficits
//! (`g_i > 0`) are fined and surpluses rewarded. Fines are incentives only;
//! reported welfare losses exclude them.

use std::fmt;
use std::str::FromStr;

use crate::closed_policy::LossParams;
use crate::error::{ensure_finite, ensure_non_negative, ensure_positive, Result};
use crate::union_game::{
    anticipated_mix, cooperative_equilibrium, solve_nash, union_nash, UnionOutcome, UnionRule,
    UnionShock,
};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SanctionContract {
    /// Penalty per unit of fiscal instrument.
    pub t: f64,
}

impl SanctionContract {
    pub fn new(t: f64) -> Result<Self> {
        ensure_finite("union.t", t)?;
        Ok(SanctionContract { t })
    }
}

/// Nash equilibrium when each country minimizes
/// `p_i^2 + w_y (y_i - k_target)^2 + t g_i`.
///
/// At invertible rules the anticipated mix is
/// `(2 w_y k_target - t/(1 - lambda)) / (2c)` and output is fully stabilized.
pub fn sanctioned_nash(
    rule: &UnionRule,
    contract: &SanctionContract,
    loss: &LossParams,
    c: f64,
    shock: &UnionShock,
) -> Result<UnionOutcome> {
    solve_nash(rule, loss, c, shock, contract.t)
}

/// Anticipated inflation `G_e` of the sanctioned game at a non-strict rule.
pub fn anticipated_inflation(
    rule: &UnionRule,
    contract: &SanctionContract,
    loss: &LossParams,
    c: f64,
) -> Result<f64> {
    loss.validate()?;
    ensure_positive("c", c)?;
    if rule.is_strict() {
        return Ok(0.0);
    }
    Ok(anticipated_mix(rule, loss, c, contract.t))
}

/// Penalty rate removing the inflation bias under autonomy: `2 w_y k_target`.
pub fn optimal_penalty(loss: &LossParams, c: f64) -> Result<f64> {
    loss.validate()?;
    ensure_positive("c", c)?;
    Ok(2.0 * loss.w_y * loss.k_target)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnionRegime {
    /// `lambda = 0`, no sanctions.
    Autonomy,
    /// `lambda = 1`, no sanctions.
    StrictRule,
    /// `lambda = 0` with the optimal penalty.
    Sanctioned,
    /// `lambda = 1/2`, budgets set jointly.
    Cooperative,
}

impl UnionRegime {
    pub const ALL: [UnionRegime; 4] = [
        UnionRegime::Autonomy,
        UnionRegime::StrictRule,
        UnionRegime::Sanctioned,
        UnionRegime::Cooperative,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            UnionRegime::Autonomy => "autonomy",
            UnionRegime::StrictRule => "strict",
            UnionRegime::Sanctioned => "sanctioned",
            UnionRegime::Cooperative => "cooperative",
        }
    }
}

impl fmt::Display for UnionRegime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for UnionRegime {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        UnionRegime::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| format!("unknown regime '{s}'"))
    }
}

/// Equilibrium of a canonical regime for one shock realization.
pub fn regime_outcome(
    regime: UnionRegime,
    loss: &LossParams,
    c: f64,
    shock: &UnionShock,
) -> Result<UnionOutcome> {
    let outcome = match regime {
        UnionRegime::Autonomy => union_nash(&UnionRule::AUTONOMY, loss, c, shock)?,
        UnionRegime::StrictRule => union_nash(&UnionRule::STRICT, loss, c, shock)?,
        UnionRegime::Sanctioned => {
            let contract = SanctionContract::new(optimal_penalty(loss, c)?)?;
            sanctioned_nash(&UnionRule::AUTONOMY, &contract, loss, c, shock)?
        }
        UnionRegime::Cooperative => cooperative_equilibrium(&UnionRule::HALF, loss, c, shock)?,
    };
    outcome.into_result()
}

/// Per-country expected welfare loss of a regime for zero-mean shocks with
/// standard deviations `sigma_u` (common) and `sigma_a` (asymmetric).
pub fn regime_expected_loss(
    regime: UnionRegime,
    loss: &LossParams,
    c: f64,
    sigma_u: f64,
    sigma_a: f64,
) -> Result<f64> {
    loss.validate()?;
    ensure_positive("c", c)?;
    ensure_non_negative("sigma_u", sigma_u)?;
    ensure_non_negative("sigma_a", sigma_a)?;
    let first_best = loss.first_best();
    Ok(match regime {
        UnionRegime::Autonomy => {
            let bias = loss.inflation_bias(c);
            bias * bias + first_best
        }
        UnionRegime::StrictRule => {
            let var_a = sigma_a * sigma_a;
            c * c * var_a + loss.w_y * var_a + first_best
        }
        UnionRegime::Sanctioned | UnionRegime::Cooperative => first_best,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Threshold {
    pub sigma_a_star: f64,
    /// Set when `k_target = 0`: the strict rule is then never worse.
    pub degenerate: bool,
}

/// Asymmetric-shock size at which autonomy and the strict rule cost the same:
/// `(w_y k_target / c) / sqrt(c^2 + w_y)`.
pub fn autonomy_vs_rule_threshold(loss: &LossParams, c: f64) -> Result<Threshold> {
    loss.validate()?;
    ensure_positive("c", c)?;
    if loss.k_target == 0.0 {
        return Ok(Threshold {
            sigma_a_star: 0.0,
            degenerate: true,
        });
    }
    Ok(Threshold {
        sigma_a_star: loss.inflation_bias(c) / (c * c + loss.w_y).sqrt(),
        degenerate: false,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeComparison {
    pub loss_autonomy: f64,
    pub loss_strict_rule: f64,
    pub loss_sanctioned: f64,
    pub loss_cooperative: f64,
    pub loss_first_best: f64,
    pub threshold: Threshold,
}

impl RegimeComparison {
    pub fn get(&self, regime: UnionRegime) -> f64 {
        match regime {
            UnionRegime::Autonomy => self.loss_autonomy,
            UnionRegime::StrictRule => self.loss_strict_rule,
            UnionRegime::Sanctioned => self.loss_sanctioned,
            UnionRegime::Cooperative => self.loss_cooperative,
        }
    }

    /// Regime with the smallest expected loss; ties go to the earlier entry
    /// of [`UnionRegime::ALL`].
    pub fn best(&self) -> UnionRegime {
        UnionRegime::ALL
            .into_iter()
            .fold(UnionRegime::Autonomy, |best, r| {
                if self.get(r) < self.get(best) {
                    r
                } else {
                    best
                }
            })
    }
}

pub fn compare_regimes(
    loss: &LossParams,
    c: f64,
    sigma_u: f64,
    sigma_a: f64,
) -> Result<RegimeComparison> {
    let get = |r| regime_expected_loss(r, loss, c, sigma_u, sigma_a);
    Ok(RegimeComparison {
        loss_autonomy: get(UnionRegime::Autonomy)?,
        loss_strict_rule: get(UnionRegime::StrictRule)?,
        loss_sanctioned: get(UnionRegime::Sanctioned)?,
        loss_cooperative: get(UnionRegime::Cooperative)?,
        loss_first_best: loss.first_best(),
        threshold: autonomy_vs_rule_threshold(loss, c)?,
    })
}
