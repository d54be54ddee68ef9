use thiserror::Error;

use crate::union_game::NoEquilibriumWitness;

pub type Result<T> = std::result::Result<T, PolicyError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PolicyError {
    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("singular structural system (denominator {denominator})")]
    SingularSystem { denominator: f64 },

    #[error("no Nash equilibrium: {0}")]
    NoEquilibrium(NoEquilibriumWitness),

    #[error("cooperative solution is defined for lambda = 1/2 only, got lambda = {lambda}")]
    UnsupportedRule { lambda: f64 },

    #[error(
        "oracle disagreement in {regime} (draw {draw}, {what}): analytic {analytic}, numerical {numerical}"
    )]
    OracleDisagreement {
        regime: String,
        draw: u64,
        what: &'static str,
        analytic: f64,
        numerical: f64,
    },

    #[error("unknown sweep axis '{0}' (expected one of sigma_a, lambda, k_target, w_y, c, t)")]
    InvalidAxis(String),
}

pub(crate) fn ensure_positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(PolicyError::InvalidParameter {
            name,
            value,
            reason: "must be finite and > 0",
        })
    }
}

pub(crate) fn ensure_non_negative(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value >= 0.0 {
        Ok(())
    } else {
        Err(PolicyError::InvalidParameter {
            name,
            value,
            reason: "must be finite and >= 0",
        })
    }
}

pub(crate) fn ensure_finite(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(PolicyError::InvalidParameter {
            name,
            value,
            reason: "must be finite",
        })
    }
}
