//! Binary relative entropy and the closed-form upper bounds on the
//! maximum-likelihood decoding threshold of cycle codes.
//!
//! The bound in terms of a walk-growth rate `λ` is
//! `θ(λ) = ½(1 - √(1 - 1/λ²))`, which inverts `exp(D(½ ‖ θ)) = λ`.
//! Substituting `λ = μ - 1` with `μ = 2/(1 - R)` gives the rate form
//! `(1 - √R)² / (2(1 + R))`.
//!
//! The derivation of the rate form from the walk form uses an auxiliary
//! `μ0 < μ`, the exponent `b = 2μμ0/(μ - μ0)` and a floor `min(δ, p^b)`;
//! those only exist inside the argument and are not exposed here.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::nonbacktracking::lambda_lower_bound;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BoundsError {
    #[error("probability p = {0} must lie in (0, 1)")]
    BadProbability(f64),
    #[error("alpha = {0} must lie in [0, 1]")]
    BadAlpha(f64),
    #[error("rate R = {0} must lie in (0, 1)")]
    BadRate(f64),
    #[error("lambda = {0} must be at least 1")]
    BadLambda(f64),
    #[error("theta = {0} must lie in (0, 1/2]")]
    BadTheta(f64),
    #[error("degree d = {0} must be at least 3")]
    BadDegree(u32),
    #[error("unknown formula {0:?} (expected \"main\" or \"technical\")")]
    UnknownFormula(String),
}

fn xlogy(x: f64, y: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * y.ln()
    }
}

/// `D(α ‖ p) = α ln(α/p) + (1-α) ln((1-α)/(1-p))`, with `0 ln 0 = 0`.
pub fn relative_entropy(alpha: f64, p: f64) -> Result<f64, BoundsError> {
    if !(p > 0.0 && p < 1.0) {
        return Err(BoundsError::BadProbability(p));
    }
    if !(0.0..=1.0).contains(&alpha) {
        return Err(BoundsError::BadAlpha(alpha));
    }
    let d = xlogy(alpha, alpha / p) + xlogy(1.0 - alpha, (1.0 - alpha) / (1.0 - p));
    // rounding can leave -1e-17 near alpha = p
    Ok(d.max(0.0))
}

fn check_rate(r: f64) -> Result<(), BoundsError> {
    if r > 0.0 && r < 1.0 {
        Ok(())
    } else {
        Err(BoundsError::BadRate(r))
    }
}

/// `(1 - √R)² / (2(1 + R))`.
pub fn theta_main(rate: f64) -> Result<f64, BoundsError> {
    check_rate(rate)?;
    let s = 1.0 - rate.sqrt();
    Ok(s * s / (2.0 * (1.0 + rate)))
}

/// `½(1 - √(1 - 1/λ²))`, computed as `½ x / (1 + √(1 - x))` with
/// `x = 1/λ²` to avoid cancellation for large `λ`.
pub fn theta_from_lambda(lambda: f64) -> Result<f64, BoundsError> {
    if lambda.is_nan() || lambda < 1.0 {
        return Err(BoundsError::BadLambda(lambda));
    }
    if lambda.is_infinite() {
        return Ok(0.0);
    }
    let x = 1.0 / (lambda * lambda);
    Ok(0.5 * x / (1.0 + (1.0 - x).sqrt()))
}

/// `exp(D(½ ‖ θ)) = 1 / √(4θ(1-θ))`, the inverse of [`theta_from_lambda`].
pub fn lambda_from_theta(theta: f64) -> Result<f64, BoundsError> {
    if !(theta > 0.0 && theta <= 0.5) {
        return Err(BoundsError::BadTheta(theta));
    }
    Ok(1.0 / (4.0 * theta * (1.0 - theta)).sqrt())
}

/// Rate `1 - 2/d` of the cycle codes of large `d`-regular graphs.
pub fn rate_of_regular(d: u32) -> Result<f64, BoundsError> {
    if d < 3 {
        return Err(BoundsError::BadDegree(d));
    }
    Ok(1.0 - 2.0 / d as f64)
}

/// Average degree `2/(1 - R)` at which cycle codes have rate `R`.
pub fn mu_of_rate(rate: f64) -> Result<f64, BoundsError> {
    check_rate(rate)?;
    Ok(2.0 / (1.0 - rate))
}

/// Which closed form a [`ThresholdCurve`] tabulates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Formula {
    /// `(1 - √R)² / (2(1 + R))`.
    Main,
    /// `θ(λ)` with `λ` the walk-growth lower bound at `μ = 2/(1-R)`.
    Technical,
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Formula::Main => "main",
            Formula::Technical => "technical",
        })
    }
}

impl FromStr for Formula {
    type Err = BoundsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "main" => Ok(Formula::Main),
            "technical" => Ok(Formula::Technical),
            other => Err(BoundsError::UnknownFormula(other.to_string())),
        }
    }
}

impl Formula {
    pub fn evaluate(self, rate: f64) -> Result<f64, BoundsError> {
        match self {
            Formula::Main => theta_main(rate),
            Formula::Technical => {
                let mu = mu_of_rate(rate)?;
                let lambda = lambda_lower_bound(mu).expect("mu_of_rate is at least 2");
                theta_from_lambda(lambda)
            }
        }
    }
}

/// Threshold bound sampled on a grid of rates, sorted by rate.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdCurve {
    pub formula: Formula,
    pub samples: Vec<(f64, f64)>,
}

pub fn curve(formula: Formula, rates: &[f64]) -> Result<ThresholdCurve, BoundsError> {
    let mut samples = rates
        .iter()
        .map(|&r| formula.evaluate(r).map(|t| (r, t)))
        .collect::<Result<Vec<_>, _>>()?;
    samples.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(ThresholdCurve { formula, samples })
}
