//! Tester configuration and the frozen constants behind every `O(·)`.
//!
//! All round and sample counts are computed here so that the testers and the
//! closed-form query accounting in [`super::budget`] read the same numbers.

use serde::{Deserialize, Serialize};

use crate::error::TesterError;

/// Hidden constants of the testers. The defaults are the documented values;
/// overrides may not go below the floors in [`Constants::validate`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Constants {
    /// Conjugacy and homomorphism rounds: `s = ⌈c / ε²⌉`.
    pub round_factor: f64,
    /// Mean estimator samples: `⌈c / a² · ln(4/δ)⌉` for accuracy `a`.
    pub estimator_factor: f64,
    /// Self-corrector samples: `⌈c · ln(2/δ)⌉`.
    pub corrector_factor: f64,
    /// Character-proportionality rounds: `s = ⌈c / ε⁴⌉`.
    pub character_round_factor: f64,
    /// Unitary-equivalence iterations: `⌈(base · d^{3/2} / ε)^{exponent · d²}⌉`.
    pub net_base: f64,
    pub net_exponent: f64,
}

impl Constants {
    pub const DEFAULT: Constants = Constants {
        round_factor: 2.0,
        estimator_factor: 8.0,
        corrector_factor: 8.0,
        character_round_factor: 100.0,
        net_base: 0.5,
        net_exponent: 2.0,
    };

    /// Floors: `ln 3` rounds per `1/ε²` (so `(1 − ε²)^s ≤ 1/3`), the Hoeffding
    /// constant 8, `1/ln 2` corrector samples per `ln(2/δ)`, and the verbatim
    /// character round constant 100. The net constants only need to be positive.
    pub fn validate(&self) -> Result<(), TesterError> {
        let checks = [
            ("round_factor", self.round_factor, 3f64.ln()),
            ("estimator_factor", self.estimator_factor, 8.0),
            ("corrector_factor", self.corrector_factor, std::f64::consts::LOG2_E),
            ("character_round_factor", self.character_round_factor, 100.0),
        ];
        for (name, value, floor) in checks {
            if !(value >= floor) {
                return Err(TesterError::Config(format!("{name} = {value} is below its floor {floor}")));
            }
        }
        for (name, value) in [("net_base", self.net_base), ("net_exponent", self.net_exponent)] {
            if !(value > 0.0 && value.is_finite()) {
                return Err(TesterError::Config(format!("{name} must be positive, got {value}")));
            }
        }
        Ok(())
    }
}

impl Default for Constants {
    fn default() -> Self {
        Constants::DEFAULT
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TesterConfig {
    pub epsilon: f64,
    pub seed: u64,
    #[serde(default)]
    pub constants: Constants,
    /// Tolerance for comparing function values; 0 means exact equality.
    #[serde(default)]
    pub value_tolerance: f64,
    /// Rounds recorded in the report trace (the final round is always kept).
    #[serde(default = "default_trace_limit")]
    pub trace_limit: usize,
}

fn default_trace_limit() -> usize {
    32
}

impl TesterConfig {
    pub fn new(epsilon: f64, seed: u64) -> Self {
        TesterConfig {
            epsilon,
            seed,
            constants: Constants::DEFAULT,
            value_tolerance: 0.0,
            trace_limit: default_trace_limit(),
        }
    }

    pub fn validate(&self) -> Result<(), TesterError> {
        if !(self.epsilon > 0.0 && self.epsilon <= 1.0) {
            return Err(TesterError::Config(format!("epsilon must lie in (0, 1], got {}", self.epsilon)));
        }
        if !(self.value_tolerance >= 0.0) {
            return Err(TesterError::Config("value_tolerance must be non-negative".into()));
        }
        self.constants.validate()
    }
}

/// `⌈x⌉`, treating values within a relative `1e-9` of an integer as that
/// integer so that e.g. `2 / 0.1²` gives 200 despite `0.1` not being exact.
pub fn ceil_count(x: f64) -> Result<u64, TesterError> {
    if !x.is_finite() || x < 0.0 {
        return Err(TesterError::BudgetOverflow(format!("count {x}")));
    }
    let r = x.round();
    let c = if (x - r).abs() <= 1e-9 * x.max(1.0) { r } else { x.ceil() };
    if c >= u64::MAX as f64 {
        return Err(TesterError::BudgetOverflow(format!("count {x:e}")));
    }
    Ok(c as u64)
}

pub(crate) fn checked_mul(a: u64, b: u64) -> Result<u64, TesterError> {
    a.checked_mul(b).ok_or_else(|| TesterError::BudgetOverflow(format!("{a} * {b}")))
}

pub(crate) fn checked_add(a: u64, b: u64) -> Result<u64, TesterError> {
    a.checked_add(b).ok_or_else(|| TesterError::BudgetOverflow(format!("{a} + {b}")))
}

impl Constants {
    /// Rounds of the conjugacy and homomorphism testers.
    pub fn pair_rounds(&self, epsilon: f64) -> Result<u64, TesterError> {
        ceil_count(self.round_factor / (epsilon * epsilon))
    }

    /// Sample count of the mean estimator at accuracy `a`, confidence `δ`.
    pub fn estimator_samples(&self, accuracy: f64, confidence: f64) -> Result<u64, TesterError> {
        if !(accuracy > 0.0 && confidence > 0.0 && confidence < 1.0) {
            return Err(TesterError::Config(format!(
                "estimator needs accuracy > 0 and confidence in (0, 1), got ({accuracy}, {confidence})"
            )));
        }
        ceil_count(self.estimator_factor / (accuracy * accuracy) * (4.0 / confidence).ln())
    }

    pub fn corrector_samples(&self, delta: f64) -> Result<u64, TesterError> {
        if !(delta > 0.0 && delta < 1.0) {
            return Err(TesterError::Config(format!("corrector confidence must be in (0, 1), got {delta}")));
        }
        ceil_count(self.corrector_factor * (2.0 / delta).ln())
    }

    pub fn character_rounds(&self, epsilon: f64) -> Result<u64, TesterError> {
        ceil_count(self.character_round_factor / epsilon.powi(4))
    }

    pub fn net_iterations(&self, epsilon: f64, dim: usize) -> Result<u64, TesterError> {
        let d = dim as f64;
        let base = self.net_base * d.powf(1.5) / epsilon;
        ceil_count(base.powf(self.net_exponent * d * d))
    }
}
