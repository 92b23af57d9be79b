use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Dimensionless parameters (ε, μ, γ) and the admissibility floors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    pub epsilon: f64,
    pub mu: f64,
    pub gamma: f64,
    pub h_min: f64,
    pub a0: f64,
}

impl PhysicalParams {
    pub const DEFAULT_H_MIN: f64 = 0.1;
    pub const DEFAULT_A0: f64 = 0.5;

    pub fn new(epsilon: f64, mu: f64) -> Result<Self> {
        let p = PhysicalParams {
            epsilon,
            mu,
            gamma: 1.0,
            h_min: Self::DEFAULT_H_MIN,
            a0: Self::DEFAULT_A0,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_floors(mut self, h_min: f64, a0: f64) -> Result<Self> {
        self.h_min = h_min;
        self.a0 = a0;
        self.validate()?;
        Ok(self)
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Result<Self> {
        self.epsilon = epsilon;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon <= 1.0) {
            return Err(Error::config("epsilon", format!("must lie in (0, 1], got {}", self.epsilon)));
        }
        if !(self.mu > 0.0 && self.mu <= 1.0) {
            return Err(Error::config("mu", format!("must lie in (0, 1], got {}", self.mu)));
        }
        if self.gamma != 1.0 {
            return Err(Error::config("gamma", "only gamma = 1 is supported in one dimension"));
        }
        if !(self.h_min > 0.0) {
            return Err(Error::config("h_min", format!("must be positive, got {}", self.h_min)));
        }
        if !(self.a0 > 0.0) {
            return Err(Error::config("a0", format!("must be positive, got {}", self.a0)));
        }
        Ok(())
    }
}
