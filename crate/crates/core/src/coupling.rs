use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Coupling constants on the outer (`+`) and inner (`−`) shells.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Coupling {
    pub alpha_plus: Complex64,
    pub alpha_minus: Complex64,
}

impl Coupling {
    pub fn new(alpha_plus: Complex64, alpha_minus: Complex64) -> Self {
        Self {
            alpha_plus,
            alpha_minus,
        }
    }

    pub fn real(alpha_plus: f64, alpha_minus: f64) -> Self {
        Self::new(Complex64::new(alpha_plus, 0.0), Complex64::new(alpha_minus, 0.0))
    }

    pub fn sum(&self) -> Complex64 {
        self.alpha_plus + self.alpha_minus
    }

    pub fn swapped(&self) -> Self {
        Self::new(self.alpha_minus, self.alpha_plus)
    }

    pub fn check_finite(&self) -> Result<()> {
        let ok = [self.alpha_plus, self.alpha_minus]
            .iter()
            .all(|a| a.re.is_finite() && a.im.is_finite());
        if ok {
            Ok(())
        } else {
            Err(Error::Input("coupling constants must be finite".into()))
        }
    }

    /// Both shells carry an interaction.
    pub fn check_two_shell(&self) -> Result<()> {
        self.check_finite()?;
        if self.alpha_plus.norm() == 0.0 || self.alpha_minus.norm() == 0.0 {
            return Err(Error::Input("both coupling constants must be nonzero".into()));
        }
        Ok(())
    }
}
