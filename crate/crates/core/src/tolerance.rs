use crate::{Error, Result};

/// Two-tier tolerance configuration.
///
/// `abs_tol` separates round-off from failure in identities that are exact
/// by construction; `audit_warn_tol` is the looser threshold that separates
/// round-off from genuine inconsistencies in the bundled printed data, and
/// doubles as the strictly-greater threshold for "must be nonzero"
/// commutator conditions. `rel_tol` scales operator-identity comparisons by
/// the magnitude of the operands.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub audit_warn_tol: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            audit_warn_tol: 1e-6,
        }
    }
}

impl ToleranceConfig {
    /// Validated constructor: all tolerances strictly positive and
    /// `abs_tol <= audit_warn_tol`.
    pub fn new(abs_tol: f64, rel_tol: f64, audit_warn_tol: f64) -> Result<Self> {
        if !(abs_tol > 0.0) || !(rel_tol > 0.0) || !(audit_warn_tol > 0.0) {
            return Err(Error::InvalidTolerance(format!(
                "tolerances must be strictly positive (got {abs_tol:e}, {rel_tol:e}, {audit_warn_tol:e})"
            )));
        }
        if abs_tol > audit_warn_tol {
            return Err(Error::InvalidTolerance(format!(
                "abs_tol ({abs_tol:e}) must not exceed audit_warn_tol ({audit_warn_tol:e})"
            )));
        }
        Ok(Self {
            abs_tol,
            rel_tol,
            audit_warn_tol,
        })
    }

    /// Comparison bound for operator identities: `abs + rel * scale`.
    pub fn operator_bound(&self, scale: f64) -> f64 {
        self.abs_tol + self.rel_tol * scale
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_is_valid() {
        let t = ToleranceConfig::default();
        assert!(ToleranceConfig::new(t.abs_tol, t.rel_tol, t.audit_warn_tol).is_ok());
    }

    #[test]
    fn rejects_nonpositive_and_inverted() {
        assert!(ToleranceConfig::new(0.0, 1e-10, 1e-6).is_err());
        assert!(ToleranceConfig::new(-1e-10, 1e-10, 1e-6).is_err());
        assert!(ToleranceConfig::new(1e-3, 1e-10, 1e-6).is_err());
        assert!(ToleranceConfig::new(f64::NAN, 1e-10, 1e-6).is_err());
    }
}
