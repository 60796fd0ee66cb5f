//! Numerical tolerances shared by every module.
//!
//! Each field has a documented default; the CLI exposes all of them as
//! `--tol-*` overrides and reports echo the values they ran with.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Highest degree for which the default tolerances are calibrated. Higher
/// degrees are accepted but root accuracy and capacity estimates degrade.
pub const MAX_CALIBRATED_DEGREE: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Relative backward error accepted for a computed root.
    pub root: f64,
    /// Roots closer than `cluster * scale` are merged into one cluster.
    pub cluster: f64,
    /// Relative tolerance for `||f(z)| - level| / level` and for deciding
    /// that a critical value touches the level curve.
    pub level: f64,
    /// Strands closer than this (relative to the level-set scale) are ambiguous.
    pub merge: f64,
    /// Golden-section refinement of sup-norms stops once the bracket in the
    /// boundary parameter is below this.
    pub sup: f64,
    /// Verification slack when the capacity came from an exact oracle.
    pub verify_oracle: f64,
    /// Verification slack when the capacity came from the d_n search.
    pub verify_search: f64,
    /// Allowed relative increase between consecutive d_k in a capacity history.
    pub mono: f64,
    /// Sub-mean-value slack with oracle capacity.
    pub subh: f64,
    /// Sub-mean-value slack with searched capacity.
    pub subh_search: f64,
    /// Spread below which a deformation grid counts as constant.
    pub constant: f64,
    /// `|leading - 1|` accepted as monic.
    pub monic: f64,
    /// Coefficient and `|a| = 1` tolerance of extremal certification.
    pub cert: f64,
    /// Relative slack of the diameter/capacity check.
    pub diam_cap: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            root: 1e-12,
            cluster: 1e-6,
            level: 1e-9,
            merge: 1e-9,
            sup: 1e-12,
            verify_oracle: 5e-3,
            verify_search: 5e-2,
            mono: 1e-3,
            subh: 1e-2,
            subh_search: 5e-2,
            constant: 1e-6,
            monic: 1e-9,
            cert: 1e-8,
            diam_cap: 2e-2,
        }
    }
}

impl Tolerances {
    /// Rejects any non-positive or non-finite tolerance.
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("root", self.root),
            ("cluster", self.cluster),
            ("level", self.level),
            ("merge", self.merge),
            ("sup", self.sup),
            ("verify_oracle", self.verify_oracle),
            ("verify_search", self.verify_search),
            ("mono", self.mono),
            ("subh", self.subh),
            ("subh_search", self.subh_search),
            ("constant", self.constant),
            ("monic", self.monic),
            ("cert", self.cert),
            ("diam_cap", self.diam_cap),
        ];
        for (name, value) in fields {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidArgument(format!(
                    "tolerance {name} must be positive, got {value}"
                )));
            }
        }
        Ok(())
    }
}
