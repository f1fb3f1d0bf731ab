//! Smoothness bookkeeping for the expected convergence rate.
//!
//! A Matérn kernel of order `nu` on `R^p` has a native space inside the
//! Sobolev space of order just below `2 nu - p/2`. Restricting it to a
//! `d`-dimensional submanifold costs another `(p - d)/2` orders, leaving
//! `t = 2 nu - p/2 - (p - d)/2`. Errors measured in the `s`-th derivative then
//! decay no slower than `h^(t - s)` in the fill distance `h`, provided
//! `d/2 < s <= ceil(t) - 1`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::MaternNu;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SmoothnessParams {
    pub nu: MaternNu,
    /// Ambient dimension.
    pub p: u32,
    /// Manifold dimension.
    pub d: u32,
    /// Derivative index of the error norm.
    pub s: u32,
}

impl SmoothnessParams {
    pub fn new(nu: MaternNu, p: u32, d: u32, s: u32) -> Result<Self> {
        let sp = SmoothnessParams { nu, p, d, s };
        sp.validate()?;
        Ok(sp)
    }

    /// `t = 2 nu - p/2 - (p - d)/2`, the supremal manifold smoothness.
    pub fn manifold_smoothness(&self) -> f64 {
        // Every term is a multiple of 1/2, so this is exact in f64.
        f64::from(self.nu.twice()) - f64::from(self.p) + 0.5 * f64::from(self.d)
    }

    pub fn validate(&self) -> Result<()> {
        if self.d < 1 {
            return Err(Error::Config(format!("need d >= 1, got d = {}", self.d)));
        }
        if self.p < self.d {
            return Err(Error::Config(format!(
                "need p >= d, got p = {} < d = {}",
                self.p, self.d
            )));
        }
        if 2 * self.s <= self.d {
            return Err(Error::Config(format!(
                "need s > d/2, got s = {} <= {}/2",
                self.s, self.d
            )));
        }
        let t = self.manifold_smoothness();
        let cap = t.ceil() - 1.0;
        if f64::from(self.s) > cap {
            return Err(Error::Config(format!(
                "need s <= ceil(t) - 1 with t = {t}, got s = {} > {cap}",
                self.s
            )));
        }
        Ok(())
    }
}

/// The supremal log-log error slope `t - s`.
pub fn theoretical_rate(sp: &SmoothnessParams) -> Result<f64> {
    sp.validate()?;
    Ok(sp.manifold_smoothness() - f64::from(sp.s))
}
