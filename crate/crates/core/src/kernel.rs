//! Radial Matérn kernels with closed-form profiles.
//!
//! Every kernel here is normalized so that `k(x, x) = 1` and depends on its
//! arguments only through the Euclidean distance `r = |x - y|`.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::points::euclidean;

/// Half-integer Matérn smoothness orders that admit elementary closed forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MaternNu {
    Half,
    ThreeHalves,
    FiveHalves,
}

impl MaternNu {
    pub fn value(self) -> f64 {
        match self {
            MaternNu::Half => 0.5,
            MaternNu::ThreeHalves => 1.5,
            MaternNu::FiveHalves => 2.5,
        }
    }

    /// Twice the smoothness, which is always an odd integer here.
    pub fn twice(self) -> u32 {
        match self {
            MaternNu::Half => 1,
            MaternNu::ThreeHalves => 3,
            MaternNu::FiveHalves => 5,
        }
    }
}

impl fmt::Display for MaternNu {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/2", self.twice())
    }
}

/// Accepts `1/2`, `3/2`, `5/2` or the decimal forms `0.5`, `1.5`, `2.5`.
impl FromStr for MaternNu {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let twice = if let Some((num, den)) = s.split_once('/') {
            let num: u32 = num.trim().parse().map_err(|_| bad_nu(s))?;
            let den: u32 = den.trim().parse().map_err(|_| bad_nu(s))?;
            if den != 2 {
                return Err(bad_nu(s));
            }
            num
        } else {
            let v: f64 = s.parse().map_err(|_| bad_nu(s))?;
            let t = 2.0 * v;
            if t.fract() != 0.0 || !(0.0..=9.0).contains(&t) {
                return Err(bad_nu(s));
            }
            t as u32
        };
        match twice {
            1 => Ok(MaternNu::Half),
            3 => Ok(MaternNu::ThreeHalves),
            5 => Ok(MaternNu::FiveHalves),
            _ => Err(bad_nu(s)),
        }
    }
}

fn bad_nu(s: &str) -> Error {
    Error::Config(format!(
        "unsupported Matérn smoothness {s:?}; expected 1/2, 3/2 or 5/2"
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum KernelFamily {
    Matern,
}

/// A kernel family with its smoothness and lengthscale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelSpec {
    family: KernelFamily,
    nu: MaternNu,
    lengthscale: f64,
}

impl KernelSpec {
    pub fn matern(nu: MaternNu, lengthscale: f64) -> Result<Self> {
        if !(lengthscale > 0.0 && lengthscale.is_finite()) {
            return Err(Error::Input(format!(
                "lengthscale must be positive and finite, got {lengthscale}"
            )));
        }
        Ok(KernelSpec {
            family: KernelFamily::Matern,
            nu,
            lengthscale,
        })
    }

    pub fn family(&self) -> KernelFamily {
        self.family
    }

    pub fn nu(&self) -> MaternNu {
        self.nu
    }

    pub fn lengthscale(&self) -> f64 {
        self.lengthscale
    }

    /// The radial profile `K(r)`.
    #[inline]
    pub fn radial(&self, r: f64) -> f64 {
        let l = self.lengthscale;
        match self.nu {
            MaternNu::Half => (-r / l).exp(),
            MaternNu::ThreeHalves => {
                let s = 3f64.sqrt() * r / l;
                (1.0 + s) * (-s).exp()
            }
            MaternNu::FiveHalves => {
                let s = 5f64.sqrt() * r / l;
                (1.0 + s + s * s / 3.0) * (-s).exp()
            }
        }
    }

    /// `k(x, y)` without a dimension check.
    #[inline]
    pub(crate) fn eval_unchecked(&self, x: &[f64], y: &[f64]) -> f64 {
        self.radial(euclidean(x, y))
    }
}

/// Evaluates the kernel at a pair of points.
pub fn eval_kernel(spec: &KernelSpec, x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() || x.is_empty() {
        return Err(Error::Input(format!(
            "kernel arguments have dimensions {} and {}",
            x.len(),
            y.len()
        )));
    }
    Ok(spec.eval_unchecked(x, y))
}

#[cfg(test)]
mod tests {
    use super::*;

    // 40-digit reference values of the closed forms at r = l.
    const MATERN52_AT_L: f64 = 0.523_994_108_831_820_3;
    const MATERN32_AT_L: f64 = 0.483_357_724_596_507_65;
    const MATERN12_AT_L: f64 = 0.367_879_441_171_442_33;

    fn m52() -> KernelSpec {
        KernelSpec::matern(MaternNu::FiveHalves, 0.1).unwrap()
    }

    #[test]
    fn unit_on_diagonal() {
        for nu in [MaternNu::Half, MaternNu::ThreeHalves, MaternNu::FiveHalves] {
            let k = KernelSpec::matern(nu, 0.37).unwrap();
            assert_eq!(eval_kernel(&k, &[0.3, -1.2], &[0.3, -1.2]).unwrap(), 1.0);
        }
    }

    #[test]
    fn matches_high_precision_at_one_lengthscale() {
        let v = eval_kernel(&m52(), &[0.0, 0.0], &[0.1, 0.0]).unwrap();
        assert!((v - MATERN52_AT_L).abs() < 1e-14, "{v}");
        let k32 = KernelSpec::matern(MaternNu::ThreeHalves, 2.0).unwrap();
        assert!((k32.radial(2.0) - MATERN32_AT_L).abs() < 1e-14);
        let k12 = KernelSpec::matern(MaternNu::Half, 2.0).unwrap();
        assert!((k12.radial(2.0) - MATERN12_AT_L).abs() < 1e-14);
    }

    #[test]
    fn decays_far_away() {
        let v = eval_kernel(&m52(), &[0.0, 0.0], &[10.0, 0.0]).unwrap();
        assert!((0.0..1e-6).contains(&v));
    }

    #[test]
    fn dimension_mismatch() {
        assert!(matches!(
            eval_kernel(&m52(), &[0.0], &[0.0, 1.0]),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn bad_lengthscale() {
        assert!(KernelSpec::matern(MaternNu::FiveHalves, 0.0).is_err());
        assert!(KernelSpec::matern(MaternNu::FiveHalves, -1.0).is_err());
        assert!(KernelSpec::matern(MaternNu::FiveHalves, f64::NAN).is_err());
    }

    #[test]
    fn parse_nu() {
        assert_eq!("5/2".parse::<MaternNu>().unwrap(), MaternNu::FiveHalves);
        assert_eq!("1.5".parse::<MaternNu>().unwrap(), MaternNu::ThreeHalves);
        assert_eq!(" 1 / 2 ".parse::<MaternNu>().unwrap(), MaternNu::Half);
        assert!("7/2".parse::<MaternNu>().is_err());
        assert!("2".parse::<MaternNu>().is_err());
        assert!("5/3".parse::<MaternNu>().is_err());
        assert_eq!(MaternNu::FiveHalves.to_string(), "5/2");
    }
}
