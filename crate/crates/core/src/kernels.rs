//! Gaussian and Wendland smoothing kernels with closed-form first and second
//! derivatives, and the scaling constants `c = max_r |W(r, h)|`.
//!
//! All derivatives are with respect to the signed separation `r`, so the
//! first derivative is odd in `r` and the value and second derivative are
//! even.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{QsphError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KernelFamily {
    /// `W = exp(-q²) / (√π h)`.
    Gaussian,
    /// `W = 3/(4h) (1 - q/2)⁴ (2q + 1)` for `q ≤ 2`, zero beyond.
    Wendland,
}

impl KernelFamily {
    pub const ALL: [KernelFamily; 2] = [KernelFamily::Gaussian, KernelFamily::Wendland];

    pub fn name(&self) -> &'static str {
        match self {
            KernelFamily::Gaussian => "gaussian",
            KernelFamily::Wendland => "wendland",
        }
    }

    /// Half-width of the support in units of `h`, if compact.
    pub fn support_radius(&self) -> Option<f64> {
        match self {
            KernelFamily::Gaussian => None,
            KernelFamily::Wendland => Some(2.0),
        }
    }
}

impl fmt::Display for KernelFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for KernelFamily {
    type Err = QsphError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gaussian" => Ok(KernelFamily::Gaussian),
            "wendland" => Ok(KernelFamily::Wendland),
            other => Err(QsphError::InvalidKernel(format!("unknown kernel family `{other}`"))),
        }
    }
}

/// Which spatial derivative of the kernel is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DerivativeOrder {
    Value,
    First,
    Second,
}

impl DerivativeOrder {
    pub const ALL: [DerivativeOrder; 3] = [
        DerivativeOrder::Value,
        DerivativeOrder::First,
        DerivativeOrder::Second,
    ];

    pub fn as_u8(&self) -> u8 {
        match self {
            DerivativeOrder::Value => 0,
            DerivativeOrder::First => 1,
            DerivativeOrder::Second => 2,
        }
    }
}

impl TryFrom<u8> for DerivativeOrder {
    type Error = QsphError;

    fn try_from(order: u8) -> Result<Self> {
        match order {
            0 => Ok(DerivativeOrder::Value),
            1 => Ok(DerivativeOrder::First),
            2 => Ok(DerivativeOrder::Second),
            n => Err(QsphError::InvalidKernel(format!(
                "derivative order must be 0, 1 or 2, got {n}"
            ))),
        }
    }
}

/// A kernel family, derivative order and smoothing length `h > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelSpec {
    family: KernelFamily,
    order: DerivativeOrder,
    h: f64,
}

impl KernelSpec {
    pub fn new(family: KernelFamily, order: DerivativeOrder, h: f64) -> Result<Self> {
        if !(h.is_finite() && h > 0.0) {
            return Err(QsphError::InvalidKernel(format!(
                "smoothing length must be positive and finite, got {h}"
            )));
        }
        Ok(Self { family, order, h })
    }

    pub fn family(&self) -> KernelFamily {
        self.family
    }

    pub fn order(&self) -> DerivativeOrder {
        self.order
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    /// `W(r, h)`, `W'(r, h)` or `W''(r, h)` depending on the derivative order.
    pub fn evaluate(&self, r: f64) -> f64 {
        let h = self.h;
        let q = r.abs() / h;
        // d|r|/dr, taken as 0 at r = 0 where both first derivatives vanish
        let sign = if r > 0.0 {
            1.0
        } else if r < 0.0 {
            -1.0
        } else {
            0.0
        };
        match self.family {
            KernelFamily::Gaussian => {
                let g = (-q * q).exp() / (PI.sqrt() * h);
                match self.order {
                    DerivativeOrder::Value => g,
                    DerivativeOrder::First => -2.0 * q * g / h * sign,
                    DerivativeOrder::Second => (4.0 * q * q - 2.0) * g / (h * h),
                }
            }
            KernelFamily::Wendland => {
                if q > 2.0 {
                    return 0.0;
                }
                let s = 1.0 - 0.5 * q;
                let s2 = s * s;
                match self.order {
                    DerivativeOrder::Value => 0.75 / h * s2 * s2 * (2.0 * q + 1.0),
                    DerivativeOrder::First => -3.75 / (h * h) * q * s2 * s * sign,
                    DerivativeOrder::Second => 3.75 / (h * h * h) * (2.0 * q - 1.0) * s2,
                }
            }
        }
    }

    /// `c = max_r |W(r, h)|` for this kernel and derivative order.
    pub fn scaling_constant(&self) -> f64 {
        let h = self.h;
        let sqrt_pi = PI.sqrt();
        match (self.family, self.order) {
            (KernelFamily::Gaussian, DerivativeOrder::Value) => 1.0 / (sqrt_pi * h),
            (KernelFamily::Gaussian, DerivativeOrder::First) => {
                2f64.sqrt() * (-0.5f64).exp() / (sqrt_pi * h * h)
            }
            (KernelFamily::Gaussian, DerivativeOrder::Second) => 2.0 / (sqrt_pi * h * h * h),
            (KernelFamily::Wendland, DerivativeOrder::Value) => 3.0 / (4.0 * h),
            (KernelFamily::Wendland, DerivativeOrder::First) => 405.0 / (512.0 * h * h),
            (KernelFamily::Wendland, DerivativeOrder::Second) => 15.0 / (4.0 * h * h * h),
        }
    }
}
