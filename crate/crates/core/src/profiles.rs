//! Spatial mode profiles q(z) together with an explicit antiderivative.
//!
//! The antiderivative enters the magnetic field as integral of q, which is
//! only defined up to a constant. Two sine variants are provided: `sine`
//! integrates from z = 0 (antiderivative `(1 - cos kz)/k`, vanishing at the
//! wall), while `sine_zero_mean` uses `-cos(kz)/k`. The zero-mean choice is
//! the one for which a sine mode solves both curl equations; the from-zero
//! choice keeps the wall value of the integral at zero but leaves a
//! z-independent remainder in the magnetic field.

use std::fmt;
use std::sync::Arc;

use crate::error::{CoreError, Result};

type ProfileFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
enum ProfileKind {
    Sine {
        k: f64,
        scale: f64,
        /// Constant added to (1 - cos kz)/k.
        offset: f64,
    },
    Custom {
        value: ProfileFn,
        antiderivative: ProfileFn,
    },
}

/// A spatial profile q(z) on [0, L] with its antiderivative.
#[derive(Clone)]
pub struct SpatialProfile {
    kind: ProfileKind,
}

impl fmt::Debug for SpatialProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ProfileKind::Sine { k, scale, offset } => f
                .debug_struct("SpatialProfile::Sine")
                .field("k", k)
                .field("scale", scale)
                .field("offset", offset)
                .finish(),
            ProfileKind::Custom { .. } => f.write_str("SpatialProfile::Custom"),
        }
    }
}

impl SpatialProfile {
    /// q(z) = sin(kz) with antiderivative (1 - cos kz)/k (zero at z = 0).
    pub fn sine(k: f64) -> Self {
        Self {
            kind: ProfileKind::Sine {
                k,
                scale: 1.0,
                offset: 0.0,
            },
        }
    }

    /// q(z) = sin(kz) with the zero-mean antiderivative -cos(kz)/k.
    pub fn sine_zero_mean(k: f64) -> Self {
        Self {
            kind: ProfileKind::Sine {
                k,
                scale: 1.0,
                offset: -1.0 / k,
            },
        }
    }

    pub fn scaled(mut self, factor: f64) -> Self {
        match &mut self.kind {
            ProfileKind::Sine { scale, .. } => *scale *= factor,
            ProfileKind::Custom {
                value,
                antiderivative,
            } => {
                let v = value.clone();
                let a = antiderivative.clone();
                self.kind = ProfileKind::Custom {
                    value: Arc::new(move |z| factor * v(z)),
                    antiderivative: Arc::new(move |z| factor * a(z)),
                };
            }
        }
        self
    }

    /// Arbitrary profile; the caller supplies a matching antiderivative.
    pub fn custom(
        value: impl Fn(f64) -> f64 + Send + Sync + 'static,
        antiderivative: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            kind: ProfileKind::Custom {
                value: Arc::new(value),
                antiderivative: Arc::new(antiderivative),
            },
        }
    }

    pub fn value(&self, z: f64) -> f64 {
        match &self.kind {
            ProfileKind::Sine { k, scale, .. } => scale * (k * z).sin(),
            ProfileKind::Custom { value, .. } => value(z),
        }
    }

    pub fn antiderivative(&self, z: f64) -> f64 {
        match &self.kind {
            ProfileKind::Sine { k, scale, offset } => scale * ((1.0 - (k * z).cos()) / k + offset),
            ProfileKind::Custom { antiderivative, .. } => antiderivative(z),
        }
    }

    /// Check that the antiderivative differentiates back to the profile and
    /// that the profile stays bounded, on `samples` points across [0, L].
    pub fn check_consistency(&self, length: f64, samples: usize) -> Result<()> {
        let n = samples.max(3);
        let h = length * 1e-6;
        for i in 0..n {
            let z = length * (i as f64 + 0.5) / n as f64;
            let value = self.value(z);
            if !value.is_finite() {
                return Err(CoreError::InvalidConfig(format!(
                    "profile is not finite at z = {z}"
                )));
            }
            let slope = (self.antiderivative(z + h) - self.antiderivative(z - h)) / (2.0 * h);
            if (slope - value).abs() > 1e-8 * (1.0 + value.abs()) {
                return Err(CoreError::InvalidConfig(format!(
                    "antiderivative inconsistent with profile at z = {z}: \
                     d/dz = {slope}, q = {value}"
                )));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn sine_antiderivative_vanishes_at_wall() {
        let p = SpatialProfile::sine(2.0 * PI);
        assert_eq!(p.antiderivative(0.0), 0.0);
        assert_abs_diff_eq!(p.value(0.25), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn zero_mean_antiderivative() {
        let k = 3.0 * PI;
        let p = SpatialProfile::sine_zero_mean(k);
        assert_abs_diff_eq!(p.antiderivative(0.4), -(k * 0.4).cos() / k, epsilon = 1e-15);
    }

    #[test]
    fn consistency_accepts_matching_pairs() {
        SpatialProfile::sine(PI).check_consistency(1.0, 16).unwrap();
        SpatialProfile::sine_zero_mean(2.0 * PI)
            .check_consistency(1.0, 16)
            .unwrap();
        SpatialProfile::custom(|z| z * z, |z| z * z * z / 3.0)
            .check_consistency(1.0, 16)
            .unwrap();
    }

    #[test]
    fn consistency_rejects_wrong_antiderivative() {
        let p = SpatialProfile::custom(|z| z, |z| z);
        assert!(p.check_consistency(1.0, 16).is_err());
    }

    #[test]
    fn scaling_applies_to_both_parts() {
        let p = SpatialProfile::sine(PI).scaled(2.5);
        assert_abs_diff_eq!(p.value(0.5), 2.5, epsilon = 1e-15);
        assert_abs_diff_eq!(p.antiderivative(1.0), 2.5 * 2.0 / PI, epsilon = 1e-14);
    }
}
