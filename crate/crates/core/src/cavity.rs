//! Cavity geometry, physical constants, and per-mode derived constants.
//!
//! A cavity of length `L` along z supports standing modes with
//! `k_alpha = alpha*pi/L` and `omega_alpha = c*k_alpha`. Each mode carries
//! three normalization amplitudes: the field amplitude
//! `A = sqrt(2 omega^2 m / (V eps0))` used by the time-domain solutions, the
//! space-scheme amplitude `A' = sqrt(2 omega^2 / T)` tied to a fixed time
//! window `T`, and a free general-form amplitude `A''` (default 1).

use std::f64::consts::PI;

use crate::error::{CoreError, Result};

/// SI vacuum permittivity (F/m).
pub const EPS0_SI: f64 = 8.854_187_812_8e-12;
/// SI speed of light (m/s).
pub const LIGHT_SPEED_SI: f64 = 299_792_458.0;

/// Unit system a computation runs in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnitSystem {
    /// SI units with physical constants.
    Si,
    /// Gaussian-style natural units: eps0 = mu0 = c = 1.
    GaussianNatural,
}

impl UnitSystem {
    pub fn label(&self) -> &'static str {
        match self {
            UnitSystem::Si => "si",
            UnitSystem::GaussianNatural => "gaussian-natural",
        }
    }
}

/// Cavity geometry and the constants every field computation depends on.
#[derive(Debug, Clone, PartialEq)]
pub struct CavityConfig {
    /// Cavity length along z (m).
    pub length: f64,
    /// Cavity volume (m^3).
    pub volume: f64,
    /// Speed of light.
    pub light_speed: f64,
    /// Vacuum permittivity.
    pub eps0: f64,
    /// Vacuum permeability. Must satisfy mu0*eps0 = 1/c^2.
    pub mu0: f64,
    pub unit_system: UnitSystem,
    /// Time-normalization window; defaults to one round trip 2L/c so that
    /// every omega_alpha * T is an integer multiple of 2*pi.
    pub time_window: f64,
}

impl CavityConfig {
    /// Natural-unit cavity (eps0 = mu0 = c = 1, T = 2L).
    pub fn gaussian_natural(length: f64, volume: f64) -> Self {
        Self {
            length,
            volume,
            light_speed: 1.0,
            eps0: 1.0,
            mu0: 1.0,
            unit_system: UnitSystem::GaussianNatural,
            time_window: 2.0 * length,
        }
    }

    /// SI cavity. mu0 is derived from eps0 and c so the consistency
    /// relation mu0*eps0 = 1/c^2 holds to rounding.
    pub fn si(length: f64, volume: f64) -> Self {
        let mu0 = 1.0 / (EPS0_SI * LIGHT_SPEED_SI * LIGHT_SPEED_SI);
        Self {
            length,
            volume,
            light_speed: LIGHT_SPEED_SI,
            eps0: EPS0_SI,
            mu0,
            unit_system: UnitSystem::Si,
            time_window: 2.0 * length / LIGHT_SPEED_SI,
        }
    }

    /// Override the time-normalization window. Windows that are not a
    /// multiple of the round-trip time break the temporal orthogonality
    /// some checks rely on; those checks flag it rather than fail here.
    pub fn with_time_window(mut self, time_window: f64) -> Self {
        self.time_window = time_window;
        self
    }

    /// One cavity round trip, 2L/c.
    pub fn round_trip_time(&self) -> f64 {
        2.0 * self.length / self.light_speed
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("length", self.length),
            ("volume", self.volume),
            ("light_speed", self.light_speed),
            ("eps0", self.eps0),
            ("mu0", self.mu0),
            ("time_window", self.time_window),
        ];
        for (name, value) in positive {
            if !value.is_finite() || value <= 0.0 {
                return Err(CoreError::InvalidConfig(format!(
                    "{name} must be finite and positive, got {value}"
                )));
            }
        }
        let consistency = self.mu0 * self.eps0 * self.light_speed * self.light_speed;
        if (consistency - 1.0).abs() > 1e-12 {
            return Err(CoreError::InvalidConfig(format!(
                "mu0*eps0 must equal 1/c^2 (mu0*eps0*c^2 = {consistency})"
            )));
        }
        if self.unit_system == UnitSystem::GaussianNatural
            && (self.eps0 != 1.0 || self.mu0 != 1.0 || self.light_speed != 1.0)
        {
            return Err(CoreError::InvalidConfig(
                "gaussian-natural units require eps0 = mu0 = c = 1".into(),
            ));
        }
        Ok(())
    }
}

/// All derived constants of one standing mode.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeSpec {
    /// Positive mode index.
    pub alpha: u32,
    /// k = alpha*pi/L (1/m).
    pub wavenumber: f64,
    /// omega = c*k (rad/s).
    pub omega: f64,
    /// Oscillator-analogy mass parameter (default 1).
    pub mass: f64,
    /// Time-scheme field amplitude sqrt(2 omega^2 m / (V eps0)).
    pub amp_time: f64,
    /// Space-scheme amplitude sqrt(2 omega^2 / T).
    pub amp_space: f64,
    /// General-form amplitude; free normalization, default 1.
    pub amp_general: f64,
}

/// Build the mode constants for index `alpha` with unit oscillator mass.
pub fn make_mode(alpha: u32, config: &CavityConfig) -> Result<ModeSpec> {
    make_mode_with_mass(alpha, config, 1.0)
}

/// Build the mode constants with an explicit oscillator mass parameter.
pub fn make_mode_with_mass(alpha: u32, config: &CavityConfig, mass: f64) -> Result<ModeSpec> {
    if alpha == 0 {
        return Err(CoreError::InvalidModeIndex);
    }
    config.validate()?;
    if !mass.is_finite() || mass <= 0.0 {
        return Err(CoreError::InvalidConfig(format!(
            "mode mass must be finite and positive, got {mass}"
        )));
    }
    let wavenumber = f64::from(alpha) * PI / config.length;
    let omega = config.light_speed * wavenumber;
    let amp_time = (2.0 * omega * omega * mass / (config.volume * config.eps0)).sqrt();
    let amp_space = (2.0 * omega * omega / config.time_window).sqrt();
    let mode = ModeSpec {
        alpha,
        wavenumber,
        omega,
        mass,
        amp_time,
        amp_space,
        amp_general: 1.0,
    };
    debug_assert!(mode.amp_time.is_finite() && mode.amp_time > 0.0);
    Ok(mode)
}

/// Modes for alpha = 1..n, in strictly increasing frequency order.
pub fn mode_bank(n_modes: u32, config: &CavityConfig) -> Result<Vec<ModeSpec>> {
    if n_modes == 0 {
        return Err(CoreError::InvalidConfig(
            "mode bank needs at least one mode".into(),
        ));
    }
    (1..=n_modes)
        .map(|alpha| make_mode(alpha, config))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn mode_constants_unit_cavity() {
        let config = CavityConfig::gaussian_natural(1.0, 1.0);
        let mode = make_mode(1, &config).unwrap();
        assert_eq!(mode.wavenumber, PI);
        assert_eq!(mode.omega, PI);
        // A = sqrt(2 omega^2) = pi*sqrt(2) for unit V, eps0, m.
        assert_relative_eq!(mode.amp_time, PI * 2.0_f64.sqrt(), max_relative = 1e-15);
    }

    #[test]
    fn mode_constants_pi_cavity() {
        let config = CavityConfig::gaussian_natural(PI, PI);
        let mode = make_mode(2, &config).unwrap();
        assert_eq!(mode.wavenumber, 2.0);
        assert_eq!(mode.omega, 2.0);
    }

    #[test]
    fn rejects_alpha_zero() {
        let config = CavityConfig::gaussian_natural(1.0, 1.0);
        assert!(make_mode(0, &config).is_err());
    }

    #[test]
    fn rejects_non_finite_config() {
        let mut config = CavityConfig::gaussian_natural(1.0, 1.0);
        config.length = f64::NAN;
        assert!(make_mode(1, &config).is_err());
        let mut config = CavityConfig::gaussian_natural(1.0, 1.0);
        config.volume = -2.0;
        assert!(make_mode(1, &config).is_err());
    }

    #[test]
    fn rejects_inconsistent_permeability() {
        let mut config = CavityConfig::si(1.0, 1.0);
        config.mu0 *= 1.0 + 1e-6;
        assert!(config.validate().is_err());
    }

    #[test]
    fn rejects_natural_units_with_si_constants() {
        let mut config = CavityConfig::si(1.0, 1.0);
        config.unit_system = UnitSystem::GaussianNatural;
        assert!(config.validate().is_err());
    }

    #[test]
    fn bank_unit_cavity_frequencies() {
        let config = CavityConfig::gaussian_natural(1.0, 1.0);
        let bank = mode_bank(3, &config).unwrap();
        let omegas: Vec<f64> = bank.iter().map(|m| m.omega).collect();
        assert_eq!(omegas, vec![PI, 2.0 * PI, 3.0 * PI]);
    }

    #[test]
    fn bank_singleton() {
        let config = CavityConfig::si(0.01, 1e-6);
        let bank = mode_bank(1, &config).unwrap();
        assert_eq!(bank.len(), 1);
    }

    #[test]
    fn bank_pi_cavity_wavenumbers() {
        let config = CavityConfig::gaussian_natural(PI, PI);
        let bank = mode_bank(5, &config).unwrap();
        for (i, mode) in bank.iter().enumerate() {
            assert_abs_diff_eq!(mode.wavenumber, (i + 1) as f64, epsilon = 1e-14);
        }
    }

    #[test]
    fn bank_strictly_increasing() {
        let config = CavityConfig::si(0.03, 2.4e-5);
        let bank = mode_bank(8, &config).unwrap();
        for pair in bank.windows(2) {
            assert!(pair[1].omega > pair[0].omega);
        }
        assert!(mode_bank(0, &config).is_err());
    }

    #[test]
    fn dispersion_relation() {
        let config = CavityConfig::si(0.04, 2.4e-5);
        for mode in mode_bank(6, &config).unwrap() {
            assert_relative_eq!(
                mode.omega / mode.wavenumber,
                config.light_speed,
                max_relative = 1e-15
            );
        }
    }

    #[test]
    fn round_trip_window_is_commensurate() {
        // omega * T = 2*pi*alpha when T = 2L/c.
        let config = CavityConfig::gaussian_natural(0.7, 0.7);
        for mode in mode_bank(5, &config).unwrap() {
            let cycles = mode.omega * config.time_window / (2.0 * PI);
            assert_relative_eq!(cycles, f64::from(mode.alpha), max_relative = 1e-13);
        }
    }

    #[test]
    fn amplitudes_scale_linearly_with_omega() {
        let config = CavityConfig::gaussian_natural(1.0, 1.0);
        let m1 = make_mode(1, &config).unwrap();
        let m2 = make_mode(2, &config).unwrap();
        assert_relative_eq!(m2.amp_time / m1.amp_time, 2.0, max_relative = 1e-14);
        assert_relative_eq!(m2.amp_space / m1.amp_space, 2.0, max_relative = 1e-14);
    }
}
