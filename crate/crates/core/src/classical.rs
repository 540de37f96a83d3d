//! Closed-form classical cavity solutions, duality rotations, Hamiltonians,
//! and finite-difference residuals of the two curl equations.
//!
//! Two families of solutions are built from the same mode amplitudes
//! `q(t) = C1*exp(i w t) + C2*exp(-i w t)`:
//!
//! * solution 1: `Ex = sum A q(t) sin(kz)`,
//!   `Hy = sum eps0 (A/k) dq/dt cos(kz)`;
//! * solution 2: `Hy = -(1/mu0) sum k A cos(kz) q'(t)`,
//!   `Ex = sum A dq'/dt sin(kz)` with `q'(t)` the antiderivative of `q`
//!   vanishing at t = 0.
//!
//! Frames carry both transverse polarizations `(Ex, Hy)` and `(Ey, Hx)`.
//! The second pair is zero for every constructor here and only becomes
//! populated under duality rotation: rotating E into H moves each component
//! into the *other* polarization plane, and only the four-component form
//! keeps rotated solutions exact solutions.

use std::f64::consts::PI;

use ndarray::Array1;
use num_complex::Complex64;

use crate::cavity::{CavityConfig, ModeSpec, UnitSystem};
use crate::error::{CoreError, Result};
use crate::quadrature;

/// Relative tolerance for "is this amplitude a real field" checks.
const REAL_FIELD_TOL: f64 = 1e-12;

/// One mode amplitude `q(t) = C1 e^{i w t} + C2 e^{-i w t}` together with
/// its closed-form derivative and antiderivative.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeAmplitude {
    pub c1: Complex64,
    pub c2: Complex64,
    pub omega: f64,
}

impl TimeAmplitude {
    pub fn new(c1: Complex64, c2: Complex64, omega: f64) -> Self {
        Self { c1, c2, omega }
    }

    /// Real cosine amplitude `q(t) = r cos(w t)` (C1 = C2 = r/2).
    pub fn real_cosine(r: f64, omega: f64) -> Self {
        let half = Complex64::new(0.5 * r, 0.0);
        Self::new(half, half, omega)
    }

    /// Real-field amplitude with C2 = conj(C1).
    pub fn real_field(c1: Complex64, omega: f64) -> Self {
        Self::new(c1, c1.conj(), omega)
    }

    /// A field is real iff C2 = conj(C1).
    pub fn is_real_field(&self) -> bool {
        let scale = self.c1.norm().max(self.c2.norm()).max(1e-300);
        (self.c2 - self.c1.conj()).norm() <= REAL_FIELD_TOL * scale
    }

    /// q(t).
    pub fn value(&self, t: f64) -> Complex64 {
        let phase = Complex64::new(0.0, self.omega * t).exp();
        self.c1 * phase + self.c2 * phase.conj()
    }

    /// dq/dt.
    pub fn derivative(&self, t: f64) -> Complex64 {
        let phase = Complex64::new(0.0, self.omega * t).exp();
        let iw = Complex64::new(0.0, self.omega);
        self.c1 * iw * phase - self.c2 * iw * phase.conj()
    }

    /// d2q/dt2 = -w^2 q.
    pub fn second_derivative(&self, t: f64) -> Complex64 {
        -self.omega * self.omega * self.value(t)
    }

    /// Antiderivative q'(t) = integral of q from 0 to t, in closed form.
    /// For omega = 0 the amplitude is constant and q'(t) = (C1 + C2) t.
    pub fn antiderivative(&self, t: f64) -> Complex64 {
        if self.omega == 0.0 {
            return (self.c1 + self.c2) * t;
        }
        let phase = Complex64::new(0.0, self.omega * t).exp();
        let iw = Complex64::new(0.0, self.omega);
        self.c1 * (phase - 1.0) / iw - self.c2 * (phase.conj() - 1.0) / iw
    }
}

/// Max residual of `d2q/dt2 + w^2 q` over the samples, with `w` the
/// oscillator frequency of the differential equation (not necessarily the
/// frequency baked into the amplitude -- passing a different one turns this
/// into a mismatch detector).
pub fn verify_oscillator_ode(amp: &TimeAmplitude, ode_omega: f64, t_samples: &[f64]) -> f64 {
    t_samples
        .iter()
        .map(|&t| (amp.second_derivative(t) + ode_omega * ode_omega * amp.value(t)).norm())
        .fold(0.0, f64::max)
}

/// Which construction produced a frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FrameKind {
    Sol1,
    Sol2,
    DualRotated(f64),
    ComplexCombined,
    General,
    SpaceScheme,
}

impl FrameKind {
    pub fn label(&self) -> String {
        match self {
            FrameKind::Sol1 => "sol1".into(),
            FrameKind::Sol2 => "sol2".into(),
            FrameKind::DualRotated(theta) => format!("dual-rotated(theta={theta:.15e})"),
            FrameKind::ComplexCombined => "complex-combined".into(),
            FrameKind::General => "general".into(),
            FrameKind::SpaceScheme => "space-scheme".into(),
        }
    }
}

/// Sampled transverse fields on a z-grid at one time.
#[derive(Debug, Clone)]
pub struct FieldFrame {
    pub z_grid: Vec<f64>,
    pub t: f64,
    pub ex: Array1<Complex64>,
    pub hy: Array1<Complex64>,
    /// Second-polarization components; zero except for rotated frames.
    pub ey: Array1<Complex64>,
    pub hx: Array1<Complex64>,
    pub kind: FrameKind,
    pub units: UnitSystem,
}

impl FieldFrame {
    /// All-zero frame on a grid.
    pub fn zeros(z_grid: Vec<f64>, t: f64, kind: FrameKind, units: UnitSystem) -> Self {
        let n = z_grid.len();
        Self {
            z_grid,
            t,
            ex: Array1::zeros(n),
            hy: Array1::zeros(n),
            ey: Array1::zeros(n),
            hx: Array1::zeros(n),
            kind,
            units,
        }
    }

    pub fn len(&self) -> usize {
        self.z_grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.z_grid.is_empty()
    }

    /// Largest imaginary part across all components.
    pub fn max_imag(&self) -> f64 {
        [&self.ex, &self.hy, &self.ey, &self.hx]
            .iter()
            .flat_map(|a| a.iter())
            .map(|v| v.im.abs())
            .fold(0.0, f64::max)
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.max_imag() <= tol
    }

    pub fn has_secondary_polarization(&self) -> bool {
        self.ey.iter().chain(self.hx.iter()).any(|v| v.norm() > 0.0)
    }

    /// Pointwise energy density `0.5 (eps0 |E|^2 + mu0 |H|^2)` including
    /// both polarizations.
    pub fn energy_density(&self, config: &CavityConfig) -> Vec<f64> {
        (0..self.len())
            .map(|i| {
                let e2 = self.ex[i].norm_sqr() + self.ey[i].norm_sqr();
                let h2 = self.hy[i].norm_sqr() + self.hx[i].norm_sqr();
                0.5 * (config.eps0 * e2 + config.mu0 * h2)
            })
            .collect()
    }

    /// Trapezoid integral of the energy density over the grid.
    pub fn total_energy(&self, config: &CavityConfig) -> f64 {
        let w = self.energy_density(config);
        let mut total = 0.0;
        for i in 1..w.len() {
            let dz = self.z_grid[i] - self.z_grid[i - 1];
            total += 0.5 * dz * (w[i] + w[i - 1]);
        }
        total
    }

    /// Largest entrywise difference against another frame (all components).
    pub fn max_abs_diff(&self, other: &FieldFrame) -> f64 {
        let pairs = [
            (&self.ex, &other.ex),
            (&self.hy, &other.hy),
            (&self.ey, &other.ey),
            (&self.hx, &other.hx),
        ];
        pairs
            .iter()
            .flat_map(|(a, b)| a.iter().zip(b.iter()))
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    /// Columnar text form: a header naming kind, time and units, then one
    /// row per grid point. The secondary polarization columns are appended
    /// only when they carry data.
    pub fn to_columnar(&self) -> String {
        let mut out = String::new();
        let secondary = self.has_secondary_polarization();
        out.push_str(&format!(
            "# frame kind={} t={:.15e} units={} points={}\n",
            self.kind.label(),
            self.t,
            self.units.label(),
            self.len()
        ));
        if secondary {
            out.push_str("# z ex_re ex_im hy_re hy_im ey_re ey_im hx_re hx_im\n");
        } else {
            out.push_str("# z ex_re ex_im hy_re hy_im\n");
        }
        for i in 0..self.len() {
            out.push_str(&format!(
                "{:.15e} {:.15e} {:.15e} {:.15e} {:.15e}",
                self.z_grid[i], self.ex[i].re, self.ex[i].im, self.hy[i].re, self.hy[i].im
            ));
            if secondary {
                out.push_str(&format!(
                    " {:.15e} {:.15e} {:.15e} {:.15e}",
                    self.ey[i].re, self.ey[i].im, self.hx[i].re, self.hx[i].im
                ));
            }
            out.push('\n');
        }
        out
    }
}

fn check_inputs(
    modes: &[ModeSpec],
    amps: &[TimeAmplitude],
    z_grid: &[f64],
    config: &CavityConfig,
) -> Result<()> {
    if modes.len() != amps.len() {
        return Err(CoreError::DimensionMismatch(format!(
            "{} modes but {} amplitudes",
            modes.len(),
            amps.len()
        )));
    }
    for &z in z_grid {
        if !(0.0..=config.length).contains(&z) {
            return Err(CoreError::GridOutOfRange {
                value: z,
                length: config.length,
            });
        }
    }
    Ok(())
}

/// Fields of the first partial solution at time `t`.
pub fn fields_sol1(
    modes: &[ModeSpec],
    amps: &[TimeAmplitude],
    z_grid: &[f64],
    t: f64,
    config: &CavityConfig,
) -> Result<FieldFrame> {
    check_inputs(modes, amps, z_grid, config)?;
    let mut frame = FieldFrame::zeros(z_grid.to_vec(), t, FrameKind::Sol1, config.unit_system);
    for (mode, amp) in modes.iter().zip(amps) {
        let q = amp.value(t);
        let dq = amp.derivative(t);
        let h_coeff = config.eps0 * mode.amp_time / mode.wavenumber;
        for (i, &z) in z_grid.iter().enumerate() {
            frame.ex[i] += q * (mode.amp_time * (mode.wavenumber * z).sin());
            frame.hy[i] += dq * (h_coeff * (mode.wavenumber * z).cos());
        }
    }
    Ok(frame)
}

/// Fields of the second partial solution, built from the antiderivative
/// q'(t) with q'(0) = 0. Its electric field coincides with solution 1.
pub fn fields_sol2(
    modes: &[ModeSpec],
    amps: &[TimeAmplitude],
    z_grid: &[f64],
    t: f64,
    config: &CavityConfig,
) -> Result<FieldFrame> {
    check_inputs(modes, amps, z_grid, config)?;
    let mut frame = FieldFrame::zeros(z_grid.to_vec(), t, FrameKind::Sol2, config.unit_system);
    for (mode, amp) in modes.iter().zip(amps) {
        let q_prime = amp.antiderivative(t);
        let dq_prime = amp.value(t); // d/dt of the antiderivative
        let h_coeff = -mode.wavenumber * mode.amp_time / config.mu0;
        for (i, &z) in z_grid.iter().enumerate() {
            frame.ex[i] += dq_prime * (mode.amp_time * (mode.wavenumber * z).sin());
            frame.hy[i] += q_prime * (h_coeff * (mode.wavenumber * z).cos());
        }
    }
    Ok(frame)
}

/// Dual rotation by `theta`: E -> E cos + H sin, H -> H cos - E sin,
/// applied componentwise to the full transverse field. Rotating by pi/2
/// realizes the E -> H, H -> -E swap.
pub fn duality_rotate(frame: &FieldFrame, theta: f64) -> FieldFrame {
    let (s, c) = theta.sin_cos();
    let n = frame.len();
    let mut out = frame.clone();
    for i in 0..n {
        let (ex, ey, hx, hy) = (frame.ex[i], frame.ey[i], frame.hx[i], frame.hy[i]);
        out.ex[i] = ex * c + hx * s;
        out.ey[i] = ey * c + hy * s;
        out.hx[i] = hx * c - ex * s;
        out.hy[i] = hy * c - ey * s;
    }
    out.kind = match frame.kind {
        FrameKind::DualRotated(prev) => FrameKind::DualRotated(prev + theta),
        _ => FrameKind::DualRotated(theta),
    };
    out
}

/// Complex combination of the two partial solutions:
/// E = E1 + i E2, H = H2 + i H1.
pub fn combine_complex(sol1: &FieldFrame, sol2: &FieldFrame) -> Result<FieldFrame> {
    if sol1.z_grid != sol2.z_grid {
        return Err(CoreError::FrameMismatch("z grids differ".into()));
    }
    if sol1.t != sol2.t {
        return Err(CoreError::FrameMismatch("times differ".into()));
    }
    if sol1.units != sol2.units {
        return Err(CoreError::FrameMismatch("unit systems differ".into()));
    }
    let i = Complex64::new(0.0, 1.0);
    let mut out = FieldFrame::zeros(
        sol1.z_grid.clone(),
        sol1.t,
        FrameKind::ComplexCombined,
        sol1.units,
    );
    for p in 0..out.len() {
        out.ex[p] = sol1.ex[p] + i * sol2.ex[p];
        out.hy[p] = sol2.hy[p] + i * sol1.hy[p];
        out.ey[p] = sol1.ey[p] + i * sol2.ey[p];
        out.hx[p] = sol2.hx[p] + i * sol1.hx[p];
    }
    Ok(out)
}

/// Value of the integrand whose time integral defines the free function
/// f_alpha: `A cos(kz) [ -q(tau) k/mu0 - d2q/dtau2 eps0/k ]`. It vanishes
/// identically when q satisfies the mode oscillator equation.
pub fn f_alpha_integrand(
    mode: &ModeSpec,
    amp: &TimeAmplitude,
    z: f64,
    tau: f64,
    config: &CavityConfig,
) -> Complex64 {
    let q = amp.value(tau);
    let qdd = amp.second_derivative(tau);
    let bracket = -q * (mode.wavenumber / config.mu0) - qdd * (config.eps0 / mode.wavenumber);
    bracket * (mode.amp_time * (mode.wavenumber * z).cos())
}

/// f_alpha(t) by quadrature of [`f_alpha_integrand`] over [0, t].
pub fn f_alpha(
    mode: &ModeSpec,
    amp: &TimeAmplitude,
    z: f64,
    t: f64,
    config: &CavityConfig,
) -> Complex64 {
    let cycles = (amp.omega * t).abs() / (2.0 * PI);
    let panels = 16 + (16.0 * cycles).ceil() as usize;
    quadrature::integrate_complex(
        |tau| f_alpha_integrand(mode, amp, z, tau, config),
        0.0,
        t,
        panels,
    )
}

/// Max-abs finite-difference residuals of the two curl equations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaxwellResidual {
    /// max |dz E + mu0 dt H| (Faraday side, both polarizations).
    pub faraday: f64,
    /// max |eps0 dt E + dz H| (Ampere side, both polarizations).
    pub ampere: f64,
}

fn central_diff(
    prev: &Array1<Complex64>,
    next: &Array1<Complex64>,
    i: usize,
    step: f64,
) -> Complex64 {
    (next[i] - prev[i]) / (2.0 * step)
}

/// Central-difference residuals over the interior points of a time-ordered
/// stack of frames on one uniform grid.
pub fn maxwell_residual(frames: &[FieldFrame], config: &CavityConfig) -> Result<MaxwellResidual> {
    if frames.len() < 3 {
        return Err(CoreError::TooFewFrames(frames.len()));
    }
    let z_grid = &frames[0].z_grid;
    let n_z = z_grid.len();
    if n_z < 3 {
        return Err(CoreError::NonUniformSampling(
            "z grid needs at least 3 points".into(),
        ));
    }
    let dz = z_grid[1] - z_grid[0];
    for w in z_grid.windows(2) {
        if ((w[1] - w[0]) - dz).abs() > 1e-9 * dz.abs() {
            return Err(CoreError::NonUniformSampling(
                "z grid is not uniform".into(),
            ));
        }
    }
    let dt = frames[1].t - frames[0].t;
    if dt <= 0.0 {
        return Err(CoreError::NonUniformSampling(
            "frames must be strictly increasing in time".into(),
        ));
    }
    for w in frames.windows(2) {
        if ((w[1].t - w[0].t) - dt).abs() > 1e-9 * dt.abs() {
            return Err(CoreError::NonUniformSampling(
                "frame times are not uniform".into(),
            ));
        }
        if w[1].z_grid != *z_grid {
            return Err(CoreError::FrameMismatch(
                "frames sampled on different z grids".into(),
            ));
        }
    }

    let mut faraday = 0.0_f64;
    let mut ampere = 0.0_f64;
    for j in 1..frames.len() - 1 {
        let (prev, here, next) = (&frames[j - 1], &frames[j], &frames[j + 1]);
        for i in 1..n_z - 1 {
            let dex_dt = central_diff(&prev.ex, &next.ex, i, dt);
            let dhy_dt = central_diff(&prev.hy, &next.hy, i, dt);
            let dex_dz = (here.ex[i + 1] - here.ex[i - 1]) / (2.0 * dz);
            let dhy_dz = (here.hy[i + 1] - here.hy[i - 1]) / (2.0 * dz);
            ampere = ampere.max((config.eps0 * dex_dt + dhy_dz).norm());
            faraday = faraday.max((dex_dz + config.mu0 * dhy_dt).norm());

            // Second polarization: the cross products flip sign.
            let dey_dt = central_diff(&prev.ey, &next.ey, i, dt);
            let dhx_dt = central_diff(&prev.hx, &next.hx, i, dt);
            let dey_dz = (here.ey[i + 1] - here.ey[i - 1]) / (2.0 * dz);
            let dhx_dz = (here.hx[i + 1] - here.hx[i - 1]) / (2.0 * dz);
            ampere = ampere.max((config.eps0 * dey_dt - dhx_dz).norm());
            faraday = faraday.max((config.mu0 * dhx_dt - dey_dz).norm());
        }
    }
    Ok(MaxwellResidual { faraday, ampere })
}

/// Per-mode split of a Hamiltonian total.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeEnergy {
    /// Coordinate-like term, e.g. m w^2 q^2 / 2.
    pub q_term: f64,
    /// Momentum-like term, e.g. p^2 / (2m).
    pub p_term: f64,
}

/// Hamiltonian evaluated along two algebraic routes that must agree.
#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianValue {
    /// Volume integral of the energy density, reduced with the exact
    /// sin/cos orthogonality over [0, L].
    pub by_field_integral: f64,
    /// Oscillator sum over modes.
    pub by_oscillator_sum: f64,
    pub per_mode: Vec<ModeEnergy>,
}

fn require_real(amps: &[TimeAmplitude]) -> Result<()> {
    for (i, amp) in amps.iter().enumerate() {
        if !amp.is_real_field() {
            return Err(CoreError::NotRealField(format!(
                "amplitude {i} has C2 != conj(C1)"
            )));
        }
    }
    Ok(())
}

/// Hamiltonian of solution 1 at time `t`.
pub fn hamiltonian_sol1(
    modes: &[ModeSpec],
    amps: &[TimeAmplitude],
    t: f64,
    config: &CavityConfig,
) -> Result<HamiltonianValue> {
    if modes.len() != amps.len() {
        return Err(CoreError::DimensionMismatch(format!(
            "{} modes but {} amplitudes",
            modes.len(),
            amps.len()
        )));
    }
    require_real(amps)?;
    let mut field = 0.0;
    let mut osc = 0.0;
    let mut per_mode = Vec::with_capacity(modes.len());
    for (mode, amp) in modes.iter().zip(amps) {
        let q = amp.value(t).re;
        let dq = amp.derivative(t).re;
        let p = mode.mass * dq;
        // Electric and magnetic parts of the volume integral; each mode's
        // profile integrates to L/2 by orthogonality, with the transverse
        // cross-section supplying V/L.
        let e_part = 0.25 * config.volume * config.eps0 * mode.amp_time.powi(2) * q * q;
        let h_part = 0.25
            * config.volume
            * config.mu0
            * (config.eps0 * mode.amp_time / mode.wavenumber).powi(2)
            * dq
            * dq;
        field += e_part + h_part;
        let q_term = 0.5 * mode.mass * mode.omega.powi(2) * q * q;
        let p_term = 0.5 * p * p / mode.mass;
        osc += q_term + p_term;
        per_mode.push(ModeEnergy { q_term, p_term });
    }
    Ok(HamiltonianValue {
        by_field_integral: field,
        by_oscillator_sum: osc,
        per_mode,
    })
}

/// Hamiltonian of solution 2 at time `t`. The oscillator sum is evaluated
/// with the canonical variables q'' = w q', p'' = m w dq'/dt.
pub fn hamiltonian_sol2(
    modes: &[ModeSpec],
    amps: &[TimeAmplitude],
    t: f64,
    config: &CavityConfig,
) -> Result<HamiltonianValue> {
    if modes.len() != amps.len() {
        return Err(CoreError::DimensionMismatch(format!(
            "{} modes but {} amplitudes",
            modes.len(),
            amps.len()
        )));
    }
    require_real(amps)?;
    let mut field = 0.0;
    let mut osc = 0.0;
    let mut per_mode = Vec::with_capacity(modes.len());
    for (mode, amp) in modes.iter().zip(amps) {
        let q_prime = amp.antiderivative(t).re;
        let dq_prime = amp.value(t).re;
        let e_part = 0.25 * config.volume * config.eps0 * mode.amp_time.powi(2) * dq_prime.powi(2);
        let h_part = 0.25 * config.volume / config.mu0
            * (mode.wavenumber * mode.amp_time).powi(2)
            * q_prime.powi(2);
        field += e_part + h_part;
        let q2 = mode.omega * q_prime;
        let p2 = mode.mass * mode.omega * dq_prime;
        let q_term = 0.5 * mode.mass * mode.omega.powi(2) * q2 * q2;
        let p_term = 0.5 * p2 * p2 / mode.mass;
        osc += q_term + p_term;
        per_mode.push(ModeEnergy { q_term, p_term });
    }
    Ok(HamiltonianValue {
        by_field_integral: field,
        by_oscillator_sum: osc,
        per_mode,
    })
}

/// The solution-2 Hamiltonian written in its two canonical forms: directly
/// in (q', dq'/dt) and after the change of variables to (q'', p'').
/// The two values agree identically; exposing both lets tests pin that.
pub fn hamiltonian_sol2_canonical_forms(
    modes: &[ModeSpec],
    amps: &[TimeAmplitude],
    t: f64,
) -> Result<(f64, f64)> {
    if modes.len() != amps.len() {
        return Err(CoreError::DimensionMismatch(format!(
            "{} modes but {} amplitudes",
            modes.len(),
            amps.len()
        )));
    }
    require_real(amps)?;
    let mut direct = 0.0;
    let mut canonical = 0.0;
    for (mode, amp) in modes.iter().zip(amps) {
        let q_prime = amp.antiderivative(t).re;
        let dq_prime = amp.value(t).re;
        direct += 0.5
            * (mode.mass * mode.omega.powi(4) * q_prime * q_prime
                + mode.mass * mode.omega.powi(2) * dq_prime * dq_prime);
        let q2 = mode.omega * q_prime;
        let p2 = mode.mass * mode.omega * dq_prime;
        canonical += 0.5 * (mode.mass * mode.omega.powi(2) * q2 * q2 + p2 * p2 / mode.mass);
    }
    Ok((direct, canonical))
}
