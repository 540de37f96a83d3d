//! Canonical quantization of the cavity modes: quadrature and ladder
//! operators for both partial solutions (time scheme) and for the
//! space-coordinate scheme, assembled field operators, the G(z) observable,
//! and commutation-relation reports.
//!
//! Sign convention: with the ladder construction
//! `q = sqrt(h/2mw)(a^+ + a)`, `p = i sqrt(hmw/2)(a^+ - a)` the commutator
//! comes out `[p, q] = -i h` on the lower block. Reports carry this
//! convention explicitly rather than normalizing it away, because the
//! source convention for the pair is stated with the opposite sign.

use std::f64::consts::PI;

use ndarray::Array2;
use num_complex::Complex64;

use crate::cavity::{CavityConfig, ModeSpec, UnitSystem};
use crate::classical::{FieldFrame, FrameKind};
use crate::error::{CoreError, Result};
use crate::fock::{FockSpace, HilbertSpace, OperatorMatrix};
use crate::profiles::SpatialProfile;
use crate::quadrature;

/// Default per-mode Fock cutoff.
pub const DEFAULT_CUTOFF: usize = 24;

/// Which canonical pair is being quantized and with which constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SchemeKind {
    /// Time-argument operators with Planck constant `hbar`.
    TimeDomain { hbar: f64 },
    /// Space-argument operators with quantization constant `lambda0`.
    SpaceDomain { lambda0: f64 },
}

/// Quantization scheme plus the truncation cutoff.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scheme {
    pub kind: SchemeKind,
    pub cutoff: usize,
}

impl Scheme {
    pub fn time_domain(hbar: f64, cutoff: usize) -> Result<Self> {
        if !hbar.is_finite() || hbar <= 0.0 {
            return Err(CoreError::InvalidScheme(format!(
                "hbar must be positive, got {hbar}"
            )));
        }
        FockSpace::new(cutoff)?;
        Ok(Self {
            kind: SchemeKind::TimeDomain { hbar },
            cutoff,
        })
    }

    pub fn space_domain(lambda0: f64, cutoff: usize) -> Result<Self> {
        if !lambda0.is_finite() || lambda0 <= 0.0 {
            return Err(CoreError::InvalidScheme(format!(
                "lambda0 must be positive, got {lambda0}"
            )));
        }
        FockSpace::new(cutoff)?;
        Ok(Self {
            kind: SchemeKind::SpaceDomain { lambda0 },
            cutoff,
        })
    }

    /// hbar for the time scheme, lambda0 for the space scheme.
    pub fn quantum_constant(&self) -> f64 {
        match self.kind {
            SchemeKind::TimeDomain { hbar } => hbar,
            SchemeKind::SpaceDomain { lambda0 } => lambda0,
        }
    }

    /// Oscillator mass entering the ladder construction; the space scheme
    /// has no mass parameter.
    pub fn effective_mass(&self, mode: &ModeSpec) -> f64 {
        match self.kind {
            SchemeKind::TimeDomain { .. } => mode.mass,
            SchemeKind::SpaceDomain { .. } => 1.0,
        }
    }

    pub fn label(&self) -> String {
        match self.kind {
            SchemeKind::TimeDomain { hbar } => format!("time-domain(hbar={hbar})"),
            SchemeKind::SpaceDomain { lambda0 } => format!("space-domain(lambda0={lambda0})"),
        }
    }

    fn space(&self) -> FockSpace {
        FockSpace::new(self.cutoff).expect("validated at construction")
    }
}

/// Hermitian coordinate/momentum pair for one mode.
#[derive(Debug, Clone)]
pub struct QuadraturePair {
    pub q_op: OperatorMatrix,
    pub p_op: OperatorMatrix,
}

/// q = sqrt(h/2mw)(a^+ + a), p = i sqrt(hmw/2)(a^+ - a).
pub fn quadratures_from_ladder(mode: &ModeSpec, scheme: &Scheme) -> Result<QuadraturePair> {
    let h = scheme.quantum_constant();
    let m = scheme.effective_mass(mode);
    let w = mode.omega;
    let space = scheme.space();
    let a = OperatorMatrix::annihilation(&space);
    let adag = OperatorMatrix::creation(&space);
    let q_coeff = Complex64::new((h / (2.0 * m * w)).sqrt(), 0.0);
    let p_coeff = Complex64::new(0.0, (h * m * w / 2.0).sqrt());
    let q_op = adag.add(&a)?.scale(q_coeff);
    let p_op = adag.sub(&a)?.scale(p_coeff);
    Ok(QuadraturePair { q_op, p_op })
}

/// Invert the quadratures back to (a, a^+); the roundtrip with
/// [`quadratures_from_ladder`] is the identity.
pub fn ladder_from_quadratures(
    pair: &QuadraturePair,
    mode: &ModeSpec,
    scheme: &Scheme,
) -> Result<(OperatorMatrix, OperatorMatrix)> {
    let h = scheme.quantum_constant();
    let m = scheme.effective_mass(mode);
    let w = mode.omega;
    let norm = Complex64::new(1.0 / (2.0 * h * m * w).sqrt(), 0.0);
    let mw = Complex64::new(m * w, 0.0);
    let i = Complex64::new(0.0, 1.0);
    let a = pair.q_op.scale(mw).add(&pair.p_op.scale(i))?.scale(norm);
    let adag = pair.q_op.scale(mw).sub(&pair.p_op.scale(i))?.scale(norm);
    Ok((a, adag))
}

/// Ladder operator roles for Heisenberg phase evolution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LadderKind {
    Annihilation,
    Creation,
}

/// Free-oscillator phase evolution: a(t) = a e^{-iwt}, a^+(t) = a^+ e^{+iwt}.
pub fn heisenberg_evolve(
    op: &OperatorMatrix,
    omega: f64,
    t: f64,
    kind: LadderKind,
) -> OperatorMatrix {
    let sign = match kind {
        LadderKind::Annihilation => -1.0,
        LadderKind::Creation => 1.0,
    };
    op.scale(Complex64::new(0.0, sign * omega * t).exp())
}

/// Which operator assembly a [`FieldOperatorFrame`] holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldOperatorKind {
    /// Time scheme, first partial solution.
    Sol1Ops,
    /// Time scheme, second partial solution.
    Sol2Ops,
    /// Complex combination of the two partial solutions on a doubled
    /// tensor space. Not Hermitian: the Hermitian part is the solution-1
    /// operator and the anti-Hermitian part carries solution 2.
    Combined,
    /// Space-coordinate scheme.
    SpaceScheme,
}

/// Per-grid-point field operators at one time.
#[derive(Debug, Clone)]
pub struct FieldOperatorFrame {
    pub z_grid: Vec<f64>,
    pub t: f64,
    pub e_ops: Vec<OperatorMatrix>,
    pub h_ops: Vec<OperatorMatrix>,
    pub kind: FieldOperatorKind,
}

fn require_time_domain(scheme: &Scheme) -> Result<f64> {
    match scheme.kind {
        SchemeKind::TimeDomain { hbar } => Ok(hbar),
        SchemeKind::SpaceDomain { .. } => Err(CoreError::InvalidScheme(
            "this operator family needs the time-domain scheme".into(),
        )),
    }
}

fn require_space_domain(scheme: &Scheme) -> Result<f64> {
    match scheme.kind {
        SchemeKind::SpaceDomain { lambda0 } => Ok(lambda0),
        SchemeKind::TimeDomain { .. } => Err(CoreError::InvalidScheme(
            "this operator family needs the space-domain scheme".into(),
        )),
    }
}

fn mode_space(modes: &[ModeSpec], cutoff: usize) -> Result<HilbertSpace> {
    if modes.is_empty() {
        return Err(CoreError::DimensionMismatch("no modes given".into()));
    }
    HilbertSpace::product(&vec![cutoff; modes.len()])
}

fn check_grid(z_grid: &[f64], config: &CavityConfig) -> Result<()> {
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

/// Field operators of the first partial solution:
/// E = sum sqrt(hw/Veps0)(a^+(t) + a(t)) sin(kz),
/// H = i sum sqrt(hw/Vmu0)(a^+(t) - a(t)) cos(kz).
pub fn field_ops_sol1(
    modes: &[ModeSpec],
    scheme: &Scheme,
    config: &CavityConfig,
    z_grid: &[f64],
    t: f64,
) -> Result<FieldOperatorFrame> {
    let hbar = require_time_domain(scheme)?;
    check_grid(z_grid, config)?;
    let space = mode_space(modes, scheme.cutoff)?;
    let fock = scheme.space();
    let a0 = OperatorMatrix::annihilation(&fock);
    let adag0 = OperatorMatrix::creation(&fock);

    // Per-mode Hermitian building blocks, embedded once.
    let mut e_parts = Vec::with_capacity(modes.len());
    let mut h_parts = Vec::with_capacity(modes.len());
    for (slot, mode) in modes.iter().enumerate() {
        let a_t = heisenberg_evolve(&a0, mode.omega, t, LadderKind::Annihilation);
        let adag_t = heisenberg_evolve(&adag0, mode.omega, t, LadderKind::Creation);
        let e_coeff = (hbar * mode.omega / (config.volume * config.eps0)).sqrt();
        let h_coeff = (hbar * mode.omega / (config.volume * config.mu0)).sqrt();
        let e_block = adag_t.add(&a_t)?.scale(Complex64::new(e_coeff, 0.0));
        let h_block = adag_t.sub(&a_t)?.scale(Complex64::new(0.0, h_coeff));
        e_parts.push(OperatorMatrix::embed(&e_block, &space, slot)?);
        h_parts.push(OperatorMatrix::embed(&h_block, &space, slot)?);
    }

    assemble_frame(
        modes,
        z_grid,
        t,
        &space,
        &e_parts,
        &h_parts,
        FieldOperatorKind::Sol1Ops,
    )
}

/// Field operators of the second partial solution:
/// E = i sum sqrt(hw/Veps0)(a''^+(t) - a''(t)) sin(kz),
/// H = -sum sqrt(hw/Vmu0)(a''^+(t) + a''(t)) cos(kz).
pub fn field_ops_sol2(
    modes: &[ModeSpec],
    scheme: &Scheme,
    config: &CavityConfig,
    z_grid: &[f64],
    t: f64,
) -> Result<FieldOperatorFrame> {
    let hbar = require_time_domain(scheme)?;
    check_grid(z_grid, config)?;
    let space = mode_space(modes, scheme.cutoff)?;
    let fock = scheme.space();
    let a0 = OperatorMatrix::annihilation(&fock);
    let adag0 = OperatorMatrix::creation(&fock);

    let mut e_parts = Vec::with_capacity(modes.len());
    let mut h_parts = Vec::with_capacity(modes.len());
    for (slot, mode) in modes.iter().enumerate() {
        let a_t = heisenberg_evolve(&a0, mode.omega, t, LadderKind::Annihilation);
        let adag_t = heisenberg_evolve(&adag0, mode.omega, t, LadderKind::Creation);
        let e_coeff = (hbar * mode.omega / (config.volume * config.eps0)).sqrt();
        let h_coeff = (hbar * mode.omega / (config.volume * config.mu0)).sqrt();
        let e_block = adag_t.sub(&a_t)?.scale(Complex64::new(0.0, e_coeff));
        let h_block = adag_t.add(&a_t)?.scale(Complex64::new(-h_coeff, 0.0));
        e_parts.push(OperatorMatrix::embed(&e_block, &space, slot)?);
        h_parts.push(OperatorMatrix::embed(&h_block, &space, slot)?);
    }

    assemble_frame(
        modes,
        z_grid,
        t,
        &space,
        &e_parts,
        &h_parts,
        FieldOperatorKind::Sol2Ops,
    )
}

/// Combined field operators on independent tensor factors per mode
/// (factor 2a holds the solution-1 ladder of mode a, factor 2a+1 the
/// solution-2 ladder):
/// E = sum sqrt(hw/Veps0){(a^+ + a) + (a'' - a''^+)} sin(kz),
/// H = sum sqrt(hw/Vmu0){(a^+ - a) - (a'' + a''^+)} cos(kz).
pub fn field_ops_combined(
    modes: &[ModeSpec],
    scheme: &Scheme,
    config: &CavityConfig,
    z_grid: &[f64],
    t: f64,
) -> Result<FieldOperatorFrame> {
    let hbar = require_time_domain(scheme)?;
    check_grid(z_grid, config)?;
    if modes.is_empty() {
        return Err(CoreError::DimensionMismatch("no modes given".into()));
    }
    let space = HilbertSpace::product(&vec![scheme.cutoff; 2 * modes.len()])?;
    let fock = scheme.space();
    let a0 = OperatorMatrix::annihilation(&fock);
    let adag0 = OperatorMatrix::creation(&fock);

    let mut e_parts = Vec::with_capacity(modes.len());
    let mut h_parts = Vec::with_capacity(modes.len());
    for (idx, mode) in modes.iter().enumerate() {
        let a_t = heisenberg_evolve(&a0, mode.omega, t, LadderKind::Annihilation);
        let adag_t = heisenberg_evolve(&adag0, mode.omega, t, LadderKind::Creation);
        let e_coeff = Complex64::new(
            (hbar * mode.omega / (config.volume * config.eps0)).sqrt(),
            0.0,
        );
        let h_coeff = Complex64::new(
            (hbar * mode.omega / (config.volume * config.mu0)).sqrt(),
            0.0,
        );

        let sol1_e = OperatorMatrix::embed(&adag_t.add(&a_t)?, &space, 2 * idx)?;
        let sol2_e = OperatorMatrix::embed(&a_t.sub(&adag_t)?, &space, 2 * idx + 1)?;
        e_parts.push(sol1_e.add(&sol2_e)?.scale(e_coeff));

        let sol1_h = OperatorMatrix::embed(&adag_t.sub(&a_t)?, &space, 2 * idx)?;
        let sol2_h = OperatorMatrix::embed(&adag_t.add(&a_t)?, &space, 2 * idx + 1)?;
        h_parts.push(sol1_h.sub(&sol2_h)?.scale(h_coeff));
    }

    assemble_frame(
        modes,
        z_grid,
        t,
        &space,
        &e_parts,
        &h_parts,
        FieldOperatorKind::Combined,
    )
}

/// Space-scheme field operators:
/// E = i sum A' sqrt(lambda0/2w) sin(wt) (a''^+ - a''),
/// H = sum A' sqrt(lambda0/2w) cos(wt) (a'' + a''^+).
pub fn field_ops_space(
    modes: &[ModeSpec],
    scheme: &Scheme,
    config: &CavityConfig,
    z_grid: &[f64],
    t: f64,
) -> Result<FieldOperatorFrame> {
    let lambda0 = require_space_domain(scheme)?;
    check_grid(z_grid, config)?;
    let space = mode_space(modes, scheme.cutoff)?;
    let fock = scheme.space();
    let a0 = OperatorMatrix::annihilation(&fock);
    let adag0 = OperatorMatrix::creation(&fock);

    let zeros = OperatorMatrix::identity(&space).scale(Complex64::new(0.0, 0.0));
    let mut e_ops = vec![zeros.clone(); z_grid.len()];
    let mut h_ops = vec![zeros; z_grid.len()];
    for (slot, mode) in modes.iter().enumerate() {
        let coeff = mode.amp_space * (lambda0 / (2.0 * mode.omega)).sqrt();
        let e_block = adag0
            .sub(&a0)?
            .scale(Complex64::new(0.0, coeff * (mode.omega * t).sin()));
        let h_block = adag0
            .add(&a0)?
            .scale(Complex64::new(coeff * (mode.omega * t).cos(), 0.0));
        let e_emb = OperatorMatrix::embed(&e_block, &space, slot)?;
        let h_emb = OperatorMatrix::embed(&h_block, &space, slot)?;
        // The matrices carry no z dependence; every grid point gets the
        // same operator copy.
        for i in 0..z_grid.len() {
            e_ops[i] = e_ops[i].add(&e_emb)?;
            h_ops[i] = h_ops[i].add(&h_emb)?;
        }
    }
    Ok(FieldOperatorFrame {
        z_grid: z_grid.to_vec(),
        t,
        e_ops,
        h_ops,
        kind: FieldOperatorKind::SpaceScheme,
    })
}

fn assemble_frame(
    modes: &[ModeSpec],
    z_grid: &[f64],
    t: f64,
    space: &HilbertSpace,
    e_parts: &[OperatorMatrix],
    h_parts: &[OperatorMatrix],
    kind: FieldOperatorKind,
) -> Result<FieldOperatorFrame> {
    let d = space.total_dim();
    let mut e_ops = Vec::with_capacity(z_grid.len());
    let mut h_ops = Vec::with_capacity(z_grid.len());
    for &z in z_grid {
        let mut e = Array2::<Complex64>::zeros((d, d));
        let mut h = Array2::<Complex64>::zeros((d, d));
        for (mode, (e_part, h_part)) in modes.iter().zip(e_parts.iter().zip(h_parts)) {
            let sin = (mode.wavenumber * z).sin();
            let cos = (mode.wavenumber * z).cos();
            e.scaled_add(Complex64::new(sin, 0.0), &e_part.entries);
            h.scaled_add(Complex64::new(cos, 0.0), &h_part.entries);
        }
        e_ops.push(OperatorMatrix::from_entries(space.clone(), e)?);
        h_ops.push(OperatorMatrix::from_entries(space.clone(), h)?);
    }
    Ok(FieldOperatorFrame {
        z_grid: z_grid.to_vec(),
        t,
        e_ops,
        h_ops,
        kind,
    })
}

/// Mode-sum Hamiltonian operator sum 0.5 (p^2/m + m w^2 q^2), one tensor
/// factor per mode.
pub fn hamiltonian_operator(modes: &[ModeSpec], scheme: &Scheme) -> Result<OperatorMatrix> {
    let space = mode_space(modes, scheme.cutoff)?;
    let mut total = OperatorMatrix::identity(&space).scale(Complex64::new(0.0, 0.0));
    for (slot, mode) in modes.iter().enumerate() {
        let pair = quadratures_from_ladder(mode, scheme)?;
        let m = scheme.effective_mass(mode);
        let q2 = pair.q_op.matmul(&pair.q_op)?;
        let p2 = pair.p_op.matmul(&pair.p_op)?;
        let block = p2
            .scale(Complex64::new(0.5 / m, 0.0))
            .add(&q2.scale(Complex64::new(0.5 * m * mode.omega * mode.omega, 0.0)))?;
        total = total.add(&OperatorMatrix::embed(&block, &space, slot)?)?;
    }
    Ok(total)
}

/// The space-scheme observable G as an operator,
/// sum 0.5 (p''^2 + w^2 q''^2) over modes.
pub fn g_operator(modes: &[ModeSpec], scheme: &Scheme) -> Result<OperatorMatrix> {
    require_space_domain(scheme)?;
    hamiltonian_operator(modes, scheme)
}

/// The number form sum lambda0 w (n + 1/2) that G reduces to away from the
/// truncation edge.
pub fn g_number_form(modes: &[ModeSpec], scheme: &Scheme) -> Result<OperatorMatrix> {
    let lambda0 = require_space_domain(scheme)?;
    let space = mode_space(modes, scheme.cutoff)?;
    let fock = scheme.space();
    let mut total = OperatorMatrix::identity(&space).scale(Complex64::new(0.0, 0.0));
    for (slot, mode) in modes.iter().enumerate() {
        let n = OperatorMatrix::number(&fock);
        let half = OperatorMatrix::identity(&n.space).scale(Complex64::new(0.5, 0.0));
        let block = n
            .add(&half)?
            .scale(Complex64::new(lambda0 * mode.omega, 0.0));
        total = total.add(&OperatorMatrix::embed(&block, &space, slot)?)?;
    }
    Ok(total)
}

/// Lower-block distance between G and its number form.
pub fn g_identity_residual(modes: &[ModeSpec], scheme: &Scheme) -> Result<f64> {
    let g = g_operator(modes, scheme)?;
    let n_form = g_number_form(modes, scheme)?;
    g.lower_block_max_deviation(&n_form)
}

/// G(z) evaluated along two routes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GSplit {
    /// Time quadrature of 0.5 (E^2 + H^2) over [0, T].
    pub by_quadrature: f64,
    /// Closed form 0.5 sum { w^2 q(z)^2 + w^4 q'(z)^2 }.
    pub by_closed_form: f64,
    pub time_window: f64,
    /// False when the window breaks the temporal orthogonality the closed
    /// form relies on.
    pub orthogonal_window: bool,
}

/// Classical G(z) for the space scheme with per-mode spatial profiles.
/// Natural units are assumed (the quantity is defined with unit
/// permittivity and permeability).
pub fn g_of_z_classical(
    modes: &[ModeSpec],
    profiles: &[SpatialProfile],
    z: f64,
    config: &CavityConfig,
) -> Result<GSplit> {
    if modes.len() != profiles.len() {
        return Err(CoreError::DimensionMismatch(format!(
            "{} modes but {} profiles",
            modes.len(),
            profiles.len()
        )));
    }
    if config.unit_system != UnitSystem::GaussianNatural {
        return Err(CoreError::InvalidScheme(
            "G(z) is defined in gaussian-natural units".into(),
        ));
    }
    check_grid(&[z], config)?;
    let t_window = config.time_window;

    let q_vals: Vec<f64> = profiles.iter().map(|p| p.value(z)).collect();
    let q_primes: Vec<f64> = profiles.iter().map(|p| p.antiderivative(z)).collect();

    let e_of = |tau: f64| -> f64 {
        modes
            .iter()
            .zip(&q_vals)
            .map(|(m, q)| m.amp_space * q * (m.omega * tau).sin())
            .sum()
    };
    let h_of = |tau: f64| -> f64 {
        modes
            .iter()
            .zip(&q_primes)
            .map(|(m, qp)| -m.amp_space * m.omega * qp * (m.omega * tau).cos())
            .sum()
    };

    let max_cycles = modes
        .iter()
        .map(|m| (m.omega * t_window).abs() / (2.0 * PI))
        .fold(0.0, f64::max);
    let panels = 64 + (16.0 * max_cycles).ceil() as usize;
    let by_quadrature = 0.5
        * quadrature::integrate(
            |tau| {
                let e = e_of(tau);
                let h = h_of(tau);
                e * e + h * h
            },
            0.0,
            t_window,
            panels,
        );

    let by_closed_form = modes
        .iter()
        .zip(q_vals.iter().zip(&q_primes))
        .map(|(m, (q, qp))| 0.5 * (m.omega.powi(2) * q * q + m.omega.powi(4) * qp * qp))
        .sum();

    let orthogonal_window = modes.iter().all(|m| {
        let cycles = m.omega * t_window / (2.0 * PI);
        (cycles - cycles.round()).abs() < 1e-9
    });

    Ok(GSplit {
        by_quadrature,
        by_closed_form,
        time_window: t_window,
        orthogonal_window,
    })
}

/// Classical space-scheme fields: E = sum A' q(z) sin(wt),
/// H = -sum A' w q'(z) cos(wt).
pub fn fields_space_scheme(
    modes: &[ModeSpec],
    profiles: &[SpatialProfile],
    z_grid: &[f64],
    t: f64,
    config: &CavityConfig,
) -> Result<FieldFrame> {
    if modes.len() != profiles.len() {
        return Err(CoreError::DimensionMismatch(format!(
            "{} modes but {} profiles",
            modes.len(),
            profiles.len()
        )));
    }
    check_grid(z_grid, config)?;
    let mut frame = FieldFrame::zeros(
        z_grid.to_vec(),
        t,
        FrameKind::SpaceScheme,
        config.unit_system,
    );
    for (mode, profile) in modes.iter().zip(profiles) {
        let sin_t = (mode.omega * t).sin();
        let cos_t = (mode.omega * t).cos();
        for (i, &z) in z_grid.iter().enumerate() {
            frame.ex[i] += Complex64::new(mode.amp_space * profile.value(z) * sin_t, 0.0);
            frame.hy[i] += Complex64::new(
                -mode.amp_space * mode.omega * profile.antiderivative(z) * cos_t,
                0.0,
            );
        }
    }
    Ok(frame)
}

/// One row of a commutation-relation report.
#[derive(Debug, Clone, PartialEq)]
pub struct CcrEntry {
    pub alpha: u32,
    pub beta: u32,
    /// Lower-block distance of [p_a, q_b] from -i*h*delta_ab*I
    /// (the sign produced by the ladder construction).
    pub pq_block_deviation: f64,
    /// Lower-block distance from +i*h*delta_ab*I, kept so reports expose
    /// how far the opposite sign convention is.
    pub pq_opposite_sign_distance: f64,
    pub qq_max: f64,
    pub pp_max: f64,
}

/// Commutation-relation survey over all mode pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct CcrReport {
    pub scheme_label: String,
    pub entries: Vec<CcrEntry>,
    /// |corner - i*h*(d-1)| per mode: the analytic truncation artifact of
    /// [p, q] at the top basis state.
    pub corner_deviation: Vec<(u32, f64)>,
    pub convention: &'static str,
}

/// Convention note attached to every CCR report.
pub const CCR_CONVENTION_NOTE: &str =
    "[p,q] = -i*(quantum constant) on the lower block, as produced by the \
     ladder construction; the opposite-sign distance is reported alongside";

/// Survey [p_a, q_b], [q_a, q_b], [p_a, p_b] over every mode pair.
/// Same-mode pairs are evaluated on a single factor; distinct pairs on a
/// two-factor product, where cross commutators vanish identically.
pub fn ccr_report(modes: &[ModeSpec], scheme: &Scheme) -> Result<CcrReport> {
    if modes.is_empty() {
        return Err(CoreError::DimensionMismatch("no modes given".into()));
    }
    let h = scheme.quantum_constant();
    let d = scheme.cutoff;
    let mut entries = Vec::new();
    let mut corner = Vec::new();

    for (i, mode_a) in modes.iter().enumerate() {
        for mode_b in modes.iter().skip(i) {
            if mode_a.alpha == mode_b.alpha {
                let pair = quadratures_from_ladder(mode_a, scheme)?;
                let comm = pair.p_op.commutator(&pair.q_op)?;
                let id = OperatorMatrix::identity(&comm.space);
                let target = id.scale(Complex64::new(0.0, -h));
                let opposite = id.scale(Complex64::new(0.0, h));
                entries.push(CcrEntry {
                    alpha: mode_a.alpha,
                    beta: mode_b.alpha,
                    pq_block_deviation: comm.lower_block_max_deviation(&target)?,
                    pq_opposite_sign_distance: comm.lower_block_max_deviation(&opposite)?,
                    qq_max: pair.q_op.commutator(&pair.q_op)?.max_abs(),
                    pp_max: pair.p_op.commutator(&pair.p_op)?.max_abs(),
                });
                let corner_entry = comm.entries[(d - 1, d - 1)];
                let analytic = Complex64::new(0.0, h * (d as f64 - 1.0));
                corner.push((mode_a.alpha, (corner_entry - analytic).norm()));
            } else {
                let space = HilbertSpace::product(&[d, d])?;
                let pair_a = quadratures_from_ladder(mode_a, scheme)?;
                let pair_b = quadratures_from_ladder(mode_b, scheme)?;
                let p_a = OperatorMatrix::embed(&pair_a.p_op, &space, 0)?;
                let q_b = OperatorMatrix::embed(&pair_b.q_op, &space, 1)?;
                let q_a = OperatorMatrix::embed(&pair_a.q_op, &space, 0)?;
                let p_b = OperatorMatrix::embed(&pair_b.p_op, &space, 1)?;
                entries.push(CcrEntry {
                    alpha: mode_a.alpha,
                    beta: mode_b.alpha,
                    pq_block_deviation: p_a.commutator(&q_b)?.max_abs(),
                    pq_opposite_sign_distance: p_a.commutator(&q_b)?.max_abs(),
                    qq_max: q_a.commutator(&q_b)?.max_abs(),
                    pp_max: p_a.commutator(&p_b)?.max_abs(),
                });
            }
        }
    }
    Ok(CcrReport {
        scheme_label: scheme.label(),
        entries,
        corner_deviation: corner,
        convention: CCR_CONVENTION_NOTE,
    })
}
