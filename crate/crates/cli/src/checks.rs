//! The named verification checks wired from the scenario config to the
//! core library.
//!
//! Each check returns one or more [`VerificationReport`]s. The
//! `local-commutator` forms report is measurement-only: its numbers are
//! recorded for inspection and never gate the exit status.

use std::f64::consts::PI;

use anyhow::{bail, Result};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use dualcav_core::{
    ccr_report, coherent_state, coherent_truncation_adequate, duality_rotate, energy_density_w,
    expectation, f_alpha_integrand, field_ops_sol1, fields_sol1, fields_sol2, g_identity_residual,
    g_operator, general_fields, hamiltonian_operator, hamiltonian_sol1, hamiltonian_sol2,
    local_commutator_check, local_ladder, maxwell_residual, quadrature, CavityConfig, FieldFrame,
    FockSpace, GeneralFieldSpec, GeneralMode, ModeSpec, ResidualEntry, Scheme, SpatialProfile,
    StateVector, TimeAmplitude, VerificationReport,
};

use crate::config::ScenarioConfig;

/// Run one named check. Unknown names are an error naming the registry.
pub fn run_check(name: &str, config: &ScenarioConfig) -> Result<Vec<VerificationReport>> {
    match name {
        "maxwell" => check_maxwell(config),
        "hamiltonian" => check_hamiltonian(config),
        "duality" => check_duality(config),
        "ccr" => check_ccr(config),
        "g-operator" => check_g_operator(config),
        "local-commutator" => check_local_commutator(config),
        "density" => check_density(config),
        "falpha" => check_falpha(config),
        "vacuum" => check_vacuum(config),
        "classical-limit" => check_classical_limit(config),
        other => bail!(
            "unknown check '{other}' (known: {})",
            crate::config::CHECK_NAMES.join(", ")
        ),
    }
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
        .collect()
}

/// A natural-unit single-cosine scenario used by the residual studies.
fn natural_cavity(config: &ScenarioConfig) -> CavityConfig {
    CavityConfig::gaussian_natural(config.cavity.length, config.cavity.volume)
}

fn cosine_amps(modes: &[ModeSpec], r: f64) -> Vec<TimeAmplitude> {
    modes
        .iter()
        .map(|m| TimeAmplitude::real_cosine(r, m.omega))
        .collect()
}

/// Frames of one solution family on an n x n grid across a time span that
/// is deliberately incommensurate with the grid spacing, so the
/// second-order truncation terms cannot cancel.
fn study_frames(
    kind: &str,
    n: usize,
    cavity: &CavityConfig,
    modes: &[ModeSpec],
    amps: &[TimeAmplitude],
) -> Result<Vec<FieldFrame>> {
    let grid = linspace(0.0, cavity.length, n);
    let period = 2.0 * cavity.length / cavity.light_speed;
    let t0 = 0.05 * period;
    let span = 0.3 * period;
    let spec = GeneralFieldSpec::new(
        modes
            .iter()
            .zip(amps)
            .map(|(m, a)| GeneralMode {
                amp_general: m.amp_time,
                time: a.clone(),
                profile: SpatialProfile::sine_zero_mean(m.wavenumber),
            })
            .collect(),
    );
    (0..n)
        .map(|j| {
            let t = t0 + span * j as f64 / (n - 1) as f64;
            let frame = match kind {
                "sol1" => fields_sol1(modes, amps, &grid, t, cavity)?,
                "sol2" => fields_sol2(modes, amps, &grid, t, cavity)?,
                "combined" => {
                    let f1 = fields_sol1(modes, amps, &grid, t, cavity)?;
                    let f2 = fields_sol2(modes, amps, &grid, t, cavity)?;
                    dualcav_core::combine_complex(&f1, &f2)?
                }
                "general" => general_fields(&spec, &grid, t, cavity)?,
                _ => unreachable!(),
            };
            Ok(frame)
        })
        .collect()
}

/// Dyadic-refinement convergence orders of the curl residuals for all four
/// field constructions.
fn check_maxwell(config: &ScenarioConfig) -> Result<Vec<VerificationReport>> {
    let cavity = natural_cavity(config);
    let modes = config.mode_bank_core(&cavity)?;
    let amps = cosine_amps(&modes, 1.0);
    let min_order = config.checks.tolerances.maxwell_min_order;
    let sizes = [65usize, 129, 257];

    let mut residuals = Vec::new();
    let mut notes = vec![format!(
        "grids {}x{} -> {}x{} -> {}x{}; orders from consecutive residual ratios",
        sizes[0], sizes[0], sizes[1], sizes[1], sizes[2], sizes[2]
    )];
    for kind in ["sol1", "sol2", "combined", "general"] {
        let mut values = Vec::new();
        for &n in &sizes {
            let frames = study_frames(kind, n, &cavity, &modes, &amps)?;
            values.push(maxwell_residual(&frames, &cavity)?);
        }
        let mut worst: f64 = f64::INFINITY;
        for pair in values.windows(2) {
            worst = worst.min((pair[0].faraday / pair[1].faraday).log2());
            worst = worst.min((pair[0].ampere / pair[1].ampere).log2());
        }
        residuals.push(ResidualEntry::new(
            format!("order_shortfall_{kind}"),
            min_order - worst,
        ));
        notes.push(format!(
            "{kind}: min order {worst:.4}; residuals faraday {:.3e} -> {:.3e} -> {:.3e}",
            values[0].faraday, values[1].faraday, values[2].faraday
        ));
    }
    Ok(vec![VerificationReport::asserted(
        "maxwell",
        format!(
            "modes={} L={} c=1 cosine amplitudes; shortfall = {min_order} - measured order",
            modes.len(),
            cavity.length
        ),
        residuals,
        crate::config::tolerances::MAXWELL_ORDER_MARGIN,
        notes,
    )])
}

/// Energy conservation over one period and agreement of the two
/// Hamiltonian routes, with seeded random amplitudes.
fn check_hamiltonian(config: &ScenarioConfig) -> Result<Vec<VerificationReport>> {
    let cavity = natural_cavity(config);
    let modes = dualcav_core::mode_bank(3, &cavity)?;
    let tol = config.checks.tolerances.hamiltonian;
    let mut rng = ChaCha8Rng::seed_from_u64(config.checks.seed);
    let period = 2.0 * cavity.length / cavity.light_speed;

    // conservation: random cosine magnitudes, 100 samples over one period
    let amps: Vec<TimeAmplitude> = modes
        .iter()
        .map(|m| {
            let r = rng.random_range(0.25..1.5)
                * if rng.random_range(0.0..1.0) < 0.5 {
                    -1.0
                } else {
                    1.0
                };
            TimeAmplitude::real_cosine(r, m.omega)
        })
        .collect();
    let spread = |values: &[f64]| -> f64 {
        let max = values.iter().cloned().fold(f64::MIN, f64::max);
        let min = values.iter().cloned().fold(f64::MAX, f64::min);
        (max - min) / max.abs().max(1e-300)
    };
    let times = linspace(0.0, period, 100);
    let sol1: Vec<f64> = times
        .iter()
        .map(|&t| Ok(hamiltonian_sol1(&modes, &amps, t, &cavity)?.by_oscillator_sum))
        .collect::<Result<_>>()?;
    let sol2: Vec<f64> = times
        .iter()
        .map(|&t| Ok(hamiltonian_sol2(&modes, &amps, t, &cavity)?.by_oscillator_sum))
        .collect::<Result<_>>()?;

    let mut residuals = vec![
        ResidualEntry::new("sol1_relative_spread", spread(&sol1)),
        ResidualEntry::new("sol2_relative_spread", spread(&sol2)),
    ];

    // route agreement: 5 random real-field amplitude sets
    let mut worst = 0.0f64;
    for _ in 0..5 {
        let amps: Vec<TimeAmplitude> = modes
            .iter()
            .map(|m| {
                TimeAmplitude::real_field(
                    Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
                    m.omega,
                )
            })
            .collect();
        let t = rng.random_range(0.0..period);
        let h = hamiltonian_sol1(&modes, &amps, t, &cavity)?;
        worst = worst
            .max((h.by_field_integral - h.by_oscillator_sum).abs() / h.by_oscillator_sum.abs());
    }
    residuals.push(ResidualEntry::new("route_agreement_relative", worst));

    Ok(vec![VerificationReport::asserted(
        "hamiltonian",
        format!(
            "3 modes, seed={}, 100 samples over one period, 5 random route comparisons",
            config.checks.seed
        ),
        residuals,
        tol,
        vec!["oscillator sums and field integrals from closed-form amplitudes".into()],
    )])
}

/// Residual and energy invariance under dual rotation, plus the quarter
/// turn sign pattern.
fn check_duality(config: &ScenarioConfig) -> Result<Vec<VerificationReport>> {
    let cavity = natural_cavity(config);
    let modes = config.mode_bank_core(&cavity)?;
    let amps = cosine_amps(&modes, 1.0);
    let tol = config.checks.tolerances.duality;
    let n = 65usize;
    let grid = linspace(0.0, cavity.length, n);
    let dz = cavity.length / (n - 1) as f64;
    // time step equal to the grid step: central differences are then exact
    // for these standing modes, isolating the rotation error
    let frames: Vec<FieldFrame> = (0..n)
        .map(|j| fields_sol1(&modes, &amps, &grid, 0.1 + dz * j as f64, &cavity))
        .collect::<std::result::Result<_, _>>()?;
    let base = maxwell_residual(&frames, &cavity)?;
    let base_energy: Vec<Vec<f64>> = frames.iter().map(|f| f.energy_density(&cavity)).collect();

    let mut residuals = Vec::new();
    for &theta in &[0.0, PI / 6.0, PI / 4.0, PI / 2.0, 1.0] {
        let rotated: Vec<FieldFrame> = frames.iter().map(|f| duality_rotate(f, theta)).collect();
        let res = maxwell_residual(&rotated, &cavity)?;
        let mut energy_dev = 0.0f64;
        for (frame, w0) in rotated.iter().zip(&base_energy) {
            for (a, b) in frame.energy_density(&cavity).iter().zip(w0) {
                energy_dev = energy_dev.max((a - b).abs());
            }
        }
        residuals.push(ResidualEntry::new(
            format!("residual_shift_theta_{theta:.4}"),
            (res.faraday - base.faraday)
                .abs()
                .max((res.ampere - base.ampere).abs()),
        ));
        residuals.push(ResidualEntry::new(
            format!("energy_shift_theta_{theta:.4}"),
            energy_dev,
        ));
    }

    // quarter turn: E lands on +H, H lands on -E
    let mut swap_dev = 0.0f64;
    for frame in &frames {
        let rotated = duality_rotate(frame, PI / 2.0);
        for i in 0..frame.len() {
            swap_dev = swap_dev.max((rotated.ey[i] - frame.hy[i]).norm());
            swap_dev = swap_dev.max((rotated.hx[i] + frame.ex[i]).norm());
            swap_dev = swap_dev.max(rotated.ex[i].norm());
            swap_dev = swap_dev.max(rotated.hy[i].norm());
        }
    }
    residuals.push(ResidualEntry::new("quarter_turn_sign_pattern", swap_dev));

    Ok(vec![VerificationReport::asserted(
        "duality",
        format!(
            "modes={}, 65x65 grid with dt = dz (exact differences), theta in {{0, pi/6, pi/4, pi/2, 1}}",
            modes.len()
        ),
        residuals,
        tol,
        vec![
            "rotation acts on both transverse polarizations; energy density compared pointwise"
                .into(),
        ],
    )])
}

fn check_ccr(config: &ScenarioConfig) -> Result<Vec<VerificationReport>> {
    let cavity = natural_cavity(config);
    let modes = dualcav_core::mode_bank(config.modes.count.max(2), &cavity)?;
    let tol = config.checks.tolerances.ccr;
    let mut reports = Vec::new();
    for scheme in [
        Scheme::time_domain(config.quantization.hbar, config.quantization.cutoff)?,
        Scheme::space_domain(config.quantization.lambda0, config.quantization.cutoff)?,
    ] {
        let survey = ccr_report(&modes, &scheme)?;
        let mut residuals = Vec::new();
        let mut notes = vec![survey.convention.to_string()];
        for entry in &survey.entries {
            if entry.alpha == entry.beta {
                residuals.push(ResidualEntry::new(
                    format!("same_mode_{}_block", entry.alpha),
                    entry.pq_block_deviation,
                ));
                notes.push(format!(
                    "mode {}: opposite-sign distance {:.3e} (= 2 x quantum constant)",
                    entry.alpha, entry.pq_opposite_sign_distance
                ));
            } else {
                residuals.push(ResidualEntry::new(
                    format!("cross_mode_{}_{}_pq", entry.alpha, entry.beta),
                    entry.pq_block_deviation,
                ));
            }
            residuals.push(ResidualEntry::new(
                format!("qq_{}_{}", entry.alpha, entry.beta),
                entry.qq_max,
            ));
            residuals.push(ResidualEntry::new(
                format!("pp_{}_{}", entry.alpha, entry.beta),
                entry.pp_max,
            ));
        }
        for (alpha, dev) in &survey.corner_deviation {
            residuals.push(ResidualEntry::new(format!("corner_{alpha}"), *dev));
            notes.push(format!(
                "mode {alpha}: corner equals the analytic truncation value (d-1) x quantum constant"
            ));
        }
        let name = match scheme.kind {
            dualcav_core::SchemeKind::TimeDomain { .. } => "ccr/time-domain",
            dualcav_core::SchemeKind::SpaceDomain { .. } => "ccr/space-domain",
        };
        reports.push(VerificationReport::asserted(
            name,
            format!(
                "{} cutoff={} modes={}",
                survey.scheme_label,
                scheme.cutoff,
                modes.len()
            ),
            residuals,
            tol,
            notes,
        ));
    }
    Ok(reports)
}

fn check_g_operator(config: &ScenarioConfig) -> Result<Vec<VerificationReport>> {
    let cavity = natural_cavity(config);
    let modes = dualcav_core::mode_bank(3, &cavity)?;
    let tol = config.checks.tolerances.g_operator;
    let scheme = Scheme::space_domain(config.quantization.lambda0, config.quantization.cutoff)?;
    let mut residuals = Vec::new();
    for mode in &modes {
        residuals.push(ResidualEntry::new(
            format!("number_form_block_{}", mode.alpha),
            g_identity_residual(std::slice::from_ref(mode), &scheme)?,
        ));
    }
    Ok(vec![VerificationReport::asserted(
        "g-operator",
        format!(
            "space-domain lambda0={} cutoff={} modes 1..3 individually",
            config.quantization.lambda0, config.quantization.cutoff
        ),
        residuals,
        tol,
        vec![
            "compares 0.5(p''^2 + w^2 q''^2) against lambda0 w (n + 1/2) off the truncation edge"
                .into(),
        ],
    )])
}

fn check_local_commutator(config: &ScenarioConfig) -> Result<Vec<VerificationReport>> {
    let cavity = natural_cavity(config);
    let mode = dualcav_core::make_mode(1, &cavity)?;
    let pair = local_ladder(
        &mode,
        config.quantization.lambda0,
        config.quantization.hbar,
        cavity.light_speed,
        config.quantization.cutoff_space,
        config.quantization.cutoff_time,
    )?;
    let report = local_commutator_check(&pair)?;
    let inputs = format!(
        "mode 1, d_space={} d_time={} lambda0'={} hbar={}",
        config.quantization.cutoff_space,
        config.quantization.cutoff_time,
        pair.lambda0_prime,
        pair.hbar
    );
    let hermiticity = VerificationReport::asserted(
        "local-commutator/hermiticity",
        inputs.clone(),
        vec![ResidualEntry::new(
            "hermiticity_residual",
            report.hermiticity_residual,
        )],
        config.checks.tolerances.local_hermiticity,
        vec!["[a, a^+] of any operator is Hermitian; this part is assertable".into()],
    );
    let forms = VerificationReport::measured(
        "local-commutator/forms",
        inputs,
        vec![
            ResidualEntry::new("identity_form_distance", report.identity_form_distance),
            ResidualEntry::new(
                "hamiltonian_form_distance",
                report.hamiltonian_form_distance,
            ),
            ResidualEntry::new("trace_magnitude", report.trace.norm()),
            ResidualEntry::new("commutator_scale", report.commutator_scale),
        ],
        vec![
            "measurement only: the commutator is Hermitian while both candidate \
             closed forms are i times a Hermitian operator, so no agreement is asserted"
                .into(),
            "density form uses the unit-vacuum-normalized product of the factor \
             quadratic forms (one reading among several)"
                .into(),
        ],
    );
    Ok(vec![hermiticity, forms])
}

fn check_density(config: &ScenarioConfig) -> Result<Vec<VerificationReport>> {
    let cavity = natural_cavity(config);
    let modes = dualcav_core::mode_bank(2, &cavity)?;
    let tol = config.checks.tolerances.density;
    let amps = cosine_amps(&modes, 0.9);
    let spec = GeneralFieldSpec::new(
        modes
            .iter()
            .zip(&amps)
            .map(|(m, a)| GeneralMode {
                amp_general: m.amp_time,
                time: a.clone(),
                profile: SpatialProfile::sine_zero_mean(m.wavenumber),
            })
            .collect(),
    );
    let t = 0.29 * 2.0 * cavity.length / cavity.light_speed;
    let grid = linspace(0.0, cavity.length, 65);
    let report = energy_density_w(&spec, &grid, t, &cavity)?;
    let w_min = report.w.iter().cloned().fold(f64::MAX, f64::min);

    // single-mode slice has no interference terms at all
    let single = GeneralFieldSpec::new(vec![spec.modes[0].clone()]);
    let single_report = energy_density_w(&single, &grid, t, &cavity)?;
    let single_cross = single_report
        .cross
        .iter()
        .map(|v| v.abs())
        .fold(0.0, f64::max);

    // cross terms integrate away over the cavity
    let cross_integral = quadrature::integrate(
        |z| energy_density_w(&spec, &[z], t, &cavity).unwrap().cross[0],
        0.0,
        cavity.length,
        128,
    );

    // integrated density equals the Hamiltonian total
    let w_integral = quadrature::integrate(
        |z| energy_density_w(&spec, &[z], t, &cavity).unwrap().w[0],
        0.0,
        cavity.length,
        128,
    ) * cavity.volume
        / cavity.length;
    let h = hamiltonian_sol1(&modes, &amps, t, &cavity)?;
    let h_rel = (w_integral - h.by_field_integral).abs() / h.by_field_integral;

    Ok(vec![VerificationReport::asserted(
        "density",
        "2 modes, cosine amplitudes, zero-mean sine antiderivatives, t = 0.58 L/c",
        vec![
            ResidualEntry::new("negative_density_excess", (-w_min).max(0.0)),
            ResidualEntry::new("single_mode_cross_max", single_cross),
            ResidualEntry::new("cross_integral_abs", cross_integral.abs()),
            ResidualEntry::new("integral_vs_hamiltonian_rel", h_rel),
        ],
        tol,
        vec![format!(
            "pointwise cross/diagonal ratio {:.3e} (nonzero by design; only the integral vanishes)",
            report.cross_ratio
        )],
    )])
}

fn check_falpha(config: &ScenarioConfig) -> Result<Vec<VerificationReport>> {
    let cavity = natural_cavity(config);
    let modes = dualcav_core::mode_bank(3, &cavity)?;
    let tol = config.checks.tolerances.falpha;
    let mut rng = ChaCha8Rng::seed_from_u64(config.checks.seed);
    let amps: Vec<TimeAmplitude> = modes
        .iter()
        .map(|m| {
            TimeAmplitude::real_field(
                Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
                m.omega,
            )
        })
        .collect();
    let window = 2.0 * cavity.length / cavity.light_speed;
    let mut worst = 0.0f64;
    for (mode, amp) in modes.iter().zip(&amps) {
        for z in linspace(0.0, cavity.length, 17) {
            for tau in linspace(0.0, window, 33) {
                worst = worst.max(f_alpha_integrand(mode, amp, z, tau, &cavity).norm());
            }
        }
    }
    Ok(vec![VerificationReport::asserted(
        "falpha",
        format!(
            "3 modes, random on-shell amplitudes (seed={}), tau in [0, 2L/c]",
            config.checks.seed
        ),
        vec![ResidualEntry::new("max_integrand", worst)],
        tol,
        vec!["the free-function integrand vanishes identically on shell".into()],
    )])
}

fn check_vacuum(config: &ScenarioConfig) -> Result<Vec<VerificationReport>> {
    let cavity = natural_cavity(config);
    let modes = dualcav_core::mode_bank(3, &cavity)?;
    let tol = config.checks.tolerances.vacuum;
    // vacuum values are cutoff-independent; a small cutoff keeps the
    // three-mode tensor space tractable
    let d = 6;
    let time_scheme = Scheme::time_domain(config.quantization.hbar, d)?;
    let space_scheme = Scheme::space_domain(config.quantization.lambda0, d)?;

    let h_op = hamiltonian_operator(&modes, &time_scheme)?;
    let h_vac = expectation(&h_op, &StateVector::vacuum(&h_op.space))?.re;
    let h_expected: f64 = modes
        .iter()
        .map(|m| 0.5 * config.quantization.hbar * m.omega)
        .sum();

    let g_op = g_operator(&modes, &space_scheme)?;
    let g_vac = expectation(&g_op, &StateVector::vacuum(&g_op.space))?.re;
    let g_expected: f64 = modes
        .iter()
        .map(|m| 0.5 * config.quantization.lambda0 * m.omega)
        .sum();

    Ok(vec![VerificationReport::asserted(
        "vacuum",
        format!(
            "3 modes, hbar={} lambda0={}",
            config.quantization.hbar, config.quantization.lambda0
        ),
        vec![
            ResidualEntry::new(
                "hamiltonian_vacuum_rel",
                (h_vac - h_expected).abs() / h_expected,
            ),
            ResidualEntry::new("g_vacuum_rel", (g_vac - g_expected).abs() / g_expected),
        ],
        tol,
        vec!["vacuum energies equal half-quantum sums over modes".into()],
    )])
}

fn check_classical_limit(config: &ScenarioConfig) -> Result<Vec<VerificationReport>> {
    let cavity = natural_cavity(config);
    let mode = dualcav_core::make_mode(1, &cavity)?;
    let tol = config.checks.tolerances.classical_limit;
    let d = 64;
    let scheme = Scheme::time_domain(config.quantization.hbar, d)?;
    let alpha = Complex64::new(2.0, 0.0);
    let state = coherent_state(alpha, &FockSpace::new(d)?);
    let r = (2.0 * config.quantization.hbar / (mode.mass * mode.omega)).sqrt() * alpha.re;
    let amp = TimeAmplitude::real_cosine(r, mode.omega);

    let grid = linspace(0.0, cavity.length, 33);
    let period = 2.0 * PI / mode.omega;
    let mut sup = 0.0f64;
    for t in linspace(0.0, period, 33) {
        let ops = field_ops_sol1(std::slice::from_ref(&mode), &scheme, &cavity, &grid, t)?;
        let classical = fields_sol1(
            std::slice::from_ref(&mode),
            std::slice::from_ref(&amp),
            &grid,
            t,
            &cavity,
        )?;
        for i in 0..grid.len() {
            let qm = expectation(&ops.e_ops[i], &state)?.re;
            sup = sup.max((qm - classical.ex[i].re).abs());
        }
    }
    Ok(vec![VerificationReport::asserted(
        "classical-limit",
        format!("coherent alpha=2, cutoff d={d}, 33x33 grid over one period"),
        vec![ResidualEntry::new("sup_norm_difference", sup)],
        tol,
        vec![format!(
            "cutoff adequacy: {}",
            coherent_truncation_adequate(alpha, d)
        )],
    )])
}
