//! Acceptance suite: one test per criterion, each printing a single
//! pass/fail line with the measured numbers before asserting.
//!
//! Run with `cargo test -p dualcav --test acceptance -- --nocapture` to see
//! the lines.

use std::f64::consts::PI;
use std::process::Command;
use std::time::Instant;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use dualcav_core::{
    ccr_report, coherent_state, combine_complex, duality_rotate, expectation, f_alpha_integrand,
    field_ops_sol1, fields_sol1, fields_sol2, g_identity_residual, general_fields,
    hamiltonian_operator, hamiltonian_sol1, hamiltonian_sol2, local_commutator_check, local_ladder,
    make_mode, maxwell_residual, mode_bank, CavityConfig, FieldFrame, FockSpace, GeneralFieldSpec,
    GeneralMode, HilbertSpace, OperatorMatrix, Scheme, SpatialProfile, StateVector, TimeAmplitude,
};

const SEED: u64 = 42;

fn report(number: u32, name: &str, pass: bool, detail: &str) {
    println!(
        "criterion {number:02} {name}: {detail} -> {}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {number} ({name}) failed: {detail}");
}

fn unit_cavity() -> CavityConfig {
    CavityConfig::gaussian_natural(1.0, 1.0)
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
        .collect()
}

/// Composite 4-node Gauss-Legendre rule, independent of the library's
/// integration path.
fn gauss4(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    const X: [f64; 4] = [
        -0.861_136_311_594_052_6,
        -0.339_981_043_584_856_3,
        0.339_981_043_584_856_3,
        0.861_136_311_594_052_6,
    ];
    const W: [f64; 4] = [
        0.347_854_845_137_453_85,
        0.652_145_154_862_546_2,
        0.652_145_154_862_546_2,
        0.347_854_845_137_453_85,
    ];
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let mid = a + (p as f64 + 0.5) * h;
        for (x, w) in X.iter().zip(W.iter()) {
            total += w * f(mid + 0.5 * h * x);
        }
    }
    total * 0.5 * h
}

/// Criterion 1: second-order residual convergence for all four field
/// constructions over 65 -> 129 -> 257 dyadic refinements, within 10 s.
#[test]
fn criterion_01_maxwell_residual_convergence() {
    let start = Instant::now();
    let cavity = unit_cavity();
    let mode = make_mode(1, &cavity).unwrap();
    let amp = TimeAmplitude::real_cosine(1.0, mode.omega);
    let spec = GeneralFieldSpec::new(vec![GeneralMode {
        amp_general: mode.amp_time,
        time: amp.clone(),
        profile: SpatialProfile::sine_zero_mean(mode.wavenumber),
    }]);

    let frames = |kind: &str, n: usize| -> Vec<FieldFrame> {
        let grid = linspace(0.0, 1.0, n);
        // time span incommensurate with the grid spacing so truncation
        // terms cannot cancel
        (0..n)
            .map(|j| {
                let t = 0.1 + 0.6 * j as f64 / (n - 1) as f64;
                match kind {
                    "sol1" => fields_sol1(
                        std::slice::from_ref(&mode),
                        std::slice::from_ref(&amp),
                        &grid,
                        t,
                        &cavity,
                    )
                    .unwrap(),
                    "sol2" => fields_sol2(
                        std::slice::from_ref(&mode),
                        std::slice::from_ref(&amp),
                        &grid,
                        t,
                        &cavity,
                    )
                    .unwrap(),
                    "combined" => {
                        let f1 = fields_sol1(
                            std::slice::from_ref(&mode),
                            std::slice::from_ref(&amp),
                            &grid,
                            t,
                            &cavity,
                        )
                        .unwrap();
                        let f2 = fields_sol2(
                            std::slice::from_ref(&mode),
                            std::slice::from_ref(&amp),
                            &grid,
                            t,
                            &cavity,
                        )
                        .unwrap();
                        combine_complex(&f1, &f2).unwrap()
                    }
                    _ => general_fields(&spec, &grid, t, &cavity).unwrap(),
                }
            })
            .collect()
    };

    let mut detail = String::new();
    let mut min_order = f64::INFINITY;
    for kind in ["sol1", "sol2", "combined", "general"] {
        let residuals: Vec<_> = [65usize, 129, 257]
            .iter()
            .map(|&n| maxwell_residual(&frames(kind, n), &cavity).unwrap())
            .collect();
        for pair in residuals.windows(2) {
            min_order = min_order.min((pair[0].faraday / pair[1].faraday).log2());
            min_order = min_order.min((pair[0].ampere / pair[1].ampere).log2());
        }
        detail.push_str(&format!(
            "{kind} {:.2e}->{:.2e}->{:.2e}; ",
            residuals[0].faraday, residuals[1].faraday, residuals[2].faraday
        ));
    }
    let elapsed = start.elapsed().as_secs_f64();
    report(
        1,
        "maxwell-residual-convergence",
        min_order >= 1.9 && elapsed < 10.0,
        &format!("min order {min_order:.3} (>= 1.9), {elapsed:.2} s (< 10 s); {detail}"),
    );
}

/// Criterion 2: relative spread of both Hamiltonians < 1e-10 over 100
/// samples spanning one period, 3 modes, seeded random amplitudes.
#[test]
fn criterion_02_energy_conservation() {
    let cavity = unit_cavity();
    let modes = mode_bank(3, &cavity).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let amps: Vec<TimeAmplitude> = modes
        .iter()
        .map(|m| {
            let sign = if rng.random_range(0.0..1.0) < 0.5 {
                -1.0
            } else {
                1.0
            };
            TimeAmplitude::real_cosine(sign * rng.random_range(0.25..1.5), m.omega)
        })
        .collect();
    let period = 2.0 * cavity.length / cavity.light_speed;
    let spread = |values: &[f64]| {
        let max = values.iter().cloned().fold(f64::MIN, f64::max);
        let min = values.iter().cloned().fold(f64::MAX, f64::min);
        (max - min) / max.abs()
    };
    let times = linspace(0.0, period, 100);
    let h1: Vec<f64> = times
        .iter()
        .map(|&t| {
            hamiltonian_sol1(&modes, &amps, t, &cavity)
                .unwrap()
                .by_oscillator_sum
        })
        .collect();
    let h2: Vec<f64> = times
        .iter()
        .map(|&t| {
            hamiltonian_sol2(&modes, &amps, t, &cavity)
                .unwrap()
                .by_oscillator_sum
        })
        .collect();
    let (s1, s2) = (spread(&h1), spread(&h2));
    report(
        2,
        "energy-conservation",
        s1 < 1e-10 && s2 < 1e-10,
        &format!("relative spreads sol1 {s1:.2e}, sol2 {s2:.2e} (< 1e-10)"),
    );
}

/// Criterion 3: field-integral and oscillator-sum Hamiltonians agree to
/// < 1e-10 relative for 5 random amplitude sets, cross-checked against an
/// independent composite Gauss quadrature of the sampled energy density.
#[test]
fn criterion_03_hamiltonian_equivalence() {
    let cavity = unit_cavity();
    let modes = mode_bank(3, &cavity).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 1);
    let mut worst_pair = 0.0f64;
    let mut worst_oracle = 0.0f64;
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
        let t = rng.random_range(0.0..2.0);
        let h = hamiltonian_sol1(&modes, &amps, t, &cavity).unwrap();
        worst_pair = worst_pair
            .max((h.by_field_integral - h.by_oscillator_sum).abs() / h.by_oscillator_sum.abs());
        let density = |z: f64| {
            let f = fields_sol1(&modes, &amps, &[z], t, &cavity).unwrap();
            0.5 * (cavity.eps0 * f.ex[0].re.powi(2) + cavity.mu0 * f.hy[0].re.powi(2))
        };
        let oracle = gauss4(density, 0.0, cavity.length, 200) * cavity.volume / cavity.length;
        worst_oracle = worst_oracle.max((h.by_field_integral - oracle).abs() / oracle.abs());
    }
    report(
        3,
        "hamiltonian-equivalence",
        worst_pair < 1e-10 && worst_oracle < 1e-10,
        &format!(
            "route agreement {worst_pair:.2e}, quadrature oracle {worst_oracle:.2e} (< 1e-10)"
        ),
    );
}

/// Criterion 4: residuals and total energy invariant under dual rotation
/// to < 1e-12 absolute, and the quarter turn realizes the E -> H,
/// H -> -E sign pattern.
#[test]
fn criterion_04_duality_invariance() {
    let cavity = unit_cavity();
    let mode = make_mode(1, &cavity).unwrap();
    let amp = TimeAmplitude::real_cosine(1.0, mode.omega);
    let n = 65usize;
    let grid = linspace(0.0, 1.0, n);
    let dz = 1.0 / (n - 1) as f64;
    // dt = dz makes the central differences exact for the standing mode,
    // so any rotation-induced violation stands out in full
    let frames: Vec<FieldFrame> = (0..n)
        .map(|j| {
            fields_sol1(
                std::slice::from_ref(&mode),
                std::slice::from_ref(&amp),
                &grid,
                0.1 + dz * j as f64,
                &cavity,
            )
            .unwrap()
        })
        .collect();
    let base = maxwell_residual(&frames, &cavity).unwrap();
    let base_energy: Vec<Vec<f64>> = frames.iter().map(|f| f.energy_density(&cavity)).collect();

    let mut worst_res = 0.0f64;
    let mut worst_energy = 0.0f64;
    for &theta in &[0.0, PI / 6.0, PI / 4.0, PI / 2.0, 1.0] {
        let rotated: Vec<FieldFrame> = frames.iter().map(|f| duality_rotate(f, theta)).collect();
        let res = maxwell_residual(&rotated, &cavity).unwrap();
        worst_res = worst_res
            .max((res.faraday - base.faraday).abs())
            .max((res.ampere - base.ampere).abs());
        for (frame, w0) in rotated.iter().zip(&base_energy) {
            for (a, b) in frame.energy_density(&cavity).iter().zip(w0) {
                worst_energy = worst_energy.max((a - b).abs());
            }
        }
    }

    let mut swap_dev = 0.0f64;
    for frame in &frames {
        let quarter = duality_rotate(frame, PI / 2.0);
        for i in 0..frame.len() {
            swap_dev = swap_dev.max((quarter.ey[i] - frame.hy[i]).norm());
            swap_dev = swap_dev.max((quarter.hx[i] + frame.ex[i]).norm());
            swap_dev = swap_dev.max(quarter.ex[i].norm());
            swap_dev = swap_dev.max(quarter.hy[i].norm());
        }
    }
    report(
        4,
        "duality-invariance",
        worst_res < 1e-12 && worst_energy < 1e-12 && swap_dev < 1e-12,
        &format!(
            "residual shift {worst_res:.2e}, energy shift {worst_energy:.2e}, \
             quarter-turn sign pattern {swap_dev:.2e} (< 1e-12)"
        ),
    );
}

/// Criterion 5: at cutoff 24 the same-mode commutator [p, q] sits at its
/// target on the lower 23-block to < 1e-12 (sign -i hbar from the ladder
/// construction), cross-mode commutators vanish exactly, and the corner
/// carries the analytic truncation value (d-1) hbar.
#[test]
fn criterion_05_canonical_commutation() {
    let cavity = unit_cavity();
    let modes = mode_bank(2, &cavity).unwrap();
    let d = 24;
    let hbar = 1.0;
    let scheme = Scheme::time_domain(hbar, d).unwrap();
    let survey = ccr_report(&modes, &scheme).unwrap();

    let mut same_block = 0.0f64;
    let mut cross_max = 0.0f64;
    for entry in &survey.entries {
        if entry.alpha == entry.beta {
            same_block = same_block.max(entry.pq_block_deviation);
        } else {
            cross_max = cross_max
                .max(entry.pq_block_deviation)
                .max(entry.qq_max)
                .max(entry.pp_max);
        }
    }
    let corner = survey
        .corner_deviation
        .iter()
        .map(|(_, v)| *v)
        .fold(0.0, f64::max);
    report(
        5,
        "canonical-commutation",
        same_block < 1e-12 && cross_max == 0.0 && corner < 1e-12,
        &format!(
            "same-mode block {same_block:.2e} (< 1e-12, target -i*hbar per construction), \
             cross-mode max {cross_max:.1e} (exactly 0), corner vs (d-1)*hbar {corner:.2e}"
        ),
    );
}

/// Criterion 6: vacuum energies equal the half-quantum sums over 3 modes
/// to < 1e-12 relative.
#[test]
fn criterion_06_vacuum_energy() {
    let cavity = unit_cavity();
    let modes = mode_bank(3, &cavity).unwrap();
    let (hbar, lambda0) = (1.0, 1.0);
    let h_op = hamiltonian_operator(&modes, &Scheme::time_domain(hbar, 6).unwrap()).unwrap();
    let h_vac = expectation(&h_op, &StateVector::vacuum(&h_op.space))
        .unwrap()
        .re;
    let h_expected: f64 = modes.iter().map(|m| 0.5 * hbar * m.omega).sum();

    let g_op =
        dualcav_core::g_operator(&modes, &Scheme::space_domain(lambda0, 6).unwrap()).unwrap();
    let g_vac = expectation(&g_op, &StateVector::vacuum(&g_op.space))
        .unwrap()
        .re;
    let g_expected: f64 = modes.iter().map(|m| 0.5 * lambda0 * m.omega).sum();

    let h_rel = (h_vac - h_expected).abs() / h_expected;
    let g_rel = (g_vac - g_expected).abs() / g_expected;
    report(
        6,
        "vacuum-energy",
        h_rel < 1e-12 && g_rel < 1e-12,
        &format!("hamiltonian {h_rel:.2e}, g-operator {g_rel:.2e} (< 1e-12 relative)"),
    );
}

/// Criterion 7: coherent state alpha = 2 at cutoff 64 reproduces the
/// classical field to < 1e-8 sup-norm on a 33 x 33 grid.
#[test]
fn criterion_07_classical_limit() {
    let cavity = unit_cavity();
    let mode = make_mode(1, &cavity).unwrap();
    let d = 64;
    let hbar = 1.0;
    let scheme = Scheme::time_domain(hbar, d).unwrap();
    let alpha = Complex64::new(2.0, 0.0);
    let state = coherent_state(alpha, &FockSpace::new(d).unwrap());
    let r = (2.0 * hbar / (mode.mass * mode.omega)).sqrt() * alpha.re;
    let amp = TimeAmplitude::real_cosine(r, mode.omega);

    let grid = linspace(0.0, 1.0, 33);
    let period = 2.0 * PI / mode.omega;
    let mut sup = 0.0f64;
    for t in linspace(0.0, period, 33) {
        let ops = field_ops_sol1(std::slice::from_ref(&mode), &scheme, &cavity, &grid, t).unwrap();
        let classical = fields_sol1(
            std::slice::from_ref(&mode),
            std::slice::from_ref(&amp),
            &grid,
            t,
            &cavity,
        )
        .unwrap();
        for i in 0..grid.len() {
            let qm = expectation(&ops.e_ops[i], &state).unwrap().re;
            sup = sup.max((qm - classical.ex[i].re).abs());
        }
    }
    report(
        7,
        "classical-limit",
        sup < 1e-8,
        &format!("sup-norm difference {sup:.2e} over 33x33 grid (< 1e-8)"),
    );
}

/// Criterion 8: the G operator equals its number form on the lower block
/// to < 1e-10 at cutoff 24.
#[test]
fn criterion_08_g_operator_identity() {
    let cavity = unit_cavity();
    let modes = mode_bank(3, &cavity).unwrap();
    let scheme = Scheme::space_domain(1.0, 24).unwrap();
    let mut worst = 0.0f64;
    for mode in &modes {
        worst = worst.max(g_identity_residual(std::slice::from_ref(mode), &scheme).unwrap());
    }
    report(
        8,
        "g-operator-identity",
        worst < 1e-10,
        &format!("lower-block distance {worst:.2e} (< 1e-10, d = 24, modes 1..3)"),
    );
}

/// Criterion 9: the free-function integrand vanishes on shell,
/// max |integrand| < 1e-12 over [0, 2L/c] for 3 modes.
#[test]
fn criterion_09_f_alpha_on_shell() {
    let cavity = unit_cavity();
    let modes = mode_bank(3, &cavity).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 2);
    let window = 2.0 * cavity.length / cavity.light_speed;
    let mut worst = 0.0f64;
    for mode in &modes {
        let amp = TimeAmplitude::real_field(
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
            mode.omega,
        );
        for z in linspace(0.0, cavity.length, 21) {
            for tau in linspace(0.0, window, 41) {
                worst = worst.max(f_alpha_integrand(mode, &amp, z, tau, &cavity).norm());
            }
        }
    }
    report(
        9,
        "f-alpha-on-shell",
        worst < 1e-12,
        &format!("max |integrand| {worst:.2e} over [0, 2L/c] (< 1e-12)"),
    );
}

/// Criterion 10: the local-commutator harness asserts Hermiticity
/// (< 1e-12), its discrepancy metrics are finite and bit-stable across
/// rebuilds, and the full check suite runs end-to-end through the CLI in
/// under 60 s.
#[test]
fn criterion_10_local_harness_and_cli() {
    let cavity = unit_cavity();
    let mode = make_mode(1, &cavity).unwrap();
    let build =
        || local_commutator_check(&local_ladder(&mode, 1.0, 1.0, 1.0, 12, 12).unwrap()).unwrap();
    let first = build();
    let second = build();
    let hermitian = first.hermiticity_residual < 1e-12;
    let finite = first.identity_form_distance.is_finite()
        && first.hamiltonian_form_distance.is_finite()
        && first.trace.norm().is_finite();
    let stable = first.identity_form_distance.to_bits() == second.identity_form_distance.to_bits()
        && first.hamiltonian_form_distance.to_bits() == second.hamiltonian_form_distance.to_bits()
        && first.hermiticity_residual.to_bits() == second.hermiticity_residual.to_bits();

    // end-to-end CLI run of the whole suite
    let out_dir = std::env::temp_dir().join(format!("dualcav-acceptance-{}", std::process::id()));
    let start = Instant::now();
    let output = Command::new(env!("CARGO_BIN_EXE_dualcav"))
        .args(["verify", "--out"])
        .arg(&out_dir)
        .output()
        .expect("CLI binary runs");
    let elapsed = start.elapsed().as_secs_f64();
    let cli_ok = output.status.success();
    let summary = std::fs::read_to_string(out_dir.join("summary.jsonl")).unwrap_or_default();
    let record_count = summary.lines().filter(|l| !l.trim().is_empty()).count();
    let _ = std::fs::remove_dir_all(&out_dir);

    report(
        10,
        "local-harness-and-cli",
        hermitian && finite && stable && cli_ok && elapsed < 60.0 && record_count >= 10,
        &format!(
            "hermiticity {:.2e} (< 1e-12), metrics finite={finite} bit-stable={stable}, \
             CLI suite exit={} with {record_count} records in {elapsed:.1} s (< 60 s)",
            first.hermiticity_residual, output.status
        ),
    );
}

/// The classical space-scheme construction feeds the same residual check:
/// kept alongside the criteria as a cross-module guard.
#[test]
fn space_scheme_fields_pass_residual_check() {
    let cavity = unit_cavity();
    let modes = mode_bank(1, &cavity).unwrap();
    let profiles: Vec<SpatialProfile> = modes
        .iter()
        .map(|m| SpatialProfile::sine_zero_mean(m.wavenumber))
        .collect();
    let frames = |n: usize| -> Vec<FieldFrame> {
        let grid = linspace(0.0, 1.0, n);
        (0..n)
            .map(|j| {
                let t = 0.1 + 0.6 * j as f64 / (n - 1) as f64;
                dualcav_core::fields_space_scheme(&modes, &profiles, &grid, t, &cavity).unwrap()
            })
            .collect()
    };
    let coarse = maxwell_residual(&frames(65), &cavity).unwrap();
    let fine = maxwell_residual(&frames(129), &cavity).unwrap();
    assert!((coarse.faraday / fine.faraday).log2() > 1.9);
    assert!((coarse.ampere / fine.ampere).log2() > 1.9);
}

/// Cross-mode ladder operators embedded on a shared three-mode tensor
/// space stay exactly commuting; guards the multi-mode embedding path the
/// criteria exercise pairwise.
#[test]
fn embedded_mode_operators_commute() {
    let space = HilbertSpace::product(&[6, 6, 6]).unwrap();
    let a = OperatorMatrix::annihilation(&FockSpace::new(6).unwrap());
    let ops: Vec<OperatorMatrix> = (0..3)
        .map(|slot| OperatorMatrix::embed(&a, &space, slot).unwrap())
        .collect();
    for i in 0..3 {
        for j in 0..3 {
            if i != j {
                assert_eq!(ops[i].commutator(&ops[j]).unwrap().max_abs(), 0.0);
            }
        }
    }
}
