use ptq_core::{
    entropy_bits, omega_closed_form, BipartiteState, Complex, EntropySample, Mat2, PhaseClass,
    Subsystem,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::config::{Axis, CoeffList, Scenario, ScenarioConfig};
use crate::error::ExperimentError;
use crate::report::{RunReport, SweepPoint, SweepReport};

/// Entry-wise agreement required between traced and closed-form reduced densities.
pub const CLOSED_FORM_TOL: f64 = 1e-10;

/// Bound on `|α + δ − 1|` and `|γ − β*|`.
pub const IDENTITY_TOL: f64 = 1e-13;

/// Minimum relative coefficient-norm drift expected from a broken-phase run.
pub const BROKEN_DRIFT_THRESHOLD: f64 = 0.1;

/// `t_k = t_start + k·(t_end − t_start)/(steps − 1)`, endpoints included.
pub fn time_grid(t_start: f64, t_end: f64, steps: usize) -> Vec<f64> {
    let dt = (t_end - t_start) / (steps - 1) as f64;
    (0..steps)
        .map(|k| {
            if k + 1 == steps {
                t_end
            } else {
                t_start + k as f64 * dt
            }
        })
        .collect()
}

/// Four standard complex Gaussians, normalized to unit Frobenius norm.
pub fn random_coeffs(seed: u64) -> Mat2 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = || -> f64 { StandardNormal.sample(&mut rng) };
    let mut z = [Complex::new(0.0, 0.0); 4];
    for v in z.iter_mut() {
        let re = draw();
        let im = draw();
        *v = Complex::new(re, im);
    }
    let norm = z.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    Mat2::new(z[0], z[1], z[2], z[3]) * (1.0 / norm)
}

fn resolve_coeffs(config: &ScenarioConfig) -> Result<Mat2, ExperimentError> {
    match (&config.coeffs, config.seed) {
        (Some(c), _) => Ok(c.to_matrix()),
        (None, Some(seed)) => Ok(random_coeffs(seed)),
        (None, None) => Err(ExperimentError::Config(
            "one of --coeffs or --seed is required".into(),
        )),
    }
}

/// Runs the three-step check: entropy at `t = 0`, evolution of one party over
/// the time grid with both reduced densities rebuilt at every step, and the
/// largest entropy deviation against the tolerance.
pub fn run_scenario(config: &ScenarioConfig) -> Result<RunReport, ExperimentError> {
    config.validate()?;
    let coeffs = resolve_coeffs(config)?;
    if config.scenario == Scenario::BrokenDemo {
        return run_broken_demo(config, coeffs);
    }

    let state = BipartiteState::new(coeffs, config.left_kind()?, config.right_kind()?)?;
    let side = config.scenario.evolving_side();
    let observer = side.other();
    let e_initial = state.entropy_of(observer)?;

    let mut samples = Vec::with_capacity(config.steps);
    let mut max_deviation = 0.0f64;
    let mut max_gap = 0.0f64;
    let mut max_identity = 0.0f64;
    for t in time_grid(config.t_start, config.t_end, config.steps) {
        let evolved = state.evolve(side, t)?;
        for keep in [Subsystem::First, Subsystem::Second] {
            let numeric = evolved.reduced_density(keep);
            let closed = evolved.closed_form(keep)?;
            let gap = numeric.max_abs_diff(&closed.matrix());
            let identity = closed.identity_residual();
            if gap.is_nan() || gap > CLOSED_FORM_TOL {
                return Err(ExperimentError::Consistency(format!(
                    "closed-form reduced density differs by {gap:e} at t = {t}"
                )));
            }
            if identity.is_nan() || identity > IDENTITY_TOL {
                return Err(ExperimentError::Consistency(format!(
                    "alpha + delta = 1 / gamma = conj(beta) violated by {identity:e} at t = {t}"
                )));
            }
            max_gap = max_gap.max(gap);
            max_identity = max_identity.max(identity);
        }
        let sample = evolved.sample(t, observer)?;
        let other = evolved.entropy_of(side)?;
        max_deviation = max_deviation
            .max((sample.entropy_bits - e_initial).abs())
            .max((other - e_initial).abs());
        samples.push(sample.into());
    }

    Ok(RunReport {
        config: config.clone(),
        coefficients: CoeffList::from_matrix(state.coeffs()),
        samples,
        e_initial,
        max_deviation,
        pass: max_deviation <= config.tolerance,
        phase_info: [state.left().phase().into(), state.right().phase().into()],
        non_unitary: false,
        norm_drift: None,
        max_closed_form_gap: max_gap,
        max_identity_residual: max_identity,
    })
}

// Broken-phase contrast: the PT side has eigenvalues ±iκ and its evolution
// rescales the coefficient rows by e^{±κt}. Samples use the renormalized
// coefficients; the verdict is whether the norm drifts by at least 10% at
// some time in [0, 1/κ].
fn run_broken_demo(config: &ScenarioConfig, coeffs: Mat2) -> Result<RunReport, ExperimentError> {
    let params = config.params1()?;
    if params.phase() != PhaseClass::Broken {
        return Err(ExperimentError::Config(format!(
            "broken_demo needs gamma1 > zeta1 (got {} phase)",
            params.phase()
        )));
    }
    let state = BipartiteState::new_exploratory(coeffs, config.left_kind()?, config.right_kind()?)?;
    let side = Subsystem::First;
    let kappa = state.frame(side).energies()[0].im.abs();

    let omega = |s: &BipartiteState| -> Result<EntropySample, ExperimentError> {
        let c = *s.coeffs() * (1.0 / s.coefficient_norm());
        let [omega_plus, omega_minus] = omega_closed_form(&c)?;
        Ok(EntropySample {
            t: 0.0,
            omega_plus,
            omega_minus,
            entropy_bits: entropy_bits(&[omega_plus, omega_minus])?,
        })
    };

    let e_initial = omega(&state)?.entropy_bits;
    let mut samples = Vec::with_capacity(config.steps);
    let mut max_deviation = 0.0f64;
    for t in time_grid(config.t_start, config.t_end, config.steps) {
        let evolved = state.evolve(side, t)?;
        let sample = EntropySample {
            t,
            ..omega(&evolved)?
        };
        max_deviation = max_deviation.max((sample.entropy_bits - e_initial).abs());
        samples.push(sample.into());
    }
    let at_scale = state.evolve(side, 1.0 / kappa)?;
    let mut drift = 0.0f64;
    for t in drift_candidates(&state, kappa) {
        drift = drift.max((state.evolve(side, t)?.coefficient_norm() - 1.0).abs());
    }

    Ok(RunReport {
        config: config.clone(),
        coefficients: CoeffList::from_matrix(state.coeffs()),
        samples,
        e_initial,
        max_deviation,
        pass: drift >= BROKEN_DRIFT_THRESHOLD,
        phase_info: [state.left().phase().into(), state.right().phase().into()],
        non_unitary: !at_scale.is_unitary(),
        norm_drift: Some(drift),
        max_closed_form_gap: 0.0,
        max_identity_residual: 0.0,
    })
}

// ‖C(t)‖² = A·e^{2κt} + B·e^{−2κt} is convex in t, so the largest
// |‖C(t)‖ − 1| on [0, 1/κ] sits at t = 1/κ or at the minimum of the norm.
fn drift_candidates(state: &BipartiteState, kappa: f64) -> [f64; 2] {
    let energies = state.left().energies();
    let (mut grow, mut decay) = (0.0, 0.0);
    for (row, lambda) in state.coeffs().rows().iter().zip(energies) {
        let w: f64 = row.iter().map(|z| z.norm_sqr()).sum();
        if lambda.im > 0.0 {
            grow += w;
        } else {
            decay += w;
        }
    }
    let t_min = if grow > 0.0 && decay > 0.0 {
        ((decay / grow).ln() / (4.0 * kappa)).clamp(0.0, 1.0 / kappa)
    } else {
        0.0
    };
    [1.0 / kappa, t_min]
}

/// One run per axis value. Points outside the unbroken phase are reported as
/// skipped. For fixed coefficients the reduced spectrum must not move across
/// the sweep.
pub fn sweep(
    base: &ScenarioConfig,
    axis: Axis,
    values: &[f64],
) -> Result<SweepReport, ExperimentError> {
    if base.scenario == Scenario::BrokenDemo {
        return Err(ExperimentError::Config(
            "sweep does not support broken_demo".into(),
        ));
    }
    if matches!(axis, Axis::Gamma2 | Axis::Zeta2) && !base.scenario.uses_second_params() {
        return Err(ExperimentError::Config(format!(
            "axis {} has no effect on scenario {}",
            axis.as_str(),
            base.scenario
        )));
    }
    if values.is_empty() {
        return Err(ExperimentError::Config(
            "sweep needs at least one value".into(),
        ));
    }

    let mut points = Vec::with_capacity(values.len());
    for &value in values {
        let mut config = base.clone();
        config.set_axis(axis, value);
        config.validate()?;
        let params = match axis {
            Axis::Gamma1 | Axis::Zeta1 => config.params1()?,
            Axis::Gamma2 | Axis::Zeta2 => config.params2()?,
        };
        let phase = params.phase();
        if phase != PhaseClass::Unbroken {
            points.push(SweepPoint::PhaseSkipped {
                value,
                phase: Some(phase).into(),
            });
            continue;
        }
        points.push(SweepPoint::Ok {
            value,
            report: Box::new(run_scenario(&config)?),
        });
    }

    let reports: Vec<&RunReport> = points.iter().filter_map(SweepPoint::report).collect();
    let omega_spread = match reports.first() {
        Some(reference) => reports
            .iter()
            .flat_map(|r| {
                r.samples
                    .iter()
                    .zip(&reference.samples)
                    .map(|(a, b)| (a.omega_plus - b.omega_plus).abs())
            })
            .fold(0.0, f64::max),
        None => 0.0,
    };
    let pass = omega_spread <= base.tolerance && reports.iter().all(|r| r.pass);
    Ok(SweepReport {
        axis,
        points,
        omega_spread,
        pass,
    })
}
