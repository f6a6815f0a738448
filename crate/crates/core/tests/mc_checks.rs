//! Seeded Monte Carlo integration checks that exercise several modules
//! together: sampler-vs-sampler agreement in distribution, weak-error decay
//! of the Euler scheme, quadratic-variation consistency of the transformed
//! data, estimator accuracy on synthetic and simulated inputs, and the
//! baseline estimators' cross-validation. Every test is deterministic under
//! its pinned seed.

use ckls_core::estimate::{
    baseline_mle_discrete, baseline_pseudo_mle, initial_k_aggregated, pr_estimate, InitialVariant,
    QvWindow,
};
use ckls_core::experiments::{run_ci_coverage, CoverageConfig, DataSource};
use ckls_core::model::LevelMap;
use ckls_core::simulate::{simulate_cir_euler, simulate_cir_exact, simulate_ckls, SimulationConfig};
use ckls_core::stats::linear_fit;
use ckls_core::{CirParams, CklsParams, Path, SamplingGrid};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, Gamma};

/// Two-sample Kolmogorov-Smirnov distance.
fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let mut xs: Vec<f64> = a.to_vec();
    let mut ys: Vec<f64> = b.to_vec();
    xs.sort_by(|p, q| p.partial_cmp(q).unwrap());
    ys.sort_by(|p, q| p.partial_cmp(q).unwrap());
    let (n, m) = (xs.len() as f64, ys.len() as f64);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0f64);
    while i < xs.len() && j < ys.len() {
        if xs[i] <= ys[j] {
            i += 1;
        } else {
            j += 1;
        }
        d = d.max((i as f64 / n - j as f64 / m).abs());
    }
    d
}

/// Critical two-sample KS distance at the 1% level (asymptotic).
fn ks_two_sample_critical_1pct(n: usize, m: usize) -> f64 {
    1.628 * ((n + m) as f64 / (n as f64 * m as f64)).sqrt()
}

fn conditional_mean(cir: &CirParams, x0: f64, t: f64) -> f64 {
    let decay = (-cir.beta() * t).exp();
    x0 * decay + cir.alpha() / cir.beta() * (1.0 - decay)
}

#[test]
fn euler_and_exact_transitions_agree_in_distribution() {
    let cir = CirParams::new(1.0, 1.0, 1.0).unwrap();
    let grid = SamplingGrid::from_delta_n(0.01, 100).unwrap();
    let m = 10_000;
    let mut exact_end = Vec::with_capacity(m);
    let mut euler_end = Vec::with_capacity(m);
    for i in 0..m {
        let config = SimulationConfig {
            seed: 101,
            stream: i as u64,
            substeps: 64,
            ..Default::default()
        };
        exact_end.push(simulate_cir_exact(&cir, &grid, &config).unwrap().last());
        let config = SimulationConfig {
            seed: 202,
            stream: i as u64,
            substeps: 64,
            ..Default::default()
        };
        euler_end.push(simulate_cir_euler(&cir, &grid, &config).unwrap().last());
    }
    let d = ks_two_sample(&exact_end, &euler_end);
    let critical = ks_two_sample_critical_1pct(m, m);
    assert!(
        d < critical,
        "KS distance {d:.5} exceeds the 1% critical value {critical:.5}"
    );
}

#[test]
fn exact_sampler_emits_no_zeros_in_a_million_draws() {
    // With 2*alpha >= gamma^2 the boundary is inaccessible; the exact
    // transition must never produce a zero.
    let cir = CirParams::new(1.0, 1.0, 1.0).unwrap();
    let grid = SamplingGrid::from_delta_n(0.002, 1_000_000).unwrap();
    let path = simulate_cir_exact(&cir, &grid, &SimulationConfig::default()).unwrap();
    assert!(path.strictly_positive(), "found a zero among 1e6 draws");
}

#[test]
fn euler_weak_error_halves_as_substeps_double() {
    // Small noise isolates the drift discretization, whose error against the
    // closed-form conditional mean should scale like the internal mesh.
    let cir = CirParams::new(1.0, 1.0, 0.05).unwrap();
    let grid = SamplingGrid::from_delta_n(1.0, 1).unwrap();
    let x0 = 2.0;
    let truth = conditional_mean(&cir, x0, 1.0);
    let m = 4000;
    let mut log_mesh = Vec::new();
    let mut log_err = Vec::new();
    let mut errors = Vec::new();
    for (li, substeps) in [2usize, 4, 8, 16].iter().enumerate() {
        let mut sum = 0.0;
        for i in 0..m {
            let config = SimulationConfig {
                seed: 77,
                stream: (li * m + i) as u64,
                substeps: *substeps,
                x0: Some(x0),
                ..Default::default()
            };
            sum += simulate_cir_euler(&cir, &grid, &config).unwrap().last();
        }
        let err = (sum / m as f64 - truth).abs();
        log_mesh.push((1.0 / *substeps as f64).ln());
        log_err.push(err.ln());
        errors.push(err);
    }
    assert!(
        errors.windows(2).all(|w| w[1] < w[0]),
        "errors must decrease as substeps double: {errors:?}"
    );
    let fit = linear_fit(&log_mesh, &log_err).unwrap();
    assert!(
        (0.7..=1.3).contains(&fit.slope),
        "weak-error slope {} outside [0.7, 1.3]",
        fit.slope
    );
}

#[test]
fn transformed_path_quadratic_variation_tracks_the_square_root_coefficient() {
    // Carrying a simulated power-model path through the level map must yield
    // increments whose realized quadratic variation grows like gamma^2 * X
    // per unit time, bucket by bucket.
    let params = CklsParams::new(1.0, 1.0, 1.0, 0.75, 1.0).unwrap();
    let grid = SamplingGrid::from_delta_n(1e-4, 20_000).unwrap();
    let config = SimulationConfig {
        seed: 31,
        substeps: 4,
        ..Default::default()
    };
    let lambda = simulate_ckls(&params, &grid, &config).unwrap();
    let map = LevelMap::new(params.k(), params.l()).unwrap();
    let y: Vec<f64> = lambda.values().iter().map(|&v| map.forward(v)).collect();
    let gamma_sq = (params.sigma() * params.l()).powi(2);
    let bucket = 2500;
    for (bi, chunk) in y.windows(2).collect::<Vec<_>>().chunks(bucket).enumerate() {
        if chunk.len() < bucket {
            break;
        }
        let qv: f64 = chunk.iter().map(|w| (w[1] - w[0]) * (w[1] - w[0])).sum();
        let predicted: f64 = chunk
            .iter()
            .map(|w| gamma_sq * w[0] * grid.delta())
            .sum();
        let ratio = qv / predicted;
        assert!(
            (0.9..=1.1).contains(&ratio),
            "bucket {bi}: realized/predicted quadratic variation = {ratio:.4}"
        );
    }
}

#[test]
fn independent_gamma_draws_recover_the_drift_ratio() {
    // On i.i.d. draws from the invariant Gamma law of (alpha=1, beta=1,
    // gamma=2), the drift statistic converges to gamma^2/2 * m1/(m2 - m1^2)
    // = beta. A million draws pin it within 1%.
    let mut rng = ChaCha12Rng::seed_from_u64(9001);
    let gamma_law = Gamma::new(0.5, 2.0).unwrap();
    let values: Vec<f64> = (0..=1_000_000).map(|_| gamma_law.sample(&mut rng)).collect();
    let grid = SamplingGrid::from_delta_n(1.0, values.len() - 1).unwrap();
    let path = Path::new(grid, values).unwrap();
    let est = pr_estimate(&path, 2.0).unwrap();
    assert!(
        (est.beta_hat - 1.0).abs() < 0.01,
        "beta_hat = {} not within 1% of 1",
        est.beta_hat
    );
    assert!((est.alpha_hat - 1.0).abs() < 0.02);
}

#[test]
fn aggregated_initial_reading_is_accurate_at_fine_mesh() {
    // Replicated power-model simulation at mesh 1e-4 over span 10: the
    // aggregated initial reading should land within 0.05 of the true
    // elasticity in at least 95% of replications.
    let params = CklsParams::new(1.0, 1.0, 1.0, 0.7, 1.0).unwrap();
    let grid = SamplingGrid::from_delta_n(1e-4, 100_000).unwrap();
    let reps = 200;
    let mut hits = 0;
    for i in 0..reps {
        let config = SimulationConfig {
            seed: 404,
            stream: i as u64,
            substeps: 1,
            ..Default::default()
        };
        let path = simulate_ckls(&params, &grid, &config).unwrap();
        let agg = initial_k_aggregated(
            &path,
            Some(params.sigma()),
            0.1,
            InitialVariant::Single,
            QvWindow::Auto,
        )
        .unwrap();
        if (agg.k_hat - 0.7).abs() < 0.05 {
            hits += 1;
        }
    }
    assert!(
        hits * 100 >= reps * 95,
        "only {hits}/{reps} replications within 0.05 of the true elasticity"
    );
}

#[test]
fn half_elasticity_lift_is_covered_by_the_interval() {
    // At elasticity 1/2 the level map is linear, so exact square-root data
    // lifted through it feeds the full pipeline an identity-like case: the
    // nominal 95% interval should cover 1/2 at least 90% of the time.
    let config = CoverageConfig {
        model: CklsParams::new(1.0, 1.0, 1.0, 0.5, 1.0).unwrap(),
        horizon: 100.0,
        omega: 1.1,
        replications: 200,
        data_source: DataSource::TransformedExactCir,
        x0: Some(0.25),
        coverage_band: (0.90, 1.0),
        seed: 515,
        ..Default::default()
    };
    let report = run_ci_coverage(&config).unwrap();
    assert!(
        report.pass,
        "coverage {} outside [0.90, 1.00]",
        report.details["coverage"]
    );
}

#[test]
fn drift_baselines_cross_validate_on_feller_data() {
    // On Feller-regime square-root data all three drift estimators are
    // consistent; the discretized likelihood baseline is more efficient than
    // the moment-ratio statistic, and the autoregressive baseline's mean
    // lands within 5% of the truth.
    let cir = CirParams::new(1.0, 1.0, 1.0).unwrap();
    let grid = SamplingGrid::from_delta_n(1e-3, 500_000).unwrap();
    let m = 20;
    let scale = (grid.n() as f64 * grid.delta()).sqrt();
    let mut diffs = Vec::with_capacity(m);
    let (mut z_pr, mut z_mle, mut pseudo) = (Vec::new(), Vec::new(), Vec::new());
    for i in 0..m {
        let config = SimulationConfig {
            seed: 606,
            stream: i as u64,
            ..Default::default()
        };
        let path = simulate_cir_exact(&cir, &grid, &config).unwrap();
        let pr = pr_estimate(&path, cir.gamma()).unwrap().beta_hat;
        let (_, mle) = baseline_mle_discrete(&path, cir.gamma()).unwrap();
        let (_, pm) = baseline_pseudo_mle(&path, grid.delta()).unwrap();
        diffs.push(pr - mle);
        z_pr.push(scale * (pr - cir.beta()));
        z_mle.push(scale * (mle - cir.beta()));
        pseudo.push(pm);
    }
    let stats = |v: &[f64]| {
        let mean = v.iter().sum::<f64>() / v.len() as f64;
        let var = v.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (v.len() - 1) as f64;
        (mean, var)
    };
    let (d_mean, d_var) = stats(&diffs);
    assert!(
        d_mean.abs() <= 3.0 * (d_var / m as f64).sqrt(),
        "estimators disagree: mean diff {d_mean}"
    );
    let (_, v_pr) = stats(&z_pr);
    let (_, v_mle) = stats(&z_mle);
    assert!(
        v_mle < v_pr,
        "likelihood baseline should be more efficient: {v_mle} vs {v_pr}"
    );
    assert!(
        (1.0..=3.0).contains(&v_mle),
        "likelihood baseline variance {v_mle} far from 2"
    );
    let (p_mean, _) = stats(&pseudo);
    assert!(
        (p_mean - cir.beta()).abs() < 0.05 * cir.beta(),
        "autoregressive baseline mean {p_mean}"
    );
}
