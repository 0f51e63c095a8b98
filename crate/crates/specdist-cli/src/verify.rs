//! The `verify` subcommand's check suites: closed-form oracle comparisons,
//! product (Pythagoras) invariants, transport certificates, and the
//! symbol/quantization maps. Every check is deterministic for a fixed seed
//! and reports the measured error next to its bound.

use specdist_core::berezin::{BerezinMaps, SphereQuadrature};
use specdist_core::matrix::{CMatrix, C64};
use specdist_core::metric::FiniteMetric;
use specdist_core::oracles;
use specdist_core::sampling;
use specdist_core::solver::{DistanceEngine, SolveOptions};
use specdist_core::transport::{commutative_distance, kantorovich};
use specdist_core::triple::{
    bloch_triples, finite_metric_triple, simplex3_triple, state_from_bloch, state_from_simplex,
    two_point_state, two_point_triple,
};
use specdist_core::{MarginalIdempotent, ProductLab};

use crate::commands::Failure;

/// One named check with its measured error and bound.
pub struct Check {
    pub suite: &'static str,
    pub name: &'static str,
    pub measured: f64,
    pub bound: f64,
    pub passed: bool,
}

fn check(suite: &'static str, name: &'static str, measured: f64, bound: f64) -> Check {
    Check {
        suite,
        name,
        measured,
        bound,
        passed: measured <= bound,
    }
}

/// Run one suite (or `all`); unknown names are usage errors.
pub fn run_suite(
    suite: &str,
    resolution: usize,
    opts: &SolveOptions,
) -> Result<Vec<Check>, Failure> {
    match suite {
        "oracles" => suite_oracles(opts),
        "pythagoras" => suite_pythagoras(opts),
        "transport" => suite_transport(opts),
        "berezin" => suite_berezin(resolution, opts),
        "all" => {
            let mut checks = suite_oracles(opts)?;
            checks.extend(suite_pythagoras(opts)?);
            checks.extend(suite_transport(opts)?);
            checks.extend(suite_berezin(resolution, opts)?);
            Ok(checks)
        }
        other => Err(Failure::Invalid(format!(
            "unknown suite {other:?}: expected oracles, pythagoras, transport, berezin, or all"
        ))),
    }
}

fn rel_err(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs().max(1e-12)
}

// ---------------------------------------------------------------------------
// oracles
// ---------------------------------------------------------------------------

fn suite_oracles(opts: &SolveOptions) -> Result<Vec<Check>, Failure> {
    const SUITE: &str = "oracles";
    let mut checks = Vec::new();

    // two-point spaces
    let mut worst = 0.0f64;
    for lambda in [0.5, 1.25] {
        let triple = two_point_triple(lambda)?;
        let engine = DistanceEngine::new(&triple)?;
        for (t1, t2) in [(1.0, -1.0), (0.6, -0.2), (0.3, -0.9)] {
            let phi = two_point_state(triple.algebra(), t1)?;
            let psi = two_point_state(triple.algebra(), t2)?;
            let got = engine.distance(&phi, &psi, opts)?.value;
            worst = worst.max(rel_err(got, oracles::two_point_distance(lambda, t1, t2)));
        }
    }
    checks.push(check(SUITE, "two-point distances match the closed form", worst, 1e-5));

    // three-point simplex: sup-norm of the difference
    let triple = simplex3_triple();
    let engine = DistanceEngine::new(&triple)?;
    let mut worst = 0.0f64;
    let e1 = state_from_simplex(triple.algebra(), &[1.0, 0.0, 0.0])?;
    let bary = state_from_simplex(triple.algebra(), &[1.0 / 3.0; 3])?;
    worst = worst.max(rel_err(engine.distance(&e1, &bary, opts)?.value, 2.0 / 3.0));
    let mut rng = sampling::rng(opts.seed);
    for _ in 0..5 {
        let p = sampling::random_simplex(3, &mut rng);
        let q = sampling::random_simplex(3, &mut rng);
        let phi = state_from_simplex(triple.algebra(), &p)?;
        let psi = state_from_simplex(triple.algebra(), &q)?;
        let got = engine.distance(&phi, &psi, opts)?.value;
        let want = oracles::simplex3_distance(
            &[p[0], p[1], p[2]],
            &[q[0], q[1], q[2]],
        );
        worst = worst.max(rel_err(got, want));
    }
    checks.push(check(
        SUITE,
        "three-point simplex distances match the max-difference norm",
        worst,
        1e-5,
    ));

    // canonical triple of a random metric on pure states
    let metric = sampling::random_metric(5, &mut rng);
    let triple = finite_metric_triple(&metric);
    let engine = DistanceEngine::new(&triple)?;
    let mut worst = 0.0f64;
    for i in 0..5 {
        for j in (i + 1)..5 {
            let mut p = vec![0.0; 5];
            p[i] = 1.0;
            let mut q = vec![0.0; 5];
            q[j] = 1.0;
            let phi = state_from_simplex(triple.algebra(), &p)?;
            let psi = state_from_simplex(triple.algebra(), &q)?;
            let got = engine.distance(&phi, &psi, opts)?.value;
            worst = worst.max(rel_err(got, oracles::finite_metric_pure_distance(&metric, i, j)));
        }
    }
    checks.push(check(
        SUITE,
        "pure states on a random metric recover the metric",
        worst,
        1e-5,
    ));

    // the three Bloch-ball geometries
    let bloch = bloch_triples();
    let mut worst = 0.0f64;
    for _ in 0..4 {
        let x = sampling::random_bloch_ball(&mut rng);
        let y = sampling::random_bloch_ball(&mut rng);
        for (triple, want) in [
            (&bloch.conjugation, oracles::bloch_conjugation_distance(&x, &y)),
            (&bloch.flip, oracles::bloch_flip_distance(&x, &y)),
            (&bloch.truncated_moyal, oracles::bloch_truncated_moyal_distance(&x, &y)),
        ] {
            let engine = DistanceEngine::new(triple)?;
            let phi = state_from_bloch(triple.algebra(), &x)?;
            let psi = state_from_bloch(triple.algebra(), &y)?;
            worst = worst.max(rel_err(engine.distance(&phi, &psi, opts)?.value, want));
        }
    }
    checks.push(check(
        SUITE,
        "Bloch-sphere geometries match their closed forms",
        worst,
        1e-5,
    ));

    // products of two two-point spaces
    let lab = ProductLab::from_factors(&two_point_triple(0.5)?, &two_point_triple(0.8)?)?;
    let engine = lab.combined_engine();
    let mut worst = 0.0f64;
    for ((t1, t2), (s1, s2)) in [
        ((1.0, 1.0), (-1.0, -1.0)),
        ((0.5, -0.5), (-0.5, 0.5)),
        ((1.0, 0.0), (0.0, 1.0)),
        ((0.8, 0.2), (-0.4, 0.6)),
    ] {
        let phi = lab.structure().product_state(
            &two_point_state(lab.structure().left().algebra(), t1)?,
            &two_point_state(lab.structure().right().algebra(), t2)?,
        );
        let psi = lab.structure().product_state(
            &two_point_state(lab.structure().left().algebra(), s1)?,
            &two_point_state(lab.structure().right().algebra(), s2)?,
        );
        let got = engine.distance(&phi, &psi, opts)?.value;
        let want = oracles::two_two_point_product_distance(0.5, 0.8, (t1, t2), (s1, s2));
        worst = worst.max(rel_err(got, want));
    }
    checks.push(check(
        SUITE,
        "two-point product distances match the closed form",
        worst,
        1e-4,
    ));

    Ok(checks)
}

// ---------------------------------------------------------------------------
// pythagoras
// ---------------------------------------------------------------------------

fn suite_pythagoras(opts: &SolveOptions) -> Result<Vec<Check>, Failure> {
    const SUITE: &str = "pythagoras";
    let mut checks = Vec::new();

    // product-state grid on two two-point factors: the distance is the
    // exact hypotenuse of the marginal distances
    let lab = ProductLab::from_factors(&two_point_triple(0.5)?, &two_point_triple(0.5)?)?;
    let params = [-1.0, -1.0 / 3.0, 1.0 / 3.0, 1.0];
    let mut states = Vec::new();
    for &t in &params {
        for &s in &params {
            states.push(lab.structure().product_state(
                &two_point_state(lab.structure().left().algebra(), t)?,
                &two_point_state(lab.structure().right().algebra(), s)?,
            ));
        }
    }
    let mut worst = 0.0f64;
    for i in 0..states.len() {
        for j in (i + 1)..states.len() {
            let report = lab.check(&states[i], &states[j], opts)?;
            worst = worst.max((report.ratio - 1.0).abs());
        }
    }
    checks.push(check(
        SUITE,
        "product-state grid reaches the exact hypotenuse",
        worst,
        1e-4,
    ));

    // random product states on mixed factors: ratio in [1, sqrt 2]
    let lab = ProductLab::from_factors(&two_point_triple(0.7)?, &simplex3_triple())?;
    let mut rng = sampling::rng(opts.seed);
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let t = rng_range(&mut rng);
        let s = rng_range(&mut rng);
        let phi = lab.structure().product_state(
            &two_point_state(lab.structure().left().algebra(), t)?,
            &state_from_simplex(
                lab.structure().right().algebra(),
                &sampling::random_simplex(3, &mut rng),
            )?,
        );
        let psi = lab.structure().product_state(
            &two_point_state(lab.structure().left().algebra(), s)?,
            &state_from_simplex(
                lab.structure().right().algebra(),
                &sampling::random_simplex(3, &mut rng),
            )?,
        );
        let report = lab.check(&phi, &psi, opts)?;
        worst = worst
            .max(1.0 - report.ratio)
            .max(report.ratio - std::f64::consts::SQRT_2);
    }
    checks.push(check(
        SUITE,
        "random product ratios stay within the sandwich",
        worst.max(0.0),
        1e-4,
    ));

    // exact sum-of-squares identity for sum elements
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let a1 = sampling::random_coeffs(2, &mut rng);
        let a2 = sampling::random_coeffs(3, &mut rng);
        worst = worst.max(lab.sum_of_squares_deviation(&a1, &a2)?);
    }
    checks.push(check(
        SUITE,
        "factor seminorms add in squares on sum elements",
        worst,
        1e-9,
    ));

    // the marginal idempotent is a seminorm contraction
    let lab = ProductLab::from_factors(&two_point_triple(0.5)?, &two_point_triple(0.8)?)?;
    let phi1 = two_point_state(lab.structure().left().algebra(), 0.3)?;
    let phi2 = two_point_state(lab.structure().right().algebra(), -0.4)?;
    let idem = MarginalIdempotent::new(
        lab.structure().left().algebra(),
        &phi1,
        lab.structure().right().algebra(),
        &phi2,
    )?;
    let report = lab.check_contraction(&idem, 100, opts.seed)?;
    checks.push(check(
        SUITE,
        "marginal projection never increases the seminorm",
        report.violations as f64,
        0.0,
    ));

    Ok(checks)
}

fn rng_range(rng: &mut sampling::ChaCha8Rng) -> f64 {
    sampling::random_coeffs(1, rng)[0]
}

// ---------------------------------------------------------------------------
// transport
// ---------------------------------------------------------------------------

fn suite_transport(opts: &SolveOptions) -> Result<Vec<Check>, Failure> {
    const SUITE: &str = "transport";
    let mut checks = Vec::new();

    // unit metric on three points: point mass to uniform costs 2/3
    let unit = FiniteMetric::new(vec![
        vec![0.0, 1.0, 1.0],
        vec![1.0, 0.0, 1.0],
        vec![1.0, 1.0, 0.0],
    ])?;
    let plan = kantorovich(&unit, &[1.0, 0.0, 0.0], &[1.0 / 3.0; 3])?;
    checks.push(check(
        SUITE,
        "moving a point mass to uniform on the unit triangle costs 2/3",
        (plan.value - 2.0 / 3.0).abs(),
        1e-12,
    ));

    // transport value == spectral distance on the canonical triple
    let mut rng = sampling::rng(opts.seed);
    let metric = sampling::random_metric(6, &mut rng);
    let triple = finite_metric_triple(&metric);
    let engine = DistanceEngine::new(&triple)?;
    let mut worst = 0.0f64;
    for _ in 0..5 {
        let p = sampling::random_simplex(6, &mut rng);
        let q = sampling::random_simplex(6, &mut rng);
        let lp = kantorovich(&metric, &p, &q)?.value;
        let phi = state_from_simplex(triple.algebra(), &p)?;
        let psi = state_from_simplex(triple.algebra(), &q)?;
        let spectral = engine.distance(&phi, &psi, opts)?.value;
        worst = worst.max(rel_err(spectral, lp));
    }
    checks.push(check(
        SUITE,
        "transport values match spectral distances",
        worst,
        1e-4,
    ));

    // dual feasibility certificates close the gap
    let metric = sampling::random_metric(9, &mut rng);
    let mut worst = 0.0f64;
    for _ in 0..3 {
        let p = sampling::random_simplex(9, &mut rng);
        let q = sampling::random_simplex(9, &mut rng);
        let plan = kantorovich(&metric, &p, &q)?;
        let dual: f64 = plan.dual_a.iter().zip(&p).map(|(a, w)| a * w).sum::<f64>()
            + plan.dual_b.iter().zip(&q).map(|(b, w)| b * w).sum::<f64>();
        worst = worst.max((plan.value - dual).abs());
    }
    checks.push(check(
        SUITE,
        "dual certificates close the optimality gap",
        worst,
        1e-9,
    ));

    // mass cannot cross an infinite-distance barrier
    let metric = sampling::random_disconnected_metric(6, 2, &mut rng);
    let classes = metric.finiteness_classes();
    let (i, j) = (classes[0][0], classes[1][0]);
    let mut p = vec![0.0; 6];
    p[i] = 1.0;
    let mut q = vec![0.0; 6];
    q[j] = 1.0;
    let lp = commutative_distance(&metric, &p, &q)?;
    let triple = finite_metric_triple(&metric);
    let engine = DistanceEngine::new(&triple)?;
    let phi = state_from_simplex(triple.algebra(), &p)?;
    let psi = state_from_simplex(triple.algebra(), &q)?;
    let spectral = engine.distance(&phi, &psi, opts)?.value;
    let both_infinite = lp.is_infinite() && spectral.is_infinite();
    checks.push(check(
        SUITE,
        "mass cannot cross infinite-distance barriers",
        if both_infinite { 0.0 } else { 1.0 },
        0.0,
    ));

    Ok(checks)
}

// ---------------------------------------------------------------------------
// berezin
// ---------------------------------------------------------------------------

fn suite_berezin(resolution: usize, opts: &SolveOptions) -> Result<Vec<Check>, Failure> {
    const SUITE: &str = "berezin";
    let mut checks = Vec::new();

    let maps = BerezinMaps::qubit(SphereQuadrature::fibonacci(resolution)?)?;
    checks.push(check(
        SUITE,
        "quadrature first moments vanish",
        maps.quadrature().moment_residual(),
        5e-3,
    ));

    let n = maps.quadrature().len();
    let ones = vec![C64::new(1.0, 0.0); n];
    let q1 = maps.quantize(&ones)?;
    checks.push(check(
        SUITE,
        "quantization preserves the identity",
        q1.add(&CMatrix::identity(2).scale_real(-1.0)).frobenius_norm(),
        5e-3,
    ));

    // quantizing the height symbol returns a multiple of the height matrix
    let sigma3 = CMatrix::real_diag(&[1.0, -1.0]);
    let qs = maps.quantize(&maps.symbol(&sigma3)?)?;
    let c = specdist_core::matrix::trace_inner(&sigma3, &qs).re / 2.0;
    checks.push(check(
        SUITE,
        "quantizing the height symbol stays on its axis",
        qs.add(&sigma3.scale_real(-c)).frobenius_norm(),
        5e-3,
    ));

    let mut rng = sampling::rng(opts.seed);
    let mut worst = 0.0f64;
    for _ in 0..5 {
        let a = sampling::random_matrix(2, &mut rng);
        let f: Vec<C64> = (0..n).map(|_| sampling::random_complex(&mut rng)).collect();
        worst = worst.max(maps.adjointness_residual(&a, &f)?);
    }
    checks.push(check(
        SUITE,
        "symbol and quantization are adjoint",
        worst,
        1e-10,
    ));

    // transport between sampled symbols: zero at zero separation, below
    // the mean-distance ceiling otherwise (capped resolution keeps the
    // linear programs quick)
    let cost_maps = if resolution <= 160 {
        maps
    } else {
        BerezinMaps::qubit(SphereQuadrature::fibonacci(160)?)?
    };
    let rho = sampling::random_density(2, &mut rng);
    let mut worst = cost_maps.cost_distance(&rho, &rho)?;
    for _ in 0..3 {
        let a = sampling::random_density(2, &mut rng);
        let b = sampling::random_density(2, &mut rng);
        let w = cost_maps.cost_distance(&a, &b)?;
        worst = worst.max(w - cost_maps.cost_distance_bound(&a, &b));
    }
    checks.push(check(
        SUITE,
        "cost distance vanishes at zero separation and respects its ceiling",
        worst.max(0.0),
        1e-12,
    ));

    Ok(checks)
}
