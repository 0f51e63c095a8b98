//! Acceptance suite: ten end-to-end checks of the library against closed
//! forms, transport certificates, product-geometry invariants, symbol
//! calculus, and the simplex embedding. Each test prints one summary line
//! on success and fails with full diagnostics otherwise.

use specdist_core::berezin::{BerezinMaps, SphereQuadrature};
use specdist_core::matrix::{bloch_density, hermitian_eig, pauli_basis, trace_inner, CMatrix};
use specdist_core::oracles;
use specdist_core::pythagoras::two_two_point_element;
use specdist_core::sampling;
use specdist_core::solver::{DistanceEngine, SolveOptions};
use specdist_core::tetra::{marginal_projection, projection_residual, square_embedding, tetra_embed};
use specdist_core::tol;
use specdist_core::transport::kantorovich;
use specdist_core::triple::{
    bloch_triples, finite_metric_triple, full_matrix_triple, peres_partial_transpose,
    simplex3_triple, state_from_bloch, state_from_simplex, two_point_state, two_point_triple,
    Algebra, FiniteSpectralTriple, Sector, State,
};
use specdist_core::{OperatorExtension, ProductLab};

fn opts() -> SolveOptions {
    SolveOptions::default()
}

fn rel_err(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs().max(1e-12)
}

fn pure_state(alg: &Algebra, i: usize) -> State {
    let mut p = vec![0.0; alg.dim()];
    p[i] = 1.0;
    State::from_simplex(alg, &p).expect("vertex states are valid")
}

#[test]
fn criterion_01_closed_form_families() {
    let opts = opts();
    let mut rng = sampling::rng(101);
    let mut worst: f64 = 0.0;
    let pairs_per_family = 200;

    // two-point spaces at two length scales
    for lambda in [0.25, 1.6] {
        let triple = two_point_triple(lambda).unwrap();
        let engine = DistanceEngine::new(&triple).unwrap();
        for _ in 0..pairs_per_family / 2 {
            let [t1, t2]: [f64; 2] = sampling::random_coeffs(2, &mut rng).try_into().unwrap();
            let phi = two_point_state(triple.algebra(), t1).unwrap();
            let psi = two_point_state(triple.algebra(), t2).unwrap();
            let got = engine.distance(&phi, &psi, &opts).unwrap().value;
            worst = worst.max(rel_err(got, oracles::two_point_distance(lambda, t1, t2)));
        }
    }

    // three-point simplex: max coordinate difference
    let triple = simplex3_triple();
    let engine = DistanceEngine::new(&triple).unwrap();
    for _ in 0..pairs_per_family {
        let p = sampling::random_simplex(3, &mut rng);
        let q = sampling::random_simplex(3, &mut rng);
        let phi = state_from_simplex(triple.algebra(), &p).unwrap();
        let psi = state_from_simplex(triple.algebra(), &q).unwrap();
        let got = engine.distance(&phi, &psi, &opts).unwrap().value;
        let want = oracles::simplex3_distance(&[p[0], p[1], p[2]], &[q[0], q[1], q[2]]);
        worst = worst.max(rel_err(got, want));
    }

    // pure states on random metric spaces
    let mut done = 0;
    while done < pairs_per_family {
        let n = 4 + (done / 40) % 4;
        let metric = sampling::random_metric(n, &mut rng);
        let triple = finite_metric_triple(&metric);
        let engine = DistanceEngine::new(&triple).unwrap();
        for _ in 0..20 {
            let i = done % n;
            let j = (i + 1 + done % (n - 1)) % n;
            let got = engine
                .distance(&pure_state(triple.algebra(), i), &pure_state(triple.algebra(), j), &opts)
                .unwrap()
                .value;
            worst = worst.max(rel_err(got, oracles::finite_metric_pure_distance(&metric, i, j)));
            done += 1;
        }
    }

    // the three Bloch-ball geometries
    let bloch = bloch_triples();
    for (triple, oracle) in [
        (&bloch.conjugation, oracles::bloch_conjugation_distance as fn(&[f64; 3], &[f64; 3]) -> f64),
        (&bloch.flip, oracles::bloch_flip_distance),
        (&bloch.truncated_moyal, oracles::bloch_truncated_moyal_distance),
    ] {
        let engine = DistanceEngine::new(triple).unwrap();
        for _ in 0..pairs_per_family {
            let x = sampling::random_bloch_ball(&mut rng);
            let y = sampling::random_bloch_ball(&mut rng);
            let phi = state_from_bloch(triple.algebra(), &x).unwrap();
            let psi = state_from_bloch(triple.algebra(), &y).unwrap();
            let got = engine.distance(&phi, &psi, &opts).unwrap().value;
            worst = worst.max(rel_err(got, oracle(&x, &y)));
        }
    }

    // products of two two-point spaces on product states
    let (lambda, mu) = (0.5, 0.8);
    let lab = ProductLab::from_factors(
        &two_point_triple(lambda).unwrap(),
        &two_point_triple(mu).unwrap(),
    )
    .unwrap();
    for _ in 0..pairs_per_family {
        let [t1, t2, s1, s2]: [f64; 4] =
            sampling::random_coeffs(4, &mut rng).try_into().unwrap();
        let phi = lab.structure().product_state(
            &two_point_state(lab.structure().left().algebra(), t1).unwrap(),
            &two_point_state(lab.structure().right().algebra(), t2).unwrap(),
        );
        let psi = lab.structure().product_state(
            &two_point_state(lab.structure().left().algebra(), s1).unwrap(),
            &two_point_state(lab.structure().right().algebra(), s2).unwrap(),
        );
        let got = lab.combined_engine().distance(&phi, &psi, &opts).unwrap().value;
        let want = oracles::two_two_point_product_distance(lambda, mu, (t1, t2), (s1, s2));
        worst = worst.max(rel_err(got, want));
    }

    assert!(
        worst <= tol::ACCEPTANCE_ORACLE_REL,
        "worst closed-form deviation {worst:.3e} exceeds {:.0e}",
        tol::ACCEPTANCE_ORACLE_REL
    );
    println!(
        "criterion 1: pass — 7 closed-form families x {pairs_per_family} random pairs, \
         max relative error {worst:.2e} (bound {:.0e})",
        tol::ACCEPTANCE_ORACLE_REL
    );
}

#[test]
fn criterion_02_transport_agrees_with_the_engine() {
    let opts = opts();
    let mut rng = sampling::rng(202);
    let mut worst_rel: f64 = 0.0;
    let mut worst_gap: f64 = 0.0;
    let spaces = 50;
    for k in 0..spaces {
        let n = 3 + k % 10; // sizes 3..=12
        let metric = sampling::random_metric(n, &mut rng);
        let triple = finite_metric_triple(&metric);
        let engine = DistanceEngine::new(&triple).unwrap();
        for _ in 0..2 {
            let p = sampling::random_simplex(n, &mut rng);
            let q = sampling::random_simplex(n, &mut rng);
            let plan = kantorovich(&metric, &p, &q).unwrap();
            let dual: f64 = plan.dual_a.iter().zip(&p).map(|(a, w)| a * w).sum::<f64>()
                + plan.dual_b.iter().zip(&q).map(|(b, w)| b * w).sum::<f64>();
            worst_gap = worst_gap.max((plan.value - dual).abs());
            let phi = state_from_simplex(triple.algebra(), &p).unwrap();
            let psi = state_from_simplex(triple.algebra(), &q).unwrap();
            let spectral = engine.distance(&phi, &psi, &opts).unwrap().value;
            worst_rel = worst_rel.max(rel_err(spectral, plan.value));
        }
    }
    assert!(worst_rel <= tol::ACCEPTANCE_ORACLE_REL, "LP vs engine {worst_rel:.3e}");
    assert!(worst_gap <= tol::TRANSPORT_GAP, "duality gap {worst_gap:.3e}");
    println!(
        "criterion 2: pass — {spaces} random metric spaces (sizes 3..=12), \
         LP vs engine max relative error {worst_rel:.2e}, max duality gap {worst_gap:.2e}"
    );
}

#[test]
fn criterion_03_sandwich_on_random_products() {
    let opts = opts();
    let mut rng = sampling::rng(303);
    let triples = 100;
    let pairs = 10;
    let mut worst_low: f64 = 0.0;
    let mut worst_high: f64 = 0.0;
    for k in 0..triples {
        let n1 = 2 + k % 3;
        let n2 = 2 + (k / 3) % 3;
        let left = sampling::random_even_diagonal_triple(n1, "left", &mut rng);
        let right = if k % 2 == 0 {
            sampling::random_odd_diagonal_triple(n2, "right", &mut rng)
        } else {
            sampling::random_even_diagonal_triple(n2, "right", &mut rng)
        };
        let lab = ProductLab::from_factors(&left, &right).unwrap();
        for _ in 0..pairs {
            let phi = lab.structure().product_state(
                &state_from_simplex(left.algebra(), &sampling::random_simplex(n1, &mut rng))
                    .unwrap(),
                &state_from_simplex(right.algebra(), &sampling::random_simplex(n2, &mut rng))
                    .unwrap(),
            );
            let psi = lab.structure().product_state(
                &state_from_simplex(left.algebra(), &sampling::random_simplex(n1, &mut rng))
                    .unwrap(),
                &state_from_simplex(right.algebra(), &sampling::random_simplex(n2, &mut rng))
                    .unwrap(),
            );
            let report = lab.check(&phi, &psi, &opts).unwrap();
            report.ensure_valid().unwrap_or_else(|e| {
                panic!("sandwich excursion on factors ({n1},{n2}): {e}\nfull report: {report:?}")
            });
            if report.d_product.is_finite() && report.d_product > 0.0 {
                worst_low = worst_low.max(1.0 - report.ratio);
                worst_high = worst_high.max(report.ratio - std::f64::consts::SQRT_2);
            }
        }
    }
    assert!(worst_low <= 1e-4 && worst_high <= 1e-4);
    println!(
        "criterion 3: pass — {triples} random even x arbitrary products x {pairs} product-state \
         pairs, ratio within [1 - {:.1e}, sqrt2 + {:.1e}]",
        worst_low.max(0.0),
        worst_high.max(0.0)
    );
}

#[test]
fn criterion_04_pythagoras_equalities() {
    // two-point x two-point over a 9x9 grid of product states
    let opts = opts();
    let lab = ProductLab::from_factors(
        &two_point_triple(0.5).unwrap(),
        &two_point_triple(0.5).unwrap(),
    )
    .unwrap();
    let params: Vec<f64> = (0..9).map(|i| -1.0 + 2.0 * i as f64 / 8.0).collect();
    let mut states = Vec::with_capacity(81);
    for &t in &params {
        for &s in &params {
            states.push(lab.structure().product_state(
                &two_point_state(lab.structure().left().algebra(), t).unwrap(),
                &two_point_state(lab.structure().right().algebra(), s).unwrap(),
            ));
        }
    }
    let mut worst_grid: f64 = 0.0;
    for i in 0..states.len() {
        for j in (i + 1)..states.len() {
            let report = lab.check(&states[i], &states[j], &opts).unwrap();
            worst_grid = worst_grid.max((report.ratio - 1.0).abs());
        }
    }
    assert!(
        worst_grid <= tol::PYTHAGORAS_EQUALITY,
        "grid equality deviation {worst_grid:.3e}"
    );

    // products of two finite metric spaces over all pure product pairs
    let bulk = opts;
    let mut rng = sampling::rng(404);
    let mut worst_metric: f64 = 0.0;
    for (n1, n2) in [(3, 4), (5, 3), (4, 5)] {
        let left = finite_metric_triple(&sampling::random_metric(n1, &mut rng));
        let right = finite_metric_triple(&sampling::random_metric(n2, &mut rng));
        let lab = ProductLab::from_factors(&left, &right).unwrap();
        let mut pure = Vec::with_capacity(n1 * n2);
        for i in 0..n1 {
            for j in 0..n2 {
                pure.push(lab.structure().product_state(
                    &pure_state(left.algebra(), i),
                    &pure_state(right.algebra(), j),
                ));
            }
        }
        for a in 0..pure.len() {
            for b in (a + 1)..pure.len() {
                let report = lab.check(&pure[a], &pure[b], &bulk).unwrap();
                worst_metric = worst_metric.max((report.ratio - 1.0).abs());
            }
        }
    }
    assert!(
        worst_metric <= tol::PYTHAGORAS_EQUALITY,
        "pure-pair equality deviation {worst_metric:.3e}"
    );
    println!(
        "criterion 4: pass — 9x9 two-point grid (3240 pairs, max |ratio-1| {worst_grid:.2e}) \
         and three finite x finite products over all pure pairs (max |ratio-1| {worst_metric:.2e})"
    );
}

#[test]
fn criterion_05_duality_and_infinite_detection() {
    let opts = opts();
    let mut rng = sampling::rng(505);

    // matrix algebra with multiplicity two and a generic (connected) Dirac
    let dirac = sampling::random_hermitian(4, &mut rng);
    let triple = full_matrix_triple(2, 2, dirac).unwrap();
    let engine = DistanceEngine::new(&triple).unwrap();
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let phi = State::from_density(triple.algebra(), sampling::random_density(2, &mut rng))
            .unwrap();
        let psi = State::from_density(triple.algebra(), sampling::random_density(2, &mut rng))
            .unwrap();
        let primal = engine.distance(&phi, &psi, &opts).unwrap().value;
        let dual = engine.distance_dual(&phi, &psi, &opts).unwrap().value;
        assert!(primal.is_finite(), "generic Dirac must connect the state space");
        worst = worst.max(rel_err(primal, dual));
    }
    assert!(
        worst <= tol::ACCEPTANCE_ORACLE_REL,
        "primal/dual disagreement {worst:.3e}"
    );

    // a vanishing Dirac makes every direction commute: any two distinct
    // states are infinitely far, a state stays at distance zero from itself
    let frozen = full_matrix_triple(2, 2, CMatrix::zeros(4, 4)).unwrap();
    let engine0 = DistanceEngine::new(&frozen).unwrap();
    let phi = State::from_density(frozen.algebra(), sampling::random_density(2, &mut rng))
        .unwrap();
    let psi = State::from_density(frozen.algebra(), sampling::random_density(2, &mut rng))
        .unwrap();
    assert!(engine0.distance(&phi, &psi, &opts).unwrap().value.is_infinite());
    assert_eq!(engine0.distance(&phi, &phi, &opts).unwrap().value, 0.0);

    // partially coupled diagonal triple: the third point is its own
    // component, so the distance is infinite exactly when the third
    // weight differs
    let algebra = Algebra::diagonal(3);
    let rep = algebra.basis().to_vec();
    let dirac = CMatrix::from_real_rows(&[
        vec![0.0, 1.0, 0.0],
        vec![1.0, 0.0, 0.0],
        vec![0.0, 0.0, 0.0],
    ]);
    let partial = FiniteSpectralTriple::new(
        "partially coupled".into(),
        algebra,
        vec![Sector::operator(dirac, None, rep)],
    )
    .unwrap();
    let engine_p = DistanceEngine::new(&partial).unwrap();
    let same_tail = |a: f64, w: f64| {
        state_from_simplex(partial.algebra(), &[a * (1.0 - w), (1.0 - a) * (1.0 - w), w])
            .unwrap()
    };
    let finite = engine_p
        .distance(&same_tail(0.8, 0.3), &same_tail(0.2, 0.3), &opts)
        .unwrap()
        .value;
    assert!(finite.is_finite() && finite > 0.0);
    let infinite = engine_p
        .distance(&same_tail(0.8, 0.3), &same_tail(0.8, 0.4), &opts)
        .unwrap()
        .value;
    assert!(infinite.is_infinite());

    println!(
        "criterion 5: pass — primal vs dual max relative error {worst:.2e} over 100 pairs on \
         the multiplicity-two matrix algebra; infinite-distance detection fires exactly on \
         separating commutant directions"
    );
}

#[test]
fn criterion_06_exact_identities() {
    // factor seminorms add in squares on sum elements
    let labs = [
        ProductLab::from_factors(
            &two_point_triple(0.5).unwrap(),
            &two_point_triple(0.5).unwrap(),
        )
        .unwrap(),
        ProductLab::from_factors(&two_point_triple(0.7).unwrap(), &simplex3_triple()).unwrap(),
    ];
    let mut rng = sampling::rng(606);
    let mut worst_sum: f64 = 0.0;
    for lab in &labs {
        let m1 = lab.structure().left().algebra().len();
        let m2 = lab.structure().right().algebra().len();
        for _ in 0..250 {
            let a1 = sampling::random_coeffs(m1, &mut rng);
            let a2 = sampling::random_coeffs(m2, &mut rng);
            worst_sum = worst_sum.max(lab.sum_of_squares_deviation(&a1, &a2).unwrap());
        }
    }
    assert!(
        worst_sum <= tol::SUM_OF_SQUARES_IDENTITY,
        "sum-of-squares deviation {worst_sum:.3e}"
    );

    // the closed-form Lipschitz seminorm on a product of two two-point
    // spaces equals the computed operator norm
    let lab = &labs[0];
    let mut worst_lip: f64 = 0.0;
    for _ in 0..500 {
        let x: [f64; 4] = sampling::random_coeffs(4, &mut rng).try_into().unwrap();
        let [phi1, psi2]: [f64; 2] = sampling::random_coeffs(2, &mut rng).try_into().unwrap();
        let coeffs = two_two_point_element(&x, phi1, psi2);
        let got = lab.combined_engine().seminorm(&coeffs).unwrap();
        let want = oracles::two_two_point_lipnorm(&x, phi1, psi2);
        worst_lip = worst_lip.max((got - want).abs() / want.max(1.0));
    }
    assert!(
        worst_lip <= tol::LIPNORM_MATCH,
        "seminorm closed-form deviation {worst_lip:.3e}"
    );
    println!(
        "criterion 6: pass — sum-of-squares identity within {worst_sum:.2e} on 500 random \
         element pairs; closed-form seminorm within {worst_lip:.2e} on 500 random elements"
    );
}

#[test]
fn criterion_07_extension_norm_bounds() {
    let mut rng = sampling::rng(707);
    let mut low: f64 = f64::INFINITY;
    let mut high: f64 = 0.0;
    for _ in 0..25 {
        let ext = OperatorExtension::new(
            sampling::random_density(2, &mut rng),
            sampling::random_density(2, &mut rng),
        )
        .unwrap();
        let estimate = ext.norm_estimate(64, 7070).unwrap().estimate;
        low = low.min(estimate);
        high = high.max(estimate);
    }
    assert!(low >= 1.0 - 1e-9, "estimate {low} fell below the floor");
    assert!(high <= 3.0 + 1e-9, "estimate {high} exceeded the ceiling");

    // both marginals pinned to an extreme point: the sign witness attains 3
    let extreme = OperatorExtension::new(
        CMatrix::real_diag(&[0.0, 1.0]),
        CMatrix::real_diag(&[0.0, 1.0]),
    )
    .unwrap();
    let estimate = extreme.norm_estimate(64, 7071).unwrap();
    assert!((estimate.witness_ratio - 3.0).abs() <= 1e-9);
    assert!((estimate.estimate - 3.0).abs() <= 1e-9);
    println!(
        "criterion 7: pass — 25 sampled extension norms in [{low:.6}, {high:.6}] inside \
         [1, 3]; the extreme-point witness attains 3 exactly"
    );
}

#[test]
fn criterion_08_entanglement_witness_and_purified_distance() {
    // maximally entangled two-qubit state: partial transposition exposes
    // the negative eigenvalue -1/2
    let mut bell = CMatrix::zeros(4, 4);
    for (i, j) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
        bell[(i, j)] = specdist_core::C64::new(0.5, 0.0);
    }
    let transposed = peres_partial_transpose(&bell, 2, 2);
    let min_eig = hermitian_eig(&transposed).unwrap().values[0];
    assert!(
        (min_eig + 0.5).abs() <= 1e-12,
        "partial transpose minimum eigenvalue {min_eig}"
    );

    // purified distance between pure qubits is half the Bloch chord
    let mut rng = sampling::rng(808);
    let sigma = pauli_basis();
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let v = sampling::random_unit_vector(2, &mut rng);
        let w = sampling::random_unit_vector(2, &mut rng);
        let bloch = |u: &[specdist_core::C64]| -> [f64; 3] {
            let rho = CMatrix::from_fn(2, 2, |i, j| u[i] * u[j].conj());
            [
                trace_inner(&sigma[1], &rho).re,
                trace_inner(&sigma[2], &rho).re,
                trace_inner(&sigma[3], &rho).re,
            ]
        };
        let x = bloch(&v);
        let y = bloch(&w);
        let chord =
            ((x[0] - y[0]).powi(2) + (x[1] - y[1]).powi(2) + (x[2] - y[2]).powi(2)).sqrt();
        let got = oracles::purified_distance_pure(&v, &w);
        worst = worst.max((got - chord / 2.0).abs());
    }
    assert!(worst <= 1e-12, "purified-distance deviation {worst:.3e}");
    println!(
        "criterion 8: pass — partial-transpose eigenvalue -1/2 within 1e-12; purified \
         distance equals half the Bloch chord within {worst:.2e} on 100 pure pairs"
    );
}

#[test]
fn criterion_09_symbol_calculus_and_cost_distance() {
    let maps = BerezinMaps::qubit(SphereQuadrature::fibonacci(800).unwrap()).unwrap();
    let n = maps.quadrature().len();

    let ones = vec![specdist_core::C64::new(1.0, 0.0); n];
    let identity_residual = maps
        .quantize(&ones)
        .unwrap()
        .add(&CMatrix::identity(2).scale_real(-1.0))
        .frobenius_norm();
    assert!(identity_residual <= 5e-3, "Q(1) residual {identity_residual:.3e}");

    let mut rng = sampling::rng(909);
    let mut worst_adjoint: f64 = 0.0;
    for _ in 0..5 {
        let a = sampling::random_matrix(2, &mut rng);
        let f: Vec<specdist_core::C64> =
            (0..n).map(|_| sampling::random_complex(&mut rng)).collect();
        worst_adjoint = worst_adjoint.max(maps.adjointness_residual(&a, &f).unwrap());
    }
    assert!(worst_adjoint <= tol::ADJOINTNESS, "adjointness {worst_adjoint:.3e}");

    // transport between coherent-state symbols scales with the chordal
    // distance of the underlying sphere points; the constant is recorded
    let mut ratios = Vec::with_capacity(20);
    for _ in 0..20 {
        let x = sampling::random_bloch_sphere(&mut rng);
        let y = sampling::random_bloch_sphere(&mut rng);
        let chord =
            ((x[0] - y[0]).powi(2) + (x[1] - y[1]).powi(2) + (x[2] - y[2]).powi(2)).sqrt();
        let w = maps
            .cost_distance(&bloch_density(&x), &bloch_density(&y))
            .unwrap();
        ratios.push(w / chord);
    }
    let lo = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = ratios.iter().copied().fold(0.0f64, f64::max);
    let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
    assert!(
        hi / lo - 1.0 <= 0.03,
        "cost-distance ratio spread {:.3}% exceeds 3%",
        (hi / lo - 1.0) * 100.0
    );
    println!(
        "criterion 9: pass — Q(1) residual {identity_residual:.2e}, adjointness \
         {worst_adjoint:.2e}, cost-distance/chord constant {mean:.6} (spread {:.3}%) over \
         20 coherent pairs at resolution 800",
        (hi / lo - 1.0) * 100.0
    );
}

#[test]
fn criterion_10_simplex_embedding() {
    // dyadic 9x9 parameter grid: the embedded surface is (t, s, t*s)
    // exactly (every operation is exact dyadic arithmetic)
    for i in 0..9 {
        for j in 0..9 {
            let t = -1.0 + 2.0 * i as f64 / 8.0;
            let s = -1.0 + 2.0 * j as f64 / 8.0;
            let image = tetra_embed(&square_embedding(t, s));
            assert_eq!(image, [t, s, t * s], "surface sample at ({t}, {s})");
        }
    }

    // the product-of-marginals projection is vertical
    let mut rng = sampling::rng(1010);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let p: [f64; 4] = sampling::random_simplex(4, &mut rng).try_into().unwrap();
        worst = worst.max(projection_residual(&p));
        let flat = marginal_projection(&p);
        let image = tetra_embed(&flat);
        assert!((image[2] - image[0] * image[1]).abs() <= 1e-12);
    }
    assert!(worst <= tol::MARGINAL_PROJECTION, "projection residual {worst:.3e}");
    println!(
        "criterion 10: pass — 81 dyadic surface samples exact; marginal projection preserves \
         coordinates within {worst:.2e} on 100 random states"
    );
}
