//! Acceptance suite: one test per verification criterion, each printing a
//! single PASS line with the measured figures (run with `--nocapture` to
//! see them). Thresholds are pinned in the asserts.

mod common;

use std::time::Instant;

use common::*;
use qsc_core::blockspace::mat_exp;
use qsc_core::classical::{self, ClassicalModel, SingleModeGenerator};
use qsc_core::cmat::{vdot, CMat, C64, ONE};
use qsc_core::focksim::{
    holevo_experiment, ode_oracle, product_experiment, reference_pair, simulate_trotter,
    trotter_experiment, MatrixElementSpec, Partition, StepFunction,
};
use qsc_core::heisenberg::{
    heis_compose, weyl_ccr_analytic, weyl_ccr_truncated, EuclideanElem, HeisenbergElem,
    TruncatedFock,
};
use qsc_core::qsde::{
    self, belavkin_rep, coeff_to_slh, gl_inverse, hat_exp, hat_log, heisenberg_embed, ito_product,
    lie_to_slh, slh_series, slh_to_coeff, unitarity_residuals, CoeffMatrix, ItoSymbol, LieAlgElem,
};
use qsc_core::random::{gaussian_matrix, gaussian_vector, haar_unitary, hermitian};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[test]
fn criterion_01_series_product_group_laws() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let trials = 1000;
    let (mut worst_assoc, mut worst_inv) = (0.0f64, 0.0f64);
    for _ in 0..trials {
        let dims = random_dims(&mut rng, 3, 2);
        let g1 = random_coeff(dims, &mut rng);
        let g2 = random_coeff(dims, &mut rng);
        let g3 = random_coeff(dims, &mut rng);
        let left = qsde::series(&qsde::series(&g3, &g2).unwrap(), &g1).unwrap();
        let right = qsde::series(&g3, &qsde::series(&g2, &g1).unwrap()).unwrap();
        worst_assoc = worst_assoc.max(coeff_dist(&left, &right));

        let zero = CoeffMatrix::zero(dims);
        assert_eq!(
            qsde::series(&zero, &g1).unwrap(),
            g1,
            "zero must be an exact left identity"
        );
        assert_eq!(
            qsde::series(&g1, &zero).unwrap(),
            g1,
            "zero must be an exact right identity"
        );

        let inv = gl_inverse(&g1).unwrap();
        let p = qsde::series(&g1, &inv).unwrap();
        let q = qsde::series(&inv, &g1).unwrap();
        worst_inv = worst_inv.max(p.g().fro_norm()).max(q.g().fro_norm());
    }
    let elapsed = start.elapsed();
    assert!(
        worst_assoc < 1e-12,
        "associativity residual {worst_assoc:.3e}"
    );
    assert!(worst_inv < 1e-10, "inverse residual {worst_inv:.3e}");
    assert!(
        elapsed.as_secs_f64() < 10.0,
        "group-law suite took {elapsed:?}"
    );
    println!(
        "criterion 01 group laws: PASS (assoc {worst_assoc:.2e}, inverse {worst_inv:.2e}, {trials} trials, {elapsed:?})"
    );
}

#[test]
fn criterion_02_unitary_generator_closure() {
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let trials = 500;
    let (mut worst_residual, mut worst_block) = (0.0f64, 0.0f64);
    for _ in 0..trials {
        let dims = random_dims(&mut rng, 2, 2);
        let a = random_slh(dims, &mut rng);
        let b = random_slh(dims, &mut rng);
        let composite = qsde::series(&slh_to_coeff(&b), &slh_to_coeff(&a)).unwrap();
        let r = unitarity_residuals(&composite);
        worst_residual = worst_residual.max(r.isometry).max(r.coisometry);

        let via_coeff = coeff_to_slh(&composite, 1e-10).unwrap();
        let direct = slh_series(&b, &a).unwrap();
        worst_block = worst_block
            .max(via_coeff.s().fro_dist(direct.s()))
            .max(via_coeff.l().fro_dist(direct.l()))
            .max(via_coeff.h().fro_dist(direct.h()));
    }
    assert!(
        worst_residual < 1e-10,
        "unitarity residual {worst_residual:.3e}"
    );
    assert!(worst_block < 1e-12, "blockwise mismatch {worst_block:.3e}");
    println!(
        "criterion 02 unitary closure: PASS (residual {worst_residual:.2e}, blocks {worst_block:.2e}, {trials} pairs)"
    );
}

#[test]
fn criterion_03_belavkin_homomorphism() {
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    let trials = 500;
    let (mut worst_prod, mut worst_inv) = (0.0f64, 0.0f64);
    for _ in 0..trials {
        let dims = random_dims(&mut rng, 3, 2);
        let g1 = random_coeff(dims, &mut rng);
        let g2 = random_coeff(dims, &mut rng);
        let lhs = &belavkin_rep(&g2) * &belavkin_rep(&g1);
        let rhs = belavkin_rep(&qsde::series(&g2, &g1).unwrap());
        worst_prod = worst_prod.max(lhs.fro_dist(&rhs));

        let id = CMat::identity(lhs.rows());
        let inv_prod = &belavkin_rep(&g1) * &belavkin_rep(&gl_inverse(&g1).unwrap());
        worst_inv = worst_inv.max(inv_prod.fro_dist(&id));
    }
    assert!(worst_prod < 1e-12, "homomorphism residual {worst_prod:.3e}");
    assert!(worst_inv < 1e-10, "inverse residual {worst_inv:.3e}");
    println!(
        "criterion 03 belavkin homomorphism: PASS (product {worst_prod:.2e}, inverse {worst_inv:.2e}, {trials} pairs)"
    );
}

#[test]
fn criterion_04_exponential_map_coherence() {
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let trials = 300;
    let (mut worst_pair, mut worst_log) = (0.0f64, 0.0f64);
    for _ in 0..trials {
        let dims = random_dims(&mut rng, 2, 2);
        let h = random_lie(dims, 1.0, &mut rng);
        let closed = hat_exp(&h).unwrap();
        let series_route = hat_exp_series(&h);
        let rep_route = mat_exp(&h.rep()).unwrap();
        worst_pair = worst_pair
            .max(coeff_dist(&closed, &series_route))
            .max(rep_route.fro_dist(&belavkin_rep(&closed)))
            .max(rep_route.fro_dist(&belavkin_rep(&series_route)));

        let back = hat_log(&closed).unwrap();
        worst_log = worst_log
            .max(back.kappa().fro_dist(h.kappa()))
            .max(back.mu().fro_dist(h.mu()))
            .max(back.lambda().fro_dist(h.lambda()))
            .max(back.nu().fro_dist(h.nu()));
    }
    assert!(worst_pair < 1e-10, "route disagreement {worst_pair:.3e}");
    assert!(worst_log < 1e-8, "log roundtrip {worst_log:.3e}");
    println!(
        "criterion 04 exponential coherence: PASS (routes {worst_pair:.2e}, log roundtrip {worst_log:.2e}, {trials} elements)"
    );
}

#[test]
fn criterion_05_lie_to_slh_consistency() {
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    let trials = 300;
    let mut worst = 0.0f64;
    for _ in 0..trials {
        let dims = random_dims(&mut rng, 2, 2);
        let nc = dims.coupling_dim();
        let eta = hermitian(dims.n_h, &mut rng);
        let sigma_raw = hermitian(nc, &mut rng);
        let cap = rng.gen_range(0.1..2.0);
        let sigma = sigma_raw.scale(c(cap / sigma_raw.fro_norm().max(1e-12), 0.0));
        let lambda = gaussian_matrix(nc, dims.n_h, &mut rng);
        let slh = lie_to_slh(&eta, &lambda, &sigma).unwrap();
        let i = c(0.0, 1.0);
        let h = LieAlgElem::new(
            eta.scale(-i),
            -&lambda.adjoint(),
            lambda.clone(),
            sigma.scale(-i),
        )
        .unwrap();
        worst = worst.max(coeff_dist(&slh_to_coeff(&slh), &hat_exp(&h).unwrap()));
    }
    assert!(worst < 1e-10, "lie-to-scattering residual {worst:.3e}");
    println!("criterion 05 lie-to-slh consistency: PASS (residual {worst:.2e}, {trials} elements)");
}

#[test]
fn criterion_06_heisenberg_reduction_and_weyl_multiplier() {
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    // (a) the special series product reproduces the Heisenberg law for n_h = 1
    let mut worst_theta = 0.0f64;
    for _ in 0..200 {
        let n_k = rng.gen_range(1..=3);
        let elem = |rng: &mut ChaCha8Rng| {
            let phi = gaussian_vector(n_k, rng).iter().map(|z| z * 0.8).collect();
            HeisenbergElem::new(haar_unitary(n_k, rng), phi, rng.gen_range(-2.0..2.0)).unwrap()
        };
        let g2 = elem(&mut rng);
        let g1 = elem(&mut rng);
        let composed = heis_compose(&g2, &g1).unwrap();
        let product = slh_series(&heisenberg_embed(&g2), &heisenberg_embed(&g1)).unwrap();
        worst_theta = worst_theta
            .max((product.h()[(0, 0)] - c(composed.theta, 0.0)).norm())
            .max(product.s().fro_dist(&composed.t))
            .max(product.l().fro_dist(&CMat::column(&composed.phi)));
    }
    assert!(
        worst_theta < 1e-14,
        "Heisenberg reduction residual {worst_theta:.3e}"
    );

    // (b) analytic Weyl multiplier identity, translations capped at norm 2
    // and test vectors at norm 1 as in the group-axiom sweeps
    let capped_vec = |rng: &mut ChaCha8Rng, n: usize, cap: f64| -> Vec<C64> {
        let v = gaussian_vector(n, rng);
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let scale = cap * rng.gen_range(0.2..1.0) / norm.max(1e-12);
        v.into_iter().map(|z| z * scale).collect()
    };
    let mut worst_analytic = 0.0f64;
    for _ in 0..100 {
        let n_k = rng.gen_range(1..=2);
        let g2 = EuclideanElem::new(haar_unitary(n_k, &mut rng), capped_vec(&mut rng, n_k, 2.0))
            .unwrap();
        let g1 = EuclideanElem::new(haar_unitary(n_k, &mut rng), capped_vec(&mut rng, n_k, 2.0))
            .unwrap();
        let pairs: Vec<(Vec<C64>, Vec<C64>)> = (0..3)
            .map(|_| {
                (
                    capped_vec(&mut rng, n_k, 1.0),
                    capped_vec(&mut rng, n_k, 1.0),
                )
            })
            .collect();
        worst_analytic = worst_analytic.max(weyl_ccr_analytic(&g2, &g1, &pairs).unwrap());
    }
    assert!(
        worst_analytic < 1e-12,
        "analytic multiplier residual {worst_analytic:.3e}"
    );

    // (c) truncated-space multiplier at cutoff 12 with capped norms
    let space = TruncatedFock::new(1, 12).unwrap();
    let mut worst_truncated = 0.0f64;
    let capped = |rng: &mut ChaCha8Rng, cap: f64| -> Vec<C64> {
        let v = gaussian_vector(1, rng);
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        v.into_iter()
            .map(|z| z * (cap * rng.gen_range(0.3..1.0) / norm.max(1e-12)))
            .collect()
    };
    for _ in 0..10 {
        let g2 = EuclideanElem::new(haar_unitary(1, &mut rng), capped(&mut rng, 0.5)).unwrap();
        let g1 = EuclideanElem::new(haar_unitary(1, &mut rng), capped(&mut rng, 0.5)).unwrap();
        let pairs: Vec<(Vec<C64>, Vec<C64>)> = (0..3)
            .map(|_| (capped(&mut rng, 0.5), capped(&mut rng, 0.5)))
            .collect();
        worst_truncated =
            worst_truncated.max(weyl_ccr_truncated(&g2, &g1, &pairs, &space).unwrap());
    }
    assert!(
        worst_truncated < 1e-6,
        "truncated multiplier residual {worst_truncated:.3e}"
    );
    println!(
        "criterion 06 heisenberg reduction: PASS (theta {worst_theta:.2e}, analytic {worst_analytic:.2e}, truncated {worst_truncated:.2e})"
    );
}

#[test]
fn criterion_07_classical_suite() {
    let mut rng = ChaCha8Rng::seed_from_u64(707);
    // rho homomorphism on random square models
    let mut worst_rho = 0.0f64;
    for _ in 0..300 {
        let nx = rng.gen_range(1..=3);
        let ports = rng.gen_range(1..=3);
        let model = |rng: &mut ChaCha8Rng| {
            ClassicalModel::new(
                gaussian_matrix(nx, nx, rng),
                gaussian_matrix(nx, ports, rng),
                gaussian_matrix(ports, nx, rng),
                gaussian_matrix(ports, ports, rng),
            )
            .unwrap()
        };
        let v1 = model(&mut rng);
        let v2 = model(&mut rng);
        let lhs = &classical::rho(&v2).unwrap() * &classical::rho(&v1).unwrap();
        let rhs = classical::rho(&classical::series(&v2, &v1).unwrap()).unwrap();
        worst_rho = worst_rho.max(lhs.fro_dist(&rhs));
    }
    assert!(
        worst_rho < 1e-12,
        "rho homomorphism residual {worst_rho:.3e}"
    );

    // product table and brackets, exact
    use SingleModeGenerator::*;
    let zero3 = CMat::zeros(3, 3);
    let prod = |x: SingleModeGenerator, y: SingleModeGenerator| &x.matrix() * &y.matrix();
    assert_eq!(prod(Annihilation, Number), Annihilation.matrix());
    assert_eq!(prod(Annihilation, Creation), Center.matrix());
    assert_eq!(prod(Number, Number), Number.matrix());
    assert_eq!(prod(Number, Creation), Creation.matrix());
    for g in SingleModeGenerator::ALL {
        assert_eq!(prod(Creation, g), zero3);
        assert_eq!(prod(Center, g), zero3);
        assert_eq!(prod(g, Annihilation), zero3);
        assert_eq!(prod(g, Center), zero3);
    }
    assert_eq!(
        classical::generator_bracket(Annihilation, Creation),
        Center.matrix()
    );
    assert_eq!(
        classical::generator_bracket(Annihilation, Number),
        Annihilation.matrix()
    );
    assert_eq!(
        classical::generator_bracket(Number, Creation),
        Creation.matrix()
    );

    // cascade transfer-function factorization at 20 random points
    let mut worst_tf = 0.0f64;
    for _ in 0..5 {
        let (nx1, nx2, n_ports) = (
            rng.gen_range(1..=3),
            rng.gen_range(1..=3),
            rng.gen_range(1..=2),
        );
        let v1 = ClassicalModel::new(
            gaussian_matrix(nx1, nx1, &mut rng),
            gaussian_matrix(nx1, n_ports, &mut rng),
            gaussian_matrix(n_ports, nx1, &mut rng),
            gaussian_matrix(n_ports, n_ports, &mut rng),
        )
        .unwrap();
        let v2 = ClassicalModel::new(
            gaussian_matrix(nx2, nx2, &mut rng),
            gaussian_matrix(nx2, n_ports, &mut rng),
            gaussian_matrix(n_ports, nx2, &mut rng),
            gaussian_matrix(n_ports, n_ports, &mut rng),
        )
        .unwrap();
        let casc = classical::cascade(&v1, &v2).unwrap();
        for _ in 0..20 {
            let s = c(4.0 + rng.gen_range(0.0..2.0), rng.gen_range(-2.0..2.0));
            let lhs = classical::transfer_function(&casc, s).unwrap();
            let rhs = &classical::transfer_function(&v2, s).unwrap()
                * &classical::transfer_function(&v1, s).unwrap();
            worst_tf = worst_tf.max(lhs.fro_dist(&rhs));
        }
    }
    assert!(
        worst_tf < 1e-10,
        "transfer factorization residual {worst_tf:.3e}"
    );

    // RK4 against the closed-form response
    let v = ClassicalModel::new(
        CMat::from_real(&[&[-1.0, 0.4], &[0.0, -2.5]]),
        CMat::from_real(&[&[1.0], &[0.7]]),
        CMat::from_real(&[&[1.0, -0.5]]),
        CMat::scalar(c(0.2, 0.0)),
    )
    .unwrap();
    let grid: Vec<f64> = (0..=50).map(|i| i as f64 * 0.02).collect();
    let u: Vec<Vec<C64>> = (0..50)
        .map(|i| vec![c((i as f64 * 0.1).sin(), 0.0)])
        .collect();
    let x0 = [c(0.3, 0.0), c(-0.1, 0.0)];
    let rk = classical::time_response(&v, &x0, &u, &grid, 20).unwrap();
    let exact = classical::exact_response(&v, &x0, &u, &grid).unwrap();
    let mut worst_rk = 0.0f64;
    for (a, b) in rk.iter().zip(&exact) {
        worst_rk = worst_rk.max((a[0] - b[0]).norm());
    }
    assert!(worst_rk < 1e-6, "RK4 deviation {worst_rk:.3e}");
    println!(
        "criterion 07 classical suite: PASS (rho {worst_rho:.2e}, transfer {worst_tf:.2e}, rk4 {worst_rk:.2e})"
    );
}

#[test]
fn criterion_08_trotter_series_product() {
    let start = Instant::now();
    let (g2, g1, spec, t) = reference_pair();
    let grid: Vec<usize> = (4..=10).map(|k| 1usize << k).collect();
    let rows = trotter_experiment(&g2, &g1, &spec, t, &grid).unwrap();

    // monotone nonincreasing from m = 32 on
    for w in rows
        .iter()
        .filter(|r| r.m >= 32)
        .collect::<Vec<_>>()
        .windows(2)
    {
        assert!(
            w[1].abs_error <= w[0].abs_error,
            "error grew from m={} ({:.3e}) to m={} ({:.3e})",
            w[0].m,
            w[0].abs_error,
            w[1].m,
            w[1].abs_error
        );
    }
    let final_err = rows.last().unwrap().abs_error;
    assert!(final_err < 1e-3, "final error {final_err:.3e}");

    // log-log regression slope of error against slice count
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for r in &rows {
        let (x, y) = ((r.m as f64).ln(), r.abs_error.ln());
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    let n = rows.len() as f64;
    let order = -(n * sxy - sx * sy) / (n * sxx - sx * sx);
    assert!(order >= 0.8, "empirical order {order:.3}");

    // control run against the wrong composition order must stall
    let wrong_target = qsde::series(&g1, &g2).unwrap();
    let control = product_experiment(&[&g2, &g1], &wrong_target, &spec, t, &grid).unwrap();
    let control_floor = control
        .iter()
        .map(|r| r.abs_error)
        .fold(f64::INFINITY, f64::min);
    assert!(
        control_floor > 10.0 * final_err,
        "control floor {control_floor:.3e} vs 10x final {final_err:.3e}"
    );
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs_f64() < 60.0,
        "trotter experiment took {elapsed:?}"
    );
    println!(
        "criterion 08 trotter convergence: PASS (err(2^10) {final_err:.2e}, order {order:.3}, control floor {control_floor:.2e}, {elapsed:?})"
    );
}

#[test]
fn criterion_09_trotter_special_cases() {
    // classical Lie-Trotter: drift-only generators
    let k1 = CMat::from_rows(&[
        vec![c(0.0, 0.0), c(0.04, 0.0)],
        vec![c(-0.04, 0.0), c(0.0, 0.0)],
    ])
    .unwrap();
    let k2 = CMat::from_rows(&[
        vec![c(-0.03, 0.0), c(0.0, 0.0)],
        vec![c(0.0, 0.0), c(0.05, 0.0)],
    ])
    .unwrap();
    let drift = |k: &CMat| {
        CoeffMatrix::from_blocks(
            k,
            &CMat::zeros(2, 2),
            &CMat::zeros(2, 2),
            &CMat::identity(2),
        )
        .unwrap()
    };
    let (g1, g2) = (drift(&k1), drift(&k2));
    let spec = MatrixElementSpec::vacuum(
        vec![c(1.0, 0.0), c(0.0, 0.0)],
        vec![c(0.8, 0.0), c(0.6, 0.0)],
        1,
    )
    .unwrap();
    let p = Partition::uniform(0.0, 1.0, 1024).unwrap();
    let sim = simulate_trotter(&g2, &g1, &p, &spec).unwrap();
    let want = vdot(&spec.u, &mat_exp(&(&k1 + &k2)).unwrap().mul_vec(&spec.v));
    let classical_err = (sim - want).norm();
    assert!(
        classical_err < 1e-6,
        "classical limit error {classical_err:.3e}"
    );

    // separate channels: ampliated pair converges to the concatenation
    let h1 = CMat::from_rows(&[
        vec![c(0.2, 0.0), c(0.0, 0.1)],
        vec![c(0.0, -0.1), c(-0.2, 0.0)],
    ])
    .unwrap();
    let slh1 =
        qsde::SLHTriple::new(CMat::identity(2), CMat::identity(2).scale(c(0.8, 0.0)), h1).unwrap();
    let h2 = CMat::from_rows(&[
        vec![c(-0.1, 0.0), c(0.3, 0.0)],
        vec![c(0.3, 0.0), c(0.4, 0.0)],
    ])
    .unwrap();
    let slh2 = qsde::SLHTriple::new(
        CMat::identity(2).scale(c(0.0, 1.0)),
        CMat::identity(2).scale(c(0.0, 0.6)),
        h2,
    )
    .unwrap();
    let (ga, gb) = (slh_to_coeff(&slh1), slh_to_coeff(&slh2));
    let cat = qsde::concat(&ga, &gb).unwrap();
    let a1 = qsde::ampliate(&ga, 0, 2);
    let a2 = qsde::ampliate(&gb, 1, 2);
    let spec2 = MatrixElementSpec::new(
        vec![c(1.0, 0.0), c(0.0, 0.0)],
        vec![c(0.6, 0.0), c(0.8, 0.0)],
        StepFunction::constant(vec![c(0.3, 0.1), c(-0.2, 0.2)]),
        StepFunction::constant(vec![c(0.1, -0.4), c(0.25, 0.0)]),
    )
    .unwrap();
    let grid: Vec<usize> = (5..=10).map(|k| 1usize << k).collect();
    let rows = product_experiment(&[&a2, &a1], &cat, &spec2, 1.0, &grid).unwrap();
    let concat_err = rows.last().unwrap().abs_error;
    assert!(
        concat_err < 1e-3,
        "separate-channels error {concat_err:.3e}"
    );
    println!(
        "criterion 09 special cases: PASS (classical {classical_err:.2e}, separate channels {concat_err:.2e})"
    );
}

#[test]
fn criterion_10_holevo_exponential() {
    let h = LieAlgElem::scalar(c(-0.3, 0.2), c(0.5, 0.1), c(0.4, -0.3), c(0.1, 0.6));
    let spec = MatrixElementSpec::new(
        vec![ONE],
        vec![c(0.7, 0.2)],
        StepFunction::constant(vec![c(0.3, -0.2)]),
        StepFunction::constant(vec![c(-0.1, 0.45)]),
    )
    .unwrap();
    let grid: Vec<usize> = (5..=10).map(|k| 1usize << k).collect();
    let rows = holevo_experiment(&h, &spec, 1.0, &grid).unwrap();
    let err = rows.last().unwrap().abs_error;
    assert!(err < 1e-3, "Holevo limit error {err:.3e}");

    // second scalar fixture with a rotating gauge part
    let h2 = LieAlgElem::scalar(c(0.1, -0.4), c(-0.2, 0.3), c(0.6, 0.0), c(0.0, -0.8));
    let rows2 = holevo_experiment(&h2, &spec, 1.0, &grid).unwrap();
    let err2 = rows2.last().unwrap().abs_error;
    assert!(
        err2 < 1e-3,
        "Holevo limit error (second fixture) {err2:.3e}"
    );
    println!("criterion 10 holevo exponential: PASS (errors {err:.2e}, {err2:.2e})");
}

#[test]
fn criterion_11_ito_table() {
    let n_k = 1;
    let sym = |a, b| ItoSymbol::new(a, b, n_k).unwrap();
    let (dt, da, da_dag, dn) = (sym(0, 0), sym(0, 1), sym(1, 0), sym(1, 1));
    // rows and columns ordered dA, dLambda, dA†, dt as in the table
    let order = [da, dn, da_dag, dt];
    let expected: [[Option<ItoSymbol>; 4]; 4] = [
        [None, Some(da), Some(dt), None],
        [None, Some(dn), Some(da_dag), None],
        [None, None, None, None],
        [None, None, None, None],
    ];
    let mut checked = 0;
    for (i, x) in order.iter().enumerate() {
        for (j, y) in order.iter().enumerate() {
            assert_eq!(ito_product(x, y), expected[i][j], "table entry ({i},{j})");
            checked += 1;
        }
    }
    assert_eq!(checked, 16);

    // multichannel delta structure
    let m = 3;
    let lam = |a, b| ItoSymbol::new(a, b, m).unwrap();
    assert_eq!(ito_product(&lam(1, 2), &lam(2, 3)), Some(lam(1, 3)));
    assert_eq!(ito_product(&lam(0, 1), &lam(1, 0)), Some(lam(0, 0)));
    assert_eq!(ito_product(&lam(2, 0), &lam(0, 2)), None);
    println!("criterion 11 ito table: PASS (16 entries exact)");
}

// Partition-independence within the convergence envelope: random
// partitions with comparable grid size land at comparable distance from
// the oracle.
#[test]
fn random_partitions_stay_in_the_convergence_envelope() {
    let (g2, g1, spec, t) = reference_pair();
    let series = qsde::series(&g2, &g1).unwrap();
    let target = ode_oracle(&series, &spec, 0.0, t).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(909);
    for _ in 0..5 {
        let mut points: Vec<f64> = (0..400).map(|_| rng.gen_range(0.0..t)).collect();
        points.sort_by(|a, b| a.partial_cmp(b).unwrap());
        points.dedup_by(|a, b| (*a - *b).abs() < 1e-6);
        let p = Partition::new(0.0, t, points).unwrap();
        let sim = simulate_trotter(&g2, &g1, &p, &spec).unwrap();
        let err = (sim - target).norm();
        let envelope = 2.0 * p.grid_size();
        assert!(
            err < envelope,
            "error {err:.3e} outside envelope {envelope:.3e}"
        );
    }
    println!("partition independence: PASS");
}
