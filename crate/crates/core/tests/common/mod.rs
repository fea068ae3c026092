//! Shared generators and independent oracles for the integration suites.
#![allow(dead_code)] // each test binary uses its own subset
//! Everything here is deliberately decoupled from the library's own
//! composition routines so the tests compare two genuinely different
//! computational paths.

use qsc_core::blockspace::{delta_hat, SpaceDims};
use qsc_core::cmat::{CMat, C64};
use qsc_core::qsde::{CoeffMatrix, LieAlgElem, SLHTriple};
use qsc_core::random::{gaussian_matrix, haar_unitary, hermitian};
use rand::Rng;

pub fn random_dims<R: Rng>(rng: &mut R, max_h: usize, max_k: usize) -> SpaceDims {
    SpaceDims::new(rng.gen_range(1..=max_h), rng.gen_range(1..=max_k)).unwrap()
}

/// Random well-conditioned invertible gain block: U₁ diag(d) U₂ with
/// d in [0.5, 2], so the condition number stays below 4.
pub fn conditioned_gain<R: Rng>(n: usize, rng: &mut R) -> CMat {
    let u1 = haar_unitary(n, rng);
    let u2 = haar_unitary(n, rng);
    let d = CMat::diag(
        &(0..n)
            .map(|_| C64::new(rng.gen_range(0.5..2.0), 0.0))
            .collect::<Vec<_>>(),
    );
    &(&u1 * &d) * &u2
}

/// Random group element: gaussian K, M, L blocks and a conditioned N.
pub fn random_coeff<R: Rng>(dims: SpaceDims, rng: &mut R) -> CoeffMatrix {
    let nc = dims.coupling_dim();
    CoeffMatrix::from_blocks(
        &gaussian_matrix(dims.n_h, dims.n_h, rng),
        &gaussian_matrix(dims.n_h, nc, rng),
        &gaussian_matrix(nc, dims.n_h, rng),
        &conditioned_gain(nc, rng),
    )
    .unwrap()
}

pub fn random_slh<R: Rng>(dims: SpaceDims, rng: &mut R) -> SLHTriple {
    let nc = dims.coupling_dim();
    SLHTriple::new(
        haar_unitary(nc, rng),
        gaussian_matrix(nc, dims.n_h, rng),
        hermitian(dims.n_h, rng),
    )
    .unwrap()
}

/// Random Lie-algebra element scaled so the full block matrix has
/// Frobenius norm at most `cap`.
pub fn random_lie<R: Rng>(dims: SpaceDims, cap: f64, rng: &mut R) -> LieAlgElem {
    let nc = dims.coupling_dim();
    let raw = LieAlgElem::new(
        gaussian_matrix(dims.n_h, dims.n_h, rng),
        gaussian_matrix(dims.n_h, nc, rng),
        gaussian_matrix(nc, dims.n_h, rng),
        gaussian_matrix(nc, nc, rng),
    )
    .unwrap();
    let norm = raw.full().fro_norm();
    let scale = C64::new(rng.gen_range(0.1..1.0) * cap / norm.max(1e-12), 0.0);
    LieAlgElem::new(
        raw.kappa().scale(scale),
        raw.mu().scale(scale),
        raw.lambda().scale(scale),
        raw.nu().scale(scale),
    )
    .unwrap()
}

/// Defining series of the exponential map, Σ_{n≥1} (1/n!) H (δ̂H)^{n−1},
/// summed until the terms vanish at working precision. Independent of the
/// closed-form evaluation in the library.
pub fn hat_exp_series(h: &LieAlgElem) -> CoeffMatrix {
    let dims = h.dims();
    let full = h.full();
    let dh = delta_hat(dims);
    let step = dh.full() * &full; // δ̂H
    let mut term = full.clone(); // H (δ̂H)^0
    let mut sum = term.scale(C64::new(1.0, 0.0));
    let mut factorial = 1.0f64;
    for n in 2..=60 {
        term = &term * &step;
        factorial *= n as f64;
        let contribution = term.scale(C64::new(1.0 / factorial, 0.0));
        sum = &sum + &contribution;
        if contribution.fro_norm() < 1e-18 {
            break;
        }
    }
    CoeffMatrix::from_g(dims, sum).unwrap()
}

/// Frobenius distance between the block matrices of two coefficient
/// matrices.
pub fn coeff_dist(a: &CoeffMatrix, b: &CoeffMatrix) -> f64 {
    a.g().fro_dist(b.g())
}
