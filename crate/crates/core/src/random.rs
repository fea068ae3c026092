//! Seedable random matrix generators used by the verification drivers and
//! the property suites.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::cmat::{CMat, C64};

pub fn gaussian_complex<R: Rng>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im)
}

pub fn gaussian_matrix<R: Rng>(rows: usize, cols: usize, rng: &mut R) -> CMat {
    CMat::from_fn(rows, cols, |_, _| gaussian_complex(rng))
}

pub fn gaussian_vector<R: Rng>(len: usize, rng: &mut R) -> Vec<C64> {
    (0..len).map(|_| gaussian_complex(rng)).collect()
}

/// Haar-ish random unitary: QR of a complex Gaussian matrix via modified
/// Gram-Schmidt, run twice for orthogonality at working precision.
pub fn haar_unitary<R: Rng>(n: usize, rng: &mut R) -> CMat {
    let g = gaussian_matrix(n, n, rng);
    let mut cols: Vec<Vec<C64>> = (0..n).map(|j| g.column_vec(j)).collect();
    for _pass in 0..2 {
        for j in 0..n {
            for i in 0..j {
                let proj = crate::cmat::vdot(&cols[i], &cols[j]);
                let basis = cols[i].clone();
                for (cj, bi) in cols[j].iter_mut().zip(&basis) {
                    *cj -= proj * bi;
                }
            }
            let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            for z in cols[j].iter_mut() {
                *z /= norm;
            }
        }
    }
    CMat::from_fn(n, n, |i, j| cols[j][i])
}

/// Random Hermitian matrix (A + A†)/2 of a complex Gaussian A.
pub fn hermitian<R: Rng>(n: usize, rng: &mut R) -> CMat {
    let a = gaussian_matrix(n, n, rng);
    (&a + &a.adjoint()).scale(C64::new(0.5, 0.0))
}
