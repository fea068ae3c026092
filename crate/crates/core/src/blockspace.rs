//! Block-structured operators on h ⊕ (h⊗K) and the dense matrix-function
//! kernel: matrix exponential, the entire functions e₁(z) = (e^z−1)/z and
//! e₂(z) = (e^z−1−z)/z², and a restricted principal logarithm.
//!
//! The tensor factor h⊗K is indexed h-major throughout the crate:
//! basis vector (i, j) of h⊗K sits at flat index `i * n_k + j`. Every
//! module relies on this ordering for block composition to be exact.

use faer::Mat as FaerMat;

use crate::cmat::{CMat, C64, ONE};
use crate::error::{Error, Result};

/// Dimensions of the initial space h and the multiplicity space K.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SpaceDims {
    pub n_h: usize,
    pub n_k: usize,
}

impl SpaceDims {
    pub fn new(n_h: usize, n_k: usize) -> Result<Self> {
        if n_h < 1 || n_k < 1 {
            return Err(Error::InvalidArgument(format!(
                "space dimensions must be at least 1, got n_h={n_h}, n_k={n_k}"
            )));
        }
        Ok(SpaceDims { n_h, n_k })
    }

    /// Dimension of h ⊕ (h⊗K).
    pub fn total(&self) -> usize {
        self.n_h * (1 + self.n_k)
    }

    /// Dimension of the h⊗K factor.
    pub fn coupling_dim(&self) -> usize {
        self.n_h * self.n_k
    }

    /// Flat row index of initial-space basis vector `i` paired with noise
    /// index `alpha` (0 is the time/scalar slot, 1..=n_k the multiplicity
    /// slots).
    pub fn flat_index(&self, i: usize, alpha: usize) -> usize {
        debug_assert!(i < self.n_h && alpha <= self.n_k);
        if alpha == 0 {
            i
        } else {
            self.n_h + i * self.n_k + (alpha - 1)
        }
    }
}

/// A square operator on h ⊕ (h⊗K) with named blocks
/// [[K: h→h, M: h⊗K→h], [L: h→h⊗K, B: h⊗K→h⊗K]].
#[derive(Clone, Debug, PartialEq)]
pub struct BlockOp {
    dims: SpaceDims,
    full: CMat,
}

impl BlockOp {
    pub fn new(dims: SpaceDims, full: CMat) -> Result<Self> {
        if full.rows() != dims.total() || full.cols() != dims.total() {
            return Err(Error::DimMismatch(format!(
                "block operator must be {0}x{0}, got {1}x{2}",
                dims.total(),
                full.rows(),
                full.cols()
            )));
        }
        Ok(BlockOp { dims, full })
    }

    pub fn from_blocks(dims: SpaceDims, k: &CMat, m: &CMat, l: &CMat, b: &CMat) -> Result<Self> {
        let (nh, nc) = (dims.n_h, dims.coupling_dim());
        let shapes = [
            (k.rows(), k.cols(), nh, nh, "K"),
            (m.rows(), m.cols(), nh, nc, "M"),
            (l.rows(), l.cols(), nc, nh, "L"),
            (b.rows(), b.cols(), nc, nc, "bottom-right"),
        ];
        for (r, c, er, ec, name) in shapes {
            if (r, c) != (er, ec) {
                return Err(Error::DimMismatch(format!(
                    "{name} block must be {er}x{ec}, got {r}x{c}"
                )));
            }
        }
        let mut full = CMat::zeros(dims.total(), dims.total());
        full.set_block(0, 0, k);
        full.set_block(0, nh, m);
        full.set_block(nh, 0, l);
        full.set_block(nh, nh, b);
        Ok(BlockOp { dims, full })
    }

    pub fn dims(&self) -> SpaceDims {
        self.dims
    }

    pub fn full(&self) -> &CMat {
        &self.full
    }

    pub fn into_full(self) -> CMat {
        self.full
    }

    pub fn k_block(&self) -> CMat {
        self.full.block(0, 0, self.dims.n_h, self.dims.n_h)
    }

    pub fn m_block(&self) -> CMat {
        self.full
            .block(0, self.dims.n_h, self.dims.n_h, self.dims.coupling_dim())
    }

    pub fn l_block(&self) -> CMat {
        self.full
            .block(self.dims.n_h, 0, self.dims.coupling_dim(), self.dims.n_h)
    }

    pub fn b_block(&self) -> CMat {
        let nc = self.dims.coupling_dim();
        self.full.block(self.dims.n_h, self.dims.n_h, nc, nc)
    }
}

/// The Hudson-Evans delta: the projection [[0,0],[0,I]] onto the
/// multiplicity block. Self-adjoint and idempotent by construction.
pub fn delta_hat(dims: SpaceDims) -> BlockOp {
    let mut full = CMat::zeros(dims.total(), dims.total());
    for i in dims.n_h..dims.total() {
        full[(i, i)] = ONE;
    }
    BlockOp { dims, full }
}

// Degree-13 Pade coefficients for the exponential (Higham 2005).
const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

const PADE13_THETA: f64 = 4.25;

/// Matrix exponential by scaling and squaring with a degree-13 Pade
/// approximant.
pub fn mat_exp(a: &CMat) -> Result<CMat> {
    let n = a.require_square()?;
    if n == 0 {
        return Ok(CMat::zeros(0, 0));
    }
    let norm = a.one_norm();
    let squarings = if norm > PADE13_THETA {
        (norm / PADE13_THETA).log2().ceil() as u32
    } else {
        0
    };
    let b = a.scale(C64::new(0.5f64.powi(squarings as i32), 0.0));
    let b2 = &b * &b;
    let b4 = &b2 * &b2;
    let b6 = &b4 * &b2;
    let id = CMat::identity(n);
    let cf = |k: usize| C64::new(PADE13[k], 0.0);
    // u = b * (b6*(c13 b6 + c11 b4 + c9 b2) + c7 b6 + c5 b4 + c3 b2 + c1 I)
    let w1 = &(&b6.scale(cf(13)) + &b4.scale(cf(11))) + &b2.scale(cf(9));
    let w2 = &(&(&b6.scale(cf(7)) + &b4.scale(cf(5))) + &b2.scale(cf(3))) + &id.scale(cf(1));
    let u = &b * &(&(&b6 * &w1) + &w2);
    // v = b6*(c12 b6 + c10 b4 + c8 b2) + c6 b6 + c4 b4 + c2 b2 + c0 I
    let z1 = &(&b6.scale(cf(12)) + &b4.scale(cf(10))) + &b2.scale(cf(8));
    let z2 = &(&(&b6.scale(cf(6)) + &b4.scale(cf(4))) + &b2.scale(cf(2))) + &id.scale(cf(0));
    let v = &(&b6 * &z1) + &z2;
    let mut r = (&v - &u).solve(&(&v + &u))?;
    for _ in 0..squarings {
        r = &r * &r;
    }
    Ok(r)
}

/// First decapitated exponential e₁(A) = (e^A − 1)/A, evaluated through the
/// augmented block exponential so that singular A poses no difficulty.
pub fn phi1(a: &CMat) -> Result<CMat> {
    Ok(phi_pair(a)?.0)
}

/// Second decapitated exponential e₂(A) = (e^A − 1 − A)/A².
pub fn phi2(a: &CMat) -> Result<CMat> {
    Ok(phi_pair(a)?.1)
}

/// Computes (e₁(A), e₂(A)) from one exponential of the 3-block
/// upper-triangular matrix [[A, I, 0], [0, 0, I], [0, 0, 0]]: its (1,2)
/// block is e₁(A) and its (1,3) block is e₂(A).
pub fn phi_pair(a: &CMat) -> Result<(CMat, CMat)> {
    let n = a.require_square()?;
    let mut aug = CMat::zeros(3 * n, 3 * n);
    aug.set_block(0, 0, a);
    aug.set_block(0, n, &CMat::identity(n));
    aug.set_block(n, 2 * n, &CMat::identity(n));
    let e = mat_exp(&aug)?;
    Ok((e.block(0, n, n, n), e.block(0, 2 * n, n, n)))
}

const LOG_COND_LIMIT: f64 = 1e8;

/// Principal matrix logarithm through eigendecomposition.
///
/// Restricted to numerically diagonalizable matrices with spectrum off the
/// closed negative real axis; anything else is reported as an error rather
/// than silently answered.
pub fn principal_log(a: &CMat) -> Result<CMat> {
    let n = a.require_square()?;
    if n == 0 {
        return Ok(CMat::zeros(0, 0));
    }
    let fa = FaerMat::from_fn(n, n, |i, j| a[(i, j)]);
    let evd = fa
        .eigen()
        .map_err(|e| Error::LogUndefined(format!("eigendecomposition failed: {e:?}")))?;
    let values = evd.S();
    let scale = (0..n).map(|i| values[i].norm()).fold(1.0, f64::max);
    for i in 0..n {
        let lambda: C64 = values[i];
        if lambda.norm() <= 1e-14 * scale {
            return Err(Error::LogUndefined(format!(
                "eigenvalue {lambda} is numerically zero"
            )));
        }
        if lambda.re < 0.0 && lambda.im.abs() <= 1e-12 * scale {
            return Err(Error::LogUndefined(format!(
                "eigenvalue {lambda} lies on the negative real axis"
            )));
        }
    }
    let p = CMat::from_fn(n, n, |i, j| evd.U()[(i, j)]);
    let p_inv = p
        .inverse()
        .map_err(|_| Error::LogUndefined("eigenvector matrix is singular".into()))?;
    let cond = p.fro_norm() * p_inv.fro_norm();
    if cond > LOG_COND_LIMIT {
        return Err(Error::LogUndefined(format!(
            "eigenvector matrix condition {cond:.3e} exceeds {LOG_COND_LIMIT:.0e} (near-defective)"
        )));
    }
    let log_d = CMat::diag(&(0..n).map(|i| values[i].ln()).collect::<Vec<C64>>());
    Ok(&(&p * &log_d) * &p_inv)
}
