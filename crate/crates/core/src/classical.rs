//! Classical linear state-based input/output models and their composition
//! algebra: series product, concatenation, cascading, the block-triangular
//! representation of the series-product group, transfer functions and time
//! responses.
//!
//! Convention fixed for the whole crate: the model matrix [[K,M],[L,N]]
//! acts as ẋ = Kx + Mu, y = Lx + Nu, so the transfer function reads
//! N + L(sI−K)⁻¹M. This is the unique choice under which the classical
//! series product and the quantum coefficient-matrix series product are
//! block-identical.

use crate::blockspace::mat_exp;
use crate::cmat::{CMat, C64, ONE};
use crate::error::{Error, Result};

/// Linear model ẋ = Kx + Mu, y = Lx + Nu with complex coefficient blocks.
///
/// Static models (nx = 0) are permitted: the state blocks are empty and the
/// model reduces to the gain y = Nu.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassicalModel {
    k: CMat,
    m: CMat,
    l: CMat,
    n: CMat,
}

impl ClassicalModel {
    pub fn new(k: CMat, m: CMat, l: CMat, n: CMat) -> Result<Self> {
        let nx = k.require_square()?;
        let (ny, nu) = (n.rows(), n.cols());
        // Empty blocks deserialized as [] carry no shape; coerce them to the
        // shape implied by K and N.
        let m = if m.data().is_empty() && nx * nu == 0 {
            m.reshape_empty(nx, nu)?
        } else {
            m
        };
        let l = if l.data().is_empty() && ny * nx == 0 {
            l.reshape_empty(ny, nx)?
        } else {
            l
        };
        if m.rows() != nx || m.cols() != nu {
            return Err(Error::DimMismatch(format!(
                "M must be {}x{}, got {}x{}",
                nx,
                nu,
                m.rows(),
                m.cols()
            )));
        }
        if l.rows() != ny || l.cols() != nx {
            return Err(Error::DimMismatch(format!(
                "L must be {}x{}, got {}x{}",
                ny,
                nx,
                l.rows(),
                l.cols()
            )));
        }
        Ok(ClassicalModel { k, m, l, n })
    }

    pub fn scalar(k: f64, m: f64, l: f64, n: f64) -> Self {
        ClassicalModel {
            k: CMat::scalar(C64::new(k, 0.0)),
            m: CMat::scalar(C64::new(m, 0.0)),
            l: CMat::scalar(C64::new(l, 0.0)),
            n: CMat::scalar(C64::new(n, 0.0)),
        }
    }

    /// The identity element of the series product: K, M, L zero and N = I.
    pub fn identity_element(nx: usize, ports: usize) -> Self {
        ClassicalModel {
            k: CMat::zeros(nx, nx),
            m: CMat::zeros(nx, ports),
            l: CMat::zeros(ports, nx),
            n: CMat::identity(ports),
        }
    }

    pub fn nx(&self) -> usize {
        self.k.rows()
    }

    pub fn nu(&self) -> usize {
        self.n.cols()
    }

    pub fn ny(&self) -> usize {
        self.n.rows()
    }

    pub fn k(&self) -> &CMat {
        &self.k
    }

    pub fn m(&self) -> &CMat {
        &self.m
    }

    pub fn l(&self) -> &CMat {
        &self.l
    }

    pub fn n(&self) -> &CMat {
        &self.n
    }

    /// Assembles the model matrix [[K,M],[L,N]].
    pub fn model_matrix(&self) -> CMat {
        let (nx, nu, ny) = (self.nx(), self.nu(), self.ny());
        let mut v = CMat::zeros(nx + ny, nx + nu);
        v.set_block(0, 0, &self.k);
        v.set_block(0, nx, &self.m);
        v.set_block(nx, 0, &self.l);
        v.set_block(nx, nx, &self.n);
        v
    }

    /// Splits a model matrix back into blocks; exact inverse of
    /// [`model_matrix`](Self::model_matrix).
    pub fn from_model_matrix(v: &CMat, nx: usize, nu: usize) -> Result<Self> {
        if v.rows() < nx || v.cols() < nx + nu || v.cols() != nx + nu {
            return Err(Error::DimMismatch("model matrix shape".into()));
        }
        let ny = v.rows() - nx;
        ClassicalModel::new(
            v.block(0, 0, nx, nx),
            v.block(0, nx, nx, nu),
            v.block(nx, 0, ny, nx),
            v.block(nx, nx, ny, nu),
        )
    }
}

fn check_shared_state(a: &ClassicalModel, b: &ClassicalModel) -> Result<()> {
    if a.nx() != b.nx() {
        return Err(Error::DimMismatch(format!(
            "models must share the state space: nx {} vs {}",
            a.nx(),
            b.nx()
        )));
    }
    Ok(())
}

/// Series product V₂ ∗ V₁: the output of `v1` feeds the input of `v2`,
/// with both models sharing the same state variable.
pub fn series(v2: &ClassicalModel, v1: &ClassicalModel) -> Result<ClassicalModel> {
    check_shared_state(v2, v1)?;
    if v1.ny() != v2.nu() {
        return Err(Error::DimMismatch(format!(
            "series requires ny(v1) = nu(v2), got {} vs {}",
            v1.ny(),
            v2.nu()
        )));
    }
    let k = &(&v1.k + &(&v2.m * &v1.l)) + &v2.k;
    let m = &v1.m + &(&v2.m * &v1.n);
    let l = &v2.l + &(&v2.n * &v1.l);
    let n = &v2.n * &v1.n;
    ClassicalModel::new(k, m, l, n)
}

/// Concatenation V₁ ⊞ V₂ of two models sharing a state: velocity fields
/// add, ports are stacked, and the direct gain is block-diagonal.
pub fn concat(v1: &ClassicalModel, v2: &ClassicalModel) -> Result<ClassicalModel> {
    check_shared_state(v1, v2)?;
    let nx = v1.nx();
    let (nu1, nu2, ny1, ny2) = (v1.nu(), v2.nu(), v1.ny(), v2.ny());
    let k = &v1.k + &v2.k;
    let mut m = CMat::zeros(nx, nu1 + nu2);
    m.set_block(0, 0, &v1.m);
    m.set_block(0, nu1, &v2.m);
    let mut l = CMat::zeros(ny1 + ny2, nx);
    l.set_block(0, 0, &v1.l);
    l.set_block(ny1, 0, &v2.l);
    let mut n = CMat::zeros(ny1 + ny2, nu1 + nu2);
    n.set_block(0, 0, &v1.n);
    n.set_block(ny1, nu1, &v2.n);
    ClassicalModel::new(k, m, l, n)
}

/// Cascade of two systems with distinct states: `v1` drives `v2` under the
/// identification u₂ = y₁. Both models are ampliated to the joint state
/// [x₁; x₂] (zero-padded) and combined with the series product.
pub fn cascade(v1: &ClassicalModel, v2: &ClassicalModel) -> Result<ClassicalModel> {
    if v1.ny() != v2.nu() {
        return Err(Error::DimMismatch(format!(
            "cascade requires ny(v1) = nu(v2), got {} vs {}",
            v1.ny(),
            v2.nu()
        )));
    }
    let (nx1, nx2) = (v1.nx(), v2.nx());
    let nx = nx1 + nx2;
    let pad = |m: &ClassicalModel, row0: usize| -> Result<ClassicalModel> {
        let mut k = CMat::zeros(nx, nx);
        k.set_block(row0, row0, &m.k);
        let mut mm = CMat::zeros(nx, m.nu());
        mm.set_block(row0, 0, &m.m);
        let mut ll = CMat::zeros(m.ny(), nx);
        ll.set_block(0, row0, &m.l);
        ClassicalModel::new(k, mm, ll, m.n.clone())
    };
    series(&pad(v2, nx1)?, &pad(v1, 0)?)
}

/// Series-product inverse of a square model with invertible N.
pub fn series_inverse(v: &ClassicalModel) -> Result<ClassicalModel> {
    if v.nu() != v.ny() {
        return Err(Error::DimMismatch(format!(
            "series inverse requires a square model, got nu={} ny={}",
            v.nu(),
            v.ny()
        )));
    }
    let n_inv = v
        .n
        .inverse()
        .map_err(|_| Error::Singular("N is not invertible; model has no series inverse".into()))?;
    let mn = &v.m * &n_inv;
    let k = &(&mn * &v.l) - &v.k;
    let m = -&mn;
    let l = -&(&n_inv * &v.l);
    ClassicalModel::new(k, m, l, n_inv)
}

/// Block upper-triangular representation of the series-product group:
/// ρ(V) = [[I, M, K], [0, N, L], [0, 0, I]], under which the series
/// product becomes ordinary matrix multiplication.
pub fn rho(v: &ClassicalModel) -> Result<CMat> {
    if v.nu() != v.ny() {
        return Err(Error::DimMismatch(
            "rho requires a square model (nu = ny)".into(),
        ));
    }
    let (nx, np) = (v.nx(), v.nu());
    let dim = 2 * nx + np;
    let mut r = CMat::zeros(dim, dim);
    r.set_block(0, 0, &CMat::identity(nx));
    r.set_block(0, nx, &v.m);
    r.set_block(0, nx + np, &v.k);
    r.set_block(nx, nx, &v.n);
    r.set_block(nx, nx + np, &v.l);
    r.set_block(nx + np, nx + np, &CMat::identity(nx));
    Ok(r)
}

/// The four generators of the single-input single-output single-state
/// group in its 3x3 triangular representation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SingleModeGenerator {
    /// Input-to-state injection (the lowering-type generator).
    Annihilation,
    /// State-to-output readout (the raising-type generator).
    Creation,
    /// Port gain generator.
    Number,
    /// Central element: pure state drift.
    Center,
}

impl SingleModeGenerator {
    pub fn matrix(self) -> CMat {
        let mut m = CMat::zeros(3, 3);
        let (i, j) = match self {
            SingleModeGenerator::Annihilation => (0, 1),
            SingleModeGenerator::Creation => (1, 2),
            SingleModeGenerator::Number => (1, 1),
            SingleModeGenerator::Center => (0, 2),
        };
        m[(i, j)] = ONE;
        m
    }

    pub const ALL: [SingleModeGenerator; 4] = [
        SingleModeGenerator::Annihilation,
        SingleModeGenerator::Number,
        SingleModeGenerator::Creation,
        SingleModeGenerator::Center,
    ];
}

/// Matrix commutator [g₁, g₂] of two generators.
pub fn generator_bracket(g1: SingleModeGenerator, g2: SingleModeGenerator) -> CMat {
    let (a, b) = (g1.matrix(), g2.matrix());
    &(&a * &b) - &(&b * &a)
}

/// Transfer function N + L(sI−K)⁻¹M at the complex frequency `s`.
pub fn transfer_function(v: &ClassicalModel, s: C64) -> Result<CMat> {
    let nx = v.nx();
    if nx == 0 {
        return Ok(v.n.clone());
    }
    let mut si_k = -&v.k;
    for i in 0..nx {
        si_k[(i, i)] += s;
    }
    let x = si_k
        .solve(&v.m)
        .map_err(|_| Error::Pole(format!("s = {s} is in the spectrum of K")))?;
    let residual = (&(&si_k * &x) - &v.m).fro_norm();
    if residual > 1e-8 * (1.0 + x.fro_norm() * si_k.fro_norm()) {
        return Err(Error::Pole(format!(
            "s = {s} is numerically a pole (solve residual {residual:.3e})"
        )));
    }
    Ok(&v.n + &(&v.l * &x))
}

/// Integrates ẋ = Kx + Mu, y = Lx + Nu with fixed-step RK4 over a strictly
/// increasing grid carrying one constant input value per interval. Returns
/// the output samples at every grid point; the final sample uses the last
/// interval's input value.
pub fn time_response(
    v: &ClassicalModel,
    x0: &[C64],
    u: &[Vec<C64>],
    grid: &[f64],
    substeps: usize,
) -> Result<Vec<Vec<C64>>> {
    if grid.is_empty() {
        return Err(Error::InvalidArgument("time grid is empty".into()));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument(
            "time grid must be strictly increasing".into(),
        ));
    }
    if u.len() + 1 != grid.len() {
        return Err(Error::DimMismatch(format!(
            "need one input value per interval: {} values for {} grid points",
            u.len(),
            grid.len()
        )));
    }
    if x0.len() != v.nx() {
        return Err(Error::DimMismatch(
            "x0 length must equal the state dimension".into(),
        ));
    }
    if u.iter().any(|uk| uk.len() != v.nu()) {
        return Err(Error::DimMismatch(
            "input values must have length nu".into(),
        ));
    }
    let substeps = substeps.max(1);
    let deriv = |x: &[C64], uk: &[C64]| -> Vec<C64> {
        let mut d = v.k.mul_vec(x);
        for (di, mi) in d.iter_mut().zip(v.m.mul_vec(uk)) {
            *di += mi;
        }
        d
    };
    let output = |x: &[C64], uk: &[C64]| -> Vec<C64> {
        let mut y = v.l.mul_vec(x);
        for (yi, ni) in y.iter_mut().zip(v.n.mul_vec(uk)) {
            *yi += ni;
        }
        y
    };
    let mut x = x0.to_vec();
    let mut ys = Vec::with_capacity(grid.len());
    for k in 0..u.len() {
        ys.push(output(&x, &u[k]));
        let h = (grid[k + 1] - grid[k]) / substeps as f64;
        let hc = C64::new(h, 0.0);
        for _ in 0..substeps {
            let k1 = deriv(&x, &u[k]);
            let x2: Vec<C64> = x.iter().zip(&k1).map(|(a, b)| a + b * hc * 0.5).collect();
            let k2 = deriv(&x2, &u[k]);
            let x3: Vec<C64> = x.iter().zip(&k2).map(|(a, b)| a + b * hc * 0.5).collect();
            let k3 = deriv(&x3, &u[k]);
            let x4: Vec<C64> = x.iter().zip(&k3).map(|(a, b)| a + b * hc).collect();
            let k4 = deriv(&x4, &u[k]);
            for i in 0..x.len() {
                x[i] += hc / 6.0 * (k1[i] + k2[i] * 2.0 + k3[i] * 2.0 + k4[i]);
            }
        }
    }
    ys.push(output(&x, u.last().map(|r| r.as_slice()).unwrap_or(&[])));
    Ok(ys)
}

/// Exact response for piecewise-constant inputs, stepping the state with
/// the matrix exponential on each interval. Used as the closed-form
/// reference for the RK4 integrator.
pub fn exact_response(
    v: &ClassicalModel,
    x0: &[C64],
    u: &[Vec<C64>],
    grid: &[f64],
) -> Result<Vec<Vec<C64>>> {
    if grid.is_empty() {
        return Err(Error::InvalidArgument("time grid is empty".into()));
    }
    if u.len() + 1 != grid.len() {
        return Err(Error::DimMismatch(
            "need one input value per interval".into(),
        ));
    }
    let output = |x: &[C64], uk: &[C64]| -> Vec<C64> {
        let mut y = v.l.mul_vec(x);
        for (yi, ni) in y.iter_mut().zip(v.n.mul_vec(uk)) {
            *yi += ni;
        }
        y
    };
    let mut x = x0.to_vec();
    let mut ys = Vec::with_capacity(grid.len());
    for k in 0..u.len() {
        ys.push(output(&x, &u[k]));
        let dt = grid[k + 1] - grid[k];
        let kdt = v.k.scale(C64::new(dt, 0.0));
        let ek = mat_exp(&kdt)?;
        // x' = e^{K dt} x + dt * e1(K dt) M u
        let drive = crate::blockspace::phi1(&kdt)?;
        let forced = drive.mul_vec(&v.m.mul_vec(&u[k]));
        x = ek
            .mul_vec(&x)
            .iter()
            .zip(&forced)
            .map(|(a, b)| a + b * C64::new(dt, 0.0))
            .collect();
    }
    ys.push(output(&x, u.last().map(|r| r.as_slice()).unwrap_or(&[])));
    Ok(ys)
}
