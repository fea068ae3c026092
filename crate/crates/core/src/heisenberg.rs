//! Euclidean and extended Heisenberg group laws over a finite-dimensional
//! multiplicity space, Weyl operators on truncated Fock space, and the
//! numerical verification of the Weyl commutation multiplier.
//!
//! Inner products are antilinear in the first argument. Exponential vectors
//! are used unnormalized, so ⟨ε(f), ε(g)⟩ = exp⟨f, g⟩.

use std::collections::BTreeMap;

use crate::blockspace::mat_exp;
use crate::cmat::{vdot, CMat, C64, ONE};
use crate::error::{Error, Result};

/// Test vector in the multiplicity space K, used as an exponential-vector
/// argument.
pub type TestFunction = Vec<C64>;

const UNITARY_TOL: f64 = 1e-12;

fn check_unitary(t: &CMat) -> Result<()> {
    let n = t.require_square()?;
    let res = (&t.adjoint() * t).fro_dist(&CMat::identity(n));
    if res > UNITARY_TOL * (n as f64).max(1.0) {
        return Err(Error::InvalidArgument(format!(
            "matrix is not unitary (residual {res:.3e})"
        )));
    }
    Ok(())
}

/// Element (T, φ) of the Euclidean group over K: a unitary rotation
/// together with a translation.
#[derive(Clone, Debug)]
pub struct EuclideanElem {
    pub t: CMat,
    pub phi: Vec<C64>,
}

impl EuclideanElem {
    pub fn new(t: CMat, phi: Vec<C64>) -> Result<Self> {
        check_unitary(&t)?;
        if t.rows() != phi.len() {
            return Err(Error::DimMismatch(
                "rotation and translation dimensions differ".into(),
            ));
        }
        Ok(EuclideanElem { t, phi })
    }

    pub fn dim(&self) -> usize {
        self.phi.len()
    }
}

/// Element (T, φ, θ) of the extended Heisenberg group: a Euclidean element
/// with a scalar phase that absorbs the Weyl multiplier.
#[derive(Clone, Debug)]
pub struct HeisenbergElem {
    pub t: CMat,
    pub phi: Vec<C64>,
    pub theta: f64,
}

impl HeisenbergElem {
    pub fn new(t: CMat, phi: Vec<C64>, theta: f64) -> Result<Self> {
        check_unitary(&t)?;
        if t.rows() != phi.len() {
            return Err(Error::DimMismatch(
                "rotation and translation dimensions differ".into(),
            ));
        }
        if !theta.is_finite() {
            return Err(Error::InvalidArgument("phase must be finite".into()));
        }
        Ok(HeisenbergElem { t, phi, theta })
    }

    pub fn identity(n: usize) -> Self {
        HeisenbergElem {
            t: CMat::identity(n),
            phi: vec![C64::new(0.0, 0.0); n],
            theta: 0.0,
        }
    }

    pub fn dim(&self) -> usize {
        self.phi.len()
    }

    pub fn euclidean(&self) -> EuclideanElem {
        EuclideanElem {
            t: self.t.clone(),
            phi: self.phi.clone(),
        }
    }
}

fn check_same_dim(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::DimMismatch(format!(
            "group elements of dimension {a} vs {b}"
        )));
    }
    Ok(())
}

/// Euclidean group law (T₂,φ₂)∘(T₁,φ₁) = (T₂T₁, φ₂ + T₂φ₁).
pub fn eu_compose(g2: &EuclideanElem, g1: &EuclideanElem) -> Result<EuclideanElem> {
    check_same_dim(g2.dim(), g1.dim())?;
    let t = &g2.t * &g1.t;
    let mut phi = g2.t.mul_vec(&g1.phi);
    for (p, q) in phi.iter_mut().zip(&g2.phi) {
        *p += q;
    }
    Ok(EuclideanElem { t, phi })
}

/// Extended Heisenberg group law: the Euclidean law together with
/// θ = θ₁ + θ₂ + Im⟨φ₂, T₂φ₁⟩.
pub fn heis_compose(g2: &HeisenbergElem, g1: &HeisenbergElem) -> Result<HeisenbergElem> {
    check_same_dim(g2.dim(), g1.dim())?;
    let rotated = g2.t.mul_vec(&g1.phi);
    let theta = g1.theta + g2.theta + vdot(&g2.phi, &rotated).im;
    let t = &g2.t * &g1.t;
    let phi = rotated.iter().zip(&g2.phi).map(|(p, q)| p + q).collect();
    Ok(HeisenbergElem { t, phi, theta })
}

/// Group inverse (T†, −T†φ, −θ).
pub fn heis_inverse(g: &HeisenbergElem) -> HeisenbergElem {
    let t_adj = g.t.adjoint();
    let phi = t_adj.mul_vec(&g.phi).iter().map(|z| -z).collect();
    HeisenbergElem {
        t: t_adj,
        phi,
        theta: -g.theta,
    }
}

/// Analytic inner product of exponential vectors: exp⟨f, g⟩.
pub fn exp_vec_inner(f: &[C64], g: &[C64]) -> C64 {
    vdot(f, g).exp()
}

/// Analytic matrix element ⟨ε(g), W(T,φ) ε(f)⟩ of a Weyl operator between
/// exponential vectors: exp{−½‖φ‖² − ⟨φ, Tf⟩ + ⟨g, Tf + φ⟩}.
pub fn weyl_matrix_element(g: &[C64], t: &CMat, phi: &[C64], f: &[C64]) -> Result<C64> {
    check_unitary(t)?;
    if t.rows() != phi.len() || f.len() != phi.len() || g.len() != phi.len() {
        return Err(Error::DimMismatch(
            "Weyl matrix element dimensions differ".into(),
        ));
    }
    let tf = t.mul_vec(f);
    let shifted: Vec<C64> = tf.iter().zip(phi).map(|(a, b)| a + b).collect();
    let norm_sq: f64 = phi.iter().map(|z| z.norm_sqr()).sum();
    let exponent = C64::new(-0.5 * norm_sq, 0.0) - vdot(phi, &tf) + vdot(g, &shifted);
    Ok(exponent.exp())
}

/// Bosonic Fock space over n modes truncated at a total occupation cutoff.
///
/// The basis consists of the occupation tuples (m₁,…,mₙ) with Σmᵢ ≤ cutoff
/// in lexicographic order, so the dimension is C(cutoff + n, n).
#[derive(Clone, Debug)]
pub struct TruncatedFock {
    n_modes: usize,
    cutoff: usize,
    basis: Vec<Vec<usize>>,
    index: BTreeMap<Vec<usize>, usize>,
}

impl TruncatedFock {
    pub fn new(n_modes: usize, cutoff: usize) -> Result<Self> {
        if n_modes < 1 {
            return Err(Error::InvalidArgument("need at least one mode".into()));
        }
        if cutoff < 1 {
            return Err(Error::InvalidArgument("cutoff must be at least 1".into()));
        }
        let mut basis = Vec::new();
        let mut current = vec![0usize; n_modes];
        enumerate_occupations(&mut current, 0, cutoff, &mut basis);
        let index = basis
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, m)| (m, i))
            .collect();
        Ok(TruncatedFock {
            n_modes,
            cutoff,
            basis,
            index,
        })
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<usize>] {
        &self.basis
    }

    /// Truncated creation operator for one mode: raises the occupation,
    /// annihilating (to zero) anything that would exceed the cutoff.
    pub fn creation(&self, mode: usize) -> CMat {
        assert!(mode < self.n_modes, "mode out of range");
        let mut a = CMat::zeros(self.dim(), self.dim());
        for (col, m) in self.basis.iter().enumerate() {
            if m.iter().sum::<usize>() + 1 > self.cutoff {
                continue;
            }
            let mut target = m.clone();
            target[mode] += 1;
            let row = self.index[&target];
            a[(row, col)] = C64::new((target[mode] as f64).sqrt(), 0.0);
        }
        a
    }

    pub fn annihilation(&self, mode: usize) -> CMat {
        self.creation(mode).adjoint()
    }

    /// Second quantization Γ(T) acting as T⊗…⊗T on each particle sector.
    /// Exact on the truncated space since it preserves particle number.
    pub fn second_quantization(&self, t: &CMat) -> Result<CMat> {
        if t.rows() != self.n_modes || t.cols() != self.n_modes {
            return Err(Error::DimMismatch(format!(
                "rotation must be {0}x{0} for {0} modes",
                self.n_modes
            )));
        }
        let creations: Vec<CMat> = (0..self.n_modes).map(|i| self.creation(i)).collect();
        // B_j = a†(T e_j) = sum_i T_ij a†_i
        let rotated: Vec<CMat> = (0..self.n_modes)
            .map(|j| {
                let mut b = CMat::zeros(self.dim(), self.dim());
                for (i, a) in creations.iter().enumerate() {
                    b = &b + &a.scale(t[(i, j)]);
                }
                b
            })
            .collect();
        let mut gamma = CMat::zeros(self.dim(), self.dim());
        for (col, m) in self.basis.iter().enumerate() {
            let mut w = vec![C64::new(0.0, 0.0); self.dim()];
            w[self.index[&vec![0usize; self.n_modes]]] = ONE;
            let mut norm = 1.0f64;
            for (j, &mj) in m.iter().enumerate() {
                for step in 0..mj {
                    w = rotated[j].mul_vec(&w);
                    norm *= (step + 1) as f64;
                }
            }
            let scale = C64::new(1.0 / norm.sqrt(), 0.0);
            for (row, z) in w.iter().enumerate() {
                gamma[(row, col)] = z * scale;
            }
        }
        Ok(gamma)
    }

    /// Weyl displacement W(φ) = exp{a†(φ) − a(φ)} on the truncated space.
    pub fn displacement(&self, phi: &[C64]) -> Result<CMat> {
        if phi.len() != self.n_modes {
            return Err(Error::DimMismatch("displacement vector length".into()));
        }
        let mut x = CMat::zeros(self.dim(), self.dim());
        for (i, p) in phi.iter().enumerate() {
            let a_dag = self.creation(i);
            x = &x + &(&a_dag.scale(*p) - &a_dag.adjoint().scale(p.conj()));
        }
        mat_exp(&x)
    }

    /// Truncated exponential vector: coefficients Π fᵢ^{mᵢ}/√(mᵢ!).
    pub fn exp_vec(&self, f: &[C64]) -> Vec<C64> {
        assert_eq!(f.len(), self.n_modes, "test vector length");
        self.basis
            .iter()
            .map(|m| {
                let mut z = ONE;
                for (i, &mi) in m.iter().enumerate() {
                    for step in 0..mi {
                        z *= f[i] / C64::new(((step + 1) as f64).sqrt(), 0.0);
                    }
                }
                z
            })
            .collect()
    }
}

fn enumerate_occupations(
    current: &mut Vec<usize>,
    mode: usize,
    budget: usize,
    out: &mut Vec<Vec<usize>>,
) {
    if mode == current.len() {
        out.push(current.clone());
        return;
    }
    for occ in 0..=budget {
        current[mode] = occ;
        enumerate_occupations(current, mode + 1, budget - occ, out);
    }
    current[mode] = 0;
}

/// Truncated Weyl operator W(T,φ) = W(φ) Γ(T), the factorization that
/// reproduces the defining action on exponential vectors.
pub fn weyl_truncated(t: &CMat, phi: &[C64], space: &TruncatedFock) -> Result<CMat> {
    check_unitary(t)?;
    let w = space.displacement(phi)?;
    let gamma = space.second_quantization(t)?;
    Ok(&w * &gamma)
}

/// Analytic residual of the Weyl commutation relation
/// W(T₂,φ₂)W(T₁,φ₁) = exp{−i Im⟨φ₂, T₂φ₁⟩} W((T₂,φ₂)∘(T₁,φ₁)),
/// evaluated as matrix elements between exponential vectors ε(g), ε(f)
/// over the supplied test pairs. Returns the maximum modulus difference.
pub fn weyl_ccr_analytic(
    g2: &EuclideanElem,
    g1: &EuclideanElem,
    pairs: &[(TestFunction, TestFunction)],
) -> Result<f64> {
    check_same_dim(g2.dim(), g1.dim())?;
    let composed = eu_compose(g2, g1)?;
    let multiplier = (-crate::cmat::I * vdot(&g2.phi, &g2.t.mul_vec(&g1.phi)).im).exp();
    let mut worst: f64 = 0.0;
    for (f, g) in pairs {
        let lhs = two_step_weyl_element(g, g2, g1, f)?;
        let rhs = multiplier * weyl_matrix_element(g, &composed.t, &composed.phi, f)?;
        worst = worst.max((lhs - rhs).norm());
    }
    Ok(worst)
}

/// ⟨ε(g), W(T₂,φ₂) W(T₁,φ₁) ε(f)⟩ computed by applying the two Weyl
/// actions on the exponential vector in closed form.
fn two_step_weyl_element(
    g: &[C64],
    g2: &EuclideanElem,
    g1: &EuclideanElem,
    f: &[C64],
) -> Result<C64> {
    let t1f = g1.t.mul_vec(f);
    let mid: Vec<C64> = t1f.iter().zip(&g1.phi).map(|(a, b)| a + b).collect();
    let s1 = C64::new(-0.5 * g1.phi.iter().map(|z| z.norm_sqr()).sum::<f64>(), 0.0)
        - vdot(&g1.phi, &t1f);
    Ok(s1.exp() * weyl_matrix_element(g, &g2.t, &g2.phi, &mid)?)
}

/// Residual of the commutation relation with the left side evaluated on
/// the truncated space (operator product of truncated Weyl matrices
/// between truncated exponential vectors) and the right side by the exact
/// analytic oracle. The residual therefore measures the truncation
/// machinery itself and shrinks with the cutoff.
pub fn weyl_ccr_truncated(
    g2: &EuclideanElem,
    g1: &EuclideanElem,
    pairs: &[(TestFunction, TestFunction)],
    space: &TruncatedFock,
) -> Result<f64> {
    check_same_dim(g2.dim(), g1.dim())?;
    let composed = eu_compose(g2, g1)?;
    let multiplier = (-crate::cmat::I * vdot(&g2.phi, &g2.t.mul_vec(&g1.phi)).im).exp();
    let w2 = weyl_truncated(&g2.t, &g2.phi, space)?;
    let w1 = weyl_truncated(&g1.t, &g1.phi, space)?;
    let product = &w2 * &w1;
    let mut worst: f64 = 0.0;
    for (f, g) in pairs {
        let ef = space.exp_vec(f);
        let eg = space.exp_vec(g);
        let lhs = vdot(&eg, &product.mul_vec(&ef));
        let rhs = multiplier * weyl_matrix_element(g, &composed.t, &composed.phi, f)?;
        worst = worst.max((lhs - rhs).norm());
    }
    Ok(worst)
}

/// Residual of the (non-projective) representation property of the
/// phase-extended Weyl operators: W(g₂)W(g₁) = W(g₂ ◁ g₁), where the θ
/// component exactly cancels the multiplier. Evaluated analytically.
pub fn modified_weyl_residual(
    g2: &HeisenbergElem,
    g1: &HeisenbergElem,
    pairs: &[(TestFunction, TestFunction)],
) -> Result<f64> {
    check_same_dim(g2.dim(), g1.dim())?;
    let composed = heis_compose(g2, g1)?;
    let phase = |theta: f64| (-crate::cmat::I * theta).exp();
    let mut worst: f64 = 0.0;
    for (f, g) in pairs {
        let lhs = phase(g1.theta)
            * phase(g2.theta)
            * two_step_weyl_element(g, &g2.euclidean(), &g1.euclidean(), f)?;
        let rhs = phase(composed.theta) * weyl_matrix_element(g, &composed.t, &composed.phi, f)?;
        worst = worst.max((lhs - rhs).norm());
    }
    Ok(worst)
}
