//! The algebra of quantum stochastic coefficient matrices: the series
//! product and its group structure, unitarity conditions, scattering
//! triples, the block-triangular (Belavkin) representation, and the
//! exponential map from the associated Lie algebra.

use crate::blockspace::{delta_hat, mat_exp, phi_pair, principal_log, BlockOp, SpaceDims};
use crate::cmat::{CMat, C64, I as IM};
use crate::error::{Error, Result};
use crate::heisenberg::HeisenbergElem;

/// Coefficient matrix G of a quantum stochastic evolution, decomposed as
/// [[K, M], [L, N−I]] on h ⊕ (h⊗K). The bottom-right block is stored as
/// N−I; accessors and serialization expose N.
#[derive(Clone, Debug, PartialEq)]
pub struct CoeffMatrix {
    op: BlockOp,
}

impl CoeffMatrix {
    /// Builds a coefficient matrix from the blocks K, M, L and N (note:
    /// N itself, not N−I).
    pub fn from_blocks(k: &CMat, m: &CMat, l: &CMat, n: &CMat) -> Result<Self> {
        let n_h = k.require_square()?;
        let nc = l.rows();
        if n_h == 0 || nc == 0 || !nc.is_multiple_of(n_h) {
            return Err(Error::DimMismatch(format!(
                "L must have a positive row count divisible by n_h={n_h}, got {nc}"
            )));
        }
        let dims = SpaceDims::new(n_h, nc / n_h)?;
        let b = n - &CMat::identity(nc);
        Ok(CoeffMatrix {
            op: BlockOp::from_blocks(dims, k, m, l, &b)?,
        })
    }

    /// The zero coefficient matrix: the identity of the series product.
    pub fn zero(dims: SpaceDims) -> Self {
        CoeffMatrix {
            op: BlockOp::new(dims, CMat::zeros(dims.total(), dims.total())).unwrap(),
        }
    }

    pub fn from_g(dims: SpaceDims, g: CMat) -> Result<Self> {
        Ok(CoeffMatrix {
            op: BlockOp::new(dims, g)?,
        })
    }

    pub fn dims(&self) -> SpaceDims {
        self.op.dims()
    }

    /// The full coefficient matrix G (bottom-right block N−I).
    pub fn g(&self) -> &CMat {
        self.op.full()
    }

    pub fn k_block(&self) -> CMat {
        self.op.k_block()
    }

    pub fn m_block(&self) -> CMat {
        self.op.m_block()
    }

    pub fn l_block(&self) -> CMat {
        self.op.l_block()
    }

    /// The gain block N = I + (bottom-right of G).
    pub fn n_block(&self) -> CMat {
        &self.op.b_block() + &CMat::identity(self.dims().coupling_dim())
    }

    /// The model matrix δ̂ + G = [[K, M], [L, N]].
    pub fn model_matrix(&self) -> CMat {
        self.g() + delta_hat(self.dims()).full()
    }

    pub fn adjoint(&self) -> Self {
        CoeffMatrix {
            op: BlockOp::new(self.dims(), self.g().adjoint()).unwrap(),
        }
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.g().max_abs() <= tol
    }
}

fn check_dims(a: &CoeffMatrix, b: &CoeffMatrix) -> Result<()> {
    if a.dims() != b.dims() {
        return Err(Error::DimMismatch(format!(
            "coefficient matrices on different spaces: {:?} vs {:?}",
            a.dims(),
            b.dims()
        )));
    }
    Ok(())
}

/// General series product G₂ ◁ G₁ = G₁ + G₂ + G₂ δ̂ G₁.
pub fn series(g2: &CoeffMatrix, g1: &CoeffMatrix) -> Result<CoeffMatrix> {
    check_dims(g2, g1)?;
    let dims = g1.dims();
    let dh = delta_hat(dims);
    let cross = &(g2.g() * dh.full()) * g1.g();
    CoeffMatrix::from_g(dims, &(g1.g() + g2.g()) + &cross)
}

/// Concatenation G₁ ⊞ G₂ of coefficient matrices with a common initial
/// space and (possibly different) multiplicity spaces: both are ampliated
/// to K₁ ⊕ K₂ and combined with the series product.
pub fn concat(g1: &CoeffMatrix, g2: &CoeffMatrix) -> Result<CoeffMatrix> {
    if g1.dims().n_h != g2.dims().n_h {
        return Err(Error::DimMismatch(format!(
            "concatenation requires a common initial space, got n_h {} vs {}",
            g1.dims().n_h,
            g2.dims().n_h
        )));
    }
    let total_k = g1.dims().n_k + g2.dims().n_k;
    let a1 = ampliate(g1, 0, total_k);
    let a2 = ampliate(g2, g1.dims().n_k, total_k);
    series(&a2, &a1)
}

/// Embeds a coefficient matrix into a larger multiplicity space, placing
/// its noise channels at `offset` and leaving the remaining channels
/// untouched (N acts as the identity there, so the G-blocks are zero).
pub fn ampliate(g: &CoeffMatrix, offset: usize, total_k: usize) -> CoeffMatrix {
    let dims = g.dims();
    assert!(offset + dims.n_k <= total_k, "ampliation out of range");
    let big = SpaceDims::new(dims.n_h, total_k).unwrap();
    let src = g.g();
    let mut full = CMat::zeros(big.total(), big.total());
    let map_alpha = |alpha: usize| -> usize {
        // noise index in the small space -> index in the big space
        if alpha == 0 {
            0
        } else {
            alpha + offset
        }
    };
    for i in 0..dims.n_h {
        for alpha in 0..=dims.n_k {
            for i2 in 0..dims.n_h {
                for beta in 0..=dims.n_k {
                    let v = src[(dims.flat_index(i, alpha), dims.flat_index(i2, beta))];
                    full[(
                        big.flat_index(i, map_alpha(alpha)),
                        big.flat_index(i2, map_alpha(beta)),
                    )] = v;
                }
            }
        }
    }
    CoeffMatrix::from_g(big, full).unwrap()
}

/// Series-product inverse [[−K+MN⁻¹L, −MN⁻¹], [−N⁻¹L, N⁻¹−I]] of an
/// element of the group (N invertible).
pub fn gl_inverse(g: &CoeffMatrix) -> Result<CoeffMatrix> {
    let n = g.n_block();
    let n_inv = n.inverse().map_err(|_| {
        Error::Singular(
            "N is singular: the coefficient matrix is not in the series-product group".into(),
        )
    })?;
    let (k, m, l) = (g.k_block(), g.m_block(), g.l_block());
    let mn = &m * &n_inv;
    let new_k = &(&mn * &l) - &k;
    let new_m = -&mn;
    let new_l = -&(&n_inv * &l);
    CoeffMatrix::from_blocks(&new_k, &new_m, &new_l, &n_inv)
}

/// Residuals of the unitarity conditions on a coefficient matrix:
/// ‖G + G† + G†δ̂G‖ (isometry) and ‖G + G† + Gδ̂G†‖ (co-isometry).
#[derive(Clone, Copy, Debug)]
pub struct UnitarityResiduals {
    pub isometry: f64,
    pub coisometry: f64,
}

impl UnitarityResiduals {
    pub fn within(&self, tol: f64) -> bool {
        self.isometry < tol && self.coisometry < tol
    }
}

pub fn unitarity_residuals(g: &CoeffMatrix) -> UnitarityResiduals {
    let dh = delta_hat(g.dims());
    let ga = g.g().adjoint();
    let base = g.g() + &ga;
    let iso = &base + &(&(&ga * dh.full()) * g.g());
    let co = &base + &(&(g.g() * dh.full()) * &ga);
    UnitarityResiduals {
        isometry: iso.fro_norm(),
        coisometry: co.fro_norm(),
    }
}

pub fn is_unitary_generator(g: &CoeffMatrix, tol: f64) -> bool {
    unitarity_residuals(g).within(tol)
}

/// Hudson-Parthasarathy coefficients: a scattering unitary S on h⊗K, a
/// coupling operator L: h → h⊗K, and a self-adjoint Hamiltonian H on h.
#[derive(Clone, Debug)]
pub struct SLHTriple {
    s: CMat,
    l: CMat,
    h: CMat,
    dims: SpaceDims,
}

impl SLHTriple {
    pub fn new(s: CMat, l: CMat, h: CMat) -> Result<Self> {
        let n_h = h.require_square()?;
        if n_h == 0 || l.cols() != n_h || !l.rows().is_multiple_of(n_h) || l.rows() == 0 {
            return Err(Error::DimMismatch(format!(
                "L must be (n_h*n_k) x n_h with n_h={n_h}, got {}x{}",
                l.rows(),
                l.cols()
            )));
        }
        let dims = SpaceDims::new(n_h, l.rows() / n_h)?;
        if s.rows() != dims.coupling_dim() || !s.is_square() {
            return Err(Error::DimMismatch(format!(
                "S must be {0}x{0}, got {1}x{2}",
                dims.coupling_dim(),
                s.rows(),
                s.cols()
            )));
        }
        let s_res = (&s.adjoint() * &s).fro_dist(&CMat::identity(s.rows()));
        if s_res > 1e-10 {
            return Err(Error::InvalidArgument(format!(
                "S is not unitary (residual {s_res:.3e})"
            )));
        }
        let h_res = h.fro_dist(&h.adjoint());
        if h_res > 1e-10 {
            return Err(Error::InvalidArgument(format!(
                "H is not self-adjoint (residual {h_res:.3e})"
            )));
        }
        Ok(SLHTriple { s, l, h, dims })
    }

    pub fn identity(dims: SpaceDims) -> Self {
        SLHTriple {
            s: CMat::identity(dims.coupling_dim()),
            l: CMat::zeros(dims.coupling_dim(), dims.n_h),
            h: CMat::zeros(dims.n_h, dims.n_h),
            dims,
        }
    }

    /// Scalar coefficients ampliated to an n_h-dimensional initial space
    /// with one noise channel: S = s·I, L = l·I, H = h·I.
    pub fn scalar_ampliated(s: C64, l: C64, h: C64, n_h: usize) -> Result<Self> {
        SLHTriple::new(
            CMat::identity(n_h).scale(s),
            CMat::identity(n_h).scale(l),
            CMat::identity(n_h).scale(h),
        )
    }

    pub fn s(&self) -> &CMat {
        &self.s
    }

    pub fn l(&self) -> &CMat {
        &self.l
    }

    pub fn h(&self) -> &CMat {
        &self.h
    }

    pub fn dims(&self) -> SpaceDims {
        self.dims
    }
}

/// Coefficient matrix of a unitary evolution:
/// [[−½L†L − iH, −L†S], [L, S−I]].
pub fn slh_to_coeff(slh: &SLHTriple) -> CoeffMatrix {
    let ldag = slh.l.adjoint();
    let k = &(&ldag * &slh.l).scale(C64::new(-0.5, 0.0)) - &slh.h.scale(IM);
    let m = -&(&ldag * &slh.s);
    CoeffMatrix::from_blocks(&k, &m, &slh.l, &slh.s).unwrap()
}

/// Recovers (S, L, H) from a unitary generator matrix: S = N, L is the
/// coupling block, and H = (i/2)(K − K†). The off-diagonal consistency
/// M = −L†S and the drift consistency (K+K†)/2 = −½L†L are both verified
/// rather than assumed.
pub fn coeff_to_slh(g: &CoeffMatrix, tol: f64) -> Result<SLHTriple> {
    let residuals = unitarity_residuals(g);
    if !residuals.within(tol) {
        return Err(Error::NotUnitaryGenerator(format!(
            "unitarity residuals isometry={:.3e} coisometry={:.3e} exceed tol={tol:.1e}",
            residuals.isometry, residuals.coisometry
        )));
    }
    let s = g.n_block();
    let l = g.l_block();
    let k = g.k_block();
    let h = (&k - &k.adjoint()).scale(IM.scale(0.5));
    let m_res = (&g.m_block() + &(&l.adjoint() * &s)).fro_norm();
    if m_res > tol {
        return Err(Error::NotUnitaryGenerator(format!(
            "M block deviates from -L'S by {m_res:.3e}"
        )));
    }
    let drift_res = (&(&k + &k.adjoint()).scale(C64::new(0.5, 0.0))
        + &(&l.adjoint() * &l).scale(C64::new(0.5, 0.0)))
        .fro_norm();
    if drift_res > tol {
        return Err(Error::NotUnitaryGenerator(format!(
            "Re K deviates from -L'L/2 by {drift_res:.3e}"
        )));
    }
    SLHTriple::new(s, l, h)
}

/// Matrix imaginary part (X − X†)/(2i).
fn im_part(x: &CMat) -> CMat {
    (x - &x.adjoint()).scale(C64::new(0.0, -0.5))
}

/// Special series product on triples:
/// (S₂,L₂,H₂) ◁ (S₁,L₁,H₁) = (S₂S₁, L₂+S₂L₁, H₁+H₂+Im L₂†S₂L₁).
pub fn slh_series(b: &SLHTriple, a: &SLHTriple) -> Result<SLHTriple> {
    if b.dims != a.dims {
        return Err(Error::DimMismatch("SLH triples on different spaces".into()));
    }
    let s = &b.s * &a.s;
    let l = &b.l + &(&b.s * &a.l);
    let h = &(&a.h + &b.h) + &im_part(&(&(&b.l.adjoint() * &b.s) * &a.l));
    SLHTriple::new(s, l, h)
}

/// Inverse (S†, −S†L, −H) of a triple under the special series product.
pub fn slh_inverse(a: &SLHTriple) -> SLHTriple {
    let s_adj = a.s.adjoint();
    let l = -&(&s_adj * &a.l);
    SLHTriple::new(s_adj, l, -&a.h).unwrap()
}

/// Embeds an extended Heisenberg element as a triple over a trivial
/// (one-dimensional) initial space: S = T, L = φ as a column, H = θ.
/// The special series product of embedded elements reproduces the
/// Heisenberg group law with exactly the same arithmetic.
pub fn heisenberg_embed(g: &HeisenbergElem) -> SLHTriple {
    SLHTriple::new(
        g.t.clone(),
        CMat::column(&g.phi),
        CMat::scalar(C64::new(g.theta, 0.0)),
    )
    .unwrap()
}

/// Block-triangular representation [[I, M, K], [0, N, L], [0, 0, I]] on
/// h ⊗ (ℂ ⊕ K ⊕ ℂ), under which the series product becomes matrix
/// multiplication.
pub fn belavkin_rep(g: &CoeffMatrix) -> CMat {
    let dims = g.dims();
    let (nh, nc) = (dims.n_h, dims.coupling_dim());
    let total = 2 * nh + nc;
    let mut v = CMat::zeros(total, total);
    v.set_block(0, 0, &CMat::identity(nh));
    v.set_block(0, nh, &g.m_block());
    v.set_block(0, nh + nc, &g.k_block());
    v.set_block(nh, nh, &g.n_block());
    v.set_block(nh, nh + nc, &g.l_block());
    v.set_block(nh + nc, nh + nc, &CMat::identity(nh));
    v
}

/// Element [[κ, μ], [λ, ν]] of the Lie algebra of the series-product
/// group.
#[derive(Clone, Debug, PartialEq)]
pub struct LieAlgElem {
    kappa: CMat,
    mu: CMat,
    lambda: CMat,
    nu: CMat,
    dims: SpaceDims,
}

impl LieAlgElem {
    pub fn new(kappa: CMat, mu: CMat, lambda: CMat, nu: CMat) -> Result<Self> {
        let n_h = kappa.require_square()?;
        if n_h == 0
            || lambda.rows() == 0
            || !lambda.rows().is_multiple_of(n_h)
            || lambda.cols() != n_h
        {
            return Err(Error::DimMismatch("lambda must be (n_h*n_k) x n_h".into()));
        }
        let dims = SpaceDims::new(n_h, lambda.rows() / n_h)?;
        let nc = dims.coupling_dim();
        if mu.rows() != n_h || mu.cols() != nc || nu.rows() != nc || nu.cols() != nc {
            return Err(Error::DimMismatch(
                "mu or nu block has the wrong shape".into(),
            ));
        }
        Ok(LieAlgElem {
            kappa,
            mu,
            lambda,
            nu,
            dims,
        })
    }

    pub fn zero(dims: SpaceDims) -> Self {
        let (nh, nc) = (dims.n_h, dims.coupling_dim());
        LieAlgElem {
            kappa: CMat::zeros(nh, nh),
            mu: CMat::zeros(nh, nc),
            lambda: CMat::zeros(nc, nh),
            nu: CMat::zeros(nc, nc),
            dims,
        }
    }

    pub fn scalar(kappa: C64, mu: C64, lambda: C64, nu: C64) -> Self {
        LieAlgElem {
            kappa: CMat::scalar(kappa),
            mu: CMat::scalar(mu),
            lambda: CMat::scalar(lambda),
            nu: CMat::scalar(nu),
            dims: SpaceDims::new(1, 1).unwrap(),
        }
    }

    pub fn kappa(&self) -> &CMat {
        &self.kappa
    }

    pub fn mu(&self) -> &CMat {
        &self.mu
    }

    pub fn lambda(&self) -> &CMat {
        &self.lambda
    }

    pub fn nu(&self) -> &CMat {
        &self.nu
    }

    pub fn dims(&self) -> SpaceDims {
        self.dims
    }

    /// The full block matrix [[κ, μ], [λ, ν]] on h ⊕ (h⊗K).
    pub fn full(&self) -> CMat {
        let (nh, nc) = (self.dims.n_h, self.dims.coupling_dim());
        let mut m = CMat::zeros(nh + nc, nh + nc);
        m.set_block(0, 0, &self.kappa);
        m.set_block(0, nh, &self.mu);
        m.set_block(nh, 0, &self.lambda);
        m.set_block(nh, nh, &self.nu);
        m
    }

    /// Nilpotent-style representation [[0, μ, κ], [0, ν, λ], [0, 0, 0]]
    /// whose ordinary exponential equals the representation of ĥexp.
    pub fn rep(&self) -> CMat {
        let (nh, nc) = (self.dims.n_h, self.dims.coupling_dim());
        let total = 2 * nh + nc;
        let mut m = CMat::zeros(total, total);
        m.set_block(0, nh, &self.mu);
        m.set_block(0, nh + nc, &self.kappa);
        m.set_block(nh, nh, &self.nu);
        m.set_block(nh, nh + nc, &self.lambda);
        m
    }
}

/// Exponential map from the Lie algebra to the series-product group,
/// through the decapitated exponentials:
/// K = κ + μ e₂(ν) λ, M = μ e₁(ν), L = e₁(ν) λ, N = e^ν.
pub fn hat_exp(h: &LieAlgElem) -> Result<CoeffMatrix> {
    let (e1, e2) = phi_pair(&h.nu)?;
    let k = &h.kappa + &(&(&h.mu * &e2) * &h.lambda);
    let m = &h.mu * &e1;
    let l = &e1 * &h.lambda;
    let n = mat_exp(&h.nu)?;
    CoeffMatrix::from_blocks(&k, &m, &l, &n)
}

/// Inverse of the exponential map on its principal branch:
/// ν = log N, λ = e₁(ν)⁻¹L, μ = M e₁(ν)⁻¹, κ = K − μ e₂(ν) λ.
pub fn hat_log(g: &CoeffMatrix) -> Result<LieAlgElem> {
    let nu = principal_log(&g.n_block())?;
    let (e1, e2) = phi_pair(&nu)?;
    let lambda = e1
        .solve(&g.l_block())
        .map_err(|_| Error::Singular("e1(nu) is singular; log is outside the chart".into()))?;
    let mu = e1
        .transpose()
        .solve(&g.m_block().transpose())
        .map_err(|_| Error::Singular("e1(nu) is singular; log is outside the chart".into()))?
        .transpose();
    let kappa = &g.k_block() - &(&(&mu * &e2) * &lambda);
    LieAlgElem::new(kappa, mu, lambda, nu)
}

/// Lie bracket [H₂, H₁], computed as the commutator of the block
/// representations and read back into blocks: κ ← μ₂λ₁ − μ₁λ₂,
/// μ ← μ₂ν₁ − μ₁ν₂, λ ← ν₂λ₁ − ν₁λ₂, ν ← [ν₂, ν₁].
pub fn lie_bracket(h2: &LieAlgElem, h1: &LieAlgElem) -> Result<LieAlgElem> {
    if h2.dims != h1.dims {
        return Err(Error::DimMismatch(
            "Lie algebra elements on different spaces".into(),
        ));
    }
    let (b2, b1) = (h2.rep(), h1.rep());
    let c = &(&b2 * &b1) - &(&b1 * &b2);
    let (nh, nc) = (h1.dims.n_h, h1.dims.coupling_dim());
    LieAlgElem::new(
        c.block(0, nh + nc, nh, nh),
        c.block(0, nh, nh, nc),
        c.block(nh, nh + nc, nc, nh),
        c.block(nh, nh, nc, nc),
    )
}

/// Exponential map restricted to the Lie algebra of the unitary-generator
/// subgroup, expressed directly in scattering parameters:
/// (S, L, H) = (e^{−iσ}, e₁(−iσ)λ, η + λ† Im{e₂(−iσ)} λ).
pub fn lie_to_slh(eta: &CMat, lambda: &CMat, sigma: &CMat) -> Result<SLHTriple> {
    let eta_res = eta.fro_dist(&eta.adjoint());
    if eta_res > 1e-10 {
        return Err(Error::InvalidArgument(format!(
            "eta is not self-adjoint (residual {eta_res:.3e})"
        )));
    }
    let sigma_res = sigma.fro_dist(&sigma.adjoint());
    if sigma_res > 1e-10 {
        return Err(Error::InvalidArgument(format!(
            "sigma is not self-adjoint (residual {sigma_res:.3e})"
        )));
    }
    let minus_i_sigma = sigma.scale(-IM);
    let s = mat_exp(&minus_i_sigma)?;
    let (e1, e2) = phi_pair(&minus_i_sigma)?;
    let l = &e1 * lambda;
    let h = &(eta + &(&(&lambda.adjoint() * &im_part(&e2)) * lambda)) * &CMat::identity(eta.rows());
    SLHTriple::new(s, l, h)
}

/// Label (α, β) of a fundamental integrator dΛ^{αβ}: index 0 is time,
/// indices 1..=n_k are the noise channels.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ItoSymbol {
    alpha: usize,
    beta: usize,
    n_k: usize,
}

impl ItoSymbol {
    pub fn new(alpha: usize, beta: usize, n_k: usize) -> Result<Self> {
        if alpha > n_k || beta > n_k {
            return Err(Error::InvalidArgument(format!(
                "indices ({alpha},{beta}) out of range for {n_k} channels"
            )));
        }
        Ok(ItoSymbol { alpha, beta, n_k })
    }

    pub fn alpha(&self) -> usize {
        self.alpha
    }

    pub fn beta(&self) -> usize {
        self.beta
    }
}

/// Product rule of the quantum Itô table:
/// dΛ^{αβ} dΛ^{μν} = δ̂_{βμ} dΛ^{αν}, with δ̂ supported on 1..=n_k.
/// Returns `None` for a vanishing product.
pub fn ito_product(x: &ItoSymbol, y: &ItoSymbol) -> Option<ItoSymbol> {
    if x.n_k != y.n_k {
        return None;
    }
    if x.beta == y.alpha && x.beta >= 1 {
        Some(ItoSymbol {
            alpha: x.alpha,
            beta: y.beta,
            n_k: x.n_k,
        })
    } else {
        None
    }
}
