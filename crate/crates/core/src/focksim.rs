//! Discretized quantum stochastic evolutions on a slice chain, an exact
//! exponential-vector ODE oracle, and the product-formula convergence
//! experiments.
//!
//! Each time slice carries a copy of ℂ ⊕ K with the increment
//! representation Δt ↦ dt·|Ω⟩⟨Ω|, ΔA†_j ↦ √dt·|e_j⟩⟨Ω|,
//! ΔA_i ↦ √dt·|Ω⟩⟨e_i|, ΔΛ_{ij} ↦ |e_i⟩⟨e_j|. Matrix elements against
//! products of per-slice exponential vectors contract slice by slice to
//! small initial-space factors, so chains of thousands of slices cost
//! O(slices) with no global tensor ever materialized.

// Negated comparisons are used on purpose: `!(s < t)` rejects NaN inputs
// where `s >= t` would let them through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use crate::blockspace::{mat_exp, SpaceDims};
use crate::cmat::{vdot, CMat, C64, ONE};
use crate::error::{Error, Result};
use crate::qsde::{self, CoeffMatrix, LieAlgElem, SLHTriple};

/// Partition s = t₀ < t₁ < … < tₙ < t of an interval, stored as the two
/// endpoints plus the strictly increasing interior points.
#[derive(Clone, Debug)]
pub struct Partition {
    s: f64,
    t: f64,
    interior: Vec<f64>,
}

impl Partition {
    pub fn new(s: f64, t: f64, interior: Vec<f64>) -> Result<Self> {
        if !(s < t) {
            return Err(Error::InvalidArgument(format!(
                "need s < t, got s={s}, t={t}"
            )));
        }
        let mut prev = s;
        for &p in &interior {
            if !(p > prev) {
                return Err(Error::InvalidArgument(
                    "interior points must be strictly increasing inside (s, t)".into(),
                ));
            }
            prev = p;
        }
        if !(prev < t) {
            return Err(Error::InvalidArgument(
                "interior points must be strictly increasing inside (s, t)".into(),
            ));
        }
        Ok(Partition { s, t, interior })
    }

    /// Uniform partition of [s, t] into `m` slices.
    pub fn uniform(s: f64, t: f64, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidArgument("need at least one slice".into()));
        }
        let dt = (t - s) / m as f64;
        let interior = (1..m).map(|k| s + k as f64 * dt).collect();
        Partition::new(s, t, interior)
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn n_slices(&self) -> usize {
        self.interior.len() + 1
    }

    pub fn point(&self, k: usize) -> f64 {
        if k == 0 {
            self.s
        } else if k <= self.interior.len() {
            self.interior[k - 1]
        } else {
            self.t
        }
    }

    /// Bounds (tₖ, tₖ₊₁) of slice `k`.
    pub fn slice_bounds(&self, k: usize) -> (f64, f64) {
        (self.point(k), self.point(k + 1))
    }

    /// Grid size |P|: the largest slice width.
    pub fn grid_size(&self) -> f64 {
        (0..self.n_slices())
            .map(|k| {
                let (a, b) = self.slice_bounds(k);
                b - a
            })
            .fold(0.0, f64::max)
    }
}

/// Piecewise-constant K-valued function of time, given by interior
/// breakpoints and one value per piece (right-continuous).
#[derive(Clone, Debug)]
pub struct StepFunction {
    breaks: Vec<f64>,
    values: Vec<Vec<C64>>,
}

impl StepFunction {
    pub fn constant(value: Vec<C64>) -> Self {
        StepFunction {
            breaks: Vec::new(),
            values: vec![value],
        }
    }

    pub fn piecewise(breaks: Vec<f64>, values: Vec<Vec<C64>>) -> Result<Self> {
        if values.len() != breaks.len() + 1 {
            return Err(Error::InvalidArgument(
                "need one more value than breakpoints".into(),
            ));
        }
        if breaks.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidArgument(
                "breakpoints must be strictly increasing".into(),
            ));
        }
        let n_k = values.first().map_or(0, |v| v.len());
        if n_k == 0 || values.iter().any(|v| v.len() != n_k) {
            return Err(Error::InvalidArgument(
                "values must share a positive length".into(),
            ));
        }
        Ok(StepFunction { breaks, values })
    }

    pub fn zero(n_k: usize) -> Self {
        StepFunction::constant(vec![C64::new(0.0, 0.0); n_k])
    }

    pub fn n_k(&self) -> usize {
        self.values[0].len()
    }

    pub fn value_at(&self, t: f64) -> &[C64] {
        let piece = self.breaks.partition_point(|&b| b <= t);
        &self.values[piece]
    }

    /// Breakpoints falling strictly inside (s, t).
    fn breaks_within(&self, s: f64, t: f64) -> Vec<f64> {
        self.breaks
            .iter()
            .copied()
            .filter(|&b| b > s && b < t)
            .collect()
    }

    /// Samples the function onto a partition, one value per slice. Fails if
    /// a breakpoint falls strictly inside a slice, since the per-slice
    /// constant would then misrepresent the function.
    pub fn sample(&self, p: &Partition) -> Result<PiecewiseTestFn> {
        let mut values = Vec::with_capacity(p.n_slices());
        for k in 0..p.n_slices() {
            let (a, b) = p.slice_bounds(k);
            if !self.breaks_within(a, b).is_empty() {
                return Err(Error::InvalidArgument(format!(
                    "test-function breakpoint inside slice ({a}, {b}); refine the partition"
                )));
            }
            values.push(self.value_at(a).to_vec());
        }
        Ok(PiecewiseTestFn { values })
    }
}

/// A test function already aligned to a partition: one constant K-value
/// per slice.
#[derive(Clone, Debug)]
pub struct PiecewiseTestFn {
    values: Vec<Vec<C64>>,
}

impl PiecewiseTestFn {
    pub fn new(values: Vec<Vec<C64>>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidArgument(
                "need at least one slice value".into(),
            ));
        }
        let n_k = values[0].len();
        if values.iter().any(|v| v.len() != n_k) {
            return Err(Error::InvalidArgument(
                "slice values must share a length".into(),
            ));
        }
        Ok(PiecewiseTestFn { values })
    }

    pub fn n_slices(&self) -> usize {
        self.values.len()
    }

    pub fn n_k(&self) -> usize {
        self.values[0].len()
    }

    pub fn value(&self, k: usize) -> &[C64] {
        &self.values[k]
    }
}

/// Matrix-element specification ⟨u ⊗ ε(f), · v ⊗ ε(g)⟩: initial-space
/// vectors u, v and piecewise-constant test functions f, g.
#[derive(Clone, Debug)]
pub struct MatrixElementSpec {
    pub u: Vec<C64>,
    pub v: Vec<C64>,
    pub f: StepFunction,
    pub g: StepFunction,
}

impl MatrixElementSpec {
    pub fn new(u: Vec<C64>, v: Vec<C64>, f: StepFunction, g: StepFunction) -> Result<Self> {
        if u.len() != v.len() || u.is_empty() {
            return Err(Error::DimMismatch(
                "u and v must have equal positive length".into(),
            ));
        }
        if f.n_k() != g.n_k() {
            return Err(Error::DimMismatch(
                "f and g must take values in the same space".into(),
            ));
        }
        Ok(MatrixElementSpec { u, v, f, g })
    }

    /// Vacuum elements: constant-zero test functions.
    pub fn vacuum(u: Vec<C64>, v: Vec<C64>, n_k: usize) -> Result<Self> {
        MatrixElementSpec::new(u, v, StepFunction::zero(n_k), StepFunction::zero(n_k))
    }

    pub fn n_h(&self) -> usize {
        self.u.len()
    }

    pub fn n_k(&self) -> usize {
        self.f.n_k()
    }

    fn check_dims(&self, dims: SpaceDims) -> Result<()> {
        if self.n_h() != dims.n_h || self.n_k() != dims.n_k {
            return Err(Error::DimMismatch(format!(
                "matrix-element spec for (n_h={}, n_k={}) used with {:?}",
                self.n_h(),
                self.n_k(),
                dims
            )));
        }
        Ok(())
    }
}

/// One-slice discretization of the evolution generated by G:
/// I + D(dt)·G·D(dt) with D(dt) = diag(√dt·I_h, I_{h⊗K}), i.e.
/// [[I + K·dt, √dt·M], [√dt·L, N]].
pub fn slice_operator(g: &CoeffMatrix, dt: f64) -> Result<CMat> {
    if !(dt > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "slice width must be positive, got {dt}"
        )));
    }
    let dims = g.dims();
    let mut o = g.g().clone();
    let sqrt_dt = dt.sqrt();
    for i in 0..dims.total() {
        for j in 0..dims.total() {
            let row_scale = if i < dims.n_h { sqrt_dt } else { 1.0 };
            let col_scale = if j < dims.n_h { sqrt_dt } else { 1.0 };
            o[(i, j)] *= C64::new(row_scale * col_scale, 0.0);
        }
    }
    Ok(&o + &CMat::identity(dims.total()))
}

/// Scaled Lie-algebra element D(dt)·H·D(dt) whose ordinary exponential is
/// the per-slice factor of the time-ordered exponential.
fn scaled_lie_rep(h: &LieAlgElem, dt: f64) -> CMat {
    let dims = h.dims();
    let mut m = h.full();
    let sqrt_dt = dt.sqrt();
    for i in 0..dims.total() {
        for j in 0..dims.total() {
            let row_scale = if i < dims.n_h { sqrt_dt } else { 1.0 };
            let col_scale = if j < dims.n_h { sqrt_dt } else { 1.0 };
            m[(i, j)] *= C64::new(row_scale * col_scale, 0.0);
        }
    }
    m
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum SliceOrder {
    /// Left process: later slices multiply on the left.
    LaterLeftmost,
    /// Right process: earlier slices multiply on the left.
    EarlierLeftmost,
}

/// Contracts ⟨u ⊗ ⊗ₖξₖ, (Πₖ Oₖ) v ⊗ ⊗ₖζₖ⟩ for per-slice operators Oₖ on
/// h ⊗ (ℂ⊕K) and per-slice discrete exponential vectors ξₖ = (1, √Δtₖ fₖ),
/// ζₖ = (1, √Δtₖ gₖ). Later slices multiply on the left.
pub fn contract_evolution(
    slices: &[CMat],
    p: &Partition,
    f: &PiecewiseTestFn,
    g: &PiecewiseTestFn,
    u: &[C64],
    v: &[C64],
    dims: SpaceDims,
) -> Result<C64> {
    contract_with_order(slices, p, f, g, u, v, dims, SliceOrder::LaterLeftmost)
}

#[allow(clippy::too_many_arguments)]
fn contract_with_order(
    slices: &[CMat],
    p: &Partition,
    f: &PiecewiseTestFn,
    g: &PiecewiseTestFn,
    u: &[C64],
    v: &[C64],
    dims: SpaceDims,
    order: SliceOrder,
) -> Result<C64> {
    let n = p.n_slices();
    if slices.len() != n || f.n_slices() != n || g.n_slices() != n {
        return Err(Error::DimMismatch(format!(
            "{} slices with {} operators, {} f-values, {} g-values",
            n,
            slices.len(),
            f.n_slices(),
            g.n_slices()
        )));
    }
    if f.n_k() != dims.n_k || g.n_k() != dims.n_k || u.len() != dims.n_h || v.len() != dims.n_h {
        return Err(Error::DimMismatch("contraction dimensions disagree".into()));
    }
    if slices
        .iter()
        .any(|o| o.rows() != dims.total() || o.cols() != dims.total())
    {
        return Err(Error::DimMismatch(
            "slice operator has the wrong shape".into(),
        ));
    }
    let mut w = v.to_vec();
    let order_indices: Box<dyn Iterator<Item = usize>> = match order {
        SliceOrder::LaterLeftmost => Box::new(0..n),
        SliceOrder::EarlierLeftmost => Box::new((0..n).rev()),
    };
    for k in order_indices {
        let (a, b) = p.slice_bounds(k);
        let sqrt_dt = (b - a).sqrt();
        // discrete exponential vectors on the slice factor C + K
        let xi: Vec<C64> = std::iter::once(ONE)
            .chain(f.value(k).iter().map(|z| z * sqrt_dt))
            .collect();
        let zeta: Vec<C64> = std::iter::once(ONE)
            .chain(g.value(k).iter().map(|z| z * sqrt_dt))
            .collect();
        let o = &slices[k];
        let e = CMat::from_fn(dims.n_h, dims.n_h, |i, i2| {
            let mut acc = C64::new(0.0, 0.0);
            for (alpha, xa) in xi.iter().enumerate() {
                if *xa == C64::new(0.0, 0.0) {
                    continue;
                }
                let row = dims.flat_index(i, alpha);
                for (beta, zb) in zeta.iter().enumerate() {
                    acc += xa.conj() * zb * o[(row, dims.flat_index(i2, beta))];
                }
            }
            acc
        });
        w = e.mul_vec(&w);
    }
    Ok(vdot(u, &w))
}

/// Exact propagator of the exponential-vector matrix element: for
/// piecewise-constant f, g the n_h×n_h matrix X(t) with
/// ⟨u, X(t)v⟩ = ⟨u ⊗ ε_{[s,t)}(f), V(t,s) v ⊗ ε_{[s,t)}(g)⟩ solves
/// dX/dτ = C(τ)X with X(s) = I and
/// C = K + M·g + f†·L + f†·N·g (the contraction of the model matrix
/// δ̂+G against (1, f) and (1, g)), so X is a product of slice-wise
/// matrix exponentials.
pub fn ode_propagator(
    g: &CoeffMatrix,
    f_fn: &StepFunction,
    g_fn: &StepFunction,
    s: f64,
    t: f64,
) -> Result<CMat> {
    if !(s < t) {
        return Err(Error::InvalidArgument(format!(
            "need s < t, got s={s}, t={t}"
        )));
    }
    let dims = g.dims();
    if f_fn.n_k() != dims.n_k || g_fn.n_k() != dims.n_k {
        return Err(Error::DimMismatch(
            "test functions do not match the multiplicity space".into(),
        ));
    }
    let mut points: Vec<f64> = f_fn
        .breaks_within(s, t)
        .into_iter()
        .chain(g_fn.breaks_within(s, t))
        .collect();
    points.sort_by(|a, b| a.partial_cmp(b).unwrap());
    points.dedup();
    let (k, m, l, n) = (g.k_block(), g.m_block(), g.l_block(), g.n_block());
    let mut x = CMat::identity(dims.n_h);
    let mut left = s;
    for right in points.into_iter().chain(std::iter::once(t)) {
        let fa = f_fn.value_at(left);
        let ga = g_fn.value_at(left);
        let c = effective_drift(dims, &k, &m, &l, &n, fa, ga);
        let step = mat_exp(&c.scale(C64::new(right - left, 0.0)))?;
        x = &step * &x;
        left = right;
    }
    Ok(x)
}

fn effective_drift(
    dims: SpaceDims,
    k: &CMat,
    m: &CMat,
    l: &CMat,
    n: &CMat,
    f: &[C64],
    g: &[C64],
) -> CMat {
    CMat::from_fn(dims.n_h, dims.n_h, |i, i2| {
        let mut acc = k[(i, i2)];
        for (j, gj) in g.iter().enumerate() {
            acc += m[(i, i2 * dims.n_k + j)] * gj;
        }
        for (j, fj) in f.iter().enumerate() {
            acc += fj.conj() * l[(i * dims.n_k + j, i2)];
        }
        for (j, fj) in f.iter().enumerate() {
            for (j2, gj2) in g.iter().enumerate() {
                acc += fj.conj() * n[(i * dims.n_k + j, i2 * dims.n_k + j2)] * gj2;
            }
        }
        acc
    })
}

/// Exact matrix element ⟨u ⊗ ε_{[s,t)}(f), V(t,s) v ⊗ ε_{[s,t)}(g)⟩ of the
/// evolution generated by G, with the exponential vectors supported on
/// [s, t) only.
pub fn ode_oracle(g: &CoeffMatrix, spec: &MatrixElementSpec, s: f64, t: f64) -> Result<C64> {
    spec.check_dims(g.dims())?;
    let x = ode_propagator(g, &spec.f, &spec.g, s, t)?;
    Ok(vdot(&spec.u, &x.mul_vec(&spec.v)))
}

/// Simulated matrix element of the product-limit evolution: one slice
/// operator per partition slice, contracted against the discrete
/// exponential vectors.
pub fn simulate_v(g: &CoeffMatrix, p: &Partition, spec: &MatrixElementSpec) -> Result<C64> {
    simulate_product(&[g], p, spec)
}

/// Interval-wise product of several evolutions: on each slice the factor
/// operators multiply left to right in the order given, so `factors[0]`
/// is the leftmost (downstream) evolution.
pub fn simulate_product(
    factors: &[&CoeffMatrix],
    p: &Partition,
    spec: &MatrixElementSpec,
) -> Result<C64> {
    let first = factors
        .first()
        .ok_or_else(|| Error::InvalidArgument("need at least one factor".into()))?;
    let dims = first.dims();
    for g in factors {
        if g.dims() != dims {
            return Err(Error::DimMismatch(
                "interval-wise factors on different spaces".into(),
            ));
        }
    }
    spec.check_dims(dims)?;
    let f = spec.f.sample(p)?;
    let gf = spec.g.sample(p)?;
    let slices: Result<Vec<CMat>> = (0..p.n_slices())
        .map(|k| {
            let (a, b) = p.slice_bounds(k);
            let mut o: Option<CMat> = None;
            for g in factors {
                let s = slice_operator(g, b - a)?;
                o = Some(match o {
                    None => s,
                    Some(acc) => &acc * &s,
                });
            }
            Ok(o.unwrap())
        })
        .collect();
    contract_evolution(&slices?, p, &f, &gf, &spec.u, &spec.v, dims)
}

/// Interval-wise product [V_{G₂}·V_{G₁}] with G₂ leftmost.
pub fn simulate_trotter(
    g2: &CoeffMatrix,
    g1: &CoeffMatrix,
    p: &Partition,
    spec: &MatrixElementSpec,
) -> Result<C64> {
    simulate_product(&[g2, g1], p, spec)
}

/// Time-ordered exponential: per-slice factor exp{ΔH} instead of I + ΔG.
pub fn simulate_holevo(h: &LieAlgElem, p: &Partition, spec: &MatrixElementSpec) -> Result<C64> {
    let dims = h.dims();
    spec.check_dims(dims)?;
    let f = spec.f.sample(p)?;
    let gf = spec.g.sample(p)?;
    let slices: Result<Vec<CMat>> = (0..p.n_slices())
        .map(|k| {
            let (a, b) = p.slice_bounds(k);
            mat_exp(&scaled_lie_rep(h, b - a))
        })
        .collect();
    contract_evolution(&slices?, p, &f, &gf, &spec.u, &spec.v, dims)
}

/// Discretized right process U(t,s) = I + ∫ U dG: identical slice
/// operators, multiplied with earlier slices leftmost.
pub fn simulate_right_process(
    g: &CoeffMatrix,
    p: &Partition,
    spec: &MatrixElementSpec,
) -> Result<C64> {
    let dims = g.dims();
    spec.check_dims(dims)?;
    let f = spec.f.sample(p)?;
    let gf = spec.g.sample(p)?;
    let slices: Result<Vec<CMat>> = (0..p.n_slices())
        .map(|k| {
            let (a, b) = p.slice_bounds(k);
            slice_operator(g, b - a)
        })
        .collect();
    contract_with_order(
        &slices?,
        p,
        &f,
        &gf,
        &spec.u,
        &spec.v,
        dims,
        SliceOrder::EarlierLeftmost,
    )
}

/// One row of a convergence table: slice count, grid size, absolute and
/// relative error against the oracle, and the empirical order between
/// consecutive rows (NaN on the first row).
#[derive(Clone, Copy, Debug)]
pub struct ConvergenceRow {
    pub m: usize,
    pub dt: f64,
    pub abs_error: f64,
    pub rel_error: f64,
    pub order: f64,
}

/// Runs a refinement sweep of a simulator against a fixed target value.
fn convergence_table(
    sim: impl Fn(&Partition) -> Result<C64>,
    target: C64,
    s: f64,
    t: f64,
    grid_sizes: &[usize],
) -> Result<Vec<ConvergenceRow>> {
    if grid_sizes.is_empty() {
        return Err(Error::InvalidArgument("empty grid-size list".into()));
    }
    if grid_sizes.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument(
            "slice counts must be strictly increasing (grid sizes decreasing)".into(),
        ));
    }
    let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(grid_sizes.len());
    for &m in grid_sizes {
        let p = Partition::uniform(s, t, m)?;
        let value = sim(&p)?;
        let abs_error = (value - target).norm();
        let rel_error = if target.norm() > 0.0 {
            abs_error / target.norm()
        } else {
            f64::NAN
        };
        let order = match rows.last() {
            Some(prev) if abs_error > 0.0 && prev.abs_error > 0.0 => {
                (prev.abs_error / abs_error).ln() / (m as f64 / prev.m as f64).ln()
            }
            _ => f64::NAN,
        };
        rows.push(ConvergenceRow {
            m,
            dt: (t - s) / m as f64,
            abs_error,
            rel_error,
            order,
        });
    }
    Ok(rows)
}

/// Convergence sweep of an interval-wise product toward the oracle of an
/// explicit target generator (the series product of the factors in the
/// canonical experiment; anything else for control runs).
pub fn product_experiment(
    factors: &[&CoeffMatrix],
    target: &CoeffMatrix,
    spec: &MatrixElementSpec,
    t_end: f64,
    grid_sizes: &[usize],
) -> Result<Vec<ConvergenceRow>> {
    let target_value = ode_oracle(target, spec, 0.0, t_end)?;
    convergence_table(
        |p| simulate_product(factors, p, spec),
        target_value,
        0.0,
        t_end,
        grid_sizes,
    )
}

/// Convergence of [V_{G₂}·V_{G₁}]_P toward the evolution generated by
/// G₂ ◁ G₁ on uniform partitions of [0, t].
pub fn trotter_experiment(
    g2: &CoeffMatrix,
    g1: &CoeffMatrix,
    spec: &MatrixElementSpec,
    t_end: f64,
    grid_sizes: &[usize],
) -> Result<Vec<ConvergenceRow>> {
    let target = qsde::series(g2, g1)?;
    product_experiment(&[g2, g1], &target, spec, t_end, grid_sizes)
}

/// Convergence of the time-ordered exponential toward the evolution
/// generated by the exponential map of its Lie-algebra element.
pub fn holevo_experiment(
    h: &LieAlgElem,
    spec: &MatrixElementSpec,
    t_end: f64,
    grid_sizes: &[usize],
) -> Result<Vec<ConvergenceRow>> {
    let target = qsde::hat_exp(h)?;
    let target_value = ode_oracle(&target, spec, 0.0, t_end)?;
    convergence_table(
        |p| simulate_holevo(h, p, spec),
        target_value,
        0.0,
        t_end,
        grid_sizes,
    )
}

/// The fixed non-commuting reference pair used by the convergence
/// experiments: two scalar scattering triples ampliated to a two-level
/// initial space, with a fixed 2x2 Hamiltonian added to each drift.
/// Returns (G2, G1, spec, t).
pub fn reference_pair() -> (CoeffMatrix, CoeffMatrix, MatrixElementSpec, f64) {
    let h_fix = CMat::from_rows(&[
        vec![C64::new(0.3, 0.0), C64::new(0.2, -0.1)],
        vec![C64::new(0.2, 0.1), C64::new(-0.3, 0.0)],
    ])
    .unwrap();
    let phase = C64::from_polar(1.0, std::f64::consts::FRAC_PI_4);
    let g1 = {
        let slh = SLHTriple::new(CMat::identity(2), CMat::identity(2), h_fix.clone()).unwrap();
        qsde::slh_to_coeff(&slh)
    };
    let g2 = {
        let slh = SLHTriple::new(
            CMat::identity(2).scale(phase),
            CMat::identity(2).scale(C64::new(0.0, 1.0)),
            &CMat::identity(2).scale(C64::new(0.5, 0.0)) + &h_fix,
        )
        .unwrap();
        qsde::slh_to_coeff(&slh)
    };
    let spec = MatrixElementSpec::new(
        vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
        vec![C64::new(0.6, 0.0), C64::new(0.8, 0.0)],
        StepFunction::constant(vec![C64::new(0.4, 0.2)]),
        StepFunction::constant(vec![C64::new(0.3, -0.5)]),
    )
    .unwrap();
    (g2, g1, spec, 1.0)
}
