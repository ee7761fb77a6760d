//! Amplitude amplification for any input-independent success probability λ.
//!
//! Relative to the split "`W ⊗ |0_X⟩` slice versus its complement", the
//! projector `A⁻¹ΠA` has the block form
//!
//! ```text
//!        ⎡ λ·I_W   Π₁₂† ⎤
//!        ⎣ Π₁₂     Π₂₂  ⎦
//! ```
//!
//! whenever the success probability does not depend on the auxiliary input.
//! Idempotence then forces three identities on the blocks, and the step
//! `A·S₀^φ·A⁻¹·S₁^φ'` leaves `span{|succ⟩, |fail⟩}` invariant for every
//! auxiliary state, acting there as the 2×2 matrix of [`subspace_matrix`].
//! All of amplitude amplification then reduces to that matrix.

use nalgebra::{DMatrix, Matrix2, Vector2};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::protocol::{REG_A, REG_B, REG_V, REG_W};
use crate::registers::{
    check_unit, project, Branch, LinearOp, MaxAbs, OpKind, RegisterLayout, StateVector, DENSE_LIMIT,
};
use crate::simulator::{phase_s0, phase_s1, success_projector, uniform_prep, Completion};
use crate::{OP_TOL, ZERO_NORM};

/// A unitary `A` with a success projector `Π`, acting on a layout whose
/// first register holds the auxiliary input.
pub trait AmplitudeCircuit {
    fn layout(&self) -> &RegisterLayout;
    fn a_op(&self) -> &LinearOp;
    fn a_inv(&self) -> &LinearOp;
    fn pi_op(&self) -> &LinearOp;

    fn aux_layout(&self) -> RegisterLayout {
        let r = &self.layout().registers()[0];
        RegisterLayout::new(&[(r.name.as_str(), r.dim)]).expect("valid register")
    }

    /// `|ψ⟩|0_X⟩`.
    fn embed(&self, aux: &StateVector) -> Result<StateVector> {
        embed_aux(self.layout(), aux)
    }

    /// `A|ψ⟩|0_X⟩`.
    fn prepare(&self, aux: &StateVector) -> Result<StateVector> {
        self.a_op().apply(&self.embed(aux)?)
    }

    fn s0(&self, phi: Complex64) -> Result<LinearOp> {
        phase_s0(self.layout(), phi)
    }

    fn s1(&self, varphi: Complex64) -> Result<LinearOp> {
        phase_s1(self.pi_op(), varphi)
    }

    /// `A·S₀^φ·A⁻¹·S₁^φ'`.
    fn step(&self, phases: PhasePair) -> Result<LinearOp> {
        LinearOp::product(vec![
            self.a_op().clone(),
            self.s0(phases.phi)?,
            self.a_inv().clone(),
            self.s1(phases.varphi)?,
        ])
    }

    /// `A·S₀^{-1}·A⁻¹`, the reflection about `A|ψ⟩|0_X⟩` states.
    fn reflection(&self) -> Result<LinearOp> {
        self.step(PhasePair::REFLECT_ONLY)
    }

    /// `⟨0_X|A⁻¹ΠA|0_X⟩` as a `dim_W × dim_W` matrix.
    fn slice_block(&self) -> Result<DMatrix<Complex64>> {
        let layout = self.layout();
        let w = layout.registers()[0].dim;
        let dim_x = layout.total_dim() / w;
        let mut block = DMatrix::zeros(w, w);
        for j in 0..w {
            let e = StateVector::basis_index(layout, j * dim_x);
            let a = self.a_op().apply(&e)?;
            let p = self.pi_op().apply_raw(a.as_raw())?;
            let back = self.a_inv().apply_raw(&p)?;
            for i in 0..w {
                block[(i, j)] = back.amps()[i * dim_x];
            }
        }
        Ok(block)
    }
}

/// `|ψ⟩ ⊗ |0⟩` on every register after the first.
pub fn embed_aux(layout: &RegisterLayout, aux: &StateVector) -> Result<StateVector> {
    let first = &layout.registers()[0];
    let expect = RegisterLayout::new(&[(first.name.as_str(), first.dim)])?;
    if aux.layout() != &expect {
        return Err(Error::LayoutMismatch(format!(
            "auxiliary input must live on {expect}, got {}",
            aux.layout()
        )));
    }
    let rest: Vec<(&str, usize)> = layout.registers()[1..]
        .iter()
        .map(|r| (r.name.as_str(), r.dim))
        .collect();
    let rest = RegisterLayout::new(&rest)?;
    aux.tensor(&StateVector::zero(&rest))
}

/// Spectral norm.
pub fn operator_norm(m: &DMatrix<Complex64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.singular_values().max()
}

/// Phase pair `(φ, φ')` of the step `A·S₀^φ·A⁻¹·S₁^φ'`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePair {
    pub phi: Complex64,
    pub varphi: Complex64,
}

impl PhasePair {
    /// The standard Grover iterate, up to a global sign.
    pub const GROVER: Self = Self {
        phi: Complex64::new(-1.0, 0.0),
        varphi: Complex64::new(-1.0, 0.0),
    };
    /// `φ = φ' = i`, exact in one step at λ = ½.
    pub const IMAGINARY: Self = Self {
        phi: Complex64::new(0.0, 1.0),
        varphi: Complex64::new(0.0, 1.0),
    };
    /// Reflection about the prepared state with no success phase.
    pub const REFLECT_ONLY: Self = Self {
        phi: Complex64::new(-1.0, 0.0),
        varphi: Complex64::new(1.0, 0.0),
    };

    pub fn new(phi: Complex64, varphi: Complex64) -> Result<Self> {
        check_unit(phi)?;
        check_unit(varphi)?;
        Ok(Self { phi, varphi })
    }

    pub fn from_angles(theta_phi: f64, theta_varphi: f64) -> Self {
        Self {
            phi: Complex64::from_polar(1.0, theta_phi),
            varphi: Complex64::from_polar(1.0, theta_varphi),
        }
    }

    /// Angles in `[0, 2π)`.
    pub fn angles(&self) -> (f64, f64) {
        let wrap = |z: Complex64| z.arg().rem_euclid(std::f64::consts::TAU);
        (wrap(self.phi), wrap(self.varphi))
    }
}

/// Blocks of `A⁻¹ΠA` relative to the `W ⊗ |0_X⟩` slice.
#[derive(Debug, Clone)]
pub struct BlockDecomposition {
    pub lambda: f64,
    /// Complement rows, slice columns.
    pub pi12: DMatrix<Complex64>,
    /// Complement rows and columns.
    pub pi22: DMatrix<Complex64>,
    /// Slice rows, complement columns; equals `pi12†` for a projector.
    pub pi21: DMatrix<Complex64>,
    /// Flat indices of the slice, one per basis state of the first register.
    pub slice: Vec<usize>,
}

/// Splits `A⁻¹ΠA` into blocks and extracts λ.
///
/// Fails with [`Error::NotLambdaUniform`] when the top-left block is not a
/// multiple of the identity, i.e. when the success probability depends on
/// the auxiliary input.
pub fn block_decompose(a_op: &LinearOp, pi_op: &LinearOp) -> Result<BlockDecomposition> {
    if a_op.kind() != OpKind::Unitary || pi_op.kind() != OpKind::Projector {
        return Err(Error::WrongKind("block_decompose needs a unitary and a projector"));
    }
    if a_op.layout() != pi_op.layout() {
        return Err(Error::LayoutMismatch("A and Π act on different layouts".into()));
    }
    let layout = a_op.layout();
    let n = layout.total_dim();
    if n > DENSE_LIMIT {
        return Err(Error::TooLarge {
            what: "block decomposition",
            size: n,
            limit: DENSE_LIMIT,
        });
    }
    let a_inv = a_op.adjoint();
    let mut m = DMatrix::zeros(n, n);
    for j in 0..n {
        let e = StateVector::basis_index(layout, j);
        let col = a_inv.apply_raw(&pi_op.apply_raw(a_op.apply(&e)?.as_raw())?)?;
        m.set_column(j, col.amps());
    }
    let w = layout.registers()[0].dim;
    let dim_x = n / w;
    let slice: Vec<usize> = (0..w).map(|i| i * dim_x).collect();
    let comp: Vec<usize> = (0..n).filter(|i| i % dim_x != 0).collect();
    let top = m.select_rows(&slice).select_columns(&slice);
    let lambda = top.trace().re / w as f64;
    let dev = (&top - DMatrix::from_diagonal_element(w, w, Complex64::new(lambda, 0.0))).max_abs();
    if dev > OP_TOL {
        return Err(Error::NotLambdaUniform(dev));
    }
    Ok(BlockDecomposition {
        lambda,
        pi12: m.select_rows(&comp).select_columns(&slice),
        pi22: m.select_rows(&comp).select_columns(&comp),
        pi21: m.select_rows(&slice).select_columns(&comp),
        slice,
    })
}

/// Operator norms of the three consequences of `(A⁻¹ΠA)² = A⁻¹ΠA`:
///
/// 1. `(λ² − λ)·I + Π₁₂†Π₁₂`
/// 2. `(λ − 1)·Π₁₂ + Π₂₂Π₁₂`
/// 3. `Π₁₂Π₁₂† + Π₂₂² − Π₂₂`
pub fn verify_block_identities(b: &BlockDecomposition) -> [f64; 3] {
    let w = b.pi12.ncols();
    let l = b.lambda;
    let c = |x: f64| Complex64::new(x, 0.0);
    let first = DMatrix::from_diagonal_element(w, w, c(l * l - l)) + b.pi12.adjoint() * &b.pi12;
    let second = b.pi12.map(|z| z * (l - 1.0)) + &b.pi22 * &b.pi12;
    let third = &b.pi12 * b.pi12.adjoint() + &b.pi22 * &b.pi22 - &b.pi22;
    [operator_norm(&first), operator_norm(&second), operator_norm(&third)]
}

/// `|succ⟩ = ΠA|ψ0⟩/√λ` and `|fail⟩ = (I − Π)A|ψ0⟩/√(1 − λ)`.
#[derive(Debug, Clone)]
pub struct SuccFail {
    pub succ: StateVector,
    pub fail: StateVector,
    pub lambda: f64,
}

pub fn succ_fail_states<C: AmplitudeCircuit + ?Sized>(circuit: &C, aux: &StateVector) -> Result<SuccFail> {
    let s = circuit.prepare(aux)?;
    let good = project(circuit.pi_op(), &s)?;
    let bad = project(&circuit.pi_op().complement()?, &s)?;
    match (good.branch, bad.branch) {
        (Branch::Collapsed(succ), Branch::Collapsed(fail)) => Ok(SuccFail {
            succ,
            fail,
            lambda: good.prob,
        }),
        _ => Err(Error::DegenerateLambda(good.prob)),
    }
}

fn check_open_unit(lambda: f64) -> Result<()> {
    if !(lambda > ZERO_NORM && lambda < 1.0 - ZERO_NORM) {
        return Err(Error::DegenerateLambda(lambda));
    }
    Ok(())
}

/// Matrix of `A·S₀^φ·A⁻¹·S₁^φ'` in the `(succ, fail)` basis; column 0 is
/// the image of `|succ⟩`, column 1 the image of `|fail⟩`.
pub fn subspace_matrix(lambda: f64, phases: PhasePair) -> Result<Matrix2<Complex64>> {
    check_open_unit(lambda)?;
    let one = Complex64::new(1.0, 0.0);
    let (phi, varphi) = (phases.phi, phases.varphi);
    let r = (lambda * (1.0 - lambda)).sqrt();
    Ok(Matrix2::new(
        varphi * (lambda * phi + 1.0 - lambda),
        -(one - phi) * r,
        -varphi * (one - phi) * r,
        lambda + (1.0 - lambda) * phi,
    ))
}

/// Rotation `[[cos 2θ, sin 2θ], [−sin 2θ, cos 2θ]]` with `sin²θ = λ`.
pub fn grover_rotation(lambda: f64) -> Matrix2<f64> {
    let theta = lambda.sqrt().asin();
    let (s, c) = (2.0 * theta).sin_cos();
    Matrix2::new(c, s, -s, c)
}

/// 2D coordinates `(c_succ, c_fail)` of a state in the invariant plane.
pub type TwoDimState = Vector2<Complex64>;

pub fn initial_two_dim(lambda: f64) -> TwoDimState {
    Vector2::new(
        Complex64::new(lambda.sqrt(), 0.0),
        Complex64::new((1.0 - lambda).sqrt(), 0.0),
    )
}

/// Leakage out of the plane and deviation from [`subspace_matrix`].
#[derive(Debug, Clone, Copy)]
pub struct ClosureCheck {
    pub leakage: f64,
    pub deviation: f64,
}

impl ClosureCheck {
    pub fn residual(&self) -> f64 {
        self.leakage + self.deviation
    }
}

/// Applies the full-space step to `|succ⟩` and `|fail⟩` and compares with
/// the 2×2 prediction.
pub fn verify_subspace_closure<C: AmplitudeCircuit + ?Sized>(
    circuit: &C,
    aux: &StateVector,
    phases: PhasePair,
) -> Result<ClosureCheck> {
    let sf = succ_fail_states(circuit, aux)?;
    let m = subspace_matrix(sf.lambda, phases)?;
    let g = circuit.step(phases)?;
    let mut leakage: f64 = 0.0;
    let mut deviation: f64 = 0.0;
    for (col, v) in [&sf.succ, &sf.fail].into_iter().enumerate() {
        let img = g.apply(v)?;
        let (cs, cf, leak) = plane_coordinates(&sf, &img)?;
        leakage = leakage.max(leak);
        deviation = deviation.max((cs - m[(0, col)]).norm()).max((cf - m[(1, col)]).norm());
    }
    Ok(ClosureCheck { leakage, deviation })
}

/// `(⟨succ|v⟩, ⟨fail|v⟩, ‖v − projection‖)`.
fn plane_coordinates(sf: &SuccFail, v: &StateVector) -> Result<(Complex64, Complex64, f64)> {
    let cs = sf.succ.as_raw().inner(v.as_raw())?;
    let cf = sf.fail.as_raw().inner(v.as_raw())?;
    let inplane = sf.succ.as_raw().scale(cs).add(&sf.fail.as_raw().scale(cf))?;
    Ok((cs, cf, v.as_raw().distance(&inplane)?))
}

/// One point of a full-space trajectory compared with the 2D model.
#[derive(Debug, Clone, Copy)]
pub struct TrajectoryPoint {
    pub full: TwoDimState,
    pub predicted: TwoDimState,
    pub leakage: f64,
}

impl TrajectoryPoint {
    pub fn disagreement(&self) -> f64 {
        (self.full - self.predicted).norm()
    }
}

/// Runs `A|ψ0⟩` through the given steps in full space and in the plane.
pub fn trajectory<C: AmplitudeCircuit + ?Sized>(
    circuit: &C,
    aux: &StateVector,
    steps: &[PhasePair],
) -> Result<Vec<TrajectoryPoint>> {
    let sf = succ_fail_states(circuit, aux)?;
    let mut state = circuit.prepare(aux)?;
    let mut predicted = initial_two_dim(sf.lambda);
    let mut out = Vec::with_capacity(steps.len());
    for &phases in steps {
        state = circuit.step(phases)?.apply(&state)?;
        predicted = subspace_matrix(sf.lambda, phases)? * predicted;
        let (cs, cf, leakage) = plane_coordinates(&sf, &state)?;
        out.push(TrajectoryPoint {
            full: Vector2::new(cs, cf),
            predicted,
            leakage,
        });
    }
    Ok(out)
}

/// The schedule used by [`solve_phases`]: `k − 1` Grover steps, then one
/// step with the free phases.
pub fn phase_schedule(k: usize, last: PhasePair) -> Vec<PhasePair> {
    let mut s = vec![PhasePair::GROVER; k.saturating_sub(1)];
    s.push(last);
    s
}

/// Evolves the initial plane state through `steps` with the 2D model.
pub fn evolve_two_dim(lambda: f64, steps: &[PhasePair]) -> Result<TwoDimState> {
    let mut x = initial_two_dim(lambda);
    for &p in steps {
        x = subspace_matrix(lambda, p)? * x;
    }
    Ok(x)
}

/// A solution of [`solve_phases`].
#[derive(Debug, Clone, Copy)]
pub struct PhaseSolution {
    pub phases: PhasePair,
    pub iterations: usize,
    pub fail_amplitude: f64,
}

const GRID: usize = 256;
const CANDIDATES: usize = 24;
const NEWTON_ITERS: usize = 60;
const ACCEPT: f64 = 1e-10;

/// Finds `(φ, φ')` such that `k − 1` Grover steps followed by one
/// `(φ, φ')` step leave no amplitude on `|fail⟩`.
///
/// Scans a grid over both angles, refines the best cells with Newton's
/// method on the complex fail amplitude, and returns the converged solution
/// with lexicographically smallest angles. If nothing converges the
/// instance is reported as [`Error::Infeasible`].
pub fn solve_phases(lambda: f64, k: usize) -> Result<PhaseSolution> {
    check_open_unit(lambda)?;
    if k == 0 {
        return Err(Error::InvalidArgument("at least one iteration is needed".into()));
    }
    let before = evolve_two_dim(lambda, &vec![PhasePair::GROVER; k - 1])?;
    let fail_after = |t1: f64, t2: f64| -> Complex64 {
        let m = subspace_matrix(lambda, PhasePair::from_angles(t1, t2)).expect("open interval");
        (m * before)[1]
    };

    let tau = std::f64::consts::TAU;
    let h = tau / GRID as f64;
    let mut cells: Vec<(f64, f64, f64)> = Vec::with_capacity(GRID * GRID);
    for i in 0..GRID {
        for j in 0..GRID {
            let (t1, t2) = (i as f64 * h, j as f64 * h);
            cells.push((fail_after(t1, t2).norm(), t1, t2));
        }
    }
    cells.sort_by(|a, b| a.0.total_cmp(&b.0));

    let r = (lambda * (1.0 - lambda)).sqrt();
    let mut found: Vec<PhaseSolution> = Vec::new();
    for &(_, t1, t2) in cells.iter().take(CANDIDATES) {
        let (mut a, mut b) = (t1, t2);
        for _ in 0..NEWTON_ITERS {
            let f = fail_after(a, b);
            if f.norm() < 1e-15 {
                break;
            }
            let (phi, varphi) = (Complex64::from_polar(1.0, a), Complex64::from_polar(1.0, b));
            let i = Complex64::i();
            let d1 = varphi * r * i * phi * before[0] + (1.0 - lambda) * i * phi * before[1];
            let d2 = -i * varphi * r * (1.0 - phi) * before[0];
            let (ja, jb, jc, jd) = (d1.re, d2.re, d1.im, d2.im);
            let det = ja * jd - jb * jc;
            let (da, db) = if det.abs() > 1e-14 {
                ((-f.re * jd + f.im * jb) / det, (f.re * jc - f.im * ja) / det)
            } else {
                // gradient step on |f|² when the Jacobian is singular
                let g = (ja * f.re + jc * f.im, jb * f.re + jd * f.im);
                let n2 = g.0 * g.0 + g.1 * g.1;
                if n2 < 1e-30 {
                    break;
                }
                let s = f.norm_sqr() / n2;
                (-s * g.0, -s * g.1)
            };
            a += da;
            b += db;
        }
        let amp = fail_after(a, b).norm();
        if amp <= ACCEPT {
            let phases = PhasePair::from_angles(a, b);
            found.push(PhaseSolution {
                phases,
                iterations: k,
                fail_amplitude: amp,
            });
        }
    }
    found
        .into_iter()
        .min_by(|x, y| {
            let (a, b) = (x.phases.angles(), y.phases.angles());
            a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1))
        })
        .ok_or(Error::Infeasible { lambda, iterations: k })
}

/// Smallest `k ≤ max_k` for which [`solve_phases`] succeeds.
pub fn min_iterations(lambda: f64, max_k: usize) -> Result<PhaseSolution> {
    for k in 1..=max_k {
        match solve_phases(lambda, k) {
            Ok(s) => return Ok(s),
            Err(Error::Infeasible { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::Infeasible {
        lambda,
        iterations: max_k,
    })
}

/// Smallest λ for which the solver finds a one-step exact amplification,
/// located by bisection on the solver's own verdict.
pub fn single_step_threshold(tolerance: f64) -> f64 {
    let feasible = |l: f64| solve_phases(l, 1).is_ok();
    let (mut lo, mut hi) = (1e-3, 0.5);
    while hi - lo > tolerance {
        let mid = 0.5 * (lo + hi);
        if feasible(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Measure-and-reflect schedule in the plane.
///
/// Measures `Π`; on failure the state is `|fail⟩`, which is reflected by
/// the `(−1, 1)` step before the next measurement. Entry `j` is the success
/// probability of measurement `j` given that all earlier ones failed.
pub fn iterative_schedule(lambda: f64, steps: usize) -> Result<Vec<f64>> {
    check_open_unit(lambda)?;
    let m = subspace_matrix(lambda, PhasePair::REFLECT_ONLY)?;
    let mut state = initial_two_dim(lambda);
    let mut probs = Vec::with_capacity(steps);
    for j in 0..steps {
        probs.push(state[0].norm_sqr());
        if j + 1 == steps {
            break;
        }
        let fail = state[1];
        if fail.norm() < ZERO_NORM {
            break;
        }
        let collapsed = Vector2::new(Complex64::new(0.0, 0.0), fail / fail.norm());
        state = m * collapsed;
    }
    Ok(probs)
}

/// The same schedule run on the full state space of `circuit`.
pub fn iterative_schedule_full<C: AmplitudeCircuit + ?Sized>(
    circuit: &C,
    aux: &StateVector,
    steps: usize,
) -> Result<Vec<f64>> {
    let reflect = circuit.reflection()?;
    let fail_proj = circuit.pi_op().complement()?;
    let mut state = circuit.prepare(aux)?;
    let mut probs = Vec::with_capacity(steps);
    for j in 0..steps {
        let good = project(circuit.pi_op(), &state)?;
        probs.push(good.prob);
        if j + 1 == steps {
            break;
        }
        match project(&fail_proj, &state)?.branch {
            Branch::Collapsed(f) => state = reflect.apply(&f)?,
            Branch::Empty => break,
        }
    }
    Ok(probs)
}

/// Second-measurement success probability of the schedule, `4λ(1 − λ)`,
/// next to the doubling estimate `2λ`.
#[derive(Debug, Clone, Copy)]
pub struct SecondMeasurement {
    pub lambda: f64,
    pub computed: f64,
    pub doubling_estimate: f64,
}

impl SecondMeasurement {
    pub fn new(lambda: f64) -> Self {
        Self {
            lambda,
            computed: 4.0 * lambda * (1.0 - lambda),
            doubling_estimate: 2.0 * lambda,
        }
    }

    pub fn discrepancy(&self) -> f64 {
        self.computed - self.doubling_estimate
    }
}

/// Abstract simulator succeeding with probability `1/m`.
///
/// Layout `W ⊗ V ⊗ A ⊗ B` with `dim A = dim B = m`; `A = (U_V ⊗ I_B)(I ⊗ F_B)`
/// where `F_B` prepares the uniform superposition on `B`, and `Π` projects
/// onto `A = B`.
#[derive(Debug, Clone)]
pub struct ToyCircuit {
    m: usize,
    layout: RegisterLayout,
    a_op: LinearOp,
    a_inv: LinearOp,
    pi_op: LinearOp,
}

impl ToyCircuit {
    pub fn m(&self) -> usize {
        self.m
    }

    /// Same circuit with another success projector on the same layout.
    pub fn with_projector(&self, pi_op: LinearOp) -> Result<Self> {
        if pi_op.layout() != &self.layout || pi_op.kind() != OpKind::Projector {
            return Err(Error::LayoutMismatch("projector must act on the toy layout".into()));
        }
        Ok(Self { pi_op, ..self.clone() })
    }
}

impl AmplitudeCircuit for ToyCircuit {
    fn layout(&self) -> &RegisterLayout {
        &self.layout
    }
    fn a_op(&self) -> &LinearOp {
        &self.a_op
    }
    fn a_inv(&self) -> &LinearOp {
        &self.a_inv
    }
    fn pi_op(&self) -> &LinearOp {
        &self.pi_op
    }
}

pub fn toy_lambda_circuit(m: usize, dims: crate::protocol::VerifierDims, seed: u64) -> Result<ToyCircuit> {
    if m < 2 {
        return Err(Error::InvalidArgument(format!("toy circuit needs m ≥ 2, got {m}")));
    }
    if dims.w == 0 || dims.v == 0 {
        return Err(Error::ZeroDim);
    }
    let layout = RegisterLayout::new(&[(REG_W, dims.w), (REG_V, dims.v), (REG_A, m), (REG_B, m)])?;
    let u_v = LinearOp::haar(&layout, &[REG_W, REG_V, REG_A], seed)?;
    let f_b = LinearOp::unitary(&layout, &[REG_B], uniform_prep(m, Completion::Householder))?;
    let a_op = LinearOp::product(vec![u_v, f_b])?;
    let a_inv = a_op.adjoint();
    let pi_op = success_projector(&layout)?;
    Ok(ToyCircuit {
        m,
        layout,
        a_op,
        a_inv,
        pi_op,
    })
}
