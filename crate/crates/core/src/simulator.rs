//! The unitary simulator for one round and its amplification.
//!
//! The simulator guesses the verifier's challenge `b` and a permutation `π`
//! in superposition, writes `π(G_b)` into the message register, and runs
//! the verifier:
//!
//! ```text
//! A = U_V · C · (H_B ⊗ F_Z),   C|y, b, π⟩ = |y ⊕ code(π(G_b)), b, π⟩
//! ```
//!
//! The guess is right (challenge `A` equals `B`) with probability exactly ½
//! for every auxiliary input, so one step of `A·S₀^i·A⁻¹·S₁^i` takes the
//! prepared state entirely into the success subspace.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;

use crate::amplify::{operator_norm, AmplitudeCircuit, PhasePair};
use crate::error::{Error, Result};
use crate::protocol::{
    challenge_component, record_layout, record_with_response_layout, verifier_response, view_layout, Instance,
    VerifierModel, REG_A, REG_B, REG_W, REG_Y, REG_Z,
};
use crate::registers::{project, Branch, CqState, LinearOp, RawVector, RegisterLayout, StateVector};
use crate::symm::{act, enumerate_sn, factorial, Graph, GraphCode, Permutation};

const MAX_N: usize = 4;

/// How the uniform superposition on `Z` is completed to a unitary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Completion {
    /// `I − 2ww†/‖w‖²` with `w = |0⟩ − |u⟩`.
    #[default]
    Householder,
    /// The discrete Fourier transform.
    Fourier,
}

/// A unitary whose first column is the uniform vector.
pub fn uniform_prep(dim: usize, completion: Completion) -> DMatrix<Complex64> {
    let u = 1.0 / (dim as f64).sqrt();
    match completion {
        Completion::Householder => {
            let mut w = DVector::from_element(dim, Complex64::new(-u, 0.0));
            w[0] += 1.0;
            let n2 = w.norm_squared();
            let id = DMatrix::identity(dim, dim);
            if n2 < 1e-30 {
                return id;
            }
            id - (&w * w.adjoint()).map(|z| z * (2.0 / n2))
        }
        Completion::Fourier => {
            let tau = std::f64::consts::TAU;
            DMatrix::from_fn(dim, dim, |j, k| {
                Complex64::from_polar(u, tau * ((j * k) % dim) as f64 / dim as f64)
            })
        }
    }
}

/// Layout `W ⊗ V ⊗ A ⊗ Y ⊗ B ⊗ Z`.
pub fn simulator_layout(ver: &VerifierModel) -> Result<RegisterLayout> {
    let tail = RegisterLayout::new(&[(REG_B, 2), (REG_Z, factorial(ver.n()))])?;
    view_layout(ver.dims(), ver.n())?.concat(&tail)
}

/// `Π`: projector onto `A = B`.
pub fn success_projector(layout: &RegisterLayout) -> Result<LinearOp> {
    let d = layout.dim_of(REG_A)?;
    if layout.dim_of(REG_B)? != d {
        return Err(Error::SizeMismatch(d, layout.dim_of(REG_B)?));
    }
    let diag = DVector::from_fn(d * d, |i, _| {
        Complex64::new(if i / d == i % d { 1.0 } else { 0.0 }, 0.0)
    });
    LinearOp::diagonal_projector(layout, &[REG_A, REG_B], diag)
}

/// `S₀^φ`: phase `φ` on `|0_X⟩`, where `X` is everything except `W`.
pub fn phase_s0(layout: &RegisterLayout, phi: Complex64) -> Result<LinearOp> {
    if layout.registers().first().map(|r| r.name.as_str()) != Some(REG_W) {
        return Err(Error::LayoutMismatch(format!("{layout} does not start with {REG_W}")));
    }
    let names: Vec<&str> = layout.names().skip(1).collect();
    let dim_x = layout.total_dim() / layout.dim_of(REG_W)?;
    let mut diag = DVector::from_element(dim_x, Complex64::new(1.0, 0.0));
    diag[0] = phi;
    LinearOp::diagonal_unitary(layout, &names, diag)
}

/// `S₁^φ' = (φ' − 1)Π + I`.
pub fn phase_s1(pi_op: &LinearOp, varphi: Complex64) -> Result<LinearOp> {
    pi_op.phase_on_range(varphi)
}

/// The simulator `A` for a fixed instance and verifier.
#[derive(Debug, Clone)]
pub struct SimulatorCircuit {
    inst: Instance,
    ver: VerifierModel,
    completion: Completion,
    layout: RegisterLayout,
    a_op: LinearOp,
    a_inv: LinearOp,
    pi_op: LinearOp,
    /// `codes[b][rank π] = code(π(G_b))`.
    codes: [Vec<GraphCode>; 2],
    perms: Vec<Permutation>,
}

impl SimulatorCircuit {
    pub fn build(inst: &Instance, ver: &VerifierModel) -> Result<Self> {
        Self::build_with(inst, ver, Completion::Householder)
    }

    pub fn build_with(inst: &Instance, ver: &VerifierModel, completion: Completion) -> Result<Self> {
        let n = inst.n();
        if n != ver.n() {
            return Err(Error::SizeMismatch(n, ver.n()));
        }
        if !(1..=MAX_N).contains(&n) {
            return Err(Error::VertexCountOutOfRange(n));
        }
        let layout = simulator_layout(ver)?;
        let perms = enumerate_sn(n)?;
        let codes: [Vec<GraphCode>; 2] = [0, 1]
            .map(|b| {
                perms
                    .iter()
                    .map(|p| act(p, inst.graph(b)).map(|g| g.encode()))
                    .collect::<Result<Vec<_>>>()
            })
            .into_iter()
            .collect::<Result<Vec<_>>>()?
            .try_into()
            .expect("two challenge values");

        let ys = GraphCode::space(n);
        let nf = perms.len();
        let mut xor = vec![0; ys * 2 * nf];
        for y in 0..ys {
            for b in 0..2 {
                for p in 0..nf {
                    let y2 = y ^ codes[b][p].index();
                    xor[(y * 2 + b) * nf + p] = (y2 * 2 + b) * nf + p;
                }
            }
        }
        let c = LinearOp::permutation(&layout, &[REG_Y, REG_B, REG_Z], xor)?;
        let h_b = LinearOp::unitary(&layout, &[REG_B], uniform_prep(2, Completion::Householder))?;
        let f_z = LinearOp::unitary(&layout, &[REG_Z], uniform_prep(nf, completion))?;
        let u_v = ver.unitary().lift(&layout)?;
        let a_op = LinearOp::product(vec![u_v, c, h_b, f_z])?;
        let a_inv = a_op.adjoint();
        let pi_op = success_projector(&layout)?;
        Ok(Self {
            inst: inst.clone(),
            ver: ver.clone(),
            completion,
            layout,
            a_op,
            a_inv,
            pi_op,
            codes,
            perms,
        })
    }

    pub fn instance(&self) -> &Instance {
        &self.inst
    }

    pub fn verifier(&self) -> &VerifierModel {
        &self.ver
    }

    pub fn completion(&self) -> Completion {
        self.completion
    }

    /// `A·S₀^φ·A⁻¹·S₁^φ'`.
    pub fn grover_step(&self, phi: Complex64, varphi: Complex64) -> Result<LinearOp> {
        self.step(PhasePair::new(phi, varphi)?)
    }

    /// `G(i, i)·A|ψ⟩|0_X⟩`.
    pub fn amplified(&self, aux: &StateVector) -> Result<StateVector> {
        self.step(PhasePair::IMAGINARY)?.apply(&self.prepare(aux)?)
    }

    /// The part of `state` with guess `b` and permutation index `p`, as a
    /// vector on `W ⊗ V ⊗ A ⊗ Y`.
    fn branch(&self, state: &StateVector, b: usize, p: usize) -> Result<RawVector> {
        let view = view_layout(self.ver.dims(), self.inst.n())?;
        let tail = 2 * self.perms.len();
        let off = b * self.perms.len() + p;
        let amps = DVector::from_fn(view.total_dim(), |q, _| state.amps()[q * tail + off]);
        RawVector::new(view, amps)
    }
}

impl AmplitudeCircuit for SimulatorCircuit {
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

/// Operator norm of `⟨0_X|A⁻¹ΠA|0_X⟩ − ½I`.
pub fn verify_eq1(sim: &SimulatorCircuit) -> Result<f64> {
    let block = sim.slice_block()?;
    let w = block.nrows();
    Ok(operator_norm(
        &(block - DMatrix::from_diagonal_element(w, w, Complex64::new(0.5, 0.0))),
    ))
}

/// Result of the one-step amplification check.
#[derive(Debug, Clone, Copy)]
pub struct Eq2Check {
    /// `‖A S₀ A⁻¹ S₁ A|ψ0⟩ − (i − 1)ΠA|ψ0⟩‖`.
    pub residual: f64,
    /// Success probability of the amplified state.
    pub success_after: f64,
    /// The same residual with the phases applied in the order `S₀` then `S₁`,
    /// i.e. `A S₁ A⁻¹ S₀ A|ψ0⟩`.
    pub swapped_residual: f64,
    pub swapped_success: f64,
}

pub fn verify_eq2(sim: &SimulatorCircuit, aux: &StateVector) -> Result<Eq2Check> {
    let i = Complex64::i();
    let s = sim.prepare(aux)?;
    let target = sim.pi_op().apply_raw(s.as_raw())?.scale(i - 1.0);
    let out = sim.step(PhasePair::IMAGINARY)?.apply(&s)?;
    let swapped =
        LinearOp::product(vec![sim.a_op().clone(), sim.s1(i)?, sim.a_inv().clone(), sim.s0(i)?])?.apply(&s)?;
    let success = |v: &StateVector| project(sim.pi_op(), v).map(|p| p.prob);
    Ok(Eq2Check {
        residual: out.as_raw().distance(&target)?,
        success_after: success(&out)?,
        swapped_residual: swapped.as_raw().distance(&target)?,
        swapped_success: success(&swapped)?,
    })
}

/// Residuals of the block-vector derivation of the one-step identity.
#[derive(Debug, Clone, Copy)]
pub struct BlockChain {
    /// Top block of `A⁻¹ΠA|ψ0⟩` against `½ψ`.
    pub top_half: f64,
    /// `A⁻¹S₁A|ψ0⟩` against `[((i−1)/2 + 1)ψ; (i−1)Π₁₂ψ]`.
    pub after_s1: f64,
    /// `S₀A⁻¹S₁A|ψ0⟩` against `[i((i−1)/2 + 1)ψ; (i−1)Π₁₂ψ]`.
    pub after_s0: f64,
    /// The same vector against `(i − 1)A⁻¹ΠA|ψ0⟩`.
    pub factored: f64,
    /// `A` applied to it against `(i − 1)ΠA|ψ0⟩`.
    pub mapped_back: f64,
}

impl BlockChain {
    pub fn max(&self) -> f64 {
        [
            self.top_half,
            self.after_s1,
            self.after_s0,
            self.factored,
            self.mapped_back,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

pub fn block_chain(sim: &SimulatorCircuit, aux: &StateVector) -> Result<BlockChain> {
    let i = Complex64::i();
    let one = Complex64::new(1.0, 0.0);
    let psi0 = sim.embed(aux)?;
    let a_psi = sim.a_op().apply(&psi0)?;
    let pi_a = sim.pi_op().apply_raw(a_psi.as_raw())?;
    let m = sim.a_inv().apply_raw(&pi_a)?;

    let w = sim.layout().dim_of(REG_W)?;
    let dim_x = sim.layout().total_dim() / w;
    let mut bottom = m.clone();
    for k in 0..w {
        bottom.amps_mut()[k * dim_x] = Complex64::new(0.0, 0.0);
    }
    let psi = psi0.as_raw();
    let predicted = |top: Complex64, bot: Complex64| psi.scale(top).add(&bottom.scale(bot));

    let top_half = m.sub(&bottom)?.distance(&psi.scale(Complex64::new(0.5, 0.0)))?;
    let v1 = sim.a_inv().apply_raw(&sim.s1(i)?.apply_raw(a_psi.as_raw())?)?;
    let c1 = (i - 1.0) / 2.0 + one;
    let after_s1 = v1.distance(&predicted(c1, i - 1.0)?)?;
    let v2 = sim.s0(i)?.apply_raw(&v1)?;
    let after_s0 = v2.distance(&predicted(i * c1, i - 1.0)?)?;
    let factored = v2.distance(&m.scale(i - 1.0))?;
    let mapped_back = sim.a_op().apply_raw(&v2)?.distance(&pi_a.scale(i - 1.0))?;
    Ok(BlockChain {
        top_half,
        after_s1,
        after_s0,
        factored,
        mapped_back,
    })
}

/// The seven expressions in the derivation `‖ΠA|ψ0⟩‖² = ½`; every
/// consecutive pair should agree.
#[derive(Debug, Clone)]
pub struct NormChain {
    pub values: [f64; 7],
}

impl NormChain {
    /// `|value[k] − value[k+1]|` for the six equalities.
    pub fn residuals(&self) -> [f64; 6] {
        std::array::from_fn(|k| (self.values[k] - self.values[k + 1]).abs())
    }
}

pub fn norm_chain(sim: &SimulatorCircuit, aux: &StateVector) -> Result<NormChain> {
    let inst = &sim.inst;
    let n = inst.n();
    let nf = factorial(n);
    let norm = 1.0 / (2 * nf) as f64;
    let layout = sim.layout();

    let l1 = project(sim.pi_op(), &sim.prepare(aux)?)?.prob;

    // place a view-space vector into the full space at |b⟩_B|p⟩_Z
    let place = |v: &RawVector, b: usize, p: usize| -> Result<RawVector> {
        let tail = RegisterLayout::new(&[(REG_B, 2), (REG_Z, nf)])?;
        let e = StateVector::basis(&tail, &[(REG_B, b), (REG_Z, p)])?;
        v.tensor(e.as_raw())
    };
    let responses: Vec<Vec<RawVector>> = (0..2)
        .map(|b| {
            (0..nf)
                .map(|p| verifier_response(&sim.ver, aux, sim.codes[b][p]))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;

    let pos_b = layout.position(REG_B)?;
    let mut sum2 = RawVector::zeros(layout.clone());
    let mut sum3 = RawVector::zeros(layout.clone());
    let mut l4 = 0.0;
    for (b, row) in responses.iter().enumerate() {
        for (p, v) in row.iter().enumerate() {
            let placed = place(v, b, p)?;
            for a in 0..2 {
                // P_a on A and on B
                let pa = challenge_component(&placed, a)?;
                let pb = pa.amps().map_with_location(|idx, _, z| {
                    if layout.digit(idx, pos_b) == a {
                        z
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                });
                sum2 = sum2.add(&RawVector::new(layout.clone(), pb)?)?;
            }
            let vb = challenge_component(v, b)?;
            sum3 = sum3.add(&place(&vb, b, p)?)?;
            l4 += vb.norm_squared();
        }
    }
    let l2 = norm * sum2.norm_squared();
    let l3 = norm * sum3.norm_squared();
    l4 *= norm;

    let tau = inst.witness();
    let mut l5 = 0.0;
    let mut l6 = 0.0;
    for pi in &sim.perms {
        for b in 0..2 {
            let tb = tau.pow(b);
            let via_g0 = act(&pi.compose(&tb)?, inst.g0())?.encode();
            l5 += challenge_component(&verifier_response(&sim.ver, aux, via_g0)?, b)?.norm_squared();
            let plain = act(pi, inst.g0())?.encode();
            l6 += challenge_component(&verifier_response(&sim.ver, aux, plain)?, b)?.norm_squared();
        }
    }
    Ok(NormChain {
        values: [l1, l2, l3, l4, norm * l5, norm * l6, norm * nf as f64],
    })
}

/// The simulated view: amplify, measure `B` and `Z` to obtain the message
/// `π(G_b)` and the response `π`, then measure the challenge `A`.
///
/// All measurement outcomes are summed exactly; nothing is sampled.
pub fn simulate_round(sim: &SimulatorCircuit, aux: &StateVector) -> Result<CqState> {
    let n = sim.inst.n();
    simulate_blocks(sim, aux, record_layout(n)?, |b, p| Ok(sim.codes[b][p].index()))
}

/// Like [`simulate_round`], keeping the response `π` in the record.
pub fn simulate_round_with_response(sim: &SimulatorCircuit, aux: &StateVector) -> Result<CqState> {
    let n = sim.inst.n();
    let record = record_with_response_layout(n)?;
    simulate_blocks(sim, aux, record.clone(), |b, p| {
        record.flatten(&[sim.codes[b][p].index(), p])
    })
}

fn simulate_blocks(
    sim: &SimulatorCircuit,
    aux: &StateVector,
    record: RegisterLayout,
    key: impl Fn(usize, usize) -> Result<usize>,
) -> Result<CqState> {
    let s2 = sim.amplified(aux)?;
    let view = view_layout(sim.ver.dims(), sim.inst.n())?;
    let mut out = CqState::new(view, record)?;
    for b in 0..2 {
        for p in 0..sim.perms.len() {
            let v = sim.branch(&s2, b, p)?;
            if v.norm_squared() == 0.0 {
                continue;
            }
            let k = key(b, p)?;
            for a in 0..2 {
                out.add_pure(k, 1.0, &challenge_component(&v, a)?)?;
            }
        }
    }
    Ok(out)
}

/// One sampled run of the amplified simulator.
#[derive(Debug, Clone)]
pub struct SampledRound {
    pub guess: usize,
    pub challenge: usize,
    pub response: Permutation,
    pub sent: Graph,
    pub accepted: bool,
    /// Verifier registers after all measurements.
    pub view: StateVector,
}

pub fn sample_round<R: Rng + ?Sized>(sim: &SimulatorCircuit, aux: &StateVector, rng: &mut R) -> Result<SampledRound> {
    let s2 = sim.amplified(aux)?;
    let mb = s2.measure(REG_B, rng)?;
    let mz = mb.collapsed.measure(REG_Z, rng)?;
    let (b, p) = (mb.outcome, mz.outcome);
    let v = sim
        .branch(&mz.collapsed, b, p)?
        .normalized()
        .ok_or(Error::NotNormalized(0.0))?;
    let ma = v.measure(REG_A, rng)?;
    let response = sim.perms[p].clone();
    let sent = Graph::decode(sim.codes[b][p], sim.inst.n())?;
    let accepted = crate::protocol::accept(&sent, ma.outcome, &response, &sim.inst)?;
    Ok(SampledRound {
        guess: b,
        challenge: ma.outcome,
        response,
        sent,
        accepted,
        view: ma.collapsed,
    })
}

/// Measure-and-reflect variant: measure `Π`; on failure, apply
/// `A·S₀^{-1}·A⁻¹`.
#[derive(Debug, Clone)]
pub struct WatrousBranches {
    pub success_prob: f64,
    pub success: StateVector,
    pub reflected: StateVector,
    /// `⟨success|reflected⟩`.
    pub overlap: Complex64,
}

impl WatrousBranches {
    pub fn fidelity(&self) -> f64 {
        self.overlap.norm_sqr()
    }
}

pub fn watrous_branches(sim: &SimulatorCircuit, aux: &StateVector) -> Result<WatrousBranches> {
    let s = sim.prepare(aux)?;
    let good = project(sim.pi_op(), &s)?;
    let bad = project(&sim.pi_op().complement()?, &s)?;
    let (success, fail) = match (good.branch, bad.branch) {
        (Branch::Collapsed(g), Branch::Collapsed(f)) => (g, f),
        _ => return Err(Error::DegenerateLambda(good.prob)),
    };
    let reflected = sim.reflection()?.apply(&fail)?;
    let overlap = success.as_raw().inner(reflected.as_raw())?;
    Ok(WatrousBranches {
        success_prob: good.prob,
        success,
        reflected,
        overlap,
    })
}

/// Samples the first measurement; returns whether it succeeded and the
/// final state.
pub fn watrous_round<R: Rng + ?Sized>(
    sim: &SimulatorCircuit,
    aux: &StateVector,
    rng: &mut R,
) -> Result<(bool, StateVector)> {
    let w = watrous_branches(sim, aux)?;
    if rng.random::<f64>() < w.success_prob {
        Ok((true, w.success))
    } else {
        Ok((false, w.reflected))
    }
}

/// `Y`-register marginal helper for checks: the message distribution of a
/// view.
pub fn message_distribution(view: &CqState) -> Result<Vec<f64>> {
    let y = view.quantum_marginal(&[REG_Y])?;
    Ok((0..y.matrix().nrows()).map(|i| y.matrix()[(i, i)].re).collect())
}
