//! One round of the graph-isomorphism proof system, seen from the verifier.
//!
//! The verifier holds an auxiliary state on `W`, a workspace `V`, the
//! challenge qubit `A` and receives the prover's first message in `Y`. Its
//! whole strategy is a unitary on `W ⊗ V ⊗ A ⊗ Y` followed by a
//! computational-basis measurement of `A`. The prover's first message is
//! recorded in a classical register `Z'`, which is what the simulator must
//! reproduce alongside the verifier's registers.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::registers::{CqState, LinearOp, RawVector, RegisterLayout, StateVector};
use crate::symm::{act, enumerate_sn, factorial, find_isomorphism, Graph, GraphCode, Permutation};

pub const REG_W: &str = "W";
pub const REG_V: &str = "V";
pub const REG_A: &str = "A";
pub const REG_Y: &str = "Y";
pub const REG_B: &str = "B";
pub const REG_Z: &str = "Z";
/// Classical copy of the prover's first message.
pub const REG_RECORD: &str = "Z'";

/// A yes-instance `(G0, G1)` together with a witness `τ`, `τ(G0) = G1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    g0: Graph,
    g1: Graph,
    tau: Permutation,
}

impl Instance {
    /// Finds a witness by brute force.
    pub fn new(g0: Graph, g1: Graph) -> Result<Self> {
        let tau = find_isomorphism(&g0, &g1)?.ok_or(Error::NotIsomorphic)?;
        Ok(Self { g0, g1, tau })
    }

    pub fn with_witness(g0: Graph, g1: Graph, tau: Permutation) -> Result<Self> {
        if act(&tau, &g0)? != g1 {
            return Err(Error::BadWitness);
        }
        Ok(Self { g0, g1, tau })
    }

    pub fn n(&self) -> usize {
        self.g0.n()
    }

    pub fn g0(&self) -> &Graph {
        &self.g0
    }

    pub fn g1(&self) -> &Graph {
        &self.g1
    }

    /// `G_b`.
    pub fn graph(&self, b: usize) -> &Graph {
        if b == 0 {
            &self.g0
        } else {
            &self.g1
        }
    }

    pub fn witness(&self) -> &Permutation {
        &self.tau
    }
}

/// Sizes of the verifier's private registers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifierDims {
    pub w: usize,
    pub v: usize,
}

impl Default for VerifierDims {
    fn default() -> Self {
        Self { w: 2, v: 2 }
    }
}

/// Layout `W ⊗ V ⊗ A ⊗ Y` the verifier acts on.
pub fn view_layout(dims: VerifierDims, n: usize) -> Result<RegisterLayout> {
    RegisterLayout::new(&[
        (REG_W, dims.w),
        (REG_V, dims.v),
        (REG_A, 2),
        (REG_Y, GraphCode::space(n)),
    ])
}

/// A verifier strategy: one unitary on `W ⊗ V ⊗ A ⊗ Y`.
#[derive(Debug, Clone)]
pub struct VerifierModel {
    dims: VerifierDims,
    n: usize,
    u_v: LinearOp,
}

impl VerifierModel {
    pub fn from_matrix(dims: VerifierDims, n: usize, matrix: DMatrix<Complex64>) -> Result<Self> {
        let layout = view_layout(dims, n)?;
        let u_v = LinearOp::unitary(&layout, &[REG_W, REG_V, REG_A, REG_Y], matrix)?;
        Ok(Self { dims, n, u_v })
    }

    pub fn dims(&self) -> VerifierDims {
        self.dims
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn layout(&self) -> &RegisterLayout {
        self.u_v.layout()
    }

    pub fn unitary(&self) -> &LinearOp {
        &self.u_v
    }
}

/// The honest verifier: a Hadamard on the challenge qubit.
pub fn honest_verifier(dims: VerifierDims, n: usize) -> Result<VerifierModel> {
    check_dims(dims)?;
    let h = 1.0 / 2f64.sqrt();
    let had = DMatrix::from_row_slice(2, 2, &[h, h, h, -h].map(|x| Complex64::new(x, 0.0)));
    let id = |d: usize| DMatrix::<Complex64>::identity(d, d);
    let m = id(dims.w)
        .kronecker(&id(dims.v))
        .kronecker(&had)
        .kronecker(&id(GraphCode::space(n)));
    VerifierModel::from_matrix(dims, n, m)
}

/// A Haar-random verifier over all of `W ⊗ V ⊗ A ⊗ Y`.
pub fn adversarial_verifier(dims: VerifierDims, n: usize, seed: u64) -> Result<VerifierModel> {
    check_dims(dims)?;
    let dim = dims.w * dims.v * 2 * GraphCode::space(n);
    let m = crate::registers::haar_random_unitary(dim, seed)?;
    VerifierModel::from_matrix(dims, n, m)
}

fn check_dims(dims: VerifierDims) -> Result<()> {
    if dims.w == 0 || dims.v == 0 {
        return Err(Error::ZeroDim);
    }
    Ok(())
}

fn check_compatible(inst: &Instance, ver: &VerifierModel, aux: &StateVector) -> Result<()> {
    if inst.n() != ver.n {
        return Err(Error::SizeMismatch(inst.n(), ver.n));
    }
    let w = RegisterLayout::new(&[(REG_W, ver.dims.w)])?;
    if aux.layout() != &w {
        return Err(Error::LayoutMismatch(format!(
            "auxiliary input must live on {w}, got {}",
            aux.layout()
        )));
    }
    Ok(())
}

/// `U_V (|ψ⟩|0_V⟩|0_A⟩|y⟩)` for one prover message `y`.
pub(crate) fn verifier_response(ver: &VerifierModel, aux: &StateVector, message: GraphCode) -> Result<RawVector> {
    let rest = RegisterLayout::new(&[(REG_V, ver.dims.v), (REG_A, 2), (REG_Y, GraphCode::space(ver.n))])?;
    let tail = StateVector::basis(&rest, &[(REG_V, 0), (REG_A, 0), (REG_Y, message.index())])?;
    let input = aux.tensor(&tail)?;
    Ok(ver.u_v.apply(&input)?.into_raw())
}

/// `P_a v`: keeps the component with challenge bit `a`.
pub(crate) fn challenge_component(v: &RawVector, a: usize) -> Result<RawVector> {
    let pos = v.layout().position(REG_A)?;
    let mut out = v.clone();
    for (i, z) in out.amps_mut().iter_mut().enumerate() {
        if v.layout().digit(i, pos) != a {
            *z = Complex64::new(0.0, 0.0);
        }
    }
    Ok(out)
}

/// Layout of the record register.
pub fn record_layout(n: usize) -> Result<RegisterLayout> {
    RegisterLayout::new(&[(REG_RECORD, GraphCode::space(n))])
}

/// Record register followed by the prover's response permutation.
pub fn record_with_response_layout(n: usize) -> Result<RegisterLayout> {
    RegisterLayout::new(&[(REG_RECORD, GraphCode::space(n)), (REG_Z, factorial(n))])
}

/// The verifier's view after the challenge is measured:
/// `(1/n!) Σ_τ Σ_a P_a U_V(ψ ⊗ 0 ⊗ 0 ⊗ τ(G0)) U_V† P_a ⊗ |τ(G0)⟩⟨τ(G0)|_{Z'}`.
///
/// The prover's message is classical, so the result is stored block-wise
/// in the record `Z'`.
pub fn real_view(inst: &Instance, ver: &VerifierModel, aux: &StateVector) -> Result<CqState> {
    check_compatible(inst, ver, aux)?;
    let n = inst.n();
    let mut view = CqState::new(ver.layout().clone(), record_layout(n)?)?;
    let weight = 1.0 / factorial(n) as f64;
    for tau in enumerate_sn(n)? {
        let sent = act(&tau, inst.g0())?.encode();
        let v = verifier_response(ver, aux, sent)?;
        for a in 0..2 {
            view.add_pure(sent.index(), weight, &challenge_component(&v, a)?)?;
        }
    }
    Ok(view)
}

/// Like [`real_view`], additionally recording the prover's answer `π` with
/// `π(G_a) = τ(G0)`, namely `π = τ ∘ σ^{-a}` for the witness `σ`.
pub fn real_view_with_response(inst: &Instance, ver: &VerifierModel, aux: &StateVector) -> Result<CqState> {
    check_compatible(inst, ver, aux)?;
    let n = inst.n();
    let record = record_with_response_layout(n)?;
    let mut view = CqState::new(ver.layout().clone(), record.clone())?;
    let weight = 1.0 / factorial(n) as f64;
    let sigma_inv = inst.witness().invert();
    for tau in enumerate_sn(n)? {
        let sent = act(&tau, inst.g0())?.encode();
        let v = verifier_response(ver, aux, sent)?;
        for a in 0..2 {
            let response = if a == 0 { tau.clone() } else { tau.compose(&sigma_inv)? };
            let key = record.flatten(&[sent.index(), response.rank()])?;
            view.add_pure(key, weight, &challenge_component(&v, a)?)?;
        }
    }
    Ok(view)
}

/// The verifier's final check: `sent = response(G_a)`.
pub fn accept(sent: &Graph, a: usize, response: &Permutation, inst: &Instance) -> Result<bool> {
    if sent.n() != inst.n() || response.n() != inst.n() {
        return Err(Error::SizeMismatch(sent.n(), inst.n()));
    }
    if a > 1 {
        return Err(Error::InvalidArgument(format!("challenge bit {a}")));
    }
    Ok(act(response, inst.graph(a))? == *sent)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::registers::{haar_random_state, DensityOperator};
    use crate::OP_TOL;

    fn path_instance() -> Instance {
        Instance::new(
            Graph::new(3, &[(0, 1), (1, 2)]).unwrap(),
            Graph::new(3, &[(0, 1), (0, 2)]).unwrap(),
        )
        .unwrap()
    }

    fn w_layout(d: usize) -> RegisterLayout {
        RegisterLayout::new(&[(REG_W, d)]).unwrap()
    }

    #[test]
    fn instance_validation() {
        let g0 = Graph::new(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(matches!(
            Instance::new(g0.clone(), Graph::complete(3)),
            Err(Error::NotIsomorphic)
        ));
        assert!(matches!(
            Instance::with_witness(
                g0.clone(),
                Graph::new(3, &[(0, 1), (0, 2)]).unwrap(),
                Permutation::identity(3)
            ),
            Err(Error::BadWitness)
        ));
    }

    #[test]
    fn honest_verifier_hadamards_the_challenge() {
        let dims = VerifierDims::default();
        let ver = honest_verifier(dims, 2).unwrap();
        let l = ver.layout().clone();
        let s = StateVector::basis(&l, &[(REG_W, 1), (REG_V, 0), (REG_A, 0), (REG_Y, 1)]).unwrap();
        let out = ver.unitary().apply(&s).unwrap();
        let r = 1.0 / 2f64.sqrt();
        let i0 = l.flatten(&[1, 0, 0, 1]).unwrap();
        let i1 = l.flatten(&[1, 0, 1, 1]).unwrap();
        for (i, z) in out.amps().iter().enumerate() {
            let expect = if i == i0 || i == i1 { r } else { 0.0 };
            assert!((z - Complex64::new(expect, 0.0)).norm() < 1e-15);
        }
        let twice = ver.unitary().compose(ver.unitary()).unwrap().to_dense().unwrap();
        assert!((twice - DMatrix::<Complex64>::identity(l.total_dim(), l.total_dim()))
            .iter()
            .all(|z| z.norm() < 1e-12));
    }

    #[test]
    fn adversarial_verifier_shapes() {
        let dims = VerifierDims { w: 1, v: 1 };
        let ver = adversarial_verifier(dims, 2, 0).unwrap();
        assert_eq!(ver.layout().total_dim(), 4);
        assert!(ver.unitary().kind_deviation().unwrap() < OP_TOL);
        let other = adversarial_verifier(dims, 2, 1).unwrap();
        let d = ver.unitary().to_dense().unwrap() - other.unitary().to_dense().unwrap();
        assert!(d.iter().any(|z| z.norm() > 1e-3));
    }

    #[test]
    fn rigid_orbit_gives_pure_message() {
        let e = Graph::new(2, &[(0, 1)]).unwrap();
        let inst = Instance::new(e.clone(), e.clone()).unwrap();
        let ver = honest_verifier(VerifierDims::default(), 2).unwrap();
        let aux = haar_random_state(&w_layout(2), 3).unwrap();
        let view = real_view(&inst, &ver, &aux).unwrap();
        let y = view.quantum_marginal(&[REG_Y]).unwrap();
        let code = e.encode().index();
        assert!((y.matrix()[(code, code)].re - 1.0).abs() < OP_TOL);
        let rec = view.record_distribution();
        assert_eq!(rec.len(), 1);
        assert!((rec[&code] - 1.0).abs() < OP_TOL);
    }

    #[test]
    fn path_orbit_message_is_uniform_over_three_graphs() {
        let inst = path_instance();
        let ver = honest_verifier(VerifierDims::default(), 3).unwrap();
        let aux = haar_random_state(&w_layout(2), 5).unwrap();
        let view = real_view(&inst, &ver, &aux).unwrap();
        let y = view.quantum_marginal(&[REG_Y]).unwrap();
        let orbit = crate::symm::orbit(inst.g0()).unwrap();
        assert_eq!(orbit.len(), 3);
        for g in &orbit {
            let c = g.encode().index();
            assert!((y.matrix()[(c, c)].re - 1.0 / 3.0).abs() < OP_TOL);
        }
        let diag_total: f64 = (0..8).map(|c| y.matrix()[(c, c)].re).sum();
        assert!((diag_total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn view_is_dephased_and_valid() {
        let inst = path_instance();
        let ver = adversarial_verifier(VerifierDims::default(), 3, 17).unwrap();
        let aux = haar_random_state(&w_layout(2), 6).unwrap();
        let view = real_view(&inst, &ver, &aux).unwrap();
        assert!((view.trace() - 1.0).abs() < OP_TOL);
        let rho: DensityOperator = view.to_density().unwrap();
        assert!(rho.is_diagonal_in(REG_A, 1e-14).unwrap());
        assert!(rho.min_eigenvalue() > -OP_TOL);
        assert_eq!(view.dephase(REG_A).unwrap(), view);
    }

    #[test]
    fn honest_challenge_is_uniform() {
        let inst = path_instance();
        let ver = honest_verifier(VerifierDims::default(), 3).unwrap();
        let aux = haar_random_state(&w_layout(2), 8).unwrap();
        let a = real_view(&inst, &ver, &aux)
            .unwrap()
            .quantum_marginal(&[REG_A])
            .unwrap();
        let half = DMatrix::from_diagonal_element(2, 2, Complex64::new(0.5, 0.0));
        assert!((a.matrix() - half).iter().all(|z| z.norm() < OP_TOL));
    }

    #[test]
    fn view_does_not_depend_on_the_witness() {
        // the path 0-1-2 has the automorphism (0 2), so two witnesses exist
        let g0 = Graph::new(3, &[(0, 1), (1, 2)]).unwrap();
        let g1 = Graph::new(3, &[(0, 1), (0, 2)]).unwrap();
        let witnesses: Vec<Permutation> = enumerate_sn(3)
            .unwrap()
            .into_iter()
            .filter(|p| act(p, &g0).unwrap() == g1)
            .collect();
        assert_eq!(witnesses.len(), 2);
        let ver = adversarial_verifier(VerifierDims::default(), 3, 2).unwrap();
        let aux = haar_random_state(&w_layout(2), 9).unwrap();
        let views: Vec<CqState> = witnesses
            .iter()
            .map(|w| {
                let inst = Instance::with_witness(g0.clone(), g1.clone(), w.clone()).unwrap();
                real_view(&inst, &ver, &aux).unwrap()
            })
            .collect();
        assert!(views[0].trace_distance(&views[1]).unwrap() < OP_TOL);
    }

    #[test]
    fn acceptance_predicate() {
        let inst = path_instance();
        let tau = Permutation::new(vec![2, 0, 1]).unwrap();
        let sent = act(&tau, inst.g0()).unwrap();
        assert!(accept(&sent, 0, &tau, &inst).unwrap());
        let answer = tau.compose(&inst.witness().invert()).unwrap();
        assert!(accept(&sent, 1, &answer, &inst).unwrap());
        // every valid answer for a = 1 is found by brute force and accepted
        let valid: Vec<Permutation> = enumerate_sn(3)
            .unwrap()
            .into_iter()
            .filter(|p| act(p, inst.g1()).unwrap() == sent)
            .collect();
        assert!(!valid.is_empty());
        assert!(valid.iter().all(|p| accept(&sent, 1, p, &inst).unwrap()));
        // identity answer on a message that is not G_a
        assert_ne!(sent, *inst.g0());
        assert!(!accept(&sent, 0, &Permutation::identity(3), &inst).unwrap());
        assert!(accept(&sent, 2, &tau, &inst).is_err());
    }

    #[test]
    fn mismatched_aux_is_rejected() {
        let inst = path_instance();
        let ver = honest_verifier(VerifierDims::default(), 3).unwrap();
        let aux = haar_random_state(&w_layout(3), 1).unwrap();
        assert!(matches!(real_view(&inst, &ver, &aux), Err(Error::LayoutMismatch(_))));
    }
}
