use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::layout::RegisterLayout;
use super::state::{RawVector, StateVector};
use super::MaxAbs;
use crate::error::{Error, Result};
use crate::NORM_TOL;

/// Hermitian, unit-trace, positive semidefinite operator over a layout.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    layout: RegisterLayout,
    matrix: DMatrix<Complex64>,
}

impl DensityOperator {
    /// Checks hermiticity and unit trace to `1e-12`. Positivity is checked
    /// separately by [`DensityOperator::min_eigenvalue`], which needs a full
    /// eigendecomposition.
    pub fn new(layout: RegisterLayout, matrix: DMatrix<Complex64>) -> Result<Self> {
        let n = layout.total_dim();
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: matrix.nrows(),
            });
        }
        let herm = (&matrix - matrix.adjoint()).max_abs();
        if herm > NORM_TOL {
            return Err(Error::InvalidDensity(format!("not Hermitian ({herm:.3e})")));
        }
        let tr = matrix.trace();
        if (tr - Complex64::new(1.0, 0.0)).norm() > NORM_TOL {
            return Err(Error::InvalidDensity(format!("trace {tr}")));
        }
        Ok(Self { layout, matrix })
    }

    pub fn from_pure(state: &StateVector) -> Self {
        let v = state.amps();
        Self {
            layout: state.layout().clone(),
            matrix: v * v.adjoint(),
        }
    }

    pub fn layout(&self) -> &RegisterLayout {
        &self.layout
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.matrix)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().into_iter().fold(f64::INFINITY, f64::min)
    }

    pub fn tensor(&self, other: &Self) -> Result<Self> {
        Ok(Self {
            layout: self.layout.concat(&other.layout)?,
            matrix: self.matrix.kronecker(&other.matrix),
        })
    }

    /// Convex combination `Σ wᵢ ρᵢ`. Weights must sum to one.
    pub fn mixture(parts: &[(f64, &DensityOperator)]) -> Result<Self> {
        let (_, first) = parts.first().ok_or(Error::InvalidArgument("empty mixture".into()))?;
        let mut m = DMatrix::zeros(first.matrix.nrows(), first.matrix.ncols());
        for (w, rho) in parts {
            if rho.layout != first.layout {
                return Err(Error::LayoutMismatch(format!("{} vs {}", rho.layout, first.layout)));
            }
            m += rho.matrix.map(|z| z * *w);
        }
        Self::new(first.layout.clone(), m)
    }

    /// Measure-and-forget channel on one register: removes every coherence
    /// between different basis values of `register`.
    pub fn dephase(&self, register: &str) -> Result<Self> {
        let pos = self.layout.position(register)?;
        Ok(Self {
            layout: self.layout.clone(),
            matrix: dephase_matrix(&self.layout, &self.matrix, pos),
        })
    }

    /// Reduced operator on `keep`; the result keeps this layout's order.
    pub fn partial_trace(&self, keep: &[&str]) -> Result<Self> {
        let (sub, matrix) = partial_trace_matrix(&self.layout, &self.matrix, keep)?;
        Ok(Self { layout: sub, matrix })
    }

    pub fn is_diagonal_in(&self, register: &str, tol: f64) -> Result<bool> {
        let pos = self.layout.position(register)?;
        let n = self.matrix.nrows();
        for i in 0..n {
            for j in 0..n {
                if self.layout.digit(i, pos) != self.layout.digit(j, pos) && self.matrix[(i, j)].norm() > tol {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// `½‖ρ − σ‖₁`, from the eigenvalues of the Hermitian difference.
pub fn trace_distance(r1: &DensityOperator, r2: &DensityOperator) -> Result<f64> {
    if r1.layout != r2.layout {
        return Err(Error::LayoutMismatch(format!("{} vs {}", r1.layout, r2.layout)));
    }
    Ok(0.5 * trace_norm(&(&r1.matrix - &r2.matrix)))
}

/// Sum of absolute eigenvalues of a Hermitian matrix.
pub fn trace_norm(m: &DMatrix<Complex64>) -> f64 {
    hermitian_eigenvalues(m).iter().map(|e| e.abs()).sum()
}

pub(crate) fn hermitian_eigenvalues(m: &DMatrix<Complex64>) -> Vec<f64> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    // symmetrize away rounding before the Hermitian solver sees it
    let h = (m + m.adjoint()).map(|z| z * 0.5);
    h.symmetric_eigenvalues().iter().copied().collect()
}

fn dephase_matrix(layout: &RegisterLayout, m: &DMatrix<Complex64>, pos: usize) -> DMatrix<Complex64> {
    let mut out = m.clone();
    let n = m.nrows();
    for j in 0..n {
        let dj = layout.digit(j, pos);
        for i in 0..n {
            if layout.digit(i, pos) != dj {
                out[(i, j)] = Complex64::new(0.0, 0.0);
            }
        }
    }
    out
}

fn partial_trace_matrix(
    layout: &RegisterLayout,
    m: &DMatrix<Complex64>,
    keep: &[&str],
) -> Result<(RegisterLayout, DMatrix<Complex64>)> {
    if keep.is_empty() {
        return Err(Error::EmptyKeep);
    }
    let mut positions = keep.iter().map(|k| layout.position(k)).collect::<Result<Vec<_>>>()?;
    positions.sort_unstable();
    positions.dedup();
    let sub = layout.sublayout(keep)?;
    let (k_off, r_off) = layout.split_offsets(&positions);
    let k = k_off.len();
    let out = DMatrix::from_fn(k, k, |a, b| {
        r_off
            .iter()
            .map(|&r| m[(k_off[a] + r, k_off[b] + r)])
            .sum::<Complex64>()
    });
    Ok((sub, out))
}

/// A state block-diagonal in a classical record.
///
/// Represents `Σ_c ρ_c ⊗ |c⟩⟨c|` where `ρ_c` are unnormalized operators on
/// the quantum layout and `c` ranges over basis indices of the classical
/// layout. Only nonzero blocks are stored, so states whose dense form would
/// not fit in memory can still be compared exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct CqState {
    quantum: RegisterLayout,
    classical: RegisterLayout,
    blocks: BTreeMap<usize, DMatrix<Complex64>>,
}

impl CqState {
    pub fn new(quantum: RegisterLayout, classical: RegisterLayout) -> Result<Self> {
        // reject name clashes early
        quantum.concat(&classical)?;
        Ok(Self {
            quantum,
            classical,
            blocks: BTreeMap::new(),
        })
    }

    pub fn quantum_layout(&self) -> &RegisterLayout {
        &self.quantum
    }

    pub fn classical_layout(&self) -> &RegisterLayout {
        &self.classical
    }

    pub fn blocks(&self) -> &BTreeMap<usize, DMatrix<Complex64>> {
        &self.blocks
    }

    /// Adds `weight · |v⟩⟨v|` to the block of record `key`.
    pub fn add_pure(&mut self, key: usize, weight: f64, v: &RawVector) -> Result<()> {
        if v.layout() != &self.quantum {
            return Err(Error::LayoutMismatch(format!("{} vs {}", v.layout(), self.quantum)));
        }
        let a = v.amps();
        let term = (a * a.adjoint()).map(|z| z * weight);
        self.add_operator(key, term)
    }

    pub fn add_operator(&mut self, key: usize, m: DMatrix<Complex64>) -> Result<()> {
        if key >= self.classical.total_dim() {
            return Err(Error::IndexOutOfRange {
                register: "<record>".into(),
                index: key,
                dim: self.classical.total_dim(),
            });
        }
        let n = self.quantum.total_dim();
        if m.nrows() != n || m.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: m.nrows(),
            });
        }
        self.blocks.entry(key).and_modify(|b| *b += &m).or_insert(m);
        Ok(())
    }

    pub fn trace(&self) -> f64 {
        self.blocks.values().map(|b| b.trace().re).sum()
    }

    /// Dephases a quantum register inside every block.
    pub fn dephase(&self, register: &str) -> Result<Self> {
        let pos = self.quantum.position(register)?;
        Ok(Self {
            quantum: self.quantum.clone(),
            classical: self.classical.clone(),
            blocks: self
                .blocks
                .iter()
                .map(|(k, b)| (*k, dephase_matrix(&self.quantum, b, pos)))
                .collect(),
        })
    }

    /// Probability of each record value.
    pub fn record_distribution(&self) -> BTreeMap<usize, f64> {
        self.blocks.iter().map(|(k, b)| (*k, b.trace().re)).collect()
    }

    /// Reduced operator on the quantum registers `keep` after discarding
    /// the record.
    pub fn quantum_marginal(&self, keep: &[&str]) -> Result<DensityOperator> {
        let n = self.quantum.total_dim();
        let mut sum = DMatrix::zeros(n, n);
        for b in self.blocks.values() {
            sum += b;
        }
        let (sub, m) = partial_trace_matrix(&self.quantum, &sum, keep)?;
        DensityOperator::new(sub, m)
    }

    /// Dense operator over `quantum ⊗ classical`.
    pub fn to_density(&self) -> Result<DensityOperator> {
        let layout = self.quantum.concat(&self.classical)?;
        let n = layout.total_dim();
        if n > super::op::DENSE_LIMIT {
            return Err(Error::TooLarge {
                what: "dense density operator",
                size: n,
                limit: super::op::DENSE_LIMIT,
            });
        }
        let dc = self.classical.total_dim();
        let mut m = DMatrix::zeros(n, n);
        for (&c, b) in &self.blocks {
            for i in 0..b.nrows() {
                for j in 0..b.ncols() {
                    m[(i * dc + c, j * dc + c)] = b[(i, j)];
                }
            }
        }
        DensityOperator::new(layout, m)
    }

    /// Exact trace distance; blocks with different records are orthogonal.
    pub fn trace_distance(&self, other: &Self) -> Result<f64> {
        if self.quantum != other.quantum || self.classical != other.classical {
            return Err(Error::LayoutMismatch("classical-quantum layouts differ".into()));
        }
        let keys: std::collections::BTreeSet<usize> = self.blocks.keys().chain(other.blocks.keys()).copied().collect();
        let n = self.quantum.total_dim();
        let zero = DMatrix::zeros(n, n);
        let total: f64 = keys
            .into_iter()
            .map(|k| {
                let a = self.blocks.get(&k).unwrap_or(&zero);
                let b = other.blocks.get(&k).unwrap_or(&zero);
                trace_norm(&(a - b))
            })
            .sum();
        Ok(0.5 * total)
    }

    /// Smallest eigenvalue over all blocks.
    pub fn min_eigenvalue(&self) -> f64 {
        self.blocks
            .values()
            .flat_map(hermitian_eigenvalues)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn hermiticity_deviation(&self) -> f64 {
        self.blocks
            .values()
            .map(|b| (b - b.adjoint()).max_abs())
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::registers::haar::{haar_random_state, haar_random_unitary};
    use nalgebra::DVector;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn qubit(name: &str) -> RegisterLayout {
        RegisterLayout::new(&[(name, 2)]).unwrap()
    }

    fn plus(name: &str) -> StateVector {
        let r = 1.0 / 2f64.sqrt();
        StateVector::from_amplitudes(qubit(name), DVector::from_vec(vec![c(r), c(r)])).unwrap()
    }

    fn random_density(layout: &RegisterLayout, seed: u64) -> DensityOperator {
        // mixture of four Haar states
        let parts: Vec<DensityOperator> = (0..4)
            .map(|k| DensityOperator::from_pure(&haar_random_state(layout, seed * 10 + k).unwrap()))
            .collect();
        let weighted: Vec<(f64, &DensityOperator)> = [0.1, 0.2, 0.3, 0.4].iter().copied().zip(parts.iter()).collect();
        DensityOperator::mixture(&weighted).unwrap()
    }

    #[test]
    fn dephase_leaves_diagonal_states() {
        let l = RegisterLayout::new(&[("A", 2), ("B", 3)]).unwrap();
        let diag = DMatrix::from_diagonal(&DVector::from_vec([0.1, 0.2, 0.3, 0.1, 0.2, 0.1].map(c).to_vec()));
        let rho = DensityOperator::new(l, diag).unwrap();
        assert_eq!(rho.dephase("A").unwrap(), rho);
    }

    #[test]
    fn dephase_plus_gives_maximally_mixed() {
        let rho = DensityOperator::from_pure(&plus("A")).dephase("A").unwrap();
        let half = DMatrix::from_diagonal(&DVector::from_vec(vec![c(0.5), c(0.5)]));
        assert!((rho.matrix() - half).max_abs() < 1e-15);
    }

    #[test]
    fn dephase_is_idempotent() {
        let l = RegisterLayout::new(&[("A", 2), ("B", 3)]).unwrap();
        let rho = random_density(&l, 4);
        let once = rho.dephase("B").unwrap();
        let twice = once.dephase("B").unwrap();
        assert!((once.matrix() - twice.matrix()).max_abs() < 1e-12);
        assert!((once.trace() - c(1.0)).norm() < 1e-12);
        assert!(matches!(rho.dephase("Q"), Err(Error::UnknownRegister(_))));
    }

    #[test]
    fn partial_trace_keep_all_is_identity() {
        let l = RegisterLayout::new(&[("A", 2), ("B", 3)]).unwrap();
        let rho = random_density(&l, 1);
        assert_eq!(rho.partial_trace(&["B", "A"]).unwrap(), rho);
        assert!(matches!(rho.partial_trace(&[]), Err(Error::EmptyKeep)));
    }

    #[test]
    fn bell_pair_reduces_to_maximally_mixed() {
        let l = RegisterLayout::new(&[("A", 2), ("B", 2)]).unwrap();
        let r = 1.0 / 2f64.sqrt();
        let bell = StateVector::from_amplitudes(l, DVector::from_vec(vec![c(r), c(0.0), c(0.0), c(r)])).unwrap();
        let red = DensityOperator::from_pure(&bell).partial_trace(&["B"]).unwrap();
        let half = DMatrix::from_diagonal(&DVector::from_vec(vec![c(0.5), c(0.5)]));
        assert!((red.matrix() - half).max_abs() < 1e-15);
    }

    #[test]
    fn product_state_partial_trace_recovers_factor() {
        let la = RegisterLayout::new(&[("A", 3)]).unwrap();
        let lb = RegisterLayout::new(&[("B", 2)]).unwrap();
        let ra = random_density(&la, 7);
        let rb = random_density(&lb, 8);
        let joint = ra.tensor(&rb).unwrap();
        let back = joint.partial_trace(&["A"]).unwrap();
        assert!((back.matrix() - ra.matrix()).max_abs() < 1e-12);
        let back_b = joint.partial_trace(&["B"]).unwrap();
        assert!((back_b.matrix() - rb.matrix()).max_abs() < 1e-12);
    }

    #[test]
    fn trace_distance_examples() {
        let zero = DensityOperator::from_pure(&StateVector::zero(&qubit("A")));
        let one = DensityOperator::from_pure(&StateVector::basis(&qubit("A"), &[("A", 1)]).unwrap());
        assert!(trace_distance(&zero, &zero).unwrap().abs() < 1e-15);
        assert!((trace_distance(&zero, &one).unwrap() - 1.0).abs() < 1e-10);
        // ½(ρ+σ) − ρ = ½(σ − ρ) has eigenvalues ±½, so the distance is ½
        let mix = DensityOperator::mixture(&[(0.5, &zero), (0.5, &one)]).unwrap();
        assert!((trace_distance(&mix, &zero).unwrap() - 0.5).abs() < 1e-10);
        assert!(trace_distance(&zero, &DensityOperator::from_pure(&plus("B"))).is_err());
    }

    #[test]
    fn cq_trace_distance_matches_dense() {
        let q = RegisterLayout::new(&[("A", 2), ("B", 2)]).unwrap();
        let rec = RegisterLayout::new(&[("R", 3)]).unwrap();
        let mut s1 = CqState::new(q.clone(), rec.clone()).unwrap();
        let mut s2 = CqState::new(q.clone(), rec.clone()).unwrap();
        for k in 0..3u64 {
            let v = haar_random_state(&q, 40 + k).unwrap();
            s1.add_pure(k as usize, 1.0 / 3.0, v.as_raw()).unwrap();
        }
        let u = haar_random_unitary(4, 9).unwrap();
        for k in 0..2u64 {
            let v = haar_random_state(&q, 40 + k).unwrap();
            let w = RawVector::new(q.clone(), &u * v.amps()).unwrap();
            s2.add_pure(k as usize * 2, 0.5, &w).unwrap();
        }
        let dense = trace_distance(&s1.to_density().unwrap(), &s2.to_density().unwrap()).unwrap();
        let blocks = s1.trace_distance(&s2).unwrap();
        assert!((dense - blocks).abs() < 1e-12);
        assert!(blocks > 0.1);
    }
}
