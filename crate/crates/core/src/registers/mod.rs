//! Finite-dimensional quantum state algebra over named registers.
//!
//! States, operators and channels all share a [`RegisterLayout`], which fixes
//! the tensor-product ordering of the space. Operators act on a subset of
//! registers and are stored in whatever structured form is cheapest
//! (dense, diagonal, basis permutation or a product of those), so the
//! simulator circuits never need a full-space dense matrix.

mod density;
mod haar;
mod layout;
mod op;
mod state;

pub use density::{trace_distance, trace_norm, CqState, DensityOperator};
pub use haar::{haar_random_state, haar_random_unitary};
pub use layout::{Register, RegisterLayout};
pub use op::{projector_deviation, unitarity_deviation, LinearOp, OpKind, DENSE_LIMIT};
pub use state::{Measurement, RawVector, StateVector};

#[cfg(test)]
pub(crate) use density::hermitian_eigenvalues;
pub(crate) use op::check_unit;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest entry modulus of a complex matrix.
pub trait MaxAbs {
    fn max_abs(&self) -> f64;
}

impl MaxAbs for DMatrix<Complex64> {
    fn max_abs(&self) -> f64 {
        self.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// Result of a projective measurement onto one projector.
#[derive(Debug, Clone)]
pub struct Projection {
    pub prob: f64,
    pub branch: Branch,
}

/// Post-measurement state, or an explicit marker when the branch has no
/// weight. Callers can therefore never renormalize numerical noise by
/// accident.
#[derive(Debug, Clone)]
pub enum Branch {
    Collapsed(StateVector),
    Empty,
}

impl Branch {
    pub fn state(&self) -> Option<&StateVector> {
        match self {
            Branch::Collapsed(s) => Some(s),
            Branch::Empty => None,
        }
    }
}

/// Measures `proj` on `state`: returns `‖P s‖²` and `P s / ‖P s‖`.
pub fn project(proj: &LinearOp, state: &StateVector) -> Result<Projection> {
    if proj.kind() != OpKind::Projector {
        return Err(Error::WrongKind("project requires a projector"));
    }
    let image = proj.apply_raw(state.as_raw())?;
    match image.normalized() {
        Some(s) => Ok(Projection {
            prob: image.norm_squared(),
            branch: Branch::Collapsed(s),
        }),
        None => Ok(Projection {
            prob: 0.0,
            branch: Branch::Empty,
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DVector;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn project_plus_onto_zero() {
        let l = RegisterLayout::new(&[("A", 2)]).unwrap();
        let r = 1.0 / 2f64.sqrt();
        let s = StateVector::from_amplitudes(l.clone(), DVector::from_vec(vec![c(r), c(r)])).unwrap();
        let p0 = LinearOp::projector(
            &l,
            &["A"],
            DMatrix::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(0.0)]),
        )
        .unwrap();
        let out = project(&p0, &s).unwrap();
        assert!((out.prob - 0.5).abs() < 1e-15);
        assert_eq!(out.branch.state().unwrap().amps().as_slice(), &[c(1.0), c(0.0)]);
    }

    #[test]
    fn project_identity_keeps_state() {
        let l = RegisterLayout::new(&[("A", 3)]).unwrap();
        let s = haar_random_state(&l, 2).unwrap();
        let id = LinearOp::projector(&l, &["A"], DMatrix::identity(3, 3)).unwrap();
        let out = project(&id, &s).unwrap();
        assert!((out.prob - 1.0).abs() < 1e-12);
        assert!(out.branch.state().unwrap().as_raw().distance(s.as_raw()).unwrap() < 1e-12);
    }

    #[test]
    fn empty_branch_is_marked() {
        let l = RegisterLayout::new(&[("A", 2)]).unwrap();
        let s = StateVector::basis(&l, &[("A", 1)]).unwrap();
        let p0 = LinearOp::diagonal_projector(&l, &["A"], DVector::from_vec(vec![c(1.0), c(0.0)])).unwrap();
        let out = project(&p0, &s).unwrap();
        assert_eq!(out.prob, 0.0);
        assert!(matches!(out.branch, Branch::Empty));
        let u = LinearOp::identity(&l);
        assert!(project(&u, &s).is_err());
    }
}
