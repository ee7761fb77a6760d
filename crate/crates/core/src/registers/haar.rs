use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::layout::RegisterLayout;
use super::op::LinearOp;
use super::state::{RawVector, StateVector};
use crate::error::{Error, Result};

fn complex_gaussian(rng: &mut ChaCha8Rng) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Haar-distributed unitary matrix.
///
/// QR-factorizes a matrix of i.i.d. standard complex Gaussians and rescales
/// the columns of `Q` by the phases of `diag(R)`, which removes the bias of
/// the Householder sign convention.
pub fn haar_random_unitary(dim: usize, seed: u64) -> Result<DMatrix<Complex64>> {
    if dim == 0 {
        return Err(Error::ZeroDim);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = DMatrix::from_fn(dim, dim, |_, _| complex_gaussian(&mut rng));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    Ok(q)
}

impl LinearOp {
    /// Haar-random unitary on `targets`.
    pub fn haar(layout: &RegisterLayout, targets: &[&str], seed: u64) -> Result<Self> {
        let mut dim = 1;
        for t in targets {
            dim *= layout.dim_of(t)?;
        }
        Self::unitary(layout, targets, haar_random_unitary(dim, seed)?)
    }
}

/// Haar-random pure state.
pub fn haar_random_state(layout: &RegisterLayout, seed: u64) -> Result<StateVector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let v = DVector::from_fn(layout.total_dim(), |_, _| complex_gaussian(&mut rng));
    RawVector::new(layout.clone(), v)?.normalized().ok_or(Error::ZeroDim)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::registers::op::unitarity_deviation;

    #[test]
    fn dim_one_is_a_phase() {
        let u = haar_random_unitary(1, 3).unwrap();
        assert!((u[(0, 0)].norm() - 1.0).abs() < 1e-14);
        assert!(matches!(haar_random_unitary(0, 1), Err(Error::ZeroDim)));
    }

    #[test]
    fn unitary_dim16() {
        let u = haar_random_unitary(16, 42).unwrap();
        assert!(unitarity_deviation(&u) < 1e-10);
    }

    #[test]
    fn deterministic_and_seed_sensitive() {
        let a = haar_random_unitary(8, 1).unwrap();
        assert_eq!(a, haar_random_unitary(8, 1).unwrap());
        let b = haar_random_unitary(8, 2).unwrap();
        // spectral norm of the difference
        let diff = (a - b).singular_values().max();
        assert!(diff > 1e-3);
    }

    #[test]
    fn first_row_phases_are_not_biased() {
        // Without the phase fix, the diagonal of R from Householder QR has a
        // fixed sign and Q inherits it. Over many draws the mean of U[0,0]
        // must vanish for a Haar measure.
        let mean: Complex64 = (0..400)
            .map(|s| haar_random_unitary(3, s).unwrap()[(0, 0)])
            .sum::<Complex64>()
            / 400.0;
        assert!(mean.norm() < 0.1, "mean {mean}");
    }
}
