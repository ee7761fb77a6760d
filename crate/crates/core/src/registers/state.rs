use nalgebra::DVector;
use num_complex::Complex64;
use rand::Rng;

use super::layout::RegisterLayout;
use crate::error::{Error, Result};
use crate::{NORM_TOL, ZERO_NORM};

/// Amplitude vector with no normalization guarantee.
///
/// Used for intermediate quantities such as `Π A|ψ⟩|0⟩` whose norm carries
/// information.
#[derive(Debug, Clone, PartialEq)]
pub struct RawVector {
    layout: RegisterLayout,
    amps: DVector<Complex64>,
}

impl RawVector {
    pub fn new(layout: RegisterLayout, amps: DVector<Complex64>) -> Result<Self> {
        if amps.len() != layout.total_dim() {
            return Err(Error::DimensionMismatch {
                expected: layout.total_dim(),
                found: amps.len(),
            });
        }
        Ok(Self { layout, amps })
    }

    pub fn zeros(layout: RegisterLayout) -> Self {
        let amps = DVector::zeros(layout.total_dim());
        Self { layout, amps }
    }

    pub fn layout(&self) -> &RegisterLayout {
        &self.layout
    }

    pub fn amps(&self) -> &DVector<Complex64> {
        &self.amps
    }

    pub(crate) fn amps_mut(&mut self) -> &mut DVector<Complex64> {
        &mut self.amps
    }

    pub fn into_amps(self) -> DVector<Complex64> {
        self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.norm()
    }

    pub fn norm_squared(&self) -> f64 {
        self.amps.norm_squared()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            layout: self.layout.clone(),
            amps: self.amps.map(|a| a * c),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(Self {
            layout: self.layout.clone(),
            amps: &self.amps + &other.amps,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(Self {
            layout: self.layout.clone(),
            amps: &self.amps - &other.amps,
        })
    }

    /// `⟨self|other⟩`, conjugate-linear in `self`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        self.check_same(other)?;
        Ok(self.amps.dotc(&other.amps))
    }

    /// Distance `‖self − other‖`.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        self.check_same(other)?;
        Ok((&self.amps - &other.amps).norm())
    }

    /// Normalizes, or reports an empty branch when the norm vanishes.
    pub fn normalized(&self) -> Option<StateVector> {
        let n = self.norm();
        if n < ZERO_NORM {
            return None;
        }
        Some(StateVector(self.scale(Complex64::new(1.0 / n, 0.0))))
    }

    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let layout = self.layout.concat(&other.layout)?;
        let db = other.amps.len();
        let amps = DVector::from_fn(layout.total_dim(), |i, _| self.amps[i / db] * other.amps[i % db]);
        Ok(Self { layout, amps })
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.layout != other.layout {
            return Err(Error::LayoutMismatch(format!("{} vs {}", self.layout, other.layout)));
        }
        Ok(())
    }
}

/// A normalized pure state.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector(RawVector);

impl StateVector {
    /// Wraps `raw`, which must already have unit norm.
    pub fn from_raw(raw: RawVector) -> Result<Self> {
        let n = raw.norm();
        if (n - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(n));
        }
        Ok(Self(raw))
    }

    pub fn from_amplitudes(layout: RegisterLayout, amps: DVector<Complex64>) -> Result<Self> {
        Self::from_raw(RawVector::new(layout, amps)?)
    }

    /// Computational basis state. Every register must be assigned exactly once.
    pub fn basis(layout: &RegisterLayout, assignment: &[(&str, usize)]) -> Result<Self> {
        for (name, _) in assignment {
            layout.position(name)?;
        }
        let mut multi = Vec::with_capacity(layout.len());
        for r in layout.registers() {
            let idx = assignment
                .iter()
                .find(|(n, _)| *n == r.name)
                .map(|(_, i)| *i)
                .ok_or_else(|| Error::MissingAssignment(r.name.clone()))?;
            multi.push(idx);
        }
        let flat = layout.flatten(&multi)?;
        Ok(Self::basis_index(layout, flat))
    }

    /// Basis state at a flat index (caller guarantees the range).
    pub fn basis_index(layout: &RegisterLayout, index: usize) -> Self {
        let mut raw = RawVector::zeros(layout.clone());
        raw.amps_mut()[index] = Complex64::new(1.0, 0.0);
        Self(raw)
    }

    /// The all-zero basis state.
    pub fn zero(layout: &RegisterLayout) -> Self {
        Self::basis_index(layout, 0)
    }

    pub fn layout(&self) -> &RegisterLayout {
        self.0.layout()
    }

    pub fn amps(&self) -> &DVector<Complex64> {
        self.0.amps()
    }

    pub fn as_raw(&self) -> &RawVector {
        &self.0
    }

    pub fn into_raw(self) -> RawVector {
        self.0
    }

    pub fn tensor(&self, other: &Self) -> Result<Self> {
        Ok(Self(self.0.tensor(&other.0)?))
    }

    /// `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &Self) -> Result<f64> {
        Ok(self.0.inner(&other.0)?.norm_sqr())
    }

    /// Born probabilities of the outcomes of `register`.
    pub fn probabilities(&self, register: &str) -> Result<Vec<f64>> {
        let layout = self.layout();
        let pos = layout.position(register)?;
        let mut probs = vec![0.0; layout.registers()[pos].dim];
        for (i, a) in self.amps().iter().enumerate() {
            probs[layout.digit(i, pos)] += a.norm_sqr();
        }
        Ok(probs)
    }

    /// Unnormalized conditional vector for `register = outcome`.
    pub fn conditional(&self, register: &str, outcome: usize) -> Result<RawVector> {
        let layout = self.layout();
        let pos = layout.position(register)?;
        let dim = layout.registers()[pos].dim;
        if outcome >= dim {
            return Err(Error::IndexOutOfRange {
                register: register.to_string(),
                index: outcome,
                dim,
            });
        }
        let mut out = RawVector::zeros(layout.clone());
        for (i, a) in self.amps().iter().enumerate() {
            if layout.digit(i, pos) == outcome {
                out.amps_mut()[i] = *a;
            }
        }
        Ok(out)
    }

    /// Computational-basis measurement of one register.
    pub fn measure<R: Rng + ?Sized>(&self, register: &str, rng: &mut R) -> Result<Measurement> {
        let probs = self.probabilities(register)?;
        let u: f64 = rng.random();
        let mut acc = 0.0;
        let mut outcome = probs.len() - 1;
        for (k, p) in probs.iter().enumerate() {
            acc += p;
            if u < acc {
                outcome = k;
                break;
            }
        }
        // never land on a zero-probability outcome through rounding
        while probs[outcome] == 0.0 && outcome > 0 {
            outcome -= 1;
        }
        let collapsed = self
            .conditional(register, outcome)?
            .normalized()
            .expect("sampled outcome has positive probability");
        Ok(Measurement {
            outcome,
            prob: probs[outcome],
            collapsed,
        })
    }
}

/// Outcome of [`StateVector::measure`].
#[derive(Debug, Clone)]
pub struct Measurement {
    pub outcome: usize,
    pub prob: f64,
    pub collapsed: StateVector,
}
