use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::layout::RegisterLayout;
use super::state::{RawVector, StateVector};
use super::MaxAbs;
use crate::error::{Error, Result};
use crate::{NORM_TOL, OP_TOL};

/// Largest full-space dimension [`LinearOp::to_dense`] will materialize.
pub const DENSE_LIMIT: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OpKind {
    Unitary,
    Projector,
}

/// How the local action on the target registers is stored.
#[derive(Debug, Clone, PartialEq)]
enum Repr {
    Dense(DMatrix<Complex64>),
    Diagonal(DVector<Complex64>),
    /// `e_j ↦ e_{perm[j]}`.
    Permutation(Vec<usize>),
    /// Matrix product, leftmost factor applied last.
    Product(Vec<LinearOp>),
}

/// An operator acting on a subset of the registers of a layout, tensored
/// with the identity elsewhere.
///
/// The local basis over `targets` is flattened in the order the targets were
/// given, first target most significant.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearOp {
    layout: RegisterLayout,
    targets: Vec<usize>,
    kind: OpKind,
    repr: Repr,
}

impl LinearOp {
    /// Dense unitary on `targets`. Checked to `1e-10`.
    pub fn unitary(layout: &RegisterLayout, targets: &[&str], matrix: DMatrix<Complex64>) -> Result<Self> {
        let op = Self::dense(layout, targets, matrix, OpKind::Unitary)?;
        let dev = unitarity_deviation(op.dense_local());
        if dev > OP_TOL {
            return Err(Error::NotUnitary(dev));
        }
        Ok(op)
    }

    /// Dense orthogonal projector on `targets`. Checked to `1e-10`.
    pub fn projector(layout: &RegisterLayout, targets: &[&str], matrix: DMatrix<Complex64>) -> Result<Self> {
        let op = Self::dense(layout, targets, matrix, OpKind::Projector)?;
        let dev = projector_deviation(op.dense_local());
        if dev > OP_TOL {
            return Err(Error::NotProjector(dev));
        }
        Ok(op)
    }

    /// Diagonal unitary; every entry must have unit modulus.
    pub fn diagonal_unitary(layout: &RegisterLayout, targets: &[&str], diag: DVector<Complex64>) -> Result<Self> {
        let op = Self::diagonal(layout, targets, diag, OpKind::Unitary)?;
        if let Repr::Diagonal(d) = &op.repr {
            let dev = d.iter().map(|z| (z.norm() - 1.0).abs()).fold(0.0, f64::max);
            if dev > OP_TOL {
                return Err(Error::NotUnitary(dev));
            }
        }
        Ok(op)
    }

    /// Diagonal projector; every entry must be 0 or 1.
    pub fn diagonal_projector(layout: &RegisterLayout, targets: &[&str], diag: DVector<Complex64>) -> Result<Self> {
        let op = Self::diagonal(layout, targets, diag, OpKind::Projector)?;
        if let Repr::Diagonal(d) = &op.repr {
            let dev = d.iter().map(|z| (z - z * z).norm().max(z.im.abs())).fold(0.0, f64::max);
            if dev > OP_TOL {
                return Err(Error::NotProjector(dev));
            }
        }
        Ok(op)
    }

    /// Basis permutation `e_j ↦ e_{perm[j]}` on `targets`.
    pub fn permutation(layout: &RegisterLayout, targets: &[&str], perm: Vec<usize>) -> Result<Self> {
        let (positions, dim) = resolve_targets(layout, targets)?;
        if perm.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: perm.len(),
            });
        }
        let mut seen = vec![false; dim];
        for &p in &perm {
            if p >= dim || seen[p] {
                return Err(Error::NotBijection(perm));
            }
            seen[p] = true;
        }
        Ok(Self {
            layout: layout.clone(),
            targets: positions,
            kind: OpKind::Unitary,
            repr: Repr::Permutation(perm),
        })
    }

    pub fn identity(layout: &RegisterLayout) -> Self {
        Self {
            layout: layout.clone(),
            targets: Vec::new(),
            kind: OpKind::Unitary,
            repr: Repr::Diagonal(DVector::from_element(1, Complex64::new(1.0, 0.0))),
        }
    }

    /// Matrix product `ops[0] · ops[1] · …` of unitaries on one layout.
    pub fn product(ops: Vec<LinearOp>) -> Result<Self> {
        let first = ops.first().ok_or(Error::InvalidArgument("empty product".into()))?;
        let layout = first.layout.clone();
        let mut targets: Vec<usize> = Vec::new();
        for op in &ops {
            if op.layout != layout {
                return Err(Error::LayoutMismatch(format!("{} vs {}", op.layout, layout)));
            }
            if op.kind != OpKind::Unitary {
                return Err(Error::WrongKind("products are formed from unitaries only"));
            }
            for &t in &op.targets {
                if !targets.contains(&t) {
                    targets.push(t);
                }
            }
        }
        targets.sort_unstable();
        Ok(Self {
            layout,
            targets,
            kind: OpKind::Unitary,
            repr: Repr::Product(ops),
        })
    }

    /// `self · other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        Self::product(vec![self.clone(), other.clone()])
    }

    fn dense(layout: &RegisterLayout, targets: &[&str], matrix: DMatrix<Complex64>, kind: OpKind) -> Result<Self> {
        let (positions, dim) = resolve_targets(layout, targets)?;
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: matrix.nrows().max(matrix.ncols()),
            });
        }
        Ok(Self {
            layout: layout.clone(),
            targets: positions,
            kind,
            repr: Repr::Dense(matrix),
        })
    }

    fn diagonal(layout: &RegisterLayout, targets: &[&str], diag: DVector<Complex64>, kind: OpKind) -> Result<Self> {
        let (positions, dim) = resolve_targets(layout, targets)?;
        if diag.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: diag.len(),
            });
        }
        Ok(Self {
            layout: layout.clone(),
            targets: positions,
            kind,
            repr: Repr::Diagonal(diag),
        })
    }

    fn dense_local(&self) -> &DMatrix<Complex64> {
        match &self.repr {
            Repr::Dense(m) => m,
            _ => unreachable!("dense_local on non-dense representation"),
        }
    }

    pub fn layout(&self) -> &RegisterLayout {
        &self.layout
    }

    pub fn kind(&self) -> OpKind {
        self.kind
    }

    pub fn target_names(&self) -> Vec<&str> {
        self.targets
            .iter()
            .map(|&p| self.layout.registers()[p].name.as_str())
            .collect()
    }

    /// Same local action on another layout containing the target registers
    /// with equal dimensions.
    pub fn lift(&self, layout: &RegisterLayout) -> Result<Self> {
        let mut targets = Vec::with_capacity(self.targets.len());
        for &p in &self.targets {
            let r = &self.layout.registers()[p];
            let q = layout.position(&r.name)?;
            if layout.registers()[q].dim != r.dim {
                return Err(Error::DimensionMismatch {
                    expected: r.dim,
                    found: layout.registers()[q].dim,
                });
            }
            targets.push(q);
        }
        let repr = match &self.repr {
            Repr::Product(ops) => Repr::Product(ops.iter().map(|o| o.lift(layout)).collect::<Result<Vec<_>>>()?),
            other => other.clone(),
        };
        Ok(Self {
            layout: layout.clone(),
            targets,
            kind: self.kind,
            repr,
        })
    }

    pub fn adjoint(&self) -> Self {
        let repr = match &self.repr {
            Repr::Dense(m) => Repr::Dense(m.adjoint()),
            Repr::Diagonal(d) => Repr::Diagonal(d.map(|z| z.conj())),
            Repr::Permutation(p) => {
                let mut inv = vec![0; p.len()];
                for (j, &pj) in p.iter().enumerate() {
                    inv[pj] = j;
                }
                Repr::Permutation(inv)
            }
            Repr::Product(ops) => Repr::Product(ops.iter().rev().map(|o| o.adjoint()).collect()),
        };
        Self {
            layout: self.layout.clone(),
            targets: self.targets.clone(),
            kind: self.kind,
            repr,
        }
    }

    /// `I − P` for a projector `P`.
    pub fn complement(&self) -> Result<Self> {
        if self.kind != OpKind::Projector {
            return Err(Error::WrongKind("complement requires a projector"));
        }
        let repr = match &self.repr {
            Repr::Dense(m) => Repr::Dense(DMatrix::identity(m.nrows(), m.ncols()) - m),
            Repr::Diagonal(d) => Repr::Diagonal(d.map(|z| Complex64::new(1.0, 0.0) - z)),
            _ => unreachable!("projectors are dense or diagonal"),
        };
        Ok(Self {
            layout: self.layout.clone(),
            targets: self.targets.clone(),
            kind: OpKind::Projector,
            repr,
        })
    }

    /// `(phase − 1)·P + I` for a projector `P`, a unitary when `|phase| = 1`.
    pub fn phase_on_range(&self, phase: Complex64) -> Result<Self> {
        if self.kind != OpKind::Projector {
            return Err(Error::WrongKind("phase_on_range requires a projector"));
        }
        check_unit(phase)?;
        let one = Complex64::new(1.0, 0.0);
        let repr = match &self.repr {
            Repr::Dense(m) => Repr::Dense(m.map(|z| z * (phase - one)) + DMatrix::identity(m.nrows(), m.ncols())),
            Repr::Diagonal(d) => Repr::Diagonal(d.map(|z| z * (phase - one) + one)),
            _ => unreachable!("projectors are dense or diagonal"),
        };
        Ok(Self {
            layout: self.layout.clone(),
            targets: self.targets.clone(),
            kind: OpKind::Unitary,
            repr,
        })
    }

    /// Applies the operator to an arbitrary vector.
    pub fn apply_raw(&self, v: &RawVector) -> Result<RawVector> {
        if v.layout() != &self.layout {
            return Err(Error::LayoutMismatch(format!("{} vs {}", v.layout(), self.layout)));
        }
        let mut out = v.clone();
        self.apply_in_place(out.amps_mut());
        Ok(out)
    }

    /// Applies a unitary to a normalized state.
    pub fn apply(&self, state: &StateVector) -> Result<StateVector> {
        if self.kind != OpKind::Unitary {
            return Err(Error::WrongKind("use apply_raw or project for projectors"));
        }
        let raw = self.apply_raw(state.as_raw())?;
        StateVector::from_raw(raw)
    }

    fn apply_in_place(&self, amps: &mut DVector<Complex64>) {
        if let Repr::Product(ops) = &self.repr {
            for op in ops.iter().rev() {
                op.apply_in_place(amps);
            }
            return;
        }
        let (t_off, r_off) = self.layout.split_offsets(&self.targets);
        let d = t_off.len();
        match &self.repr {
            Repr::Diagonal(diag) => {
                if self.targets.is_empty() {
                    let z = diag[0];
                    amps.iter_mut().for_each(|a| *a *= z);
                    return;
                }
                for &r in &r_off {
                    for (t, &o) in t_off.iter().enumerate() {
                        amps[r + o] *= diag[t];
                    }
                }
            }
            Repr::Permutation(perm) => {
                let mut buf = vec![Complex64::new(0.0, 0.0); d];
                for &r in &r_off {
                    for (t, &o) in t_off.iter().enumerate() {
                        buf[perm[t]] = amps[r + o];
                    }
                    for (t, &o) in t_off.iter().enumerate() {
                        amps[r + o] = buf[t];
                    }
                }
            }
            Repr::Dense(m) => {
                let mut local = DVector::zeros(d);
                let mut image = DVector::zeros(d);
                for &r in &r_off {
                    for (t, &o) in t_off.iter().enumerate() {
                        local[t] = amps[r + o];
                    }
                    m.mul_to(&local, &mut image);
                    for (t, &o) in t_off.iter().enumerate() {
                        amps[r + o] = image[t];
                    }
                }
            }
            Repr::Product(_) => unreachable!(),
        }
    }

    /// Full-space matrix, limited to [`DENSE_LIMIT`].
    pub fn to_dense(&self) -> Result<DMatrix<Complex64>> {
        let n = self.layout.total_dim();
        if n > DENSE_LIMIT {
            return Err(Error::TooLarge {
                what: "dense operator",
                size: n,
                limit: DENSE_LIMIT,
            });
        }
        let mut m = DMatrix::zeros(n, n);
        let mut col = DVector::zeros(n);
        for j in 0..n {
            col.fill(Complex64::new(0.0, 0.0));
            col[j] = Complex64::new(1.0, 0.0);
            self.apply_in_place(&mut col);
            m.set_column(j, &col);
        }
        Ok(m)
    }

    /// Deviation from the defining identity of this operator's kind,
    /// measured on the union of its targets.
    pub fn kind_deviation(&self) -> Result<f64> {
        match &self.repr {
            Repr::Dense(m) => Ok(match self.kind {
                OpKind::Unitary => unitarity_deviation(m),
                OpKind::Projector => projector_deviation(m),
            }),
            Repr::Diagonal(d) => Ok(match self.kind {
                OpKind::Unitary => d.iter().map(|z| (z.norm() - 1.0).abs()).fold(0.0, f64::max),
                OpKind::Projector => d.iter().map(|z| (z - z * z).norm().max(z.im.abs())).fold(0.0, f64::max),
            }),
            Repr::Permutation(_) => Ok(0.0),
            Repr::Product(_) => Ok(unitarity_deviation(&self.to_dense()?)),
        }
    }
}

fn resolve_targets(layout: &RegisterLayout, targets: &[&str]) -> Result<(Vec<usize>, usize)> {
    let mut positions = Vec::with_capacity(targets.len());
    let mut dim = 1;
    for t in targets {
        let p = layout.position(t)?;
        if positions.contains(&p) {
            return Err(Error::DuplicateRegister(t.to_string()));
        }
        positions.push(p);
        dim *= layout.registers()[p].dim;
    }
    Ok((positions, dim))
}

pub(crate) fn check_unit(z: Complex64) -> Result<()> {
    if (z.norm() - 1.0).abs() > NORM_TOL {
        return Err(Error::NotUnitModulus(z));
    }
    Ok(())
}

/// Largest entry of `|U†U − I|`.
pub fn unitarity_deviation(m: &DMatrix<Complex64>) -> f64 {
    let g = m.adjoint() * m;
    let n = g.nrows();
    (&g - DMatrix::<Complex64>::identity(n, n)).max_abs()
}

/// Largest entry of `|P² − P|` or `|P − P†|`.
pub fn projector_deviation(m: &DMatrix<Complex64>) -> f64 {
    let idem = (m * m - m).max_abs();
    let herm = (m - m.adjoint()).max_abs();
    idem.max(herm)
}
