use std::fmt;

use crate::error::{Error, Result};

/// A named register with a finite basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Register {
    pub name: String,
    pub dim: usize,
}

/// Ordered list of registers spanning a tensor-product space.
///
/// Basis indices are flattened row-major: the first register is the most
/// significant digit. Every operator and state in the crate relies on this
/// convention.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RegisterLayout {
    registers: Vec<Register>,
    strides: Vec<usize>,
    total_dim: usize,
}

impl RegisterLayout {
    pub fn new<S: AsRef<str>>(registers: &[(S, usize)]) -> Result<Self> {
        let mut regs: Vec<Register> = Vec::with_capacity(registers.len());
        for (name, dim) in registers {
            let name = name.as_ref();
            if regs.iter().any(|r| r.name == name) {
                return Err(Error::DuplicateRegister(name.to_string()));
            }
            if *dim == 0 {
                return Err(Error::ZeroDimension(name.to_string()));
            }
            regs.push(Register {
                name: name.to_string(),
                dim: *dim,
            });
        }
        let mut strides = vec![1; regs.len()];
        let mut total: usize = 1;
        for (i, r) in regs.iter().enumerate().rev() {
            strides[i] = total;
            total = total.checked_mul(r.dim).ok_or(Error::TooLarge {
                what: "layout dimension",
                size: usize::MAX,
                limit: usize::MAX,
            })?;
        }
        Ok(Self {
            registers: regs,
            strides,
            total_dim: total,
        })
    }

    pub fn registers(&self) -> &[Register] {
        &self.registers
    }

    pub fn len(&self) -> usize {
        self.registers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.registers.is_empty()
    }

    pub fn total_dim(&self) -> usize {
        self.total_dim
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.registers.iter().map(|r| r.name.as_str())
    }

    pub fn position(&self, name: &str) -> Result<usize> {
        self.registers
            .iter()
            .position(|r| r.name == name)
            .ok_or_else(|| Error::UnknownRegister(name.to_string()))
    }

    pub fn contains(&self, name: &str) -> bool {
        self.registers.iter().any(|r| r.name == name)
    }

    pub fn dim_of(&self, name: &str) -> Result<usize> {
        Ok(self.registers[self.position(name)?].dim)
    }

    pub fn stride(&self, position: usize) -> usize {
        self.strides[position]
    }

    pub fn flatten(&self, multi: &[usize]) -> Result<usize> {
        if multi.len() != self.registers.len() {
            return Err(Error::DimensionMismatch {
                expected: self.registers.len(),
                found: multi.len(),
            });
        }
        let mut idx = 0;
        for ((r, &m), &s) in self.registers.iter().zip(multi).zip(&self.strides) {
            if m >= r.dim {
                return Err(Error::IndexOutOfRange {
                    register: r.name.clone(),
                    index: m,
                    dim: r.dim,
                });
            }
            idx += m * s;
        }
        Ok(idx)
    }

    pub fn unflatten(&self, index: usize) -> Result<Vec<usize>> {
        if index >= self.total_dim {
            return Err(Error::IndexOutOfRange {
                register: "<flat>".into(),
                index,
                dim: self.total_dim,
            });
        }
        Ok(self
            .registers
            .iter()
            .zip(&self.strides)
            .map(|(r, &s)| (index / s) % r.dim)
            .collect())
    }

    /// Digit of register `position` inside the flat index.
    #[inline]
    pub fn digit(&self, index: usize, position: usize) -> usize {
        (index / self.strides[position]) % self.registers[position].dim
    }

    /// Layout restricted to `names`, keeping this layout's order.
    pub fn sublayout<S: AsRef<str>>(&self, names: &[S]) -> Result<Self> {
        for n in names {
            self.position(n.as_ref())?;
        }
        let kept: Vec<(&str, usize)> = self
            .registers
            .iter()
            .filter(|r| names.iter().any(|n| n.as_ref() == r.name))
            .map(|r| (r.name.as_str(), r.dim))
            .collect();
        Self::new(&kept)
    }

    /// Registers of `self` followed by those of `other`.
    pub fn concat(&self, other: &Self) -> Result<Self> {
        let regs: Vec<(&str, usize)> = self
            .registers
            .iter()
            .chain(other.registers.iter())
            .map(|r| (r.name.as_str(), r.dim))
            .collect();
        Self::new(&regs)
    }

    /// Offset tables splitting flat indices into (targets, rest).
    ///
    /// For every target multi-index `t` (flattened in the order given by
    /// `positions`) and every rest multi-index `r`, the full flat index is
    /// `target_offsets[t] + rest_offsets[r]`.
    pub(crate) fn split_offsets(&self, positions: &[usize]) -> (Vec<usize>, Vec<usize>) {
        let target_offsets = self.offsets_for(positions);
        let rest: Vec<usize> = (0..self.registers.len()).filter(|p| !positions.contains(p)).collect();
        let rest_offsets = self.offsets_for(&rest);
        (target_offsets, rest_offsets)
    }

    fn offsets_for(&self, positions: &[usize]) -> Vec<usize> {
        let mut offsets = vec![0usize];
        for &p in positions {
            let dim = self.registers[p].dim;
            let stride = self.strides[p];
            let mut next = Vec::with_capacity(offsets.len() * dim);
            for &o in &offsets {
                for d in 0..dim {
                    next.push(o + d * stride);
                }
            }
            offsets = next;
        }
        offsets
    }
}

impl fmt::Display for RegisterLayout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.registers.iter().map(|r| format!("{}:{}", r.name, r.dim)).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}
