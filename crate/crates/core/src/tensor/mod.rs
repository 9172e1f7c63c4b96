//! Covariant tensors with symmetry-compressed sparse storage.

mod dump;
mod ops;
mod symmetry;

pub use dump::{render_lines, scalar_line, DumpFormat, DumpLine};
pub use ops::{covariant_derivative, Connection, endomorphism_square, endomorphism_wedge, kulkarni_nomizu, raise_first_index, trace};
pub use symmetry::{decode, encode, layout, Generator, Layout, Symmetry};

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use symexpr::Expression;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum TensorError {
    #[error("component {index:?} violates the declared symmetry {symmetry}")]
    SymmetryViolation { index: Vec<usize>, symmetry: String },
    #[error("expected {expected} components, got {found}")]
    WrongLength { expected: usize, found: usize },
    #[error("symmetry {0} does not fit valence {1}")]
    SymmetryTooWide(String, usize),
    #[error("tensor is not symmetric")]
    NotSymmetric,
    #[error("shape mismatch: ({0},{1}) vs ({2},{3})")]
    ShapeMismatch(usize, usize, usize, usize),
}

/// A (0,k) tensor on an n-dimensional chart. Only nonzero canonical
/// representatives are stored.
#[derive(Clone)]
pub struct Tensor {
    dim: usize,
    valence: usize,
    symmetry: Symmetry,
    layout: Arc<Layout>,
    components: BTreeMap<usize, Expression>,
}

impl Tensor {
    pub fn zero(dim: usize, valence: usize, symmetry: Symmetry) -> Self {
        assert!(symmetry.fits(valence), "symmetry does not fit the valence");
        Tensor {
            dim,
            valence,
            layout: layout(dim, valence, &symmetry),
            symmetry,
            components: BTreeMap::new(),
        }
    }

    /// Evaluates `f` on each canonical representative; the caller promises
    /// that `f` respects `symmetry`.
    pub fn from_fn<F>(dim: usize, valence: usize, symmetry: Symmetry, f: F) -> Self
    where
        F: Fn(&[usize]) -> Expression + Sync,
    {
        let mut t = Tensor::zero(dim, valence, symmetry);
        let reps = t.layout.representatives().to_vec();
        let values: Vec<(usize, Expression)> = reps
            .into_par_iter()
            .filter_map(|flat| {
                let mut idx = vec![0; valence];
                decode(flat, dim, &mut idx);
                let v = f(&idx);
                (!v.is_zero()).then_some((flat, v))
            })
            .collect();
        t.components.extend(values);
        t
    }

    /// Builds from a dense row-major table, verifying the symmetry claim.
    pub fn from_dense(dim: usize, valence: usize, symmetry: Symmetry, values: Vec<Expression>) -> Result<Self, TensorError> {
        if !symmetry.fits(valence) {
            return Err(TensorError::SymmetryTooWide(symmetry.to_string(), valence));
        }
        let expected = dim.pow(valence as u32);
        if values.len() != expected {
            return Err(TensorError::WrongLength {
                expected,
                found: values.len(),
            });
        }
        let mut t = Tensor::zero(dim, valence, symmetry);
        for (flat, v) in values.iter().enumerate() {
            let (rep, sign) = t.layout.entry(flat);
            let expected = match sign {
                0 => Expression::zero(),
                1 => values[rep].clone(),
                _ => -&values[rep],
            };
            if *v != expected {
                let mut idx = vec![0; valence];
                decode(flat, dim, &mut idx);
                return Err(TensorError::SymmetryViolation {
                    index: idx,
                    symmetry: t.symmetry.to_string(),
                });
            }
        }
        for &rep in t.layout.representatives() {
            if !values[rep].is_zero() {
                t.components.insert(rep, values[rep].clone());
            }
        }
        Ok(t)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn valence(&self) -> usize {
        self.valence
    }

    pub fn symmetry(&self) -> &Symmetry {
        &self.symmetry
    }

    pub fn get(&self, idx: &[usize]) -> Expression {
        debug_assert_eq!(idx.len(), self.valence);
        self.get_flat(encode(idx, self.dim))
    }

    pub fn get_flat(&self, flat: usize) -> Expression {
        let (rep, sign) = self.layout.entry(flat);
        match (sign, self.components.get(&rep)) {
            (0, _) | (_, None) => Expression::zero(),
            (1, Some(v)) => v.clone(),
            (_, Some(v)) => -v,
        }
    }

    /// Borrowing accessor; `None` for zero components.
    pub fn get_ref(&self, idx: &[usize]) -> Option<(&Expression, i8)> {
        let (rep, sign) = self.layout.entry(encode(idx, self.dim));
        if sign == 0 {
            return None;
        }
        self.components.get(&rep).map(|v| (v, sign))
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    /// Nonzero canonical components in lexicographic index order.
    pub fn nonzero(&self) -> impl Iterator<Item = (Vec<usize>, &Expression)> + '_ {
        self.components.iter().map(move |(&flat, v)| {
            let mut idx = vec![0; self.valence];
            decode(flat, self.dim, &mut idx);
            (idx, v)
        })
    }

    pub fn nonzero_count(&self) -> usize {
        self.components.len()
    }

    fn check_shape(&self, other: &Tensor) {
        assert!(
            self.dim == other.dim && self.valence == other.valence,
            "{}",
            TensorError::ShapeMismatch(self.dim, self.valence, other.dim, other.valence)
        );
    }

    /// Re-stores under a weaker symmetry (a subset of the current generators).
    pub fn with_symmetry(&self, symmetry: Symmetry) -> Tensor {
        if symmetry == self.symmetry {
            return self.clone();
        }
        Tensor::from_fn(self.dim, self.valence, symmetry, |idx| self.get(idx))
    }

    pub fn map<F>(&self, f: F) -> Tensor
    where
        F: Fn(&Expression) -> Expression + Sync,
    {
        let mut t = Tensor::zero(self.dim, self.valence, self.symmetry.clone());
        let values: Vec<(usize, Expression)> = self
            .components
            .par_iter()
            .filter_map(|(&k, v)| {
                let w = f(v);
                (!w.is_zero()).then_some((k, w))
            })
            .collect();
        t.components.extend(values);
        t
    }

    pub fn scale(&self, c: &Expression) -> Tensor {
        if c.is_zero() {
            return Tensor::zero(self.dim, self.valence, self.symmetry.clone());
        }
        if c.is_one() {
            return self.clone();
        }
        self.map(|v| v * c)
    }

    /// `self + c * other`, stored under the meet of both symmetries.
    pub fn add_scaled(&self, c: &Expression, other: &Tensor) -> Tensor {
        self.check_shape(other);
        if c.is_zero() || other.is_zero() {
            return self.clone();
        }
        let symmetry = self.symmetry.meet(&other.symmetry);
        if symmetry == self.symmetry && symmetry == other.symmetry {
            let mut components = self.components.clone();
            for (k, v) in &other.components {
                let term = v * c;
                match components.get_mut(k) {
                    Some(existing) => {
                        let s = &*existing + &term;
                        if s.is_zero() {
                            components.remove(k);
                        } else {
                            *existing = s;
                        }
                    }
                    None => {
                        components.insert(*k, term);
                    }
                }
            }
            return Tensor {
                components,
                ..self.clone()
            };
        }
        Tensor::from_fn(self.dim, self.valence, symmetry, |idx| {
            let a = self.get(idx);
            let b = other.get(idx);
            if b.is_zero() {
                a
            } else {
                &a + &(&b * c)
            }
        })
    }

    pub fn add(&self, other: &Tensor) -> Tensor {
        self.add_scaled(&Expression::one(), other)
    }

    pub fn sub(&self, other: &Tensor) -> Tensor {
        self.add_scaled(&Expression::integer(-1), other)
    }

    /// Componentwise equality, regardless of the stored symmetry.
    pub fn equals(&self, other: &Tensor) -> bool {
        self.dim == other.dim && self.valence == other.valence && self.sub(other).is_zero()
    }

    /// Dense (0,2) matrix view.
    pub fn to_matrix(&self) -> Vec<Vec<Expression>> {
        assert_eq!(self.valence, 2);
        (0..self.dim).map(|i| (0..self.dim).map(|j| self.get(&[i, j])).collect()).collect()
    }

    pub fn from_matrix(m: &[Vec<Expression>], symmetry: Symmetry) -> Result<Tensor, TensorError> {
        let n = m.len();
        let dense = m.iter().flat_map(|row| row.iter().cloned()).collect();
        Tensor::from_dense(n, 2, symmetry, dense)
    }

    pub fn is_symmetric_matrix(&self) -> bool {
        self.valence == 2 && (0..self.dim).all(|i| (i + 1..self.dim).all(|j| self.get(&[i, j]) == self.get(&[j, i])))
    }
}

impl PartialEq for Tensor {
    fn eq(&self, other: &Self) -> bool {
        self.equals(other)
    }
}

impl fmt::Debug for Tensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tensor(0,{}) dim {} [{}] {{", self.valence, self.dim, self.symmetry)?;
        for (idx, v) in self.nonzero() {
            let idx: Vec<String> = idx.iter().map(|i| (i + 1).to_string()).collect();
            write!(f, " {}: {v};", idx.join(""))?;
        }
        f.write_str(" }")
    }
}
