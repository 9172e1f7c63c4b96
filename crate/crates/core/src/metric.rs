//! Nondegenerate metrics with a verified inverse.

use symexpr::Expression;

use crate::chart::Chart;
use crate::linalg::{determinant, identity, inverse, mul, Matrix};
use crate::parse::MetricSpec;
use crate::tensor::{Symmetry, Tensor};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum MetricError {
    #[error("degenerate metric: the determinant vanishes identically")]
    Degenerate,
    #[error("metric matrix is not symmetric")]
    NotSymmetric,
    #[error("metric matrix has {rows} rows for a {dim}-dimensional chart")]
    WrongSize { rows: usize, dim: usize },
    #[error("computed inverse failed the check g * g^-1 = I")]
    InverseCheck,
}

#[derive(Clone, Debug)]
pub struct Metric {
    name: String,
    chart: Chart,
    tensor: Tensor,
    matrix: Matrix,
    inverse: Matrix,
    inverse_tensor: Tensor,
    determinant: Expression,
}

impl Metric {
    pub fn new(name: &str, chart: Chart, matrix: Matrix) -> Result<Self, MetricError> {
        let n = chart.dim();
        if matrix.len() != n || matrix.iter().any(|row| row.len() != n) {
            return Err(MetricError::WrongSize { rows: matrix.len(), dim: n });
        }
        let tensor = Tensor::from_matrix(&matrix, Symmetry::symmetric_pair()).map_err(|_| MetricError::NotSymmetric)?;
        let det = determinant(&matrix);
        if det.is_zero() {
            return Err(MetricError::Degenerate);
        }
        let inv = inverse(&matrix).ok_or(MetricError::Degenerate)?;
        if mul(&matrix, &inv) != identity(n) {
            return Err(MetricError::InverseCheck);
        }
        let inverse_tensor = Tensor::from_matrix(&inv, Symmetry::symmetric_pair()).map_err(|_| MetricError::InverseCheck)?;
        Ok(Metric {
            name: name.to_string(),
            chart,
            tensor,
            matrix,
            inverse: inv,
            inverse_tensor,
            determinant: det,
        })
    }

    pub fn from_spec(spec: MetricSpec) -> Result<Self, MetricError> {
        Metric::new(&spec.name, spec.chart, spec.components)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn dim(&self) -> usize {
        self.chart.dim()
    }

    pub fn tensor(&self) -> &Tensor {
        &self.tensor
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn inverse(&self) -> &Matrix {
        &self.inverse
    }

    /// `g^{ij}` stored as a symmetric two-index table.
    pub fn inverse_tensor(&self) -> &Tensor {
        &self.inverse_tensor
    }

    pub fn determinant(&self) -> &Expression {
        &self.determinant
    }
}
