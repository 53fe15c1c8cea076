//! Finite-dimensional Hilbert-space primitives.
//!
//! Vectors live in `R^N` with the inner product `<u, v> = u^T M v` for a
//! symmetric positive-definite metric `M` (the identity unless configured).
//! Frames are matrices whose columns are orthonormal in that inner product.

use alloc::sync::Arc;
use alloc::vec::Vec;
use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Relative pivot threshold below which a vector counts as linearly dependent.
pub const RANK_TOLERANCE: f64 = 1e-10;

const SYMMETRY_TOLERANCE: f64 = 1e-12;

/// `R^N` equipped with an SPD metric.
///
/// Cloning is cheap: the metric is shared.
#[derive(Debug, Clone)]
pub struct AmbientSpace {
    dim: usize,
    metric: Option<Arc<DMatrix<f64>>>,
}

impl AmbientSpace {
    pub fn euclidean(dim: usize) -> Self {
        assert!(dim > 0, "ambient dimension must be positive");
        Self { dim, metric: None }
    }

    /// Space with a general metric; rejects non-symmetric or indefinite input.
    pub fn with_metric(metric: DMatrix<f64>) -> Result<Self> {
        let dim = metric.nrows();
        if dim == 0 || metric.ncols() != dim {
            return Err(Error::InvalidMetric(
                "metric must be a non-empty square matrix",
            ));
        }
        let scale = metric.amax();
        for i in 0..dim {
            for j in (i + 1)..dim {
                if (metric[(i, j)] - metric[(j, i)]).abs() > SYMMETRY_TOLERANCE * scale {
                    return Err(Error::InvalidMetric("metric is not symmetric"));
                }
            }
        }
        if metric.clone().cholesky().is_none() {
            return Err(Error::InvalidMetric("metric is not positive definite"));
        }
        Ok(Self {
            dim,
            metric: Some(Arc::new(metric)),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_euclidean(&self) -> bool {
        self.metric.is_none()
    }

    /// The metric as a dense matrix.
    pub fn metric(&self) -> DMatrix<f64> {
        match &self.metric {
            Some(m) => (**m).clone(),
            None => DMatrix::identity(self.dim, self.dim),
        }
    }

    /// `M v`
    pub fn lower(&self, v: &DVector<f64>) -> DVector<f64> {
        match &self.metric {
            Some(m) => &**m * v,
            None => v.clone(),
        }
    }

    /// `M A` column by column.
    pub fn lower_matrix(&self, a: &DMatrix<f64>) -> DMatrix<f64> {
        match &self.metric {
            Some(m) => &**m * a,
            None => a.clone(),
        }
    }

    pub fn inner(&self, u: &DVector<f64>, v: &DVector<f64>) -> f64 {
        match &self.metric {
            Some(m) => u.dot(&(&**m * v)),
            None => u.dot(v),
        }
    }

    pub fn norm(&self, v: &DVector<f64>) -> f64 {
        libm::sqrt(self.inner(v, v).max(0.0))
    }

    /// Matrix of inner products `[<a_i, b_j>]` between the columns of `a` and `b`.
    pub fn cross_gram(&self, a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
        a.transpose() * self.lower_matrix(b)
    }

    pub fn check(&self, v: &DVector<f64>) -> Result<()> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: v.len(),
            });
        }
        Ok(())
    }
}

/// Orthogonal projection of a vector onto a frame's span.
#[derive(Debug, Clone)]
pub struct Projection {
    pub inside: DVector<f64>,
    pub residual_norm: f64,
}

/// Ordered orthonormal columns in an [`AmbientSpace`].
#[derive(Debug, Clone)]
pub struct OrthonormalFrame {
    space: AmbientSpace,
    columns: DMatrix<f64>,
}

impl OrthonormalFrame {
    pub fn empty(space: &AmbientSpace) -> Self {
        Self {
            space: space.clone(),
            columns: DMatrix::zeros(space.dim(), 0),
        }
    }

    /// Wraps columns that are already orthonormal, verifying the invariant to `tol`.
    pub fn from_orthonormal(space: &AmbientSpace, columns: DMatrix<f64>, tol: f64) -> Result<Self> {
        if columns.nrows() != space.dim() {
            return Err(Error::DimensionMismatch {
                expected: space.dim(),
                found: columns.nrows(),
            });
        }
        let frame = Self {
            space: space.clone(),
            columns,
        };
        if frame.orthonormality_defect() > tol {
            return Err(Error::InvalidInput("columns are not orthonormal"));
        }
        Ok(frame)
    }

    pub(crate) fn from_columns_unchecked(space: &AmbientSpace, columns: DMatrix<f64>) -> Self {
        debug_assert_eq!(columns.nrows(), space.dim());
        Self {
            space: space.clone(),
            columns,
        }
    }

    pub fn space(&self) -> &AmbientSpace {
        &self.space
    }

    pub fn len(&self) -> usize {
        self.columns.ncols()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.ncols() == 0
    }

    pub fn columns(&self) -> &DMatrix<f64> {
        &self.columns
    }

    pub fn column(&self, j: usize) -> DVector<f64> {
        self.columns.column(j).into_owned()
    }

    /// Frame spanned by the first `k` columns.
    pub fn prefix(&self, k: usize) -> Self {
        assert!(k <= self.len(), "prefix longer than frame");
        Self {
            space: self.space.clone(),
            columns: self.columns.columns(0, k).into_owned(),
        }
    }

    /// Columns of `self` followed by columns of `other`.
    pub fn concat(&self, other: &Self) -> Self {
        let mut columns = DMatrix::zeros(self.space.dim(), self.len() + other.len());
        columns.columns_mut(0, self.len()).copy_from(&self.columns);
        columns
            .columns_mut(self.len(), other.len())
            .copy_from(&other.columns);
        Self {
            space: self.space.clone(),
            columns,
        }
    }

    /// Coefficients `<c_j, v>`.
    pub fn coordinates(&self, v: &DVector<f64>) -> DVector<f64> {
        self.columns.tr_mul(&self.space.lower(v))
    }

    /// `sum_j coeffs_j c_j`
    pub fn synthesize(&self, coeffs: &DVector<f64>) -> DVector<f64> {
        &self.columns * coeffs
    }

    pub fn project(&self, v: &DVector<f64>) -> Result<Projection> {
        self.space.check(v)?;
        let inside = self.synthesize(&self.coordinates(v));
        let residual_norm = self.space.norm(&(v - &inside));
        Ok(Projection {
            inside,
            residual_norm,
        })
    }

    /// Distance from `v` to the span.
    pub fn distance(&self, v: &DVector<f64>) -> Result<f64> {
        Ok(self.project(v)?.residual_norm)
    }

    /// Dense matrix of the orthogonal projector, `C C^T M`.
    pub fn projector(&self) -> DMatrix<f64> {
        &self.columns * self.space.lower_matrix(&self.columns).transpose()
    }

    /// `max |F^T M F - I|`
    pub fn orthonormality_defect(&self) -> f64 {
        let gram = self.space.cross_gram(&self.columns, &self.columns);
        crate::linalg::max_abs_diff(&gram, &DMatrix::identity(self.len(), self.len()))
    }

    /// Orthonormal basis of the metric-orthogonal complement.
    ///
    /// Returns an empty frame when the frame already spans the whole space.
    /// Candidates are the coordinate axes, picked greedily by largest
    /// remaining norm so the choice is deterministic and well conditioned.
    pub fn complement(&self) -> Self {
        let dim = self.space.dim();
        let needed = dim - self.len();
        let mut out = Self::empty(&self.space);
        if needed == 0 {
            return out;
        }

        // (M c)_i = <c, e_i>, so the squared norm of e_i minus its projection
        // onto everything chosen so far is M_ii - sum_c (M c)_i^2.
        let metric_diag: Vec<f64> = match &self.space.metric {
            Some(m) => (0..dim).map(|i| m[(i, i)]).collect(),
            None => alloc::vec![1.0; dim],
        };
        let lowered = self.space.lower_matrix(&self.columns);
        let mut residual_sq: Vec<f64> = (0..dim)
            .map(|i| metric_diag[i] - lowered.row(i).norm_squared())
            .collect();
        let mut taken = alloc::vec![false; dim];
        let mut chosen = DMatrix::<f64>::zeros(dim, needed);

        for slot in 0..needed {
            let mut pivot = usize::MAX;
            let mut best = f64::NEG_INFINITY;
            for i in 0..dim {
                if !taken[i] && residual_sq[i] > best {
                    best = residual_sq[i];
                    pivot = i;
                }
            }
            taken[pivot] = true;

            let mut v = DVector::<f64>::zeros(dim);
            v[pivot] = 1.0;
            for _ in 0..2 {
                let lv = self.space.lower(&v);
                let along_frame = self.columns.tr_mul(&lv);
                v -= &self.columns * along_frame;
                let lv = self.space.lower(&v);
                let along_chosen = chosen.columns(0, slot).tr_mul(&lv);
                v -= chosen.columns(0, slot) * along_chosen;
            }
            let norm = self.space.norm(&v);
            v /= norm;
            let lv = self.space.lower(&v);
            for i in 0..dim {
                residual_sq[i] -= lv[i] * lv[i];
            }
            chosen.set_column(slot, &v);
        }

        out.columns = chosen;
        out
    }
}

/// Modified Gram-Schmidt with one re-orthogonalization pass, in input order.
pub fn orthonormalize(vectors: &[DVector<f64>], space: &AmbientSpace) -> Result<OrthonormalFrame> {
    for v in vectors {
        space.check(v)?;
    }
    let largest = vectors
        .iter()
        .map(|v| space.norm(v))
        .fold(0.0_f64, f64::max);
    let dim = space.dim();
    let mut columns = DMatrix::<f64>::zeros(dim, vectors.len());
    let mut lowered = DMatrix::<f64>::zeros(dim, vectors.len());

    for (k, v) in vectors.iter().enumerate() {
        let mut w = v.clone();
        for _ in 0..2 {
            for j in 0..k {
                let coeff = lowered.column(j).dot(&w);
                w.axpy(-coeff, &columns.column(j), 1.0);
            }
        }
        let norm = space.norm(&w);
        if norm.is_nan() || norm <= RANK_TOLERANCE * largest || norm == 0.0 {
            return Err(Error::RankDeficient {
                index: k,
                pivot_norm: norm,
            });
        }
        w /= norm;
        lowered.set_column(k, &space.lower(&w));
        columns.set_column(k, &w);
    }

    Ok(OrthonormalFrame::from_columns_unchecked(space, columns))
}
