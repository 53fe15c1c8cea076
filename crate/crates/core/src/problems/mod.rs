//! Variational problem instances, trial hierarchies and test spaces.
//!
//! The bilinear form is stored as a matrix `A` with `a(v, z) = v^T M A z`,
//! so the Riesz representer of `a(., z)` is simply `A z`.

mod hadamard;
mod synthetic;

pub use hadamard::{flat_orthogonal, hadamard};
pub use synthetic::{
    example1, example1_prescription, example2, example2_prescription, random_prescription,
    sweep_seed, synth_prescribed, Prescription, SweepParams, SyntheticInstance,
};

use alloc::vec::Vec;
use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::spaces::{AmbientSpace, OrthonormalFrame};

/// How the linear functional `b` is specified.
#[derive(Debug, Clone)]
pub enum RightHandSide {
    /// `b(v) = a(z_true, v)`; the solution is known.
    Truth(DVector<f64>),
    /// `b(v) = <f, v>`
    Functional(DVector<f64>),
}

#[derive(Debug, Clone)]
pub struct ProblemInstance {
    space: AmbientSpace,
    operator: DMatrix<f64>,
    rhs: RightHandSide,
}

impl ProblemInstance {
    /// Problem whose right-hand side is generated by a known solution.
    pub fn synthetic(
        space: AmbientSpace,
        operator: DMatrix<f64>,
        truth: DVector<f64>,
    ) -> Result<Self> {
        Self::new(space, operator, RightHandSide::Truth(truth))
    }

    pub fn functional(
        space: AmbientSpace,
        operator: DMatrix<f64>,
        f: DVector<f64>,
    ) -> Result<Self> {
        Self::new(space, operator, RightHandSide::Functional(f))
    }

    pub fn new(space: AmbientSpace, operator: DMatrix<f64>, rhs: RightHandSide) -> Result<Self> {
        let dim = space.dim();
        if operator.nrows() != dim || operator.ncols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: operator.nrows().max(operator.ncols()),
            });
        }
        match &rhs {
            RightHandSide::Truth(v) | RightHandSide::Functional(v) => space.check(v)?,
        }
        Ok(Self {
            space,
            operator,
            rhs,
        })
    }

    pub fn space(&self) -> &AmbientSpace {
        &self.space
    }

    pub fn operator(&self) -> &DMatrix<f64> {
        &self.operator
    }

    pub fn rhs(&self) -> &RightHandSide {
        &self.rhs
    }

    /// The known solution, if any.
    pub fn truth(&self) -> Option<&DVector<f64>> {
        match &self.rhs {
            RightHandSide::Truth(z) => Some(z),
            RightHandSide::Functional(_) => None,
        }
    }

    /// `a(v, z) = v^T M A z`
    pub fn bilinear(&self, v: &DVector<f64>, z: &DVector<f64>) -> f64 {
        self.space.inner(v, &(&self.operator * z))
    }

    pub fn evaluate_b(&self, v: &DVector<f64>) -> f64 {
        match &self.rhs {
            RightHandSide::Truth(z) => self.bilinear(z, v),
            RightHandSide::Functional(f) => self.space.inner(f, v),
        }
    }

    /// Representers `r_j = A z_j` of `a(., z_j)`.
    pub fn riesz_representers(&self, tests: &TestSpace) -> Result<RieszFamily> {
        if tests.basis().space().dim() != self.space.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.space.dim(),
                found: tests.basis().space().dim(),
            });
        }
        Ok(RieszFamily {
            space: self.space.clone(),
            vectors: &self.operator * tests.basis().columns(),
        })
    }

    /// Right-hand side data `d_j = b(z_j)` against the test basis.
    pub fn test_data(&self, tests: &TestSpace) -> DVector<f64> {
        let basis = tests.basis();
        DVector::from_fn(basis.len(), |j, _| self.evaluate_b(&basis.column(j)))
    }
}

/// Nested trial spaces `V_k = span(first k columns)` with prior widths.
#[derive(Debug, Clone)]
pub struct SubspaceHierarchy {
    basis: OrthonormalFrame,
    widths: Vec<f64>,
    distances: Option<Vec<f64>>,
}

impl SubspaceHierarchy {
    /// `widths` (and `distances`, when given) hold `n + 1` entries for `V_0 .. V_n`.
    pub fn new(
        basis: OrthonormalFrame,
        widths: Vec<f64>,
        distances: Option<Vec<f64>>,
    ) -> Result<Self> {
        let levels = basis.len() + 1;
        if widths.len() != levels {
            return Err(Error::LengthMismatch {
                what: "widths",
                expected: levels,
                found: widths.len(),
            });
        }
        if widths.iter().any(|w| w.is_nan() || *w < 0.0) {
            return Err(Error::InfeasibleWidths("widths must be nonnegative"));
        }
        if let Some(tau) = &distances {
            validate_distances(tau, &widths)?;
        }
        Ok(Self {
            basis,
            widths,
            distances,
        })
    }

    pub fn n(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &OrthonormalFrame {
        &self.basis
    }

    pub fn widths(&self) -> &[f64] {
        &self.widths
    }

    pub fn distances(&self) -> Option<&[f64]> {
        self.distances.as_deref()
    }

    /// Frame of `V_k`.
    pub fn level(&self, k: usize) -> OrthonormalFrame {
        self.basis.prefix(k)
    }

    /// `dist(v, V_k)` for `k = 0..=n`.
    pub fn distances_of(&self, v: &DVector<f64>) -> Result<Vec<f64>> {
        self.basis.space().check(v)?;
        let coords = self.basis.coordinates(v);
        let inside = self.basis.synthesize(&coords);
        let outside = self.basis.space().norm(&(v - inside));
        let n = self.n();
        // dist(v, V_k)^2 = sum_{j > k} c_j^2 + |P_perp v|^2
        let mut out = alloc::vec![0.0; n + 1];
        let mut acc = outside * outside;
        out[n] = libm::sqrt(acc);
        for k in (0..n).rev() {
            acc += coords[k] * coords[k];
            out[k] = libm::sqrt(acc);
        }
        Ok(out)
    }
}

pub(crate) fn validate_distances(tau: &[f64], widths: &[f64]) -> Result<()> {
    if tau.len() != widths.len() {
        return Err(Error::LengthMismatch {
            what: "distances",
            expected: widths.len(),
            found: tau.len(),
        });
    }
    if tau.iter().any(|t| t.is_nan() || *t < 0.0) {
        return Err(Error::InvalidDistances("distances must be nonnegative"));
    }
    if tau.windows(2).any(|w| w[1] > w[0]) {
        return Err(Error::InvalidDistances("distances must be nonincreasing"));
    }
    if tau.iter().zip(widths).any(|(t, e)| t > e) {
        return Err(Error::InvalidDistances("distance exceeds width"));
    }
    Ok(())
}

/// Test space `Z_m` given by an orthonormal basis.
#[derive(Debug, Clone)]
pub struct TestSpace {
    basis: OrthonormalFrame,
}

impl TestSpace {
    /// Requires `m >= trial_dim`.
    pub fn new(basis: OrthonormalFrame, trial_dim: usize) -> Result<Self> {
        if basis.len() < trial_dim {
            return Err(Error::DimensionTooSmall("test space must have m >= n"));
        }
        Ok(Self { basis })
    }

    pub fn m(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &OrthonormalFrame {
        &self.basis
    }
}

/// Riesz representers `r_1 .. r_m`, stored as columns.
#[derive(Debug, Clone)]
pub struct RieszFamily {
    space: AmbientSpace,
    vectors: DMatrix<f64>,
}

impl RieszFamily {
    pub fn space(&self) -> &AmbientSpace {
        &self.space
    }

    pub fn vectors(&self) -> &DMatrix<f64> {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.vectors.ncols()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.ncols() == 0
    }

    pub fn vector(&self, j: usize) -> DVector<f64> {
        self.vectors.column(j).into_owned()
    }

    /// `[<r_i, r_j>]`
    pub fn self_gram(&self) -> DMatrix<f64> {
        self.space.cross_gram(&self.vectors, &self.vectors)
    }
}
