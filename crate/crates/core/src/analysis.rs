//! One instance end to end: both projectors, their errors and both bounds.

use crate::bounds::{ms_bound, BoundReport, TauMode};
use crate::error::{Error, Result};
use crate::problems::{ProblemInstance, SubspaceHierarchy, TestSpace};
use crate::solvers::{
    error_norm, solve_ms_system, solve_pg_system, MultiSliceSolution, PgSolution, ReducedSystem,
    SolverOptions,
};
use crate::spectral::{continuity_constant, deltas, gamma};

#[derive(Debug, Clone)]
pub struct Analysis {
    pub system: ReducedSystem,
    pub gamma: f64,
    pub continuity: f64,
    /// `None` when the square system is singular.
    pub pg: Option<PgSolution>,
    pub ms: MultiSliceSolution,
    pub report: BoundReport,
}

impl Analysis {
    pub fn n(&self) -> usize {
        self.system.n()
    }

    pub fn m(&self) -> usize {
        self.system.m()
    }

    pub fn ambient_dim(&self) -> usize {
        self.system.trial.space().dim()
    }

    pub fn sigma(&self) -> &[f64] {
        &self.system.decomp.sigma
    }
}

pub fn analyze(
    problem: &ProblemInstance,
    hierarchy: &SubspaceHierarchy,
    tests: &TestSpace,
    opts: &SolverOptions,
    mode: TauMode,
) -> Result<Analysis> {
    let system = ReducedSystem::assemble(problem, hierarchy.basis(), tests)?;
    let distances = mode.distances(hierarchy.distances(), hierarchy.widths())?;
    let gamma = gamma(&system.riesz, hierarchy.basis())?;
    let continuity = continuity_constant(&system.riesz);
    let intermediates = deltas(&system.decomp, hierarchy, distances)?.with_gamma(gamma);
    let mut report = ms_bound(&system.decomp, &intermediates, distances, continuity, mode)?;

    let pg = match solve_pg_system(&system) {
        Ok(pg) => Some(pg),
        Err(Error::SingularSystem { .. }) => None,
        Err(e) => return Err(e),
    };
    let ms = solve_ms_system(&system, hierarchy.widths(), opts)?;

    if problem.truth().is_some() {
        report.actual_ms_error = Some(error_norm(&ms.point, problem)?);
        if let Some(pg) = &pg {
            report.actual_pg_error = Some(error_norm(&pg.point, problem)?);
        }
    }

    Ok(Analysis {
        system,
        gamma,
        continuity,
        pg,
        ms,
        report,
    })
}
