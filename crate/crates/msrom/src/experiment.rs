//! Builds the instances a config asks for and turns each into a report row.

use msrom_core::analysis::analyze;
use msrom_core::problems::{random_prescription, sweep_seed, synth_prescribed, Prescription};
use rayon::prelude::*;

use crate::config::{ExperimentConfig, Plan};
use crate::report::Row;

#[derive(Debug, Clone)]
pub struct Outcome {
    pub rows: Vec<Row>,
}

impl Outcome {
    pub fn all_converged(&self) -> bool {
        self.rows.iter().all(|r| r.converged)
    }
}

fn analyze_prescription(
    config: &ExperimentConfig,
    prescription: &Prescription,
    seed: u64,
    tau_input: Option<f64>,
) -> msrom_core::Result<Row> {
    let inst = synth_prescribed(prescription)?;
    let a = analyze(
        &inst.problem,
        &inst.hierarchy,
        &inst.tests,
        &config.solver,
        config.tau_mode,
    )?;
    let r = &a.report;
    Ok(Row {
        mode: config.mode.label(),
        seed,
        n: a.n(),
        m: a.m(),
        ambient_dim: a.ambient_dim(),
        tau_input,
        sigma_1: a.system.decomp.sigma_max(),
        sigma_n: a.system.decomp.sigma_min(),
        gamma: a.gamma,
        ell: r.water_filling.ell,
        rho: r.water_filling.rho,
        sup_value: r.water_filling.sup_value,
        tau_n: r.tau_n,
        babuska_bound: r.babuska,
        ms_bound: r.ms_bound,
        actual_pg_error: r.actual_pg_error,
        actual_ms_error: r.actual_ms_error,
        ms_cost: a.ms.cost,
        ms_iterations: a.ms.iterations,
        converged: a.ms.converged,
    })
}

/// Rows in repetition order; sweeps run in parallel.
pub fn run_experiment(config: &ExperimentConfig) -> msrom_core::Result<Outcome> {
    let rows = match &config.plan {
        Plan::Single { prescription, tau } => {
            vec![analyze_prescription(
                config,
                prescription,
                config.seed,
                *tau,
            )?]
        }
        Plan::Sweep {
            params,
            repetitions,
        } => (0..*repetitions as u64)
            .into_par_iter()
            .map(|rep| {
                let seed = sweep_seed(config.seed, rep);
                analyze_prescription(config, &random_prescription(params, seed), seed, None)
            })
            .collect::<msrom_core::Result<Vec<_>>>()?,
    };
    Ok(Outcome { rows })
}
