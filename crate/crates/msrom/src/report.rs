//! CSV rows, one per instance.

use std::fmt::Write as _;

pub const COLUMNS: [&str; 20] = [
    "mode",
    "seed",
    "n",
    "m",
    "N",
    "tau_input",
    "sigma_1",
    "sigma_n",
    "gamma",
    "ell",
    "rho",
    "sup_value",
    "tau_n",
    "babuska_bound",
    "ms_bound",
    "actual_pg_error",
    "actual_ms_error",
    "ms_cost",
    "ms_iterations",
    "converged",
];

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub mode: &'static str,
    pub seed: u64,
    pub n: usize,
    pub m: usize,
    pub ambient_dim: usize,
    pub tau_input: Option<f64>,
    pub sigma_1: f64,
    pub sigma_n: f64,
    pub gamma: f64,
    pub ell: Option<usize>,
    pub rho: Option<f64>,
    pub sup_value: f64,
    pub tau_n: f64,
    pub babuska_bound: Option<f64>,
    pub ms_bound: f64,
    pub actual_pg_error: Option<f64>,
    pub actual_ms_error: Option<f64>,
    pub ms_cost: f64,
    pub ms_iterations: usize,
    pub converged: bool,
}

/// Shortest decimal that reads back to the same `f64`.
fn float(x: f64) -> String {
    format!("{x:?}")
}

fn optional(x: Option<f64>) -> String {
    x.map(float).unwrap_or_default()
}

impl Row {
    pub fn fields(&self) -> Vec<String> {
        vec![
            self.mode.to_string(),
            self.seed.to_string(),
            self.n.to_string(),
            self.m.to_string(),
            self.ambient_dim.to_string(),
            optional(self.tau_input),
            float(self.sigma_1),
            float(self.sigma_n),
            float(self.gamma),
            self.ell
                .map_or_else(|| "inactive".to_string(), |l| l.to_string()),
            optional(self.rho),
            float(self.sup_value),
            float(self.tau_n),
            self.babuska_bound
                .map_or_else(|| "undefined".to_string(), float),
            float(self.ms_bound),
            optional(self.actual_pg_error),
            optional(self.actual_ms_error),
            float(self.ms_cost),
            self.ms_iterations.to_string(),
            self.converged.to_string(),
        ]
    }
}

pub fn render(rows: &[Row]) -> String {
    let mut out = COLUMNS.join(",");
    out.push('\n');
    for row in rows {
        let _ = writeln!(out, "{}", row.fields().join(","));
    }
    out
}
