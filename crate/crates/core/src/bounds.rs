//! A-priori error bounds for the two projectors.
//!
//! The multi-slice bound needs `sup { sum_j beta_j^2 : sum_j sigma_j^2 beta_j^2 <= 4 gamma^2 tau_n^2,
//! |beta_j| <= delta_j }`. In the variables `beta_j^2` this is a fractional
//! knapsack, so the optimum fills coordinates from the smallest singular value
//! upwards ([`water_filling`]). [`sup_oracle`] solves the same problem by
//! enumeration and shares no code with it.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::spectral::{BoundIntermediates, GramDecomposition};

/// Largest `n` accepted by [`sup_oracle`].
pub const ORACLE_MAX_N: usize = 6;

#[derive(Debug, Clone, PartialEq)]
pub struct WaterFillingSolution {
    /// 1-based index of the partially filled coordinate; `None` when the
    /// energy constraint is inactive.
    pub ell: Option<usize>,
    /// Fraction of `delta_ell^2` that is used.
    pub rho: Option<f64>,
    pub sup_value: f64,
    pub active: bool,
}

fn check_profile(delta: &[f64], sigma: &[f64], gamma: f64, tau_n: f64) -> Result<()> {
    if delta.len() != sigma.len() {
        return Err(Error::LengthMismatch {
            what: "delta",
            expected: sigma.len(),
            found: delta.len(),
        });
    }
    let bad = |v: f64| v.is_nan() || v < 0.0;
    if delta.iter().chain(sigma).any(|v| bad(*v)) || bad(gamma) || bad(tau_n) {
        return Err(Error::InvalidInput("bound inputs must be nonnegative"));
    }
    Ok(())
}

pub fn water_filling(
    delta: &[f64],
    sigma: &[f64],
    gamma: f64,
    tau_n: f64,
) -> Result<WaterFillingSolution> {
    check_profile(delta, sigma, gamma, tau_n)?;
    if sigma.windows(2).any(|w| w[1] > w[0]) {
        return Err(Error::InvalidInput("singular values must be nonincreasing"));
    }
    let n = delta.len();
    let budget = 4.0 * gamma * gamma * tau_n * tau_n;
    let weights: Vec<f64> = sigma
        .iter()
        .zip(delta)
        .map(|(s, d)| s * s * d * d)
        .collect();
    let total: f64 = weights.iter().sum();
    let everything: f64 = delta.iter().map(|d| d * d).sum();

    if total < budget || total == 0.0 {
        return Ok(WaterFillingSolution {
            ell: None,
            rho: None,
            sup_value: everything,
            active: false,
        });
    }

    // walk up from j = n until the tail weight reaches the budget
    let mut tail_weight = 0.0;
    let mut tail_value = 0.0;
    for j in (0..n).rev() {
        let reached = tail_weight + weights[j] >= budget;
        if reached && weights[j] > 0.0 {
            let rho = ((budget - tail_weight) / weights[j]).clamp(0.0, 1.0);
            return Ok(WaterFillingSolution {
                ell: Some(j + 1),
                rho: Some(rho),
                sup_value: tail_value + rho * delta[j] * delta[j],
                active: true,
            });
        }
        tail_weight += weights[j];
        tail_value += delta[j] * delta[j];
    }
    Err(Error::InvalidState(
        "no water-filling index despite an active budget",
    ))
}

/// Brute-force value of the sup problem: every subset of saturated
/// coordinates plus at most one partially filled coordinate.
pub fn sup_oracle(delta: &[f64], sigma: &[f64], gamma: f64, tau_n: f64) -> Result<f64> {
    check_profile(delta, sigma, gamma, tau_n)?;
    let n = delta.len();
    if n > ORACLE_MAX_N {
        return Err(Error::TooLarge {
            n,
            max: ORACLE_MAX_N,
        });
    }
    let budget = 4.0 * gamma * gamma * tau_n * tau_n;
    let mut best = 0.0_f64;
    for mask in 0u32..(1 << n) {
        let mut used = 0.0;
        let mut value = 0.0;
        for j in 0..n {
            if mask & (1 << j) != 0 {
                used += sigma[j] * sigma[j] * delta[j] * delta[j];
                value += delta[j] * delta[j];
            }
        }
        if used > budget {
            continue;
        }
        best = best.max(value);
        let left = budget - used;
        for p in (0..n).filter(|p| mask & (1 << p) == 0) {
            let cap = delta[p] * delta[p];
            let s2 = sigma[p] * sigma[p];
            let extra = if s2 == 0.0 { cap } else { cap.min(left / s2) };
            best = best.max(value + extra);
        }
    }
    Ok(best)
}

/// `(sigma_1 / sigma_n) dist`.
pub fn babuska_bound(decomp: &GramDecomposition, dist_n: f64) -> Result<f64> {
    babuska_scaled(decomp, decomp.sigma_max(), dist_n)
}

/// `(kappa / sigma_n) dist`, with `kappa` the continuity constant of the
/// bilinear form on the trial/test pair. For orthonormal representers
/// `kappa = 1`; in general `sigma_1 <= kappa`.
pub fn babuska_bound_with_continuity(
    decomp: &GramDecomposition,
    kappa: f64,
    dist_n: f64,
) -> Result<f64> {
    babuska_scaled(decomp, kappa, dist_n)
}

fn babuska_scaled(decomp: &GramDecomposition, numerator: f64, dist_n: f64) -> Result<f64> {
    if decomp.is_singular() {
        return Err(Error::SingularGram {
            sigma_n: decomp.sigma_min(),
        });
    }
    Ok(numerator / decomp.sigma_min() * dist_n)
}

/// Where the distances in `delta_j` come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TauMode {
    /// True distances `tau_k` are known.
    #[default]
    Known,
    /// `tau_k` replaced by the widths `eps_k`.
    Practitioner,
}

impl TauMode {
    pub fn label(self) -> &'static str {
        match self {
            TauMode::Known => "known",
            TauMode::Practitioner => "practitioner",
        }
    }

    /// Distances fed to the bound.
    pub fn distances<'a>(self, known: Option<&'a [f64]>, widths: &'a [f64]) -> Result<&'a [f64]> {
        match self {
            TauMode::Known => known.ok_or(Error::InvalidInput("known distances required")),
            TauMode::Practitioner => Ok(widths),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub mode: TauMode,
    /// `None` when the Gram matrix is singular.
    pub babuska: Option<f64>,
    pub ms_bound: f64,
    pub tau_n: f64,
    pub intermediates: BoundIntermediates,
    pub water_filling: WaterFillingSolution,
    pub actual_pg_error: Option<f64>,
    pub actual_ms_error: Option<f64>,
}

/// Multi-slice bound `sqrt(sup + tau_n^2)` and the Babuska bound.
///
/// `intermediates` must carry `gamma` and `delta` built from `distances`;
/// `kappa` is the continuity constant used in the Babuska numerator.
pub fn ms_bound(
    decomp: &GramDecomposition,
    intermediates: &BoundIntermediates,
    distances: &[f64],
    kappa: f64,
    mode: TauMode,
) -> Result<BoundReport> {
    let n = decomp.n();
    if distances.len() != n + 1 {
        return Err(Error::LengthMismatch {
            what: "distances",
            expected: n + 1,
            found: distances.len(),
        });
    }
    let tau_n = distances[n];
    let water_filling = water_filling(
        &intermediates.delta,
        &decomp.sigma,
        intermediates.gamma,
        tau_n,
    )?;
    let ms_bound = libm::sqrt(water_filling.sup_value + tau_n * tau_n);
    let babuska = babuska_bound_with_continuity(decomp, kappa, tau_n).ok();
    Ok(BoundReport {
        mode,
        babuska,
        ms_bound,
        tau_n,
        intermediates: intermediates.clone(),
        water_filling,
        actual_pg_error: None,
        actual_ms_error: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::decompose;
    use alloc::vec;
    use nalgebra::DMatrix;

    fn diag(values: &[f64]) -> GramDecomposition {
        decompose(&DMatrix::from_diagonal(
            &nalgebra::DVector::from_column_slice(values),
        ))
        .unwrap()
    }

    #[test]
    fn babuska_unit_conditioning() {
        assert!((babuska_bound(&diag(&[1.0, 1.0, 1.0]), 0.3).unwrap() - 0.3).abs() < 1e-16);
        assert_eq!(babuska_bound(&diag(&[2.0, 0.5]), 0.1).unwrap(), 0.4);
        assert_eq!(
            babuska_bound_with_continuity(&diag(&[0.8, 0.5]), 1.0, 0.1).unwrap(),
            0.2
        );
        assert!(matches!(
            babuska_bound(&diag(&[1.0, 0.0]), 0.1),
            Err(Error::SingularGram { .. })
        ));
    }

    #[test]
    fn inactive_sums_everything() {
        let w = water_filling(&[1.0, 2.0], &[0.0, 0.0], 1.0, 0.5).unwrap();
        assert!(!w.active);
        assert_eq!(w.sup_value, 5.0);
        assert_eq!(w.ell, None);
    }

    #[test]
    fn oracle_worked_example() {
        // weights sigma^2 delta^2 = (1, 0.25), budget 0.25: fill j = 2, nothing left
        let delta = [1.0, 1.0];
        let sigma = [1.0, 0.5];
        let tau_n = 0.25;
        let w = water_filling(&delta, &sigma, 1.0, tau_n).unwrap();
        assert_eq!(w.ell, Some(2));
        assert_eq!(w.rho, Some(1.0));
        assert_eq!(w.sup_value, 1.0);
        assert_eq!(sup_oracle(&delta, &sigma, 1.0, tau_n).unwrap(), 1.0);
    }

    #[test]
    fn partial_fill() {
        // weights (4, 1, 0.25), budget 2.25 -> fill j = 3, 2 and 1/4 of j = 1
        let delta = [2.0, 1.0, 1.0];
        let sigma = [1.0, 1.0, 0.5];
        let w = water_filling(&delta, &sigma, 1.0, 0.75).unwrap();
        assert_eq!(w.ell, Some(1));
        assert!((w.rho.unwrap() - 0.25).abs() < 1e-15);
        assert!((w.sup_value - 3.0).abs() < 1e-15);
        assert!((sup_oracle(&delta, &sigma, 1.0, 0.75).unwrap() - 3.0).abs() < 1e-15);
    }

    #[test]
    fn single_last_term_saturates() {
        let w = water_filling(&[1.0, 1.0], &[1.0, 1.0], 1.0, 0.25).unwrap();
        assert_eq!(w.ell, Some(2));
        assert_eq!(w.rho, Some(0.25));
        assert_eq!(w.sup_value, 0.25);
    }

    #[test]
    fn zero_budget_counts_free_coordinates() {
        let w = water_filling(&[1.0, 2.0, 3.0], &[1.0, 0.5, 0.0], 0.0, 0.3).unwrap();
        assert!(w.active);
        assert_eq!(w.ell, Some(2));
        assert_eq!(w.rho, Some(0.0));
        assert_eq!(w.sup_value, 9.0);
        assert_eq!(
            sup_oracle(&[1.0, 2.0, 3.0], &[1.0, 0.5, 0.0], 0.0, 0.3).unwrap(),
            9.0
        );

        let w = water_filling(&[1.0, 2.0], &[1.0, 0.5], 0.0, 0.3).unwrap();
        assert_eq!(w.ell, Some(2));
        assert_eq!(w.sup_value, 0.0);
    }

    #[test]
    fn boundary_is_continuous() {
        let delta = [0.7, 0.4, 0.9];
        let sigma = [0.9, 0.6, 0.3];
        let total: f64 = sigma
            .iter()
            .zip(&delta)
            .map(|(s, d): (&f64, &f64)| s * s * d * d)
            .sum();
        let tau_at = |scale: f64| libm::sqrt(total * scale) / 2.0;
        let below = water_filling(&delta, &sigma, 1.0, tau_at(1.0 - 1e-9)).unwrap();
        let above = water_filling(&delta, &sigma, 1.0, tau_at(1.0 + 1e-9)).unwrap();
        assert!(below.active && !above.active);
        assert!((below.sup_value - above.sup_value).abs() <= 1e-6 * above.sup_value);
    }

    #[test]
    fn rejects_bad_profiles() {
        assert!(water_filling(&[1.0, 1.0], &[0.5, 1.0], 1.0, 1.0).is_err());
        assert!(water_filling(&[-1.0], &[0.5], 1.0, 1.0).is_err());
        assert!(water_filling(&[1.0], &[0.5, 0.2], 1.0, 1.0).is_err());
        assert_eq!(
            sup_oracle(&[0.0; 7], &[0.0; 7], 1.0, 1.0),
            Err(Error::TooLarge {
                n: 7,
                max: ORACLE_MAX_N
            })
        );
    }

    #[test]
    fn report_bound_squares_to_sup_plus_tail() {
        let decomp = diag(&[1.0, 0.5, 0.1]);
        let inter = BoundIntermediates {
            gamma: 0.8,
            delta: vec![0.5, 0.4, 0.3],
            eta: vec![0.25, 0.2, 0.15],
            eta_hat: vec![0.25, 0.2, 0.15],
        };
        let r = ms_bound(&decomp, &inter, &[0.5, 0.3, 0.2, 0.05], 1.0, TauMode::Known).unwrap();
        let lhs = r.ms_bound * r.ms_bound;
        let rhs = r.water_filling.sup_value + 0.05 * 0.05;
        assert!((lhs - rhs).abs() <= 1e-12 * rhs);
        assert_eq!(r.babuska, Some(0.5));
    }

    #[test]
    fn report_zero_everything() {
        let decomp = diag(&[1.0, 0.5]);
        let inter = BoundIntermediates {
            gamma: 0.5,
            delta: vec![0.0, 0.0],
            eta: vec![0.0, 0.0],
            eta_hat: vec![0.0, 0.0],
        };
        let r = ms_bound(&decomp, &inter, &[0.0, 0.0, 0.0], 1.0, TauMode::Known).unwrap();
        assert_eq!(r.ms_bound, 0.0);
    }
}
