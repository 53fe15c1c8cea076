//! Slow reference solvers for small problems.
//!
//! `minimize_over_slices` minimizes `x^T H x / 2 + g^T x` over
//! `{x : |x_{k+1..n}| <= eps_k}` by a grid search, a log-barrier Newton
//! polish and a final Newton solve of the KKT equations on the constraints
//! the barrier found active. None of it shares code with the production
//! projection or the production solver.

use alloc::vec::Vec;
use nalgebra::{DMatrix, DVector};

use crate::solvers::ReducedSystem;

const ACTIVE_SLACK: f64 = 1e-6;

fn quadratic(h: &DMatrix<f64>, g: &DVector<f64>, x: &DVector<f64>) -> f64 {
    0.5 * x.dot(&(h * x)) + g.dot(x)
}

fn tail_sq(x: &DVector<f64>, k: usize) -> f64 {
    x.rows(k, x.len() - k).norm_squared()
}

/// `(k, eps_k)` for the constraints that can bind inside the first `dim` coordinates.
fn constraints(widths: &[f64], dim: usize) -> Vec<(usize, f64)> {
    (0..dim)
        .filter(|&k| widths[k].is_finite())
        .map(|k| (k, widths[k]))
        .collect()
}

fn strictly_feasible(x: &DVector<f64>, cons: &[(usize, f64)]) -> bool {
    cons.iter().all(|&(k, e)| tail_sq(x, k) < e * e)
}

fn barrier_value(
    x: &DVector<f64>,
    cons: &[(usize, f64)],
    t: f64,
    h: &DMatrix<f64>,
    g: &DVector<f64>,
) -> f64 {
    let mut v = t * quadratic(h, g, x);
    for &(k, e) in cons {
        v -= libm::log(1.0 - tail_sq(x, k) / (e * e));
    }
    v
}

/// Minimizer of `x^T H x / 2 + g^T x` over the slices; `H` must be positive semidefinite.
pub fn minimize_over_slices(
    h: &DMatrix<f64>,
    g: &DVector<f64>,
    widths: &[f64],
    grid_points: usize,
) -> DVector<f64> {
    let n = g.len();
    assert_eq!(widths.len(), n + 1);
    // coordinates after the first zero width are pinned to zero
    let dim = (0..n).find(|&k| widths[k] == 0.0).unwrap_or(n);
    let mut out = DVector::zeros(n);
    if dim == 0 {
        return out;
    }
    let hs = h.view((0, 0), (dim, dim)).into_owned();
    let gs = g.rows(0, dim).into_owned();
    let cons = constraints(widths, dim);

    let fallback = 1e3 * (1.0 + gs.norm());
    let radius: Vec<f64> = (0..dim)
        .map(|j| {
            let r = widths[..=j].iter().copied().fold(f64::INFINITY, f64::min);
            if r.is_finite() {
                r
            } else {
                fallback
            }
        })
        .collect();

    let x = grid_search(&hs, &gs, &cons, &radius, grid_points.max(2));
    let (x, mu) = barrier_polish(&hs, &gs, &cons, &radius, x);
    let refined = kkt_refine(&hs, &gs, &cons, &x, &mu);
    let best = match refined {
        Some(r) if quadratic(&hs, &gs, &r) <= quadratic(&hs, &gs, &x) => r,
        _ => x,
    };
    out.rows_mut(0, dim).copy_from(&best);
    out
}

fn grid_search(
    h: &DMatrix<f64>,
    g: &DVector<f64>,
    cons: &[(usize, f64)],
    radius: &[f64],
    points: usize,
) -> DVector<f64> {
    let dim = radius.len();
    let mut idx = alloc::vec![0usize; dim];
    let mut x = DVector::zeros(dim);
    let mut best = DVector::zeros(dim);
    let mut best_value = 0.0;
    loop {
        for j in 0..dim {
            x[j] = radius[j] * (2.0 * idx[j] as f64 / (points - 1) as f64 - 1.0);
        }
        if cons.iter().all(|&(k, e)| tail_sq(&x, k) <= e * e) {
            let v = quadratic(h, g, &x);
            if v < best_value {
                best_value = v;
                best.copy_from(&x);
            }
        }
        let mut j = 0;
        while j < dim {
            idx[j] += 1;
            if idx[j] < points {
                break;
            }
            idx[j] = 0;
            j += 1;
        }
        if j == dim {
            break;
        }
    }
    best
}

/// Returns the polished point and multiplier estimates for every constraint.
fn barrier_polish(
    h: &DMatrix<f64>,
    g: &DVector<f64>,
    cons: &[(usize, f64)],
    radius: &[f64],
    start: DVector<f64>,
) -> (DVector<f64>, Vec<f64>) {
    let dim = start.len();
    let r = radius.iter().copied().fold(0.0, f64::max);
    let scale = (h.amax() * r * r + g.amax() * r).max(f64::MIN_POSITIVE);
    let mut x = start * (1.0 - 1e-3);
    let mut t = 1.0 / scale;

    for _ in 0..40 {
        for _ in 0..100 {
            let mut grad = (h * &x + g) * t;
            let mut hess = h * t;
            for &(k, e) in cons {
                let slack = e * e - tail_sq(&x, k);
                let mut tail = DVector::zeros(dim);
                tail.rows_mut(k, dim - k).copy_from(&x.rows(k, dim - k));
                grad += &tail * (2.0 / slack);
                hess += &tail * tail.transpose() * (4.0 / (slack * slack));
                for j in k..dim {
                    hess[(j, j)] += 2.0 / slack;
                }
            }
            let Some(step) = hess.clone().cholesky().map(|c| c.solve(&(-&grad))) else {
                break;
            };
            let decrement = -grad.dot(&step);
            if decrement <= 1e-14 {
                break;
            }
            let current = barrier_value(&x, cons, t, h, g);
            let mut alpha = 1.0;
            let mut moved = false;
            while alpha > 1e-12 {
                let trial = &x + &step * alpha;
                if strictly_feasible(&trial, cons)
                    && barrier_value(&trial, cons, t, h, g) <= current - 0.25 * alpha * decrement
                {
                    x = trial;
                    moved = true;
                    break;
                }
                alpha *= 0.5;
            }
            if !moved {
                break;
            }
        }
        if (cons.len() as f64) / t <= 1e-13 * scale {
            break;
        }
        t *= 8.0;
    }

    let mu = cons
        .iter()
        .map(|&(k, e)| 1.0 / (t * (e * e - tail_sq(&x, k))))
        .collect();
    (x, mu)
}

/// Newton on `H x + g + 2 sum_k mu_k D_k x = 0`, `|D_k x|^2 = eps_k^2` over
/// the nearly active constraints.
fn kkt_refine(
    h: &DMatrix<f64>,
    g: &DVector<f64>,
    cons: &[(usize, f64)],
    x0: &DVector<f64>,
    mu0: &[f64],
) -> Option<DVector<f64>> {
    let dim = x0.len();
    let active: Vec<usize> = (0..cons.len())
        .filter(|&i| {
            let (k, e) = cons[i];
            1.0 - tail_sq(x0, k) / (e * e) < ACTIVE_SLACK
        })
        .collect();
    let size = dim + active.len();
    let mut x = x0.clone();
    let mut mu: Vec<f64> = active.iter().map(|&i| mu0[i]).collect();

    for _ in 0..60 {
        let mut jac = DMatrix::<f64>::zeros(size, size);
        let mut rhs = DVector::<f64>::zeros(size);
        let stationarity = h * &x + g;
        jac.view_mut((0, 0), (dim, dim)).copy_from(h);
        rhs.rows_mut(0, dim).copy_from(&stationarity);
        for (a, &i) in active.iter().enumerate() {
            let (k, e) = cons[i];
            for j in k..dim {
                jac[(j, j)] += 2.0 * mu[a];
                rhs[j] += 2.0 * mu[a] * x[j];
                jac[(j, dim + a)] = 2.0 * x[j];
                jac[(dim + a, j)] = 2.0 * x[j];
            }
            rhs[dim + a] = tail_sq(&x, k) - e * e;
        }
        let step = jac.lu().solve(&(-&rhs))?;
        x += step.rows(0, dim);
        for a in 0..active.len() {
            mu[a] += step[dim + a];
        }
        if step.amax() <= 1e-16 * (1.0 + x.amax()) {
            break;
        }
    }

    let feasible = cons
        .iter()
        .all(|&(k, e)| tail_sq(&x, k) <= e * e * (1.0 + 1e-12));
    let dual_ok = mu.iter().all(|m| *m >= -1e-12);
    (feasible && dual_ok && x.iter().all(|v| v.is_finite())).then_some(x)
}

/// Euclidean projection of `c` onto the slices.
pub fn brute_force_projection(c: &DVector<f64>, widths: &[f64]) -> DVector<f64> {
    let n = c.len();
    minimize_over_slices(&DMatrix::identity(n, n), &(-c), widths, 41)
}

/// Coefficients minimizing `|G c - d|^2` over the slices, with their cost.
pub fn brute_force_ms(system: &ReducedSystem, widths: &[f64]) -> (DVector<f64>, f64) {
    let gram = system.gram();
    let h = gram.tr_mul(gram) * 2.0;
    let g = gram.tr_mul(&system.data) * -2.0;
    let c = minimize_over_slices(&h, &g, widths, 15);
    let cost = system.cost(&c);
    (c, cost)
}
