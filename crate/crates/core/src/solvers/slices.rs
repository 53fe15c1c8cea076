//! Projection onto the intersection of tail-norm cylinders
//! `{c : |c_{k+1..n}| <= eps_k}`, `k = 0..n`.

use alloc::vec::Vec;
use nalgebra::DVector;

/// `|c_{k+1..n}|` for `k = 0..=n`.
pub fn tail_norms(c: &DVector<f64>) -> Vec<f64> {
    let n = c.len();
    let mut out = alloc::vec![0.0; n + 1];
    let mut acc = 0.0;
    for k in (0..n).rev() {
        acc += c[k] * c[k];
        out[k] = libm::sqrt(acc);
    }
    out
}

/// Largest `|c_{k+1..n}| - eps_k` (zero or negative when feasible).
pub fn slice_violation(c: &DVector<f64>, widths: &[f64]) -> f64 {
    tail_norms(c)
        .iter()
        .zip(widths)
        .map(|(t, e)| t - e)
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Rescales the tail after index `k` onto the ball of radius `radius`.
fn project_cylinder(c: &mut DVector<f64>, k: usize, radius: f64) {
    let n = c.len();
    let tail = libm::sqrt(c.rows(k, n - k).norm_squared());
    if tail > radius {
        let scale = if tail > 0.0 { radius / tail } else { 0.0 };
        c.rows_mut(k, n - k).scale_mut(scale);
    }
}

fn feasible(c: &DVector<f64>, widths: &[f64]) -> bool {
    tail_norms(c).iter().zip(widths).all(|(t, e)| t <= e)
}

/// Euclidean projection onto the slices with the default Dykstra settings.
pub fn project_slices(c: &DVector<f64>, widths: &[f64]) -> DVector<f64> {
    let defaults = super::SolverOptions::default();
    project_slices_with(
        c,
        widths,
        defaults.dykstra_iterations,
        defaults.dykstra_tolerance,
    )
}

/// Dykstra's alternating projections over the `n` nontrivial cylinders,
/// followed by one sweep from the innermost cylinder outwards so that the
/// result is feasible even when the round budget runs out.
///
/// `widths` has `n + 1` entries; the last cylinder is the whole space.
pub fn project_slices_with(
    c: &DVector<f64>,
    widths: &[f64],
    rounds: usize,
    tolerance: f64,
) -> DVector<f64> {
    let n = c.len();
    assert_eq!(widths.len(), n + 1, "widths must have n + 1 entries");
    if feasible(c, widths) {
        return c.clone();
    }

    let scale = 1.0 + c.norm();
    let mut x = c.clone();
    let mut increments: Vec<DVector<f64>> = (0..n).map(|_| DVector::zeros(n)).collect();
    let mut y = DVector::<f64>::zeros(n);
    for _ in 0..rounds {
        let mut change = 0.0_f64;
        for k in 0..n {
            if widths[k].is_infinite() {
                continue;
            }
            y.copy_from(&x);
            y += &increments[k];
            let before = x.clone();
            x.copy_from(&y);
            project_cylinder(&mut x, k, widths[k]);
            let fresh = &y - &x;
            change = change
                .max((&fresh - &increments[k]).amax())
                .max((&x - before).amax());
            increments[k] = fresh;
        }
        if change <= tolerance * scale {
            break;
        }
    }

    for k in (0..n).rev() {
        project_cylinder(&mut x, k, widths[k]);
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[f64]) -> DVector<f64> {
        DVector::from_column_slice(xs)
    }

    #[test]
    fn feasible_point_is_fixed() {
        let c = v(&[0.3, -0.2, 0.1]);
        let w = [1.0, 0.5, 0.2, 0.0];
        assert_eq!(project_slices(&c, &w), c);
    }

    #[test]
    fn single_active_cylinder() {
        let c = v(&[2.0, 3.0, 4.0]);
        let w = [10.0, 2.5, 10.0, 0.0];
        let p = project_slices(&c, &w);
        assert_eq!(p[0], 2.0);
        assert!((p[1] - 1.5).abs() < 1e-15);
        assert!((p[2] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn zero_widths_collapse() {
        let p = project_slices(&v(&[1.0, -2.0]), &[0.0, 0.0, 0.0]);
        assert_eq!(p, DVector::zeros(2));
    }

    #[test]
    fn infinite_widths_are_inactive() {
        let c = v(&[5.0, -7.0]);
        assert_eq!(project_slices(&c, &[f64::INFINITY, f64::INFINITY, 0.0]), c);
    }

    #[test]
    fn nested_active_constraints() {
        // both the full ball and the last tail are active
        let c = v(&[1.0, 1.0]);
        let w = [1.0, 0.2, 0.0];
        let p = project_slices(&c, &w);
        assert!(slice_violation(&p, &w) <= 1e-12);
        // closed form: x_2 = 0.2, x_1 = sqrt(1 - 0.04)
        assert!((p[1] - 0.2).abs() < 1e-9);
        assert!((p[0] - libm::sqrt(0.96)).abs() < 1e-9);
    }
}
