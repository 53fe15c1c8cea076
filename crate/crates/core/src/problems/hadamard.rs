//! Hadamard matrices, used to build orthogonal matrices with flat magnitudes.
//!
//! Covered orders: 1, 2, Paley I (`q + 1`, `q` prime, `q = 3 mod 4`),
//! Paley II (`2(q + 1)`, `q` prime, `q = 1 mod 4`) and Kronecker products of those.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// A `+-1` matrix with `H H^T = n I`, if one of the supported constructions reaches `n`.
pub fn hadamard(n: usize) -> Option<DMatrix<f64>> {
    match n {
        0 => None,
        1 => Some(DMatrix::from_element(1, 1, 1.0)),
        2 => Some(DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, -1.0])),
        _ if !n.is_multiple_of(4) => None,
        _ => {
            if is_prime(n - 1) && (n - 1) % 4 == 3 {
                return Some(paley_one(n - 1));
            }
            let q = n / 2 - 1;
            if q >= 5 && is_prime(q) && q % 4 == 1 {
                return Some(paley_two(q));
            }
            let mut a = 2;
            while a * a <= n {
                if n.is_multiple_of(a) {
                    if let (Some(ha), Some(hb)) = (hadamard(a), hadamard(n / a)) {
                        return Some(ha.kronecker(&hb));
                    }
                }
                a += 1;
            }
            None
        }
    }
}

/// Orthogonal `n x n` matrix with every entry of magnitude `n^{-1/2}`.
pub fn flat_orthogonal(n: usize) -> Result<DMatrix<f64>> {
    let h = hadamard(n).ok_or(Error::HadamardUnavailable(n))?;
    Ok(h / libm::sqrt(n as f64))
}

fn is_prime(q: usize) -> bool {
    if q < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= q {
        if q.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn legendre(a: usize, q: usize) -> f64 {
    let a = a % q;
    if a == 0 {
        return 0.0;
    }
    let mut result = 1usize;
    let mut base = a;
    let mut exp = (q - 1) / 2;
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * base % q;
        }
        base = base * base % q;
        exp >>= 1;
    }
    if result == 1 {
        1.0
    } else {
        -1.0
    }
}

fn jacobsthal(q: usize) -> DMatrix<f64> {
    DMatrix::from_fn(q, q, |i, j| legendre(j + q - i, q))
}

fn paley_one(q: usize) -> DMatrix<f64> {
    let jac = jacobsthal(q);
    let n = q + 1;
    let mut h = DMatrix::<f64>::identity(n, n);
    for j in 1..n {
        h[(0, j)] += 1.0;
        h[(j, 0)] -= 1.0;
    }
    for i in 0..q {
        for j in 0..q {
            h[(i + 1, j + 1)] += jac[(i, j)];
        }
    }
    h
}

fn paley_two(q: usize) -> DMatrix<f64> {
    let jac = jacobsthal(q);
    let n = q + 1;
    let mut c = DMatrix::<f64>::zeros(n, n);
    for j in 1..n {
        c[(0, j)] = 1.0;
        c[(j, 0)] = 1.0;
    }
    for i in 0..q {
        for j in 0..q {
            c[(i + 1, j + 1)] = jac[(i, j)];
        }
    }
    let plus = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, -1.0]);
    let minus = DMatrix::from_row_slice(2, 2, &[1.0, -1.0, -1.0, -1.0]);
    c.kronecker(&plus) + DMatrix::<f64>::identity(n, n).kronecker(&minus)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn is_hadamard(h: &DMatrix<f64>) -> bool {
        let n = h.nrows();
        let prod = h * h.transpose();
        h.iter().all(|x| *x == 1.0 || *x == -1.0)
            && crate::linalg::max_abs_diff(&prod, &(DMatrix::identity(n, n) * n as f64)) == 0.0
    }

    #[test]
    fn supported_orders() {
        for n in [
            1usize, 2, 4, 8, 12, 16, 20, 24, 28, 32, 36, 40, 44, 48, 56, 60, 64, 68, 72, 76, 80,
        ] {
            let h = hadamard(n).unwrap_or_else(|| panic!("no Hadamard for {n}"));
            assert!(is_hadamard(&h), "n = {n}");
        }
    }

    #[test]
    fn unsupported_orders() {
        for n in [0usize, 3, 5, 6, 10, 18] {
            assert!(hadamard(n).is_none());
        }
        assert_eq!(flat_orthogonal(6), Err(Error::HadamardUnavailable(6)));
    }

    #[test]
    fn flat_matrix_is_orthogonal() {
        let x = flat_orthogonal(12).unwrap();
        assert!(crate::linalg::orthogonality_defect(&x) < 1e-14);
        let flat = 1.0 / libm::sqrt(12.0);
        assert!(x.iter().all(|v| (v.abs() - flat).abs() < 1e-15));
    }
}
