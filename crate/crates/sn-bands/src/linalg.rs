//! Minimal dense symmetric-matrix helpers for the low-dimensional (<= 4)
//! information matrices used here.

use serde::{Deserialize, Serialize};

/// Dense symmetric matrix, row-major storage.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(dim: usize) -> Self {
        SymMatrix {
            dim,
            data: vec![0.0; dim * dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.dim + j] = v;
        self.data[j * self.dim + i] = v;
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.dim)
            .map(|i| self.data[i * self.dim..(i + 1) * self.dim].to_vec())
            .collect()
    }

    /// Cholesky factor L with A = L L^T; None when not positive definite.
    fn cholesky(&self) -> Option<Vec<f64>> {
        let n = self.dim;
        let mut l = vec![0.0f64; n * n];
        for i in 0..n {
            for j in 0..=i {
                let mut sum = self.get(i, j);
                for k in 0..j {
                    sum -= l[i * n + k] * l[j * n + k];
                }
                if i == j {
                    if sum <= 0.0 || !sum.is_finite() {
                        return None;
                    }
                    l[i * n + i] = sum.sqrt();
                } else {
                    l[i * n + j] = sum / l[j * n + j];
                }
            }
        }
        Some(l)
    }

    pub fn is_positive_definite(&self) -> bool {
        self.cholesky().is_some()
    }

    /// Inverse via the Cholesky factorization; None when not positive
    /// definite.
    pub fn cholesky_inverse(&self) -> Option<SymMatrix> {
        let n = self.dim;
        let l = self.cholesky()?;
        // invert L by forward substitution
        let mut linv = vec![0.0f64; n * n];
        for i in 0..n {
            linv[i * n + i] = 1.0 / l[i * n + i];
            for j in 0..i {
                let mut sum = 0.0;
                for k in j..i {
                    sum -= l[i * n + k] * linv[k * n + j];
                }
                linv[i * n + j] = sum / l[i * n + i];
            }
        }
        // A^{-1} = L^{-T} L^{-1}
        let mut out = SymMatrix::zeros(n);
        for i in 0..n {
            for j in 0..=i {
                let mut sum = 0.0;
                for k in i..n {
                    sum += linv[k * n + i] * linv[k * n + j];
                }
                out.set(i, j, sum);
            }
        }
        Some(out)
    }

    /// Quadratic form g^T A g.
    pub fn quadratic_form(&self, g: &[f64]) -> f64 {
        let n = self.dim;
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                acc += g[i] * self.get(i, j) * g[j];
            }
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_of_known_matrix() {
        let mut a = SymMatrix::zeros(2);
        a.set(0, 0, 4.0);
        a.set(0, 1, 1.0);
        a.set(1, 1, 3.0);
        let inv = a.cholesky_inverse().unwrap();
        // det = 11; inverse = [[3,-1],[-1,4]]/11
        assert!((inv.get(0, 0) - 3.0 / 11.0).abs() < 1e-14);
        assert!((inv.get(0, 1) + 1.0 / 11.0).abs() < 1e-14);
        assert!((inv.get(1, 1) - 4.0 / 11.0).abs() < 1e-14);
    }

    #[test]
    fn indefinite_matrix_has_no_cholesky() {
        let mut a = SymMatrix::zeros(2);
        a.set(0, 0, 1.0);
        a.set(0, 1, 5.0);
        a.set(1, 1, 1.0);
        assert!(a.cholesky_inverse().is_none());
        assert!(!a.is_positive_definite());
    }

    #[test]
    fn quadratic_form_matches_manual() {
        let mut a = SymMatrix::zeros(2);
        a.set(0, 0, 2.0);
        a.set(0, 1, 0.5);
        a.set(1, 1, 1.0);
        let g = [1.0, 2.0];
        assert!((a.quadratic_form(&g) - (2.0 + 2.0 * 0.5 * 2.0 + 4.0)).abs() < 1e-14);
    }
}
