//! Small dense complex matrices for checking gate algebra.
//!
//! Basis ordering is little-endian like [`StateVector`](super::StateVector):
//! for a two-qubit matrix the row/column index is `q0 + 2 * q1`.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};
use std::ops::Mul;

use num_complex::Complex64;

use super::GateKind;

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl Matrix {
    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    /// Builds a matrix from row-major entries. Panics if the entry count is not a square.
    pub fn from_rows(dim: usize, entries: Vec<Complex64>) -> Self {
        assert_eq!(entries.len(), dim * dim, "matrix must be {dim}x{dim}");
        Self { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    /// The single-qubit matrix of a gate kind. Panics for CNOT; use [`Matrix::cnot`].
    pub fn single(kind: GateKind) -> Self {
        let c = |re: f64, im: f64| Complex64::new(re, im);
        let s = FRAC_1_SQRT_2;
        let rows = match kind {
            GateKind::X => [c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)],
            GateKind::Z => [c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)],
            GateKind::P => [c(1., 0.), c(0., 0.), c(0., 0.), c(0., 1.)],
            GateKind::H => [c(s, 0.), c(s, 0.), c(s, 0.), c(-s, 0.)],
            GateKind::T => [
                c(1., 0.),
                c(0., 0.),
                c(0., 0.),
                Complex64::from_polar(1.0, FRAC_PI_4),
            ],
            GateKind::Cnot => panic!("CNOT is a two-qubit gate"),
        };
        Self::from_rows(2, rows.to_vec())
    }

    /// CNOT with qubit 0 as control and qubit 1 as target.
    pub fn cnot() -> Self {
        let mut m = Self::zeros(4);
        for col in 0..4usize {
            let control = col & 1;
            let row = col ^ (control << 1);
            m.entries[row * 4 + col] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// The one-time pad `X^x Z^z`.
    pub fn pad(x: bool, z: bool) -> Self {
        Self::single(GateKind::X).pow(x as u32) * Self::single(GateKind::Z).pow(z as u32)
    }

    pub fn pow(&self, exp: u32) -> Self {
        (0..exp).fold(Self::identity(self.dim), |acc, _| acc * self.clone())
    }

    /// Kronecker product `self ⊗ rhs`. In little-endian ordering `rhs` acts on the
    /// low qubits, so `a.kron(&b)` is "b on qubit 0, a on qubit 1".
    pub fn kron(&self, rhs: &Matrix) -> Self {
        let dim = self.dim * rhs.dim;
        let mut m = Self::zeros(dim);
        for r1 in 0..self.dim {
            for c1 in 0..self.dim {
                let a = self.get(r1, c1);
                for r2 in 0..rhs.dim {
                    for c2 in 0..rhs.dim {
                        m.entries[(r1 * rhs.dim + r2) * dim + c1 * rhs.dim + c2] =
                            a * rhs.get(r2, c2);
                    }
                }
            }
        }
        m
    }

    pub fn approx_eq(&self, other: &Matrix, tol: f64) -> bool {
        self.dim == other.dim
            && self
                .entries
                .iter()
                .zip(&other.entries)
                .all(|(a, b)| (a - b).norm() <= tol)
    }

    /// True iff `other = e^{iφ} self` for some real φ, entrywise within `tol`.
    pub fn equal_up_to_phase(&self, other: &Matrix, tol: f64) -> bool {
        if self.dim != other.dim {
            return false;
        }
        let pivot = (0..self.entries.len())
            .max_by(|&i, &j| self.entries[i].norm().total_cmp(&self.entries[j].norm()))
            .expect("non-empty matrix");
        let a = self.entries[pivot];
        let b = other.entries[pivot];
        if a.norm() <= tol || b.norm() <= tol {
            return self.approx_eq(other, tol);
        }
        let phase = b / a;
        if (phase.norm() - 1.0).abs() > tol {
            return false;
        }
        self.entries
            .iter()
            .zip(&other.entries)
            .all(|(a, b)| (a * phase - b).norm() <= tol)
    }
}

impl Mul for Matrix {
    type Output = Matrix;

    fn mul(self, rhs: Matrix) -> Matrix {
        &self * &rhs
    }
}

impl Mul for &Matrix {
    type Output = Matrix;

    fn mul(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let n = self.dim;
        let mut m = Matrix::zeros(n);
        for r in 0..n {
            for c in 0..n {
                m.entries[r * n + c] = (0..n).map(|k| self.get(r, k) * rhs.get(k, c)).sum();
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cnot_maps_control_set_basis_states() {
        let m = Matrix::cnot();
        // |q0=1, q1=0> (index 1) -> |q0=1, q1=1> (index 3)
        assert_eq!(m.get(3, 1), Complex64::new(1.0, 0.0));
        assert_eq!(m.get(0, 0), Complex64::new(1.0, 0.0));
        assert_eq!(m.get(2, 2), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn phase_equality_rejects_different_operators() {
        let x = Matrix::single(GateKind::X);
        let z = Matrix::single(GateKind::Z);
        assert!(!x.equal_up_to_phase(&z, 1e-12));
        let minus_x = Matrix::from_rows(2, x.entries.iter().map(|e| -e).collect());
        assert!(x.equal_up_to_phase(&minus_x, 1e-12));
        assert!(!x.approx_eq(&minus_x, 1e-12));
    }

    #[test]
    fn kron_places_rhs_on_low_qubit() {
        let x0 = Matrix::identity(2).kron(&Matrix::single(GateKind::X));
        // X on qubit 0 maps index 0 -> 1
        assert_eq!(x0.get(1, 0), Complex64::new(1.0, 0.0));
    }
}
