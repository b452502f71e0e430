//! Row-compressed complex operators on a fermionic Fock space.

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type C64 = Complex64;

pub const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
pub const ONE: C64 = C64 { re: 1.0, im: 0.0 };
pub const I: C64 = C64 { re: 0.0, im: 1.0 };

#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    dim: usize,
    /// rows[i] holds (column, value), sorted by column, no explicit zeros
    rows: Vec<Vec<(usize, C64)>>,
}

impl SparseMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, rows: vec![Vec::new(); dim] }
    }

    pub fn identity(dim: usize) -> Self {
        Self::diagonal(&vec![ONE; dim])
    }

    pub fn diagonal(values: &[C64]) -> Self {
        let rows = values.iter().enumerate().map(|(i, &v)| if v == ZERO { vec![] } else { vec![(i, v)] }).collect();
        Self { dim: values.len(), rows }
    }

    pub fn from_triplets(dim: usize, triplets: impl IntoIterator<Item = (usize, usize, C64)>) -> Self {
        let mut rows: Vec<Vec<(usize, C64)>> = vec![Vec::new(); dim];
        for (i, j, v) in triplets {
            rows[i].push((j, v));
        }
        for row in &mut rows {
            row.sort_by_key(|e| e.0);
            let mut merged: Vec<(usize, C64)> = Vec::with_capacity(row.len());
            for &(j, v) in row.iter() {
                match merged.last_mut() {
                    Some(last) if last.0 == j => last.1 += v,
                    _ => merged.push((j, v)),
                }
            }
            merged.retain(|e| e.1 != ZERO);
            *row = merged;
        }
        Self { dim, rows }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn row(&self, i: usize) -> &[(usize, C64)] {
        &self.rows[i]
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.rows[i].binary_search_by_key(&j, |e| e.0).map_or(ZERO, |p| self.rows[i][p].1)
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, C64)> + '_ {
        self.rows.iter().enumerate().flat_map(|(i, r)| r.iter().map(move |&(j, v)| (i, j, v)))
    }

    pub fn scale(&self, s: C64) -> Self {
        if s == ZERO {
            return Self::zeros(self.dim);
        }
        Self { dim: self.dim, rows: self.rows.iter().map(|r| r.iter().map(|&(j, v)| (j, v * s)).collect()).collect() }
    }

    /// self + s·other
    pub fn add_scaled(&self, other: &Self, s: C64) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| {
                let mut out = Vec::with_capacity(a.len() + b.len());
                let (mut p, mut q) = (0, 0);
                while p < a.len() || q < b.len() {
                    let take_a = q >= b.len() || (p < a.len() && a[p].0 < b[q].0);
                    let take_b = p >= a.len() || (q < b.len() && b[q].0 < a[p].0);
                    if take_a {
                        out.push(a[p]);
                        p += 1;
                    } else if take_b {
                        out.push((b[q].0, b[q].1 * s));
                        q += 1;
                    } else {
                        let v = a[p].1 + b[q].1 * s;
                        if v != ZERO {
                            out.push((a[p].0, v));
                        }
                        p += 1;
                        q += 1;
                    }
                }
                out
            })
            .collect();
        Self { dim: self.dim, rows }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.add_scaled(other, ONE)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add_scaled(other, -ONE)
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let mut acc = vec![ZERO; self.dim];
        let mut seen = vec![false; self.dim];
        let mut touched = Vec::new();
        let rows = self
            .rows
            .iter()
            .map(|r| {
                for &(k, a) in r {
                    for &(j, b) in &other.rows[k] {
                        if !seen[j] {
                            seen[j] = true;
                            touched.push(j);
                        }
                        acc[j] += a * b;
                    }
                }
                touched.sort_unstable();
                let out: Vec<(usize, C64)> =
                    touched.iter().filter(|&&j| acc[j] != ZERO).map(|&j| (j, acc[j])).collect();
                for &j in &touched {
                    acc[j] = ZERO;
                    seen[j] = false;
                }
                touched.clear();
                out
            })
            .collect();
        Self { dim: self.dim, rows }
    }

    pub fn adjoint(&self) -> Self {
        Self::from_triplets(self.dim, self.entries().map(|(i, j, v)| (j, i, v.conj())))
    }

    pub fn apply(&self, x: &[C64]) -> Vec<C64> {
        self.rows.iter().map(|r| r.iter().map(|&(j, v)| v * x[j]).sum()).collect()
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn anticommutator(&self, other: &Self) -> Self {
        self.mul(other).add(&other.mul(self))
    }

    /// Frobenius norm, an upper bound on the operator norm.
    pub fn norm(&self) -> f64 {
        self.entries().fold(0.0, |a, (_, _, v)| a + v.norm_sqr()).sqrt()
    }

    /// Largest entry modulus, a lower bound on the operator norm.
    pub fn max_abs(&self) -> f64 {
        self.entries().fold(0.0, |a, (_, _, v)| a.max(v.norm()))
    }

    /// max_i Σ_j |a_ij|, an upper bound on the operator norm of a Hermitian matrix.
    pub fn row_sum_norm(&self) -> f64 {
        self.rows.iter().map(|r| r.iter().fold(0.0, |a, (_, v)| a + v.norm())).fold(0.0, f64::max)
    }

    pub fn hermiticity_residual(&self) -> f64 {
        self.sub(&self.adjoint()).norm()
    }

    /// Split into entries whose row and column share `label` and the rest.
    pub fn split_by<F: Fn(usize) -> i64>(&self, label: F) -> (Self, Self) {
        let mut same = Vec::new();
        let mut other = Vec::new();
        for (i, j, v) in self.entries() {
            if label(i) == label(j) {
                same.push((i, j, v));
            } else {
                other.push((i, j, v));
            }
        }
        (Self::from_triplets(self.dim, same), Self::from_triplets(self.dim, other))
    }

    pub fn to_dense(&self) -> DMatrix<C64> {
        let mut m = DMatrix::from_element(self.dim, self.dim, ZERO);
        for (i, j, v) in self.entries() {
            m[(i, j)] = v;
        }
        m
    }

    pub fn from_dense(m: &DMatrix<C64>) -> Self {
        assert_eq!(m.nrows(), m.ncols(), "square matrix expected");
        let n = m.nrows();
        Self::from_triplets(n, (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| (i, j, m[(i, j)])))
    }

    /// Drop entries with modulus at or below `tol`.
    pub fn pruned(&self, tol: f64) -> Self {
        Self {
            dim: self.dim,
            rows: self.rows.iter().map(|r| r.iter().copied().filter(|e| e.1.norm() > tol).collect()).collect(),
        }
    }

    /// exp(i·t·self) by scaling and squaring of a Taylor series; intended for
    /// Hermitian generators whose exponentials stay sparse.
    pub fn exp_i(&self, t: f64) -> Self {
        let norm = self.row_sum_norm() * t.abs();
        let mut squarings = 0;
        let mut scale = 1.0;
        while norm * scale > 0.5 {
            scale *= 0.5;
            squarings += 1;
        }
        let x = self.scale(I * (t * scale));
        let mut result = Self::identity(self.dim);
        let mut term = Self::identity(self.dim);
        for k in 1..=30 {
            term = term.mul(&x).scale(C64::new(1.0 / k as f64, 0.0));
            result = result.add(&term);
            if term.norm() < 1e-18 {
                break;
            }
        }
        for _ in 0..squarings {
            result = result.mul(&result).pruned(1e-300);
        }
        result
    }
}

pub fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn vec_norm(a: &[C64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// ‖a − s·b‖
pub fn residual(a: &[C64], b: &[C64], s: C64) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - s * y).norm_sqr()).sum::<f64>().sqrt()
}

pub fn basis_vector(dim: usize, i: usize) -> Vec<C64> {
    let mut v = vec![ZERO; dim];
    v[i] = ONE;
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> SparseMatrix {
        SparseMatrix::from_triplets(
            3,
            [(0, 1, C64::new(1.0, 2.0)), (2, 0, C64::new(-0.5, 0.0)), (1, 1, C64::new(0.0, 1.0)), (0, 1, ONE)],
        )
    }

    #[test]
    fn products_match_dense() {
        let a = sample();
        let b = a.adjoint().add(&SparseMatrix::identity(3));
        let dense = a.to_dense() * b.to_dense();
        assert!((a.mul(&b).to_dense() - dense).norm() < 1e-15);
        assert_eq!(a.get(0, 1), C64::new(2.0, 2.0));
        assert!((a.add_scaled(&b, I).to_dense() - (a.to_dense() + b.to_dense() * I)).norm() < 1e-15);
    }

    #[test]
    fn exponential_of_hermitian_is_unitary() {
        let a = sample();
        let h = a.add(&a.adjoint());
        let u = h.exp_i(0.7);
        let eye = SparseMatrix::identity(3);
        assert!(u.mul(&u.adjoint()).sub(&eye).norm() < 1e-13);
        // compare with the eigen-decomposition
        let eig = nalgebra::SymmetricEigen::new(h.to_dense());
        let phases = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| (I * 0.7 * l).exp()));
        let ref_u = &eig.eigenvectors * phases * eig.eigenvectors.adjoint();
        assert!((u.to_dense() - ref_u).norm() < 1e-13);
    }
}
