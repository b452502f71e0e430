//! Finite momentum sets and the Jordan–Wigner ladder operators over them.

use serde::{Deserialize, Serialize};

use super::sparse::{SparseMatrix, C64, ONE};
use super::FockError;

/// Momenta on an integer lattice times `spacing`, closed under negation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeSet {
    lattice: Vec<Vec<i64>>,
    pub spacing: f64,
    pub omega_volume: f64,
}

impl ModeSet {
    pub fn new(lattice: Vec<Vec<i64>>, spacing: f64, omega_volume: f64) -> Result<Self, FockError> {
        if lattice.is_empty() {
            return Err(FockError::InvalidModes("empty mode set".into()));
        }
        let d = lattice[0].len();
        if !(d == 1 || d == 3) || lattice.iter().any(|k| k.len() != d) {
            return Err(FockError::InvalidModes("momenta must all be 1- or 3-dimensional".into()));
        }
        for (i, k) in lattice.iter().enumerate() {
            if lattice[..i].contains(k) {
                return Err(FockError::InvalidModes(format!("duplicate momentum {k:?}")));
            }
            let neg: Vec<i64> = k.iter().map(|x| -x).collect();
            if !lattice.contains(&neg) {
                return Err(FockError::InvalidModes(format!("momentum {k:?} has no partner {neg:?}")));
            }
        }
        if !(spacing > 0.0 && omega_volume > 0.0) {
            return Err(FockError::InvalidModes("spacing and volume must be positive".into()));
        }
        Ok(Self { lattice, spacing, omega_volume })
    }

    /// n points on a line: ±1, ±2, … with 0 included when n is odd.
    pub fn line(n: usize, spacing: f64, omega_volume: f64) -> Result<Self, FockError> {
        let half = (n / 2) as i64;
        let mut pts: Vec<Vec<i64>> = Vec::with_capacity(n);
        for j in (1..=half).rev() {
            pts.push(vec![-j]);
        }
        if n % 2 == 1 {
            pts.push(vec![0]);
        }
        for j in 1..=half {
            pts.push(vec![j]);
        }
        Self::new(pts, spacing, omega_volume)
    }

    pub fn len(&self) -> usize {
        self.lattice.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lattice.is_empty()
    }

    pub fn dimension(&self) -> usize {
        self.lattice[0].len()
    }

    pub fn lattice(&self, i: usize) -> &[i64] {
        &self.lattice[i]
    }

    pub fn momentum(&self, i: usize) -> Vec<f64> {
        self.lattice[i].iter().map(|&x| x as f64 * self.spacing).collect()
    }

    pub fn k2(&self, i: usize) -> f64 {
        self.momentum(i).iter().map(|x| x * x).sum()
    }

    pub fn index_of(&self, lattice: &[i64]) -> Option<usize> {
        self.lattice.iter().position(|k| k.as_slice() == lattice)
    }

    pub fn neg(&self, i: usize) -> usize {
        let n: Vec<i64> = self.lattice[i].iter().map(|x| -x).collect();
        self.index_of(&n).expect("closed under negation")
    }

    /// Σk²/n, the discrete ⟨k²⟩.
    pub fn mean_k2(&self) -> f64 {
        (0..self.len()).map(|i| self.k2(i)).sum::<f64>() / self.len() as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Species {
    A,
    Atilde,
}

/// Largest number of single-particle orbitals (matrix side 2^12 = 4096).
pub const MAX_ORBITALS: usize = 12;

/// Ladder operators for A_α(k), Ã_α(k); orbitals ordered species-major,
/// then isospin, then momentum index.
#[derive(Debug, Clone)]
pub struct FockSpace {
    pub modes: ModeSet,
    annihilators: Vec<SparseMatrix>,
    creators: Vec<SparseMatrix>,
}

impl FockSpace {
    pub fn new(modes: ModeSet) -> Result<Self, FockError> {
        let orbitals = 4 * modes.len();
        if orbitals > MAX_ORBITALS {
            return Err(FockError::Budget { orbitals, max: MAX_ORBITALS });
        }
        let dim = 1usize << orbitals;
        let annihilators: Vec<SparseMatrix> = (0..orbitals)
            .map(|j| {
                let bit = 1usize << j;
                SparseMatrix::from_triplets(
                    dim,
                    (0..dim).filter(|b| b & bit != 0).map(|b| {
                        let sign = if (b & (bit - 1)).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
                        (b ^ bit, b, C64::new(sign, 0.0))
                    }),
                )
            })
            .collect();
        let creators = annihilators.iter().map(SparseMatrix::adjoint).collect();
        Ok(Self { modes, annihilators, creators })
    }

    pub fn dim(&self) -> usize {
        1 << self.orbitals()
    }

    pub fn orbitals(&self) -> usize {
        4 * self.modes.len()
    }

    pub fn n_modes(&self) -> usize {
        self.modes.len()
    }

    pub fn orbital(&self, species: Species, iso: usize, k: usize) -> usize {
        let n = self.modes.len();
        let s = match species {
            Species::A => 0,
            Species::Atilde => 1,
        };
        s * 2 * n + iso * n + k
    }

    pub fn orbital_info(&self, orbital: usize) -> (Species, usize, usize) {
        let n = self.modes.len();
        let species = if orbital < 2 * n { Species::A } else { Species::Atilde };
        let r = orbital % (2 * n);
        (species, r / n, r % n)
    }

    pub fn annihilator(&self, species: Species, iso: usize, k: usize) -> &SparseMatrix {
        &self.annihilators[self.orbital(species, iso, k)]
    }

    pub fn creator(&self, species: Species, iso: usize, k: usize) -> &SparseMatrix {
        &self.creators[self.orbital(species, iso, k)]
    }

    pub fn identity(&self) -> SparseMatrix {
        SparseMatrix::identity(self.dim())
    }

    /// (N_A, N_Ã, total lattice momentum) of a basis state.
    pub fn quantum_numbers(&self, state: usize) -> (usize, usize, Vec<i64>) {
        let mut na = 0;
        let mut nat = 0;
        let mut p = vec![0i64; self.modes.dimension()];
        for o in 0..self.orbitals() {
            if state & (1 << o) != 0 {
                let (s, _, k) = self.orbital_info(o);
                match s {
                    Species::A => na += 1,
                    Species::Atilde => nat += 1,
                }
                for (pi, ki) in p.iter_mut().zip(self.modes.lattice(k)) {
                    *pi += ki;
                }
            }
        }
        (na, nat, p)
    }

    /// Worst violation of the canonical anticommutators, Frobenius norm.
    pub fn car_residual(&self) -> f64 {
        let eye = self.identity();
        let mut worst = 0.0f64;
        for i in 0..self.orbitals() {
            for j in 0..self.orbitals() {
                let mut ac = self.annihilators[i].anticommutator(&self.creators[j]);
                if i == j {
                    ac = ac.sub(&eye);
                }
                worst = worst.max(ac.norm());
                worst = worst.max(self.annihilators[i].anticommutator(&self.annihilators[j]).norm());
            }
        }
        worst
    }

    /// Σ A†A + Ã†Ã, diagonal in the occupation basis.
    pub fn number_operator(&self) -> SparseMatrix {
        SparseMatrix::diagonal(
            &(0..self.dim()).map(|b| C64::new(f64::from((b as u64).count_ones()), 0.0)).collect::<Vec<_>>(),
        )
    }

    pub fn vacuum(&self) -> Vec<C64> {
        super::sparse::basis_vector(self.dim(), 0)
    }

    /// State with every Ã orbital filled and every A orbital empty.
    pub fn filled_atilde_index(&self) -> usize {
        let n = self.modes.len();
        ((1usize << (2 * n)) - 1) << (2 * n)
    }

    pub fn one() -> C64 {
        ONE
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_sets() {
        let m = ModeSet::line(3, 0.5, 1.0).unwrap();
        assert_eq!(m.len(), 3);
        assert_eq!(m.momentum(0), vec![-0.5]);
        assert_eq!(m.neg(0), 2);
        assert!(ModeSet::new(vec![vec![1]], 1.0, 1.0).is_err());
        assert!(ModeSet::new(vec![vec![0], vec![0]], 1.0, 1.0).is_err());
        assert!(ModeSet::line(2, 1.0, 0.0).is_err());
    }

    #[test]
    fn car_and_nilpotency() {
        for n in [1, 2] {
            let space = FockSpace::new(ModeSet::line(n, 1.0, 1.0).unwrap()).unwrap();
            assert!(space.car_residual() < 1e-13);
            let a = space.annihilator(Species::A, 1, 0);
            assert_eq!(a.mul(a).nnz(), 0);
            let num = space.creator(Species::Atilde, 0, 0).mul(space.annihilator(Species::Atilde, 0, 0));
            assert!(num.mul(&num).sub(&num).norm() == 0.0);
        }
    }

    #[test]
    fn budget_is_enforced() {
        let m = ModeSet::line(4, 1.0, 1.0).unwrap();
        assert!(matches!(FockSpace::new(m), Err(FockError::Budget { .. })));
    }
}
