use itertools::Itertools;

use super::{same_group, RepError, Representation, VirtualCharacter, EXTERIOR_DIM_CAP};
use crate::exactnum::{Cyclotomic, Matrix};
use crate::groups::GroupEmbedding;

/// k-subsets of `0..d` in lexicographic order.
fn subsets(d: usize, k: usize) -> Vec<Vec<usize>> {
    (0..d).combinations(k).collect()
}

impl Representation {
    fn check_same(&self, other: &Representation) -> Result<(), RepError> {
        if same_group(&self.group, &other.group) {
            Ok(())
        } else {
            Err(RepError::IncompatibleGroups)
        }
    }

    pub fn direct_sum(&self, other: &Representation) -> Result<Representation, RepError> {
        self.check_same(other)?;
        let matrices = self
            .matrices
            .iter()
            .zip(&other.matrices)
            .map(|(a, b)| Matrix::block_diag(&[a.clone(), b.clone()]))
            .collect();
        Ok(Representation::new_unchecked(
            self.group.clone(),
            self.dim + other.dim,
            matrices,
        ))
    }

    pub fn tensor(&self, other: &Representation) -> Result<Representation, RepError> {
        self.check_same(other)?;
        let matrices = self
            .matrices
            .iter()
            .zip(&other.matrices)
            .map(|(a, b)| a.kron(b))
            .collect();
        Ok(Representation::new_unchecked(
            self.group.clone(),
            self.dim * other.dim,
            matrices,
        ))
    }

    /// `Λ^k` on the basis of k-subsets in lexicographic order; entry
    /// `(S, T)` is the minor of ρ(g) on rows `S`, columns `T`.
    pub fn exterior_power(&self, k: usize) -> Result<Representation, RepError> {
        if k > self.dim {
            return Ok(Representation::zero(&self.group));
        }
        if self.dim > EXTERIOR_DIM_CAP {
            return Err(RepError::TooLarge {
                dim: self.dim,
                cap: EXTERIOR_DIM_CAP,
            });
        }
        let basis = subsets(self.dim, k);
        let matrices = self
            .matrices
            .iter()
            .map(|m| {
                Matrix::from_fn(basis.len(), basis.len(), |i, j| {
                    m.submatrix(&basis[i], &basis[j]).determinant()
                })
            })
            .collect();
        Ok(Representation::new_unchecked(
            self.group.clone(),
            basis.len(),
            matrices,
        ))
    }

    /// Character of `Λ^k`: sums of principal k-minors, without building the
    /// full matrices.
    pub fn exterior_power_character(&self, k: usize) -> Result<VirtualCharacter, RepError> {
        if k > self.dim {
            return Ok(VirtualCharacter::zero(&self.group));
        }
        if self.dim > EXTERIOR_DIM_CAP {
            return Err(RepError::TooLarge {
                dim: self.dim,
                cap: EXTERIOR_DIM_CAP,
            });
        }
        let basis = subsets(self.dim, k);
        let reps = &self.group.conjugacy().class_reps;
        let values = reps
            .iter()
            .map(|&g| {
                let m = &self.matrices[g];
                basis.iter().map(|s| m.submatrix(s, s).determinant()).sum()
            })
            .collect();
        Ok(VirtualCharacter::new_unchecked(self.group.clone(), values))
    }

    /// `ρ*(g) = ρ(g⁻¹)ᵀ`
    pub fn dual(&self) -> Representation {
        let matrices = self
            .group
            .elements()
            .map(|g| self.matrices[self.group.inv(g)].transpose())
            .collect();
        Representation::new_unchecked(self.group.clone(), self.dim, matrices)
    }

    pub fn restrict(&self, emb: &GroupEmbedding) -> Result<Representation, RepError> {
        if !same_group(&self.group, emb.target()) {
            return Err(RepError::IncompatibleGroups);
        }
        let matrices = emb
            .images()
            .iter()
            .map(|&h| self.matrices[h].clone())
            .collect();
        Ok(Representation::new_unchecked(
            emb.source().clone(),
            self.dim,
            matrices,
        ))
    }

    /// Induced representation on blocks indexed by left coset representatives.
    pub fn induce(&self, emb: &GroupEmbedding) -> Result<Representation, RepError> {
        if !same_group(&self.group, emb.source()) {
            return Err(RepError::IncompatibleGroups);
        }
        let reps = emb.coset_reps();
        let matrices = emb
            .target()
            .elements()
            .map(|h| self.induced_block_matrix(emb, &reps, h))
            .collect();
        Ok(Representation::new_unchecked(
            emb.target().clone(),
            reps.len() * self.dim,
            matrices,
        ))
    }

    /// The induced matrix at a single element `h` of the target group.
    pub fn induce_matrix_at(&self, emb: &GroupEmbedding, h: usize) -> Result<Matrix, RepError> {
        if !same_group(&self.group, emb.source()) {
            return Err(RepError::IncompatibleGroups);
        }
        Ok(self.induced_block_matrix(emb, &emb.coset_reps(), h))
    }

    fn induced_block_matrix(&self, emb: &GroupEmbedding, reps: &[usize], h: usize) -> Matrix {
        let big = emb.target();
        let d = self.dim;
        let mut out = Matrix::zeros(reps.len() * d, reps.len() * d);
        for (i, &ri) in reps.iter().enumerate() {
            let left = big.mul(big.inv(ri), h);
            for (j, &rj) in reps.iter().enumerate() {
                if let Some(g) = emb.preimage(big.mul(left, rj)) {
                    out.set_block(i * d, j * d, &self.matrices[g]);
                }
            }
        }
        out
    }

    /// Extends the columns of `basis` to a basis of the whole space using
    /// standard vectors, returning the change-of-basis matrix.
    fn adapted_basis(&self, basis: &Matrix) -> Result<Matrix, RepError> {
        if basis.rows() != self.dim {
            return Err(RepError::Shape(format!(
                "subspace basis has {} rows, representation has dimension {}",
                basis.rows(),
                self.dim
            )));
        }
        if basis.rank() != basis.cols() {
            return Err(RepError::Shape(
                "subspace basis is not linearly independent".into(),
            ));
        }
        let mut b = basis.clone();
        for i in 0..self.dim {
            if b.cols() == self.dim {
                break;
            }
            let mut e = Matrix::zeros(self.dim, 1);
            e[(i, 0)] = Cyclotomic::one();
            let candidate = Matrix::hstack(&[&b, &e]);
            if candidate.rank() == candidate.cols() {
                b = candidate;
            }
        }
        Ok(b)
    }

    /// Action on the invariant subspace spanned by the columns of `basis`,
    /// in that basis.
    pub fn subrepresentation(&self, basis: &Matrix) -> Result<Representation, RepError> {
        let k = basis.cols();
        let matrices = self
            .group
            .elements()
            .map(|g| {
                basis
                    .solve_in_span(&self.matrices[g].mul(basis))
                    .ok_or(RepError::NotInvariant(g))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Representation::new_unchecked(
            self.group.clone(),
            k,
            matrices,
        ))
    }

    /// Action on the quotient by the invariant subspace spanned by the
    /// columns of `basis`.
    pub fn quotient(&self, basis: &Matrix) -> Result<Representation, RepError> {
        let b = self.adapted_basis(basis)?;
        let binv = b.inverse()?;
        let k = basis.cols();
        let q = self.dim - k;
        let matrices = self
            .group
            .elements()
            .map(|g| {
                let conj = binv.mul(&self.matrices[g]).mul(&b);
                if !conj.block(k, 0, q, k).is_zero() {
                    return Err(RepError::NotInvariant(g));
                }
                Ok(conj.block(k, k, q, q))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Representation::new_unchecked(
            self.group.clone(),
            q,
            matrices,
        ))
    }

    /// `Σ_k (−1)^k χ(Λ^k ρ*)`
    pub fn lambda_minus_one(&self) -> Result<VirtualCharacter, RepError> {
        let dual = self.dual();
        let mut acc = VirtualCharacter::zero(&self.group);
        for k in 0..=self.dim {
            let chi = dual.exterior_power_character(k)?;
            acc = if k % 2 == 0 {
                acc.add(&chi)?
            } else {
                acc.sub(&chi)?
            };
        }
        Ok(acc)
    }
}
