//! Bounded complexes of representations with equivariant differentials.

mod cone;
mod heat;

use std::sync::Arc;

use thiserror::Error;

use crate::exactnum::{Cyclotomic, Matrix};
use crate::groups::{FiniteGroup, GroupEmbedding};
use crate::reps::{RepError, Representation, VirtualCharacter};

pub use cone::ChainMap;
pub use heat::{HeatReport, HeatSpec};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ComplexError {
    #[error("shape error: {0}")]
    Shape(String),
    #[error("pieces live over different groups")]
    IncompatibleGroups,
    #[error("invalid complex: {0}")]
    Invalid(ValidationReport),
    #[error("map is not a chain map: {0}")]
    NotClosed(String),
    #[error(transparent)]
    Rep(#[from] RepError),
}

/// Failures found by [`EquivariantComplex::validate`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    /// Degrees `k` with `d_{k+1} d_k != 0`.
    pub d_squared: Vec<i32>,
    /// Pairs `(k, g)` with `d_k ρ_k(g) != ρ_{k+1}(g) d_k`.
    pub not_equivariant: Vec<(i32, usize)>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.d_squared.is_empty() && self.not_equivariant.is_empty()
    }
}

impl std::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_valid() {
            return write!(f, "valid");
        }
        if let Some(k) = self.d_squared.first() {
            write!(f, "d∘d != 0 starting at degree {k}")?;
            if !self.not_equivariant.is_empty() {
                write!(f, "; ")?;
            }
        }
        if let Some((k, g)) = self.not_equivariant.first() {
            write!(
                f,
                "differential in degree {k} is not equivariant for element {g} ({} violations)",
                self.not_equivariant.len()
            )?;
        }
        Ok(())
    }
}

/// `E^lowest → … → E^{lowest + len - 1}` with `d_k : E^k → E^{k+1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct EquivariantComplex {
    group: Arc<FiniteGroup>,
    lowest: i32,
    pieces: Vec<Representation>,
    differentials: Vec<Matrix>,
}

pub(crate) fn sign(k: i32) -> i64 {
    if k.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

impl EquivariantComplex {
    /// Builds and validates a complex; `differentials[i]` maps piece `i` to piece `i + 1`.
    pub fn new(
        lowest: i32,
        pieces: Vec<Representation>,
        differentials: Vec<Matrix>,
    ) -> Result<Self, ComplexError> {
        let c = EquivariantComplex::from_parts(lowest, pieces, differentials)?;
        let report = c.validate();
        if report.is_valid() {
            Ok(c)
        } else {
            Err(ComplexError::Invalid(report))
        }
    }

    /// Shape-checked but not validated; pair with [`validate`](Self::validate).
    pub fn from_parts(
        lowest: i32,
        pieces: Vec<Representation>,
        differentials: Vec<Matrix>,
    ) -> Result<Self, ComplexError> {
        let group = pieces
            .first()
            .ok_or_else(|| ComplexError::Shape("a complex needs at least one piece".into()))?
            .group()
            .clone();
        if pieces
            .iter()
            .any(|p| !crate::reps::same_group(p.group(), &group))
        {
            return Err(ComplexError::IncompatibleGroups);
        }
        if differentials.len() + 1 != pieces.len() {
            return Err(ComplexError::Shape(format!(
                "{} pieces need {} differentials, got {}",
                pieces.len(),
                pieces.len() - 1,
                differentials.len()
            )));
        }
        for (i, d) in differentials.iter().enumerate() {
            let want = (pieces[i + 1].dim(), pieces[i].dim());
            if d.shape() != want {
                return Err(ComplexError::Shape(format!(
                    "differential in degree {} is {}x{}, expected {}x{}",
                    lowest + i as i32,
                    d.rows(),
                    d.cols(),
                    want.0,
                    want.1
                )));
            }
        }
        Ok(EquivariantComplex {
            group,
            lowest,
            pieces,
            differentials,
        })
    }

    /// A single representation in degree `degree`.
    pub fn concentrated(rep: Representation, degree: i32) -> Self {
        EquivariantComplex {
            group: rep.group().clone(),
            lowest: degree,
            pieces: vec![rep],
            differentials: Vec::new(),
        }
    }

    /// `Λ^k(rep*)` in degree `−k`, zero differentials: the Koszul complex of
    /// the zero section.
    pub fn koszul_at_zero(rep: &Representation) -> Result<Self, ComplexError> {
        let dual = rep.dual();
        let d = rep.dim();
        let mut pieces = Vec::with_capacity(d + 1);
        for k in (0..=d).rev() {
            pieces.push(dual.exterior_power(k)?);
        }
        let differentials = (0..d)
            .map(|i| Matrix::zeros(pieces[i + 1].dim(), pieces[i].dim()))
            .collect();
        Ok(EquivariantComplex {
            group: rep.group().clone(),
            lowest: -(d as i32),
            pieces,
            differentials,
        })
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        for i in 0..self.differentials.len() {
            let k = self.lowest + i as i32;
            if i + 1 < self.differentials.len()
                && !self.differentials[i + 1]
                    .mul(&self.differentials[i])
                    .is_zero()
            {
                report.d_squared.push(k);
            }
            let d = &self.differentials[i];
            for g in self.group.elements() {
                if d.mul(self.pieces[i].matrix(g)) != self.pieces[i + 1].matrix(g).mul(d) {
                    report.not_equivariant.push((k, g));
                }
            }
        }
        report
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn lowest(&self) -> i32 {
        self.lowest
    }

    pub fn highest(&self) -> i32 {
        self.lowest + self.pieces.len() as i32 - 1
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i32> {
        self.lowest..=self.highest()
    }

    pub fn pieces(&self) -> &[Representation] {
        &self.pieces
    }

    pub fn differentials(&self) -> &[Matrix] {
        &self.differentials
    }

    fn slot(&self, k: i32) -> Option<usize> {
        (self.degrees().contains(&k)).then(|| (k - self.lowest) as usize)
    }

    pub fn piece(&self, k: i32) -> Option<&Representation> {
        self.slot(k).map(|i| &self.pieces[i])
    }

    /// The piece in degree `k`, the zero representation outside the range.
    pub fn piece_or_zero(&self, k: i32) -> Representation {
        self.piece(k)
            .cloned()
            .unwrap_or_else(|| Representation::zero(&self.group))
    }

    pub fn dim_at(&self, k: i32) -> usize {
        self.piece(k).map_or(0, Representation::dim)
    }

    /// `d_k : E^k → E^{k+1}`, a zero matrix outside the stored range.
    pub fn differential(&self, k: i32) -> Matrix {
        match self.slot(k) {
            Some(i) if i < self.differentials.len() => self.differentials[i].clone(),
            _ => Matrix::zeros(self.dim_at(k + 1), self.dim_at(k)),
        }
    }

    pub fn total_dim(&self) -> usize {
        self.pieces.iter().map(Representation::dim).sum()
    }

    /// `g ↦ Σ_k (−1)^k tr ρ_k(g)`
    pub fn supertrace_class(&self) -> VirtualCharacter {
        let reps = &self.group.conjugacy().class_reps;
        let values = reps.iter().map(|&g| self.supertrace_at(g)).collect();
        VirtualCharacter::new(self.group.clone(), values).expect("one value per class")
    }

    pub fn supertrace_at(&self, g: usize) -> Cyclotomic {
        self.degrees()
            .zip(&self.pieces)
            .map(|(k, p)| p.trace_at(g).scale(&crate::exactnum::integer(sign(k))))
            .sum()
    }

    /// Characters of `H^k = ker d_k / im d_{k−1}` for every degree in range.
    pub fn cohomology(&self) -> Result<Vec<(i32, VirtualCharacter)>, ComplexError> {
        let report = self.validate();
        if !report.is_valid() {
            return Err(ComplexError::Invalid(report));
        }
        let reps = self.group.conjugacy().class_reps.clone();
        let mut out = Vec::new();
        for k in self.degrees() {
            let piece = self.piece(k).expect("in range");
            let cycles = self.differential(k).kernel();
            let incoming = self.differential(k - 1);
            let (_, pivots) = incoming.rref();
            let all_rows: Vec<usize> = (0..incoming.rows()).collect();
            let boundaries = incoming.submatrix(&all_rows, &pivots);
            let values = reps
                .iter()
                .map(|&g| {
                    let z = restricted_trace(piece.matrix(g), &cycles);
                    let b = restricted_trace(piece.matrix(g), &boundaries);
                    z - b
                })
                .collect();
            out.push((
                k,
                VirtualCharacter::new(self.group.clone(), values).expect("per class"),
            ));
        }
        Ok(out)
    }

    /// `Σ_k (−1)^k χ(H^k)`
    pub fn cohomology_supertrace(&self) -> Result<VirtualCharacter, ComplexError> {
        let mut acc = VirtualCharacter::zero(&self.group);
        for (k, chi) in self.cohomology()? {
            acc = if sign(k) > 0 {
                acc.add(&chi)?
            } else {
                acc.sub(&chi)?
            };
        }
        Ok(acc)
    }

    pub fn is_acyclic(&self) -> Result<bool, ComplexError> {
        Ok(self
            .cohomology()?
            .iter()
            .all(|(_, chi)| chi.values().iter().all(Cyclotomic::is_zero)))
    }

    /// `E[n]^k = E^{k+n}` with differential `(−1)^n d`.
    pub fn shift(&self, n: i32) -> EquivariantComplex {
        let s = Cyclotomic::from_int(sign(n));
        EquivariantComplex {
            group: self.group.clone(),
            lowest: self.lowest - n,
            pieces: self.pieces.clone(),
            differentials: self.differentials.iter().map(|d| d.scale(&s)).collect(),
        }
    }

    /// Tensor product with `d(e ⊗ f) = de ⊗ f + (−1)^p e ⊗ df` for `e` in degree `p`.
    pub fn tensor(&self, other: &EquivariantComplex) -> Result<EquivariantComplex, ComplexError> {
        if !crate::reps::same_group(&self.group, &other.group) {
            return Err(ComplexError::IncompatibleGroups);
        }
        let lowest = self.lowest + other.lowest;
        let highest = self.highest() + other.highest();
        // summands of degree n: pairs (p, q) with p + q = n, p increasing
        let summands = |n: i32| -> Vec<(i32, i32)> {
            self.degrees()
                .filter(|p| other.degrees().contains(&(n - p)))
                .map(|p| (p, n - p))
                .collect()
        };
        let mut pieces = Vec::new();
        for n in lowest..=highest {
            let mut acc = Representation::zero(&self.group);
            for (p, q) in summands(n) {
                acc = acc.direct_sum(&self.piece(p).unwrap().tensor(other.piece(q).unwrap())?)?;
            }
            pieces.push(acc);
        }
        let mut differentials = Vec::new();
        for n in lowest..highest {
            let src = summands(n);
            let dst = summands(n + 1);
            let offsets = |list: &[(i32, i32)]| -> Vec<usize> {
                let mut off = 0;
                list.iter()
                    .map(|&(p, q)| {
                        let o = off;
                        off += self.dim_at(p) * other.dim_at(q);
                        o
                    })
                    .collect()
            };
            let (so, dof) = (offsets(&src), offsets(&dst));
            let rows = pieces[(n + 1 - lowest) as usize].dim();
            let cols = pieces[(n - lowest) as usize].dim();
            let mut d = Matrix::zeros(rows, cols);
            for (i, &(p, q)) in src.iter().enumerate() {
                if let Some(j) = dst.iter().position(|&x| x == (p + 1, q)) {
                    let block = self
                        .differential(p)
                        .kron(&Matrix::identity(other.dim_at(q)));
                    d.set_block(dof[j], so[i], &block);
                }
                if let Some(j) = dst.iter().position(|&x| x == (p, q + 1)) {
                    let block = Matrix::identity(self.dim_at(p))
                        .kron(&other.differential(q))
                        .scale(&Cyclotomic::from_int(sign(p)));
                    d.set_block(dof[j], so[i], &block);
                }
            }
            differentials.push(d);
        }
        Ok(EquivariantComplex {
            group: self.group.clone(),
            lowest,
            pieces,
            differentials,
        })
    }

    /// Degreewise induction; each differential becomes block diagonal over cosets.
    pub fn induce(&self, emb: &GroupEmbedding) -> Result<EquivariantComplex, ComplexError> {
        let pieces = self
            .pieces
            .iter()
            .map(|p| p.induce(emb))
            .collect::<Result<Vec<_>, _>>()?;
        let index = emb.index();
        let differentials = self
            .differentials
            .iter()
            .map(|d| Matrix::identity(index).kron(d))
            .collect();
        Ok(EquivariantComplex {
            group: emb.target().clone(),
            lowest: self.lowest,
            pieces,
            differentials,
        })
    }

    pub fn restrict(&self, emb: &GroupEmbedding) -> Result<EquivariantComplex, ComplexError> {
        let pieces = self
            .pieces
            .iter()
            .map(|p| p.restrict(emb))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(EquivariantComplex {
            group: emb.source().clone(),
            lowest: self.lowest,
            pieces,
            differentials: self.differentials.clone(),
        })
    }

    /// Degreewise direct sum.
    pub fn direct_sum(
        &self,
        other: &EquivariantComplex,
    ) -> Result<EquivariantComplex, ComplexError> {
        if !crate::reps::same_group(&self.group, &other.group) {
            return Err(ComplexError::IncompatibleGroups);
        }
        let lowest = self.lowest.min(other.lowest);
        let highest = self.highest().max(other.highest());
        let pieces = (lowest..=highest)
            .map(|k| self.piece_or_zero(k).direct_sum(&other.piece_or_zero(k)))
            .collect::<Result<Vec<_>, _>>()?;
        let differentials = (lowest..highest)
            .map(|k| Matrix::block_diag(&[self.differential(k), other.differential(k)]))
            .collect();
        Ok(EquivariantComplex {
            group: self.group.clone(),
            lowest,
            pieces,
            differentials,
        })
    }
}

/// Trace of `m` on the invariant subspace spanned by the columns of `basis`.
fn restricted_trace(m: &Matrix, basis: &Matrix) -> Cyclotomic {
    if basis.cols() == 0 {
        return Cyclotomic::zero();
    }
    basis
        .solve_in_span(&m.mul(basis))
        .expect("subspace is invariant")
        .trace()
}

#[cfg(test)]
mod tests;
