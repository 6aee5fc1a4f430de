use std::collections::BTreeMap;

use super::{sign, ComplexError, EquivariantComplex};
use crate::exactnum::{Cyclotomic, Matrix};

/// Degree-0 map of complexes `φ_k : E^k → F^k`; absent degrees are zero.
#[derive(Debug, Clone)]
pub struct ChainMap {
    source: EquivariantComplex,
    target: EquivariantComplex,
    maps: BTreeMap<i32, Matrix>,
}

impl ChainMap {
    /// Checks shapes, equivariance and `d_F φ = φ d_E` in every degree.
    pub fn new(
        source: EquivariantComplex,
        target: EquivariantComplex,
        maps: BTreeMap<i32, Matrix>,
    ) -> Result<Self, ComplexError> {
        if !crate::reps::same_group(source.group(), target.group()) {
            return Err(ComplexError::IncompatibleGroups);
        }
        for (&k, m) in &maps {
            if m.shape() != (target.dim_at(k), source.dim_at(k)) {
                return Err(ComplexError::Shape(format!(
                    "chain map component in degree {k} is {}x{}, expected {}x{}",
                    m.rows(),
                    m.cols(),
                    target.dim_at(k),
                    source.dim_at(k)
                )));
            }
        }
        let phi = ChainMap {
            source,
            target,
            maps,
        };
        let lo = phi.source.lowest().min(phi.target.lowest());
        let hi = phi.source.highest().max(phi.target.highest());
        for k in lo..=hi {
            let m = phi.component(k);
            if m.rows() > 0 && m.cols() > 0 {
                let src = phi.source.piece(k).expect("nonzero source");
                let dst = phi.target.piece(k).expect("nonzero target");
                if !src.is_equivariant_map(dst, &m) {
                    return Err(ComplexError::NotClosed(format!(
                        "component in degree {k} is not equivariant"
                    )));
                }
            }
            let lhs = phi.target.differential(k).mul(&m);
            let rhs = phi.component(k + 1).mul(&phi.source.differential(k));
            if lhs != rhs {
                return Err(ComplexError::NotClosed(format!(
                    "d φ != φ d from degree {k} to {}",
                    k + 1
                )));
            }
        }
        Ok(phi)
    }

    pub fn identity(c: &EquivariantComplex) -> Self {
        let maps = c
            .degrees()
            .map(|k| (k, Matrix::identity(c.dim_at(k))))
            .collect();
        ChainMap {
            source: c.clone(),
            target: c.clone(),
            maps,
        }
    }

    pub fn zero(
        source: &EquivariantComplex,
        target: &EquivariantComplex,
    ) -> Result<Self, ComplexError> {
        ChainMap::new(source.clone(), target.clone(), BTreeMap::new())
    }

    pub fn source(&self) -> &EquivariantComplex {
        &self.source
    }

    pub fn target(&self) -> &EquivariantComplex {
        &self.target
    }

    pub fn component(&self, k: i32) -> Matrix {
        self.maps
            .get(&k)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.target.dim_at(k), self.source.dim_at(k)))
    }

    /// `C^n = E^{n+1} ⊕ F^n` with `d(e, f) = (d_E e, (−1)^{n+1} φ e + d_F f)`.
    /// Under the alternating supertrace, `χ_s(C) = χ_s(F) − χ_s(E)`.
    pub fn mapping_cone(&self) -> Result<EquivariantComplex, ComplexError> {
        let (e, f) = (&self.source, &self.target);
        let lowest = (e.lowest() - 1).min(f.lowest());
        let highest = (e.highest() - 1).max(f.highest());
        let pieces = (lowest..=highest)
            .map(|n| e.piece_or_zero(n + 1).direct_sum(&f.piece_or_zero(n)))
            .collect::<Result<Vec<_>, _>>()?;
        let differentials = (lowest..highest)
            .map(|n| {
                let (e1, f0) = (e.dim_at(n + 1), f.dim_at(n));
                let (e2, f1) = (e.dim_at(n + 2), f.dim_at(n + 1));
                let mut d = Matrix::zeros(e2 + f1, e1 + f0);
                d.set_block(0, 0, &e.differential(n + 1));
                d.set_block(
                    e2,
                    0,
                    &self
                        .component(n + 1)
                        .scale(&Cyclotomic::from_int(sign(n + 1))),
                );
                d.set_block(e2, e1, &f.differential(n));
                d
            })
            .collect();
        EquivariantComplex::new(lowest, pieces, differentials)
    }
}
