//! Linear charts `[V/G]`: fixed subspaces, eigenspaces and inertia components.

use std::sync::Arc;

use serde::Serialize;

use crate::exactnum::{Matrix, RootOfUnity};
use crate::groups::{FiniteGroup, GroupEmbedding};
use crate::reps::{RepError, Representation};

#[derive(Debug, Clone)]
pub struct LinearChart {
    action: Representation,
}

#[derive(Debug, Clone)]
pub struct EigenSpace {
    pub eigenvalue: RootOfUnity,
    pub multiplicity: usize,
    /// Columns span the eigenspace.
    pub basis: Matrix,
}

/// Eigenspaces of one group element, ordered by the exponent of the
/// eigenvalue as a power of `ζ_m`, `m` the order of the element.
#[derive(Debug, Clone)]
pub struct EigenData {
    pub spaces: Vec<EigenSpace>,
}

impl EigenData {
    pub fn total_multiplicity(&self) -> usize {
        self.spaces.iter().map(|s| s.multiplicity).sum()
    }

    pub fn multiplicity_of(&self, z: &RootOfUnity) -> usize {
        self.spaces
            .iter()
            .find(|s| s.eigenvalue == *z)
            .map_or(0, |s| s.multiplicity)
    }

    /// `(eigenvalue, multiplicity)` pairs.
    pub fn spectrum(&self) -> Vec<(RootOfUnity, usize)> {
        self.spaces
            .iter()
            .map(|s| (s.eigenvalue, s.multiplicity))
            .collect()
    }

    /// One entry per eigen-line, eigenvalues repeated by multiplicity.
    pub fn lines(&self) -> Vec<RootOfUnity> {
        self.spaces
            .iter()
            .flat_map(|s| std::iter::repeat_n(s.eigenvalue, s.multiplicity))
            .collect()
    }

    pub fn without_one(&self) -> EigenData {
        EigenData {
            spaces: self
                .spaces
                .iter()
                .filter(|s| !s.eigenvalue.is_one())
                .cloned()
                .collect(),
        }
    }

    /// Same eigenvalues with the same multiplicities.
    pub fn same_spectrum(&self, other: &EigenData) -> bool {
        let mut a = self.spectrum();
        let mut b = other.spectrum();
        a.sort_by_key(|(z, _)| (z.order(), z.exponent()));
        b.sort_by_key(|(z, _)| (z.order(), z.exponent()));
        a == b
    }
}

/// Data of the inertia component of one conjugacy class.
#[derive(Debug, Clone)]
pub struct InertiaComponent {
    pub class: usize,
    pub element: usize,
    pub centralizer: Vec<usize>,
    pub fixed_dim: usize,
    pub fixed_basis: Matrix,
    pub normal_eigen: EigenData,
    /// Whether every centralizer element maps `V^g` into itself.
    pub centralizer_invariant: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct InertiaSummary {
    pub class: usize,
    pub element: usize,
    pub label: String,
    pub centralizer_order: usize,
    pub fixed_dim: usize,
    pub normal: Vec<(String, usize)>,
    pub centralizer_invariant: bool,
}

impl InertiaComponent {
    pub fn summary(&self, group: &FiniteGroup) -> InertiaSummary {
        InertiaSummary {
            class: self.class,
            element: self.element,
            label: group.element_label(self.element),
            centralizer_order: self.centralizer.len(),
            fixed_dim: self.fixed_dim,
            normal: self
                .normal_eigen
                .spectrum()
                .into_iter()
                .map(|(z, m)| (z.to_string(), m))
                .collect(),
            centralizer_invariant: self.centralizer_invariant,
        }
    }
}

impl LinearChart {
    pub fn new(action: Representation) -> Self {
        LinearChart { action }
    }

    /// `[pt/G]`
    pub fn point(group: &Arc<FiniteGroup>) -> Self {
        LinearChart::new(Representation::zero(group))
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.action.group()
    }

    pub fn action(&self) -> &Representation {
        &self.action
    }

    pub fn dim(&self) -> usize {
        self.action.dim()
    }

    /// Basis of `ker(ρ(g) − I)`.
    pub fn fixed_subspace(&self, g: usize) -> Matrix {
        self.eigenspace(g, &RootOfUnity::one())
    }

    fn eigenspace(&self, g: usize, z: &RootOfUnity) -> Matrix {
        let shifted = self
            .action
            .matrix(g)
            .sub(&Matrix::scalar(self.dim(), &z.to_cyclotomic()));
        shifted.kernel()
    }

    /// Eigenspaces over all `m`-th roots of unity, `m` the order of `g`.
    pub fn eigen_decomposition(&self, g: usize) -> EigenData {
        let m = self.group().element_order(g) as u32;
        let spaces = (0..m as i64)
            .filter_map(|j| {
                let z = RootOfUnity::new(m, j);
                let basis = self.eigenspace(g, &z);
                (basis.cols() > 0).then(|| EigenSpace {
                    eigenvalue: z,
                    multiplicity: basis.cols(),
                    basis,
                })
            })
            .collect();
        EigenData { spaces }
    }

    /// One component per conjugacy class, in class order.
    pub fn inertia_data(&self) -> Vec<InertiaComponent> {
        let conj = self.group().conjugacy();
        conj.class_reps
            .iter()
            .enumerate()
            .map(|(class, &g)| {
                let eigen = self.eigen_decomposition(g);
                let fixed_basis = self.fixed_subspace(g);
                let centralizer = conj.centralizers[class].clone();
                let centralizer_invariant = fixed_basis.cols() == 0
                    || centralizer.iter().all(|&z| {
                        fixed_basis
                            .solve_in_span(&self.action.matrix(z).mul(&fixed_basis))
                            .is_some()
                    });
                InertiaComponent {
                    class,
                    element: g,
                    fixed_dim: fixed_basis.cols(),
                    fixed_basis,
                    normal_eigen: eigen.without_one(),
                    centralizer,
                    centralizer_invariant,
                }
            })
            .collect()
    }

    /// The centralizer `Z_G(g)` acting on `V^g`, as a chart of its own.
    pub fn fixed_chart(
        &self,
        component: &InertiaComponent,
    ) -> Result<(GroupEmbedding, LinearChart), RepError> {
        let emb = GroupEmbedding::subgroup(self.group(), &component.centralizer)?;
        let restricted = self.action.restrict(&emb)?;
        let action = restricted.subrepresentation(&component.fixed_basis)?;
        Ok((emb, LinearChart::new(action)))
    }
}
