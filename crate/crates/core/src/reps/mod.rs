//! Matrix representations over cyclotomic numbers and their characters.

mod character;
mod functors;

use std::collections::VecDeque;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::exactnum::{Cyclotomic, ExactError, Matrix};
use crate::groups::{FiniteGroup, GroupError};

pub use character::VirtualCharacter;

/// Groups up to this order get an exhaustive homomorphism check.
const EXHAUSTIVE_LIMIT: usize = 60;
const SAMPLED_PAIRS: usize = 1_000;
/// Largest dimension for which exterior powers are built.
pub const EXTERIOR_DIM_CAP: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RepError {
    #[error("representations live over different groups")]
    IncompatibleGroups,
    #[error("not a homomorphism: rho({0}*{1}) != rho({0})*rho({1})")]
    NotHomomorphism(usize, usize),
    #[error("rho(identity) is not the identity matrix")]
    IdentityNotIdentity,
    #[error("shape error: {0}")]
    Shape(String),
    #[error("dimension {dim} exceeds the exterior power cap {cap}")]
    TooLarge { dim: usize, cap: usize },
    #[error("subspace is not invariant under element {0}")]
    NotInvariant(usize),
    #[error("value at the identity is not an integer")]
    NotIntegral,
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

#[derive(Debug, Clone)]
pub struct Representation {
    group: Arc<FiniteGroup>,
    dim: usize,
    matrices: Vec<Matrix>,
}

pub(crate) fn same_group(a: &Arc<FiniteGroup>, b: &Arc<FiniteGroup>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl Representation {
    /// One matrix per group element, validated.
    pub fn new(
        group: Arc<FiniteGroup>,
        dim: usize,
        matrices: Vec<Matrix>,
    ) -> Result<Self, RepError> {
        if matrices.len() != group.order() {
            return Err(RepError::Shape(format!(
                "{} matrices for a group of order {}",
                matrices.len(),
                group.order()
            )));
        }
        if let Some(m) = matrices.iter().find(|m| m.shape() != (dim, dim)) {
            return Err(RepError::Shape(format!(
                "expected {dim}x{dim} matrices, found {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        let rep = Representation {
            group,
            dim,
            matrices,
        };
        rep.validate()?;
        Ok(rep)
    }

    pub(crate) fn new_unchecked(
        group: Arc<FiniteGroup>,
        dim: usize,
        matrices: Vec<Matrix>,
    ) -> Self {
        debug_assert_eq!(matrices.len(), group.order());
        Representation {
            group,
            dim,
            matrices,
        }
    }

    /// Extends matrices given on the group's generators.
    pub fn from_generator_images(
        group: Arc<FiniteGroup>,
        dim: usize,
        images: &[Matrix],
    ) -> Result<Self, RepError> {
        let gens = group.generators().to_vec();
        if images.len() != gens.len() {
            return Err(RepError::Shape(format!(
                "{} generator matrices for {} generators",
                images.len(),
                gens.len()
            )));
        }
        if let Some(m) = images.iter().find(|m| m.shape() != (dim, dim)) {
            return Err(RepError::Shape(format!(
                "expected {dim}x{dim} matrices, found {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        let mut slots: Vec<Option<Matrix>> = vec![None; group.order()];
        slots[group.identity()] = Some(Matrix::identity(dim));
        let mut queue = VecDeque::from([group.identity()]);
        while let Some(x) = queue.pop_front() {
            for (&s, m) in gens.iter().zip(images) {
                let y = group.mul(s, x);
                let img = m.mul(slots[x].as_ref().expect("visited"));
                match &slots[y] {
                    None => {
                        slots[y] = Some(img);
                        queue.push_back(y);
                    }
                    Some(existing) if *existing != img => {
                        return Err(RepError::NotHomomorphism(s, x));
                    }
                    Some(_) => {}
                }
            }
        }
        let matrices = slots
            .into_iter()
            .map(|m| m.expect("generators span"))
            .collect();
        Representation::new(group, dim, matrices)
    }

    pub fn trivial(group: &Arc<FiniteGroup>) -> Self {
        Representation::scalar_line(group, |_| Cyclotomic::one())
    }

    pub fn zero(group: &Arc<FiniteGroup>) -> Self {
        Representation::new_unchecked(group.clone(), 0, vec![Matrix::zeros(0, 0); group.order()])
    }

    /// Permutation representation of an action on `0..points`: `ρ(g) e_x = e_{act(g, x)}`.
    pub fn permutation(
        group: &Arc<FiniteGroup>,
        points: usize,
        act: impl Fn(usize, usize) -> usize,
    ) -> Self {
        let matrices = group
            .elements()
            .map(|g| {
                let mut m = Matrix::zeros(points, points);
                for x in 0..points {
                    m[(act(g, x), x)] = Cyclotomic::one();
                }
                m
            })
            .collect();
        Representation::new_unchecked(group.clone(), points, matrices)
    }

    pub fn regular(group: &Arc<FiniteGroup>) -> Self {
        let g2 = group.clone();
        Representation::permutation(group, group.order(), move |g, x| g2.mul(g, x))
    }

    /// The defining permutation representation, when the group has one.
    pub fn natural(group: &Arc<FiniteGroup>) -> Option<Self> {
        let degree = group.permutation(group.identity())?.len();
        let g2 = group.clone();
        Some(Representation::permutation(group, degree, move |g, x| {
            g2.permutation(g).expect("labelled")[x]
        }))
    }

    /// One-dimensional representation with the given value per element.
    /// The values must form a homomorphism.
    pub fn linear(group: &Arc<FiniteGroup>, values: Vec<Cyclotomic>) -> Result<Self, RepError> {
        let matrices = values.into_iter().map(|v| Matrix::scalar(1, &v)).collect();
        Representation::new(group.clone(), 1, matrices)
    }

    fn scalar_line(group: &Arc<FiniteGroup>, f: impl Fn(usize) -> Cyclotomic) -> Self {
        let matrices = group.elements().map(|g| Matrix::scalar(1, &f(g))).collect();
        Representation::new_unchecked(group.clone(), 1, matrices)
    }

    /// Checks ρ(e) = I and ρ(ab) = ρ(a)ρ(b); exhaustive for small groups,
    /// sampled otherwise.
    pub fn validate(&self) -> Result<(), RepError> {
        let g = &self.group;
        if !self.matrices[g.identity()].is_identity() {
            return Err(RepError::IdentityNotIdentity);
        }
        let check = |a: usize, b: usize| {
            if self.matrices[g.mul(a, b)] == self.matrices[a].mul(&self.matrices[b]) {
                Ok(())
            } else {
                Err(RepError::NotHomomorphism(a, b))
            }
        };
        if g.order() <= EXHAUSTIVE_LIMIT {
            for a in g.elements() {
                for b in g.elements() {
                    check(a, b)?;
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0xc4a2);
            for _ in 0..SAMPLED_PAIRS {
                check(rng.gen_range(0..g.order()), rng.gen_range(0..g.order()))?;
            }
        }
        Ok(())
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self, g: usize) -> &Matrix {
        &self.matrices[g]
    }

    pub fn matrices(&self) -> &[Matrix] {
        &self.matrices
    }

    pub fn trace_at(&self, g: usize) -> Cyclotomic {
        self.matrices[g].trace()
    }

    pub fn character(&self) -> VirtualCharacter {
        let reps = &self.group.conjugacy().class_reps;
        VirtualCharacter::new_unchecked(
            self.group.clone(),
            reps.iter().map(|&g| self.trace_at(g)).collect(),
        )
    }

    /// Whether `map: self → other` intertwines the two actions.
    pub fn is_equivariant_map(&self, other: &Representation, map: &Matrix) -> bool {
        same_group(&self.group, &other.group)
            && map.shape() == (other.dim, self.dim)
            && self
                .group
                .elements()
                .all(|g| map.mul(&self.matrices[g]) == other.matrices[g].mul(map))
    }

    /// Averages `map` over the group so that it becomes equivariant.
    pub fn reynolds(&self, other: &Representation, map: &Matrix) -> Matrix {
        let mut acc = Matrix::zeros(other.dim, self.dim);
        for g in self.group.elements() {
            let gi = self.group.inv(g);
            acc = acc.add(&other.matrices[g].mul(map).mul(&self.matrices[gi]));
        }
        let n = Cyclotomic::from_int(self.group.order() as i64);
        acc.scale(&n.invert().expect("nonzero order"))
    }
}

impl PartialEq for Representation {
    fn eq(&self, other: &Self) -> bool {
        same_group(&self.group, &other.group)
            && self.dim == other.dim
            && self.matrices == other.matrices
    }
}
