//! Seeded random inputs: the subgroup corpus, representation pools, virtual
//! characters and equivariant complexes.

use std::collections::HashSet;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::complexes::EquivariantComplex;
use crate::exactnum::{Cyclotomic, Matrix};
use crate::groups::{FiniteGroup, GroupEmbedding};
use crate::reps::Representation;

/// S3, S4, D4, Q8 and C2 × C4.
pub fn corpus_groups() -> Vec<(&'static str, Arc<FiniteGroup>)> {
    vec![
        ("S3", Arc::new(FiniteGroup::symmetric(3))),
        ("S4", Arc::new(FiniteGroup::symmetric(4))),
        ("D4", Arc::new(FiniteGroup::dihedral(4))),
        ("Q8", Arc::new(FiniteGroup::quaternion())),
        (
            "C2xC4",
            Arc::new(FiniteGroup::direct_product(
                &FiniteGroup::cyclic(2),
                &FiniteGroup::cyclic(4),
            )),
        ),
    ]
}

/// Every subgroup inclusion `G ⊆ H` for `H` in [`corpus_groups`].
pub fn corpus_pairs() -> Vec<(String, GroupEmbedding)> {
    let mut out = Vec::new();
    for (name, h) in corpus_groups() {
        for (i, sub) in h.subgroups().iter().enumerate() {
            let emb = GroupEmbedding::subgroup(&h, sub).expect("subgroup");
            out.push((format!("{name}/sub{i}(order {})", sub.len()), emb));
        }
    }
    out
}

/// Small unitary representations of one group to draw from.
#[derive(Debug, Clone)]
pub struct RepPool {
    group: Arc<FiniteGroup>,
    reps: Vec<Representation>,
}

impl RepPool {
    /// Trivial and natural representations, top exterior power of the
    /// natural one, and representations induced from characters of cyclic
    /// subgroups, all of dimension at most `max_dim`.
    pub fn new(group: &Arc<FiniteGroup>, max_dim: usize) -> Self {
        let mut reps = vec![Representation::trivial(group)];
        if let Some(nat) = Representation::natural(group) {
            if nat.dim() <= crate::reps::EXTERIOR_DIM_CAP {
                reps.push(nat.exterior_power(nat.dim()).expect("top power"));
                if nat.dim() >= 2 && binomial(nat.dim(), 2) <= max_dim {
                    reps.push(nat.exterior_power(2).expect("second power"));
                }
            }
            if nat.dim() <= max_dim {
                reps.push(nat);
            }
        }
        let mut seen: HashSet<Vec<usize>> = HashSet::new();
        for x in group.elements() {
            let cyc = group.generated_subgroup(&[x]);
            if group.order() / cyc.len() > max_dim || !seen.insert(cyc.clone()) {
                continue;
            }
            let emb = GroupEmbedding::subgroup(group, &cyc).expect("cyclic subgroup");
            let m = cyc.len();
            let small = emb.source();
            let base = emb.preimage(x).expect("element of the subgroup");
            for j in 0..m {
                let value = Cyclotomic::root_of_unity(m as u32, j as i64);
                let line = Representation::from_generator_images(
                    small.clone(),
                    1,
                    &small_generator_images(small, base, &value),
                )
                .expect("linear character");
                reps.push(line.induce(&emb).expect("induce"));
            }
        }
        RepPool {
            group: group.clone(),
            reps,
        }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn reps(&self) -> &[Representation] {
        &self.reps
    }

    /// Direct sum of one or two pool members with total dimension at most `max_dim`.
    pub fn random_rep(&self, rng: &mut impl Rng, max_dim: usize) -> Representation {
        let fits: Vec<&Representation> = self.reps.iter().filter(|r| r.dim() <= max_dim).collect();
        let first = (*fits.choose(rng).expect("pool has the trivial rep")).clone();
        if rng.gen_bool(0.5) {
            let rest: Vec<&&Representation> = fits
                .iter()
                .filter(|r| r.dim() + first.dim() <= max_dim)
                .collect();
            if let Some(second) = rest.choose(rng) {
                return first.direct_sum(second).expect("same group");
            }
        }
        first
    }

    /// A virtual representation `A − B`.
    pub fn random_virtual(
        &self,
        rng: &mut impl Rng,
        max_dim: usize,
    ) -> (Representation, Representation) {
        let a = self.random_rep(rng, max_dim);
        let b = if rng.gen_bool(0.3) {
            Representation::zero(&self.group)
        } else {
            self.random_rep(rng, max_dim)
        };
        (a, b)
    }

    /// A random complex spanning at most `amplitude` degrees with pieces of
    /// dimension at most `max_dim`. Built from a split model `H ⊕ C ⊕ D` with
    /// `D^k ≅ C^{k+1}`, then conjugated degreewise by random equivariant
    /// automorphisms.
    pub fn random_complex(
        &self,
        rng: &mut impl Rng,
        amplitude: usize,
        max_dim: usize,
    ) -> EquivariantComplex {
        let len = rng.gen_range(1..=amplitude.max(1));
        let lowest = rng.gen_range(-2..=1);
        let zero = Representation::zero(&self.group);
        // links[k] joins degree k to k + 1
        let mut homology = Vec::with_capacity(len);
        let mut links: Vec<Representation> = Vec::with_capacity(len.saturating_sub(1));
        let mut used = vec![0usize; len];
        for k in 0..len {
            if k + 1 < len && rng.gen_bool(0.7) {
                let room = max_dim - used[k].max(used[k + 1]);
                if room > 0 {
                    let link = self.random_rep(rng, room);
                    used[k] += link.dim();
                    used[k + 1] += link.dim();
                    links.push(link);
                } else {
                    links.push(zero.clone());
                }
            } else if k + 1 < len {
                links.push(zero.clone());
            }
        }
        for u in used.iter_mut() {
            let room = max_dim - *u;
            if room > 0 && rng.gen_bool(0.6) {
                let h = self.random_rep(rng, room);
                *u += h.dim();
                homology.push(h);
            } else {
                homology.push(zero.clone());
            }
        }
        // piece k = H^k ⊕ C^k ⊕ D^k where C^k = links[k-1], D^k = links[k]
        let pieces: Vec<Representation> = (0..len)
            .map(|k| {
                let c = if k > 0 {
                    links[k - 1].clone()
                } else {
                    zero.clone()
                };
                let d = if k + 1 < len {
                    links[k].clone()
                } else {
                    zero.clone()
                };
                homology[k]
                    .direct_sum(&c)
                    .and_then(|x| x.direct_sum(&d))
                    .expect("same group")
            })
            .collect();
        let differentials: Vec<Matrix> = (0..len.saturating_sub(1))
            .map(|k| {
                let link = links[k].dim();
                let h_next = homology[k + 1].dim();
                let mut d = Matrix::zeros(pieces[k + 1].dim(), pieces[k].dim());
                let src = pieces[k].dim() - link;
                d.set_block(h_next, src, &Matrix::identity(link));
                d
            })
            .collect();
        let autos: Vec<Matrix> = pieces.iter().map(|p| random_automorphism(p, rng)).collect();
        let differentials = differentials
            .iter()
            .enumerate()
            .map(|(k, d)| {
                autos[k + 1]
                    .mul(d)
                    .mul(&autos[k].inverse().expect("invertible"))
            })
            .collect();
        EquivariantComplex::new(lowest, pieces, differentials).expect("random complex is valid")
    }
}

/// Equivariant invertible map of `rep` to itself: the Reynolds average of a
/// random small integer matrix, retried until invertible.
pub fn random_automorphism(rep: &Representation, rng: &mut impl Rng) -> Matrix {
    let d = rep.dim();
    loop {
        let m = Matrix::from_fn(d, d, |_, _| Cyclotomic::from_int(rng.gen_range(-2..=2)));
        let avg = rep.reynolds(rep, &m);
        if avg.rank() == d {
            return avg;
        }
    }
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Matrices for the generators of a cyclic group `small` sending the
/// element `base` to `value`.
fn small_generator_images(small: &FiniteGroup, base: usize, value: &Cyclotomic) -> Vec<Matrix> {
    small
        .generators()
        .iter()
        .map(|&s| {
            let k = (0..small.order() as i64)
                .find(|&k| small.pow(base, k) == s)
                .expect("cyclic group generated by base");
            Matrix::scalar(1, &value.pow(k as u32))
        })
        .collect()
}
