use std::collections::VecDeque;
use std::sync::Arc;

use super::{FiniteGroup, GroupError};

/// Injective homomorphism `source → target`, stored elementwise.
#[derive(Debug, Clone)]
pub struct GroupEmbedding {
    source: Arc<FiniteGroup>,
    target: Arc<FiniteGroup>,
    map: Vec<usize>,
    preimage: Vec<Option<usize>>,
}

/// Where each source class lands, and which source classes land in each
/// target class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassFusion {
    pub map: Vec<usize>,
    pub fibers: Vec<Vec<usize>>,
}

impl GroupEmbedding {
    pub fn new(
        source: Arc<FiniteGroup>,
        target: Arc<FiniteGroup>,
        map: Vec<usize>,
    ) -> Result<Self, GroupError> {
        if map.len() != source.order() {
            return Err(GroupError::Mismatch(format!(
                "map has {} entries for a group of order {}",
                map.len(),
                source.order()
            )));
        }
        if let Some(&bad) = map.iter().find(|&&h| h >= target.order()) {
            return Err(GroupError::Mismatch(format!(
                "image {bad} is not an element of the target"
            )));
        }
        let mut preimage = vec![None; target.order()];
        for (g, &h) in map.iter().enumerate() {
            if let Some(prev) = preimage[h] {
                return Err(GroupError::NotInjective(prev, g));
            }
            preimage[h] = Some(g);
        }
        if map[source.identity()] != target.identity() {
            return Err(GroupError::NotHomomorphism(
                source.identity(),
                source.identity(),
            ));
        }
        for a in source.elements() {
            for b in source.elements() {
                if map[source.mul(a, b)] != target.mul(map[a], map[b]) {
                    return Err(GroupError::NotHomomorphism(a, b));
                }
            }
        }
        Ok(GroupEmbedding {
            source,
            target,
            map,
            preimage,
        })
    }

    pub fn identity(group: &Arc<FiniteGroup>) -> Self {
        let map: Vec<usize> = group.elements().collect();
        GroupEmbedding {
            source: group.clone(),
            target: group.clone(),
            preimage: map.iter().map(|&x| Some(x)).collect(),
            map,
        }
    }

    /// Extends `generator → image` on the source generators to a homomorphism.
    pub fn from_generator_images(
        source: Arc<FiniteGroup>,
        target: Arc<FiniteGroup>,
        images: &[usize],
    ) -> Result<Self, GroupError> {
        let gens = source.generators();
        if images.len() != gens.len() {
            return Err(GroupError::Mismatch(format!(
                "{} generator images given for {} generators",
                images.len(),
                gens.len()
            )));
        }
        if let Some(&bad) = images.iter().find(|&&h| h >= target.order()) {
            return Err(GroupError::Mismatch(format!(
                "image {bad} is not an element of the target"
            )));
        }
        let mut map = vec![usize::MAX; source.order()];
        map[source.identity()] = target.identity();
        let mut queue = VecDeque::from([source.identity()]);
        while let Some(x) = queue.pop_front() {
            for (&s, &t) in gens.iter().zip(images) {
                let y = source.mul(s, x);
                let img = target.mul(t, map[x]);
                if map[y] == usize::MAX {
                    map[y] = img;
                    queue.push_back(y);
                } else if map[y] != img {
                    return Err(GroupError::NotHomomorphism(s, x));
                }
            }
        }
        GroupEmbedding::new(source, target, map)
    }

    /// Inclusion of the subgroup on `elements`, re-indexed in increasing order.
    pub fn subgroup(target: &Arc<FiniteGroup>, elements: &[usize]) -> Result<Self, GroupError> {
        let mut elems = elements.to_vec();
        elems.sort_unstable();
        elems.dedup();
        if elems.iter().any(|&x| x >= target.order()) || !target.is_subgroup(&elems) {
            return Err(GroupError::Mismatch(
                "elements do not form a subgroup".into(),
            ));
        }
        let index_of = |h: usize| elems.binary_search(&h).expect("closed subset");
        let n = elems.len();
        let mut table = vec![0u32; n * n];
        for (i, &a) in elems.iter().enumerate() {
            for (j, &b) in elems.iter().enumerate() {
                table[i * n + j] = index_of(target.mul(a, b)) as u32;
            }
        }
        let mut sub = FiniteGroup::assemble(n, table, index_of(target.identity()), Vec::new());
        sub.generators = sub.greedy_generators();
        if let Some(perms) = &target.perms {
            sub.perms = Some(elems.iter().map(|&h| perms[h].clone()).collect());
        }
        GroupEmbedding::new(Arc::new(sub), target.clone(), elems)
    }

    pub fn source(&self) -> &Arc<FiniteGroup> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteGroup> {
        &self.target
    }

    pub fn map(&self, g: usize) -> usize {
        self.map[g]
    }

    pub fn images(&self) -> &[usize] {
        &self.map
    }

    /// The source element mapping to `h`, if any.
    pub fn preimage(&self, h: usize) -> Option<usize> {
        self.preimage[h]
    }

    pub fn index(&self) -> usize {
        self.target.order() / self.source.order()
    }

    pub fn compose(&self, next: &GroupEmbedding) -> Result<GroupEmbedding, GroupError> {
        if *self.target != *next.source {
            return Err(GroupError::Mismatch("embeddings are not composable".into()));
        }
        let map = self.map.iter().map(|&h| next.map(h)).collect();
        GroupEmbedding::new(self.source.clone(), next.target.clone(), map)
    }

    pub fn fuse_classes(&self) -> ClassFusion {
        let sc = self.source.conjugacy();
        let tc = self.target.conjugacy();
        let map: Vec<usize> = sc
            .class_reps
            .iter()
            .map(|&g| tc.class_of[self.map[g]])
            .collect();
        let mut fibers = vec![Vec::new(); tc.num_classes()];
        for (c, &t) in map.iter().enumerate() {
            fibers[t].push(c);
        }
        ClassFusion { map, fibers }
    }

    /// One representative per left coset `r·G`, the smallest index in each.
    pub fn coset_reps(&self) -> Vec<usize> {
        let mut covered = vec![false; self.target.order()];
        let mut reps = Vec::with_capacity(self.index());
        for h in self.target.elements() {
            if covered[h] {
                continue;
            }
            reps.push(h);
            for &g in &self.map {
                covered[self.target.mul(h, g)] = true;
            }
        }
        reps
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s3() -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::symmetric(3))
    }

    fn of_order(g: &FiniteGroup, k: usize) -> usize {
        g.elements().find(|&a| g.element_order(a) == k).unwrap()
    }

    #[test]
    fn fusion_examples() {
        let h = s3();
        let t = of_order(&h, 2);
        let c2 = GroupEmbedding::subgroup(&h, &h.generated_subgroup(&[t])).unwrap();
        let fusion = c2.fuse_classes();
        let e_class = h.class_of(h.identity());
        assert_eq!(
            fusion.map[c2.source().class_of(c2.source().identity())],
            e_class
        );
        let nontrivial = c2.source().class_of(1 - c2.source().identity());
        assert_eq!(fusion.map[nontrivial], h.class_of(t));

        let r = of_order(&h, 3);
        let c3 = GroupEmbedding::subgroup(&h, &h.generated_subgroup(&[r])).unwrap();
        let fusion = c3.fuse_classes();
        assert_eq!(fusion.fibers[h.class_of(r)].len(), 2);
        // conjugation oracle: images of both nontrivial C3 elements are conjugate in S3
        let imgs: Vec<usize> = c3
            .images()
            .iter()
            .copied()
            .filter(|&x| x != h.identity())
            .collect();
        assert!(h.elements().any(|x| h.conjugate(x, imgs[0]) == imgs[1]));
    }

    #[test]
    fn coset_examples() {
        let h = s3();
        assert_eq!(
            GroupEmbedding::identity(&h).coset_reps(),
            vec![h.identity()]
        );
        let t = of_order(&h, 2);
        let c2 = GroupEmbedding::subgroup(&h, &h.generated_subgroup(&[t])).unwrap();
        assert_eq!(c2.coset_reps().len(), 3);
        let triv = GroupEmbedding::subgroup(&h, &[h.identity()]).unwrap();
        assert_eq!(triv.coset_reps(), (0..6).collect::<Vec<_>>());
    }

    #[test]
    fn generator_images_and_validation() {
        let c2 = Arc::new(FiniteGroup::cyclic(2));
        let c4 = Arc::new(FiniteGroup::cyclic(4));
        let square = c4.pow(c4.generators()[0], 2);
        let emb = GroupEmbedding::from_generator_images(c2.clone(), c4.clone(), &[square]).unwrap();
        assert_eq!(emb.index(), 2);
        assert!(GroupEmbedding::from_generator_images(
            c2.clone(),
            c4.clone(),
            &[c4.generators()[0]]
        )
        .is_err());
        assert!(matches!(
            GroupEmbedding::new(c2, c4.clone(), vec![0, 0]),
            Err(GroupError::NotInjective(0, 1))
        ));
    }
}
