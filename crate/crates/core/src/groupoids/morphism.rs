//! Generalized morphisms `G₀ ← Z → H₀` and the embedding taxonomy.

use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use serde::Serialize;

use super::{same_groupoid, FiniteGroupoid, Functor, GroupoidError};

/// `Z` with a left `G`-action over `ρ` and a free right `H`-action over `σ`.
#[derive(Debug, Clone)]
pub struct GeneralizedMorphism {
    source: Arc<FiniteGroupoid>,
    target: Arc<FiniteGroupoid>,
    rho: Vec<usize>,
    sigma: Vec<usize>,
    left: Table,
    right: Table,
}

/// Partial map on `0..rows × 0..cols`, stored densely.
#[derive(Debug, Clone)]
struct Table {
    cols: usize,
    data: Vec<usize>,
}

impl Table {
    fn new(rows: usize, cols: usize) -> Self {
        Table {
            cols,
            data: vec![usize::MAX; rows * cols],
        }
    }

    fn insert(&mut self, (i, j): (usize, usize), v: usize) {
        self.data[i * self.cols + j] = v;
    }

    fn get(&self, &(i, j): &(usize, usize)) -> Option<&usize> {
        if j >= self.cols {
            return None;
        }
        self.data
            .get(i * self.cols + j)
            .filter(|&&v| v != usize::MAX)
    }

    /// Defined entries in key order.
    fn iter(&self) -> impl Iterator<Item = ((usize, usize), usize)> + '_ {
        self.data
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != usize::MAX)
            .map(move |(k, &v)| ((k / self.cols, k % self.cols), v))
    }
}

impl std::ops::Index<&(usize, usize)> for Table {
    type Output = usize;

    fn index(&self, key: &(usize, usize)) -> &usize {
        self.get(key).expect("action defined")
    }
}

/// Counts for the comparison `φ: G̃ → H̃` of pullback groupoids over `Z`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PullbackComparison {
    pub g_arrows: usize,
    pub h_arrows: usize,
    pub injective: bool,
    pub saturated: bool,
    pub bijective: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EmbeddingFlags {
    pub embedding: bool,
    pub iso_spatial: bool,
    pub stabilizer_preserving: bool,
}

/// `f = second ∘ first` with `first: G → H|_{σ(Z)}` and `second` the comma of the inclusion.
#[derive(Debug, Clone)]
pub struct Factorization {
    pub image: Arc<FiniteGroupoid>,
    pub first: GeneralizedMorphism,
    pub second: GeneralizedMorphism,
}

impl GeneralizedMorphism {
    /// Tabulates both actions on every defined pair and checks the axioms.
    pub fn new(
        source: Arc<FiniteGroupoid>,
        target: Arc<FiniteGroupoid>,
        rho: Vec<usize>,
        sigma: Vec<usize>,
        left: impl Fn(usize, usize) -> usize,
        right: impl Fn(usize, usize) -> usize,
    ) -> Result<Self, GroupoidError> {
        let m = GeneralizedMorphism::assemble(source, target, rho, sigma, left, right)?;
        m.check_axioms()?;
        Ok(m)
    }

    /// Tabulates without the axiom pass, for constructions that satisfy the
    /// axioms whenever their inputs do.
    fn assemble(
        source: Arc<FiniteGroupoid>,
        target: Arc<FiniteGroupoid>,
        rho: Vec<usize>,
        sigma: Vec<usize>,
        left: impl Fn(usize, usize) -> usize,
        right: impl Fn(usize, usize) -> usize,
    ) -> Result<Self, GroupoidError> {
        let size = rho.len();
        if sigma.len() != size {
            return Err(GroupoidError::NotAMorphism("ρ and σ lengths differ".into()));
        }
        if rho.iter().any(|&x| x >= source.num_objects())
            || sigma.iter().any(|&y| y >= target.num_objects())
        {
            return Err(GroupoidError::NotAMorphism("anchor out of range".into()));
        }
        let mut l = Table::new(source.num_arrows(), size);
        let mut r = Table::new(size, target.num_arrows());
        for z in 0..size {
            for &g in source.arrows_from(rho[z]) {
                l.insert((g, z), left(g, z));
            }
            for &h in target.arrows_to(sigma[z]) {
                r.insert((z, h), right(z, h));
            }
        }
        Ok(GeneralizedMorphism {
            source,
            target,
            rho,
            sigma,
            left: l,
            right: r,
        })
    }

    /// Checks that both actions are associative, unital and commute, that the
    /// right action is free and that `ρ` identifies `Z/H` with the objects of `G`.
    pub fn check_axioms(&self) -> Result<(), GroupoidError> {
        let (g, h) = (&self.source, &self.target);
        let err = |s: String| Err(GroupoidError::NotAMorphism(s));
        for ((a, z), w) in self.left.iter() {
            if w >= self.size() || self.rho[w] != g.target(a) || self.sigma[w] != self.sigma[z] {
                return err(format!("left action of {a} on {z} leaves its fiber"));
            }
            if g.is_unit(a) && w != z {
                return err(format!("unit {a} moves {z}"));
            }
            for &b in g.arrows_from(g.target(a)) {
                if self.left[&(b, w)] != self.left[&(g.compose(b, a).expect("composable"), z)] {
                    return err(format!("left action not associative at ({b}, {a}, {z})"));
                }
            }
            for &k in h.arrows_to(self.sigma[z]) {
                if self.right[&(w, k)] != self.left[&(a, self.right[&(z, k)])] {
                    return err(format!("actions do not commute at ({a}, {z}, {k})"));
                }
            }
        }
        for ((z, b), w) in self.right.iter() {
            if w >= self.size() || self.sigma[w] != h.source(b) || self.rho[w] != self.rho[z] {
                return err(format!("right action of {b} on {z} leaves its fiber"));
            }
            if h.is_unit(b) && w != z {
                return err(format!("unit {b} moves {z}"));
            }
            for &c in h.arrows_to(h.source(b)) {
                if self.right[&(w, c)] != self.right[&(z, h.compose(b, c).expect("composable"))] {
                    return err(format!("right action not associative at ({z}, {b}, {c})"));
                }
            }
        }
        for z in 0..self.size() {
            let mut images: Vec<usize> = h
                .arrows_to(self.sigma[z])
                .iter()
                .map(|&b| self.right[&(z, b)])
                .collect();
            let n = images.len();
            images.sort_unstable();
            images.dedup();
            if images.len() != n {
                return err(format!("right action not free at {z}"));
            }
        }
        let orbits = self.right_orbits();
        let mut hit = vec![false; g.num_objects()];
        for orbit in &orbits {
            if orbit.iter().any(|&z| self.rho[z] != self.rho[orbit[0]]) {
                return err("ρ not constant on an H-orbit".into());
            }
            if std::mem::replace(&mut hit[self.rho[orbit[0]]], true) {
                return err(format!("two H-orbits over object {}", self.rho[orbit[0]]));
            }
        }
        if hit.iter().any(|&b| !b) {
            return err("ρ is not surjective".into());
        }
        Ok(())
    }

    fn right_orbits(&self) -> Vec<Vec<usize>> {
        self.orbits_by(|z| {
            self.target
                .arrows_to(self.sigma[z])
                .iter()
                .map(|&b| self.right[&(z, b)])
                .collect()
        })
    }

    fn left_orbits(&self) -> Vec<Vec<usize>> {
        self.orbits_by(|z| {
            self.source
                .arrows_from(self.rho[z])
                .iter()
                .map(|&a| self.left[&(a, z)])
                .collect()
        })
    }

    fn orbits_by(&self, step: impl Fn(usize) -> Vec<usize>) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.size()];
        let mut out = Vec::new();
        for start in 0..self.size() {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut orbit = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(z) = queue.pop_front() {
                for w in step(z) {
                    if !seen[w] {
                        seen[w] = true;
                        orbit.push(w);
                        queue.push_back(w);
                    }
                }
            }
            orbit.sort_unstable();
            out.push(orbit);
        }
        out
    }

    /// `C = {(x, h) : f(x) = t(h)}`, with `g(x, h) = (t(g), f(g)h)` and `(x, h)k = (x, hk)`.
    pub fn comma(f: &Functor) -> Result<Self, GroupoidError> {
        let (g, h) = (f.source(), f.target());
        let elems: Vec<(usize, usize)> = (0..g.num_objects())
            .flat_map(|x| h.arrows_to(f.object(x)).iter().map(move |&a| (x, a)))
            .collect();
        let index: HashMap<(usize, usize), usize> =
            elems.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        GeneralizedMorphism::assemble(
            g.clone(),
            h.clone(),
            elems.iter().map(|e| e.0).collect(),
            elems.iter().map(|e| h.source(e.1)).collect(),
            |a, z| {
                let (_, k) = elems[z];
                index[&(g.target(a), h.compose(f.arrow(a), k).expect("composable"))]
            },
            |z, b| {
                let (x, k) = elems[z];
                index[&(x, h.compose(k, b).expect("composable"))]
            },
        )
    }

    pub fn identity(g: &Arc<FiniteGroupoid>) -> Self {
        GeneralizedMorphism::comma(&Functor::identity(g)).expect("identity functor")
    }

    pub fn source(&self) -> &Arc<FiniteGroupoid> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteGroupoid> {
        &self.target
    }

    pub fn size(&self) -> usize {
        self.rho.len()
    }

    pub fn rho(&self, z: usize) -> usize {
        self.rho[z]
    }

    pub fn sigma(&self, z: usize) -> usize {
        self.sigma[z]
    }

    /// `g·z`, when `s(g) = ρ(z)`.
    pub fn act_left(&self, g: usize, z: usize) -> Option<usize> {
        self.left.get(&(g, z)).copied()
    }

    /// `z·h`, when `σ(z) = t(h)`.
    pub fn act_right(&self, z: usize, h: usize) -> Option<usize> {
        self.right.get(&(z, h)).copied()
    }

    /// The unique `h` with `w = z·h`, if any.
    pub fn right_quotient(&self, z: usize, w: usize) -> Option<usize> {
        self.target
            .arrows_to(self.sigma[z])
            .iter()
            .copied()
            .find(|&h| self.right[&(z, h)] == w)
    }

    /// `Y = {(z, w) : σ(z) = τ(w)} / H` with `(z, w) ~ (zh, h⁻¹w)`.
    pub fn compose(
        &self,
        next: &GeneralizedMorphism,
    ) -> Result<GeneralizedMorphism, GroupoidError> {
        if !same_groupoid(&self.target, &next.source) {
            return Err(GroupoidError::Mismatch(
                "morphisms are not composable".into(),
            ));
        }
        let h = &self.target;
        let pairs: Vec<(usize, usize)> = (0..self.size())
            .flat_map(|z| {
                (0..next.size())
                    .filter(move |&w| self.sigma[z] == next.rho[w])
                    .map(move |w| (z, w))
            })
            .collect();
        let pair_index: HashMap<(usize, usize), usize> =
            pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let mut class = vec![usize::MAX; pairs.len()];
        let mut reps = Vec::new();
        for start in 0..pairs.len() {
            if class[start] != usize::MAX {
                continue;
            }
            let id = reps.len();
            reps.push(pairs[start]);
            let (z, w) = pairs[start];
            for &k in h.arrows_to(self.sigma[z]) {
                let moved = (self.right[&(z, k)], next.left[&(h.inverse(k), w)]);
                class[pair_index[&moved]] = id;
            }
        }
        let class_of = |z: usize, w: usize| class[pair_index[&(z, w)]];
        GeneralizedMorphism::assemble(
            self.source.clone(),
            next.target.clone(),
            reps.iter().map(|&(z, _)| self.rho[z]).collect(),
            reps.iter().map(|&(_, w)| next.sigma[w]).collect(),
            |a, y| {
                let (z, w) = reps[y];
                class_of(self.left[&(a, z)], w)
            },
            |y, b| {
                let (z, w) = reps[y];
                class_of(z, next.right[&(w, b)])
            },
        )
    }

    /// `Gr(Z) = {(g, z) : s(g) = ρ(z)}` as a morphism `G → G × H`, together
    /// with the projection `G × H → H`.
    pub fn graph(&self) -> Result<(GeneralizedMorphism, Functor), GroupoidError> {
        let (g, h) = (&self.source, &self.target);
        let product = Arc::new(FiniteGroupoid::product(g, h)?);
        let (ho, ha) = (h.num_objects(), h.num_arrows());
        let elems: Vec<(usize, usize)> = (0..self.size())
            .flat_map(|z| g.arrows_from(self.rho[z]).iter().map(move |&a| (a, z)))
            .collect();
        let index: HashMap<(usize, usize), usize> =
            elems.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let gr = GeneralizedMorphism::assemble(
            g.clone(),
            product.clone(),
            elems.iter().map(|&(a, _)| g.target(a)).collect(),
            elems
                .iter()
                .map(|&(a, z)| g.source(a) * ho + self.sigma[z])
                .collect(),
            |b, e| {
                let (a, z) = elems[e];
                index[&(g.compose(b, a).expect("composable"), z)]
            },
            |e, pair| {
                let (a, z) = elems[e];
                let (b, k) = (pair / ha, pair % ha);
                let moved = self.right[&(self.left[&(g.inverse(b), z)], k)];
                index[&(g.compose(a, b).expect("composable"), moved)]
            },
        )?;
        let projection = Functor::second_projection(&product, g, h)?;
        Ok((gr, projection))
    }

    /// Counts over all pairs `(z₁, z₂)`: `φ(z₁, g, z₂) = (z₁, h, z₂)` with `g·z₂ = z₁·h`.
    pub fn pullback_comparison(&self) -> PullbackComparison {
        let (g, h) = (&self.source, &self.target);
        let mut out = PullbackComparison {
            g_arrows: 0,
            h_arrows: 0,
            injective: true,
            saturated: true,
            bijective: true,
        };
        let mut quotient = Table::new(self.size(), self.size());
        for ((z, k), w) in self.right.iter() {
            quotient.insert((z, w), k);
        }
        for z1 in 0..self.size() {
            for z2 in 0..self.size() {
                let gs = g.hom(self.rho[z2], self.rho[z1]);
                let hs = h.hom(self.sigma[z2], self.sigma[z1]);
                out.g_arrows += gs.len();
                out.h_arrows += hs.len();
                let mut images: Vec<usize> = gs
                    .iter()
                    .map(|&a| quotient[&(z1, self.left[&(a, z2)])])
                    .collect();
                images.sort_unstable();
                images.dedup();
                if images.len() != gs.len() {
                    out.injective = false;
                }
                if !hs.is_empty() && gs.is_empty() {
                    out.saturated = false;
                }
                if images.len() != hs.len() {
                    out.bijective = false;
                }
            }
        }
        out.bijective &= out.injective;
        out
    }

    /// Discrete reading: embedding iff `φ` is injective and saturated.
    pub fn classify(&self) -> EmbeddingFlags {
        let cmp = self.pullback_comparison();
        let embedding = cmp.injective && cmp.saturated;
        let surjective = (0..self.target.num_objects()).all(|y| self.sigma.contains(&y));
        EmbeddingFlags {
            embedding,
            iso_spatial: embedding && surjective,
            stabilizer_preserving: embedding && cmp.bijective,
        }
    }

    /// Iso-spatial onto `H|_{σ(Z)}`, then stabilizer-preserving into `H`.
    pub fn factorize(&self) -> Result<Factorization, GroupoidError> {
        if !self.classify().embedding {
            return Err(GroupoidError::NotAnEmbedding);
        }
        let mut image: Vec<usize> = self.sigma.clone();
        image.sort_unstable();
        image.dedup();
        let (sub, inclusion) = self.target.restrict(&image)?;
        let pos: HashMap<usize, usize> = image.iter().enumerate().map(|(i, &y)| (y, i)).collect();
        let first = GeneralizedMorphism::assemble(
            self.source.clone(),
            sub.clone(),
            self.rho.clone(),
            self.sigma.iter().map(|y| pos[y]).collect(),
            |a, z| self.left[&(a, z)],
            |z, b| self.right[&(z, inclusion.arrow(b))],
        )?;
        let second = GeneralizedMorphism::comma(&inclusion)?;
        Ok(Factorization {
            image: sub,
            first,
            second,
        })
    }

    /// A bijection `Z → Z'` commuting with anchors and both actions.
    pub fn isomorphism_to(&self, other: &GeneralizedMorphism) -> Option<Vec<usize>> {
        if self.size() != other.size()
            || !same_groupoid(&self.source, &other.source)
            || !same_groupoid(&self.target, &other.target)
        {
            return None;
        }
        let components = self.orbits_by(|z| {
            let mut next: Vec<usize> = self
                .source
                .arrows_from(self.rho[z])
                .iter()
                .map(|&a| self.left[&(a, z)])
                .collect();
            next.extend(
                self.target
                    .arrows_to(self.sigma[z])
                    .iter()
                    .map(|&b| self.right[&(z, b)]),
            );
            next
        });
        let mut map = vec![usize::MAX; self.size()];
        let mut used = vec![false; other.size()];
        self.extend_iso(other, &components, 0, &mut map, &mut used)
            .then_some(map)
    }

    fn extend_iso(
        &self,
        other: &GeneralizedMorphism,
        components: &[Vec<usize>],
        k: usize,
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        let Some(comp) = components.get(k) else {
            return true;
        };
        let root = comp[0];
        for cand in 0..other.size() {
            if used[cand]
                || other.rho[cand] != self.rho[root]
                || other.sigma[cand] != self.sigma[root]
            {
                continue;
            }
            if let Some(assigned) = self.propagate(other, root, cand, used) {
                for &(z, w) in &assigned {
                    map[z] = w;
                    used[w] = true;
                }
                if self.extend_iso(other, components, k + 1, map, used) {
                    return true;
                }
                for &(z, w) in &assigned {
                    map[z] = usize::MAX;
                    used[w] = false;
                }
            }
        }
        false
    }

    /// Extends `root ↦ image` along both actions; `None` on any conflict.
    fn propagate(
        &self,
        other: &GeneralizedMorphism,
        root: usize,
        image: usize,
        used: &[bool],
    ) -> Option<Vec<(usize, usize)>> {
        let mut forward: HashMap<usize, usize> = HashMap::from([(root, image)]);
        let mut backward: HashMap<usize, usize> = HashMap::from([(image, root)]);
        let mut order = vec![root];
        let mut i = 0;
        while i < order.len() {
            let z = order[i];
            let w = forward[&z];
            i += 1;
            let lefts = self
                .source
                .arrows_from(self.rho[z])
                .iter()
                .map(|&a| (self.left[&(a, z)], other.left[&(a, w)]));
            let rights = self
                .target
                .arrows_to(self.sigma[z])
                .iter()
                .map(|&b| (self.right[&(z, b)], other.right[&(w, b)]));
            for (z2, w2) in lefts.chain(rights).collect::<Vec<_>>() {
                if other.rho[w2] != self.rho[z2] || other.sigma[w2] != self.sigma[z2] || used[w2] {
                    return None;
                }
                match (forward.get(&z2), backward.get(&w2)) {
                    (Some(&w0), _) if w0 == w2 => {}
                    (None, None) => {
                        forward.insert(z2, w2);
                        backward.insert(w2, z2);
                        order.push(z2);
                    }
                    _ => return None,
                }
            }
        }
        Some(forward.into_iter().collect())
    }

    /// Both actions free and both anchors quotient maps: a principal bibundle.
    pub fn is_morita(&self) -> bool {
        let left_free = (0..self.size()).all(|z| {
            let mut images: Vec<usize> = self
                .source
                .arrows_from(self.rho[z])
                .iter()
                .map(|&a| self.left[&(a, z)])
                .collect();
            let n = images.len();
            images.sort_unstable();
            images.dedup();
            images.len() == n
        });
        let orbits = self.left_orbits();
        let mut hit = vec![false; self.target.num_objects()];
        for orbit in &orbits {
            if std::mem::replace(&mut hit[self.sigma[orbit[0]]], true) {
                return false;
            }
        }
        left_free && hit.iter().all(|&b| b)
    }
}
