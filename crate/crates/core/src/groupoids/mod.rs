//! Finite discrete groupoids, functors, generalized morphisms and inertia.

mod inertia;
mod morphism;

use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use thiserror::Error;

use crate::groups::{FiniteGroup, GroupEmbedding};

pub use inertia::{inertia_of_morphism, morita_decompose_inertia, InertiaGroupoid, InertiaModel};
pub use morphism::{EmbeddingFlags, Factorization, GeneralizedMorphism, PullbackComparison};

/// Largest arrow count validated exhaustively.
pub const ARROW_CAP: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupoidError {
    #[error("not a groupoid: {0}")]
    NotAGroupoid(String),
    #[error("not an action: {0}")]
    NotAnAction(String),
    #[error("not a functor: {0}")]
    NotAFunctor(String),
    #[error("not a generalized morphism: {0}")]
    NotAMorphism(String),
    #[error("not an embedding")]
    NotAnEmbedding,
    #[error("groupoids do not match: {0}")]
    Mismatch(String),
    #[error("too many arrows ({0} > {cap})", cap = ARROW_CAP)]
    TooLarge(usize),
}

/// Arrows `a: s(a) → t(a)`; `compose(a, b) = a∘b` is defined iff `s(a) = t(b)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroupoid {
    num_objects: usize,
    source: Vec<usize>,
    target: Vec<usize>,
    units: Vec<usize>,
    inverses: Vec<usize>,
    table: HashMap<(usize, usize), usize>,
    homs: HashMap<(usize, usize), Vec<usize>>,
    into: Vec<Vec<usize>>,
    out: Vec<Vec<usize>>,
}

impl FiniteGroupoid {
    /// Builds the composition table from `compose` on every composable pair
    /// and checks the groupoid axioms.
    pub fn new(
        num_objects: usize,
        source: Vec<usize>,
        target: Vec<usize>,
        compose: impl Fn(usize, usize) -> usize,
    ) -> Result<Self, GroupoidError> {
        let g = FiniteGroupoid::assemble(num_objects, source, target, compose)?;
        g.check_associativity()?;
        Ok(g)
    }

    /// As [`FiniteGroupoid::new`] but without the cubic associativity pass,
    /// for composition laws that are associative by construction.
    pub(crate) fn associative(
        num_objects: usize,
        source: Vec<usize>,
        target: Vec<usize>,
        compose: impl Fn(usize, usize) -> usize,
    ) -> Result<Self, GroupoidError> {
        FiniteGroupoid::assemble(num_objects, source, target, compose)
    }

    fn assemble(
        num_objects: usize,
        source: Vec<usize>,
        target: Vec<usize>,
        compose: impl Fn(usize, usize) -> usize,
    ) -> Result<Self, GroupoidError> {
        let n = source.len();
        if n > ARROW_CAP {
            return Err(GroupoidError::TooLarge(n));
        }
        if target.len() != n {
            return Err(GroupoidError::NotAGroupoid(
                "source and target lengths differ".into(),
            ));
        }
        if let Some(a) = (0..n).find(|&a| source[a] >= num_objects || target[a] >= num_objects) {
            return Err(GroupoidError::NotAGroupoid(format!(
                "arrow {a} has an endpoint out of range"
            )));
        }
        let mut homs: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        for a in 0..n {
            homs.entry((source[a], target[a])).or_default().push(a);
        }
        let mut into: Vec<Vec<usize>> = vec![Vec::new(); num_objects];
        let mut out: Vec<Vec<usize>> = vec![Vec::new(); num_objects];
        for a in 0..n {
            into[target[a]].push(a);
            out[source[a]].push(a);
        }
        let mut table = HashMap::new();
        for a in 0..n {
            for &b in &into[source[a]] {
                let c = compose(a, b);
                if c >= n || source[c] != source[b] || target[c] != target[a] {
                    return Err(GroupoidError::NotAGroupoid(format!(
                        "composite of {a} and {b} has wrong endpoints"
                    )));
                }
                table.insert((a, b), c);
            }
        }
        let mut g = FiniteGroupoid {
            num_objects,
            source,
            target,
            units: Vec::new(),
            inverses: Vec::new(),
            table,
            homs,
            into,
            out,
        };
        g.find_units_and_inverses()?;
        Ok(g)
    }

    fn find_units_and_inverses(&mut self) -> Result<(), GroupoidError> {
        let n = self.num_arrows();
        let mut units = Vec::with_capacity(self.num_objects);
        for x in 0..self.num_objects {
            let unit = self
                .hom(x, x)
                .iter()
                .copied()
                .find(|&e| {
                    self.into[x].iter().all(|&a| self.table[&(e, a)] == a)
                        && self.out[x].iter().all(|&a| self.table[&(a, e)] == a)
                })
                .ok_or_else(|| GroupoidError::NotAGroupoid(format!("object {x} has no unit")))?;
            units.push(unit);
        }
        let mut inverses = Vec::with_capacity(n);
        for a in 0..n {
            let inv = self
                .hom(self.target[a], self.source[a])
                .iter()
                .copied()
                .find(|&b| {
                    self.table[&(a, b)] == units[self.target[a]]
                        && self.table[&(b, a)] == units[self.source[a]]
                })
                .ok_or_else(|| GroupoidError::NotAGroupoid(format!("arrow {a} has no inverse")))?;
            inverses.push(inv);
        }
        self.units = units;
        self.inverses = inverses;
        Ok(())
    }

    fn check_associativity(&self) -> Result<(), GroupoidError> {
        for (&(a, b), &ab) in &self.table {
            for &c in &self.into[self.source[b]] {
                if self.table[&(ab, c)] != self.table[&(a, self.table[&(b, c)])] {
                    return Err(GroupoidError::NotAGroupoid(format!(
                        "({a}, {b}, {c}) not associative"
                    )));
                }
            }
        }
        Ok(())
    }

    /// `G⋉S`: arrow `g·|S| + x` goes from `x` to `g·x`.
    pub fn translation(
        group: &FiniteGroup,
        points: usize,
        act: impl Fn(usize, usize) -> usize,
    ) -> Result<Self, GroupoidError> {
        let table: Vec<Vec<usize>> = group
            .elements()
            .map(|g| (0..points).map(|x| act(g, x)).collect())
            .collect();
        for g in group.elements() {
            for x in 0..points {
                let y = table[g][x];
                if y >= points {
                    return Err(GroupoidError::NotAnAction(format!(
                        "element {g} sends {x} out of range"
                    )));
                }
                for h in group.elements() {
                    if table[h][y] != table[group.mul(h, g)][x] {
                        return Err(GroupoidError::NotAnAction(format!(
                            "({h}·{g})·{x} ≠ {h}·({g}·{x})"
                        )));
                    }
                }
            }
        }
        if (0..points).any(|x| table[group.identity()][x] != x) {
            return Err(GroupoidError::NotAnAction("identity moves a point".into()));
        }
        let n = group.order() * points;
        let source = (0..n).map(|a| a % points).collect();
        let target = (0..n).map(|a| table[a / points][a % points]).collect();
        FiniteGroupoid::associative(points, source, target, |a, b| {
            group.mul(a / points, b / points) * points + b % points
        })
    }

    /// `[pt/G]`
    pub fn point(group: &FiniteGroup) -> Self {
        FiniteGroupoid::translation(group, 1, |_, _| 0).expect("trivial action")
    }

    /// Objects `a·|H₀| + b`, arrows `g·|H₁| + h`.
    pub fn product(a: &FiniteGroupoid, b: &FiniteGroupoid) -> Result<Self, GroupoidError> {
        let (no, na) = (b.num_objects, b.num_arrows());
        let n = a.num_arrows() * na;
        let source = (0..n)
            .map(|x| a.source[x / na] * no + b.source[x % na])
            .collect();
        let target = (0..n)
            .map(|x| a.target[x / na] * no + b.target[x % na])
            .collect();
        FiniteGroupoid::associative(a.num_objects * no, source, target, |x, y| {
            a.table[&(x / na, y / na)] * na + b.table[&(x % na, y % na)]
        })
    }

    /// Full subgroupoid on `objects` (sorted), with its inclusion.
    pub fn restrict(
        self: &Arc<Self>,
        objects: &[usize],
    ) -> Result<(Arc<FiniteGroupoid>, Functor), GroupoidError> {
        let mut objects = objects.to_vec();
        objects.sort_unstable();
        objects.dedup();
        let pos: HashMap<usize, usize> = objects.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let arrows: Vec<usize> = (0..self.num_arrows())
            .filter(|&a| pos.contains_key(&self.source[a]) && pos.contains_key(&self.target[a]))
            .collect();
        let apos: HashMap<usize, usize> = arrows.iter().enumerate().map(|(i, &a)| (a, i)).collect();
        let sub = FiniteGroupoid::associative(
            objects.len(),
            arrows.iter().map(|&a| pos[&self.source[a]]).collect(),
            arrows.iter().map(|&a| pos[&self.target[a]]).collect(),
            |x, y| apos[&self.table[&(arrows[x], arrows[y])]],
        )?;
        let sub = Arc::new(sub);
        let inclusion = Functor::new(sub.clone(), self.clone(), objects, arrows)?;
        Ok((sub, inclusion))
    }

    pub fn num_objects(&self) -> usize {
        self.num_objects
    }

    pub fn num_arrows(&self) -> usize {
        self.source.len()
    }

    pub fn source(&self, a: usize) -> usize {
        self.source[a]
    }

    pub fn target(&self, a: usize) -> usize {
        self.target[a]
    }

    pub fn unit(&self, x: usize) -> usize {
        self.units[x]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn is_unit(&self, a: usize) -> bool {
        self.units[self.source[a]] == a
    }

    /// `a∘b`, when `s(a) = t(b)`.
    pub fn compose(&self, a: usize, b: usize) -> Option<usize> {
        self.table.get(&(a, b)).copied()
    }

    /// Arrows `x → y`.
    pub fn hom(&self, x: usize, y: usize) -> &[usize] {
        self.homs.get(&(x, y)).map_or(&[], Vec::as_slice)
    }

    /// Arrows with source `x`.
    pub fn arrows_from(&self, x: usize) -> &[usize] {
        &self.out[x]
    }

    /// Arrows with target `x`.
    pub fn arrows_to(&self, x: usize) -> &[usize] {
        &self.into[x]
    }

    /// Arrows `x → x`.
    pub fn isotropy(&self, x: usize) -> &[usize] {
        self.hom(x, x)
    }

    /// Connected components, each sorted, ordered by smallest object.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.num_objects];
        let mut out = Vec::new();
        for start in 0..self.num_objects {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut orbit = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(x) = queue.pop_front() {
                for &a in &self.out[x] {
                    let y = self.target[a];
                    if !seen[y] {
                        seen[y] = true;
                        orbit.push(y);
                        queue.push_back(y);
                    }
                }
            }
            orbit.sort_unstable();
            out.push(orbit);
        }
        out
    }

    /// `(orbit size, isotropy order)` per orbit: the Morita invariant of a finite groupoid.
    pub fn orbit_summary(&self) -> Vec<(usize, usize)> {
        let mut s: Vec<(usize, usize)> = self
            .orbits()
            .iter()
            .map(|o| (o.len(), self.isotropy(o[0]).len()))
            .collect();
        s.sort_unstable();
        s
    }

    /// Isotropy orders, one per orbit, sorted: equal for Morita-equivalent groupoids.
    pub fn morita_type(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self
            .orbits()
            .iter()
            .map(|o| self.isotropy(o[0]).len())
            .collect();
        t.sort_unstable();
        t
    }
}

/// A strict functor between finite groupoids.
#[derive(Debug, Clone)]
pub struct Functor {
    source: Arc<FiniteGroupoid>,
    target: Arc<FiniteGroupoid>,
    objects: Vec<usize>,
    arrows: Vec<usize>,
}

impl Functor {
    pub fn new(
        source: Arc<FiniteGroupoid>,
        target: Arc<FiniteGroupoid>,
        objects: Vec<usize>,
        arrows: Vec<usize>,
    ) -> Result<Self, GroupoidError> {
        if objects.len() != source.num_objects() || arrows.len() != source.num_arrows() {
            return Err(GroupoidError::NotAFunctor(
                "map lengths do not match".into(),
            ));
        }
        if objects.iter().any(|&x| x >= target.num_objects())
            || arrows.iter().any(|&a| a >= target.num_arrows())
        {
            return Err(GroupoidError::NotAFunctor("image out of range".into()));
        }
        for a in 0..source.num_arrows() {
            let fa = arrows[a];
            if target.source(fa) != objects[source.source(a)]
                || target.target(fa) != objects[source.target(a)]
            {
                return Err(GroupoidError::NotAFunctor(format!(
                    "arrow {a} endpoints not preserved"
                )));
            }
        }
        for (&(a, b), &c) in &source.table {
            if target.compose(arrows[a], arrows[b]) != Some(arrows[c]) {
                return Err(GroupoidError::NotAFunctor(format!(
                    "composite of {a} and {b} not preserved"
                )));
            }
        }
        Ok(Functor {
            source,
            target,
            objects,
            arrows,
        })
    }

    pub fn identity(g: &Arc<FiniteGroupoid>) -> Self {
        Functor {
            source: g.clone(),
            target: g.clone(),
            objects: (0..g.num_objects()).collect(),
            arrows: (0..g.num_arrows()).collect(),
        }
    }

    /// `G⋉S → H⋉T` from a group embedding and an equivariant map of points.
    pub fn equivariant(
        source: &Arc<FiniteGroupoid>,
        target: &Arc<FiniteGroupoid>,
        emb: &GroupEmbedding,
        points: &[usize],
    ) -> Result<Self, GroupoidError> {
        let (s, t) = (source.num_objects(), target.num_objects());
        if emb.source().order() * s != source.num_arrows()
            || emb.target().order() * t != target.num_arrows()
        {
            return Err(GroupoidError::Mismatch(
                "groupoids are not translation groupoids of the embedded groups".into(),
            ));
        }
        let arrows = (0..source.num_arrows())
            .map(|a| emb.map(a / s) * t + points[a % s])
            .collect();
        Functor::new(source.clone(), target.clone(), points.to_vec(), arrows)
    }

    /// Projection `G × H → H` onto the second factor.
    pub fn second_projection(
        product: &Arc<FiniteGroupoid>,
        first: &FiniteGroupoid,
        second: &Arc<FiniteGroupoid>,
    ) -> Result<Self, GroupoidError> {
        let (no, na) = (second.num_objects(), second.num_arrows());
        if product.num_objects() != first.num_objects() * no
            || product.num_arrows() != first.num_arrows() * na
        {
            return Err(GroupoidError::Mismatch(
                "not a product of the given factors".into(),
            ));
        }
        Functor::new(
            product.clone(),
            second.clone(),
            (0..product.num_objects()).map(|x| x % no).collect(),
            (0..product.num_arrows()).map(|a| a % na).collect(),
        )
    }

    pub fn source(&self) -> &Arc<FiniteGroupoid> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteGroupoid> {
        &self.target
    }

    pub fn object(&self, x: usize) -> usize {
        self.objects[x]
    }

    pub fn arrow(&self, a: usize) -> usize {
        self.arrows[a]
    }

    pub fn compose(&self, next: &Functor) -> Result<Functor, GroupoidError> {
        if !same_groupoid(&self.target, &next.source) {
            return Err(GroupoidError::Mismatch(
                "functors are not composable".into(),
            ));
        }
        Ok(Functor {
            source: self.source.clone(),
            target: next.target.clone(),
            objects: self.objects.iter().map(|&x| next.objects[x]).collect(),
            arrows: self.arrows.iter().map(|&a| next.arrows[a]).collect(),
        })
    }
}

pub(crate) fn same_groupoid(a: &Arc<FiniteGroupoid>, b: &Arc<FiniteGroupoid>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}
