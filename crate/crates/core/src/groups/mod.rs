//! Finite groups as multiplication tables, with conjugacy data and embeddings.

mod catalog;
mod embedding;

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

pub use embedding::{ClassFusion, GroupEmbedding};

/// Default cap on the number of group elements.
pub const DEFAULT_SIZE_CAP: usize = 10_000;

/// Cayley tables up to this size are checked for associativity on every triple.
const FULL_ASSOC_LIMIT: usize = 256;
const ASSOC_SAMPLES: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("group closure exceeds the size cap of {cap} elements")]
    TooLarge { cap: usize },
    #[error("generator {index} is not a permutation of 0..{degree}")]
    InvalidPermutation { index: usize, degree: usize },
    #[error("multiplication table is not a Latin square: {0}")]
    NotLatin(String),
    #[error("multiplication table has no identity element")]
    NoIdentity,
    #[error("multiplication is not associative at ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("map is not injective: elements {0} and {1} have the same image")]
    NotInjective(usize, usize),
    #[error("map is not a homomorphism at ({0}, {1})")]
    NotHomomorphism(usize, usize),
    #[error("{0}")]
    Mismatch(String),
}

/// Conjugacy classes and centralizers of a finite group.
#[derive(Debug, Clone)]
pub struct ConjugacyData {
    /// Smallest element index in each class, in increasing order.
    pub class_reps: Vec<usize>,
    pub class_of: Vec<usize>,
    pub classes: Vec<Vec<usize>>,
    /// Sorted element list of the centralizer of each class representative.
    pub centralizers: Vec<Vec<usize>>,
    pub class_sizes: Vec<usize>,
}

impl ConjugacyData {
    pub fn num_classes(&self) -> usize {
        self.class_reps.len()
    }
}

pub struct FiniteGroup {
    n: usize,
    table: Vec<u32>,
    identity: usize,
    inverses: Vec<usize>,
    generators: Vec<usize>,
    perms: Option<Vec<Vec<usize>>>,
    conj: OnceLock<ConjugacyData>,
}

impl FiniteGroup {
    /// Closure of permutations of `0..degree` under composition, where
    /// `(a*b)(i) = a(b(i))`. The identity gets index 0.
    pub fn from_generators(degree: usize, perms: &[Vec<usize>]) -> Result<Self, GroupError> {
        Self::from_generators_capped(degree, perms, DEFAULT_SIZE_CAP)
    }

    pub fn from_generators_capped(
        degree: usize,
        perms: &[Vec<usize>],
        cap: usize,
    ) -> Result<Self, GroupError> {
        for (index, p) in perms.iter().enumerate() {
            if !is_permutation(p, degree) {
                return Err(GroupError::InvalidPermutation { index, degree });
            }
        }
        let id: Vec<usize> = (0..degree).collect();
        let mut elements = vec![id.clone()];
        let mut lookup: HashMap<Vec<usize>, usize> = HashMap::from([(id, 0)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for s in perms {
                let y = compose(s, &elements[x]);
                if !lookup.contains_key(&y) {
                    if elements.len() == cap {
                        return Err(GroupError::TooLarge { cap });
                    }
                    lookup.insert(y.clone(), elements.len());
                    queue.push_back(elements.len());
                    elements.push(y);
                }
            }
        }
        let n = elements.len();
        let mut table = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                table[a * n + b] = lookup[&compose(&elements[a], &elements[b])] as u32;
            }
        }
        let generators = perms.iter().map(|p| lookup[p]).collect();
        let mut g = Self::assemble(n, table, 0, generators);
        g.perms = Some(elements);
        Ok(g)
    }

    /// Validates a user-supplied multiplication table `table[a][b] = a*b`.
    pub fn from_cayley(table: &[Vec<usize>]) -> Result<Self, GroupError> {
        let n = table.len();
        if n == 0 {
            return Err(GroupError::NotLatin("empty table".into()));
        }
        if n > DEFAULT_SIZE_CAP {
            return Err(GroupError::TooLarge {
                cap: DEFAULT_SIZE_CAP,
            });
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(GroupError::NotLatin(format!(
                    "row {i} has length {}",
                    row.len()
                )));
            }
            if !is_permutation(row, n) {
                return Err(GroupError::NotLatin(format!(
                    "row {i} is not a permutation"
                )));
            }
        }
        for j in 0..n {
            let col: Vec<usize> = table.iter().map(|r| r[j]).collect();
            if !is_permutation(&col, n) {
                return Err(GroupError::NotLatin(format!(
                    "column {j} is not a permutation"
                )));
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or(GroupError::NoIdentity)?;
        let assoc = |a: usize, b: usize, c: usize| table[table[a][b]][c] == table[a][table[b][c]];
        if n <= FULL_ASSOC_LIMIT {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        if !assoc(a, b, c) {
                            return Err(GroupError::NotAssociative(a, b, c));
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
            for _ in 0..ASSOC_SAMPLES {
                let (a, b, c) = (
                    rng.gen_range(0..n),
                    rng.gen_range(0..n),
                    rng.gen_range(0..n),
                );
                if !assoc(a, b, c) {
                    return Err(GroupError::NotAssociative(a, b, c));
                }
            }
        }
        let flat = table.iter().flatten().map(|&x| x as u32).collect();
        let mut g = Self::assemble(n, flat, identity, Vec::new());
        g.generators = g.greedy_generators();
        Ok(g)
    }

    fn assemble(n: usize, table: Vec<u32>, identity: usize, generators: Vec<usize>) -> Self {
        let mut inverses = vec![0; n];
        for a in 0..n {
            for b in 0..n {
                if table[a * n + b] as usize == identity {
                    inverses[a] = b;
                    break;
                }
            }
        }
        FiniteGroup {
            n,
            table,
            identity,
            inverses,
            generators,
            perms: None,
            conj: OnceLock::new(),
        }
    }

    fn greedy_generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span: HashSet<usize> = HashSet::from([self.identity]);
        for x in 0..self.n {
            if !span.contains(&x) {
                gens.push(x);
                span = self.generated_subgroup(&gens).into_iter().collect();
            }
        }
        gens
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.n
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.n + b] as usize
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    /// `x g x⁻¹`
    pub fn conjugate(&self, x: usize, g: usize) -> usize {
        self.mul(self.mul(x, g), self.inv(x))
    }

    pub fn pow(&self, a: usize, k: i64) -> usize {
        let base = if k < 0 { self.inv(a) } else { a };
        let mut acc = self.identity;
        for _ in 0..k.unsigned_abs() {
            acc = self.mul(acc, base);
        }
        acc
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn exponent(&self) -> usize {
        self.elements()
            .map(|a| self.element_order(a))
            .fold(1, num_integer::lcm)
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.n).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn permutation(&self, a: usize) -> Option<&[usize]> {
        self.perms.as_ref().map(|p| p[a].as_slice())
    }

    pub fn table_row(&self, a: usize) -> impl Iterator<Item = usize> + '_ {
        self.table[a * self.n..(a + 1) * self.n]
            .iter()
            .map(|&x| x as usize)
    }

    pub fn centralizer(&self, g: usize) -> Vec<usize> {
        self.elements()
            .filter(|&x| self.mul(x, g) == self.mul(g, x))
            .collect()
    }

    pub fn conjugacy(&self) -> &ConjugacyData {
        self.conj.get_or_init(|| self.compute_conjugacy())
    }

    fn compute_conjugacy(&self) -> ConjugacyData {
        let mut class_of = vec![usize::MAX; self.n];
        let mut data = ConjugacyData {
            class_reps: Vec::new(),
            class_of: Vec::new(),
            classes: Vec::new(),
            centralizers: Vec::new(),
            class_sizes: Vec::new(),
        };
        for g in 0..self.n {
            if class_of[g] != usize::MAX {
                continue;
            }
            let c = data.class_reps.len();
            let mut members: Vec<usize> = Vec::new();
            for x in 0..self.n {
                let y = self.conjugate(x, g);
                if class_of[y] == usize::MAX {
                    class_of[y] = c;
                    members.push(y);
                }
            }
            members.sort_unstable();
            data.class_reps.push(g);
            data.class_sizes.push(members.len());
            data.classes.push(members);
            data.centralizers.push(self.centralizer(g));
        }
        data.class_of = class_of;
        data
    }

    pub fn class_of(&self, g: usize) -> usize {
        self.conjugacy().class_of[g]
    }

    pub fn num_classes(&self) -> usize {
        self.conjugacy().num_classes()
    }

    /// Sorted elements of the subgroup generated by `gens`.
    pub fn generated_subgroup(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.n];
        seen[self.identity] = true;
        let mut out = vec![self.identity];
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for &s in gens {
                let y = self.mul(s, x);
                if !seen[y] {
                    seen[y] = true;
                    out.push(y);
                    queue.push_back(y);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// All subgroups as sorted element lists, ordered by size then lexicographically.
    pub fn subgroups(&self) -> Vec<Vec<usize>> {
        let mut found: HashSet<Vec<usize>> = HashSet::new();
        let mut frontier: Vec<Vec<usize>> = Vec::new();
        let cyclic: Vec<Vec<usize>> = self
            .elements()
            .map(|g| self.generated_subgroup(&[g]))
            .collect();
        for c in &cyclic {
            if found.insert(c.clone()) {
                frontier.push(c.clone());
            }
        }
        let cyclic: Vec<Vec<usize>> = found.iter().cloned().collect();
        while let Some(sub) = frontier.pop() {
            for c in &cyclic {
                if c.iter().all(|x| sub.binary_search(x).is_ok()) {
                    continue;
                }
                let mut gens = sub.clone();
                gens.extend_from_slice(c);
                let joined = self.generated_subgroup(&gens);
                if found.insert(joined.clone()) {
                    frontier.push(joined);
                }
            }
        }
        let mut all: Vec<Vec<usize>> = found.into_iter().collect();
        all.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        all
    }

    pub fn is_subgroup(&self, elements: &[usize]) -> bool {
        let set: HashSet<usize> = elements.iter().copied().collect();
        set.contains(&self.identity)
            && elements.iter().all(|&a| {
                elements
                    .iter()
                    .all(|&b| set.contains(&self.mul(a, self.inv(b))))
            })
    }

    /// Short label for an element: cycle notation on 1-based points when the
    /// group came from permutations, otherwise `g<index>`.
    pub fn element_label(&self, a: usize) -> String {
        match self.permutation(a) {
            Some(p) => cycle_notation(p),
            None => format!("g{a}"),
        }
    }

    /// The subgroup on `elements` as a group in its own right, re-indexed in
    /// increasing order, together with its inclusion.
    pub fn subgroup(
        self: &std::sync::Arc<Self>,
        elements: &[usize],
    ) -> Result<GroupEmbedding, GroupError> {
        GroupEmbedding::subgroup(self, elements)
    }
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup(order {})", self.n)
    }
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.identity == other.identity && self.table == other.table
    }
}

impl Eq for FiniteGroup {}

fn is_permutation(p: &[usize], degree: usize) -> bool {
    if p.len() != degree {
        return false;
    }
    let mut seen = vec![false; degree];
    for &x in p {
        if x >= degree || seen[x] {
            return false;
        }
        seen[x] = true;
    }
    true
}

/// `(a∘b)(i) = a(b(i))`
fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
    b.iter().map(|&i| a[i]).collect()
}

pub fn cycle_notation(p: &[usize]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] == start {
            continue;
        }
        let mut cycle = Vec::new();
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            cycle.push((i + 1).to_string());
            i = p[i];
        }
        out.push('(');
        out.push_str(&cycle.join(" "));
        out.push(')');
    }
    if out.is_empty() {
        out.push_str("()");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(cycles: &[&[usize]], degree: usize) -> Vec<usize> {
        let mut p: Vec<usize> = (0..degree).collect();
        for c in cycles {
            for k in 0..c.len() {
                p[c[k] - 1] = c[(k + 1) % c.len()] - 1;
            }
        }
        p
    }

    /// Independent closure: repeatedly multiply everything by everything.
    fn naive_closure(degree: usize, gens: &[Vec<usize>]) -> usize {
        let mut set: HashSet<Vec<usize>> = HashSet::from([(0..degree).collect()]);
        set.extend(gens.iter().cloned());
        loop {
            let current: Vec<Vec<usize>> = set.iter().cloned().collect();
            let before = set.len();
            for a in &current {
                for b in &current {
                    set.insert(compose(a, b));
                }
            }
            if set.len() == before {
                return set.len();
            }
        }
    }

    #[test]
    fn closure_orders() {
        let gens = vec![perm(&[&[1, 2]], 3), perm(&[&[1, 2, 3]], 3)];
        let g = FiniteGroup::from_generators(3, &gens).unwrap();
        assert_eq!(g.order(), 6);
        assert_eq!(naive_closure(3, &gens), 6);
        let c4 = FiniteGroup::from_generators(4, &[perm(&[&[1, 2, 3, 4]], 4)]).unwrap();
        assert_eq!(c4.order(), 4);
        assert!(c4.is_abelian());
        let trivial = FiniteGroup::from_generators(3, &[]).unwrap();
        assert_eq!(trivial.order(), 1);
    }

    #[test]
    fn size_cap_enforced() {
        let gens = vec![perm(&[&[1, 2]], 5), perm(&[&[1, 2, 3, 4, 5]], 5)];
        let err = FiniteGroup::from_generators_capped(5, &gens, 100).unwrap_err();
        assert_eq!(err, GroupError::TooLarge { cap: 100 });
    }

    #[test]
    fn bad_permutation_rejected() {
        let err = FiniteGroup::from_generators(3, &[vec![0, 0, 1]]).unwrap_err();
        assert!(matches!(
            err,
            GroupError::InvalidPermutation { index: 0, .. }
        ));
    }

    #[test]
    fn s3_conjugacy() {
        let s3 = FiniteGroup::symmetric(3);
        let c = s3.conjugacy();
        let mut sizes = c.class_sizes.clone();
        let mut cents: Vec<usize> = c.centralizers.iter().map(Vec::len).collect();
        sizes.sort();
        cents.sort();
        assert_eq!(sizes, vec![1, 2, 3]);
        assert_eq!(cents, vec![2, 3, 6]);
        // (e, transposition, 3-cycle) by element order
        let by_order: Vec<(usize, usize, usize)> = c
            .class_reps
            .iter()
            .enumerate()
            .map(|(i, &r)| {
                (
                    s3.element_order(r),
                    c.class_sizes[i],
                    c.centralizers[i].len(),
                )
            })
            .collect();
        assert!(by_order.contains(&(1, 1, 6)));
        assert!(by_order.contains(&(2, 3, 2)));
        assert!(by_order.contains(&(3, 2, 3)));
    }

    #[test]
    fn abelian_and_quaternion_classes() {
        let c6 = FiniteGroup::cyclic(6);
        assert_eq!(c6.num_classes(), 6);
        assert_eq!(FiniteGroup::quaternion().num_classes(), 5);
    }

    #[test]
    fn centralizer_examples() {
        let s3 = FiniteGroup::symmetric(3);
        assert_eq!(s3.centralizer(s3.identity()).len(), 6);
        let t = s3.elements().find(|&a| s3.element_order(a) == 2).unwrap();
        assert_eq!(s3.centralizer(t).len(), 2);
        let s4 = FiniteGroup::symmetric(4);
        let double = s4
            .elements()
            .find(|&a| s4.permutation(a).unwrap() == perm(&[&[1, 2], &[3, 4]], 4).as_slice())
            .unwrap();
        assert_eq!(s4.centralizer(double).len(), 8);
    }

    #[test]
    fn cayley_validation() {
        let z3 = vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]];
        let g = FiniteGroup::from_cayley(&z3).unwrap();
        assert_eq!(g.order(), 3);
        assert_eq!(g.generators(), &[1]);
        let not_latin = vec![vec![0, 1], vec![1, 1]];
        assert!(matches!(
            FiniteGroup::from_cayley(&not_latin),
            Err(GroupError::NotLatin(_))
        ));
        // Latin square with identity 0 that is not associative (order 5 loop).
        let loop5 = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        assert!(matches!(
            FiniteGroup::from_cayley(&loop5),
            Err(GroupError::NotAssociative(..))
        ));
    }

    #[test]
    fn subgroup_counts() {
        assert_eq!(FiniteGroup::symmetric(3).subgroups().len(), 6);
        assert_eq!(FiniteGroup::symmetric(4).subgroups().len(), 30);
        assert_eq!(FiniteGroup::dihedral(4).subgroups().len(), 10);
        assert_eq!(FiniteGroup::quaternion().subgroups().len(), 6);
        let c2c4 = FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(4));
        assert_eq!(c2c4.subgroups().len(), 8);
    }

    #[test]
    fn cycle_labels() {
        assert_eq!(cycle_notation(&perm(&[&[1, 2, 3]], 3)), "(1 2 3)");
        assert_eq!(cycle_notation(&[0, 1]), "()");
    }
}
