use super::FiniteGroup;

fn cycle(points: &[usize], degree: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..degree).collect();
    for k in 0..points.len() {
        p[points[k]] = points[(k + 1) % points.len()];
    }
    p
}

impl FiniteGroup {
    pub fn trivial() -> Self {
        FiniteGroup::from_generators(1, &[]).expect("trivial group")
    }

    /// Cyclic group of order `n` generated by the rotation of `n` points.
    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1, "cyclic group of order 0");
        let rot: Vec<usize> = (0..n).collect();
        FiniteGroup::from_generators(n, &[cycle(&rot, n)]).expect("cyclic group")
    }

    /// Symmetric group on `n` points, generated by `(1 2)` and `(1 2 … n)`.
    pub fn symmetric(n: usize) -> Self {
        assert!(n >= 1, "symmetric group on 0 points");
        let mut gens = Vec::new();
        if n >= 2 {
            gens.push(cycle(&[0, 1], n));
        }
        if n >= 3 {
            let all: Vec<usize> = (0..n).collect();
            gens.push(cycle(&all, n));
        }
        FiniteGroup::from_generators(n, &gens).expect("symmetric group")
    }

    /// Dihedral group of order `2n` acting on the vertices of an `n`-gon.
    pub fn dihedral(n: usize) -> Self {
        if n <= 2 {
            return FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(n));
        }
        let all: Vec<usize> = (0..n).collect();
        let reflection: Vec<usize> = (0..n).map(|i| (n - i) % n).collect();
        FiniteGroup::from_generators(n, &[cycle(&all, n), reflection]).expect("dihedral group")
    }

    /// Quaternion group {±1, ±i, ±j, ±k}; index `4s + u` stands for
    /// `(-1)^s` times unit `u` in (1, i, j, k).
    pub fn quaternion() -> Self {
        // unit products as (sign, unit)
        const UNITS: [[(usize, usize); 4]; 4] = [
            [(0, 0), (0, 1), (0, 2), (0, 3)],
            [(0, 1), (1, 0), (0, 3), (1, 2)],
            [(0, 2), (1, 3), (1, 0), (0, 1)],
            [(0, 3), (0, 2), (1, 1), (1, 0)],
        ];
        let table: Vec<Vec<usize>> = (0..8)
            .map(|a| {
                (0..8)
                    .map(|b| {
                        let (s, u) = UNITS[a % 4][b % 4];
                        ((s + a / 4 + b / 4) % 2) * 4 + u
                    })
                    .collect()
            })
            .collect();
        FiniteGroup::from_cayley(&table).expect("quaternion group")
    }

    /// Direct product with element `(a, b)` at index `a * |B| + b`.
    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Self {
        let nb = b.order();
        let table: Vec<Vec<usize>> = (0..a.order() * nb)
            .map(|x| {
                (0..a.order() * nb)
                    .map(|y| a.mul(x / nb, y / nb) * nb + b.mul(x % nb, y % nb))
                    .collect()
            })
            .collect();
        let mut g = FiniteGroup::from_cayley(&table).expect("direct product");
        if let (Some(pa), Some(pb)) = (&a.perms, &b.perms) {
            let da = pa[0].len();
            g.perms = Some(
                (0..a.order() * nb)
                    .map(|x| {
                        let mut p = pa[x / nb].clone();
                        p.extend(pb[x % nb].iter().map(|&i| i + da));
                        p
                    })
                    .collect(),
            );
        }
        g
    }
}
