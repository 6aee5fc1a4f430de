use std::sync::Arc;

use deloc_core::charts::LinearChart;
use deloc_core::exactnum::{rational, Cyclotomic, Matrix, RootOfUnity};
use deloc_core::groupoids::{
    inertia_of_morphism, FiniteGroupoid, Functor, GeneralizedMorphism, InertiaGroupoid,
};
use deloc_core::groups::FiniteGroup;
use deloc_core::reps::Representation;
use deloc_core::sample::{corpus_groups, corpus_pairs, RepPool};
use deloc_core::series::{todd_delocalized, GradedSeries, NormalModel};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const ORDERS: [u32; 12] = [1, 2, 3, 4, 5, 6, 7, 8, 9, 12, 15, 24];

fn raw_vector(max: i64) -> impl Strategy<Value = (u32, Vec<(i64, i64)>)> {
    prop::sample::select(&ORDERS[..]).prop_flat_map(move |n| {
        (
            Just(n),
            prop::collection::vec((-max..=max, 1i64..=6), n as usize),
        )
    })
}

fn from_raw(n: u32, raw: &[(i64, i64)]) -> Cyclotomic {
    let q: Vec<_> = raw.iter().map(|&(a, b)| rational(a, b)).collect();
    Cyclotomic::canonicalize(n, &q).unwrap()
}

fn cyclotomic(max: i64) -> impl Strategy<Value = Cyclotomic> {
    raw_vector(max).prop_map(|(n, raw)| from_raw(n, &raw))
}

fn close(a: nalgebra::Complex<f64>, b: nalgebra::Complex<f64>, scale: f64) -> bool {
    (a - b).norm() <= 1e-10 * (1.0 + scale)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 1000, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn field_axioms(a in cyclotomic(20), b in cyclotomic(20), c in cyclotomic(20)) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        if !a.is_zero() {
            let inv = a.invert().unwrap();
            prop_assert!((&a * &inv).is_one());
            prop_assert_eq!((&b * &a).div(&a).unwrap(), b.clone());
        } else {
            prop_assert!(a.invert().is_err());
        }
    }

    #[test]
    fn numeric_embedding_is_a_ring_map(a in cyclotomic(1000), b in cyclotomic(1000)) {
        let (za, zb) = (a.to_complex(), b.to_complex());
        let scale = za.norm() * zb.norm() + za.norm() + zb.norm();
        prop_assert!(close((&a * &b).to_complex(), za * zb, scale));
        prop_assert!(close((&a + &b).to_complex(), za + zb, scale));
    }

    #[test]
    fn canonical_form_is_idempotent((n, raw) in raw_vector(50)) {
        let c = from_raw(n, &raw);
        let mut padded = c.lift(n).coeffs().to_vec();
        padded.resize(n as usize, rational(0, 1));
        let again = Cyclotomic::canonicalize(n, &padded).unwrap();
        prop_assert_eq!(again.coeffs(), c.coeffs());
        prop_assert_eq!(&again, &c);
        let direct: nalgebra::Complex<f64> = raw
            .iter()
            .enumerate()
            .map(|(k, &(p, q))| Cyclotomic::root_of_unity(n, k as i64).to_complex() * (p as f64 / q as f64))
            .sum();
        prop_assert!(close(c.to_complex(), direct, 50.0 * n as f64));
    }

    #[test]
    fn mixed_orders_compare_by_lifting(a in cyclotomic(9), m in prop::sample::select(&ORDERS[..])) {
        let lcm = num_integer::lcm(a.order(), m);
        prop_assert_eq!(&a.lift(lcm), &a);
        let shifted = &a + &Cyclotomic::root_of_unity(m, 1);
        prop_assert_eq!(&(&shifted - &a), &Cyclotomic::root_of_unity(m, 1));
    }
}

#[test]
fn class_equation_on_the_corpus() {
    for (name, g) in corpus_groups() {
        let conj = g.conjugacy();
        assert_eq!(conj.class_sizes.iter().sum::<usize>(), g.order(), "{name}");
        let mut seen = vec![false; g.order()];
        for c in 0..conj.num_classes() {
            assert_eq!(
                conj.class_sizes[c] * conj.centralizers[c].len(),
                g.order(),
                "{name} class {c}"
            );
            let rep = conj.class_reps[c];
            assert!(g.is_subgroup(&conj.centralizers[c]) && conj.centralizers[c].contains(&rep));
            for &x in &conj.classes[c] {
                assert!(
                    !std::mem::replace(&mut seen[x], true),
                    "{name}: classes overlap"
                );
            }
        }
        assert!(seen.iter().all(|&s| s), "{name}: classes do not cover");
    }
}

#[test]
fn fusion_and_cosets_on_the_corpus() {
    for (name, emb) in corpus_pairs() {
        let (small, big) = (emb.source(), emb.target());
        let fusion = emb.fuse_classes();
        for g in small.elements() {
            let fused = fusion.map[small.class_of(g)];
            for x in big.elements() {
                let y = big.mul(big.mul(x, emb.map(g)), big.inv(x));
                assert_eq!(big.class_of(y), fused, "{name}");
            }
        }
        let reps = emb.coset_reps();
        assert_eq!(reps.len() * small.order(), big.order(), "{name}");
        let mut hit = vec![false; big.order()];
        for &r in &reps {
            for &s in emb.images() {
                assert!(
                    !std::mem::replace(&mut hit[big.mul(r, s)], true),
                    "{name}: cosets overlap"
                );
            }
        }
    }
}

fn seeds() -> impl Strategy<Value = (usize, u64)> {
    (0..corpus_pairs().len(), any::<u64>())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn random_reps_are_homomorphisms((pair, seed) in seeds()) {
        let (_, emb) = &corpus_pairs()[pair];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rep = RepPool::new(emb.target(), 4).random_rep(&mut rng, 6);
        let g = rep.group().clone();
        prop_assert!(rep.matrix(g.identity()).is_identity());
        for a in g.elements() {
            for b in g.elements() {
                prop_assert_eq!(rep.matrix(g.mul(a, b)), &rep.matrix(a).mul(rep.matrix(b)));
            }
        }
    }

    #[test]
    fn frobenius_reciprocity((pair, seed) in seeds()) {
        let (_, emb) = &corpus_pairs()[pair];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let chi = RepPool::new(emb.source(), 4).random_rep(&mut rng, 4).character();
        let psi = RepPool::new(emb.target(), 4).random_rep(&mut rng, 4).character();
        let lhs = chi.induce_by_centralizers(emb).unwrap().inner_product(&psi).unwrap();
        let rhs = chi.inner_product(&psi.restrict(emb).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn lambda_minus_one_is_multiplicative((pair, seed) in seeds()) {
        let (_, emb) = &corpus_pairs()[pair];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pool = RepPool::new(emb.target(), 3);
        let (v, w) = (pool.random_rep(&mut rng, 3), pool.random_rep(&mut rng, 3));
        let sum = v.direct_sum(&w).unwrap().lambda_minus_one().unwrap();
        let product = v.lambda_minus_one().unwrap().mul(&w.lambda_minus_one().unwrap()).unwrap();
        prop_assert_eq!(sum, product);
    }

    #[test]
    fn euler_characteristic_is_invariant((pair, seed) in seeds()) {
        let (_, emb) = &corpus_pairs()[pair];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let complex = RepPool::new(emb.source(), 4).random_complex(&mut rng, 4, 6);
        prop_assert!(complex.validate().is_valid());
        let chi = complex.supertrace_class();
        prop_assert_eq!(&complex.cohomology_supertrace().unwrap(), &chi);
        prop_assert_eq!(complex.shift(1).supertrace_class(), chi.neg());
    }

    #[test]
    fn chart_invariants((pair, seed) in seeds()) {
        let (_, emb) = &corpus_pairs()[pair];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let chart = LinearChart::new(RepPool::new(emb.target(), 4).random_rep(&mut rng, 6));
        let g = chart.group().clone();
        for &h in &g.conjugacy().class_reps {
            let fixed = chart.fixed_subspace(h);
            let spectrum = chart.eigen_decomposition(h);
            prop_assert_eq!(spectrum.total_multiplicity(), chart.dim());
            prop_assert_eq!(fixed.cols(), spectrum.multiplicity_of(&RootOfUnity::one()));
            for z in g.centralizer(h) {
                let moved = chart.action().matrix(z).mul(&fixed);
                prop_assert_eq!(Matrix::hstack(&[&fixed, &moved]).rank(), fixed.cols());
            }
            for x in g.elements() {
                prop_assert!(chart.eigen_decomposition(g.conjugate(x, h)).same_spectrum(&spectrum));
            }
        }
    }
}

fn line_model() -> impl Strategy<Value = Vec<RootOfUnity>> {
    prop::collection::vec((0i64..12).prop_map(|k| RootOfUnity::new(12, k)), 0..=2)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn todd_is_multiplicative(a in line_model(), b in line_model()) {
        let (ma, mb) = (NormalModel::from_eigenvalues(&a, 4), NormalModel::from_eigenvalues(&b, 4));
        let joint = ma.concat(&mb).unwrap();
        let n = joint.num_vars();
        let embed = |s: &GradedSeries, offset: usize| {
            let mut out = GradedSeries::zero(n, 4);
            for (i, c) in s.coeffs().iter().enumerate() {
                let mut exps = vec![0u32; n];
                exps[offset..offset + s.num_vars()].copy_from_slice(s.basis().monomial(i));
                out = out.add(&GradedSeries::monomial(&exps, c.clone(), 4)).unwrap();
            }
            out
        };
        let product = embed(&todd_delocalized(&ma), 0).mul(&embed(&todd_delocalized(&mb), ma.num_vars())).unwrap();
        prop_assert_eq!(todd_delocalized(&joint), product);
    }

    #[test]
    fn todd_at_zero_inverts_lambda(a in line_model()) {
        let moving: Vec<RootOfUnity> = a.into_iter().filter(|z| !z.is_one()).collect();
        let model = NormalModel::from_eigenvalues(&moving, 3);
        let lambda = moving
            .iter()
            .fold(Cyclotomic::one(), |acc, z| &acc * &(&Cyclotomic::one() - &z.inverse().to_cyclotomic()));
        prop_assert_eq!(todd_delocalized(&model).constant_term().clone(), lambda.invert().unwrap());
    }
}

#[test]
fn inertia_respects_composition_on_s3() {
    let pairs: Vec<_> = corpus_pairs()
        .into_iter()
        .filter(|(name, _)| name.starts_with("S3"))
        .collect();
    let point = |g: &Arc<FiniteGroup>| Arc::new(FiniteGroupoid::point(g));
    for (name, emb) in &pairs {
        let (g, h) = (point(emb.source()), point(emb.target()));
        let f =
            GeneralizedMorphism::comma(&Functor::equivariant(&g, &h, emb, &[0]).unwrap()).unwrap();
        let id = GeneralizedMorphism::identity(&h);
        let (ig, ih) = (
            InertiaGroupoid::new(&g).unwrap(),
            InertiaGroupoid::new(&h).unwrap(),
        );
        let direct = inertia_of_morphism(&f.compose(&id).unwrap(), &ig, &ih).unwrap();
        let stepwise = inertia_of_morphism(&f, &ig, &ih)
            .unwrap()
            .compose(&inertia_of_morphism(&id, &ih, &ih).unwrap())
            .unwrap();
        assert!(direct.isomorphism_to(&stepwise).is_some(), "{name}");
        direct.check_axioms().unwrap();
    }
}

#[test]
fn trivial_line_has_vanishing_lambda() {
    for (name, g) in corpus_groups() {
        let rep = Representation::trivial(&g);
        let lambda = rep.lambda_minus_one().unwrap();
        assert!(lambda.values().iter().all(Cyclotomic::is_zero), "{name}");
    }
}
