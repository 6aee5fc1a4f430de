use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::sample::RepPool;

fn trivial_line() -> Representation {
    Representation::trivial(&Arc::new(FiniteGroup::trivial()))
}

fn identity_complex(rep: &Representation) -> EquivariantComplex {
    EquivariantComplex::new(
        0,
        vec![rep.clone(), rep.clone()],
        vec![Matrix::identity(rep.dim())],
    )
    .unwrap()
}

fn is_zero_char(chi: &VirtualCharacter) -> bool {
    chi.values().iter().all(Cyclotomic::is_zero)
}

fn c4_pool() -> RepPool {
    RepPool::new(&Arc::new(FiniteGroup::cyclic(4)), 6)
}

#[test]
fn validation_examples() {
    let single = EquivariantComplex::concentrated(trivial_line(), 0);
    assert!(single.validate().is_valid());
    assert!(identity_complex(&trivial_line()).validate().is_valid());

    let c2 = Arc::new(FiniteGroup::cyclic(2));
    let triv = Representation::trivial(&c2);
    let sign =
        Representation::linear(&c2, vec![Cyclotomic::one(), Cyclotomic::from_int(-1)]).unwrap();
    let bad =
        EquivariantComplex::from_parts(0, vec![triv, sign], vec![Matrix::identity(1)]).unwrap();
    let report = bad.validate();
    assert_eq!(report.not_equivariant, vec![(0, 1)]);
    assert!(matches!(bad.cohomology(), Err(ComplexError::Invalid(_))));

    let line = trivial_line();
    let d_sq = EquivariantComplex::from_parts(
        0,
        vec![line.clone(), line.clone(), line],
        vec![Matrix::identity(1), Matrix::identity(1)],
    )
    .unwrap();
    assert_eq!(d_sq.validate().d_squared, vec![0]);
}

#[test]
fn cohomology_examples() {
    let id = identity_complex(&trivial_line());
    assert!(id.is_acyclic().unwrap());

    let s3 = Arc::new(FiniteGroup::symmetric(3));
    let nat = Representation::natural(&s3).unwrap();
    let triv = Representation::trivial(&s3);
    let zero_d = EquivariantComplex::new(
        -1,
        vec![nat.clone(), triv.clone()],
        vec![Matrix::zeros(1, 3)],
    )
    .unwrap();
    let h = zero_d.cohomology().unwrap();
    assert_eq!(h[0].1, nat.character());
    assert_eq!(h[1].1, triv.character());

    // Koszul complex with zero section: H^{-k} = Λ^k of the dual
    let c3 = Arc::new(FiniteGroup::cyclic(3));
    let m = Matrix::from_fn(2, 2, |i, j| {
        if i == j {
            Cyclotomic::root_of_unity(3, i as i64 + 1)
        } else {
            Cyclotomic::zero()
        }
    });
    let v = Representation::from_generator_images(c3, 2, &[m]).unwrap();
    let k = EquivariantComplex::koszul_at_zero(&v).unwrap();
    assert_eq!(k.lowest(), -2);
    for (deg, chi) in k.cohomology().unwrap() {
        let expected = v
            .dual()
            .exterior_power((-deg) as usize)
            .unwrap()
            .character();
        assert_eq!(chi, expected);
    }
}

#[test]
fn supertrace_examples() {
    let s3 = Arc::new(FiniteGroup::symmetric(3));
    let nat = Representation::natural(&s3).unwrap();
    assert!(is_zero_char(&identity_complex(&nat).supertrace_class()));
    assert_eq!(
        EquivariantComplex::concentrated(nat.clone(), 0).supertrace_class(),
        nat.character()
    );
    assert_eq!(
        EquivariantComplex::concentrated(nat.clone(), 1).supertrace_class(),
        nat.character().neg()
    );

    let pool = RepPool::new(&s3, 6);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..10 {
        let c = pool.random_complex(&mut rng, 4, 6);
        assert_eq!(c.supertrace_class(), c.cohomology_supertrace().unwrap());
    }
}

#[test]
fn shift_negates_supertrace() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let c = c4_pool().random_complex(&mut rng, 4, 5);
    let s = c.shift(1);
    assert!(s.validate().is_valid());
    assert_eq!(s.supertrace_class(), c.supertrace_class().neg());
    assert_eq!(c.shift(2).supertrace_class(), c.supertrace_class());
}

#[test]
fn tensor_is_a_complex_and_multiplies_supertraces() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let pool = RepPool::new(&Arc::new(FiniteGroup::symmetric(3)), 3);
    for _ in 0..4 {
        let a = pool.random_complex(&mut rng, 3, 3);
        let b = pool.random_complex(&mut rng, 3, 3);
        let t = a.tensor(&b).unwrap();
        assert!(t.validate().is_valid());
        assert_eq!(
            t.supertrace_class(),
            a.supertrace_class().mul(&b.supertrace_class()).unwrap()
        );
    }
}

#[test]
fn cone_examples() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let pool = c4_pool();
    let e = pool.random_complex(&mut rng, 3, 4);
    let f = pool.random_complex(&mut rng, 3, 4);

    let cone_id = ChainMap::identity(&e).mapping_cone().unwrap();
    assert!(cone_id.is_acyclic().unwrap());

    let cone_zero = ChainMap::zero(&e, &f).unwrap().mapping_cone().unwrap();
    let expected = f.supertrace_class().sub(&e.supertrace_class()).unwrap();
    assert_eq!(cone_zero.supertrace_class(), expected);

    // inclusion of E into E ⊕ (acyclic) is a quasi-isomorphism
    let acyclic = identity_complex(&pool.random_rep(&mut rng, 3)).shift(e.lowest() - 1);
    let sum = e.direct_sum(&acyclic).unwrap();
    let maps: BTreeMap<i32, Matrix> = e
        .degrees()
        .map(|k| {
            let mut m = Matrix::zeros(sum.dim_at(k), e.dim_at(k));
            m.set_block(0, 0, &Matrix::identity(e.dim_at(k)));
            (k, m)
        })
        .collect();
    let phi = ChainMap::new(e.clone(), sum, maps).unwrap();
    let cone = phi.mapping_cone().unwrap();
    assert!(cone.is_acyclic().unwrap());
    assert!(is_zero_char(&cone.supertrace_class()));
}

#[test]
fn non_chain_map_rejected() {
    let line = trivial_line();
    let id = identity_complex(&line);
    let single = EquivariantComplex::concentrated(line, 0);
    let maps = BTreeMap::from([(0, Matrix::identity(1))]);
    assert!(matches!(
        ChainMap::new(single, id, maps),
        Err(ComplexError::NotClosed(_))
    ));
}

#[test]
fn heat_examples() {
    let spec = HeatSpec::default();
    let s3 = Arc::new(FiniteGroup::symmetric(3));
    let nat = Representation::natural(&s3).unwrap();
    let triv = Representation::trivial(&s3);
    let zero_d =
        EquivariantComplex::new(0, vec![nat.clone(), triv], vec![Matrix::zeros(1, 3)]).unwrap();
    for g in s3.elements() {
        assert!(zero_d.check_heat(g, &spec).passed);
    }
    let id = identity_complex(&nat);
    for g in s3.elements() {
        for v in id.heat_supertrace(g, &spec) {
            assert!(v.norm() < 1e-8);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let pool = c4_pool();
    for _ in 0..5 {
        let c = pool.random_complex(&mut rng, 4, 6);
        let coh = c.cohomology_supertrace().unwrap();
        for g in c.group().elements() {
            let exact = coh.value_at(g).to_complex();
            for v in c.heat_supertrace(g, &spec) {
                assert!((v - exact).norm() < 1e-8, "{v} vs {exact}");
            }
        }
    }
}

#[test]
fn heat_handles_non_unitary_pieces() {
    let s3 = Arc::new(FiniteGroup::symmetric(3));
    let t = Matrix::from_int_rows(&[&[-1, 1], &[0, 1]]);
    let r = Matrix::from_int_rows(&[&[0, -1], &[1, -1]]);
    let std = Representation::from_generator_images(s3.clone(), 2, &[t, r]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let a = crate::sample::random_automorphism(&std, &mut rng);
    let c = EquivariantComplex::new(0, vec![std.clone(), std], vec![a]).unwrap();
    for g in s3.elements() {
        assert!(c.check_heat(g, &HeatSpec::default()).passed);
    }
}
