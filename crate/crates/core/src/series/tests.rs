use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use super::*;
use crate::exactnum::{rational, Matrix, RootOfUnity};
use crate::groups::FiniteGroup;
use crate::reps::Representation;

fn q(n: i64, d: i64) -> Cyclotomic {
    Cyclotomic::from_rational(BigRational::new(BigInt::from(n), BigInt::from(d)))
}

fn x(trunc: usize) -> GradedSeries {
    GradedSeries::variable(0, 1, trunc)
}

fn one(trunc: usize) -> GradedSeries {
    GradedSeries::one(1, trunc)
}

/// Bernoulli numbers with `B_1 = +1/2`, from `Σ_{j<m} C(m+1, j) B_j = −(m+1) B_m`
/// rearranged for the minus convention, then flipped.
fn bernoulli_plus(n: usize) -> Vec<BigRational> {
    let mut b: Vec<BigRational> = Vec::with_capacity(n + 1);
    for m in 0..=n {
        if m == 0 {
            b.push(BigRational::from_integer(1.into()));
            continue;
        }
        let mut acc = BigRational::from_integer(0.into());
        let mut binom = BigInt::from(1);
        for (j, bj) in b.iter().enumerate() {
            acc += bj * BigRational::from_integer(binom.clone());
            binom = binom * BigInt::from(m + 1 - j) / BigInt::from(j + 1);
        }
        b.push(-acc / BigRational::from_integer(BigInt::from(m + 1)));
    }
    if n >= 1 {
        b[1] = -b[1].clone();
    }
    b
}

#[test]
fn basis_order() {
    let b = MonomialBasis::get(2, 2);
    let rendered: Vec<String> = (0..b.len()).map(|i| b.render(i)).collect();
    assert_eq!(rendered, vec!["1", "x1", "x2", "x1^2", "x1*x2", "x2^2"]);
    assert_eq!(MonomialBasis::get(4, 6).len(), 210);
}

#[test]
fn mul_examples() {
    let s = GradedSeries::univariate([q(3, 1), q(-1, 2), q(5, 7)], 2);
    assert_eq!(one(2).mul(&s).unwrap(), s);
    let p = one(2)
        .add(&x(2))
        .unwrap()
        .mul(&one(2).sub(&x(2)).unwrap())
        .unwrap();
    assert_eq!(p, GradedSeries::univariate([q(1, 1), q(0, 1), q(-1, 1)], 2));
    let xd = GradedSeries::monomial(&[3], Cyclotomic::one(), 3);
    assert!(xd.mul(&x(3)).unwrap().is_zero());
    assert!(matches!(
        one(2).mul(&one(3)),
        Err(SeriesError::Incompatible(..))
    ));
    assert!(matches!(
        one(2).add(&GradedSeries::one(2, 2)),
        Err(SeriesError::Incompatible(..))
    ));
}

#[test]
fn invert_examples() {
    let inv = one(3).sub(&x(3)).unwrap().invert_unit().unwrap();
    assert_eq!(inv, GradedSeries::univariate(vec![q(1, 1); 4], 3));
    assert_eq!(
        GradedSeries::constant(q(2, 1), 1, 3).invert_unit().unwrap(),
        GradedSeries::constant(q(1, 2), 1, 3)
    );
    let e = x(2).neg().exp_nilpotent().unwrap();
    let inv = one(2).add(&e).unwrap().invert_unit().unwrap();
    assert_eq!(
        inv,
        GradedSeries::univariate([q(1, 2), q(1, 4), q(0, 1)], 2)
    );
    assert_eq!(x(2).invert_unit(), Err(SeriesError::NotAUnit));
}

#[test]
fn exp_examples() {
    assert_eq!(
        GradedSeries::zero(2, 4).exp_nilpotent().unwrap(),
        GradedSeries::one(2, 4)
    );
    let e = x(3).exp_nilpotent().unwrap();
    assert_eq!(
        e,
        GradedSeries::univariate([q(1, 1), q(1, 1), q(1, 2), q(1, 6)], 3)
    );
    assert_eq!(e.to_string(), "1 + x + x^2/2 + x^3/6");
    let prod = e.mul(&x(3).neg().exp_nilpotent().unwrap()).unwrap();
    assert_eq!(prod, one(3));
    assert_eq!(one(3).exp_nilpotent(), Err(SeriesError::NotNilpotent));
}

#[test]
fn todd_examples() {
    let empty = NormalModel::from_eigenvalues(&[], 4);
    assert_eq!(todd_delocalized(&empty), GradedSeries::one(0, 4));

    let fixed = NormalModel::from_eigenvalues(&[RootOfUnity::one()], 2);
    let td = todd_delocalized(&fixed);
    assert_eq!(td.to_string(), "1 + x/2 + x^2/12");

    let b = bernoulli_plus(6);
    let fixed6 = NormalModel::from_eigenvalues(&[RootOfUnity::one()], 6);
    let expected = GradedSeries::univariate(
        (0..=6).map(|k| {
            let fact: BigInt = (1..=k as u64).map(BigInt::from).product();
            Cyclotomic::from_rational(b[k].clone() / BigRational::from_integer(fact))
        }),
        6,
    );
    assert_eq!(todd_delocalized(&fixed6), expected);

    let minus = NormalModel::from_eigenvalues(&[RootOfUnity::new(2, 1)], 1);
    assert_eq!(
        todd_delocalized(&minus),
        GradedSeries::univariate([q(1, 2), q(1, 4)], 1)
    );
}

#[test]
fn koszul_examples() {
    let empty = NormalModel::from_eigenvalues(&[], 3);
    assert_eq!(koszul_ch(&empty), GradedSeries::one(0, 3));

    let z = RootOfUnity::new(3, 1);
    let model = NormalModel::from_eigenvalues(&[z], 4);
    let expected = one(4)
        .sub(
            &x(4)
                .neg()
                .exp_nilpotent()
                .unwrap()
                .scale(&z.inverse().to_cyclotomic()),
        )
        .unwrap();
    assert_eq!(koszul_ch(&model), expected);

    // degree 0 against λ₋₁ of the matching C12 representation
    let c12 = Arc::new(FiniteGroup::cyclic(12));
    let exps = [0i64, 4, 6, 9];
    let m = Matrix::from_fn(4, 4, |i, j| {
        if i == j {
            Cyclotomic::root_of_unity(12, exps[i])
        } else {
            Cyclotomic::zero()
        }
    });
    let rep = Representation::from_generator_images(c12.clone(), 4, &[m]).unwrap();
    let lambda = rep.lambda_minus_one().unwrap();
    for g in c12.elements() {
        let model = NormalModel::of_representation(&rep, g, 2);
        assert_eq!(koszul_ch(&model).constant_term(), lambda.value_at(g));
    }
}

#[test]
fn zero_section_examples() {
    assert!(zero_section_identity(&NormalModel::from_eigenvalues(&[], 6)).passed);
    let fixed = NormalModel::from_eigenvalues(&[RootOfUnity::one()], 6);
    let report = zero_section_identity(&fixed);
    assert!(report.passed, "{report:?}");
    let mixed = NormalModel::from_eigenvalues(
        &[
            RootOfUnity::one(),
            RootOfUnity::new(3, 1),
            RootOfUnity::new(2, 1),
        ],
        6,
    );
    assert!(zero_section_identity(&mixed).passed);
}

#[test]
fn wrong_convention_is_caught() {
    let model = NormalModel::from_eigenvalues(&[RootOfUnity::new(3, 1)], 3);
    let report = zero_section_identity_with(&model, EigenConvention::Direct);
    assert!(!report.passed);
    assert_eq!(report.first_difference.unwrap().monomial, "1");
    // real eigenvalues cannot tell the conventions apart
    let real = NormalModel::from_eigenvalues(&[RootOfUnity::new(2, 1)], 3);
    assert!(zero_section_identity_with(&real, EigenConvention::Direct).passed);
}

#[test]
fn model_validation() {
    let z = RootOfUnity::one();
    assert!(NormalModel::new(vec![(z, 0), (z, 0)], 2, 3).is_err());
    assert!(NormalModel::new(vec![(z, 2)], 2, 3).is_err());
    assert!(NormalModel::new(vec![(z, 1)], 2, 3).is_ok());
}

#[test]
fn delocalized_classes() {
    let c2 = Arc::new(FiniteGroup::cyclic(2));
    let sign =
        Representation::linear(&c2, vec![Cyclotomic::one(), Cyclotomic::from_int(-1)]).unwrap();
    let td = DelocalizedClass::todd(&sign, 2);
    assert_eq!(td.len(), 2);
    assert_eq!(td.component(0).to_string(), "1 + x/2 + x^2/12");
    assert_eq!(td.component(1).to_string(), "1/2 + x/4");
    let ch = DelocalizedClass::chern_of_representation(&sign, 1);
    assert_eq!(
        ch.degree_zero(),
        vec![Cyclotomic::one(), Cyclotomic::from_int(-1)]
    );
    assert_eq!(ch.component(1).to_string(), "-1 - x");
}

#[test]
fn display_with_cyclotomic_coefficients() {
    let s = GradedSeries::variable(1, 2, 2).scale(&Cyclotomic::root_of_unity(3, 1));
    assert_eq!(
        s.to_string(),
        format!("({})*x2", Cyclotomic::root_of_unity(3, 1))
    );
    assert_eq!(GradedSeries::zero(1, 2).to_string(), "0");
}

fn eigen_strategy(max_lines: usize) -> impl Strategy<Value = Vec<RootOfUnity>> {
    prop::collection::vec(
        (0i64..12).prop_map(|k| RootOfUnity::new(12, k)),
        0..=max_lines,
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn koszul_paths_agree(eigs in eigen_strategy(4), trunc in 0usize..=3) {
        let model = NormalModel::from_eigenvalues(&eigs, trunc);
        prop_assert_eq!(koszul_ch(&model), koszul_by_factors(&model));
        prop_assert!(zero_section_identity(&model).passed);
    }

    #[test]
    fn todd_degree_zero_is_inverse_lambda(eigs in eigen_strategy(4)) {
        let eigs: Vec<RootOfUnity> = eigs.into_iter().filter(|z| !z.is_one()).collect();
        let model = NormalModel::from_eigenvalues(&eigs, 1);
        let lambda = eigs
            .iter()
            .fold(Cyclotomic::one(), |acc, z| acc * (Cyclotomic::one() - z.inverse().to_cyclotomic()));
        prop_assert_eq!(todd_delocalized(&model).constant_term().clone(), lambda.invert().unwrap());
    }

    #[test]
    fn todd_is_multiplicative(a in eigen_strategy(2), b in eigen_strategy(2), trunc in 0usize..=3) {
        let ma = NormalModel::from_eigenvalues(&a, trunc);
        let mb = NormalModel::from_eigenvalues(&b, trunc);
        let joined = ma.concat(&mb).unwrap();
        let n = joined.num_vars();
        // embed each factor's series into the joined variables
        let lift = |m: &NormalModel, offset: usize| {
            let lines = m.lines().iter().map(|&(z, j)| (z, j + offset)).collect();
            NormalModel::new(lines, n, trunc).unwrap()
        };
        let prod = todd_delocalized(&lift(&ma, 0)).mul(&todd_delocalized(&lift(&mb, a.len()))).unwrap();
        prop_assert_eq!(todd_delocalized(&joined), prod);
    }

    #[test]
    fn mul_is_commutative_and_associative(
        a in prop::collection::vec(-3i64..=3, 6),
        b in prop::collection::vec(-3i64..=3, 6),
        c in prop::collection::vec(-3i64..=3, 6),
    ) {
        let mk = |v: &[i64]| {
            let mut s = GradedSeries::zero(2, 2);
            for (i, &k) in v.iter().enumerate() {
                let exps = MonomialBasis::get(2, 2).monomial(i).to_vec();
                s = s.add(&GradedSeries::monomial(&exps, Cyclotomic::from_int(k), 2)).unwrap();
            }
            s
        };
        let (a, b, c) = (mk(&a), mk(&b), mk(&c));
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
        if !a.constant_term().is_zero() {
            prop_assert_eq!(a.mul(&a.invert_unit().unwrap()).unwrap(), GradedSeries::one(2, 2));
        }
    }

    #[test]
    fn machine_and_bignum_paths_agree(
        a in prop::collection::vec((-4i64..=4, 1i64..=6, 0i64..12), 10),
        b in prop::collection::vec((-4i64..=4, 1i64..=6, 0i64..12), 10),
    ) {
        let mk = |v: &[(i64, i64, i64)]| {
            let basis = MonomialBasis::get(3, 2);
            let coeffs = v
                .iter()
                .map(|&(n, d, k)| &Cyclotomic::root_of_unity(12, k) * &Cyclotomic::from_rational(rational(n, d)))
                .collect();
            GradedSeries::from_parts(basis, coeffs)
        };
        let (a, b) = (mk(&a), mk(&b));
        prop_assert_eq!(a.mul_fixed(&b).unwrap(), a.mul_exact(&b));
        if let Ok(c) = a.constant_term().invert() {
            prop_assert_eq!(a.invert_fixed(&c).unwrap(), a.invert_exact(&c));
        }
    }
}

#[test]
fn machine_path_falls_back_on_overflow() {
    let big = BigInt::from(10).pow(30);
    let c = Cyclotomic::from_rational(BigRational::new(big.clone() + 1, big.clone()));
    let s = GradedSeries::constant(c.clone(), 1, 2)
        .add(&GradedSeries::variable(0, 1, 2))
        .unwrap();
    assert!(s.mul_fixed(&s).is_none());
    let sq = s.mul(&s).unwrap();
    assert_eq!(sq, s.mul_exact(&s));
    assert_eq!(sq.coefficient(&[1]), &c + &c);
    assert_eq!(
        s.mul(&s.invert_unit().unwrap()).unwrap(),
        GradedSeries::one(1, 2)
    );
}
