use super::*;
use crate::exactnum::RootOfUnity;

fn c(n: i64) -> Cyclotomic {
    Cyclotomic::from_int(n)
}

fn zeta(n: u32, k: i64) -> Cyclotomic {
    Cyclotomic::root_of_unity(n, k)
}

fn s3() -> Arc<FiniteGroup> {
    Arc::new(FiniteGroup::symmetric(3))
}

fn sub_of_order(h: &Arc<FiniteGroup>, order: usize) -> GroupEmbedding {
    let elems = h
        .subgroups()
        .into_iter()
        .find(|s| s.len() == order)
        .unwrap();
    GroupEmbedding::subgroup(h, &elems).unwrap()
}

fn standard(g: &Arc<FiniteGroup>) -> Representation {
    let t = Matrix::from_int_rows(&[&[-1, 1], &[0, 1]]);
    let r = Matrix::from_int_rows(&[&[0, -1], &[1, -1]]);
    Representation::from_generator_images(g.clone(), 2, &[t, r]).unwrap()
}

fn weight_line(g: &Arc<FiniteGroup>, n: u32, k: i64) -> Representation {
    Representation::from_generator_images(g.clone(), 1, &[Matrix::scalar(1, &zeta(n, k))]).unwrap()
}

fn values_by_order(chi: &VirtualCharacter) -> Vec<Cyclotomic> {
    let g = chi.group();
    let mut out: Vec<(usize, Cyclotomic)> = g
        .conjugacy()
        .class_reps
        .iter()
        .map(|&x| (g.element_order(x), chi.value_at(x).clone()))
        .collect();
    out.sort_by_key(|p| p.0);
    out.into_iter().map(|p| p.1).collect()
}

fn trivial_class(g: &Arc<FiniteGroup>) -> EquivariantComplex {
    EquivariantComplex::concentrated(Representation::trivial(g), 0)
}

fn value(r: &ClassReport, name: &str) -> String {
    r.values
        .iter()
        .find(|v| v.name == name)
        .unwrap()
        .value
        .clone()
}

fn class_of_order(report: &CheckReport, group: &FiniteGroup, order: usize) -> ClassReport {
    report
        .classes
        .iter()
        .find(|c| group.element_order(c.element) == order)
        .unwrap()
        .clone()
}

#[test]
fn pushforward_examples() {
    let g = s3();
    let id = GroupEmbedding::identity(&g);
    let chi = standard(&g).character();
    assert_eq!(pushforward_characters(&id, &chi).unwrap(), chi);

    let c2 = sub_of_order(&g, 2);
    let triv = Representation::trivial(c2.source()).character();
    let pushed = pushforward_characters(&c2, &triv).unwrap();
    assert_eq!(values_by_order(&pushed), vec![c(3), c(1), c(0)]);
    assert_eq!(pushed, triv.induce_by_sum(&c2).unwrap());

    let c3 = sub_of_order(&g, 3);
    let line = weight_line(c3.source(), 3, 1).character();
    let pushed = pushforward_characters(&c3, &line).unwrap();
    assert_eq!(values_by_order(&pushed), vec![c(2), c(0), c(-1)]);
    assert_eq!(pushed, line.induce_by_sum(&c3).unwrap());
}

#[test]
fn iso_spatial_examples() {
    let g = s3();
    let c2 = sub_of_order(&g, 2);
    let sc = IsoSpatialScenario::new(
        c2.clone(),
        Representation::zero(&g),
        trivial_class(c2.source()),
    )
    .unwrap();
    let report = check_iso_spatial(&sc).unwrap();
    assert!(report.passed);
    for (order, want) in [(1, "3"), (2, "1"), (3, "0")] {
        let r = class_of_order(&report, &g, order);
        for path in ["induced", "pushforward", "matrices"] {
            assert_eq!(value(&r, path), want);
        }
    }

    let same = IsoSpatialScenario::new(
        GroupEmbedding::identity(&g),
        standard(&g),
        trivial_class(&g),
    )
    .unwrap();
    assert!(check_iso_spatial(&same).unwrap().passed);

    let bad = check_iso_spatial_with(&sc, Weight::Unit).unwrap();
    assert!(!bad.passed);
    assert_eq!(bad.first_failure.unwrap().class, 0);
}

#[test]
fn iso_spatial_rejects_invalid_complex() {
    let g = s3();
    let std = standard(&g);
    let bogus = EquivariantComplex::from_parts(
        0,
        vec![Representation::trivial(&g), std],
        vec![Matrix::from_int_rows(&[&[1], &[0]])],
    )
    .unwrap();
    let err = IsoSpatialScenario::new(
        GroupEmbedding::identity(&g),
        Representation::zero(&g),
        bogus,
    );
    assert!(matches!(err, Err(RrgError::InvalidComplex(_))));
}

fn minus_line_scenario() -> ZeroSectionScenario {
    let g = Arc::new(FiniteGroup::cyclic(2));
    let w = weight_line(&g, 2, 1);
    ZeroSectionScenario::new(
        Representation::zero(&g),
        w,
        Matrix::zeros(1, 0),
        trivial_class(&g),
        6,
    )
    .unwrap()
}

#[test]
fn zero_section_examples() {
    let sc = minus_line_scenario();
    let report = check_zero_section(&sc).unwrap();
    assert!(report.passed);
    let tau = &report.classes[1];
    assert_eq!(value(tau, "twisted"), "2");
    assert_eq!(value(tau, "product"), "2");

    // N = 0
    let g = s3();
    let std = standard(&g);
    let full =
        ZeroSectionScenario::new(std.clone(), std, Matrix::identity(2), trivial_class(&g), 4)
            .unwrap();
    assert_eq!(full.normal().dim(), 0);
    let report = check_zero_section(&full).unwrap();
    assert!(report.passed);
    assert!(report.classes.iter().all(|r| value(r, "twisted") == "1"));
}

#[test]
fn zero_section_mixed_model() {
    let g = Arc::new(FiniteGroup::cyclic(12));
    let lines: Vec<Representation> = [1, 4, 6].iter().map(|&k| weight_line(&g, 12, k)).collect();
    let w = lines[0]
        .direct_sum(&lines[1])
        .unwrap()
        .direct_sum(&lines[2])
        .unwrap();
    let sc = ZeroSectionScenario::new(
        Representation::zero(&g),
        w,
        Matrix::zeros(3, 0),
        trivial_class(&g),
        6,
    )
    .unwrap();
    let report = check_zero_section(&sc).unwrap();
    assert!(report.passed, "{:?}", report.first_failure);
    assert_eq!(report.classes.len(), 12);
}

#[test]
fn zero_section_wrong_convention_fails_with_monomial() {
    let g = Arc::new(FiniteGroup::cyclic(3));
    let w = weight_line(&g, 3, 1);
    let sc = ZeroSectionScenario::new(
        Representation::zero(&g),
        w,
        Matrix::zeros(1, 0),
        trivial_class(&g),
        4,
    )
    .unwrap();
    let report = check_zero_section_with(&sc, EigenConvention::Direct).unwrap();
    assert!(!report.passed);
    assert_eq!(report.first_failure.unwrap().monomial.as_deref(), Some("1"));
}

#[test]
fn zero_section_rejects_bad_inclusions() {
    let g = s3();
    let std = standard(&g);
    let triv = Representation::trivial(&g);
    let col = Matrix::from_int_rows(&[&[1], &[0]]);
    let err = ZeroSectionScenario::new(triv, std.clone(), col.clone(), trivial_class(&g), 2);
    assert!(matches!(err, Err(RrgError::NotEquivariant)));
    let err = ZeroSectionScenario::from_subspace(std, col, trivial_class(&g), 2);
    assert!(matches!(err, Err(RrgError::Rep(RepError::NotInvariant(_)))));
}

#[test]
fn general_examples() {
    let c2 = Arc::new(FiniteGroup::cyclic(2));
    let sc = GeneralScenario::new(
        GroupEmbedding::identity(&c2),
        Representation::zero(&c2),
        weight_line(&c2, 2, 1),
        Matrix::zeros(1, 0),
        trivial_class(&c2),
        4,
    )
    .unwrap();
    let report = check_general_degree0(&sc).unwrap();
    assert!(report.passed);
    assert_eq!(report.classes[0].status, Status::Skipped);
    assert_eq!(value(&report.classes[1], "induced"), "2");
    assert_eq!(value(&report.classes[1], "fixed-point"), "2");

    // C2 ⊂ C4, W = C with weight ζ4
    let c4 = Arc::new(FiniteGroup::cyclic(4));
    let minus = c4.elements().find(|&x| c4.element_order(x) == 2).unwrap();
    let emb = GroupEmbedding::subgroup(&c4, &[c4.identity(), minus]).unwrap();
    let sc = GeneralScenario::new(
        emb.clone(),
        Representation::zero(&c4),
        weight_line(&c4, 4, 1),
        Matrix::zeros(1, 0),
        trivial_class(emb.source()),
        4,
    )
    .unwrap();
    let report = check_general_degree0(&sc).unwrap();
    assert!(report.passed);
    let r = report.classes.iter().find(|r| r.element == minus).unwrap();
    assert_eq!(r.status, Status::Pass);
    assert_eq!(value(r, "induced"), "4");
    assert_eq!(value(r, "fixed-point"), "4");
    // generators of C4 have no preimage: both sides vanish
    assert_eq!(report.count(Status::Pass), 3);

    let bad = check_general_degree0_with(&sc, Weight::Unit, EigenConvention::Dual).unwrap();
    assert!(!bad.passed);
}

#[test]
fn general_all_skipped() {
    let g = s3();
    let c2 = sub_of_order(&g, 2);
    let triv = Representation::trivial(&g);
    let sc = GeneralScenario::new(
        c2.clone(),
        triv.clone(),
        triv,
        Matrix::identity(1),
        trivial_class(c2.source()),
        3,
    )
    .unwrap();
    let report = check_general_degree0(&sc).unwrap();
    assert!(report.passed);
    assert_eq!(report.count(Status::Skipped), 3);
    assert_eq!(report.notes, vec!["all classes skipped".to_string()]);
}

#[test]
fn td_pullback_examples() {
    let g = s3();
    let c2 = sub_of_order(&g, 2);
    let sc = GeneralScenario::new(
        c2.clone(),
        Representation::zero(&g),
        standard(&g),
        Matrix::zeros(2, 0),
        trivial_class(c2.source()),
        4,
    )
    .unwrap();
    let report = check_td_pullback(&sc).unwrap();
    assert!(report.passed, "{:?}", report.first_failure);
    assert_eq!(report.classes.len(), 2);
    let tau = report
        .classes
        .iter()
        .find(|r| r.element != c2.source().identity())
        .unwrap();
    let minus = RootOfUnity::new(2, 1);
    let one = RootOfUnity::one();
    assert_eq!(value(tau, "spectrum_g"), format!("[{one}:1,{minus}:1]"));
    assert_eq!(value(tau, "spectrum_g"), value(tau, "spectrum_h"));

    let id = GroupEmbedding::identity(&g);
    let sc = GeneralScenario::new(
        id,
        Representation::zero(&g),
        standard(&g),
        Matrix::zeros(2, 0),
        trivial_class(&g),
        3,
    )
    .unwrap();
    assert!(check_td_pullback(&sc).unwrap().passed);
}

#[test]
fn general_rejects_non_invariant_subspace() {
    let g = s3();
    let c2 = sub_of_order(&g, 2);
    let err = GeneralScenario::from_subspace(
        c2.clone(),
        standard(&g),
        Matrix::from_int_rows(&[&[1], &[0]]),
        trivial_class(c2.source()),
        3,
    );
    assert!(matches!(err, Err(RrgError::Rep(RepError::NotInvariant(_)))));
}

#[test]
fn functoriality_examples() {
    let g = s3();
    let std = EquivariantComplex::concentrated(standard(&g), 0);
    let report = check_functoriality(&GroupEmbedding::identity(&g), &std).unwrap();
    assert!(report.passed);

    let c2 = sub_of_order(&g, 2);
    let report = check_functoriality(&c2, &std).unwrap();
    assert!(report.passed);
    let vals: Vec<String> = report
        .classes
        .iter()
        .map(|r| value(r, "restricted"))
        .collect();
    assert_eq!(vals, vec!["2", "0"]);
    assert_eq!(
        values_by_order(&std.supertrace_class()),
        vec![c(2), c(0), c(-1)]
    );
}
