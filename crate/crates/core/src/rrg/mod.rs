//! Riemann-Roch verifiers for the three local embedding types and the
//! Todd pullback, each comparing independent computational paths per
//! conjugacy class.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::charts::{EigenData, LinearChart};
use crate::complexes::{ComplexError, EquivariantComplex, ValidationReport};
use crate::exactnum::{Cyclotomic, Matrix};
use crate::groups::{FiniteGroup, GroupEmbedding};
use crate::reps::{same_group, RepError, Representation, VirtualCharacter};
use crate::series::{
    todd_delocalized, zero_section_identity_with, EigenConvention, NormalModel, ZeroSectionReport,
};

#[derive(Debug, Error)]
pub enum RrgError {
    #[error("invalid complex: {0}")]
    InvalidComplex(ValidationReport),
    #[error("inclusion is not injective")]
    NotInjective,
    #[error("inclusion is not equivariant")]
    NotEquivariant,
    #[error("scenario mismatch: {0}")]
    Mismatch(String),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// Centralizer weights in the pushforward; `Unit` replaces every weight by 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Weight {
    #[default]
    Centralizer,
    Unit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NamedValue {
    pub name: String,
    pub value: String,
}

fn named(name: &str, value: impl ToString) -> NamedValue {
    NamedValue {
        name: name.into(),
        value: value.to_string(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassReport {
    pub class: usize,
    pub element: usize,
    pub label: String,
    pub status: Status,
    pub values: Vec<NamedValue>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub series: Option<ZeroSectionReport>,
}

impl ClassReport {
    fn new(group: &FiniteGroup, class: usize) -> Self {
        let element = group.conjugacy().class_reps[class];
        ClassReport {
            class,
            element,
            label: group.element_label(element),
            status: Status::Pass,
            values: Vec::new(),
            note: None,
            series: None,
        }
    }

    fn fail(mut self, reason: impl Into<String>) -> Self {
        self.status = Status::Fail;
        self.note.get_or_insert_with(|| reason.into());
        self
    }

    fn skip(mut self, reason: impl Into<String>) -> Self {
        self.status = Status::Skipped;
        self.note = Some(reason.into());
        self
    }

    /// Fails unless every value agrees with the first.
    fn compare(mut self, values: Vec<(&str, Cyclotomic)>) -> Self {
        let agree = values.windows(2).all(|w| w[0].1 == w[1].1);
        self.values.extend(values.iter().map(|(n, v)| named(n, v)));
        if !agree {
            let names: Vec<&str> = values.iter().map(|v| v.0).collect();
            self = self.fail(format!("{} disagree", names.join(", ")));
        }
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Failure {
    pub class: usize,
    pub label: String,
    pub reason: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub monomial: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub passed: bool,
    pub classes: Vec<ClassReport>,
    pub first_failure: Option<Failure>,
    pub notes: Vec<String>,
}

impl CheckReport {
    fn new(check: &str, classes: Vec<ClassReport>) -> Self {
        let first_failure = classes
            .iter()
            .find(|c| c.status == Status::Fail)
            .map(|c| Failure {
                class: c.class,
                label: c.label.clone(),
                reason: c.note.clone().unwrap_or_default(),
                monomial: c
                    .series
                    .as_ref()
                    .and_then(|s| s.first_difference.as_ref())
                    .map(|d| d.monomial.clone()),
            });
        let mut notes = Vec::new();
        if !classes.is_empty() && classes.iter().all(|c| c.status == Status::Skipped) {
            notes.push("all classes skipped".to_string());
        }
        CheckReport {
            check: check.into(),
            passed: first_failure.is_none(),
            classes,
            first_failure,
            notes,
        }
    }

    pub fn count(&self, status: Status) -> usize {
        self.classes.iter().filter(|c| c.status == status).count()
    }
}

/// Runs `f` on every class index; results stay in class order.
fn per_class<T: Send>(n: usize, f: impl Fn(usize) -> T + Sync + Send) -> Vec<T> {
    (0..n).into_par_iter().map(f).collect()
}

fn validated(class: &EquivariantComplex, group: &Arc<FiniteGroup>) -> Result<(), RrgError> {
    if !same_group(class.group(), group) {
        return Err(RrgError::Mismatch(
            "complex lives over a different group".into(),
        ));
    }
    let report = class.validate();
    if report.is_valid() {
        Ok(())
    } else {
        Err(RrgError::InvalidComplex(report))
    }
}

fn check_inclusion(
    sub: &Representation,
    ambient: &Representation,
    inclusion: &Matrix,
) -> Result<(), RrgError> {
    if !same_group(sub.group(), ambient.group()) {
        return Err(RrgError::Mismatch(
            "sub and ambient live over different groups".into(),
        ));
    }
    if inclusion.shape() != (ambient.dim(), sub.dim()) {
        return Err(RrgError::Mismatch(format!(
            "inclusion is {}x{}, expected {}x{}",
            inclusion.rows(),
            inclusion.cols(),
            ambient.dim(),
            sub.dim()
        )));
    }
    if inclusion.rank() != sub.dim() {
        return Err(RrgError::NotInjective);
    }
    if !sub.is_equivariant_map(ambient, inclusion) {
        return Err(RrgError::NotEquivariant);
    }
    Ok(())
}

/// `G ⋉ V → H ⋉ V`
#[derive(Debug, Clone)]
pub struct IsoSpatialScenario {
    emb: GroupEmbedding,
    chart: Representation,
    class: EquivariantComplex,
}

impl IsoSpatialScenario {
    pub fn new(
        emb: GroupEmbedding,
        chart: Representation,
        class: EquivariantComplex,
    ) -> Result<Self, RrgError> {
        if !same_group(chart.group(), emb.target()) {
            return Err(RrgError::Mismatch(
                "chart must be a representation of the larger group".into(),
            ));
        }
        chart.validate()?;
        validated(&class, emb.source())?;
        Ok(IsoSpatialScenario { emb, chart, class })
    }

    pub fn emb(&self) -> &GroupEmbedding {
        &self.emb
    }

    pub fn chart(&self) -> &Representation {
        &self.chart
    }

    pub fn class(&self) -> &EquivariantComplex {
        &self.class
    }
}

/// `G ⋉ V → G ⋉ W` with normal representation `N = W/V`.
#[derive(Debug, Clone)]
pub struct ZeroSectionScenario {
    sub: Representation,
    ambient: Representation,
    inclusion: Matrix,
    normal: Representation,
    class: EquivariantComplex,
    trunc: usize,
}

impl ZeroSectionScenario {
    pub fn new(
        sub: Representation,
        ambient: Representation,
        inclusion: Matrix,
        class: EquivariantComplex,
        trunc: usize,
    ) -> Result<Self, RrgError> {
        check_inclusion(&sub, &ambient, &inclusion)?;
        validated(&class, ambient.group())?;
        let normal = ambient.quotient(&inclusion)?;
        Ok(ZeroSectionScenario {
            sub,
            ambient,
            inclusion,
            normal,
            class,
            trunc,
        })
    }

    /// `V` given as the span of the columns of `basis` inside `W`.
    pub fn from_subspace(
        ambient: Representation,
        basis: Matrix,
        class: EquivariantComplex,
        trunc: usize,
    ) -> Result<Self, RrgError> {
        let sub = ambient.subrepresentation(&basis)?;
        Self::new(sub, ambient, basis, class, trunc)
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.ambient.group()
    }

    pub fn sub(&self) -> &Representation {
        &self.sub
    }

    pub fn ambient(&self) -> &Representation {
        &self.ambient
    }

    pub fn inclusion(&self) -> &Matrix {
        &self.inclusion
    }

    pub fn normal(&self) -> &Representation {
        &self.normal
    }

    pub fn class(&self) -> &EquivariantComplex {
        &self.class
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }
}

/// `G ⋉ V → H ⋉ V → H ⋉ W`
#[derive(Debug, Clone)]
pub struct GeneralScenario {
    emb: GroupEmbedding,
    sub: Representation,
    ambient: Representation,
    inclusion: Matrix,
    normal: Representation,
    class: EquivariantComplex,
    trunc: usize,
}

impl GeneralScenario {
    pub fn new(
        emb: GroupEmbedding,
        sub: Representation,
        ambient: Representation,
        inclusion: Matrix,
        class: EquivariantComplex,
        trunc: usize,
    ) -> Result<Self, RrgError> {
        if !same_group(ambient.group(), emb.target()) {
            return Err(RrgError::Mismatch(
                "ambient must be a representation of the larger group".into(),
            ));
        }
        check_inclusion(&sub, &ambient, &inclusion)?;
        validated(&class, emb.source())?;
        let normal = ambient.quotient(&inclusion)?;
        Ok(GeneralScenario {
            emb,
            sub,
            ambient,
            inclusion,
            normal,
            class,
            trunc,
        })
    }

    /// `V` given as the span of the columns of `basis`; rejected unless it is
    /// invariant under the larger group.
    pub fn from_subspace(
        emb: GroupEmbedding,
        ambient: Representation,
        basis: Matrix,
        class: EquivariantComplex,
        trunc: usize,
    ) -> Result<Self, RrgError> {
        let sub = ambient.subrepresentation(&basis)?;
        Self::new(emb, sub, ambient, basis, class, trunc)
    }

    pub fn emb(&self) -> &GroupEmbedding {
        &self.emb
    }

    pub fn sub(&self) -> &Representation {
        &self.sub
    }

    pub fn ambient(&self) -> &Representation {
        &self.ambient
    }

    pub fn inclusion(&self) -> &Matrix {
        &self.inclusion
    }

    pub fn normal(&self) -> &Representation {
        &self.normal
    }

    pub fn class(&self) -> &EquivariantComplex {
        &self.class
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }
}

fn weight(emb: &GroupEmbedding, h_class: usize, g_class: usize, w: Weight) -> BigRational {
    match w {
        Weight::Unit => BigRational::from_integer(BigInt::from(1)),
        Weight::Centralizer => BigRational::new(
            BigInt::from(emb.target().conjugacy().centralizers[h_class].len()),
            BigInt::from(emb.source().conjugacy().centralizers[g_class].len()),
        ),
    }
}

/// `(h) ↦ Σ_i (|Z_H(h)| / |Z_G(g_i)|) χ(g_i)` over the classes `g_i` fusing to `(h)`.
pub fn pushforward_characters(
    emb: &GroupEmbedding,
    chi: &VirtualCharacter,
) -> Result<VirtualCharacter, RrgError> {
    pushforward_weighted(emb, chi, Weight::Centralizer)
}

pub fn pushforward_weighted(
    emb: &GroupEmbedding,
    chi: &VirtualCharacter,
    w: Weight,
) -> Result<VirtualCharacter, RrgError> {
    if !same_group(chi.group(), emb.source()) {
        return Err(RrgError::Mismatch(
            "character lives over a different group".into(),
        ));
    }
    let fusion = emb.fuse_classes();
    let values = fusion
        .fibers
        .iter()
        .enumerate()
        .map(|(hc, fiber)| {
            fiber
                .iter()
                .map(|&gc| chi.value_at_class(gc).scale(&weight(emb, hc, gc, w)))
                .sum()
        })
        .collect();
    Ok(VirtualCharacter::new(emb.target().clone(), values)?)
}

/// `Σ_k (−1)^k Tr(Ind ρ_k)(h)` from explicit induced matrices.
fn induced_matrix_supertrace(
    class: &EquivariantComplex,
    emb: &GroupEmbedding,
    h: usize,
) -> Result<Cyclotomic, RrgError> {
    let mut acc = Cyclotomic::zero();
    for (k, piece) in class.degrees().zip(class.pieces()) {
        let t = piece.induce_matrix_at(emb, h)?.trace();
        if k.rem_euclid(2) == 0 {
            acc += &t;
        } else {
            acc -= &t;
        }
    }
    Ok(acc)
}

pub fn check_iso_spatial(sc: &IsoSpatialScenario) -> Result<CheckReport, RrgError> {
    check_iso_spatial_with(sc, Weight::Centralizer)
}

/// Induced complex, weighted pushforward and explicit induced matrices,
/// compared per class of the larger group.
pub fn check_iso_spatial_with(sc: &IsoSpatialScenario, w: Weight) -> Result<CheckReport, RrgError> {
    let big = sc.emb.target();
    let induced = sc.class.induce(&sc.emb)?.supertrace_class();
    let pushed = pushforward_weighted(&sc.emb, &sc.class.supertrace_class(), w)?;
    let chart = LinearChart::new(sc.chart.clone());
    let classes = per_class(big.num_classes(), |hc| -> Result<ClassReport, RrgError> {
        let h = big.conjugacy().class_reps[hc];
        let explicit = induced_matrix_supertrace(&sc.class, &sc.emb, h)?;
        let mut r = ClassReport::new(big, hc).compare(vec![
            ("induced", induced.value_at_class(hc).clone()),
            ("pushforward", pushed.value_at_class(hc).clone()),
            ("matrices", explicit),
        ]);
        r.values
            .push(named("fixed_dim", chart.fixed_subspace(h).cols()));
        Ok(r)
    });
    Ok(CheckReport::new(
        "iso-spatial",
        classes.into_iter().collect::<Result<_, _>>()?,
    ))
}

pub fn check_zero_section(sc: &ZeroSectionScenario) -> Result<CheckReport, RrgError> {
    check_zero_section_with(sc, EigenConvention::Dual)
}

/// Per class: the Koszul/Todd series identity on the eigen-lines of `N`, and
/// `Tr_s(g | F ⊗ λ₋₁(N*)) = Tr_s(g | F) · (degree-0 Koszul value)`.
pub fn check_zero_section_with(
    sc: &ZeroSectionScenario,
    convention: EigenConvention,
) -> Result<CheckReport, RrgError> {
    let group = sc.group();
    let twisted = sc
        .class
        .tensor(&EquivariantComplex::koszul_at_zero(&sc.normal)?)?;
    let classes = per_class(group.num_classes(), |c| {
        let g = group.conjugacy().class_reps[c];
        let model = NormalModel::of_representation(&sc.normal, g, sc.trunc);
        let identity = zero_section_identity_with(&model, convention);
        let koszul0 = crate::series::koszul_ch_with(&model, convention)
            .constant_term()
            .clone();
        let mut r = ClassReport::new(group, c).compare(vec![
            ("twisted", twisted.supertrace_at(g)),
            ("product", &sc.class.supertrace_at(g) * &koszul0),
        ]);
        if !identity.passed {
            r = r.fail("series identity fails");
        }
        r.series = Some(identity);
        r
    });
    Ok(CheckReport::new("zero-section", classes))
}

/// `Π_j (1 − ζ_j^{−1})` over the eigenvalues of `g` on `rep`.
fn lambda_product(rep: &Representation, g: usize, convention: EigenConvention) -> Cyclotomic {
    LinearChart::new(rep.clone())
        .eigen_decomposition(g)
        .lines()
        .iter()
        .fold(Cyclotomic::one(), |acc, z| {
            let twisted = match convention {
                EigenConvention::Dual => z.inverse(),
                EigenConvention::Direct => *z,
            };
            &acc * &(&Cyclotomic::one() - &twisted.to_cyclotomic())
        })
}

pub fn check_general_degree0(sc: &GeneralScenario) -> Result<CheckReport, RrgError> {
    check_general_degree0_with(sc, Weight::Centralizer, EigenConvention::Dual)
}

/// Degree-0 values at classes of the larger group with `W^h = 0`:
/// induced `F ⊗ λ₋₁(N*)` against the fusion-weighted eigenvalue formula.
pub fn check_general_degree0_with(
    sc: &GeneralScenario,
    w: Weight,
    convention: EigenConvention,
) -> Result<CheckReport, RrgError> {
    let big = sc.emb.target();
    let small = sc.emb.source();
    let normal_g = sc.normal.restrict(&sc.emb)?;
    let induced = sc
        .class
        .tensor(&EquivariantComplex::koszul_at_zero(&normal_g)?)?
        .induce(&sc.emb)?;
    let fusion = sc.emb.fuse_classes();
    let ambient = LinearChart::new(sc.ambient.clone());
    let classes = per_class(big.num_classes(), |hc| {
        let h = big.conjugacy().class_reps[hc];
        let r = ClassReport::new(big, hc);
        let fixed = ambient.fixed_subspace(h).cols();
        if fixed > 0 {
            return r.skip(format!("dim W^h = {fixed}"));
        }
        let rhs: Cyclotomic = fusion.fibers[hc]
            .iter()
            .map(|&gc| {
                let g = small.conjugacy().class_reps[gc];
                let local = &sc.class.supertrace_at(g) * &lambda_product(&normal_g, g, convention);
                local.scale(&weight(&sc.emb, hc, gc, w))
            })
            .sum();
        r.compare(vec![
            ("induced", induced.supertrace_at(h)),
            ("fixed-point", rhs),
        ])
    });
    Ok(CheckReport::new("general-degree0", classes))
}

/// Whether `x⁻¹` carries each eigenspace of `h0` onto the eigenspace of
/// `emb(g)` with the same eigenvalue, where `x·emb(g)·x⁻¹ = h0`.
fn transported(normal: &Representation, x: usize, at_h: &EigenData, at_g: &EigenData) -> bool {
    let big = normal.group();
    let back = normal.matrix(big.inv(x));
    at_h.spaces.len() == at_g.spaces.len()
        && at_h.spaces.iter().all(|s| {
            at_g.spaces.iter().any(|t| {
                t.eigenvalue == s.eigenvalue
                    && t.multiplicity == s.multiplicity
                    && t.basis.solve_in_span(&back.mul(&s.basis)).is_some()
            })
        })
}

/// Eigen-data of `N` at each class of the smaller group against the data at
/// the fused class of the larger group, and the Todd series of both.
pub fn check_td_pullback(sc: &GeneralScenario) -> Result<CheckReport, RrgError> {
    let big = sc.emb.target();
    let small = sc.emb.source();
    let fusion = sc.emb.fuse_classes();
    let normal_g = sc.normal.restrict(&sc.emb)?;
    let chart_h = LinearChart::new(sc.normal.clone());
    let chart_g = LinearChart::new(normal_g);
    let classes = per_class(small.num_classes(), |gc| {
        let g = small.conjugacy().class_reps[gc];
        let hc = fusion.map[gc];
        let h0 = big.conjugacy().class_reps[hc];
        let image = sc.emb.map(g);
        let x = big
            .elements()
            .find(|&x| big.mul(big.mul(x, image), big.inv(x)) == h0)
            .expect("fused classes are conjugate");
        let at_g = chart_g.eigen_decomposition(g);
        let at_h = chart_h.eigen_decomposition(h0);
        let mut r = ClassReport::new(small, gc);
        r.values.push(named("spectrum_g", spectrum_string(&at_g)));
        r.values.push(named("spectrum_h", spectrum_string(&at_h)));
        if !transported(&sc.normal, x, &at_h, &at_g) {
            return r.fail("eigenspaces do not correspond under conjugation");
        }
        let td_g = todd_delocalized(&NormalModel::from_eigenvalues(&at_g.lines(), sc.trunc));
        let td_h = todd_delocalized(&NormalModel::from_eigenvalues(&at_h.lines(), sc.trunc));
        if td_g != td_h {
            return r.fail("Todd series differ");
        }
        r.values.push(named("todd", td_g));
        r
    });
    Ok(CheckReport::new("td-pullback", classes))
}

fn spectrum_string(data: &EigenData) -> String {
    let parts: Vec<String> = data
        .spectrum()
        .iter()
        .map(|(z, m)| format!("{z}:{m}"))
        .collect();
    format!("[{}]", parts.join(","))
}

/// Supertrace of the restricted complex against the fused value of the original.
pub fn check_functoriality(
    emb: &GroupEmbedding,
    class: &EquivariantComplex,
) -> Result<CheckReport, RrgError> {
    validated(class, emb.target())?;
    let small = emb.source();
    let restricted = class.restrict(emb)?.supertrace_class();
    let fused = class.supertrace_class().restrict(emb)?;
    let fusion = emb.fuse_classes();
    let big = emb.target();
    let classes = per_class(small.num_classes(), |gc| {
        let h = big.conjugacy().class_reps[fusion.map[gc]];
        ClassReport::new(small, gc).compare(vec![
            ("restricted", restricted.value_at_class(gc).clone()),
            ("fused", class.supertrace_at(h)),
            ("restricted-character", fused.value_at_class(gc).clone()),
        ])
    });
    Ok(CheckReport::new("functoriality", classes))
}

#[cfg(test)]
mod tests;
