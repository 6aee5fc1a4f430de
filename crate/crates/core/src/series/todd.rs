//! Delocalized Todd and Chern series of eigen-line models, and the Koszul/Todd identity.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use super::{GradedSeries, MonomialBasis, SeriesError};
use crate::charts::LinearChart;
use crate::complexes::EquivariantComplex;
use crate::exactnum::{Cyclotomic, RootOfUnity};
use crate::reps::Representation;

/// Eigen-lines `(ζ, j)` of a normal bundle at one group element; line `j`
/// carries the Chern root `x_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalModel {
    lines: Vec<(RootOfUnity, usize)>,
    num_vars: usize,
    trunc: usize,
}

impl NormalModel {
    pub fn new(
        lines: Vec<(RootOfUnity, usize)>,
        num_vars: usize,
        trunc: usize,
    ) -> Result<Self, SeriesError> {
        let mut seen = vec![false; num_vars];
        for &(_, j) in &lines {
            if j >= num_vars {
                return Err(SeriesError::InvalidModel(format!(
                    "variable {j} out of range for {num_vars} variables"
                )));
            }
            if std::mem::replace(&mut seen[j], true) {
                return Err(SeriesError::InvalidModel(format!(
                    "variable {j} used twice"
                )));
            }
        }
        Ok(NormalModel {
            lines,
            num_vars,
            trunc,
        })
    }

    /// Line `j` gets variable `x_j`.
    pub fn from_eigenvalues(eigenvalues: &[RootOfUnity], trunc: usize) -> Self {
        let lines = eigenvalues
            .iter()
            .enumerate()
            .map(|(j, &z)| (z, j))
            .collect();
        NormalModel {
            lines,
            num_vars: eigenvalues.len(),
            trunc,
        }
    }

    /// Eigen-lines of `rep` at `g`, fixed lines included.
    pub fn of_representation(rep: &Representation, g: usize, trunc: usize) -> Self {
        let chart = LinearChart::new(rep.clone());
        NormalModel::from_eigenvalues(&chart.eigen_decomposition(g).lines(), trunc)
    }

    pub fn lines(&self) -> &[(RootOfUnity, usize)] {
        &self.lines
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    /// Lines of `other` follow those of `self`, with shifted variables.
    pub fn concat(&self, other: &NormalModel) -> Result<NormalModel, SeriesError> {
        if self.trunc != other.trunc {
            return Err(SeriesError::InvalidModel(
                "truncation degrees differ".into(),
            ));
        }
        let mut lines = self.lines.clone();
        lines.extend(other.lines.iter().map(|&(z, j)| (z, j + self.num_vars)));
        NormalModel::new(lines, self.num_vars + other.num_vars, self.trunc)
    }

    fn var(&self, j: usize) -> GradedSeries {
        GradedSeries::variable(j, self.num_vars, self.trunc)
    }

    /// `e^{−x_j}`
    fn exp_minus(&self, j: usize) -> GradedSeries {
        self.var(j)
            .neg()
            .exp_nilpotent()
            .expect("variable is nilpotent")
    }
}

/// Which eigenvalue enters the Koszul factors: `ζ⁻¹` (the dual bundle) or `ζ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EigenConvention {
    #[default]
    Dual,
    Direct,
}

impl EigenConvention {
    fn apply(self, z: RootOfUnity) -> RootOfUnity {
        match self {
            EigenConvention::Dual => z.inverse(),
            EigenConvention::Direct => z,
        }
    }
}

fn rational(num: i64, den: &BigInt) -> Cyclotomic {
    Cyclotomic::from_rational(BigRational::new(BigInt::from(num), den.clone()))
}

/// `x/(1 − e^{−x})` for `ζ = 1`, else `1/(1 − ζ⁻¹e^{−x})`, in `x_j`.
pub fn todd_line_factor(model: &NormalModel, z: RootOfUnity, j: usize) -> GradedSeries {
    if z.is_one() {
        // (1 − e^{−x})/x = Σ_k (−1)^k x^k/(k+1)!
        let mut fact = BigInt::from(1);
        let mut s = GradedSeries::zero(model.num_vars, model.trunc);
        let mut power = GradedSeries::one(model.num_vars, model.trunc);
        for k in 0..=model.trunc {
            fact *= k + 1;
            let sign = if k % 2 == 0 { 1 } else { -1 };
            s = s
                .add(&power.scale(&rational(sign, &fact)))
                .expect("same shape");
            power = power.mul(&model.var(j)).expect("same shape");
        }
        s.invert_unit().expect("constant term 1")
    } else {
        let one = GradedSeries::one(model.num_vars, model.trunc);
        let twisted = model.exp_minus(j).scale(&z.inverse().to_cyclotomic());
        one.sub(&twisted)
            .expect("same shape")
            .invert_unit()
            .expect("constant 1 − ζ⁻¹ is nonzero")
    }
}

/// Product of the per-line Todd factors.
pub fn todd_delocalized(model: &NormalModel) -> GradedSeries {
    model.lines.iter().fold(
        GradedSeries::one(model.num_vars, model.trunc),
        |acc, &(z, j)| acc.mul(&todd_line_factor(model, z, j)).expect("same shape"),
    )
}

/// `Σ_{S ⊆ lines} (−1)^{|S|} Π_{j∈S} ζ_j^{−1} e^{−x_j}`, one exponential per subset.
pub fn koszul_ch(model: &NormalModel) -> GradedSeries {
    koszul_ch_with(model, EigenConvention::Dual)
}

pub fn koszul_ch_with(model: &NormalModel, convention: EigenConvention) -> GradedSeries {
    let n = model.lines.len();
    let basis = MonomialBasis::get(model.num_vars, model.trunc);
    // e^{−Σ_{j∈S} x_j} has coefficient (−1)^{|α|}/α! on every x^α supported in S
    let exp_coeffs: Vec<Cyclotomic> = (0..basis.len())
        .map(|i| {
            let exps = basis.monomial(i);
            let fact = exps
                .iter()
                .fold(BigInt::from(1), |acc, &e| acc * factorial(e));
            rational(
                if basis.degree(i).is_multiple_of(2) {
                    1
                } else {
                    -1
                },
                &fact,
            )
        })
        .collect();
    let mut coeffs = vec![Cyclotomic::zero(); basis.len()];
    for mask in 0u64..(1u64 << n) {
        let mut coeff = RootOfUnity::one();
        let mut vars = vec![false; model.num_vars];
        for (bit, &(z, j)) in model.lines.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                coeff = coeff.mul(&convention.apply(z));
                vars[j] = true;
            }
        }
        let mut c = coeff.to_cyclotomic();
        if mask.count_ones() % 2 == 1 {
            c = -c;
        }
        for (i, q) in exp_coeffs.iter().enumerate() {
            let exps = basis.monomial(i);
            if exps.iter().zip(&vars).all(|(&e, &v)| e == 0 || v) {
                coeffs[i] += &(&c * q);
            }
        }
    }
    GradedSeries::from_parts(basis, coeffs)
}

fn factorial(e: u32) -> BigInt {
    (1..=e).fold(BigInt::from(1), |acc, k| acc * k)
}

/// `Π_j (1 − ζ_j^{−1} e^{−x_j})` by series multiplication.
pub fn koszul_by_factors(model: &NormalModel) -> GradedSeries {
    let one = GradedSeries::one(model.num_vars, model.trunc);
    model.lines.iter().fold(one.clone(), |acc, &(z, j)| {
        let factor = one
            .sub(&model.exp_minus(j).scale(&z.inverse().to_cyclotomic()))
            .expect("same shape");
        acc.mul(&factor).expect("same shape")
    })
}

/// `Σ_j ζ_j e^{x_j}`
pub fn chern_of_lines(model: &NormalModel) -> GradedSeries {
    model.lines.iter().fold(
        GradedSeries::zero(model.num_vars, model.trunc),
        |acc, &(z, j)| {
            let e = model.var(j).exp_nilpotent().expect("variable is nilpotent");
            acc.add(&e.scale(&z.to_cyclotomic())).expect("same shape")
        },
    )
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MonomialDiff {
    pub monomial: String,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZeroSectionReport {
    pub passed: bool,
    pub lines: Vec<String>,
    pub trunc: usize,
    pub lhs: String,
    pub rhs: String,
    pub first_difference: Option<MonomialDiff>,
}

/// `koszul_ch = (Π_{ζ=1} x_j) · todd⁻¹`, coefficientwise.
pub fn zero_section_identity(model: &NormalModel) -> ZeroSectionReport {
    zero_section_identity_with(model, EigenConvention::Dual)
}

/// As [`zero_section_identity`], with the Koszul side built under `convention`.
pub fn zero_section_identity_with(
    model: &NormalModel,
    convention: EigenConvention,
) -> ZeroSectionReport {
    let lhs = koszul_ch_with(model, convention);
    let euler = model.lines.iter().filter(|(z, _)| z.is_one()).fold(
        GradedSeries::one(model.num_vars, model.trunc),
        |acc, &(_, j)| acc.mul(&model.var(j)).expect("same shape"),
    );
    let rhs = euler
        .mul(
            &todd_delocalized(model)
                .invert_unit()
                .expect("todd has constant term"),
        )
        .expect("same shape");
    let first_difference = lhs
        .first_difference(&rhs)
        .map(|(monomial, a, b)| MonomialDiff {
            monomial,
            lhs: a.to_string(),
            rhs: b.to_string(),
        });
    ZeroSectionReport {
        passed: first_difference.is_none(),
        lines: model
            .lines
            .iter()
            .map(|(z, j)| format!("({z}, {})", super::variable_name(*j, model.num_vars)))
            .collect(),
        trunc: model.trunc,
        lhs: lhs.to_string(),
        rhs: rhs.to_string(),
        first_difference,
    }
}

/// One series per conjugacy class of the underlying group, in class order.
#[derive(Debug, Clone, PartialEq)]
pub struct DelocalizedClass {
    components: Vec<GradedSeries>,
}

impl DelocalizedClass {
    pub fn new(components: Vec<GradedSeries>) -> Self {
        DelocalizedClass { components }
    }

    /// Todd series of the eigen-lines of `normal` at each class representative.
    pub fn todd(normal: &Representation, trunc: usize) -> Self {
        let conj = normal.group().conjugacy();
        let components = conj
            .class_reps
            .iter()
            .map(|&g| todd_delocalized(&NormalModel::of_representation(normal, g, trunc)))
            .collect();
        DelocalizedClass { components }
    }

    /// Chern series `Σ ζ e^{x}` of the eigen-lines of `rep` at each class representative.
    pub fn chern_of_representation(rep: &Representation, trunc: usize) -> Self {
        let conj = rep.group().conjugacy();
        let components = conj
            .class_reps
            .iter()
            .map(|&g| chern_of_lines(&NormalModel::of_representation(rep, g, trunc)))
            .collect();
        DelocalizedClass { components }
    }

    /// Flat model: the supertrace at each class, as a constant.
    pub fn chern_of_complex(complex: &EquivariantComplex, trunc: usize) -> Self {
        let components = complex
            .supertrace_class()
            .values()
            .iter()
            .map(|v| GradedSeries::constant(v.clone(), 0, trunc))
            .collect();
        DelocalizedClass { components }
    }

    pub fn components(&self) -> &[GradedSeries] {
        &self.components
    }

    pub fn component(&self, class: usize) -> &GradedSeries {
        &self.components[class]
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Degree-0 values, one per class.
    pub fn degree_zero(&self) -> Vec<Cyclotomic> {
        self.components
            .iter()
            .map(|s| s.constant_term().clone())
            .collect()
    }
}
