//! Truncated multivariate power series with cyclotomic coefficients.

mod fixed;
mod todd;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

use crate::exactnum::Cyclotomic;
use fixed::Field;

pub use todd::{
    chern_of_lines, koszul_by_factors, koszul_ch, koszul_ch_with, todd_delocalized,
    todd_line_factor, zero_section_identity, zero_section_identity_with, DelocalizedClass,
    EigenConvention, MonomialDiff, NormalModel, ZeroSectionReport,
};

pub const DEFAULT_TRUNC: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("series have different shapes: {0} vs {1}")]
    Incompatible(String, String),
    #[error("constant term is zero, series is not a unit")]
    NotAUnit,
    #[error("constant term is nonzero, series is not nilpotent")]
    NotNilpotent,
    #[error("invalid normal model: {0}")]
    InvalidModel(String),
}

/// Exponent vectors of total degree at most `trunc` in `num_vars` variables,
/// by degree, then lexicographically descending within a degree.
#[derive(Debug)]
pub struct MonomialBasis {
    num_vars: usize,
    trunc: usize,
    monomials: Vec<Vec<u32>>,
    degrees: Vec<usize>,
    index: HashMap<Vec<u32>, usize>,
    products: OnceLock<Vec<Vec<Option<usize>>>>,
}

type BasisCache = RwLock<HashMap<(usize, usize), Arc<MonomialBasis>>>;

fn basis_cache() -> &'static BasisCache {
    static CACHE: OnceLock<BasisCache> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

fn push_exponents(prefix: &mut Vec<u32>, vars_left: usize, degree: u32, out: &mut Vec<Vec<u32>>) {
    if vars_left == 1 {
        prefix.push(degree);
        out.push(prefix.clone());
        prefix.pop();
        return;
    }
    for first in (0..=degree).rev() {
        prefix.push(first);
        push_exponents(prefix, vars_left - 1, degree - first, out);
        prefix.pop();
    }
}

impl MonomialBasis {
    pub fn get(num_vars: usize, trunc: usize) -> Arc<MonomialBasis> {
        if let Some(b) = basis_cache()
            .read()
            .expect("basis cache")
            .get(&(num_vars, trunc))
        {
            return b.clone();
        }
        let built = Arc::new(MonomialBasis::build(num_vars, trunc));
        basis_cache()
            .write()
            .expect("basis cache")
            .entry((num_vars, trunc))
            .or_insert(built)
            .clone()
    }

    fn build(num_vars: usize, trunc: usize) -> MonomialBasis {
        let mut monomials = Vec::new();
        if num_vars == 0 {
            monomials.push(Vec::new());
        } else {
            for d in 0..=trunc as u32 {
                push_exponents(&mut Vec::new(), num_vars, d, &mut monomials);
            }
        }
        let degrees = monomials
            .iter()
            .map(|m| m.iter().sum::<u32>() as usize)
            .collect();
        let index = monomials
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        MonomialBasis {
            num_vars,
            trunc,
            monomials,
            degrees,
            index,
            products: OnceLock::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomial(&self, i: usize) -> &[u32] {
        &self.monomials[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.degrees[i]
    }

    pub fn index_of(&self, exps: &[u32]) -> Option<usize> {
        self.index.get(exps).copied()
    }

    fn product_index(&self, i: usize, j: usize) -> Option<usize> {
        let table = self.products.get_or_init(|| {
            (0..self.len())
                .map(|a| {
                    (0..self.len())
                        .map(|b| {
                            if self.degrees[a] + self.degrees[b] > self.trunc {
                                return None;
                            }
                            let sum: Vec<u32> = self.monomials[a]
                                .iter()
                                .zip(&self.monomials[b])
                                .map(|(x, y)| x + y)
                                .collect();
                            self.index.get(&sum).copied()
                        })
                        .collect()
                })
                .collect()
        });
        table[i][j]
    }

    pub fn render(&self, i: usize) -> String {
        let parts: Vec<String> = self.monomials[i]
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(v, &e)| {
                let name = variable_name(v, self.num_vars);
                if e == 1 {
                    name
                } else {
                    format!("{name}^{e}")
                }
            })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

pub fn variable_name(v: usize, num_vars: usize) -> String {
    if num_vars == 1 {
        "x".into()
    } else {
        format!("x{}", v + 1)
    }
}

/// Dense truncated series: one coefficient per monomial of the basis.
#[derive(Clone)]
pub struct GradedSeries {
    basis: Arc<MonomialBasis>,
    coeffs: Vec<Cyclotomic>,
}

impl GradedSeries {
    pub fn zero(num_vars: usize, trunc: usize) -> Self {
        let basis = MonomialBasis::get(num_vars, trunc);
        let coeffs = vec![Cyclotomic::zero(); basis.len()];
        GradedSeries { basis, coeffs }
    }

    pub fn constant(c: Cyclotomic, num_vars: usize, trunc: usize) -> Self {
        let mut s = GradedSeries::zero(num_vars, trunc);
        s.coeffs[0] = c;
        s
    }

    pub fn one(num_vars: usize, trunc: usize) -> Self {
        GradedSeries::constant(Cyclotomic::one(), num_vars, trunc)
    }

    /// The variable `x_j` (zero when `trunc` is 0).
    pub fn variable(j: usize, num_vars: usize, trunc: usize) -> Self {
        assert!(j < num_vars, "variable index out of range");
        let mut exps = vec![0; num_vars];
        exps[j] = 1;
        GradedSeries::monomial(&exps, Cyclotomic::one(), trunc)
    }

    pub(crate) fn from_parts(basis: Arc<MonomialBasis>, coeffs: Vec<Cyclotomic>) -> Self {
        debug_assert_eq!(basis.len(), coeffs.len());
        GradedSeries { basis, coeffs }
    }

    pub fn monomial(exps: &[u32], c: Cyclotomic, trunc: usize) -> Self {
        let mut s = GradedSeries::zero(exps.len(), trunc);
        if let Some(i) = s.basis.index_of(exps) {
            s.coeffs[i] = c;
        }
        s
    }

    /// Series in one variable from coefficients of `x^0, x^1, …`.
    pub fn univariate(coeffs: impl IntoIterator<Item = Cyclotomic>, trunc: usize) -> Self {
        let mut s = GradedSeries::zero(1, trunc);
        for (k, c) in coeffs.into_iter().take(trunc + 1).enumerate() {
            s.coeffs[k] = c;
        }
        s
    }

    pub fn num_vars(&self) -> usize {
        self.basis.num_vars
    }

    pub fn trunc(&self) -> usize {
        self.basis.trunc
    }

    pub fn basis(&self) -> &MonomialBasis {
        &self.basis
    }

    pub fn coeffs(&self) -> &[Cyclotomic] {
        &self.coeffs
    }

    pub fn coefficient(&self, exps: &[u32]) -> Cyclotomic {
        self.basis
            .index_of(exps)
            .map_or_else(Cyclotomic::zero, |i| self.coeffs[i].clone())
    }

    pub fn constant_term(&self) -> &Cyclotomic {
        &self.coeffs[0]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Cyclotomic::is_zero)
    }

    fn shape(&self) -> String {
        format!("{} vars, degree {}", self.num_vars(), self.trunc())
    }

    fn check(&self, other: &GradedSeries) -> Result<(), SeriesError> {
        if self.num_vars() == other.num_vars() && self.trunc() == other.trunc() {
            Ok(())
        } else {
            Err(SeriesError::Incompatible(self.shape(), other.shape()))
        }
    }

    pub fn add(&self, other: &GradedSeries) -> Result<GradedSeries, SeriesError> {
        self.check(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(GradedSeries {
            basis: self.basis.clone(),
            coeffs,
        })
    }

    pub fn sub(&self, other: &GradedSeries) -> Result<GradedSeries, SeriesError> {
        self.check(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Ok(GradedSeries {
            basis: self.basis.clone(),
            coeffs,
        })
    }

    pub fn scale(&self, c: &Cyclotomic) -> GradedSeries {
        let coeffs = self.coeffs.iter().map(|a| a * c).collect();
        GradedSeries {
            basis: self.basis.clone(),
            coeffs,
        }
    }

    pub fn neg(&self) -> GradedSeries {
        let coeffs = self.coeffs.iter().map(|a| -a).collect();
        GradedSeries {
            basis: self.basis.clone(),
            coeffs,
        }
    }

    /// Product truncated at the common degree.
    pub fn mul(&self, other: &GradedSeries) -> Result<GradedSeries, SeriesError> {
        self.check(other)?;
        Ok(self
            .mul_fixed(other)
            .unwrap_or_else(|| self.mul_exact(other)))
    }

    fn mul_exact(&self, other: &GradedSeries) -> GradedSeries {
        let mut out = GradedSeries::zero(self.num_vars(), self.trunc());
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                if let Some(k) = self.basis.product_index(i, j) {
                    out.coeffs[k] += &(a * b);
                }
            }
        }
        out
    }

    fn mul_fixed(&self, other: &GradedSeries) -> Option<GradedSeries> {
        let field = Field::containing(self.coeffs.iter().chain(&other.coeffs))?;
        let a = field.import_all(&self.coeffs)?;
        let b = field.import_all(&other.coeffs)?;
        let nz_b: Vec<usize> = (0..b.len()).filter(|&j| !b[j].is_zero()).collect();
        let mut out = vec![field.zero(); a.len()];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for &j in &nz_b {
                if let Some(k) = self.basis.product_index(i, j) {
                    field.add_to(&mut out[k], &field.mul(x, &b[j])?)?;
                }
            }
        }
        let coeffs = out.iter().map(|e| field.export(e)).collect();
        Some(GradedSeries {
            basis: self.basis.clone(),
            coeffs,
        })
    }

    fn invert_fixed(&self, cinv: &Cyclotomic) -> Option<GradedSeries> {
        let field = Field::containing(self.coeffs.iter().chain(std::iter::once(cinv)))?;
        let s = field.import_all(&self.coeffs)?;
        let cinv = field.import(cinv)?;
        let neg_cinv = field.import(&-&field.export(&cinv))?;
        let support: Vec<usize> = (1..s.len()).filter(|&i| !s[i].is_zero()).collect();
        let n = s.len();
        let mut pending = vec![field.zero(); n];
        let mut out = vec![field.zero(); n];
        for a in 0..n {
            let b = if a == 0 {
                cinv.clone()
            } else {
                field.mul(&pending[a], &neg_cinv)?
            };
            if b.is_zero() {
                continue;
            }
            for &g in &support {
                if let Some(k) = self.basis.product_index(a, g) {
                    field.add_to(&mut pending[k], &field.mul(&s[g], &b)?)?;
                }
            }
            out[a] = b;
        }
        let coeffs = out.iter().map(|e| field.export(e)).collect();
        Some(GradedSeries {
            basis: self.basis.clone(),
            coeffs,
        })
    }

    /// Multiplicative inverse, degree by degree: `b_0 = 1/c` and
    /// `b_α = −c⁻¹ Σ_{γ ≠ 0} s_γ b_{α−γ}`.
    pub fn invert_unit(&self) -> Result<GradedSeries, SeriesError> {
        let c = self.constant_term();
        if c.is_zero() {
            return Err(SeriesError::NotAUnit);
        }
        let cinv = c.invert().expect("nonzero constant");
        Ok(self
            .invert_fixed(&cinv)
            .unwrap_or_else(|| self.invert_exact(&cinv)))
    }

    fn invert_exact(&self, cinv: &Cyclotomic) -> GradedSeries {
        let neg_cinv = -cinv;
        let support: Vec<usize> = (1..self.coeffs.len())
            .filter(|&i| !self.coeffs[i].is_zero())
            .collect();
        let n = self.basis.len();
        let mut pending = vec![Cyclotomic::zero(); n];
        let mut out = vec![Cyclotomic::zero(); n];
        for a in 0..n {
            let b = if a == 0 {
                cinv.clone()
            } else {
                &pending[a] * &neg_cinv
            };
            if b.is_zero() {
                continue;
            }
            for &g in &support {
                if let Some(k) = self.basis.product_index(a, g) {
                    pending[k] += &(&self.coeffs[g] * &b);
                }
            }
            out[a] = b;
        }
        GradedSeries {
            basis: self.basis.clone(),
            coeffs: out,
        }
    }

    /// `Σ_{k ≤ D} s^k / k!`
    pub fn exp_nilpotent(&self) -> Result<GradedSeries, SeriesError> {
        if !self.constant_term().is_zero() {
            return Err(SeriesError::NotNilpotent);
        }
        let mut acc = GradedSeries::one(self.num_vars(), self.trunc());
        let mut term = acc.clone();
        for k in 1..=self.trunc() {
            let inv_k = BigRational::new(BigInt::from(1), BigInt::from(k));
            term = term.mul(self)?.scale(&Cyclotomic::from_rational(inv_k));
            acc = acc.add(&term)?;
        }
        Ok(acc)
    }

    /// Component of total degree `k`.
    pub fn degree_part(&self, k: usize) -> GradedSeries {
        let mut out = GradedSeries::zero(self.num_vars(), self.trunc());
        for i in 0..self.basis.len() {
            if self.basis.degree(i) == k {
                out.coeffs[i] = self.coeffs[i].clone();
            }
        }
        out
    }

    /// First monomial, in basis order, where the two series differ.
    pub fn first_difference(
        &self,
        other: &GradedSeries,
    ) -> Option<(String, Cyclotomic, Cyclotomic)> {
        if self.check(other).is_err() {
            return Some((self.shape(), Cyclotomic::zero(), Cyclotomic::zero()));
        }
        (0..self.basis.len())
            .find(|&i| self.coeffs[i] != other.coeffs[i])
            .map(|i| {
                (
                    self.basis.render(i),
                    self.coeffs[i].clone(),
                    other.coeffs[i].clone(),
                )
            })
    }

    /// Nonzero terms as `(monomial, coefficient)` in basis order.
    pub fn terms(&self) -> Vec<(String, String)> {
        (0..self.basis.len())
            .filter(|&i| !self.coeffs[i].is_zero())
            .map(|i| (self.basis.render(i), self.coeffs[i].to_string()))
            .collect()
    }
}

impl PartialEq for GradedSeries {
    fn eq(&self, other: &Self) -> bool {
        self.num_vars() == other.num_vars()
            && self.trunc() == other.trunc()
            && self.coeffs == other.coeffs
    }
}

fn render_term(coeff: &Cyclotomic, monomial: &str) -> String {
    if monomial == "1" {
        return coeff.to_string();
    }
    match coeff.as_rational() {
        Some(q) => {
            let num = q.numer();
            let den = q.denom();
            let mut s = if *num == BigInt::from(1) {
                monomial.to_string()
            } else if *num == BigInt::from(-1) {
                format!("-{monomial}")
            } else {
                format!("{num}*{monomial}")
            };
            if *den != BigInt::from(1) {
                s.push_str(&format!("/{den}"));
            }
            s
        }
        None => format!("({coeff})*{monomial}"),
    }
}

impl fmt::Display for GradedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = (0..self.basis.len())
            .filter(|&i| !self.coeffs[i].is_zero())
            .map(|i| render_term(&self.coeffs[i], &self.basis.render(i)))
            .collect();
        if terms.is_empty() {
            return write!(f, "0");
        }
        let mut out = terms[0].clone();
        for t in &terms[1..] {
            match t.strip_prefix('-') {
                Some(rest) => {
                    out.push_str(" - ");
                    out.push_str(rest);
                }
                None => {
                    out.push_str(" + ");
                    out.push_str(t);
                }
            }
        }
        write!(f, "{out}")
    }
}

impl fmt::Debug for GradedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GradedSeries[{}]({self})", self.shape())
    }
}

#[cfg(test)]
mod tests;
