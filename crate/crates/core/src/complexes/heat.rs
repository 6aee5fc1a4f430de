use nalgebra::{Cholesky, Complex, DMatrix, SymmetricEigen};
use serde::Serialize;

use super::{sign, EquivariantComplex};

type CMat = DMatrix<Complex<f64>>;

#[derive(Debug, Clone, PartialEq)]
pub struct HeatSpec {
    pub times: Vec<f64>,
    pub tolerance: f64,
}

impl Default for HeatSpec {
    fn default() -> Self {
        HeatSpec {
            times: vec![0.1, 1.0, 10.0],
            tolerance: 1e-8,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct HeatReport {
    pub element: usize,
    pub times: Vec<f64>,
    /// `(re, im)` per time.
    pub values: Vec<(f64, f64)>,
    pub exact: (f64, f64),
    pub max_deviation: f64,
    pub passed: bool,
}

/// Per-degree data in coordinates where the group acts unitarily.
struct Unitarized {
    action: Vec<Vec<CMat>>,
    diffs: Vec<CMat>,
}

impl EquivariantComplex {
    /// Change of basis making every piece unitary for the group-averaged
    /// metric; the identity for pieces that are already unitary.
    fn unitarize(&self) -> Unitarized {
        let n = self.group.order() as f64;
        let mut to_new = Vec::new();
        let mut to_old = Vec::new();
        let mut action = Vec::new();
        for p in &self.pieces {
            let d = p.dim();
            let mats: Vec<CMat> = p.matrices().iter().map(|m| m.to_complex()).collect();
            let mut h = CMat::zeros(d, d);
            for m in &mats {
                h += m.adjoint() * m;
            }
            h /= Complex::new(n, 0.0);
            let (lstar, lstar_inv) = if d == 0 {
                (CMat::zeros(0, 0), CMat::zeros(0, 0))
            } else {
                let l = Cholesky::new(h)
                    .expect("averaged metric is positive definite")
                    .l();
                let inv = l
                    .adjoint()
                    .try_inverse()
                    .expect("triangular factor is invertible");
                (l.adjoint(), inv)
            };
            action.push(mats.iter().map(|m| &lstar * m * &lstar_inv).collect());
            to_new.push(lstar);
            to_old.push(lstar_inv);
        }
        let diffs = self
            .differentials
            .iter()
            .enumerate()
            .map(|(i, d)| &to_new[i + 1] * d.to_complex() * &to_old[i])
            .collect();
        Unitarized { action, diffs }
    }

    /// `Tr_s[ρ(g) exp(−tΔ)]` for each `t`, with `Δ_k = d_k* d_k + d_{k−1} d_{k−1}*`.
    pub fn heat_supertrace(&self, g: usize, spec: &HeatSpec) -> Vec<Complex<f64>> {
        let u = self.unitarize();
        let len = self.pieces.len();
        let laplacians: Vec<Option<SymmetricEigen<Complex<f64>, nalgebra::Dyn>>> = (0..len)
            .map(|i| {
                let d = self.pieces[i].dim();
                if d == 0 {
                    return None;
                }
                let mut lap = CMat::zeros(d, d);
                if i < u.diffs.len() {
                    lap += u.diffs[i].adjoint() * &u.diffs[i];
                }
                if i > 0 {
                    lap += &u.diffs[i - 1] * u.diffs[i - 1].adjoint();
                }
                // symmetrize against rounding before the Hermitian solver
                let lap = (&lap + lap.adjoint()) * Complex::new(0.5, 0.0);
                Some(SymmetricEigen::new(lap))
            })
            .collect();
        spec.times
            .iter()
            .map(|&t| {
                let mut acc = Complex::new(0.0, 0.0);
                for (i, eig) in laplacians.iter().enumerate() {
                    let Some(eig) = eig else { continue };
                    let decay = eig.eigenvalues.map(|l| Complex::new((-t * l).exp(), 0.0));
                    let heat = &eig.eigenvectors
                        * CMat::from_diagonal(&decay)
                        * eig.eigenvectors.adjoint();
                    let tr = (&u.action[i][g] * heat).trace();
                    acc += tr * sign(self.lowest + i as i32) as f64;
                }
                acc
            })
            .collect()
    }

    /// Compares the heat supertrace at every time with the exact supertrace.
    pub fn check_heat(&self, g: usize, spec: &HeatSpec) -> HeatReport {
        let values = self.heat_supertrace(g, spec);
        let exact = self.supertrace_at(g).to_complex();
        let max_deviation = values
            .iter()
            .map(|v| (v - exact).norm())
            .fold(0.0, f64::max);
        HeatReport {
            element: g,
            times: spec.times.clone(),
            values: values.iter().map(|v| (v.re, v.im)).collect(),
            exact: (exact.re, exact.im),
            max_deviation,
            passed: max_deviation <= spec.tolerance,
        }
    }
}
