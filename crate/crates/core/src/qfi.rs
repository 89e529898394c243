//! Quantum Fisher information of a state with respect to a fixed observable.
//!
//! The spectral route is the workhorse:
//!
//! ```text
//! F(ρ, A) = Σ_{k,l : λ_k+λ_l > ε} (λ_k − λ_l)² / (2(λ_k + λ_l)) · |⟨k|A|l⟩|²
//! ```
//!
//! with `ε = 1e-12`. Pairs outside the support contribute nothing, and the
//! symmetric logarithmic derivative is likewise set to zero there.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::operators::CollectiveObservable;
use crate::states::{check_normalized, validate_density, DensityMatrix};
use crate::tensor::{ComplexMatrix, Spectrum, C64, HERMITIAN_TOL};

/// Cutoff on `λ_k + λ_l` below which a pair counts as outside the support.
pub const SUPPORT_CUTOFF: f64 = 1e-12;

/// Negative round-off up to this size is clamped to zero.
pub const NEGATIVE_CLAMP: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum QfiMethod {
    Spectral,
    PureVariance,
    WhiteNoiseClosedForm,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QfiValue {
    pub value: f64,
    pub method: QfiMethod,
}

fn clamp_nonnegative(value: f64, scale: f64, method: QfiMethod) -> Result<QfiValue> {
    if value < -NEGATIVE_CLAMP * scale.max(1.0) {
        return Err(Error::NegativeQfi(value));
    }
    Ok(QfiValue {
        value: value.max(0.0),
        method,
    })
}

fn check_observable(a: &ComplexMatrix, dim: usize) -> Result<()> {
    if a.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: a.dim(),
        });
    }
    let deviation = a.hermiticity_deviation();
    if deviation > HERMITIAN_TOL * a.max_abs().max(1.0) {
        return Err(Error::NotHermitian { deviation });
    }
    Ok(())
}

/// Holds the eigendecomposition of one state so that many observables can
/// be evaluated against it.
#[derive(Clone, Debug)]
pub struct QfiEngine {
    spectrum: Arc<Spectrum>,
}

impl QfiEngine {
    /// Validates `rho` as a density matrix (any dimension) and diagonalizes it.
    pub fn new(rho: &ComplexMatrix) -> Result<Self> {
        Ok(Self {
            spectrum: Arc::new(validate_density(rho)?),
        })
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    pub fn dim(&self) -> usize {
        self.spectrum.len()
    }

    pub fn qfi(&self, a: &ComplexMatrix) -> Result<QfiValue> {
        check_observable(a, self.dim())?;
        let lambda = &self.spectrum.eigenvalues;
        let elements = self.spectrum.to_eigenbasis(a);
        let n = lambda.len();
        let mut total = 0.0;
        for k in 0..n {
            for l in k + 1..n {
                let sum = lambda[k] + lambda[l];
                if sum > SUPPORT_CUTOFF {
                    let diff = lambda[k] - lambda[l];
                    // (k,l) and (l,k) contribute equally
                    total += diff * diff / sum * elements[(k, l)].norm_sqr();
                }
            }
        }
        clamp_nonnegative(total, 1.0, QfiMethod::Spectral)
    }

    pub fn sld(&self, a: &ComplexMatrix) -> Result<SldOperator> {
        check_observable(a, self.dim())?;
        let lambda = &self.spectrum.eigenvalues;
        let elements = self.spectrum.to_eigenbasis(a);
        let n = lambda.len();
        let mut l_eig = ComplexMatrix::zeros(n);
        for k in 0..n {
            for l in 0..n {
                let sum = lambda[k] + lambda[l];
                if sum > SUPPORT_CUTOFF {
                    let coeff = C64::new(0.0, 2.0 * (lambda[k] - lambda[l]) / sum);
                    l_eig[(k, l)] = coeff * elements[(k, l)];
                }
            }
        }
        let v = &self.spectrum.eigenvectors;
        Ok(SldOperator {
            matrix: v.matmul(&l_eig).matmul(&v.adjoint()),
        })
    }
}

impl From<&DensityMatrix> for QfiEngine {
    fn from(rho: &DensityMatrix) -> Self {
        Self {
            spectrum: Arc::clone(rho.spectrum()),
        }
    }
}

/// Symmetric logarithmic derivative `L` with `i[ρ,A] = (Lρ + ρL)/2` on the
/// support of `ρ`.
#[derive(Clone, Debug)]
pub struct SldOperator {
    pub matrix: ComplexMatrix,
}

impl SldOperator {
    /// `(1/4) tr(ρ L²)`
    pub fn fisher_information(&self, rho: &ComplexMatrix) -> f64 {
        let l2 = self.matrix.matmul(&self.matrix);
        0.25 * rho.trace_product(&l2).re
    }

    /// Largest entry of `i[ρ,A] − (Lρ + ρL)/2`.
    pub fn residual(&self, rho: &ComplexMatrix, a: &ComplexMatrix) -> f64 {
        let commutator = &rho.matmul(a) - &a.matmul(rho);
        let lhs: Vec<C64> = commutator
            .as_slice()
            .iter()
            .map(|z| z * C64::new(0.0, 1.0))
            .collect();
        let lhs = ComplexMatrix::from_vec(rho.dim(), lhs).expect("same size");
        let anti = &self.matrix.matmul(rho) + &rho.matmul(&self.matrix);
        lhs.max_diff(&anti.scaled(0.5))
    }
}

pub fn qfi_spectral(rho: &ComplexMatrix, a: &ComplexMatrix) -> Result<QfiValue> {
    QfiEngine::new(rho)?.qfi(a)
}

pub fn sld(rho: &ComplexMatrix, a: &ComplexMatrix) -> Result<SldOperator> {
    QfiEngine::new(rho)?.sld(a)
}

/// Variance `⟨A²⟩ − ⟨A⟩²` of a pure state.
pub fn qfi_pure(psi: &[C64], a: &ComplexMatrix) -> Result<QfiValue> {
    check_normalized(psi)?;
    check_observable(a, psi.len())?;
    let a_psi = a.apply(psi);
    let second: f64 = a_psi.iter().map(|z| z.norm_sqr()).sum();
    let first: C64 = psi.iter().zip(&a_psi).map(|(p, q)| p.conj() * q).sum();
    clamp_nonnegative(
        second - first.re * first.re,
        second,
        QfiMethod::PureVariance,
    )
}

/// QFI of `p|ψ⟩⟨ψ| + (1−p) I/d^N` from the pure-state variance:
/// `p² / (p + 2(1−p) d^{−N}) · (ΔA)²_ψ`.
pub fn qfi_white_noise(
    psi: &[C64],
    a: &ComplexMatrix,
    p: f64,
    d: usize,
    parties: u32,
) -> Result<QfiValue> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::param(format!(
            "mixing parameter p = {p} outside [0, 1]"
        )));
    }
    let dim = d
        .checked_pow(parties)
        .ok_or_else(|| Error::param("d^N overflows"))?;
    if a.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: a.dim(),
        });
    }
    let pure = qfi_pure(psi, a)?.value;
    let noise = 2.0 * (1.0 - p) / dim as f64;
    let factor = if p == 0.0 { 0.0 } else { p * p / (p + noise) };
    Ok(QfiValue {
        value: factor * pure,
        method: QfiMethod::WhiteNoiseClosedForm,
    })
}

fn check_family_dims(rho: &DensityMatrix, family: &[CollectiveObservable]) -> Result<()> {
    for obs in family {
        if obs.dims != rho.dims() {
            return Err(Error::DimensionMismatch {
                expected: rho.dims().total(),
                found: obs.dims.total(),
            });
        }
    }
    Ok(())
}

/// Per-observable QFI values for a family, sharing one eigendecomposition.
pub fn fisher_terms(rho: &DensityMatrix, family: &[CollectiveObservable]) -> Result<Vec<f64>> {
    check_family_dims(rho, family)?;
    let engine = QfiEngine::from(rho);
    family
        .iter()
        .map(|obs| engine.qfi(&obs.total).map(|q| q.value))
        .collect()
}

/// `Σ_μ F(ρ, O_μ)` over a family of collective observables.
pub fn fisher_sum(rho: &DensityMatrix, family: &[CollectiveObservable]) -> Result<f64> {
    Ok(fisher_terms(rho, family)?.iter().sum())
}
