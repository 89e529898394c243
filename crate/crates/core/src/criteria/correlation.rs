//! Correlation-tensor baselines: the GME-concurrence lower bound and the
//! Ky Fan k-norm criterion on the mode unfoldings.

use indexmap::IndexMap;

use super::{CriterionKind, CriterionReport};
use crate::error::{Error, Result};
use crate::operators::gell_mann_basis;
use crate::states::DensityMatrix;
use crate::tensor::{singular_values, ComplexMatrix, RectMatrix, C64};

const IMAG_TOL: f64 = 1e-10;

/// `t_{αβγ} = (d³/8) tr(ρ λ_α⊗λ_β⊗λ_γ)`, stored with `γ` fastest.
#[derive(Clone, Debug, PartialEq)]
pub struct CorrelationTensor {
    pub d: usize,
    /// `d² − 1`
    pub n: usize,
    pub entries: Vec<f64>,
}

impl CorrelationTensor {
    #[inline]
    pub fn get(&self, alpha: usize, beta: usize, gamma: usize) -> f64 {
        self.entries[(alpha * self.n + beta) * self.n + gamma]
    }

    /// Mode-`mode` unfolding, an `n × n²` matrix. The row index is the
    /// chosen party; columns run over the other two in order.
    pub fn unfold(&self, mode: usize) -> Result<RectMatrix> {
        let n = self.n;
        let mut data = vec![0.0; n * n * n];
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let (row, col) = match mode {
                        0 => (a, b * n + c),
                        1 => (b, a * n + c),
                        2 => (c, a * n + b),
                        _ => return Err(Error::param(format!("mode {mode} out of range 0..3"))),
                    };
                    data[row * n * n + col] = self.get(a, b, c);
                }
            }
        }
        RectMatrix::from_real(n, n * n, &data)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|t| t * t).sum::<f64>().sqrt()
    }
}

fn uniform_dim(rho: &DensityMatrix) -> Result<usize> {
    rho.dims().uniform_dim().ok_or_else(|| {
        Error::param(format!(
            "correlation tensor needs equal local dimensions, got {}",
            rho.dims()
        ))
    })
}

fn nonzeros(m: &ComplexMatrix) -> Vec<(usize, usize, C64)> {
    let d = m.dim();
    let mut out = Vec::new();
    for r in 0..d {
        for c in 0..d {
            let v = m[(r, c)];
            if v.norm_sqr() > 0.0 {
                out.push((r, c, v));
            }
        }
    }
    out
}

pub fn correlation_tensor(rho: &DensityMatrix) -> Result<CorrelationTensor> {
    let d = uniform_dim(rho)?;
    let basis = gell_mann_basis(d)?;
    let sparse: Vec<_> = basis.matrices.iter().map(nonzeros).collect();
    let n = sparse.len();
    let m = rho.matrix();
    let scale = (d * d * d) as f64 / 8.0;
    let mut entries = Vec::with_capacity(n * n * n);
    for la in &sparse {
        for lb in &sparse {
            for lc in &sparse {
                // tr(ρ X) = Σ ρ[c, r] X[r, c]
                let mut acc = C64::new(0.0, 0.0);
                for &(ra, ca, va) in la {
                    for &(rb, cb, vb) in lb {
                        let vab = va * vb;
                        for &(rc, cc, vc) in lc {
                            let row = (ra * d + rb) * d + rc;
                            let col = (ca * d + cb) * d + cc;
                            acc += m[(col, row)] * vab * vc;
                        }
                    }
                }
                if acc.im.abs() > IMAG_TOL {
                    return Err(Error::InvalidDensity {
                        invariant: "real correlation tensor",
                        magnitude: acc.im.abs(),
                    });
                }
                entries.push(scale * acc.re);
            }
        }
    }
    Ok(CorrelationTensor { d, n, entries })
}

/// `‖T‖_F / (2√2)` against `(d − 1)/d`.
pub fn concurrence_bound(rho: &DensityMatrix) -> Result<CriterionReport> {
    let t = correlation_tensor(rho)?;
    let norm = t.frobenius_norm();
    let d = t.d as f64;
    let mut details = IndexMap::new();
    details.insert("frobenius_norm".to_string(), norm);
    CriterionReport::new(
        CriterionKind::ConcurrenceBound,
        norm / (2.0 * 2f64.sqrt()),
        (d - 1.0) / d,
        details,
    )
}

/// `(2√2/3)(2√k + 1)((d−1)/d)√((d+1)/d)`
pub fn knorm_threshold(d: usize, k: usize) -> f64 {
    let (d, k) = (d as f64, k as f64);
    2.0 * 2f64.sqrt() / 3.0 * (2.0 * k.sqrt() + 1.0) * ((d - 1.0) / d) * ((d + 1.0) / d).sqrt()
}

/// Singular values of the three unfoldings, each in descending order.
fn unfolding_spectra(t: &CorrelationTensor) -> Result<[Vec<f64>; 3]> {
    Ok([
        singular_values(&t.unfold(0)?)?,
        singular_values(&t.unfold(1)?)?,
        singular_values(&t.unfold(2)?)?,
    ])
}

fn knorm_report(d: usize, spectra: &[Vec<f64>; 3], k: usize) -> Result<CriterionReport> {
    let mut details = IndexMap::new();
    details.insert("k".to_string(), k as f64);
    let mut total = 0.0;
    for (mode, sv) in spectra.iter().enumerate() {
        let norm: f64 = sv.iter().take(k).sum();
        details.insert(format!("mode{}", mode + 1), norm);
        total += norm;
    }
    CriterionReport::new(
        CriterionKind::TensorKnorm,
        total / 3.0,
        knorm_threshold(d, k),
        details,
    )
}

fn check_k(d: usize, k: usize) -> Result<()> {
    let max = d * d - 1;
    if k == 0 || k > max {
        return Err(Error::param(format!("k = {k} outside 1..={max}")));
    }
    Ok(())
}

/// Mean Ky Fan k-norm of the three unfoldings against the biseparable bound.
pub fn knorm_criterion(rho: &DensityMatrix, k: usize) -> Result<CriterionReport> {
    let d = uniform_dim(rho)?;
    check_k(d, k)?;
    let t = correlation_tensor(rho)?;
    knorm_report(d, &unfolding_spectra(&t)?, k)
}

/// Reports for every `k` in `1..=d²−1`, from a single set of decompositions.
pub fn knorm_criterion_all(rho: &DensityMatrix) -> Result<Vec<CriterionReport>> {
    let t = correlation_tensor(rho)?;
    let spectra = unfolding_spectra(&t)?;
    (1..=t.n).map(|k| knorm_report(t.d, &spectra, k)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{ghz, random_mixed, w3, white_noise_mix};
    use crate::tensor::DimensionSpec;

    fn ghz2() -> DensityMatrix {
        DensityMatrix::from_pure(&ghz(2).unwrap(), DimensionSpec::qubits()).unwrap()
    }

    #[test]
    fn maximally_mixed_has_zero_tensor() {
        for d in 2..4 {
            let rho = DensityMatrix::maximally_mixed(DimensionSpec::uniform(d).unwrap());
            let t = correlation_tensor(&rho).unwrap();
            assert_eq!(t.entries.len(), (d * d - 1).pow(3));
            assert!(t.entries.iter().all(|x| x.abs() < 1e-15));
            assert_eq!(concurrence_bound(&rho).unwrap().statistic, 0.0);
            for r in knorm_criterion_all(&rho).unwrap() {
                assert_eq!(r.statistic, 0.0);
                assert!(!r.verdict.is_detected());
            }
        }
    }

    #[test]
    fn ghz_pauli_correlations() {
        // index 0 = x, 1 = y, 2 = z
        let t = correlation_tensor(&ghz2()).unwrap();
        assert!((t.get(0, 0, 0) - 1.0).abs() < 1e-14);
        for (a, b, c) in [(0, 1, 1), (1, 0, 1), (1, 1, 0)] {
            assert!((t.get(a, b, c) + 1.0).abs() < 1e-14);
        }
        assert!(t.get(2, 2, 2).abs() < 1e-14);
        assert!(t.get(2, 2, 0).abs() < 1e-14);
        // four nonzero entries of magnitude one
        assert!((t.frobenius_norm() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn unfolding_shape_and_norm() {
        let t = correlation_tensor(&ghz2()).unwrap();
        for mode in 0..3 {
            let u = t.unfold(mode).unwrap();
            assert_eq!((u.rows, u.cols), (3, 9));
            assert!((u.frobenius_sq() - 4.0).abs() < 1e-13);
        }
        assert!(t.unfold(3).is_err());
    }

    #[test]
    fn w_noise_concurrence_crossing() {
        let y = 3.0 * 2f64.sqrt() / 33f64.sqrt();
        let w = w3();
        let dims = DimensionSpec::qubits();
        let at = concurrence_bound(&white_noise_mix(&w, y, dims).unwrap()).unwrap();
        assert!(at.margin.abs() < 1e-12);
        let above = concurrence_bound(&white_noise_mix(&w, y + 1e-3, dims).unwrap()).unwrap();
        assert!(above.verdict.is_detected());
    }

    #[test]
    fn pure_w_knorms() {
        let rho = DensityMatrix::from_pure(&w3(), DimensionSpec::qubits()).unwrap();
        let reports = knorm_criterion_all(&rho).unwrap();
        let want = [1.374, 2.317, 3.260];
        for (r, w) in reports.iter().zip(want) {
            assert!((r.statistic - w).abs() < 1e-3, "{}", r.statistic);
        }
        assert!((knorm_threshold(2, 1) - 3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn knorms_are_monotone_in_k() {
        for seed in 0..5 {
            let rho = random_mixed(DimensionSpec::qubits(), seed, None).unwrap();
            let stats: Vec<f64> = knorm_criterion_all(&rho)
                .unwrap()
                .iter()
                .map(|r| r.statistic)
                .collect();
            assert!(stats.windows(2).all(|w| w[0] <= w[1] + 1e-14));
        }
    }

    #[test]
    fn knorm_rejects_bad_k_and_dims() {
        assert!(knorm_criterion(&ghz2(), 0).is_err());
        assert!(knorm_criterion(&ghz2(), 4).is_err());
        assert!(knorm_criterion(&ghz2(), 3).is_ok());
        let uneven = DensityMatrix::maximally_mixed(DimensionSpec::new(2, 3, 2).unwrap());
        assert!(correlation_tensor(&uneven).is_err());
        assert!(concurrence_bound(&uneven).is_err());
    }
}
