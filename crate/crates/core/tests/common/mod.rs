#![allow(dead_code)]

use qfi_gme::operators::LocalBasis;
use qfi_gme::states::Sampler;
use qfi_gme::tensor::kron;
use qfi_gme::{ComplexMatrix, C64};

/// Random Hermitian matrix with Gaussian entries.
pub fn random_hermitian(sampler: &mut Sampler, n: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(n);
    for i in 0..n {
        m[(i, i)] = C64::new(sampler.gaussian_pair().0, 0.0);
        for j in i + 1..n {
            let z = sampler.complex_gaussian();
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    m
}

/// Random unitary from the eigenvectors of a random Hermitian matrix.
pub fn random_unitary(sampler: &mut Sampler, n: usize) -> ComplexMatrix {
    let h = random_hermitian(sampler, n);
    qfi_gme::tensor::hermitian_eig(&h).unwrap().eigenvectors
}

/// `Σ_μ F(ρ, λ_μ⊗I + I⊗λ_μ)` for a two-qudit state.
pub fn pair_sum(rho: &ComplexMatrix, basis: &LocalBasis) -> f64 {
    let engine = qfi_gme::QfiEngine::new(rho).unwrap();
    let id = ComplexMatrix::identity(basis.d);
    basis
        .matrices
        .iter()
        .map(|m| {
            let obs = &kron(m, &id) + &kron(&id, m);
            engine.qfi(&obs).unwrap().value
        })
        .sum()
}

/// `Σ_μ F(ρ, λ_μ)` for a single qudit.
pub fn local_sum(rho: &ComplexMatrix, basis: &LocalBasis) -> f64 {
    let engine = qfi_gme::QfiEngine::new(rho).unwrap();
    basis
        .matrices
        .iter()
        .map(|m| engine.qfi(m).unwrap().value)
        .sum()
}
