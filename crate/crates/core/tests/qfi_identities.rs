mod common;

use proptest::prelude::*;
use qfi_gme::operators::{collective_signed, gell_mann_basis, SignPattern};
use qfi_gme::qfi::{qfi_pure, qfi_spectral, qfi_white_noise, sld, QfiEngine};
use qfi_gme::states::{random_mixed, random_pure, white_noise_mix, Sampler};
use qfi_gme::tensor::kron;
use qfi_gme::{ComplexMatrix, DimensionSpec};

use common::{random_hermitian, random_unitary};

const TOL: f64 = 1e-9;

fn dims_for(d: usize) -> DimensionSpec {
    DimensionSpec::uniform(d).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn pure_variance_matches_spectral(seed: u64, n in 2usize..9) {
        let mut s = Sampler::new(seed);
        let psi = s.haar_vector(n);
        let a = random_hermitian(&mut s, n);
        let pure = qfi_pure(&psi, &a).unwrap().value;
        let spectral = qfi_spectral(&ComplexMatrix::projector(&psi), &a).unwrap().value;
        prop_assert!((pure - spectral).abs() < TOL * pure.max(1.0));
    }

    #[test]
    fn white_noise_closed_form_matches_spectral(seed: u64, p in 0.0f64..=1.0) {
        let dims = DimensionSpec::qubits();
        let psi = random_pure(dims, seed);
        let a = random_hermitian(&mut Sampler::new(seed ^ 0x5eed), 8);
        let closed = qfi_white_noise(&psi, &a, p, 2, 3).unwrap().value;
        let rho = white_noise_mix(&psi, p, dims).unwrap();
        let spectral = QfiEngine::from(&rho).qfi(&a).unwrap().value;
        prop_assert!((closed - spectral).abs() < TOL * closed.max(1.0));
    }

    #[test]
    fn sld_reproduces_qfi(seed: u64, n in 2usize..9, rank in 1usize..9) {
        let rank = rank.min(n);
        let mut s = Sampler::new(seed);
        let rho = s.mixed_matrix(n, rank);
        let a = random_hermitian(&mut s, n);
        let l = sld(&rho, &a).unwrap();
        let q = qfi_spectral(&rho, &a).unwrap().value;
        prop_assert!(l.matrix.is_hermitian(1e-10));
        prop_assert!((l.fisher_information(&rho) - q).abs() < TOL * q.max(1.0));
        prop_assert!(l.residual(&rho, &a) < 1e-8);
    }

    #[test]
    fn additive_over_products(seed: u64, n1 in 2usize..4, n2 in 2usize..4) {
        let mut s = Sampler::new(seed);
        let (r1, r2) = (s.mixed_matrix(n1, n1), s.mixed_matrix(n2, n2));
        let (a, b) = (random_hermitian(&mut s, n1), random_hermitian(&mut s, n2));
        let joint = &kron(&a, &ComplexMatrix::identity(n2)) + &kron(&ComplexMatrix::identity(n1), &b);
        let lhs = qfi_spectral(&kron(&r1, &r2), &joint).unwrap().value;
        let rhs = qfi_spectral(&r1, &a).unwrap().value + qfi_spectral(&r2, &b).unwrap().value;
        prop_assert!((lhs - rhs).abs() < TOL * rhs.max(1.0));
    }

    #[test]
    fn convex_in_the_state(seed: u64, n in 2usize..9, p in 0.0f64..=1.0) {
        let mut s = Sampler::new(seed);
        let (r1, r2) = (s.mixed_matrix(n, n), s.mixed_matrix(n, 1));
        let a = random_hermitian(&mut s, n);
        let mut mix = r1.scaled(p);
        mix.add_scaled(1.0 - p, &r2);
        let lhs = qfi_spectral(&mix, &a).unwrap().value;
        let rhs = p * qfi_spectral(&r1, &a).unwrap().value
            + (1.0 - p) * qfi_spectral(&r2, &a).unwrap().value;
        prop_assert!(lhs <= rhs + TOL * rhs.max(1.0));
    }

    #[test]
    fn unitary_covariance(seed: u64, n in 2usize..7) {
        let mut s = Sampler::new(seed);
        let rho = s.mixed_matrix(n, n);
        let a = random_hermitian(&mut s, n);
        let u = random_unitary(&mut s, n);
        let rotate = |m: &ComplexMatrix| u.matmul(m).matmul(&u.adjoint());
        let before = qfi_spectral(&rho, &a).unwrap().value;
        let after = qfi_spectral(&rotate(&rho), &rotate(&a)).unwrap().value;
        prop_assert!((before - after).abs() < TOL * before.max(1.0));
    }

    #[test]
    fn global_sign_invariance(seed: u64, d in 2usize..4) {
        let rho = random_mixed(dims_for(d), seed, None).unwrap();
        let engine = QfiEngine::from(&rho);
        let basis = gell_mann_basis(d).unwrap();
        let m = &basis.matrices[seed as usize % basis.len()];
        for pattern in ["++-", "+-+", "-++", "+++"] {
            let p = SignPattern::parse(pattern).unwrap();
            let o = collective_signed(m, m, m, p, dims_for(d)).unwrap();
            let o_neg = collective_signed(m, m, m, p.negated(), dims_for(d)).unwrap();
            let f = engine.qfi(&o.total).unwrap().value;
            let f_neg = engine.qfi(&o_neg.total).unwrap().value;
            prop_assert!((f - f_neg).abs() < TOL * f.max(1.0));
        }
    }

    #[test]
    fn qfi_bounded_by_variance(seed: u64, n in 2usize..9) {
        let mut s = Sampler::new(seed);
        let rho = s.mixed_matrix(n, n);
        let a = random_hermitian(&mut s, n);
        let q = qfi_spectral(&rho, &a).unwrap().value;
        let mean = rho.trace_product(&a).re;
        let var = rho.trace_product(&a.matmul(&a)).re - mean * mean;
        prop_assert!(q >= 0.0);
        prop_assert!(q <= var + TOL * var.max(1.0));
    }
}
