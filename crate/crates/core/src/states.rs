//! Reference states, noise mixtures and seeded random ensembles.
//!
//! Randomness comes from [`Sampler`], a thin wrapper around ChaCha8
//! (`rand_chacha::ChaCha8Rng::seed_from_u64`). Gaussians are drawn with the
//! Box–Muller transform and flat Dirichlet weights as normalized exponentials,
//! so the sequence of draws for a given seed is fixed by this file alone.
//! Ensemble member `i` of an ensemble seeded with `s` uses seed `s + i`
//! (wrapping).

use std::f64::consts::PI;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::tensor::{
    hermitian_eig, kron, partial_trace, permute_parties, ComplexMatrix, DimensionSpec, Spectrum,
    Subsystem, C64, HERMITIAN_TOL, ZERO,
};

/// Allowed deviation of the trace from one.
pub const TRACE_TOL: f64 = 1e-12;
/// Most negative eigenvalue tolerated in a density matrix.
pub const POSITIVITY_TOL: f64 = 1e-10;
/// Allowed deviation of a state vector's norm from one.
pub const NORM_TOL: f64 = 1e-10;

/// Checks Hermiticity, unit trace and positivity; returns the spectrum it
/// had to compute anyway.
pub fn validate_density(m: &ComplexMatrix) -> Result<Spectrum> {
    let dev = m.hermiticity_deviation();
    if dev > HERMITIAN_TOL {
        return Err(Error::InvalidDensity {
            invariant: "Hermiticity",
            magnitude: dev,
        });
    }
    let tr = m.trace();
    let tr_dev = (tr - C64::new(1.0, 0.0)).norm();
    if tr_dev > TRACE_TOL {
        return Err(Error::InvalidDensity {
            invariant: "unit trace",
            magnitude: tr_dev,
        });
    }
    let spectrum = hermitian_eig(m)?;
    let min = spectrum.min_eigenvalue();
    if min < -POSITIVITY_TOL {
        return Err(Error::InvalidDensity {
            invariant: "positivity",
            magnitude: -min,
        });
    }
    Ok(spectrum)
}

pub fn check_normalized(psi: &[C64]) -> Result<()> {
    let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(Error::NotNormalized { norm });
    }
    Ok(())
}

/// A validated tripartite density matrix. The spectrum computed during
/// validation is kept so the QFI engine can reuse it.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    dims: DimensionSpec,
    matrix: ComplexMatrix,
    spectrum: Arc<Spectrum>,
}

impl DensityMatrix {
    pub fn new(dims: DimensionSpec, matrix: ComplexMatrix) -> Result<Self> {
        if matrix.dim() != dims.total() {
            return Err(Error::DimensionMismatch {
                expected: dims.total(),
                found: matrix.dim(),
            });
        }
        let spectrum = validate_density(&matrix)?;
        Ok(Self {
            dims,
            matrix,
            spectrum: Arc::new(spectrum),
        })
    }

    pub fn from_pure(psi: &[C64], dims: DimensionSpec) -> Result<Self> {
        check_normalized(psi)?;
        Self::new(dims, ComplexMatrix::projector(psi))
    }

    pub fn maximally_mixed(dims: DimensionSpec) -> Self {
        let n = dims.total();
        Self::new(dims, ComplexMatrix::identity(n).scaled(1.0 / n as f64))
            .expect("I/n is a valid state")
    }

    pub fn dims(&self) -> DimensionSpec {
        self.dims
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn spectrum(&self) -> &Arc<Spectrum> {
        &self.spectrum
    }

    pub fn reduced(&self, keep: &[Subsystem]) -> ComplexMatrix {
        partial_trace(&self.matrix, self.dims, keep).expect("dims validated at construction")
    }
}

impl AsRef<ComplexMatrix> for DensityMatrix {
    fn as_ref(&self) -> &ComplexMatrix {
        &self.matrix
    }
}

fn basis_vector(n: usize, i: usize) -> Vec<C64> {
    let mut v = vec![ZERO; n];
    v[i] = C64::new(1.0, 0.0);
    v
}

/// `(1/√d) Σ_j |jjj⟩`
pub fn ghz(d: usize) -> Result<Vec<C64>> {
    if d < 2 {
        return Err(Error::param(format!("GHZ state needs d >= 2, got {d}")));
    }
    let amp = C64::new(1.0 / (d as f64).sqrt(), 0.0);
    let mut psi = vec![ZERO; d * d * d];
    for j in 0..d {
        psi[(j * d + j) * d + j] = amp;
    }
    Ok(psi)
}

/// `(|100⟩ + |010⟩ + |001⟩)/√3`
pub fn w3() -> Vec<C64> {
    let amp = C64::new(1.0 / 3f64.sqrt(), 0.0);
    let mut psi = vec![ZERO; 8];
    for i in [4, 2, 1] {
        psi[i] = amp;
    }
    psi
}

const SIMPLEX_TOL: f64 = 1e-12;

/// `((1−x−y)/8) I + x |GHZ⟩⟨GHZ| + y |W⟩⟨W|` on three qubits.
pub fn ghz_w_mix(x: f64, y: f64) -> Result<DensityMatrix> {
    if !(x >= -SIMPLEX_TOL && y >= -SIMPLEX_TOL && x + y <= 1.0 + SIMPLEX_TOL) {
        return Err(Error::param(format!(
            "(x, y) = ({x}, {y}) lies outside the simplex x, y >= 0, x + y <= 1"
        )));
    }
    let (x, y) = (x.max(0.0), y.max(0.0));
    let noise = ((1.0 - x - y) / 8.0).max(0.0);
    let mut m = ComplexMatrix::identity(8).scaled(noise);
    m.add_scaled(x, &ComplexMatrix::projector(&ghz(2)?));
    m.add_scaled(y, &ComplexMatrix::projector(&w3()));
    DensityMatrix::new(DimensionSpec::qubits(), m)
}

fn check_probability(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::param(format!(
            "mixing parameter p = {p} outside [0, 1]"
        )));
    }
    Ok(())
}

/// `p |ψ⟩⟨ψ| + (1−p) I/dim`
pub fn white_noise_mix(psi: &[C64], p: f64, dims: DimensionSpec) -> Result<DensityMatrix> {
    check_probability(p)?;
    check_normalized(psi)?;
    let n = dims.total();
    if psi.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: psi.len(),
        });
    }
    let mut m = ComplexMatrix::identity(n).scaled((1.0 - p) / n as f64);
    m.add_scaled(p, &ComplexMatrix::projector(psi));
    DensityMatrix::new(dims, m)
}

/// Seeded source of Gaussian, Haar and Dirichlet draws.
#[derive(Clone, Debug)]
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Standard normal pair via Box–Muller.
    pub fn gaussian_pair(&mut self) -> (f64, f64) {
        // u1 in (0, 1] keeps the log finite
        let u1 = 1.0 - self.rng.gen::<f64>();
        let u2 = self.rng.gen::<f64>();
        let r = (-2.0 * u1.ln()).sqrt();
        let theta = 2.0 * PI * u2;
        (r * theta.cos(), r * theta.sin())
    }

    pub fn complex_gaussian(&mut self) -> C64 {
        let (re, im) = self.gaussian_pair();
        C64::new(re, im)
    }

    /// Haar-random unit vector: a normalized complex Gaussian vector.
    pub fn haar_vector(&mut self, n: usize) -> Vec<C64> {
        let mut v: Vec<C64> = (0..n).map(|_| self.complex_gaussian()).collect();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in &mut v {
            *z /= norm;
        }
        v
    }

    /// Flat Dirichlet(1, …, 1) weights.
    pub fn dirichlet(&mut self, n: usize) -> Vec<f64> {
        let mut w: Vec<f64> = (0..n)
            .map(|_| -(1.0 - self.rng.gen::<f64>()).ln())
            .collect();
        let s: f64 = w.iter().sum();
        for x in &mut w {
            *x /= s;
        }
        w
    }

    /// Dirichlet-weighted sum of `rank` Haar projectors on `C^n`.
    pub fn mixed_matrix(&mut self, n: usize, rank: usize) -> ComplexMatrix {
        let weights = self.dirichlet(rank);
        let mut m = ComplexMatrix::zeros(n);
        for w in weights {
            let v = self.haar_vector(n);
            m.add_scaled(w, &ComplexMatrix::projector(&v));
        }
        m
    }
}

pub fn random_pure(dims: DimensionSpec, seed: u64) -> Vec<C64> {
    Sampler::new(seed).haar_vector(dims.total())
}

/// Random mixed state of the given rank (full rank when `None`).
pub fn random_mixed(dims: DimensionSpec, seed: u64, rank: Option<usize>) -> Result<DensityMatrix> {
    let n = dims.total();
    let rank = rank.unwrap_or(n);
    if rank == 0 || rank > n {
        return Err(Error::param(format!("rank {rank} outside 1..={n}")));
    }
    DensityMatrix::new(dims, Sampler::new(seed).mixed_matrix(n, rank))
}

/// A bipartition, named by the party that stands alone (`A` means `a|bc`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bipartition(pub Subsystem);

impl Bipartition {
    pub const ALL: [Bipartition; 3] = [
        Bipartition(Subsystem::A),
        Bipartition(Subsystem::B),
        Bipartition(Subsystem::C),
    ];

    /// The two parties on the other side, in `a, b, c` order.
    pub fn pair(self) -> [Subsystem; 2] {
        match self.0 {
            Subsystem::A => [Subsystem::B, Subsystem::C],
            Subsystem::B => [Subsystem::A, Subsystem::C],
            Subsystem::C => [Subsystem::A, Subsystem::B],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CutMode {
    /// Dirichlet(1,1,1) weights over the three bipartitions.
    All,
    Single(Bipartition),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairFactor {
    /// Haar pure state on the two grouped parties.
    Entangled,
    /// Product of two random mixed states.
    Product,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BiseparableConfig {
    pub terms: usize,
    pub cuts: CutMode,
    pub pair: PairFactor,
}

impl BiseparableConfig {
    pub fn new(terms: usize) -> Self {
        Self {
            terms,
            cuts: CutMode::All,
            pair: PairFactor::Entangled,
        }
    }
}

/// Embeds `local ⊗ pair` (local on the lone party of `cut`) into `a⊗b⊗c`
/// ordering.
pub fn embed_cut(
    local: &ComplexMatrix,
    pair: &ComplexMatrix,
    cut: Bipartition,
    dims: DimensionSpec,
) -> Result<ComplexMatrix> {
    let [y, z] = cut.pair();
    let parties = [cut.0, y, z];
    let local_dims: Vec<usize> = parties.iter().map(|&s| dims.local(s)).collect();
    if local.dim() != local_dims[0] {
        return Err(Error::DimensionMismatch {
            expected: local_dims[0],
            found: local.dim(),
        });
    }
    if pair.dim() != local_dims[1] * local_dims[2] {
        return Err(Error::DimensionMismatch {
            expected: local_dims[1] * local_dims[2],
            found: pair.dim(),
        });
    }
    let product = kron(local, pair);
    let order: Vec<usize> = Subsystem::ALL
        .iter()
        .map(|s| {
            parties
                .iter()
                .position(|p| p == s)
                .expect("all parties present")
        })
        .collect();
    permute_parties(&product, &local_dims, &order)
}

/// Random biseparable state with every bipartition mixed in.
pub fn biseparable_sample(dims: DimensionSpec, seed: u64, terms: usize) -> Result<DensityMatrix> {
    biseparable_sample_with(dims, seed, BiseparableConfig::new(terms))
}

pub fn biseparable_sample_with(
    dims: DimensionSpec,
    seed: u64,
    config: BiseparableConfig,
) -> Result<DensityMatrix> {
    if config.terms == 0 {
        return Err(Error::param("biseparable sample needs at least one term"));
    }
    let mut sampler = Sampler::new(seed);
    let cut_weights: Vec<(Bipartition, f64)> = match config.cuts {
        CutMode::All => Bipartition::ALL
            .into_iter()
            .zip(sampler.dirichlet(3))
            .collect(),
        CutMode::Single(cut) => vec![(cut, 1.0)],
    };
    let mut m = ComplexMatrix::zeros(dims.total());
    for (cut, cut_weight) in cut_weights {
        let [y, z] = cut.pair();
        let (dx, dy, dz) = (dims.local(cut.0), dims.local(y), dims.local(z));
        for w in sampler.dirichlet(config.terms) {
            let local = sampler.mixed_matrix(dx, dx);
            let pair = match config.pair {
                PairFactor::Entangled => ComplexMatrix::projector(&sampler.haar_vector(dy * dz)),
                PairFactor::Product => {
                    let first = sampler.mixed_matrix(dy, dy);
                    kron(&first, &sampler.mixed_matrix(dz, dz))
                }
            };
            m.add_scaled(cut_weight * w, &embed_cut(&local, &pair, cut, dims)?);
        }
    }
    DensityMatrix::new(dims, m)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EnsembleKind {
    Pure,
    Mixed { rank: Option<usize> },
    Biseparable { terms: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnsembleConfig {
    pub count: usize,
    pub seed: u64,
    pub kind: EnsembleKind,
    pub dims: DimensionSpec,
}

impl EnsembleConfig {
    pub fn member_seed(&self, index: usize) -> u64 {
        self.seed.wrapping_add(index as u64)
    }

    /// Member `index`, independent of every other member.
    pub fn member(&self, index: usize) -> Result<DensityMatrix> {
        let seed = self.member_seed(index);
        match self.kind {
            EnsembleKind::Pure => {
                DensityMatrix::from_pure(&random_pure(self.dims, seed), self.dims)
            }
            EnsembleKind::Mixed { rank } => random_mixed(self.dims, seed, rank),
            EnsembleKind::Biseparable { terms } => biseparable_sample(self.dims, seed, terms),
        }
    }

    pub fn generate(&self) -> Result<Vec<DensityMatrix>> {
        if self.count == 0 {
            return Err(Error::param("ensemble count must be at least 1"));
        }
        (0..self.count).map(|i| self.member(i)).collect()
    }
}

/// Convenience for tests and examples: `|i⟩` in a space of dimension `n`.
pub fn ket(n: usize, i: usize) -> Vec<C64> {
    basis_vector(n, i)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ghz2_amplitudes() {
        let psi = ghz(2).unwrap();
        let r = 0.5f64.sqrt();
        for (i, z) in psi.iter().enumerate() {
            let want = if i == 0 || i == 7 { r } else { 0.0 };
            assert!((z.re - want).abs() < 1e-15 && z.im == 0.0);
        }
        assert!(ghz(1).is_err());
    }

    #[test]
    fn ghz_is_normalized_and_locally_maximally_mixed() {
        for d in 2..=4 {
            let psi = ghz(d).unwrap();
            check_normalized(&psi).unwrap();
            let rho = DensityMatrix::from_pure(&psi, DimensionSpec::uniform(d).unwrap()).unwrap();
            for s in Subsystem::ALL {
                let red = rho.reduced(&[s]);
                let want = ComplexMatrix::identity(d).scaled(1.0 / d as f64);
                assert!(red.max_diff(&want) < 1e-14);
            }
        }
    }

    #[test]
    fn w_state_basics() {
        let w = w3();
        check_normalized(&w).unwrap();
        assert_eq!(w[0], ZERO);
    }

    #[test]
    fn ghz_w_mix_corners() {
        let mixed = ghz_w_mix(0.0, 0.0).unwrap();
        assert!(
            mixed
                .matrix()
                .max_diff(&ComplexMatrix::identity(8).scaled(0.125))
                < 1e-15
        );
        let pure = ghz_w_mix(1.0, 0.0).unwrap();
        let proj = ComplexMatrix::projector(&ghz(2).unwrap());
        assert!(pure.matrix().max_diff(&proj) < 1e-15);
        let tr = ghz_w_mix(0.3, 0.4).unwrap().matrix().trace();
        assert!((tr.re - 1.0).abs() < 1e-14 && tr.im.abs() < 1e-15);
        assert!(ghz_w_mix(0.6, 0.6).is_err());
        assert!(ghz_w_mix(-0.1, 0.2).is_err());
    }

    #[test]
    fn ghz_w_mix_agrees_with_white_noise_mix() {
        for p in [0.0, 0.1, 0.5, 0.9, 1.0] {
            let a = ghz_w_mix(p, 0.0).unwrap();
            let b = white_noise_mix(&ghz(2).unwrap(), p, DimensionSpec::qubits()).unwrap();
            assert!(a.matrix().max_diff(b.matrix()) <= 1e-14);
        }
    }

    #[test]
    fn white_noise_spectrum() {
        let p = 0.37;
        let rho = white_noise_mix(&ghz(2).unwrap(), p, DimensionSpec::qubits()).unwrap();
        let ev = &rho.spectrum().eigenvalues;
        assert!((ev[0] - (p + (1.0 - p) / 8.0)).abs() < 1e-14);
        for l in &ev[1..] {
            assert!((l - (1.0 - p) / 8.0).abs() < 1e-14);
        }
        assert!(white_noise_mix(&ghz(2).unwrap(), 1.2, DimensionSpec::qubits()).is_err());
        assert!(white_noise_mix(&ghz(2).unwrap(), -0.2, DimensionSpec::qubits()).is_err());
    }

    #[test]
    fn white_noise_endpoints() {
        let psi = w3();
        let one = white_noise_mix(&psi, 1.0, DimensionSpec::qubits()).unwrap();
        assert!(one.matrix().max_diff(&ComplexMatrix::projector(&psi)) < 1e-15);
        let zero = white_noise_mix(&psi, 0.0, DimensionSpec::qubits()).unwrap();
        assert!(
            zero.matrix()
                .max_diff(&ComplexMatrix::identity(8).scaled(0.125))
                < 1e-15
        );
    }

    #[test]
    fn validation_names_the_broken_invariant() {
        let dims = DimensionSpec::qubits();
        let mut m = ComplexMatrix::identity(8).scaled(0.125);
        m[(0, 1)] = C64::new(0.1, 0.0);
        match DensityMatrix::new(dims, m) {
            Err(Error::InvalidDensity {
                invariant,
                magnitude,
            }) => {
                assert_eq!(invariant, "Hermiticity");
                assert!((magnitude - 0.1).abs() < 1e-15);
            }
            other => panic!("unexpected {other:?}"),
        }
        let m = ComplexMatrix::identity(8).scaled(0.25);
        assert!(matches!(
            DensityMatrix::new(dims, m),
            Err(Error::InvalidDensity {
                invariant: "unit trace",
                ..
            })
        ));
        let mut diag = vec![0.25; 8];
        diag[0] = -0.5;
        diag[1] = 0.0;
        let m = ComplexMatrix::diagonal(&diag);
        assert!(matches!(
            DensityMatrix::new(dims, m),
            Err(Error::InvalidDensity {
                invariant: "positivity",
                ..
            })
        ));
        assert!(matches!(
            DensityMatrix::new(dims, ComplexMatrix::identity(4).scaled(0.25)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn random_states_are_normalized_and_deterministic() {
        let dims = DimensionSpec::new(2, 3, 2).unwrap();
        let psi = random_pure(dims, 7);
        check_normalized(&psi).unwrap();
        assert_eq!(psi, random_pure(dims, 7));
        assert_ne!(psi, random_pure(dims, 8));
        let rho = random_mixed(dims, 11, None).unwrap();
        assert!((rho.matrix().trace().re - 1.0).abs() < 1e-12);
        assert_eq!(rho.matrix(), random_mixed(dims, 11, None).unwrap().matrix());
        let low = random_mixed(dims, 11, Some(2)).unwrap();
        assert!(low.spectrum().eigenvalues[2].abs() < 1e-12);
        assert!(random_mixed(dims, 1, Some(0)).is_err());
        assert!(random_mixed(dims, 1, Some(13)).is_err());
    }

    #[test]
    fn embed_cut_places_factors() {
        let dims = DimensionSpec::new(2, 3, 4).unwrap();
        let mut s = Sampler::new(3);
        let rb = s.mixed_matrix(3, 3);
        let ra = s.mixed_matrix(2, 2);
        let rc = s.mixed_matrix(4, 4);
        let embedded = embed_cut(&rb, &kron(&ra, &rc), Bipartition(Subsystem::B), dims).unwrap();
        let direct = kron(&kron(&ra, &rb), &rc);
        assert!(embedded.max_diff(&direct) < 1e-15);
    }

    #[test]
    fn single_cut_product_sample_is_fully_separable() {
        let dims = DimensionSpec::qubits();
        let cfg = BiseparableConfig {
            terms: 1,
            cuts: CutMode::Single(Bipartition(Subsystem::A)),
            pair: PairFactor::Product,
        };
        let rho = biseparable_sample_with(dims, 5, cfg).unwrap();
        let product = kron(
            &kron(&rho.reduced(&[Subsystem::A]), &rho.reduced(&[Subsystem::B])),
            &rho.reduced(&[Subsystem::C]),
        );
        assert!(rho.matrix().max_diff(&product) < 1e-14);
    }

    #[test]
    fn biseparable_samples_are_states() {
        for (i, dims) in [
            DimensionSpec::qubits(),
            DimensionSpec::new(2, 3, 2).unwrap(),
        ]
        .into_iter()
        .enumerate()
        {
            for terms in 1..=3 {
                let rho = biseparable_sample(dims, 100 + i as u64, terms).unwrap();
                assert!((rho.matrix().trace().re - 1.0).abs() < 1e-12);
            }
        }
        assert!(biseparable_sample(DimensionSpec::qubits(), 0, 0).is_err());
    }

    #[test]
    fn ensemble_members_use_split_seeds() {
        let cfg = EnsembleConfig {
            count: 3,
            seed: 40,
            kind: EnsembleKind::Biseparable { terms: 2 },
            dims: DimensionSpec::qubits(),
        };
        let all = cfg.generate().unwrap();
        assert_eq!(all.len(), 3);
        let again = biseparable_sample(DimensionSpec::qubits(), 42, 2).unwrap();
        assert_eq!(all[2].matrix(), again.matrix());
        let empty = EnsembleConfig { count: 0, ..cfg };
        assert!(empty.generate().is_err());
    }
}
