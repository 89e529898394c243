use indexmap::IndexMap;

use super::{CriterionKind, CriterionReport};
use crate::error::{Error, Result};
use crate::operators::{
    collective_family, gell_mann_basis, pauli_family_with_signs, signed_pauli_families,
    CollectiveObservable, SignPattern,
};
use crate::qfi::{fisher_terms, QfiEngine};
use crate::states::DensityMatrix;
use crate::tensor::DimensionSpec;

/// Upper bounds on the Gell-Mann QFI sums of single-qudit states (`f1`) and
/// of two-qudit states under `λ⊗I + I⊗λ` (`f2`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LemmaBounds {
    pub d: usize,
    pub f1: f64,
    pub f2: f64,
}

impl LemmaBounds {
    /// `2(d−1)(3d+4)/d`, evaluated directly rather than as `f1 + f2`.
    pub fn threshold(&self) -> f64 {
        let d = self.d as f64;
        2.0 * (d - 1.0) * (3.0 * d + 4.0) / d
    }

    /// Checks `f1 + f2 = threshold` in exact integer arithmetic (all three
    /// share the denominator `d`).
    pub fn additive_exact(&self) -> bool {
        let d = self.d as u128;
        2 * (d - 1) * d + 4 * (d - 1) * (d + 2) == 2 * (d - 1) * (3 * d + 4)
    }
}

pub fn lemma_bounds(d: usize) -> Result<LemmaBounds> {
    if d < 2 {
        return Err(Error::param(format!("lemma bounds need d >= 2, got {d}")));
    }
    let df = d as f64;
    Ok(LemmaBounds {
        d,
        f1: 2.0 * (df - 1.0),
        f2: 4.0 * (df - 1.0) * (df + 2.0) / df,
    })
}

fn labelled_terms(family: &[CollectiveObservable], values: &[f64]) -> IndexMap<String, f64> {
    family
        .iter()
        .zip(values)
        .map(|(o, &v)| (o.label.clone(), v))
        .collect()
}

fn require_uniform(dims: DimensionSpec) -> Result<usize> {
    dims.uniform_dim().ok_or_else(|| {
        Error::param(format!(
            "criterion needs equal local dimensions, got {dims}"
        ))
    })
}

/// Full Gell-Mann collective family (all signs `+`) against
/// `2(d−1)(3d+4)/d`.
pub fn corollary1(rho: &DensityMatrix) -> Result<CriterionReport> {
    let d = require_uniform(rho.dims())?;
    let family = collective_family(&gell_mann_basis(d)?, rho.dims(), SignPattern::PLUS)?;
    let values = fisher_terms(rho, &family)?;
    let bounds = lemma_bounds(d)?;
    CriterionReport::new(
        CriterionKind::Corollary1,
        values.iter().sum(),
        bounds.threshold(),
        labelled_terms(&family, &values),
    )
}

/// How sign patterns are chosen for the three-qubit Pauli criterion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Corollary2Mode {
    /// One sign class shared by `σ_x, σ_y, σ_z`; the best class is reported.
    FixedPattern,
    /// Each Pauli operator picks its own best sign class.
    PerOperator,
}

/// Signs used for the GHZ/W mixture: `(+,+,+)` for `σ_x` and `σ_y`,
/// `(+,+,−)` for `σ_z`.
pub fn ghz_w_signs() -> [SignPattern; 3] {
    let minus_c = SignPattern::parse("++-").expect("valid literal");
    [SignPattern::PLUS, SignPattern::PLUS, minus_c]
}

fn require_qubits(rho: &DensityMatrix) -> Result<()> {
    if rho.dims() != DimensionSpec::qubits() {
        return Err(Error::param(format!(
            "the Pauli criterion needs three qubits, got {}",
            rho.dims()
        )));
    }
    Ok(())
}

/// Pauli collective family against the constant 10, maximized over sign
/// classes.
///
/// Only the `(+,+,+)` class is covered by the two-qubit bound `8` for every
/// state: a pair carrying opposite signs can reach 12 (e.g. `σ⊗I − I⊗σ` on
/// the singlet), so a positive margin that relies on a flipped class is not a
/// certificate on its own. See `sign_flips_break_the_pair_bound` in the
/// tests.
pub fn corollary2(rho: &DensityMatrix, mode: Corollary2Mode) -> Result<CriterionReport> {
    require_qubits(rho)?;
    let classes = signed_pauli_families();
    let engine = QfiEngine::from(rho);
    // table[i][c] = F(ρ, Pauli i with sign class c)
    let mut table = [[0.0; 4]; 3];
    for (c, &pattern) in classes.iter().enumerate() {
        for (i, obs) in pauli_family_with_signs([pattern; 3]).iter().enumerate() {
            table[i][c] = engine.qfi(&obs.total)?.value;
        }
    }
    let best_class = |values: &dyn Fn(usize) -> f64| {
        // first maximum wins, so (+,+,+) is preferred on ties; round-off
        // differences between symmetric classes count as ties
        (0..4).fold(0, |best, c| {
            let (v, b) = (values(c), values(best));
            if v > b + 1e-12 * b.abs().max(1.0) {
                c
            } else {
                best
            }
        })
    };
    let chosen: [usize; 3] = match mode {
        Corollary2Mode::FixedPattern => {
            let c = best_class(&|c| (0..3).map(|i| table[i][c]).sum());
            [c; 3]
        }
        Corollary2Mode::PerOperator => std::array::from_fn(|i| best_class(&|c| table[i][c])),
    };
    let signs = chosen.map(|c| classes[c]);
    let family = pauli_family_with_signs(signs);
    let values: Vec<f64> = (0..3).map(|i| table[i][chosen[i]]).collect();
    CriterionReport::new(
        CriterionKind::Corollary2,
        values.iter().sum(),
        10.0,
        labelled_terms(&family, &values),
    )
}

/// Pauli criterion with explicitly chosen signs per Pauli operator.
pub fn corollary2_with_signs(
    rho: &DensityMatrix,
    signs: [SignPattern; 3],
) -> Result<CriterionReport> {
    require_qubits(rho)?;
    let family = pauli_family_with_signs(signs);
    let values = fisher_terms(rho, &family)?;
    CriterionReport::new(
        CriterionKind::Corollary2,
        values.iter().sum(),
        10.0,
        labelled_terms(&family, &values),
    )
}

/// Generic criterion: `Σ_μ F(ρ, O_μ) > f1 + f2`, with bounds supplied by the
/// caller for the family at hand.
pub fn theorem1_margin(
    rho: &DensityMatrix,
    family: &[CollectiveObservable],
    f1: f64,
    f2: f64,
) -> Result<CriterionReport> {
    let values = fisher_terms(rho, family)?;
    CriterionReport::new(
        CriterionKind::Theorem1Custom,
        values.iter().sum(),
        f1 + f2,
        labelled_terms(family, &values),
    )
}

/// Single-party bounds `(F_a, F_b, F_c)` and pair bounds `(F_ab, F_ac, F_bc)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReducedBounds {
    pub locals: [f64; 3],
    pub pairs: [f64; 3],
}

impl ReducedBounds {
    pub fn threshold(&self) -> f64 {
        let max = |v: [f64; 3]| v.into_iter().fold(f64::NEG_INFINITY, f64::max);
        max(self.locals) + max(self.pairs)
    }
}

/// Criterion for possibly unequal local dimensions:
/// `Σ_μ F > max(F_a,F_b,F_c) + max(F_ab,F_ac,F_bc)`. Without explicit bounds
/// the Gell-Mann lemma bounds are used, which requires equal dimensions.
pub fn theorem2_margin(
    rho: &DensityMatrix,
    family: &[CollectiveObservable],
    bounds: Option<ReducedBounds>,
) -> Result<CriterionReport> {
    let bounds = match bounds {
        Some(b) => b,
        None => {
            let d = rho.dims().uniform_dim().ok_or(Error::MissingBounds)?;
            let lb = lemma_bounds(d)?;
            ReducedBounds {
                locals: [lb.f1; 3],
                pairs: [lb.f2; 3],
            }
        }
    };
    let values = fisher_terms(rho, family)?;
    CriterionReport::new(
        CriterionKind::Theorem2,
        values.iter().sum(),
        bounds.threshold(),
        labelled_terms(family, &values),
    )
}
