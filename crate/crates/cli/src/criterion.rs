//! Criterion names accepted on the command line.

use std::fmt;

use qfi_gme::criteria::{
    concurrence_bound, corollary1, corollary2, corollary2_with_signs, knorm_criterion,
    knorm_criterion_all, lemma_bounds, theorem1_margin, theorem2_margin, Corollary2Mode,
    ReducedBounds,
};
use qfi_gme::operators::{collective_signed, gell_mann_basis, CollectiveObservable};
use qfi_gme::{CriterionReport, DensityMatrix, DimensionSpec, SignPattern};

use crate::error::{usage, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum CriterionSpec {
    Corollary1,
    Corollary2(Corollary2Mode),
    Corollary2Signs([SignPattern; 3]),
    Theorem1,
    Theorem2,
    Concurrence,
    /// `None` reports the `k` with the largest margin.
    Knorm(Option<usize>),
}

/// Bounds for the generic criteria; unset values fall back to the lemma
/// bounds where those apply.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct CriterionOptions {
    pub f1: Option<f64>,
    pub f2: Option<f64>,
    pub locals: Option<[f64; 3]>,
    pub pairs: Option<[f64; 3]>,
}

pub const CRITERION_HELP: &str = "corollary1 | corollary2 | corollary2-fixed | \
corollary2:SIGNS,SIGNS,SIGNS | theorem1 | theorem2 | concurrence | knorm | knorm:K";

impl CriterionSpec {
    pub fn parse(s: &str) -> Result<Self> {
        let (head, rest) = s.split_once(':').unwrap_or((s, ""));
        let spec = match (head, rest) {
            ("corollary1", "") => CriterionSpec::Corollary1,
            ("corollary2", "") => CriterionSpec::Corollary2(Corollary2Mode::PerOperator),
            ("corollary2-fixed", "") => CriterionSpec::Corollary2(Corollary2Mode::FixedPattern),
            ("corollary2", signs) => {
                let parts: Vec<&str> = signs.split(',').collect();
                let [x, y, z] = parts.as_slice() else {
                    return Err(usage(
                        "corollary2:... needs three sign patterns, e.g. +++,+++,++-",
                    ));
                };
                CriterionSpec::Corollary2Signs([
                    SignPattern::parse(x)?,
                    SignPattern::parse(y)?,
                    SignPattern::parse(z)?,
                ])
            }
            ("theorem1" | "theorem1-custom", "") => CriterionSpec::Theorem1,
            ("theorem2", "") => CriterionSpec::Theorem2,
            ("concurrence" | "concurrence-bound", "") => CriterionSpec::Concurrence,
            ("knorm" | "tensor-knorm", "") => CriterionSpec::Knorm(None),
            ("knorm" | "tensor-knorm", k) => CriterionSpec::Knorm(Some(
                k.parse()
                    .map_err(|_| usage(format!("cannot parse k from {k:?}")))?,
            )),
            _ => {
                return Err(usage(format!(
                    "unknown criterion {s:?}; expected one of {CRITERION_HELP}"
                )))
            }
        };
        Ok(spec)
    }

    pub fn evaluate(
        &self,
        rho: &DensityMatrix,
        opts: &CriterionOptions,
    ) -> Result<CriterionReport> {
        let report = match self {
            CriterionSpec::Corollary1 => corollary1(rho)?,
            CriterionSpec::Corollary2(mode) => corollary2(rho, *mode)?,
            CriterionSpec::Corollary2Signs(signs) => corollary2_with_signs(rho, *signs)?,
            CriterionSpec::Theorem1 => {
                let (f1, f2) = match (opts.f1, opts.f2) {
                    (Some(f1), Some(f2)) => (f1, f2),
                    (f1, f2) => {
                        let d = rho.dims().uniform_dim().ok_or_else(|| {
                            usage("theorem1 on unequal dimensions needs --f1 and --f2")
                        })?;
                        let lb = lemma_bounds(d)?;
                        (f1.unwrap_or(lb.f1), f2.unwrap_or(lb.f2))
                    }
                };
                theorem1_margin(rho, &aligned_gell_mann_family(rho.dims())?, f1, f2)?
            }
            CriterionSpec::Theorem2 => {
                let bounds = match (opts.locals, opts.pairs) {
                    (Some(locals), Some(pairs)) => Some(ReducedBounds { locals, pairs }),
                    (None, None) => None,
                    _ => return Err(usage("--locals and --pairs must be given together")),
                };
                theorem2_margin(rho, &aligned_gell_mann_family(rho.dims())?, bounds)?
            }
            CriterionSpec::Concurrence => concurrence_bound(rho)?,
            CriterionSpec::Knorm(Some(k)) => knorm_criterion(rho, *k)?,
            CriterionSpec::Knorm(None) => knorm_criterion_all(rho)?
                .into_iter()
                .reduce(|best, r| if r.margin > best.margin { r } else { best })
                .expect("at least one k"),
        };
        Ok(report)
    }
}

impl fmt::Display for CriterionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CriterionSpec::Corollary1 => f.write_str("corollary1"),
            CriterionSpec::Corollary2(Corollary2Mode::PerOperator) => f.write_str("corollary2"),
            CriterionSpec::Corollary2(Corollary2Mode::FixedPattern) => {
                f.write_str("corollary2-fixed")
            }
            CriterionSpec::Corollary2Signs([a, b, c]) => write!(f, "corollary2:{a},{b},{c}"),
            CriterionSpec::Theorem1 => f.write_str("theorem1"),
            CriterionSpec::Theorem2 => f.write_str("theorem2"),
            CriterionSpec::Concurrence => f.write_str("concurrence"),
            CriterionSpec::Knorm(None) => f.write_str("knorm"),
            CriterionSpec::Knorm(Some(k)) => write!(f, "knorm:{k}"),
        }
    }
}

/// Collective family `λ_μ^a ⊗ I ⊗ I + I ⊗ λ_μ^b ⊗ I + I ⊗ I ⊗ λ_μ^c`, pairing
/// the Gell-Mann bases of the three parties index by index. With unequal
/// dimensions the family stops at the smallest basis.
pub fn aligned_gell_mann_family(dims: DimensionSpec) -> Result<Vec<CollectiveObservable>> {
    let [da, db, dc] = dims.as_array();
    let (ba, bb, bc) = (
        gell_mann_basis(da)?,
        gell_mann_basis(db)?,
        gell_mann_basis(dc)?,
    );
    let n = ba.len().min(bb.len()).min(bc.len());
    (0..n)
        .map(|i| {
            let label = if da == db && db == dc {
                ba.labels[i].to_string()
            } else {
                format!("{}|{}|{}", ba.labels[i], bb.labels[i], bc.labels[i])
            };
            collective_signed(
                &ba.matrices[i],
                &bb.matrices[i],
                &bc.matrices[i],
                SignPattern::PLUS,
                dims,
            )
            .map(|o| o.with_label(label))
            .map_err(Into::into)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use qfi_gme::states::w3;

    #[test]
    fn parses_names() {
        assert_eq!(
            CriterionSpec::parse("corollary1").unwrap(),
            CriterionSpec::Corollary1
        );
        assert_eq!(
            CriterionSpec::parse("knorm:3").unwrap(),
            CriterionSpec::Knorm(Some(3))
        );
        assert_eq!(
            CriterionSpec::parse("concurrence-bound").unwrap(),
            CriterionSpec::Concurrence
        );
        let signs = CriterionSpec::parse("corollary2:+++,+++,++-").unwrap();
        assert_eq!(signs.to_string(), "corollary2:+++,+++,++-");
        assert!(CriterionSpec::parse("corollary3").is_err());
        assert!(CriterionSpec::parse("corollary2:+++").is_err());
        assert!(CriterionSpec::parse("knorm:x").is_err());
    }

    #[test]
    fn theorem1_defaults_match_corollary1() {
        let rho = DensityMatrix::from_pure(&w3(), DimensionSpec::qubits()).unwrap();
        let opts = CriterionOptions::default();
        let t1 = CriterionSpec::Theorem1.evaluate(&rho, &opts).unwrap();
        let c1 = CriterionSpec::Corollary1.evaluate(&rho, &opts).unwrap();
        assert!((t1.margin - c1.margin).abs() < 1e-12);
    }

    #[test]
    fn unequal_dims_need_bounds() {
        let rho = DensityMatrix::maximally_mixed(DimensionSpec::new(2, 3, 2).unwrap());
        let opts = CriterionOptions::default();
        assert!(CriterionSpec::Theorem2.evaluate(&rho, &opts).is_err());
        assert!(CriterionSpec::Theorem1.evaluate(&rho, &opts).is_err());
        let opts = CriterionOptions {
            locals: Some([2.0, 4.0, 2.0]),
            pairs: Some([10.0, 8.0, 10.0]),
            ..Default::default()
        };
        let r = CriterionSpec::Theorem2.evaluate(&rho, &opts).unwrap();
        assert_eq!(r.threshold, 14.0);
        assert_eq!(r.details.len(), 3);
    }

    #[test]
    fn best_knorm_picks_largest_margin() {
        let rho = DensityMatrix::from_pure(&w3(), DimensionSpec::qubits()).unwrap();
        let opts = CriterionOptions::default();
        let best = CriterionSpec::Knorm(None).evaluate(&rho, &opts).unwrap();
        for k in 1..=3 {
            let r = CriterionSpec::Knorm(Some(k)).evaluate(&rho, &opts).unwrap();
            assert!(r.margin <= best.margin);
        }
    }
}
