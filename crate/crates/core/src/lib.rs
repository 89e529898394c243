//! Quantum Fisher information criteria for genuine tripartite entanglement.
//!
//! Dense complex linear algebra lives in [`tensor`], Gell-Mann bases and
//! collective observables in [`operators`], reference and random states in
//! [`states`], the Fisher-information engine in [`qfi`], and the detection
//! criteria with their reports in [`criteria`].

pub mod criteria;
pub mod error;
pub mod operators;
pub mod qfi;
pub mod states;
pub mod tensor;

pub use criteria::{CriterionKind, CriterionReport, Verdict};
pub use error::{Error, Result};
pub use operators::{CollectiveObservable, SignPattern};
pub use qfi::{QfiEngine, QfiMethod, QfiValue};
pub use states::DensityMatrix;
pub use tensor::{ComplexMatrix, DimensionSpec, Subsystem, C64};
