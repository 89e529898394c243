//! Local observable families and their collective tripartite embeddings.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tensor::{kron, ComplexMatrix, DimensionSpec, C64, ONE};

/// Which Gell-Mann block a basis element belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BasisLabel {
    /// `|j⟩⟨k| + |k⟩⟨j|`
    Symmetric { j: usize, k: usize },
    /// `−i|j⟩⟨k| + i|k⟩⟨j|`
    Antisymmetric { j: usize, k: usize },
    /// `√(2/(l(l+1))) (Σ_{j<l} |j⟩⟨j| − l|l⟩⟨l|)`
    Diagonal { l: usize },
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            BasisLabel::Symmetric { j, k } => write!(f, "t{j}{k}"),
            BasisLabel::Antisymmetric { j, k } => write!(f, "s{j}{k}"),
            BasisLabel::Diagonal { l } => write!(f, "diag{l}"),
        }
    }
}

/// The `d²−1` generalized Gell-Mann matrices of one qudit, ordered as the
/// symmetric block, then the antisymmetric block (both by `(j,k)`
/// lexicographic), then the diagonal block.
#[derive(Clone, Debug)]
pub struct LocalBasis {
    pub d: usize,
    pub matrices: Vec<ComplexMatrix>,
    pub labels: Vec<BasisLabel>,
}

impl LocalBasis {
    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&BasisLabel, &ComplexMatrix)> {
        self.labels.iter().zip(&self.matrices)
    }
}

pub fn gell_mann_basis(d: usize) -> Result<LocalBasis> {
    if d < 2 {
        return Err(Error::param(format!(
            "Gell-Mann basis needs d >= 2, got {d}"
        )));
    }
    let mut matrices = Vec::with_capacity(d * d - 1);
    let mut labels = Vec::with_capacity(d * d - 1);
    for j in 0..d {
        for k in j + 1..d {
            let mut m = ComplexMatrix::zeros(d);
            m[(j, k)] = ONE;
            m[(k, j)] = ONE;
            matrices.push(m);
            labels.push(BasisLabel::Symmetric { j, k });
        }
    }
    for j in 0..d {
        for k in j + 1..d {
            let mut m = ComplexMatrix::zeros(d);
            m[(j, k)] = C64::new(0.0, -1.0);
            m[(k, j)] = C64::new(0.0, 1.0);
            matrices.push(m);
            labels.push(BasisLabel::Antisymmetric { j, k });
        }
    }
    for l in 1..d {
        let norm = (2.0 / (l * (l + 1)) as f64).sqrt();
        let mut diag = vec![0.0; d];
        diag[..l].fill(norm);
        diag[l] = -(l as f64) * norm;
        matrices.push(ComplexMatrix::diagonal(&diag));
        labels.push(BasisLabel::Diagonal { l });
    }
    Ok(LocalBasis {
        d,
        matrices,
        labels,
    })
}

/// `(σ_x, σ_y, σ_z)`, which is the `d = 2` Gell-Mann basis.
pub fn pauli_basis() -> LocalBasis {
    gell_mann_basis(2).expect("d = 2 is valid")
}

/// A sign in front of one local term of a collective observable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

/// Signs `(s_a, s_b, s_c)` of the three local terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SignPattern(pub [Sign; 3]);

impl SignPattern {
    pub const PLUS: SignPattern = SignPattern([Sign::Plus, Sign::Plus, Sign::Plus]);

    pub fn values(&self) -> [f64; 3] {
        self.0.map(Sign::value)
    }

    pub fn negated(&self) -> SignPattern {
        SignPattern(self.0.map(Sign::flip))
    }

    /// Representative of the class `{p, −p}` with at most one `−`.
    pub fn canonical(&self) -> SignPattern {
        if self.0.iter().filter(|s| **s == Sign::Minus).count() >= 2 {
            self.negated()
        } else {
            *self
        }
    }

    /// Parses strings like `+ + -` or `++-`.
    pub fn parse(s: &str) -> Result<SignPattern> {
        let signs: Vec<Sign> = s
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                '+' => Ok(Sign::Plus),
                '-' => Ok(Sign::Minus),
                other => Err(Error::param(format!(
                    "bad sign character {other:?} in {s:?}"
                ))),
            })
            .collect::<Result<_>>()?;
        let arr: [Sign; 3] = signs
            .try_into()
            .map_err(|_| Error::param(format!("sign pattern {s:?} must have exactly 3 signs")))?;
        Ok(SignPattern(arr))
    }
}

impl fmt::Display for SignPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in self.0 {
            write!(f, "{}", s.symbol())?;
        }
        Ok(())
    }
}

/// The four sign classes modulo a global sign:
/// `(+,+,+)`, `(+,+,−)`, `(+,−,+)`, `(−,+,+)`.
pub fn signed_pauli_families() -> [SignPattern; 4] {
    use Sign::*;
    [
        SignPattern([Plus, Plus, Plus]),
        SignPattern([Plus, Plus, Minus]),
        SignPattern([Plus, Minus, Plus]),
        SignPattern([Minus, Plus, Plus]),
    ]
}

/// `s_a·A⊗I⊗I + s_b·I⊗B⊗I + s_c·I⊗I⊗C` together with its parts.
#[derive(Clone, Debug)]
pub struct CollectiveObservable {
    pub dims: DimensionSpec,
    pub total: ComplexMatrix,
    pub parts: [ComplexMatrix; 3],
    pub signs: SignPattern,
    pub label: String,
}

pub fn collective(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    c: &ComplexMatrix,
    dims: DimensionSpec,
) -> Result<CollectiveObservable> {
    collective_signed(a, b, c, SignPattern::PLUS, dims)
}

pub fn collective_signed(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    c: &ComplexMatrix,
    signs: SignPattern,
    dims: DimensionSpec,
) -> Result<CollectiveObservable> {
    let [da, db, dc] = dims.as_array();
    for (m, want) in [(a, da), (b, db), (c, dc)] {
        if m.dim() != want {
            return Err(Error::DimensionMismatch {
                expected: want,
                found: m.dim(),
            });
        }
    }
    let [sa, sb, sc] = signs.values();
    let ia = ComplexMatrix::identity(da);
    let ib = ComplexMatrix::identity(db);
    let ic = ComplexMatrix::identity(dc);
    let mut total = kron(&kron(a, &ib), &ic).scaled(sa);
    total.add_scaled(sb, &kron(&kron(&ia, b), &ic));
    total.add_scaled(sc, &kron(&kron(&ia, &ib), c));
    Ok(CollectiveObservable {
        dims,
        total,
        parts: [a.clone(), b.clone(), c.clone()],
        signs,
        label: String::new(),
    })
}

impl CollectiveObservable {
    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }
}

/// The same local basis element on every party, one observable per basis
/// element, all with the given sign pattern.
pub fn collective_family(
    basis: &LocalBasis,
    dims: DimensionSpec,
    signs: SignPattern,
) -> Result<Vec<CollectiveObservable>> {
    if dims.uniform_dim() != Some(basis.d) {
        return Err(Error::param(format!(
            "basis of dimension {} does not fit dims {dims}",
            basis.d
        )));
    }
    basis
        .iter()
        .map(|(label, m)| {
            collective_signed(m, m, m, signs, dims).map(|o| o.with_label(label.to_string()))
        })
        .collect()
}

/// Pauli family with one sign pattern per Pauli operator, in `x, y, z` order.
pub fn pauli_family_with_signs(signs: [SignPattern; 3]) -> Vec<CollectiveObservable> {
    let basis = pauli_basis();
    let names = ["x", "y", "z"];
    basis
        .matrices
        .iter()
        .zip(signs)
        .zip(names)
        .map(|((m, s), name)| {
            collective_signed(m, m, m, s, DimensionSpec::qubits())
                .expect("qubit dims match Pauli matrices")
                .with_label(format!("sigma_{name}[{s}]"))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{hermitian_eig, ZERO};

    #[test]
    fn pauli_matrices_match_textbook() {
        let p = pauli_basis();
        let x = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        let y = ComplexMatrix::from_rows(vec![
            vec![ZERO, C64::new(0.0, -1.0)],
            vec![C64::new(0.0, 1.0), ZERO],
        ])
        .unwrap();
        let z = ComplexMatrix::diagonal(&[1.0, -1.0]);
        assert_eq!(p.matrices, vec![x, y, z]);
        assert_eq!(
            p.labels,
            vec![
                BasisLabel::Symmetric { j: 0, k: 1 },
                BasisLabel::Antisymmetric { j: 0, k: 1 },
                BasisLabel::Diagonal { l: 1 }
            ]
        );
    }

    #[test]
    fn gell_mann_rejects_small_d() {
        assert!(gell_mann_basis(1).is_err());
        assert!(gell_mann_basis(0).is_err());
    }

    #[test]
    fn gell_mann_counts_and_tracelessness() {
        for d in 2..=5 {
            let b = gell_mann_basis(d).unwrap();
            assert_eq!(b.len(), d * d - 1);
            for m in &b.matrices {
                assert!(m.trace().norm() < 1e-12);
                assert!(m.is_hermitian(1e-12));
            }
        }
    }

    #[test]
    fn gell_mann_gram_matrix_is_twice_identity() {
        // brute force: every pair tr(λ_α λ_β) by explicit product
        for d in [3, 4] {
            let b = gell_mann_basis(d).unwrap();
            for (i, x) in b.matrices.iter().enumerate() {
                for (j, y) in b.matrices.iter().enumerate() {
                    let g = x.matmul(y).trace();
                    let want = if i == j { 2.0 } else { 0.0 };
                    assert!(
                        (g - C64::new(want, 0.0)).norm() < 1e-10,
                        "d={d} ({i},{j}) -> {g}"
                    );
                }
            }
        }
    }

    #[test]
    fn gell_mann_three_has_standard_lambda8() {
        let b = gell_mann_basis(3).unwrap();
        let l8 = &b.matrices[7];
        let r = 1.0 / 3f64.sqrt();
        assert!((l8[(0, 0)].re - r).abs() < 1e-15);
        assert!((l8[(1, 1)].re - r).abs() < 1e-15);
        assert!((l8[(2, 2)].re + 2.0 * r).abs() < 1e-15);
    }

    #[test]
    fn collective_zzz_on_000() {
        let z = ComplexMatrix::diagonal(&[1.0, -1.0]);
        let o = collective(&z, &z, &z, DimensionSpec::qubits()).unwrap();
        assert_eq!(o.total[(0, 0)], C64::new(3.0, 0.0));
    }

    #[test]
    fn collective_signed_on_001() {
        let z = ComplexMatrix::diagonal(&[1.0, -1.0]);
        let signs = SignPattern::parse("++-").unwrap();
        let o = collective_signed(&z, &z, &z, signs, DimensionSpec::qubits()).unwrap();
        assert_eq!(o.total[(1, 1)], C64::new(3.0, 0.0));
    }

    #[test]
    fn collective_embeds_single_part() {
        let zero = ComplexMatrix::zeros(2);
        let c = ComplexMatrix::from_real_rows(&[&[0.5, 2.0], &[2.0, -1.0]]).unwrap();
        let o = collective(&zero, &zero, &c, DimensionSpec::qubits()).unwrap();
        let want = kron(&ComplexMatrix::identity(4), &c);
        assert_eq!(o.total, want);
    }

    #[test]
    fn collective_rejects_wrong_local_dims() {
        let z = ComplexMatrix::diagonal(&[1.0, -1.0]);
        let dims = DimensionSpec::new(2, 3, 2).unwrap();
        assert!(matches!(
            collective(&z, &z, &z, dims),
            Err(Error::DimensionMismatch {
                expected: 3,
                found: 2
            })
        ));
    }

    #[test]
    fn collective_mixed_dims_is_hermitian_with_expected_spectrum() {
        let dims = DimensionSpec::new(2, 3, 4).unwrap();
        let a = gell_mann_basis(2).unwrap().matrices[2].clone();
        let b = gell_mann_basis(3).unwrap().matrices[0].clone();
        let c = gell_mann_basis(4).unwrap().matrices[14].clone();
        let o = collective(&a, &b, &c, dims).unwrap();
        assert_eq!(o.total.dim(), 24);
        assert!(o.total.is_hermitian(1e-14));
        let top = hermitian_eig(&o.total).unwrap().eigenvalues[0];
        let want = 1.0 + 1.0 + c[(0, 0)].re;
        assert!((top - want).abs() < 1e-12);
    }

    #[test]
    fn sign_classes() {
        let classes = signed_pauli_families();
        assert_eq!(classes.len(), 4);
        assert!(classes.contains(&SignPattern::parse("++-").unwrap()));
        let minus = SignPattern::parse("---").unwrap();
        assert!(!classes.contains(&minus));
        assert_eq!(minus.canonical(), SignPattern::PLUS);
        // every one of the 8 patterns lands in exactly one class
        for bits in 0..8u8 {
            let p = SignPattern(std::array::from_fn(|i| {
                if bits >> i & 1 == 1 {
                    Sign::Minus
                } else {
                    Sign::Plus
                }
            }));
            assert_eq!(classes.iter().filter(|c| **c == p.canonical()).count(), 1);
        }
    }

    #[test]
    fn sign_pattern_parse_errors() {
        assert!(SignPattern::parse("++").is_err());
        assert!(SignPattern::parse("+*-").is_err());
        assert_eq!(SignPattern::parse("+ - +").unwrap().to_string(), "+-+");
    }
}
