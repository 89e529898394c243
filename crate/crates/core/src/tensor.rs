//! Dense complex linear algebra for small tripartite systems.
//!
//! Everything here works on plain row-major `Vec<Complex64>` storage. The
//! largest matrices in practice are 125×125 (three qutrits-to-quintits), so
//! nothing tries to be clever about cache blocking or sparsity.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Hermiticity tolerance used when validating inputs.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Sweep cap for the cyclic Jacobi eigensolver.
pub const JACOBI_MAX_SWEEPS: usize = 100;

/// Off-diagonal Frobenius tolerance (relative to `max(1, ‖M‖_F)`).
pub const JACOBI_OFF_TOL: f64 = 1e-13;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

/// Square dense complex matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_vec(dim: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: data.len(),
            });
        }
        Ok(Self { dim, data })
    }

    /// Builds a matrix from nested rows; every row must have as many entries
    /// as there are rows.
    pub fn from_rows(rows: Vec<Vec<C64>>) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(Self { dim, data })
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| C64::new(x, 0.0)).collect())
                .collect(),
        )
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = C64::new(v, 0.0);
        }
        m
    }

    /// `|ψ⟩⟨ψ|`
    pub fn projector(psi: &[C64]) -> Self {
        let n = psi.len();
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = psi[i] * psi[j].conj();
            }
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn rows(&self) -> impl Iterator<Item = &[C64]> {
        self.data.chunks(self.dim.max(1))
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    /// `self += alpha * other`
    pub fn add_scaled(&mut self, alpha: f64, other: &Self) {
        assert_eq!(self.dim, other.dim, "add_scaled: dimension mismatch");
        for (x, y) in self.data.iter_mut().zip(&other.data) {
            *x += y * alpha;
        }
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "matmul: dimension mismatch");
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                let row = &other.data[k * n..(k + 1) * n];
                let dst = &mut out.data[i * n..(i + 1) * n];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.dim, v.len(), "apply: dimension mismatch");
        self.rows()
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `max |M[j][k] − conj(M[k][j])|`
    pub fn hermiticity_deviation(&self) -> f64 {
        let n = self.dim;
        let mut dev = 0.0f64;
        for i in 0..n {
            for j in i..n {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_deviation() <= tol
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise distance to `other`.
    pub fn max_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "max_diff: dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `tr(self · other)` without forming the product.
    pub fn trace_product(&self, other: &Self) -> C64 {
        assert_eq!(self.dim, other.dim, "trace_product: dimension mismatch");
        let n = self.dim;
        let mut acc = ZERO;
        for i in 0..n {
            for k in 0..n {
                acc += self.data[i * n + k] * other.data[k * n + i];
            }
        }
        acc
    }

    /// `⟨u|M|v⟩`
    pub fn sandwich(&self, u: &[C64], v: &[C64]) -> C64 {
        let mv = self.apply(v);
        u.iter().zip(&mv).map(|(a, b)| a.conj() * b).sum()
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        &self.data[r * self.dim + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        &mut self.data[r * self.dim + c]
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{})", self.dim, self.dim)?;
        for row in self.rows() {
            let cells: Vec<String> = row
                .iter()
                .map(|z| format!("{:+.4}{:+.4}i", z.re, z.im))
                .collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        let mut out = self.clone();
        out.add_scaled(1.0, rhs);
        out
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        let mut out = self.clone();
        out.add_scaled(-1.0, rhs);
        out
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs)
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        self.scaled(-1.0)
    }
}

/// Rectangular complex matrix; only needed for unfoldings fed to
/// [`singular_values`].
#[derive(Clone, Debug, PartialEq)]
pub struct RectMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<C64>,
}

impl RectMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        Self::new(rows, cols, data.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> C64 {
        self.data[r * self.cols + c]
    }

    pub fn frobenius_sq(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `M M†` when `rows ≤ cols`, else `M† M`: the smaller Gram matrix.
    pub fn gram(&self) -> ComplexMatrix {
        if self.rows <= self.cols {
            let mut g = ComplexMatrix::zeros(self.rows);
            for i in 0..self.rows {
                for j in 0..self.rows {
                    g[(i, j)] = (0..self.cols)
                        .map(|k| self.get(i, k) * self.get(j, k).conj())
                        .sum();
                }
            }
            g
        } else {
            let mut g = ComplexMatrix::zeros(self.cols);
            for i in 0..self.cols {
                for j in 0..self.cols {
                    g[(i, j)] = (0..self.rows)
                        .map(|k| self.get(k, i).conj() * self.get(k, j))
                        .sum();
                }
            }
            g
        }
    }
}

/// A tripartite subsystem label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Subsystem {
    A,
    B,
    C,
}

impl Subsystem {
    pub const ALL: [Subsystem; 3] = [Subsystem::A, Subsystem::B, Subsystem::C];

    pub fn index(self) -> usize {
        match self {
            Subsystem::A => 0,
            Subsystem::B => 1,
            Subsystem::C => 2,
        }
    }
}

/// Local dimensions of the three parties.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "[usize; 3]", into = "[usize; 3]")]
pub struct DimensionSpec {
    a: usize,
    b: usize,
    c: usize,
}

impl DimensionSpec {
    pub fn new(a: usize, b: usize, c: usize) -> Result<Self> {
        if a < 2 || b < 2 || c < 2 {
            return Err(Error::param(format!(
                "local dimensions must be at least 2, got ({a}, {b}, {c})"
            )));
        }
        Ok(Self { a, b, c })
    }

    pub fn uniform(d: usize) -> Result<Self> {
        Self::new(d, d, d)
    }

    pub fn qubits() -> Self {
        Self { a: 2, b: 2, c: 2 }
    }

    pub fn total(&self) -> usize {
        self.a * self.b * self.c
    }

    pub fn local(&self, s: Subsystem) -> usize {
        self.as_array()[s.index()]
    }

    pub fn as_array(&self) -> [usize; 3] {
        [self.a, self.b, self.c]
    }

    /// `Some(d)` when all three local dimensions equal `d`.
    pub fn uniform_dim(&self) -> Option<usize> {
        (self.a == self.b && self.b == self.c).then_some(self.a)
    }
}

impl TryFrom<[usize; 3]> for DimensionSpec {
    type Error = Error;
    fn try_from(v: [usize; 3]) -> Result<Self> {
        Self::new(v[0], v[1], v[2])
    }
}

impl From<DimensionSpec> for [usize; 3] {
    fn from(d: DimensionSpec) -> Self {
        d.as_array()
    }
}

impl fmt::Display for DimensionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}x{}", self.a, self.b, self.c)
    }
}

/// Kronecker product: entry `[(i·dB+k),(j·dB+l)] = A[i][j]·B[k][l]`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (da, db) = (a.dim(), b.dim());
    let mut out = ComplexMatrix::zeros(da * db);
    for i in 0..da {
        for j in 0..da {
            let aij = a[(i, j)];
            if aij == ZERO {
                continue;
            }
            for k in 0..db {
                for l in 0..db {
                    out[(i * db + k, j * db + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

pub fn kron_vec(u: &[C64], v: &[C64]) -> Vec<C64> {
    u.iter()
        .flat_map(|a| v.iter().map(move |b| a * b))
        .collect()
}

/// Splits a flat index into per-party digits (most significant first).
fn digits(mut idx: usize, dims: &[usize], out: &mut [usize]) {
    for (slot, &d) in out.iter_mut().zip(dims).rev() {
        *slot = idx % d;
        idx /= d;
    }
}

fn flat(digits: &[usize], dims: &[usize]) -> usize {
    digits.iter().zip(dims).fold(0, |acc, (&x, &d)| acc * d + x)
}

/// Partial trace over an arbitrary list of parties. `keep[i]` says whether
/// party `i` survives.
pub fn partial_trace_parties(
    m: &ComplexMatrix,
    local_dims: &[usize],
    keep: &[bool],
) -> Result<ComplexMatrix> {
    let total: usize = local_dims.iter().product();
    if m.dim() != total {
        return Err(Error::DimensionMismatch {
            expected: total,
            found: m.dim(),
        });
    }
    if keep.len() != local_dims.len() {
        return Err(Error::DimensionMismatch {
            expected: local_dims.len(),
            found: keep.len(),
        });
    }
    let kept_dims: Vec<usize> = local_dims
        .iter()
        .zip(keep)
        .filter_map(|(&d, &k)| k.then_some(d))
        .collect();
    let kept_total: usize = kept_dims.iter().product();
    let mut out = ComplexMatrix::zeros(kept_total);
    let n = local_dims.len();
    let mut rd = vec![0; n];
    let mut cd = vec![0; n];
    let mut rk = Vec::with_capacity(n);
    let mut ck = Vec::with_capacity(n);
    for r in 0..total {
        digits(r, local_dims, &mut rd);
        for c in 0..total {
            digits(c, local_dims, &mut cd);
            // traced parties must agree between row and column
            if (0..n).any(|p| !keep[p] && rd[p] != cd[p]) {
                continue;
            }
            rk.clear();
            ck.clear();
            for p in (0..n).filter(|&p| keep[p]) {
                rk.push(rd[p]);
                ck.push(cd[p]);
            }
            out[(flat(&rk, &kept_dims), flat(&ck, &kept_dims))] += m[(r, c)];
        }
    }
    Ok(out)
}

/// Reduced state on the kept subsystems of a tripartite matrix.
pub fn partial_trace(
    rho: &ComplexMatrix,
    dims: DimensionSpec,
    keep: &[Subsystem],
) -> Result<ComplexMatrix> {
    let mask: Vec<bool> = Subsystem::ALL.iter().map(|s| keep.contains(s)).collect();
    partial_trace_parties(rho, &dims.as_array(), &mask)
}

/// Reorders tensor factors: party `k` of the result is party `order[k]` of
/// the input.
pub fn permute_parties(
    m: &ComplexMatrix,
    local_dims: &[usize],
    order: &[usize],
) -> Result<ComplexMatrix> {
    let total: usize = local_dims.iter().product();
    if m.dim() != total {
        return Err(Error::DimensionMismatch {
            expected: total,
            found: m.dim(),
        });
    }
    let n = local_dims.len();
    let mut seen = vec![false; n];
    if order.len() != n
        || order
            .iter()
            .any(|&p| p >= n || std::mem::replace(&mut seen[p], true))
    {
        return Err(Error::param(format!(
            "{order:?} is not a permutation of 0..{n}"
        )));
    }
    let new_dims: Vec<usize> = order.iter().map(|&p| local_dims[p]).collect();
    // maps an input index to its output index
    let remap: Vec<usize> = (0..total)
        .map(|i| {
            let mut d = vec![0; n];
            digits(i, local_dims, &mut d);
            let nd: Vec<usize> = order.iter().map(|&p| d[p]).collect();
            flat(&nd, &new_dims)
        })
        .collect();
    let mut out = ComplexMatrix::zeros(total);
    for r in 0..total {
        for c in 0..total {
            out[(remap[r], remap[c])] = m[(r, c)];
        }
    }
    Ok(out)
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues descending.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors stored as columns, in eigenvalue order.
    pub eigenvectors: ComplexMatrix,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn vector(&self, k: usize) -> Vec<C64> {
        let n = self.len();
        (0..n).map(|i| self.eigenvectors[(i, k)]).collect()
    }

    /// `V · diag(λ) · V†`
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.len();
        let v = &self.eigenvectors;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = (0..n)
                    .map(|k| v[(i, k)] * self.eigenvalues[k] * v[(j, k)].conj())
                    .sum();
            }
        }
        out
    }

    /// Matrix elements `⟨k|A|l⟩` in the eigenbasis, i.e. `V† A V`.
    pub fn to_eigenbasis(&self, a: &ComplexMatrix) -> ComplexMatrix {
        let v = &self.eigenvectors;
        v.adjoint().matmul(&a.matmul(v))
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.dim();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Cyclic complex Jacobi eigensolver for Hermitian matrices.
///
/// Each rotation first removes the phase of `a_pq` with a diagonal unitary and
/// then applies the classical real Jacobi rotation, so the combined 2×2
/// transform is `[[c, s], [−s·e^{−iφ}, c·e^{−iφ}]]`.
pub fn hermitian_eig(m: &ComplexMatrix) -> Result<Spectrum> {
    let deviation = m.hermiticity_deviation();
    if deviation > HERMITIAN_TOL {
        return Err(Error::NotHermitian { deviation });
    }
    let n = m.dim();
    // symmetrize so round-off in the input cannot leak into the rotations
    let mut a = m.clone();
    for i in 0..n {
        a[(i, i)].im = 0.0;
        for j in i + 1..n {
            let avg = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
            a[(i, j)] = avg;
            a[(j, i)] = avg.conj();
        }
    }
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm().max(1.0);

    let mut off = off_diagonal_norm(&a);
    let mut sweeps = 0;
    while off > JACOBI_OFF_TOL * scale {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::NonConvergence { sweeps, off });
        }
        for p in 0..n.saturating_sub(1) {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
        sweeps += 1;
        off = off_diagonal_norm(&a);
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
    let eigenvalues = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut eigenvectors = ComplexMatrix::zeros(n);
    for (new, &old) in order.iter().enumerate() {
        for i in 0..n {
            eigenvectors[(i, new)] = v[(i, old)];
        }
    }
    Ok(Spectrum {
        eigenvalues,
        eigenvectors,
    })
}

fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r <= f64::MIN_POSITIVE {
        return;
    }
    let phase = apq / r;
    let tau = (a[(q, q)].re - a[(p, p)].re) / (2.0 * r);
    let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let g_pp = C64::new(c, 0.0);
    let g_pq = C64::new(s, 0.0);
    let g_qp = -phase.conj() * s;
    let g_qq = phase.conj() * c;

    let n = a.dim();
    for k in 0..n {
        let (akp, akq) = (a[(k, p)], a[(k, q)]);
        a[(k, p)] = akp * g_pp + akq * g_qp;
        a[(k, q)] = akp * g_pq + akq * g_qq;
    }
    for k in 0..n {
        let (apk, aqk) = (a[(p, k)], a[(q, k)]);
        a[(p, k)] = g_pp.conj() * apk + g_qp.conj() * aqk;
        a[(q, k)] = g_pq.conj() * apk + g_qq.conj() * aqk;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)].im = 0.0;
    a[(q, q)].im = 0.0;

    for k in 0..n {
        let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
        v[(k, p)] = vkp * g_pp + vkq * g_qp;
        v[(k, q)] = vkp * g_pq + vkq * g_qq;
    }
}

/// Singular values in descending order, via the eigenvalues of the smaller
/// Gram matrix.
pub fn singular_values(m: &RectMatrix) -> Result<Vec<f64>> {
    if m.rows == 0 || m.cols == 0 {
        return Ok(Vec::new());
    }
    let spectrum = hermitian_eig(&m.gram())?;
    Ok(spectrum
        .eigenvalues
        .iter()
        .map(|&l| l.max(0.0).sqrt())
        .collect())
}
