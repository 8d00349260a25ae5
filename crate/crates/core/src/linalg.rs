//! Dense complex matrices and a cyclic Jacobi eigensolver for Hermitian input.
//!
//! Every operator in this crate is a 2×2 or 4×4 matrix, so storage is a flat
//! row-major `Vec<Complex64>` and all products are the naive triple loop.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Maximum entrywise Hermiticity defect accepted by the eigensolver.
pub const HERMITIAN_TOLERANCE: f64 = 1e-9;
/// Cap on full Jacobi sweeps.
pub const MAX_SWEEPS: usize = 100;
/// Off-diagonal Frobenius norm (relative to the input norm) at which a sweep stops.
pub const OFF_DIAGONAL_THRESHOLD: f64 = 1e-14;

/// Which factor of a bipartite space to keep after a partial trace.
///
/// Basis index is `i_a * d_b + i_b`, so `A` is the slow index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// Square dense complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "matrix dimension must be positive");
        Self {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Builds a matrix from row-major entries. The length must be a perfect square.
    pub fn from_entries(entries: Vec<Complex64>) -> Result<Self> {
        let dim = (entries.len() as f64).sqrt().round() as usize;
        if dim == 0 || dim * dim != entries.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} entries do not form a square matrix",
                entries.len()
            )));
        }
        Ok(Self { dim, data: entries })
    }

    pub fn from_real(rows: &[&[f64]]) -> Result<Self> {
        let entries = rows
            .iter()
            .flat_map(|row| row.iter().map(|&x| Complex64::new(x, 0.0)))
            .collect::<Vec<_>>();
        if rows.iter().any(|row| row.len() != rows.len()) {
            return Err(Error::DimensionMismatch("rows are ragged".into()));
        }
        Self::from_entries(entries)
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = Complex64::new(v, 0.0);
        }
        m
    }

    /// `|v⟩⟨v|` for a column vector `v`.
    pub fn outer(v: &[Complex64]) -> Self {
        let n = v.len();
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = v[i] * v[j].conj();
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, factor: f64) -> Self {
        self.scale_complex(Complex64::new(factor, 0.0))
    }

    pub fn scale_complex(&self, factor: Complex64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&z| z * factor).collect(),
        }
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch in max_abs_diff");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn frobenius_distance(&self, other: &Self) -> f64 {
        (self - other).frobenius_norm()
    }

    /// Largest entry of `|m - m†|`.
    pub fn hermiticity_defect(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    /// `(m + m†) / 2`.
    pub fn hermitian_part(&self) -> Self {
        (self + &self.adjoint()).scale(0.5)
    }

    /// `[self, other] = self·other − other·self`.
    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    /// Conjugation `self · m · self†`.
    pub fn conjugate(&self, m: &Self) -> Self {
        &(self * m) * &self.adjoint()
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in add");
        ComplexMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in sub");
        ComplexMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in mul");
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{}) [", self.dim, self.dim)?;
        for i in 0..self.dim {
            write!(f, "  ")?;
            for j in 0..self.dim {
                let z = self[(i, j)];
                write!(f, "{:+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Kronecker product; entry `(i_a·d_b + i_b, j_a·d_b + j_b)` is `a[i_a,j_a]·b[i_b,j_b]`.
pub fn tensor_product(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (da, db) = (a.dim, b.dim);
    let mut out = ComplexMatrix::zeros(da * db);
    for ia in 0..da {
        for ja in 0..da {
            let x = a[(ia, ja)];
            for ib in 0..db {
                for jb in 0..db {
                    out[(ia * db + ib, ja * db + jb)] = x * b[(ib, jb)];
                }
            }
        }
    }
    out
}

/// Traces out one factor of a `d_a·d_b` space and returns the kept factor.
pub fn partial_trace(
    m: &ComplexMatrix,
    keep: Subsystem,
    (da, db): (usize, usize),
) -> Result<ComplexMatrix> {
    if m.dim != da * db {
        return Err(Error::DimensionMismatch(format!(
            "matrix of dim {} cannot be split as {}x{}",
            m.dim, da, db
        )));
    }
    let out = match keep {
        Subsystem::A => {
            let mut out = ComplexMatrix::zeros(da);
            for i in 0..da {
                for j in 0..da {
                    out[(i, j)] = (0..db).map(|k| m[(i * db + k, j * db + k)]).sum();
                }
            }
            out
        }
        Subsystem::B => {
            let mut out = ComplexMatrix::zeros(db);
            for i in 0..db {
                for j in 0..db {
                    out[(i, j)] = (0..da).map(|k| m[(k * db + i, k * db + j)]).sum();
                }
            }
            out
        }
    };
    Ok(out)
}

/// Spectral decomposition of a Hermitian matrix.
///
/// Eigenvalues are sorted descending (ties keep the solver's diagonal order)
/// and `eigenvectors[k]` belongs to `eigenvalues[k]`.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<Vec<Complex64>>,
}

impl EigenSystem {
    /// `Σ_k λ_k v_k v_k†`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        let mut out = ComplexMatrix::zeros(n);
        for (lambda, v) in self.eigenvalues.iter().zip(&self.eigenvectors) {
            out = &out + &ComplexMatrix::outer(v).scale(*lambda);
        }
        out
    }

    /// Projector `v_k v_k†` onto the k-th eigenvector.
    pub fn projector(&self, k: usize) -> ComplexMatrix {
        ComplexMatrix::outer(&self.eigenvectors[k])
    }

    /// Largest `|v_i† v_j − δ_ij|`.
    pub fn orthonormality_defect(&self) -> f64 {
        let n = self.eigenvectors.len();
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in 0..n {
                let dot: Complex64 = self.eigenvectors[i]
                    .iter()
                    .zip(&self.eigenvectors[j])
                    .map(|(a, b)| a.conj() * b)
                    .sum();
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).norm());
            }
        }
        worst
    }

    /// Apply `f` to the spectrum: `Σ f(λ_k) v_k v_k†`.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> Complex64) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        let mut out = ComplexMatrix::zeros(n);
        for (lambda, v) in self.eigenvalues.iter().zip(&self.eigenvectors) {
            out = &out + &ComplexMatrix::outer(v).scale_complex(f(*lambda));
        }
        out
    }
}

fn off_diagonal_norm(m: &ComplexMatrix) -> f64 {
    let n = m.dim;
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += m[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Cyclic complex Jacobi diagonalization.
///
/// The input is symmetrized as `(m + m†)/2` after checking the defect
/// against [`HERMITIAN_TOLERANCE`].
pub fn hermitian_eigensystem(m: &ComplexMatrix) -> Result<EigenSystem> {
    let defect = m.hermiticity_defect();
    if defect > HERMITIAN_TOLERANCE {
        return Err(Error::NotHermitian(defect));
    }
    let n = m.dim;
    let mut a = m.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm().max(1.0);

    let mut converged = off_diagonal_norm(&a) <= OFF_DIAGONAL_THRESHOLD * scale;
    let mut sweeps = 0;
    while !converged {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence(MAX_SWEEPS));
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
        sweeps += 1;
        converged = off_diagonal_norm(&a) <= OFF_DIAGONAL_THRESHOLD * scale;
    }

    let mut order: Vec<usize> = (0..n).collect();
    // stable, so ties keep their diagonal position
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
    let eigenvalues = order.iter().map(|&k| a[(k, k)].re).collect();
    let eigenvectors = order
        .iter()
        .map(|&k| (0..n).map(|i| v[(i, k)]).collect())
        .collect();
    Ok(EigenSystem {
        eigenvalues,
        eigenvectors,
    })
}

/// One unitary Jacobi rotation annihilating `a[p,q]`.
///
/// The phase of `a[p,q]` is first absorbed into column `q`, which leaves a
/// real symmetric 2×2 block handled by the classical rotation.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let magnitude = apq.norm();
    if magnitude < 1e-300 {
        return;
    }
    let phase = apq / magnitude;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;

    let theta = (aqq - app) / (2.0 * magnitude);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let t = if theta == 0.0 { 1.0 } else { t };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    // G = D·R with D = diag(.., e^{-iφ} at q, ..), R the real rotation.
    let conj_phase = phase.conj();
    let g_pp = Complex64::new(c, 0.0);
    let g_pq = Complex64::new(s, 0.0);
    let g_qp = conj_phase * (-s);
    let g_qq = conj_phase * c;

    let n = a.dim;
    // A ← A·G (columns p, q)
    for i in 0..n {
        let aip = a[(i, p)];
        let aiq = a[(i, q)];
        a[(i, p)] = aip * g_pp + aiq * g_qp;
        a[(i, q)] = aip * g_pq + aiq * g_qq;
    }
    // A ← G†·A (rows p, q)
    for j in 0..n {
        let apj = a[(p, j)];
        let aqj = a[(q, j)];
        a[(p, j)] = g_pp.conj() * apj + g_qp.conj() * aqj;
        a[(q, j)] = g_pq.conj() * apj + g_qq.conj() * aqj;
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
    // V ← V·G
    for i in 0..n {
        let vip = v[(i, p)];
        let viq = v[(i, q)];
        v[(i, p)] = vip * g_pp + viq * g_qp;
        v[(i, q)] = vip * g_pq + viq * g_qq;
    }
}

/// Pauli matrices and other fixed qubit operators.
pub mod paulis {
    use super::ComplexMatrix;
    use num_complex::Complex64;

    pub fn identity() -> ComplexMatrix {
        ComplexMatrix::identity(2)
    }

    pub fn sigma_x() -> ComplexMatrix {
        ComplexMatrix::from_real(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap()
    }

    pub fn sigma_y() -> ComplexMatrix {
        let i = Complex64::new(0.0, 1.0);
        ComplexMatrix::from_entries(vec![
            Complex64::new(0.0, 0.0),
            -i,
            i,
            Complex64::new(0.0, 0.0),
        ])
        .unwrap()
    }

    pub fn sigma_z() -> ComplexMatrix {
        ComplexMatrix::diagonal(&[1.0, -1.0])
    }
}

#[cfg(test)]
mod tests {
    use super::paulis::*;
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn tensor_of_identities_is_identity() {
        let t = tensor_product(&identity(), &identity());
        assert_eq!(t, ComplexMatrix::identity(4));
    }

    #[test]
    fn tensor_z_identity_is_block_diagonal() {
        let t = tensor_product(&sigma_z(), &identity());
        assert_eq!(t, ComplexMatrix::diagonal(&[1.0, 1.0, -1.0, -1.0]));
    }

    #[test]
    fn tensor_xx_trace_matches_explicit_matrix() {
        // σx⊗σx written out by hand: anti-diagonal ones
        let explicit = ComplexMatrix::from_real(&[
            &[0.0, 0.0, 0.0, 1.0],
            &[0.0, 0.0, 1.0, 0.0],
            &[0.0, 1.0, 0.0, 0.0],
            &[1.0, 0.0, 0.0, 0.0],
        ])
        .unwrap();
        let t = tensor_product(&sigma_x(), &sigma_x());
        assert_eq!(t, explicit);
        assert_eq!(t.trace(), c(0.0));
        assert_eq!(t.trace(), sigma_x().trace() * sigma_x().trace());
    }

    #[test]
    fn tensor_is_associative_for_integer_matrices() {
        let a = ComplexMatrix::from_real(&[&[1.0, 2.0], &[3.0, 4.0]]).unwrap();
        let b = ComplexMatrix::from_real(&[&[0.0, -1.0], &[5.0, 2.0]]).unwrap();
        let d = ComplexMatrix::from_real(&[&[7.0, 1.0], &[-2.0, 3.0]]).unwrap();
        let left = tensor_product(&tensor_product(&a, &b), &d);
        let right = tensor_product(&a, &tensor_product(&b, &d));
        assert_eq!(left, right);
    }

    #[test]
    fn partial_trace_rejects_bad_dims() {
        let m = ComplexMatrix::identity(4);
        assert!(matches!(
            partial_trace(&m, Subsystem::A, (2, 3)),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn partial_trace_of_product_recovers_factor() {
        let a = ComplexMatrix::from_real(&[&[0.7, 0.2], &[0.2, 0.3]]).unwrap();
        let b = ComplexMatrix::from_real(&[&[0.4, -0.1], &[-0.1, 0.6]]).unwrap();
        let ab = tensor_product(&a, &b);
        let ra = partial_trace(&ab, Subsystem::A, (2, 2)).unwrap();
        let rb = partial_trace(&ab, Subsystem::B, (2, 2)).unwrap();
        assert!(ra.max_abs_diff(&a) < 1e-12);
        assert!(rb.max_abs_diff(&b) < 1e-12);
    }

    #[test]
    fn eigen_of_sigma_z() {
        let es = hermitian_eigensystem(&sigma_z()).unwrap();
        assert_eq!(es.eigenvalues, vec![1.0, -1.0]);
    }

    #[test]
    fn eigen_of_sigma_x() {
        let es = hermitian_eigensystem(&sigma_x()).unwrap();
        assert!((es.eigenvalues[0] - 1.0).abs() < 1e-14);
        assert!((es.eigenvalues[1] + 1.0).abs() < 1e-14);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        // up to a global phase: |⟨+|v0⟩| = 1 and |⟨−|v1⟩| = 1
        let plus = [c(h), c(h)];
        let minus = [c(h), c(-h)];
        let overlap = |a: &[Complex64], b: &[Complex64]| -> f64 {
            a.iter()
                .zip(b)
                .map(|(x, y)| x.conj() * y)
                .sum::<Complex64>()
                .norm()
        };
        assert!((overlap(&plus, &es.eigenvectors[0]) - 1.0).abs() < 1e-12);
        assert!((overlap(&minus, &es.eigenvectors[1]) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn eigen_of_sigma_y_is_complex_but_exact() {
        let es = hermitian_eigensystem(&sigma_y()).unwrap();
        assert!((es.eigenvalues[0] - 1.0).abs() < 1e-14);
        assert!(es.reconstruct().max_abs_diff(&sigma_y()) < 1e-14);
    }

    #[test]
    fn ties_keep_diagonal_order() {
        let es = hermitian_eigensystem(&ComplexMatrix::diagonal(&[0.5, 0.5, 0.9])).unwrap();
        assert_eq!(es.eigenvalues, vec![0.9, 0.5, 0.5]);
        assert_eq!(es.eigenvectors[1][0], c(1.0));
        assert_eq!(es.eigenvectors[2][1], c(1.0));
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = ComplexMatrix::from_real(&[&[1.0, 1.0], &[0.0, 1.0]]).unwrap();
        assert!(matches!(
            hermitian_eigensystem(&m),
            Err(Error::NotHermitian(_))
        ));
    }

    #[test]
    fn random_hermitian_decompositions() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for _ in 0..200 {
            let mut m = ComplexMatrix::zeros(4);
            for i in 0..4 {
                m[(i, i)] = c(rng.gen_range(-1.0..1.0));
                for j in (i + 1)..4 {
                    let z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                    m[(i, j)] = z;
                    m[(j, i)] = z.conj();
                }
            }
            let es = hermitian_eigensystem(&m).unwrap();
            assert!(es.reconstruct().frobenius_distance(&m) <= 1e-10);
            assert!(es.orthonormality_defect() <= 1e-10);
            let sum: f64 = es.eigenvalues.iter().sum();
            assert!((sum - m.trace().re).abs() <= 1e-10);
            assert!(es.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
        }
    }
}
