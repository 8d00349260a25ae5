//! Validated density matrices, entropy functionals and the two-qubit state
//! families used throughout the sweeps.
//!
//! All entropies are in bits. Basis order for two qubits is
//! `|00⟩, |01⟩, |10⟩, |11⟩` with Alice's qubit as the slow index.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_eigensystem, partial_trace, paulis, tensor_product, ComplexMatrix, Subsystem,
};

/// Hermiticity tolerance for a density matrix.
pub const STATE_HERMITIAN_TOLERANCE: f64 = 1e-10;
/// Allowed distance of the trace from one.
pub const TRACE_TOLERANCE: f64 = 1e-10;
/// Eigenvalues in `[-NEGATIVITY_TOLERANCE, 0)` are rounding noise and clamp to 0.
pub const NEGATIVITY_TOLERANCE: f64 = 1e-9;
/// Accepted deviation of a probability vector's sum from one.
pub const PROBABILITY_SUM_TOLERANCE: f64 = 1e-8;

/// Tensor structure of the Hilbert space a state lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dims {
    Single(usize),
    Bipartite(usize, usize),
}

impl Dims {
    pub fn total(self) -> usize {
        match self {
            Dims::Single(d) => d,
            Dims::Bipartite(a, b) => a * b,
        }
    }
}

/// A Hermitian, unit-trace, positive semidefinite matrix.
///
/// The spectrum is computed once at construction and reused by every entropy.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    dims: Dims,
    spectrum: Vec<f64>,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix, dims: Dims) -> Result<Self> {
        if matrix.dim() != dims.total() {
            return Err(Error::DimensionMismatch(format!(
                "matrix of dim {} does not match {:?}",
                matrix.dim(),
                dims
            )));
        }
        let defect = matrix.hermiticity_defect();
        if defect > STATE_HERMITIAN_TOLERANCE {
            return Err(Error::InvalidState(format!(
                "Hermiticity defect {defect:e} exceeds {STATE_HERMITIAN_TOLERANCE:e}"
            )));
        }
        let trace = matrix.trace();
        if (trace - Complex64::new(1.0, 0.0)).norm() > TRACE_TOLERANCE {
            return Err(Error::InvalidState(format!("trace is {trace}, expected 1")));
        }
        let spectrum = hermitian_eigensystem(&matrix)?.eigenvalues;
        let min = spectrum.last().copied().unwrap_or(0.0);
        if min < -NEGATIVITY_TOLERANCE {
            return Err(Error::InvalidState(format!("negative eigenvalue {min}")));
        }
        Ok(Self {
            matrix,
            dims,
            spectrum,
        })
    }

    pub fn single(matrix: ComplexMatrix) -> Result<Self> {
        let d = matrix.dim();
        Self::new(matrix, Dims::Single(d))
    }

    pub fn two_qubit(matrix: ComplexMatrix) -> Result<Self> {
        Self::new(matrix, Dims::Bipartite(2, 2))
    }

    /// Projector onto a normalized state vector.
    pub fn pure(vector: &[Complex64], dims: Dims) -> Result<Self> {
        Self::new(ComplexMatrix::outer(vector), dims)
    }

    pub fn maximally_mixed(dims: Dims) -> Self {
        let d = dims.total();
        Self::new(ComplexMatrix::identity(d).scale(1.0 / d as f64), dims)
            .expect("maximally mixed state is valid")
    }

    /// `ρ_A ⊗ ρ_B` as a bipartite state.
    pub fn product(a: &DensityMatrix, b: &DensityMatrix) -> Result<Self> {
        let m = tensor_product(&a.matrix, &b.matrix);
        Self::new(m, Dims::Bipartite(a.matrix.dim(), b.matrix.dim()))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    /// Raw eigenvalues, descending.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.spectrum
    }

    /// Eigenvalues with rounding noise below zero clamped to 0.
    pub fn clamped_eigenvalues(&self) -> Vec<f64> {
        self.spectrum.iter().map(|&x| x.max(0.0)).collect()
    }

    pub fn bipartite_dims(&self) -> Result<(usize, usize)> {
        match self.dims {
            Dims::Bipartite(a, b) => Ok((a, b)),
            Dims::Single(d) => Err(Error::DimensionMismatch(format!(
                "expected a bipartite state, got a single system of dim {d}"
            ))),
        }
    }

    /// Reduced state of the kept subsystem.
    pub fn marginal(&self, keep: Subsystem) -> Result<DensityMatrix> {
        let dims = self.bipartite_dims()?;
        let reduced = partial_trace(&self.matrix, keep, dims)?;
        DensityMatrix::single(reduced)
    }

    pub fn rank(&self, tolerance: f64) -> usize {
        self.spectrum.iter().filter(|&&x| x > tolerance).count()
    }
}

/// Shannon entropy in bits, with `0·log 0 = 0`.
pub fn shannon_entropy(probabilities: &[f64]) -> Result<f64> {
    if let Some(&bad) = probabilities.iter().find(|&&p| p < -NEGATIVITY_TOLERANCE) {
        return Err(Error::InvalidState(format!("negative probability {bad}")));
    }
    let sum: f64 = probabilities.iter().sum();
    if (sum - 1.0).abs() > PROBABILITY_SUM_TOLERANCE {
        return Err(Error::NotNormalized(sum));
    }
    Ok(entropy_bits(probabilities))
}

fn entropy_bits(probabilities: &[f64]) -> f64 {
    probabilities
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum::<f64>()
        .max(0.0)
}

/// `S(ρ) = −tr ρ log₂ ρ`.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    entropy_bits(&rho.clamped_eigenvalues())
}

/// `S(A|B) = S(ρ^{AB}) − S(ρ^B)`. Negative values signal entanglement.
pub fn conditional_entropy(rho_ab: &DensityMatrix) -> Result<f64> {
    let rho_b = rho_ab.marginal(Subsystem::B)?;
    Ok(von_neumann_entropy(rho_ab) - von_neumann_entropy(&rho_b))
}

/// `I(A;B) = S(ρ^A) + S(ρ^B) − S(ρ^{AB})`.
pub fn mutual_information(rho_ab: &DensityMatrix) -> Result<f64> {
    let rho_a = rho_ab.marginal(Subsystem::A)?;
    let rho_b = rho_ab.marginal(Subsystem::B)?;
    Ok(von_neumann_entropy(&rho_a) + von_neumann_entropy(&rho_b) - von_neumann_entropy(rho_ab))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BellState {
    PsiPlus,
    PsiMinus,
    PhiPlus,
    PhiMinus,
}

impl BellState {
    pub const ALL: [BellState; 4] = [
        BellState::PsiPlus,
        BellState::PsiMinus,
        BellState::PhiPlus,
        BellState::PhiMinus,
    ];

    /// Amplitudes in the computational basis.
    pub fn vector(self) -> [Complex64; 4] {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let z = 0.0;
        let re = match self {
            BellState::PsiPlus => [z, h, h, z],
            BellState::PsiMinus => [z, h, -h, z],
            BellState::PhiPlus => [h, z, z, h],
            BellState::PhiMinus => [h, z, z, -h],
        };
        re.map(|x| Complex64::new(x, 0.0))
    }

    pub fn projector(self) -> ComplexMatrix {
        ComplexMatrix::outer(&self.vector())
    }
}

impl fmt::Display for BellState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            BellState::PsiPlus => "psi+",
            BellState::PsiMinus => "psi-",
            BellState::PhiPlus => "phi+",
            BellState::PhiMinus => "phi-",
        };
        f.write_str(s)
    }
}

impl FromStr for BellState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "psi+" | "ψ+" | "Ψ+" => Ok(BellState::PsiPlus),
            "psi-" | "ψ-" | "Ψ-" | "ψ−" | "Ψ−" => Ok(BellState::PsiMinus),
            "phi+" | "φ+" | "Φ+" => Ok(BellState::PhiPlus),
            "phi-" | "φ-" | "Φ-" | "φ−" | "Φ−" => Ok(BellState::PhiMinus),
            _ => Err(Error::UnknownLabel(s.to_string())),
        }
    }
}

pub fn bell_state(label: BellState) -> DensityMatrix {
    DensityMatrix::two_qubit(label.projector()).expect("Bell projectors are valid states")
}

/// Diagonal of the correlation matrix of a Bell-diagonal state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationVector {
    pub r1: f64,
    pub r2: f64,
    pub r3: f64,
}

impl CorrelationVector {
    pub fn new(r1: f64, r2: f64, r3: f64) -> Self {
        Self { r1, r2, r3 }
    }

    /// Weights on `(Φ⁺, Φ⁻, Ψ⁺, Ψ⁻)`. All non-negative iff the vector lies in
    /// the tetrahedron spanned by `(−1,−1,−1), (−1,1,1), (1,−1,1), (1,1,−1)`.
    pub fn bell_weights(&self) -> [f64; 4] {
        let CorrelationVector { r1, r2, r3 } = *self;
        [
            (1.0 + r1 - r2 + r3) / 4.0,
            (1.0 - r1 + r2 + r3) / 4.0,
            (1.0 + r1 + r2 - r3) / 4.0,
            (1.0 - r1 - r2 - r3) / 4.0,
        ]
    }

    pub fn in_tetrahedron(&self) -> bool {
        self.bell_weights()
            .iter()
            .all(|&w| w >= -NEGATIVITY_TOLERANCE)
    }
}

/// `(1/4)(I⊗I + Σ r_i σ_i⊗σ_i)`.
pub fn bell_diagonal(r: CorrelationVector) -> Result<DensityMatrix> {
    let terms = [
        (r.r1, paulis::sigma_x()),
        (r.r2, paulis::sigma_y()),
        (r.r3, paulis::sigma_z()),
    ];
    let mut m = ComplexMatrix::identity(4);
    for (coefficient, sigma) in terms {
        m = &m + &tensor_product(&sigma, &sigma).scale(coefficient);
    }
    DensityMatrix::two_qubit(m.scale(0.25))
}

fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "probability p = {p} is outside [0, 1]"
        )))
    }
}

/// Bell-diagonal family with `r = (1 − 2p, −p, −p)`, i.e.
/// `p|Ψ⁻⟩⟨Ψ⁻| + ((1−p)/2)(|Ψ⁺⟩⟨Ψ⁺| + |Φ⁺⟩⟨Φ⁺|)`.
pub fn bell_diagonal_from_p(p: f64) -> Result<DensityMatrix> {
    check_probability(p)?;
    bell_diagonal(CorrelationVector::new(1.0 - 2.0 * p, -p, -p))
}

/// `((1−p)/4) I⊗I + p|Ψ⁻⟩⟨Ψ⁻|`.
pub fn werner(p: f64) -> Result<DensityMatrix> {
    check_probability(p)?;
    let m = &ComplexMatrix::identity(4).scale((1.0 - p) / 4.0)
        + &BellState::PsiMinus.projector().scale(p);
    DensityMatrix::two_qubit(m)
}

/// `p|Ψ⁺⟩⟨Ψ⁺| + (1−p)|11⟩⟨11|`.
pub fn x_state(p: f64) -> Result<DensityMatrix> {
    check_probability(p)?;
    let m = &BellState::PsiPlus.projector().scale(p)
        + &ComplexMatrix::diagonal(&[0.0, 0.0, 0.0, 1.0 - p]);
    DensityMatrix::two_qubit(m)
}
