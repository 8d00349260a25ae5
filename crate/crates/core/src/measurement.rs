//! Projective measurements on Alice's qubit and the quantities Bob can extract
//! from them with his memory.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_eigensystem, partial_trace, paulis, tensor_product, ComplexMatrix, EigenSystem,
    Subsystem,
};
use crate::state::{shannon_entropy, von_neumann_entropy, DensityMatrix, Dims};

/// Outcomes with probability at or below this are dropped from Holevo sums.
pub const ZERO_PROBABILITY: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PauliAxis {
    X,
    Y,
    Z,
}

/// Qubit observable with its cached spectral decomposition.
#[derive(Debug, Clone)]
pub struct Observable {
    matrix: ComplexMatrix,
    spectrum: EigenSystem,
    label: String,
}

impl Observable {
    pub fn new(matrix: ComplexMatrix, label: impl Into<String>) -> Result<Self> {
        if matrix.dim() != 2 {
            return Err(Error::DimensionMismatch(format!(
                "observables act on a qubit, got dim {}",
                matrix.dim()
            )));
        }
        let spectrum = hermitian_eigensystem(&matrix)?;
        Ok(Self {
            matrix,
            spectrum,
            label: label.into(),
        })
    }

    /// `n·σ` for the Bloch axis `n = (sinθ cosφ, sinθ sinφ, cosθ)`.
    pub fn bloch(theta: f64, phi: f64) -> Result<Self> {
        if !(theta.is_finite() && phi.is_finite()) {
            return Err(Error::Domain(format!(
                "non-finite Bloch angles ({theta}, {phi})"
            )));
        }
        let n = [
            theta.sin() * phi.cos(),
            theta.sin() * phi.sin(),
            theta.cos(),
        ];
        let m = &(&paulis::sigma_x().scale(n[0]) + &paulis::sigma_y().scale(n[1]))
            + &paulis::sigma_z().scale(n[2]);
        Self::new(m, format!("bloch({theta},{phi})"))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn spectrum(&self) -> &EigenSystem {
        &self.spectrum
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// Eigenprojectors, in descending eigenvalue order.
    pub fn projectors(&self) -> Vec<ComplexMatrix> {
        (0..self.dim())
            .map(|k| self.spectrum.projector(k))
            .collect()
    }
}

pub fn pauli(axis: PauliAxis) -> Observable {
    let (m, label) = match axis {
        PauliAxis::X => (paulis::sigma_x(), "X"),
        PauliAxis::Y => (paulis::sigma_y(), "Y"),
        PauliAxis::Z => (paulis::sigma_z(), "Z"),
    };
    Observable::new(m, label).expect("Pauli matrices are Hermitian")
}

/// Textual observable choice: a Pauli axis or a `theta,phi` Bloch direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ObservableSpec {
    Pauli(PauliAxis),
    Bloch { theta: f64, phi: f64 },
}

impl ObservableSpec {
    pub fn observable(&self) -> Result<Observable> {
        match *self {
            ObservableSpec::Pauli(axis) => Ok(pauli(axis)),
            ObservableSpec::Bloch { theta, phi } => Observable::bloch(theta, phi),
        }
    }
}

impl FromStr for ObservableSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "x" => return Ok(ObservableSpec::Pauli(PauliAxis::X)),
            "y" => return Ok(ObservableSpec::Pauli(PauliAxis::Y)),
            "z" => return Ok(ObservableSpec::Pauli(PauliAxis::Z)),
            _ => {}
        }
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if let [theta, phi] = parts[..] {
            if let (Ok(theta), Ok(phi)) = (theta.parse::<f64>(), phi.parse::<f64>()) {
                if theta.is_finite() && phi.is_finite() {
                    return Ok(ObservableSpec::Bloch { theta, phi });
                }
            }
        }
        Err(Error::UnknownLabel(s.to_string()))
    }
}

impl fmt::Display for ObservableSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ObservableSpec::Pauli(PauliAxis::X) => f.write_str("x"),
            ObservableSpec::Pauli(PauliAxis::Y) => f.write_str("y"),
            ObservableSpec::Pauli(PauliAxis::Z) => f.write_str("z"),
            ObservableSpec::Bloch { theta, phi } => write!(f, "{theta},{phi}"),
        }
    }
}

fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// `c = max_{i,j} |⟨q_i|r_j⟩|²`.
pub fn complementarity_c(q: &Observable, r: &Observable) -> Result<f64> {
    if q.dim() != r.dim() {
        return Err(Error::DimensionMismatch(
            "observables of different dimension".into(),
        ));
    }
    let mut c = 0.0_f64;
    for u in &q.spectrum.eigenvectors {
        for v in &r.spectrum.eigenvectors {
            c = c.max(inner(u, v).norm_sqr());
        }
    }
    Ok(c.min(1.0))
}

fn alice_projectors(
    rho_ab: &DensityMatrix,
    q: &Observable,
) -> Result<(Vec<ComplexMatrix>, usize, usize)> {
    let (da, db) = rho_ab.bipartite_dims()?;
    if da != q.dim() {
        return Err(Error::DimensionMismatch(format!(
            "observable of dim {} cannot measure subsystem A of dim {da}",
            q.dim()
        )));
    }
    let id = ComplexMatrix::identity(db);
    let lifted = q
        .projectors()
        .iter()
        .map(|p| tensor_product(p, &id))
        .collect();
    Ok((lifted, da, db))
}

/// `Σ_x (Π_x⊗I) ρ (Π_x⊗I)`: Alice measures `q` and forgets nothing but coherence.
pub fn post_measurement_state(rho_ab: &DensityMatrix, q: &Observable) -> Result<DensityMatrix> {
    let (projectors, da, db) = alice_projectors(rho_ab, q)?;
    let mut out = ComplexMatrix::zeros(da * db);
    for p in &projectors {
        out = &out + &(&(p * rho_ab.matrix()) * p);
    }
    DensityMatrix::new(out, Dims::Bipartite(da, db))
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub probability: f64,
    /// Bob's conditional state; `None` when the outcome has zero probability.
    pub conditional_state: Option<DensityMatrix>,
}

/// Alice's outcome distribution together with Bob's conditional states.
#[derive(Debug, Clone)]
pub struct OutcomeEnsemble {
    pub outcomes: Vec<Outcome>,
}

impl OutcomeEnsemble {
    pub fn probabilities(&self) -> Vec<f64> {
        self.outcomes.iter().map(|o| o.probability).collect()
    }

    /// `Σ_x p_x ρ_x^B` over non-negligible outcomes.
    pub fn average_state(&self) -> ComplexMatrix {
        let d = self
            .outcomes
            .iter()
            .find_map(|o| o.conditional_state.as_ref())
            .map(|s| s.matrix().dim())
            .unwrap_or(1);
        let mut out = ComplexMatrix::zeros(d);
        for o in &self.outcomes {
            if let Some(s) = &o.conditional_state {
                out = &out + &s.matrix().scale(o.probability);
            }
        }
        out
    }
}

pub fn outcome_ensemble(rho_ab: &DensityMatrix, q: &Observable) -> Result<OutcomeEnsemble> {
    let (projectors, da, db) = alice_projectors(rho_ab, q)?;
    let mut outcomes = Vec::with_capacity(projectors.len());
    for p in &projectors {
        let branch = &(p * rho_ab.matrix()) * p;
        let probability = branch.trace().re;
        let conditional_state = if probability > ZERO_PROBABILITY {
            let reduced = partial_trace(&branch, Subsystem::B, (da, db))?;
            Some(DensityMatrix::single(reduced.scale(1.0 / probability))?)
        } else {
            None
        };
        outcomes.push(Outcome {
            probability,
            conditional_state,
        });
    }
    Ok(OutcomeEnsemble { outcomes })
}

/// Holevo quantity `I(X;B) = S(ρ^B) − Σ_x p_x S(ρ_x^B)`.
pub fn holevo_quantity(rho_ab: &DensityMatrix, q: &Observable) -> Result<f64> {
    let ensemble = outcome_ensemble(rho_ab, q)?;
    let rho_b = rho_ab.marginal(Subsystem::B)?;
    let average: f64 = ensemble
        .outcomes
        .iter()
        .filter_map(|o| {
            o.conditional_state
                .as_ref()
                .map(|s| o.probability * von_neumann_entropy(s))
        })
        .sum();
    Ok(von_neumann_entropy(&rho_b) - average)
}

/// Outcome distribution of `q` measured on a single-qubit state.
pub fn outcome_probabilities(rho: &DensityMatrix, q: &Observable) -> Result<Vec<f64>> {
    if rho.matrix().dim() != q.dim() {
        return Err(Error::DimensionMismatch(
            "state and observable differ in dimension".into(),
        ));
    }
    Ok(q.projectors()
        .iter()
        .map(|p| (p * rho.matrix()).trace().re)
        .collect())
}

/// `H(Q)`: Shannon entropy of Alice's outcomes, computed on her marginal.
pub fn measured_entropy(rho_ab: &DensityMatrix, q: &Observable) -> Result<f64> {
    let rho_a = rho_ab.marginal(Subsystem::A)?;
    shannon_entropy(&outcome_probabilities(&rho_a, q)?)
}

/// Both sides of `ΔQ·ΔR ≥ ½|⟨[Q,R]⟩|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RobertsonReport {
    pub bound: f64,
    pub delta_q: f64,
    pub delta_r: f64,
}

impl RobertsonReport {
    pub fn product(&self) -> f64 {
        self.delta_q * self.delta_r
    }
}

fn expectation(op: &ComplexMatrix, rho: &ComplexMatrix) -> Complex64 {
    (rho * op).trace()
}

fn standard_deviation(op: &ComplexMatrix, rho: &ComplexMatrix) -> f64 {
    let mean = expectation(op, rho).re;
    let second = expectation(&(op * op), rho).re;
    (second - mean * mean).max(0.0).sqrt()
}

pub fn robertson_bound(
    q: &Observable,
    r: &Observable,
    rho: &DensityMatrix,
) -> Result<RobertsonReport> {
    let d = rho.matrix().dim();
    if q.dim() != d || r.dim() != d {
        return Err(Error::DimensionMismatch(
            "state and observables differ in dimension".into(),
        ));
    }
    let commutator = q.matrix().commutator(r.matrix());
    Ok(RobertsonReport {
        bound: 0.5 * expectation(&commutator, rho.matrix()).norm(),
        delta_q: standard_deviation(q.matrix(), rho.matrix()),
        delta_r: standard_deviation(r.matrix(), rho.matrix()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{bell_state, werner, x_state, BellState};
    use approx::assert_abs_diff_eq;

    fn binary_entropy(p: f64) -> f64 {
        -p * p.log2() - (1.0 - p) * (1.0 - p).log2()
    }

    fn ket_bra(i: usize, j: usize, d: usize) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(d);
        m[(i, j)] = Complex64::new(1.0, 0.0);
        m
    }

    #[test]
    fn pauli_projectors() {
        let z = pauli(PauliAxis::Z).projectors();
        assert!(z[0].max_abs_diff(&ket_bra(0, 0, 2)) < 1e-15);
        assert!(z[1].max_abs_diff(&ket_bra(1, 1, 2)) < 1e-15);

        let x = pauli(PauliAxis::X).projectors();
        let plus = ComplexMatrix::from_real(&[&[0.5, 0.5], &[0.5, 0.5]]).unwrap();
        let minus = ComplexMatrix::from_real(&[&[0.5, -0.5], &[-0.5, 0.5]]).unwrap();
        assert!(x[0].max_abs_diff(&plus) < 1e-14);
        assert!(x[1].max_abs_diff(&minus) < 1e-14);

        let y = pauli(PauliAxis::Y);
        assert_abs_diff_eq!(y.spectrum().eigenvalues[0], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(y.spectrum().eigenvalues[1], -1.0, epsilon = 1e-14);
    }

    #[test]
    fn projectors_are_orthogonal_and_complete() {
        for obs in [
            pauli(PauliAxis::X),
            pauli(PauliAxis::Y),
            pauli(PauliAxis::Z),
            Observable::bloch(0.3, 1.7).unwrap(),
        ] {
            let p = obs.projectors();
            assert!((&p[0] * &p[1]).frobenius_norm() < 1e-10);
            assert!((&p[0] * &p[0]).max_abs_diff(&p[0]) < 1e-10);
            assert!((&p[0] + &p[1]).max_abs_diff(&ComplexMatrix::identity(2)) < 1e-10);
        }
    }

    #[test]
    fn complementarity_examples() {
        let x = pauli(PauliAxis::X);
        let z = pauli(PauliAxis::Z);
        assert_abs_diff_eq!(complementarity_c(&x, &z).unwrap(), 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(complementarity_c(&z, &z).unwrap(), 1.0, epsilon = 1e-14);
        let rotated = Observable::new(
            (&paulis::sigma_z() + &paulis::sigma_x()).scale(std::f64::consts::FRAC_1_SQRT_2),
            "H",
        )
        .unwrap();
        let expected = (std::f64::consts::PI / 8.0).cos().powi(2);
        assert_abs_diff_eq!(
            complementarity_c(&z, &rotated).unwrap(),
            expected,
            epsilon = 1e-12
        );
        // θ = π/4 on the x-z great circle is the same observable
        let bloch = Observable::bloch(std::f64::consts::FRAC_PI_4, 0.0).unwrap();
        assert_abs_diff_eq!(
            complementarity_c(&z, &bloch).unwrap(),
            expected,
            epsilon = 1e-12
        );
    }

    #[test]
    fn spec_parsing() {
        assert_eq!(
            "X".parse::<ObservableSpec>().unwrap(),
            ObservableSpec::Pauli(PauliAxis::X)
        );
        assert_eq!(
            "1.5, 0".parse::<ObservableSpec>().unwrap(),
            ObservableSpec::Bloch {
                theta: 1.5,
                phi: 0.0
            }
        );
        assert!("w".parse::<ObservableSpec>().is_err());
        assert!("1,2,3".parse::<ObservableSpec>().is_err());
    }

    #[test]
    fn post_measurement_examples() {
        let diag =
            DensityMatrix::two_qubit(ComplexMatrix::diagonal(&[0.1, 0.2, 0.3, 0.4])).unwrap();
        let z = pauli(PauliAxis::Z);
        let x = pauli(PauliAxis::X);
        assert!(
            post_measurement_state(&diag, &z)
                .unwrap()
                .matrix()
                .max_abs_diff(diag.matrix())
                < 1e-15
        );

        let singlet = bell_state(BellState::PsiMinus);
        let after = post_measurement_state(&singlet, &z).unwrap();
        assert!(
            after
                .matrix()
                .max_abs_diff(&ComplexMatrix::diagonal(&[0.0, 0.5, 0.5, 0.0]))
                < 1e-15
        );

        let w = post_measurement_state(&werner(0.5).unwrap(), &x).unwrap();
        for (got, want) in w.eigenvalues().iter().zip([0.375, 0.375, 0.125, 0.125]) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-12);
        }
        let entropy = -2.0 * 0.375 * 0.375f64.log2() - 2.0 * 0.125 * 0.125f64.log2();
        assert_abs_diff_eq!(von_neumann_entropy(&w), entropy, epsilon = 1e-12);
    }

    #[test]
    fn post_measurement_rejects_wrong_dims() {
        let single = DensityMatrix::maximally_mixed(Dims::Single(2));
        assert!(post_measurement_state(&single, &pauli(PauliAxis::Z)).is_err());
        let big = DensityMatrix::maximally_mixed(Dims::Bipartite(3, 2));
        assert!(outcome_ensemble(&big, &pauli(PauliAxis::Z)).is_err());
    }

    #[test]
    fn ensembles() {
        let z = pauli(PauliAxis::Z);
        let e = outcome_ensemble(&bell_state(BellState::PsiMinus), &z).unwrap();
        assert_eq!(e.probabilities().len(), 2);
        assert_abs_diff_eq!(e.outcomes[0].probability, 0.5, epsilon = 1e-15);
        let s0 = e.outcomes[0].conditional_state.as_ref().unwrap();
        let s1 = e.outcomes[1].conditional_state.as_ref().unwrap();
        assert!(s0.matrix().max_abs_diff(&ket_bra(1, 1, 2)) < 1e-15);
        assert!(s1.matrix().max_abs_diff(&ket_bra(0, 0, 2)) < 1e-15);

        let e = outcome_ensemble(&x_state(0.5).unwrap(), &z).unwrap();
        assert_abs_diff_eq!(e.outcomes[0].probability, 0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(e.outcomes[1].probability, 0.75, epsilon = 1e-15);
        let s1 = e.outcomes[1].conditional_state.as_ref().unwrap();
        assert!(
            s1.matrix()
                .max_abs_diff(&ComplexMatrix::diagonal(&[1.0 / 3.0, 2.0 / 3.0]))
                < 1e-15
        );

        let a =
            DensityMatrix::single(ComplexMatrix::from_real(&[&[0.6, 0.2], &[0.2, 0.4]]).unwrap())
                .unwrap();
        let b = DensityMatrix::single(ComplexMatrix::diagonal(&[0.3, 0.7])).unwrap();
        let prod = DensityMatrix::product(&a, &b).unwrap();
        for o in outcome_ensemble(&prod, &pauli(PauliAxis::X))
            .unwrap()
            .outcomes
        {
            assert!(
                o.conditional_state
                    .unwrap()
                    .matrix()
                    .max_abs_diff(b.matrix())
                    < 1e-12
            );
        }
    }

    #[test]
    fn zero_probability_outcomes_are_flagged() {
        let e = outcome_ensemble(&x_state(0.0).unwrap(), &pauli(PauliAxis::Z)).unwrap();
        assert!(e.outcomes[0].conditional_state.is_none());
        assert_abs_diff_eq!(
            holevo_quantity(&x_state(0.0).unwrap(), &pauli(PauliAxis::Z)).unwrap(),
            0.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn holevo_examples() {
        let z = pauli(PauliAxis::Z);
        let a = DensityMatrix::single(ComplexMatrix::diagonal(&[0.6, 0.4])).unwrap();
        let b = DensityMatrix::single(ComplexMatrix::diagonal(&[0.3, 0.7])).unwrap();
        let prod = DensityMatrix::product(&a, &b).unwrap();
        assert_abs_diff_eq!(holevo_quantity(&prod, &z).unwrap(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(
            holevo_quantity(&bell_state(BellState::PsiMinus), &z).unwrap(),
            1.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            holevo_quantity(&werner(0.5).unwrap(), &z).unwrap(),
            1.0 - binary_entropy(0.75),
            epsilon = 1e-12
        );
    }

    #[test]
    fn measured_entropy_examples() {
        let z = pauli(PauliAxis::Z);
        for p in [0.0, 0.3, 1.0] {
            let bd = crate::state::bell_diagonal_from_p(p).unwrap();
            for axis in [PauliAxis::X, PauliAxis::Y, PauliAxis::Z] {
                assert_abs_diff_eq!(
                    measured_entropy(&bd, &pauli(axis)).unwrap(),
                    1.0,
                    epsilon = 1e-12
                );
            }
        }
        let one_one =
            DensityMatrix::two_qubit(ComplexMatrix::diagonal(&[0.0, 0.0, 0.0, 1.0])).unwrap();
        assert_abs_diff_eq!(
            measured_entropy(&one_one, &z).unwrap(),
            0.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            measured_entropy(&x_state(0.5).unwrap(), &z).unwrap(),
            binary_entropy(0.25),
            epsilon = 1e-12
        );
    }

    #[test]
    fn robertson_examples() {
        let x = pauli(PauliAxis::X);
        let y = pauli(PauliAxis::Y);
        let zero = DensityMatrix::single(ket_bra(0, 0, 2)).unwrap();
        let r = robertson_bound(&x, &y, &zero).unwrap();
        assert_abs_diff_eq!(r.bound, 1.0, epsilon = 1e-14);
        assert!(r.product() >= r.bound - 1e-9);
        assert_eq!(robertson_bound(&x, &x, &zero).unwrap().bound, 0.0);
        let mixed = DensityMatrix::maximally_mixed(Dims::Single(2));
        assert_abs_diff_eq!(
            robertson_bound(&x, &y, &mixed).unwrap().bound,
            0.0,
            epsilon = 1e-15
        );
        let two = DensityMatrix::maximally_mixed(Dims::Bipartite(2, 2));
        assert!(robertson_bound(&x, &y, &two).is_err());
    }
}
