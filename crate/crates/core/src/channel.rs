//! Hawking temperature of the GHS dilaton black hole and the Unruh channel it
//! induces on a qubit held by an observer hovering outside the horizon.
//!
//! The channel acts as
//!
//! ```text
//! ε(|0⟩⟨0|) = (1/x)|0⟩⟨0| + (1/y)|1⟩⟨1|
//! ε(|0⟩⟨1|) = x^{-1/2}|0⟩⟨1|
//! ε(|1⟩⟨1|) = |1⟩⟨1|
//! ```
//!
//! with `x = e^{-ω/T} + 1`, `y = e^{ω/T} + 1`. Writing `γ = 1/y` gives the
//! Kraus pair `K₀ = diag(√(1−γ), 1)`, `K₁ = √γ |1⟩⟨0|`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_eigensystem, partial_trace, tensor_product, ComplexMatrix, Subsystem,
};
use crate::state::{DensityMatrix, Dims};

/// Above this `ω/T` the damping `1/(e^{ω/T}+1)` is below 1e-300 and taken as 0.
pub const OVERFLOW_GUARD: f64 = 700.0;

/// Mass `M` and dilaton charge `D` of a GHS black hole, natural units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlackHoleParams {
    pub mass: f64,
    pub dilaton: f64,
}

impl BlackHoleParams {
    pub fn new(mass: f64, dilaton: f64) -> Result<Self> {
        if !(mass.is_finite() && dilaton.is_finite()) || dilaton < 0.0 || mass <= dilaton {
            return Err(Error::Domain(format!(
                "black hole requires M > D >= 0, got M = {mass}, D = {dilaton}"
            )));
        }
        Ok(Self { mass, dilaton })
    }

    pub fn hawking_temperature(&self) -> f64 {
        1.0 / (8.0 * std::f64::consts::PI * (self.mass - self.dilaton))
    }
}

/// `T = 1/(8π(M − D))`.
pub fn hawking_temperature(params: BlackHoleParams) -> Result<f64> {
    // re-check in case the struct was built by hand
    BlackHoleParams::new(params.mass, params.dilaton).map(|p| p.hawking_temperature())
}

/// Mode frequency and temperature of the Unruh channel with its derived constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnruhChannel {
    pub omega: f64,
    pub temperature: f64,
    /// `1/(e^{ω/T}+1)`, zero at `T = 0`.
    pub gamma: f64,
}

impl UnruhChannel {
    pub fn new(omega: f64, temperature: f64) -> Result<Self> {
        if !(omega.is_finite() && omega > 0.0) {
            return Err(Error::Domain(format!(
                "frequency must be positive, got {omega}"
            )));
        }
        if !temperature.is_finite() || temperature < 0.0 {
            return Err(Error::Domain(format!(
                "temperature must be finite and non-negative, got {temperature}"
            )));
        }
        let gamma = if temperature == 0.0 {
            0.0
        } else {
            let ratio = omega / temperature;
            if ratio > OVERFLOW_GUARD {
                0.0
            } else {
                1.0 / (ratio.exp() + 1.0)
            }
        };
        Ok(Self {
            omega,
            temperature,
            gamma,
        })
    }

    /// `1/x = 1 − γ`, the weight kept on `|0⟩⟨0|`.
    pub fn inv_x(&self) -> f64 {
        1.0 - self.gamma
    }

    /// `1/y = γ`, the weight moved to `|1⟩⟨1|`.
    pub fn inv_y(&self) -> f64 {
        self.gamma
    }

    /// Factor `x^{-1/2}` multiplying the coherences.
    pub fn coherence_factor(&self) -> f64 {
        self.inv_x().sqrt()
    }

    pub fn kraus(&self) -> KrausChannel {
        let g = self.gamma;
        let k0 = ComplexMatrix::diagonal(&[(1.0 - g).sqrt(), 1.0]);
        let mut k1 = ComplexMatrix::zeros(2);
        k1[(1, 0)] = Complex64::new(g.sqrt(), 0.0);
        KrausChannel {
            kraus_ops: vec![k0, k1],
        }
    }
}

/// Kraus operators of the Unruh channel at frequency `omega` and temperature `t`.
pub fn unruh_channel(omega: f64, t: f64) -> Result<KrausChannel> {
    Ok(UnruhChannel::new(omega, t)?.kraus())
}

/// A channel in Kraus form, `ρ ↦ Σ_m K_m ρ K_m†`.
#[derive(Debug, Clone)]
pub struct KrausChannel {
    kraus_ops: Vec<ComplexMatrix>,
}

impl KrausChannel {
    pub fn new(kraus_ops: Vec<ComplexMatrix>) -> Result<Self> {
        let Some(first) = kraus_ops.first() else {
            return Err(Error::DimensionMismatch(
                "a channel needs at least one Kraus operator".into(),
            ));
        };
        let d = first.dim();
        if kraus_ops.iter().any(|k| k.dim() != d) {
            return Err(Error::DimensionMismatch(
                "Kraus operators differ in dimension".into(),
            ));
        }
        Ok(Self { kraus_ops })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            kraus_ops: vec![ComplexMatrix::identity(dim)],
        }
    }

    pub fn kraus_ops(&self) -> &[ComplexMatrix] {
        &self.kraus_ops
    }

    pub fn dim(&self) -> usize {
        self.kraus_ops[0].dim()
    }

    /// Action on an arbitrary operator of matching dimension.
    pub fn apply(&self, m: &ComplexMatrix) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(m.dim());
        for k in &self.kraus_ops {
            out = &out + &k.conjugate(m);
        }
        out
    }

    /// `Σ K†K`.
    pub fn completeness(&self) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.dim());
        for k in &self.kraus_ops {
            out = &out + &(&k.adjoint() * k);
        }
        out
    }

    /// Largest entry of `|Σ K†K − I|`.
    pub fn completeness_defect(&self) -> f64 {
        self.completeness()
            .max_abs_diff(&ComplexMatrix::identity(self.dim()))
    }

    /// Smallest eigenvalue of the Choi matrix.
    pub fn choi_min_eigenvalue(&self) -> Result<f64> {
        let es = hermitian_eigensystem(&choi_matrix(self))?;
        Ok(*es.eigenvalues.last().expect("non-empty spectrum"))
    }
}

/// `Σ_{ij} |i⟩⟨j| ⊗ ε(|i⟩⟨j|)`, i.e. `(I⊗ε)` on the unnormalized maximally
/// entangled projector.
pub fn choi_matrix(channel: &KrausChannel) -> ComplexMatrix {
    let d = channel.dim();
    let mut out = ComplexMatrix::zeros(d * d);
    for i in 0..d {
        for j in 0..d {
            let mut unit = ComplexMatrix::zeros(d);
            unit[(i, j)] = Complex64::new(1.0, 0.0);
            out = &out + &tensor_product(&unit, &channel.apply(&unit));
        }
    }
    out
}

/// `(I ⊗ ε)(ρ^{AB})`: only Bob's memory qubit passes through the channel.
pub fn apply_to_memory(channel: &KrausChannel, rho_ab: &DensityMatrix) -> Result<DensityMatrix> {
    let (da, db) = rho_ab.bipartite_dims()?;
    if channel.dim() != db {
        return Err(Error::DimensionMismatch(format!(
            "channel acts on dim {}, memory has dim {db}",
            channel.dim()
        )));
    }
    let id = ComplexMatrix::identity(da);
    let mut out = ComplexMatrix::zeros(da * db);
    for k in channel.kraus_ops() {
        out = &out + &tensor_product(&id, k).conjugate(rho_ab.matrix());
    }
    DensityMatrix::new(out, Dims::Bipartite(da, db))
}

/// Two-mode vacuum `x^{-1/2}|0⟩_I|0⟩_II + y^{-1/2}|1⟩_I|1⟩_II` as a projector,
/// region I first.
pub fn dilation_vacuum(omega: f64, t: f64) -> Result<DensityMatrix> {
    let ch = UnruhChannel::new(omega, t)?;
    let zero = Complex64::new(0.0, 0.0);
    let v = [
        Complex64::new(ch.inv_x().sqrt(), 0.0),
        zero,
        zero,
        Complex64::new(ch.inv_y().sqrt(), 0.0),
    ];
    DensityMatrix::pure(&v, Dims::Bipartite(2, 2))
}

/// Region-I state seen by the exterior observer when the global state is the vacuum.
pub fn exterior_vacuum(omega: f64, t: f64) -> Result<ComplexMatrix> {
    let vac = dilation_vacuum(omega, t)?;
    partial_trace(vac.matrix(), Subsystem::A, (2, 2))
}
