//! Lower bounds on Bob's uncertainty about Alice's measurement outcomes and
//! the secret-key rate they imply.
//!
//! For observables `Q`, `R` with complementarity `c`:
//!
//! * Maassen–Uffink: `H(Q) + H(R) ≥ log₂(1/c)`
//! * Berta: `S(Q|B) + S(R|B) ≥ log₂(1/c) + S(A|B)`
//! * Adabi: adds `max{0, δ}` with `δ = I(A;B) − I(Q;B) − I(R;B)`
//! * key rate: `K ≥ log₂(1/c) + max{0, δ} − S(Q|B) − S(R|B)`

use serde::Serialize;

use crate::channel::{apply_to_memory, KrausChannel};
use crate::error::{Error, Result};
use crate::linalg::Subsystem;
use crate::measurement::{
    complementarity_c, holevo_quantity, measured_entropy, outcome_probabilities,
    post_measurement_state, Observable,
};
use crate::state::{
    conditional_entropy, mutual_information, shannon_entropy, von_neumann_entropy, DensityMatrix,
};

/// `log₂(1/c)`.
pub fn maassen_uffink_bound(c: f64) -> Result<f64> {
    if !(c > 0.0 && c <= 1.0 + 1e-12) {
        return Err(Error::Domain(format!(
            "complementarity c = {c} is outside (0, 1]"
        )));
    }
    Ok((1.0 / c.min(1.0)).log2())
}

/// `S(Q|B) = S(ρ^{QB}) − S(ρ^B)` where `ρ^{QB}` is the post-measurement state.
pub fn measured_conditional_entropy(rho_ab: &DensityMatrix, q: &Observable) -> Result<f64> {
    let post = post_measurement_state(rho_ab, q)?;
    let rho_b = rho_ab.marginal(Subsystem::B)?;
    Ok(von_neumann_entropy(&post) - von_neumann_entropy(&rho_b))
}

/// `S(Q|B) + S(R|B)`.
pub fn uncertainty_lhs(rho_ab: &DensityMatrix, q: &Observable, r: &Observable) -> Result<f64> {
    Ok(measured_conditional_entropy(rho_ab, q)? + measured_conditional_entropy(rho_ab, r)?)
}

pub fn berta_bound(rho_ab: &DensityMatrix, q: &Observable, r: &Observable) -> Result<f64> {
    let mu = maassen_uffink_bound(complementarity_c(q, r)?)?;
    Ok(mu + conditional_entropy(rho_ab)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AdabiBound {
    pub bound: f64,
    /// Raw `δ`; may be negative.
    pub delta: f64,
}

/// `δ = I(A;B) − I(Q;B) − I(R;B)`.
pub fn holevo_deficit(rho_ab: &DensityMatrix, q: &Observable, r: &Observable) -> Result<f64> {
    Ok(mutual_information(rho_ab)? - (holevo_quantity(rho_ab, q)? + holevo_quantity(rho_ab, r)?))
}

pub fn adabi_bound(rho_ab: &DensityMatrix, q: &Observable, r: &Observable) -> Result<AdabiBound> {
    let mu = maassen_uffink_bound(complementarity_c(q, r)?)?;
    let delta = holevo_deficit(rho_ab, q, r)?;
    Ok(AdabiBound {
        bound: mu + conditional_entropy(rho_ab)? + delta.max(0.0),
        delta,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NoMemoryEur {
    /// `H(Q) + H(R)`.
    pub lhs: f64,
    /// `log₂(1/c) + S(A)`.
    pub bound: f64,
}

/// Uncertainty relation for a single qubit without memory.
pub fn eur_no_memory(rho_a: &DensityMatrix, q: &Observable, r: &Observable) -> Result<NoMemoryEur> {
    let mu = maassen_uffink_bound(complementarity_c(q, r)?)?;
    let h_q = shannon_entropy(&outcome_probabilities(rho_a, q)?)?;
    let h_r = shannon_entropy(&outcome_probabilities(rho_a, r)?)?;
    Ok(NoMemoryEur {
        lhs: h_q + h_r,
        bound: mu + von_neumann_entropy(rho_a),
    })
}

/// Lower bound on the extractable key. Negative values are returned as-is and
/// mean the state cannot certify a key.
pub fn qsk_rate_bound(rho_ab: &DensityMatrix, q: &Observable, r: &Observable) -> Result<f64> {
    let mu = maassen_uffink_bound(complementarity_c(q, r)?)?;
    let delta = holevo_deficit(rho_ab, q, r)?;
    let lhs = uncertainty_lhs(rho_ab, q, r)?;
    Ok(mu + delta.max(0.0) - lhs)
}

/// Every entropic quantity for one `(state, channel, Q, R)` configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UncertaintyReport {
    pub c: f64,
    pub mu_bound: f64,
    pub s_cond_ab: f64,
    pub berta_bound: f64,
    pub h_q: f64,
    pub h_r: f64,
    pub s_q_given_b: f64,
    pub s_r_given_b: f64,
    pub holevo_q: f64,
    pub holevo_r: f64,
    pub i_ab: f64,
    pub delta: f64,
    pub adabi_bound: f64,
    pub lhs: f64,
    pub no_memory_lhs: f64,
    pub no_memory_bound: f64,
    pub qsk_lower: f64,
}

impl UncertaintyReport {
    /// Named fields in display order.
    pub fn fields(&self) -> [(&'static str, f64); 17] {
        [
            ("c", self.c),
            ("mu_bound", self.mu_bound),
            ("s_cond_ab", self.s_cond_ab),
            ("berta_bound", self.berta_bound),
            ("h_q", self.h_q),
            ("h_r", self.h_r),
            ("s_q_given_b", self.s_q_given_b),
            ("s_r_given_b", self.s_r_given_b),
            ("holevo_q", self.holevo_q),
            ("holevo_r", self.holevo_r),
            ("i_ab", self.i_ab),
            ("delta", self.delta),
            ("adabi_bound", self.adabi_bound),
            ("lhs", self.lhs),
            ("no_memory_lhs", self.no_memory_lhs),
            ("no_memory_bound", self.no_memory_bound),
            ("qsk_lower", self.qsk_lower),
        ]
    }

    /// Largest field-wise absolute difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.fields()
            .iter()
            .zip(other.fields().iter())
            .map(|((_, a), (_, b))| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Computes the full report in one pass. If a channel is given it is applied
/// to Bob's memory before any measurement.
pub fn full_report(
    rho_ab: &DensityMatrix,
    channel: Option<&KrausChannel>,
    q: &Observable,
    r: &Observable,
) -> Result<UncertaintyReport> {
    let channeled;
    let rho = match channel {
        Some(ch) => {
            channeled = apply_to_memory(ch, rho_ab)?;
            &channeled
        }
        None => rho_ab,
    };

    let c = complementarity_c(q, r)?;
    let mu_bound = maassen_uffink_bound(c)?;

    let rho_a = rho.marginal(Subsystem::A)?;
    let rho_b = rho.marginal(Subsystem::B)?;
    let s_ab = von_neumann_entropy(rho);
    let s_a = von_neumann_entropy(&rho_a);
    let s_b = von_neumann_entropy(&rho_b);

    let s_cond_ab = s_ab - s_b;
    let i_ab = s_a + s_b - s_ab;
    let s_q_given_b = von_neumann_entropy(&post_measurement_state(rho, q)?) - s_b;
    let s_r_given_b = von_neumann_entropy(&post_measurement_state(rho, r)?) - s_b;
    let h_q = measured_entropy(rho, q)?;
    let h_r = measured_entropy(rho, r)?;
    let holevo_q = holevo_quantity(rho, q)?;
    let holevo_r = holevo_quantity(rho, r)?;

    let delta = i_ab - (holevo_q + holevo_r);
    let lhs = s_q_given_b + s_r_given_b;

    Ok(UncertaintyReport {
        c,
        mu_bound,
        s_cond_ab,
        berta_bound: mu_bound + s_cond_ab,
        h_q,
        h_r,
        s_q_given_b,
        s_r_given_b,
        holevo_q,
        holevo_r,
        i_ab,
        delta,
        adabi_bound: mu_bound + s_cond_ab + delta.max(0.0),
        lhs,
        no_memory_lhs: h_q + h_r,
        no_memory_bound: mu_bound + s_a,
        qsk_lower: mu_bound + delta.max(0.0) - lhs,
    })
}
