//! Invariant suites run by `horizon-eur validate`.
//!
//! Every suite is a list of named invariants; each invariant checks a batch
//! of cases and fails if any case exceeds its tolerance. Random cases come
//! from a ChaCha stream seeded by the caller, so the seed changes which
//! states are drawn but not what is checked.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bounds::{eur_no_memory, full_report, measured_conditional_entropy};
use crate::channel::{apply_to_memory, exterior_vacuum, unruh_channel, KrausChannel};
use crate::error::Result;
use crate::linalg::{
    hermitian_eigensystem, partial_trace, tensor_product, ComplexMatrix, Subsystem,
};
use crate::measurement::{
    holevo_quantity, measured_entropy, outcome_ensemble, pauli, post_measurement_state, PauliAxis,
};
use crate::random::{
    random_correlation_vector, random_density_matrix, random_hermitian, random_unitary,
};
use crate::state::{
    bell_diagonal, bell_diagonal_from_p, mutual_information, von_neumann_entropy, werner, x_state,
    BellState, DensityMatrix, Dims,
};
use crate::sweep::StateFamily;

#[derive(Debug, Clone, Copy)]
pub struct ValidateOptions {
    pub seed: u64,
    /// Test hook: scales the first Kraus operator of every Unruh channel by
    /// `1 + ε`, breaking trace preservation.
    pub kraus_perturbation: Option<f64>,
}

impl Default for ValidateOptions {
    fn default() -> Self {
        Self {
            seed: 0x5eed,
            kraus_perturbation: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct InvariantResult {
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
    /// Largest observed violation, for the log line.
    pub worst: f64,
}

impl InvariantResult {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Debug, Clone)]
pub struct SuiteResult {
    pub name: &'static str,
    pub invariants: Vec<InvariantResult>,
}

impl SuiteResult {
    pub fn passed_count(&self) -> usize {
        self.invariants.iter().filter(|i| i.passed()).count()
    }
}

#[derive(Debug, Clone)]
pub struct ValidationSummary {
    pub suites: Vec<SuiteResult>,
}

impl ValidationSummary {
    pub fn all_passed(&self) -> bool {
        self.suites
            .iter()
            .all(|s| s.passed_count() == s.invariants.len())
    }

    /// `suite/invariant` names of everything that failed.
    pub fn failing(&self) -> Vec<String> {
        self.suites
            .iter()
            .flat_map(|s| {
                s.invariants
                    .iter()
                    .filter(|i| !i.passed())
                    .map(move |i| format!("{}/{}", s.name, i.name))
            })
            .collect()
    }
}

/// Accumulates the excess of each case over its tolerance.
struct Check {
    name: &'static str,
    cases: usize,
    failures: usize,
    worst: f64,
}

impl Check {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            cases: 0,
            failures: 0,
            worst: 0.0,
        }
    }

    /// Records a violation measure; the case fails when it is above `tolerance`
    /// or not a number.
    fn record(&mut self, violation: f64, tolerance: f64) {
        self.cases += 1;
        if violation.is_nan() || violation > tolerance {
            self.failures += 1;
        }
        if violation.is_nan() {
            self.worst = f64::NAN;
        } else if !self.worst.is_nan() {
            self.worst = self.worst.max(violation);
        }
    }

    fn record_result(&mut self, value: Result<f64>, tolerance: f64) {
        self.record(value.unwrap_or(f64::NAN), tolerance);
    }

    fn finish(self) -> InvariantResult {
        InvariantResult {
            name: self.name,
            cases: self.cases,
            failures: self.failures,
            worst: self.worst,
        }
    }
}

const QUBIT_PAIR: Dims = Dims::Bipartite(2, 2);

fn channel(options: &ValidateOptions, omega: f64, t: f64) -> Result<KrausChannel> {
    let ch = unruh_channel(omega, t)?;
    match options.kraus_perturbation {
        None => Ok(ch),
        Some(eps) => {
            let mut ops = ch.kraus_ops().to_vec();
            ops[0] = ops[0].scale(1.0 + eps);
            KrausChannel::new(ops)
        }
    }
}

fn hermitian_core(rng: &mut ChaCha8Rng) -> SuiteResult {
    let mut reconstruction = Check::new("eigen-reconstruction");
    let mut orthonormality = Check::new("eigen-orthonormality");
    let mut trace = Check::new("eigen-trace");
    for _ in 0..200 {
        let m = random_hermitian(rng, 4);
        match hermitian_eigensystem(&m) {
            Ok(es) => {
                reconstruction.record(es.reconstruct().frobenius_distance(&m), 1e-10);
                orthonormality.record(es.orthonormality_defect(), 1e-10);
                trace.record(
                    (es.eigenvalues.iter().sum::<f64>() - m.trace().re).abs(),
                    1e-10,
                );
            }
            Err(_) => {
                reconstruction.record(f64::NAN, 1e-10);
                orthonormality.record(f64::NAN, 1e-10);
                trace.record(f64::NAN, 1e-10);
            }
        }
    }

    let mut ptrace = Check::new("partial-trace-of-tensor");
    for _ in 0..50 {
        let a = random_hermitian(rng, 2);
        let b = random_hermitian(rng, 2);
        let ab = tensor_product(&a, &b);
        let value = partial_trace(&ab, Subsystem::A, (2, 2))
            .map(|reduced| reduced.max_abs_diff(&a.scale_complex(b.trace())));
        ptrace.record_result(value, 1e-12);
    }

    let mut assoc = Check::new("tensor-associativity");
    let ints = |k: i32| {
        ComplexMatrix::from_real(&[&[f64::from(k), f64::from(1 - k)], &[f64::from(2 * k), -3.0]])
            .unwrap()
    };
    for k in 0..5 {
        let (a, b, c) = (ints(k), ints(k + 1), ints(-k));
        let left = tensor_product(&tensor_product(&a, &b), &c);
        let right = tensor_product(&a, &tensor_product(&b, &c));
        assoc.record(if left == right { 0.0 } else { 1.0 }, 0.0);
    }

    SuiteResult {
        name: "hermitian-core",
        invariants: vec![
            reconstruction.finish(),
            orthonormality.finish(),
            trace.finish(),
            ptrace.finish(),
            assoc.finish(),
        ],
    }
}

fn quantum_state(rng: &mut ChaCha8Rng) -> SuiteResult {
    let mut constructors = Check::new("constructor-validity");
    for k in 0..=20 {
        let p = k as f64 / 20.0;
        for family in StateFamily::ALL {
            constructors.record(if family.state(p).is_ok() { 0.0 } else { 1.0 }, 0.0);
        }
    }

    let mut marginals = Check::new("bell-diagonal-marginals");
    let half = ComplexMatrix::identity(2).scale(0.5);
    for _ in 0..50 {
        let r = random_correlation_vector(rng);
        let value = bell_diagonal(r).and_then(|rho| {
            let a = rho.marginal(Subsystem::A)?.matrix().max_abs_diff(&half);
            let b = rho.marginal(Subsystem::B)?.matrix().max_abs_diff(&half);
            Ok(a.max(b))
        });
        marginals.record_result(value, 1e-12);
    }

    let mut unitary = Check::new("entropy-unitary-invariance");
    for _ in 0..50 {
        let rho = random_density_matrix(rng, QUBIT_PAIR);
        let u = random_unitary(rng, 4);
        let value = DensityMatrix::new(u.conjugate(rho.matrix()).hermitian_part(), QUBIT_PAIR)
            .map(|rotated| (von_neumann_entropy(&rotated) - von_neumann_entropy(&rho)).abs());
        unitary.record_result(value, 1e-9);
    }

    let mut mi = Check::new("mutual-information-nonnegative");
    let mut mi_product = Check::new("mutual-information-product-zero");
    for _ in 0..50 {
        let rho = random_density_matrix(rng, QUBIT_PAIR);
        mi.record_result(mutual_information(&rho).map(|v| -v), 1e-9);
        let a = random_density_matrix(rng, Dims::Single(2));
        let b = random_density_matrix(rng, Dims::Single(2));
        let value = DensityMatrix::product(&a, &b)
            .and_then(|ab| mutual_information(&ab))
            .map(f64::abs);
        mi_product.record_result(value, 1e-10);
    }

    let mut mixture = Check::new("bell-diagonal-mixture");
    for p in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let explicit = &BellState::PsiMinus.projector().scale(p)
            + &(&BellState::PsiPlus.projector() + &BellState::PhiPlus.projector())
                .scale((1.0 - p) / 2.0);
        mixture.record_result(
            bell_diagonal_from_p(p).map(|rho| rho.matrix().max_abs_diff(&explicit)),
            1e-12,
        );
    }

    SuiteResult {
        name: "quantum-state",
        invariants: vec![
            constructors.finish(),
            marginals.finish(),
            unitary.finish(),
            mi.finish(),
            mi_product.finish(),
            mixture.finish(),
        ],
    }
}

/// `(ω, T)` pairs shared by the channel checks.
pub const CHANNEL_OMEGAS: [f64; 3] = [0.5, 1.0, 2.0];
pub const CHANNEL_TEMPERATURES: [f64; 10] = [0.0, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 100.0, 1e6, 1e9];

fn dilation_channel(rng: &mut ChaCha8Rng, options: &ValidateOptions) -> SuiteResult {
    let mut completeness = Check::new("kraus-completeness");
    let mut choi = Check::new("choi-positivity");
    let mut purification = Check::new("purification-oracle");
    let mut ground = ComplexMatrix::zeros(2);
    ground[(0, 0)] = Complex64::new(1.0, 0.0);
    for omega in CHANNEL_OMEGAS {
        for t in CHANNEL_TEMPERATURES {
            match channel(options, omega, t) {
                Ok(ch) => {
                    completeness.record(ch.completeness_defect(), 1e-12);
                    choi.record_result(ch.choi_min_eigenvalue().map(|v| -v), 1e-9);
                    let value =
                        exterior_vacuum(omega, t).map(|ext| ext.max_abs_diff(&ch.apply(&ground)));
                    purification.record_result(value, 1e-12);
                }
                Err(_) => {
                    completeness.record(f64::NAN, 1e-12);
                    choi.record(f64::NAN, 1e-9);
                    purification.record(f64::NAN, 1e-12);
                }
            }
        }
    }

    let mut monotone = Check::new("monotone-decoherence");
    let plus = ComplexMatrix::from_real(&[&[0.5, 0.5], &[0.5, 0.5]]).unwrap();
    let mut previous = f64::INFINITY;
    for k in 1..=100 {
        let t = k as f64 / 10.0;
        match channel(options, 1.0, t) {
            Ok(ch) => {
                let coherence = ch.apply(&plus)[(0, 1)].norm();
                monotone.record(coherence - previous, 0.0);
                previous = coherence;
            }
            Err(_) => monotone.record(f64::NAN, 0.0),
        }
    }

    let mut data_processing = Check::new("data-processing");
    let mut alice = Check::new("alice-marginal-invariance");
    for i in 0..50 {
        let rho = random_density_matrix(rng, QUBIT_PAIR);
        let t = CHANNEL_TEMPERATURES[i % CHANNEL_TEMPERATURES.len()];
        let after = channel(options, 1.0, t).and_then(|ch| apply_to_memory(&ch, &rho));
        let (dp, am) = match after {
            Ok(after) => {
                let dp = mutual_information(&after)
                    .and_then(|i_after| Ok(i_after - mutual_information(&rho)?));
                let am = partial_trace(after.matrix(), Subsystem::A, (2, 2)).and_then(|a| {
                    Ok(a.max_abs_diff(&partial_trace(rho.matrix(), Subsystem::A, (2, 2))?))
                });
                (dp, am)
            }
            Err(e) => (Err(e), Ok(f64::NAN)),
        };
        data_processing.record_result(dp, 1e-9);
        alice.record_result(am, 1e-12);
    }

    SuiteResult {
        name: "dilation-channel",
        invariants: vec![
            completeness.finish(),
            choi.finish(),
            purification.finish(),
            monotone.finish(),
            data_processing.finish(),
            alice.finish(),
        ],
    }
}

fn measurement(rng: &mut ChaCha8Rng) -> SuiteResult {
    let paulis = [
        pauli(PauliAxis::X),
        pauli(PauliAxis::Y),
        pauli(PauliAxis::Z),
    ];
    let mut identity = Check::new("conditional-entropy-identity");
    let mut reconstruction = Check::new("mixture-reconstruction");
    let mut normalization = Check::new("outcome-normalization");
    let mut holevo_range = Check::new("holevo-range");
    let mut idempotent = Check::new("post-measurement-idempotence");
    for _ in 0..100 {
        let rho = random_density_matrix(rng, QUBIT_PAIR);
        for q in &paulis {
            // S(Q|B) two ways: post-measurement entropy vs H(Q) − I(Q;B)
            let value = (|| {
                let direct = measured_conditional_entropy(&rho, q)?;
                let via_holevo = measured_entropy(&rho, q)? - holevo_quantity(&rho, q)?;
                Ok((direct - via_holevo).abs())
            })();
            identity.record_result(value, 1e-9);

            let value = (|| {
                let post = post_measurement_state(&rho, q)?;
                let ensemble = outcome_ensemble(&rho, q)?;
                let bob = partial_trace(post.matrix(), Subsystem::B, (2, 2))?;
                normalization.record(
                    (ensemble.probabilities().iter().sum::<f64>() - 1.0).abs(),
                    1e-10,
                );
                let twice = post_measurement_state(&post, q)?;
                idempotent.record(twice.matrix().max_abs_diff(post.matrix()), 1e-12);
                Ok(bob.max_abs_diff(&ensemble.average_state()))
            })();
            reconstruction.record_result(value, 1e-12);

            let value = (|| {
                let chi = holevo_quantity(&rho, q)?;
                let s_b = von_neumann_entropy(&rho.marginal(Subsystem::B)?);
                Ok((-chi).max(chi - s_b))
            })();
            holevo_range.record_result(value, 1e-9);
        }
    }
    SuiteResult {
        name: "measurement",
        invariants: vec![
            identity.finish(),
            reconstruction.finish(),
            normalization.finish(),
            holevo_range.finish(),
            idempotent.finish(),
        ],
    }
}

/// Temperatures of the ordering grid.
pub const ORDERING_TEMPERATURES: [f64; 7] = [0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 100.0];

fn uncertainty_bounds(rng: &mut ChaCha8Rng, options: &ValidateOptions) -> SuiteResult {
    let (x, z) = (pauli(PauliAxis::X), pauli(PauliAxis::Z));
    let mut ordering = Check::new("bound-ordering");
    let mut composition = Check::new("report-composition");
    for family in StateFamily::ALL {
        for k in 0..=10 {
            let p = k as f64 / 10.0;
            for t in ORDERING_TEMPERATURES {
                let report =
                    (|| full_report(&family.state(p)?, Some(&channel(options, 1.0, t)?), &x, &z))();
                match report {
                    Ok(r) => {
                        ordering.record(
                            (r.adabi_bound - r.lhs).max(r.berta_bound - r.adabi_bound),
                            1e-9,
                        );
                        let exact = r.adabi_bound == r.mu_bound + r.s_cond_ab + r.delta.max(0.0)
                            && r.qsk_lower == r.mu_bound + r.delta.max(0.0) - r.lhs;
                        composition.record(if exact { 0.0 } else { 1.0 }, 0.0);
                    }
                    Err(_) => {
                        ordering.record(f64::NAN, 1e-9);
                        composition.record(f64::NAN, 0.0);
                    }
                }
            }
        }
    }

    let mut product = Check::new("product-state-no-memory");
    for _ in 0..30 {
        let a = random_density_matrix(rng, Dims::Single(2));
        let b = random_density_matrix(rng, Dims::Single(2));
        let value = (|| {
            let ab = DensityMatrix::product(&a, &b)?;
            let report = full_report(&ab, None, &x, &z)?;
            let eur = eur_no_memory(&a, &x, &z)?;
            // no correlations: S(Q|B) = H(Q), δ = 0
            let qsk = report.mu_bound - eur.lhs;
            Ok((report.qsk_lower - qsk)
                .abs()
                .max((report.no_memory_bound - eur.bound).abs())
                .max(eur.bound - eur.lhs))
        })();
        product.record_result(value, 1e-9);
    }

    let mut endpoints = Check::new("hawking-invariant-endpoints");
    for state in [werner(0.0), x_state(0.0)] {
        let value = (|| {
            let state = state?;
            let cold = full_report(&state, Some(&channel(options, 1.0, 0.0)?), &x, &z)?;
            let mut worst = 0.0_f64;
            for t in [1.0, 10.0] {
                let hot = full_report(&state, Some(&channel(options, 1.0, t)?), &x, &z)?;
                worst = worst.max(cold.max_abs_diff(&hot));
            }
            Ok(worst)
        })();
        endpoints.record_result(value, 1e-10);
    }

    SuiteResult {
        name: "uncertainty-bounds",
        invariants: vec![
            ordering.finish(),
            composition.finish(),
            product.finish(),
            endpoints.finish(),
        ],
    }
}

/// Runs every suite. Failures are reported in the summary, never as `Err`.
pub fn run(options: &ValidateOptions) -> ValidationSummary {
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    ValidationSummary {
        suites: vec![
            hermitian_core(&mut rng),
            quantum_state(&mut rng),
            dilation_channel(&mut rng, options),
            measurement(&mut rng),
            uncertainty_bounds(&mut rng, options),
        ],
    }
}
