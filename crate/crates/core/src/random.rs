//! Seeded random operators for property checks.

use num_complex::Complex64;
use rand::Rng;

use crate::linalg::{hermitian_eigensystem, ComplexMatrix};
use crate::state::{CorrelationVector, DensityMatrix, Dims};

fn gaussian_pair<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    // Box–Muller
    let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
    let u2: f64 = rng.gen();
    let radius = (-2.0 * u1.ln()).sqrt();
    let angle = std::f64::consts::TAU * u2;
    Complex64::new(radius * angle.cos(), radius * angle.sin())
}

/// Hermitian matrix with entries uniform in `[-1, 1]` (real and imaginary parts).
pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(dim);
    for i in 0..dim {
        m[(i, i)] = Complex64::new(rng.gen_range(-1.0..1.0), 0.0);
        for j in (i + 1)..dim {
            let z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    m
}

/// `G G† / tr(G G†)` for a complex Ginibre matrix `G`.
pub fn random_density_matrix<R: Rng + ?Sized>(rng: &mut R, dims: Dims) -> DensityMatrix {
    let d = dims.total();
    let g = ComplexMatrix::from_entries((0..d * d).map(|_| gaussian_pair(rng)).collect())
        .expect("square by construction");
    let m = &g * &g.adjoint();
    let trace = m.trace().re;
    DensityMatrix::new(m.scale(1.0 / trace), dims).expect("Ginibre states are valid")
}

/// `exp(iH)` for a random Hermitian `H`, built from its eigensystem.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    let h = random_hermitian(rng, dim).scale(std::f64::consts::PI);
    let es = hermitian_eigensystem(&h).expect("random Hermitian matrices diagonalize");
    es.map_spectrum(|lambda| Complex64::new(0.0, lambda).exp())
}

/// Uniform convex combination of the four tetrahedron vertices.
pub fn random_correlation_vector<R: Rng + ?Sized>(rng: &mut R) -> CorrelationVector {
    let vertices = [
        [-1.0, -1.0, -1.0],
        [-1.0, 1.0, 1.0],
        [1.0, -1.0, 1.0],
        [1.0, 1.0, -1.0],
    ];
    let mut weights: Vec<f64> = (0..4)
        .map(|_| -rng.gen_range(f64::EPSILON..1.0).ln())
        .collect();
    let total: f64 = weights.iter().sum();
    weights.iter_mut().for_each(|w| *w /= total);
    let mut r = [0.0; 3];
    for (w, v) in weights.iter().zip(vertices) {
        for k in 0..3 {
            r[k] += w * v[k];
        }
    }
    CorrelationVector::new(r[0], r[1], r[2])
}
