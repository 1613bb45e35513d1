//! Spectral decomposition of 3×3 special unitary matrices.
//!
//! Eigenvalues come from the closed-form roots of the characteristic
//! polynomial `λ³ − zλ² + z̄λ − 1` (`z` the trace). Eigenvectors come from a
//! Hermitian eigensolve of `(e^{−iγ}U + e^{iγ}U†)/2`, whose eigenvalues are
//! `cos(θ_k − γ)`; `γ` is picked from the cubic roots so that distinct
//! eigenvalues of `U` stay separated after the projection. Eigenvalues are
//! then refined as Rayleigh quotients.

use nalgebra::SymmetricEigen;
use num_complex::Complex64;
use rand::Rng;

use super::{max_abs, Matrix3C, SpecialUnitary3, REGULARITY_GAP};
use crate::error::{Error, Result};

const TAU: f64 = 2.0 * std::f64::consts::PI;

/// Roots of `λ³ − zλ² + z̄λ − 1` by Cardano's formula with Newton polishing.
///
/// No projection onto the unit circle is applied; for `z` in the trace domain
/// the roots have unit modulus up to roundoff.
pub fn unit_cubic_roots(z: Complex64) -> [Complex64; 3] {
    let third = z / 3.0;
    // depressed cubic w³ + p w + q with λ = w + z/3
    let p = z.conj() - z * z / 3.0;
    let q = -2.0 * z * z * z / 27.0 + z * z.conj() / 3.0 - 1.0;
    let disc = (q * q / 4.0 + p * p * p / 27.0).sqrt();
    let c1 = -q / 2.0 + disc;
    let c2 = -q / 2.0 - disc;
    let u3 = if c1.norm() >= c2.norm() { c1 } else { c2 };
    let w = omega();
    let mut roots = if u3.norm() == 0.0 {
        [third; 3]
    } else {
        let u = u3.powf(1.0 / 3.0);
        let v = -p / (3.0 * u);
        let mut r = [Complex64::new(0.0, 0.0); 3];
        let mut uk = u;
        let mut vk = v;
        for root in r.iter_mut() {
            *root = uk + vk + third;
            uk *= w;
            vk *= w.conj();
        }
        r
    };
    for root in roots.iter_mut() {
        for _ in 0..3 {
            let val = char_poly(z, *root);
            let der = 3.0 * *root * *root - 2.0 * z * *root + z.conj();
            if der.norm() < 1e-300 {
                break;
            }
            let next = *root - val / der;
            if char_poly(z, next).norm() < val.norm() {
                *root = next;
            } else {
                break;
            }
        }
    }
    roots
}

fn char_poly(z: Complex64, l: Complex64) -> Complex64 {
    ((l - z) * l + z.conj()) * l - 1.0
}

fn omega() -> Complex64 {
    Complex64::from_polar(1.0, TAU / 3.0)
}

/// Distance on the circle between two unit complex numbers, in radians.
pub fn circle_gap(x: Complex64, y: Complex64) -> f64 {
    (x * y.conj()).arg().abs()
}

fn turns(z: Complex64) -> f64 {
    let t = (z.arg() / TAU).rem_euclid(1.0);
    if t >= 1.0 {
        0.0
    } else {
        t
    }
}

/// Eigen-decomposition `U = V · diag(λ) · V†` of a special unitary matrix.
#[derive(Clone, Copy, Debug)]
pub struct UnitaryEigen {
    /// Eigenvalue arguments divided by 2π, in `[0, 1)`, ascending.
    pub angles: [f64; 3],
    /// Unit-modulus eigenvalues in the order of `angles`.
    pub eigenvalues: [Complex64; 3],
    /// Unitary matrix whose columns are the matching eigenvectors.
    pub vectors: Matrix3C,
}

impl UnitaryEigen {
    /// Smallest pairwise circle distance between eigenvalues (radians).
    pub fn min_gap(&self) -> f64 {
        let e = &self.eigenvalues;
        circle_gap(e[0], e[1])
            .min(circle_gap(e[1], e[2]))
            .min(circle_gap(e[0], e[2]))
    }

    pub fn reconstruct(&self) -> Matrix3C {
        let mut scaled = self.vectors;
        for k in 0..3 {
            for i in 0..3 {
                scaled[(i, k)] *= self.eigenvalues[k];
            }
        }
        scaled * self.vectors.adjoint()
    }
}

/// Spectral decomposition of `u`; total on SU(3), degenerate spectra included.
pub fn unitary_eigen(u: &SpecialUnitary3) -> UnitaryEigen {
    let m = u.matrix();
    let roots = unit_cubic_roots(u.trace());
    let mut best = (f64::NEG_INFINITY, 0.0);
    for k in 0..12 {
        let gamma = 0.1234 + k as f64 * std::f64::consts::PI / 12.0;
        let rot = Complex64::from_polar(1.0, -gamma);
        let mut score = f64::INFINITY;
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            if circle_gap(roots[i], roots[j]) > 1e-6 {
                score = score.min(((roots[i] * rot).re - (roots[j] * rot).re).abs());
            }
        }
        if score > best.0 {
            best = (score, gamma);
        }
    }
    let rot = Complex64::from_polar(1.0, -best.1);
    let h = (m * rot + m.adjoint() * rot.conj()) * Complex64::new(0.5, 0.0);
    let h = (h + h.adjoint()) * Complex64::new(0.5, 0.0);
    let vectors = SymmetricEigen::try_new(h, f64::EPSILON, 500)
        .map(|e| e.eigenvectors)
        .unwrap_or_else(Matrix3C::identity);
    let rayleigh = vectors.adjoint() * m * vectors;
    let mut items: Vec<(f64, Complex64, usize)> = (0..3)
        .map(|k| {
            let l = rayleigh[(k, k)];
            let l = if l.norm() > 0.0 { l / l.norm() } else { roots[k] };
            (turns(l), l, k)
        })
        .collect();
    items.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut sorted = Matrix3C::zeros();
    for (col, item) in items.iter().enumerate() {
        sorted.set_column(col, &vectors.column(item.2));
    }
    UnitaryEigen {
        angles: [items[0].0, items[1].0, items[2].0],
        eigenvalues: [items[0].1, items[1].1, items[2].1],
        vectors: sorted,
    }
}

/// Maximal torus through a regular element, in diagonalizing coordinates.
#[derive(Clone, Copy, Debug)]
pub struct TorusFrame {
    pub base: SpecialUnitary3,
    pub eigenvectors: Matrix3C,
    /// Eigenvalue arguments of `base` over 2π, ascending in `[0, 1)`.
    pub angles: [f64; 3],
}

impl TorusFrame {
    /// `V · diag(e^{2πiφ₁}, e^{2πiφ₂}, e^{−2πi(φ₁+φ₂)}) · V†`, an element of the torus.
    pub fn element(&self, phases: [f64; 2]) -> SpecialUnitary3 {
        let d = [
            Complex64::from_polar(1.0, TAU * phases[0]),
            Complex64::from_polar(1.0, TAU * phases[1]),
            Complex64::from_polar(1.0, -TAU * (phases[0] + phases[1])),
        ];
        let mut scaled = self.eigenvectors;
        for k in 0..3 {
            for i in 0..3 {
                scaled[(i, k)] *= d[k];
            }
        }
        SpecialUnitary3::from_matrix_unchecked(scaled * self.eigenvectors.adjoint())
    }

    /// Haar-uniform element of the torus.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> SpecialUnitary3 {
        let phases = [rng.random::<f64>(), rng.random::<f64>()];
        self.element(phases)
    }

    /// `‖base − V·diag(e^{2πiθ})·V†‖_max`.
    pub fn reconstruction_residual(&self) -> f64 {
        let mut scaled = self.eigenvectors;
        for k in 0..3 {
            let l = Complex64::from_polar(1.0, TAU * self.angles[k]);
            for i in 0..3 {
                scaled[(i, k)] *= l;
            }
        }
        max_abs(&(self.base.matrix() - scaled * self.eigenvectors.adjoint()))
    }
}

/// Maximal torus `K_a` of a regular element `a`.
pub fn torus_frame(a: &SpecialUnitary3) -> Result<TorusFrame> {
    let eig = unitary_eigen(a);
    let gap = eig.min_gap();
    if !(gap >= REGULARITY_GAP) {
        return Err(Error::NonRegular {
            gap,
            threshold: REGULARITY_GAP,
        });
    }
    Ok(TorusFrame {
        base: *a,
        eigenvectors: eig.vectors,
        angles: eig.angles,
    })
}
