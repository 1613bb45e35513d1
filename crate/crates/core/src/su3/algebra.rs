use std::sync::OnceLock;

use nalgebra::SymmetricEigen;
use num_complex::Complex64;

use super::{max_abs, trace, Matrix3C, SpecialUnitary3, Su3Algebra, UNITARY_TOL};
use crate::error::{Error, Result};

/// Real 8×8 matrix of a linear map on su(3) in the basis [`algebra_basis`].
pub type AdMatrix = nalgebra::SMatrix<f64, 8, 8>;

/// Orthonormal basis of su(3) under `−⟨X, Y⟩ = −Tr(XY)`: `i·λ_k/√2` for the
/// Gell-Mann matrices `λ_k`.
pub fn algebra_basis() -> &'static [Su3Algebra; 8] {
    static BASIS: OnceLock<[Su3Algebra; 8]> = OnceLock::new();
    BASIS.get_or_init(|| {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let re = Complex64::new(0.0, s);
        let im = Complex64::new(s, 0.0);
        let mut out = [Su3Algebra::zero(); 8];
        let offdiag = [(0, 1), (0, 2), (1, 2)];
        let mut k = 0;
        for &(i, j) in &offdiag {
            // i·(E_ij + E_ji)/√2 and i·(−i E_ij + i E_ji)/√2
            let mut sym = Matrix3C::zeros();
            sym[(i, j)] = re;
            sym[(j, i)] = re;
            let mut asym = Matrix3C::zeros();
            asym[(i, j)] = im;
            asym[(j, i)] = -im;
            out[k] = Su3Algebra(sym);
            out[k + 1] = Su3Algebra(asym);
            k += 2;
        }
        out[6] = Su3Algebra::diagonal([s, -s, 0.0]);
        let d = s / 3f64.sqrt();
        out[7] = Su3Algebra(Matrix3C::from_diagonal(&nalgebra::Vector3::new(
            Complex64::new(0.0, d),
            Complex64::new(0.0, d),
            Complex64::new(0.0, -2.0 * d),
        )));
        out
    })
}

pub(super) fn coords(x: &Matrix3C) -> [f64; 8] {
    let basis = algebra_basis();
    let mut out = [0.0; 8];
    for (k, e) in basis.iter().enumerate() {
        // −Tr(X E_k) = −Σ X_ij (E_k)_ji
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..3 {
            for j in 0..3 {
                let ek = e.0[(j, i)];
                if ek.re != 0.0 || ek.im != 0.0 {
                    acc += x[(i, j)] * ek;
                }
            }
        }
        out[k] = -acc.re;
    }
    out
}

pub(super) fn from_coords(c: &[f64; 8]) -> Su3Algebra {
    let basis = algebra_basis();
    let mut m = Matrix3C::zeros();
    for (ck, e) in c.iter().zip(basis.iter()) {
        m += e.0 * Complex64::new(*ck, 0.0);
    }
    Su3Algebra(m)
}

/// `⟨X, Y⟩ = Tr(XY)`, real and negative definite on su(3).
pub fn inner_product(x: &Su3Algebra, y: &Su3Algebra) -> f64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..3 {
        for j in 0..3 {
            acc += x.0[(i, j)] * y.0[(j, i)];
        }
    }
    debug_assert!(acc.im.abs() <= 1e-9 * (1.0 + acc.re.abs()));
    acc.re
}

/// `Ad(g)X = g X g⁻¹`.
pub fn adjoint_action(g: &SpecialUnitary3, x: &Su3Algebra) -> Su3Algebra {
    Su3Algebra(g.0 * x.0 * g.0.adjoint())
}

/// Matrix of `Ad(g)` on the 8-dimensional real representation.
pub fn adjoint_matrix(g: &SpecialUnitary3) -> AdMatrix {
    let mut out = AdMatrix::zeros();
    for (k, e) in algebra_basis().iter().enumerate() {
        let image = coords(&(g.0 * e.0 * g.0.adjoint()));
        for (row, v) in image.iter().enumerate() {
            out[(row, k)] = *v;
        }
    }
    out
}

/// Exponential of an su(3) element by spectral decomposition of the
/// Hermitian matrix `−iX`.
pub fn exp_algebra(x: &Su3Algebra) -> Result<SpecialUnitary3> {
    if x.0.iter().all(|z| z.re == 0.0 && z.im == 0.0) {
        return Ok(SpecialUnitary3::identity());
    }
    let defect = max_abs(&(x.0 + x.0.adjoint())).max(trace(&x.0).norm());
    if !(defect <= UNITARY_TOL) {
        return Err(Error::InvalidAlgebraElement { defect });
    }
    // Hermitian part of −iX; symmetrized so the solver sees an exact Hermitian input.
    let h = x.0 * Complex64::new(0.0, -1.0);
    let h = (h + h.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = SymmetricEigen::try_new(h, f64::EPSILON, 200)
        .ok_or(Error::InvalidAlgebraElement { defect })?;
    let mean = eig.eigenvalues.sum() / 3.0;
    let v = eig.eigenvectors;
    let mut scaled = v;
    for k in 0..3 {
        let phase = Complex64::from_polar(1.0, eig.eigenvalues[k] - mean);
        for i in 0..3 {
            scaled[(i, k)] *= phase;
        }
    }
    Ok(SpecialUnitary3(scaled * v.adjoint()))
}
