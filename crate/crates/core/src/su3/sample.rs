use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::{Matrix3C, SpecialUnitary3, Su3Algebra};

/// Haar-distributed element of SU(3).
///
/// Gram–Schmidt on a complex Ginibre matrix gives a Haar unitary (the implied
/// R factor has positive diagonal); dividing the last column by the
/// determinant pushes it forward to the Haar measure on SU(3).
pub fn haar_random<R: Rng + ?Sized>(rng: &mut R) -> SpecialUnitary3 {
    let mut m = Matrix3C::from_fn(|_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re, im)
    });
    for j in 0..3 {
        for k in 0..j {
            let proj = m.column(k).dotc(&m.column(j));
            let ck = m.column(k).into_owned();
            let mut cj = m.column_mut(j);
            cj -= ck * proj;
        }
        let n = m.column(j).norm();
        let mut cj = m.column_mut(j);
        cj /= Complex64::new(n, 0.0);
    }
    let det = m.determinant();
    let mut last = m.column_mut(2);
    last /= det;
    SpecialUnitary3::from_matrix_unchecked(m)
}

/// Gaussian element of su(3) with i.i.d. `N(0, scale²)` coordinates.
pub fn random_algebra<R: Rng + ?Sized>(rng: &mut R, scale: f64) -> Su3Algebra {
    let mut c = [0.0; 8];
    for v in c.iter_mut() {
        let g: f64 = rng.sample(StandardNormal);
        *v = g * scale;
    }
    Su3Algebra::from_coords(&c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::su3::UNITARY_TOL;

    #[test]
    fn samples_are_special_unitary() {
        let mut rng = crate::rng::stream(21);
        for _ in 0..1000 {
            let u = haar_random(&mut rng);
            assert!(SpecialUnitary3::new(*u.matrix()).is_ok());
            assert!(u.unitarity_defect() <= UNITARY_TOL);
        }
    }

    // Schur orthogonality: E[Tr] = 0 and E[|Tr|²] = 1 for the standard representation.
    #[test]
    fn trace_moments() {
        let mut rng = crate::rng::stream(22);
        let n = 100_000;
        let mut mean = Complex64::new(0.0, 0.0);
        let mut second = 0.0;
        for _ in 0..n {
            let t = haar_random(&mut rng).trace();
            mean += t;
            second += t.norm_sqr();
        }
        mean /= n as f64;
        second /= n as f64;
        assert!(mean.norm() <= 0.02, "mean {mean}");
        assert!((second - 1.0).abs() <= 0.02, "second moment {second}");
    }

    // Left-invariance smoke test: E[|Tr(gU)|²] = 1 as well for fixed g.
    #[test]
    fn left_translate_moments() {
        let mut rng = crate::rng::stream(23);
        let g = haar_random(&mut rng);
        let n = 100_000;
        let mut second = 0.0;
        let mut mean = Complex64::new(0.0, 0.0);
        for _ in 0..n {
            let t = (g * haar_random(&mut rng)).trace();
            second += t.norm_sqr();
            mean += t;
        }
        assert!((second / n as f64 - 1.0).abs() <= 0.02);
        assert!((mean / n as f64).norm() <= 0.02);
    }
}
