//! Fibers of the commutator map `κ(a, b) = aba⁻¹b⁻¹` on SU(3) × SU(3).

use nalgebra::{SMatrix, SVD};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::su3::{
    adjoint_matrix, max_abs, omega, renormalize, unitary_eigen, AdMatrix, Matrix3C,
    SpecialUnitary3, Su3Algebra, RENORMALIZE_EVERY,
};

/// Tolerance on `‖κ(a, b) − c‖_max` for a point to count as on the fiber over `c`.
pub const FIBER_TOL: f64 = 1e-9;

/// Singular values of `Dκ` below this fraction of `max(σ_max, 1)` count as zero.
pub const RANK_THRESHOLD: f64 = 1e-8;

/// Singular values below this count as nullspace directions of `Ad(g) − I`.
pub const NULLSPACE_THRESHOLD: f64 = 1e-8;

/// A representation `α ↦ a, β ↦ b` together with its fiber label `c = κ(a, b)`.
///
/// The point also counts group multiplications applied since the last
/// renormalization; [`RepPoint::maintain`] renormalizes and re-validates the
/// fiber every [`RENORMALIZE_EVERY`] of them.
#[derive(Clone, Copy, Debug)]
pub struct RepPoint {
    a: SpecialUnitary3,
    b: SpecialUnitary3,
    c: SpecialUnitary3,
    pending: usize,
}

impl RepPoint {
    /// The point `(a, b)` on its own fiber.
    pub fn new(a: SpecialUnitary3, b: SpecialUnitary3) -> Self {
        let c = commutator(&a, &b);
        Self {
            a,
            b,
            c,
            pending: 0,
        }
    }

    /// The point `(a, b)` labelled with fiber `c`; fails if `κ(a, b)` is not `c`.
    pub fn on_fiber(a: SpecialUnitary3, b: SpecialUnitary3, c: SpecialUnitary3) -> Result<Self> {
        let p = Self {
            a,
            b,
            c,
            pending: 0,
        };
        p.check()?;
        Ok(p)
    }

    pub fn a(&self) -> &SpecialUnitary3 {
        &self.a
    }

    pub fn b(&self) -> &SpecialUnitary3 {
        &self.b
    }

    /// The fiber label.
    pub fn c(&self) -> &SpecialUnitary3 {
        &self.c
    }

    /// `‖κ(a, b) − c‖_max`.
    pub fn residual(&self) -> f64 {
        raw_commutator(&self.a, &self.b).distance(&self.c)
    }

    pub fn check(&self) -> Result<()> {
        let residual = self.residual();
        if residual <= FIBER_TOL {
            Ok(())
        } else {
            Err(Error::FiberDrift {
                residual,
                tolerance: FIBER_TOL,
            })
        }
    }

    /// `(g a g⁻¹, g b g⁻¹)` on the fiber over `g c g⁻¹`.
    pub fn conjugated_by(&self, g: &SpecialUnitary3) -> Self {
        Self {
            a: self.a.conjugated_by(g),
            b: self.b.conjugated_by(g),
            c: self.c.conjugated_by(g),
            pending: self.pending,
        }
    }

    /// Same fiber label, new holonomies, after `mults` more group multiplications.
    pub(crate) fn moved(&self, a: SpecialUnitary3, b: SpecialUnitary3, mults: usize) -> Self {
        Self {
            a,
            b,
            c: self.c,
            pending: self.pending + mults,
        }
    }

    /// Projects `a, b` back onto SU(3) and re-validates the fiber once enough
    /// multiplications have accumulated.
    ///
    /// The projection runs on every call: twist words add the unitarity
    /// defects of `a` and `b` into each other, so without it the defect grows
    /// exponentially in the word length.
    pub fn maintain(self) -> Result<Self> {
        if self.pending < RENORMALIZE_EVERY {
            return Ok(Self {
                a: renormalize(self.a.matrix())?,
                b: renormalize(self.b.matrix())?,
                ..self
            });
        }
        self.renormalized()
    }

    /// Unconditional renormalization and fiber check.
    pub fn renormalized(self) -> Result<Self> {
        let p = Self {
            a: renormalize(self.a.matrix())?,
            b: renormalize(self.b.matrix())?,
            c: self.c,
            pending: 0,
        };
        p.check()?;
        Ok(p)
    }
}

fn raw_commutator(a: &SpecialUnitary3, b: &SpecialUnitary3) -> SpecialUnitary3 {
    let (am, bm) = (a.matrix(), b.matrix());
    SpecialUnitary3::from_matrix_unchecked(am * bm * am.adjoint() * bm.adjoint())
}

/// `κ(a, b) = a b a⁻¹ b⁻¹`, inverses by conjugate transpose, renormalized.
pub fn commutator(a: &SpecialUnitary3, b: &SpecialUnitary3) -> SpecialUnitary3 {
    let raw = raw_commutator(a, b);
    // products of group elements stay far inside the drift guard
    renormalize(raw.matrix()).unwrap_or(raw)
}

/// Matrix of `Dκ_{(a,b)}: su(3) ⊕ su(3) → su(3)` in the orthonormal basis of su(3).
#[derive(Clone, Copy, Debug)]
pub struct DKappa {
    pub matrix: SMatrix<f64, 8, 16>,
}

impl DKappa {
    pub fn singular_values(&self) -> [f64; 8] {
        let svd = SVD::new(self.matrix, false, false);
        let mut s = [0.0; 8];
        for (k, v) in svd.singular_values.iter().enumerate() {
            s[k] = *v;
        }
        s.sort_by(|x, y| y.total_cmp(x));
        s
    }

    pub fn rank(&self) -> usize {
        let s = self.singular_values();
        let cutoff = RANK_THRESHOLD * s[0].max(1.0);
        s.iter().filter(|&&v| v > cutoff).count()
    }
}

/// `Dκ(X, Y) = Ad(ba)((Ad(b⁻¹) − I)X + (I − Ad(a⁻¹))Y)`.
pub fn d_kappa(p: &RepPoint) -> DKappa {
    let ad_ba = adjoint_matrix(&(p.b * p.a));
    let id = AdMatrix::identity();
    let left = ad_ba * (adjoint_matrix(&p.b.inverse()) - id);
    let right = ad_ba * (id - adjoint_matrix(&p.a.inverse()));
    let mut matrix = SMatrix::<f64, 8, 16>::zeros();
    matrix.fixed_view_mut::<8, 8>(0, 0).copy_from(&left);
    matrix.fixed_view_mut::<8, 8>(0, 8).copy_from(&right);
    DKappa { matrix }
}

/// Orthonormal basis of the centralizer algebra `𝔨_g = Fix(Ad(g))`.
#[derive(Clone, Debug)]
pub struct CentralizerBasis {
    pub element: SpecialUnitary3,
    pub basis: Vec<Su3Algebra>,
}

impl CentralizerBasis {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Nullspace of `Ad(g) − I` on the real 8-dimensional representation.
pub fn centralizer_algebra(g: &SpecialUnitary3) -> CentralizerBasis {
    let m = adjoint_matrix(g) - AdMatrix::identity();
    let svd = SVD::new(m, false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let basis = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, s)| **s <= NULLSPACE_THRESHOLD)
        .map(|(k, _)| {
            let row = v_t.row(k);
            let mut c = [0.0; 8];
            for (i, v) in row.iter().enumerate() {
                c[i] = *v;
            }
            Su3Algebra::from_coords(&c)
        })
        .collect();
    CentralizerBasis {
        element: *g,
        basis,
    }
}

/// `dim(𝔨_a ∩ 𝔨_b)`, the joint nullspace of `Ad(a) − I` and `Ad(b) − I`.
pub fn centralizer_intersection(a: &SpecialUnitary3, b: &SpecialUnitary3) -> usize {
    let id = AdMatrix::identity();
    let mut stacked = SMatrix::<f64, 16, 8>::zeros();
    stacked
        .fixed_view_mut::<8, 8>(0, 0)
        .copy_from(&(adjoint_matrix(a) - id));
    stacked
        .fixed_view_mut::<8, 8>(8, 0)
        .copy_from(&(adjoint_matrix(b) - id));
    let svd = SVD::new(stacked, false, false);
    svd.singular_values
        .iter()
        .filter(|s| **s <= NULLSPACE_THRESHOLD)
        .count()
}

/// A point of the fiber over `c`.
///
/// Diagonalizes `c = u·diag(c₁, c₂, c₃)·u†` (eigenvalues ordered by argument in
/// `[0, 2π)`), takes the cyclic permutation `a′` with `a′e₂ = e₁, a′e₃ = e₂,
/// a′e₁ = e₃` and `b′ = diag(b₁, c₁b₁, c₁c₂b₁)` with `b₁` the principal cube root
/// of `c₃/c₁`, for which `κ(a′, b′) = diag(b₂/b₁, b₃/b₂, b₁/b₃) = diag(c)`, and
/// returns `(u a′ u†, u b′ u†)`.
pub fn base_point(c: &SpecialUnitary3) -> RepPoint {
    let eig = unitary_eigen(c);
    let [c1, c2, c3] = eig.eigenvalues;
    let b1 = (c3 / c1).powf(1.0 / 3.0);
    let b1 = b1 / b1.norm();
    let diag = [b1, c1 * b1, c1 * c2 * b1];
    let b_prime =
        SpecialUnitary3::from_matrix_unchecked(Matrix3C::from_diagonal(&diag.into()));
    let u = eig.vectors;
    let conj = |m: &SpecialUnitary3| {
        SpecialUnitary3::from_matrix_unchecked(u * m.matrix() * u.adjoint())
    };
    let a = conj(&SpecialUnitary3::cyclic_permutation());
    let b = conj(&b_prime);
    RepPoint {
        a,
        b,
        c: *c,
        pending: 0,
    }
}

/// `b₀`: the permutation matrix with `b₀e₁ = e₂, b₀e₂ = e₃, b₀e₃ = e₁`.
pub fn b0() -> SpecialUnitary3 {
    SpecialUnitary3::cyclic_permutation().inverse()
}

/// `a₀ = diag(1, ω, ω²)`.
pub fn a0() -> SpecialUnitary3 {
    let w = omega();
    SpecialUnitary3::from_matrix_unchecked(Matrix3C::from_diagonal(
        &[Complex64::new(1.0, 0.0), w, w * w].into(),
    ))
}

/// The pair `(a₀, b₀^k)` on the central fiber `κ = ω^k·Id`, `k ∈ {1, 2}`.
///
/// `k = 0` is the abelian fiber, which has no single base point; use [`abelian_point`].
pub fn central_fiber_point(k: u32) -> Result<RepPoint> {
    let k = k % 3;
    if k == 0 {
        return Err(Error::AbelianFiberRequested);
    }
    let b = b0().powu(k);
    Ok(RepPoint {
        a: a0(),
        b,
        c: SpecialUnitary3::central(k),
        pending: 0,
    })
}

/// A commuting pair in the diagonal torus, on the fiber over the identity.
pub fn abelian_point(angles_a: [f64; 2], angles_b: [f64; 2]) -> RepPoint {
    RepPoint {
        a: SpecialUnitary3::torus(angles_a),
        b: SpecialUnitary3::torus(angles_b),
        c: SpecialUnitary3::identity(),
        pending: 0,
    }
}

/// Max-entry distance between two matrices; convenience for fiber checks.
pub fn matrix_distance(x: &Matrix3C, y: &Matrix3C) -> f64 {
    max_abs(&(x - y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::su3::{adjoint_action, haar_random};

    fn id() -> SpecialUnitary3 {
        SpecialUnitary3::identity()
    }

    #[test]
    fn commutator_examples() {
        assert!(commutator(&id(), &id()).distance(&id()) == 0.0);
        let p = central_fiber_point(1).unwrap();
        let k = commutator(p.a(), p.b());
        assert!(k.distance(&SpecialUnitary3::central(1)) <= 1e-14);
    }

    // Direct permutation bookkeeping: a e₂ = e₁, a e₃ = e₂, a e₁ = e₃, so
    // (a b a⁻¹)_jj = b_{σ⁻¹(j)} and κ(a, b) = diag(b₂/b₁, b₃/b₂, b₁/b₃).
    #[test]
    fn commutator_of_permutation_and_diagonal() {
        let b = SpecialUnitary3::torus([0.1, 0.27]);
        let d = [b.matrix()[(0, 0)], b.matrix()[(1, 1)], b.matrix()[(2, 2)]];
        let k = commutator(&SpecialUnitary3::cyclic_permutation(), &b);
        let expected = [d[1] / d[0], d[2] / d[1], d[0] / d[2]];
        for j in 0..3 {
            assert!((k.matrix()[(j, j)] - expected[j]).norm() <= 1e-15);
        }
        assert!(max_abs(&(k.matrix() - Matrix3C::from_diagonal(&expected.into()))) <= 1e-15);
    }

    #[test]
    fn d_kappa_rank_at_identity() {
        let p = RepPoint::new(id(), id());
        assert_eq!(d_kappa(&p).rank(), 0);
    }

    #[test]
    fn d_kappa_rank_at_permutation_pair() {
        let b = SpecialUnitary3::torus([0.1, 0.27]);
        let p = RepPoint::new(SpecialUnitary3::cyclic_permutation(), b);
        assert_eq!(d_kappa(&p).rank(), 8);
        // b₁ = b₂ ≠ b₃ case is still submersive
        let b = SpecialUnitary3::torus([0.2, 0.2]);
        let p = RepPoint::new(SpecialUnitary3::cyclic_permutation(), b);
        assert_eq!(d_kappa(&p).rank(), 8);
    }

    // First-order check of the Dκ formula against a finite difference of κ.
    // The formula is the one for the left trivialization: (X, Y) moves
    // (a, b) to (a·exp(hX), b·exp(hY)) and the output is κ⁻¹·dκ.
    #[test]
    fn d_kappa_matches_finite_difference() {
        let mut rng = crate::rng::stream(31);
        let a = haar_random(&mut rng);
        let b = haar_random(&mut rng);
        let p = RepPoint::new(a, b);
        let dk = d_kappa(&p);
        let x = crate::su3::random_algebra(&mut rng, 1.0);
        let y = crate::su3::random_algebra(&mut rng, 1.0);
        let h = 1e-6;
        let moved = |s: f64| {
            let ea = crate::su3::exp_algebra(&x.scale(s)).unwrap();
            let eb = crate::su3::exp_algebra(&y.scale(s)).unwrap();
            raw_commutator(&(a * ea), &(b * eb))
        };
        let k0 = raw_commutator(&a, &b);
        let diff = (moved(h).matrix() - moved(-h).matrix()) / Complex64::new(2.0 * h, 0.0);
        let v = Su3Algebra::traceless_anti_hermitian(&(k0.matrix().adjoint() * diff));
        let mut xy = nalgebra::SVector::<f64, 16>::zeros();
        for (k, c) in x.coords().iter().enumerate() {
            xy[k] = *c;
        }
        for (k, c) in y.coords().iter().enumerate() {
            xy[8 + k] = *c;
        }
        let predicted = dk.matrix * xy;
        let got = v.coords();
        for k in 0..8 {
            assert!((predicted[k] - got[k]).abs() <= 1e-6, "{k}: {} vs {}", predicted[k], got[k]);
        }
    }

    #[test]
    fn centralizer_dimensions() {
        assert_eq!(centralizer_algebra(&id()).dim(), 8);
        let c = centralizer_algebra(&a0());
        assert_eq!(c.dim(), 2);
        for v in &c.basis {
            let m = v.matrix();
            for i in 0..3 {
                for j in 0..3 {
                    if i != j {
                        assert!(m[(i, j)].norm() <= 1e-12);
                    }
                }
            }
        }
        let u = SpecialUnitary3::torus([0.1234567, 0.1234567]);
        let c = centralizer_algebra(&u);
        assert_eq!(c.dim(), 4);
        for v in &c.basis {
            assert!(max_abs(&(adjoint_action(&u, v).matrix() - v.matrix())) <= 1e-9);
        }
    }

    #[test]
    fn centralizer_intersection_examples() {
        assert_eq!(centralizer_intersection(&id(), &id()), 8);
        let p = central_fiber_point(1).unwrap();
        assert_eq!(centralizer_intersection(p.a(), p.b()), 0);
        let mut rng = crate::rng::stream(32);
        let a = haar_random(&mut rng);
        assert_eq!(centralizer_intersection(&a, &a), 2);
    }

    #[test]
    fn base_point_examples() {
        let p = base_point(&id());
        assert!(p.residual() <= 1e-14);
        assert!(p.b().is_central(1e-14));
        let p = base_point(&SpecialUnitary3::central(1));
        assert!(p.residual() <= 1e-10);
        let mut rng = crate::rng::stream(33);
        for _ in 0..10_000 {
            let c = haar_random(&mut rng);
            let p = base_point(&c);
            assert!(p.residual() <= 1e-10, "{}", p.residual());
        }
    }

    #[test]
    fn central_fiber_points() {
        let p = central_fiber_point(1).unwrap();
        assert!(p.a().powu(3).distance(&id()) <= 1e-13);
        assert!(p.b().powu(3).distance(&id()) == 0.0);
        let p2 = central_fiber_point(2).unwrap();
        assert!(p2.residual() <= 1e-14);
        assert!(matches!(
            central_fiber_point(0),
            Err(Error::AbelianFiberRequested)
        ));
    }

    #[test]
    fn abelian_points() {
        let p = abelian_point([0.0, 0.0], [0.0, 0.0]);
        assert!(p.a().distance(&id()) == 0.0 && p.b().distance(&id()) == 0.0);
        let p = abelian_point([1.0 / 3.0, 1.0 / 3.0], [0.3, 0.1]);
        assert!(p.a().distance(&SpecialUnitary3::central(1)) <= 1e-15);
        let mut rng = crate::rng::stream(34);
        use rand::Rng;
        for _ in 0..100 {
            let p = abelian_point(
                [rng.random(), rng.random()],
                [rng.random(), rng.random()],
            );
            assert!(p.residual() <= 1e-14);
        }
    }

    #[test]
    fn rank_matches_centralizer_intersection() {
        let mut rng = crate::rng::stream(35);
        for _ in 0..100 {
            let p = base_point(&haar_random(&mut rng));
            let rank = d_kappa(&p).rank();
            let dim = centralizer_intersection(p.a(), p.b());
            assert_eq!(rank, 8 - dim);
        }
        // reducible point: a, b in a common torus
        let p = abelian_point([0.1, 0.3], [0.22, 0.05]);
        assert_eq!(d_kappa(&p).rank(), 6);
        assert_eq!(centralizer_intersection(p.a(), p.b()), 2);
    }
}
