//! Goldman twist flows of trace functions on the fiber `R_c`.
//!
//! For `f = Re Tr` or `Im Tr`, the variation function `F: SU(3) → su(3)` is
//! the gradient of `f` for the form `⟨X, Y⟩ = Tr(XY)`:
//! `⟨F(x), υ⟩ = d/dt f(x·exp(tυ))|₀`. It commutes with `x`, so
//! `ζᵗ(x) = exp(t·F(x))` is a one-parameter subgroup of the centralizer of
//! `x`, and multiplying the holonomy of a curve crossing `γ` once by
//! `ζᵗ(ρ(γ))` moves the representation inside its fiber.

use std::fmt;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::fiber::RepPoint;
use crate::su3::{exp_algebra, torus_frame, SpecialUnitary3, Su3Algebra};

/// Curves whose trace functions generate the coordinate ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Curve {
    Alpha,
    Beta,
    AlphaBeta,
    AlphaBetaInv,
    /// The commutator `αβα⁻¹β⁻¹`; its trace is constant on every fiber.
    Boundary,
}

impl Curve {
    /// The four curves with a non-trivial flow on the fiber.
    pub const FLOWING: [Curve; 4] = [
        Curve::Alpha,
        Curve::Beta,
        Curve::AlphaBeta,
        Curve::AlphaBetaInv,
    ];

    /// Holonomy of the curve at `(a, b)`.
    pub fn holonomy(&self, a: &SpecialUnitary3, b: &SpecialUnitary3) -> SpecialUnitary3 {
        match self {
            Curve::Alpha => *a,
            Curve::Beta => *b,
            Curve::AlphaBeta => a * b,
            Curve::AlphaBetaInv => a * &b.inverse(),
            Curve::Boundary => a * b * a.inverse() * b.inverse(),
        }
    }
}

/// Real or imaginary part of a trace function.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Part {
    Re,
    Im,
}

impl Part {
    pub fn of(&self, z: Complex64) -> f64 {
        match self {
            Part::Re => z.re,
            Part::Im => z.im,
        }
    }
}

/// A real trace function `f_γ^R` or `f_γ^I`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Observable {
    pub curve: Curve,
    pub part: Part,
}

impl Observable {
    pub fn new(curve: Curve, part: Part) -> Self {
        Self { curve, part }
    }

    /// Value of the function at `p`.
    pub fn value(&self, p: &RepPoint) -> f64 {
        self.part.of(self.curve.holonomy(p.a(), p.b()).trace())
    }
}

impl fmt::Display for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}.{:?}", self.curve, self.part)
    }
}

/// Flow of one observable for a finite time.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FlowStep {
    pub observable: Observable,
    pub time: f64,
}

impl FlowStep {
    pub fn new(observable: Observable, time: f64) -> Result<Self> {
        if !time.is_finite() {
            return Err(Error::InvalidInput(format!("flow time {time} is not finite")));
        }
        Ok(Self { observable, time })
    }
}

/// Variation function of `Re Tr` (part `Re`) or `Im Tr` (part `Im`) at `x`.
///
/// `F_Re(x)` is the traceless anti-Hermitian part of `x` and `F_Im(x)` that
/// of `−i·x`.
pub fn variation(x: &SpecialUnitary3, part: Part) -> Su3Algebra {
    match part {
        Part::Re => Su3Algebra::traceless_anti_hermitian(x.matrix()),
        Part::Im => {
            Su3Algebra::traceless_anti_hermitian(&(x.matrix() * Complex64::new(0.0, -1.0)))
        }
    }
}

/// `ζᵗ(x) = exp(t·F(x))`, which commutes with `x`.
pub fn one_param(x: &SpecialUnitary3, t: f64, part: Part) -> Result<SpecialUnitary3> {
    if t == 0.0 {
        return Ok(SpecialUnitary3::identity());
    }
    exp_algebra(&variation(x, part).scale(t))
}

/// Twist flow along a simple closed curve for the given time.
///
/// * `α`: `(a, b·ζᵗ(a))`
/// * `β`: `(a·ζᵗ(b), b)`
/// * `αβ`: in the basis `(u, v) = (ab, b)`, flow `v ↦ v·ζᵗ(u)`, then `a = uv⁻¹, b = v`
/// * `αβ⁻¹`: in the basis `(u, v) = (ab⁻¹, b)`, flow `v ↦ v·ζᵗ(u)`, then `a = uv, b = v`
///
/// Each is the `α`-flow in a free basis with the same commutator, so the
/// fiber is preserved and the flowed curve's holonomy is unchanged.
pub fn twist_flow(p: &RepPoint, step: &FlowStep) -> Result<RepPoint> {
    let part = step.observable.part;
    let t = step.time;
    let (a, b) = (*p.a(), *p.b());
    let moved = match step.observable.curve {
        Curve::Boundary => return Err(Error::TrivialFlow),
        _ if t == 0.0 => return Ok(*p),
        Curve::Alpha => p.moved(a, b * one_param(&a, t, part)?, 1),
        Curve::Beta => p.moved(a * one_param(&b, t, part)?, b, 1),
        Curve::AlphaBeta => {
            let u = a * b;
            let v = b * one_param(&u, t, part)?;
            p.moved(u * v.inverse(), v, 3)
        }
        Curve::AlphaBetaInv => {
            let u = a * b.inverse();
            let v = b * one_param(&u, t, part)?;
            p.moved(u * v, v, 3)
        }
    };
    moved.maintain()
}

/// Which torus coset to sample.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Coset {
    /// `H(a, b) = {a} × b·K_a`
    H,
    /// `H′(a, b) = a·K_b × {b}`
    HPrime,
}

/// The point of the coset given by torus phases in the diagonalizing frame
/// of the anchor (`a` for `H`, `b` for `H′`).
pub fn coset_point(p: &RepPoint, which: Coset, phases: [f64; 2]) -> Result<RepPoint> {
    let (a, b) = (*p.a(), *p.b());
    match which {
        Coset::H => {
            let t = torus_frame(&a)?.element(phases);
            Ok(p.moved(a, b * t, 1))
        }
        Coset::HPrime => {
            let t = torus_frame(&b)?.element(phases);
            Ok(p.moved(a * t, b, 1))
        }
    }
}

/// Uniform point of `H(a, b)` or `H′(a, b)`; the anchor must be regular.
pub fn coset_sample<R: Rng + ?Sized>(p: &RepPoint, which: Coset, rng: &mut R) -> Result<RepPoint> {
    let phases = [rng.random::<f64>(), rng.random::<f64>()];
    coset_point(p, which, phases)
}

/// Default bound on flow times in random walks.
pub const DEFAULT_MAX_TIME: f64 = 2.0 * std::f64::consts::PI;

/// Uniformly random flow step over the eight flowing observables.
pub fn random_step<R: Rng + ?Sized>(rng: &mut R, max_time: f64) -> FlowStep {
    let curve = Curve::FLOWING[rng.random_range(0..4)];
    let part = if rng.random::<bool>() { Part::Re } else { Part::Im };
    let time = rng.random_range(-1.0..=1.0) * max_time;
    FlowStep {
        observable: Observable::new(curve, part),
        time,
    }
}

/// Composition of `steps` random twist flows.
pub fn random_flow_walk<R: Rng + ?Sized>(
    p: &RepPoint,
    steps: usize,
    max_time: f64,
    rng: &mut R,
) -> Result<RepPoint> {
    let mut q = *p;
    for _ in 0..steps {
        let step = random_step(rng, max_time);
        q = twist_flow(&q, &step)?;
    }
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fiber::{base_point, central_fiber_point};
    use crate::su3::{haar_random, inner_product, random_algebra};

    #[test]
    fn variation_of_identity_vanishes() {
        let f = variation(&SpecialUnitary3::identity(), Part::Re);
        assert_eq!(f.max_abs(), 0.0);
    }

    #[test]
    fn variation_of_diagonal() {
        let th = [0.3, 1.1, -1.4];
        let x = SpecialUnitary3::diagonal(th.map(|t| Complex64::from_polar(1.0, t))).unwrap();
        let f = variation(&x, Part::Re);
        let s = th.map(f64::sin);
        let mean = (s[0] + s[1] + s[2]) / 3.0;
        for k in 0..3 {
            let expect = Complex64::new(0.0, s[k] - mean);
            assert!((f.matrix()[(k, k)] - expect).norm() <= 1e-15);
        }
    }

    #[test]
    fn variation_is_a_gradient() {
        let mut rng = crate::rng::stream(51);
        let h = 1e-5;
        for _ in 0..20 {
            let x = haar_random(&mut rng);
            for part in [Part::Re, Part::Im] {
                let f = variation(&x, part);
                for _ in 0..10 {
                    let v = random_algebra(&mut rng, 1.0);
                    let at = |s: f64| part.of((x * exp_algebra(&v.scale(s)).unwrap()).trace());
                    let fd = (at(h) - at(-h)) / (2.0 * h);
                    assert!((inner_product(&f, &v) - fd).abs() <= 1e-6);
                }
            }
        }
    }

    #[test]
    fn one_param_examples() {
        let mut rng = crate::rng::stream(52);
        let x = haar_random(&mut rng);
        assert_eq!(one_param(&x, 0.0, Part::Re).unwrap(), SpecialUnitary3::identity());
        assert!(one_param(&SpecialUnitary3::identity(), 3.0, Part::Im)
            .unwrap()
            .distance(&SpecialUnitary3::identity())
            <= 1e-15);
        for _ in 0..100 {
            let x = haar_random(&mut rng);
            let (t, s) = (rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0));
            let lhs = one_param(&x, t + s, Part::Re).unwrap();
            let rhs = one_param(&x, t, Part::Re).unwrap() * one_param(&x, s, Part::Re).unwrap();
            assert!(lhs.distance(&rhs) <= 1e-11);
        }
    }

    #[test]
    fn zero_time_and_boundary() {
        let mut rng = crate::rng::stream(53);
        let p = base_point(&haar_random(&mut rng));
        let step = FlowStep::new(Observable::new(Curve::AlphaBeta, Part::Im), 0.0).unwrap();
        let q = twist_flow(&p, &step).unwrap();
        assert_eq!(q.a(), p.a());
        assert_eq!(q.b(), p.b());
        let step = FlowStep::new(Observable::new(Curve::Boundary, Part::Re), 1.0).unwrap();
        assert!(matches!(twist_flow(&p, &step), Err(Error::TrivialFlow)));
        assert!(FlowStep::new(step.observable, f64::NAN).is_err());
    }

    #[test]
    fn alpha_flow_on_central_fiber() {
        let p = central_fiber_point(1).unwrap();
        let step = FlowStep::new(Observable::new(Curve::Alpha, Part::Re), 0.7).unwrap();
        let q = twist_flow(&p, &step).unwrap();
        let t = p.b().inverse() * *q.b();
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    assert!(t.matrix()[(i, j)].norm() <= 1e-15);
                }
            }
        }
        assert!(q.residual() <= 1e-14);
    }

    #[test]
    fn flows_preserve_fiber_and_own_trace() {
        let mut rng = crate::rng::stream(54);
        for _ in 0..50 {
            let p = base_point(&haar_random(&mut rng));
            let p = random_flow_walk(&p, 5, 1.0, &mut rng).unwrap();
            for curve in Curve::FLOWING {
                for part in [Part::Re, Part::Im] {
                    let obs = Observable::new(curve, part);
                    for t in [0.5, 3.0, 10.0] {
                        let q = twist_flow(&p, &FlowStep::new(obs, t).unwrap()).unwrap();
                        assert!(q.residual() <= 1e-12);
                        let before = curve.holonomy(p.a(), p.b()).trace();
                        let after = curve.holonomy(q.a(), q.b()).trace();
                        assert!((before - after).norm() <= 1e-11);
                    }
                }
            }
        }
    }

    #[test]
    fn coset_samples() {
        let p = central_fiber_point(1).unwrap();
        let q = coset_point(&p, Coset::H, [0.0, 0.0]).unwrap();
        assert!(q.b().distance(p.b()) <= 1e-15);
        let mut rng = crate::rng::stream(55);
        let mut mean = Complex64::new(0.0, 0.0);
        let n = 1000;
        for _ in 0..n {
            let q = coset_sample(&p, Coset::H, &mut rng).unwrap();
            assert!(q.residual() <= 1e-10);
            let r = coset_sample(&p, Coset::HPrime, &mut rng).unwrap();
            assert!(r.residual() <= 1e-10);
            mean += q.b().trace();
        }
        assert!((mean / n as f64).norm() <= 0.1);
        let id = RepPoint::new(SpecialUnitary3::identity(), SpecialUnitary3::identity());
        assert!(matches!(
            coset_sample(&id, Coset::H, &mut rng),
            Err(Error::NonRegular { .. })
        ));
    }

    #[test]
    fn long_walk_stays_on_fiber() {
        let mut rng = crate::rng::stream(56);
        let p = base_point(&haar_random(&mut rng));
        let q = random_flow_walk(&p, 10_000, DEFAULT_MAX_TIME, &mut rng).unwrap();
        assert!(q.residual() <= 1e-9);
        assert!(random_flow_walk(&p, 0, 1.0, &mut rng).unwrap().a() == p.a());
    }
}
