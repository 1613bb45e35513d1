//! Trace coordinates: the trace domain `Δ = Tr(SU(3))`, eigenvalue angles,
//! genericity, and the nine-trace character of a representation.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fiber::RepPoint;
use crate::su3::{unit_cubic_roots, unitary_eigen, SpecialUnitary3, REGULARITY_GAP};

/// Points with `delta_defect(z) ≤ BOUNDARY_TOL` count as inside `Δ`.
pub const BOUNDARY_TOL: f64 = 1e-9;

/// Default coefficient bound for the integer relation search.
pub const DEFAULT_HEIGHT: i64 = 20;

/// Default tolerance for the integer relation search.
pub const DEFAULT_RELATION_TOL: f64 = 1e-9;

/// `φ(z) = |z|⁴ − 8·Re(z³) + 18|z|² − 27`; `z ∈ Δ` iff `φ(z) ≤ 0`.
pub fn delta_defect(z: Complex64) -> f64 {
    let r2 = z.norm_sqr();
    r2 * r2 - 8.0 * (z * z * z).re + 18.0 * r2 - 27.0
}

/// A trace value, `|z| ≤ 3`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TracePoint(Complex64);

impl TracePoint {
    pub fn new(z: Complex64) -> Result<Self> {
        if !(z.norm() <= 3.0 + BOUNDARY_TOL) {
            return Err(Error::OutsideTraceDomain {
                re: z.re,
                im: z.im,
                defect: delta_defect(z),
            });
        }
        Ok(Self(z))
    }

    pub fn value(&self) -> Complex64 {
        self.0
    }

    pub fn defect(&self) -> f64 {
        delta_defect(self.0)
    }
}

/// Sorted eigenvalue angles (in turns) of an SU(3) element.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AngleTriple {
    angles: [f64; 3],
}

impl AngleTriple {
    /// Sorts `angles` after reducing them into `[0, 1)`; their sum must be an integer.
    pub fn new(angles: [f64; 3]) -> Result<Self> {
        let mut a = angles.map(|t| {
            let r = t.rem_euclid(1.0);
            if r >= 1.0 {
                0.0
            } else {
                r
            }
        });
        a.sort_by(|x, y| x.total_cmp(y));
        let s: f64 = a.iter().sum();
        if !((s - s.round()).abs() <= 1e-9) {
            return Err(Error::InvalidInput(format!(
                "angles {angles:?} do not sum to an integer"
            )));
        }
        Ok(Self { angles: a })
    }

    pub fn angles(&self) -> [f64; 3] {
        self.angles
    }

    /// `diag(e^{2πiθ₁}, e^{2πiθ₂}, e^{2πiθ₃})`.
    pub fn to_diagonal(&self) -> SpecialUnitary3 {
        SpecialUnitary3::torus([self.angles[0], self.angles[1]])
    }
}

/// Eigenvalue angles of the conjugacy class with trace `z`, from the roots of
/// `λ³ − zλ² + z̄λ − 1`.
pub fn char_poly_roots(z: TracePoint) -> Result<AngleTriple> {
    let defect = z.defect();
    let outside = || Error::OutsideTraceDomain {
        re: z.0.re,
        im: z.0.im,
        defect,
    };
    if !(defect <= BOUNDARY_TOL) {
        return Err(outside());
    }
    let roots = unit_cubic_roots(z.0);
    if roots.iter().any(|l| !((l.norm() - 1.0).abs() <= 1e-8)) {
        return Err(outside());
    }
    let tau = 2.0 * std::f64::consts::PI;
    let mut angles = roots.map(|l| (l.arg() / tau).rem_euclid(1.0));
    // snap the sum to the nearest integer through the largest angle
    let s: f64 = angles.iter().sum();
    let (imax, _) = angles
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.total_cmp(y.1))
        .unwrap_or((0, &0.0));
    angles[imax] -= s - s.round();
    AngleTriple::new(angles)
}

/// An integer relation `m₀ + m₁θ₁ + m₂θ₂ ≈ 0` among the two smallest angles
/// of `u`, with `|m₁|, |m₂| ≤ height` and `(m₁, m₂) ≠ 0`.
pub fn find_relation(angles: [f64; 2], height: i64, tol: f64) -> Option<[i64; 3]> {
    for m1 in -height..=height {
        for m2 in -height..=height {
            if m1 == 0 && m2 == 0 {
                continue;
            }
            let s = m1 as f64 * angles[0] + m2 as f64 * angles[1];
            let m0 = -s.round();
            if (s + m0).abs() <= tol {
                return Some([m0 as i64, m1, m2]);
            }
        }
    }
    None
}

/// Whether `u` is regular and its eigenvalue angles satisfy no integer
/// relation up to `height` within `tol`, i.e. `⟨u⟩` is numerically dense in
/// its maximal torus.
pub fn is_generic(u: &SpecialUnitary3, height: i64, tol: f64) -> bool {
    let eig = unitary_eigen(u);
    if eig.min_gap() < REGULARITY_GAP {
        return false;
    }
    find_relation([eig.angles[0], eig.angles[1]], height, tol).is_none()
}

/// Names of the character coordinates, in order.
pub const CHARACTER_NAMES: [&str; 9] = ["a", "b", "ab", "aB", "comm", "A", "B", "BA", "bA"];

/// Traces of `a, b, ab, ab⁻¹, [a,b]` followed by those of the inverses of
/// `a, b, ab, ab⁻¹`. Capital letters in [`CHARACTER_NAMES`] denote inverses.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Character {
    pub coords: [Complex64; 9],
}

impl Character {
    /// Real and imaginary parts, interleaved per coordinate.
    pub fn to_reals(&self) -> [f64; 18] {
        let mut out = [0.0; 18];
        for (k, z) in self.coords.iter().enumerate() {
            out[2 * k] = z.re;
            out[2 * k + 1] = z.im;
        }
        out
    }

    /// Largest trace-domain defect over the coordinates.
    pub fn max_defect(&self) -> f64 {
        self.coords
            .iter()
            .map(|z| delta_defect(*z))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Largest deviation of the inverse coordinates from the conjugates of their partners.
    pub fn pairing_defect(&self) -> f64 {
        let pairs = [(0, 5), (1, 6), (2, 7), (3, 8)];
        pairs
            .iter()
            .map(|&(k, j)| (self.coords[j] - self.coords[k].conj()).norm())
            .fold(0.0, f64::max)
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (name, z)) in CHARACTER_NAMES.iter().zip(self.coords.iter()).enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "tr({name})={:.6}{:+.6}i", z.re, z.im)?;
        }
        Ok(())
    }
}

/// Column names for the 18 real character components.
pub fn character_columns() -> Vec<String> {
    CHARACTER_NAMES
        .iter()
        .flat_map(|n| [format!("tr_{n}_re"), format!("tr_{n}_im")])
        .collect()
}

/// The nine trace coordinates of `p`.
pub fn character(p: &RepPoint) -> Character {
    let a = p.a().matrix();
    let b = p.b().matrix();
    let ab = a * b;
    let ab_inv = a * b.adjoint();
    let comm = ab * a.adjoint() * b.adjoint();
    let tr = crate::su3::trace;
    let t = [tr(a), tr(b), tr(&ab), tr(&ab_inv)];
    Character {
        coords: [
            t[0],
            t[1],
            t[2],
            t[3],
            tr(&comm),
            tr(&a.adjoint()),
            tr(&b.adjoint()),
            tr(&ab.adjoint()),
            tr(&ab_inv.adjoint()),
        ],
    }
}

/// Max-modulus difference over the nine coordinates.
pub fn character_distance(x: &Character, y: &Character) -> f64 {
    x.coords
        .iter()
        .zip(y.coords.iter())
        .map(|(u, v)| (u - v).norm())
        .fold(0.0, f64::max)
}
