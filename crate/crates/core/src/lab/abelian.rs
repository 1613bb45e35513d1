use num_complex::Complex64;
use rand::Rng;

use super::report::ExperimentReport;
use crate::error::{Error, Result};
use crate::mcg::{homology_action, is_hyperbolic, HomologyMatrix, TwistWord};

const TAU: f64 = 2.0 * std::f64::consts::PI;

#[derive(Clone, Debug)]
pub struct AbelianOptions {
    /// Bound on the Birkhoff-vs-Haar gap for `Tr(a)`.
    pub gap_threshold: f64,
    /// Number of Haar samples of the 4-torus for the space average.
    pub reference_samples: usize,
}

impl Default for AbelianOptions {
    fn default() -> Self {
        Self {
            gap_threshold: 0.01,
            reference_samples: 1_000_000,
        }
    }
}

fn torus_trace(t: [f64; 2]) -> Complex64 {
    Complex64::from_polar(1.0, TAU * t[0])
        + Complex64::from_polar(1.0, TAU * t[1])
        + Complex64::from_polar(1.0, -TAU * (t[0] + t[1]))
}

/// Traces of `a, b, ab, ab⁻¹` for the diagonal pair with angles `(θ_a, θ_b)`,
/// as eight reals.
pub fn diagonal_observables(ta: [f64; 2], tb: [f64; 2]) -> [f64; 8] {
    let sum = [ta[0] + tb[0], ta[1] + tb[1]];
    let diff = [ta[0] - tb[0], ta[1] - tb[1]];
    let z = [torus_trace(ta), torus_trace(tb), torus_trace(sum), torus_trace(diff)];
    [z[0].re, z[0].im, z[1].re, z[1].im, z[2].re, z[2].im, z[3].re, z[3].im]
}

/// One step of the row action `(θ_a, θ_b) ↦ (θ_a, θ_b)·M` on each torus coordinate.
pub fn toral_step(m: &HomologyMatrix, ta: [f64; 2], tb: [f64; 2]) -> ([f64; 2], [f64; 2]) {
    let m = m.0.map(|r| r.map(|v| v as f64));
    let mut na = [0.0; 2];
    let mut nb = [0.0; 2];
    for k in 0..2 {
        na[k] = (m[0][0] * ta[k] + m[1][0] * tb[k]).rem_euclid(1.0);
        nb[k] = (m[0][1] * ta[k] + m[1][1] * tb[k]).rem_euclid(1.0);
    }
    (na, nb)
}

fn max_gap(x: &[f64; 8], y: &[f64; 8], range: std::ops::Range<usize>) -> f64 {
    range.map(|k| (x[k] - y[k]).abs()).fold(0.0, f64::max)
}

/// Birkhoff averages of trace observables along the orbit of the abelian
/// fiber under a hyperbolic twist word, against the Haar space average.
///
/// `angles = [θ_a1, θ_a2, θ_b1, θ_b2]` are the torus angles of the start
/// (in turns). Gaps are reported at `N/10` and `N`.
pub fn abelian_hyperbolic_test<R: Rng + ?Sized>(
    angles: [f64; 4],
    w: &TwistWord,
    n: usize,
    opts: &AbelianOptions,
    rng: &mut R,
) -> Result<ExperimentReport> {
    if n == 0 {
        return Err(Error::InvalidInput("abelian test needs N >= 1".into()));
    }
    if angles.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput("start angles must be finite".into()));
    }
    let m = homology_action(w)?;
    if !is_hyperbolic(&m) {
        return Err(Error::NotHyperbolic { trace: m.trace() });
    }
    let start_a = [angles[0].rem_euclid(1.0), angles[1].rem_euclid(1.0)];
    let start_b = [angles[2].rem_euclid(1.0), angles[3].rem_euclid(1.0)];
    let (mut ta, mut tb) = (start_a, start_b);

    let early = (n / 10).max(1);
    let mut sums = [0.0; 8];
    let mut early_avg = [0.0; 8];
    let mut period: Option<usize> = None;
    for k in 0..n {
        if k > 0 && period.is_none() && ta == start_a && tb == start_b {
            period = Some(k);
        }
        let obs = diagonal_observables(ta, tb);
        for i in 0..8 {
            sums[i] += obs[i];
        }
        if k + 1 == early {
            early_avg = sums.map(|s| s / early as f64);
        }
        (ta, tb) = toral_step(&m, ta, tb);
    }
    let avg = sums.map(|s| s / n as f64);

    let mut reference = [0.0; 8];
    for _ in 0..opts.reference_samples {
        let ra = [rng.random::<f64>(), rng.random::<f64>()];
        let rb = [rng.random::<f64>(), rng.random::<f64>()];
        let obs = diagonal_observables(ra, rb);
        for i in 0..8 {
            reference[i] += obs[i];
        }
    }
    let reference = reference.map(|s| s / opts.reference_samples.max(1) as f64);

    let gap_a = max_gap(&avg, &reference, 0..2);
    let gap_a_early = max_gap(&early_avg, &reference, 0..2);
    let gap_all = max_gap(&avg, &reference, 0..8);
    let exact_gap = avg.iter().map(|v| v.abs()).fold(0.0, f64::max);

    let mut report = ExperimentReport::new("abelian_hyperbolic_test", "toral_orbit");
    report.threshold("gap", opts.gap_threshold);
    report.series("homology", &[m.0[0][0], m.0[0][1], m.0[1][0], m.0[1][1]].map(|v| v as f64))?;
    report.count("homology_trace_abs", m.trace().unsigned_abs());
    report.count("n", n as u64);
    report.count("n_early", early as u64);
    report.count("reference_samples", opts.reference_samples as u64);
    report.series("birkhoff", &avg)?;
    report.series("haar_reference", &reference)?;
    report.stat("gap_tr_a", gap_a)?;
    report.stat("gap_tr_a_early", gap_a_early)?;
    report.stat("gap_max", gap_all)?;
    report.stat("exact_average_gap", exact_gap)?;
    report.flag("gap_decreased", gap_a < gap_a_early);
    report.flag("periodic", period.is_some());
    report.count("period", period.unwrap_or(0) as u64);
    if period.is_none() {
        report.check("gap", gap_a <= opts.gap_threshold);
        report.check("gap_decreased", gap_a < gap_a_early);
    }
    Ok(report)
}
