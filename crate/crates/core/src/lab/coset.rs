use num_complex::Complex64;
use rand::Rng;

use super::ks::ks_two_sample;
use super::report::ExperimentReport;
use crate::error::{Error, Result};
use crate::fiber::RepPoint;
use crate::su3::{renormalize, torus_frame, RENORMALIZE_EVERY};
use crate::trace::{is_generic, DEFAULT_HEIGHT, DEFAULT_RELATION_TOL};

/// Orbit points `b·aⁿ` closer than this to `b` count as a return.
pub const PERIOD_TOL: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct CosetOptions {
    pub height: i64,
    pub tol: f64,
    /// Bound on `|W_N|` required for generic `a`.
    pub weyl_threshold: f64,
    /// Number of Haar samples on `b·K_a` for the distribution comparison.
    pub reference_samples: usize,
}

impl Default for CosetOptions {
    fn default() -> Self {
        Self {
            height: DEFAULT_HEIGHT,
            tol: DEFAULT_RELATION_TOL,
            weyl_threshold: 0.01,
            reference_samples: 100_000,
        }
    }
}

/// `Σ_{n<N} λⁿ`.
fn geometric_sum(l: Complex64, n: usize) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    if (one - l).norm() <= 1e-14 {
        return Complex64::new(n as f64, 0.0);
    }
    (one - l.powu(n as u32)) / (one - l)
}

/// Orbit of `τ_α` on the coset `{a} × b·K_a`, i.e. the points `b·aⁿ`, `n < N`.
///
/// Reports the Weyl average `W_N = (1/N)·Σ Tr(b·aⁿ)`, its values on the
/// ladder `N = 10, 100, ...`, the closed form of the same sum in the
/// eigenbasis of `a` with the per-eigenvalue bound `|Σ λⁿ| ≤ 2/|1 − λ|`, the
/// orbit period if the orbit returns to `b`, and the KS distance between the
/// orbit values of `Re Tr` and Haar samples of the coset.
pub fn coset_twist_orbit<R: Rng + ?Sized>(
    p: &RepPoint,
    n: usize,
    opts: &CosetOptions,
    rng: &mut R,
) -> Result<ExperimentReport> {
    if n == 0 || n > u32::MAX as usize {
        return Err(Error::InvalidInput(format!("orbit length {n} out of range")));
    }
    let (a, b) = (*p.a(), *p.b());
    let frame = torus_frame(&a)?;
    let generic = is_generic(&a, opts.height, opts.tol);

    let mut report = ExperimentReport::new("coset_twist_orbit", "twist_orbit");
    report.threshold("weyl", opts.weyl_threshold);

    let mut x = b;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut re_tr = Vec::with_capacity(n);
    let mut ladder = Vec::new();
    let mut ladder_n = Vec::new();
    let mut next_rung = 10usize;
    let mut period: Option<usize> = None;
    let mut cycle = Vec::new();
    for k in 0..n {
        if k > 0 && period.is_none() && x.distance(&b) <= PERIOD_TOL {
            period = Some(k);
        }
        let tr = x.trace();
        if k < 64 {
            cycle.push(tr);
        }
        sum += tr;
        re_tr.push(tr.re);
        if k + 1 == next_rung {
            ladder.push((sum / (k + 1) as f64).norm());
            ladder_n.push((k + 1) as f64);
            next_rung = next_rung.saturating_mul(10);
        }
        x = x * a;
        if (k + 1) % RENORMALIZE_EVERY == 0 {
            x = renormalize(x.matrix())?;
        }
    }
    let w = sum / n as f64;

    // oracle: Tr(b aⁿ) = Σ_k (V† b V)_kk λ_kⁿ
    let bt = frame.eigenvectors.adjoint() * b.matrix() * frame.eigenvectors;
    let tau = 2.0 * std::f64::consts::PI;
    let mut closed = Complex64::new(0.0, 0.0);
    let mut bound = 0.0;
    for k in 0..3 {
        let l = Complex64::from_polar(1.0, tau * frame.angles[k]);
        closed += bt[(k, k)] * geometric_sum(l, n);
        let per = (2.0 / (Complex64::new(1.0, 0.0) - l).norm()).min(n as f64);
        bound += bt[(k, k)].norm() * per;
    }
    closed /= n as f64;
    bound /= n as f64;

    let reference: Vec<f64> = (0..opts.reference_samples)
        .map(|_| (b * frame.random_element(rng)).trace().re)
        .collect();
    let ks = ks_two_sample(&re_tr, &reference);

    report.count("n", n as u64);
    report.flag("generic", generic);
    report.series("a_angles", &frame.angles)?;
    report.stat("weyl_re", w.re)?;
    report.stat("weyl_im", w.im)?;
    report.stat("weyl_abs", w.norm())?;
    report.series("weyl_ladder_n", &ladder_n)?;
    report.series("weyl_ladder_abs", &ladder)?;
    report.stat("closed_form_abs", closed.norm())?;
    report.stat("closed_form_residual", (w - closed).norm())?;
    report.stat("geometric_bound", bound)?;
    report.stat("ks_coset_re_trace", ks)?;
    report.flag("periodic", period.is_some());
    report.count("period", period.unwrap_or(0) as u64);
    if let Some(per) = period {
        if per <= cycle.len() {
            let re: Vec<f64> = cycle[..per].iter().map(|z| z.re).collect();
            let im: Vec<f64> = cycle[..per].iter().map(|z| z.im).collect();
            report.series("cycle_trace_re", &re)?;
            report.series("cycle_trace_im", &im)?;
        }
    }

    report.check("closed_form", (w - closed).norm() <= 1e-8);
    report.check("geometric_bound", w.norm() <= bound + 1e-9);
    if generic {
        report.check("weyl", w.norm() <= opts.weyl_threshold);
        let rungs: Vec<f64> = ladder
            .iter()
            .zip(&ladder_n)
            .filter(|(_, m)| **m >= 100.0)
            .map(|(v, _)| *v)
            .collect();
        report.check("ladder", rungs.windows(2).all(|r| r[1] < r[0]));
    } else {
        report.check("periodic", period.is_some());
    }
    Ok(report)
}
