use rand::Rng;
use rayon::prelude::*;

use super::ks::ks_two_sample;
use super::report::ExperimentReport;
use crate::error::{Error, Result};
use crate::fiber::{RepPoint, FIBER_TOL};
use crate::mcg::{apply_word, random_word, TwistWord};
use crate::trace::{character, character_distance, Character};

/// Indices into [`Character::to_reals`] compared by the KS test: real and
/// imaginary parts of the traces of `a, b, ab, ab⁻¹`. The commutator trace is
/// constant on a fiber and the remaining coordinates are complex conjugates.
pub const KS_COORDS: [usize; 8] = [0, 1, 2, 3, 4, 5, 6, 7];

pub const KS_COORD_NAMES: [&str; 8] = [
    "tr_a_re", "tr_a_im", "tr_b_re", "tr_b_im", "tr_ab_re", "tr_ab_im", "tr_aB_re", "tr_aB_im",
];

#[derive(Clone, Debug)]
pub struct OrbitOptions {
    /// Bound on the max KS distance between the two starts.
    pub ks_threshold: f64,
    /// Bound on the max KS distance between two sample sets from one start.
    pub null_threshold: f64,
}

impl Default for OrbitOptions {
    fn default() -> Self {
        Self {
            ks_threshold: 0.05,
            null_threshold: 0.02,
        }
    }
}

/// Characters of `apply_word(w_i, start)` for `n` independent random words.
///
/// Words are drawn sequentially from `rng`; applying them runs in parallel
/// and the output order follows the word order.
pub fn orbit_samples<R: Rng + ?Sized>(
    start: &RepPoint,
    word_length: usize,
    n: usize,
    rng: &mut R,
) -> Result<Vec<Character>> {
    let words: Vec<TwistWord> = (0..n).map(|_| random_word(word_length, rng)).collect();
    words
        .par_iter()
        .map(|w| {
            let q = apply_word(w, start)?.renormalized()?;
            Ok(character(&q))
        })
        .collect()
}

fn columns(samples: &[Character]) -> Vec<Vec<f64>> {
    let reals: Vec<[f64; 18]> = samples.iter().map(Character::to_reals).collect();
    KS_COORDS
        .iter()
        .map(|&k| reals.iter().map(|r| r[k]).collect())
        .collect()
}

/// Per-coordinate KS distances between two sets of characters.
pub fn ks_by_coordinate(x: &[Character], y: &[Character]) -> Vec<f64> {
    columns(x)
        .iter()
        .zip(columns(y).iter())
        .map(|(u, v)| ks_two_sample(u, v))
        .collect()
}

/// Compares the distributions of twist-word images of two starts on one fiber.
///
/// From each start, `n` points `apply_word(w, start)` for independent random
/// words `w` of the given length. Two independent sample sets from the first
/// start give the null level of the statistic. On a central fiber the
/// character is constant and the spread of the samples is reported instead.
pub fn mcg_orbit_distribution<R: Rng + ?Sized>(
    starts: [&RepPoint; 2],
    word_length: usize,
    n: usize,
    opts: &OrbitOptions,
    rng: &mut R,
) -> Result<ExperimentReport> {
    if n == 0 {
        return Err(Error::InvalidInput("orbit distribution needs N >= 1".into()));
    }
    for s in starts {
        s.check()?;
    }
    let distance = starts[0].c().distance(starts[1].c());
    if !(distance <= FIBER_TOL) {
        return Err(Error::FiberMismatch { distance });
    }
    let mut report = ExperimentReport::new("mcg_orbit_distribution", "twist_words");
    report.count("n", n as u64);
    report.count("word_length", word_length as u64);

    if starts[0].c().is_central(FIBER_TOL) {
        let base = character(starts[0]);
        let mut spread: f64 = 0.0;
        for s in starts {
            for ch in orbit_samples(s, word_length, n, rng)? {
                spread = spread.max(character_distance(&ch, &base));
            }
        }
        report.threshold("single_point", 1e-9);
        report.flag("central", true);
        report.stat("character_spread", spread)?;
        report.check("single_point", spread <= 1e-9);
        return Ok(report);
    }

    let x = orbit_samples(starts[0], word_length, n, rng)?;
    let y = orbit_samples(starts[1], word_length, n, rng)?;
    let x_null = orbit_samples(starts[0], word_length, n, rng)?;
    let ks = ks_by_coordinate(&x, &y);
    let ks_null = ks_by_coordinate(&x, &x_null);
    let ks_max = ks.iter().copied().fold(0.0, f64::max);
    let null_max = ks_null.iter().copied().fold(0.0, f64::max);

    report.threshold("ks", opts.ks_threshold);
    report.threshold("ks_null", opts.null_threshold);
    report.flag("central", false);
    report.series("ks_by_coordinate", &ks)?;
    report.series("ks_null_by_coordinate", &ks_null)?;
    report.stat("ks_max", ks_max)?;
    report.stat("ks_null_max", null_max)?;
    report.check("ks", ks_max <= opts.ks_threshold);
    report.check("ks_null", null_max <= opts.null_threshold);
    Ok(report)
}
