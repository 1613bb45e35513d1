use rand::Rng;

use super::report::ExperimentReport;
use crate::error::{Error, Result};
use crate::fiber::{base_point, centralizer_intersection, d_kappa, FIBER_TOL};
use crate::flows::{random_flow_walk, DEFAULT_MAX_TIME};
use crate::su3::SpecialUnitary3;
use crate::trace::{is_generic, DEFAULT_HEIGHT, DEFAULT_RELATION_TOL};

#[derive(Clone, Debug)]
pub struct CensusOptions {
    pub height: i64,
    pub tol: f64,
    /// Flow steps before the first sample.
    pub warmup: usize,
    /// Flow steps between consecutive samples.
    pub spacing: usize,
    /// Required fraction of samples where `Dκ` has rank 8.
    pub rank_fraction: f64,
}

impl Default for CensusOptions {
    fn default() -> Self {
        Self {
            height: DEFAULT_HEIGHT,
            tol: DEFAULT_RELATION_TOL,
            warmup: 100,
            spacing: 20,
            rank_fraction: 0.99,
        }
    }
}

/// Rank of `Dκ` and genericity of `b` along a flow walk on the fiber over `c`.
///
/// Also checks `rank = 8 − dim(𝔨_a ∩ 𝔨_b)` at every sample and reports the
/// rank at the base point.
pub fn submersion_census<R: Rng + ?Sized>(
    c: &SpecialUnitary3,
    samples: usize,
    opts: &CensusOptions,
    rng: &mut R,
) -> Result<ExperimentReport> {
    if c.is_central(FIBER_TOL) {
        return Err(Error::CentralFiber);
    }
    if samples == 0 {
        return Err(Error::InvalidInput("census needs at least one sample".into()));
    }
    let p = base_point(c);
    p.check()?;
    let base_rank = d_kappa(&p).rank();
    let base_b_regular = p.b().is_regular();

    let mut q = random_flow_walk(&p, opts.warmup, DEFAULT_MAX_TIME, rng)?;
    let mut full = 0usize;
    let mut generic = 0usize;
    let mut consistent = true;
    let mut smallest_sigma = f64::INFINITY;
    for _ in 0..samples {
        q = random_flow_walk(&q, opts.spacing, DEFAULT_MAX_TIME, rng)?.renormalized()?;
        let dk = d_kappa(&q);
        let rank = dk.rank();
        let meet = centralizer_intersection(q.a(), q.b());
        consistent &= rank + meet == 8;
        if rank == 8 {
            full += 1;
        }
        if is_generic(q.b(), opts.height, opts.tol) {
            generic += 1;
        }
        smallest_sigma = smallest_sigma.min(dk.singular_values()[7]);
    }
    let rank_fraction = full as f64 / samples as f64;
    let generic_fraction = generic as f64 / samples as f64;

    let mut report = ExperimentReport::new("submersion_census", "flow_walk");
    report.threshold("rank_fraction", opts.rank_fraction);
    report.count("samples", samples as u64);
    report.count("rank_base_point", base_rank as u64);
    report.flag("base_b_regular", base_b_regular);
    report.stat("rank8_fraction", rank_fraction)?;
    report.stat("generic_b_fraction", generic_fraction)?;
    report.stat("min_singular_value", smallest_sigma)?;
    report.flag("rank_matches_centralizer", consistent);
    report.check("rank_fraction", rank_fraction >= opts.rank_fraction);
    report.check("rank_matches_centralizer", consistent);
    if base_b_regular {
        report.check("base_point_rank", base_rank == 8);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::su3::haar_random;

    #[test]
    fn census_on_random_fiber() {
        let mut rng = crate::rng::stream(111);
        let c = haar_random(&mut rng);
        let r = submersion_census(&c, 100, &CensusOptions::default(), &mut rng).unwrap();
        assert!(r.passed(), "{:?}", r.stats);
        assert_eq!(r.get("rank_base_point"), Some(8.0));
        assert!(r.get("generic_b_fraction").unwrap() >= 0.95);
    }

    #[test]
    fn central_rejected() {
        let mut rng = crate::rng::stream(112);
        for k in 0..3 {
            assert!(matches!(
                submersion_census(&SpecialUnitary3::central(k), 10, &CensusOptions::default(), &mut rng),
                Err(Error::CentralFiber)
            ));
        }
    }
}
