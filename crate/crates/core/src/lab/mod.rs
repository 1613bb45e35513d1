//! Seeded statistical experiments on the twist and flow actions.
//!
//! Each experiment returns an [`ExperimentReport`]. [`run_experiment`] runs
//! the configured number of trials, each on its own random stream derived
//! from the seed and the trial index, and merges them in trial order.

mod abelian;
mod census;
mod central;
mod coset;
pub mod ks;
mod orbit;
mod report;

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

pub use abelian::{abelian_hyperbolic_test, diagonal_observables, toral_step, AbelianOptions};
pub use census::{submersion_census, CensusOptions};
pub use central::{all_words, central_fiber_rigidity, generated_group_order, GROUP_MATCH_TOL};
pub use coset::{coset_twist_orbit, CosetOptions, PERIOD_TOL};
pub use orbit::{
    ks_by_coordinate, mcg_orbit_distribution, orbit_samples, OrbitOptions, KS_COORDS,
    KS_COORD_NAMES,
};
pub use report::ExperimentReport;

use crate::error::{Error, Result};
use crate::fiber::{base_point, RepPoint};
use crate::flows::{random_flow_walk, DEFAULT_MAX_TIME};
use crate::mcg::TwistWord;
use crate::rng::{trial_stream, Stream};
use crate::su3::{haar_random, SpecialUnitary3};
use crate::trace::{char_poly_roots, TracePoint, BOUNDARY_TOL, DEFAULT_HEIGHT, DEFAULT_RELATION_TOL};

/// Flow steps taken from the base point before an experiment starts.
pub const DEFAULT_WARMUP: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExperimentKind {
    CosetTwistOrbit,
    McgOrbitDistribution,
    AbelianHyperbolicTest,
    CentralFiberRigidity,
    SubmersionCensus,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 5] = [
        ExperimentKind::CosetTwistOrbit,
        ExperimentKind::McgOrbitDistribution,
        ExperimentKind::AbelianHyperbolicTest,
        ExperimentKind::CentralFiberRigidity,
        ExperimentKind::SubmersionCensus,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ExperimentKind::CosetTwistOrbit => "coset_twist_orbit",
            ExperimentKind::McgOrbitDistribution => "mcg_orbit_distribution",
            ExperimentKind::AbelianHyperbolicTest => "abelian_hyperbolic_test",
            ExperimentKind::CentralFiberRigidity => "central_fiber_rigidity",
            ExperimentKind::SubmersionCensus => "submersion_census",
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ExperimentKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown experiment kind {s:?}")))
    }
}

/// How the fiber label `c` is given.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FiberSpec {
    /// Diagonal `c` whose trace is `z`; must lie in the interior of the trace domain.
    Trace(Complex64),
    /// `diag(e^{2πiθ₁}, e^{2πiθ₂}, e^{−2πi(θ₁+θ₂)})`.
    Angles([f64; 2]),
    /// Haar-random `c`, drawn from the trial stream.
    Haar,
    /// `ω^k·Id`.
    Central(u32),
}

impl FiberSpec {
    pub fn resolve<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<SpecialUnitary3> {
        match self {
            FiberSpec::Trace(z) => {
                let t = TracePoint::new(*z)?;
                if !(t.defect() < -BOUNDARY_TOL) {
                    return Err(Error::InvalidInput(format!(
                        "trace {} lies on the boundary of the trace domain (repeated eigenvalues); \
                         give an interior trace",
                        z
                    )));
                }
                Ok(char_poly_roots(t)?.to_diagonal())
            }
            FiberSpec::Angles(th) => {
                if th.iter().any(|v| !v.is_finite()) {
                    return Err(Error::InvalidInput("fiber angles must be finite".into()));
                }
                Ok(SpecialUnitary3::torus(*th))
            }
            FiberSpec::Haar => Ok(haar_random(rng)),
            FiberSpec::Central(k) => Ok(SpecialUnitary3::central(*k)),
        }
    }
}

impl fmt::Display for FiberSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiberSpec::Trace(z) => write!(f, "trace={},{}", z.re, z.im),
            FiberSpec::Angles(t) => write!(f, "angles={},{}", t[0], t[1]),
            FiberSpec::Haar => write!(f, "haar"),
            FiberSpec::Central(k) => write!(f, "central={k}"),
        }
    }
}

/// Parses `N` comma-separated finite reals.
pub fn parse_real_list<const N: usize>(s: &str, what: &str) -> Result<[f64; N]> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != N {
        return Err(Error::InvalidInput(format!(
            "{what} needs {N} comma-separated numbers, got {s:?}"
        )));
    }
    let mut out = [0.0; N];
    for (o, p) in out.iter_mut().zip(parts) {
        *o = p
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| Error::InvalidInput(format!("{what}: {p:?} is not a finite number")))?;
    }
    Ok(out)
}

/// `trace= re,im`, `angles= θ1,θ2`, `haar` or `central= k`.
impl FromStr for FiberSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "haar" {
            return Ok(FiberSpec::Haar);
        }
        let (tag, rest) = s.split_once('=').ok_or_else(|| {
            Error::InvalidInput(format!(
                "fiber spec {s:?} is not one of trace=re,im | angles=t1,t2 | haar | central=k"
            ))
        })?;
        match tag.trim() {
            "trace" => {
                let [re, im] = parse_real_list::<2>(rest, "trace")?;
                Ok(FiberSpec::Trace(Complex64::new(re, im)))
            }
            "angles" => Ok(FiberSpec::Angles(parse_real_list::<2>(rest, "angles")?)),
            "central" => {
                let k: u32 = rest.trim().parse().map_err(|_| {
                    Error::InvalidInput(format!("central: {:?} is not an integer", rest.trim()))
                })?;
                Ok(FiberSpec::Central(k % 3))
            }
            other => Err(Error::InvalidInput(format!("unknown fiber spec kind {other:?}"))),
        }
    }
}

/// Everything needed to reproduce an experiment run.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub c_spec: FiberSpec,
    /// Orbit length or number of samples.
    pub n: usize,
    pub word_length: usize,
    pub trials: usize,
    pub seed: u64,
    pub height: i64,
    pub tol: f64,
    pub out: Option<PathBuf>,
    /// Angles of `a` for the coset orbit; otherwise `a` comes from the fiber.
    pub a_angles: Option<[f64; 2]>,
    /// Start angles `θ_a1, θ_a2, θ_b1, θ_b2` for the abelian test; otherwise uniform.
    pub start_angles: Option<[f64; 4]>,
    /// Twist word for the abelian test.
    pub word: TwistWord,
    pub warmup: usize,
    pub ks_threshold: f64,
    pub null_threshold: f64,
    /// Haar samples for the space average in the abelian test.
    pub reference_samples: usize,
}

impl ExperimentConfig {
    pub fn new(kind: ExperimentKind, seed: u64) -> Self {
        Self {
            kind,
            c_spec: FiberSpec::Haar,
            n: 1000,
            word_length: 200,
            trials: 1,
            seed,
            height: DEFAULT_HEIGHT,
            tol: DEFAULT_RELATION_TOL,
            out: None,
            a_angles: None,
            start_angles: None,
            word: "aba".parse().expect("static word"),
            warmup: DEFAULT_WARMUP,
            ks_threshold: OrbitOptions::default().ks_threshold,
            null_threshold: OrbitOptions::default().null_threshold,
            reference_samples: AbelianOptions::default().reference_samples,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidInput("N must be at least 1".into()));
        }
        if self.trials == 0 {
            return Err(Error::InvalidInput("trials must be at least 1".into()));
        }
        if self.height < 1 || !(self.tol > 0.0) {
            return Err(Error::InvalidInput("height must be >= 1 and tol > 0".into()));
        }
        Ok(())
    }

    /// Resolved settings as ordered key-value pairs, for manifests.
    pub fn entries(&self) -> Vec<(&'static str, String)> {
        let mut v = vec![
            ("kind", self.kind.to_string()),
            ("c_spec", self.c_spec.to_string()),
            ("N", self.n.to_string()),
            ("word_length", self.word_length.to_string()),
            ("trials", self.trials.to_string()),
            ("seed", self.seed.to_string()),
            ("height", self.height.to_string()),
            ("tol", format!("{:e}", self.tol)),
            ("warmup", self.warmup.to_string()),
            ("word", self.word.to_string()),
            ("ks_threshold", self.ks_threshold.to_string()),
            ("null_threshold", self.null_threshold.to_string()),
            ("reference_samples", self.reference_samples.to_string()),
        ];
        if let Some(a) = self.a_angles {
            v.push(("a_angles", format!("{},{}", a[0], a[1])));
        }
        if let Some(s) = self.start_angles {
            v.push(("start_angles", format!("{},{},{},{}", s[0], s[1], s[2], s[3])));
        }
        if let Some(o) = &self.out {
            v.push(("out", o.display().to_string()));
        }
        v
    }
}

/// A start point on the fiber over `c`: the base point moved by a flow walk.
pub fn fiber_start<R: Rng + ?Sized>(c: &SpecialUnitary3, warmup: usize, rng: &mut R) -> Result<RepPoint> {
    let p = base_point(c);
    random_flow_walk(&p, warmup, DEFAULT_MAX_TIME, rng)?.renormalized()
}

fn run_trial(cfg: &ExperimentConfig, rng: &mut Stream) -> Result<ExperimentReport> {
    match cfg.kind {
        ExperimentKind::CentralFiberRigidity => central_fiber_rigidity(),
        ExperimentKind::CosetTwistOrbit => {
            let p = match cfg.a_angles {
                Some(th) => RepPoint::new(SpecialUnitary3::torus(th), haar_random(rng)),
                None => {
                    let c = cfg.c_spec.resolve(rng)?;
                    fiber_start(&c, cfg.warmup, rng)?
                }
            };
            let opts = CosetOptions {
                height: cfg.height,
                tol: cfg.tol,
                ..Default::default()
            };
            coset_twist_orbit(&p, cfg.n, &opts, rng)
        }
        ExperimentKind::McgOrbitDistribution => {
            let c = cfg.c_spec.resolve(rng)?;
            let s0 = fiber_start(&c, cfg.warmup, rng)?;
            let s1 = fiber_start(&c, cfg.warmup, rng)?;
            let opts = OrbitOptions {
                ks_threshold: cfg.ks_threshold,
                null_threshold: cfg.null_threshold,
            };
            mcg_orbit_distribution([&s0, &s1], cfg.word_length, cfg.n, &opts, rng)
        }
        ExperimentKind::AbelianHyperbolicTest => {
            let angles = match cfg.start_angles {
                Some(a) => a,
                None => std::array::from_fn(|_| rng.random::<f64>()),
            };
            let opts = AbelianOptions {
                reference_samples: cfg.reference_samples,
                ..Default::default()
            };
            abelian_hyperbolic_test(angles, &cfg.word, cfg.n, &opts, rng)
        }
        ExperimentKind::SubmersionCensus => {
            let c = cfg.c_spec.resolve(rng)?;
            let opts = CensusOptions {
                height: cfg.height,
                tol: cfg.tol,
                warmup: cfg.warmup,
                ..Default::default()
            };
            submersion_census(&c, cfg.n, &opts, rng)
        }
    }
}

/// Runs all trials of `cfg` and merges them in trial order.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    let reports: Vec<ExperimentReport> = (0..cfg.trials as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_stream(cfg.seed, i);
            run_trial(cfg, &mut rng)
        })
        .collect::<Result<_>>()?;
    let mut merged = ExperimentReport::merge(reports)?;
    merged.kind = cfg.kind.to_string();
    Ok(merged)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fiber_specs_parse() {
        assert_eq!("haar".parse::<FiberSpec>().unwrap(), FiberSpec::Haar);
        assert_eq!(
            "trace= 0.5, -0.25".parse::<FiberSpec>().unwrap(),
            FiberSpec::Trace(Complex64::new(0.5, -0.25))
        );
        assert_eq!(
            "angles=0.1,0.2".parse::<FiberSpec>().unwrap(),
            FiberSpec::Angles([0.1, 0.2])
        );
        assert_eq!("central= 4".parse::<FiberSpec>().unwrap(), FiberSpec::Central(1));
        for bad in ["", "trace=1", "angles=a,b", "foo=1", "central=x", "trace=nan,0"] {
            assert!(bad.parse::<FiberSpec>().is_err(), "{bad}");
        }
    }

    #[test]
    fn fiber_specs_resolve() {
        let mut rng = crate::rng::stream(121);
        let z = Complex64::new(0.5, 0.25);
        let c = FiberSpec::Trace(z).resolve(&mut rng).unwrap();
        assert!((c.trace() - z).norm() <= 1e-10);
        assert!(FiberSpec::Trace(Complex64::new(3.0, 0.0)).resolve(&mut rng).is_err());
        assert!(FiberSpec::Trace(Complex64::new(-1.0, 0.0)).resolve(&mut rng).is_err());
        assert!(FiberSpec::Trace(Complex64::new(2.0, 2.0)).resolve(&mut rng).is_err());
        let c = FiberSpec::Central(2).resolve(&mut rng).unwrap();
        assert!(c.is_central(1e-15));
    }

    #[test]
    fn kinds_round_trip() {
        for k in ExperimentKind::ALL {
            assert_eq!(k.name().parse::<ExperimentKind>().unwrap(), k);
        }
        assert!("nope".parse::<ExperimentKind>().is_err());
    }

    #[test]
    fn trials_are_deterministic() {
        let mut cfg = ExperimentConfig::new(ExperimentKind::SubmersionCensus, 7);
        cfg.n = 20;
        cfg.trials = 3;
        let r1 = run_experiment(&cfg).unwrap();
        let r2 = run_experiment(&cfg).unwrap();
        assert_eq!(r1.to_json(), r2.to_json());
        assert_eq!(r1.trials, 3);
        assert_eq!(r1.values("rank8_fraction").len(), 3);
    }
}
