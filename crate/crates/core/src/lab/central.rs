use super::report::ExperimentReport;
use crate::error::Result;
use crate::fiber::central_fiber_point;
use crate::mcg::{apply_word, Letter, TwistWord};
use crate::su3::SpecialUnitary3;
use crate::trace::{character, character_distance};

/// Two group elements closer than this are identified during enumeration.
pub const GROUP_MATCH_TOL: f64 = 1e-9;

/// Enumeration stops once this many elements have been found.
pub const GROUP_ORDER_CAP: usize = 10_000;

/// Order of the subgroup generated by `gens`, by closure under right
/// multiplication. Only valid for finite groups whose generators have finite
/// order; returns `None` past [`GROUP_ORDER_CAP`].
pub fn generated_group_order(gens: &[SpecialUnitary3], tol: f64) -> Option<usize> {
    let mut elements = vec![SpecialUnitary3::identity()];
    let mut frontier = 0;
    while frontier < elements.len() {
        let g = elements[frontier];
        frontier += 1;
        for s in gens {
            let h = g * *s;
            if !elements.iter().any(|e| e.distance(&h) <= tol) {
                if elements.len() >= GROUP_ORDER_CAP {
                    return None;
                }
                elements.push(h);
            }
        }
    }
    Some(elements.len())
}

/// All words of the given length over the four twist letters.
pub fn all_words(length: usize) -> Vec<TwistWord> {
    let mut words = vec![TwistWord::default()];
    for _ in 0..length {
        words = words
            .iter()
            .flat_map(|w| {
                Letter::ALL.iter().map(move |l| {
                    let mut letters = w.letters.clone();
                    letters.push(*l);
                    TwistWord::new(letters)
                })
            })
            .collect();
    }
    words
}

/// Checks on the fiber over `ω·Id`, which is a single conjugacy class.
pub fn central_fiber_rigidity() -> Result<ExperimentReport> {
    let p = central_fiber_point(1)?;
    let (a, b) = (*p.a(), *p.b());
    let id = SpecialUnitary3::identity();
    let kappa_residual = p.residual();
    let cube_a = a.powu(3).distance(&id);
    let cube_b = b.powu(3).distance(&id);
    let trace_a = a.trace().norm();
    let nonabelian = (a * b).distance(&(b * a)) > 1e-6;
    let order = generated_group_order(&[a, b], GROUP_MATCH_TOL);

    let base = character(&p);
    let mut spread: f64 = 0.0;
    for w in all_words(4) {
        let q = apply_word(&w, &p)?;
        spread = spread.max(character_distance(&character(&q), &base));
    }

    let mut report = ExperimentReport::new("central_fiber_rigidity", "enumeration");
    report.threshold("kappa", 1e-14);
    report.threshold("cube", 1e-13);
    report.threshold("character_spread", 1e-9);
    report.stat("kappa_residual", kappa_residual)?;
    report.stat("a_cube_residual", cube_a)?;
    report.stat("b_cube_residual", cube_b)?;
    report.stat("trace_a_abs", trace_a)?;
    report.flag("nonabelian", nonabelian);
    report.count("group_order", order.unwrap_or(0) as u64);
    report.count("words_checked", 256);
    report.stat("character_spread", spread)?;
    report.check("kappa", kappa_residual <= 1e-14);
    report.check("cube", cube_a <= 1e-13 && cube_b <= 1e-13);
    report.check("group_order", order == Some(27) && nonabelian);
    report.check("character_spread", spread <= 1e-9);
    Ok(report)
}
