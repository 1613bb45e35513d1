//! Two-sample Kolmogorov–Smirnov distance.

/// `sup_x |F_x(x) − F_y(x)|` for the empirical distribution functions of two
/// samples. Ties are handled by advancing both samples past equal values.
/// Returns 0 when either sample is empty. NaN values are rejected by sorting
/// them last, so callers should filter them out first.
pub fn ks_two_sample(x: &[f64], y: &[f64]) -> f64 {
    if x.is_empty() || y.is_empty() {
        return 0.0;
    }
    let mut xs = x.to_vec();
    let mut ys = y.to_vec();
    xs.sort_by(f64::total_cmp);
    ys.sort_by(f64::total_cmp);
    ks_sorted(&xs, &ys)
}

/// Same as [`ks_two_sample`] for already sorted inputs.
pub fn ks_sorted(xs: &[f64], ys: &[f64]) -> f64 {
    if xs.is_empty() || ys.is_empty() {
        return 0.0;
    }
    let (n, m) = (xs.len() as f64, ys.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < xs.len() && j < ys.len() {
        let v = if xs[i] <= ys[j] { xs[i] } else { ys[j] };
        while i < xs.len() && xs[i] <= v {
            i += 1;
        }
        while j < ys.len() && ys[j] <= v {
            j += 1;
        }
        d = d.max((i as f64 / n - j as f64 / m).abs());
    }
    d
}
