//! Scalar root finding: uniform bracketing scan, bisection, Newton polish.

/// Intervals `[lo, hi]` of width `step` on which `f` changes sign, scanning
/// from `start` to `end`. Exact zeros on a scan node open a bracket ending there.
pub fn scan_brackets<F>(f: F, start: f64, end: f64, step: f64) -> Vec<(f64, f64)>
where
    F: Fn(f64) -> f64,
{
    assert!(step > 0.0, "scan step must be positive");
    let mut out = Vec::new();
    if !(end > start) {
        return out;
    }
    let n = ((end - start) / step).ceil() as usize;
    let mut x0 = start;
    let mut f0 = f(x0);
    for i in 1..=n {
        let x1 = (start + i as f64 * step).min(end);
        let f1 = f(x1);
        if f1 == 0.0 || (f0 != 0.0 && f0.signum() != f1.signum()) {
            out.push((x0, x1));
        }
        x0 = x1;
        f0 = f1;
    }
    out
}

/// Bisects a sign-changing bracket down to `width`.
pub fn bisect<F>(f: F, mut lo: f64, mut hi: f64, width: f64) -> f64
where
    F: Fn(f64) -> f64,
{
    let mut flo = f(lo);
    if flo == 0.0 {
        return lo;
    }
    if f(hi) == 0.0 {
        return hi;
    }
    // 200 halvings take any finite double bracket below f64 resolution
    for _ in 0..200 {
        if hi - lo <= width {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// One Newton step from `x`, kept only if it stays within `[lo, hi]` and
/// does not increase `|f|`.
pub fn newton_polish<F, D>(f: F, df: D, x: f64, lo: f64, hi: f64) -> f64
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let fx = f(x);
    let d = df(x);
    if fx == 0.0 || d == 0.0 || !d.is_finite() {
        return x;
    }
    let candidate = x - fx / d;
    if candidate >= lo && candidate <= hi && f(candidate).abs() <= fx.abs() {
        candidate
    } else {
        x
    }
}

/// Scan, bisect and polish every root of `f` on `(start, end]`.
pub fn all_roots<F, D>(f: F, df: D, start: f64, end: f64, step: f64, width: f64) -> Vec<f64>
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    scan_brackets(&f, start, end, step)
        .into_iter()
        .map(|(lo, hi)| {
            let x = bisect(&f, lo, hi, width);
            newton_polish(&f, &df, x, lo, hi)
        })
        .collect()
}
