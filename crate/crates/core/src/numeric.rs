use alloc::vec::Vec;

/// Neumaier-compensated sum taken in descending-magnitude order.
pub(crate) fn stable_sum<I: IntoIterator<Item = f64>>(terms: I) -> f64 {
    let mut terms: Vec<f64> = terms.into_iter().collect();
    terms.sort_by(|a, b| b.abs().total_cmp(&a.abs()));
    let mut sum = 0.0;
    let mut comp = 0.0;
    for x in terms {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// `sqrt(x² + y²)` without needless overflow.
#[inline]
pub(crate) fn hypot(x: f64, y: f64) -> f64 {
    libm::hypot(x, y)
}

/// Wraps an angle into (−π, π].
pub(crate) fn wrap_pi(angle: f64) -> f64 {
    use core::f64::consts::PI;
    let mut a = libm::remainder(angle, 2.0 * PI);
    if a <= -PI {
        a += 2.0 * PI;
    }
    a
}

/// Bisection for a sign change of `f` on `[lo, hi]`, where `f(lo) > 0`
/// and `f(hi) ≤ 0`. Returns the last `x` with `f(x) > 0` side collapsed to
/// within `tol`, or `None` if the bracket is not valid.
pub(crate) fn bisect_descending<F: Fn(f64) -> f64>(
    f: F,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
    max_iter: usize,
) -> Option<f64> {
    if !(f(lo) > 0.0 && f(hi) <= 0.0) {
        return None;
    }
    for _ in 0..max_iter {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Golden-section search for a maximum of `f` on `[lo, hi]`.
/// Returns `(x, f(x), evaluations)`.
pub(crate) fn golden_max<F: Fn(f64) -> f64>(
    f: F,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
    max_iter: usize,
) -> (f64, f64, usize) {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    let mut evals = 2;
    for _ in 0..max_iter {
        if hi - lo <= tol {
            break;
        }
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
        evals += 1;
    }
    let x = 0.5 * (lo + hi);
    let fx = f(x);
    evals += 1;
    // The midpoint need not beat the best interior probe on a flat top.
    let (x, fx) =
        [(x1, f1), (x2, f2)].into_iter().fold(
            (x, fx),
            |best, cand| if cand.1 > best.1 { cand } else { best },
        );
    (x, fx, evals)
}
