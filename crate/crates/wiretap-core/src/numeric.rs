//! Scalar search and log-domain helpers shared by the exponent solvers.

use crate::error::{Error, Result};

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// `ln Σ exp(x_i)`, skipping `-inf` terms. Returns `-inf` for an empty or all-`-inf` input.
pub fn log_sum_exp<I: IntoIterator<Item = f64>>(xs: I) -> f64 {
    let xs: Vec<f64> = xs.into_iter().collect();
    let m = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    if m == f64::INFINITY {
        return m;
    }
    let s: f64 = xs.iter().map(|&x| (x - m).exp()).sum();
    m + s.ln()
}

/// Natural log that maps 0 to `-inf` without complaint.
#[inline]
pub fn ln0(x: f64) -> f64 {
    if x > 0.0 {
        x.ln()
    } else {
        f64::NEG_INFINITY
    }
}

/// `x ln x` with the convention `0 ln 0 = 0`.
#[inline]
pub fn xlnx(x: f64) -> f64 {
    if x > 0.0 {
        x * x.ln()
    } else {
        0.0
    }
}

/// Golden-section maximization of `f` on `[a, b]`, stopping at bracket width `tol`.
///
/// Endpoints are evaluated too and win ties, so a maximum sitting on the
/// boundary (e.g. a tilt of exactly zero) is returned exactly.
pub fn golden_max(f: &mut impl FnMut(f64) -> f64, a: f64, b: f64, tol: f64) -> (f64, f64) {
    let (mut lo, mut hi) = (a, b);
    let fa = f(a);
    let fb = f(b);
    if hi - lo <= tol {
        return if fa >= fb { (a, fa) } else { (b, fb) };
    }
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut iters = 0;
    while hi - lo > tol && iters < 200 {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        }
        iters += 1;
    }
    let mut best = if f1 >= f2 { (x1, f1) } else { (x2, f2) };
    if fa >= best.1 {
        best = (a, fa);
    }
    if fb > best.1 {
        best = (b, fb);
    }
    best
}

/// Coarse uniform scan with `n` intervals, then golden refinement around the best node.
pub fn scan_golden_max(
    f: &mut impl FnMut(f64) -> f64,
    a: f64,
    b: f64,
    n: usize,
    tol: f64,
) -> (f64, f64) {
    if b <= a {
        return (a, f(a));
    }
    let h = (b - a) / n as f64;
    let mut best_i = 0;
    let mut best = (a, f64::NEG_INFINITY);
    for i in 0..=n {
        let x = if i == n { b } else { a + h * i as f64 };
        let v = f(x);
        if v > best.1 {
            best = (x, v);
            best_i = i;
        }
    }
    let lo = if best_i == 0 { a } else { a + h * (best_i - 1) as f64 };
    let hi = if best_i >= n - 1 { b } else { a + h * (best_i + 1) as f64 };
    let refined = golden_max(f, lo, hi, tol);
    if refined.1 > best.1 {
        refined
    } else {
        best
    }
}

/// Bisection for a sign change of `f` on `[a, b]`.
///
/// Stops when the bracket is narrower than `tol` or after `max_iter` halvings.
pub fn bisect(
    mut f: impl FnMut(f64) -> f64,
    a: f64,
    b: f64,
    tol: f64,
    max_iter: usize,
) -> Result<f64> {
    let (mut lo, mut hi) = (a, b);
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.is_nan() || fhi.is_nan() || flo.signum() == fhi.signum() {
        return Err(Error::Solver(format!(
            "no sign change on [{a}, {b}]: f(a)={flo}, f(b)={fhi}"
        )));
    }
    for _ in 0..max_iter {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= tol || mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Largest `x` in `[a, b]` where the monotone predicate still holds, assuming it holds at `a`.
pub fn bisect_predicate(
    mut holds: impl FnMut(f64) -> bool,
    a: f64,
    b: f64,
    tol: f64,
) -> f64 {
    if holds(b) {
        return b;
    }
    let (mut lo, mut hi) = (a, b);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if holds(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lse_matches_naive() {
        let xs = [0.1, -2.0, 1.5];
        let naive: f64 = xs.iter().map(|x: &f64| x.exp()).sum::<f64>().ln();
        assert!((log_sum_exp(xs) - naive).abs() < 1e-14);
        assert_eq!(log_sum_exp([f64::NEG_INFINITY]), f64::NEG_INFINITY);
        assert!((log_sum_exp([1000.0, 1000.0]) - (1000.0 + 2f64.ln())).abs() < 1e-12);
    }

    #[test]
    fn golden_finds_interior_and_boundary() {
        let (x, _) = golden_max(&mut |x| -(x - 0.3) * (x - 0.3), 0.0, 1.0, 1e-10);
        assert!((x - 0.3).abs() < 1e-8);
        let (x, v) = golden_max(&mut |x| -x, 0.0, 1.0, 1e-10);
        assert_eq!(x, 0.0);
        assert_eq!(v, 0.0);
    }

    #[test]
    fn scan_escapes_local_bump() {
        let f = |x: f64| (-(x - 0.1).powi(2) * 400.0).exp() * 0.5 + (-(x - 0.8).powi(2) * 400.0).exp();
        let (x, _) = scan_golden_max(&mut |x| f(x), 0.0, 1.0, 20, 1e-10);
        assert!((x - 0.8).abs() < 1e-6);
    }

    #[test]
    fn bisect_sqrt2() {
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0, 1e-14, 200).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-13);
        assert!(bisect(|x| x * x + 1.0, 0.0, 2.0, 1e-14, 200).is_err());
    }
}
