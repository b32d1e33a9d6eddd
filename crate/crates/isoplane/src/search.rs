//! One-dimensional search kernels: bracketed bisection and golden-section
//! optimization.
//!
//! The estimators never differentiate anything. Norm evaluations on
//! polyhedral planes are piecewise linear, so every refinement step here is
//! derivative-free and tracks the best point actually evaluated.

/// Inverse golden ratio, the interval shrink factor per golden-section step.
const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Outcome of a bracketed root search that ran out of iterations.
#[derive(Clone, Copy, Debug)]
pub(crate) struct BisectIncomplete {
    pub best_f: f64,
}

/// Bisection on `[a, b]` given `f(a)` and `f(b)` of opposite sign.
///
/// Stops as soon as `|f(mid)| <= ftol`; fails after `max_iter` halvings with
/// the best midpoint seen. The bracket endpoints themselves are accepted as
/// roots when they already satisfy the tolerance.
pub(crate) fn bisect_root(
    f: &mut dyn FnMut(f64) -> f64,
    mut a: f64,
    mut b: f64,
    mut fa: f64,
    fb: f64,
    ftol: f64,
    max_iter: usize,
) -> Result<(f64, f64), BisectIncomplete> {
    debug_assert!(fa * fb <= 0.0, "bisect_root requires a sign change");
    if fa.abs() <= ftol {
        return Ok((a, fa));
    }
    if fb.abs() <= ftol {
        return Ok((b, fb));
    }
    let mut best = (a, fa);
    if fb.abs() < fa.abs() {
        best = (b, fb);
    }
    for _ in 0..max_iter {
        let mid = 0.5 * (a + b);
        let fm = f(mid);
        if fm.abs() < best.1.abs() {
            best = (mid, fm);
        }
        if fm.abs() <= ftol {
            return Ok((mid, fm));
        }
        if fa * fm < 0.0 {
            b = mid;
        } else {
            a = mid;
            fa = fm;
        }
    }
    Err(BisectIncomplete { best_f: best.1 })
}

/// Golden-section maximization of a fallible objective on `[a, b]`.
///
/// Returns the best `(argument, value)` evaluated, which for a unimodal
/// objective converges to the maximum. On kinked or mildly multimodal
/// brackets the result is still never worse than any probe, which is all the
/// grid-plus-refinement estimators rely on.
pub(crate) fn golden_max<E>(
    f: &mut dyn FnMut(f64) -> Result<f64, E>,
    a: f64,
    b: f64,
    xtol: f64,
    max_evals: usize,
) -> Result<(f64, f64), E> {
    let (mut lo, mut hi) = if a <= b { (a, b) } else { (b, a) };
    let mut c = hi - (hi - lo) * INV_PHI;
    let mut d = lo + (hi - lo) * INV_PHI;
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    let mut evals = 2usize;
    let mut best = if fc >= fd { (c, fc) } else { (d, fd) };
    while hi - lo > xtol && evals < max_evals {
        if fc > fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - (hi - lo) * INV_PHI;
            fc = f(c)?;
            if fc > best.1 {
                best = (c, fc);
            }
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + (hi - lo) * INV_PHI;
            fd = f(d)?;
            if fd > best.1 {
                best = (d, fd);
            }
        }
        evals += 1;
    }
    Ok(best)
}

/// Golden-section minimization; see [`golden_max`].
pub(crate) fn golden_min<E>(
    f: &mut dyn FnMut(f64) -> Result<f64, E>,
    a: f64,
    b: f64,
    xtol: f64,
    max_evals: usize,
) -> Result<(f64, f64), E> {
    let mut neg = |x: f64| f(x).map(|v| -v);
    let (arg, value) = golden_max(&mut neg, a, b, xtol, max_evals)?;
    Ok((arg, -value))
}

/// Multilevel dense zoom maximizing an N-dimensional objective.
///
/// At each level the box `center ± half_width` is sampled on a full
/// `(2·per_axis+1)^N` lattice, the box recenters on the best point and
/// shrinks by `per_axis`. The center is part of every lattice, so the value
/// is monotone across levels.
///
/// Directional line searches stall on these objectives: near polyhedral
/// norms the maxima sit at crossings of kinked ridges where no fixed
/// direction set improves. Dense sampling has no direction bias, and the
/// budgets here are small enough that brute force wins.
pub(crate) fn zoom_max<const N: usize, E>(
    f: &mut dyn FnMut(&[f64; N]) -> Result<f64, E>,
    center: [f64; N],
    half_width: [f64; N],
    levels: usize,
    per_axis: usize,
) -> Result<([f64; N], f64), E> {
    let side = 2 * per_axis + 1;
    let total = side.pow(N as u32);
    let mut c = center;
    let mut hw = half_width;
    let mut best_val = f(&c)?;
    for _ in 0..levels {
        let mut best_point = c;
        for code in 0..total {
            let mut p = c;
            let mut rem = code;
            for i in 0..N {
                let offset = (rem % side) as isize - per_axis as isize;
                rem /= side;
                p[i] += offset as f64 * hw[i] / per_axis as f64;
            }
            let val = f(&p)?;
            if val > best_val {
                best_val = val;
                best_point = p;
            }
        }
        c = best_point;
        for h in hw.iter_mut() {
            *h /= per_axis as f64;
        }
    }
    Ok((c, best_val))
}

/// Indices of circular local maxima of `values` (ties with a neighbor count).
pub(crate) fn circular_local_maxima(values: &[f64]) -> Vec<usize> {
    let n = values.len();
    if n == 0 {
        return Vec::new();
    }
    if n == 1 {
        return vec![0];
    }
    (0..n)
        .filter(|&i| {
            let prev = values[(i + n - 1) % n];
            let next = values[(i + 1) % n];
            values[i] >= prev && values[i] >= next && values[i].is_finite()
        })
        .collect()
}

/// Indices of circular local minima of `values`.
pub(crate) fn circular_local_minima(values: &[f64]) -> Vec<usize> {
    let negated: Vec<f64> = values.iter().map(|v| -v).collect();
    circular_local_maxima(&negated)
}
