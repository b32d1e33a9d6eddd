//! Symmetric Minkowski planes and the one-dimensional closed form of Ω.
//!
//! A plane is symmetric with respect to a pair of unit axes `e1, e2` when
//! `‖e1+t·e2‖ = ‖e1−t·e2‖ = ‖e2+t·e1‖ = ‖e2−t·e1‖` for every real `t`. On
//! such planes the isosceles partner of `x = α·e1 + β·e2` is
//! `±(−β·e1 + α·e2)` up to normalization, which collapses the Ω search to a
//! single parameter:
//!
//! ```text
//! Ω = max over t ≥ 0 of ( f(t)² + f(−t)² ) / ( 5·g(t)² )
//! f(t) = ‖(1+2t)e1 + (2−t)e2‖        g(t) = ‖(1+t)e1 + (1−t)e2‖
//! ```
//!
//! The half-line is compactified through `t = s/(1−s)` and the `t → ∞`
//! limit `2‖2e1−e2‖² / (5‖e1−e2‖²)` is appended as an explicit candidate.

use thiserror::Error;

use crate::estimators::{ConstantKind, Direction, Estimate, GridConfig, Witness};
use crate::geometry::NormSpec;
use crate::search::golden_max;
use crate::vec2::Vec2;

/// Defect above which a plane is not treated as symmetric for the given
/// axes; the closed form is gated on it.
pub const AXES_DEFECT_GATE: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SymmetricError {
    #[error("axes are linearly dependent")]
    DependentAxes,
    #[error("plane is not symmetric for these axes (defect = {defect:.3e}, gate = {gate:.1e})")]
    AsymmetricPlane { defect: f64, gate: f64 },
    #[error("invalid grid configuration: {0}")]
    Config(String),
}

/// A candidate pair of axes with its measured symmetry defect.
#[derive(Clone, Copy, Debug)]
pub struct AxesPair {
    pub e1: Vec2,
    pub e2: Vec2,
    /// Largest spread among the four norms over the sampled `t` values.
    pub symmetry_defect: f64,
}

/// Normalize candidate axes to the sphere and measure the symmetry defect.
///
/// Samples `t` log-symmetrically over magnitudes `1e-4 … 10` in both signs,
/// always including `t ∈ {0, ±1}`.
pub fn check_axes(
    spec: &NormSpec,
    e1: Vec2,
    e2: Vec2,
    sample_count: usize,
) -> Result<AxesPair, SymmetricError> {
    if e1.cross(e2).abs() <= 1e-12 * e1.max_abs() * e2.max_abs() {
        return Err(SymmetricError::DependentAxes);
    }
    let e1 = e1.scale(1.0 / spec.norm(e1));
    let e2 = e2.scale(1.0 / spec.norm(e2));

    let mut ts = vec![0.0, 1.0, -1.0];
    let magnitudes = (sample_count.saturating_sub(3) / 2).max(1);
    for i in 0..magnitudes {
        let exp = -4.0 + 5.0 * (i as f64 + 0.5) / magnitudes as f64;
        let m = 10f64.powf(exp);
        ts.push(m);
        ts.push(-m);
    }

    let mut defect = 0.0_f64;
    for &t in &ts {
        let quad = [
            spec.norm(e1 + e2.scale(t)),
            spec.norm(e1 - e2.scale(t)),
            spec.norm(e2 + e1.scale(t)),
            spec.norm(e2 - e1.scale(t)),
        ];
        let hi = quad.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b));
        let lo = quad.iter().fold(f64::INFINITY, |a, &b| a.min(b));
        defect = defect.max(hi - lo);
    }
    Ok(AxesPair {
        e1,
        e2,
        symmetry_defect: defect,
    })
}

/// `f(t) = ‖(1+2t)e1 + (2−t)e2‖`.
pub fn f_func(spec: &NormSpec, e1: Vec2, e2: Vec2, t: f64) -> f64 {
    spec.norm(e1.scale(1.0 + 2.0 * t) + e2.scale(2.0 - t))
}

/// `g(t) = ‖(1+t)e1 + (1−t)e2‖`.
pub fn g_func(spec: &NormSpec, e1: Vec2, e2: Vec2, t: f64) -> f64 {
    spec.norm(e1.scale(1.0 + t) + e2.scale(1.0 - t))
}

/// The closed-form objective `h(t) = (f(t)² + f(−t)²) / (5 g(t)²)`.
pub fn h_func(spec: &NormSpec, e1: Vec2, e2: Vec2, t: f64) -> f64 {
    let ft = f_func(spec, e1, e2, t);
    let fm = f_func(spec, e1, e2, -t);
    let gt = g_func(spec, e1, e2, t);
    (ft * ft + fm * fm) / (5.0 * gt * gt)
}

/// The isosceles pair behind `h(t)`: `x = (e1 + t·e2)` and `y = (t·e1 − e2)`
/// normalized to the sphere. On a symmetric plane `omega_ratio(x, y)`
/// reproduces `h(t)` identically, which ties the closed form back to the
/// two-dimensional definition.
pub fn axis_pair_at(spec: &NormSpec, e1: Vec2, e2: Vec2, t: f64) -> (Vec2, Vec2) {
    let x_raw = e1 + e2.scale(t);
    let y_raw = e1.scale(t) - e2;
    let x = x_raw.scale(1.0 / spec.norm(x_raw));
    let y = y_raw.scale(1.0 / spec.norm(y_raw));
    (x, y)
}

/// Ω on a symmetric plane by maximizing `h` over `t ∈ [0, ∞)`.
///
/// Fails when `axes.symmetry_defect` exceeds [`AXES_DEFECT_GATE`]; the
/// reduction is only valid on symmetric planes, near misses must go through
/// the generic estimator.
pub fn omega_closed_form(
    spec: &NormSpec,
    axes: &AxesPair,
    cfg: &GridConfig,
) -> Result<Estimate, SymmetricError> {
    if axes.symmetry_defect > AXES_DEFECT_GATE {
        return Err(SymmetricError::AsymmetricPlane {
            defect: axes.symmetry_defect,
            gate: AXES_DEFECT_GATE,
        });
    }
    cfg.validate().map_err(|e| SymmetricError::Config(e.to_string()))?;
    let (e1, e2) = (axes.e1, axes.e2);
    let n = cfg.theta_grid;

    // Grid over s ∈ [0, 1), t = s/(1−s).
    let mut best = (h_func(spec, e1, e2, 0.0), 0.0_f64);
    let mut values = Vec::with_capacity(n);
    for j in 0..n {
        let s = j as f64 / n as f64;
        let t = s / (1.0 - s);
        let h = h_func(spec, e1, e2, t);
        values.push(h);
        if h > best.0 {
            best = (h, t);
        }
    }

    // Refine the strongest grid cells in s.
    let mut seeds = crate::search::circular_local_maxima(&values);
    seeds.sort_by(|&a, &b| values[b].partial_cmp(&values[a]).unwrap().then(a.cmp(&b)));
    seeds.truncate(8);
    for j in seeds {
        let s0 = j as f64 / n as f64;
        let ds = 1.0 / n as f64;
        let mut f = |s: f64| {
            let s = s.clamp(0.0, 1.0 - 1e-12);
            let t = s / (1.0 - s);
            Ok::<f64, std::convert::Infallible>(h_func(spec, e1, e2, t))
        };
        let (s_star, h_star) = match golden_max(&mut f, s0 - ds, s0 + ds, 1e-13, cfg.refine_budget)
        {
            Ok(found) => found,
            Err(never) => match never {},
        };
        let s_star = s_star.clamp(0.0, 1.0 - 1e-12);
        if h_star > best.0 {
            best = (h_star, s_star / (1.0 - s_star));
        }
    }

    // t → ∞ limit from the leading terms of f and g.
    let top = spec.norm(e1.scale(2.0) - e2);
    let bottom = spec.norm(e1 - e2);
    let limit = 2.0 * top * top / (5.0 * bottom * bottom);
    if limit > best.0 + cfg.refine_tol {
        best = (limit, f64::INFINITY);
    }

    let witness = if best.1.is_finite() {
        let (x, y) = axis_pair_at(spec, e1, e2, best.1);
        Witness { x, y, param: Some(best.1) }
    } else {
        // The limiting direction of the pair construction.
        let x = e2.scale(1.0 / spec.norm(e2));
        let y_raw = e1;
        Witness {
            x,
            y: y_raw.scale(1.0 / spec.norm(y_raw)),
            param: Some(f64::INFINITY),
        }
    };
    Ok(Estimate {
        constant: ConstantKind::Omega,
        value: best.0,
        witness,
        grid_size: n,
        refine_tol: cfg.refine_tol,
        direction: Direction::Supremum,
    })
}
