//! Isosceles and Birkhoff orthogonality on a normed plane.
//!
//! `x` is isosceles orthogonal to `y` when `‖x+y‖ = ‖x−y‖`, and Birkhoff
//! orthogonal when `‖x+λy‖ ≥ ‖x‖` for every real `λ`. Both notions are
//! solved for numerically here: isosceles partners by a sign-change scan
//! plus bisection on the residual, Birkhoff partners by minimizing the
//! convex map `λ ↦ ‖x+λy‖`.

use std::f64::consts::{PI, TAU};

use thiserror::Error;

use crate::geometry::{NormSpec, SpherePoint};
use crate::search::{bisect_root, circular_local_maxima, golden_min};
use crate::vec2::Vec2;

/// Scan resolution of the partner solvers over the full circle.
pub const PARTNER_SCAN_POINTS: usize = 720;

/// Bisection budget per root bracket. Two hundred halvings exhaust double
/// precision many times over, so hitting the budget signals a genuine
/// anomaly rather than a tight tolerance.
const BISECT_BUDGET: usize = 200;

/// Solver failures.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolveError {
    #[error(
        "residual did not reach {tol:.3e} within {iters} bisection steps (best |residual| = {best:.3e})"
    )]
    Convergence { tol: f64, iters: usize, best: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

/// Which orthogonality a certified pair refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrthoKind {
    Isosceles,
    Birkhoff,
}

/// A pair `(x, y)` with a residual certifying its orthogonality.
///
/// For isosceles pairs the residual is `‖x+y‖ − ‖x−y‖`; for Birkhoff pairs
/// it is `min_λ ‖x+λy‖ − ‖x‖`, which is never below minus the solver
/// tolerance.
#[derive(Clone, Copy, Debug)]
pub struct OrthoPair {
    pub x: Vec2,
    pub y: Vec2,
    pub residual: f64,
    pub kind: OrthoKind,
}

impl OrthoPair {
    /// Certify `(x, y)` as a Birkhoff pair by solving the λ-minimum.
    pub fn birkhoff(spec: &NormSpec, x: Vec2, y: Vec2) -> OrthoPair {
        let (_, min_value) = birkhoff_lambda_min(spec, x, y);
        OrthoPair {
            x,
            y,
            residual: min_value - spec.norm(x),
            kind: OrthoKind::Birkhoff,
        }
    }
}

/// The isosceles residual `‖x+y‖ − ‖x−y‖`.
///
/// Antisymmetric under `y ↦ −y` exactly: the two subtractions swap operands
/// and every norm in the catalog evaluates negated vectors bit-identically.
#[inline]
pub fn isosceles_residual(spec: &NormSpec, x: Vec2, y: Vec2) -> f64 {
    spec.norm(x + y) - spec.norm(x - y)
}

/// An isosceles partner root together with its direction angle.
#[derive(Clone, Copy, Debug)]
pub(crate) struct PartnerRoot {
    pub phi: f64,
    pub pair: OrthoPair,
}

/// All isosceles partners of `x = unit_point(theta_x)` at the given radius.
///
/// The residual `φ ↦ ‖x + r·u(φ)‖ − ‖x − r·u(φ)‖` is continuous and flips
/// sign under `φ ↦ φ+π`, so roots always exist and come in antipodal pairs.
/// The solver scans half the circle at [`PARTNER_SCAN_POINTS`] resolution,
/// bisects every sign-change bracket to `|residual| ≤ tol`, and mirrors each
/// root, so the returned list is closed under `y ↦ −y`.
pub fn isosceles_partner(
    spec: &NormSpec,
    theta_x: f64,
    radius: f64,
    tol: f64,
) -> Result<Vec<OrthoPair>, SolveError> {
    Ok(isosceles_partner_roots(spec, theta_x, radius, tol)?
        .into_iter()
        .map(|root| root.pair)
        .collect())
}

pub(crate) fn isosceles_partner_roots(
    spec: &NormSpec,
    theta_x: f64,
    radius: f64,
    tol: f64,
) -> Result<Vec<PartnerRoot>, SolveError> {
    if radius.is_nan() || radius <= 0.0 || radius > 1.0 {
        return Err(SolveError::InvalidArgument(format!(
            "radius must lie in (0, 1], got {radius}"
        )));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(SolveError::InvalidArgument(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let x = spec.unit_point(theta_x).coords;

    let half = PARTNER_SCAN_POINTS / 2;
    let step = TAU / PARTNER_SCAN_POINTS as f64;
    let dirs: Vec<Vec2> = (0..half)
        .map(|i| spec.unit_point(i as f64 * step).coords)
        .collect();
    let residuals: Vec<f64> = dirs
        .iter()
        .map(|&u| isosceles_residual(spec, x, u.scale(radius)))
        .collect();

    let mut half_roots: Vec<(f64, Vec2, f64)> = Vec::new();
    for i in 0..half {
        let fa = residuals[i];
        let phi_a = i as f64 * step;
        if fa == 0.0 {
            half_roots.push((phi_a, dirs[i].scale(radius), 0.0));
            continue;
        }
        // The scan covers [0, π); the value at π is exactly -residuals[0].
        let fb = if i + 1 < half { residuals[i + 1] } else { -residuals[0] };
        if fa * fb < 0.0 {
            let phi_b = (i + 1) as f64 * step;
            let mut f = |phi: f64| {
                isosceles_residual(spec, x, spec.unit_point(phi).coords.scale(radius))
            };
            match bisect_root(&mut f, phi_a, phi_b, fa, fb, tol, BISECT_BUDGET) {
                Ok((phi, fval)) => {
                    half_roots.push((phi, spec.unit_point(phi).coords.scale(radius), fval));
                }
                Err(incomplete) => {
                    return Err(SolveError::Convergence {
                        tol,
                        iters: BISECT_BUDGET,
                        best: incomplete.best_f.abs(),
                    });
                }
            }
        }
    }

    let mut roots = Vec::with_capacity(2 * half_roots.len());
    for (phi, y, res) in half_roots {
        roots.push(PartnerRoot {
            phi,
            pair: OrthoPair {
                x,
                y,
                residual: res,
                kind: OrthoKind::Isosceles,
            },
        });
        roots.push(PartnerRoot {
            phi: phi + PI,
            pair: OrthoPair {
                x,
                y: -y,
                residual: -res,
                kind: OrthoKind::Isosceles,
            },
        });
    }
    roots.sort_by(|a, b| a.phi.partial_cmp(&b.phi).unwrap());
    Ok(roots)
}

/// Global minimizer of the convex map `λ ↦ ‖x+λy‖`.
///
/// Returns `(λ*, min value)`. Polyhedral norms produce flat minima; any
/// point of the flat set may be reported, the value is what matters. The
/// value is accurate to `1e-10·(1+‖x‖)` and never exceeds `‖x‖` since
/// `λ = 0` is always a candidate.
pub fn birkhoff_lambda_min(spec: &NormSpec, x: Vec2, y: Vec2) -> (f64, f64) {
    let nx = spec.norm(x);
    let ny = spec.norm(y);
    if ny == 0.0 {
        return (0.0, nx);
    }
    // ‖x+λy‖ ≥ |λ|·‖y‖ − ‖x‖ > ‖x‖ once |λ| > 2‖x‖/‖y‖, so this bracket
    // already contains the minimum; the doubling loop is a safety net.
    let mut half_width = 2.0 * nx / ny + 1.0;
    for _ in 0..60 {
        let lo = spec.norm(x + y.scale(-half_width));
        let hi = spec.norm(x + y.scale(half_width));
        if lo >= nx && hi >= nx {
            break;
        }
        half_width *= 2.0;
    }
    let xtol = (1e-11 * (1.0 + nx) / ny).max(f64::EPSILON * half_width);
    let mut objective =
        |lambda: f64| Ok::<f64, std::convert::Infallible>(spec.norm(x + y.scale(lambda)));
    let (arg, value) = golden_min(&mut objective, -half_width, half_width, xtol, 400)
        .unwrap_or((0.0, nx));
    if nx <= value {
        (0.0, nx)
    } else {
        (arg, value)
    }
}

/// Whether `x` is Birkhoff orthogonal to `y` within `tol`.
pub fn is_birkhoff(spec: &NormSpec, x: Vec2, y: Vec2, tol: f64) -> bool {
    let (_, min_value) = birkhoff_lambda_min(spec, x, y);
    min_value >= spec.norm(x) - tol
}

/// Every unit direction Birkhoff orthogonal to `x = unit_point(theta_x)`.
///
/// Scans the circle at [`PARTNER_SCAN_POINTS`] resolution and keeps each
/// direction whose λ-minimum stays within `tol` of `‖x‖`; isolated partner
/// directions that fall between grid points are recovered by refining the
/// local maxima of the deficiency. The result is closed under sign and never
/// empty (Birkhoff partners always exist on a plane).
pub fn birkhoff_partners(spec: &NormSpec, theta_x: f64, tol: f64) -> Vec<SpherePoint> {
    birkhoff_partner_points(spec, theta_x, tol)
        .into_iter()
        .map(|(_, point)| point)
        .collect()
}

pub(crate) fn birkhoff_partner_points(
    spec: &NormSpec,
    theta_x: f64,
    tol: f64,
) -> Vec<(f64, SpherePoint)> {
    let x = spec.unit_point(theta_x).coords;
    let nx = spec.norm(x);

    // The deficiency h(φ) = min_λ‖x+λu(φ)‖ − ‖x‖ ≤ 0 satisfies h(φ+π) = h(φ)
    // exactly, so scanning half the circle suffices.
    let half = PARTNER_SCAN_POINTS / 2;
    let step = TAU / PARTNER_SCAN_POINTS as f64;
    let points: Vec<SpherePoint> = (0..half)
        .map(|i| spec.unit_point(i as f64 * step))
        .collect();
    let deficiency: Vec<f64> = points
        .iter()
        .map(|p| birkhoff_lambda_min(spec, x, p.coords).1 - nx)
        .collect();

    let mut found: Vec<(f64, SpherePoint)> = Vec::new();
    for (i, point) in points.iter().enumerate() {
        if deficiency[i] >= -tol {
            found.push((point.theta, *point));
        }
    }
    for i in circular_local_maxima(&deficiency) {
        if deficiency[i] >= -tol {
            continue; // already accepted from the grid
        }
        let center = i as f64 * step;
        let mut h = |phi: f64| {
            Ok::<f64, std::convert::Infallible>(
                birkhoff_lambda_min(spec, x, spec.unit_point(phi).coords).1 - nx,
            )
        };
        let (phi, best) =
            crate::search::golden_max(&mut h, center - step, center + step, 1e-12, 120)
                .unwrap_or((center, deficiency[i]));
        if best >= -tol {
            let phi = phi.rem_euclid(TAU);
            found.push((phi, spec.unit_point(phi)));
        }
    }
    found.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    found.dedup_by(|a, b| (a.0 - b.0).abs() <= 1e-9);

    let mut out = Vec::with_capacity(2 * found.len());
    for (phi, point) in found {
        let antipode = point.antipode();
        out.push((phi, point));
        out.push((antipode.theta, antipode));
    }
    out.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    fn v(x1: f64, x2: f64) -> Vec2 {
        Vec2::new(x1, x2)
    }

    #[test]
    fn residual_examples() {
        let linf = NormSpec::linf();
        assert_eq!(isosceles_residual(&linf, v(1.0, 0.0), v(0.0, 1.0)), 0.0);

        let hex = NormSpec::hexagonal();
        let r = isosceles_residual(&hex, v(1.0 / 3.0, 1.0), v(1.0, 1.0 / 3.0));
        assert!(r.abs() < 1e-15, "Case I maximizer pair must be isosceles, got {r}");

        assert_eq!(isosceles_residual(&hex, v(0.3, -0.9), Vec2::ZERO), 0.0);
    }

    #[test]
    fn residual_antisymmetry_is_exact() {
        let specs = [NormSpec::l2(), NormSpec::hexagonal(), NormSpec::lp(2.5).unwrap()];
        for spec in &specs {
            for k in 0..300 {
                let x = v((k as f64 * 0.13).sin(), (k as f64 * 0.29).cos());
                let y = v((k as f64 * 0.41).cos(), (k as f64 * 0.07).sin());
                assert_eq!(
                    isosceles_residual(spec, x, y),
                    -isosceles_residual(spec, x, -y)
                );
            }
        }
    }

    #[test]
    fn euclidean_partner_is_perpendicular() {
        let l2 = NormSpec::l2();
        let roots = isosceles_partner(&l2, 0.0, 1.0, 1e-12).unwrap();
        assert_eq!(roots.len(), 2);
        for pair in &roots {
            assert!(pair.y.x1.abs() < 1e-9);
            assert!((pair.y.x2.abs() - 1.0).abs() < 1e-9);
            assert!(pair.residual.abs() <= 1e-12);
        }
    }

    #[test]
    fn linf_partner_at_corner() {
        let linf = NormSpec::linf();
        let roots = isosceles_partner(&linf, FRAC_PI_4, 1.0, 1e-12).unwrap();
        let hit = roots.iter().any(|p| (p.y - v(1.0, -1.0)).max_abs() < 1e-6)
            && roots.iter().any(|p| (p.y - v(-1.0, 1.0)).max_abs() < 1e-6);
        assert!(hit, "expected ±(1,-1) among {roots:?}");
        for pair in &roots {
            let x = pair.x;
            let y = pair.y;
            assert!((linf.norm(x + y) - linf.norm(x - y)).abs() <= 1e-12);
        }
    }

    #[test]
    fn hexagonal_partner_matches_case_one() {
        let hex = NormSpec::hexagonal();
        let theta = (1.0_f64).atan2(1.0 / 3.0);
        let roots = isosceles_partner(&hex, theta, 1.0, 1e-12).unwrap();
        let hit = roots
            .iter()
            .any(|p| (p.y - v(1.0, 1.0 / 3.0)).max_abs() < 1e-6);
        assert!(hit, "expected (1, 1/3) among {roots:?}");
    }

    #[test]
    fn partner_list_is_sign_closed() {
        for spec in [NormSpec::hexagonal(), NormSpec::lp(1.5).unwrap()] {
            for k in 0..8 {
                let theta = 0.11 + k as f64 * 0.7;
                let roots = isosceles_partner(&spec, theta, 0.8, 1e-12).unwrap();
                assert!(!roots.is_empty());
                for pair in &roots {
                    assert!(
                        roots
                            .iter()
                            .any(|q| q.y.x1 == -pair.y.x1 && q.y.x2 == -pair.y.x2),
                        "missing mirror of {:?}",
                        pair.y
                    );
                }
            }
        }
    }

    #[test]
    fn partner_scale_consistency() {
        let spec = NormSpec::hexagonal();
        let roots = isosceles_partner(&spec, 0.9, 1.0, 1e-12).unwrap();
        let pair = roots[0];
        for lambda in [0.25, 2.0, 7.5] {
            let scaled = isosceles_residual(&spec, pair.x.scale(lambda), pair.y.scale(lambda));
            assert!((scaled - lambda * pair.residual).abs() <= 1e-12 * lambda.max(1.0));
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        let l2 = NormSpec::l2();
        assert!(isosceles_partner(&l2, 0.0, 0.0, 1e-9).is_err());
        assert!(isosceles_partner(&l2, 0.0, 1.5, 1e-9).is_err());
        assert!(isosceles_partner(&l2, 0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn convergence_error_carries_best_residual() {
        // A subnormal tolerance cannot be met when the residual at the
        // converged bracket is a nonzero float, so the bisection budget runs
        // out and the best residual is reported.
        let spec = NormSpec::lp(1.5).unwrap();
        let err = isosceles_partner(&spec, 0.2, 1.0, 5e-324).unwrap_err();
        match err {
            SolveError::Convergence { best, iters, .. } => {
                assert_eq!(iters, 200);
                assert!(best.is_finite());
                assert!(best.abs() < 1e-9, "bisection stalled far from the root: {best}");
            }
            other => panic!("expected a convergence error, got {other:?}"),
        }
    }

    #[test]
    fn lambda_min_euclidean() {
        let l2 = NormSpec::l2();
        let (lambda, value) = birkhoff_lambda_min(&l2, v(1.0, 0.0), v(0.0, 1.0));
        assert!(lambda.abs() < 1e-6);
        assert!((value - 1.0).abs() < 1e-10);

        let s = std::f64::consts::FRAC_1_SQRT_2;
        let (lambda, value) = birkhoff_lambda_min(&l2, v(s, s), v(1.0, 0.0));
        assert!((lambda + s).abs() < 1e-5);
        assert!((value - s).abs() < 1e-10);
    }

    #[test]
    fn lambda_min_flat_plateau() {
        let linf = NormSpec::linf();
        let (lambda, value) = birkhoff_lambda_min(&linf, v(1.0, 0.5), v(0.0, 1.0));
        assert!((value - 1.0).abs() < 1e-10);
        assert!((-1.5..=0.5).contains(&lambda), "λ*={lambda} outside the flat set");
    }

    #[test]
    fn lambda_min_never_exceeds_norm_x() {
        let spec = NormSpec::lp(3.0).unwrap();
        for k in 0..100 {
            let x = v((k as f64 * 0.3).cos(), (k as f64 * 0.51).sin() * 1.4);
            let y = v((k as f64 * 0.17).sin(), (k as f64 * 0.23).cos());
            let (_, value) = birkhoff_lambda_min(&spec, x, y);
            assert!(value <= spec.norm(x));
        }
    }

    #[test]
    fn is_birkhoff_examples() {
        let l2 = NormSpec::l2();
        assert!(is_birkhoff(&l2, v(1.0, 0.0), v(0.0, 1.0), 1e-9));
        assert!(!is_birkhoff(&l2, v(1.0, 0.0), v(1.0, 1.0), 1e-9));
        let linf = NormSpec::linf();
        assert!(is_birkhoff(&linf, v(1.0, 0.5), v(0.0, 1.0), 1e-9));
    }

    #[test]
    fn euclidean_partners_are_the_two_perpendiculars() {
        let l2 = NormSpec::l2();
        let partners = birkhoff_partners(&l2, 0.0, 1e-9);
        assert_eq!(partners.len(), 2);
        assert!((partners[0].coords - v(0.0, 1.0)).max_abs() < 1e-9);
        assert!((partners[1].coords - v(0.0, -1.0)).max_abs() < 1e-9);
    }

    #[test]
    fn euclidean_partners_found_off_grid() {
        let l2 = NormSpec::l2();
        let partners = birkhoff_partners(&l2, 0.000173, 1e-9);
        assert!(!partners.is_empty());
        for p in &partners {
            assert!(is_birkhoff(&l2, l2.unit_point(0.000173).coords, p.coords, 1e-8));
        }
    }

    #[test]
    fn l1_vertex_has_partner_arc() {
        let l1 = NormSpec::l1();
        let partners = birkhoff_partners(&l1, 0.0, 1e-9);
        // x = (1,0) sits at a vertex of the diamond: every direction with
        // |y2| ≥ |y1| qualifies.
        assert!(partners.len() > 100);
        assert!(partners
            .iter()
            .any(|p| (p.coords - v(0.0, 1.0)).max_abs() < 1e-9));
        assert!(partners
            .iter()
            .any(|p| (p.coords - v(0.0, -1.0)).max_abs() < 1e-9));
        for p in &partners {
            assert!(p.coords.x2.abs() >= p.coords.x1.abs() - 1e-7);
        }
    }

    #[test]
    fn linf_corner_partners_include_the_diagonal() {
        let linf = NormSpec::linf();
        let partners = birkhoff_partners(&linf, FRAC_PI_4, 1e-9);
        assert!(partners
            .iter()
            .any(|p| (p.coords - v(1.0, -1.0)).max_abs() < 1e-9));
        assert!(partners
            .iter()
            .any(|p| (p.coords - v(-1.0, 1.0)).max_abs() < 1e-9));
        // Closed under sign.
        for p in &partners {
            assert!(partners
                .iter()
                .any(|q| q.coords.x1 == -p.coords.x1 && q.coords.x2 == -p.coords.x2));
        }
    }

    #[test]
    fn birkhoff_pair_certificate() {
        let l2 = NormSpec::l2();
        let pair = OrthoPair::birkhoff(&l2, v(1.0, 0.0), v(0.0, 2.0));
        assert_eq!(pair.kind, OrthoKind::Birkhoff);
        assert!(pair.residual.abs() < 1e-10);
    }

    #[test]
    fn partners_nonempty_on_catalog() {
        for spec in [
            NormSpec::l1(),
            NormSpec::lp(1.5).unwrap(),
            NormSpec::hexagonal(),
        ] {
            for k in 0..12 {
                let theta = 0.05 + k as f64 * FRAC_PI_2 / 3.0;
                assert!(!birkhoff_partners(&spec, theta, 1e-9).is_empty());
            }
        }
    }
}
