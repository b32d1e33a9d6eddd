//! Grid-plus-refinement estimators for the geometric constants of a plane.
//!
//! Every constant is a supremum or infimum of a norm expression over a
//! constraint set on (or in) the unit ball. The estimators share one scheme:
//!
//! 1. sweep a deterministic parameter grid and keep the best value per cell,
//! 2. refine the strongest local optima with derivative-free golden-section
//!    passes (the objectives are piecewise smooth, with kinks at polyhedral
//!    facet crossings),
//! 3. pick the winner, breaking value ties by the lexicographically smallest
//!    `(θ, φ, r)` so results are reproducible across runs and worker counts.
//!
//! The reported value is always the objective evaluated at the returned
//! witness, i.e. a certified one-sided bound: a lower bound for suprema and
//! an upper bound for infima. No rigorous enclosure is attempted; the test
//! battery pins the accuracy against exactly known values instead.

use std::f64::consts::TAU;

use rayon::prelude::*;
use thiserror::Error;

use crate::geometry::NormSpec;
use crate::orthogonality::{
    birkhoff_lambda_min, birkhoff_partner_points, isosceles_partner_roots, OrthoPair, SolveError,
};
use crate::search::{
    circular_local_maxima, circular_local_minima, golden_max, golden_min, zoom_max,
};
use crate::vec2::Vec2;

/// Residual tolerance handed to the partner solver inside the estimators.
/// It must out-resolve every outer tolerance in this module.
const SOLVER_TOL: f64 = 1e-12;

/// Acceptance tolerance for Birkhoff pairs enumerated by `estimate_br`.
const BIRKHOFF_TOL: f64 = 1e-9;

/// How many local optima of a grid sweep get a refinement pass.
const REFINE_SEEDS: usize = 12;

/// Slack for the proven range assertions. Violating one of these means the
/// implementation is wrong, so they panic instead of clamping.
const RANGE_SLACK: f64 = 1e-9;

/// The ratio bound 8/5 that `omega` and `omega_prime` can never exceed.
const EIGHT_FIFTHS: f64 = 1.6;

#[derive(Debug, Error, Clone)]
pub enum EstimateError {
    #[error("invalid grid configuration: {0}")]
    InvalidConfig(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("partner solver failed at theta = {theta}: {source}")]
    Partner { theta: f64, source: SolveError },
    #[error("omega ratio denominator ‖x+y‖ is zero")]
    ZeroDenominator,
    #[error("search produced no candidate at all")]
    EmptySearch,
}

/// Which constant an [`Estimate`] refers to.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ConstantKind {
    Omega,
    OmegaPrime,
    James,
    Schaffer,
    Cnj,
    Gamma(f64),
    Delta(f64),
    DConst,
    Br,
}

impl ConstantKind {
    /// Machine label used by reports and the CLI.
    pub fn label(&self) -> &'static str {
        match self {
            ConstantKind::Omega => "omega",
            ConstantKind::OmegaPrime => "omega_prime",
            ConstantKind::James => "james",
            ConstantKind::Schaffer => "schaffer",
            ConstantKind::Cnj => "cnj",
            ConstantKind::Gamma(_) => "gamma",
            ConstantKind::Delta(_) => "delta",
            ConstantKind::DConst => "d",
            ConstantKind::Br => "br",
        }
    }

    /// The parameter of parametrized constants (γ's `t`, δ's `ε`).
    pub fn param(&self) -> Option<f64> {
        match self {
            ConstantKind::Gamma(t) => Some(*t),
            ConstantKind::Delta(eps) => Some(*eps),
            _ => None,
        }
    }
}

/// Search direction of a constant.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Supremum,
    Infimum,
}

impl Direction {
    pub fn as_str(&self) -> &'static str {
        match self {
            Direction::Supremum => "sup",
            Direction::Infimum => "inf",
        }
    }

    fn worst(&self) -> f64 {
        match self {
            Direction::Supremum => f64::NEG_INFINITY,
            Direction::Infimum => f64::INFINITY,
        }
    }

    fn improves(&self, new: f64, old: f64) -> bool {
        match self {
            Direction::Supremum => new > old,
            Direction::Infimum => new < old,
        }
    }
}

/// Grid resolution and refinement settings.
#[derive(Clone, Copy, Debug)]
pub struct GridConfig {
    /// Points on the θ (and φ) circle; at least 64.
    pub theta_grid: usize,
    /// Points of the radius grid on (0, 1]; at least 1.
    pub radius_grid: usize,
    /// Value resolution of the refinement stage; equal witnesses within this
    /// tolerance are tie-broken deterministically.
    pub refine_tol: f64,
    /// Objective evaluations allowed per golden-section refinement pass.
    pub refine_budget: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            theta_grid: 1024,
            radius_grid: 32,
            refine_tol: 1e-9,
            refine_budget: 200,
        }
    }
}

impl GridConfig {
    pub fn with_theta(theta_grid: usize) -> Self {
        GridConfig {
            theta_grid,
            ..GridConfig::default()
        }
    }

    pub fn validate(&self) -> Result<(), EstimateError> {
        if self.theta_grid < 64 {
            return Err(EstimateError::InvalidConfig(format!(
                "theta_grid must be at least 64 (got {})",
                self.theta_grid
            )));
        }
        if self.radius_grid < 1 {
            return Err(EstimateError::InvalidConfig("radius_grid must be at least 1".into()));
        }
        if self.refine_tol.is_nan() || self.refine_tol <= 0.0 {
            return Err(EstimateError::InvalidConfig(format!(
                "refine_tol must be positive (got {})",
                self.refine_tol
            )));
        }
        if self.refine_budget < 8 {
            return Err(EstimateError::InvalidConfig("refine_budget must be at least 8".into()));
        }
        Ok(())
    }

    fn theta_step(&self) -> f64 {
        TAU / self.theta_grid as f64
    }
}

/// The concrete configuration a constant estimate was attained at.
#[derive(Clone, Copy, Debug)]
pub struct Witness {
    pub x: Vec2,
    pub y: Vec2,
    /// Extra scalar of the witness where one exists: `α` for BR, `λ*` for D.
    pub param: Option<f64>,
}

/// A witnessed constant estimate.
#[derive(Clone, Debug)]
pub struct Estimate {
    pub constant: ConstantKind,
    pub value: f64,
    pub witness: Witness,
    pub grid_size: usize,
    pub refine_tol: f64,
    pub direction: Direction,
}

/// The ratio `(‖x+2y‖² + ‖2x+y‖²) / (5‖x+y‖²)` underlying Ω and Ω′.
///
/// Invariant under swapping the pair, joint negation, and joint positive
/// scaling. For an isosceles-orthogonal pair with `x ≠ 0` the denominator is
/// bounded below by `5‖x‖²`, so the error case cannot occur there.
pub fn omega_ratio(spec: &NormSpec, x: Vec2, y: Vec2) -> Result<f64, EstimateError> {
    if spec.norm(x + y) == 0.0 {
        return Err(EstimateError::ZeroDenominator);
    }
    Ok(ratio_at(spec, x, y))
}

#[inline]
fn ratio_at(spec: &NormSpec, x: Vec2, y: Vec2) -> f64 {
    let a = spec.norm(x + y.scale(2.0));
    let b = spec.norm(x.scale(2.0) + y);
    let c = spec.norm(x + y);
    (a * a + b * b) / (5.0 * c * c)
}

// ---------------------------------------------------------------------------
// Candidates and deterministic winner selection
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
struct Candidate {
    value: f64,
    theta: f64,
    phi: f64,
    r: f64,
    witness: Witness,
}

impl Candidate {
    fn key(&self) -> (f64, f64, f64) {
        (self.theta, self.phi, self.r)
    }
}

/// Pick the winning candidate: best value, with ties within `tie_eps` broken
/// by the smallest `(θ, φ, r)`. Independent of candidate order, hence of
/// worker count and merge order.
fn select_winner(candidates: &[Candidate], direction: Direction, tie_eps: f64) -> Option<Candidate> {
    let mut extreme = direction.worst();
    for c in candidates {
        if direction.improves(c.value, extreme) {
            extreme = c.value;
        }
    }
    if !extreme.is_finite() {
        return None;
    }
    candidates
        .iter()
        .filter(|c| match direction {
            Direction::Supremum => c.value >= extreme - tie_eps,
            Direction::Infimum => c.value <= extreme + tie_eps,
        })
        .min_by(|a, b| a.key().partial_cmp(&b.key()).unwrap())
        .cloned()
}

/// Pick refinement seeds: local optima ordered by quality, then index.
fn refine_seeds(values: &[f64], direction: Direction) -> Vec<usize> {
    let mut seeds = match direction {
        Direction::Supremum => circular_local_maxima(values),
        Direction::Infimum => circular_local_minima(values),
    };
    seeds.sort_by(|&a, &b| match direction {
        Direction::Supremum => values[b].partial_cmp(&values[a]).unwrap().then(a.cmp(&b)),
        Direction::Infimum => values[a].partial_cmp(&values[b]).unwrap().then(a.cmp(&b)),
    });
    seeds.truncate(REFINE_SEEDS);
    seeds
}

// ---------------------------------------------------------------------------
// Optimization over isosceles pairs (Ω, J, S, D share this path)
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
struct ThetaBest {
    value: f64,
    phi: f64,
    pair: OrthoPair,
}

/// Best objective over the isosceles partner roots at one `(θ, radius)`.
fn best_root_at<F>(
    spec: &NormSpec,
    theta: f64,
    radius: f64,
    objective: &F,
    direction: Direction,
) -> Result<Option<ThetaBest>, EstimateError>
where
    F: Fn(&NormSpec, &OrthoPair) -> f64,
{
    let roots = isosceles_partner_roots(spec, theta, radius, SOLVER_TOL)
        .map_err(|source| EstimateError::Partner { theta, source })?;
    let mut best: Option<ThetaBest> = None;
    for root in roots {
        let value = objective(spec, &root.pair);
        let take = match &best {
            None => true,
            Some(b) => {
                direction.improves(value, b.value) || (value == b.value && root.phi < b.phi)
            }
        };
        if take {
            best = Some(ThetaBest {
                value,
                phi: root.phi,
                pair: root.pair,
            });
        }
    }
    Ok(best)
}

fn optimize_isosceles<F>(
    spec: &NormSpec,
    cfg: &GridConfig,
    radius: f64,
    objective: F,
    direction: Direction,
    constant: ConstantKind,
    witness_param: impl Fn(&NormSpec, &OrthoPair) -> Option<f64>,
) -> Result<Estimate, EstimateError>
where
    F: Fn(&NormSpec, &OrthoPair) -> f64 + Sync,
{
    cfg.validate()?;
    let n = cfg.theta_grid;
    let step = cfg.theta_step();

    let per_theta: Vec<Option<ThetaBest>> = (0..n)
        .into_par_iter()
        .map(|k| best_root_at(spec, k as f64 * step, radius, &objective, direction))
        .collect::<Result<Vec<_>, _>>()?;

    let values: Vec<f64> = per_theta
        .iter()
        .map(|o| o.as_ref().map_or(direction.worst(), |t| t.value))
        .collect();

    let mut candidates: Vec<Candidate> = per_theta
        .iter()
        .enumerate()
        .filter_map(|(k, o)| {
            o.as_ref().map(|t| Candidate {
                value: t.value,
                theta: k as f64 * step,
                phi: t.phi,
                r: radius,
                witness: Witness {
                    x: t.pair.x,
                    y: t.pair.y,
                    param: witness_param(spec, &t.pair),
                },
            })
        })
        .collect();

    for k in refine_seeds(&values, direction) {
        let center = k as f64 * step;
        let mut f = |theta: f64| -> Result<f64, EstimateError> {
            Ok(best_root_at(spec, theta, radius, &objective, direction)?
                .map_or(direction.worst(), |t| t.value))
        };
        let refined = match direction {
            Direction::Supremum => {
                golden_max(&mut f, center - step, center + step, 1e-11, cfg.refine_budget)?
            }
            Direction::Infimum => {
                golden_min(&mut f, center - step, center + step, 1e-11, cfg.refine_budget)?
            }
        };
        let theta = refined.0.rem_euclid(TAU);
        if let Some(t) = best_root_at(spec, theta, radius, &objective, direction)? {
            candidates.push(Candidate {
                value: t.value,
                theta,
                phi: t.phi,
                r: radius,
                witness: Witness {
                    x: t.pair.x,
                    y: t.pair.y,
                    param: witness_param(spec, &t.pair),
                },
            });
        }
    }

    let winner =
        select_winner(&candidates, direction, cfg.refine_tol).ok_or(EstimateError::EmptySearch)?;
    Ok(Estimate {
        constant,
        value: winner.value,
        witness: winner.witness,
        grid_size: n,
        refine_tol: cfg.refine_tol,
        direction,
    })
}

// ---------------------------------------------------------------------------
// The constants
// ---------------------------------------------------------------------------

/// Ω: supremum of [`omega_ratio`] over unit isosceles-orthogonal pairs.
pub fn estimate_omega(spec: &NormSpec, cfg: &GridConfig) -> Result<Estimate, EstimateError> {
    let est = optimize_isosceles(
        spec,
        cfg,
        1.0,
        |s, p| ratio_at(s, p.x, p.y),
        Direction::Supremum,
        ConstantKind::Omega,
        |_, _| None,
    )?;
    assert!(
        est.value <= EIGHT_FIFTHS + RANGE_SLACK,
        "omega = {} exceeds the proven bound 8/5",
        est.value
    );
    Ok(est)
}

/// J: supremum of `‖x+y‖` over unit isosceles-orthogonal pairs.
pub fn estimate_james(spec: &NormSpec, cfg: &GridConfig) -> Result<Estimate, EstimateError> {
    let est = optimize_isosceles(
        spec,
        cfg,
        1.0,
        |s, p| s.norm(p.x + p.y),
        Direction::Supremum,
        ConstantKind::James,
        |_, _| None,
    )?;
    assert!(
        est.value <= 2.0 + RANGE_SLACK,
        "james = {} exceeds 2",
        est.value
    );
    Ok(est)
}

/// S: infimum of `‖x+y‖` over unit isosceles-orthogonal pairs.
pub fn estimate_schaffer(spec: &NormSpec, cfg: &GridConfig) -> Result<Estimate, EstimateError> {
    let est = optimize_isosceles(
        spec,
        cfg,
        1.0,
        |s, p| s.norm(p.x + p.y),
        Direction::Infimum,
        ConstantKind::Schaffer,
        |_, _| None,
    )?;
    assert!(
        est.value >= 1.0 - RANGE_SLACK,
        "schaffer = {} below 1",
        est.value
    );
    Ok(est)
}

/// D: infimum over unit isosceles pairs of `min_λ ‖x+λy‖`.
pub fn estimate_d(spec: &NormSpec, cfg: &GridConfig) -> Result<Estimate, EstimateError> {
    let est = optimize_isosceles(
        spec,
        cfg,
        1.0,
        |s, p| birkhoff_lambda_min(s, p.x, p.y).1,
        Direction::Infimum,
        ConstantKind::DConst,
        |s, p| Some(birkhoff_lambda_min(s, p.x, p.y).0),
    )?;
    assert!(
        est.value >= -RANGE_SLACK && est.value <= 1.0 + RANGE_SLACK,
        "d = {} outside [0, 1]",
        est.value
    );
    Ok(est)
}

/// Ω′: like Ω but with `y` anywhere in the unit ball.
///
/// The radius grid is uniform on (0, 1]; the `r = 0` end is handled
/// analytically, where the ratio evaluates to exactly 1 at `y = 0`.
pub fn estimate_omega_prime(spec: &NormSpec, cfg: &GridConfig) -> Result<Estimate, EstimateError> {
    cfg.validate()?;
    let n = cfg.theta_grid;
    let rg = cfg.radius_grid;
    let step = cfg.theta_step();
    let ratio_obj = |s: &NormSpec, p: &OrthoPair| ratio_at(s, p.x, p.y);

    let rows: Vec<Vec<Option<ThetaBest>>> = (0..n)
        .into_par_iter()
        .map(|k| {
            let theta = k as f64 * step;
            (1..=rg)
                .map(|j| best_root_at(spec, theta, j as f64 / rg as f64, &ratio_obj, Direction::Supremum))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;

    let mut candidates = vec![Candidate {
        value: 1.0,
        theta: 0.0,
        phi: 0.0,
        r: 0.0,
        witness: Witness {
            x: spec.unit_point(0.0).coords,
            y: Vec2::ZERO,
            param: None,
        },
    }];
    for (k, row) in rows.iter().enumerate() {
        for (idx, cell) in row.iter().enumerate() {
            if let Some(t) = cell {
                candidates.push(Candidate {
                    value: t.value,
                    theta: k as f64 * step,
                    phi: t.phi,
                    r: (idx + 1) as f64 / rg as f64,
                    witness: Witness {
                        x: t.pair.x,
                        y: t.pair.y,
                        param: None,
                    },
                });
            }
        }
    }

    // Refine the strongest grid cells in θ and r alternately.
    let mut cells: Vec<(usize, usize, f64)> = Vec::new();
    for (k, row) in rows.iter().enumerate() {
        for (idx, cell) in row.iter().enumerate() {
            if let Some(t) = cell {
                cells.push((k, idx, t.value));
            }
        }
    }
    cells.sort_by(|a, b| b.2.partial_cmp(&a.2).unwrap().then((a.0, a.1).cmp(&(b.0, b.1))));
    let mut seeds: Vec<(usize, usize)> = Vec::new();
    for (k, idx, _) in cells {
        let clash = seeds.iter().any(|&(sk, sj)| {
            let raw = (k as isize - sk as isize).unsigned_abs();
            let dk = raw.min(n - raw);
            dk <= 1 && (idx as isize - sj as isize).unsigned_abs() <= 1
        });
        if !clash {
            seeds.push((k, idx));
        }
        if seeds.len() >= REFINE_SEEDS {
            break;
        }
    }

    let r_step = 1.0 / rg as f64;
    for (k, idx) in seeds {
        let start = [k as f64 * step, (idx + 1) as f64 * r_step];
        let mut f = |p: &[f64; 2]| -> Result<f64, EstimateError> {
            if !(p[1] > 1e-9 && p[1] <= 1.0) {
                return Ok(f64::NEG_INFINITY);
            }
            Ok(best_root_at(spec, p[0], p[1], &ratio_obj, Direction::Supremum)?
                .map_or(f64::NEG_INFINITY, |t| t.value))
        };
        let (arg, _) = zoom_max(&mut f, start, [1.5 * step, 1.5 * r_step], 4, 6)?;
        let theta = arg[0].rem_euclid(TAU);
        let r = arg[1];
        if r > 1e-9 && r <= 1.0 {
            if let Some(t) = best_root_at(spec, theta, r, &ratio_obj, Direction::Supremum)? {
                candidates.push(Candidate {
                    value: t.value,
                    theta,
                    phi: t.phi,
                    r,
                    witness: Witness {
                        x: t.pair.x,
                        y: t.pair.y,
                        param: None,
                    },
                });
            }
        }
    }

    let winner = select_winner(&candidates, Direction::Supremum, cfg.refine_tol)
        .ok_or(EstimateError::EmptySearch)?;
    assert!(
        winner.value >= 1.0 - RANGE_SLACK && winner.value <= EIGHT_FIFTHS + RANGE_SLACK,
        "omega_prime = {} outside [1, 8/5]",
        winner.value
    );
    Ok(Estimate {
        constant: ConstantKind::OmegaPrime,
        value: winner.value,
        witness: winner.witness,
        grid_size: n,
        refine_tol: cfg.refine_tol,
        direction: Direction::Supremum,
    })
}

/// The von Neumann–Jordan constant:
/// `sup (‖x+y‖² + ‖x−y‖²) / (2(‖x‖² + ‖y‖²))` with `x` on the sphere and
/// `y = r·u(φ)`, `r ∈ [0, 1]`; homogeneity and the swap symmetry make this
/// restriction exhaustive.
pub fn estimate_cnj(spec: &NormSpec, cfg: &GridConfig) -> Result<Estimate, EstimateError> {
    cfg.validate()?;
    let n = cfg.theta_grid;
    let rg = cfg.radius_grid;
    let step = cfg.theta_step();
    let grid = spec.sphere_grid(n);
    let r_step = 1.0 / rg as f64;

    let value_at = |x: Vec2, u: Vec2, r: f64| -> f64 {
        let y = u.scale(r);
        let s = spec.norm(x + y);
        let d = spec.norm(x - y);
        (s * s + d * d) / (2.0 * (1.0 + r * r))
    };

    let per_theta: Vec<(f64, usize, usize)> = (0..n)
        .into_par_iter()
        .map(|k| {
            let x = grid[k].coords;
            let mut best = (f64::NEG_INFINITY, 0usize, 0usize);
            for (j, u) in grid.iter().enumerate() {
                for m in 1..=rg {
                    let v = value_at(x, u.coords, m as f64 * r_step);
                    if v > best.0 {
                        best = (v, j, m);
                    }
                }
            }
            best
        })
        .collect();

    let values: Vec<f64> = per_theta.iter().map(|b| b.0).collect();
    let mut candidates = vec![Candidate {
        value: 1.0,
        theta: 0.0,
        phi: 0.0,
        r: 0.0,
        witness: Witness {
            x: grid[0].coords,
            y: Vec2::ZERO,
            param: None,
        },
    }];
    for (k, &(v, j, m)) in per_theta.iter().enumerate() {
        candidates.push(Candidate {
            value: v,
            theta: k as f64 * step,
            phi: j as f64 * step,
            r: m as f64 * r_step,
            witness: Witness {
                x: grid[k].coords,
                y: grid[j].coords.scale(m as f64 * r_step),
                param: None,
            },
        });
    }

    let objective = |theta: f64, phi: f64, r: f64| {
        value_at(spec.unit_point(theta).coords, spec.unit_point(phi).coords, r)
    };
    for k in refine_seeds(&values, Direction::Supremum) {
        let (_, j, m) = per_theta[k];
        let start = [k as f64 * step, j as f64 * step, m as f64 * r_step];
        let mut f = |p: &[f64; 3]| -> Result<f64, std::convert::Infallible> {
            if !(0.0..=1.0).contains(&p[2]) {
                return Ok(f64::NEG_INFINITY);
            }
            Ok(objective(p[0], p[1], p[2]))
        };
        let (arg, _) = match zoom_max(&mut f, start, [1.5 * step, 1.5 * step, 1.5 * r_step], 4, 6) {
            Ok(found) => found,
            Err(never) => match never {},
        };
        let (theta, phi, r) = (arg[0].rem_euclid(TAU), arg[1].rem_euclid(TAU), arg[2].clamp(0.0, 1.0));
        candidates.push(Candidate {
            value: objective(theta, phi, r),
            theta,
            phi,
            r,
            witness: Witness {
                x: spec.unit_point(theta).coords,
                y: spec.unit_point(phi).coords.scale(r),
                param: None,
            },
        });
    }

    let winner = select_winner(&candidates, Direction::Supremum, cfg.refine_tol)
        .ok_or(EstimateError::EmptySearch)?;
    assert!(
        winner.value >= 1.0 - RANGE_SLACK && winner.value <= 2.0 + RANGE_SLACK,
        "cnj = {} outside [1, 2]",
        winner.value
    );
    Ok(Estimate {
        constant: ConstantKind::Cnj,
        value: winner.value,
        witness: winner.witness,
        grid_size: n,
        refine_tol: cfg.refine_tol,
        direction: Direction::Supremum,
    })
}

/// γ_X(t): `sup (‖x+ty‖² + ‖x−ty‖²)/2` over unit `x`, `y`; `t ∈ [0, 1]`.
///
/// `γ(0) = 1` exactly, returned without a search.
pub fn estimate_gamma(spec: &NormSpec, t: f64, cfg: &GridConfig) -> Result<Estimate, EstimateError> {
    if !(0.0..=1.0).contains(&t) {
        return Err(EstimateError::InvalidParameter(format!(
            "gamma parameter t must lie in [0, 1], got {t}"
        )));
    }
    cfg.validate()?;
    if t == 0.0 {
        let x = spec.unit_point(0.0).coords;
        return Ok(Estimate {
            constant: ConstantKind::Gamma(0.0),
            value: 1.0,
            witness: Witness { x, y: x, param: None },
            grid_size: cfg.theta_grid,
            refine_tol: cfg.refine_tol,
            direction: Direction::Supremum,
        });
    }
    let n = cfg.theta_grid;
    let step = cfg.theta_step();
    let grid = spec.sphere_grid(n);

    let value_at = |x: Vec2, y: Vec2| -> f64 {
        let s = spec.norm(x + y.scale(t));
        let d = spec.norm(x - y.scale(t));
        0.5 * (s * s + d * d)
    };

    let per_theta: Vec<(f64, usize)> = (0..n)
        .into_par_iter()
        .map(|k| {
            let x = grid[k].coords;
            let mut best = (f64::NEG_INFINITY, 0usize);
            for (j, u) in grid.iter().enumerate() {
                let v = value_at(x, u.coords);
                if v > best.0 {
                    best = (v, j);
                }
            }
            best
        })
        .collect();

    let values: Vec<f64> = per_theta.iter().map(|b| b.0).collect();
    let mut candidates: Vec<Candidate> = per_theta
        .iter()
        .enumerate()
        .map(|(k, &(v, j))| Candidate {
            value: v,
            theta: k as f64 * step,
            phi: j as f64 * step,
            r: 1.0,
            witness: Witness {
                x: grid[k].coords,
                y: grid[j].coords,
                param: None,
            },
        })
        .collect();

    let objective =
        |theta: f64, phi: f64| value_at(spec.unit_point(theta).coords, spec.unit_point(phi).coords);
    for k in refine_seeds(&values, Direction::Supremum) {
        let start = [k as f64 * step, per_theta[k].1 as f64 * step];
        let mut f = |p: &[f64; 2]| Ok::<f64, std::convert::Infallible>(objective(p[0], p[1]));
        let (arg, _) = match zoom_max(&mut f, start, [1.5 * step, 1.5 * step], 4, 6) {
            Ok(found) => found,
            Err(never) => match never {},
        };
        let (theta, phi) = (arg[0].rem_euclid(TAU), arg[1].rem_euclid(TAU));
        candidates.push(Candidate {
            value: objective(theta, phi),
            theta,
            phi,
            r: 1.0,
            witness: Witness {
                x: spec.unit_point(theta).coords,
                y: spec.unit_point(phi).coords,
                param: None,
            },
        });
    }

    let winner = select_winner(&candidates, Direction::Supremum, cfg.refine_tol)
        .ok_or(EstimateError::EmptySearch)?;
    let cap = (1.0 + t) * (1.0 + t);
    assert!(
        winner.value >= 1.0 - RANGE_SLACK && winner.value <= cap + RANGE_SLACK,
        "gamma({t}) = {} outside [1, (1+t)^2]",
        winner.value
    );
    Ok(Estimate {
        constant: ConstantKind::Gamma(t),
        value: winner.value,
        witness: winner.witness,
        grid_size: n,
        refine_tol: cfg.refine_tol,
        direction: Direction::Supremum,
    })
}

/// Modulus of convexity δ_X(ε): `inf 1 − ‖x+y‖/2` over unit pairs with
/// `‖x−y‖ ≥ ε`.
///
/// The infimum usually sits on the constraint boundary, so besides the grid
/// the inner sweep root-finds `‖x−y‖ = ε` along φ and evaluates there.
pub fn estimate_delta(spec: &NormSpec, eps: f64, cfg: &GridConfig) -> Result<Estimate, EstimateError> {
    if !(0.0..=2.0).contains(&eps) {
        return Err(EstimateError::InvalidParameter(format!(
            "delta parameter eps must lie in [0, 2], got {eps}"
        )));
    }
    cfg.validate()?;
    let n = cfg.theta_grid;
    let step = cfg.theta_step();

    let per_theta: Vec<Option<(f64, f64, Vec2)>> = (0..n)
        .into_par_iter()
        .map(|k| delta_inner(spec, k as f64 * step, eps))
        .collect();

    let values: Vec<f64> = per_theta
        .iter()
        .map(|o| o.as_ref().map_or(f64::INFINITY, |b| b.0))
        .collect();
    let mut candidates: Vec<Candidate> = per_theta
        .iter()
        .enumerate()
        .filter_map(|(k, o)| {
            o.as_ref().map(|&(v, phi, y)| Candidate {
                value: v,
                theta: k as f64 * step,
                phi,
                r: 1.0,
                witness: Witness {
                    x: spec.unit_point(k as f64 * step).coords,
                    y,
                    param: None,
                },
            })
        })
        .collect();

    for k in refine_seeds(&values, Direction::Infimum) {
        let center = k as f64 * step;
        let mut f = |theta: f64| -> Result<f64, EstimateError> {
            Ok(delta_inner(spec, theta, eps).map_or(f64::INFINITY, |b| b.0))
        };
        let (arg, _) = golden_min(&mut f, center - step, center + step, 1e-11, cfg.refine_budget)?;
        let theta = arg.rem_euclid(TAU);
        if let Some((v, phi, y)) = delta_inner(spec, theta, eps) {
            candidates.push(Candidate {
                value: v,
                theta,
                phi,
                r: 1.0,
                witness: Witness {
                    x: spec.unit_point(theta).coords,
                    y,
                    param: None,
                },
            });
        }
    }

    let winner = select_winner(&candidates, Direction::Infimum, cfg.refine_tol)
        .ok_or(EstimateError::EmptySearch)?;
    assert!(
        winner.value >= -RANGE_SLACK && winner.value <= 1.0 + RANGE_SLACK,
        "delta({eps}) = {} outside [0, 1]",
        winner.value
    );
    Ok(Estimate {
        constant: ConstantKind::Delta(eps),
        value: winner.value,
        witness: winner.witness,
        grid_size: n,
        refine_tol: cfg.refine_tol,
        direction: Direction::Infimum,
    })
}

/// Feasibility slack for the `‖x−y‖ ≥ ε` constraint. Diametral pairs sit on
/// the boundary up to rounding, so exact feasibility would lose them.
const DELTA_FEAS_TOL: f64 = 1e-9;

fn delta_inner(spec: &NormSpec, theta: f64, eps: f64) -> Option<(f64, f64, Vec2)> {
    let x = spec.unit_point(theta).coords;
    let m = crate::orthogonality::PARTNER_SCAN_POINTS;
    let step = TAU / m as f64;
    let grid = spec.sphere_grid(m);

    let cons: Vec<f64> = grid.iter().map(|p| spec.norm(x - p.coords) - eps).collect();
    let mut best: Option<(f64, f64, Vec2)> = None;
    let mut consider = |value: f64, phi: f64, y: Vec2| {
        let take = match &best {
            None => true,
            Some(b) => value < b.0 || (value == b.0 && phi < b.1),
        };
        if take {
            best = Some((value, phi, y));
        }
    };

    for (i, p) in grid.iter().enumerate() {
        if cons[i] >= -DELTA_FEAS_TOL {
            consider(1.0 - 0.5 * spec.norm(x + p.coords), i as f64 * step, p.coords);
        }
    }
    // Active-constraint candidates: roots of ‖x − u(φ)‖ = ε.
    for i in 0..m {
        let fa = cons[i];
        let fb = cons[(i + 1) % m];
        if fa * fb < 0.0 {
            let phi_a = i as f64 * step;
            let phi_b = (i + 1) as f64 * step;
            let mut c = |phi: f64| spec.norm(x - spec.unit_point(phi).coords) - eps;
            if let Ok((phi, _)) =
                crate::search::bisect_root(&mut c, phi_a, phi_b, fa, fb, 1e-12, 200)
            {
                let y = spec.unit_point(phi).coords;
                consider(1.0 - 0.5 * spec.norm(x + y), phi, y);
            }
        }
    }
    best
}

/// BR: how far apart Birkhoff and isosceles orthogonality are.
///
/// `sup (‖x+αy‖ − ‖x−αy‖)/α` over Birkhoff-orthogonal unit pairs and
/// `α > 0`. The α sweep is the dyadic grid `2⁻²⁰ … 2²⁰` with a golden pass
/// over the winning octave; the pair sweep reuses the Birkhoff partner scan.
pub fn estimate_br(spec: &NormSpec, cfg: &GridConfig) -> Result<Estimate, EstimateError> {
    cfg.validate()?;
    let n = cfg.theta_grid;
    let step = cfg.theta_step();

    let quotient = |x: Vec2, y: Vec2, alpha: f64| {
        (spec.norm(x + y.scale(alpha)) - spec.norm(x - y.scale(alpha))) / alpha
    };

    let per_theta: Vec<Option<Candidate>> = (0..n)
        .into_par_iter()
        .map(|k| {
            let theta = k as f64 * step;
            let x = spec.unit_point(theta).coords;
            let partners = birkhoff_partner_points(spec, theta, BIRKHOFF_TOL);
            let mut best: Option<(f64, f64, Vec2, f64)> = None;
            for (phi, p) in &partners {
                for e in -20..=20 {
                    let alpha = (e as f64).exp2();
                    let q = quotient(x, p.coords, alpha);
                    let take = match &best {
                        None => true,
                        Some(b) => q > b.0 || (q == b.0 && (*phi, alpha) < (b.1, b.3)),
                    };
                    if take {
                        best = Some((q, *phi, p.coords, alpha));
                    }
                }
            }
            best.map(|(_, phi, y, alpha)| {
                // Refine α inside the winning octave, in log scale.
                let mut f = |lg: f64| {
                    Ok::<f64, std::convert::Infallible>(quotient(x, y, lg.exp2()))
                };
                let lg0 = alpha.log2();
                let (lg, value) =
                    golden_max(&mut f, lg0 - 1.0, lg0 + 1.0, 1e-12, cfg.refine_budget)
                        .unwrap_or((lg0, quotient(x, y, alpha)));
                let refined_alpha = lg.exp2();
                Candidate {
                    value,
                    theta,
                    phi,
                    r: refined_alpha,
                    witness: Witness {
                        x,
                        y,
                        param: Some(refined_alpha),
                    },
                }
            })
        })
        .collect();

    let candidates: Vec<Candidate> = per_theta.into_iter().flatten().collect();
    let winner = select_winner(&candidates, Direction::Supremum, cfg.refine_tol)
        .ok_or(EstimateError::EmptySearch)?;
    // The 1e-4 headroom covers quotient inflation from pairs that are
    // Birkhoff only up to BIRKHOFF_TOL; exact pairs never exceed 1.
    assert!(
        winner.value >= -RANGE_SLACK && winner.value <= 1.0 + 1e-4,
        "br = {} outside [0, 1]",
        winner.value
    );
    Ok(Estimate {
        constant: ConstantKind::Br,
        value: winner.value,
        witness: winner.witness,
        grid_size: n,
        refine_tol: cfg.refine_tol,
        direction: Direction::Supremum,
    })
}

// ---------------------------------------------------------------------------
// Bundles
// ---------------------------------------------------------------------------

/// The six estimates every relation check consumes, computed once per norm.
#[derive(Clone, Debug)]
pub struct ConstantSet {
    pub omega: Estimate,
    pub omega_prime: Estimate,
    pub james: Estimate,
    pub schaffer: Estimate,
    pub cnj: Estimate,
    pub gamma_third: Estimate,
}

impl ConstantSet {
    pub fn compute(spec: &NormSpec, cfg: &GridConfig) -> Result<ConstantSet, EstimateError> {
        Ok(ConstantSet {
            omega: estimate_omega(spec, cfg)?,
            omega_prime: estimate_omega_prime(spec, cfg)?,
            james: estimate_james(spec, cfg)?,
            schaffer: estimate_schaffer(spec, cfg)?,
            cnj: estimate_cnj(spec, cfg)?,
            gamma_third: estimate_gamma(spec, 1.0 / 3.0, cfg)?,
        })
    }
}

/// Dispatch an estimator by constant kind.
pub fn estimate(spec: &NormSpec, kind: ConstantKind, cfg: &GridConfig) -> Result<Estimate, EstimateError> {
    match kind {
        ConstantKind::Omega => estimate_omega(spec, cfg),
        ConstantKind::OmegaPrime => estimate_omega_prime(spec, cfg),
        ConstantKind::James => estimate_james(spec, cfg),
        ConstantKind::Schaffer => estimate_schaffer(spec, cfg),
        ConstantKind::Cnj => estimate_cnj(spec, cfg),
        ConstantKind::Gamma(t) => estimate_gamma(spec, t, cfg),
        ConstantKind::Delta(eps) => estimate_delta(spec, eps, cfg),
        ConstantKind::DConst => estimate_d(spec, cfg),
        ConstantKind::Br => estimate_br(spec, cfg),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x1: f64, x2: f64) -> Vec2 {
        Vec2::new(x1, x2)
    }

    fn cfg(n: usize) -> GridConfig {
        GridConfig::with_theta(n)
    }

    #[test]
    fn ratio_examples() {
        let linf = NormSpec::linf();
        assert_eq!(omega_ratio(&linf, v(1.0, 0.0), v(0.0, 1.0)).unwrap(), 1.6);

        let hex = NormSpec::hexagonal();
        let r = omega_ratio(&hex, v(1.0 / 3.0, 1.0), v(1.0, 1.0 / 3.0)).unwrap();
        assert!((r - 49.0 / 40.0).abs() < 1e-14);

        let l2 = NormSpec::l2();
        assert!((omega_ratio(&l2, v(1.0, 0.0), v(0.0, 1.0)).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn ratio_symmetries() {
        let hex = NormSpec::hexagonal();
        let (x, y) = (v(0.4, 0.9), v(-0.8, 0.3));
        let base = omega_ratio(&hex, x, y).unwrap();
        assert!((omega_ratio(&hex, y, x).unwrap() - base).abs() < 1e-15);
        assert!((omega_ratio(&hex, -x, -y).unwrap() - base).abs() < 1e-15);
        let scaled = omega_ratio(&hex, x.scale(3.5), y.scale(3.5)).unwrap();
        assert!((scaled - base).abs() < 1e-13);
    }

    #[test]
    fn ratio_zero_denominator() {
        let l1 = NormSpec::l1();
        assert!(matches!(
            omega_ratio(&l1, v(1.0, 0.0), v(-1.0, 0.0)),
            Err(EstimateError::ZeroDenominator)
        ));
    }

    #[test]
    fn omega_linf_is_eight_fifths() {
        let est = estimate_omega(&NormSpec::linf(), &cfg(512)).unwrap();
        assert!((est.value - 1.6).abs() < 1e-6, "omega = {}", est.value);
    }

    #[test]
    fn omega_euclidean_is_one() {
        let est = estimate_omega(&NormSpec::l2(), &cfg(256)).unwrap();
        assert!((est.value - 1.0).abs() < 1e-6, "omega = {}", est.value);
    }

    #[test]
    fn omega_hexagonal_value_and_witness() {
        let est = estimate_omega(&NormSpec::hexagonal(), &cfg(1024)).unwrap();
        assert!((est.value - 49.0 / 40.0).abs() < 1e-4, "omega = {}", est.value);
        // The deterministic tie-break must land on the documented maximizer
        // orbit {(1/3,1),(1,1/3)} up to swapping and joint negation.
        let w = est.witness;
        let a = v(1.0 / 3.0, 1.0);
        let b = v(1.0, 1.0 / 3.0);
        let orbits = [(a, b), (b, a), (-a, -b), (-b, -a)];
        let hit = orbits
            .iter()
            .any(|&(ex, ey)| (w.x - ex).max_abs() < 1e-5 && (w.y - ey).max_abs() < 1e-5);
        assert!(hit, "witness {:?} not in the expected orbit", w);
    }

    #[test]
    fn omega_prime_examples() {
        let l2 = estimate_omega_prime(&NormSpec::l2(), &cfg(256)).unwrap();
        assert!((l2.value - 1.0).abs() < 1e-6);

        let linf = estimate_omega_prime(&NormSpec::linf(), &cfg(256)).unwrap();
        assert!((linf.value - 1.6).abs() < 1e-4);

        let l1 = estimate_omega_prime(&NormSpec::l1(), &cfg(256)).unwrap();
        assert!((l1.value - 1.6).abs() < 1e-4);
    }

    #[test]
    fn omega_prime_dominates_omega() {
        for spec in [NormSpec::hexagonal(), NormSpec::lp(1.5).unwrap()] {
            let c = cfg(256);
            let omega = estimate_omega(&spec, &c).unwrap().value;
            let omega_prime = estimate_omega_prime(&spec, &c).unwrap().value;
            assert!(omega_prime >= omega - c.refine_tol);
        }
    }

    #[test]
    fn james_and_schaffer_examples() {
        let c = cfg(512);
        let j_linf = estimate_james(&NormSpec::linf(), &c).unwrap().value;
        let s_linf = estimate_schaffer(&NormSpec::linf(), &c).unwrap().value;
        assert!((j_linf - 2.0).abs() < 1e-4, "J = {j_linf}");
        assert!((s_linf - 1.0).abs() < 1e-4, "S = {s_linf}");

        let j_l2 = estimate_james(&NormSpec::l2(), &c).unwrap().value;
        let s_l2 = estimate_schaffer(&NormSpec::l2(), &c).unwrap().value;
        assert!((j_l2 - 2.0_f64.sqrt()).abs() < 1e-4);
        assert!((s_l2 - 2.0_f64.sqrt()).abs() < 1e-4);
        assert!((j_l2 * s_l2 - 2.0).abs() < 2e-3);
    }

    #[test]
    fn js_product_on_catalog() {
        let c = cfg(512);
        for spec in [NormSpec::lp(1.5).unwrap(), NormSpec::hexagonal()] {
            let j = estimate_james(&spec, &c).unwrap().value;
            let s = estimate_schaffer(&spec, &c).unwrap().value;
            assert!((j * s - 2.0).abs() < 2e-3, "J*S = {}", j * s);
        }
    }

    #[test]
    fn cnj_examples() {
        let c = cfg(256);
        assert!((estimate_cnj(&NormSpec::l2(), &c).unwrap().value - 1.0).abs() < 1e-6);
        assert!((estimate_cnj(&NormSpec::linf(), &c).unwrap().value - 2.0).abs() < 1e-3);
        assert!((estimate_cnj(&NormSpec::l1(), &c).unwrap().value - 2.0).abs() < 1e-3);
    }

    #[test]
    fn gamma_examples() {
        let c = cfg(256);
        let g2 = estimate_gamma(&NormSpec::l2(), 1.0 / 3.0, &c).unwrap().value;
        assert!((g2 - 10.0 / 9.0).abs() < 1e-6);

        let g0 = estimate_gamma(&NormSpec::hexagonal(), 0.0, &c).unwrap().value;
        assert_eq!(g0, 1.0);

        let ginf = estimate_gamma(&NormSpec::linf(), 1.0 / 3.0, &c).unwrap().value;
        assert!((ginf - 16.0 / 9.0).abs() < 1e-4, "gamma = {ginf}");
    }

    #[test]
    fn parameters_are_range_checked() {
        assert!(matches!(
            estimate_gamma(&NormSpec::l2(), 1.5, &cfg(64)),
            Err(EstimateError::InvalidParameter(_))
        ));
        assert!(matches!(
            estimate_delta(&NormSpec::l2(), 2.5, &cfg(64)),
            Err(EstimateError::InvalidParameter(_))
        ));
        assert!(estimate_delta(&NormSpec::l2(), -0.1, &cfg(64)).is_err());
    }

    #[test]
    fn delta_examples() {
        let c = cfg(256);
        let d2 = estimate_delta(&NormSpec::l2(), 1.0, &c).unwrap().value;
        assert!((d2 - (1.0 - 3.0_f64.sqrt() / 2.0)).abs() < 1e-4, "delta = {d2}");

        let dinf = estimate_delta(&NormSpec::linf(), 1.0, &c).unwrap().value;
        assert!(dinf.abs() < 1e-6, "delta = {dinf}");

        let d0 = estimate_delta(&NormSpec::hexagonal(), 0.0, &c).unwrap().value;
        assert!(d0.abs() < 1e-9);
    }

    #[test]
    fn delta_is_monotone_in_eps() {
        let c = cfg(128);
        let spec = NormSpec::lp(1.5).unwrap();
        let mut prev = -1.0;
        for k in 0..=10 {
            let eps = k as f64 * 0.2;
            let d = estimate_delta(&spec, eps, &c).unwrap().value;
            assert!(d >= prev - 2e-4, "delta({eps}) = {d} dropped below {prev}");
            prev = d;
        }
    }

    #[test]
    fn d_const_euclidean() {
        let d = estimate_d(&NormSpec::l2(), &cfg(128)).unwrap();
        assert!((d.value - 1.0).abs() < 1e-6, "D = {}", d.value);
        assert!(d.witness.param.unwrap().abs() < 1e-5);
    }

    #[test]
    fn d_const_sup_norm_regression() {
        // Converged value 2(√2 − 1), the lower end of the admissible range;
        // witness x = (1, √2 − 1), y = (−(√2 − 1), 1).
        let d = estimate_d(&NormSpec::linf(), &cfg(512)).unwrap();
        let expected = 2.0 * (2.0_f64.sqrt() - 1.0);
        assert!((d.value - expected).abs() < 1e-6, "D = {}", d.value);
        assert!(d.value >= expected - 1e-9 && d.value <= 1.0 + 1e-9);

        // The l1 plane is a rotated image of the sup-norm plane.
        let d1 = estimate_d(&NormSpec::l1(), &cfg(512)).unwrap();
        assert!((d1.value - d.value).abs() < 2e-4, "D(l1) = {}", d1.value);

        // Hexagonal plane regression: 8/9 at the Case I maximizer pair.
        let dh = estimate_d(&NormSpec::hexagonal(), &cfg(512)).unwrap();
        assert!((dh.value - 8.0 / 9.0).abs() < 1e-6, "D(hex) = {}", dh.value);
    }

    #[test]
    fn br_examples() {
        let c = cfg(128);
        let br2 = estimate_br(&NormSpec::l2(), &c).unwrap().value;
        assert!(br2.abs() < 1e-4, "BR = {br2}");

        let brinf = estimate_br(&NormSpec::linf(), &c).unwrap();
        assert!((brinf.value - 1.0).abs() < 1e-3, "BR = {}", brinf.value);
        assert!(brinf.value <= 1.0 + 1e-9);
    }

    #[test]
    fn witnesses_certify_values() {
        let c = cfg(128);
        let spec = NormSpec::hexagonal();
        let omega = estimate_omega(&spec, &c).unwrap();
        let again = omega_ratio(&spec, omega.witness.x, omega.witness.y).unwrap();
        assert!((again - omega.value).abs() <= c.refine_tol);

        let james = estimate_james(&spec, &c).unwrap();
        assert!((spec.norm(james.witness.x + james.witness.y) - james.value).abs() <= c.refine_tol);

        let gamma = estimate_gamma(&spec, 1.0 / 3.0, &c).unwrap();
        let w = gamma.witness;
        let re = 0.5
            * (spec.norm(w.x + w.y.scale(1.0 / 3.0)).powi(2)
                + spec.norm(w.x - w.y.scale(1.0 / 3.0)).powi(2));
        assert!((re - gamma.value).abs() <= c.refine_tol);
    }

    #[test]
    fn grid_doubling_never_loses_value() {
        for spec in [NormSpec::linf(), NormSpec::hexagonal(), NormSpec::lp(1.5).unwrap()] {
            let coarse = estimate_omega(&spec, &cfg(256)).unwrap().value;
            let fine = estimate_omega(&spec, &cfg(512)).unwrap().value;
            assert!(fine >= coarse - 1e-9, "{} -> {}", coarse, fine);
        }
    }

    #[test]
    fn estimates_are_deterministic() {
        let spec = NormSpec::hexagonal();
        let c = cfg(128);
        let a = estimate_omega(&spec, &c).unwrap();
        let b = estimate_omega(&spec, &c).unwrap();
        assert_eq!(a.value, b.value);
        assert_eq!(a.witness.x, b.witness.x);
        assert_eq!(a.witness.y, b.witness.y);

        // Worker count must not change the result.
        let pool1 = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let pool4 = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
        let r1 = pool1.install(|| estimate_omega(&spec, &c).unwrap());
        let r4 = pool4.install(|| estimate_omega(&spec, &c).unwrap());
        assert_eq!(r1.value, r4.value);
        assert_eq!(r1.witness.x, r4.witness.x);
        assert_eq!(r1.witness.y, r4.witness.y);
    }

    #[test]
    fn config_validation() {
        let bad = GridConfig { theta_grid: 32, ..GridConfig::default() };
        assert!(matches!(
            estimate_omega(&NormSpec::l2(), &bad),
            Err(EstimateError::InvalidConfig(_))
        ));
    }

    #[test]
    fn isometry_invariance_shear() {
        let shear = crate::vec2::Mat2::new(1.0, 0.7, -0.3, 1.2);
        let image = NormSpec::affine_image(NormSpec::l2(), shear).unwrap();
        let c = cfg(256);
        let omega = estimate_omega(&image, &c).unwrap().value;
        assert!((omega - 1.0).abs() < 2e-3, "omega = {omega}");
        let cnj = estimate_cnj(&image, &c).unwrap().value;
        assert!((cnj - 1.0).abs() < 2e-3, "cnj = {cnj}");

        // A non-Euclidean base: the pushforward makes the matrix an isometry,
        // so the constants of the image match the hexagonal plane's.
        let hex_image = NormSpec::affine_image(NormSpec::hexagonal(), shear).unwrap();
        let omega_hex = estimate_omega(&hex_image, &cfg(512)).unwrap().value;
        assert!((omega_hex - 1.225).abs() < 2e-3, "omega = {omega_hex}");
        let james_hex = estimate_james(&hex_image, &cfg(512)).unwrap().value;
        assert!((james_hex - 1.5).abs() < 2e-3, "james = {james_hex}");
    }
}
