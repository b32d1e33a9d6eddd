//! Geometric constants of two-dimensional normed planes.
//!
//! This crate computes the isosceles-orthogonality constants Ω and Ω′ of a
//! Minkowski plane together with the classical constants they interact with
//! — James `J`, Schäffer `S`, von Neumann–Jordan `C_NJ`, the moduli `γ_X(t)`
//! and `δ_X(ε)`, and the orthogonality-comparison constants `D` and `BR` —
//! and verifies the inequalities and identities relating them on whole
//! batteries of norms.
//!
//! The pieces:
//!
//! * [`geometry`] — the norm catalog ([`NormSpec`]), gauge evaluation, the
//!   unit-sphere parametrization and norm-axiom checking;
//! * [`orthogonality`] — solvers for isosceles and Birkhoff orthogonal
//!   partners with residual certificates;
//! * [`estimators`] — grid-plus-refinement optimizers producing witnessed
//!   [`Estimate`]s for every constant;
//! * [`symmetric`] — the one-parameter closed form of Ω on symmetric planes;
//! * [`relations`] — the relation battery and its [`RelationReport`]s.
//!
//! ```
//! use isoplane::{estimate_omega, GridConfig, NormSpec};
//!
//! let omega = estimate_omega(&NormSpec::linf(), &GridConfig::with_theta(256)).unwrap();
//! assert!((omega.value - 1.6).abs() < 1e-6);
//! ```
//!
//! Everything is a pure function of its inputs: norms, solvers and
//! estimators hold no shared mutable state and are safe to call from any
//! number of threads. The estimators parallelize their grid sweeps through
//! rayon internally, and partial results merge through a total order, so
//! values and witnesses are bit-identical for every worker count.

mod search;
mod vec2;

pub mod estimators;
pub mod geometry;
pub mod orthogonality;
pub mod relations;
pub mod symmetric;

pub use estimators::{
    estimate, estimate_br, estimate_cnj, estimate_d, estimate_delta, estimate_gamma,
    estimate_james, estimate_omega, estimate_omega_prime, estimate_schaffer, omega_ratio,
    ConstantKind, ConstantSet, Direction, Estimate, EstimateError, GridConfig, Witness,
};
pub use geometry::{
    polyhedral_from_vertices, AxiomReport, AxiomViolation, NormParseError, NormSpec, SpecError,
    SpherePoint,
};
pub use orthogonality::{
    birkhoff_lambda_min, birkhoff_partners, is_birkhoff, isosceles_partner, isosceles_residual,
    OrthoKind, OrthoPair, SolveError,
};
pub use relations::{
    check_all, default_battery, run_battery, BatteryError, BatteryRun, RelationReport,
};
pub use symmetric::{check_axes, f_func, g_func, omega_closed_form, AxesPair, SymmetricError};
pub use vec2::{Mat2, Vec2};

// The book chapters double as doc tests: every fenced Rust block in
// `book/src` must compile and pass against the current API.
#[cfg(doctest)]
mod book {
    macro_rules! chapter {
        ($name:ident, $path:literal) => {
            #[doc = include_str!($path)]
            pub struct $name;
        };
    }

    chapter!(Norms, "../../../book/src/norms.md");
    chapter!(Orthogonality, "../../../book/src/orthogonality.md");
    chapter!(Constants, "../../../book/src/constants.md");
    chapter!(SymmetricPlanes, "../../../book/src/symmetric-planes.md");
    chapter!(Relations, "../../../book/src/relations.md");
}
