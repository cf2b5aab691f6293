//! Bodies analyzed in the closed-form examples, ball volumes, Wallis
//! integrals and the ellipsoid quadrature.

mod bodies;
mod quadrature;
mod report;
mod wallis;

pub use bodies::{ball, box_body, corner_simplex, cross_polytope, cube, cylinder, half_ball, half_ball_with_normal, make_body, regular_simplex, BodyKind};
pub use quadrature::{adaptive_simpson, ellipsoid_lambda, half_ellipsoid_isop, EllipsoidIsop, QuadratureResult, DEFAULT_EVAL_CAP, DEFAULT_QUAD_TOL};
pub use report::{golden_examples_report, report_csv, report_markdown, ExampleRow};
pub use wallis::{kappa, pi_enclosure, wallis, PiMultiple};
