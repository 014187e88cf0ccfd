//! Minimal surfaces in the unit 3-sphere that are foliated by circles, together
//! with the numerical machinery that checks them and the minimal hypersurfaces
//! of R⁴ they generate.
//!
//! The families are the great sphere, the Clifford torus, the Lawson tori and
//! the generalized tori of second type, whose conformal factor `E = e^z` solves
//! the sinh-Gordon equation `z'' + 4 sinh z = 0`.

// `!(x > y)` is used on purpose so that NaN takes the rejecting branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod export;
pub mod fd;
pub mod hypersurface;
pub mod ode;
pub mod sinh_gordon;
pub mod surfaces;
pub mod vec4;
pub mod verify;

pub use error::{Error, Result};
pub use export::MeshR3;
pub use hypersurface::{HypersurfacePatch, ScalarField, ShapeReport};
pub use ode::{IvpOptions, IvpSolution, Quadrature};
pub use sinh_gordon::{Reparametrization, SinhGordonSolution};
pub use surfaces::{ChartParams, Domain, Jet, SecondTypeTorus, SurfaceChart};
pub use vec4::Vec4;
pub use verify::{CheckResult, CircleVerdict, FormData, FrenetProfile, Grid, Tolerances, VerificationReport};

/// Shortest representation of `x` that parses back to the same value;
/// scientific notation outside `[1e-4, 1e16)`.
pub fn format_float(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || !x.is_finite() || (1e-4..1e16).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}
