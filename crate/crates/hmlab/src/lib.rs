//! Numerical laboratory for harmonic map equations on Hermitian torus domains.
//!
//! The library discretises smooth maps f from a complex torus ℂ^m/(period·ℤ)^{2m}
//! carrying a Hermitian metric h into Riemannian or Kähler chart targets, and
//! provides:
//!
//! * the five stationarity residuals (∂̄-harmonic, ∂-harmonic, harmonic,
//!   Hermitian-harmonic, pluri-harmonic) and their algebraic relations,
//! * energies E', E'', E with trapezoidal quadrature,
//! * curvature pairings Q (Kähler targets) and Q₀ (Riemannian targets) plus
//!   seeded sign probes for curvature conditions,
//! * two explicit heat flows (the torsion-free Hermitian-harmonic flow and the
//!   ∂̄-energy flow) with CFL-controlled RK4 stepping,
//! * a verification harness: energy-gradient consistency, an integral Bochner
//!   identity, pluri-harmonic degeneracy checks and a rank rigidity probe,
//!   drivable from scenario files through the `hmlab` CLI.
//!
//! Module layout: [`grid`] (stencils, quadrature), [`expr`] (tiny expression
//! evaluator for custom metrics), [`forms`] (exterior calculus on the grid),
//! [`geometry`] (domain metrics), [`targets`] (target charts and curvature),
//! [`maps`] (map fields, energies, residuals, pairings), [`flow`] (heat
//! flows), [`harness`] (checks), [`scenario`] (config files, reports, runner).

pub mod expr;
pub mod flow;
pub mod forms;
pub mod geometry;
pub mod grid;
pub mod harness;
pub mod maps;
pub mod scenario;
pub mod targets;

pub use grid::{Grid, GridSpec};
