//! Exact embedding of dynamical systems in Poincaré–Dulac normal form into
//! higher-dimensional constrained linear ("parent") systems.
//!
//! A system `x' = Ax + F(x)` whose nonlinear part consists of resonant
//! monomials can be enlarged by one coordinate `w_i` per resonant monomial
//! `x^mu`; the enlarged system is linear and block-triangular, the algebraic
//! constraints `w_i = x^mu` cut out a flow-invariant manifold, and the
//! original system is the restriction of the linear flow to that manifold.
//! When the spectrum of `A` lies in a Poincaré domain there are finitely many
//! resonances, the parent system is finite dimensional, and triangular
//! back-substitution integrates it in closed polynomial-exponential form.
//!
//! The crate is organised in layers:
//!
//! - [`algebra`] — exact scalars (Gaussian rationals), multivariate
//!   polynomials over symbolic parameters, and the polynomial-exponential
//!   function algebra closed-form solutions live in;
//! - [`spectrum`] — Jordan data for the linear part and the exact Poincaré
//!   condition (origin outside the convex hull of the spectrum);
//! - [`resonance`] — enumeration of resonant monomials and per-target degree
//!   intervals;
//! - [`normal_form`] — the nonlinear system, its associated vector fields,
//!   and Lie-bracket tests for seminormal and full normal form;
//! - [`parent`] — construction of the parent linear system, its invariant
//!   constraint manifold, structural checks, and truncation analysis;
//! - [`solver`] — closed-form integration by triangular back-substitution,
//!   restriction to the constraint manifold, and projection;
//! - [`oracle`] — independent floating-point verification (fixed-step RK4,
//!   trajectory comparison, manifold drift);
//! - [`systems`] — ready-made small systems used in documentation and tests.
//!
//! Everything outside [`oracle`] uses exact arithmetic only.

pub mod algebra;
pub mod normal_form;
pub mod oracle;
pub mod parent;
pub mod resonance;
pub mod solver;
pub mod spectrum;
pub mod systems;

pub use algebra::{GaussianRational, Multiindex, Polynomial, PolyExp, Rational, SymbolTable};
pub use normal_form::{lie_bracket, NormalFormSystem, PolynomialVectorField};
pub use parent::{
    build_parent, build_parent_projected, closure_analysis, truncate_normal_form, ParentSystem,
    TruncationReport,
};
pub use resonance::{enumerate_resonances, is_resonant, ResonanceTable, ResonantMonomial};
pub use solver::{
    project, restrict, solve_parent, triangular_order, verify_solution_symbolic,
    ClosedFormSolution,
};
pub use spectrum::{check_poincare, resonance_degree_bound, JordanStructure, Spectrum};
