//! Exact Eulerian polynomials, their L-form relaxation, linear matrix pencils
//! built from it, and certified bounds on the extreme roots.

pub mod bounds;
pub mod descent;
pub mod diagnostics;
pub mod error;
pub mod eulerian;
pub mod exact;
pub mod lform;
pub mod pencil;
pub mod spectra;

pub use descent::{
    closed_form_r, count_exact_bruteforce, count_formula, descent_top_set, CountMethod,
    DescentTopSet, Permutation,
};
pub use error::{Error, Result};
pub use eulerian::{
    homogeneous_eulerian, multivariate_eulerian, multivariate_eulerian_truncated, polynomialize,
    univariate_eulerian, MultiAffinePolynomial, UnivariatePolynomial,
};
pub use exact::{AlgebraicBound, Enclosure, Rational};
pub use lform::{
    eulerian_lform, eulerian_lform_table, lform_from_truncation, LFormTable, Monomial, Truncation3,
};
pub use pencil::{
    build_pencil, diagonal_pencil, psd_certificate, DiagonalPencil, LinearMatrixPencil,
    PsdCertificate, SymmetricRationalMatrix,
};
pub use spectra::{
    boundary_kernel_vector, extreme_roots, psd_interval_left, KernelVector, Normalization,
    DEFAULT_PREC,
};
pub use bounds::{
    bound_report, closed_form_dn, guess_vector, linearized_dn, optimal_y, optimize_y_numeric,
    univariate_bound, BoundReport, EulerianInstance, GuessVector, QuadraticInY, VectorKind,
    YPolicy,
};
pub use diagnostics::{ratio_diagnostic, RatioDiagnostic};
