//! Curvature of translation surfaces z = f(x) + g(y) in Euclidean and
//! Lorentz-Minkowski 3-space: numeric mean/Gauss curvature via third-order
//! jets, linear Weingarten fitting and classification, closed-form
//! generators for the classified families, and an exact rational
//! differential-algebra engine that replays the identity chains behind the
//! classification.

pub mod algebra;
pub mod expr;
pub mod genesis;
pub mod jet;
pub mod surface;
pub mod weingarten;

pub use algebra::{
    mutation_target, run_suite, suite_passes, AlgebraError, Mutation, SuiteId, SuiteReport,
};
pub use expr::{parse_profile, EvalError, ExprAst, ParseError};
pub use genesis::{
    closed_form_separated, integrate_separated_profile, make_family, surface_from_tables,
    verify_minimal, Family, GenesisError, ProfileRow,
};
pub use jet::{Jet3, JetError};
pub use surface::{
    general_curvature, Ambient, CurvatureSample, GridSpec, Profile, SurfaceError, SurfaceSpec,
    TranslationSurface,
};
pub use weingarten::{
    classify, fit_linear_weingarten, theorem_audit, AuditReport, Classification, FitError,
    FitTolerances, WeingartenFit,
};
