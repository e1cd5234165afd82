//! Function families, Maclaurin coefficients and scaled partial sums.

pub mod family;
pub mod growth;
pub mod poly;

pub use family::{make_family, FamilyKind, FunctionFamily, FAMILY_NAMES};
pub use growth::{Direction, GrowthSpec};
pub use poly::{partial_sum, scaling_radius, ClosedForm, Evaluation, PartialSumPoly, RadiusMode};
