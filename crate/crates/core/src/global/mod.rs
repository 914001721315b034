//! From local data to the exact set of rational periodic points.

pub mod bound;
pub mod hensel;
pub mod oracle;
pub mod periodic;

pub use bound::{height_bound, nullstellensatz_certificate, required_precision, HeightBound, NullstellensatzCertificate};
pub use hensel::{hensel_lift, lll_reconstruct, newton_applies, ResidueVector, DEFAULT_BRANCH_CAP};
pub use oracle::{brute_force_preperiodic_oracle, Portrait};
pub use periodic::{plan_lifting, rational_periodic_points, rational_periodic_points_planned, seed_counts, LiftStep, PeriodicPointSet};
