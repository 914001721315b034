//! Dynamics of reduced maps over prime fields.

pub mod graph;
pub mod indexer;
pub mod periods;

pub use graph::{build_orbit_graph, find_cycles, max_table_points, LocalCycle, OrbitGraphModP, DEFAULT_MAX_TABLE_POINTS};
pub use indexer::PointIndexer;
pub use periods::{
    analyze_prime, intersect_periods, multiplier_matrix, possible_periods_for_prime, select_primes, PeriodCandidates, PrimeData,
    PrimePolicy,
};
