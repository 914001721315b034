//! Polynomials, points and homogeneous maps.

pub mod map;
pub mod multipoly;
pub mod parse;
pub mod point;
pub mod univariate;

pub use map::{poly_height, HomogeneousMap, MapOver, DEFAULT_DEGREE_CAP};
pub use multipoly::MultiPoly;
pub use parse::{parse_map, parse_map_with_hint};
pub use point::{ProjPointModP, RationalProjPoint};
pub use univariate::{rational_roots, UniPoly};
pub mod groebner;
pub mod reduction;

pub use groebner::{buchberger, MonomialOrder};
pub use reduction::{bad_primes_p1, good_reduction_test, resultant_p1};
