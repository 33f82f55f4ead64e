//! Exact combinatorial engine for fibered monotone Lagrangians in
//! Brieskorn-Pham hypersurfaces.
//!
//! The crate models three layers, all in exact arithmetic:
//!
//! * [`lattice`]: integer Milnor lattices with Picard-Lefschetz twists,
//!   total monodromy, and the fractional boundary-twist factorization,
//!   validated against the classical spectrum.
//! * [`plane`]: piecewise-linear immersed loops in the plane with rational
//!   coordinates: turning numbers, transverse self-intersections, face
//!   arrangements with winding depths, and embedded-bigon search.
//! * Lagrangian builders and invariants built on those two (configuration
//!   words, Maslov indices, holonomy transport, combinatorial Floer ranks,
//!   annulus counts, and the three-fold layer).

pub mod builders;
pub mod configs;
pub mod exact;
pub mod floer;
pub mod lattice;
pub mod laurent;
pub mod plane;
pub mod render;
pub mod report;
pub mod threefold;
