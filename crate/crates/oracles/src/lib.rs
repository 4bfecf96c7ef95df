//! Brute-force reference answers for every tempogeo query.
//!
//! Each oracle works directly from the definition over the window points.
//! Nothing here reuses the indexed code paths beyond the exact predicates.

pub mod gen;
pub mod hull;
pub mod proximity;
pub mod query;
pub mod skyline;
