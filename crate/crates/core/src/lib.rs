//! Time-windowed geometric queries over sequences of point events.
//!
//! An [`EventSequence`] holds events sorted by timestamp. A query names a
//! time interval, which resolves to a contiguous index [`Window`], and asks a
//! geometric question about the points inside it. The indices in this crate
//! answer those questions in time that depends on the window width rather
//! than on the total number of events:
//!
//! - [`skyline::SkylineIndex`]: maxima (skyline) reporting, counting and
//!   distinct-color reporting in any dimension.
//! - [`hull::HullTree`]: convex hull queries in the plane (gift wrapping,
//!   hull reporting, tangents, extremal points, line decision and stabbing,
//!   point location).
//! - [`proximity::ZTree`]: approximate range and nearest neighbor queries,
//!   windowed Z-order successor, and per-window proximity graphs.
//!
//! All indices are immutable after construction and can be shared between
//! threads.

pub mod error;
pub mod event;
pub mod hull;
pub mod morton;
pub mod predicates;
pub mod proximity;
pub mod skyline;
pub mod tree;

pub use error::{Error, Result};
pub use event::{EventSequence, RawEvent, TemporalPoint, Window};
pub use morton::{MortonKey, Quantizer};
pub use predicates::Orientation;
