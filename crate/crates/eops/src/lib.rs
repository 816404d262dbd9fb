//! Exact mod-p computations with homology operations on E-infinity spaces.

pub mod algebra;
pub mod arith;
pub mod cache;
pub mod checks;
pub mod dl;
pub mod free;
pub mod lin;
pub mod linalg;
pub mod oracle;
pub mod poly;
pub mod semiring;
pub mod sequence;
pub mod series;
pub mod sharp;

pub use arith::{ArithError, Prime, Scalar};
pub use lin::{Lin, Linear};
pub use sequence::{enumerate_allowable, Condition, Entry, Sequence, SequenceError};
pub use series::{SeriesError, Substitution, TruncatedSeries};
