//! Exact enumeration of ramified coverings of the sphere with one
//! distinguished branch point of fixed type and `m` free branch points.
//!
//! The counts `b_{g,ν,m}` are read off a content-weighted Schur-function
//! generating series ([`genseries`]), checked against a genus-zero closed
//! form and a brute-force constellation count ([`oracle`]), and probed for
//! KP-type differential identities ([`analysis`]).

pub mod analysis;
pub mod error;
pub mod exactalg;
pub mod genseries;
pub mod oracle;
pub mod par;
pub mod partitions;
pub mod symfunc;

pub use error::{Error, Result};
pub use exactalg::{HPoly, Rat, RatPolyM, Window};
pub use par::Exec;
pub use partitions::Partition;
pub use symfunc::PSeries;
