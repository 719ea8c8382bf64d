//! Techno-economic models for a green ammonia economy.
//!
//! - [`gtfp`]: regional green total-factor productivity via CRS DEA, solved
//!   with the dense simplex in [`lp`].
//! - [`carriers`]: levelized delivery and storage costs for hydrogen moved as
//!   ammonia, liquid hydrogen, or pipeline gas.
//! - [`cofiring`]: fuel cost, electricity cost and emissions of ammonia/coal
//!   co-firing.
//! - [`scenarios`]: 2030 green ammonia supply capacity against sector demand.
//! - [`data`]: bundled parameter tables, their validation and provenance.

pub mod carriers;
pub mod cofiring;
pub mod data;
pub mod error;
pub mod gtfp;
pub mod lp;
pub mod scenarios;
pub mod units;

pub use error::{Error, Result};
