//! Fusion systems over truncated discrete p-toral groups.

pub mod acceptance;
pub mod ambient;
pub mod analysis;
pub mod budget;
pub mod catalog;
pub mod error;
pub mod fusion;
pub mod group;
pub mod report;
pub mod transporter;
pub mod truncation;

pub use ambient::{Ambient, SubId};
pub use budget::Budget;
pub use error::{Error, Result};
pub use fusion::FusionSystem;
pub use report::{Report, Verdict};
