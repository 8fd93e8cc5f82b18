pub mod borel;
pub mod cli;
pub mod complex;
pub mod coupling;
pub mod error;
pub mod mapping;
pub mod models;
pub mod odm;
pub mod pade;
pub mod poly;
pub mod quad;
pub mod reproduce;
pub mod saddle;
pub mod series;

pub use error::{Error, Result};
pub use series::{PowerSeries, Precision};
