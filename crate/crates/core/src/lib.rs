//! Velocity fields, moments and weak Euler residuals of power-law and
//! Kaden-spiral vortex sheets.

pub mod config;
pub mod error;
pub mod euler;
pub mod measures;
pub mod moments;
pub mod quadrature;
pub mod reproduce;
pub mod velocity;

pub use config::RunConfig;
pub use error::{Error, Result};
