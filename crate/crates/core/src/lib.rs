//! Perfect-power detection and root computation for lacunary polynomials.

pub mod bench;
pub mod conjecture;
mod decimal;
pub mod dense;
pub mod detect;
pub mod dispatch;
pub mod error;
pub mod field;
pub mod generate;
pub mod intmath;
pub mod io;
pub mod multivar;
pub mod poly;
pub mod ring;
pub mod root;
