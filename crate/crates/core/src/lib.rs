pub mod coefficients;
pub mod exponents;
pub mod parallel;
pub mod sample;
pub mod series;
mod sums;
pub mod supports;
pub mod theorems;
