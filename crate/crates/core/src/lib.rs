//! 0-cohomology of finite monoids with zero, with coefficients in natural
//! systems on the category of factorizations, computed by exact integer
//! linear algebra.

pub mod exactalg;
pub mod facnerve;
pub mod monoid;
pub mod natsys;
pub mod cohomology;
pub mod resolution;
pub mod cli;
