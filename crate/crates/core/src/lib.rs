//! Numerical verification of the capacitary Markov inequality
//! `cap E * sup_E |f'| <= 2^(1/d - 1) d^2 sup_E |f|` for polynomials on plane
//! continua and on components of polynomial lemniscates.

pub mod capacity;
pub mod deform;
pub mod error;
pub mod levelset;
pub mod markov;
pub mod poly;
pub mod sets;
pub mod tolerances;

pub use error::{Error, Result};
pub use poly::Poly;
pub use tolerances::Tolerances;
