//! Special-function and numerical primitives shared by the other modules.

pub mod gamma;
pub mod quad;
pub mod rng;

pub use gamma::{gamma, ln_gamma, ln_gamma_complex, rgamma, sin_pi};
pub use quad::{integrate, try_integrate, Domain, QuadOptions, QuadResult, QuadValue};
pub use rng::RngState;
