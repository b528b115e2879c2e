pub mod donsker;
pub mod error;
pub mod fhdam;
pub mod foxh;
pub mod gwm;
pub mod oracles;
pub mod polys;
pub mod real;
pub mod specfun;
pub mod wright;

pub use error::{Error, Result};
pub use real::Real;

/// Double-precision instantiations.
pub type Family = wright::ValidatedFamily<f64>;
pub type Params = wright::WrightParams<f64>;
pub type MixingDensity = fhdam::FHDensity<f64>;
pub type Measure = gwm::GWMeasure<f64>;
pub type Poly = polys::PolyCoeffs<f64>;
pub type Pairing = donsker::PairingData<f64>;
pub type FoxH = foxh::FoxHParams<f64>;
