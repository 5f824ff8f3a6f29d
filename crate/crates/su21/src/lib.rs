//! Numerical kernels for Fourier terms and Poincaré series on the real rank one
//! group `G = SU(2,1)`.
//!
//! The crate is organised bottom-up:
//!
//! | module             | contents                                                        |
//! |--------------------|-----------------------------------------------------------------|
//! | [`numeric_core`]   | complex and Gaussian-integer matrices, quadrature nodes, sums    |
//! | [`group_core`]     | subgroup constructors, Iwasawa coordinates, Lie algebra basis    |
//! | [`heisenberg`]     | the Heisenberg group `N`, characters, Hermite and theta functions|
//! | [`ktype_poly`]     | polynomial functions `Φ^h_{p,r,q}` on `K` and Haar integration   |
//! | [`specfun`]        | gamma, modified Bessel `I`/`K`, Whittaker `M`/`W`/`V`            |
//! | [`spectral`]       | spectral parameters, Weyl orbits, the isomorphism-class catalog  |
//! | [`fourier_basis`]  | evaluable Fourier-term basis families and the Casimir operator   |
//! | [`maass_selberg`]  | sesquilinear form, Wronskians and the Wronskian-order classifier |
//! | [`lattice_series`] | exact coset enumeration and truncated Poincaré/Eisenstein sums   |
//! | [`verify`]         | named verification suites with measured values and tolerances    |

pub mod fourier_basis;
pub mod group_core;
pub mod heisenberg;
pub mod ktype_poly;
pub mod lattice_series;
pub mod maass_selberg;
pub mod numeric_core;
pub mod spectral;
pub mod specfun;
pub mod verify;

pub use numeric_core::{Complex, GaussInt, GaussMat3, Mat3, Precision, I};
