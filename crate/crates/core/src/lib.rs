//! Relativistic wave packets carrying orbital angular momentum.
//!
//! Every observable is available in up to three forms that check each other:
//! a closed form built from ratios of modified Bessel functions, its
//! small-width expansion, and direct adaptive quadrature over the packet's
//! momentum-space measure. Position-space fields are evaluated from the exact
//! Bessel solution, from its paraxial Laguerre-Gaussian limit, and from a
//! numerical Fourier transform.
//!
//! Natural units (`hbar = c = 1`) with metric `diag(1, -1, -1, -1)` are used
//! throughout; the particle mass is normally 1.

pub mod error;
pub mod fermion;
pub mod field;
pub mod kinematics;
pub mod observables;
pub mod packet;
pub mod quadrature;
pub mod specfun;
pub mod verify;

pub use error::{Error, Result};
pub use fermion::{Bispinor, Helicity, MagneticMoment};
pub use field::{SpacetimePoint, Varsigma};
pub use kinematics::{Boost, FourVector};
pub use observables::{MassExcess, ObservableReport, Quantity};
pub use packet::{MomentumPoint, Packet, PacketParams};
pub use quadrature::{IntegrandSample, QuadResult, QuadratureSpec};
pub use specfun::{LogComplex, LogReal};
