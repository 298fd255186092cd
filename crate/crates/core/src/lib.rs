//! Secrecy degrees of freedom for the MIMO two-user wiretap interference
//! channel: region computation, precoder construction, rank and rate based
//! verification, and a Monte-Carlo channel simulator.

pub mod alignment;
pub mod chansim;
pub mod error;
pub mod jsonio;
pub mod matcore;
pub mod precoder;
pub mod region;
pub mod verifier;

pub use error::{Error, Result};
pub use matcore::ComplexMatrix;
pub use precoder::{ChannelSet, PrecoderPair, SubsetId};
pub use region::{AntennaConfig, SdofPoint, SdofRegion, SubsetDims};
