//! Core of the chemical function toolkit.
//!
//! Everything here is pure computation over `alloc`: finite-field codes,
//! log-space probability kernels, the chemical function / extraction
//! framework, the dye, orDNA and GSE simulators, the security games and
//! the reproduction of the published bounds. IO, the CLI and parallel
//! trial execution live in the `cfi` crate.

#![no_std]
#![warn(rust_2018_idioms, unused_qualifications)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bounds;
pub mod codes;
pub mod dye;
pub mod estimate;
pub mod exactprob;
pub mod framework;
pub mod games;
pub mod gf256;
pub mod gse;
pub mod ordna;
pub mod rng;

pub use codes::{CodeFamily, CodeSpec, CodecError, DecodeOutcome};
pub use estimate::{wilson_interval, wilson_interval_z, Interval};
pub use exactprob::{BinomialSpec, LogProb, ProbError};
pub use framework::{
    CfError, Cfs, ChemicalFunction, Enrollment, HelperData, Output, Scheme, SchemeTag, VerifyRule,
};
pub use gf256::FieldElem256;
