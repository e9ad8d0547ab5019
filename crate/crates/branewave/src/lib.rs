//! Spectral solution of the Klein-Gordon equation in the past causal domain
//! of a De Sitter brane in an AdS5 bulk.
//!
//! The library is organized around the physical pipeline:
//!
//! * [`specialfn`] - Bessel, Legendre and gamma kernels everything else uses.
//! * [`geometry`] - brane geometry constants and coordinate maps.
//! * [`desitter`] - a single Klein-Gordon mode on the Steady State Universe:
//!   exact Fourier multipliers, energies, asymptotic profile, decay rates,
//!   blow-up amplitude and the finite-speed experiment.
//! * [`spectrum`] - the transverse Sturm-Liouville operator on (0, rho0):
//!   point spectrum from the transcendental equation, generalized
//!   eigenfunctions, forward/inverse spectral transforms.
//! * [`tower`] - the Kaluza-Klein tower: decompose bulk data, evolve each
//!   mode, reconstruct, audit energies, extract the massless graviton and
//!   measure the horizon energy growth.
//! * [`fd`] - an independent finite-difference oracle for cross-validation.
//! * [`io`] - deterministic CSV tables with a JSON header line.

pub mod desitter;
pub mod error;
pub mod fd;
pub mod fft;
pub mod geometry;
pub mod io;
pub mod quadrature;
pub mod specialfn;
pub mod spectrum;
pub mod tower;

pub use error::{Error, Result};
