//! Exact-arithmetic toolkit for U_p-operators on parahoric-fixed vectors.
//!
//! The crate computes, for unramified principal-series constituents of GL2,
//! U(2,1) and GSp4 over a p-adic field:
//!
//! * the multiset of simultaneous U_p-eigenvalues on the Iwahori, Siegel,
//!   Klingen and hyperspecial fixed spaces, with fixed-space dimensions
//!   ([`local_tables`]);
//! * the operator polynomial that projects a spherical vector onto a chosen
//!   simultaneous eigenvector, together with the stabilized eigenvalues
//!   ([`stabilizer`]);
//! * a brute-force model of the GL2 unramified principal series at Iwahori
//!   level that verifies the eigenvalue bookkeeping independently
//!   ([`gl2_oracle`]);
//! * the corresponding global operations on q-expansions: Hecke and U_p
//!   action on elliptic coefficient lists, p-stabilization of eigenforms,
//!   and the two-factor stabilization of degree-2 Siegel Fourier tables with
//!   its eigenvalue bookkeeping and mod-p nonvanishing analysis ([`qexp`]).
//!
//! All arithmetic is exact: rationals are arbitrary-precision, square roots
//! of q live in a formal variable, and Hecke roots live in explicit
//! quadratic extensions. Every public type is immutable and thread-safe.

pub mod error;
pub mod gl2_oracle;
pub mod local_tables;
pub mod qexp;
pub mod root_data;
pub mod scalars;
pub mod stabilizer;

pub use error::{Error, Result};
