//! Exact computations around the action of the mapping class group of a
//! genus `g ≥ 3` surface on `H_1(Σ; Z)` and on the Fourier basis of
//! `L²(Hom(H_1(Σ), U(1)))`.
//!
//! - [`lattice`]: the homology lattice, intersection pairing and twist
//!   transvections in `Sp(2g, Z)`.
//! - [`words`]: Dehn twist words and a verified catalog of twist relations.
//! - [`fourier`]: finitely supported vectors on the character lattice, the
//!   permutation action, evaluation on the torus and decay constants.
//! - [`cohomology`]: cocycles, coboundaries, fixed-vector projections and
//!   the telescoping coboundary solver.
//! - [`io`]: text and JSON interchange formats.
//! - [`cli`]: the `mcgcoh` command line front end.

pub mod cli;
pub mod cohomology;
pub mod error;
pub mod exact;
pub mod fourier;
pub mod io;
pub mod lattice;
pub mod random;
pub mod words;

pub use error::{Error, Result};
