//! Numerical models of adjoint orbits of sl(n,C) and the structures built on
//! them: cotangent bundles of flag manifolds, moment maps, embeddings into
//! products of flags, exterior-power realizations and Lagrangean graphs.

pub mod cotangent;
pub mod error;
pub mod flagprod;
pub mod harness;
pub mod lagrangian;
pub mod liealg;
pub mod mat;
pub mod orbit;
pub mod repmodel;
pub mod sampling;
pub mod weylgrp;

pub use error::{Error, Result};
