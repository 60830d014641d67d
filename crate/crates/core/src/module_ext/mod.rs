//! Finitely presented modules over a polynomial ring and the arithmetic of
//! extensions between them.

mod extension;
mod hom;
mod presented;

use std::fmt;

pub use extension::{
    baer_sum, extensions_isomorphic, is_extension_morphism, is_split, opposite, pullback, pushforward, Extension,
};
pub use hom::{ext_dimension, free_resolution, hom_space, HomSpace};
pub use presented::{ModuleHom, PresentedModule, Pruned};

/// A κ-dimension that may be infinite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dim {
    Finite(usize),
    Infinite,
}

impl Dim {
    pub fn finite(self) -> Option<usize> {
        match self {
            Dim::Finite(d) => Some(d),
            Dim::Infinite => None,
        }
    }
}

impl fmt::Display for Dim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dim::Finite(d) => write!(f, "{d}"),
            Dim::Infinite => f.write_str("infinite"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModuleError {
    #[error("homomorphism does not respect the relations of its source")]
    NotWellDefined,
    #[error("endpoint mismatch: {0}")]
    EndpointMismatch(&'static str),
    #[error("sequence is not exact: {0}")]
    NotExact(&'static str),
}
