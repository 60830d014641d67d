//! Runs the code in the guide under `book/` as doctests.

#[doc = include_str!("../../../book/src/intro.md")]
pub mod intro {}
#[doc = include_str!("../../../book/src/polynomials.md")]
pub mod polynomials {}
#[doc = include_str!("../../../book/src/singularities.md")]
pub mod singularities {}
#[doc = include_str!("../../../book/src/extensions.md")]
pub mod extensions {}
#[doc = include_str!("../../../book/src/liftings.md")]
pub mod liftings {}
#[doc = include_str!("../../../book/src/versal.md")]
pub mod versal {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
