//! Walsh-zero spaces of the Gold functions `x^(2^i+1)` on F_{2^n}, and the
//! APN permutations they induce.
//!
//! A WZ space of `f` is an `n`-dimensional subspace of `F_{2^n} x F_{2^n}`
//! on which the Walsh transform of `f` vanishes away from zero. Two such
//! spaces meeting only in zero re-coordinatize the graph code of `f` into
//! the graph of a permutation CCZ-equivalent to `f`.
//!
//! ```
//! use wzspace::ccz::certify_ccz;
//! use wzspace::field::{Elem, FieldCtx};
//! use wzspace::pairs::{f8_primitive, pair_p51};
//! use wzspace::walsh::FnTable;
//!
//! let ctx = FieldCtx::with_degree(9)?;
//! let gp = ctx.gold_params(1)?;
//! let f = FnTable::gold(ctx, &gp);
//! let pair = pair_p51(&ctx, &gp, f8_primitive(&ctx)?[0], Elem::ONE)?;
//! let cert = certify_ccz(&f, &pair)?;
//! assert!(cert.codes_equal);
//! assert!(cert.g_report.is_apn && cert.g_report.is_permutation);
//! # Ok::<(), wzspace::Error>(())
//! ```
//!
//! The guide in `book/` walks through each module; its code blocks are
//! compiled as doc-tests of this crate.

pub mod analysis;
pub mod artifact;
pub mod ccz;
pub mod enumerate;
pub mod error;
pub mod families;
pub mod field;
pub mod linalg;
pub mod pairs;
pub mod reproduce;
pub mod walsh;

pub use error::{Error, Result};
pub use field::{Elem, FieldCtx, GoldParams};
pub use linalg::Subspace;
pub use walsh::FnTable;

/// The book chapters, compiled so their examples run under `cargo test`.
#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
mod readme {}

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/field.md")]
    mod field {}
    #[doc = include_str!("../../../book/src/walsh.md")]
    mod walsh {}
    #[doc = include_str!("../../../book/src/spaces.md")]
    mod spaces {}
    #[doc = include_str!("../../../book/src/pairs.md")]
    mod pairs {}
    #[doc = include_str!("../../../book/src/permutations.md")]
    mod permutations {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
