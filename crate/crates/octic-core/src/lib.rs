//! Exact computational kernel behind the `octic` toolkit.
//!
//! The crate is organized around a small computer-algebra core
//! ([`multipoly`], [`gf`]) and the domain modules built on top of it:
//! plane-arrangement combinatorics ([`arrangement`]), cross-ratio and
//! j-invariant machinery ([`elliptic`]), blow-up charts of the double-octic
//! resolution ([`resolution`]), finite-field point counting ([`counting`]),
//! zeta-function weight analysis ([`zeta`]) and the degeneration
//! dimension ledger ([`specseq`]).

pub mod arrangement;
pub mod counting;
pub mod elliptic;
pub mod gf;
pub mod multipoly;
pub mod resolution;
pub mod specseq;
pub mod zeta;
