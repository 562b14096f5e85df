//! Necklaces, homotopy categories and right fibrations for finite truncated
//! simplicial sets.

pub mod bench;
pub mod category;
pub mod corpus;
pub mod fibration;
pub mod io;
pub mod necklace;
pub mod localize;
pub mod rewrite;
pub mod segalify;
pub mod slice;
pub mod sset;
pub mod union_find;

pub use category::{CategoryError, ExplicitFinCategory, Functor};
pub use necklace::{Necklace, NecklaceError, NecklaceMap};
pub use sset::{SSetMap, SsetError, TruncatedSSet, ValidationReport};
