//! Computational algebra for L-valued orders over a finite frame `L`:
//! frames, L-ordered sets and their joins and meets, L-lattices,
//! L-ordered groups with positive cones, L-subgroups, quotients by
//! L-filters and Riesz decomposition.
//!
//! Every verdict over a group carries a [`CertStatus`]: exhaustive on
//! finite groups, certified on a [`Window`] for `ℤⁿ`, or sampled when an
//! enumeration would exceed its guard.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod enumerate;
pub mod frame;
pub mod group;
pub mod ogroup;
pub mod order;
pub mod report;
pub mod subgroup;
pub mod subset;

pub use frame::{Frame, FrameElt, FrameError};
pub use group::{Domain, FiniteGroup, FreeAbelian, GroupBackend, Window, ZVec};
pub use ogroup::{LOrderedGroup, OgroupError};
pub use order::{LOrderedSet, OrderError};
pub use report::{CertStatus, CheckReport, SearchConfig};
pub use subgroup::SubgroupError;
pub use subset::FuzzySubset;
