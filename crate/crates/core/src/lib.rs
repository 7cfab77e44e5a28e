//! Computations in the variants `(T_n, *_alpha)` of the full transformation
//! semigroup: sandwich arithmetic, idempotents and their root classes, the
//! classification of isolated, completely isolated, one-sided convex and
//! convex subsemigroups, and a brute-force oracle that checks that
//! classification against the definitions.

pub mod classification;
pub mod context;
pub mod elements;
pub mod error;
pub mod idempotents;
pub mod oracle;
pub mod transform;
pub mod variants;

#[cfg(feature = "cli")]
pub mod cli;

use std::fmt;

use num_bigint::BigUint;
use serde::{Serialize, Serializer};

pub use context::{SandwichContext, ScanGuard, StableData, VariantTable};
pub use elements::{BitSet, ElementSet};
pub use error::{Error, Result};
pub use transform::{compose, Partition, PointSet, Transformation};

/// Version of the JSON report layout.
pub const SCHEMA_VERSION: u32 = 1;

/// An exact count. Serialized as a JSON number when it fits in a `u64` and as
/// a decimal string otherwise.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct BigCount(pub BigUint);

impl BigCount {
    pub fn to_u64(&self) -> Option<u64> {
        u64::try_from(&self.0).ok()
    }
}

impl From<u64> for BigCount {
    fn from(v: u64) -> Self {
        BigCount(BigUint::from(v))
    }
}

impl fmt::Display for BigCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Serialize for BigCount {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.to_u64() {
            Some(v) => s.serialize_u64(v),
            None => s.collect_str(&self.0),
        }
    }
}

pub(crate) fn one_based<S: Serializer>(v: &usize, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_u64(*v as u64 + 1)
}

pub(crate) fn one_based_vec<S: Serializer>(v: &[usize], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x + 1))
}
