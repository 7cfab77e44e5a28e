//! Transformations of a finite set, their kernels and images.
//!
//! Points are stored 0-based. All text forms (`Display`, `FromStr`, JSON)
//! use 1-based points: `[2,3,1]` for a transformation, `{1,2|3}` for a
//! partition and `{1,3}` for a set of points.
//!
//! Composition runs from the left to the right: `compose(b, g)` is the
//! map `x -> g(b(x))`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest supported degree; `n^n` must fit in a `u64` element index.
pub const MAX_DEGREE: usize = 15;

/// A total self-map of `{0, .., n-1}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Transformation {
    images: Vec<u8>,
}

impl Transformation {
    /// Builds a transformation from 0-based images.
    pub fn from_zero_based(images: Vec<u8>) -> Result<Self> {
        let n = images.len();
        check_degree(n)?;
        if let Some((position, &value)) = images
            .iter()
            .enumerate()
            .find(|(_, &v)| (v as usize) >= n)
        {
            return Err(Error::EntryOutOfRange {
                position: position + 1,
                value: value as usize + 1,
                n,
            });
        }
        Ok(Transformation { images })
    }

    /// Builds a transformation from 1-based images, as written in the text form.
    pub fn from_one_based(images: &[usize]) -> Result<Self> {
        let n = images.len();
        check_degree(n)?;
        let mut out = Vec::with_capacity(n);
        for (position, &value) in images.iter().enumerate() {
            if value == 0 || value > n {
                return Err(Error::EntryOutOfRange {
                    position: position + 1,
                    value,
                    n,
                });
            }
            out.push((value - 1) as u8);
        }
        Ok(Transformation { images: out })
    }

    pub(crate) fn from_raw(images: Vec<u8>) -> Self {
        debug_assert!(images.iter().all(|&v| (v as usize) < images.len()));
        Transformation { images }
    }

    pub fn identity(n: usize) -> Self {
        Transformation::from_raw((0..n as u8).collect())
    }

    /// The constant map onto the 0-based point `c`.
    pub fn constant(n: usize, c: usize) -> Self {
        assert!(c < n, "constant {c} out of range for degree {n}");
        Transformation::from_raw(vec![c as u8; n])
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// Image of the 0-based point `x`.
    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x] as usize
    }

    pub fn images(&self) -> &[u8] {
        &self.images
    }

    pub fn to_one_based(&self) -> Vec<usize> {
        self.images.iter().map(|&v| v as usize + 1).collect()
    }

    /// Position in the dense enumeration of all `n^n` maps:
    /// `sum images[i] * n^i` with 0-based images.
    pub fn index(&self) -> u64 {
        encode(&self.images)
    }

    pub fn from_index(n: usize, index: u64) -> Self {
        let mut images = vec![0u8; n];
        decode_into(n, index, &mut images);
        Transformation { images }
    }

    pub fn image(&self) -> PointSet {
        PointSet::from_points(self.images.iter().map(|&v| v as usize))
    }

    pub fn rank(&self) -> usize {
        let mut seen = 0u32;
        for &v in &self.images {
            seen |= 1 << v;
        }
        seen.count_ones() as usize
    }

    pub fn kernel(&self) -> Partition {
        kernel_of(&self.images)
    }

    pub fn is_permutation(&self) -> bool {
        self.rank() == self.degree()
    }

    /// Restriction to `domain`, which must be mapped into itself. The result is
    /// relabelled along the ascending order of `domain`.
    pub fn restrict(&self, domain: &PointSet) -> Option<Transformation> {
        let pts = domain.points();
        let mut out = Vec::with_capacity(pts.len());
        for &p in pts {
            let img = self.apply(p as usize) as u8;
            out.push(pts.binary_search(&img).ok()? as u8);
        }
        Some(Transformation::from_raw(out))
    }
}

pub(crate) fn check_degree(n: usize) -> Result<()> {
    if n == 0 || n > MAX_DEGREE {
        Err(Error::BadDegree(n))
    } else {
        Ok(())
    }
}

#[inline]
pub(crate) fn encode(images: &[u8]) -> u64 {
    let n = images.len() as u64;
    images.iter().rev().fold(0u64, |acc, &v| acc * n + v as u64)
}

#[inline]
pub(crate) fn decode_into(n: usize, mut index: u64, out: &mut [u8]) {
    let base = n as u64;
    for slot in out.iter_mut().take(n) {
        *slot = (index % base) as u8;
        index /= base;
    }
}

/// `n^n`, the order of the full transformation semigroup.
pub fn semigroup_order(n: usize) -> u64 {
    (n as u64).pow(n as u32)
}

pub(crate) fn kernel_of(images: &[u8]) -> Partition {
    // blocks appear in order of their minimal element because x ascends
    let mut slot_of_value = [u8::MAX; 256];
    let mut blocks: Vec<Vec<u8>> = Vec::new();
    for (x, &v) in images.iter().enumerate() {
        let slot = &mut slot_of_value[v as usize];
        if *slot == u8::MAX {
            *slot = blocks.len() as u8;
            blocks.push(Vec::new());
        }
        blocks[*slot as usize].push(x as u8);
    }
    Partition { blocks }
}

/// Left-to-right composition: the result maps `x` to `gamma(beta(x))`.
pub fn compose(beta: &Transformation, gamma: &Transformation) -> Result<Transformation> {
    if beta.degree() != gamma.degree() {
        return Err(Error::DegreeMismatch {
            left: beta.degree(),
            right: gamma.degree(),
        });
    }
    Ok(compose_unchecked(beta, gamma))
}

pub(crate) fn compose_unchecked(beta: &Transformation, gamma: &Transformation) -> Transformation {
    Transformation::from_raw(beta.images.iter().map(|&b| gamma.images[b as usize]).collect())
}

impl fmt::Display for Transformation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, v) in self.images.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", v + 1)?;
        }
        f.write_str("]")
    }
}

impl fmt::Debug for Transformation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Transformation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("expected \"[b1,...,bn]\", got {s:?}")))?;
        let mut values = Vec::new();
        for (i, tok) in inner.split(',').enumerate() {
            let tok = tok.trim();
            let v: usize = tok
                .parse()
                .map_err(|_| Error::Parse(format!("entry {} is not a positive integer: {tok:?}", i + 1)))?;
            values.push(v);
        }
        Transformation::from_one_based(&values)
    }
}

/// A sorted set of 0-based points.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PointSet(Vec<u8>);

impl PointSet {
    pub fn from_points<I: IntoIterator<Item = usize>>(points: I) -> Self {
        let mut v: Vec<u8> = points.into_iter().map(|p| p as u8).collect();
        v.sort_unstable();
        v.dedup();
        PointSet(v)
    }

    pub fn points(&self) -> &[u8] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().map(|&p| p as usize)
    }

    pub fn contains(&self, p: usize) -> bool {
        self.0.binary_search(&(p as u8)).is_ok()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_subset(&self, other: &PointSet) -> bool {
        self.iter().all(|p| other.contains(p))
    }
}

impl fmt::Display for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", p + 1)?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for PointSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = braces(s)?;
        Ok(PointSet::from_points(parse_points(inner)?))
    }
}

/// A partition of `{0, .., n-1}` in canonical form: blocks ordered by their
/// minimal element, points ascending inside each block.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    blocks: Vec<Vec<u8>>,
}

impl Partition {
    /// Canonicalizes arbitrary disjoint blocks covering `{0, .., n-1}`.
    pub fn from_blocks(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; n];
        let mut out = Vec::with_capacity(blocks.len());
        for block in blocks {
            if block.is_empty() {
                return Err(Error::Parse("empty block in partition".into()));
            }
            let mut b: Vec<u8> = Vec::with_capacity(block.len());
            for p in block {
                if p >= n || seen[p] {
                    return Err(Error::Parse(format!("point {} repeated or out of range", p + 1)));
                }
                seen[p] = true;
                b.push(p as u8);
            }
            b.sort_unstable();
            out.push(b);
        }
        if let Some(p) = seen.iter().position(|s| !s) {
            return Err(Error::Parse(format!("point {} is not covered", p + 1)));
        }
        out.sort_unstable_by_key(|b| b[0]);
        Ok(Partition { blocks: out })
    }

    /// Partition whose block labels are given per point.
    pub fn from_labels(labels: &[u8]) -> Self {
        kernel_of(labels)
    }

    pub fn degree(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    pub fn blocks(&self) -> &[Vec<u8>] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn block_of(&self, p: usize) -> usize {
        self.blocks
            .iter()
            .position(|b| b.contains(&(p as u8)))
            .expect("point outside partition")
    }

    /// Block label for every point.
    pub fn labels(&self) -> Vec<u8> {
        let mut labels = vec![0u8; self.degree()];
        for (i, b) in self.blocks.iter().enumerate() {
            for &p in b {
                labels[p as usize] = i as u8;
            }
        }
        labels
    }

    /// True when every block of `self` lies inside a block of `coarser`.
    pub fn refines(&self, coarser: &Partition) -> bool {
        let labels = coarser.labels();
        self.blocks
            .iter()
            .all(|b| b.iter().all(|&p| labels[p as usize] == labels[b[0] as usize]))
    }

    /// Sizes of all blocks, descending.
    pub fn block_sizes(&self) -> Vec<usize> {
        let mut sizes: Vec<usize> = self.blocks.iter().map(Vec::len).collect();
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        sizes
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                f.write_str("|")?;
            }
            for (j, p) in b.iter().enumerate() {
                if j > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{}", p + 1)?;
            }
        }
        f.write_str("}")
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = braces(s)?;
        let mut blocks = Vec::new();
        for part in inner.split('|') {
            blocks.push(parse_points(part)?);
        }
        let n = blocks.iter().map(Vec::len).sum();
        Partition::from_blocks(n, blocks)
    }
}

fn braces(s: &str) -> Result<&str> {
    s.trim()
        .strip_prefix('{')
        .and_then(|r| r.strip_suffix('}'))
        .ok_or_else(|| Error::Parse(format!("expected braces, got {s:?}")))
}

fn parse_points(s: &str) -> Result<Vec<usize>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|tok| {
            let tok = tok.trim();
            match tok.parse::<usize>() {
                Ok(v) if v >= 1 => Ok(v - 1),
                _ => Err(Error::Parse(format!("bad point {tok:?}"))),
            }
        })
        .collect()
}

macro_rules! string_serde {
    ($($ty:ty),*) => {$(
        impl Serialize for $ty {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                s.collect_str(self)
            }
        }

        impl<'de> Deserialize<'de> for $ty {
            fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
                let s = String::deserialize(d)?;
                s.parse().map_err(serde::de::Error::custom)
            }
        }
    )*};
}

string_serde!(Transformation, PointSet, Partition);

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> Transformation {
        s.parse().unwrap()
    }

    #[test]
    fn compose_runs_left_to_right() {
        assert_eq!(compose(&t("[2,3,1]"), &t("[1,1,2]")).unwrap(), t("[1,2,1]"));
        let beta = t("[3,1,1]");
        assert_eq!(compose(&beta, &Transformation::identity(3)).unwrap(), beta);
        assert_eq!(compose(&t("[1,1,1]"), &t("[3,2,1]")).unwrap(), t("[3,3,3]"));
    }

    #[test]
    fn compose_rejects_degree_mismatch() {
        assert_eq!(
            compose(&t("[1,2]"), &t("[1,2,3]")),
            Err(Error::DegreeMismatch { left: 2, right: 3 })
        );
    }

    #[test]
    fn kernel_image_rank() {
        let b = t("[1,1,3]");
        assert_eq!(b.kernel().to_string(), "{1,2|3}");
        assert_eq!(b.image().to_string(), "{1,3}");
        assert_eq!(b.rank(), 2);

        let id = Transformation::identity(4);
        assert_eq!(id.kernel().num_blocks(), 4);
        assert_eq!(id.rank(), 4);

        let theta = Transformation::constant(3, 1);
        assert_eq!(theta.kernel().to_string(), "{1,2,3}");
        assert_eq!(theta.rank(), 1);
    }

    #[test]
    fn index_is_a_bijection() {
        for n in 1..=4 {
            let order = semigroup_order(n);
            for i in 0..order {
                let b = Transformation::from_index(n, i);
                assert_eq!(b.index(), i);
            }
        }
        assert_eq!(t("[1,1,1]").index(), 0);
        // (2-1)*1 + (3-1)*3 + (1-1)*9
        assert_eq!(t("[2,3,1]").index(), 7);
    }

    #[test]
    fn parse_errors_name_the_entry() {
        let err = "[1,4,2]".parse::<Transformation>().unwrap_err();
        assert_eq!(err, Error::EntryOutOfRange { position: 2, value: 4, n: 3 });
        assert!(matches!("1,2".parse::<Transformation>(), Err(Error::Parse(_))));
        assert!(matches!("[1,x]".parse::<Transformation>(), Err(Error::Parse(_))));
        assert!(matches!("[0,1]".parse::<Transformation>(), Err(Error::EntryOutOfRange { .. })));
    }

    #[test]
    fn partition_text_is_canonical() {
        let p: Partition = "{3|2,1}".parse().unwrap();
        assert_eq!(p.to_string(), "{1,2|3}");
        assert!("{1,2|2}".parse::<Partition>().is_err());
        assert!("{1|3}".parse::<Partition>().is_err());
        let fine: Partition = "{1|2|3}".parse().unwrap();
        assert!(fine.refines(&p));
        assert!(!p.refines(&fine));
    }

    #[test]
    fn restrict_relabels_along_domain() {
        let b = t("[3,1,1]");
        let dom: PointSet = "{1,3}".parse().unwrap();
        // 1 -> 3, 3 -> 1 on {1,3}
        assert_eq!(b.restrict(&dom).unwrap(), t("[2,1]"));
        let dom2: PointSet = "{2,3}".parse().unwrap();
        assert!(b.restrict(&dom2).is_none());
    }

    #[test]
    fn serde_uses_text_form() {
        let b = t("[2,3,1]");
        let js = serde_json::to_string(&b).unwrap();
        assert_eq!(js, "\"[2,3,1]\"");
        let back: Transformation = serde_json::from_str(&js).unwrap();
        assert_eq!(back, b);
    }
}
