//! The sandwich element and arithmetic in the variant `(T_n, *)`.

use std::collections::HashMap;
use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::transform::{
    compose_unchecked, decode_into, encode, semigroup_order, Partition, PointSet, Transformation,
};

/// Default bound on `n^n` for operations that scan the whole semigroup.
pub const DEFAULT_MAX_SCAN: u64 = 3125;

/// Environment variable overriding [`DEFAULT_MAX_SCAN`] for the CLI.
pub const MAX_SCAN_ENV: &str = "SANDWICH_TN_MAX_SCAN";

/// Bound on the number of elements a full scan may visit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScanGuard {
    pub max_scan: u64,
}

impl Default for ScanGuard {
    fn default() -> Self {
        ScanGuard {
            max_scan: DEFAULT_MAX_SCAN,
        }
    }
}

impl ScanGuard {
    pub fn new(max_scan: u64) -> Self {
        ScanGuard { max_scan }
    }

    pub fn unbounded() -> Self {
        ScanGuard { max_scan: u64::MAX }
    }

    pub fn check(&self, n: usize) -> Result<()> {
        let size = semigroup_order(n);
        if size > self.max_scan {
            Err(Error::ScanBoundExceeded {
                size,
                bound: self.max_scan,
            })
        } else {
            Ok(())
        }
    }
}

/// An idempotent sandwich element `alpha` of rank `l`, with its kernel
/// blocks `A_1, .., A_l` in canonical order and representatives
/// `a_i = alpha(A_i)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SandwichContext {
    n: usize,
    alpha: Transformation,
    l: usize,
    blocks: Partition,
    reps: Vec<u8>,
    #[serde(skip)]
    rep_set: PointSet,
    #[serde(skip)]
    block_of: Vec<u8>,
}

impl SandwichContext {
    /// Fails unless `alpha` is idempotent under plain composition.
    pub fn new(alpha: Transformation) -> Result<Self> {
        if compose_unchecked(&alpha, &alpha) != alpha {
            return Err(Error::NotIdempotent(alpha.to_string()));
        }
        let blocks = alpha.kernel();
        let reps: Vec<u8> = blocks
            .blocks()
            .iter()
            .map(|b| alpha.apply(b[0] as usize) as u8)
            .collect();
        let block_of = blocks.labels();
        Ok(SandwichContext {
            n: alpha.degree(),
            l: blocks.num_blocks(),
            rep_set: PointSet::from_points(reps.iter().map(|&r| r as usize)),
            alpha,
            blocks,
            reps,
            block_of,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alpha(&self) -> &Transformation {
        &self.alpha
    }

    /// Rank of the sandwich element.
    pub fn l(&self) -> usize {
        self.l
    }

    pub fn blocks(&self) -> &Partition {
        &self.blocks
    }

    /// Block `A_i` (0-based `i`).
    pub fn block(&self, i: usize) -> &[u8] {
        &self.blocks.blocks()[i]
    }

    /// Representative `a_i` (0-based `i`, 0-based point).
    pub fn rep(&self, i: usize) -> usize {
        self.reps[i] as usize
    }

    pub fn reps(&self) -> &[u8] {
        &self.reps
    }

    /// The image of `alpha`, `A = {a_1, .., a_l}`.
    pub fn rep_set(&self) -> &PointSet {
        &self.rep_set
    }

    /// Index `i` of the block `A_i` containing the point `x`.
    pub fn block_index(&self, x: usize) -> usize {
        self.block_of[x] as usize
    }

    /// Index `i` with `a_i = x`, if `x` is a representative.
    pub fn rep_index(&self, x: usize) -> Option<usize> {
        self.reps.iter().position(|&r| r as usize == x)
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        self.blocks.blocks().iter().map(Vec::len).collect()
    }

    fn check(&self, beta: &Transformation) -> Result<()> {
        if beta.degree() != self.n {
            Err(Error::DegreeMismatch {
                left: self.n,
                right: beta.degree(),
            })
        } else {
            Ok(())
        }
    }

    /// `beta * gamma = beta alpha gamma`, i.e. `x -> gamma(alpha(beta(x)))`.
    pub fn sandwich_product(&self, beta: &Transformation, gamma: &Transformation) -> Result<Transformation> {
        self.check(beta)?;
        self.check(gamma)?;
        Ok(self.product(beta, gamma))
    }

    pub(crate) fn product(&self, beta: &Transformation, gamma: &Transformation) -> Transformation {
        let a = self.alpha.images();
        let g = gamma.images();
        Transformation::from_raw(beta.images().iter().map(|&b| g[a[b as usize] as usize]).collect())
    }

    pub fn is_idempotent(&self, beta: &Transformation) -> Result<bool> {
        self.check(beta)?;
        Ok(self.product(beta, beta) == *beta)
    }

    /// The unique idempotent among the `*`-powers of `beta`, with the least
    /// exponent producing it.
    pub fn idempotent_power(&self, beta: &Transformation) -> Result<(Transformation, usize)> {
        self.check(beta)?;
        Ok(self.idempotent_power_unchecked(beta))
    }

    pub(crate) fn idempotent_power_unchecked(&self, beta: &Transformation) -> (Transformation, usize) {
        let mut seen: HashMap<Transformation, usize> = HashMap::new();
        let mut powers = Vec::new();
        let mut current = beta.clone();
        let mut k = 1;
        let (start, period) = loop {
            if let Some(&first) = seen.get(&current) {
                break (first, k - first);
            }
            seen.insert(current.clone(), k);
            let next = self.product(&current, beta);
            powers.push(current);
            current = next;
            k += 1;
        };
        let exponent = start.div_ceil(period) * period;
        (powers[exponent - 1].clone(), exponent)
    }

    /// Rank, kernel and image of the idempotent power of `beta`.
    pub fn stable_data(&self, beta: &Transformation) -> Result<StableData> {
        let (eps, _) = self.idempotent_power(beta)?;
        Ok(StableData {
            strk: eps.rank(),
            kernel: eps.kernel(),
            image: eps.image(),
        })
    }

    pub fn stable_rank(&self, beta: &Transformation) -> Result<usize> {
        Ok(self.idempotent_power(beta)?.0.rank())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StableData {
    pub strk: usize,
    pub kernel: Partition,
    pub image: PointSet,
}

/// The whole variant held as dense element indices, for exhaustive work.
///
/// Element `i` is `Transformation::from_index(n, i)`.
pub struct VariantTable {
    ctx: SandwichContext,
    order: usize,
    images: Vec<u8>,
    roots: OnceLock<Vec<u32>>,
}

impl VariantTable {
    pub fn new(ctx: &SandwichContext, guard: ScanGuard) -> Result<Self> {
        guard.check(ctx.n())?;
        let n = ctx.n();
        let order = semigroup_order(n) as usize;
        let mut images = vec![0u8; order * n];
        for (i, chunk) in images.chunks_mut(n).enumerate() {
            decode_into(n, i as u64, chunk);
        }
        Ok(VariantTable {
            ctx: ctx.clone(),
            order,
            images,
            roots: OnceLock::new(),
        })
    }

    pub fn context(&self) -> &SandwichContext {
        &self.ctx
    }

    pub fn n(&self) -> usize {
        self.ctx.n()
    }

    /// `n^n`.
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn images(&self, i: u32) -> &[u8] {
        let n = self.ctx.n();
        &self.images[i as usize * n..(i as usize + 1) * n]
    }

    pub fn element(&self, i: u32) -> Transformation {
        Transformation::from_raw(self.images(i).to_vec())
    }

    pub fn index_of(&self, beta: &Transformation) -> u32 {
        beta.index() as u32
    }

    /// Sandwich product of elements `i` and `j`.
    #[inline]
    pub fn mul(&self, i: u32, j: u32) -> u32 {
        let n = self.ctx.n();
        let a = self.ctx.alpha.images();
        let b = self.images(i);
        let g = self.images(j);
        let mut out = [0u8; crate::transform::MAX_DEGREE];
        for x in 0..n {
            out[x] = g[a[b[x] as usize] as usize];
        }
        encode(&out[..n]) as u32
    }

    #[inline]
    pub fn is_idempotent(&self, i: u32) -> bool {
        self.mul(i, i) == i
    }

    /// Idempotent power of element `i` and the least exponent reaching it.
    pub fn idempotent_power(&self, i: u32) -> (u32, usize) {
        let mut powers: Vec<u32> = vec![i];
        loop {
            let next = self.mul(*powers.last().unwrap(), i);
            if let Some(start) = powers.iter().position(|&p| p == next) {
                let start = start + 1;
                let period = powers.len() + 1 - start;
                let exponent = start.div_ceil(period) * period;
                return (powers[exponent - 1], exponent);
            }
            powers.push(next);
        }
    }

    /// All `*`-powers of element `i` up to the first repetition.
    pub fn powers(&self, i: u32) -> Vec<u32> {
        let mut powers: Vec<u32> = vec![i];
        loop {
            let next = self.mul(*powers.last().unwrap(), i);
            if powers.contains(&next) {
                return powers;
            }
            powers.push(next);
        }
    }

    /// Idempotent power of every element, indexed by element.
    pub fn roots(&self) -> &[u32] {
        self.roots.get_or_init(|| {
            let f = |i: usize| self.idempotent_power(i as u32).0;
            #[cfg(feature = "parallel")]
            {
                use rayon::prelude::*;
                (0..self.order).into_par_iter().map(f).collect()
            }
            #[cfg(not(feature = "parallel"))]
            {
                (0..self.order).map(f).collect()
            }
        })
    }

    /// Element indices of all idempotents, ascending.
    pub fn idempotents(&self) -> Vec<u32> {
        (0..self.order as u32).filter(|&i| self.is_idempotent(i)).collect()
    }

    pub fn rank_of(&self, i: u32) -> usize {
        let mut seen = 0u32;
        for &v in self.images(i) {
            seen |= 1 << v;
        }
        seen.count_ones() as usize
    }

    pub fn stable_rank(&self, i: u32) -> usize {
        self.rank_of(self.roots()[i as usize])
    }

    /// Least `*`-closed superset of `set`.
    pub fn closure(&self, set: &crate::elements::ElementSet) -> crate::elements::ElementSet {
        let mut out = set.clone();
        let mut members: Vec<u32> = set.indices().collect();
        let mut i = 0;
        while i < members.len() {
            let x = members[i];
            for j in 0..=i {
                let y = members[j];
                for p in [self.mul(x, y), self.mul(y, x)] {
                    if out.insert_index(p) {
                        members.push(p);
                    }
                }
            }
            i += 1;
        }
        out
    }

    /// Elements of stable rank `k`.
    pub fn stable_rank_layer(&self, k: usize) -> crate::elements::ElementSet {
        let roots = self.roots();
        crate::elements::ElementSet::from_indices(
            self.n(),
            (0..self.order as u32).filter(|&i| self.rank_of(roots[i as usize]) == k),
        )
    }
}
