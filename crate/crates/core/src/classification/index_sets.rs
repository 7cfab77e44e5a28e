//! The parameter sets indexing root classes of stable rank `l` and `l-1`.
//!
//! * `partitions_l`: partitions of `N` into `l` blocks separating all `a_i`.
//! * `transversals`: sets `{b_1, .., b_l}` with `b_i in A_i`.
//! * `partitions_lm1(k, m)`: partitions into `l-1` blocks, each meeting `A`,
//!   with `a_k` and `a_m` together.
//! * `transversals_lm1(k)`: sets `{b_i : i != k}` with `b_i in A_i`.
//!
//! `idempotent_for` builds the unique idempotent with a given kernel and image.

use crate::context::SandwichContext;
use crate::error::{Error, Result};
use crate::transform::{Partition, PointSet, Transformation};

/// Partitions obtained by attaching every non-representative point to one of
/// the groups in `group_of_rep` (one label per representative).
fn attach_free_points(ctx: &SandwichContext, group_of_rep: &[u8], groups: usize) -> Vec<Partition> {
    let n = ctx.n();
    let free: Vec<usize> = (0..n).filter(|&x| !ctx.rep_set().contains(x)).collect();
    let mut labels = vec![0u8; n];
    for (i, &g) in group_of_rep.iter().enumerate() {
        labels[ctx.rep(i)] = g;
    }
    let mut out = Vec::new();
    let mut digits = vec![0usize; free.len()];
    loop {
        for (&x, &d) in free.iter().zip(&digits) {
            labels[x] = d as u8;
        }
        out.push(Partition::from_labels(&labels));
        // mixed-radix increment
        let mut pos = 0;
        loop {
            if pos == digits.len() {
                out.sort();
                return out;
            }
            digits[pos] += 1;
            if digits[pos] < groups {
                break;
            }
            digits[pos] = 0;
            pos += 1;
        }
    }
}

fn product_of_blocks(ctx: &SandwichContext, skip: Option<usize>) -> Vec<PointSet> {
    let mut acc: Vec<Vec<usize>> = vec![Vec::new()];
    for i in 0..ctx.l() {
        if Some(i) == skip {
            continue;
        }
        acc = acc
            .into_iter()
            .flat_map(|prefix| {
                ctx.block(i).iter().map(move |&b| {
                    let mut v = prefix.clone();
                    v.push(b as usize);
                    v
                })
            })
            .collect();
    }
    let mut out: Vec<PointSet> = acc.into_iter().map(PointSet::from_points).collect();
    out.sort();
    out
}

/// Partitions into `l` blocks with all representatives separated.
pub fn partitions_l(ctx: &SandwichContext) -> Vec<Partition> {
    let groups: Vec<u8> = (0..ctx.l() as u8).collect();
    let out = attach_free_points(ctx, &groups, ctx.l());
    assert_eq!(out.len() as u64, (ctx.l() as u64).pow((ctx.n() - ctx.l()) as u32));
    out
}

/// Transversals `{b_1, .., b_l}` of the blocks of `alpha`.
pub fn transversals(ctx: &SandwichContext) -> Vec<PointSet> {
    let out = product_of_blocks(ctx, None);
    assert_eq!(out.len(), ctx.block_sizes().iter().product::<usize>());
    out
}

/// Both stable-rank-`l` index sets.
pub fn enum_index_sets(ctx: &SandwichContext) -> (Vec<Partition>, Vec<PointSet>) {
    (partitions_l(ctx), transversals(ctx))
}

/// Partitions into `l-1` blocks, each meeting `A`, with `a_k`, `a_m` together.
pub fn partitions_lm1(ctx: &SandwichContext, k: usize, m: usize) -> Result<Vec<Partition>> {
    check_pair(ctx, k, m)?;
    let l = ctx.l();
    // representative a_k joins a_m's group; the others keep their own
    let mut group_of_rep = Vec::with_capacity(l);
    let mut next = 0u8;
    let mut slot = vec![0u8; l];
    for (i, s) in slot.iter_mut().enumerate() {
        if i != k {
            *s = next;
            next += 1;
        }
    }
    slot[k] = slot[m];
    group_of_rep.extend_from_slice(&slot);
    let out = attach_free_points(ctx, &group_of_rep, l - 1);
    assert_eq!(out.len() as u64, ((l - 1) as u64).pow((ctx.n() - l) as u32));
    Ok(out)
}

/// Transversals of all blocks but `A_k`.
pub fn transversals_lm1(ctx: &SandwichContext, k: usize) -> Result<Vec<PointSet>> {
    if ctx.l() < 2 {
        return Err(Error::RankTooSmall(ctx.l()));
    }
    if k >= ctx.l() {
        return Err(Error::InvalidDescriptor(format!("index {} out of range", k + 1)));
    }
    let out = product_of_blocks(ctx, Some(k));
    let expected: usize = ctx
        .block_sizes()
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != k)
        .map(|(_, s)| s)
        .product();
    assert_eq!(out.len(), expected);
    Ok(out)
}

/// Both stable-rank-`(l-1)` index sets for the ordered pair `(k, m)`.
pub fn enum_index_sets_lm1(ctx: &SandwichContext, k: usize, m: usize) -> Result<(Vec<Partition>, Vec<PointSet>)> {
    Ok((partitions_lm1(ctx, k, m)?, transversals_lm1(ctx, k)?))
}

pub(crate) fn check_pair(ctx: &SandwichContext, k: usize, m: usize) -> Result<()> {
    if ctx.l() < 2 {
        return Err(Error::RankTooSmall(ctx.l()));
    }
    if k >= ctx.l() || m >= ctx.l() || k == m {
        return Err(Error::InvalidDescriptor(format!(
            "need distinct indices in 1..={}, got ({}, {})",
            ctx.l(),
            k + 1,
            m + 1
        )));
    }
    Ok(())
}

/// The idempotent with kernel `kernel` and image `image`: each block goes to
/// the unique point of `image` lying in a block `A_j` whose representative
/// the block contains.
pub fn idempotent_for(ctx: &SandwichContext, kernel: &Partition, image: &PointSet) -> Result<Transformation> {
    let mut images = vec![0u8; ctx.n()];
    let mut used = 0usize;
    for block in kernel.blocks() {
        let targets: Vec<usize> = image
            .iter()
            .filter(|&b| block.contains(&(ctx.rep(ctx.block_index(b)) as u8)))
            .collect();
        let [target] = targets[..] else {
            return Err(Error::InvalidDescriptor(format!(
                "no unique idempotent with kernel {kernel} and image {image}"
            )));
        };
        used += 1;
        for &x in block {
            images[x as usize] = target as u8;
        }
    }
    if used != image.len() {
        return Err(Error::InvalidDescriptor(format!(
            "image {image} does not match kernel {kernel}"
        )));
    }
    Ok(Transformation::from_raw(images))
}
