//! Idempotents of the variant, their root classes and maximal subgroups, and
//! the homomorphisms `phi_l`, `phi_r`, `phi_bar`.
//!
//! An element `eps` with kernel blocks `E_1, .., E_k` and values `e_1, .., e_k`
//! is idempotent under `*` iff there is an injection `f` into `{1, .., l}`
//! with `e_i in A_f(i)` and `a_f(i) in E_i`. Because the `A_i` partition the
//! points, `f(i)` is forced by `e_i` and the check is linear.

use num_bigint::BigUint;
use serde::Serialize;

use crate::context::{SandwichContext, ScanGuard, VariantTable};
use crate::elements::ElementSet;
use crate::error::{Error, Result};
use crate::transform::{compose_unchecked, Partition, PointSet, Transformation};
use crate::BigCount;

/// Structural data of an idempotent of the variant. Indices and points are
/// 0-based in Rust and 1-based in JSON.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdempotentInfo {
    pub eps: Transformation,
    pub rank: usize,
    pub kernel: Partition,
    /// `e_i`, the value of `eps` on the `i`-th kernel block.
    #[serde(serialize_with = "crate::one_based_vec")]
    pub values: Vec<usize>,
    /// The injection `f` with `e_i in A_f(i)`.
    #[serde(serialize_with = "crate::one_based_vec")]
    pub injection: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lm1: Option<Lm1Data>,
}

/// Distinguished pair, trifle and burdened element of a rank `l-1` idempotent.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Lm1Data {
    pub distinguished: PointSet,
    #[serde(serialize_with = "crate::one_based")]
    pub trifle: usize,
    #[serde(serialize_with = "crate::one_based")]
    pub burdened: usize,
    /// `k` with `trifle = a_k`.
    #[serde(serialize_with = "crate::one_based")]
    pub trifle_index: usize,
    /// `m` with `burdened = a_m`.
    #[serde(serialize_with = "crate::one_based")]
    pub burdened_index: usize,
}

/// `eps * eps == eps`.
pub fn is_variant_idempotent(ctx: &SandwichContext, eps: &Transformation) -> Result<bool> {
    ctx.is_idempotent(eps)
}

/// Searches for the injection `f` and returns the populated record, or `None`
/// when `eps` is not idempotent.
pub fn structural_idempotent_check(ctx: &SandwichContext, eps: &Transformation) -> Result<Option<IdempotentInfo>> {
    if eps.degree() != ctx.n() {
        return Err(Error::DegreeMismatch {
            left: ctx.n(),
            right: eps.degree(),
        });
    }
    let kernel = eps.kernel();
    let values: Vec<usize> = kernel.blocks().iter().map(|b| eps.apply(b[0] as usize)).collect();
    let injection: Vec<usize> = values.iter().map(|&e| ctx.block_index(e)).collect();
    let mut used = vec![false; ctx.l()];
    for (i, &fi) in injection.iter().enumerate() {
        if used[fi] || !kernel.blocks()[i].contains(&(ctx.rep(fi) as u8)) {
            return Ok(None);
        }
        used[fi] = true;
    }
    let rank = kernel.num_blocks();
    let lm1 = (ctx.l() >= 2 && rank == ctx.l() - 1).then(|| lm1_from_parts(ctx, &kernel, &injection));
    Ok(Some(IdempotentInfo {
        eps: eps.clone(),
        rank,
        kernel,
        values,
        injection,
        lm1,
    }))
}

fn lm1_from_parts(ctx: &SandwichContext, kernel: &Partition, injection: &[usize]) -> Lm1Data {
    let mut hit = vec![false; ctx.l()];
    for &fi in injection {
        hit[fi] = true;
    }
    let mut missing = (0..ctx.l()).filter(|&j| !hit[j]);
    let k = missing.next().expect("rank l-1 leaves one index uncovered");
    debug_assert!(missing.next().is_none());
    let block = kernel.block_of(ctx.rep(k));
    let m = injection[block];
    // the block holding {a_m, a_k} is the only one meeting A twice
    let doubles: Vec<usize> = kernel
        .blocks()
        .iter()
        .enumerate()
        .filter(|(_, b)| b.iter().filter(|&&x| ctx.rep_set().contains(x as usize)).count() >= 2)
        .map(|(i, _)| i)
        .collect();
    assert_eq!(doubles, vec![block], "distinguished pair is not unique");
    Lm1Data {
        distinguished: PointSet::from_points([ctx.rep(m), ctx.rep(k)]),
        trifle: ctx.rep(k),
        burdened: ctx.rep(m),
        trifle_index: k,
        burdened_index: m,
    }
}

/// Distinguished pair, trifle and burdened element of an idempotent of rank `l-1`.
pub fn rank_lm1_data(ctx: &SandwichContext, eps: &Transformation) -> Result<Lm1Data> {
    if ctx.l() < 2 {
        return Err(Error::RankTooSmall(ctx.l()));
    }
    let info = structural_idempotent_check(ctx, eps)?.ok_or_else(|| Error::NotIdempotent(eps.to_string()))?;
    info.lm1.ok_or(Error::WrongRank {
        eps: eps.to_string(),
        rank: info.rank,
        expected: ctx.l() - 1,
    })
}

/// Stable version for any element of stable rank `l-1`, read off its
/// idempotent power.
pub fn stable_lm1_data(ctx: &SandwichContext, beta: &Transformation) -> Result<Lm1Data> {
    let (eps, _) = ctx.idempotent_power(beta)?;
    rank_lm1_data(ctx, &eps)
}

/// All idempotents, by scanning `T_n` in ascending index order.
pub fn enumerate_idempotents(ctx: &SandwichContext, guard: ScanGuard) -> Result<Vec<IdempotentInfo>> {
    let table = VariantTable::new(ctx, guard)?;
    Ok(idempotents_of(&table))
}

pub fn idempotents_of(table: &VariantTable) -> Vec<IdempotentInfo> {
    table
        .idempotents()
        .into_iter()
        .map(|i| {
            let eps = table.element(i);
            structural_idempotent_check(table.context(), &eps)
                .expect("degree matches")
                .expect("scanned idempotent fails the structural criterion")
        })
        .collect()
}

/// `sum over nonempty X in {1..l} of (prod_{i in X} |A_i|) * |X|^(n-|X|)`.
pub fn count_idempotents_formula(ctx: &SandwichContext) -> BigUint {
    let sizes = ctx.block_sizes();
    let l = ctx.l();
    let n = ctx.n() as u32;
    let mut total = BigUint::from(0u32);
    for mask in 1u64..(1u64 << l) {
        let x = mask.count_ones();
        let mut term = BigUint::from(1u32);
        for (i, &s) in sizes.iter().enumerate() {
            if mask >> i & 1 == 1 {
                term *= s as u64;
            }
        }
        term *= BigUint::from(x).pow(n - x);
        total += term;
    }
    total
}

/// `sqrt(eps)`: every element whose idempotent power is `eps`.
pub fn sqrt_class(ctx: &SandwichContext, eps: &Transformation, guard: ScanGuard) -> Result<ElementSet> {
    if !ctx.is_idempotent(eps)? {
        return Err(Error::NotIdempotent(eps.to_string()));
    }
    let table = VariantTable::new(ctx, guard)?;
    Ok(sqrt_class_in(&table, table.index_of(eps)))
}

pub fn sqrt_class_in(table: &VariantTable, eps: u32) -> ElementSet {
    let roots = table.roots();
    ElementSet::from_indices(
        table.n(),
        (0..table.order() as u32).filter(|&i| roots[i as usize] == eps),
    )
}

/// Membership in the maximal subgroup `G(eps)`: same kernel and same image.
pub fn group_membership(ctx: &SandwichContext, eps: &Transformation, beta: &Transformation) -> Result<bool> {
    if !ctx.is_idempotent(eps)? {
        return Err(Error::NotIdempotent(eps.to_string()));
    }
    if beta.degree() != ctx.n() {
        return Err(Error::DegreeMismatch {
            left: ctx.n(),
            right: beta.degree(),
        });
    }
    Ok(beta.kernel() == eps.kernel() && beta.image() == eps.image())
}

pub fn group_of(ctx: &SandwichContext, eps: &Transformation, guard: ScanGuard) -> Result<ElementSet> {
    if !ctx.is_idempotent(eps)? {
        return Err(Error::NotIdempotent(eps.to_string()));
    }
    guard.check(ctx.n())?;
    let kernel = eps.kernel();
    let image = eps.image();
    let mut out = ElementSet::empty(ctx.n());
    for i in 0..crate::transform::semigroup_order(ctx.n()) {
        let beta = Transformation::from_index(ctx.n(), i);
        if beta.rank() == image.len() && beta.image() == image && beta.kernel() == kernel {
            out.insert_index(i as u32);
        }
    }
    Ok(out)
}

/// `phi_l(beta) = alpha beta`.
pub fn phi_l(ctx: &SandwichContext, beta: &Transformation) -> Transformation {
    compose_unchecked(ctx.alpha(), beta)
}

/// `phi_r(beta) = beta alpha`.
pub fn phi_r(ctx: &SandwichContext, beta: &Transformation) -> Transformation {
    compose_unchecked(beta, ctx.alpha())
}

/// `phi_r(beta)` restricted to `A = im(alpha)`, as a transformation of degree
/// `l` on the representatives: `i -> j` when `beta alpha` sends `a_i` to `a_j`.
pub fn phi_bar(ctx: &SandwichContext, beta: &Transformation) -> Transformation {
    let br = phi_r(ctx, beta);
    let images = (0..ctx.l())
        .map(|i| ctx.rep_index(br.apply(ctx.rep(i))).expect("beta alpha maps A into A") as u8)
        .collect();
    Transformation::from_raw(images)
}

/// Report for the `idempotents` subcommand.
#[derive(Debug, Clone, Serialize)]
pub struct IdempotentReport {
    pub idempotents: Vec<IdempotentInfo>,
    pub scanned: usize,
    pub formula: BigCount,
    pub agrees: bool,
}

pub fn idempotent_report(ctx: &SandwichContext, guard: ScanGuard) -> Result<IdempotentReport> {
    let idempotents = enumerate_idempotents(ctx, guard)?;
    let formula = count_idempotents_formula(ctx);
    Ok(IdempotentReport {
        scanned: idempotents.len(),
        agrees: formula == BigUint::from(idempotents.len()),
        formula: BigCount(formula),
        idempotents,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> Transformation {
        s.parse().unwrap()
    }

    fn ctx(s: &str) -> SandwichContext {
        SandwichContext::new(t(s)).unwrap()
    }

    fn factorial(k: usize) -> usize {
        (1..=k).product()
    }

    #[test]
    fn idempotence_examples() {
        let c = ctx("[1,1,3]");
        let info = structural_idempotent_check(&c, &t("[2,2,3]")).unwrap().unwrap();
        assert!(is_variant_idempotent(&c, &t("[2,2,3]")).unwrap());
        assert_eq!(info.injection, vec![0, 1]);
        assert_eq!(info.kernel.to_string(), "{1,2|3}");

        let id = Transformation::identity(3);
        assert!(!is_variant_idempotent(&c, &id).unwrap());
        assert!(structural_idempotent_check(&c, &id).unwrap().is_none());
        assert!(structural_idempotent_check(&c, c.alpha()).unwrap().is_some());
    }

    #[test]
    fn checks_agree_on_every_map_for_every_idempotent_alpha_up_to_4() {
        for n in 1..=4 {
            for a in 0..crate::transform::semigroup_order(n) {
                let Ok(c) = SandwichContext::new(Transformation::from_index(n, a)) else {
                    continue;
                };
                let table = VariantTable::new(&c, ScanGuard::default()).unwrap();
                let mut count = 0u64;
                for i in 0..table.order() as u32 {
                    let beta = table.element(i);
                    let def = table.is_idempotent(i);
                    let structural = structural_idempotent_check(&c, &beta).unwrap().is_some();
                    assert_eq!(def, structural, "alpha={} beta={beta}", c.alpha());
                    count += def as u64;
                }
                assert_eq!(BigUint::from(count), count_idempotents_formula(&c), "alpha={}", c.alpha());
            }
        }
    }

    #[test]
    fn counting_examples() {
        let c = ctx("[1,1,3]");
        let all = enumerate_idempotents(&c, ScanGuard::default()).unwrap();
        let listed: Vec<String> = all.iter().map(|i| i.eps.to_string()).collect();
        for e in ["[1,1,3]", "[2,2,3]", "[1,3,3]", "[2,3,3]", "[1,1,1]", "[2,2,2]", "[3,3,3]"] {
            assert!(listed.contains(&e.to_string()), "{e} missing");
        }
        assert_eq!(all.len(), 7);
        assert_eq!(count_idempotents_formula(&c), BigUint::from(7u32));

        let theta = ctx("[1,1,1]");
        let all = enumerate_idempotents(&theta, ScanGuard::default()).unwrap();
        let listed: Vec<String> = all.iter().map(|i| i.eps.to_string()).collect();
        assert_eq!(listed, vec!["[1,1,1]", "[2,2,2]", "[3,3,3]"]);

        let id = SandwichContext::new(Transformation::identity(3)).unwrap();
        assert_eq!(count_idempotents_formula(&id), BigUint::from(10u32));
        assert_eq!(enumerate_idempotents(&id, ScanGuard::default()).unwrap().len(), 10);
    }

    #[test]
    fn enumeration_respects_the_guard() {
        let c = SandwichContext::new(Transformation::identity(6)).unwrap();
        assert!(matches!(
            enumerate_idempotents(&c, ScanGuard::default()),
            Err(Error::ScanBoundExceeded { .. })
        ));
        // formula needs no guard
        let expected: u64 = (1..=6u64)
            .map(|k| {
                let binom = (0..k).fold(1u64, |acc, i| acc * (6 - i) / (i + 1));
                binom * k.pow(6 - k as u32)
            })
            .sum();
        assert_eq!(count_idempotents_formula(&c), BigUint::from(expected));
    }

    #[test]
    fn root_classes_partition_the_semigroup() {
        let c = ctx("[1,1,3]");
        let g = ScanGuard::default();
        let th2 = t("[2,2,2]");
        let root = sqrt_class(&c, &th2, g).unwrap();
        assert!(root.contains(&th2));
        assert!(root.contains(&t("[2,3,1]")));

        let mut union = ElementSet::empty(3);
        for info in enumerate_idempotents(&c, g).unwrap() {
            let cls = sqrt_class(&c, &info.eps, g).unwrap();
            assert!(cls.contains(&info.eps));
            assert!(union.is_disjoint(&cls));
            union.union_with(&cls);
        }
        assert_eq!(union.len(), 27);
        assert_eq!(sqrt_class(&c, &t("[2,3,1]"), g), Err(Error::NotIdempotent("[2,3,1]".into())));
    }

    #[test]
    fn maximal_subgroup_examples() {
        let c = ctx("[1,1,3]");
        let g = ScanGuard::default();
        let grp = group_of(&c, c.alpha(), g).unwrap();
        let members: Vec<String> = grp.elements().map(|e| e.to_string()).collect();
        assert_eq!(members.len(), 2);
        assert!(members.contains(&"[1,1,3]".to_string()) && members.contains(&"[3,3,1]".to_string()));
        assert!(group_membership(&c, c.alpha(), &t("[3,3,1]")).unwrap());
        assert!(!group_membership(&c, c.alpha(), &t("[2,2,1]")).unwrap());

        let id = SandwichContext::new(Transformation::identity(4)).unwrap();
        assert_eq!(group_of(&id, id.alpha(), g).unwrap().len(), 24);
        assert_eq!(group_of(&c, &t("[1,1,1]"), g).unwrap().len(), 1);
        assert!(group_of(&c, &t("[2,3,1]"), g).is_err());
    }

    #[test]
    fn group_orders_are_factorials_up_to_4() {
        for alpha in ["[1,1,3,4]", "[1,2,3,4]", "[1,1,1,4]", "[1,1,3,3]", "[1,1,1,1]", "[1,2,3]"] {
            let c = ctx(alpha);
            let table = VariantTable::new(&c, ScanGuard::default()).unwrap();
            for info in idempotents_of(&table) {
                let grp = group_of(&c, &info.eps, ScanGuard::default()).unwrap();
                assert_eq!(grp.len(), factorial(info.rank), "alpha={alpha} eps={}", info.eps);
                // the group sits inside the root class
                assert!(grp.is_subset(&sqrt_class_in(&table, table.index_of(&info.eps))));
            }
        }
    }

    #[test]
    fn lm1_examples() {
        let id = SandwichContext::new(Transformation::identity(3)).unwrap();
        let d = rank_lm1_data(&id, &t("[1,1,3]")).unwrap();
        assert_eq!((d.distinguished.to_string(), d.burdened, d.trifle), ("{1,2}".into(), 0, 1));

        let c = ctx("[1,1,3]");
        let d = rank_lm1_data(&c, &t("[2,2,2]")).unwrap();
        assert_eq!((d.burdened, d.trifle, d.distinguished.to_string()), (0, 2, "{1,3}".into()));
        assert_eq!((d.burdened_index, d.trifle_index), (0, 1));

        let d = rank_lm1_data(&id, &t("[3,2,3]")).unwrap();
        assert_eq!((d.distinguished.to_string(), d.burdened, d.trifle), ("{1,3}".into(), 2, 0));

        assert!(matches!(rank_lm1_data(&id, id.alpha()), Err(Error::WrongRank { .. })));
        assert!(matches!(rank_lm1_data(&id, &t("[2,3,1]")), Err(Error::NotIdempotent(_))));
        let theta = ctx("[1,1,1]");
        assert_eq!(rank_lm1_data(&theta, theta.alpha()), Err(Error::RankTooSmall(1)));
    }

    #[test]
    fn trifle_sits_in_the_burdened_block() {
        let c = ctx("[1,1,3,4,4]");
        let table = VariantTable::new(&c, ScanGuard::default()).unwrap();
        for info in idempotents_of(&table) {
            let Some(d) = &info.lm1 else { continue };
            let block = info.kernel.block_of(d.trifle);
            assert_eq!(info.injection[block], d.burdened_index);
            assert!(info.kernel.blocks()[block].contains(&(d.burdened as u8)));
        }
    }

    #[test]
    fn phi_examples() {
        let c = ctx("[1,1,3]");
        assert_eq!(phi_bar(&c, c.alpha()), Transformation::identity(2));
        let b = t("[2,3,1]");
        // a_1 = 1 -> alpha(2) = 1, a_2 = 3 -> alpha(1) = 1: constant on A
        assert_eq!(phi_bar(&c, &b), t("[1,1]"));
        assert_eq!(c.stable_rank(&b).unwrap(), 1);
        assert_eq!(phi_r(&c, &b), t("[1,3,1]"));
        assert_eq!(phi_l(&c, &b), t("[2,2,1]"));
    }
}
