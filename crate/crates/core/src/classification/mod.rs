//! Isolated, completely isolated, one-sided convex and convex subsemigroups of
//! a variant, built family by family.
//!
//! The isolated subsemigroups split by the stable-rank layers they meet:
//! `F(X, Y)` inside `T^(l)`, `H`, `K`, `L` inside `T^(l-1)`, the ideal
//! `T \ T^(l)`, and unions `F(X, Y) + ideal`. For `l = 1` every isolated set is
//! a union of `sqrt(theta_i)`; for `l = 2` the `T^(1)` part is handled the same
//! way.

mod counts;
mod families;
mod index_sets;

use std::collections::HashMap;

use serde::Serialize;

pub use counts::{
    count_f, count_h, count_isolated_formula, count_k, count_l, count_report, family_counts, family_total,
    formula_summands, CountReport, Summand,
};
pub use families::{family_elements, validate, FamilyDescriptor, FamilyIndex};
pub use index_sets::{
    enum_index_sets, enum_index_sets_lm1, idempotent_for, partitions_l, partitions_lm1, transversals,
    transversals_lm1,
};

use crate::context::{SandwichContext, ScanGuard, VariantTable};
use crate::elements::{BitSet, ElementSet};
use crate::error::{Error, Result};
use crate::transform::{PointSet, Transformation};

/// Upper bound on the number of families materialized in one enumeration.
pub const MAX_FAMILIES: u64 = 1 << 20;

/// A materialized family.
#[derive(Debug, Clone, Serialize)]
pub struct Family {
    pub descriptor: FamilyDescriptor,
    pub cardinality: usize,
    #[serde(skip)]
    pub set: ElementSet,
}

impl Family {
    fn new(descriptor: FamilyDescriptor, set: ElementSet) -> Self {
        Family {
            descriptor,
            cardinality: set.len(),
            set,
        }
    }
}

/// Output of [`enumerate_isolated`].
#[derive(Debug, Clone)]
pub struct IsolatedList {
    /// Distinct sets, ordered by descriptor.
    pub families: Vec<Family>,
    /// Descriptors whose set was already produced by a smaller descriptor.
    pub duplicates: Vec<(FamilyDescriptor, FamilyDescriptor)>,
}

impl IsolatedList {
    pub fn len(&self) -> usize {
        self.families.len()
    }

    pub fn is_empty(&self) -> bool {
        self.families.is_empty()
    }

    /// The family with exactly this element set.
    pub fn find(&self, set: &ElementSet) -> Option<&Family> {
        self.families.iter().find(|f| &f.set == set)
    }
}

/// Nonempty sublists of `items`, in mask order.
fn nonempty_subsets<T: Clone>(items: &[T]) -> impl Iterator<Item = Vec<T>> + '_ {
    assert!(items.len() < 64, "too many items to take subsets of");
    (1u64..1u64 << items.len()).map(move |mask| {
        items
            .iter()
            .enumerate()
            .filter(|&(i, _)| mask >> i & 1 == 1)
            .map(|(_, x)| x.clone())
            .collect()
    })
}

fn f_descriptors(ctx: &SandwichContext, out: &mut Vec<FamilyDescriptor>) {
    let (xs, ys) = enum_index_sets(ctx);
    for x in nonempty_subsets(&xs) {
        for y in nonempty_subsets(&ys) {
            out.push(FamilyDescriptor::F { x: x.clone(), y });
        }
    }
}

fn f_union_ideal_descriptors(ctx: &SandwichContext, out: &mut Vec<FamilyDescriptor>) {
    let (xs, ys) = enum_index_sets(ctx);
    for x in nonempty_subsets(&xs) {
        for y in nonempty_subsets(&ys) {
            out.push(FamilyDescriptor::FUnionIdeal { x: x.clone(), y });
        }
    }
}

fn root_union_descriptors(ctx: &SandwichContext, out: &mut Vec<FamilyDescriptor>) {
    let points: Vec<usize> = (0..ctx.n()).collect();
    for s in nonempty_subsets(&points) {
        out.push(FamilyDescriptor::RootUnion {
            points: PointSet::from_points(s),
        });
    }
}

fn h_descriptors(ctx: &SandwichContext, out: &mut Vec<FamilyDescriptor>) -> Result<()> {
    for k in 0..ctx.l() {
        for m in (0..ctx.l()).filter(|&m| m != k) {
            let (us, vs) = enum_index_sets_lm1(ctx, k, m)?;
            for x in nonempty_subsets(&us) {
                for y in nonempty_subsets(&vs) {
                    out.push(FamilyDescriptor::H { k, m, x: x.clone(), y });
                }
            }
        }
    }
    Ok(())
}

fn k_descriptors(ctx: &SandwichContext, out: &mut Vec<FamilyDescriptor>) -> Result<()> {
    for k in 0..ctx.l() {
        for m in k + 1..ctx.l() {
            for x in nonempty_subsets(&partitions_lm1(ctx, k, m)?) {
                out.push(FamilyDescriptor::K { k, m, x });
            }
        }
    }
    Ok(())
}

fn l_descriptors(ctx: &SandwichContext, out: &mut Vec<FamilyDescriptor>) -> Result<()> {
    for k in 0..ctx.l() {
        let others: Vec<usize> = (0..ctx.l()).filter(|&i| i != k).map(|i| ctx.rep(i)).collect();
        let vs = transversals_lm1(ctx, k)?;
        for m in nonempty_subsets(&others).filter(|m| m.len() > 1) {
            let m = PointSet::from_points(m);
            for y in nonempty_subsets(&vs) {
                out.push(FamilyDescriptor::L { k, m: m.clone(), y });
            }
        }
    }
    Ok(())
}

fn proper_subsets<T: Clone>(items: &[T]) -> Vec<Vec<T>> {
    nonempty_subsets(items).filter(|s| s.len() < items.len()).collect()
}

/// Every descriptor of the case split on `l`, in descriptor order.
pub fn isolated_descriptors(ctx: &SandwichContext) -> Result<Vec<FamilyDescriptor>> {
    let total = family_total(ctx);
    if total > MAX_FAMILIES.into() {
        return Err(Error::TooManyFamilies {
            count: total.to_string(),
            bound: MAX_FAMILIES,
        });
    }
    let mut out = Vec::new();
    match ctx.l() {
        1 => root_union_descriptors(ctx, &mut out),
        l => {
            f_descriptors(ctx, &mut out);
            h_descriptors(ctx, &mut out)?;
            k_descriptors(ctx, &mut out)?;
            l_descriptors(ctx, &mut out)?;
            if l > 2 {
                out.push(FamilyDescriptor::Ideal);
            }
            f_union_ideal_descriptors(ctx, &mut out);
        }
    }
    out.sort();
    Ok(out)
}

fn materialize(index: &FamilyIndex, descriptors: Vec<FamilyDescriptor>) -> Result<Vec<(FamilyDescriptor, ElementSet)>> {
    let f = |d: FamilyDescriptor| index.family_elements(&d).map(|s| (d, s));
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        descriptors.into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        descriptors.into_iter().map(f).collect()
    }
}

/// Materializes every family and removes repeated sets, keeping the least
/// descriptor for each.
pub fn enumerate_isolated_in(index: &FamilyIndex) -> Result<IsolatedList> {
    let descriptors = isolated_descriptors(index.context())?;
    let mut seen: HashMap<BitSet, usize> = HashMap::new();
    let mut families: Vec<Family> = Vec::new();
    let mut duplicates = Vec::new();
    for (d, set) in materialize(index, descriptors)? {
        match seen.get(set.bits()) {
            Some(&i) => duplicates.push((d, families[i].descriptor.clone())),
            None => {
                seen.insert(set.bits().clone(), families.len());
                families.push(Family::new(d, set));
            }
        }
    }
    Ok(IsolatedList { families, duplicates })
}

pub fn enumerate_isolated(ctx: &SandwichContext, guard: ScanGuard) -> Result<IsolatedList> {
    enumerate_isolated_in(&FamilyIndex::new(ctx, guard)?)
}

/// The four lists of special isolated subsemigroups.
#[derive(Debug, Clone, Serialize)]
pub struct SpecialLists {
    pub completely_isolated: Vec<Family>,
    pub left_convex: Vec<Family>,
    pub right_convex: Vec<Family>,
    pub convex: Vec<Family>,
}

/// Completely isolated, left convex, right convex and convex subsemigroups.
///
/// For `l >= 2` these are the ideal `T \ T^(l)`, the layer `T^(l)`, the whole
/// semigroup and the sets `F(X, Y)`, `F(X, Y) + ideal` with `X` or `Y` full.
/// Right convexity of `F(all, Y)` comes from `im^st(b * c) = im^st(c)` on
/// `T^(l)`, and dually for the left.
pub fn special_lists_in(index: &FamilyIndex, isolated: &IsolatedList) -> Result<SpecialLists> {
    let ctx = index.context();
    let lookup: HashMap<&BitSet, usize> = isolated
        .families
        .iter()
        .enumerate()
        .map(|(i, f)| (f.set.bits(), i))
        .collect();
    let canonical = |d: FamilyDescriptor| -> Result<Family> {
        let set = index.family_elements(&d)?;
        lookup
            .get(set.bits())
            .map(|&i| isolated.families[i].clone())
            .ok_or_else(|| Error::InvalidDescriptor(format!("{d} is missing from the isolated list")))
    };
    let collect = |ds: Vec<FamilyDescriptor>| -> Result<Vec<Family>> {
        let mut v = ds.into_iter().map(canonical).collect::<Result<Vec<_>>>()?;
        v.sort_by(|a, b| a.descriptor.cmp(&b.descriptor));
        v.dedup_by(|a, b| a.descriptor == b.descriptor);
        Ok(v)
    };
    let whole = || FamilyDescriptor::RootUnion {
        points: PointSet::from_points(0..ctx.n()),
    };

    if ctx.l() == 1 {
        let all = isolated.families.clone();
        return Ok(SpecialLists {
            completely_isolated: all.clone(),
            right_convex: all,
            left_convex: collect(vec![whole()])?,
            convex: collect(vec![whole()])?,
        });
    }

    let (xs, ys) = enum_index_sets(ctx);
    let top = FamilyDescriptor::f(xs.clone(), ys.clone());
    let everything = FamilyDescriptor::FUnionIdeal {
        x: xs.clone(),
        y: ys.clone(),
    };
    let mut ci = vec![everything.clone(), top.clone(), FamilyDescriptor::Ideal];
    for x in proper_subsets(&xs) {
        ci.push(FamilyDescriptor::f(x.clone(), ys.clone()));
        ci.push(FamilyDescriptor::FUnionIdeal { x, y: ys.clone() });
    }
    for y in proper_subsets(&ys) {
        ci.push(FamilyDescriptor::f(xs.clone(), y.clone()));
        ci.push(FamilyDescriptor::FUnionIdeal { x: xs.clone(), y });
    }
    let mut rc = vec![everything.clone()];
    rc.extend(nonempty_subsets(&ys).map(|y| FamilyDescriptor::f(xs.clone(), y)));
    let mut lc = vec![everything.clone()];
    lc.extend(nonempty_subsets(&xs).map(|x| FamilyDescriptor::f(x, ys.clone())));
    Ok(SpecialLists {
        completely_isolated: collect(ci)?,
        left_convex: collect(lc)?,
        right_convex: collect(rc)?,
        convex: collect(vec![everything, top])?,
    })
}

/// The `l = 2` right and left convex lists exactly as printed in the
/// exceptional-case statement, which has the two sides exchanged relative to
/// the `l > 2` theorem. Returned as `(right, left)` for comparison only.
pub fn printed_rank_two_one_sided(index: &FamilyIndex, isolated: &IsolatedList) -> Result<(Vec<Family>, Vec<Family>)> {
    let ctx = index.context();
    if ctx.l() != 2 {
        return Err(Error::InvalidDescriptor("only defined for l = 2".into()));
    }
    let lists = special_lists_in(index, isolated)?;
    Ok((lists.left_convex, lists.right_convex))
}

/// The `l = 2` list of root unions `sqrt(theta_i)` over all nonempty point
/// sets, as printed in the exceptional-case statement, split into the sets
/// that occur in `isolated` and those that do not.
pub fn printed_rank_two_root_unions(
    index: &FamilyIndex,
    isolated: &IsolatedList,
) -> Result<(Vec<FamilyDescriptor>, Vec<FamilyDescriptor>)> {
    if index.context().l() != 2 {
        return Err(Error::InvalidDescriptor("only defined for l = 2".into()));
    }
    let mut ds = Vec::new();
    root_union_descriptors(index.context(), &mut ds);
    let (mut present, mut absent) = (Vec::new(), Vec::new());
    for d in ds {
        if isolated.find(&index.family_elements(&d)?).is_some() {
            present.push(d);
        } else {
            absent.push(d);
        }
    }
    Ok((present, absent))
}

/// Full classification of a context.
#[derive(Debug, Clone, Serialize)]
pub struct Classification {
    pub isolated: Vec<Family>,
    pub completely_isolated: Vec<Family>,
    pub left_convex: Vec<Family>,
    pub right_convex: Vec<Family>,
    pub convex: Vec<Family>,
    pub counts: CountReport,
    /// Descriptors dropped because an earlier descriptor gave the same set.
    pub duplicates: usize,
}

pub fn classify_in(index: &FamilyIndex) -> Result<Classification> {
    let isolated = enumerate_isolated_in(index)?;
    let lists = special_lists_in(index, &isolated)?;
    Ok(Classification {
        counts: count_report(index.context(), Some(isolated.len() as u64)),
        duplicates: isolated.duplicates.len(),
        isolated: isolated.families,
        completely_isolated: lists.completely_isolated,
        left_convex: lists.left_convex,
        right_convex: lists.right_convex,
        convex: lists.convex,
    })
}

pub fn classify(ctx: &SandwichContext, guard: ScanGuard) -> Result<Classification> {
    classify_in(&FamilyIndex::new(ctx, guard)?)
}

/// Whether a set is closed under `*` and contains every element having a
/// power in it.
pub fn is_isolated_in(table: &VariantTable, set: &ElementSet) -> bool {
    let roots = table.roots();
    table.closure(set) == *set && (0..table.order() as u32).all(|i| set.contains_index(roots[i as usize]) == set.contains_index(i))
}

/// Least isolated subsemigroup containing element `beta`.
pub fn minimal_isolated_in(table: &VariantTable, beta: u32) -> ElementSet {
    let roots = table.roots();
    let mut set = ElementSet::from_indices(table.n(), [beta]);
    loop {
        let closed = table.closure(&set);
        let mut next = closed.clone();
        for i in 0..table.order() as u32 {
            if closed.contains_index(roots[i as usize]) {
                next.insert_index(i);
            }
        }
        if next == set {
            return set;
        }
        set = next;
    }
}

pub fn minimal_isolated(ctx: &SandwichContext, beta: &Transformation, guard: ScanGuard) -> Result<ElementSet> {
    if beta.degree() != ctx.n() {
        return Err(Error::DegreeMismatch {
            left: ctx.n(),
            right: beta.degree(),
        });
    }
    let table = VariantTable::new(ctx, guard)?;
    Ok(minimal_isolated_in(&table, table.index_of(beta)))
}

/// Classes of the congruence cut out by the proper convex subsemigroups.
#[derive(Debug, Clone)]
pub struct ConvexCongruence {
    /// Classes ordered by their least element.
    pub classes: Vec<ElementSet>,
    pub is_congruence: bool,
    pub classes_isolated: bool,
    /// Every convex set is a union of classes.
    pub convex_sets_saturated: bool,
}

/// Groups elements by membership in each proper convex set.
pub fn convex_congruence_in(table: &VariantTable, convex: &[ElementSet]) -> ConvexCongruence {
    let n = table.n();
    let proper: Vec<&ElementSet> = convex.iter().filter(|s| s.len() < table.order()).collect();
    let signature = |i: u32| -> Vec<bool> { proper.iter().map(|s| s.contains_index(i)).collect() };
    let mut by_sig: HashMap<Vec<bool>, usize> = HashMap::new();
    let mut class_of = vec![0usize; table.order()];
    let mut classes: Vec<ElementSet> = Vec::new();
    for i in 0..table.order() as u32 {
        let id = *by_sig.entry(signature(i)).or_insert_with(|| {
            classes.push(ElementSet::empty(n));
            classes.len() - 1
        });
        classes[id].insert_index(i);
        class_of[i as usize] = id;
    }
    let members: Vec<Vec<u32>> = classes.iter().map(|c| c.indices().collect()).collect();
    let mut is_congruence = true;
    'outer: for a in &members {
        for b in &members {
            let target = class_of[table.mul(a[0], b[0]) as usize];
            for &x in a {
                for &y in b {
                    if class_of[table.mul(x, y) as usize] != target {
                        is_congruence = false;
                        break 'outer;
                    }
                }
            }
        }
    }
    let classes_isolated = classes.iter().all(|c| is_isolated_in(table, c));
    let convex_sets_saturated = proper
        .iter()
        .all(|s| classes.iter().all(|c| c.is_subset(s) || c.is_disjoint(s)));
    ConvexCongruence {
        classes,
        is_congruence,
        classes_isolated,
        convex_sets_saturated,
    }
}

pub fn convex_congruence(ctx: &SandwichContext, guard: ScanGuard) -> Result<ConvexCongruence> {
    let index = FamilyIndex::new(ctx, guard)?;
    let isolated = enumerate_isolated_in(&index)?;
    let lists = special_lists_in(&index, &isolated)?;
    let convex: Vec<ElementSet> = lists.convex.into_iter().map(|f| f.set).collect();
    Ok(convex_congruence_in(index.table(), &convex))
}

/// Checks `psi(b * c) = (psi_1(b), psi_2(c))` for all pairs of stable rank
/// `l`, with `psi` = (stable kernel, stable image). Returns the number of
/// violations.
pub fn rectangular_band_violations(table: &VariantTable) -> usize {
    let roots = table.roots();
    let l = table.context().l();
    let top: Vec<u32> = table.stable_rank_layer(l).indices().collect();
    let psi = |i: u32| {
        let e = table.element(roots[i as usize]);
        (e.kernel(), e.image())
    };
    let psis: HashMap<u32, _> = top.iter().map(|&i| (i, psi(i))).collect();
    let mut bad = 0;
    for &b in &top {
        for &c in &top {
            let p = table.mul(b, c);
            match psis.get(&p) {
                Some((k, im)) if *k == psis[&b].0 && *im == psis[&c].1 => {}
                _ => bad += 1,
            }
        }
    }
    bad
}

/// In the rectangular band on `rows x cols`, checks that the subsemigroups
/// are exactly the full sub-rectangles `X x Y`, by trying every subset.
pub fn band_subsemigroups_are_rectangles(rows: usize, cols: usize) -> bool {
    let cells = rows * cols;
    assert!(cells <= 20, "band too large for a subset scan");
    (1u32..1 << cells).all(|mask| {
        let has = |r: usize, c: usize| mask >> (r * cols + c) & 1 == 1;
        let closed = (0..cells).all(|a| {
            (0..cells).all(|b| !has(a / cols, a % cols) || !has(b / cols, b % cols) || has(a / cols, b % cols))
        });
        let rs: Vec<usize> = (0..rows).filter(|&r| (0..cols).any(|c| has(r, c))).collect();
        let cs: Vec<usize> = (0..cols).filter(|&c| (0..rows).any(|r| has(r, c))).collect();
        let rectangle = rs.iter().all(|&r| cs.iter().all(|&c| has(r, c)));
        closed == rectangle
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(s: &str) -> SandwichContext {
        SandwichContext::new(s.parse().unwrap()).unwrap()
    }

    fn t(s: &str) -> Transformation {
        s.parse().unwrap()
    }

    fn index(s: &str) -> FamilyIndex {
        FamilyIndex::new(&ctx(s), ScanGuard::default()).unwrap()
    }

    #[test]
    fn identity_of_degree_two_has_five_isolated_sets() {
        let idx = index("[1,2]");
        let iso = enumerate_isolated_in(&idx).unwrap();
        assert_eq!(iso.len(), 5);
        assert!(iso.duplicates.is_empty());
        let sizes: Vec<usize> = iso.families.iter().map(|f| f.cardinality).collect();
        // S_2, the two constants, both constants, T_2
        assert_eq!(sizes, vec![2, 1, 1, 2, 4]);
    }

    #[test]
    fn rank_one_gives_all_root_unions() {
        let iso = enumerate_isolated(&ctx("[1,1,1]"), ScanGuard::default()).unwrap();
        assert_eq!(iso.len(), 7);
        assert!(iso.families.iter().all(|f| f.descriptor.tag() == "RootUnion"));
    }

    #[test]
    fn desk_enumerations() {
        assert_eq!(enumerate_isolated(&ctx("[1,1,3]"), ScanGuard::default()).unwrap().len(), 23);
        let iso = enumerate_isolated(&ctx("[1,2,3]"), ScanGuard::default()).unwrap();
        assert_eq!(iso.len(), 15);
        assert!(iso.duplicates.is_empty());
        let iso = enumerate_isolated(&ctx("[1,1,3,4]"), ScanGuard::default()).unwrap();
        assert_eq!(iso.len(), 101);
        assert!(iso.duplicates.is_empty());
    }

    #[test]
    fn enumerated_sets_are_isolated() {
        for a in ["[1,2]", "[1,1,1]", "[1,1,3]", "[1,2,3]", "[1,1,3,4]", "[1,1,1,4]"] {
            let idx = index(a);
            for f in enumerate_isolated_in(&idx).unwrap().families {
                assert!(is_isolated_in(idx.table(), &f.set), "{a}: {}", f.descriptor);
            }
        }
    }

    #[test]
    fn special_lists_for_identity() {
        let idx = index("[1,2,3]");
        let iso = enumerate_isolated_in(&idx).unwrap();
        let lists = special_lists_in(&idx, &iso).unwrap();
        let sizes = |v: &[Family]| -> Vec<usize> {
            let mut s: Vec<usize> = v.iter().map(|f| f.cardinality).collect();
            s.sort();
            s
        };
        assert_eq!(sizes(&lists.completely_isolated), vec![6, 21, 27]);
        assert_eq!(sizes(&lists.convex), vec![6, 27]);
        assert_eq!(sizes(&lists.left_convex), vec![6, 27]);
        assert_eq!(sizes(&lists.right_convex), vec![6, 27]);
    }

    #[test]
    fn special_lists_for_rank_one() {
        let idx = index("[1,1,1]");
        let iso = enumerate_isolated_in(&idx).unwrap();
        let lists = special_lists_in(&idx, &iso).unwrap();
        assert_eq!(lists.right_convex.len(), 7);
        assert_eq!(lists.completely_isolated.len(), 7);
        assert_eq!(lists.convex.len(), 1);
        assert_eq!(lists.left_convex[0].cardinality, 27);
    }

    #[test]
    fn special_lists_for_ctx3() {
        let idx = index("[1,1,3]");
        let iso = enumerate_isolated_in(&idx).unwrap();
        let lists = special_lists_in(&idx, &iso).unwrap();
        // T, T^(2), T^(1), and two each of F(X, all), F(all, Y) with and without T^(1)
        assert_eq!(lists.completely_isolated.len(), 11);
        assert_eq!(lists.left_convex.len(), 4);
        assert_eq!(lists.right_convex.len(), 4);
        assert_eq!(lists.convex.len(), 2);
        let (printed_rc, printed_lc) = printed_rank_two_one_sided(&idx, &iso).unwrap();
        assert_eq!(printed_rc.len(), 4);
        assert_eq!(printed_lc.len(), 4);
    }

    #[test]
    fn printed_rank_two_root_unions_mixing_blocks_are_not_isolated() {
        let idx = index("[1,1,3]");
        let iso = enumerate_isolated_in(&idx).unwrap();
        let (present, absent) = printed_rank_two_root_unions(&idx, &iso).unwrap();
        let shown: Vec<String> = absent.iter().map(ToString::to_string).collect();
        assert_eq!(shown, vec!["RootUnion({1,3})", "RootUnion({2,3})"]);
        assert_eq!(present.len(), 5);
        for d in &absent {
            assert!(!is_isolated_in(idx.table(), &idx.family_elements(d).unwrap()));
        }
        let idx = index("[1,2]");
        let iso = enumerate_isolated_in(&idx).unwrap();
        assert_eq!(printed_rank_two_root_unions(&idx, &iso).unwrap().1, vec![]);
    }

    #[test]
    fn minimal_isolated_examples() {
        let c = ctx("[1,1,3]");
        let g = ScanGuard::default();
        let theta2 = t("[2,2,2]");
        assert_eq!(
            minimal_isolated(&c, &theta2, g).unwrap(),
            crate::idempotents::sqrt_class(&c, &theta2, g).unwrap()
        );
        assert_eq!(
            minimal_isolated(&c, c.alpha(), g).unwrap(),
            crate::idempotents::sqrt_class(&c, c.alpha(), g).unwrap()
        );
        let c4 = ctx("[1,1,3,4]");
        let table = VariantTable::new(&c4, g).unwrap();
        let ideal = table.stable_rank_layer(3).complement();
        let low = table.stable_rank_layer(1);
        for b in low.indices().take(20) {
            assert!(ideal.is_subset(&minimal_isolated_in(&table, b)));
        }
    }

    #[test]
    fn convex_congruence_examples() {
        let g = ScanGuard::default();
        let cc = convex_congruence(&ctx("[1,1,3,4]"), g).unwrap();
        assert_eq!(cc.classes.len(), 2);
        assert!(cc.is_congruence && cc.classes_isolated && cc.convex_sets_saturated);
        let cc = convex_congruence(&ctx("[1,1,1]"), g).unwrap();
        assert_eq!(cc.classes.len(), 1);
        let cc = convex_congruence(&ctx("[1,2]"), g).unwrap();
        let mut sizes: Vec<usize> = cc.classes.iter().map(|c| c.len()).collect();
        sizes.sort();
        assert_eq!(sizes, vec![2, 2]);
        assert!(cc.is_congruence);
    }

    #[test]
    fn rectangular_band_holds() {
        for a in ["[1,1,3]", "[1,2,3]", "[1,1,3,4]", "[1,1,1,4]", "[1,2,2,2]"] {
            let table = VariantTable::new(&ctx(a), ScanGuard::default()).unwrap();
            assert_eq!(rectangular_band_violations(&table), 0, "{a}");
        }
    }

    #[test]
    fn band_subsemigroups() {
        for (r, c) in [(1, 1), (1, 3), (2, 2), (2, 3), (3, 3), (4, 4), (2, 8)] {
            assert!(band_subsemigroups_are_rectangles(r, c), "{r}x{c}");
        }
    }

    #[test]
    fn family_bound_is_enforced() {
        let c = ctx("[1,1,1,1,1,1,1,8]");
        assert!(matches!(isolated_descriptors(&c), Err(Error::TooManyFamilies { .. })));
    }
}
