//! Brute-force checks straight from the definitions.
//!
//! Nothing here uses the family constructions. The isolated subsemigroups are
//! found as the `*`-closed unions of root classes `sqrt(e)`: a set closed under
//! taking roots is a union of such classes, and for a union of classes being
//! isolated is the same as being closed.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use serde::Serialize;

use crate::classification::{self, FamilyDescriptor, FamilyIndex};
use crate::context::{SandwichContext, ScanGuard, VariantTable};
use crate::elements::ElementSet;
use crate::error::{Error, Result};
use crate::idempotents;
use crate::transform::Transformation;
use crate::{BigCount, SCHEMA_VERSION};

/// Default bound on the number of idempotents for the subset scan.
pub const DEFAULT_MAX_SUBSETS: usize = 22;

/// Largest number of idempotents the pruned search accepts.
pub const MAX_PRUNED_IDEMPOTENTS: usize = 64;

/// Definition-level predicates over one variant.
pub struct Oracle {
    table: VariantTable,
    /// Full product table when small enough to hold.
    products: Option<Vec<u32>>,
    classes: OnceLock<ClassStructure>,
}

const PRODUCT_TABLE_LIMIT: usize = 1 << 20;

impl Oracle {
    pub fn new(ctx: &SandwichContext, guard: ScanGuard) -> Result<Self> {
        Ok(Self::from_table(VariantTable::new(ctx, guard)?))
    }

    pub fn from_table(table: VariantTable) -> Self {
        let order = table.order();
        let products = (order * order <= PRODUCT_TABLE_LIMIT).then(|| {
            let mut p = vec![0u32; order * order];
            for i in 0..order {
                for j in 0..order {
                    p[i * order + j] = table.mul(i as u32, j as u32);
                }
            }
            p
        });
        Oracle {
            table,
            products,
            classes: OnceLock::new(),
        }
    }

    pub fn table(&self) -> &VariantTable {
        &self.table
    }

    /// Whether all products are precomputed (degree at most 4).
    pub fn has_product_table(&self) -> bool {
        self.products.is_some()
    }

    pub fn context(&self) -> &SandwichContext {
        self.table.context()
    }

    #[inline]
    fn mul(&self, i: u32, j: u32) -> u32 {
        match &self.products {
            Some(p) => p[i as usize * self.table.order() + j as usize],
            None => self.table.mul(i, j),
        }
    }

    fn all(&self) -> std::ops::Range<u32> {
        0..self.table.order() as u32
    }

    /// `b * c` in `S` for all `b`, `c` in `S`. Empty input is rejected.
    pub fn is_subsemigroup(&self, s: &ElementSet) -> Result<bool> {
        if s.is_empty() {
            return Err(Error::EmptySet);
        }
        if self.products.is_none() {
            if let Some(mask) = self.class_structure().mask_of(s) {
                return Ok(self.class_structure().closed(mask));
            }
        }
        let members: Vec<u32> = s.indices().collect();
        Ok(members
            .iter()
            .all(|&b| members.iter().all(|&c| s.contains_index(self.mul(b, c)))))
    }

    /// Least `*`-closed superset.
    pub fn closure(&self, s: &ElementSet) -> ElementSet {
        let mut out = s.clone();
        let mut members: Vec<u32> = s.indices().collect();
        let mut i = 0;
        while i < members.len() {
            for j in 0..=i {
                let (x, y) = (members[i], members[j]);
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

    fn require_subsemigroup(&self, s: &ElementSet) -> Result<()> {
        if self.is_subsemigroup(s)? {
            Ok(())
        } else {
            Err(Error::NotSubsemigroup)
        }
    }

    /// Some power of `b` in `S` forces `b` in `S`; powers up to tail plus period.
    pub fn is_isolated_def(&self, s: &ElementSet) -> Result<bool> {
        self.require_subsemigroup(s)?;
        Ok(self.all().filter(|&b| !s.contains_index(b)).all(|b| {
            let mut p = b;
            let mut seen = vec![b];
            loop {
                p = self.mul(p, b);
                if s.contains_index(p) {
                    return false;
                }
                if seen.contains(&p) {
                    return true;
                }
                seen.push(p);
            }
        }))
    }

    /// Checks `b * c in S` against `accept(b in S, c in S)` for every pair.
    fn pair_condition(&self, s: &ElementSet, accept: impl Fn(bool, bool) -> bool + Sync) -> Result<bool> {
        self.require_subsemigroup(s)?;
        if self.products.is_none() {
            // a union of root classes is decided class by class
            if let Some(mask) = self.class_structure().mask_of(s) {
                return Ok(self.class_structure().pair_condition(mask, accept));
            }
        }
        let row = |b: u32| {
            let bin = s.contains_index(b);
            self.all().all(|c| !s.contains_index(self.mul(b, c)) || accept(bin, s.contains_index(c)))
        };
        #[cfg(feature = "parallel")]
        {
            use rayon::prelude::*;
            Ok(self.all().into_par_iter().all(row))
        }
        #[cfg(not(feature = "parallel"))]
        {
            Ok(self.all().all(row))
        }
    }

    /// `b * c in S` implies `b in S` or `c in S`.
    pub fn is_ci_def(&self, s: &ElementSet) -> Result<bool> {
        self.pair_condition(s, |b, c| b || c)
    }

    /// `b * c in S` implies `b in S`.
    pub fn is_lc_def(&self, s: &ElementSet) -> Result<bool> {
        self.pair_condition(s, |b, _| b)
    }

    /// `b * c in S` implies `c in S`.
    pub fn is_rc_def(&self, s: &ElementSet) -> Result<bool> {
        self.pair_condition(s, |_, c| c)
    }

    /// `b * c in S` implies `b in S` and `c in S`.
    pub fn is_convex_def(&self, s: &ElementSet) -> Result<bool> {
        self.pair_condition(s, |b, c| b && c)
    }

    fn complement_closed_under(&self, s: &ElementSet, left: bool, right: bool) -> bool {
        let c = s.complement();
        let members: Vec<u32> = c.indices().collect();
        members.iter().all(|&x| {
            self.all().all(|t| {
                (!left || c.contains_index(self.mul(t, x))) && (!right || c.contains_index(self.mul(x, t)))
            })
        })
    }

    /// Complement empty or a subsemigroup.
    pub fn is_ci_dual(&self, s: &ElementSet) -> bool {
        let c = s.complement();
        c.is_empty() || self.is_subsemigroup(&c).unwrap_or(false)
    }

    /// Complement empty or a right ideal.
    pub fn is_lc_dual(&self, s: &ElementSet) -> bool {
        self.complement_closed_under(s, false, true)
    }

    /// Complement empty or a left ideal.
    pub fn is_rc_dual(&self, s: &ElementSet) -> bool {
        self.complement_closed_under(s, true, false)
    }

    /// Complement empty or a two-sided ideal.
    pub fn is_convex_dual(&self, s: &ElementSet) -> bool {
        self.complement_closed_under(s, true, true)
    }

    fn class_structure(&self) -> &ClassStructure {
        self.classes.get_or_init(|| self.build_class_structure())
    }

    fn build_class_structure(&self) -> ClassStructure {
        let roots = self.table.roots();
        let idempotents = self.table.idempotents();
        let mut position = vec![usize::MAX; self.table.order()];
        for (k, &e) in idempotents.iter().enumerate() {
            position[e as usize] = k;
        }
        let class_of: Vec<usize> = roots.iter().map(|&r| position[r as usize]).collect();
        let m = idempotents.len();
        let mut classes = vec![ElementSet::empty(self.table.n()); m];
        for (i, &k) in class_of.iter().enumerate() {
            classes[k].insert_index(i as u32);
        }
        let row = |x: u32| {
            let mut r = vec![0u64; m];
            for y in self.all() {
                r[class_of[y as usize]] |= 1u64 << (class_of[self.mul(x, y) as usize] % 64);
            }
            (class_of[x as usize], r)
        };
        #[cfg(feature = "parallel")]
        let rows: Vec<(usize, Vec<u64>)> = {
            use rayon::prelude::*;
            self.all().into_par_iter().map(row).collect()
        };
        #[cfg(not(feature = "parallel"))]
        let rows: Vec<(usize, Vec<u64>)> = self.all().map(row).collect();
        let mut prod = vec![0u64; m * m];
        for (cx, r) in rows {
            for (j, bits) in r.into_iter().enumerate() {
                prod[cx * m + j] |= bits;
            }
        }
        ClassStructure {
            classes,
            class_of,
            prod,
        }
    }

    /// All isolated subsemigroups, by scanning every nonempty set of
    /// idempotents. Sorted by element bit-vector.
    pub fn brute_isolated_all(&self, max_subsets: usize) -> Result<Vec<ElementSet>> {
        let m = self.table.idempotents().len();
        if m > max_subsets.min(62) {
            return Err(Error::SubsetBoundExceeded {
                idempotents: m,
                bound: max_subsets,
            });
        }
        let cs = self.class_structure();
        let closed = |mask: u64| -> bool {
            let mut rest = mask;
            while rest != 0 {
                let i = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                let mut other = mask;
                while other != 0 {
                    let j = other.trailing_zeros() as usize;
                    other &= other - 1;
                    if cs.prod[i * m + j] & !mask != 0 {
                        return false;
                    }
                }
            }
            true
        };
        let masks: Vec<u64> = {
            let range = 1u64..1u64 << m;
            #[cfg(feature = "parallel")]
            {
                use rayon::prelude::*;
                range.into_par_iter().filter(|&mk| closed(mk)).collect()
            }
            #[cfg(not(feature = "parallel"))]
            {
                range.filter(|&mk| closed(mk)).collect()
            }
        };
        Ok(cs.materialize(masks))
    }

    /// All isolated subsemigroups by NextClosure over the class-union closure
    /// system. Cost grows with the number of closed unions, not `2^|E|`.
    pub fn pruned_isolated_all(&self) -> Result<Vec<ElementSet>> {
        let m = self.table.idempotents().len();
        if m > MAX_PRUNED_IDEMPOTENTS {
            return Err(Error::SubsetBoundExceeded {
                idempotents: m,
                bound: MAX_PRUNED_IDEMPOTENTS,
            });
        }
        let cs = self.class_structure();
        let full = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };
        let close = |start: u64| -> u64 {
            let mut a = start;
            loop {
                let mut next = a;
                let mut rest = a;
                while rest != 0 {
                    let i = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    let mut other = a;
                    while other != 0 {
                        let j = other.trailing_zeros() as usize;
                        other &= other - 1;
                        next |= cs.prod[i * m + j];
                    }
                }
                if next == a {
                    return a;
                }
                a = next;
            }
        };
        // lectic order with bit 0 most significant
        let mut found = Vec::new();
        let mut a = close(0);
        loop {
            if a != 0 {
                found.push(a);
            }
            if a == full {
                break;
            }
            let mut advanced = false;
            for i in (0..m).rev() {
                let bit = 1u64 << i;
                if a & bit != 0 {
                    continue;
                }
                let below = bit - 1;
                let b = close((a & below) | bit);
                if b & below == a & below {
                    a = b;
                    advanced = true;
                    break;
                }
            }
            if !advanced {
                break;
            }
        }
        Ok(cs.materialize(found))
    }
}

struct ClassStructure {
    classes: Vec<ElementSet>,
    class_of: Vec<usize>,
    /// `prod[i * m + j]`: classes met by products of class `i` with class `j`.
    prod: Vec<u64>,
}

impl ClassStructure {
    /// The classes making up `s`, if `s` is a union of classes.
    fn mask_of(&self, s: &ElementSet) -> Option<u64> {
        if self.classes.len() > 64 {
            return None;
        }
        let mut mask = 0u64;
        for i in s.indices() {
            mask |= 1 << self.class_of[i as usize];
        }
        let covered: usize = (0..self.classes.len())
            .filter(|&k| mask >> k & 1 == 1)
            .map(|k| self.classes[k].len())
            .sum();
        (covered == s.len()).then_some(mask)
    }

    /// Pair condition at class level: no product of classes `i`, `j` meets
    /// `mask` unless `accept(i in mask, j in mask)`.
    fn pair_condition(&self, mask: u64, accept: impl Fn(bool, bool) -> bool) -> bool {
        let m = self.classes.len();
        (0..m).all(|i| {
            (0..m).all(|j| self.prod[i * m + j] & mask == 0 || accept(mask >> i & 1 == 1, mask >> j & 1 == 1))
        })
    }

    fn closed(&self, mask: u64) -> bool {
        let m = self.classes.len();
        (0..m).filter(|&i| mask >> i & 1 == 1).all(|i| {
            (0..m)
                .filter(|&j| mask >> j & 1 == 1)
                .all(|j| self.prod[i * m + j] & !mask == 0)
        })
    }

    fn materialize(&self, masks: Vec<u64>) -> Vec<ElementSet> {
        let n = self.classes.first().map_or(1, |c| c.degree());
        let mut out: Vec<ElementSet> = masks
            .into_iter()
            .map(|mask| {
                let mut s = ElementSet::empty(n);
                for (k, c) in self.classes.iter().enumerate() {
                    if mask >> k & 1 == 1 {
                        s.union_with(c);
                    }
                }
                s
            })
            .collect();
        out.sort();
        out
    }
}

/// Options for [`verify_classification`].
#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    pub guard: ScanGuard,
    pub max_subsets: usize,
    /// Fall back to the pruned search when the subset scan is out of bounds.
    pub pruned: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            guard: ScanGuard::default(),
            max_subsets: DEFAULT_MAX_SUBSETS,
            pruned: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl Status {
    fn of(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

/// A set found by the oracle, described for reports.
#[derive(Debug, Clone, Serialize)]
pub struct SetSummary {
    pub cardinality: usize,
    /// Up to eight members, in index order.
    pub sample: Vec<Transformation>,
}

impl SetSummary {
    fn of(s: &ElementSet) -> Self {
        SetSummary {
            cardinality: s.len(),
            sample: s.elements().take(8).collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct IsolatedSection {
    pub status: Status,
    /// `subsets`, `pruned` or `none`.
    pub method: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_count: Option<usize>,
    pub classification_count: usize,
    /// Oracle sets the classification does not produce.
    pub missing: Vec<SetSummary>,
    /// Classification sets the oracle does not produce.
    pub extra: Vec<FamilyDescriptor>,
    /// Classification sets failing the definitional isolation check.
    pub not_isolated: Vec<FamilyDescriptor>,
    pub pairwise_distinct: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ListSection {
    pub status: Status,
    /// `oracle filter` when compared with the brute list, otherwise
    /// `definitional check` of each listed set.
    pub method: &'static str,
    pub expected: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<usize>,
    pub missing: Vec<SetSummary>,
    pub extra: Vec<FamilyDescriptor>,
    /// Sets where the quantifier check and the complement check disagree;
    /// only computed when the full product table is held (n <= 4).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dual_disagreements: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct IdempotentSection {
    pub status: Status,
    pub scanned: usize,
    pub formula: BigCount,
}

#[derive(Debug, Clone, Serialize)]
pub struct CountSection {
    /// Authoritative count: the oracle's when available.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<usize>,
    pub enumerated: usize,
    pub family_total: BigCount,
    pub formula: BigCount,
    pub formula_matches: bool,
    pub report: classification::CountReport,
}

/// Results of checking the printed `l = 2` lists literally.
#[derive(Debug, Clone, Serialize)]
pub struct PrintedRankTwo {
    /// Printed root unions that are not isolated.
    pub root_unions_not_isolated: Vec<FamilyDescriptor>,
    /// Printed right convex list equals the oracle's right convex sets.
    pub printed_right_convex_matches: Option<bool>,
    pub printed_left_convex_matches: Option<bool>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub alpha: Transformation,
    pub n: usize,
    pub l: usize,
    pub isolated: IsolatedSection,
    pub lists: BTreeMap<&'static str, ListSection>,
    pub counts: CountSection,
    pub idempotents: IdempotentSection,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub printed_rank_two: Option<PrintedRankTwo>,
    /// `pass`, `fail` or `partial(skips)`.
    pub verdict: String,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.verdict == "pass"
    }
}

type Predicate = fn(&Oracle, &ElementSet) -> Result<bool>;
type Dual = fn(&Oracle, &ElementSet) -> bool;

const LIST_KINDS: [(&str, Predicate, Dual); 4] = [
    ("completely_isolated", Oracle::is_ci_def, Oracle::is_ci_dual),
    ("left_convex", Oracle::is_lc_def, Oracle::is_lc_dual),
    ("right_convex", Oracle::is_rc_def, Oracle::is_rc_dual),
    ("convex", Oracle::is_convex_def, Oracle::is_convex_dual),
];

fn compare(
    oracle_sets: &[ElementSet],
    listed: &[classification::Family],
) -> (Vec<SetSummary>, Vec<FamilyDescriptor>) {
    let missing = oracle_sets
        .iter()
        .filter(|s| !listed.iter().any(|f| &f.set == *s))
        .map(SetSummary::of)
        .collect();
    let extra = listed
        .iter()
        .filter(|f| !oracle_sets.contains(&f.set))
        .map(|f| f.descriptor.clone())
        .collect();
    (missing, extra)
}

fn same_sets(a: &[classification::Family], b: &[ElementSet]) -> bool {
    a.len() == b.len() && a.iter().all(|f| b.contains(&f.set))
}

/// Runs the oracle against the classification and collects a report.
pub fn verify_classification(ctx: &SandwichContext, opts: VerifyOptions) -> Result<Report> {
    let index = FamilyIndex::new(ctx, opts.guard)?;
    let oracle = Oracle::from_table(VariantTable::new(ctx, opts.guard)?);
    let isolated = classification::enumerate_isolated_in(&index)?;
    let lists = classification::special_lists_in(&index, &isolated)?;

    let (brute, method, reason) = match oracle.brute_isolated_all(opts.max_subsets) {
        Ok(v) => (Some(v), "subsets", None),
        Err(e @ Error::SubsetBoundExceeded { .. }) if opts.pruned => match oracle.pruned_isolated_all() {
            Ok(v) => (Some(v), "pruned", Some(e.to_string())),
            Err(e2) => (None, "none", Some(e2.to_string())),
        },
        Err(e @ Error::SubsetBoundExceeded { .. }) => (None, "none", Some(e.to_string())),
        Err(e) => return Err(e),
    };

    let not_isolated: Vec<FamilyDescriptor> = isolated
        .families
        .iter()
        .filter(|f| !oracle.is_isolated_def(&f.set).unwrap_or(false))
        .map(|f| f.descriptor.clone())
        .collect();
    let pairwise_distinct = isolated.duplicates.is_empty();
    let isolated_section = match &brute {
        Some(b) => {
            let (missing, extra) = compare(b, &isolated.families);
            IsolatedSection {
                status: Status::of(missing.is_empty() && extra.is_empty() && not_isolated.is_empty()),
                method,
                reason,
                oracle_count: Some(b.len()),
                classification_count: isolated.len(),
                missing,
                extra,
                not_isolated,
                pairwise_distinct,
            }
        }
        None => IsolatedSection {
            status: if not_isolated.is_empty() && pairwise_distinct {
                Status::Skipped
            } else {
                Status::Fail
            },
            method,
            reason,
            oracle_count: None,
            classification_count: isolated.len(),
            missing: vec![],
            extra: vec![],
            not_isolated,
            pairwise_distinct,
        },
    };

    let listed = |kind: &str| -> &Vec<classification::Family> {
        match kind {
            "completely_isolated" => &lists.completely_isolated,
            "left_convex" => &lists.left_convex,
            "right_convex" => &lists.right_convex,
            _ => &lists.convex,
        }
    };
    let with_duals = oracle.has_product_table();
    let mut list_sections = BTreeMap::new();
    let mut filtered: BTreeMap<&str, Vec<ElementSet>> = BTreeMap::new();
    for (kind, def, dual) in LIST_KINDS {
        let expected = listed(kind);
        let section = match &brute {
            Some(b) => {
                let mut hits = Vec::new();
                let mut disagreements = 0;
                for s in b {
                    let d = def(&oracle, s)?;
                    if with_duals && d != dual(&oracle, s) {
                        disagreements += 1;
                    }
                    if d {
                        hits.push(s.clone());
                    }
                }
                let (missing, extra) = compare(&hits, expected);
                let section = ListSection {
                    status: Status::of(missing.is_empty() && extra.is_empty() && disagreements == 0),
                    method: "oracle filter",
                    expected: expected.len(),
                    oracle: Some(hits.len()),
                    missing,
                    extra,
                    dual_disagreements: with_duals.then_some(disagreements),
                };
                filtered.insert(kind, hits);
                section
            }
            None => {
                let mut extra = Vec::new();
                let mut disagreements = 0;
                for f in expected {
                    let d = def(&oracle, &f.set)?;
                    if with_duals && d != dual(&oracle, &f.set) {
                        disagreements += 1;
                    }
                    if !d {
                        extra.push(f.descriptor.clone());
                    }
                }
                ListSection {
                    status: Status::of(extra.is_empty() && disagreements == 0),
                    method: "definitional check",
                    expected: expected.len(),
                    oracle: None,
                    missing: vec![],
                    extra,
                    dual_disagreements: with_duals.then_some(disagreements),
                }
            }
        };
        list_sections.insert(kind, section);
    }

    let report = classification::count_report(ctx, Some(isolated.len() as u64));
    let counts = CountSection {
        oracle: brute.as_ref().map(Vec::len),
        enumerated: isolated.len(),
        family_total: report.family_total.clone(),
        formula: report.formula.clone(),
        formula_matches: report.formula.to_u64() == Some(brute.as_ref().map_or(isolated.len(), Vec::len) as u64),
        report,
    };

    let idem = idempotents::idempotents_of(oracle.table());
    let formula = idempotents::count_idempotents_formula(ctx);
    let idempotents = IdempotentSection {
        status: Status::of(formula == idem.len().into()),
        scanned: idem.len(),
        formula: BigCount(formula),
    };

    let printed_rank_two = if ctx.l() == 2 {
        let (_, absent) = classification::printed_rank_two_root_unions(&index, &isolated)?;
        let (printed_rc, printed_lc) = classification::printed_rank_two_one_sided(&index, &isolated)?;
        Some(PrintedRankTwo {
            root_unions_not_isolated: absent,
            printed_right_convex_matches: filtered.get("right_convex").map(|h| same_sets(&printed_rc, h)),
            printed_left_convex_matches: filtered.get("left_convex").map(|h| same_sets(&printed_lc, h)),
        })
    } else {
        None
    };

    let statuses: Vec<Status> = std::iter::once(isolated_section.status)
        .chain(list_sections.values().map(|s| s.status))
        .chain(std::iter::once(idempotents.status))
        .collect();
    let verdict = if statuses.contains(&Status::Fail) {
        "fail"
    } else if statuses.contains(&Status::Skipped) {
        "partial(skips)"
    } else {
        "pass"
    };

    Ok(Report {
        schema_version: SCHEMA_VERSION,
        alpha: ctx.alpha().clone(),
        n: ctx.n(),
        l: ctx.l(),
        isolated: isolated_section,
        lists: list_sections,
        counts,
        idempotents,
        printed_rank_two,
        verdict: verdict.to_string(),
    })
}
