//! Family descriptors and their materialization as element sets.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use super::index_sets::{check_pair, idempotent_for, partitions_l, partitions_lm1, transversals, transversals_lm1};
use crate::context::{SandwichContext, ScanGuard, VariantTable};
use crate::elements::ElementSet;
use crate::error::{Error, Result};
use crate::transform::{Partition, PointSet, Transformation};

/// A named family of root-class unions. Variant order is the tag order used
/// to pick canonical descriptors, so `derive(Ord)` is load-bearing.
///
/// Indices `k`, `m` are 0-based here and 1-based in JSON; `M` in `L` is the
/// set of representative points `a_j` allowed as burdened element.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(tag = "tag")]
pub enum FamilyDescriptor {
    F {
        x: Vec<Partition>,
        y: Vec<PointSet>,
    },
    H {
        #[serde(serialize_with = "crate::one_based")]
        k: usize,
        #[serde(serialize_with = "crate::one_based")]
        m: usize,
        x: Vec<Partition>,
        y: Vec<PointSet>,
    },
    K {
        #[serde(serialize_with = "crate::one_based")]
        k: usize,
        #[serde(serialize_with = "crate::one_based")]
        m: usize,
        x: Vec<Partition>,
    },
    L {
        #[serde(serialize_with = "crate::one_based")]
        k: usize,
        #[serde(rename = "M")]
        m: PointSet,
        y: Vec<PointSet>,
    },
    Ideal,
    FUnionIdeal {
        x: Vec<Partition>,
        y: Vec<PointSet>,
    },
    /// Union of `sqrt(theta_i)` over the rank-one idempotents `theta_i`
    /// with image `{i}`, `i` in `points`.
    RootUnion {
        points: PointSet,
    },
}

impl FamilyDescriptor {
    pub fn tag(&self) -> &'static str {
        match self {
            FamilyDescriptor::F { .. } => "F",
            FamilyDescriptor::H { .. } => "H",
            FamilyDescriptor::K { .. } => "K",
            FamilyDescriptor::L { .. } => "L",
            FamilyDescriptor::Ideal => "Ideal",
            FamilyDescriptor::FUnionIdeal { .. } => "FUnionIdeal",
            FamilyDescriptor::RootUnion { .. } => "RootUnion",
        }
    }

    /// `F(X, Y)` with both parameters given as full index lists.
    pub fn f(x: Vec<Partition>, y: Vec<PointSet>) -> Self {
        FamilyDescriptor::F { x, y }
    }
}

fn list<T: fmt::Display>(items: &[T]) -> String {
    let parts: Vec<String> = items.iter().map(ToString::to_string).collect();
    format!("[{}]", parts.join(","))
}

impl fmt::Display for FamilyDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyDescriptor::F { x, y } => write!(f, "F({}, {})", list(x), list(y)),
            FamilyDescriptor::H { k, m, x, y } => write!(f, "H({}, {}, {}, {})", k + 1, m + 1, list(x), list(y)),
            FamilyDescriptor::K { k, m, x } => write!(f, "K({{{},{}}}, {})", k + 1, m + 1, list(x)),
            FamilyDescriptor::L { k, m, y } => write!(f, "L({}, {}, {})", k + 1, m, list(y)),
            FamilyDescriptor::Ideal => write!(f, "Ideal"),
            FamilyDescriptor::FUnionIdeal { x, y } => write!(f, "F({}, {}) + Ideal", list(x), list(y)),
            FamilyDescriptor::RootUnion { points } => write!(f, "RootUnion({points})"),
        }
    }
}

/// Root classes of a variant, indexed for fast family materialization.
pub struct FamilyIndex {
    table: VariantTable,
    classes: HashMap<u32, ElementSet>,
    top_layer: ElementSet,
}

impl FamilyIndex {
    pub fn new(ctx: &SandwichContext, guard: ScanGuard) -> Result<Self> {
        Ok(Self::from_table(VariantTable::new(ctx, guard)?))
    }

    pub fn from_table(table: VariantTable) -> Self {
        let n = table.n();
        let mut classes: HashMap<u32, ElementSet> = HashMap::new();
        for (i, &r) in table.roots().iter().enumerate() {
            classes
                .entry(r)
                .or_insert_with(|| ElementSet::empty(n))
                .insert_index(i as u32);
        }
        let top_layer = table.stable_rank_layer(table.context().l());
        FamilyIndex {
            table,
            classes,
            top_layer,
        }
    }

    pub fn table(&self) -> &VariantTable {
        &self.table
    }

    pub fn context(&self) -> &SandwichContext {
        self.table.context()
    }

    /// `sqrt(eps)` for an idempotent `eps`.
    pub fn root_class(&self, eps: &Transformation) -> Result<&ElementSet> {
        self.classes
            .get(&self.table.index_of(eps))
            .filter(|_| self.table.is_idempotent(self.table.index_of(eps)))
            .ok_or_else(|| Error::NotIdempotent(eps.to_string()))
    }

    /// `T_n^(l)`, the elements of stable rank `l`.
    pub fn top_layer(&self) -> &ElementSet {
        &self.top_layer
    }

    /// `T_n \ T_n^(l)`.
    pub fn ideal(&self) -> ElementSet {
        self.top_layer.complement()
    }

    fn union_of(&self, idempotents: impl IntoIterator<Item = Transformation>) -> Result<ElementSet> {
        let mut out = ElementSet::empty(self.table.n());
        for eps in idempotents {
            out.union_with(self.root_class(&eps)?);
        }
        Ok(out)
    }

    /// Element set of a descriptor, after validating its parameters.
    pub fn family_elements(&self, d: &FamilyDescriptor) -> Result<ElementSet> {
        let ctx = self.context();
        validate(ctx, d)?;
        match d {
            FamilyDescriptor::F { x, y } => self.union_of(rect(ctx, x, y)?),
            FamilyDescriptor::H { x, y, .. } => self.union_of(rect(ctx, x, y)?),
            FamilyDescriptor::K { k, m, x } => {
                let mut images = transversals_lm1(ctx, *k)?;
                images.extend(transversals_lm1(ctx, *m)?);
                self.union_of(rect(ctx, x, &images)?)
            }
            FamilyDescriptor::L { k, m, y } => {
                let mut eps = Vec::new();
                for b in m.iter() {
                    let mi = ctx.rep_index(b).expect("validated");
                    eps.extend(rect(ctx, &partitions_lm1(ctx, *k, mi)?, y)?);
                }
                self.union_of(eps)
            }
            FamilyDescriptor::Ideal => Ok(self.ideal()),
            FamilyDescriptor::FUnionIdeal { x, y } => {
                let mut out = self.union_of(rect(ctx, x, y)?)?;
                out.union_with(&self.ideal());
                Ok(out)
            }
            FamilyDescriptor::RootUnion { points } => {
                self.union_of(points.iter().map(|p| Transformation::constant(ctx.n(), p)))
            }
        }
    }
}

/// `eps(Lambda, I)` for every pair in `xs x ys`.
fn rect(ctx: &SandwichContext, xs: &[Partition], ys: &[PointSet]) -> Result<Vec<Transformation>> {
    let mut out = Vec::with_capacity(xs.len() * ys.len());
    for x in xs {
        for y in ys {
            out.push(idempotent_for(ctx, x, y)?);
        }
    }
    Ok(out)
}

fn check_subset<T: Ord + fmt::Display>(what: &str, items: &[T], universe: &[T]) -> Result<()> {
    if items.is_empty() {
        return Err(Error::InvalidDescriptor(format!("{what} must be nonempty")));
    }
    if !items.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::InvalidDescriptor(format!("{what} must be sorted without repeats")));
    }
    if let Some(bad) = items.iter().find(|i| universe.binary_search(i).is_err()) {
        return Err(Error::InvalidDescriptor(format!("{bad} is not an admissible member of {what}")));
    }
    Ok(())
}

/// Checks the parameter constraints of a descriptor against `ctx`.
pub fn validate(ctx: &SandwichContext, d: &FamilyDescriptor) -> Result<()> {
    match d {
        FamilyDescriptor::F { x, y } | FamilyDescriptor::FUnionIdeal { x, y } => {
            check_subset("X", x, &partitions_l(ctx))?;
            check_subset("Y", y, &transversals(ctx))?;
            if matches!(d, FamilyDescriptor::FUnionIdeal { .. }) && ctx.l() < 2 {
                return Err(Error::RankTooSmall(ctx.l()));
            }
        }
        FamilyDescriptor::H { k, m, x, y } => {
            check_pair(ctx, *k, *m)?;
            check_subset("X", x, &partitions_lm1(ctx, *k, *m)?)?;
            check_subset("Y", y, &transversals_lm1(ctx, *k)?)?;
        }
        FamilyDescriptor::K { k, m, x } => {
            check_pair(ctx, *k, *m)?;
            if k > m {
                return Err(Error::InvalidDescriptor("K expects k < m".into()));
            }
            check_subset("X", x, &partitions_lm1(ctx, *k, *m)?)?;
        }
        FamilyDescriptor::L { k, m, y } => {
            if ctx.l() < 2 {
                return Err(Error::RankTooSmall(ctx.l()));
            }
            if *k >= ctx.l() {
                return Err(Error::InvalidDescriptor(format!("index {} out of range", k + 1)));
            }
            if m.len() < 2 || m.contains(ctx.rep(*k)) || !m.is_subset(ctx.rep_set()) {
                return Err(Error::InvalidDescriptor(format!(
                    "M = {m} must hold at least two representatives other than a_{}",
                    k + 1
                )));
            }
            check_subset("Y", y, &transversals_lm1(ctx, *k)?)?;
        }
        FamilyDescriptor::Ideal => {
            if ctx.l() < 2 {
                return Err(Error::RankTooSmall(ctx.l()));
            }
        }
        FamilyDescriptor::RootUnion { points } => {
            if ctx.l() > 2 {
                return Err(Error::InvalidDescriptor("RootUnion needs l <= 2".into()));
            }
            if points.is_empty() || points.iter().any(|p| p >= ctx.n()) {
                return Err(Error::InvalidDescriptor(format!("bad point set {points}")));
            }
        }
    }
    Ok(())
}

/// Materializes a single descriptor.
pub fn family_elements(ctx: &SandwichContext, d: &FamilyDescriptor, guard: ScanGuard) -> Result<ElementSet> {
    validate(ctx, d)?;
    FamilyIndex::new(ctx, guard)?.family_elements(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::idempotents::sqrt_class;

    fn ctx(s: &str) -> SandwichContext {
        SandwichContext::new(s.parse().unwrap()).unwrap()
    }

    fn t(s: &str) -> Transformation {
        s.parse().unwrap()
    }

    #[test]
    fn f_single_pair_is_the_root_class_of_alpha() {
        let c = ctx("[1,1,3]");
        let idx = FamilyIndex::new(&c, ScanGuard::default()).unwrap();
        let d = FamilyDescriptor::f(vec!["{1,2|3}".parse().unwrap()], vec!["{1,3}".parse().unwrap()]);
        let s = idx.family_elements(&d).unwrap();
        assert_eq!(s, sqrt_class(&c, c.alpha(), ScanGuard::default()).unwrap());
        assert!(s.contains(&t("[1,1,3]")) && s.contains(&t("[3,3,1]")));
    }

    #[test]
    fn full_f_and_ideal_partition_the_semigroup() {
        let c = ctx("[1,1,3]");
        let idx = FamilyIndex::new(&c, ScanGuard::default()).unwrap();
        let full = idx.family_elements(&FamilyDescriptor::f(partitions_l(&c), transversals(&c))).unwrap();
        let ideal = idx.family_elements(&FamilyDescriptor::Ideal).unwrap();
        assert!(full.is_disjoint(&ideal));
        assert_eq!(full.len() + ideal.len(), 27);
        assert_eq!(&full, idx.top_layer());
        let all = idx
            .family_elements(&FamilyDescriptor::FUnionIdeal {
                x: partitions_l(&c),
                y: transversals(&c),
            })
            .unwrap();
        assert_eq!(all, ElementSet::full(3));
    }

    #[test]
    fn h_for_identity_is_a_maximal_subgroup() {
        let c = ctx("[1,2,3]");
        let idx = FamilyIndex::new(&c, ScanGuard::default()).unwrap();
        // trifle a_2, burdened a_1: eps_{1,2} sends 2 to 1
        let d = FamilyDescriptor::H {
            k: 1,
            m: 0,
            x: partitions_lm1(&c, 1, 0).unwrap(),
            y: transversals_lm1(&c, 1).unwrap(),
        };
        let s = idx.family_elements(&d).unwrap();
        let eps = t("[1,1,3]");
        assert_eq!(s, crate::idempotents::group_of(&c, &eps, ScanGuard::default()).unwrap());
        assert_eq!(s.len(), 2);
    }

    #[test]
    fn root_union_of_everything_is_the_rank_one_layer() {
        let c = ctx("[1,1,3]");
        let idx = FamilyIndex::new(&c, ScanGuard::default()).unwrap();
        let s = idx
            .family_elements(&FamilyDescriptor::RootUnion {
                points: PointSet::from_points(0..3),
            })
            .unwrap();
        assert_eq!(s, idx.ideal());
    }

    #[test]
    fn invalid_descriptors_are_rejected() {
        let c = ctx("[1,1,3,4]");
        let bad = [
            FamilyDescriptor::f(vec![], transversals(&c)),
            FamilyDescriptor::f(partitions_l(&c), vec!["{1,2,3}".parse().unwrap()]),
            FamilyDescriptor::H {
                k: 0,
                m: 0,
                x: vec![],
                y: vec![],
            },
            FamilyDescriptor::K {
                k: 2,
                m: 0,
                x: partitions_lm1(&c, 0, 2).unwrap(),
            },
            FamilyDescriptor::L {
                k: 0,
                m: "{1,3}".parse().unwrap(),
                y: transversals_lm1(&c, 0).unwrap(),
            },
            FamilyDescriptor::RootUnion {
                points: "{1}".parse().unwrap(),
            },
        ];
        for d in &bad {
            assert!(matches!(validate(&c, d), Err(Error::InvalidDescriptor(_))), "{d}");
        }
        let c1 = ctx("[1,1,1]");
        assert_eq!(validate(&c1, &FamilyDescriptor::Ideal), Err(Error::RankTooSmall(1)));
    }

    #[test]
    fn descriptor_order_follows_tags() {
        let a = FamilyDescriptor::f(vec![], vec![]);
        let b = FamilyDescriptor::Ideal;
        let c = FamilyDescriptor::RootUnion {
            points: PointSet::from_points([0]),
        };
        assert!(a < b && b < c);
    }

    #[test]
    fn descriptors_serialize_one_based() {
        let d = FamilyDescriptor::K {
            k: 0,
            m: 2,
            x: vec!["{1,2|3,4}".parse().unwrap()],
        };
        assert_eq!(
            serde_json::to_string(&d).unwrap(),
            r#"{"tag":"K","k":1,"m":3,"x":["{1,2|3,4}"]}"#
        );
    }
}
