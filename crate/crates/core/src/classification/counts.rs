//! Closed-form counts of isolated subsemigroups.
//!
//! Two independent tallies are kept: the published closed forms, summand by
//! summand, and a direct count of the parameter choices of each family. They
//! disagree for `l >= 2` in general; the enumeration checked by the oracle is
//! the one to trust.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use serde::Serialize;

use crate::context::SandwichContext;
use crate::BigCount;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Summand {
    pub label: &'static str,
    pub value: BigCount,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CountReport {
    pub l: usize,
    /// Which closed form applies: `a` for `l = 1`, `b` for `l = 2`, `c` otherwise.
    pub case: &'static str,
    pub formula: BigCount,
    pub formula_summands: Vec<Summand>,
    /// Number of distinct parameter choices per family tag.
    pub per_family: BTreeMap<&'static str, BigCount>,
    pub family_total: BigCount,
    /// Number of distinct sets produced by the enumeration, when it was run.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub enumerated: Option<u64>,
    /// `formula == enumerated`, when the enumeration was run.
    #[serde(rename = "match", skip_serializing_if = "Option::is_none")]
    pub matches: Option<bool>,
    pub families_match_enumeration: Option<bool>,
}

fn pow2(e: &BigUint) -> BigUint {
    let e = u32::try_from(e).expect("exponent fits in u32");
    BigUint::from(1u32) << e
}

fn big(v: usize) -> BigUint {
    BigUint::from(v)
}

/// `2^(a+b) - 2^a - 2^b + 1 = (2^a - 1)(2^b - 1)`.
fn rect_count(a: &BigUint, b: &BigUint) -> BigUint {
    (pow2(a) - 1u32) * (pow2(b) - 1u32)
}

struct Params {
    n: usize,
    l: usize,
    /// `|X| = l^(n-l)`
    x: BigUint,
    /// `|Y| = p`
    p: BigUint,
    /// `|U^(k,m)| = (l-1)^(n-l)`
    u: BigUint,
    /// `|V^(k)| = p_k`
    pk: Vec<BigUint>,
}

fn params(ctx: &SandwichContext) -> Params {
    let (n, l) = (ctx.n(), ctx.l());
    let sizes = ctx.block_sizes();
    let e = (n - l) as u32;
    Params {
        n,
        l,
        x: big(l).pow(e),
        p: sizes.iter().map(|&s| big(s)).product(),
        u: big(l - 1).pow(e),
        pk: (0..l)
            .map(|k| {
                sizes
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != k)
                    .map(|(_, &s)| big(s))
                    .product()
            })
            .collect(),
    }
}

fn summand(label: &'static str, value: BigUint) -> Summand {
    Summand {
        label,
        value: BigCount(value),
    }
}

/// The published closed form, split into labelled summands.
pub fn formula_summands(ctx: &SandwichContext) -> Vec<Summand> {
    let q = params(ctx);
    let root_unions = pow2(&big(q.n)) - 1u32;
    match q.l {
        1 => vec![summand("RootUnion", root_unions)],
        2 => {
            // 2^(2^(n-2)+p) - 2^(2^(n-2)) - 2^p + 2^n
            vec![summand("F", rect_count(&q.x, &q.p)), summand("RootUnion", root_unions)]
        }
        l => {
            let mut k_sum = BigUint::from(0u32);
            for k in 1..l {
                for m in 0..k {
                    k_sum += (pow2(&q.u) - 1u32) * (pow2(&q.pk[k]) - 1u32) * (pow2(&q.pk[m]) - 1u32);
                }
            }
            let h_sum: BigUint = q.pk.iter().map(|pk| big(l) * rect_count(&q.u, pk)).sum();
            let l_sum: BigUint = q
                .pk
                .iter()
                .map(|pk| (pow2(&big(l - 1)) - big(l)) * (pow2(pk) - 1u32))
                .sum();
            let f = rect_count(&q.x, &q.p);
            vec![
                summand("F", f.clone()),
                summand("H", h_sum),
                summand("K", k_sum),
                summand("L", l_sum),
                summand("Ideal", BigUint::from(1u32)),
                summand("FUnionIdeal", f),
            ]
        }
    }
}

/// Total of the published closed form.
pub fn count_isolated_formula(ctx: &SandwichContext) -> BigUint {
    formula_summands(ctx).into_iter().map(|s| s.value.0).sum()
}

/// Number of `F(X, Y)`: nonempty `X`, `Y`.
pub fn count_f(ctx: &SandwichContext) -> BigUint {
    let q = params(ctx);
    rect_count(&q.x, &q.p)
}

/// Number of `H(k, m, X, Y)` over all ordered pairs `k != m`.
pub fn count_h(ctx: &SandwichContext) -> BigUint {
    let q = params(ctx);
    if q.l < 2 {
        return BigUint::from(0u32);
    }
    q.pk.iter().map(|pk| big(q.l - 1) * rect_count(&q.u, pk)).sum()
}

/// Number of `K({k, m}, X)` over all unordered pairs.
pub fn count_k(ctx: &SandwichContext) -> BigUint {
    let q = params(ctx);
    if q.l < 2 {
        return BigUint::from(0u32);
    }
    big(q.l * (q.l - 1) / 2) * (pow2(&q.u) - 1u32)
}

/// Number of `L(k, M, Y)`: `|M| > 1`, nonempty `Y`.
pub fn count_l(ctx: &SandwichContext) -> BigUint {
    let q = params(ctx);
    if q.l < 2 {
        return BigUint::from(0u32);
    }
    let big_m = pow2(&big(q.l - 1)) - big(q.l);
    q.pk.iter().map(|pk| &big_m * (pow2(pk) - 1u32)).sum()
}

/// Parameter counts of the families that the enumeration emits for `ctx`.
pub fn family_counts(ctx: &SandwichContext) -> BTreeMap<&'static str, BigUint> {
    let mut out = BTreeMap::new();
    let root_unions = pow2(&big(ctx.n())) - 1u32;
    match ctx.l() {
        1 => {
            out.insert("RootUnion", root_unions);
        }
        l => {
            out.insert("F", count_f(ctx));
            out.insert("H", count_h(ctx));
            out.insert("K", count_k(ctx));
            out.insert("L", count_l(ctx));
            if l > 2 {
                out.insert("Ideal", BigUint::from(1u32));
            }
            out.insert("FUnionIdeal", count_f(ctx));
        }
    }
    out
}

pub fn family_total(ctx: &SandwichContext) -> BigUint {
    family_counts(ctx).into_values().sum()
}

/// Count report; `enumerated` is the number of distinct sets found by
/// materializing every family, if that was done.
pub fn count_report(ctx: &SandwichContext, enumerated: Option<u64>) -> CountReport {
    let formula_summands = formula_summands(ctx);
    let formula: BigUint = formula_summands.iter().map(|s| s.value.0.clone()).sum();
    let per_family = family_counts(ctx);
    let family_total: BigUint = per_family.values().sum();
    CountReport {
        l: ctx.l(),
        case: match ctx.l() {
            1 => "a",
            2 => "b",
            _ => "c",
        },
        matches: enumerated.map(|e| formula == BigUint::from(e)),
        families_match_enumeration: enumerated.map(|e| family_total == BigUint::from(e)),
        formula: BigCount(formula),
        formula_summands,
        per_family: per_family.into_iter().map(|(k, v)| (k, BigCount(v))).collect(),
        family_total: BigCount(family_total),
        enumerated,
    }
}
