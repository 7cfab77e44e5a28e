//! Isomorphism of variants and normalization of the sandwich element.
//!
//! Two variants `(T_n, *_a)` and `(T_n, *_b)` are isomorphic exactly when the
//! kernels of `a` and `b` have the same number of blocks of every size, so a
//! variant is determined up to isomorphism by its kernel type. Every kernel
//! type is realized by an idempotent, which is what the rest of the crate
//! works with.

use serde::Serialize;

use crate::context::SandwichContext;
use crate::error::{Error, Result};
use crate::transform::{compose_unchecked, Partition, Transformation};

/// Kernel block sizes of `alpha`, descending.
pub fn kernel_type(alpha: &Transformation) -> Vec<usize> {
    alpha.kernel().block_sizes()
}

pub fn variants_isomorphic(alpha1: &Transformation, alpha2: &Transformation) -> Result<bool> {
    if alpha1.degree() != alpha2.degree() {
        return Err(Error::DegreeMismatch {
            left: alpha1.degree(),
            right: alpha2.degree(),
        });
    }
    Ok(kernel_type(alpha1) == kernel_type(alpha2))
}

#[derive(Debug, Clone, Serialize)]
pub struct Normalization {
    pub input: Transformation,
    pub normalized: Transformation,
    /// Whether the normalized sandwich element differs from the input.
    pub changed: bool,
    pub l: usize,
    pub blocks: Partition,
    /// Representatives `a_1, .., a_l` as 1-based points.
    pub reps: Vec<usize>,
    pub kernel_type: Vec<usize>,
    #[serde(skip)]
    pub context: SandwichContext,
}

/// Replaces `alpha` by the idempotent with the same kernel that sends each
/// block to its minimal element.
pub fn normalize_sandwich(alpha: &Transformation) -> Normalization {
    let kernel = alpha.kernel();
    let mut images = vec![0u8; alpha.degree()];
    for block in kernel.blocks() {
        for &x in block {
            images[x as usize] = block[0];
        }
    }
    let normalized = Transformation::from_raw(images);
    debug_assert_eq!(compose_unchecked(&normalized, &normalized), normalized);
    let context = SandwichContext::new(normalized.clone()).expect("normalized element is idempotent");
    Normalization {
        input: alpha.clone(),
        changed: normalized != *alpha,
        l: context.l(),
        blocks: context.blocks().clone(),
        reps: context.reps().iter().map(|&r| r as usize + 1).collect(),
        kernel_type: kernel_type(alpha),
        normalized,
        context,
    }
}

/// A context for `alpha`, normalizing only when `alpha` is not idempotent.
pub fn context_for(alpha: &Transformation) -> SandwichContext {
    SandwichContext::new(alpha.clone()).unwrap_or_else(|_| normalize_sandwich(alpha).context)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transform::semigroup_order;
    use proptest::prelude::*;

    fn t(s: &str) -> Transformation {
        s.parse().unwrap()
    }

    #[test]
    fn kernel_type_examples() {
        assert_eq!(kernel_type(&t("[1,1,3]")), vec![2, 1]);
        assert_eq!(kernel_type(&Transformation::identity(3)), vec![1, 1, 1]);
        assert_eq!(kernel_type(&t("[1,1,1]")), vec![3]);
    }

    #[test]
    fn isomorphism_examples() {
        assert!(variants_isomorphic(&t("[1,1,3]"), &t("[3,3,1]")).unwrap());
        assert!(!variants_isomorphic(&t("[1,1,1]"), &t("[1,1,3]")).unwrap());
        let a = t("[2,1,1]");
        assert!(variants_isomorphic(&a, &a).unwrap());
        assert!(variants_isomorphic(&a, &t("[1,2]")).is_err());
    }

    #[test]
    fn normalization_examples() {
        let nz = normalize_sandwich(&t("[1,1,3]"));
        assert_eq!(nz.normalized, t("[1,1,3]"));
        assert!(!nz.changed);
        assert_eq!(nz.l, 2);
        assert_eq!(nz.blocks.to_string(), "{1,2|3}");
        assert_eq!(nz.reps, vec![1, 3]);

        let nz = normalize_sandwich(&t("[2,2,1]"));
        assert_eq!(nz.normalized, t("[1,1,3]"));
        assert!(nz.changed);

        let id = Transformation::identity(4);
        let nz = normalize_sandwich(&id);
        assert_eq!(nz.normalized, id);
        assert_eq!(nz.l, 4);
    }

    #[test]
    fn normalization_is_exhaustively_sound_up_to_degree_3() {
        for n in 1..=3 {
            for i in 0..semigroup_order(n) {
                let a = Transformation::from_index(n, i);
                let nz = normalize_sandwich(&a);
                assert_eq!(compose_unchecked(&nz.normalized, &nz.normalized), nz.normalized);
                assert!(variants_isomorphic(&a, &nz.normalized).unwrap());
            }
        }
    }

    fn arb_transformation(n: usize) -> impl Strategy<Value = Transformation> {
        proptest::collection::vec(0..n as u8, n).prop_map(Transformation::from_raw)
    }

    proptest! {
        #[test]
        fn normalization_is_sound_at_4_and_5(a in prop_oneof![arb_transformation(4), arb_transformation(5)]) {
            let nz = normalize_sandwich(&a);
            prop_assert_eq!(compose_unchecked(&nz.normalized, &nz.normalized), nz.normalized.clone());
            prop_assert!(variants_isomorphic(&a, &nz.normalized).unwrap());
        }

        #[test]
        fn isomorphism_is_an_equivalence(a in arb_transformation(5), b in arb_transformation(5), c in arb_transformation(5)) {
            let ab = variants_isomorphic(&a, &b).unwrap();
            prop_assert_eq!(ab, variants_isomorphic(&b, &a).unwrap());
            if ab && variants_isomorphic(&b, &c).unwrap() {
                prop_assert!(variants_isomorphic(&a, &c).unwrap());
            }
            prop_assert!(variants_isomorphic(&a, &a).unwrap());
        }
    }
}
