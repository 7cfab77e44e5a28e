#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;
use sandwich_tn::{compose, ElementSet, SandwichContext, Transformation};

pub fn t(s: &str) -> Transformation {
    s.parse().unwrap()
}

pub fn ctx(s: &str) -> SandwichContext {
    SandwichContext::new(t(s)).unwrap()
}

/// Idempotent sending each block of the given type to its minimum, blocks
/// laid out consecutively.
pub fn alpha_of_type(sizes: &[usize]) -> Transformation {
    let mut images = Vec::new();
    let mut start = 1;
    for &s in sizes {
        images.extend(std::iter::repeat(start).take(s));
        start += s;
    }
    Transformation::from_one_based(&images).unwrap()
}

pub fn all_transformations(n: usize) -> impl Iterator<Item = Transformation> {
    (0..(n as u64).pow(n as u32)).map(move |i| Transformation::from_index(n, i))
}

/// Idempotents of `T_n` under plain composition.
pub fn plain_idempotents(n: usize) -> Vec<Transformation> {
    all_transformations(n)
        .filter(|a| compose(a, a).unwrap() == *a)
        .collect()
}

pub fn random_transformation<R: Rng>(rng: &mut R, n: usize) -> Transformation {
    let images: Vec<u8> = (0..n).map(|_| rng.gen_range(0..n as u8)).collect();
    Transformation::from_zero_based(images).unwrap()
}

/// A random plain idempotent: a random nonempty image fixed pointwise, the
/// other points sent into it at random.
pub fn random_plain_idempotent<R: Rng>(rng: &mut R, n: usize) -> Transformation {
    let mut points: Vec<u8> = (0..n as u8).collect();
    points.shuffle(rng);
    let k = rng.gen_range(1..=n);
    let image = &points[..k];
    let images: Vec<u8> = (0..n as u8)
        .map(|x| if image.contains(&x) { x } else { image[rng.gen_range(0..k)] })
        .collect();
    Transformation::from_zero_based(images).unwrap()
}

/// Rank of the idempotent power of `beta` under plain composition.
pub fn plain_stable_rank(beta: &Transformation) -> usize {
    let mut p = beta.clone();
    for _ in 0..beta.degree() {
        p = compose(&p, beta).unwrap();
    }
    p.rank()
}

pub fn index_sets(sets: &[ElementSet]) -> BTreeSet<Vec<u32>> {
    sets.iter().map(|s| s.indices().collect()).collect()
}

pub fn set_of<'a, I: IntoIterator<Item = &'a Transformation>>(n: usize, items: I) -> ElementSet {
    let mut s = ElementSet::empty(n);
    for b in items {
        s.insert(b);
    }
    s
}

pub fn set_where(n: usize, f: impl Fn(&Transformation) -> bool) -> ElementSet {
    let items: Vec<Transformation> = all_transformations(n).filter(|b| f(b)).collect();
    set_of(n, &items)
}
