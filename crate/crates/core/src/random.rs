//! Seeded generators for the randomized suites.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::exact::{coeff, Coeff};
use crate::fourier::{SparseVector, TorusPoint};
use crate::lattice::{Genus, HomologyClass};
use crate::words::{CurveTable, Letter, TwistWord};

/// A class with `norm1 ≤ max_norm`, built from `±1` steps.
pub fn class<R: Rng + ?Sized>(rng: &mut R, genus: Genus, max_norm: u64) -> HomologyClass {
    let steps = rng.gen_range(0..=max_norm);
    let mut coords = vec![0i64; genus.rank()];
    for _ in 0..steps {
        let i = rng.gen_range(0..coords.len());
        coords[i] += if rng.gen_bool(0.5) { 1 } else { -1 };
    }
    HomologyClass::new(genus, coords).expect("rank matches")
}

pub fn nonzero_class<R: Rng + ?Sized>(rng: &mut R, genus: Genus, max_norm: u64) -> HomologyClass {
    assert!(max_norm >= 1);
    loop {
        let m = class(rng, genus, max_norm);
        if !m.is_zero() {
            return m;
        }
    }
}

/// Nonzero rational with `|num|, den ≤ bound`.
pub fn rational<R: Rng + ?Sized>(rng: &mut R, bound: i64) -> BigRational {
    loop {
        let n = rng.gen_range(-bound..=bound);
        if n != 0 {
            let d = rng.gen_range(1..=bound);
            return BigRational::new(BigInt::from(n), BigInt::from(d));
        }
    }
}

/// Nonzero coefficient; the imaginary part is nonzero half the time when
/// `complex` is set.
pub fn coefficient<R: Rng + ?Sized>(rng: &mut R, bound: i64, complex: bool) -> Coeff {
    let re = rational(rng, bound);
    let im = if complex && rng.gen_bool(0.5) {
        rational(rng, bound)
    } else {
        BigRational::zero()
    };
    coeff(re, im)
}

/// Mean-zero vector with up to `max_support` points of `norm1 ≤ max_norm`.
pub fn vector<R: Rng + ?Sized>(
    rng: &mut R,
    genus: Genus,
    max_support: usize,
    max_norm: u64,
    bound: i64,
    complex: bool,
) -> SparseVector {
    let target = rng.gen_range(1..=max_support);
    let mut v = SparseVector::zero(genus);
    let mut attempts = 0;
    while v.support_len() < target && attempts < 20 * max_support {
        attempts += 1;
        let m = nonzero_class(rng, genus, max_norm);
        if v.get(&m).is_none() {
            v.add_term(m, coefficient(rng, bound, complex))
                .expect("nonzero class");
        }
    }
    v
}

/// Word of length `1..=max_len` over the curves of `table`, exponents in
/// `±1..=±max_exp`.
pub fn word<R: Rng + ?Sized>(
    rng: &mut R,
    table: &CurveTable,
    max_len: usize,
    max_exp: i64,
) -> TwistWord {
    let ids: Vec<&str> = table.iter().map(|c| c.id()).collect();
    let len = rng.gen_range(1..=max_len);
    TwistWord::new(
        (0..len)
            .map(|_| {
                let id = *ids.choose(rng).expect("nonempty table");
                let e = rng.gen_range(1..=max_exp) * if rng.gen_bool(0.5) { 1 } else { -1 };
                Letter::new(id, e).expect("nonzero exponent")
            })
            .collect(),
    )
}

/// Torus point with rational turns of denominator up to `max_den`.
pub fn torus_point<R: Rng + ?Sized>(rng: &mut R, genus: Genus, max_den: i64) -> TorusPoint {
    let turns = (0..genus.rank())
        .map(|_| {
            let d = rng.gen_range(1..=max_den);
            BigRational::new(BigInt::from(rng.gen_range(0..d)), BigInt::from(d))
        })
        .collect();
    TorusPoint::from_turns(genus, turns).expect("rank matches")
}
