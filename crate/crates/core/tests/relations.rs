use proptest::prelude::*;

use mcg_cohomology::cohomology::GeneratorSet;
use mcg_cohomology::lattice::{
    apply, intersection, twist_matrix, twist_matrix_pow, Genus, HomologyClass, IntMatrix,
    SymplecticMatrix,
};
use mcg_cohomology::words::{
    builtin_catalog, chain_boundary_classes, pushforward, verify_relation, word_matrix, Curve,
    CurveTable, TwistWord,
};
use mcg_cohomology::Error;
use num_traits::{Signed, ToPrimitive, Zero};

fn g3() -> Genus {
    Genus::new(3).unwrap()
}

/// All classes with `norm1 ≤ r` whose first nonzero coordinate is positive.
fn canonical_classes(genus: Genus, r: i64) -> Vec<HomologyClass> {
    fn rec(prefix: &mut Vec<i64>, left: i64, dim: usize, out: &mut Vec<Vec<i64>>) {
        if prefix.len() == dim {
            out.push(prefix.clone());
            return;
        }
        for v in -left..=left {
            prefix.push(v);
            rec(prefix, left - v.abs(), dim, out);
            prefix.pop();
        }
    }
    let mut all = Vec::new();
    rec(&mut Vec::new(), r, genus.rank(), &mut all);
    all.into_iter()
        .filter(|v| v.iter().find(|&&c| c != 0).is_some_and(|&c| c > 0))
        .map(|v| HomologyClass::new(genus, v).unwrap())
        .collect()
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Classes `e` with `norm1 ≤ r` such that `target = T_e`, found from the
/// first nonzero column of `target - I`.
fn transvection_roots(target: &SymplecticMatrix, r: u64) -> Vec<HomologyClass> {
    let g = target.genus();
    let dim = g.rank();
    let col = (0..dim).find_map(|s| {
        let v: Vec<i64> = (0..dim)
            .map(|row| {
                let delta: num_bigint::BigInt =
                    target.matrix().get(row, s) - if row == s { 1 } else { 0 };
                delta.to_i64().unwrap_or(i64::MAX)
            })
            .collect();
        v.iter().any(|x| *x != 0).then_some(v)
    });
    let Some(col) = col else { return vec![] };
    let d = col.iter().fold(0, |a, &b| gcd(a, b));
    let p = HomologyClass::new(g, col.iter().map(|x| x / d).collect()).unwrap();
    let mut out = Vec::new();
    for k in 1i64.. {
        let e = k * &p;
        if e.norm1() > r {
            break;
        }
        if twist_matrix_pow(&p, k * k) == *target {
            out.push(e);
        }
    }
    out
}

#[test]
fn chain_boundary_classes_found_by_search() {
    let g = g3();
    let a = HomologyClass::x(g, 1);
    let b = HomologyClass::y(g, 1);
    let c = &HomologyClass::x(g, 1) + &HomologyClass::x(g, 2);
    let abc = twist_matrix(&a)
        .mul(&twist_matrix(&b))
        .unwrap()
        .mul(&twist_matrix(&c))
        .unwrap();
    let target = abc.pow(4);

    let mut solutions = Vec::new();
    for d in canonical_classes(g, 6) {
        let rest = twist_matrix(&d).inverse().mul(&target).unwrap();
        for e in transvection_roots(&rest, 6) {
            solutions.push((d.clone(), e));
        }
    }
    assert!(!solutions.is_empty());
    for (d, e) in &solutions {
        assert_eq!(twist_matrix(d).mul(&twist_matrix(e)).unwrap(), target);
    }
    let (d, e) = chain_boundary_classes(g);
    assert!(solutions.contains(&(d.clone(), e.clone())));
    // the two boundary curves are homologous, as expected of a bounding pair
    assert!(solutions.iter().all(|(d, e)| d == e || *d == -e));
    assert_eq!(solutions, vec![(d, e)]);
}

#[test]
fn catalog_contents_and_verification() {
    for g in [3, 4] {
        let g = Genus::new(g).unwrap();
        let cat = builtin_catalog(g);
        let count = |p: &str| cat.iter().filter(|r| r.name.starts_with(p)).count();
        assert!(count("commute") >= 2);
        assert!(count("braid") >= 2);
        assert_eq!(count("chain"), 1);
        assert_eq!(count("lantern"), 1);
        assert_eq!(count("bounding-pair"), 2);
        assert_eq!(count("conjugate"), 2);
        for rel in &cat {
            assert_eq!(verify_relation(rel), Ok(true), "{}", rel.name);
        }
    }
}

#[test]
fn lantern_classes_are_as_declared() {
    let g = g3();
    let lantern = builtin_catalog(g)
        .into_iter()
        .find(|r| r.name.starts_with("lantern"))
        .unwrap();
    let cls = |id: &str| lantern.curves.get(id).unwrap().cls().clone();
    assert_eq!(cls("g0"), &(&cls("g1") + &cls("g2")) + &cls("g3"));
    assert_eq!(cls("g12"), &cls("g1") + &cls("g2"));
    for a in lantern.curves.iter() {
        for b in lantern.curves.iter() {
            assert_eq!(intersection(a.cls(), b.cls()).unwrap(), 0);
        }
    }
}

#[test]
fn bounding_pair_words_act_trivially() {
    let g = g3();
    for rel in builtin_catalog(g)
        .iter()
        .filter(|r| r.name.starts_with("bounding"))
    {
        assert!(word_matrix(&rel.lhs, &rel.curves, g).unwrap().is_identity());
    }
}

#[test]
fn metadata_mismatch_is_distinct_from_failure() {
    let g = g3();
    let mut rel = builtin_catalog(g).remove(0);
    rel.intersections[0].value = 7;
    assert!(matches!(
        verify_relation(&rel),
        Err(Error::MetadataMismatch { .. })
    ));
    let mut rel = builtin_catalog(g).remove(0);
    rel.rhs = TwistWord::from_pairs(&[("a", 1)]);
    assert_eq!(verify_relation(&rel), Ok(false));
}

fn basis_table() -> CurveTable {
    GeneratorSet::basis(g3()).curves().clone()
}

fn arb_word(max_len: usize) -> impl Strategy<Value = TwistWord> {
    let ids: Vec<String> = basis_table().iter().map(|c| c.id().to_string()).collect();
    prop::collection::vec(
        (prop::sample::select(ids), prop_oneof![-3i64..=-1, 1i64..=3]),
        0..=max_len,
    )
    .prop_map(|letters| {
        let pairs: Vec<(&str, i64)> = letters.iter().map(|(c, e)| (c.as_str(), *e)).collect();
        TwistWord::from_pairs(&pairs)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn word_matrix_is_monoid_homomorphism(a in arb_word(6), b in arb_word(6)) {
        let t = basis_table();
        let g = g3();
        prop_assert_eq!(
            word_matrix(&a.concat(&b), &t, g).unwrap(),
            word_matrix(&a, &t, g).unwrap().mul(&word_matrix(&b, &t, g).unwrap()).unwrap()
        );
        prop_assert!(word_matrix(&a.concat(&a.inverse()), &t, g).unwrap().is_identity());
    }

    /// `φ w φ⁻¹` has the matrix of `w` with every class moved by `φ`.
    #[test]
    fn conjugation_moves_curves(phi in arb_word(3), w in arb_word(5)) {
        let t = basis_table();
        let g = g3();
        let phi_m = word_matrix(&phi, &t, g).unwrap();
        let conj = phi.concat(&w).concat(&phi.inverse());
        let moved = pushforward(&t, &phi_m).unwrap();
        prop_assert_eq!(word_matrix(&conj, &t, g).unwrap(), word_matrix(&w, &moved, g).unwrap());
    }

    #[test]
    fn word_matrices_are_symplectic(w in arb_word(10)) {
        let m = word_matrix(&w, &basis_table(), g3()).unwrap();
        prop_assert!(mcg_cohomology::lattice::is_symplectic(m.matrix()).unwrap());
    }
}

#[test]
fn conjugation_instance_by_hand() {
    let g = g3();
    let phi = twist_matrix(&HomologyClass::x(g, 1));
    let alpha = HomologyClass::y(g, 1);
    let image = apply(&phi, &alpha).unwrap();
    assert_eq!(image, &HomologyClass::x(g, 1) + &HomologyClass::y(g, 1));
    let lhs = phi
        .mul(&twist_matrix(&alpha))
        .unwrap()
        .mul(&phi.inverse())
        .unwrap();
    assert_eq!(lhs, twist_matrix(&image));
}

#[test]
fn separating_curve_in_table() {
    let g = g3();
    let t = CurveTable::new(vec![
        Curve::new("sep", HomologyClass::zero(g), true).unwrap(),
        Curve::nonseparating("x1", HomologyClass::x(g, 1)),
    ])
    .unwrap();
    let w = TwistWord::from_pairs(&[("sep", 5), ("x1", 1), ("sep", -2)]);
    assert_eq!(
        word_matrix(&w, &t, g).unwrap(),
        twist_matrix(&HomologyClass::x(g, 1))
    );
    assert!(CurveTable::new(vec![
        Curve::nonseparating("a", HomologyClass::x(g, 1)),
        Curve::nonseparating("a", HomologyClass::y(g, 1)),
    ])
    .is_err());
}

#[test]
fn json_grid_of_word_matrix() {
    let g = g3();
    let t = basis_table();
    let m = word_matrix(&TwistWord::from_pairs(&[("x1", 1), ("y1", 1)]), &t, g).unwrap();
    let grid = m.matrix().to_json_grid();
    let back = IntMatrix::from_json_grid(&grid).unwrap();
    assert_eq!(&back, m.matrix());
    assert!(back.l1_distance(m.matrix()).unwrap().is_zero());
    assert!(!back
        .l1_distance(&IntMatrix::identity(6))
        .unwrap()
        .is_negative());
}
