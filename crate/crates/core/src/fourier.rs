//! Finitely supported vectors in `ℓ²(H_1)`, i.e. trigonometric polynomials
//! on the character torus `Hom(H_1, U(1)) ≅ U(1)^{2g}`.
//!
//! The basis vector at `m` is the character `ρ ↦ ρ(m)`; mapping classes act
//! by relabeling the support. Coefficients are exact; the only floating
//! point path is evaluation at a torus point.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact::{
    coeff_to_f64, is_zero_coeff, modulus_sq, modulus_sq_parts, Coeff, SqrtRational,
};
use crate::lattice::{apply, Genus, HomologyClass, SymplecticMatrix};

/// Which space a vector lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Space {
    /// Mean-zero functions: the zero class is excluded from the support.
    MeanZero,
    /// All of `L²(M)`, constants included.
    Full,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseVector {
    genus: Genus,
    space: Space,
    coeffs: BTreeMap<HomologyClass, Coeff>,
}

impl SparseVector {
    pub fn zero(genus: Genus) -> Self {
        SparseVector {
            genus,
            space: Space::MeanZero,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn zero_full(genus: Genus) -> Self {
        SparseVector {
            genus,
            space: Space::Full,
            coeffs: BTreeMap::new(),
        }
    }

    /// Unit vector at `m` in the mean-zero space.
    pub fn basis(m: &HomologyClass) -> Result<Self> {
        let mut v = Self::zero(m.genus());
        v.add_term(m.clone(), Coeff::one())?;
        Ok(v)
    }

    /// Unit vector at `m` in the full space.
    pub fn basis_full(m: &HomologyClass) -> Self {
        let mut v = Self::zero_full(m.genus());
        v.add_term(m.clone(), Coeff::one()).expect("full space");
        v
    }

    pub fn from_terms(
        genus: Genus,
        terms: impl IntoIterator<Item = (HomologyClass, Coeff)>,
    ) -> Result<Self> {
        let mut v = Self::zero(genus);
        for (m, c) in terms {
            v.add_term(m, c)?;
        }
        Ok(v)
    }

    pub fn genus(&self) -> Genus {
        self.genus
    }

    pub fn space(&self) -> Space {
        self.space
    }

    /// Adds `c` at `m`, dropping the entry if it cancels to zero.
    pub fn add_term(&mut self, m: HomologyClass, c: Coeff) -> Result<()> {
        if m.genus() != self.genus {
            return Err(Error::GenusMismatch {
                left: self.genus.get(),
                right: m.genus().get(),
            });
        }
        if self.space == Space::MeanZero && m.is_zero() {
            if is_zero_coeff(&c) {
                return Ok(());
            }
            return Err(Error::MeanZeroViolation);
        }
        if is_zero_coeff(&c) {
            return Ok(());
        }
        match self.coeffs.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + c;
                if is_zero_coeff(&sum) {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
        Ok(())
    }

    pub fn get(&self, m: &HomologyClass) -> Option<&Coeff> {
        self.coeffs.get(m)
    }

    /// Support points and coefficients in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = (&HomologyClass, &Coeff)> {
        self.coeffs.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &HomologyClass> {
        self.coeffs.keys()
    }

    pub fn support_len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn max_norm1(&self) -> u64 {
        self.coeffs
            .keys()
            .map(HomologyClass::norm1)
            .max()
            .unwrap_or(0)
    }

    fn check_compatible(&self, other: &SparseVector) -> Result<()> {
        if self.genus != other.genus {
            return Err(Error::GenusMismatch {
                left: self.genus.get(),
                right: other.genus.get(),
            });
        }
        Ok(())
    }

    fn joined_space(&self, other: &SparseVector) -> Space {
        if self.space == Space::Full || other.space == Space::Full {
            Space::Full
        } else {
            Space::MeanZero
        }
    }

    pub fn add(&self, other: &SparseVector) -> Result<SparseVector> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        out.space = self.joined_space(other);
        for (m, c) in &other.coeffs {
            out.add_term(m.clone(), c.clone())?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &SparseVector) -> Result<SparseVector> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> SparseVector {
        SparseVector {
            genus: self.genus,
            space: self.space,
            coeffs: self.coeffs.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, s: &Coeff) -> SparseVector {
        if is_zero_coeff(s) {
            return SparseVector {
                coeffs: BTreeMap::new(),
                ..self.clone()
            };
        }
        SparseVector {
            genus: self.genus,
            space: self.space,
            coeffs: self
                .coeffs
                .iter()
                .map(|(m, c)| (m.clone(), c * s))
                .collect(),
        }
    }

    /// Keeps the entries whose support point satisfies `keep`.
    pub fn restrict(&self, mut keep: impl FnMut(&HomologyClass) -> bool) -> SparseVector {
        SparseVector {
            genus: self.genus,
            space: self.space,
            coeffs: self
                .coeffs
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// `‖v‖²`, exact.
    pub fn norm_sq(&self) -> BigRational {
        self.coeffs.values().map(modulus_sq).sum()
    }

    pub fn norm(&self) -> SqrtRational {
        SqrtRational::from_square(self.norm_sq())
    }
}

/// Relabels every support point `m` to `M m`.
pub fn act(m: &SymplecticMatrix, v: &SparseVector) -> Result<SparseVector> {
    if m.genus() != v.genus {
        return Err(Error::DimensionMismatch {
            left: m.matrix().dim(),
            right: v.genus.rank(),
        });
    }
    let coeffs = v
        .coeffs
        .iter()
        .map(|(p, c)| Ok((apply(m, p)?, c.clone())))
        .collect::<Result<BTreeMap<_, _>>>()?;
    Ok(SparseVector {
        genus: v.genus,
        space: v.space,
        coeffs,
    })
}

/// `Σ_m v_m conj(w_m)`: linear in the first slot.
pub fn inner(v: &SparseVector, w: &SparseVector) -> Result<Coeff> {
    v.check_compatible(w)?;
    let (small, large, swap) = if v.coeffs.len() <= w.coeffs.len() {
        (v, w, false)
    } else {
        (w, v, true)
    };
    let mut acc = Coeff::zero();
    for (m, a) in &small.coeffs {
        if let Some(b) = large.coeffs.get(m) {
            let (x, y) = if swap { (b, a) } else { (a, b) };
            acc += x * y.conj();
        }
    }
    Ok(acc)
}

/// A character `ρ`, stored by its values on the basis
/// `(ρ(x_1), ρ(y_1), ..., ρ(x_g), ρ(y_g))`, each written as `exp(2πi t)`
/// with `t` an exact rational number of turns in `[0, 1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorusPoint {
    turns: Vec<BigRational>,
}

fn reduce_turn(t: BigRational) -> BigRational {
    let f = t.floor();
    t - f
}

impl TorusPoint {
    pub fn from_turns(genus: Genus, turns: Vec<BigRational>) -> Result<Self> {
        if turns.len() != genus.rank() {
            return Err(Error::DimensionMismatch {
                left: turns.len(),
                right: genus.rank(),
            });
        }
        Ok(TorusPoint {
            turns: turns.into_iter().map(reduce_turn).collect(),
        })
    }

    /// From angles in radians; each angle is captured exactly as the
    /// rational value of its `f64` representation divided by `2π`.
    pub fn from_angles(genus: Genus, angles: &[f64]) -> Result<Self> {
        let turns = angles
            .iter()
            .map(|a| {
                BigRational::from_f64(a / TAU)
                    .ok_or_else(|| Error::Parse(format!("non-finite angle {a}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_turns(genus, turns)
    }

    pub fn genus(&self) -> Genus {
        Genus::new(self.turns.len() / 2).expect("constructed with a valid genus")
    }

    pub fn turns(&self) -> &[BigRational] {
        &self.turns
    }

    /// `ρ(m)` as the exact phase `⟨m, t⟩ mod 1`.
    pub fn phase(&self, m: &HomologyClass) -> BigRational {
        let t: BigRational = m
            .coords()
            .iter()
            .zip(&self.turns)
            .filter(|(a, _)| **a != 0)
            .map(|(a, t)| t * BigRational::from_integer((*a).into()))
            .sum();
        reduce_turn(t)
    }

    /// `ρ(m)` as a unit complex number.
    pub fn character(&self, m: &HomologyClass) -> Complex<f64> {
        let p = self.phase(m).to_f64().unwrap_or(f64::NAN);
        Complex::from_polar(1.0, TAU * p)
    }

    /// Values `ρ(x_1), ρ(y_1), ...` as unit complex numbers.
    pub fn values(&self) -> Vec<Complex<f64>> {
        self.turns
            .iter()
            .map(|t| Complex::from_polar(1.0, TAU * t.to_f64().unwrap_or(f64::NAN)))
            .collect()
    }
}

/// `Σ_m v_m ρ(m)`.
pub fn evaluate(v: &SparseVector, rho: &TorusPoint) -> Result<Complex<f64>> {
    if rho.turns.len() != v.genus.rank() {
        return Err(Error::GenusMismatch {
            left: v.genus.get(),
            right: rho.turns.len() / 2,
        });
    }
    Ok(v.coeffs
        .iter()
        .map(|(m, c)| coeff_to_f64(c) * rho.character(m))
        .sum())
}

/// `(M·ρ)(m) = ρ(M⁻¹ m)`.
pub fn torus_action(m: &SymplecticMatrix, rho: &TorusPoint) -> Result<TorusPoint> {
    let dim = m.matrix().dim();
    if dim != rho.turns.len() {
        return Err(Error::DimensionMismatch {
            left: dim,
            right: rho.turns.len(),
        });
    }
    let inv = m.inverse();
    let turns = (0..dim)
        .map(|k| {
            (0..dim)
                .map(|l| &rho.turns[l] * BigRational::from_integer(inv.matrix().get(l, k).clone()))
                .sum::<BigRational>()
        })
        .map(reduce_turn)
        .collect();
    Ok(TorusPoint { turns })
}

/// Average of `evaluate(v, ·)` over the uniform grid `{(t_1/N, ..., t_{2g}/N)}`.
///
/// The grid sum of a monomial factors over coordinates, so each support point
/// costs `2g` one-dimensional sums of `N` roots of unity. Requires
/// `N > 2 max|coordinate|` so no nonzero frequency aliases onto zero.
pub fn grid_mean(v: &SparseVector, n: u64) -> Result<Complex<f64>> {
    let needed = 2 * v
        .coeffs
        .keys()
        .map(HomologyClass::max_abs)
        .max()
        .unwrap_or(0);
    if n <= needed {
        return Err(Error::Aliasing { n, needed });
    }
    let nf = n as f64;
    let axis_mean = |a: i64| -> Complex<f64> {
        let s: Complex<f64> = (0..n)
            .map(|t| {
                let p = (a as i128 * t as i128).rem_euclid(n as i128) as f64 / nf;
                Complex::from_polar(1.0, TAU * p)
            })
            .sum();
        s / nf
    };
    let mut cache: BTreeMap<i64, Complex<f64>> = BTreeMap::new();
    let mut total = Complex::new(0.0, 0.0);
    for (m, c) in &v.coeffs {
        let mut term = coeff_to_f64(c);
        for &a in m.coords() {
            let f = *cache.entry(a).or_insert_with(|| axis_mean(a));
            term *= f;
        }
        total += term;
    }
    Ok(total)
}

/// `F_k = max_m |m|^k |f_m|`, the least constant bounding the weighted
/// coefficients on the support (zero for the empty vector).
pub fn decay_constant(v: &SparseVector, k: u32) -> SqrtRational {
    DecayProfile::new(v).constant(k)
}

/// Support norms and squared moduli of a vector, kept for evaluating
/// `F_k` at several `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecayProfile {
    /// `(|m|, num, den)` with `|f_m|² = num / den`, unreduced.
    points: Vec<(u64, BigInt, BigInt)>,
}

impl DecayProfile {
    pub fn new(v: &SparseVector) -> Self {
        let points = v
            .coeffs
            .iter()
            .map(|(m, c)| {
                let (num, den) = modulus_sq_parts(c);
                (m.norm1(), num, den)
            })
            .collect();
        DecayProfile { points }
    }

    pub fn constant(&self, k: u32) -> SqrtRational {
        let mut best: Option<(BigInt, &BigInt)> = None;
        for (w, num, den) in &self.points {
            let cand = BigInt::from(*w).pow(2 * k) * num;
            let better = match &best {
                None => true,
                Some((bn, bd)) => &cand * *bd > bn * den,
            };
            if better {
                best = Some((cand, den));
            }
        }
        match best {
            None => SqrtRational::zero(),
            Some((n, d)) => SqrtRational::from_square(BigRational::new(n, d.clone())),
        }
    }
}

/// `|c|`, exact.
pub fn modulus(c: &Coeff) -> SqrtRational {
    SqrtRational::from_square(modulus_sq(c))
}

/// Whether `|c| ≤ bound / (k |m|^k)` holds, compared exactly through squares.
pub fn within_decay_bound(c: &Coeff, m: &HomologyClass, k: u32, bound: &SqrtRational) -> bool {
    let (num, den) = modulus_sq_parts(c);
    let lhs = num * BigInt::from(k).pow(2) * BigInt::from(m.norm1()).pow(2 * k);
    lhs * bound.square().denom() <= bound.square().numer() * den
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{coeff, rational, real};
    use crate::lattice::twist_matrix;

    fn g3() -> Genus {
        Genus::new(3).unwrap()
    }

    fn cls(v: &[i64]) -> HomologyClass {
        HomologyClass::new(g3(), v.to_vec()).unwrap()
    }

    fn i_unit() -> Coeff {
        coeff(rational(0, 1), rational(1, 1))
    }

    #[test]
    fn zero_class_rejected_in_mean_zero_space() {
        let z = HomologyClass::zero(g3());
        assert_eq!(SparseVector::basis(&z), Err(Error::MeanZeroViolation));
        assert_eq!(SparseVector::basis_full(&z).support_len(), 1);
    }

    #[test]
    fn cancellation_removes_entries() {
        let m = cls(&[1, 0, 0, 0, 0, 0]);
        let mut v = SparseVector::basis(&m).unwrap();
        v.add_term(m.clone(), real(rational(-1, 1))).unwrap();
        assert!(v.is_zero());
        v.add_term(m, Coeff::zero()).unwrap();
        assert!(v.is_zero());
    }

    #[test]
    fn act_examples() {
        let g = g3();
        let y1 = HomologyClass::y(g, 1);
        let v = SparseVector::basis(&y1).unwrap();
        assert_eq!(act(&SymplecticMatrix::identity(g), &v).unwrap(), v);
        let moved = act(&twist_matrix(&HomologyClass::x(g, 1)), &v).unwrap();
        assert_eq!(
            moved,
            SparseVector::basis(&cls(&[1, 1, 0, 0, 0, 0])).unwrap()
        );
    }

    #[test]
    fn inner_examples() {
        let m = cls(&[1, 0, 2, 0, 0, 0]);
        let n = cls(&[0, -1, 0, 0, 3, 0]);
        let bm = SparseVector::basis(&m).unwrap();
        let bn = SparseVector::basis(&n).unwrap();
        assert_eq!(inner(&bm, &bm).unwrap(), Coeff::one());
        assert_eq!(inner(&bm, &bn).unwrap(), Coeff::zero());
        // ⟨2m̃ + i ñ, ñ⟩ = i
        let v = bm
            .scale(&real(rational(2, 1)))
            .add(&bn.scale(&i_unit()))
            .unwrap();
        assert_eq!(inner(&v, &bn).unwrap(), i_unit());
        // conjugate-linear in the second slot
        assert_eq!(inner(&bn, &v).unwrap(), -i_unit());
    }

    #[test]
    fn evaluate_examples() {
        let g = g3();
        let rho = TorusPoint::from_turns(
            g,
            vec![
                rational(1, 8),
                rational(1, 3),
                rational(2, 5),
                rational(0, 1),
                rational(5, 7),
                rational(1, 2),
            ],
        )
        .unwrap();
        let x1 = HomologyClass::x(g, 1);
        let z1 = rho.values()[0];
        let got = evaluate(&SparseVector::basis(&x1).unwrap(), &rho).unwrap();
        assert!((got - z1).norm() < 1e-12);

        let one = evaluate(&SparseVector::basis_full(&HomologyClass::zero(g)), &rho).unwrap();
        assert!((one - Complex::new(1.0, 0.0)).norm() < 1e-12);

        // m̃ + (−m)~ = 2 cos(2π⟨m, t⟩), summed directly
        let m = cls(&[1, -2, 0, 3, 1, 0]);
        let v = SparseVector::basis(&m)
            .unwrap()
            .add(&SparseVector::basis(&-&m).unwrap())
            .unwrap();
        let turns: f64 = [1.0 / 8.0, -2.0 / 3.0, 0.0, 0.0, 5.0 / 7.0, 0.0]
            .iter()
            .sum();
        let expected = 2.0 * (TAU * turns).cos();
        let got = evaluate(&v, &rho).unwrap();
        assert!((got.re - expected).abs() < 1e-12 && got.im.abs() < 1e-12);
    }

    #[test]
    fn torus_action_law() {
        let g = g3();
        let rho = TorusPoint::from_angles(g, &[0.3, 1.1, -2.0, 0.7, 3.0, 0.01]).unwrap();
        assert_eq!(
            torus_action(&SymplecticMatrix::identity(g), &rho).unwrap(),
            rho
        );
        let a = twist_matrix(&cls(&[1, 1, 0, 0, 0, 0]));
        let b = twist_matrix(&cls(&[0, 1, -1, 0, 0, 2]));
        let ab = a.mul(&b).unwrap();
        assert_eq!(
            torus_action(&ab, &rho).unwrap(),
            torus_action(&a, &torus_action(&b, &rho).unwrap()).unwrap()
        );
    }

    #[test]
    fn grid_mean_examples() {
        let g = g3();
        let v = SparseVector::basis(&cls(&[2, -1, 0, 0, 0, 3])).unwrap();
        assert!(grid_mean(&v, 7).unwrap().norm() < 1e-9);
        let one = SparseVector::basis_full(&HomologyClass::zero(g));
        assert!((grid_mean(&one, 1).unwrap() - Complex::new(1.0, 0.0)).norm() < 1e-12);
        let x1 = SparseVector::basis(&HomologyClass::x(g, 1)).unwrap();
        assert_eq!(grid_mean(&x1, 1), Err(Error::Aliasing { n: 1, needed: 2 }));
        assert_eq!(grid_mean(&x1, 2), Err(Error::Aliasing { n: 2, needed: 2 }));
        assert!(grid_mean(&x1, 3).is_ok());
    }

    #[test]
    fn decay_constant_examples() {
        let g = g3();
        assert!(decay_constant(&SparseVector::zero(g), 4).is_zero());
        let m = cls(&[1, 0, -1, 0, 1, 0]);
        let v = SparseVector::from_terms(g, [(m, real(rational(1, 2)))]).unwrap();
        assert_eq!(decay_constant(&v, 2).as_rational(), Some(rational(9, 2)));
        let w = v
            .add(
                &SparseVector::from_terms(
                    g,
                    [(
                        cls(&[0, 4, 0, 0, 0, 0]),
                        coeff(rational(0, 1), rational(-3, 4)),
                    )],
                )
                .unwrap(),
            )
            .unwrap();
        assert_eq!(decay_constant(&w, 0).as_rational(), Some(rational(3, 4)));
    }

    #[test]
    fn decay_bound_comparison() {
        let m = cls(&[2, 0, 0, 0, 0, 0]);
        let c = real(rational(1, 16));
        // |c| k |m|^k = 1/16 · 2 · 4 = 1/2
        assert!(within_decay_bound(
            &c,
            &m,
            2,
            &SqrtRational::from_rational(&rational(1, 2))
        ));
        assert!(!within_decay_bound(
            &c,
            &m,
            2,
            &SqrtRational::from_rational(&rational(49, 100))
        ));
    }
}
