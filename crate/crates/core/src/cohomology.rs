//! Cocycles on the mapping class group with values in `ℓ²(H')`, given by
//! their values on a set of twist generators.
//!
//! A cocycle satisfies `u(gh) = u(g) + g·u(h)`; coboundaries have the form
//! `g ↦ v - g·v`. Validity of generator data is checked against a relation
//! catalog rather than assumed.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::{Coeff, SqrtRational};
use crate::fourier::{act, inner, within_decay_bound, DecayProfile, Space, SparseVector};
use crate::lattice::{
    choose_increasing_twist, intersection, transvect, twist_matrix, twist_matrix_pow, Genus,
    HomologyClass, Sign, SymplecticMatrix,
};
use crate::words::{Curve, CurveTable, Letter, RelationInstance, TwistWord};

/// Twists on non-separating curves used as generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorSet {
    genus: Genus,
    curves: CurveTable,
}

impl GeneratorSet {
    pub fn new(genus: Genus, curves: Vec<Curve>) -> Result<Self> {
        for c in &curves {
            if c.cls().genus() != genus {
                return Err(Error::GenusMismatch {
                    left: genus.get(),
                    right: c.cls().genus().get(),
                });
            }
            if c.cls().is_zero() || c.is_separating() {
                return Err(Error::ZeroGenerator(c.id().to_string()));
            }
        }
        Ok(GeneratorSet {
            genus,
            curves: CurveTable::new(curves)?,
        })
    }

    /// The `2g` basis curves with ids `x1, y1, ..., xg, yg`.
    pub fn basis(genus: Genus) -> Self {
        Self::new(genus, basis_curves(genus)).expect("basis curves are valid generators")
    }

    /// Basis curves followed by `extra`.
    pub fn basis_with(genus: Genus, extra: Vec<Curve>) -> Result<Self> {
        let mut curves = basis_curves(genus);
        curves.extend(extra);
        Self::new(genus, curves)
    }

    pub fn genus(&self) -> Genus {
        self.genus
    }

    pub fn curves(&self) -> &CurveTable {
        &self.curves
    }

    pub fn get(&self, id: &str) -> Result<&Curve> {
        self.curves
            .get(id)
            .map_err(|_| Error::UnknownGenerator(id.to_string()))
    }

    /// Generator id whose class is `±cls`, preferring an exact match.
    pub fn find_class(&self, cls: &HomologyClass) -> Option<&str> {
        let neg = -cls;
        self.curves
            .iter()
            .find(|c| c.cls() == cls)
            .or_else(|| self.curves.iter().find(|c| *c.cls() == neg))
            .map(|c| c.id())
    }
}

pub fn basis_curves(genus: Genus) -> Vec<Curve> {
    (1..=genus.get())
        .flat_map(|j| {
            [
                Curve::nonseparating(format!("x{j}"), HomologyClass::x(genus, j)),
                Curve::nonseparating(format!("y{j}"), HomologyClass::y(genus, j)),
            ]
        })
        .collect()
}

/// A cocycle recorded by its generator values `u(τ_c)`; missing values are
/// zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cocycle {
    gens: GeneratorSet,
    values: BTreeMap<String, SparseVector>,
}

impl Cocycle {
    pub fn new(gens: GeneratorSet, values: BTreeMap<String, SparseVector>) -> Result<Self> {
        for (id, v) in &values {
            gens.get(id)?;
            if v.genus() != gens.genus {
                return Err(Error::GenusMismatch {
                    left: gens.genus.get(),
                    right: v.genus().get(),
                });
            }
            if v.space() != Space::MeanZero {
                return Err(Error::MeanZeroViolation);
            }
        }
        let values = values.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        Ok(Cocycle { gens, values })
    }

    pub fn zero(gens: GeneratorSet) -> Self {
        Cocycle {
            gens,
            values: BTreeMap::new(),
        }
    }

    pub fn genus(&self) -> Genus {
        self.gens.genus
    }

    pub fn generators(&self) -> &GeneratorSet {
        &self.gens
    }

    /// `u(τ_c)`.
    pub fn value(&self, id: &str) -> Result<SparseVector> {
        self.gens.get(id)?;
        Ok(self
            .values
            .get(id)
            .cloned()
            .unwrap_or_else(|| SparseVector::zero(self.gens.genus)))
    }

    pub fn values(&self) -> &BTreeMap<String, SparseVector> {
        &self.values
    }

    /// Replaces one generator value.
    pub fn with_value(&self, id: &str, v: SparseVector) -> Result<Cocycle> {
        let mut values = self.values.clone();
        values.insert(id.to_string(), v);
        Cocycle::new(self.gens.clone(), values)
    }

    /// `u(τ_c^{±1})`, using `u(g⁻¹) = -g⁻¹ u(g)` for the inverse.
    pub fn unit_value(&self, id: &str, sign: Sign) -> Result<SparseVector> {
        let v = self.value(id)?;
        match sign {
            Sign::Plus => Ok(v),
            Sign::Minus => {
                let cls = self.gens.get(id)?.cls();
                Ok(act(&twist_matrix_pow(cls, -1), &v)?.neg())
            }
        }
    }

    /// One term `w_1 ⋯ w_{i-1} · u(w_i)` per unit letter of the expanded
    /// word; their sum is `u(w)`.
    pub fn extend_terms(&self, w: &TwistWord) -> Result<Vec<SparseVector>> {
        let mut prefix = SymplecticMatrix::identity(self.gens.genus);
        let mut terms = Vec::new();
        for l in w.expanded().letters() {
            let sign = if l.exponent() > 0 {
                Sign::Plus
            } else {
                Sign::Minus
            };
            let value = self.unit_value(l.curve(), sign)?;
            terms.push(act(&prefix, &value)?);
            let cls = self.gens.get(l.curve())?.cls();
            prefix = prefix.mul(&twist_matrix_pow(cls, l.exponent()))?;
        }
        Ok(terms)
    }

    /// `u(w)`, folded left to right with the cocycle identity.
    pub fn extend(&self, w: &TwistWord) -> Result<SparseVector> {
        self.extend_terms(w)?
            .iter()
            .try_fold(SparseVector::zero(self.gens.genus), |acc, t| acc.add(t))
    }

    /// Rewrites a relation in terms of generator ids. A relation curve
    /// resolves to the generator with the same id and class, or else to a
    /// generator with class `±cls`.
    pub fn align(&self, rel: &RelationInstance) -> Result<(TwistWord, TwistWord)> {
        let mut map = BTreeMap::new();
        for c in rel.curves.iter() {
            let target = match self.gens.curves.get(c.id()) {
                Ok(g) if g.cls() == c.cls() => g.id().to_string(),
                _ => self
                    .gens
                    .find_class(c.cls())
                    .ok_or_else(|| Error::UnknownGenerator(c.id().to_string()))?
                    .to_string(),
            };
            map.insert(c.id().to_string(), target);
        }
        let rewrite = |w: &TwistWord| -> Result<TwistWord> {
            w.letters()
                .iter()
                .map(|l| {
                    let id = map
                        .get(l.curve())
                        .ok_or_else(|| Error::UnknownGenerator(l.curve().to_string()))?;
                    Letter::new(id.clone(), l.exponent())
                })
                .collect::<Result<Vec<_>>>()
                .map(TwistWord::new)
        };
        Ok((rewrite(&rel.lhs)?, rewrite(&rel.rhs)?))
    }

    /// Catalog instances whose curves all resolve to generators.
    pub fn applicable_relations<'a>(
        &self,
        catalog: &'a [RelationInstance],
    ) -> Vec<&'a RelationInstance> {
        catalog.iter().filter(|r| self.align(r).is_ok()).collect()
    }
}

/// `‖u(lhs) - u(rhs)‖`; zero for every genuine cocycle.
pub fn relation_residual(u: &Cocycle, rel: &RelationInstance) -> Result<SqrtRational> {
    let (lhs, rhs) = u.align(rel)?;
    Ok(u.extend(&lhs)?.sub(&u.extend(&rhs)?)?.norm())
}

/// The coboundary `τ_c ↦ v - τ_c v`.
pub fn coboundary(v: &SparseVector, gens: &GeneratorSet) -> Result<Cocycle> {
    if v.space() != Space::MeanZero {
        return Err(Error::MeanZeroViolation);
    }
    let values = gens
        .curves
        .iter()
        .map(|c| Ok((c.id().to_string(), v.sub(&act(&twist_matrix(c.cls()), v)?)?)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    Cocycle::new(gens.clone(), values)
}

/// Orthogonal projection onto the vectors fixed by `τ_c`: keeps the support
/// points with `i(c, m) = 0`.
pub fn project_fixed(c: &HomologyClass, v: &SparseVector) -> Result<SparseVector> {
    if c.genus() != v.genus() {
        return Err(Error::GenusMismatch {
            left: c.genus().get(),
            right: v.genus().get(),
        });
    }
    Ok(v.restrict(|m| intersection(c, m) == Ok(0)))
}

/// `s_c = p_c u(τ_c)`.
pub fn s_vector(u: &Cocycle, id: &str) -> Result<SparseVector> {
    let cls = u.gens.get(id)?.cls().clone();
    project_fixed(&cls, &u.value(id)?)
}

/// `p_c u(w)` for a curve class `c` whose twist is expressed by the word `w`
/// over the generators.
pub fn s_vector_for_word(u: &Cocycle, cls: &HomologyClass, w: &TwistWord) -> Result<SparseVector> {
    project_fixed(cls, &u.extend(w)?)
}

/// Two generators declared to form a jointly non-separating pair.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct NonSeparatingPair {
    pub a: String,
    pub b: String,
}

impl NonSeparatingPair {
    pub fn new(a: &str, b: &str) -> Self {
        NonSeparatingPair {
            a: a.to_string(),
            b: b.to_string(),
        }
    }
}

/// `c_{ab} = ⟨s_a, s_b⟩`.
///
/// Joint non-separation is declared, not computed; a curve paired with
/// itself, or with a homologous curve, is rejected.
pub fn c_pairing(u: &Cocycle, pair: &NonSeparatingPair) -> Result<Coeff> {
    let a = u.gens.get(&pair.a)?;
    let b = u.gens.get(&pair.b)?;
    if a.id() == b.id() || a.cls() == b.cls() || *a.cls() == -b.cls() {
        return Err(Error::NotJointlyNonSeparating(
            pair.a.clone(),
            pair.b.clone(),
        ));
    }
    inner(&s_vector(u, &pair.a)?, &s_vector(u, &pair.b)?)
}

/// Decay constants of a solution and of the data it was solved from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecayRow {
    pub k: u32,
    /// `F_k(f) = max |m|^k |f_m|`.
    pub f_decay: SqrtRational,
    /// `G_{k+1}`: the largest `F_{k+1}` over `u(τ_j^{±1})`, basis `j`.
    pub g_next: SqrtRational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveReport {
    pub f: SparseVector,
    /// `max ‖(f - τ^{±1} f) - u(τ^{±1})‖` over all generators and both signs.
    pub residual: SqrtRational,
    pub decay: Vec<DecayRow>,
    rays: RayValues,
}

/// Pass/fail of `|f_m| ≤ G_{k+1} / (k |m|^k)` on the support of `f`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmoothnessRow {
    pub k: u32,
    pub g_next: SqrtRational,
    pub pass: bool,
    /// Support points violating the bound.
    pub violations: Vec<HomologyClass>,
}

pub const DEFAULT_KMAX: u32 = 5;

impl SolveReport {
    pub fn is_exact(&self) -> bool {
        self.residual.is_zero()
    }

    /// Checks the decay bound for `k = 2..=kmax`.
    pub fn smoothness_report(&self, kmax: u32) -> Result<Vec<SmoothnessRow>> {
        if !self.is_exact() {
            return Err(Error::NonzeroResidual);
        }
        Ok((2..=kmax)
            .map(|k| {
                let g_next = self.rays.max_decay(k + 1);
                let violations: Vec<HomologyClass> = self
                    .f
                    .iter()
                    .filter(|(m, c)| !within_decay_bound(c, m, k, &g_next))
                    .map(|(m, _)| m.clone())
                    .collect();
                SmoothnessRow {
                    k,
                    g_next,
                    pass: violations.is_empty(),
                    violations,
                }
            })
            .collect())
    }
}

/// `u(τ_j)` and `u(τ_j⁻¹)` for each basis curve `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
struct RayValues {
    genus: Genus,
    plus: Vec<SparseVector>,
    minus: Vec<SparseVector>,
    profiles: Vec<DecayProfile>,
}

impl RayValues {
    fn collect(u: &Cocycle) -> Result<Self> {
        let g = u.genus();
        let mut plus = Vec::with_capacity(g.rank());
        let mut minus = Vec::with_capacity(g.rank());
        for idx in 0..g.rank() {
            let cls = HomologyClass::basis(g, idx);
            let id = u
                .gens
                .find_class(&cls)
                .ok_or_else(|| Error::MissingBasisGenerator(basis_name(idx)))?
                .to_string();
            plus.push(u.unit_value(&id, Sign::Plus)?);
            minus.push(u.unit_value(&id, Sign::Minus)?);
        }
        let profiles = plus.iter().chain(&minus).map(DecayProfile::new).collect();
        Ok(RayValues {
            genus: g,
            plus,
            minus,
            profiles,
        })
    }

    fn get(&self, idx: usize, sign: Sign) -> &SparseVector {
        match sign {
            Sign::Plus => &self.plus[idx],
            Sign::Minus => &self.minus[idx],
        }
    }

    fn max_decay(&self, k: u32) -> SqrtRational {
        self.profiles
            .iter()
            .map(|p| p.constant(k))
            .max()
            .unwrap_or_else(SqrtRational::zero)
    }
}

fn basis_name(idx: usize) -> String {
    let j = idx / 2 + 1;
    if idx.is_multiple_of(2) {
        format!("x{j}")
    } else {
        format!("y{j}")
    }
}

/// Solves `u = δf` after checking `u` against the applicable relations of
/// `catalog`. A nonzero relation residual is refused; a nonzero output
/// residual is reported in the result.
pub fn solve_coboundary(u: &Cocycle, catalog: &[RelationInstance]) -> Result<SolveReport> {
    for rel in u.applicable_relations(catalog) {
        if !relation_residual(u, rel)?.is_zero() {
            return Err(Error::RelationResidual(rel.name.clone()));
        }
    }
    solve_unchecked(u)
}

/// Telescoping reconstruction of `f` from the basis twist values.
///
/// With `u(τ) = f - τf`, the coefficient of `n` in `u(τ^ε)` is
/// `g^ε_n = f_n - f_{τ^{-ε} n}`. Along a ray on which `|τ^{εr} m|` strictly
/// increases, `f_{τ^{εR} m} - f_m = Σ_{r=1}^R g^ε_{τ^{εr} m}` and
/// `f_{τ^{εR} m} → 0`, so `f_m = -Σ_{r≥1} g^ε_{τ^{εr} m}`. For `ε = -1` the
/// values `g^-` are the coefficients of `u(τ⁻¹) = -τ⁻¹ u(τ)`.
///
/// Only points whose chosen ray meets the support of the matching `u(τ^ε)`
/// can carry a nonzero coefficient. Each such `m` is `τ^{-εr} n` for some `n`
/// in that support with `1 ≤ r < |n|`, which bounds the candidate set.
pub fn solve_unchecked(u: &Cocycle) -> Result<SolveReport> {
    let g = u.genus();
    let rays = RayValues::collect(u)?;

    let mut candidates = BTreeSet::new();
    for idx in 0..g.rank() {
        let c = HomologyClass::basis(g, idx);
        for sign in [Sign::Plus, Sign::Minus] {
            for n in rays.get(idx, sign).support() {
                if intersection(&c, n)? == 0 {
                    continue;
                }
                for r in 1..=n.norm1() as i64 {
                    let m = transvect(&c, -sign.as_i64() * r, n)?;
                    if m.is_zero() {
                        continue;
                    }
                    let t = choose_increasing_twist(&m)?;
                    if t.curve == idx && t.sign == sign {
                        candidates.insert(m);
                    }
                }
            }
        }
    }

    let mut f = SparseVector::zero(g);
    for m in candidates {
        let t = choose_increasing_twist(&m)?;
        let c = t.curve_class(g);
        let values = rays.get(t.curve, t.sign);
        let reach = values.max_norm1();
        let mut sum = Coeff::zero();
        for r in 1.. {
            let p = transvect(&c, t.sign.as_i64() * r, &m)?;
            if p.norm1() > reach {
                break;
            }
            if let Some(v) = values.get(&p) {
                sum += v;
            }
        }
        f.add_term(m, -sum)?;
    }

    let mut residual = SqrtRational::zero();
    for gen in u.gens.curves.iter() {
        for sign in [Sign::Plus, Sign::Minus] {
            let moved = act(&twist_matrix_pow(gen.cls(), sign.as_i64()), &f)?;
            let diff = f.sub(&moved)?.sub(&u.unit_value(gen.id(), sign)?)?;
            residual = residual.max(diff.norm());
        }
    }

    let f_profile = DecayProfile::new(&f);
    let decay = (2..=DEFAULT_KMAX)
        .map(|k| DecayRow {
            k,
            f_decay: f_profile.constant(k),
            g_next: rays.max_decay(k + 1),
        })
        .collect();

    Ok(SolveReport {
        f,
        residual,
        decay,
        rays,
    })
}

impl SolveReport {
    pub fn genus(&self) -> Genus {
        self.rays.genus
    }
}
