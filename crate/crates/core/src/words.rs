//! Dehn twist words, their images in `Sp(2g, Z)`, and a self-checking
//! catalog of twist relations.
//!
//! Relations are verified in the symplectic representation only: two words
//! are considered equal when their matrices agree exactly.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{
    apply, intersection, transvect, twist_matrix_pow, Genus, HomologyClass, SymplecticMatrix,
};

/// A simple closed curve, known only through its homology class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawCurve", into = "RawCurve")]
pub struct Curve {
    id: String,
    cls: HomologyClass,
    separating: bool,
}

#[derive(Serialize, Deserialize)]
struct RawCurve {
    id: String,
    cls: HomologyClass,
    #[serde(default)]
    separating: bool,
}

impl TryFrom<RawCurve> for Curve {
    type Error = Error;

    fn try_from(raw: RawCurve) -> Result<Self> {
        Curve::new(raw.id, raw.cls, raw.separating)
    }
}

impl From<Curve> for RawCurve {
    fn from(c: Curve) -> RawCurve {
        RawCurve {
            id: c.id,
            cls: c.cls,
            separating: c.separating,
        }
    }
}

impl Curve {
    pub fn new(id: impl Into<String>, cls: HomologyClass, separating: bool) -> Result<Self> {
        let id = id.into();
        if separating && !cls.is_zero() {
            return Err(Error::SeparatingNonzero(id));
        }
        Ok(Curve {
            id,
            cls,
            separating,
        })
    }

    pub fn nonseparating(id: impl Into<String>, cls: HomologyClass) -> Self {
        Curve {
            id: id.into(),
            cls,
            separating: false,
        }
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn cls(&self) -> &HomologyClass {
        &self.cls
    }

    pub fn is_separating(&self) -> bool {
        self.separating
    }
}

/// Curves indexed by id, in insertion order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Curve>", into = "Vec<Curve>")]
pub struct CurveTable {
    curves: Vec<Curve>,
    index: BTreeMap<String, usize>,
}

impl CurveTable {
    pub fn new(curves: Vec<Curve>) -> Result<Self> {
        let mut index = BTreeMap::new();
        for (i, c) in curves.iter().enumerate() {
            if index.insert(c.id.clone(), i).is_some() {
                return Err(Error::DuplicateCurve(c.id.clone()));
            }
        }
        if let Some(first) = curves.first() {
            let rank = first.cls.coords().len();
            if let Some(bad) = curves.iter().find(|c| c.cls.coords().len() != rank) {
                return Err(Error::GenusMismatch {
                    left: rank / 2,
                    right: bad.cls.coords().len() / 2,
                });
            }
        }
        Ok(CurveTable { curves, index })
    }

    pub fn get(&self, id: &str) -> Result<&Curve> {
        self.index
            .get(id)
            .map(|&i| &self.curves[i])
            .ok_or_else(|| Error::UnresolvedCurve(id.to_string()))
    }

    pub fn contains(&self, id: &str) -> bool {
        self.index.contains_key(id)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Curve> {
        self.curves.iter()
    }

    pub fn len(&self) -> usize {
        self.curves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.curves.is_empty()
    }

    pub fn genus(&self) -> Option<Genus> {
        self.curves.first().map(|c| c.cls.genus())
    }
}

impl TryFrom<Vec<Curve>> for CurveTable {
    type Error = Error;

    fn try_from(curves: Vec<Curve>) -> Result<Self> {
        CurveTable::new(curves)
    }
}

impl From<CurveTable> for Vec<Curve> {
    fn from(t: CurveTable) -> Vec<Curve> {
        t.curves
    }
}

/// One factor `τ_curve^exponent` of a twist word.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "(String, i64)", into = "(String, i64)")]
pub struct Letter {
    curve: String,
    exponent: i64,
}

impl Letter {
    pub fn new(curve: impl Into<String>, exponent: i64) -> Result<Self> {
        let curve = curve.into();
        if exponent == 0 {
            return Err(Error::ZeroExponent(curve));
        }
        Ok(Letter { curve, exponent })
    }

    pub fn curve(&self) -> &str {
        &self.curve
    }

    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    pub fn inverse(&self) -> Letter {
        Letter {
            curve: self.curve.clone(),
            exponent: -self.exponent,
        }
    }
}

impl TryFrom<(String, i64)> for Letter {
    type Error = Error;

    fn try_from((curve, exponent): (String, i64)) -> Result<Self> {
        Letter::new(curve, exponent)
    }
}

impl From<Letter> for (String, i64) {
    fn from(l: Letter) -> (String, i64) {
        (l.curve, l.exponent)
    }
}

/// A product of Dehn twists, read left to right as composition
/// (the rightmost letter acts first).
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TwistWord {
    letters: Vec<Letter>,
}

impl TwistWord {
    pub fn empty() -> Self {
        TwistWord::default()
    }

    pub fn new(letters: Vec<Letter>) -> Self {
        TwistWord { letters }
    }

    /// Builds a word from `(id, exponent)` pairs; panics on a zero exponent.
    pub fn from_pairs(pairs: &[(&str, i64)]) -> Self {
        TwistWord {
            letters: pairs
                .iter()
                .map(|&(c, e)| Letter::new(c, e).expect("nonzero exponent"))
                .collect(),
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> TwistWord {
        TwistWord {
            letters: self.letters.iter().rev().map(Letter::inverse).collect(),
        }
    }

    pub fn concat(&self, other: &TwistWord) -> TwistWord {
        let mut letters = self.letters.clone();
        letters.extend(other.letters.iter().cloned());
        TwistWord { letters }
    }

    pub fn pow(&self, n: usize) -> TwistWord {
        TwistWord {
            letters: (0..n).flat_map(|_| self.letters.iter().cloned()).collect(),
        }
    }

    /// Same word with every exponent split into `±1` letters.
    pub fn expanded(&self) -> TwistWord {
        TwistWord {
            letters: self
                .letters
                .iter()
                .flat_map(|l| {
                    let unit = Letter {
                        curve: l.curve.clone(),
                        exponent: l.exponent.signum(),
                    };
                    std::iter::repeat_n(unit, l.exponent.unsigned_abs() as usize)
                })
                .collect(),
        }
    }

    pub fn curve_ids(&self) -> impl Iterator<Item = &str> {
        self.letters.iter().map(|l| l.curve.as_str())
    }
}

/// Product of the letter matrices in word order.
pub fn word_matrix(w: &TwistWord, curves: &CurveTable, genus: Genus) -> Result<SymplecticMatrix> {
    let mut acc = SymplecticMatrix::identity(genus);
    for l in &w.letters {
        let c = curves.get(&l.curve)?;
        if c.cls.genus() != genus {
            return Err(Error::GenusMismatch {
                left: genus.get(),
                right: c.cls.genus().get(),
            });
        }
        acc = acc.mul(&twist_matrix_pow(&c.cls, l.exponent))?;
    }
    Ok(acc)
}

/// Symplectic-level Torelli test: the word acts trivially on homology.
pub fn is_torelli(w: &TwistWord, curves: &CurveTable, genus: Genus) -> Result<bool> {
    Ok(word_matrix(w, curves, genus)?.is_identity())
}

/// Declared algebraic intersection number between two curves of a relation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeclaredIntersection {
    pub a: String,
    pub b: String,
    pub value: i64,
}

impl DeclaredIntersection {
    pub fn new(a: &str, b: &str, value: i64) -> Self {
        DeclaredIntersection {
            a: a.to_string(),
            b: b.to_string(),
            value,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationInstance {
    pub name: String,
    pub curves: CurveTable,
    pub lhs: TwistWord,
    pub rhs: TwistWord,
    #[serde(default)]
    pub intersections: Vec<DeclaredIntersection>,
}

impl RelationInstance {
    pub fn genus(&self) -> Result<Genus> {
        self.curves
            .genus()
            .ok_or_else(|| Error::Parse(format!("relation {} has no curves", self.name)))
    }

    /// Checks the declared intersections and that every id resolves.
    pub fn check_metadata(&self) -> Result<()> {
        for d in &self.intersections {
            let a = self.curves.get(&d.a)?;
            let b = self.curves.get(&d.b)?;
            let computed = intersection(&a.cls, &b.cls)?;
            if computed != d.value {
                return Err(Error::MetadataMismatch {
                    relation: self.name.clone(),
                    a: d.a.clone(),
                    b: d.b.clone(),
                    declared: d.value,
                    computed,
                });
            }
        }
        for id in self.lhs.curve_ids().chain(self.rhs.curve_ids()) {
            self.curves.get(id)?;
        }
        Ok(())
    }

    pub fn matrices(&self) -> Result<(SymplecticMatrix, SymplecticMatrix)> {
        self.check_metadata()?;
        let g = self.genus()?;
        Ok((
            word_matrix(&self.lhs, &self.curves, g)?,
            word_matrix(&self.rhs, &self.curves, g)?,
        ))
    }
}

/// `Ok(true)` iff both sides have the same matrix. Metadata problems are
/// reported as errors, never as `false`.
pub fn verify_relation(rel: &RelationInstance) -> Result<bool> {
    let (l, r) = rel.matrices()?;
    Ok(l == r)
}

/// Boundary classes `(d, e)` of the chain relation for the chain
/// `a = x_1`, `b = y_1`, `c = x_1 + x_2`, found by bounded search against
/// `(T_a T_b T_c)^4` and frozen here.
pub fn chain_boundary_classes(genus: Genus) -> (HomologyClass, HomologyClass) {
    let x2 = HomologyClass::x(genus, 2);
    (x2.clone(), x2)
}

fn table(curves: Vec<Curve>) -> CurveTable {
    CurveTable::new(curves).expect("catalog curve ids are distinct")
}

fn nonsep(id: &str, cls: HomologyClass) -> Curve {
    Curve::nonseparating(id, cls)
}

fn commuting(name: &str, a: HomologyClass, b: HomologyClass) -> RelationInstance {
    RelationInstance {
        name: name.to_string(),
        curves: table(vec![nonsep("a", a), nonsep("b", b)]),
        lhs: TwistWord::from_pairs(&[("a", 1), ("b", 1)]),
        rhs: TwistWord::from_pairs(&[("b", 1), ("a", 1)]),
        intersections: vec![DeclaredIntersection::new("a", "b", 0)],
    }
}

fn braid(name: &str, a: HomologyClass, b: HomologyClass) -> RelationInstance {
    let i = intersection(&a, &b).expect("same genus");
    RelationInstance {
        name: name.to_string(),
        curves: table(vec![nonsep("a", a), nonsep("b", b)]),
        lhs: TwistWord::from_pairs(&[("a", 1), ("b", 1), ("a", 1)]),
        rhs: TwistWord::from_pairs(&[("b", 1), ("a", 1), ("b", 1)]),
        intersections: vec![DeclaredIntersection::new("a", "b", i)],
    }
}

fn bounding_pair(name: &str, cls: HomologyClass) -> RelationInstance {
    RelationInstance {
        name: name.to_string(),
        curves: table(vec![nonsep("gamma", cls.clone()), nonsep("delta", cls)]),
        lhs: TwistWord::from_pairs(&[("gamma", 1), ("delta", -1)]),
        rhs: TwistWord::empty(),
        intersections: vec![DeclaredIntersection::new("gamma", "delta", 0)],
    }
}

fn conjugation(name: &str, phi: HomologyClass, alpha: HomologyClass) -> RelationInstance {
    let image = transvect(&phi, 1, &alpha).expect("small classes");
    RelationInstance {
        name: name.to_string(),
        curves: table(vec![
            nonsep("phi", phi),
            nonsep("alpha", alpha),
            nonsep("phi_alpha", image),
        ]),
        lhs: TwistWord::from_pairs(&[("phi", 1), ("alpha", 1), ("phi", -1)]),
        rhs: TwistWord::from_pairs(&[("phi_alpha", 1)]),
        intersections: vec![],
    }
}

fn chain(genus: Genus) -> RelationInstance {
    let x1 = HomologyClass::x(genus, 1);
    let y1 = HomologyClass::y(genus, 1);
    let x2 = HomologyClass::x(genus, 2);
    let (d, e) = chain_boundary_classes(genus);
    let ids = ["a", "b", "c", "d", "e"];
    let curves = table(vec![
        nonsep("a", x1.clone()),
        nonsep("b", y1),
        nonsep("c", &x1 + &x2),
        nonsep("d", d),
        nonsep("e", e),
    ]);
    let mut intersections = Vec::new();
    for (i, p) in ids.iter().enumerate() {
        for q in &ids[i + 1..] {
            let v = intersection(curves.get(p).unwrap().cls(), curves.get(q).unwrap().cls())
                .expect("same genus");
            intersections.push(DeclaredIntersection::new(p, q, v));
        }
    }
    RelationInstance {
        name: "chain-x1-y1-x1x2".to_string(),
        curves,
        lhs: TwistWord::from_pairs(&[("a", 1), ("b", 1), ("c", 1)]).pow(4),
        rhs: TwistWord::from_pairs(&[("d", 1), ("e", 1)]),
        intersections,
    }
}

fn lantern(genus: Genus) -> RelationInstance {
    let x1 = HomologyClass::x(genus, 1);
    let x2 = HomologyClass::x(genus, 2);
    let x3 = HomologyClass::x(genus, 3);
    let a0 = &(&x1 + &x2) + &x3;
    let curves = table(vec![
        nonsep("g0", a0),
        nonsep("g1", x1.clone()),
        nonsep("g2", x2.clone()),
        nonsep("g3", x3.clone()),
        nonsep("g12", &x1 + &x2),
        nonsep("g13", &x1 + &x3),
        nonsep("g23", &x2 + &x3),
    ]);
    let ids: Vec<String> = curves.iter().map(|c| c.id().to_string()).collect();
    let mut intersections = Vec::new();
    for (i, p) in ids.iter().enumerate() {
        for q in &ids[i + 1..] {
            intersections.push(DeclaredIntersection::new(p, q, 0));
        }
    }
    RelationInstance {
        name: "lantern-x1-x2-x3".to_string(),
        curves,
        lhs: TwistWord::from_pairs(&[("g0", 1), ("g1", 1), ("g2", 1), ("g3", 1)]),
        rhs: TwistWord::from_pairs(&[("g12", 1), ("g13", 1), ("g23", 1)]),
        intersections,
    }
}

/// The built-in relation catalog: commuting pairs, braid pairs, one chain,
/// one lantern, bounding pairs and conjugation instances.
pub fn builtin_catalog(genus: Genus) -> Vec<RelationInstance> {
    let g = genus;
    let x = |j| HomologyClass::x(g, j);
    let y = |j| HomologyClass::y(g, j);
    vec![
        commuting("commute-x1-x2", x(1), x(2)),
        commuting("commute-x1-y2", x(1), y(2)),
        commuting("commute-y1-x3", y(1), x(3)),
        braid("braid-x1-y1", x(1), y(1)),
        braid("braid-x2-y2", x(2), y(2)),
        braid("braid-y1-x1x2", y(1), &x(1) + &x(2)),
        chain(g),
        lantern(g),
        bounding_pair("bounding-pair-x1", x(1)),
        bounding_pair("bounding-pair-x2y3", &x(2) + &y(3)),
        conjugation("conjugate-y1-by-x1", x(1), y(1)),
        conjugation("conjugate-x2-by-y2", y(2), x(2)),
    ]
}

/// Image of a curve table under a mapping class matrix.
pub fn pushforward(curves: &CurveTable, phi: &SymplecticMatrix) -> Result<CurveTable> {
    let moved = curves
        .iter()
        .map(|c| {
            Ok(Curve {
                id: c.id.clone(),
                cls: apply(phi, &c.cls)?,
                separating: c.separating,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    CurveTable::new(moved)
}
