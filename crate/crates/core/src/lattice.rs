//! The homology lattice `H_1(Σ; Z) ≅ Z^{2g}` with its intersection pairing,
//! the ℓ¹ norm and the transvections by which Dehn twists act.
//!
//! Coordinates are interleaved as `(a_1, b_1, ..., a_g, b_g)`, where `a_j`
//! is the coefficient of `x_j` and `b_j` the coefficient of `y_j`. The
//! pairing is normalized by `i(x_j, y_j) = 1`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Genus of the ambient surface. Always at least 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "usize", into = "usize")]
pub struct Genus(usize);

impl Genus {
    pub const MIN: usize = 3;

    pub fn new(g: usize) -> Result<Self> {
        if g < Self::MIN {
            return Err(Error::GenusTooSmall(g));
        }
        Ok(Genus(g))
    }

    pub fn get(self) -> usize {
        self.0
    }

    /// Rank of the homology lattice, `2g`.
    pub fn rank(self) -> usize {
        2 * self.0
    }
}

impl TryFrom<usize> for Genus {
    type Error = Error;

    fn try_from(g: usize) -> Result<Self> {
        Genus::new(g)
    }
}

impl From<Genus> for usize {
    fn from(g: Genus) -> usize {
        g.0
    }
}

impl fmt::Display for Genus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An element of `H_1(Σ; Z)` in the fixed symplectic basis.
///
/// Ordering is lexicographic on the coordinate vector, which is what every
/// report uses to sort support points.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct HomologyClass {
    coords: Vec<i64>,
}

impl HomologyClass {
    pub fn new(genus: Genus, coords: Vec<i64>) -> Result<Self> {
        if coords.len() != genus.rank() {
            return Err(Error::DimensionMismatch {
                left: coords.len(),
                right: genus.rank(),
            });
        }
        Ok(HomologyClass { coords })
    }

    pub fn zero(genus: Genus) -> Self {
        HomologyClass {
            coords: vec![0; genus.rank()],
        }
    }

    /// The `idx`-th basis vector in interleaved order (`0 -> x_1`, `1 -> y_1`, ...).
    pub fn basis(genus: Genus, idx: usize) -> Self {
        assert!(idx < genus.rank(), "basis index {idx} out of range");
        let mut coords = vec![0; genus.rank()];
        coords[idx] = 1;
        HomologyClass { coords }
    }

    /// `x_j`, with `j` counted from 1.
    pub fn x(genus: Genus, j: usize) -> Self {
        assert!(j >= 1 && j <= genus.get(), "x_{j} out of range");
        Self::basis(genus, 2 * (j - 1))
    }

    /// `y_j`, with `j` counted from 1.
    pub fn y(genus: Genus, j: usize) -> Self {
        assert!(j >= 1 && j <= genus.get(), "y_{j} out of range");
        Self::basis(genus, 2 * (j - 1) + 1)
    }

    pub fn genus(&self) -> Genus {
        Genus(self.coords.len() / 2)
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    /// ℓ¹ norm `|a_1| + |b_1| + ... + |a_g| + |b_g|`.
    pub fn norm1(&self) -> u64 {
        self.coords.iter().map(|c| c.unsigned_abs()).sum()
    }

    /// Largest coordinate magnitude.
    pub fn max_abs(&self) -> u64 {
        self.coords
            .iter()
            .map(|c| c.unsigned_abs())
            .max()
            .unwrap_or(0)
    }

    fn check_same_genus(&self, other: &HomologyClass) -> Result<()> {
        if self.coords.len() != other.coords.len() {
            return Err(Error::GenusMismatch {
                left: self.coords.len() / 2,
                right: other.coords.len() / 2,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &HomologyClass) -> Result<HomologyClass> {
        self.check_same_genus(other)?;
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a.checked_add(*b).ok_or(Error::Overflow))
            .collect::<Result<Vec<_>>>()?;
        Ok(HomologyClass { coords })
    }

    pub fn checked_scale(&self, k: i64) -> Result<HomologyClass> {
        let coords = self
            .coords
            .iter()
            .map(|a| a.checked_mul(k).ok_or(Error::Overflow))
            .collect::<Result<Vec<_>>>()?;
        Ok(HomologyClass { coords })
    }
}

impl TryFrom<Vec<i64>> for HomologyClass {
    type Error = Error;

    fn try_from(coords: Vec<i64>) -> Result<Self> {
        if coords.len() < 2 * Genus::MIN || !coords.len().is_multiple_of(2) {
            return Err(Error::BadClassLength(coords.len()));
        }
        Ok(HomologyClass { coords })
    }
}

impl From<HomologyClass> for Vec<i64> {
    fn from(m: HomologyClass) -> Vec<i64> {
        m.coords
    }
}

/// Whitespace-separated `a1 b1 ... ag bg`.
impl fmt::Display for HomologyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for c in &self.coords {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for HomologyClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let coords = s
            .split_whitespace()
            .map(|t| {
                t.parse::<i64>()
                    .map_err(|e| Error::Parse(format!("bad coordinate {t:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        HomologyClass::try_from(coords)
    }
}

impl Add for &HomologyClass {
    type Output = HomologyClass;

    fn add(self, rhs: &HomologyClass) -> HomologyClass {
        self.checked_add(rhs).expect("homology class addition")
    }
}

impl Sub for &HomologyClass {
    type Output = HomologyClass;

    fn sub(self, rhs: &HomologyClass) -> HomologyClass {
        self.checked_add(&-rhs).expect("homology class subtraction")
    }
}

impl Neg for &HomologyClass {
    type Output = HomologyClass;

    fn neg(self) -> HomologyClass {
        self.checked_scale(-1).expect("homology class negation")
    }
}

impl Mul<&HomologyClass> for i64 {
    type Output = HomologyClass;

    fn mul(self, rhs: &HomologyClass) -> HomologyClass {
        rhs.checked_scale(self).expect("homology class scaling")
    }
}

/// Algebraic intersection number `i(m, n)`.
pub fn intersection(m: &HomologyClass, n: &HomologyClass) -> Result<i64> {
    m.check_same_genus(n)?;
    let mut acc: i128 = 0;
    for (p, q) in m.coords.chunks_exact(2).zip(n.coords.chunks_exact(2)) {
        acc += p[0] as i128 * q[1] as i128 - p[1] as i128 * q[0] as i128;
    }
    i64::try_from(acc).map_err(|_| Error::Overflow)
}

/// `τ_c^n m = m + n i(c, m) c`.
pub fn transvect(c: &HomologyClass, n: i64, m: &HomologyClass) -> Result<HomologyClass> {
    let k = intersection(c, m)?;
    if k == 0 || n == 0 {
        return Ok(m.clone());
    }
    let factor = n.checked_mul(k).ok_or(Error::Overflow)?;
    m.checked_add(&c.checked_scale(factor)?)
}

/// Square integer matrix of even dimension with arbitrary precision entries,
/// stored row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    dim: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let dim = rows.len();
        let entries: Vec<BigInt> = rows
            .iter()
            .flat_map(|r| r.iter().map(|&v| BigInt::from(v)))
            .collect();
        if let Some(bad) = rows.iter().find(|r| r.len() != dim) {
            return Err(Error::BadMatrixShape {
                rows: dim,
                cols: bad.len(),
            });
        }
        Self::from_entries(dim, entries)
    }

    pub fn from_entries(dim: usize, entries: Vec<BigInt>) -> Result<Self> {
        if dim == 0 || !dim.is_multiple_of(2) || entries.len() != dim * dim {
            return Err(Error::BadMatrixShape {
                rows: dim,
                cols: entries.len().checked_div(dim).unwrap_or(0),
            });
        }
        Ok(IntMatrix { dim, entries })
    }

    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![BigInt::zero(); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = BigInt::one();
        }
        IntMatrix { dim, entries }
    }

    pub fn diagonal(diag: &[i64]) -> Result<Self> {
        let dim = diag.len();
        let mut m = Self::identity(dim);
        for (i, d) in diag.iter().enumerate() {
            m.entries[i * dim + i] = BigInt::from(*d);
        }
        Self::from_entries(dim, m.entries)
    }

    /// The standard form with `J[2j][2j+1] = 1`, `J[2j+1][2j] = -1`.
    pub fn standard_form(dim: usize) -> Self {
        let mut entries = vec![BigInt::zero(); dim * dim];
        for j in 0..dim / 2 {
            entries[(2 * j) * dim + 2 * j + 1] = BigInt::one();
            entries[(2 * j + 1) * dim + 2 * j] = -BigInt::one();
        }
        IntMatrix { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> &BigInt {
        &self.entries[row * self.dim + col]
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.dim)
    }

    pub fn transpose(&self) -> Self {
        let n = self.dim;
        let mut entries = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                entries.push(self.get(c, r).clone());
            }
        }
        IntMatrix { dim: n, entries }
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        let n = self.dim;
        let mut entries = vec![BigInt::zero(); n * n];
        for r in 0..n {
            for k in 0..n {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..n {
                    let b = other.get(k, c);
                    if !b.is_zero() {
                        entries[r * n + c] += a * b;
                    }
                }
            }
        }
        Ok(IntMatrix { dim: n, entries })
    }

    /// Sum of absolute entry differences; zero iff the matrices agree.
    pub fn l1_distance(&self, other: &IntMatrix) -> Result<BigInt> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).abs())
            .sum())
    }

    /// Row-major grid; entries that fit in `i64` are numbers, larger ones are
    /// decimal strings.
    pub fn to_json_grid(&self) -> serde_json::Value {
        let rows = (0..self.dim)
            .map(|r| {
                let row = (0..self.dim)
                    .map(|c| {
                        let v = self.get(r, c);
                        match v.to_i64() {
                            Some(x) => serde_json::Value::from(x),
                            None => serde_json::Value::from(v.to_string()),
                        }
                    })
                    .collect();
                serde_json::Value::Array(row)
            })
            .collect();
        serde_json::Value::Array(rows)
    }

    pub fn from_json_grid(value: &serde_json::Value) -> Result<Self> {
        let rows = value
            .as_array()
            .ok_or_else(|| Error::Parse("matrix must be an array of rows".into()))?;
        let dim = rows.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            let row = row
                .as_array()
                .ok_or_else(|| Error::Parse("matrix row must be an array".into()))?;
            if row.len() != dim {
                return Err(Error::BadMatrixShape {
                    rows: dim,
                    cols: row.len(),
                });
            }
            for v in row {
                let entry = match v {
                    serde_json::Value::Number(n) => n
                        .as_i64()
                        .map(BigInt::from)
                        .ok_or_else(|| Error::Parse(format!("non-integer entry {n}")))?,
                    serde_json::Value::String(s) => s
                        .parse::<BigInt>()
                        .map_err(|e| Error::Parse(format!("bad entry {s:?}: {e}")))?,
                    other => return Err(Error::Parse(format!("bad entry {other}"))),
                };
                entries.push(entry);
            }
        }
        Self::from_entries(dim, entries)
    }
}

/// Exact check of `Mᵀ J M = J`.
pub fn is_symplectic(m: &IntMatrix) -> Result<bool> {
    let j = IntMatrix::standard_form(m.dim);
    Ok(m.transpose().mul(&j)?.mul(m)? == j)
}

/// An integer matrix preserving the intersection form, i.e. an element of
/// `Sp(2g, Z)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SymplecticMatrix(IntMatrix);

impl SymplecticMatrix {
    pub fn new(m: IntMatrix) -> Result<Self> {
        if !is_symplectic(&m)? {
            return Err(Error::NotSymplectic);
        }
        Ok(SymplecticMatrix(m))
    }

    pub fn identity(genus: Genus) -> Self {
        SymplecticMatrix(IntMatrix::identity(genus.rank()))
    }

    pub fn genus(&self) -> Genus {
        Genus(self.0.dim / 2)
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> IntMatrix {
        self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_identity()
    }

    pub fn mul(&self, other: &SymplecticMatrix) -> Result<SymplecticMatrix> {
        Ok(SymplecticMatrix(self.0.mul(&other.0)?))
    }

    /// `M⁻¹ = -J Mᵀ J`.
    pub fn inverse(&self) -> SymplecticMatrix {
        let j = IntMatrix::standard_form(self.0.dim);
        let mut inv = j
            .mul(&self.0.transpose())
            .and_then(|t| t.mul(&j))
            .expect("same dimension");
        for e in &mut inv.entries {
            *e = -std::mem::take(e);
        }
        SymplecticMatrix(inv)
    }

    pub fn pow(&self, n: i64) -> SymplecticMatrix {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut acc = SymplecticMatrix(IntMatrix::identity(self.0.dim));
        let mut sq = base;
        let mut e = n.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&sq).expect("same dimension");
            }
            e >>= 1;
            if e > 0 {
                sq = sq.mul(&sq).expect("same dimension");
            }
        }
        acc
    }
}

/// Matrix of the Dehn twist `τ_c`, acting as `m ↦ m + i(c, m) c`.
pub fn twist_matrix(c: &HomologyClass) -> SymplecticMatrix {
    twist_matrix_pow(c, 1)
}

/// Matrix of `τ_c^n`, acting as `m ↦ m + n i(c, m) c`.
pub fn twist_matrix_pow(c: &HomologyClass, n: i64) -> SymplecticMatrix {
    let dim = c.coords.len();
    let mut m = IntMatrix::identity(dim);
    // column s is τ_c^n e_s - e_s = n i(c, e_s) c, and i(c, e_s) is ±c at the partner slot
    for s in 0..dim {
        let pairing = if s % 2 == 0 {
            -c.coords[s + 1]
        } else {
            c.coords[s - 1]
        };
        if pairing == 0 {
            continue;
        }
        let factor = BigInt::from(n) * BigInt::from(pairing);
        for (r, cr) in c.coords.iter().enumerate() {
            if *cr != 0 {
                m.entries[r * dim + s] += &factor * BigInt::from(*cr);
            }
        }
    }
    SymplecticMatrix(m)
}

/// Standard matrix-vector action.
pub fn apply(m: &SymplecticMatrix, v: &HomologyClass) -> Result<HomologyClass> {
    apply_int(m.matrix(), v)
}

pub fn apply_int(m: &IntMatrix, v: &HomologyClass) -> Result<HomologyClass> {
    if m.dim != v.coords.len() {
        return Err(Error::DimensionMismatch {
            left: m.dim,
            right: v.coords.len(),
        });
    }
    let n = m.dim;
    let coords = (0..n)
        .map(|r| row_dot_small(m, r, &v.coords).map_or_else(|| row_dot_big(m, r, &v.coords), Ok))
        .collect::<Result<Vec<_>>>()?;
    Ok(HomologyClass { coords })
}

fn row_dot_small(m: &IntMatrix, r: usize, v: &[i64]) -> Option<i64> {
    let mut acc: i128 = 0;
    for (c, &x) in v.iter().enumerate() {
        if x != 0 {
            let e = m.get(r, c).to_i64()?;
            acc = acc.checked_add(e as i128 * x as i128)?;
        }
    }
    i64::try_from(acc).ok()
}

fn row_dot_big(m: &IntMatrix, r: usize, v: &[i64]) -> Result<i64> {
    let acc: BigInt = v
        .iter()
        .enumerate()
        .filter(|(_, &x)| x != 0)
        .map(|(c, &x)| m.get(r, c) * BigInt::from(x))
        .sum();
    acc.to_i64().ok_or(Error::Overflow)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

/// A basis curve together with the direction in which its twist ray has
/// strictly increasing norm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IncreasingTwist {
    /// Interleaved basis index: `2(j-1)` for `x_j`, `2(j-1)+1` for `y_j`.
    pub curve: usize,
    pub sign: Sign,
}

impl IncreasingTwist {
    pub fn curve_class(&self, genus: Genus) -> HomologyClass {
        HomologyClass::basis(genus, self.curve)
    }
}

/// Picks a basis twist whose ray `n ↦ |τ^{εn} m|` is strictly increasing.
///
/// Scans for the first nonzero coordinate. If it is `a_j` the twist is along
/// `y_j`, which moves `b_j` to `b_j - εn a_j`; `ε` is chosen so the moving
/// coordinate grows away from zero, `+1` when `b_j = 0`. If it is `b_j` (so
/// `a_j = 0`) the twist is along `x_j`, moving `a_j` to `εn b_j`, and `ε = +1`.
pub fn choose_increasing_twist(m: &HomologyClass) -> Result<IncreasingTwist> {
    let idx = m
        .coords
        .iter()
        .position(|&c| c != 0)
        .ok_or(Error::ZeroClass)?;
    if idx % 2 == 0 {
        let a = m.coords[idx];
        let b = m.coords[idx + 1];
        // b moves by -ε a per step; with ε = +1 against the sign of b the
        // first step must already overshoot
        let sign = if b == 0 || b.signum() == -a.signum() || a.unsigned_abs() > 2 * b.unsigned_abs()
        {
            Sign::Plus
        } else {
            Sign::Minus
        };
        Ok(IncreasingTwist {
            curve: idx + 1,
            sign,
        })
    } else {
        Ok(IncreasingTwist {
            curve: idx - 1,
            sign: Sign::Plus,
        })
    }
}

/// `(m, τ_c^ε m, τ_c^{2ε} m, ...)` of length `limit`.
pub fn orbit_ray(
    c: &HomologyClass,
    sign: Sign,
    m: &HomologyClass,
    limit: usize,
) -> Result<Vec<HomologyClass>> {
    let step = intersection(c, m)?
        .checked_mul(sign.as_i64())
        .ok_or(Error::Overflow)?;
    let delta = c.checked_scale(step)?;
    let mut out = Vec::with_capacity(limit);
    let mut cur = m.clone();
    for i in 0..limit {
        if i > 0 {
            cur = cur.checked_add(&delta)?;
        }
        out.push(cur.clone());
    }
    Ok(out)
}
