//! Interchange formats.
//!
//! Sparse vectors as text, one support point per line:
//!
//! ```text
//! a1 b1 ... ag bg  re_num/re_den  im_num/im_den
//! ```
//!
//! and as JSON, `[{"class": [a1, ...], "re": "n/d", "im": "n/d"}, ...]`.
//! Cocycles as `{genus, generators: [{id, cls}], values: {id: vector}}`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::cohomology::{Cocycle, GeneratorSet, NonSeparatingPair, SmoothnessRow, SolveReport};
use crate::error::{Error, Result};
use crate::exact::{coeff, format_rational, parse_rational, Coeff, SqrtRational};
use crate::fourier::SparseVector;
use crate::lattice::{Genus, HomologyClass};
use crate::words::{Curve, RelationInstance};

pub fn parse_sparse_text(text: &str, genus: Option<Genus>) -> Result<SparseVector> {
    let mut entries = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() < 3 {
            return Err(Error::Parse(format!("line {}: too few fields", lineno + 1)));
        }
        let (cls_tokens, c) = tokens.split_at(tokens.len() - 2);
        let m: HomologyClass = cls_tokens
            .join(" ")
            .parse()
            .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?;
        let c = coeff(parse_rational(c[0])?, parse_rational(c[1])?);
        entries.push((m, c));
    }
    let genus = match genus {
        Some(g) => g,
        None => match entries.first() {
            Some((m, _)) => m.genus(),
            None => return Err(Error::Parse("empty vector needs an explicit genus".into())),
        },
    };
    SparseVector::from_terms(genus, entries)
}

pub fn format_sparse_text(v: &SparseVector) -> String {
    let mut out = String::new();
    for (m, c) in v.iter() {
        let _ = writeln!(
            out,
            "{m}  {}  {}",
            format_rational(&c.re),
            format_rational(&c.im)
        );
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparseEntry {
    pub class: HomologyClass,
    pub re: String,
    pub im: String,
}

pub fn vector_to_entries(v: &SparseVector) -> Vec<SparseEntry> {
    v.iter()
        .map(|(m, c)| SparseEntry {
            class: m.clone(),
            re: format_rational(&c.re),
            im: format_rational(&c.im),
        })
        .collect()
}

pub fn vector_from_entries(genus: Genus, entries: &[SparseEntry]) -> Result<SparseVector> {
    let terms = entries
        .iter()
        .map(|e| {
            Ok((
                e.class.clone(),
                coeff(parse_rational(&e.re)?, parse_rational(&e.im)?),
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    SparseVector::from_terms(genus, terms)
}

/// Reads either the text or the JSON vector format.
pub fn parse_sparse_any(text: &str, genus: Option<Genus>) -> Result<SparseVector> {
    if text.trim_start().starts_with('[') {
        let entries: Vec<SparseEntry> =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let genus = match (genus, entries.first()) {
            (Some(g), _) => g,
            (None, Some(e)) => e.class.genus(),
            (None, None) => {
                return Err(Error::Parse("empty vector needs an explicit genus".into()))
            }
        };
        vector_from_entries(genus, &entries)
    } else {
        parse_sparse_text(text, genus)
    }
}

pub fn coeff_json(c: &Coeff) -> Value {
    json!({ "re": format_rational(&c.re), "im": format_rational(&c.im) })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GeneratorEntry {
    pub id: String,
    pub cls: HomologyClass,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CocycleFile {
    pub genus: usize,
    pub generators: Vec<GeneratorEntry>,
    #[serde(default)]
    pub values: BTreeMap<String, Vec<SparseEntry>>,
    /// Generator pairs declared jointly non-separating.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub pairs: Vec<NonSeparatingPair>,
}

impl CocycleFile {
    pub fn from_cocycle(u: &Cocycle, pairs: Vec<NonSeparatingPair>) -> Self {
        CocycleFile {
            genus: u.genus().get(),
            generators: u
                .generators()
                .curves()
                .iter()
                .map(|c| GeneratorEntry {
                    id: c.id().to_string(),
                    cls: c.cls().clone(),
                })
                .collect(),
            values: u
                .values()
                .iter()
                .map(|(id, v)| (id.clone(), vector_to_entries(v)))
                .collect(),
            pairs,
        }
    }

    pub fn to_cocycle(&self) -> Result<Cocycle> {
        let genus = Genus::new(self.genus)?;
        let curves = self
            .generators
            .iter()
            .map(|g| {
                if g.cls.genus() != genus {
                    return Err(Error::GenusMismatch {
                        left: genus.get(),
                        right: g.cls.genus().get(),
                    });
                }
                Ok(Curve::nonseparating(g.id.clone(), g.cls.clone()))
            })
            .collect::<Result<Vec<_>>>()?;
        let gens = GeneratorSet::new(genus, curves)?;
        let values = self
            .values
            .iter()
            .map(|(id, entries)| Ok((id.clone(), vector_from_entries(genus, entries)?)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        Cocycle::new(gens, values)
    }
}

pub fn parse_cocycle(text: &str) -> Result<(Cocycle, Vec<NonSeparatingPair>)> {
    let file: CocycleFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let u = file.to_cocycle()?;
    Ok((u, file.pairs))
}

pub fn cocycle_to_json(u: &Cocycle, pairs: Vec<NonSeparatingPair>) -> String {
    serde_json::to_string_pretty(&CocycleFile::from_cocycle(u, pairs)).expect("serializable")
}

/// Accepts a single relation object or an array of them.
pub fn parse_relations(text: &str) -> Result<Vec<RelationInstance>> {
    let value: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let parse = |v: Value| -> Result<RelationInstance> {
        serde_json::from_value(v).map_err(|e| Error::Parse(e.to_string()))
    };
    match value {
        Value::Array(items) => items.into_iter().map(parse).collect(),
        other => Ok(vec![parse(other)?]),
    }
}

pub fn norm_json(n: &SqrtRational) -> Value {
    Value::from(n.to_string())
}

pub fn smoothness_json(rows: &[SmoothnessRow]) -> Value {
    Value::Array(
        rows.iter()
            .map(|r| {
                json!({
                    "k": r.k,
                    "G_k_plus_1": norm_json(&r.g_next),
                    "pass": r.pass,
                    "violations": r.violations.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
                })
            })
            .collect(),
    )
}

pub fn solve_report_json(rep: &SolveReport, smoothness: Option<&[SmoothnessRow]>) -> Value {
    let decay: Vec<Value> = rep
        .decay
        .iter()
        .map(|d| {
            json!({
                "k": d.k,
                "F_k": norm_json(&d.f_decay),
                "G_k_plus_1": norm_json(&d.g_next),
            })
        })
        .collect();
    let mut out = json!({
        "genus": rep.genus().get(),
        "residual": norm_json(&rep.residual),
        "residual_zero": rep.is_exact(),
        "f": serde_json::to_value(vector_to_entries(&rep.f)).expect("serializable"),
        "decay": decay,
    });
    if let Some(rows) = smoothness {
        out["smoothness"] = smoothness_json(rows);
    }
    out
}
