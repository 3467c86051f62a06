//! `mcgcoh`: verification suites, the coboundary solver and data
//! interchange from the command line.
//!
//! Exit status is 0 on success, 1 when a check fails and 2 on malformed
//! input or a violated precondition.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::cohomology::{
    c_pairing, relation_residual, s_vector, solve_coboundary, Cocycle, DEFAULT_KMAX,
};
use crate::error::{Error, Result};
use crate::fourier::{act, decay_constant, evaluate, torus_action};
use crate::io::{
    coeff_json, norm_json, parse_cocycle, parse_relations, parse_sparse_any, solve_report_json,
};
use crate::lattice::{choose_increasing_twist, is_symplectic, orbit_ray, Genus, HomologyClass};
use crate::random;
use crate::words::{builtin_catalog, verify_relation, word_matrix, RelationInstance};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "mcgcoh",
    version,
    about = "Mapping class group cocycle toolkit"
)]
pub struct Args {
    /// Surface genus (at least 3).
    #[arg(long, global = true)]
    pub genus: Option<usize>,
    /// Seed for randomized suites.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Tolerance for floating point cross-checks.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tolerance: f64,
    #[arg(long = "in", global = true)]
    pub input: Option<PathBuf>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Verify the built-in relation catalog, plus any relations in --in.
    VerifyRelations {
        /// Random twist words checked for the symplectic and equivariance
        /// invariants.
        #[arg(long, default_value_t = 100)]
        random_words: usize,
    },
    /// Solve u = δf for the cocycle in --in.
    Solve,
    /// Print the norm-increasing twist ray of a class.
    Orbit {
        /// Whitespace-separated coordinates "a1 b1 ... ag bg".
        #[arg(long = "class", allow_hyphen_values = true)]
        class: String,
        #[arg(long, default_value_t = 10)]
        steps: usize,
    },
    /// Relation residuals, s-vector norms and c-pairings of the cocycle in --in.
    CheckCocycle,
    /// Decay constants F_k of a vector, or the smoothness report of a cocycle.
    DecayReport {
        #[arg(long, default_value_t = DEFAULT_KMAX)]
        kmax: u32,
    },
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub genus: Genus,
    pub genus_explicit: bool,
    pub seed: u64,
    pub tolerance: f64,
    pub input: Option<PathBuf>,
    pub output: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_args(args: &Args) -> Result<Self> {
        let genus = Genus::new(args.genus.unwrap_or(Genus::MIN))?;
        Ok(RunConfig {
            genus,
            genus_explicit: args.genus.is_some(),
            seed: args.seed,
            tolerance: args.tolerance,
            input: args.input.clone(),
            output: args.output_path(),
        })
    }

    fn read_input(&self) -> Result<String> {
        let path = self
            .input
            .as_ref()
            .ok_or_else(|| Error::Parse("--in is required".into()))?;
        std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))
    }

    fn check_genus(&self, found: Genus) -> Result<()> {
        if self.genus_explicit && found != self.genus {
            return Err(Error::GenusMismatch {
                left: self.genus.get(),
                right: found.get(),
            });
        }
        Ok(())
    }
}

impl Args {
    fn output_path(&self) -> Option<PathBuf> {
        self.out.clone()
    }
}

/// Result of a subcommand: exit status and the document to emit.
pub struct Outcome {
    pub status: i32,
    pub body: String,
    pub messages: Vec<String>,
}

impl Outcome {
    fn new(status: i32, body: String) -> Self {
        Outcome {
            status,
            body,
            messages: Vec::new(),
        }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

/// Parses `argv` and runs the selected subcommand.
pub fn main_with<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let status = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(stderr, "{e}")
            } else {
                write!(stdout, "{e}")
            };
            return status;
        }
    };
    run(&args, stdout, stderr)
}

pub fn run(args: &Args, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let config = match RunConfig::from_args(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_INPUT;
        }
    };
    let outcome = match &args.command {
        Command::VerifyRelations { random_words } => {
            cmd_verify_relations(&config, *random_words, args.format.unwrap_or(Format::Json))
        }
        Command::Solve => cmd_solve(&config),
        Command::Orbit { class, steps } => {
            cmd_orbit(&config, class, *steps, args.format.unwrap_or(Format::Csv))
        }
        Command::CheckCocycle => cmd_check_cocycle(&config),
        Command::DecayReport { kmax } => {
            cmd_decay_report(&config, *kmax, args.format.unwrap_or(Format::Json))
        }
    };
    let outcome = match outcome {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_INPUT;
        }
    };
    for m in &outcome.messages {
        let _ = writeln!(stderr, "{m}");
    }
    match &config.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &outcome.body) {
                let _ = writeln!(stderr, "error: cannot write {}: {e}", path.display());
                return EXIT_INPUT;
            }
        }
        None => {
            let _ = stdout.write_all(outcome.body.as_bytes());
        }
    }
    outcome.status
}

fn relation_entry(rel: &RelationInstance, source: &str) -> (bool, Value) {
    let mut entry = json!({ "name": rel.name, "source": source });
    let ok = match rel.matrices() {
        Ok((l, r)) => {
            let distance = l.matrix().l1_distance(r.matrix()).expect("same genus");
            let pass = l == r;
            debug_assert_eq!(pass, verify_relation(rel).unwrap_or(false));
            entry["status"] = json!(if pass { "pass" } else { "fail" });
            entry["residual"] = json!(distance.to_string());
            pass
        }
        Err(e @ Error::MetadataMismatch { .. }) => {
            entry["status"] = json!("metadata-mismatch");
            entry["detail"] = json!(e.to_string());
            false
        }
        Err(e) => {
            entry["status"] = json!("error");
            entry["detail"] = json!(e.to_string());
            false
        }
    };
    (ok, entry)
}

/// Catalog verification plus a seeded random-word suite: every word matrix
/// must be symplectic, and evaluation must commute with the action on the
/// torus within the tolerance.
pub fn cmd_verify_relations(
    config: &RunConfig,
    random_words: usize,
    format: Format,
) -> Result<Outcome> {
    let g = config.genus;
    let mut relations: Vec<(RelationInstance, &str)> = builtin_catalog(g)
        .into_iter()
        .map(|r| (r, "builtin"))
        .collect();
    if config.input.is_some() {
        let extra = parse_relations(&config.read_input()?)?;
        for r in &extra {
            config.check_genus(r.genus()?)?;
        }
        relations.extend(extra.into_iter().map(|r| (r, "file")));
    }

    let mut messages = Vec::new();
    let mut all_pass = true;
    let mut entries = Vec::new();
    for (rel, source) in &relations {
        let (ok, entry) = relation_entry(rel, source);
        if !ok {
            all_pass = false;
            messages.push(format!("relation {} failed", rel.name));
        }
        entries.push(entry);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let basis = crate::cohomology::GeneratorSet::basis(g);
    let mut symplectic_failures = 0usize;
    let mut max_err = 0.0f64;
    for _ in 0..random_words {
        let w = random::word(&mut rng, basis.curves(), 6, 2);
        let m = word_matrix(&w, basis.curves(), g)?;
        if !is_symplectic(m.matrix())? {
            symplectic_failures += 1;
        }
        let v = random::vector(&mut rng, g, 8, 6, 50, true);
        let rho = random::torus_point(&mut rng, g, 97);
        let lhs = evaluate(&act(&m, &v)?, &rho)?;
        let rhs = evaluate(&v, &torus_action(&m.inverse(), &rho)?)?;
        max_err = max_err.max((lhs - rhs).norm());
    }
    let random_ok = symplectic_failures == 0 && max_err <= config.tolerance;
    if !random_ok {
        all_pass = false;
        messages.push("random word suite failed".to_string());
    }

    let status = if all_pass {
        crate::cli::EXIT_OK
    } else {
        EXIT_FAIL
    };
    let body = match format {
        Format::Json => pretty(&json!({
            "genus": g.get(),
            "seed": config.seed,
            "instances": entries,
            "random_words": {
                "count": random_words,
                "symplectic_failures": symplectic_failures,
                "max_equivariance_error": max_err,
                "tolerance": config.tolerance,
                "pass": random_ok,
            },
            "all_pass": all_pass,
        })),
        Format::Csv => {
            let mut s = String::from("name,source,status,residual\n");
            for e in &entries {
                s.push_str(&format!(
                    "{},{},{},{}\n",
                    e["name"].as_str().unwrap_or(""),
                    e["source"].as_str().unwrap_or(""),
                    e["status"].as_str().unwrap_or(""),
                    e["residual"].as_str().unwrap_or("")
                ));
            }
            s
        }
    };
    Ok(Outcome {
        status,
        body,
        messages,
    })
}

fn read_cocycle(
    config: &RunConfig,
) -> Result<(Cocycle, Vec<crate::cohomology::NonSeparatingPair>)> {
    let (u, pairs) = parse_cocycle(&config.read_input()?)?;
    config.check_genus(u.genus())?;
    Ok((u, pairs))
}

pub fn cmd_solve(config: &RunConfig) -> Result<Outcome> {
    let (u, _) = read_cocycle(config)?;
    let catalog = builtin_catalog(u.genus());
    let rep = match solve_coboundary(&u, &catalog) {
        Ok(r) => r,
        Err(e @ Error::RelationResidual(_)) => {
            let mut o = Outcome::new(EXIT_INPUT, pretty(&json!({ "refused": e.to_string() })));
            o.messages.push(format!("error: {e}"));
            return Ok(o);
        }
        Err(e) => return Err(e),
    };
    if !rep.is_exact() {
        let mut o = Outcome::new(EXIT_FAIL, pretty(&solve_report_json(&rep, None)));
        o.messages
            .push(format!("nonzero residual {}", rep.residual));
        return Ok(o);
    }
    let rows = rep.smoothness_report(DEFAULT_KMAX)?;
    let pass = rows.iter().all(|r| r.pass);
    let mut o = Outcome::new(
        if pass { EXIT_OK } else { EXIT_FAIL },
        pretty(&solve_report_json(&rep, Some(&rows))),
    );
    if !pass {
        o.messages.push("smoothness bound violated".to_string());
    }
    Ok(o)
}

pub fn cmd_orbit(config: &RunConfig, class: &str, steps: usize, format: Format) -> Result<Outcome> {
    let coords = class
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<i64>()
                .map_err(|e| Error::Parse(format!("bad coordinate {t:?}: {e}")))
        })
        .collect::<Result<Vec<_>>>()?;
    let m = HomologyClass::new(config.genus, coords)?;
    let t = choose_increasing_twist(&m)?;
    let ray = orbit_ray(&t.curve_class(config.genus), t.sign, &m, steps + 1)?;
    let body = match format {
        Format::Csv => {
            let mut s = String::from("n,class,norm1\n");
            for (n, p) in ray.iter().enumerate() {
                s.push_str(&format!("{n},{p},{}\n", p.norm1()));
            }
            s
        }
        Format::Json => pretty(&json!({
            "curve": t.curve,
            "sign": t.sign.as_i64(),
            "rows": ray.iter().enumerate().map(|(n, p)| json!({
                "n": n, "class": p.to_string(), "norm1": p.norm1()
            })).collect::<Vec<_>>(),
        })),
    };
    Ok(Outcome::new(EXIT_OK, body))
}

pub fn cmd_check_cocycle(config: &RunConfig) -> Result<Outcome> {
    let (u, pairs) = read_cocycle(config)?;
    let catalog = builtin_catalog(u.genus());
    let mut flagged = false;
    let mut messages = Vec::new();

    let mut relations = Vec::new();
    for rel in u.applicable_relations(&catalog) {
        let r = relation_residual(&u, rel)?;
        if !r.is_zero() {
            flagged = true;
            messages.push(format!("relation {} has nonzero residual {r}", rel.name));
        }
        relations.push(json!({ "name": rel.name, "residual": norm_json(&r) }));
    }

    let mut s_norms = Vec::new();
    for c in u.generators().curves().iter() {
        let n = s_vector(&u, c.id())?.norm();
        if !n.is_zero() {
            flagged = true;
            messages.push(format!("s-vector of {} is nonzero", c.id()));
        }
        s_norms.push(json!({ "id": c.id(), "norm": norm_json(&n) }));
    }

    let mut pairings = Vec::new();
    for p in &pairs {
        let c = c_pairing(&u, p)?;
        pairings.push(json!({ "a": p.a, "b": p.b, "value": coeff_json(&c) }));
    }

    let body = pretty(&json!({
        "genus": u.genus().get(),
        "relations": relations,
        "s_norms": s_norms,
        "c_pairings": pairings,
        "flagged": flagged,
    }));
    Ok(Outcome {
        status: if flagged { EXIT_FAIL } else { EXIT_OK },
        body,
        messages,
    })
}

pub fn cmd_decay_report(config: &RunConfig, kmax: u32, format: Format) -> Result<Outcome> {
    let text = config.read_input()?;
    if text.trim_start().starts_with('{') {
        let (u, _) = parse_cocycle(&text)?;
        config.check_genus(u.genus())?;
        let rep = solve_coboundary(&u, &builtin_catalog(u.genus()))?;
        let rows = rep.smoothness_report(kmax)?;
        let pass = rows.iter().all(|r| r.pass);
        let body = match format {
            Format::Json => pretty(&crate::io::smoothness_json(&rows)),
            Format::Csv => {
                let mut s = String::from("k,G_k_plus_1,pass\n");
                for r in &rows {
                    s.push_str(&format!("{},{},{}\n", r.k, r.g_next, r.pass));
                }
                s
            }
        };
        return Ok(Outcome::new(if pass { EXIT_OK } else { EXIT_FAIL }, body));
    }
    let genus = config.genus_explicit.then_some(config.genus);
    let v = parse_sparse_any(&text, genus)?;
    let rows: Vec<(u32, String)> = (0..=kmax)
        .map(|k| (k, decay_constant(&v, k).to_string()))
        .collect();
    let body = match format {
        Format::Json => pretty(&Value::Array(
            rows.iter()
                .map(|(k, f)| json!({ "k": k, "F_k": f }))
                .collect(),
        )),
        Format::Csv => {
            let mut s = String::from("k,F_k\n");
            for (k, f) in &rows {
                s.push_str(&format!("{k},{f}\n"));
            }
            s
        }
    };
    Ok(Outcome::new(EXIT_OK, body))
}
