//! Named collections of rings, modules and embedding pairs, with a directory
//! format: one `.ring` program per member (raw tables in `.tbl` sidecars),
//! loaded in file-name order, plus an optional `pairs.embed` file.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::budget::Budgets;
use crate::construct::{construct, Environment};
use crate::dsl::{
    format_raw_tables, parse_program, ModuleExpr, ParseError, RawSource, RingExpr, RingSpec,
    Statement,
};
use crate::elements::RingFacts;
use crate::fingerprint::Fingerprint;
use crate::modlab::{module_from_expr, FinModule, ModuleError};
use crate::ring::{Elem, FinRing, RingError, RingTables};

#[derive(Debug, Clone)]
pub struct RingEntry {
    pub name: String,
    pub spec: RingSpec,
    pub ring: Arc<FinRing>,
    pub facts: Arc<RingFacts>,
    pub fingerprint: Fingerprint,
}

#[derive(Debug, Clone)]
pub struct ModuleEntry {
    pub name: String,
    /// Name of the ring entry the module is over.
    pub ring: String,
    pub expr: ModuleExpr,
    pub module: Arc<FinModule>,
}

/// `map[i]` is the image in `over` of element `i` of `sub`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbeddingPair {
    pub name: String,
    pub sub: String,
    pub over: String,
    pub map: Vec<Elem>,
}

/// Two ring entries with equal fingerprints; both stay in the catalog.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Duplicate {
    pub first: String,
    pub second: String,
    pub fingerprint: String,
}

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("{file}: {error}")]
    Parse { file: String, error: ParseError },
    #[error("{file}: ring `{name}`: {error}")]
    Ring { file: String, name: String, error: RingError },
    #[error("{file}: module `{name}`: {error}")]
    Module { file: String, name: String, error: ModuleError },
    #[error("{file}:{line}: {message}")]
    Pair { file: String, line: usize, message: String },
    #[error("{file}: duplicate name `{name}`")]
    DuplicateName { file: String, name: String },
    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

#[derive(Debug, Clone, Default)]
pub struct Catalog {
    pub name: String,
    pub rings: Vec<RingEntry>,
    pub modules: Vec<ModuleEntry>,
    pub pairs: Vec<EmbeddingPair>,
    pub duplicates: Vec<Duplicate>,
    /// Directory raw-table references resolve against.
    pub base_dir: Option<PathBuf>,
}

pub const PAIRS_FILE: &str = "pairs.embed";

/// Incremental construction shared by the builtin set and the loader.
struct Builder {
    env: Environment,
    modules: HashMap<String, Arc<FinModule>>,
    catalog: Catalog,
    budgets: Budgets,
}

impl Builder {
    fn new(name: &str, env: Environment, budgets: &Budgets) -> Self {
        Builder {
            env,
            modules: HashMap::new(),
            catalog: Catalog { name: name.to_string(), ..Catalog::default() },
            budgets: *budgets,
        }
    }

    fn taken(&self, name: &str) -> bool {
        self.env.rings.contains_key(name) || self.modules.contains_key(name)
    }

    fn statement(&mut self, stmt: &Statement, file: &str) -> Result<(), CatalogError> {
        match stmt {
            Statement::Ring { name, spec } => self.ring(name, spec.clone(), file),
            Statement::Module { name, ring, expr } => self.module(name, ring, expr.clone(), file),
        }
    }

    fn ring(&mut self, name: &str, spec: RingSpec, file: &str) -> Result<(), CatalogError> {
        if self.taken(name) {
            return Err(CatalogError::DuplicateName { file: file.into(), name: name.into() });
        }
        let ring = construct(&spec, &self.env, self.budgets.max_order)
            .map_err(|error| CatalogError::Ring { file: file.into(), name: name.into(), error })?;
        let ring = Arc::new(ring);
        let facts = RingFacts::new(ring.clone());
        let fingerprint = Fingerprint::of(&facts);
        self.env.rings.insert(name.to_string(), ring.clone());
        self.catalog.rings.push(RingEntry {
            name: name.to_string(),
            spec,
            ring,
            facts: Arc::new(facts),
            fingerprint,
        });
        Ok(())
    }

    fn module(&mut self, name: &str, ring_name: &str, expr: ModuleExpr, file: &str) -> Result<(), CatalogError> {
        let err = |error| CatalogError::Module { file: file.into(), name: name.into(), error };
        if self.taken(name) {
            return Err(CatalogError::DuplicateName { file: file.into(), name: name.into() });
        }
        let ring = self
            .env
            .rings
            .get(ring_name)
            .cloned()
            .ok_or_else(|| err(ModuleError::Ring(RingError::UnknownRing(ring_name.into()))))?;
        let module = module_from_expr(&ring, &expr, &self.modules, self.budgets.max_module_order).map_err(err)?;
        let module = Arc::new(module.with_label(name));
        self.modules.insert(name.to_string(), module.clone());
        self.catalog.modules.push(ModuleEntry { name: name.into(), ring: ring_name.into(), expr, module });
        Ok(())
    }

    fn pair(&mut self, pair: EmbeddingPair, file: &str, line: usize) -> Result<(), CatalogError> {
        let fail = |message: String| CatalogError::Pair { file: file.into(), line, message };
        let order = |name: &str| self.env.rings.get(name).map(|r| r.order());
        let sub = order(&pair.sub).ok_or_else(|| fail(format!("unknown ring `{}`", pair.sub)))?;
        let over = order(&pair.over).ok_or_else(|| fail(format!("unknown ring `{}`", pair.over)))?;
        if pair.map.len() != sub {
            return Err(fail(format!("map has {} entries, `{}` has {sub} elements", pair.map.len(), pair.sub)));
        }
        if let Some(&bad) = pair.map.iter().find(|&&x| x >= over) {
            return Err(fail(format!("{bad} is not an element of `{}`", pair.over)));
        }
        self.catalog.pairs.push(pair);
        Ok(())
    }

    fn finish(mut self) -> Catalog {
        let mut seen: HashMap<&Fingerprint, &str> = HashMap::new();
        let mut duplicates = Vec::new();
        for entry in &self.catalog.rings {
            match seen.get(&entry.fingerprint) {
                Some(first) => duplicates.push(Duplicate {
                    first: first.to_string(),
                    second: entry.name.clone(),
                    fingerprint: entry.fingerprint.hash(),
                }),
                None => {
                    seen.insert(&entry.fingerprint, &entry.name);
                }
            }
        }
        self.catalog.duplicates = duplicates;
        self.catalog
    }
}

/// `GF(2)[x]/(x^2)`; element `c0 + c1 x` has index `c0 + 2 c1`.
pub fn dual_numbers_gf2() -> RingTables {
    let mut add = Vec::with_capacity(16);
    let mut mul = Vec::with_capacity(16);
    for a in 0..4u32 {
        for b in 0..4u32 {
            add.push(a ^ b);
            let (a0, a1, b0, b1) = (a & 1, a >> 1, b & 1, b >> 1);
            mul.push((a0 & b0) | (((a0 & b1) ^ (a1 & b0)) << 1));
        }
    }
    RingTables { order: 4, add, mul, star: None }
}

const BUILTIN_RINGS: &[(&str, &str)] = &[
    ("F2", "gf(2)"),
    ("F3", "gf(3)"),
    ("F4", "gf(4)"),
    ("M2F2", "matrix(gf(2), 2)"),
    ("M2F3", "matrix(gf(3), 2)"),
    ("S", "uppertri(gf(2), 2)"),
    ("T2F3", "uppertri(gf(3), 2)"),
    ("R", "uppertri(uppertri(gf(2), 2), 2)"),
    ("Z4xF2", "product(zmod(4), gf(2))"),
    ("F2xF3", "product(gf(2), gf(3))"),
];

const BUILTIN_STAR_RINGS: &[(&str, &str)] = &[
    ("Z4_id", "zmod(4) with involution identity"),
    ("Z6_id", "zmod(6) with involution identity"),
    ("M2F3_t", "matrix(gf(3), 2) with involution transpose"),
    ("F2xF2_swap", "product(gf(2), gf(2)) with involution swap"),
    ("F2_id", "gf(2) with involution identity"),
    ("F4_frob", "gf(4) with involution raw(0, 1, 3, 2)"),
];

/// Regular modules are added for plain rings up to this order.
pub const REGULAR_MODULE_MAX_ORDER: usize = 16;

impl Catalog {
    /// The fixed catalog of small rings, star rings, modules and embedding pairs.
    pub fn builtin(budgets: &Budgets) -> Result<Catalog, CatalogError> {
        let file = "<builtin>";
        let mut b = Builder::new("builtin", Environment::default(), budgets);
        for n in 1..=12 {
            b.ring(&format!("Z{n}"), RingSpec::plain(RingExpr::Zmod(n)), file)?;
        }
        let parse = |text: &str| crate::dsl::parse_spec(text).expect("builtin spec parses");
        for (name, text) in BUILTIN_RINGS {
            b.ring(name, parse(text), file)?;
        }
        let dual = RingExpr::Raw(RawSource::Inline(Box::new(dual_numbers_gf2())));
        b.ring("D2", RingSpec::plain(dual), file)?;
        for (name, text) in BUILTIN_STAR_RINGS {
            b.ring(name, parse(text), file)?;
        }
        let plain: Vec<(String, usize)> = b
            .catalog
            .rings
            .iter()
            .filter(|e| e.spec.involution.is_none() && e.ring.order() <= REGULAR_MODULE_MAX_ORDER)
            .map(|e| (e.name.clone(), e.ring.order()))
            .collect();
        for (ring, _) in plain {
            b.module(&format!("{ring}_R"), &ring, ModuleExpr::Free(1), file)?;
        }
        b.module("F2_sq", "F2", ModuleExpr::Free(2), file)?;
        b.module("Z4_mod2", "Z4", ModuleExpr::Cyclic(vec![2]), file)?;
        for (name, sub, over, map) in [
            ("F2_in_F4", "F2", "F4", vec![0, 1]),
            ("Z2_in_D2", "Z2", "D2", vec![0, 1]),
            ("F2_in_F4_star", "F2_id", "F4_frob", vec![0, 1]),
        ] {
            b.pair(EmbeddingPair { name: name.into(), sub: sub.into(), over: over.into(), map }, file, 0)?;
        }
        Ok(b.finish())
    }

    pub fn ring_index(&self, name: &str) -> Option<usize> {
        self.rings.iter().position(|e| e.name == name)
    }

    pub fn ring(&self, name: &str) -> Option<&RingEntry> {
        self.rings.iter().find(|e| e.name == name)
    }

    pub fn module(&self, name: &str) -> Option<&ModuleEntry> {
        self.modules.iter().find(|e| e.name == name)
    }

    /// Digest of the catalog contents (names, specs, tables, pairs).
    pub fn digest(&self) -> String {
        let mut h = Sha256::new();
        for e in &self.rings {
            h.update(format!("ring {} = {}\n", e.name, canonical_spec(&e.spec)));
        }
        for m in &self.modules {
            h.update(format!("module {} over {} = {}\n", m.name, m.ring, m.expr));
        }
        for p in &self.pairs {
            h.update(pair_line(p));
            h.update("\n");
        }
        hex::encode(h.finalize())[..16].to_string()
    }

    /// Load a catalog directory, or a single program file.
    pub fn load(path: &Path, budgets: &Budgets) -> Result<Catalog, CatalogError> {
        let io = |p: &Path, e: std::io::Error| CatalogError::Io { path: p.display().to_string(), message: e.to_string() };
        let name = path.display().to_string();
        if path.is_file() {
            let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
            let mut b = Builder::new(&name, Environment::with_base_dir(&dir), budgets);
            b.catalog.base_dir = Some(dir);
            load_program(&mut b, path)?;
            return Ok(b.finish());
        }
        let mut files: Vec<PathBuf> = fs::read_dir(path)
            .map_err(|e| io(path, e))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "ring"))
            .collect();
        files.sort();
        let mut b = Builder::new(&name, Environment::with_base_dir(path), budgets);
        b.catalog.base_dir = Some(path.to_path_buf());
        for file in &files {
            load_program(&mut b, file)?;
        }
        let pairs = path.join(PAIRS_FILE);
        if pairs.is_file() {
            let text = fs::read_to_string(&pairs).map_err(|e| io(&pairs, e))?;
            let file = pairs.display().to_string();
            for (i, line) in text.lines().enumerate() {
                let line = line.split('#').next().unwrap_or("").trim();
                if line.is_empty() {
                    continue;
                }
                let pair = parse_pair_line(line)
                    .map_err(|message| CatalogError::Pair { file: file.clone(), line: i + 1, message })?;
                b.pair(pair, &file, i + 1)?;
            }
        }
        Ok(b.finish())
    }

    /// Write one numbered `.ring` file per ring and module; inline tables go
    /// to `.tbl` files referenced by name.
    pub fn save(&self, dir: &Path) -> Result<(), CatalogError> {
        let io = |p: &Path, e: std::io::Error| CatalogError::Io { path: p.display().to_string(), message: e.to_string() };
        fs::create_dir_all(dir).map_err(|e| io(dir, e))?;
        let width = (self.rings.len() + self.modules.len()).max(1).to_string().len().max(3);
        let mut ordinal = 0;
        let write = |stem: String, text: String, ext: &str| -> Result<String, CatalogError> {
            let file = format!("{stem}.{ext}");
            let path = dir.join(&file);
            fs::write(&path, text).map_err(|e| io(&path, e))?;
            Ok(file)
        };
        for e in &self.rings {
            let stem = format!("{ordinal:0width$}_{}", e.name);
            ordinal += 1;
            let mut tables = Vec::new();
            let expr = materialize(&e.spec.expr, &stem, self.base_dir.as_deref(), &mut tables).map_err(|error| {
                CatalogError::Ring { file: stem.clone(), name: e.name.clone(), error }
            })?;
            for (file, t) in tables {
                let p = dir.join(&file);
                fs::write(&p, format_raw_tables(&t)).map_err(|err| io(&p, err))?;
            }
            let spec = RingSpec { expr, involution: e.spec.involution.clone() };
            write(stem, format!("ring {} = {}\n", e.name, spec), "ring")?;
        }
        for m in &self.modules {
            let stem = format!("{ordinal:0width$}_{}", m.name);
            ordinal += 1;
            write(stem, format!("module {} over {} = {}\n", m.name, m.ring, m.expr), "ring")?;
        }
        if !self.pairs.is_empty() {
            let text: String = self.pairs.iter().map(|p| pair_line(p) + "\n").collect();
            let path = dir.join(PAIRS_FILE);
            fs::write(&path, text).map_err(|e| io(&path, e))?;
        }
        Ok(())
    }
}

fn load_program(b: &mut Builder, path: &Path) -> Result<(), CatalogError> {
    let file = path.display().to_string();
    let text = fs::read_to_string(path).map_err(|e| CatalogError::Io { path: file.clone(), message: e.to_string() })?;
    let program = parse_program(&text).map_err(|error| CatalogError::Parse { file: file.clone(), error })?;
    for stmt in &program.statements {
        b.statement(stmt, &file)?;
    }
    Ok(())
}

/// Replace every raw source by a fresh sidecar `<stem>[_k].tbl`.
fn materialize(
    expr: &RingExpr,
    stem: &str,
    base: Option<&Path>,
    out: &mut Vec<(String, RingTables)>,
) -> Result<RingExpr, RingError> {
    let rec = |e: &RingExpr, out: &mut Vec<(String, RingTables)>| materialize(e, stem, base, out).map(Box::new);
    Ok(match expr {
        RingExpr::Raw(src) => {
            let tables = match src {
                RawSource::Inline(t) => (**t).clone(),
                RawSource::File(path) => {
                    crate::dsl::read_raw_tables(&base.map_or_else(|| PathBuf::from(path), |d| d.join(path)))?
                }
            };
            let file = if out.is_empty() { format!("{stem}.tbl") } else { format!("{stem}_{}.tbl", out.len()) };
            out.push((file.clone(), tables));
            RingExpr::Raw(RawSource::File(file))
        }
        RingExpr::Matrix(b, k) => RingExpr::Matrix(rec(b, out)?, *k),
        RingExpr::UpperTri(b, k) => RingExpr::UpperTri(rec(b, out)?, *k),
        RingExpr::Product(a, b) => {
            let a = rec(a, out)?;
            RingExpr::Product(a, rec(b, out)?)
        }
        RingExpr::Opposite(a) => RingExpr::Opposite(rec(a, out)?),
        other => other.clone(),
    })
}

/// Spec text with inline tables replaced by their digest.
fn canonical_spec(spec: &RingSpec) -> String {
    fn expr(e: &RingExpr) -> String {
        match e {
            RingExpr::Raw(RawSource::Inline(t)) => {
                format!("raw(#{})", &hex::encode(Sha256::digest(format_raw_tables(t)))[..16])
            }
            RingExpr::Matrix(b, k) => format!("matrix({}, {k})", expr(b)),
            RingExpr::UpperTri(b, k) => format!("uppertri({}, {k})", expr(b)),
            RingExpr::Product(a, b) => format!("product({}, {})", expr(a), expr(b)),
            RingExpr::Opposite(a) => format!("opposite({})", expr(a)),
            other => other.to_string(),
        }
    }
    match &spec.involution {
        Some(inv) => format!("{} with involution {}", expr(&spec.expr), inv),
        None => expr(&spec.expr),
    }
}

fn pair_line(p: &EmbeddingPair) -> String {
    let map: Vec<String> = p.map.iter().map(|x| x.to_string()).collect();
    format!("embed {} = {} -> {} map {}", p.name, p.sub, p.over, map.join(" "))
}

/// `embed NAME = SUB -> OVER map i j k ..`
fn parse_pair_line(line: &str) -> Result<EmbeddingPair, String> {
    let words: Vec<&str> = line.split_whitespace().collect();
    match words.as_slice() {
        ["embed", name, "=", sub, "->", over, "map", rest @ ..] => {
            let map = rest
                .iter()
                .map(|w| w.parse::<Elem>().map_err(|_| format!("bad element `{w}`")))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(EmbeddingPair { name: name.to_string(), sub: sub.to_string(), over: over.to_string(), map })
        }
        _ => Err("expected `embed NAME = SUB -> OVER map i j ..`".into()),
    }
}
