use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use serde::Deserialize;

use super::engine::normalize;
use crate::lang::{parse, parse_signature, Term, ValueType};

/// How `simplify` may use a rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    /// Always left to right.
    Forward,
    /// Right to left, only when the term gets smaller (definitions).
    Fold,
    /// Either way, only when the term gets smaller.
    Both,
    /// Never used by `simplify`; available to `apply_rule`.
    None,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Forward,
    Backward,
}

impl Direction {
    pub fn as_str(self) -> &'static str {
        match self {
            Direction::Forward => "forward",
            Direction::Backward => "backward",
        }
    }

    pub fn parse(s: &str) -> Option<Direction> {
        match s {
            "forward" | "fwd" | "->" => Some(Direction::Forward),
            "backward" | "back" | "<-" => Some(Direction::Backward),
            _ => None,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SideCondition {
    /// `inverse ?a ?b`: `a` is the inverse of `b`. If `a` is unbound it is
    /// bound to the syntactic inverse of `b`.
    Inverse(String, String),
    /// `involutive ?f`: `f ; f` is the identity.
    Involutive(String),
}

impl SideCondition {
    fn parse(s: &str) -> Result<SideCondition, String> {
        let words: Vec<&str> = s.split_whitespace().collect();
        let var = |w: &str| w.strip_prefix('?').map(str::to_string).ok_or(format!("expected a ?variable, got `{w}`"));
        match words.as_slice() {
            ["inverse", a, b] => Ok(SideCondition::Inverse(var(a)?, var(b)?)),
            ["involutive", f] => Ok(SideCondition::Involutive(var(f)?)),
            _ => Err(format!("unknown side condition `{s}`")),
        }
    }
}

impl fmt::Display for SideCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SideCondition::Inverse(a, b) => write!(f, "inverse ?{a} ?{b}"),
            SideCondition::Involutive(a) => write!(f, "involutive ?{a}"),
        }
    }
}

/// Conjugation of a rule's `m`-dimensional space into dimension `dim`:
/// basis vector `i < m` goes to `map[i]`, the padding fills the other slots in order.
#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
pub struct Embedding {
    pub dim: usize,
    pub map: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Instantiation {
    pub bind: BTreeMap<String, Term>,
    pub ty: Option<(ValueType, ValueType)>,
    pub embed: Option<Embedding>,
}

impl fmt::Display for Instantiation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.bind.iter().map(|(k, v)| format!("?{k} = {v}")).collect();
        if let Some((a, b)) = &self.ty {
            parts.push(format!("at {a} <-> {b}"));
        }
        if let Some(e) = &self.embed {
            parts.push(format!("embedded {:?} in {}", e.map, e.dim));
        }
        if parts.is_empty() {
            f.write_str("as stated")
        } else {
            f.write_str(&parts.join(", "))
        }
    }
}

/// A named equation `lhs = w^phase rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewriteRule {
    pub name: String,
    pub family: String,
    pub qubits: Option<usize>,
    pub phase: u8,
    pub lhs: Term,
    pub rhs: Term,
    pub ty: Option<(ValueType, ValueType)>,
    pub orient: Orientation,
    pub side: Vec<SideCondition>,
    pub insts: Vec<Instantiation>,
}

impl RewriteRule {
    /// Pattern pair read in the given direction, with the phase of one step.
    pub fn oriented(&self, dir: Direction) -> (&Term, &Term, u8) {
        match dir {
            Direction::Forward => (&self.lhs, &self.rhs, self.phase),
            Direction::Backward => (&self.rhs, &self.lhs, (8 - self.phase) % 8),
        }
    }

    /// Instantiations to validate: the shipped ones, or the rule as stated.
    pub fn shipped_instantiations(&self) -> Vec<Instantiation> {
        if self.insts.is_empty() {
            vec![Instantiation::default()]
        } else {
            self.insts.clone()
        }
    }
}

impl fmt::Display for RewriteRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} = ", self.name, self.lhs)?;
        if self.phase != 0 {
            write!(f, "w^{} . ", self.phase)?;
        }
        write!(f, "{}", self.rhs)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("rule catalog: {context}: {message}")]
pub struct CatalogError {
    pub context: String,
    pub message: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCatalog {
    version: u32,
    #[serde(default)]
    rule: Vec<RawRule>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRule {
    name: String,
    family: String,
    #[serde(default)]
    qubits: Option<usize>,
    #[serde(default)]
    phase: u8,
    lhs: String,
    rhs: String,
    #[serde(default, rename = "type")]
    ty: Option<String>,
    #[serde(default = "default_orient")]
    orient: Orientation,
    #[serde(default)]
    side: Vec<String>,
    #[serde(default)]
    inst: Vec<RawInst>,
}

fn default_orient() -> Orientation {
    Orientation::Both
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInst {
    #[serde(default)]
    bind: BTreeMap<String, String>,
    #[serde(default, rename = "type")]
    ty: Option<String>,
    #[serde(default)]
    embed: Option<Embedding>,
}

pub const CATALOG_VERSION: u32 = 1;

/// The catalog compiled into the library.
pub const BUILTIN_CATALOG: &str = include_str!("../../data/rules.toml");

pub fn load_catalog(text: &str) -> Result<Vec<RewriteRule>, CatalogError> {
    let raw: RawCatalog = toml::from_str(text).map_err(|e| CatalogError { context: "toml".into(), message: e.to_string() })?;
    if raw.version != CATALOG_VERSION {
        return Err(CatalogError {
            context: "version".into(),
            message: format!("unsupported version {} (expected {CATALOG_VERSION})", raw.version),
        });
    }
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::with_capacity(raw.rule.len());
    for r in raw.rule {
        let err = |message: String| CatalogError { context: format!("rule `{}`", r.name), message };
        if !seen.insert(r.name.clone()) {
            return Err(err("duplicate name".into()));
        }
        if r.phase >= 8 {
            return Err(err(format!("phase {} out of range 0..8", r.phase)));
        }
        let term = |s: &str| parse(s).map(|t| normalize(&t)).map_err(|e| err(format!("`{s}`: {e}")));
        let sig = |s: &Option<String>| -> Result<_, CatalogError> {
            s.as_deref().map(|s| parse_signature(s).map_err(|e| err(format!("type `{s}`: {e}")))).transpose()
        };
        let insts = r
            .inst
            .iter()
            .map(|i| {
                let bind = i
                    .bind
                    .iter()
                    .map(|(k, v)| Ok((k.trim_start_matches('?').to_string(), term(v)?)))
                    .collect::<Result<_, CatalogError>>()?;
                if let Some(e) = &i.embed {
                    let mut sorted = e.map.clone();
                    sorted.sort_unstable();
                    sorted.dedup();
                    if sorted.len() != e.map.len() || e.map.iter().any(|&j| j >= e.dim) {
                        return Err(err(format!("bad embedding {:?} into {}", e.map, e.dim)));
                    }
                }
                Ok(Instantiation { bind, ty: sig(&i.ty)?, embed: i.embed.clone() })
            })
            .collect::<Result<Vec<_>, _>>()?;
        out.push(RewriteRule {
            lhs: term(&r.lhs)?,
            rhs: term(&r.rhs)?,
            ty: sig(&r.ty)?,
            side: r.side.iter().map(|s| SideCondition::parse(s)).collect::<Result<_, _>>().map_err(err)?,
            name: r.name,
            family: r.family,
            qubits: r.qubits,
            phase: r.phase,
            orient: r.orient,
            insts,
        });
    }
    Ok(out)
}

/// The built-in rule database.
pub fn rule_db() -> &'static [RewriteRule] {
    static DB: OnceLock<Vec<RewriteRule>> = OnceLock::new();
    DB.get_or_init(|| load_catalog(BUILTIN_CATALOG).expect("built-in catalog is valid"))
}

/// Rules from the file named by `SQRTPI_RULE_CATALOG`, or the built-in set.
pub fn load_rules() -> Result<Vec<RewriteRule>, CatalogError> {
    match std::env::var_os("SQRTPI_RULE_CATALOG") {
        Some(path) => {
            let text = std::fs::read_to_string(&path).map_err(|e| CatalogError {
                context: path.to_string_lossy().into_owned(),
                message: e.to_string(),
            })?;
            load_catalog(&text)
        }
        None => Ok(rule_db().to_vec()),
    }
}

pub fn find_rule<'a>(rules: &'a [RewriteRule], name: &str) -> Option<&'a RewriteRule> {
    rules.iter().find(|r| r.name == name)
}
