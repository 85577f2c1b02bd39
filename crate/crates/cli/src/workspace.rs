//! The workspace: named objects loaded from documents, kept in a flat JSON file
//! between invocations.
//!
//! Documents are JSON objects with a `kind` and a `name`:
//!
//! ```text
//! {"kind":"system","name":n, "states":[…],"actions":{…},"reactions":{…},"next":{…}}
//! {"kind":"system","name":n, "expr":"dual(stack1)"}
//! {"kind":"relation","name":n, "from":expr,"to":expr, "pairs":[[v,v],…]}
//! {"kind":"safety","name":n, "system":expr, "states":[v,…]}
//! {"kind":"valuation","name":n, "atoms":{"a":expr,…}}
//! {"kind":"term","name":n, "context":"y : a", "term":"(\\x. x) y"}
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Value as Json};
use simlab_core::kernel::{build_system, parse_system_expr, stack_example, SystemSpec};
use simlab_core::laws::{coin, flip};
use simlab_core::lambda::{parse_context, parse_term, Context, Term};
use simlab_core::semantics::Valuation;
use simlab_core::{Budget, Relation, System, Value};

use crate::error::{CliError, Result};
use crate::json::{system_from_json, value_from_json, values_from_json};

pub const DEFAULT_PATH: &str = "simlab.ws.json";

pub const KINDS: [&str; 5] = ["system", "relation", "safety", "valuation", "term"];

#[derive(Debug, Clone)]
pub struct NamedRelation {
    pub from: String,
    pub to: String,
    pub relation: Relation,
}

#[derive(Debug, Clone)]
pub struct NamedSafety {
    pub system: String,
    pub states: BTreeSet<Value>,
}

/// Objects resolved from the workspace documents.
#[derive(Debug, Clone, Default)]
pub struct Env {
    pub systems: BTreeMap<String, System>,
    pub relations: BTreeMap<String, NamedRelation>,
    pub safety: BTreeMap<String, NamedSafety>,
    pub valuations: BTreeMap<String, BTreeMap<String, String>>,
    pub terms: BTreeMap<String, (Context, Term)>,
}

/// Systems available without loading anything.
pub fn builtins() -> BTreeMap<String, System> {
    let mut m = BTreeMap::new();
    for n in 1..=3 {
        m.insert(format!("stack{n}"), stack_example(n).relabel(format!("stack{n}")));
    }
    m.insert("flip".into(), flip());
    m.insert("coin".into(), coin());
    m
}

#[derive(Debug)]
pub struct Workspace {
    pub path: PathBuf,
    docs: Vec<Json>,
    pub budget: Budget,
    pub env: Env,
}

impl Workspace {
    /// Opens the workspace file, or an empty workspace if it does not exist yet.
    pub fn open(path: impl Into<PathBuf>, budget: Budget) -> Result<Workspace> {
        let path = path.into();
        let docs = if path.exists() {
            let text = read(&path)?;
            let j: Json = serde_json::from_str(&text).map_err(|e| CliError::parse(path.display().to_string(), e))?;
            j.get("objects")
                .and_then(Json::as_array)
                .cloned()
                .ok_or_else(|| CliError::parse(path.display().to_string(), "expected {\"objects\": [...]}"))?
        } else {
            Vec::new()
        };
        let mut ws = Workspace {
            path,
            docs: Vec::new(),
            budget,
            env: Env {
                systems: builtins(),
                ..Env::default()
            },
        };
        for (i, d) in docs.into_iter().enumerate() {
            let at = format!("{}: objects[{i}]", ws.path.display());
            ws.add(d, &at)?;
        }
        Ok(ws)
    }

    pub fn save(&self) -> Result<()> {
        let text = serde_json::to_string_pretty(&json!({ "objects": self.docs })).expect("JSON values serialize");
        fs::write(&self.path, text + "\n").map_err(|source| CliError::Io {
            path: self.path.display().to_string(),
            source,
        })
    }

    pub fn documents(&self) -> &[Json] {
        &self.docs
    }

    /// Validates a document against the current objects and adds it.
    /// Returns `(kind, name)`.
    pub fn add(&mut self, doc: Json, at: &str) -> Result<(String, String)> {
        let kind = field_str(&doc, "kind", at)?.to_string();
        let name = field_str(&doc, "name", at)?.to_string();
        let taken = self.docs.iter().any(|d| {
            d.get("kind").and_then(Json::as_str) == Some(&kind) && d.get("name").and_then(Json::as_str) == Some(&name)
        });
        if taken {
            return Err(CliError::invalid(at, format!("{kind} `{name}` is already defined")));
        }
        match kind.as_str() {
            "system" => {
                let w = if let Some(e) = doc.get("expr") {
                    let src = e.as_str().ok_or_else(|| CliError::parse(at, "expr must be a string"))?;
                    self.system(src)
                        .map_err(|e| CliError::invalid(format!("{at}: expr"), e))?
                        .relabel(name.clone())
                } else {
                    system_from_json(&doc, at)?.relabel(name.clone())
                };
                self.env.systems.insert(name.clone(), w);
            }
            "relation" => {
                let from = field_str(&doc, "from", at)?.to_string();
                let to = field_str(&doc, "to", at)?.to_string();
                let (w1, w2) = (self.system_at(&from, at)?, self.system_at(&to, at)?);
                let mut relation = Relation::new();
                let pairs = doc.get("pairs").and_then(Json::as_array).ok_or_else(|| CliError::parse(at, "missing pairs"))?;
                for (i, p) in pairs.iter().enumerate() {
                    let loc = format!("{at}: pairs[{i}]");
                    let vs = values_from_json(p, &loc)?;
                    let [l, r] = vs.as_slice() else {
                        return Err(CliError::parse(loc, "a pair is [left, right]"));
                    };
                    check_state(&w1, l, &loc)?;
                    check_state(&w2, r, &loc)?;
                    relation.insert(l.clone(), r.clone());
                }
                self.env.relations.insert(name.clone(), NamedRelation { from, to, relation });
            }
            "safety" => {
                let system = field_str(&doc, "system", at)?.to_string();
                let w = self.system_at(&system, at)?;
                let states = values_from_json(doc.get("states").unwrap_or(&Json::Null), &format!("{at}: states"))?;
                for s in &states {
                    check_state(&w, s, &format!("{at}: states"))?;
                }
                self.env.safety.insert(
                    name.clone(),
                    NamedSafety {
                        system,
                        states: states.into_iter().collect(),
                    },
                );
            }
            "valuation" => {
                let atoms = doc
                    .get("atoms")
                    .and_then(Json::as_object)
                    .ok_or_else(|| CliError::parse(at, "missing atoms object"))?;
                let mut m = BTreeMap::new();
                for (a, e) in atoms {
                    let src = e.as_str().ok_or_else(|| CliError::parse(at, format!("atom {a}: expected an expression")))?;
                    self.system_at(src, &format!("{at}: atoms.{a}"))?;
                    m.insert(a.clone(), src.to_string());
                }
                self.env.valuations.insert(name.clone(), m);
            }
            "term" => {
                let ctx = parse_context(doc.get("context").and_then(Json::as_str).unwrap_or(""))
                    .map_err(|e| CliError::parse(format!("{at}: context"), e))?;
                let t = parse_term(field_str(&doc, "term", at)?).map_err(|e| CliError::parse(format!("{at}: term"), e))?;
                simlab_core::lambda::typecheck(&ctx, &t).map_err(|e| CliError::invalid(format!("{at}: term"), e))?;
                self.env.terms.insert(name.clone(), (ctx, t));
            }
            other => {
                return Err(CliError::invalid(
                    at,
                    format!("unknown kind `{other}` (expected one of {})", KINDS.join(", ")),
                ))
            }
        }
        self.docs.push(doc);
        Ok((kind, name))
    }

    /// Loads one document file.
    pub fn load_file(&mut self, path: &Path) -> Result<(String, String)> {
        let at = path.display().to_string();
        let text = read(path)?;
        let doc: Json = serde_json::from_str(&text).map_err(|e| CliError::parse(&at, e))?;
        self.add(doc, &at)
    }

    /// Resolves a system expression against the named systems.
    pub fn system(&self, src: &str) -> Result<System> {
        let e = parse_system_expr(src).map_err(|e| CliError::parse(format!("expression `{src}`"), e))?;
        Ok(build_system(&SystemSpec::Expr(e), &self.env.systems, &self.budget)?)
    }

    fn system_at(&self, src: &str, at: &str) -> Result<System> {
        self.system(src).map_err(|e| CliError::invalid(at, e))
    }

    /// Resolves a valuation: a workspace name, a document file, or inline `a=expr;b=expr`.
    pub fn valuation(&self, spec: Option<&str>, atoms: &BTreeSet<String>) -> Result<Valuation> {
        let bindings: BTreeMap<String, String> = match spec {
            None => BTreeMap::new(),
            Some(s) if self.env.valuations.contains_key(s) => self.env.valuations[s].clone(),
            Some(s) if Path::new(s).is_file() => {
                let text = read(Path::new(s))?;
                let doc: Json = serde_json::from_str(&text).map_err(|e| CliError::parse(s, e))?;
                let atoms = doc
                    .get("atoms")
                    .and_then(Json::as_object)
                    .ok_or_else(|| CliError::parse(s, "missing atoms object"))?;
                atoms
                    .iter()
                    .map(|(a, e)| {
                        let src = e.as_str().ok_or_else(|| CliError::parse(s, format!("atom {a}: expected an expression")))?;
                        Ok((a.clone(), src.to_string()))
                    })
                    .collect::<Result<_>>()?
            }
            Some(s) => s
                .split(';')
                .filter(|p| !p.trim().is_empty())
                .map(|p| {
                    let (a, e) = p
                        .split_once('=')
                        .ok_or_else(|| CliError::Usage(format!("valuation `{s}`: expected a name, a file or a=expr;…")))?;
                    Ok((a.trim().to_string(), e.trim().to_string()))
                })
                .collect::<Result<_>>()?,
        };
        let mut v = Valuation::new();
        for a in atoms {
            let w = match bindings.get(a) {
                Some(src) => self.system(src)?,
                None => simlab_core::connectives::unit_i(),
            };
            v.insert(a.clone(), w);
        }
        for (a, src) in &bindings {
            if !v.contains_key(a) {
                v.insert(a.clone(), self.system(src)?);
            }
        }
        Ok(v)
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn field_str<'a>(doc: &'a Json, field: &str, at: &str) -> Result<&'a str> {
    doc.get(field)
        .and_then(Json::as_str)
        .ok_or_else(|| CliError::parse(at, format!("missing string field `{field}`")))
}

fn check_state(w: &System, s: &Value, at: &str) -> Result<()> {
    if w.is_state(s) {
        Ok(())
    } else {
        Err(CliError::invalid(at, format!("{s} is not a state of {w}")))
    }
}

/// Reads a single value written as JSON or in text form.
pub fn parse_value(src: &str) -> Result<Value> {
    match serde_json::from_str::<Json>(src) {
        Ok(j @ Json::Object(_)) => value_from_json(&j, src),
        _ => src.parse().map_err(|e| CliError::parse(format!("value `{src}`"), e)),
    }
}
