//! Tagged JSON encoding of values and the system document format.
//!
//! Values: `"unit"`, `{"atom":s}`, `{"pair":[l,r]}`, `{"tag":[i,v]}`, `{"list":[…]}`,
//! `{"bag":[…]}`, `{"table":[[k,v],…]}`, `{"leaf":v}`, `{"node":[[…],v]}`.
//! A bare string other than `"unit"` is read as an atom.
//!
//! Object keys in system documents (`actions`, `reactions`, `next`) are values in
//! their text form, e.g. `"(0)"` or `"<Push, 1>"`.

use std::collections::BTreeMap;
use std::str::FromStr;

use serde_json::{json, Map, Value as Json};
use simlab_core::kernel::TableBuilder;
use simlab_core::{System, Value};

use crate::error::{CliError, Result};

pub fn value_to_json(v: &Value) -> Json {
    let seq = |xs: &[Value]| Json::Array(xs.iter().map(value_to_json).collect());
    match v {
        Value::Unit => json!("unit"),
        Value::Atom(a) => json!({ "atom": a }),
        Value::Pair(l, r) => json!({ "pair": [value_to_json(l), value_to_json(r)] }),
        Value::Tag(i, x) => json!({ "tag": [i, value_to_json(x)] }),
        Value::List(xs) => json!({ "list": seq(xs) }),
        Value::Bag(xs) => json!({ "bag": seq(xs) }),
        Value::Table(es) => json!({
            "table": es.iter().map(|(k, x)| json!([value_to_json(k), value_to_json(x)])).collect::<Vec<_>>()
        }),
        Value::Leaf(x) => json!({ "leaf": value_to_json(x) }),
        Value::Node(bag, next) => json!({ "node": [seq(bag), value_to_json(next)] }),
    }
}

pub fn value_from_json(j: &Json, at: &str) -> Result<Value> {
    let bad = |what: &str| CliError::parse(at, format!("{what} in {j}"));
    let items = |x: &Json, at: &str| -> Result<Vec<Value>> {
        x.as_array()
            .ok_or_else(|| CliError::parse(at, "expected an array"))?
            .iter()
            .enumerate()
            .map(|(i, y)| value_from_json(y, &format!("{at}[{i}]")))
            .collect()
    };
    match j {
        Json::String(s) if s == "unit" => Ok(Value::Unit),
        Json::String(s) => Ok(Value::atom(s.clone())),
        Json::Object(m) if m.len() == 1 => {
            let (k, x) = m.iter().next().expect("one entry");
            let at = format!("{at}.{k}");
            match k.as_str() {
                "atom" => x.as_str().map(Value::atom).ok_or_else(|| bad("atom name must be a string")),
                "pair" => match items(x, &at)?.as_slice() {
                    [l, r] => Ok(Value::pair(l.clone(), r.clone())),
                    _ => Err(bad("a pair has two components")),
                },
                "tag" => match x.as_array().map(Vec::as_slice) {
                    Some([Json::Number(n), y]) if matches!(n.as_u64(), Some(1 | 2)) => {
                        Ok(Value::tag(n.as_u64().expect("checked") as u8, value_from_json(y, &at)?))
                    }
                    _ => Err(bad("a tag is [1 or 2, value]")),
                },
                "list" => Ok(Value::list(items(x, &at)?)),
                "bag" => Ok(Value::bag(items(x, &at)?)),
                "leaf" => Ok(Value::leaf(value_from_json(x, &at)?)),
                "node" => match x.as_array().map(Vec::as_slice) {
                    Some([bag, next]) => Ok(Value::node(items(bag, &at)?, value_from_json(next, &at)?)),
                    _ => Err(bad("a node is [bag, value]")),
                },
                "table" => {
                    let entries = x
                        .as_array()
                        .ok_or_else(|| bad("a table is a list of [key, value]"))?
                        .iter()
                        .enumerate()
                        .map(|(i, e)| match e.as_array().map(Vec::as_slice) {
                            Some([k, y]) => {
                                let at = format!("{at}[{i}]");
                                Ok((value_from_json(k, &at)?, value_from_json(y, &at)?))
                            }
                            _ => Err(bad("a table entry is [key, value]")),
                        })
                        .collect::<Result<Vec<_>>>()?;
                    Value::table(entries).map_err(|e| CliError::invalid(at, e))
                }
                other => Err(bad(&format!("unknown value tag `{other}`"))),
            }
        }
        _ => Err(bad("not a value")),
    }
}

pub fn values_from_json(j: &Json, at: &str) -> Result<Vec<Value>> {
    j.as_array()
        .ok_or_else(|| CliError::parse(at, "expected an array of values"))?
        .iter()
        .enumerate()
        .map(|(i, x)| value_from_json(x, &format!("{at}[{i}]")))
        .collect()
}

fn key(k: &str, at: &str) -> Result<Value> {
    Value::from_str(k).map_err(|e| CliError::parse(at, format!("key `{k}`: {e}")))
}

fn object<'a>(j: Option<&'a Json>, at: &str) -> Result<Option<&'a Map<String, Json>>> {
    match j {
        None => Ok(None),
        Some(Json::Object(m)) => Ok(Some(m)),
        Some(_) => Err(CliError::parse(at, "expected an object")),
    }
}

/// Reads an explicit system table; `doc` holds `states`, `actions`, `reactions` and `next`.
pub fn system_from_json(doc: &Json, at: &str) -> Result<System> {
    let name = doc.get("name").and_then(Json::as_str).unwrap_or("table");
    let states = values_from_json(doc.get("states").unwrap_or(&Json::Null), &format!("{at}: states"))?;
    let mut b = TableBuilder::new();
    for s in &states {
        b.state(s.clone());
    }
    let declared = |s: &Value, at: &str| -> Result<()> {
        if states.contains(s) {
            Ok(())
        } else {
            Err(CliError::invalid(at, format!("{s} is not a declared state")))
        }
    };
    if let Some(acts) = object(doc.get("actions"), at)? {
        for (sk, list) in acts {
            let loc = format!("{at}: actions.{sk}");
            let s = key(sk, &loc)?;
            declared(&s, &loc)?;
            for a in values_from_json(list, &loc)? {
                b.action(s.clone(), a);
            }
        }
    }
    let mut next = BTreeMap::new();
    if let Some(n) = object(doc.get("next"), at)? {
        for (sk, per_action) in n {
            let loc = format!("{at}: next.{sk}");
            let s = key(sk, &loc)?;
            for (ak, per_reaction) in object(Some(per_action), &loc)?.into_iter().flatten() {
                let loc = format!("{loc}.{ak}");
                let a = key(ak, &loc)?;
                for (dk, target) in object(Some(per_reaction), &loc)?.into_iter().flatten() {
                    let loc = format!("{loc}.{dk}");
                    let d = key(dk, &loc)?;
                    next.insert((s.clone(), a.clone(), d), value_from_json(target, &loc)?);
                }
            }
        }
    }
    if let Some(reacts) = object(doc.get("reactions"), at)? {
        for (sk, per_action) in reacts {
            let loc = format!("{at}: reactions.{sk}");
            let s = key(sk, &loc)?;
            declared(&s, &loc)?;
            let per_action = per_action
                .as_object()
                .ok_or_else(|| CliError::parse(&loc, "expected an object keyed by action"))?;
            for (ak, ds) in per_action {
                let loc = format!("{loc}.{ak}");
                let a = key(ak, &loc)?;
                for d in values_from_json(ds, &loc)? {
                    let t = next
                        .remove(&(s.clone(), a.clone(), d.clone()))
                        .ok_or_else(|| CliError::invalid(&loc, format!("no next state for reaction {d}")))?;
                    b.transition(s.clone(), a.clone(), d, t);
                }
            }
        }
    }
    if let Some(((s, a, d), _)) = next.first_key_value() {
        return Err(CliError::invalid(
            format!("{at}: next"),
            format!("entry for {s}, {a}, {d} has no matching reaction"),
        ));
    }
    let table = b.build().map_err(|e| CliError::invalid(at, e))?;
    Ok(System::from_table(table, name))
}

/// The table document of a finite system.
pub fn system_to_json(w: &System, name: &str) -> Result<Json> {
    let states = w
        .states()
        .ok_or_else(|| CliError::Core(simlab_core::Error::NotFinite(w.label().to_string())))?;
    let (mut actions, mut reactions, mut next) = (Map::new(), Map::new(), Map::new());
    for s in &states {
        let acts = w.actions(s)?;
        let (mut rs, mut ns) = (Map::new(), Map::new());
        for a in acts.iter() {
            let ds = w.reactions(s, a)?;
            let mut targets = Map::new();
            for d in &ds {
                targets.insert(d.to_string(), value_to_json(&w.step(s, a, d)?));
            }
            rs.insert(a.to_string(), Json::Array(ds.iter().map(value_to_json).collect()));
            ns.insert(a.to_string(), Json::Object(targets));
        }
        actions.insert(s.to_string(), Json::Array(acts.iter().map(value_to_json).collect()));
        reactions.insert(s.to_string(), Json::Object(rs));
        next.insert(s.to_string(), Json::Object(ns));
    }
    Ok(json!({
        "kind": "system",
        "name": name,
        "states": states.iter().map(value_to_json).collect::<Vec<_>>(),
        "actions": actions,
        "reactions": reactions,
        "next": next,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use simlab_core::kernel::stack_example;

    #[test]
    fn values_round_trip() {
        let v = Value::pair(
            Value::bag(vec![Value::atom("b"), Value::atom("a")]),
            Value::list(vec![Value::leaf(Value::Unit), Value::atom("1")]),
        );
        let t = Value::table(vec![(Value::atom("k"), Value::tag(2, v.clone()))]).unwrap();
        for x in [v, t, Value::node(vec![Value::leaf(Value::Unit)], Value::leaf(Value::atom("s")))] {
            assert_eq!(value_from_json(&value_to_json(&x), "test").unwrap(), x);
        }
    }

    #[test]
    fn stack_round_trips() {
        let w = stack_example(2);
        let doc = system_to_json(&w, "stack2").unwrap();
        let back = system_from_json(&doc, "test").unwrap();
        assert_eq!(system_to_json(&back, "stack2").unwrap(), doc);
    }

    #[test]
    fn dangling_next_is_rejected() {
        let doc = json!({
            "states": [{"atom": "s"}],
            "reactions": {"s": {"go": ["ok"]}},
            "next": {"s": {"go": {"ok": "elsewhere"}}},
        });
        assert!(matches!(system_from_json(&doc, "f"), Err(CliError::Validation { .. })));
    }
}
