//! The commands behind the `simlab` binary. Each returns its printed output
//! and an exit code: 0 holds, 1 fails, 2 budget exhausted (3, usage errors,
//! comes from [`CliError::exit_code`]).

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::PathBuf;

use simlab_core::category::{greatest_simulation, is_iso, is_safety, is_simulation, SafetyProperty};
use simlab_core::kernel::{parse_system_expr, parse_value_set};
use simlab_core::lambda::{infer_open, parse_context, parse_term, parse_type, reduce, typecheck, Context, Term};
use simlab_core::laws::{self, CRITERIA};
use simlab_core::pt::{angelic, is_refinement};
use simlab_core::reflexive::interp_untyped;
use simlab_core::semantics::{check_soundness, interp_term_at};
use simlab_core::{Relation, System, Value, Verdict};

use crate::error::{CliError, Result};
use crate::json::system_to_json;
use crate::workspace::Workspace;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub text: String,
    pub code: u8,
}

impl Output {
    fn ok(text: String) -> Output {
        Output { text, code: 0 }
    }
}

pub fn load(ws: &mut Workspace, files: &[PathBuf]) -> Result<Output> {
    let mut text = String::new();
    for f in files {
        let (kind, name) = ws.load_file(f)?;
        writeln!(text, "loaded {kind} {name}").unwrap();
    }
    ws.save()?;
    Ok(Output::ok(text))
}

/// `build <name> = <expr>`; the words after the name are joined into the expression.
pub fn build(ws: &mut Workspace, words: &[String]) -> Result<Output> {
    let joined = words.join(" ");
    let (name, expr) = joined
        .split_once('=')
        .ok_or_else(|| CliError::Usage("usage: simlab build <name> = <expr>".into()))?;
    let (name, expr) = (name.trim(), expr.trim());
    if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || "_-.".contains(c)) {
        return Err(CliError::Usage(format!("`{name}` is not a valid name")));
    }
    let e = parse_system_expr(expr).map_err(|e| CliError::parse(format!("expression `{expr}`"), e))?;
    let doc = serde_json::json!({ "kind": "system", "name": name, "expr": e.to_string() });
    ws.add(doc, "build")?;
    ws.save()?;
    Ok(Output::ok(format!("built system {name} = {e}\n")))
}

pub fn list(ws: &Workspace) -> Result<Output> {
    let mut text = String::new();
    let env = &ws.env;
    for (n, w) in &env.systems {
        writeln!(text, "system {n}: {}", w.label()).unwrap();
    }
    for (n, r) in &env.relations {
        writeln!(text, "relation {n}: {} -> {}, {} pairs", r.from, r.to, r.relation.len()).unwrap();
    }
    for (n, s) in &env.safety {
        writeln!(text, "safety {n}: {} states of {}", s.states.len(), s.system).unwrap();
    }
    for (n, v) in &env.valuations {
        let items: Vec<String> = v.iter().map(|(a, e)| format!("{a} = {e}")).collect();
        writeln!(text, "valuation {n}: {}", items.join(", ")).unwrap();
    }
    for (n, (ctx, t)) in &env.terms {
        let ty = typecheck(ctx, t)?;
        writeln!(text, "term {n}: {t} : {ty}").unwrap();
    }
    Ok(Output::ok(text))
}

/// The table document of a finite system, as pretty JSON.
pub fn export(ws: &Workspace, expr: &str) -> Result<Output> {
    let w = ws.system(expr)?;
    let doc = system_to_json(&w, expr)?;
    Ok(Output::ok(serde_json::to_string_pretty(&doc).expect("JSON values serialize") + "\n"))
}

fn states_of(ws: &Workspace, w: &System) -> Result<Vec<Value>> {
    Ok(w.slice(&ws.budget)?)
}

/// A relation argument: `empty`, `id`, `greatest`, a workspace name, or a literal `{<a, b>, …}`.
fn relation(ws: &Workspace, arg: &str, w1: &System, w2: &System) -> Result<Relation> {
    Ok(match arg {
        "empty" => Relation::new(),
        "id" => Relation::identity(states_of(ws, w1)?.iter()),
        "greatest" => greatest_simulation(w1, w2)?,
        name if ws.env.relations.contains_key(name) => ws.env.relations[name].relation.clone(),
        lit if lit.trim_start().starts_with('{') => {
            let mut r = Relation::new();
            for p in parse_value_set(lit).map_err(|e| CliError::parse(format!("relation `{lit}`"), e))? {
                let (l, x) = p
                    .as_pair()
                    .ok_or_else(|| CliError::parse(format!("relation `{lit}`"), format!("{p} is not a pair <l, r>")))?;
                r.insert(l.clone(), x.clone());
            }
            r
        }
        other => return Err(CliError::Usage(format!("unknown relation `{other}`"))),
    })
}

fn safety_property(ws: &Workspace, arg: &str, w: &System) -> Result<SafetyProperty> {
    Ok(match arg {
        "all" => states_of(ws, w)?.into_iter().collect(),
        name if ws.env.safety.contains_key(name) => ws.env.safety[name].states.clone(),
        lit if lit.trim_start().starts_with('{') => parse_value_set(lit)
            .map_err(|e| CliError::parse(format!("state set `{lit}`"), e))?
            .into_iter()
            .collect(),
        other => return Err(CliError::Usage(format!("unknown safety property `{other}`"))),
    })
}

fn verdict(what: &str, v: &Verdict) -> Output {
    let mut text = format!("check {what}\n");
    let code = if v.holds {
        text.push_str("verdict: holds\n");
        0
    } else if v.budget_exhausted {
        text.push_str("verdict: budget exhausted\n");
        2
    } else {
        text.push_str("verdict: fails\n");
        1
    };
    if let Some(cx) = &v.counterexample {
        writeln!(text, "counterexample: {cx}").unwrap();
    }
    if let Some(d) = &v.detail {
        writeln!(text, "detail: {d}").unwrap();
    }
    Output { text, code }
}

fn need(args: &[String], n: usize, usage: &str) -> Result<()> {
    if args.len() == n {
        Ok(())
    } else {
        Err(CliError::Usage(format!("usage: simlab check {usage}")))
    }
}

pub struct TermArgs<'a> {
    pub ctx: Option<&'a str>,
    pub ty: Option<&'a str>,
    pub val: Option<&'a str>,
}

/// A term argument: a workspace term name or a literal term with an optional context.
fn term(ws: &Workspace, src: &str, ctx: Option<&str>) -> Result<(Context, Term)> {
    if let Some((c, t)) = ws.env.terms.get(src) {
        return Ok((c.clone(), t.clone()));
    }
    let t = parse_term(src).map_err(|e| CliError::parse(format!("term `{src}`"), e))?;
    let c = match ctx {
        Some(c) => parse_context(c).map_err(|e| CliError::parse(format!("context `{c}`"), e))?,
        None => infer_open(&t)?.0,
    };
    Ok((c, t))
}

fn atoms_of(ctx: &Context, ty: &simlab_core::lambda::Type) -> BTreeSet<String> {
    let mut a = ctx.atoms();
    a.extend(ty.atoms());
    a
}

pub fn check(ws: &Workspace, kind: &str, args: &[String], targs: &TermArgs) -> Result<Output> {
    let label = format!("{kind} {}", args.join(" "));
    let v = match kind {
        "sim" | "iso" | "refine" => {
            need(args, 3, &format!("{kind} <relation> <system> <system>"))?;
            let (w1, w2) = (ws.system(&args[1])?, ws.system(&args[2])?);
            let r = relation(ws, &args[0], &w1, &w2)?;
            match kind {
                "sim" => is_simulation(&r, &w1, &w2)?,
                "iso" => is_iso(&r, &w1, &w2)?,
                _ => is_refinement(&r, &angelic(&w1)?, &angelic(&w2)?)?,
            }
        }
        "safety" => {
            need(args, 2, "safety <states> <system>")?;
            let w = ws.system(&args[1])?;
            is_safety(&safety_property(ws, &args[0], &w)?, &w)?
        }
        "soundness" => {
            need(args, 1, "soundness <term> [--ctx Γ] [--val valuation]")?;
            let (ctx, t) = term(ws, &args[0], targs.ctx)?;
            let ty = typecheck(&ctx, &t)?;
            let v = ws.valuation(targs.val, &atoms_of(&ctx, &ty))?;
            check_soundness(&ctx, &t, &v, &ws.budget)?
        }
        other => {
            return Err(CliError::Usage(format!(
                "unknown check `{other}` (expected sim, safety, iso, refine or soundness)"
            )))
        }
    };
    Ok(verdict(label.trim_end(), &v))
}

pub fn eval(ws: &Workspace, mode: &str, src: &str, targs: &TermArgs, base: &str) -> Result<Output> {
    match mode {
        "reduce" => {
            let t = match ws.env.terms.get(src) {
                Some((_, t)) => t.clone(),
                None => parse_term(src).map_err(|e| CliError::parse(format!("term `{src}`"), e))?,
            };
            let r = reduce(&t, ws.budget.fuel);
            let mut text = format!("{}\n", r.term);
            if r.exhausted {
                writeln!(text, "fuel exhausted after {} steps", r.steps).unwrap();
                return Ok(Output { text, code: 2 });
            }
            Ok(Output::ok(text))
        }
        "interp" => {
            let (ctx, t) = term(ws, src, targs.ctx)?;
            let ty = match targs.ty {
                Some(s) => Some(parse_type(s).map_err(|e| CliError::parse(format!("type `{s}`"), e))?),
                None => None,
            };
            let shown = match &ty {
                Some(ty) => ty.clone(),
                None => typecheck(&ctx, &t)?,
            };
            let v = ws.valuation(targs.val, &atoms_of(&ctx, &shown))?;
            let den = interp_term_at(&ctx, &t, ty.as_ref(), &v, &ws.budget)?;
            let mut text = String::new();
            let bindings: Vec<String> = v.iter().map(|(a, w)| format!("{a} = {}", w.label())).collect();
            let turnstile = if ctx.is_empty() { "⊢".to_string() } else { format!("{ctx} ⊢") };
            writeln!(text, "{turnstile} {t} : {}", den.ty).unwrap();
            writeln!(text, "valuation: {}", bindings.join(", ")).unwrap();
            writeln!(text, "bags ≤ {}: {} elements", ws.budget.bag, den.len()).unwrap();
            listing(&mut text, den.elements.iter());
            Ok(Output::ok(text))
        }
        "interp-untyped" => {
            let t = parse_term(src).map_err(|e| CliError::parse(format!("term `{src}`"), e))?;
            let w = ws.system(base)?;
            let den = interp_untyped(&w, &t, &ws.budget)?;
            let mut text = String::new();
            writeln!(text, "variables: {}", den.vars.join(", ")).unwrap();
            writeln!(
                text,
                "depth ≤ {}, bags ≤ {}: {} elements{}",
                ws.budget.depth,
                ws.budget.bag,
                den.elements.len(),
                if den.truncated { " (truncated by the budget)" } else { "" }
            )
            .unwrap();
            listing(&mut text, den.elements.iter());
            Ok(Output::ok(text))
        }
        other => Err(CliError::Usage(format!(
            "unknown eval mode `{other}` (expected reduce, interp or interp-untyped)"
        ))),
    }
}

fn listing<T: std::fmt::Display>(text: &mut String, items: impl Iterator<Item = T>) {
    let mut empty = true;
    for x in items {
        writeln!(text, "{x}").unwrap();
        empty = false;
    }
    if empty {
        text.push_str("∅\n");
    }
}

/// Runs a criterion by number or name, or all of them.
pub fn run_laws(suite: &str) -> Result<Output> {
    let selected: Vec<_> = if suite == "all" {
        CRITERIA.iter().collect()
    } else {
        vec![laws::find(suite).ok_or_else(|| {
            let names: Vec<&str> = CRITERIA.iter().map(|c| c.name).collect();
            CliError::Usage(format!("unknown suite `{suite}` (expected all, 1-13 or one of {})", names.join(", ")))
        })?]
    };
    let mut text = String::new();
    let mut code = 0;
    for c in selected {
        let o = c.run();
        writeln!(text, "{o}").unwrap();
        if !o.passed() {
            code = 1;
            if let Some(why) = c.known_red() {
                writeln!(text, "     (known: {why})").unwrap();
            }
        }
    }
    Ok(Output { text, code })
}
