//! The universal carrier for states, actions and reactions.
//!
//! Every constructed system nests its components inside [`Value`], so the
//! derived `Ord` (constructor rank, then lexicographic on the fields) is the
//! single canonical order used for enumeration and for multiset normal forms.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Value {
    Unit,
    Atom(String),
    Pair(Box<Value>, Box<Value>),
    /// Injection into a binary sum; the index is 1 or 2.
    Tag(u8, Box<Value>),
    /// Ordered tuple, the states of `L(w)`.
    List(Vec<Value>),
    /// Finite multiset, kept sorted.
    Bag(Vec<Value>),
    /// Finite function, entries sorted by key with distinct keys.
    Table(Vec<(Value, Value)>),
    Leaf(Box<Value>),
    /// `Node(bag, next)`; the bag is kept sorted.
    Node(Vec<Value>, Box<Value>),
}

impl Value {
    pub fn atom(name: impl Into<String>) -> Value {
        Value::Atom(name.into())
    }

    pub fn pair(left: Value, right: Value) -> Value {
        Value::Pair(Box::new(left), Box::new(right))
    }

    pub fn tag(index: u8, payload: Value) -> Value {
        debug_assert!(index == 1 || index == 2);
        Value::Tag(index, Box::new(payload))
    }

    pub fn list(items: Vec<Value>) -> Value {
        Value::List(items)
    }

    pub fn bag(mut items: Vec<Value>) -> Value {
        items.sort();
        Value::Bag(items)
    }

    pub fn leaf(payload: Value) -> Value {
        Value::Leaf(Box::new(payload))
    }

    pub fn node(mut bag: Vec<Value>, next: Value) -> Value {
        bag.sort();
        Value::Node(bag, Box::new(next))
    }

    /// Builds a table, rejecting duplicate keys.
    pub fn table(mut entries: Vec<(Value, Value)>) -> Result<Value> {
        entries.sort();
        for w in entries.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::NonFunctionTable(w[0].0.to_string()));
            }
        }
        Ok(Value::Table(entries))
    }

    /// Table from entries already sorted by distinct keys.
    pub(crate) fn table_sorted(entries: Vec<(Value, Value)>) -> Value {
        debug_assert!(entries.windows(2).all(|w| w[0].0 < w[1].0));
        Value::Table(entries)
    }

    /// Looks a key up in a table value.
    pub fn lookup(&self, key: &Value) -> Option<&Value> {
        match self {
            Value::Table(entries) => entries
                .binary_search_by(|(k, _)| k.cmp(key))
                .ok()
                .map(|i| &entries[i].1),
            _ => None,
        }
    }

    pub fn as_pair(&self) -> Option<(&Value, &Value)> {
        match self {
            Value::Pair(l, r) => Some((l, r)),
            _ => None,
        }
    }

    pub fn as_bag(&self) -> Option<&[Value]> {
        match self {
            Value::Bag(items) => Some(items),
            _ => None,
        }
    }

    pub fn as_list(&self) -> Option<&[Value]> {
        match self {
            Value::List(items) => Some(items),
            _ => None,
        }
    }

    /// Checks the structural invariants (sorted bags, functional tables) recursively.
    pub fn is_canonical(&self) -> bool {
        match self {
            Value::Unit | Value::Atom(_) => true,
            Value::Pair(l, r) => l.is_canonical() && r.is_canonical(),
            Value::Tag(i, v) => (*i == 1 || *i == 2) && v.is_canonical(),
            Value::List(items) => items.iter().all(Value::is_canonical),
            Value::Bag(items) => {
                items.windows(2).all(|w| w[0] <= w[1]) && items.iter().all(Value::is_canonical)
            }
            Value::Table(entries) => {
                entries.windows(2).all(|w| w[0].0 < w[1].0)
                    && entries.iter().all(|(k, v)| k.is_canonical() && v.is_canonical())
            }
            Value::Leaf(v) => v.is_canonical(),
            Value::Node(bag, next) => {
                bag.windows(2).all(|w| w[0] <= w[1])
                    && bag.iter().all(Value::is_canonical)
                    && next.is_canonical()
            }
        }
    }

    /// Restores the invariants of a value built by hand (sorts bags, checks tables).
    pub fn canonicalize(self) -> Result<Value> {
        Ok(match self {
            Value::Unit | Value::Atom(_) => self,
            Value::Pair(l, r) => Value::pair(l.canonicalize()?, r.canonicalize()?),
            Value::Tag(i, v) => {
                if i != 1 && i != 2 {
                    return Err(Error::Invalid(format!("tag index {i} is not 1 or 2")));
                }
                Value::tag(i, v.canonicalize()?)
            }
            Value::List(items) => Value::List(canon_all(items)?),
            Value::Bag(items) => Value::bag(canon_all(items)?),
            Value::Table(entries) => Value::table(
                entries
                    .into_iter()
                    .map(|(k, v)| Ok((k.canonicalize()?, v.canonicalize()?)))
                    .collect::<Result<_>>()?,
            )?,
            Value::Leaf(v) => Value::leaf(v.canonicalize()?),
            Value::Node(bag, next) => Value::node(canon_all(bag)?, next.canonicalize()?),
        })
    }

    /// Nesting depth of `Node` constructors, the measure used by reflexive budgets.
    pub fn node_depth(&self) -> usize {
        match self {
            Value::Node(bag, next) => {
                1 + bag
                    .iter()
                    .map(Value::node_depth)
                    .chain(std::iter::once(next.node_depth()))
                    .max()
                    .unwrap_or(0)
            }
            _ => 0,
        }
    }
}

fn canon_all(items: Vec<Value>) -> Result<Vec<Value>> {
    items.into_iter().map(Value::canonicalize).collect()
}

fn is_bare_atom(name: &str) -> bool {
    !name.is_empty()
        && name
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '#')
        && !matches!(name, "Leaf" | "Node" | "in1" | "in2")
}

fn write_seq(f: &mut fmt::Formatter<'_>, items: &[Value]) -> fmt::Result {
    for (i, v) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{v}")?;
    }
    Ok(())
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Unit => f.write_str("*"),
            Value::Atom(name) if is_bare_atom(name) => f.write_str(name),
            Value::Atom(name) => {
                f.write_str("'")?;
                for c in name.chars() {
                    if c == '\'' || c == '\\' {
                        f.write_str("\\")?;
                    }
                    write!(f, "{c}")?;
                }
                f.write_str("'")
            }
            Value::Pair(l, r) => write!(f, "<{l}, {r}>"),
            Value::Tag(i, v) => write!(f, "in{i}({v})"),
            Value::List(items) => {
                f.write_str("(")?;
                write_seq(f, items)?;
                f.write_str(")")
            }
            Value::Bag(items) => {
                f.write_str("[")?;
                write_seq(f, items)?;
                f.write_str("]")
            }
            Value::Table(entries) => {
                f.write_str("{")?;
                for (i, (k, v)) in entries.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{k}: {v}")?;
                }
                f.write_str("}")
            }
            Value::Leaf(v) => write!(f, "Leaf({v})"),
            Value::Node(bag, next) => {
                f.write_str("Node([")?;
                write_seq(f, bag)?;
                write!(f, "], {next})")
            }
        }
    }
}

impl FromStr for Value {
    type Err = Error;

    fn from_str(s: &str) -> Result<Value> {
        let mut p = ValueParser::new(s);
        let v = p.value()?;
        p.skip_ws();
        if p.pos < p.src.len() {
            return Err(Error::syntax(p.pos, "trailing input after value"));
        }
        Ok(v)
    }
}

/// Parses `{v1, v2, ...}` into a sorted, deduplicated list of values.
pub fn parse_value_set(s: &str) -> Result<Vec<Value>> {
    let mut p = ValueParser::new(s);
    p.expect('{')?;
    let mut items = p.seq('}')?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(Error::syntax(p.pos, "trailing input after set"));
    }
    items.sort();
    items.dedup();
    Ok(items)
}

struct ValueParser<'a> {
    src: &'a [u8],
    text: &'a str,
    pos: usize,
}

impl<'a> ValueParser<'a> {
    fn new(text: &'a str) -> Self {
        ValueParser {
            src: text.as_bytes(),
            text,
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.peek() == Some(c as u8) {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::syntax(self.pos, format!("expected `{c}`")))
        }
    }

    fn seq(&mut self, close: char) -> Result<Vec<Value>> {
        let mut items = Vec::new();
        if self.peek() == Some(close as u8) {
            self.pos += 1;
            return Ok(items);
        }
        loop {
            items.push(self.value()?);
            match self.peek() {
                Some(b',') => self.pos += 1,
                Some(c) if c == close as u8 => {
                    self.pos += 1;
                    return Ok(items);
                }
                _ => return Err(Error::syntax(self.pos, format!("expected `,` or `{close}`"))),
            }
        }
    }

    fn ident(&mut self) -> &'a str {
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric()
                || self.src[self.pos] == b'_'
                || self.src[self.pos] == b'#')
        {
            self.pos += 1;
        }
        &self.text[start..self.pos]
    }

    fn value(&mut self) -> Result<Value> {
        match self.peek() {
            None => Err(Error::syntax(self.pos, "unexpected end of input")),
            Some(b'*') => {
                self.pos += 1;
                Ok(Value::Unit)
            }
            Some(b'<') => {
                self.pos += 1;
                let l = self.value()?;
                self.expect(',')?;
                let r = self.value()?;
                self.expect('>')?;
                Ok(Value::pair(l, r))
            }
            Some(b'(') => {
                self.pos += 1;
                Ok(Value::List(self.seq(')')?))
            }
            Some(b'[') => {
                self.pos += 1;
                Ok(Value::bag(self.seq(']')?))
            }
            Some(b'{') => {
                self.pos += 1;
                let mut entries = Vec::new();
                if self.peek() == Some(b'}') {
                    self.pos += 1;
                    return Ok(Value::Table(entries));
                }
                loop {
                    let k = self.value()?;
                    self.expect(':')?;
                    let v = self.value()?;
                    entries.push((k, v));
                    match self.peek() {
                        Some(b',') => self.pos += 1,
                        Some(b'}') => {
                            self.pos += 1;
                            break;
                        }
                        _ => return Err(Error::syntax(self.pos, "expected `,` or `}`")),
                    }
                }
                Value::table(entries)
            }
            Some(b'\'') => {
                self.pos += 1;
                let mut name = String::new();
                let mut chars = self.text[self.pos..].char_indices();
                loop {
                    match chars.next() {
                        None => return Err(Error::syntax(self.pos, "unterminated quoted atom")),
                        Some((i, '\'')) => {
                            self.pos += i + 1;
                            return Ok(Value::Atom(name));
                        }
                        Some((_, '\\')) => match chars.next() {
                            Some((_, c)) => name.push(c),
                            None => return Err(Error::syntax(self.pos, "dangling escape")),
                        },
                        Some((_, c)) => name.push(c),
                    }
                }
            }
            Some(_) => {
                let start = self.pos;
                let name = self.ident();
                if name.is_empty() {
                    return Err(Error::syntax(start, "expected a value"));
                }
                let is_call = self.src.get(self.pos) == Some(&b'(');
                match (name, is_call) {
                    ("in1" | "in2", true) => {
                        self.pos += 1;
                        let v = self.value()?;
                        self.expect(')')?;
                        Ok(Value::tag(if name == "in1" { 1 } else { 2 }, v))
                    }
                    ("Leaf", true) => {
                        self.pos += 1;
                        let v = self.value()?;
                        self.expect(')')?;
                        Ok(Value::leaf(v))
                    }
                    ("Node", true) => {
                        self.pos += 1;
                        self.expect('[')?;
                        let bag = self.seq(']')?;
                        self.expect(',')?;
                        let next = self.value()?;
                        self.expect(')')?;
                        Ok(Value::node(bag, next))
                    }
                    _ => Ok(Value::Atom(name.to_string())),
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_constructor_rank_first() {
        assert!(Value::Unit < Value::atom("a"));
        assert!(Value::atom("z") < Value::pair(Value::Unit, Value::Unit));
        assert!(Value::bag(vec![]) < Value::table_sorted(vec![]));
    }

    #[test]
    fn bag_equality_ignores_order() {
        let a = Value::bag(vec![Value::atom("x"), Value::atom("y"), Value::atom("x")]);
        let b = Value::bag(vec![Value::atom("y"), Value::atom("x"), Value::atom("x")]);
        assert_eq!(a, b);
        assert_ne!(a, Value::bag(vec![Value::atom("x"), Value::atom("y")]));
    }

    #[test]
    fn duplicate_table_keys_rejected() {
        let err = Value::table(vec![
            (Value::atom("k"), Value::Unit),
            (Value::atom("k"), Value::atom("v")),
        ])
        .unwrap_err();
        assert!(matches!(err, Error::NonFunctionTable(_)));
    }

    #[test]
    fn text_round_trip() {
        let text = "<in2(Node([Leaf(0), Leaf(1)], Leaf(*))), {Pop: (1, 0), 'a b': []}>";
        let v: Value = text.parse().unwrap();
        assert_eq!(v.to_string(), text);
        assert_eq!(v.to_string().parse::<Value>().unwrap(), v);
    }

    #[test]
    fn value_sets_parse_sorted() {
        let set = parse_value_set("{(1), (), (1)}").unwrap();
        assert_eq!(set, vec![Value::List(vec![]), Value::List(vec![Value::atom("1")])]);
        assert!(parse_value_set("{}").unwrap().is_empty());
    }

    #[test]
    fn node_depth_counts_nesting() {
        let leaf = Value::leaf(Value::Unit);
        assert_eq!(leaf.node_depth(), 0);
        let n1 = Value::node(vec![], leaf.clone());
        assert_eq!(n1.node_depth(), 1);
        assert_eq!(Value::node(vec![n1.clone()], leaf).node_depth(), 2);
    }
}
