//! Access structure text formats.
//!
//! Structure files are line oriented:
//!
//! ```text
//! structure heavy4 parties 4
//! weights 2 1 1 1
//! gate a = TH 2 : x2 x3 x4
//! gate b = AND : x1 a
//! output b
//! ```
//!
//! or use `minsets { {1,2,3} {2,3,4} }` in place of gates. `WTH t` operands
//! take a `*w` weight suffix (default 1).
//!
//! Inline expressions: `th(2,3)`, `th(2, x1, x2, x3)`, `wth(3; 2,1,1)`,
//! `wth(3, x1*2, x2, x3)`, `and(..)`, `or(..)`, `x4`, `minsets{{1,2},{2,3}}`.

use std::collections::HashMap;
use std::fmt;

use qss_core::access::{AccessStructure, Gate, GateKind, MonotoneCircuit, PartySet, WeightFunction, Wire};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParsedStructure {
    pub name: Option<String>,
    pub structure: AccessStructure,
    pub weights: Option<WeightFunction>,
}

#[derive(Debug, Clone, PartialEq)]
enum Kind {
    Ident(String),
    Num(u64),
    Sym(char),
    Newline,
    Eof,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kind::Ident(s) => write!(f, "'{s}'"),
            Kind::Num(n) => write!(f, "'{n}'"),
            Kind::Sym(c) => write!(f, "'{c}'"),
            Kind::Newline => f.write_str("end of line"),
            Kind::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Debug, Clone)]
struct Tok {
    kind: Kind,
    line: usize,
    col: usize,
}

fn lex(src: &str) -> Result<Vec<Tok>, ParseError> {
    let mut out = Vec::new();
    for (li, text) in src.lines().enumerate() {
        let line = li + 1;
        let chars: Vec<char> = text.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let col = i + 1;
            if c == '#' {
                break;
            }
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            if c.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                let v = s.parse().map_err(|_| ParseError { line, col, msg: format!("number '{s}' out of range") })?;
                out.push(Tok { kind: Kind::Num(v), line, col });
                continue;
            }
            if c.is_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '-') {
                    i += 1;
                }
                out.push(Tok { kind: Kind::Ident(chars[start..i].iter().collect()), line, col });
                continue;
            }
            if "=:{}(),;*".contains(c) {
                out.push(Tok { kind: Kind::Sym(c), line, col });
                i += 1;
                continue;
            }
            return Err(ParseError { line, col, msg: format!("unexpected character '{c}'") });
        }
        out.push(Tok { kind: Kind::Newline, line, col: chars.len() + 1 });
    }
    let (line, col) = out.last().map_or((1, 1), |t| (t.line, t.col));
    out.push(Tok { kind: Kind::Eof, line, col });
    Ok(out)
}

/// `x<i>` with `i >= 1`, as a 0-based party index.
fn variable(s: &str) -> Option<usize> {
    let digits = s.strip_prefix('x')?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse::<usize>().ok().filter(|&i| i >= 1).map(|i| i - 1)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
    skip_newlines: bool,
}

impl Parser {
    fn new(toks: Vec<Tok>, skip_newlines: bool) -> Self {
        Parser { toks, pos: 0, skip_newlines }
    }

    fn skip(&mut self) {
        while self.skip_newlines && self.toks[self.pos].kind == Kind::Newline {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> &Tok {
        self.skip();
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Tok {
        self.skip();
        let t = self.toks[self.pos].clone();
        if t.kind != Kind::Eof {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, t: &Tok, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { line: t.line, col: t.col, msg: msg.into() })
    }

    fn is_sym(&mut self, c: char) -> bool {
        self.peek().kind == Kind::Sym(c)
    }

    fn sym(&mut self, c: char) -> Result<(), ParseError> {
        let t = self.next();
        if t.kind == Kind::Sym(c) {
            Ok(())
        } else {
            self.err(&t, format!("expected '{c}', found {}", t.kind))
        }
    }

    fn num(&mut self, what: &str) -> Result<u64, ParseError> {
        let t = self.next();
        match t.kind {
            Kind::Num(v) => Ok(v),
            _ => self.err(&t, format!("expected {what}, found {}", t.kind)),
        }
    }

    fn ident(&mut self, what: &str) -> Result<(String, Tok), ParseError> {
        let t = self.next();
        match &t.kind {
            Kind::Ident(s) => Ok((s.clone(), t)),
            _ => self.err(&t, format!("expected {what}, found {}", t.kind)),
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<(), ParseError> {
        let (s, t) = self.ident(&format!("'{kw}'"))?;
        if s == kw {
            Ok(())
        } else {
            self.err(&t, format!("expected '{kw}', found '{s}'"))
        }
    }

    fn end_of_statement(&mut self) -> Result<(), ParseError> {
        let t = self.next();
        match t.kind {
            Kind::Newline | Kind::Eof => Ok(()),
            _ => self.err(&t, format!("expected end of line, found {}", t.kind)),
        }
    }

    /// `{ {1,2} {2,3} }`, commas optional.
    fn set_family(&mut self) -> Result<Vec<(PartySet, Tok)>, ParseError> {
        let saved = self.skip_newlines;
        self.skip_newlines = true;
        self.sym('{')?;
        let mut sets = Vec::new();
        loop {
            if self.is_sym('}') {
                self.next();
                break;
            }
            if self.is_sym(',') {
                self.next();
                continue;
            }
            let open = self.peek().clone();
            self.sym('{')?;
            let mut members = Vec::new();
            loop {
                let t = self.next();
                match t.kind {
                    Kind::Sym('}') => break,
                    Kind::Sym(',') => {}
                    Kind::Num(0) => return self.err(&t, "parties are numbered from 1"),
                    Kind::Num(v) => members.push(v as usize - 1),
                    _ => return self.err(&t, format!("expected party number, found {}", t.kind)),
                }
            }
            sets.push((PartySet::from_parties(&members), open));
        }
        self.skip_newlines = saved;
        Ok(sets)
    }
}

fn access_err(t: &Tok, e: impl fmt::Display) -> ParseError {
    ParseError { line: t.line, col: t.col, msg: e.to_string() }
}

fn check_party(t: &Tok, i: usize, n: usize) -> Result<(), ParseError> {
    if i >= n {
        return Err(access_err(t, format!("party {} out of range 1..={n}", i + 1)));
    }
    Ok(())
}

/// Parses a structure file.
pub fn parse_file(src: &str) -> Result<ParsedStructure, ParseError> {
    let mut p = Parser::new(lex(src)?, false);
    while p.toks[p.pos].kind == Kind::Newline {
        p.pos += 1;
    }
    p.keyword("structure")?;
    let (name, _) = p.ident("structure name")?;
    p.keyword("parties")?;
    let nt = p.peek().clone();
    let n = p.num("party count")? as usize;
    if n == 0 {
        return Err(access_err(&nt, "at least one party"));
    }
    p.end_of_statement()?;

    let mut weights = None;
    let mut gates: Vec<Gate> = Vec::new();
    let mut ids: HashMap<String, usize> = HashMap::new();
    let mut output: Option<(Wire, Tok)> = None;
    let mut minsets: Option<(Vec<(PartySet, Tok)>, Tok)> = None;
    loop {
        let t = p.next();
        let kw = match &t.kind {
            Kind::Eof => break,
            Kind::Newline => continue,
            Kind::Ident(s) => s.clone(),
            _ => return p.err(&t, format!("expected a statement, found {}", t.kind)),
        };
        match kw.as_str() {
            "weights" => {
                if weights.is_some() {
                    return p.err(&t, "duplicate weights");
                }
                let mut w = Vec::new();
                while let Kind::Num(v) = p.peek().kind {
                    p.next();
                    w.push(u32::try_from(v).map_err(|_| access_err(&t, "weight too large"))?);
                }
                if w.len() != n {
                    return p.err(&t, format!("{} weights for {n} parties", w.len()));
                }
                weights = Some(WeightFunction::new(w).map_err(|e| access_err(&t, e))?);
                p.end_of_statement()?;
            }
            "gate" => {
                let (id, idt) = p.ident("gate id")?;
                if variable(&id).is_some() {
                    return p.err(&idt, format!("gate id '{id}' looks like a variable"));
                }
                if ids.contains_key(&id) {
                    return p.err(&idt, format!("duplicate gate '{id}'"));
                }
                p.sym('=')?;
                let (kind, kt) = p.ident("AND, OR, TH or WTH")?;
                let kind = kind.to_ascii_uppercase();
                let t_val = match kind.as_str() {
                    "AND" | "OR" => None,
                    "TH" | "WTH" => Some(u32::try_from(p.num("threshold")?).map_err(|_| access_err(&kt, "threshold too large"))?),
                    _ => return p.err(&kt, format!("unknown gate kind '{kind}'")),
                };
                p.sym(':')?;
                let mut inputs = Vec::new();
                let mut ws = Vec::new();
                loop {
                    let t = p.peek().clone();
                    match &t.kind {
                        Kind::Newline | Kind::Eof => break,
                        Kind::Sym(',') => {
                            p.next();
                        }
                        Kind::Ident(s) => {
                            p.next();
                            let wire = match variable(s) {
                                Some(i) => {
                                    check_party(&t, i, n)?;
                                    Wire::Var(i)
                                }
                                None => match ids.get(s) {
                                    Some(&g) => Wire::Gate(g),
                                    None => return p.err(&t, format!("unknown gate '{s}'")),
                                },
                            };
                            inputs.push(wire);
                            if p.is_sym('*') {
                                let star = p.next();
                                if kind != "WTH" {
                                    return p.err(&star, "weights are only allowed on WTH operands");
                                }
                                ws.push(u32::try_from(p.num("weight")?).map_err(|_| access_err(&star, "weight too large"))?);
                            } else {
                                ws.push(1);
                            }
                        }
                        _ => return p.err(&t, format!("expected operand, found {}", t.kind)),
                    }
                }
                if inputs.is_empty() {
                    return p.err(&kt, "gate without operands");
                }
                let gk = match kind.as_str() {
                    "AND" => GateKind::And,
                    "OR" => GateKind::Or,
                    "TH" => GateKind::Threshold(t_val.unwrap_or(0)),
                    _ => GateKind::WeightedThreshold { weights: ws, t: t_val.unwrap_or(0) },
                };
                ids.insert(id, gates.len());
                gates.push(Gate::new(gk, inputs));
                p.end_of_statement()?;
            }
            "output" => {
                if output.is_some() {
                    return p.err(&t, "duplicate output");
                }
                let (s, st) = p.ident("output gate or variable")?;
                let wire = match variable(&s) {
                    Some(i) => {
                        check_party(&st, i, n)?;
                        Wire::Var(i)
                    }
                    None => match ids.get(&s) {
                        Some(&g) => Wire::Gate(g),
                        None => return p.err(&st, format!("unknown gate '{s}'")),
                    },
                };
                output = Some((wire, t));
                p.end_of_statement()?;
            }
            "minsets" => {
                if minsets.is_some() {
                    return p.err(&t, "duplicate minsets");
                }
                minsets = Some((p.set_family()?, t));
                p.end_of_statement()?;
            }
            other => return p.err(&t, format!("unknown statement '{other}'")),
        }
    }

    let structure = match (minsets, output) {
        (Some((sets, t)), None) => {
            if !gates.is_empty() {
                return Err(access_err(&t, "minsets cannot be combined with gates"));
            }
            for (s, st) in &sets {
                if s.span() > n {
                    return Err(access_err(st, format!("set {s} names a party above {n}")));
                }
            }
            AccessStructure::from_min_sets(n, sets.into_iter().map(|(s, _)| s).collect()).map_err(|e| access_err(&t, e))?
        }
        (None, Some((out, t))) => {
            let c = MonotoneCircuit::new(n, gates, out).map_err(|e| access_err(&t, e))?;
            AccessStructure::from_circuit(c)
        }
        (Some((_, t)), Some(_)) => return Err(access_err(&t, "both minsets and output given")),
        (None, None) => {
            let t = p.toks.last().cloned().unwrap_or(Tok { kind: Kind::Eof, line: 1, col: 1 });
            return Err(access_err(&t, "missing 'output' or 'minsets'"));
        }
    };
    Ok(ParsedStructure { name: Some(name), structure, weights })
}

struct ExprBuilder {
    gates: Vec<Gate>,
    max_var: usize,
}

impl ExprBuilder {
    fn gate(&mut self, kind: GateKind, inputs: Vec<Wire>) -> Wire {
        self.gates.push(Gate::new(kind, inputs));
        Wire::Gate(self.gates.len() - 1)
    }

    fn var(&mut self, i: usize) -> Wire {
        self.max_var = self.max_var.max(i + 1);
        Wire::Var(i)
    }

    fn vars(&mut self, k: usize) -> Vec<Wire> {
        (0..k).map(|i| self.var(i)).collect()
    }

    /// Comma separated arguments up to `)`; with `weighted`, each may carry `*w`.
    fn args(&mut self, p: &mut Parser, weighted: bool) -> Result<(Vec<Wire>, Vec<u32>), ParseError> {
        let mut wires = Vec::new();
        let mut ws = Vec::new();
        loop {
            wires.push(self.expr(p, None)?);
            if weighted && p.is_sym('*') {
                let star = p.next();
                ws.push(u32::try_from(p.num("weight")?).map_err(|_| access_err(&star, "weight too large"))?);
            } else {
                ws.push(1);
            }
            let t = p.next();
            match t.kind {
                Kind::Sym(',') => {}
                Kind::Sym(')') => return Ok((wires, ws)),
                _ => return p.err(&t, format!("expected ',' or ')', found {}", t.kind)),
            }
        }
    }

    /// One expression. `top` receives the weights of a top-level `wth(t; ..)`.
    fn expr(&mut self, p: &mut Parser, top: Option<&mut Option<Vec<u32>>>) -> Result<Wire, ParseError> {
        let (name, t) = p.ident("expression")?;
        if let Some(i) = variable(&name) {
            return Ok(self.var(i));
        }
        let name = name.to_ascii_lowercase();
        p.sym('(')?;
        match name.as_str() {
            "and" | "or" => {
                let (wires, _) = self.args(p, false)?;
                let kind = if name == "and" { GateKind::And } else { GateKind::Or };
                Ok(self.gate(kind, wires))
            }
            "th" => {
                let tv = u32::try_from(p.num("threshold")?).map_err(|_| access_err(&t, "threshold too large"))?;
                p.sym(',')?;
                if let Kind::Num(k) = p.peek().kind {
                    p.next();
                    p.sym(')')?;
                    let wires = self.vars(k as usize);
                    return Ok(self.gate(GateKind::Threshold(tv), wires));
                }
                let (wires, _) = self.args(p, false)?;
                Ok(self.gate(GateKind::Threshold(tv), wires))
            }
            "wth" => {
                let tv = u32::try_from(p.num("threshold")?).map_err(|_| access_err(&t, "threshold too large"))?;
                if p.is_sym(';') {
                    p.next();
                    let mut ws = Vec::new();
                    loop {
                        let wt = p.peek().clone();
                        ws.push(u32::try_from(p.num("weight")?).map_err(|_| access_err(&wt, "weight too large"))?);
                        let s = p.next();
                        match s.kind {
                            Kind::Sym(',') => {}
                            Kind::Sym(')') => break,
                            _ => return p.err(&s, format!("expected ',' or ')', found {}", s.kind)),
                        }
                    }
                    if let Some(top) = top {
                        *top = Some(ws.clone());
                    }
                    let wires = self.vars(ws.len());
                    return Ok(self.gate(GateKind::WeightedThreshold { weights: ws, t: tv }, wires));
                }
                p.sym(',')?;
                let (wires, ws) = self.args(p, true)?;
                Ok(self.gate(GateKind::WeightedThreshold { weights: ws, t: tv }, wires))
            }
            _ => p.err(&t, format!("unknown function '{name}'")),
        }
    }
}

/// Parses an inline expression over `n` parties (default: the largest
/// variable mentioned).
pub fn parse_expression(src: &str, n: Option<usize>) -> Result<ParsedStructure, ParseError> {
    let mut p = Parser::new(lex(src)?, true);
    let first = p.peek().clone();
    if first.kind == Kind::Ident(String::from("minsets")) {
        p.next();
        let sets = p.set_family()?;
        let end = p.next();
        if end.kind != Kind::Eof {
            return p.err(&end, format!("unexpected {} after expression", end.kind));
        }
        let span = sets.iter().map(|(s, _)| s.span()).max().unwrap_or(0);
        let n = n.unwrap_or(span);
        for (s, st) in &sets {
            if s.span() > n {
                return Err(access_err(st, format!("set {s} names a party above {n}")));
            }
        }
        let structure = AccessStructure::from_min_sets(n, sets.into_iter().map(|(s, _)| s).collect()).map_err(|e| access_err(&first, e))?;
        return Ok(ParsedStructure { name: None, structure, weights: None });
    }
    let mut b = ExprBuilder { gates: Vec::new(), max_var: 0 };
    let mut top_weights = None;
    let out = b.expr(&mut p, Some(&mut top_weights))?;
    let end = p.next();
    if end.kind != Kind::Eof {
        return p.err(&end, format!("unexpected {} after expression", end.kind));
    }
    let n = match n {
        Some(n) if n < b.max_var => return Err(access_err(&first, format!("x{} is above n={n}", b.max_var))),
        Some(n) => n,
        None => b.max_var,
    };
    if n == 0 {
        return Err(access_err(&first, "expression mentions no party"));
    }
    let c = MonotoneCircuit::new(n, b.gates, out).map_err(|e| access_err(&first, e))?;
    let weights = match top_weights {
        Some(w) if w.len() == n => Some(WeightFunction::new(w).map_err(|e| access_err(&first, e))?),
        _ => None,
    };
    Ok(ParsedStructure { name: None, structure: AccessStructure::from_circuit(c), weights })
}

/// Splits `body;key=val;..` at `;` outside brackets.
pub fn split_options(s: &str) -> (String, Vec<(String, String)>) {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for c in s.chars() {
        match c {
            '(' | '{' => depth += 1,
            ')' | '}' => depth -= 1,
            _ => {}
        }
        if c == ';' && depth == 0 {
            parts.push(std::mem::take(&mut cur));
        } else {
            cur.push(c);
        }
    }
    parts.push(cur);
    let body = parts.remove(0).trim().to_string();
    let opts = parts
        .into_iter()
        .map(|o| match o.split_once('=') {
            Some((k, v)) => (k.trim().to_string(), v.trim().to_string()),
            None => (o.trim().to_string(), String::new()),
        })
        .collect();
    (body, opts)
}

/// True if `s` is an inline expression rather than a file path.
pub fn is_expression(s: &str) -> bool {
    s.contains('(') || s.contains('{')
}
