//! Model files: a sectioned `name = value` format.
//!
//! ```text
//! [space]
//! base_dim = 1
//! fiber_dim = 1
//! order = 1
//!
//! [lagrangian]
//! L = 1/2*y1_1^2
//! ```
//!
//! The grammar is in `docs/grammar.ebnf`. [`ModelFile::emit`] writes the
//! canonical form, which parses back to the same model.

use jetvar::symbolic::{Rational, RawExpr};
use jetvar::{Coord, DiffForm, Expr, JetContext, MultiIndex, PolySection, ProjectableField, TensorType};
use std::collections::BTreeMap;
use std::fmt;

pub const DEFAULT_MAX_ORDER: usize = 12;

/// A diagnostic pointing into the model text (1-based line and column).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
    pub expected: Vec<String>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.col, self.message)?;
        if !self.expected.is_empty() {
            write!(f, " (expected one of: {})", self.expected.join(", "))?;
        }
        Ok(())
    }
}

impl std::error::Error for ParseError {}

fn err(line: usize, col: usize, message: impl Into<String>) -> ParseError {
    ParseError { line, col, message: message.into(), expected: Vec::new() }
}

fn expected(line: usize, col: usize, found: &str, want: &[&str]) -> ParseError {
    ParseError {
        line,
        col,
        message: format!("unexpected {found}"),
        expected: want.iter().map(|s| s.to_string()).collect(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Warning {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.col, self.message)
    }
}

#[derive(Clone, Debug)]
pub struct ModelFile {
    pub base_dim: usize,
    pub fiber_dim: usize,
    pub order: usize,
    pub context: JetContext,
    pub tensor_type: Option<TensorType>,
    pub lagrangian: Option<Expr>,
    pub fields: BTreeMap<String, ProjectableField>,
    pub forms: BTreeMap<String, DiffForm>,
    pub sections: BTreeMap<String, PolySection>,
    pub warnings: Vec<Warning>,
}

#[derive(Clone, Debug)]
struct Line<'a> {
    no: usize,
    key: &'a str,
    key_col: usize,
    value: &'a str,
    value_col: usize,
}

const SECTIONS: [&str; 7] = ["space", "tensor_type", "functions", "lagrangian", "fields", "forms", "sections"];

fn split_lines(text: &str) -> Result<BTreeMap<&'static str, Vec<Line<'_>>>, ParseError> {
    let mut out: BTreeMap<&'static str, Vec<Line<'_>>> = BTreeMap::new();
    let mut current: Option<&'static str> = None;
    for (k, raw) in text.lines().enumerate() {
        let no = k + 1;
        let body = raw.split('#').next().unwrap_or("");
        let trimmed = body.trim();
        if trimmed.is_empty() {
            continue;
        }
        let indent = body.len() - body.trim_start().len();
        if let Some(rest) = trimmed.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| expected(no, indent + trimmed.len() + 1, "end of line", &["]"]))?
                .trim();
            let sec = SECTIONS.iter().find(|s| **s == name).ok_or_else(|| ParseError {
                line: no,
                col: indent + 2,
                message: format!("unknown section [{name}]"),
                expected: SECTIONS.iter().map(|s| s.to_string()).collect(),
            })?;
            if out.contains_key(sec) {
                return Err(err(no, indent + 1, format!("duplicate section [{name}]")));
            }
            out.insert(sec, Vec::new());
            current = Some(sec);
            continue;
        }
        let Some(sec) = current else {
            return Err(expected(no, indent + 1, "text before the first section", &["[section]"]));
        };
        let eq = body.find('=').ok_or_else(|| expected(no, indent + trimmed.len() + 1, "end of line", &["="]))?;
        let key = body[..eq].trim();
        let value_raw = &body[eq + 1..];
        let value = value_raw.trim();
        let value_col = eq + 2 + (value_raw.len() - value_raw.trim_start().len());
        if key.is_empty() {
            return Err(expected(no, indent + 1, "=", &["name"]));
        }
        out.get_mut(sec).expect("section opened").push(Line { no, key, key_col: indent + 1, value, value_col });
    }
    Ok(out)
}

fn parse_usize(l: &Line<'_>) -> Result<usize, ParseError> {
    l.value.parse().map_err(|_| expected(l.no, l.value_col, &format!("'{}'", l.value), &["non-negative integer"]))
}

fn one_of<'a, 'b>(lines: &'b [Line<'a>], key: &str, sec: &str) -> Result<Option<&'b Line<'a>>, ParseError> {
    let mut found = None;
    for l in lines {
        if l.key == key {
            if found.is_some() {
                return Err(err(l.no, l.key_col, format!("duplicate key {key} in [{sec}]")));
            }
            found = Some(l);
        }
    }
    Ok(found)
}

fn reject_unknown(lines: &[Line<'_>], known: &[&str], sec: &str) -> Result<(), ParseError> {
    for l in lines {
        if !known.contains(&l.key) {
            return Err(ParseError {
                line: l.no,
                col: l.key_col,
                message: format!("unknown key {} in [{sec}]", l.key),
                expected: known.iter().map(|s| s.to_string()).collect(),
            });
        }
    }
    Ok(())
}

/// `name[label, …]` on the left of a fields/forms/sections line.
fn indexed_key(l: &Line<'_>) -> Result<(String, Vec<(String, usize)>), ParseError> {
    let open = l.key.find('[').ok_or_else(|| expected(l.no, l.key_col + l.key.len(), "'='", &["["]))?;
    let name = l.key[..open].trim();
    if !is_ident(name) {
        return Err(expected(l.no, l.key_col, &format!("'{name}'"), &["name"]));
    }
    let inner =
        l.key[open + 1..].strip_suffix(']').ok_or_else(|| expected(l.no, l.key_col + l.key.len(), "'='", &["]"]))?;
    let mut labels = Vec::new();
    let mut offset = l.key_col + open + 1;
    for part in inner.split(',') {
        let lead = part.len() - part.trim_start().len();
        let t = part.trim();
        if !t.is_empty() {
            labels.push((t.to_string(), offset + lead));
        }
        offset += part.len() + 1;
    }
    Ok((name.to_string(), labels))
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

enum Ident {
    Coord(Coord, Option<String>),
    Name,
}

/// Classify an identifier: `x<i>`, `y<μ>`, `y<μ>_<digits>`, or a name.
/// Unsorted derivative digits are canonicalized, reported in the second slot.
fn classify(s: &str) -> Ident {
    let digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
    if let Some(rest) = s.strip_prefix('x') {
        if digits(rest) {
            if let Ok(i) = rest.parse::<u8>() {
                return Ident::Coord(Coord::x(i), None);
            }
        }
    }
    if let Some(rest) = s.strip_prefix('y') {
        let (mu, ix) = match rest.split_once('_') {
            Some((a, b)) => (a, Some(b)),
            None => (rest, None),
        };
        if digits(mu) && ix.is_none_or(digits) {
            if let Ok(mu) = mu.parse::<u8>() {
                let entries: Vec<u8> = ix.unwrap_or("").bytes().map(|b| b - b'0').collect();
                let mut sorted = entries.clone();
                sorted.sort_unstable();
                let note = (sorted != entries).then(|| {
                    let canon: String = sorted.iter().map(|d| d.to_string()).collect();
                    format!("y{mu}_{canon}")
                });
                return Ident::Coord(Coord::Jet(mu, MultiIndex::new(entries)), note);
            }
        }
    }
    Ident::Name
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Op(char),
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(s) | Tok::Ident(s) => format!("'{s}'"),
            Tok::Op(c) => format!("'{c}'"),
            Tok::End => "end of expression".into(),
        }
    }
}

struct ExprParser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    line: usize,
    ctx: &'a JetContext,
    warnings: &'a mut Vec<Warning>,
}

fn lex(s: &str, line: usize, col0: usize) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let col = col0 + s[..i].chars().count();
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            out.push((Tok::Num(s[start..i].to_string()), col));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((Tok::Ident(s[start..i].to_string()), col));
        } else if "+-*/^(),".contains(c) {
            out.push((Tok::Op(c), col));
            i += 1;
        } else {
            return Err(err(line, col, format!("unexpected character '{}'", s[i..].chars().next().unwrap_or(c))));
        }
    }
    out.push((Tok::End, col0 + s.chars().count()));
    Ok(out)
}

impl ExprParser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn col(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn fail(&self, want: &[&str]) -> ParseError {
        expected(self.line, self.col(), &self.peek().describe(), want)
    }

    fn expect_op(&mut self, c: char) -> Result<(), ParseError> {
        if *self.peek() == Tok::Op(c) {
            self.bump();
            Ok(())
        } else {
            Err(self.fail(&[&format!("'{c}'")]))
        }
    }

    fn expr(&mut self) -> Result<RawExpr, ParseError> {
        let mut items = vec![self.term()?];
        loop {
            match self.peek() {
                Tok::Op('+') => {
                    self.bump();
                    items.push(self.term()?);
                }
                Tok::Op('-') => {
                    self.bump();
                    items.push(RawExpr::Neg(Box::new(self.term()?)));
                }
                _ => break,
            }
        }
        Ok(if items.len() == 1 { items.pop().expect("one item") } else { RawExpr::Add(items) })
    }

    fn term(&mut self) -> Result<RawExpr, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Tok::Op('*') => {
                    self.bump();
                    let rhs = self.unary()?;
                    acc = match acc {
                        RawExpr::Mul(mut v) => {
                            v.push(rhs);
                            RawExpr::Mul(v)
                        }
                        other => RawExpr::Mul(vec![other, rhs]),
                    };
                }
                Tok::Op('/') => {
                    self.bump();
                    let rhs = self.unary()?;
                    acc = RawExpr::Div(Box::new(acc), Box::new(rhs));
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<RawExpr, ParseError> {
        if *self.peek() == Tok::Op('-') {
            self.bump();
            return Ok(RawExpr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<RawExpr, ParseError> {
        let base = self.primary()?;
        if *self.peek() == Tok::Op('^') {
            self.bump();
            let (tok, col) = self.bump();
            let Tok::Num(s) = tok else {
                return Err(expected(self.line, col, &tok.describe(), &["non-negative integer exponent"]));
            };
            let k: u32 = s.parse().map_err(|_| err(self.line, col, format!("exponent {s} is too large")))?;
            return Ok(RawExpr::Pow(Box::new(base), k));
        }
        Ok(base)
    }

    fn coord(&mut self, name: &str, col: usize) -> Result<Option<Coord>, ParseError> {
        match classify(name) {
            Ident::Coord(c, note) => {
                if let Some(canon) = note {
                    self.warnings.push(Warning {
                        line: self.line,
                        col,
                        message: format!("{name} normalized to {canon}"),
                    });
                }
                self.ctx.check_coord(&c).map_err(|e| err(self.line, col, e.to_string()))?;
                Ok(Some(c))
            }
            Ident::Name => Ok(None),
        }
    }

    fn primary(&mut self) -> Result<RawExpr, ParseError> {
        let (tok, col) = self.bump();
        match tok {
            Tok::Num(s) => {
                let v: Rational = s.parse().map_err(|_| err(self.line, col, "bad number"))?;
                Ok(RawExpr::Num(v))
            }
            Tok::Op('(') => {
                let e = self.expr()?;
                self.expect_op(')')?;
                Ok(e)
            }
            Tok::Ident(name) if name == "diff" => {
                self.expect_op('(')?;
                let (ftok, fcol) = self.bump();
                let Tok::Ident(fname) = ftok else {
                    return Err(expected(self.line, fcol, &ftok.describe(), &["function name"]));
                };
                self.declared(&fname, fcol)?;
                let mut wrt = Vec::new();
                while *self.peek() == Tok::Op(',') {
                    self.bump();
                    let (ctok, ccol) = self.bump();
                    let Tok::Ident(cname) = ctok else {
                        return Err(expected(self.line, ccol, &ctok.describe(), &["coordinate"]));
                    };
                    let c = self
                        .coord(&cname, ccol)?
                        .ok_or_else(|| expected(self.line, ccol, &format!("'{cname}'"), &["coordinate"]))?;
                    let sym = self.ctx.function(&fname).expect("checked above");
                    if sym.position(&c).is_none() {
                        return Err(err(self.line, ccol, format!("{c} is not an argument of function {fname}")));
                    }
                    wrt.push(c);
                }
                self.expect_op(')')?;
                Ok(RawExpr::Func { name: fname, wrt })
            }
            Tok::Ident(name) => match self.coord(&name, col)? {
                Some(c) => Ok(RawExpr::Coord(c)),
                None => {
                    self.declared(&name, col)?;
                    Ok(RawExpr::Func { name, wrt: Vec::new() })
                }
            },
            other => Err(expected(self.line, col, &other.describe(), &["number", "identifier", "diff", "'('", "'-'"])),
        }
    }

    fn declared(&self, name: &str, col: usize) -> Result<(), ParseError> {
        if self.ctx.function(name).is_none() {
            return Err(err(self.line, col, format!("undeclared function symbol {name}")));
        }
        Ok(())
    }
}

/// Parse an expression string against a context.
pub fn parse_expr(
    ctx: &JetContext,
    text: &str,
    line: usize,
    col: usize,
    warnings: &mut Vec<Warning>,
) -> Result<Expr, ParseError> {
    let toks = lex(text, line, col)?;
    let mut p = ExprParser { toks, pos: 0, line, ctx, warnings };
    let raw = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(p.fail(&["operator", "end of expression"]));
    }
    ctx.normalize(&raw).map_err(|e| err(line, col, e.to_string()))
}

fn parse_coord_label(ctx: &JetContext, label: &str, line: usize, col: usize) -> Result<Coord, ParseError> {
    match classify(label) {
        Ident::Coord(c, None) if c.order() == 0 => {
            ctx.check_coord(&c).map_err(|e| err(line, col, e.to_string()))?;
            Ok(c)
        }
        _ => Err(expected(line, col, &format!("'{label}'"), &["x<i>", "y<μ>"])),
    }
}

fn parse_form_label(ctx: &JetContext, label: &str, line: usize, col: usize) -> Result<Coord, ParseError> {
    let Some(rest) = label.strip_prefix('d') else {
        return Err(expected(line, col, &format!("'{label}'"), &["dx<i>", "dy<μ>", "dy<μ>_<digits>"]));
    };
    match classify(rest) {
        Ident::Coord(c, note) => {
            if note.is_some() {
                return Err(err(line, col, format!("unsorted derivative digits in {label}")));
            }
            ctx.check_coord(&c).map_err(|e| err(line, col, e.to_string()))?;
            Ok(c)
        }
        Ident::Name => Err(expected(line, col, &format!("'{label}'"), &["dx<i>", "dy<μ>", "dy<μ>_<digits>"])),
    }
}

/// Context order cap: `JETVAR_MAX_ORDER` when set, otherwise the default.
pub fn max_order_from_env() -> Result<usize, String> {
    match std::env::var("JETVAR_MAX_ORDER") {
        Ok(v) => v.trim().parse().map_err(|_| format!("JETVAR_MAX_ORDER must be a non-negative integer, got {v:?}")),
        Err(_) => Ok(DEFAULT_MAX_ORDER),
    }
}

impl ModelFile {
    pub fn parse(text: &str, max_order: usize) -> Result<ModelFile, ParseError> {
        let mut secs = split_lines(text)?;
        let space = secs.remove("space").ok_or_else(|| err(1, 1, "missing [space] section"))?;
        reject_unknown(&space, &["base_dim", "fiber_dim", "order"], "space")?;
        let get = |k: &str| -> Result<usize, ParseError> {
            let l = one_of(&space, k, "space")?.ok_or_else(|| err(1, 1, format!("missing {k} in [space]")))?;
            parse_usize(l)
        };
        let (n, m, order) = (get("base_dim")?, get("fiber_dim")?, get("order")?);
        let space_line = space.first().map_or(1, |l| l.no);
        if order > max_order {
            return Err(err(space_line, 1, format!("order {order} exceeds the order cap {max_order}")));
        }
        let mut ctx = JetContext::new(n, m, max_order).map_err(|e| err(space_line, 1, e.to_string()))?;
        let mut warnings = Vec::new();

        let tensor_type = match secs.remove("tensor_type") {
            None => None,
            Some(lines) => {
                reject_unknown(&lines, &["variance", "cov_sign"], "tensor_type")?;
                let v = one_of(&lines, "variance", "tensor_type")?
                    .ok_or_else(|| err(lines.first().map_or(1, |l| l.no), 1, "missing variance in [tensor_type]"))?;
                let s = v
                    .value
                    .strip_prefix('"')
                    .and_then(|s| s.strip_suffix('"'))
                    .ok_or_else(|| expected(v.no, v.value_col, v.value, &["quoted variance string"]))?;
                let sign = match one_of(&lines, "cov_sign", "tensor_type")? {
                    None => 1,
                    Some(l) => match l.value {
                        "1" | "+1" => 1,
                        "-1" => -1,
                        other => return Err(expected(l.no, l.value_col, &format!("'{other}'"), &["1", "-1"])),
                    },
                };
                let t = TensorType::parse(s, sign).map_err(|e| err(v.no, v.value_col, e.to_string()))?;
                if t.fiber_dim(n) != m {
                    return Err(err(
                        v.no,
                        v.value_col,
                        format!("tensor type {s} needs fiber_dim {}, model has {m}", t.fiber_dim(n)),
                    ));
                }
                Some(t)
            }
        };

        for l in secs.remove("functions").unwrap_or_default() {
            if !is_ident(l.key) || !matches!(classify(l.key), Ident::Name) || l.key == "diff" {
                return Err(expected(l.no, l.key_col, &format!("'{}'", l.key), &["function name"]));
            }
            if ctx.function(l.key).is_some() {
                return Err(err(l.no, l.key_col, format!("function {} declared twice", l.key)));
            }
            let mut args = Vec::new();
            let mut offset = l.value_col;
            for part in l.value.split(',') {
                let lead = part.len() - part.trim_start().len();
                args.push(parse_coord_label(&ctx, part.trim(), l.no, offset + lead)?);
                offset += part.len() + 1;
            }
            ctx.declare(l.key, args).map_err(|e| err(l.no, l.value_col, e.to_string()))?;
        }

        let lagrangian = match secs.remove("lagrangian") {
            None => None,
            Some(lines) => {
                reject_unknown(&lines, &["L"], "lagrangian")?;
                match one_of(&lines, "L", "lagrangian")? {
                    None => None,
                    Some(l) => {
                        let e = parse_expr(&ctx, l.value, l.no, l.value_col, &mut warnings)?;
                        if e.order() > order {
                            return Err(err(
                                l.no,
                                l.value_col,
                                format!("Lagrangian has jet order {} but the space has order {order}", e.order()),
                            ));
                        }
                        Some(e)
                    }
                }
            }
        };

        let mut fields = BTreeMap::new();
        let mut raw_fields: BTreeMap<String, (usize, BTreeMap<Coord, Expr>)> = BTreeMap::new();
        for l in secs.remove("fields").unwrap_or_default() {
            let (name, labels) = indexed_key(&l)?;
            let [(label, col)] = labels.as_slice() else {
                return Err(expected(l.no, l.key_col, &format!("'{}'", l.key), &["name[x<i>] or name[y<μ>]"]));
            };
            let c = parse_coord_label(&ctx, label, l.no, *col)?;
            let e = parse_expr(&ctx, l.value, l.no, l.value_col, &mut warnings)?;
            let entry = raw_fields.entry(name.clone()).or_insert_with(|| (l.no, BTreeMap::new()));
            if entry.1.insert(c, e).is_some() {
                return Err(err(l.no, l.key_col, format!("component {label} of {name} given twice")));
            }
        }
        for (name, (line, comps)) in raw_fields {
            let get = |c: Coord| comps.get(&c).cloned().unwrap_or_default();
            let base = (1..=n as u8).map(|i| get(Coord::x(i))).collect();
            let fiber = (1..=m as u8).map(|mu| get(Coord::y(mu))).collect();
            let f = ProjectableField::new(base, fiber).map_err(|e| err(line, 1, format!("field {name}: {e}")))?;
            fields.insert(name, f);
        }

        let mut forms: BTreeMap<String, DiffForm> = BTreeMap::new();
        for l in secs.remove("forms").unwrap_or_default() {
            let (name, labels) = indexed_key(&l)?;
            let coords =
                labels.iter().map(|(s, c)| parse_form_label(&ctx, s, l.no, *c)).collect::<Result<Vec<_>, _>>()?;
            let e = parse_expr(&ctx, l.value, l.no, l.value_col, &mut warnings)?;
            let deg = coords.len();
            let term = if coords.iter().collect::<std::collections::BTreeSet<_>>().len() == deg {
                DiffForm::term(e, coords)
            } else {
                DiffForm::zero(deg)
            };
            let entry = forms.entry(name.clone()).or_insert_with(|| DiffForm::zero(deg));
            *entry = entry
                .try_add(&term)
                .map_err(|_| err(l.no, l.key_col, format!("form {name} mixes degrees {} and {deg}", entry.degree())))?;
        }

        let mut sections = BTreeMap::new();
        let mut raw_sections: BTreeMap<String, (usize, BTreeMap<u8, Expr>)> = BTreeMap::new();
        for l in secs.remove("sections").unwrap_or_default() {
            let (name, labels) = indexed_key(&l)?;
            let [(label, col)] = labels.as_slice() else {
                return Err(expected(l.no, l.key_col, &format!("'{}'", l.key), &["name[y<μ>]"]));
            };
            let Coord::Jet(mu, _) = parse_coord_label(&ctx, label, l.no, *col)? else {
                return Err(expected(l.no, *col, &format!("'{label}'"), &["y<μ>"]));
            };
            let e = parse_expr(&ctx, l.value, l.no, l.value_col, &mut warnings)?;
            let entry = raw_sections.entry(name.clone()).or_insert_with(|| (l.no, BTreeMap::new()));
            if entry.1.insert(mu, e).is_some() {
                return Err(err(l.no, l.key_col, format!("component {label} of {name} given twice")));
            }
        }
        for (name, (line, comps)) in raw_sections {
            let c = (1..=m as u8).map(|mu| comps.get(&mu).cloned().unwrap_or_default()).collect();
            let s = PolySection::new(n, c).map_err(|e| err(line, 1, format!("section {name}: {e}")))?;
            sections.insert(name, s);
        }

        Ok(ModelFile {
            base_dim: n,
            fiber_dim: m,
            order,
            context: ctx,
            tensor_type,
            lagrangian,
            fields,
            forms,
            sections,
            warnings,
        })
    }

    /// Canonical text of the model.
    pub fn emit(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!(
            "[space]\nbase_dim = {}\nfiber_dim = {}\norder = {}\n",
            self.base_dim, self.fiber_dim, self.order
        ));
        if let Some(t) = &self.tensor_type {
            s.push_str(&format!(
                "\n[tensor_type]\nvariance = \"{}\"\ncov_sign = {}\n",
                t.variance_string(),
                t.cov_sign()
            ));
        }
        if !self.context.functions().is_empty() {
            s.push_str("\n[functions]\n");
            let mut fs: Vec<_> = self.context.functions().to_vec();
            fs.sort_by(|a, b| a.name().cmp(b.name()));
            for f in fs {
                let args: Vec<String> = f.args().iter().map(|c| c.to_string()).collect();
                s.push_str(&format!("{} = {}\n", f.name(), args.join(", ")));
            }
        }
        if let Some(l) = &self.lagrangian {
            s.push_str(&format!("\n[lagrangian]\nL = {l}\n"));
        }
        if !self.fields.is_empty() {
            s.push_str("\n[fields]\n");
            for (name, f) in &self.fields {
                let comps: Vec<(Coord, &Expr)> = f
                    .base_components()
                    .iter()
                    .enumerate()
                    .map(|(i, e)| (Coord::x(i as u8 + 1), e))
                    .chain(f.fiber_components().iter().enumerate().map(|(mu, e)| (Coord::y(mu as u8 + 1), e)))
                    .collect();
                let mut any = false;
                for (c, e) in &comps {
                    if !e.is_zero() {
                        s.push_str(&format!("{name}[{c}] = {e}\n"));
                        any = true;
                    }
                }
                if !any {
                    s.push_str(&format!("{name}[{}] = 0\n", comps[0].0));
                }
            }
        }
        if !self.forms.is_empty() {
            s.push_str("\n[forms]\n");
            for (name, f) in &self.forms {
                if f.is_zero() {
                    let labels: Vec<String> = (1..=f.degree()).map(|i| format!("dx{i}")).collect();
                    s.push_str(&format!("{name}[{}] = 0\n", labels.join(", ")));
                }
                for (b, c) in f.terms() {
                    let labels: Vec<String> = b.coords().iter().map(|c| format!("d{c}")).collect();
                    s.push_str(&format!("{name}[{}] = {c}\n", labels.join(", ")));
                }
            }
        }
        if !self.sections.is_empty() {
            s.push_str("\n[sections]\n");
            for (name, g) in &self.sections {
                for (mu, e) in g.components().iter().enumerate() {
                    s.push_str(&format!("{name}[y{}] = {e}\n", mu + 1));
                }
            }
        }
        s
    }

    pub fn lagrangian(&self) -> Option<&Expr> {
        self.lagrangian.as_ref()
    }
}
