//! Instance description language: a small line-oriented format declaring
//! groupoids, subgroupoids, actions and check directives. `#` starts a
//! comment. Parsing resolves every reference against earlier declarations
//! and reports positions; printing a parsed spec re-parses to an equal spec.
//!
//! ```text
//! groupoid K = pairs {k1, k2}
//! groupoid H = eqrel over {a, b, c} classes {{a, b}, {c}}
//! groupoid C = group cyclic 3
//! groupoid KH = product(K, H)
//! subgroupoid M of KH = wide arrows {((k1,k2),(a,b))} close
//! action A right of K { carrier {x, y} map {x -> k1, y -> k2} act {(x,(k1,k1)) -> x, ...} }
//! check mackey K H G M L
//! ```

use std::fmt::Write as _;
use std::sync::Arc;

use thiserror::Error;

use crate::action::{ElementId, GroupoidAction, Side};
use crate::groupoid::{
    build_groupoid, cyclic_group, pair_label, ArrowId, Builder, FiniteGroupoid, ObjectId,
    ProductGroupoid, Subgroupoid,
};

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("{line}:{col}: syntax error: expected {expected}, found {found}")]
    SyntaxError { line: usize, col: usize, expected: String, found: String },
    #[error("{line}:{col}: duplicate name {name:?}")]
    DuplicateName { line: usize, col: usize, name: String },
    #[error("{line}:{col}: unresolved reference {name:?} ({expected})")]
    UnresolvedReference { line: usize, col: usize, name: String, expected: String },
    #[error("{line}:{col}: arity error: {msg}")]
    ArityError { line: usize, col: usize, msg: String },
}

/// Errors raised while constructing values from a parsed spec.
#[derive(Debug, Error)]
#[error("line {line}: {msg}")]
pub struct BuildSpecError {
    pub line: usize,
    pub msg: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BuilderSpec {
    Trivial(Vec<String>),
    Pairs(Vec<String>),
    EqRel { over: Vec<String>, classes: Vec<Vec<String>> },
    Cyclic(usize),
    Product(String, String),
    Opposite(String),
    Table {
        objects: Vec<String>,
        /// (name, source, target)
        arrows: Vec<(String, String, String)>,
        ident: Vec<(String, String)>,
        inv: Vec<(String, String)>,
        comp: Vec<((String, String), String)>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SideSpec {
    Left,
    Right,
}

impl From<SideSpec> for Side {
    fn from(s: SideSpec) -> Side {
        match s {
            SideSpec::Left => Side::Left,
            SideSpec::Right => Side::Right,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckSpec {
    Validate(String),
    Orbits(String),
    Cosets { groupoid: String, sub: String, side: SideSpec },
    Tensor { left: String, over: String, right: String },
    Mackey { k: String, h: String, g: String, m: String, l: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decl {
    Groupoid { name: String, builder: BuilderSpec },
    Sub { name: String, parent: String, wide: bool, arrows: Vec<String>, close: bool },
    Action {
        name: String,
        side: SideSpec,
        groupoid: String,
        carrier: Vec<String>,
        structure: Vec<(String, String)>,
        act: Vec<((String, String), String)>,
    },
    Check(CheckSpec),
}

/// A parsed instance file: declarations in order, with their source lines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceSpec {
    pub decls: Vec<(usize, Decl)>,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Int(usize),
    Sym(char),
    Arrow, // ->
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn tokenize(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let line = match line.find('#') {
            Some(i) => &line[..i],
            None => line,
        };
        let bytes: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < bytes.len() {
            let c = bytes[i];
            let col = i + 1;
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            if c == '-' && bytes.get(i + 1) == Some(&'>') {
                out.push(Token { tok: Tok::Arrow, line: ln + 1, col });
                i += 2;
                continue;
            }
            if "={}(),".contains(c) {
                out.push(Token { tok: Tok::Sym(c), line: ln + 1, col });
                i += 1;
                continue;
            }
            if c.is_ascii_digit() {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let word: String = bytes[start..i].iter().collect();
                // A digit run followed by identifier characters is one
                // identifier (labels like 1a).
                if i < bytes.len() && (bytes[i].is_alphanumeric() || bytes[i] == '_') {
                    while i < bytes.len() && (bytes[i].is_alphanumeric() || bytes[i] == '_') {
                        i += 1;
                    }
                    out.push(Token {
                        tok: Tok::Ident(bytes[start..i].iter().collect()),
                        line: ln + 1,
                        col,
                    });
                } else {
                    out.push(Token { tok: Tok::Int(word.parse().unwrap()), line: ln + 1, col });
                }
                continue;
            }
            if c.is_alphanumeric() || c == '_' || c == '*' || c == '\'' {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_alphanumeric() || bytes[i] == '_' || bytes[i] == '*' || bytes[i] == '\'')
                {
                    i += 1;
                }
                out.push(Token {
                    tok: Tok::Ident(bytes[start..i].iter().collect()),
                    line: ln + 1,
                    col,
                });
                continue;
            }
            return Err(ParseError::SyntaxError {
                line: ln + 1,
                col,
                expected: "a token".into(),
                found: format!("{c:?}"),
            });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum NameKind {
    Groupoid,
    Sub,
    Action,
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    names: Vec<(String, NameKind)>,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn here(&self) -> (usize, usize) {
        match self.peek() {
            Some(t) => (t.line, t.col),
            None => self
                .tokens
                .last()
                .map(|t| (t.line, t.col + 1))
                .unwrap_or((1, 1)),
        }
    }

    fn err(&self, expected: &str) -> ParseError {
        let (line, col) = self.here();
        ParseError::SyntaxError {
            line,
            col,
            expected: expected.into(),
            found: match self.peek() {
                Some(t) => format!("{:?}", t.tok),
                None => "end of input".into(),
            },
        }
    }

    fn take_ident(&mut self, what: &str) -> Result<String, ParseError> {
        match self.peek().map(|t| t.tok.clone()) {
            Some(Tok::Ident(s)) => {
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.err(what)),
        }
    }

    fn take_keyword(&mut self, kw: &str) -> Result<(), ParseError> {
        match self.peek().map(|t| t.tok.clone()) {
            Some(Tok::Ident(s)) if s == kw => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.err(&format!("keyword {kw:?}"))),
        }
    }

    fn eat_keyword(&mut self, kw: &str) -> bool {
        matches!(self.peek().map(|t| &t.tok), Some(Tok::Ident(s)) if s == kw) && {
            self.pos += 1;
            true
        }
    }

    fn take_sym(&mut self, c: char) -> Result<(), ParseError> {
        match self.peek().map(|t| t.tok.clone()) {
            Some(Tok::Sym(s)) if s == c => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.err(&format!("{c:?}"))),
        }
    }

    fn eat_sym(&mut self, c: char) -> bool {
        matches!(self.peek().map(|t| &t.tok), Some(Tok::Sym(s)) if *s == c) && {
            self.pos += 1;
            true
        }
    }

    fn take_int(&mut self) -> Result<usize, ParseError> {
        match self.peek().map(|t| t.tok.clone()) {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(n)
            }
            _ => Err(self.err("an integer")),
        }
    }

    /// A label: identifier, integer, or parenthesized nesting rendered in
    /// the canonical pair format.
    fn take_label(&mut self) -> Result<String, ParseError> {
        match self.peek().map(|t| t.tok.clone()) {
            Some(Tok::Ident(s)) => {
                self.pos += 1;
                Ok(s)
            }
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(n.to_string())
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let mut parts = vec![self.take_label()?];
                while self.eat_sym(',') {
                    parts.push(self.take_label()?);
                }
                self.take_sym(')')?;
                Ok(match parts.len() {
                    1 => format!("({})", parts[0]),
                    _ => {
                        let mut s = parts[0].clone();
                        for p in &parts[1..] {
                            s = pair_label(&s, p);
                        }
                        // Right-fold would differ; labels in this codebase
                        // nest left-to-right only for two components, and
                        // longer tuples are spelled explicitly.
                        if parts.len() == 2 {
                            s
                        } else {
                            format!("({})", parts.join(","))
                        }
                    }
                })
            }
            _ => Err(self.err("a label")),
        }
    }

    fn take_set(&mut self) -> Result<Vec<String>, ParseError> {
        self.take_sym('{')?;
        let mut items = Vec::new();
        if self.eat_sym('}') {
            return Ok(items);
        }
        items.push(self.take_label()?);
        while self.eat_sym(',') {
            items.push(self.take_label()?);
        }
        self.take_sym('}')?;
        Ok(items)
    }

    fn take_setset(&mut self) -> Result<Vec<Vec<String>>, ParseError> {
        self.take_sym('{')?;
        let mut items = Vec::new();
        if self.eat_sym('}') {
            return Ok(items);
        }
        items.push(self.take_set()?);
        while self.eat_sym(',') {
            items.push(self.take_set()?);
        }
        self.take_sym('}')?;
        Ok(items)
    }

    fn take_bindings(&mut self) -> Result<Vec<(String, String)>, ParseError> {
        self.take_sym('{')?;
        let mut items = Vec::new();
        if self.eat_sym('}') {
            return Ok(items);
        }
        loop {
            let key = self.take_label()?;
            match self.peek().map(|t| t.tok.clone()) {
                Some(Tok::Arrow) => self.pos += 1,
                _ => return Err(self.err("'->'")),
            }
            let value = self.take_label()?;
            items.push((key, value));
            if !self.eat_sym(',') {
                break;
            }
        }
        self.take_sym('}')?;
        Ok(items)
    }

    /// Bindings whose keys are pairs `(a, b)`.
    fn take_pair_bindings(&mut self) -> Result<Vec<((String, String), String)>, ParseError> {
        self.take_sym('{')?;
        let mut items = Vec::new();
        if self.eat_sym('}') {
            return Ok(items);
        }
        loop {
            self.take_sym('(')?;
            let a = self.take_label()?;
            self.take_sym(',')?;
            let b = self.take_label()?;
            self.take_sym(')')?;
            match self.peek().map(|t| t.tok.clone()) {
                Some(Tok::Arrow) => self.pos += 1,
                _ => return Err(self.err("'->'")),
            }
            let value = self.take_label()?;
            items.push(((a, b), value));
            if !self.eat_sym(',') {
                break;
            }
        }
        self.take_sym('}')?;
        Ok(items)
    }

    fn declare(&mut self, name: &str, kind: NameKind) -> Result<(), ParseError> {
        if self.names.iter().any(|(n, _)| n == name) {
            let (line, col) = self.here();
            return Err(ParseError::DuplicateName { line, col, name: name.to_string() });
        }
        self.names.push((name.to_string(), kind));
        Ok(())
    }

    fn resolve(&self, name: &str, kind: NameKind, what: &str) -> Result<(), ParseError> {
        match self.names.iter().find(|(n, _)| n == name) {
            Some((_, k)) if *k == kind => Ok(()),
            _ => {
                let (line, col) = self.here();
                Err(ParseError::UnresolvedReference {
                    line,
                    col,
                    name: name.to_string(),
                    expected: what.into(),
                })
            }
        }
    }

    /// Resolves a tensor factor: a subgroupoid (quotient biset) or a
    /// groupoid (regular biset).
    fn resolve_factor(&self, name: &str) -> Result<(), ParseError> {
        match self.names.iter().find(|(n, _)| n == name) {
            Some((_, NameKind::Sub)) | Some((_, NameKind::Groupoid)) => Ok(()),
            _ => {
                let (line, col) = self.here();
                Err(ParseError::UnresolvedReference {
                    line,
                    col,
                    name: name.to_string(),
                    expected: "a groupoid or subgroupoid".into(),
                })
            }
        }
    }

    fn builder(&mut self) -> Result<BuilderSpec, ParseError> {
        let kw = self.take_ident("a builder keyword")?;
        match kw.as_str() {
            "trivial" => Ok(BuilderSpec::Trivial(self.take_set()?)),
            "pairs" => Ok(BuilderSpec::Pairs(self.take_set()?)),
            "eqrel" => {
                self.take_keyword("over")?;
                let over = self.take_set()?;
                self.take_keyword("classes")?;
                let classes = self.take_setset()?;
                Ok(BuilderSpec::EqRel { over, classes })
            }
            "group" => {
                self.take_keyword("cyclic")?;
                Ok(BuilderSpec::Cyclic(self.take_int()?))
            }
            "product" => {
                self.take_sym('(')?;
                let a = self.take_ident("a groupoid name")?;
                self.resolve(&a, NameKind::Groupoid, "a groupoid")?;
                self.take_sym(',')?;
                let b = self.take_ident("a groupoid name")?;
                self.resolve(&b, NameKind::Groupoid, "a groupoid")?;
                self.take_sym(')')?;
                Ok(BuilderSpec::Product(a, b))
            }
            "opposite" => {
                self.take_sym('(')?;
                let a = self.take_ident("a groupoid name")?;
                self.resolve(&a, NameKind::Groupoid, "a groupoid")?;
                self.take_sym(')')?;
                Ok(BuilderSpec::Opposite(a))
            }
            "table" => {
                self.take_sym('{')?;
                self.take_keyword("objects")?;
                let objects = self.take_set()?;
                self.take_keyword("arrows")?;
                self.take_sym('{')?;
                let mut arrows = Vec::new();
                if !self.eat_sym('}') {
                    loop {
                        self.take_sym('(')?;
                        let name = self.take_label()?;
                        self.take_sym(',')?;
                        let src = self.take_label()?;
                        self.take_sym(',')?;
                        let tgt = self.take_label()?;
                        self.take_sym(')')?;
                        arrows.push((name, src, tgt));
                        if !self.eat_sym(',') {
                            break;
                        }
                    }
                    self.take_sym('}')?;
                }
                self.take_keyword("ident")?;
                let ident = self.take_bindings()?;
                self.take_keyword("inv")?;
                let inv = self.take_bindings()?;
                self.take_keyword("comp")?;
                let comp = self.take_pair_bindings()?;
                self.take_sym('}')?;
                Ok(BuilderSpec::Table { objects, arrows, ident, inv, comp })
            }
            other => {
                let (line, col) = self.here();
                Err(ParseError::SyntaxError {
                    line,
                    col,
                    expected: "trivial|pairs|eqrel|group|product|opposite|table".into(),
                    found: other.into(),
                })
            }
        }
    }

    fn decl(&mut self) -> Result<(usize, Decl), ParseError> {
        let line = self.here().0;
        let kw = self.take_ident("a declaration keyword")?;
        match kw.as_str() {
            "groupoid" => {
                let name = self.take_ident("a name")?;
                self.take_sym('=')?;
                let builder = self.builder()?;
                self.declare(&name, NameKind::Groupoid)?;
                Ok((line, Decl::Groupoid { name, builder }))
            }
            "subgroupoid" => {
                let name = self.take_ident("a name")?;
                self.take_keyword("of")?;
                let parent = self.take_ident("a groupoid name")?;
                self.resolve(&parent, NameKind::Groupoid, "a groupoid")?;
                self.take_sym('=')?;
                let wide = self.eat_keyword("wide");
                self.take_keyword("arrows")?;
                let arrows = self.take_set()?;
                let close = self.eat_keyword("close");
                self.declare(&name, NameKind::Sub)?;
                Ok((line, Decl::Sub { name, parent, wide, arrows, close }))
            }
            "action" => {
                let name = self.take_ident("a name")?;
                let side = if self.eat_keyword("left") {
                    SideSpec::Left
                } else if self.eat_keyword("right") {
                    SideSpec::Right
                } else {
                    return Err(self.err("'left' or 'right'"));
                };
                self.take_keyword("of")?;
                let groupoid = self.take_ident("a groupoid name")?;
                self.resolve(&groupoid, NameKind::Groupoid, "a groupoid")?;
                self.take_sym('{')?;
                self.take_keyword("carrier")?;
                let carrier = self.take_set()?;
                self.take_keyword("map")?;
                let structure = self.take_bindings()?;
                self.take_keyword("act")?;
                let act = self.take_pair_bindings()?;
                self.take_sym('}')?;
                self.declare(&name, NameKind::Action)?;
                Ok((line, Decl::Action { name, side, groupoid, carrier, structure, act }))
            }
            "check" => {
                let what = self.take_ident("a check kind")?;
                let check = match what.as_str() {
                    "validate" => {
                        let name = self.take_ident("a name")?;
                        if !self.names.iter().any(|(n, _)| n == &name) {
                            let (l, c) = self.here();
                            return Err(ParseError::UnresolvedReference {
                                line: l,
                                col: c,
                                name,
                                expected: "a declared entity".into(),
                            });
                        }
                        CheckSpec::Validate(name)
                    }
                    "orbits" => {
                        let name = self.take_ident("an action name")?;
                        self.resolve(&name, NameKind::Action, "an action")?;
                        CheckSpec::Orbits(name)
                    }
                    "cosets" => {
                        let groupoid = self.take_ident("a groupoid name")?;
                        self.resolve(&groupoid, NameKind::Groupoid, "a groupoid")?;
                        let sub = self.take_ident("a subgroupoid name")?;
                        self.resolve(&sub, NameKind::Sub, "a subgroupoid")?;
                        let side = if self.eat_keyword("left") {
                            SideSpec::Left
                        } else if self.eat_keyword("right") {
                            SideSpec::Right
                        } else {
                            return Err(self.err("'left' or 'right'"));
                        };
                        CheckSpec::Cosets { groupoid, sub, side }
                    }
                    "tensor" => {
                        let left = self.take_ident("a factor name")?;
                        self.resolve_factor(&left)?;
                        let over = self.take_ident("a groupoid name")?;
                        self.resolve(&over, NameKind::Groupoid, "a groupoid")?;
                        let right = self.take_ident("a factor name")?;
                        self.resolve_factor(&right)?;
                        CheckSpec::Tensor { left, over, right }
                    }
                    "mackey" => {
                        let k = self.take_ident("a groupoid name")?;
                        self.resolve(&k, NameKind::Groupoid, "a groupoid")?;
                        let h = self.take_ident("a groupoid name")?;
                        self.resolve(&h, NameKind::Groupoid, "a groupoid")?;
                        let g = self.take_ident("a groupoid name")?;
                        self.resolve(&g, NameKind::Groupoid, "a groupoid")?;
                        let m = self.take_ident("a subgroupoid name")?;
                        self.resolve(&m, NameKind::Sub, "a subgroupoid")?;
                        let l = self.take_ident("a subgroupoid name")?;
                        self.resolve(&l, NameKind::Sub, "a subgroupoid")?;
                        CheckSpec::Mackey { k, h, g, m, l }
                    }
                    other => {
                        let (l, c) = self.here();
                        return Err(ParseError::SyntaxError {
                            line: l,
                            col: c,
                            expected: "validate|orbits|cosets|tensor|mackey".into(),
                            found: other.into(),
                        });
                    }
                };
                Ok((line, Decl::Check(check)))
            }
            other => {
                let (l, c) = self.here();
                Err(ParseError::SyntaxError {
                    line: l,
                    col: c,
                    expected: "groupoid|subgroupoid|action|check".into(),
                    found: other.into(),
                })
            }
        }
    }
}

/// Parses an instance file.
pub fn parse_spec(text: &str) -> Result<InstanceSpec, ParseError> {
    let tokens = tokenize(text)?;
    let mut parser = Parser { tokens, pos: 0, names: Vec::new() };
    let mut decls = Vec::new();
    while parser.peek().is_some() {
        decls.push(parser.decl()?);
    }
    Ok(InstanceSpec { decls })
}

fn print_set(items: &[String]) -> String {
    format!("{{{}}}", items.join(", "))
}

/// Prints a spec in the canonical layout; `parse_spec` of the output yields
/// an equal spec.
pub fn print_spec(spec: &InstanceSpec) -> String {
    let mut out = String::new();
    for (_, decl) in &spec.decls {
        match decl {
            Decl::Groupoid { name, builder } => {
                let b = match builder {
                    BuilderSpec::Trivial(els) => format!("trivial {}", print_set(els)),
                    BuilderSpec::Pairs(els) => format!("pairs {}", print_set(els)),
                    BuilderSpec::EqRel { over, classes } => format!(
                        "eqrel over {} classes {{{}}}",
                        print_set(over),
                        classes.iter().map(|c| print_set(c)).collect::<Vec<_>>().join(", ")
                    ),
                    BuilderSpec::Cyclic(n) => format!("group cyclic {n}"),
                    BuilderSpec::Product(a, b) => format!("product({a}, {b})"),
                    BuilderSpec::Opposite(a) => format!("opposite({a})"),
                    BuilderSpec::Table { objects, arrows, ident, inv, comp } => {
                        let arrows = arrows
                            .iter()
                            .map(|(n, s, t)| format!("({n}, {s}, {t})"))
                            .collect::<Vec<_>>()
                            .join(", ");
                        let bind = |items: &[(String, String)]| {
                            items
                                .iter()
                                .map(|(k, v)| format!("{k} -> {v}"))
                                .collect::<Vec<_>>()
                                .join(", ")
                        };
                        let comp = comp
                            .iter()
                            .map(|((a, b), c)| format!("({a}, {b}) -> {c}"))
                            .collect::<Vec<_>>()
                            .join(", ");
                        format!(
                            "table {{ objects {} arrows {{{arrows}}} ident {{{}}} inv {{{}}} comp {{{comp}}} }}",
                            print_set(objects),
                            bind(ident),
                            bind(inv),
                        )
                    }
                };
                let _ = writeln!(out, "groupoid {name} = {b}");
            }
            Decl::Sub { name, parent, wide, arrows, close } => {
                let _ = writeln!(
                    out,
                    "subgroupoid {name} of {parent} ={} arrows {}{}",
                    if *wide { " wide" } else { "" },
                    print_set(arrows),
                    if *close { " close" } else { "" },
                );
            }
            Decl::Action { name, side, groupoid, carrier, structure, act } => {
                let side = match side {
                    SideSpec::Left => "left",
                    SideSpec::Right => "right",
                };
                let map = structure
                    .iter()
                    .map(|(k, v)| format!("{k} -> {v}"))
                    .collect::<Vec<_>>()
                    .join(", ");
                let act = act
                    .iter()
                    .map(|((x, g), y)| format!("({x}, {g}) -> {y}"))
                    .collect::<Vec<_>>()
                    .join(", ");
                let _ = writeln!(
                    out,
                    "action {name} {side} of {groupoid} {{ carrier {} map {{{map}}} act {{{act}}} }}",
                    print_set(carrier),
                );
            }
            Decl::Check(check) => {
                let c = match check {
                    CheckSpec::Validate(n) => format!("validate {n}"),
                    CheckSpec::Orbits(n) => format!("orbits {n}"),
                    CheckSpec::Cosets { groupoid, sub, side } => format!(
                        "cosets {groupoid} {sub} {}",
                        if *side == SideSpec::Left { "left" } else { "right" }
                    ),
                    CheckSpec::Tensor { left, over, right } => {
                        format!("tensor {left} {over} {right}")
                    }
                    CheckSpec::Mackey { k, h, g, m, l } => format!("mackey {k} {h} {g} {m} {l}"),
                };
                let _ = writeln!(out, "check {c}");
            }
        }
    }
    out
}

/// A groupoid entry: the value and, when it was built as a product, the
/// factor structure (required for subgroupoids used in tensor or Mackey
/// checks).
#[derive(Debug, Clone)]
pub struct GroupoidEntry {
    pub groupoid: Arc<FiniteGroupoid>,
    pub product: Option<ProductGroupoid>,
}

#[derive(Debug, Clone)]
pub enum Entity {
    Groupoid(GroupoidEntry),
    Sub { parent: String, sub: Subgroupoid },
    Action(GroupoidAction),
}

/// All declared entities, in declaration order.
#[derive(Debug, Clone, Default)]
pub struct Env {
    entries: Vec<(String, Entity)>,
}

impl Env {
    pub fn get(&self, name: &str) -> Option<&Entity> {
        self.entries.iter().find(|(n, _)| n == name).map(|(_, e)| e)
    }

    pub fn groupoid(&self, name: &str) -> Option<&GroupoidEntry> {
        match self.get(name) {
            Some(Entity::Groupoid(g)) => Some(g),
            _ => None,
        }
    }

    pub fn sub(&self, name: &str) -> Option<(&String, &Subgroupoid)> {
        match self.get(name) {
            Some(Entity::Sub { parent, sub }) => Some((parent, sub)),
            _ => None,
        }
    }

    pub fn action(&self, name: &str) -> Option<&GroupoidAction> {
        match self.get(name) {
            Some(Entity::Action(a)) => Some(a),
            _ => None,
        }
    }

    pub fn entries(&self) -> &[(String, Entity)] {
        &self.entries
    }
}

/// Builds every declared entity. Check directives are carried in the spec
/// and interpreted by the caller.
pub fn build_env(spec: &InstanceSpec) -> Result<Env, BuildSpecError> {
    let mut env = Env::default();
    for (line, decl) in &spec.decls {
        let line = *line;
        let fail = |msg: String| BuildSpecError { line, msg };
        match decl {
            Decl::Groupoid { name, builder } => {
                let entry = build_groupoid_entry(&env, builder).map_err(fail)?;
                env.entries.push((name.clone(), Entity::Groupoid(entry)));
            }
            Decl::Sub { name, parent, wide, arrows, close } => {
                let parent_entry = env
                    .groupoid(parent)
                    .ok_or_else(|| fail(format!("unknown groupoid {parent:?}")))?;
                let g = parent_entry.groupoid.clone();
                let mut seeds = Vec::new();
                for label in arrows {
                    let arr = g
                        .arrow_by_label(label)
                        .ok_or_else(|| fail(format!("no arrow labelled {label:?} in {parent}")))?;
                    seeds.push(arr);
                }
                let sub = if *close {
                    let mut s = Subgroupoid::closure(g.clone(), &seeds, *wide);
                    if *wide {
                        s = Subgroupoid::new(
                            g.clone(),
                            vec![true; g.n_objects()],
                            s.arrow_mask().to_vec(),
                        );
                    }
                    s
                } else {
                    let mut arrow_mask = vec![false; g.n_arrows()];
                    for a in &seeds {
                        arrow_mask[a.0] = true;
                    }
                    let mut object_mask = vec![*wide; g.n_objects()];
                    if *wide {
                        for x in g.objects() {
                            arrow_mask[g.ident(x).0] = true;
                        }
                    } else {
                        for &a in &seeds {
                            object_mask[g.src(a).0] = true;
                            object_mask[g.tgt(a).0] = true;
                        }
                        for x in g.objects() {
                            if object_mask[x.0] {
                                arrow_mask[g.ident(x).0] = true;
                            }
                        }
                    }
                    Subgroupoid::new(g.clone(), object_mask, arrow_mask)
                };
                env.entries.push((name.clone(), Entity::Sub { parent: parent.clone(), sub }));
            }
            Decl::Action { name, side, groupoid, carrier, structure, act } => {
                let entry = env
                    .groupoid(groupoid)
                    .ok_or_else(|| fail(format!("unknown groupoid {groupoid:?}")))?;
                let g = entry.groupoid.clone();
                let element = |label: &str| {
                    carrier
                        .iter()
                        .position(|c| c == label)
                        .map(ElementId)
                        .ok_or_else(|| fail(format!("unknown carrier element {label:?}")))
                };
                let mut structure_table = vec![None; carrier.len()];
                for (el, ob) in structure {
                    let e = element(el)?;
                    let o = g
                        .object_by_label(ob)
                        .ok_or_else(|| fail(format!("unknown object {ob:?}")))?;
                    structure_table[e.0] = Some(o);
                }
                let structure_table: Vec<ObjectId> = structure_table
                    .into_iter()
                    .enumerate()
                    .map(|(i, o)| o.ok_or_else(|| fail(format!("carrier element {:?} has no structure map entry", carrier[i]))))
                    .collect::<Result<_, _>>()?;
                let mut table = vec![None; carrier.len() * g.n_arrows()];
                for ((el, arrow_label), to) in act {
                    let e = element(el)?;
                    let a = g
                        .arrow_by_label(arrow_label)
                        .ok_or_else(|| fail(format!("no arrow labelled {arrow_label:?}")))?;
                    let t = element(to)?;
                    table[e.0 * g.n_arrows() + a.0] = Some(t);
                }
                let action = GroupoidAction::from_tables(
                    (*side).into(),
                    g,
                    carrier.clone(),
                    structure_table,
                    table,
                )
                .map_err(|e| fail(e.to_string()))?;
                env.entries.push((name.clone(), Entity::Action(action)));
            }
            Decl::Check(_) => {}
        }
    }
    Ok(env)
}

fn build_groupoid_entry(env: &Env, builder: &BuilderSpec) -> Result<GroupoidEntry, String> {
    let plain = |g: FiniteGroupoid| GroupoidEntry { groupoid: Arc::new(g), product: None };
    match builder {
        BuilderSpec::Trivial(els) => build_groupoid(&Builder::Trivial { elements: els.clone() })
            .map(plain)
            .map_err(|e| e.to_string()),
        BuilderSpec::Pairs(els) => build_groupoid(&Builder::Pairs { elements: els.clone() })
            .map(plain)
            .map_err(|e| e.to_string()),
        BuilderSpec::EqRel { over, classes } => build_groupoid(&Builder::EqRel {
            elements: over.clone(),
            classes: classes.clone(),
        })
        .map(plain)
        .map_err(|e| e.to_string()),
        BuilderSpec::Cyclic(n) => cyclic_group(*n).map(plain).map_err(|e| e.to_string()),
        BuilderSpec::Product(a, b) => {
            let ga = env.groupoid(a).ok_or_else(|| format!("unknown groupoid {a:?}"))?;
            let gb = env.groupoid(b).ok_or_else(|| format!("unknown groupoid {b:?}"))?;
            let prod = ProductGroupoid::new(ga.groupoid.clone(), gb.groupoid.clone());
            Ok(GroupoidEntry { groupoid: prod.groupoid().clone(), product: Some(prod) })
        }
        BuilderSpec::Opposite(a) => {
            let ga = env.groupoid(a).ok_or_else(|| format!("unknown groupoid {a:?}"))?;
            Ok(plain(crate::groupoid::opposite(&ga.groupoid)))
        }
        BuilderSpec::Table { objects, arrows, ident, inv, comp } => {
            let obj = |label: &str| {
                objects
                    .iter()
                    .position(|o| o == label)
                    .map(ObjectId)
                    .ok_or_else(|| format!("unknown object {label:?}"))
            };
            let names: Vec<String> = arrows.iter().map(|(n, _, _)| n.clone()).collect();
            let arr = |label: &str| {
                names
                    .iter()
                    .position(|n| n == label)
                    .map(ArrowId)
                    .ok_or_else(|| format!("unknown arrow {label:?}"))
            };
            let src = arrows.iter().map(|(_, s, _)| obj(s)).collect::<Result<Vec<_>, _>>()?;
            let tgt = arrows.iter().map(|(_, _, t)| obj(t)).collect::<Result<Vec<_>, _>>()?;
            let mut ident_table = vec![None; objects.len()];
            for (o, a) in ident {
                ident_table[obj(o)?.0] = Some(arr(a)?);
            }
            let ident_table: Vec<ArrowId> = ident_table
                .into_iter()
                .enumerate()
                .map(|(i, a)| a.ok_or_else(|| format!("object {:?} has no identity entry", objects[i])))
                .collect::<Result<_, _>>()?;
            let mut inv_table = vec![None; names.len()];
            for (a, b) in inv {
                inv_table[arr(a)?.0] = Some(arr(b)?);
            }
            let inv_table: Vec<ArrowId> = inv_table
                .into_iter()
                .enumerate()
                .map(|(i, a)| a.ok_or_else(|| format!("arrow {:?} has no inverse entry", names[i])))
                .collect::<Result<_, _>>()?;
            let mut comp_table = vec![None; names.len() * names.len()];
            for ((a, b), c) in comp {
                comp_table[arr(a)?.0 * names.len() + arr(b)?.0] = Some(arr(c)?);
            }
            FiniteGroupoid::from_tables(
                objects.clone(),
                names,
                src,
                tgt,
                ident_table,
                inv_table,
                comp_table,
            )
            .map(plain)
            .map_err(|e| e.to_string())
        }
    }
}
