//! Parser for the rendering grammar of [`super::pretty`].

use thiserror::Error;

use crate::engine::Sym;

use super::tags::TagTable;
use super::term::{Arrow, AtomicConstraint, Ctor, ShapeKind, TypePattern, TypeTerm};

#[derive(Debug, Error, PartialEq, Eq)]
#[error("type syntax error at offset {offset}: {message}")]
pub struct TypeSyntaxError {
    pub offset: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Lower(String),
    Upper(String),
    Punct(&'static str),
}

const PUNCT: [&str; 14] = [
    "=>", "->", "(", ")", "[", "]", ",", ";", "|", ".", "&", "@", "#", "?",
];

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, TypeSyntaxError> {
    let mut toks = Vec::new();
    let bytes = src.as_bytes();
    let mut i = 0;
    'outer: while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len()
                && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_' || bytes[i] == b'\'')
            {
                i += 1;
            }
            let word = src[start..i].to_string();
            if word == "_" {
                toks.push((start, Tok::Punct("_")));
            } else if c.is_ascii_uppercase() {
                toks.push((start, Tok::Upper(word)));
            } else {
                toks.push((start, Tok::Lower(word)));
            }
            continue;
        }
        for p in PUNCT {
            if src[i..].starts_with(p) {
                toks.push((i, Tok::Punct(p)));
                i += p.len();
                continue 'outer;
            }
        }
        return Err(TypeSyntaxError {
            offset: i,
            message: format!("unexpected character {c:?}"),
        });
    }
    Ok(toks)
}

/// Recursive-descent parser with backtracking. Constructor labels are looked
/// up in (or, when `intern` is set, added to) the tag table.
pub struct TypeParser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    tags: &'a mut TagTable,
    intern: bool,
}

type PResult<T> = Result<T, TypeSyntaxError>;

impl<'a> TypeParser<'a> {
    pub fn new(src: &str, tags: &'a mut TagTable, intern: bool) -> PResult<Self> {
        Ok(TypeParser {
            toks: lex(src)?,
            pos: 0,
            end: src.len(),
            tags,
            intern,
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(o, _)| *o).unwrap_or(self.end)
    }

    fn error<T>(&self, message: impl Into<String>) -> PResult<T> {
        Err(TypeSyntaxError {
            offset: self.offset(),
            message: message.into(),
        })
    }

    fn is_punct(&self, p: &str) -> bool {
        matches!(self.peek(), Some(Tok::Punct(q)) if *q == p)
    }

    fn eat(&mut self, p: &str) -> bool {
        if self.is_punct(p) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, p: &str) -> PResult<()> {
        if self.eat(p) {
            Ok(())
        } else {
            self.error(format!("expected `{p}`"))
        }
    }

    fn is_word(&self, w: &str) -> bool {
        matches!(self.peek(), Some(Tok::Lower(x) | Tok::Upper(x)) if x == w)
    }

    fn lower(&mut self) -> PResult<Sym> {
        match self.peek() {
            Some(Tok::Lower(x)) => {
                let s = Sym::new(x);
                self.pos += 1;
                Ok(s)
            }
            _ => self.error("expected a name"),
        }
    }

    pub fn finish(&self) -> PResult<()> {
        if self.pos == self.toks.len() {
            Ok(())
        } else {
            self.error("trailing input")
        }
    }

    fn tag(&mut self, label: &str, arity: usize) -> PResult<u32> {
        if self.intern {
            return Ok(self.tags.intern(label, arity));
        }
        match self.tags.lookup(label, arity) {
            Some(t) => Ok(t),
            None => self.error(format!("unknown constructor {label}/{arity}")),
        }
    }

    pub fn ty(&mut self) -> PResult<TypeTerm> {
        if self.is_word("forall") {
            self.pos += 1;
            let mut bound = Vec::new();
            while !self.eat(".") {
                bound.push(self.lower()?);
            }
            return self.arrow_rest(bound);
        }
        if self.is_word("mu") {
            self.pos += 1;
            let x = self.lower()?;
            self.expect(".")?;
            let body = self.ty()?;
            return Ok(TypeTerm::Mu(x, Box::new(body)));
        }
        if self.is_punct("(") {
            return self.arrow_rest(Vec::new());
        }
        if matches!(self.peek(), Some(Tok::Upper(w)) if is_constraint_word(w)) {
            let save = self.pos;
            if let Ok(arrow) = self.arrow_rest(Vec::new()) {
                return Ok(arrow);
            }
            self.pos = save;
        }
        if self.is_word("Int") {
            self.pos += 1;
            return Ok(TypeTerm::Int);
        }
        if self.is_word("Str") {
            self.pos += 1;
            return Ok(TypeTerm::Str);
        }
        if self.eat("[") {
            let e = self.ty()?;
            self.expect("]")?;
            return Ok(TypeTerm::array(e));
        }
        if matches!(self.peek(), Some(Tok::Upper(_))) || self.is_punct("?") {
            return self.union();
        }
        if matches!(self.peek(), Some(Tok::Lower(_))) {
            return Ok(TypeTerm::Var(self.lower()?));
        }
        self.error("expected a type")
    }

    fn arrow_rest(&mut self, bound: Vec<Sym>) -> PResult<TypeTerm> {
        let mut constraints = Vec::new();
        if !self.is_punct("(") {
            loop {
                constraints.push(self.constraint()?);
                if !self.eat("&") {
                    break;
                }
            }
            self.expect("=>")?;
        }
        self.expect("(")?;
        let params = self.tys_until(")")?;
        self.expect("->")?;
        let result = self.ty()?;
        Ok(TypeTerm::Arrow(Box::new(Arrow {
            bound,
            constraints,
            params,
            result,
        })))
    }

    fn tys_until(&mut self, close: &str) -> PResult<Vec<TypeTerm>> {
        let mut out = Vec::new();
        if self.eat(close) {
            return Ok(out);
        }
        loop {
            out.push(self.ty()?);
            if self.eat(close) {
                return Ok(out);
            }
            self.expect(",")?;
        }
    }

    fn union(&mut self) -> PResult<TypeTerm> {
        let mut ctors = Vec::new();
        loop {
            if self.eat("?") {
                ctors.push(Ctor::Open(self.lower()?));
            } else {
                let label = match self.peek() {
                    Some(Tok::Upper(l)) => l.clone(),
                    _ => return self.error("expected a constructor"),
                };
                self.pos += 1;
                let args = if self.eat("(") {
                    self.tys_until(")")?
                } else {
                    Vec::new()
                };
                let tag = self.tag(&label, args.len())?;
                ctors.push(Ctor::Known { tag, args });
            }
            if !self.eat("|") {
                return Ok(TypeTerm::Sexp(ctors));
            }
        }
    }

    pub fn constraint(&mut self) -> PResult<AtomicConstraint> {
        let word = match self.peek() {
            Some(Tok::Upper(w)) if is_constraint_word(w) => w.clone(),
            _ => return self.error("expected a constraint"),
        };
        self.pos += 1;
        match word.as_str() {
            "Ind" | "Eq" => {
                self.expect("(")?;
                let a = self.ty()?;
                self.expect(",")?;
                let b = self.ty()?;
                self.expect(")")?;
                Ok(if word == "Ind" {
                    AtomicConstraint::Ind(a, b)
                } else {
                    AtomicConstraint::Eq(a, b)
                })
            }
            "Call" => {
                self.expect("(")?;
                let f = self.ty()?;
                self.expect(";")?;
                let args = self.tys_until(";")?;
                let r = self.ty()?;
                self.expect(")")?;
                Ok(AtomicConstraint::Call(f, args, r))
            }
            "Sexp" => {
                self.expect("[")?;
                let label = match self.peek() {
                    Some(Tok::Upper(l)) => l.clone(),
                    _ => return self.error("expected a constructor label"),
                };
                self.pos += 1;
                self.expect("]")?;
                self.expect("(")?;
                let t = self.ty()?;
                self.expect(";")?;
                let args = self.tys_until(")")?;
                let tag = self.tag(&label, args.len())?;
                Ok(AtomicConstraint::Sexp(tag, t, args))
            }
            _ => {
                self.expect("(")?;
                let t = self.ty()?;
                self.expect(";")?;
                let mut ps = Vec::new();
                if !self.eat(")") {
                    loop {
                        ps.push(self.pattern()?);
                        if self.eat(")") {
                            break;
                        }
                        self.expect(",")?;
                    }
                }
                Ok(AtomicConstraint::Match(t, ps))
            }
        }
    }

    pub fn pattern(&mut self) -> PResult<TypePattern> {
        let save = self.pos;
        if let Ok(t) = self.ty() {
            if self.eat("@") {
                let p = self.pattern()?;
                return Ok(TypePattern::At(t, Box::new(p)));
            }
        }
        self.pos = save;
        if self.eat("_") {
            return Ok(TypePattern::Wild);
        }
        if self.eat("#") {
            let name = match self.peek() {
                Some(Tok::Lower(n)) => n.clone(),
                _ => return self.error("expected a shape name"),
            };
            return match ShapeKind::from_name(&name) {
                Some(k) => {
                    self.pos += 1;
                    Ok(TypePattern::Shape(k))
                }
                None => self.error(format!("unknown shape #{name}")),
            };
        }
        if self.eat("[") {
            return Ok(TypePattern::Array(self.patterns_until("]")?));
        }
        if let Some(Tok::Upper(label)) = self.peek().cloned() {
            self.pos += 1;
            let ps = if self.eat("(") {
                self.patterns_until(")")?
            } else {
                Vec::new()
            };
            let tag = self.tag(&label, ps.len())?;
            return Ok(TypePattern::Sexp(tag, ps));
        }
        self.error("expected a pattern")
    }

    fn patterns_until(&mut self, close: &str) -> PResult<Vec<TypePattern>> {
        let mut out = Vec::new();
        if self.eat(close) {
            return Ok(out);
        }
        loop {
            out.push(self.pattern()?);
            if self.eat(close) {
                return Ok(out);
            }
            self.expect(",")?;
        }
    }
}

fn is_constraint_word(w: &str) -> bool {
    matches!(w, "Ind" | "Call" | "Sexp" | "Match" | "Eq")
}

/// Parses one type; constructor labels must already be in `tags`.
pub fn parse_type(src: &str, tags: &TagTable) -> PResult<TypeTerm> {
    let mut tags = tags.clone();
    let mut p = TypeParser::new(src, &mut tags, false)?;
    let t = p.ty()?;
    p.finish()?;
    Ok(t)
}

/// Parses one type, interning unseen constructor labels.
pub fn parse_type_interning(src: &str, tags: &mut TagTable) -> PResult<TypeTerm> {
    let mut p = TypeParser::new(src, tags, true)?;
    let t = p.ty()?;
    p.finish()?;
    Ok(t)
}

pub fn parse_constraint(src: &str, tags: &mut TagTable, intern: bool) -> PResult<AtomicConstraint> {
    let mut p = TypeParser::new(src, tags, intern)?;
    let c = p.constraint()?;
    p.finish()?;
    Ok(c)
}
