//! Text rendering of types, constraints and patterns.
//!
//! ```text
//! Int   Str   [T]   Tag(T, ..) | Tag | ?c
//! forall a b. C1 & C2 => (T, ..) -> T
//! mu a. T
//! Ind(T, T)   Call(T; T, ..; T)   Sexp[Tag](T; T, ..)   Match(T; Pi, ..)   Eq(T, T)
//! _   T @ Pi   [Pi, ..]   Tag(Pi, ..)   #box #unbox #str #array #sexp #fun
//! ```
//!
//! Every name (free, quantified or μ-bound) is renamed to `a, b, .., z, a1,
//! ..` in order of first occurrence.

use std::collections::HashMap;
use std::fmt::Write;

use crate::engine::Sym;

use super::tags::{TagId, TagTable};
use super::term::{AtomicConstraint, Ctor, TypePattern, TypeTerm};

/// Assigns canonical display names in first-occurrence order.
#[derive(Default)]
pub struct Namer {
    names: HashMap<Sym, String>,
}

impl Namer {
    pub fn new() -> Self {
        Namer::default()
    }

    pub fn name(&mut self, s: &Sym) -> String {
        let next = self.names.len();
        self.names
            .entry(s.clone())
            .or_insert_with(|| canonical_name(next))
            .clone()
    }
}

pub fn canonical_name(i: usize) -> String {
    let letter = (b'a' + (i % 26) as u8) as char;
    match i / 26 {
        0 => letter.to_string(),
        n => format!("{letter}{n}"),
    }
}

pub struct Printer<'a> {
    pub tags: &'a TagTable,
    pub namer: Namer,
}

impl<'a> Printer<'a> {
    pub fn new(tags: &'a TagTable) -> Self {
        Printer {
            tags,
            namer: Namer::new(),
        }
    }

    fn label(&self, tag: TagId) -> String {
        match self.tags.label(tag) {
            Some(l) => l.to_string(),
            None => format!("Tag{tag}"),
        }
    }

    pub fn ty(&mut self, t: &TypeTerm) -> String {
        let mut out = String::new();
        self.write_ty(&mut out, t);
        out
    }

    fn write_ty(&mut self, out: &mut String, t: &TypeTerm) {
        match t {
            TypeTerm::Var(s) => out.push_str(&self.namer.name(s)),
            TypeTerm::Int => out.push_str("Int"),
            TypeTerm::Str => out.push_str("Str"),
            TypeTerm::Array(e) => {
                out.push('[');
                self.write_ty(out, e);
                out.push(']');
            }
            TypeTerm::Sexp(cs) => {
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        out.push_str(" | ");
                    }
                    match c {
                        Ctor::Known { tag, args } => {
                            out.push_str(&self.label(*tag));
                            if !args.is_empty() {
                                out.push('(');
                                self.write_tys(out, args);
                                out.push(')');
                            }
                        }
                        Ctor::Open(n) => {
                            out.push('?');
                            out.push_str(&self.namer.name(n));
                        }
                    }
                }
            }
            TypeTerm::Arrow(a) => {
                if !a.bound.is_empty() {
                    out.push_str("forall");
                    for b in &a.bound {
                        out.push(' ');
                        out.push_str(&self.namer.name(b));
                    }
                    out.push_str(". ");
                }
                if !a.constraints.is_empty() {
                    for (i, c) in a.constraints.iter().enumerate() {
                        if i > 0 {
                            out.push_str(" & ");
                        }
                        self.write_constraint(out, c);
                    }
                    out.push_str(" => ");
                }
                out.push('(');
                self.write_tys(out, &a.params);
                out.push_str(") -> ");
                self.write_ty(out, &a.result);
            }
            TypeTerm::Mu(x, body) => {
                out.push_str("mu ");
                out.push_str(&self.namer.name(x));
                out.push_str(". ");
                self.write_ty(out, body);
            }
        }
    }

    fn write_tys(&mut self, out: &mut String, ts: &[TypeTerm]) {
        for (i, t) in ts.iter().enumerate() {
            if i > 0 {
                out.push_str(", ");
            }
            self.write_ty(out, t);
        }
    }

    pub fn constraint(&mut self, c: &AtomicConstraint) -> String {
        let mut out = String::new();
        self.write_constraint(&mut out, c);
        out
    }

    fn write_constraint(&mut self, out: &mut String, c: &AtomicConstraint) {
        match c {
            AtomicConstraint::Ind(a, b) => {
                out.push_str("Ind(");
                self.write_ty(out, a);
                out.push_str(", ");
                self.write_ty(out, b);
                out.push(')');
            }
            AtomicConstraint::Eq(a, b) => {
                out.push_str("Eq(");
                self.write_ty(out, a);
                out.push_str(", ");
                self.write_ty(out, b);
                out.push(')');
            }
            AtomicConstraint::Call(f, args, r) => {
                out.push_str("Call(");
                self.write_ty(out, f);
                out.push_str("; ");
                self.write_tys(out, args);
                out.push_str("; ");
                self.write_ty(out, r);
                out.push(')');
            }
            AtomicConstraint::Sexp(tag, t, args) => {
                let _ = write!(out, "Sexp[{}](", self.label(*tag));
                self.write_ty(out, t);
                out.push_str("; ");
                self.write_tys(out, args);
                out.push(')');
            }
            AtomicConstraint::Match(t, ps) => {
                out.push_str("Match(");
                self.write_ty(out, t);
                out.push_str("; ");
                for (i, p) in ps.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    self.write_pattern(out, p);
                }
                out.push(')');
            }
        }
    }

    pub fn pattern(&mut self, p: &TypePattern) -> String {
        let mut out = String::new();
        self.write_pattern(&mut out, p);
        out
    }

    fn write_pattern(&mut self, out: &mut String, p: &TypePattern) {
        match p {
            TypePattern::Wild => out.push('_'),
            TypePattern::At(t, p) => {
                self.write_ty(out, t);
                out.push_str(" @ ");
                self.write_pattern(out, p);
            }
            TypePattern::Array(ps) => {
                out.push('[');
                self.write_patterns(out, ps);
                out.push(']');
            }
            TypePattern::Sexp(tag, ps) => {
                out.push_str(&self.label(*tag));
                if !ps.is_empty() {
                    out.push('(');
                    self.write_patterns(out, ps);
                    out.push(')');
                }
            }
            TypePattern::Shape(k) => {
                out.push('#');
                out.push_str(k.name());
            }
        }
    }

    fn write_patterns(&mut self, out: &mut String, ps: &[TypePattern]) {
        for (i, p) in ps.iter().enumerate() {
            if i > 0 {
                out.push_str(", ");
            }
            self.write_pattern(out, p);
        }
    }
}

pub fn pretty_type(t: &TypeTerm, tags: &TagTable) -> String {
    Printer::new(tags).ty(t)
}

pub fn pretty_constraint(c: &AtomicConstraint, tags: &TagTable) -> String {
    Printer::new(tags).constraint(c)
}
