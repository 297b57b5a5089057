//! Conversion between [`TypeTerm`] values and engine terms.

use thiserror::Error;

use crate::engine::{Reified, Sym, Term};

use super::tags::TagId;
use super::term::{Arrow, AtomicConstraint, Ctor, ShapeKind, TypePattern, TypeTerm};

pub const TNAME: &str = "TName";
pub const TINT: &str = "TInt";
pub const TSTR: &str = "TStr";
pub const TARR: &str = "TArr";
pub const TSEXP: &str = "TSexp";
pub const CTOR: &str = "ctor";
pub const TARROW: &str = "TArrow";
pub const TMU: &str = "TMu";

pub const IND: &str = "Ind";
pub const CALL: &str = "Call";
pub const SEXP: &str = "Sexp";
pub const MATCH: &str = "Match";
pub const EQ: &str = "Eq";

pub const PWILD: &str = "PWild";
pub const PAT: &str = "PAt";
pub const PARR: &str = "PArr";
pub const PSEXP: &str = "PSexp";
pub const PSHAPE: &str = "PShape";

pub fn t_name(s: &Sym) -> Term {
    Term::app(TNAME, vec![Term::Sym(s.clone())])
}

pub fn t_int() -> Term {
    Term::atom(TINT)
}

pub fn t_str() -> Term {
    Term::atom(TSTR)
}

pub fn t_arr(elem: Term) -> Term {
    Term::app(TARR, vec![elem])
}

pub fn t_sexp(ctors: Term) -> Term {
    Term::app(TSEXP, vec![ctors])
}

pub fn ctor(tag: Term, args: Term) -> Term {
    Term::app(CTOR, vec![tag, args])
}

pub fn t_arrow(bound: Term, constraints: Term, params: Term, result: Term) -> Term {
    Term::app(TARROW, vec![bound, constraints, params, result])
}

pub fn t_mu(binder: Term, body: Term) -> Term {
    Term::app(TMU, vec![binder, body])
}

pub fn tag_term(tag: TagId) -> Term {
    Term::Int(tag as i64)
}

/// Source of engine terms for free type variables during encoding.
pub trait VarSource {
    fn var(&mut self, name: &Sym) -> Term;
}

impl<F: FnMut(&Sym) -> Term> VarSource for F {
    fn var(&mut self, name: &Sym) -> Term {
        self(name)
    }
}

/// Encodes every variable as a rigid name.
pub struct Rigid;

impl VarSource for Rigid {
    fn var(&mut self, name: &Sym) -> Term {
        t_name(name)
    }
}

/// Encodes types whose free variables are resolved through `vars`; names
/// bound by an enclosing arrow or μ become rigid `TName` terms.
pub struct Encoder<'a> {
    vars: &'a mut dyn VarSource,
    bound: Vec<Sym>,
}

impl<'a> Encoder<'a> {
    pub fn new(vars: &'a mut dyn VarSource) -> Self {
        Encoder {
            vars,
            bound: Vec::new(),
        }
    }

    fn name(&mut self, s: &Sym) -> Term {
        if self.bound.contains(s) {
            t_name(s)
        } else {
            self.vars.var(s)
        }
    }

    pub fn ty(&mut self, t: &TypeTerm) -> Term {
        match t {
            TypeTerm::Var(s) => self.name(s),
            TypeTerm::Int => t_int(),
            TypeTerm::Str => t_str(),
            TypeTerm::Array(e) => t_arr(self.ty(e)),
            TypeTerm::Sexp(cs) => {
                let items: Vec<Term> = cs
                    .iter()
                    .map(|c| match c {
                        Ctor::Known { tag, args } => ctor(tag_term(*tag), self.types(args)),
                        Ctor::Open(n) => {
                            let args = Sym::new(&format!("{n}'"));
                            ctor(self.name(n), self.name(&args))
                        }
                    })
                    .collect();
                t_sexp(Term::list(items))
            }
            TypeTerm::Arrow(a) => {
                let mark = self.bound.len();
                self.bound.extend(a.bound.iter().cloned());
                let bound = Term::list(
                    a.bound
                        .iter()
                        .map(|s| Term::Sym(s.clone()))
                        .collect::<Vec<_>>(),
                );
                let cs = self.constraints(&a.constraints);
                let ps = self.types(&a.params);
                let r = self.ty(&a.result);
                self.bound.truncate(mark);
                t_arrow(bound, cs, ps, r)
            }
            TypeTerm::Mu(x, body) => {
                self.bound.push(x.clone());
                let b = self.ty(body);
                self.bound.pop();
                t_mu(Term::Sym(x.clone()), b)
            }
        }
    }

    pub fn types(&mut self, ts: &[TypeTerm]) -> Term {
        let items: Vec<Term> = ts.iter().map(|t| self.ty(t)).collect();
        Term::list(items)
    }

    pub fn constraint(&mut self, c: &AtomicConstraint) -> Term {
        match c {
            AtomicConstraint::Ind(a, b) => Term::app(IND, vec![self.ty(a), self.ty(b)]),
            AtomicConstraint::Call(f, args, r) => {
                Term::app(CALL, vec![self.ty(f), self.types(args), self.ty(r)])
            }
            AtomicConstraint::Sexp(tag, t, args) => {
                Term::app(SEXP, vec![tag_term(*tag), self.ty(t), self.types(args)])
            }
            AtomicConstraint::Match(t, ps) => {
                let t = self.ty(t);
                let ps: Vec<Term> = ps.iter().map(|p| self.pattern(p)).collect();
                Term::app(MATCH, vec![t, Term::list(ps)])
            }
            AtomicConstraint::Eq(a, b) => Term::app(EQ, vec![self.ty(a), self.ty(b)]),
        }
    }

    pub fn constraints(&mut self, cs: &[AtomicConstraint]) -> Term {
        let items: Vec<Term> = cs.iter().map(|c| self.constraint(c)).collect();
        Term::list(items)
    }

    pub fn pattern(&mut self, p: &TypePattern) -> Term {
        match p {
            TypePattern::Wild => Term::atom(PWILD),
            TypePattern::At(t, p) => Term::app(PAT, vec![self.ty(t), self.pattern(p)]),
            TypePattern::Array(ps) => {
                let items: Vec<Term> = ps.iter().map(|p| self.pattern(p)).collect();
                Term::app(PARR, vec![Term::list(items)])
            }
            TypePattern::Sexp(tag, ps) => {
                let items: Vec<Term> = ps.iter().map(|p| self.pattern(p)).collect();
                Term::app(PSEXP, vec![tag_term(*tag), Term::list(items)])
            }
            TypePattern::Shape(k) => Term::app(PSHAPE, vec![Term::sym(k.name())]),
        }
    }
}

pub fn encode_rigid(t: &TypeTerm) -> Term {
    Encoder::new(&mut Rigid).ty(t)
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("cannot decode {what} from {term}")]
pub struct DecodeError {
    pub what: &'static str,
    pub term: String,
}

fn err<T>(what: &'static str, r: &Reified) -> Result<T, DecodeError> {
    Err(DecodeError {
        what,
        term: format!("{r:?}"),
    })
}

/// Name given to a free engine variable in a decoded answer.
pub fn free_name(index: usize) -> Sym {
    Sym::new(&format!("_{index}"))
}

fn sym_of(r: &Reified) -> Option<Sym> {
    match r {
        Reified::Sym(s) => Some(s.clone()),
        Reified::Var { index, .. } => Some(free_name(*index)),
        _ => None,
    }
}

fn items(r: &Reified) -> Vec<&Reified> {
    r.list_items().0
}

pub fn decode_type(r: &Reified) -> Result<TypeTerm, DecodeError> {
    match r {
        Reified::Var { index, .. } => Ok(TypeTerm::Var(free_name(*index))),
        Reified::Wild => Ok(TypeTerm::var("_")),
        Reified::App(f, args) => match (f.as_str(), args.as_slice()) {
            (TNAME, [Reified::Sym(s)]) => Ok(TypeTerm::Var(s.clone())),
            (TINT, []) => Ok(TypeTerm::Int),
            (TSTR, []) => Ok(TypeTerm::Str),
            (TARR, [e]) => Ok(TypeTerm::array(decode_type(e)?)),
            (TSEXP, [cs]) => {
                let (entries, tail) = cs.list_items();
                let mut out = Vec::new();
                for e in entries {
                    out.push(decode_ctor(e)?);
                }
                if let Some(Reified::Var { index, .. }) = tail {
                    out.push(Ctor::Open(free_name(*index)));
                }
                Ok(TypeTerm::Sexp(out))
            }
            (TARROW, [bound, cs, ps, res]) => {
                let bound = items(bound)
                    .into_iter()
                    .map(|b| sym_of(b).ok_or(()))
                    .collect::<Result<Vec<_>, _>>()
                    .or_else(|_| err("binder list", bound))?;
                let constraints = items(cs)
                    .into_iter()
                    .map(decode_constraint)
                    .collect::<Result<_, _>>()?;
                let params = items(ps)
                    .into_iter()
                    .map(decode_type)
                    .collect::<Result<_, _>>()?;
                Ok(TypeTerm::Arrow(Box::new(Arrow {
                    bound,
                    constraints,
                    params,
                    result: decode_type(res)?,
                })))
            }
            (TMU, [x, body]) => match sym_of(x) {
                Some(x) => Ok(TypeTerm::Mu(x, Box::new(decode_type(body)?))),
                None => err("mu binder", x),
            },
            _ => err("type", r),
        },
        _ => err("type", r),
    }
}

fn decode_tag(r: &Reified) -> Option<TagId> {
    match r {
        Reified::Int(n) if *n >= 0 => Some(*n as TagId),
        _ => None,
    }
}

fn decode_ctor(r: &Reified) -> Result<Ctor, DecodeError> {
    match r {
        Reified::App(f, args) if f.as_str() == CTOR && args.len() == 2 => match &args[0] {
            Reified::Var { index, .. } => Ok(Ctor::Open(free_name(*index))),
            tag => match decode_tag(tag) {
                Some(tag) => Ok(Ctor::Known {
                    tag,
                    args: items(&args[1])
                        .into_iter()
                        .map(decode_type)
                        .collect::<Result<_, _>>()?,
                }),
                None => err("constructor tag", tag),
            },
        },
        Reified::Var { index, .. } => Ok(Ctor::Open(free_name(*index))),
        _ => err("constructor", r),
    }
}

fn decode_types(r: &Reified) -> Result<Vec<TypeTerm>, DecodeError> {
    items(r).into_iter().map(decode_type).collect()
}

pub fn decode_constraint(r: &Reified) -> Result<AtomicConstraint, DecodeError> {
    match r {
        Reified::App(f, args) => match (f.as_str(), args.as_slice()) {
            (IND, [a, b]) => Ok(AtomicConstraint::Ind(decode_type(a)?, decode_type(b)?)),
            (CALL, [g, xs, res]) => Ok(AtomicConstraint::Call(
                decode_type(g)?,
                decode_types(xs)?,
                decode_type(res)?,
            )),
            (SEXP, [tag, t, xs]) => match decode_tag(tag) {
                Some(tag) => Ok(AtomicConstraint::Sexp(
                    tag,
                    decode_type(t)?,
                    decode_types(xs)?,
                )),
                None => err("constraint tag", tag),
            },
            (MATCH, [t, ps]) => Ok(AtomicConstraint::Match(
                decode_type(t)?,
                items(ps)
                    .into_iter()
                    .map(decode_pattern)
                    .collect::<Result<_, _>>()?,
            )),
            (EQ, [a, b]) => Ok(AtomicConstraint::Eq(decode_type(a)?, decode_type(b)?)),
            _ => err("constraint", r),
        },
        _ => err("constraint", r),
    }
}

pub fn decode_pattern(r: &Reified) -> Result<TypePattern, DecodeError> {
    match r {
        Reified::App(f, args) => match (f.as_str(), args.as_slice()) {
            (PWILD, []) => Ok(TypePattern::Wild),
            (PAT, [t, p]) => Ok(TypePattern::At(
                decode_type(t)?,
                Box::new(decode_pattern(p)?),
            )),
            (PARR, [ps]) => Ok(TypePattern::Array(
                items(ps)
                    .into_iter()
                    .map(decode_pattern)
                    .collect::<Result<_, _>>()?,
            )),
            (PSEXP, [tag, ps]) => match decode_tag(tag) {
                Some(tag) => Ok(TypePattern::Sexp(
                    tag,
                    items(ps)
                        .into_iter()
                        .map(decode_pattern)
                        .collect::<Result<_, _>>()?,
                )),
                None => err("pattern tag", tag),
            },
            (PSHAPE, [Reified::Sym(k)]) => match ShapeKind::from_name(k.as_str()) {
                Some(k) => Ok(TypePattern::Shape(k)),
                None => err("shape", r),
            },
            _ => err("pattern", r),
        },
        _ => err("pattern", r),
    }
}
