use std::collections::HashSet;

use crate::engine::Sym;

use super::tags::TagId;

/// Shape type.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TypeTerm {
    Var(Sym),
    Int,
    Str,
    Array(Box<TypeTerm>),
    /// Union of constructor signatures, in list order.
    Sexp(Vec<Ctor>),
    Arrow(Box<Arrow>),
    Mu(Sym, Box<TypeTerm>),
}

/// `forall bound. constraints => (params) -> result`
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Arrow {
    pub bound: Vec<Sym>,
    pub constraints: Vec<AtomicConstraint>,
    pub params: Vec<TypeTerm>,
    pub result: TypeTerm,
}

/// One entry of an S-expression union. `Open` is an entry whose tag is not
/// determined yet; it stands for "possibly some other constructor".
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Ctor {
    Known { tag: TagId, args: Vec<TypeTerm> },
    Open(Sym),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum AtomicConstraint {
    Ind(TypeTerm, TypeTerm),
    Call(TypeTerm, Vec<TypeTerm>, TypeTerm),
    Sexp(TagId, TypeTerm, Vec<TypeTerm>),
    Match(TypeTerm, Vec<TypePattern>),
    /// Equality obligation discharged by `eq_t` at solve time.
    Eq(TypeTerm, TypeTerm),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ShapeKind {
    Box,
    Unbox,
    Str,
    Array,
    Sexp,
    Fun,
}

impl ShapeKind {
    pub const ALL: [ShapeKind; 6] = [
        ShapeKind::Box,
        ShapeKind::Unbox,
        ShapeKind::Str,
        ShapeKind::Array,
        ShapeKind::Sexp,
        ShapeKind::Fun,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ShapeKind::Box => "box",
            ShapeKind::Unbox => "unbox",
            ShapeKind::Str => "str",
            ShapeKind::Array => "array",
            ShapeKind::Sexp => "sexp",
            ShapeKind::Fun => "fun",
        }
    }

    /// Accepts both `str` and `string`.
    pub fn from_name(s: &str) -> Option<ShapeKind> {
        match s {
            "box" => Some(ShapeKind::Box),
            "unbox" => Some(ShapeKind::Unbox),
            "str" | "string" => Some(ShapeKind::Str),
            "array" => Some(ShapeKind::Array),
            "sexp" => Some(ShapeKind::Sexp),
            "fun" => Some(ShapeKind::Fun),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TypePattern {
    Wild,
    At(TypeTerm, Box<TypePattern>),
    Array(Vec<TypePattern>),
    Sexp(TagId, Vec<TypePattern>),
    Shape(ShapeKind),
}

/// Simultaneous substitution of types for type variables.
pub type TypeSubst = Vec<(Sym, TypeTerm)>;

impl TypeTerm {
    pub fn var(name: &str) -> Self {
        TypeTerm::Var(Sym::new(name))
    }

    pub fn array(elem: TypeTerm) -> Self {
        TypeTerm::Array(Box::new(elem))
    }

    pub fn mu(binder: &str, body: TypeTerm) -> Self {
        TypeTerm::Mu(Sym::new(binder), Box::new(body))
    }

    pub fn arrow(
        bound: Vec<Sym>,
        constraints: Vec<AtomicConstraint>,
        params: Vec<TypeTerm>,
        result: TypeTerm,
    ) -> Self {
        TypeTerm::Arrow(Box::new(Arrow {
            bound,
            constraints,
            params,
            result,
        }))
    }

    /// `() -> result` style arrow with nothing bound.
    pub fn simple_arrow(params: Vec<TypeTerm>, result: TypeTerm) -> Self {
        TypeTerm::arrow(Vec::new(), Vec::new(), params, result)
    }

    pub fn sexp(ctors: Vec<(TagId, Vec<TypeTerm>)>) -> Self {
        TypeTerm::Sexp(
            ctors
                .into_iter()
                .map(|(tag, args)| Ctor::Known { tag, args })
                .collect(),
        )
    }

    /// Free type variables in first-occurrence order.
    pub fn free_vars(&self) -> Vec<Sym> {
        let mut out = FreeVars::default();
        out.ty(self, &mut Vec::new());
        out.order
    }

    /// Capture-avoiding simultaneous substitution; binders shadow.
    pub fn subst(&self, s: &[(Sym, TypeTerm)]) -> TypeTerm {
        if s.is_empty() {
            return self.clone();
        }
        match self {
            TypeTerm::Var(v) => match s.iter().find(|(k, _)| k == v) {
                Some((_, t)) => t.clone(),
                None => self.clone(),
            },
            TypeTerm::Int | TypeTerm::Str => self.clone(),
            TypeTerm::Array(t) => TypeTerm::array(t.subst(s)),
            TypeTerm::Sexp(cs) => TypeTerm::Sexp(
                cs.iter()
                    .map(|c| match c {
                        Ctor::Known { tag, args } => Ctor::Known {
                            tag: *tag,
                            args: args.iter().map(|a| a.subst(s)).collect(),
                        },
                        Ctor::Open(n) => Ctor::Open(n.clone()),
                    })
                    .collect(),
            ),
            TypeTerm::Arrow(a) => {
                let inner: TypeSubst = s
                    .iter()
                    .filter(|(k, _)| !a.bound.contains(k))
                    .cloned()
                    .collect();
                TypeTerm::arrow(
                    a.bound.clone(),
                    a.constraints.iter().map(|c| c.subst(&inner)).collect(),
                    a.params.iter().map(|p| p.subst(&inner)).collect(),
                    a.result.subst(&inner),
                )
            }
            TypeTerm::Mu(x, body) => {
                let inner: TypeSubst = s.iter().filter(|(k, _)| k != x).cloned().collect();
                TypeTerm::Mu(x.clone(), Box::new(body.subst(&inner)))
            }
        }
    }

    /// One unfolding step of a top-level μ; other types are returned as is.
    pub fn unfold(&self) -> TypeTerm {
        match self {
            TypeTerm::Mu(x, body) => body.subst(&[(x.clone(), self.clone())]),
            other => other.clone(),
        }
    }

    /// Structural depth; atoms and variables have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            TypeTerm::Var(_) | TypeTerm::Int | TypeTerm::Str => 0,
            TypeTerm::Array(t) => 1 + t.depth(),
            TypeTerm::Sexp(cs) => {
                1 + cs
                    .iter()
                    .flat_map(|c| match c {
                        Ctor::Known { args, .. } => args.iter().map(|a| a.depth()).max(),
                        Ctor::Open(_) => None,
                    })
                    .max()
                    .unwrap_or(0)
            }
            TypeTerm::Arrow(a) => {
                1 + a
                    .params
                    .iter()
                    .chain(std::iter::once(&a.result))
                    .map(|t| t.depth())
                    .max()
                    .unwrap_or(0)
            }
            TypeTerm::Mu(_, b) => 1 + b.depth(),
        }
    }
}

impl AtomicConstraint {
    pub fn subst(&self, s: &[(Sym, TypeTerm)]) -> AtomicConstraint {
        match self {
            AtomicConstraint::Ind(a, b) => AtomicConstraint::Ind(a.subst(s), b.subst(s)),
            AtomicConstraint::Call(f, args, r) => AtomicConstraint::Call(
                f.subst(s),
                args.iter().map(|a| a.subst(s)).collect(),
                r.subst(s),
            ),
            AtomicConstraint::Sexp(tag, t, args) => {
                AtomicConstraint::Sexp(*tag, t.subst(s), args.iter().map(|a| a.subst(s)).collect())
            }
            AtomicConstraint::Match(t, ps) => {
                AtomicConstraint::Match(t.subst(s), ps.iter().map(|p| p.subst(s)).collect())
            }
            AtomicConstraint::Eq(a, b) => AtomicConstraint::Eq(a.subst(s), b.subst(s)),
        }
    }

    pub fn free_vars(&self) -> Vec<Sym> {
        let mut out = FreeVars::default();
        out.constraint(self, &mut Vec::new());
        out.order
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            AtomicConstraint::Ind(..) => "Ind",
            AtomicConstraint::Call(..) => "Call",
            AtomicConstraint::Sexp(..) => "Sexp",
            AtomicConstraint::Match(..) => "Match",
            AtomicConstraint::Eq(..) => "Eq",
        }
    }
}

impl TypePattern {
    pub fn subst(&self, s: &[(Sym, TypeTerm)]) -> TypePattern {
        match self {
            TypePattern::Wild | TypePattern::Shape(_) => self.clone(),
            TypePattern::At(t, p) => TypePattern::At(t.subst(s), Box::new(p.subst(s))),
            TypePattern::Array(ps) => TypePattern::Array(ps.iter().map(|p| p.subst(s)).collect()),
            TypePattern::Sexp(tag, ps) => {
                TypePattern::Sexp(*tag, ps.iter().map(|p| p.subst(s)).collect())
            }
        }
    }
}

/// Free variables of a constraint list, first-occurrence order.
pub fn free_vars_of(cs: &[AtomicConstraint]) -> Vec<Sym> {
    let mut out = FreeVars::default();
    for c in cs {
        out.constraint(c, &mut Vec::new());
    }
    out.order
}

#[derive(Default)]
pub(crate) struct FreeVars {
    pub(crate) order: Vec<Sym>,
    seen: HashSet<Sym>,
}

impl FreeVars {
    fn add(&mut self, v: &Sym, bound: &[Sym]) {
        if !bound.contains(v) && self.seen.insert(v.clone()) {
            self.order.push(v.clone());
        }
    }

    pub(crate) fn ty(&mut self, t: &TypeTerm, bound: &mut Vec<Sym>) {
        match t {
            TypeTerm::Var(v) => self.add(v, bound),
            TypeTerm::Int | TypeTerm::Str => {}
            TypeTerm::Array(t) => self.ty(t, bound),
            TypeTerm::Sexp(cs) => {
                for c in cs {
                    match c {
                        Ctor::Known { args, .. } => args.iter().for_each(|a| self.ty(a, bound)),
                        Ctor::Open(n) => self.add(n, bound),
                    }
                }
            }
            TypeTerm::Arrow(a) => {
                let mark = bound.len();
                bound.extend(a.bound.iter().cloned());
                for p in &a.params {
                    self.ty(p, bound);
                }
                self.ty(&a.result, bound);
                for c in &a.constraints {
                    self.constraint(c, bound);
                }
                bound.truncate(mark);
            }
            TypeTerm::Mu(x, body) => {
                bound.push(x.clone());
                self.ty(body, bound);
                bound.pop();
            }
        }
    }

    pub(crate) fn constraint(&mut self, c: &AtomicConstraint, bound: &mut Vec<Sym>) {
        match c {
            AtomicConstraint::Ind(a, b) | AtomicConstraint::Eq(a, b) => {
                self.ty(a, bound);
                self.ty(b, bound);
            }
            AtomicConstraint::Call(f, args, r) => {
                self.ty(f, bound);
                args.iter().for_each(|a| self.ty(a, bound));
                self.ty(r, bound);
            }
            AtomicConstraint::Sexp(_, t, args) => {
                self.ty(t, bound);
                args.iter().for_each(|a| self.ty(a, bound));
            }
            AtomicConstraint::Match(t, ps) => {
                self.ty(t, bound);
                ps.iter().for_each(|p| self.pattern(p, bound));
            }
        }
    }

    fn pattern(&mut self, p: &TypePattern, bound: &mut Vec<Sym>) {
        match p {
            TypePattern::Wild | TypePattern::Shape(_) => {}
            TypePattern::At(t, p) => {
                self.ty(t, bound);
                self.pattern(p, bound);
            }
            TypePattern::Array(ps) | TypePattern::Sexp(_, ps) => {
                ps.iter().for_each(|p| self.pattern(p, bound))
            }
        }
    }
}
