//! Syntax-directed extraction of types and constraints from a resolved
//! program.
//!
//! Equalities between types are solved eagerly by first-order unification
//! while generating. Whatever first-order unification cannot settle (shape
//! clashes, cyclic types, arrow against arrow) is emitted as an `Eq`
//! obligation for the solver.

use std::collections::{HashMap, HashSet};

use crate::engine::Sym;
use crate::frontend::{
    BinderId, Decl, DeclKind, Expr, Ident, PatShape, Pattern, Resolved, BUILTIN_READ, BUILTIN_WRITE,
};
use crate::types::{
    free_vars_of, Arrow, AtomicConstraint, Ctor, ShapeKind, TagTable, TypePattern, TypeTerm,
};

#[cfg(test)]
mod tests;

/// Output of constraint generation.
#[derive(Clone, Debug)]
pub struct GenResult {
    /// Type of the program body.
    pub ty: TypeTerm,
    pub constraints: Vec<AtomicConstraint>,
    pub table: TagTable,
    /// Top-level declarations with their types.
    pub roots: Vec<(String, TypeTerm)>,
}

/// Types of the binders currently in scope.
#[derive(Clone, Debug, Default)]
pub struct TypeEnv {
    types: HashMap<BinderId, TypeTerm>,
    scope: Vec<BinderId>,
}

impl TypeEnv {
    pub fn get(&self, b: BinderId) -> Option<&TypeTerm> {
        self.types.get(&b)
    }

    pub fn bind(&mut self, b: BinderId, t: TypeTerm) {
        if self.types.insert(b, t).is_none() {
            self.scope.push(b);
        }
    }

    fn mark(&self) -> usize {
        self.scope.len()
    }

    fn reset(&mut self, mark: usize) {
        for b in self.scope.drain(mark..) {
            self.types.remove(&b);
        }
    }
}

pub fn infer_program(r: &Resolved) -> GenResult {
    let mut g = Generator::new();
    let p = &r.program;
    g.declare(&p.decls);
    g.inits(&p.decls);
    let ty = g.infer_expr(&p.body);
    let roots = p
        .decls
        .iter()
        .map(|d| (d.name.name.clone(), g.zonk(&g.env.types[&d.name.binder()])))
        .collect();
    g.finish(ty, roots)
}

/// Constraint generator state.
pub struct Generator {
    env: TypeEnv,
    subst: HashMap<Sym, TypeTerm>,
    constraints: Vec<AtomicConstraint>,
    table: TagTable,
    mono: HashSet<Sym>,
    next: usize,
}

impl Default for Generator {
    fn default() -> Self {
        Generator::new()
    }
}

impl Generator {
    pub fn new() -> Self {
        let mut env = TypeEnv::default();
        env.bind(BUILTIN_READ, TypeTerm::simple_arrow(vec![], TypeTerm::Int));
        env.bind(
            BUILTIN_WRITE,
            TypeTerm::simple_arrow(vec![TypeTerm::Int], TypeTerm::Int),
        );
        Generator {
            env,
            subst: HashMap::new(),
            constraints: Vec::new(),
            table: TagTable::new(),
            mono: HashSet::new(),
            next: 0,
        }
    }

    pub fn env_mut(&mut self) -> &mut TypeEnv {
        &mut self.env
    }

    pub fn fresh(&mut self) -> TypeTerm {
        let t = TypeTerm::Var(Sym::new(&format!("t{}", self.next)));
        self.next += 1;
        t
    }

    /// Zonked constraints, tag table and the given result type and roots.
    pub fn finish(self, ty: TypeTerm, roots: Vec<(String, TypeTerm)>) -> GenResult {
        let ty = self.zonk(&ty);
        let constraints = self.constraints.iter().map(|c| self.zonk_c(c)).collect();
        let roots = roots.into_iter().map(|(n, t)| (n, self.zonk(&t))).collect();
        GenResult {
            ty,
            constraints,
            table: self.table,
            roots,
        }
    }

    fn emit(&mut self, c: AtomicConstraint) {
        self.constraints.push(c);
    }

    fn lookup(&self, id: &Ident) -> TypeTerm {
        self.env
            .get(id.binder())
            .cloned()
            .unwrap_or_else(|| panic!("no type for `{}`", id.name))
    }

    fn declare(&mut self, decls: &[Decl]) {
        for d in decls {
            let t = self.fresh();
            if d.kind == DeclKind::Fun {
                if let TypeTerm::Var(s) = &t {
                    self.mono.insert(s.clone());
                }
            }
            self.env.bind(d.name.binder(), t);
        }
    }

    fn inits(&mut self, decls: &[Decl]) {
        for d in decls {
            let b = d.name.binder();
            match (d.kind, &d.init) {
                (DeclKind::Fun, Some(Expr::Fun(params, body))) => {
                    let arrow = self.infer_fun(params, body, Some(b));
                    self.env.types.insert(b, arrow);
                }
                (_, Some(init)) => {
                    let t = self.infer_expr(init);
                    let own = self.env.types[&b].clone();
                    self.unify(&own, &t);
                }
                (_, None) => {}
            }
        }
    }

    pub fn infer_expr(&mut self, e: &Expr) -> TypeTerm {
        match e {
            Expr::IntLit(_) => TypeTerm::Int,
            Expr::StrLit(_) => TypeTerm::Str,
            Expr::Var(id) => self.lookup(id),
            Expr::Seq(a, b) => {
                self.infer_expr(a);
                self.infer_expr(b)
            }
            Expr::Assign(l, r) => {
                let tl = self.infer_expr(l);
                let tr = self.infer_expr(r);
                self.unify(&tl, &tr);
                TypeTerm::Int
            }
            Expr::If(c, t, f) => {
                self.expect_int(c);
                let tt = self.infer_expr(t);
                match f {
                    Some(f) => {
                        let tf = self.infer_expr(f);
                        self.unify(&tt, &tf);
                        tt
                    }
                    None => TypeTerm::Int,
                }
            }
            Expr::While(c, b) => {
                self.expect_int(c);
                self.infer_expr(b);
                TypeTerm::Int
            }
            Expr::For(i, c, s, b) => {
                self.infer_expr(i);
                self.expect_int(c);
                self.infer_expr(s);
                self.infer_expr(b);
                TypeTerm::Int
            }
            Expr::Binop(_, a, b) => {
                self.expect_int(a);
                self.expect_int(b);
                TypeTerm::Int
            }
            Expr::Call(f, args) => {
                let tf = self.infer_expr(f);
                let targs = args.iter().map(|a| self.infer_expr(a)).collect();
                let r = self.fresh();
                self.emit(AtomicConstraint::Call(tf, targs, r.clone()));
                r
            }
            Expr::Index(s, i) => {
                let ts = self.infer_expr(s);
                self.expect_int(i);
                let e = self.fresh();
                self.emit(AtomicConstraint::Ind(ts, e.clone()));
                e
            }
            Expr::Array(elems) => {
                let t = self.fresh();
                for e in elems {
                    let te = self.infer_expr(e);
                    self.unify(&t, &te);
                }
                TypeTerm::array(t)
            }
            Expr::Sexp(label, args) => {
                let targs: Vec<TypeTerm> = args.iter().map(|a| self.infer_expr(a)).collect();
                let tag = self.table.intern(label, targs.len());
                let a = self.fresh();
                self.emit(AtomicConstraint::Sexp(tag, a.clone(), targs));
                a
            }
            Expr::Fun(params, body) => self.infer_fun(params, body, None),
            Expr::Case(s, branches) => {
                let ts = self.infer_expr(s);
                let r = self.fresh();
                let mark = self.env.mark();
                let mut pats = Vec::new();
                for (p, _) in branches {
                    pats.push(self.infer_pattern(p, &ts, true));
                }
                self.emit(AtomicConstraint::Match(ts, pats));
                for (_, body) in branches {
                    let tb = self.infer_expr(body);
                    self.unify(&r, &tb);
                }
                self.env.reset(mark);
                r
            }
            Expr::Length(s) => {
                let ts = self.infer_expr(s);
                self.emit(AtomicConstraint::Match(
                    ts,
                    vec![TypePattern::Shape(ShapeKind::Box)],
                ));
                TypeTerm::Int
            }
            Expr::Scope(decls, body) => {
                let mark = self.env.mark();
                self.declare(decls);
                self.inits(decls);
                let t = self.infer_expr(body);
                self.env.reset(mark);
                t
            }
        }
    }

    fn expect_int(&mut self, e: &Expr) {
        let t = self.infer_expr(e);
        self.unify(&t, &TypeTerm::Int);
    }

    /// Type pattern for `p` matched against `subject`. Binders of `p` are
    /// added to the environment.
    pub fn infer_pattern(&mut self, p: &Pattern, subject: &TypeTerm, top: bool) -> TypePattern {
        match p {
            Pattern::Wild => TypePattern::Wild,
            Pattern::Bind(x) => {
                let t = self.fresh();
                self.env.bind(x.binder(), t.clone());
                TypePattern::At(t, Box::new(TypePattern::Wild))
            }
            Pattern::At(x, inner) => {
                let t = self.fresh();
                self.env.bind(x.binder(), t.clone());
                let inner = self.infer_pattern(inner, subject, top);
                TypePattern::At(t, Box::new(inner))
            }
            Pattern::Sexp(label, ps) => {
                let tag = self.table.intern(label, ps.len());
                let ps = ps
                    .iter()
                    .map(|p| self.infer_pattern(p, subject, false))
                    .collect();
                TypePattern::Sexp(tag, ps)
            }
            Pattern::Array(ps) => TypePattern::Array(
                ps.iter()
                    .map(|p| self.infer_pattern(p, subject, false))
                    .collect(),
            ),
            Pattern::Shape(s) => TypePattern::Shape(match s {
                PatShape::Box => ShapeKind::Box,
                PatShape::Unbox => ShapeKind::Unbox,
                PatShape::Str => ShapeKind::Str,
                PatShape::Array => ShapeKind::Array,
                PatShape::Sexp => ShapeKind::Sexp,
                PatShape::Fun => ShapeKind::Fun,
            }),
            Pattern::IntLit(_) if top => {
                self.unify(subject, &TypeTerm::Int);
                TypePattern::Wild
            }
            Pattern::IntLit(_) => TypePattern::Shape(ShapeKind::Unbox),
        }
    }

    fn infer_fun(&mut self, params: &[Ident], body: &Expr, this: Option<BinderId>) -> TypeTerm {
        let mark = self.env.mark();
        let ps: Vec<TypeTerm> = params
            .iter()
            .map(|p| {
                let t = self.fresh();
                self.env.bind(p.binder(), t.clone());
                t
            })
            .collect();
        let outer = std::mem::take(&mut self.constraints);
        let result = self.infer_expr(body);
        if let Some(b) = this {
            let own = self.env.types[&b].clone();
            self.unify(&own, &TypeTerm::simple_arrow(ps.clone(), result.clone()));
        }
        let body_cs = std::mem::replace(&mut self.constraints, outer);
        self.env.reset(mark);
        let (arrow, residual) = self.generalize(this, ps, result, body_cs);
        self.constraints.extend(residual);
        arrow
    }

    /// Quantifies the variables of a function type that are not free in the
    /// environment. Constraints mentioning a quantified variable move into
    /// the arrow; the others are returned.
    pub fn generalize(
        &mut self,
        this: Option<BinderId>,
        params: Vec<TypeTerm>,
        result: TypeTerm,
        body: Vec<AtomicConstraint>,
    ) -> (TypeTerm, Vec<AtomicConstraint>) {
        let params: Vec<TypeTerm> = params.iter().map(|t| self.zonk(t)).collect();
        let result = self.zonk(&result);
        let body: Vec<AtomicConstraint> = body.iter().map(|c| self.zonk_c(c)).collect();

        let mut fixed: HashSet<Sym> = self.mono.clone();
        for b in &self.env.scope {
            if Some(*b) == this {
                continue;
            }
            fixed.extend(self.zonk(&self.env.types[b]).free_vars());
        }

        let mut seen = HashSet::new();
        let mut bound = Vec::new();
        let shape = TypeTerm::simple_arrow(params.clone(), result.clone());
        for v in shape.free_vars().into_iter().chain(free_vars_of(&body)) {
            if !fixed.contains(&v) && seen.insert(v.clone()) {
                bound.push(v);
            }
        }
        let (moved, residual): (Vec<_>, Vec<_>) = body
            .into_iter()
            .partition(|c| c.free_vars().iter().any(|v| seen.contains(v)));
        (TypeTerm::arrow(bound, moved, params, result), residual)
    }

    pub fn unify(&mut self, a: &TypeTerm, b: &TypeTerm) {
        let a = self.walk(a);
        let b = self.walk(b);
        match (&a, &b) {
            (TypeTerm::Var(x), TypeTerm::Var(y)) if x == y => {}
            (TypeTerm::Var(x), t) | (t, TypeTerm::Var(x)) => {
                let t = self.zonk(t);
                if t.free_vars().contains(x) {
                    self.emit(AtomicConstraint::Eq(TypeTerm::Var(x.clone()), t));
                } else {
                    self.subst.insert(x.clone(), t);
                }
            }
            (TypeTerm::Int, TypeTerm::Int) | (TypeTerm::Str, TypeTerm::Str) => {}
            (TypeTerm::Array(x), TypeTerm::Array(y)) => self.unify(x, y),
            _ => {
                let (a, b) = (self.zonk(&a), self.zonk(&b));
                self.emit(AtomicConstraint::Eq(a, b));
            }
        }
    }

    fn walk(&self, t: &TypeTerm) -> TypeTerm {
        let mut t = t.clone();
        while let TypeTerm::Var(x) = &t {
            match self.subst.get(x) {
                Some(u) => t = u.clone(),
                None => break,
            }
        }
        t
    }

    /// Applies the current substitution everywhere.
    pub fn zonk(&self, t: &TypeTerm) -> TypeTerm {
        match self.walk(t) {
            TypeTerm::Var(x) => TypeTerm::Var(x),
            TypeTerm::Int => TypeTerm::Int,
            TypeTerm::Str => TypeTerm::Str,
            TypeTerm::Array(e) => TypeTerm::array(self.zonk(&e)),
            TypeTerm::Sexp(cs) => TypeTerm::Sexp(
                cs.iter()
                    .map(|c| match c {
                        Ctor::Known { tag, args } => Ctor::Known {
                            tag: *tag,
                            args: args.iter().map(|a| self.zonk(a)).collect(),
                        },
                        Ctor::Open(s) => Ctor::Open(s.clone()),
                    })
                    .collect(),
            ),
            TypeTerm::Arrow(a) => TypeTerm::Arrow(Box::new(Arrow {
                bound: a.bound.clone(),
                constraints: a.constraints.iter().map(|c| self.zonk_c(c)).collect(),
                params: a.params.iter().map(|p| self.zonk(p)).collect(),
                result: self.zonk(&a.result),
            })),
            TypeTerm::Mu(x, body) => TypeTerm::Mu(x, Box::new(self.zonk(&body))),
        }
    }

    fn zonk_c(&self, c: &AtomicConstraint) -> AtomicConstraint {
        match c {
            AtomicConstraint::Ind(a, b) => AtomicConstraint::Ind(self.zonk(a), self.zonk(b)),
            AtomicConstraint::Call(f, args, r) => AtomicConstraint::Call(
                self.zonk(f),
                args.iter().map(|a| self.zonk(a)).collect(),
                self.zonk(r),
            ),
            AtomicConstraint::Sexp(tag, t, args) => AtomicConstraint::Sexp(
                *tag,
                self.zonk(t),
                args.iter().map(|a| self.zonk(a)).collect(),
            ),
            AtomicConstraint::Match(t, ps) => {
                AtomicConstraint::Match(self.zonk(t), ps.iter().map(|p| self.zonk_p(p)).collect())
            }
            AtomicConstraint::Eq(a, b) => AtomicConstraint::Eq(self.zonk(a), self.zonk(b)),
        }
    }

    fn zonk_p(&self, p: &TypePattern) -> TypePattern {
        match p {
            TypePattern::At(t, p) => TypePattern::At(self.zonk(t), Box::new(self.zonk_p(p))),
            TypePattern::Array(ps) => {
                TypePattern::Array(ps.iter().map(|p| self.zonk_p(p)).collect())
            }
            TypePattern::Sexp(tag, ps) => {
                TypePattern::Sexp(*tag, ps.iter().map(|p| self.zonk_p(p)).collect())
            }
            TypePattern::Wild | TypePattern::Shape(_) => p.clone(),
        }
    }
}
