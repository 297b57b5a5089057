use std::collections::HashMap;

use super::ast::*;
use super::ResolveError;

pub const BUILTIN_READ: BinderId = 0;
pub const BUILTIN_WRITE: BinderId = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinderKind {
    Builtin,
    Var,
    Fun,
    Param,
    Pattern,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinderInfo {
    pub name: String,
    pub kind: BinderKind,
    pub pos: Pos,
}

/// A program whose identifiers all carry binder ids.
#[derive(Clone, Debug)]
pub struct Resolved {
    pub program: Program,
    /// Indexed by binder id.
    pub binders: Vec<BinderInfo>,
}

impl Resolved {
    pub fn binder(&self, id: BinderId) -> &BinderInfo {
        &self.binders[id as usize]
    }
}

/// Assigns a unique binder id to every binding occurrence and links each use
/// to its binder. Declarations are visible throughout their whole scope.
pub fn resolve(mut program: Program) -> Result<Resolved, ResolveError> {
    let mut r = Resolver {
        scopes: Vec::new(),
        binders: Vec::new(),
    };
    r.scopes.push(HashMap::new());
    for (name, id) in [("read", BUILTIN_READ), ("write", BUILTIN_WRITE)] {
        r.binders.push(BinderInfo {
            name: name.into(),
            kind: BinderKind::Builtin,
            pos: Pos::default(),
        });
        r.scopes[0].insert(name.to_string(), id);
    }
    r.scope(&mut program.decls, &mut program.body)?;
    Ok(Resolved {
        program,
        binders: r.binders,
    })
}

struct Resolver {
    scopes: Vec<HashMap<String, BinderId>>,
    binders: Vec<BinderInfo>,
}

impl Resolver {
    fn declare(&mut self, ident: &mut Ident, kind: BinderKind) -> Result<(), ResolveError> {
        let top = self.scopes.last_mut().expect("scope stack is never empty");
        if top.contains_key(&ident.name) {
            return Err(ResolveError::Duplicate {
                name: ident.name.clone(),
                pos: ident.pos,
            });
        }
        let id = self.binders.len() as BinderId;
        self.binders.push(BinderInfo {
            name: ident.name.clone(),
            kind,
            pos: ident.pos,
        });
        top.insert(ident.name.clone(), id);
        ident.id = Some(id);
        Ok(())
    }

    fn lookup(&self, ident: &mut Ident) -> Result<(), ResolveError> {
        match self.scopes.iter().rev().find_map(|s| s.get(&ident.name)) {
            Some(id) => {
                ident.id = Some(*id);
                Ok(())
            }
            None => Err(ResolveError::Unbound {
                name: ident.name.clone(),
                pos: ident.pos,
            }),
        }
    }

    fn scope(&mut self, decls: &mut [Decl], body: &mut Expr) -> Result<(), ResolveError> {
        self.scopes.push(HashMap::new());
        for d in decls.iter_mut() {
            let kind = match d.kind {
                DeclKind::Var => BinderKind::Var,
                DeclKind::Fun => BinderKind::Fun,
            };
            self.declare(&mut d.name, kind)?;
        }
        for d in decls.iter_mut() {
            if let Some(init) = &mut d.init {
                self.expr(init)?;
            }
        }
        self.expr(body)?;
        self.scopes.pop();
        Ok(())
    }

    fn expr(&mut self, e: &mut Expr) -> Result<(), ResolveError> {
        match e {
            Expr::IntLit(_) | Expr::StrLit(_) => Ok(()),
            Expr::Var(id) => self.lookup(id),
            Expr::Seq(a, b) | Expr::Assign(a, b) | Expr::While(a, b) | Expr::Index(a, b) => {
                self.expr(a)?;
                self.expr(b)
            }
            Expr::Binop(_, a, b) => {
                self.expr(a)?;
                self.expr(b)
            }
            Expr::If(c, t, f) => {
                self.expr(c)?;
                self.expr(t)?;
                match f {
                    Some(f) => self.expr(f),
                    None => Ok(()),
                }
            }
            Expr::For(i, c, s, b) => {
                for x in [i, c, s, b] {
                    self.expr(x)?;
                }
                Ok(())
            }
            Expr::Call(f, args) => {
                self.expr(f)?;
                args.iter_mut().try_for_each(|a| self.expr(a))
            }
            Expr::Array(xs) | Expr::Sexp(_, xs) => xs.iter_mut().try_for_each(|a| self.expr(a)),
            Expr::Length(x) => self.expr(x),
            Expr::Fun(params, body) => {
                self.scopes.push(HashMap::new());
                for p in params.iter_mut() {
                    self.declare(p, BinderKind::Param)?;
                }
                self.expr(body)?;
                self.scopes.pop();
                Ok(())
            }
            Expr::Case(scrutinee, branches) => {
                self.expr(scrutinee)?;
                for (pat, body) in branches.iter_mut() {
                    self.scopes.push(HashMap::new());
                    self.pattern(pat)?;
                    self.expr(body)?;
                    self.scopes.pop();
                }
                Ok(())
            }
            Expr::Scope(decls, body) => self.scope(decls, body),
        }
    }

    fn pattern(&mut self, p: &mut Pattern) -> Result<(), ResolveError> {
        match p {
            Pattern::Wild | Pattern::Shape(_) | Pattern::IntLit(_) => Ok(()),
            Pattern::Bind(id) => self.declare(id, BinderKind::Pattern),
            Pattern::At(id, inner) => {
                self.declare(id, BinderKind::Pattern)?;
                self.pattern(inner)
            }
            Pattern::Sexp(_, ps) | Pattern::Array(ps) => {
                ps.iter_mut().try_for_each(|p| self.pattern(p))
            }
        }
    }
}
