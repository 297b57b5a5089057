use std::fmt;
use std::sync::Arc;

/// Identifier of a logic variable inside one query.
pub type VarId = u32;

/// Interned-by-value symbol. Cloning is a reference-count bump.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sym(Arc<str>);

impl Sym {
    pub fn new(s: &str) -> Self {
        Sym(Arc::from(s))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Sym {
    fn from(s: &str) -> Self {
        Sym::new(s)
    }
}

impl From<String> for Sym {
    fn from(s: String) -> Self {
        Sym(Arc::from(s))
    }
}

/// First-order logic term.
///
/// `Wild` is a wildcard: it unifies with anything without recording a
/// binding, and inside a disequality it never blocks equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(VarId),
    Wild,
    Int(i64),
    Sym(Sym),
    App(Sym, Arc<[Term]>),
}

pub const NIL: &str = "nil";
pub const CONS: &str = "cons";

impl Term {
    pub fn var(id: VarId) -> Self {
        Term::Var(id)
    }

    pub fn int(n: i64) -> Self {
        Term::Int(n)
    }

    pub fn sym(s: impl Into<Sym>) -> Self {
        Term::Sym(s.into())
    }

    pub fn app(functor: impl Into<Sym>, args: Vec<Term>) -> Self {
        Term::App(functor.into(), args.into())
    }

    pub fn atom(functor: impl Into<Sym>) -> Self {
        Term::App(functor.into(), Arc::from(Vec::new()))
    }

    pub fn nil() -> Self {
        Term::atom(NIL)
    }

    pub fn cons(head: Term, tail: Term) -> Self {
        Term::app(CONS, vec![head, tail])
    }

    /// Proper list of the given items.
    pub fn list<I>(items: I) -> Self
    where
        I: IntoIterator<Item = Term>,
        I::IntoIter: DoubleEndedIterator,
    {
        Term::list_with_tail(items, Term::nil())
    }

    pub fn list_with_tail<I>(items: I, tail: Term) -> Self
    where
        I: IntoIterator<Item = Term>,
        I::IntoIter: DoubleEndedIterator,
    {
        items
            .into_iter()
            .rev()
            .fold(tail, |acc, item| Term::cons(item, acc))
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    pub fn as_var(&self) -> Option<VarId> {
        match self {
            Term::Var(v) => Some(*v),
            _ => None,
        }
    }

    /// Functor and arguments of a compound term.
    pub fn as_app(&self) -> Option<(&str, &[Term])> {
        match self {
            Term::App(f, args) => Some((f.as_str(), args)),
            _ => None,
        }
    }

    pub fn functor(&self) -> Option<&str> {
        match self {
            Term::App(f, _) => Some(f.as_str()),
            _ => None,
        }
    }

    pub fn is_app(&self, functor: &str) -> bool {
        self.functor() == Some(functor)
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "_{v}"),
            Term::Wild => f.write_str("_"),
            Term::Int(n) => write!(f, "{n}"),
            Term::Sym(s) => write!(f, "'{s}"),
            Term::App(fun, args) => {
                write!(f, "{fun}")?;
                if !args.is_empty() {
                    f.debug_list().entries(args.iter()).finish()?;
                }
                Ok(())
            }
        }
    }
}

impl From<i64> for Term {
    fn from(n: i64) -> Self {
        Term::Int(n)
    }
}
