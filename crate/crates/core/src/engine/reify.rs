use std::collections::HashMap;
use std::fmt;

use super::state::{State, VarBag};
use super::term::{Sym, Term, VarId};

/// A term with the substitution fully applied and its free variables
/// numbered in first-occurrence order. Each free variable keeps the id of the
/// engine variable it came from, so an answer can be turned back into a live
/// term.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Reified {
    Var { index: usize, id: VarId },
    Wild,
    Int(i64),
    Sym(Sym),
    App(Sym, Vec<Reified>),
}

impl Reified {
    /// Rebuilds an engine term, mapping free variables through `bag`.
    pub fn to_term(&self, bag: &VarBag) -> Term {
        match self {
            Reified::Var { id, .. } => bag.get(*id),
            Reified::Wild => Term::Wild,
            Reified::Int(n) => Term::Int(*n),
            Reified::Sym(s) => Term::Sym(s.clone()),
            Reified::App(f, args) => Term::App(
                f.clone(),
                args.iter()
                    .map(|a| a.to_term(bag))
                    .collect::<Vec<_>>()
                    .into(),
            ),
        }
    }

    pub fn functor(&self) -> Option<&str> {
        match self {
            Reified::App(f, _) => Some(f.as_str()),
            _ => None,
        }
    }

    pub fn args(&self) -> &[Reified] {
        match self {
            Reified::App(_, args) => args,
            _ => &[],
        }
    }

    /// Items of a proper or partial list; the second component is the tail
    /// when it is not `nil`.
    pub fn list_items(&self) -> (Vec<&Reified>, Option<&Reified>) {
        let mut items = Vec::new();
        let mut cur = self;
        loop {
            match cur {
                Reified::App(f, args) if f.as_str() == super::term::CONS && args.len() == 2 => {
                    items.push(&args[0]);
                    cur = &args[1];
                }
                Reified::App(f, args) if f.as_str() == super::term::NIL && args.is_empty() => {
                    return (items, None)
                }
                other => return (items, Some(other)),
            }
        }
    }
}

impl fmt::Debug for Reified {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Reified::Var { index, .. } => write!(f, "_.{index}"),
            Reified::Wild => f.write_str("_"),
            Reified::Int(n) => write!(f, "{n}"),
            Reified::Sym(s) => write!(f, "'{s}"),
            Reified::App(fun, args) => {
                write!(f, "{fun}")?;
                if !args.is_empty() {
                    f.debug_list().entries(args.iter()).finish()?;
                }
                Ok(())
            }
        }
    }
}

pub(crate) fn reify_term(state: &State, t: &Term) -> Reified {
    let mut names = HashMap::new();
    go(state, t, &mut names)
}

fn go(state: &State, t: &Term, names: &mut HashMap<VarId, usize>) -> Reified {
    match state.walk(t) {
        Term::Var(id) => {
            let next = names.len();
            let index = *names.entry(id).or_insert(next);
            Reified::Var { index, id }
        }
        Term::Wild => Reified::Wild,
        Term::Int(n) => Reified::Int(n),
        Term::Sym(s) => Reified::Sym(s),
        Term::App(f, args) => Reified::App(f, args.iter().map(|a| go(state, a, names)).collect()),
    }
}
