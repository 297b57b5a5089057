use std::fmt;
use std::sync::Arc;

use super::state::{OccursHook, State};
use super::stream::Stream;
use super::term::Term;

/// A goal maps a state to a stream of extended states. Goals never mutate
/// their input.
#[derive(Clone)]
pub struct Goal(Arc<dyn Fn(State) -> Stream + Send + Sync>);

impl fmt::Debug for Goal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Goal")
    }
}

impl Goal {
    pub fn new<F>(f: F) -> Self
    where
        F: Fn(State) -> Stream + Send + Sync + 'static,
    {
        Goal(Arc::new(f))
    }

    pub fn apply(&self, s: State) -> Stream {
        (self.0)(s)
    }

    pub fn and(self, other: Goal) -> Goal {
        conj(vec![self, other])
    }

    pub fn or(self, other: Goal) -> Goal {
        disj(vec![self, other])
    }
}

pub fn succeed() -> Goal {
    Goal::new(Stream::unit)
}

pub fn fail() -> Goal {
    Goal::new(|_| Stream::empty())
}

pub fn unify(a: Term, b: Term) -> Goal {
    Goal::new(move |s| Stream::from_option(s.unify(&a, &b)))
}

pub fn disunify(a: Term, b: Term) -> Goal {
    Goal::new(move |s| Stream::from_option(s.disunify(&a, &b)))
}

/// Succeeds iff `t` currently walks to an unbound variable or a wildcard.
pub fn is_var(t: Term) -> Goal {
    Goal::new(move |s| {
        if matches!(s.walk(&t), Term::Var(_) | Term::Wild) {
            Stream::unit(s)
        } else {
            Stream::empty()
        }
    })
}

pub fn is_not_var(t: Term) -> Goal {
    Goal::new(move |s| {
        if matches!(s.walk(&t), Term::Var(_) | Term::Wild) {
            Stream::empty()
        } else {
            Stream::unit(s)
        }
    })
}

/// Registers `hook` on the variable `t` walks to. Fails if `t` is bound.
pub fn bind_occurs_hook(t: Term, hook: OccursHook) -> Goal {
    Goal::new(move |mut s| match s.walk(&t) {
        Term::Var(v) => {
            s.register_hook(v, hook.clone());
            Stream::unit(s)
        }
        _ => Stream::empty(),
    })
}

pub fn conj(goals: Vec<Goal>) -> Goal {
    match goals.len() {
        0 => succeed(),
        1 => goals.into_iter().next().unwrap(),
        _ => {
            let goals: Arc<[Goal]> = goals.into();
            Goal::new(move |s| conj_from(goals.clone(), 0, s))
        }
    }
}

fn conj_from(goals: Arc<[Goal]>, at: usize, s: State) -> Stream {
    let head = goals[at].apply(s);
    if at + 1 == goals.len() {
        return head;
    }
    let rest = Goal::new(move |s| conj_from(goals.clone(), at + 1, s));
    Stream::bind(head, rest)
}

/// Fair disjunction; each branch is started lazily.
pub fn disj(goals: Vec<Goal>) -> Goal {
    match goals.len() {
        0 => fail(),
        1 => goals.into_iter().next().unwrap(),
        _ => Goal::new(move |s| {
            goals.iter().rev().fold(Stream::empty(), |acc, g| {
                let g = g.clone();
                let s = s.clone();
                Stream::mplus(Stream::lazy(move || g.apply(s)), acc)
            })
        }),
    }
}

/// Defers construction of a goal until it is run; needed for recursive
/// relations.
pub fn lazy<F>(f: F) -> Goal
where
    F: Fn() -> Goal + Send + Sync + 'static,
{
    let f = Arc::new(f);
    Goal::new(move |s| {
        let f = f.clone();
        Stream::lazy(move || f().apply(s))
    })
}

/// Allocates one fresh variable and passes it to the continuation.
pub fn fresh_with<K>(k: K) -> Goal
where
    K: Fn(Term) -> Goal + Send + Sync + 'static,
{
    Goal::new(move |mut s| {
        let v = s.fresh_var();
        k(v).apply(s)
    })
}

/// Sequences `n` fresh allocations in continuation-passing style and hands
/// the whole batch to `k`.
pub fn fresh_n<K>(n: usize, k: K) -> Goal
where
    K: Fn(Vec<Term>) -> Goal + Send + Sync + 'static,
{
    fn go(n: usize, acc: Vec<Term>, k: Arc<dyn Fn(Vec<Term>) -> Goal + Send + Sync>) -> Goal {
        if n == 0 {
            return k(acc);
        }
        fresh_with(move |v| {
            let mut acc = acc.clone();
            acc.push(v);
            go(n - 1, acc, k.clone())
        })
    }
    go(n, Vec::new(), Arc::new(k))
}

/// Inspects the current state before choosing a goal. Non-relational.
pub fn with_state<F>(f: F) -> Goal
where
    F: Fn(&State) -> Goal + Send + Sync + 'static,
{
    Goal::new(move |s| f(&s).apply(s))
}
