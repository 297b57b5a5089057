//! Embedded relational engine: first-order terms, triangular substitutions,
//! disequality, wildcards, shape tests (`is_var` / `is_not_var`) and occurs
//! hooks, searched with fair interleaving streams.

mod goal;
mod reify;
mod run;
mod state;
mod stream;
mod term;

pub use goal::{
    bind_occurs_hook, conj, disj, disunify, fail, fresh_n, fresh_with, is_not_var, is_var, lazy,
    succeed, unify, with_state, Goal,
};
pub use reify::Reified;
pub use run::{run, run_goal, Answer, Answers, Exhaustion, RunLimits, RunResult};
pub use state::{Counters, Diseq, OccursHook, State, VarBag};
pub use stream::{Step, Stream};
pub use term::{Sym, Term, VarId, CONS, NIL};

/// Shallow walk of `t` in `s`: follows variable bindings until a non-variable
/// term or an unbound variable.
pub fn shallow_walk(t: &Term, s: &State) -> Term {
    s.walk(t)
}
