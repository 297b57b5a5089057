use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use im::{OrdMap, Vector};

use super::reify::{reify_term, Reified};
use super::term::{Term, VarId};

/// Lookup from a variable id back to the engine variable, handed to occurs
/// hooks so that reified answers can be turned back into live terms.
#[derive(Clone, Copy, Debug, Default)]
pub struct VarBag;

impl VarBag {
    pub fn get(&self, id: VarId) -> Term {
        Term::Var(id)
    }
}

type HookFn = dyn Fn(&VarBag, VarId, &Reified) -> Term + Send + Sync;

/// Callback invoked when the occurs check fails on the variable it is
/// registered for. It receives the offending (reified) term and returns a
/// finite replacement to bind instead.
#[derive(Clone)]
pub struct OccursHook(Arc<HookFn>);

impl OccursHook {
    pub fn new<F>(f: F) -> Self
    where
        F: Fn(&VarBag, VarId, &Reified) -> Term + Send + Sync + 'static,
    {
        OccursHook(Arc::new(f))
    }

    pub fn suggest(&self, offending_var: VarId, term: &Reified) -> Term {
        (self.0)(&VarBag, offending_var, term)
    }
}

impl fmt::Debug for OccursHook {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("OccursHook")
    }
}

/// Counters shared by every state descending from one query.
#[derive(Debug, Default)]
pub struct Counters {
    unifications: AtomicU64,
}

impl Counters {
    pub fn unifications(&self) -> u64 {
        self.unifications.load(Ordering::Relaxed)
    }
}

/// Pending disequality, stored as the substitution extension that would make
/// the two sides equal. It is violated once that extension becomes empty.
pub type Diseq = Arc<[(VarId, Term)]>;

/// Immutable search state: triangular substitution, disequality store, hook
/// registry and the fresh-variable counter.
#[derive(Clone)]
pub struct State {
    subst: OrdMap<VarId, Term>,
    diseqs: Vector<Diseq>,
    hooks: OrdMap<VarId, OccursHook>,
    next_id: VarId,
    counters: Arc<Counters>,
}

impl Default for State {
    fn default() -> Self {
        State::new()
    }
}

impl fmt::Debug for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("State")
            .field("subst", &self.subst)
            .field("diseqs", &self.diseqs)
            .field("hooks", &self.hooks.keys().collect::<Vec<_>>())
            .field("next_id", &self.next_id)
            .finish()
    }
}

impl State {
    pub fn new() -> Self {
        State {
            subst: OrdMap::new(),
            diseqs: Vector::new(),
            hooks: OrdMap::new(),
            next_id: 0,
            counters: Arc::new(Counters::default()),
        }
    }

    pub fn counters(&self) -> &Arc<Counters> {
        &self.counters
    }

    pub fn next_id(&self) -> VarId {
        self.next_id
    }

    pub fn fresh_var(&mut self) -> Term {
        let id = self.next_id;
        self.next_id += 1;
        Term::Var(id)
    }

    pub fn fresh_vars(&mut self, n: usize) -> Vec<Term> {
        (0..n).map(|_| self.fresh_var()).collect()
    }

    pub fn binding(&self, v: VarId) -> Option<&Term> {
        self.subst.get(&v)
    }

    pub fn subst_len(&self) -> usize {
        self.subst.len()
    }

    pub fn diseqs(&self) -> impl Iterator<Item = &Diseq> {
        self.diseqs.iter()
    }

    pub fn hook_count(&self) -> usize {
        self.hooks.len()
    }

    pub fn has_hook(&self, v: VarId) -> bool {
        self.hooks.contains_key(&v)
    }

    pub(crate) fn register_hook(&mut self, v: VarId, hook: OccursHook) {
        self.hooks.insert(v, hook);
    }

    /// Follows variable-to-term bindings only; never descends into arguments.
    pub fn walk(&self, t: &Term) -> Term {
        let mut cur = t;
        while let Term::Var(v) = cur {
            match self.subst.get(v) {
                Some(next) => cur = next,
                None => break,
            }
        }
        cur.clone()
    }

    /// Full application of the substitution.
    pub fn deep_walk(&self, t: &Term) -> Term {
        match self.walk(t) {
            Term::App(f, args) => {
                let args: Vec<Term> = args.iter().map(|a| self.deep_walk(a)).collect();
                Term::App(f, args.into())
            }
            other => other,
        }
    }

    pub fn reify(&self, t: &Term) -> Reified {
        reify_term(self, t)
    }

    fn occurs(&self, v: VarId, t: &Term) -> bool {
        match self.walk(t) {
            Term::Var(w) => w == v,
            Term::App(_, args) => args.iter().any(|a| self.occurs(v, a)),
            _ => false,
        }
    }

    /// Unifies `a` and `b`, returning the extended state or `None` on
    /// failure. Pending disequalities are rechecked and the hook registry is
    /// cleared on success.
    pub fn unify(&self, a: &Term, b: &Term) -> Option<State> {
        self.counters.unifications.fetch_add(1, Ordering::Relaxed);
        let mut next = self.clone();
        let mut ext = Vec::new();
        if !next.unify_into(a, b, &mut ext, true) {
            return None;
        }
        next.hooks = OrdMap::new();
        if !ext.is_empty() {
            next.recheck_diseqs()?;
        }
        Some(next)
    }

    /// Records `a =/= b`. Returns `None` when the two sides are already equal
    /// (modulo wildcards).
    pub fn disunify(&self, a: &Term, b: &Term) -> Option<State> {
        let mut scratch = self.clone();
        let mut ext = Vec::new();
        if !scratch.unify_into(a, b, &mut ext, false) {
            return Some(self.clone());
        }
        if ext.is_empty() {
            return None;
        }
        let mut next = self.clone();
        next.diseqs.push_back(ext.into());
        Some(next)
    }

    fn recheck_diseqs(&mut self) -> Option<()> {
        let mut kept = Vector::new();
        for d in self.diseqs.iter() {
            let mut scratch = self.clone();
            let mut ext = Vec::new();
            let unifiable = d
                .iter()
                .all(|(v, t)| scratch.unify_into(&Term::Var(*v), t, &mut ext, false));
            if !unifiable {
                continue;
            }
            if ext.is_empty() {
                return None;
            }
            kept.push_back(ext.into());
        }
        self.diseqs = kept;
        Some(())
    }

    fn unify_into(
        &mut self,
        a: &Term,
        b: &Term,
        ext: &mut Vec<(VarId, Term)>,
        hooks_enabled: bool,
    ) -> bool {
        let a = self.walk(a);
        let b = self.walk(b);
        match (&a, &b) {
            (Term::Wild, _) | (_, Term::Wild) => true,
            (Term::Var(x), Term::Var(y)) if x == y => true,
            (Term::Var(x), _) => self.bind(*x, b, ext, hooks_enabled),
            (_, Term::Var(y)) => self.bind(*y, a, ext, hooks_enabled),
            (Term::Int(m), Term::Int(n)) => m == n,
            (Term::Sym(m), Term::Sym(n)) => m == n,
            (Term::App(f, xs), Term::App(g, ys)) => {
                f == g
                    && xs.len() == ys.len()
                    && xs
                        .iter()
                        .zip(ys.iter())
                        .all(|(x, y)| self.unify_into(x, y, ext, hooks_enabled))
            }
            _ => false,
        }
    }

    fn bind(
        &mut self,
        v: VarId,
        t: Term,
        ext: &mut Vec<(VarId, Term)>,
        hooks_enabled: bool,
    ) -> bool {
        let t = if self.occurs(v, &t) {
            let hook = if hooks_enabled {
                self.hooks.get(&v).cloned()
            } else {
                None
            };
            let Some(hook) = hook else { return false };
            let suggestion = hook.suggest(v, &self.reify(&t));
            // hooks are off for the re-check
            if self.occurs(v, &suggestion) {
                return false;
            }
            suggestion
        } else {
            t
        };
        self.subst.insert(v, t.clone());
        ext.push((v, t));
        true
    }
}
