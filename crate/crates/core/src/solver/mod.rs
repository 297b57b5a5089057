//! Relational entailment of constraint queues.
//!
//! The queue is solved one atomic constraint at a time. Each step picks the
//! pending constraint of least weight, runs the solver for its kind and
//! appends whatever that solver spawns (for example the instantiated bound
//! constraint of a called function) to the end of the queue.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use crate::engine::{
    conj, disj, disunify, fail, fresh_n, fresh_with, is_not_var, is_var, lazy, run, succeed, unify,
    with_state, Exhaustion, Goal, RunLimits, State, Sym, Term,
};
use crate::types::functors::*;
use crate::types::{
    ctor, decode_type, eq_t, eq_ts, subst_term, t_arr, t_arrow, t_int, t_sexp, t_str, tag_term,
    with_unmu, AtomicConstraint, Encoder, TagId, TagTable, TypeTerm,
};


/// Search limits and switches.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveOptions {
    pub max_answers: usize,
    /// Stream steps before giving up.
    pub fuel: u64,
    /// Overrides the bound on S-expression constructor lists.
    pub max_constructors: Option<usize>,
    /// Enables the free-function and constructor-list pruning.
    pub prune: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            max_answers: 1,
            fuel: 1_000_000,
            max_constructors: None,
            prune: true,
        }
    }
}

/// Shared, read-only solver configuration plus the dispatch counter.
#[derive(Debug)]
pub struct Context {
    tags: Vec<(TagId, usize)>,
    max_length: usize,
    max_arity: usize,
    prune: bool,
    dispatched: AtomicU64,
}

impl Context {
    pub fn new(table: &TagTable, prune: bool) -> Arc<Context> {
        Arc::new(Context {
            tags: table.entries().map(|(id, _, arity)| (id, arity)).collect(),
            max_length: table.sexp_max_length(),
            max_arity: table.max_arity(),
            prune,
            dispatched: AtomicU64::new(0),
        })
    }

    pub fn dispatched(&self) -> u64 {
        self.dispatched.load(Ordering::Relaxed)
    }
}

/// Outcome of one solver run.
#[derive(Clone, Debug)]
pub struct SolveOutcome {
    /// Root types per answer, in answer order.
    pub answers: Vec<Vec<TypeTerm>>,
    pub exhaustion: Exhaustion,
    pub steps: u64,
    pub unifications: u64,
    pub dispatched: u64,
}

impl SolveOutcome {
    pub fn fuel_exhausted(&self) -> bool {
        self.exhaustion == Exhaustion::FuelExhausted
    }
}

/// Solves `constraints` and reports the types of `roots` in each answer.
pub fn solve(
    constraints: &[AtomicConstraint],
    roots: &[TypeTerm],
    table: &TagTable,
    opts: &SolveOptions,
) -> SolveOutcome {
    let mut table = table.clone();
    if let Some(n) = opts.max_constructors {
        table.set_sexp_max_length(n);
    }
    let ctx = Context::new(&table, opts.prune);

    let mut names: Vec<Sym> = Vec::new();
    let mut index: HashMap<Sym, usize> = HashMap::new();
    {
        let mut collect = |s: &Sym| {
            if !index.contains_key(s) {
                index.insert(s.clone(), names.len());
                names.push(s.clone());
            }
            Term::Wild
        };
        let mut enc = Encoder::new(&mut collect);
        constraints.iter().for_each(|c| {
            enc.constraint(c);
        });
        roots.iter().for_each(|t| {
            enc.ty(t);
        });
    }

    let constraints: Arc<[AtomicConstraint]> = constraints.into();
    let roots: Arc<[TypeTerm]> = roots.into();
    let index = Arc::new(index);
    let goal_ctx = ctx.clone();
    let limits = RunLimits {
        max_answers: Some(opts.max_answers),
        fuel: Some(opts.fuel),
    };
    let result = run(limits, move |q| {
        fresh_n(names.len(), move |vars| {
            let mut source = |s: &Sym| vars[index[s]].clone();
            let mut enc = Encoder::new(&mut source);
            let queue: Vec<Term> = constraints.iter().map(|c| enc.constraint(c)).collect();
            let root_terms = enc.types(&roots);
            unify(q.clone(), root_terms).and(entail_all(queue, goal_ctx.clone()))
        })
    });

    let answers = result
        .answers
        .iter()
        .map(|a| {
            a.value
                .list_items()
                .0
                .into_iter()
                .map(|r| {
                    decode_type(r).unwrap_or_else(|e| panic!("solver produced a non-type: {e}"))
                })
                .collect()
        })
        .collect();
    SolveOutcome {
        answers,
        exhaustion: result.exhaustion,
        steps: result.steps,
        unifications: result.unifications,
        dispatched: ctx.dispatched(),
    }
}

/// Weight classes; lower is picked first.
pub mod weight {
    pub const EQ: u8 = 0;
    pub const SEXP_GROUND: u8 = 1;
    pub const IND_GROUND: u8 = 2;
    pub const CALL_GROUND: u8 = 3;
    pub const SEXP_FREE: u8 = 4;
    pub const IND_FREE: u8 = 5;
    pub const MATCH: u8 = 6;
    pub const CALL_FREE: u8 = 7;
    /// `#box` match on a free subject: waits for the subject to be determined.
    pub const DEFERRED: u8 = 8;
}

fn is_free(t: &Term, s: &State) -> bool {
    matches!(s.walk(t), Term::Var(_) | Term::Wild)
}

/// Weight of an encoded constraint in state `s`.
pub fn weight_of(c: &Term, s: &State) -> u8 {
    let Some((f, args)) = c.as_app() else {
        return weight::EQ;
    };
    match (f, args) {
        (EQ, _) => weight::EQ,
        (SEXP, [_, t, _]) if is_free(t, s) => weight::SEXP_FREE,
        (SEXP, _) => weight::SEXP_GROUND,
        (IND, [t, _]) if is_free(t, s) => weight::IND_FREE,
        (IND, _) => weight::IND_GROUND,
        (CALL, [t, _, _]) if is_free(t, s) => weight::CALL_FREE,
        (CALL, _) => weight::CALL_GROUND,
        (MATCH, [t, ps]) if is_free(t, s) && is_box_only(ps, s) => weight::DEFERRED,
        _ => weight::MATCH,
    }
}

fn is_box_only(ps: &Term, s: &State) -> bool {
    let ps = s.deep_walk(ps);
    match ps.as_app() {
        Some((CONS, [p, rest])) => {
            rest.is_app(NIL_F)
                && matches!(p.as_app(), Some((PSHAPE, [Term::Sym(k)])) if k.as_str() == "box")
        }
        _ => false,
    }
}

const NIL_F: &str = crate::engine::NIL;
const CONS: &str = crate::engine::CONS;

/// Index of the least-weight constraint; ties go to the earliest.
pub fn pick_next(queue: &[Term], s: &State) -> (usize, u8) {
    let mut best = (0, u8::MAX);
    for (i, c) in queue.iter().enumerate() {
        let w = weight_of(c, s);
        if w < best.1 {
            best = (i, w);
            if w == weight::EQ {
                break;
            }
        }
    }
    best
}

type Cont = Arc<dyn Fn(Vec<Term>) -> Goal + Send + Sync>;

/// Succeeds when every constraint of `queue` is entailed.
pub fn entail_all(queue: Vec<Term>, ctx: Arc<Context>) -> Goal {
    let queue: Arc<[Term]> = queue.into();
    with_state(move |s| {
        if queue.is_empty() {
            return succeed();
        }
        let (i, w) = pick_next(&queue, s);
        if w == weight::DEFERRED {
            return close_deferred(&queue, &ctx);
        }
        ctx.dispatched.fetch_add(1, Ordering::Relaxed);
        let c = queue[i].clone();
        let rest: Arc<Vec<Term>> = Arc::new(
            queue
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, t)| t.clone())
                .collect(),
        );
        let next_ctx = ctx.clone();
        let k: Cont = Arc::new(move |spawned: Vec<Term>| {
            let mut q = (*rest).clone();
            q.extend(spawned);
            let ctx = next_ctx.clone();
            lazy(move || entail_all(q.clone(), ctx.clone()))
        });
        dispatch(c, ctx.clone(), k)
    })
}

/// Only `#box` matches on free subjects remain: each subject is required to
/// differ from `Int`, the only unboxed type.
fn close_deferred(queue: &[Term], ctx: &Context) -> Goal {
    ctx.dispatched
        .fetch_add(queue.len() as u64, Ordering::Relaxed);
    conj(
        queue
            .iter()
            .filter_map(|c| match c.as_app() {
                Some((MATCH, [t, _])) => Some(disunify(t.clone(), t_int())),
                _ => None,
            })
            .collect(),
    )
}

fn dispatch(c: Term, ctx: Arc<Context>, k: Cont) -> Goal {
    let Some((f, args)) = c.as_app() else {
        return fail();
    };
    match (f, args) {
        (EQ, [a, b]) => eq_t(a.clone(), b.clone()).and(k(Vec::new())),
        (IND, [a, b]) => solve_ind(a.clone(), b.clone(), ctx).and(k(Vec::new())),
        (CALL, [g, xs, r]) => solve_call(g.clone(), xs.clone(), r.clone(), ctx, k),
        (SEXP, [tag, t, xs]) => {
            solve_sexp(tag.clone(), t.clone(), xs.clone(), ctx).and(k(Vec::new()))
        }
        (MATCH, [t, ps]) => solve_match(t.clone(), ps.clone(), k),
        _ => fail(),
    }
}

fn match_c(t: Term, p: Term) -> Term {
    Term::app(MATCH, vec![t, Term::list(vec![p])])
}

fn is_wild_pattern(p: &Term) -> bool {
    p.is_app(PWILD)
}

fn list_terms(t: &Term) -> Vec<Term> {
    let mut out = Vec::new();
    let mut cur = t;
    while let Some((CONS, [h, tl])) = cur.as_app() {
        out.push(h.clone());
        cur = tl;
    }
    out
}

/// `Ind(container, elem)`.
pub fn solve_ind(container: Term, elem: Term, ctx: Arc<Context>) -> Goal {
    with_unmu(container, move |u| {
        let (elem, ctx) = (elem.clone(), ctx.clone());
        with_state(move |s| match s.walk(&u) {
            Term::Var(_) | Term::Wild => ind_free(u.clone(), elem.clone(), ctx.clone()),
            t => match t.as_app() {
                Some((TSTR, [])) => eq_t(elem.clone(), t_int()),
                Some((TARR, [x])) => eq_t(elem.clone(), x.clone()),
                Some((TSEXP, [xs])) => all_args_eq(xs.clone(), elem.clone()),
                _ => fail(),
            },
        })
    })
}

fn ind_free(u: Term, elem: Term, ctx: Arc<Context>) -> Goal {
    let (u1, e1, u2, e2) = (u.clone(), elem.clone(), u.clone(), elem.clone());
    disj(vec![
        eq_t(u1, t_str()).and(eq_t(e1, t_int())),
        eq_t(u2, t_arr(e2)),
        lazy(move || sexp_candidates(u.clone(), elem.clone(), ctx.clone())),
    ])
}

/// Every S-expression type over distinct known constructors, all arguments
/// equal to `elem`: by length, then lexicographically by tag id.
fn sexp_candidates(u: Term, elem: Term, ctx: Arc<Context>) -> Goal {
    let n = ctx.tags.len();
    let longest = ctx.max_length.min(n);
    disj(
        (1..=longest)
            .map(|len| {
                let (u, elem, ctx) = (u.clone(), elem.clone(), ctx.clone());
                lazy(move || combos(u.clone(), elem.clone(), ctx.clone(), len, 0, Vec::new()))
            })
            .collect(),
    )
}

fn combos(
    u: Term,
    elem: Term,
    ctx: Arc<Context>,
    len: usize,
    start: usize,
    chosen: Vec<usize>,
) -> Goal {
    if chosen.len() == len {
        let entries: Vec<Term> = chosen
            .iter()
            .map(|&i| {
                let (tag, arity) = ctx.tags[i];
                ctor(tag_term(tag), Term::list(vec![elem.clone(); arity]))
            })
            .collect();
        return eq_t(u, t_sexp(Term::list(entries)));
    }
    let need = len - chosen.len();
    let n = ctx.tags.len();
    disj(
        (start..=n - need)
            .map(|i| {
                let (u, elem, ctx) = (u.clone(), elem.clone(), ctx.clone());
                let mut next = chosen.clone();
                next.push(i);
                lazy(move || {
                    combos(
                        u.clone(),
                        elem.clone(),
                        ctx.clone(),
                        len,
                        i + 1,
                        next.clone(),
                    )
                })
            })
            .collect(),
    )
}

fn all_args_eq(entries: Term, elem: Term) -> Goal {
    with_state(move |s| match s.walk(&entries).as_app() {
        Some((CONS, [h, rest])) => {
            let (h, rest, elem) = (h.clone(), rest.clone(), elem.clone());
            let entry = with_state({
                let elem = elem.clone();
                move |s| match s.walk(&h).as_app() {
                    Some((CTOR, [_, args])) => each_eq(args.clone(), elem.clone()),
                    _ => succeed(),
                }
            });
            entry.and(all_args_eq(rest, elem))
        }
        _ => succeed(),
    })
}

fn each_eq(items: Term, elem: Term) -> Goal {
    with_state(move |s| match s.walk(&items).as_app() {
        Some((CONS, [h, rest])) => {
            eq_t(h.clone(), elem.clone()).and(each_eq(rest.clone(), elem.clone()))
        }
        _ => succeed(),
    })
}

/// `Call(f, args, result)`; spawns the instantiated bound constraint of `f`.
fn solve_call(f: Term, args: Term, result: Term, ctx: Arc<Context>, k: Cont) -> Goal {
    with_unmu(f, move |u| {
        let (args, result, ctx, k) = (args.clone(), result.clone(), ctx.clone(), k.clone());
        fresh_n(4, move |v| {
            let (fxs, fc, fts, ft) = (v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone());
            let arrow = t_arrow(fxs.clone(), fc.clone(), fts.clone(), ft.clone());
            let u = u.clone();
            let head = with_state(move |s| match s.walk(&u) {
                Term::Var(_) | Term::Wild => unify(u.clone(), arrow.clone()),
                t if t.is_app(TARROW) => unify(t, arrow.clone()),
                _ => fail(),
            });
            conj(vec![
                head,
                binder_guard(fxs.clone(), fc.clone(), &ctx),
                instantiate(fxs, fc, fts, ft, args.clone(), result.clone(), k.clone()),
            ])
        })
    })
}

/// With pruning, free binder and constraint lists are forced empty. Without
/// it, they range over a small bounded family.
fn binder_guard(fxs: Term, fc: Term, ctx: &Context) -> Goal {
    let empty_if_free = |t: Term| {
        disj(vec![
            is_var(t.clone()).and(unify(t.clone(), Term::nil())),
            is_not_var(t),
        ])
    };
    if ctx.prune {
        return empty_if_free(fxs).and(empty_if_free(fc));
    }
    let binders: Vec<Goal> = (0..=ctx.max_arity)
        .map(|n| {
            let names: Vec<Term> = (0..n)
                .map(|i| Term::sym(format!("x{i}").as_str()))
                .collect();
            unify(fxs.clone(), Term::list(names))
        })
        .collect();
    let fc2 = fc.clone();
    let constraints = vec![
        unify(fc.clone(), Term::nil()),
        fresh_n(2, {
            let fc = fc.clone();
            move |v| unify(fc.clone(), Term::list(vec![Term::app(IND, v.clone())]))
        }),
        fresh_n(2, move |v| {
            unify(
                fc2.clone(),
                Term::list(vec![Term::app(
                    CALL,
                    vec![v[0].clone(), Term::nil(), v[1].clone()],
                )]),
            )
        }),
    ];
    let (f1, f2, c1, c2) = (fxs.clone(), fxs, fc.clone(), fc);
    conj(vec![
        disj(vec![is_not_var(f1), is_var(f2).and(disj(binders))]),
        disj(vec![is_not_var(c1), is_var(c2).and(disj(constraints))]),
    ])
}

fn instantiate(
    fxs: Term,
    fc: Term,
    fts: Term,
    ft: Term,
    args: Term,
    result: Term,
    k: Cont,
) -> Goal {
    with_state(move |s| {
        let bound = s.deep_walk(&fxs);
        let mut names = Vec::new();
        let mut cur = &bound;
        loop {
            match cur.as_app() {
                Some((CONS, [Term::Sym(x), tl])) => {
                    names.push(x.clone());
                    cur = tl;
                }
                Some((NIL_F, [])) => break,
                _ => return fail(),
            }
        }
        let (fc, fts, ft, args, result, k) = (
            fc.clone(),
            fts.clone(),
            ft.clone(),
            args.clone(),
            result.clone(),
            k.clone(),
        );
        fresh_n(names.len(), move |vars| {
            let sigma: Vec<(Sym, Term)> = names.iter().cloned().zip(vars).collect();
            let (fc, fts, ft, args, result, k) = (
                fc.clone(),
                fts.clone(),
                ft.clone(),
                args.clone(),
                result.clone(),
                k.clone(),
            );
            with_state(move |s| {
                let spawned = list_terms(&subst_term(&s.deep_walk(&fc), &sigma));
                let params = subst_term(&s.deep_walk(&fts), &sigma);
                let res = subst_term(&s.deep_walk(&ft), &sigma);
                conj(vec![
                    eq_ts(params, args.clone()),
                    eq_t(res, result.clone()),
                    k(spawned),
                ])
            })
        })
    })
}

/// `Sexp_tag(subject, args)`.
pub fn solve_sexp(tag: Term, subject: Term, args: Term, ctx: Arc<Context>) -> Goal {
    with_unmu(subject, move |u| {
        let (tag, args, ctx) = (tag.clone(), args.clone(), ctx.clone());
        with_state(move |s| match s.walk(&u) {
            Term::Var(_) | Term::Wild => {
                let (u, tag, args, ctx) = (u.clone(), tag.clone(), args.clone(), ctx.clone());
                fresh_with(move |xs| {
                    unify(u.clone(), t_sexp(xs.clone())).and(hlp(
                        0,
                        tag.clone(),
                        args.clone(),
                        xs,
                        ctx.clone(),
                    ))
                })
            }
            t => match t.as_app() {
                Some((TSEXP, [xs])) => hlp(0, tag.clone(), args.clone(), xs.clone(), ctx.clone()),
                _ => fail(),
            },
        })
    })
}

fn check_n(n: usize, ctx: &Context) -> bool {
    !ctx.prune || n <= ctx.max_length
}

/// `xs` holds exactly one entry tagged `x`, with arguments equal to `ts`.
fn hlp(n: usize, x: Term, ts: Term, xs: Term, ctx: Arc<Context>) -> Goal {
    if !check_n(n, &ctx) {
        return fail();
    }
    fresh_n(3, move |v| {
        let (x2, ts2, xs2) = (v[0].clone(), v[1].clone(), v[2].clone());
        let here = unify(x.clone(), x2.clone())
            .and(eq_ts(ts.clone(), ts2.clone()))
            .and(not_in_tail(n + 1, x.clone(), xs2.clone(), ctx.clone()));
        let guard = if ctx.prune {
            is_not_var(x2.clone())
        } else {
            succeed()
        };
        let later = guard.and(disunify(x.clone(), x2.clone())).and(hlp(
            n + 1,
            x.clone(),
            ts.clone(),
            xs2.clone(),
            ctx.clone(),
        ));
        unify(xs.clone(), Term::cons(ctor(x2, ts2), xs2)).and(disj(vec![here, later]))
    })
}

/// No entry of `xs` is tagged `x`.
fn not_in_tail(n: usize, x: Term, xs: Term, ctx: Arc<Context>) -> Goal {
    if !check_n(n, &ctx) {
        return fail();
    }
    let end = unify(xs.clone(), Term::nil());
    let more = fresh_n(3, move |v| {
        let (x2, a, xs2) = (v[0].clone(), v[1].clone(), v[2].clone());
        unify(xs.clone(), Term::cons(ctor(x2.clone(), a), xs2.clone()))
            .and(disunify(x.clone(), x2))
            .and(not_in_tail(n + 1, x.clone(), xs2, ctx.clone()))
    });
    disj(vec![end, more])
}

/// `Match(subject, patterns)`: several patterns split into one match each.
fn solve_match(subject: Term, pats: Term, k: Cont) -> Goal {
    with_state(move |s| {
        let ps = list_terms(&s.deep_walk(&pats));
        match ps.len() {
            0 => k(Vec::new()),
            1 => match_one(subject.clone(), ps[0].clone(), k.clone()),
            _ => k(ps
                .into_iter()
                .filter(|p| !is_wild_pattern(p))
                .map(|p| match_c(subject.clone(), p))
                .collect()),
        }
    })
}

fn match_one(subject: Term, p: Term, k: Cont) -> Goal {
    let Some((f, args)) = p.as_app() else {
        return fail();
    };
    match (f, args) {
        (PWILD, []) => k(Vec::new()),
        (PAT, [t, inner]) => {
            let spawned = if is_wild_pattern(inner) {
                vec![]
            } else {
                vec![match_c(subject.clone(), inner.clone())]
            };
            eq_t(t.clone(), subject).and(k(spawned))
        }
        (PARR, [ps]) => {
            let ps = list_terms(ps);
            fresh_with(move |e| {
                let spawned = ps
                    .iter()
                    .filter(|p| !is_wild_pattern(p))
                    .map(|p| match_c(e.clone(), p.clone()))
                    .collect();
                eq_t(subject.clone(), t_arr(e)).and(k(spawned))
            })
        }
        (PSEXP, [tag, ps]) => {
            let ps = list_terms(ps);
            let tag = tag.clone();
            fresh_n(ps.len(), move |ts| {
                let mut spawned = vec![Term::app(
                    SEXP,
                    vec![tag.clone(), subject.clone(), Term::list(ts.clone())],
                )];
                spawned.extend(
                    ps.iter()
                        .zip(ts.iter())
                        .filter(|(p, _)| !is_wild_pattern(p))
                        .map(|(p, t)| match_c(t.clone(), p.clone())),
                );
                k(spawned)
            })
        }
        (PSHAPE, [Term::Sym(kind)]) => match_shape(subject, kind.as_str(), k),
        _ => fail(),
    }
}

fn match_shape(subject: Term, kind: &str, k: Cont) -> Goal {
    match kind {
        "unbox" => eq_t(subject, t_int()).and(k(Vec::new())),
        "str" => eq_t(subject, t_str()).and(k(Vec::new())),
        "array" => fresh_with(move |e| eq_t(subject.clone(), t_arr(e))).and(k(Vec::new())),
        "sexp" => with_unmu(subject, |u| {
            with_state(move |s| match s.walk(&u) {
                Term::Var(_) | Term::Wild => {
                    let u = u.clone();
                    fresh_with(move |xs| unify(u.clone(), t_sexp(xs)))
                }
                t if t.is_app(TSEXP) => succeed(),
                _ => fail(),
            })
        })
        .and(k(Vec::new())),
        "fun" => with_unmu(subject, |u| {
            with_state(move |s| match s.walk(&u) {
                Term::Var(_) | Term::Wild => {
                    let u = u.clone();
                    fresh_n(2, move |v| {
                        unify(
                            u.clone(),
                            t_arrow(Term::nil(), Term::nil(), v[0].clone(), v[1].clone()),
                        )
                    })
                }
                t if t.is_app(TARROW) => succeed(),
                _ => fail(),
            })
        })
        .and(k(Vec::new())),
        "box" => {
            let original = subject.clone();
            with_unmu(subject, move |u| {
                let (k, original) = (k.clone(), original.clone());
                with_state(move |s| match s.walk(&u) {
                    Term::Var(_) | Term::Wild => k(vec![match_c(
                        original.clone(),
                        Term::app(PSHAPE, vec![Term::sym("box")]),
                    )]),
                    t => disunify(t, t_int()).and(k(Vec::new())),
                })
            })
        }
        _ => fail(),
    }
}
