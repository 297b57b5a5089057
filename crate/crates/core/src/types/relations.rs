//! Relations over encoded types: μ-unfolding, substitution and equality
//! modulo unfolding.

use std::sync::Arc;

use crate::engine::{
    bind_occurs_hook, conj, disj, disunify, fail, fresh_n, fresh_with, is_not_var, is_var, lazy,
    succeed, unify, with_state, Goal, OccursHook, Reified, RunLimits, State, Sym, Term, VarBag,
    VarId,
};

use super::encode::{ctor, t_mu, t_name, CTOR, TARR, TARROW, TINT, TMU, TNAME, TSEXP, TSTR};

const TYPE_HEADS: [&str; 7] = [TNAME, TINT, TSTR, TARR, TSEXP, TARROW, TMU];

fn is_type_head(t: &Term) -> bool {
    t.functor().is_some_and(|f| TYPE_HEADS.contains(&f))
}

fn mu_pattern() -> Term {
    t_mu(Term::Wild, Term::Wild)
}

/// `out` is `t` with one top-level μ unfolded; variables and non-μ terms are
/// passed through unchanged.
pub fn unmu(t: Term, out: Term) -> Goal {
    let (t1, t2, t3, o1, o2) = (t.clone(), t.clone(), t.clone(), out.clone(), out.clone());
    disj(vec![
        is_var(t.clone()).and(unify(t1, o1)),
        is_not_var(t.clone()).and(disj(vec![
            disunify(t2.clone(), mu_pattern()).and(unify(t2, o2)),
            fresh_n(2, move |v| {
                let (x, s) = (v[0].clone(), v[1].clone());
                unify(t3.clone(), t_mu(x.clone(), s.clone())).and(subst_t(
                    vec![(x, t3.clone())],
                    s,
                    out.clone(),
                ))
            }),
        ])),
    ])
}

/// Allocates the unfolding of `t` and hands it to `k`.
pub fn with_unmu<K>(t: Term, k: K) -> Goal
where
    K: Fn(Term) -> Goal + Send + Sync + 'static,
{
    fresh_with(move |u| unmu(t.clone(), u.clone()).and(k(u)))
}

/// `out` is `t` with every free `TName` in the domain of `s` replaced.
/// Keys must walk to symbols; binders of `TArrow` and `TMu` shadow.
pub fn subst_t(s: Vec<(Term, Term)>, t: Term, out: Term) -> Goal {
    with_state(move |st| {
        let mut pairs = Vec::with_capacity(s.len());
        for (k, v) in &s {
            match st.walk(k) {
                Term::Sym(name) => pairs.push((name, v.clone())),
                _ => return fail(),
            }
        }
        let body = st.deep_walk(&t);
        unify(out.clone(), subst_term(&body, &pairs))
    })
}

/// Pure substitution on an already walked term.
pub fn subst_term(t: &Term, s: &[(Sym, Term)]) -> Term {
    if s.is_empty() {
        return t.clone();
    }
    let Term::App(f, args) = t else {
        return t.clone();
    };
    match (f.as_str(), &args[..]) {
        (TNAME, [Term::Sym(x)]) => match s.iter().find(|(k, _)| k == x) {
            Some((_, v)) => v.clone(),
            None => t.clone(),
        },
        (TMU, [Term::Sym(x), body]) => {
            let inner: Vec<(Sym, Term)> = s.iter().filter(|(k, _)| k != x).cloned().collect();
            t_mu(Term::Sym(x.clone()), subst_term(body, &inner))
        }
        (TARROW, [bound, ..]) => {
            let bound_names = list_syms(bound);
            let inner: Vec<(Sym, Term)> = s
                .iter()
                .filter(|(k, _)| !bound_names.contains(k))
                .cloned()
                .collect();
            let mut new_args: Vec<Term> = vec![bound.clone()];
            new_args.extend(args[1..].iter().map(|a| subst_term(a, &inner)));
            Term::App(f.clone(), new_args.into())
        }
        _ => Term::App(f.clone(), args.iter().map(|a| subst_term(a, s)).collect()),
    }
}

fn list_syms(t: &Term) -> Vec<Sym> {
    let mut out = Vec::new();
    let mut cur = t;
    while let Some(("cons", [h, tl])) = cur.as_app() {
        if let Term::Sym(s) = h {
            out.push(s.clone());
        }
        cur = tl;
    }
    out
}

/// Hook that turns a cyclic binding of `v` into `μ m_v. T[v ↦ m_v]`.
pub fn occurs_hook_t() -> OccursHook {
    OccursHook::new(|bag, v, offending| {
        let name = mu_name(v);
        t_mu(Term::Sym(name.clone()), rebuild(bag, v, &name, offending))
    })
}

pub fn mu_name(v: VarId) -> Sym {
    Sym::new(&format!("m{v}"))
}

fn rebuild(bag: &VarBag, v: VarId, name: &Sym, r: &Reified) -> Term {
    match r {
        Reified::Var { id, .. } if *id == v => t_name(name),
        Reified::App(f, args) => Term::App(
            f.clone(),
            args.iter().map(|a| rebuild(bag, v, name, a)).collect(),
        ),
        other => other.to_term(bag),
    }
}

pub fn set_occurs_hook_t(t: Term) -> Goal {
    bind_occurs_hook(t, occurs_hook_t())
}

type Assumptions = Arc<Vec<(Term, Term)>>;

/// Equality of types modulo μ-unfolding. When a free variable meets a
/// determined type, an occurs hook is registered right before unifying so
/// a cyclic binding becomes a μ-type.
pub fn eq_t(a: Term, b: Term) -> Goal {
    eq_with(a, b, Arc::new(Vec::new()))
}

/// `eq_t` lifted to lists of types.
pub fn eq_ts(a: Term, b: Term) -> Goal {
    eq_t(a, b)
}

/// `eq_t` lifted to lists of constraints.
pub fn eq_c(a: Term, b: Term) -> Goal {
    eq_t(a, b)
}

fn eq_with(a: Term, b: Term, asm: Assumptions) -> Goal {
    with_state(move |s| {
        let a = s.walk(&a);
        let b = s.walk(&b);
        if a == b {
            return succeed();
        }
        match (&a, &b) {
            (Term::Wild, _) | (_, Term::Wild) => succeed(),
            (Term::Var(_), Term::Var(_)) => unify(a, b),
            (Term::Var(_), _) => var_eq(a, b, asm.clone()),
            (_, Term::Var(_)) => var_eq(b, a, asm.clone()),
            (Term::App(f, xs), Term::App(g, ys)) => {
                let (fm, gm) = (f.as_str() == TMU, g.as_str() == TMU);
                if fm && gm && s.walk(&xs[0]) == s.walk(&ys[0]) {
                    return eq_with(xs[1].clone(), ys[1].clone(), asm.clone());
                }
                if fm || gm {
                    return mu_eq(s, a, b, fm, gm, asm.clone());
                }
                if f != g || xs.len() != ys.len() {
                    return fail();
                }
                if f.as_str() == TSEXP {
                    return entries_eq(xs[0].clone(), ys[0].clone(), asm.clone());
                }
                conj(
                    xs.iter()
                        .zip(ys.iter())
                        .map(|(x, y)| eq_with(x.clone(), y.clone(), asm.clone()))
                        .collect(),
                )
            }
            _ => fail(),
        }
    })
}

type Rest = Arc<dyn Fn(Term) -> Goal + Send + Sync>;

/// Constructor lists are compared as sets: every entry of `xs` meets the
/// entry of `ys` carrying the same tag.
fn entries_eq(xs: Term, ys: Term, asm: Assumptions) -> Goal {
    with_state(move |s| match s.walk(&xs) {
        Term::App(f, args) if f.as_str() == "cons" => {
            let (tag, targs) = match s.walk(&args[0]).as_app() {
                Some((CTOR, [t, a])) => (t.clone(), a.clone()),
                _ => return eq_with(xs.clone(), ys.clone(), asm.clone()),
            };
            let (rest, inner) = (args[1].clone(), asm.clone());
            let k: Rest =
                Arc::new(move |remaining| entries_eq(rest.clone(), remaining, inner.clone()));
            pick(ys.clone(), tag, targs, asm.clone(), k)
        }
        _ => eq_with(xs.clone(), ys.clone(), asm.clone()),
    })
}

/// Removes the entry tagged `tag` from `ys`, equating its arguments with
/// `targs`, and passes the remaining list to `k`.
fn pick(ys: Term, tag: Term, targs: Term, asm: Assumptions, k: Rest) -> Goal {
    with_state(move |s| {
        let ys_w = s.walk(&ys);
        match ys_w.as_app() {
            Some(("cons", [h, tl])) => {
                let (h, tl) = (h.clone(), tl.clone());
                let (their_tag, their_args) = match s.walk(&h).as_app() {
                    Some((CTOR, [t, a])) => (s.walk(t), a.clone()),
                    _ => {
                        let (ys, tag, targs, asm, k) = (
                            ys.clone(),
                            tag.clone(),
                            targs.clone(),
                            asm.clone(),
                            k.clone(),
                        );
                        return fresh_n(2, move |v| {
                            unify(h.clone(), ctor(v[0].clone(), v[1].clone())).and(pick(
                                ys.clone(),
                                tag.clone(),
                                targs.clone(),
                                asm.clone(),
                                k.clone(),
                            ))
                        });
                    }
                };
                let mine = s.walk(&tag);
                let here = {
                    let (k, tl) = (k.clone(), tl.clone());
                    unify(mine.clone(), their_tag.clone())
                        .and(eq_with(targs.clone(), their_args, asm.clone()))
                        .and(lazy(move || k(tl.clone())))
                };
                let later = {
                    let k = k.clone();
                    let h2 = h.clone();
                    let skip: Rest =
                        Arc::new(move |remaining| k(Term::cons(h2.clone(), remaining)));
                    pick(tl, tag.clone(), targs.clone(), asm.clone(), skip)
                };
                match (&mine, &their_tag) {
                    (Term::Int(a), Term::Int(b)) if a == b => here,
                    (Term::Int(_), Term::Int(_)) => later,
                    _ => disj(vec![here, disunify(mine, their_tag).and(later)]),
                }
            }
            Some(("nil", [])) => fail(),
            _ => {
                let (ys, tag, targs, asm, k) = (
                    ys.clone(),
                    tag.clone(),
                    targs.clone(),
                    asm.clone(),
                    k.clone(),
                );
                fresh_n(2, move |v| {
                    unify(
                        ys.clone(),
                        Term::cons(ctor(tag.clone(), v[0].clone()), v[1].clone()),
                    )
                    .and(eq_with(targs.clone(), v[0].clone(), asm.clone()))
                    .and(k(v[1].clone()))
                })
            }
        }
    })
}

fn var_eq(v: Term, t: Term, asm: Assumptions) -> Goal {
    match &t {
        Term::App(f, args) if !args.is_empty() && !is_type_head(&t) => {
            // Non-type structure (lists, constructor entries) is expanded
            // cell by cell so that hooks apply at the type leaves.
            let f = f.clone();
            let args = args.clone();
            fresh_n(args.len(), move |cells| {
                let mut goals = vec![unify(v.clone(), Term::App(f.clone(), cells.clone().into()))];
                goals.extend(
                    cells
                        .iter()
                        .zip(args.iter())
                        .map(|(c, a)| eq_with(c.clone(), a.clone(), asm.clone())),
                );
                conj(goals)
            })
        }
        _ if is_type_head(&t) => set_occurs_hook_t(v.clone()).and(unify(v, t)),
        _ => unify(v, t),
    }
}

fn mu_eq(s: &State, a: Term, b: Term, fm: bool, gm: bool, asm: Assumptions) -> Goal {
    let key = (s.deep_walk(&a), s.deep_walk(&b));
    let seen = asm
        .iter()
        .any(|(x, y)| (x == &key.0 && y == &key.1) || (x == &key.1 && y == &key.0));
    if seen {
        return succeed();
    }
    let mut next = (*asm).clone();
    next.push(key);
    let asm: Assumptions = Arc::new(next);
    match (fm, gm) {
        (true, true) => with_unmu(a, move |ua| {
            let (asm, b) = (asm.clone(), b.clone());
            with_unmu(b, move |ub| eq_with(ua.clone(), ub, asm.clone()))
        }),
        (true, false) => with_unmu(a, move |ua| eq_with(ua, b.clone(), asm.clone())),
        _ => with_unmu(b, move |ub| eq_with(a.clone(), ub, asm.clone())),
    }
}

/// Decides `a ≡ b` for two encoded types with no free engine variables.
pub fn ground_equal(a: &Term, b: &Term) -> bool {
    let (a, b) = (a.clone(), b.clone());
    let r = crate::engine::run(RunLimits::answers(1).with_fuel(200_000), move |_| {
        eq_t(a, b)
    });
    !r.answers.is_empty()
}
