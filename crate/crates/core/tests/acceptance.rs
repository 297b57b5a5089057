//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p lama-infer --test acceptance`.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

use lama_infer::driver::{check_file, run_corpus, with_big_stack, EntryStatus, Verdict};
use lama_infer::engine::{
    bind_occurs_hook, disj, lazy, run, unify, Answers, Goal, OccursHook, RunLimits, State, Sym,
    Term,
};
use lama_infer::solver::{solve, SolveOptions};
use lama_infer::types::{
    ctor, decode_type, eq_t, parse_constraint, parse_type, t_int, t_sexp, tag_term,
    types_equivalent, AtomicConstraint, Ctor, TagTable, TypeTerm,
};

const ENGINE_CASES: u32 = 1000;
const ENGINE_BUDGET: Duration = Duration::from_secs(10);
const FIG2_BUDGET: Duration = Duration::from_secs(1);
const CORPUS_BUDGET: Duration = Duration::from_secs(60);
const ORACLE_MU_DEPTH: usize = 3;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn main() {
    let criteria: Vec<Criterion> = vec![
        ("engine laws", engine_laws),
        ("occurs hook builds mu types", occurs_hook_mu),
        ("two-tag Sexp enumeration", sexp_enumeration),
        ("free Call pruning", call_pruning),
        ("Sexp constructor-list pruning", sexp_pruning),
        ("example corpus", corpus),
        ("ground entailment oracle", ground_oracle),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(|| with_big_stack(f)))
            .unwrap_or_else(|e| Err(format!("panicked: {}", panic_text(&e))));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {} {name}: {detail} [{secs:.2}s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {} {name}: {detail} [{secs:.2}s]", i + 1)
            }
        }
    }
    println!("{} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

fn panic_text(e: &Box<dyn std::any::Any + Send>) -> String {
    e.downcast_ref::<String>()
        .cloned()
        .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
        .unwrap_or_default()
}

// ---------------------------------------------------------------- engine laws

const NVARS: u32 = 4;

fn arb_term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        (0..NVARS).prop_map(Term::Var),
        (0i64..3).prop_map(Term::int),
        prop::sample::select(vec!["a", "b"]).prop_map(Term::sym),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (
                prop::sample::select(vec!["f", "g"]),
                prop::collection::vec(inner.clone(), 1..=2)
            )
                .prop_map(|(f, xs)| Term::app(f, xs)),
            (inner.clone(), inner).prop_map(|(h, t)| Term::cons(h, t)),
        ]
    })
}

fn base_state() -> State {
    let mut s = State::new();
    s.fresh_vars(NVARS as usize);
    s
}

fn all_vars() -> Term {
    Term::list((0..NVARS).map(Term::Var))
}

fn is_resolved(s: &State, t: &Term) -> bool {
    match t {
        Term::Var(v) => s.binding(*v).is_none(),
        Term::App(_, xs) => xs.iter().all(|x| is_resolved(s, x)),
        _ => true,
    }
}

fn diverge() -> Goal {
    lazy(diverge)
}

fn law<S: Strategy>(
    name: &str,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    let mut runner = TestRunner::new(Config {
        cases: ENGINE_CASES,
        failure_persistence: None,
        ..Config::default()
    });
    runner
        .run(&strategy, test)
        .map_err(|e| format!("{name}: {e}"))
}

fn engine_laws() -> Check {
    let start = Instant::now();
    law(
        "unification symmetry",
        (arb_term(), arb_term()),
        |(a, b)| {
            let s = base_state();
            let (r1, r2) = (s.unify(&a, &b), s.unify(&b, &a));
            prop_assert_eq!(r1.is_some(), r2.is_some());
            if let (Some(s1), Some(s2)) = (r1, r2) {
                let probe = Term::list(vec![a.clone(), b.clone(), all_vars()]);
                prop_assert_eq!(s1.reify(&probe), s2.reify(&probe));
            }
            Ok(())
        },
    )?;
    law(
        "triangular soundness",
        (arb_term(), arb_term()),
        |(a, b)| {
            if let Some(s) = base_state().unify(&a, &b) {
                let (wa, wb) = (s.deep_walk(&a), s.deep_walk(&b));
                prop_assert_eq!(&wa, &wb);
                prop_assert!(is_resolved(&s, &wa));
                prop_assert_eq!(s.deep_walk(&wa), wa);
            }
            Ok(())
        },
    )?;
    law(
        "disequality persistence",
        (arb_term(), arb_term(), arb_term(), arb_term()),
        |(a, b, c, d)| {
            let s = base_state();
            if s.unify(&a, &b).is_none() {
                prop_assert!(s.disunify(&a, &b).is_some());
            }
            if let Some(s1) = s.disunify(&a, &b) {
                prop_assert!(s1.unify(&a, &b).is_none());
                if let Some(s2) = s1.unify(&c, &d) {
                    prop_assert!(s2.unify(&a, &b).is_none());
                }
            }
            Ok(())
        },
    )?;
    law("hook clearing", (arb_term(), arb_term()), |(c, d)| {
        let hook = OccursHook::new(|_, _, _| Term::sym("cut"));
        let g = bind_occurs_hook(Term::Var(0), hook).and(unify(c, d));
        for s in Answers::new(&g, base_state()) {
            prop_assert_eq!(s.hook_count(), 0);
        }
        Ok(())
    })?;
    let fairness = (prop::collection::vec(prop::bool::ANY, 1..6), 0i64..100);
    law("disjunction fairness", fairness, |(shape, k)| {
        let expected = shape.iter().filter(|b| **b).count();
        let r = run(
            RunLimits::answers(expected.max(1)).with_fuel(20_000),
            move |q| {
                disj(
                    shape
                        .iter()
                        .enumerate()
                        .map(|(i, ok)| {
                            if *ok {
                                unify(q.clone(), Term::int(k + i as i64))
                            } else {
                                diverge()
                            }
                        })
                        .collect(),
                )
            },
        );
        prop_assert_eq!(r.answers.len(), expected);
        Ok(())
    })?;
    let took = start.elapsed();
    ensure(took < ENGINE_BUDGET, || {
        format!("took {took:?}, budget {ENGINE_BUDGET:?}")
    })?;
    Ok(format!(
        "5 laws x {ENGINE_CASES} cases, 0 failures in {:.2}s (< {}s)",
        took.as_secs_f64(),
        ENGINE_BUDGET.as_secs()
    ))
}

// --------------------------------------------------------------- occurs hook

fn occurs_hook_mu() -> Check {
    let mut tags = TagTable::new();
    let cons = tags.intern("Cons", 2);
    let r = run(RunLimits::answers(2).with_fuel(10_000), move |x| {
        let shape = t_sexp(Term::list(vec![ctor(
            tag_term(cons),
            Term::list(vec![t_int(), x.clone()]),
        )]));
        eq_t(x, shape)
    });
    ensure(r.answers.len() == 1, || {
        format!("{} answers", r.answers.len())
    })?;
    let got = decode_type(&r.answers[0].value).map_err(|e| e.to_string())?;
    ensure(matches!(got, TypeTerm::Mu(..)), || {
        format!("not a mu type: {got:?}")
    })?;
    let oracle = TypeTerm::Mu(
        Sym::new("a"),
        Box::new(TypeTerm::Sexp(vec![Ctor::Known {
            tag: cons,
            args: vec![TypeTerm::Int, TypeTerm::var("a")],
        }])),
    );
    ensure(types_equivalent(&got, &oracle), || {
        format!("{got:?} differs from mu a. Cons(Int, a)")
    })?;
    let unfolded = got.unfold();
    ensure(types_equivalent(&unfolded, &oracle), || {
        "one unfolding is not equivalent".into()
    })?;
    Ok("x = Cons(Int, x) binds x to a type equivalent to mu a. Cons(Int, a)".into())
}

// ----------------------------------------------------------- Sexp enumeration

fn query(tags: &mut TagTable, constraints: &[&str]) -> Vec<AtomicConstraint> {
    constraints
        .iter()
        .map(|c| parse_constraint(c, tags, true).expect("constraint syntax"))
        .collect()
}

/// Every constructor list a free subject can take under `Sexp_X`, as
/// (position of the `X` entry, length): lists of one `X` entry plus open
/// entries, where an entry can only be skipped once its tag is known.
fn brute_force_lists(max_len: usize) -> Vec<(usize, usize)> {
    (1..=max_len)
        .flat_map(|len| (0..len).map(move |k| (k, len)))
        .filter(|(k, _)| *k == 0)
        .collect()
}

/// (position of the known entry, length) of a decoded constructor list.
fn list_signature(t: &TypeTerm, tag: u32) -> Option<(usize, usize)> {
    let TypeTerm::Sexp(cs) = t else { return None };
    let known: Vec<usize> = cs
        .iter()
        .enumerate()
        .filter(|(_, c)| matches!(c, Ctor::Known { tag: t, .. } if *t == tag))
        .map(|(i, _)| i)
        .collect();
    let others_open = cs
        .iter()
        .enumerate()
        .all(|(i, c)| known.contains(&i) || matches!(c, Ctor::Open(_)));
    (known.len() == 1 && others_open).then(|| (known[0], cs.len()))
}

fn sexp_enumeration() -> Check {
    let mut tags = TagTable::new();
    let cs = query(
        &mut tags,
        &["Sexp[A](x; Int)", "Sexp[B](y; Str)", "Sexp[A](z; Int)"],
    );
    let (a, b) = (tags.lookup("A", 1).unwrap(), tags.lookup("B", 1).unwrap());
    let roots = vec![TypeTerm::var("x"), TypeTerm::var("y"), TypeTerm::var("z")];
    let start = Instant::now();
    let out = solve(
        &cs,
        &roots,
        &tags,
        &SolveOptions {
            max_answers: 1000,
            ..SolveOptions::default()
        },
    );
    let took = start.elapsed();

    let per_var = brute_force_lists(tags.sexp_max_length());
    let mut expected = BTreeSet::new();
    for x in &per_var {
        for y in &per_var {
            for z in &per_var {
                expected.insert(vec![*x, *y, *z]);
            }
        }
    }
    let mut got = BTreeSet::new();
    for ans in &out.answers {
        let sig: Option<Vec<_>> = ans
            .iter()
            .zip([a, b, a])
            .map(|(t, tag)| list_signature(t, tag))
            .collect();
        let sig = sig.ok_or_else(|| format!("unexpected answer shape {ans:?}"))?;
        got.insert(sig);
    }
    ensure(out.answers.len() == got.len(), || {
        "duplicate answers".into()
    })?;
    ensure(got == expected, || {
        format!("answers {got:?}, enumerator {expected:?}")
    })?;
    ensure(out.answers.len() == 8, || {
        format!("{} answers", out.answers.len())
    })?;
    ensure(took < FIG2_BUDGET, || format!("took {took:?}"))?;
    Ok(format!(
        "8 answers, equal to brute-force set, {:.3}s (< 1s)",
        took.as_secs_f64()
    ))
}

// -------------------------------------------------------------- Call pruning

fn call_pruning() -> Check {
    let mut tags = TagTable::new();
    let cs = query(&mut tags, &["Call(f; Int; Str)"]);
    let roots = vec![TypeTerm::var("f")];
    let want = parse_type("(Int) -> Str", &tags).unwrap();

    let all = solve(
        &cs,
        &roots,
        &tags,
        &SolveOptions {
            max_answers: 100,
            ..SolveOptions::default()
        },
    );
    ensure(all.answers.len() == 1, || {
        format!("{} answers with pruning", all.answers.len())
    })?;
    ensure(types_equivalent(&all.answers[0][0], &want), || {
        format!("{:?}", all.answers[0][0])
    })?;

    let first = SolveOptions {
        max_answers: 1,
        ..SolveOptions::default()
    };
    let pruned = solve(&cs, &roots, &tags, &first);
    let free = solve(
        &cs,
        &roots,
        &tags,
        &SolveOptions {
            prune: false,
            ..first
        },
    );
    ensure(!free.answers.is_empty(), || {
        "no answer without pruning".into()
    })?;
    ensure(types_equivalent(&free.answers[0][0], &want), || {
        format!("first answer changed: {:?}", free.answers[0][0])
    })?;
    ensure(free.steps > pruned.steps, || {
        format!("steps {} vs {}", free.steps, pruned.steps)
    })?;
    Ok(format!(
        "1 answer (Int) -> Str; without pruning same first answer, steps {} > {}",
        free.steps, pruned.steps
    ))
}

// -------------------------------------------------------------- Sexp pruning

fn sexp_pruning() -> Check {
    let mut tags = TagTable::new();
    tags.intern("Nil", 0);
    tags.intern("A", 1);
    let cs = query(&mut tags, &["Sexp[Cons](x; Int)"]);
    let cons = tags.lookup("Cons", 1).unwrap();
    let opts = SolveOptions {
        max_answers: 100,
        max_constructors: Some(3),
        ..SolveOptions::default()
    };
    let out = solve(&cs, &[TypeTerm::var("x")], &tags, &opts);
    let mut lens: Vec<usize> = out
        .answers
        .iter()
        .map(|a| {
            list_signature(&a[0], cons)
                .map(|(_, l)| l)
                .ok_or_else(|| format!("{a:?}"))
        })
        .collect::<Result<_, _>>()?;
    lens.sort();
    ensure(lens == [1, 2, 3], || format!("lengths {lens:?}"))?;

    let cs = query(&mut tags, &["Eq(x, Nil | ?c)", "Sexp[Cons](x; Int)"]);
    let out = solve(&cs, &[TypeTerm::var("x")], &tags, &opts);
    ensure(out.answers.len() == 1, || {
        format!("{} answers for Nil | ?c", out.answers.len())
    })?;
    let want = parse_type("Nil | Cons(Int)", &tags).unwrap();
    ensure(types_equivalent(&out.answers[0][0], &want), || {
        format!("{:?}", out.answers[0][0])
    })?;
    Ok("free subject: lengths 1, 2, 3; Nil | ?c: exactly 1 answer, ?c = Cons(Int)".into())
}

// -------------------------------------------------------------------- corpus

fn corpus_dir() -> &'static Path {
    Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/corpus"))
}

fn corpus() -> Check {
    let opts = SolveOptions::default();
    let start = Instant::now();
    let expect = [
        ("sort.lama", Verdict::Typed),
        ("case.lama", Verdict::Typed),
        ("closure.lama", Verdict::Typed),
        ("self_array.lama", Verdict::Unknown),
    ];
    for (file, verdict) in expect {
        let r = check_file(&corpus_dir().join(file), &opts);
        ensure(r.verdict == verdict, || format!("{file}: {:?}", r.verdict))?;
        if verdict == Verdict::Unknown {
            ensure(r.stats.fuel_used == opts.fuel, || {
                format!("{file}: fuel used {}", r.stats.fuel_used)
            })?;
        }
        if file == "case.lama" {
            let y = &r.bindings.iter().find(|(n, _)| n == "y").ok_or("no y")?.1;
            let want = parse_type("mu a. Nil | Cons(Int, a)", &r.table).unwrap();
            ensure(types_equivalent(y, &want), || format!("y : {y:?}"))?;
        }
        if file == "sort.lama" {
            let x = &r.bindings.iter().find(|(n, _)| n == "x").ok_or("no x")?.1;
            ensure(*x == TypeTerm::array(TypeTerm::Int), || {
                format!("x : {x:?}")
            })?;
        }
    }
    let summary = run_corpus(corpus_dir(), &opts).map_err(|e| e.to_string())?;
    ensure(summary.failed() == 0 && summary.skipped() == 0, || {
        summary.render()
    })?;
    let took = start.elapsed();
    ensure(took < CORPUS_BUDGET, || format!("took {took:?}"))?;
    Ok(format!(
        "sort, case, closure typed; self_array unknown at fuel limit; {} files match .expected; {:.2}s (< 60s)",
        summary.passed(),
        took.as_secs_f64()
    ))
}

// ------------------------------------------------------- ground entailment

/// Independent checker for the entailment rules on ground constraints.
mod oracle {
    use lama_infer::engine::Sym;
    use lama_infer::types::{AtomicConstraint, Ctor, TypeTerm};

    fn subst(t: &TypeTerm, x: &Sym, by: &TypeTerm) -> TypeTerm {
        match t {
            TypeTerm::Var(y) if y == x => by.clone(),
            TypeTerm::Var(_) | TypeTerm::Int | TypeTerm::Str => t.clone(),
            TypeTerm::Array(e) => TypeTerm::Array(Box::new(subst(e, x, by))),
            TypeTerm::Sexp(cs) => TypeTerm::Sexp(
                cs.iter()
                    .map(|c| match c {
                        Ctor::Known { tag, args } => Ctor::Known {
                            tag: *tag,
                            args: args.iter().map(|a| subst(a, x, by)).collect(),
                        },
                        open => open.clone(),
                    })
                    .collect(),
            ),
            TypeTerm::Mu(y, _) if y == x => t.clone(),
            TypeTerm::Mu(y, body) => TypeTerm::Mu(y.clone(), Box::new(subst(body, x, by))),
            TypeTerm::Arrow(a) if a.bound.contains(x) => t.clone(),
            TypeTerm::Arrow(a) => {
                let mut a = (**a).clone();
                a.params = a.params.iter().map(|p| subst(p, x, by)).collect();
                a.result = subst(&a.result, x, by);
                a.constraints = a.constraints.iter().map(|c| subst_c(c, x, by)).collect();
                TypeTerm::Arrow(Box::new(a))
            }
        }
    }

    fn subst_c(c: &AtomicConstraint, x: &Sym, by: &TypeTerm) -> AtomicConstraint {
        let s = |t: &TypeTerm| subst(t, x, by);
        match c {
            AtomicConstraint::Ind(a, b) => AtomicConstraint::Ind(s(a), s(b)),
            AtomicConstraint::Call(f, xs, r) => {
                AtomicConstraint::Call(s(f), xs.iter().map(s).collect(), s(r))
            }
            AtomicConstraint::Sexp(t, a, xs) => {
                AtomicConstraint::Sexp(*t, s(a), xs.iter().map(s).collect())
            }
            AtomicConstraint::Eq(a, b) => AtomicConstraint::Eq(s(a), s(b)),
            AtomicConstraint::Match(..) => c.clone(),
        }
    }

    fn unfold_once(t: &TypeTerm) -> TypeTerm {
        match t {
            TypeTerm::Mu(x, body) => subst(body, x, t),
            _ => t.clone(),
        }
    }

    /// Unfolds leading binders at most `depth` times.
    fn head(t: &TypeTerm, depth: usize) -> TypeTerm {
        let mut t = t.clone();
        for _ in 0..depth {
            if !matches!(t, TypeTerm::Mu(..)) {
                break;
            }
            t = unfold_once(&t);
        }
        t
    }

    /// Equality up to `depth` unfoldings along any path.
    pub fn eq(a: &TypeTerm, b: &TypeTerm, depth: usize) -> bool {
        if matches!(a, TypeTerm::Mu(..)) || matches!(b, TypeTerm::Mu(..)) {
            return depth == 0 || eq(&unfold_once(a), &unfold_once(b), depth - 1);
        }
        match (a, b) {
            (TypeTerm::Int, TypeTerm::Int) | (TypeTerm::Str, TypeTerm::Str) => true,
            (TypeTerm::Var(x), TypeTerm::Var(y)) => x == y,
            (TypeTerm::Array(x), TypeTerm::Array(y)) => eq(x, y, depth),
            (TypeTerm::Sexp(xs), TypeTerm::Sexp(ys)) => {
                xs.len() == ys.len()
                    && xs.iter().all(|c| match c {
                        Ctor::Known { tag, args } => ys.iter().any(|d| match d {
                            Ctor::Known { tag: t2, args: a2 } => {
                                t2 == tag
                                    && a2.len() == args.len()
                                    && args.iter().zip(a2).all(|(p, q)| eq(p, q, depth))
                            }
                            Ctor::Open(_) => false,
                        }),
                        Ctor::Open(_) => false,
                    })
            }
            (TypeTerm::Arrow(f), TypeTerm::Arrow(g)) => {
                f.bound == g.bound
                    && f.params.len() == g.params.len()
                    && f.params.iter().zip(&g.params).all(|(p, q)| eq(p, q, depth))
                    && eq(&f.result, &g.result, depth)
                    && f.constraints == g.constraints
            }
            _ => false,
        }
    }

    /// `C ⊩ c` for ground `c`, searching instantiations of bound
    /// variables over `pool`.
    pub fn entails(c: &AtomicConstraint, pool: &[TypeTerm], depth: usize) -> bool {
        let d = super::ORACLE_MU_DEPTH;
        match c {
            AtomicConstraint::Ind(t, e) => match head(t, d) {
                TypeTerm::Str => eq(e, &TypeTerm::Int, d),
                TypeTerm::Array(x) => eq(&x, e, d),
                TypeTerm::Sexp(cs) => cs.iter().all(|c| match c {
                    Ctor::Known { args, .. } => args.iter().all(|a| eq(a, e, d)),
                    Ctor::Open(_) => false,
                }),
                _ => false,
            },
            AtomicConstraint::Sexp(tag, s, ts) => match head(s, d) {
                TypeTerm::Sexp(cs) => {
                    let hits: Vec<&Vec<TypeTerm>> = cs
                        .iter()
                        .filter_map(|c| match c {
                            Ctor::Known { tag: t, args } if t == tag => Some(args),
                            _ => None,
                        })
                        .collect();
                    hits.len() == 1
                        && hits[0].len() == ts.len()
                        && hits[0].iter().zip(ts).all(|(a, b)| eq(a, b, d))
                }
                _ => false,
            },
            AtomicConstraint::Call(f, args, r) => {
                if depth == 0 {
                    return false;
                }
                let TypeTerm::Arrow(a) = head(f, d) else {
                    return false;
                };
                if a.params.len() != args.len() {
                    return false;
                }
                instantiations(a.bound.len(), pool)
                    .into_iter()
                    .any(|choice| {
                        let inst = |t: &TypeTerm| {
                            a.bound
                                .iter()
                                .zip(&choice)
                                .fold(t.clone(), |t, (x, by)| subst(&t, x, by))
                        };
                        a.params.iter().zip(args).all(|(p, x)| eq(&inst(p), x, d))
                            && eq(&inst(&a.result), r, d)
                            && a.constraints.iter().all(|c| {
                                let c = a
                                    .bound
                                    .iter()
                                    .zip(&choice)
                                    .fold(c.clone(), |c, (x, by)| subst_c(&c, x, by));
                                entails(&c, pool, depth - 1)
                            })
                    })
            }
            AtomicConstraint::Eq(a, b) => eq(a, b, d),
            AtomicConstraint::Match(..) => false,
        }
    }

    fn instantiations(n: usize, pool: &[TypeTerm]) -> Vec<Vec<TypeTerm>> {
        let mut out = vec![Vec::new()];
        for _ in 0..n {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    pool.iter().map(move |t| {
                        let mut p = prefix.clone();
                        p.push(t.clone());
                        p
                    })
                })
                .collect();
        }
        out
    }

    /// Closed subterms of `t`, used as instantiation candidates.
    pub fn closed_subterms(t: &TypeTerm, out: &mut Vec<TypeTerm>) {
        if t.free_vars().is_empty() && !out.contains(t) {
            out.push(t.clone());
        }
        match t {
            TypeTerm::Array(e) => closed_subterms(e, out),
            TypeTerm::Sexp(cs) => cs.iter().for_each(|c| {
                if let Ctor::Known { args, .. } = c {
                    args.iter().for_each(|a| closed_subterms(a, out));
                }
            }),
            TypeTerm::Arrow(a) => {
                a.params.iter().for_each(|p| closed_subterms(p, out));
                closed_subterms(&a.result, out);
            }
            _ => {}
        }
    }
}

/// Ground constraints with the verdict worked out by hand.
const GROUND_TABLE: [(&str, bool); 40] = [
    ("Ind(Str, Int)", true),
    ("Ind(Str, Str)", false),
    ("Ind([Int], Int)", true),
    ("Ind([Str], Int)", false),
    ("Ind([A(Int)], A(Int))", true),
    ("Ind(A(Int), Int)", true),
    ("Ind(A(Int) | B(Int), Int)", true),
    ("Ind(A(Str) | B(Int), Int)", false),
    ("Ind(Int, Int)", false),
    ("Ind((Int) -> Int, Int)", false),
    ("Ind(mu a. A(a) | B(a), mu a. A(a) | B(a))", true),
    ("Ind(mu a. [a], mu a. [a])", true),
    ("Ind(mu a. [a], [mu a. [a]])", true),
    ("Ind([[Int]], [Int])", true),
    ("Sexp[A](A(Int); Int)", true),
    ("Sexp[A](A(Str); Int)", false),
    ("Sexp[A](A(Int) | B(Str); Int)", true),
    ("Sexp[B](A(Int) | B(Str); Str)", true),
    ("Sexp[B](A(Int); Str)", false),
    ("Sexp[A](Int; Int)", false),
    ("Sexp[A](mu a. A(a) | B(Int); mu a. A(a) | B(Int))", true),
    ("Sexp[A](mu a. A(a) | B(Int); A(Int))", false),
    ("Sexp[B](mu a. A(a) | B(Int); Int)", true),
    ("Sexp[A]([Int]; Int)", false),
    ("Call((Int) -> Int; Int; Int)", true),
    ("Call((Int) -> Int; Str; Int)", false),
    ("Call((Int) -> Int; Int, Int; Int)", false),
    ("Call(forall a. (a) -> a; Str; Str)", true),
    ("Call(forall a. (a) -> a; Str; Int)", false),
    ("Call(forall a b. Ind(a, b) => (a) -> b; [Str]; Str)", true),
    ("Call(forall a b. Ind(a, b) => (a) -> b; Str; Int)", true),
    ("Call(forall a b. Ind(a, b) => (a) -> b; Int; Int)", false),
    (
        "Call(forall a. Sexp[A](a; Int) => (a) -> Int; A(Int) | B(Str); Int)",
        true,
    ),
    (
        "Call(forall a. Sexp[A](a; Int) => (a) -> Int; B(Str); Int)",
        false,
    ),
    ("Call(() -> Str; ; Str)", true),
    ("Call(Int; ; Int)", false),
    (
        "Call(forall a. Call(a; Int; Int) => (a) -> Int; (Int) -> Int; Int)",
        true,
    ),
    (
        "Call(forall a. Call(a; Int; Int) => (a) -> Int; (Str) -> Int; Int)",
        false,
    ),
    ("Call(mu f. (Int) -> f; Int; mu f. (Int) -> f)", true),
    ("Call(forall a b. Ind(b, a) => (a) -> a; Int; Int)", true),
];

fn ground_oracle() -> Check {
    let mut tags = TagTable::new();
    tags.intern("A", 1);
    tags.intern("B", 1);
    let table: Vec<AtomicConstraint> = GROUND_TABLE
        .iter()
        .map(|(src, _)| parse_constraint(src, &mut tags, false).expect(src))
        .collect();
    ensure(tags.len() == 2, || "table introduced extra tags".into())?;

    let mut pool = Vec::new();
    for c in &table {
        let ts: Vec<&TypeTerm> = match c {
            AtomicConstraint::Ind(a, b) => vec![a, b],
            AtomicConstraint::Call(f, xs, r) => std::iter::once(f).chain(xs).chain([r]).collect(),
            AtomicConstraint::Sexp(_, a, xs) => std::iter::once(a).chain(xs).collect(),
            _ => vec![],
        };
        ts.into_iter()
            .for_each(|t| oracle::closed_subterms(t, &mut pool));
    }

    let oracle_verdicts: Vec<bool> = table
        .iter()
        .map(|c| oracle::entails(c, &pool, ORACLE_MU_DEPTH))
        .collect();
    for (i, ((src, hand), o)) in GROUND_TABLE.iter().zip(&oracle_verdicts).enumerate() {
        ensure(hand == o, || {
            format!("oracle disagrees with hand verdict on #{i} {src}")
        })?;
    }

    let opts = SolveOptions {
        max_answers: 1,
        fuel: 200_000,
        ..SolveOptions::default()
    };
    let run_queue = |q: &[AtomicConstraint]| -> Result<bool, String> {
        let out = solve(q, &[], &tags, &opts);
        ensure(!out.fuel_exhausted(), || format!("fuel exhausted on {q:?}"))?;
        Ok(!out.answers.is_empty())
    };
    let mut queues = 0;
    let mut disagreements = Vec::new();
    for i in 0..table.len() {
        queues += 1;
        if run_queue(&table[i..=i])? != oracle_verdicts[i] {
            disagreements.push(GROUND_TABLE[i].0.to_string());
        }
        for j in 0..table.len() {
            queues += 1;
            let want = oracle_verdicts[i] && oracle_verdicts[j];
            if run_queue(&[table[i].clone(), table[j].clone()])? != want {
                disagreements.push(format!("{} & {}", GROUND_TABLE[i].0, GROUND_TABLE[j].0));
            }
        }
    }
    ensure(disagreements.is_empty(), || {
        format!(
            "{} disagreements, first: {}",
            disagreements.len(),
            disagreements[0]
        )
    })?;
    let holds = oracle_verdicts.iter().filter(|v| **v).count();
    Ok(format!(
        "{queues} queues, 100% agreement ({holds}/40 single constraints entailed)"
    ))
}

// --------------------------------------------------------------- determinism

fn corpus_report() -> Result<String, String> {
    let summary = run_corpus(corpus_dir(), &SolveOptions::default()).map_err(|e| e.to_string())?;
    let mut out = summary.render();
    for e in &summary.entries {
        ensure(!matches!(e.status, EntryStatus::Fail(_)), || {
            format!("{:?} failed", e.file)
        })?;
        out.push_str(&e.stats.to_lines());
    }
    out.push_str(&check_file(&corpus_dir().join("case.lama"), &SolveOptions::default()).render());
    Ok(out)
}

fn determinism() -> Check {
    let first = corpus_report()?;
    let second = corpus_report()?;
    ensure(first == second, || "reports differ between runs".into())?;
    Ok(format!(
        "two corpus runs byte-identical ({} bytes)",
        first.len()
    ))
}
