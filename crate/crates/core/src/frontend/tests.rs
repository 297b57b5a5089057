use proptest::prelude::*;

use super::*;

const SIZE: &str = "
fun size (l) {
  case l of
    Nil          -> 0
  | Cons (_, tl) -> 1 + size (tl)
  esac
}";

fn id(name: &str) -> Ident {
    Ident::new(name, Pos::default())
}

fn var(name: &str) -> Expr {
    Expr::Var(id(name))
}

#[test]
fn var_init_and_assign() {
    let p = parse(r#"var x = A (42); x := B ("text")"#).unwrap();
    assert_eq!(p.decls.len(), 1);
    assert_eq!(
        p.decls[0].init,
        Some(Expr::Sexp("A".into(), vec![Expr::IntLit(42)]))
    );
    assert_eq!(
        p.body,
        Expr::Assign(
            Box::new(var("x")),
            Box::new(Expr::Sexp("B".into(), vec![Expr::StrLit("text".into())]))
        )
    );
}

#[test]
fn size_function_shape() {
    let p = parse(SIZE).unwrap();
    let Some(Expr::Fun(params, body)) = &p.decls[0].init else {
        panic!("not a function")
    };
    assert_eq!(params.len(), 1);
    let Expr::Case(_, branches) = body.as_ref() else {
        panic!("not a case")
    };
    assert_eq!(branches.len(), 2);
    assert_eq!(branches[0].0, Pattern::Sexp("Nil".into(), vec![]));
    assert_eq!(
        branches[1].0,
        Pattern::Sexp("Cons".into(), vec![Pattern::Wild, Pattern::Bind(id("tl"))])
    );
}

#[test]
fn index_then_call() {
    let e = parse_expr("x [0] ()").unwrap();
    assert_eq!(
        e,
        Expr::Call(
            Box::new(Expr::Index(Box::new(var("x")), Box::new(Expr::IntLit(0)))),
            vec![]
        )
    );
}

#[test]
fn precedence() {
    let e = parse_expr("1 + 2 * 3 < 4 - 5 && 1").unwrap();
    assert_eq!(pretty_expr(&e), "(((1 + (2 * 3)) < (4 - 5)) && 1)");
    let e = parse_expr("a := b := 1").unwrap();
    assert_eq!(pretty_expr(&e), "(a := (b := 1))");
    assert!(parse_expr("1 < 2 < 3").is_err());
}

#[test]
fn unsupported_constructs() {
    let err = parse("Array.lookup (o, [])").unwrap_err();
    assert_eq!((err.line, err.col), (1, 6));
    assert!(parse(r#"case x of "a" -> 1 esac"#).is_err());
    assert!(parse("fun f (+, x) { x }").is_err());
}

#[test]
fn recursion_resolves_to_declaration() {
    let r = load(SIZE).unwrap();
    let decl_id = r.program.decls[0].name.binder();
    let mut calls = Vec::new();
    collect_vars(&r.program.decls[0].init.clone().unwrap(), &mut calls);
    let size_use = calls.iter().find(|i| i.name == "size").unwrap();
    assert_eq!(size_use.binder(), decl_id);
}

#[test]
fn closure_captures_enclosing_parameter() {
    let src = "fun f (o, x, y) { [fun (x, y) {x + y}, fun (x) {x - y}] }";
    let r = load(src).unwrap();
    let Some(Expr::Fun(outer, body)) = &r.program.decls[0].init else {
        panic!()
    };
    let Expr::Array(items) = body.as_ref() else {
        panic!()
    };
    let Expr::Fun(_, inner) = &items[1] else {
        panic!()
    };
    let mut uses = Vec::new();
    collect_vars(inner, &mut uses);
    let y = uses.iter().find(|i| i.name == "y").unwrap();
    assert_eq!(y.binder(), outer[2].binder());
    assert_eq!(r.binder(y.binder()).kind, BinderKind::Param);
}

#[test]
fn unbound_identifier() {
    match load("var x; x := q + 1") {
        Err(FrontendError::Resolve(ResolveError::Unbound { name, pos })) => {
            assert_eq!(name, "q");
            assert_eq!(pos, Pos { line: 1, col: 13 });
        }
        other => panic!("unexpected {other:?}"),
    }
    assert!(matches!(
        load("var x, x; 0"),
        Err(FrontendError::Resolve(ResolveError::Duplicate { .. }))
    ));
}

#[test]
fn builtins_and_branch_scoping() {
    let r = load("var x = read (); case x of y -> write (y) esac").unwrap();
    let mut uses = Vec::new();
    collect_vars(&r.program.decls[0].init.clone().unwrap(), &mut uses);
    assert_eq!(uses[0].binder(), BUILTIN_READ);
    assert!(load("case 1 of y -> y | _ -> y esac").is_err());
}

#[test]
fn corpus_style_programs_parse() {
    let srcs = [
        "var n, x, i;
         fun sort (x) {
           var i, j, y, n = x.length;
           for i := 0, i < n, i := i + 1 do
             for j := i + 1, j < n, j := j + 1 do
               if x[j] < x[i] then y := x[i]; x[i] := x[j]; x[j] := y fi
             od
           od;
           x
         }
         n := read ();
         x := [10, 9, 8];
         x := sort (x);
         for i := 0, i < x.length, i := i + 1 do write (x[i]) od",
        "var f = fun () {
           fun f (x) { fun () { write (x) ; f (x + 1) } }
           f (0)
         } () ;
         f () () () ()",
        "var x = [fun () { x [0] () }] ; x [0] ()",
        "if 1 then 2 elif 3 then 4 else 5 fi; while 0 do skip od",
        "case 1 of -1 -> 0 | #unbox -> 1 | x @ [_, #box] -> 2 | A -> 3 esac",
    ];
    for src in srcs {
        load(src).unwrap_or_else(|e| panic!("{e}\n{src}"));
    }
}

#[test]
fn comments_are_skipped() {
    let p = parse("-- line\n(* block (* nested *) *) 1").unwrap();
    assert_eq!(p.body, Expr::IntLit(1));
}

fn collect_vars(e: &Expr, out: &mut Vec<Ident>) {
    match e {
        Expr::Var(i) => out.push(i.clone()),
        Expr::IntLit(_) | Expr::StrLit(_) => {}
        Expr::Seq(a, b)
        | Expr::Assign(a, b)
        | Expr::While(a, b)
        | Expr::Index(a, b)
        | Expr::Binop(_, a, b) => {
            collect_vars(a, out);
            collect_vars(b, out);
        }
        Expr::If(c, t, f) => {
            collect_vars(c, out);
            collect_vars(t, out);
            if let Some(f) = f {
                collect_vars(f, out);
            }
        }
        Expr::For(a, b, c, d) => [a, b, c, d].into_iter().for_each(|x| collect_vars(x, out)),
        Expr::Call(f, xs) => {
            collect_vars(f, out);
            xs.iter().for_each(|x| collect_vars(x, out));
        }
        Expr::Array(xs) | Expr::Sexp(_, xs) => xs.iter().for_each(|x| collect_vars(x, out)),
        Expr::Fun(_, b) | Expr::Length(b) => collect_vars(b, out),
        Expr::Case(s, bs) => {
            collect_vars(s, out);
            bs.iter().for_each(|(_, b)| collect_vars(b, out));
        }
        Expr::Scope(ds, b) => {
            ds.iter()
                .filter_map(|d| d.init.as_ref())
                .for_each(|x| collect_vars(x, out));
            collect_vars(b, out);
        }
    }
}

fn arb_name() -> impl Strategy<Value = String> {
    prop::sample::select(vec!["a", "b", "xs", "f"]).prop_map(String::from)
}

fn arb_label() -> impl Strategy<Value = String> {
    prop::sample::select(vec!["Nil", "Cons", "A"]).prop_map(String::from)
}

fn arb_pattern() -> impl Strategy<Value = Pattern> {
    let leaf = prop_oneof![
        Just(Pattern::Wild),
        arb_name().prop_map(|n| Pattern::Bind(id(&n))),
        (-3i64..3).prop_map(Pattern::IntLit),
        Just(Pattern::Shape(PatShape::Box)),
        Just(Pattern::Shape(PatShape::Str)),
    ];
    leaf.prop_recursive(3, 12, 3, |inner| {
        prop_oneof![
            (arb_label(), prop::collection::vec(inner.clone(), 0..3))
                .prop_map(|(l, ps)| Pattern::Sexp(l, ps)),
            prop::collection::vec(inner.clone(), 0..3).prop_map(Pattern::Array),
            (arb_name(), inner).prop_map(|(n, p)| Pattern::At(id(&n), Box::new(p))),
        ]
    })
}

fn arb_expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        (-5i64..100).prop_map(Expr::IntLit),
        "[a-z\"\\\\ ]{0,4}".prop_map(Expr::StrLit),
        arb_name().prop_map(|n| var(&n)),
        arb_label().prop_map(|l| Expr::Sexp(l, vec![])),
    ];
    leaf.prop_recursive(4, 32, 3, |inner| {
        let b = || inner.clone().prop_map(Box::new);
        let ops = prop::sample::select(vec![
            BinOp::Add,
            BinOp::Mul,
            BinOp::Lt,
            BinOp::And,
            BinOp::Or,
            BinOp::Sub,
        ]);
        prop_oneof![
            (b(), b()).prop_map(|(x, y)| Expr::Seq(x, y)),
            (arb_name(), b()).prop_map(|(n, y)| Expr::Assign(Box::new(var(&n)), y)),
            (b(), b(), prop::option::of(b())).prop_map(|(c, t, f)| Expr::If(c, t, f)),
            (b(), b()).prop_map(|(c, x)| Expr::While(c, x)),
            (b(), b(), b(), b()).prop_map(|(i, c, s, x)| Expr::For(i, c, s, x)),
            (ops, b(), b()).prop_map(|(o, x, y)| Expr::Binop(o, x, y)),
            (b(), prop::collection::vec(inner.clone(), 0..3)).prop_map(|(f, xs)| Expr::Call(f, xs)),
            (b(), b()).prop_map(|(x, i)| Expr::Index(x, i)),
            prop::collection::vec(inner.clone(), 0..3).prop_map(Expr::Array),
            (arb_label(), prop::collection::vec(inner.clone(), 1..3))
                .prop_map(|(l, xs)| Expr::Sexp(l, xs)),
            (prop::collection::vec(arb_name(), 0..3), b())
                .prop_map(|(ps, x)| Expr::Fun(ps.iter().map(|p| id(p)).collect(), x)),
            (
                b(),
                prop::collection::vec((arb_pattern(), inner.clone()), 1..3)
            )
                .prop_map(|(s, bs)| Expr::Case(s, bs)),
            b().prop_map(Expr::Length),
            (arb_name(), prop::option::of(inner.clone()), b()).prop_map(
                |(n, init, x)| Expr::Scope(
                    vec![Decl {
                        kind: DeclKind::Var,
                        name: id(&n),
                        init
                    }],
                    x
                )
            ),
            (arb_name(), b()).prop_map(|(n, x)| Expr::Scope(
                vec![Decl {
                    kind: DeclKind::Fun,
                    name: id(&n),
                    init: Some(Expr::Fun(vec![id("a")], x.clone()))
                }],
                x
            )),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn pretty_print_round_trips(e in arb_expr()) {
        let printed = pretty_expr(&e);
        let reparsed = parse_expr(&printed).map_err(|err| TestCaseError::fail(format!("{err}: {printed}")))?;
        prop_assert_eq!(&reparsed, &e, "{}", printed);
        prop_assert_eq!(pretty_expr(&reparsed), printed);
    }
}
