use super::*;
use crate::frontend::load;
use crate::types::{Printer, TypeTerm};

fn gen(src: &str) -> GenResult {
    infer_program(&load(src).unwrap_or_else(|e| panic!("{e}")))
}

/// Roots then constraints, rendered with one shared namer.
fn render(g: &GenResult) -> (Vec<String>, Vec<String>) {
    let mut p = Printer::new(&g.table);
    let roots = g
        .roots
        .iter()
        .map(|(n, t)| format!("{n} : {}", p.ty(t)))
        .collect();
    let cs = g.constraints.iter().map(|c| p.constraint(c)).collect();
    (roots, cs)
}

#[test]
fn sexp_constraints_share_the_variable() {
    let g = gen(r#"var x = A (42); x := B ("text")"#);
    let (roots, cs) = render(&g);
    assert_eq!(roots, ["x : a"]);
    assert_eq!(cs, ["Sexp[A](a; Int)", "Sexp[B](a; Str)"]);
}

#[test]
fn index_assignment() {
    let g = gen("var xs, i; xs [i] := 42");
    let (roots, cs) = render(&g);
    assert_eq!(roots, ["xs : a", "i : Int"]);
    assert_eq!(cs, ["Ind(a, Int)"]);
}

#[test]
fn call_constraint() {
    let g = gen(r#"var f; f (42, "text")"#);
    let (roots, cs) = render(&g);
    assert_eq!(roots, ["f : a"]);
    assert_eq!(cs, ["Call(a; Int, Str; b)"]);
    assert_eq!(g.ty, TypeTerm::Var(Sym::new("t1")));
}

#[test]
fn literals_and_arrays() {
    let g = gen("42");
    assert_eq!(g.ty, TypeTerm::Int);
    assert!(g.constraints.is_empty());
    let g = gen("[10, 9, 8]");
    assert_eq!(g.ty, TypeTerm::array(TypeTerm::Int));
    assert!(g.constraints.is_empty());
    let g = gen(r#"[1, "2", Three]"#);
    assert!(g
        .constraints
        .contains(&AtomicConstraint::Eq(TypeTerm::Int, TypeTerm::Str)));
}

#[test]
fn identity_is_polymorphic() {
    let g = gen("var id = fun (x) { x }; 0");
    let (roots, cs) = render(&g);
    assert_eq!(roots, ["id : forall a. (a) -> a"]);
    assert!(cs.is_empty());
}

#[test]
fn size_generalizes_with_its_constraints() {
    let g = gen("fun size (l) {
           case l of
             Nil          -> 0
           | Cons (_, tl) -> 1 + size (tl)
           esac
         }");
    assert!(g.constraints.is_empty());
    let (roots, _) = render(&g);
    assert_eq!(
        roots,
        ["size : forall a b. Match(a; Nil, Cons(_, b @ _)) & Call((a) -> Int; b; Int) => (a) -> Int"]
    );
    assert_eq!(g.table.lookup("Cons", 2), Some(1));
}

#[test]
fn environment_variables_stay_free() {
    let g = gen("var y; var f = fun (x) { x + y }; 0");
    let (roots, cs) = render(&g);
    assert_eq!(roots, ["y : Int", "f : (Int) -> Int"]);
    assert!(cs.is_empty());
    let g = gen("var y; var f = fun (x) { y [x] }; 0");
    let (roots, _) = render(&g);
    assert_eq!(roots, ["y : a", "f : forall b. Ind(a, b) => (Int) -> b"]);
}

#[test]
fn residual_constraints_stay_outside() {
    let g = gen("var y; var f = fun () { y [0] := 1; 2 }; 0");
    let (roots, cs) = render(&g);
    assert_eq!(roots, ["y : a", "f : () -> Int"]);
    assert_eq!(cs, ["Ind(a, Int)"]);
}

#[test]
fn statements_are_int() {
    let g = gen("var i; for i := 0, i < 3, i := i + 1 do skip od");
    assert_eq!(g.ty, TypeTerm::Int);
    let g = gen("while 1 do 2 od");
    assert_eq!(g.ty, TypeTerm::Int);
    let g = gen("var x; x.length");
    let (_, cs) = render(&g);
    assert_eq!(cs, ["Match(a; #box)"]);
}

#[test]
fn case_patterns() {
    let g = gen("var x; case x of 1 -> 2 | y @ [z, 3] -> z | #unbox -> 0 esac");
    let (roots, cs) = render(&g);
    assert_eq!(roots, ["x : Int"]);
    assert_eq!(cs, ["Match(Int; _, a @ [Int @ _, #unbox], #unbox)"]);
}

#[test]
fn cyclic_equalities_become_obligations() {
    let g = gen("var x; x := [x]");
    let (_, cs) = render(&g);
    assert_eq!(cs, ["Eq(a, [a])"]);
}

#[test]
fn recursive_self_reference_is_monomorphic() {
    let g = gen("fun f (x) { f (x) }");
    let (roots, _) = render(&g);
    assert_eq!(roots, ["f : forall a b. Call((a) -> b; a; b) => (a) -> b"]);
}

#[test]
fn deterministic() {
    let src = "var n, x, i;
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
       x := [10, 9, 8, 7, 6, 5];
       x := sort (x)";
    let a = gen(src);
    let b = gen(src);
    assert_eq!(a.constraints, b.constraints);
    assert_eq!(a.roots, b.roots);
}

#[test]
fn builtins() {
    let g = gen("write (read ())");
    let (_, cs) = render(&g);
    assert_eq!(cs, ["Call(() -> Int; ; a)", "Call((Int) -> Int; a; b)"]);
}
