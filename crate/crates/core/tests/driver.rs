use lama_infer::driver::{
    check_source, compare, emit_constraints, parse_expectation, Mismatch, RunStats, Verdict,
};
use lama_infer::solver::SolveOptions;

fn check(src: &str) -> lama_infer::driver::Report {
    check_source(src, &SolveOptions::default())
}

#[test]
fn fresh_stats_are_zero() {
    assert_eq!(
        RunStats::default().to_lines(),
        "constraints-generated=0\nconstraints-dispatched=0\nengine-unifications=0\n\
         answers-requested=0\nanswers-found=0\nfuel-used=0\n"
    );
}

#[test]
fn typed_runs_dispatch_every_generated_constraint() {
    let srcs = [
        "var x = A (42); x := B (\"text\")",
        "fun size (l) { case l of Nil -> 0 | Cons (_, tl) -> 1 + size (tl) esac } size (Cons (1, Nil))",
        "var id = fun (x) { x }; id (1); id (\"s\")",
        "var a = [1, 2, 3], s = 0, i; for i := 0, i < a.length, i := i + 1 do s := s + a [i] od",
    ];
    for src in srcs {
        let r = check(src);
        assert_eq!(r.verdict, Verdict::Typed, "{src}");
        assert!(
            r.stats.constraints_dispatched >= r.stats.constraints_generated,
            "{src}"
        );
        assert_eq!(r.stats.answers_found, 1);
    }
}

#[test]
fn ill_typed_programs() {
    let cases = [
        (
            "fun size (l) { case l of Nil -> 0 | Cons (_, tl) -> 1 + size (tl) esac } size (1)",
            "Call",
        ),
        ("var f = fun (x) { x + 1 }; f (\"s\")", "Call"),
        ("var x = 1; x (2)", "Call"),
        ("var s = \"abc\"; s.length; s [0] := A", "Sexp"),
        ("case 1 of #str -> 1 esac", "Match"),
    ];
    for (src, kind) in cases {
        let r = check(src);
        assert_eq!(r.verdict, Verdict::IllTyped, "{src}");
        let failing = r
            .failing
            .unwrap_or_else(|| panic!("no failing constraint for {src}"));
        assert_eq!(failing.kind_name(), kind, "{src}");
    }
}

#[test]
fn malformed_reports_position() {
    let r = check("var x; x := q + 1");
    assert_eq!(r.verdict, Verdict::Malformed);
    assert_eq!(
        r.render(),
        "verdict: malformed\nerror: resolution error at 1:13: unbound identifier `q`\n"
    );
    assert!(emit_constraints("fun (").is_err());
}

#[test]
fn box_matches_exclude_int() {
    let r = check("var x; x.length");
    assert_eq!(r.verdict, Verdict::Typed);
    let r = check("var x = 5; x.length");
    assert_eq!(r.verdict, Verdict::IllTyped);
}

#[test]
fn expectation_parsing_and_comparison() {
    let r = check("var y = Nil, i; for i := 0, i < 3, i := i + 1 do y := Cons (i, y) od");
    assert_eq!(r.verdict, Verdict::Typed);
    let folded = parse_expectation("verdict: typed\ny : mu a. Cons(Int, a) | Nil\n").unwrap();
    assert_eq!(compare(&r, &folded), Ok(()));
    let wrong = parse_expectation("verdict: typed\ny : [Int]\n").unwrap();
    assert!(matches!(compare(&r, &wrong), Err(Mismatch::Differs(_))));
    let corrupt = parse_expectation("verdict: typed\ny : Cons(\n").unwrap();
    assert!(matches!(
        compare(&r, &corrupt),
        Err(Mismatch::BadExpectation(_))
    ));
    assert!(parse_expectation("").is_err());
    assert!(parse_expectation("verdict: fine").is_err());
}
