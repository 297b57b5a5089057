use std::fmt::Write;

use super::ast::*;

/// Renders a program in concrete syntax that parses back to the same tree.
pub fn pretty_program(p: &Program) -> String {
    let mut out = String::new();
    decls(&mut out, &p.decls);
    expr(&mut out, &p.body);
    out
}

pub fn pretty_expr(e: &Expr) -> String {
    let mut out = String::new();
    expr(&mut out, e);
    out
}

fn decls(out: &mut String, ds: &[Decl]) {
    for d in ds {
        match (d.kind, &d.init) {
            (DeclKind::Fun, Some(Expr::Fun(params, body))) => {
                write!(out, "fun {} (", d.name.name).unwrap();
                idents(out, params);
                out.push_str(") { ");
                expr(out, body);
                out.push_str(" } ");
            }
            (_, init) => {
                write!(out, "var {}", d.name.name).unwrap();
                if let Some(init) = init {
                    out.push_str(" = ");
                    expr(out, init);
                }
                out.push_str("; ");
            }
        }
    }
}

fn idents(out: &mut String, ids: &[Ident]) {
    for (i, id) in ids.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        out.push_str(&id.name);
    }
}

fn list(out: &mut String, es: &[Expr]) {
    for (i, e) in es.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        expr(out, e);
    }
}

fn postfix_subject(out: &mut String, e: &Expr) {
    if matches!(e, Expr::Sexp(..)) {
        out.push('(');
        expr(out, e);
        out.push(')');
    } else {
        expr(out, e);
    }
}

fn expr(out: &mut String, e: &Expr) {
    match e {
        Expr::IntLit(n) if *n < 0 => write!(out, "(-{})", n.unsigned_abs()).unwrap(),
        Expr::IntLit(n) => write!(out, "{n}").unwrap(),
        Expr::StrLit(s) => {
            out.push('"');
            for c in s.chars() {
                if c == '"' || c == '\\' {
                    out.push('\\');
                }
                out.push(c);
            }
            out.push('"');
        }
        Expr::Var(id) => out.push_str(&id.name),
        Expr::Seq(a, b) => {
            out.push('(');
            expr(out, a);
            out.push_str("; ");
            expr(out, b);
            out.push(')');
        }
        Expr::Assign(a, b) => {
            out.push('(');
            expr(out, a);
            out.push_str(" := ");
            expr(out, b);
            out.push(')');
        }
        Expr::If(c, t, f) => {
            out.push_str("if ");
            expr(out, c);
            out.push_str(" then ");
            expr(out, t);
            if let Some(f) = f {
                out.push_str(" else ");
                expr(out, f);
            }
            out.push_str(" fi");
        }
        Expr::While(c, b) => {
            out.push_str("while ");
            expr(out, c);
            out.push_str(" do ");
            expr(out, b);
            out.push_str(" od");
        }
        Expr::For(i, c, s, b) => {
            out.push_str("for ");
            expr(out, i);
            out.push_str(", ");
            expr(out, c);
            out.push_str(", ");
            expr(out, s);
            out.push_str(" do ");
            expr(out, b);
            out.push_str(" od");
        }
        Expr::Binop(op, a, b) => {
            out.push('(');
            expr(out, a);
            write!(out, " {} ", op.symbol()).unwrap();
            expr(out, b);
            out.push(')');
        }
        Expr::Call(f, args) => {
            postfix_subject(out, f);
            out.push_str(" (");
            list(out, args);
            out.push(')');
        }
        Expr::Index(a, i) => {
            postfix_subject(out, a);
            out.push_str(" [");
            expr(out, i);
            out.push(']');
        }
        Expr::Array(xs) => {
            out.push('[');
            list(out, xs);
            out.push(']');
        }
        Expr::Sexp(label, xs) => {
            out.push_str(label);
            if !xs.is_empty() {
                out.push_str(" (");
                list(out, xs);
                out.push(')');
            }
        }
        Expr::Fun(params, body) => {
            out.push_str("fun (");
            idents(out, params);
            out.push_str(") { ");
            expr(out, body);
            out.push_str(" }");
        }
        Expr::Case(s, branches) => {
            out.push_str("case ");
            expr(out, s);
            out.push_str(" of ");
            for (i, (p, b)) in branches.iter().enumerate() {
                if i > 0 {
                    out.push_str(" | ");
                }
                pattern(out, p);
                out.push_str(" -> ");
                expr(out, b);
            }
            out.push_str(" esac");
        }
        Expr::Length(x) => {
            postfix_subject(out, x);
            out.push_str(".length");
        }
        Expr::Scope(ds, body) => {
            out.push('(');
            decls(out, ds);
            expr(out, body);
            out.push(')');
        }
    }
}

fn pattern(out: &mut String, p: &Pattern) {
    match p {
        Pattern::Wild => out.push('_'),
        Pattern::Bind(id) => out.push_str(&id.name),
        Pattern::At(id, inner) => {
            write!(out, "{} @ ", id.name).unwrap();
            pattern(out, inner);
        }
        Pattern::Sexp(label, ps) => {
            out.push_str(label);
            if !ps.is_empty() {
                out.push_str(" (");
                patterns(out, ps);
                out.push(')');
            }
        }
        Pattern::Array(ps) => {
            out.push('[');
            patterns(out, ps);
            out.push(']');
        }
        Pattern::Shape(s) => out.push_str(match s {
            PatShape::Box => "#box",
            PatShape::Unbox => "#unbox",
            PatShape::Str => "#string",
            PatShape::Array => "#array",
            PatShape::Sexp => "#sexp",
            PatShape::Fun => "#fun",
        }),
        Pattern::IntLit(n) => write!(out, "{n}").unwrap(),
    }
}

fn patterns(out: &mut String, ps: &[Pattern]) {
    for (i, p) in ps.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        pattern(out, p);
    }
}
