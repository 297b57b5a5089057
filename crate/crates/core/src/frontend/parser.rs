use super::ast::{BinOp, Decl, DeclKind, Expr, Ident, PatShape, Pattern, Pos, Program};
use super::lexer::{lex, Tok, KEYWORDS};
use super::ParseError;

/// Parses a whole program.
///
/// Operator precedence, loosest first: `;`, `:=` (right associative), `!!`,
/// `&&`, comparisons (non-associative), `+ -`, `* / %`, unary `-`, postfix
/// call / index / `.length`.
pub fn parse(src: &str) -> Result<Program, ParseError> {
    let mut p = Parser {
        toks: lex(src)?,
        i: 0,
    };
    let (decls, body) = p.scope_parts()?;
    p.expect_eof()?;
    Ok(Program { decls, body })
}

/// Parses a single expression (used by tests and tools).
pub fn parse_expr(src: &str) -> Result<Expr, ParseError> {
    let mut p = Parser {
        toks: lex(src)?,
        i: 0,
    };
    let e = p.scope()?;
    p.expect_eof()?;
    Ok(e)
}

struct Parser {
    toks: Vec<(Pos, Tok)>,
    i: usize,
}

type PResult<T> = Result<T, ParseError>;

const CLOSERS: [&str; 10] = ["}", ")", "]", "od", "fi", "esac", "else", "elif", "do", "|"];

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.i].1
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.i + k).min(self.toks.len() - 1)].1
    }

    fn pos(&self) -> Pos {
        self.toks[self.i].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.i].1.clone();
        if self.i + 1 < self.toks.len() {
            self.i += 1;
        }
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> PResult<T> {
        Err(ParseError::new(self.pos(), msg))
    }

    fn describe(&self) -> String {
        match self.peek() {
            Tok::Int(n) => format!("`{n}`"),
            Tok::Str(s) => format!("string {s:?}"),
            Tok::Lower(w) | Tok::Upper(w) => format!("`{w}`"),
            Tok::Punct(p) => format!("`{p}`"),
            Tok::Eof => "end of input".to_string(),
        }
    }

    fn is(&self, p: &str) -> bool {
        matches!(self.peek(), Tok::Punct(q) if *q == p)
    }

    fn is_kw(&self, k: &str) -> bool {
        matches!(self.peek(), Tok::Lower(w) if w == k)
    }

    fn eat(&mut self, p: &str) -> bool {
        if self.is(p) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn eat_kw(&mut self, k: &str) -> bool {
        if self.is_kw(k) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, p: &str) -> PResult<()> {
        if self.eat(p) {
            Ok(())
        } else {
            self.err(format!("expected `{p}`, found {}", self.describe()))
        }
    }

    fn expect_kw(&mut self, k: &str) -> PResult<()> {
        if self.eat_kw(k) {
            Ok(())
        } else {
            self.err(format!("expected `{k}`, found {}", self.describe()))
        }
    }

    fn expect_eof(&self) -> PResult<()> {
        if matches!(self.peek(), Tok::Eof) {
            Ok(())
        } else {
            self.err(format!("unexpected {}", self.describe()))
        }
    }

    fn at_closer(&self) -> bool {
        match self.peek() {
            Tok::Eof => true,
            Tok::Punct(p) => CLOSERS.contains(p),
            Tok::Lower(w) => CLOSERS.contains(&w.as_str()),
            _ => false,
        }
    }

    fn ident(&mut self) -> PResult<Ident> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Lower(w) if w != "_" && !KEYWORDS.contains(&w.as_str()) => {
                self.bump();
                Ok(Ident::new(&w, pos))
            }
            _ => self.err(format!("expected an identifier, found {}", self.describe())),
        }
    }

    /// Declarations followed by a `;`-separated expression sequence.
    fn scope_parts(&mut self) -> PResult<(Vec<Decl>, Expr)> {
        let mut decls = Vec::new();
        loop {
            if self.eat_kw("var") {
                loop {
                    let name = self.ident()?;
                    let init = if self.eat("=") {
                        Some(self.expr()?)
                    } else {
                        None
                    };
                    decls.push(Decl {
                        kind: DeclKind::Var,
                        name,
                        init,
                    });
                    if !self.eat(",") {
                        break;
                    }
                }
                self.expect(";")?;
            } else if self.is_kw("fun") && matches!(self.peek_at(1), Tok::Lower(_)) {
                self.bump();
                let name = self.ident()?;
                let params = self.params()?;
                let body = self.braced_scope()?;
                decls.push(Decl {
                    kind: DeclKind::Fun,
                    name,
                    init: Some(Expr::Fun(params, Box::new(body))),
                });
                self.eat(";");
            } else {
                break;
            }
        }
        let mut items = Vec::new();
        if !self.at_closer() {
            items.push(self.expr()?);
            while self.eat(";") {
                if self.at_closer() {
                    break;
                }
                items.push(self.expr()?);
            }
        }
        Ok((decls, Expr::seq(items)))
    }

    fn scope(&mut self) -> PResult<Expr> {
        let (decls, body) = self.scope_parts()?;
        Ok(if decls.is_empty() {
            body
        } else {
            Expr::Scope(decls, Box::new(body))
        })
    }

    fn braced_scope(&mut self) -> PResult<Expr> {
        self.expect("{")?;
        let e = self.scope()?;
        self.expect("}")?;
        Ok(e)
    }

    fn params(&mut self) -> PResult<Vec<Ident>> {
        self.expect("(")?;
        let mut out = Vec::new();
        if self.eat(")") {
            return Ok(out);
        }
        loop {
            match self.peek() {
                Tok::Lower(_) => out.push(self.ident()?),
                _ => return self.err(format!("unsupported parameter {}", self.describe())),
            }
            if self.eat(")") {
                return Ok(out);
            }
            self.expect(",")?;
        }
    }

    pub fn expr(&mut self) -> PResult<Expr> {
        let lhs = self.or()?;
        if self.is(":=") {
            let pos = self.pos();
            self.bump();
            if !matches!(lhs, Expr::Var(_) | Expr::Index(..)) {
                return Err(ParseError::new(
                    pos,
                    "left side of `:=` must be a variable or an index",
                ));
            }
            let rhs = self.expr()?;
            return Ok(Expr::Assign(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn left_assoc(
        &mut self,
        ops: &[(&str, BinOp)],
        next: fn(&mut Parser) -> PResult<Expr>,
    ) -> PResult<Expr> {
        let mut lhs = next(self)?;
        'outer: loop {
            for (sym, op) in ops {
                if self.eat(sym) {
                    let rhs = next(self)?;
                    lhs = Expr::Binop(*op, Box::new(lhs), Box::new(rhs));
                    continue 'outer;
                }
            }
            return Ok(lhs);
        }
    }

    fn or(&mut self) -> PResult<Expr> {
        self.left_assoc(&[("!!", BinOp::Or)], Parser::and)
    }

    fn and(&mut self) -> PResult<Expr> {
        self.left_assoc(&[("&&", BinOp::And)], Parser::cmp)
    }

    fn cmp(&mut self) -> PResult<Expr> {
        let lhs = self.add()?;
        const OPS: [(&str, BinOp); 6] = [
            ("==", BinOp::Eq),
            ("!=", BinOp::Ne),
            ("<=", BinOp::Le),
            (">=", BinOp::Ge),
            ("<", BinOp::Lt),
            (">", BinOp::Gt),
        ];
        for (sym, op) in OPS {
            if self.eat(sym) {
                let rhs = self.add()?;
                return Ok(Expr::Binop(op, Box::new(lhs), Box::new(rhs)));
            }
        }
        Ok(lhs)
    }

    fn add(&mut self) -> PResult<Expr> {
        self.left_assoc(&[("+", BinOp::Add), ("-", BinOp::Sub)], Parser::mul)
    }

    fn mul(&mut self) -> PResult<Expr> {
        self.left_assoc(
            &[("*", BinOp::Mul), ("/", BinOp::Div), ("%", BinOp::Mod)],
            Parser::unary,
        )
    }

    fn unary(&mut self) -> PResult<Expr> {
        if self.eat("-") {
            return Ok(match self.unary()? {
                Expr::IntLit(n) => Expr::IntLit(-n),
                e => Expr::Binop(BinOp::Sub, Box::new(Expr::IntLit(0)), Box::new(e)),
            });
        }
        self.postfix()
    }

    fn postfix(&mut self) -> PResult<Expr> {
        let mut e = self.primary()?;
        loop {
            if self.eat("(") {
                let args = self.args(")")?;
                e = Expr::Call(Box::new(e), args);
            } else if self.eat("[") {
                let idx = self.expr()?;
                self.expect("]")?;
                e = Expr::Index(Box::new(e), Box::new(idx));
            } else if self.is(".") {
                let dot = self.pos();
                self.bump();
                if self.eat_kw("length") {
                    e = Expr::Length(Box::new(e));
                } else {
                    let member = match self.peek() {
                        Tok::Lower(w) | Tok::Upper(w) => w.clone(),
                        _ => String::new(),
                    };
                    return Err(ParseError::new(
                        dot,
                        format!("unsupported member access `.{member}`"),
                    ));
                }
            } else {
                return Ok(e);
            }
        }
    }

    fn args(&mut self, close: &str) -> PResult<Vec<Expr>> {
        let mut out = Vec::new();
        if self.eat(close) {
            return Ok(out);
        }
        loop {
            out.push(self.expr()?);
            if self.eat(close) {
                return Ok(out);
            }
            self.expect(",")?;
        }
    }

    fn primary(&mut self) -> PResult<Expr> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(Expr::IntLit(n))
            }
            Tok::Str(s) => {
                self.bump();
                Ok(Expr::StrLit(s))
            }
            Tok::Upper(label) => {
                self.bump();
                let args = if self.eat("(") {
                    self.args(")")?
                } else {
                    Vec::new()
                };
                Ok(Expr::Sexp(label, args))
            }
            Tok::Punct("[") => {
                self.bump();
                Ok(Expr::Array(self.args("]")?))
            }
            Tok::Punct("(") => {
                self.bump();
                let e = self.scope()?;
                self.expect(")")?;
                Ok(e)
            }
            Tok::Lower(w) => match w.as_str() {
                "skip" | "false" => {
                    self.bump();
                    Ok(Expr::IntLit(0))
                }
                "true" => {
                    self.bump();
                    Ok(Expr::IntLit(1))
                }
                "fun" => {
                    self.bump();
                    let params = self.params()?;
                    let body = self.braced_scope()?;
                    Ok(Expr::Fun(params, Box::new(body)))
                }
                "if" => {
                    self.bump();
                    self.if_rest()
                }
                "while" => {
                    self.bump();
                    let cond = self.expr()?;
                    self.expect_kw("do")?;
                    let body = self.scope()?;
                    self.expect_kw("od")?;
                    Ok(Expr::While(Box::new(cond), Box::new(body)))
                }
                "for" => {
                    self.bump();
                    let init = self.expr()?;
                    self.expect(",")?;
                    let cond = self.expr()?;
                    self.expect(",")?;
                    let step = self.expr()?;
                    self.expect_kw("do")?;
                    let body = self.scope()?;
                    self.expect_kw("od")?;
                    Ok(Expr::For(
                        Box::new(init),
                        Box::new(cond),
                        Box::new(step),
                        Box::new(body),
                    ))
                }
                "case" => {
                    self.bump();
                    let scrutinee = self.expr()?;
                    self.expect_kw("of")?;
                    let mut branches = Vec::new();
                    loop {
                        let pat = self.pattern()?;
                        self.expect("->")?;
                        let body = self.scope()?;
                        branches.push((pat, body));
                        if !self.eat("|") {
                            break;
                        }
                    }
                    self.expect_kw("esac")?;
                    Ok(Expr::Case(Box::new(scrutinee), branches))
                }
                "infix" | "infixl" | "infixr" | "import" | "public" | "repeat" => {
                    Err(ParseError::new(pos, format!("unsupported construct `{w}`")))
                }
                _ if KEYWORDS.contains(&w.as_str()) || w == "_" => {
                    self.err(format!("unexpected {}", self.describe()))
                }
                _ => Ok(Expr::Var(self.ident()?)),
            },
            _ => self.err(format!("expected an expression, found {}", self.describe())),
        }
    }

    fn if_rest(&mut self) -> PResult<Expr> {
        let cond = self.expr()?;
        self.expect_kw("then")?;
        let then = self.scope()?;
        let els = if self.eat_kw("elif") {
            Some(Box::new(self.if_rest_open()?))
        } else if self.eat_kw("else") {
            Some(Box::new(self.scope()?))
        } else {
            None
        };
        self.expect_kw("fi")?;
        Ok(Expr::If(Box::new(cond), Box::new(then), els))
    }

    /// An `elif` chain shares the closing `fi` of its head.
    fn if_rest_open(&mut self) -> PResult<Expr> {
        let cond = self.expr()?;
        self.expect_kw("then")?;
        let then = self.scope()?;
        let els = if self.eat_kw("elif") {
            Some(Box::new(self.if_rest_open()?))
        } else if self.eat_kw("else") {
            Some(Box::new(self.scope()?))
        } else {
            None
        };
        Ok(Expr::If(Box::new(cond), Box::new(then), els))
    }

    fn pattern(&mut self) -> PResult<Pattern> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Lower(w) if w == "_" => {
                self.bump();
                Ok(Pattern::Wild)
            }
            Tok::Lower(w) if w == "true" || w == "false" => {
                self.bump();
                Ok(Pattern::IntLit(if w == "true" { 1 } else { 0 }))
            }
            Tok::Lower(_) => {
                let id = self.ident()?;
                if self.eat("@") {
                    let p = self.pattern()?;
                    Ok(Pattern::At(id, Box::new(p)))
                } else {
                    Ok(Pattern::Bind(id))
                }
            }
            Tok::Upper(label) => {
                self.bump();
                let ps = if self.eat("(") {
                    self.patterns(")")?
                } else {
                    Vec::new()
                };
                Ok(Pattern::Sexp(label, ps))
            }
            Tok::Punct("[") => {
                self.bump();
                Ok(Pattern::Array(self.patterns("]")?))
            }
            Tok::Punct("#") => {
                self.bump();
                let shape = match self.peek() {
                    Tok::Lower(w) => match w.as_str() {
                        "box" => PatShape::Box,
                        "unbox" => PatShape::Unbox,
                        "string" | "str" => PatShape::Str,
                        "array" => PatShape::Array,
                        "sexp" => PatShape::Sexp,
                        "fun" => PatShape::Fun,
                        other => return self.err(format!("unknown shape pattern #{other}")),
                    },
                    _ => return self.err("expected a shape name after `#`"),
                };
                self.bump();
                Ok(Pattern::Shape(shape))
            }
            Tok::Int(n) => {
                self.bump();
                Ok(Pattern::IntLit(n))
            }
            Tok::Punct("-") if matches!(self.peek_at(1), Tok::Int(_)) => {
                self.bump();
                match self.bump() {
                    Tok::Int(n) => Ok(Pattern::IntLit(-n)),
                    _ => unreachable!(),
                }
            }
            Tok::Str(_) => Err(ParseError::new(pos, "string patterns are not supported")),
            _ => self.err(format!("expected a pattern, found {}", self.describe())),
        }
    }

    fn patterns(&mut self, close: &str) -> PResult<Vec<Pattern>> {
        let mut out = Vec::new();
        if self.eat(close) {
            return Ok(out);
        }
        loop {
            out.push(self.pattern()?);
            if self.eat(close) {
                return Ok(out);
            }
            self.expect(",")?;
        }
    }
}
