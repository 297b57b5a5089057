use std::fmt;

/// Source position, 1-based.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pos {
    pub line: u32,
    pub col: u32,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

/// Unique id of a binding occurrence after scope resolution.
pub type BinderId = u32;

/// An identifier occurrence. Equality ignores the position.
#[derive(Clone, Debug)]
pub struct Ident {
    pub name: String,
    pub id: Option<BinderId>,
    pub pos: Pos,
}

impl Ident {
    pub fn new(name: &str, pos: Pos) -> Self {
        Ident {
            name: name.to_string(),
            id: None,
            pos,
        }
    }

    /// Resolved binder id; panics on an unresolved identifier.
    pub fn binder(&self) -> BinderId {
        self.id
            .unwrap_or_else(|| panic!("unresolved identifier {}", self.name))
    }
}

impl PartialEq for Ident {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.id == other.id
    }
}

impl Eq for Ident {}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Mod,
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Ne,
    And,
    Or,
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Mod => "%",
            BinOp::Lt => "<",
            BinOp::Le => "<=",
            BinOp::Gt => ">",
            BinOp::Ge => ">=",
            BinOp::Eq => "==",
            BinOp::Ne => "!=",
            BinOp::And => "&&",
            BinOp::Or => "!!",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    IntLit(i64),
    StrLit(String),
    Var(Ident),
    Seq(Box<Expr>, Box<Expr>),
    Assign(Box<Expr>, Box<Expr>),
    If(Box<Expr>, Box<Expr>, Option<Box<Expr>>),
    While(Box<Expr>, Box<Expr>),
    For(Box<Expr>, Box<Expr>, Box<Expr>, Box<Expr>),
    Binop(BinOp, Box<Expr>, Box<Expr>),
    Call(Box<Expr>, Vec<Expr>),
    Index(Box<Expr>, Box<Expr>),
    Array(Vec<Expr>),
    Sexp(String, Vec<Expr>),
    Fun(Vec<Ident>, Box<Expr>),
    Case(Box<Expr>, Vec<(Pattern, Expr)>),
    Length(Box<Expr>),
    Scope(Vec<Decl>, Box<Expr>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DeclKind {
    Var,
    /// `fun f (..) {..}`: bound to a function literal and visible in its own
    /// body.
    Fun,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decl {
    pub kind: DeclKind,
    pub name: Ident,
    pub init: Option<Expr>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PatShape {
    Box,
    Unbox,
    Str,
    Array,
    Sexp,
    Fun,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Pattern {
    Wild,
    Bind(Ident),
    At(Ident, Box<Pattern>),
    Sexp(String, Vec<Pattern>),
    Array(Vec<Pattern>),
    Shape(PatShape),
    IntLit(i64),
}

/// A parsed program: one top-level scope.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Program {
    pub decls: Vec<Decl>,
    pub body: Expr,
}

impl Expr {
    pub fn seq(items: Vec<Expr>) -> Expr {
        let mut it = items.into_iter().rev();
        let last = it.next().unwrap_or(Expr::IntLit(0));
        it.fold(last, |acc, e| Expr::Seq(Box::new(e), Box::new(acc)))
    }
}
