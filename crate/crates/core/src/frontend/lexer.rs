use super::ast::Pos;
use super::ParseError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Int(i64),
    Str(String),
    Lower(String),
    Upper(String),
    Punct(&'static str),
    Eof,
}

const PUNCT: [&str; 28] = [
    ":=", "==", "!=", "<=", ">=", "&&", "!!", "->", "<", ">", "+", "-", "*", "/", "%", "(", ")",
    "[", "]", "{", "}", ",", ";", ".", "|", "@", "#", "=",
];

pub const KEYWORDS: [&str; 24] = [
    "var", "fun", "if", "then", "elif", "else", "fi", "while", "do", "od", "for", "case", "of",
    "esac", "skip", "true", "false", "repeat", "until", "infix", "infixl", "infixr", "import",
    "public",
];

pub fn lex(src: &str) -> Result<Vec<(Pos, Tok)>, ParseError> {
    let mut lx = Lexer {
        chars: src.chars().collect(),
        i: 0,
        line: 1,
        col: 1,
    };
    let mut out = Vec::new();
    loop {
        lx.skip_trivia()?;
        let pos = lx.pos();
        let Some(c) = lx.peek() else {
            out.push((pos, Tok::Eof));
            return Ok(out);
        };
        let tok = if c.is_ascii_digit() {
            let mut n: i64 = 0;
            while let Some(d) = lx.peek().and_then(|c| c.to_digit(10)) {
                n = n
                    .checked_mul(10)
                    .and_then(|n| n.checked_add(d as i64))
                    .ok_or_else(|| ParseError::new(pos, "integer literal out of range"))?;
                lx.bump();
            }
            Tok::Int(n)
        } else if c.is_ascii_alphabetic() || c == '_' {
            let mut word = String::new();
            while let Some(c) = lx.peek().filter(|c| c.is_ascii_alphanumeric() || *c == '_') {
                word.push(c);
                lx.bump();
            }
            if c.is_ascii_uppercase() {
                Tok::Upper(word)
            } else {
                Tok::Lower(word)
            }
        } else if c == '"' {
            lx.bump();
            let mut s = String::new();
            loop {
                match lx.bump() {
                    None => return Err(ParseError::new(pos, "unterminated string literal")),
                    Some('"') => break,
                    Some('\\') => match lx.bump() {
                        Some('"') => s.push('"'),
                        Some('\\') => s.push('\\'),
                        _ => return Err(ParseError::new(lx.pos(), "unsupported string escape")),
                    },
                    Some(c) => s.push(c),
                }
            }
            Tok::Str(s)
        } else {
            let rest: String = lx.chars[lx.i..lx.chars.len().min(lx.i + 2)]
                .iter()
                .collect();
            match PUNCT.iter().find(|p| rest.starts_with(*p)) {
                Some(p) => {
                    for _ in 0..p.len() {
                        lx.bump();
                    }
                    Tok::Punct(p)
                }
                None => return Err(ParseError::new(pos, format!("unexpected character {c:?}"))),
            }
        };
        out.push((pos, tok));
    }
}

struct Lexer {
    chars: Vec<char>,
    i: usize,
    line: u32,
    col: u32,
}

impl Lexer {
    fn pos(&self) -> Pos {
        Pos {
            line: self.line,
            col: self.col,
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.i).copied()
    }

    fn peek2(&self) -> Option<char> {
        self.chars.get(self.i + 1).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.i += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn skip_trivia(&mut self) -> Result<(), ParseError> {
        loop {
            match (self.peek(), self.peek2()) {
                (Some(c), _) if c.is_whitespace() => {
                    self.bump();
                }
                (Some('-'), Some('-')) => {
                    while self.peek().is_some_and(|c| c != '\n') {
                        self.bump();
                    }
                }
                (Some('('), Some('*')) => {
                    let start = self.pos();
                    self.bump();
                    self.bump();
                    let mut depth = 1;
                    while depth > 0 {
                        match (self.peek(), self.peek2()) {
                            (None, _) => {
                                return Err(ParseError::new(start, "unterminated comment"))
                            }
                            (Some('*'), Some(')')) => {
                                self.bump();
                                self.bump();
                                depth -= 1;
                            }
                            (Some('('), Some('*')) => {
                                self.bump();
                                self.bump();
                                depth += 1;
                            }
                            _ => {
                                self.bump();
                            }
                        }
                    }
                }
                _ => return Ok(()),
            }
        }
    }
}
