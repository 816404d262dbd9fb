//! Expression syntax.
//!
//! ```text
//! sum    := ['-'] sharp (('+' | '-') sharp)*
//! sharp  := dot ('#' sharp)?            right-associative: r # (s # x)
//! dot    := circ ('*' circ)*
//! circ   := power ('o' power)*
//! power  := atom ('^' INT)?
//! atom   := INT | E0_n | E1_n | '[' INT ']' | 'z[' INT ']' | '(' sum ')'
//! ```

use std::collections::BTreeSet;
use std::fmt;

use eops::{Entry, Prime};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Int(u64),
    Gen(Entry),
    Bracket(u64),
    Class(u32),
    Neg(Box<Expr>),
    Sum(Box<Expr>, Box<Expr>),
    Dot(Box<Expr>, Box<Expr>),
    Circ(Box<Expr>, Box<Expr>),
    Sharp(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

impl Expr {
    /// Sphere dimensions named by `z[d]` symbols, without repeats.
    pub fn classes(&self) -> BTreeSet<u32> {
        let mut out = BTreeSet::new();
        self.collect_classes(&mut out);
        out
    }

    fn collect_classes(&self, out: &mut BTreeSet<u32>) {
        match self {
            Expr::Class(d) => {
                out.insert(*d);
            }
            Expr::Neg(a) | Expr::Pow(a, _) => a.collect_classes(out),
            Expr::Sum(a, b) | Expr::Dot(a, b) | Expr::Circ(a, b) | Expr::Sharp(a, b) => {
                a.collect_classes(out);
                b.collect_classes(out);
            }
            Expr::Int(_) | Expr::Gen(_) | Expr::Bracket(_) => {}
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    pub offset: usize,
    pub expected: Vec<&'static str>,
    pub found: String,
    pub note: Option<String>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at byte {}: expected {}, found {}", self.offset, self.expected.join(" or "), self.found)?;
        if let Some(note) = &self.note {
            write!(f, " ({note})")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(u64),
    Gen(u8, u32),
    Class(u32),
    LBracket,
    RBracket,
    LParen,
    RParen,
    Plus,
    Minus,
    Star,
    Circ,
    Sharp,
    Caret,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Int(n) => format!("integer {n}"),
            Tok::Gen(e, n) => format!("E{e}_{n}"),
            Tok::Class(d) => format!("z[{d}]"),
            Tok::LBracket => "'['".into(),
            Tok::RBracket => "']'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Circ => "'o'".into(),
            Tok::Sharp => "'#'".into(),
            Tok::Caret => "'^'".into(),
            Tok::End => "end of input".into(),
        }
    }
}

const ATOM: &[&str] = &["integer", "E0_n", "E1_n", "[n]", "z[d]", "'('"];

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let digits = |from: usize| -> (usize, Option<u64>) {
        let mut j = from;
        while j < bytes.len() && bytes[j].is_ascii_digit() {
            j += 1;
        }
        (j, text[from..j].parse().ok())
    };
    let number_error = |at: usize| ParseError {
        offset: at,
        expected: vec!["integer"],
        found: text[at..].chars().next().map_or("end of input".into(), |c| format!("{c:?}")),
        note: None,
    };
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let single = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'[' => Some(Tok::LBracket),
            b']' => Some(Tok::RBracket),
            b'(' => Some(Tok::LParen),
            b')' => Some(Tok::RParen),
            b'+' => Some(Tok::Plus),
            b'-' => Some(Tok::Minus),
            b'*' => Some(Tok::Star),
            b'#' => Some(Tok::Sharp),
            b'^' => Some(Tok::Caret),
            _ => None,
        };
        if let Some(t) = single {
            out.push((start, t));
            i += 1;
            continue;
        }
        let word_end = |from: usize| from >= bytes.len() || !bytes[from].is_ascii_alphanumeric() && bytes[from] != b'_';
        if c.is_ascii_digit() {
            let (j, v) = digits(i);
            let v = v.ok_or_else(|| ParseError { note: Some("integer too large".into()), ..number_error(i) })?;
            out.push((start, Tok::Int(v)));
            i = j;
        } else if c == b'o' && word_end(i + 1) {
            out.push((start, Tok::Circ));
            i += 1;
        } else if c == b'E' && matches!(bytes.get(i + 1), Some(b'0' | b'1')) && bytes.get(i + 2) == Some(&b'_') {
            let eps = bytes[i + 1] - b'0';
            let (j, v) = digits(i + 3);
            let n = v.and_then(|v| u32::try_from(v).ok()).ok_or_else(|| number_error(i + 3))?;
            if !word_end(j) {
                return Err(ParseError {
                    offset: j,
                    expected: vec!["operator"],
                    found: format!("{:?}", bytes[j] as char),
                    note: None,
                });
            }
            out.push((start, Tok::Gen(eps, n)));
            i = j;
        } else if c == b'z' && bytes.get(i + 1) == Some(&b'[') {
            let (j, v) = digits(i + 2);
            let d = v.and_then(|v| u32::try_from(v).ok()).ok_or_else(|| number_error(i + 2))?;
            if bytes.get(j) != Some(&b']') {
                return Err(ParseError { expected: vec!["']'"], ..number_error(j) });
            }
            out.push((start, Tok::Class(d)));
            i = j + 1;
        } else {
            let found = text[i..].chars().next().expect("in bounds");
            let mut expected = ATOM.to_vec();
            expected.extend(["'+'", "'*'", "'o'", "'#'"]);
            return Err(ParseError { offset: i, expected, found: format!("{found:?}"), note: None });
        }
    }
    out.push((text.len(), Tok::End));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    p: Prime,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].1
    }

    fn offset(&self) -> usize {
        self.toks[self.at].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].1.clone();
        if t != Tok::End {
            self.at += 1;
        }
        t
    }

    fn error(&self, expected: &[&'static str]) -> ParseError {
        ParseError { offset: self.offset(), expected: expected.to_vec(), found: self.peek().describe(), note: None }
    }

    fn sum(&mut self) -> Result<Expr, ParseError> {
        let mut acc = if *self.peek() == Tok::Minus {
            self.bump();
            Expr::Neg(Box::new(self.sharp()?))
        } else {
            self.sharp()?
        };
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = Expr::Sum(Box::new(acc), Box::new(self.sharp()?));
                }
                Tok::Minus => {
                    self.bump();
                    acc = Expr::Sum(Box::new(acc), Box::new(Expr::Neg(Box::new(self.sharp()?))));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn sharp(&mut self) -> Result<Expr, ParseError> {
        let left = self.dot()?;
        if *self.peek() == Tok::Sharp {
            self.bump();
            return Ok(Expr::Sharp(Box::new(left), Box::new(self.sharp()?)));
        }
        Ok(left)
    }

    fn dot(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.circ()?;
        while *self.peek() == Tok::Star {
            self.bump();
            acc = Expr::Dot(Box::new(acc), Box::new(self.circ()?));
        }
        Ok(acc)
    }

    fn circ(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.power()?;
        while *self.peek() == Tok::Circ {
            self.bump();
            acc = Expr::Circ(Box::new(acc), Box::new(self.power()?));
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if *self.peek() == Tok::Caret {
            self.bump();
            let at = self.offset();
            return match self.bump() {
                Tok::Int(n) => match u32::try_from(n) {
                    Ok(n) => Ok(Expr::Pow(Box::new(base), n)),
                    Err(_) => Err(ParseError {
                        offset: at,
                        expected: vec!["integer"],
                        found: n.to_string(),
                        note: Some("exponent too large".into()),
                    }),
                },
                t => Err(ParseError { offset: at, expected: vec!["integer"], found: t.describe(), note: None }),
            };
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let at = self.offset();
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(Expr::Int(n))
            }
            Tok::Gen(eps, n) => {
                let e = Entry::new(eps, n);
                if !e.is_legitimate(self.p) {
                    let why = if eps == 1 && !self.p.is_odd() {
                        "E1_n needs an odd prime".to_string()
                    } else {
                        format!("{e} needs index at least {eps}")
                    };
                    return Err(ParseError { note: Some(why), ..self.error(&["a legitimate E^e_n"]) });
                }
                self.bump();
                Ok(Expr::Gen(e))
            }
            Tok::Class(d) => {
                self.bump();
                Ok(Expr::Class(d))
            }
            Tok::LBracket => {
                self.bump();
                let Tok::Int(n) = self.peek().clone() else { return Err(self.error(&["integer"])) };
                self.bump();
                if *self.peek() != Tok::RBracket {
                    return Err(self.error(&["']'"]));
                }
                self.bump();
                Ok(Expr::Bracket(n))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.sum()?;
                if *self.peek() != Tok::RParen {
                    let mut expected = vec!["')'"];
                    expected.extend(["'+'", "'-'", "'*'", "'o'", "'#'", "'^'"]);
                    return Err(self.error(&expected));
                }
                self.bump();
                Ok(inner)
            }
            _ => Err(ParseError { offset: at, ..self.error(ATOM) }),
        }
    }
}

pub fn parse(text: &str, p: Prime) -> Result<Expr, ParseError> {
    let mut parser = Parser { toks: lex(text)?, at: 0, p };
    let expr = parser.sum()?;
    if *parser.peek() != Tok::End {
        return Err(parser.error(&["'+'", "'-'", "'*'", "'o'", "'#'", "'^'", "end of input"]));
    }
    Ok(expr)
}
