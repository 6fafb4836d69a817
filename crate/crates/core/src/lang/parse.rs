//! Recursive-descent parser for program text.
//!
//! ```text
//! term := alt
//! alt  := seqt ('+' seqt)*
//! seqt := star (';' star)*
//! star := atom '*'*
//! atom := '1' | '0' | IDENT | 'guard' '(' IDENT ')'
//!       | 'if' IDENT 'then' term 'else' term 'end'
//!       | 'while' IDENT 'do' term 'end'
//!       | '(' term ')'
//! ```
//!
//! `#` starts a comment running to the end of the line. A trailing `end` may
//! be omitted when the construct closes the whole input.

use std::fmt;

use thiserror::Error;

use super::{Language, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    One,
    Zero,
    Ident(String),
    Guard,
    If,
    Then,
    Else,
    End,
    While,
    Do,
    LParen,
    RParen,
    Plus,
    Semi,
    Star,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::One => f.write_str("`1`"),
            Tok::Zero => f.write_str("`0`"),
            Tok::Ident(s) => write!(f, "identifier `{s}`"),
            Tok::Guard => f.write_str("`guard`"),
            Tok::If => f.write_str("`if`"),
            Tok::Then => f.write_str("`then`"),
            Tok::Else => f.write_str("`else`"),
            Tok::End => f.write_str("`end`"),
            Tok::While => f.write_str("`while`"),
            Tok::Do => f.write_str("`do`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Plus => f.write_str("`+`"),
            Tok::Semi => f.write_str("`;`"),
            Tok::Star => f.write_str("`*`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut column) = (1, 1);
    while let Some(&c) = chars.peek() {
        let (l, col) = (line, column);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
            c
        };
        let tok = match c {
            c if c.is_whitespace() => {
                bump(&mut chars);
                continue;
            }
            '#' => {
                while chars.peek().is_some_and(|&c| c != '\n') {
                    bump(&mut chars);
                }
                continue;
            }
            '(' | ')' | '+' | ';' | '*' => {
                bump(&mut chars);
                match c {
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    '+' => Tok::Plus,
                    ';' => Tok::Semi,
                    _ => Tok::Star,
                }
            }
            c if c.is_ascii_digit() => {
                let mut digits = String::new();
                while chars.peek().is_some_and(|c| c.is_ascii_alphanumeric() || *c == '_') {
                    digits.push(bump(&mut chars).unwrap());
                }
                match digits.as_str() {
                    "1" => Tok::One,
                    "0" => Tok::Zero,
                    _ => {
                        return Err(ParseError {
                            line: l,
                            column: col,
                            message: format!("unexpected literal `{digits}`; only `0` and `1` are terms"),
                        })
                    }
                }
            }
            c if c.is_alphabetic() || c == '_' => {
                let mut word = String::new();
                while chars.peek().is_some_and(|c| c.is_alphanumeric() || *c == '_') {
                    word.push(bump(&mut chars).unwrap());
                }
                match word.as_str() {
                    "guard" => Tok::Guard,
                    "if" => Tok::If,
                    "then" => Tok::Then,
                    "else" => Tok::Else,
                    "end" => Tok::End,
                    "while" => Tok::While,
                    "do" => Tok::Do,
                    _ => Tok::Ident(word),
                }
            }
            other => {
                return Err(ParseError {
                    line: l,
                    column: col,
                    message: format!("unexpected character `{other}`"),
                })
            }
        };
        out.push(Spanned {
            tok,
            line: l,
            column: col,
        });
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        column,
    });
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Spanned>,
    pos: usize,
    lang: &'a Language,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn error(&self, message: String) -> ParseError {
        let t = &self.toks[self.pos];
        ParseError {
            line: t.line,
            column: t.column,
            message,
        }
    }

    fn next(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if t != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok) -> Result<(), ParseError> {
        if *self.peek() == want {
            self.next();
            Ok(())
        } else {
            Err(self.error(format!("expected {want}, found {}", self.peek())))
        }
    }

    fn expect_end(&mut self) -> Result<(), ParseError> {
        match self.peek() {
            Tok::End => {
                self.next();
                Ok(())
            }
            Tok::Eof => Ok(()),
            other => Err(self.error(format!("expected `end`, found {other}"))),
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.next() {
            Tok::Ident(s) => Ok(s),
            other => {
                self.pos -= usize::from(other != Tok::Eof);
                Err(self.error(format!("expected identifier, found {other}")))
            }
        }
    }

    fn negated_test(&mut self) -> Result<(String, String), ParseError> {
        let at = self.pos;
        let test = self.ident()?;
        match self.lang.negation(&test) {
            Ok(neg) => Ok((test, neg.to_owned())),
            Err(e) => {
                self.pos = at;
                Err(self.error(e.to_string()))
            }
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let mut t = self.seqt()?;
        while *self.peek() == Tok::Plus {
            self.next();
            t = Term::choice(t, self.seqt()?);
        }
        Ok(t)
    }

    fn seqt(&mut self) -> Result<Term, ParseError> {
        let mut t = self.star()?;
        while *self.peek() == Tok::Semi {
            self.next();
            t = Term::seq(t, self.star()?);
        }
        Ok(t)
    }

    fn star(&mut self) -> Result<Term, ParseError> {
        let mut t = self.atom()?;
        while *self.peek() == Tok::Star {
            self.next();
            t = Term::star(t);
        }
        Ok(t)
    }

    fn atom(&mut self) -> Result<Term, ParseError> {
        match self.peek().clone() {
            Tok::One => {
                self.next();
                Ok(Term::Skip)
            }
            Tok::Zero => {
                self.next();
                Ok(Term::Hang)
            }
            Tok::Ident(name) => {
                self.next();
                Ok(Term::Instr(name))
            }
            Tok::Guard => {
                self.next();
                self.expect(Tok::LParen)?;
                let test = self.ident()?;
                self.expect(Tok::RParen)?;
                Ok(Term::Guard(test))
            }
            Tok::If => {
                self.next();
                let (b, nb) = self.negated_test()?;
                self.expect(Tok::Then)?;
                let u = self.term()?;
                self.expect(Tok::Else)?;
                let v = self.term()?;
                self.expect_end()?;
                Ok(super::encode_if(&b, &nb, u, v))
            }
            Tok::While => {
                self.next();
                let (b, nb) = self.negated_test()?;
                self.expect(Tok::Do)?;
                let u = self.term()?;
                self.expect_end()?;
                Ok(super::encode_while(&b, &nb, u))
            }
            Tok::LParen => {
                self.next();
                let t = self.term()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            other => Err(self.error(format!("expected a term, found {other}"))),
        }
    }
}

/// Parse program text. `if` and `while` are desugared using the language's
/// negation table; other names are resolved later, by `wlp` or the analyser.
pub fn parse(text: &str, lang: &Language) -> Result<Term, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        lang,
    };
    let t = p.term()?;
    if *p.peek() != Tok::Eof {
        return Err(p.error(format!("unexpected {}", p.peek())));
    }
    Ok(t)
}
