use super::QueryError;

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Tok {
    /// Identifier or keyword; `quoted` identifiers are never keywords.
    Ident {
        name: String,
        quoted: bool,
    },
    Int(u64),
    Float(f64),
    Str(String),
    LParen,
    RParen,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    Colon,
    Comma,
    Dot,
    DotDot,
    Star,
    Minus,
    Plus,
    Slash,
    Percent,
    Caret,
    Pipe,
    Semicolon,
    Dollar,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    Eof,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Token {
    pub tok: Tok,
    pub line: usize,
    pub column: usize,
}

impl Token {
    pub fn is_keyword(&self, kw: &str) -> bool {
        matches!(&self.tok, Tok::Ident { name, quoted: false } if name.eq_ignore_ascii_case(kw))
    }
}

struct Cursor<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    column: usize,
}

impl Cursor<'_> {
    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.bump();
            true
        } else {
            false
        }
    }
}

pub(crate) fn tokenize(text: &str) -> Result<Vec<Token>, QueryError> {
    let mut cur = Cursor {
        chars: text.chars().peekable(),
        line: 1,
        column: 1,
    };
    let mut out = Vec::new();
    loop {
        while let Some(c) = cur.peek() {
            if c.is_whitespace() {
                cur.bump();
            } else if c == '/' && text_starts_comment(&cur) {
                while cur.peek().is_some_and(|c| c != '\n') {
                    cur.bump();
                }
            } else {
                break;
            }
        }
        let (line, column) = (cur.line, cur.column);
        let syntax = |message: String| QueryError::Syntax {
            line,
            column,
            message,
        };
        let Some(c) = cur.bump() else {
            out.push(Token {
                tok: Tok::Eof,
                line,
                column,
            });
            return Ok(out);
        };
        let tok = match c {
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            '{' => Tok::LBrace,
            '}' => Tok::RBrace,
            ':' => Tok::Colon,
            ',' => Tok::Comma,
            '*' => Tok::Star,
            '-' => Tok::Minus,
            '+' => Tok::Plus,
            '/' => Tok::Slash,
            '%' => Tok::Percent,
            '^' => Tok::Caret,
            '|' => Tok::Pipe,
            ';' => Tok::Semicolon,
            '$' => Tok::Dollar,
            '=' => Tok::Eq,
            '.' => {
                if cur.eat('.') {
                    Tok::DotDot
                } else {
                    Tok::Dot
                }
            }
            '<' => {
                if cur.eat('=') {
                    Tok::Le
                } else if cur.eat('>') {
                    Tok::Ne
                } else {
                    Tok::Lt
                }
            }
            '>' => {
                if cur.eat('=') {
                    Tok::Ge
                } else {
                    Tok::Gt
                }
            }
            '!' if cur.eat('=') => Tok::Ne,
            '\'' | '"' => Tok::Str(lex_string(&mut cur, c).map_err(syntax)?),
            '`' => {
                let mut name = String::new();
                loop {
                    match cur.bump() {
                        Some('`') if cur.eat('`') => name.push('`'),
                        Some('`') => break,
                        Some(ch) => name.push(ch),
                        None => return Err(syntax("unterminated quoted identifier".into())),
                    }
                }
                if name.is_empty() {
                    return Err(syntax("empty quoted identifier".into()));
                }
                Tok::Ident { name, quoted: true }
            }
            c if c.is_ascii_digit() => lex_number(&mut cur, c).map_err(syntax)?,
            c if c.is_alphabetic() || c == '_' => {
                let mut name = c.to_string();
                while let Some(ch) = cur.peek() {
                    if ch.is_alphanumeric() || ch == '_' {
                        name.push(ch);
                        cur.bump();
                    } else {
                        break;
                    }
                }
                Tok::Ident {
                    name,
                    quoted: false,
                }
            }
            other => return Err(syntax(format!("unexpected character {other:?}"))),
        };
        out.push(Token { tok, line, column });
    }
}

fn text_starts_comment(cur: &Cursor<'_>) -> bool {
    let mut it = cur.chars.clone();
    it.next() == Some('/') && it.next() == Some('/')
}

fn lex_string(cur: &mut Cursor<'_>, quote: char) -> Result<String, String> {
    let mut s = String::new();
    loop {
        match cur.bump() {
            None => return Err("unterminated string literal".into()),
            Some(c) if c == quote => return Ok(s),
            Some('\\') => match cur.bump() {
                Some('n') => s.push('\n'),
                Some('t') => s.push('\t'),
                Some('r') => s.push('\r'),
                Some(c @ ('\\' | '\'' | '"')) => s.push(c),
                Some(c) => return Err(format!("unknown escape sequence \\{c}")),
                None => return Err("unterminated string literal".into()),
            },
            Some(c) => s.push(c),
        }
    }
}

fn lex_number(cur: &mut Cursor<'_>, first: char) -> Result<Tok, String> {
    let mut text = first.to_string();
    let digits = |cur: &mut Cursor<'_>, text: &mut String| {
        while let Some(c) = cur.peek().filter(char::is_ascii_digit) {
            text.push(c);
            cur.bump();
        }
    };
    digits(cur, &mut text);
    let mut is_float = false;
    // `1..3` is a range, not a float.
    if cur.peek() == Some('.') {
        let mut ahead = cur.chars.clone();
        ahead.next();
        if ahead.peek().is_some_and(char::is_ascii_digit) {
            cur.bump();
            text.push('.');
            digits(cur, &mut text);
            is_float = true;
        }
    }
    if matches!(cur.peek(), Some('e' | 'E')) {
        let mut ahead = cur.chars.clone();
        ahead.next();
        let sign = ahead.peek().copied();
        let ok = match sign {
            Some('+' | '-') => {
                ahead.next();
                ahead.peek().is_some_and(char::is_ascii_digit)
            }
            Some(c) => c.is_ascii_digit(),
            None => false,
        };
        if ok {
            text.push('e');
            cur.bump();
            if let Some(s @ ('+' | '-')) = cur.peek() {
                text.push(s);
                cur.bump();
            }
            digits(cur, &mut text);
            is_float = true;
        }
    }
    if cur.peek().is_some_and(|c| c.is_alphabetic() || c == '_') {
        return Err(format!("invalid number literal starting with {text:?}"));
    }
    if is_float {
        text.parse::<f64>()
            .map(Tok::Float)
            .map_err(|e| format!("invalid float {text:?}: {e}"))
    } else {
        text.parse::<u64>()
            .map(Tok::Int)
            .map_err(|_| format!("integer literal {text} is out of range"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Tok> {
        tokenize(s).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn range_is_not_a_float() {
        assert_eq!(
            toks("*1..3"),
            vec![Tok::Star, Tok::Int(1), Tok::DotDot, Tok::Int(3), Tok::Eof]
        );
        assert_eq!(toks("1.5e3"), vec![Tok::Float(1500.0), Tok::Eof]);
    }

    #[test]
    fn positions_are_one_based() {
        let t = tokenize("MATCH\n  (n)").unwrap();
        assert_eq!((t[0].line, t[0].column), (1, 1));
        assert_eq!((t[1].line, t[1].column), (2, 3));
    }

    #[test]
    fn strings_and_escapes() {
        assert_eq!(toks(r"'it\'s'"), vec![Tok::Str("it's".into()), Tok::Eof]);
        assert!(matches!(
            tokenize("'open"),
            Err(QueryError::Syntax {
                line: 1,
                column: 1,
                ..
            })
        ));
    }

    #[test]
    fn comments_are_skipped() {
        assert_eq!(toks("// hi\n(n)").len(), 4);
    }
}
