use super::ParseError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Punct(char),
    Ellipsis,
    /// Number, string or character literal; content is irrelevant.
    Literal,
    Eof,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Token {
    pub tok: Tok,
    pub line: usize,
    pub column: usize,
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
}

fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_' || c == '$'
}

fn is_ident_part(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '$'
}

/// Splits header source into tokens, dropping whitespace and comments.
pub(crate) fn tokenize(source: &str) -> Result<Vec<Token>, ParseError> {
    let mut cur = Cursor { chars: source.chars().peekable(), line: 1, column: 1 };
    let mut out = Vec::new();
    while let Some(c) = cur.peek() {
        let (line, column) = (cur.line, cur.column);
        if c.is_whitespace() {
            cur.bump();
            continue;
        }
        if c == '/' {
            cur.bump();
            match cur.peek() {
                Some('/') => {
                    while let Some(c) = cur.peek() {
                        if c == '\n' {
                            break;
                        }
                        cur.bump();
                    }
                }
                Some('*') => {
                    cur.bump();
                    let mut prev = '\0';
                    loop {
                        match cur.bump() {
                            Some('/') if prev == '*' => break,
                            Some(c) => prev = c,
                            None => return Err(ParseError::new(line, column, "unterminated block comment")),
                        }
                    }
                }
                _ => out.push(Token { tok: Tok::Punct('/'), line, column }),
            }
            continue;
        }
        let tok = if is_ident_start(c) {
            let mut word = String::new();
            while let Some(c) = cur.peek().filter(|&c| is_ident_part(c)) {
                word.push(c);
                cur.bump();
            }
            Tok::Ident(word)
        } else if c.is_ascii_digit() {
            while cur.peek().is_some_and(|c| is_ident_part(c) || c == '.') {
                cur.bump();
            }
            Tok::Literal
        } else if c == '"' || c == '\'' {
            cur.bump();
            loop {
                match cur.bump() {
                    Some('\\') => {
                        cur.bump();
                    }
                    Some('\n') | None => return Err(ParseError::new(line, column, "unterminated literal")),
                    Some(q) if q == c => break,
                    Some(_) => {}
                }
            }
            Tok::Literal
        } else if c == '.' {
            cur.bump();
            // `...` or a plain dot
            let mut rest = cur.chars.clone();
            if rest.next() == Some('.') && rest.next() == Some('.') {
                cur.bump();
                cur.bump();
                Tok::Ellipsis
            } else {
                Tok::Punct('.')
            }
        } else {
            cur.bump();
            Tok::Punct(c)
        };
        out.push(Token { tok, line, column });
    }
    out.push(Token { tok: Tok::Eof, line: cur.line, column: cur.column });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(src: &str) -> Vec<Tok> {
        tokenize(src).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn words_and_punctuation() {
        assert_eq!(
            kinds("class A<B> {}"),
            vec![
                Tok::Ident("class".into()),
                Tok::Ident("A".into()),
                Tok::Punct('<'),
                Tok::Ident("B".into()),
                Tok::Punct('>'),
                Tok::Punct('{'),
                Tok::Punct('}'),
                Tok::Eof
            ]
        );
    }

    #[test]
    fn comments_and_literals_are_skipped() {
        let toks = kinds("// x\n/* y\n z */ a = \"s;\\\"\" + 'c' + 1.5e3; String... b");
        assert_eq!(
            toks,
            vec![
                Tok::Ident("a".into()),
                Tok::Punct('='),
                Tok::Literal,
                Tok::Punct('+'),
                Tok::Literal,
                Tok::Punct('+'),
                Tok::Literal,
                Tok::Punct(';'),
                Tok::Ident("String".into()),
                Tok::Ellipsis,
                Tok::Ident("b".into()),
                Tok::Eof
            ]
        );
    }

    #[test]
    fn positions() {
        let toks = tokenize("a\n  b").unwrap();
        assert_eq!((toks[1].line, toks[1].column), (2, 3));
    }

    #[test]
    fn unterminated_comment() {
        let err = tokenize("a /* oops").unwrap_err();
        assert_eq!((err.line, err.column), (1, 3));
    }
}
