//! Hand-written lexer for disequence and element literals.
//!
//! Grammar:
//!
//! ```text
//! element  := "0" | term (("+" | "-") term)*     (leading sign allowed)
//! term     := [coef ["*"]] disequence
//! coef     := integer ["/" integer]
//! disequence := "[" name+ "]" "@" integer
//! ```

use num_bigint::BigInt;

use crate::dimonomial::{is_identifier, Alphabet, Disequence};
use crate::element::DiElement;
use crate::error::{Error, Result};
use crate::scalar::{Scalar, ScalarKind};

pub(crate) struct Lexer<'a> {
    text: &'a str,
    pos: usize,
    line: usize,
    /// Column offset of `text` within its line (1-based).
    col0: usize,
}

impl<'a> Lexer<'a> {
    pub(crate) fn new(text: &'a str, line: usize) -> Self {
        Lexer {
            text,
            pos: 0,
            line,
            col0: 1,
        }
    }

    pub(crate) fn with_column(text: &'a str, line: usize, col0: usize) -> Self {
        Lexer {
            text,
            pos: 0,
            line,
            col0,
        }
    }

    pub(crate) fn error(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            line: self.line,
            column: self.col0 + self.text[..self.pos].chars().count(),
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected '{c}'")))
        }
    }

    pub(crate) fn expect_end(&mut self) -> Result<()> {
        self.skip_ws();
        if self.pos == self.text.len() {
            Ok(())
        } else {
            Err(self.error("expected end of input"))
        }
    }

    fn digits(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        (self.pos > start).then(|| &self.text[start..self.pos])
    }

    fn name(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_whitespace() || matches!(c, '[' | ']' | '@' | '*' | '+' | '-' | '/') {
                break;
            }
            self.pos += c.len_utf8();
        }
        (self.pos > start).then(|| &self.text[start..self.pos])
    }

    pub(crate) fn disequence(&mut self, alphabet: &Alphabet) -> Result<Disequence> {
        self.expect('[')?;
        let mut word = Vec::new();
        loop {
            self.skip_ws();
            if self.peek() == Some(']') {
                break;
            }
            let at = self.pos;
            let Some(n) = self.name() else {
                return Err(self.error("expected generator name or ']'"));
            };
            match alphabet.rank(n) {
                Some(r) => word.push(r),
                None => {
                    self.pos = at;
                    self.skip_ws();
                    let msg = if is_identifier(n) {
                        format!("unknown generator {n:?}")
                    } else {
                        format!("malformed generator name {n:?}")
                    };
                    return Err(self.error(msg));
                }
            }
        }
        self.expect(']')?;
        if word.is_empty() {
            return Err(self.error("empty disequence"));
        }
        self.expect('@')?;
        let at = self.pos;
        let m = self
            .digits()
            .ok_or_else(|| self.error("expected middle index after '@'"))?;
        let m: usize = m.parse().map_err(|_| self.error("middle index too large"))?;
        if m < 1 || m > word.len() {
            self.pos = at;
            self.skip_ws();
            return Err(self.error(format!("middle {m} outside 1..={}", word.len())));
        }
        Ok(Disequence::new(alphabet, word, m).expect("validated above"))
    }

    fn coefficient(&mut self, kind: ScalarKind) -> Result<Option<Scalar>> {
        self.skip_ws();
        if !matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            return Ok(None);
        }
        let num: BigInt = self.digits().unwrap().parse().unwrap();
        let den: BigInt = if self.eat('/') {
            self.digits()
                .ok_or_else(|| self.error("expected denominator"))?
                .parse()
                .unwrap()
        } else {
            BigInt::from(1)
        };
        let s = Scalar::from_ratio(num, den, kind).map_err(|e| self.error(e.to_string()))?;
        Ok(Some(s))
    }

    pub(crate) fn element(&mut self, alphabet: &Alphabet, kind: ScalarKind) -> Result<DiElement> {
        let mut out = DiElement::zero(alphabet, kind);
        self.skip_ws();
        if self.peek() == Some('0') {
            let save = self.pos;
            self.pos += 1;
            self.skip_ws();
            if self.pos == self.text.len() {
                return Ok(out);
            }
            self.pos = save;
        }
        let mut first = true;
        loop {
            self.skip_ws();
            let negative = if self.eat('-') {
                true
            } else if self.eat('+') {
                false
            } else if first {
                false
            } else if self.pos == self.text.len() {
                break;
            } else {
                return Err(self.error("expected '+' or '-'"));
            };
            first = false;
            let mut coef = self.coefficient(kind)?.unwrap_or_else(|| Scalar::one(kind));
            if coef.is_zero() {
                return Err(self.error("zero coefficient"));
            }
            self.eat('*');
            self.skip_ws();
            if self.peek() != Some('[') {
                return Err(self.error("expected '['"));
            }
            let d = self.disequence(alphabet)?;
            if negative {
                coef = -coef;
            }
            out.add_term(d, coef);
            self.skip_ws();
            if self.pos == self.text.len() {
                break;
            }
        }
        Ok(out)
    }
}

/// Parses an element literal such as `[b]@1 - [a a]@2 + 3/2*[a a]@1`.
pub fn parse_element(alphabet: &Alphabet, kind: ScalarKind, text: &str) -> Result<DiElement> {
    let mut lx = Lexer::new(text, 1);
    let e = lx.element(alphabet, kind)?;
    lx.expect_end()?;
    Ok(e)
}
