//! Recursive-descent parser for free-algebra expressions.
//!
//! ```text
//! poly    := ['+'|'-'] term (('+'|'-') term)*
//! term    := rational ['*'] [factor ('*'? factor)*] | factor ('*'? factor)*
//! factor  := primary ('^' nat)*
//! primary := var | '(' poly ')' | '[' poly ',' poly ']' | builtin
//! var     := 'x' nat        builtin := 's' nat        rational := int ['/' nat]
//! ```
//!
//! Whitespace is insignificant and juxtaposition multiplies. Commutators,
//! powers and builtins are expanded while parsing.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::{std_poly, PolyError, Polynomial, MAX_VARIABLE_INDEX};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Var(usize),
    Std(usize),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Eof,
}

fn syntax(position: usize, message: impl Into<String>) -> PolyError {
    PolyError::Syntax { position, message: message.into() }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, PolyError> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let digits_from = |mut j: usize| {
        let start = j;
        while j < chars.len() && chars[j].1.is_ascii_digit() {
            j += 1;
        }
        (start, j)
    };
    while i < chars.len() {
        let (pos, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let simple = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '[' => Some(Tok::LBracket),
            ']' => Some(Tok::RBracket),
            ',' => Some(Tok::Comma),
            _ => None,
        };
        if let Some(tok) = simple {
            out.push((tok, pos));
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let (s, e) = digits_from(i);
            let literal: String = chars[s..e].iter().map(|&(_, ch)| ch).collect();
            out.push((Tok::Num(literal.parse().expect("ascii digits")), pos));
            i = e;
            continue;
        }
        if c.is_ascii_alphabetic() {
            let (s, e) = digits_from(i + 1);
            let digits: String = chars[s..e].iter().map(|&(_, ch)| ch).collect();
            if !digits.is_empty() && (c == 'x' || c == 's') {
                let n: usize = digits.parse().map_err(|_| syntax(pos, format!("index '{digits}' too large")))?;
                out.push((if c == 'x' { Tok::Var(n) } else { Tok::Std(n) }, pos));
                i = e;
                continue;
            }
            let mut j = i;
            while j < chars.len() && chars[j].1.is_ascii_alphanumeric() {
                j += 1;
            }
            let name: String = chars[i..j].iter().map(|&(_, ch)| ch).collect();
            return Err(PolyError::UnknownBuiltin { name, position: pos });
        }
        return Err(syntax(pos, format!("unexpected character '{c}'")));
    }
    out.push((Tok::Eof, text.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    max_var: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if t != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), PolyError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(syntax(self.offset(), format!("expected {what}")))
        }
    }

    fn poly(&mut self) -> Result<Polynomial, PolyError> {
        let mut negate = false;
        match self.peek() {
            Tok::Plus => {
                self.bump();
            }
            Tok::Minus => {
                self.bump();
                negate = true;
            }
            _ => {}
        }
        let first = self.term()?;
        let mut acc = if negate { first.neg() } else { first };
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = acc.add(&self.term()?);
                }
                Tok::Minus => {
                    self.bump();
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn starts_factor(&self) -> bool {
        matches!(self.peek(), Tok::Var(_) | Tok::Std(_) | Tok::LParen | Tok::LBracket)
    }

    fn term(&mut self) -> Result<Polynomial, PolyError> {
        let mut acc = if let Tok::Num(_) = self.peek() {
            let c = self.rational()?;
            if *self.peek() == Tok::Star {
                self.bump();
                if !self.starts_factor() {
                    return Err(syntax(self.offset(), "expected a factor after '*'"));
                }
            }
            Polynomial::constant(c)
        } else if self.starts_factor() {
            self.factor()?
        } else {
            return Err(syntax(self.offset(), "expected a term"));
        };
        loop {
            if *self.peek() == Tok::Star {
                self.bump();
                if !self.starts_factor() {
                    return Err(syntax(self.offset(), "expected a factor after '*'"));
                }
            } else if !self.starts_factor() {
                return Ok(acc);
            }
            acc = acc.mul(&self.factor()?)?;
        }
    }

    fn rational(&mut self) -> Result<BigRational, PolyError> {
        let Tok::Num(p) = self.bump() else {
            unreachable!("caller checked for a number");
        };
        if *self.peek() == Tok::Slash {
            self.bump();
            let at = self.offset();
            let Tok::Num(q) = self.bump() else {
                return Err(syntax(at, "expected a denominator"));
            };
            if q.is_zero() {
                return Err(syntax(at, "zero denominator"));
            }
            return Ok(BigRational::new(p, q));
        }
        Ok(BigRational::from_integer(p))
    }

    fn factor(&mut self) -> Result<Polynomial, PolyError> {
        let mut base = self.primary()?;
        while *self.peek() == Tok::Caret {
            self.bump();
            let at = self.offset();
            let Tok::Num(n) = self.bump() else {
                return Err(syntax(at, "expected an exponent"));
            };
            let exp = n.to_u32().ok_or_else(|| syntax(at, "exponent too large"))?;
            base = if exp == 0 { Polynomial::constant(BigRational::one()) } else { base.pow(exp)? };
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Polynomial, PolyError> {
        let at = self.offset();
        match self.bump() {
            Tok::Var(index) => {
                if index == 0 || index > MAX_VARIABLE_INDEX {
                    return Err(PolyError::VariableIndexOutOfRange { index, max: MAX_VARIABLE_INDEX });
                }
                self.max_var = self.max_var.max(index);
                Ok(Polynomial::var(index))
            }
            Tok::Std(n) => {
                let p = std_poly(n)?;
                self.max_var = self.max_var.max(n);
                Ok(p)
            }
            Tok::LParen => {
                let inner = self.poly()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(inner)
            }
            Tok::LBracket => {
                let a = self.poly()?;
                self.expect(Tok::Comma, "','")?;
                let b = self.poly()?;
                self.expect(Tok::RBracket, "']'")?;
                a.commutator(&b)
            }
            _ => Err(syntax(at, "expected a variable, builtin, '(' or '['")),
        }
    }
}

fn parse_inner(text: &str) -> Result<(Polynomial, usize), PolyError> {
    let toks = lex(text)?;
    let mut parser = Parser { toks, pos: 0, max_var: 0 };
    let p = parser.poly()?;
    if *parser.peek() != Tok::Eof {
        return Err(syntax(parser.offset(), "unexpected trailing input"));
    }
    Ok((p, parser.max_var))
}

/// Parses and expands `text`; the arity is the largest surviving variable
/// index.
pub fn parse(text: &str) -> Result<Polynomial, PolyError> {
    parse_inner(text).map(|(p, _)| p)
}

/// Parses `text` as a polynomial in exactly `num_vars` variables.
pub fn parse_with_arity(text: &str, num_vars: usize) -> Result<Polynomial, PolyError> {
    let (p, max_var) = parse_inner(text)?;
    if max_var > num_vars {
        return Err(PolyError::VariableIndexOutOfRange { index: max_var, max: num_vars });
    }
    p.with_num_vars(num_vars)
}
