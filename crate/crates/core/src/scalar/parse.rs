use std::collections::BTreeSet;

use num_bigint::BigInt;

use super::{Facts, Scalar, ScalarError, Var};

/// Variable declarations and nonzero facts that an expression may use.
#[derive(Clone, Debug, Default)]
pub struct ParseContext {
    pub params: BTreeSet<String>,
    pub facts: Facts,
    /// Largest admissible `psi` index, when known.
    pub max_index: Option<usize>,
}

impl ParseContext {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_param(mut self, name: &str) -> Self {
        self.params.insert(name.to_string());
        self
    }

    pub fn with_dim(mut self, n: usize) -> Self {
        self.max_index = Some(n);
        self
    }

    pub fn with_facts(mut self, facts: Facts) -> Self {
        self.facts = facts;
        self
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Psi(usize, usize),
    Op(char),
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn tokens(src: &'a str) -> Result<Vec<(usize, Tok)>, ScalarError> {
        let mut lx = Lexer { src, pos: 0 };
        let mut out = Vec::new();
        while let Some(t) = lx.next_token()? {
            out.push(t);
        }
        Ok(out)
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn err(&self, at: usize, message: impl Into<String>) -> ScalarError {
        ScalarError::Syntax {
            position: at,
            message: message.into(),
        }
    }

    fn next_token(&mut self) -> Result<Option<(usize, Tok)>, ScalarError> {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += self.peek().map_or(0, char::len_utf8);
        }
        let start = self.pos;
        let Some(c) = self.peek() else {
            return Ok(None);
        };
        if c.is_ascii_digit() {
            let digits = self.take_while(|c| c.is_ascii_digit());
            return Ok(Some((start, Tok::Int(digits.parse().expect("digits")))));
        }
        if c.is_ascii_alphabetic() {
            let word = self.take_while(|c| c.is_ascii_alphanumeric());
            if word == "psi" && self.peek() == Some('_') {
                let i = self.psi_index(start)?;
                if self.peek() != Some('_') {
                    return Err(self.err(self.pos, "expected `_` in psi index"));
                }
                let j = self.psi_index(start)?;
                return Ok(Some((start, Tok::Psi(i, j))));
            }
            return Ok(Some((start, Tok::Ident(word.to_string()))));
        }
        if "+-*/^()".contains(c) {
            self.pos += 1;
            return Ok(Some((start, Tok::Op(c))));
        }
        Err(self.err(start, format!("unexpected character `{}`", c)))
    }

    fn psi_index(&mut self, start: usize) -> Result<usize, ScalarError> {
        self.pos += 1; // '_'
        let digits = self.take_while(|c| c.is_ascii_digit());
        digits
            .parse::<usize>()
            .ok()
            .filter(|i| *i >= 1)
            .ok_or_else(|| self.err(start, "psi indices must be positive integers"))
    }

    fn take_while(&mut self, pred: impl Fn(char) -> bool) -> &'a str {
        let start = self.pos;
        while self.peek().is_some_and(&pred) {
            self.pos += 1;
        }
        &self.src[start..self.pos]
    }
}

struct Parser<'c> {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
    ctx: &'c ParseContext,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn position(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(p, _)| *p)
    }

    fn err(&self, message: impl Into<String>) -> ScalarError {
        ScalarError::Syntax {
            position: self.position(),
            message: message.into(),
        }
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Scalar, ScalarError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Scalar, ScalarError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.unary()?;
            } else if self.peek() == Some(&Tok::Op('/')) {
                let at = self.position();
                self.at += 1;
                let rhs = self.unary()?;
                acc = acc.checked_div(&rhs, &self.ctx.facts).map_err(|e| match e {
                    ScalarError::IllegalDivision { divisor, blocking } => ScalarError::UndeclaredDivisor {
                        position: at,
                        divisor,
                        blocking,
                    },
                    other => other,
                })?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Scalar, ScalarError> {
        if self.eat('-') {
            return Ok(-self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<Scalar, ScalarError> {
        let base = self.atom()?;
        if self.eat('^') {
            return match self.toks.get(self.at).cloned() {
                Some((_, Tok::Int(n))) => {
                    self.at += 1;
                    let e: u32 = n.try_into().map_err(|_| self.err("exponent too large"))?;
                    Ok(base.pow(e))
                }
                _ => Err(self.err("expected a nonnegative integer exponent")),
            };
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Scalar, ScalarError> {
        let Some((pos, tok)) = self.toks.get(self.at).cloned() else {
            return Err(self.err("unexpected end of expression"));
        };
        self.at += 1;
        match tok {
            Tok::Int(n) => Ok(Scalar::from_rational(n.into())),
            Tok::Psi(i, j) => {
                if let Some(n) = self.ctx.max_index {
                    if i > n || j > n {
                        return Err(ScalarError::Syntax {
                            position: pos,
                            message: format!("psi_{}_{} out of range for dimension {}", i, j, n),
                        });
                    }
                }
                Ok(Scalar::var(Var::psi(i, j)))
            }
            Tok::Ident(name) => {
                if self.ctx.params.contains(&name) {
                    Ok(Scalar::var(Var::Param(name)))
                } else {
                    Err(ScalarError::Undeclared { position: pos, name })
                }
            }
            Tok::Op('(') => {
                let inner = self.expr()?;
                if !self.eat(')') {
                    return Err(self.err("expected `)`"));
                }
                Ok(inner)
            }
            Tok::Op(c) => {
                self.at -= 1;
                Err(self.err(format!("unexpected `{}`", c)))
            }
        }
    }
}

/// Parses an expression into canonical form.
pub fn parse_scalar(text: &str, ctx: &ParseContext) -> Result<Scalar, ScalarError> {
    let toks = Lexer::tokens(text)?;
    if toks.is_empty() {
        return Err(ScalarError::Syntax {
            position: 0,
            message: "empty expression".into(),
        });
    }
    let mut p = Parser {
        toks,
        at: 0,
        end: text.len(),
        ctx,
    };
    let value = p.expr()?;
    if p.at != p.toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok(value)
}

/// Parses and requires a polynomial result.
pub fn parse_polynomial(text: &str, ctx: &ParseContext) -> Result<super::Polynomial, ScalarError> {
    let s = parse_scalar(text, ctx)?;
    s.as_polynomial().cloned().ok_or(ScalarError::NotPolynomial(text.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Polynomial};
    use num_traits::One;

    fn ctx() -> ParseContext {
        let l = Polynomial::var(Var::param("lambda"));
        ParseContext::new()
            .with_param("lambda")
            .with_facts(Facts::new().with(&l).with(&(&l - &Polynomial::one())))
    }

    #[test]
    fn literals_and_params() {
        assert_eq!(parse_scalar("3/4", &ctx()).unwrap().as_rational(), Some(rat(3) / rat(4)));
        let s = parse_scalar("(1-lambda)", &ctx()).unwrap();
        assert_eq!(s, &Scalar::one() - &Scalar::param("lambda"));
        assert_eq!(parse_scalar("psi_1_6^2", &ctx()).unwrap(), Scalar::psi(1, 6).pow(2));
    }

    #[test]
    fn precedence() {
        let s = parse_scalar("-x^2 + 2*x*y - -3", &ParseContext::new().with_param("x").with_param("y")).unwrap();
        assert_eq!(s.to_string(), "-x^2 + 2*x*y + 3");
        let s = parse_scalar("2 - 3 - 4", &ParseContext::new()).unwrap();
        assert_eq!(s.as_rational(), Some(rat(-5)));
    }

    #[test]
    fn symbolic_division() {
        let s = parse_scalar("psi_1_5/(1 - lambda)", &ctx()).unwrap();
        assert_eq!(parse_scalar(&s.to_string(), &ctx()).unwrap(), s);
    }

    #[test]
    fn errors_carry_positions() {
        match parse_scalar("1 + mu", &ctx()) {
            Err(ScalarError::Undeclared { position, name }) => {
                assert_eq!((position, name.as_str()), (4, "mu"));
            }
            other => panic!("{:?}", other),
        }
        assert!(matches!(parse_scalar("1 +", &ctx()), Err(ScalarError::Syntax { position: 3, .. })));
        assert!(matches!(parse_scalar("(1", &ctx()), Err(ScalarError::Syntax { .. })));
        assert!(matches!(parse_scalar("2 $", &ctx()), Err(ScalarError::Syntax { position: 2, .. })));
        assert!(matches!(
            parse_scalar("1/(lambda + 1)", &ctx()),
            Err(ScalarError::UndeclaredDivisor { position: 1, .. })
        ));
        assert!(matches!(parse_scalar("x^y", &ParseContext::new().with_param("x").with_param("y")), Err(ScalarError::Syntax { .. })));
    }
}
