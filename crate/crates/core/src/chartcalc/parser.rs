//! Recursive-descent parser for the chart expression grammar:
//!
//! ```text
//! expr   := term (("+"|"-") term)*
//! term   := factor (("*"|"/") factor)*
//! factor := "-" factor | atom ("^" integer)?
//! atom   := number | ident | func "(" expr ")" | "(" expr ")"
//! ident  := "x" integer
//! func   := "sin" | "cos" | "exp" | "log"
//! ```
//!
//! Whitespace is insignificant. Errors carry the byte offset of the
//! offending token.

use super::{ChartError, Expr};

/// Parses `text` as an expression over a chart of dimension `dim`.
pub fn parse(text: &str, dim: usize) -> Result<Expr, ChartError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        dim,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    dim: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> ChartError {
        ChartError::Syntax {
            offset: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), ChartError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("expected '{}'", c as char)))
        }
    }

    fn expr(&mut self) -> Result<Expr, ChartError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(b'+') {
                lhs = lhs + self.term()?;
            } else if self.eat(b'-') {
                lhs = lhs - self.term()?;
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ChartError> {
        let mut lhs = self.factor()?;
        loop {
            if self.eat(b'*') {
                lhs = lhs * self.factor()?;
            } else if self.eat(b'/') {
                lhs = lhs / self.factor()?;
            } else {
                return Ok(lhs);
            }
        }
    }

    fn factor(&mut self) -> Result<Expr, ChartError> {
        if self.eat(b'-') {
            return Ok(-self.factor()?);
        }
        let base = self.atom()?;
        if self.eat(b'^') {
            self.skip_ws();
            let n = self.integer()?;
            let n = i32::try_from(n).map_err(|_| self.error("exponent too large"))?;
            return Ok(base.pow(n));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ChartError> {
        let start = match self.peek() {
            None => return Err(self.error("unexpected end of input")),
            Some(c) => c,
        };
        match start {
            b'(' => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            b'0'..=b'9' | b'.' => self.number(),
            b'x' => {
                let offset = self.pos;
                self.pos += 1;
                if !self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
                    return Err(self.error("expected variable index after 'x'"));
                }
                let index = self.integer()?;
                if index >= self.dim as u64 {
                    return Err(ChartError::VariableOutOfRange {
                        index: index as usize,
                        dim: self.dim,
                        offset: Some(offset),
                    });
                }
                Ok(Expr::Var(index as usize))
            }
            b'a'..=b'z' => {
                let offset = self.pos;
                let name = self.identifier();
                let ctor: fn(Expr) -> Expr = match name {
                    "sin" => Expr::sin,
                    "cos" => Expr::cos,
                    "exp" => Expr::exp,
                    "log" => Expr::log,
                    _ => {
                        return Err(ChartError::Syntax {
                            offset,
                            message: format!("unknown function '{name}'"),
                        })
                    }
                };
                self.expect(b'(')?;
                let arg = self.expr()?;
                self.expect(b')')?;
                Ok(ctor(arg))
            }
            _ => Err(self.error(&format!("unexpected character '{}'", start as char))),
        }
    }

    fn identifier(&mut self) -> &str {
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(u8::is_ascii_lowercase) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("")
    }

    fn integer(&mut self) -> Result<u64, ChartError> {
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected integer"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or(ChartError::Syntax {
                offset: start,
                message: "integer out of range".into(),
            })
    }

    // digits ["." digits] | "." digits, then an optional exponent
    // "e" ["+"|"-"] digits.
    fn number(&mut self) -> Result<Expr, ChartError> {
        let start = self.pos;
        let digits = |p: &mut Self| {
            let s = p.pos;
            while p.src.get(p.pos).is_some_and(u8::is_ascii_digit) {
                p.pos += 1;
            }
            p.pos - s
        };
        let int_digits = digits(self);
        let mut frac_digits = 0;
        if self.src.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            frac_digits = digits(self);
        }
        if int_digits + frac_digits == 0 {
            self.pos = start;
            return Err(self.error("malformed number"));
        }
        if matches!(self.src.get(self.pos), Some(b'e' | b'E')) {
            let mark = self.pos;
            self.pos += 1;
            if matches!(self.src.get(self.pos), Some(b'+' | b'-')) {
                self.pos += 1;
            }
            if digits(self) == 0 {
                // not an exponent; leave it for the caller to reject
                self.pos = mark;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
        text.parse::<f64>()
            .map(Expr::Num)
            .map_err(|_| ChartError::Syntax {
                offset: start,
                message: format!("malformed number '{text}'"),
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: usize) -> Box<Expr> {
        Box::new(Expr::Var(i))
    }

    #[test]
    fn sum_of_product_and_sine() {
        let e = parse("x0*x1 + sin(x0)", 2).unwrap();
        assert_eq!(
            e,
            Expr::Add(
                Box::new(Expr::Mul(x(0), x(1))),
                Box::new(Expr::Sin(x(0)))
            )
        );
    }

    #[test]
    fn unary_minus_binds_as_a_factor() {
        // factor := "-" factor, so the quotient applies to the negated power
        let e = parse("-(x0^2)/x1", 2).unwrap();
        let pow = Box::new(Expr::Pow(x(0), 2));
        assert_eq!(e, Expr::Div(Box::new(Expr::Neg(pow.clone())), x(1)));
        // numerically identical to the negated quotient
        let alt = Expr::Neg(Box::new(Expr::Div(pow, x(1))));
        let p = [1.7f64, -0.3];
        assert_eq!(e.eval(&p).unwrap(), alt.eval(&p).unwrap());
    }

    #[test]
    fn variable_out_of_range() {
        match parse("x3", 2) {
            Err(ChartError::VariableOutOfRange { index, dim, offset }) => {
                assert_eq!((index, dim, offset), (3, 2, Some(0)));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn syntax_errors_report_offsets() {
        let cases = [
            ("x0 +", 4),
            ("x0 ** x1", 4),
            ("tan(x0)", 0),
            ("(x0", 3),
            ("x0 x1", 3),
            ("x", 1),
            ("x0^x1", 3),
            ("", 0),
        ];
        for (text, expected) in cases {
            match parse(text, 2) {
                Err(ChartError::Syntax { offset, .. }) => {
                    assert_eq!(offset, expected, "offset for {text:?}")
                }
                other => panic!("{text:?}: unexpected {other:?}"),
            }
        }
    }

    #[test]
    fn numbers_and_whitespace() {
        assert_eq!(parse(" 2.5 ", 0).unwrap(), Expr::Num(2.5));
        assert_eq!(parse(".5", 0).unwrap(), Expr::Num(0.5));
        assert_eq!(parse("1e-3", 0).unwrap(), Expr::Num(1e-3));
        assert_eq!(parse("3.", 0).unwrap(), Expr::Num(3.0));
        assert_eq!(
            parse("exp ( x0 ) ^ 2", 1).unwrap(),
            Expr::Pow(Box::new(Expr::Exp(x(0))), 2)
        );
    }

    #[test]
    fn subtraction_is_left_associative() {
        let e = parse("x0 - x1 - x2", 3).unwrap();
        assert_eq!(
            e,
            Expr::Sub(Box::new(Expr::Sub(x(0), x(1))), x(2))
        );
    }
}
