use super::{BinOp, Expr, ExprError, Func};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

fn syntax(offset: usize, message: impl Into<String>) -> ExprError {
    ExprError::Syntax {
        offset,
        message: message.into(),
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ExprError> {
    let mut out = Vec::new();
    let mut it = text.char_indices().peekable();
    while let Some(&(i, c)) = it.peek() {
        if c.is_whitespace() {
            it.next();
            continue;
        }
        let single = match c {
            '+' => Some(Tok::Plus),
            '-' | '−' => Some(Tok::Minus),
            '*' | '×' => Some(Tok::Star),
            '/' | '÷' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(t) = single {
            out.push((t, i));
            it.next();
            continue;
        }
        if c.is_ascii_digit() || c == '.' {
            let start = i;
            let mut end = i;
            let mut seen_exp = false;
            let mut prev = ' ';
            while let Some(&(j, d)) = it.peek() {
                let ok = d.is_ascii_digit()
                    || d == '.'
                    || (!seen_exp && (d == 'e' || d == 'E'))
                    || ((d == '+' || d == '-') && (prev == 'e' || prev == 'E'));
                if !ok {
                    break;
                }
                if d == 'e' || d == 'E' {
                    seen_exp = true;
                }
                prev = d;
                end = j + d.len_utf8();
                it.next();
            }
            let lit = &text[start..end];
            let v: f64 = lit
                .parse()
                .map_err(|_| syntax(start, format!("malformed number `{lit}`")))?;
            out.push((Tok::Num(v), start));
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            let mut end = i;
            while let Some(&(j, d)) = it.peek() {
                if !(d.is_ascii_alphanumeric() || d == '_') {
                    break;
                }
                end = j + d.len_utf8();
                it.next();
            }
            out.push((Tok::Ident(text[start..end].to_string()), start));
            continue;
        }
        return Err(syntax(i, format!("unexpected character `{c}`")));
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
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
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<(), ExprError> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            Err(syntax(self.offset(), format!("expected {what}")))
        }
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.unary()?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> Result<Expr, ExprError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ExprError> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let at = self.offset();
        let expo = self.exponent()?;
        if expo.depends_on_r() {
            return Err(syntax(at, "exponent must not depend on r"));
        }
        Ok(Expr::Pow(Box::new(base), Box::new(expo)))
    }

    fn exponent(&mut self) -> Result<Expr, ExprError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.exponent()?)));
        }
        self.power()
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        let at = self.offset();
        match self.bump() {
            Tok::Num(v) => Ok(Expr::Num(v)),
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Tok::Ident(name) => match name.as_str() {
                "r" => Ok(Expr::Var),
                "pi" => Ok(Expr::Pi),
                _ => match Func::from_name(&name) {
                    Some(f) => {
                        self.expect(Tok::LParen, "`(` after function name")?;
                        let arg = self.expr()?;
                        self.expect(Tok::RParen, "`)`")?;
                        Ok(Expr::Call(f, Box::new(arg)))
                    }
                    None => Err(ExprError::UnknownIdentifier { name, offset: at }),
                },
            },
            Tok::End => Err(syntax(at, "unexpected end of input")),
            t => Err(syntax(at, format!("unexpected token {t:?}"))),
        }
    }
}

/// Parse a radial expression.
pub fn parse(text: &str) -> Result<Expr, ExprError> {
    if text.trim().is_empty() {
        return Err(syntax(0, "empty expression"));
    }
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(syntax(p.offset(), "trailing input"));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(e: Expr) -> Box<Expr> {
        Box::new(e)
    }

    #[test]
    fn shapes() {
        assert_eq!(parse("r").unwrap(), Expr::Var);
        assert_eq!(
            parse("sin(r)^2").unwrap(),
            Expr::Pow(b(Expr::Call(Func::Sin, b(Expr::Var))), b(Expr::Num(2.0)))
        );
        assert_eq!(
            parse("1 - exp(-r^2)").unwrap(),
            Expr::Binary(
                BinOp::Sub,
                b(Expr::Num(1.0)),
                b(Expr::Call(
                    Func::Exp,
                    b(Expr::Neg(b(Expr::Pow(b(Expr::Var), b(Expr::Num(2.0))))))
                ))
            )
        );
    }

    #[test]
    fn left_assoc() {
        assert_eq!(parse("8/4/2").unwrap().eval(0.0).unwrap(), 1.0);
        assert_eq!(parse("1-2-3").unwrap().eval(0.0).unwrap(), -4.0);
    }

    #[test]
    fn errors_carry_offsets() {
        assert_eq!(
            parse("r + foo(r)"),
            Err(ExprError::UnknownIdentifier {
                name: "foo".into(),
                offset: 4
            })
        );
        match parse("r + * 2") {
            Err(ExprError::Syntax { offset, .. }) => assert_eq!(offset, 4),
            e => panic!("{e:?}"),
        }
        match parse("r^r") {
            Err(ExprError::Syntax { offset, .. }) => assert_eq!(offset, 2),
            e => panic!("{e:?}"),
        }
        assert!(parse("").is_err());
        assert!(parse("(r").is_err());
        assert!(parse("r r").is_err());
    }

    #[test]
    fn scientific_literals() {
        assert_eq!(parse("1e-16").unwrap(), Expr::Num(1e-16));
        assert_eq!(parse("2.5E+3").unwrap(), Expr::Num(2500.0));
        assert_eq!(parse(".5").unwrap(), Expr::Num(0.5));
    }
}
