//! Radial expressions in `r` and their second-order forward-mode evaluation.
//!
//! Grammar (loosest binding first):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' expo)?
//! expo   := '-' expo | power
//! atom   := number | 'r' | 'pi' | func '(' expr ')' | '(' expr ')'
//! ```
//!
//! Exponents must not depend on `r`. `×`, `÷` and `−` are accepted as
//! aliases of `*`, `/` and `-`.

mod jet;
mod parser;

use std::fmt;

use thiserror::Error;

pub use jet::Jet2;
pub use parser::parse;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExprError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { name: String, offset: usize },

    #[error("domain error: {op} at r = {r}")]
    Domain { op: String, r: f64 },

    #[error("non-finite value from {op} at r = {r}")]
    NonFinite { op: String, r: f64 },
}

impl ExprError {
    pub fn is_syntax(&self) -> bool {
        matches!(
            self,
            ExprError::Syntax { .. } | ExprError::UnknownIdentifier { .. }
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Sinh,
    Cosh,
    Tanh,
    Exp,
    Log,
    Sqrt,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Tanh => "tanh",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
        }
    }

    pub fn from_name(s: &str) -> Option<Func> {
        Some(match s {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "sinh" => Func::Sinh,
            "cosh" => Func::Cosh,
            "tanh" => Func::Tanh,
            "exp" => Func::Exp,
            "log" => Func::Log,
            "sqrt" => Func::Sqrt,
            _ => return None,
        })
    }

    pub const ALL: [Func; 8] = [
        Func::Sin,
        Func::Cos,
        Func::Sinh,
        Func::Cosh,
        Func::Tanh,
        Func::Exp,
        Func::Log,
        Func::Sqrt,
    ];
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Var,
    Num(f64),
    Pi,
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    /// Base and an `r`-free exponent.
    Pow(Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

impl Expr {
    pub fn depends_on_r(&self) -> bool {
        match self {
            Expr::Var => true,
            Expr::Num(_) | Expr::Pi => false,
            Expr::Neg(e) | Expr::Call(_, e) => e.depends_on_r(),
            Expr::Binary(_, a, b) | Expr::Pow(a, b) => a.depends_on_r() || b.depends_on_r(),
        }
    }

    /// Value, first and second derivative at `r`.
    pub fn eval_jet2(&self, r: f64) -> Result<Jet2, ExprError> {
        let j = self.jet(r)?;
        if !j.is_finite() {
            return Err(ExprError::NonFinite {
                op: "expression".into(),
                r,
            });
        }
        Ok(j)
    }

    pub fn eval(&self, r: f64) -> Result<f64, ExprError> {
        self.eval_jet2(r).map(|j| j.value)
    }

    fn jet(&self, r: f64) -> Result<Jet2, ExprError> {
        let out = match self {
            Expr::Var => Jet2::variable(r),
            Expr::Num(v) => Jet2::constant(*v),
            Expr::Pi => Jet2::constant(std::f64::consts::PI),
            Expr::Neg(e) => -e.jet(r)?,
            Expr::Binary(op, a, b) => {
                let (x, y) = (a.jet(r)?, b.jet(r)?);
                match op {
                    BinOp::Add => x + y,
                    BinOp::Sub => x - y,
                    BinOp::Mul => x * y,
                    BinOp::Div => {
                        if y.value == 0.0 {
                            return Err(domain("division by zero", r));
                        }
                        x / y
                    }
                }
            }
            Expr::Pow(base, expo) => {
                let x = base.jet(r)?;
                let c = expo.jet(r)?.value;
                pow_jet(x, c, r)?
            }
            Expr::Call(f, arg) => {
                let x = arg.jet(r)?;
                match f {
                    Func::Sin => x.sin(),
                    Func::Cos => x.cos(),
                    Func::Sinh => x.sinh(),
                    Func::Cosh => x.cosh(),
                    Func::Tanh => x.tanh(),
                    Func::Exp => x.exp(),
                    Func::Log => {
                        if x.value <= 0.0 {
                            return Err(domain("log of non-positive value", r));
                        }
                        x.ln()
                    }
                    Func::Sqrt => {
                        if x.value < 0.0 {
                            return Err(domain("sqrt of negative value", r));
                        }
                        if x.value == 0.0 {
                            if x.d1 == 0.0 && x.d2 == 0.0 {
                                Jet2::constant(0.0)
                            } else {
                                return Err(domain("sqrt is not differentiable at 0", r));
                            }
                        } else {
                            x.sqrt()
                        }
                    }
                }
            }
        };
        if out.is_finite() {
            Ok(out)
        } else {
            Err(ExprError::NonFinite {
                op: self.op_name().into(),
                r,
            })
        }
    }

    fn op_name(&self) -> &'static str {
        match self {
            Expr::Var => "r",
            Expr::Num(_) => "literal",
            Expr::Pi => "pi",
            Expr::Neg(_) => "negation",
            Expr::Binary(BinOp::Add, ..) => "addition",
            Expr::Binary(BinOp::Sub, ..) => "subtraction",
            Expr::Binary(BinOp::Mul, ..) => "multiplication",
            Expr::Binary(BinOp::Div, ..) => "division",
            Expr::Pow(..) => "power",
            Expr::Call(f, _) => f.name(),
        }
    }
}

fn domain(op: &str, r: f64) -> ExprError {
    ExprError::Domain { op: op.into(), r }
}

fn pow_jet(x: Jet2, c: f64, r: f64) -> Result<Jet2, ExprError> {
    if c.fract() == 0.0 && c.abs() <= i32::MAX as f64 {
        let k = c as i32;
        if k < 0 && x.value == 0.0 {
            return Err(domain("negative power of zero", r));
        }
        return Ok(x.powi(k));
    }
    if x.value < 0.0 {
        return Err(domain("non-integer power of negative value", r));
    }
    if x.value == 0.0 {
        if c > 2.0 {
            return Ok(Jet2::constant(0.0));
        }
        return Err(domain("non-integer power is not twice differentiable at 0", r));
    }
    Ok(x.powf(c))
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Var => write!(f, "r"),
            Expr::Num(v) => write!(f, "{v:?}"),
            Expr::Pi => write!(f, "pi"),
            Expr::Neg(e) => write!(f, "(-{e})"),
            Expr::Binary(op, a, b) => {
                let s = match op {
                    BinOp::Add => "+",
                    BinOp::Sub => "-",
                    BinOp::Mul => "*",
                    BinOp::Div => "/",
                };
                write!(f, "({a} {s} {b})")
            }
            Expr::Pow(a, b) => write!(f, "({a} ^ {b})"),
            Expr::Call(func, a) => write!(f, "{}({a})", func.name()),
        }
    }
}
