use std::fmt;
use std::ops;

use super::ChartError;
use crate::scalar::Analytic;

/// Expression tree over chart coordinates `x0 .. x{n-1}`.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(f64),
    Var(usize),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, i32),
    Sin(Box<Expr>),
    Cos(Box<Expr>),
    Exp(Box<Expr>),
    Log(Box<Expr>),
}

impl Expr {
    pub fn num(value: f64) -> Self {
        Expr::Num(value)
    }

    pub fn var(index: usize) -> Self {
        Expr::Var(index)
    }

    pub fn pow(self, n: i32) -> Self {
        Expr::Pow(Box::new(self), n)
    }

    pub fn sin(self) -> Self {
        Expr::Sin(Box::new(self))
    }

    pub fn cos(self) -> Self {
        Expr::Cos(Box::new(self))
    }

    pub fn exp(self) -> Self {
        Expr::Exp(Box::new(self))
    }

    pub fn log(self) -> Self {
        Expr::Log(Box::new(self))
    }

    /// Sum of the given terms; `0` when empty.
    pub fn sum<I: IntoIterator<Item = Expr>>(terms: I) -> Self {
        terms
            .into_iter()
            .reduce(|acc, t| acc + t)
            .unwrap_or(Expr::Num(0.0))
    }

    /// Largest variable index in the tree, if any.
    pub fn max_var(&self) -> Option<usize> {
        match self {
            Expr::Num(_) => None,
            Expr::Var(i) => Some(*i),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                match (a.max_var(), b.max_var()) {
                    (Some(x), Some(y)) => Some(x.max(y)),
                    (x, y) => x.or(y),
                }
            }
            Expr::Neg(a)
            | Expr::Pow(a, _)
            | Expr::Sin(a)
            | Expr::Cos(a)
            | Expr::Exp(a)
            | Expr::Log(a) => a.max_var(),
        }
    }

    /// Checks that every variable index is below `dim`.
    pub fn check_dim(&self, dim: usize) -> Result<(), ChartError> {
        match self.max_var() {
            Some(index) if index >= dim => Err(ChartError::VariableOutOfRange {
                index,
                dim,
                offset: None,
            }),
            _ => Ok(()),
        }
    }

    /// Renumbers variables, e.g. to lift a base expression onto a total space.
    pub fn map_vars(&self, f: &impl Fn(usize) -> usize) -> Expr {
        let bx = |e: &Expr| Box::new(e.map_vars(f));
        match self {
            Expr::Num(v) => Expr::Num(*v),
            Expr::Var(i) => Expr::Var(f(*i)),
            Expr::Add(a, b) => Expr::Add(bx(a), bx(b)),
            Expr::Sub(a, b) => Expr::Sub(bx(a), bx(b)),
            Expr::Mul(a, b) => Expr::Mul(bx(a), bx(b)),
            Expr::Div(a, b) => Expr::Div(bx(a), bx(b)),
            Expr::Neg(a) => Expr::Neg(bx(a)),
            Expr::Pow(a, n) => Expr::Pow(bx(a), *n),
            Expr::Sin(a) => Expr::Sin(bx(a)),
            Expr::Cos(a) => Expr::Cos(bx(a)),
            Expr::Exp(a) => Expr::Exp(bx(a)),
            Expr::Log(a) => Expr::Log(bx(a)),
        }
    }

    /// Evaluates the tree at `vars`.
    ///
    /// Fails with a domain error on division by zero, `log` of a
    /// non-positive value, or a negative power of zero. Indexing past the end
    /// of `vars` is reported as a dimension mismatch.
    pub fn eval<S: Analytic>(&self, vars: &[S]) -> Result<S, ChartError> {
        Ok(match self {
            Expr::Num(v) => S::constant(*v),
            Expr::Var(i) => vars
                .get(*i)
                .cloned()
                .ok_or(ChartError::DimensionMismatch {
                    what: "evaluation point",
                    expected: *i + 1,
                    found: vars.len(),
                })?,
            Expr::Add(a, b) => a.eval(vars)? + b.eval(vars)?,
            Expr::Sub(a, b) => a.eval(vars)? - b.eval(vars)?,
            Expr::Mul(a, b) => a.eval(vars)? * b.eval(vars)?,
            Expr::Div(a, b) => {
                let den = b.eval(vars)?;
                if den.primal() == 0.0 {
                    return Err(ChartError::Domain("division by zero".into()));
                }
                a.eval(vars)? / den
            }
            Expr::Neg(a) => -a.eval(vars)?,
            Expr::Pow(a, n) => {
                let base = a.eval(vars)?;
                if *n < 0 && base.primal() == 0.0 {
                    return Err(ChartError::Domain("negative power of zero".into()));
                }
                base.powi(*n)
            }
            Expr::Sin(a) => a.eval(vars)?.sin(),
            Expr::Cos(a) => a.eval(vars)?.cos(),
            Expr::Exp(a) => a.eval(vars)?.exp(),
            Expr::Log(a) => {
                let arg = a.eval(vars)?;
                if !(arg.primal() > 0.0) {
                    return Err(ChartError::Domain(format!(
                        "log of non-positive value {}",
                        arg.primal()
                    )));
                }
                arg.ln()
            }
        })
    }

    // Binding strength used by the printer: sums 1, products 2, unary minus 3,
    // powers 4, atoms 5.
    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(..) => 3,
            Expr::Num(v) if v.is_sign_negative() => 3,
            Expr::Pow(..) => 4,
            _ => 5,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.precedence() < min {
            write!(f, "(")?;
            self.write_at(f, 0)?;
            return write!(f, ")");
        }
        match self {
            Expr::Num(v) if v.is_sign_negative() => write!(f, "-{}", -v),
            Expr::Num(v) => write!(f, "{v}"),
            Expr::Var(i) => write!(f, "x{i}"),
            Expr::Add(a, b) => {
                a.write_at(f, 1)?;
                write!(f, " + ")?;
                b.write_at(f, 2)
            }
            Expr::Sub(a, b) => {
                a.write_at(f, 1)?;
                write!(f, " - ")?;
                b.write_at(f, 2)
            }
            Expr::Mul(a, b) => {
                a.write_at(f, 2)?;
                write!(f, "*")?;
                b.write_at(f, 3)
            }
            Expr::Div(a, b) => {
                a.write_at(f, 2)?;
                write!(f, "/")?;
                b.write_at(f, 3)
            }
            Expr::Neg(a) => {
                write!(f, "-")?;
                a.write_at(f, 3)
            }
            Expr::Pow(a, n) => {
                a.write_at(f, 5)?;
                if *n < 0 {
                    // not expressible in the grammar; printed for diagnostics only
                    write!(f, "^({n})")
                } else {
                    write!(f, "^{n}")
                }
            }
            Expr::Sin(a) => write_call(f, "sin", a),
            Expr::Cos(a) => write_call(f, "cos", a),
            Expr::Exp(a) => write_call(f, "exp", a),
            Expr::Log(a) => write_call(f, "log", a),
        }
    }
}

fn write_call(f: &mut fmt::Formatter<'_>, name: &str, arg: &Expr) -> fmt::Result {
    write!(f, "{name}(")?;
    arg.write_at(f, 0)?;
    write!(f, ")")
}

/// Prints in the input grammar with minimal parentheses.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}

macro_rules! expr_binop {
    ($trait:ident, $method:ident, $variant:ident) => {
        impl ops::$trait for Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                Expr::$variant(Box::new(self), Box::new(rhs))
            }
        }
    };
}

expr_binop!(Add, add, Add);
expr_binop!(Sub, sub, Sub);
expr_binop!(Mul, mul, Mul);
expr_binop!(Div, div, Div);

impl ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::Neg(Box::new(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eval_basic_constants() {
        let e = Expr::var(0).exp();
        assert!((e.eval(&[1.0f64]).unwrap() - std::f64::consts::E).abs() <= 1e-15);
        assert_eq!(Expr::var(0).sin().eval(&[0.0f64]).unwrap(), 0.0);
        let prod = Expr::var(0) * Expr::var(1);
        assert_eq!(prod.eval(&[2.0f64, 3.0]).unwrap(), 6.0);
    }

    #[test]
    fn domain_errors() {
        let div = Expr::num(1.0) / Expr::var(0);
        assert!(matches!(div.eval(&[0.0f64]), Err(ChartError::Domain(_))));
        let log = Expr::var(0).log();
        assert!(matches!(log.eval(&[-1.0f64]), Err(ChartError::Domain(_))));
        assert!(matches!(log.eval(&[0.0f64]), Err(ChartError::Domain(_))));
        assert!(log.eval(&[2.0f64]).is_ok());
    }

    #[test]
    fn printer_uses_minimal_parentheses() {
        let e = (Expr::var(0) + Expr::var(1)) * -Expr::var(2).pow(2);
        assert_eq!(e.to_string(), "(x0 + x1)*-x2^2");
        let e = Expr::var(0) - (Expr::var(1) - Expr::var(2));
        assert_eq!(e.to_string(), "x0 - (x1 - x2)");
        let e = (-Expr::var(0)).pow(3);
        assert_eq!(e.to_string(), "(-x0)^3");
    }

    #[test]
    fn map_vars_shifts_indices() {
        let e = Expr::var(0) * Expr::var(1).sin();
        assert_eq!(e.map_vars(&|i| i + 3).max_var(), Some(4));
    }
}
