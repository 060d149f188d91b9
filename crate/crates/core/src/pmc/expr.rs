use crate::{Error, Real, Result};
use std::fmt;

/// Invariant variables; the only coordinates an expression can mention.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    P0,
    Rho,
    N0,
    NRho,
}

impl Var {
    pub fn name(self) -> &'static str {
        match self {
            Var::P0 => "p0",
            Var::Rho => "rho",
            Var::N0 => "N0",
            Var::NRho => "Nrho",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Some(match s {
            "p0" => Var::P0,
            "rho" => Var::Rho,
            "N0" => Var::N0,
            "Nrho" => Var::NRho,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Log,
    Sqrt,
    Abs,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Some(match s {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "exp" => Func::Exp,
            "log" => Func::Log,
            "sqrt" => Func::Sqrt,
            "abs" => Func::Abs,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
            BinOp::Pow => '^',
        }
    }
}

/// Expression tree node.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Lit(f64),
    Var(Var),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

impl Expr {
    pub fn lit(v: f64) -> Self {
        Expr::Lit(v)
    }

    pub fn var(v: Var) -> Self {
        Expr::Var(v)
    }

    pub fn neg(e: Expr) -> Self {
        Expr::Neg(Box::new(e))
    }

    pub fn bin(op: BinOp, a: Expr, b: Expr) -> Self {
        Expr::Bin(op, Box::new(a), Box::new(b))
    }

    pub fn call(f: Func, a: Expr) -> Self {
        Expr::Call(f, Box::new(a))
    }
}

/// Values of the invariant variables at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Invariants<T> {
    pub p0: T,
    pub rho: T,
    pub n0: T,
    pub nrho: T,
}

impl<T: Real> Invariants<T> {
    /// Reduces `(p, N)` to the invariant variables; `Nrho = 0` on the axis.
    pub fn from_point(p: [T; 3], n: [T; 3]) -> Self {
        let rho = p[1].hypot(p[2]);
        let nrho = if rho > T::zero() {
            (n[1] * p[1] + n[2] * p[2]) / rho
        } else {
            T::zero()
        };
        Invariants {
            p0: p[0],
            rho,
            n0: n[0],
            nrho,
        }
    }
}

/// A parsed prescribed-curvature expression.
#[derive(Debug, Clone, PartialEq)]
pub struct PmcExpr {
    pub root: Expr,
}

impl PmcExpr {
    pub fn new(root: Expr) -> Self {
        PmcExpr { root }
    }

    pub fn eval<T: Real>(&self, v: &Invariants<T>) -> Result<T> {
        let out = eval_node(&self.root, v)?;
        if out.is_finite() {
            Ok(out)
        } else {
            Err(Error::Domain("expression is not finite".into()))
        }
    }

    /// True if the tree is the literal zero.
    pub fn is_zero(&self) -> bool {
        matches!(self.root, Expr::Lit(v) if v == 0.0)
    }
}

fn eval_node<T: Real>(e: &Expr, v: &Invariants<T>) -> Result<T> {
    Ok(match e {
        Expr::Lit(x) => T::c(*x),
        Expr::Var(Var::P0) => v.p0,
        Expr::Var(Var::Rho) => v.rho,
        Expr::Var(Var::N0) => v.n0,
        Expr::Var(Var::NRho) => v.nrho,
        Expr::Neg(a) => -eval_node(a, v)?,
        Expr::Bin(op, a, b) => {
            let x = eval_node(a, v)?;
            let y = eval_node(b, v)?;
            match op {
                BinOp::Add => x + y,
                BinOp::Sub => x - y,
                BinOp::Mul => x * y,
                BinOp::Div => {
                    if y == T::zero() {
                        return Err(Error::Domain("division by zero".into()));
                    }
                    x / y
                }
                BinOp::Pow => {
                    let r = x.powf(y);
                    if r.is_nan() {
                        return Err(Error::Domain(format!("{x}^{y} is undefined")));
                    }
                    r
                }
            }
        }
        Expr::Call(f, a) => {
            let x = eval_node(a, v)?;
            match f {
                Func::Sin => x.sin(),
                Func::Cos => x.cos(),
                Func::Exp => x.exp(),
                Func::Abs => x.abs(),
                Func::Log => {
                    if x <= T::zero() {
                        return Err(Error::Domain(format!("log of non-positive value {x}")));
                    }
                    x.ln()
                }
                Func::Sqrt => {
                    if x < T::zero() {
                        return Err(Error::Domain(format!("sqrt of negative value {x}")));
                    }
                    x.sqrt()
                }
            }
        }
    })
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Lit(x) if *x < 0.0 => write!(f, "(-{})", -x),
            Expr::Lit(x) => write!(f, "{x}"),
            Expr::Var(v) => f.write_str(v.name()),
            Expr::Neg(a) => write!(f, "(-{a})"),
            Expr::Bin(op, a, b) => write!(f, "({a} {} {b})", op.symbol()),
            Expr::Call(func, a) => write!(f, "{}({a})", func.name()),
        }
    }
}

impl fmt::Display for PmcExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.root.fmt(f)
    }
}
