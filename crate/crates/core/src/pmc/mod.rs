//! Prescribed curvature functions `F(p, N)` invariant under rotations about the `x0` axis.

mod expr;
mod parser;

pub use expr::{BinOp, Expr, Func, Invariants, PmcExpr, Var};
pub use parser::parse_pmc;

use crate::{Error, Real, Result};

/// Default finite-difference step for derivatives.
pub const DEFAULT_FD_STEP: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub enum PmcKind {
    Expression(PmcExpr),
    /// `C (p0)^2`.
    RotatingDrop { c: f64 },
    /// `-C <grad phi, N>` for an axisymmetric potential `phi(p0, rho)`.
    ChargedFilm { c: f64, phi: PmcExpr },
}

#[derive(Debug, Clone, PartialEq)]
pub struct PmcFunction {
    pub kind: PmcKind,
    pub fd_step: f64,
}

impl PmcFunction {
    pub fn expression(e: PmcExpr) -> Self {
        PmcFunction {
            kind: PmcKind::Expression(e),
            fd_step: DEFAULT_FD_STEP,
        }
    }

    pub fn rotating_drop(c: f64) -> Self {
        PmcFunction {
            kind: PmcKind::RotatingDrop { c },
            fd_step: DEFAULT_FD_STEP,
        }
    }

    pub fn charged_film(c: f64, phi: PmcExpr) -> Self {
        PmcFunction {
            kind: PmcKind::ChargedFilm { c, phi },
            fd_step: DEFAULT_FD_STEP,
        }
    }

    /// `F ≡ 0`.
    pub fn zero() -> Self {
        Self::expression(PmcExpr::new(Expr::Lit(0.0)))
    }

    /// `F ≡ v`.
    pub fn constant(v: f64) -> Self {
        Self::expression(PmcExpr::new(Expr::Lit(v)))
    }

    pub fn with_fd_step(mut self, h: f64) -> Self {
        self.fd_step = h;
        self
    }

    /// Parses `rotating_drop(C)`, `charged_film(C, phi)` or a plain expression.
    pub fn from_spec(spec: &str) -> Result<Self> {
        let s = spec.trim();
        let lead = spec.len() - spec.trim_start().len();
        if let Some(args) = builtin_args(s, "rotating_drop") {
            let c = parse_number(args.trim(), lead + "rotating_drop(".len())?;
            return Ok(Self::rotating_drop(c));
        }
        if let Some(args) = builtin_args(s, "charged_film") {
            let comma = args.find(',').ok_or_else(|| Error::Syntax {
                offset: lead + s.len() - 1,
                message: "charged_film expects (C, phi)".into(),
            })?;
            let base = lead + "charged_film(".len();
            let c = parse_number(args[..comma].trim(), base)?;
            let phi = parse_pmc(&args[comma + 1..]).map_err(|e| match e {
                Error::Syntax { offset, message } => Error::Syntax {
                    offset: offset + base + comma + 1,
                    message,
                },
                other => other,
            })?;
            return Ok(Self::charged_film(c, phi));
        }
        parse_pmc(spec).map(Self::expression)
    }

    /// True if `F` is the literal zero expression or a zero-strength builtin.
    pub fn is_zero(&self) -> bool {
        match &self.kind {
            PmcKind::Expression(e) => e.is_zero(),
            PmcKind::RotatingDrop { c } | PmcKind::ChargedFilm { c, .. } => *c == 0.0,
        }
    }

    /// Evaluates `F(p, N)`.
    pub fn eval<T: Real>(&self, p: [T; 3], n: [T; 3]) -> Result<T> {
        let v = Invariants::from_point(p, n);
        self.eval_invariants(&v)
    }

    /// Evaluates `F` from precomputed invariants.
    pub fn eval_invariants<T: Real>(&self, v: &Invariants<T>) -> Result<T> {
        match &self.kind {
            PmcKind::Expression(e) => e.eval(v),
            PmcKind::RotatingDrop { c } => Ok(T::c(*c) * v.p0 * v.p0),
            PmcKind::ChargedFilm { c, phi } => {
                let h = T::c(self.fd_step);
                let at = |p0: T, rho: T| {
                    phi.eval(&Invariants {
                        p0,
                        rho,
                        n0: T::zero(),
                        nrho: T::zero(),
                    })
                };
                let two = T::c(2.0);
                let d0 = (at(v.p0 + h, v.rho)? - at(v.p0 - h, v.rho)?) / (two * h);
                let dr = if v.rho >= h {
                    (at(v.p0, v.rho + h)? - at(v.p0, v.rho - h)?) / (two * h)
                } else {
                    (at(v.p0, v.rho + h)? - at(v.p0, v.rho)?) / h
                };
                Ok(-T::c(*c) * (d0 * v.n0 + dr * v.nrho))
            }
        }
    }

    /// Central differences of `F` in `p` and, ambiently, in `N`.
    pub fn derivatives<T: Real>(&self, p: [T; 3], n: [T; 3]) -> Result<([T; 3], [T; 3])> {
        let h = T::c(self.fd_step);
        let two = T::c(2.0);
        let mut d1 = [T::zero(); 3];
        let mut d2 = [T::zero(); 3];
        for i in 0..3 {
            let mut a = p;
            let mut b = p;
            a[i] = a[i] + h;
            b[i] = b[i] - h;
            d1[i] = (self.eval(a, n)? - self.eval(b, n)?) / (two * h);
            let mut a = n;
            let mut b = n;
            a[i] = a[i] + h;
            b[i] = b[i] - h;
            d2[i] = (self.eval(p, a)? - self.eval(p, b)?) / (two * h);
        }
        Ok((d1, d2))
    }
}

fn builtin_args<'a>(s: &'a str, name: &str) -> Option<&'a str> {
    let rest = s.strip_prefix(name)?.trim_start();
    let inner = rest.strip_prefix('(')?.strip_suffix(')')?;
    Some(inner)
}

fn parse_number(s: &str, offset: usize) -> Result<f64> {
    s.parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| Error::Syntax {
            offset,
            message: format!("expected a number, found '{s}'"),
        })
}

/// Evaluates `F(p, N)`.
pub fn eval_pmc<T: Real>(f: &PmcFunction, p: [T; 3], n: [T; 3]) -> Result<T> {
    f.eval(p, n)
}

/// `(D1 F, D2 F)` at `(p, N)`.
pub fn pmc_derivatives<T: Real>(
    f: &PmcFunction,
    p: [T; 3],
    n: [T; 3],
) -> Result<([T; 3], [T; 3])> {
    f.derivatives(p, n)
}
