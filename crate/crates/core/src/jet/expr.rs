use std::fmt;
use std::ops;

use serde::{Deserialize, Serialize};

use super::jet::{jet_compose, Jet, Primitive};
use crate::error::{Error, Result};
use crate::kernel::{euler_gamma, EvalConfig, Real};
use crate::special::{PIndex, QParam};

/// Expression tree in one variable `t`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Expr {
    Var,
    Const(Real),
    /// The Euler–Mascheroni constant, materialized at the working precision.
    EulerGamma,
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Ln(Box<Expr>),
    Exp(Box<Expr>),
    Pow(Box<Expr>, Real),
    Psi(Box<Expr>),
    PsiP(PIndex, Box<Expr>),
    PsiQ(QParam, Box<Expr>),
    /// `a·arg + b`
    Affine {
        a: Real,
        b: Real,
        arg: Box<Expr>,
    },
}

impl Expr {
    pub fn var() -> Expr {
        Expr::Var
    }

    pub fn constant(c: Real) -> Expr {
        Expr::Const(c)
    }

    pub fn euler_gamma() -> Expr {
        Expr::EulerGamma
    }

    pub fn ln(self) -> Expr {
        Expr::Ln(Box::new(self))
    }

    pub fn exp(self) -> Expr {
        Expr::Exp(Box::new(self))
    }

    pub fn powf(self, alpha: Real) -> Expr {
        Expr::Pow(Box::new(self), alpha)
    }

    pub fn psi(self) -> Expr {
        Expr::Psi(Box::new(self))
    }

    pub fn psi_p(self, p: PIndex) -> Expr {
        Expr::PsiP(p, Box::new(self))
    }

    pub fn psi_q(self, q: QParam) -> Expr {
        Expr::PsiQ(q, Box::new(self))
    }

    pub fn affine(self, a: Real, b: Real) -> Expr {
        Expr::Affine {
            a,
            b,
            arg: Box::new(self),
        }
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        match self {
            Expr::Var | Expr::Const(_) | Expr::EulerGamma => 1,
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => 1 + a.size() + b.size(),
            Expr::Neg(a)
            | Expr::Ln(a)
            | Expr::Exp(a)
            | Expr::Pow(a, _)
            | Expr::Psi(a)
            | Expr::PsiP(_, a)
            | Expr::PsiQ(_, a)
            | Expr::Affine { arg: a, .. } => 1 + a.size(),
        }
    }

    /// Jet of the expression at `t0` to `order`.
    pub fn jet(&self, t0: &Real, order: usize, cfg: &EvalConfig) -> Result<Jet> {
        if order > cfg.max_order {
            return Err(Error::OrderTooLarge {
                order,
                max: cfg.max_order,
            });
        }
        let t0 = t0.to_digits(cfg.digits());
        let var = Jet::variable(&t0, order)?;
        self.eval(&var, cfg)
    }

    /// Value at `t0`.
    pub fn value(&self, t0: &Real, cfg: &EvalConfig) -> Result<Real> {
        Ok(self.jet(t0, 0, cfg)?.value().clone())
    }

    fn eval(&self, var: &Jet, cfg: &EvalConfig) -> Result<Jet> {
        let t0 = var.base_point();
        let n = var.order();
        let d = cfg.digits();
        Ok(match self {
            Expr::Var => var.clone(),
            Expr::Const(c) => Jet::constant(&c.to_digits(d), t0, n)?,
            Expr::EulerGamma => Jet::constant(&euler_gamma(cfg), t0, n)?,
            Expr::Add(a, b) => a.eval(var, cfg)?.add(&b.eval(var, cfg)?)?,
            Expr::Sub(a, b) => a.eval(var, cfg)?.sub(&b.eval(var, cfg)?)?,
            Expr::Mul(a, b) => a.eval(var, cfg)?.mul(&b.eval(var, cfg)?)?,
            Expr::Div(a, b) => a.eval(var, cfg)?.div(&b.eval(var, cfg)?)?,
            Expr::Neg(a) => a.eval(var, cfg)?.neg(),
            Expr::Ln(a) => jet_compose(&Primitive::Ln, &a.eval(var, cfg)?, cfg)?,
            Expr::Exp(a) => jet_compose(&Primitive::Exp, &a.eval(var, cfg)?, cfg)?,
            Expr::Pow(a, alpha) => jet_compose(&Primitive::Power(alpha.to_digits(d)), &a.eval(var, cfg)?, cfg)?,
            Expr::Psi(a) => jet_compose(&Primitive::Psi, &a.eval(var, cfg)?, cfg)?,
            Expr::PsiP(p, a) => jet_compose(&Primitive::PsiP(*p), &a.eval(var, cfg)?, cfg)?,
            Expr::PsiQ(q, a) => jet_compose(&Primitive::PsiQ(q.clone()), &a.eval(var, cfg)?, cfg)?,
            Expr::Affine { a, b, arg } => arg.eval(var, cfg)?.affine(&a.to_digits(d), &b.to_digits(d)),
        })
    }
}

/// `f^{(n)}(t0)` via a jet of order `n`.
pub fn derivative(e: &Expr, n: usize, t0: &Real, cfg: &EvalConfig) -> Result<Real> {
    let jet = e.jet(t0, n, cfg)?;
    Ok(jet.derivative(n).expect("jet has order n"))
}

macro_rules! expr_binop {
    ($tr:ident, $method:ident, $variant:ident) => {
        impl ops::$tr for Expr {
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

fn short(r: &Real) -> String {
    let v = r.to_f64();
    if v == v.trunc() && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else {
        format!("{v}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Var => write!(f, "t"),
            Expr::Const(c) => write!(f, "{}", short(c)),
            Expr::EulerGamma => write!(f, "γ"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "{a}·{b}"),
            Expr::Div(a, b) => write!(f, "{a}/{b}"),
            Expr::Neg(a) => write!(f, "-{a}"),
            Expr::Ln(a) => write!(f, "ln({a})"),
            Expr::Exp(a) => write!(f, "exp({a})"),
            Expr::Pow(a, alpha) => write!(f, "{a}^{}", short(alpha)),
            Expr::Psi(a) => write!(f, "ψ({a})"),
            Expr::PsiP(p, a) => write!(f, "ψ_{p}({a})"),
            Expr::PsiQ(q, a) => write!(f, "ψ_q[{}]({a})", short(q.get())),
            Expr::Affine { a, b, arg } => write!(f, "({}·{arg} + {})", short(a), short(b)),
        }
    }
}
