//! Expression builders for the functions under study.
//!
//! With `γ` the Euler–Mascheroni constant:
//!
//! | spec | expression |
//! |------|------------|
//! | `ThetaAlpha(α)` | `t^α (ln t − ψ(t))` |
//! | `F` | `t (ln t − ψ(t))` |
//! | `G` | `−ln t` |
//! | `H` | `−γ ln t` |
//! | `LogQ` | `−t (ln t − ψ(t)) ln t − γ ln t` |
//! | `LogQp(p)` | `−t (ln(p t/(t+p+1)) − ψ_p(t)) ln t − γ ln t` |
//! | `OpenProblemExponent(q, θ)` | `(t (ψ_q(t) − ln θ(t)) − γ) ln t` |
//!
//! `Q`, `Qp` and `OpenProblemQ` are `exp` of the matching log form, so the
//! LCM checker can differentiate the log form directly.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::jet::Expr;
use crate::kernel::{EvalConfig, Real};
use crate::special::{PIndex, QParam};

/// Candidate `θ(t)` for the q-analogue exponent.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum ThetaFamily {
    /// `θ(t) = t`
    Identity,
    /// `θ(t) = a·t + b`
    Affine { a: Real, b: Real },
    /// `θ(t) = (a·t + b)/(c·t + d)`
    Rational { a: Real, b: Real, c: Real, d: Real },
    /// `θ(t) = (1 − q^t)/(1 − q)`, with the `q` of the enclosing spec
    QBracket,
}

impl ThetaFamily {
    pub fn id(&self) -> &'static str {
        match self {
            ThetaFamily::Identity => "identity",
            ThetaFamily::Affine { .. } => "affine",
            ThetaFamily::Rational { .. } => "rational",
            ThetaFamily::QBracket => "q_bracket",
        }
    }

    /// `name=value` pairs of the family parameters.
    pub fn parameters(&self) -> Vec<(&'static str, &Real)> {
        match self {
            ThetaFamily::Identity | ThetaFamily::QBracket => vec![],
            ThetaFamily::Affine { a, b } => vec![("a", a), ("b", b)],
            ThetaFamily::Rational { a, b, c, d } => vec![("a", a), ("b", b), ("c", c), ("d", d)],
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            ThetaFamily::Affine { a, b } if a.is_zero() && b.is_zero() => {
                Err(Error::InvalidSpec("affine θ is identically zero".into()))
            }
            ThetaFamily::Rational { c, d, .. } if c.is_zero() && d.is_zero() => {
                Err(Error::InvalidSpec("rational θ has a zero denominator".into()))
            }
            ThetaFamily::Rational { a, b, .. } if a.is_zero() && b.is_zero() => {
                Err(Error::InvalidSpec("rational θ is identically zero".into()))
            }
            _ => Ok(()),
        }
    }

    pub fn build(&self, q: &QParam) -> Expr {
        let t = Expr::var;
        match self {
            ThetaFamily::Identity => t(),
            ThetaFamily::Affine { a, b } => t().affine(a.clone(), b.clone()),
            ThetaFamily::Rational { a, b, c, d } => t().affine(a.clone(), b.clone()) / t().affine(c.clone(), d.clone()),
            ThetaFamily::QBracket => {
                // (1 − e^{t ln q}) / (1 − q)
                let qv = q.get();
                let one = Real::one(qv.digits());
                let ln_q = qv.ln();
                let denom = &one - qv;
                let num = t().affine(ln_q, Real::zero(qv.digits())).exp();
                let inv = denom.recip();
                num.affine(-&inv, inv)
            }
        }
    }
}

/// Declarative description of a function to analyze.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "function", rename_all = "snake_case")]
pub enum FunctionSpec {
    ThetaAlpha {
        alpha: Real,
    },
    F,
    G,
    H,
    LogQ,
    Q,
    LogQp {
        p: PIndex,
    },
    Qp {
        p: PIndex,
    },
    OpenProblemExponent {
        q: QParam,
        theta: ThetaFamily,
    },
    /// `exp` of [`FunctionSpec::OpenProblemExponent`].
    OpenProblemQ {
        q: QParam,
        theta: ThetaFamily,
    },
    /// Any other expression, e.g. a primitive for evaluation.
    Custom {
        label: String,
        expr: Expr,
    },
}

fn ln_t() -> Expr {
    Expr::var().ln()
}

/// `ln t − ψ(t)`
fn log_minus_psi() -> Expr {
    ln_t() - Expr::var().psi()
}

fn f_expr() -> Expr {
    Expr::var() * log_minus_psi()
}

fn h_expr() -> Expr {
    -(Expr::euler_gamma() * ln_t())
}

fn log_q_expr() -> Expr {
    -(f_expr() * ln_t()) - Expr::euler_gamma() * ln_t()
}

fn log_qp_expr(p: PIndex) -> Expr {
    let pr = Real::from_u64(p.get(), 30);
    let shift = Real::from_u64(p.get() + 1, 30);
    let frac = Expr::var().affine(pr, Real::zero(30)) / Expr::var().affine(Real::one(30), shift);
    let fp = Expr::var() * (frac.ln() - Expr::var().psi_p(p));
    -(fp * ln_t()) - Expr::euler_gamma() * ln_t()
}

fn open_problem_expr(q: &QParam, theta: &ThetaFamily) -> Expr {
    let inner = Expr::var() * (Expr::var().psi_q(q.clone()) - theta.build(q).ln());
    (inner - Expr::euler_gamma()) * ln_t()
}

impl FunctionSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            FunctionSpec::ThetaAlpha { alpha } if !alpha.is_finite() => {
                Err(Error::InvalidSpec("α must be finite".into()))
            }
            FunctionSpec::OpenProblemExponent { theta, .. } | FunctionSpec::OpenProblemQ { theta, .. } => {
                theta.validate()
            }
            _ => Ok(()),
        }
    }

    /// Expression tree of the function itself.
    pub fn build(&self) -> Result<Expr> {
        self.validate()?;
        Ok(match self {
            FunctionSpec::ThetaAlpha { alpha } => Expr::var().powf(alpha.clone()) * log_minus_psi(),
            FunctionSpec::F => f_expr(),
            FunctionSpec::G => -ln_t(),
            FunctionSpec::H => h_expr(),
            FunctionSpec::LogQ => log_q_expr(),
            FunctionSpec::Q => log_q_expr().exp(),
            FunctionSpec::LogQp { p } => log_qp_expr(*p),
            FunctionSpec::Qp { p } => log_qp_expr(*p).exp(),
            FunctionSpec::OpenProblemExponent { q, theta } => open_problem_expr(q, theta),
            FunctionSpec::OpenProblemQ { q, theta } => open_problem_expr(q, theta).exp(),
            FunctionSpec::Custom { expr, .. } => expr.clone(),
        })
    }

    /// Closed log form `ln f`, when the function is defined as an exponential.
    pub fn log_form(&self) -> Result<Option<Expr>> {
        self.validate()?;
        Ok(match self {
            FunctionSpec::Q => Some(log_q_expr()),
            FunctionSpec::Qp { p } => Some(log_qp_expr(*p)),
            FunctionSpec::OpenProblemQ { q, theta } => Some(open_problem_expr(q, theta)),
            _ => None,
        })
    }

    /// Short human-readable label, e.g. `theta_alpha(alpha=1.5)`.
    pub fn label(&self) -> String {
        match self {
            FunctionSpec::ThetaAlpha { alpha } => format!("theta_alpha(alpha={})", alpha.to_f64()),
            FunctionSpec::F => "f".into(),
            FunctionSpec::G => "g".into(),
            FunctionSpec::H => "h".into(),
            FunctionSpec::LogQ => "log_q".into(),
            FunctionSpec::Q => "q".into(),
            FunctionSpec::LogQp { p } => format!("log_qp(p={p})"),
            FunctionSpec::Qp { p } => format!("qp(p={p})"),
            FunctionSpec::OpenProblemExponent { q, theta } => {
                format!("open_problem_exponent(q={}, theta={})", q.get().to_f64(), theta.id())
            }
            FunctionSpec::OpenProblemQ { q, theta } => {
                format!("open_problem_q(q={}, theta={})", q.get().to_f64(), theta.id())
            }
            FunctionSpec::Custom { label, .. } => label.clone(),
        }
    }
}

/// `| ln q(t) − (f(t)·g(t) + h(t)) |` for `t ∈ (0, 1)`, each side evaluated
/// from its own expression.
pub fn decomposition_residual(t: &Real, cfg: &EvalConfig) -> Result<Real> {
    if !t.is_positive() || *t >= cfg.one() {
        return Err(domain(format!("decomposition is checked on (0, 1), got t = {t}")));
    }
    let log_q = FunctionSpec::LogQ.build()?.value(t, cfg)?;
    let f = FunctionSpec::F.build()?.value(t, cfg)?;
    let g = FunctionSpec::G.build()?.value(t, cfg)?;
    let h = FunctionSpec::H.build()?.value(t, cfg)?;
    Ok((log_q - (f * g + h)).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::euler_gamma;

    fn cfg() -> EvalConfig {
        EvalConfig::default()
    }

    fn eval(spec: &FunctionSpec, t: &Real) -> Real {
        spec.build().unwrap().value(t, &cfg()).unwrap()
    }

    fn tiny() -> Real {
        Real::parse("1e-45", 50).unwrap()
    }

    #[test]
    fn log_q_vanishes_at_one() {
        let c = cfg();
        assert!(eval(&FunctionSpec::LogQ, &c.one()).abs() < tiny());
        let p = PIndex::new(7).unwrap();
        assert!(eval(&FunctionSpec::LogQp { p }, &c.one()).abs() < tiny());
    }

    #[test]
    fn f_at_one_is_gamma() {
        let c = cfg();
        assert!((eval(&FunctionSpec::F, &c.one()) - euler_gamma(&c)).abs() < tiny());
    }

    #[test]
    fn theta_one_equals_f() {
        let c = cfg();
        let th = FunctionSpec::ThetaAlpha { alpha: c.one() };
        for t in ["0.01", "0.3", "1.7", "40"] {
            let t = c.parse(t).unwrap();
            assert!((eval(&th, &t) - eval(&FunctionSpec::F, &t)).abs() < tiny());
        }
    }

    #[test]
    fn residual_small_inside_unit_interval() {
        let c = cfg();
        for t in ["0.5", "0.1", "0.9"] {
            let r = decomposition_residual(&c.parse(t).unwrap(), &c).unwrap();
            assert!(r < Real::parse("1e-40", 50).unwrap(), "t={t}: {r}");
        }
    }

    #[test]
    fn residual_domain() {
        let c = cfg();
        assert!(matches!(decomposition_residual(&c.one(), &c), Err(Error::Domain(_))));
        assert!(matches!(decomposition_residual(&c.zero(), &c), Err(Error::Domain(_))));
    }

    #[test]
    fn q_is_exp_of_log_q() {
        let c = cfg();
        let t = c.parse("0.37").unwrap();
        let a = eval(&FunctionSpec::Q, &t);
        let b = eval(&FunctionSpec::LogQ, &t).exp();
        assert!((a - b).abs() < tiny());
    }

    #[test]
    fn open_problem_near_classical() {
        let c = cfg();
        let q = QParam::new(c.parse("0.9999").unwrap()).unwrap();
        let spec = FunctionSpec::OpenProblemExponent {
            q,
            theta: ThetaFamily::Identity,
        };
        for t in ["0.1", "0.5", "0.9"] {
            let t = c.parse(t).unwrap();
            let d = (eval(&spec, &t) - eval(&FunctionSpec::LogQ, &t)).abs();
            assert!(d.to_f64() < 1e-2, "{d}");
        }
    }

    #[test]
    fn q_bracket_tends_to_identity() {
        let c = cfg();
        let q = QParam::new(c.parse("0.999999").unwrap()).unwrap();
        let t = c.parse("0.4").unwrap();
        let v = ThetaFamily::QBracket.build(&q).value(&t, &c).unwrap();
        assert!((v - &t).abs().to_f64() < 1e-5);
    }

    #[test]
    fn degenerate_theta_rejected() {
        let c = cfg();
        let q = QParam::new(c.ratio(1, 2)).unwrap();
        let spec = FunctionSpec::OpenProblemQ {
            q,
            theta: ThetaFamily::Rational {
                a: c.one(),
                b: c.one(),
                c: c.zero(),
                d: c.zero(),
            },
        };
        assert!(matches!(spec.build(), Err(Error::InvalidSpec(_))));
    }

    #[test]
    fn negative_theta_is_a_domain_error() {
        let c = cfg();
        let q = QParam::new(c.ratio(1, 2)).unwrap();
        let spec = FunctionSpec::OpenProblemExponent {
            q,
            theta: ThetaFamily::Affine {
                a: c.one(),
                b: c.int(-5),
            },
        };
        let r = spec.build().unwrap().value(&c.ratio(1, 2), &c);
        assert!(matches!(r, Err(Error::Domain(_))));
    }

    #[test]
    fn spec_serde_round_trip() {
        let c = cfg();
        let spec = FunctionSpec::OpenProblemQ {
            q: QParam::new(c.parse("0.5").unwrap()).unwrap(),
            theta: ThetaFamily::Affine {
                a: c.one(),
                b: c.ratio(1, 4),
            },
        };
        let s = serde_json::to_string(&spec).unwrap();
        let back: FunctionSpec = serde_json::from_str(&s).unwrap();
        assert_eq!(back.label(), spec.label());
        assert_eq!(serde_json::to_string(&back).unwrap(), s);
    }
}
