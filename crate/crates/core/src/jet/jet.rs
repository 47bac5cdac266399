use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::kernel::{series, EvalConfig, Real, JET_ORDER_CAP};
use crate::special::{digamma_tower, psi_p_tower, q_digamma_tower, PIndex, QParam};

/// Truncated Taylor expansion at a point: `coeffs[k] = f^{(k)}(t0) / k!`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Jet {
    base_point: Real,
    coeffs: Vec<Real>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JetOp {
    Add,
    Sub,
    Mul,
}

/// Outer functions a jet can be pushed through.
#[derive(Clone, Debug, PartialEq)]
pub enum Primitive {
    Ln,
    Exp,
    Power(Real),
    Psi,
    PsiP(PIndex),
    PsiQ(QParam),
}

fn check_order(order: usize) -> Result<()> {
    if order > JET_ORDER_CAP {
        Err(Error::OrderTooLarge {
            order,
            max: JET_ORDER_CAP,
        })
    } else {
        Ok(())
    }
}

impl Jet {
    /// The identity function at `t0`: `[t0, 1, 0, …]`.
    pub fn variable(t0: &Real, order: usize) -> Result<Self> {
        check_order(order)?;
        let mut coeffs = vec![t0.lift_i64(0); order + 1];
        coeffs[0] = t0.clone();
        if order >= 1 {
            coeffs[1] = t0.lift_i64(1);
        }
        Ok(Jet {
            base_point: t0.clone(),
            coeffs,
        })
    }

    pub fn constant(c: &Real, t0: &Real, order: usize) -> Result<Self> {
        check_order(order)?;
        let d = c.digits().max(t0.digits());
        let mut coeffs = vec![Real::zero(d); order + 1];
        coeffs[0] = c.to_digits(d);
        Ok(Jet {
            base_point: t0.clone(),
            coeffs,
        })
    }

    /// Builds a jet from raw coefficients.
    pub fn from_coeffs(t0: &Real, coeffs: Vec<Real>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidSpec("a jet needs at least one coefficient".into()));
        }
        check_order(coeffs.len() - 1)?;
        Ok(Jet {
            base_point: t0.clone(),
            coeffs,
        })
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn base_point(&self) -> &Real {
        &self.base_point
    }

    pub fn coeffs(&self) -> &[Real] {
        &self.coeffs
    }

    pub fn value(&self) -> &Real {
        &self.coeffs[0]
    }

    /// `f^{(n)}(t0) = n! · coeffs[n]`.
    pub fn derivative(&self, n: usize) -> Option<Real> {
        let c = self.coeffs.get(n)?;
        let mut f = c.lift_i64(1);
        for k in 2..=n {
            f = f * k as i64;
        }
        Some(c * &f)
    }

    /// All derivatives `f^{(0..=order)}(t0)`.
    pub fn derivatives(&self) -> Vec<Real> {
        let mut f = self.coeffs[0].lift_i64(1);
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| {
                if k > 1 {
                    f = &f * k as i64;
                }
                c * &f
            })
            .collect()
    }

    fn same_frame(&self, other: &Jet) -> Result<()> {
        if self.order() != other.order() || self.base_point != other.base_point {
            Err(Error::MismatchedJets)
        } else {
            Ok(())
        }
    }

    fn with_coeffs(&self, coeffs: Vec<Real>) -> Jet {
        Jet {
            base_point: self.base_point.clone(),
            coeffs,
        }
    }

    pub fn add(&self, other: &Jet) -> Result<Jet> {
        self.same_frame(other)?;
        Ok(self.with_coeffs(self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect()))
    }

    pub fn sub(&self, other: &Jet) -> Result<Jet> {
        self.same_frame(other)?;
        Ok(self.with_coeffs(self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect()))
    }

    pub fn mul(&self, other: &Jet) -> Result<Jet> {
        self.same_frame(other)?;
        Ok(self.with_coeffs(series::mul(&self.coeffs, &other.coeffs)))
    }

    pub fn div(&self, other: &Jet) -> Result<Jet> {
        self.same_frame(other)?;
        if other.value().is_zero() {
            return Err(domain(format!("division by zero at t = {}", self.base_point)));
        }
        Ok(self.with_coeffs(series::div(&self.coeffs, &other.coeffs)))
    }

    pub fn neg(&self) -> Jet {
        self.with_coeffs(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn scale(&self, s: &Real) -> Jet {
        self.with_coeffs(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// `a·self + b`.
    pub fn affine(&self, a: &Real, b: &Real) -> Jet {
        let mut out = self.scale(a);
        out.coeffs[0] = &out.coeffs[0] + b;
        out
    }

    fn positive_inner(&self, what: &str) -> Result<()> {
        if self.value().is_positive() {
            Ok(())
        } else {
            Err(domain(format!(
                "{what} needs a positive argument, got {} at t = {}",
                self.value().to_decimal_string_with(12),
                self.base_point.to_decimal_string_with(12)
            )))
        }
    }

    pub fn ln(&self) -> Result<Jet> {
        self.positive_inner("ln")?;
        Ok(self.with_coeffs(series::ln(&self.coeffs)))
    }

    pub fn exp(&self) -> Jet {
        self.with_coeffs(series::exp(&self.coeffs))
    }

    pub fn powf(&self, alpha: &Real) -> Result<Jet> {
        self.positive_inner("power")?;
        let alpha = alpha.to_digits(self.value().digits());
        Ok(self.with_coeffs(series::pow(&self.coeffs, &alpha)))
    }

    /// Pushes the jet through an outer function whose derivative tower at
    /// `self.value()` is `tower`.
    pub fn compose_tower(&self, tower: &[Real]) -> Result<Jet> {
        if tower.len() < self.coeffs.len() {
            return Err(Error::InvalidSpec(format!(
                "derivative tower of length {} is too short for order {}",
                tower.len(),
                self.order()
            )));
        }
        Ok(self.with_coeffs(series::compose(tower, &self.coeffs)))
    }
}

/// Coefficient-wise add/sub, Cauchy-product mul.
pub fn jet_combine(op: JetOp, a: &Jet, b: &Jet) -> Result<Jet> {
    match op {
        JetOp::Add => a.add(b),
        JetOp::Sub => a.sub(b),
        JetOp::Mul => a.mul(b),
    }
}

/// Taylor coefficients of `primitive ∘ g`.
pub fn jet_compose(primitive: &Primitive, g: &Jet, cfg: &EvalConfig) -> Result<Jet> {
    let order = g.order();
    match primitive {
        Primitive::Ln => g.ln(),
        Primitive::Exp => Ok(g.exp()),
        Primitive::Power(alpha) => g.powf(alpha),
        Primitive::Psi => {
            g.positive_inner("psi")?;
            g.compose_tower(&digamma_tower(g.value(), order, cfg)?)
        }
        Primitive::PsiP(p) => {
            g.positive_inner("psi_p")?;
            g.compose_tower(&psi_p_tower(*p, g.value(), order, cfg)?)
        }
        Primitive::PsiQ(q) => {
            g.positive_inner("psi_q")?;
            g.compose_tower(&q_digamma_tower(q, g.value(), order, cfg)?)
        }
    }
}
