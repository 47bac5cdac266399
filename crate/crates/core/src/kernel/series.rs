//! Truncated power-series recurrences on coefficient slices.
//!
//! All routines take coefficients `a[k]` of `Σ a_k h^k` and return the same
//! number of coefficients. Callers guarantee equal lengths and a nonzero
//! (or positive, where a logarithm is involved) leading coefficient.

use super::real::Real;

fn zeros(like: &Real, n: usize) -> Vec<Real> {
    vec![like.lift_i64(0); n]
}

/// Cauchy product `c_k = Σ_{i≤k} a_i b_{k-i}`.
pub(crate) fn mul(a: &[Real], b: &[Real]) -> Vec<Real> {
    let n = a.len().min(b.len());
    let mut out = zeros(&a[0], n);
    for (k, slot) in out.iter_mut().enumerate() {
        let mut acc = &a[0] * &b[k];
        for i in 1..=k {
            acc = acc + &a[i] * &b[k - i];
        }
        *slot = acc;
    }
    out
}

/// `a / b`; requires `b[0] != 0`.
pub(crate) fn div(a: &[Real], b: &[Real]) -> Vec<Real> {
    let n = a.len().min(b.len());
    let mut q: Vec<Real> = Vec::with_capacity(n);
    for k in 0..n {
        let mut acc = a[k].clone();
        for j in 1..=k {
            acc = acc - &b[j] * &q[k - j];
        }
        q.push(acc / &b[0]);
    }
    q
}

pub(crate) fn recip(b: &[Real]) -> Vec<Real> {
    let mut one = zeros(&b[0], b.len());
    one[0] = b[0].lift_i64(1);
    div(&one, b)
}

/// `exp(a)`: `e_k = (1/k) Σ_{j=1}^{k} j a_j e_{k-j}`.
pub(crate) fn exp(a: &[Real]) -> Vec<Real> {
    let n = a.len();
    let mut e: Vec<Real> = Vec::with_capacity(n);
    e.push(a[0].exp());
    for k in 1..n {
        let mut acc = &a[1] * &e[k - 1];
        for j in 2..=k {
            acc = acc + (&a[j] * &e[k - j]) * (j as i64);
        }
        e.push(acc / (k as i64));
    }
    e
}

/// `ln(a)`; requires `a[0] > 0`.
pub(crate) fn ln(a: &[Real]) -> Vec<Real> {
    let n = a.len();
    let mut l: Vec<Real> = Vec::with_capacity(n);
    l.push(a[0].ln());
    for k in 1..n {
        let mut acc = &a[k] * (k as i64);
        for j in 1..k {
            acc = acc - (&l[j] * &a[k - j]) * (j as i64);
        }
        l.push(acc / (&a[0] * (k as i64)));
    }
    l
}

/// `a^alpha`; requires `a[0] > 0`.
/// `p_k = 1/(k a_0) Σ_{j=1}^{k} ((alpha+1) j - k) a_j p_{k-j}`.
pub(crate) fn pow(a: &[Real], alpha: &Real) -> Vec<Real> {
    let n = a.len();
    let mut p: Vec<Real> = Vec::with_capacity(n);
    p.push(a[0].powf(alpha));
    let alpha1 = alpha + 1;
    for k in 1..n {
        let mut acc = a[0].lift_i64(0);
        for j in 1..=k {
            let w = &alpha1 * (j as i64) - (k as i64);
            acc = acc + w * &a[j] * &p[k - j];
        }
        p.push(acc / (&a[0] * (k as i64)));
    }
    p
}

/// Composes an outer function with `inner`, given the outer derivative tower
/// `derivs[k] = F^{(k)}(inner[0])`: returns coefficients of
/// `Σ_k derivs[k]/k! · (inner - inner[0])^k`.
pub(crate) fn compose(derivs: &[Real], inner: &[Real]) -> Vec<Real> {
    let n = inner.len();
    let mut out = zeros(&inner[0], n);
    out[0] = derivs[0].clone();
    if n == 1 {
        return out;
    }
    let mut shifted = inner.to_vec();
    shifted[0] = inner[0].lift_i64(0);
    // power = (inner - inner[0])^k, which starts at h^k
    let mut power = shifted.clone();
    let mut factorial = inner[0].lift_i64(1);
    for (k, dk) in derivs.iter().enumerate().take(n).skip(1) {
        factorial = factorial * (k as i64);
        let coef = dk / &factorial;
        for (slot, p) in out.iter_mut().zip(power.iter()).skip(k) {
            *slot = &*slot + &(&coef * p);
        }
        if k + 1 < n {
            power = mul(&power, &shifted);
        }
    }
    out
}
