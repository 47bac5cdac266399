#![allow(dead_code)]

use cm_lab::jet::Expr;
use cm_lab::special::PIndex;
use cm_lab::Real;
use rand::Rng;

/// Digits used for constants inside generated expressions.
const CONST_DIGITS: u32 = 60;

fn constant<R: Rng>(rng: &mut R) -> Real {
    // multiples of 1/8 in [0.5, 2]
    let k: i64 = rng.gen_range(4..=16);
    Real::ratio(k, 8, CONST_DIGITS)
}

/// An expression that is positive for every `t > 0`.
pub fn positive_expr<R: Rng>(rng: &mut R, depth: u32) -> Expr {
    if depth == 0 {
        return match rng.gen_range(0..3) {
            0 => Expr::var(),
            1 => Expr::constant(constant(rng)),
            _ => Expr::var().affine(constant(rng), constant(rng)),
        };
    }
    match rng.gen_range(0..5) {
        0 => positive_expr(rng, depth - 1) + positive_expr(rng, depth - 1),
        1 => positive_expr(rng, depth - 1) * positive_expr(rng, depth - 1),
        2 => any_expr(rng, depth - 1).exp(),
        3 => positive_expr(rng, depth - 1).powf(constant(rng)),
        _ => positive_expr(rng, depth - 1) / positive_expr(rng, depth - 1),
    }
}

/// An expression defined for every `t > 0`.
pub fn any_expr<R: Rng>(rng: &mut R, depth: u32) -> Expr {
    if depth == 0 {
        return positive_expr(rng, 0);
    }
    match rng.gen_range(0..7) {
        0 => positive_expr(rng, depth - 1).ln(),
        1 => positive_expr(rng, depth - 1).psi(),
        2 => positive_expr(rng, depth - 1).psi_p(PIndex::new(rng.gen_range(1..=20)).unwrap()),
        3 => any_expr(rng, depth - 1) - any_expr(rng, depth - 1),
        4 => any_expr(rng, depth - 1) * any_expr(rng, depth - 1),
        5 => -any_expr(rng, depth - 1),
        _ => positive_expr(rng, depth),
    }
}

pub fn binomial(n: usize, k: usize, digits: u32) -> Real {
    let mut c: u64 = 1;
    for i in 0..k as u64 {
        c = c * (n as u64 - i) / (i + 1);
    }
    Real::from_u64(c, digits)
}

/// `|a − b| ≤ rel·max(|a|, |b|, floor)`.
pub fn close(a: &Real, b: &Real, rel: &Real, floor: &Real) -> bool {
    let scale = a.abs().max(&b.abs()).max(floor).clone();
    (a - b).abs() <= rel * &scale
}
