//! Restriction of a quartic to a line and tangent intersection divisors.
//!
//! A restriction is a binary quartic form in the line parameters (s, u). In
//! characteristic 2 such a form is a perfect square exactly when its two odd
//! coefficients vanish, which is the bitangency test.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::algebra::FieldContext;
use crate::twist::{twists_with_curve, QuarticMask};

use super::points::{Gradient, Line, ProjPoint};
use super::GeometryError;

/// c[j] is the coefficient of s^(4-j) u^j in the restricted form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinQuartic {
    ctx: Arc<FieldContext>,
    c: [u64; 5],
}

impl BinQuartic {
    pub fn coeffs(&self) -> [u64; 5] {
        self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c == [0; 5]
    }

    /// Perfect square of a binary quadratic; in characteristic 2 this is
    /// exactly the vanishing of the odd coefficients.
    pub fn is_square(&self) -> bool {
        self.c[1] == 0 && self.c[3] == 0
    }

    /// Equality up to a nonzero scalar.
    pub fn proportional_to(&self, other: &BinQuartic) -> bool {
        let Some(i) = self.c.iter().position(|&v| v != 0) else {
            return other.is_zero();
        };
        if other.c[i] == 0 {
            return false;
        }
        let lambda = self.ctx.mul_raw(other.c[i], self.ctx.inv_raw(self.c[i]));
        (0..5).all(|j| self.ctx.mul_raw(lambda, self.c[j]) == other.c[j])
    }
}

fn conv(ctx: &Arc<FieldContext>, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] ^= ctx.mul_raw(x, y);
        }
    }
    out
}

/// (a s + b u)^e expanded by Lucas' parity of binomial coefficients,
/// indexed by the power of u.
fn linear_power(ctx: &Arc<FieldContext>, a: u64, b: u64, e: u32) -> Vec<u64> {
    let mut out = vec![0u64; e as usize + 1];
    for i in 0..=e {
        // C(e, i) is odd iff the bits of i are contained in those of e
        if i & !e == 0 {
            out[i as usize] = ctx.mul_raw(ctx.pow_raw(a, (e - i) as u128), ctx.pow_raw(b, i as u128));
        }
    }
    out
}

pub(crate) fn restrict_to_span(
    f: &QuarticMask,
    ctx: &Arc<FieldContext>,
    a: [u64; 3],
    b: [u64; 3],
) -> BinQuartic {
    let mut c = [0u64; 5];
    for e in f.terms() {
        let mut acc = vec![1u64];
        for t in 0..3 {
            if e[t] > 0 {
                acc = conv(ctx, &acc, &linear_power(ctx, a[t], b[t], e[t]));
            }
        }
        debug_assert_eq!(acc.len(), 5);
        for (slot, v) in c.iter_mut().zip(acc) {
            *slot ^= v;
        }
    }
    BinQuartic { ctx: ctx.clone(), c }
}

/// The quartic evaluated along the line, parameterized by the line's two
/// deterministic span points.
pub fn restrict_to_line(f: &QuarticMask, line: &Line) -> BinQuartic {
    let (a, b) = line.span_points();
    restrict_to_span(f, line.ctx(), a.triple(), b.triple())
}

/// Tangent line at a smooth point of the curve: the gradient triple. By the
/// Euler relation a quartic's gradient annihilates the point itself in
/// characteristic 2, so the point always lies on the returned line.
pub fn tangent_line(f: &QuarticMask, p: &ProjPoint) -> Result<Line, GeometryError> {
    if !p.on_curve(f) {
        return Err(GeometryError::PointNotOnCurve);
    }
    let grad = Gradient::new(f, p.ctx()).at(p.triple());
    let line = Line::new(p.ctx(), grad).ok_or(GeometryError::SingularPoint)?;
    debug_assert!(line.contains(p));
    Ok(line)
}

/// Parameters (s, u) with s*a + u*b = x, for x in the span of a and b.
pub(crate) fn span_coordinates(
    ctx: &Arc<FieldContext>,
    a: [u64; 3],
    b: [u64; 3],
    x: [u64; 3],
) -> Option<(u64, u64)> {
    for i in 0..3 {
        for j in (i + 1)..3 {
            let det = ctx.mul_raw(a[i], b[j]) ^ ctx.mul_raw(a[j], b[i]);
            if det == 0 {
                continue;
            }
            let inv = ctx.inv_raw(det);
            let s = ctx.mul_raw(ctx.mul_raw(x[i], b[j]) ^ ctx.mul_raw(x[j], b[i]), inv);
            let u = ctx.mul_raw(ctx.mul_raw(a[i], x[j]) ^ ctx.mul_raw(a[j], x[i]), inv);
            let ok = (0..3).all(|t| ctx.mul_raw(s, a[t]) ^ ctx.mul_raw(u, b[t]) == x[t]);
            return ok.then_some((s, u));
        }
    }
    None
}

/// Intersection divisor of the curve with its tangent line at p, as a merged
/// multiset of points with multiplicities summing to 4.
///
/// For a twist with matrix P the divisor is 2p + q1 + q2 with q1 = P F(p) and
/// q2 = P^3 F^3(p), F the coordinate Frobenius. The claim is certified by
/// comparing the restriction of the curve to the tangent line against the
/// product of the corresponding root forms, up to one scalar.
pub fn tangent_divisor(
    f: &QuarticMask,
    p: &ProjPoint,
) -> Result<Vec<(ProjPoint, u32)>, GeometryError> {
    let twist = *twists_with_curve(f).first().ok_or(GeometryError::NotATwist)?;
    let pm = twist.p;
    let line = tangent_line(f, p)?;
    let ctx = p.ctx();

    let q1 = p.frobenius().apply(&pm);
    let q2 = p.frobenius().frobenius().frobenius().apply(&pm.pow(3));
    for q in [&q1, &q2] {
        if !q.on_curve(f) || !line.contains(q) {
            return Err(GeometryError::DivisorMismatch);
        }
    }

    let (a, b) = line.span_points();
    let restriction = restrict_to_span(f, ctx, a.triple(), b.triple());

    // product of root forms: (u0 s + s0 u) per intersection point
    let mut expected = vec![1u64];
    for (point, mult) in [(p, 2u32), (&q1, 1), (&q2, 1)] {
        let (s0, u0) = span_coordinates(ctx, a.triple(), b.triple(), point.triple())
            .ok_or(GeometryError::DivisorMismatch)?;
        for _ in 0..mult {
            expected = conv(ctx, &expected, &[u0, s0]);
        }
    }
    let expected = BinQuartic {
        ctx: ctx.clone(),
        c: expected.try_into().expect("three root forms give degree 4"),
    };
    if !restriction.proportional_to(&expected) {
        return Err(GeometryError::DivisorMismatch);
    }

    let mut merged: BTreeMap<ProjPoint, u32> = BTreeMap::new();
    *merged.entry(p.clone()).or_default() += 2;
    *merged.entry(q1).or_default() += 1;
    *merged.entry(q2).or_default() += 1;
    Ok(merged.into_iter().collect())
}
