//! Sparse multivariate polynomials over an exact coefficient ring.
//!
//! Terms live in a `BTreeMap` keyed by exponent vectors, so iteration order is
//! ascending lex and the leading term (descending lex) is the last entry.
//! Coefficient rings never need a free-standing zero or one: absent keys are
//! zero, and units are recovered as `c.div_exact(c)` when required.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use super::field::{AlgebraError, FieldContext, FieldElement};
use std::sync::Arc;

/// Exact coefficient ring: equality is decidable and division, where it
/// succeeds, is exact.
pub trait Coeff: Clone + Eq + fmt::Debug {
    fn is_zero(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negate(&self) -> Self;
    /// `self * n` for a natural number `n`; `None` when the result is zero.
    fn times_nat(&self, n: u32) -> Option<Self>;
    /// Exact quotient `self / other`, or `None` if it does not exist.
    fn div_exact(&self, other: &Self) -> Option<Self>;
}

impl Coeff for FieldElement {
    fn is_zero(&self) -> bool {
        FieldElement::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn times(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn negate(&self) -> Self {
        self.clone()
    }
    fn times_nat(&self, n: u32) -> Option<Self> {
        if n.is_multiple_of(2) || FieldElement::is_zero(self) {
            None
        } else {
            Some(self.clone())
        }
    }
    fn div_exact(&self, other: &Self) -> Option<Self> {
        other.inv().ok().map(|i| self.mul(&i))
    }
}

impl Coeff for BigInt {
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negate(&self) -> Self {
        -self
    }
    fn times_nat(&self, n: u32) -> Option<Self> {
        if n == 0 || Zero::is_zero(self) {
            None
        } else {
            Some(self * n)
        }
    }
    fn div_exact(&self, other: &Self) -> Option<Self> {
        if Zero::is_zero(other) {
            return None;
        }
        if Zero::is_zero(&(self % other)) {
            Some(self / other)
        } else {
            None
        }
    }
}

/// Polynomial over `C` in a fixed number of variables.
#[derive(Clone, PartialEq, Eq)]
pub struct MultiPoly<C: Coeff> {
    arity: usize,
    terms: BTreeMap<Vec<u32>, C>,
}

pub type GfPoly = MultiPoly<FieldElement>;
pub type IntPoly = MultiPoly<BigInt>;

impl<C: Coeff> MultiPoly<C> {
    pub fn zero(arity: usize) -> Self {
        MultiPoly { arity, terms: BTreeMap::new() }
    }

    pub fn from_terms<I>(arity: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, C)>,
    {
        let mut p = MultiPoly::zero(arity);
        for (e, c) in terms {
            p.accumulate(e, c);
        }
        p
    }

    pub fn monomial(arity: usize, exps: &[u32], coeff: C) -> Self {
        Self::from_terms(arity, [(exps.to_vec(), coeff)])
    }

    fn accumulate(&mut self, exps: Vec<u32>, c: C) {
        assert_eq!(exps.len(), self.arity, "exponent vector length != arity");
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().plus(&c);
                if s.is_zero() {
                    e.remove();
                } else {
                    e.insert(s);
                }
            }
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending lex order on exponent vectors.
    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &C)> {
        self.terms.iter()
    }

    /// Leading term in descending lex order.
    pub fn lead(&self) -> Option<(&Vec<u32>, &C)> {
        self.terms.iter().next_back()
    }

    pub fn coeff(&self, exps: &[u32]) -> Option<&C> {
        self.terms.get(exps)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    fn check_arity(&self, other: &Self) -> Result<(), AlgebraError> {
        if self.arity != other.arity {
            return Err(AlgebraError::ArityMismatch(self.arity, other.arity));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_arity(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.accumulate(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        MultiPoly {
            arity: self.arity,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c.negate())).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_arity(other)?;
        let mut out = MultiPoly::zero(self.arity);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.accumulate(e, c1.times(c2));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = MultiPoly::zero(self.arity);
        for (e, c0) in &self.terms {
            out.accumulate(e.clone(), c0.times(c));
        }
        out
    }

    /// `self^e` for `e >= 1`.
    pub fn pow(&self, e: u32) -> Self {
        assert!(e >= 1, "pow only supports positive exponents");
        let mut acc = self.clone();
        for _ in 1..e {
            acc = acc.mul(self).expect("arity preserved");
        }
        acc
    }

    /// Value at a point; `None` means the polynomial is identically zero.
    pub fn eval(&self, point: &[C]) -> Option<C> {
        assert_eq!(point.len(), self.arity, "point length != arity");
        let mut acc: Option<C> = None;
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &exp) in point.iter().zip(e) {
                for _ in 0..exp {
                    t = t.times(x);
                }
            }
            acc = Some(match acc {
                None => t,
                Some(a) => a.plus(&t),
            });
        }
        acc
    }

    /// Formal partial derivative in variable `var`.
    pub fn partial(&self, var: usize) -> Self {
        assert!(var < self.arity);
        let mut out = MultiPoly::zero(self.arity);
        for (e, c) in &self.terms {
            if e[var] == 0 {
                continue;
            }
            let Some(dc) = c.times_nat(e[var]) else {
                continue;
            };
            let mut de = e.clone();
            de[var] -= 1;
            out.accumulate(de, dc);
        }
        out
    }

    /// `f(M v)` where `(M v)_i = sum_j M[i][j] v_j`; `matrix` is row-major
    /// with one row per variable.
    pub fn subst_linear(&self, matrix: &[Vec<C>]) -> Self {
        assert_eq!(matrix.len(), self.arity, "matrix rows != arity");
        let forms: Vec<MultiPoly<C>> = matrix
            .iter()
            .map(|row| {
                assert_eq!(row.len(), self.arity, "matrix columns != arity");
                MultiPoly::from_terms(
                    self.arity,
                    row.iter().enumerate().map(|(j, c)| {
                        let mut e = vec![0u32; self.arity];
                        e[j] = 1;
                        (e, c.clone())
                    }),
                )
            })
            .collect();
        let mut out = MultiPoly::zero(self.arity);
        for (e, c) in &self.terms {
            let mut factor: Option<MultiPoly<C>> = None;
            for (i, &exp) in e.iter().enumerate() {
                if exp == 0 {
                    continue;
                }
                let p = forms[i].pow(exp);
                factor = Some(match factor {
                    None => p,
                    Some(f) => f.mul(&p).expect("arity preserved"),
                });
            }
            let term = match factor {
                None => MultiPoly::monomial(self.arity, &vec![0; self.arity], c.clone()),
                Some(f) => f.scale(c),
            };
            out = out.add(&term).expect("arity preserved");
        }
        out
    }

    /// Exact quotient `self / divisor` by leading-term reduction in
    /// descending lex order. Errs when any reduction step fails, which for a
    /// true product `self = q * divisor` never happens.
    pub fn div_exact(&self, divisor: &Self) -> Result<Self, AlgebraError> {
        self.check_arity(divisor)?;
        let (dlead_e, dlead_c) = divisor.lead().ok_or(AlgebraError::NonExactDivision)?;
        let mut rem = self.clone();
        let mut q = MultiPoly::zero(self.arity);
        while let Some((rlead_e, rlead_c)) = rem.lead() {
            let mut qe = Vec::with_capacity(self.arity);
            for (a, b) in rlead_e.iter().zip(dlead_e) {
                if a < b {
                    return Err(AlgebraError::NonExactDivision);
                }
                qe.push(a - b);
            }
            let qc = rlead_c.div_exact(dlead_c).ok_or(AlgebraError::NonExactDivision)?;
            for (e, c) in &divisor.terms {
                let te: Vec<u32> = e.iter().zip(&qe).map(|(a, b)| a + b).collect();
                rem.accumulate(te, c.times(&qc).negate());
            }
            q.accumulate(qe, qc);
        }
        Ok(q)
    }
}

/// Determinant of a 3x3 matrix of polynomials, by cofactor expansion.
pub fn det3<C: Coeff>(m: &[[MultiPoly<C>; 3]; 3]) -> Result<MultiPoly<C>, AlgebraError> {
    let minor = |r0: usize, r1: usize, c0: usize, c1: usize| -> Result<MultiPoly<C>, AlgebraError> {
        m[r0][c0].mul(&m[r1][c1])?.sub(&m[r0][c1].mul(&m[r1][c0])?)
    };
    let t0 = m[0][0].mul(&minor(1, 2, 1, 2)?)?;
    let t1 = m[0][1].mul(&minor(1, 2, 0, 2)?)?;
    let t2 = m[0][2].mul(&minor(1, 2, 0, 1)?)?;
    t0.sub(&t1)?.add(&t2)
}

/// Reduce an integer polynomial mod 2 into the given binary field.
pub fn reduce_mod2(p: &IntPoly, ctx: &Arc<FieldContext>) -> GfPoly {
    GfPoly::from_terms(
        p.arity(),
        p.terms().filter_map(|(e, c)| {
            if Zero::is_zero(&(c % 2u8)) {
                None
            } else {
                Some((e.clone(), ctx.one()))
            }
        }),
    )
}

impl<C: Coeff> fmt::Debug for MultiPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c:?}")?;
            for (i, &exp) in e.iter().enumerate() {
                if exp > 0 {
                    write!(f, "*v{i}^{exp}")?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> Arc<FieldContext> {
        FieldContext::get(1).unwrap()
    }

    fn gf_poly(terms: &[(&[u32], u64)], ctx: &Arc<FieldContext>) -> GfPoly {
        GfPoly::from_terms(
            terms.first().map_or(0, |(e, _)| e.len()),
            terms.iter().map(|(e, v)| (e.to_vec(), ctx.el(*v))),
        )
    }

    fn int_poly(terms: &[(&[u32], i64)]) -> IntPoly {
        IntPoly::from_terms(
            terms.first().map_or(0, |(e, _)| e.len()),
            terms.iter().map(|(e, v)| (e.to_vec(), BigInt::from(*v))),
        )
    }

    #[test]
    fn freshman_dream_in_characteristic_two() {
        let ctx = f2();
        let xy = gf_poly(&[(&[1, 0], 1), (&[0, 1], 1)], &ctx);
        let sq = xy.mul(&xy).unwrap();
        assert_eq!(sq, gf_poly(&[(&[2, 0], 1), (&[0, 2], 1)], &ctx));
    }

    #[test]
    fn cancellation_removes_terms() {
        let ctx = f2();
        let p = gf_poly(&[(&[1, 0], 1)], &ctx);
        assert!(p.add(&p).unwrap().is_zero());
        let q = int_poly(&[(&[2], 3)]);
        assert!(q.sub(&q).unwrap().is_zero());
    }

    #[test]
    fn exact_division_over_f2() {
        let ctx = f2();
        // (x + y)^3 = x^3 + x^2 y + x y^2 + y^3
        let s = gf_poly(&[(&[1, 0], 1), (&[0, 1], 1)], &ctx);
        let cube = s.pow(3);
        assert_eq!(cube.num_terms(), 4);
        let q = cube.div_exact(&s).unwrap();
        assert_eq!(q, s.pow(2));
        // x^2 + xy + y^2 is not divisible by x + y
        let p = gf_poly(&[(&[2, 0], 1), (&[1, 1], 1), (&[0, 2], 1)], &ctx);
        assert_eq!(p.div_exact(&s), Err(AlgebraError::NonExactDivision));
    }

    #[test]
    fn exact_division_over_integers() {
        let a = int_poly(&[(&[1, 0], 1), (&[0, 1], 2)]);
        let b = int_poly(&[(&[1, 0], 3), (&[0, 1], 1)]);
        let prod = a.mul(&b).unwrap();
        assert_eq!(prod.div_exact(&a).unwrap(), b);
        assert_eq!(prod.div_exact(&b).unwrap(), a);
        // 1/2 is not an integer
        let p = int_poly(&[(&[2], 1), (&[0], 1)]);
        let d = int_poly(&[(&[1], 2)]);
        assert_eq!(p.div_exact(&d), Err(AlgebraError::NonExactDivision));
    }

    #[test]
    fn partial_derivatives() {
        // d/dx (x^3 y + x z^2) = 3 x^2 y + z^2
        let p = int_poly(&[(&[3, 1, 0], 1), (&[1, 0, 2], 1)]);
        let dx = p.partial(0);
        assert_eq!(dx, int_poly(&[(&[2, 1, 0], 3), (&[0, 0, 2], 1)]));
        // mod 2 the cubic term survives (3 is odd) but d/dx x^2 vanishes
        let ctx = f2();
        let p = gf_poly(&[(&[3, 1, 0], 1), (&[2, 0, 0], 1)], &ctx);
        assert_eq!(p.partial(0), gf_poly(&[(&[2, 1, 0], 1)], &ctx));
    }

    #[test]
    fn evaluation() {
        let p = int_poly(&[(&[2, 0], 1), (&[0, 1], -4)]);
        let v = p.eval(&[BigInt::from(3), BigInt::from(2)]).unwrap();
        assert_eq!(v, BigInt::from(1));
        assert_eq!(IntPoly::zero(2).eval(&[BigInt::from(1), BigInt::from(1)]), None);
    }

    #[test]
    fn substitution_composes_like_matrix_product() {
        let ctx = f2();
        let one = ctx.one();
        let zero = ctx.zero();
        let m: Vec<Vec<FieldElement>> = vec![
            vec![one.clone(), one.clone(), zero.clone()],
            vec![zero.clone(), one.clone(), one.clone()],
            vec![one.clone(), zero.clone(), zero.clone()],
        ];
        let n: Vec<Vec<FieldElement>> = vec![
            vec![zero.clone(), one.clone(), zero.clone()],
            vec![zero.clone(), zero.clone(), one.clone()],
            vec![one.clone(), zero.clone(), one.clone()],
        ];
        let mn: Vec<Vec<FieldElement>> = (0..3)
            .map(|i| {
                (0..3)
                    .map(|j| {
                        let mut acc = ctx.zero();
                        for (k, nr) in n.iter().enumerate() {
                            acc = acc.add(&m[i][k].mul(&nr[j]));
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        let f = gf_poly(&[(&[3, 1, 0], 1), (&[0, 3, 1], 1), (&[1, 0, 3], 1)], &ctx);
        let lhs = f.subst_linear(&m).subst_linear(&n);
        let rhs = f.subst_linear(&mn);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn determinant_of_constant_matrix() {
        let c = |v: i64| IntPoly::monomial(1, &[0], BigInt::from(v));
        let m = [
            [c(2), c(0), c(1)],
            [c(1), c(3), c(-1)],
            [c(0), c(5), c(4)],
        ];
        // det = 2*(12+5) - 0 + 1*(5-0) = 39
        assert_eq!(det3(&m).unwrap(), c(39));
    }

    #[test]
    fn mod2_reduction() {
        let ctx = f2();
        let p = int_poly(&[(&[1, 0], 2), (&[0, 1], 3)]);
        let r = reduce_mod2(&p, &ctx);
        assert_eq!(r, gf_poly(&[(&[0, 1], 1)], &ctx));
    }
}
