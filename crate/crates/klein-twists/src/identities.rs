//! Polynomial identities behind the classification: the three generating
//! invariants of GL(3,2), reductions of characteristic-zero models, and the
//! elliptic quotient of the Klein curve.

use std::sync::Arc;

use num_bigint::BigInt;

use crate::algebra::{det3, reduce_mod2, FieldContext, GfPoly, IntPoly, MultiPoly};
use crate::group::all_invertible;
use crate::twist::named_curve;

fn f2() -> Arc<FieldContext> {
    FieldContext::get(1).expect("prime field")
}

/// The generators of the GL(3,2) invariant ring, read off the additive
/// polynomial prod over v in span(X,Y,Z) of (T + v)
///   = T^8 + I4 T^4 + I6 T^2 + I7 T.
pub struct DicksonTriple {
    pub i4: GfPoly,
    pub i6: GfPoly,
    pub i7: GfPoly,
}

/// The eight-factor product, arity 4 with T as the last variable.
pub fn span_product() -> GfPoly {
    let ctx = f2();
    let one = ctx.one();
    let mut prod = MultiPoly::monomial(4, &[0, 0, 0, 0], one.clone());
    for mask in 0u32..8 {
        let mut terms = vec![(vec![0u32, 0, 0, 1], one.clone())];
        for j in 0..3 {
            if mask & (1 << j) != 0 {
                let mut e = vec![0u32; 4];
                e[j] = 1;
                terms.push((e, one.clone()));
            }
        }
        let factor = MultiPoly::from_terms(4, terms);
        prod = prod.mul(&factor).expect("same arity");
    }
    prod
}

/// True when the product collapses to the four sparse T-powers 8, 4, 2, 1
/// with a monic leading term.
pub fn span_product_is_additive_shape() -> bool {
    let p = span_product();
    p.terms().all(|(e, _)| matches!(e[3], 8 | 4 | 2 | 1))
        && p.coeff(&[0, 0, 0, 8]).is_some()
}

pub fn dickson_invariants() -> DicksonTriple {
    let p = span_product();
    let mut parts = [MultiPoly::zero(3), MultiPoly::zero(3), MultiPoly::zero(3)];
    for (e, c) in p.terms() {
        let slot = match e[3] {
            8 => continue,
            4 => 0,
            2 => 1,
            1 => 2,
            d => panic!("unexpected T-degree {d} in the span product"),
        };
        let mono = MultiPoly::monomial(3, &[e[0], e[1], e[2]], c.clone());
        parts[slot] = parts[slot].add(&mono).expect("same arity");
    }
    let [i4, i6, i7] = parts;
    DicksonTriple { i4, i6, i7 }
}

/// Determinant of the 3x3 matrix whose columns are the given powers of
/// X, Y, Z (one variable per row).
pub fn power_determinant(powers: [u32; 3]) -> GfPoly {
    let ctx = f2();
    let mono = |v: usize, e: u32| {
        let mut exps = [0u32; 3];
        exps[v] = e;
        GfPoly::monomial(3, &exps, ctx.one())
    };
    let col = |v: usize| [mono(v, powers[0]), mono(v, powers[1]), mono(v, powers[2])];
    let [r0, r1, r2] = [col(0), col(1), col(2)];
    det3(&[r0, r1, r2]).expect("same arity")
}

/// The linear system (v, v^2, v^4) (I7, I6, I4)^T = v^8 at v = X, Y, Z
/// determines the invariants by Cramer's rule; the solution must agree with
/// the coefficients of the span product, and the base determinant is I7
/// itself.
pub fn cramer_solution_matches() -> bool {
    let inv = dickson_invariants();
    let base = power_determinant([1, 2, 4]);
    let i7_num = power_determinant([8, 2, 4]);
    let i6_num = power_determinant([1, 8, 4]);
    let i4_num = power_determinant([1, 2, 8]);
    let agrees = |i: &GfPoly, num: &GfPoly| i.mul(&base).expect("arity") == *num;
    agrees(&inv.i7, &i7_num)
        && agrees(&inv.i6, &i6_num)
        && agrees(&inv.i4, &i4_num)
        && inv.i7 == base
}

/// f(M v) = f(v) for every invertible binary matrix M.
pub fn invariant_under_all_substitutions(f: &GfPoly) -> bool {
    assert_eq!(f.arity(), 3);
    let ctx = f2();
    all_invertible().iter().all(|m| {
        let rows: Vec<Vec<_>> = (0..3)
            .map(|i| (0..3).map(|j| ctx.el(m.bit(i, j) as u64)).collect())
            .collect();
        f.subst_linear(&rows) == *f
    })
}

/// Substituting T = U + V into the span product equals the sum of the U and
/// V substitutions: the product is additive in T.
pub fn t_additivity_holds() -> bool {
    let p = span_product();
    let relabel = |tvar: usize| {
        MultiPoly::from_terms(
            5,
            p.terms().map(|(e, c)| {
                let mut e5 = vec![e[0], e[1], e[2], 0, 0];
                e5[tvar] = e[3];
                (e5, c.clone())
            }),
        )
    };
    let p_u = relabel(3);
    let p_v = relabel(4);

    // T^d -> sum over i with odd C(d, i) of U^i V^(d-i), by Lucas
    let substituted = MultiPoly::from_terms(
        5,
        p.terms().flat_map(|(e, c)| {
            let d = e[3];
            (0..=d)
                .filter(move |i| i & !d == 0)
                .map(move |i| (vec![e[0], e[1], e[2], i, d - i], c.clone()))
                .collect::<Vec<_>>()
        }),
    );
    substituted == p_u.add(&p_v).expect("same arity")
}

// ---------------------------------------------------------------------------
// Characteristic-zero models and their binary reductions
// ---------------------------------------------------------------------------

fn ivar(i: usize) -> IntPoly {
    let mut e = [0u32; 3];
    e[i] = 1;
    IntPoly::monomial(3, &e, BigInt::from(1))
}

fn imul(a: &IntPoly, b: &IntPoly) -> IntPoly {
    a.mul(b).expect("same arity")
}

fn iadd(polys: &[IntPoly]) -> IntPoly {
    polys
        .iter()
        .fold(IntPoly::zero(3), |acc, p| acc.add(p).expect("same arity"))
}

fn elementary_symmetric() -> (IntPoly, IntPoly, IntPoly) {
    let (x, y, z) = (ivar(0), ivar(1), ivar(2));
    let s1 = iadd(&[x.clone(), y.clone(), z.clone()]);
    let s2 = iadd(&[imul(&x, &y), imul(&y, &z), imul(&z, &x)]);
    let s3 = imul(&imul(&x, &y), &z);
    (s1, s2, s3)
}

/// X^3 Y + Y^3 Z + Z^3 X and companions with permuted roles.
fn cyclic_cubic(powers: [u32; 2]) -> IntPoly {
    let [a, b] = powers;
    IntPoly::from_terms(
        3,
        [
            (vec![a, b, 0], BigInt::from(1)),
            (vec![0, a, b], BigInt::from(1)),
            (vec![b, 0, a], BigInt::from(1)),
        ],
    )
}

/// Integer numerators of the characteristic-zero models that reduce to
/// catalog curves modulo 2.
pub const CHAR_ZERO_MODELS: [&str; 3] = ["O4", "A4", "Kprime"];

fn char_zero_numerator(name: &str) -> Option<(IntPoly, &'static str)> {
    match name {
        // 7 O4 = (X^4+Y^4+Z^4) - 3 sum X^2Y^2 + 3 sum X^2YZ + 6 (X^3Z+Y^3X+Z^3Y)
        "O4" => {
            let pow4 = IntPoly::from_terms(
                3,
                [
                    (vec![4, 0, 0], BigInt::from(1)),
                    (vec![0, 4, 0], BigInt::from(1)),
                    (vec![0, 0, 4], BigInt::from(1)),
                ],
            );
            let sq = IntPoly::from_terms(
                3,
                [
                    (vec![2, 2, 0], BigInt::from(1)),
                    (vec![0, 2, 2], BigInt::from(1)),
                    (vec![2, 0, 2], BigInt::from(1)),
                ],
            );
            let mixed = IntPoly::from_terms(
                3,
                [
                    (vec![2, 1, 1], BigInt::from(1)),
                    (vec![1, 2, 1], BigInt::from(1)),
                    (vec![1, 1, 2], BigInt::from(1)),
                ],
            );
            let num = iadd(&[
                pow4,
                sq.scale(&BigInt::from(-3)),
                mixed.scale(&BigInt::from(3)),
                cyclic_cubic([1, 3]).scale(&BigInt::from(6)),
            ]);
            Some((num, "alpha"))
        }
        // A4 = 7 s1 (s1^3 + s3) - (2 s1^2 + s2)^2
        "A4" => {
            let (s1, s2, s3) = elementary_symmetric();
            let cubic = s1.pow(3).add(&s3).expect("arity");
            let first = imul(&s1, &cubic).scale(&BigInt::from(7));
            let inner = iadd(&[s1.pow(2).scale(&BigInt::from(2)), s2]);
            let num = first.sub(&inner.pow(2)).expect("arity");
            Some((num, "alpha"))
        }
        // X^4 + 21 X^2YZ - 147 Y^2Z^2 + 49 XY^3 + 49 XZ^3
        "Kprime" => {
            let num = IntPoly::from_terms(
                3,
                [
                    (vec![4, 0, 0], BigInt::from(1)),
                    (vec![2, 1, 1], BigInt::from(21)),
                    (vec![0, 2, 2], BigInt::from(-147)),
                    (vec![1, 3, 0], BigInt::from(49)),
                    (vec![1, 0, 3], BigInt::from(49)),
                ],
            );
            Some((num, "Kprime_mod2"))
        }
        _ => None,
    }
}

/// The catalog curve a characteristic-zero model reduces to.
pub fn char_zero_target(name: &str) -> Option<&'static str> {
    char_zero_numerator(name).map(|(_, target)| target)
}

/// Reduce the named characteristic-zero numerator modulo 2 and compare with
/// its catalog curve; None for an unknown model name.
pub fn reduce_and_compare(name: &str) -> Option<bool> {
    let ctx = f2();
    let (num, target) = char_zero_numerator(name)?;
    let target = named_curve(target).expect("catalog name").to_poly(&ctx);
    Some(reduce_mod2(&num, &ctx) == target)
}

// ---------------------------------------------------------------------------
// The elliptic quotient of the Klein curve, over the integers
// ---------------------------------------------------------------------------

/// Coordinates of the quotient morphism by the cyclic coordinate shift.
fn quotient_coordinates() -> (IntPoly, IntPoly, IntPoly) {
    let x = IntPoly::from_terms(
        3,
        [
            (vec![2, 1, 0], BigInt::from(1)),
            (vec![0, 2, 1], BigInt::from(1)),
            (vec![1, 0, 2], BigInt::from(1)),
            (vec![1, 1, 1], BigInt::from(1)),
        ],
    );
    let (s1, s2, s3) = elementary_symmetric();
    let y = imul(&s1, &s2);
    let z = s3;
    (x, y, z)
}

/// y^2 z - 5xyz + x^3 + x^2 z + 7x z^2, the projective Weierstrass relation
/// of y^2 + 5xy = x^3 - x^2 + 7x after x -> -x.
fn weierstrass_form(x: &IntPoly, y: &IntPoly, z: &IntPoly) -> IntPoly {
    iadd(&[
        imul(&y.pow(2), z),
        imul(&imul(x, y), z).scale(&BigInt::from(-5)),
        x.pow(3),
        imul(&x.pow(2), z),
        imul(x, &z.pow(2)).scale(&BigInt::from(7)),
    ])
}

/// The quotient coordinates satisfy the Weierstrass relation with the
/// printed degree-8 right side.
pub fn elliptic_identity_holds() -> bool {
    let (x, y, z) = quotient_coordinates();
    let lhs = weierstrass_form(&x, &y, &z);
    let rhs = imul(&cyclic_cubic([3, 1]), &cyclic_cubic([3, 2]));
    lhs == rhs
}

/// s1 * x = (X^3Y + Y^3Z + Z^3X) + s2^2: the alternative display of the
/// x coordinate (reading the printed subscript "s_s" as s_2).
pub fn elliptic_numerator_identity_holds() -> bool {
    let (x, _, _) = quotient_coordinates();
    let (s1, s2, _) = elementary_symmetric();
    imul(&s1, &x) == iadd(&[cyclic_cubic([3, 1]), s2.pow(2)])
}

/// Outcome of probing the printed variant identity, which replaces x by
/// s2^2 / s1 and keeps the displayed equality.
pub struct VariantProbe {
    /// cleared of denominators, does the display hold as printed?
    pub holds_as_printed: bool,
    /// does it hold after multiplying the right side by s2^2 / s1^3?
    pub corrected_holds: bool,
    /// exact quotient of the cleared left side by the degree-8 right side
    pub quotient: Option<String>,
    /// numeric spot checks (point, cleared LHS, RHS * s1^3, RHS * s2^2)
    pub samples: Vec<([i64; 3], BigInt, BigInt, BigInt)>,
}

/// Substitute x = s2^2 / s1 into the Weierstrass form, clear s1^3, and
/// compare against the printed right side.
pub fn elliptic_variant_probe() -> VariantProbe {
    let (_, y, z) = quotient_coordinates();
    let (s1, s2, _) = elementary_symmetric();

    // s1^3 * (y^2 z - 5xyz + x^3 + x^2 z + 7x z^2) at x = s2^2/s1
    let cleared = iadd(&[
        imul(&s1.pow(3), &imul(&y.pow(2), &z)),
        imul(&s1.pow(2), &imul(&s2.pow(2), &imul(&y, &z))).scale(&BigInt::from(-5)),
        s2.pow(6),
        imul(&s1, &imul(&s2.pow(4), &z)),
        imul(&s1.pow(2), &imul(&s2.pow(2), &z.pow(2))).scale(&BigInt::from(7)),
    ]);
    let rhs = imul(&cyclic_cubic([3, 1]), &cyclic_cubic([1, 3]));

    let holds_as_printed = cleared == imul(&rhs, &s1.pow(3));
    let corrected_holds = cleared == imul(&rhs, &s2.pow(2));
    let quotient = cleared
        .div_exact(&rhs)
        .ok()
        .map(|q| if q == s2.pow(2) { "s2^2".to_string() } else { format!("{q:?}") });

    let samples = [[1i64, 1, 1], [1, 2, 3]]
        .into_iter()
        .map(|p| {
            let point: Vec<BigInt> = p.iter().map(|&c| BigInt::from(c)).collect();
            let at = |f: &IntPoly| f.eval(&point).expect("arity matches");
            (p, at(&cleared), at(&imul(&rhs, &s1.pow(3))), at(&imul(&rhs, &s2.pow(2))))
        })
        .collect();

    VariantProbe { holds_as_printed, corrected_holds, quotient, samples }
}
