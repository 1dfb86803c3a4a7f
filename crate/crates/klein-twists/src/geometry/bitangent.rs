//! The seven bitangents of a twisted quartic, their fields of definition,
//! and the additive normalization that exhibits the Frobenius action as a
//! binary matrix.
//!
//! A line is bitangent exactly when the restricted binary quartic is a
//! perfect square, i.e. when both odd restriction coefficients vanish. Those
//! two coefficients are first-order polars, so the sweep never builds the
//! full restriction: for span points A, B of the line they are grad f(A).B
//! and grad f(B).A.

use std::sync::Arc;

use crate::algebra::FieldContext;
use crate::group::Mat3F2;
use crate::twist::QuarticMask;

use super::points::{line_frames, Gradient, Line};
use super::tangent::restrict_to_span;
use super::GeometryError;

/// One bitangent, canonical over its minimal field of definition.
#[derive(Clone, Debug)]
pub struct Bitangent {
    pub line: Line,
    pub degree: u32,
}

/// The seven bitangents of a curve, plus their images in the compositum
/// F_2^e, e = lcm of the degrees.
#[derive(Clone, Debug)]
pub struct BitangentSet {
    pub curve: QuarticMask,
    pub lines: Vec<Bitangent>,
    pub common_ctx: Arc<FieldContext>,
    /// canonical coefficient triples in the common field, same order as `lines`
    pub common: Vec<[u64; 3]>,
}

/// Additively closed representatives w_i of the seven bitangents, with the
/// binary matrix R satisfying w_i^(2) = R w_i.
#[derive(Clone, Debug)]
pub struct NormalizedBitangents {
    pub ctx: Arc<FieldContext>,
    /// order matches the originating set's `common` entries
    pub reps: Vec<[u64; 3]>,
    pub r: Mat3F2,
}

fn lcm(a: u32, b: u32) -> u32 {
    let gcd = |mut x: u32, mut y: u32| {
        while y != 0 {
            (x, y) = (y, x % y);
        }
        x
    };
    a / gcd(a, b) * b
}

/// Find the seven bitangents by sweeping every line of P^2(F_2^k) for
/// k = 1..=7. A line is recorded at its minimal field of definition, so
/// revisiting it over extension fields cannot double count. Sweeping the
/// non-divisor degrees 5 and 6 certifies that no bitangent lives there.
pub fn bitangents(f: &QuarticMask) -> Result<BitangentSet, GeometryError> {
    let mut found: Vec<Bitangent> = Vec::new();
    for k in 1..=7u32 {
        let ctx = FieldContext::get(k).expect("sweep degree in range");
        let grad = Gradient::new(f, &ctx);
        for frame in line_frames(k).iter() {
            let c1 = grad.dot(grad.at(frame.a), frame.b);
            if c1 != 0 {
                continue;
            }
            let c3 = grad.dot(grad.at(frame.b), frame.a);
            if c3 != 0 {
                continue;
            }
            let restriction = restrict_to_span(f, &ctx, frame.a, frame.b);
            debug_assert!(restriction.is_square());
            if restriction.is_zero() {
                // a line contained in the quartic is not a bitangent
                continue;
            }
            let line = Line::new(&ctx, frame.line).expect("frame lines are canonical");
            let degree = line.min_definition_degree();
            if degree == k {
                found.push(Bitangent { line, degree });
            }
        }
    }
    if found.len() != 7 {
        return Err(GeometryError::WrongBitangentCount(found.len()));
    }
    found.sort_by_key(|b| (b.degree, b.line.triple()));

    let e = found.iter().fold(1, |acc, b| lcm(acc, b.degree));
    let common_ctx = FieldContext::get(e).expect("compositum degree in range");
    let common = found
        .iter()
        .map(|b| Ok(b.line.embed_into(&common_ctx)?.triple()))
        .collect::<Result<Vec<_>, GeometryError>>()?;

    Ok(BitangentSet { curve: *f, lines: found, common_ctx, common })
}

impl BitangentSet {
    /// Sorted multiset of the fields of definition.
    pub fn degrees(&self) -> Vec<u32> {
        self.lines.iter().map(|b| b.degree).collect()
    }

    /// The permutation induced by coordinate squaring on the common reps;
    /// entry i is the index of the Frobenius image of line i.
    pub fn frobenius_permutation(&self) -> Vec<usize> {
        self.common
            .iter()
            .map(|v| {
                let sq = v.map(|c| self.common_ctx.square_raw(c));
                self.common
                    .iter()
                    .position(|w| *w == sq)
                    .expect("Frobenius permutes the bitangents")
            })
            .collect()
    }

    /// Every pair of bitangents spans a pencil containing exactly one other
    /// bitangent: the incidence structure of a Fano plane.
    pub fn is_fano(&self) -> bool {
        let n = self.common.len();
        (0..n).all(|i| {
            (i + 1..n).all(|j| {
                let thirds = (0..n)
                    .filter(|&k| k != i && k != j)
                    .filter(|&k| pencil_scalars(&self.common_ctx, &self.common, i, j, k).is_some())
                    .count();
                thirds == 1
            })
        })
    }
}

/// Scalars (c, d), both nonzero, with v_i + c v_j = d v_k, if line k lies in
/// the pencil spanned by lines i and j.
fn pencil_scalars(
    ctx: &Arc<FieldContext>,
    v: &[[u64; 3]],
    i: usize,
    j: usize,
    k: usize,
) -> Option<(u64, u64)> {
    let (c, d) = super::tangent::span_coordinates(ctx, v[j], v[k], v[i])?;
    (c != 0 && d != 0).then_some((c, d))
}

/// The target of the normalization: 0 together with the seven representative
/// triples must be closed under coordinate-wise addition.
pub(crate) fn is_additively_closed(reps: &[[u64; 3]]) -> bool {
    if reps.len() != 7 {
        return false;
    }
    let mut all: Vec<[u64; 3]> = reps.to_vec();
    all.push([0, 0, 0]);
    all.sort();
    all.dedup();
    if all.len() != 8 {
        return false;
    }
    reps.iter().enumerate().all(|(i, a)| {
        reps[i + 1..].iter().all(|b| {
            let sum = [a[0] ^ b[0], a[1] ^ b[1], a[2] ^ b[2]];
            all.binary_search(&sum).is_ok()
        })
    })
}

type M3 = [[u64; 3]; 3];

fn mat3_mul(ctx: &Arc<FieldContext>, a: &M3, b: &M3) -> M3 {
    let mut out = [[0u64; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for (k, bk) in b.iter().enumerate() {
                out[i][j] ^= ctx.mul_raw(a[i][k], bk[j]);
            }
        }
    }
    out
}

/// Inverse by adjugate; cofactor signs are trivial in characteristic 2.
fn mat3_inv(ctx: &Arc<FieldContext>, m: &M3) -> Option<M3> {
    let minor = |i: usize, j: usize| {
        let r: Vec<usize> = (0..3).filter(|&t| t != i).collect();
        let c: Vec<usize> = (0..3).filter(|&t| t != j).collect();
        ctx.mul_raw(m[r[0]][c[0]], m[r[1]][c[1]]) ^ ctx.mul_raw(m[r[0]][c[1]], m[r[1]][c[0]])
    };
    let det = (0..3).fold(0u64, |acc, j| acc ^ ctx.mul_raw(m[0][j], minor(0, j)));
    if det == 0 {
        return None;
    }
    let inv_det = ctx.inv_raw(det);
    Some(std::array::from_fn(|i| {
        std::array::from_fn(|j| ctx.mul_raw(minor(j, i), inv_det))
    }))
}

/// Rescale the common representatives so that 0 and the seven triples form
/// a group under addition and coordinate squaring acts as a binary matrix R.
///
/// The scalars are forced step by step: fixing w_1, each further generator
/// is scaled so the pencil sum lands on another representative; the two
/// remaining representatives are then determined sums and only need to lie
/// on the right lines. The closed family is unique up to one global scalar,
/// which is fixed by making R binary.
pub fn normalize_additive(bs: &BitangentSet) -> Result<NormalizedBitangents, GeometryError> {
    let ctx = &bs.common_ctx;
    let v = &bs.common;
    assert_eq!(v.len(), 7, "a bitangent set always carries seven lines");

    let scale3 = |t: [u64; 3], s: u64| t.map(|c| ctx.mul_raw(c, s));
    let xor3 = |a: [u64; 3], b: [u64; 3]| [a[0] ^ b[0], a[1] ^ b[1], a[2] ^ b[2]];

    let mut w: [Option<[u64; 3]>; 7] = Default::default();
    w[0] = Some(v[0]);

    // pencil through lines 0 and 1 fixes the scale of line 1
    let (k1, c1, _) = (2..7)
        .find_map(|k| pencil_scalars(ctx, v, 0, 1, k).map(|(c, d)| (k, c, d)))
        .ok_or(GeometryError::NotAdditivelyClosable)?;
    w[1] = Some(scale3(v[1], c1));
    w[k1] = Some(xor3(v[0], w[1].unwrap()));

    // pencil through line 0 and the next free line fixes one more scale
    let m = (2..7).find(|&i| w[i].is_none()).expect("two pencils fix at most five lines");
    let (k2, c2, _) = (2..7)
        .filter(|&k| k != m && w[k].is_none())
        .find_map(|k| pencil_scalars(ctx, v, 0, m, k).map(|(c, d)| (k, c, d)))
        .ok_or(GeometryError::NotAdditivelyClosable)?;
    w[m] = Some(scale3(v[m], c2));
    w[k2] = Some(xor3(v[0], w[m].unwrap()));

    // the last two representatives are sums; they must land on the two
    // remaining lines projectively
    let free: Vec<usize> = (0..7).filter(|&i| w[i].is_none()).collect();
    debug_assert_eq!(free.len(), 2);
    for sum in [
        xor3(w[1].unwrap(), w[m].unwrap()),
        xor3(w[0].unwrap(), xor3(w[1].unwrap(), w[m].unwrap())),
    ] {
        let canon = super::points::canonicalize(ctx, sum)
            .ok_or(GeometryError::NotAdditivelyClosable)?;
        let slot = free
            .iter()
            .copied()
            .find(|&i| v[i] == canon && w[i].is_none())
            .ok_or(GeometryError::NotAdditivelyClosable)?;
        w[slot] = Some(sum);
    }

    let mut reps: Vec<[u64; 3]> = w.iter().map(|o| o.expect("all seven assigned")).collect();
    if !is_additively_closed(&reps) {
        return Err(GeometryError::NotAdditivelyClosable);
    }

    // squaring matrix on the basis (w_0, w_1, w_m): M = B^(2) B^(-1)
    let basis = [reps[0], reps[1], reps[m]];
    let b: M3 = [
        [basis[0][0], basis[1][0], basis[2][0]],
        [basis[0][1], basis[1][1], basis[2][1]],
        [basis[0][2], basis[1][2], basis[2][2]],
    ];
    let b2: M3 = b.map(|row| row.map(|e| ctx.square_raw(e)));
    let b_inv = mat3_inv(ctx, &b).ok_or(GeometryError::NotAdditivelyClosable)?;
    let mm = mat3_mul(ctx, &b2, &b_inv);

    // all nonzero entries must coincide; their common value is the global scalar
    let mut u = 0u64;
    for row in &mm {
        for &e in row {
            if e != 0 {
                if u == 0 {
                    u = e;
                } else if u != e {
                    return Err(GeometryError::NoBinaryFrobeniusMatrix);
                }
            }
        }
    }
    if u == 0 {
        return Err(GeometryError::NoBinaryFrobeniusMatrix);
    }
    let inv_u = ctx.inv_raw(u);
    for rep in &mut reps {
        *rep = scale3(*rep, inv_u);
    }
    let r = Mat3F2::from_rows([
        [(mm[0][0] != 0) as u8, (mm[0][1] != 0) as u8, (mm[0][2] != 0) as u8],
        [(mm[1][0] != 0) as u8, (mm[1][1] != 0) as u8, (mm[1][2] != 0) as u8],
        [(mm[2][0] != 0) as u8, (mm[2][1] != 0) as u8, (mm[2][2] != 0) as u8],
    ]);
    if !r.is_invertible() {
        return Err(GeometryError::NoBinaryFrobeniusMatrix);
    }

    // certify: squaring each representative is the binary action of R
    for rep in &reps {
        let sq = rep.map(|c| ctx.square_raw(c));
        let mut image = [0u64; 3];
        for (i, img) in image.iter_mut().enumerate() {
            for (j, &c) in rep.iter().enumerate() {
                if r.bit(i, j) == 1 {
                    *img ^= c;
                }
            }
        }
        if sq != image {
            return Err(GeometryError::NoBinaryFrobeniusMatrix);
        }
    }
    debug_assert!(is_additively_closed(&reps));

    Ok(NormalizedBitangents { ctx: ctx.clone(), reps, r })
}

/// The binary matrix describing the Frobenius action on the bitangents of
/// the curve.
pub fn frobenius_matrix_r(f: &QuarticMask) -> Result<Mat3F2, GeometryError> {
    Ok(normalize_additive(&bitangents(f)?)?.r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::additive_kernel;
    use crate::group::class_of;
    use crate::twist::{named_curve, twists_with_curve};

    use super::super::points::canonicalize;

    fn ctx(k: u32) -> Arc<FieldContext> {
        FieldContext::get(k).unwrap()
    }

    fn canonical_set(ctx: &Arc<FieldContext>, triples: &[[u64; 3]]) -> Vec<[u64; 3]> {
        let mut out: Vec<[u64; 3]> = triples
            .iter()
            .map(|&t| canonicalize(ctx, t).expect("nonzero line"))
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// lines (r^i X + r^j Y + r^k Z) for the nonzero kernel elements of
    /// v^8 + c4 v^4 + c2 v^2 + c1 v
    fn parametrized_lines(
        ctx: &Arc<FieldContext>,
        c4: bool,
        c2: bool,
        c1: bool,
        powers: [u128; 3],
    ) -> Vec<[u64; 3]> {
        let lines: Vec<[u64; 3]> = additive_kernel(ctx, c4, c2, c1)
            .into_iter()
            .filter(|r| !r.is_zero())
            .map(|r| powers.map(|e| ctx.pow_raw(r.value(), e)))
            .collect();
        assert_eq!(lines.len(), 7);
        canonical_set(ctx, &lines)
    }

    #[test]
    fn klein_bitangents_match_the_cubing_parametrization() {
        let bs = bitangents(&named_curve("K").unwrap()).unwrap();
        assert_eq!(bs.degrees(), vec![1, 3, 3, 3, 3, 3, 3]);
        assert_eq!(bs.common_ctx.degree(), 3);
        let computed = canonical_set(&bs.common_ctx, &bs.common);
        // a^2 X + a Y + a^4 Z over the roots of x^8 + x
        let expected = parametrized_lines(&ctx(3), false, false, true, [2, 1, 4]);
        assert_eq!(computed, expected);
        assert!(bs.is_fano());
    }

    #[test]
    fn normalized_klein_representatives_are_the_printed_scalars() {
        let bs = bitangents(&named_curve("K").unwrap()).unwrap();
        let norm = normalize_additive(&bs).unwrap();
        // the parametrized triples themselves are additively closed, and the
        // binary-R scaling is unique, so normalize must reproduce them exactly
        let f8 = ctx(3);
        let mut expected: Vec<[u64; 3]> = additive_kernel(&f8, false, false, true)
            .into_iter()
            .filter(|r| !r.is_zero())
            .map(|r| [f8.square_raw(r.value()), r.value(), f8.pow_raw(r.value(), 4)])
            .collect();
        expected.sort();
        let mut got = norm.reps.clone();
        got.sort();
        assert_eq!(got, expected);

        let p = twists_with_curve(&named_curve("K").unwrap())[0].p;
        assert_eq!(norm.r, p.transpose());
    }

    #[test]
    fn dickson_models_reproduce_their_root_parametrizations() {
        let f128 = ctx(7);
        let cases = &[
            ("A", (false, true, true), [2u128, 1, 4]),
            ("gamma10", (true, false, true), [2, 1, 4]),
            ("X_N7", (false, true, true), [1, 16, 8]),
            ("X_h1", (true, false, true), [1, 8, 2]),
        ];
        for &(name, (c4, c2, c1), powers) in cases {
            let bs = bitangents(&named_curve(name).unwrap()).unwrap();
            assert_eq!(bs.degrees(), vec![7; 7], "{name}");
            let computed = canonical_set(&bs.common_ctx, &bs.common);
            let expected = parametrized_lines(&f128, c4, c2, c1, powers);
            assert_eq!(computed, expected, "{name}");
        }

        let bs = bitangents(&named_curve("X_N2").unwrap()).unwrap();
        assert_eq!(bs.degrees(), vec![1, 2, 2, 4, 4, 4, 4]);
        let computed = canonical_set(&bs.common_ctx, &bs.common);
        let expected = parametrized_lines(&ctx(4), true, true, true, [2, 1, 4]);
        assert_eq!(computed, expected);
    }

    #[test]
    fn invariant_curve_bitangents_are_the_rational_lines() {
        let bs = bitangents(&named_curve("alpha").unwrap()).unwrap();
        assert_eq!(bs.degrees(), vec![1; 7]);
        let mut triples: Vec<[u64; 3]> = bs.common.clone();
        triples.sort();
        let mut all_nonzero: Vec<[u64; 3]> = (1..8u64)
            .map(|m| [(m >> 2) & 1, (m >> 1) & 1, m & 1])
            .collect();
        all_nonzero.sort();
        assert_eq!(triples, all_nonzero);

        let norm = normalize_additive(&bs).unwrap();
        assert_eq!(norm.r, Mat3F2::IDENTITY);
    }

    #[test]
    fn printed_matrix_columns_match_for_the_reduced_klein_models() {
        // omega = 0b10, conjugate = 0b11 in F4; set equality is insensitive
        // to the choice because both sets are Frobenius stable
        let (w, wb) = (2u64, 3u64);
        let kprime_cols: Vec<[u64; 3]> = vec![
            [1, 0, 0],
            [1, w, wb],
            [0, wb, w],
            [0, w, wb],
            [1, 1, 1],
            [0, 1, 1],
            [1, wb, w],
        ];
        let xn4_cols: Vec<[u64; 3]> = vec![
            [1, 0, 0],
            [w, w, wb],
            [w, wb, w],
            [wb, w, wb],
            [0, 1, 1],
            [1, 1, 1],
            [wb, wb, w],
        ];
        for (name, cols) in [("Kprime_mod2", kprime_cols), ("X_N4", xn4_cols)] {
            let bs = bitangents(&named_curve(name).unwrap()).unwrap();
            assert_eq!(bs.degrees(), vec![1, 1, 1, 2, 2, 2, 2], "{name}");
            let computed = canonical_set(&bs.common_ctx, &bs.common);
            let expected = canonical_set(&bs.common_ctx, &cols);
            assert_eq!(computed, expected, "{name}");
        }
    }

    #[test]
    fn frobenius_orbit_sizes_equal_the_definition_degrees() {
        for name in ["K", "alpha", "A", "X_N2", "X_N4"] {
            let bs = bitangents(&named_curve(name).unwrap()).unwrap();
            let perm = bs.frobenius_permutation();
            for (i, bit) in bs.lines.iter().enumerate() {
                let mut j = perm[i];
                let mut orbit = 1;
                while j != i {
                    j = perm[j];
                    orbit += 1;
                }
                assert_eq!(orbit, bit.degree, "{name} line {i}");
            }
        }
    }

    #[test]
    fn squaring_matrix_transposes_the_twist_matrix() {
        for (name, f) in crate::twist::named_curves() {
            let p = twists_with_curve(&f)[0].p;
            let r = frobenius_matrix_r(&f).unwrap();
            assert_eq!(r, p.transpose(), "{name}");
            assert_eq!(class_of(&r).label, class_of(&p).label, "{name}");
        }
    }

    #[test]
    fn perturbing_one_representative_breaks_closure() {
        let bs = bitangents(&named_curve("K").unwrap()).unwrap();
        let norm = normalize_additive(&bs).unwrap();
        assert!(is_additively_closed(&norm.reps));
        let g = norm.ctx.gen().value();
        let mut bad = norm.reps.clone();
        bad[3] = bad[3].map(|c| norm.ctx.mul_raw(c, g));
        assert!(!is_additively_closed(&bad));
    }

    #[test]
    fn a_non_twist_quartic_fails_the_seven_count() {
        // the double conic (X^2 + YZ)^2 has no smooth bitangent structure
        let f = QuarticMask::from_exponents(&[[4, 0, 0], [0, 2, 2]]);
        match bitangents(&f) {
            Err(GeometryError::WrongBitangentCount(_)) => {}
            other => panic!("expected a bitangent count failure, got {other:?}"),
        }
    }
}
