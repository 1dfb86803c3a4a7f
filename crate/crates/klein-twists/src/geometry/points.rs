//! Canonical projective points and lines over GF(2^k), curve membership,
//! and exhaustive point counting.
//!
//! Canonical form scales the first nonzero coordinate to 1, so equality of
//! representatives is equality of projective objects.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::algebra::{embed, AlgebraError, FieldContext};
use crate::group::Mat3F2;
use crate::twist::QuarticMask;

use super::GeometryError;

/// Scale so the first nonzero coordinate becomes 1; `None` for (0,0,0).
pub fn canonicalize(ctx: &Arc<FieldContext>, v: [u64; 3]) -> Option<[u64; 3]> {
    let lead = v.iter().copied().find(|&c| c != 0)?;
    if lead == 1 {
        return Some(v);
    }
    let s = ctx.inv_raw(lead);
    Some(v.map(|c| ctx.mul_raw(c, s)))
}

macro_rules! canonical_triple_type {
    ($name:ident, $doc:literal) => {
        #[doc = $doc]
        #[derive(Clone)]
        pub struct $name {
            ctx: Arc<FieldContext>,
            v: [u64; 3],
        }

        impl $name {
            pub fn new(ctx: &Arc<FieldContext>, coords: [u64; 3]) -> Option<$name> {
                canonicalize(ctx, coords).map(|v| $name { ctx: ctx.clone(), v })
            }

            pub fn ctx(&self) -> &Arc<FieldContext> {
                &self.ctx
            }

            pub fn triple(&self) -> [u64; 3] {
                self.v
            }

            /// Coordinate-wise squaring; canonical form is preserved because
            /// the leading 1 is Frobenius-fixed.
            pub fn frobenius(&self) -> $name {
                $name {
                    ctx: self.ctx.clone(),
                    v: self.v.map(|c| self.ctx.square_raw(c)),
                }
            }

            /// Smallest j (dividing the field degree) such that all
            /// coordinates are fixed by x -> x^(2^j).
            pub fn min_definition_degree(&self) -> u32 {
                let k = self.ctx.degree();
                (1..=k)
                    .filter(|j| k % j == 0)
                    .find(|&j| {
                        self.v.iter().all(|&c| {
                            let mut p = c;
                            for _ in 0..j {
                                p = self.ctx.square_raw(p);
                            }
                            p == c
                        })
                    })
                    .expect("the full degree always fixes the triple")
            }

            /// Image in an extension field under the canonical embedding.
            pub fn embed_into(&self, sup: &Arc<FieldContext>) -> Result<$name, AlgebraError> {
                let mut out = [0u64; 3];
                for (o, &c) in out.iter_mut().zip(&self.v) {
                    *o = embed(&self.ctx.el(c), sup)?.value();
                }
                Ok($name { ctx: sup.clone(), v: out })
            }
        }

        impl PartialEq for $name {
            fn eq(&self, other: &Self) -> bool {
                self.ctx.degree() == other.ctx.degree() && self.v == other.v
            }
        }
        impl Eq for $name {}

        impl PartialOrd for $name {
            fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
                Some(self.cmp(other))
            }
        }
        impl Ord for $name {
            fn cmp(&self, other: &Self) -> std::cmp::Ordering {
                (self.ctx.degree(), self.v).cmp(&(other.ctx.degree(), other.v))
            }
        }

        impl std::hash::Hash for $name {
            fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
                self.ctx.degree().hash(state);
                self.v.hash(state);
            }
        }

        impl std::fmt::Debug for $name {
            fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
                write!(
                    f,
                    "({:#x}:{:#x}:{:#x})@F{}",
                    self.v[0],
                    self.v[1],
                    self.v[2],
                    self.ctx.size()
                )
            }
        }
    };
}

canonical_triple_type!(ProjPoint, "A point of P^2 over GF(2^k), in canonical form.");
canonical_triple_type!(Line, "A line aX + bY + cZ = 0 of P^2, coefficients in canonical form.");

impl ProjPoint {
    /// Image under an F2 matrix (entries act by XOR selection), renormalized.
    pub fn apply(&self, m: &Mat3F2) -> ProjPoint {
        let mut out = [0u64; 3];
        for (i, o) in out.iter_mut().enumerate() {
            for j in 0..3 {
                if m.bit(i, j) == 1 {
                    *o ^= self.v[j];
                }
            }
        }
        ProjPoint::new(&self.ctx, out).expect("invertible matrices preserve nonzero points")
    }

    pub fn on_curve(&self, f: &QuarticMask) -> bool {
        f.eval_raw(&self.ctx, self.v[0], self.v[1], self.v[2]) == 0
    }
}

impl Line {
    pub fn contains(&self, p: &ProjPoint) -> bool {
        assert_eq!(self.ctx.degree(), p.ctx().degree(), "mixed fields");
        let q = p.triple();
        let acc = self
            .v
            .iter()
            .zip(q)
            .fold(0u64, |a, (&l, x)| a ^ self.ctx.mul_raw(l, x));
        acc == 0
    }

    /// Two deterministic independent points spanning the line.
    pub fn span_points(&self) -> (ProjPoint, ProjPoint) {
        let [a, b, c] = self.v;
        let (p, q) = if a != 0 {
            // a = 1 in canonical form: X = bY + cZ
            ([b, 1, 0], [c, 0, 1])
        } else if b != 0 {
            // b = 1: Y = cZ, X free
            ([1, 0, 0], [0, c, 1])
        } else {
            ([1, 0, 0], [0, 1, 0])
        };
        (
            ProjPoint::new(&self.ctx, p).expect("span point is nonzero"),
            ProjPoint::new(&self.ctx, q).expect("span point is nonzero"),
        )
    }
}

/// All points of P^2(F_2^k) in canonical form, ascending lex on triples'
/// shape (1,a,b), (0,1,b), (0,0,1).
pub fn enumerate_points(ctx: &Arc<FieldContext>) -> Vec<ProjPoint> {
    let k = ctx.degree();
    assert!(k <= 12, "point enumeration is capped at F_2^12");
    let q = 1u64 << k;
    let mut out = Vec::with_capacity((q * q + q + 1) as usize);
    for a in 0..q {
        for b in 0..q {
            out.push(ProjPoint { ctx: ctx.clone(), v: [1, a, b] });
        }
    }
    for b in 0..q {
        out.push(ProjPoint { ctx: ctx.clone(), v: [0, 1, b] });
    }
    out.push(ProjPoint { ctx: ctx.clone(), v: [0, 0, 1] });
    out
}

/// All lines of P^2(F_2^k), canonical coefficient triples.
pub fn enumerate_lines(ctx: &Arc<FieldContext>) -> Vec<Line> {
    enumerate_points(ctx)
        .into_iter()
        .map(|p| Line { ctx: p.ctx, v: p.v })
        .collect()
}

/// Number of points of P^2(F_2^k) on the quartic, by full enumeration.
pub fn count_points(f: &QuarticMask, k: u32) -> u64 {
    assert!((1..=12).contains(&k), "point counting supports 1 <= k <= 12");
    let ctx = FieldContext::get(k).expect("degree in range");
    let q = 1u64 << k;
    let mut n = 0;
    for a in 0..q {
        for b in 0..q {
            if f.eval_raw(&ctx, 1, a, b) == 0 {
                n += 1;
            }
        }
    }
    for b in 0..q {
        if f.eval_raw(&ctx, 0, 1, b) == 0 {
            n += 1;
        }
    }
    if f.eval_raw(&ctx, 0, 0, 1) == 0 {
        n += 1;
    }
    n
}

pub fn points_on_curve(f: &QuarticMask, ctx: &Arc<FieldContext>) -> Vec<ProjPoint> {
    enumerate_points(ctx).into_iter().filter(|p| p.on_curve(f)).collect()
}

// ---------------------------------------------------------------------------
// Partial derivatives of quartic masks, as compact term lists
// ---------------------------------------------------------------------------

/// Monomial exponents of the formal partial d/d(var): terms with odd exponent
/// keep coefficient 1 in characteristic 2.
pub(crate) fn partial_terms(f: &QuarticMask, var: usize) -> Vec<[u8; 3]> {
    let mut out = Vec::new();
    for e in f.terms() {
        if e[var] % 2 == 1 {
            let mut d = [e[0] as u8, e[1] as u8, e[2] as u8];
            d[var] -= 1;
            out.push(d);
        }
    }
    out
}

pub(crate) fn eval_terms(ctx: &Arc<FieldContext>, terms: &[[u8; 3]], p: [u64; 3]) -> u64 {
    let pow4 = |v: u64| {
        let v2 = ctx.mul_raw(v, v);
        [1, v, v2, ctx.mul_raw(v2, v), ctx.mul_raw(v2, v2)]
    };
    let (xp, yp, zp) = (pow4(p[0]), pow4(p[1]), pow4(p[2]));
    let mut acc = 0u64;
    for e in terms {
        acc ^= ctx.mul_raw(
            ctx.mul_raw(xp[e[0] as usize], yp[e[1] as usize]),
            zp[e[2] as usize],
        );
    }
    acc
}

/// Gradient of the quartic at a raw coordinate triple.
pub(crate) struct Gradient {
    ctx: Arc<FieldContext>,
    parts: [Vec<[u8; 3]>; 3],
}

impl Gradient {
    pub fn new(f: &QuarticMask, ctx: &Arc<FieldContext>) -> Gradient {
        Gradient {
            ctx: ctx.clone(),
            parts: [partial_terms(f, 0), partial_terms(f, 1), partial_terms(f, 2)],
        }
    }

    pub fn at(&self, p: [u64; 3]) -> [u64; 3] {
        [
            eval_terms(&self.ctx, &self.parts[0], p),
            eval_terms(&self.ctx, &self.parts[1], p),
            eval_terms(&self.ctx, &self.parts[2], p),
        ]
    }

    pub fn dot(&self, g: [u64; 3], q: [u64; 3]) -> u64 {
        let mut acc = 0;
        for i in 0..3 {
            acc ^= self.ctx.mul_raw(g[i], q[i]);
        }
        acc
    }
}

/// Points over F_2^k where the quartic and all three partials vanish.
pub fn singular_points(f: &QuarticMask, ctx: &Arc<FieldContext>) -> Vec<ProjPoint> {
    let grad = Gradient::new(f, ctx);
    enumerate_points(ctx)
        .into_iter()
        .filter(|p| p.on_curve(f) && grad.at(p.triple()) == [0, 0, 0])
        .collect()
}

/// No singular point over any F_2^k with k <= 6 (checking k = 4, 5, 6 covers
/// the smaller degrees through their subfields).
pub fn is_smooth_to_degree_six(f: &QuarticMask) -> Result<(), GeometryError> {
    for k in [4u32, 5, 6] {
        let ctx = FieldContext::get(k).expect("small degree");
        if let Some(p) = singular_points(f, &ctx).into_iter().next() {
            return Err(GeometryError::SingularCurve {
                equation: f.equation(),
                point: format!("{p:?}"),
            });
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Shared line frames for the bitangent sweeps
// ---------------------------------------------------------------------------

/// A line with its two deterministic span points, all as raw triples.
#[derive(Clone, Copy)]
pub(crate) struct LineFrame {
    pub line: [u64; 3],
    pub a: [u64; 3],
    pub b: [u64; 3],
}

/// Per-degree cache of all canonical lines with span points; shared across
/// every curve swept over the same field.
pub(crate) fn line_frames(k: u32) -> Arc<Vec<LineFrame>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<LineFrame>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut map = cache.lock().expect("line frame cache poisoned");
    map.entry(k)
        .or_insert_with(|| {
            let ctx = FieldContext::get(k).expect("sweep degree in range");
            Arc::new(
                enumerate_lines(&ctx)
                    .into_iter()
                    .map(|l| {
                        let (a, b) = l.span_points();
                        LineFrame { line: l.triple(), a: a.triple(), b: b.triple() }
                    })
                    .collect(),
            )
        })
        .clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::twist::named_curve;

    fn ctx(k: u32) -> Arc<FieldContext> {
        FieldContext::get(k).unwrap()
    }

    #[test]
    fn canonical_form_is_projective() {
        let f8 = ctx(3);
        let p = ProjPoint::new(&f8, [3, 5, 6]).unwrap();
        let s = 4u64;
        let scaled = [f8.mul_raw(3, s), f8.mul_raw(5, s), f8.mul_raw(6, s)];
        assert_eq!(ProjPoint::new(&f8, scaled).unwrap(), p);
        assert_eq!(p.triple()[0], 1);
        assert!(ProjPoint::new(&f8, [0, 0, 0]).is_none());
    }

    #[test]
    fn projective_plane_sizes() {
        for k in [1u32, 2, 3] {
            let n = enumerate_points(&ctx(k)).len() as u64;
            let q = 1u64 << k;
            assert_eq!(n, q * q + q + 1);
            let pts = enumerate_points(&ctx(k));
            let set: std::collections::BTreeSet<_> = pts.iter().map(|p| p.triple()).collect();
            assert_eq!(set.len(), pts.len());
        }
    }

    #[test]
    fn rational_point_counts_of_named_curves() {
        let expected: &[(&str, u64)] = &[
            ("K", 3),
            ("alpha", 0),
            ("A", 7),
            ("gamma10", 0),
            ("X_N7", 7),
            ("X_h1", 0),
            ("X_N2", 2),
            ("Kprime_mod2", 4),
            ("X_N4", 4),
        ];
        for &(name, n) in expected {
            assert_eq!(count_points(&named_curve(name).unwrap(), 1), n, "{name}");
        }
    }

    #[test]
    fn kprime_rational_points_avoid_the_line_y_equals_z() {
        let f = named_curve("Kprime_mod2").unwrap();
        let f2 = ctx(1);
        let on_line = Line::new(&f2, [0, 1, 1]).unwrap();
        for p in enumerate_points(&f2) {
            assert_eq!(p.on_curve(&f), !on_line.contains(&p), "{p:?}");
        }
    }

    #[test]
    fn alpha_over_f4_hits_exactly_the_new_points() {
        let f = named_curve("alpha").unwrap();
        assert_eq!(count_points(&f, 2), 14);
        for p in enumerate_points(&ctx(2)) {
            assert_eq!(p.on_curve(&f), p.min_definition_degree() == 2);
        }
    }

    #[test]
    fn counts_grow_along_subfields() {
        for name in ["K", "A", "X_N2", "X_N4"] {
            let f = named_curve(name).unwrap();
            for (d, k) in [(1u32, 2u32), (1, 3), (2, 4), (3, 6), (2, 6)] {
                assert!(count_points(&f, d) <= count_points(&f, k), "{name} {d}|{k}");
            }
        }
    }

    #[test]
    fn counts_are_equivalence_invariant() {
        let k = named_curve("K").unwrap();
        let m = Mat3F2::from_rows([[1, 1, 0], [0, 1, 1], [1, 0, 0]]);
        let g = crate::twist::subst(&k, &m);
        for deg in 1..=3 {
            assert_eq!(count_points(&k, deg), count_points(&g, deg));
        }
    }

    #[test]
    fn line_span_points_lie_on_the_line() {
        let f8 = ctx(3);
        for l in enumerate_lines(&f8) {
            let (a, b) = l.span_points();
            assert!(l.contains(&a));
            assert!(l.contains(&b));
            assert_ne!(a, b);
        }
    }

    #[test]
    fn frobenius_and_matrix_action_commute_with_membership() {
        let f = named_curve("K").unwrap();
        let f8 = ctx(3);
        let m = Mat3F2::from_rows([[0, 1, 0], [0, 0, 1], [1, 0, 0]]);
        for p in points_on_curve(&f, &f8) {
            assert!(p.frobenius().on_curve(&f));
            // the shift is an automorphism of K, so it preserves membership
            assert!(p.apply(&m).on_curve(&f));
        }
    }

    #[test]
    fn embeddings_preserve_incidence() {
        let f4 = ctx(2);
        let f16 = ctx(4);
        for p in enumerate_points(&f4) {
            let q = p.embed_into(&f16).unwrap();
            assert_eq!(q.min_definition_degree(), p.min_definition_degree());
        }
        let l = Line::new(&f4, [1, 2, 3]).unwrap();
        let (a, b) = l.span_points();
        let l16 = l.embed_into(&f16).unwrap();
        assert!(l16.contains(&a.embed_into(&f16).unwrap()));
        assert!(l16.contains(&b.embed_into(&f16).unwrap()));
    }

    #[test]
    fn named_curves_are_smooth() {
        for (name, f) in crate::twist::named_curves() {
            assert!(is_smooth_to_degree_six(&f).is_ok(), "{name}");
        }
    }

    #[test]
    fn a_visibly_singular_quartic_is_detected() {
        // X^2 Y^2 + ... pick f = (X Y)^2: singular where gradient vanishes
        let f = QuarticMask::from_exponents(&[[2, 2, 0]]);
        let bad = singular_points(&f, &ctx(2));
        assert!(!bad.is_empty());
        assert!(is_smooth_to_degree_six(&f).is_err());
    }
}
