//! GF(2^k) arithmetic on bit-vector elements, deterministic embeddings, and
//! kernels of additive (linearized) polynomials.
//!
//! An element of GF(2^k) is a `u64` whose bit `i` is the coefficient of `g^i`,
//! where `g` is the residue class of `x` modulo the context's irreducible
//! modulus. Every degree gets one canonical modulus (the least irreducible
//! binary polynomial by bit value), so elements compare by `(degree, value)`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use thiserror::Error;

/// Largest supported extension degree.
pub const MAX_DEGREE: u32 = 64;

/// Degrees up to this get log/exp multiplication tables.
const TABLE_BITS: u32 = 13;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum AlgebraError {
    #[error("field degree {0} out of range 1..={MAX_DEGREE}")]
    InvalidDegree(u32),
    #[error("elements belong to different field contexts")]
    ContextMismatch,
    #[error("F_2^{sub} is not a subfield of F_2^{sup}")]
    NotASubfield { sub: u32, sup: u32 },
    #[error("division by zero field element")]
    DivisionByZero,
    #[error("polynomial arities differ: {0} vs {1}")]
    ArityMismatch(usize, usize),
    #[error("division leaves a nonzero remainder")]
    NonExactDivision,
    #[error("substitution matrix is singular")]
    SingularSubstitution,
    #[error("mixed coefficient rings")]
    RingMismatch,
}

// ---------------------------------------------------------------------------
// Binary polynomial helpers on u128 bit masks (bit i = coefficient of x^i).
// ---------------------------------------------------------------------------

fn pdeg(p: u128) -> i32 {
    127 - p.leading_zeros() as i32
}

fn pmod(mut a: u128, m: u128) -> u128 {
    let dm = pdeg(m);
    while pdeg(a) >= dm {
        a ^= m << (pdeg(a) - dm);
    }
    a
}

fn pgcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let r = pmod(a, b);
        a = b;
        b = r;
    }
    a
}

fn pmulmod(a: u128, b: u128, m: u128) -> u128 {
    // Interleaved shift-and-reduce so intermediates stay below deg(m) + 1.
    let dm = pdeg(m);
    let a = pmod(a, m);
    let mut acc = 0u128;
    for i in (0..=pdeg(b).max(0) as u32).rev() {
        acc <<= 1;
        if pdeg(acc) >= dm {
            acc ^= m;
        }
        if (b >> i) & 1 == 1 {
            acc ^= a;
        }
        if pdeg(acc) >= dm {
            acc ^= m;
        }
    }
    acc
}

/// Irreducibility of a binary polynomial, by the distinct-degree criterion:
/// x^(2^k) = x mod f, and gcd(x^(2^(k/p)) - x, f) = 1 for every prime p | k.
pub fn is_irreducible(f: u128) -> bool {
    let k = pdeg(f);
    if k < 1 {
        return false;
    }
    let k = k as u32;
    let xpow = |e: u32| -> u128 {
        let mut t = 2u128; // x
        for _ in 0..e {
            t = pmulmod(t, t, f);
        }
        t
    };
    if xpow(k) != 2 % f {
        return false;
    }
    let mut n = k;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            if pgcd(xpow(k / p) ^ 2, f) != 1 {
                return false;
            }
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 && pgcd(xpow(k / n) ^ 2, f) != 1 {
        return false;
    }
    true
}

/// Least irreducible binary polynomial of the given degree, by bit value.
pub fn least_irreducible(k: u32) -> u128 {
    if k == 1 {
        return 0b10; // x
    }
    let mut cand = (1u128 << k) | 1;
    loop {
        if is_irreducible(cand) {
            return cand;
        }
        cand += 2;
    }
}

// ---------------------------------------------------------------------------
// Field contexts
// ---------------------------------------------------------------------------

/// Arithmetic context for GF(2^k): canonical modulus plus optional log/exp
/// tables for small degrees.
pub struct FieldContext {
    degree: u32,
    modulus: u128,
    tables: Option<MulTables>,
}

struct MulTables {
    log: Vec<u32>,   // log[v] for v != 0, base the table generator
    exp: Vec<u64>,   // exp[i] for i in 0..2*(order), so products skip the mod
    order: usize,    // 2^k - 1
}

impl fmt::Debug for FieldContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldContext(F_2^{})", self.degree)
    }
}

impl PartialEq for FieldContext {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree
    }
}
impl Eq for FieldContext {}

static CONTEXTS: OnceLock<Mutex<HashMap<u32, Arc<FieldContext>>>> = OnceLock::new();

impl FieldContext {
    /// Shared context for GF(2^k). Contexts are cached per degree.
    pub fn get(degree: u32) -> Result<Arc<FieldContext>, AlgebraError> {
        if degree == 0 || degree > MAX_DEGREE {
            return Err(AlgebraError::InvalidDegree(degree));
        }
        let cache = CONTEXTS.get_or_init(|| Mutex::new(HashMap::new()));
        let mut map = cache.lock().expect("context cache poisoned");
        if let Some(ctx) = map.get(&degree) {
            return Ok(ctx.clone());
        }
        let ctx = Arc::new(FieldContext::build(degree));
        map.insert(degree, ctx.clone());
        Ok(ctx)
    }

    fn build(degree: u32) -> FieldContext {
        let modulus = least_irreducible(degree);
        debug_assert!(is_irreducible(modulus));
        let mut ctx = FieldContext { degree, modulus, tables: None };
        if (2..=TABLE_BITS).contains(&degree) {
            ctx.tables = Some(ctx.build_tables());
        }
        ctx
    }

    fn build_tables(&self) -> MulTables {
        let order = (1usize << self.degree) - 1;
        'cand: for g in 2..(1u64 << self.degree) {
            let mut exp = Vec::with_capacity(2 * order);
            let mut v = 1u64;
            for _ in 0..order {
                exp.push(v);
                v = self.mul_notable(v, g);
                if v == 1 && exp.len() < order {
                    continue 'cand; // g has smaller order
                }
            }
            if v != 1 {
                continue;
            }
            let mut log = vec![0u32; 1 << self.degree];
            for (i, &e) in exp.iter().enumerate() {
                log[e as usize] = i as u32;
            }
            exp.extend_from_within(..order);
            return MulTables { log, exp, order };
        }
        unreachable!("every finite field has a generator")
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Field size 2^k.
    pub fn size(&self) -> u128 {
        1u128 << self.degree
    }

    pub fn modulus(&self) -> u128 {
        self.modulus
    }

    fn mask(&self) -> u64 {
        if self.degree == 64 {
            u64::MAX
        } else {
            (1u64 << self.degree) - 1
        }
    }

    fn mul_notable(&self, a: u64, b: u64) -> u64 {
        let mut acc = 0u128;
        let a = a as u128;
        let mut b = b as u128;
        let mut shift = 0;
        while b != 0 {
            if b & 1 == 1 {
                acc ^= a << shift;
            }
            b >>= 1;
            shift += 1;
        }
        let dm = self.degree as i32;
        while pdeg(acc) >= dm {
            acc ^= self.modulus << (pdeg(acc) - dm);
        }
        acc as u64
    }

    /// Product of raw element values.
    pub fn mul_raw(&self, a: u64, b: u64) -> u64 {
        if let Some(t) = &self.tables {
            if a == 0 || b == 0 {
                return 0;
            }
            return t.exp[(t.log[a as usize] + t.log[b as usize]) as usize];
        }
        self.mul_notable(a, b)
    }

    pub fn square_raw(&self, a: u64) -> u64 {
        self.mul_raw(a, a)
    }

    pub fn pow_raw(&self, mut a: u64, mut e: u128) -> u64 {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_raw(acc, a);
            }
            a = self.mul_raw(a, a);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse of a nonzero raw value.
    pub fn inv_raw(&self, a: u64) -> u64 {
        assert!(a != 0, "inverse of zero");
        if let Some(t) = &self.tables {
            return t.exp[t.order - t.log[a as usize] as usize];
        }
        self.pow_raw(a, self.size() - 2)
    }

    /// Square root (squaring is a bijection in characteristic 2).
    pub fn sqrt_raw(&self, a: u64) -> u64 {
        self.pow_raw(a, self.size() / 2)
    }

    /// Evaluate a binary polynomial (bit i = coefficient of x^i) at a raw value.
    pub fn eval_bitpoly_raw(&self, poly: u128, at: u64) -> u64 {
        let mut acc = 0u64;
        for i in (0..=pdeg(poly).max(0) as u32).rev() {
            acc = self.mul_raw(acc, at);
            if (poly >> i) & 1 == 1 {
                acc ^= 1;
            }
        }
        if poly == 0 {
            return 0;
        }
        acc
    }

    pub fn el(self: &Arc<Self>, v: u64) -> FieldElement {
        assert!(
            self.degree == 64 || v <= self.mask(),
            "value 0x{v:x} out of range for F_2^{}",
            self.degree
        );
        FieldElement { ctx: self.clone(), v }
    }

    pub fn zero(self: &Arc<Self>) -> FieldElement {
        self.el(0)
    }

    pub fn one(self: &Arc<Self>) -> FieldElement {
        self.el(1)
    }

    /// Residue class of x, a generator of the field over F2 (not necessarily
    /// of the multiplicative group).
    pub fn gen(self: &Arc<Self>) -> FieldElement {
        if self.degree == 1 {
            self.el(1)
        } else {
            self.el(2)
        }
    }
}

// ---------------------------------------------------------------------------
// Elements
// ---------------------------------------------------------------------------

/// An element of GF(2^k), tied to its context.
#[derive(Clone)]
pub struct FieldElement {
    ctx: Arc<FieldContext>,
    v: u64,
}

impl FieldElement {
    pub fn ctx(&self) -> &Arc<FieldContext> {
        &self.ctx
    }

    pub fn value(&self) -> u64 {
        self.v
    }

    pub fn degree(&self) -> u32 {
        self.ctx.degree
    }

    pub fn is_zero(&self) -> bool {
        self.v == 0
    }

    fn check_ctx(&self, other: &FieldElement) {
        assert!(
            self.ctx.degree == other.ctx.degree,
            "elements from F_2^{} and F_2^{} cannot be combined",
            self.ctx.degree,
            other.ctx.degree
        );
    }

    pub fn add(&self, other: &FieldElement) -> FieldElement {
        self.check_ctx(other);
        self.ctx.el(self.v ^ other.v)
    }

    pub fn mul(&self, other: &FieldElement) -> FieldElement {
        self.check_ctx(other);
        self.ctx.el(self.ctx.mul_raw(self.v, other.v))
    }

    /// Frobenius x -> x^2.
    pub fn frobenius(&self) -> FieldElement {
        self.ctx.el(self.ctx.square_raw(self.v))
    }

    pub fn sqrt(&self) -> FieldElement {
        self.ctx.el(self.ctx.sqrt_raw(self.v))
    }

    pub fn inv(&self) -> Result<FieldElement, AlgebraError> {
        if self.v == 0 {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(self.ctx.el(self.ctx.inv_raw(self.v)))
    }

    pub fn pow(&self, e: u128) -> FieldElement {
        self.ctx.el(self.ctx.pow_raw(self.v, e))
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.degree == other.ctx.degree && self.v == other.v
    }
}
impl Eq for FieldElement {}

impl PartialOrd for FieldElement {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for FieldElement {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.ctx.degree, self.v).cmp(&(other.ctx.degree, other.v))
    }
}

impl std::hash::Hash for FieldElement {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.ctx.degree.hash(state);
        self.v.hash(state);
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "0x{:x}@F{}", self.v, self.ctx.size())
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl std::ops::Add for &FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &FieldElement) -> FieldElement {
        FieldElement::add(self, rhs)
    }
}

impl std::ops::Mul for &FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: &FieldElement) -> FieldElement {
        FieldElement::mul(self, rhs)
    }
}

// ---------------------------------------------------------------------------
// Embeddings
// ---------------------------------------------------------------------------

/// A fixed field embedding F_2^j -> F_2^m (j | m), determined by sending the
/// subfield generator to the least root of the subfield modulus.
pub struct Embedding {
    sub: Arc<FieldContext>,
    sup: Arc<FieldContext>,
    powers: Vec<u64>, // r^0 .. r^(j-1)
}

type EmbeddingCache = HashMap<(u32, u32), Arc<Embedding>>;

static EMBEDDINGS: OnceLock<Mutex<EmbeddingCache>> = OnceLock::new();

impl Embedding {
    pub fn get(sub: u32, sup: u32) -> Result<Arc<Embedding>, AlgebraError> {
        if sub == 0 || sup == 0 || sup > MAX_DEGREE {
            return Err(AlgebraError::InvalidDegree(sub.max(sup)));
        }
        if !sup.is_multiple_of(sub) {
            return Err(AlgebraError::NotASubfield { sub, sup });
        }
        let cache = EMBEDDINGS.get_or_init(|| Mutex::new(HashMap::new()));
        let mut map = cache.lock().expect("embedding cache poisoned");
        if let Some(e) = map.get(&(sub, sup)) {
            return Ok(e.clone());
        }
        let e = Arc::new(Embedding::build(sub, sup)?);
        map.insert((sub, sup), e.clone());
        Ok(e)
    }

    fn build(sub: u32, sup: u32) -> Result<Embedding, AlgebraError> {
        let sub_ctx = FieldContext::get(sub)?;
        let sup_ctx = FieldContext::get(sup)?;
        let root = least_subfield_root(&sub_ctx, &sup_ctx);
        let mut powers = Vec::with_capacity(sub as usize);
        let mut p = 1u64;
        for _ in 0..sub {
            powers.push(p);
            p = sup_ctx.mul_raw(p, root);
        }
        Ok(Embedding { sub: sub_ctx, sup: sup_ctx, powers })
    }

    pub fn sub(&self) -> &Arc<FieldContext> {
        &self.sub
    }

    pub fn sup(&self) -> &Arc<FieldContext> {
        &self.sup
    }

    pub fn apply_raw(&self, v: u64) -> u64 {
        let mut acc = 0u64;
        let mut v = v;
        let mut i = 0;
        while v != 0 {
            if v & 1 == 1 {
                acc ^= self.powers[i];
            }
            v >>= 1;
            i += 1;
        }
        acc
    }

    pub fn apply(&self, a: &FieldElement) -> FieldElement {
        assert!(a.ctx.degree == self.sub.degree, "element not in the source field");
        self.sup.el(self.apply_raw(a.v))
    }
}

/// Image of `a` in F_2^sup under the canonical embedding.
pub fn embed(a: &FieldElement, sup: &Arc<FieldContext>) -> Result<FieldElement, AlgebraError> {
    if a.ctx.degree == sup.degree {
        return Ok(sup.el(a.v));
    }
    Ok(Embedding::get(a.ctx.degree, sup.degree)?.apply(a))
}

/// Least root (by bit value) of the subfield modulus inside the superfield.
/// All roots lie in the copy of F_2^j cut out by v^(2^j) = v, so only that
/// subfield is searched.
fn least_subfield_root(sub: &Arc<FieldContext>, sup: &Arc<FieldContext>) -> u64 {
    if sub.degree == 1 {
        // modulus is x; its only root is 0, but the embedding F2 -> F_2^m is
        // forced anyway: 0 -> 0, 1 -> 1. Use root 0 so powers = [1].
        return 0;
    }
    let k = sup.degree as usize;
    // rows of the F2-linear map v -> v^(2^j) + v on the superfield
    let mut cols = Vec::with_capacity(k);
    for i in 0..k {
        let mut im = 1u64 << i;
        for _ in 0..sub.degree {
            im = sup.square_raw(im);
        }
        cols.push(im ^ (1u64 << i));
    }
    let rows: Vec<u64> = (0..k)
        .map(|r| {
            let mut row = 0u64;
            for (c, col) in cols.iter().enumerate() {
                row |= ((col >> r) & 1) << c;
            }
            row
        })
        .collect();
    let basis = nullspace(&rows, k);
    let dim = basis.len();
    debug_assert_eq!(dim as u32, sub.degree);
    let mut members: Vec<u64> = (0..1u64 << dim)
        .map(|bits| {
            let mut v = 0u64;
            for (i, b) in basis.iter().enumerate() {
                if (bits >> i) & 1 == 1 {
                    v ^= b;
                }
            }
            v
        })
        .collect();
    members.sort_unstable();
    for v in members {
        if sup.eval_bitpoly_raw(sub.modulus, v) == 0 {
            return v;
        }
    }
    unreachable!("subfield modulus splits in the superfield")
}

/// Basis of the nullspace of an F2 matrix given as row bit masks over `ncols`
/// columns (bit c of a row = entry in column c).
pub fn nullspace(rows: &[u64], ncols: usize) -> Vec<u64> {
    let mut rows: Vec<u64> = rows.to_vec();
    let mut pivot_of_col = vec![usize::MAX; ncols];
    let mut rank = 0;
    for (c, pivot) in pivot_of_col.iter_mut().enumerate() {
        let Some(r) = (rank..rows.len()).find(|&r| (rows[r] >> c) & 1 == 1) else {
            continue;
        };
        rows.swap(rank, r);
        for i in 0..rows.len() {
            if i != rank && (rows[i] >> c) & 1 == 1 {
                rows[i] ^= rows[rank];
            }
        }
        *pivot = rank;
        rank += 1;
    }
    let mut basis = Vec::new();
    for c in 0..ncols {
        if pivot_of_col[c] != usize::MAX {
            continue;
        }
        let mut v = 1u64 << c;
        for (pc, &pr) in pivot_of_col.iter().enumerate() {
            if pr != usize::MAX && (rows[pr] >> c) & 1 == 1 {
                v |= 1u64 << pc;
            }
        }
        basis.push(v);
    }
    basis
}

// ---------------------------------------------------------------------------
// Additive polynomials
// ---------------------------------------------------------------------------

/// All roots in the given field of x^8 + c4*x^4 + c2*x^2 + c1*x, computed as
/// the kernel of the F2-linear map it induces. Sorted ascending by value;
/// always contains 0; the root set is an F2-subspace, so its size is a power
/// of two (at most 8).
pub fn additive_kernel(ctx: &Arc<FieldContext>, c4: bool, c2: bool, c1: bool) -> Vec<FieldElement> {
    let k = ctx.degree as usize;
    let image = |v: u64| {
        let v2 = ctx.square_raw(v);
        let v4 = ctx.square_raw(v2);
        let v8 = ctx.square_raw(v4);
        let mut im = v8;
        if c4 {
            im ^= v4;
        }
        if c2 {
            im ^= v2;
        }
        if c1 {
            im ^= v;
        }
        im
    };
    let cols: Vec<u64> = (0..k).map(|i| image(1u64 << i)).collect();
    let rows: Vec<u64> = (0..k)
        .map(|r| {
            let mut row = 0u64;
            for (c, col) in cols.iter().enumerate() {
                row |= ((col >> r) & 1) << c;
            }
            row
        })
        .collect();
    let basis = nullspace(&rows, k);
    let mut out: Vec<u64> = (0..1u64 << basis.len())
        .map(|bits| {
            let mut v = 0u64;
            for (i, b) in basis.iter().enumerate() {
                if (bits >> i) & 1 == 1 {
                    v ^= b;
                }
            }
            v
        })
        .collect();
    out.sort_unstable();
    out.dedup();
    out.into_iter().map(|v| ctx.el(v)).collect()
}
