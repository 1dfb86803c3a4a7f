//! Which additive polynomials v^8 + c4 v^4 + c2 v^2 + c1 v can supply the
//! coefficients of a Fano plane of bitangents.
//!
//! A candidate configuration is a 3x7 matrix whose columns are indexed by
//! the nonzero vectors of F_2^3: row i is a linear functional whose value
//! multiset on the seven vectors realizes the root multiset of the additive
//! polynomial, the columns are distinct and nonzero (the seven coefficient
//! triples of distinct lines), and coordinate squaring must act on the rows
//! as an invertible binary matrix, the way Frobenius acts on an actual
//! normalized bitangent matrix. Without the squaring condition the doubled
//! kernel of x^8 + x^4 + x^2 would pass the multiset search spuriously.

use std::sync::Arc;

use crate::algebra::{additive_kernel, FieldContext};
use crate::group::Mat3F2;

/// A realizing configuration: three functionals given by their values on the
/// basis vectors, and the binary matrix induced by squaring.
#[derive(Clone, Debug)]
pub struct FanoWitness {
    pub degree: u32,
    pub rows: [[u64; 3]; 3],
    pub r: Mat3F2,
}

/// Splitting data of v^8 + c4 v^4 + c2 v^2 + c1 v: the smallest field
/// containing all distinct roots, the full kernel there, and the
/// multiplicity each root carries in the degree-8 factorization.
fn splitting_data(c4: bool, c2: bool, c1: bool) -> (Arc<FieldContext>, Vec<u64>, u32) {
    assert!(c4 || c2 || c1, "the zero additive polynomial has no root structure");
    let distinct: u32 = if c1 {
        8
    } else if c2 {
        4
    } else {
        2
    };
    for k in 1..=7u32 {
        let ctx = FieldContext::get(k).expect("small degree");
        let kernel = additive_kernel(&ctx, c4, c2, c1);
        if kernel.len() as u32 == distinct {
            let roots = kernel.into_iter().map(|e| e.value()).collect();
            return (ctx, roots, 8 / distinct);
        }
    }
    unreachable!("every additive polynomial of degree 8 splits by F_2^7")
}

/// Values of the functional with basis images `basis` on the seven nonzero
/// vectors, indexed by v = 1..=7 with bit j of v selecting basis[j].
fn functional_values(basis: [u64; 3]) -> [u64; 7] {
    let mut out = [0u64; 7];
    for (slot, v) in (1u32..=7).enumerate() {
        let mut acc = 0;
        for (j, b) in basis.iter().enumerate() {
            if v & (1 << j) != 0 {
                acc ^= b;
            }
        }
        out[slot] = acc;
    }
    out
}

/// All functionals into the root set whose value multiset matches the root
/// multiset of the additive polynomial, in sorted order.
fn candidates(roots: &[u64], mult: u32) -> Vec<[u64; 3]> {
    let mut target: Vec<u64> = vec![0; mult as usize - 1];
    for &r in roots.iter().filter(|&&r| r != 0) {
        for _ in 0..mult {
            target.push(r);
        }
    }
    target.sort_unstable();
    debug_assert_eq!(target.len(), 7);

    let mut out = Vec::new();
    for &a in roots {
        for &b in roots {
            for &c in roots {
                let basis = [a, b, c];
                let mut values = functional_values(basis).to_vec();
                values.sort_unstable();
                if values == target {
                    out.push(basis);
                }
            }
        }
    }
    out.sort_unstable();
    out
}

/// If the three rows are jointly injective and squaring acts on them as an
/// invertible binary matrix, return that matrix.
pub(crate) fn rows_define_fano(ctx: &Arc<FieldContext>, rows: [[u64; 3]; 3]) -> Option<Mat3F2> {
    let values = rows.map(functional_values);

    // columns are the seven candidate coefficient triples: distinct, nonzero
    let mut columns: Vec<[u64; 3]> = (0..7).map(|v| [values[0][v], values[1][v], values[2][v]]).collect();
    columns.sort_unstable();
    columns.dedup();
    if columns.len() != 7 || columns[0] == [0, 0, 0] {
        return None;
    }

    // masks m with row_i^2 = XOR of the rows selected by m, checked on the
    // basis images (linearity extends this to all columns)
    let squared = rows.map(|r| r.map(|e| ctx.square_raw(e)));
    let combo = |m: u32| {
        let mut acc = [0u64; 3];
        for (j, row) in rows.iter().enumerate() {
            if m & (1 << j) != 0 {
                for t in 0..3 {
                    acc[t] ^= row[t];
                }
            }
        }
        acc
    };
    let row_masks: Vec<Vec<u32>> = (0..3)
        .map(|i| (1u32..8).filter(|&m| combo(m) == squared[i]).collect())
        .collect();

    for &m0 in &row_masks[0] {
        for &m1 in &row_masks[1] {
            for &m2 in &row_masks[2] {
                let r = Mat3F2::from_rows([
                    [(m0 & 1) as u8, (m0 >> 1 & 1) as u8, (m0 >> 2 & 1) as u8],
                    [(m1 & 1) as u8, (m1 >> 1 & 1) as u8, (m1 >> 2 & 1) as u8],
                    [(m2 & 1) as u8, (m2 >> 1 & 1) as u8, (m2 >> 2 & 1) as u8],
                ]);
                if r.is_invertible() {
                    return Some(r);
                }
            }
        }
    }
    None
}

/// Search for a configuration realizing the additive polynomial's roots as
/// a Fano plane of line coefficients; deterministic first witness.
pub fn fano_witness(c4: bool, c2: bool, c1: bool) -> Option<FanoWitness> {
    let (ctx, roots, mult) = splitting_data(c4, c2, c1);
    let cands = candidates(&roots, mult);
    let n = cands.len();
    for i in 0..n {
        for j in i..n {
            for k in j..n {
                let rows = [cands[i], cands[j], cands[k]];
                if let Some(r) = rows_define_fano(&ctx, rows) {
                    return Some(FanoWitness { degree: ctx.degree(), rows, r });
                }
            }
        }
    }
    None
}

/// Whether the roots of v^8 + c4 v^4 + c2 v^2 + c1 v can coefficient a Fano
/// plane of seven lines with a binary Frobenius action.
pub fn additive_defines_fano(c4: bool, c2: bool, c1: bool) -> bool {
    fano_witness(c4, c2, c1).is_some()
}
