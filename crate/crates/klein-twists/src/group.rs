//! GL(3,2) = PSL(3,2): compact 3x3 matrices over F2, conjugacy classes, and
//! small-subgroup identification.
//!
//! A matrix packs into 9 bits: `enc = row0 << 6 | row1 << 3 | row2`, where
//! `row_i = m[i][0] << 2 | m[i][1] << 1 | m[i][2]`. Column vectors use the
//! same 3-bit layout (bit 2 = first coordinate), so `apply` is a row-mask
//! parity per output bit.

use std::sync::OnceLock;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat3F2(u16);

impl Mat3F2 {
    pub const IDENTITY: Mat3F2 = Mat3F2(0b100_010_001);

    pub fn from_enc(enc: u16) -> Mat3F2 {
        assert!(enc < 512, "matrix encoding uses 9 bits");
        Mat3F2(enc)
    }

    pub fn from_rows(rows: [[u8; 3]; 3]) -> Mat3F2 {
        let mut enc = 0u16;
        for row in rows {
            let mut r = 0u16;
            for v in row {
                assert!(v <= 1, "entries are bits");
                r = r << 1 | v as u16;
            }
            enc = enc << 3 | r;
        }
        Mat3F2(enc)
    }

    pub fn enc(&self) -> u16 {
        self.0
    }

    /// 9-character binary string, rows concatenated.
    pub fn bits_string(&self) -> String {
        format!("{:09b}", self.0)
    }

    pub fn from_bits_string(s: &str) -> Option<Mat3F2> {
        if s.len() != 9 || !s.bytes().all(|b| b == b'0' || b == b'1') {
            return None;
        }
        u16::from_str_radix(s, 2).ok().map(Mat3F2)
    }

    pub fn bit(&self, i: usize, j: usize) -> u8 {
        ((self.0 >> ((2 - i) * 3 + (2 - j))) & 1) as u8
    }

    pub fn rows(&self) -> [[u8; 3]; 3] {
        let mut out = [[0u8; 3]; 3];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = self.bit(i, j);
            }
        }
        out
    }

    fn row_mask(&self, i: usize) -> u16 {
        (self.0 >> ((2 - i) * 3)) & 0b111
    }

    /// Matrix times 3-bit column vector.
    pub fn apply(&self, v: u8) -> u8 {
        debug_assert!(v < 8);
        let mut out = 0u8;
        for i in 0..3 {
            let p = (self.row_mask(i) & v as u16).count_ones() & 1;
            out |= (p as u8) << (2 - i);
        }
        out
    }

    pub fn mul(&self, other: &Mat3F2) -> Mat3F2 {
        // row_i(AB) = sum over k with A[i][k] = 1 of row_k(B)
        let mut enc = 0u16;
        for i in 0..3 {
            let a = self.row_mask(i);
            let mut r = 0u16;
            for k in 0..3 {
                if (a >> (2 - k)) & 1 == 1 {
                    r ^= other.row_mask(k);
                }
            }
            enc |= r << ((2 - i) * 3);
        }
        Mat3F2(enc)
    }

    pub fn transpose(&self) -> Mat3F2 {
        let mut rows = [[0u8; 3]; 3];
        for (i, row) in rows.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = self.bit(j, i);
            }
        }
        Mat3F2::from_rows(rows)
    }

    pub fn det(&self) -> u8 {
        let m = |i: usize, j: usize| self.bit(i, j);
        (m(0, 0) & (m(1, 1) & m(2, 2) ^ m(1, 2) & m(2, 1))
            ^ m(0, 1) & (m(1, 0) & m(2, 2) ^ m(1, 2) & m(2, 0))
            ^ m(0, 2) & (m(1, 0) & m(2, 1) ^ m(1, 1) & m(2, 0)))
            & 1
    }

    pub fn is_invertible(&self) -> bool {
        self.det() == 1
    }

    /// Inverse via the adjugate; cofactor signs vanish mod 2.
    pub fn inverse(&self) -> Option<Mat3F2> {
        if !self.is_invertible() {
            return None;
        }
        let m = |i: usize, j: usize| self.bit(i, j);
        let minor = |i: usize, j: usize| {
            let (r0, r1) = match i {
                0 => (1, 2),
                1 => (0, 2),
                _ => (0, 1),
            };
            let (c0, c1) = match j {
                0 => (1, 2),
                1 => (0, 2),
                _ => (0, 1),
            };
            m(r0, c0) & m(r1, c1) ^ m(r0, c1) & m(r1, c0)
        };
        let mut rows = [[0u8; 3]; 3];
        for (i, row) in rows.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = minor(j, i); // adjugate transposes the cofactor grid
            }
        }
        Some(Mat3F2::from_rows(rows))
    }

    pub fn pow(&self, e: u32) -> Mat3F2 {
        let mut acc = Mat3F2::IDENTITY;
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn order(&self) -> u32 {
        let mut m = *self;
        let mut n = 1;
        while m != Mat3F2::IDENTITY {
            m = m.mul(self);
            n += 1;
            assert!(n <= 8, "element order exceeds the group exponent");
        }
        n
    }

    pub fn trace(&self) -> u8 {
        self.bit(0, 0) ^ self.bit(1, 1) ^ self.bit(2, 2)
    }
}

impl std::fmt::Debug for Mat3F2 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let r = self.rows();
        write!(
            f,
            "[{}{}{} / {}{}{} / {}{}{}]",
            r[0][0], r[0][1], r[0][2], r[1][0], r[1][1], r[1][2], r[2][0], r[2][1], r[2][2]
        )
    }
}

impl std::fmt::Display for Mat3F2 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.bits_string())
    }
}

/// All 168 invertible matrices, ascending by encoding.
pub fn all_invertible() -> &'static [Mat3F2] {
    static ALL: OnceLock<Vec<Mat3F2>> = OnceLock::new();
    ALL.get_or_init(|| {
        (0u16..512)
            .map(Mat3F2::from_enc)
            .filter(Mat3F2::is_invertible)
            .collect()
    })
}

/// Least-encoding member of the conjugacy class of `m`.
pub fn class_rep_of(m: &Mat3F2) -> Mat3F2 {
    all_invertible()
        .iter()
        .map(|g| g.mul(m).mul(&g.inverse().expect("group element")))
        .min()
        .expect("nonempty group")
}

#[derive(Clone, Debug)]
pub struct ConjClass {
    pub rep: Mat3F2,
    pub label: &'static str,
    pub order: u32,
    pub trace: u8,
    pub size: usize,
    pub centralizer_order: usize,
}

/// The six conjugacy classes, sorted by (element order, trace) and labelled
/// 1A, 2A, 3A, 4A, 7A, 7B in that order.
pub fn conjugacy_classes() -> &'static [ConjClass] {
    static CLASSES: OnceLock<Vec<ConjClass>> = OnceLock::new();
    CLASSES.get_or_init(|| {
        let all = all_invertible();
        let mut by_rep: std::collections::BTreeMap<Mat3F2, usize> = Default::default();
        for m in all {
            *by_rep.entry(class_rep_of(m)).or_insert(0) += 1;
        }
        let mut keyed: Vec<(u32, u8, Mat3F2, usize)> = by_rep
            .into_iter()
            .map(|(rep, size)| (rep.order(), rep.trace(), rep, size))
            .collect();
        keyed.sort_by_key(|&(o, t, rep, _)| (o, t, rep));
        const LABELS: [&str; 6] = ["1A", "2A", "3A", "4A", "7A", "7B"];
        assert_eq!(keyed.len(), LABELS.len());
        keyed
            .into_iter()
            .zip(LABELS)
            .map(|((order, trace, rep, size), label)| ConjClass {
                rep,
                label,
                order,
                trace,
                size,
                centralizer_order: all.len() / size,
            })
            .collect()
    })
}

pub fn class_of(m: &Mat3F2) -> &'static ConjClass {
    let rep = class_rep_of(m);
    conjugacy_classes()
        .iter()
        .find(|c| c.rep == rep)
        .expect("every invertible matrix lies in a class")
}

/// Subgroup generated by the given matrices, ascending by encoding.
pub fn closure(gens: &[Mat3F2]) -> Vec<Mat3F2> {
    let mut seen = std::collections::BTreeSet::new();
    seen.insert(Mat3F2::IDENTITY);
    let mut frontier = vec![Mat3F2::IDENTITY];
    while let Some(m) = frontier.pop() {
        for g in gens {
            let next = m.mul(g);
            if seen.insert(next) {
                frontier.push(next);
            }
        }
    }
    seen.into_iter().collect()
}

pub fn centralizer(m: &Mat3F2) -> Vec<Mat3F2> {
    all_invertible()
        .iter()
        .copied()
        .filter(|g| g.mul(m) == m.mul(g))
        .collect()
}

/// Name a small subgroup by order, exponent, commutativity, and involution
/// count. Covers the subgroups that occur as centralizers here; anything
/// else falls back to its order.
pub fn structure_name(elements: &[Mat3F2]) -> String {
    let n = elements.len();
    let abelian = elements
        .iter()
        .all(|a| elements.iter().all(|b| a.mul(b) == b.mul(a)));
    let orders: Vec<u32> = elements.iter().map(Mat3F2::order).collect();
    let exponent = orders.iter().fold(1u32, |acc, &o| num_lcm(acc, o));
    let involutions = orders.iter().filter(|&&o| o == 2).count();
    match (n, abelian, exponent, involutions) {
        (1, ..) => "1".into(),
        (2, ..) => "Z/2".into(),
        (3, ..) => "Z/3".into(),
        (7, ..) => "Z/7".into(),
        (4, _, 4, _) => "Z/4".into(),
        (4, _, 2, _) => "Z/2 x Z/2".into(),
        (6, true, ..) => "Z/6".into(),
        (6, false, ..) => "S3".into(),
        (8, true, 8, _) => "Z/8".into(),
        (8, true, 4, _) => "Z/4 x Z/2".into(),
        (8, true, 2, _) => "(Z/2)^3".into(),
        (8, false, _, 1) => "Q8".into(),
        (8, false, _, 5) => "D4".into(),
        (21, true, ..) => "Z/21".into(),
        (21, false, ..) => "F21".into(),
        (168, ..) => "PSL(3,2)".into(),
        _ => format!("group of order {n}"),
    }
}

fn num_lcm(a: u32, b: u32) -> u32 {
    fn gcd(a: u32, b: u32) -> u32 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn there_are_168_invertible_matrices() {
        assert_eq!(all_invertible().len(), 168);
    }

    #[test]
    fn cyclic_shift_encoding_and_action() {
        let shift = Mat3F2::from_rows([[0, 1, 0], [0, 0, 1], [1, 0, 0]]);
        assert_eq!(shift.bits_string(), "010001100");
        assert_eq!(Mat3F2::from_bits_string("010001100"), Some(shift));
        // sends e1 -> e3 -> e2 -> e1
        assert_eq!(shift.apply(0b100), 0b001);
        assert_eq!(shift.apply(0b001), 0b010);
        assert_eq!(shift.apply(0b010), 0b100);
        assert_eq!(shift.order(), 3);
        assert_eq!(shift.trace(), 0);
    }

    #[test]
    fn group_axioms_hold_exhaustively() {
        for m in all_invertible() {
            let inv = m.inverse().unwrap();
            assert_eq!(m.mul(&inv), Mat3F2::IDENTITY);
            assert_eq!(inv.mul(m), Mat3F2::IDENTITY);
            assert_eq!(m.pow(m.order()), Mat3F2::IDENTITY);
            assert!([1, 2, 3, 4, 7].contains(&m.order()));
        }
    }

    #[test]
    fn transpose_reverses_products() {
        let a = Mat3F2::from_rows([[1, 1, 0], [0, 1, 1], [1, 0, 0]]);
        let b = Mat3F2::from_rows([[0, 1, 1], [0, 0, 1], [1, 0, 1]]);
        assert_eq!(a.mul(&b).transpose(), b.transpose().mul(&a.transpose()));
    }

    #[test]
    fn matrix_action_respects_products() {
        let a = Mat3F2::from_rows([[0, 0, 1], [0, 1, 1], [1, 1, 0]]);
        let b = Mat3F2::from_rows([[0, 1, 0], [0, 0, 1], [1, 0, 1]]);
        for v in 0..8u8 {
            assert_eq!(a.apply(b.apply(v)), a.mul(&b).apply(v));
        }
    }

    #[test]
    fn conjugacy_class_table() {
        let classes = conjugacy_classes();
        let got: Vec<(&str, u32, u8, usize, usize)> = classes
            .iter()
            .map(|c| (c.label, c.order, c.trace, c.size, c.centralizer_order))
            .collect();
        assert_eq!(
            got,
            vec![
                ("1A", 1, 1, 1, 168),
                ("2A", 2, 1, 21, 8),
                ("3A", 3, 0, 56, 3),
                ("4A", 4, 1, 42, 4),
                ("7A", 7, 0, 24, 7),
                ("7B", 7, 1, 24, 7),
            ]
        );
        assert_eq!(classes.iter().map(|c| c.size).sum::<usize>(), 168);
    }

    #[test]
    fn class_membership_is_conjugation_invariant() {
        let m = Mat3F2::from_rows([[0, 1, 0], [0, 0, 1], [1, 0, 1]]);
        let rep = class_rep_of(&m);
        for g in all_invertible().iter().take(20) {
            let conj = g.mul(&m).mul(&g.inverse().unwrap());
            assert_eq!(class_rep_of(&conj), rep);
        }
    }

    #[test]
    fn centralizer_structures() {
        let names: Vec<String> = conjugacy_classes()
            .iter()
            .map(|c| structure_name(&centralizer(&c.rep)))
            .collect();
        assert_eq!(names, vec!["PSL(3,2)", "D4", "Z/3", "Z/4", "Z/7", "Z/7"]);
    }

    #[test]
    fn closure_of_a_seven_element() {
        let m = conjugacy_classes()[4].rep;
        assert_eq!(m.order(), 7);
        let sub = closure(&[m]);
        assert_eq!(sub.len(), 7);
        assert_eq!(structure_name(&sub), "Z/7");
    }
}
