//! Classification report over the full catalog: one record per twist, one
//! summary per conjugacy class, and consistency flags computed from the
//! assembled data.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::geometry::{bitangents, count_points, normalize_additive};
use crate::group::{centralizer, conjugacy_classes, structure_name};
use crate::twist::{automorphisms, catalog, named_curves, Twist};
use crate::zeta::{expected_l, factor_over_inventory, l_from_counts, LPolynomial};

pub const REPORT_SCHEMA: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveRecord {
    /// row-major 9-bit twist matrix
    pub p: String,
    pub name: Option<String>,
    pub class: String,
    pub order: u32,
    pub trace: u8,
    pub equation: String,
    /// rational point counts over the first three extensions
    pub n: [u64; 3],
    /// numerator coefficients, constant term first
    pub l: Vec<i64>,
    pub l_factored: String,
    pub class_number: i64,
    /// definition-field degrees of the seven bitangents, ascending
    pub bitangent_degrees: Vec<u32>,
    pub automorphisms: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassSummary {
    pub label: String,
    pub order: u32,
    pub trace: u8,
    pub size: usize,
    /// least twist-matrix encoding in the class
    pub representative: String,
    pub automorphism_structure: String,
    pub n: [u64; 3],
    pub l: Vec<i64>,
    pub l_factored: String,
    pub class_number: i64,
    pub bitangent_degrees: Vec<u32>,
}

/// Consistency checks that fall out of assembling the report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteFlags {
    pub curves_total_168: bool,
    pub equations_distinct: bool,
    pub class_sizes_sum_to_total: bool,
    pub counts_constant_within_classes: bool,
    pub l_matches_class: bool,
    pub seven_bitangents_everywhere: bool,
    pub squaring_matrix_is_transpose: bool,
}

impl SuiteFlags {
    pub fn all_pass(&self) -> bool {
        self.curves_total_168
            && self.equations_distinct
            && self.class_sizes_sum_to_total
            && self.counts_constant_within_classes
            && self.l_matches_class
            && self.seven_bitangents_everywhere
            && self.squaring_matrix_is_transpose
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub schema: u32,
    pub curves: Vec<CurveRecord>,
    pub classes: Vec<ClassSummary>,
    pub flags: SuiteFlags,
}

/// Product-form rendering over the catalog factors, e.g. "z+ * (z-)^2".
pub fn factored_string(l: &LPolynomial) -> String {
    match factor_over_inventory(l) {
        Some(factors) => factors
            .iter()
            .map(|(name, e)| if *e == 1 { (*name).to_string() } else { format!("({name})^{e}") })
            .collect::<Vec<_>>()
            .join(" * "),
        None => l.to_string(),
    }
}

fn curve_names() -> BTreeMap<u16, String> {
    let mut names: BTreeMap<u16, Vec<&str>> = BTreeMap::new();
    for (name, mask) in named_curves() {
        names.entry(mask.bits()).or_default().push(name);
    }
    names.into_iter().map(|(bits, ns)| (bits, ns.join("/"))).collect()
}

struct RecordData {
    record: CurveRecord,
    l_expected: bool,
    seven: bool,
    transpose: bool,
}

fn build_record(t: &Twist, names: &BTreeMap<u16, String>) -> RecordData {
    let class = t.class();
    let f = t.curve;
    let n = [count_points(&f, 1), count_points(&f, 2), count_points(&f, 3)];
    let l = l_from_counts(n[0], n[1], n[2]).expect("twist counts give an integral numerator");
    let (degrees, seven, transpose) = match bitangents(&f) {
        Ok(set) => {
            let r_ok = normalize_additive(&set)
                .map(|norm| norm.r == t.p.transpose())
                .unwrap_or(false);
            (set.degrees(), true, r_ok)
        }
        Err(_) => (Vec::new(), false, false),
    };
    let record = CurveRecord {
        p: t.p.bits_string(),
        name: names.get(&f.bits()).cloned(),
        class: class.label.to_string(),
        order: class.order,
        trace: class.trace,
        equation: f.equation(),
        n,
        l: l.coeffs().to_vec(),
        l_factored: factored_string(&l),
        class_number: l.class_number(),
        bitangent_degrees: degrees,
        automorphisms: automorphisms(&f).len(),
    };
    RecordData { record, l_expected: l == expected_l(class), seven, transpose }
}

/// The record of a single twist, exactly as it appears in the full report.
pub fn curve_record(t: &Twist) -> CurveRecord {
    build_record(t, &curve_names()).record
}

pub fn build_classification_report(parallel: bool) -> ClassificationReport {
    let names = curve_names();
    let twists = catalog();
    let data: Vec<RecordData> = if parallel {
        twists.par_iter().map(|t| build_record(t, &names)).collect()
    } else {
        twists.iter().map(|t| build_record(t, &names)).collect()
    };

    let mut curves: Vec<CurveRecord> = data.iter().map(|d| d.record.clone()).collect();
    let order_before: Vec<String> = curves.iter().map(|c| c.p.clone()).collect();
    curves.sort_by(|a, b| a.p.cmp(&b.p));
    debug_assert_eq!(
        order_before,
        curves.iter().map(|c| c.p.clone()).collect::<Vec<_>>(),
        "catalog is already sorted by encoding"
    );

    let classes: Vec<ClassSummary> = conjugacy_classes()
        .iter()
        .map(|class| {
            let rep = curves
                .iter()
                .find(|c| c.class == class.label)
                .expect("every class has a twist");
            ClassSummary {
                label: class.label.to_string(),
                order: class.order,
                trace: class.trace,
                size: class.size,
                representative: rep.p.clone(),
                automorphism_structure: structure_name(&centralizer(&class.rep)),
                n: rep.n,
                l: rep.l.clone(),
                l_factored: rep.l_factored.clone(),
                class_number: rep.class_number,
                bitangent_degrees: rep.bitangent_degrees.clone(),
            }
        })
        .collect();

    let per_class_ok = |curve: &CurveRecord| {
        let summary = classes.iter().find(|s| s.label == curve.class).unwrap();
        curve.n == summary.n
    };
    let mut equations: Vec<&str> = curves.iter().map(|c| c.equation.as_str()).collect();
    equations.sort_unstable();
    equations.dedup();

    let flags = SuiteFlags {
        curves_total_168: curves.len() == 168,
        equations_distinct: equations.len() == curves.len(),
        class_sizes_sum_to_total: classes.iter().map(|s| s.size).sum::<usize>() == curves.len(),
        counts_constant_within_classes: curves.iter().all(per_class_ok),
        l_matches_class: data.iter().all(|d| d.l_expected),
        seven_bitangents_everywhere: data.iter().all(|d| d.seven),
        squaring_matrix_is_transpose: data.iter().all(|d| d.transpose),
    };

    ClassificationReport { schema: REPORT_SCHEMA, curves, classes, flags }
}

impl ClassificationReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Columns: p, name, class, order, trace, n1, n2, n3, class_number,
    /// automorphisms, bitangent_degrees ('+'-joined), l (';'-joined),
    /// equation. No field contains a comma, so no quoting is needed.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "p,name,class,order,trace,n1,n2,n3,class_number,automorphisms,bitangent_degrees,l,equation\n",
        );
        for c in &self.curves {
            let degrees =
                c.bitangent_degrees.iter().map(u32::to_string).collect::<Vec<_>>().join("+");
            let l = c.l.iter().map(i64::to_string).collect::<Vec<_>>().join(";");
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
                c.p,
                c.name.as_deref().unwrap_or(""),
                c.class,
                c.order,
                c.trace,
                c.n[0],
                c.n[1],
                c.n[2],
                c.class_number,
                c.automorphisms,
                degrees,
                l,
                c.equation,
            ));
        }
        out
    }
}
