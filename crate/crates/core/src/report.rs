//! Serializable report documents and CSV tables.

use std::fmt::Write as _;

use num_bigint::BigInt;
use serde::Serialize;

use crate::element::{bigint_json, BurnsideElement, ElementDoc};
use crate::marks::{KernelReport, MarkVariant};
use crate::pairs::{PairClass, PairSpace};
use crate::plocal::{IdempotentReport, PrimeComponent, SegalRank};
use crate::scalar::PLocalScalar;

#[derive(Clone, Debug, Serialize)]
pub struct ClassDoc {
    pub class_id: usize,
    #[serde(rename = "H")]
    pub subgroup: Vec<usize>,
    pub phi: Vec<usize>,
}

impl From<&PairClass> for ClassDoc {
    fn from(c: &PairClass) -> Self {
        let key = c.canonical.key();
        ClassDoc {
            class_id: c.class_id,
            subgroup: key.subgroup,
            phi: key.images,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BasisReport {
    pub source: String,
    pub target: String,
    pub count: usize,
    pub classes: Vec<ClassDoc>,
}

impl BasisReport {
    pub fn new(space: &PairSpace) -> BasisReport {
        BasisReport {
            source: space.source().label().to_string(),
            target: space.target().label().to_string(),
            count: space.len(),
            classes: space.classes().iter().map(ClassDoc::from).collect(),
        }
    }
}

/// One nonzero term with its class spelled out.
#[derive(Clone, Debug, Serialize)]
pub struct TermDoc {
    pub class_id: usize,
    #[serde(rename = "H")]
    pub subgroup: Vec<usize>,
    pub phi: Vec<usize>,
    #[serde(with = "bigint_json")]
    pub num: BigInt,
    #[serde(with = "bigint_json")]
    pub den: BigInt,
}

pub fn term_docs(x: &BurnsideElement) -> Vec<TermDoc> {
    x.terms()
        .map(|(id, c)| {
            let key = x.space().class(id).canonical.key();
            TermDoc {
                class_id: id,
                subgroup: key.subgroup,
                phi: key.images,
                num: c.numer().clone(),
                den: c.denom().clone(),
            }
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct ElementReport {
    pub element: ElementDoc,
    pub terms: Vec<TermDoc>,
}

impl ElementReport {
    pub fn new(x: &BurnsideElement) -> ElementReport {
        ElementReport {
            element: x.to_doc(),
            terms: term_docs(x),
        }
    }
}

/// An exact p-local coefficient with its residue mod `p^N` and base-`p` digits.
#[derive(Clone, Debug)]
pub struct PLocalDoc {
    pub num: BigInt,
    pub den: BigInt,
    pub precision: u32,
    pub residue: BigInt,
    pub digits: Vec<u64>,
}

impl PLocalDoc {
    pub fn new(q: &PLocalScalar, precision: u32) -> PLocalDoc {
        PLocalDoc {
            num: q.numer().clone(),
            den: q.denom().clone(),
            precision,
            residue: q.residue(precision),
            digits: q.digits(precision),
        }
    }
}

impl Serialize for PLocalDoc {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(Some(4))?;
        m.serialize_entry("num", &Num(&self.num))?;
        m.serialize_entry("den", &Num(&self.den))?;
        m.serialize_entry(&format!("digits_mod_p^{}", self.precision), &format!("...{}", self.residue))?;
        let digits: String = self
            .digits
            .iter()
            .map(|d| if *d < 10 { char::from(b'0' + *d as u8).to_string() } else { format!("({d})") })
            .collect();
        m.serialize_entry("base_p_digits", &format!("...{digits}"))?;
        m.end()
    }
}

struct Num<'a>(&'a BigInt);

impl Serialize for Num<'_> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        bigint_json::serialize(self.0, s)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IdempotentDoc {
    pub group: String,
    pub p: u64,
    pub reps: Vec<Vec<usize>>,
    pub matrix: Vec<Vec<u64>>,
    pub coeffs: Vec<PLocalDoc>,
    pub element: ElementDoc,
}

impl IdempotentDoc {
    pub fn new(r: &IdempotentReport, precision: u32) -> IdempotentDoc {
        IdempotentDoc {
            group: r.element.source().label().to_string(),
            p: r.prime,
            reps: r.representatives.iter().map(|h| h.elements().to_vec()).collect(),
            matrix: r.matrix.clone(),
            coeffs: r.coefficients.iter().map(|c| PLocalDoc::new(c, precision)).collect(),
            element: r.element.to_doc(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ProjectionDoc {
    pub p: u64,
    pub input: ElementDoc,
    pub result: ElementDoc,
    pub terms: Vec<TermDoc>,
    pub coeffs: Vec<PLocalDoc>,
}

impl ProjectionDoc {
    pub fn new(x: &BurnsideElement, pi: &BurnsideElement, p: u64, precision: u32) -> ProjectionDoc {
        ProjectionDoc {
            p,
            input: x.to_doc(),
            result: pi.to_doc(),
            terms: term_docs(pi),
            coeffs: pi
                .terms()
                .map(|(_, c)| PLocalDoc::new(&PLocalScalar::new(c.clone(), p).expect("p-integral"), precision))
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MarksDoc {
    pub source: String,
    pub target: String,
    pub variant: MarkVariant,
    pub rows: Vec<ClassDoc>,
    pub columns: Vec<ClassDoc>,
    pub matrix: Vec<Vec<u64>>,
}

impl MarksDoc {
    pub fn new(space: &PairSpace, variant: MarkVariant, matrix: &[Vec<u64>]) -> MarksDoc {
        let classes: Vec<ClassDoc> = space.classes().iter().map(ClassDoc::from).collect();
        MarksDoc {
            source: space.source().label().to_string(),
            target: space.target().label().to_string(),
            variant,
            rows: classes.clone(),
            columns: classes,
            matrix: matrix.to_vec(),
        }
    }
}

/// Rows are pair classes, columns basis classes, both by class id.
pub fn matrix_csv(row_ids: &[usize], col_ids: &[usize], matrix: &[Vec<u64>]) -> String {
    let mut out = String::from("class");
    for c in col_ids {
        let _ = write!(out, ",{c}");
    }
    out.push('\n');
    for (r, row) in row_ids.iter().zip(matrix) {
        let _ = write!(out, "{r}");
        for v in row {
            let _ = write!(out, ",{v}");
        }
        out.push('\n');
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct KernelDoc {
    pub source: String,
    pub target: String,
    pub columns: Vec<ClassDoc>,
    pub prime_power_classes: Vec<ClassDoc>,
    pub raw_matrix: Vec<Vec<u64>>,
    pub with_w_matrix: Vec<Vec<u64>>,
    pub rank: usize,
    pub kernel_basis: Vec<Vec<i64>>,
    pub with_w_kernel_basis: Vec<Vec<i64>>,
    pub variants_agree: bool,
}

fn dense_i64(x: &BurnsideElement) -> Vec<i64> {
    x.dense()
        .iter()
        .map(|c| i64::try_from(c.to_integer()).expect("kernel entries fit in i64"))
        .collect()
}

impl KernelDoc {
    pub fn new(space: &PairSpace, r: &KernelReport) -> KernelDoc {
        KernelDoc {
            source: space.source().label().to_string(),
            target: space.target().label().to_string(),
            columns: space.classes().iter().map(ClassDoc::from).collect(),
            prime_power_classes: r.prime_power_classes.iter().map(|&i| space.class(i).into()).collect(),
            raw_matrix: r.raw_matrix.clone(),
            with_w_matrix: r.with_w_matrix.clone(),
            rank: r.rank,
            kernel_basis: r.kernel_basis.iter().map(dense_i64).collect(),
            with_w_kernel_basis: r.with_w_kernel_basis.iter().map(dense_i64).collect(),
            variants_agree: r.variants_agree,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SegalDoc {
    pub source: String,
    pub target: String,
    pub p: u64,
    pub rank: usize,
    pub classes: Vec<ClassDoc>,
}

impl SegalDoc {
    pub fn new(space: &PairSpace, r: &SegalRank) -> SegalDoc {
        SegalDoc {
            source: space.source().label().to_string(),
            target: space.target().label().to_string(),
            p: r.prime,
            rank: r.rank,
            classes: r.classes.iter().map(|&i| space.class(i).into()).collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ComponentDoc {
    pub p: u64,
    pub projection: ElementDoc,
    pub tilde: ElementDoc,
    pub segal_rank: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct DecomposeDoc {
    pub input: ElementDoc,
    pub components: Vec<ComponentDoc>,
}

impl DecomposeDoc {
    pub fn new(x: &BurnsideElement, parts: &[PrimeComponent], ranks: &[usize]) -> DecomposeDoc {
        DecomposeDoc {
            input: x.to_doc(),
            components: parts
                .iter()
                .zip(ranks)
                .map(|(c, &r)| ComponentDoc {
                    p: c.prime,
                    projection: c.projection.to_doc(),
                    tilde: c.tilde.lift().to_doc(),
                    segal_rank: r,
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::Engine;
    use crate::group::named_group;

    #[test]
    fn idempotent_document() {
        let e = Engine::new();
        let r = e.one_p(&named_group("S3").unwrap(), 2).unwrap();
        let doc = serde_json::to_value(IdempotentDoc::new(&r, 8)).unwrap();
        assert_eq!(doc["p"], 2);
        assert_eq!(doc["matrix"], serde_json::json!([[1, 0], [3, 6]]));
        assert_eq!(doc["coeffs"][1]["num"], -1);
        assert_eq!(doc["coeffs"][1]["den"], 3);
        assert_eq!(doc["coeffs"][1]["digits_mod_p^8"], "...85");
        assert_eq!(doc["coeffs"][1]["base_p_digits"], "...01010101");
    }

    #[test]
    fn csv_layout() {
        let csv = matrix_csv(&[0, 1], &[0, 1], &[vec![2, 1], vec![0, 1]]);
        assert_eq!(csv, "class,0,1\n0,2,1\n1,0,1\n");
    }
}
