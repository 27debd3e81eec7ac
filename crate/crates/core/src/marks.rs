//! Mark homomorphisms on `A(G,K)`, their fixed-point oracle, the p-local
//! marks embedding, and the integer kernel of the prime-power marks.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::arith::is_prime_power;
use crate::element::BurnsideElement;
use crate::engine::Engine;
use crate::error::{Error, Result};
use crate::group::{is_p_group, normalizer, transporter, FiniteGroup, Subgroup};
use crate::linalg::{in_row_span, integer_kernel};
use crate::pairs::{graph_subgroup, GKPair, PairClass, PairSpace};
use crate::scalar::Rational;

/// Which mark functional to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MarkVariant {
    /// Orbits of the Weyl group `N(Delta)/Delta` on the `Delta`-fixed points.
    #[serde(rename = "withW")]
    WithW,
    /// The number of `Delta`-fixed points.
    #[serde(rename = "raw")]
    Raw,
}

impl fmt::Display for MarkVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MarkVariant::WithW => "withW",
            MarkVariant::Raw => "raw",
        })
    }
}

impl FromStr for MarkVariant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "withW" | "with-w" | "withw" => Ok(MarkVariant::WithW),
            "raw" => Ok(MarkVariant::Raw),
            _ => Err(Error::InvalidInput(format!("unknown mark variant {s:?}"))),
        }
    }
}

/// Marks of every class at every basis element of one `A(G,K)`:
/// `table[row][col]` is the mark of row class on column basis element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarksTable {
    pub raw: Vec<Vec<u64>>,
    pub with_w: Vec<Vec<u64>>,
}

impl MarksTable {
    pub fn get(&self, variant: MarkVariant) -> &[Vec<u64>] {
        match variant {
            MarkVariant::Raw => &self.raw,
            MarkVariant::WithW => &self.with_w,
        }
    }
}

/// `(|T| / |Delta'|, |N(Delta) \ T / Delta'|)` for the transporter
/// `T = {x : x^-1 Delta x <= Delta'}` in `K x G`.
fn basis_marks(delta: &Subgroup, norm: &Subgroup, other: &Subgroup) -> (u64, u64) {
    let kg = delta.group();
    let t = transporter(delta, other);
    if t.is_empty() {
        return (0, 0);
    }
    let raw = (t.len() / other.order()) as u64;
    let mut seen = vec![false; kg.order()];
    let mut orbits = 0;
    for &x in &t {
        if seen[x] {
            continue;
        }
        orbits += 1;
        for &n in norm.elements() {
            let nx = kg.mul(n, x);
            for &d in other.elements() {
                seen[kg.mul(nx, d)] = true;
            }
        }
    }
    (raw, orbits)
}

/// Marks of every class of `space`, plus their row/column assembly.
fn build_table(space: &PairSpace) -> Result<MarksTable> {
    let kg = space.product_group()?;
    let graphs: Vec<Subgroup> = space
        .classes()
        .iter()
        .map(|c| graph_subgroup(&c.canonical, kg))
        .collect::<Result<_>>()?;
    let n = graphs.len();
    let mut raw = vec![vec![0; n]; n];
    let mut with_w = vec![vec![0; n]; n];
    for (r, delta) in graphs.iter().enumerate() {
        let norm = normalizer(delta);
        for (c, other) in graphs.iter().enumerate() {
            let (a, b) = basis_marks(delta, &norm, other);
            raw[r][c] = a;
            with_w[r][c] = b;
        }
    }
    Ok(MarksTable { raw, with_w })
}

/// Mark values at a list of classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarksVector {
    pub index: Vec<usize>,
    pub values: Vec<Rational>,
    pub variant: MarkVariant,
}

/// The prime-power marks matrices of `A(G,K)` and their integer kernels.
#[derive(Clone, Debug)]
pub struct KernelReport {
    /// Classes `[H, psi]` with `|H|` a prime power (or 1): the matrix rows.
    pub prime_power_classes: Vec<usize>,
    pub raw_matrix: Vec<Vec<u64>>,
    pub with_w_matrix: Vec<Vec<u64>>,
    /// Hermite basis of the kernel of the raw marks.
    pub kernel_basis: Vec<BurnsideElement>,
    /// Hermite basis of the kernel of the Weyl-quotient marks.
    pub with_w_kernel_basis: Vec<BurnsideElement>,
    pub rank: usize,
    pub variants_agree: bool,
}

fn to_bigint_rows(m: &[Vec<u64>]) -> Vec<Vec<BigInt>> {
    m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

impl Engine {
    /// The cached marks table of `A(G,K)`.
    pub fn marks_table(&self, space: &Arc<PairSpace>) -> Result<Arc<MarksTable>> {
        let key = (*space.source().key(), *space.target().key());
        self.marks.get_or_try(key, || Ok(Arc::new(build_table(space)?)))
    }

    /// `chi_[H,psi](X)`, with `c` a class of `X`'s own basis.
    pub fn mark(&self, c: &PairClass, x: &BurnsideElement, variant: MarkVariant) -> Result<Rational> {
        x.coeff_at(c)?;
        self.mark_row(c.class_id, x, variant)
    }

    /// Mark at the class with id `row`.
    pub fn mark_row(&self, row: usize, x: &BurnsideElement, variant: MarkVariant) -> Result<Rational> {
        let table = self.marks_table(x.space())?;
        let t = table.get(variant);
        Ok(x.terms().map(|(j, c)| c * BigInt::from(t[row][j])).sum())
    }

    /// Mark at an arbitrary pair, evaluated from its own graph subgroup
    /// rather than from its class representative.
    pub fn mark_at_pair(&self, pair: &GKPair, x: &BurnsideElement, variant: MarkVariant) -> Result<Rational> {
        check_pair(pair, x)?;
        let space = x.space();
        let kg = space.product_group()?;
        let delta = graph_subgroup(pair, kg)?;
        let norm = normalizer(&delta);
        let mut total = Rational::zero();
        for (j, c) in x.terms() {
            let other = graph_subgroup(&space.class(j).canonical, kg)?;
            let (raw, with_w) = basis_marks(&delta, &norm, &other);
            let m = if variant == MarkVariant::Raw { raw } else { with_w };
            total += c * BigInt::from(m);
        }
        Ok(total)
    }

    /// Marks counted on the literal bundle: `Delta`-fixed points, or their
    /// orbits under the normalizer of `Delta`.
    pub fn mark_oracle(&self, pair: &GKPair, x: &BurnsideElement, variant: MarkVariant) -> Result<Rational> {
        check_pair(pair, x)?;
        let terms = x.multiplicities()?;
        let kg = x.space().product_group()?;
        let set = self.bundle(x.space(), kg, &terms)?;
        let delta = graph_subgroup(pair, kg)?;
        let fixed = set.fixed_points(&delta);
        let count = match variant {
            MarkVariant::Raw => fixed.len(),
            MarkVariant::WithW => set.count_orbits_on(&normalizer(&delta), &fixed),
        };
        Ok(Rational::from_integer(BigInt::from(count)))
    }

    /// Marks at every class `[P, psi]` with `P` a p-group.
    pub fn chi_p(&self, x: &BurnsideElement, p: u64, variant: MarkVariant) -> Result<MarksVector> {
        let index: Vec<usize> = x
            .space()
            .classes()
            .iter()
            .filter(|c| is_p_group(c.subgroup(), p))
            .map(|c| c.class_id)
            .collect();
        let values = index
            .iter()
            .map(|&r| self.mark_row(r, x, variant))
            .collect::<Result<_>>()?;
        Ok(MarksVector { index, values, variant })
    }

    /// Square marks matrix of the p-isotropy classes against themselves.
    pub fn p_marks_matrix(&self, space: &Arc<PairSpace>, p: u64, variant: MarkVariant) -> Result<Vec<Vec<u64>>> {
        let table = self.marks_table(space)?;
        let t = table.get(variant);
        let idx: Vec<usize> = space
            .classes()
            .iter()
            .filter(|c| is_p_group(c.subgroup(), p))
            .map(|c| c.class_id)
            .collect();
        Ok(idx.iter().map(|&r| idx.iter().map(|&c| t[r][c]).collect()).collect())
    }

    /// The kernel of the completion map: virtual elements all of whose
    /// prime-power marks vanish.
    pub fn kernel_of_alpha(&self, g: &FiniteGroup, k: &FiniteGroup) -> Result<KernelReport> {
        let space = self.space(g, k)?;
        let table = self.marks_table(&space)?;
        let rows = prime_power_classes(&space);
        let pick = |t: &[Vec<u64>]| -> Vec<Vec<u64>> { rows.iter().map(|&r| t[r].clone()).collect() };
        let raw_matrix = pick(&table.raw);
        let with_w_matrix = pick(&table.with_w);
        let n = space.len();
        let raw_kernel = integer_kernel(&to_bigint_rows(&raw_matrix), n);
        let w_kernel = integer_kernel(&to_bigint_rows(&with_w_matrix), n);
        let variants_agree = raw_kernel == w_kernel;
        let lift = |basis: &[Vec<BigInt>]| -> Vec<BurnsideElement> {
            basis
                .iter()
                .map(|v| {
                    BurnsideElement::from_terms(
                        &space,
                        v.iter().enumerate().map(|(i, c)| (i, Rational::from_integer(c.clone()))),
                        crate::scalar::ScalarMode::Integer,
                    )
                    .expect("integer kernel vector")
                })
                .collect()
        };
        Ok(KernelReport {
            prime_power_classes: rows,
            rank: raw_kernel.len(),
            kernel_basis: lift(&raw_kernel),
            with_w_kernel_basis: lift(&w_kernel),
            raw_matrix,
            with_w_matrix,
            variants_agree,
        })
    }

    /// True iff every prime-power raw mark of `x` vanishes.
    pub fn is_in_kernel(&self, x: &BurnsideElement) -> Result<bool> {
        if x.dense_integers().is_none() {
            return Err(Error::InvalidInput("kernel membership needs integer coefficients".into()));
        }
        for r in prime_power_classes(x.space()) {
            if !self.mark_row(r, x, MarkVariant::Raw)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Membership in the Z-span of the kernel basis.
    pub fn in_kernel_span(&self, report: &KernelReport, x: &BurnsideElement) -> Result<bool> {
        let v = x
            .dense_integers()
            .ok_or_else(|| Error::InvalidInput("kernel membership needs integer coefficients".into()))?;
        let basis: Vec<Vec<BigInt>> = report
            .kernel_basis
            .iter()
            .map(|b| b.dense_integers().expect("integer basis"))
            .collect();
        Ok(in_row_span(&basis, &v))
    }
}

/// Classes `[H, psi]` with `|H|` a prime power, including `|H| = 1`.
pub fn prime_power_classes(space: &PairSpace) -> Vec<usize> {
    space
        .classes()
        .iter()
        .filter(|c| is_prime_power(c.order() as u64))
        .map(|c| c.class_id)
        .collect()
}

fn check_pair(pair: &GKPair, x: &BurnsideElement) -> Result<()> {
    if pair.source_group() != x.source() || pair.target_group() != x.target() {
        return Err(Error::AmbientMismatch("pair and element live in different modules".into()));
    }
    Ok(())
}
