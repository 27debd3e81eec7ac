//! Elements of `A(G,K)`: finitely supported exact coefficient vectors over
//! the pair-class basis.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::pairs::{PairClass, PairSpace};
use crate::scalar::{format_rational, Rational, ScalarMode};

#[derive(Clone)]
pub struct BurnsideElement {
    space: Arc<PairSpace>,
    coeffs: BTreeMap<usize, Rational>,
    mode: ScalarMode,
}

impl fmt::Debug for BurnsideElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for BurnsideElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (i, (&id, c)) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}*[{}]", format_rational(c), id)?;
        }
        Ok(())
    }
}

impl PartialEq for BurnsideElement {
    fn eq(&self, other: &Self) -> bool {
        self.same_space(other) && self.coeffs == other.coeffs
    }
}

impl Eq for BurnsideElement {}

impl BurnsideElement {
    pub fn zero(space: &Arc<PairSpace>) -> BurnsideElement {
        BurnsideElement {
            space: space.clone(),
            coeffs: BTreeMap::new(),
            mode: ScalarMode::Integer,
        }
    }

    /// The basis element of class `id`.
    pub fn basis(space: &Arc<PairSpace>, id: usize) -> BurnsideElement {
        assert!(id < space.len(), "class id {id} out of range");
        let mut coeffs = BTreeMap::new();
        coeffs.insert(id, Rational::one());
        BurnsideElement {
            space: space.clone(),
            coeffs,
            mode: ScalarMode::Integer,
        }
    }

    /// Builds `sum c_i [class_i]`, checking ids and that every coefficient
    /// lies in `mode`.
    pub fn from_terms(
        space: &Arc<PairSpace>,
        terms: impl IntoIterator<Item = (usize, Rational)>,
        mode: ScalarMode,
    ) -> Result<BurnsideElement> {
        let mut coeffs: BTreeMap<usize, Rational> = BTreeMap::new();
        for (id, c) in terms {
            if id >= space.len() {
                return Err(Error::ClassMismatch(format!(
                    "class id {id} out of range for {} classes",
                    space.len()
                )));
            }
            *coeffs.entry(id).or_insert_with(Rational::zero) += c;
        }
        coeffs.retain(|_, c| !c.is_zero());
        if let Some(bad) = coeffs.values().find(|c| !mode.admits(c)) {
            return Err(match mode {
                ScalarMode::PLocal(p) => {
                    Error::PAdicIntegralityViolation(format!("coefficient {bad} is not {p}-integral"))
                }
                _ => Error::InvalidInput(format!("coefficient {bad} is not an integer")),
            });
        }
        Ok(BurnsideElement {
            space: space.clone(),
            coeffs,
            mode,
        })
    }

    /// Integer combination of basis elements.
    pub fn from_ints(space: &Arc<PairSpace>, terms: &[(usize, i64)]) -> Result<BurnsideElement> {
        Self::from_terms(
            space,
            terms.iter().map(|&(id, c)| (id, Rational::from_integer(BigInt::from(c)))),
            ScalarMode::Integer,
        )
    }

    /// Dense coefficients in class order, all integers.
    pub fn from_dense(space: &Arc<PairSpace>, coeffs: &[i64]) -> Result<BurnsideElement> {
        if coeffs.len() != space.len() {
            return Err(Error::ClassMismatch(format!(
                "expected {} coefficients, got {}",
                space.len(),
                coeffs.len()
            )));
        }
        let terms: Vec<(usize, i64)> = coeffs.iter().copied().enumerate().collect();
        Self::from_ints(space, &terms)
    }

    pub fn space(&self) -> &Arc<PairSpace> {
        &self.space
    }

    pub fn source(&self) -> &FiniteGroup {
        self.space.source()
    }

    pub fn target(&self) -> &FiniteGroup {
        self.space.target()
    }

    pub fn mode(&self) -> ScalarMode {
        self.mode
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `(class_id, coefficient)` over the support, in class order.
    pub fn terms(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.coeffs.iter().map(|(&id, c)| (id, c))
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.coeffs.keys().copied()
    }

    pub fn coeff(&self, id: usize) -> Rational {
        self.coeffs.get(&id).cloned().unwrap_or_else(Rational::zero)
    }

    /// Coefficient at a class, which must belong to this element's basis.
    pub fn coeff_at(&self, class: &PairClass) -> Result<Rational> {
        let ours = self.space.classes().get(class.class_id);
        if ours.map(|c| c.canonical.key()) != Some(class.canonical.key())
            || class.canonical.source_group() != self.source()
            || class.canonical.target_group() != self.target()
        {
            return Err(Error::ClassMismatch(format!(
                "class {} is not a class of A({}, {})",
                class.class_id,
                self.source().label(),
                self.target().label()
            )));
        }
        Ok(self.coeff(class.class_id))
    }

    /// Coefficients in class order.
    pub fn dense(&self) -> Vec<Rational> {
        (0..self.space.len()).map(|i| self.coeff(i)).collect()
    }

    /// Dense integer coefficients, if all are integers.
    pub fn dense_integers(&self) -> Option<Vec<BigInt>> {
        self.dense()
            .into_iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect()
    }

    /// Nonnegative integer coefficients: an honest bundle.
    pub fn is_effective(&self) -> bool {
        self.coeffs.values().all(|c| c.is_integer() && !c.is_negative())
    }

    /// Integer coefficients as machine integers, for effective set constructions.
    pub fn multiplicities(&self) -> Result<Vec<(usize, usize)>> {
        if !self.is_effective() {
            return Err(Error::NotEffective);
        }
        self.coeffs
            .iter()
            .map(|(&id, c)| {
                c.to_integer()
                    .to_usize()
                    .map(|m| (id, m))
                    .ok_or(Error::SizeCapExceeded { size: usize::MAX, cap: 0 })
            })
            .collect()
    }

    pub fn same_space(&self, other: &BurnsideElement) -> bool {
        Arc::ptr_eq(&self.space, &other.space)
            || (self.source() == other.source() && self.target() == other.target())
    }

    fn check_space(&self, other: &BurnsideElement) -> Result<()> {
        if !self.same_space(other) {
            return Err(Error::AmbientMismatch(format!(
                "A({}, {}) vs A({}, {})",
                self.source().label(),
                self.target().label(),
                other.source().label(),
                other.target().label()
            )));
        }
        Ok(())
    }

    /// Re-tags the scalar mode, checking every coefficient.
    pub fn with_mode(&self, mode: ScalarMode) -> Result<BurnsideElement> {
        Self::from_terms(&self.space, self.coeffs.clone(), mode)
    }

    /// The least mode that admits every coefficient, preferring `hint`.
    fn settle(mut self, hint: ScalarMode) -> BurnsideElement {
        self.mode = if self.coeffs.values().all(|c| ScalarMode::Integer.admits(c)) && hint == ScalarMode::Integer {
            ScalarMode::Integer
        } else if self.coeffs.values().all(|c| hint.admits(c)) {
            hint
        } else {
            ScalarMode::Rational
        };
        self
    }

    pub fn checked_add(&self, other: &BurnsideElement) -> Result<BurnsideElement> {
        self.check_space(other)?;
        let mut coeffs = self.coeffs.clone();
        for (&id, c) in &other.coeffs {
            *coeffs.entry(id).or_insert_with(Rational::zero) += c;
        }
        coeffs.retain(|_, c| !c.is_zero());
        let out = BurnsideElement {
            space: self.space.clone(),
            coeffs,
            mode: self.mode,
        };
        Ok(out.settle(self.mode.join(other.mode)))
    }

    pub fn checked_sub(&self, other: &BurnsideElement) -> Result<BurnsideElement> {
        self.checked_add(&other.scale(&-Rational::one()))
    }

    /// `c * self`. The mode is kept when it admits the result, otherwise widened.
    pub fn scale(&self, c: &Rational) -> BurnsideElement {
        let coeffs = if c.is_zero() {
            BTreeMap::new()
        } else {
            self.coeffs.iter().map(|(&id, x)| (id, x * c)).collect()
        };
        BurnsideElement {
            space: self.space.clone(),
            coeffs,
            mode: self.mode,
        }
        .settle(self.mode)
    }

    pub fn scale_int(&self, c: i64) -> BurnsideElement {
        self.scale(&Rational::from_integer(BigInt::from(c)))
    }

    /// Keeps only the classes satisfying `keep`.
    pub fn restrict(&self, mut keep: impl FnMut(&PairClass) -> bool) -> BurnsideElement {
        let coeffs = self
            .coeffs
            .iter()
            .filter(|(&id, _)| keep(self.space.class(id)))
            .map(|(&id, c)| (id, c.clone()))
            .collect();
        BurnsideElement {
            space: self.space.clone(),
            coeffs,
            mode: self.mode,
        }
    }

    pub fn to_doc(&self) -> ElementDoc {
        ElementDoc {
            source: self.source().label().to_string(),
            target: self.target().label().to_string(),
            coeffs: self
                .coeffs
                .iter()
                .map(|(&id, c)| CoeffDoc {
                    class_id: id,
                    num: c.numer().clone(),
                    den: c.denom().clone(),
                })
                .collect(),
        }
    }

    /// Reads an element document against a known basis. Labels are advisory;
    /// the caller supplies the space.
    pub fn from_doc(space: &Arc<PairSpace>, doc: &ElementDoc) -> Result<BurnsideElement> {
        let mut terms = Vec::with_capacity(doc.coeffs.len());
        for c in &doc.coeffs {
            if c.den.is_zero() {
                return Err(Error::InvalidInput("zero denominator".into()));
            }
            terms.push((c.class_id, Rational::new(c.num.clone(), c.den.clone())));
        }
        let all_int = terms.iter().all(|(_, q)| q.is_integer());
        let mode = if all_int { ScalarMode::Integer } else { ScalarMode::Rational };
        Self::from_terms(space, terms, mode)
    }
}

impl Add for &BurnsideElement {
    type Output = BurnsideElement;
    fn add(self, rhs: &BurnsideElement) -> BurnsideElement {
        self.checked_add(rhs).expect("elements of the same module")
    }
}

impl Sub for &BurnsideElement {
    type Output = BurnsideElement;
    fn sub(self, rhs: &BurnsideElement) -> BurnsideElement {
        self.checked_sub(rhs).expect("elements of the same module")
    }
}

impl Neg for &BurnsideElement {
    type Output = BurnsideElement;
    fn neg(self) -> BurnsideElement {
        self.scale(&-Rational::one())
    }
}

/// Serialized element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementDoc {
    pub source: String,
    pub target: String,
    pub coeffs: Vec<CoeffDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoeffDoc {
    pub class_id: usize,
    #[serde(with = "bigint_json")]
    pub num: BigInt,
    #[serde(with = "bigint_json")]
    pub den: BigInt,
}

/// Integers as JSON numbers when they fit in 64 bits, strings otherwise.
pub(crate) mod bigint_json {
    use num_bigint::BigInt;
    use num_traits::ToPrimitive;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(n: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        match n.to_i64() {
            Some(v) => s.serialize_i64(v),
            None => s.serialize_str(&n.to_string()),
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Int(i64),
        Str(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Int(v) => Ok(BigInt::from(v)),
            Repr::Str(s) => s.parse().map_err(de::Error::custom),
        }
    }
}

/// An element of the quotient by trivial-map classes, stored through its
/// canonical lift (support on classes with nontrivial map).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TildeElement(BurnsideElement);

impl TildeElement {
    /// The lift with the same support.
    pub fn lift(&self) -> &BurnsideElement {
        &self.0
    }

    pub fn into_lift(self) -> BurnsideElement {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

/// Drops the coefficients at classes `[H, triv]`.
pub fn tilde_quotient(x: &BurnsideElement) -> TildeElement {
    TildeElement(x.restrict(|c| !c.has_trivial_map()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::named_group;
    use crate::scalar::{int, rat};

    fn space(g: &str, k: &str) -> Arc<PairSpace> {
        Arc::new(PairSpace::enumerate(&named_group(g).unwrap(), &named_group(k).unwrap()).unwrap())
    }

    #[test]
    fn coefficients() {
        let s = space("C2", "C2");
        // classes: [1,triv]=0, [C2,triv]=1, [C2,id]=2
        let b = BurnsideElement::basis(&s, 2);
        assert_eq!(b.coeff_at(s.class(2)).unwrap(), int(1));
        assert_eq!(b.coeff_at(s.class(0)).unwrap(), int(0));
        let x = BurnsideElement::from_ints(&s, &[(2, 2), (0, -3)]).unwrap();
        assert_eq!(x.coeff_at(s.class(2)).unwrap(), int(2));
        let other = space("C2", "C1");
        assert!(matches!(x.coeff_at(other.class(1)), Err(Error::ClassMismatch(_))));
    }

    #[test]
    fn arithmetic_and_modes() {
        let s = space("S3", "C1");
        let a = BurnsideElement::from_ints(&s, &[(0, 1), (3, 2)]).unwrap();
        let b = BurnsideElement::from_ints(&s, &[(0, -1)]).unwrap();
        let sum = &a + &b;
        assert_eq!(sum, BurnsideElement::from_ints(&s, &[(3, 2)]).unwrap());
        assert_eq!(sum.mode(), ScalarMode::Integer);
        let third = a.scale(&rat(1, 3));
        assert_eq!(third.mode(), ScalarMode::Rational);
        let local = a.with_mode(ScalarMode::PLocal(2)).unwrap().scale(&rat(1, 3));
        assert_eq!(local.mode(), ScalarMode::PLocal(2));
        assert!(matches!(
            third.with_mode(ScalarMode::PLocal(3)),
            Err(Error::PAdicIntegralityViolation(_))
        ));
        assert!((&a - &a).is_zero());
        let other = space("C2", "C1");
        assert!(a.checked_add(&BurnsideElement::zero(&other)).is_err());
    }

    #[test]
    fn effective() {
        let s = space("C2", "C1");
        assert!(BurnsideElement::from_ints(&s, &[(0, 3)]).unwrap().is_effective());
        assert!(!BurnsideElement::from_ints(&s, &[(0, -3)]).unwrap().is_effective());
        assert!(!BurnsideElement::basis(&s, 0).scale(&rat(1, 2)).is_effective());
    }

    #[test]
    fn tilde() {
        let s = space("C2", "C2");
        let x = BurnsideElement::from_ints(&s, &[(0, 1), (1, 4)]).unwrap();
        assert!(tilde_quotient(&x).is_zero());
        let id = BurnsideElement::basis(&s, 2);
        assert_eq!(tilde_quotient(&id).lift(), &id);
        let y = &x + &id;
        assert_eq!(tilde_quotient(&y).into_lift(), id);
    }

    #[test]
    fn json_round_trip() {
        let s = space("C2", "C2");
        let x = BurnsideElement::from_terms(&s, [(0, rat(-1, 3)), (2, int(5))], ScalarMode::Rational).unwrap();
        let text = serde_json::to_string(&x.to_doc()).unwrap();
        assert_eq!(
            text,
            r#"{"source":"C2","target":"C2","coeffs":[{"class_id":0,"num":-1,"den":3},{"class_id":2,"num":5,"den":1}]}"#
        );
        let doc: ElementDoc = serde_json::from_str(&text).unwrap();
        assert_eq!(BurnsideElement::from_doc(&s, &doc).unwrap(), x);
        let bad: ElementDoc =
            serde_json::from_str(r#"{"source":"C2","target":"C2","coeffs":[{"class_id":7,"num":1,"den":1}]}"#).unwrap();
        assert!(matches!(BurnsideElement::from_doc(&s, &bad), Err(Error::ClassMismatch(_))));
    }
}
