//! Finite groups as dense multiplication tables.
//!
//! Elements of a group of order `n` are the indices `0..n`. Every group is
//! immutable once built and cheap to clone (the table is shared).
//!
//! A group obtained from a subgroup via [`Subgroup::to_group`] remembers its
//! embedding into the parent, which is what lets Sylow-subgroup computations
//! move pairs between `S` and `G`.

mod catalog;
mod hom;
mod lattice;

pub use catalog::{named_group, GroupSpec};
pub use hom::{homomorphisms, Homomorphism};
pub use lattice::{
    conjugacy_class_reps, double_coset_classes, double_cosets, is_p_group, normalizer,
    subgroups, subgroups_capped, sylow_subgroup, transporter,
};

use std::cmp::Ordering;
use std::collections::VecDeque;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Default cap on ambient group orders.
pub const DEFAULT_GROUP_CAP: usize = 64;
/// Default cap on constructed products such as `K x G`.
pub const DEFAULT_PRODUCT_CAP: usize = 4096;

/// Permutation generators a group was built from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermPresentation {
    pub degree: usize,
    pub generators: Vec<Vec<usize>>,
}

#[derive(Clone, Debug)]
struct Embedding {
    parent: FiniteGroup,
    images: Vec<usize>,
}

struct GroupData {
    order: usize,
    table: Vec<u32>,
    identity: usize,
    inv: Vec<usize>,
    label: String,
    perms: Option<PermPresentation>,
    embedding: Option<Embedding>,
    table_hash: [u8; 32],
    key: [u8; 32],
}

#[derive(Clone)]
pub struct FiniteGroup(Arc<GroupData>);

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup({}, order {})", self.0.label, self.0.order)
    }
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.key == other.0.key
    }
}

impl Eq for FiniteGroup {}

impl Hash for FiniteGroup {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.key.hash(state)
    }
}

fn hash_table(order: usize, table: &[u32]) -> [u8; 32] {
    let mut hasher = Sha256::new();
    hasher.update((order as u64).to_le_bytes());
    for &entry in table {
        hasher.update(entry.to_le_bytes());
    }
    hasher.finalize().into()
}

impl FiniteGroup {
    fn build(
        order: usize,
        table: Vec<u32>,
        label: String,
        perms: Option<PermPresentation>,
        embedding: Option<Embedding>,
    ) -> FiniteGroup {
        let identity = (0..order)
            .find(|&e| (0..order).all(|x| table[e * order + x] as usize == x))
            .expect("table has an identity");
        let mut inv = vec![usize::MAX; order];
        for x in 0..order {
            for y in 0..order {
                if table[x * order + y] as usize == identity {
                    inv[x] = y;
                    break;
                }
            }
        }
        let table_hash = hash_table(order, &table);
        let key = match &embedding {
            None => table_hash,
            Some(emb) => {
                let mut hasher = Sha256::new();
                hasher.update(table_hash);
                hasher.update(emb.parent.0.key);
                for &i in &emb.images {
                    hasher.update((i as u64).to_le_bytes());
                }
                hasher.finalize().into()
            }
        };
        FiniteGroup(Arc::new(GroupData {
            order,
            table,
            identity,
            inv,
            label,
            perms,
            embedding,
            table_hash,
            key,
        }))
    }

    /// Validates a Cayley table and builds the group.
    ///
    /// Associativity is checked exhaustively, so this is meant for
    /// user-supplied tables of modest order.
    pub fn from_table(table: &[Vec<usize>], label: impl Into<String>) -> Result<FiniteGroup> {
        let order = table.len();
        if order == 0 {
            return Err(Error::NotAGroup("empty table".into()));
        }
        if order > DEFAULT_PRODUCT_CAP {
            return Err(Error::OrderCapExceeded {
                what: "table".into(),
                order,
                cap: DEFAULT_PRODUCT_CAP,
            });
        }
        let mut flat = Vec::with_capacity(order * order);
        for (r, row) in table.iter().enumerate() {
            if row.len() != order {
                return Err(Error::NotAGroup(format!("row {r} has length {}", row.len())));
            }
            for &v in row {
                if v >= order {
                    return Err(Error::NotAGroup(format!("entry {v} out of range in row {r}")));
                }
                flat.push(v as u32);
            }
        }
        let at = |a: usize, b: usize| flat[a * order + b] as usize;
        let identity = (0..order)
            .find(|&e| (0..order).all(|x| at(e, x) == x && at(x, e) == x))
            .ok_or_else(|| Error::NotAGroup("no two-sided identity".into()))?;
        for x in 0..order {
            let has_inverse = (0..order).any(|y| at(x, y) == identity && at(y, x) == identity);
            if !has_inverse {
                return Err(Error::NotAGroup(format!("element {x} has no inverse")));
            }
        }
        for a in 0..order {
            for b in 0..order {
                let ab = at(a, b);
                for c in 0..order {
                    if at(ab, c) != at(a, at(b, c)) {
                        return Err(Error::NotAGroup(format!(
                            "({a}*{b})*{c} != {a}*({b}*{c})"
                        )));
                    }
                }
            }
        }
        Ok(FiniteGroup::build(order, flat, label.into(), None, None))
    }

    /// Closes a set of permutations of `0..degree` under composition,
    /// with the default cap of [`DEFAULT_GROUP_CAP`] elements.
    pub fn from_permutations(degree: usize, generators: &[Vec<usize>]) -> Result<FiniteGroup> {
        Self::from_permutations_capped(degree, generators, DEFAULT_GROUP_CAP)
    }

    /// Permutation closure with an explicit order cap.
    ///
    /// Elements are indexed in lexicographic order of their image vectors, so
    /// the identity is always element 0. The product `a * b` is the
    /// composite "apply `b`, then `a`".
    pub fn from_permutations_capped(
        degree: usize,
        generators: &[Vec<usize>],
        cap: usize,
    ) -> Result<FiniteGroup> {
        for (i, gen) in generators.iter().enumerate() {
            if gen.len() != degree {
                return Err(Error::InvalidPermutation(format!(
                    "generator {i} has length {}, expected {degree}",
                    gen.len()
                )));
            }
            let mut seen = vec![false; degree];
            for &x in gen {
                if x >= degree || seen[x] {
                    return Err(Error::InvalidPermutation(format!(
                        "generator {i} is not a bijection on 0..{degree}"
                    )));
                }
                seen[x] = true;
            }
        }
        let compose = |a: &[usize], b: &[usize]| -> Vec<usize> { b.iter().map(|&x| a[x]).collect() };
        let identity: Vec<usize> = (0..degree).collect();
        let mut found = std::collections::BTreeSet::new();
        found.insert(identity.clone());
        let mut queue = VecDeque::from([identity]);
        while let Some(p) = queue.pop_front() {
            for gen in generators {
                let q = compose(&p, gen);
                if found.insert(q.clone()) {
                    if found.len() > cap {
                        return Err(Error::OrderCapExceeded {
                            what: "permutation closure".into(),
                            order: found.len(),
                            cap,
                        });
                    }
                    queue.push_back(q);
                }
            }
        }
        let elements: Vec<Vec<usize>> = found.into_iter().collect();
        let order = elements.len();
        let index: std::collections::HashMap<&[usize], usize> =
            elements.iter().enumerate().map(|(i, p)| (p.as_slice(), i)).collect();
        let mut table = Vec::with_capacity(order * order);
        for a in &elements {
            for b in &elements {
                table.push(index[compose(a, b).as_slice()] as u32);
            }
        }
        let perms = PermPresentation {
            degree,
            generators: generators.to_vec(),
        };
        Ok(FiniteGroup::build(
            order,
            table,
            format!("perm({degree})"),
            Some(perms),
            None,
        ))
    }

    /// The trivial group.
    pub fn trivial() -> FiniteGroup {
        FiniteGroup::build(1, vec![0], "C1".into(), None, None)
    }

    /// Cyclic group of order `n`, element `i` standing for `i mod n`.
    pub fn cyclic(n: usize) -> Result<FiniteGroup> {
        if n == 0 {
            return Err(Error::InvalidInput("cyclic group of order 0".into()));
        }
        if n > DEFAULT_GROUP_CAP {
            return Err(Error::OrderCapExceeded {
                what: format!("C({n})"),
                order: n,
                cap: DEFAULT_GROUP_CAP,
            });
        }
        let table = (0..n)
            .flat_map(|a| (0..n).map(move |b| ((a + b) % n) as u32))
            .collect();
        Ok(FiniteGroup::build(n, table, format!("C{n}"), None, None))
    }

    /// `A x B` with `(a, b)` encoded as `a * |B| + b`.
    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Result<FiniteGroup> {
        Self::direct_product_capped(a, b, DEFAULT_PRODUCT_CAP)
    }

    pub fn direct_product_capped(a: &FiniteGroup, b: &FiniteGroup, cap: usize) -> Result<FiniteGroup> {
        let (na, nb) = (a.order(), b.order());
        let order = na * nb;
        if order > cap {
            return Err(Error::OrderCapExceeded {
                what: format!("{} x {}", a.label(), b.label()),
                order,
                cap,
            });
        }
        let mut table = Vec::with_capacity(order * order);
        for x in 0..order {
            let (xa, xb) = (x / nb, x % nb);
            for y in 0..order {
                let (ya, yb) = (y / nb, y % nb);
                table.push((a.mul(xa, ya) * nb + b.mul(xb, yb)) as u32);
            }
        }
        Ok(FiniteGroup::build(
            order,
            table,
            format!("{}x{}", a.label(), b.label()),
            None,
            None,
        ))
    }

    pub fn with_label(&self, label: impl Into<String>) -> FiniteGroup {
        let d = &self.0;
        FiniteGroup::build(
            d.order,
            d.table.clone(),
            label.into(),
            d.perms.clone(),
            d.embedding.clone(),
        )
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.0.order
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.0.table[a * self.0.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.0.inv[a]
    }

    #[inline]
    pub fn identity(&self) -> usize {
        self.0.identity
    }

    /// `g x g^-1`.
    #[inline]
    pub fn conj(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn label(&self) -> &str {
        &self.0.label
    }

    pub fn permutations(&self) -> Option<&PermPresentation> {
        self.0.perms.as_ref()
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.0.order
    }

    /// Hash of the multiplication table alone.
    pub fn table_hash(&self) -> &[u8; 32] {
        &self.0.table_hash
    }

    /// Identity key: the table hash, plus the embedding for subgroup-derived groups.
    pub fn key(&self) -> &[u8; 32] {
        &self.0.key
    }

    /// Rows of the multiplication table.
    pub fn table_rows(&self) -> Vec<Vec<usize>> {
        (0..self.order())
            .map(|a| (0..self.order()).map(|b| self.mul(a, b)).collect())
            .collect()
    }

    /// Parent group and element images, for groups made by [`Subgroup::to_group`].
    pub fn embedding(&self) -> Option<(&FiniteGroup, &[usize])> {
        self.0
            .embedding
            .as_ref()
            .map(|e| (&e.parent, e.images.as_slice()))
    }

    pub fn element_order(&self, x: usize) -> usize {
        let mut k = 1;
        let mut y = x;
        while y != self.identity() {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }

    pub fn exponent(&self) -> usize {
        self.elements()
            .map(|x| self.element_order(x))
            .fold(1, num_integer::lcm)
    }

    pub fn is_abelian(&self) -> bool {
        self.elements()
            .all(|a| self.elements().all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Exhaustive check of the group axioms.
    pub fn verify_axioms(&self) -> bool {
        let e = self.identity();
        let n = self.order();
        (0..n).all(|x| self.mul(e, x) == x && self.mul(x, e) == x)
            && (0..n).all(|x| self.mul(x, self.inv(x)) == e && self.mul(self.inv(x), x) == e)
            && (0..n).all(|a| {
                (0..n).all(|b| {
                    let ab = self.mul(a, b);
                    (0..n).all(|c| self.mul(ab, c) == self.mul(a, self.mul(b, c)))
                })
            })
    }
}

/// A subgroup, stored as a strictly increasing list of element indices.
#[derive(Clone)]
pub struct Subgroup {
    group: FiniteGroup,
    elements: Vec<usize>,
    mask: Vec<u64>,
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subgroup{:?} of {}", self.elements, self.group.label())
    }
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.elements == other.elements && self.group == other.group
    }
}

impl Eq for Subgroup {}

impl Hash for Subgroup {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.elements.hash(state)
    }
}

impl PartialOrd for Subgroup {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Orders by size, then lexicographically by element list.
impl Ord for Subgroup {
    fn cmp(&self, other: &Self) -> Ordering {
        self.elements
            .len()
            .cmp(&other.elements.len())
            .then_with(|| self.elements.cmp(&other.elements))
    }
}

fn make_mask(n: usize, elements: &[usize]) -> Vec<u64> {
    let mut mask = vec![0u64; n.div_ceil(64)];
    for &x in elements {
        mask[x / 64] |= 1 << (x % 64);
    }
    mask
}

impl Subgroup {
    pub(crate) fn from_sorted_unchecked(group: &FiniteGroup, elements: Vec<usize>) -> Subgroup {
        debug_assert!(elements.windows(2).all(|w| w[0] < w[1]));
        let mask = make_mask(group.order(), &elements);
        Subgroup {
            group: group.clone(),
            elements,
            mask,
        }
    }

    /// Validates that `elements` form a subgroup.
    pub fn from_elements(group: &FiniteGroup, elements: &[usize]) -> Result<Subgroup> {
        let mut sorted = elements.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.iter().any(|&x| x >= group.order()) {
            return Err(Error::InvalidInput("subgroup element out of range".into()));
        }
        let sub = Subgroup::from_sorted_unchecked(group, sorted);
        let closed = sub.contains(group.identity())
            && sub
                .elements
                .iter()
                .all(|&a| sub.elements.iter().all(|&b| sub.contains(group.mul(a, b))));
        if !closed {
            return Err(Error::InvalidInput("element set is not a subgroup".into()));
        }
        Ok(sub)
    }

    /// The subgroup generated by `generators`.
    pub fn generated(group: &FiniteGroup, generators: &[usize]) -> Subgroup {
        let mut seen = vec![false; group.order()];
        let e = group.identity();
        seen[e] = true;
        let mut elements = vec![e];
        let mut i = 0;
        while i < elements.len() {
            let x = elements[i];
            for &g in generators {
                let y = group.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    elements.push(y);
                }
            }
            i += 1;
        }
        elements.sort_unstable();
        Subgroup::from_sorted_unchecked(group, elements)
    }

    pub fn trivial(group: &FiniteGroup) -> Subgroup {
        Subgroup::from_sorted_unchecked(group, vec![group.identity()])
    }

    pub fn whole(group: &FiniteGroup) -> Subgroup {
        Subgroup::from_sorted_unchecked(group, group.elements().collect())
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    #[inline]
    pub fn contains(&self, x: usize) -> bool {
        self.mask[x / 64] & (1 << (x % 64)) != 0
    }

    /// Position of `x` in the sorted element list.
    pub fn position(&self, x: usize) -> Option<usize> {
        self.elements.binary_search(&x).ok()
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.elements.len() <= other.elements.len()
            && self.elements.iter().all(|&x| other.contains(x))
    }

    /// `gHg^-1`.
    pub fn conjugate(&self, g: usize) -> Subgroup {
        let mut elements: Vec<usize> = self.elements.iter().map(|&x| self.group.conj(g, x)).collect();
        elements.sort_unstable();
        Subgroup::from_sorted_unchecked(&self.group, elements)
    }

    /// `g^-1 H g`, written `H^g`.
    pub fn conjugate_by_inverse(&self, g: usize) -> Subgroup {
        self.conjugate(self.group.inv(g))
    }

    pub fn intersection(&self, other: &Subgroup) -> Subgroup {
        let elements = self.elements.iter().copied().filter(|&x| other.contains(x)).collect();
        Subgroup::from_sorted_unchecked(&self.group, elements)
    }

    /// A small generating set, chosen greedily in element order.
    pub fn generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = Subgroup::trivial(&self.group);
        for &x in &self.elements {
            if !span.contains(x) {
                gens.push(x);
                span = Subgroup::generated(&self.group, &gens);
                if span.order() == self.order() {
                    break;
                }
            }
        }
        gens
    }

    /// The subgroup as a group in its own right; element `i` is `elements()[i]`.
    pub fn to_group(&self) -> FiniteGroup {
        let n = self.order();
        let mut table = Vec::with_capacity(n * n);
        for &a in &self.elements {
            for &b in &self.elements {
                let ab = self.group.mul(a, b);
                table.push(self.position(ab).expect("closed") as u32);
            }
        }
        FiniteGroup::build(
            n,
            table,
            format!("{}<{}>", self.group.label(), n),
            None,
            Some(Embedding {
                parent: self.group.clone(),
                images: self.elements.clone(),
            }),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s3() -> FiniteGroup {
        FiniteGroup::from_permutations(3, &[vec![1, 0, 2], vec![1, 2, 0]]).unwrap()
    }

    #[test]
    fn trivial_table() {
        let g = FiniteGroup::from_table(&[vec![0]], "1").unwrap();
        assert_eq!(g.order(), 1);
        assert_eq!(g.identity(), 0);
    }

    #[test]
    fn c2_table() {
        let g = FiniteGroup::from_table(&[vec![0, 1], vec![1, 0]], "C2").unwrap();
        assert_eq!(g.order(), 2);
        assert_eq!(g.inv(1), 1);
    }

    #[test]
    fn identity_need_not_be_zero() {
        let g = FiniteGroup::from_table(&[vec![1, 0], vec![0, 1]], "C2'").unwrap();
        assert_eq!(g.identity(), 1);
        assert_eq!(g.inv(0), 0);
    }

    #[test]
    fn non_associative_table_rejected() {
        // A Latin square with identity 0 and inverses, but not associative.
        let t = vec![
            vec![0, 1, 2, 3, 4, 5],
            vec![1, 0, 4, 2, 5, 3],
            vec![2, 4, 3, 5, 1, 0],
            vec![3, 2, 5, 4, 0, 1],
            vec![4, 5, 1, 0, 3, 2],
            vec![5, 3, 0, 1, 2, 4],
        ];
        // Independent scan: find a failing triple directly.
        let assoc = (0..6).all(|a| {
            (0..6).all(|b| (0..6).all(|c| t[t[a][b]][c] == t[a][t[b][c]]))
        });
        assert!(!assoc);
        assert!(matches!(FiniteGroup::from_table(&t, "bad"), Err(Error::NotAGroup(_))));
    }

    #[test]
    fn missing_identity_rejected() {
        let t = vec![vec![1, 0], vec![1, 0]];
        assert!(matches!(FiniteGroup::from_table(&t, "x"), Err(Error::NotAGroup(_))));
    }

    #[test]
    fn permutation_closure() {
        assert_eq!(s3().order(), 6);
        let c4 = FiniteGroup::from_permutations(4, &[vec![1, 2, 3, 0]]).unwrap();
        assert_eq!(c4.order(), 4);
        let t = FiniteGroup::from_permutations(5, &[]).unwrap();
        assert_eq!(t.order(), 1);
        assert!(s3().verify_axioms());
        assert_eq!(s3().identity(), 0);
    }

    #[test]
    fn permutation_errors() {
        assert!(matches!(
            FiniteGroup::from_permutations(3, &[vec![0, 0, 1]]),
            Err(Error::InvalidPermutation(_))
        ));
        assert!(matches!(
            FiniteGroup::from_permutations(3, &[vec![0, 1]]),
            Err(Error::InvalidPermutation(_))
        ));
        // S_5 has order 120.
        let r = FiniteGroup::from_permutations(5, &[vec![1, 0, 2, 3, 4], vec![1, 2, 3, 4, 0]]);
        assert!(matches!(r, Err(Error::OrderCapExceeded { .. })));
    }

    #[test]
    fn products() {
        let c2 = FiniteGroup::cyclic(2).unwrap();
        let c3 = FiniteGroup::cyclic(3).unwrap();
        let c6 = FiniteGroup::direct_product(&c2, &c3).unwrap();
        assert_eq!(c6.order(), 6);
        assert!(c6.is_abelian());
        assert!(c6.elements().any(|x| c6.element_order(x) == 6));
        assert_eq!(FiniteGroup::direct_product(&s3(), &c2).unwrap().order(), 12);
        let one = FiniteGroup::trivial();
        let g = FiniteGroup::direct_product(&one, &s3()).unwrap();
        assert_eq!(g.table_hash(), s3().table_hash());
        assert!(matches!(
            FiniteGroup::direct_product_capped(&s3(), &s3(), 30),
            Err(Error::OrderCapExceeded { .. })
        ));
    }

    #[test]
    fn subgroup_to_group_keeps_embedding() {
        let g = s3();
        let h = Subgroup::generated(&g, &[1]);
        let hg = h.to_group();
        assert_eq!(hg.order(), 2);
        let (parent, images) = hg.embedding().unwrap();
        assert_eq!(parent, &g);
        assert_eq!(images, h.elements());
        // Same table as C2 but a different identity key.
        assert_eq!(hg.table_hash(), FiniteGroup::cyclic(2).unwrap().table_hash());
        assert_ne!(hg, FiniteGroup::cyclic(2).unwrap());
    }
}
