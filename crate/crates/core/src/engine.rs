//! The computation context: cached pair spaces and basis products, the
//! composition pairing by the double coset formula, its set-theoretic
//! oracle, augmentations, the `A(G)`-action and the `Z + I_p` splitting.

use std::collections::{BTreeMap, HashMap};
use std::hash::Hash;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_traits::Zero;

use crate::element::BurnsideElement;
use crate::error::{Error, Result};
use crate::group::{double_cosets, is_p_group, subgroups, sylow_subgroup, FiniteGroup, Subgroup};
use crate::gset::GSet;
use crate::marks::MarksTable;
use crate::pairs::{graph_subgroup, pair_from_graph, PairKey, PairSpace};
use crate::plocal::IdempotentReport;
use crate::scalar::Rational;
use crate::store::Store;

/// Largest literal product set built by the set-theoretic oracles.
pub const DEFAULT_ORACLE_CAP: usize = 20_000;

type GroupKey = [u8; 32];
type BasisProduct = Arc<Vec<(usize, i64)>>;

pub(crate) struct Memo<K, V>(Mutex<HashMap<K, V>>);

impl<K: Eq + Hash, V: Clone> Memo<K, V> {
    fn new() -> Self {
        Memo(Mutex::new(HashMap::new()))
    }

    pub(crate) fn get_or_try(&self, key: K, make: impl FnOnce() -> Result<V>) -> Result<V> {
        if let Some(v) = self.0.lock().expect("memo lock").get(&key) {
            return Ok(v.clone());
        }
        let v = make()?;
        Ok(self.0.lock().expect("memo lock").entry(key).or_insert(v).clone())
    }
}

/// Shared caches for one session. All methods take `&self` and the engine
/// can be shared between threads.
pub struct Engine {
    store: Option<Store>,
    oracle_cap: usize,
    spaces: Memo<(GroupKey, GroupKey), Arc<PairSpace>>,
    lattices: Memo<GroupKey, Arc<Vec<Subgroup>>>,
    products: Memo<(GroupKey, GroupKey, GroupKey, usize, usize), BasisProduct>,
    actions: Memo<(GroupKey, GroupKey, usize, usize), BasisProduct>,
    pub(crate) idempotents: Memo<(GroupKey, u64), Arc<IdempotentReport>>,
    pub(crate) marks: Memo<(GroupKey, GroupKey), Arc<MarksTable>>,
}

impl Default for Engine {
    fn default() -> Self {
        Engine::new()
    }
}

impl Engine {
    pub fn new() -> Engine {
        Engine {
            store: None,
            oracle_cap: DEFAULT_ORACLE_CAP,
            spaces: Memo::new(),
            lattices: Memo::new(),
            products: Memo::new(),
            actions: Memo::new(),
            idempotents: Memo::new(),
            marks: Memo::new(),
        }
    }

    /// Persists pair-class tables and subgroup lattices in `store`.
    pub fn with_store(mut self, store: Store) -> Engine {
        self.store = Some(store);
        self
    }

    pub fn with_oracle_cap(mut self, cap: usize) -> Engine {
        self.oracle_cap = cap;
        self
    }

    pub fn store(&self) -> Option<&Store> {
        self.store.as_ref()
    }

    /// All subgroups of `g`, cached.
    pub fn subgroups(&self, g: &FiniteGroup) -> Result<Arc<Vec<Subgroup>>> {
        self.lattices.get_or_try(*g.key(), || {
            let Some(store) = &self.store else {
                return Ok(Arc::new(subgroups(g)?));
            };
            let key = Store::key("subgroups", &[g], "");
            if let Some(stored) = store.get::<Vec<Vec<usize>>>("subgroups", &key) {
                if let Ok(subs) = stored
                    .iter()
                    .map(|e| Subgroup::from_elements(g, e))
                    .collect::<Result<Vec<_>>>()
                {
                    return Ok(Arc::new(subs));
                }
            }
            let subs = subgroups(g)?;
            let payload: Vec<&[usize]> = subs.iter().map(|h| h.elements()).collect();
            store.put("subgroups", &key, &payload)?;
            Ok(Arc::new(subs))
        })
    }

    /// The basis of `A(G,K)`, cached.
    pub fn space(&self, g: &FiniteGroup, k: &FiniteGroup) -> Result<Arc<PairSpace>> {
        self.spaces.get_or_try((*g.key(), *k.key()), || {
            let Some(store) = &self.store else {
                return Ok(Arc::new(PairSpace::enumerate(g, k)?));
            };
            let key = Store::key("pair-classes", &[g, k], "");
            if let Some(keys) = store.get::<Vec<PairKey>>("pair-classes", &key) {
                if let Ok(space) = PairSpace::from_canonical_keys(g, k, keys) {
                    return Ok(Arc::new(space));
                }
            }
            let space = PairSpace::enumerate(g, k)?;
            store.put("pair-classes", &key, &space.canonical_keys())?;
            Ok(Arc::new(space))
        })
    }

    pub fn basis(&self, g: &FiniteGroup, k: &FiniteGroup) -> Result<Vec<BurnsideElement>> {
        let space = self.space(g, k)?;
        Ok((0..space.len()).map(|i| BurnsideElement::basis(&space, i)).collect())
    }

    /// `[G, id]`, the identity for composition in `A(G,G)`.
    pub fn identity(&self, g: &FiniteGroup) -> Result<BurnsideElement> {
        let space = self.space(g, g)?;
        let whole = Subgroup::whole(g);
        let id = space.classify(&whole, whole.elements());
        Ok(BurnsideElement::basis(&space, id))
    }

    /// `[H, triv]` in `A(G,K)`.
    pub fn trivial_pair(&self, h: &Subgroup, k: &FiniteGroup) -> Result<BurnsideElement> {
        let space = self.space(h.group(), k)?;
        Ok(BurnsideElement::basis(&space, space.trivial_class(h)))
    }

    /// `X o Y` for `X` in `A(G2,K)` and `Y` in `A(G1,G2)`.
    pub fn compose(&self, x: &BurnsideElement, y: &BurnsideElement) -> Result<BurnsideElement> {
        if x.source() != y.target() {
            return Err(Error::AmbientMismatch(format!(
                "cannot compose A({}, {}) after A({}, {})",
                x.source().label(),
                x.target().label(),
                y.source().label(),
                y.target().label()
            )));
        }
        let out = self.space(y.source(), x.target())?;
        let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
        for (i, a) in x.terms() {
            for (j, b) in y.terms() {
                let ab = a * b;
                for &(id, m) in self.basis_product(x.space(), i, y.space(), j, &out)?.iter() {
                    *acc.entry(id).or_insert_with(Rational::zero) += &ab * BigInt::from(m);
                }
            }
        }
        BurnsideElement::from_terms(&out, acc, x.mode().join(y.mode()))
    }

    /// Double coset formula on basis elements:
    /// `[A,phi] o [B,psi] = sum over x in A\G2/psi(B) of [psi^-1(A^x), phi c_x psi]`.
    fn basis_product(
        &self,
        xs: &PairSpace,
        i: usize,
        ys: &PairSpace,
        j: usize,
        out: &PairSpace,
    ) -> Result<BasisProduct> {
        let key = (*xs.source().key(), *xs.target().key(), *ys.source().key(), i, j);
        self.products.get_or_try(key, || {
            let g2 = xs.source();
            let outer = &xs.class(i).canonical;
            let inner = &ys.class(j).canonical;
            let a = outer.subgroup();
            let b = inner.subgroup();
            let psi = inner.phi().images();
            let mut image: Vec<usize> = psi.to_vec();
            image.sort_unstable();
            image.dedup();
            let psi_b = Subgroup::from_sorted_unchecked(g2, image);
            let mut counts: BTreeMap<usize, i64> = BTreeMap::new();
            for x in double_cosets(a, &psi_b) {
                let mut h = Vec::new();
                let mut images = Vec::new();
                for (&elem, &target) in b.elements().iter().zip(psi) {
                    let y = g2.conj(x, target);
                    if let Some(pos) = a.position(y) {
                        h.push(elem);
                        images.push(outer.phi().images()[pos]);
                    }
                }
                let h = Subgroup::from_sorted_unchecked(ys.source(), h);
                *counts.entry(out.classify(&h, &images)).or_insert(0) += 1;
            }
            Ok(Arc::new(counts.into_iter().collect()))
        })
    }

    /// Composition computed on literal sets: builds the bundles for `X` and
    /// `Y`, forms `G2 \ (X x Y)`, and decomposes it into `K x G1`-orbits.
    pub fn compose_oracle(&self, x: &BurnsideElement, y: &BurnsideElement) -> Result<BurnsideElement> {
        if x.source() != y.target() {
            return Err(Error::AmbientMismatch("X.source must equal Y.target".into()));
        }
        let xm = x.multiplicities()?;
        let ym = y.multiplicities()?;
        let (g2, k, g1) = (x.source(), x.target(), y.source());
        let out = self.space(g1, k)?;
        let kg2 = x.space().product_group()?;
        let g2g1 = y.space().product_group()?;
        let kg1 = out.product_group()?;
        let xset = self.bundle(x.space(), kg2, &xm)?;
        let yset = self.bundle(y.space(), g2g1, &ym)?;
        let size = xset.len().saturating_mul(yset.len());
        if size > self.oracle_cap {
            return Err(Error::SizeCapExceeded { size, cap: self.oracle_cap });
        }
        let (n1, n2) = (g1.order(), g2.order());
        let ny = yset.len();
        // g in G2 acts on X through (1, g) and on Y through (g, 1).
        let product = GSet::from_fn(g2, size, |g, p| {
            let (a, b) = (p / ny, p % ny);
            xset.act(k.identity() * n2 + g, a) * ny + yset.act(g * n1 + g1.identity(), b)
        });
        let orbits = product.orbits();
        let mut orbit_of = vec![0usize; size];
        for (o, orbit) in orbits.iter().enumerate() {
            for &p in orbit {
                orbit_of[p] = o;
            }
        }
        // (k, g1) acts on X through (k, 1) and on Y through (1, g1).
        let quotient = GSet::from_fn(kg1, orbits.len(), |e, o| {
            let (kk, g) = (e / n1, e % n1);
            let p = orbits[o][0];
            let (a, b) = (p / ny, p % ny);
            orbit_of[xset.act(kk * n2 + g2.identity(), a) * ny + yset.act(g2.identity() * n1 + g, b)]
        });
        self.decompose_set(&quotient, &out)
    }

    /// The disjoint union of `m` copies of `(K x G)/Delta` per term.
    pub(crate) fn bundle(&self, space: &PairSpace, kg: &FiniteGroup, terms: &[(usize, usize)]) -> Result<GSet> {
        let mut parts = Vec::with_capacity(terms.len());
        let mut size = 0usize;
        for &(id, m) in terms {
            let delta = graph_subgroup(&space.class(id).canonical, kg)?;
            size = size.saturating_add(m.saturating_mul(kg.order() / delta.order()));
            if size > self.oracle_cap {
                return Err(Error::SizeCapExceeded { size, cap: self.oracle_cap });
            }
            parts.push((GSet::cosets(&delta), m));
        }
        Ok(GSet::disjoint_union(kg, &parts))
    }

    /// Class vector of a `K`-free `K x G`-set.
    fn decompose_set(&self, set: &GSet, out: &Arc<PairSpace>) -> Result<BurnsideElement> {
        let mut counts: BTreeMap<usize, i64> = BTreeMap::new();
        for orbit in set.orbits() {
            let pair = pair_from_graph(&set.stabilizer(orbit[0]), out.source(), out.target())?;
            *counts.entry(out.classify_pair(&pair)?).or_insert(0) += 1;
        }
        let terms: Vec<(usize, i64)> = counts.into_iter().collect();
        BurnsideElement::from_ints(out, &terms)
    }

    /// `|K \ X|` extended linearly: `[H, phi] -> |G| / |H|`.
    pub fn orbit_augmentation(&self, x: &BurnsideElement) -> Rational {
        let n = x.source().order();
        x.terms()
            .map(|(id, c)| c * BigInt::from(n / x.space().class(id).order()))
            .sum()
    }

    /// The `A(G)`-module action `a . X`, from the diagonal action on
    /// `G/L x X` computed for each pair of basis elements.
    pub fn burnside_ring_action(&self, a: &BurnsideElement, x: &BurnsideElement) -> Result<BurnsideElement> {
        if a.source() != x.source() || a.target().order() != 1 {
            return Err(Error::AmbientMismatch(
                "the acting element must lie in A(G, 1) for the same G".into(),
            ));
        }
        let out = x.space().clone();
        let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
        for (i, c) in a.terms() {
            for (j, d) in x.terms() {
                let cd = c * d;
                for &(id, m) in self.basis_action(a.space(), i, &out, j)?.iter() {
                    *acc.entry(id).or_insert_with(Rational::zero) += &cd * BigInt::from(m);
                }
            }
        }
        BurnsideElement::from_terms(&out, acc, a.mode().join(x.mode()))
    }

    fn basis_action(&self, ring: &PairSpace, i: usize, space: &Arc<PairSpace>, j: usize) -> Result<BasisProduct> {
        let key = (*space.source().key(), *space.target().key(), i, j);
        self.actions.get_or_try(key, || {
            let g = space.source();
            let kg = space.product_group()?;
            let left = GSet::cosets(ring.class(i).subgroup());
            let right = GSet::cosets(&graph_subgroup(&space.class(j).canonical, kg)?);
            let size = left.len() * right.len();
            if size > self.oracle_cap {
                return Err(Error::SizeCapExceeded { size, cap: self.oracle_cap });
            }
            let nr = right.len();
            let n = g.order();
            let set = GSet::from_fn(kg, size, |e, p| left.act(e % n, p / nr) * nr + right.act(e, p % nr));
            let elem = self.decompose_set(&set, space)?;
            Ok(Arc::new(
                elem.terms()
                    .map(|(id, c)| (id, i64::try_from(c.to_integer()).expect("small count")))
                    .collect(),
            ))
        })
    }

    /// `{[G/H] - (|G|/|H|)[G/G] : H proper}`, a basis of the augmentation ideal of `A(G)`.
    pub fn augmentation_ideal_basis(&self, g: &FiniteGroup) -> Result<Vec<BurnsideElement>> {
        let space = self.space(g, &FiniteGroup::trivial())?;
        let top = space.len() - 1;
        let n = g.order() as i64;
        Ok(space
            .classes()
            .iter()
            .filter(|c| c.order() < g.order())
            .map(|c| {
                BurnsideElement::from_ints(&space, &[(c.class_id, 1), (top, -(n / c.order() as i64))])
                    .expect("valid ids")
            })
            .collect())
    }

    /// Writes `X = z [S, triv] + i` with `i` in the augmentation kernel of
    /// the p-isotropy submodule.
    pub fn ip_splitting(&self, x: &BurnsideElement, p: u64) -> Result<IpSplitting> {
        if let Some(bad) = x.support().find(|&id| !is_p_group(x.space().class(id).subgroup(), p)) {
            return Err(Error::NotPIsotropy(format!(
                "class {bad} has subgroup of order {}",
                x.space().class(bad).order()
            )));
        }
        let g = x.source();
        let s = sylow_subgroup(g, p)?;
        let top = self.trivial_pair(&s, x.target())?;
        let z = self.orbit_augmentation(x) * BigInt::from(s.order()) / BigInt::from(g.order());
        let i = x.checked_sub(&top.scale(&z))?;
        Ok(IpSplitting { z, i, top })
    }
}

/// Result of [`Engine::ip_splitting`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IpSplitting {
    pub z: Rational,
    pub i: BurnsideElement,
    /// `[S, triv]`.
    pub top: BurnsideElement,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::named_group;
    use crate::scalar::int;

    fn g(name: &str) -> FiniteGroup {
        named_group(name).unwrap()
    }

    /// `[S,id]_G^S` in `A(G,S)` and `[S,incl]_S^G` in `A(S,G)`.
    fn transfer_pair(e: &Engine, gg: &FiniteGroup, s: &Subgroup) -> (BurnsideElement, BurnsideElement) {
        let sg = s.to_group();
        let down = e.space(gg, &sg).unwrap();
        let positions: Vec<usize> = (0..s.order()).collect();
        let res = BurnsideElement::basis(&down, down.classify(s, &positions));
        let up = e.space(&sg, gg).unwrap();
        let whole = Subgroup::whole(&sg);
        let inc = BurnsideElement::basis(&up, up.classify(&whole, s.elements()));
        (res, inc)
    }

    #[test]
    fn spec_composition_examples() {
        let e = Engine::new();
        let s3 = g("S3");
        let s = sylow_subgroup(&s3, 2).unwrap();
        let (res, inc) = transfer_pair(&e, &s3, &s);
        let gs = e.compose(&res, &inc).unwrap();
        let space = gs.space().clone();
        let sg = space.source().clone();
        let whole = Subgroup::whole(&sg);
        let id = space.classify(&whole, whole.elements());
        let bottom = space.trivial_class(&Subgroup::trivial(&sg));
        assert_eq!(gs, BurnsideElement::from_ints(&space, &[(id, 1), (bottom, 1)]).unwrap());
        assert_eq!(e.orbit_augmentation(&gs), int(3));
        assert_eq!(e.compose_oracle(&res, &inc).unwrap(), gs);

        // [1,triv] o [1,triv] = 2 [1,triv] in A(C2,C2).
        let c2 = g("C2");
        let sp = e.space(&c2, &c2).unwrap();
        let b0 = BurnsideElement::basis(&sp, 0);
        assert_eq!(e.compose(&b0, &b0).unwrap(), b0.scale_int(2));
        assert_eq!(e.compose_oracle(&b0, &b0).unwrap(), b0.scale_int(2));
        // [C2,id] o [1,triv] = [1,triv].
        let idc = BurnsideElement::basis(&sp, 2);
        assert_eq!(e.compose_oracle(&idc, &b0).unwrap(), b0);
        assert_eq!(e.compose(&idc, &b0).unwrap(), b0);
    }

    #[test]
    fn identity_laws() {
        let e = Engine::new();
        for (gn, kn) in [("S3", "C2"), ("C4", "S3"), ("D8", "C2"), ("C2xC2", "C3")] {
            let (gg, k) = (g(gn), g(kn));
            let left = e.identity(&k).unwrap();
            let right = e.identity(&gg).unwrap();
            for b in e.basis(&gg, &k).unwrap() {
                assert_eq!(e.compose(&b, &right).unwrap(), b);
                assert_eq!(e.compose(&left, &b).unwrap(), b);
            }
        }
    }

    #[test]
    fn oracle_agrees_on_small_triples() {
        let e = Engine::new();
        let groups = [g("C1"), g("C2"), g("C3"), g("S3")];
        for g1 in &groups {
            for g2 in &groups {
                for k in &groups {
                    for x in e.basis(g2, k).unwrap() {
                        for y in e.basis(g1, g2).unwrap() {
                            let fast = e.compose(&x, &y).unwrap();
                            assert_eq!(fast, e.compose_oracle(&x, &y).unwrap(), "{x} o {y}");
                            assert_eq!(
                                e.orbit_augmentation(&fast),
                                e.orbit_augmentation(&x) * e.orbit_augmentation(&y)
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn oracle_errors() {
        let e = Engine::new().with_oracle_cap(10);
        let s3 = g("S3");
        let b = e.basis(&s3, &s3).unwrap();
        assert!(matches!(e.compose_oracle(&b[0], &b[0]), Err(Error::SizeCapExceeded { .. })));
        let neg = b[0].scale_int(-1);
        assert!(matches!(Engine::new().compose_oracle(&neg, &b[0]), Err(Error::NotEffective)));
        let c2 = g("C2");
        let other = e.basis(&c2, &c2).unwrap();
        assert!(matches!(e.compose(&b[0], &other[0]), Err(Error::AmbientMismatch(_))));
    }

    #[test]
    fn ring_action() {
        let e = Engine::new();
        let c2 = g("C2");
        let ring = e.space(&c2, &FiniteGroup::trivial()).unwrap();
        let free = BurnsideElement::basis(&ring, 0);
        let point = BurnsideElement::basis(&ring, 1);
        let sp = e.space(&c2, &c2).unwrap();
        let idc = BurnsideElement::basis(&sp, 2);
        assert_eq!(e.burnside_ring_action(&free, &idc).unwrap(), BurnsideElement::basis(&sp, 0));
        for b in e.basis(&c2, &c2).unwrap() {
            assert_eq!(e.burnside_ring_action(&point, &b).unwrap(), b);
        }
        let s3 = g("S3");
        let c3 = g("C3");
        for a in e.basis(&s3, &FiniteGroup::trivial()).unwrap() {
            for x in e.basis(&s3, &c3).unwrap() {
                let ax = e.burnside_ring_action(&a, &x).unwrap();
                assert_eq!(e.orbit_augmentation(&ax), e.orbit_augmentation(&a) * e.orbit_augmentation(&x));
            }
        }
    }

    #[test]
    fn augmentation_ideal() {
        let e = Engine::new();
        assert!(e.augmentation_ideal_basis(&FiniteGroup::trivial()).unwrap().is_empty());
        let c2 = e.augmentation_ideal_basis(&g("C2")).unwrap();
        assert_eq!(c2.len(), 1);
        assert_eq!(c2[0].dense(), vec![int(1), int(-2)]);
        let s3 = e.augmentation_ideal_basis(&g("S3")).unwrap();
        assert_eq!(s3.len(), 3);
        for x in &s3 {
            assert_eq!(e.orbit_augmentation(x), int(0));
        }
    }

    #[test]
    fn splitting() {
        let e = Engine::new();
        let s3 = g("S3");
        let one = FiniteGroup::trivial();
        let space = e.space(&s3, &one).unwrap();
        // classes: [1], [C2], [C3], [S3]
        let bottom = BurnsideElement::basis(&space, 0);
        let split = e.ip_splitting(&bottom, 2).unwrap();
        assert_eq!(split.z, int(2));
        assert_eq!(split.i, BurnsideElement::from_ints(&space, &[(0, 1), (1, -2)]).unwrap());
        let top = BurnsideElement::basis(&space, 1);
        let split = e.ip_splitting(&top, 2).unwrap();
        assert_eq!(split.z, int(1));
        assert!(split.i.is_zero());
        assert!(matches!(
            e.ip_splitting(&BurnsideElement::basis(&space, 2), 2),
            Err(Error::NotPIsotropy(_))
        ));
    }

    #[test]
    fn store_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let cold = Engine::new().with_store(Store::open(dir.path()).unwrap());
        let s3 = g("S3");
        let a = cold.space(&s3, &s3).unwrap().canonical_keys();
        let subs = cold.subgroups(&s3).unwrap();
        let warm = Engine::new().with_store(Store::open(dir.path()).unwrap());
        assert_eq!(warm.store().unwrap().len(), 2);
        assert_eq!(warm.space(&s3, &s3).unwrap().canonical_keys(), a);
        assert_eq!(*warm.subgroups(&s3).unwrap(), *subs);
    }
}
