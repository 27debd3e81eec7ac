//! (G,K)-pairs, their graph subgroups, conjugacy and subconjugacy, and the
//! enumeration of pair classes that indexes the basis of `A(G,K)`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::{Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{conjugacy_class_reps, homomorphisms, FiniteGroup, Homomorphism, Subgroup};

/// A subgroup `H <= G` with a homomorphism `phi: H -> K`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GKPair {
    phi: Homomorphism,
}

impl fmt::Debug for GKPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}, {:?})", self.phi.source().elements(), self.phi.images())
    }
}

impl GKPair {
    pub fn new(phi: Homomorphism) -> GKPair {
        GKPair { phi }
    }

    /// `(H, triv)`.
    pub fn trivial(h: &Subgroup, k: &FiniteGroup) -> GKPair {
        GKPair::new(Homomorphism::trivial(h.clone(), k))
    }

    pub fn subgroup(&self) -> &Subgroup {
        self.phi.source()
    }

    pub fn phi(&self) -> &Homomorphism {
        &self.phi
    }

    pub fn source_group(&self) -> &FiniteGroup {
        self.phi.source().group()
    }

    pub fn target_group(&self) -> &FiniteGroup {
        self.phi.target()
    }

    pub fn has_trivial_map(&self) -> bool {
        self.phi.is_trivial()
    }

    pub fn key(&self) -> PairKey {
        PairKey {
            subgroup: self.subgroup().elements().to_vec(),
            images: self.phi.images().to_vec(),
        }
    }
}

/// Hashable coordinates of a pair: sorted subgroup elements and images.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PairKey {
    #[serde(rename = "H")]
    pub subgroup: Vec<usize>,
    #[serde(rename = "phi")]
    pub images: Vec<usize>,
}

/// A conjugacy class of pairs, with its canonical (least) representative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairClass {
    pub class_id: usize,
    pub canonical: GKPair,
}

impl PairClass {
    pub fn subgroup(&self) -> &Subgroup {
        self.canonical.subgroup()
    }

    pub fn order(&self) -> usize {
        self.canonical.subgroup().order()
    }

    pub fn has_trivial_map(&self) -> bool {
        self.canonical.has_trivial_map()
    }
}

/// `Delta(H, phi) = {(phi(h), h)}` inside `kg = K x G` (encoding `k * |G| + g`).
pub fn graph_subgroup(pair: &GKPair, kg: &FiniteGroup) -> Result<Subgroup> {
    let n = pair.source_group().order();
    if kg.order() != n * pair.target_group().order() {
        return Err(Error::AmbientMismatch("product group does not match pair ambients".into()));
    }
    let mut elems: Vec<usize> = pair
        .subgroup()
        .elements()
        .iter()
        .zip(pair.phi().images())
        .map(|(&h, &k)| k * n + h)
        .collect();
    elems.sort_unstable();
    Ok(Subgroup::from_sorted_unchecked(kg, elems))
}

/// Recovers `(H, phi)` from a subgroup of `K x G` meeting `K x 1` trivially.
pub fn pair_from_graph(delta: &Subgroup, g: &FiniteGroup, k: &FiniteGroup) -> Result<GKPair> {
    let n = g.order();
    let mut entries: Vec<(usize, usize)> = delta.elements().iter().map(|&x| (x % n, x / n)).collect();
    entries.sort_unstable();
    if entries.windows(2).any(|w| w[0].0 == w[1].0) {
        return Err(Error::Invariant("subgroup meets K x 1 nontrivially".into()));
    }
    let h = Subgroup::from_sorted_unchecked(g, entries.iter().map(|e| e.0).collect());
    let images = entries.iter().map(|e| e.1).collect();
    Ok(GKPair::new(Homomorphism::new_unchecked(h, k.clone(), images)))
}

fn check_same_ambients(a: &GKPair, b: &GKPair) -> Result<()> {
    if a.source_group() != b.source_group() || a.target_group() != b.target_group() {
        return Err(Error::AmbientMismatch("pairs live in different ambients".into()));
    }
    Ok(())
}

/// Is there `k` with `k y_i k^-1 = t_i` for all `i`?
fn conjugate_tuple_exists(k: &FiniteGroup, ys: &[usize], ts: &[usize]) -> bool {
    k.elements()
        .any(|c| ys.iter().zip(ts).all(|(&y, &t)| k.conj(c, y) == t))
}

/// `(G,K)`-conjugacy by exhaustive scan over `g in G`, `k in K`.
pub fn pairs_conjugate(a: &GKPair, b: &GKPair) -> Result<bool> {
    check_same_ambients(a, b)?;
    if a.subgroup().order() != b.subgroup().order() {
        return Ok(false);
    }
    let g = a.source_group();
    let k = a.target_group();
    for c in g.elements() {
        let mut moved = Vec::with_capacity(a.subgroup().order());
        let mut ok = true;
        for &x in a.subgroup().elements() {
            let y = g.conj(c, x);
            match b.subgroup().position(y) {
                Some(i) => moved.push(b.phi().images()[i]),
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok && conjugate_tuple_exists(k, a.phi().images(), &moved) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// The map from a pair's source ambient into `conjugators`: the identity if
/// they coincide, the stored embedding if the ambient was built from a
/// subgroup of `conjugators`.
pub fn embedding_into(source: &FiniteGroup, conjugators: &FiniteGroup) -> Result<Vec<usize>> {
    if source == conjugators {
        return Ok(source.elements().collect());
    }
    match source.embedding() {
        Some((parent, images)) if parent == conjugators => Ok(images.to_vec()),
        _ => Err(Error::AmbientMismatch(format!(
            "{} is not embedded in {}",
            source.label(),
            conjugators.label()
        ))),
    }
}

/// `(Q, psi)` is subconjugate to `(P, phi)`: some `g` in `conjugators` and `k`
/// in `K` have `gQg^-1 <= P` and `phi(g x g^-1) = k psi(x) k^-1` on `Q`.
pub fn is_subconjugate(q: &GKPair, p: &GKPair, conjugators: &FiniteGroup) -> Result<bool> {
    check_same_ambients(q, p)?;
    let emb = embedding_into(q.source_group(), conjugators)?;
    Ok(subconjugate_with(q, p, conjugators, &emb))
}

fn subconjugate_with(q: &GKPair, p: &GKPair, c: &FiniteGroup, emb: &[usize]) -> bool {
    if p.subgroup().order() % q.subgroup().order() != 0 {
        return false;
    }
    let p_emb: Vec<usize> = p.subgroup().elements().iter().map(|&x| emb[x]).collect();
    // emb is increasing, so p_emb is sorted.
    let k = q.target_group();
    'outer: for g in c.elements() {
        let mut targets = Vec::with_capacity(q.subgroup().order());
        for &x in q.subgroup().elements() {
            let y = c.conj(g, emb[x]);
            match p_emb.binary_search(&y) {
                Ok(i) => targets.push(p.phi().images()[i]),
                Err(_) => continue 'outer,
            }
        }
        if conjugate_tuple_exists(k, q.phi().images(), &targets) {
            return true;
        }
    }
    false
}

/// Least representative of the `(G,K)`-conjugacy orbit of `(H, images)`,
/// under the order (sorted subgroup elements, then image tuple).
pub fn canonical_key(h: &Subgroup, images: &[usize], k: &FiniteGroup) -> PairKey {
    let g = h.group();
    let mut best_h: Option<Vec<usize>> = None;
    let mut movers = Vec::new();
    for c in g.elements() {
        let mut conj: Vec<usize> = h.elements().iter().map(|&x| g.conj(c, x)).collect();
        conj.sort_unstable();
        match &best_h {
            Some(b) if conj > *b => {}
            Some(b) if conj == *b => movers.push(c),
            _ => {
                best_h = Some(conj);
                movers.clear();
                movers.push(c);
            }
        }
    }
    let best_h = best_h.expect("nonempty group");
    let mut bases = BTreeSet::new();
    for c in movers {
        let ci = g.inv(c);
        let base: Vec<usize> = best_h
            .iter()
            .map(|&y| images[h.position(g.conj(ci, y)).expect("conjugate lies in H")])
            .collect();
        bases.insert(base);
    }
    let mut best_img: Option<Vec<usize>> = None;
    for base in &bases {
        for c in k.elements() {
            let img: Vec<usize> = base.iter().map(|&y| k.conj(c, y)).collect();
            if best_img.as_ref().is_none_or(|b| img < *b) {
                best_img = Some(img);
            }
        }
    }
    PairKey {
        subgroup: best_h,
        images: best_img.expect("nonempty group"),
    }
}

/// The basis of `A(G,K)`: one [`PairClass`] per conjugacy class of pairs,
/// sorted by (subgroup order, subgroup elements, images).
pub struct PairSpace {
    source: FiniteGroup,
    target: FiniteGroup,
    classes: Vec<PairClass>,
    by_canonical: HashMap<PairKey, usize>,
    memo: Mutex<HashMap<PairKey, usize>>,
    product: OnceLock<FiniteGroup>,
}

impl fmt::Debug for PairSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "PairSpace(A({}, {}), {} classes)",
            self.source.label(),
            self.target.label(),
            self.classes.len()
        )
    }
}

impl PairSpace {
    /// Enumerates `C(G,K)`.
    pub fn enumerate(g: &FiniteGroup, k: &FiniteGroup) -> Result<PairSpace> {
        let mut keys = BTreeSet::new();
        for h in conjugacy_class_reps(g)? {
            for phi in homomorphisms(&h, k) {
                let key = canonical_key(&h, phi.images(), k);
                keys.insert((key.subgroup.len(), key));
            }
        }
        Ok(Self::from_sorted_keys(g, k, keys.into_iter().map(|(_, key)| key).collect()))
    }

    fn from_sorted_keys(g: &FiniteGroup, k: &FiniteGroup, keys: Vec<PairKey>) -> PairSpace {
        let mut classes = Vec::with_capacity(keys.len());
        let mut by_canonical = HashMap::new();
        for (class_id, key) in keys.into_iter().enumerate() {
            let h = Subgroup::from_sorted_unchecked(g, key.subgroup.clone());
            let phi = Homomorphism::new_unchecked(h, k.clone(), key.images.clone());
            classes.push(PairClass {
                class_id,
                canonical: GKPair::new(phi),
            });
            by_canonical.insert(key, class_id);
        }
        PairSpace {
            source: g.clone(),
            target: k.clone(),
            classes,
            memo: Mutex::new(by_canonical.clone()),
            by_canonical,
            product: OnceLock::new(),
        }
    }

    /// Rebuilds a space from stored canonical keys, validating each one.
    pub fn from_canonical_keys(g: &FiniteGroup, k: &FiniteGroup, keys: Vec<PairKey>) -> Result<PairSpace> {
        let sorted = keys
            .windows(2)
            .all(|w| (w[0].subgroup.len(), &w[0]) < (w[1].subgroup.len(), &w[1]));
        if !sorted {
            return Err(Error::InvalidInput("stored pair classes are not in canonical order".into()));
        }
        for key in &keys {
            let h = Subgroup::from_elements(g, &key.subgroup)?;
            if h.elements() != key.subgroup.as_slice() {
                return Err(Error::InvalidInput("stored subgroup is not sorted".into()));
            }
            Homomorphism::new(h.clone(), k.clone(), key.images.clone())?;
            if canonical_key(&h, &key.images, k) != *key {
                return Err(Error::InvalidInput("stored pair is not canonical".into()));
            }
        }
        Ok(Self::from_sorted_keys(g, k, keys))
    }

    pub fn source(&self) -> &FiniteGroup {
        &self.source
    }

    pub fn target(&self) -> &FiniteGroup {
        &self.target
    }

    pub fn classes(&self) -> &[PairClass] {
        &self.classes
    }

    pub fn class(&self, id: usize) -> &PairClass {
        &self.classes[id]
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn canonical_keys(&self) -> Vec<PairKey> {
        self.classes.iter().map(|c| c.canonical.key()).collect()
    }

    /// `K x G`, built on first use.
    pub fn product_group(&self) -> Result<&FiniteGroup> {
        if let Some(p) = self.product.get() {
            return Ok(p);
        }
        let p = FiniteGroup::direct_product(&self.target, &self.source)?;
        Ok(self.product.get_or_init(|| p))
    }

    /// Class id of `(H, images)`; `h` must be a subgroup of the source ambient.
    pub fn classify(&self, h: &Subgroup, images: &[usize]) -> usize {
        let key = PairKey {
            subgroup: h.elements().to_vec(),
            images: images.to_vec(),
        };
        if let Some(&id) = self.memo.lock().expect("memo lock").get(&key) {
            return id;
        }
        let canon = canonical_key(h, images, &self.target);
        let id = *self
            .by_canonical
            .get(&canon)
            .expect("canonical pair is enumerated");
        self.memo.lock().expect("memo lock").insert(key, id);
        id
    }

    pub fn classify_pair(&self, pair: &GKPair) -> Result<usize> {
        if pair.source_group() != &self.source || pair.target_group() != &self.target {
            return Err(Error::AmbientMismatch(format!(
                "pair does not belong to A({}, {})",
                self.source.label(),
                self.target.label()
            )));
        }
        Ok(self.classify(pair.subgroup(), pair.phi().images()))
    }

    /// `[H, triv]` for a subgroup of the source.
    pub fn trivial_class(&self, h: &Subgroup) -> usize {
        self.classify(h, &vec![self.target.identity(); h.order()])
    }
}

/// The poset `I` of `(G,K)`-conjugacy classes of `(S,K)`-pairs under
/// subconjugacy, or more generally classes of a pair space grouped by mutual
/// subconjugacy with a chosen conjugator group.
#[derive(Clone, Debug)]
pub struct SubconjugacyPoset {
    /// Nodes in linear-extension order: node 0 is a maximal element, and a
    /// node strictly below another always comes later.
    pub nodes: Vec<PosetNode>,
    /// `below[i][j]` iff node `i` is subconjugate to node `j`.
    pub below: Vec<Vec<bool>>,
    /// `class_below[a][b]` iff class `a` is subconjugate to class `b`.
    pub class_below: Vec<Vec<bool>>,
    /// Node index of every class in the pair space.
    pub node_of_class: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PosetNode {
    /// Least class id in the node.
    pub representative: usize,
    pub members: Vec<usize>,
    pub subgroup_order: usize,
}

impl SubconjugacyPoset {
    pub fn build(space: &PairSpace, conjugators: &FiniteGroup) -> Result<SubconjugacyPoset> {
        let emb = embedding_into(space.source(), conjugators)?;
        let n = space.len();
        let class_below: Vec<Vec<bool>> = (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| {
                        subconjugate_with(
                            &space.class(a).canonical,
                            &space.class(b).canonical,
                            conjugators,
                            &emb,
                        )
                    })
                    .collect()
            })
            .collect();
        let mut node_of_class = vec![usize::MAX; n];
        let mut groups: Vec<Vec<usize>> = Vec::new();
        for a in 0..n {
            if node_of_class[a] != usize::MAX {
                continue;
            }
            let members: Vec<usize> = (a..n)
                .filter(|&b| class_below[a][b] && class_below[b][a])
                .collect();
            for &b in &members {
                node_of_class[b] = groups.len();
            }
            groups.push(members);
        }
        // Order by subgroup order descending, then by representative.
        let mut order: Vec<usize> = (0..groups.len()).collect();
        order.sort_by_key(|&i| (std::cmp::Reverse(space.class(groups[i][0]).order()), groups[i][0]));
        let mut rank = vec![0; groups.len()];
        for (pos, &i) in order.iter().enumerate() {
            rank[i] = pos;
        }
        let nodes: Vec<PosetNode> = order
            .iter()
            .map(|&i| PosetNode {
                representative: groups[i][0],
                members: groups[i].clone(),
                subgroup_order: space.class(groups[i][0]).order(),
            })
            .collect();
        for slot in node_of_class.iter_mut() {
            *slot = rank[*slot];
        }
        let below = nodes
            .iter()
            .map(|a| {
                nodes
                    .iter()
                    .map(|b| class_below[a.representative][b.representative])
                    .collect()
            })
            .collect();
        Ok(SubconjugacyPoset {
            nodes,
            below,
            class_below,
            node_of_class,
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}
