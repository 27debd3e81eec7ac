//! p-local structure: the p-isotropy submodule, induction and restriction
//! along a Sylow subgroup, subconjugacy filtrations, the idempotent `1_p`
//! and the projection `pi_p`.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;

use crate::arith::{is_prime, prime_divisors};
use crate::element::{tilde_quotient, BurnsideElement, TildeElement};
use crate::engine::Engine;
use crate::error::{Error, Result};
use crate::group::{conjugacy_class_reps, is_p_group, sylow_subgroup, transporter, FiniteGroup, Subgroup};
use crate::linalg::rank;
use crate::pairs::{embedding_into, is_subconjugate, GKPair, PairClass, PairSpace, SubconjugacyPoset};
use crate::scalar::{PLocalScalar, Rational, ScalarMode};

fn check_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

/// The idempotent `1_p` of `A_p(G,G)` with the triangular system it solves.
#[derive(Clone, Debug)]
pub struct IdempotentReport {
    pub prime: u64,
    /// `P_1 = S, ..., P_n`: conjugacy class representatives of p-subgroups,
    /// by order descending then element list.
    pub representatives: Vec<Subgroup>,
    /// `matrix[i][j] = |N_G(P_i, P_j)| / |P_j|`.
    pub matrix: Vec<Vec<u64>>,
    pub coefficients: Vec<PLocalScalar>,
    /// Class ids of `[P_j, incl]` in `A(G,G)`.
    pub class_ids: Vec<usize>,
    pub element: BurnsideElement,
}

/// The poset of `(G,K)`-classes of `(S,K)`-pairs.
#[derive(Clone, Debug)]
pub struct SPairPoset {
    pub sylow: Subgroup,
    /// `S` as a group embedded in `G`.
    pub sylow_group: FiniteGroup,
    /// The basis of `A(S,K)`.
    pub space: Arc<PairSpace>,
    pub poset: SubconjugacyPoset,
}

/// Classes below an anchor pair in the subconjugacy order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiltrationModule {
    pub anchor: GKPair,
    pub strict: bool,
    pub members: BTreeSet<usize>,
}

impl FiltrationModule {
    pub fn contains_support(&self, x: &BurnsideElement) -> bool {
        x.support().all(|id| self.members.contains(&id))
    }
}

/// The images `Gamma Phi [P_i, phi_i]` over the nodes of the poset.
#[derive(Clone, Debug)]
pub struct GagBasis {
    pub spairs: SPairPoset,
    pub elements: Vec<BurnsideElement>,
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SegalRank {
    pub prime: u64,
    pub rank: usize,
    /// Classes `[P, phi]` with `P` a p-group and `phi` nontrivial.
    pub classes: Vec<usize>,
}

/// `pi_q(X)` and its image in the quotient by trivial-map classes.
#[derive(Clone, Debug)]
pub struct PrimeComponent {
    pub prime: u64,
    pub projection: BurnsideElement,
    pub tilde: TildeElement,
}

impl Engine {
    /// Classes `[P, phi]` of `A(G,K)` with `P` a p-group.
    pub fn p_isotropy_basis(&self, g: &FiniteGroup, k: &FiniteGroup, p: u64) -> Result<Vec<PairClass>> {
        check_prime(p)?;
        let space = self.space(g, k)?;
        Ok(space
            .classes()
            .iter()
            .filter(|c| is_p_group(c.subgroup(), p))
            .cloned()
            .collect())
    }

    /// `[S, id]` in `A(G, S)`, where `S` is taken as a group in its own right.
    pub fn restriction_element(&self, s: &Subgroup) -> Result<BurnsideElement> {
        let space = self.space(s.group(), &s.to_group())?;
        let positions: Vec<usize> = (0..s.order()).collect();
        Ok(BurnsideElement::basis(&space, space.classify(s, &positions)))
    }

    /// `[S, incl]` in `A(S, G)`.
    pub fn inclusion_element(&self, s: &Subgroup) -> Result<BurnsideElement> {
        let sg = s.to_group();
        let space = self.space(&sg, s.group())?;
        Ok(BurnsideElement::basis(&space, space.classify(&Subgroup::whole(&sg), s.elements())))
    }

    /// Regards every `(S,K)`-pair as a `(G,K)`-pair. The source of `x` must
    /// have been made by [`Subgroup::to_group`].
    pub fn phi_induct(&self, x: &BurnsideElement) -> Result<BurnsideElement> {
        let Some((parent, emb)) = x.source().embedding() else {
            return Err(Error::AmbientMismatch(format!(
                "{} is not a subgroup-derived group",
                x.source().label()
            )));
        };
        let out = self.space(parent, x.target())?;
        let mut terms = Vec::new();
        for (id, c) in x.terms() {
            let pair = &x.space().class(id).canonical;
            let mut entries: Vec<(usize, usize)> = pair
                .subgroup()
                .elements()
                .iter()
                .zip(pair.phi().images())
                .map(|(&h, &k)| (emb[h], k))
                .collect();
            entries.sort_unstable();
            let h = Subgroup::from_sorted_unchecked(parent, entries.iter().map(|e| e.0).collect());
            let images: Vec<usize> = entries.iter().map(|e| e.1).collect();
            terms.push((out.classify(&h, &images), c.clone()));
        }
        BurnsideElement::from_terms(&out, terms, x.mode())
    }

    /// `X o [S, incl]`, an element of `A(S, K)`.
    pub fn gamma_restrict(&self, x: &BurnsideElement, s: &Subgroup) -> Result<BurnsideElement> {
        if s.group() != x.source() {
            return Err(Error::AmbientMismatch("S must be a subgroup of the source".into()));
        }
        self.compose(x, &self.inclusion_element(s)?)
    }

    /// `[G]` as an `(S,S)`-biset: `[S,id] o [S,incl]`.
    pub fn g_biset(&self, s: &Subgroup) -> Result<BurnsideElement> {
        self.compose(&self.restriction_element(s)?, &self.inclusion_element(s)?)
    }

    /// The `(G,K)`-classes of `(S,K)`-pairs ordered by subconjugacy in `G`.
    pub fn gk_classes_of_spairs(&self, g: &FiniteGroup, p: u64, k: &FiniteGroup) -> Result<SPairPoset> {
        let sylow = sylow_subgroup(g, p)?;
        let sylow_group = sylow.to_group();
        let space = self.space(&sylow_group, k)?;
        let poset = SubconjugacyPoset::build(&space, g)?;
        Ok(SPairPoset {
            sylow,
            sylow_group,
            space,
            poset,
        })
    }

    /// Classes of `space` subconjugate (strictly, if `strict`) to `anchor`,
    /// with conjugation taken in `conjugators`.
    pub fn filtration_module(
        &self,
        space: &PairSpace,
        anchor: &GKPair,
        strict: bool,
        conjugators: &FiniteGroup,
    ) -> Result<FiltrationModule> {
        let mut members = BTreeSet::new();
        for c in space.classes() {
            if !is_subconjugate(&c.canonical, anchor, conjugators)? {
                continue;
            }
            if strict && is_subconjugate(anchor, &c.canonical, conjugators)? {
                continue;
            }
            members.insert(c.class_id);
        }
        Ok(FiltrationModule {
            anchor: anchor.clone(),
            strict,
            members,
        })
    }

    /// Classes `[P, phi]` of `A(S,S)` with `phi = c_g` restricted to `P`
    /// for some `g` in `G` conjugating `P` into `S`.
    pub fn ring_r_basis(&self, s: &Subgroup) -> Result<Vec<usize>> {
        let g = s.group();
        let sg = s.to_group();
        let emb = embedding_into(&sg, g)?;
        let space = self.space(&sg, &sg)?;
        Ok(space
            .classes()
            .iter()
            .filter(|c| {
                let pair = &c.canonical;
                g.elements().any(|x| {
                    pair.subgroup()
                        .elements()
                        .iter()
                        .zip(pair.phi().images())
                        .all(|(&h, &img)| s.position(g.conj(x, emb[h])) == Some(img))
                })
            })
            .map(|c| c.class_id)
            .collect())
    }

    /// `{[P_i, phi_i] o [G]}` over the node representatives, checked to be
    /// linearly independent.
    pub fn gag_basis(&self, g: &FiniteGroup, p: u64, k: &FiniteGroup) -> Result<GagBasis> {
        let spairs = self.gk_classes_of_spairs(g, p, k)?;
        let biset = self.g_biset(&spairs.sylow)?;
        let elements = spairs
            .poset
            .nodes
            .iter()
            .map(|n| self.compose(&BurnsideElement::basis(&spairs.space, n.representative), &biset))
            .collect::<Result<Vec<_>>>()?;
        let rows: Vec<Vec<Rational>> = elements.iter().map(|e| e.dense()).collect();
        let r = rank(&rows);
        if r != elements.len() {
            return Err(Error::DependentBasis {
                rank: r,
                expected: elements.len(),
            });
        }
        Ok(GagBasis {
            spairs,
            elements,
            rank: r,
        })
    }

    /// The identity `1_p = sum_j a_j [P_j, incl]` of the p-local completion
    /// of `A_p(G,G)`.
    pub fn one_p(&self, g: &FiniteGroup, p: u64) -> Result<Arc<IdempotentReport>> {
        check_prime(p)?;
        self.idempotents.get_or_try((*g.key(), p), || Ok(Arc::new(self.solve_one_p(g, p)?)))
    }

    fn solve_one_p(&self, g: &FiniteGroup, p: u64) -> Result<IdempotentReport> {
        let mut reps: Vec<Subgroup> = conjugacy_class_reps(g)?
            .into_iter()
            .filter(|h| is_p_group(h, p))
            .collect();
        reps.sort_by(|a, b| b.order().cmp(&a.order()).then_with(|| a.elements().cmp(b.elements())));
        let n = reps.len();
        let matrix: Vec<Vec<u64>> = reps
            .iter()
            .map(|pi| {
                reps.iter()
                    .map(|pj| (transporter(pi, pj).len() / pj.order()) as u64)
                    .collect()
            })
            .collect();
        let mut a: Vec<Rational> = Vec::with_capacity(n);
        for i in 0..n {
            if matrix[i][i] == 0 {
                return Err(Error::SingularDiagonal(i));
            }
            if matrix[i][i + 1..].iter().any(|&m| m != 0) {
                return Err(Error::Invariant(format!("transporter matrix is not lower triangular at row {i}")));
            }
            let mut rhs = Rational::one();
            for (j, aj) in a.iter().enumerate() {
                rhs -= aj * BigInt::from(matrix[i][j]);
            }
            a.push(rhs / BigInt::from(matrix[i][i]));
        }
        let coefficients = a
            .iter()
            .map(|q| PLocalScalar::new(q.clone(), p))
            .collect::<Result<Vec<_>>>()?;
        let space = self.space(g, g)?;
        let class_ids: Vec<usize> = reps.iter().map(|h| space.classify(h, h.elements())).collect();
        let element = BurnsideElement::from_terms(
            &space,
            class_ids.iter().copied().zip(a),
            ScalarMode::PLocal(p),
        )?;
        Ok(IdempotentReport {
            prime: p,
            representatives: reps,
            matrix,
            coefficients,
            class_ids,
            element,
        })
    }

    /// `pi_p(X) = X o 1_p`, supported on p-isotropy classes.
    pub fn pi_p(&self, x: &BurnsideElement, p: u64) -> Result<BurnsideElement> {
        let one = self.one_p(x.source(), p)?;
        let out = self.compose(x, &one.element)?;
        if let Some(bad) = out.support().find(|&id| !is_p_group(out.space().class(id).subgroup(), p)) {
            return Err(Error::Invariant(format!("pi_{p} has support off the p-isotropy classes at {bad}")));
        }
        Ok(out)
    }

    /// The number of classes `[P, phi]` with `P` a p-group and `phi` nontrivial.
    pub fn segal_rank(&self, g: &FiniteGroup, k: &FiniteGroup, p: u64) -> Result<SegalRank> {
        check_prime(p)?;
        let space = self.space(g, k)?;
        let classes: Vec<usize> = space
            .classes()
            .iter()
            .filter(|c| is_p_group(c.subgroup(), p) && !c.has_trivial_map())
            .map(|c| c.class_id)
            .collect();
        Ok(SegalRank {
            prime: p,
            rank: classes.len(),
            classes,
        })
    }

    /// `pi_q(X)` and its reduced image for every prime `q` dividing `|G|`.
    pub fn decompose(&self, x: &BurnsideElement) -> Result<Vec<PrimeComponent>> {
        prime_divisors(x.source().order() as u64)
            .into_iter()
            .map(|q| {
                let projection = self.pi_p(x, q)?;
                let tilde = tilde_quotient(&projection);
                Ok(PrimeComponent {
                    prime: q,
                    projection,
                    tilde,
                })
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::named_group;
    use crate::marks::MarkVariant;
    use crate::scalar::{int, rat};

    fn g(name: &str) -> FiniteGroup {
        named_group(name).unwrap()
    }

    fn coeffs(r: &IdempotentReport) -> Vec<Rational> {
        r.coefficients.iter().map(|c| c.value().clone()).collect()
    }

    #[test]
    fn idempotent_fixtures() {
        let e = Engine::new();
        let s3 = g("S3");
        let two = e.one_p(&s3, 2).unwrap();
        assert_eq!(two.matrix, vec![vec![1, 0], vec![3, 6]]);
        assert_eq!(coeffs(&two), vec![int(1), rat(-1, 3)]);
        assert_eq!(two.representatives[0].order(), 2);
        let three = e.one_p(&s3, 3).unwrap();
        assert_eq!(three.matrix, vec![vec![2, 0], vec![2, 6]]);
        assert_eq!(coeffs(&three), vec![rat(1, 2), int(0)]);
        assert_eq!(three.element.support().count(), 1);

        let c4 = g("C4");
        assert_eq!(e.one_p(&c4, 2).unwrap().element, e.identity(&c4).unwrap());
        let five = e.one_p(&s3, 5).unwrap();
        let bottom = e.trivial_pair(&Subgroup::trivial(&s3), &s3).unwrap();
        assert_eq!(five.element, bottom.scale(&rat(1, 6)));
        assert!(matches!(e.one_p(&s3, 4), Err(Error::NotPrime(4))));
    }

    #[test]
    fn idempotent_laws() {
        let e = Engine::new();
        for (name, p) in [("S3", 2), ("S3", 3), ("A4", 2), ("D8", 2), ("C6", 3)] {
            let gg = g(name);
            let one = e.one_p(&gg, p).unwrap().element.clone();
            assert_eq!(e.compose(&one, &one).unwrap(), one, "{name} {p}");
            for b in e.basis(&gg, &gg).unwrap() {
                assert_eq!(e.compose(&b, &one).unwrap().mode(), ScalarMode::PLocal(p));
                let in_ap = b.support().all(|id| is_p_group(b.space().class(id).subgroup(), p));
                if in_ap {
                    assert_eq!(e.compose(&one, &b).unwrap(), b);
                    assert_eq!(e.compose(&b, &one).unwrap(), b);
                }
            }
        }
    }

    #[test]
    fn projection_examples() {
        let e = Engine::new();
        let c6 = g("C6");
        let one = FiniteGroup::trivial();
        let space = e.space(&c6, &one).unwrap();
        let c3 = BurnsideElement::basis(&space, 2);
        let expected = BurnsideElement::basis(&space, 0).scale(&rat(1, 3));
        assert_eq!(e.pi_p(&c3, 2).unwrap(), expected);
        let c3g = g("C3");
        let s = e.space(&c3g, &one).unwrap();
        for x in e.basis(&c3g, &one).unwrap() {
            let h = x.space().class(x.support().next().unwrap()).order() as i64;
            let pi = e.pi_p(&x, 2).unwrap();
            assert_eq!(pi, BurnsideElement::basis(&s, 0).scale(&rat(1, h)));
        }
    }

    #[test]
    fn projection_preserves_raw_marks() {
        let e = Engine::new();
        for (name, kn) in [("C6", "C1"), ("S3", "C2"), ("A4", "C1"), ("S3", "C3")] {
            let (gg, k) = (g(name), g(kn));
            for p in prime_divisors(gg.order() as u64) {
                for x in e.basis(&gg, &k).unwrap() {
                    let pi = e.pi_p(&x, p).unwrap();
                    assert_eq!(
                        e.chi_p(&pi, p, MarkVariant::Raw).unwrap(),
                        e.chi_p(&x, p, MarkVariant::Raw).unwrap(),
                        "{name} {kn} {p}"
                    );
                }
            }
        }
    }

    #[test]
    fn induction_and_restriction() {
        let e = Engine::new();
        let s3 = g("S3");
        let s = sylow_subgroup(&s3, 2).unwrap();
        let sg = s.to_group();
        let one = FiniteGroup::trivial();
        let down = e.restriction_element(&s).unwrap();
        for x in e.basis(&sg, &one).unwrap() {
            let phi = e.phi_induct(&x).unwrap();
            assert_eq!(phi, e.compose(&x, &down).unwrap());
        }
        let small = e.space(&sg, &one).unwrap();
        let big = e.space(&s3, &one).unwrap();
        assert_eq!(
            e.phi_induct(&BurnsideElement::basis(&small, 1)).unwrap(),
            BurnsideElement::basis(&big, 1)
        );
        // Gamma([C3]) = [1] and Gamma([S3]) = [S].
        assert_eq!(
            e.gamma_restrict(&BurnsideElement::basis(&big, 2), &s).unwrap(),
            BurnsideElement::basis(&small, 0)
        );
        assert_eq!(
            e.gamma_restrict(&BurnsideElement::basis(&big, 3), &s).unwrap(),
            BurnsideElement::basis(&small, 1)
        );
        let biset = e.g_biset(&s).unwrap();
        assert_eq!(e.orbit_augmentation(&biset), int(3));
        let whole = Subgroup::whole(&s3);
        assert_eq!(e.g_biset(&whole).unwrap(), e.identity(&whole.to_group()).unwrap());
    }

    #[test]
    fn ring_r() {
        let e = Engine::new();
        let s3 = g("S3");
        let s = sylow_subgroup(&s3, 2).unwrap();
        let r = e.ring_r_basis(&s).unwrap();
        let space = e.space(&s.to_group(), &s.to_group()).unwrap();
        let names: Vec<(usize, bool)> = r.iter().map(|&i| (space.class(i).order(), space.class(i).has_trivial_map())).collect();
        assert_eq!(names, vec![(1, true), (2, false)]);
        let biset = e.g_biset(&s).unwrap();
        assert!(biset.support().all(|id| r.contains(&id)));
    }

    #[test]
    fn filtrations_and_gag() {
        let e = Engine::new();
        let s3 = g("S3");
        let one = FiniteGroup::trivial();
        let sp = e.gk_classes_of_spairs(&s3, 2, &one).unwrap();
        let bottom = &sp.space.class(0).canonical;
        let top = &sp.space.class(1).canonical;
        assert!(e.filtration_module(&sp.space, bottom, true, &s3).unwrap().members.is_empty());
        let all = e.filtration_module(&sp.space, top, false, &s3).unwrap();
        assert_eq!(all.members.len(), 2);
        let gag = e.gag_basis(&s3, 2, &one).unwrap();
        assert_eq!(gag.elements.len(), 2);
        assert_eq!(gag.rank, 2);
    }

    #[test]
    fn segal_ranks() {
        let e = Engine::new();
        let c2 = g("C2");
        assert_eq!(e.segal_rank(&c2, &c2, 2).unwrap().rank, 1);
        assert_eq!(e.segal_rank(&g("S3"), &FiniteGroup::trivial(), 2).unwrap().rank, 0);
        assert_eq!(e.segal_rank(&g("S3"), &c2, 5).unwrap().rank, 0);
        let parts = e.decompose(&e.basis(&g("C6"), &c2).unwrap()[0]).unwrap();
        assert_eq!(parts.iter().map(|c| c.prime).collect::<Vec<_>>(), vec![2, 3]);
    }
}
