use std::fmt;

use super::{FiniteGroup, Subgroup};
use crate::error::{Error, Result};

/// A homomorphism from a subgroup `H <= G` into `K`.
///
/// `images[i]` is the image of `source.elements()[i]`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Homomorphism {
    source: Subgroup,
    target: FiniteGroup,
    images: Vec<usize>,
}

impl fmt::Debug for Homomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} -> {:?}", self.source.elements(), self.images)
    }
}

impl Homomorphism {
    /// Validates the homomorphism property exhaustively.
    pub fn new(source: Subgroup, target: FiniteGroup, images: Vec<usize>) -> Result<Homomorphism> {
        if images.len() != source.order() || images.iter().any(|&y| y >= target.order()) {
            return Err(Error::InvalidInput("image list does not match source".into()));
        }
        let hom = Homomorphism {
            source,
            target,
            images,
        };
        if !hom.verify() {
            return Err(Error::InvalidInput("map is not a homomorphism".into()));
        }
        Ok(hom)
    }

    pub(crate) fn new_unchecked(source: Subgroup, target: FiniteGroup, images: Vec<usize>) -> Homomorphism {
        debug_assert_eq!(images.len(), source.order());
        Homomorphism {
            source,
            target,
            images,
        }
    }

    pub fn trivial(source: Subgroup, target: &FiniteGroup) -> Homomorphism {
        let images = vec![target.identity(); source.order()];
        Homomorphism::new_unchecked(source, target.clone(), images)
    }

    /// The inclusion of `h` into its ambient group.
    pub fn inclusion(h: &Subgroup) -> Homomorphism {
        Homomorphism::new_unchecked(h.clone(), h.group().clone(), h.elements().to_vec())
    }

    pub fn source(&self) -> &Subgroup {
        &self.source
    }

    pub fn target(&self) -> &FiniteGroup {
        &self.target
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// Image of `h`; panics if `h` is not in the source subgroup.
    pub fn apply(&self, h: usize) -> usize {
        let i = self.source.position(h).expect("element not in source subgroup");
        self.images[i]
    }

    pub fn is_trivial(&self) -> bool {
        self.images.iter().all(|&y| y == self.target.identity())
    }

    pub fn image(&self) -> Subgroup {
        let mut elems = self.images.clone();
        elems.sort_unstable();
        elems.dedup();
        Subgroup::from_sorted_unchecked(&self.target, elems)
    }

    pub fn verify(&self) -> bool {
        let g = self.source.group();
        let h = self.source.elements();
        self.apply(g.identity()) == self.target.identity()
            && h.iter().enumerate().all(|(i, &a)| {
                h.iter().enumerate().all(|(j, &b)| {
                    self.apply(g.mul(a, b)) == self.target.mul(self.images[i], self.images[j])
                })
            })
    }
}

/// Extends an assignment of generator images along the right Cayley graph of
/// `<gens>`; `None` if some relation is violated.
fn extend(source: &Subgroup, gens: &[usize], gen_images: &[usize], target: &FiniteGroup) -> Option<Vec<usize>> {
    let g = source.group();
    let mut images = vec![usize::MAX; source.order()];
    let e = source.position(g.identity())?;
    images[e] = target.identity();
    let mut stack = vec![g.identity()];
    while let Some(x) = stack.pop() {
        let fx = images[source.position(x)?];
        for (s, &fs) in gens.iter().zip(gen_images) {
            let y = g.mul(x, *s);
            let fy = target.mul(fx, fs);
            let iy = source.position(y)?;
            if images[iy] == usize::MAX {
                images[iy] = fy;
                stack.push(y);
            } else if images[iy] != fy {
                return None;
            }
        }
    }
    Some(images)
}

/// All homomorphisms `H -> K`, in lexicographic order of their image lists.
///
/// Generator images are assigned and validated by closure; consistency of
/// `f(xs) = f(x) f(s)` over every Cayley graph edge is exactly the
/// homomorphism property.
pub fn homomorphisms(h: &Subgroup, k: &FiniteGroup) -> Vec<Homomorphism> {
    let gens = h.generators();
    let g = h.group();
    // Image candidates per generator: only elements whose order divides the generator's.
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .map(|&s| {
            let o = g.element_order(s);
            k.elements().filter(|&y| o % k.element_order(y) == 0).collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut choice = vec![0usize; gens.len()];
    loop {
        let gen_images: Vec<usize> = choice.iter().zip(&candidates).map(|(&c, cs)| cs[c]).collect();
        if let Some(images) = extend(h, &gens, &gen_images, k) {
            out.push(Homomorphism::new_unchecked(h.clone(), k.clone(), images));
        }
        // Odometer increment.
        let mut i = gens.len();
        loop {
            if i == 0 {
                out.sort_by(|a, b| a.images.cmp(&b.images));
                out.dedup_by(|a, b| a.images == b.images);
                return out;
            }
            i -= 1;
            choice[i] += 1;
            if choice[i] < candidates[i].len() {
                break;
            }
            choice[i] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{named_group, subgroups};

    fn g(name: &str) -> FiniteGroup {
        named_group(name).unwrap()
    }

    /// Oracle: all maps H -> K satisfying the homomorphism law, by brute force.
    fn brute_force_count(h: &Subgroup, k: &FiniteGroup) -> usize {
        let n = h.order();
        let mut count = 0;
        let mut images = vec![0usize; n];
        loop {
            let hom = Homomorphism::new_unchecked(h.clone(), k.clone(), images.clone());
            if hom.verify() {
                count += 1;
            }
            let mut i = n;
            loop {
                if i == 0 {
                    return count;
                }
                i -= 1;
                images[i] += 1;
                if images[i] < k.order() {
                    break;
                }
                images[i] = 0;
            }
        }
    }

    #[test]
    fn small_counts() {
        let c2 = g("C2");
        let c3 = g("C3");
        let one = g("C1");
        assert_eq!(homomorphisms(&Subgroup::whole(&c2), &c2).len(), 2);
        assert_eq!(homomorphisms(&Subgroup::whole(&c3), &c2).len(), 1);
        assert_eq!(homomorphisms(&Subgroup::whole(&g("S3")), &one).len(), 1);
        assert_eq!(homomorphisms(&Subgroup::trivial(&c3), &g("S3")).len(), 1);
        // Hom(S3, S3): 1 trivial + 3 onto C2 + 6 automorphisms.
        assert_eq!(homomorphisms(&Subgroup::whole(&g("S3")), &g("S3")).len(), 10);
    }

    #[test]
    fn matches_brute_force() {
        for (gn, kn) in [("C4", "C2"), ("C2xC2", "C2"), ("S3", "C2"), ("C3", "C3"), ("C2xC2", "S3")] {
            let gg = g(gn);
            let k = g(kn);
            for h in subgroups(&gg).unwrap() {
                if h.order() <= 6 {
                    let homs = homomorphisms(&h, &k);
                    assert!(homs.iter().all(|f| f.verify()));
                    assert_eq!(homs.len(), brute_force_count(&h, &k), "{gn} {:?} -> {kn}", h);
                }
            }
        }
    }

    #[test]
    fn conjugate_subgroups_have_equal_hom_counts() {
        for (gn, kn) in [("S3", "S3"), ("D8", "C2"), ("A4", "C3"), ("A4", "S3")] {
            let gg = g(gn);
            let k = g(kn);
            for h in subgroups(&gg).unwrap() {
                let n = homomorphisms(&h, &k).len();
                for x in gg.elements() {
                    assert_eq!(homomorphisms(&h.conjugate(x), &k).len(), n);
                }
            }
        }
    }

    #[test]
    fn rejects_non_homomorphism() {
        let c2 = g("C2");
        let r = Homomorphism::new(Subgroup::whole(&c2), g("C3"), vec![0, 1]);
        assert!(r.is_err());
    }
}
