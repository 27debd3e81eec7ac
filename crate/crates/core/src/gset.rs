//! Explicit finite G-sets: coset spaces, orbit decomposition, stabilizers
//! and fixed points. These drive the set-theoretic oracles.

use crate::group::{FiniteGroup, Subgroup};

/// A finite left G-set on points `0..len`, stored as a dense action table.
#[derive(Clone, Debug)]
pub struct GSet {
    group: FiniteGroup,
    len: usize,
    action: Vec<u32>,
}

impl GSet {
    /// Builds the action table from `act(g, point)`.
    pub fn from_fn(group: &FiniteGroup, len: usize, mut act: impl FnMut(usize, usize) -> usize) -> GSet {
        let n = group.order();
        let mut action = vec![0u32; len * n];
        for p in 0..len {
            for g in 0..n {
                action[p * n + g] = act(g, p) as u32;
            }
        }
        GSet {
            group: group.clone(),
            len,
            action,
        }
    }

    /// The left coset space `G/H`; point 0 is the coset `H` itself.
    pub fn cosets(h: &Subgroup) -> GSet {
        let group = h.group();
        let mut coset_of = vec![usize::MAX; group.order()];
        let mut reps = Vec::new();
        let identity_first = std::iter::once(group.identity()).chain(group.elements());
        for x in identity_first {
            if coset_of[x] != usize::MAX {
                continue;
            }
            for &y in h.elements() {
                coset_of[group.mul(x, y)] = reps.len();
            }
            reps.push(x);
        }
        GSet::from_fn(group, reps.len(), |g, p| coset_of[group.mul(g, reps[p])])
    }

    /// `copies` disjoint copies of each set, concatenated.
    pub fn disjoint_union(group: &FiniteGroup, parts: &[(GSet, usize)]) -> GSet {
        let n = group.order();
        let len = parts.iter().map(|(s, c)| s.len * c).sum();
        let mut action = Vec::with_capacity(len * n);
        let mut offset = 0;
        for (set, copies) in parts {
            assert_eq!(&set.group, group);
            for _ in 0..*copies {
                action.extend(set.action.iter().map(|&q| q + offset as u32));
                offset += set.len;
            }
        }
        GSet {
            group: group.clone(),
            len,
            action,
        }
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn act(&self, g: usize, p: usize) -> usize {
        self.action[p * self.group.order() + g] as usize
    }

    /// Orbits, each sorted, ordered by least point.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len];
        let mut out = Vec::new();
        for start in 0..self.len {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut orbit = vec![start];
            let mut i = 0;
            while i < orbit.len() {
                let p = orbit[i];
                for g in self.group.elements() {
                    let q = self.act(g, p);
                    if !seen[q] {
                        seen[q] = true;
                        orbit.push(q);
                    }
                }
                i += 1;
            }
            orbit.sort_unstable();
            out.push(orbit);
        }
        out
    }

    pub fn stabilizer(&self, p: usize) -> Subgroup {
        let elems: Vec<usize> = self.group.elements().filter(|&g| self.act(g, p) == p).collect();
        Subgroup::from_elements(&self.group, &elems).expect("stabilizers are subgroups")
    }

    /// Points fixed by every element of `h`.
    pub fn fixed_points(&self, h: &Subgroup) -> Vec<usize> {
        (0..self.len)
            .filter(|&p| h.elements().iter().all(|&g| self.act(g, p) == p))
            .collect()
    }

    /// Number of orbits of the subgroup `h` on the point set `points`, which
    /// must be `h`-stable.
    pub fn count_orbits_on(&self, h: &Subgroup, points: &[usize]) -> usize {
        let mut seen = vec![false; self.len];
        let mut count = 0;
        for &p in points {
            if seen[p] {
                continue;
            }
            count += 1;
            for &g in h.elements() {
                seen[self.act(g, p)] = true;
            }
        }
        count
    }
}
