use std::collections::BTreeSet;

use super::{FiniteGroup, Subgroup, DEFAULT_GROUP_CAP};
use crate::arith::{is_prime, p_part};
use crate::error::{Error, Result};

/// All subgroups of `group`, sorted by (order, element list).
pub fn subgroups(group: &FiniteGroup) -> Result<Vec<Subgroup>> {
    subgroups_capped(group, DEFAULT_GROUP_CAP)
}

/// Subgroup lattice by cyclic extension: every subgroup `L` is `<M, g>` for a
/// maximal subgroup `M` of `L`, so adjoining single elements to every
/// subgroup found so far reaches all of them.
pub fn subgroups_capped(group: &FiniteGroup, cap: usize) -> Result<Vec<Subgroup>> {
    if group.order() > cap {
        return Err(Error::OrderCapExceeded {
            what: format!("subgroup lattice of {}", group.label()),
            order: group.order(),
            cap,
        });
    }
    let trivial = Subgroup::trivial(group);
    let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
    found.insert(trivial.elements().to_vec());
    let mut queue: Vec<(Subgroup, Vec<usize>)> = vec![(trivial, Vec::new())];
    let mut i = 0;
    while i < queue.len() {
        let (h, gens) = queue[i].clone();
        i += 1;
        if h.order() == group.order() {
            continue;
        }
        let mut covered = vec![false; group.order()];
        for &x in h.elements() {
            covered[x] = true;
        }
        for g in group.elements() {
            if covered[g] {
                continue;
            }
            // <H, g> only depends on the coset gH.
            for &x in h.elements() {
                covered[group.mul(g, x)] = true;
            }
            let mut next_gens = gens.clone();
            next_gens.push(g);
            let l = Subgroup::generated(group, &next_gens);
            if found.insert(l.elements().to_vec()) {
                queue.push((l, next_gens));
            }
        }
    }
    let mut all: Vec<Subgroup> = queue.into_iter().map(|(h, _)| h).collect();
    all.sort();
    Ok(all)
}

/// One representative per conjugacy class of subgroups (the least element
/// list in each class), sorted by (order, element list).
pub fn conjugacy_class_reps(group: &FiniteGroup) -> Result<Vec<Subgroup>> {
    let all = subgroups(group)?;
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut reps = Vec::new();
    for h in all {
        if seen.contains(h.elements()) {
            continue;
        }
        for g in group.elements() {
            seen.insert(h.conjugate(g).elements().to_vec());
        }
        reps.push(h);
    }
    Ok(reps)
}

/// `N_G(H) = { g : gHg^-1 = H }` in the ambient group of `h`.
pub fn normalizer(h: &Subgroup) -> Subgroup {
    let group = h.group();
    let elements = group
        .elements()
        .filter(|&g| h.elements().iter().all(|&x| h.contains(group.conj(g, x))))
        .collect();
    Subgroup::from_sorted_unchecked(group, elements)
}

/// The transporter `N_G(F, H) = { g : g^-1 F g <= H }`, sorted.
pub fn transporter(f: &Subgroup, h: &Subgroup) -> Vec<usize> {
    let group = f.group();
    group
        .elements()
        .filter(|&g| {
            let gi = group.inv(g);
            f.elements().iter().all(|&x| h.contains(group.conj(gi, x)))
        })
        .collect()
}

/// The partition of the ambient group into double cosets `AxB`, each class
/// sorted, classes ordered by their least element.
pub fn double_coset_classes(a: &Subgroup, b: &Subgroup) -> Vec<Vec<usize>> {
    let group = a.group();
    let mut seen = vec![false; group.order()];
    let mut classes = Vec::new();
    for x in group.elements() {
        if seen[x] {
            continue;
        }
        let mut class = Vec::new();
        for &s in a.elements() {
            let sx = group.mul(s, x);
            for &t in b.elements() {
                let y = group.mul(sx, t);
                if !seen[y] {
                    seen[y] = true;
                    class.push(y);
                }
            }
        }
        class.sort_unstable();
        classes.push(class);
    }
    classes
}

/// Least-element representatives of `A \ G / B`.
pub fn double_cosets(a: &Subgroup, b: &Subgroup) -> Vec<usize> {
    double_coset_classes(a, b).into_iter().map(|c| c[0]).collect()
}

pub fn is_p_group(h: &Subgroup, p: u64) -> bool {
    crate::arith::is_prime_power_of(h.order() as u64, p)
}

/// A Sylow `p`-subgroup: the least element list among subgroups of order
/// equal to the full `p`-part of `|G|`. Trivial when `p` does not divide `|G|`.
pub fn sylow_subgroup(group: &FiniteGroup, p: u64) -> Result<Subgroup> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let target = p_part(group.order() as u64, p) as usize;
    if target == 1 {
        return Ok(Subgroup::trivial(group));
    }
    subgroups(group)?
        .into_iter()
        .find(|h| h.order() == target)
        .ok_or_else(|| Error::Invariant(format!("no Sylow {p}-subgroup found")))
}
