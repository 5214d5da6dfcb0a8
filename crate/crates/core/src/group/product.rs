use super::{FiniteGroup, Subgroup};

/// The product set `HK` with one fixed factorization per element.
#[derive(Debug, Clone)]
pub struct FactorizationTable {
    h_order: usize,
    k_order: usize,
    members: Vec<usize>,
    /// Per parent element, `(h_local, k_local)` or `u32::MAX` when outside `HK`.
    factor: Vec<(u32, u32)>,
    intersection: usize,
}

impl FactorizationTable {
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, g: usize) -> bool {
        self.factor[g].0 != u32::MAX
    }

    /// Canonical `(h, k)` local indices with `g = hk`.
    pub fn factor(&self, g: usize) -> Option<(usize, usize)> {
        let (h, k) = self.factor[g];
        (h != u32::MAX).then_some((h as usize, k as usize))
    }

    /// `|H ∩ K|`
    pub fn intersection_order(&self) -> usize {
        self.intersection
    }

    pub fn h_order(&self) -> usize {
        self.h_order
    }

    pub fn k_order(&self) -> usize {
        self.k_order
    }
}

/// Builds `HK`, factoring each element through the pair with the smallest
/// local `h` index (then smallest `k`).
pub fn product_set(h: &Subgroup, k: &Subgroup) -> FactorizationTable {
    let parent = h.parent();
    assert!(std::sync::Arc::ptr_eq(parent, k.parent()), "subgroups of different groups");
    let mut factor = vec![(u32::MAX, u32::MAX); parent.order()];
    let mut members = Vec::new();
    for (hi, &hg) in h.members().iter().enumerate() {
        for (ki, &kg) in k.members().iter().enumerate() {
            let g = parent.mul(hg, kg);
            if factor[g].0 == u32::MAX {
                factor[g] = (hi as u32, ki as u32);
                members.push(g);
            }
        }
    }
    members.sort_unstable();
    let intersection = h.members().iter().filter(|&&x| k.contains(x)).count();
    assert_eq!(members.len() * intersection, h.order() * k.order(), "|HK| = |H||K|/|H∩K|");
    FactorizationTable { h_order: h.order(), k_order: k.order(), members, factor, intersection }
}

/// Translates `x_1..x_r` with `∪ HK x_i = G`, and the partition of `G`
/// assigning each element to the first translate that covers it.
#[derive(Debug, Clone)]
pub struct CoveringData {
    translates: Vec<usize>,
    assignment: Vec<u32>,
}

impl CoveringData {
    pub fn translates(&self) -> &[usize] {
        &self.translates
    }

    pub fn r(&self) -> usize {
        self.translates.len()
    }

    /// Index into `translates` of the piece containing `g`.
    pub fn assignment(&self, g: usize) -> usize {
        self.assignment[g] as usize
    }
}

/// `⌈|G| ln|G| / |HK|⌉ + 1`
pub fn covering_bound(order: usize, hk: usize) -> usize {
    let n = order as f64;
    (n * n.ln() / hk as f64).ceil() as usize + 1
}

/// Greedy set cover of `G` by right translates `HKx`: each round takes the
/// `x` (smallest index on ties) covering the most uncovered elements.
pub fn covering_translates(parent: &FiniteGroup, table: &FactorizationTable) -> CoveringData {
    let n = parent.order();
    let hk = table.members();
    let mut assignment = vec![u32::MAX; n];
    let mut translates = Vec::new();
    if hk.len() == n {
        assignment.iter_mut().for_each(|a| *a = 0);
        return CoveringData { translates: vec![0], assignment };
    }
    let hk_inv: Vec<usize> = hk.iter().map(|&s| parent.inv(s)).collect();
    let mut uncovered: Vec<usize> = (0..n).collect();
    let mut counts = vec![0u32; n];
    while !uncovered.is_empty() {
        counts.iter_mut().for_each(|c| *c = 0);
        // g = s x  <=>  x = s^-1 g
        for &g in &uncovered {
            for &si in &hk_inv {
                counts[parent.mul(si, g)] += 1;
            }
        }
        let (x, _) = counts
            .iter()
            .enumerate()
            .fold((0usize, 0u32), |best, (x, &c)| if c > best.1 { (x, c) } else { best });
        let id = translates.len() as u32;
        translates.push(x);
        for &s in hk {
            let g = parent.mul(s, x);
            if assignment[g] == u32::MAX {
                assignment[g] = id;
            }
        }
        uncovered.retain(|&g| assignment[g] == u32::MAX);
    }
    CoveringData { translates, assignment }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::group::{
        borel_subgroup, construct_named, ldu_subgroups, subgroup_generated, Subgroup,
    };

    fn named(s: &str) -> Arc<FiniteGroup> {
        Arc::new(construct_named(&s.parse().unwrap()).unwrap())
    }

    fn check_cover(g: &FiniteGroup, t: &FactorizationTable, c: &CoveringData) {
        for x in 0..g.order() {
            let i = c.assignment(x);
            let xi = c.translates()[i];
            assert!(t.contains(g.mul(x, g.inv(xi))));
            // first covering translate
            for (j, &xj) in c.translates()[..i].iter().enumerate() {
                assert!(!t.contains(g.mul(x, g.inv(xj))), "translate {j} covers {x} first");
            }
        }
        assert!(c.r() <= covering_bound(g.order(), t.len()));
    }

    #[test]
    fn trivial_k_gives_h() {
        let g = named("sym:4");
        let h = subgroup_generated(&g, &[1, 5]);
        let k = subgroup_generated(&g, &[]);
        let t = product_set(&h, &k);
        assert_eq!(t.members(), h.members());
        for (i, &m) in h.members().iter().enumerate() {
            assert_eq!(t.factor(m), Some((i, 0)));
        }
    }

    #[test]
    fn sl23_borel_times_upper() {
        let g = named("sl:2,3");
        let b = borel_subgroup(&g).unwrap();
        let (_, _, u) = ldu_subgroups(&g).unwrap();
        assert_eq!(b.order(), 6);
        let t = product_set(&b, &u);
        assert_eq!(t.len(), 18);
        assert_eq!(t.intersection_order(), 1);
        // all 18 products are distinct
        let mut prods: Vec<usize> = b
            .members()
            .iter()
            .flat_map(|&x| u.members().iter().map(move |&y| (x, y)))
            .map(|(x, y)| g.mul(x, y))
            .collect();
        prods.sort_unstable();
        prods.dedup();
        assert_eq!(prods.len(), 18);
        for &m in t.members() {
            let (hi, ki) = t.factor(m).unwrap();
            assert_eq!(g.mul(b.embed(hi), u.embed(ki)), m);
        }
        let c = covering_translates(&g, &t);
        check_cover(&g, &t, &c);
        assert!(c.r() >= 2);
    }

    #[test]
    fn overlapping_subgroups() {
        let g = named("cyclic:2");
        let h = Subgroup::whole(&g);
        let t = product_set(&h, &h);
        assert_eq!(t.len(), 2);
        assert_eq!(t.intersection_order(), 2);
        let c = covering_translates(&g, &t);
        assert_eq!(c.translates(), &[0]);
    }

    #[test]
    fn trivial_pair_covers_with_every_element() {
        let g = named("dihedral:4");
        let e = subgroup_generated(&g, &[]);
        let t = product_set(&e, &e);
        let c = covering_translates(&g, &t);
        assert_eq!(c.translates(), (0..8).collect::<Vec<_>>().as_slice());
        check_cover(&g, &t, &c);
    }

    #[test]
    fn full_product_needs_one_translate() {
        let g = named("cyclic:6");
        let h = subgroup_generated(&g, &[3]);
        let k = subgroup_generated(&g, &[2]);
        let t = product_set(&h, &k);
        let c = covering_translates(&g, &t);
        assert_eq!(c.translates(), &[0]);
    }

    #[test]
    fn gl23_greedy_cover_is_valid() {
        let g = named("gl:2,3");
        let b = borel_subgroup(&g).unwrap();
        assert_eq!(b.order(), 12);
        let (_, _, u) = ldu_subgroups(&g).unwrap();
        let t = product_set(&b, &u);
        assert_eq!(t.len(), 36);
        let c = covering_translates(&g, &t);
        check_cover(&g, &t, &c);
    }
}
