use std::collections::HashSet;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{subgroup_from_members, FiniteGroup, Subgroup};
use crate::error::{Error, Result};

/// Limits for the randomized subgroup searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    /// Groups up to this order get the all-pairs search over cyclic subgroups.
    pub exhaustive_pairs_up_to: usize,
    pub pair_closures: usize,
    /// Closures of 2 or 3 random elements.
    pub random_trials: usize,
    /// Restarts for greedy Sylow/Hall growth.
    pub restarts: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            exhaustive_pairs_up_to: 2000,
            pair_closures: 20_000,
            random_trials: 200,
            restarts: 32,
        }
    }
}

/// A pair of proper subgroups with `|H| <= |K|`.
#[derive(Debug, Clone)]
pub struct HkPair {
    pub h: Subgroup,
    pub k: Subgroup,
    /// `|HK|`
    pub product_order: usize,
    /// Both orders are at most `|G|^beta`.
    pub within_beta: bool,
    /// Largest proper subgroup met during the search.
    pub largest: Subgroup,
}

pub fn element_order(group: &FiniteGroup, g: usize) -> usize {
    let mut x = g;
    let mut k = 1;
    while x != 0 {
        x = group.mul(x, g);
        k += 1;
    }
    k
}

/// Prime factorization as `(p, e)` pairs, ascending.
pub fn prime_factors(mut n: usize) -> Vec<(usize, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Closure of `gens`, abandoned as soon as it exceeds `limit` elements.
fn bounded_closure(group: &FiniteGroup, gens: &[usize], limit: usize) -> Option<Vec<usize>> {
    let mut seen = vec![false; group.order()];
    seen[0] = true;
    let mut members = vec![0usize];
    let mut head = 0;
    while head < members.len() {
        let x = members[head];
        head += 1;
        for &s in gens {
            let y = group.mul(x, s);
            if !seen[y] {
                if members.len() == limit {
                    return None;
                }
                seen[y] = true;
                members.push(y);
            }
        }
    }
    members.sort_unstable();
    Some(members)
}

fn intersection_len(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

/// Distinct proper nontrivial subgroups met by the search, as sorted member lists.
fn candidate_subgroups(group: &FiniteGroup, budget: &SearchBudget, seed: u64) -> Vec<Vec<usize>> {
    let n = group.order();
    let proper = n / 2;
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut out = Vec::new();
    let mut push = |m: Vec<usize>, out: &mut Vec<Vec<usize>>| {
        if m.len() > 1 && m.len() < n && seen.insert(m.clone()) {
            out.push(m);
        }
    };
    // cyclic subgroups, one generator kept per subgroup
    let mut cyclic_gens = Vec::new();
    for g in 1..n {
        let m = group.closure(&[g]);
        let before = out.len();
        push(m, &mut out);
        if out.len() > before {
            cyclic_gens.push(g);
        }
    }
    let mut closures = 0;
    if n <= budget.exhaustive_pairs_up_to {
        'pairs: for (i, &a) in cyclic_gens.iter().enumerate() {
            for &b in &cyclic_gens[i + 1..] {
                if closures >= budget.pair_closures {
                    break 'pairs;
                }
                closures += 1;
                if let Some(m) = bounded_closure(group, &[a, b], proper) {
                    push(m, &mut out);
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if n > 1 {
        for _ in 0..budget.random_trials {
            let count = rng.gen_range(2..=3);
            let gens: Vec<usize> = (0..count).map(|_| rng.gen_range(1..n)).collect();
            if let Some(m) = bounded_closure(group, &gens, proper) {
                push(m, &mut out);
            }
        }
    }
    out
}

/// `(within β, |HK|, smaller max order)`, maximized.
type PairKey = (bool, usize, std::cmp::Reverse<usize>);

/// Searches for proper subgroups `H, K` with `HK` as large as possible,
/// preferring pairs whose orders are both at most `|G|^beta`.
pub fn find_hk_pair(
    group: &Arc<FiniteGroup>,
    beta: f64,
    budget: &SearchBudget,
    seed: u64,
) -> Result<HkPair> {
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(Error::PreconditionViolated(format!("beta = {beta} outside (0, 1]")));
    }
    let cands = candidate_subgroups(group, budget, seed);
    if cands.is_empty() {
        return Err(Error::NotFound);
    }
    let cap = (group.order() as f64).powf(beta) + 1e-9;
    let mut best: Option<(PairKey, usize, usize)> = None;
    for i in 0..cands.len() {
        for j in i..cands.len() {
            let (a, b) = (&cands[i], &cands[j]);
            let hk = a.len() * b.len() / intersection_len(a, b);
            let within = (a.len() as f64) <= cap && (b.len() as f64) <= cap;
            let key = (within, hk, std::cmp::Reverse(a.len().max(b.len())));
            if best.as_ref().is_none_or(|(k, _, _)| key > *k) {
                best = Some((key, i, j));
            }
        }
    }
    let ((within_beta, product_order, _), i, j) = best.expect("nonempty candidates");
    let (i, j) = if cands[i].len() <= cands[j].len() { (i, j) } else { (j, i) };
    let largest = cands
        .iter()
        .enumerate()
        .max_by_key(|(idx, m)| (m.len(), std::cmp::Reverse(*idx)))
        .map(|(idx, _)| idx)
        .expect("nonempty candidates");
    Ok(HkPair {
        h: subgroup_from_members(group, cands[i].clone())?,
        k: subgroup_from_members(group, cands[j].clone())?,
        product_order,
        within_beta,
        largest: subgroup_from_members(group, cands[largest].clone())?,
    })
}

/// Grows a subgroup of order `target` from elements passing `admissible`,
/// adding one element at a time while the closure stays inside `order_ok`.
fn greedy_grow(
    group: &Arc<FiniteGroup>,
    target: usize,
    admissible: impl Fn(usize) -> bool,
    order_ok: impl Fn(usize) -> bool,
    budget: &SearchBudget,
    seed: u64,
) -> Option<Subgroup> {
    let mut pool: Vec<usize> = (0..group.order()).filter(|&g| admissible(g)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 0..budget.restarts.max(1) {
        if attempt > 0 {
            pool.shuffle(&mut rng);
        }
        let mut gens: Vec<usize> = Vec::new();
        let mut members = vec![0usize];
        let mut inside = vec![false; group.order()];
        inside[0] = true;
        for &x in &pool {
            if members.len() == target {
                break;
            }
            if inside[x] {
                continue;
            }
            gens.push(x);
            match bounded_closure(group, &gens, target) {
                Some(m) if order_ok(m.len()) => {
                    for &y in &m {
                        inside[y] = true;
                    }
                    members = m;
                }
                _ => {
                    gens.pop();
                }
            }
        }
        if members.len() == target {
            return subgroup_from_members(group, members).ok();
        }
    }
    None
}

/// A Sylow `p`-subgroup; its order is the full power of `p` dividing `|G|`.
pub fn sylow_subgroup(
    group: &Arc<FiniteGroup>,
    p: usize,
    budget: &SearchBudget,
    seed: u64,
) -> Result<Subgroup> {
    let n = group.order();
    if p < 2 || !n.is_multiple_of(p) {
        return Err(Error::PreconditionViolated(format!("{p} does not divide {n}")));
    }
    let mut target = 1;
    while n.is_multiple_of(target * p) {
        target *= p;
    }
    let is_p_power = move |mut m: usize| {
        while m.is_multiple_of(p) {
            m /= p;
        }
        m == 1
    };
    greedy_grow(
        group,
        target,
        |g| g != 0 && is_p_power(element_order(group, g)),
        is_p_power,
        budget,
        seed,
    )
    .ok_or_else(|| Error::SearchFailed(format!("no Sylow {p}-subgroup found")))
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// A subgroup of order `a` where `a` and `|G|/a` are coprime.
pub fn hall_subgroup(
    group: &Arc<FiniteGroup>,
    a: usize,
    budget: &SearchBudget,
    seed: u64,
) -> Result<Subgroup> {
    let n = group.order();
    if a == 0 || !n.is_multiple_of(a) || gcd(a, n / a) != 1 {
        return Err(Error::PreconditionViolated(format!("{a} is not a Hall divisor of {n}")));
    }
    if a == 1 {
        return subgroup_from_members(group, vec![0]);
    }
    let divides_a = move |m: usize| a.is_multiple_of(m);
    let pi_number = move |m: usize| gcd(m, n / a) == 1;
    greedy_grow(
        group,
        a,
        |g| g != 0 && pi_number(element_order(group, g)),
        divides_a,
        budget,
        seed,
    )
    .ok_or(Error::SplitNotFound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::construct_named;

    fn named(s: &str) -> Arc<FiniteGroup> {
        Arc::new(construct_named(&s.parse().unwrap()).unwrap())
    }

    /// All subgroups generated by at most two elements, by brute force.
    fn two_generated_orders(g: &FiniteGroup) -> Vec<usize> {
        let mut orders: Vec<usize> = (0..g.order())
            .flat_map(|a| (0..g.order()).map(move |b| (a, b)))
            .map(|(a, b)| g.closure(&[a, b]).len())
            .collect();
        orders.sort_unstable();
        orders.dedup();
        orders
    }

    #[test]
    fn factorizations() {
        assert_eq!(prime_factors(1), vec![]);
        assert_eq!(prime_factors(120), vec![(2, 3), (3, 1), (5, 1)]);
        assert_eq!(prime_factors(2184), vec![(2, 3), (3, 1), (7, 1), (13, 1)]);
    }

    #[test]
    fn element_orders_in_s3() {
        let g = named("sym:3");
        let mut orders: Vec<usize> = (0..6).map(|x| element_order(&g, x)).collect();
        orders.sort_unstable();
        assert_eq!(orders, vec![1, 2, 2, 2, 3, 3]);
    }

    #[test]
    fn z6_splits_as_z2_z3() {
        let g = named("cyclic:6");
        let pair = find_hk_pair(&g, 0.9, &SearchBudget::default(), 1).unwrap();
        assert_eq!((pair.h.order(), pair.k.order(), pair.product_order), (2, 3, 6));
    }

    #[test]
    fn prime_cyclic_has_no_pair() {
        let g = named("cyclic:7");
        assert!(matches!(
            find_hk_pair(&g, 0.7, &SearchBudget::default(), 1),
            Err(Error::NotFound)
        ));
    }

    #[test]
    fn s4_pair_is_large() {
        let g = named("sym:4");
        let pair = find_hk_pair(&g, 0.66, &SearchBudget::default(), 3).unwrap();
        assert!(pair.product_order >= 12);
        assert!(pair.h.order() < 24 && pair.k.order() < 24);
        // exhaustive oracle: S4 has proper subgroups of orders 6 and 4 meeting trivially
        assert!(two_generated_orders(&g).contains(&6));
        assert_eq!(pair.product_order, 24);
    }

    #[test]
    fn search_is_deterministic() {
        let g = named("alt:5");
        let a = find_hk_pair(&g, 0.7, &SearchBudget::default(), 9).unwrap();
        let b = find_hk_pair(&g, 0.7, &SearchBudget::default(), 9).unwrap();
        assert_eq!(a.h, b.h);
        assert_eq!(a.k, b.k);
    }

    #[test]
    fn sylow_orders() {
        let b = SearchBudget::default();
        assert_eq!(sylow_subgroup(&named("cyclic:12"), 2, &b, 0).unwrap().order(), 4);
        assert_eq!(sylow_subgroup(&named("sym:4"), 2, &b, 0).unwrap().order(), 8);
        assert_eq!(sylow_subgroup(&named("sym:3"), 3, &b, 0).unwrap().order(), 3);
        assert_eq!(sylow_subgroup(&named("sl:2,5"), 2, &b, 0).unwrap().order(), 8);
        assert!(sylow_subgroup(&named("sym:3"), 5, &b, 0).is_err());
    }

    #[test]
    fn hall_subgroups() {
        let b = SearchBudget::default();
        assert_eq!(hall_subgroup(&named("alt:5"), 12, &b, 0).unwrap().order(), 12);
        assert_eq!(hall_subgroup(&named("sym:4"), 3, &b, 0).unwrap().order(), 3);
        assert_eq!(hall_subgroup(&named("sym:4"), 8, &b, 0).unwrap().order(), 8);
        // A5 has no subgroup of order 15
        assert!(matches!(hall_subgroup(&named("alt:5"), 15, &b, 0), Err(Error::SplitNotFound)));
        assert!(hall_subgroup(&named("sym:4"), 4, &b, 0).is_err());
    }
}
