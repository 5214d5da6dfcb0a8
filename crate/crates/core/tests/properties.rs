mod common;

use common::{group, irreps, oracle, random_element};
use gdft::engine::{plan_engine, EngineConfig, EngineKind};
use gdft::group::{covering_bound, covering_translates, product_set, subgroup_generated};
use gdft::linalg::{batch_sandwich, kron, matmul, CMatrix, MatMulBackend, OpCounter, C64};
use gdft::rep::{inverse_dft, irreps_from_str, irreps_to_string};
use gdft::Error;
use proptest::prelude::*;

const GROUPS: [&str; 8] = ["sym:3", "sym:4", "alt:4", "dihedral:6", "q8", "sl:2,3", "gl:2,3", "abelian:2x6"];

fn matrix(rows: usize, cols: usize, seed: u64) -> CMatrix {
    let c = random_element(rows * cols, seed);
    CMatrix::from_fn(rows, cols, |r, k| c.coeffs()[r * cols + k])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn group_laws(gi in 0..GROUPS.len(), a in 0usize..1000, b in 0usize..1000, c in 0usize..1000) {
        let g = group(GROUPS[gi]);
        let n = g.order();
        let (a, b, c) = (a % n, b % n, c % n);
        prop_assert_eq!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
        prop_assert_eq!(g.mul(a, 0), a);
        prop_assert_eq!(g.mul(0, a), a);
        prop_assert_eq!(g.mul(a, g.inv(a)), 0);
    }

    #[test]
    fn subgroups_products_and_covers(gi in 0..GROUPS.len(), a in 0usize..1000, b in 0usize..1000) {
        let g = group(GROUPS[gi]);
        let n = g.order();
        let (h, k) = (subgroup_generated(&g, &[a % n]), subgroup_generated(&g, &[b % n]));
        prop_assert_eq!(n % h.order(), 0);
        let table = product_set(&h, &k);
        prop_assert_eq!(table.len() * table.intersection_order(), h.order() * k.order());
        for &x in table.members() {
            let (hl, kl) = table.factor(x).unwrap();
            prop_assert_eq!(g.mul(h.embed(hl), k.embed(kl)), x);
        }
        let cover = covering_translates(&g, &table);
        prop_assert!(cover.r() <= covering_bound(n, table.len()));
        if table.len() == n {
            prop_assert_eq!(cover.r(), 1);
        }
        for x in 0..n {
            let t = cover.translates()[cover.assignment(x)];
            prop_assert!(table.contains(g.mul(x, g.inv(t))));
        }
    }

    #[test]
    fn kron_mixed_product(p in 1usize..4, q in 1usize..4, r in 1usize..4, s in 1usize..4, seed in 0u64..1000) {
        let (a, c) = (matrix(p, q, seed), matrix(q, p, seed + 1));
        let (b, d) = (matrix(r, s, seed + 2), matrix(s, r, seed + 3));
        let lhs = kron(&a, &b).mul_plain(&kron(&c, &d));
        let rhs = kron(&a.mul_plain(&c), &b.mul_plain(&d));
        prop_assert!(lhs.max_diff(&rhs) <= 1e-10 * rhs.max_abs().max(1.0));
    }

    #[test]
    fn sandwich_matches_triple_products(p in 1usize..6, q in 1usize..6, s in 1usize..6, count in 1usize..5, seed in 0u64..1000) {
        let a = matrix(p, q, seed);
        let c = matrix(s, s, seed + 1);
        let bs: Vec<CMatrix> = (0..count).map(|i| matrix(q, s, seed + 2 + i as u64)).collect();
        let got = batch_sandwich(&a, &bs, &c, MatMulBackend::Naive, &mut OpCounter::new()).unwrap();
        for (b, g) in bs.iter().zip(&got) {
            let want = a.mul_plain(b).mul_plain(&c);
            prop_assert!(g.max_diff(&want) <= 1e-10 * want.max_abs().max(1.0));
        }
    }

    #[test]
    fn strassen_agrees_with_naive(r in 1usize..40, k in 1usize..40, c in 1usize..40, t in 2usize..9, seed in 0u64..1000) {
        let (a, b) = (matrix(r, k, seed), matrix(k, c, seed + 1));
        let mut naive = OpCounter::new();
        let want = matmul(&a, &b, MatMulBackend::Naive, &mut naive).unwrap();
        prop_assert_eq!(naive.mults(), (r * k * c) as u64);
        let got = matmul(&a, &b, MatMulBackend::strassen(t).unwrap(), &mut OpCounter::new()).unwrap();
        prop_assert!(got.max_diff(&want) <= 1e-8 * want.max_abs().max(1.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn engines_match_oracle_and_invert(gi in 0..GROUPS.len(), ki in 0..EngineKind::ALL.len(), seed in 0u64..10_000) {
        let set = irreps(GROUPS[gi]);
        let kind = EngineKind::ALL[ki];
        let cfg = EngineConfig { factory: common::factory(), seed, ..EngineConfig::default() };
        let plan = match plan_engine(kind, set.clone(), &cfg) {
            Ok(p) => p,
            Err(Error::NotFound | Error::SplitNotFound | Error::WrongDescriptor(_)) => return Ok(()),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        let c = random_element(set.group().order(), seed);
        let f = plan.run(&c, MatMulBackend::Naive).unwrap().fourier;
        prop_assert!(f.max_rel_err(&oracle(&c, &set)) < 1e-6);
        prop_assert!(inverse_dft(&f, &set).unwrap().max_diff(&c) < 1e-8);
    }

    #[test]
    fn irrep_files_round_trip(gi in 0..GROUPS.len()) {
        let set = irreps(GROUPS[gi]);
        let back = irreps_from_str(&irreps_to_string(&set), set.group()).unwrap();
        for (a, b) in set.irreps().iter().zip(back.irreps()) {
            for g in 0..set.group().order() {
                prop_assert_eq!(a.matrix(g), b.matrix(g));
            }
        }
    }

    #[test]
    fn naive_transform_is_linear(gi in 0..GROUPS.len(), re in -2.0f64..2.0, im in -2.0f64..2.0, seed in 0u64..1000) {
        let set = irreps(GROUPS[gi]);
        let n = set.group().order();
        let (c, d) = (random_element(n, seed), random_element(n, seed + 1));
        let a = C64::new(re, im);
        let lhs = oracle(&c.combine(a, &d, C64::new(1.0, 0.0)), &set);
        let (fc, fd) = (oracle(&c, &set), oracle(&d, &set));
        for i in 0..set.len() {
            let rhs = fc.block(i).scale(a).add(fd.block(i));
            prop_assert!(lhs.block(i).max_diff(&rhs) <= 1e-10 * rhs.max_abs().max(1.0));
        }
    }
}
