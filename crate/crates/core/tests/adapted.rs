mod common;

use std::sync::Arc;

use common::{irreps, oracle, random_element};
use gdft::adapted::{
    adapt, apply_lift, build_lift, frobenius_check, multiplicities, transpose_second_factor, RestrictionData,
};
use gdft::engine::{subgroup_irreps, EngineConfig};
use gdft::group::{
    borel_subgroup, element_order, ldu_subgroups, subgroup_generated, sylow_subgroup, SearchBudget, Subgroup,
};
use gdft::linalg::{kron, CMatrix, MatMulBackend, OpCounter, C64};
use gdft::rep::{GroupAlgebraElement, IrrepSet};

fn cfg() -> EngineConfig {
    EngineConfig { factory: common::factory(), ..EngineConfig::default() }
}

fn restriction(g: &Arc<IrrepSet>, h: &Subgroup) -> RestrictionData {
    RestrictionData::new(g.clone(), h.clone(), subgroup_irreps(h, &cfg()).unwrap()).unwrap()
}

fn three_cycle_subgroup(set: &IrrepSet) -> Subgroup {
    let g = set.group();
    let x = (0..g.order()).find(|&x| element_order(g, x) == 3).unwrap();
    subgroup_generated(g, &[x])
}

/// Multiplicity from characters, computed element by element.
fn brute_multiplicity(set: &IrrepSet, rho: usize, h: &Subgroup, h_set: &IrrepSet, sigma: usize) -> f64 {
    let s: C64 = h
        .members()
        .iter()
        .enumerate()
        .map(|(hl, &g)| set.irreps()[rho].matrix(g).trace() * h_set.irreps()[sigma].matrix(hl).trace().conj())
        .sum();
    s.re / h.order() as f64
}

#[test]
fn multiplicities_examples() {
    let set = irreps("sym:3");
    let z3 = three_cycle_subgroup(&set);
    let z3_set = subgroup_irreps(&z3, &cfg()).unwrap();
    let two = &set.irreps()[2];
    assert_eq!(two.dim(), 2);
    let n = multiplicities(two, &set, &z3, &z3_set).unwrap();
    assert_eq!(n, vec![0, 1, 1]);

    let whole = Subgroup::whole(set.group());
    let whole_set = subgroup_irreps(&whole, &cfg()).unwrap();
    for rho in set.irreps() {
        let n = multiplicities(rho, &set, &whole, &whole_set).unwrap();
        assert_eq!(n.iter().sum::<usize>(), 1);
        let s = n.iter().position(|&x| x == 1).unwrap();
        assert_eq!(whole_set.irreps()[s].dim(), rho.dim());
    }

    let trivial = subgroup_generated(set.group(), &[0]);
    let t_set = subgroup_irreps(&trivial, &cfg()).unwrap();
    for rho in set.irreps() {
        assert_eq!(multiplicities(rho, &set, &trivial, &t_set).unwrap(), vec![rho.dim()]);
    }
}

#[test]
fn adapted_bases_examples() {
    let set = irreps("sym:3");
    let trivial = subgroup_generated(set.group(), &[0]);
    let t_set = subgroup_irreps(&trivial, &cfg()).unwrap();
    for rho in set.irreps() {
        let ad = adapt(rho, &set, &trivial, &t_set).unwrap();
        assert!(ad.basis.max_diff(&CMatrix::identity(rho.dim())) < 1e-12);
        assert_eq!(ad.layout.len(), rho.dim());
    }
    let z3 = three_cycle_subgroup(&set);
    let data = restriction(&set, &z3);
    assert!(data.max_off_block().unwrap() < 1e-8);
    assert!(data.max_copy_mismatch().unwrap() < 1e-8);
    assert_eq!(data.per_irrep[2].layout.len(), 2);

    let whole = restriction(&set, &Subgroup::whole(set.group()));
    assert!(whole.max_off_block().unwrap() < 1e-12);
}

#[test]
fn frobenius_examples() {
    let set = irreps("sym:3");
    let whole = restriction(&set, &Subgroup::whole(set.group()));
    let rep = frobenius_check(&whole);
    assert!(rep.passed());
    assert!(rep.rows.iter().all(|&(s, got, _)| got == whole.h_irreps.irreps()[s].dim()));

    let z3 = restriction(&set, &three_cycle_subgroup(&set));
    let rep = frobenius_check(&z3);
    assert!(rep.passed());
    assert_eq!(rep.rows[1], (1, 2, 2));
    assert_eq!(rep.rows[2], (2, 2, 2));

    let sl = irreps("sl:2,3");
    let p3 = sylow_subgroup(sl.group(), 3, &SearchBudget::default(), 1).unwrap();
    assert_eq!(p3.order(), 3);
    let data = restriction(&sl, &p3);
    let rep = frobenius_check(&data);
    assert!(rep.passed());
    assert_eq!(rep.rows.len(), 3);
    for sigma in 0..3 {
        let brute: f64 = (0..sl.len())
            .map(|rho| brute_multiplicity(&sl, rho, &p3, &data.h_irreps, sigma) * sl.irreps()[rho].dim() as f64)
            .sum();
        assert!((brute - 8.0).abs() < 1e-9);
        for rho in 0..sl.len() {
            let b = brute_multiplicity(&sl, rho, &p3, &data.h_irreps, sigma);
            assert!((b - data.per_irrep[rho].mult[sigma] as f64).abs() < 1e-9);
        }
    }
}

fn delta_tensor(h: &RestrictionData, k: &RestrictionData, hl: usize, kl: usize) -> Vec<Vec<CMatrix>> {
    h.h_irreps
        .irreps()
        .iter()
        .map(|s| k.h_irreps.irreps().iter().map(|t| kron(s.matrix(hl), t.matrix(kl))).collect())
        .collect()
}

/// Lifting `σ(h) ⊗ τ(k)` for every pair reproduces `⊕ ρ(hk)`.
fn check_lift_on_deltas(set: &Arc<IrrepSet>, h: &Subgroup, k: &Subgroup) {
    let (hr, kr) = (restriction(set, h), restriction(set, k));
    let lift = build_lift(&hr, &kr).unwrap();
    assert!(lift.m_off_block_mass().unwrap() < 1e-8);
    let g = set.group();
    for hl in 0..h.order() {
        for kl in 0..k.order() {
            let t = delta_tensor(&hr, &kr, hl, kl);
            let out = apply_lift(&lift, &t, MatMulBackend::Naive, &mut OpCounter::new()).unwrap();
            let x = g.mul(h.embed(hl), k.embed(kl));
            for (b, rho) in out.blocks().iter().zip(set.irreps()) {
                assert!(b.max_diff(rho.matrix(x)) < 1e-9, "{}: h={hl} k={kl}", g.descriptor());
            }
        }
    }
}

#[test]
fn lift_reproduces_products_exhaustively() {
    let sl = irreps("sl:2,3");
    let (_, _, upper) = ldu_subgroups(sl.group()).unwrap();
    check_lift_on_deltas(&sl, &borel_subgroup(sl.group()).unwrap(), &upper);
    let s4 = irreps("sym:4");
    let z3 = three_cycle_subgroup(&s4);
    let four = (0..24).find(|&x| element_order(s4.group(), x) == 4).unwrap();
    check_lift_on_deltas(&s4, &subgroup_generated(s4.group(), &[four]), &z3);
    let gl = irreps("gl:2,3");
    let (_, _, u) = ldu_subgroups(gl.group()).unwrap();
    check_lift_on_deltas(&gl, &borel_subgroup(gl.group()).unwrap(), &u);
}

#[test]
fn trivial_pair_lift_is_identity() {
    let set = irreps("sym:3");
    let one = subgroup_generated(set.group(), &[0]);
    let r = restriction(&set, &one);
    let lift = build_lift(&r, &r).unwrap();
    for (m, d) in lift.m.iter().zip(set.dims()) {
        assert!(m.max_diff(&CMatrix::identity(d)) < 1e-12);
    }
    assert_eq!(lift.p(0, 0), set.sum_of_squares());
    let zero = vec![vec![CMatrix::zeros(1, 1)]];
    let out = apply_lift(&lift, &zero, MatMulBackend::Naive, &mut OpCounter::new()).unwrap();
    assert_eq!(out.max_abs(), 0.0);
}

#[test]
fn z6_lift_is_unit_modulus() {
    let set = irreps("cyclic:6");
    let g = set.group();
    let two = (0..6).find(|&x| element_order(g, x) == 2).unwrap();
    let three = (0..6).find(|&x| element_order(g, x) == 3).unwrap();
    let (h, k) = (subgroup_generated(g, &[two]), subgroup_generated(g, &[three]));
    let lift = build_lift(&restriction(&set, &h), &restriction(&set, &k)).unwrap();
    for m in &lift.m {
        assert_eq!((m.rows(), m.cols()), (1, 1));
        assert!((m[(0, 0)].norm() - 1.0).abs() < 1e-12);
    }
    check_lift_on_deltas(&set, &h, &k);
}

#[test]
fn lift_of_random_input_on_hk() {
    let sl = irreps("sl:2,3");
    let (_, _, upper) = ldu_subgroups(sl.group()).unwrap();
    let b = borel_subgroup(sl.group()).unwrap();
    let (hr, kr) = (restriction(&sl, &b), restriction(&sl, &upper));
    let lift = build_lift(&hr, &kr).unwrap();
    let g = sl.group();
    let coeffs = random_element(b.order() * upper.order(), 4);
    let mut c = GroupAlgebraElement::zeros(24);
    let mut tensor: Vec<Vec<CMatrix>> = hr
        .h_irreps
        .dims()
        .iter()
        .map(|&e| kr.h_irreps.dims().iter().map(|&f| CMatrix::zeros(e * f, e * f)).collect())
        .collect();
    for hl in 0..b.order() {
        for kl in 0..upper.order() {
            let z = coeffs.coeffs()[hl * upper.order() + kl];
            c.coeffs_mut()[g.mul(b.embed(hl), upper.embed(kl))] += z;
            let d = delta_tensor(&hr, &kr, hl, kl);
            for (row, drow) in tensor.iter_mut().zip(&d) {
                for (t, x) in row.iter_mut().zip(drow) {
                    *t = t.add(&x.scale(z));
                }
            }
        }
    }
    let out = apply_lift(&lift, &tensor, MatMulBackend::Naive, &mut OpCounter::new()).unwrap();
    assert!(out.max_rel_err(&oracle(&c, &sl)) < 1e-9);
}

#[test]
fn transpose_second_factor_swaps_kron_factor() {
    let a = CMatrix::from_fn(2, 2, |r, c| C64::new(r as f64 + 1.0, c as f64));
    let b = CMatrix::from_fn(3, 3, |r, c| C64::new((r * 3 + c) as f64, -1.0));
    let z = transpose_second_factor(&kron(&a, &b), 2, 3);
    assert!(z.max_diff(&kron(&a, &b.transpose())) < 1e-15);
}
