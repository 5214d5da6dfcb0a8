mod common;

use std::sync::Arc;

use common::group;
use gdft::factory::{abelian_irreps, cache_path, irreps_for, regular_decompose, FactoryConfig};
use gdft::linalg::C64;
use gdft::rep::{verify_irrep_set, IrrepSet};
use gdft::Error;

fn values(set: &IrrepSet, g: usize) -> Vec<C64> {
    set.irreps().iter().map(|ir| ir.matrix(g)[(0, 0)]).collect()
}

#[test]
fn z4_characters_are_powers_of_i() {
    let g = group("cyclic:4");
    let set = abelian_irreps(&g).unwrap();
    assert!(verify_irrep_set(&set, 16, 0).passed());
    let i = C64::new(0.0, 1.0);
    let mut found: Vec<usize> = set
        .irreps()
        .iter()
        .map(|ir| (0..4).find(|&j| (ir.matrix(1)[(0, 0)] - i.powi(j as i32)).norm() < 1e-12).unwrap())
        .collect();
    found.sort();
    assert_eq!(found, vec![0, 1, 2, 3]);
}

#[test]
fn klein_four_characters_are_signs() {
    let set = abelian_irreps(&group("abelian:2x2")).unwrap();
    assert_eq!(set.len(), 4);
    for g in 0..4 {
        for v in values(&set, g) {
            assert!(v.im.abs() < 1e-12 && (v.re.abs() - 1.0).abs() < 1e-12);
        }
    }
    // orthogonality by brute force
    for a in set.irreps() {
        for b in set.irreps() {
            let ip: C64 = (0..4).map(|g| a.matrix(g)[(0, 0)] * b.matrix(g)[(0, 0)].conj()).sum::<C64>() / 4.0;
            let want = if a.label() == b.label() { 1.0 } else { 0.0 };
            assert!((ip - want).norm() < 1e-12);
        }
    }
}

#[test]
fn abelian_path_rejects_nonabelian() {
    assert!(matches!(abelian_irreps(&group("sym:3")), Err(Error::NotAbelian)));
}

#[test]
fn trivial_group_has_one_irrep() {
    let set = regular_decompose(&group("cyclic:1"), &FactoryConfig::default()).unwrap();
    assert_eq!(set.dims(), vec![1]);
}

#[test]
fn regular_decomposition_dims() {
    let cfg = FactoryConfig::default();
    for (d, want) in [("sym:3", vec![1, 1, 2]), ("q8", vec![1, 1, 1, 1, 2]), ("sym:4", vec![1, 1, 2, 3, 3])] {
        let set = regular_decompose(&group(d), &cfg).unwrap();
        assert_eq!(set.dims(), want, "{d}");
        assert!(verify_irrep_set(&set, 32, 1).passed(), "{d}");
    }
}

/// Class sums act on each irrep as scalars `|C| χ(g) / dim`, and the
/// character values of `Q8` are integers.
#[test]
fn q8_character_table() {
    let g = group("q8");
    let set = regular_decompose(&g, &FactoryConfig::default()).unwrap();
    for ir in set.irreps() {
        for class in g.classes() {
            let mut sum = ir.matrix(class[0]).scale(C64::new(0.0, 0.0));
            for &x in class {
                sum = sum.add(ir.matrix(x));
            }
            let chi = ir.matrix(class[0]).trace();
            let lambda = chi * class.len() as f64 / ir.dim() as f64;
            for r in 0..ir.dim() {
                for c in 0..ir.dim() {
                    let want = if r == c { lambda } else { C64::new(0.0, 0.0) };
                    assert!((sum[(r, c)] - want).norm() < 1e-9);
                }
            }
            assert!((chi.re - chi.re.round()).abs() < 1e-9 && chi.im.abs() < 1e-9);
        }
    }
}

#[test]
fn sl23_dims_and_cache_idempotence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = FactoryConfig { cache_dir: Some(dir.path().to_path_buf()), ..FactoryConfig::default() };
    let g = group("sl:2,3");
    let first = irreps_for(&g, &cfg).unwrap();
    assert_eq!(first.dims(), vec![1, 1, 1, 2, 2, 2, 3]);
    assert_eq!(first.sum_of_squares(), 24);
    let path = cache_path(&g, &cfg).unwrap();
    assert!(path.exists());
    let stamp = std::fs::read(&path).unwrap();
    let second = irreps_for(&g, &cfg).unwrap();
    assert_eq!(std::fs::read(&path).unwrap(), stamp);
    for (a, b) in first.irreps().iter().zip(second.irreps()) {
        for x in 0..24 {
            assert_eq!(a.matrix(x), b.matrix(x));
        }
    }
}

#[test]
fn cyclic_uses_closed_form_without_cache() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = FactoryConfig { cache_dir: Some(dir.path().to_path_buf()), order_cap: 1, ..FactoryConfig::default() };
    let set = irreps_for(&group("cyclic:8"), &cfg).unwrap();
    assert_eq!(set.len(), 8);
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn decomposition_is_seed_deterministic() {
    let g = group("dihedral:6");
    let cfg = FactoryConfig::default();
    let (a, b) = (regular_decompose(&g, &cfg).unwrap(), regular_decompose(&g, &cfg).unwrap());
    for (x, y) in a.irreps().iter().zip(b.irreps()) {
        assert_eq!(x.matrix(1), y.matrix(1));
    }
}

#[test]
fn cap_exceeded() {
    let cfg = FactoryConfig { order_cap: 20, ..FactoryConfig::default() };
    let g: Arc<_> = group("sl:2,3");
    assert!(matches!(irreps_for(&g, &cfg), Err(Error::CapExceeded { order: 24, cap: 20 })));
}
