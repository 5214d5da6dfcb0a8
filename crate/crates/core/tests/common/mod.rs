#![allow(dead_code)]

use std::sync::Arc;

use gdft::factory::{irreps_for, FactoryConfig};
use gdft::group::{construct_named, FiniteGroup};
use gdft::linalg::OpCounter;
use gdft::rep::{naive_dft, FourierBlockVector, GroupAlgebraElement, IrrepSet};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn group(s: &str) -> Arc<FiniteGroup> {
    Arc::new(construct_named(&s.parse().unwrap()).unwrap())
}

pub fn factory() -> FactoryConfig {
    FactoryConfig { order_cap: 2200, ..FactoryConfig::default() }
}

pub fn irreps(s: &str) -> Arc<IrrepSet> {
    Arc::new(irreps_for(&group(s), &factory()).unwrap())
}

pub fn random_element(n: usize, seed: u64) -> GroupAlgebraElement {
    GroupAlgebraElement::random(n, &mut ChaCha8Rng::seed_from_u64(seed))
}

pub fn oracle(c: &GroupAlgebraElement, set: &IrrepSet) -> FourierBlockVector {
    naive_dft(c, set, &mut OpCounter::default()).unwrap()
}
