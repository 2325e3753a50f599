#![allow(dead_code)]

use std::sync::Arc;

use varcalc::random::{self, Rng64, Shape};
use varcalc::CoordSystem;

pub fn cs(base: &str, fibers: &str) -> Arc<CoordSystem> {
    Arc::new(CoordSystem::from_lists(base, fibers).unwrap())
}

/// Coordinates with `m = 2`, `e = 2`.
pub fn plane2() -> Arc<CoordSystem> {
    cs("x,t", "u,v")
}

/// Random coordinates with `m, e ≤ 2` and a generator.
pub fn setup(seed: u64) -> (Rng64, Arc<CoordSystem>) {
    let mut r = random::rng(seed);
    let c = random::coords(&mut r, 2, 2);
    (r, c)
}

pub const EXPR: Shape = Shape::new(2, 3, 4);
pub const FORM: Shape = Shape::new(2, 2, 2);
pub const FIELD: Shape = Shape::new(1, 2, 2);

pub mod cartan;
