//! Seeded random cones, polyhedra and divisors for fuzzing.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cone::Cone;
use crate::divisor::{BaseCurve, CurveKind, CurvePoint, PolyhedralDivisor};
use crate::lattice::{ratio, LatticeVector, RatVector};
use crate::polyhedron::TailedPolyhedron;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn lattice_vector<R: Rng>(rng: &mut R, rank: usize, bound: i64) -> LatticeVector {
    LatticeVector::from_i64s(&(0..rank).map(|_| rng.random_range(-bound..=bound)).collect::<Vec<_>>())
}

/// Coordinates `p/q` with `q <= max_den` and `|p/q| <= bound`.
fn rat_vector<R: Rng>(rng: &mut R, rank: usize, bound: i64, max_den: i64) -> RatVector {
    RatVector::new(
        (0..rank)
            .map(|_| {
                let q = rng.random_range(1..=max_den);
                ratio(rng.random_range(-bound * q..=bound * q), q)
            })
            .collect(),
    )
}

/// Up to `max_gens` generators with entries in `[-bound, bound]`.
pub fn cone<R: Rng>(rng: &mut R, rank: usize, max_gens: usize, bound: i64) -> Cone {
    let k = rng.random_range(0..=max_gens);
    let gens: Vec<LatticeVector> = (0..k).map(|_| lattice_vector(rng, rank, bound)).collect();
    Cone::from_generators(rank, &gens).expect("generators share the rank")
}

pub fn pointed_cone<R: Rng>(rng: &mut R, rank: usize, max_gens: usize, bound: i64) -> Cone {
    loop {
        let c = cone(rng, rank, max_gens, bound);
        if c.is_pointed() {
            return c;
        }
    }
}

/// Between one and `max_vertices` points (denominators up to `max_den`,
/// coordinates in `[-bound, bound]`) plus the generators of `tail`.
pub fn polyhedron_with_tail<R: Rng>(
    rng: &mut R,
    tail: &Cone,
    max_vertices: usize,
    bound: i64,
    max_den: i64,
) -> TailedPolyhedron {
    let rank = tail.rank();
    let k = rng.random_range(1..=max_vertices);
    let points = (0..k).map(|_| rat_vector(rng, rank, bound, max_den)).collect();
    TailedPolyhedron::new(rank, points, tail.generators().to_vec()).expect("pointed tail")
}

pub fn polyhedron<R: Rng>(rng: &mut R, rank: usize, bound: i64, max_den: i64) -> TailedPolyhedron {
    let tail = pointed_cone(rng, rank, 3, bound);
    polyhedron_with_tail(rng, &tail, 4, bound, max_den)
}

/// A divisor on the affine line with rank-1 or rank-2 `N`, up to three
/// marked points, vertex denominators at most 2 and coordinates in `[-2, 2]`.
pub fn divisor<R: Rng>(rng: &mut R) -> PolyhedralDivisor {
    let rank = rng.random_range(1..=2);
    let tail = pointed_cone(rng, rank, 2, 2);
    let k = rng.random_range(0..=3usize);
    let labels: Vec<String> = (0..k).map(|i| format!("P{i}")).collect();
    let points = labels
        .iter()
        .zip(0i64..)
        .map(|(l, c)| CurvePoint::at(l.clone(), ratio(c, 1)))
        .collect();
    let coefficients: BTreeMap<String, TailedPolyhedron> = labels
        .iter()
        .map(|l| (l.clone(), polyhedron_with_tail(rng, &tail, 3, 2, 2)))
        .collect();
    PolyhedralDivisor::new(
        BaseCurve::new(CurveKind::AffineLine, points).expect("distinct labels"),
        rank,
        tail,
        coefficients,
    )
    .expect("coefficients share the tail")
}

pub fn divisor_from_seed(seed: u64) -> PolyhedralDivisor {
    divisor(&mut rng(seed))
}
