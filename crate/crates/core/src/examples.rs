//! Built-in divisors.

use std::collections::BTreeMap;

use crate::cone::Cone;
use crate::divisor::{BaseCurve, CurveKind, CurvePoint, PolyhedralDivisor};
use crate::lattice::{rat, ratio, LatticeVector, RatVector};
use crate::polyhedron::TailedPolyhedron;

pub const NAMES: &[&str] = &["half", "sl2", "translate", "trivial"];

pub fn description(name: &str) -> Option<&'static str> {
    Some(match name {
        "sl2" => {
            "SL(2,C) with the 2-torus acting by (t1 a, t2 b; c/t2, d/t1): \
             segments conv{0,e1} at s=0 and conv{0,e2} at s=1 on the affine line"
        }
        "trivial" => "no nontrivial coefficients on the affine line",
        "half" => "segment conv{0,(1/2,0)} at s=0 with zero tail",
        "translate" => "lattice translate (3,1)+sigma of sigma=pos{e1} at P",
        _ => return None,
    })
}

pub fn by_name(name: &str) -> Option<PolyhedralDivisor> {
    match name {
        "sl2" => Some(sl2()),
        "trivial" => Some(trivial()),
        "half" => Some(half_integer()),
        "translate" => Some(translate()),
        _ => None,
    }
}

fn affine_points(labels: &[(&str, i64)]) -> BaseCurve {
    BaseCurve::new(
        CurveKind::AffineLine,
        labels.iter().map(|(l, c)| CurvePoint::at(*l, rat(*c))).collect(),
    )
    .expect("distinct labels")
}

fn segment(rank: usize, end: RatVector) -> TailedPolyhedron {
    TailedPolyhedron::new(rank, vec![RatVector::zero(rank), end], vec![]).expect("segment")
}

/// `conv{0,e1} (x) [0] + conv{0,e2} (x) [1]` on the affine line.
pub fn sl2() -> PolyhedralDivisor {
    let coefficients = BTreeMap::from([
        ("0".to_string(), segment(2, RatVector::from_i64s(&[1, 0]))),
        ("1".to_string(), segment(2, RatVector::from_i64s(&[0, 1]))),
    ]);
    PolyhedralDivisor::new(
        affine_points(&[("0", 0), ("1", 1)]),
        2,
        Cone::zero(2).expect("rank 2"),
        coefficients,
    )
    .expect("well-formed example")
}

pub fn trivial() -> PolyhedralDivisor {
    trivial_on(Cone::zero(2).expect("rank 2"))
}

pub fn trivial_on(tail: Cone) -> PolyhedralDivisor {
    let rank = tail.rank();
    PolyhedralDivisor::new(affine_points(&[]), rank, tail, BTreeMap::new())
        .expect("pointed tail")
}

pub fn half_integer() -> PolyhedralDivisor {
    let coefficients = BTreeMap::from([(
        "0".to_string(),
        segment(2, RatVector::new(vec![ratio(1, 2), rat(0)])),
    )]);
    PolyhedralDivisor::new(
        affine_points(&[("0", 0)]),
        2,
        Cone::zero(2).expect("rank 2"),
        coefficients,
    )
    .expect("well-formed example")
}

pub fn translate() -> PolyhedralDivisor {
    let tail = Cone::from_generators(2, &[LatticeVector::from_i64s(&[1, 0])]).expect("rank 2");
    let coeff = TailedPolyhedron::new(
        2,
        vec![RatVector::from_i64s(&[3, 1])],
        tail.generators().to_vec(),
    )
    .expect("translate");
    PolyhedralDivisor::new(
        BaseCurve::new(CurveKind::AffineLine, vec![CurvePoint::new("P")]).expect("one point"),
        2,
        tail,
        BTreeMap::from([("P".to_string(), coeff)]),
    )
    .expect("well-formed example")
}

/// A single compact coefficient `{v}` at `P`, zero tail.
pub fn single_vertex(v: RatVector) -> PolyhedralDivisor {
    let rank = v.rank();
    PolyhedralDivisor::new(
        BaseCurve::new(CurveKind::AffineLine, vec![CurvePoint::new("P")]).expect("one point"),
        rank,
        Cone::zero(rank).expect("positive rank"),
        BTreeMap::from([("P".to_string(), TailedPolyhedron::point(v))]),
    )
    .expect("well-formed example")
}
