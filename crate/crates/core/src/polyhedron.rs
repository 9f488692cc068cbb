//! Polyhedra `conv(vertices) + pos(rays)` with an explicit tail cone.
//!
//! Only the V-representation is stored. Redundancy is removed by
//! homogenizing: `v` is a vertex exactly when `(1, v)` spans an extreme ray
//! of the homogenization.

use std::fmt;
use std::ops::Add;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cone::Cone;
use crate::error::{Error, Result};
use crate::lattice::{format_rat, LatticeVector, Rat, RatVector};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TailedPolyhedron {
    rank: usize,
    vertices: Vec<RatVector>,
    rays: Vec<LatticeVector>,
}

/// `min <u, P>`, which is `-inf` when `u` is negative somewhere on the tail.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SupportValue {
    NegInfinity,
    Finite(Rat),
}

impl SupportValue {
    pub fn finite(&self) -> Option<&Rat> {
        match self {
            SupportValue::Finite(r) => Some(r),
            SupportValue::NegInfinity => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, SupportValue::Finite(_))
    }
}

impl Add for &SupportValue {
    type Output = SupportValue;
    fn add(self, rhs: &SupportValue) -> SupportValue {
        match (self, rhs) {
            (SupportValue::Finite(a), SupportValue::Finite(b)) => SupportValue::Finite(a + b),
            _ => SupportValue::NegInfinity,
        }
    }
}

impl fmt::Display for SupportValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SupportValue::NegInfinity => f.write_str("-inf"),
            SupportValue::Finite(r) => f.write_str(&format_rat(r)),
        }
    }
}

impl Serialize for SupportValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

fn check_rank(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::RankMismatch { expected, got })
    }
}

impl TailedPolyhedron {
    /// Builds `conv(vertices) + pos(rays)` and reduces it to extreme points
    /// and primitive extreme rays. The tail must be pointed.
    pub fn new(rank: usize, vertices: Vec<RatVector>, rays: Vec<LatticeVector>) -> Result<Self> {
        if rank == 0 {
            return Err(Error::ZeroRank);
        }
        if vertices.is_empty() {
            return Err(Error::EmptyPolyhedron);
        }
        for v in &vertices {
            check_rank(rank, v.rank())?;
        }
        for r in &rays {
            check_rank(rank, r.rank())?;
        }
        let cone = homogenization_of(rank, &vertices, &rays)?;
        if !cone.is_pointed() {
            return Err(Error::NotPointed);
        }
        Ok(Self::from_pointed_homogenization(&cone))
    }

    /// Recovers the polyhedron from its homogenization: vertices are the
    /// height-one points on extreme rays with positive first coordinate.
    pub fn from_homogenization(cone: &Cone) -> Result<Self> {
        if cone.rank() < 2 {
            return Err(Error::RankMismatch {
                expected: 2,
                got: cone.rank(),
            });
        }
        if !cone.is_pointed() {
            return Err(Error::NotPointed);
        }
        let p = Self::from_pointed_homogenization(cone);
        if p.vertices.is_empty() {
            return Err(Error::EmptyPolyhedron);
        }
        Ok(p)
    }

    fn from_pointed_homogenization(cone: &Cone) -> Self {
        let rank = cone.rank() - 1;
        let mut vertices = Vec::new();
        let mut rays = Vec::new();
        for g in cone.generators() {
            let head = &g[0];
            let tail = LatticeVector::new(g[1..].to_vec());
            if head.is_zero() {
                rays.push(tail);
            } else {
                let h = Rat::from_integer(head.clone());
                vertices.push(RatVector::new(
                    tail.iter().map(|x| Rat::from_integer(x.clone()) / &h).collect(),
                ));
            }
        }
        vertices.sort();
        rays.sort();
        TailedPolyhedron {
            rank,
            vertices,
            rays,
        }
    }

    pub fn point(v: RatVector) -> Self {
        TailedPolyhedron {
            rank: v.rank(),
            vertices: vec![v],
            rays: Vec::new(),
        }
    }

    /// The polyhedron `sigma` itself: vertex `0` plus the rays of `tail`.
    pub fn trivial(tail: &Cone) -> Result<Self> {
        if !tail.is_pointed() {
            return Err(Error::NotPointed);
        }
        Ok(TailedPolyhedron {
            rank: tail.rank(),
            vertices: vec![RatVector::zero(tail.rank())],
            rays: tail.generators().to_vec(),
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn vertices(&self) -> &[RatVector] {
        &self.vertices
    }

    pub fn rays(&self) -> &[LatticeVector] {
        &self.rays
    }

    pub fn is_compact(&self) -> bool {
        self.rays.is_empty()
    }

    pub fn tail_cone(&self) -> Cone {
        Cone::from_generators(self.rank, &self.rays).expect("rays share the polyhedron rank")
    }

    /// Pairwise vertex sums plus the union of the rays, then reduced.
    pub fn minkowski_sum(&self, other: &TailedPolyhedron) -> Result<TailedPolyhedron> {
        check_rank(self.rank, other.rank)?;
        let vertices: Vec<RatVector> = self
            .vertices
            .iter()
            .flat_map(|a| other.vertices.iter().map(move |b| a + b))
            .collect();
        let rays: Vec<LatticeVector> = self.rays.iter().chain(&other.rays).cloned().collect();
        TailedPolyhedron::new(self.rank, vertices, rays)
    }

    pub fn support_min(&self, u: &LatticeVector) -> Result<SupportValue> {
        check_rank(self.rank, u.rank())?;
        if self.rays.iter().any(|r| u.dot(r).is_negative()) {
            return Ok(SupportValue::NegInfinity);
        }
        let min = self
            .vertices
            .iter()
            .map(|v| u.dot_rat(v))
            .min()
            .expect("polyhedra are nonempty");
        Ok(SupportValue::Finite(min))
    }

    /// The cone in `Z x N` generated by `(1, P)` and `(0, tail)`.
    pub fn homogenize(&self) -> Cone {
        homogenization_of(self.rank, &self.vertices, &self.rays)
            .expect("vertices and rays share the polyhedron rank")
    }

    /// The pairs `(r, u)` with `u` nonnegative on the tail and
    /// `r + <u, v> >= 0` at every vertex, i.e. `r >= -min <u, P>`.
    pub fn homogenize_dual(&self) -> Cone {
        let mut ineqs: Vec<LatticeVector> = self
            .rays
            .iter()
            .map(|w| w.lift(BigInt::zero()))
            .collect();
        ineqs.extend(self.vertices.iter().map(RatVector::homogenized));
        Cone::from_inequalities(self.rank + 1, &ineqs).expect("inequalities share rank")
    }

    /// `Some(v)` when the polyhedron is `v + tail` for a lattice point `v`.
    pub fn lattice_translate_of_tail(&self) -> Option<LatticeVector> {
        match self.vertices.as_slice() {
            [v] => v.to_lattice(),
            _ => None,
        }
    }

    pub fn contains(&self, x: &RatVector) -> Result<bool> {
        check_rank(self.rank, x.rank())?;
        self.homogenize().contains(&lift_point(x))
    }
}

fn lift_point(x: &RatVector) -> RatVector {
    let mut entries = vec![Rat::from_integer(BigInt::from(1))];
    entries.extend(x.iter().cloned());
    RatVector::new(entries)
}

fn homogenization_of(rank: usize, vertices: &[RatVector], rays: &[LatticeVector]) -> Result<Cone> {
    let mut gens: Vec<LatticeVector> = vertices.iter().map(RatVector::homogenized).collect();
    gens.extend(rays.iter().map(|r| r.lift(BigInt::zero())));
    Cone::from_generators(rank + 1, &gens)
}

pub fn tail_cone(p: &TailedPolyhedron) -> Cone {
    p.tail_cone()
}

pub fn minkowski_sum(a: &TailedPolyhedron, b: &TailedPolyhedron) -> Result<TailedPolyhedron> {
    a.minkowski_sum(b)
}

pub fn support_min(u: &LatticeVector, p: &TailedPolyhedron) -> Result<SupportValue> {
    p.support_min(u)
}

pub fn homogenize(p: &TailedPolyhedron) -> Cone {
    p.homogenize()
}

pub fn homogenize_dual(p: &TailedPolyhedron) -> Cone {
    p.homogenize_dual()
}

pub fn is_lattice_translate_of_tail(p: &TailedPolyhedron) -> Option<LatticeVector> {
    p.lattice_translate_of_tail()
}

#[derive(Serialize, Deserialize)]
struct PolyhedronJson {
    rank: usize,
    vertices: Vec<RatVector>,
    #[serde(default)]
    rays: Vec<LatticeVector>,
}

impl Serialize for TailedPolyhedron {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyhedronJson {
            rank: self.rank,
            vertices: self.vertices.clone(),
            rays: self.rays.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TailedPolyhedron {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = PolyhedronJson::deserialize(d)?;
        TailedPolyhedron::new(raw.rank, raw.vertices, raw.rays).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for TailedPolyhedron {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "conv{{")?;
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")?;
        if !self.rays.is_empty() {
            write!(f, " + pos{{")?;
            for (i, r) in self.rays.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{r}")?;
            }
            write!(f, "}}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{rat, ratio};

    fn lv(x: &[i64]) -> LatticeVector {
        LatticeVector::from_i64s(x)
    }

    fn rv(x: &[i64]) -> RatVector {
        RatVector::from_i64s(x)
    }

    fn poly(vs: &[&[i64]], rays: &[&[i64]]) -> TailedPolyhedron {
        let rank = vs[0].len();
        TailedPolyhedron::new(
            rank,
            vs.iter().map(|v| rv(v)).collect(),
            rays.iter().map(|r| lv(r)).collect(),
        )
        .unwrap()
    }

    fn segment(i: usize) -> TailedPolyhedron {
        let mut e = [0i64, 0];
        e[i] = 1;
        poly(&[&[0, 0], &e], &[])
    }

    #[test]
    fn tail_cones() {
        assert!(segment(0).tail_cone().is_zero());
        assert_eq!(
            poly(&[&[0, 0]], &[&[1, 0]]).tail_cone(),
            Cone::from_generators_i64(2, &[&[1, 0]]).unwrap()
        );
        assert_eq!(
            poly(&[&[0, 0], &[0, 1]], &[&[1, 0], &[1, 1]]).tail_cone(),
            Cone::from_generators_i64(2, &[&[1, 0], &[1, 1]]).unwrap()
        );
    }

    #[test]
    fn redundant_points_are_dropped() {
        let p = poly(&[&[0, 0], &[2, 0], &[1, 0], &[1, 0]], &[]);
        assert_eq!(p.vertices(), &[rv(&[0, 0]), rv(&[2, 0])]);
        let q = poly(&[&[0, 0], &[0, 3]], &[&[0, 1], &[0, 2]]);
        assert_eq!(q.vertices(), &[rv(&[0, 0])]);
        assert_eq!(q.rays(), &[lv(&[0, 1])]);
    }

    #[test]
    fn rejects_empty_and_non_pointed() {
        assert_eq!(
            TailedPolyhedron::new(2, vec![], vec![]).unwrap_err(),
            Error::EmptyPolyhedron
        );
        assert_eq!(
            TailedPolyhedron::new(2, vec![rv(&[0, 0])], vec![lv(&[1, 0]), lv(&[-1, 0])])
                .unwrap_err(),
            Error::NotPointed
        );
    }

    #[test]
    fn minkowski_of_segments_is_square() {
        let sq = segment(0).minkowski_sum(&segment(1)).unwrap();
        assert_eq!(
            sq.vertices(),
            &[rv(&[0, 0]), rv(&[0, 1]), rv(&[1, 0]), rv(&[1, 1])]
        );
        let origin = TailedPolyhedron::point(RatVector::zero(2));
        assert_eq!(segment(0).minkowski_sum(&origin).unwrap(), segment(0));
    }

    #[test]
    fn minkowski_with_rays() {
        let a = poly(&[&[0, 0], &[1, 0]], &[&[0, 1]]);
        let s = a.minkowski_sum(&a).unwrap();
        assert_eq!(s, poly(&[&[0, 0], &[2, 0]], &[&[0, 1]]));
    }

    #[test]
    fn support_values() {
        let s = segment(0);
        assert_eq!(s.support_min(&lv(&[1, 0])).unwrap(), SupportValue::Finite(rat(0)));
        assert_eq!(s.support_min(&lv(&[-1, 0])).unwrap(), SupportValue::Finite(rat(-1)));
        let ray = poly(&[&[0, 0]], &[&[1, 0]]);
        assert_eq!(ray.support_min(&lv(&[-1, 0])).unwrap(), SupportValue::NegInfinity);
        assert!(SupportValue::NegInfinity < SupportValue::Finite(rat(-100)));
    }

    #[test]
    fn homogenizations_of_example_segments() {
        assert_eq!(
            segment(0).homogenize(),
            Cone::from_generators_i64(3, &[&[1, 0, 0], &[1, 1, 0]]).unwrap()
        );
        assert_eq!(
            segment(1).homogenize(),
            Cone::from_generators_i64(3, &[&[1, 0, 0], &[1, 0, 1]]).unwrap()
        );
        let half = TailedPolyhedron::point(RatVector::new(vec![ratio(1, 2), rat(0)]));
        assert_eq!(half.homogenize().generators(), &[lv(&[2, 1, 0])]);
    }

    #[test]
    fn homogenize_dual_examples() {
        let d = segment(0).homogenize_dual();
        assert_eq!(
            d.generators(),
            &[lv(&[0, 0, -1]), lv(&[0, 0, 1]), lv(&[0, 1, 0]), lv(&[1, -1, 0])]
        );
        let sigma = poly(&[&[0]], &[&[1]]);
        assert_eq!(
            sigma.homogenize_dual(),
            Cone::from_generators_i64(2, &[&[1, 0], &[0, 1]]).unwrap()
        );
        let pt = poly(&[&[1, 1]], &[]);
        assert_eq!(
            pt.homogenize_dual(),
            Cone::from_inequalities(3, &[lv(&[1, 1, 1])]).unwrap()
        );
    }

    #[test]
    fn lattice_translates() {
        assert_eq!(
            poly(&[&[2, 3]], &[&[1, 0]]).lattice_translate_of_tail(),
            Some(lv(&[2, 3]))
        );
        assert_eq!(segment(0).lattice_translate_of_tail(), None);
        let half = TailedPolyhedron::point(RatVector::new(vec![ratio(1, 2), rat(0)]));
        assert_eq!(half.lattice_translate_of_tail(), None);
    }

    #[test]
    fn recovers_from_homogenization() {
        let p = poly(&[&[0, 0], &[1, 2]], &[&[1, 0]]);
        assert_eq!(TailedPolyhedron::from_homogenization(&p.homogenize()).unwrap(), p);
    }

    #[test]
    fn json_shape() {
        let p: TailedPolyhedron =
            serde_json::from_str(r#"{"rank":2,"vertices":[["1/2","0"],[0,0]],"rays":[]}"#).unwrap();
        assert_eq!(
            serde_json::to_string(&p).unwrap(),
            r#"{"rank":2,"vertices":[["0","0"],["1/2","0"]],"rays":[]}"#
        );
    }
}
