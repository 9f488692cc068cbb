//! Rational polyhedral cones with both representations kept in sync.
//!
//! A cone stores its generators and its inequalities. The inequalities of
//! a cone are exactly the generators of its dual, so [`Cone::dual`] only
//! swaps the two lists. Both lists are in canonical form: primitive
//! extreme rays of the pointed quotient, lifted orthogonally to the
//! lineality space, followed by `+-` a reduced basis of the lineality
//! space, all sorted lexicographically.

use std::fmt;

use fixedbitset::FixedBitSet;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::lattice::{canonical_basis, project_out, LatticeVector, RatVector};

#[derive(Clone, Debug)]
pub struct Cone {
    rank: usize,
    generators: Vec<LatticeVector>,
    inequalities: Vec<LatticeVector>,
    lineality_dim: usize,
    dual_lineality_dim: usize,
}

/// Raw double description output: a lineality basis plus one
/// representative per extreme ray of the pointed quotient.
struct RawGenerators {
    lineality: Vec<LatticeVector>,
    rays: Vec<LatticeVector>,
}

struct Ray {
    v: LatticeVector,
    tight: FixedBitSet,
}

/// Double description: generators of `{x : <a, x> >= 0 for all a}`.
fn double_description(rank: usize, inequalities: &[LatticeVector]) -> RawGenerators {
    let m = inequalities.len();
    let mut lineality: Vec<LatticeVector> = (0..rank).map(|i| LatticeVector::unit(rank, i)).collect();
    let mut rays: Vec<Ray> = Vec::new();

    for (i, a) in inequalities.iter().enumerate() {
        if a.is_zero() {
            for r in &mut rays {
                r.tight.insert(i);
            }
            continue;
        }

        if let Some(j) = lineality.iter().position(|l| !a.dot(l).is_zero()) {
            let mut pivot = lineality.remove(j);
            let mut s0 = a.dot(&pivot);
            if s0.is_negative() {
                pivot = -&pivot;
                s0 = -s0;
            }
            for l in &mut lineality {
                let t = a.dot(l);
                if !t.is_zero() {
                    *l = (&l.scale(&s0) - &pivot.scale(&t)).primitive();
                }
            }
            for r in &mut rays {
                let t = a.dot(&r.v);
                if !t.is_zero() {
                    r.v = (&r.v.scale(&s0) - &pivot.scale(&t)).primitive();
                }
                r.tight.insert(i);
            }
            let mut tight = FixedBitSet::with_capacity(m);
            tight.insert_range(..i);
            rays.push(Ray { v: pivot, tight });
            continue;
        }

        let values: Vec<BigInt> = rays.iter().map(|r| a.dot(&r.v)).collect();
        let mut next: Vec<Ray> = Vec::new();
        let mut born: Vec<Ray> = Vec::new();
        for (p, vp) in values.iter().enumerate() {
            if !vp.is_positive() {
                continue;
            }
            for (n, vn) in values.iter().enumerate() {
                if !vn.is_negative() {
                    continue;
                }
                let mut common = rays[p].tight.clone();
                common.intersect_with(&rays[n].tight);
                let blocked = rays
                    .iter()
                    .enumerate()
                    .any(|(k, r)| k != p && k != n && common.is_subset(&r.tight));
                if blocked {
                    continue;
                }
                let v = (&rays[n].v.scale(vp) + &rays[p].v.scale(&-vn)).primitive();
                common.insert(i);
                born.push(Ray { v, tight: common });
            }
        }
        for (r, v) in rays.into_iter().zip(&values) {
            if v.is_zero() {
                let mut r = r;
                r.tight.insert(i);
                next.push(r);
            } else if v.is_positive() {
                next.push(r);
            }
        }
        next.extend(born);
        rays = next;
    }

    RawGenerators {
        lineality,
        rays: rays.into_iter().map(|r| r.v).collect(),
    }
}

/// Canonical generating list and the lineality dimension.
fn canonicalize(rank: usize, raw: RawGenerators) -> (Vec<LatticeVector>, usize) {
    let basis = canonical_basis(&raw.lineality, rank);
    let mut out: Vec<LatticeVector> = raw
        .rays
        .iter()
        .map(|r| project_out(r, &basis).primitive_direction())
        .collect();
    for b in &basis {
        out.push(-b);
        out.push(b.clone());
    }
    out.sort();
    out.dedup();
    (out, basis.len())
}

fn check_ranks(rank: usize, vs: &[LatticeVector]) -> Result<()> {
    if rank == 0 {
        return Err(Error::ZeroRank);
    }
    match vs.iter().find(|v| v.rank() != rank) {
        Some(v) => Err(Error::RankMismatch {
            expected: rank,
            got: v.rank(),
        }),
        None => Ok(()),
    }
}

impl Cone {
    /// The cone positively spanned by `generators`.
    pub fn from_generators(rank: usize, generators: &[LatticeVector]) -> Result<Cone> {
        check_ranks(rank, generators)?;
        let (inequalities, dual_lineality_dim) =
            canonicalize(rank, double_description(rank, generators));
        let (generators, lineality_dim) =
            canonicalize(rank, double_description(rank, &inequalities));
        Ok(Cone {
            rank,
            generators,
            inequalities,
            lineality_dim,
            dual_lineality_dim,
        })
    }

    /// The cone `{x : <a, x> >= 0}` for every `a` in `inequalities`.
    pub fn from_inequalities(rank: usize, inequalities: &[LatticeVector]) -> Result<Cone> {
        check_ranks(rank, inequalities)?;
        let (generators, lineality_dim) =
            canonicalize(rank, double_description(rank, inequalities));
        let (inequalities, dual_lineality_dim) =
            canonicalize(rank, double_description(rank, &generators));
        Ok(Cone {
            rank,
            generators,
            inequalities,
            lineality_dim,
            dual_lineality_dim,
        })
    }

    pub fn from_generators_i64(rank: usize, generators: &[&[i64]]) -> Result<Cone> {
        let gens: Vec<LatticeVector> = generators.iter().map(|g| LatticeVector::from_i64s(g)).collect();
        Cone::from_generators(rank, &gens)
    }

    pub fn zero(rank: usize) -> Result<Cone> {
        Cone::from_generators(rank, &[])
    }

    pub fn full(rank: usize) -> Result<Cone> {
        Cone::from_inequalities(rank, &[])
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn generators(&self) -> &[LatticeVector] {
        &self.generators
    }

    pub fn inequalities(&self) -> &[LatticeVector] {
        &self.inequalities
    }

    /// Dimension of the largest linear subspace contained in the cone.
    pub fn lineality_dim(&self) -> usize {
        self.lineality_dim
    }

    /// Dimension of the linear span.
    pub fn dim(&self) -> usize {
        self.rank - self.dual_lineality_dim
    }

    /// `{u : <u, v> >= 0 for all v in self}`.
    pub fn dual(&self) -> Cone {
        Cone {
            rank: self.rank,
            generators: self.inequalities.clone(),
            inequalities: self.generators.clone(),
            lineality_dim: self.dual_lineality_dim,
            dual_lineality_dim: self.lineality_dim,
        }
    }

    pub fn is_pointed(&self) -> bool {
        self.lineality_dim == 0
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.dual_lineality_dim == 0
    }

    pub fn is_zero(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn contains(&self, v: &RatVector) -> Result<bool> {
        if v.rank() != self.rank {
            return Err(Error::RankMismatch {
                expected: self.rank,
                got: v.rank(),
            });
        }
        Ok(self.inequalities.iter().all(|a| !a.dot_rat(v).is_negative()))
    }

    pub fn contains_lattice(&self, v: &LatticeVector) -> Result<bool> {
        if v.rank() != self.rank {
            return Err(Error::RankMismatch {
                expected: self.rank,
                got: v.rank(),
            });
        }
        Ok(self.inequalities.iter().all(|a| !a.dot(v).is_negative()))
    }

    /// Set equality, decided by mutual containment of generators.
    pub fn set_eq(&self, other: &Cone) -> Result<bool> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch {
                expected: self.rank,
                got: other.rank,
            });
        }
        let within = |a: &Cone, b: &Cone| {
            a.generators
                .iter()
                .all(|g| b.inequalities.iter().all(|h| !h.dot(g).is_negative()))
        };
        Ok(within(self, other) && within(other, self))
    }

    pub fn intersect(&self, other: &Cone) -> Result<Cone> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch {
                expected: self.rank,
                got: other.rank,
            });
        }
        let mut ineqs = self.inequalities.clone();
        ineqs.extend(other.inequalities.iter().cloned());
        Cone::from_inequalities(self.rank, &ineqs)
    }
}

/// Set equality of cones. Ranks must agree; cones of different rank compare unequal.
pub fn cone_equal(a: &Cone, b: &Cone) -> Result<bool> {
    a.set_eq(b)
}

impl PartialEq for Cone {
    fn eq(&self, other: &Cone) -> bool {
        self.set_eq(other).unwrap_or(false)
    }
}

impl Eq for Cone {}

impl fmt::Display for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "pos{{")?;
        for (i, g) in self.generators.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, "}}")
    }
}

#[derive(Serialize, Deserialize)]
struct ConeJson {
    rank: usize,
    generators: Vec<LatticeVector>,
}

impl Serialize for Cone {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ConeJson {
            rank: self.rank,
            generators: self.generators.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Cone {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = ConeJson::deserialize(d)?;
        Cone::from_generators(raw.rank, &raw.generators).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lv(x: &[i64]) -> LatticeVector {
        LatticeVector::from_i64s(x)
    }

    fn gens(c: &Cone) -> Vec<Vec<i64>> {
        c.generators()
            .iter()
            .map(|g| g.iter().map(|x| i64::try_from(x).unwrap()).collect())
            .collect()
    }

    #[test]
    fn orthant_is_self_dual() {
        let c = Cone::from_generators_i64(2, &[&[1, 0], &[0, 1]]).unwrap();
        assert_eq!(gens(&c.dual()), vec![vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn dual_of_wedge() {
        let c = Cone::from_generators_i64(2, &[&[1, 0], &[1, 1]]).unwrap();
        assert_eq!(gens(&c.dual()), vec![vec![0, 1], vec![1, -1]]);
        assert!(c.is_pointed());
        assert!(c.is_full_dimensional());
    }

    #[test]
    fn dual_of_zero_cone_is_everything() {
        let z = Cone::zero(2).unwrap();
        assert!(z.is_pointed());
        assert!(!z.is_full_dimensional());
        assert_eq!(
            gens(&z.dual()),
            vec![vec![-1, 0], vec![0, -1], vec![0, 1], vec![1, 0]]
        );
        let full = Cone::full(2).unwrap();
        assert!(!full.is_pointed());
        assert_eq!(full, z.dual());
    }

    #[test]
    fn primitivizes_generators() {
        let c = Cone::from_generators_i64(2, &[&[2, 0]]).unwrap();
        assert_eq!(gens(&c), vec![vec![1, 0]]);
    }

    #[test]
    fn from_inequalities_wedge() {
        let c = Cone::from_inequalities(2, &[lv(&[1, 0]), lv(&[1, 1])]).unwrap();
        assert_eq!(gens(&c), vec![vec![0, 1], vec![1, -1]]);
    }

    #[test]
    fn low_dimensional_cone_in_rank_three() {
        let c = Cone::from_generators_i64(3, &[&[1, 0, 0], &[1, 1, 0]]).unwrap();
        let ineqs: Vec<Vec<i64>> = gens(&c.dual());
        assert_eq!(
            ineqs,
            vec![vec![0, 0, -1], vec![0, 0, 1], vec![0, 1, 0], vec![1, -1, 0]]
        );
        assert_eq!(c.dim(), 2);
        assert_eq!(c.dual().lineality_dim(), 1);
    }

    #[test]
    fn membership_equality_intersection() {
        let a = Cone::from_generators_i64(2, &[&[1, 0], &[1, 1]]).unwrap();
        assert!(a.contains(&RatVector::from_i64s(&[3, 1])).unwrap());
        assert!(!a.contains(&RatVector::from_i64s(&[0, 1])).unwrap());
        let b = Cone::from_generators_i64(2, &[&[1, 1], &[1, 0], &[2, 1]]).unwrap();
        assert!(cone_equal(&a, &b).unwrap());
        let c = Cone::from_generators_i64(2, &[&[0, 1], &[1, 1]]).unwrap();
        assert_eq!(gens(&a.intersect(&c).unwrap()), vec![vec![1, 1]]);
    }

    #[test]
    fn rank_mismatch_is_an_error() {
        let a = Cone::zero(2).unwrap();
        let b = Cone::zero(3).unwrap();
        assert!(matches!(
            a.intersect(&b),
            Err(Error::RankMismatch { .. })
        ));
        assert!(Cone::from_generators(2, &[lv(&[1, 0, 0])]).is_err());
        assert!(a.contains(&RatVector::from_i64s(&[1])).is_err());
        assert_eq!(Cone::zero(0).unwrap_err(), Error::ZeroRank);
    }

    #[test]
    fn half_plane_canonical_form() {
        let h = Cone::from_inequalities(2, &[lv(&[1, 1])]).unwrap();
        assert_eq!(h.lineality_dim(), 1);
        assert_eq!(gens(&h), vec![vec![-1, 1], vec![1, -1], vec![1, 1]]);
    }

    #[test]
    fn json_round_trip() {
        let c = Cone::from_generators_i64(2, &[&[1, 0], &[1, 1]]).unwrap();
        let s = serde_json::to_string(&c).unwrap();
        assert_eq!(s, r#"{"rank":2,"generators":[[1,0],[1,1]]}"#);
        let back: Cone = serde_json::from_str(&s).unwrap();
        assert_eq!(back, c);
    }
}
