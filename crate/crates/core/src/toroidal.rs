//! The glued toroidal fan of a polyhedral divisor and the check that the
//! cones of the local toric models are the homogenized coefficients.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use serde::{Deserialize, Deserializer, Serialize};

use crate::cone::Cone;
use crate::divisor::PolyhedralDivisor;
use crate::error::{Error, Result};
use crate::lattice::LatticeVector;
use crate::semigroup::{stabilized_cone, MonomialSemigroup};

/// Cones in `Z x N`, one per point label, glued along `(0, sigma)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GluedFan {
    rank: usize,
    shared_face: Cone,
    charts: BTreeMap<String, Cone>,
}

/// `(0, sigma)` inside `Z x N`.
pub fn embedded_tail(tail: &Cone) -> Cone {
    let gens: Vec<LatticeVector> = tail
        .generators()
        .iter()
        .map(|g| g.lift(BigInt::from(0)))
        .collect();
    Cone::from_generators(tail.rank() + 1, &gens).expect("lifted generators share a rank")
}

/// `c` intersected with the hyperplane where the first coordinate vanishes.
pub fn zero_slice(c: &Cone) -> Cone {
    let e0 = LatticeVector::unit(c.rank(), 0);
    let plane = Cone::from_inequalities(c.rank(), &[e0.clone(), -&e0]).expect("same rank");
    c.intersect(&plane).expect("same rank")
}

impl GluedFan {
    /// Checks every invariant: charts pointed, shared face at height zero,
    /// and every zero slice equal to the shared face.
    pub fn new(rank: usize, shared_face: Cone, charts: BTreeMap<String, Cone>) -> Result<Self> {
        if rank < 2 {
            return Err(Error::ZeroRank);
        }
        if shared_face.rank() != rank {
            return Err(Error::RankMismatch {
                expected: rank,
                got: shared_face.rank(),
            });
        }
        if shared_face.generators().iter().any(|g| g[0] != BigInt::from(0)) {
            return Err(Error::GluingViolation {
                label: "shared_face".into(),
            });
        }
        for (label, c) in &charts {
            if c.rank() != rank {
                return Err(Error::RankMismatch {
                    expected: rank,
                    got: c.rank(),
                });
            }
            if !c.is_pointed() {
                return Err(Error::NotPointed);
            }
            if zero_slice(c) != shared_face {
                return Err(Error::GluingViolation {
                    label: label.clone(),
                });
            }
        }
        Ok(GluedFan {
            rank,
            shared_face,
            charts,
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn shared_face(&self) -> &Cone {
        &self.shared_face
    }

    pub fn charts(&self) -> &BTreeMap<String, Cone> {
        &self.charts
    }

    pub fn chart(&self, label: &str) -> Option<&Cone> {
        self.charts.get(label)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FanJson {
    rank: usize,
    shared_face: Cone,
    charts: BTreeMap<String, Cone>,
}

impl<'de> Deserialize<'de> for GluedFan {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = FanJson::deserialize(d)?;
        GluedFan::new(j.rank, j.shared_face, j.charts).map_err(serde::de::Error::custom)
    }
}

/// Checks the caller's `U`: only unmarked or trivial points may be kept trivial.
fn check_trivial_set(d: &PolyhedralDivisor, trivial: &BTreeSet<String>) -> Result<()> {
    for label in trivial {
        if !d.is_trivial_at(label) {
            return Err(Error::NontrivialInU {
                label: label.clone(),
            });
        }
    }
    Ok(())
}

/// Charts `P -> homogenize(Delta_P)` for the nontrivial points outside `U`
/// (`None` means every unmarked point), glued along `(0, sigma)`.
pub fn fan_from_divisor(d: &PolyhedralDivisor, trivial: Option<&BTreeSet<String>>) -> Result<GluedFan> {
    if let Some(u) = trivial {
        check_trivial_set(d, u)?;
    }
    let charts = d
        .nontrivial_points()
        .into_iter()
        .map(|p| (p.to_string(), d.coefficient(p).homogenize()))
        .collect();
    GluedFan::new(d.rank() + 1, embedded_tail(d.tail()), charts)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PointPartition {
    pub product_points: Vec<String>,
    pub essential_points: Vec<String>,
}

/// Splits the nontrivial marked points by whether the coefficient is a
/// lattice translate `v + sigma`, i.e. whether the local cone is
/// `sigma x Q>=0`. Entries equal to `sigma` are ignored like unmarked points.
pub fn canonical_point_set(d: &PolyhedralDivisor) -> PointPartition {
    let (product_points, essential_points) = d
        .nontrivial_points()
        .into_iter()
        .map(|l| (l.to_string(), d.coefficient(l).lattice_translate_of_tail().is_some()))
        .partition::<Vec<_>, _>(|(_, product)| *product);
    PointPartition {
        product_points: product_points.into_iter().map(|(l, _)| l).collect(),
        essential_points: essential_points.into_iter().map(|(l, _)| l).collect(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Equal,
    Different,
    Undetermined,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PointVerdict {
    /// Cone read off the enumerated monomial semigroup; absent when the
    /// box cap was too small.
    pub lhs: Option<Cone>,
    /// The homogenized coefficient.
    pub rhs: Cone,
    pub equal: bool,
    pub box_used: Option<u32>,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagnostics: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub points: BTreeMap<String, PointVerdict>,
    pub overall: bool,
    pub verdict: Verdict,
}

impl VerificationReport {
    fn assemble(points: BTreeMap<String, PointVerdict>) -> Self {
        let verdict = if points.values().any(|p| p.verdict == Verdict::Different) {
            Verdict::Different
        } else if points.values().any(|p| p.verdict == Verdict::Undetermined) {
            Verdict::Undetermined
        } else {
            Verdict::Equal
        };
        VerificationReport {
            overall: points.values().all(|p| p.equal),
            points,
            verdict,
        }
    }
}

fn verify_point(d: &PolyhedralDivisor, label: &str, cap: u32) -> PointVerdict {
    let s = MonomialSemigroup::at(d, label);
    let rhs = d.coefficient(label).homogenize();
    match stabilized_cone(&s, cap) {
        Ok(st) => {
            let equal = st.cone == rhs;
            PointVerdict {
                lhs: Some(st.cone),
                rhs,
                equal,
                box_used: Some(st.bound),
                verdict: if equal { Verdict::Equal } else { Verdict::Different },
                diagnostics: None,
            }
        }
        Err(u) => PointVerdict {
            lhs: None,
            rhs,
            equal: false,
            box_used: None,
            verdict: Verdict::Undetermined,
            diagnostics: Some(u.reason),
        },
    }
}

/// Compares, at every nontrivial point, the cone dual to the enumerated
/// monomial semigroup with the homogenized coefficient. Points are
/// processed on separate threads where the platform has them.
pub fn verify_theorem1(d: &PolyhedralDivisor, box_cap: u32) -> VerificationReport {
    let labels = d.nontrivial_points();
    let points = std::thread::scope(|scope| {
        let handles: Vec<_> = labels
            .iter()
            .map(|&l| {
                let h = std::thread::Builder::new()
                    .spawn_scoped(scope, move || verify_point(d, l, box_cap))
                    .ok();
                (l, h)
            })
            .collect();
        handles
            .into_iter()
            .map(|(l, h)| {
                let v = match h {
                    Some(h) => h.join().expect("verification thread"),
                    None => verify_point(d, l, box_cap),
                };
                (l.to_string(), v)
            })
            .collect()
    });
    VerificationReport::assemble(points)
}

/// Label-wise comparison: same labels, same shared face, equal charts.
pub fn fan_isomorphic(a: &GluedFan, b: &GluedFan) -> bool {
    a.rank == b.rank
        && a.shared_face == b.shared_face
        && a.charts.len() == b.charts.len()
        && a.charts
            .iter()
            .all(|(l, c)| b.charts.get(l).is_some_and(|d| c == d))
}
