//! Polyhedral divisors on a marked curve and their evaluations.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cone::Cone;
use crate::error::{Error, Result};
use crate::lattice::{floor_int, format_rat, parse_rat, LatticeVector, Rat};
use crate::polyhedron::{SupportValue, TailedPolyhedron};

pub const INFINITY_LABEL: &str = "\u{221e}";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveKind {
    AffineLine,
    ProjectiveLine,
    AbstractAffine,
    AbstractComplete,
}

impl CurveKind {
    pub fn is_complete(self) -> bool {
        matches!(self, CurveKind::ProjectiveLine | CurveKind::AbstractComplete)
    }

    fn has_coordinates(self) -> bool {
        matches!(self, CurveKind::AffineLine | CurveKind::ProjectiveLine)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_rat")]
    pub coordinate: Option<Rat>,
}

impl CurvePoint {
    pub fn new(label: impl Into<String>) -> Self {
        CurvePoint {
            label: label.into(),
            coordinate: None,
        }
    }

    pub fn at(label: impl Into<String>, coordinate: Rat) -> Self {
        CurvePoint {
            label: label.into(),
            coordinate: Some(coordinate),
        }
    }
}

mod opt_rat {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Option<Rat>, s: S) -> std::result::Result<S::Ok, S::Error> {
        match r {
            Some(r) => s.serialize_str(&format_rat(r)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<Rat>, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Text(String),
            Int(i64),
        }
        match Option::<Raw>::deserialize(d)? {
            None => Ok(None),
            Some(Raw::Int(i)) => Ok(Some(Rat::from_integer(i.into()))),
            Some(Raw::Text(t)) => parse_rat(&t).map(Some).map_err(serde::de::Error::custom),
        }
    }
}

/// A curve known only through its marked points and whether it is complete.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BaseCurve {
    kind: CurveKind,
    points: Vec<CurvePoint>,
}

impl BaseCurve {
    pub fn new(kind: CurveKind, points: Vec<CurvePoint>) -> Result<Self> {
        let mut labels = BTreeSet::new();
        let mut coords = BTreeSet::new();
        for p in &points {
            if !labels.insert(p.label.as_str()) {
                return Err(Error::InvalidCurve(format!("duplicate label {:?}", p.label)));
            }
            if p.label == INFINITY_LABEL {
                if kind != CurveKind::ProjectiveLine {
                    return Err(Error::InvalidCurve(format!(
                        "label {INFINITY_LABEL:?} is only legal on projective_line"
                    )));
                }
                if p.coordinate.is_some() {
                    return Err(Error::InvalidCurve(format!(
                        "label {INFINITY_LABEL:?} cannot carry a coordinate"
                    )));
                }
            }
            if let Some(c) = &p.coordinate {
                if !kind.has_coordinates() {
                    return Err(Error::InvalidCurve(format!(
                        "point {:?} has a coordinate on an abstract curve",
                        p.label
                    )));
                }
                if !coords.insert(c.clone()) {
                    return Err(Error::InvalidCurve(format!(
                        "duplicate coordinate {} at {:?}",
                        format_rat(c),
                        p.label
                    )));
                }
            }
        }
        Ok(BaseCurve { kind, points })
    }

    pub fn kind(&self) -> CurveKind {
        self.kind
    }

    pub fn points(&self) -> &[CurvePoint] {
        &self.points
    }

    pub fn has_point(&self, label: &str) -> bool {
        self.points.iter().any(|p| p.label == label)
    }

    pub fn with_kind(&self, kind: CurveKind) -> Result<Self> {
        BaseCurve::new(kind, self.points.clone())
    }
}

impl<'de> Deserialize<'de> for BaseCurve {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            kind: CurveKind,
            #[serde(default)]
            points: Vec<CurvePoint>,
        }
        let raw = Raw::deserialize(d)?;
        BaseCurve::new(raw.kind, raw.points).map_err(serde::de::Error::custom)
    }
}

/// A finite formal sum of rational multiples of curve points.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct QDivisor(BTreeMap<String, Rat>);

impl QDivisor {
    pub fn new() -> Self {
        QDivisor(BTreeMap::new())
    }

    /// Builds a divisor, dropping zero coefficients.
    pub fn from_map(map: BTreeMap<String, Rat>) -> Self {
        QDivisor(map.into_iter().filter(|(_, v)| !v.is_zero()).collect())
    }

    pub fn coefficient(&self, label: &str) -> Rat {
        self.0.get(label).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn entries(&self) -> &BTreeMap<String, Rat> {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Rat {
        self.0.values().fold(Rat::zero(), |acc, x| acc + x)
    }

    pub fn add(&self, other: &QDivisor) -> QDivisor {
        let mut map = self.0.clone();
        for (k, v) in &other.0 {
            *map.entry(k.clone()).or_insert_with(Rat::zero) += v;
        }
        QDivisor::from_map(map)
    }

    pub fn scale(&self, k: &Rat) -> QDivisor {
        QDivisor::from_map(self.0.iter().map(|(l, v)| (l.clone(), v * k)).collect())
    }

    /// Coefficient-wise `self <= other`.
    pub fn le(&self, other: &QDivisor) -> bool {
        self.0
            .keys()
            .chain(other.0.keys())
            .all(|l| self.coefficient(l) <= other.coefficient(l))
    }

    pub fn floor(&self) -> IntDivisor {
        IntDivisor(
            self.0
                .iter()
                .map(|(l, v)| (l.clone(), floor_int(v)))
                .filter(|(_, v)| !v.is_zero())
                .collect(),
        )
    }
}

impl Serialize for QDivisor {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_map(self.0.iter().map(|(k, v)| (k, format_rat(v))))
    }
}

impl fmt::Display for QDivisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        for (i, (l, v)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{}*[{l}]", format_rat(v))?;
        }
        Ok(())
    }
}

/// An integral divisor, e.g. the round-down of a [`QDivisor`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IntDivisor(BTreeMap<String, BigInt>);

impl IntDivisor {
    pub fn coefficient(&self, label: &str) -> BigInt {
        self.0.get(label).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn entries(&self) -> &BTreeMap<String, BigInt> {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl Serialize for IntDivisor {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_map(self.0.iter().map(|(k, v)| (k, v.to_string())))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Properness {
    Proper,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProperReport {
    pub verdict: Properness,
    pub reasons: Vec<String>,
}

impl Serialize for ProperReport {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(Some(2))?;
        match self.verdict {
            Properness::Proper => m.serialize_entry("proper", &true)?,
            Properness::Inconclusive => m.serialize_entry("proper", "inconclusive")?,
        }
        m.serialize_entry("reasons", &self.reasons)?;
        m.end()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TrivialLocus {
    /// Marked points whose coefficient is the tail cone itself.
    pub explicit: Vec<String>,
    /// Unmarked points always carry the trivial coefficient.
    pub unmarked_trivial: bool,
}

/// `D = sum P (x) Delta_P` over a base curve, all coefficients sharing the tail.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyhedralDivisor {
    base: BaseCurve,
    rank: usize,
    tail: Cone,
    coefficients: BTreeMap<String, TailedPolyhedron>,
}

impl PolyhedralDivisor {
    pub fn new(
        base: BaseCurve,
        rank: usize,
        tail: Cone,
        coefficients: BTreeMap<String, TailedPolyhedron>,
    ) -> Result<Self> {
        if rank == 0 {
            return Err(Error::ZeroRank);
        }
        if tail.rank() != rank {
            return Err(Error::RankMismatch {
                expected: rank,
                got: tail.rank(),
            });
        }
        if !tail.is_pointed() {
            return Err(Error::NotPointed);
        }
        for (label, p) in &coefficients {
            if !base.has_point(label) {
                return Err(Error::UnknownPoint {
                    label: label.clone(),
                });
            }
            if p.rank() != rank {
                return Err(Error::RankMismatch {
                    expected: rank,
                    got: p.rank(),
                });
            }
            if p.tail_cone() != tail {
                return Err(Error::TailMismatch {
                    label: label.clone(),
                });
            }
        }
        Ok(PolyhedralDivisor {
            base,
            rank,
            tail,
            coefficients,
        })
    }

    pub fn base(&self) -> &BaseCurve {
        &self.base
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn tail(&self) -> &Cone {
        &self.tail
    }

    pub fn coefficients(&self) -> &BTreeMap<String, TailedPolyhedron> {
        &self.coefficients
    }

    /// The same coefficients over a curve of another kind.
    pub fn with_base_kind(&self, kind: CurveKind) -> Result<Self> {
        PolyhedralDivisor::new(
            self.base.with_kind(kind)?,
            self.rank,
            self.tail.clone(),
            self.coefficients.clone(),
        )
    }

    /// The coefficient `sigma` carried by every unmarked point.
    pub fn trivial_coefficient(&self) -> TailedPolyhedron {
        TailedPolyhedron::trivial(&self.tail).expect("divisor tails are pointed")
    }

    pub fn coefficient(&self, label: &str) -> TailedPolyhedron {
        self.coefficients
            .get(label)
            .cloned()
            .unwrap_or_else(|| self.trivial_coefficient())
    }

    pub fn is_trivial_at(&self, label: &str) -> bool {
        match self.coefficients.get(label) {
            None => true,
            Some(p) => *p == self.trivial_coefficient(),
        }
    }

    pub fn nontrivial_points(&self) -> Vec<&str> {
        self.coefficients
            .keys()
            .filter(|l| !self.is_trivial_at(l))
            .map(String::as_str)
            .collect()
    }

    /// Fails with a domain error naming the first tail ray `u` is negative on.
    pub fn check_weight(&self, u: &LatticeVector) -> Result<()> {
        if u.rank() != self.rank {
            return Err(Error::RankMismatch {
                expected: self.rank,
                got: u.rank(),
            });
        }
        match self.tail.generators().iter().find(|r| u.dot(r).is_negative()) {
            Some(ray) => Err(Error::NotInDualTail {
                weight: u.to_string(),
                ray: ray.to_string(),
            }),
            None => Ok(()),
        }
    }

    /// `D(u) = sum min <u, Delta_P> P`.
    pub fn evaluate(&self, u: &LatticeVector) -> Result<QDivisor> {
        self.check_weight(u)?;
        let mut map = BTreeMap::new();
        for (label, p) in &self.coefficients {
            match p.support_min(u)? {
                SupportValue::Finite(v) => {
                    map.insert(label.clone(), v);
                }
                SupportValue::NegInfinity => unreachable!("u is nonnegative on the common tail"),
            }
        }
        Ok(QDivisor::from_map(map))
    }

    pub fn evaluate_floor(&self, u: &LatticeVector) -> Result<IntDivisor> {
        Ok(self.evaluate(u)?.floor())
    }

    /// Minkowski sum of all coefficients; `sigma` when there are none.
    pub fn degree_polyhedron(&self) -> TailedPolyhedron {
        self.coefficients
            .values()
            .try_fold(self.trivial_coefficient(), |acc, p| acc.minkowski_sum(p))
            .expect("coefficients share the divisor rank")
    }

    pub fn check_proper(&self) -> ProperReport {
        if !self.base.kind.is_complete() {
            return ProperReport {
                verdict: Properness::Proper,
                reasons: vec![
                    "base curve is affine: coefficients with the common pointed tail suffice".into(),
                ],
            };
        }
        let sum = self.degree_polyhedron();
        let inside = sum.vertices().iter().all(|v| {
            self.tail
                .contains(v)
                .expect("degree polyhedron has the divisor rank")
        });
        let equal = sum == self.trivial_coefficient();
        if inside && !equal {
            return ProperReport {
                verdict: Properness::Proper,
                reasons: vec![format!(
                    "degree polyhedron {sum} is strictly contained in the tail cone {}",
                    self.tail
                )],
            };
        }
        let mut reasons = Vec::new();
        if !inside {
            reasons.push(format!(
                "degree polyhedron {sum} is not contained in the tail cone {}",
                self.tail
            ));
        } else {
            reasons.push(format!(
                "degree polyhedron equals the tail cone {}",
                self.tail
            ));
        }
        reasons.push(
            "strict containment is sufficient but not necessary on a complete curve; \
             the full properness criterion is not checked"
                .into(),
        );
        ProperReport {
            verdict: Properness::Inconclusive,
            reasons,
        }
    }

    pub fn trivial_locus(&self) -> TrivialLocus {
        TrivialLocus {
            explicit: self
                .coefficients
                .keys()
                .filter(|l| self.is_trivial_at(l))
                .cloned()
                .collect(),
            unmarked_trivial: true,
        }
    }
}

pub fn evaluate(d: &PolyhedralDivisor, u: &LatticeVector) -> Result<QDivisor> {
    d.evaluate(u)
}

pub fn evaluate_floor(d: &PolyhedralDivisor, u: &LatticeVector) -> Result<IntDivisor> {
    d.evaluate_floor(u)
}

pub fn degree(q: &QDivisor) -> Rat {
    q.degree()
}

pub fn degree_polyhedron(d: &PolyhedralDivisor) -> TailedPolyhedron {
    d.degree_polyhedron()
}

pub fn check_proper(d: &PolyhedralDivisor) -> ProperReport {
    d.check_proper()
}

pub fn trivial_locus(d: &PolyhedralDivisor) -> TrivialLocus {
    d.trivial_locus()
}

#[derive(Serialize, Deserialize)]
pub(crate) struct DivisorJson {
    pub base: BaseCurve,
    pub rank: usize,
    pub tail: Cone,
    #[serde(default)]
    pub coefficients: BTreeMap<String, TailedPolyhedron>,
}

impl Serialize for PolyhedralDivisor {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        DivisorJson {
            base: self.base.clone(),
            rank: self.rank,
            tail: self.tail.clone(),
            coefficients: self.coefficients.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PolyhedralDivisor {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = DivisorJson::deserialize(d)?;
        PolyhedralDivisor::new(raw.base, raw.rank, raw.tail, raw.coefficients)
            .map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples;
    use crate::lattice::{rat, ratio, RatVector};

    fn lv(x: &[i64]) -> LatticeVector {
        LatticeVector::from_i64s(x)
    }

    fn qd(entries: &[(&str, Rat)]) -> QDivisor {
        QDivisor::from_map(entries.iter().map(|(l, v)| (l.to_string(), v.clone())).collect())
    }

    #[test]
    fn evaluates_sl2() {
        let d = examples::sl2();
        assert_eq!(
            d.evaluate(&lv(&[-1, -1])).unwrap(),
            qd(&[("0", rat(-1)), ("1", rat(-1))])
        );
        assert!(d.evaluate(&lv(&[1, 1])).unwrap().is_empty());
        assert!(d.evaluate(&lv(&[0, 0])).unwrap().is_empty());
    }

    #[test]
    fn rejects_weights_outside_dual_tail() {
        let d = examples::translate();
        let err = d.evaluate(&lv(&[-1, 0])).unwrap_err();
        assert!(matches!(err, Error::NotInDualTail { ref ray, .. } if ray == "(1,0)"), "{err}");
        assert!(d.evaluate(&lv(&[1])).is_err());
    }

    #[test]
    fn floors() {
        let d = examples::single_vertex(RatVector::new(vec![ratio(1, 2), rat(0)]));
        assert_eq!(d.evaluate(&lv(&[1, 0])).unwrap(), qd(&[("P", ratio(1, 2))]));
        assert!(d.evaluate_floor(&lv(&[1, 0])).unwrap().is_empty());
        let sl2 = examples::sl2();
        let f = sl2.evaluate_floor(&lv(&[-1, 0])).unwrap();
        assert_eq!(f.entries().len(), 1);
        assert_eq!(f.coefficient("0"), BigInt::from(-1));
        assert!(sl2.evaluate_floor(&lv(&[0, 0])).unwrap().is_empty());
    }

    #[test]
    fn degrees() {
        assert_eq!(qd(&[("0", rat(-1)), ("1", rat(-1))]).degree(), rat(-2));
        assert_eq!(QDivisor::new().degree(), rat(0));
        assert_eq!(
            qd(&[("0", ratio(3, 2)), (INFINITY_LABEL, ratio(-1, 2))]).degree(),
            rat(1)
        );
    }

    #[test]
    fn degree_polyhedra() {
        let sq = examples::sl2().degree_polyhedron();
        assert_eq!(
            sq.vertices(),
            &[
                RatVector::from_i64s(&[0, 0]),
                RatVector::from_i64s(&[0, 1]),
                RatVector::from_i64s(&[1, 0]),
                RatVector::from_i64s(&[1, 1])
            ]
        );
        let t = examples::trivial_on(Cone::from_generators_i64(1, &[&[1]]).unwrap());
        let p = t.degree_polyhedron();
        assert_eq!(p.vertices(), &[RatVector::from_i64s(&[0])]);
        assert_eq!(p.rays(), &[lv(&[1])]);
    }

    #[test]
    fn properness() {
        let d = examples::sl2();
        assert_eq!(d.check_proper().verdict, Properness::Proper);
        let proj = d.with_base_kind(CurveKind::ProjectiveLine).unwrap();
        assert_eq!(proj.check_proper().verdict, Properness::Inconclusive);

        let sigma = Cone::from_generators_i64(2, &[&[1, 0], &[0, 1]]).unwrap();
        let coeff = TailedPolyhedron::new(
            2,
            vec![RatVector::from_i64s(&[1, 1])],
            sigma.generators().to_vec(),
        )
        .unwrap();
        let base = BaseCurve::new(CurveKind::ProjectiveLine, vec![CurvePoint::new("0")]).unwrap();
        let d = PolyhedralDivisor::new(base, 2, sigma, [("0".to_string(), coeff)].into()).unwrap();
        assert_eq!(d.check_proper().verdict, Properness::Proper);

        let empty_proj = examples::trivial_on(Cone::zero(2).unwrap())
            .with_base_kind(CurveKind::ProjectiveLine)
            .unwrap();
        assert_eq!(empty_proj.check_proper().verdict, Properness::Inconclusive);
    }

    #[test]
    fn trivial_loci() {
        let mut d = examples::sl2();
        assert!(d.trivial_locus().explicit.is_empty());
        let mut coeffs = d.coefficients().clone();
        coeffs.insert("2".into(), d.trivial_coefficient());
        let mut points = d.base().points().to_vec();
        points.push(CurvePoint::at("2", rat(2)));
        d = PolyhedralDivisor::new(
            BaseCurve::new(CurveKind::AffineLine, points).unwrap(),
            2,
            d.tail().clone(),
            coeffs,
        )
        .unwrap();
        let locus = d.trivial_locus();
        assert_eq!(locus.explicit, vec!["2".to_string()]);
        assert!(locus.unmarked_trivial);
        assert!(examples::trivial().trivial_locus().explicit.is_empty());
    }

    #[test]
    fn validates_construction() {
        let sl2 = examples::sl2();
        let wrong_tail = Cone::from_generators_i64(2, &[&[1, 0]]).unwrap();
        assert!(matches!(
            PolyhedralDivisor::new(sl2.base().clone(), 2, wrong_tail, sl2.coefficients().clone()),
            Err(Error::TailMismatch { .. })
        ));
        let line = Cone::from_generators_i64(2, &[&[1, 0], &[-1, 0]]).unwrap();
        assert_eq!(
            PolyhedralDivisor::new(sl2.base().clone(), 2, line, BTreeMap::new()).unwrap_err(),
            Error::NotPointed
        );
        let stray = [("9".to_string(), sl2.coefficient("0"))].into();
        assert!(matches!(
            PolyhedralDivisor::new(sl2.base().clone(), 2, sl2.tail().clone(), stray),
            Err(Error::UnknownPoint { .. })
        ));
    }

    #[test]
    fn curve_validation() {
        assert!(BaseCurve::new(
            CurveKind::AffineLine,
            vec![CurvePoint::new("a"), CurvePoint::new("a")]
        )
        .is_err());
        assert!(BaseCurve::new(
            CurveKind::AffineLine,
            vec![CurvePoint::at("a", rat(0)), CurvePoint::at("b", rat(0))]
        )
        .is_err());
        assert!(BaseCurve::new(CurveKind::AffineLine, vec![CurvePoint::new(INFINITY_LABEL)]).is_err());
        assert!(BaseCurve::new(CurveKind::ProjectiveLine, vec![CurvePoint::new(INFINITY_LABEL)]).is_ok());
        assert!(BaseCurve::new(CurveKind::AbstractAffine, vec![CurvePoint::at("p", rat(1))]).is_err());
    }
}
