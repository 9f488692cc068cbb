//! The monomial semigroup `{(k, u) : u in sigma^v, k >= -min <u, Delta>}`
//! of the local toric model at a point, its Hilbert basis, and an
//! enumeration-based computation of its dual cone.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::cone::Cone;
use crate::divisor::PolyhedralDivisor;
use crate::error::{Error, Result};
use crate::lattice::{floor_int, LatticeVector, RatVector};
use crate::polyhedron::{SupportValue, TailedPolyhedron};

pub const DEFAULT_BOX_CAP: u32 = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialSemigroup {
    coefficient: TailedPolyhedron,
}

impl MonomialSemigroup {
    pub fn new(coefficient: TailedPolyhedron) -> Self {
        MonomialSemigroup { coefficient }
    }

    /// The semigroup at `label`; unmarked points carry the trivial coefficient.
    pub fn at(d: &PolyhedralDivisor, label: &str) -> Self {
        MonomialSemigroup::new(d.coefficient(label))
    }

    pub fn coefficient(&self) -> &TailedPolyhedron {
        &self.coefficient
    }

    /// Rank of `Z x M`.
    pub fn rank(&self) -> usize {
        self.coefficient.rank() + 1
    }

    fn in_dual_tail(&self, u: &[BigInt]) -> bool {
        self.coefficient
            .rays()
            .iter()
            .all(|w| !w.iter().zip(u).map(|(a, b)| a * b).sum::<BigInt>().is_negative())
    }

    /// `-floor(min <u, Delta>)`, the least `k` with `(k, u)` in the semigroup.
    pub fn graded_exponent(&self, u: &LatticeVector) -> Result<BigInt> {
        if u.rank() != self.coefficient.rank() {
            return Err(Error::RankMismatch {
                expected: self.coefficient.rank(),
                got: u.rank(),
            });
        }
        if let Some(ray) = self
            .coefficient
            .rays()
            .iter()
            .find(|w| u.dot(w).is_negative())
        {
            return Err(Error::NotInDualTail {
                weight: u.to_string(),
                ray: ray.to_string(),
            });
        }
        match self.coefficient.support_min(u)? {
            SupportValue::Finite(m) => Ok(-floor_int(&m)),
            SupportValue::NegInfinity => unreachable!("u is nonnegative on the tail"),
        }
    }

    /// `(k, u)` belongs iff `u` is in the dual of the tail and `k >= -min <u, Delta>`.
    pub fn contains(&self, v: &LatticeVector) -> Result<bool> {
        if v.rank() != self.rank() {
            return Err(Error::RankMismatch {
                expected: self.rank(),
                got: v.rank(),
            });
        }
        let u = LatticeVector::new(v[1..].to_vec());
        if !self.in_dual_tail(&u) {
            return Ok(false);
        }
        match self.coefficient.support_min(&u)? {
            SupportValue::Finite(m) => Ok(crate::lattice::Rat::from_integer(v[0].clone()) >= -m),
            SupportValue::NegInfinity => Ok(false),
        }
    }

    /// All nonzero semigroup points in `[-bound, bound]^rank`, sorted.
    pub fn box_points(&self, bound: u32) -> Vec<LatticeVector> {
        let mut out = Vec::new();
        for_each_box_point(self.rank(), bound, |p| {
            if !p.is_zero() && self.contains(p).expect("rank matches") {
                out.push(p.clone());
            }
        });
        out.sort();
        out
    }

    /// For every weight `u` of `M` in `[-bound, bound]^n` that pairs
    /// nonnegatively with the tail, the generator `(-floor min <u, Delta>, u)`
    /// of the graded piece `S_u`; plus `(1, 0)` for the local parameter.
    pub fn graded_generators(&self, bound: u32) -> Vec<LatticeVector> {
        let n = self.coefficient.rank();
        let mut out = vec![LatticeVector::unit(n + 1, 0)];
        for_each_box_point(n, bound, |u| {
            if u.is_zero() || !self.in_dual_tail(u) {
                return;
            }
            let k = self.graded_exponent(u).expect("u is in the dual tail");
            out.push(u.lift(k));
        });
        out
    }
}

fn for_each_box_point(rank: usize, bound: u32, mut f: impl FnMut(&LatticeVector)) {
    let b = bound as i64;
    let mut cur = vec![-b; rank];
    loop {
        f(&LatticeVector::from_i64s(&cur));
        let mut i = 0;
        loop {
            if i == rank {
                return;
            }
            if cur[i] < b {
                cur[i] += 1;
                break;
            }
            cur[i] = -b;
            i += 1;
        }
    }
}

pub fn semigroup_member(s: &MonomialSemigroup, v: &LatticeVector) -> Result<bool> {
    s.contains(v)
}

/// `-floor(min <u, Delta_P>)`: `S_u` is generated over the local ring by `s^e`.
pub fn graded_piece_exponent(d: &PolyhedralDivisor, label: &str, u: &LatticeVector) -> Result<BigInt> {
    d.check_weight(u)?;
    MonomialSemigroup::at(d, label).graded_exponent(u)
}

/// The cone in `Z x N` dual to the cone spanned by the graded-piece
/// generators with weights in the box. It never consults the homogenization.
pub fn cone_from_semigroup_sample(s: &MonomialSemigroup, bound: u32) -> Cone {
    Cone::from_generators(s.rank(), &s.graded_generators(bound))
        .expect("generators share the semigroup rank")
        .dual()
}

/// Generalized cross product of `rank - 1` vectors in `Z^rank`.
fn cofactor(rows: &[&LatticeVector], rank: usize) -> LatticeVector {
    let entries = (0..rank)
        .map(|skip| {
            let m: Vec<Vec<BigInt>> = rows
                .iter()
                .map(|r| (0..rank).filter(|&c| c != skip).map(|c| r[c].clone()).collect())
                .collect();
            let d = determinant(m);
            if skip % 2 == 0 {
                d
            } else {
                -d
            }
        })
        .collect();
    LatticeVector::new(entries)
}

/// Bareiss fraction-free determinant.
fn determinant(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(p) => {
                    m.swap(k, p);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

fn subsets(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if cur.len() == k {
        out.push(cur.clone());
        return;
    }
    for i in start..n {
        cur.push(i);
        subsets(n, k, i + 1, cur, out);
        cur.pop();
    }
}

/// A weight box that provably contains the weight part of a generating set
/// of the semigroup's cone.
///
/// Every extreme ray of that cone, and every vector of a spanning set of its
/// lineality space, is a cofactor vector of `rank - 1` vectors taken from the
/// lifted vertices `(1, v)`, the lifted rays `(0, w)` and the unit vectors.
/// The bound is the largest weight entry over all such primitive cofactors.
pub fn sufficient_weight_bound(s: &MonomialSemigroup) -> u32 {
    let rank = s.rank();
    let mut pool: Vec<LatticeVector> = s
        .coefficient
        .vertices()
        .iter()
        .map(RatVector::homogenized)
        .collect();
    pool.extend(s.coefficient.rays().iter().map(|w| w.lift(BigInt::zero())));
    pool.extend((0..rank).map(|i| LatticeVector::unit(rank, i)));
    let mut subs = Vec::new();
    subsets(pool.len(), rank - 1, 0, &mut Vec::new(), &mut subs);
    let mut best = BigInt::one();
    for sub in subs {
        let rows: Vec<&LatticeVector> = sub.iter().map(|&i| &pool[i]).collect();
        let c = cofactor(&rows, rank).primitive();
        for x in &c[1..] {
            if x.abs() > best {
                best = x.abs();
            }
        }
    }
    u32::try_from(best).unwrap_or(u32::MAX)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Stabilized {
    pub cone: Cone,
    pub bound: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Undetermined {
    pub needed_bound: u32,
    pub cap: u32,
    pub reason: String,
}

/// Computes the sample cone at boxes `b` and `b + 1`, starting from the
/// sufficient bound and growing until they agree or `b + 1` exceeds `cap`.
pub fn stabilized_cone(s: &MonomialSemigroup, cap: u32) -> std::result::Result<Stabilized, Undetermined> {
    let start = sufficient_weight_bound(s).max(1);
    if start + 1 > cap {
        return Err(Undetermined {
            needed_bound: start,
            cap,
            reason: format!("weight box {start} and {} needed, cap is {cap}", start + 1),
        });
    }
    let mut prev = cone_from_semigroup_sample(s, start);
    for b in start + 1..=cap {
        let next = cone_from_semigroup_sample(s, b);
        if next == prev {
            return Ok(Stabilized {
                cone: prev,
                bound: b - 1,
            });
        }
        prev = next;
    }
    Err(Undetermined {
        needed_bound: start,
        cap,
        reason: format!("sample cones did not stabilize between box {start} and cap {cap}"),
    })
}

/// Irreducible elements of the semigroup found in a box.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HilbertBasis {
    pub elements: Vec<LatticeVector>,
    #[serde(rename = "box")]
    pub box_bound: u32,
    pub complete: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<LatticeVector>,
}

/// Echelon lattice basis of the integer span of `vs`.
fn lattice_basis(vs: &[LatticeVector], rank: usize) -> Vec<LatticeVector> {
    let mut rows: Vec<LatticeVector> = vs.iter().filter(|v| !v.is_zero()).cloned().collect();
    let mut basis: Vec<LatticeVector> = Vec::new();
    for col in 0..rank {
        loop {
            let nz: Vec<usize> = (0..rows.len()).filter(|&i| !rows[i][col].is_zero()).collect();
            if nz.len() <= 1 {
                if let Some(&i) = nz.first() {
                    let mut p = rows.remove(i);
                    if p[col].is_negative() {
                        p = -&p;
                    }
                    basis.push(p);
                }
                break;
            }
            let &piv = nz.iter().min_by_key(|&&i| rows[i][col].abs()).expect("nonempty");
            let pivot = rows[piv].clone();
            for &i in &nz {
                if i != piv {
                    let q = rows[i][col].div_floor(&pivot[col]);
                    rows[i] = &rows[i] - &pivot.scale(&q);
                }
            }
            rows.retain(|r| !r.is_zero());
        }
    }
    // Reduce entries above each pivot into [0, pivot).
    let pivots: Vec<usize> = basis
        .iter()
        .map(|b| b.iter().position(|x| !x.is_zero()).expect("nonzero"))
        .collect();
    for j in 0..basis.len() {
        for i in 0..j {
            let c = pivots[j];
            let q = basis[i][c].div_floor(&basis[j][c]);
            if !q.is_zero() {
                basis[i] = &basis[i] - &basis[j].scale(&q);
            }
        }
    }
    basis
}

fn in_lattice(x: &LatticeVector, basis: &[LatticeVector]) -> bool {
    let mut r = x.clone();
    for b in basis {
        let c = b.iter().position(|e| !e.is_zero()).expect("nonzero");
        let (q, rem) = r[c].div_rem(&b[c]);
        if !rem.is_zero() {
            return false;
        }
        r = &r - &b.scale(&q);
    }
    r.is_zero()
}

struct Decomposer<'a> {
    s: &'a MonomialSemigroup,
    grading: &'a LatticeVector,
    steps: &'a [LatticeVector],
    units: &'a [LatticeVector],
    memo: HashMap<LatticeVector, bool>,
}

impl Decomposer<'_> {
    fn decomposes(&mut self, x: &LatticeVector) -> bool {
        let h = self.grading.dot(x);
        if h.is_zero() {
            return in_lattice(x, self.units);
        }
        if let Some(&v) = self.memo.get(x) {
            return v;
        }
        let mut ok = false;
        for b in self.steps {
            if self.grading.dot(b) > h {
                continue;
            }
            let y = x - b;
            if self.s.contains(&y).expect("rank matches") && self.decomposes(&y) {
                ok = true;
                break;
            }
        }
        self.memo.insert(x.clone(), ok);
        ok
    }
}

/// Irreducible elements of the semigroup inside `[-bound, bound]^rank`.
///
/// Units are reported as `+-` a lattice basis of the unit group. Non-units
/// are irreducible when they are not a sum of two non-units; one
/// representative per class modulo units is kept (smallest norm, then
/// lexicographic). The result is flagged incomplete, with a witness, when
/// its cone misses part of the semigroup cone or some box point fails to
/// decompose over it.
pub fn hilbert_basis(s: &MonomialSemigroup, bound: u32) -> HilbertBasis {
    let rank = s.rank();
    let delta = s.coefficient.homogenize();
    let grading = delta
        .generators()
        .iter()
        .fold(LatticeVector::zero(rank), |acc, g| &acc + g);
    let points = s.box_points(bound);

    let (units, nonunits): (Vec<LatticeVector>, Vec<LatticeVector>) =
        points.into_iter().partition(|p| grading.dot(p).is_zero());

    let irreducible: Vec<LatticeVector> = nonunits
        .iter()
        .filter(|x| {
            let hx = grading.dot(x);
            !nonunits.iter().any(|y| {
                grading.dot(y) < hx && s.contains(&(*x - y)).expect("rank matches")
            })
        })
        .cloned()
        .collect();

    let same_class = |a: &LatticeVector, b: &LatticeVector| {
        let d = a - b;
        delta.generators().iter().all(|g| g.dot(&d).is_zero())
    };
    let norm = |v: &LatticeVector| v.iter().map(|x| x * x).sum::<BigInt>();
    let mut reps: Vec<LatticeVector> = Vec::new();
    for x in &irreducible {
        match reps.iter().position(|r| same_class(r, x)) {
            Some(i) => {
                if (norm(x), x) < (norm(&reps[i]), &reps[i]) {
                    reps[i] = x.clone();
                }
            }
            None => reps.push(x.clone()),
        }
    }

    let unit_basis = lattice_basis(&units, rank);
    let mut elements = reps.clone();
    for u in &unit_basis {
        elements.push(u.clone());
        elements.push(-u);
    }
    elements.sort();
    elements.dedup();

    let mut witness = None;
    let spanned = Cone::from_generators(rank, &elements).expect("rank matches");
    let target = delta.dual();
    if let Some(g) = target
        .generators()
        .iter()
        .find(|g| !spanned.contains_lattice(g).expect("rank matches"))
    {
        witness = Some(g.clone());
    }
    if witness.is_none() {
        let mut dec = Decomposer {
            s,
            grading: &grading,
            steps: &reps,
            units: &unit_basis,
            memo: HashMap::new(),
        };
        witness = units
            .iter()
            .chain(&nonunits)
            .find(|p| !dec.decomposes(p))
            .cloned();
    }

    HilbertBasis {
        elements,
        box_bound: bound,
        complete: witness.is_none(),
        witness,
    }
}
