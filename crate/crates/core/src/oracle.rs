//! Brute-force reference implementations.
//!
//! Everything here is slow and written without calling the double
//! description code, the polyhedron reductions or the support function
//! of the main modules. Tests compare the two paths.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::cone::Cone;
use crate::lattice::{LatticeVector, RatVector};
use crate::polyhedron::{SupportValue, TailedPolyhedron};

/// Lattice points of `[-bound, bound]^rank` passing a predicate.
#[derive(Clone, Debug)]
pub struct BoxSample {
    pub rank: usize,
    pub bound: u32,
    pub points: Vec<Vec<i64>>,
}

impl BoxSample {
    pub fn collect(rank: usize, bound: u32, mut keep: impl FnMut(&[i64]) -> bool) -> BoxSample {
        let b = bound as i64;
        let mut points = Vec::new();
        let mut cur = vec![-b; rank];
        loop {
            if keep(&cur) {
                points.push(cur.clone());
            }
            let mut i = 0;
            loop {
                if i == rank {
                    return BoxSample {
                        rank,
                        bound,
                        points,
                    };
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
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn small(v: &LatticeVector) -> Vec<i64> {
    v.iter()
        .map(|x| x.to_i64().expect("oracle inputs are small"))
        .collect()
}

/// Rank of an integer matrix by fraction-free elimination.
fn int_rank(rows: &[Vec<i64>], ncols: usize) -> usize {
    let mut m: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let mut rank = 0;
    for c in 0..ncols {
        let Some(p) = (rank..m.len()).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(rank, p);
        for i in rank + 1..m.len() {
            if m[i][c] != 0 {
                let (f, g) = (m[rank][c], m[i][c]);
                for j in 0..ncols {
                    m[i][j] = m[i][j] * f - m[rank][j] * g;
                }
                let d = m[i].iter().fold(0i128, |acc, &x| {
                    let (mut a, mut b) = (acc.abs(), x.abs());
                    while b != 0 {
                        (a, b) = (b, a % b);
                    }
                    a
                });
                if d > 1 {
                    for x in m[i].iter_mut() {
                        *x /= d;
                    }
                }
            }
        }
        rank += 1;
    }
    rank
}

/// The dual of `c`, found by enumerating primitive normals in
/// `[-bound, bound]^rank` and keeping those that expose a facet of `c` or
/// vanish on all of it.
pub fn oracle_dual(c: &Cone, bound: u32) -> Cone {
    let rank = c.rank();
    let gens: Vec<Vec<i64>> = c.generators().iter().map(small).collect();
    let span = int_rank(&gens, rank);
    let sample = BoxSample::collect(rank, bound, |u| {
        if u.iter().fold(0, |g, &x| gcd(g, x)) != 1 {
            return false;
        }
        let mut tight = Vec::new();
        for g in &gens {
            let s: i64 = g.iter().zip(u).map(|(a, b)| a * b).sum();
            if s < 0 {
                return false;
            }
            if s == 0 {
                tight.push(g.clone());
            }
        }
        let r = int_rank(&tight, rank);
        r == span || r + 1 == span
    });
    let kept: Vec<LatticeVector> = sample
        .points
        .iter()
        .map(|p| LatticeVector::from_i64s(p))
        .collect();
    Cone::from_generators(rank, &kept).expect("oracle points share the cone rank")
}

/// Grows the bound until two consecutive oracle duals agree.
pub fn oracle_dual_stable(c: &Cone, start: u32, cap: u32) -> Option<(Cone, u32)> {
    let mut prev = oracle_dual(c, start);
    for b in start + 1..=cap {
        let next = oracle_dual(c, b);
        if next == prev {
            return Some((next, b - 1));
        }
        prev = next;
    }
    None
}

/// Two literal loops: rays for unboundedness, vertices for the minimum.
pub fn oracle_support_min(u: &LatticeVector, p: &TailedPolyhedron) -> SupportValue {
    for ray in p.rays() {
        let mut s = BigInt::zero();
        for i in 0..u.rank() {
            s += &u[i] * &ray[i];
        }
        if s < BigInt::zero() {
            return SupportValue::NegInfinity;
        }
    }
    let mut best: Option<BigRational> = None;
    for v in p.vertices() {
        let mut s = BigRational::zero();
        for i in 0..u.rank() {
            s += &v[i] * BigRational::from_integer(u[i].clone());
        }
        best = match best {
            Some(b) if b <= s => Some(b),
            _ => Some(s),
        };
    }
    SupportValue::Finite(best.expect("nonempty polyhedron"))
}

/// Solves a square system exactly; `None` when singular.
fn solve(mut a: Vec<Vec<BigRational>>, mut b: Vec<BigRational>) -> Option<Vec<BigRational>> {
    let n = b.len();
    for c in 0..n {
        let p = (c..n).find(|&i| !a[i][c].is_zero())?;
        a.swap(c, p);
        b.swap(c, p);
        for i in 0..n {
            if i != c && !a[i][c].is_zero() {
                let f = &a[i][c] / &a[c][c];
                for j in c..n {
                    let t = &f * &a[c][j];
                    a[i][j] -= t;
                }
                let t = &f * &b[c];
                b[i] -= t;
            }
        }
    }
    Some((0..n).map(|i| &b[i] / &a[i][i]).collect())
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// `x` in `conv(V) + pos(R)` by Caratheodory: some linearly independent
/// subset of the lifted generators `(1, v)`, `(0, r)` must express `(1, x)`
/// with nonnegative coefficients.
fn oracle_point_in(p: &TailedPolyhedron, x: &[BigRational]) -> bool {
    let n = x.len();
    let mut gens: Vec<Vec<BigRational>> = Vec::new();
    for v in p.vertices() {
        let mut g = vec![BigRational::one()];
        g.extend(v.iter().cloned());
        gens.push(g);
    }
    for r in p.rays() {
        let mut g = vec![BigRational::zero()];
        g.extend(r.iter().map(|e| BigRational::from_integer(e.clone())));
        gens.push(g);
    }
    let mut target = vec![BigRational::one()];
    target.extend(x.iter().cloned());
    let dim = n + 1;
    for k in 1..=dim.min(gens.len()) {
        for sub in subsets(gens.len(), k) {
            // Least-squares normal equations restricted to the subset; an
            // exact solution that reproduces the target is a certificate.
            let a: Vec<Vec<BigRational>> = (0..k)
                .map(|i| {
                    (0..k)
                        .map(|j| {
                            (0..dim)
                                .map(|t| &gens[sub[i]][t] * &gens[sub[j]][t])
                                .fold(BigRational::zero(), |s, y| s + y)
                        })
                        .collect()
                })
                .collect();
            let b: Vec<BigRational> = (0..k)
                .map(|i| {
                    (0..dim)
                        .map(|t| &gens[sub[i]][t] * &target[t])
                        .fold(BigRational::zero(), |s, y| s + y)
                })
                .collect();
            let Some(coef) = solve(a, b) else { continue };
            if coef.iter().any(|c| c.is_negative()) {
                continue;
            }
            let reproduces = (0..dim).all(|t| {
                let s = (0..k)
                    .map(|i| &coef[i] * &gens[sub[i]][t])
                    .fold(BigRational::zero(), |s, y| s + y);
                s == target[t]
            });
            if reproduces {
                return true;
            }
        }
    }
    false
}

fn grid(lo: &BigRational, hi: &BigRational, den: i64) -> Vec<BigRational> {
    let d = BigInt::from(den);
    let start = (lo * BigRational::from_integer(d.clone())).floor().to_integer();
    let end = (hi * BigRational::from_integer(d.clone())).ceil().to_integer();
    let mut out = Vec::new();
    let mut k = start;
    while k <= end {
        out.push(BigRational::new(k.clone(), d.clone()));
        k += 1;
    }
    out
}

/// Decides `x in a + b` for rank at most 2.
///
/// `Some(false)` comes with a direction `w` with
/// `<w, x> < min <w, a> + min <w, b>`, searched in a box large enough to
/// contain every facet normal. `Some(true)` comes with a decomposition
/// `x = y + z` found on the grid of step `1/grid_den`; `None` means no such
/// decomposition exists on that grid.
pub fn oracle_minkowski_membership(
    a: &TailedPolyhedron,
    b: &TailedPolyhedron,
    x: &RatVector,
    grid_den: i64,
) -> Option<bool> {
    let n = x.rank();
    assert!(n <= 2, "oracle membership supports rank <= 2");

    // In rank <= 2 every facet normal of a + b is perpendicular to a ray or
    // to a difference of two vertices of a or of b, so it has no larger
    // entries than those primitive directions.
    let mut bound = BigInt::one();
    for p in [a, b] {
        let vs = p.vertices();
        let mut dirs: Vec<LatticeVector> = p.rays().to_vec();
        for i in 0..vs.len() {
            for j in i + 1..vs.len() {
                let diff = RatVector::new((0..n).map(|k| &vs[i][k] - &vs[j][k]).collect());
                dirs.push(diff.primitive_direction());
            }
        }
        for d in dirs {
            for e in d.iter() {
                bound = bound.max(e.abs());
            }
        }
    }
    let bound = u32::try_from(bound).expect("small direction entries");
    let directions = BoxSample::collect(n, bound, |w| w.iter().any(|&c| c != 0));
    for w in &directions.points {
        let w = LatticeVector::from_i64s(w);
        let (SupportValue::Finite(ma), SupportValue::Finite(mb)) =
            (oracle_support_min(&w, a), oracle_support_min(&w, b))
        else {
            continue;
        };
        let wx = x
            .iter()
            .zip(w.iter())
            .map(|(xi, wi)| xi * BigRational::from_integer(wi.clone()))
            .fold(BigRational::zero(), |s, y| s + y);
        if wx < ma + mb {
            return Some(false);
        }
    }

    let abs_max = |vs: &mut dyn Iterator<Item = BigRational>| {
        vs.map(|v| v.abs()).max().unwrap_or_else(BigRational::zero)
    };
    let reach = if a.is_compact() {
        BigRational::zero()
    } else {
        abs_max(&mut x.iter().cloned())
            + abs_max(&mut b.vertices().iter().flat_map(|v| v.iter().cloned()))
            + abs_max(&mut a.vertices().iter().flat_map(|v| v.iter().cloned()))
            + BigRational::one()
    };
    let ranges: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let lo = a.vertices().iter().map(|v| v[i].clone()).min().unwrap() - &reach;
            let hi = a.vertices().iter().map(|v| v[i].clone()).max().unwrap() + &reach;
            grid(&lo, &hi, grid_den)
        })
        .collect();
    let mut idx = vec![0usize; n];
    loop {
        let y: Vec<BigRational> = (0..n).map(|i| ranges[i][idx[i]].clone()).collect();
        let z: Vec<BigRational> = (0..n).map(|i| &x[i] - &y[i]).collect();
        if oracle_point_in(a, &y) && oracle_point_in(b, &z) {
            return Some(true);
        }
        let mut i = 0;
        loop {
            if i == n {
                return None;
            }
            idx[i] += 1;
            if idx[i] < ranges[i].len() {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{rat, ratio};

    fn segment(i: usize) -> TailedPolyhedron {
        let mut e = vec![0i64, 0];
        e[i] = 1;
        TailedPolyhedron::new(
            2,
            vec![RatVector::from_i64s(&[0, 0]), RatVector::from_i64s(&e)],
            vec![],
        )
        .unwrap()
    }

    #[test]
    fn dual_of_wedge() {
        let c = Cone::from_generators_i64(2, &[&[1, 0], &[1, 1]]).unwrap();
        let d = oracle_dual(&c, 3);
        assert_eq!(d, Cone::from_generators_i64(2, &[&[0, 1], &[1, -1]]).unwrap());
    }

    #[test]
    fn orthant_and_zero() {
        let o = Cone::from_generators_i64(2, &[&[1, 0], &[0, 1]]).unwrap();
        assert_eq!(oracle_dual(&o, 2), o);
        let z = Cone::zero(2).unwrap();
        assert_eq!(oracle_dual(&z, 1), Cone::full(2).unwrap());
    }

    #[test]
    fn rank_three_plane_cone() {
        let c = Cone::from_generators_i64(3, &[&[1, 0, 0], &[1, 1, 0]]).unwrap();
        let expect = Cone::from_generators_i64(
            3,
            &[&[0, 1, 0], &[1, -1, 0], &[0, 0, 1], &[0, 0, -1]],
        )
        .unwrap();
        assert_eq!(oracle_dual(&c, 3), expect);
    }

    #[test]
    fn support_loops() {
        let s = segment(0);
        assert_eq!(
            oracle_support_min(&LatticeVector::from_i64s(&[-1, 0]), &s),
            SupportValue::Finite(rat(-1))
        );
        let ray = TailedPolyhedron::new(
            2,
            vec![RatVector::from_i64s(&[0, 0])],
            vec![LatticeVector::from_i64s(&[1, 0])],
        )
        .unwrap();
        assert_eq!(
            oracle_support_min(&LatticeVector::from_i64s(&[-1, 0]), &ray),
            SupportValue::NegInfinity
        );
    }

    #[test]
    fn minkowski_membership() {
        let (a, b) = (segment(0), segment(1));
        assert_eq!(
            oracle_minkowski_membership(&a, &b, &RatVector::from_i64s(&[1, 1]), 1),
            Some(true)
        );
        assert_eq!(
            oracle_minkowski_membership(&a, &b, &RatVector::from_i64s(&[2, 0]), 1),
            Some(false)
        );
        let half = RatVector::new(vec![ratio(1, 2), ratio(1, 2)]);
        assert_eq!(oracle_minkowski_membership(&a, &b, &half, 2), Some(true));
        assert_eq!(oracle_minkowski_membership(&a, &b, &half, 1), None);
    }
}
