//! Exact scalars, lattice and rational vectors, and the small amount of
//! rational linear algebra the cone code needs.

use std::fmt;
use std::ops::{Add, Deref, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, SeqAccess, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Exact rational scalar, always in lowest terms with a positive denominator.
pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p/q"` or `"p"`. Accepts the unicode minus sign.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let cleaned = s.trim().replace('\u{2212}', "-");
    let bad = || Error::Parse(format!("invalid rational {s:?}"));
    let (num, den) = match cleaned.split_once('/') {
        Some((n, d)) => (
            BigInt::from_str(n.trim()).map_err(|_| bad())?,
            BigInt::from_str(d.trim()).map_err(|_| bad())?,
        ),
        None => (BigInt::from_str(&cleaned).map_err(|_| bad())?, BigInt::one()),
    };
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rat::new(num, den))
}

/// Lowest-terms `"p/q"`, or `"p"` for integers.
pub fn format_rat(r: &Rat) -> String {
    r.to_string()
}

pub fn floor_int(r: &Rat) -> BigInt {
    r.floor().to_integer()
}

fn gcd_all<'a>(entries: impl Iterator<Item = &'a BigInt>) -> BigInt {
    entries.fold(BigInt::zero(), |g, x| g.gcd(x))
}

/// A vector of integers: an element of `M`, `N`, `Z x M` or `Z x N`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LatticeVector(Vec<BigInt>);

impl LatticeVector {
    pub fn new(entries: Vec<BigInt>) -> Self {
        LatticeVector(entries)
    }

    pub fn from_i64s(entries: &[i64]) -> Self {
        LatticeVector(entries.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn zero(rank: usize) -> Self {
        LatticeVector(vec![BigInt::zero(); rank])
    }

    pub fn unit(rank: usize, i: usize) -> Self {
        let mut v = Self::zero(rank);
        v.0[i] = BigInt::one();
        v
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<BigInt> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn dot(&self, other: &LatticeVector) -> BigInt {
        debug_assert_eq!(self.rank(), other.rank());
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn dot_rat(&self, other: &RatVector) -> Rat {
        debug_assert_eq!(self.rank(), other.rank());
        self.0
            .iter()
            .zip(other.iter())
            .map(|(a, b)| b * a)
            .fold(Rat::zero(), |acc, x| acc + x)
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        LatticeVector(self.0.iter().map(|x| x * k).collect())
    }

    /// Divides by the gcd of the entries. The zero vector is returned unchanged.
    pub fn primitive(&self) -> Self {
        let g = gcd_all(self.0.iter());
        if g.is_zero() || g.is_one() {
            return self.clone();
        }
        LatticeVector(self.0.iter().map(|x| x / &g).collect())
    }

    pub fn is_primitive(&self) -> bool {
        gcd_all(self.0.iter()).is_one()
    }

    /// Prepends a coordinate, embedding into `Z x N`.
    pub fn lift(&self, head: BigInt) -> Self {
        let mut entries = Vec::with_capacity(self.rank() + 1);
        entries.push(head);
        entries.extend(self.0.iter().cloned());
        LatticeVector(entries)
    }

    pub fn to_rat(&self) -> RatVector {
        RatVector(self.0.iter().cloned().map(Rat::from_integer).collect())
    }
}

impl Deref for LatticeVector {
    type Target = [BigInt];
    fn deref(&self) -> &[BigInt] {
        &self.0
    }
}

impl From<Vec<BigInt>> for LatticeVector {
    fn from(v: Vec<BigInt>) -> Self {
        LatticeVector(v)
    }
}

impl Add for &LatticeVector {
    type Output = LatticeVector;
    fn add(self, rhs: &LatticeVector) -> LatticeVector {
        LatticeVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &LatticeVector {
    type Output = LatticeVector;
    fn sub(self, rhs: &LatticeVector) -> LatticeVector {
        LatticeVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &LatticeVector {
    type Output = LatticeVector;
    fn neg(self) -> LatticeVector {
        LatticeVector(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// A vector of rationals: an element of `N_Q` or `M_Q`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RatVector(Vec<Rat>);

impl RatVector {
    pub fn new(entries: Vec<Rat>) -> Self {
        RatVector(entries)
    }

    pub fn from_i64s(entries: &[i64]) -> Self {
        RatVector(entries.iter().map(|&x| rat(x)).collect())
    }

    pub fn zero(rank: usize) -> Self {
        RatVector(vec![Rat::zero(); rank])
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[Rat] {
        &self.0
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(Rat::is_integer)
    }

    pub fn to_lattice(&self) -> Option<LatticeVector> {
        self.is_integral()
            .then(|| LatticeVector(self.0.iter().map(Rat::to_integer).collect()))
    }

    /// Least common multiple of the denominators.
    pub fn denominator(&self) -> BigInt {
        self.0
            .iter()
            .fold(BigInt::one(), |l, x| l.lcm(x.denom()))
    }

    /// The primitive lattice vector on the ray through `self`.
    pub fn primitive_direction(&self) -> LatticeVector {
        let d = self.denominator();
        LatticeVector(
            self.0
                .iter()
                .map(|x| (x * Rat::from_integer(d.clone())).to_integer())
                .collect(),
        )
        .primitive()
    }

    /// The point `(1, self)` scaled to a primitive lattice vector.
    pub fn homogenized(&self) -> LatticeVector {
        let mut entries = Vec::with_capacity(self.rank() + 1);
        entries.push(Rat::one());
        entries.extend(self.0.iter().cloned());
        RatVector(entries).primitive_direction()
    }
}

impl Deref for RatVector {
    type Target = [Rat];
    fn deref(&self) -> &[Rat] {
        &self.0
    }
}

impl From<Vec<Rat>> for RatVector {
    fn from(v: Vec<Rat>) -> Self {
        RatVector(v)
    }
}

impl Add for &RatVector {
    type Output = RatVector;
    fn add(self, rhs: &RatVector) -> RatVector {
        RatVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl fmt::Display for RatVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

// JSON: lattice entries are integers (strings if they overflow i64);
// rational entries are "p/q" strings, with plain integers accepted on input.

fn serialize_bigint<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    match x.to_i64() {
        Some(v) => s.serialize_i64(v),
        None => s.serialize_str(&x.to_string()),
    }
}

impl Serialize for LatticeVector {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        struct Entry<'a>(&'a BigInt);
        impl Serialize for Entry<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                serialize_bigint(self.0, s)
            }
        }
        let mut seq = s.serialize_seq(Some(self.0.len()))?;
        for x in &self.0 {
            seq.serialize_element(&Entry(x))?;
        }
        seq.end()
    }
}

impl Serialize for RatVector {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.0.iter().map(format_rat))
    }
}

struct ScalarVisitor<T>(std::marker::PhantomData<T>);

trait ScalarParse: Sized {
    fn from_i128(x: i128) -> Option<Self>;
    fn from_text(s: &str) -> Option<Self>;
    const WHAT: &'static str;
}

impl ScalarParse for BigInt {
    fn from_i128(x: i128) -> Option<Self> {
        Some(BigInt::from(x))
    }
    fn from_text(s: &str) -> Option<Self> {
        BigInt::from_str(s.trim()).ok()
    }
    const WHAT: &'static str = "an integer";
}

impl ScalarParse for Rat {
    fn from_i128(x: i128) -> Option<Self> {
        Some(Rat::from_integer(BigInt::from(x)))
    }
    fn from_text(s: &str) -> Option<Self> {
        parse_rat(s).ok()
    }
    const WHAT: &'static str = "a rational string \"p/q\" or an integer";
}

impl<'de, T: ScalarParse> Visitor<'de> for ScalarVisitor<T> {
    type Value = T;
    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str(T::WHAT)
    }
    fn visit_i64<E: de::Error>(self, v: i64) -> Result<T, E> {
        T::from_i128(v as i128).ok_or_else(|| E::custom("bad scalar"))
    }
    fn visit_u64<E: de::Error>(self, v: u64) -> Result<T, E> {
        T::from_i128(v as i128).ok_or_else(|| E::custom("bad scalar"))
    }
    fn visit_f64<E: de::Error>(self, v: f64) -> Result<T, E> {
        Err(E::custom(format!(
            "floating-point value {v} not allowed; use {}",
            T::WHAT
        )))
    }
    fn visit_str<E: de::Error>(self, v: &str) -> Result<T, E> {
        T::from_text(v).ok_or_else(|| E::custom(format!("expected {}, got {v:?}", T::WHAT)))
    }
}

struct Scalar<T>(T);

impl<'de, T: ScalarParse> Deserialize<'de> for Scalar<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        d.deserialize_any(ScalarVisitor(std::marker::PhantomData))
            .map(Scalar)
    }
}

struct SeqVisitor<T>(std::marker::PhantomData<T>);

impl<'de, T: ScalarParse> Visitor<'de> for SeqVisitor<T> {
    type Value = Vec<T>;
    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        write!(f, "an array of {}", T::WHAT)
    }
    fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Vec<T>, A::Error> {
        let mut out = Vec::new();
        while let Some(Scalar(x)) = seq.next_element::<Scalar<T>>()? {
            out.push(x);
        }
        Ok(out)
    }
}

impl<'de> Deserialize<'de> for LatticeVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        d.deserialize_seq(SeqVisitor::<BigInt>(std::marker::PhantomData))
            .map(LatticeVector)
    }
}

impl<'de> Deserialize<'de> for RatVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        d.deserialize_seq(SeqVisitor::<Rat>(std::marker::PhantomData))
            .map(RatVector)
    }
}

/// Serde adapter for a single `Rat` stored as a `"p/q"` string.
pub mod rat_string {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rat, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rat(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        Scalar::<Rat>::deserialize(d).map(|s| s.0)
    }
}

/// Row reduction over `Q`. Returns the nonzero rows of the reduced row
/// echelon form together with the pivot columns.
pub fn rref(rows: &[Vec<Rat>], ncols: usize) -> (Vec<Vec<Rat>>, Vec<usize>) {
    let mut m: Vec<Vec<Rat>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..ncols {
                    let delta = &f * &m[r][j];
                    m[i][j] -= delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank_of(rows: &[Vec<Rat>], ncols: usize) -> usize {
    rref(rows, ncols).1.len()
}

pub fn rat_rows(vs: &[LatticeVector]) -> Vec<Vec<Rat>> {
    vs.iter().map(|v| v.to_rat().0).collect()
}

/// A basis of `{x : <row, x> = 0 for all rows}`, as primitive lattice vectors.
pub fn nullspace(rows: &[Vec<Rat>], ncols: usize) -> Vec<LatticeVector> {
    let (m, pivots) = rref(rows, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![Rat::zero(); ncols];
            x[f] = Rat::one();
            for (row, &p) in m.iter().zip(&pivots) {
                x[p] = -row[f].clone();
            }
            RatVector(x).primitive_direction()
        })
        .collect()
}

/// Canonical basis of the row space: reduced echelon rows, primitivized.
pub fn canonical_basis(vs: &[LatticeVector], ncols: usize) -> Vec<LatticeVector> {
    let (m, _) = rref(&rat_rows(vs), ncols);
    m.into_iter()
        .map(|row| RatVector(row).primitive_direction())
        .collect()
}

/// Orthogonal projection of `v` onto the complement of `span(basis)`.
pub fn project_out(v: &LatticeVector, basis: &[LatticeVector]) -> RatVector {
    let n = v.rank();
    let mut out = v.to_rat();
    if basis.is_empty() {
        return out;
    }
    // Solve (B B^T) c = B v, then v - B^T c.
    let k = basis.len();
    let mut aug: Vec<Vec<Rat>> = (0..k)
        .map(|i| {
            let mut row: Vec<Rat> = (0..k)
                .map(|j| Rat::from_integer(basis[i].dot(&basis[j])))
                .collect();
            row.push(Rat::from_integer(basis[i].dot(v)));
            row
        })
        .collect();
    let (reduced, pivots) = rref(&aug, k);
    aug = reduced;
    debug_assert_eq!(pivots.len(), k, "projection basis must be independent");
    for (row, &p) in aug.iter().zip(&pivots) {
        let c = &row[k];
        for j in 0..n {
            out.0[j] -= c * Rat::from_integer(basis[p][j].clone());
        }
    }
    out
}

/// `true` when the integer entries have absolute value at most `bound`.
pub fn within_box(v: &[BigInt], bound: u32) -> bool {
    let b = BigInt::from(bound);
    v.iter().all(|x| x.abs() <= b)
}
