use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use polydiv::cone::Cone;
use polydiv::divisor::{BaseCurve, CurveKind, CurvePoint, PolyhedralDivisor, Properness};
use polydiv::lattice::{ratio, LatticeVector, Rat, RatVector};
use polydiv::oracle::{oracle_dual, oracle_minkowski_membership, oracle_support_min};
use polydiv::polyhedron::{SupportValue, TailedPolyhedron};
use polydiv::semigroup::{
    cone_from_semigroup_sample, hilbert_basis, stabilized_cone, sufficient_weight_bound,
    MonomialSemigroup,
};
use polydiv::toroidal::{
    canonical_point_set, embedded_tail, fan_from_divisor, fan_isomorphic, verify_theorem1,
    zero_slice,
};
use proptest::collection::vec;
use proptest::prelude::*;

fn lattice(x: &[i64]) -> LatticeVector {
    LatticeVector::from_i64s(x)
}

fn cone_in(max_rank: usize, bound: i64, max_gens: usize) -> impl Strategy<Value = Cone> {
    (1..=max_rank).prop_flat_map(move |r| {
        vec(vec(-bound..=bound, r), 0..=max_gens).prop_map(move |gs| {
            let gens: Vec<LatticeVector> = gs.iter().map(|g| lattice(g)).collect();
            Cone::from_generators(r, &gens).unwrap()
        })
    })
}

/// Vertices with coordinates `h/2`, `h` in `[-4, 4]`; rays in `[-2, 2]`,
/// kept only when they span a pointed cone.
fn polyhedron_of_rank(rank: usize) -> impl Strategy<Value = TailedPolyhedron> {
    (
        vec(vec(-4i64..=4, rank), 1..=3),
        vec(vec(-2i64..=2, rank), 0..=2),
    )
        .prop_filter_map("tail must be pointed", move |(vs, rs)| {
            let verts = vs
                .iter()
                .map(|v| RatVector::new(v.iter().map(|&h| ratio(h, 2)).collect()))
                .collect();
            let rays = rs.iter().map(|r| lattice(r)).collect();
            TailedPolyhedron::new(rank, verts, rays).ok()
        })
}

fn polyhedron(max_rank: usize) -> impl Strategy<Value = TailedPolyhedron> {
    (1..=max_rank).prop_flat_map(polyhedron_of_rank)
}

fn polyhedron_pair(max_rank: usize) -> impl Strategy<Value = (TailedPolyhedron, TailedPolyhedron)> {
    (1..=max_rank)
        .prop_flat_map(|r| (polyhedron_of_rank(r), polyhedron_of_rank(r)))
        .prop_filter("sum of tails must be pointed", |(a, b)| a.minkowski_sum(b).is_ok())
}

fn polyhedron_with_tail(tail: Cone) -> impl Strategy<Value = TailedPolyhedron> {
    let rank = tail.rank();
    vec(vec(-4i64..=4, rank), 1..=3).prop_map(move |vs| {
        let verts = vs
            .iter()
            .map(|v| RatVector::new(v.iter().map(|&h| ratio(h, 2)).collect()))
            .collect();
        TailedPolyhedron::new(rank, verts, tail.generators().to_vec()).unwrap()
    })
}

/// Divisors on the affine line with up to three marked points.
fn divisor(max_rank: usize) -> impl Strategy<Value = PolyhedralDivisor> {
    cone_in(max_rank, 2, 2)
        .prop_filter("pointed tail", Cone::is_pointed)
        .prop_flat_map(|tail| vec(polyhedron_with_tail(tail.clone()), 0..=3).prop_map(move |ps| (tail.clone(), ps)))
        .prop_map(|(tail, ps)| {
            let labels: Vec<String> = (0..ps.len()).map(|i| format!("P{i}")).collect();
            let base = BaseCurve::new(
                CurveKind::AffineLine,
                labels.iter().map(|l| CurvePoint::new(l.clone())).collect(),
            )
            .unwrap();
            let coefficients: BTreeMap<String, TailedPolyhedron> = labels.into_iter().zip(ps).collect();
            PolyhedralDivisor::new(base, tail.rank(), tail, coefficients).unwrap()
        })
}

fn in_dual_tail(d: &PolyhedralDivisor, u: &LatticeVector) -> bool {
    d.tail().generators().iter().all(|g| !g.dot(u).is_negative())
}

// cone kernel

proptest! {
    #[test]
    fn dual_is_an_involution(c in cone_in(4, 2, 5)) {
        prop_assert_eq!(c.dual().dual(), c);
    }

    #[test]
    fn representations_cohere(c in cone_in(4, 2, 5)) {
        for g in c.generators() {
            for a in c.inequalities() {
                prop_assert!(!g.dot(a).is_negative());
            }
        }
        prop_assert_eq!(Cone::from_inequalities(c.rank(), c.inequalities()).unwrap(), c.clone());
        prop_assert_eq!(Cone::from_generators(c.rank(), c.generators()).unwrap(), c);
    }

    #[test]
    fn pointed_iff_dual_full(c in cone_in(4, 2, 5)) {
        prop_assert_eq!(c.is_pointed(), c.dual().is_full_dimensional());
    }

    #[test]
    fn stored_vectors_are_primitive(c in cone_in(4, 3, 5)) {
        for v in c.generators().iter().chain(c.inequalities()) {
            prop_assert!(v.is_primitive());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    // Facet normals of cones with generators in [-3,3]^3 are cross products
    // with entries at most 2 * 3 * 3.
    #[test]
    fn dual_matches_oracle(c in cone_in(3, 3, 4)) {
        let bound = match c.rank() { 1 => 1, 2 => 3, _ => 18 };
        prop_assert_eq!(oracle_dual(&c, bound), c.dual());
    }
}

// tailed polyhedra

proptest! {
    #[test]
    fn homogenization_dual_identity(p in polyhedron(3)) {
        prop_assert_eq!(p.homogenize().dual(), p.homogenize_dual());
    }

    #[test]
    fn zero_slice_is_embedded_tail(p in polyhedron(3)) {
        prop_assert_eq!(zero_slice(&p.homogenize()), embedded_tail(&p.tail_cone()));
    }

    #[test]
    fn homogenization_determines_polyhedron(p in polyhedron(3)) {
        prop_assert_eq!(TailedPolyhedron::from_homogenization(&p.homogenize()).unwrap(), p);
    }

    #[test]
    fn support_is_additive((a, b) in polyhedron_pair(3), seed in vec(-3i64..=3, 3)) {
        let u = lattice(&seed[..a.rank()]);
        let sum = a.minkowski_sum(&b).unwrap();
        let lhs = sum.support_min(&u).unwrap();
        let rhs = &a.support_min(&u).unwrap() + &b.support_min(&u).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn tails_add((a, b) in polyhedron_pair(3)) {
        let sum = a.minkowski_sum(&b).unwrap();
        let rays: Vec<LatticeVector> = a.rays().iter().chain(b.rays()).cloned().collect();
        prop_assert_eq!(sum.tail_cone(), Cone::from_generators(a.rank(), &rays).unwrap());
    }

    #[test]
    fn tail_is_neutral(p in polyhedron(3)) {
        let neutral = TailedPolyhedron::trivial(&p.tail_cone()).unwrap();
        prop_assert_eq!(p.minkowski_sum(&neutral).unwrap(), p);
    }

    #[test]
    fn support_matches_oracle(p in polyhedron(3), seed in vec(-3i64..=3, 3)) {
        let u = lattice(&seed[..p.rank()]);
        prop_assert_eq!(p.support_min(&u).unwrap(), oracle_support_min(&u, &p));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn minkowski_membership_matches_oracle(
        (a, b) in polyhedron_pair(2),
        probe in vec(-10i64..=10, 2),
    ) {
        let sum = a.minkowski_sum(&b).unwrap();
        for v in sum.vertices() {
            prop_assert_eq!(oracle_minkowski_membership(&a, &b, v, 2), Some(true));
        }
        let x = RatVector::new(probe[..a.rank()].iter().map(|&h| ratio(h, 2)).collect());
        if !sum.contains(&x).unwrap() {
            prop_assert_eq!(oracle_minkowski_membership(&a, &b, &x, 2), Some(false));
        }
    }
}

// divisors

proptest! {
    #[test]
    fn evaluation_is_superadditive(d in divisor(2), s in vec(-3i64..=3, 2), t in vec(-3i64..=3, 2)) {
        let u = lattice(&s[..d.rank()]);
        let v = lattice(&t[..d.rank()]);
        prop_assume!(in_dual_tail(&d, &u) && in_dual_tail(&d, &v));
        let lhs = d.evaluate(&u).unwrap().add(&d.evaluate(&v).unwrap());
        prop_assert!(lhs.le(&d.evaluate(&(&u + &v)).unwrap()));
    }

    #[test]
    fn evaluation_is_homogeneous(d in divisor(2), s in vec(-3i64..=3, 2), k in 1i64..=4) {
        let u = lattice(&s[..d.rank()]);
        prop_assume!(in_dual_tail(&d, &u));
        let ku = u.scale(&BigInt::from(k));
        prop_assert_eq!(d.evaluate(&ku).unwrap(), d.evaluate(&u).unwrap().scale(&Rat::from_integer(k.into())));
    }

    #[test]
    fn floor_brackets_evaluation(d in divisor(2), s in vec(-3i64..=3, 2)) {
        let u = lattice(&s[..d.rank()]);
        prop_assume!(in_dual_tail(&d, &u));
        let q = d.evaluate(&u).unwrap();
        let f = d.evaluate_floor(&u).unwrap();
        for l in d.coefficients().keys() {
            let fl = Rat::from_integer(f.coefficient(l));
            prop_assert!(fl <= q.coefficient(l));
            prop_assert!(q.coefficient(l) < fl + Rat::from_integer(1.into()));
        }
    }

    #[test]
    fn trivial_divisors_evaluate_to_zero(tail in cone_in(3, 2, 3), s in vec(-3i64..=3, 3)) {
        prop_assume!(tail.is_pointed());
        let d = polydiv::examples::trivial_on(tail);
        let u = lattice(&s[..d.rank()]);
        prop_assume!(in_dual_tail(&d, &u));
        prop_assert!(d.evaluate(&u).unwrap().is_empty());
    }

    #[test]
    fn affine_bases_are_proper(d in divisor(3)) {
        prop_assert_eq!(d.check_proper().verdict, Properness::Proper);
    }
}

// semigroups

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sample_cone_is_homogenization(p in polyhedron(2)) {
        let s = MonomialSemigroup::new(p.clone());
        let b = sufficient_weight_bound(&s);
        prop_assert_eq!(cone_from_semigroup_sample(&s, b), p.homogenize());
        let st = stabilized_cone(&s, 24).unwrap();
        prop_assert_eq!(st.cone, p.homogenize());
    }

    #[test]
    fn floor_and_exact_membership_agree(p in polyhedron(2), k in -4i64..=4, s in vec(-4i64..=4, 2)) {
        let u = lattice(&s[..p.rank()]);
        let sg = MonomialSemigroup::new(p.clone());
        let exact = sg.contains(&u.lift(k.into())).unwrap();
        let floored = match p.support_min(&u).unwrap() {
            SupportValue::Finite(m) => {
                let in_tail = p.rays().iter().all(|r| !r.dot(&u).is_negative());
                in_tail && BigInt::from(k) >= (-m).ceil().to_integer()
            }
            SupportValue::NegInfinity => false,
        };
        prop_assert_eq!(exact, floored);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn hilbert_basis_is_sound(p in polyhedron(2)) {
        let s = MonomialSemigroup::new(p.clone());
        let hb = hilbert_basis(&s, 3);
        let delta = p.homogenize();
        let is_unit = |v: &LatticeVector| delta.generators().iter().all(|g| g.dot(v).is_zero());
        for e in &hb.elements {
            prop_assert!(s.contains(e).unwrap());
        }
        // Irreducible modulo units: no non-unit element is a sum of two
        // non-units with one summand in the box.
        for e in hb.elements.iter().filter(|e| !is_unit(e)) {
            for y in s.box_points(3).iter().filter(|y| !is_unit(y)) {
                let z = e - y;
                prop_assert!(is_unit(&z) || !s.contains(&z).unwrap(), "{} = {} + {}", e, y, z);
            }
        }
        if hb.complete {
            prop_assert!(hb.witness.is_none());
        }
    }
}

// toroidal

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn fans_glue_along_the_tail(d in divisor(2)) {
        let f = fan_from_divisor(&d, None).unwrap();
        for c in f.charts().values() {
            prop_assert_eq!(&zero_slice(c), f.shared_face());
        }
        prop_assert_eq!(f.shared_face(), &embedded_tail(d.tail()));
    }

    #[test]
    fn theorem_holds_on_random_divisors(d in divisor(2)) {
        let r = verify_theorem1(&d, polydiv::semigroup::DEFAULT_BOX_CAP);
        prop_assert!(r.overall, "{:?}", r);
    }

    #[test]
    fn partition_ignores_trivial_entries(d in divisor(2)) {
        let before = canonical_point_set(&d);
        let mut coefficients = d.coefficients().clone();
        coefficients.insert("T".into(), d.trivial_coefficient());
        let mut points = d.base().points().to_vec();
        points.push(CurvePoint::new("T"));
        let base = BaseCurve::new(d.base().kind(), points).unwrap();
        let padded = PolyhedralDivisor::new(base, d.rank(), d.tail().clone(), coefficients).unwrap();
        prop_assert_eq!(canonical_point_set(&padded), before);
    }

    #[test]
    fn fan_isomorphism_is_an_equivalence(a in divisor(2), b in divisor(2)) {
        let fa = fan_from_divisor(&a, None).unwrap();
        let fb = fan_from_divisor(&b, None).unwrap();
        let fb_again = fan_from_divisor(&b, None).unwrap();
        prop_assert!(fan_isomorphic(&fa, &fa));
        prop_assert_eq!(fan_isomorphic(&fa, &fb), fan_isomorphic(&fb, &fa));
        if fan_isomorphic(&fa, &fb) {
            prop_assert!(fan_isomorphic(&fa, &fb_again));
        }
    }
}
