mod common;

use common::rng;
use planar_variation::algebra::{algebra_checks, char_fn, relabel_convex, BvElement};
use planar_variation::circle::{circle_compare, circle_variation_bg, CircleSample};
use planar_variation::engine::{approx_le, polygon_bounds, search_sup, triangle_exact, SearchConfig};
use planar_variation::geom::{int, rat, Point, PointSet};
use planar_variation::{Complex64, Error, FunctionTable};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

fn small() -> SearchConfig {
    SearchConfig::new(4, 6, 16, 0).unwrap()
}

fn exact_domain(r: &mut rand_chacha::ChaCha8Rng) -> PointSet {
    if r.gen_bool(0.5) {
        let m = r.gen_range(1..=6);
        common::point_set(r, m, true)
    } else {
        common::non_collinear_triple(r)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn inequalities_hold_on_exact_domains(seed in any::<u64>()) {
        let mut r = rng(seed);
        let set = exact_domain(&mut r);
        let real = r.gen_bool(0.5);
        let f = BvElement::new(common::table(&mut r, set.clone(), real), small());
        let g = BvElement::new(common::table(&mut r, set, real), small());
        prop_assert!(f.is_exact() && g.is_exact());
        let alpha = Complex64::new(r.gen_range(-3.0..3.0), r.gen_range(-3.0..3.0));
        for c in algebra_checks(&f, &g, alpha).unwrap() {
            prop_assert!(c.holds, "{:?}", c);
        }
    }

    #[test]
    fn lattice_operations_are_pointwise(seed in any::<u64>()) {
        let mut r = rng(seed);
        let m = r.gen_range(1..=7);
        let set = common::point_set(&mut r, m, false);
        let f = BvElement::new(common::table(&mut r, set.clone(), true), small());
        let g = BvElement::new(common::table(&mut r, set, true), small());
        let (hi, lo) = (f.lattice_max(&g).unwrap(), f.lattice_min(&g).unwrap());
        for i in 0..m {
            let (a, b) = (f.table().value_at(i).re, g.table().value_at(i).re);
            prop_assert!((hi.table().value_at(i).re - a.max(b)).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0));
            prop_assert!((lo.table().value_at(i).re - a.min(b)).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0));
        }
    }

    #[test]
    fn real_and_imaginary_parts_stay_below(seed in any::<u64>()) {
        let mut r = rng(seed);
        let set = exact_domain(&mut r);
        let f = BvElement::new(common::table(&mut r, set, false), small());
        let v = f.var_interval();
        prop_assert!(approx_le(f.re().var_interval().lower, v.upper));
        prop_assert!(approx_le(f.im().var_interval().lower, v.upper));
    }

    #[test]
    fn relabelling_convex_sets_keeps_the_bounds(seed in any::<u64>()) {
        let mut r = rng(seed);
        let m = r.gen_range(3..=6);
        let (a, b) = (common::convex_polygon(&mut r, m), common::convex_polygon(&mut r, m));
        let f = BvElement::new(common::table(&mut r, a, false), small());
        let g = relabel_convex(&f, &b).unwrap();
        prop_assert_eq!(search_sup(f.table(), &small()).value.to_bits(), search_sup(g.table(), &small()).value.to_bits());
        let (p, q) = (polygon_bounds(f.table()).unwrap(), polygon_bounds(g.table()).unwrap());
        prop_assert_eq!(p.0.to_bits(), q.0.to_bits());
        prop_assert_eq!(p.1.to_bits(), q.1.to_bits());
    }

    #[test]
    fn circle_sandwich(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(1..=7);
        let mut ks: Vec<i64> = (1..24).collect();
        ks.shuffle(&mut r);
        let mut ks = ks[..n - 1].to_vec();
        ks.sort();
        let mut angles = vec![int(0)];
        angles.extend(ks.iter().map(|&k| rat(k, 12)));
        angles.push(int(2));
        let sample = CircleSample::new(angles, common::complex_values(&mut r, n)).unwrap();
        let rep = circle_compare(&sample, &SearchConfig::new(4, 25, 16, 0).unwrap()).unwrap();
        prop_assert!(rep.holds(), "{:?}", rep);
    }

    #[test]
    fn indicator_upper_at_most_two(seed in any::<u64>()) {
        let mut r = rng(seed);
        let m = r.gen_range(1..=8);
        let set = common::point_set(&mut r, m, false);
        let z = set.points().choose(&mut r).unwrap().clone();
        prop_assert!(char_fn(&z, &set, small()).unwrap().var_interval().upper <= 2.0);
    }
}

#[test]
fn square_to_unit_circle_quadrilateral() {
    let square = PointSet::new(vec![Point::from_ints(0, 0), Point::from_ints(1, 0), Point::from_ints(1, 1), Point::from_ints(0, 1)])
        .unwrap();
    let diamond = PointSet::new(vec![Point::from_ints(1, 0), Point::from_ints(0, 1), Point::from_ints(-1, 0), Point::from_ints(0, -1)])
        .unwrap();
    let mut r = rng(3);
    for _ in 0..20 {
        let f = BvElement::new(common::table(&mut r, square.clone(), false), SearchConfig::default());
        let g = relabel_convex(&f, &diamond).unwrap();
        let (a, b) = (f.estimate().lower, g.estimate().lower);
        assert!((a - b).abs() <= 1e-9 * a.max(1.0), "{a} vs {b}");
        assert_eq!(relabel_convex(&f, f.domain()).unwrap().table(), f.table());
    }
}

#[test]
fn triangle_relabel_keeps_the_exact_value() {
    let mut r = rng(4);
    for _ in 0..50 {
        let a = common::non_collinear_triple(&mut r);
        let b = common::non_collinear_triple(&mut r);
        let f = BvElement::new(common::table(&mut r, a, false), small());
        let g = relabel_convex(&f, &b).unwrap();
        assert_eq!(triangle_exact(f.table()).unwrap(), triangle_exact(g.table()).unwrap());
    }
}

#[test]
fn relabel_rejects_bad_targets() {
    let tri = PointSet::new(vec![Point::from_ints(0, 0), Point::from_ints(2, 0), Point::from_ints(0, 2)]).unwrap();
    let f = BvElement::new(FunctionTable::real(tri, &[1.0, 2.0, 3.0]).unwrap(), small());
    let line = PointSet::new(vec![Point::from_ints(0, 0), Point::from_ints(1, 0), Point::from_ints(2, 0)]).unwrap();
    assert!(matches!(relabel_convex(&f, &line), Err(Error::NotConvexPosition)));
    let pair = PointSet::new(vec![Point::from_ints(0, 0), Point::from_ints(1, 0)]).unwrap();
    assert!(matches!(relabel_convex(&f, &pair), Err(Error::SizeMismatch { .. })));
}

#[test]
fn indicator_on_two_points() {
    let set = PointSet::new(vec![Point::from_ints(0, 0), Point::from_ints(1, 0)]).unwrap();
    let chi = char_fn(&Point::from_ints(0, 0), &set, small()).unwrap();
    assert_eq!(chi.estimate().value(), Some(1.0));
    let single = PointSet::new(vec![Point::from_ints(0, 0)]).unwrap();
    assert_eq!(char_fn(&Point::from_ints(0, 0), &single, small()).unwrap().estimate().value(), Some(0.0));
    assert!(matches!(char_fn(&Point::from_ints(5, 5), &set, small()), Err(Error::PointNotInDomain(_))));
}

#[test]
fn classical_circle_variation() {
    let angles: Vec<_> = [0, 1, 2, 3, 4].iter().map(|&k| rat(k, 2)).collect();
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let chi = CircleSample::new(angles.clone(), vec![one, zero, zero, zero, one]).unwrap();
    assert_eq!(circle_variation_bg(&chi), 2.0);
    let constant = CircleSample::new(angles, vec![one; 4]).unwrap();
    assert_eq!(circle_variation_bg(&constant), 0.0);
    let rep = circle_compare(&constant, &small()).unwrap();
    assert_eq!((rep.var_bg, rep.estimate.lower, rep.estimate.upper), (0.0, 0.0, 0.0));
}
