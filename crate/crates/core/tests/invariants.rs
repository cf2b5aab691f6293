use mixvol::bezout::{bezout_form, bezout_ratio};
use mixvol::io::{polytope_from_json, polytope_to_json};
use mixvol::isoperimetric::surface_measure;
use mixvol::mixed::mixed_volume;
use mixvol::scalar::{int, to_f64};
use mixvol::{convex_hull, AffineMap, Scalar, VPolytope, Vector};
use num_traits::Signed;
use proptest::prelude::*;

fn body(n: usize, max_points: usize) -> impl Strategy<Value = VPolytope> {
    prop::collection::vec(prop::collection::vec(-3i64..=3, n), n + 1..=max_points)
        .prop_map(|pts| convex_hull(&pts.iter().map(|p| Vector::from_ints(p)).collect::<Vec<_>>()).unwrap())
        .prop_filter("full-dimensional", |p| p.is_full_dimensional())
}

fn any_body(n: usize, max_points: usize) -> impl Strategy<Value = VPolytope> {
    prop::collection::vec(prop::collection::vec(-3i64..=3, n), 1..=max_points)
        .prop_map(|pts| convex_hull(&pts.iter().map(|p| Vector::from_ints(p)).collect::<Vec<_>>()).unwrap())
}

fn int_map(n: usize) -> impl Strategy<Value = AffineMap> {
    (prop::collection::vec(-2i64..=2, n * n), prop::collection::vec(-3i64..=3, n))
        .prop_map(move |(m, t)| {
            let rows = m.chunks(n).map(|r| r.iter().map(|&x| int(x)).collect()).collect();
            AffineMap::new(rows, Vector::from_ints(&t))
        })
        .prop_filter_map("nonsingular", |t| t.ok())
}

/// Shoelace area after sorting vertices by angle about their mean.
fn shoelace(p: &VPolytope) -> f64 {
    let v: Vec<Vec<f64>> = p.vertices().iter().map(|x| x.to_f64()).collect();
    let c = [v.iter().map(|x| x[0]).sum::<f64>() / v.len() as f64, v.iter().map(|x| x[1]).sum::<f64>() / v.len() as f64];
    let mut v = v;
    v.sort_by(|a, b| (a[1] - c[1]).atan2(a[0] - c[0]).total_cmp(&(b[1] - c[1]).atan2(b[0] - c[0])));
    let mut s = 0.0;
    for i in 0..v.len() {
        let (a, b) = (&v[i], &v[(i + 1) % v.len()]);
        s += a[0] * b[1] - a[1] * b[0];
    }
    s.abs() / 2.0
}

fn sum(a: &VPolytope, b: &VPolytope) -> VPolytope {
    a.minkowski_sum(b).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn json_round_trip(p in any_body(3, 7)) {
        let back = polytope_from_json(&polytope_to_json(&p)).unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn polygon_area_matches_shoelace(p in body(2, 8)) {
        let exact = to_f64(&p.volume().unwrap());
        prop_assert!((exact - shoelace(&p)).abs() < 1e-12);
    }

    #[test]
    fn support_is_additive_and_attained(k in any_body(3, 6), l in any_body(3, 6), u in prop::collection::vec(-4i64..=4, 3)) {
        let u: Vec<Scalar> = u.iter().map(|&x| int(x)).collect();
        let brute = |p: &VPolytope| p.vertices().iter().map(|v| v.dot(&u)).max().unwrap();
        let kl = sum(&k, &l);
        prop_assert_eq!(kl.support(&u).unwrap(), brute(&k) + brute(&l));
        prop_assert_eq!(k.support(&u).unwrap(), brute(&k));
    }

    #[test]
    fn minkowski_polynomial_in_the_plane(k in body(2, 6), l in body(2, 6)) {
        let vk = k.volume().unwrap();
        let vl = l.volume().unwrap();
        let mixed = mixed_volume(&[&k, &l]).unwrap();
        prop_assert_eq!(sum(&k, &l).volume().unwrap(), &vk + &vl + int(2) * &mixed);
        let two_k = k.dilate(&int(2)).unwrap();
        prop_assert_eq!(sum(&two_k, &l).volume().unwrap(), int(4) * &vk + &vl + int(4) * &mixed);
    }

    #[test]
    fn affine_maps_scale_volume(k in body(3, 7), t in int_map(3)) {
        let image = k.affine_image(&t).unwrap();
        prop_assert_eq!(image.volume().unwrap(), t.det().abs() * k.volume().unwrap());
    }

    #[test]
    fn brunn_minkowski(k in body(3, 6), l in body(3, 6)) {
        let third = |x: Scalar| to_f64(&x).cbrt();
        let lhs = third(sum(&k, &l).volume().unwrap());
        prop_assert!(lhs >= third(k.volume().unwrap()) + third(l.volume().unwrap()) - 1e-12);
    }

    #[test]
    fn volume_is_superadditive_under_sums(k in body(3, 6), l in body(3, 6)) {
        prop_assert!(sum(&k, &l).volume().unwrap() >= k.volume().unwrap() + l.volume().unwrap());
    }

    #[test]
    fn diagonal_mixed_volume_is_volume(k in body(3, 6)) {
        prop_assert_eq!(mixed_volume(&[&k, &k, &k]).unwrap(), k.volume().unwrap());
    }

    #[test]
    fn mixed_volume_symmetric_and_translation_invariant(
        a in any_body(3, 5), b in any_body(3, 5), c in any_body(3, 5), x in prop::collection::vec(-5i64..=5, 3)
    ) {
        let v = mixed_volume(&[&a, &b, &c]).unwrap();
        prop_assert!(!v.is_negative());
        prop_assert_eq!(&mixed_volume(&[&c, &a, &b]).unwrap(), &v);
        prop_assert_eq!(&mixed_volume(&[&b, &a, &c]).unwrap(), &v);
        let moved = a.translate(&Vector::from_ints(&x));
        prop_assert_eq!(mixed_volume(&[&moved, &b, &c]).unwrap(), v);
    }

    #[test]
    fn mixed_volume_multilinear(a in any_body(3, 4), a2 in any_body(3, 4), b in any_body(3, 4), c in any_body(3, 4)) {
        let lhs = mixed_volume(&[&sum(&a, &a2), &b, &c]).unwrap();
        let rhs = mixed_volume(&[&a, &b, &c]).unwrap() + mixed_volume(&[&a2, &b, &c]).unwrap();
        prop_assert_eq!(lhs, rhs);
        let three_a = a.dilate(&int(3)).unwrap();
        prop_assert_eq!(mixed_volume(&[&three_a, &b, &c]).unwrap(), int(3) * mixed_volume(&[&a, &b, &c]).unwrap());
    }

    #[test]
    fn mixed_volume_monotone(a in any_body(3, 4), extra in prop::collection::vec(-3i64..=3, 3), b in any_body(3, 4), c in any_body(3, 4)) {
        let mut pts = a.vertices().to_vec();
        pts.push(Vector::from_ints(&extra));
        let bigger = convex_hull(&pts).unwrap();
        prop_assert!(mixed_volume(&[&bigger, &b, &c]).unwrap() >= mixed_volume(&[&a, &b, &c]).unwrap());
    }

    #[test]
    fn bezout_ratio_is_affine_invariant(k in body(3, 6), a in any_body(3, 4), b in any_body(3, 4), t in int_map(3)) {
        let (tk, ta, tb) = (k.affine_image(&t).unwrap(), a.affine_image(&t).unwrap(), b.affine_image(&t).unwrap());
        prop_assert_eq!(bezout_ratio(&ta, &tb, &tk).unwrap(), bezout_ratio(&a, &b, &k).unwrap());
        let det2 = t.det() * t.det();
        prop_assert_eq!(bezout_form(&ta, &tb, &tk).unwrap().f_value, det2 * bezout_form(&a, &b, &k).unwrap().f_value);
    }

    #[test]
    fn surface_measure_is_closed(k in body(3, 7)) {
        let s = surface_measure(&k).unwrap();
        prop_assert!(s.closedness_defect() < 1e-9 * s.total_mass());
        prop_assert!(s.atoms.iter().all(|a| a.weight.value > 0.0));
    }
}
