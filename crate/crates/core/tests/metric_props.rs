mod common;

use std::sync::Arc;

use common::{any_image, connected_image, hops};
use digitop::{DigitalImage, DigitalMetricSpace, MetricSpec, Point, Rational, Surd};
use proptest::prelude::*;

fn exact_metrics() -> [MetricSpec; 3] {
    [MetricSpec::l1(), MetricSpec::l2(), MetricSpec::ShortestPath]
}

fn oracle_distance(metric: MetricSpec, pts: &[Point], u: usize, i: usize, j: usize) -> Surd {
    let diffs: Vec<i64> = pts[i].coords().iter().zip(pts[j].coords()).map(|(a, b)| (a - b).abs()).collect();
    match metric {
        MetricSpec::ShortestPath => Surd::from_integer(hops(pts, u)[i][j] as i64),
        m if m == MetricSpec::l1() => Surd::from_integer(diffs.iter().sum()),
        _ => Surd::sqrt_of(diffs.iter().map(|d| (d * d) as u64).sum()),
    }
}

fn subsets(n: usize) -> Vec<Vec<usize>> {
    (1u32..1 << n).map(|mask| (0..n).filter(|i| mask & (1 << i) != 0).collect()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn distances_match_oracle_and_satisfy_axioms(img in connected_image(6)) {
        let u = img.adjacency().u();
        let pts = img.points().to_vec();
        for metric in exact_metrics() {
            let space = DigitalMetricSpace::new(Arc::clone(&img), metric).unwrap();
            let n = space.len();
            let d = |i, j| space.distance_idx::<Surd>(i, j);
            for i in 0..n {
                for j in 0..n {
                    prop_assert_eq!(d(i, j), oracle_distance(metric, &pts, u, i, j));
                    prop_assert_eq!(d(i, j), d(j, i));
                    prop_assert_eq!(d(i, j).is_zero(), i == j);
                    for k in 0..n {
                        prop_assert!(d(i, k) <= d(i, j) + d(j, k));
                    }
                }
            }
        }
    }

    #[test]
    fn lp_metrics_work_on_disconnected_images(img in any_image(6)) {
        let space = DigitalMetricSpace::new(Arc::clone(&img), MetricSpec::l2()).unwrap();
        let pts = img.points();
        for i in 0..pts.len() {
            for j in 0..pts.len() {
                let sq: i64 = pts[i].coords().iter().zip(pts[j].coords()).map(|(a, b)| (a - b) * (a - b)).sum();
                let d = space.distance_idx::<Surd>(i, j);
                prop_assert_eq!(d.clone() * d, Surd::from_integer(sq));
            }
        }
        let sp = DigitalMetricSpace::new(Arc::clone(&img), MetricSpec::ShortestPath);
        prop_assert_eq!(sp.is_ok(), img.is_connected());
    }

    #[test]
    fn float_distances_track_exact(img in connected_image(6), p_num in 1i64..7) {
        let exact = DigitalMetricSpace::new(Arc::clone(&img), MetricSpec::l2()).unwrap();
        let n = img.len();
        for i in 0..n {
            for j in 0..n {
                let a = exact.distance_idx::<Surd>(i, j).to_f64();
                let b = exact.distance_idx::<f64>(i, j);
                prop_assert!((a - b).abs() < 1e-12);
            }
        }
        // General l_p sits between l_inf and l_1.
        let p = Rational::new(p_num + 2, 2);
        let lp = DigitalMetricSpace::new(Arc::clone(&img), MetricSpec::Lp(p)).unwrap();
        prop_assert!(lp.ensure_scalar::<Surd>().is_err() || p == Rational::from_integer(2));
        for i in 0..n {
            for j in 0..n {
                let diffs: Vec<f64> = img.point(i).coords().iter().zip(img.point(j).coords()).map(|(a, b)| (a - b).abs() as f64).collect();
                let d = lp.distance_idx::<f64>(i, j);
                let linf = diffs.iter().cloned().fold(0.0, f64::max);
                let l1: f64 = diffs.iter().sum();
                prop_assert!(linf - 1e-9 <= d && d <= l1 + 1e-9);
            }
        }
    }

    #[test]
    fn hausdorff_axioms(img in connected_image(4)) {
        for metric in exact_metrics() {
            let space = DigitalMetricSpace::new(Arc::clone(&img), metric).unwrap();
            let sets: Vec<Vec<Point>> = subsets(img.len())
                .into_iter()
                .map(|s| s.into_iter().map(|i| img.point(i).clone()).collect())
                .collect();
            let h = |a: &[Point], b: &[Point]| space.hausdorff::<Surd>(a, b).unwrap();
            for a in &sets {
                prop_assert!(h(a, a).is_zero());
                for b in &sets {
                    let hab = h(a, b);
                    prop_assert_eq!(&hab, &h(b, a));
                    prop_assert_eq!(hab.is_zero(), a == b);
                    // Brute-force max-min.
                    let directed = |x: &[Point], y: &[Point]| {
                        x.iter()
                            .map(|p| y.iter().map(|q| space.distance::<Surd>(p, q).unwrap()).min().unwrap())
                            .max()
                            .unwrap()
                    };
                    prop_assert_eq!(&hab, &directed(a, b).max(directed(b, a)));
                    for c in &sets {
                        prop_assert!(h(a, c) <= hab.clone() + h(b, c));
                    }
                }
            }
        }
    }

    #[test]
    fn translation_is_an_isometry(img in connected_image(5), dx in -5i64..5, dy in -5i64..5) {
        let shifted_pts = img.points().iter().map(|p| {
            let c: Vec<i64> = p.coords().iter().zip([dx, dy]).map(|(a, b)| a + b).collect();
            Point::new(c).unwrap()
        });
        let shifted = Arc::new(DigitalImage::new(shifted_pts, img.adjacency()).unwrap());
        for metric in exact_metrics() {
            let a = DigitalMetricSpace::new(Arc::clone(&img), metric).unwrap();
            let b = DigitalMetricSpace::new(Arc::clone(&shifted), metric).unwrap();
            for i in 0..img.len() {
                for j in 0..img.len() {
                    prop_assert_eq!(a.distance_idx::<Surd>(i, j), b.distance_idx::<Surd>(i, j));
                }
            }
            let ca = a.discreteness_certificate::<Surd>().unwrap();
            let cb = b.discreteness_certificate::<Surd>().unwrap();
            prop_assert_eq!(ca.epsilon, cb.epsilon);
        }
    }
}

#[test]
fn shortest_path_rejects_disconnected_image() {
    let img = DigitalImage::new([Point::scalar(0), Point::scalar(2)], digitop::Adjacency::Cu(1)).unwrap();
    assert!(DigitalMetricSpace::new(img, MetricSpec::ShortestPath).is_err());
}

#[test]
fn discreteness_on_diagonal_pair_is_sqrt2() {
    let img = DigitalImage::new([Point::from([0, 0]), Point::from([1, 1])], digitop::Adjacency::Cu(2)).unwrap();
    let space = DigitalMetricSpace::new(img, MetricSpec::l2()).unwrap();
    let cert = space.discreteness_certificate::<Surd>().unwrap();
    assert_eq!(cert.epsilon, Surd::sqrt_of(2));
}
