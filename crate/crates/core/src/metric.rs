//! Metrics on digital images.
//!
//! l_1 and shortest-path distances are integers and l_2 distances are square
//! roots of integers, so all three embed exactly into [`Surd`]. Other l_p
//! exponents only embed into floating-point scalars.

use std::fmt;
use std::sync::{Arc, OnceLock};

use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::scalar::{format_rational, rational_to_f64, Rational, Scalar};
use crate::space::{DigitalImage, Point};
#[cfg(doc)]
use crate::surd::Surd;

/// Images up to this size get a memoized all-pairs distance table.
const TABLE_LIMIT: usize = 512;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum MetricSpec {
    Lp(Rational),
    ShortestPath,
}

impl MetricSpec {
    pub fn l1() -> Self {
        MetricSpec::Lp(Rational::from_integer(1))
    }

    pub fn l2() -> Self {
        MetricSpec::Lp(Rational::from_integer(2))
    }

    /// True when every distance is exactly representable as a [`Surd`].
    pub fn is_exact(&self) -> bool {
        match self {
            MetricSpec::Lp(p) => *p == Rational::from_integer(1) || *p == Rational::from_integer(2),
            MetricSpec::ShortestPath => true,
        }
    }
}

impl fmt::Display for MetricSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetricSpec::Lp(p) => write!(f, "l_{}", format_rational(p)),
            MetricSpec::ShortestPath => write!(f, "shortest_path"),
        }
    }
}

/// A distance in its most exact native form.
#[derive(Clone, Copy, PartialEq, Debug)]
pub enum RawDistance {
    Integer(u64),
    SqrtOf(u64),
    Approx(f64),
}

impl RawDistance {
    pub fn to_scalar<S: Scalar>(self) -> S {
        match self {
            RawDistance::Integer(n) => S::from_integer(n as i64),
            RawDistance::SqrtOf(n) => S::sqrt_of_integer(n),
            RawDistance::Approx(v) => S::from_approx(v).expect("inexact metric used with an exact scalar"),
        }
    }
}

/// A digital metric space `(X, d, κ)`.
#[derive(Debug)]
pub struct DigitalMetricSpace {
    image: Arc<DigitalImage>,
    metric: MetricSpec,
    hops: OnceLock<Vec<u32>>,
    table: OnceLock<Vec<RawDistance>>,
}

impl Clone for DigitalMetricSpace {
    fn clone(&self) -> Self {
        DigitalMetricSpace {
            image: Arc::clone(&self.image),
            metric: self.metric,
            hops: self.hops.clone(),
            table: self.table.clone(),
        }
    }
}

/// Lower bound on distances between distinct points.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscretenessCertificate<S> {
    pub epsilon: S,
    /// A closest pair; `None` for a singleton space, where `epsilon` is the
    /// conventional value 1.
    pub closest_pair: Option<(Point, Point)>,
}

impl DigitalMetricSpace {
    pub fn new(image: impl Into<Arc<DigitalImage>>, metric: MetricSpec) -> Result<Self> {
        let image = image.into();
        match metric {
            MetricSpec::Lp(p) if p < Rational::from_integer(1) => {
                return Err(Error::InvalidExponent(format_rational(&p)));
            }
            MetricSpec::ShortestPath => {
                let components = image.components().len();
                if components != 1 {
                    return Err(Error::Disconnected { components });
                }
            }
            _ => {}
        }
        Ok(DigitalMetricSpace {
            image,
            metric,
            hops: OnceLock::new(),
            table: OnceLock::new(),
        })
    }

    pub fn image(&self) -> &DigitalImage {
        &self.image
    }

    pub fn image_arc(&self) -> &Arc<DigitalImage> {
        &self.image
    }

    pub fn metric(&self) -> MetricSpec {
        self.metric
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    /// Fails when `S` is exact but the metric is not.
    pub fn ensure_scalar<S: Scalar>(&self) -> Result<()> {
        if S::EXACT && !self.metric.is_exact() {
            return Err(Error::InexactMetric(self.metric.to_string()));
        }
        Ok(())
    }

    pub fn distance<S: Scalar>(&self, x: &Point, y: &Point) -> Result<S> {
        self.ensure_scalar::<S>()?;
        let i = self.image.require(x)?;
        let j = self.image.require(y)?;
        Ok(self.distance_idx(i, j))
    }

    /// Distance by point index. The scalar must have passed
    /// [`ensure_scalar`](Self::ensure_scalar).
    pub fn distance_idx<S: Scalar>(&self, i: usize, j: usize) -> S {
        self.raw_distance(i, j).to_scalar()
    }

    pub fn raw_distance(&self, i: usize, j: usize) -> RawDistance {
        let n = self.len();
        if n <= TABLE_LIMIT {
            let table = self.table.get_or_init(|| {
                (0..n * n).map(|k| self.compute_raw(k / n, k % n)).collect()
            });
            return table[i * n + j];
        }
        self.compute_raw(i, j)
    }

    fn compute_raw(&self, i: usize, j: usize) -> RawDistance {
        let x = self.image.point(i).coords();
        let y = self.image.point(j).coords();
        match self.metric {
            MetricSpec::ShortestPath => RawDistance::Integer(self.hop_table()[i * self.len() + j] as u64),
            MetricSpec::Lp(p) if p == Rational::from_integer(1) => {
                RawDistance::Integer(x.iter().zip(y).map(|(a, b)| a.abs_diff(*b)).sum())
            }
            MetricSpec::Lp(p) if p == Rational::from_integer(2) => {
                let sq: u128 = x.iter().zip(y).map(|(a, b)| (a.abs_diff(*b) as u128).pow(2)).sum();
                RawDistance::SqrtOf(sq.to_u64().expect("squared l_2 distance overflows u64"))
            }
            MetricSpec::Lp(p) => {
                let p = rational_to_f64(&p);
                let sum: f64 = x.iter().zip(y).map(|(a, b)| (a.abs_diff(*b) as f64).powf(p)).sum();
                RawDistance::Approx(sum.powf(1.0 / p))
            }
        }
    }

    /// All-pairs hop counts, computed once by one breadth-first search per
    /// source.
    fn hop_table(&self) -> &[u32] {
        self.hops.get_or_init(|| {
            let n = self.len();
            let mut table = vec![u32::MAX; n * n];
            let mut queue = std::collections::VecDeque::new();
            for s in 0..n {
                let row = &mut table[s * n..(s + 1) * n];
                row[s] = 0;
                queue.push_back(s);
                while let Some(i) = queue.pop_front() {
                    for j in self.image.neighbors(i) {
                        if row[j] == u32::MAX {
                            row[j] = row[i] + 1;
                            queue.push_back(j);
                        }
                    }
                }
            }
            table
        })
    }

    pub fn discreteness_certificate<S: Scalar>(&self) -> Result<DiscretenessCertificate<S>> {
        self.ensure_scalar::<S>()?;
        let n = self.len();
        let mut best: Option<(S, usize, usize)> = None;
        for i in 0..n {
            for j in (i + 1)..n {
                let d: S = self.distance_idx(i, j);
                if best.as_ref().is_none_or(|(b, _, _)| d.compare(b).is_lt()) {
                    best = Some((d, i, j));
                }
            }
        }
        Ok(match best {
            Some((epsilon, i, j)) => DiscretenessCertificate {
                epsilon,
                closest_pair: Some((self.image.point(i).clone(), self.image.point(j).clone())),
            },
            None => DiscretenessCertificate { epsilon: S::from_integer(1), closest_pair: None },
        })
    }

    /// Hausdorff distance between two nonempty subsets.
    pub fn hausdorff<S: Scalar>(&self, a: &[Point], b: &[Point]) -> Result<S> {
        self.ensure_scalar::<S>()?;
        if a.is_empty() || b.is_empty() {
            return Err(Error::EmptySubset);
        }
        let a = a.iter().map(|p| self.image.require(p)).collect::<Result<Vec<_>>>()?;
        let b = b.iter().map(|p| self.image.require(p)).collect::<Result<Vec<_>>>()?;
        Ok(self.directed::<S>(&a, &b).max_of(self.directed(&b, &a)))
    }

    fn directed<S: Scalar>(&self, from: &[usize], to: &[usize]) -> S {
        from.iter()
            .map(|&i| {
                to.iter()
                    .map(|&j| self.distance_idx::<S>(i, j))
                    .reduce(S::min_of)
                    .expect("nonempty target")
            })
            .reduce(S::max_of)
            .expect("nonempty source")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::Adjacency;
    use crate::surd::Surd;

    fn space(img: DigitalImage, m: MetricSpec) -> DigitalMetricSpace {
        DigitalMetricSpace::new(img, m).unwrap()
    }

    fn p2(x: i64, y: i64) -> Point {
        Point::from([x, y])
    }

    #[test]
    fn distance_examples() {
        let grid = DigitalImage::new([p2(0, 0), p2(1, 2), p2(3, 4)], Adjacency::Cu(2)).unwrap();
        let l1 = space(grid.clone(), MetricSpec::l1());
        assert_eq!(l1.distance::<Surd>(&p2(0, 0), &p2(1, 2)).unwrap(), Surd::from_integer(3));
        let l2 = space(grid, MetricSpec::l2());
        assert_eq!(l2.distance::<Surd>(&p2(0, 0), &p2(3, 4)).unwrap(), Surd::from_integer(5));
        assert_eq!(l2.distance::<Surd>(&p2(0, 0), &p2(1, 2)).unwrap(), Surd::sqrt_of(5));
        let sp = space(DigitalImage::interval(0, 3).unwrap(), MetricSpec::ShortestPath);
        assert_eq!(sp.distance::<Surd>(&0.into(), &3.into()).unwrap(), Surd::from_integer(3));
    }

    #[test]
    fn shortest_path_differs_from_l1_on_a_detour() {
        // An L-shaped image: (0,0)-(0,1)-(1,1) under c_1; d_sp((0,0),(1,1)) = 2.
        let img = DigitalImage::new([p2(0, 0), p2(0, 1), p2(1, 1)], Adjacency::Cu(1)).unwrap();
        let sp = space(img, MetricSpec::ShortestPath);
        assert_eq!(sp.distance::<Surd>(&p2(0, 0), &p2(1, 1)).unwrap(), Surd::from_integer(2));
        let u = DigitalImage::new([p2(0, 0), p2(0, 1), p2(0, 2), p2(1, 2), p2(2, 2), p2(2, 1), p2(2, 0)], Adjacency::Cu(1)).unwrap();
        let sp = space(u, MetricSpec::ShortestPath);
        assert_eq!(sp.distance::<Surd>(&p2(0, 0), &p2(2, 0)).unwrap(), Surd::from_integer(6));
    }

    #[test]
    fn distance_errors() {
        let gap = DigitalImage::new([0, 2].map(Point::scalar), Adjacency::Cu(1)).unwrap();
        assert_eq!(
            DigitalMetricSpace::new(gap, MetricSpec::ShortestPath).unwrap_err(),
            Error::Disconnected { components: 2 }
        );
        let s = space(DigitalImage::interval(0, 2).unwrap(), MetricSpec::l1());
        assert_eq!(s.distance::<Surd>(&0.into(), &9.into()), Err(Error::PointNotInImage(9.into())));
        let l3 = space(DigitalImage::interval(0, 2).unwrap(), MetricSpec::Lp(Rational::from_integer(3)));
        assert!(matches!(l3.distance::<Surd>(&0.into(), &1.into()), Err(Error::InexactMetric(_))));
        assert!(DigitalMetricSpace::new(DigitalImage::interval(0, 1).unwrap(), MetricSpec::Lp(Rational::new(1, 2))).is_err());
    }

    #[test]
    fn general_lp_with_floats() {
        let img = DigitalImage::new([p2(0, 0), p2(1, 1)], Adjacency::Cu(2)).unwrap();
        let l3 = space(img, MetricSpec::Lp(Rational::from_integer(3)));
        let d: f64 = l3.distance(&p2(0, 0), &p2(1, 1)).unwrap();
        assert!((d - 2f64.powf(1.0 / 3.0)).abs() < 1e-12);
    }

    #[test]
    fn certificates() {
        let s = space(DigitalImage::interval(0, 5).unwrap(), MetricSpec::l1());
        assert_eq!(s.discreteness_certificate::<Surd>().unwrap().epsilon, Surd::from_integer(1));
        let img = DigitalImage::new([p2(0, 0), p2(2, 0)], Adjacency::Cu(1)).unwrap();
        let s = space(img, MetricSpec::l2());
        assert_eq!(s.discreteness_certificate::<Surd>().unwrap().epsilon, Surd::from_integer(2));
        let single = space(DigitalImage::interval(4, 4).unwrap(), MetricSpec::l2());
        let cert = single.discreteness_certificate::<Surd>().unwrap();
        assert_eq!(cert.epsilon, Surd::from_integer(1));
        assert!(cert.closest_pair.is_none());
    }

    #[test]
    fn hausdorff_examples() {
        let s = space(DigitalImage::interval(0, 3).unwrap(), MetricSpec::l1());
        let pts = |v: &[i64]| v.iter().map(|&x| Point::scalar(x)).collect::<Vec<_>>();
        assert_eq!(s.hausdorff::<Surd>(&pts(&[0, 1]), &pts(&[0, 1])).unwrap(), Surd::zero());
        assert_eq!(s.hausdorff::<Surd>(&pts(&[0]), &pts(&[0, 1])).unwrap(), Surd::from_integer(1));
        // Brute force: from {0,3} to {1}: max(1, 2) = 2; from {1} to {0,3}: 1.
        assert_eq!(s.hausdorff::<Surd>(&pts(&[0, 3]), &pts(&[1])).unwrap(), Surd::from_integer(2));
        assert_eq!(s.hausdorff::<Surd>(&[], &pts(&[1])), Err(Error::EmptySubset));
    }
}
