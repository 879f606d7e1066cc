//! Digital images: finite sets of lattice points in Z^n together with a c_u
//! adjacency relation.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point of Z^n. Points order lexicographically.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point(Vec<i64>);

impl Point {
    pub fn new(coords: impl Into<Vec<i64>>) -> Result<Self> {
        let coords = coords.into();
        if coords.is_empty() {
            return Err(Error::ZeroDimension);
        }
        Ok(Point(coords))
    }

    /// A point of Z^1.
    pub fn scalar(x: i64) -> Self {
        Point(vec![x])
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

impl From<i64> for Point {
    fn from(x: i64) -> Self {
        Point::scalar(x)
    }
}

impl<const N: usize> From<[i64; N]> for Point {
    fn from(c: [i64; N]) -> Self {
        assert!(N > 0, "points need at least one coordinate");
        Point(c.to_vec())
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let [x] = self.0.as_slice() {
            return write!(f, "{x}");
        }
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// The c_u adjacency of Z^n: distinct points whose coordinates differ by at
/// most 1, in at most `u` positions.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum Adjacency {
    Cu(usize),
}

impl Adjacency {
    pub fn u(&self) -> usize {
        match self {
            Adjacency::Cu(u) => *u,
        }
    }

    pub fn validate(&self, dim: usize) -> Result<()> {
        let u = self.u();
        if u == 0 || u > dim {
            return Err(Error::AdjacencyOutOfRange { u, dim });
        }
        Ok(())
    }
}

impl fmt::Display for Adjacency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c_{}", self.u())
    }
}

/// Decides c_u adjacency of two points.
pub fn adjacent(x: &Point, y: &Point, adj: Adjacency) -> Result<bool> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch { expected: x.dim(), found: y.dim() });
    }
    adj.validate(x.dim())?;
    Ok(adjacent_coords(x.coords(), y.coords(), adj.u()))
}

pub(crate) fn adjacent_coords(x: &[i64], y: &[i64], u: usize) -> bool {
    let mut differing = 0usize;
    for (a, b) in x.iter().zip(y) {
        match a.abs_diff(*b) {
            0 => {}
            1 => differing += 1,
            _ => return false,
        }
    }
    (1..=u).contains(&differing)
}

/// Result of [`DigitalImage::is_path`].
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PathCheck {
    /// A valid path of the given length (number of steps).
    Length(usize),
    /// Members `index` and `index + 1` are not adjacent.
    BrokenAt(usize),
}

/// A digital image `(X, c_u)`. Points are kept in lexicographic order; that
/// order indexes every map table in the crate.
#[derive(Clone, Debug)]
pub struct DigitalImage {
    dim: usize,
    adjacency: Adjacency,
    points: Vec<Point>,
    index: HashMap<Point, usize>,
}

impl PartialEq for DigitalImage {
    fn eq(&self, other: &Self) -> bool {
        self.adjacency == other.adjacency && self.points == other.points
    }
}

impl Eq for DigitalImage {}

impl DigitalImage {
    pub fn new(points: impl IntoIterator<Item = Point>, adjacency: Adjacency) -> Result<Self> {
        let mut points: Vec<Point> = points.into_iter().collect();
        let dim = points.first().ok_or(Error::EmptyImage)?.dim();
        for p in &points {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: p.dim() });
            }
        }
        adjacency.validate(dim)?;
        points.sort();
        if let Some(w) = points.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicatePoint(w[0].clone()));
        }
        let index = points.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        Ok(DigitalImage { dim, adjacency, points, index })
    }

    /// The digital interval `[a, b]_Z` with c_1 adjacency.
    pub fn interval(a: i64, b: i64) -> Result<Self> {
        if a > b {
            return Err(Error::InvalidInterval { a, b });
        }
        Self::new((a..=b).map(Point::scalar), Adjacency::Cu(1))
    }

    /// The rectangle `[0, w-1] x [0, h-1]` in Z^2.
    pub fn grid(w: usize, h: usize, adjacency: Adjacency) -> Result<Self> {
        let points = (0..w as i64).flat_map(|x| (0..h as i64).map(move |y| Point(vec![x, y])));
        Self::new(points, adjacency)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn adjacency(&self) -> Adjacency {
        self.adjacency
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &Point {
        &self.points[i]
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.index.contains_key(p)
    }

    pub fn index_of(&self, p: &Point) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn require(&self, p: &Point) -> Result<usize> {
        self.index_of(p).ok_or_else(|| Error::PointNotInImage(p.clone()))
    }

    pub fn adjacent_idx(&self, i: usize, j: usize) -> bool {
        adjacent_coords(self.points[i].coords(), self.points[j].coords(), self.adjacency.u())
    }

    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&j| self.adjacent_idx(i, j))
    }

    /// Adjacent index pairs `(i, j)` with `i < j`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.len()).flat_map(move |i| ((i + 1)..self.len()).filter(move |&j| self.adjacent_idx(i, j)).map(move |j| (i, j)))
    }

    /// Component label of each point, labels numbered by first appearance.
    pub fn component_labels(&self) -> Vec<usize> {
        const UNSEEN: usize = usize::MAX;
        let mut label = vec![UNSEEN; self.len()];
        let mut next = 0;
        let mut stack = Vec::new();
        for start in 0..self.len() {
            if label[start] != UNSEEN {
                continue;
            }
            label[start] = next;
            stack.push(start);
            while let Some(i) = stack.pop() {
                for j in self.neighbors(i) {
                    if label[j] == UNSEEN {
                        label[j] = next;
                        stack.push(j);
                    }
                }
            }
            next += 1;
        }
        label
    }

    /// The κ-components, each in lexicographic order.
    pub fn components(&self) -> Vec<Vec<Point>> {
        let labels = self.component_labels();
        let count = labels.iter().max().map_or(0, |m| m + 1);
        let mut blocks = vec![Vec::new(); count];
        for (i, l) in labels.into_iter().enumerate() {
            blocks[l].push(self.points[i].clone());
        }
        blocks
    }

    pub fn is_connected(&self) -> bool {
        self.component_labels().iter().all(|&l| l == 0)
    }

    /// Whether the indexed subset is connected in the induced adjacency.
    pub fn subset_connected(&self, subset: &[usize]) -> bool {
        let Some(&first) = subset.first() else {
            return true;
        };
        let mut seen = vec![false; subset.len()];
        seen[0] = true;
        let mut stack = vec![first];
        let mut reached = 1;
        while let Some(i) = stack.pop() {
            for (k, &j) in subset.iter().enumerate() {
                if !seen[k] && self.adjacent_idx(i, j) {
                    seen[k] = true;
                    reached += 1;
                    stack.push(j);
                }
            }
        }
        reached == subset.len()
    }

    pub fn is_path(&self, seq: &[Point]) -> Result<PathCheck> {
        if seq.is_empty() {
            return Err(Error::Unsupported("a path needs at least one point".into()));
        }
        let idx = seq.iter().map(|p| self.require(p)).collect::<Result<Vec<_>>>()?;
        for (k, w) in idx.windows(2).enumerate() {
            if !self.adjacent_idx(w[0], w[1]) {
                return Ok(PathCheck::BrokenAt(k));
            }
        }
        Ok(PathCheck::Length(seq.len() - 1))
    }
}

/// `[a, b]_Z` with c_1 adjacency.
pub fn digital_interval(a: i64, b: i64) -> Result<DigitalImage> {
    DigitalImage::interval(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p2(x: i64, y: i64) -> Point {
        Point::from([x, y])
    }

    #[test]
    fn adjacency_examples() {
        assert!(!adjacent(&p2(0, 0), &p2(1, 1), Adjacency::Cu(1)).unwrap());
        assert!(adjacent(&p2(0, 0), &p2(1, 1), Adjacency::Cu(2)).unwrap());
        assert!(!adjacent(&p2(0, 0), &p2(0, 2), Adjacency::Cu(2)).unwrap());
        assert!(!adjacent(&p2(0, 0), &p2(0, 0), Adjacency::Cu(2)).unwrap());
    }

    #[test]
    fn adjacency_errors() {
        assert_eq!(
            adjacent(&p2(0, 0), &Point::scalar(0), Adjacency::Cu(1)),
            Err(Error::DimensionMismatch { expected: 2, found: 1 })
        );
        assert_eq!(
            adjacent(&p2(0, 0), &p2(0, 1), Adjacency::Cu(3)),
            Err(Error::AdjacencyOutOfRange { u: 3, dim: 2 })
        );
        assert!(adjacent(&p2(0, 0), &p2(0, 1), Adjacency::Cu(0)).is_err());
    }

    #[test]
    fn components_examples() {
        let img = DigitalImage::interval(0, 2).unwrap();
        assert_eq!(img.components().len(), 1);
        let gap = DigitalImage::new([0, 2].map(Point::scalar), Adjacency::Cu(1)).unwrap();
        assert_eq!(gap.components(), vec![vec![Point::scalar(0)], vec![Point::scalar(2)]]);
        let diag = DigitalImage::new([p2(0, 0), p2(1, 1)], Adjacency::Cu(2)).unwrap();
        assert!(diag.is_connected());
        let diag1 = DigitalImage::new([p2(0, 0), p2(1, 1)], Adjacency::Cu(1)).unwrap();
        assert!(!diag1.is_connected());
    }

    #[test]
    fn paths() {
        let img = DigitalImage::interval(0, 2).unwrap();
        let pts = |v: &[i64]| v.iter().map(|&x| Point::scalar(x)).collect::<Vec<_>>();
        assert_eq!(img.is_path(&pts(&[0, 1, 2])).unwrap(), PathCheck::Length(2));
        assert_eq!(img.is_path(&pts(&[0])).unwrap(), PathCheck::Length(0));
        assert_eq!(img.is_path(&pts(&[0, 2])).unwrap(), PathCheck::BrokenAt(0));
        assert_eq!(img.is_path(&pts(&[0, 5])), Err(Error::PointNotInImage(Point::scalar(5))));
    }

    #[test]
    fn intervals() {
        assert_eq!(DigitalImage::interval(0, 1).unwrap().len(), 2);
        let single = DigitalImage::interval(3, 3).unwrap();
        assert_eq!(single.points(), &[Point::scalar(3)]);
        let four = DigitalImage::interval(0, 3).unwrap();
        assert_eq!(four.len(), 4);
        assert!(four.is_connected());
        assert_eq!(DigitalImage::interval(2, 1).unwrap_err(), Error::InvalidInterval { a: 2, b: 1 });
    }

    #[test]
    fn image_validation() {
        assert_eq!(DigitalImage::new(Vec::new(), Adjacency::Cu(1)).unwrap_err(), Error::EmptyImage);
        assert_eq!(
            DigitalImage::new([Point::scalar(1), Point::scalar(1)], Adjacency::Cu(1)).unwrap_err(),
            Error::DuplicatePoint(Point::scalar(1))
        );
        assert!(DigitalImage::new([Point::scalar(1), p2(1, 1)], Adjacency::Cu(1)).is_err());
    }

    #[test]
    fn lattice_neighbor_counts() {
        for n in 1..=3u32 {
            let origin = Point(vec![0; n as usize]);
            let mut count = 0;
            for code in 0..3i64.pow(n) {
                let mut c = code;
                let coords: Vec<i64> = (0..n)
                    .map(|_| {
                        let d = c % 3 - 1;
                        c /= 3;
                        d
                    })
                    .collect();
                if adjacent(&origin, &Point(coords), Adjacency::Cu(n as usize)).unwrap() {
                    count += 1;
                }
            }
            assert_eq!(count, 3i64.pow(n) - 1);
        }
    }
}
