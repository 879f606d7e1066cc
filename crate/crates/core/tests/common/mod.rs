#![allow(dead_code)]

use std::sync::Arc;

use digitop::{Adjacency, DigitalImage, Point, SelfMap};
use proptest::prelude::*;

/// `c_u` adjacency written out from the definition.
pub fn adjacent(x: &[i64], y: &[i64], u: usize) -> bool {
    let diffs: Vec<i64> = x.iter().zip(y).map(|(a, b)| (a - b).abs()).collect();
    let moved = diffs.iter().filter(|&&d| d != 0).count();
    diffs.iter().all(|&d| d <= 1) && moved >= 1 && moved <= u
}

/// Connectivity of `subset` (indices into `pts`) by flood fill.
pub fn connected(pts: &[Point], subset: &[usize], u: usize) -> bool {
    if subset.is_empty() {
        return true;
    }
    let mut seen = vec![subset[0]];
    let mut frontier = vec![subset[0]];
    while let Some(i) = frontier.pop() {
        for &j in subset {
            if !seen.contains(&j) && adjacent(pts[i].coords(), pts[j].coords(), u) {
                seen.push(j);
                frontier.push(j);
            }
        }
    }
    seen.len() == subset.len()
}

/// Floyd-Warshall hop counts; `u32::MAX` when unreachable.
pub fn hops(pts: &[Point], u: usize) -> Vec<Vec<u32>> {
    let n = pts.len();
    let inf = u32::MAX / 2;
    let mut d = vec![vec![inf; n]; n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                d[i][j] = 0;
            } else if adjacent(pts[i].coords(), pts[j].coords(), u) {
                d[i][j] = 1;
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                d[i][j] = d[i][j].min(d[i][k] + d[k][j]);
            }
        }
    }
    d
}

fn offsets(dim: usize, u: usize) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..dim {
        out = out.into_iter().flat_map(|v| [-1, 0, 1].map(|c| [v.clone(), vec![c]].concat())).collect();
    }
    out.into_iter()
        .filter(|v| {
            let moved = v.iter().filter(|&&c| c != 0).count();
            moved >= 1 && moved <= u
        })
        .collect()
}

/// Grows a connected image by attaching neighbours to existing points.
pub fn grow(dim: usize, u: usize, steps: &[(usize, usize)]) -> DigitalImage {
    let offs = offsets(dim, u);
    let mut pts = vec![vec![0i64; dim]];
    for &(from, dir) in steps {
        let base = &pts[from % pts.len()];
        let next: Vec<i64> = base.iter().zip(&offs[dir % offs.len()]).map(|(a, b)| a + b).collect();
        if !pts.contains(&next) {
            pts.push(next);
        }
    }
    DigitalImage::new(pts.into_iter().map(|c| Point::new(c).unwrap()), Adjacency::Cu(u)).unwrap()
}

/// A connected image in `Z^1` or `Z^2` with at most `max` points.
pub fn connected_image(max: usize) -> impl Strategy<Value = Arc<DigitalImage>> {
    (1usize..=2, 1usize..=2, prop::collection::vec((0usize..16, 0usize..16), 0..max)).prop_map(|(dim, u, steps)| {
        let u = u.min(dim);
        Arc::new(grow(dim, u, &steps))
    })
}

/// An arbitrary (possibly disconnected) image of at most `max` points in a
/// 4x4 box.
pub fn any_image(max: usize) -> impl Strategy<Value = Arc<DigitalImage>> {
    (1usize..=2, prop::collection::btree_set((0i64..4, 0i64..4), 1..=max)).prop_map(|(u, cells)| {
        let pts = cells.into_iter().map(|(a, b)| Point::from([a, b]));
        Arc::new(DigitalImage::new(pts, Adjacency::Cu(u)).unwrap())
    })
}

/// An image together with a table of `k` self-maps.
pub fn with_maps(
    img: impl Strategy<Value = Arc<DigitalImage>>,
    k: usize,
) -> impl Strategy<Value = (Arc<DigitalImage>, Vec<SelfMap>)> {
    img.prop_flat_map(move |img| {
        let n = img.len();
        let tables = prop::collection::vec(prop::collection::vec(0..n, n), k);
        (Just(img), tables)
    })
    .prop_map(|(img, tables)| {
        let maps = tables.into_iter().map(|t| SelfMap::from_indices(Arc::clone(&img), t).unwrap()).collect();
        (img, maps)
    })
}
