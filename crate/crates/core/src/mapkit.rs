//! Self-maps of digital images stored as lookup tables, plus the symbolic
//! affine maps `x -> p x + q` of Z.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::{format_rational, Rational};
use crate::space::{DigitalImage, Point};

/// Largest image for which every self-map may be enumerated (6^6 maps).
pub const FPP_MAX_POINTS: usize = 6;

/// A total self-map `f: X -> X`. `table[i]` is the index of `f(x_i)` in the
/// image's lexicographic point order.
#[derive(Clone)]
pub struct SelfMap {
    domain: Arc<DigitalImage>,
    table: Vec<usize>,
}

impl PartialEq for SelfMap {
    fn eq(&self, other: &Self) -> bool {
        self.table == other.table && (Arc::ptr_eq(&self.domain, &other.domain) || self.domain == other.domain)
    }
}

impl Eq for SelfMap {}

impl fmt::Debug for SelfMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for SelfMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, &j) in self.table.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}->{}", self.domain.point(i), self.domain.point(j))?;
        }
        write!(f, "}}")
    }
}

impl SelfMap {
    pub fn from_indices(domain: Arc<DigitalImage>, table: Vec<usize>) -> Result<Self> {
        if table.len() != domain.len() {
            let missing = domain.point(table.len().min(domain.len() - 1)).clone();
            return Err(Error::PartialMap(missing));
        }
        if let Some(i) = table.iter().position(|&j| j >= domain.len()) {
            return Err(Error::Unsupported(format!(
                "table entry {i} refers to point index {} of a {}-point image",
                table[i],
                domain.len()
            )));
        }
        Ok(SelfMap { domain, table })
    }

    pub fn from_fn(domain: Arc<DigitalImage>, f: impl Fn(&Point) -> Point) -> Result<Self> {
        let table = domain
            .points()
            .iter()
            .map(|x| {
                let y = f(x);
                domain.index_of(&y).ok_or_else(|| Error::ValueOutsideDomain { input: x.clone(), value: y })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SelfMap { domain, table })
    }

    pub fn from_pairs(domain: Arc<DigitalImage>, pairs: &[(Point, Point)]) -> Result<Self> {
        let raw: Vec<(RawPoint, RawPoint)> = pairs.iter().map(|(x, y)| (RawPoint::from(x), RawPoint::from(y))).collect();
        validate_selfmap(domain, &raw)
    }

    pub fn identity(domain: Arc<DigitalImage>) -> Self {
        let table = (0..domain.len()).collect();
        SelfMap { domain, table }
    }

    pub fn constant(domain: Arc<DigitalImage>, value: &Point) -> Result<Self> {
        let c = domain.require(value)?;
        let table = vec![c; domain.len()];
        Ok(SelfMap { domain, table })
    }

    pub fn domain(&self) -> &DigitalImage {
        &self.domain
    }

    pub fn domain_arc(&self) -> &Arc<DigitalImage> {
        &self.domain
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn same_domain(&self, other: &SelfMap) -> bool {
        Arc::ptr_eq(&self.domain, &other.domain) || self.domain == other.domain
    }

    pub fn on_domain(&self, image: &DigitalImage) -> bool {
        std::ptr::eq(&*self.domain, image) || *self.domain == *image
    }

    #[inline]
    pub fn apply_idx(&self, i: usize) -> usize {
        self.table[i]
    }

    pub fn apply(&self, x: &Point) -> Result<Point> {
        let i = self.domain.require(x)?;
        Ok(self.domain.point(self.table[i]).clone())
    }

    /// `(x, f(x))` in domain order.
    pub fn pairs(&self) -> Vec<(Point, Point)> {
        self.table
            .iter()
            .enumerate()
            .map(|(i, &j)| (self.domain.point(i).clone(), self.domain.point(j).clone()))
            .collect()
    }

    pub fn is_constant(&self) -> bool {
        self.table.windows(2).all(|w| w[0] == w[1])
    }

    /// `self ∘ inner`, i.e. `x -> self(inner(x))`.
    pub fn compose(&self, inner: &SelfMap) -> Result<SelfMap> {
        if !self.same_domain(inner) {
            return Err(Error::DomainMismatch);
        }
        let table = inner.table.iter().map(|&j| self.table[j]).collect();
        Ok(SelfMap { domain: Arc::clone(&self.domain), table })
    }

    /// Sorted, deduplicated indices of `f(X)`.
    pub fn range_indices(&self) -> Vec<usize> {
        let mut r = self.table.clone();
        r.sort_unstable();
        r.dedup();
        r
    }

    pub fn fixed_point_indices(&self) -> Vec<usize> {
        (0..self.table.len()).filter(|&i| self.table[i] == i).collect()
    }

    pub fn fixed_points(&self) -> Vec<Point> {
        self.fixed_point_indices().into_iter().map(|i| self.domain.point(i).clone()).collect()
    }

    /// Digital continuity via the edge characterization: adjacent points must
    /// go to equal or adjacent points.
    pub fn is_continuous(&self) -> ContinuityVerdict {
        let broken = self.domain.edges().find(|&(i, j)| {
            let (fi, fj) = (self.table[i], self.table[j]);
            fi != fj && !self.domain.adjacent_idx(fi, fj)
        });
        ContinuityVerdict {
            continuous: broken.is_none(),
            witness: broken.map(|(i, j)| (self.domain.point(i).clone(), self.domain.point(j).clone())),
        }
    }

    /// Picard orbit from `x0`.
    pub fn orbit(&self, x0: &Point, max_steps: usize) -> Result<OrbitReport> {
        let start = self.domain.require(x0)?;
        Ok(run_orbit(&[self], start, max_steps))
    }
}

/// A pair of self-maps on a shared domain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapPair {
    pub first: SelfMap,
    pub second: SelfMap,
}

impl MapPair {
    pub fn new(first: SelfMap, second: SelfMap) -> Result<Self> {
        if !first.same_domain(&second) {
            return Err(Error::DomainMismatch);
        }
        Ok(MapPair { first, second })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContinuityVerdict {
    pub continuous: bool,
    /// An adjacent pair whose images are neither equal nor adjacent.
    pub witness: Option<(Point, Point)>,
}

/// A point given by possibly non-integer rational coordinates, as read from
/// an untrusted map description.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawPoint(pub Vec<Rational>);

impl From<&Point> for RawPoint {
    fn from(p: &Point) -> Self {
        RawPoint(p.coords().iter().map(|&c| Rational::from_integer(c)).collect())
    }
}

impl RawPoint {
    pub fn to_lattice(&self) -> Option<Point> {
        if self.0.is_empty() || !self.0.iter().all(|c| c.is_integer()) {
            return None;
        }
        Point::new(self.0.iter().map(|c| c.to_integer()).collect::<Vec<_>>()).ok()
    }
}

impl fmt::Display for RawPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let [x] = self.0.as_slice() {
            return write!(f, "{}", format_rational(x));
        }
        let parts: Vec<String> = self.0.iter().map(format_rational).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Builds a self-map from raw `(input, value)` entries, rejecting partial
/// maps, duplicate inputs, non-integer values and values outside the domain.
pub fn validate_selfmap(img: Arc<DigitalImage>, raw: &[(RawPoint, RawPoint)]) -> Result<SelfMap> {
    let mut table: Vec<Option<usize>> = vec![None; img.len()];
    for (input, value) in raw {
        for rp in [input, value] {
            if rp.0.len() != img.dim() {
                return Err(Error::DimensionMismatch { expected: img.dim(), found: rp.0.len() });
            }
        }
        let x = input.to_lattice().ok_or_else(|| Error::NonLatticeArgument(input.to_string()))?;
        let i = img.require(&x)?;
        if table[i].is_some() {
            return Err(Error::DuplicateAssignment(x));
        }
        let y = value.to_lattice().ok_or_else(|| Error::NonLatticeValue {
            input: x.to_string(),
            value: value.to_string(),
        })?;
        let j = img.index_of(&y).ok_or_else(|| Error::ValueOutsideDomain { input: x.clone(), value: y.clone() })?;
        table[i] = Some(j);
    }
    let table = table
        .iter()
        .enumerate()
        .map(|(i, v)| v.ok_or_else(|| Error::PartialMap(img.point(i).clone())))
        .collect::<Result<Vec<_>>>()?;
    Ok(SelfMap { domain: img, table })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrbitClass {
    /// `orbit[settle_index]` is a fixed point and the orbit stays there.
    EventuallyConstant { settle_index: usize, value: Point },
    /// The orbit repeats with the given minimal period from `start_index` on.
    EventuallyPeriodic { start_index: usize, period: usize },
    /// The step budget ran out before any repetition.
    Truncated,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitReport {
    /// `x_0, x_1, ...`, ending with the first point that closes the cycle.
    pub orbit: Vec<Point>,
    pub classification: OrbitClass,
}

impl OrbitReport {
    pub fn settled_at(&self) -> Option<&Point> {
        match &self.classification {
            OrbitClass::EventuallyConstant { value, .. } => Some(value),
            _ => None,
        }
    }
}

/// Iterates `maps[0], maps[1], ..., maps[k-1], maps[0], ...` from `start`.
///
/// Repetition is detected on (point, phase) states, after which the orbit is
/// trimmed to its eventual period. With a single map this is plain Picard
/// iteration and the orbit ends at the first repeated point.
pub(crate) fn run_orbit(maps: &[&SelfMap], start: usize, max_steps: usize) -> OrbitReport {
    let domain = maps[0].domain();
    let k = maps.len();
    let mut seq = vec![start];
    let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
    seen.insert((start, 0), 0);
    let mut repeat = None;
    for step in 0..max_steps {
        let next = maps[step % k].apply_idx(*seq.last().expect("nonempty"));
        seq.push(next);
        let m = seq.len() - 1;
        if let Some(&j) = seen.get(&(next, m % k)) {
            repeat = Some((j, m));
            break;
        }
        seen.insert((next, m % k), m);
    }
    let to_points = |s: &[usize]| s.iter().map(|&i| domain.point(i).clone()).collect::<Vec<_>>();
    let Some((j, m)) = repeat else {
        return OrbitReport { orbit: to_points(&seq), classification: OrbitClass::Truncated };
    };
    let cycle = m - j;
    let period = (1..=cycle)
        .filter(|p| cycle % p == 0)
        .find(|&p| (0..cycle).all(|i| seq[j + i] == seq[j + (i + p) % cycle]))
        .expect("the full cycle length is always a period");
    let mut start_index = j;
    while start_index > 0 && seq[start_index - 1] == seq[start_index - 1 + period] {
        start_index -= 1;
    }
    seq.truncate(start_index + period + 1);
    let classification = if period == 1 {
        OrbitClass::EventuallyConstant { settle_index: start_index, value: domain.point(seq[start_index]).clone() }
    } else {
        OrbitClass::EventuallyPeriodic { start_index, period }
    };
    OrbitReport { orbit: to_points(&seq), classification }
}

/// Number of self-maps of an `n`-point set, saturating.
pub fn map_count(n: usize) -> u128 {
    (n as u128).checked_pow(n as u32).unwrap_or(u128::MAX)
}

/// The `index`-th self-map in lexicographic table order (the first point's
/// value is the most significant digit).
pub fn map_from_index(domain: &Arc<DigitalImage>, mut index: u64) -> SelfMap {
    let n = domain.len();
    let mut table = vec![0usize; n];
    for slot in table.iter_mut().rev() {
        *slot = (index % n as u64) as usize;
        index /= n as u64;
    }
    SelfMap { domain: Arc::clone(domain), table }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FppVerdict {
    pub has_fpp: bool,
    /// A fixed-point-free map (continuous when continuity was required).
    pub witness: Option<SelfMap>,
    pub maps_examined: u64,
}

/// Decides whether every self-map (every continuous self-map, when
/// `restrict_continuous`) has a fixed point, by enumeration.
pub fn has_fpp(img: &Arc<DigitalImage>, restrict_continuous: bool) -> Result<FppVerdict> {
    if img.len() > FPP_MAX_POINTS {
        return Err(Error::BudgetExceeded {
            what: format!("fixed point property check on {} points", img.len()),
            needed: map_count(img.len()),
            limit: map_count(FPP_MAX_POINTS),
        });
    }
    let total = map_count(img.len()) as u64;
    let mut examined = 0;
    for index in 0..total {
        let f = map_from_index(img, index);
        if restrict_continuous && !f.is_continuous().continuous {
            continue;
        }
        examined += 1;
        if f.table.iter().enumerate().all(|(i, &j)| i != j) {
            return Ok(FppVerdict { has_fpp: false, witness: Some(f), maps_examined: examined });
        }
    }
    Ok(FppVerdict { has_fpp: true, witness: None, maps_examined: examined })
}

/// The affine map `x -> p x + q` of Z.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct AffineMapZ {
    pub p: i64,
    pub q: i64,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum AffineFixedPoints {
    None,
    All,
    Single(i64),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct AffineDomination {
    /// `|Hx - Hy| <= rho |Gx - Gy|` for all integers x, y.
    pub dominates: bool,
    /// `H(Z) ⊆ G(Z)`.
    pub range_inclusion: bool,
}

impl AffineMapZ {
    pub fn new(p: i64, q: i64) -> Self {
        AffineMapZ { p, q }
    }

    pub fn apply(&self, x: i64) -> i64 {
        self.p * x + self.q
    }

    pub fn fixed_points(&self) -> AffineFixedPoints {
        affine_analyze(*self)
    }
}

impl fmt::Display for AffineMapZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x -> {}x + {}", self.p, self.q)
    }
}

/// Solves `x = p x + q` over Z.
pub fn affine_analyze(m: AffineMapZ) -> AffineFixedPoints {
    if m.p == 1 {
        return if m.q == 0 { AffineFixedPoints::All } else { AffineFixedPoints::None };
    }
    // (1 - p) x = q
    let denom = 1 - m.p;
    if m.q % denom == 0 {
        AffineFixedPoints::Single(m.q / denom)
    } else {
        AffineFixedPoints::None
    }
}

/// Affine maps scale every distance by `|slope|`, so domination reduces to
/// `|p_H| <= rho |p_G|`; range inclusion is decided by residues.
pub fn affine_dominates(h: AffineMapZ, g: AffineMapZ, rho: Rational) -> Result<AffineDomination> {
    if rho < Rational::from_integer(0) {
        return Err(Error::ParameterOutOfRange { name: "rho", value: format_rational(&rho), range: "[0, 1)" });
    }
    let lhs = Rational::from_integer(h.p.abs());
    let dominates = lhs <= rho * Rational::from_integer(g.p.abs());
    let range_inclusion = if g.p == 0 {
        h.p == 0 && h.q == g.q
    } else {
        let modulus = g.p.abs();
        (h.q - g.q).rem_euclid(modulus) == 0 && h.p.rem_euclid(modulus) == 0
    };
    Ok(AffineDomination { dominates, range_inclusion })
}
