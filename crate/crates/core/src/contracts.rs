//! Exact evaluation of contractive-type conditions over all ordered pairs of
//! a finite digital metric space.
//!
//! Every single-parameter condition has the shape `lhs(x, y) <= c * base(x, y)`.
//! Such a condition holds for some constant iff it holds at the least one,
//! `max lhs / base` over pairs with `lhs > 0`, which is reported alongside
//! the verdict. When some pair has `lhs > 0` and `base = 0` no constant
//! works. Pairs are visited in lexicographic order, diagonal included, so the
//! reported witness is the least violating pair.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::mapkit::SelfMap;
use crate::metric::DigitalMetricSpace;
use crate::scalar::{format_rational, Rational, Scalar};
use crate::space::Point;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ConditionKind {
    /// Some `k < 1` satisfies the Banach inequality.
    Contraction,
    Banach { k: Rational },
    Kannan { a: Rational, b: Rational },
    Quasi { r: Rational },
    Ciric5 { r: Rational },
    PairDomination { rho: Rational },
    Saluja { xi: Rational },
    ParvRational,
    WeaklyCommutative,
    Compatible,
}

impl fmt::Display for ConditionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let q = format_rational;
        match self {
            ConditionKind::Contraction => write!(f, "contraction(k<1)"),
            ConditionKind::Banach { k } => write!(f, "banach(k={})", q(k)),
            ConditionKind::Kannan { a, b } => write!(f, "kannan(a={}, b={})", q(a), q(b)),
            ConditionKind::Quasi { r } => write!(f, "quasi(r={})", q(r)),
            ConditionKind::Ciric5 { r } => write!(f, "ciric5(r={})", q(r)),
            ConditionKind::PairDomination { rho } => write!(f, "pair_domination(rho={})", q(rho)),
            ConditionKind::Saluja { xi } => write!(f, "saluja(xi={})", q(xi)),
            ConditionKind::ParvRational => write!(f, "parv_rational"),
            ConditionKind::WeaklyCommutative => write!(f, "weakly_commutative"),
            ConditionKind::Compatible => write!(f, "compatible"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    Pair(Point, Point),
    Point(Point),
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Pair(x, y) => write!(f, "({x}, {y})"),
            Witness::Point(x) => write!(f, "{x}"),
        }
    }
}

/// An exact nonnegative ratio `numerator / denominator` with a positive
/// denominator. Ratios compare by cross-multiplication.
#[derive(Clone, Debug, PartialEq)]
pub struct ConstantRatio<S> {
    pub numerator: S,
    pub denominator: S,
}

impl<S: Scalar> ConstantRatio<S> {
    pub fn zero() -> Self {
        ConstantRatio { numerator: S::zero(), denominator: S::from_integer(1) }
    }

    pub fn from_rational(q: &Rational) -> Self {
        ConstantRatio { numerator: S::from_rational(q), denominator: S::from_integer(1) }
    }

    pub fn compare(&self, other: &Self) -> Ordering {
        (self.numerator.clone() * other.denominator.clone())
            .compare(&(other.numerator.clone() * self.denominator.clone()))
    }

    pub fn compare_rational(&self, q: &Rational) -> Ordering {
        self.numerator.compare(&self.denominator.scale(q))
    }

    pub fn to_f64(&self) -> f64 {
        self.numerator.to_f64() / self.denominator.to_f64()
    }

    /// `lhs <= self * base`, evaluated as `lhs * den <= num * base`.
    fn admits(&self, lhs: &S, base: &S) -> bool {
        (lhs.clone() * self.denominator.clone()).le(&(self.numerator.clone() * base.clone()))
    }
}

impl<S: Scalar> fmt::Display for ConstantRatio<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&S::ratio_text(&self.numerator, &self.denominator))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum MinimalConstant<S> {
    /// The condition has no single scaling constant.
    NotApplicable,
    Value(ConstantRatio<S>),
    /// Some pair has a positive left side and a zero right side.
    NonePossible,
}

impl<S: Scalar> MinimalConstant<S> {
    pub fn value(&self) -> Option<&ConstantRatio<S>> {
        match self {
            MinimalConstant::Value(v) => Some(v),
            _ => None,
        }
    }

    /// True when some constant strictly below `bound` satisfies the condition.
    pub fn admits_below(&self, bound: &Rational) -> bool {
        self.value().is_some_and(|v| v.compare_rational(bound) == Ordering::Less)
    }
}

impl<S: Scalar> fmt::Display for MinimalConstant<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MinimalConstant::NotApplicable => write!(f, "n/a"),
            MinimalConstant::Value(v) => write!(f, "{v}"),
            MinimalConstant::NonePossible => write!(f, "none possible"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConditionReport<S> {
    pub kind: ConditionKind,
    pub holds: bool,
    /// Least violating pair (or point, for pointwise conditions).
    pub witness: Option<Witness>,
    pub minimal_constant: MinimalConstant<S>,
    /// Pairs where the condition's expression is undefined (`0/0`).
    pub undefined_pairs: Vec<(Point, Point)>,
    /// Set when the verdict relies on the finite-space reduction of a
    /// limit-based definition.
    pub finite_space_reduction: bool,
}

impl<S> ConditionReport<S> {
    fn new(kind: ConditionKind, witness: Option<Witness>, minimal_constant: MinimalConstant<S>) -> Self {
        ConditionReport {
            kind,
            holds: witness.is_none(),
            witness,
            minimal_constant,
            undefined_pairs: Vec::new(),
            finite_space_reduction: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PairDominationReport<S> {
    pub condition: ConditionReport<S>,
    /// `H(X) ⊆ G(X)`.
    pub range_inclusion: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SalujaReport<S> {
    pub condition: ConditionReport<S>,
    pub first_constant: bool,
    pub second_constant: bool,
}

impl<S> SalujaReport<S> {
    pub fn both_constant(&self) -> bool {
        self.first_constant && self.second_constant
    }
}

fn check_unit_interval(name: &'static str, value: &Rational) -> Result<()> {
    if *value < Rational::from_integer(0) || *value >= Rational::from_integer(1) {
        return Err(Error::ParameterOutOfRange { name, value: format_rational(value), range: "[0, 1)" });
    }
    Ok(())
}

fn check_nonnegative(name: &'static str, value: &Rational) -> Result<()> {
    if *value < Rational::from_integer(0) {
        return Err(Error::ParameterOutOfRange { name, value: format_rational(value), range: "[0, inf)" });
    }
    Ok(())
}

fn prepare<S: Scalar>(space: &DigitalMetricSpace, maps: &[&SelfMap]) -> Result<()> {
    space.ensure_scalar::<S>()?;
    if maps.iter().any(|m| !m.on_domain(space.image())) {
        return Err(Error::DomainMismatch);
    }
    Ok(())
}

struct HomogeneousScan<S> {
    witness: Option<(usize, usize)>,
    minimal: MinimalConstant<S>,
}

/// Scans `lhs <= c * base` over ordered pairs for the constant `c`.
fn scan_homogeneous<S: Scalar>(
    n: usize,
    constant: &ConstantRatio<S>,
    mut terms: impl FnMut(usize, usize) -> (S, S),
) -> HomogeneousScan<S> {
    let mut witness = None;
    let mut best = ConstantRatio::zero();
    let mut impossible = false;
    for i in 0..n {
        for j in 0..n {
            let (lhs, base) = terms(i, j);
            if witness.is_none() && !constant.admits(&lhs, &base) {
                witness = Some((i, j));
            }
            if impossible || !lhs.is_positive() {
                continue;
            }
            if !base.is_positive() {
                impossible = true;
                continue;
            }
            let candidate = ConstantRatio { numerator: lhs, denominator: base };
            if candidate.compare(&best) == Ordering::Greater {
                best = candidate;
            }
        }
    }
    let minimal = if impossible { MinimalConstant::NonePossible } else { MinimalConstant::Value(best) };
    HomogeneousScan { witness, minimal }
}

fn pair_witness(space: &DigitalMetricSpace, w: Option<(usize, usize)>) -> Option<Witness> {
    w.map(|(i, j)| Witness::Pair(space.image().point(i).clone(), space.image().point(j).clone()))
}

fn homogeneous_report<S: Scalar>(
    space: &DigitalMetricSpace,
    kind: ConditionKind,
    constant: &Rational,
    terms: impl FnMut(usize, usize) -> (S, S),
) -> ConditionReport<S> {
    let scan = scan_homogeneous(space.len(), &ConstantRatio::from_rational(constant), terms);
    ConditionReport::new(kind, pair_witness(space, scan.witness), scan.minimal)
}

fn banach_terms<'a, S: Scalar>(space: &'a DigitalMetricSpace, f: &'a SelfMap) -> impl FnMut(usize, usize) -> (S, S) + 'a {
    move |i, j| (space.distance_idx(f.apply_idx(i), f.apply_idx(j)), space.distance_idx(i, j))
}

/// `d(fx, fy) <= k d(x, y)` for all x, y.
pub fn check_banach<S: Scalar>(space: &DigitalMetricSpace, f: &SelfMap, k: Rational) -> Result<ConditionReport<S>> {
    check_unit_interval("k", &k)?;
    prepare::<S>(space, &[f])?;
    Ok(homogeneous_report(space, ConditionKind::Banach { k }, &k, banach_terms(space, f)))
}

/// Whether the Banach inequality holds with an exact (possibly irrational)
/// constant.
pub fn banach_holds_at<S: Scalar>(space: &DigitalMetricSpace, f: &SelfMap, k: &ConstantRatio<S>) -> Result<bool> {
    prepare::<S>(space, &[f])?;
    Ok(scan_homogeneous(space.len(), k, banach_terms(space, f)).witness.is_none())
}

/// The least Lipschitz constant `max d(fx, fy) / d(x, y)` over distinct
/// pairs; zero on a singleton.
pub fn lipschitz_min<S: Scalar>(space: &DigitalMetricSpace, f: &SelfMap) -> Result<ConstantRatio<S>> {
    prepare::<S>(space, &[f])?;
    let scan = scan_homogeneous(space.len(), &ConstantRatio::zero(), banach_terms(space, f));
    match scan.minimal {
        MinimalConstant::Value(v) => Ok(v),
        _ => unreachable!("d(x, y) = 0 forces d(fx, fy) = 0"),
    }
}

/// `d(Tx, Ty) <= a [d(x, Tx) + d(y, Ty)] + b [d(x, Ty) + d(Tx, y)]`.
///
/// The reported minimal constant is the least `s` for which the inequality
/// holds with `a = b = s`.
pub fn check_kannan<S: Scalar>(space: &DigitalMetricSpace, t: &SelfMap, a: Rational, b: Rational) -> Result<ConditionReport<S>> {
    check_nonnegative("a", &a)?;
    check_nonnegative("b", &b)?;
    prepare::<S>(space, &[t])?;
    let n = space.len();
    let d = |i: usize, j: usize| space.distance_idx::<S>(i, j);
    let mut witness = None;
    for i in 0..n {
        for j in 0..n {
            let (ti, tj) = (t.apply_idx(i), t.apply_idx(j));
            let lhs = d(ti, tj);
            let rhs = (d(i, ti) + d(j, tj)).scale(&a) + (d(i, tj) + d(ti, j)).scale(&b);
            if !lhs.le(&rhs) {
                witness = Some((i, j));
                break;
            }
        }
        if witness.is_some() {
            break;
        }
    }
    let symmetric = scan_homogeneous(n, &ConstantRatio::zero(), |i, j| {
        let (ti, tj) = (t.apply_idx(i), t.apply_idx(j));
        (d(ti, tj), d(i, ti) + d(j, tj) + d(i, tj) + d(ti, j))
    });
    Ok(ConditionReport::new(ConditionKind::Kannan { a, b }, pair_witness(space, witness), symmetric.minimal))
}

fn max_of<S: Scalar>(values: impl IntoIterator<Item = S>) -> S {
    values.into_iter().reduce(S::max_of).unwrap_or_else(S::zero)
}

fn quasi_terms<'a, S: Scalar>(space: &'a DigitalMetricSpace, t: &'a SelfMap) -> impl FnMut(usize, usize) -> (S, S) + 'a {
    let d = move |i: usize, j: usize| space.distance_idx::<S>(i, j);
    move |i, j| {
        let (ti, tj) = (t.apply_idx(i), t.apply_idx(j));
        (d(ti, tj), max_of([d(i, j), d(i, ti), d(j, tj)]))
    }
}

fn ciric5_terms<'a, S: Scalar>(space: &'a DigitalMetricSpace, t: &'a SelfMap) -> impl FnMut(usize, usize) -> (S, S) + 'a {
    let d = move |i: usize, j: usize| space.distance_idx::<S>(i, j);
    move |i, j| {
        let (ti, tj) = (t.apply_idx(i), t.apply_idx(j));
        (d(ti, tj), max_of([d(i, j), d(i, ti), d(j, tj), d(i, tj), d(ti, j)]))
    }
}

fn domination_terms<'a, S: Scalar>(
    space: &'a DigitalMetricSpace,
    g: &'a SelfMap,
    h: &'a SelfMap,
) -> impl FnMut(usize, usize) -> (S, S) + 'a {
    move |i, j| (space.distance_idx(h.apply_idx(i), h.apply_idx(j)), space.distance_idx(g.apply_idx(i), g.apply_idx(j)))
}

fn saluja_terms<'a, S: Scalar>(
    space: &'a DigitalMetricSpace,
    j_map: &'a SelfMap,
    k_map: &'a SelfMap,
) -> impl FnMut(usize, usize) -> (S, S) + 'a {
    move |u, q| {
        let dk: S = space.distance_idx(k_map.apply_idx(u), k_map.apply_idx(q));
        (space.distance_idx::<S>(j_map.apply_idx(u), j_map.apply_idx(q)) + dk.clone(), dk)
    }
}

/// Verdict only, stopping at the first violating pair.
fn holds_quick<S: Scalar>(n: usize, constant: &Rational, mut terms: impl FnMut(usize, usize) -> (S, S)) -> bool {
    let c = ConstantRatio::from_rational(constant);
    (0..n).all(|i| {
        (0..n).all(|j| {
            let (lhs, base) = terms(i, j);
            c.admits(&lhs, &base)
        })
    })
}

fn range_included(g: &SelfMap, h: &SelfMap) -> bool {
    let g_range = g.range_indices();
    h.range_indices().iter().all(|v| g_range.binary_search(v).is_ok())
}

/// `d(Tx, Ty) <= r max{d(x, y), d(x, Tx), d(y, Ty)}`.
pub fn check_quasi<S: Scalar>(space: &DigitalMetricSpace, t: &SelfMap, r: Rational) -> Result<ConditionReport<S>> {
    check_unit_interval("r", &r)?;
    prepare::<S>(space, &[t])?;
    Ok(homogeneous_report(space, ConditionKind::Quasi { r }, &r, quasi_terms(space, t)))
}

pub(crate) fn quasi_holds<S: Scalar>(space: &DigitalMetricSpace, t: &SelfMap, r: Rational) -> Result<bool> {
    check_unit_interval("r", &r)?;
    prepare::<S>(space, &[t])?;
    Ok(holds_quick::<S>(space.len(), &r, quasi_terms(space, t)))
}

/// `d(Tx, Ty) <= r max{d(x, y), d(x, Tx), d(y, Ty), d(x, Ty), d(Tx, y)}`.
pub fn check_ciric5<S: Scalar>(space: &DigitalMetricSpace, t: &SelfMap, r: Rational) -> Result<ConditionReport<S>> {
    check_unit_interval("r", &r)?;
    prepare::<S>(space, &[t])?;
    Ok(homogeneous_report(space, ConditionKind::Ciric5 { r }, &r, ciric5_terms(space, t)))
}

pub(crate) fn ciric5_holds<S: Scalar>(space: &DigitalMetricSpace, t: &SelfMap, r: Rational) -> Result<bool> {
    check_unit_interval("r", &r)?;
    prepare::<S>(space, &[t])?;
    Ok(holds_quick::<S>(space.len(), &r, ciric5_terms(space, t)))
}

/// `d(Hx, Hy) <= rho d(Gx, Gy)`, with the range inclusion `H(X) ⊆ G(X)`.
pub fn check_pair_domination<S: Scalar>(
    space: &DigitalMetricSpace,
    g: &SelfMap,
    h: &SelfMap,
    rho: Rational,
) -> Result<PairDominationReport<S>> {
    check_unit_interval("rho", &rho)?;
    prepare::<S>(space, &[g, h])?;
    let condition = homogeneous_report(space, ConditionKind::PairDomination { rho }, &rho, domination_terms(space, g, h));
    Ok(PairDominationReport { condition, range_inclusion: range_included(g, h) })
}

/// Returns (inequality holds, range inclusion holds).
pub(crate) fn pair_domination_holds<S: Scalar>(
    space: &DigitalMetricSpace,
    g: &SelfMap,
    h: &SelfMap,
    rho: Rational,
) -> Result<(bool, bool)> {
    check_unit_interval("rho", &rho)?;
    prepare::<S>(space, &[g, h])?;
    Ok((holds_quick::<S>(space.len(), &rho, domination_terms(space, g, h)), range_included(g, h)))
}

/// `d(Ju, Jq) + d(Ku, Kq) <= xi d(Ku, Kq)`, plus whether J and K are
/// constant.
pub fn check_saluja<S: Scalar>(space: &DigitalMetricSpace, j_map: &SelfMap, k_map: &SelfMap, xi: Rational) -> Result<SalujaReport<S>> {
    check_unit_interval("xi", &xi)?;
    prepare::<S>(space, &[j_map, k_map])?;
    let condition = homogeneous_report(space, ConditionKind::Saluja { xi }, &xi, saluja_terms(space, j_map, k_map));
    Ok(SalujaReport {
        condition,
        first_constant: j_map.is_constant(),
        second_constant: k_map.is_constant(),
    })
}

pub(crate) fn saluja_holds<S: Scalar>(space: &DigitalMetricSpace, j_map: &SelfMap, k_map: &SelfMap, xi: Rational) -> Result<bool> {
    check_unit_interval("xi", &xi)?;
    prepare::<S>(space, &[j_map, k_map])?;
    Ok(holds_quick::<S>(space.len(), &xi, saluja_terms(space, j_map, k_map)))
}

/// `d(Tx, Sy) <= [d(x, Tx) d(x, Sy) + d(y, Sy) d(y, Tx)] / [d(x, Sy) + d(y, Tx)]`,
/// evaluated over the pairs where the denominator is nonzero. Pairs with a
/// zero denominator are collected in `undefined_pairs`.
pub fn parv_rational_check<S: Scalar>(space: &DigitalMetricSpace, t: &SelfMap, s: &SelfMap) -> Result<ConditionReport<S>> {
    prepare::<S>(space, &[t, s])?;
    let n = space.len();
    let d = |i: usize, j: usize| space.distance_idx::<S>(i, j);
    let mut witness = None;
    let mut undefined = Vec::new();
    for x in 0..n {
        for y in 0..n {
            let (tx, sy) = (t.apply_idx(x), s.apply_idx(y));
            let denom = d(x, sy) + d(y, tx);
            if !denom.is_positive() {
                undefined.push((space.image().point(x).clone(), space.image().point(y).clone()));
                continue;
            }
            if witness.is_some() {
                continue;
            }
            let numer = d(x, tx) * d(x, sy) + d(y, sy) * d(y, tx);
            if !(d(tx, sy) * denom).le(&numer) {
                witness = Some((x, y));
            }
        }
    }
    let mut report = ConditionReport::new(ConditionKind::ParvRational, pair_witness(space, witness), MinimalConstant::NotApplicable);
    report.undefined_pairs = undefined;
    Ok(report)
}

/// `d(S(T(x)), T(S(x))) <= d(S(x), T(x))` for every x.
pub fn weakly_commutative<S: Scalar>(space: &DigitalMetricSpace, s: &SelfMap, t: &SelfMap) -> Result<ConditionReport<S>> {
    prepare::<S>(space, &[s, t])?;
    let witness = (0..space.len()).find(|&x| {
        let (sx, tx) = (s.apply_idx(x), t.apply_idx(x));
        let lhs: S = space.distance_idx(s.apply_idx(tx), t.apply_idx(sx));
        !lhs.le(&space.distance_idx(sx, tx))
    });
    Ok(ConditionReport::new(
        ConditionKind::WeaklyCommutative,
        witness.map(|x| Witness::Point(space.image().point(x).clone())),
        MinimalConstant::NotApplicable,
    ))
}

/// Compatibility on a finite space: in a uniformly discrete space a sequence
/// with `S x_n` and `T x_n` converging to a common limit is eventually
/// constant at a coincidence point, so compatibility reduces to `S` and `T`
/// commuting at every coincidence point.
pub fn compatible<S: Scalar>(space: &DigitalMetricSpace, s: &SelfMap, t: &SelfMap) -> Result<ConditionReport<S>> {
    prepare::<S>(space, &[s, t])?;
    let witness = (0..space.len()).find(|&x| {
        let (sx, tx) = (s.apply_idx(x), t.apply_idx(x));
        sx == tx && s.apply_idx(tx) != t.apply_idx(sx)
    });
    let mut report = ConditionReport::new(
        ConditionKind::Compatible,
        witness.map(|x| Witness::Point(space.image().point(x).clone())),
        MinimalConstant::NotApplicable,
    );
    report.finite_space_reduction = true;
    Ok(report)
}
