//! Theorem verifiers built on Picard iteration.
//!
//! On a finite space every orbit is eventually periodic, so "the iteration
//! converges" means "the orbit settles at a fixed point". Uniqueness is
//! checked by a full scan of `Fix(f)`; the descent estimates from the
//! classical proofs are checked termwise along every orbit as a second,
//! independent confirmation.

use std::fmt;

use rayon::prelude::*;

use crate::contracts::{check_kannan, lipschitz_min, ConditionKind, ConditionReport, MinimalConstant, Witness};
use crate::error::{Error, Result};
use crate::mapkit::{run_orbit, OrbitClass, OrbitReport, SelfMap};
use crate::metric::DigitalMetricSpace;
use crate::scalar::{format_rational, Rational, Scalar};
use crate::space::Point;

/// Starting points beyond this count are iterated in parallel.
const PARALLEL_STARTS: usize = 256;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TheoremVerdict {
    ConfirmsTheorem,
    /// The hypothesis holds but the conclusion fails, as described.
    RefutesAssertion(String),
    HypothesisFails,
}

impl fmt::Display for TheoremVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TheoremVerdict::ConfirmsTheorem => write!(f, "confirms theorem"),
            TheoremVerdict::RefutesAssertion(w) => write!(f, "refutes assertion: {w}"),
            TheoremVerdict::HypothesisFails => write!(f, "hypothesis fails"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TheoremReport<S> {
    pub hypothesis: ConditionReport<S>,
    pub fixed_points: Vec<Point>,
    /// The common limit of all orbits, when there is one.
    pub fixed_point: Option<Point>,
    pub unique: bool,
    /// One orbit per starting point, in point order.
    pub orbits: Vec<OrbitReport>,
    pub verdict: TheoremVerdict,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilityVerdict {
    pub target: Point,
    pub all_orbits_converge: bool,
    pub deviating_orbit: Option<OrbitReport>,
}

fn all_orbits(f: &SelfMap) -> Vec<OrbitReport> {
    let n = f.domain().len();
    let steps = n + 1;
    if n >= PARALLEL_STARTS {
        (0..n).into_par_iter().map(|x| run_orbit(&[f], x, steps)).collect()
    } else {
        (0..n).map(|x| run_orbit(&[f], x, steps)).collect()
    }
}

/// Checks the conclusion shared by both theorems: exactly one fixed point,
/// and every orbit settles there within `|X|` steps.
fn conclusion_failure(f: &SelfMap, fixed: &[Point], orbits: &[OrbitReport]) -> Option<String> {
    if fixed.len() != 1 {
        return Some(format!("{} fixed points", fixed.len()));
    }
    let n = f.domain().len();
    for (x, orbit) in f.domain().points().iter().zip(orbits) {
        match &orbit.classification {
            OrbitClass::EventuallyConstant { settle_index, value } if value == &fixed[0] && *settle_index <= n => {}
            other => return Some(format!("orbit from {x} does not settle at {}: {other:?}", fixed[0])),
        }
    }
    None
}

fn orbit_indices(f: &SelfMap, orbit: &OrbitReport) -> Vec<usize> {
    orbit.orbit.iter().map(|p| f.domain().index_of(p).expect("orbit stays in the domain")).collect()
}

fn finish<S: Scalar>(
    hypothesis: ConditionReport<S>,
    f: &SelfMap,
    orbits: Vec<OrbitReport>,
    extra_check: impl Fn(&[OrbitReport]) -> Option<String>,
) -> TheoremReport<S> {
    let fixed_points = f.fixed_points();
    let unique = fixed_points.len() == 1;
    let common = orbits.first().and_then(|o| o.settled_at().cloned()).filter(|p| orbits.iter().all(|o| o.settled_at() == Some(p)));
    let verdict = if !hypothesis.holds {
        TheoremVerdict::HypothesisFails
    } else if let Some(why) = conclusion_failure(f, &fixed_points, &orbits).or_else(|| extra_check(&orbits)) {
        TheoremVerdict::RefutesAssertion(why)
    } else {
        TheoremVerdict::ConfirmsTheorem
    };
    TheoremReport { hypothesis, fixed_point: common, unique, fixed_points, orbits, verdict }
}

/// The contraction hypothesis in existential form: some `k < 1` bounds
/// `d(fx, fy) / d(x, y)`. On a finite space this is `lipschitz_min < 1`.
pub fn contraction_hypothesis<S: Scalar>(space: &DigitalMetricSpace, f: &SelfMap) -> Result<ConditionReport<S>> {
    let k = lipschitz_min::<S>(space, f)?;
    let holds = k.compare_rational(&Rational::from_integer(1)).is_lt();
    let witness = if holds {
        None
    } else {
        let n = space.len();
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .find(|&(i, j)| {
                i != j && {
                    let lhs: S = space.distance_idx(f.apply_idx(i), f.apply_idx(j));
                    space.distance_idx::<S>(i, j).le(&lhs)
                }
            })
            .map(|(i, j)| Witness::Pair(space.image().point(i).clone(), space.image().point(j).clone()))
    };
    Ok(ConditionReport {
        kind: ConditionKind::Contraction,
        holds,
        witness,
        minimal_constant: MinimalConstant::Value(k),
        undefined_pairs: Vec::new(),
        finite_space_reduction: false,
    })
}

/// Banach contraction principle on a finite digital metric space.
pub fn banach_verify<S: Scalar>(space: &DigitalMetricSpace, f: &SelfMap) -> Result<TheoremReport<S>> {
    let hypothesis = contraction_hypothesis::<S>(space, f)?;
    let k = hypothesis.minimal_constant.value().cloned().expect("contraction reports its constant");
    let orbits = all_orbits(f);
    let descent = |orbits: &[OrbitReport]| -> Option<String> {
        // d(x_{n+1}, x_n) <= k d(x_n, x_{n-1})
        for orbit in orbits {
            let idx = orbit_indices(f, orbit);
            for w in idx.windows(3) {
                let later: S = space.distance_idx(w[2], w[1]);
                let earlier: S = space.distance_idx(w[1], w[0]);
                if !(later.clone() * k.denominator.clone()).le(&(k.numerator.clone() * earlier)) {
                    return Some(format!("descent estimate fails along orbit from {}", orbit.orbit[0]));
                }
            }
        }
        None
    };
    Ok(finish(hypothesis, f, orbits, descent))
}

/// Kannan-type theorem: `0 <= a + b < 1/2` and the Kannan inequality give a
/// unique fixed point. Also checks the proof's estimate
/// `d(x_n, x_{n+1}) <= A^n d(x_0, x_1)` with `A = (a + b) / (1 - (a + b))`.
pub fn kannan_verify<S: Scalar>(space: &DigitalMetricSpace, t: &SelfMap, a: Rational, b: Rational) -> Result<TheoremReport<S>> {
    let half = Rational::new(1, 2);
    if a + b >= half {
        return Err(Error::ParameterOutOfRange { name: "a+b", value: format_rational(&(a + b)), range: "[0, 1/2)" });
    }
    let hypothesis = check_kannan::<S>(space, t, a, b)?;
    let ratio = kannan_ratio(a, b);
    let orbits = all_orbits(t);
    let descent = |orbits: &[OrbitReport]| -> Option<String> {
        for orbit in orbits {
            let idx = orbit_indices(t, orbit);
            if idx.len() < 2 {
                continue;
            }
            let first: S = space.distance_idx(idx[0], idx[1]);
            let mut power = Rational::from_integer(1);
            for w in idx.windows(2) {
                let step: S = space.distance_idx(w[0], w[1]);
                if !step.le(&first.scale(&power)) {
                    return Some(format!("A^n estimate fails along orbit from {}", orbit.orbit[0]));
                }
                power *= ratio;
            }
        }
        None
    };
    Ok(finish(hypothesis, t, orbits, descent))
}

/// `A = (a + b) / (1 - (a + b))`.
pub fn kannan_ratio(a: Rational, b: Rational) -> Rational {
    let s = a + b;
    s / (Rational::from_integer(1) - s)
}

/// The interleaved orbit `x_{2n+1} = T x_{2n}`, `x_{2n+2} = S x_{2n+1}`.
pub fn alternating_orbit(s: &SelfMap, t: &SelfMap, x0: &Point, max_steps: usize) -> Result<OrbitReport> {
    if !s.same_domain(t) {
        return Err(Error::DomainMismatch);
    }
    let start = t.domain().require(x0)?;
    Ok(run_orbit(&[t, s], start, max_steps))
}

/// Picard T-stability at a fixed point `p`. In a uniformly discrete space
/// `d(y_{n+1}, T y_n) -> 0` forces `y_{n+1} = T y_n` eventually, so the
/// procedure is stable iff every Picard orbit settles at `p`.
pub fn t_stability_verdict(space: &DigitalMetricSpace, t: &SelfMap, p: &Point) -> Result<StabilityVerdict> {
    if !t.on_domain(space.image()) {
        return Err(Error::DomainMismatch);
    }
    let target = space.image().require(p)?;
    if t.apply_idx(target) != target {
        return Err(Error::NotFixedPoint(p.clone()));
    }
    let deviating_orbit = all_orbits(t).into_iter().find(|o| o.settled_at() != Some(p));
    Ok(StabilityVerdict {
        target: p.clone(),
        all_orbits_converge: deviating_orbit.is_none(),
        deviating_orbit,
    })
}
