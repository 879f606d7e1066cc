use std::sync::Arc;

use digitop::mapkit::{map_count, map_from_index};
use digitop::search::{
    find_counterexample, replay, search_spaces, verify_paper_suite, AssertionId, EntryStatus, SearchStatus,
};
use digitop::{Rational, SelfMap, Surd};

fn grid(id: AssertionId) -> Vec<Rational> {
    if id.parameter().is_some() {
        vec![Rational::new(0, 1), Rational::new(1, 2)]
    } else {
        Vec::new()
    }
}

/// Re-runs the scan sequentially and returns the first violation in scan
/// order, for comparison with the chunked parallel search.
fn sequential_first(id: AssertionId, bound: usize, params: &[Rational]) -> Option<(String, Vec<SelfMap>)> {
    let params: Vec<Option<Rational>> =
        if id.parameter().is_some() { params.iter().copied().map(Some).collect() } else { vec![None] };
    for config in search_spaces(bound) {
        let space = config.build().unwrap();
        if !id.applies_to(&space) {
            continue;
        }
        let domain = Arc::clone(space.image_arc());
        let count = map_count(domain.len()) as u64;
        let total = count.pow(id.arity() as u32);
        for &param in &params {
            for i in 0..total {
                let maps = if id.arity() == 1 {
                    vec![map_from_index(&domain, i)]
                } else {
                    vec![map_from_index(&domain, i / count), map_from_index(&domain, i % count)]
                };
                if id.hypothesis::<Surd>(&space, &maps, param).unwrap() && !id.conclusion::<Surd>(&space, &maps).unwrap() {
                    return Some((config.to_string(), maps));
                }
            }
        }
    }
    None
}

#[test]
fn counterexamples_replay_and_are_least() {
    for id in AssertionId::ALL {
        let params = grid(id);
        let outcome = find_counterexample(id, 3, &params).unwrap();
        let expected = sequential_first(id, 3, &params);
        match (&outcome.status, expected) {
            (SearchStatus::CounterexampleFound(c), Some((space, maps))) => {
                let r = replay(id, c).unwrap();
                assert!(r.hypothesis && !r.conclusion, "{id}: witness does not replay");
                assert_eq!(c.space.to_string(), space, "{id}");
                assert_eq!(c.maps, maps, "{id}");
            }
            (SearchStatus::ExhaustedNoCounterexample { size_bound, .. }, None) => assert_eq!(*size_bound, 3),
            (status, expected) => panic!("{id}: parallel {status:?} vs sequential {expected:?}"),
        }
        assert!(outcome.stats.hypothesis_hits <= outcome.stats.maps_scanned);
    }
}

#[test]
fn exhaustion_counts_every_candidate() {
    let params = [Rational::new(1, 4), Rational::new(3, 4)];
    let outcome = find_counterexample(AssertionId::GopalQuasi, 3, &params).unwrap();
    assert!(outcome.counterexample().is_none());
    let expected: u64 = search_spaces(3).iter().map(|c| map_count(c.len()) as u64 * 2).sum();
    assert_eq!(outcome.stats.maps_scanned, expected);
    assert_eq!(outcome.stats.spaces_scanned, 9);
}

#[test]
fn search_is_deterministic() {
    for id in [AssertionId::MishTrip31, AssertionId::ParvRaman, AssertionId::GopalCiric5] {
        let a = find_counterexample(id, 3, &grid(id)).unwrap();
        let b = find_counterexample(id, 3, &grid(id)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_string(), b.to_string());
    }
}

#[test]
fn saluja_witness_is_the_constant_pair() {
    let outcome = find_counterexample(AssertionId::Saluja31, 2, &[Rational::new(0, 1)]).unwrap();
    let c = outcome.counterexample().unwrap();
    assert_eq!(c.maps[0].to_string(), "{0->0, 1->0}");
    assert_eq!(c.maps[1].to_string(), "{0->1, 1->1}");
}

#[test]
fn suite_passes_and_repeats() {
    let first = verify_paper_suite();
    let failed: Vec<_> = first.entries.iter().filter(|e| e.status == EntryStatus::Fail).map(|e| e.id).collect();
    assert!(failed.is_empty(), "failed entries: {failed:?}\n{first}");
    assert_eq!(first.to_string(), verify_paper_suite().to_string());
}
