//! Brute-force month-scan reference implementation.
//!
//! Used only to cross-check [`crate::temporal::solve`]. Interval boundaries
//! are derived here by walking months one at a time and materializing the
//! active set per month, never by comparing endpoint fields, so the two
//! implementations share semantics only by specification.

use alloc::collections::BTreeSet;
use alloc::string::ToString;
use alloc::vec::Vec;

use crate::temporal::{
    AnswerSet, SolveError, TemporalQuery, TimeInterval, TimePoint, Timeline,
};

/// Every (year, month) coordinate covered by the closed interval, walked
/// one month at a time.
fn month_walk(iv: TimeInterval) -> Vec<(i32, u8)> {
    let mut out = Vec::new();
    let (mut y, mut m) = (iv.start().year(), iv.start().month());
    let target = (iv.end().year(), iv.end().month());
    loop {
        out.push((y, m));
        if (y, m) == target {
            break;
        }
        m += 1;
        if m > 12 {
            m = 1;
            y += 1;
        }
    }
    out
}

/// Exhaustive-scan twin of `solve`. Intended for bounded inputs (the walk
/// is linear in interval length).
pub fn oracle_solve(tl: &Timeline, query: &TemporalQuery) -> Result<AnswerSet, SolveError> {
    let walks: Vec<(&str, Vec<(i32, u8)>)> = tl
        .entries()
        .iter()
        .map(|e| (e.entity(), month_walk(e.interval())))
        .collect();

    match query {
        TemporalQuery::At(t) => {
            let coord = (t.year(), t.month());
            Ok(AnswerSet::new(
                walks
                    .iter()
                    .filter(|(_, months)| months.contains(&coord))
                    .map(|(e, _)| e.to_string()),
            ))
        }
        TemporalQuery::Before(r) => scan(&walks, r, Direction::Before),
        TemporalQuery::After(r) => scan(&walks, r, Direction::After),
    }
}

enum Direction {
    Before,
    After,
}

fn scan(
    walks: &[(&str, Vec<(i32, u8)>)],
    reference: &str,
    dir: Direction,
) -> Result<AnswerSet, SolveError> {
    let reference = reference.trim();
    let all_months: BTreeSet<(i32, u8)> = walks
        .iter()
        .flat_map(|(_, months)| months.iter().copied())
        .collect();
    let ref_months: BTreeSet<(i32, u8)> = walks
        .iter()
        .filter(|(e, _)| *e == reference)
        .flat_map(|(_, months)| months.iter().copied())
        .collect();
    if ref_months.is_empty() {
        return Err(SolveError::RefNotFound(reference.to_string()));
    }

    match dir {
        Direction::Before => {
            // Anchor: first month any reference interval is active.
            let anchor = *ref_months.iter().next().expect("non-empty");
            // Walk backwards from the anchor; the first month at which some
            // non-reference entry's tenure finishes yields the answer.
            for m in all_months.range(..=anchor).rev() {
                let hits: Vec<&str> = walks
                    .iter()
                    .filter(|(e, months)| *e != reference && months.last() == Some(m))
                    .map(|(e, _)| *e)
                    .collect();
                if !hits.is_empty() {
                    return Ok(AnswerSet::new(hits.into_iter().map(|s| s.to_string())));
                }
            }
            Ok(AnswerSet::empty())
        }
        Direction::After => {
            let anchor = *ref_months.iter().next_back().expect("non-empty");
            for m in all_months.range(anchor..) {
                let hits: Vec<&str> = walks
                    .iter()
                    .filter(|(e, months)| *e != reference && months.first() == Some(m))
                    .map(|(e, _)| *e)
                    .collect();
                if !hits.is_empty() {
                    return Ok(AnswerSet::new(hits.into_iter().map(|s| s.to_string())));
                }
            }
            Ok(AnswerSet::empty())
        }
    }
}

/// Containment check by exhaustive enumeration; exposed for tests that want
/// a naive filter independent of `TimeInterval::contains`.
pub fn oracle_contains(iv: TimeInterval, t: TimePoint) -> bool {
    month_walk(iv).contains(&(t.year(), t.month()))
}
