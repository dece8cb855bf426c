//! Month-granularity temporal domain types and the deterministic solver.
//!
//! Intervals are closed on both ends. `before`/`after` queries use
//! boundary-inclusive adjacency: an entry ending exactly at the reference
//! interval's start is a valid "before" candidate, and symmetrically for
//! "after". Ties at the extremal boundary all make it into the answer.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::hash::{Hash, Hasher};

/// Whether a time point came from month-level or year-level source data.
///
/// Yearly data normalizes to month 1. Granularity never participates in
/// ordering or equality; it only records provenance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Granularity {
    Monthly,
    Yearly,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TemporalError {
    MonthOutOfRange(u8),
    /// Interval start is strictly after its end.
    IntervalInverted,
    /// Entity name is empty after trimming.
    EmptyEntity,
}

impl fmt::Display for TemporalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TemporalError::MonthOutOfRange(m) => write!(f, "month {m} is outside 1..=12"),
            TemporalError::IntervalInverted => write!(f, "interval start is after its end"),
            TemporalError::EmptyEntity => write!(f, "entity name is empty"),
        }
    }
}

impl core::error::Error for TemporalError {}

/// A Gregorian (year, month) coordinate.
#[derive(Debug, Clone, Copy)]
pub struct TimePoint {
    year: i32,
    month: u8,
    granularity: Granularity,
}

impl TimePoint {
    pub fn monthly(year: i32, month: u8) -> Result<Self, TemporalError> {
        if !(1..=12).contains(&month) {
            return Err(TemporalError::MonthOutOfRange(month));
        }
        Ok(TimePoint {
            year,
            month,
            granularity: Granularity::Monthly,
        })
    }

    pub fn yearly(year: i32) -> Self {
        TimePoint {
            year,
            month: 1,
            granularity: Granularity::Yearly,
        }
    }

    pub fn year(&self) -> i32 {
        self.year
    }

    pub fn month(&self) -> u8 {
        self.month
    }

    pub fn granularity(&self) -> Granularity {
        self.granularity
    }

    /// Months since year 0; handy as a total-order key.
    pub fn month_index(&self) -> i64 {
        self.year as i64 * 12 + (self.month as i64 - 1)
    }

    /// Inverse of [`TimePoint::month_index`]; always monthly granularity.
    pub fn from_month_index(index: i64) -> Self {
        let year = index.div_euclid(12) as i32;
        let month = (index.rem_euclid(12) + 1) as u8;
        TimePoint {
            year,
            month,
            granularity: Granularity::Monthly,
        }
    }
}

// Equality and ordering are (year, month) lexicographic; granularity is
// deliberately excluded so that yearly(1998) == monthly(1998, 1).
impl PartialEq for TimePoint {
    fn eq(&self, other: &Self) -> bool {
        (self.year, self.month) == (other.year, other.month)
    }
}

impl Eq for TimePoint {}

impl PartialOrd for TimePoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for TimePoint {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.year, self.month).cmp(&(other.year, other.month))
    }
}

impl Hash for TimePoint {
    fn hash<H: Hasher>(&self, state: &mut H) {
        (self.year, self.month).hash(state);
    }
}

/// A closed interval of time points. Zero-length intervals are valid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TimeInterval {
    start: TimePoint,
    end: TimePoint,
}

impl TimeInterval {
    pub fn new(start: TimePoint, end: TimePoint) -> Result<Self, TemporalError> {
        if start > end {
            return Err(TemporalError::IntervalInverted);
        }
        Ok(TimeInterval { start, end })
    }

    pub fn start(&self) -> TimePoint {
        self.start
    }

    pub fn end(&self) -> TimePoint {
        self.end
    }

    /// Closed containment: `start <= t <= end`.
    pub fn contains(&self, t: TimePoint) -> bool {
        self.start <= t && t <= self.end
    }
}

/// One factual statement: an entity holding a role over an interval.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FactEntry {
    interval: TimeInterval,
    entity: String,
}

impl FactEntry {
    /// Entity names are compared after whitespace trimming, so the trimmed
    /// form is what gets stored.
    pub fn new(interval: TimeInterval, entity: &str) -> Result<Self, TemporalError> {
        let entity = entity.trim();
        if entity.is_empty() {
            return Err(TemporalError::EmptyEntity);
        }
        Ok(FactEntry {
            interval,
            entity: entity.to_string(),
        })
    }

    pub fn interval(&self) -> TimeInterval {
        self.interval
    }

    pub fn entity(&self) -> &str {
        &self.entity
    }
}

/// An insertion-ordered multimap of interval -> entity facts.
///
/// Duplicate intervals with distinct entities are allowed; exact duplicate
/// (interval, entity) pairs are dropped on insert.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Timeline {
    entries: Vec<FactEntry>,
}

impl Timeline {
    pub fn new() -> Self {
        Timeline::default()
    }

    pub fn from_entries<I: IntoIterator<Item = FactEntry>>(entries: I) -> Self {
        let mut tl = Timeline::new();
        for e in entries {
            tl.push(e);
        }
        tl
    }

    pub fn push(&mut self, entry: FactEntry) {
        if !self.entries.contains(&entry) {
            self.entries.push(entry);
        }
    }

    pub fn entries(&self) -> &[FactEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// The three supported query shapes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TemporalQuery {
    /// Which entities hold the role at time `t`?
    At(TimePoint),
    /// Which entities held the role immediately before the reference entity?
    Before(String),
    /// Which entities held the role immediately after the reference entity?
    After(String),
}

/// Canonically ordered, deduplicated answer entities.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AnswerSet {
    entities: Vec<String>,
}

impl AnswerSet {
    pub fn new<I, S>(entities: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut entities: Vec<String> = entities.into_iter().map(Into::into).collect();
        entities.sort();
        entities.dedup();
        AnswerSet { entities }
    }

    pub fn empty() -> Self {
        AnswerSet::default()
    }

    pub fn entities(&self) -> &[String] {
        &self.entities
    }

    pub fn len(&self) -> usize {
        self.entities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entities.is_empty()
    }

    pub fn contains(&self, entity: &str) -> bool {
        self.entities.iter().any(|e| e == entity)
    }

    /// Canonical wire form: newline-free, comma+space-joined sorted entities.
    pub fn to_canonical_string(&self) -> String {
        self.entities.join(", ")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveError {
    /// The reference entity matches no timeline entry.
    RefNotFound(String),
}

impl fmt::Display for SolveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolveError::RefNotFound(e) => write!(f, "reference entity not found: {e}"),
        }
    }
}

impl core::error::Error for SolveError {}

/// All entities active at `t` (closed containment).
pub fn query_at(tl: &Timeline, t: TimePoint) -> AnswerSet {
    AnswerSet::new(
        tl.entries()
            .iter()
            .filter(|e| e.interval().contains(t))
            .map(|e| e.entity().to_string()),
    )
}

fn reference_intervals<'a>(
    tl: &'a Timeline,
    reference: &str,
) -> Result<Vec<&'a FactEntry>, SolveError> {
    let hits: Vec<&FactEntry> = tl
        .entries()
        .iter()
        .filter(|e| e.entity() == reference)
        .collect();
    if hits.is_empty() {
        return Err(SolveError::RefNotFound(reference.to_string()));
    }
    Ok(hits)
}

/// Entities whose tenure ends latest at or before the reference interval's
/// start. When the reference entity has several intervals, the
/// earliest-start one anchors the query.
pub fn query_before(tl: &Timeline, reference: &str) -> Result<AnswerSet, SolveError> {
    let reference = reference.trim();
    let ref_entries = reference_intervals(tl, reference)?;
    let ref_iv = ref_entries
        .iter()
        .map(|e| e.interval())
        .min_by_key(|iv| (iv.start(), iv.end()))
        .expect("non-empty");

    let candidates: Vec<&FactEntry> = tl
        .entries()
        .iter()
        .filter(|e| e.entity() != reference && e.interval().end() <= ref_iv.start())
        .collect();
    let Some(best_end) = candidates.iter().map(|e| e.interval().end()).max() else {
        return Ok(AnswerSet::empty());
    };
    Ok(AnswerSet::new(
        candidates
            .iter()
            .filter(|e| e.interval().end() == best_end)
            .map(|e| e.entity().to_string()),
    ))
}

/// Mirror of [`query_before`]: earliest start at or after the reference
/// interval's end, anchored on the latest-end reference interval.
pub fn query_after(tl: &Timeline, reference: &str) -> Result<AnswerSet, SolveError> {
    let reference = reference.trim();
    let ref_entries = reference_intervals(tl, reference)?;
    let ref_iv = ref_entries
        .iter()
        .map(|e| e.interval())
        .max_by_key(|iv| (iv.end(), iv.start()))
        .expect("non-empty");

    let candidates: Vec<&FactEntry> = tl
        .entries()
        .iter()
        .filter(|e| e.entity() != reference && e.interval().start() >= ref_iv.end())
        .collect();
    let Some(best_start) = candidates.iter().map(|e| e.interval().start()).min() else {
        return Ok(AnswerSet::empty());
    };
    Ok(AnswerSet::new(
        candidates
            .iter()
            .filter(|e| e.interval().start() == best_start)
            .map(|e| e.entity().to_string()),
    ))
}

/// Dispatch a query against a timeline. Pure and deterministic.
pub fn solve(tl: &Timeline, query: &TemporalQuery) -> Result<AnswerSet, SolveError> {
    match query {
        TemporalQuery::At(t) => Ok(query_at(tl, *t)),
        TemporalQuery::Before(r) => query_before(tl, r),
        TemporalQuery::After(r) => query_after(tl, r),
    }
}
