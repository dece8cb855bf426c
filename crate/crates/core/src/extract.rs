//! Parsing of model extraction blocks and structured context sentences.
//!
//! The extraction block is the text format the model emits in step 1:
//!
//! ```text
//! extracted_info = {(datetime(1971, 1, 1), datetime(2014, 1, 1)): "Westfield Group", ...}
//! t_relation = "before"
//! ref_obj = "Westfield Group"
//! ```
//!
//! The parser is tolerant of whitespace and newlines between tokens,
//! trailing commas, and single or double quotes; `t_relation` is optional
//! when `ref_obj` is a time expression. Model output is data here, never
//! executed.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::temporal::{
    AnswerSet, FactEntry, SolveError, TemporalQuery, TimeInterval, TimePoint, Timeline,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    At,
    Before,
    After,
}

impl Relation {
    pub fn as_str(&self) -> &'static str {
        match self {
            Relation::At => "at",
            Relation::Before => "before",
            Relation::After => "after",
        }
    }

    pub fn parse(text: &str) -> Option<Relation> {
        match text {
            "at" => Some(Relation::At),
            "before" => Some(Relation::Before),
            "after" => Some(Relation::After),
            _ => None,
        }
    }
}

/// The reference object: a query time point for "at" questions, an anchor
/// entity for "before"/"after" questions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RefObject {
    Time(TimePoint),
    Entity(String),
}

/// Timeline + relation + reference object: everything the solver needs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Extraction {
    timeline: Timeline,
    relation: Relation,
    ref_obj: RefObject,
}

impl Extraction {
    /// Enforces the relation/reference pairing: `at` goes with a time
    /// reference, `before`/`after` with an entity reference.
    pub fn new(
        timeline: Timeline,
        relation: Relation,
        ref_obj: RefObject,
    ) -> Result<Self, ParseError> {
        match (&relation, &ref_obj) {
            (Relation::At, RefObject::Time(_)) => {}
            (Relation::Before | Relation::After, RefObject::Entity(_)) => {}
            _ => return Err(ParseError::RelationRefMismatch),
        }
        let ref_obj = match ref_obj {
            RefObject::Entity(e) => RefObject::Entity(e.trim().to_string()),
            t => t,
        };
        Ok(Extraction {
            timeline,
            relation,
            ref_obj,
        })
    }

    pub fn at(timeline: Timeline, t: TimePoint) -> Self {
        Extraction {
            timeline,
            relation: Relation::At,
            ref_obj: RefObject::Time(t),
        }
    }

    pub fn before(timeline: Timeline, entity: &str) -> Self {
        Extraction {
            timeline,
            relation: Relation::Before,
            ref_obj: RefObject::Entity(entity.trim().to_string()),
        }
    }

    pub fn after(timeline: Timeline, entity: &str) -> Self {
        Extraction {
            timeline,
            relation: Relation::After,
            ref_obj: RefObject::Entity(entity.trim().to_string()),
        }
    }

    pub fn timeline(&self) -> &Timeline {
        &self.timeline
    }

    pub fn relation(&self) -> Relation {
        self.relation
    }

    pub fn ref_obj(&self) -> &RefObject {
        &self.ref_obj
    }

    pub fn query(&self) -> TemporalQuery {
        match (&self.relation, &self.ref_obj) {
            (Relation::At, RefObject::Time(t)) => TemporalQuery::At(*t),
            (Relation::Before, RefObject::Entity(e)) => TemporalQuery::Before(e.clone()),
            (Relation::After, RefObject::Entity(e)) => TemporalQuery::After(e.clone()),
            // Unreachable by construction.
            (_, RefObject::Time(t)) => TemporalQuery::At(*t),
            (_, RefObject::Entity(e)) => TemporalQuery::Before(e.clone()),
        }
    }

    pub fn solve(&self) -> Result<AnswerSet, SolveError> {
        crate::temporal::solve(&self.timeline, &self.query())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseError {
    UnrecognizedTimeExpression(String),
    /// The context contains no sentences at all.
    EmptyContext,
    MissingField(&'static str),
    Syntax {
        pos: usize,
        expected: &'static str,
    },
    RelationUnsupported(String),
    /// `t_relation` and the shape of `ref_obj` disagree.
    RelationRefMismatch,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseError::UnrecognizedTimeExpression(t) => {
                write!(f, "unrecognized time expression: {t:?}")
            }
            ParseError::EmptyContext => write!(f, "context contains no sentences"),
            ParseError::MissingField(name) => write!(f, "missing field: {name}"),
            ParseError::Syntax { pos, expected } => {
                write!(f, "syntax error at byte {pos}: expected {expected}")
            }
            ParseError::RelationUnsupported(r) => write!(f, "unsupported relation: {r:?}"),
            ParseError::RelationRefMismatch => {
                write!(f, "t_relation does not match the shape of ref_obj")
            }
        }
    }
}

impl core::error::Error for ParseError {}

/// One context sentence the parser gave up on, and why.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkippedSentence {
    /// 1-based sentence number within the context.
    pub index: usize,
    pub text: String,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ParseDiagnostics {
    pub skipped_sentences: Vec<SkippedSentence>,
    pub warnings: Vec<String>,
}

impl ParseDiagnostics {
    pub fn is_clean(&self) -> bool {
        self.skipped_sentences.is_empty() && self.warnings.is_empty()
    }
}

const MONTH_ABBREVS: [&str; 12] = [
    "Jan", "Feb", "Mar", "Apr", "May", "Jun", "Jul", "Aug", "Sep", "Oct", "Nov", "Dec",
];

fn month_from_abbrev(token: &str) -> Option<u8> {
    MONTH_ABBREVS
        .iter()
        .position(|m| *m == token)
        .map(|i| (i + 1) as u8)
}

fn month_abbrev(month: u8) -> &'static str {
    MONTH_ABBREVS[(month - 1) as usize]
}

/// Render a time point in the context surface form: `Jan, 1995`.
pub fn format_timepoint(t: TimePoint) -> String {
    format!("{}, {}", month_abbrev(t.month()), t.year())
}

/// Accepts `Mon, YYYY` (monthly) or a bare `YYYY` (yearly, month 1).
pub fn parse_timepoint(text: &str) -> Result<TimePoint, ParseError> {
    let t = text.trim();
    if t.len() == 4 && t.bytes().all(|b| b.is_ascii_digit()) {
        let year: i32 = t.parse().expect("4 ascii digits");
        return Ok(TimePoint::yearly(year));
    }
    if let Some((mon, year)) = t.split_once(',') {
        let (mon, year) = (mon.trim(), year.trim());
        if let Some(month) = month_from_abbrev(mon) {
            if year.len() == 4 && year.bytes().all(|b| b.is_ascii_digit()) {
                let year: i32 = year.parse().expect("4 ascii digits");
                return Ok(TimePoint::monthly(year, month).expect("month validated"));
            }
        }
    }
    Err(ParseError::UnrecognizedTimeExpression(t.to_string()))
}

// Predicate phrases recognized in fact sentences, checked before the
// generic preposition fallback so entities like "University of Hamburg"
// keep their internal prepositions.
const KNOWN_PREDICATES: [&str; 18] = [
    "plays for",
    "played for",
    "plays as",
    "works for",
    "worked for",
    "works as",
    "is owned by",
    "was owned by",
    "is led by",
    "was led by",
    "is chaired by",
    "is headed by",
    "is managed by",
    "is employed by",
    "is operated by",
    "serves as",
    "is a member of",
    "was a member of",
];

const FALLBACK_MARKERS: [&str; 5] = [" for ", " by ", " as ", " with ", " at "];

fn extract_entity(head: &str) -> Option<&str> {
    let mut best: Option<(usize, usize)> = None; // (position, pattern length)
    for p in KNOWN_PREDICATES {
        let pat_len = p.len() + 2;
        if let Some(pos) = head.find(&format!(" {p} ")[..]) {
            if best.map_or(true, |(b, _)| pos < b) {
                best = Some((pos, pat_len));
            }
        }
    }
    if best.is_none() {
        for m in FALLBACK_MARKERS {
            if let Some(pos) = head.find(m) {
                if best.map_or(true, |(b, _)| pos < b) {
                    best = Some((pos, m.len()));
                }
            }
        }
    }
    let (pos, len) = best?;
    let entity = head[pos + len..].trim();
    (!entity.is_empty()).then_some(entity)
}

/// Sentence splitter tuned for fact contexts: a period ends a sentence when
/// followed by whitespace (or end of input) and the preceding token is not
/// an initialism like "F.C" or "A.J".
fn split_sentences(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut start = 0;
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    for (i, &(pos, ch)) in chars.iter().enumerate() {
        if ch != '.' {
            continue;
        }
        let next = chars.get(i + 1).map(|&(_, c)| c);
        let at_end = next.is_none() || text[pos + 1..].trim().is_empty();
        let followed_by_space = next.is_some_and(|c| c.is_whitespace());
        if !at_end && !followed_by_space {
            continue;
        }
        let prev_token = text[start..pos]
            .rsplit(char::is_whitespace)
            .next()
            .unwrap_or("");
        let initialism = prev_token.contains('.')
            || (prev_token.len() == 1 && prev_token.chars().all(|c| c.is_uppercase()));
        if !at_end && initialism {
            continue;
        }
        let sentence = text[start..=pos].trim();
        if !sentence.is_empty() {
            out.push(sentence.to_string());
        }
        start = pos + 1;
    }
    let rest = text[start..].trim();
    if !rest.is_empty() {
        out.push(rest.to_string());
    }
    out
}

/// Parse period-terminated fact sentences of the form
/// `<subject> <predicate> <entity> from <TIME> to <TIME>.` into a timeline.
/// Sentences that do not match are skipped and recorded in diagnostics.
pub fn parse_context(text: &str) -> Result<(Timeline, ParseDiagnostics), ParseError> {
    let sentences = split_sentences(text);
    if sentences.is_empty() {
        return Err(ParseError::EmptyContext);
    }
    let mut timeline = Timeline::new();
    let mut diagnostics = ParseDiagnostics::default();
    for (idx, sentence) in sentences.iter().enumerate() {
        match parse_fact_sentence(sentence) {
            Ok(entry) => timeline.push(entry),
            Err(reason) => diagnostics.skipped_sentences.push(SkippedSentence {
                index: idx + 1,
                text: sentence.clone(),
                reason,
            }),
        }
    }
    Ok((timeline, diagnostics))
}

fn parse_fact_sentence(sentence: &str) -> Result<FactEntry, String> {
    let body = sentence.trim();
    let body = body.strip_suffix('.').unwrap_or(body);
    let from_pos = body
        .rfind(" from ")
        .ok_or_else(|| String::from("no ' from ' anchor"))?;
    let head = &body[..from_pos];
    let tail = &body[from_pos + " from ".len()..];
    let to_pos = tail
        .rfind(" to ")
        .ok_or_else(|| String::from("no ' to ' anchor"))?;
    let start = parse_timepoint(&tail[..to_pos]).map_err(|e| e.to_string())?;
    let end = parse_timepoint(&tail[to_pos + " to ".len()..]).map_err(|e| e.to_string())?;
    let interval = TimeInterval::new(start, end).map_err(|e| e.to_string())?;
    let entity = extract_entity(head).ok_or_else(|| String::from("no entity phrase found"))?;
    FactEntry::new(interval, entity).map_err(|e| e.to_string())
}

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Cursor { text, pos: 0 }
    }

    fn rest(&self) -> &'a str {
        &self.text[self.pos..]
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.text.len() - trimmed.len();
    }

    fn eof(&self) -> bool {
        self.rest().is_empty()
    }

    fn eat_char(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect_char(&mut self, c: char, expected: &'static str) -> Result<(), ParseError> {
        if self.eat_char(c) {
            Ok(())
        } else {
            Err(ParseError::Syntax {
                pos: self.pos,
                expected,
            })
        }
    }

    /// Consume `kw` if it appears here as a whole identifier.
    fn eat_keyword(&mut self, kw: &str) -> bool {
        let rest = self.rest();
        if !rest.starts_with(kw) {
            return false;
        }
        let boundary = rest[kw.len()..]
            .chars()
            .next()
            .map_or(true, |c| !c.is_alphanumeric() && c != '_');
        if boundary {
            self.pos += kw.len();
            true
        } else {
            false
        }
    }

    fn parse_string(&mut self) -> Result<String, ParseError> {
        let quote = match self.peek() {
            Some(q @ ('"' | '\'')) => q,
            _ => {
                return Err(ParseError::Syntax {
                    pos: self.pos,
                    expected: "quoted string",
                })
            }
        };
        self.pos += 1;
        match self.rest().find(quote) {
            Some(end) => {
                let s = self.rest()[..end].to_string();
                self.pos += end + 1;
                Ok(s)
            }
            None => Err(ParseError::Syntax {
                pos: self.pos,
                expected: "closing quote",
            }),
        }
    }

    fn parse_int(&mut self) -> Result<i64, ParseError> {
        let rest = self.rest();
        let negative = rest.starts_with('-');
        let digits_start = if negative { 1 } else { 0 };
        let digits: usize = rest[digits_start..]
            .bytes()
            .take_while(|b| b.is_ascii_digit())
            .count();
        if digits == 0 {
            return Err(ParseError::Syntax {
                pos: self.pos,
                expected: "integer",
            });
        }
        let end = digits_start + digits;
        let value: i64 = rest[..end].parse().map_err(|_| ParseError::Syntax {
            pos: self.pos,
            expected: "integer in range",
        })?;
        self.pos += end;
        Ok(value)
    }

    /// `datetime(Y, M, D)`. The day field is accepted as any 1..=31 value
    /// and truncated to month precision.
    fn parse_date(&mut self) -> Result<TimePoint, ParseError> {
        if !self.eat_keyword("datetime") {
            return Err(ParseError::Syntax {
                pos: self.pos,
                expected: "datetime(...)",
            });
        }
        self.skip_ws();
        self.expect_char('(', "'('")?;
        self.skip_ws();
        let year = self.parse_int()?;
        self.skip_ws();
        self.expect_char(',', "','")?;
        self.skip_ws();
        let month_pos = self.pos;
        let month = self.parse_int()?;
        self.skip_ws();
        self.expect_char(',', "','")?;
        self.skip_ws();
        let day_pos = self.pos;
        let day = self.parse_int()?;
        self.skip_ws();
        self.expect_char(')', "')'")?;
        if !(1..=12).contains(&month) {
            return Err(ParseError::Syntax {
                pos: month_pos,
                expected: "month between 1 and 12",
            });
        }
        if !(1..=31).contains(&day) {
            return Err(ParseError::Syntax {
                pos: day_pos,
                expected: "day between 1 and 31",
            });
        }
        Ok(TimePoint::monthly(year as i32, month as u8).expect("month validated"))
    }
}

/// A quoted ref_obj that spells a time expression ("Jan, 1995", "1998", or
/// a "datetime(...)" call) counts as a time reference.
fn parse_time_string(text: &str) -> Option<TimePoint> {
    if let Ok(t) = parse_timepoint(text) {
        return Some(t);
    }
    let trimmed = text.trim();
    if trimmed.starts_with("datetime") {
        let mut c = Cursor::new(trimmed);
        if let Ok(t) = c.parse_date() {
            c.skip_ws();
            if c.eof() {
                return Some(t);
            }
        }
    }
    None
}

/// Parse a full step-1 extraction block into an [`Extraction`].
pub fn parse_extraction_block(text: &str) -> Result<Extraction, ParseError> {
    let mut c = Cursor::new(text);
    c.skip_ws();
    if !c.eat_keyword("extracted_info") {
        return Err(ParseError::MissingField("extracted_info"));
    }
    c.skip_ws();
    c.expect_char('=', "'='")?;
    c.skip_ws();
    c.expect_char('{', "'{'")?;

    let mut timeline = Timeline::new();
    loop {
        c.skip_ws();
        if c.eat_char('}') {
            break;
        }
        c.expect_char('(', "'(' or '}'")?;
        c.skip_ws();
        let start = c.parse_date()?;
        c.skip_ws();
        c.expect_char(',', "','")?;
        c.skip_ws();
        let end_pos = c.pos;
        let end = c.parse_date()?;
        c.skip_ws();
        c.expect_char(')', "')'")?;
        c.skip_ws();
        c.expect_char(':', "':'")?;
        c.skip_ws();
        let entity_pos = c.pos;
        let entity = c.parse_string()?;
        let interval = TimeInterval::new(start, end).map_err(|_| ParseError::Syntax {
            pos: end_pos,
            expected: "interval end at or after its start",
        })?;
        let entry = FactEntry::new(interval, &entity).map_err(|_| ParseError::Syntax {
            pos: entity_pos,
            expected: "non-empty entity string",
        })?;
        timeline.push(entry);
        c.skip_ws();
        if c.eat_char(',') {
            continue;
        }
        c.expect_char('}', "',' or '}'")?;
        break;
    }

    c.skip_ws();
    let mut relation_text: Option<String> = None;
    if c.eat_keyword("t_relation") {
        c.skip_ws();
        c.expect_char('=', "'='")?;
        c.skip_ws();
        relation_text = Some(c.parse_string()?);
        c.skip_ws();
    }

    if !c.eat_keyword("ref_obj") {
        return Err(ParseError::MissingField("ref_obj"));
    }
    c.skip_ws();
    c.expect_char('=', "'='")?;
    c.skip_ws();
    let ref_obj = match c.peek() {
        Some('"' | '\'') => {
            let s = c.parse_string()?;
            match parse_time_string(&s) {
                Some(t) => RefObject::Time(t),
                None => RefObject::Entity(s.trim().to_string()),
            }
        }
        _ => RefObject::Time(c.parse_date()?),
    };
    c.skip_ws();
    if !c.eof() {
        return Err(ParseError::Syntax {
            pos: c.pos,
            expected: "end of block",
        });
    }

    let relation = match relation_text {
        None => match &ref_obj {
            RefObject::Time(_) => Relation::At,
            RefObject::Entity(_) => return Err(ParseError::MissingField("t_relation")),
        },
        Some(r) => {
            Relation::parse(&r).ok_or(ParseError::RelationUnsupported(r))?
        }
    };

    Extraction::new(timeline, relation, ref_obj)
}

fn format_date(t: TimePoint) -> String {
    format!("datetime({}, {}, 1)", t.year(), t.month())
}

fn quote(entity: &str) -> String {
    if entity.contains('"') {
        format!("'{entity}'")
    } else {
        format!("\"{entity}\"")
    }
}

/// Render the canonical surface form of an extraction block. Inverse of
/// [`parse_extraction_block`] on its own output.
pub fn render_extraction_block(x: &Extraction) -> String {
    let mut out = String::from("extracted_info = {");
    for (i, e) in x.timeline().entries().iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        out.push_str(&format!(
            "({}, {}): {}",
            format_date(e.interval().start()),
            format_date(e.interval().end()),
            quote(e.entity())
        ));
    }
    out.push_str("}\n");
    match x.relation() {
        Relation::At => {}
        r => out.push_str(&format!("t_relation = \"{}\"\n", r.as_str())),
    }
    match x.ref_obj() {
        RefObject::Time(t) => out.push_str(&format!("ref_obj = {}", format_date(*t))),
        RefObject::Entity(e) => out.push_str(&format!("ref_obj = {}", quote(e))),
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::temporal::Granularity;
    use alloc::vec;

    fn pt(y: i32, m: u8) -> TimePoint {
        TimePoint::monthly(y, m).unwrap()
    }

    fn fact(sy: i32, sm: u8, ey: i32, em: u8, entity: &str) -> FactEntry {
        FactEntry::new(TimeInterval::new(pt(sy, sm), pt(ey, em)).unwrap(), entity).unwrap()
    }

    const WESTFIELD_BLOCK: &str = "extracted_info = {(datetime(2018, 6, 1), datetime(2022, 12, 1)): \"Unibail Rodamco Westfield\", (datetime(1968, 3, 1), datetime(1971, 1, 1)): \"The May Department Stores Company\", (datetime(1971, 1, 1), datetime(2014, 1, 1)): \"Westfield Group\"}\nt_relation = \"before\"\nref_obj = \"Westfield Group\"";

    fn westfield_extraction() -> Extraction {
        Extraction::before(
            Timeline::from_entries(vec![
                fact(2018, 6, 2022, 12, "Unibail Rodamco Westfield"),
                fact(1968, 3, 1971, 1, "The May Department Stores Company"),
                fact(1971, 1, 2014, 1, "Westfield Group"),
            ]),
            "Westfield Group",
        )
    }

    #[test]
    fn parse_timepoint_monthly() {
        let t = parse_timepoint("Jan, 1995").unwrap();
        assert_eq!((t.year(), t.month()), (1995, 1));
        assert_eq!(t.granularity(), Granularity::Monthly);

        let t = parse_timepoint("Dec, 2022").unwrap();
        assert_eq!((t.year(), t.month()), (2022, 12));

        // Space after the comma is optional.
        assert_eq!(parse_timepoint("Jun,2018").unwrap(), pt(2018, 6));
    }

    #[test]
    fn parse_timepoint_yearly() {
        let t = parse_timepoint("1998").unwrap();
        assert_eq!((t.year(), t.month()), (1998, 1));
        assert_eq!(t.granularity(), Granularity::Yearly);
    }

    #[test]
    fn parse_timepoint_rejects_noise() {
        assert!(matches!(
            parse_timepoint("early 1990s"),
            Err(ParseError::UnrecognizedTimeExpression(_))
        ));
        assert!(parse_timepoint("January, 1995").is_err());
        assert!(parse_timepoint("Jan, 95").is_err());
    }

    #[test]
    fn parse_context_single_sentence() {
        let (tl, diag) =
            parse_context("Alain Roche plays for A.J. Auxerre from Jan, 1990 to Jan, 1992.")
                .unwrap();
        assert!(diag.is_clean());
        assert_eq!(tl.entries(), &[fact(1990, 1, 1992, 1, "A.J. Auxerre")]);
    }

    #[test]
    fn parse_context_westfield_matches_extraction() {
        let text = "Westfield Montgomery is owned by Unibail Rodamco Westfield from Jun, 2018 to Dec, 2022. Westfield Montgomery is owned by The May Department Stores Company from Mar, 1968 to Jan, 1971. Westfield Montgomery is owned by Westfield Group from Jan, 1971 to Jan, 2014.";
        let (tl, diag) = parse_context(text).unwrap();
        assert!(diag.is_clean());
        assert_eq!(tl, *westfield_extraction().timeline());
    }

    #[test]
    fn parse_context_initialisms_do_not_split_sentences() {
        let text = "Paul Abrahams plays for Wivenhoe Town F.C. from Jan, 2004 to Jan, 2005. Paul Abrahams plays for Heybridge Swifts F.C. from Jan, 2001 to Jan, 2004. Paul Abrahams plays for Canvey Island F.C. from Jan, 2000 to Jan, 2001. Paul Abrahams plays for Colchester United F.C. from Jan, 1996 to Jan, 1999. Paul Abrahams plays for Chesham United F.C. from Jan, 2001 to Jan, 2001.";
        let (tl, diag) = parse_context(text).unwrap();
        assert!(diag.is_clean());
        assert_eq!(tl.len(), 5);
        assert_eq!(tl.entries()[0].entity(), "Wivenhoe Town F.C.");
        assert_eq!(tl.entries()[4].entity(), "Chesham United F.C.");
    }

    #[test]
    fn parse_context_skips_and_records() {
        let (tl, diag) = parse_context("Richard Tol is an economist.").unwrap();
        assert!(tl.is_empty());
        assert_eq!(diag.skipped_sentences.len(), 1);
        assert_eq!(diag.skipped_sentences[0].index, 1);
        assert!(diag.skipped_sentences[0].reason.contains("from"));
    }

    #[test]
    fn parse_context_blank_is_empty_context() {
        assert_eq!(parse_context("   "), Err(ParseError::EmptyContext));
    }

    #[test]
    fn parse_context_every_sentence_accounted_for() {
        let text = "Richard Tol is an economist. Richard Tol works for University of Hamburg from Jan, 2000 to Jan, 2006.";
        let (tl, diag) = parse_context(text).unwrap();
        assert_eq!(tl.len() + diag.skipped_sentences.len(), 2);
        assert_eq!(tl.entries()[0].entity(), "University of Hamburg");
    }

    #[test]
    fn parse_block_westfield_verbatim() {
        let x = parse_extraction_block(WESTFIELD_BLOCK).unwrap();
        assert_eq!(x, westfield_extraction());
        assert_eq!(x.relation(), Relation::Before);
        assert_eq!(
            x.ref_obj(),
            &RefObject::Entity("Westfield Group".to_string())
        );
        assert_eq!(x.timeline().len(), 3);
    }

    #[test]
    fn parse_block_tolerates_quote_style_and_trailing_comma() {
        let messy = "extracted_info = {\n  (datetime(2018, 6, 1), datetime(2022, 12, 1)) : 'Unibail Rodamco Westfield' ,\n  (datetime(1968, 3, 1), datetime(1971, 1, 1)): 'The May Department Stores Company',\n  (datetime(1971, 1, 1), datetime(2014, 1, 1)): 'Westfield Group',\n}\nt_relation = 'before'\nref_obj = 'Westfield Group'\n";
        assert_eq!(parse_extraction_block(messy).unwrap(), westfield_extraction());
    }

    #[test]
    fn parse_block_missing_ref_obj() {
        let text = "extracted_info = {}\nt_relation = \"before\"";
        assert_eq!(
            parse_extraction_block(text),
            Err(ParseError::MissingField("ref_obj"))
        );
    }

    #[test]
    fn parse_block_missing_extracted_info() {
        assert_eq!(
            parse_extraction_block("ref_obj = \"X\""),
            Err(ParseError::MissingField("extracted_info"))
        );
    }

    #[test]
    fn parse_block_unsupported_relation() {
        let text = "extracted_info = {}\nt_relation = \"during\"\nref_obj = \"X\"";
        assert_eq!(
            parse_extraction_block(text),
            Err(ParseError::RelationUnsupported("during".to_string()))
        );
    }

    #[test]
    fn parse_block_entity_ref_requires_relation() {
        let text = "extracted_info = {}\nref_obj = \"X\"";
        assert_eq!(
            parse_extraction_block(text),
            Err(ParseError::MissingField("t_relation"))
        );
    }

    #[test]
    fn parse_block_time_ref_defaults_to_at() {
        let text = "extracted_info = {(datetime(2000, 1, 1), datetime(2001, 1, 1)): \"A\"}\nref_obj = datetime(2001, 1, 15)";
        let x = parse_extraction_block(text).unwrap();
        assert_eq!(x.relation(), Relation::At);
        // Day field truncated to month precision.
        assert_eq!(x.ref_obj(), &RefObject::Time(pt(2001, 1)));
    }

    #[test]
    fn parse_block_quoted_time_ref() {
        let text = "extracted_info = {}\nref_obj = \"Jan, 1995\"";
        let x = parse_extraction_block(text).unwrap();
        assert_eq!(x.relation(), Relation::At);
        assert_eq!(x.ref_obj(), &RefObject::Time(pt(1995, 1)));
    }

    #[test]
    fn parse_block_relation_ref_mismatch() {
        let text = "extracted_info = {}\nt_relation = \"before\"\nref_obj = datetime(2001, 1, 1)";
        assert_eq!(
            parse_extraction_block(text),
            Err(ParseError::RelationRefMismatch)
        );
    }

    #[test]
    fn parse_block_duplicate_interval_keys_preserved() {
        let text = "extracted_info = {(datetime(2000, 1, 1), datetime(2001, 1, 1)): \"A\", (datetime(2000, 1, 1), datetime(2001, 1, 1)): \"B\"}\nt_relation = \"before\"\nref_obj = \"A\"";
        let x = parse_extraction_block(text).unwrap();
        assert_eq!(x.timeline().len(), 2);
    }

    #[test]
    fn render_is_byte_equal_to_normalized_block() {
        assert_eq!(render_extraction_block(&westfield_extraction()), WESTFIELD_BLOCK);
    }

    #[test]
    fn render_empty_timeline() {
        let x = Extraction::at(Timeline::new(), pt(1995, 1));
        assert_eq!(
            render_extraction_block(&x),
            "extracted_info = {}\nref_obj = datetime(1995, 1, 1)"
        );
    }

    #[test]
    fn render_at_uses_date_constructor() {
        let x = Extraction::at(
            Timeline::from_entries(vec![fact(1992, 1, 1998, 1, "Paris Saint-Germain F.C.")]),
            pt(1995, 1),
        );
        let text = render_extraction_block(&x);
        assert!(text.ends_with("ref_obj = datetime(1995, 1, 1)"));
        assert!(!text.contains("t_relation"));
        assert_eq!(parse_extraction_block(&text).unwrap(), x);
    }

    #[test]
    fn round_trip_westfield() {
        let x = westfield_extraction();
        assert_eq!(
            parse_extraction_block(&render_extraction_block(&x)).unwrap(),
            x
        );
    }
}
