//! Motif identity: the digit-pair notation, class enumeration, and the
//! event-pair alphabet.
//!
//! A motif with k events is written as 2k digits. Each digit pair is one
//! event `source target`, events appear in chronological order, and node
//! labels are assigned by first appearance, so every code starts with `01`.
//! `011202` is the triangle 0→1, 1→2, 0→2.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Node label inside a motif code.
pub type Label = u8;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum CodeError {
    #[error("a motif needs at least one event")]
    Empty,
    #[error("a code needs an even number of digits, got {0}")]
    OddLength(usize),
    #[error("code must start with 01")]
    MustStartWith01,
    #[error("label {label} at digit {position} breaks first-appearance order")]
    LabelOrder { position: usize, label: Label },
    #[error("event {event} is a self-loop")]
    SelfLoop { event: usize },
    #[error("event {event} shares no node with earlier events")]
    Growth { event: usize },
    #[error("events {event} and {next} share no node; no pair-sequence representation")]
    Disjoint { event: usize, next: usize },
    #[error("cannot parse motif code `{0}`")]
    Parse(String),
}

/// Canonical identity of a motif class.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MotifCode {
    digits: Vec<Label>,
}

impl MotifCode {
    /// Validates `digits` against every code rule.
    pub fn new(digits: Vec<Label>) -> Result<Self, CodeError> {
        if digits.is_empty() {
            return Err(CodeError::Empty);
        }
        if !digits.len().is_multiple_of(2) {
            return Err(CodeError::OddLength(digits.len()));
        }
        if digits[0] != 0 || digits[1] != 1 {
            return Err(CodeError::MustStartWith01);
        }
        let mut next_label: Label = 0;
        for (position, &label) in digits.iter().enumerate() {
            if label > next_label {
                return Err(CodeError::LabelOrder { position, label });
            }
            if label == next_label {
                next_label += 1;
            }
        }
        let mut seen = BTreeSet::new();
        for (event, pair) in digits.chunks_exact(2).enumerate() {
            if pair[0] == pair[1] {
                return Err(CodeError::SelfLoop { event });
            }
            if event > 0 && !seen.contains(&pair[0]) && !seen.contains(&pair[1]) {
                return Err(CodeError::Growth { event });
            }
            seen.insert(pair[0]);
            seen.insert(pair[1]);
        }
        Ok(MotifCode { digits })
    }

    pub(crate) fn from_valid_digits(digits: Vec<Label>) -> Self {
        debug_assert!(MotifCode::new(digits.clone()).is_ok());
        MotifCode { digits }
    }

    pub fn digits(&self) -> &[Label] {
        &self.digits
    }

    pub fn event_count(&self) -> usize {
        self.digits.len() / 2
    }

    pub fn node_count(&self) -> usize {
        self.digits
            .iter()
            .copied()
            .max()
            .map_or(0, |m| m as usize + 1)
    }

    /// The motif's events as `(source, target)` label pairs.
    pub fn events(&self) -> Vec<(Label, Label)> {
        self.digits.chunks_exact(2).map(|p| (p[0], p[1])).collect()
    }

    /// Letters for each consecutive event pair. Fails when two consecutive
    /// events share no node, which only happens from four nodes upward.
    pub fn pair_sequence(&self) -> Result<PairSequence, CodeError> {
        let events = self.events();
        let mut letters = Vec::with_capacity(events.len().saturating_sub(1));
        for (i, w) in events.windows(2).enumerate() {
            match classify_pair(w[0], w[1])? {
                PairType::Disjoint => {
                    return Err(CodeError::Disjoint {
                        event: i,
                        next: i + 1,
                    })
                }
                t => letters.push(t),
            }
        }
        Ok(PairSequence(letters))
    }
}

impl fmt::Display for MotifCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.digits.iter().all(|&d| d < 10) {
            for d in &self.digits {
                write!(f, "{d}")?;
            }
        } else {
            let parts: Vec<String> = self.digits.iter().map(|d| d.to_string()).collect();
            write!(f, "{}", parts.join("."))?;
        }
        Ok(())
    }
}

impl FromStr for MotifCode {
    type Err = CodeError;

    /// Accepts the plain digit form (`011202`) and the dotted form used for
    /// labels of 10 and above (`0.1.1.10...`).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let digits: Option<Vec<Label>> = if s.contains('.') {
            s.split('.').map(|p| p.parse().ok()).collect()
        } else {
            s.chars()
                .map(|c| c.to_digit(10).map(|d| d as Label))
                .collect()
        };
        match digits {
            Some(d) => MotifCode::new(d),
            None => Err(CodeError::Parse(s.to_string())),
        }
    }
}

/// Canonical code of a chronologically ordered list of `(source, target)`
/// events over arbitrary node ids.
pub fn canonical_code<N: PartialEq + Copy>(events: &[(N, N)]) -> Result<MotifCode, CodeError> {
    if events.is_empty() {
        return Err(CodeError::Empty);
    }
    let mut seen: Vec<N> = Vec::new();
    let mut digits = Vec::with_capacity(events.len() * 2);
    for (event, &(u, v)) in events.iter().enumerate() {
        if u == v {
            return Err(CodeError::SelfLoop { event });
        }
        if event > 0 && !seen.contains(&u) && !seen.contains(&v) {
            return Err(CodeError::Growth { event });
        }
        for node in [u, v] {
            let label = match seen.iter().position(|&n| n == node) {
                Some(i) => i,
                None => {
                    seen.push(node);
                    seen.len() - 1
                }
            };
            digits.push(label as Label);
        }
    }
    Ok(MotifCode::from_valid_digits(digits))
}

/// Validates a digit sequence and returns its event list.
pub fn decode(digits: &[Label]) -> Result<Vec<(Label, Label)>, CodeError> {
    MotifCode::new(digits.to_vec()).map(|c| c.events())
}

/// How many distinct nodes the enumerated codes may use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeSpec {
    AtMost(usize),
    Exactly(usize),
}

impl NodeSpec {
    pub fn admits(self, nodes: usize) -> bool {
        match self {
            NodeSpec::AtMost(n) => nodes <= n,
            NodeSpec::Exactly(n) => nodes == n,
        }
    }

    fn limit(self) -> usize {
        match self {
            NodeSpec::AtMost(n) | NodeSpec::Exactly(n) => n,
        }
    }
}

/// All valid codes with `k_events` events whose node count satisfies `nodes`,
/// in lexicographic order. Codes are grown one event at a time, so only
/// valid prefixes are ever expanded.
pub fn enumerate_codes(k_events: usize, nodes: NodeSpec) -> Vec<MotifCode> {
    let mut out = Vec::new();
    if k_events == 0 || nodes.limit() < 2 {
        return out;
    }
    let mut digits = vec![0, 1];
    extend_codes(&mut digits, 2, k_events, nodes, &mut out);
    out
}

fn extend_codes(
    digits: &mut Vec<Label>,
    used: usize,
    k_events: usize,
    nodes: NodeSpec,
    out: &mut Vec<MotifCode>,
) {
    if digits.len() == 2 * k_events {
        if nodes.admits(used) {
            out.push(MotifCode::from_valid_digits(digits.clone()));
        }
        return;
    }
    // a new node may only take the next free label, and at most one of the
    // two endpoints can be new
    let can_add = used < nodes.limit();
    let max_label = if can_add { used } else { used - 1 };
    for a in 0..=max_label {
        for b in 0..=max_label {
            if a == b || (a == used && b == used) {
                continue;
            }
            let added = usize::from(a == used) + usize::from(b == used);
            digits.push(a as Label);
            digits.push(b as Label);
            extend_codes(digits, used + added, k_events, nodes, out);
            digits.truncate(digits.len() - 2);
        }
    }
}

/// Relationship between two consecutive events of a motif.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PairType {
    Repetition,
    PingPong,
    InBurst,
    OutBurst,
    Convey,
    WeaklyConnected,
    /// The two events share no node. Not part of the six-letter alphabet.
    Disjoint,
}

impl PairType {
    /// The six shared-node types in `R, P, I, O, C, W` order.
    pub const ALPHABET: [PairType; 6] = [
        PairType::Repetition,
        PairType::PingPong,
        PairType::InBurst,
        PairType::OutBurst,
        PairType::Convey,
        PairType::WeaklyConnected,
    ];

    pub fn letter(self) -> char {
        match self {
            PairType::Repetition => 'R',
            PairType::PingPong => 'P',
            PairType::InBurst => 'I',
            PairType::OutBurst => 'O',
            PairType::Convey => 'C',
            PairType::WeaklyConnected => 'W',
            PairType::Disjoint => '-',
        }
    }

    /// Position in [`PairType::ALPHABET`]; `None` for `Disjoint`.
    pub fn index(self) -> Option<usize> {
        Self::ALPHABET.iter().position(|&t| t == self)
    }

    pub fn from_letter(c: char) -> Option<PairType> {
        Self::ALPHABET.into_iter().find(|t| t.letter() == c)
    }
}

/// Classifies the ordered event pair `first`, `second`.
pub fn classify_pair<N: PartialEq + Copy>(
    first: (N, N),
    second: (N, N),
) -> Result<PairType, CodeError> {
    let ((u1, v1), (u2, v2)) = (first, second);
    if u1 == v1 {
        return Err(CodeError::SelfLoop { event: 0 });
    }
    if u2 == v2 {
        return Err(CodeError::SelfLoop { event: 1 });
    }
    let t = if u1 == u2 && v1 == v2 {
        PairType::Repetition
    } else if u1 == v2 && v1 == u2 {
        PairType::PingPong
    } else if v1 == v2 {
        PairType::InBurst
    } else if u1 == u2 {
        PairType::OutBurst
    } else if v1 == u2 {
        PairType::Convey
    } else if u1 == v2 {
        PairType::WeaklyConnected
    } else {
        PairType::Disjoint
    };
    Ok(t)
}

/// A motif read as its k-1 consecutive event pairs.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PairSequence(pub Vec<PairType>);

impl PairSequence {
    pub fn letters(&self) -> &[PairType] {
        &self.0
    }
}

impl fmt::Display for PairSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for t in &self.0 {
            write!(f, "{}", t.letter())?;
        }
        Ok(())
    }
}
