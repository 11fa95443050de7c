//! The three-parameter quiver family `Q(alpha, beta, gamma)` under the three
//! mutation moves, its charge, node types and reachability.
//!
//! Moves are taken from eight sign-region tables. Region `s` is selected
//! by the signs of `(alpha, beta, gamma)`, with `>= 0` and `< 0` the two
//! sides of each coordinate.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::vec::Vec;
use core::fmt;

/// The multiplicity constant in the tables (the special vertex of the
/// `n = 4` seed).
pub const DEFAULT_D: i64 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ChargeState {
    pub alpha: i64,
    pub beta: i64,
    pub gamma: i64,
}

impl ChargeState {
    /// `None` for the excluded state `(0, 0, 0)`.
    pub fn new(alpha: i64, beta: i64, gamma: i64) -> Option<Self> {
        (alpha != 0 || beta != 0 || gamma != 0).then_some(ChargeState { alpha, beta, gamma })
    }

    pub fn charge(&self) -> i64 {
        self.alpha.abs() + self.beta.abs() + self.gamma.abs()
    }

    pub fn max_abs(&self) -> i64 {
        self.alpha.abs().max(self.beta.abs()).max(self.gamma.abs())
    }

    /// The case number `1..=8` of the sign region containing the state.
    pub fn case(&self) -> u8 {
        region_case([self.alpha < 0, self.beta < 0, self.gamma < 0])
    }

    /// Every case whose closed region contains the state: a zero
    /// coordinate may be read on either side.
    pub fn closed_cases(&self) -> Vec<u8> {
        let sides = |v: i64| if v == 0 { alloc::vec![false, true] } else { alloc::vec![v < 0] };
        let mut out = Vec::new();
        for a in sides(self.alpha) {
            for b in sides(self.beta) {
                for c in sides(self.gamma) {
                    out.push(region_case([a, b, c]));
                }
            }
        }
        out
    }
}

impl fmt::Display for ChargeState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q({},{},{})", self.alpha, self.beta, self.gamma)
    }
}

fn region_case(neg: [bool; 3]) -> u8 {
    match neg {
        [false, false, false] => 1,
        [true, false, false] => 2,
        [false, true, false] => 3,
        [false, false, true] => 4,
        [true, true, false] => 5,
        [true, false, true] => 6,
        [false, true, true] => 7,
        [true, true, true] => 8,
    }
}

fn case_negatives(case: u8) -> [bool; 3] {
    match case {
        1 => [false, false, false],
        2 => [true, false, false],
        3 => [false, true, false],
        4 => [false, false, true],
        5 => [true, true, false],
        6 => [true, false, true],
        7 => [false, true, true],
        8 => [true, true, true],
        _ => panic!("case {case} out of range"),
    }
}

/// The move at `vertex` (1, 2 or 3) as listed in the table of `case`.
pub fn table_move(case: u8, vertex: u8, s: ChargeState, d: i64) -> (i64, i64, i64) {
    let [a_neg, b_neg, c_neg] = case_negatives(case);
    let ChargeState { alpha: a, beta: b, gamma: c } = s;
    match vertex {
        1 if !c_neg => (b, a + d * c, -c),
        1 => (b + d * c, a, -c),
        2 if !a_neg => (b + 2 * a, -a, c),
        2 => (b, -a, c + a),
        3 if !b_neg => (-b, a, c + b),
        3 => (-b, a + 2 * b, c),
        _ => panic!("vertex {vertex} out of range"),
    }
}

/// A table entry produced the excluded state or two tables disagreed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryDisagreement {
    pub state: ChargeState,
    pub vertex: u8,
    pub results: Vec<(u8, (i64, i64, i64))>,
}

/// Mutation at `vertex` with the multiplicity constant `d`, checking that
/// every applicable table agrees.
pub fn mutate_charge_with(s: ChargeState, vertex: u8, d: i64) -> Result<ChargeState, BoundaryDisagreement> {
    let results: Vec<(u8, (i64, i64, i64))> = s.closed_cases().into_iter().map(|c| (c, table_move(c, vertex, s, d))).collect();
    let first = results[0].1;
    if results.iter().any(|r| r.1 != first) {
        return Err(BoundaryDisagreement { state: s, vertex, results });
    }
    ChargeState::new(first.0, first.1, first.2).ok_or(BoundaryDisagreement { state: s, vertex, results })
}

pub fn mutate_charge(s: ChargeState, vertex: u8) -> Result<ChargeState, BoundaryDisagreement> {
    mutate_charge_with(s, vertex, DEFAULT_D)
}

/// `[i, j, k]`: moves that increase, preserve and decrease the charge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeType(pub u8, pub u8, pub u8);

impl fmt::Display for NodeType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{},{}]", self.0, self.1, self.2)
    }
}

pub fn classify(s: ChargeState) -> Result<NodeType, BoundaryDisagreement> {
    let mut t = NodeType(0, 0, 0);
    for v in 1..=3 {
        let delta = mutate_charge(s, v)?.charge() - s.charge();
        match delta.signum() {
            1 => t.0 += 1,
            0 => t.1 += 1,
            _ => t.2 += 1,
        }
    }
    Ok(t)
}

/// Every state with `max(|alpha|, |beta|, |gamma|) <= bound`.
pub fn grid(bound: i64) -> impl Iterator<Item = ChargeState> {
    (-bound..=bound).flat_map(move |a| {
        (-bound..=bound).flat_map(move |b| (-bound..=bound).filter_map(move |c| ChargeState::new(a, b, c)))
    })
}

/// States on region boundaries where the tables disagree.
pub fn boundary_check(bound: i64) -> Vec<BoundaryDisagreement> {
    let mut bad = Vec::new();
    for s in grid(bound).filter(|s| s.alpha == 0 || s.beta == 0 || s.gamma == 0) {
        for v in 1..=3 {
            if let Err(e) = mutate_charge(s, v) {
                bad.push(e);
            }
        }
    }
    bad
}

/// `(state, vertex)` pairs with no move leading back.
pub fn move_symmetry_failures(bound: i64) -> Vec<(ChargeState, u8)> {
    let mut bad = Vec::new();
    for s in grid(bound) {
        for v in 1..=3 {
            let back = mutate_charge(s, v).ok().is_some_and(|t| (1..=3).any(|w| mutate_charge(t, w).ok() == Some(s)));
            if !back {
                bad.push((s, v));
            }
        }
    }
    bad
}

/// Number of states of each type.
pub fn census(bound: i64) -> BTreeMap<NodeType, u64> {
    let mut out = BTreeMap::new();
    for s in grid(bound) {
        if let Ok(t) = classify(s) {
            *out.entry(t).or_insert(0) += 1;
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Reachability {
    /// Moves leading from the source to the target.
    Reachable { path: Vec<u8> },
    /// No path stays within the charge bound.
    Unreachable { explored: usize },
}

impl Reachability {
    pub fn is_reachable(&self) -> bool {
        matches!(self, Reachability::Reachable { .. })
    }
}

/// Breadth-first search over states of charge at most `bound`.
pub fn bounded_reachability(src: ChargeState, dst: ChargeState, bound: i64) -> Reachability {
    let mut parent: BTreeMap<ChargeState, Option<(ChargeState, u8)>> = BTreeMap::new();
    let mut queue = VecDeque::new();
    if src.charge() <= bound {
        parent.insert(src, None);
        queue.push_back(src);
    }
    while let Some(s) = queue.pop_front() {
        if s == dst {
            let mut path = Vec::new();
            let mut cur = s;
            while let Some(Some((prev, v))) = parent.get(&cur) {
                path.push(*v);
                cur = *prev;
            }
            path.reverse();
            return Reachability::Reachable { path };
        }
        for v in 1..=3 {
            if let Ok(t) = mutate_charge(s, v) {
                if t.charge() <= bound && !parent.contains_key(&t) {
                    parent.insert(t, Some((s, v)));
                    queue.push_back(t);
                }
            }
        }
    }
    Reachability::Unreachable { explored: parent.len() }
}

/// The charge change of each move as stated case by case.
pub fn stated_delta(case: u8, vertex: u8, s: ChargeState) -> i64 {
    let ChargeState { alpha: a, beta: b, gamma: c } = s;
    match (case, vertex) {
        (1, 1) | (3, 1) => 4 * c,
        (1, 2) | (4, 2) => 2 * a,
        (1, 3) | (2, 3) => b,
        (2, 1) | (5, 1) => a + (a + 4 * c).abs(),
        (2, 2) | (5, 2) => -c + (a + c).abs(),
        (3, 2) | (7, 2) => b + (b + 2 * a).abs(),
        (3, 3) | (7, 3) => -a + (a + 2 * b).abs(),
        (4, 1) | (6, 1) => -b + (b + 4 * c).abs(),
        (4, 3) | (6, 3) => c + (c + b).abs(),
        (5, 3) | (8, 3) => -2 * b,
        (6, 2) | (8, 2) => -a,
        (7, 1) | (8, 1) => -4 * c,
        _ => panic!("no entry for case {case}, vertex {vertex}"),
    }
}

/// Conditions under which a state of cases 2, 3, 4 has type `[1,1,1]`.
pub fn listed_111(s: ChargeState) -> bool {
    let ChargeState { alpha: a, beta: b, gamma: c } = s;
    match s.case() {
        2 => b == 0 && (a + 2 * c > 0 || (a + 2 * c < 0 && c != 0)),
        3 => c == 0 && (a + b > 0 || (a + b < 0 && a != 0)),
        4 => a == 0 && (b + 2 * c > 0 || (b + 2 * c < 0 && c != 0)),
        _ => false,
    }
}

/// Type allowed for a state by its case: `[i,j,0]` for case 1, `[3,0,0]`
/// for case 8, `[1,1,1]` only under the listed conditions in cases 2-4,
/// otherwise `[i,j,0]` or `[2,0,1]`.
pub fn type_allowed(s: ChargeState, t: NodeType) -> bool {
    let no_decrease = t.2 == 0;
    match s.case() {
        1 => no_decrease,
        8 => t == NodeType(3, 0, 0),
        2..=4 if t == NodeType(1, 1, 1) => listed_111(s),
        _ => no_decrease || t == NodeType(2, 0, 1),
    }
}

/// States meeting a listed `[1,1,1]` condition whose type is something
/// else. The case 4 condition as listed also admits `beta = 0`, where the
/// type is `[1,2,0]`.
pub fn listed_111_exceptions(bound: i64) -> Vec<(ChargeState, NodeType)> {
    grid(bound)
        .filter(|&s| listed_111(s))
        .filter_map(|s| classify(s).ok().map(|t| (s, t)))
        .filter(|&(_, t)| t != NodeType(1, 1, 1))
        .collect()
}

/// A counterexample found by [`peak_argument_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PeakFailure {
    /// A move changed the charge by something other than the stated amount.
    Delta { state: ChargeState, vertex: u8, stated: i64, actual: i64 },
    /// A type not allowed by the state's case.
    Type { state: ChargeState, found: NodeType },
    /// The charge-preserving move of a `[1,1,1]` state was not the expected
    /// one, or landed outside the expected case.
    Landing { state: ChargeState, vertex: u8, landed: ChargeState },
    /// After the charge-preserving move, one of the other two moves did not
    /// increase the charge.
    NotIncreasing { state: ChargeState, landed: ChargeState, vertex: u8 },
    Boundary(BoundaryDisagreement),
}

/// Expected charge-preserving move and landing case for `[1,1,1]` states.
fn peak_route(case: u8) -> Option<(u8, u8)> {
    match case {
        2 => Some((3, 3)),
        3 => Some((1, 2)),
        4 => Some((2, 4)),
        _ => None,
    }
}

/// Check the case analysis over the grid: stated charge changes, the
/// allowed types, and that no `[1,1,1]` state can be a charge maximum on a
/// path.
pub fn peak_argument_check(bound: i64) -> Vec<PeakFailure> {
    let mut bad = Vec::new();
    for s in grid(bound) {
        let case = s.case();
        for v in 1..=3 {
            match mutate_charge(s, v) {
                Ok(t) => {
                    let stated = stated_delta(case, v, s);
                    let actual = t.charge() - s.charge();
                    if stated != actual {
                        bad.push(PeakFailure::Delta { state: s, vertex: v, stated, actual });
                    }
                }
                Err(e) => bad.push(PeakFailure::Boundary(e)),
            }
        }
        let Ok(t) = classify(s) else { continue };
        if !type_allowed(s, t) {
            bad.push(PeakFailure::Type { state: s, found: t });
        }
        if t != NodeType(1, 1, 1) {
            continue;
        }
        let keep = (1..=3).find(|&v| mutate_charge(s, v).is_ok_and(|x| x.charge() == s.charge())).expect("one preserving move");
        let landed = mutate_charge(s, keep).expect("checked above");
        if peak_route(case) != Some((keep, landed.case())) {
            bad.push(PeakFailure::Landing { state: s, vertex: keep, landed });
        }
        let back = (1..=3).find(|&w| mutate_charge(landed, w).ok() == Some(s));
        for w in (1..=3).filter(|&w| Some(w) != back) {
            if !mutate_charge(landed, w).is_ok_and(|x| x.charge() > landed.charge()) {
                bad.push(PeakFailure::NotIncreasing { state: s, landed, vertex: w });
            }
        }
    }
    bad
}

/// States of charge exactly `c`, reachable from `src` without leaving
/// charge `c`.
pub fn constant_charge_component(src: ChargeState) -> BTreeSet<ChargeState> {
    let c = src.charge();
    let mut seen = BTreeSet::new();
    let mut stack = alloc::vec![src];
    while let Some(s) = stack.pop() {
        if !seen.insert(s) {
            continue;
        }
        for v in 1..=3 {
            if let Ok(t) = mutate_charge(s, v) {
                if t.charge() == c {
                    stack.push(t);
                }
            }
        }
    }
    seen
}
