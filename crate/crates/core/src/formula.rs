//! Cardinality-constrained CNF instances: clauses, multiset formulas,
//! solutions, objective evaluation and the exhaustive optimum.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, ParseError, Result};

/// Dense zero-based variable index. Printed 1-based in DIMACS text.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VarId(pub u32);

impl VarId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for VarId {
    fn from(v: usize) -> Self {
        VarId(u32::try_from(v).expect("variable index overflows u32"))
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0 + 1)
    }
}

/// A disjunction of literals, stored as two sorted, disjoint variable lists.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Clause {
    pos: Vec<VarId>,
    neg: Vec<VarId>,
}

impl Clause {
    /// Builds a clause, deduplicating literals. Returns the offending variable
    /// if some `v` occurs both positively and negatively.
    pub fn new(
        pos: impl IntoIterator<Item = VarId>,
        neg: impl IntoIterator<Item = VarId>,
    ) -> std::result::Result<Self, VarId> {
        let mut pos: Vec<VarId> = pos.into_iter().collect();
        let mut neg: Vec<VarId> = neg.into_iter().collect();
        pos.sort_unstable();
        pos.dedup();
        neg.sort_unstable();
        neg.dedup();
        if let Some(v) = first_common(&pos, &neg) {
            return Err(v);
        }
        Ok(Clause { pos, neg })
    }

    /// Builds a clause from 1-based signed DIMACS literals.
    ///
    /// ```
    /// use kabsat::Clause;
    /// let c = Clause::from_lits(&[1, -2]).unwrap();
    /// assert_eq!(c.pos().len(), 1);
    /// assert_eq!(c.neg().len(), 1);
    /// ```
    pub fn from_lits(lits: &[i64]) -> std::result::Result<Self, VarId> {
        let var = |l: i64| VarId::from(l.unsigned_abs() as usize - 1);
        Clause::new(
            lits.iter().filter(|&&l| l > 0).map(|&l| var(l)),
            lits.iter().filter(|&&l| l < 0).map(|&l| var(l)),
        )
    }

    pub fn pos(&self) -> &[VarId] {
        &self.pos
    }

    pub fn neg(&self) -> &[VarId] {
        &self.neg
    }

    pub fn width(&self) -> usize {
        self.pos.len() + self.neg.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pos.is_empty() && self.neg.is_empty()
    }

    pub fn contains(&self, v: VarId) -> bool {
        self.pos.binary_search(&v).is_ok() || self.neg.binary_search(&v).is_ok()
    }

    /// All variables of the clause in ascending order.
    pub fn vars(&self) -> Vec<VarId> {
        let mut vars: Vec<VarId> = self.pos.iter().chain(&self.neg).copied().collect();
        vars.sort_unstable();
        vars
    }

    /// Satisfied iff some positive variable is true or some negative one is false.
    pub fn is_satisfied_by(&self, is_true: impl Fn(VarId) -> bool) -> bool {
        self.pos.iter().any(|&v| is_true(v)) || self.neg.iter().any(|&v| !is_true(v))
    }

    /// Signed 1-based literals, positives first.
    pub fn lits(&self) -> impl Iterator<Item = i64> + '_ {
        self.pos
            .iter()
            .map(|v| v.0 as i64 + 1)
            .chain(self.neg.iter().map(|v| -(v.0 as i64 + 1)))
    }

    /// Removes every literal whose variable is flagged dead.
    fn without(&self, dead: &[bool]) -> Clause {
        Clause {
            pos: self.pos.iter().copied().filter(|v| !dead[v.index()]).collect(),
            neg: self.neg.iter().copied().filter(|v| !dead[v.index()]).collect(),
        }
    }

    /// Renames variables; every variable must have a target.
    fn renamed(&self, map: &[Option<VarId>]) -> Clause {
        let rename = |v: &VarId| map[v.index()].expect("renamed a deleted variable");
        let mut pos: Vec<VarId> = self.pos.iter().map(rename).collect();
        let mut neg: Vec<VarId> = self.neg.iter().map(rename).collect();
        pos.sort_unstable();
        neg.sort_unstable();
        Clause { pos, neg }
    }
}

fn first_common(a: &[VarId], b: &[VarId]) -> Option<VarId> {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return Some(a[i]),
        }
    }
    None
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lits: Vec<String> = self
            .pos
            .iter()
            .map(|v| v.to_string())
            .chain(self.neg.iter().map(|v| format!("¬{v}")))
            .collect();
        write!(f, "({})", lits.join(" ∨ "))
    }
}

/// Variables set to true. Kept sorted so that `Ord` is the lexicographic
/// order used for tie-breaking.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Solution {
    true_vars: Vec<VarId>,
}

impl Solution {
    pub fn empty() -> Self {
        Solution::default()
    }

    pub fn new(vars: impl IntoIterator<Item = VarId>) -> Self {
        let mut true_vars: Vec<VarId> = vars.into_iter().collect();
        true_vars.sort_unstable();
        true_vars.dedup();
        Solution { true_vars }
    }

    pub fn vars(&self) -> &[VarId] {
        &self.true_vars
    }

    pub fn len(&self) -> usize {
        self.true_vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.true_vars.is_empty()
    }

    pub fn contains(&self, v: VarId) -> bool {
        self.true_vars.binary_search(&v).is_ok()
    }

    pub fn mask(&self, n_vars: usize) -> Vec<bool> {
        let mut mask = vec![false; n_vars];
        for v in &self.true_vars {
            if v.index() < n_vars {
                mask[v.index()] = true;
            }
        }
        mask
    }

    /// 1-based indices, space separated.
    pub fn to_dimacs(&self) -> String {
        self.true_vars
            .iter()
            .map(|v| (v.0 + 1).to_string())
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Upper limit on the number of candidate solutions an exhaustive search may visit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget(pub u128);

impl Default for Budget {
    fn default() -> Self {
        Budget(20_000_000)
    }
}

impl Budget {
    pub fn check(self, needed: u128) -> Result<()> {
        if needed > self.0 {
            Err(Error::BudgetExceeded {
                needed,
                budget: self.0,
            })
        } else {
            Ok(())
        }
    }
}

/// `sum_{i=0..=k} C(n, i)`, saturating.
pub fn count_solutions(n: usize, k: usize) -> u128 {
    let mut total: u128 = 0;
    let mut term: u128 = 1;
    for i in 0..=k.min(n) {
        total = total.saturating_add(term);
        term = term.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    total
}

/// A CNF formula over `n_vars` variables whose clauses form a multiset,
/// stored as distinct clause to multiplicity.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Formula {
    n_vars: usize,
    clauses: BTreeMap<Clause, u64>,
}

impl Formula {
    pub fn new(n_vars: usize) -> Self {
        Formula {
            n_vars,
            clauses: BTreeMap::new(),
        }
    }

    /// Builds a formula; duplicate clauses merge and empty clauses are dropped.
    pub fn from_clauses(
        n_vars: usize,
        clauses: impl IntoIterator<Item = (Clause, u64)>,
    ) -> Result<Self> {
        let mut phi = Formula::new(n_vars);
        for (clause, mult) in clauses {
            if mult == 0 {
                return Err(Error::InvalidParameter("clause multiplicity 0".into()));
            }
            if let Some(v) = clause.vars().last() {
                if v.index() >= n_vars {
                    return Err(Error::InvalidParameter(format!(
                        "clause {clause} mentions {v} but the formula has {n_vars} variables"
                    )));
                }
            }
            phi.add(clause, mult);
        }
        Ok(phi)
    }

    /// Convenience constructor from signed 1-based literals.
    /// Panics on malformed input; meant for tests and examples.
    pub fn from_lits(n_vars: usize, clauses: &[(&[i64], u64)]) -> Self {
        Formula::from_clauses(
            n_vars,
            clauses
                .iter()
                .map(|(lits, m)| (Clause::from_lits(lits).expect("tautological clause"), *m)),
        )
        .expect("invalid formula")
    }

    pub(crate) fn add(&mut self, clause: Clause, mult: u64) {
        if clause.is_empty() || mult == 0 {
            return;
        }
        *self.clauses.entry(clause).or_insert(0) += mult;
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn clauses(&self) -> impl Iterator<Item = (&Clause, u64)> + '_ {
        self.clauses.iter().map(|(c, &m)| (c, m))
    }

    pub fn multiplicity(&self, clause: &Clause) -> u64 {
        self.clauses.get(clause).copied().unwrap_or(0)
    }

    pub fn distinct_clauses(&self) -> usize {
        self.clauses.len()
    }

    /// Total clause count `m`, i.e. the sum of multiplicities.
    pub fn mass(&self) -> u64 {
        self.clauses.values().sum()
    }

    /// `|C_neg|`: total multiplicity of clauses with a negative literal.
    pub fn neg_mass(&self) -> u64 {
        self.clauses
            .iter()
            .filter(|(c, _)| !c.neg.is_empty())
            .map(|(_, &m)| m)
            .sum()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    /// Number of clauses satisfied by `y`, counted with multiplicity.
    pub fn val(&self, y: &Solution) -> u64 {
        let mask = y.mask(self.n_vars);
        self.val_mask(&mask)
    }

    pub fn val_mask(&self, mask: &[bool]) -> u64 {
        self.clauses
            .iter()
            .filter(|(c, _)| c.is_satisfied_by(|v| mask[v.index()]))
            .map(|(_, &m)| m)
            .sum()
    }

    /// Incidence-graph degree: multiplicity of clauses mentioning `v`.
    pub fn degree(&self, v: VarId) -> u64 {
        self.clauses
            .iter()
            .filter(|(c, _)| c.contains(v))
            .map(|(_, &m)| m)
            .sum()
    }

    pub fn degrees(&self) -> Vec<u64> {
        let mut deg = vec![0u64; self.n_vars];
        for (c, &m) in &self.clauses {
            for v in c.pos.iter().chain(&c.neg) {
                deg[v.index()] += m;
            }
        }
        deg
    }

    /// Variables occurring as a negative literal somewhere.
    pub fn negative_vars(&self) -> BTreeSet<VarId> {
        self.clauses
            .keys()
            .flat_map(|c| c.neg.iter().copied())
            .collect()
    }

    pub fn negative_mask(&self) -> Vec<bool> {
        let mut mask = vec![false; self.n_vars];
        for c in self.clauses.keys() {
            for v in &c.neg {
                mask[v.index()] = true;
            }
        }
        mask
    }

    /// Keeps the clauses matching `keep`; returns the formula and the removed mass.
    pub fn retain_clauses(&self, mut keep: impl FnMut(&Clause) -> bool) -> (Formula, u64) {
        let mut out = Formula::new(self.n_vars);
        let mut removed = 0;
        for (c, &m) in &self.clauses {
            if keep(c) {
                out.clauses.insert(c.clone(), m);
            } else {
                removed += m;
            }
        }
        (out, removed)
    }

    /// Replaces every multiplicity through `f`; zero results drop the clause.
    pub fn map_multiplicities(&self, mut f: impl FnMut(u64) -> u64) -> Formula {
        let mut out = Formula::new(self.n_vars);
        for (c, &m) in &self.clauses {
            out.add(c.clone(), f(m));
        }
        out
    }

    /// Deletes variables together with all their literals, keeping the
    /// variable numbering. Clauses that become empty are dropped.
    pub fn delete_vars(&self, dead: &[VarId]) -> Formula {
        let mut mask = vec![false; self.n_vars];
        for v in dead {
            mask[v.index()] = true;
        }
        let mut out = Formula::new(self.n_vars);
        for (c, &m) in &self.clauses {
            out.add(c.without(&mask), m);
        }
        out
    }

    /// Restricts the formula to `keep` (ascending) and renumbers densely:
    /// new variable `i` is old variable `keep[i]`.
    pub fn restrict_to(&self, keep: &[VarId]) -> Formula {
        debug_assert!(keep.windows(2).all(|w| w[0] < w[1]));
        let mut map = vec![None; self.n_vars];
        for (i, &v) in keep.iter().enumerate() {
            map[v.index()] = Some(VarId::from(i));
        }
        let dead: Vec<bool> = map.iter().map(Option::is_none).collect();
        let mut out = Formula::new(keep.len());
        for (c, &m) in &self.clauses {
            out.add(c.without(&dead).renamed(&map), m);
        }
        out
    }

    /// Extended-DIMACS serialization; clauses in sorted order.
    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p mksat {} {}\n", self.n_vars, self.clauses.len());
        for (c, m) in &self.clauses {
            out.push_str(&m.to_string());
            for l in c.lits() {
                out.push(' ');
                out.push_str(&l.to_string());
            }
            out.push_str(" 0\n");
        }
        out
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_dimacs())
    }
}

impl FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        parse_formula(s)
    }
}

/// Parses extended DIMACS:
///
/// ```text
/// c comment
/// p mksat <n_vars> <n_clause_lines>
/// <multiplicity> <lit> ... <lit> 0
/// ```
pub fn parse_formula(text: &str) -> std::result::Result<Formula, ParseError> {
    let mut header: Option<(usize, usize)> = None;
    let mut phi = Formula::default();
    let mut lines_seen = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') || trimmed.starts_with('%') {
            continue;
        }
        if trimmed.starts_with('p') {
            if header.is_some() {
                return Err(ParseError::DuplicateHeader { line });
            }
            let parts: Vec<&str> = trimmed.split_whitespace().collect();
            if parts.len() != 4 || parts[0] != "p" || parts[1] != "mksat" {
                return Err(ParseError::BadHeader { line });
            }
            let n: usize = parts[2].parse().map_err(|_| ParseError::BadHeader { line })?;
            let m: usize = parts[3].parse().map_err(|_| ParseError::BadHeader { line })?;
            header = Some((n, m));
            phi = Formula::new(n);
            continue;
        }
        let Some((n_vars, _)) = header else {
            return Err(ParseError::MissingHeader { line });
        };
        let malformed = |reason: &str| ParseError::Malformed {
            line,
            reason: reason.to_string(),
        };
        let mut tokens = trimmed.split_whitespace();
        let mult: i64 = tokens
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| malformed("expected a multiplicity"))?;
        if mult < 1 {
            return Err(ParseError::ZeroMultiplicity { line });
        }
        let mut lits = Vec::new();
        let mut terminated = false;
        for tok in tokens.by_ref() {
            let lit: i64 = tok
                .parse()
                .map_err(|_| malformed(&format!("bad literal `{tok}`")))?;
            if lit == 0 {
                terminated = true;
                break;
            }
            if lit.unsigned_abs() as usize > n_vars {
                return Err(ParseError::VarOutOfRange {
                    line,
                    literal: lit,
                    n_vars,
                });
            }
            lits.push(lit);
        }
        if !terminated {
            return Err(malformed("clause is not terminated by 0"));
        }
        if tokens.next().is_some() {
            return Err(malformed("trailing tokens after terminating 0"));
        }
        let clause = Clause::from_lits(&lits).map_err(|v| ParseError::Tautology {
            line,
            var: v.index() + 1,
        })?;
        phi.add(clause, mult as u64);
        lines_seen += 1;
    }
    let Some((_, expected)) = header else {
        return Err(ParseError::MissingHeader { line: 0 });
    };
    if expected != lines_seen {
        return Err(ParseError::ClauseCount {
            expected,
            found: lines_seen,
        });
    }
    Ok(phi)
}

/// Clause-local counters that make adding or removing one true variable
/// cost `O(deg)`.
pub(crate) struct Tracker {
    mult: Vec<u64>,
    neg_len: Vec<u32>,
    pos_hits: Vec<u32>,
    neg_true: Vec<u32>,
    pos_occ: Vec<Vec<usize>>,
    neg_occ: Vec<Vec<usize>>,
    value: u64,
}

impl Tracker {
    pub(crate) fn new(phi: &Formula) -> Self {
        let n = phi.n_vars;
        let mut pos_occ = vec![Vec::new(); n];
        let mut neg_occ = vec![Vec::new(); n];
        let mut mult = Vec::with_capacity(phi.clauses.len());
        let mut neg_len = Vec::with_capacity(phi.clauses.len());
        let mut value = 0;
        for (i, (c, &m)) in phi.clauses.iter().enumerate() {
            for v in &c.pos {
                pos_occ[v.index()].push(i);
            }
            for v in &c.neg {
                neg_occ[v.index()].push(i);
            }
            mult.push(m);
            neg_len.push(c.neg.len() as u32);
            if !c.neg.is_empty() {
                value += m;
            }
        }
        let len = mult.len();
        Tracker {
            mult,
            neg_len,
            pos_hits: vec![0; len],
            neg_true: vec![0; len],
            pos_occ,
            neg_occ,
            value,
        }
    }

    #[inline]
    fn sat(&self, i: usize) -> bool {
        self.pos_hits[i] > 0 || self.neg_true[i] < self.neg_len[i]
    }

    pub(crate) fn value(&self) -> u64 {
        self.value
    }

    pub(crate) fn add(&mut self, v: VarId) {
        for &i in &self.pos_occ[v.index()] {
            if !self.sat(i) {
                self.value += self.mult[i];
            }
            self.pos_hits[i] += 1;
        }
        for &i in &self.neg_occ[v.index()] {
            let before = self.sat(i);
            self.neg_true[i] += 1;
            if before && !self.sat(i) {
                self.value -= self.mult[i];
            }
        }
    }

    pub(crate) fn remove(&mut self, v: VarId) {
        for &i in &self.pos_occ[v.index()] {
            self.pos_hits[i] -= 1;
            if !self.sat(i) {
                self.value -= self.mult[i];
            }
        }
        for &i in &self.neg_occ[v.index()] {
            let before = self.sat(i);
            self.neg_true[i] -= 1;
            if !before && self.sat(i) {
                self.value += self.mult[i];
            }
        }
    }

    /// Change of value if `v` (currently false) were set to true.
    pub(crate) fn gain(&self, v: VarId) -> i128 {
        let mut gain: i128 = 0;
        for &i in &self.pos_occ[v.index()] {
            if !self.sat(i) {
                gain += self.mult[i] as i128;
            }
        }
        for &i in &self.neg_occ[v.index()] {
            if self.pos_hits[i] == 0 && self.neg_true[i] + 1 == self.neg_len[i] {
                gain -= self.mult[i] as i128;
            }
        }
        gain
    }
}

/// Visits every `Y` with `|Y| <= k` in lexicographic order together with
/// `val(phi, Y)`.
pub fn for_each_solution(
    phi: &Formula,
    k: usize,
    budget: Budget,
    mut visit: impl FnMut(&[VarId], u64),
) -> Result<()> {
    budget.check(count_solutions(phi.n_vars, k))?;
    let mut tracker = Tracker::new(phi);
    let mut stack = Vec::with_capacity(k);
    descend(phi.n_vars, k, 0, &mut tracker, &mut stack, &mut visit);
    Ok(())
}

fn descend(
    n: usize,
    k: usize,
    start: usize,
    tracker: &mut Tracker,
    stack: &mut Vec<VarId>,
    visit: &mut impl FnMut(&[VarId], u64),
) {
    visit(stack, tracker.value());
    if stack.len() == k {
        return;
    }
    for v in start..n {
        let v = VarId::from(v);
        tracker.add(v);
        stack.push(v);
        descend(n, k, v.index() + 1, tracker, stack, visit);
        stack.pop();
        tracker.remove(v);
    }
}

/// `val(phi, Y)` for every `|Y| <= k`, in the order of [`for_each_solution`].
pub fn all_values(phi: &Formula, k: usize, budget: Budget) -> Result<Vec<u64>> {
    let mut values = Vec::new();
    for_each_solution(phi, k, budget, |_, v| values.push(v))?;
    Ok(values)
}

/// Exhaustive optimum over all `|Y| <= k`; ties go to the lexicographically
/// smallest solution.
pub fn brute_force_opt(phi: &Formula, k: usize, budget: Budget) -> Result<(Solution, u64)> {
    let mut best: Option<(Vec<VarId>, u64)> = None;
    for_each_solution(phi, k, budget, |y, value| {
        // Lexicographic visiting order: the first maximum wins.
        if best.as_ref().map_or(true, |(_, b)| value > *b) {
            best = Some((y.to_vec(), value));
        }
    })?;
    let (y, value) = best.expect("the empty solution is always visited");
    Ok((Solution::new(y), value))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(i: u32) -> VarId {
        VarId(i)
    }

    #[test]
    fn parse_reads_grammar() {
        let phi = parse_formula("p mksat 2 1\n1 1 -2 0").unwrap();
        assert_eq!(phi.n_vars(), 2);
        let c = Clause::new([v(0)], [v(1)]).unwrap();
        assert_eq!(phi.multiplicity(&c), 1);
        assert_eq!(phi.distinct_clauses(), 1);
    }

    #[test]
    fn parse_merges_duplicates() {
        let phi = parse_formula("p mksat 1 2\n3 1 0\n2 1 0").unwrap();
        assert_eq!(phi.multiplicity(&Clause::from_lits(&[1]).unwrap()), 5);
        assert_eq!(phi.mass(), 5);
    }

    #[test]
    fn parse_rejects_tautology() {
        let err = parse_formula("p mksat 1 1\n1 1 -1 0").unwrap_err();
        assert!(matches!(err, ParseError::Tautology { var: 1, .. }));
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            parse_formula("1 1 0"),
            Err(ParseError::MissingHeader { .. })
        ));
        assert!(matches!(
            parse_formula("p cnf 1 1\n1 1 0"),
            Err(ParseError::BadHeader { .. })
        ));
        assert!(matches!(
            parse_formula("p mksat 1 1\n1 2 0"),
            Err(ParseError::VarOutOfRange { literal: 2, .. })
        ));
        assert!(matches!(
            parse_formula("p mksat 1 1\n0 1 0"),
            Err(ParseError::ZeroMultiplicity { .. })
        ));
        assert!(matches!(
            parse_formula("p mksat 1 1\n-2 1 0"),
            Err(ParseError::ZeroMultiplicity { .. })
        ));
        assert!(matches!(
            parse_formula("p mksat 1 1\n1 1"),
            Err(ParseError::Malformed { .. })
        ));
        assert!(matches!(
            parse_formula("p mksat 1 1\n1 x 0"),
            Err(ParseError::Malformed { .. })
        ));
        assert!(matches!(
            parse_formula("p mksat 1 2\n1 1 0"),
            Err(ParseError::ClauseCount { .. })
        ));
        assert!(matches!(
            parse_formula("p mksat 1 0\np mksat 1 0"),
            Err(ParseError::DuplicateHeader { .. })
        ));
    }

    #[test]
    fn parse_skips_comments_and_empty_clauses() {
        let phi = parse_formula("c hello\np mksat 2 2\nc mid\n4 0\n1 2 0\n").unwrap();
        assert_eq!(phi.mass(), 1);
    }

    #[test]
    fn serialize_sorts_clauses() {
        let phi = Formula::from_lits(3, &[(&[3], 1), (&[1, -2], 2), (&[-1], 1)]);
        let text = phi.to_dimacs();
        assert_eq!(parse_formula(&text).unwrap(), phi);
        assert!(text.starts_with("p mksat 3 3\n"));
    }

    #[test]
    fn val_examples() {
        let phi = Formula::from_lits(2, &[(&[1, 2], 1), (&[-1], 1)]);
        assert_eq!(phi.val(&Solution::new([v(0)])), 1);

        let phi = Formula::from_lits(2, &[(&[-1, 2], 3), (&[1], 2)]);
        // Y = {x2}: (¬x1 ∨ x2) satisfied by both literals, (x1) unsatisfied.
        assert_eq!(phi.val(&Solution::new([v(1)])), 3);
    }

    #[test]
    fn val_of_empty_is_neg_mass() {
        let phi = Formula::from_lits(3, &[(&[-1, 2], 3), (&[1], 2), (&[-3], 4)]);
        assert_eq!(phi.val(&Solution::empty()), phi.neg_mass());
        assert_eq!(phi.neg_mass(), 7);
    }

    #[test]
    fn brute_force_examples() {
        let phi = Formula::from_lits(1, &[(&[1], 1)]);
        assert_eq!(
            brute_force_opt(&phi, 1, Budget::default()).unwrap(),
            (Solution::new([v(0)]), 1)
        );

        let phi = Formula::from_lits(2, &[(&[-1], 5), (&[1, 2], 1)]);
        assert_eq!(
            brute_force_opt(&phi, 1, Budget::default()).unwrap(),
            (Solution::new([v(1)]), 6)
        );

        let phi = Formula::from_lits(3, &[(&[-1, 2], 3), (&[1], 2), (&[-3], 4)]);
        assert_eq!(
            brute_force_opt(&phi, 0, Budget::default()).unwrap(),
            (Solution::empty(), 7)
        );
    }

    #[test]
    fn brute_force_breaks_ties_lexicographically() {
        // Every singleton scores 1; {x1} must win.
        let phi = Formula::from_lits(3, &[(&[1], 1), (&[2], 1), (&[3], 1)]);
        let (y, val) = brute_force_opt(&phi, 1, Budget::default()).unwrap();
        assert_eq!((y, val), (Solution::new([v(0)]), 1));
        // With k = 2, {x1, x2} < {x1, x3} < {x2, x3}.
        let (y, _) = brute_force_opt(&phi, 2, Budget::default()).unwrap();
        assert_eq!(y, Solution::new([v(0), v(1)]));
    }

    #[test]
    fn brute_force_respects_budget() {
        let phi = Formula::new(40);
        let err = brute_force_opt(&phi, 10, Budget(1000)).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { .. }));
    }

    #[test]
    fn degree_examples() {
        let phi = Formula::from_lits(2, &[(&[1, -2], 4)]);
        assert_eq!(phi.degree(v(1)), 4);
        let phi = Formula::from_lits(3, &[(&[1], 2), (&[-1], 3)]);
        assert_eq!(phi.degree(v(0)), 5);
        assert_eq!(phi.degree(v(2)), 0);
        assert_eq!(phi.degrees(), vec![5, 0, 0]);
    }

    #[test]
    fn negative_vars_examples() {
        let mono = Formula::from_lits(2, &[(&[1, 2], 1)]);
        assert!(mono.negative_vars().is_empty());
        let phi = Formula::from_lits(2, &[(&[-1, 2], 1)]);
        assert_eq!(phi.negative_vars(), BTreeSet::from([v(0)]));
        let phi = Formula::from_lits(2, &[(&[-1], 1), (&[2], 1)]);
        assert_eq!(phi.negative_vars(), BTreeSet::from([v(0)]));
    }

    #[test]
    fn delete_and_restrict() {
        let phi = Formula::from_lits(3, &[(&[1, 2], 1), (&[1, 3], 2), (&[2], 1)]);
        let del = phi.delete_vars(&[v(1), v(2)]);
        // (x1 ∨ x2) and (x1 ∨ x3) collapse onto (x1); (x2) vanishes.
        assert_eq!(del.multiplicity(&Clause::from_lits(&[1]).unwrap()), 3);
        assert_eq!(del.mass(), 3);
        let res = phi.restrict_to(&[v(0), v(2)]);
        assert_eq!(res.n_vars(), 2);
        assert_eq!(res.multiplicity(&Clause::from_lits(&[1, 2]).unwrap()), 2);
        assert_eq!(res.multiplicity(&Clause::from_lits(&[1]).unwrap()), 1);
    }

    #[test]
    fn tracker_gain_matches_val() {
        let phi = Formula::from_lits(3, &[(&[-1, -2], 2), (&[1, 3], 1), (&[-3], 4), (&[2], 1)]);
        let mut t = Tracker::new(&phi);
        for v in [v(0), v(1), v(2)] {
            let before = t.value();
            let g = t.gain(v);
            t.add(v);
            assert_eq!(before as i128 + g, t.value() as i128);
        }
        assert_eq!(t.value(), phi.val(&Solution::new([v(0), v(1), v(2)])));
    }

    #[test]
    fn count_solutions_small() {
        assert_eq!(count_solutions(18, 4), 1 + 18 + 153 + 816 + 3060);
        assert_eq!(count_solutions(3, 5), 8);
        assert_eq!(count_solutions(0, 2), 1);
    }
}
