//! Strict partitions, shifted tableaux, the shifted Littlewood–Richardson
//! rule and Schur P-polynomials.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// A strictly decreasing sequence of positive integers.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default, Serialize)]
pub struct StrictPartition {
    parts: Vec<usize>,
}

impl StrictPartition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.contains(&0) || parts.windows(2).any(|w| w[0] <= w[1]) {
            return Err(Error::Invalid(format!("{parts:?} is not a strict partition")));
        }
        Ok(StrictPartition { parts })
    }

    pub fn empty() -> Self {
        StrictPartition::default()
    }

    /// The staircase λ(n) = (n+1, n, …, 1); only n ≥ 1 is accepted.
    pub fn staircase(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Invalid("staircase λ(n) requires n ≥ 1".into()));
        }
        Ok(StrictPartition { parts: (1..=n + 1).rev().collect() })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// ℓ(λ) mod 2.
    pub fn delta(&self) -> usize {
        self.len() % 2
    }

    /// λ_i (1-based), zero past the end.
    pub fn part(&self, i: usize) -> usize {
        self.parts.get(i - 1).copied().unwrap_or(0)
    }

    pub fn contains(&self, other: &StrictPartition) -> bool {
        other.len() <= self.len() && (1..=other.len()).all(|i| other.part(i) <= self.part(i))
    }

    /// Column of each square of the shifted frame, numbered left to right
    /// and top to bottom; row r starts in column r.
    pub fn canonical_columns(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.size());
        for (r, &len) in self.parts.iter().enumerate() {
            out.extend((0..len).map(|j| r + 1 + j));
        }
        out
    }

    /// The canonical filling as rows of square numbers.
    pub fn canonical_filling(&self) -> Vec<Vec<usize>> {
        let mut next = 1;
        self.parts
            .iter()
            .map(|&len| {
                let row: Vec<usize> = (next..next + len).collect();
                next += len;
                row
            })
            .collect()
    }
}

impl fmt::Display for StrictPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.parts.iter().map(usize::to_string).collect();
        write!(f, "({})", s.join(","))
    }
}

impl std::str::FromStr for StrictPartition {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().trim_start_matches('(').trim_end_matches(')');
        if t.trim().is_empty() {
            return Ok(StrictPartition::empty());
        }
        let parts = t
            .split(',')
            .map(|x| x.trim().parse::<usize>().map_err(|_| Error::Invalid(format!("bad part `{x}`"))))
            .collect::<Result<Vec<_>>>()?;
        StrictPartition::new(parts)
    }
}

/// All strict partitions of `k`, in decreasing lexicographic order.
pub fn strict_partitions(k: usize) -> Vec<StrictPartition> {
    fn rec(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<StrictPartition>) {
        if rest == 0 {
            out.push(StrictPartition { parts: cur.clone() });
            return;
        }
        for p in (1..=rest.min(max)).rev() {
            cur.push(p);
            rec(rest - p, p - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(k, k, &mut Vec::new(), &mut out);
    out
}

/// A letter of the alphabet 1′ < 1 < 2′ < 2 < ⋯.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct MarkedLetter {
    pub value: usize,
    pub marked: bool,
}

impl MarkedLetter {
    pub fn new(value: usize, marked: bool) -> Self {
        MarkedLetter { value, marked }
    }

    fn rank(self) -> usize {
        2 * self.value - usize::from(self.marked)
    }
}

impl Ord for MarkedLetter {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rank().cmp(&other.rank())
    }
}

impl PartialOrd for MarkedLetter {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MarkedLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.value, if self.marked { "'" } else { "" })
    }
}

/// Parses words like `1 2 1' 2'` or `1,2,1',2'`.
pub fn parse_word(s: &str) -> Result<Vec<MarkedLetter>> {
    s.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| {
            let (body, marked) = match t.strip_suffix('\'') {
                Some(b) => (b, true),
                None => (t, false),
            };
            match body.parse::<usize>() {
                Ok(v) if v >= 1 => Ok(MarkedLetter::new(v, marked)),
                _ => Err(Error::Invalid(format!("bad letter `{t}`"))),
            }
        })
        .collect()
}

pub fn format_word(w: &[MarkedLetter]) -> String {
    w.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

/// The skew shifted frame μ/λ.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct ShiftedShape {
    pub outer: StrictPartition,
    pub inner: StrictPartition,
}

impl ShiftedShape {
    pub fn new(outer: StrictPartition, inner: StrictPartition) -> Result<Self> {
        if !outer.contains(&inner) {
            return Err(Error::Invalid(format!("{inner} is not contained in {outer}")));
        }
        Ok(ShiftedShape { outer, inner })
    }

    /// Columns of row `r` (1-based rows and columns).
    pub fn row_range(&self, r: usize) -> std::ops::Range<usize> {
        (r + self.inner.part(r))..(r + self.outer.part(r))
    }

    pub fn rows(&self) -> usize {
        self.outer.len()
    }

    pub fn contains_cell(&self, r: usize, c: usize) -> bool {
        r >= 1 && r <= self.rows() && self.row_range(r).contains(&c)
    }

    pub fn size(&self) -> usize {
        self.outer.size() - self.inner.size()
    }

    /// Cells in row-major order, top row first.
    pub fn cells(&self) -> Vec<(usize, usize)> {
        (1..=self.rows()).flat_map(|r| self.row_range(r).map(move |c| (r, c))).collect()
    }
}

/// A filling of a skew shifted frame.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ShiftedTableau {
    pub shape: ShiftedShape,
    pub entries: BTreeMap<(usize, usize), MarkedLetter>,
}

impl ShiftedTableau {
    /// The four tableau conditions: weakly increasing rows and columns, no
    /// repeated marked letter in a row, no repeated unmarked letter in a
    /// column.
    pub fn is_valid(&self) -> bool {
        let cells = self.shape.cells();
        if cells.len() != self.entries.len() || cells.iter().any(|c| !self.entries.contains_key(c)) {
            return false;
        }
        for (&(r, c), &x) in &self.entries {
            if let Some(&right) = self.entries.get(&(r, c + 1)) {
                if right < x || (right == x && x.marked) {
                    return false;
                }
            }
            if let Some(&below) = self.entries.get(&(r + 1, c)) {
                if below < x || (below == x && !x.marked) {
                    return false;
                }
            }
        }
        // equal letters are contiguous once rows and columns are monotone
        true
    }

    /// Rows left to right, bottom row first.
    pub fn word(&self) -> Vec<MarkedLetter> {
        let mut out = Vec::with_capacity(self.entries.len());
        for r in (1..=self.shape.rows()).rev() {
            out.extend(self.shape.row_range(r).filter_map(|c| self.entries.get(&(r, c)).copied()));
        }
        out
    }

    /// Content ν: ν_i counts entries with unmarked value i.
    pub fn content(&self) -> Vec<usize> {
        content_of(&self.word())
    }

    pub fn is_lr(&self) -> bool {
        let w = self.word();
        self.is_valid() && lattice_property(&w) && leftmost_unmarked(&w)
    }

    /// Rows joined by ` / `, letters by commas; skew rows list filled cells only.
    pub fn to_text(&self) -> String {
        (1..=self.shape.rows())
            .map(|r| {
                self.shape
                    .row_range(r)
                    .filter_map(|c| self.entries.get(&(r, c)).map(ToString::to_string))
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .filter(|row| !row.is_empty())
            .collect::<Vec<_>>()
            .join(" / ")
    }
}

pub fn content_of(w: &[MarkedLetter]) -> Vec<usize> {
    let max = w.iter().map(|x| x.value).max().unwrap_or(0);
    let mut nu = vec![0; max];
    for x in w {
        nu[x.value - 1] += 1;
    }
    nu
}

/// The lattice property of a word.
///
/// With N = |w|, m_i(j) counts unmarked i among the last j letters for
/// j ≤ N, and adds the marked i′ among the first j−N letters beyond. Whenever
/// m_i(j) = m_{i−1}(j) (for i ≥ 2) the next letter scanned must avoid
/// {i, i′} in the backward pass and {i−1, i′} in the forward pass.
pub fn lattice_property(w: &[MarkedLetter]) -> bool {
    let n = w.len();
    let max = w.iter().map(|x| x.value).max().unwrap_or(0);
    // m[i] for letters 0..=max+1 at the current j
    let mut m = vec![0usize; max + 2];
    for j in 0..2 * n {
        if j < n {
            let next = w[n - j - 1];
            for i in 2..=max + 1 {
                if m[i] == m[i - 1] && next.value == i {
                    return false;
                }
            }
            if !next.marked {
                m[next.value] += 1;
            }
        } else {
            let next = w[j - n];
            for i in 2..=max + 1 {
                if m[i] == m[i - 1] && ((next.value == i - 1 && !next.marked) || (next.value == i && next.marked)) {
                    return false;
                }
            }
            if next.marked {
                m[next.value] += 1;
            }
        }
    }
    true
}

/// For each i, the leftmost letter with value i is unmarked.
pub fn leftmost_unmarked(w: &[MarkedLetter]) -> bool {
    let mut seen = std::collections::HashSet::new();
    for x in w {
        if seen.insert(x.value) && x.marked {
            return false;
        }
    }
    true
}

/// Enumerates fillings of `shape` with the given row/column rules, calling
/// `visit` on each complete tableau.
///
/// `alphabet` is the largest unmarked value; `content` (if given) fixes the
/// letter counts; `unmarked_diagonal` forbids marked letters on the main
/// diagonal.
fn enumerate_tableaux(
    shape: &ShiftedShape,
    alphabet: usize,
    content: Option<&[usize]>,
    unmarked_diagonal: bool,
    visit: &mut dyn FnMut(&BTreeMap<(usize, usize), MarkedLetter>),
) {
    let cells = shape.cells();
    let mut entries = BTreeMap::new();
    let mut remaining: Vec<usize> = content.map(|c| c.to_vec()).unwrap_or_default();
    let letters: Vec<MarkedLetter> =
        (1..=alphabet).flat_map(|v| [MarkedLetter::new(v, true), MarkedLetter::new(v, false)]).collect();

    #[allow(clippy::too_many_arguments)]
    fn rec(
        idx: usize,
        cells: &[(usize, usize)],
        letters: &[MarkedLetter],
        entries: &mut BTreeMap<(usize, usize), MarkedLetter>,
        remaining: &mut Vec<usize>,
        use_content: bool,
        unmarked_diagonal: bool,
        visit: &mut dyn FnMut(&BTreeMap<(usize, usize), MarkedLetter>),
    ) {
        if idx == cells.len() {
            visit(entries);
            return;
        }
        let (r, c) = cells[idx];
        let left = entries.get(&(r, c.wrapping_sub(1))).copied();
        let above = if r > 1 { entries.get(&(r - 1, c)).copied() } else { None };
        for &x in letters {
            if unmarked_diagonal && r == c && x.marked {
                continue;
            }
            if let Some(l) = left {
                if x < l || (x == l && x.marked) {
                    continue;
                }
            }
            if let Some(a) = above {
                if x < a || (x == a && !x.marked) {
                    continue;
                }
            }
            if use_content {
                if remaining[x.value - 1] == 0 {
                    continue;
                }
                remaining[x.value - 1] -= 1;
            }
            entries.insert((r, c), x);
            rec(idx + 1, cells, letters, entries, remaining, use_content, unmarked_diagonal, visit);
            entries.remove(&(r, c));
            if use_content {
                remaining[x.value - 1] += 1;
            }
        }
    }

    rec(0, &cells, &letters, &mut entries, &mut remaining, content.is_some(), unmarked_diagonal, visit);
}

/// f^μ_{λ,ν}: shifted tableaux of shape μ/λ and content ν whose word is a
/// lattice word with unmarked leftmost occurrences.
pub fn lr_coefficient(lambda: &StrictPartition, nu: &StrictPartition, mu: &StrictPartition) -> u64 {
    if !mu.contains(lambda) || lambda.size() + nu.size() != mu.size() {
        return 0;
    }
    let shape = ShiftedShape::new(mu.clone(), lambda.clone()).expect("contained");
    let mut count = 0u64;
    let mut visit = |entries: &BTreeMap<(usize, usize), MarkedLetter>| {
        let t = ShiftedTableau { shape: shape.clone(), entries: entries.clone() };
        let w = t.word();
        if lattice_property(&w) && leftmost_unmarked(&w) {
            count += 1;
        }
    };
    enumerate_tableaux(&shape, nu.len(), Some(nu.parts()), false, &mut visit);
    count
}

/// The hook-filled tableau T_{μ,n} of shape μ/λ(n).
pub fn staircase_tableau(mu: &StrictPartition, n: usize) -> Result<ShiftedTableau> {
    let lambda = StrictPartition::staircase(n)?;
    if mu.len() <= n {
        return Err(Error::Invalid(format!("staircase tableau needs ℓ(μ) > {n}, got {mu}")));
    }
    let shape = ShiftedShape::new(mu.clone(), lambda)?;
    // Relative coordinates: row ρ = r-1, column κ = c-(n+2).
    let origin = n + 2;
    let cells = shape.cells();
    let rel = |&(r, c): &(usize, usize)| (r - 1, c as isize - origin as isize);
    let in_shape = |rho: usize, kappa: isize| kappa >= 0 && shape.contains_cell(rho + 1, kappa as usize + origin);
    let mut entries = BTreeMap::new();
    for cell in &cells {
        let (rho, kappa) = rel(cell);
        let d = rho.min(kappa.max(0) as usize);
        let hook = d + 1;
        let letter = if kappa as usize > d {
            MarkedLetter::new(hook, false)
        } else {
            // On the corner or in the leg: marked unless it is the bottom cell.
            let bottom = !in_shape(rho + 1, d as isize);
            MarkedLetter::new(hook, !bottom)
        };
        entries.insert(*cell, letter);
    }
    Ok(ShiftedTableau { shape, entries })
}

/// One row of the staircase report.
#[derive(Clone, Debug, Serialize)]
pub struct StaircaseCase {
    pub mu: StrictPartition,
    pub n: usize,
    pub tableau: String,
    pub content: Vec<usize>,
    pub valid: bool,
    pub lattice: bool,
    pub leftmost_unmarked: bool,
    pub strict_content: bool,
}

impl StaircaseCase {
    pub fn passed(&self) -> bool {
        self.valid && self.lattice && self.leftmost_unmarked && self.strict_content
    }
}

pub fn check_staircase(mu: &StrictPartition, n: usize) -> Result<StaircaseCase> {
    let t = staircase_tableau(mu, n)?;
    let w = t.word();
    let content = content_of(&w);
    let strict = content.iter().all(|&x| x > 0) && content.windows(2).all(|p| p[0] > p[1]);
    let sums = content.iter().sum::<usize>() + StrictPartition::staircase(n)?.size() == mu.size();
    Ok(StaircaseCase {
        mu: mu.clone(),
        n,
        tableau: t.to_text(),
        valid: t.is_valid(),
        lattice: lattice_property(&w),
        leftmost_unmarked: leftmost_unmarked(&w),
        strict_content: strict && sums,
        content,
    })
}

/// Runs the staircase construction for every strict μ with ℓ(μ) > n and
/// |μ| ≤ bound.
pub fn verify_staircase(n: usize, bound: usize) -> Result<Vec<StaircaseCase>> {
    let mut out = Vec::new();
    for size in 0..=bound {
        for mu in strict_partitions(size) {
            if mu.len() > n {
                out.push(check_staircase(&mu, n)?);
            }
        }
    }
    Ok(out)
}

/// A polynomial with integer coefficients in m variables.
pub type Poly = BTreeMap<Vec<usize>, i64>;

/// P_λ(x₁..x_m) as a sum over shifted tableaux with unmarked diagonal.
pub fn schur_p(lambda: &StrictPartition, m: usize) -> Poly {
    let mut poly = Poly::new();
    if lambda.len() > m {
        return poly;
    }
    let shape = ShiftedShape::new(lambda.clone(), StrictPartition::empty()).expect("valid");
    let mut visit = |entries: &BTreeMap<(usize, usize), MarkedLetter>| {
        let mut exp = vec![0usize; m];
        for x in entries.values() {
            exp[x.value - 1] += 1;
        }
        *poly.entry(exp).or_insert(0) += 1;
    };
    enumerate_tableaux(&shape, m, None, true, &mut visit);
    poly
}

pub fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<usize> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            *out.entry(e).or_insert(0) += ca * cb;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

/// Expands a symmetric polynomial in the Schur P basis by peeling off the
/// lexicographically largest monomial.
pub fn expand_in_p_basis(poly: &Poly, m: usize) -> Result<BTreeMap<StrictPartition, i64>> {
    let mut rest = poly.clone();
    rest.retain(|_, c| *c != 0);
    let mut out = BTreeMap::new();
    while let Some((exp, coeff)) = rest.iter().next_back().map(|(e, c)| (e.clone(), *c)) {
        let parts: Vec<usize> = exp.iter().copied().filter(|&x| x > 0).collect();
        let lambda = StrictPartition::new(parts)
            .map_err(|_| Error::Invalid(format!("leading exponent {exp:?} is not strict")))?;
        let p = schur_p(&lambda, m);
        if p.get(&exp) != Some(&1) {
            return Err(Error::Invalid(format!("P{lambda} does not lead with x^{exp:?}")));
        }
        for (e, c) in p {
            let entry = rest.entry(e).or_insert(0);
            *entry -= coeff * c;
        }
        rest.retain(|_, c| *c != 0);
        out.insert(lambda, coeff);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(p: &[usize]) -> StrictPartition {
        StrictPartition::new(p.to_vec()).unwrap()
    }

    #[test]
    fn partitions() {
        assert_eq!(strict_partitions(4), vec![sp(&[4]), sp(&[3, 1])]);
        assert_eq!(strict_partitions(0), vec![StrictPartition::empty()]);
        assert!(strict_partitions(6).contains(&StrictPartition::staircase(2).unwrap()));
        assert!(StrictPartition::new(vec![2, 2]).is_err());
        assert!(StrictPartition::staircase(0).is_err());
    }

    #[test]
    fn columns() {
        assert_eq!(sp(&[4, 3, 1]).canonical_columns(), vec![1, 2, 3, 4, 2, 3, 4, 3]);
        assert_eq!(sp(&[1]).canonical_columns(), vec![1]);
        assert_eq!(sp(&[2, 1]).canonical_columns(), vec![1, 2, 2]);
    }

    #[test]
    fn lattice_examples() {
        assert!(lattice_property(&[]));
        assert!(!lattice_property(&parse_word("2").unwrap()));
        assert!(lattice_property(&parse_word("1 2 1' 2' 3 1' 2' 2 1' 1 1 1 1").unwrap()));
    }

    #[test]
    fn tableau_word_example() {
        // the shifted tableau of shape (4,3,1) with entries 1 2' 3 3 / 2' 4' 4 / 5'
        let shape = ShiftedShape::new(sp(&[4, 3, 1]), StrictPartition::empty()).unwrap();
        let rows = ["1 2' 3 3", "2' 4' 4", "5'"];
        let mut entries = BTreeMap::new();
        for (r, row) in rows.iter().enumerate() {
            for (j, x) in parse_word(row).unwrap().into_iter().enumerate() {
                entries.insert((r + 1, r + 1 + j), x);
            }
        }
        let t = ShiftedTableau { shape, entries };
        assert!(t.is_valid());
        assert_eq!(format_word(&t.word()), "5' 2' 4' 4 1 2' 3 3");
        assert_eq!(t.content(), vec![1, 2, 2, 2, 1]);
    }

    #[test]
    fn schur_p_small() {
        let p1 = schur_p(&sp(&[1]), 2);
        assert_eq!(p1.len(), 2);
        assert!(p1.values().all(|&c| c == 1));
    }
}
