//! Graded vector spaces and exact sparse matrices with Koszul signs.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// ℤ₂-grading of a basis vector or homogeneous map.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn from_odd(odd: bool) -> Self {
        if odd {
            Parity::Odd
        } else {
            Parity::Even
        }
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    pub fn bit(self) -> u8 {
        self as u8
    }
}

impl std::ops::Add for Parity {
    type Output = Parity;
    // Z/2 addition is exclusive or.
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn add(self, rhs: Parity) -> Parity {
        Parity::from_odd(self.is_odd() ^ rhs.is_odd())
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.is_odd() { "1" } else { "0" })
    }
}

/// An ordered basis of labelled homogeneous vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedBasis {
    labels: Vec<String>,
    parities: Vec<Parity>,
}

impl GradedBasis {
    pub fn new(labels: Vec<String>, parities: Vec<Parity>) -> Result<Self> {
        if labels.len() != parities.len() {
            return Err(Error::Invalid("label and parity counts differ".into()));
        }
        let mut seen = HashSet::with_capacity(labels.len());
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(Error::Invalid(format!("duplicate basis label `{l}`")));
            }
        }
        Ok(GradedBasis { labels, parities })
    }

    /// Builds a basis whose labels are known to be distinct.
    pub(crate) fn new_unchecked(labels: Vec<String>, parities: Vec<Parity>) -> Self {
        debug_assert_eq!(labels.len(), parities.len());
        GradedBasis { labels, parities }
    }

    /// The one-dimensional even space spanned by `1`.
    pub fn unit() -> Self {
        GradedBasis { labels: vec!["1".into()], parities: vec![Parity::Even] }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn parity(&self, i: usize) -> Parity {
        self.parities[i]
    }

    pub fn parities(&self) -> &[Parity] {
        &self.parities
    }

    pub fn odd_count(&self) -> usize {
        self.parities.iter().filter(|p| p.is_odd()).count()
    }

    fn is_unit(&self) -> bool {
        self.labels.len() == 1 && self.labels[0] == "1" && !self.parities[0].is_odd()
    }

    /// Product basis in row-major order (left factor slowest).
    pub fn tensor(&self, other: &GradedBasis) -> GradedBasis {
        if self.is_unit() {
            return other.clone();
        }
        if other.is_unit() {
            return self.clone();
        }
        let mut labels = Vec::with_capacity(self.len() * other.len());
        let mut parities = Vec::with_capacity(self.len() * other.len());
        for (a, pa) in self.labels.iter().zip(&self.parities) {
            for (b, pb) in other.labels.iter().zip(&other.parities) {
                labels.push(format!("{a}|{b}"));
                parities.push(*pa + *pb);
            }
        }
        GradedBasis { labels, parities }
    }

    fn same_shape(&self, other: &GradedBasis) -> bool {
        self.parities == other.parities
    }
}

/// A sorted sparse vector of `(index, value)` pairs with no zero values.
pub type SparseVec = Vec<(usize, Scalar)>;

/// `u + a·v` for sorted sparse vectors.
pub fn axpy(u: &SparseVec, a: &Scalar, v: &SparseVec) -> SparseVec {
    let mut out = Vec::with_capacity(u.len() + v.len());
    let (mut i, mut j) = (0, 0);
    while i < u.len() || j < v.len() {
        if j == v.len() || (i < u.len() && u[i].0 < v[j].0) {
            out.push(u[i].clone());
            i += 1;
        } else if i == u.len() || v[j].0 < u[i].0 {
            let t = a * &v[j].1;
            if !t.is_zero() {
                out.push((v[j].0, t));
            }
            j += 1;
        } else {
            let t = &u[i].1 + &(a * &v[j].1);
            if !t.is_zero() {
                out.push((u[i].0, t));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Incremental row echelon form over the scalar field.
///
/// Every stored row is keyed by its leading column and normalised so that
/// the leading entry is 1.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: BTreeMap<usize, SparseVec>,
}

impl Echelon {
    pub fn new() -> Self {
        Echelon::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` until its leading column is not a pivot.
    pub fn reduce(&self, mut v: SparseVec) -> SparseVec {
        while let Some((lead, coeff)) = v.first().cloned() {
            match self.rows.get(&lead) {
                Some(row) => v = axpy(&v, &-coeff, row),
                None => break,
            }
        }
        v
    }

    /// Inserts a row; returns false when it was already in the span.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        let v = self.reduce(v);
        let Some((lead, coeff)) = v.first().cloned() else {
            return false;
        };
        let inv = coeff.inv().expect("nonzero leading entry");
        let v: SparseVec = v.into_iter().map(|(c, x)| (c, &x * &inv)).collect();
        self.rows.insert(lead, v);
        true
    }

    /// Fully reduced rows, keyed by pivot column.
    pub fn into_rref(self) -> BTreeMap<usize, SparseVec> {
        let mut done: BTreeMap<usize, SparseVec> = BTreeMap::new();
        for (p, row) in self.rows.into_iter().rev() {
            let mut r = row.clone();
            for (c, x) in row.iter().skip(1) {
                if let Some(q) = done.get(c) {
                    r = axpy(&r, &-x, q);
                }
            }
            done.insert(p, r);
        }
        done
    }
}

/// Rank of a family of sparse vectors.
pub fn rank_of(vectors: impl IntoIterator<Item = SparseVec>) -> usize {
    let mut e = Echelon::new();
    for v in vectors {
        e.insert(v);
    }
    e.rank()
}

/// A basis of `{x : r·x = 0 for every row r}` in a space of `ncols` coordinates.
pub fn null_space(rows: impl IntoIterator<Item = SparseVec>, ncols: usize) -> Vec<SparseVec> {
    let mut e = Echelon::new();
    for r in rows {
        e.insert(r);
    }
    let rref = e.into_rref();
    let mut out = Vec::new();
    for free in (0..ncols).filter(|c| !rref.contains_key(c)) {
        let mut v: SparseVec = Vec::new();
        for (p, row) in &rref {
            if let Ok(k) = row.binary_search_by_key(&free, |e| e.0) {
                v.push((*p, -&row[k].1));
            }
        }
        v.push((free, Scalar::one()));
        v.sort_by_key(|e| e.0);
        out.push(v);
    }
    out
}

/// An exact sparse linear map between graded bases, stored by columns.
#[derive(Clone, Debug)]
pub struct SuperMatrix {
    domain: Arc<GradedBasis>,
    codomain: Arc<GradedBasis>,
    cols: Vec<SparseVec>,
}

impl PartialEq for SuperMatrix {
    fn eq(&self, other: &Self) -> bool {
        same_basis(&self.domain, &other.domain) && same_basis(&self.codomain, &other.codomain) && self.cols == other.cols
    }
}

fn same_basis(a: &Arc<GradedBasis>, b: &Arc<GradedBasis>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl SuperMatrix {
    pub fn zero(domain: Arc<GradedBasis>, codomain: Arc<GradedBasis>) -> Self {
        let cols = vec![Vec::new(); domain.len()];
        SuperMatrix { domain, codomain, cols }
    }

    pub fn identity(basis: Arc<GradedBasis>) -> Self {
        let cols = (0..basis.len()).map(|i| vec![(i, Scalar::one())]).collect();
        SuperMatrix { domain: basis.clone(), codomain: basis, cols }
    }

    /// Builds a matrix from `(row, col, value)` triples, summing repeats.
    pub fn from_entries(
        domain: Arc<GradedBasis>,
        codomain: Arc<GradedBasis>,
        entries: impl IntoIterator<Item = (usize, usize, Scalar)>,
    ) -> Self {
        let mut acc: Vec<BTreeMap<usize, Scalar>> = vec![BTreeMap::new(); domain.len()];
        for (r, c, v) in entries {
            assert!(r < codomain.len() && c < domain.len(), "entry out of range");
            *acc[c].entry(r).or_default() += &v;
        }
        let cols = acc.into_iter().map(|m| m.into_iter().filter(|(_, v)| !v.is_zero()).collect()).collect();
        SuperMatrix { domain, codomain, cols }
    }

    /// Builds a matrix from sorted sparse columns.
    pub fn from_columns(domain: Arc<GradedBasis>, codomain: Arc<GradedBasis>, cols: Vec<SparseVec>) -> Self {
        assert_eq!(cols.len(), domain.len());
        debug_assert!(cols.iter().all(|c| c.windows(2).all(|w| w[0].0 < w[1].0) && c.iter().all(|e| !e.1.is_zero())));
        SuperMatrix { domain, codomain, cols }
    }

    pub fn domain(&self) -> &Arc<GradedBasis> {
        &self.domain
    }

    pub fn codomain(&self) -> &Arc<GradedBasis> {
        &self.codomain
    }

    pub fn nrows(&self) -> usize {
        self.codomain.len()
    }

    pub fn ncols(&self) -> usize {
        self.domain.len()
    }

    pub fn column(&self, c: usize) -> &SparseVec {
        &self.cols[c]
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(Vec::is_empty)
    }

    pub fn get(&self, r: usize, c: usize) -> Scalar {
        match self.cols[c].binary_search_by_key(&r, |e| e.0) {
            Ok(k) => self.cols[c][k].1.clone(),
            Err(_) => Scalar::zero(),
        }
    }

    /// All nonzero entries sorted by `(row, col)`.
    pub fn entries(&self) -> Vec<(usize, usize, Scalar)> {
        let mut out: Vec<_> =
            self.cols.iter().enumerate().flat_map(|(c, col)| col.iter().map(move |(r, v)| (*r, c, v.clone()))).collect();
        out.sort_by_key(|e| (e.0, e.1));
        out
    }

    /// Parity of entry `(r, c)`: p(r) + p(c).
    pub fn entry_parity(&self, r: usize, c: usize) -> Parity {
        self.codomain.parity(r) + self.domain.parity(c)
    }

    /// The homogeneous component of the given parity.
    pub fn component(&self, p: Parity) -> SuperMatrix {
        let cols = self
            .cols
            .iter()
            .enumerate()
            .map(|(c, col)| col.iter().filter(|(r, _)| self.entry_parity(*r, c) == p).cloned().collect())
            .collect();
        SuperMatrix { domain: self.domain.clone(), codomain: self.codomain.clone(), cols }
    }

    /// `Some(p)` when every nonzero entry has parity `p`; zero counts as even.
    pub fn parity(&self) -> Option<Parity> {
        let mut found: Option<Parity> = None;
        for (c, col) in self.cols.iter().enumerate() {
            for (r, _) in col {
                let p = self.entry_parity(*r, c);
                match found {
                    None => found = Some(p),
                    Some(q) if q != p => return None,
                    _ => {}
                }
            }
        }
        Some(found.unwrap_or(Parity::Even))
    }

    /// Replaces the bases by others of identical size and parities.
    pub fn with_bases(mut self, domain: Arc<GradedBasis>, codomain: Arc<GradedBasis>) -> Result<Self> {
        if !self.domain.same_shape(&domain) || !self.codomain.same_shape(&codomain) {
            return Err(Error::BasisMismatch("relabelling must preserve sizes and parities".into()));
        }
        self.domain = domain;
        self.codomain = codomain;
        Ok(self)
    }

    /// `self ∘ f`: apply `f` first. No signs.
    pub fn compose(&self, f: &SuperMatrix) -> Result<SuperMatrix> {
        if !same_basis(&self.domain, &f.codomain) {
            return Err(Error::BasisMismatch(format!(
                "compose: domain of left factor ({}) differs from codomain of right factor ({})",
                self.domain.len(),
                f.codomain.len()
            )));
        }
        let mut acc: Vec<Scalar> = vec![Scalar::zero(); self.nrows()];
        let mut touched: Vec<usize> = Vec::new();
        let mut mark = vec![false; self.nrows()];
        let mut cols = Vec::with_capacity(f.ncols());
        for fcol in &f.cols {
            for (k, fv) in fcol {
                for (r, gv) in &self.cols[*k] {
                    if !mark[*r] {
                        mark[*r] = true;
                        touched.push(*r);
                    }
                    acc[*r] += &(gv * fv);
                }
            }
            touched.sort_unstable();
            let mut col = Vec::with_capacity(touched.len());
            for &r in &touched {
                let v = std::mem::take(&mut acc[r]);
                mark[r] = false;
                if !v.is_zero() {
                    col.push((r, v));
                }
            }
            touched.clear();
            cols.push(col);
        }
        Ok(SuperMatrix { domain: f.domain.clone(), codomain: self.codomain.clone(), cols })
    }

    /// `self ⊗ g` with the Koszul sign `(-1)^{p(g-entry)·p(c₁)}`.
    pub fn tensor(&self, g: &SuperMatrix) -> SuperMatrix {
        let domain = Arc::new(self.domain.tensor(&g.domain));
        let codomain = Arc::new(self.codomain.tensor(&g.codomain));
        self.tensor_onto(g, domain, codomain).expect("product bases have matching shape")
    }

    /// Like [`SuperMatrix::tensor`], but places the result on given bases of the
    /// right shape instead of building product labels.
    pub fn tensor_onto(&self, g: &SuperMatrix, domain: Arc<GradedBasis>, codomain: Arc<GradedBasis>) -> Result<SuperMatrix> {
        if domain.len() != self.ncols() * g.ncols() || codomain.len() != self.nrows() * g.nrows() {
            return Err(Error::BasisMismatch("tensor: target bases have the wrong size".into()));
        }
        let (gr, gc) = (g.nrows(), g.ncols());
        let mut cols = Vec::with_capacity(self.ncols() * gc);
        for (c1, fcol) in self.cols.iter().enumerate() {
            let c1_odd = self.domain.parity(c1).is_odd();
            for (c2, gcol) in g.cols.iter().enumerate() {
                let mut col = Vec::with_capacity(fcol.len() * gcol.len());
                for (r1, fv) in fcol {
                    for (r2, gv) in gcol {
                        let mut v = fv * gv;
                        if c1_odd && g.entry_parity(*r2, c2).is_odd() {
                            v = -v;
                        }
                        col.push((r1 * gr + r2, v));
                    }
                }
                cols.push(col);
            }
        }
        Ok(SuperMatrix { domain, codomain, cols })
    }

    pub fn add(&self, other: &SuperMatrix) -> Result<SuperMatrix> {
        self.lincomb(&Scalar::one(), other)
    }

    pub fn sub(&self, other: &SuperMatrix) -> Result<SuperMatrix> {
        self.lincomb(&Scalar::from_int(-1), other)
    }

    /// `self + a·other`.
    pub fn lincomb(&self, a: &Scalar, other: &SuperMatrix) -> Result<SuperMatrix> {
        if !same_basis(&self.domain, &other.domain) || !same_basis(&self.codomain, &other.codomain) {
            return Err(Error::BasisMismatch("add: operands have different bases".into()));
        }
        let cols = self.cols.iter().zip(&other.cols).map(|(u, v)| axpy(u, a, v)).collect();
        Ok(SuperMatrix { domain: self.domain.clone(), codomain: self.codomain.clone(), cols })
    }

    pub fn scale(&self, a: &Scalar) -> SuperMatrix {
        let cols = if a.is_zero() {
            vec![Vec::new(); self.ncols()]
        } else {
            self.cols.iter().map(|col| col.iter().map(|(r, v)| (*r, v * a)).collect()).collect()
        };
        SuperMatrix { domain: self.domain.clone(), codomain: self.codomain.clone(), cols }
    }

    /// Rows as sparse vectors indexed by column.
    pub fn rows(&self) -> Vec<SparseVec> {
        let mut rows: Vec<SparseVec> = vec![Vec::new(); self.nrows()];
        for (c, col) in self.cols.iter().enumerate() {
            for (r, v) in col {
                rows[*r].push((c, v.clone()));
            }
        }
        rows
    }

    pub fn rank(&self) -> usize {
        rank_of(self.cols.iter().cloned())
    }

    /// Two-sided inverse by sparse Gauss-Jordan elimination on `[A | I]`.
    pub fn inverse(&self) -> Result<SuperMatrix> {
        let n = self.nrows();
        if n != self.ncols() {
            return Err(Error::NotSquare);
        }
        let mut e = Echelon::new();
        for (r, mut row) in self.rows().into_iter().enumerate() {
            row.push((n + r, Scalar::one()));
            if !e.insert(row) {
                return Err(Error::Singular);
            }
        }
        let rref = e.into_rref();
        if rref.keys().any(|&p| p >= n) {
            return Err(Error::Singular);
        }
        // Row p of the reduced system reads (e_p | row p of A⁻¹).
        let entries = rref.into_iter().flat_map(|(p, row)| {
            row.into_iter().filter(|(c, _)| *c >= n).map(move |(c, v)| (p, c - n, v)).collect::<Vec<_>>()
        });
        // A⁻¹ maps codomain back to domain.
        Ok(SuperMatrix::from_entries(self.codomain.clone(), self.domain.clone(), entries))
    }

    /// Σ_r (-1)^{p(r)} f[r,r].
    pub fn supertrace(&self) -> Result<Scalar> {
        if self.nrows() != self.ncols() {
            return Err(Error::NotSquare);
        }
        let mut s = Scalar::zero();
        for c in 0..self.ncols() {
            let v = self.get(c, c);
            if self.domain.parity(c).is_odd() {
                s -= &v;
            } else {
                s += &v;
            }
        }
        Ok(s)
    }

    /// The first entry where `self` and `other` differ, for witnesses.
    pub fn first_difference(&self, other: &SuperMatrix) -> Option<(usize, usize, Scalar, Scalar)> {
        if self.nrows() != other.nrows() || self.ncols() != other.ncols() {
            return Some((usize::MAX, usize::MAX, Scalar::zero(), Scalar::zero()));
        }
        for c in 0..self.ncols() {
            if self.cols[c] != other.cols[c] {
                let rows: std::collections::BTreeSet<usize> =
                    self.cols[c].iter().chain(&other.cols[c]).map(|e| e.0).collect();
                for r in rows {
                    let (a, b) = (self.get(r, c), other.get(r, c));
                    if a != b {
                        return Some((r, c, a, b));
                    }
                }
            }
        }
        None
    }

    /// JSON form: bases as `[label, parity]` pairs and sorted entries.
    pub fn to_json(&self) -> Value {
        let basis = |b: &GradedBasis| -> Vec<Value> {
            b.labels.iter().zip(&b.parities).map(|(l, p)| json!([l, p.bit()])).collect()
        };
        let entries: Vec<Value> = self.entries().into_iter().map(|(r, c, v)| json!([r, c, v.to_string()])).collect();
        json!({ "domain": basis(&self.domain), "codomain": basis(&self.codomain), "entries": entries })
    }

    pub fn from_json(v: &Value) -> Result<SuperMatrix> {
        let bad = |m: &str| Error::Invalid(format!("matrix json: {m}"));
        let basis = |key: &str| -> Result<GradedBasis> {
            let arr = v.get(key).and_then(Value::as_array).ok_or_else(|| bad(key))?;
            let mut labels = Vec::new();
            let mut parities = Vec::new();
            for e in arr {
                let l = e.get(0).and_then(Value::as_str).ok_or_else(|| bad("label"))?;
                let p = e.get(1).and_then(Value::as_u64).ok_or_else(|| bad("parity"))?;
                labels.push(l.to_string());
                parities.push(Parity::from_odd(p % 2 == 1));
            }
            GradedBasis::new(labels, parities)
        };
        let domain = Arc::new(basis("domain")?);
        let codomain = Arc::new(basis("codomain")?);
        let arr = v.get("entries").and_then(Value::as_array).ok_or_else(|| bad("entries"))?;
        let mut entries = Vec::new();
        for e in arr {
            let r = e.get(0).and_then(Value::as_u64).ok_or_else(|| bad("row"))? as usize;
            let c = e.get(1).and_then(Value::as_u64).ok_or_else(|| bad("col"))? as usize;
            let s: Scalar = e.get(2).and_then(Value::as_str).ok_or_else(|| bad("value"))?.parse()?;
            if r >= codomain.len() || c >= domain.len() {
                return Err(bad("entry out of range"));
            }
            entries.push((r, c, s));
        }
        Ok(SuperMatrix::from_entries(domain, codomain, entries))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn basis(ps: &[u8]) -> Arc<GradedBasis> {
        let labels = (0..ps.len()).map(|i| format!("b{i}")).collect();
        Arc::new(GradedBasis::new(labels, ps.iter().map(|&p| Parity::from_odd(p == 1)).collect()).unwrap())
    }

    #[test]
    fn identity_and_rank() {
        let b = basis(&[0, 1, 0]);
        let id = SuperMatrix::identity(b.clone());
        assert_eq!(id.nnz(), 3);
        assert_eq!(id.rank(), 3);
        assert_eq!(SuperMatrix::zero(b.clone(), b.clone()).rank(), 0);
        assert_eq!(id.inverse().unwrap(), id);
        let two = id.scale(&Scalar::from_int(2));
        assert_eq!(two.inverse().unwrap(), id.scale(&Scalar::frac(1, 2)));
        assert!(id.sub(&id).unwrap().is_zero());
    }

    #[test]
    fn singular() {
        let b = basis(&[0, 0]);
        let m = SuperMatrix::from_entries(b.clone(), b, [(0, 0, Scalar::one()), (0, 1, Scalar::one())]);
        assert_eq!(m.inverse(), Err(Error::Singular));
    }

    #[test]
    fn null_space_basic() {
        // x + y = 0 in 3 unknowns
        let ns = null_space([vec![(0, Scalar::one()), (1, Scalar::one())]], 3);
        assert_eq!(ns.len(), 2);
    }

    #[test]
    fn json_round_trip() {
        let b = basis(&[0, 1]);
        let m = SuperMatrix::from_entries(b.clone(), b, [(1, 0, Scalar::i()), (0, 1, -Scalar::i())]);
        let back = SuperMatrix::from_json(&m.to_json()).unwrap();
        assert_eq!(back, m);
    }
}
