//! The Sergeev algebra Ser_k = C_k ⋊ 𝕜Σ_k.
//!
//! Basis words are `c_A·σ` with the Clifford word `A` sorted ascending and
//! written to the left of the permutation. Products use `σ c_i = c_{σ(i)} σ`,
//! `c_i² = 1`, `c_i c_j = -c_j c_i`, and `(σ·τ)(i) = σ(τ(i))`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, ParseError, Result};
use rayon::prelude::*;

use crate::linalg::{Parity, SparseVec, SuperMatrix};
use crate::qfunctor;
use crate::scalar::Scalar;
use crate::shifted::StrictPartition;
use crate::web::{self, ObjectWord, WebExpr};

/// Largest strand count supported by the packed permutation type.
pub const MAX_STRANDS: usize = 12;

/// A permutation of `{1..k}` stored 0-based.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    k: u8,
    img: [u8; MAX_STRANDS],
}

impl Perm {
    pub fn identity(k: usize) -> Self {
        assert!(k <= MAX_STRANDS, "at most {MAX_STRANDS} strands");
        let mut img = [0u8; MAX_STRANDS];
        for (i, x) in img.iter_mut().enumerate().take(k) {
            *x = i as u8;
        }
        Perm { k: k as u8, img }
    }

    /// From 1-based images `σ(1), …, σ(k)`.
    pub fn from_images(images: &[usize]) -> Result<Self> {
        let k = images.len();
        if k > MAX_STRANDS {
            return Err(Error::Invalid(format!("at most {MAX_STRANDS} strands")));
        }
        let mut seen = vec![false; k];
        let mut p = Perm::identity(k);
        for (i, &x) in images.iter().enumerate() {
            if x == 0 || x > k || seen[x - 1] {
                return Err(Error::Invalid(format!("{images:?} is not a permutation of 1..{k}")));
            }
            seen[x - 1] = true;
            p.img[i] = (x - 1) as u8;
        }
        Ok(p)
    }

    /// The simple transposition `s_i` (1-based, swaps i and i+1).
    pub fn simple(i: usize, k: usize) -> Self {
        Self::transposition(i, i + 1, k)
    }

    /// The transposition `(i j)` (1-based).
    pub fn transposition(i: usize, j: usize, k: usize) -> Self {
        assert!(i >= 1 && j >= 1 && i <= k && j <= k);
        let mut p = Perm::identity(k);
        p.img.swap(i - 1, j - 1);
        p
    }

    pub fn k(&self) -> usize {
        self.k as usize
    }

    /// σ(i), 0-based.
    pub fn apply(&self, i: usize) -> usize {
        self.img[i] as usize
    }

    /// 1-based images.
    pub fn images(&self) -> Vec<usize> {
        (0..self.k()).map(|i| self.apply(i) + 1).collect()
    }

    /// `self·other`, i.e. apply `other` first.
    pub fn compose(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.k, other.k);
        let mut p = *self;
        for i in 0..self.k() {
            p.img[i] = self.img[other.img[i] as usize];
        }
        p
    }

    pub fn inverse(&self) -> Perm {
        let mut p = *self;
        for i in 0..self.k() {
            p.img[self.img[i] as usize] = i as u8;
        }
        p
    }

    pub fn is_identity(&self) -> bool {
        (0..self.k()).all(|i| self.apply(i) == i)
    }

    pub fn inversions(&self) -> usize {
        let k = self.k();
        (0..k).map(|i| (i + 1..k).filter(|&j| self.img[i] > self.img[j]).count()).sum()
    }

    /// A reduced word: σ = s_{w₁}·s_{w₂}⋯ (1-based indices).
    ///
    /// `leftmost` peels right descents starting from the smallest index;
    /// otherwise from the largest. Both give reduced words, often different.
    pub fn reduced_word(&self, leftmost: bool) -> Vec<usize> {
        let mut sigma = *self;
        let mut rev = Vec::new();
        let k = self.k();
        loop {
            let mut descents = (0..k.saturating_sub(1)).filter(|&i| sigma.img[i] > sigma.img[i + 1]);
            let d = if leftmost { descents.next() } else { descents.next_back() };
            let Some(i) = d else { break };
            // σ = (σ s_i) s_i with ℓ(σ s_i) = ℓ(σ) - 1.
            sigma.img.swap(i, i + 1);
            rev.push(i + 1);
        }
        rev.reverse();
        rev
    }

    /// All permutations of `k` letters in lexicographic order of images.
    pub fn all(k: usize) -> Vec<Perm> {
        let mut out = Vec::new();
        let mut cur: Vec<usize> = (1..=k).collect();
        loop {
            out.push(Perm::from_images(&cur).expect("valid"));
            // next lexicographic permutation
            let Some(i) = (0..k.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else { break };
            let j = (i + 1..k).rev().find(|&j| cur[j] > cur[i]).expect("exists");
            cur.swap(i, j);
            cur[i + 1..].reverse();
        }
        out
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p{:?}", self.images())
    }
}

/// A normal-form basis word `c_A·σ`; `mask` bit `i` stands for `c_{i+1}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct SergeevBasisElt {
    pub mask: u32,
    pub perm: Perm,
}

impl SergeevBasisElt {
    pub fn parity(&self) -> Parity {
        Parity::from_odd(self.mask.count_ones() % 2 == 1)
    }

    /// Clifford indices, 1-based, ascending.
    pub fn clifford(&self) -> Vec<usize> {
        (0..32).filter(|i| self.mask >> i & 1 == 1).map(|i| i + 1).collect()
    }
}

/// Product of Clifford monomials with sorted masks: returns the sign as odd flag.
fn clifford_product_sign(a: u32, b: u32) -> bool {
    // Each generator of b moves past the generators of a with larger index.
    let mut odd = false;
    let mut bb = b;
    while bb != 0 {
        let j = bb.trailing_zeros();
        let above = a >> (j + 1);
        odd ^= above.count_ones() % 2 == 1;
        bb &= bb - 1;
    }
    odd
}

/// Relabels the Clifford word of `mask` through σ and re-sorts it.
/// Returns the new mask and whether the sort was odd.
fn permute_mask(sigma: &Perm, mask: u32) -> (u32, bool) {
    let idx: Vec<usize> = (0..sigma.k()).filter(|i| mask >> i & 1 == 1).map(|i| sigma.apply(i)).collect();
    let mut inv = 0;
    for a in 0..idx.len() {
        for b in a + 1..idx.len() {
            if idx[a] > idx[b] {
                inv += 1;
            }
        }
    }
    (idx.iter().fold(0u32, |m, &i| m | 1 << i), inv % 2 == 1)
}

/// Multiplies two basis words.
pub fn mul_basis(x: &SergeevBasisElt, y: &SergeevBasisElt) -> (SergeevBasisElt, bool) {
    let (moved, odd1) = permute_mask(&x.perm, y.mask);
    let odd2 = clifford_product_sign(x.mask, moved);
    (SergeevBasisElt { mask: x.mask ^ moved, perm: x.perm.compose(&y.perm) }, odd1 ^ odd2)
}

/// A linear combination of normal-form words.
#[derive(Clone, PartialEq, Eq)]
pub struct SergeevElt {
    k: usize,
    terms: BTreeMap<SergeevBasisElt, Scalar>,
}

impl SergeevElt {
    pub fn zero(k: usize) -> Self {
        SergeevElt { k, terms: BTreeMap::new() }
    }

    pub fn one(k: usize) -> Self {
        Self::basis(SergeevBasisElt { mask: 0, perm: Perm::identity(k) })
    }

    pub fn basis(b: SergeevBasisElt) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(b, Scalar::one());
        SergeevElt { k: b.perm.k(), terms }
    }

    pub fn from_perm(p: Perm) -> Self {
        Self::basis(SergeevBasisElt { mask: 0, perm: p })
    }

    /// The Clifford generator `c_i` (1-based).
    pub fn c(i: usize, k: usize) -> Self {
        assert!(i >= 1 && i <= k);
        Self::basis(SergeevBasisElt { mask: 1 << (i - 1), perm: Perm::identity(k) })
    }

    /// The simple transposition `s_i`.
    pub fn s(i: usize, k: usize) -> Self {
        Self::from_perm(Perm::simple(i, k))
    }

    pub fn scalar(x: Scalar, k: usize) -> Self {
        Self::one(k).scale(&x)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn terms(&self) -> &BTreeMap<SergeevBasisElt, Scalar> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, b: &SergeevBasisElt) -> Scalar {
        self.terms.get(b).cloned().unwrap_or_default()
    }

    /// `Some(p)` when homogeneous; zero is even.
    pub fn parity(&self) -> Option<Parity> {
        let mut it = self.terms.keys().map(SergeevBasisElt::parity);
        let first = it.next().unwrap_or(Parity::Even);
        it.all(|p| p == first).then_some(first)
    }

    fn check_k(&self, other: &SergeevElt) -> Result<()> {
        if self.k != other.k {
            return Err(Error::Invalid(format!("strand counts differ: {} vs {}", self.k, other.k)));
        }
        Ok(())
    }

    pub fn add(&self, other: &SergeevElt) -> Result<SergeevElt> {
        self.lincomb(&Scalar::one(), other)
    }

    pub fn sub(&self, other: &SergeevElt) -> Result<SergeevElt> {
        self.lincomb(&Scalar::from_int(-1), other)
    }

    /// `self + a·other`.
    pub fn lincomb(&self, a: &Scalar, other: &SergeevElt) -> Result<SergeevElt> {
        self.check_k(other)?;
        let mut terms = self.terms.clone();
        for (b, v) in &other.terms {
            let e = terms.entry(*b).or_default();
            *e += &(a * v);
            if e.is_zero() {
                terms.remove(b);
            }
        }
        Ok(SergeevElt { k: self.k, terms })
    }

    pub fn scale(&self, a: &Scalar) -> SergeevElt {
        if a.is_zero() {
            return SergeevElt::zero(self.k);
        }
        SergeevElt { k: self.k, terms: self.terms.iter().map(|(b, v)| (*b, v * a)).collect() }
    }

    pub fn mul(&self, other: &SergeevElt) -> Result<SergeevElt> {
        self.check_k(other)?;
        let mut acc: HashMap<SergeevBasisElt, Scalar> = HashMap::new();
        for (x, u) in &self.terms {
            for (y, v) in &other.terms {
                let (b, odd) = mul_basis(x, y);
                let t = u * v;
                let e = acc.entry(b).or_default();
                if odd {
                    *e -= &t;
                } else {
                    *e += &t;
                }
            }
        }
        let terms = acc.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        Ok(SergeevElt { k: self.k, terms })
    }

    /// If `self = κ·other` for a scalar κ, returns κ.
    pub fn ratio_to(&self, other: &SergeevElt) -> Option<Scalar> {
        let (b, v) = other.terms.iter().next()?;
        let kappa = &self.coeff(b) * &v.inv().ok()?;
        (other.scale(&kappa) == *self).then_some(kappa)
    }

    /// Text form `coeff * c[i,...] * p[img,...] + ...`.
    pub fn to_text(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(b, v)| {
                let mut factors = Vec::new();
                let coeff = match v.as_rational() {
                    Some(r) => r.to_string(),
                    None => format!("({v})"),
                };
                let bare = b.mask == 0 && b.perm.is_identity();
                if !v.is_one() || bare {
                    factors.push(coeff);
                }
                if b.mask != 0 {
                    factors.push(format!("c[{}]", join(&b.clifford())));
                }
                if !b.perm.is_identity() {
                    factors.push(format!("p[{}]", join(&b.perm.images())));
                }
                factors.join(" * ")
            })
            .collect();
        parts.join(" + ")
    }

    /// Parses the text form. Clifford words need not be sorted; they are
    /// normalised with the anticommutation sign.
    pub fn parse(text: &str, k: usize) -> std::result::Result<SergeevElt, ParseError> {
        let mut out = SergeevElt::zero(k);
        let mut depth = 0i32;
        let mut start = 0usize;
        let mut negate = false;
        let mut pieces = Vec::new();
        let mut prev = None;
        for (pos, ch) in text.char_indices() {
            match ch {
                '(' | '[' => depth += 1,
                ')' | ']' => depth -= 1,
                // A minus after an operand is binary; after an operator or at the start it is a sign.
                '+' | '-' if depth == 0 && (ch == '+' || !matches!(prev, None | Some('*' | '/' | '+' | '-'))) => {
                    pieces.push((start, &text[start..pos], negate));
                    negate = ch == '-';
                    start = pos + 1;
                }
                _ => {}
            }
            if !ch.is_whitespace() {
                prev = Some(ch);
            }
        }
        pieces.push((start, &text[start..], negate));
        for (offset, piece, neg) in pieces {
            let term = parse_term(piece, offset, k)?;
            out = if neg { out.sub(&term) } else { out.add(&term) }.expect("same k");
        }
        Ok(out)
    }
}

fn join(v: &[usize]) -> String {
    v.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}

fn parse_list(s: &str, pos: usize) -> std::result::Result<Vec<usize>, ParseError> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(|t| t.trim().parse::<usize>().map_err(|_| ParseError::new(pos, format!("bad index `{t}`")))).collect()
}

fn parse_term(piece: &str, offset: usize, k: usize) -> std::result::Result<SergeevElt, ParseError> {
    let trimmed = piece.trim();
    if trimmed.is_empty() {
        return Err(ParseError::new(offset, "empty term"));
    }
    let mut coeff = Scalar::one();
    let mut word = SergeevElt::one(k);
    let mut depth = 0i32;
    let mut start = 0usize;
    let mut factors = Vec::new();
    for (pos, ch) in piece.char_indices() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            '*' if depth == 0 => {
                factors.push((start, &piece[start..pos]));
                start = pos + 1;
            }
            _ => {}
        }
    }
    factors.push((start, &piece[start..]));
    for (fpos, f) in factors {
        let pos = offset + fpos;
        let mut f = f.trim();
        while let Some(rest) = f.strip_prefix('-') {
            coeff = -coeff;
            f = rest.trim_start();
        }
        if let Some(inner) = f.strip_prefix("c[").and_then(|r| r.strip_suffix(']')) {
            for i in parse_list(inner, pos)? {
                if i == 0 || i > k {
                    return Err(ParseError::new(pos, format!("Clifford index {i} out of range 1..{k}")));
                }
                word = word.mul(&SergeevElt::c(i, k)).expect("same k");
            }
        } else if let Some(inner) = f.strip_prefix("p[").and_then(|r| r.strip_suffix(']')) {
            let imgs = parse_list(inner, pos)?;
            if imgs.len() != k {
                return Err(ParseError::new(pos, format!("permutation needs {k} images")));
            }
            let p = Perm::from_images(&imgs).map_err(|e| ParseError::new(pos, e.to_string()))?;
            word = word.mul(&SergeevElt::from_perm(p)).expect("same k");
        } else {
            let body = f.strip_prefix('(').and_then(|r| r.strip_suffix(')')).unwrap_or(f);
            let s: Scalar = body.parse().map_err(|e: ParseError| ParseError::new(pos + e.pos, e.msg))?;
            coeff = &coeff * &s;
        }
    }
    Ok(word.scale(&coeff))
}

impl fmt::Display for SergeevElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for SergeevElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ser_{}({})", self.k, self.to_text())
    }
}

/// All `2^k·k!` normal-form basis words.
pub fn basis_words(k: usize) -> Vec<SergeevBasisElt> {
    let perms = Perm::all(k);
    let mut out = Vec::with_capacity(perms.len() << k);
    for mask in 0..(1u32 << k) {
        for p in &perms {
            out.push(SergeevBasisElt { mask, perm: *p });
        }
    }
    out
}

/// τ_ij = (1/√2)(c_i - c_j)·s_ij.
pub fn tau(i: usize, j: usize, k: usize) -> Result<SergeevElt> {
    if !(1 <= i && i < j && j <= k) {
        return Err(Error::Invalid(format!("tau needs 1 ≤ i < j ≤ k, got ({i},{j}) with k={k}")));
    }
    let diff = SergeevElt::c(i, k).sub(&SergeevElt::c(j, k))?;
    Ok(diff.mul(&SergeevElt::from_perm(Perm::transposition(i, j, k)))?.scale(&Scalar::inv_sqrt2()))
}

/// The odd Jucys–Murphy element π_j = Σ_{i<j} τ_ij; π_1 = 0.
pub fn pi(j: usize, k: usize) -> Result<SergeevElt> {
    if j == 0 || j > k {
        return Err(Error::Invalid(format!("pi index {j} out of range 1..{k}")));
    }
    let mut out = SergeevElt::zero(k);
    for i in 1..j {
        out = out.add(&tau(i, j, k)?)?;
    }
    Ok(out)
}

/// The product ∏_{i=1..k} (col(i)(col(i)+1)/2 - π_i²) in its literal form.
///
/// With c_i² = 1 the square π_i² acts with eigenvalues -q(c), q(c) = c(c+1)/2,
/// so these factors never vanish and the product is invertible. Kept for
/// comparison; [`a_lambda`] is the one used to build e_λ.
pub fn a_lambda_literal(lambda: &StrictPartition) -> Result<SergeevElt> {
    let k = lambda.size();
    a_lambda_literal_factors(lambda)?.iter().try_fold(SergeevElt::one(k), |acc, f| acc.mul(f))
}

/// The factors col(i)(col(i)+1)/2 - π_i² of [`a_lambda_literal`], i = 1..k.
pub fn a_lambda_literal_factors(lambda: &StrictPartition) -> Result<Vec<SergeevElt>> {
    let k = lambda.size();
    lambda
        .canonical_columns()
        .iter()
        .enumerate()
        .map(|(idx, &col)| {
            let p = pi(idx + 1, k)?;
            SergeevElt::scalar(triangular(col), k).sub(&p.mul(&p)?)
        })
        .collect()
}

fn triangular(c: usize) -> Scalar {
    Scalar::from_int((c * (c + 1) / 2) as i64)
}

/// a_λ: the odd Jucys-Murphy projector onto the content vector of the
/// canonical filling.
///
/// Square i of the canonical filling has content c_i = col(i) - row(i).
/// Each π_i² has spectrum {-q(c) : 0 ≤ c < i} in this normalisation, so
/// a_λ = ∏_i ∏_{c ≠ c_i} (q(c) + π_i²), factors in order i = 1..k and c
/// ascending. Shifted standard tableaux are determined by their content
/// vectors, so a_λ is a nonzero multiple of the projector for T_λ.
pub fn a_lambda(lambda: &StrictPartition) -> Result<SergeevElt> {
    let k = lambda.size();
    a_lambda_factors(lambda)?.iter().try_fold(SergeevElt::one(k), |acc, f| acc.mul(f))
}

/// The factors q(c) + π_i² of [`a_lambda`], in multiplication order.
pub fn a_lambda_factors(lambda: &StrictPartition) -> Result<Vec<SergeevElt>> {
    let k = lambda.size();
    let mut out = Vec::new();
    let mut idx = 0;
    for &len in lambda.parts() {
        for content in 0..len {
            idx += 1;
            let p = pi(idx, k)?;
            let sq = p.mul(&p)?;
            for c in (0..idx).filter(|&c| c != content) {
                out.push(SergeevElt::scalar(triangular(c), k).add(&sq)?);
            }
        }
    }
    Ok(out)
}

/// b_λ = Σ over the row stabiliser of the canonical filling.
pub fn b_lambda(lambda: &StrictPartition) -> SergeevElt {
    let k = lambda.size();
    let mut perms = vec![Perm::identity(k)];
    let mut start = 0usize;
    for &len in lambda.parts() {
        let block = Perm::all(len);
        let mut next = Vec::with_capacity(perms.len() * block.len());
        for p in &perms {
            for b in &block {
                let mut q = *p;
                for i in 0..len {
                    q.img[start + i] = (start + b.apply(i)) as u8;
                }
                next.push(q);
            }
        }
        perms = next;
        start += len;
    }
    let terms = perms.into_iter().map(|p| (SergeevBasisElt { mask: 0, perm: p }, Scalar::one())).collect();
    SergeevElt { k, terms }
}

/// The factors of e_λ = a_λ·b_λ, for use with [`psi_product`].
pub fn e_lambda_factors(lambda: &StrictPartition) -> Result<Vec<SergeevElt>> {
    let mut out = a_lambda_factors(lambda)?;
    out.push(b_lambda(lambda));
    Ok(out)
}

/// e_λ = a_λ·b_λ.
pub fn e_lambda(lambda: &StrictPartition) -> Result<SergeevElt> {
    a_lambda(lambda)?.mul(&b_lambda(lambda))
}

/// The symmetriser Cl_k = (1/k!)·Σ_σ σ.
pub fn clasp(k: usize) -> SergeevElt {
    let perms = Perm::all(k);
    let w = Scalar::frac(1, perms.len() as i64);
    let terms = perms.into_iter().map(|p| (SergeevBasisElt { mask: 0, perm: p }, w.clone())).collect();
    SergeevElt { k, terms }
}

/// The action ψ of `x` on V_n^{⊗k}, in the evaluation basis of ↑₁^k.
pub fn psi_action(x: &SergeevElt, n: usize) -> SuperMatrix {
    let k = x.k();
    let word = ObjectWord::ups(&vec![1; k]);
    let basis = qfunctor::word_basis(n, &word);
    let dim = 2 * n;
    let total = basis.len();
    let terms: Vec<(&SergeevBasisElt, &Scalar)> = x.terms().iter().collect();
    let cols: Vec<SparseVec> = (0..total)
        .into_par_iter()
        .map(|col| {
            let mut letters = vec![0usize; k];
            let mut out = vec![0usize; k];
            let mut rest = col;
            for t in (0..k).rev() {
                letters[t] = rest % dim;
                rest /= dim;
            }
            let acc: Vec<(usize, Scalar)> = terms
                .iter()
                .map(|(b, coeff)| {
                    let (row, ipow) = psi_basis_on_word(b, &letters, &mut out, n);
                    (row, coeff.times_unit(ipow))
                })
                .collect();
            merge_sorted(acc)
        })
        .collect();
    SuperMatrix::from_columns(basis.clone(), basis, cols)
}

/// ψ(x₁x₂⋯x_r) computed by applying the factors to each basis vector in
/// turn, never forming the product in Ser_k.
pub fn psi_product(factors: &[SergeevElt], k: usize, n: usize) -> Result<SuperMatrix> {
    if let Some(f) = factors.iter().find(|f| f.k() != k) {
        return Err(Error::Invalid(format!("factor lives in Ser_{} but k = {k}", f.k())));
    }
    let basis = tensor_basis(n, k);
    let cols: Vec<SparseVec> = (0..basis.len())
        .into_par_iter()
        .map(|col| {
            let mut v: SparseVec = vec![(col, Scalar::one())];
            for f in factors.iter().rev() {
                v = psi_apply(f, &v, n);
                if v.is_empty() {
                    break;
                }
            }
            v
        })
        .collect();
    Ok(SuperMatrix::from_columns(basis.clone(), basis, cols))
}

/// ψ(x)·v for a sparse vector v in V_n^{⊗k}.
pub fn psi_apply(x: &SergeevElt, v: &SparseVec, n: usize) -> SparseVec {
    let k = x.k();
    let dim = 2 * n;
    let mut letters = vec![0usize; k];
    let mut out = vec![0usize; k];
    let mut acc: Vec<(usize, Scalar)> = Vec::with_capacity(v.len() * x.len());
    for (idx, coeff) in v {
        let mut rest = *idx;
        for t in (0..k).rev() {
            letters[t] = rest % dim;
            rest /= dim;
        }
        for (b, c) in x.terms() {
            let (row, ipow) = psi_basis_on_word(b, &letters, &mut out, n);
            acc.push((row, (c * coeff).times_unit(ipow)));
        }
    }
    merge_sorted(acc)
}

fn merge_sorted(mut acc: Vec<(usize, Scalar)>) -> SparseVec {
    acc.sort_by_key(|e| e.0);
    let mut merged: SparseVec = Vec::with_capacity(acc.len());
    for (r, v) in acc {
        match merged.last_mut() {
            Some((q, w)) if *q == r => *w += &v,
            _ => merged.push((r, v)),
        }
    }
    merged.retain(|e| !e.1.is_zero());
    merged
}

/// Applies ψ(c_A σ) to a pure tensor of letters; returns the image index and
/// the coefficient as a power of i.
fn psi_basis_on_word(b: &SergeevBasisElt, letters: &[usize], out: &mut [usize], n: usize) -> (usize, u8) {
    let k = letters.len();
    let odd = |l: usize| l >= n;
    // ψ(σ): factor i moves to position σ(i); sign from odd letters crossing.
    let mut ipow = 0u8;
    for i in 0..k {
        out[b.perm.apply(i)] = letters[i];
        if odd(letters[i]) {
            for j in i + 1..k {
                if odd(letters[j]) && b.perm.apply(i) > b.perm.apply(j) {
                    ipow += 2;
                }
            }
        }
    }
    // ψ(c_A) = c_{a1}⋯c_{ar}; apply the largest index first.
    for i in (0..k).rev().filter(|i| b.mask >> i & 1 == 1) {
        let before = out[..i].iter().filter(|&&l| odd(l)).count();
        if before % 2 == 1 {
            ipow += 2;
        }
        if odd(out[i]) {
            // c(v_ī) = -i·v_i
            ipow += 3;
            out[i] -= n;
        } else {
            // c(v_i) = i·v_ī
            ipow += 1;
            out[i] += n;
        }
    }
    let dim = 2 * n;
    let row = out.iter().fold(0usize, |acc, &l| acc * dim + l);
    (row, ipow % 4)
}

/// ξ(x) as a linear combination of webs on ↑₁^k: c_i is a dot on strand i,
/// s_i the crossing of strands i and i+1.
pub fn xi_image(x: &SergeevElt) -> Vec<(Scalar, WebExpr)> {
    let k = x.k();
    x.terms()
        .iter()
        .map(|(b, coeff)| {
            let perm = web::perm_web(&b.perm.reduced_word(true), k);
            let dots: Vec<WebExpr> = b.clifford().into_iter().map(|i| web::dot_at(i, k)).collect();
            let w = if dots.is_empty() { perm } else { WebExpr::compose_all(dots.into_iter().chain([perm])) };
            (coeff.clone(), w)
        })
        .collect()
}

/// The images ψ(x) of all basis words, for rank computations.
pub fn psi_images(k: usize, n: usize) -> Vec<SuperMatrix> {
    basis_words(k).into_iter().map(|b| psi_action(&SergeevElt::basis(b), n)).collect()
}

/// Flattens a matrix into a sparse vector (column-major).
pub fn flatten(m: &SuperMatrix) -> crate::linalg::SparseVec {
    let rows = m.nrows();
    (0..m.ncols()).flat_map(|c| m.column(c).iter().map(move |(r, v)| (c * rows + r, v.clone()))).collect()
}

/// Basis of V_n^{⊗k} shared with the web evaluator.
pub fn tensor_basis(n: usize, k: usize) -> Arc<crate::linalg::GradedBasis> {
    qfunctor::word_basis(n, &ObjectWord::ups(&vec![1; k]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_products() {
        let k = 2;
        let s1 = SergeevElt::s(1, k);
        assert_eq!(s1.mul(&s1).unwrap(), SergeevElt::one(k));
        let lhs = s1.mul(&SergeevElt::c(1, k)).unwrap();
        let rhs = SergeevElt::c(2, k).mul(&s1).unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(lhs.terms().keys().next().unwrap().clifford(), vec![2]);
        let c12 = SergeevElt::c(1, k).mul(&SergeevElt::c(2, k)).unwrap();
        let c21 = SergeevElt::c(2, k).mul(&SergeevElt::c(1, k)).unwrap();
        assert_eq!(c12.mul(&c21).unwrap(), SergeevElt::one(k));
    }

    #[test]
    fn reduced_words_multiply_back() {
        for p in Perm::all(4) {
            for leftmost in [true, false] {
                let w = p.reduced_word(leftmost);
                assert_eq!(w.len(), p.inversions());
                let prod = w.iter().fold(Perm::identity(4), |acc, &i| acc.compose(&Perm::simple(i, 4)));
                assert_eq!(prod, p);
            }
        }
    }

    #[test]
    fn binary_and_unary_minus() {
        let k = 3;
        let p = SergeevElt::from_perm(Perm::from_images(&[1, 3, 2]).unwrap());
        let c23 = SergeevElt::c(2, k).mul(&SergeevElt::c(3, k)).unwrap();
        assert_eq!(SergeevElt::parse("c[2,3] - p[1,3,2]", k).unwrap(), c23.sub(&p).unwrap());
        assert_eq!(SergeevElt::parse("-p[1,3,2]", k).unwrap(), p.scale(&Scalar::from_int(-1)));
        assert_eq!(SergeevElt::parse("c[2]*c[3]-2*p[1,3,2]", k).unwrap(), c23.lincomb(&Scalar::from_int(-2), &p).unwrap());
        assert_eq!(SergeevElt::parse("2 * -p[1,3,2] + p[1,3,2]", k).unwrap(), p.scale(&Scalar::from_int(-1)));
        assert_eq!(SergeevElt::parse("c[2,3] + -1/2 * c[1] - c[2,3]", k).unwrap(), SergeevElt::c(1, k).scale(&Scalar::frac(-1, 2)));
    }

    #[test]
    fn text_round_trip() {
        let x = tau(1, 2, 3).unwrap().add(&SergeevElt::s(2, 3).scale(&Scalar::frac(-1, 2))).unwrap();
        let back = SergeevElt::parse(&x.to_text(), 3).unwrap();
        assert_eq!(back, x);
        assert_eq!(SergeevElt::parse("1", 2).unwrap(), SergeevElt::one(2));
        assert!(SergeevElt::parse("c[3]", 2).is_err());
    }
}
