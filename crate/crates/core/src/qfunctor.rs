//! The functor Ψₙ from webs to matrices on tensor products of symmetric
//! powers of V_n = ℂ^{n|n} and their duals, and the q(n)-action.
//!
//! Letters `0..n` are the even basis vectors v₁..vₙ, letters `n..2n` the odd
//! ones v̄₁..v̄ₙ. A monomial of Sᵏ(V_n) is stored as its sorted letter word.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{null_space, GradedBasis, Parity, SparseVec, SuperMatrix};
use crate::scalar::Scalar;
use crate::web::{typecheck, Derived, ObjectWord, Orient, WebExpr};

type Monomial = Vec<u8>;

/// The sorted monomials of Sᵏ(V_n) and their index lookup.
pub struct SymBasis {
    pub monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl SymBasis {
    pub fn index_of(&self, m: &[u8]) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }
}

fn is_odd(letter: u8, n: usize) -> bool {
    letter as usize >= n
}

fn letter_label(letter: u8, n: usize) -> String {
    let l = letter as usize;
    if l < n {
        format!("v{}", l + 1)
    } else {
        format!("v{}b", l - n + 1)
    }
}

fn monomial_label(m: &[u8], n: usize) -> String {
    if m.is_empty() {
        return "1".into();
    }
    m.iter().map(|&l| letter_label(l, n)).collect::<Vec<_>>().join(".")
}

fn monomial_parity(m: &[u8], n: usize) -> Parity {
    Parity::from_odd(m.iter().filter(|&&l| is_odd(l, n)).count() % 2 == 1)
}

/// Sorts a word into canonical order. Returns `None` when an odd letter
/// repeats, otherwise the sorted word and whether the Koszul sign is odd.
fn canonicalize(mut w: Monomial, n: usize) -> Option<(Monomial, bool)> {
    let mut odd_swaps = false;
    for i in 1..w.len() {
        let mut j = i;
        while j > 0 && w[j - 1] > w[j] {
            if is_odd(w[j - 1], n) && is_odd(w[j], n) {
                odd_swaps = !odd_swaps;
            }
            w.swap(j - 1, j);
            j -= 1;
        }
    }
    if w.windows(2).any(|p| p[0] == p[1] && is_odd(p[0], n)) {
        return None;
    }
    Some((w, odd_swaps))
}

fn enumerate_monomials(n: usize, k: usize) -> Vec<Monomial> {
    fn go(n: usize, start: u8, left: usize, cur: &mut Monomial, out: &mut Vec<Monomial>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for l in start..(2 * n) as u8 {
            cur.push(l);
            let next = if is_odd(l, n) { l + 1 } else { l };
            go(n, next, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, 0, k, &mut Vec::new(), &mut out);
    out
}

fn sym_cache() -> &'static RwLock<HashMap<(usize, usize), Arc<SymBasis>>> {
    static C: OnceLock<RwLock<HashMap<(usize, usize), Arc<SymBasis>>>> = OnceLock::new();
    C.get_or_init(Default::default)
}

/// The monomials of Sᵏ(V_n), in lexicographic order of sorted words.
pub fn sym_monomials(n: usize, k: usize) -> Arc<SymBasis> {
    if let Some(b) = sym_cache().read().unwrap().get(&(n, k)) {
        return b.clone();
    }
    let monomials = enumerate_monomials(n, k);
    let index = monomials.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
    let b = Arc::new(SymBasis { monomials, index });
    sym_cache().write().unwrap().entry((n, k)).or_insert(b).clone()
}

/// Sᵏ(V_n) as a graded basis.
pub fn sym_basis(n: usize, k: usize) -> GradedBasis {
    let sb = sym_monomials(n, k);
    GradedBasis::new_unchecked(
        sb.monomials.iter().map(|m| monomial_label(m, n)).collect(),
        sb.monomials.iter().map(|m| monomial_parity(m, n)).collect(),
    )
}

/// Σ_j C(n,j)·C(n+k−j−1, k−j).
pub fn sym_dim_formula(n: usize, k: usize) -> usize {
    fn binom(a: i64, b: i64) -> i64 {
        if b < 0 || a < b || a < 0 {
            return if b == 0 && a == -1 { 1 } else { 0 };
        }
        (0..b).fold(1, |acc, i| acc * (a - i) / (i + 1))
    }
    (0..=k.min(n) as i64).map(|j| binom(n as i64, j) * binom(n as i64 + k as i64 - j - 1, k as i64 - j)).sum::<i64>()
        as usize
}

fn word_cache() -> &'static RwLock<HashMap<(usize, ObjectWord), Arc<GradedBasis>>> {
    static C: OnceLock<RwLock<HashMap<(usize, ObjectWord), Arc<GradedBasis>>>> = OnceLock::new();
    C.get_or_init(Default::default)
}

/// The evaluation basis of a word: product of Sᵏ for ↑k and (Sᵏ)* for ↓k,
/// row-major. A degenerate word has the empty basis.
pub fn word_basis(n: usize, word: &ObjectWord) -> Arc<GradedBasis> {
    let key = (n, word.clone());
    if let Some(b) = word_cache().read().unwrap().get(&key) {
        return b.clone();
    }
    let basis = if word.is_degenerate() {
        GradedBasis::new_unchecked(Vec::new(), Vec::new())
    } else {
        let mut acc = GradedBasis::unit();
        for s in word.strands() {
            let mut b = sym_basis(n, s.thickness as usize);
            if s.orient == Orient::Down {
                let labels = b.labels().iter().map(|l| format!("{l}'")).collect();
                b = GradedBasis::new_unchecked(labels, b.parities().to_vec());
            }
            acc = acc.tensor(&b);
        }
        acc
    };
    let b = Arc::new(basis);
    word_cache().write().unwrap().entry(key).or_insert(b).clone()
}

/// Per-strand dimensions of a non-degenerate word.
fn strand_dims(n: usize, word: &ObjectWord) -> Vec<usize> {
    word.strands().iter().map(|s| sym_monomials(n, s.thickness as usize).len()).collect()
}

/// Applies a letter map at every position of `m` with the Koszul sign
/// `(-1)^{p(x)·(odd letters before t)}`, summing canonical images.
fn leibniz(
    m: &[u8],
    n: usize,
    x_odd: bool,
    letter_map: impl Fn(u8) -> Option<(u8, Scalar)>,
    mut emit: impl FnMut(Monomial, Scalar),
) {
    let mut odd_before = 0usize;
    for t in 0..m.len() {
        if let Some((img, coeff)) = letter_map(m[t]) {
            let mut w = m.to_vec();
            w[t] = img;
            if let Some((sorted, sign)) = canonicalize(w, n) {
                let flip = sign ^ (x_odd && odd_before % 2 == 1);
                emit(sorted, if flip { -coeff } else { coeff });
            }
        }
        if is_odd(m[t], n) {
            odd_before += 1;
        }
    }
}

/// c on letters: c(v) = i·v̄, c(v̄) = −i·v.
fn clifford_letter(l: u8, n: usize) -> (u8, Scalar) {
    if is_odd(l, n) {
        (l - n as u8, -Scalar::i())
    } else {
        (l + n as u8, Scalar::i())
    }
}

/// Applies a sparse operator given on monomials of Sᵏ to build a matrix.
fn sym_operator(n: usize, k: usize, f: impl Fn(&[u8], &mut dyn FnMut(Monomial, Scalar))) -> SuperMatrix {
    let sb = sym_monomials(n, k);
    let basis = word_basis(n, &ObjectWord::ups(&[k as i64]));
    let mut entries = Vec::new();
    for (c, m) in sb.monomials.iter().enumerate() {
        f(m, &mut |w, v| {
            let r = sb.index_of(&w).expect("canonical monomial");
            entries.push((r, c, v));
        });
    }
    SuperMatrix::from_entries(basis.clone(), basis, entries)
}

pub fn eval_dot(n: usize, k: i64) -> SuperMatrix {
    if k < 0 {
        return zero_on(n, &ObjectWord::ups(&[k]), &ObjectWord::ups(&[k]));
    }
    sym_operator(n, k as usize, |m, emit| leibniz(m, n, true, |l| Some(clifford_letter(l, n)), emit))
}

pub fn zero_on(n: usize, dom: &ObjectWord, cod: &ObjectWord) -> SuperMatrix {
    SuperMatrix::zero(word_basis(n, dom), word_basis(n, cod))
}

pub fn eval_merge(n: usize, k: i64, l: i64) -> SuperMatrix {
    let (dom, cod) = (ObjectWord::ups(&[k, l]), ObjectWord::ups(&[k + l]));
    if k < 0 || l < 0 {
        return zero_on(n, &dom, &cod);
    }
    let (a, b, s) = (sym_monomials(n, k as usize), sym_monomials(n, l as usize), sym_monomials(n, (k + l) as usize));
    let mut entries = Vec::new();
    for (i, ma) in a.monomials.iter().enumerate() {
        for (j, mb) in b.monomials.iter().enumerate() {
            let w: Monomial = ma.iter().chain(mb).copied().collect();
            if let Some((sorted, sign)) = canonicalize(w, n) {
                entries.push((s.index_of(&sorted).unwrap(), i * b.len() + j, Scalar::sign(sign)));
            }
        }
    }
    SuperMatrix::from_entries(word_basis(n, &dom), word_basis(n, &cod), entries)
}

pub fn eval_split(n: usize, k: i64, l: i64) -> SuperMatrix {
    let (dom, cod) = (ObjectWord::ups(&[k + l]), ObjectWord::ups(&[k, l]));
    if k < 0 || l < 0 {
        return zero_on(n, &dom, &cod);
    }
    let (ku, lu) = (k as usize, l as usize);
    let (a, b, s) = (sym_monomials(n, ku), sym_monomials(n, lu), sym_monomials(n, ku + lu));
    let mut entries = Vec::new();
    for (c, m) in s.monomials.iter().enumerate() {
        // Position subsets I of size k; J is the complement.
        for mask in 0u32..(1u32 << m.len()) {
            if mask.count_ones() as usize != ku {
                continue;
            }
            let (mut vi, mut vj) = (Vec::with_capacity(ku), Vec::with_capacity(lu));
            let mut sign = false;
            let mut odd_in_j = 0usize;
            for (p, &letter) in m.iter().enumerate() {
                if mask >> p & 1 == 1 {
                    vi.push(letter);
                    if is_odd(letter, n) && odd_in_j % 2 == 1 {
                        sign = !sign;
                    }
                } else {
                    vj.push(letter);
                    if is_odd(letter, n) {
                        odd_in_j += 1;
                    }
                }
            }
            let r = a.index_of(&vi).unwrap() * b.len() + b.index_of(&vj).unwrap();
            entries.push((r, c, Scalar::sign(sign)));
        }
    }
    SuperMatrix::from_entries(word_basis(n, &dom), word_basis(n, &cod), entries)
}

/// 𝟙 → ↑k↓k, 1 ↦ Σ_b v_b ⊗ v_b*.
pub fn eval_cup(n: usize, k: i64) -> SuperMatrix {
    let cod = ObjectWord::new([crate::web::Strand::up(k), crate::web::Strand::down(k)]);
    let dom = ObjectWord::unit();
    if k < 0 {
        return zero_on(n, &dom, &cod);
    }
    let d = sym_monomials(n, k as usize).len();
    SuperMatrix::from_entries(word_basis(n, &dom), word_basis(n, &cod), (0..d).map(|b| (b * d + b, 0, Scalar::one())))
}

/// ↓k↑k → 𝟙, f ⊗ v ↦ f(v).
pub fn eval_cap(n: usize, k: i64) -> SuperMatrix {
    let dom = ObjectWord::new([crate::web::Strand::down(k), crate::web::Strand::up(k)]);
    let cod = ObjectWord::unit();
    if k < 0 {
        return zero_on(n, &dom, &cod);
    }
    let d = sym_monomials(n, k as usize).len();
    SuperMatrix::from_entries(word_basis(n, &dom), word_basis(n, &cod), (0..d).map(|b| (0, b * d + b, Scalar::one())))
}

type NodeCache = RwLock<HashMap<(usize, WebExpr), Arc<SuperMatrix>>>;

fn node_cache() -> &'static NodeCache {
    static C: OnceLock<NodeCache> = OnceLock::new();
    C.get_or_init(Default::default)
}

/// Parities of the evaluation basis of a word, without building labels.
fn word_parities(n: usize, word: &ObjectWord) -> Arc<Vec<bool>> {
    type ParCache = RwLock<HashMap<(usize, ObjectWord), Arc<Vec<bool>>>>;
    static C: OnceLock<ParCache> = OnceLock::new();
    let cache = C.get_or_init(Default::default);
    let key = (n, word.clone());
    if let Some(p) = cache.read().unwrap().get(&key) {
        return p.clone();
    }
    let mut acc = if word.is_degenerate() { Vec::new() } else { vec![false] };
    if !word.is_degenerate() {
        for s in word.strands() {
            let sb = sym_monomials(n, s.thickness as usize);
            let ps: Vec<bool> = sb.monomials.iter().map(|m| monomial_parity(m, n).is_odd()).collect();
            acc = acc.iter().flat_map(|&a| ps.iter().map(move |&b| a ^ b)).collect();
        }
    }
    let p = Arc::new(acc);
    cache.write().unwrap().entry(key).or_insert(p).clone()
}

fn word_dim(n: usize, word: &ObjectWord) -> usize {
    if word.is_degenerate() {
        0
    } else {
        strand_dims(n, word).iter().product()
    }
}

/// One slice `id_L ⊗ leaf ⊗ id_R` of a flattened web.
struct Layer {
    left_par: Arc<Vec<bool>>,
    leaf: Arc<SuperMatrix>,
    right_dim: usize,
}

impl Layer {
    fn apply(&self, col: &SparseVec) -> SparseVec {
        let (dx, cx, r_dim) = (self.leaf.ncols(), self.leaf.nrows(), self.right_dim);
        let mut out: Vec<(usize, Scalar)> = Vec::with_capacity(col.len());
        for (i, v) in col {
            let r = i % r_dim;
            let q = i / r_dim;
            let (l, d) = (q / dx, q % dx);
            let left_odd = self.left_par[l];
            for (c2, x) in self.leaf.column(d) {
                let mut y = v * x;
                if left_odd && self.leaf.entry_parity(*c2, d).is_odd() {
                    y = -y;
                }
                out.push(((l * cx + c2) * r_dim + r, y));
            }
        }
        merge_terms(out)
    }
}

/// Sorts (index, value) pairs, sums duplicates and drops zeros.
fn merge_terms(mut out: Vec<(usize, Scalar)>) -> SparseVec {
    out.sort_by_key(|e| e.0);
    let mut merged: SparseVec = Vec::with_capacity(out.len());
    for (i, v) in out {
        match merged.last_mut() {
            Some((j, w)) if *j == i => *w += &v,
            _ => merged.push((i, v)),
        }
    }
    merged.retain(|e| !e.1.is_zero());
    merged
}

/// Flattens `w`, placed between contexts `left` and `right`, into layers in
/// application order. Uses (f ⊗ g) = (f ⊗ id) ∘ (id ⊗ g).
fn collect_layers(n: usize, w: &WebExpr, left: &ObjectWord, right: &ObjectWord, out: &mut Vec<Layer>) -> Result<()> {
    match w {
        WebExpr::Compose(top, bottom) => {
            collect_layers(n, bottom, left, right, out)?;
            collect_layers(n, top, left, right, out)
        }
        WebExpr::Tensor(f, g) => {
            let (fd, _) = typecheck(f)?;
            let (_, gc) = typecheck(g)?;
            collect_layers(n, g, &left.concat(&fd), right, out)?;
            collect_layers(n, f, left, &gc.concat(right), out)
        }
        WebExpr::Id(_) => Ok(()),
        leaf => {
            let m = leaf_matrix(n, leaf)?;
            out.push(Layer { left_par: word_parities(n, left), leaf: m, right_dim: word_dim(n, right) });
            Ok(())
        }
    }
}

/// The cached matrix of a generator, derived node or explicit zero.
fn leaf_matrix(n: usize, leaf: &WebExpr) -> Result<Arc<SuperMatrix>> {
    let key = (n, leaf.clone());
    if let Some(m) = node_cache().read().unwrap().get(&key) {
        return Ok(m.clone());
    }
    let (dom, cod) = typecheck(leaf)?;
    let m = Arc::new(eval_leaf(n, leaf, &dom, &cod)?);
    Ok(node_cache().write().unwrap().entry(key).or_insert(m).clone())
}

/// Evaluates a web under Ψₙ. Generator and derived-node matrices are
/// memoised per `(n, node)`; composites are applied column by column so
/// large intermediate words are never materialised as matrices.
pub fn eval_web(n: usize, w: &WebExpr) -> Result<SuperMatrix> {
    if n == 0 {
        return Err(Error::Invalid("n must be at least 1".into()));
    }
    let (dom, cod) = typecheck(w)?;
    eval_typed(n, w, &dom, &cod)
}

fn eval_typed(n: usize, w: &WebExpr, dom: &ObjectWord, cod: &ObjectWord) -> Result<SuperMatrix> {
    let mut layers = Vec::new();
    collect_layers(n, w, &ObjectWord::unit(), &ObjectWord::unit(), &mut layers)?;
    let (db, cb) = (word_basis(n, dom), word_basis(n, cod));
    if layers.len() == 1 && layers[0].left_par.len() == 1 && layers[0].right_dim == 1 {
        return layers[0].leaf.as_ref().clone().with_bases(db, cb);
    }
    let cols: Vec<SparseVec> = (0..db.len())
        .into_par_iter()
        .map(|c| layers.iter().fold(vec![(c, Scalar::one())], |v, layer| layer.apply(&v)))
        .collect();
    Ok(SuperMatrix::from_columns(db, cb, cols))
}

/// Evaluates Σ aᵢ·wᵢ; every term must have the given type.
pub fn eval_lincomb(n: usize, terms: &[(Scalar, WebExpr)], dom: &ObjectWord, cod: &ObjectWord) -> Result<SuperMatrix> {
    let mut acc = zero_on(n, dom, cod);
    for (a, w) in terms {
        let (d, c) = typecheck(w)?;
        if &d != dom || &c != cod {
            return Err(Error::Type { path: "root".into(), msg: format!("term has type {d} -> {c}, expected {dom} -> {cod}") });
        }
        acc = acc.lincomb(a, &eval_typed(n, w, dom, cod)?)?;
    }
    Ok(acc)
}

fn eval_leaf(n: usize, w: &WebExpr, dom: &ObjectWord, cod: &ObjectWord) -> Result<SuperMatrix> {
    if dom.is_degenerate() || cod.is_degenerate() {
        return Ok(zero_on(n, dom, cod));
    }
    Ok(match w {
        WebExpr::Id(_) => SuperMatrix::identity(word_basis(n, dom)),
        WebExpr::Dot(k) => eval_dot(n, *k),
        WebExpr::Merge(k, l) => eval_merge(n, *k, *l),
        WebExpr::Split(k, l) => eval_split(n, *k, *l),
        WebExpr::CupL(k) => eval_cup(n, *k),
        WebExpr::CapL(k) => eval_cap(n, *k),
        WebExpr::Zero(d, c) => zero_on(n, d, c),
        WebExpr::RCross(k, l) => {
            let left = eval_web(n, &WebExpr::Derived(Derived::XL(*k, *l)))?;
            // The leftward crossing is invertible for every n; failure here is a bug.
            left.inverse().expect("leftward crossing must be invertible")
        }
        WebExpr::Derived(d) => eval_derived(n, d, dom)?,
        WebExpr::Compose(..) | WebExpr::Tensor(..) => eval_web(n, w)?,
    })
}

fn eval_derived(n: usize, d: &Derived, dom: &ObjectWord) -> Result<SuperMatrix> {
    if let Some(e) = d.expand() {
        return eval_web(n, &e);
    }
    if let Some((num, den, web)) = d.weighted() {
        return Ok(eval_web(n, &web)?.scale(&Scalar::frac(num, den)));
    }
    match *d {
        Derived::XUp(1, 1) => {
            let sm = WebExpr::compose(WebExpr::Split(1, 1), WebExpr::Merge(1, 1));
            eval_web(n, &sm)?.sub(&SuperMatrix::identity(word_basis(n, dom)))
        }
        // Remaining cases have a zero-thickness factor.
        _ => Ok(SuperMatrix::identity(word_basis(n, dom))),
    }
}

/// A generator of q(n): `e⁰_{ij}` (even) or `e¹_{ij}` (odd), 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QnGen {
    pub i: usize,
    pub j: usize,
    pub odd: bool,
}

impl QnGen {
    pub fn all(n: usize) -> Vec<QnGen> {
        let mut out = Vec::with_capacity(2 * n * n);
        for odd in [false, true] {
            for i in 1..=n {
                for j in 1..=n {
                    out.push(QnGen { i, j, odd });
                }
            }
        }
        out
    }

    pub fn name(&self) -> String {
        format!("e{}_{}{}", if self.odd { 1 } else { 0 }, self.i, self.j)
    }

    /// The image of a basis letter.
    fn on_letter(&self, l: u8, n: usize) -> Option<u8> {
        let (i, j) = ((self.i - 1) as u8, (self.j - 1) as u8);
        let nn = n as u8;
        let (src_even, src_odd) = (j, j + nn);
        match (self.odd, l) {
            (false, x) if x == src_even => Some(i),
            (false, x) if x == src_odd => Some(i + nn),
            (true, x) if x == src_even => Some(i + nn),
            (true, x) if x == src_odd => Some(i),
            _ => None,
        }
    }
}

fn qn_on_sym(n: usize, k: usize, x: QnGen) -> SuperMatrix {
    sym_operator(n, k, |m, emit| leibniz(m, n, x.odd, |l| x.on_letter(l, n).map(|r| (r, Scalar::one())), emit))
}

fn qn_on_strand(n: usize, s: crate::web::Strand, x: QnGen) -> SuperMatrix {
    let k = s.thickness as usize;
    let m = qn_on_sym(n, k, x);
    match s.orient {
        Orient::Up => m,
        Orient::Down => {
            // (x.c*) = Σ_b −(−1)^{p(x)p(c)} X[c,b] b*
            let basis = word_basis(n, &ObjectWord::new([s]));
            let mut entries = Vec::new();
            for (b, c, v) in m.entries() {
                let flip = x.odd && m.codomain().parity(b).is_odd();
                entries.push((c, b, if flip { v } else { -v }));
            }
            SuperMatrix::from_entries(basis.clone(), basis, entries)
        }
    }
}

/// The action of one generator on the evaluation basis of a word, via the
/// coproduct with Koszul signs.
pub fn qn_action(n: usize, word: &ObjectWord, x: QnGen) -> SuperMatrix {
    let basis = word_basis(n, word);
    let mut total = SuperMatrix::zero(basis.clone(), basis.clone());
    if word.is_degenerate() {
        return total;
    }
    let strands = word.strands();
    let dims = strand_dims(n, word);
    for t in 0..strands.len() {
        let prefix = ObjectWord::new(strands[..t].iter().copied());
        let suffix = ObjectWord::new(strands[t + 1..].iter().copied());
        let id_pre = SuperMatrix::identity(word_basis(n, &prefix));
        let id_suf = SuperMatrix::identity(word_basis(n, &suffix));
        let local = qn_on_strand(n, strands[t], x);
        let right_word = ObjectWord::new(strands[t..].iter().copied());
        let right = local
            .tensor_onto(&id_suf, word_basis(n, &right_word), word_basis(n, &right_word))
            .expect("shapes agree");
        debug_assert_eq!(right.ncols(), dims[t..].iter().product::<usize>());
        let term = id_pre.tensor_onto(&right, basis.clone(), basis.clone()).expect("shapes agree");
        total = total.add(&term).expect("same bases");
    }
    total
}

/// The images of all 2n² generators on a word.
pub fn qn_generator_action(n: usize, word: &ObjectWord) -> Vec<(QnGen, SuperMatrix)> {
    QnGen::all(n).into_iter().map(|x| (x, qn_action(n, word, x))).collect()
}

/// The action of `x` on a word as one layer per strand, so that
/// ρ(x)·v = Σ_t layer_t·v.
fn generator_layers(n: usize, word: &ObjectWord, x: QnGen) -> Vec<Layer> {
    if word.is_degenerate() {
        return Vec::new();
    }
    let strands = word.strands();
    (0..strands.len())
        .map(|t| Layer {
            left_par: word_parities(n, &ObjectWord::new(strands[..t].iter().copied())),
            leaf: Arc::new(qn_on_strand(n, strands[t], x)),
            right_dim: word_dim(n, &ObjectWord::new(strands[t + 1..].iter().copied())),
        })
        .collect()
}

fn apply_layer_sum(layers: &[Layer], v: &SparseVec) -> SparseVec {
    merge_terms(layers.iter().flat_map(|l| l.apply(v)).collect())
}

/// Weight of every basis vector of a word: entry t is the eigenvalue of e⁰_tt.
fn basis_weights(n: usize, word: &ObjectWord) -> Vec<Vec<Scalar>> {
    let dim = word_dim(n, word);
    let mut out = vec![vec![Scalar::zero(); n]; dim];
    for t in 1..=n {
        let layers = generator_layers(n, word, QnGen { i: t, j: t, odd: false });
        for (c, w) in out.iter_mut().enumerate() {
            if let Some((_, v)) = apply_layer_sum(&layers, &vec![(c, Scalar::one())]).first() {
                w[t - 1] = v.clone();
            }
        }
    }
    out
}

/// Direct supercommutation test of `mp` (homogeneous of parity `p`) with the
/// generators `xs`; returns the first failure.
fn supercommute_failure(n: usize, mp: &SuperMatrix, p: Parity, dom: &ObjectWord, cod: &ObjectWord, xs: &[QnGen]) -> Option<QnGen> {
    let layers: Vec<(QnGen, Vec<Layer>, Vec<Layer>)> =
        xs.iter().map(|&x| (x, generator_layers(n, dom, x), generator_layers(n, cod, x))).collect();
    (0..mp.ncols())
        .into_par_iter()
        .filter_map(|c| {
            let unit = vec![(c, Scalar::one())];
            layers.iter().find_map(|(x, dl, cl)| {
                // (M·ρ_dom(x))e_c
                let image = apply_layer_sum(dl, &unit);
                let lhs = merge_terms(image.iter().flat_map(|(j, v)| mp.column(*j).iter().map(move |(r, w)| (*r, w * v))).collect());
                // ±(ρ_cod(x)·M)e_c
                let mut rhs = apply_layer_sum(cl, mp.column(c));
                if x.odd && p.is_odd() {
                    rhs.iter_mut().for_each(|e| e.1 = -e.1.clone());
                }
                (lhs != rhs).then_some(*x)
            })
        })
        .min_by_key(|x| (x.odd, x.i, x.j))
}

/// A generator of q(n) with which `m` fails to supercommute, if any.
///
/// The diagonal e⁰_ii are tested by comparing the weights of the row and
/// column of each nonzero entry. Beyond those, only e⁰_{i,i+1}, e⁰_{i+1,i}
/// and e¹_11 are tested, column by column against the per-strand generator
/// layers. These generate q(n) as a Lie superalgebra, and the supercommutant
/// of a set is closed under brackets. The generator matrices on the full
/// tensor product are never formed.
pub fn equivariance_failure(n: usize, m: &SuperMatrix, dom: &ObjectWord, cod: &ObjectWord) -> Result<Option<QnGen>> {
    if m.nrows() != word_dim(n, cod) || m.ncols() != word_dim(n, dom) {
        return Err(Error::BasisMismatch("matrix does not match the given words".into()));
    }
    let (wd, wc) = (basis_weights(n, dom), basis_weights(n, cod));
    for c in 0..m.ncols() {
        for (r, _) in m.column(c) {
            if let Some(t) = (0..n).find(|&t| wd[c][t] != wc[*r][t]) {
                return Ok(Some(QnGen { i: t + 1, j: t + 1, odd: false }));
            }
        }
    }
    let even: Vec<QnGen> = QnGen::all(n).into_iter().filter(|x| !x.odd && x.i.abs_diff(x.j) == 1).collect();
    let odd = vec![QnGen { i: 1, j: 1, odd: true }];
    for p in [Parity::Even, Parity::Odd] {
        let mp = m.component(p);
        if mp.is_zero() {
            continue;
        }
        for xs in [&even, &odd] {
            if let Some(x) = supercommute_failure(n, &mp, p, dom, cod, xs) {
                return Ok(Some(x));
            }
        }
    }
    Ok(None)
}

/// Tests supercommutation with all 2n² generators directly, without the
/// reductions used by [`equivariance_failure`].
pub fn equivariance_failure_exhaustive(n: usize, m: &SuperMatrix, dom: &ObjectWord, cod: &ObjectWord) -> Result<Option<QnGen>> {
    if m.nrows() != word_dim(n, cod) || m.ncols() != word_dim(n, dom) {
        return Err(Error::BasisMismatch("matrix does not match the given words".into()));
    }
    let all = QnGen::all(n);
    for p in [Parity::Even, Parity::Odd] {
        let mp = m.component(p);
        if !mp.is_zero() {
            if let Some(x) = supercommute_failure(n, &mp, p, dom, cod, &all) {
                return Ok(Some(x));
            }
        }
    }
    Ok(None)
}

pub fn is_equivariant(n: usize, m: &SuperMatrix, dom: &ObjectWord, cod: &ObjectWord) -> Result<bool> {
    Ok(equivariance_failure(n, m, dom, cod)?.is_none())
}

/// Dimensions (even, odd) of the space of q(n)-equivariant maps `a → b`.
pub fn hom_dim(n: usize, a: &ObjectWord, b: &ObjectWord) -> (usize, usize) {
    let (ba, bb) = (word_basis(n, a), word_basis(n, b));
    let (ra, rb) = (qn_generator_action(n, a), qn_generator_action(n, b));
    let mut dims = [0usize; 2];
    for (slot, p) in [Parity::Even, Parity::Odd].into_iter().enumerate() {
        // Unknowns: entries (r, c) with p(r) + p(c) = p.
        let mut idx = HashMap::new();
        for c in 0..ba.len() {
            for r in 0..bb.len() {
                if ba.parity(c) + bb.parity(r) == p {
                    let next = idx.len();
                    idx.insert((r, c), next);
                }
            }
        }
        let mut rows: Vec<SparseVec> = Vec::new();
        for ((x, xa), (_, xb)) in ra.iter().zip(&rb) {
            let s = if x.odd && p.is_odd() { Scalar::from_int(-1) } else { Scalar::one() };
            // (M·ρ_a)[r,c] − s·(ρ_b·M)[r,c] = 0
            let mut eqs: HashMap<(usize, usize), HashMap<usize, Scalar>> = HashMap::new();
            for c in 0..ba.len() {
                for (k, v) in xa.column(c) {
                    for r in 0..bb.len() {
                        if let Some(&u) = idx.get(&(r, *k)) {
                            *eqs.entry((r, c)).or_default().entry(u).or_default() += v;
                        }
                    }
                }
            }
            for k in 0..bb.len() {
                for (r, v) in xb.column(k) {
                    let coeff = -(&s * v);
                    for c in 0..ba.len() {
                        if let Some(&u) = idx.get(&(k, c)) {
                            *eqs.entry((*r, c)).or_default().entry(u).or_default() += &coeff;
                        }
                    }
                }
            }
            for (_, row) in eqs {
                let mut v: SparseVec = row.into_iter().filter(|(_, s)| !s.is_zero()).collect();
                v.sort_by_key(|e| e.0);
                if !v.is_empty() {
                    rows.push(v);
                }
            }
        }
        dims[slot] = null_space(rows, idx.len()).len();
    }
    (dims[0], dims[1])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;

    #[test]
    fn reduced_equivariance_matches_exhaustive() {
        for n in 2..=3 {
            for w in [ObjectWord::ups(&[1]), ObjectWord::ups(&[1, 1])] {
                let basis = word_basis(n, &w);
                let dim = basis.len();
                let base = if w.len() == 2 {
                    eval_web(n, &crate::web::build::upcross(1, 1)).unwrap()
                } else {
                    eval_dot(n, 1)
                };
                assert!(equivariance_failure(n, &base, &w, &w).unwrap().is_none());
                assert!(equivariance_failure_exhaustive(n, &base, &w, &w).unwrap().is_none());
                for r in 0..dim {
                    for c in 0..dim {
                        let mut cols = vec![Vec::new(); dim];
                        cols[c].push((r, Scalar::one()));
                        let e = SuperMatrix::from_columns(basis.clone(), basis.clone(), cols);
                        for m in [e.clone(), base.add(&e).unwrap()] {
                            let fast = equivariance_failure(n, &m, &w, &w).unwrap();
                            let full = equivariance_failure_exhaustive(n, &m, &w, &w).unwrap();
                            assert_eq!(fast.is_some(), full.is_some(), "n={n} {w} entry ({r}, {c})");
                        }
                    }
                }
            }
        }
    }

    fn eval_naive(n: usize, w: &WebExpr) -> SuperMatrix {
        let (dom, cod) = typecheck(w).unwrap();
        let m = match w {
            WebExpr::Compose(top, bottom) => eval_naive(n, top).compose(&eval_naive(n, bottom)).unwrap(),
            WebExpr::Tensor(f, g) => eval_naive(n, f).tensor(&eval_naive(n, g)),
            WebExpr::Id(_) => SuperMatrix::identity(word_basis(n, &dom)),
            leaf => leaf_matrix(n, leaf).unwrap().as_ref().clone(),
        };
        m.with_bases(word_basis(n, &dom), word_basis(n, &cod)).unwrap()
    }

    #[test]
    fn layered_evaluation_matches_compose_and_tensor() {
        let corpus = include_str!("../tests/data/dsl_corpus.txt");
        let webs: Vec<WebExpr> =
            corpus.lines().filter_map(|l| l.strip_prefix("ok ")).map(|t| crate::web::parse_dsl(t.trim()).unwrap()).collect();
        assert!(webs.len() >= 100);
        for n in 1..=2 {
            for w in &webs {
                assert_eq!(eval_web(n, w).unwrap(), eval_naive(n, w), "n={n} {}", crate::web::format_dsl(w));
            }
        }
    }

    #[test]
    fn sym_dims() {
        for n in 1..=4 {
            for k in 0..=6 {
                assert_eq!(sym_monomials(n, k).len(), sym_dim_formula(n, k), "n={n} k={k}");
            }
        }
        let b = sym_basis(1, 2);
        assert_eq!(b.labels(), &["v1.v1".to_string(), "v1.v1b".to_string()]);
        assert_eq!(b.parities(), &[Parity::Even, Parity::Odd]);
    }

    #[test]
    fn dot_on_v1() {
        let d = eval_dot(1, 1);
        assert_eq!(d.get(1, 0), Scalar::i());
        assert_eq!(d.get(0, 1), -Scalar::i());
        let sq = d.compose(&d).unwrap();
        assert_eq!(sq, SuperMatrix::identity(d.domain().clone()).scale(&Scalar::from_int(-1)).scale(&Scalar::from_int(-1)));
    }

    #[test]
    fn split_even_letters() {
        let s = eval_split(2, 1, 1);
        let sb = sym_monomials(2, 2);
        let c = sb.index_of(&[0, 1]).unwrap();
        let col = s.column(c);
        // v1⊗v2 and v2⊗v1
        assert_eq!(col.iter().map(|e| e.0).collect::<Vec<_>>(), vec![1, 4]);
        assert!(col.iter().all(|e| e.1.is_one()));
    }

    #[test]
    fn odd_square_merges_to_zero() {
        let m = eval_merge(1, 1, 1);
        assert!(m.column(3).is_empty());
    }

    #[test]
    fn end_v1_is_one_one() {
        assert_eq!(hom_dim(1, &ObjectWord::ups(&[1]), &ObjectWord::ups(&[1])), (1, 1));
    }
}
