//! Web diagrams as typed expression trees, and the textual DSL.
//!
//! Grammar:
//!
//! ```text
//! expr   := term (';' term)*        a ; b  is  a ∘ b  (b is applied first)
//! term   := factor ('*' factor)*    tensor product, left to right
//! factor := name '(' args ')' | '(' expr ')'
//! ```
//!
//! Generators: `id(^k)`, `id(vk)`, `dot(k)`, `merge(k,l)`, `split(k,l)`,
//! `cupL(k)`, `capL(k)`, `xr(k,l)`. Derived: `xup`, `xl`, `xd`, `cupR`, `capR`,
//! `ddot`, `dmerge`, `dsplit`, `clasp`, `perm`, `rungL`, `rungR`, `explode`,
//! `implode`, and `zero(WORD,WORD)` where a word is written like `^1v2^3`.

use std::fmt;

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, ParseError, Result};
use crate::sergeev::Perm;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Serialize)]
pub enum Orient {
    Up,
    Down,
}

impl Orient {
    fn glyph(self) -> char {
        match self {
            Orient::Up => '^',
            Orient::Down => 'v',
        }
    }
}

/// An oriented strand of a given thickness.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Serialize)]
pub struct Strand {
    pub orient: Orient,
    pub thickness: i64,
}

impl Strand {
    pub fn up(k: i64) -> Self {
        Strand { orient: Orient::Up, thickness: k }
    }

    pub fn down(k: i64) -> Self {
        Strand { orient: Orient::Down, thickness: k }
    }
}

/// A tensor word of strands. Zero-thickness strands are dropped on
/// construction; a negative thickness marks a zero object.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default, PartialOrd, Ord, Serialize)]
pub struct ObjectWord(Vec<Strand>);

impl ObjectWord {
    pub fn new(strands: impl IntoIterator<Item = Strand>) -> Self {
        ObjectWord(strands.into_iter().filter(|s| s.thickness != 0).collect())
    }

    pub fn unit() -> Self {
        ObjectWord(Vec::new())
    }

    pub fn ups(ks: &[i64]) -> Self {
        Self::new(ks.iter().map(|&k| Strand::up(k)))
    }

    pub fn downs(ks: &[i64]) -> Self {
        Self::new(ks.iter().map(|&k| Strand::down(k)))
    }

    pub fn strands(&self) -> &[Strand] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &ObjectWord) -> ObjectWord {
        ObjectWord(self.0.iter().chain(&other.0).copied().collect())
    }

    /// True when some strand has negative thickness.
    pub fn is_degenerate(&self) -> bool {
        self.0.iter().any(|s| s.thickness < 0)
    }

    /// Parses the compact form `^1v2^3`; the empty string is the unit.
    pub fn parse(s: &str) -> std::result::Result<ObjectWord, ParseError> {
        let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut out = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            let orient = match chars[i] {
                '^' => Orient::Up,
                'v' => Orient::Down,
                c => return Err(ParseError::new(i, format!("expected `^` or `v`, found `{c}`"))),
            };
            i += 1;
            let start = i;
            if i < chars.len() && chars[i] == '-' {
                i += 1;
            }
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            let k: i64 = text.parse().map_err(|_| ParseError::new(start, "expected a thickness"))?;
            out.push(Strand { orient, thickness: k });
        }
        Ok(ObjectWord::new(out))
    }
}

impl fmt::Display for ObjectWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            write!(f, "{}{}", s.orient.glyph(), s.thickness)?;
        }
        Ok(())
    }
}

/// Derived constructors, expanded at evaluation time.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Derived {
    /// Upward braiding β_{k,l}: ↑k↑l → ↑l↑k.
    XUp(i64, i64),
    /// Leftward crossing: ↓l↑k → ↑k↓l.
    XL(i64, i64),
    /// Downward crossing: ↓k↓l → ↓l↓k.
    XD(i64, i64),
    CupR(i64),
    CapR(i64),
    DDot(i64),
    /// ↓(k+l) → ↓k↓l.
    DMerge(i64, i64),
    /// ↓k↓l → ↓(k+l).
    DSplit(i64, i64),
    Clasp(i64),
    /// 1-based images of a permutation of 1-strands.
    Perm(Vec<usize>),
    RungL(i64, i64, i64),
    RungR(i64, i64, i64),
    Explode(Vec<i64>),
    Implode(Vec<i64>),
}

/// A web diagram.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum WebExpr {
    Id(Strand),
    Dot(i64),
    Merge(i64, i64),
    Split(i64, i64),
    CupL(i64),
    CapL(i64),
    /// Rightward crossing ↑k↓l → ↓l↑k, the inverse of the leftward one.
    RCross(i64, i64),
    /// `Compose(top, bottom)` is top ∘ bottom.
    Compose(Box<WebExpr>, Box<WebExpr>),
    Tensor(Box<WebExpr>, Box<WebExpr>),
    /// The zero morphism `domain → codomain`.
    Zero(ObjectWord, ObjectWord),
    Derived(Derived),
}

impl WebExpr {
    pub fn compose(top: WebExpr, bottom: WebExpr) -> WebExpr {
        WebExpr::Compose(Box::new(top), Box::new(bottom))
    }

    pub fn tensor(left: WebExpr, right: WebExpr) -> WebExpr {
        WebExpr::Tensor(Box::new(left), Box::new(right))
    }

    /// Composes a list listed top first.
    pub fn compose_all(parts: impl IntoIterator<Item = WebExpr>) -> WebExpr {
        let mut it: Vec<WebExpr> = parts.into_iter().collect();
        let mut acc = it.pop().expect("nonempty composite");
        while let Some(top) = it.pop() {
            acc = WebExpr::compose(top, acc);
        }
        acc
    }

    /// Tensors a list left to right; the empty list is the identity of 𝟙.
    pub fn tensor_all(parts: impl IntoIterator<Item = WebExpr>) -> WebExpr {
        let mut it = parts.into_iter();
        let Some(first) = it.next() else { return WebExpr::Id(Strand::up(0)) };
        it.fold(first, WebExpr::tensor)
    }

    pub fn id_up(k: i64) -> WebExpr {
        WebExpr::Id(Strand::up(k))
    }

    pub fn id_down(k: i64) -> WebExpr {
        WebExpr::Id(Strand::down(k))
    }

    /// Identity on a word.
    pub fn id_word(w: &ObjectWord) -> WebExpr {
        Self::tensor_all(w.strands().iter().map(|s| WebExpr::Id(*s)))
    }

    /// Parity: number of dot generators mod 2 (derived nodes counted through
    /// their expansion).
    pub fn dot_count(&self) -> usize {
        match self {
            WebExpr::Dot(_) => 1,
            WebExpr::Compose(a, b) | WebExpr::Tensor(a, b) => a.dot_count() + b.dot_count(),
            WebExpr::Derived(d) => d.expand().map(|e| e.dot_count()).unwrap_or(0),
            _ => 0,
        }
    }
}

fn ups(ks: &[i64]) -> ObjectWord {
    ObjectWord::ups(ks)
}

fn factorial(k: i64) -> i64 {
    (1..=k).product()
}

impl Derived {
    /// Expansion into simpler webs, for constructors that need no scalars.
    /// `XUp`, `Clasp` carry scalar weights and are evaluated directly.
    pub fn expand(&self) -> Option<WebExpr> {
        use WebExpr as W;
        Some(match *self {
            Derived::XUp(..) | Derived::Clasp(_) => return None,
            Derived::XL(k, l) => W::compose_all([
                W::tensor_all([W::CapL(l), W::id_up(k), W::id_down(l)]),
                W::tensor_all([W::id_down(l), W::Derived(Derived::XUp(k, l)), W::id_down(l)]),
                W::tensor_all([W::id_down(l), W::id_up(k), W::CupL(l)]),
            ]),
            Derived::CupR(k) => W::compose(W::RCross(k, k), W::CupL(k)),
            Derived::CapR(k) => W::compose(W::CapL(k), W::RCross(k, k)),
            Derived::DDot(k) => W::compose_all([
                W::tensor(W::CapL(k), W::id_down(k)),
                W::tensor_all([W::id_down(k), W::Dot(k), W::id_down(k)]),
                W::tensor(W::id_down(k), W::CupL(k)),
            ]),
            Derived::DMerge(k, l) => {
                // 𝟙 → ↑l↑k↓k↓l by nested cups, then merge the ups and cap off.
                let cups = W::compose(W::tensor_all([W::id_up(l), W::CupL(k), W::id_down(l)]), W::CupL(l));
                W::compose_all([
                    W::tensor_all([W::CapL(k + l), W::id_down(k), W::id_down(l)]),
                    W::tensor_all([W::id_down(k + l), W::Merge(l, k), W::id_down(k), W::id_down(l)]),
                    W::tensor(W::id_down(k + l), cups),
                ])
            }
            Derived::DSplit(k, l) => {
                let caps = W::compose(W::CapL(k), W::tensor_all([W::id_down(k), W::CapL(l), W::id_up(k)]));
                W::compose_all([
                    W::tensor(caps, W::id_down(k + l)),
                    W::tensor_all([W::id_down(k), W::id_down(l), W::Split(l, k), W::id_down(k + l)]),
                    W::tensor_all([W::id_down(k), W::id_down(l), W::CupL(k + l)]),
                ])
            }
            Derived::XD(k, l) => {
                let cups = W::compose(W::tensor_all([W::id_up(k), W::CupL(l), W::id_down(k)]), W::CupL(k));
                let caps = W::compose(W::CapL(k), W::tensor_all([W::id_down(k), W::CapL(l), W::id_up(k)]));
                W::compose_all([
                    W::tensor_all([caps, W::id_down(l), W::id_down(k)]),
                    W::tensor_all([
                        W::id_down(k),
                        W::id_down(l),
                        W::Derived(Derived::XUp(k, l)),
                        W::id_down(l),
                        W::id_down(k),
                    ]),
                    W::tensor_all([W::id_down(k), W::id_down(l), cups]),
                ])
            }
            Derived::Perm(ref images) => {
                let k = images.len();
                let p = Perm::from_images(images).ok()?;
                perm_web(&p.reduced_word(true), k)
            }
            Derived::RungL(k, l, j) => W::compose(
                W::tensor(W::Merge(k, j), W::id_up(l - j)),
                W::tensor(W::id_up(k), W::Split(j, l - j)),
            ),
            Derived::RungR(k, l, j) => W::compose(
                W::tensor(W::id_up(k - j), W::Merge(j, l)),
                W::tensor(W::Split(k - j, j), W::id_up(l)),
            ),
            Derived::Explode(ref a) => W::tensor_all(a.iter().map(|&k| split_all(k))),
            Derived::Implode(ref a) => W::tensor_all(a.iter().map(|&k| merge_all(k))),
        })
    }

    fn name(&self) -> &'static str {
        match self {
            Derived::XUp(..) => "xup",
            Derived::XL(..) => "xl",
            Derived::XD(..) => "xd",
            Derived::CupR(_) => "cupR",
            Derived::CapR(_) => "capR",
            Derived::DDot(_) => "ddot",
            Derived::DMerge(..) => "dmerge",
            Derived::DSplit(..) => "dsplit",
            Derived::Clasp(_) => "clasp",
            Derived::Perm(_) => "perm",
            Derived::RungL(..) => "rungL",
            Derived::RungR(..) => "rungR",
            Derived::Explode(_) => "explode",
            Derived::Implode(_) => "implode",
        }
    }

    fn args(&self) -> Vec<i64> {
        match self {
            Derived::XUp(a, b)
            | Derived::XL(a, b)
            | Derived::XD(a, b)
            | Derived::DMerge(a, b)
            | Derived::DSplit(a, b) => vec![*a, *b],
            Derived::CupR(a) | Derived::CapR(a) | Derived::DDot(a) | Derived::Clasp(a) => vec![*a],
            Derived::Perm(v) => v.iter().map(|&x| x as i64).collect(),
            Derived::RungL(a, b, c) | Derived::RungR(a, b, c) => vec![*a, *b, *c],
            Derived::Explode(v) | Derived::Implode(v) => v.clone(),
        }
    }

    /// Domain and codomain.
    pub fn signature(&self) -> (ObjectWord, ObjectWord) {
        use ObjectWord as O;
        let (u, d) = (Strand::up, Strand::down);
        match *self {
            Derived::XUp(k, l) => (ups(&[k, l]), ups(&[l, k])),
            Derived::XL(k, l) => (O::new([d(l), u(k)]), O::new([u(k), d(l)])),
            Derived::XD(k, l) => (O::downs(&[k, l]), O::downs(&[l, k])),
            Derived::CupR(k) => (O::unit(), O::new([d(k), u(k)])),
            Derived::CapR(k) => (O::new([u(k), d(k)]), O::unit()),
            Derived::DDot(k) => (O::downs(&[k]), O::downs(&[k])),
            Derived::DMerge(k, l) => (O::downs(&[k + l]), O::downs(&[k, l])),
            Derived::DSplit(k, l) => (O::downs(&[k, l]), O::downs(&[k + l])),
            Derived::Clasp(k) => (ups(&vec![1; k.max(0) as usize]), ups(&vec![1; k.max(0) as usize])),
            Derived::Perm(ref v) => (ups(&vec![1; v.len()]), ups(&vec![1; v.len()])),
            Derived::RungL(k, l, j) => (ups(&[k, l]), ups(&[k + j, l - j])),
            Derived::RungR(k, l, j) => (ups(&[k, l]), ups(&[k - j, l + j])),
            Derived::Explode(ref a) => (ups(a), ups(&vec![1; a.iter().sum::<i64>().max(0) as usize])),
            Derived::Implode(ref a) => (ups(&vec![1; a.iter().sum::<i64>().max(0) as usize]), ups(a)),
        }
    }

    /// The scalar weight of `XUp`/`Clasp`, with the web it multiplies.
    pub fn weighted(&self) -> Option<(i64, i64, WebExpr)> {
        use WebExpr as W;
        match *self {
            Derived::XUp(k, l) if k >= 1 && l >= 1 && !(k == 1 && l == 1) => {
                let block: Vec<usize> =
                    (0..(k + l) as usize).map(|i| if i < k as usize { i + l as usize + 1 } else { i - k as usize + 1 }).collect();
                let web = W::compose_all([
                    W::Derived(Derived::Implode(vec![l, k])),
                    W::Derived(Derived::Perm(block)),
                    W::Derived(Derived::Explode(vec![k, l])),
                ]);
                Some((1, factorial(k) * factorial(l), web))
            }
            Derived::Clasp(k) if k >= 1 => Some((1, factorial(k), W::compose(split_all(k), merge_all(k)))),
            _ => None,
        }
    }
}

/// ↑1^k → ↑k, merging left to right.
pub fn merge_all(k: i64) -> WebExpr {
    if k <= 1 {
        return WebExpr::id_up(k);
    }
    let mut acc = WebExpr::Merge(1, 1);
    for m in 2..k {
        acc = WebExpr::compose(WebExpr::Merge(m, 1), WebExpr::tensor(acc, WebExpr::id_up(1)));
    }
    acc
}

/// ↑k → ↑1^k, splitting off the rightmost strand first.
pub fn split_all(k: i64) -> WebExpr {
    if k <= 1 {
        return WebExpr::id_up(k);
    }
    let mut acc = WebExpr::Split(1, 1);
    for m in 2..k {
        acc = WebExpr::compose(WebExpr::tensor(acc, WebExpr::id_up(1)), WebExpr::Split(m, 1));
    }
    acc
}

/// Identity on ↑₁^m.
fn ones(m: usize) -> WebExpr {
    WebExpr::id_word(&ups(&vec![1; m]))
}

/// The 1-1 crossing on strands (i, i+1) of ↑1^k.
pub fn crossing_at(i: usize, k: usize) -> WebExpr {
    WebExpr::tensor_all([ones(i - 1), WebExpr::Derived(Derived::XUp(1, 1)), ones(k - i - 1)])
}

/// The wiring of crossings for σ = s_{w₁}⋯s_{w_r} on ↑1^k.
pub fn perm_web(word: &[usize], k: usize) -> WebExpr {
    if word.is_empty() {
        return WebExpr::id_word(&ups(&vec![1; k]));
    }
    WebExpr::compose_all(word.iter().map(|&i| crossing_at(i, k)))
}

/// Dot on strand `i` (1-based) of ↑1^k.
pub fn dot_at(i: usize, k: usize) -> WebExpr {
    WebExpr::tensor_all([ones(i - 1), WebExpr::Dot(1), ones(k - i)])
}

/// Type inference with the offending sub-expression path on failure.
pub fn typecheck(w: &WebExpr) -> Result<(ObjectWord, ObjectWord)> {
    typecheck_at(w, "root")
}

fn typecheck_at(w: &WebExpr, path: &str) -> Result<(ObjectWord, ObjectWord)> {
    use ObjectWord as O;
    let (u, d) = (Strand::up, Strand::down);
    Ok(match w {
        WebExpr::Id(s) => (O::new([*s]), O::new([*s])),
        WebExpr::Dot(k) => (ups(&[*k]), ups(&[*k])),
        WebExpr::Merge(k, l) => (ups(&[*k, *l]), ups(&[k + l])),
        WebExpr::Split(k, l) => (ups(&[k + l]), ups(&[*k, *l])),
        WebExpr::CupL(k) => (O::unit(), O::new([u(*k), d(*k)])),
        WebExpr::CapL(k) => (O::new([d(*k), u(*k)]), O::unit()),
        WebExpr::RCross(k, l) => (O::new([u(*k), d(*l)]), O::new([d(*l), u(*k)])),
        WebExpr::Compose(top, bottom) => {
            let (bd, bc) = typecheck_at(bottom, &format!("{path}.bottom"))?;
            let (td, tc) = typecheck_at(top, &format!("{path}.top"))?;
            if bc != td {
                // Blame the top operand: it is what fails to fit.
                return Err(Error::Type {
                    path: format!("{path}.top"),
                    msg: format!("cannot compose: bottom has codomain `{bc}` but top has domain `{td}`"),
                });
            }
            (bd, tc)
        }
        WebExpr::Tensor(a, b) => {
            let (ad, ac) = typecheck_at(a, &format!("{path}.left"))?;
            let (bd, bc) = typecheck_at(b, &format!("{path}.right"))?;
            (ad.concat(&bd), ac.concat(&bc))
        }
        WebExpr::Zero(a, b) => (a.clone(), b.clone()),
        WebExpr::Derived(der) => {
            if let Derived::Perm(v) = der {
                Perm::from_images(v).map_err(|e| Error::Type { path: path.into(), msg: e.to_string() })?;
            }
            der.signature()
        }
    })
}

/// Serialises an expression back to DSL text.
pub fn format_dsl(w: &WebExpr) -> String {
    fn go(w: &WebExpr, ctx: u8) -> String {
        // ctx: 0 = expr, 1 = term operand, 2 = factor
        match w {
            WebExpr::Compose(a, b) => {
                let s = format!("{} ; {}", go(a, 0), go(b, 1));
                if ctx >= 1 {
                    format!("({s})")
                } else {
                    s
                }
            }
            WebExpr::Tensor(a, b) => {
                let s = format!("{} * {}", go(a, 1), go(b, 2));
                if ctx >= 2 {
                    format!("({s})")
                } else {
                    s
                }
            }
            WebExpr::Id(s) => format!("id({}{})", s.orient.glyph(), s.thickness),
            WebExpr::Dot(k) => format!("dot({k})"),
            WebExpr::Merge(k, l) => format!("merge({k},{l})"),
            WebExpr::Split(k, l) => format!("split({k},{l})"),
            WebExpr::CupL(k) => format!("cupL({k})"),
            WebExpr::CapL(k) => format!("capL({k})"),
            WebExpr::RCross(k, l) => format!("xr({k},{l})"),
            WebExpr::Zero(a, b) => format!("zero({a},{b})"),
            WebExpr::Derived(d) => {
                let args: Vec<String> = d.args().iter().map(i64::to_string).collect();
                format!("{}({})", d.name(), args.join(","))
            }
        }
    }
    go(w, 0)
}

impl fmt::Display for WebExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_dsl(self))
    }
}

/// JSON form of the AST.
pub fn to_json(w: &WebExpr) -> Value {
    match w {
        WebExpr::Compose(a, b) => json!({"compose": {"top": to_json(a), "bottom": to_json(b)}}),
        WebExpr::Tensor(a, b) => json!({"tensor": [to_json(a), to_json(b)]}),
        WebExpr::Id(s) => json!({"id": {"orient": s.orient, "thickness": s.thickness}}),
        WebExpr::Dot(k) => json!({"dot": [k]}),
        WebExpr::Merge(k, l) => json!({"merge": [k, l]}),
        WebExpr::Split(k, l) => json!({"split": [k, l]}),
        WebExpr::CupL(k) => json!({"cupL": [k]}),
        WebExpr::CapL(k) => json!({"capL": [k]}),
        WebExpr::RCross(k, l) => json!({"xr": [k, l]}),
        WebExpr::Zero(a, b) => json!({"zero": {"domain": a.to_string(), "codomain": b.to_string()}}),
        WebExpr::Derived(d) => json!({ d.name(): d.args() }),
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn expect(&mut self, ch: char) -> std::result::Result<(), ParseError> {
        match self.peek() {
            Some(c) if c == ch => {
                self.pos += c.len_utf8();
                Ok(())
            }
            Some(c) => Err(ParseError::new(self.pos, format!("expected `{ch}`, found `{c}`"))),
            None => Err(ParseError::new(self.pos, format!("expected `{ch}`, found end of input"))),
        }
    }

    fn expr(&mut self) -> std::result::Result<(WebExpr, Span), ParseError> {
        let mut parts = vec![self.term()?];
        while self.peek() == Some(';') {
            self.pos += 1;
            parts.push(self.term()?);
        }
        // a ; b ; c = a ∘ (b ∘ c)
        let mut acc = parts.pop().expect("nonempty");
        while let Some(top) = parts.pop() {
            let span = Span::node(top.1, acc.1);
            acc = (WebExpr::compose(top.0, acc.0), span);
        }
        Ok(acc)
    }

    fn term(&mut self) -> std::result::Result<(WebExpr, Span), ParseError> {
        let mut acc = self.factor()?;
        while self.peek() == Some('*') {
            self.pos += 1;
            let rhs = self.factor()?;
            let span = Span::node(acc.1, rhs.1);
            acc = (WebExpr::tensor(acc.0, rhs.0), span);
        }
        Ok(acc)
    }

    fn ident(&mut self) -> std::result::Result<(usize, String), ParseError> {
        self.skip_ws();
        let start = self.pos;
        while let Some(c) = self.src[self.pos..].chars().next() {
            if c.is_ascii_alphanumeric() {
                self.pos += 1;
            } else {
                break;
            }
        }
        if start == self.pos {
            let found = self.src[self.pos..].chars().next().map(|c| format!("`{c}`")).unwrap_or("end of input".into());
            return Err(ParseError::new(start, format!("expected a generator name, found {found}")));
        }
        Ok((start, self.src[start..self.pos].to_string()))
    }

    fn int(&mut self) -> std::result::Result<i64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while let Some(c) = self.src[self.pos..].chars().next() {
            if c.is_ascii_digit() {
                self.pos += 1;
            } else {
                break;
            }
        }
        self.src[start..self.pos].parse().map_err(|_| ParseError::new(start, "expected a nonnegative integer"))
    }

    fn int_list(&mut self) -> std::result::Result<Vec<i64>, ParseError> {
        let mut out = Vec::new();
        if self.peek() == Some(')') {
            return Ok(out);
        }
        out.push(self.int()?);
        while self.peek() == Some(',') {
            self.pos += 1;
            out.push(self.int()?);
        }
        Ok(out)
    }

    fn word_arg(&mut self) -> std::result::Result<ObjectWord, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while let Some(c) = self.src[self.pos..].chars().next() {
            if c == ',' || c == ')' {
                break;
            }
            self.pos += c.len_utf8();
        }
        ObjectWord::parse(&self.src[start..self.pos]).map_err(|e| ParseError::new(start + e.pos, e.msg))
    }

    fn factor(&mut self) -> std::result::Result<(WebExpr, Span), ParseError> {
        if self.peek() == Some('(') {
            let start = self.pos;
            self.pos += 1;
            let (e, mut span) = self.expr()?;
            self.expect(')')?;
            (span.start, span.end) = (start, self.pos);
            return Ok((e, span));
        }
        self.skip_ws();
        let start = self.pos;
        let e = self.atom()?;
        Ok((e, Span { start, end: self.pos, kids: Vec::new() }))
    }

    fn atom(&mut self) -> std::result::Result<WebExpr, ParseError> {
        let (at, name) = self.ident()?;
        self.expect('(')?;
        if name == "id" {
            let orient = match self.peek() {
                Some('^') => Orient::Up,
                Some('v') => Orient::Down,
                _ => return Err(ParseError::new(self.pos, "expected `^k` or `vk` in id(...)")),
            };
            self.pos += 1;
            let k = self.int()?;
            self.expect(')')?;
            return Ok(WebExpr::Id(Strand { orient, thickness: k }));
        }
        if name == "zero" {
            let a = self.word_arg()?;
            self.expect(',')?;
            let b = self.word_arg()?;
            self.expect(')')?;
            return Ok(WebExpr::Zero(a, b));
        }
        let args_at = self.pos;
        let args = self.int_list()?;
        self.expect(')')?;
        let arity = |n: usize| -> std::result::Result<(), ParseError> {
            if args.len() == n {
                Ok(())
            } else {
                Err(ParseError::new(args_at, format!("`{name}` takes {n} argument(s), got {}", args.len())))
            }
        };
        use Derived as D;
        use WebExpr as W;
        let e = match name.as_str() {
            "dot" => arity(1).map(|_| W::Dot(args[0]))?,
            "merge" => arity(2).map(|_| W::Merge(args[0], args[1]))?,
            "split" => arity(2).map(|_| W::Split(args[0], args[1]))?,
            "cupL" => arity(1).map(|_| W::CupL(args[0]))?,
            "capL" => arity(1).map(|_| W::CapL(args[0]))?,
            "xr" => arity(2).map(|_| W::RCross(args[0], args[1]))?,
            "xup" => arity(2).map(|_| W::Derived(D::XUp(args[0], args[1])))?,
            "xl" => arity(2).map(|_| W::Derived(D::XL(args[0], args[1])))?,
            "xd" => arity(2).map(|_| W::Derived(D::XD(args[0], args[1])))?,
            "cupR" => arity(1).map(|_| W::Derived(D::CupR(args[0])))?,
            "capR" => arity(1).map(|_| W::Derived(D::CapR(args[0])))?,
            "ddot" => arity(1).map(|_| W::Derived(D::DDot(args[0])))?,
            "dmerge" => arity(2).map(|_| W::Derived(D::DMerge(args[0], args[1])))?,
            "dsplit" => arity(2).map(|_| W::Derived(D::DSplit(args[0], args[1])))?,
            "clasp" => arity(1).map(|_| W::Derived(D::Clasp(args[0])))?,
            "rungL" => arity(3).map(|_| W::Derived(D::RungL(args[0], args[1], args[2])))?,
            "rungR" => arity(3).map(|_| W::Derived(D::RungR(args[0], args[1], args[2])))?,
            "perm" => {
                let imgs: Vec<usize> = args.iter().map(|&x| x as usize).collect();
                Perm::from_images(&imgs).map_err(|e| ParseError::new(args_at, e.to_string()))?;
                W::Derived(D::Perm(imgs))
            }
            "explode" => W::Derived(D::Explode(args)),
            "implode" => W::Derived(D::Implode(args)),
            other => return Err(ParseError::new(at, format!("unknown generator `{other}`"))),
        };
        Ok(e)
    }
}

/// Source extent of a parsed sub-expression; `kids` follow the AST children
/// (top then bottom for `;`, left then right for `*`).
#[derive(Clone, Debug)]
struct Span {
    start: usize,
    end: usize,
    kids: Vec<Span>,
}

impl Span {
    fn node(a: Span, b: Span) -> Span {
        Span { start: a.start, end: b.end, kids: vec![a, b] }
    }

    /// Follows a typechecker path such as `root.top.left`.
    fn locate(&self, path: &str) -> &Span {
        let mut cur = self;
        for seg in path.split('.').skip(1) {
            let i = match seg {
                "top" | "left" => 0,
                "bottom" | "right" => 1,
                _ => break,
            };
            match cur.kids.get(i) {
                Some(k) => cur = k,
                None => break,
            }
        }
        cur
    }
}

fn parse_spanned(text: &str) -> std::result::Result<(WebExpr, Span), ParseError> {
    let mut p = Parser { src: text, pos: 0 };
    let e = p.expr()?;
    if let Some(c) = p.peek() {
        return Err(ParseError::new(p.pos, format!("unexpected `{c}`")));
    }
    Ok(e)
}

/// Parses DSL text into an expression (not yet typechecked).
pub fn parse_dsl(text: &str) -> std::result::Result<WebExpr, ParseError> {
    parse_spanned(text).map(|(e, _)| e)
}

/// Parses and typechecks. A type error is reported as a [`ParseError`] whose
/// position is the start of the offending sub-expression; the message quotes
/// that sub-expression and the checker path.
pub fn parse_typed(text: &str) -> Result<(WebExpr, ObjectWord, ObjectWord)> {
    let (e, span) = parse_spanned(text)?;
    match typecheck(&e) {
        Ok((d, c)) => Ok((e, d, c)),
        Err(Error::Type { path, msg }) => {
            let at = span.locate(&path);
            let snippet = text[at.start..at.end].trim();
            Err(Error::Parse(ParseError::new(at.start, format!("type error in `{snippet}`: {msg}"))))
        }
        Err(other) => Err(other),
    }
}

/// Derived and generator builders for the oriented calculus.
pub mod build {
    use super::*;

    pub fn upcross(k: i64, l: i64) -> WebExpr {
        WebExpr::Derived(Derived::XUp(k, l))
    }

    pub fn lcross(k: i64, l: i64) -> WebExpr {
        WebExpr::Derived(Derived::XL(k, l))
    }

    pub fn rcross(k: i64, l: i64) -> WebExpr {
        WebExpr::RCross(k, l)
    }

    pub fn dcross(k: i64, l: i64) -> WebExpr {
        WebExpr::Derived(Derived::XD(k, l))
    }

    pub fn ddot(k: i64) -> WebExpr {
        WebExpr::Derived(Derived::DDot(k))
    }

    pub fn dmerge(k: i64, l: i64) -> WebExpr {
        WebExpr::Derived(Derived::DMerge(k, l))
    }

    pub fn dsplit(k: i64, l: i64) -> WebExpr {
        WebExpr::Derived(Derived::DSplit(k, l))
    }

    pub fn cup_r(k: i64) -> WebExpr {
        WebExpr::Derived(Derived::CupR(k))
    }

    pub fn cap_r(k: i64) -> WebExpr {
        WebExpr::Derived(Derived::CapR(k))
    }

    pub fn clasp(k: i64) -> WebExpr {
        WebExpr::Derived(Derived::Clasp(k))
    }

    pub fn perm(p: &Perm) -> WebExpr {
        WebExpr::Derived(Derived::Perm(p.images()))
    }

    /// σ wired from a chosen reduced word.
    pub fn perm_with(p: &Perm, leftmost: bool) -> WebExpr {
        perm_web(&p.reduced_word(leftmost), p.k())
    }

    pub fn rung_l(k: i64, l: i64, j: i64) -> WebExpr {
        WebExpr::Derived(Derived::RungL(k, l, j))
    }

    pub fn rung_r(k: i64, l: i64, j: i64) -> WebExpr {
        WebExpr::Derived(Derived::RungR(k, l, j))
    }

    /// rungL with a dot on the rung edge.
    pub fn dotted_rung_l(k: i64, l: i64, j: i64) -> WebExpr {
        WebExpr::compose_all([
            WebExpr::tensor(WebExpr::Merge(k, j), WebExpr::id_up(l - j)),
            WebExpr::tensor_all([WebExpr::id_up(k), WebExpr::Dot(j), WebExpr::id_up(l - j)]),
            WebExpr::tensor(WebExpr::id_up(k), WebExpr::Split(j, l - j)),
        ])
    }

    /// rungR with a dot on the rung edge.
    pub fn dotted_rung_r(k: i64, l: i64, j: i64) -> WebExpr {
        WebExpr::compose_all([
            WebExpr::tensor(WebExpr::id_up(k - j), WebExpr::Merge(j, l)),
            WebExpr::tensor_all([WebExpr::id_up(k - j), WebExpr::Dot(j), WebExpr::id_up(l)]),
            WebExpr::tensor(WebExpr::Split(k - j, j), WebExpr::id_up(l)),
        ])
    }

    pub fn explode(a: &[i64]) -> WebExpr {
        WebExpr::Derived(Derived::Explode(a.to_vec()))
    }

    pub fn implode(a: &[i64]) -> WebExpr {
        WebExpr::Derived(Derived::Implode(a.to_vec()))
    }

    pub fn merge_all(k: i64) -> WebExpr {
        super::merge_all(k)
    }

    pub fn split_all(k: i64) -> WebExpr {
        super::split_all(k)
    }

    /// Generators of the ladder images of U̇(q(m)) on ↑_λ.
    #[derive(Clone, Copy, Debug, PartialEq, Eq)]
    pub enum LadderGen {
        /// e_i^{(j)}
        E(usize, i64),
        /// f_i^{(j)}
        F(usize, i64),
        /// e_ī^{(j)}
        EBar(usize, i64),
        /// f_ī^{(j)}
        FBar(usize, i64),
        /// h_ī
        HBar(usize),
    }

    impl LadderGen {
        /// Weight change as a vector in ℤ^m.
        pub fn shift(&self, m: usize) -> Vec<i64> {
            let mut v = vec![0; m];
            match *self {
                LadderGen::E(i, j) | LadderGen::EBar(i, j) => {
                    v[i - 1] += j;
                    v[i] -= j;
                }
                LadderGen::F(i, j) | LadderGen::FBar(i, j) => {
                    v[i - 1] -= j;
                    v[i] += j;
                }
                LadderGen::HBar(_) => {}
            }
            v
        }
    }

    /// The web image of a generator applied to 1_λ, on ↑_λ.
    pub fn pi_generator(gen: LadderGen, lambda: &[i64]) -> Result<WebExpr> {
        let m = lambda.len();
        let check = |i: usize, two: bool| -> Result<()> {
            if i == 0 || i > m || (two && i >= m) {
                return Err(Error::Invalid(format!("generator index {i} out of range for m = {m}")));
            }
            Ok(())
        };
        let (i, local) = match gen {
            LadderGen::E(i, j) => (check(i, true).map(|_| i)?, rung_l(lambda[i - 1], lambda[i], j)),
            LadderGen::F(i, j) => (check(i, true).map(|_| i)?, rung_r(lambda[i - 1], lambda[i], j)),
            LadderGen::EBar(i, j) => (check(i, true).map(|_| i)?, dotted_rung_l(lambda[i - 1], lambda[i], j)),
            LadderGen::FBar(i, j) => (check(i, true).map(|_| i)?, dotted_rung_r(lambda[i - 1], lambda[i], j)),
            LadderGen::HBar(i) => {
                check(i, false)?;
                let parts = (0..m).map(|t| if t + 1 == i { WebExpr::Dot(lambda[t]) } else { WebExpr::id_up(lambda[t]) });
                return Ok(normalize_zero(WebExpr::tensor_all(parts)));
            }
        };
        let parts = (0..m).filter(|&t| t + 1 != i + 1).map(|t| if t + 1 == i { local.clone() } else { WebExpr::id_up(lambda[t]) });
        Ok(normalize_zero(WebExpr::tensor_all(parts)))
    }

    /// Replaces webs touching a negative label by an explicit zero.
    pub fn normalize_zero(w: WebExpr) -> WebExpr {
        match typecheck(&w) {
            Ok((d, c)) if d.is_degenerate() || c.is_degenerate() || has_negative_label(&w) => WebExpr::Zero(d, c),
            _ => w,
        }
    }

    fn has_negative_label(w: &WebExpr) -> bool {
        match w {
            WebExpr::Compose(a, b) | WebExpr::Tensor(a, b) => has_negative_label(a) || has_negative_label(b),
            WebExpr::Zero(..) => false,
            WebExpr::Derived(d) => d.args().iter().any(|&x| x < 0) || d.expand().map(|e| has_negative_label(&e)).unwrap_or(false),
            WebExpr::Id(s) => s.thickness < 0,
            WebExpr::Dot(k) | WebExpr::CupL(k) | WebExpr::CapL(k) => *k < 0,
            WebExpr::Merge(k, l) | WebExpr::Split(k, l) | WebExpr::RCross(k, l) => *k < 0 || *l < 0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_examples() {
        assert_eq!(
            parse_dsl("merge(1,1) ; split(1,1)").unwrap(),
            WebExpr::compose(WebExpr::Merge(1, 1), WebExpr::Split(1, 1))
        );
        assert_eq!(parse_dsl("dot(1) * id(^1)").unwrap(), WebExpr::tensor(WebExpr::Dot(1), WebExpr::id_up(1)));
        assert_eq!(parse_dsl("xl(2,3)").unwrap(), WebExpr::Derived(Derived::XL(2, 3)));
    }

    #[test]
    fn types() {
        assert_eq!(typecheck(&WebExpr::Merge(2, 3)).unwrap(), (ObjectWord::ups(&[2, 3]), ObjectWord::ups(&[5])));
        let ok = WebExpr::compose(WebExpr::Merge(1, 2), WebExpr::Split(1, 2));
        assert_eq!(typecheck(&ok).unwrap(), (ObjectWord::ups(&[3]), ObjectWord::ups(&[3])));
        let bad = WebExpr::compose(WebExpr::Merge(1, 1), WebExpr::Dot(3));
        assert!(matches!(typecheck(&bad), Err(Error::Type { .. })));
        let xl = build::lcross(2, 3);
        let expanded = match &xl {
            WebExpr::Derived(d) => d.expand().unwrap(),
            _ => unreachable!(),
        };
        assert_eq!(typecheck(&expanded).unwrap(), typecheck(&xl).unwrap());
    }

    #[test]
    fn derived_expansions_typecheck() {
        use Derived as D;
        for d in [
            D::XL(2, 1),
            D::XD(1, 2),
            D::CupR(2),
            D::CapR(1),
            D::DDot(2),
            D::DMerge(1, 2),
            D::DSplit(2, 1),
            D::Perm(vec![3, 1, 2]),
            D::RungL(2, 3, 1),
            D::RungR(2, 3, 2),
            D::Explode(vec![2, 1]),
            D::Implode(vec![1, 3]),
        ] {
            let e = d.expand().unwrap();
            assert_eq!(typecheck(&e).unwrap(), d.signature(), "{d:?}");
        }
        for d in [D::XUp(2, 3), D::Clasp(3)] {
            let (_, _, e) = d.weighted().unwrap();
            assert_eq!(typecheck(&e).unwrap(), d.signature(), "{d:?}");
        }
    }

    #[test]
    fn round_trip() {
        for s in ["merge(1,1) ; split(1,1)", "(dot(1) * id(^1)) ; xup(1,1)", "zero(^1v2,)", "id(v2) * (cupL(1) ; id(^0))"] {
            let e = parse_dsl(s).unwrap();
            assert_eq!(parse_dsl(&format_dsl(&e)).unwrap(), e, "{s}");
        }
    }

    #[test]
    fn type_errors_have_positions() {
        let text = "dot(1) * (merge(1,1) ; merge(1,2))";
        match parse_typed(text) {
            Err(Error::Parse(e)) => {
                assert_eq!(e.pos, text.find("merge(1,1)").unwrap());
                assert!(e.msg.contains("cannot compose"), "{}", e.msg);
            }
            other => panic!("expected a positioned type error, got {other:?}"),
        }
        match parse_typed("id(^1) ; perm(1,1)") {
            Err(Error::Parse(_)) => {}
            other => panic!("expected an error, got {other:?}"),
        }
    }

    #[test]
    fn parse_errors_have_positions() {
        let err = parse_dsl("merge(1,1) ; splt(1,1)").unwrap_err();
        assert_eq!(err.pos, 13);
        let err = parse_dsl("merge(1 1)").unwrap_err();
        assert_eq!(err.pos, 8);
    }
}
