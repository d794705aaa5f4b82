//! Free Lie algebras on weighted generators, with the Lyndon-word basis as
//! canonical normal form.
//!
//! Elements are normalized through the tensor algebra: the standard
//! bracketing of a Lyndon word expands to the word itself plus
//! lexicographically greater words, so repeatedly peeling the smallest word
//! of a Lie element's tensor expansion yields its Lyndon coordinates (and
//! certifies along the way that the input was a Lie element at all).

use crate::linalg::Rational;
use num_traits::{One, Zero};
use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use thiserror::Error;

pub type Word = Vec<u16>;
pub type Tensor = BTreeMap<Word, Rational>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LieError {
    #[error("free Lie algebra too large: {count} basis words at weight {weight} (bound {bound})")]
    TooLarge {
        weight: u32,
        count: usize,
        bound: usize,
    },
    #[error("tensor is not a Lie element (leading word {0:?} is not Lyndon)")]
    NotLieElement(String),
    #[error("relation {index} is not weight-homogeneous")]
    InhomogeneousRelation { index: usize },
    #[error("unknown generator index {0}")]
    UnknownGenerator(usize),
    #[error("maximum weight must be at least 1")]
    ZeroWeight,
}

/// Formal bracket expression over generator indices. This is the input
/// syntax for relations; it carries no normal form of its own.
#[derive(Debug, Clone, PartialEq)]
pub enum LieExpr {
    Gen(usize),
    Bracket(Box<LieExpr>, Box<LieExpr>),
    Sum(Vec<(Rational, LieExpr)>),
}

impl LieExpr {
    pub fn gen(i: usize) -> Self {
        LieExpr::Gen(i)
    }

    pub fn br(a: LieExpr, b: LieExpr) -> Self {
        LieExpr::Bracket(Box::new(a), Box::new(b))
    }

    pub fn sum(terms: Vec<(Rational, LieExpr)>) -> Self {
        LieExpr::Sum(terms)
    }

    /// Expansion in the tensor algebra on the generator alphabet.
    pub fn to_tensor(&self) -> Tensor {
        match self {
            LieExpr::Gen(i) => {
                let mut t = Tensor::new();
                t.insert(vec![*i as u16], Rational::one());
                t
            }
            LieExpr::Bracket(a, b) => {
                let ta = a.to_tensor();
                let tb = b.to_tensor();
                let mut out = Tensor::new();
                for (wa, ca) in &ta {
                    for (wb, cb) in &tb {
                        let c = ca * cb;
                        add_word(&mut out, concat(wa, wb), c.clone());
                        add_word(&mut out, concat(wb, wa), -c);
                    }
                }
                out
            }
            LieExpr::Sum(terms) => {
                let mut out = Tensor::new();
                for (coef, e) in terms {
                    for (w, c) in e.to_tensor() {
                        add_word(&mut out, w, coef * &c);
                    }
                }
                out
            }
        }
    }

    /// Largest generator index mentioned, if any.
    pub fn max_gen(&self) -> Option<usize> {
        match self {
            LieExpr::Gen(i) => Some(*i),
            LieExpr::Bracket(a, b) => a.max_gen().max(b.max_gen()),
            LieExpr::Sum(terms) => terms.iter().filter_map(|(_, e)| e.max_gen()).max(),
        }
    }
}

fn concat(a: &[u16], b: &[u16]) -> Word {
    let mut w = Vec::with_capacity(a.len() + b.len());
    w.extend_from_slice(a);
    w.extend_from_slice(b);
    w
}

fn add_word(t: &mut Tensor, w: Word, c: Rational) {
    if c.is_zero() {
        return;
    }
    match t.entry(w) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

/// Substitute letters by linear combinations of letters, extended
/// multiplicatively over words. `subs[i] = None` keeps letter `i`.
pub fn substitute_tensor(t: &Tensor, subs: &[Option<Vec<(u16, Rational)>>]) -> Tensor {
    let mut out = Tensor::new();
    for (w, c) in t {
        // multilinear expansion of the word
        let mut partial: Vec<(Word, Rational)> = vec![(Vec::new(), c.clone())];
        for &letter in w {
            let mut next = Vec::new();
            match &subs[letter as usize] {
                None => {
                    for (pw, pc) in &partial {
                        let mut nw = pw.clone();
                        nw.push(letter);
                        next.push((nw, pc.clone()));
                    }
                }
                Some(combo) => {
                    for (pw, pc) in &partial {
                        for (to, coef) in combo {
                            let mut nw = pw.clone();
                            nw.push(*to);
                            next.push((nw, pc * coef));
                        }
                    }
                }
            }
            partial = next;
        }
        for (w, c) in partial {
            add_word(&mut out, w, c);
        }
    }
    out
}

pub fn is_lyndon(w: &[u16]) -> bool {
    if w.is_empty() {
        return false;
    }
    (1..w.len()).all(|i| w < &w[i..])
}

/// Standard factorization of a Lyndon word of length ≥ 2: the right factor
/// is the lexicographically smallest proper suffix.
fn standard_factorization(w: &[u16]) -> (Word, Word) {
    debug_assert!(w.len() >= 2 && is_lyndon(w));
    let mut best = 1;
    for i in 2..w.len() {
        if w[i..] < w[best..] {
            best = i;
        }
    }
    (w[..best].to_vec(), w[best..].to_vec())
}

/// Element of a free Lie algebra in Lyndon coordinates: a finite rational
/// combination of Lyndon words, each standing for its standard bracketing.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LieElement {
    pub terms: BTreeMap<Word, Rational>,
}

impl LieElement {
    pub fn zero() -> Self {
        LieElement::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_scaled(&mut self, other: &LieElement, coef: &Rational) {
        for (w, c) in &other.terms {
            let entry = self.terms.entry(w.clone()).or_insert_with(Rational::zero);
            *entry += coef * c;
            if entry.is_zero() {
                self.terms.remove(w);
            }
        }
    }
}

/// Context for a free Lie algebra: weighted alphabet, the Lyndon basis up to
/// a weight bound, and a memoized tensor expansion of basis words.
pub struct FreeLie {
    pub labels: Vec<String>,
    pub weights: Vec<u32>,
    pub max_weight: u32,
    words_by_weight: Vec<Vec<Word>>,
    index_by_weight: Vec<HashMap<Word, usize>>,
    expansion: RefCell<HashMap<Word, std::rc::Rc<Tensor>>>,
}

/// Basis-size guard; desk-scale computations stay far below this.
pub const MAX_BASIS_WORDS: usize = 100_000;

impl FreeLie {
    pub fn new(labels: Vec<String>, weights: Vec<u32>, max_weight: u32) -> Result<Self, LieError> {
        if max_weight == 0 {
            return Err(LieError::ZeroWeight);
        }
        assert_eq!(labels.len(), weights.len());
        assert!(weights.iter().all(|&w| w >= 1), "generator weights must be positive");
        let k = labels.len();
        let mut words_by_weight: Vec<Vec<Word>> = vec![Vec::new(); max_weight as usize + 1];
        if k > 0 {
            // Duval's algorithm, filtered by total weight
            let maxlen = max_weight as usize; // weights ≥ 1
            let mut w: Word = vec![0];
            loop {
                let wt: u32 = w.iter().map(|&l| weights[l as usize]).sum();
                if wt <= max_weight {
                    words_by_weight[wt as usize].push(w.clone());
                }
                // next Lyndon word
                let mut t: Word = (0..maxlen).map(|i| w[i % w.len()]).collect();
                while t.last() == Some(&((k - 1) as u16)) {
                    t.pop();
                }
                match t.last_mut() {
                    None => break,
                    Some(last) => *last += 1,
                }
                w = t;
            }
        }
        for (wt, words) in words_by_weight.iter().enumerate() {
            if words.len() > MAX_BASIS_WORDS {
                return Err(LieError::TooLarge {
                    weight: wt as u32,
                    count: words.len(),
                    bound: MAX_BASIS_WORDS,
                });
            }
        }
        let index_by_weight = words_by_weight
            .iter()
            .map(|ws| {
                ws.iter()
                    .enumerate()
                    .map(|(i, w)| (w.clone(), i))
                    .collect()
            })
            .collect();
        Ok(FreeLie {
            labels,
            weights,
            max_weight,
            words_by_weight,
            index_by_weight,
            expansion: RefCell::new(HashMap::new()),
        })
    }

    pub fn gen_count(&self) -> usize {
        self.labels.len()
    }

    pub fn word_weight(&self, w: &[u16]) -> u32 {
        w.iter().map(|&l| self.weights[l as usize]).sum()
    }

    /// Lyndon words of the given weight, lexicographically ordered.
    pub fn basis_words(&self, weight: u32) -> &[Word] {
        &self.words_by_weight[weight as usize]
    }

    pub fn basis_dim(&self, weight: u32) -> usize {
        self.words_by_weight[weight as usize].len()
    }

    fn expand_word(&self, w: &[u16]) -> std::rc::Rc<Tensor> {
        if let Some(t) = self.expansion.borrow().get(w) {
            return t.clone();
        }
        let t = if w.len() == 1 {
            let mut t = Tensor::new();
            t.insert(w.to_vec(), Rational::one());
            t
        } else {
            let (u, v) = standard_factorization(w);
            let tu = self.expand_word(&u);
            let tv = self.expand_word(&v);
            let mut out = Tensor::new();
            for (wu, cu) in tu.iter() {
                for (wv, cv) in tv.iter() {
                    let c = cu * cv;
                    add_word(&mut out, concat(wu, wv), c.clone());
                    add_word(&mut out, concat(wv, wu), -c);
                }
            }
            out
        };
        let rc = std::rc::Rc::new(t);
        self.expansion.borrow_mut().insert(w.to_vec(), rc.clone());
        rc
    }

    /// Tensor expansion of an element.
    pub fn to_tensor(&self, e: &LieElement) -> Tensor {
        let mut out = Tensor::new();
        for (w, c) in &e.terms {
            for (tw, tc) in self.expand_word(w).iter() {
                add_word(&mut out, tw.clone(), c * tc);
            }
        }
        out
    }

    /// Writes a tensor-algebra element in Lyndon coordinates. Fails when the
    /// input is not a Lie element.
    pub fn lyndonize(&self, mut t: Tensor) -> Result<LieElement, LieError> {
        let mut out = LieElement::zero();
        while let Some((w, _)) = t.iter().next() {
            let w = w.clone();
            if !is_lyndon(&w) {
                return Err(LieError::NotLieElement(format!("{w:?}")));
            }
            let c = t.get(&w).unwrap().clone();
            for (tw, tc) in self.expand_word(&w).iter() {
                add_word(&mut t, tw.clone(), -(&c * tc));
            }
            out.terms.insert(w, c);
        }
        Ok(out)
    }

    pub fn generator(&self, i: usize) -> LieElement {
        let mut e = LieElement::zero();
        e.terms.insert(vec![i as u16], Rational::one());
        e
    }

    pub fn from_expr(&self, expr: &LieExpr) -> Result<LieElement, LieError> {
        if let Some(max) = expr.max_gen() {
            if max >= self.gen_count() {
                return Err(LieError::UnknownGenerator(max));
            }
        }
        self.lyndonize(expr.to_tensor())
    }

    pub fn bracket(&self, a: &LieElement, b: &LieElement) -> Result<LieElement, LieError> {
        let ta = self.to_tensor(a);
        let tb = self.to_tensor(b);
        let mut out = Tensor::new();
        for (wa, ca) in &ta {
            for (wb, cb) in &tb {
                let c = ca * cb;
                add_word(&mut out, concat(wa, wb), c.clone());
                add_word(&mut out, concat(wb, wa), -c);
            }
        }
        self.lyndonize(out)
    }

    /// Bracket of a single generator with an element; the workhorse of ideal
    /// spans.
    pub fn bracket_gen(&self, gen: usize, e: &LieElement) -> Result<LieElement, LieError> {
        self.bracket(&self.generator(gen), e)
    }

    /// Sparse coordinates of a weight-homogeneous element in the Lyndon word
    /// basis of the given weight.
    pub fn coordinates(&self, e: &LieElement, weight: u32) -> Vec<(usize, Rational)> {
        let index = &self.index_by_weight[weight as usize];
        let mut out: Vec<(usize, Rational)> = e
            .terms
            .iter()
            .map(|(w, c)| {
                debug_assert_eq!(self.word_weight(w), weight);
                (index[w], c.clone())
            })
            .collect();
        out.sort_by_key(|(i, _)| *i);
        out
    }

    /// Weight of a homogeneous element, or `None` for 0 or mixed weights.
    pub fn element_weight(&self, e: &LieElement) -> Option<u32> {
        let mut it = e.terms.keys().map(|w| self.word_weight(w));
        let first = it.next()?;
        it.all(|w| w == first).then_some(first)
    }

    /// Renders an element with bracketed Lyndon monomials, for reports.
    pub fn format_element(&self, e: &LieElement) -> String {
        if e.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (w, c) in &e.terms {
            let mono = self.format_word(w);
            if c.is_one() {
                parts.push(mono);
            } else if (-c.clone()).is_one() {
                parts.push(format!("-{mono}"));
            } else {
                parts.push(format!("{c}·{mono}"));
            }
        }
        parts.join(" + ").replace("+ -", "- ")
    }

    fn format_word(&self, w: &[u16]) -> String {
        if w.len() == 1 {
            return self.labels[w[0] as usize].clone();
        }
        let (u, v) = standard_factorization(w);
        format!("[{},{}]", self.format_word(&u), self.format_word(&v))
    }
}

/// Incremental sparse row echelon over an arbitrary coordinate index space;
/// used for ideal spans and rank counting in weight-graded pieces.
#[derive(Debug, Default)]
pub struct SpanBuilder {
    pivots: BTreeMap<usize, Vec<(usize, Rational)>>,
}

impl SpanBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Reduces `row` against the current pivots; the remainder has either
    /// empty support or a leading index no pivot owns.
    pub fn reduce(&self, mut row: Vec<(usize, Rational)>) -> Vec<(usize, Rational)> {
        loop {
            let Some(&(lead, ref lc)) = row.first() else {
                return row;
            };
            let Some(pivot) = self.pivots.get(&lead) else {
                return row;
            };
            let factor = lc.clone(); // pivot rows are normalized to lead 1
            row = sub_scaled(&row, pivot, &factor);
        }
    }

    /// Returns `true` when the row was independent and the rank grew.
    pub fn insert(&mut self, row: Vec<(usize, Rational)>) -> bool {
        let row = self.reduce(row);
        let Some((lead, lc)) = row.first().cloned() else {
            return false;
        };
        let inv = lc.recip();
        let normalized: Vec<(usize, Rational)> =
            row.into_iter().map(|(i, c)| (i, c * &inv)).collect();
        self.pivots.insert(lead, normalized);
        true
    }

    pub fn contains(&self, row: Vec<(usize, Rational)>) -> bool {
        self.reduce(row).is_empty()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn rows(&self) -> impl Iterator<Item = &Vec<(usize, Rational)>> {
        self.pivots.values()
    }
}

fn sub_scaled(
    a: &[(usize, Rational)],
    b: &[(usize, Rational)],
    factor: &Rational,
) -> Vec<(usize, Rational)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        match (a.get(i), b.get(j)) {
            (Some(&(ia, ref ca)), Some(&(ib, ref cb))) if ia == ib => {
                let c = ca - factor * cb;
                if !c.is_zero() {
                    out.push((ia, c));
                }
                i += 1;
                j += 1;
            }
            (Some(&(ia, ref ca)), Some(&(ib, _))) if ia < ib => {
                out.push((ia, ca.clone()));
                i += 1;
            }
            (Some(_), Some(&(ib, ref cb))) => {
                let c = -(factor * cb);
                if !c.is_zero() {
                    out.push((ib, c));
                }
                j += 1;
            }
            (Some(&(ia, ref ca)), None) => {
                out.push((ia, ca.clone()));
                i += 1;
            }
            (None, Some(&(ib, ref cb))) => {
                let c = -(factor * cb);
                if !c.is_zero() {
                    out.push((ib, c));
                }
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}
