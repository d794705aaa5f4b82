//! Independent brute-force oracle for graded ranks of presented Lie
//! algebras.
//!
//! The route is deliberately different from the engine's: relations are
//! expanded in the tensor algebra, the two-sided ideal they generate is
//! spanned weight by weight, the graded dimensions of the quotient
//! associative algebra are read off, and the Lie ranks are recovered from
//! the Poincaré–Birkhoff–Witt factorization
//! `Σ dim U_k t^k = Π_j (1 − t^j)^{−l_j}`.

use num_traits::{One, Zero};
use std::collections::{BTreeMap, HashMap};

pub type Q = num_rational::BigRational;

fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}

/// Bracket syntax tree over generator indices.
#[derive(Clone)]
pub enum T {
    G(usize),
    B(Box<T>, Box<T>),
    S(Vec<(i64, T)>),
}

pub fn g(i: usize) -> T {
    T::G(i)
}

pub fn b(x: T, y: T) -> T {
    T::B(Box::new(x), Box::new(y))
}

pub fn s(terms: Vec<(i64, T)>) -> T {
    T::S(terms)
}

type Word = Vec<usize>;

fn expand(t: &T) -> BTreeMap<Word, Q> {
    match t {
        T::G(i) => BTreeMap::from([(vec![*i], q(1))]),
        T::B(x, y) => {
            let ex = expand(x);
            let ey = expand(y);
            let mut out: BTreeMap<Word, Q> = BTreeMap::new();
            for (wx, cx) in &ex {
                for (wy, cy) in &ey {
                    let mut fwd = wx.clone();
                    fwd.extend(wy);
                    let mut rev = wy.clone();
                    rev.extend(wx);
                    let c = cx * cy;
                    *out.entry(fwd).or_insert_with(Q::zero) += &c;
                    *out.entry(rev).or_insert_with(Q::zero) -= &c;
                }
            }
            out.retain(|_, c| !c.is_zero());
            out
        }
        T::S(terms) => {
            let mut out: BTreeMap<Word, Q> = BTreeMap::new();
            for (coef, sub) in terms {
                for (w, c) in expand(sub) {
                    *out.entry(w).or_insert_with(Q::zero) += q(*coef) * c;
                }
            }
            out.retain(|_, c| !c.is_zero());
            out
        }
    }
}

/// Minimal sparse echelon form over ℚ, indexed by word position.
#[derive(Default)]
struct Echelon {
    pivots: BTreeMap<usize, Vec<(usize, Q)>>,
}

impl Echelon {
    fn insert(&mut self, mut row: Vec<(usize, Q)>) -> bool {
        loop {
            let Some(&(lead, ref lc)) = row.first() else {
                return false;
            };
            match self.pivots.get(&lead) {
                None => {
                    let inv = lc.recip();
                    let norm: Vec<(usize, Q)> =
                        row.into_iter().map(|(i, c)| (i, c * &inv)).collect();
                    self.pivots.insert(lead, norm);
                    return true;
                }
                Some(p) => {
                    let f = lc.clone();
                    let mut merged: Vec<(usize, Q)> = Vec::new();
                    let (mut i, mut j) = (0, 0);
                    while i < row.len() || j < p.len() {
                        match (row.get(i), p.get(j)) {
                            (Some(&(ia, ref ca)), Some(&(ib, ref cb))) if ia == ib => {
                                let c = ca - &f * cb;
                                if !c.is_zero() {
                                    merged.push((ia, c));
                                }
                                i += 1;
                                j += 1;
                            }
                            (Some(&(ia, ref ca)), Some(&(ib, _))) if ia < ib => {
                                merged.push((ia, ca.clone()));
                                i += 1;
                            }
                            (Some(_), Some(&(ib, ref cb))) => {
                                merged.push((ib, -(&f * cb)));
                                j += 1;
                            }
                            (Some(&(ia, ref ca)), None) => {
                                merged.push((ia, ca.clone()));
                                i += 1;
                            }
                            (None, Some(&(ib, ref cb))) => {
                                merged.push((ib, -(&f * cb)));
                                j += 1;
                            }
                            (None, None) => unreachable!(),
                        }
                    }
                    row = merged;
                }
            }
        }
    }

    fn rank(&self) -> usize {
        self.pivots.len()
    }

    fn rows(&self) -> Vec<Vec<(usize, Q)>> {
        self.pivots.values().cloned().collect()
    }
}

/// Graded ranks `l_1..l_max` of the Lie algebra presented by weighted
/// generators and relations, via the enveloping algebra.
pub fn oracle_ranks(weights: &[u32], relations: &[T], max_weight: u32) -> Vec<i64> {
    let ngen = weights.len();
    // words of each weight, in generation order
    let mut words_by_weight: Vec<Vec<Word>> = vec![Vec::new(); max_weight as usize + 1];
    words_by_weight[0].push(Vec::new());
    for k in 1..=max_weight {
        let mut ws = Vec::new();
        for gidx in 0..ngen {
            let wg = weights[gidx];
            if wg > k {
                continue;
            }
            for prev in &words_by_weight[(k - wg) as usize] {
                let mut w = vec![gidx];
                w.extend(prev);
                ws.push(w);
            }
        }
        words_by_weight[k as usize] = ws;
    }
    let index: Vec<HashMap<Word, usize>> = words_by_weight
        .iter()
        .map(|ws| ws.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect())
        .collect();
    let wt_of = |w: &Word| -> u32 { w.iter().map(|&l| weights[l]).sum() };

    // expand relations, bucket by weight
    let mut rel_by_weight: Vec<Vec<BTreeMap<Word, Q>>> =
        vec![Vec::new(); max_weight as usize + 1];
    for rel in relations {
        let t = expand(rel);
        if t.is_empty() {
            continue;
        }
        let wt = wt_of(t.keys().next().unwrap());
        assert!(
            t.keys().all(|w| wt_of(w) == wt),
            "oracle relations must be weight-homogeneous"
        );
        if wt <= max_weight {
            rel_by_weight[wt as usize].push(t);
        }
    }

    // two-sided ideal, weight by weight
    let mut ideal: Vec<Echelon> = Vec::new();
    ideal.resize_with(max_weight as usize + 1, Echelon::default);
    let mut u_dims = vec![0i64; max_weight as usize + 1];
    u_dims[0] = 1;
    for k in 1..=max_weight {
        let mut rows: Vec<Vec<(usize, Q)>> = Vec::new();
        let to_row = |t: &BTreeMap<Word, Q>| -> Vec<(usize, Q)> {
            let mut r: Vec<(usize, Q)> = t
                .iter()
                .map(|(w, c)| (index[k as usize][w], c.clone()))
                .collect();
            r.sort_by_key(|(i, _)| *i);
            r
        };
        for t in &rel_by_weight[k as usize] {
            rows.push(to_row(t));
        }
        for gidx in 0..ngen {
            let wg = weights[gidx];
            if wg >= k {
                continue;
            }
            for row in ideal[(k - wg) as usize].rows() {
                // left and right multiplication by the generator
                let mut left = Vec::new();
                let mut right = Vec::new();
                for (i, c) in &row {
                    let w = &words_by_weight[(k - wg) as usize][*i];
                    let mut lw = vec![gidx];
                    lw.extend(w);
                    let mut rw = w.clone();
                    rw.push(gidx);
                    left.push((index[k as usize][&lw], c.clone()));
                    right.push((index[k as usize][&rw], c.clone()));
                }
                left.sort_by_key(|(i, _)| *i);
                right.sort_by_key(|(i, _)| *i);
                rows.push(left);
                rows.push(right);
            }
        }
        for row in rows {
            ideal[k as usize].insert(row);
        }
        u_dims[k as usize] =
            words_by_weight[k as usize].len() as i64 - ideal[k as usize].rank() as i64;
    }

    // PBW: peel l_k from the series product
    let d = max_weight as usize;
    let mut l = vec![0i64; d + 1];
    let mut prod = vec![Q::zero(); d + 1];
    prod[0] = Q::one();
    for k in 1..=d {
        let coeff_k = prod[k].clone();
        let lk = q(u_dims[k]) - coeff_k;
        assert!(lk.denom().eq(&1.into()));
        use num_traits::ToPrimitive;
        l[k] = lk.numer().to_i64().unwrap();
        if l[k] != 0 {
            // multiply the running product by (1 − t^k)^{−l_k}
            let m = l[k];
            let mut coefs: Vec<Q> = Vec::new();
            let mut r = 0usize;
            while k * r <= d {
                // C(m + r − 1, r)
                let mut c = Q::one();
                for t in 0..r {
                    c *= q(m + t as i64) / q(t as i64 + 1);
                }
                coefs.push(c);
                r += 1;
            }
            let mut next = vec![Q::zero(); d + 1];
            for a in 0..=d {
                if prod[a].is_zero() {
                    continue;
                }
                for (r, cf) in coefs.iter().enumerate() {
                    if a + k * r <= d {
                        next[a + k * r] += &prod[a] * cf;
                    }
                }
            }
            prod = next;
        }
    }
    l[1..=d].to_vec()
}
