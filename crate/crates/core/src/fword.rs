//! Words in divided powers of the lowering generators.
//!
//! `FWord([(i1,a1),...,(ik,ak)])` denotes `F_{i1}^{(a1)} ⋯ F_{ik}^{(ak)}`
//! applied to a highest-weight vector. Words are kept normalized: adjacent
//! factors carry distinct indices (`F_i^{(a)} F_i^{(b)} = C(a+b,a) F_i^{(a+b)}`).

use std::collections::BTreeMap;

use num::Zero;

use crate::linalg::{binom, Q, Z};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FWord(pub Vec<(usize, u32)>);

impl FWord {
    pub fn empty() -> Self {
        FWord(Vec::new())
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn content(&self, rank: usize) -> Vec<i64> {
        let mut m = vec![0i64; rank];
        for &(i, a) in &self.0 {
            m[i] += a as i64;
        }
        m
    }

    pub fn total(&self) -> i64 {
        self.0.iter().map(|&(_, a)| a as i64).sum()
    }

    /// Prepend `F_i^{(a)}`; merging with an equal-index head contributes a
    /// binomial factor, which is returned.
    pub fn prepended(&self, i: usize, a: u32) -> (FWord, Z) {
        if a == 0 {
            return (self.clone(), Z::from(1));
        }
        let mut v = self.0.clone();
        if let Some(&(j, b)) = v.first() {
            if j == i {
                v[0] = (i, a + b);
                let c = binom((a + b) as i64, a);
                return (FWord(v), c);
            }
        }
        v.insert(0, (i, a));
        (FWord(v), Z::from(1))
    }

    /// Concatenate `self · other` with boundary merge; returns the binomial
    /// factor produced by the merge (if any).
    pub fn concat(&self, other: &FWord) -> (FWord, Z) {
        let mut coeff = Z::from(1);
        let mut out = self.0.clone();
        for &(i, a) in &other.0 {
            if let Some(last) = out.last_mut() {
                if last.0 == i {
                    coeff *= binom((last.1 + a) as i64, a);
                    last.1 += a;
                    continue;
                }
            }
            out.push((i, a));
        }
        (FWord(out), coeff)
    }

    pub fn display(&self, labels: &[String]) -> String {
        if self.0.is_empty() {
            return "1".to_string();
        }
        self.0
            .iter()
            .map(|&(i, a)| {
                if a == 1 {
                    format!("F{}", labels[i])
                } else {
                    format!("F{}^({})", labels[i], a)
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }
}

/// Finite rational linear combination of F-words.
pub type WordVec = BTreeMap<FWord, Q>;

pub fn wv_add_scaled(dst: &mut WordVec, w: FWord, c: Q) {
    if c.is_zero() {
        return;
    }
    let e = dst.entry(w).or_insert_with(Q::zero);
    *e += c;
    if e.is_zero() {
        let key = dst
            .iter()
            .find(|(_, v)| v.is_zero())
            .map(|(k, _)| k.clone());
        if let Some(k) = key {
            dst.remove(&k);
        }
    }
}

/// Coproduct of a word: `Δ(F_i^{(a)}) = Σ_k F_i^{(k)} ⊗ F_i^{(a−k)}`,
/// extended multiplicatively. Coefficients are the boundary-merge binomials
/// (integers).
pub fn coproduct(w: &FWord) -> BTreeMap<(FWord, FWord), Z> {
    let mut acc: BTreeMap<(FWord, FWord), Z> = BTreeMap::new();
    acc.insert((FWord::empty(), FWord::empty()), Z::from(1));
    for &(i, a) in &w.0 {
        let mut next: BTreeMap<(FWord, FWord), Z> = BTreeMap::new();
        for ((left, right), c) in &acc {
            for k in 0..=a {
                let (l2, cl) = left.concat(&FWord(if k > 0 { vec![(i, k)] } else { vec![] }));
                let (r2, cr) = right.concat(&FWord(if a - k > 0 {
                    vec![(i, a - k)]
                } else {
                    vec![]
                }));
                let coeff = c * cl * cr;
                let e = next.entry((l2, r2)).or_insert_with(Z::zero);
                *e += coeff;
            }
        }
        acc = next;
    }
    acc.retain(|_, c| !c.is_zero());
    acc
}

/// All normalized words of the given content, in deterministic order.
pub fn words_of_content(m: &[i64]) -> Vec<FWord> {
    let mut out = Vec::new();
    let mut cur: Vec<(usize, u32)> = Vec::new();
    fn rec(
        m: &mut Vec<i64>,
        last: Option<usize>,
        cur: &mut Vec<(usize, u32)>,
        out: &mut Vec<FWord>,
    ) {
        if m.iter().all(|&x| x == 0) {
            out.push(FWord(cur.clone()));
            return;
        }
        for i in 0..m.len() {
            if Some(i) == last || m[i] == 0 {
                continue;
            }
            for a in 1..=m[i] {
                m[i] -= a;
                cur.push((i, a as u32));
                rec(m, Some(i), cur, out);
                cur.pop();
                m[i] += a;
            }
        }
    }
    let mut mv = m.to_vec();
    rec(&mut mv, None, &mut cur, &mut out);
    out.sort();
    out
}
