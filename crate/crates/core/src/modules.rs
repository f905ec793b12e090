//! Integrable highest-weight modules realized on divided-power F-words via
//! the contravariant form: the form's radical is the maximal submodule, so
//! Gram ranks compute weight-space dimensions and reduction against a pivot
//! word basis gives exact coordinates.

use std::collections::HashMap;

use num::{One, Zero};

use crate::chars::char_l;
use crate::error::{KmError, Result};
use crate::fword::{words_of_content, wv_add_scaled, FWord, WordVec};
use crate::gcm::{Gcm, Weight};
use crate::linalg::{binom, invert, rank, rref, Q, Z};
use crate::weyl::WeylElement;

/// Contravariant form `⟨u v_λ, v v_λ⟩` (ω swaps E and F, ⟨v_λ,v_λ⟩ = 1).
pub fn contravariant_pair(gcm: &Gcm, lambda: &[i64], u: &FWord, v: &FWord) -> Result<Q> {
    let mut m = Module::new(gcm.clone(), lambda.to_vec())?;
    Ok(m.pair(u, v))
}

/// Exact vector in the word model of `L(λ)` at a fixed content.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleVector {
    pub content: Vec<i64>,
    pub coords: WordVec,
}

impl ModuleVector {
    pub fn zero(content: Vec<i64>) -> Self {
        ModuleVector {
            content,
            coords: WordVec::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }
}

/// Change of basis from the pivot words onto the Hermite normal form basis
/// of the integral word lattice: `b_r = Σ_j h[r][j] · pivot_j`, and pivot
/// coordinates x rebase to `y = t · x` with `t = (hᵀ)⁻¹`.
pub struct Rebase {
    pub h: Vec<Vec<Q>>,
    t: Vec<Vec<Q>>,
}

/// Basis data of one weight space: pivot words modulo the form radical and
/// the inverse pivot Gram matrix used for reduction.
pub struct WeightBasis {
    pub dim: usize,
    pub pivots: Vec<FWord>,
    pub word_count: usize,
    gram_pivots_inv: Vec<Vec<Q>>,
    /// Present in integral mode: coordinates refer to the HNF lattice basis.
    pub rebase: Option<Rebase>,
}

/// Cached computation context for one `(GCM, λ)`.
pub struct Module {
    gcm: Gcm,
    lambda: Vec<i64>,
    /// Known dimensions from the character oracle; enables the Gram-rank
    /// cutoff when building bases. Valid only up to `oracle_depth`.
    dim_oracle: Option<std::collections::BTreeMap<Vec<i64>, usize>>,
    oracle_depth: usize,
    /// Rebase every weight space onto the HNF basis of its word lattice,
    /// making all word coordinates integral (used by the char-p pipeline).
    integral: bool,
    bases: std::collections::BTreeMap<Vec<i64>, WeightBasis>,
    e_memo: HashMap<(usize, u32, FWord), WordVec>,
    pair_memo: HashMap<(FWord, FWord), Q>,
}

impl Module {
    /// Full-rank mode: every weight basis is computed from the complete
    /// Gram matrix over all words (the independent dimension oracle).
    pub fn new(gcm: Gcm, lambda: Vec<i64>) -> Result<Self> {
        for (i, &v) in lambda.iter().enumerate() {
            if v < 0 {
                return Err(KmError::NotDominant { index: i, value: v });
            }
        }
        Ok(Module {
            gcm,
            lambda,
            dim_oracle: None,
            oracle_depth: 0,
            integral: false,
            bases: Default::default(),
            e_memo: HashMap::new(),
            pair_memo: HashMap::new(),
        })
    }

    /// Basis construction stops once the Gram rank saturates the dimension
    /// known from the Demazure character, valid up to `oracle_depth`.
    pub fn with_char_oracle(gcm: Gcm, lambda: Vec<i64>, oracle_depth: usize) -> Result<Self> {
        let mut m = Module::new(gcm, lambda)?;
        let chi = char_l(&m.gcm, &m.lambda, oracle_depth)?;
        let mut dims = std::collections::BTreeMap::new();
        for (k, &c) in chi.terms() {
            dims.insert(k.clone(), c as usize);
        }
        m.dim_oracle = Some(dims);
        m.oracle_depth = oracle_depth;
        Ok(m)
    }

    /// Char-oracle mode with the integral (HNF word lattice) basis per
    /// weight space.
    pub fn integral_with_char_oracle(
        gcm: Gcm,
        lambda: Vec<i64>,
        oracle_depth: usize,
    ) -> Result<Self> {
        let mut m = Module::with_char_oracle(gcm, lambda, oracle_depth)?;
        m.integral = true;
        Ok(m)
    }

    pub fn gcm(&self) -> &Gcm {
        &self.gcm
    }

    pub fn lambda(&self) -> &[i64] {
        &self.lambda
    }

    fn rank(&self) -> usize {
        self.gcm.rank()
    }

    /// `⟨α_i^∨, λ − Σ content_j α_j⟩`.
    fn pairing_at(&self, i: usize, content: &[i64]) -> i64 {
        let w = Weight::new(self.lambda.clone(), content.to_vec());
        crate::gcm::pairing(&self.gcm, i, &w)
    }

    /// `E_i^{(a)} · (w v_λ)` as a combination of words, exact in the Verma
    /// module (and hence in every quotient).
    pub fn apply_e_word(&mut self, i: usize, a: u32, w: &FWord) -> WordVec {
        if a == 0 {
            let mut out = WordVec::new();
            out.insert(w.clone(), Q::one());
            return out;
        }
        if w.is_empty() {
            return WordVec::new();
        }
        let key = (i, a, w.clone());
        if let Some(hit) = self.e_memo.get(&key) {
            return hit.clone();
        }
        let (j, b) = w.0[0];
        let rest = FWord(w.0[1..].to_vec());
        let mut out = WordVec::new();
        if i != j {
            let sub = self.apply_e_word(i, a, &rest);
            for (w2, c) in sub {
                let (w3, mc) = w2.prepended(j, b);
                wv_add_scaled(&mut out, w3, c * Q::from_integer(mc));
            }
        } else {
            // E^{(a)} F^{(b)} = Σ_k F^{(b−k)} C(H − a − b + 2k; k) E^{(a−k)};
            // on a vector of i-eigenvalue n the Cartan factor is C(n+a−b, k).
            let n = self.pairing_at(i, &rest.content(self.rank()));
            for k in 0..=a.min(b) {
                let c = binom(n + a as i64 - b as i64, k);
                if c.is_zero() {
                    continue;
                }
                let sub = self.apply_e_word(i, a - k, &rest);
                for (w2, cw) in sub {
                    let (w3, mc) = if b - k > 0 {
                        w2.prepended(i, b - k)
                    } else {
                        (w2, Z::one())
                    };
                    wv_add_scaled(&mut out, w3, cw * Q::from_integer(&c * mc));
                }
            }
        }
        self.e_memo.insert(key, out.clone());
        out
    }

    pub fn apply_e_vec(&mut self, i: usize, a: u32, v: &WordVec) -> WordVec {
        let mut out = WordVec::new();
        for (w, c) in v {
            for (w2, c2) in self.apply_e_word(i, a, w) {
                wv_add_scaled(&mut out, w2, c2 * c.clone());
            }
        }
        out
    }

    /// `F_i^{(a)}` acts by left multiplication.
    pub fn apply_f_vec(i: usize, a: u32, v: &WordVec) -> WordVec {
        let mut out = WordVec::new();
        for (w, c) in v {
            let (w2, mc) = w.prepended(i, a);
            wv_add_scaled(&mut out, w2, c.clone() * Q::from_integer(mc));
        }
        out
    }

    /// Contravariant form `⟨u v_λ, v v_λ⟩` with `⟨v_λ, v_λ⟩ = 1`.
    pub fn pair(&mut self, u: &FWord, v: &FWord) -> Q {
        if u.content(self.rank()) != v.content(self.rank()) {
            return Q::zero();
        }
        if u.is_empty() {
            return Q::one();
        }
        let key = if u <= v {
            (u.clone(), v.clone())
        } else {
            (v.clone(), u.clone())
        };
        if let Some(hit) = self.pair_memo.get(&key) {
            return hit.clone();
        }
        let (i, a) = u.0[0];
        let rest = FWord(u.0[1..].to_vec());
        let ev = self.apply_e_word(i, a, v);
        let mut acc = Q::zero();
        for (w, c) in ev {
            if w.content(self.rank()) == rest.content(self.rank()) {
                acc += c * self.pair(&rest, &w);
            }
        }
        self.pair_memo.insert(key, acc.clone());
        acc
    }

    pub fn pair_vec(&mut self, u: &FWord, v: &WordVec) -> Q {
        let mut acc = Q::zero();
        for (w, c) in v {
            acc += c.clone() * self.pair(u, w);
        }
        acc
    }

    fn build_basis(&mut self, m: &[i64]) -> WeightBasis {
        let words = words_of_content(m);
        let word_count = words.len();
        // The oracle only covers weights within its depth; beyond it we fall
        // back to the full Gram computation.
        let in_window = m.iter().all(|&x| x >= 0)
            && m.iter().sum::<i64>() <= self.oracle_depth as i64;
        let target = self.dim_oracle.as_ref().and_then(|o| {
            if in_window {
                Some(o.get(m).copied().unwrap_or(0))
            } else {
                None
            }
        });
        if let Some(target) = target {
            if let Some(basis) = self.build_basis_cutoff(&words, target, word_count) {
                return basis;
            }
        }
        self.build_basis_full(&words, word_count)
    }

    /// Greedy collection of words whose mutual Gram matrix stays invertible,
    /// stopping at the known dimension.
    fn build_basis_cutoff(
        &mut self,
        words: &[FWord],
        target: usize,
        word_count: usize,
    ) -> Option<WeightBasis> {
        let mut kept: Vec<FWord> = Vec::new();
        let mut gram: Vec<Vec<Q>> = Vec::new();
        for w in words {
            if kept.len() == target {
                break;
            }
            let mut row: Vec<Q> = kept.iter().map(|k| self.pair(k, w)).collect();
            row.push(self.pair(w, w));
            let mut cand = gram.clone();
            for (r, g) in cand.iter_mut().enumerate() {
                g.push(row[r].clone());
            }
            cand.push(row.clone());
            if rank(cand.clone()) == kept.len() + 1 {
                for (r, g) in gram.iter_mut().enumerate() {
                    g.push(row[r].clone());
                }
                gram.push(row);
                kept.push(w.clone());
            }
        }
        if kept.len() != target {
            // Isotropic stall; fall back to the full Gram computation.
            return None;
        }
        let inv = if target == 0 {
            vec![]
        } else {
            invert(&gram).expect("pivot Gram invertible")
        };
        Some(WeightBasis {
            dim: target,
            pivots: kept,
            word_count,
            gram_pivots_inv: inv,
            rebase: None,
        })
    }

    fn build_basis_full(&mut self, words: &[FWord], word_count: usize) -> WeightBasis {
        let n = words.len();
        let mut gram = vec![vec![Q::zero(); n]; n];
        for s in 0..n {
            for t in s..n {
                let v = self.pair(&words[s], &words[t]);
                gram[s][t] = v.clone();
                gram[t][s] = v;
            }
        }
        // Row-rank greedy pivot selection over the full Gram matrix.
        let mut acc: Vec<Vec<Q>> = Vec::new();
        let mut pivots: Vec<usize> = Vec::new();
        for (t, row) in gram.iter().enumerate() {
            let mut cand = acc.clone();
            cand.push(row.clone());
            if rref(&mut cand).len() > pivots.len() {
                acc = cand;
                pivots.push(t);
            }
        }
        let dim = pivots.len();
        let pivot_words: Vec<FWord> = pivots.iter().map(|&t| words[t].clone()).collect();
        let sub: Vec<Vec<Q>> = pivots
            .iter()
            .map(|&s| pivots.iter().map(|&t| gram[s][t].clone()).collect())
            .collect();
        let inv = if dim == 0 {
            vec![]
        } else {
            invert(&sub).expect("pivot Gram invertible")
        };
        WeightBasis {
            dim,
            pivots: pivot_words,
            word_count,
            gram_pivots_inv: inv,
            rebase: None,
        }
    }

    pub fn ensure_basis(&mut self, m: &[i64]) {
        if self.bases.contains_key(m) {
            return;
        }
        let b = self.build_basis(m);
        let dim = b.dim;
        self.bases.insert(m.to_vec(), b);
        if self.integral && dim > 0 {
            // Word coordinates in pivot coords (no rebase stored yet), then
            // the HNF of their ℤ-span gives the integral basis.
            let words = words_of_content(m);
            let rows: Vec<Vec<Q>> = words
                .iter()
                .map(|w| {
                    let mut v = WordVec::new();
                    v.insert(w.clone(), Q::one());
                    self.reduce(m, &v)
                })
                .collect();
            let mut den = crate::linalg::Z::one();
            for r in &rows {
                for x in r {
                    den = num::integer::lcm(den, x.denom().clone());
                }
            }
            let scaled: Vec<Vec<crate::linalg::Z>> = rows
                .iter()
                .map(|r| {
                    r.iter()
                        .map(|x| (x * Q::from_integer(den.clone())).to_integer())
                        .collect()
                })
                .collect();
            let hz = crate::linalg::hnf(scaled);
            assert_eq!(hz.len(), dim, "word lattice has full rank");
            let h: Vec<Vec<Q>> = hz
                .iter()
                .map(|r| {
                    r.iter()
                        .map(|x| Q::new(x.clone(), den.clone()))
                        .collect()
                })
                .collect();
            // t = (hᵀ)⁻¹
            let ht: Vec<Vec<Q>> = (0..dim)
                .map(|i| (0..dim).map(|j| h[j][i].clone()).collect())
                .collect();
            let t = invert(&ht).expect("HNF basis invertible");
            self.bases.get_mut(m).unwrap().rebase = Some(Rebase { h, t });
        }
    }

    pub fn basis(&mut self, m: &[i64]) -> &WeightBasis {
        self.ensure_basis(m);
        self.bases.get(m).unwrap()
    }

    /// `dim L(λ)_{λ − Σ m_i α_i}`.
    pub fn dim_weight(&mut self, m: &[i64]) -> usize {
        if m.iter().any(|&x| x < 0) {
            return 0;
        }
        self.basis(m).dim
    }

    /// Coordinates of a word combination with respect to the weight basis
    /// (pivot words, or the HNF lattice basis in integral mode), i.e.
    /// reduction modulo the form radical.
    pub fn reduce(&mut self, m: &[i64], v: &WordVec) -> Vec<Q> {
        self.ensure_basis(m);
        let pivots = self.bases.get(m).unwrap().pivots.clone();
        if pivots.is_empty() {
            return vec![];
        }
        let rhs: Vec<Q> = pivots.iter().map(|p| self.pair_vec(p, v)).collect();
        let basis = self.bases.get(m).unwrap();
        let inv = &basis.gram_pivots_inv;
        let x: Vec<Q> = (0..pivots.len())
            .map(|r| {
                let mut acc = Q::zero();
                for (c, v) in rhs.iter().enumerate() {
                    acc += &inv[r][c] * v;
                }
                acc
            })
            .collect();
        match &basis.rebase {
            None => x,
            Some(rb) => (0..x.len())
                .map(|r| {
                    let mut acc = Q::zero();
                    for (c, v) in x.iter().enumerate() {
                        acc += &rb.t[r][c] * v;
                    }
                    acc
                })
                .collect(),
        }
    }

    /// Rebuild a reduced representative (a combination of pivot words) from
    /// basis coordinates.
    pub fn from_coords(&mut self, m: &[i64], coords: &[Q]) -> WordVec {
        self.ensure_basis(m);
        let basis = self.bases.get(m).unwrap();
        let pivot_coords: Vec<Q> = match &basis.rebase {
            None => coords.to_vec(),
            Some(rb) => (0..coords.len())
                .map(|j| {
                    let mut acc = Q::zero();
                    for (i, y) in coords.iter().enumerate() {
                        acc += &rb.h[i][j] * y;
                    }
                    acc
                })
                .collect(),
        };
        let pivots = &basis.pivots;
        let mut out = WordVec::new();
        for (p, c) in pivots.iter().zip(&pivot_coords) {
            wv_add_scaled(&mut out, p.clone(), c.clone());
        }
        out
    }

    /// Basis change matrix of the integral rebase at `m`, if any.
    pub fn rebase_matrix(&mut self, m: &[i64]) -> Option<Vec<Vec<Q>>> {
        self.ensure_basis(m);
        self.bases
            .get(m)
            .unwrap()
            .rebase
            .as_ref()
            .map(|rb| rb.h.clone())
    }

    /// Minimal-length representative of `w` modulo the stabilizer of λ
    /// (generated by the simple reflections fixing λ).
    pub fn coset_rep(&self, w: &WeylElement) -> WeylElement {
        let mut cur = w.clone();
        'outer: loop {
            for i in 0..self.rank() {
                if self.lambda[i] == 0 && cur.has_right_descent(&self.gcm, i) {
                    cur = cur.right_mul(&self.gcm, i);
                    continue 'outer;
                }
            }
            return cur;
        }
    }

    /// Depth vector of `λ − wλ`.
    pub fn extremal_depth(&self, w: &WeylElement) -> Vec<i64> {
        let img = w.apply(&self.gcm, &Weight::from_anchor(self.lambda.clone()));
        img.depth
    }

    /// The extremal vector `v_{wλ}` constructed along a reduced word, with
    /// its first nonzero pivot coordinate normalized to 1.
    pub fn extremal_vector(&mut self, w: &WeylElement) -> ModuleVector {
        let w = self.coset_rep(w);
        let word = w.reduced_word().to_vec();
        // Exponents n_k = ⟨α_{i_k}^∨, s_{i_{k+1}} ⋯ s_{i_ℓ} λ⟩.
        let mut mu = Weight::from_anchor(self.lambda.clone());
        let mut exps: Vec<(usize, i64)> = Vec::new();
        for &i in word.iter().rev() {
            let n = crate::gcm::pairing(&self.gcm, i, &mu);
            assert!(n >= 0, "reduced word exponent must be nonnegative");
            exps.push((i, n));
            mu = crate::gcm::reflect(&self.gcm, i, &mu);
        }
        let mut fw = FWord::empty();
        let mut coeff = Q::one();
        for &(i, n) in &exps {
            if n > 0 {
                let (next, mc) = fw.prepended(i, n as u32);
                fw = next;
                coeff *= Q::from_integer(mc);
            }
        }
        let content = fw.content(self.rank());
        let mut coords = WordVec::new();
        coords.insert(fw, coeff);
        // Normalize the first nonzero pivot coordinate to 1.
        let red = self.reduce(&content, &coords);
        let lead = red
            .iter()
            .find(|x| !x.is_zero())
            .expect("extremal vector is nonzero")
            .clone();
        let coords = coords
            .into_iter()
            .map(|(k, v)| (k, v / lead.clone()))
            .collect();
        ModuleVector { content, coords }
    }

    /// `E_i^{(a)}` on a module vector, reduced against the target basis.
    pub fn apply_e(&mut self, i: usize, a: u32, v: &ModuleVector) -> ModuleVector {
        let mut content = v.content.clone();
        content[i] -= a as i64;
        if content.iter().any(|&x| x < 0) {
            return ModuleVector::zero(content);
        }
        let raw = self.apply_e_vec(i, a, &v.coords);
        let coords = self.reduce(&content, &raw);
        let words = self.from_coords(&content, &coords);
        ModuleVector {
            content,
            coords: words,
        }
    }

    /// `F_i^{(a)}` on a module vector, reduced against the target basis.
    pub fn apply_f(&mut self, i: usize, a: u32, v: &ModuleVector) -> ModuleVector {
        let mut content = v.content.clone();
        content[i] += a as i64;
        let raw = Self::apply_f_vec(i, a, &v.coords);
        let coords = self.reduce(&content, &raw);
        let words = self.from_coords(&content, &coords);
        ModuleVector {
            content,
            coords: words,
        }
    }

    /// Matrix of `F_i^{(a)}` from the basis at `m` to coordinates at
    /// `m + a e_i` (rows = images of basis vectors).
    pub fn action_f_matrix(&mut self, i: usize, a: u32, m: &[i64]) -> Vec<Vec<Q>> {
        let dim = self.dim_weight(m);
        let mut target = m.to_vec();
        target[i] += a as i64;
        (0..dim)
            .map(|s| {
                let mut unit = vec![Q::zero(); dim];
                unit[s] = Q::one();
                let v = self.from_coords(m, &unit);
                let img = Self::apply_f_vec(i, a, &v);
                self.reduce(&target, &img)
            })
            .collect()
    }

    /// Matrix of `E_i^{(a)}` from the basis at `m` to coordinates at
    /// `m − a e_i`.
    pub fn action_e_matrix(&mut self, i: usize, a: u32, m: &[i64]) -> Vec<Vec<Q>> {
        let dim = self.dim_weight(m);
        let mut target = m.to_vec();
        target[i] -= a as i64;
        if target.iter().any(|&x| x < 0) {
            return (0..dim).map(|_| vec![]).collect();
        }
        (0..dim)
            .map(|s| {
                let mut unit = vec![Q::zero(); dim];
                unit[s] = Q::one();
                let v = self.from_coords(m, &unit);
                let img = self.apply_e_vec(i, a, &v);
                self.reduce(&target, &img)
            })
            .collect()
    }

    /// Coordinate matrix of every word of content `m` against the pivot
    /// basis (rows = words).
    pub fn word_coordinate_matrix(&mut self, m: &[i64]) -> (Vec<FWord>, Vec<Vec<Q>>) {
        let words = words_of_content(m);
        let rows = words
            .iter()
            .map(|w| {
                let mut v = WordVec::new();
                v.insert(w.clone(), Q::one());
                self.reduce(m, &v)
            })
            .collect();
        (words, rows)
    }

}
