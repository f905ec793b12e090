//! Weyl group elements canonicalized by their action on ρ, length, Bruhat
//! order and reduced/subword combinatorics.

use std::collections::{BTreeSet, HashSet};

use crate::error::{KmError, Result};
use crate::gcm::{pairing, reflect, Gcm, Weight};

/// A group element, determined by `w(ρ)` (ρ is regular dominant, so the
/// action on it is faithful). The cached word is reduced and replays to
/// `rho_image`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WeylElement {
    rho_image: Weight,
    word: Vec<usize>,
}

impl WeylElement {
    pub fn identity(gcm: &Gcm) -> Self {
        WeylElement {
            rho_image: Weight::rho(gcm.rank()),
            word: vec![],
        }
    }

    pub fn rho_image(&self) -> &Weight {
        &self.rho_image
    }

    pub fn reduced_word(&self) -> &[usize] {
        &self.word
    }

    pub fn length(&self) -> usize {
        self.word.len()
    }

    pub fn is_identity(&self) -> bool {
        self.word.is_empty()
    }

    /// Apply w to a weight by replaying the reduced word right-to-left.
    pub fn apply(&self, gcm: &Gcm, w: &Weight) -> Weight {
        let mut cur = w.clone();
        for &i in self.word.iter().rev() {
            cur = reflect(gcm, i, &cur);
        }
        cur
    }

    /// Left multiplication by `s_i`.
    pub fn left_mul(&self, gcm: &Gcm, i: usize) -> WeylElement {
        from_rho_image(gcm, reflect(gcm, i, &self.rho_image))
    }

    /// Right multiplication by `s_i`.
    pub fn right_mul(&self, gcm: &Gcm, i: usize) -> WeylElement {
        let mut word = self.word.clone();
        word.push(i);
        canonicalize(gcm, &word)
    }

    /// True iff `ℓ(s_i w) < ℓ(w)`, i.e. `⟨α_i^∨, w(ρ)⟩ < 0`.
    pub fn has_left_descent(&self, gcm: &Gcm, i: usize) -> bool {
        pairing(gcm, i, &self.rho_image) < 0
    }

    pub fn has_right_descent(&self, gcm: &Gcm, i: usize) -> bool {
        // ℓ(w s_i) < ℓ(w) iff w(α_i) < 0.
        let img = self.apply(gcm, &Weight::simple_root(gcm.rank(), i));
        img.total_depth() > 0
    }

    pub fn display(&self, gcm: &Gcm) -> String {
        if self.word.is_empty() {
            return "e".to_string();
        }
        self.word
            .iter()
            .map(|&i| gcm.labels[i].clone())
            .collect::<Vec<_>>()
            .join(".")
    }
}

/// Recover a canonical reduced word by greedy descent (smallest index
/// first), returning the element.
pub fn from_rho_image(gcm: &Gcm, rho_image: Weight) -> WeylElement {
    let mut cur = rho_image.clone();
    let mut word = Vec::new();
    loop {
        let Some(i) = (0..gcm.rank()).find(|&i| pairing(gcm, i, &cur) < 0) else {
            break;
        };
        cur = reflect(gcm, i, &cur);
        word.push(i);
    }
    debug_assert_eq!(cur, Weight::rho(gcm.rank()));
    WeylElement { rho_image, word }
}

/// Canonical form of an arbitrary word in the simple reflections.
pub fn canonicalize(gcm: &Gcm, word: &[usize]) -> WeylElement {
    let mut img = Weight::rho(gcm.rank());
    for &i in word.iter().rev() {
        img = reflect(gcm, i, &img);
    }
    from_rho_image(gcm, img)
}

pub fn length(w: &WeylElement) -> usize {
    w.length()
}

/// Standard descent recursion for the Bruhat order.
pub fn bruhat_leq(gcm: &Gcm, v: &WeylElement, w: &WeylElement) -> bool {
    if w.is_identity() {
        return v.is_identity();
    }
    if v.length() > w.length() {
        return false;
    }
    let i = (0..gcm.rank())
        .find(|&i| w.has_left_descent(gcm, i))
        .expect("non-identity element has a descent");
    let sw = w.left_mul(gcm, i);
    let sv = v.left_mul(gcm, i);
    let vmin = if sv.length() < v.length() { sv } else { v.clone() };
    bruhat_leq(gcm, &vmin, &sw)
}

/// Exponential subword oracle: `v ≤ w` iff some subword of a reduced word
/// of `w` is a word for `v`. Test oracle only.
pub fn bruhat_leq_oracle(gcm: &Gcm, v: &WeylElement, w: &WeylElement) -> bool {
    let word = w.reduced_word();
    let n = word.len();
    if v.length() > n {
        return false;
    }
    for mask in 0u32..(1u32 << n) {
        if (mask.count_ones() as usize) != v.length() {
            continue;
        }
        let sub: Vec<usize> = (0..n).filter(|&k| mask >> k & 1 == 1).map(|k| word[k]).collect();
        if &canonicalize(gcm, &sub) == v {
            return true;
        }
    }
    false
}

/// All elements of length ≤ `max_len`, sorted by (length, ρ-image).
pub fn enumerate(gcm: &Gcm, max_len: usize) -> Vec<WeylElement> {
    let mut seen: HashSet<Weight> = HashSet::new();
    let mut out = Vec::new();
    let mut layer = vec![WeylElement::identity(gcm)];
    seen.insert(layer[0].rho_image.clone());
    out.extend(layer.clone());
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for i in 0..gcm.rank() {
                let cand = w.right_mul(gcm, i);
                if cand.length() == w.length() + 1 && seen.insert(cand.rho_image.clone()) {
                    next.push(cand);
                }
            }
        }
        next.sort();
        out.extend(next.clone());
        layer = next;
        if layer.is_empty() {
            break;
        }
    }
    out
}

/// All reduced words of `w` (by descent recursion).
pub fn all_reduced_words(gcm: &Gcm, w: &WeylElement) -> Vec<Vec<usize>> {
    if w.is_identity() {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for i in 0..gcm.rank() {
        if w.has_left_descent(gcm, i) {
            for mut tail in all_reduced_words(gcm, &w.left_mul(gcm, i)) {
                let mut word = vec![i];
                word.append(&mut tail);
                out.push(word);
            }
        }
    }
    out
}

/// Minimal elements (Bruhat) of `{v : ℓ(v) ≤ search_len, v ≥ w ∀ w ∈ S}`.
pub fn minimal_upper_bounds(
    gcm: &Gcm,
    s: &[WeylElement],
    search_len: usize,
) -> Result<Vec<WeylElement>> {
    assert!(!s.is_empty());
    let all = enumerate(gcm, search_len);
    let ubs: Vec<&WeylElement> = all
        .iter()
        .filter(|v| s.iter().all(|w| bruhat_leq(gcm, w, v)))
        .collect();
    if ubs.is_empty() {
        return Err(KmError::EmptyWithinBound(search_len));
    }
    let minimal: BTreeSet<WeylElement> = ubs
        .iter()
        .filter(|v| {
            !ubs.iter()
                .any(|u| u != *v && bruhat_leq(gcm, u, v))
        })
        .map(|v| (*v).clone())
        .collect();
    Ok(minimal.into_iter().collect())
}
