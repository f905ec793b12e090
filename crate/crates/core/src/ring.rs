//! The multigraded section ring `R = ⊕_{λ∈P_+} L(λ)^∨` in truncation.
//!
//! Pieces are stored weight-by-weight in the dual of the pivot word basis.
//! Multiplication is the transpose of the comultiplication
//! `u v_{λ+μ} ↦ Δ(u)(v_λ ⊗ v_μ)`, normalized by `v_λ^* · v_μ^* = v_{λ+μ}^*`.

use std::collections::BTreeMap;

use num::{One, Zero};
use serde::Serialize;

use crate::error::{KmError, Result};
use crate::families::{thick_demazure, Subspace};
use crate::fword::{coproduct, FWord, WordVec};
use crate::gcm::{Gcm, Weight};
use crate::linalg::{nullspace, rank, Q};
use crate::modules::Module;
use crate::weyl::{enumerate, WeylElement};

/// Key of a stored weight piece: multidegree, then H-weight depth.
pub type PieceKey = (Vec<i64>, Vec<i64>);

/// One structure-constant entry: the coefficient of
/// `e_s^{(m1)} ⊗ e_t^{(m2)}` in the comultiplied pivot `r` of the target.
#[derive(Debug, Clone)]
pub struct ComulEntry {
    pub r: usize,
    pub m1: Vec<i64>,
    pub s: usize,
    pub m2: Vec<i64>,
    pub t: usize,
    pub coeff: Q,
}

pub struct RingTruncation {
    pub gcm: Gcm,
    pub deg_bound: usize,
    pub depth_bound: usize,
    /// Pieces carry the HNF word-lattice bases instead of pivot words.
    pub integral: bool,
    pub lambdas: Vec<Vec<i64>>,
    modules: BTreeMap<Vec<i64>, Module>,
    /// dims of every stored piece (zero-dimensional pieces omitted).
    pub pieces: BTreeMap<PieceKey, usize>,
    /// `(λ, μ) → m → entries`; both orders stored.
    comul: BTreeMap<(Vec<i64>, Vec<i64>), BTreeMap<Vec<i64>, Vec<ComulEntry>>>,
    /// `(λ, μ, m) → m_{λ,μ} surjective onto the (λ+μ, m) piece`.
    pub surjective: BTreeMap<(Vec<i64>, Vec<i64>, Vec<i64>), bool>,
}

/// All dominant multidegrees with `Σ λ_i ≤ deg_bound`, sorted.
pub fn dominant_multidegrees(rank: usize, deg_bound: usize) -> Vec<Vec<i64>> {
    let mut out: Vec<Vec<i64>> = vec![vec![]];
    for _ in 0..rank {
        let mut next = Vec::new();
        for v in &out {
            let used: i64 = v.iter().sum();
            for x in 0..=(deg_bound as i64 - used) {
                let mut w = v.clone();
                w.push(x);
                next.push(w);
            }
        }
        out = next;
    }
    out.sort_by_key(|v| (v.iter().sum::<i64>(), v.clone()));
    out
}

pub fn depth_vectors(rank: usize, depth_bound: usize) -> Vec<Vec<i64>> {
    dominant_multidegrees(rank, depth_bound)
}

impl RingTruncation {
    /// Standard mode: pieces in the dual of the pivot word bases.
    pub fn build(gcm: Gcm, deg_bound: usize, depth_bound: usize) -> Result<RingTruncation> {
        Self::build_mode(gcm, deg_bound, depth_bound, false)
    }

    /// Integral mode for the char-p pipeline: every piece carries the HNF
    /// basis of its word lattice, so all coordinates and structure
    /// constants are p-integral for every p.
    pub fn build_integral(
        gcm: Gcm,
        deg_bound: usize,
        depth_bound: usize,
    ) -> Result<RingTruncation> {
        Self::build_mode(gcm, deg_bound, depth_bound, true)
    }

    fn build_mode(
        gcm: Gcm,
        deg_bound: usize,
        depth_bound: usize,
        integral: bool,
    ) -> Result<RingTruncation> {
        let rank = gcm.rank();
        let lambdas = dominant_multidegrees(rank, deg_bound);
        let weights = depth_vectors(rank, depth_bound);

        let mut modules: BTreeMap<Vec<i64>, Module> = BTreeMap::new();
        let mut pieces: BTreeMap<PieceKey, usize> = BTreeMap::new();
        for la in &lambdas {
            let mut m = if integral {
                Module::integral_with_char_oracle(gcm.clone(), la.clone(), depth_bound)?
            } else {
                Module::with_char_oracle(gcm.clone(), la.clone(), depth_bound)?
            };
            for w in &weights {
                let dim = m.dim_weight(w);
                if dim > 0 {
                    pieces.insert((la.clone(), w.clone()), dim);
                }
            }
            modules.insert(la.clone(), m);
        }

        let mut ring = RingTruncation {
            gcm,
            deg_bound,
            depth_bound,
            integral,
            lambdas: lambdas.clone(),
            modules,
            pieces,
            comul: BTreeMap::new(),
            surjective: BTreeMap::new(),
        };

        for la in &lambdas {
            for mu in &lambdas {
                if la > mu {
                    continue;
                }
                let sum: Vec<i64> = la.iter().zip(mu).map(|(a, b)| a + b).collect();
                if sum.iter().sum::<i64>() > deg_bound as i64 {
                    continue;
                }
                let table = ring.build_pair(la, mu, &weights)?;
                // Cocommutativity gives the flipped table for free.
                let flipped: BTreeMap<Vec<i64>, Vec<ComulEntry>> = table
                    .iter()
                    .map(|(m, entries)| {
                        (
                            m.clone(),
                            entries
                                .iter()
                                .map(|e| ComulEntry {
                                    r: e.r,
                                    m1: e.m2.clone(),
                                    s: e.t,
                                    m2: e.m1.clone(),
                                    t: e.s,
                                    coeff: e.coeff.clone(),
                                })
                                .collect(),
                        )
                    })
                    .collect();
                for (m, entries) in &table {
                    let key = (la.clone(), mu.clone(), m.clone());
                    let dim = ring.dim(&sum, m);
                    let surj = Self::tensor_rank(entries) == dim;
                    ring.surjective.insert(key, surj);
                    if la != mu {
                        let key = (mu.clone(), la.clone(), m.clone());
                        ring.surjective.insert(key, surj);
                    }
                }
                if la != mu {
                    ring.comul.insert((mu.clone(), la.clone()), flipped);
                }
                ring.comul.insert((la.clone(), mu.clone()), table);
            }
        }
        Ok(ring)
    }

    fn build_pair(
        &mut self,
        la: &[i64],
        mu: &[i64],
        weights: &[Vec<i64>],
    ) -> Result<BTreeMap<Vec<i64>, Vec<ComulEntry>>> {
        let rank = self.gcm.rank();
        let sum: Vec<i64> = la.iter().zip(mu).map(|(a, b)| a + b).collect();
        let mut out: BTreeMap<Vec<i64>, Vec<ComulEntry>> = BTreeMap::new();
        for m in weights {
            let dim = self.dim(&sum, m);
            if dim == 0 {
                continue;
            }
            let (pivots, target_rebase) = {
                let target = self.modules.get_mut(&sum.to_vec()).unwrap();
                let pivots: Vec<FWord> = target.basis(m).pivots.clone();
                (pivots, target.rebase_matrix(m))
            };
            // Expand all coproducts first, then reduce each side in one pass
            // per module (λ may equal μ).
            let mut raw: Vec<(usize, FWord, FWord, Q)> = Vec::new();
            let mut left_words: std::collections::BTreeSet<FWord> = Default::default();
            let mut right_words: std::collections::BTreeSet<FWord> = Default::default();
            for (r, u) in pivots.iter().enumerate() {
                for ((u1, u2), c) in coproduct(u) {
                    left_words.insert(u1.clone());
                    right_words.insert(u2.clone());
                    raw.push((r, u1, u2, Q::from_integer(c)));
                }
            }
            let mut left_red: BTreeMap<FWord, (Vec<i64>, Vec<Q>)> = BTreeMap::new();
            {
                let ml = self.modules.get_mut(&la.to_vec()).unwrap();
                for w in &left_words {
                    let c = w.content(rank);
                    let mut v = WordVec::new();
                    v.insert(w.clone(), Q::one());
                    let red = ml.reduce(&c, &v);
                    left_red.insert(w.clone(), (c, red));
                }
            }
            let mut right_red: BTreeMap<FWord, (Vec<i64>, Vec<Q>)> = BTreeMap::new();
            {
                let mr = self.modules.get_mut(&mu.to_vec()).unwrap();
                for w in &right_words {
                    let c = w.content(rank);
                    let mut v = WordVec::new();
                    v.insert(w.clone(), Q::one());
                    let red = mr.reduce(&c, &v);
                    right_red.insert(w.clone(), (c, red));
                }
            }
            let mut acc: BTreeMap<(usize, Vec<i64>, usize, Vec<i64>, usize), Q> = BTreeMap::new();
            for (r, u1, u2, c) in raw {
                let (m1, r1) = &left_red[&u1];
                let (m2, r2) = &right_red[&u2];
                for (s, a) in r1.iter().enumerate() {
                    if a.is_zero() {
                        continue;
                    }
                    for (t, b) in r2.iter().enumerate() {
                        if b.is_zero() {
                            continue;
                        }
                        let key = (r, m1.clone(), s, m2.clone(), t);
                        let e = acc.entry(key).or_insert_with(Q::zero);
                        *e += &c * a * b;
                    }
                }
            }
            // In integral mode the target basis is b_r = Σ_j h[r][j]·pivot_j;
            // the entries must describe m^∨(b_r), not m^∨(pivot_r).
            if let Some(h) = &target_rebase {
                let mut rebased: BTreeMap<(usize, Vec<i64>, usize, Vec<i64>, usize), Q> =
                    BTreeMap::new();
                for ((j, m1, s, m2, t), v) in &acc {
                    for r in 0..h.len() {
                        if h[r][*j].is_zero() {
                            continue;
                        }
                        let key = (r, m1.clone(), *s, m2.clone(), *t);
                        let e = rebased.entry(key).or_insert_with(Q::zero);
                        *e += &h[r][*j] * v;
                    }
                }
                acc = rebased;
            }
            let entries: Vec<ComulEntry> = acc
                .into_iter()
                .filter(|(_, v)| !v.is_zero())
                .map(|((r, m1, s, m2, t), coeff)| ComulEntry {
                    r,
                    m1,
                    s,
                    m2,
                    t,
                    coeff,
                })
                .collect();
            if !entries.is_empty() {
                out.insert(m.clone(), entries);
            }
        }
        Ok(out)
    }

    /// Rank of the comultiplication matrix at one target weight
    /// (pairs × pivots); full rank = injectivity = surjectivity of the dual.
    fn tensor_rank(entries: &[ComulEntry]) -> usize {
        let mut cols: BTreeMap<(Vec<i64>, usize, Vec<i64>, usize), usize> = BTreeMap::new();
        let mut rmax = 0;
        for e in entries {
            let key = (e.m1.clone(), e.s, e.m2.clone(), e.t);
            let next = cols.len();
            cols.entry(key).or_insert(next);
            rmax = rmax.max(e.r + 1);
        }
        let mut m = vec![vec![Q::zero(); cols.len()]; rmax];
        for e in entries {
            let c = cols[&(e.m1.clone(), e.s, e.m2.clone(), e.t)];
            m[e.r][c] = e.coeff.clone();
        }
        rank(m)
    }

    pub fn dim(&self, la: &[i64], m: &[i64]) -> usize {
        self.pieces
            .get(&(la.to_vec(), m.to_vec()))
            .copied()
            .unwrap_or(0)
    }

    pub fn module_mut(&mut self, la: &[i64]) -> &mut Module {
        self.modules.get_mut(&la.to_vec()).expect("stored module")
    }

    pub fn comul_table(
        &self,
        la: &[i64],
        mu: &[i64],
    ) -> Option<&BTreeMap<Vec<i64>, Vec<ComulEntry>>> {
        self.comul.get(&(la.to_vec(), mu.to_vec()))
    }

    /// Product of `f ∈ R_{λ, m1}` and `g ∈ R_{μ, m2}` in dual-basis
    /// coordinates; returns coordinates in `R_{λ+μ, m1+m2}`.
    pub fn product(
        &self,
        la: &[i64],
        m1: &[i64],
        f: &[Q],
        mu: &[i64],
        m2: &[i64],
        g: &[Q],
    ) -> Vec<Q> {
        let sum: Vec<i64> = la.iter().zip(mu).map(|(a, b)| a + b).collect();
        let m: Vec<i64> = m1.iter().zip(m2).map(|(a, b)| a + b).collect();
        let dim = self.dim(&sum, &m);
        let mut out = vec![Q::zero(); dim];
        if dim == 0 {
            return out;
        }
        let Some(table) = self.comul.get(&(la.to_vec(), mu.to_vec())) else {
            return out;
        };
        let Some(entries) = table.get(&m) else {
            return out;
        };
        for e in entries {
            if e.m1 == m1 && e.m2 == m2 {
                let c = &f[e.s] * &g[e.t];
                if !c.is_zero() {
                    out[e.r] = &out[e.r] + &(c * &e.coeff);
                }
            }
        }
        out
    }

    /// Dual-basis coordinates of the extremal point `x_w` in degree λ:
    /// `(content of ϖ-extremal weight, coordinate vector)`.
    pub fn extremal_coords(&mut self, la: &[i64], w: &WeylElement) -> (Vec<i64>, Vec<Q>) {
        let module = self.module_mut(la);
        let v = module.extremal_vector(w);
        let red = module.reduce(&v.content.clone(), &v.coords);
        (v.content, red)
    }

    /// Matrix of the tensor embedding `m^∨_{λ,μ}: L(λ+μ) → L(λ)⊗L(μ)` at
    /// one target weight: rows labeled by `((m1,s),(m2,t))` pairs, columns
    /// by the target basis.
    pub fn tensor_embedding(
        &self,
        la: &[i64],
        mu: &[i64],
        m: &[i64],
    ) -> Option<(Vec<((Vec<i64>, usize), (Vec<i64>, usize))>, Vec<Vec<Q>>)> {
        let sum: Vec<i64> = la.iter().zip(mu).map(|(a, b)| a + b).collect();
        let dim = self.dim(&sum, m);
        let entries = self.comul.get(&(la.to_vec(), mu.to_vec()))?.get(m)?;
        let mut labels: Vec<((Vec<i64>, usize), (Vec<i64>, usize))> = entries
            .iter()
            .map(|e| ((e.m1.clone(), e.s), (e.m2.clone(), e.t)))
            .collect();
        labels.sort();
        labels.dedup();
        let index: BTreeMap<_, usize> = labels
            .iter()
            .cloned()
            .enumerate()
            .map(|(k, l)| (l, k))
            .collect();
        let mut mat = vec![vec![Q::zero(); dim]; labels.len()];
        for e in entries {
            let r = index[&((e.m1.clone(), e.s), (e.m2.clone(), e.t))];
            mat[r][e.r] = e.coeff.clone();
        }
        Some((labels, mat))
    }

    /// Structure constants of `m_{λ,μ}` as sparse triples
    /// `(row, col, value)` with exact "p/q" values; rows index pairs of
    /// basis vectors of the factors, columns the target basis.
    pub fn comul_triples(&self, la: &[i64], mu: &[i64]) -> Vec<(String, usize, String)> {
        let mut out = Vec::new();
        if let Some(table) = self.comul.get(&(la.to_vec(), mu.to_vec())) {
            for (m, entries) in table {
                for e in entries {
                    out.push((
                        format!("{:?}:{}|{:?}:{} @ {m:?}", e.m1, e.s, e.m2, e.t),
                        e.r,
                        format!("{}", e.coeff),
                    ));
                }
            }
        }
        out
    }

    /// Evaluation pairing `⟨P v_λ, e_s^*⟩`: the s-th pivot coordinate of the
    /// reduced word vector.
    pub fn eval_pairing(&mut self, la: &[i64], p: &FWord, s: usize) -> Q {
        let module = self.module_mut(la);
        let c = p.content(module.gcm().rank());
        let mut v = WordVec::new();
        v.insert(p.clone(), Q::one());
        let red = module.reduce(&c, &v);
        red.get(s).cloned().unwrap_or_else(Q::zero)
    }
}

// ---------------------------------------------------------------------------
// Plücker quadrics.
// ---------------------------------------------------------------------------

/// One labeled tensor coordinate of `L(ϖ_i)^∨ ⊗ L(ϖ_j)^∨`.
pub type PairLabel = ((Vec<i64>, usize), (Vec<i64>, usize));

#[derive(Debug, Clone)]
pub struct QuadricSpace {
    pub i: usize,
    pub j: usize,
    pub m: Vec<i64>,
    pub labels: Vec<PairLabel>,
    /// Kernel of the full tensor multiplication map, row per quadric.
    pub kernel: Vec<Vec<Q>>,
    /// Kernel restricted to the symmetric part (only for i == j).
    pub sym_kernel_dim: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct QuadricSet {
    pub depth_bound: usize,
    pub spaces: Vec<QuadricSpace>,
}

fn tensor_labels(ring: &RingTruncation, i: usize, j: usize, m: &[i64]) -> Vec<PairLabel> {
    let rank = ring.gcm.rank();
    let mut la = vec![0i64; rank];
    la[i] = 1;
    let mut mu = vec![0i64; rank];
    mu[j] = 1;
    let mut labels = Vec::new();
    for m1 in depth_vectors(rank, m.iter().sum::<i64>() as usize) {
        let m2: Vec<i64> = m.iter().zip(&m1).map(|(a, b)| a - b).collect();
        if m2.iter().any(|&x| x < 0) {
            continue;
        }
        let d1 = ring.dim(&la, &m1);
        let d2 = ring.dim(&mu, &m2);
        for s in 0..d1 {
            for t in 0..d2 {
                labels.push(((m1.clone(), s), (m2.clone(), t)));
            }
        }
    }
    labels
}

/// Kernels of `L(ϖ_i)^∨ ⊗ L(ϖ_j)^∨ → L(ϖ_i+ϖ_j)^∨` per weight, for all
/// `i ≤ j`. For `i = j` the kernel of the symmetrized map is recorded too.
pub fn pluecker_quadrics(ring: &RingTruncation) -> Result<QuadricSet> {
    let rank = ring.gcm.rank();
    if ring.deg_bound < 2 {
        return Err(KmError::WindowTooSmall(
            "need degree bound ≥ 2 for quadrics".to_string(),
        ));
    }
    let mut spaces = Vec::new();
    for i in 0..rank {
        for j in i..rank {
            let mut la = vec![0i64; rank];
            la[i] = 1;
            let mut mu = vec![0i64; rank];
            mu[j] = 1;
            let sum: Vec<i64> = la.iter().zip(&mu).map(|(a, b)| a + b).collect();
            for m in depth_vectors(rank, ring.depth_bound) {
                let labels = tensor_labels(ring, i, j, &m);
                if labels.is_empty() {
                    continue;
                }
                let index: BTreeMap<PairLabel, usize> = labels
                    .iter()
                    .cloned()
                    .enumerate()
                    .map(|(k, l)| (l, k))
                    .collect();
                let dim_target = ring.dim(&sum, &m);
                // rows = target pivots, cols = tensor pairs
                let mut mat = vec![vec![Q::zero(); labels.len()]; dim_target];
                if let Some(table) = ring.comul_table(&la, &mu) {
                    if let Some(entries) = table.get(&m) {
                        for e in entries {
                            let k = index[&((e.m1.clone(), e.s), (e.m2.clone(), e.t))];
                            mat[e.r][k] = e.coeff.clone();
                        }
                    }
                }
                let kernel = nullspace(&mat, labels.len());
                let sym_kernel_dim = if i == j {
                    // Symmetric vectors: fixed under label swap.
                    let mut sym_rows = Vec::new();
                    let mut seen = std::collections::BTreeSet::new();
                    for (k, (a, b)) in labels.iter().enumerate() {
                        let swapped = (b.clone(), a.clone());
                        let ks = index[&swapped];
                        let key = (k.min(ks), k.max(ks));
                        if !seen.insert(key) {
                            continue;
                        }
                        let mut v = vec![Q::zero(); labels.len()];
                        v[k] = &v[k] + &Q::one();
                        v[ks] = &v[ks] + &Q::one();
                        sym_rows.push(v);
                    }
                    // kernel within the symmetric span: sym vectors v with v·matᵀ = 0
                    let mut img = Vec::new();
                    for v in &sym_rows {
                        let row: Vec<Q> = (0..dim_target)
                            .map(|r| {
                                let mut acc = Q::zero();
                                for (k, x) in v.iter().enumerate() {
                                    acc += x * &mat[r][k];
                                }
                                acc
                            })
                            .collect();
                        img.push(row);
                    }
                    let sym_dim = sym_rows.len();
                    let img_rank = crate::linalg::rank(img);
                    Some(sym_dim - img_rank)
                } else {
                    None
                };
                if !kernel.is_empty() || sym_kernel_dim.map_or(false, |d| d > 0) {
                    spaces.push(QuadricSpace {
                        i,
                        j,
                        m,
                        labels,
                        kernel,
                        sym_kernel_dim,
                    });
                }
            }
        }
    }
    Ok(QuadricSet {
        depth_bound: ring.depth_bound,
        spaces,
    })
}

/// Every quadric evaluates to zero on every extremal point `x_w`.
pub fn quadrics_vanish_on_extremal(
    ring: &mut RingTruncation,
    quadrics: &QuadricSet,
    max_len: usize,
) -> Result<bool> {
    let gcm = ring.gcm.clone();
    let rank = gcm.rank();
    let elems = enumerate(&gcm, max_len);
    for w in &elems {
        // extremal coordinates per fundamental degree
        let mut ext: Vec<(Vec<i64>, Vec<Q>)> = Vec::new();
        for i in 0..rank {
            let mut la = vec![0i64; rank];
            la[i] = 1;
            ext.push(ring.extremal_coords(&la, w));
        }
        for qs in &quadrics.spaces {
            let (ci, vi) = &ext[qs.i];
            let (cj, vj) = &ext[qs.j];
            for q in &qs.kernel {
                let mut acc = Q::zero();
                for (k, ((m1, s), (m2, t))) in qs.labels.iter().enumerate() {
                    if q[k].is_zero() || m1 != ci || m2 != cj {
                        continue;
                    }
                    acc += &q[k] * &vi[*s] * &vj[*t];
                }
                if !acc.is_zero() {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// Degree-2 presentation check.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct PresentationRow {
    pub lambda: Vec<i64>,
    pub m: Vec<i64>,
    pub expected: usize,
    pub found: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct PresentationReport {
    pub deg_bound: usize,
    pub depth_bound: usize,
    pub rows: Vec<PresentationRow>,
    pub pass: bool,
}

/// Longest element for finite type; `WindowTooSmall` when W does not close
/// within a generous bound.
fn longest_element(gcm: &Gcm) -> Result<WeylElement> {
    let cap = 64;
    let elems = enumerate(gcm, cap);
    let w0 = elems.last().unwrap().clone();
    if w0.length() == cap {
        return Err(KmError::WindowTooSmall(
            "Weyl group does not close; presentation check needs finite type".to_string(),
        ));
    }
    Ok(w0)
}

struct TensorSpace {
    /// fundamental index per slot
    funds: Vec<usize>,
    labels: Vec<Vec<(Vec<i64>, usize)>>,
    index: BTreeMap<Vec<(Vec<i64>, usize)>, usize>,
}

impl TensorSpace {
    fn new(ring: &RingTruncation, funds: &[usize], m: &[i64]) -> TensorSpace {
        let rank = ring.gcm.rank();
        let mut labels: Vec<Vec<(Vec<i64>, usize)>> = vec![vec![]];
        let total: i64 = m.iter().sum();
        for &f in funds {
            let mut la = vec![0i64; rank];
            la[f] = 1;
            let mut next = Vec::new();
            for prefix in &labels {
                let used: Vec<i64> = (0..rank)
                    .map(|c| prefix.iter().map(|(mm, _)| mm[c]).sum::<i64>())
                    .collect();
                for mk in depth_vectors(rank, total as usize) {
                    let rest: Vec<i64> = m.iter().zip(&used).zip(&mk).map(|((a, b), c)| a - b - c).collect();
                    if rest.iter().any(|&x| x < 0) {
                        continue;
                    }
                    for s in 0..ring.dim(&la, &mk) {
                        let mut lab = prefix.clone();
                        lab.push((mk.clone(), s));
                        next.push(lab);
                    }
                }
            }
            labels = next;
        }
        // keep only exact-weight triples
        labels.retain(|lab| {
            let used: Vec<i64> = (0..rank)
                .map(|c| lab.iter().map(|(mm, _)| mm[c]).sum::<i64>())
                .collect();
            used == m
        });
        labels.sort();
        let index = labels
            .iter()
            .cloned()
            .enumerate()
            .map(|(k, l)| (l, k))
            .collect();
        TensorSpace {
            funds: funds.to_vec(),
            labels,
            index,
        }
    }

    /// Symmetrize over slots carrying equal fundamentals (sum over the slot
    /// permutations, no normalization).
    fn symmetrize(&self, v: &[Q]) -> Vec<Q> {
        let perms = self.slot_permutations();
        let mut out = vec![Q::zero(); v.len()];
        for p in &perms {
            for (k, x) in v.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                let lab = &self.labels[k];
                let permuted: Vec<(Vec<i64>, usize)> =
                    p.iter().map(|&from| lab[from].clone()).collect();
                let k2 = self.index[&permuted];
                out[k2] = &out[k2] + x;
            }
        }
        out
    }

    fn slot_permutations(&self) -> Vec<Vec<usize>> {
        let n = self.funds.len();
        let mut perms = vec![vec![]];
        let mut items: Vec<usize> = (0..n).collect();
        permute(&mut items, 0, &mut perms);
        perms.retain(|p| p.len() == n && (0..n).all(|k| self.funds[p[k]] == self.funds[k]));
        perms
    }
}

fn permute(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == items.len() {
        out.push(items.clone());
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, out);
        items.swap(k, i);
    }
    if out.first().map(|p| p.is_empty()).unwrap_or(false) {
        out.remove(0);
    }
}

/// Degree-3 part of the presentation kernel is generated by the degree-2
/// kernel. Requires the window to contain the full fundamental-degree-3
/// modules (finite type).
pub fn verify_degree2_presentation(ring: &mut RingTruncation) -> Result<PresentationReport> {
    let gcm = ring.gcm.clone();
    let rank = gcm.rank();
    if ring.deg_bound < 3 {
        return Err(KmError::WindowTooSmall(
            "need degree bound ≥ 3 for the presentation check".to_string(),
        ));
    }
    let w0 = longest_element(&gcm)?;
    // window must contain every module of total degree ≤ 3
    for la in dominant_multidegrees(rank, 3) {
        if la.iter().sum::<i64>() < 3 {
            continue;
        }
        let img = w0.apply(&gcm, &Weight::from_anchor(la.clone()));
        let need: i64 = img.depth.iter().sum();
        if need > ring.depth_bound as i64 {
            return Err(KmError::WindowTooSmall(format!(
                "module {la:?} needs depth {need}, window has {}",
                ring.depth_bound
            )));
        }
    }
    let quadrics = pluecker_quadrics(ring)?;
    let mut rows = Vec::new();
    for la in dominant_multidegrees(rank, 3) {
        if la.iter().sum::<i64>() != 3 {
            continue;
        }
        // multiset of fundamentals, ascending
        let mut funds = Vec::new();
        for (i, &c) in la.iter().enumerate() {
            for _ in 0..c {
                funds.push(i);
            }
        }
        for m in depth_vectors(rank, ring.depth_bound) {
            let ts = TensorSpace::new(ring, &funds, &m);
            if ts.labels.is_empty() {
                continue;
            }
            let dim_r = ring.dim(&la, &m);
            // multiplication matrix tensor-basis → R coords
            let mut mat = vec![vec![Q::zero(); dim_r]; ts.labels.len()];
            for (k, lab) in ts.labels.iter().enumerate() {
                let coords = multiply_chain(ring, &funds, lab);
                mat[k] = coords;
            }
            // symmetric part
            let mut sym_rows = Vec::new();
            {
                let mut seen = std::collections::BTreeSet::new();
                for k in 0..ts.labels.len() {
                    let mut unit = vec![Q::zero(); ts.labels.len()];
                    unit[k] = Q::one();
                    let symd = ts.symmetrize(&unit);
                    let first = symd.iter().position(|x| !x.is_zero()).unwrap();
                    if seen.insert(first) && first == k {
                        sym_rows.push(symd);
                    }
                }
            }
            let sym_dim = rank_of(&sym_rows);
            // expected kernel dim within the symmetric part
            let img: Vec<Vec<Q>> = sym_rows
                .iter()
                .map(|v| apply_rows(v, &mat, dim_r))
                .collect();
            let expected = sym_dim - rank_of(&img);
            // span of (degree-2 kernel)·(generator), symmetrized
            let mut gens: Vec<Vec<Q>> = Vec::new();
            for qs in &quadrics.spaces {
                // place the quadric in two adjacent slots carrying (i, j)
                for slot in 0..funds.len().saturating_sub(1) {
                    let pairs = [
                        (qs.i, qs.j, false),
                        (qs.j, qs.i, true),
                    ];
                    for &(a, b, swapped) in &pairs {
                        if funds[slot] != a || funds[slot + 1] != b {
                            continue;
                        }
                        if swapped && qs.i == qs.j {
                            continue;
                        }
                        let rest_slot = 3 - slot - (slot + 1);
                        let mut laf = vec![0i64; rank];
                        laf[funds[rest_slot]] = 1;
                        for q in &qs.kernel {
                            for mrest in depth_vectors(rank, ring.depth_bound) {
                                let drest = ring.dim(&laf, &mrest);
                                for u in 0..drest {
                                    let mut v = vec![Q::zero(); ts.labels.len()];
                                    let mut any = false;
                                    for (kq, ((m1, s), (m2, t))) in qs.labels.iter().enumerate() {
                                        if q[kq].is_zero() {
                                            continue;
                                        }
                                        let (p1, p2) = if swapped {
                                            ((m2.clone(), *t), (m1.clone(), *s))
                                        } else {
                                            ((m1.clone(), *s), (m2.clone(), *t))
                                        };
                                        let mut lab = vec![(vec![], 0usize); 3];
                                        lab[slot] = p1;
                                        lab[slot + 1] = p2;
                                        lab[rest_slot] = (mrest.clone(), u);
                                        if let Some(&k) = ts.index.get(&lab) {
                                            v[k] = &v[k] + &q[kq];
                                            any = true;
                                        }
                                    }
                                    if any {
                                        gens.push(ts.symmetrize(&v));
                                    }
                                }
                            }
                        }
                    }
                }
            }
            // all generators must die in R
            for gvec in &gens {
                let img = apply_rows(gvec, &mat, dim_r);
                assert!(
                    img.iter().all(|x| x.is_zero()),
                    "degree-2 kernel product escaped the degree-3 kernel"
                );
            }
            let found = rank_of(&gens);
            if expected != 0 || found != 0 {
                rows.push(PresentationRow {
                    lambda: la.clone(),
                    m: m.clone(),
                    expected,
                    found,
                });
            }
        }
    }
    let pass = rows.iter().all(|r| r.expected == r.found);
    Ok(PresentationReport {
        deg_bound: ring.deg_bound,
        depth_bound: ring.depth_bound,
        rows,
        pass,
    })
}

fn rank_of(rows: &[Vec<Q>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    rank(rows.to_vec())
}

fn apply_rows(v: &[Q], mat: &[Vec<Q>], cols: usize) -> Vec<Q> {
    let mut out = vec![Q::zero(); cols];
    for (k, x) in v.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for c in 0..cols {
            out[c] = &out[c] + &(x * &mat[k][c]);
        }
    }
    out
}

/// Multiply the labeled generators left to right through the ring.
fn multiply_chain(
    ring: &RingTruncation,
    funds: &[usize],
    lab: &[(Vec<i64>, usize)],
) -> Vec<Q> {
    let rank = ring.gcm.rank();
    let mut la = vec![0i64; rank];
    la[funds[0]] = 1;
    let mut m = lab[0].0.clone();
    let d0 = ring.dim(&la, &m);
    let mut cur = vec![Q::zero(); d0];
    cur[lab[0].1] = Q::one();
    for k in 1..funds.len() {
        let mut laf = vec![0i64; rank];
        laf[funds[k]] = 1;
        let mut unit = vec![Q::zero(); ring.dim(&laf, &lab[k].0)];
        unit[lab[k].1] = Q::one();
        cur = ring.product(&la, &m, &cur, &laf, &lab[k].0, &unit);
        for (c, x) in la.iter_mut().zip(&laf) {
            *c += x;
        }
        for (c, x) in m.iter_mut().zip(&lab[k].0) {
            *c += x;
        }
    }
    cur
}

// ---------------------------------------------------------------------------
// Demazure ideals.
// ---------------------------------------------------------------------------

pub struct IdealTruncation {
    pub w: WeylElement,
    /// Annihilator subspaces in dual coordinates per stored piece; a missing
    /// key means the zero subspace (the piece meets `L^w` fully).
    pub pieces: BTreeMap<PieceKey, Subspace>,
    /// Quotient dims per piece (`dim R_{λ,m} − dim I^w_{λ,m}`).
    pub quotient_dims: BTreeMap<PieceKey, usize>,
}

/// `I^w` piece at `(λ, m)`: the annihilator of `L^w(λ)_m` inside the dual.
pub fn demazure_ideal(ring: &mut RingTruncation, w: &WeylElement) -> Result<IdealTruncation> {
    let lambdas = ring.lambdas.clone();
    let depth = ring.depth_bound;
    let mut pieces = BTreeMap::new();
    let mut quotient_dims = BTreeMap::new();
    for la in &lambdas {
        let fam = {
            let module = ring.module_mut(la);
            match thick_demazure(module, w, depth) {
                Ok(f) => Some(f),
                Err(KmError::DepthTooSmall { .. }) => None,
                Err(e) => return Err(e),
            }
        };
        let keys: Vec<PieceKey> = ring
            .pieces
            .keys()
            .filter(|(l, _)| l == la)
            .cloned()
            .collect();
        for (l, m) in keys {
            let dim = ring.dim(&l, &m);
            let thick = fam
                .as_ref()
                .and_then(|f| f.spaces.get(&m).cloned())
                .unwrap_or_else(|| Subspace::zero(dim));
            let ann = thick.annihilator();
            quotient_dims.insert((l.clone(), m.clone()), dim - ann.dim());
            if ann.dim() > 0 {
                pieces.insert((l, m), ann);
            }
        }
    }
    Ok(IdealTruncation {
        w: w.clone(),
        pieces,
        quotient_dims,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct IdealReport {
    pub w: String,
    pub multiplicatively_closed: bool,
    pub quotient_dims_match_thick: bool,
    pub pass: bool,
}

/// Multiplicative closure of `I^w` on the truncation and agreement of the
/// quotient dims with the thick Demazure character.
pub fn verify_ideal(ring: &mut RingTruncation, ideal: &IdealTruncation) -> Result<IdealReport> {
    let gcm = ring.gcm.clone();
    let mut closed = true;
    let piece_list: Vec<PieceKey> = ring.pieces.keys().cloned().collect();
    'outer: for (la, m1) in ideal.pieces.keys() {
        let isub = &ideal.pieces[&(la.clone(), m1.clone())];
        for (mu, m2) in &piece_list {
            let sum: Vec<i64> = la.iter().zip(mu).map(|(a, b)| a + b).collect();
            let m: Vec<i64> = m1.iter().zip(m2).map(|(a, b)| a + b).collect();
            if sum.iter().sum::<i64>() > ring.deg_bound as i64
                || m.iter().sum::<i64>() > ring.depth_bound as i64
            {
                continue;
            }
            let target_dim = ring.dim(&sum, &m);
            if target_dim == 0 {
                continue;
            }
            let target = ideal
                .pieces
                .get(&(sum.clone(), m.clone()))
                .cloned()
                .unwrap_or_else(|| Subspace::zero(target_dim));
            let dim_g = ring.dim(mu, m2);
            for f in isub.basis_rows() {
                for t in 0..dim_g {
                    let mut g = vec![Q::zero(); dim_g];
                    g[t] = Q::one();
                    let prod = ring.product(la, m1, f, mu, m2, &g);
                    if prod.iter().all(|x| x.is_zero()) {
                        continue;
                    }
                    if !target.contains_vec(&prod) {
                        closed = false;
                        break 'outer;
                    }
                }
            }
        }
    }
    // Quotient dims against the thick family dims.
    let mut dims_match = true;
    let lambdas = ring.lambdas.clone();
    let depth = ring.depth_bound;
    for la in &lambdas {
        let fam = {
            let module = ring.module_mut(la);
            match thick_demazure(module, &ideal.w, depth) {
                Ok(f) => Some(f),
                Err(KmError::DepthTooSmall { .. }) => None,
                Err(e) => return Err(e),
            }
        };
        for ((l, m), qd) in &ideal.quotient_dims {
            if l != la {
                continue;
            }
            let thick_dim = fam
                .as_ref()
                .and_then(|f| f.spaces.get(m))
                .map(|s| s.dim())
                .unwrap_or(0);
            if *qd != thick_dim {
                dims_match = false;
            }
        }
    }
    Ok(IdealReport {
        w: ideal.w.display(&gcm),
        multiplicatively_closed: closed,
        quotient_dims_match_thick: dims_match,
        pass: closed && dims_match,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gcm::validate_gcm;
    use crate::weyl::canonicalize;

    fn gcm(m: Vec<Vec<i64>>) -> Gcm {
        let labels = (1..=m.len()).map(|i| i.to_string()).collect();
        validate_gcm(m, labels).unwrap()
    }

    fn a1() -> Gcm {
        gcm(vec![vec![2]])
    }
    fn a2() -> Gcm {
        gcm(vec![vec![2, -1], vec![-1, 2]])
    }

    #[test]
    fn a1_truncation_dims_and_products() {
        let ring = RingTruncation::build(a1(), 2, 2).unwrap();
        assert_eq!(ring.dim(&[0], &[0]), 1);
        assert_eq!(ring.dim(&[1], &[0]), 1);
        assert_eq!(ring.dim(&[1], &[1]), 1);
        assert_eq!(ring.dim(&[2], &[1]), 1);
        // x·y = xy: unit coords multiply into the dual pivot basis
        let x = vec![Q::one()];
        let y = vec![Q::one()];
        let xy = ring.product(&[1], &[0], &x, &[1], &[1], &y);
        assert_eq!(xy, vec![Q::one()]);
        // m_{ϖ,ϖ} surjective everywhere it is stored
        assert!(ring
            .surjective
            .iter()
            .filter(|((l, m, _), _)| l == &vec![1] && m == &vec![1])
            .all(|(_, &s)| s));
    }

    #[test]
    fn unit_acts_as_identity() {
        let ring = RingTruncation::build(a2(), 2, 2).unwrap();
        let la = vec![1i64, 0];
        for m in depth_vectors(2, 2) {
            let d = ring.dim(&la, &m);
            for s in 0..d {
                let mut f = vec![Q::zero(); d];
                f[s] = Q::one();
                let unit = vec![Q::one()];
                let prod = ring.product(&[0, 0], &[0, 0], &unit, &la, &m, &f);
                assert_eq!(prod, f);
            }
        }
    }

    #[test]
    fn commutativity_on_pieces() {
        let ring = RingTruncation::build(a2(), 2, 3).unwrap();
        let la = vec![1i64, 0];
        let mu = vec![0i64, 1];
        for m1 in depth_vectors(2, 2) {
            for m2 in depth_vectors(2, 2) {
                let d1 = ring.dim(&la, &m1);
                let d2 = ring.dim(&mu, &m2);
                for s in 0..d1 {
                    for t in 0..d2 {
                        let mut f = vec![Q::zero(); d1];
                        f[s] = Q::one();
                        let mut g = vec![Q::zero(); d2];
                        g[t] = Q::one();
                        let fg = ring.product(&la, &m1, &f, &mu, &m2, &g);
                        let gf = ring.product(&mu, &m2, &g, &la, &m1, &f);
                        assert_eq!(fg, gf);
                    }
                }
            }
        }
    }

    #[test]
    fn a1_clebsch_gordan_embedding() {
        // L(2ϖ) ↪ L(ϖ)⊗L(ϖ): all three weight pieces rank 1 (symmetric part).
        let ring = RingTruncation::build(a1(), 2, 2).unwrap();
        for m in [vec![0i64], vec![1], vec![2]] {
            assert_eq!(ring.dim(&[2], &m), 1);
            assert!(*ring.surjective.get(&(vec![1], vec![1], m)).unwrap());
        }
    }

    #[test]
    fn a1_pluecker_kernel_is_antisymmetric_line() {
        let ring = RingTruncation::build(a1(), 2, 2).unwrap();
        let qs = pluecker_quadrics(&ring).unwrap();
        let total: usize = qs.spaces.iter().map(|s| s.kernel.len()).sum();
        assert_eq!(total, 1);
        let sym: usize = qs
            .spaces
            .iter()
            .map(|s| s.sym_kernel_dim.unwrap_or(0))
            .sum();
        assert_eq!(sym, 0);
    }

    #[test]
    fn a2_mixed_quadric_count() {
        // dim(3⊗3̄) − dim L(ϖ1+ϖ2) = 9 − 8 = 1 at full window
        let ring = RingTruncation::build(a2(), 2, 3).unwrap();
        let qs = pluecker_quadrics(&ring).unwrap();
        let mixed: usize = qs
            .spaces
            .iter()
            .filter(|s| s.i == 0 && s.j == 1)
            .map(|s| s.kernel.len())
            .sum();
        assert_eq!(mixed, 1);
    }

    #[test]
    fn quadrics_vanish_on_extremal_points() {
        let mut ring = RingTruncation::build(a2(), 2, 4).unwrap();
        let qs = pluecker_quadrics(&ring).unwrap();
        assert!(quadrics_vanish_on_extremal(&mut ring, &qs, 3).unwrap());
    }

    #[test]
    fn presentation_a1_a2() {
        let mut ring = RingTruncation::build(a1(), 3, 3).unwrap();
        let rep = verify_degree2_presentation(&mut ring).unwrap();
        assert!(rep.pass, "{:?}", rep.rows);
        let mut ring = RingTruncation::build(a2(), 3, 6).unwrap();
        let rep = verify_degree2_presentation(&mut ring).unwrap();
        assert!(rep.pass, "{:?}", rep.rows);
    }

    #[test]
    fn ideal_of_identity_is_zero() {
        let mut ring = RingTruncation::build(a2(), 2, 3).unwrap();
        let e = WeylElement::identity(&ring.gcm.clone());
        let ideal = demazure_ideal(&mut ring, &e).unwrap();
        assert!(ideal.pieces.is_empty());
        let rep = verify_ideal(&mut ring, &ideal).unwrap();
        assert!(rep.pass);
    }

    #[test]
    fn ideal_s1_closed_and_dims() {
        let g = a2();
        let mut ring = RingTruncation::build(g.clone(), 2, 3).unwrap();
        let s1 = canonicalize(&g, &[0]);
        let ideal = demazure_ideal(&mut ring, &s1).unwrap();
        let rep = verify_ideal(&mut ring, &ideal).unwrap();
        assert!(rep.pass, "{rep:?}");
    }

    #[test]
    fn tensor_embedding_accessor() {
        // A1 at weight depth 1: both splits (0)+(1) and (1)+(0) appear and
        // the embedding has full column rank (= injectivity).
        let ring = RingTruncation::build(a1(), 2, 2).unwrap();
        let (labels, mat) = ring.tensor_embedding(&[1], &[1], &[1]).unwrap();
        assert_eq!(labels.len(), 2);
        assert_eq!(mat.len(), 2);
        assert_eq!(crate::linalg::rank(mat), 1);
    }

    #[test]
    fn structure_constant_triples_are_exact_fractions() {
        let ring = RingTruncation::build(a1(), 2, 2).unwrap();
        let triples = ring.comul_triples(&[1], &[1]);
        assert!(!triples.is_empty());
        for (_, _, value) in &triples {
            // integer or p/q form
            assert!(value.split('/').all(|part| part.parse::<i64>().is_ok()));
        }
    }

    #[test]
    fn eval_pairing_examples() {
        let mut ring = RingTruncation::build(a1(), 2, 2).unwrap();
        // empty word against the unit covector
        assert_eq!(ring.eval_pairing(&[0], &FWord::empty(), 0), Q::one());
        // dual-basis orthogonality at (2ϖ, depth 1)
        let f1 = FWord(vec![(0, 1)]);
        assert_eq!(ring.eval_pairing(&[2], &f1, 0), Q::one());
    }
}
