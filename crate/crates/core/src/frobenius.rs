//! Char-p Frobenius splittings of truncated section rings: reduction of the
//! integral structure mod p, existence of a splitting by exact linear solve,
//! compatibility with Demazure ideals, and the B-canonical degree bound.

use std::collections::BTreeMap;

use num::One;

use crate::error::{KmError, Result};
use crate::families::lattice_rank_stability;
use crate::fword::WordVec;
use crate::linalg::{fp_nullspace, fp_rref, fp_rref_contains, q_mod_p, Q};
use crate::ring::{PieceKey, RingTruncation};
use crate::weyl::WeylElement;

/// Subspace over F_p in canonical RREF form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpSpace {
    pub ambient: usize,
    rows: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

impl FpSpace {
    pub fn zero(ambient: usize) -> Self {
        FpSpace {
            ambient,
            rows: vec![],
            pivots: vec![],
        }
    }

    pub fn from_rows(ambient: usize, rows: Vec<Vec<u64>>, p: u64) -> Self {
        let mut rows: Vec<Vec<u64>> = rows
            .into_iter()
            .map(|r| r.iter().map(|x| x % p).collect())
            .filter(|r: &Vec<u64>| r.iter().any(|&x| x != 0))
            .collect();
        let pivots = fp_rref(&mut rows, p);
        FpSpace {
            ambient,
            rows,
            pivots,
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.rows
    }

    pub fn contains_vec(&self, v: &[u64], p: u64) -> bool {
        fp_rref_contains(&self.rows, &self.pivots, v, p)
    }

    /// Orthogonal complement (= annihilator in dual coordinates).
    pub fn complement(&self, p: u64) -> FpSpace {
        if self.rows.is_empty() {
            let rows = (0..self.ambient)
                .map(|i| {
                    let mut v = vec![0u64; self.ambient];
                    v[i] = 1;
                    v
                })
                .collect();
            return FpSpace::from_rows(self.ambient, rows, p);
        }
        let ns = fp_nullspace(&self.rows, self.ambient, p);
        FpSpace::from_rows(self.ambient, ns, p)
    }
}

struct FpEntry {
    r: usize,
    m1: Vec<i64>,
    s: usize,
    m2: Vec<i64>,
    t: usize,
    c: u64,
}

/// The truncated ring with structure constants over F_p. The exact ring is
/// retained for on-demand reduction of action matrices.
pub struct FpTruncation {
    pub p: u64,
    ring: RingTruncation,
    pub pieces: BTreeMap<PieceKey, usize>,
    comul: BTreeMap<(Vec<i64>, Vec<i64>), BTreeMap<Vec<i64>, Vec<FpEntry>>>,
}

fn reduce_rows(rows: &[Vec<Q>], p: u64, what: &str, la: &[i64], m: &[i64]) -> Result<Vec<Vec<u64>>> {
    rows.iter()
        .map(|r| {
            r.iter()
                .map(|x| {
                    q_mod_p(x, p).ok_or_else(|| KmError::UnstableLattice {
                        p,
                        lambda: la.to_vec(),
                        depth: m.to_vec(),
                        detail: format!("{what} has p in a denominator"),
                    })
                })
                .collect()
        })
        .collect()
}

/// Reduce a built truncation mod p. Rank stability of the integral word
/// lattice is asserted for every stored piece. The ring must be built in
/// integral mode (HNF lattice bases), otherwise an unluckily chosen pivot
/// word can put p into denominators.
pub fn reduce_mod_p(mut ring: RingTruncation, p: u64) -> Result<FpTruncation> {
    assert!(p >= 2, "p must be prime");
    assert!(
        ring.integral,
        "reduce_mod_p needs a ring built with RingTruncation::build_integral"
    );
    let piece_keys: Vec<PieceKey> = ring.pieces.keys().cloned().collect();
    for (la, m) in &piece_keys {
        let module = ring.module_mut(la);
        let rep = lattice_rank_stability(module, m, p);
        if !rep.pass {
            return Err(KmError::UnstableLattice {
                p,
                lambda: la.clone(),
                depth: m.clone(),
                detail: format!(
                    "word lattice rank {:?} vs dim {} (p-integral: {})",
                    rep.rank_mod_p, rep.dim, rep.p_integral
                ),
            });
        }
    }
    let mut comul = BTreeMap::new();
    for la in ring.lambdas.clone() {
        for mu in ring.lambdas.clone() {
            let Some(table) = ring.comul_table(&la, &mu) else {
                continue;
            };
            let mut out: BTreeMap<Vec<i64>, Vec<FpEntry>> = BTreeMap::new();
            for (m, entries) in table {
                let mut v = Vec::new();
                for e in entries {
                    let c = q_mod_p(&e.coeff, p).ok_or_else(|| KmError::UnstableLattice {
                        p,
                        lambda: la.clone(),
                        depth: m.clone(),
                        detail: "structure constant has p in a denominator".to_string(),
                    })?;
                    if c != 0 {
                        v.push(FpEntry {
                            r: e.r,
                            m1: e.m1.clone(),
                            s: e.s,
                            m2: e.m2.clone(),
                            t: e.t,
                            c,
                        });
                    }
                }
                out.insert(m.clone(), v);
            }
            comul.insert((la.clone(), mu.clone()), out);
        }
    }
    Ok(FpTruncation {
        p,
        pieces: ring.pieces.clone(),
        ring,
        comul,
    })
}

impl FpTruncation {
    pub fn gcm(&self) -> &crate::gcm::Gcm {
        &self.ring.gcm
    }

    pub fn deg_bound(&self) -> usize {
        self.ring.deg_bound
    }

    pub fn depth_bound(&self) -> usize {
        self.ring.depth_bound
    }

    pub fn lambdas(&self) -> &[Vec<i64>] {
        &self.ring.lambdas
    }

    pub fn dim(&self, la: &[i64], m: &[i64]) -> usize {
        self.pieces
            .get(&(la.to_vec(), m.to_vec()))
            .copied()
            .unwrap_or(0)
    }

    pub fn product(
        &self,
        la: &[i64],
        m1: &[i64],
        f: &[u64],
        mu: &[i64],
        m2: &[i64],
        g: &[u64],
    ) -> Vec<u64> {
        let p = self.p;
        let sum: Vec<i64> = la.iter().zip(mu).map(|(a, b)| a + b).collect();
        let m: Vec<i64> = m1.iter().zip(m2).map(|(a, b)| a + b).collect();
        let mut out = vec![0u64; self.dim(&sum, &m)];
        let Some(table) = self.comul.get(&(la.to_vec(), mu.to_vec())) else {
            return out;
        };
        let Some(entries) = table.get(&m) else {
            return out;
        };
        for e in entries {
            if e.m1 == m1 && e.m2 == m2 {
                out[e.r] = (out[e.r] + f[e.s] % p * (g[e.t] % p) % p * e.c) % p;
            }
        }
        out
    }

    /// Module-side `E_i^{(k)}` matrix from `(λ, m)` to `(λ, m − k e_i)`
    /// reduced mod p (rows = images of pivots).
    pub fn e_matrix(&mut self, la: &[i64], i: usize, k: u32, m: &[i64]) -> Result<Vec<Vec<u64>>> {
        let p = self.p;
        let rows = self.ring.module_mut(la).action_e_matrix(i, k, m);
        reduce_rows(&rows, p, "E-action matrix", la, m)
    }

    pub fn f_matrix(&mut self, la: &[i64], i: usize, a: u32, m: &[i64]) -> Result<Vec<Vec<u64>>> {
        let p = self.p;
        let rows = self.ring.module_mut(la).action_f_matrix(i, a, m);
        reduce_rows(&rows, p, "F-action matrix", la, m)
    }

    /// Thick Demazure subspaces over F_p per stored piece of degree λ:
    /// the divided-power lowering closure of the reduced extremal line.
    pub fn thick_spaces_fp(
        &mut self,
        la: &[i64],
        w: &WeylElement,
    ) -> Result<BTreeMap<Vec<i64>, FpSpace>> {
        let p = self.p;
        let d = self.ring.depth_bound;
        let rank = self.ring.gcm.rank();
        let (seed_content, seed) = {
            let module = self.ring.module_mut(la);
            let rep = module.coset_rep(w);
            // Unnormalized extremal word: contravariant norm 1, hence
            // primitive in the integral lattice.
            let v = module.extremal_vector(&rep);
            let mut raw = WordVec::new();
            for (k, _) in v.coords.iter() {
                raw.insert(k.clone(), Q::one());
            }
            let red = module.reduce(&v.content.clone(), &raw);
            (v.content, red)
        };
        let mut out: BTreeMap<Vec<i64>, FpSpace> = BTreeMap::new();
        if seed_content.iter().sum::<i64>() > d as i64 {
            return Ok(out);
        }
        let seed_fp = reduce_rows(&[seed], p, "extremal seed", la, &seed_content)?
            .pop()
            .unwrap();
        let dim0 = self.dim(la, &seed_content);
        out.insert(
            seed_content.clone(),
            FpSpace::from_rows(dim0, vec![seed_fp], p),
        );
        // Closure by increasing total depth.
        let grid: Vec<Vec<i64>> = crate::ring::depth_vectors(rank, d)
            .into_iter()
            .filter(|m| {
                m.iter().zip(&seed_content).all(|(a, b)| a >= b) && *m != seed_content
            })
            .collect();
        for m in grid {
            let ambient = self.dim(la, &m);
            if ambient == 0 {
                continue;
            }
            let mut rows: Vec<Vec<u64>> = Vec::new();
            for i in 0..rank {
                for a in 1..=(m[i] - seed_content[i]) {
                    let mut src = m.clone();
                    src[i] -= a;
                    let Some(space) = out.get(&src) else { continue };
                    if space.dim() == 0 {
                        continue;
                    }
                    let src_rows: Vec<Vec<u64>> = space.rows().to_vec();
                    let fmat = self.f_matrix(la, i, a as u32, &src)?;
                    for v in src_rows {
                        // image = v · fmat
                        let mut img = vec![0u64; ambient];
                        for (row, &coef) in fmat.iter().zip(&v) {
                            if coef % p == 0 {
                                continue;
                            }
                            for (c, x) in row.iter().enumerate() {
                                img[c] = (img[c] + coef % p * (x % p)) % p;
                            }
                        }
                        rows.push(img);
                    }
                }
            }
            let sp = FpSpace::from_rows(ambient, rows, p);
            if sp.dim() > 0 {
                out.insert(m, sp);
            }
        }
        Ok(out)
    }
}

/// Demazure ideal `I^w` over F_p: annihilator of the thick subspaces.
pub struct FpIdeal {
    pub w: WeylElement,
    /// RREF basis per piece; missing key = zero piece.
    pub pieces: BTreeMap<PieceKey, FpSpace>,
}

pub fn fp_demazure_ideal(fp: &mut FpTruncation, w: &WeylElement) -> Result<FpIdeal> {
    let lambdas = fp.lambdas().to_vec();
    let p = fp.p;
    let mut pieces = BTreeMap::new();
    for la in &lambdas {
        let thick = fp.thick_spaces_fp(la, w)?;
        let keys: Vec<PieceKey> = fp
            .pieces
            .keys()
            .filter(|(l, _)| l == la)
            .cloned()
            .collect();
        for (l, m) in keys {
            let ambient = fp.dim(&l, &m);
            let sub = thick
                .get(&m)
                .cloned()
                .unwrap_or_else(|| FpSpace::zero(ambient));
            let ann = sub.complement(p);
            if ann.dim() > 0 {
                pieces.insert((l, m), ann);
            }
        }
    }
    Ok(FpIdeal {
        w: w.clone(),
        pieces,
    })
}

/// H-weight-graded splitting candidate: one matrix per target piece
/// `(λ, m)`, mapping the source piece `(pλ, pm)`; all other pieces map to 0.
#[derive(Debug, Clone)]
pub struct SplittingCandidate {
    pub p: u64,
    /// `(λ, m) → matrix` with `dim(λ,m)` rows and `dim(pλ,pm)` columns.
    pub maps: BTreeMap<PieceKey, Vec<Vec<u64>>>,
}

impl SplittingCandidate {
    /// Apply φ to an element of the piece `(laSrc, mSrc)`; returns the
    /// target key and coordinates, or `None` when φ vanishes on the piece.
    pub fn apply(
        &self,
        p: u64,
        la_src: &[i64],
        m_src: &[i64],
        v: &[u64],
    ) -> Option<(Vec<i64>, Vec<i64>, Vec<u64>)> {
        if la_src.iter().any(|&x| x % p as i64 != 0) || m_src.iter().any(|&x| x % p as i64 != 0) {
            return None;
        }
        let la: Vec<i64> = la_src.iter().map(|x| x / p as i64).collect();
        let m: Vec<i64> = m_src.iter().map(|x| x / p as i64).collect();
        let mat = self.maps.get(&(la.clone(), m.clone()))?;
        let out: Vec<u64> = mat
            .iter()
            .map(|row| {
                row.iter()
                    .zip(v)
                    .fold(0u64, |acc, (a, b)| (acc + a * (b % p)) % p)
            })
            .collect();
        Some((la, m, out))
    }
}

#[derive(Debug, Clone, Default)]
pub struct SplittingOptions {
    /// Add compatibility constraints with `I^w` for these elements.
    pub compat: Vec<WeylElement>,
    /// Add the B-canonical degree constraints for every index.
    pub canonical: bool,
}

struct VarTable {
    index: BTreeMap<(Vec<i64>, Vec<i64>, usize, usize), usize>,
    shapes: BTreeMap<PieceKey, (usize, usize)>,
}

impl VarTable {
    fn id(&self, la: &[i64], m: &[i64], row: usize, col: usize) -> usize {
        self.index[&(la.to_vec(), m.to_vec(), row, col)]
    }
}

fn divisible(v: &[i64], p: u64) -> Option<Vec<i64>> {
    if v.iter().all(|&x| x % p as i64 == 0) {
        Some(v.iter().map(|x| x / p as i64).collect())
    } else {
        None
    }
}

/// Solve for an H-graded Frobenius splitting of the window. Returns `None`
/// when the (finite) window system is infeasible.
pub fn find_splitting(
    fp: &mut FpTruncation,
    opts: &SplittingOptions,
) -> Result<Option<SplittingCandidate>> {
    let p = fp.p;
    if fp.deg_bound() < p as usize {
        return Err(KmError::WindowTooSmall(format!(
            "no f^p g fits: degree bound {} < p = {p}",
            fp.deg_bound()
        )));
    }
    let rank = fp.gcm().rank();
    let lambdas = fp.lambdas().to_vec();
    let depth_bound = fp.depth_bound();

    // Unknowns: φ_{λ,m}: (pλ, pm) → (λ, m) for stored source pieces.
    let mut vars = VarTable {
        index: BTreeMap::new(),
        shapes: BTreeMap::new(),
    };
    for la in &lambdas {
        let pla: Vec<i64> = la.iter().map(|x| x * p as i64).collect();
        if pla.iter().sum::<i64>() > fp.deg_bound() as i64 {
            continue;
        }
        for m in crate::ring::depth_vectors(rank, depth_bound) {
            let pm: Vec<i64> = m.iter().map(|x| x * p as i64).collect();
            if pm.iter().sum::<i64>() > depth_bound as i64 {
                continue;
            }
            let src = fp.dim(&pla, &pm);
            let tgt = fp.dim(la, &m);
            if src == 0 || tgt == 0 {
                continue;
            }
            vars.shapes.insert((la.clone(), m.clone()), (tgt, src));
            for r in 0..tgt {
                for c in 0..src {
                    let next = vars.index.len();
                    vars.index
                        .insert((la.clone(), m.clone(), r, c), next);
                }
            }
        }
    }
    let nvars = vars.index.len();
    // Equations: rows of [coeffs | rhs].
    let mut eqs: Vec<Vec<u64>> = Vec::new();
    let mut push_eq = |row: Vec<u64>| {
        if row.iter().any(|&x| x % p != 0) {
            eqs.push(row);
        }
    };

    // Unit: φ(1) = 1.
    let zero_la = vec![0i64; rank];
    if vars.shapes.contains_key(&(zero_la.clone(), zero_la.clone())) {
        let mut row = vec![0u64; nvars + 1];
        row[vars.id(&zero_la, &zero_la, 0, 0)] = 1;
        row[nvars] = 1;
        push_eq(row);
    }

    // Frobenius linearity on generators: φ(f^p g) = f φ(g).
    for i in 0..rank {
        let mut wi = vec![0i64; rank];
        wi[i] = 1;
        for m_f in crate::ring::depth_vectors(rank, depth_bound) {
            let df = fp.dim(&wi, &m_f);
            if df == 0 {
                continue;
            }
            let pmf: Vec<i64> = m_f.iter().map(|x| x * p as i64).collect();
            if pmf.iter().sum::<i64>() > depth_bound as i64 {
                continue;
            }
            for s_f in 0..df {
                let mut f = vec![0u64; df];
                f[s_f] = 1;
                // f^p by iterated products
                let mut fp_pow = f.clone();
                let mut la_acc = wi.clone();
                let mut m_acc = m_f.clone();
                for _ in 1..p {
                    fp_pow = fp.product(&la_acc, &m_acc, &fp_pow, &wi, &m_f, &f);
                    for (a, b) in la_acc.iter_mut().zip(&wi) {
                        *a += b;
                    }
                    for (a, b) in m_acc.iter_mut().zip(&m_f) {
                        *a += b;
                    }
                }
                // g over p-divisible pieces (λ_g = pλ', m_g = pm').
                for lap in &lambdas {
                    let lg: Vec<i64> = lap.iter().map(|x| x * p as i64).collect();
                    let tot: i64 =
                        lg.iter().sum::<i64>() + p as i64;
                    if tot > fp.deg_bound() as i64 {
                        continue;
                    }
                    for mp in crate::ring::depth_vectors(rank, depth_bound) {
                        let mg: Vec<i64> = mp.iter().map(|x| x * p as i64).collect();
                        let dg = fp.dim(&lg, &mg);
                        if dg == 0 {
                            continue;
                        }
                        let htot: i64 =
                            m_acc.iter().sum::<i64>() + mg.iter().sum::<i64>();
                        if htot > depth_bound as i64 {
                            continue;
                        }
                        if !vars.shapes.contains_key(&(lap.clone(), mp.clone())) {
                            continue;
                        }
                        // target piece of the identity
                        let la_t: Vec<i64> = wi.iter().zip(lap).map(|(a, b)| a + b).collect();
                        let m_t: Vec<i64> = m_f.iter().zip(&mp).map(|(a, b)| a + b).collect();
                        let dt = fp.dim(&la_t, &m_t);
                        if dt == 0 {
                            continue;
                        }
                        let lhs_defined = vars.shapes.contains_key(&(la_t.clone(), m_t.clone()));
                        for t in 0..dg {
                            let mut g = vec![0u64; dg];
                            g[t] = 1;
                            // h = f^p · g in piece (p·la_t, p·m_t)
                            let h = fp.product(&la_acc, &m_acc, &fp_pow, &lg, &mg, &g);
                            // Each target coordinate gives one equation.
                            for r in 0..dt {
                                let mut row = vec![0u64; nvars + 1];
                                if lhs_defined {
                                    for (c, hv) in h.iter().enumerate() {
                                        if hv % p != 0 {
                                            let id = vars.id(&la_t, &m_t, r, c);
                                            row[id] = (row[id] + hv) % p;
                                        }
                                    }
                                }
                                // RHS: (f · φ(g))_r, unknowns of piece (λ', m').
                                let (tgt_g, _src_g) = vars.shapes[&(lap.clone(), mp.clone())];
                                for sg in 0..tgt_g {
                                    let mut unit = vec![0u64; tgt_g];
                                    unit[sg] = 1;
                                    let prod =
                                        fp.product(&wi, &m_f, &f, lap, &mp, &unit);
                                    let coeff = prod[r] % p;
                                    if coeff != 0 {
                                        let id = vars.id(lap, &mp, sg, t);
                                        row[id] = (row[id] + p - coeff) % p;
                                    }
                                }
                                push_eq(row);
                            }
                        }
                    }
                }
            }
        }
    }

    // Compatibility constraints: φ(I^w ∩ source piece) ⊆ I^w target piece.
    {
        for w in &opts.compat {
            let ideal = fp_demazure_ideal(fp, w)?;
            for ((la, m), (tgt, _src)) in vars.shapes.clone() {
                let pla: Vec<i64> = la.iter().map(|x| x * p as i64).collect();
                let pm: Vec<i64> = m.iter().map(|x| x * p as i64).collect();
                let Some(isrc) = ideal.pieces.get(&(pla.clone(), pm.clone())) else {
                    continue;
                };
                let itgt = ideal
                    .pieces
                    .get(&(la.clone(), m.clone()))
                    .cloned()
                    .unwrap_or_else(|| FpSpace::zero(tgt));
                // membership in rowspace(itgt) ⟺ orthogonal to its complement
                let comp = itgt.complement(p);
                for v in isrc.rows() {
                    for b in comp.rows() {
                        let mut row = vec![0u64; nvars + 1];
                        for r in 0..tgt {
                            if b[r] % p == 0 {
                                continue;
                            }
                            for (c, x) in v.iter().enumerate() {
                                if x % p != 0 {
                                    let id = vars.id(&la, &m, r, c);
                                    row[id] = (row[id] + b[r] % p * (x % p)) % p;
                                }
                            }
                        }
                        push_eq(row);
                    }
                }
            }
        }
    }

    // B-canonical degree constraints, linear in φ.
    if opts.canonical {
        for i in 0..rank {
            let cons = canonical_constraint_rows(fp, &vars, i, nvars)?;
            for row in cons {
                push_eq(row);
            }
        }
    }

    // Solve.
    let pivots = fp_rref(&mut eqs, p);
    if pivots.iter().any(|&c| c == nvars) {
        return Ok(None);
    }
    let mut solution = vec![0u64; nvars];
    for (r, &c) in pivots.iter().enumerate() {
        solution[c] = eqs[r][nvars] % p;
    }
    let mut maps = BTreeMap::new();
    for ((la, m), (tgt, src)) in &vars.shapes {
        let mut mat = vec![vec![0u64; *src]; *tgt];
        for r in 0..*tgt {
            for c in 0..*src {
                mat[r][c] = solution[vars.id(la, m, r, c)];
            }
        }
        maps.insert((la.clone(), m.clone()), mat);
    }
    let cand = SplittingCandidate { p, maps };
    // Re-verify the defining identities post-solve.
    debug_assert!(verify_splitting(fp, &cand)?);
    Ok(Some(cand))
}

/// Exact window re-check of unit + Frobenius linearity.
pub fn verify_splitting(fp: &mut FpTruncation, cand: &SplittingCandidate) -> Result<bool> {
    let p = fp.p;
    let rank = fp.gcm().rank();
    let zero = vec![0i64; rank];
    if let Some((_, _, out)) = cand.apply(p, &zero, &zero, &[1]) {
        if out != vec![1u64] {
            return Ok(false);
        }
    } else {
        return Ok(false);
    }
    // φ(f^p g) = f φ(g) over generator f and all stored p-divisible g.
    let lambdas = fp.lambdas().to_vec();
    for i in 0..rank {
        let mut wi = vec![0i64; rank];
        wi[i] = 1;
        for m_f in crate::ring::depth_vectors(rank, fp.depth_bound()) {
            let df = fp.dim(&wi, &m_f);
            for s_f in 0..df {
                let mut f = vec![0u64; df];
                f[s_f] = 1;
                let mut fpow = f.clone();
                let mut la_acc = wi.clone();
                let mut m_acc = m_f.clone();
                let mut ok = true;
                for _ in 1..p {
                    if la_acc.iter().sum::<i64>() + 1 > fp.deg_bound() as i64
                        || m_acc.iter().sum::<i64>() + m_f.iter().sum::<i64>()
                            > fp.depth_bound() as i64
                    {
                        ok = false;
                        break;
                    }
                    fpow = fp.product(&la_acc, &m_acc, &fpow, &wi, &m_f, &f);
                    for (a, b) in la_acc.iter_mut().zip(&wi) {
                        *a += b;
                    }
                    for (a, b) in m_acc.iter_mut().zip(&m_f) {
                        *a += b;
                    }
                }
                if !ok {
                    continue;
                }
                for lg in &lambdas {
                    for mg in crate::ring::depth_vectors(rank, fp.depth_bound()) {
                        let dg = fp.dim(lg, &mg);
                        if dg == 0 {
                            continue;
                        }
                        let lsum: Vec<i64> = la_acc.iter().zip(lg).map(|(a, b)| a + b).collect();
                        let msum: Vec<i64> = m_acc.iter().zip(&mg).map(|(a, b)| a + b).collect();
                        if lsum.iter().sum::<i64>() > fp.deg_bound() as i64
                            || msum.iter().sum::<i64>() > fp.depth_bound() as i64
                        {
                            continue;
                        }
                        for t in 0..dg {
                            let mut g = vec![0u64; dg];
                            g[t] = 1;
                            let h = fp.product(&la_acc, &m_acc, &fpow, lg, &mg, &g);
                            let lhs = cand
                                .apply(p, &lsum, &msum, &h)
                                .map(|(_, _, v)| v)
                                .unwrap_or_else(|| vec![0u64; fp.dim(
                                    &lsum.iter().map(|x| x / p as i64).collect::<Vec<i64>>(),
                                    &msum.iter().map(|x| x / p as i64).collect::<Vec<i64>>(),
                                )]);
                            let rhs = match cand.apply(p, lg, &mg, &g) {
                                Some((lg2, mg2, phig)) => {
                                    fp.product(&wi, &m_f, &f, &lg2, &mg2, &phig)
                                }
                                None => vec![],
                            };
                            let lhs_nonzero = lhs.iter().any(|&x| x % p != 0);
                            let rhs_nonzero = rhs.iter().any(|&x| x % p != 0);
                            if rhs.is_empty() {
                                if lhs_nonzero {
                                    return Ok(false);
                                }
                            } else if lhs.len() != rhs.len() {
                                if lhs_nonzero || rhs_nonzero {
                                    return Ok(false);
                                }
                            } else if lhs
                                .iter()
                                .zip(&rhs)
                                .any(|(a, b)| (a + p - b % p) % p != 0)
                            {
                                return Ok(false);
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(true)
}

fn mod_ideal(ideal: &FpIdeal, key: &PieceKey, v: &[u64], p: u64) -> Vec<u64> {
    match ideal.pieces.get(key) {
        None => v.to_vec(),
        Some(space) => {
            let mut rem: Vec<u64> = v.iter().map(|x| x % p).collect();
            for (r, &pc) in space.pivots.iter().enumerate() {
                if rem[pc] != 0 {
                    let f = rem[pc];
                    for c in 0..rem.len() {
                        rem[c] = (rem[c] + (p - f) * (space.rows[r][c] % p) % p) % p;
                    }
                }
            }
            rem
        }
    }
}

/// A compatible splitting restricts to a splitting of `R/I^w`: re-check the
/// unit and Frobenius linearity on canonical quotient representatives.
pub fn verify_quotient_splitting(
    fp: &mut FpTruncation,
    cand: &SplittingCandidate,
    ideal: &FpIdeal,
) -> Result<bool> {
    let p = fp.p;
    let rank = fp.gcm().rank();
    let zero = vec![0i64; rank];
    let unit_key = (zero.clone(), zero.clone());
    let unit = mod_ideal(ideal, &unit_key, &[1], p);
    if unit != vec![1u64] {
        // the unit may only vanish for the empty quotient
        return Ok(ideal.pieces.contains_key(&unit_key));
    }
    let Some((_, _, img)) = cand.apply(p, &zero, &zero, &unit) else {
        return Ok(false);
    };
    if mod_ideal(ideal, &unit_key, &img, p) != vec![1u64] {
        return Ok(false);
    }
    let lambdas = fp.lambdas().to_vec();
    for i in 0..rank {
        let mut wi = vec![0i64; rank];
        wi[i] = 1;
        for m_f in crate::ring::depth_vectors(rank, fp.depth_bound()) {
            let df = fp.dim(&wi, &m_f);
            for s_f in 0..df {
                let f = mod_ideal(
                    ideal,
                    &(wi.clone(), m_f.clone()),
                    &{
                        let mut v = vec![0u64; df];
                        v[s_f] = 1;
                        v
                    },
                    p,
                );
                if f.iter().all(|&x| x == 0) {
                    continue;
                }
                // f^p on quotient representatives, reducing mod I as we go
                let mut fpow = f.clone();
                let mut la_acc = wi.clone();
                let mut m_acc = m_f.clone();
                let mut fits = true;
                for _ in 1..p {
                    if la_acc.iter().sum::<i64>() + 1 > fp.deg_bound() as i64
                        || m_acc.iter().sum::<i64>() + m_f.iter().sum::<i64>()
                            > fp.depth_bound() as i64
                    {
                        fits = false;
                        break;
                    }
                    let prod = fp.product(&la_acc, &m_acc, &fpow, &wi, &m_f, &f);
                    for (a, b) in la_acc.iter_mut().zip(&wi) {
                        *a += b;
                    }
                    for (a, b) in m_acc.iter_mut().zip(&m_f) {
                        *a += b;
                    }
                    fpow = mod_ideal(ideal, &(la_acc.clone(), m_acc.clone()), &prod, p);
                }
                if !fits {
                    continue;
                }
                for lg in &lambdas {
                    for mg in crate::ring::depth_vectors(rank, fp.depth_bound()) {
                        let dg = fp.dim(lg, &mg);
                        if dg == 0 {
                            continue;
                        }
                        let lsum: Vec<i64> =
                            la_acc.iter().zip(lg).map(|(a, b)| a + b).collect();
                        let msum: Vec<i64> =
                            m_acc.iter().zip(&mg).map(|(a, b)| a + b).collect();
                        if lsum.iter().sum::<i64>() > fp.deg_bound() as i64
                            || msum.iter().sum::<i64>() > fp.depth_bound() as i64
                        {
                            continue;
                        }
                        for t in 0..dg {
                            let mut g = vec![0u64; dg];
                            g[t] = 1;
                            let g = mod_ideal(ideal, &(lg.clone(), mg.clone()), &g, p);
                            let h = fp.product(&la_acc, &m_acc, &fpow, lg, &mg, &g);
                            let lhs = cand
                                .apply(p, &lsum, &msum, &h)
                                .map(|(la_t, m_t, v)| {
                                    mod_ideal(ideal, &(la_t, m_t), &v, p)
                                });
                            let rhs = cand.apply(p, lg, &mg, &g).map(|(lg2, mg2, phig)| {
                                let prod = fp.product(&wi, &m_f, &f, &lg2, &mg2, &phig);
                                let la_t: Vec<i64> =
                                    wi.iter().zip(&lg2).map(|(a, b)| a + b).collect();
                                let m_t: Vec<i64> =
                                    m_f.iter().zip(&mg2).map(|(a, b)| a + b).collect();
                                mod_ideal(ideal, &(la_t, m_t), &prod, p)
                            });
                            let zeroed = |v: &Option<Vec<u64>>| {
                                v.as_ref().map_or(true, |x| x.iter().all(|&y| y % p == 0))
                            };
                            match (&lhs, &rhs) {
                                (Some(a), Some(b)) => {
                                    if a != b {
                                        return Ok(false);
                                    }
                                }
                                _ => {
                                    if !(zeroed(&lhs) && zeroed(&rhs)) {
                                        return Ok(false);
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(true)
}

/// `φ(Fr_* I) ⊆ I`, checked per piece.
pub fn check_compatibility(
    fp: &mut FpTruncation,
    cand: &SplittingCandidate,
    ideal: &FpIdeal,
) -> Result<bool> {
    let p = fp.p;
    for ((la, m), mat) in &cand.maps {
        let pla: Vec<i64> = la.iter().map(|x| x * p as i64).collect();
        let pm: Vec<i64> = m.iter().map(|x| x * p as i64).collect();
        let Some(isrc) = ideal.pieces.get(&(pla, pm)) else {
            continue;
        };
        let tgt_dim = mat.len();
        let itgt = ideal
            .pieces
            .get(&(la.clone(), m.clone()))
            .cloned()
            .unwrap_or_else(|| FpSpace::zero(tgt_dim));
        for v in isrc.rows() {
            let img: Vec<u64> = mat
                .iter()
                .map(|row| {
                    row.iter()
                        .zip(v)
                        .fold(0u64, |acc, (a, b)| (acc + a * (b % p)) % p)
                })
                .collect();
            if img.iter().all(|&x| x % p == 0) {
                continue;
            }
            if !itgt.contains_vec(&img, p) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The coefficient maps `C_N = Σ_{pk+m=N} (−1)^k D_k φ D_m` must vanish for
/// `N ≥ p` (B-canonical degree bound after p-th-root absorption of the
/// one-parameter variable). `D_k` is the transpose of `E_i^{(k)}`.
pub fn check_canonical_degree(
    fp: &mut FpTruncation,
    cand: &SplittingCandidate,
    i: usize,
) -> Result<bool> {
    let p = fp.p;
    let lambdas = fp.lambdas().to_vec();
    let rank = fp.gcm().rank();
    let d = fp.depth_bound();
    for la_src in &lambdas {
        for mu in crate::ring::depth_vectors(rank, d) {
            let dsrc = fp.dim(la_src, &mu);
            if dsrc == 0 {
                continue;
            }
            for sf in 0..dsrc {
                let mut f = vec![0u64; dsrc];
                f[sf] = 1;
                // Collect w^N coefficients: N = pk + m.
                let mut coeffs: BTreeMap<i64, BTreeMap<(Vec<i64>, Vec<i64>), Vec<u64>>> =
                    BTreeMap::new();
                for m in 0..=(d as i64) {
                    // D_m f lives at (la_src, mu + m e_i): dual transpose of E^{(m)}.
                    let mut mu_up = mu.clone();
                    mu_up[i] += m;
                    if mu_up.iter().sum::<i64>() > d as i64 {
                        break;
                    }
                    if fp.dim(la_src, &mu_up) == 0 {
                        continue;
                    }
                    let dmf = if m == 0 {
                        f.clone()
                    } else {
                        // (D_m f)_u = Σ_v f_v (E^{(m)})_{u→v}
                        let e = fp.e_matrix(la_src, i, m as u32, &mu_up)?;
                        (0..fp.dim(la_src, &mu_up))
                            .map(|u| {
                                let mut acc = 0u64;
                                for (v, x) in e[u].iter().enumerate() {
                                    acc = (acc + x % p * (f[v] % p)) % p;
                                }
                                acc
                            })
                            .collect()
                    };
                    let Some((la_t, m_t, phi)) = cand.apply(p, la_src, &mu_up, &dmf) else {
                        continue;
                    };
                    if phi.iter().all(|&x| x % p == 0) {
                        continue;
                    }
                    // Outer D_k: (λ_t, m_t) → (λ_t, m_t + k e_i), sign (−1)^k.
                    for k in 0..=(d as i64) {
                        let mut tgt = m_t.clone();
                        tgt[i] += k;
                        if tgt.iter().sum::<i64>() > d as i64 {
                            break;
                        }
                        let dt = fp.dim(&la_t, &tgt);
                        if dt == 0 {
                            continue;
                        }
                        let dk = if k == 0 {
                            phi.clone()
                        } else {
                            let e = fp.e_matrix(&la_t, i, k as u32, &tgt)?;
                            (0..dt)
                                .map(|u| {
                                    let mut acc = 0u64;
                                    for (v, x) in e[u].iter().enumerate() {
                                        acc = (acc + x % p * (phi[v] % p)) % p;
                                    }
                                    acc
                                })
                                .collect::<Vec<u64>>()
                        };
                        if dk.iter().all(|&x| x % p == 0) {
                            continue;
                        }
                        let n = p as i64 * k + m;
                        let sign_neg = k % 2 == 1;
                        let entry = coeffs
                            .entry(n)
                            .or_default()
                            .entry((la_t.clone(), tgt.clone()))
                            .or_insert_with(|| vec![0u64; dt]);
                        for (c, x) in dk.iter().enumerate() {
                            let v = if sign_neg { (p - x % p) % p } else { x % p };
                            entry[c] = (entry[c] + v) % p;
                        }
                    }
                }
                for (n, by_piece) in &coeffs {
                    if *n < p as i64 {
                        continue;
                    }
                    for (_, v) in by_piece {
                        if v.iter().any(|&x| x % p != 0) {
                            return Ok(false);
                        }
                    }
                }
            }
        }
    }
    Ok(true)
}

/// Linear constraint rows for the canonical degree bound (same expansion as
/// `check_canonical_degree`, with φ symbolic).
fn canonical_constraint_rows(
    fp: &mut FpTruncation,
    vars: &VarTable,
    i: usize,
    nvars: usize,
) -> Result<Vec<Vec<u64>>> {
    let p = fp.p;
    let lambdas = fp.lambdas().to_vec();
    let rank = fp.gcm().rank();
    let d = fp.depth_bound();
    let mut rows_out = Vec::new();
    for la_src in &lambdas {
        for mu in crate::ring::depth_vectors(rank, d) {
            let dsrc = fp.dim(la_src, &mu);
            if dsrc == 0 {
                continue;
            }
            for sf in 0..dsrc {
                let mut f = vec![0u64; dsrc];
                f[sf] = 1;
                // rows keyed by (N, piece, coordinate): each is one equation
                let mut acc: BTreeMap<(i64, Vec<i64>, Vec<i64>, usize), Vec<u64>> = BTreeMap::new();
                for m in 0..=(d as i64) {
                    let mut mu_up = mu.clone();
                    mu_up[i] += m;
                    if mu_up.iter().sum::<i64>() > d as i64 {
                        break;
                    }
                    if fp.dim(la_src, &mu_up) == 0 {
                        continue;
                    }
                    let dmf: Vec<u64> = if m == 0 {
                        f.clone()
                    } else {
                        let e = fp.e_matrix(la_src, i, m as u32, &mu_up)?;
                        (0..fp.dim(la_src, &mu_up))
                            .map(|u| {
                                let mut a = 0u64;
                                for (v, x) in e[u].iter().enumerate() {
                                    a = (a + x % p * (f[v] % p)) % p;
                                }
                                a
                            })
                            .collect()
                    };
                    // φ(D_m f): symbolic — target piece (λ', m')
                    let Some(la_t) = divisible(la_src, p) else {
                        break;
                    };
                    let Some(m_t) = divisible(&mu_up, p) else {
                        continue;
                    };
                    let Some(&(tgt_dim, _src_dim)) =
                        vars.shapes.get(&(la_t.clone(), m_t.clone()))
                    else {
                        continue;
                    };
                    for k in 0..=(d as i64) {
                        let mut tgt = m_t.clone();
                        tgt[i] += k;
                        if tgt.iter().sum::<i64>() > d as i64 {
                            break;
                        }
                        let dt = fp.dim(&la_t, &tgt);
                        if dt == 0 {
                            continue;
                        }
                        let n = p as i64 * k + m;
                        if n < p as i64 {
                            continue;
                        }
                        let emat = if k == 0 {
                            None
                        } else {
                            Some(fp.e_matrix(&la_t, i, k as u32, &tgt)?)
                        };
                        for u in 0..dt {
                            let key = (n, la_t.clone(), tgt.clone(), u);
                            let row = acc.entry(key).or_insert_with(|| vec![0u64; nvars + 1]);
                            // coefficient of φ_{la_t, m_t}[v][c]: (±1)(E_k)_{u,v}·(dmf)_c
                            for v in 0..tgt_dim {
                                let ecoef = match &emat {
                                    None => {
                                        if u == v {
                                            1
                                        } else {
                                            0
                                        }
                                    }
                                    Some(e) => e[u][v] % p,
                                };
                                if ecoef == 0 {
                                    continue;
                                }
                                let signed = if k % 2 == 1 { (p - ecoef) % p } else { ecoef };
                                for (c, x) in dmf.iter().enumerate() {
                                    if x % p == 0 {
                                        continue;
                                    }
                                    let id = vars.id(&la_t, &m_t, v, c);
                                    row[id] = (row[id] + signed * (x % p)) % p;
                                }
                            }
                        }
                    }
                }
                for (_, row) in acc {
                    rows_out.push(row);
                }
            }
        }
    }
    Ok(rows_out)
}
