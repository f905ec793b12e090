//! Generalized Cartan matrices and the weight model.
//!
//! A weight is stored as an anchor in fundamental-weight coordinates plus a
//! depth vector: `(anchor, depth)` denotes `Σ anchor_i ϖ_i − Σ depth_j α_j`.
//! Simple roots are kept linearly independent, so depth vectors compare
//! exactly even when the Cartan matrix is singular (affine type).

use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{KmError, Result};
use crate::linalg::{qz, Q, Z};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gcm {
    pub labels: Vec<String>,
    pub matrix: Vec<Vec<i64>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub symmetrizer: Option<Vec<i64>>,
}

impl Gcm {
    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    /// Cartan entry `⟨α_i^∨, α_j⟩`.
    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.matrix[i][j]
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| KmError::UnknownName(label.to_string()))
    }

    /// Symmetrized bilinear form on the root lattice, `(α_i, α_j) = d_i c_ij`,
    /// extended to depth vectors.
    pub fn root_form(&self, a: &[i64], b: &[i64]) -> Result<Q> {
        let d = self
            .symmetrizer
            .as_ref()
            .ok_or(KmError::NotSymmetrizable)?;
        let mut acc = Q::zero();
        for i in 0..self.rank() {
            for j in 0..self.rank() {
                acc += qz(d[i] * self.matrix[i][j] * a[i] * b[j]);
            }
        }
        Ok(acc)
    }
}

/// Element of `λ − Σ m_i α_i` with `λ` in fundamental-weight coordinates.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Weight {
    pub anchor: Vec<i64>,
    pub depth: Vec<i64>,
}

impl Weight {
    pub fn new(anchor: Vec<i64>, depth: Vec<i64>) -> Self {
        assert_eq!(anchor.len(), depth.len());
        Weight { anchor, depth }
    }

    pub fn from_anchor(anchor: Vec<i64>) -> Self {
        let depth = vec![0; anchor.len()];
        Weight { anchor, depth }
    }

    pub fn fundamental(rank: usize, i: usize) -> Self {
        let mut anchor = vec![0; rank];
        anchor[i] = 1;
        Weight::from_anchor(anchor)
    }

    /// ρ = Σ_i ϖ_i.
    pub fn rho(rank: usize) -> Self {
        Weight::from_anchor(vec![1; rank])
    }

    pub fn simple_root(rank: usize, i: usize) -> Self {
        let mut depth = vec![0; rank];
        depth[i] = -1;
        Weight {
            anchor: vec![0; rank],
            depth,
        }
    }

    pub fn total_depth(&self) -> i64 {
        self.depth.iter().sum()
    }

    pub fn is_dominant_anchor(&self) -> bool {
        self.anchor.iter().all(|&x| x >= 0)
    }
}

/// `⟨α_i^∨, w⟩ = anchor_i − Σ_j c_ij depth_j`.
pub fn pairing(gcm: &Gcm, i: usize, w: &Weight) -> i64 {
    let mut v = w.anchor[i];
    for j in 0..gcm.rank() {
        v -= gcm.matrix[i][j] * w.depth[j];
    }
    v
}

/// `s_i(w) = w − ⟨α_i^∨, w⟩ α_i`: anchor unchanged, depth_i increased.
pub fn reflect(gcm: &Gcm, i: usize, w: &Weight) -> Weight {
    let n = pairing(gcm, i, w);
    let mut out = w.clone();
    out.depth[i] += n;
    out
}

/// Pairing of a coroot with a pure root-lattice element given by its
/// coefficient vector: `⟨α_i^∨, Σ m_j α_j⟩ = Σ_j c_ij m_j`.
pub fn pairing_root(gcm: &Gcm, i: usize, m: &[i64]) -> i64 {
    (0..gcm.rank()).map(|j| gcm.matrix[i][j] * m[j]).sum()
}

/// Validate a square integer matrix as a GCM and compute the minimal
/// positive integer symmetrizer per indecomposable block when one exists.
pub fn validate_gcm(matrix: Vec<Vec<i64>>, labels: Vec<String>) -> Result<Gcm> {
    let r = matrix.len();
    if labels.len() != r {
        return Err(KmError::Parse(format!(
            "{} labels for a {r}x{r} matrix",
            labels.len()
        )));
    }
    for (i, row) in matrix.iter().enumerate() {
        if row.len() != r {
            return Err(KmError::Parse(format!("row {i} has length {}", row.len())));
        }
    }
    for i in 0..r {
        if matrix[i][i] != 2 {
            return Err(KmError::NotGcm {
                row: i,
                col: i,
                reason: format!("diagonal entry {} != 2", matrix[i][i]),
            });
        }
        for j in 0..r {
            if i != j {
                if matrix[i][j] > 0 {
                    return Err(KmError::NotGcm {
                        row: i,
                        col: j,
                        reason: format!("positive off-diagonal entry {}", matrix[i][j]),
                    });
                }
                if (matrix[i][j] == 0) != (matrix[j][i] == 0) {
                    return Err(KmError::NotGcm {
                        row: i,
                        col: j,
                        reason: "asymmetric zero pattern".to_string(),
                    });
                }
            }
        }
    }
    let symmetrizer = compute_symmetrizer(&matrix);
    Ok(Gcm {
        labels,
        matrix,
        symmetrizer,
    })
}

/// Solve `d_i c_ij = d_j c_ji` over positive rationals blockwise, then clear
/// denominators to the componentwise-minimal positive integer solution.
fn compute_symmetrizer(c: &[Vec<i64>]) -> Option<Vec<i64>> {
    let r = c.len();
    let mut d: Vec<Option<Q>> = vec![None; r];
    for start in 0..r {
        if d[start].is_some() {
            continue;
        }
        // Spread d over the connected component of `start`.
        d[start] = Some(Q::one());
        let mut block = vec![start];
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            for j in 0..r {
                if i != j && c[i][j] != 0 {
                    let ratio = qz(c[i][j]) / qz(c[j][i]);
                    let dj = d[i].clone().unwrap() * ratio;
                    match &d[j] {
                        Some(old) => {
                            if *old != dj {
                                return None;
                            }
                        }
                        None => {
                            d[j] = Some(dj);
                            block.push(j);
                            stack.push(j);
                        }
                    }
                }
            }
        }
        // Normalize the block to minimal positive integers.
        let mut lcm_den = Z::one();
        for &i in &block {
            lcm_den = num::integer::lcm(lcm_den, d[i].as_ref().unwrap().denom().clone());
        }
        let mut gcd_num = Z::zero();
        for &i in &block {
            let scaled = d[i].as_ref().unwrap() * Q::from_integer(lcm_den.clone());
            gcd_num = num::integer::gcd(gcd_num, scaled.numer().clone());
        }
        for &i in &block {
            let v = d[i].as_ref().unwrap() * Q::from_integer(lcm_den.clone())
                / Q::from_integer(gcd_num.clone());
            if !v.is_integer() || !v.is_positive() {
                return None;
            }
            d[i] = Some(v);
        }
    }
    let out: Vec<i64> = d
        .into_iter()
        .map(|x| {
            let v = x.unwrap();
            i64::try_from(v.to_integer()).ok()
        })
        .collect::<Option<Vec<i64>>>()?;
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a2() -> Gcm {
        validate_gcm(
            vec![vec![2, -1], vec![-1, 2]],
            vec!["1".into(), "2".into()],
        )
        .unwrap()
    }

    #[test]
    fn symmetrizers() {
        assert_eq!(a2().symmetrizer, Some(vec![1, 1]));
        let aff = validate_gcm(vec![vec![2, -2], vec![-2, 2]], vec!["0".into(), "1".into()])
            .unwrap();
        assert_eq!(aff.symmetrizer, Some(vec![1, 1]));
        let g2 = validate_gcm(vec![vec![2, -1], vec![-3, 2]], vec!["1".into(), "2".into()])
            .unwrap();
        // d_1 c_12 = d_2 c_21 forces d_1 = 3 d_2; minimal solution (3, 1).
        assert_eq!(g2.symmetrizer, Some(vec![3, 1]));
    }

    #[test]
    fn rejects_bad_matrices() {
        let err = validate_gcm(vec![vec![2, 1], vec![1, 2]], vec!["1".into(), "2".into()])
            .unwrap_err();
        match err {
            KmError::NotGcm { row: 0, col: 1, .. } => {}
            e => panic!("unexpected: {e}"),
        }
        assert!(validate_gcm(vec![vec![1]], vec!["1".into()]).is_err());
        assert!(validate_gcm(
            vec![vec![2, 0], vec![-1, 2]],
            vec!["1".into(), "2".into()]
        )
        .is_err());
    }

    #[test]
    fn pairing_examples() {
        let g = a2();
        let w1 = Weight::fundamental(2, 0);
        assert_eq!(pairing(&g, 0, &w1), 1);
        assert_eq!(pairing(&g, 1, &w1), 0);
        let alpha1 = Weight::simple_root(2, 0);
        assert_eq!(pairing(&g, 0, &alpha1), 2);
        assert_eq!(pairing(&g, 1, &alpha1), -1);
        let zero = Weight::from_anchor(vec![0, 0]);
        assert_eq!(pairing(&g, 0, &zero), 0);
    }

    #[test]
    fn reflect_involution_and_fixed_points() {
        let g = a2();
        let w = Weight::new(vec![2, -1], vec![1, 3]);
        let r = reflect(&g, 0, &w);
        assert_eq!(reflect(&g, 0, &r), w);
        assert_eq!(r.anchor, w.anchor);
        assert_eq!(pairing(&g, 0, &r), -pairing(&g, 0, &w));
        // A1: reflect(ϖ) = ϖ − α.
        let a1 = validate_gcm(vec![vec![2]], vec!["1".into()]).unwrap();
        let w = Weight::fundamental(1, 0);
        assert_eq!(reflect(&a1, 0, &w), Weight::new(vec![1], vec![1]));
        // fixed when pairing vanishes
        let g = a2();
        let w2 = Weight::fundamental(2, 1);
        assert_eq!(reflect(&g, 0, &w2), w2);
    }
}
