//! Spectral prediction of convergence speed.
//!
//! A gossip protocol in which the activated node `i` averages with node `j`
//! with probability `P_ij` contracts the error, in mean square, by the
//! averaging matrix
//!
//! ```text
//! W = I + (1/2n) [P + Pᵀ − D],     D_i = Σ_j (P_ij + P_ji)
//! ```
//!
//! whose second-largest eigenvalue `λ₂(W)` sets the averaging time
//! `Θ(log ε⁻¹ / log λ₂⁻¹)`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};
use crate::sampling::{distance_to_uniform, InducedDistribution};
use crate::topology::Topology;

const STOCHASTIC_TOL: f64 = 1e-12;
const SYMMETRY_TOL: f64 = 1e-10;

/// Row-stochastic matrix of partner-selection probabilities.
#[derive(Clone, Debug, PartialEq)]
pub struct SelectionMatrix(DMatrix<f64>);

impl SelectionMatrix {
    pub fn new(p: DMatrix<f64>) -> Result<Self> {
        if !p.is_square() || p.nrows() == 0 {
            return Err(Error::InvalidMatrix("selection matrix must be square".into()));
        }
        if p.iter().any(|&v| !(v >= 0.0)) {
            return Err(Error::InvalidMatrix("negative or NaN entry".into()));
        }
        for (i, row) in p.row_iter().enumerate() {
            let s: f64 = row.sum();
            if (s - 1.0).abs() > STOCHASTIC_TOL * p.ncols() as f64 {
                return Err(Error::InvalidMatrix(format!("row {i} sums to {s}")));
            }
        }
        Ok(Self(p))
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.nrows()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AveragingMatrix {
    pub w: DMatrix<f64>,
    pub d: DVector<f64>,
}

impl AveragingMatrix {
    pub fn n(&self) -> usize {
        self.w.nrows()
    }
}

/// Uniform choice among one-hop neighbors: `P_ij = 1/deg(i)` on edges.
pub fn selection_standard(t: &Topology) -> Result<SelectionMatrix> {
    let n = t.n();
    let mut p = DMatrix::zeros(n, n);
    for i in 0..n {
        let nb = t.neighbors(i);
        if nb.is_empty() {
            return Err(Error::InvalidTopology(format!("node {i} is isolated")));
        }
        let w = 1.0 / nb.len() as f64;
        for &j in nb {
            p[(i, j)] = w;
        }
    }
    SelectionMatrix::new(p)
}

/// Every row equals `q`: `P = 1·qᵀ`.
pub fn selection_geographic(q: &InducedDistribution) -> SelectionMatrix {
    let n = q.len();
    SelectionMatrix(DMatrix::from_fn(n, n, |_, j| q.q()[j]))
}

pub fn build_w(p: &SelectionMatrix) -> Result<AveragingMatrix> {
    let m = p.matrix();
    let n = m.nrows();
    let sym = m + m.transpose();
    let d = DVector::from_fn(n, |i, _| sym.row(i).sum());
    let mut w = sym / (2.0 * n as f64);
    for i in 0..n {
        w[(i, i)] += 1.0 - d[i] / (2.0 * n as f64);
    }
    for i in 0..n {
        let (r, c) = (w.row(i).sum(), w.column(i).sum());
        if (r - 1.0).abs() > 1e-10 || (c - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidMatrix(format!("W row/column {i} sums to {r}/{c}")));
        }
    }
    Ok(AveragingMatrix { w, d })
}

/// Eigenvalues of a symmetric matrix in decreasing order.
pub fn symmetric_eigenvalues(m: &DMatrix<f64>) -> Result<Vec<f64>> {
    let asym = (m - m.transpose()).amax();
    if asym > SYMMETRY_TOL {
        return Err(Error::InvalidMatrix(format!("asymmetry {asym}")));
    }
    let mut ev: Vec<f64> = SymmetricEigen::new(m.clone()).eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| b.total_cmp(a));
    Ok(ev)
}

/// Second-largest eigenvalue of `W`.
pub fn lambda2(w: &AveragingMatrix) -> Result<f64> {
    let ev = symmetric_eigenvalues(&w.w)?;
    ev.get(1)
        .copied()
        .ok_or_else(|| Error::InvalidMatrix("lambda2 needs n >= 2".into()))
}

/// Largest eigenvalue of `W′ = W − (1/n²)·11ᵀ`.
pub fn deflated_top_eigenvalue(w: &AveragingMatrix) -> Result<f64> {
    let n = w.n();
    let deflated = w.w.map(|v| v - 1.0 / (n * n) as f64);
    Ok(symmetric_eigenvalues(&deflated)?[0])
}

/// Second eigenvalue of the random-walk matrix `P_ij = 1/deg(i)`, computed
/// from its symmetrization `D^{-1/2} A D^{-1/2}`.
pub fn random_walk_lambda2(t: &Topology) -> Result<f64> {
    let n = t.n();
    let mut s = DMatrix::zeros(n, n);
    for i in 0..n {
        if t.degree(i) == 0 {
            return Err(Error::InvalidTopology(format!("node {i} is isolated")));
        }
        for &j in t.neighbors(i) {
            s[(i, j)] = 1.0 / ((t.degree(i) * t.degree(j)) as f64).sqrt();
        }
    }
    Ok(symmetric_eigenvalues(&s)?[1])
}

/// `(1 − 1/n) + (1/n)·cos(2π/n)`.
pub fn closed_form_cycle_lambda2(n: usize) -> Result<f64> {
    if n < 3 {
        return Err(Error::InvalidSize(format!("cycle needs n >= 3, got {n}")));
    }
    let nf = n as f64;
    Ok((1.0 - 1.0 / nf) + (2.0 * std::f64::consts::PI / nf).cos() / nf)
}

/// `1 − 1/n + 1/n²`.
pub fn closed_form_complete_lambda2(n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidSize(format!("complete graph needs n >= 2, got {n}")));
    }
    let nf = n as f64;
    Ok(1.0 - 1.0 / nf + 1.0 / (nf * nf))
}

/// `ln(1/ε) / ln(1/λ₂)`, the averaging-time scale without constants.
pub fn predicted_rounds(lambda2: f64, epsilon: f64) -> Result<f64> {
    if !(lambda2 < 1.0) {
        return Err(Error::NoGap(lambda2));
    }
    if !(lambda2 > 0.0) || !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "need 0 < lambda2 < 1 and 0 < epsilon <= 1, got {lambda2}, {epsilon}"
        )));
    }
    Ok(epsilon.recip().ln() / lambda2.recip().ln())
}

/// Upper bound on `λ₂(W)` for the geographic overlay `P = 1·qᵀ`.
///
/// Removing the `1/√n` direction leaves `W′ = D′ + Q′` with
/// `D′ = I − (2n)⁻¹ diag(1 + n·q)` and `Q′ = (2n)⁻¹ (1(q−u)ᵀ + (q−u)1ᵀ)`;
/// Weyl's inequality with `λ₁(D′) ≤ 1 − 1/(2n)` and a Cauchy–Schwarz bound on
/// `λ₁(Q′)` gives `(1 − 1/(2n)) + ‖q − u‖₂·√n / n`.
pub fn theorem1_gap_certificate(q: &InducedDistribution) -> f64 {
    let n = q.len() as f64;
    let (_, l2) = distance_to_uniform(q);
    (1.0 - 1.0 / (2.0 * n)) + l2 * n.sqrt() / n
}
