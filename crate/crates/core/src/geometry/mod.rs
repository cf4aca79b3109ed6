//! Finite-difference extrinsic geometry of sampled immersions into `Dⁿ`.

mod frames;
pub mod nijenhuis;

pub use frames::{para_adapted_frame, signed_gram_schmidt, OrthonormalFrame};

use nalgebra as na;

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::linalg::DVector;
use crate::par::{self, Mode};

/// Cells kept clear of non-periodic boundaries by [`SampledImmersion::jet`].
pub const JET_MARGIN: usize = 2;
/// Relative threshold on `|det g|` below which a node counts as degenerate.
pub const TOL_DEG: f64 = 1e-8;

/// A map from a parameter grid into `Dⁿ`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledImmersion {
    grid: Grid,
    values: Vec<DVector>,
}

/// First and second central-difference derivatives at a node.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    pub tangent: Vec<DVector>,
    /// Symmetric `m × m` array of `∂ᵢ∂ⱼF`.
    pub second: Vec<Vec<DVector>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InducedMetric {
    pub g: na::DMatrix<f64>,
    /// `+1` entries first, then `−1`.
    pub signature: Vec<i8>,
    pub degenerate: bool,
}

impl InducedMetric {
    pub fn from_tangent(tangent: &[DVector]) -> Self {
        let m = tangent.len();
        let g = na::DMatrix::from_fn(m, m, |i, j| tangent[i].dot(&tangent[j]));
        // Euclidean scale: entries of `g` can all be small on a null locus.
        let scale = tangent.iter().map(DVector::grading_norm_sq).fold(0.0, f64::max);
        let det = g.determinant();
        let degenerate = scale == 0.0 || det.abs() < TOL_DEG * scale.powi(m as i32);
        let eig = na::SymmetricEigen::new(g.clone()).eigenvalues;
        let pos = eig.iter().filter(|&&e| e > 0.0).count();
        let signature = (0..m).map(|i| if i < pos { 1 } else { -1 }).collect();
        Self { g, signature, degenerate }
    }

    /// `(p, q)`: counts of positive and negative directions.
    pub fn signature_counts(&self) -> (usize, usize) {
        let p = self.signature.iter().filter(|&&e| e > 0).count();
        (p, self.signature.len() - p)
    }

    pub fn is_definite(&self) -> bool {
        let (p, q) = self.signature_counts();
        p == 0 || q == 0
    }
}

/// Everything extrinsic at one non-degenerate node.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtrinsicData {
    pub tangent: Vec<DVector>,
    pub metric: InducedMetric,
    /// Normal parts of `∂ᵢ∂ⱼF`.
    pub second_fundamental_form: Vec<Vec<DVector>>,
    pub mean_curvature: DVector,
}

/// Projects ambient vectors onto the metric-normal space of a tangent frame
/// by solving the tangent Gram system.
#[derive(Debug, Clone)]
pub struct NormalProjector {
    tangent: Vec<DVector>,
    g_inv: na::DMatrix<f64>,
}

impl NormalProjector {
    pub fn new(tangent: &[DVector]) -> Result<Self> {
        let metric = InducedMetric::from_tangent(tangent);
        if metric.degenerate {
            return Err(Error::DegenerateMetric(format!("tangent Gram matrix {}", metric.g)));
        }
        let g_inv = metric
            .g
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::DegenerateMetric("singular tangent Gram matrix".into()))?;
        Ok(Self { tangent: tangent.to_vec(), g_inv })
    }

    pub fn inverse_metric(&self) -> &na::DMatrix<f64> {
        &self.g_inv
    }

    /// Tangential coefficients `cᵢ = g^{ij}⟨V, ∂ⱼF⟩`.
    pub fn tangent_coefficients(&self, v: &DVector) -> Vec<f64> {
        let m = self.tangent.len();
        let rhs: Vec<f64> = self.tangent.iter().map(|t| v.dot(t)).collect();
        (0..m).map(|i| (0..m).map(|j| self.g_inv[(i, j)] * rhs[j]).sum()).collect()
    }

    pub fn normal(&self, v: &DVector) -> DVector {
        let c = self.tangent_coefficients(v);
        c.iter().zip(&self.tangent).fold(v.clone(), |acc, (&ci, t)| acc.axpy(-ci, t))
    }

    pub fn tangential(&self, v: &DVector) -> DVector {
        v - &self.normal(v)
    }
}

impl SampledImmersion {
    pub fn new(grid: Grid, values: Vec<DVector>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::DimensionMismatch { left: values.len(), right: grid.len() });
        }
        let n = values.first().map_or(0, DVector::dim);
        for (k, v) in values.iter().enumerate() {
            if v.dim() != n {
                return Err(Error::DimensionMismatch { left: v.dim(), right: n });
            }
            if !v.is_finite() {
                return Err(Error::InvalidGrid(format!("non-finite value at node {:?}", grid.multi_index(k))));
            }
        }
        Ok(Self { grid, values })
    }

    /// Samples `f` at every grid node.
    pub fn from_fn<F>(grid: Grid, f: F) -> Result<Self>
    where
        F: Fn(&[f64]) -> DVector + Sync + Send,
    {
        let values = par::map_indices(Mode::default(), grid.len(), |k| f(&grid.coords(k)));
        Self::new(grid, values)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[DVector] {
        &self.values
    }

    pub fn value(&self, node: usize) -> &DVector {
        &self.values[node]
    }

    pub fn dim_domain(&self) -> usize {
        self.grid.dim()
    }

    pub fn ambient_dim(&self) -> usize {
        self.values[0].dim()
    }

    /// Applies `f` to every sampled value.
    pub fn map_values(&self, f: impl Fn(&DVector) -> DVector) -> Result<Self> {
        Self::new(self.grid.clone(), self.values.iter().map(f).collect())
    }

    /// Nodes at least `margin` cells from every non-periodic boundary.
    pub fn interior_nodes(&self, margin: usize) -> Vec<usize> {
        (0..self.grid.len()).filter(|&k| self.grid.is_interior(k, margin)).collect()
    }

    fn shifted(&self, node: usize, shifts: &[(usize, isize)]) -> &DVector {
        let k = shifts.iter().fold(node, |k, &(axis, d)| {
            self.grid.offset(k, axis, d).expect("jet margin checked")
        });
        &self.values[k]
    }

    pub fn jet(&self, node: usize) -> Result<Jet> {
        self.grid.require_interior(node, JET_MARGIN)?;
        let m = self.dim_domain();
        let h = self.grid.steps();
        let f0 = &self.values[node];
        let tangent: Vec<DVector> = (0..m)
            .map(|i| {
                let d = self.shifted(node, &[(i, 1)]) - self.shifted(node, &[(i, -1)]);
                d.scale(0.5 / h[i])
            })
            .collect();
        let mut second = vec![vec![DVector::zeros(f0.dim()); m]; m];
        for i in 0..m {
            let sum = self.shifted(node, &[(i, 1)]) + self.shifted(node, &[(i, -1)]);
            second[i][i] = sum.axpy(-2.0, f0).scale(1.0 / (h[i] * h[i]));
            for j in i + 1..m {
                let pp = self.shifted(node, &[(i, 1), (j, 1)]);
                let pm = self.shifted(node, &[(i, 1), (j, -1)]);
                let mp = self.shifted(node, &[(i, -1), (j, 1)]);
                let mm = self.shifted(node, &[(i, -1), (j, -1)]);
                let d = &(&(pp - pm) - mp) + mm;
                let v = d.scale(0.25 / (h[i] * h[j]));
                second[j][i] = v.clone();
                second[i][j] = v;
            }
        }
        Ok(Jet { tangent, second })
    }

    pub fn induced_metric(&self, node: usize) -> Result<InducedMetric> {
        Ok(InducedMetric::from_tangent(&self.jet(node)?.tangent))
    }

    pub fn extrinsic(&self, node: usize) -> Result<ExtrinsicData> {
        let jet = self.jet(node)?;
        extrinsic_from_jet(jet)
    }

    /// `H = (1/m) g^{ij} (∂ᵢ∂ⱼF)^⊥`.
    pub fn mean_curvature(&self, node: usize) -> Result<DVector> {
        Ok(self.extrinsic(node)?.mean_curvature)
    }
}

pub fn extrinsic_from_jet(jet: Jet) -> Result<ExtrinsicData> {
    let Jet { tangent, second } = jet;
    let m = tangent.len();
    let metric = InducedMetric::from_tangent(&tangent);
    let proj = NormalProjector::new(&tangent)?;
    let h2: Vec<Vec<DVector>> = second
        .iter()
        .map(|row| row.iter().map(|v| proj.normal(v)).collect())
        .collect();
    let g_inv = proj.inverse_metric();
    let mut h = DVector::zeros(tangent[0].dim());
    for i in 0..m {
        for j in 0..m {
            h = h.axpy(g_inv[(i, j)] / m as f64, &h2[i][j]);
        }
    }
    Ok(ExtrinsicData { tangent, metric, second_fundamental_form: h2, mean_curvature: h })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Axis;
    use crate::paracomplex::ParaComplex;

    fn pc(x: f64, y: f64) -> ParaComplex {
        ParaComplex::new(x, y)
    }

    fn curve(axis: Axis, f: impl Fn(f64) -> DVector + Sync + Send) -> SampledImmersion {
        SampledImmersion::from_fn(Grid::new(vec![axis]).unwrap(), |c| f(c[0])).unwrap()
    }

    #[test]
    fn affine_jet_is_exact() {
        let a = DVector::new(vec![pc(0.3, -1.0), pc(2.0, 0.5)]);
        let b = DVector::new(vec![pc(1.0, 0.25), pc(-0.5, 1.5)]);
        let imm = curve(Axis::new(-1.0, 1.0, 9), |s| a.axpy(s, &b));
        let jet = imm.jet(4).unwrap();
        assert!((&jet.tangent[0] - &b).grading_norm() < 1e-14);
        assert!(jet.second[0][0].grading_norm() < 1e-12);
        assert!(imm.mean_curvature(4).unwrap().grading_norm() < 1e-12);
        assert!(matches!(imm.jet(1), Err(Error::BoundaryPoint { .. })));
    }

    #[test]
    fn jet_errors_shrink_fourfold() {
        let exact_t = |s: f64| DVector::new(vec![pc(2.0 * s, 3.0 * s * s)]);
        let err = |h: f64| {
            let imm = curve(Axis::centered(0.7, h, 3), |s| DVector::new(vec![pc(s * s, s * s * s)]));
            (&imm.jet(3).unwrap().tangent[0] - &exact_t(0.7)).grading_norm()
        };
        let ratio = err(0.02) / err(0.01);
        assert!((ratio - 4.0).abs() < 0.05, "ratio {ratio}");

        let err2 = |h: f64| {
            let imm = curve(Axis::centered(0.3, h, 3), |s| DVector::new(vec![ParaComplex::exp_tau(s)]));
            let jet = imm.jet(3).unwrap();
            (&jet.second[0][0] - imm.value(3)).grading_norm()
        };
        let ratio = err2(0.02) / err2(0.01);
        assert!((ratio - 4.0).abs() < 0.05, "ratio {ratio}");
    }

    #[test]
    fn induced_metric_examples() {
        let g = Grid::new(vec![Axis::new(-1.0, 1.0, 7), Axis::new(-1.0, 1.0, 7)]).unwrap();
        let flat = SampledImmersion::from_fn(g, |c| DVector::new(vec![pc(c[0], 0.0), pc(c[1], 0.0)])).unwrap();
        let m = flat.induced_metric(24).unwrap();
        assert!((m.g.clone() - na::DMatrix::identity(2, 2)).norm() < 1e-14);
        assert_eq!(m.signature, vec![1, 1]);
        assert!(!m.degenerate);

        let c = curve(Axis::new(-1.0, 1.0, 2001), |s| DVector::new(vec![ParaComplex::exp_tau(s)]));
        let m = c.induced_metric(1000).unwrap();
        assert!((m.g[(0, 0)] + 1.0).abs() < 1e-6);
        assert_eq!(m.signature, vec![-1]);
    }

    #[test]
    fn projection_matches_gram_schmidt_trace() {
        // Two routes to H: Gram-system projection vs. εᵢ-weighted orthonormal trace.
        let g = Grid::new(vec![Axis::centered(0.2, 0.01, 3), Axis::centered(-0.1, 0.01, 3)]).unwrap();
        let imm = SampledImmersion::from_fn(g, |c| {
            let (a, b) = (c[0], c[1]);
            DVector::new(vec![pc(a + 0.3 * b * b, 0.2 * a * b), pc(b, 0.5 * a * a - 0.1 * b)])
        })
        .unwrap();
        let node = imm.grid().nearest(&[0.2, -0.1]);
        let ext = imm.extrinsic(node).unwrap();
        let frame = signed_gram_schmidt(&ext.tangent).unwrap();
        let proj = NormalProjector::new(&ext.tangent).unwrap();
        // Express each orthonormal vector in coordinates: e = Σ cₖ ∂ₖF.
        let mut trace = DVector::zeros(2);
        let jet = imm.jet(node).unwrap();
        for (e, &eps) in frame.vectors.iter().zip(&frame.signature) {
            let c = proj.tangent_coefficients(e);
            let mut hee = DVector::zeros(2);
            for i in 0..2 {
                for j in 0..2 {
                    hee = hee.axpy(c[i] * c[j], &proj.normal(&jet.second[i][j]));
                }
            }
            trace = trace.axpy(eps as f64 / 2.0, &hee);
        }
        assert!((&trace - &ext.mean_curvature).grading_norm() < 1e-10);
        for row in &ext.second_fundamental_form {
            for v in row {
                for t in &ext.tangent {
                    assert!(v.dot(t).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn degenerate_node_is_reported() {
        // Null line s ↦ s(1 + τ) has a vanishing induced metric.
        let c = curve(Axis::new(-1.0, 1.0, 9), |s| DVector::new(vec![pc(s, s)]));
        assert!(c.induced_metric(4).unwrap().degenerate);
        assert!(matches!(c.mean_curvature(4), Err(Error::DegenerateMetric(_))));
    }
}
