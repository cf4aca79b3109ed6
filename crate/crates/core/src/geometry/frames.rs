//! Signature-aware orthonormalization.

use nalgebra as na;

use crate::error::{Error, Result};
use crate::linalg::DVector;

use super::TOL_DEG;

/// Frame with `⟨eᵢ, eⱼ⟩ = εᵢ δᵢⱼ`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthonormalFrame {
    pub vectors: Vec<DVector>,
    pub signature: Vec<i8>,
}

/// Index and replacement of the best non-null pivot among `rest`, trying
/// pairwise sums and differences when every vector is (numerically) null.
fn choose_pivot(rest: &[DVector], tol: f64) -> Option<(usize, DVector)> {
    let norm = |v: &DVector| v.dot(v).abs();
    let (best, best_norm) = rest
        .iter()
        .enumerate()
        .map(|(i, v)| (i, norm(v)))
        .max_by(|a, b| a.1.total_cmp(&b.1))?;
    if best_norm >= tol {
        return Some((best, rest[best].clone()));
    }
    let mut fallback: Option<(usize, DVector, f64)> = None;
    for i in 0..rest.len() {
        for j in 0..rest.len() {
            if i == j {
                continue;
            }
            for s in [1.0, -1.0] {
                let w = rest[i].axpy(s, &rest[j]);
                let nw = norm(&w);
                if nw >= tol && fallback.as_ref().is_none_or(|f| nw > f.2) {
                    fallback = Some((i, w, nw));
                }
            }
        }
    }
    fallback.map(|(i, w, _)| (i, w))
}

fn scale_of(frame: &[DVector]) -> f64 {
    frame.iter().map(DVector::grading_norm_sq).fold(0.0, f64::max)
}

/// Unit vector along `v` and its sign `⟨v, v⟩ / |⟨v, v⟩|`.
fn normalize(v: &DVector) -> (DVector, i8) {
    let n = v.dot(v);
    (v.scale(1.0 / n.abs().sqrt()), if n > 0.0 { 1 } else { -1 })
}

fn remove_component(w: &DVector, e: &DVector, eps: i8) -> DVector {
    w.axpy(-(eps as f64) * w.dot(e), e)
}

/// Gram–Schmidt for an indefinite metric, pivoting on the largest `|⟨v, v⟩|`.
pub fn signed_gram_schmidt(frame: &[DVector]) -> Result<OrthonormalFrame> {
    let tol = TOL_DEG * scale_of(frame);
    let mut rest = frame.to_vec();
    let mut out = OrthonormalFrame { vectors: vec![], signature: vec![] };
    while !rest.is_empty() {
        let (i, v) = choose_pivot(&rest, tol).ok_or_else(|| {
            Error::DegenerateMetric(format!("no non-null pivot among {} remaining vectors", rest.len()))
        })?;
        rest.remove(i);
        let (e, eps) = normalize(&v);
        rest = rest.iter().map(|w| remove_component(w, &e, eps)).collect();
        out.vectors.push(e);
        out.signature.push(eps);
    }
    Ok(out)
}

/// Relative residual of `J(span)` against `span`, by least squares on the real split.
pub fn j_invariance_residual(frame: &[DVector]) -> f64 {
    let cols: Vec<na::DVector<f64>> = frame.iter().map(|v| na::DVector::from_vec(v.to_real())).collect();
    let a = na::DMatrix::from_columns(&cols);
    let svd = na::SVD::new(a.clone(), true, true);
    frame
        .iter()
        .map(|v| {
            let b = na::DVector::from_vec(v.apply_j().to_real());
            let x = svd.solve(&b, 1e-12).expect("SVD computed with both factors");
            (&a * x - &b).norm() / b.norm().max(f64::MIN_POSITIVE)
        })
        .fold(0.0, f64::max)
}

/// Orthonormal frame `(e₁, Je₁, e₃, Je₃, …)` of a `J`-invariant span.
pub fn para_adapted_frame(frame: &[DVector], tol: f64) -> Result<OrthonormalFrame> {
    if frame.len() % 2 == 1 {
        return Err(Error::OddDimension(frame.len()));
    }
    let residual = j_invariance_residual(frame);
    if residual > tol {
        return Err(Error::NotJInvariant { residual });
    }
    let deg_tol = TOL_DEG * scale_of(frame);
    let mut rest = frame.to_vec();
    let mut out = OrthonormalFrame { vectors: vec![], signature: vec![] };
    while !rest.is_empty() {
        let (i, v) = choose_pivot(&rest, deg_tol)
            .ok_or_else(|| Error::DegenerateMetric("J-invariant span has no non-null vector".into()))?;
        rest.remove(i);
        let (e, eps) = normalize(&v);
        let je = e.apply_j();
        rest = rest
            .iter()
            .map(|w| remove_component(&remove_component(w, &e, eps), &je, -eps))
            .collect();
        // The pair removed two dimensions; drop the vector that collapsed.
        if let Some(k) = (0..rest.len()).min_by(|&a, &b| rest[a].grading_norm().total_cmp(&rest[b].grading_norm())) {
            rest.remove(k);
        }
        out.vectors.extend([e, je]);
        out.signature.extend([eps, -eps]);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::paracomplex::ParaComplex;

    fn check_orthonormal(f: &OrthonormalFrame) {
        for (i, a) in f.vectors.iter().enumerate() {
            for (j, b) in f.vectors.iter().enumerate() {
                let expect = if i == j { f.signature[i] as f64 } else { 0.0 };
                assert!((a.dot(b) - expect).abs() < 1e-12, "({i},{j}) {}", a.dot(b));
            }
        }
    }

    #[test]
    fn orthonormal_input_is_kept() {
        let f = signed_gram_schmidt(&[DVector::basis(2, 0), DVector::tau_basis(2, 1)]).unwrap();
        check_orthonormal(&f);
        let mut sig = f.signature.clone();
        sig.sort();
        assert_eq!(sig, vec![-1, 1]);
    }

    #[test]
    fn hand_worked_pair() {
        let e1 = DVector::basis(2, 0);
        let y = DVector::new(vec![ParaComplex::new(1.0, 0.5), ParaComplex::ONE]);
        let f = signed_gram_schmidt(&[e1.clone(), y.clone()]).unwrap();
        check_orthonormal(&f);
        assert_eq!(f.signature, vec![1, 1]);
        // By hand: pivot y (norm 1.75), then e₁ − y/1.75 with norm 1 − 1/1.75.
        let e_a = y.scale(1.0 / 1.75_f64.sqrt());
        let w = e1.axpy(-1.0 / 1.75, &y);
        let e_b = w.scale(1.0 / (1.0 - 1.0 / 1.75_f64).sqrt());
        assert!((&f.vectors[0] - &e_a).grading_norm() < 1e-14);
        assert!((&f.vectors[1] - &e_b).grading_norm() < 1e-14);
    }

    #[test]
    fn null_pivots_fall_back_to_combinations() {
        // Both inputs null but their sum is not.
        let a = DVector::new(vec![ParaComplex::new(1.0, 1.0), ParaComplex::ZERO]);
        let b = DVector::new(vec![ParaComplex::new(1.0, -1.0), ParaComplex::ZERO]);
        let f = signed_gram_schmidt(&[a, b]).unwrap();
        check_orthonormal(&f);
    }

    #[test]
    fn totally_null_span_is_degenerate() {
        let a = DVector::new(vec![ParaComplex::ONE, ParaComplex::TAU]);
        let b = DVector::new(vec![ParaComplex::TAU, ParaComplex::ONE]);
        assert_eq!(a.dot(&a).abs() + a.dot(&b).abs() + b.dot(&b).abs(), 0.0);
        assert!(matches!(signed_gram_schmidt(&[a, b]), Err(Error::DegenerateMetric(_))));
    }

    #[test]
    fn adapted_frame_examples() {
        let f = para_adapted_frame(&[DVector::basis(1, 0), DVector::tau_basis(1, 0)], 1e-10).unwrap();
        check_orthonormal(&f);
        assert!((&f.vectors[1] - &f.vectors[0].apply_j()).grading_norm() < 1e-15);

        // Tangent plane of z ↦ (z, z²) at z = 0.3 + 0.1τ.
        let z = ParaComplex::new(0.3, 0.1);
        let dx = DVector::new(vec![ParaComplex::ONE, z * 2.0]);
        let dy = dx.apply_j();
        let f = para_adapted_frame(&[dx, dy], 1e-10).unwrap();
        check_orthonormal(&f);
        assert!((&f.vectors[1] - &f.vectors[0].apply_j()).grading_norm() < 1e-14);

        let err = para_adapted_frame(&[DVector::basis(2, 0), DVector::basis(2, 1)], 1e-10);
        assert!(matches!(err, Err(Error::NotJInvariant { .. })));
        let err = para_adapted_frame(&[DVector::basis(2, 0)], 1e-10);
        assert!(matches!(err, Err(Error::OddDimension(1))));
    }

    #[test]
    fn adapted_frame_in_four_dimensions() {
        let a = DVector::new(vec![ParaComplex::new(1.0, 0.2), ParaComplex::new(0.3, -0.4), ParaComplex::ZERO]);
        let b = DVector::new(vec![ParaComplex::new(0.1, 0.0), ParaComplex::new(1.0, 0.7), ParaComplex::new(0.2, 0.1)]);
        let frame = vec![a.clone(), b.axpy(0.5, &a), a.apply_j(), b.apply_j()];
        let f = para_adapted_frame(&frame, 1e-10).unwrap();
        check_orthonormal(&f);
        for k in [0, 2] {
            assert!((&f.vectors[k + 1] - &f.vectors[k].apply_j()).grading_norm() < 1e-12);
        }
    }
}
