//! Orthogonalization: modified Gram-Schmidt, symmetric (Löwdin)
//! orthonormalization, and projector assembly from orthonormal sets.

use super::{hermitian_eig, Operator, Space, StateVector, C64};
use crate::{Error, Result, ToleranceConfig};

/// One reported deviation of an input Gram matrix from the identity.
///
/// `i == j` rows are norm defects (`measured = ‖vᵢ‖² - 1`), `i != j` rows
/// are overlaps (`measured = |⟨vᵢ|vⱼ⟩|`). `dependent` marks vectors that
/// vanished during elimination.
#[derive(Debug, Clone, PartialEq)]
pub struct GramDefect {
    pub i: usize,
    pub j: usize,
    pub measured: f64,
    pub dependent: bool,
}

/// Modified Gram-Schmidt in input order.
///
/// Returns the orthonormal survivors, the rank, and the list of input Gram
/// deviations beyond `tol.audit_warn_tol` (dependencies always reported).
pub fn gram_schmidt(
    vs: &[StateVector],
    tol: &ToleranceConfig,
) -> (Vec<StateVector>, usize, Vec<GramDefect>) {
    let mut defects = Vec::new();
    for (i, a) in vs.iter().enumerate() {
        let norm_defect = a.norm_squared() - 1.0;
        if norm_defect.abs() > tol.audit_warn_tol {
            defects.push(GramDefect {
                i,
                j: i,
                measured: norm_defect,
                dependent: false,
            });
        }
        for (j, b) in vs.iter().enumerate().skip(i + 1) {
            let g = a.inner(b).expect("same space").norm();
            if g > tol.audit_warn_tol {
                defects.push(GramDefect {
                    i,
                    j,
                    measured: g,
                    dependent: false,
                });
            }
        }
    }

    let mut out: Vec<StateVector> = Vec::new();
    for (i, v) in vs.iter().enumerate() {
        let mut w = v.clone();
        // re-orthogonalize twice for numerical safety
        for _ in 0..2 {
            for u in &out {
                let c = u.inner(&w).expect("same space");
                w = w.sub(&u.scale(c));
            }
        }
        let n = w.norm();
        if n <= tol.abs_tol.max(1e-12 * v.norm().max(1.0)) {
            defects.push(GramDefect {
                i,
                j: i,
                measured: n,
                dependent: true,
            });
            continue;
        }
        out.push(w.scale(C64::new(1.0 / n, 0.0)));
    }
    let rank = out.len();
    (out, rank, defects)
}

/// Symmetric (Löwdin) orthonormalization: `V · (V†V)^(-1/2)`.
///
/// The output is the orthonormal set nearest to the input in total squared
/// distance, and permuting the inputs permutes the outputs identically.
/// Rank-deficient input is an error naming the dependent vector index.
pub fn lowdin_orthonormalize(vs: &[StateVector]) -> Result<Vec<StateVector>> {
    if vs.is_empty() {
        return Ok(Vec::new());
    }
    let k = vs.len();
    let space = vs[0].space();
    // Gram matrix as a k x k Hermitian operator (tag is irrelevant here)
    let mut gram = Operator::zeros(Space::Spatial(k));
    for i in 0..k {
        for j in 0..k {
            gram.set(i, j, vs[i].inner(&vs[j])?);
        }
    }
    let eig = hermitian_eig(&gram, 1e-10)?;
    let lam_max = eig.eigenvalues.last().copied().unwrap_or(0.0).max(0.0);
    if eig.eigenvalues[0] <= 1e-12 * lam_max.max(1.0) {
        // identify the first input that goes dependent under elimination
        let (_, _, defects) = gram_schmidt(vs, &ToleranceConfig::default());
        let index = defects
            .iter()
            .find(|d| d.dependent)
            .map(|d| d.i)
            .unwrap_or(k - 1);
        return Err(Error::RankDeficient { index });
    }
    // inverse square root of the Gram matrix
    let mut gi = Operator::zeros(Space::Spatial(k));
    for (lam, u) in eig.eigenvalues.iter().zip(&eig.eigenvectors) {
        let w = 1.0 / lam.sqrt();
        for i in 0..k {
            for j in 0..k {
                let d = gi.get(i, j) + u.get(i) * u.get(j).conj() * w;
                gi.set(i, j, d);
            }
        }
    }
    let mut out = Vec::with_capacity(k);
    for c in 0..k {
        let mut w = StateVector::zeros(space);
        for (r, v) in vs.iter().enumerate() {
            w = w.add(&v.scale(gi.get(r, c)));
        }
        out.push(w);
    }
    Ok(out)
}

/// `Σ |vᵢ⟩⟨vᵢ|` over an orthonormal set.
///
/// The inputs are checked first; a Gram defect beyond `tol.abs_tol` is an
/// error carrying the worst pair, so callers may route the inputs through
/// [`lowdin_orthonormalize`] and retry.
pub fn projector_from_orthonormal(
    vs: &[StateVector],
    space: Space,
    tol: &ToleranceConfig,
) -> Result<Operator> {
    let mut worst = (0usize, 0usize, 0.0f64);
    for (i, a) in vs.iter().enumerate() {
        for (j, b) in vs.iter().enumerate() {
            let expect = if i == j { 1.0 } else { 0.0 };
            let dev = (a.inner(b)? - C64::new(expect, 0.0)).norm();
            if dev > worst.2 {
                worst = (i, j, dev);
            }
        }
    }
    if worst.2 > tol.abs_tol {
        return Err(Error::NotOrthonormal {
            max_defect: worst.2,
            i: worst.0,
            j: worst.1,
        });
    }
    Operator::from_dyads(space, vs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Space;

    fn sv(xs: &[f64]) -> StateVector {
        StateVector::from_real(Space::Spatial(xs.len()), xs)
    }

    #[test]
    fn empty_input_is_rank_zero() {
        let (out, rank, defects) = gram_schmidt(&[], &ToleranceConfig::default());
        assert!(out.is_empty() && rank == 0 && defects.is_empty());
    }

    #[test]
    fn orthonormal_inputs_pass_through() {
        let vs = vec![
            StateVector::basis_vector(Space::Spatial(4), 0),
            StateVector::basis_vector(Space::Spatial(4), 1),
        ];
        let (out, rank, defects) = gram_schmidt(&vs, &ToleranceConfig::default());
        assert_eq!(rank, 2);
        assert!(defects.is_empty());
        assert!(out[0].max_abs_diff(&vs[0]) < 1e-14);
        assert!(out[1].max_abs_diff(&vs[1]) < 1e-14);
    }

    #[test]
    fn collinear_pair_reports_dependency() {
        let v = sv(&[3.0, 4.0, 0.0]);
        let (out, rank, defects) = gram_schmidt(&[v.clone(), v.scale(C64::new(2.0, 0.0))], &ToleranceConfig::default());
        assert_eq!(rank, 1);
        assert!((out[0].norm() - 1.0).abs() < 1e-14);
        assert!(defects.iter().any(|d| d.dependent && d.i == 1));
    }

    #[test]
    fn lowdin_fixed_point_and_gram_identity() {
        let vs = vec![sv(&[1.0, 0.0, 0.0]), sv(&[0.0, 1.0, 0.0])];
        let out = lowdin_orthonormalize(&vs).unwrap();
        for (a, b) in vs.iter().zip(&out) {
            assert!(a.max_abs_diff(b) < 1e-12);
        }
        let skew = vec![sv(&[1.0, 0.1, 0.0]), sv(&[0.0, 1.0, 0.2])];
        let out = lowdin_orthonormalize(&skew).unwrap();
        for (i, a) in out.iter().enumerate() {
            for (j, b) in out.iter().enumerate() {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((a.inner(b).unwrap() - C64::new(expect, 0.0)).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn lowdin_rank_deficient_names_index() {
        let v = sv(&[1.0, 1.0, 0.0]);
        let err = lowdin_orthonormalize(&[v.clone(), v.scale(C64::new(-3.0, 0.0))]);
        assert!(matches!(err, Err(Error::RankDeficient { index: 1 })));
    }

    #[test]
    fn projector_rejects_non_orthonormal() {
        let tol = ToleranceConfig::default();
        let bad = vec![sv(&[1.0, 0.0, 0.0]), sv(&[0.6, 0.8, 0.0])];
        let err = projector_from_orthonormal(&bad, Space::Spatial(3), &tol);
        assert!(matches!(err, Err(Error::NotOrthonormal { .. })));
    }

    #[test]
    fn projector_from_full_basis_is_identity() {
        let tol = ToleranceConfig::default();
        let vs: Vec<_> = (0..5)
            .map(|i| StateVector::basis_vector(Space::Spatial(5), i))
            .collect();
        let p = projector_from_orthonormal(&vs, Space::Spatial(5), &tol).unwrap();
        assert!(p.max_abs_diff(&Operator::identity(Space::Spatial(5))) < 1e-14);
        assert!(p.is_projector(tol.abs_tol));
    }
}
