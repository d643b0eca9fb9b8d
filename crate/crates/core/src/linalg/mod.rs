//! Dense complex linear algebra kernel.
//!
//! Everything is stored dense and row-major; dimensions never exceed 80.
//! Values are immutable after construction and all operations are pure, so
//! they are safe to share across threads.

mod eig;
mod orthon;

pub use eig::{hermitian_eig, HermitianEig};
pub use orthon::{gram_schmidt, lowdin_orthonormalize, projector_from_orthonormal, GramDefect};

use crate::{Error, Result};
use num_complex::Complex64;

/// Complex scalar used throughout the crate.
pub type C64 = Complex64;

/// Space tag carried by vectors and operators.
///
/// The tag encodes both the role (spatial factor, spin factor, or the
/// composite product space) and the dimension, so mixed-space arithmetic is
/// rejected at the call site.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Space {
    Spatial(usize),
    Spin(usize),
    Composite { spatial: usize, spin: usize },
}

impl Space {
    pub fn dim(&self) -> usize {
        match *self {
            Space::Spatial(d) | Space::Spin(d) => d,
            Space::Composite { spatial, spin } => spatial * spin,
        }
    }
}

/// Descriptor of the product space `H = H_spatial ⊗ H_spin`.
///
/// The spatial index is the slow (outer) index: composite basis slot
/// `s * spin_dim + m` is "spatial s, spin slot m".
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompositeSpace {
    pub spatial_dim: usize,
    pub spin_dim: usize,
}

impl CompositeSpace {
    pub fn new(spatial_dim: usize, spin_dim: usize) -> Self {
        Self {
            spatial_dim,
            spin_dim,
        }
    }

    pub fn dim(&self) -> usize {
        self.spatial_dim * self.spin_dim
    }

    pub fn space(&self) -> Space {
        Space::Composite {
            spatial: self.spatial_dim,
            spin: self.spin_dim,
        }
    }

    /// Composite index of `(spatial slot, spin slot)`.
    pub fn index(&self, spatial: usize, spin: usize) -> usize {
        debug_assert!(spatial < self.spatial_dim && spin < self.spin_dim);
        spatial * self.spin_dim + spin
    }
}

/// Dense complex square matrix with a space tag.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    dim: usize,
    space: Space,
    data: Vec<C64>,
}

/// Dense complex vector with a space tag.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    dim: usize,
    space: Space,
    data: Vec<C64>,
}

fn check_space(left: Space, right: Space, context: &'static str) -> Result<()> {
    if left != right {
        if left.dim() != right.dim() {
            return Err(Error::DimensionMismatch {
                left: left.dim(),
                right: right.dim(),
                context,
            });
        }
        return Err(Error::SpaceMismatch {
            left,
            right,
            context,
        });
    }
    Ok(())
}

impl Operator {
    pub fn zeros(space: Space) -> Self {
        let dim = space.dim();
        Self {
            dim,
            space,
            data: vec![C64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(space: Space) -> Self {
        let mut out = Self::zeros(space);
        for i in 0..out.dim {
            out.data[i * out.dim + i] = C64::new(1.0, 0.0);
        }
        out
    }

    /// Build from a row-major entry slice (length must be `dim²`).
    pub fn from_rows(space: Space, data: Vec<C64>) -> Self {
        let dim = space.dim();
        assert_eq!(data.len(), dim * dim, "entry array is not dim x dim");
        Self { dim, space, data }
    }

    pub fn from_real_rows(space: Space, rows: &[&[f64]]) -> Self {
        let dim = space.dim();
        assert_eq!(rows.len(), dim);
        let mut data = Vec::with_capacity(dim * dim);
        for r in rows {
            assert_eq!(r.len(), dim);
            data.extend(r.iter().map(|&x| C64::new(x, 0.0)));
        }
        Self { dim, space, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        self.data[i * self.dim + j] = v;
    }

    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    /// Exact matrix product.
    pub fn matmul(&self, other: &Operator) -> Result<Operator> {
        check_space(self.space, other.space, "matmul")?;
        let n = self.dim;
        let mut out = Operator::zeros(self.space);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let row = &other.data[k * n..(k + 1) * n];
                let dst = &mut out.data[i * n..(i + 1) * n];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Operator {
        let n = self.dim;
        let mut out = Operator::zeros(self.space);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        out
    }

    /// `self · other - other · self`.
    pub fn commutator(&self, other: &Operator) -> Result<Operator> {
        let ab = self.matmul(other)?;
        let ba = other.matmul(self)?;
        Ok(ab.sub(&ba))
    }

    /// Kronecker product with the left (spatial) index as the outer index.
    ///
    /// Requires `self` spatial and `other` spin; the result is composite.
    pub fn tensor(&self, other: &Operator) -> Result<Operator> {
        let (sd, md) = match (self.space, other.space) {
            (Space::Spatial(a), Space::Spin(b)) => (a, b),
            _ => {
                return Err(Error::SpaceMismatch {
                    left: self.space,
                    right: other.space,
                    context: "tensor (expects spatial ⊗ spin)",
                })
            }
        };
        let space = Space::Composite {
            spatial: sd,
            spin: md,
        };
        let n = sd * md;
        let mut out = Operator::zeros(space);
        for i in 0..sd {
            for j in 0..sd {
                let a = self.data[i * sd + j];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                for k in 0..md {
                    for l in 0..md {
                        out.data[(i * md + k) * n + (j * md + l)] = a * other.data[k * md + l];
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Operator) -> Operator {
        assert_eq!(self.space, other.space);
        let mut out = self.clone();
        for (d, s) in out.data.iter_mut().zip(&other.data) {
            *d += s;
        }
        out
    }

    pub fn sub(&self, other: &Operator) -> Operator {
        assert_eq!(self.space, other.space);
        let mut out = self.clone();
        for (d, s) in out.data.iter_mut().zip(&other.data) {
            *d -= s;
        }
        out
    }

    pub fn scale(&self, s: C64) -> Operator {
        let mut out = self.clone();
        for d in out.data.iter_mut() {
            *d *= s;
        }
        out
    }

    /// `I - self`.
    pub fn complement(&self) -> Operator {
        Operator::identity(self.space).sub(self)
    }

    pub fn apply(&self, v: &StateVector) -> Result<StateVector> {
        check_space(self.space, v.space, "apply")?;
        let n = self.dim;
        let mut out = StateVector::zeros(self.space);
        for i in 0..n {
            let mut acc = C64::new(0.0, 0.0);
            for j in 0..n {
                acc += self.data[i * n + j] * v.data[j];
            }
            out.data[i] = acc;
        }
        Ok(out)
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self.data[i * self.dim + i]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `‖A - A†‖_F`.
    pub fn hermiticity_defect(&self) -> f64 {
        self.sub(&self.adjoint()).frobenius_norm()
    }

    /// `‖A² - A‖_F`.
    pub fn idempotency_defect(&self) -> f64 {
        self.matmul(self)
            .expect("same space")
            .sub(self)
            .frobenius_norm()
    }

    /// Projector test: Hermitian and idempotent within `tol` (Frobenius).
    pub fn is_projector(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol && self.idempotency_defect() <= tol
    }

    /// Sum of dyads `Σ |vᵢ⟩⟨vᵢ|` over vectors in a common space.
    pub fn from_dyads(space: Space, vs: &[StateVector]) -> Result<Operator> {
        let mut out = Operator::zeros(space);
        let n = out.dim;
        for v in vs {
            check_space(space, v.space, "from_dyads")?;
            for i in 0..n {
                for j in 0..n {
                    out.data[i * n + j] += v.data[i] * v.data[j].conj();
                }
            }
        }
        Ok(out)
    }

    pub fn max_abs_diff(&self, other: &Operator) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl StateVector {
    pub fn zeros(space: Space) -> Self {
        let dim = space.dim();
        Self {
            dim,
            space,
            data: vec![C64::new(0.0, 0.0); dim],
        }
    }

    pub fn from_entries(space: Space, data: Vec<C64>) -> Self {
        assert_eq!(data.len(), space.dim(), "entry array length != dim");
        Self {
            dim: space.dim(),
            space,
            data,
        }
    }

    pub fn from_real(space: Space, entries: &[f64]) -> Self {
        Self::from_entries(space, entries.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn basis_vector(space: Space, slot: usize) -> Self {
        let mut v = Self::zeros(space);
        v.data[slot] = C64::new(1.0, 0.0);
        v
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn get(&self, i: usize) -> C64 {
        self.data[i]
    }

    pub fn set(&mut self, i: usize, v: C64) {
        self.data[i] = v;
    }

    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    /// `⟨self|other⟩`, conjugate-linear in `self`.
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        check_space(self.space, other.space, "inner")?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn norm(&self) -> f64 {
        self.data
            .iter()
            .map(|c| c.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn norm_squared(&self) -> f64 {
        self.data.iter().map(|c| c.norm_sqr()).sum::<f64>()
    }

    pub fn add(&self, other: &StateVector) -> StateVector {
        assert_eq!(self.space, other.space);
        let mut out = self.clone();
        for (d, s) in out.data.iter_mut().zip(&other.data) {
            *d += s;
        }
        out
    }

    pub fn sub(&self, other: &StateVector) -> StateVector {
        assert_eq!(self.space, other.space);
        let mut out = self.clone();
        for (d, s) in out.data.iter_mut().zip(&other.data) {
            *d -= s;
        }
        out
    }

    pub fn scale(&self, s: C64) -> StateVector {
        let mut out = self.clone();
        for d in out.data.iter_mut() {
            *d *= s;
        }
        out
    }

    /// `v/‖v‖`; fails on near-zero norm.
    pub fn normalized(&self, tol: f64) -> Result<StateVector> {
        let n = self.norm();
        if n <= tol {
            return Err(Error::NearZeroNorm { norm: n });
        }
        Ok(self.scale(C64::new(1.0 / n, 0.0)))
    }

    /// Kronecker product vector, consistent with [`Operator::tensor`]:
    /// `tensor(A,B)·tensor_vec(u,v) = tensor_vec(Au, Bv)`.
    pub fn tensor_vec(&self, other: &StateVector) -> Result<StateVector> {
        let (sd, md) = match (self.space, other.space) {
            (Space::Spatial(a), Space::Spin(b)) => (a, b),
            _ => {
                return Err(Error::SpaceMismatch {
                    left: self.space,
                    right: other.space,
                    context: "tensor_vec (expects spatial ⊗ spin)",
                })
            }
        };
        let mut out = StateVector::zeros(Space::Composite {
            spatial: sd,
            spin: md,
        });
        for i in 0..sd {
            for k in 0..md {
                out.data[i * md + k] = self.data[i] * other.data[k];
            }
        }
        Ok(out)
    }

    /// Spatial component at a given spin slot of a composite vector.
    pub fn spatial_component(&self, spaces: CompositeSpace, spin_slot: usize) -> StateVector {
        assert_eq!(self.space, spaces.space());
        let mut out = StateVector::zeros(Space::Spatial(spaces.spatial_dim));
        for s in 0..spaces.spatial_dim {
            out.data[s] = self.data[spaces.index(s, spin_slot)];
        }
        out
    }

    pub fn max_abs_diff(&self, other: &StateVector) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Lift a spatial operator to the composite space: `A ⊗ I_spin`.
pub fn lift_spatial(op: &Operator, spaces: CompositeSpace) -> Result<Operator> {
    check_space(op.space, Space::Spatial(spaces.spatial_dim), "lift_spatial")?;
    op.tensor(&Operator::identity(Space::Spin(spaces.spin_dim)))
}

/// Lift a spin operator to the composite space: `I_spatial ⊗ B`.
pub fn lift_spin(op: &Operator, spaces: CompositeSpace) -> Result<Operator> {
    check_space(op.space, Space::Spin(spaces.spin_dim), "lift_spin")?;
    Operator::identity(Space::Spatial(spaces.spatial_dim)).tensor(op)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sv(space: Space, xs: &[f64]) -> StateVector {
        StateVector::from_real(space, xs)
    }

    #[test]
    fn matmul_identity_and_zero() {
        let space = Space::Spin(4);
        let id = Operator::identity(space);
        let mut a = Operator::zeros(space);
        for i in 0..4 {
            for j in 0..4 {
                a.set(i, j, C64::new((i * 4 + j) as f64, 0.3));
            }
        }
        assert_eq!(id.matmul(&a).unwrap(), a);
        let z = Operator::zeros(space);
        assert_eq!(a.matmul(&z).unwrap(), z);
    }

    #[test]
    fn matmul_rejects_dimension_mismatch() {
        let a = Operator::identity(Space::Spatial(3));
        let b = Operator::identity(Space::Spatial(4));
        assert!(matches!(
            a.matmul(&b),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn adjoint_is_involution() {
        let space = Space::Spatial(3);
        let mut a = Operator::zeros(space);
        for i in 0..3 {
            for j in 0..3 {
                a.set(i, j, C64::new(i as f64 - j as f64, (i * j) as f64));
            }
        }
        assert_eq!(a.adjoint().adjoint(), a);
    }

    #[test]
    fn tensor_identity_and_trace() {
        let i10 = Operator::identity(Space::Spatial(10));
        let i8 = Operator::identity(Space::Spin(8));
        let t = i10.tensor(&i8).unwrap();
        assert_eq!(t, Operator::identity(t.space()));
        assert_eq!(t.dim(), 80);
    }

    #[test]
    fn tensor_rejects_tag_mismatch() {
        let a = Operator::identity(Space::Spin(2));
        let b = Operator::identity(Space::Spin(2));
        assert!(matches!(a.tensor(&b), Err(Error::SpaceMismatch { .. })));
    }

    #[test]
    fn tensor_vec_first_slot_convention() {
        // spatial-major ordering: psi_1 ⊗ (top spin slot) is composite slot 0
        let u = StateVector::basis_vector(Space::Spatial(10), 0);
        let v = StateVector::basis_vector(Space::Spin(8), 0);
        let w = u.tensor_vec(&v).unwrap();
        assert_eq!(w.get(0), C64::new(1.0, 0.0));
        assert_eq!(w.norm(), 1.0);
        assert_eq!(w.entries()[1..].iter().map(|c| c.norm()).sum::<f64>(), 0.0);
    }

    #[test]
    fn tensor_vec_norm_multiplicative() {
        let u = sv(Space::Spatial(3), &[1.0, -2.0, 2.0]);
        let v = sv(Space::Spin(2), &[3.0, 4.0]);
        let w = u.tensor_vec(&v).unwrap();
        assert!((w.norm() - u.norm() * v.norm()).abs() < 1e-12);
    }

    #[test]
    fn commutator_self_and_identity_vanish_exactly() {
        let space = Space::Spatial(4);
        let mut a = Operator::zeros(space);
        for i in 0..4 {
            for j in 0..4 {
                a.set(i, j, C64::new((i + 2 * j) as f64, j as f64 - 1.0));
            }
        }
        assert_eq!(a.commutator(&a).unwrap().frobenius_norm(), 0.0);
        let id = Operator::identity(space);
        assert_eq!(a.commutator(&id).unwrap().frobenius_norm(), 0.0);
    }

    #[test]
    fn lifted_spatial_and_spin_operators_commute_exactly() {
        let spaces = CompositeSpace::new(3, 2);
        let mut a = Operator::zeros(Space::Spatial(3));
        for i in 0..3 {
            for j in 0..3 {
                a.set(i, j, C64::new((i * 3 + j) as f64, 0.0));
            }
        }
        let mut b = Operator::zeros(Space::Spin(2));
        for i in 0..2 {
            for j in 0..2 {
                b.set(i, j, C64::new(1.0 + (i + j) as f64, -0.5));
            }
        }
        let la = lift_spatial(&a, spaces).unwrap();
        let lb = lift_spin(&b, spaces).unwrap();
        assert_eq!(la.commutator(&lb).unwrap().frobenius_norm(), 0.0);
    }

    #[test]
    fn normalize_zero_fails() {
        let v = StateVector::zeros(Space::Spatial(4));
        assert!(matches!(v.normalized(1e-10), Err(Error::NearZeroNorm { .. })));
    }
}
