//! Spin-j operator algebra in the S_z eigenbasis, ordered m = +j down to
//! m = -j. The bundled scenario uses j = 7/2 (dimension 8); everything here
//! is parametric in j. ℏ = 1 throughout.

use crate::linalg::{Operator, Space, StateVector, C64};
use crate::{Error, Result};
use std::fmt;

/// A spin system of total spin `j = two_j / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpinSystem {
    two_j: u32,
}

impl SpinSystem {
    pub fn with_two_j(two_j: u32) -> Self {
        Self { two_j }
    }

    /// The j = 7/2 system of the bundled scenario.
    pub fn spin_7_2() -> Self {
        Self { two_j: 7 }
    }

    pub fn two_j(&self) -> u32 {
        self.two_j
    }

    pub fn j(&self) -> f64 {
        self.two_j as f64 / 2.0
    }

    pub fn dim(&self) -> usize {
        self.two_j as usize + 1
    }

    pub fn space(&self) -> Space {
        Space::Spin(self.dim())
    }

    /// Doubled m-value of basis slot `i` (slot 0 is m = +j).
    pub fn two_m(&self, slot: usize) -> i32 {
        self.two_j as i32 - 2 * slot as i32
    }

    /// m-value of basis slot `i`.
    pub fn m_value(&self, slot: usize) -> f64 {
        self.two_m(slot) as f64 / 2.0
    }

    /// Basis slot of a doubled m-value, if it belongs to this system.
    pub fn slot_of_two_m(&self, two_m: i32) -> Option<usize> {
        let d = self.two_j as i32 - two_m;
        if d < 0 || d % 2 != 0 || d / 2 > self.two_j as i32 {
            return None;
        }
        Some((d / 2) as usize)
    }

    /// Human-readable m label for a slot: "7/2", "-1/2", "1", ...
    pub fn m_label(&self, slot: usize) -> String {
        let tm = self.two_m(slot);
        if tm % 2 == 0 {
            format!("{}", tm / 2)
        } else {
            format!("{}/2", tm)
        }
    }

    /// `S_z = diag(j, j-1, ..., -j)`.
    pub fn s_z(&self) -> Operator {
        let mut op = Operator::zeros(self.space());
        for i in 0..self.dim() {
            op.set(i, i, C64::new(self.m_value(i), 0.0));
        }
        op
    }

    /// Ladder operators: `⟨m+1|S₊|m⟩ = √(j(j+1) - m(m+1))`, `S₋ = S₊†`.
    pub fn s_ladder(&self) -> (Operator, Operator) {
        let j = self.j();
        let mut plus = Operator::zeros(self.space());
        for slot in 1..self.dim() {
            // raises slot (m) to slot-1 (m+1)
            let m = self.m_value(slot);
            let amp = (j * (j + 1.0) - m * (m + 1.0)).sqrt();
            plus.set(slot - 1, slot, C64::new(amp, 0.0));
        }
        let minus = plus.adjoint();
        (plus, minus)
    }

    /// `S_x = (S₊ + S₋)/2`.
    pub fn s_x(&self) -> Operator {
        let (plus, minus) = self.s_ladder();
        plus.add(&minus).scale(C64::new(0.5, 0.0))
    }

    /// `S_y = (S₊ - S₋)/(2i)`.
    pub fn s_y(&self) -> Operator {
        let (plus, minus) = self.s_ladder();
        plus.sub(&minus).scale(C64::new(0.0, -0.5))
    }

    /// Top eigenvector of `S_x` (`S_x v = j v`), phase fixed so the `|+j⟩`
    /// amplitude is real positive. The amplitudes follow the binomial
    /// profile `√C(2j, j-m) / 2^j`.
    pub fn sx_top_eigenvector(&self) -> StateVector {
        let n = self.dim();
        let mut v = StateVector::zeros(self.space());
        let norm = 2f64.powi(self.two_j as i32).sqrt(); // 2^j = sqrt(2^(2j))
        for slot in 0..n {
            let amp = binomial(self.two_j as u64, slot as u64).sqrt() / norm;
            v.set(slot, C64::new(amp, 0.0));
        }
        v
    }

    /// Rank-1 projector onto basis slot `i-1` (`i` is 1-based: i = 1 selects
    /// m = +j, and slot m-values descend by one per step).
    pub fn eigenprojector(&self, i: usize) -> Result<Operator> {
        if i == 0 || i > self.dim() {
            return Err(Error::IndexOutOfRange {
                index: i,
                max: self.dim(),
            });
        }
        let mut op = Operator::zeros(self.space());
        op.set(i - 1, i - 1, C64::new(1.0, 0.0));
        Ok(op)
    }

    /// Diagonal 0/1 projector onto a subset of basis slots.
    pub fn subset_projector(&self, subset: SpinSubset) -> Operator {
        let mut op = Operator::zeros(self.space());
        for slot in 0..self.dim() {
            if subset.contains(slot) {
                op.set(slot, slot, C64::new(1.0, 0.0));
            }
        }
        op
    }
}

fn binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0f64;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

/// A subset of spin basis slots, stored as a bitmask (bit `i` = slot `i`,
/// slot 0 = m = +j). Subset projectors are diagonal, so any two of them
/// commute exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SpinSubset {
    mask: u32,
    dim: usize,
}

impl SpinSubset {
    pub fn from_mask(mask: u32, dim: usize) -> Self {
        assert!(dim >= 1 && dim <= 31);
        Self {
            mask: mask & ((1u32 << dim) - 1),
            dim,
        }
    }

    pub fn from_slots(slots: &[usize], dim: usize) -> Self {
        let mut mask = 0u32;
        for &s in slots {
            assert!(s < dim);
            mask |= 1 << s;
        }
        Self { mask, dim }
    }

    /// Build from doubled m-values within a spin system.
    pub fn from_two_ms(sys: &SpinSystem, two_ms: &[i32]) -> Result<Self> {
        let mut mask = 0u32;
        for &tm in two_ms {
            let slot = sys
                .slot_of_two_m(tm)
                .ok_or(Error::IndexOutOfRange {
                    index: tm.unsigned_abs() as usize,
                    max: sys.dim(),
                })?;
            mask |= 1 << slot;
        }
        Ok(Self {
            mask,
            dim: sys.dim(),
        })
    }

    pub fn mask(&self) -> u32 {
        self.mask
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn contains(&self, slot: usize) -> bool {
        slot < self.dim && (self.mask >> slot) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.dim
    }

    pub fn complement(&self) -> Self {
        Self {
            mask: !self.mask & ((1u32 << self.dim) - 1),
            dim: self.dim,
        }
    }

    pub fn slots(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.dim).filter(|&s| self.contains(s))
    }

    /// Render with m labels of a system, e.g. `{7/2,5/2,3/2,-1/2}`.
    pub fn label(&self, sys: &SpinSystem) -> String {
        let inner: Vec<String> = self.slots().map(|s| sys.m_label(s)).collect();
        format!("{{{}}}", inner.join(","))
    }
}

impl fmt::Display for SpinSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "0b{:b}/{}", self.mask, self.dim)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s_z_spectrum_and_trace() {
        let sys = SpinSystem::spin_7_2();
        let sz = sys.s_z();
        let expect = [3.5, 2.5, 1.5, 0.5, -0.5, -1.5, -2.5, -3.5];
        for (i, &m) in expect.iter().enumerate() {
            assert_eq!(sz.get(i, i), C64::new(m, 0.0));
        }
        assert_eq!(sz.trace(), C64::new(0.0, 0.0));

        let half = SpinSystem::with_two_j(1);
        assert_eq!(half.s_z().get(0, 0), C64::new(0.5, 0.0));
        assert_eq!(half.s_z().get(1, 1), C64::new(-0.5, 0.0));
    }

    #[test]
    fn ladder_annihilates_top_weight_and_matches_algebra() {
        let sys = SpinSystem::spin_7_2();
        let (plus, minus) = sys.s_ladder();
        let top = StateVector::basis_vector(sys.space(), 0);
        assert_eq!(plus.apply(&top).unwrap().norm(), 0.0);
        // <7/2|S+|5/2> = sqrt(7)
        assert!((plus.get(0, 1).re - 7f64.sqrt()).abs() < 1e-14);
        // [S+, S-] = 2 Sz
        let comm = plus.commutator(&minus).unwrap();
        let two_sz = sys.s_z().scale(C64::new(2.0, 0.0));
        assert!(comm.max_abs_diff(&two_sz) < 1e-12);
    }

    #[test]
    fn s_x_half_spin_is_pauli_x_over_two() {
        let half = SpinSystem::with_two_j(1);
        let sx = half.s_x();
        assert_eq!(sx.get(0, 1), C64::new(0.5, 0.0));
        assert_eq!(sx.get(1, 0), C64::new(0.5, 0.0));
        assert_eq!(sx.get(0, 0), C64::new(0.0, 0.0));
        assert_eq!(sx.trace(), C64::new(0.0, 0.0));
    }

    #[test]
    fn sx_top_eigenvector_printed_amplitudes() {
        let sys = SpinSystem::spin_7_2();
        let v = sys.sx_top_eigenvector();
        let base = 1.0 / (8.0 * 2f64.sqrt());
        let coeffs = [1.0f64, 7.0, 21.0, 35.0, 35.0, 21.0, 7.0, 1.0];
        for (i, &c) in coeffs.iter().enumerate() {
            assert!((v.get(i).re - c.sqrt() * base).abs() < 1e-14);
        }
        let sxv = sys.s_x().apply(&v).unwrap();
        assert!(sxv.sub(&v.scale(C64::new(3.5, 0.0))).norm() < 1e-10);

        let half = SpinSystem::with_two_j(1);
        let vh = half.sx_top_eigenvector();
        assert!((vh.get(0).re - 1.0 / 2f64.sqrt()).abs() < 1e-15);
        assert!((vh.get(1).re - 1.0 / 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn eigenprojectors_resolve_identity() {
        let sys = SpinSystem::spin_7_2();
        assert!(sys.eigenprojector(0).is_err());
        assert!(sys.eigenprojector(9).is_err());
        let mut sum = Operator::zeros(sys.space());
        for i in 1..=8 {
            sum = sum.add(&sys.eigenprojector(i).unwrap());
        }
        assert!(sum.max_abs_diff(&Operator::identity(sys.space())) < 1e-15);
        // index rule j_i = 7/2 - (i-1): i = 5 selects m = -1/2
        let p5 = sys.eigenprojector(5).unwrap();
        assert_eq!(p5.get(4, 4), C64::new(1.0, 0.0));
        assert_eq!(sys.m_value(4), -0.5);
    }

    #[test]
    fn subset_projectors_commute_exactly() {
        let sys = SpinSystem::spin_7_2();
        let t = SpinSubset::from_two_ms(&sys, &[7, 5, 3, -1]).unwrap();
        let y = SpinSubset::from_two_ms(&sys, &[7, 5, 1, -3]).unwrap();
        let w = SpinSubset::from_two_ms(&sys, &[7, 3, 1, -5]).unwrap();
        for a in [t, y, w] {
            for b in [t, y, w] {
                let c = sys
                    .subset_projector(a)
                    .commutator(&sys.subset_projector(b))
                    .unwrap();
                assert_eq!(c.frobenius_norm(), 0.0);
            }
        }
        assert_eq!(t.len(), 4);
        assert_eq!(sys.subset_projector(t).trace(), C64::new(4.0, 0.0));
    }
}
