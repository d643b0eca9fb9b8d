//! The bundled reference scenario: a spin-7/2 particle on a 10-dimensional
//! spatial space (five vectors per slit), prepared in an entangled state so
//! that three commuting spin-subset detectors reveal three mutually
//! incompatible spatial properties.
//!
//! Every printed object is stored verbatim (the `literal` variant) together
//! with exact coefficient provenance. Where the literal data fail a
//! structural requirement, a `repaired` counterpart is derived — per-slit
//! Löwdin orthonormalization for the routing channels, constraint solving
//! for the replaced property projectors (see [`crate::solver`]).

use crate::exact::{Surd, SurdSum};
use crate::linalg::{
    gram_schmidt, lift_spatial, lift_spin, projector_from_orthonormal, CompositeSpace, Operator,
    Space, StateVector, C64,
};
use crate::spin::{SpinSubset, SpinSystem};
use crate::{Error, Result, ToleranceConfig};

/// Which side of the literal/repaired duality an object belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    Literal,
    Repaired,
}

impl Variant {
    pub fn name(&self) -> &'static str {
        match self {
            Variant::Literal => "literal",
            Variant::Repaired => "repaired",
        }
    }
}

/// Spatial dimension: five orthonormal vectors localized in each slit.
pub const PER_SLIT: usize = 5;
pub const SPATIAL_DIM: usize = 2 * PER_SLIT;

/// Spin basis slots of the j = 7/2 system (slot 0 is m = +7/2).
pub const SLOT_7_2: usize = 0;
pub const SLOT_5_2: usize = 1;
pub const SLOT_3_2: usize = 2;
pub const SLOT_1_2: usize = 3;
pub const SLOT_M1_2: usize = 4;
pub const SLOT_M3_2: usize = 5;
pub const SLOT_M5_2: usize = 6;
pub const SLOT_M7_2: usize = 7;

/// Spin slots blocked by the stage-3 filter (m = 5/2 and m = -3/2).
pub const BLOCKED_SLOTS: [usize; 2] = [SLOT_5_2, SLOT_M3_2];

/// A real vector with exact coefficients, floatified on demand.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactVector {
    pub coeffs: Vec<SurdSum>,
}

impl ExactVector {
    pub fn zeros(dim: usize) -> Self {
        Self {
            coeffs: vec![SurdSum::zero(); dim],
        }
    }

    /// `scale ·  Σ cᵢ e_{slotᵢ}` for an integer pattern.
    pub fn scaled_pattern(dim: usize, scale: Surd, pattern: &[(usize, i64)]) -> Self {
        let mut v = Self::zeros(dim);
        for &(slot, c) in pattern {
            v.coeffs[slot] = v.coeffs[slot].add(&SurdSum::from_surd(scale).scale(Surd::rational(c, 1)));
        }
        v
    }

    pub fn add(&self, other: &ExactVector) -> ExactVector {
        ExactVector {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn scale_sum(&self, s: &SurdSum) -> ExactVector {
        ExactVector {
            coeffs: self.coeffs.iter().map(|c| c.mul(s)).collect(),
        }
    }

    /// Exact `⟨self|other⟩` (real vectors).
    pub fn dot(&self, other: &ExactVector) -> SurdSum {
        SurdSum::dot(&self.coeffs, &other.coeffs)
    }

    pub fn norm_squared(&self) -> SurdSum {
        self.dot(self)
    }

    pub fn to_state(&self, space: Space) -> StateVector {
        StateVector::from_entries(space, self.coeffs.iter().map(|c| C64::new(c.to_f64(), 0.0)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(SurdSum::is_zero)
    }
}

/// The eight spatial routing channels, one per spin slot.
///
/// Six are printed; the two blocked ones (annihilated by the filter) are
/// synthesized by Gram-Schmidt completion inside their slit subspace, so
/// their choice cannot affect the filtered state.
#[derive(Debug, Clone)]
pub struct ChannelSet {
    pub variant: Variant,
    /// spatial channel vector per spin slot
    pub vectors: Vec<StateVector>,
    /// exact forms where available (printed six, literal variant only)
    pub exact: Vec<Option<ExactVector>>,
    /// destination slit (1 or 2) per spin slot
    pub slit: [u8; 8],
    pub blocked: [bool; 8],
}

/// Printed coefficient data underlying the scenario, exact where printed.
#[derive(Debug, Clone)]
pub struct PrintedData {
    pub spin: SpinSystem,
    pub spaces: CompositeSpace,
    /// amplitudes of the S_x top eigenvector |s⟩ per spin slot
    pub s_amplitudes: Vec<SurdSum>,
    /// the six printed channels, keyed by spin slot
    pub channels: Vec<Option<ExactVector>>,
    /// the two printed channels that are sums of two sub-vectors:
    /// (spin slot, first part, second part)
    pub channel_subvectors: Vec<(usize, ExactVector, ExactVector)>,
    /// second-property generating vectors exactly as printed (first vector
    /// in its duplicated-basis-token reading)
    pub g_vectors_printed: [ExactVector; 3],
    /// alternative reading of the first generating vector (third token read
    /// as the third basis vector, which restores unit norm)
    pub g1_alt_reading: ExactVector,
    /// third-property generating vectors (printed, exactly orthonormal)
    pub l_vectors: [ExactVector; 5],
    /// prepared-state spatial components per spin slot (exact products of
    /// |s⟩ amplitudes with the printed channels; blocked slots are zero)
    pub psi_components: Vec<ExactVector>,
}

fn spatial_space() -> Space {
    Space::Spatial(SPATIAL_DIM)
}

impl PrintedData {
    pub fn build() -> Self {
        let spin = SpinSystem::spin_7_2();
        let spaces = CompositeSpace::new(SPATIAL_DIM, spin.dim());
        let d = SPATIAL_DIM;

        // |s⟩ amplitudes: sqrt(C(7,k))/(8*sqrt(2)) = sqrt(2*C(7,k))/16
        let binom7 = [1u64, 7, 21, 35, 35, 21, 7, 1];
        let s_amplitudes: Vec<SurdSum> =
            binom7.iter().map(|&c| SurdSum::surd(1, 16, 2 * c)).collect();

        // routing channels (printed six); slit-2 basis slots are 5..9
        let inv2r2 = Surd::new(1, 4, 2); // 1/(2*sqrt(2))
        let invr15 = Surd::new(1, 15, 15); // 1/sqrt(15)
        let invr22 = Surd::new(1, 22, 22); // 1/sqrt(22)
        let invr70 = Surd::new(1, 70, 70); // 1/sqrt(70)

        let ch_7_2 = ExactVector::scaled_pattern(d, inv2r2, &[(0, -1), (1, -2), (2, 1), (3, 1), (4, 1)]);
        let ch_3_2 = ExactVector::scaled_pattern(d, invr15, &[(0, -1), (1, 1), (2, -2), (4, 3)]);
        let ch_1_2 = ExactVector::scaled_pattern(d, inv2r2, &[(5, -1), (6, -2), (7, 1), (8, 1), (9, 1)]);
        let ch_m1_2_a = ExactVector::scaled_pattern(d, invr22, &[(0, 1), (1, 1), (3, 3)]);
        let ch_m1_2_b = ExactVector::scaled_pattern(d, invr70, &[(0, 4), (1, 1), (2, 3), (4, 3)]);
        let ch_m1_2 = ch_m1_2_a.add(&ch_m1_2_b);
        let ch_m5_2 = ExactVector::scaled_pattern(d, invr15, &[(5, -1), (6, 1), (7, -2), (8, 3)]);
        let ch_m7_2_a = ExactVector::scaled_pattern(d, invr22, &[(5, 1), (6, 1), (8, 3)]);
        let ch_m7_2_b = ExactVector::scaled_pattern(d, invr70, &[(5, 4), (6, 1), (7, 3), (9, 3)]);
        let ch_m7_2 = ch_m7_2_a.add(&ch_m7_2_b);

        let mut channels: Vec<Option<ExactVector>> = vec![None; 8];
        channels[SLOT_7_2] = Some(ch_7_2);
        channels[SLOT_3_2] = Some(ch_3_2);
        channels[SLOT_1_2] = Some(ch_1_2);
        channels[SLOT_M1_2] = Some(ch_m1_2);
        channels[SLOT_M5_2] = Some(ch_m5_2);
        channels[SLOT_M7_2] = Some(ch_m7_2);

        let channel_subvectors = vec![
            (SLOT_M1_2, ch_m1_2_a, ch_m1_2_b),
            (SLOT_M7_2, ch_m7_2_a, ch_m7_2_b),
        ];

        // second-property generating vectors: the printed first vector lists
        // "-1/6" against the first basis vector twice; literal reading keeps
        // the duplication (first slot cancels), the alternative reading puts
        // the third term on the third basis vector.
        let sixth = Surd::rational(1, 6);
        // common tail: -sqrt(3)/2 ψ7 + 1/(2 sqrt 3) (ψ9 + ψ10)
        let g1_tail = {
            let mut t = ExactVector::zeros(d);
            t.coeffs[6] = SurdSum::surd(-1, 2, 3);
            t.coeffs[8] = SurdSum::surd(1, 6, 3);
            t.coeffs[9] = SurdSum::surd(1, 6, 3);
            t
        };
        let g1_printed = {
            let mut v = g1_tail.clone();
            // +1/6 ψ1 - 1/6 ψ2 - 1/6 ψ1 : first slot cancels exactly
            v.coeffs[0] = SurdSum::from_surd(sixth).sub(&SurdSum::from_surd(sixth));
            v.coeffs[1] = SurdSum::from_surd(sixth).neg();
            v
        };
        let g1_alt = {
            let mut v = g1_tail;
            v.coeffs[0] = SurdSum::from_surd(sixth);
            v.coeffs[1] = SurdSum::from_surd(sixth).neg();
            v.coeffs[2] = SurdSum::from_surd(sixth).neg();
            v
        };
        let g2 = {
            let mut v = ExactVector::zeros(d);
            v.coeffs[0] = SurdSum::surd(-1, 2, 3);
            v.coeffs[1] = SurdSum::surd(1, 6, 3); // 1/(2 sqrt 3)
            v.coeffs[2] = SurdSum::surd(1, 6, 3);
            v.coeffs[5] = SurdSum::surd(-1, 4, 6);
            v.coeffs[7] = SurdSum::surd(1, 4, 6);
            v.coeffs[8] = SurdSum::surd(1, 12, 6); // 1/(2 sqrt 6) = sqrt(6)/12
            v.coeffs[9] = SurdSum::surd(1, 12, 6);
            v
        };
        let g3 = ExactVector::scaled_pattern(d, Surd::new(1, 4, 2), &[(0, -1), (1, -2), (2, 1), (3, 1), (4, 1)]);

        // third-property generating vectors (printed, exactly orthonormal)
        let l1 = {
            let s1 = Surd::new(1, 75, 165); // (1/5) sqrt(11/15)
            let s2 = Surd::new(3, 25, 15); // (1/5) sqrt(11/15) * 9/sqrt(11)
            let mut v = ExactVector::scaled_pattern(d, s1, &[(0, -2), (1, 2), (2, 2)]);
            for (slot, c) in [(5usize, -1i64), (6, 1), (9, 1)] {
                v.coeffs[slot] = SurdSum::from_surd(s2).scale(Surd::rational(c, 1));
            }
            v
        };
        let l2 = {
            let s1 = Surd::new(1, 650, 715); // (1/10) sqrt(11/65)
            let s2 = Surd::new(1, 650, 65); // (1/10) sqrt(11/65) / sqrt(11)
            let mut v = ExactVector::scaled_pattern(d, s1, &[(0, 3), (1, -3), (2, -3)]);
            for (slot, q) in [(5usize, -24i64), (6, -51), (8, 25), (9, 49)] {
                v.coeffs[slot] = SurdSum::from_surd(s2).scale(Surd::rational(q, 1));
            }
            v
        };
        let l3 = {
            let s1 = Surd::new(1, 130, 858); // (1/5) sqrt(33/26)
            let s2 = Surd::new(1, 780, 78); // (1/5) sqrt(33/26) / (6 sqrt(11))
            let mut v = ExactVector::scaled_pattern(d, s1, &[(0, -1), (1, 1), (2, 1)]);
            for (slot, q) in [(5usize, -17i64), (6, -28), (7, 65), (8, 15), (9, -33)] {
                v.coeffs[slot] = SurdSum::from_surd(s2).scale(Surd::rational(q, 1));
            }
            v
        };
        let l4 = ExactVector::scaled_pattern(d, invr15, &[(0, -1), (1, 1), (2, -2), (4, 3)]);
        let l5 = ExactVector::scaled_pattern(d, Surd::new(1, 4, 2), &[(0, -1), (1, -2), (2, 1), (3, 1), (4, 1)]);

        // prepared-state components: |s⟩ amplitude times routed channel
        let mut psi_components = Vec::with_capacity(8);
        for slot in 0..8 {
            let comp = match &channels[slot] {
                Some(ch) => ch.scale_sum(&s_amplitudes[slot]),
                None => ExactVector::zeros(d),
            };
            psi_components.push(comp);
        }

        Self {
            spin,
            spaces,
            s_amplitudes,
            channels,
            channel_subvectors,
            g_vectors_printed: [g1_printed, g2, g3],
            g1_alt_reading: g1_alt,
            l_vectors: [l1, l2, l3, l4, l5],
            psi_components,
        }
    }

    /// Destination slit of each spin slot under the routing table
    /// (slit 1 for m ∈ {7/2, 5/2, 3/2, -1/2}, slit 2 otherwise).
    pub fn slit_of_slot(slot: usize) -> u8 {
        match slot {
            SLOT_7_2 | SLOT_5_2 | SLOT_3_2 | SLOT_M1_2 => 1,
            _ => 2,
        }
    }
}

/// Build the which-slit projector pair `(E_spatial, E_composite)`.
///
/// The spatial part projects onto the first-slit span (basis slots 0..5);
/// its complement `I - E` is the second-slit property.
pub fn which_slit_projector(spaces: CompositeSpace) -> (Operator, Operator) {
    let mut e = Operator::zeros(Space::Spatial(spaces.spatial_dim));
    for i in 0..PER_SLIT {
        e.set(i, i, C64::new(1.0, 0.0));
    }
    let lifted = lift_spatial(&e, spaces).expect("spatial dims agree");
    (e, lifted)
}

/// The prepared entangled state exactly as printed (NOT normalized).
pub fn build_psi_literal(printed: &PrintedData) -> StateVector {
    let spaces = printed.spaces;
    let mut psi = StateVector::zeros(spaces.space());
    for (slot, comp) in printed.psi_components.iter().enumerate() {
        for s in 0..spaces.spatial_dim {
            let c = comp.coeffs[s].to_f64();
            if c != 0.0 {
                psi.set(spaces.index(s, slot), C64::new(c, 0.0));
            }
        }
    }
    psi
}

/// Outcome of assembling the second property from its printed vectors.
#[derive(Debug)]
pub struct SecondPropertyLiteral {
    /// the printed vectors (duplicated-token reading of the first one)
    pub vectors: [StateVector; 3],
    /// strict assembly: fails with the Gram defect because the printed
    /// vectors are not orthonormal
    pub projector_attempt: Result<Operator>,
    /// raw dyad sum over the printed vectors — the literal operator used in
    /// the literal-variant condition battery (not a projector)
    pub raw_dyad_sum: Operator,
}

/// Assemble the second property from the printed vectors.
pub fn build_second_property_literal(
    printed: &PrintedData,
    tol: &ToleranceConfig,
) -> SecondPropertyLiteral {
    let space = spatial_space();
    let vectors: [StateVector; 3] = [
        printed.g_vectors_printed[0].to_state(space),
        printed.g_vectors_printed[1].to_state(space),
        printed.g_vectors_printed[2].to_state(space),
    ];
    let projector_attempt = projector_from_orthonormal(&vectors, space, tol);
    let raw_dyad_sum = Operator::from_dyads(space, &vectors).expect("same space");
    SecondPropertyLiteral {
        vectors,
        projector_attempt,
        raw_dyad_sum,
    }
}

/// Assemble the third property: the printed generating vectors are exactly
/// orthonormal, so the strict projector assembly succeeds.
pub fn build_third_property(
    printed: &PrintedData,
    tol: &ToleranceConfig,
) -> Result<([StateVector; 5], Operator)> {
    let space = spatial_space();
    let vectors: [StateVector; 5] = std::array::from_fn(|i| printed.l_vectors[i].to_state(space));
    let op = projector_from_orthonormal(&vectors, space, tol)?;
    Ok((vectors, op))
}

/// The three printed detector spin subsets, in scenario order:
/// which-slit, second property, third property.
pub fn detector_subsets(spin: &SpinSystem) -> [SpinSubset; 3] {
    [
        SpinSubset::from_two_ms(spin, &[7, 5, 3, -1]).expect("valid m"),
        SpinSubset::from_two_ms(spin, &[7, 5, 1, -3]).expect("valid m"),
        SpinSubset::from_two_ms(spin, &[7, 3, 1, -5]).expect("valid m"),
    ]
}

/// Lifted detector operators `I ⊗ P_subset` in scenario order.
pub fn build_detectors(spin: &SpinSystem, spaces: CompositeSpace) -> [Operator; 3] {
    detector_subsets(spin)
        .map(|s| lift_spin(&spin.subset_projector(s), spaces).expect("spin dims agree"))
}

/// `v/‖v‖`, for probability computations; fails on near-zero norm.
pub fn normalize_for_probability(v: &StateVector, tol: &ToleranceConfig) -> Result<StateVector> {
    v.normalized(tol.abs_tol)
}

/// Build the channel set for a variant.
///
/// Literal: the printed six verbatim. Repaired: per-slit Löwdin
/// orthonormalization of the printed six (the nearest orthonormal
/// channels). Blocked channels are synthesized either way by Gram-Schmidt
/// completion of the slit basis against that slit's channels.
pub fn build_channels(printed: &PrintedData, variant: Variant, tol: &ToleranceConfig) -> Result<ChannelSet> {
    let space = spatial_space();
    let mut slit = [0u8; 8];
    let mut blocked = [false; 8];
    for slot in 0..8 {
        slit[slot] = PrintedData::slit_of_slot(slot);
        blocked[slot] = BLOCKED_SLOTS.contains(&slot);
    }

    // unblocked printed channels per slit, in spin-slot order
    let slit_slots = |k: u8| -> Vec<usize> {
        (0..8)
            .filter(|&s| slit[s] == k && !blocked[s])
            .collect::<Vec<_>>()
    };

    let mut vectors: Vec<Option<StateVector>> = vec![None; 8];
    let mut exact: Vec<Option<ExactVector>> = vec![None; 8];
    for k in [1u8, 2] {
        let slots = slit_slots(k);
        let printed_vs: Vec<StateVector> = slots
            .iter()
            .map(|&s| printed.channels[s].as_ref().expect("printed channel").to_state(space))
            .collect();
        let used: Vec<StateVector> = match variant {
            Variant::Literal => printed_vs,
            Variant::Repaired => crate::linalg::lowdin_orthonormalize(&printed_vs)?,
        };
        for (i, &s) in slots.iter().enumerate() {
            vectors[s] = Some(used[i].clone());
            if variant == Variant::Literal {
                exact[s] = printed.channels[s].clone();
            }
        }
        // synthesize the blocked channel inside this slit subspace
        let blocked_slot = (0..8).find(|&s| slit[s] == k && blocked[s]).expect("one per slit");
        let basis_start = if k == 1 { 0 } else { PER_SLIT };
        let mut candidates: Vec<StateVector> = used.clone();
        for b in basis_start..basis_start + PER_SLIT {
            candidates.push(StateVector::basis_vector(space, b));
        }
        let (ortho, _, _) = gram_schmidt(&candidates, tol);
        let synth = ortho
            .get(used.len())
            .cloned()
            .ok_or(Error::RankDeficient { index: used.len() })?;
        vectors[blocked_slot] = Some(synth);
    }

    Ok(ChannelSet {
        variant,
        vectors: vectors.into_iter().map(|v| v.expect("all slots filled")).collect(),
        exact,
        slit,
        blocked,
    })
}

/// Preparation pipeline stages (times t0, t_1/2, t1 of the procedure).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PipelineStage {
    /// spin-selected product state at t0
    Selected,
    /// routed through the spatial channels at t_1/2
    Routed,
    /// blocked beams removed at t1
    Filtered,
}

impl PipelineStage {
    pub fn name(&self) -> &'static str {
        match self {
            PipelineStage::Selected => "t0_selected",
            PipelineStage::Routed => "t_half_routed",
            PipelineStage::Filtered => "t1_filtered",
        }
    }
}

/// One pipeline snapshot; stages only move forward.
#[derive(Debug, Clone)]
pub struct PipelineState {
    pub stage: PipelineStage,
    pub vector: StateVector,
    pub norm_squared: f64,
}

/// Full pipeline trace plus the reconstruction residual against the
/// printed prepared state.
#[derive(Debug, Clone)]
pub struct PipelineRun {
    pub variant: Variant,
    pub stages: Vec<PipelineState>,
    /// `‖filtered - psi_printed‖` (unnormalized, same scale as printed)
    pub reconstruction_residual: f64,
    /// componentwise max deviation from the printed prepared state
    pub reconstruction_max_abs: f64,
    /// discrepancy of the rank-1 reading of the filter, `‖P̂Ψ̂ - Ψ_filtered‖ / ‖Ψ_filtered‖`
    pub rank1_filter_discrepancy: f64,
}

fn snapshot(stage: PipelineStage, vector: StateVector) -> PipelineState {
    let norm_squared = vector.norm_squared();
    PipelineState {
        stage,
        vector,
        norm_squared,
    }
}

/// Run the three-stage preparation: select the top S_x eigenstate, route
/// each spin component through its spatial channel, block the m = 5/2 and
/// m = -3/2 beams.
///
/// `seed` is the pre-pipeline spatial state (unit norm required); the
/// routing output is independent of it by construction. Defaults to the
/// first basis vector.
pub fn run_pipeline(
    printed: &PrintedData,
    channels: &ChannelSet,
    seed: Option<&StateVector>,
    tol: &ToleranceConfig,
) -> Result<PipelineRun> {
    let spaces = printed.spaces;
    let space = spatial_space();
    let default_seed = StateVector::basis_vector(space, 0);
    let seed = seed.unwrap_or(&default_seed);
    if (seed.norm() - 1.0).abs() > tol.abs_tol {
        return Err(Error::NearZeroNorm { norm: seed.norm() });
    }

    // stage 1: seed ⊗ |s⟩
    let s_ket = printed.spin.sx_top_eigenvector();
    let selected = seed.tensor_vec(&s_ket)?;

    // stage 2: route componentwise in the spin basis; exact when the
    // literal channels carry exact forms
    let mut routed = StateVector::zeros(spaces.space());
    for slot in 0..8 {
        match (&channels.exact[slot], channels.variant) {
            (Some(ch), Variant::Literal) => {
                let comp = ch.scale_sum(&printed.s_amplitudes[slot]);
                for s in 0..spaces.spatial_dim {
                    routed.set(spaces.index(s, slot), C64::new(comp.coeffs[s].to_f64(), 0.0));
                }
            }
            _ => {
                let amp = printed.s_amplitudes[slot].to_f64();
                let ch = &channels.vectors[slot];
                for s in 0..spaces.spatial_dim {
                    let idx = spaces.index(s, slot);
                    routed.set(idx, ch.get(s) * amp);
                }
            }
        }
    }

    // stage 3: zero the blocked spin components
    let mut filtered = routed.clone();
    for &slot in &BLOCKED_SLOTS {
        for s in 0..spaces.spatial_dim {
            filtered.set(spaces.index(s, slot), C64::new(0.0, 0.0));
        }
    }

    // the printed text reads the filter as the rank-1 projector onto the
    // unnormalized unblocked part; evaluated here for the audit only:
    // |Ψ₁⟩⟨Ψ₁|Ψ̂ = filtered · ⟨filtered|routed⟩
    let keep_inner = filtered.inner(&routed)?;
    let rank1_applied = filtered.scale(keep_inner);
    let rank1_filter_discrepancy =
        rank1_applied.sub(&filtered).norm() / filtered.norm().max(f64::MIN_POSITIVE);

    let psi_printed = build_psi_literal(printed);
    let reconstruction_residual = filtered.sub(&psi_printed).norm();
    let reconstruction_max_abs = filtered.max_abs_diff(&psi_printed);

    Ok(PipelineRun {
        variant: channels.variant,
        stages: vec![
            snapshot(PipelineStage::Selected, selected),
            snapshot(PipelineStage::Routed, routed),
            snapshot(PipelineStage::Filtered, filtered),
        ],
        reconstruction_residual,
        reconstruction_max_abs,
        rank1_filter_discrepancy,
    })
}

/// A fully assembled scenario variant: the three spatial properties, their
/// detector spin subsets, and the prepared state.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub variant: Variant,
    pub spin: SpinSystem,
    pub spaces: CompositeSpace,
    /// which-slit property (spatial); rank 5 projector onto slit 1
    pub slit_property: Operator,
    /// second property (spatial); literal: raw dyad sum over the printed
    /// vectors (not a projector), repaired: solver-derived projector
    pub second_property: Operator,
    /// third property (spatial)
    pub third_property: Operator,
    /// detector spin subsets in property order
    pub subsets: [SpinSubset; 3],
    /// prepared state (unnormalized)
    pub psi: StateVector,
}

impl Scenario {
    /// The literal scenario: everything exactly as printed.
    pub fn literal(printed: &PrintedData, tol: &ToleranceConfig) -> Result<Self> {
        let spaces = printed.spaces;
        let (slit, _) = which_slit_projector(spaces);
        let second = build_second_property_literal(printed, tol);
        let (_, third) = build_third_property(printed, tol)?;
        Ok(Self {
            variant: Variant::Literal,
            spin: printed.spin,
            spaces,
            slit_property: slit,
            second_property: second.raw_dyad_sum,
            third_property: third,
            subsets: detector_subsets(&printed.spin),
            psi: build_psi_literal(printed),
        })
    }

    pub fn properties(&self) -> [&Operator; 3] {
        [
            &self.slit_property,
            &self.second_property,
            &self.third_property,
        ]
    }

    /// Lifted property operator `R ⊗ I`.
    pub fn lifted_property(&self, i: usize) -> Operator {
        lift_spatial(self.properties()[i], self.spaces).expect("spatial dims agree")
    }

    /// Lifted detector operator `I ⊗ P_subset`.
    pub fn detector(&self, i: usize) -> Operator {
        lift_spin(&self.spin.subset_projector(self.subsets[i]), self.spaces)
            .expect("spin dims agree")
    }

    pub fn property_names() -> [&'static str; 3] {
        ["which-slit", "second", "third"]
    }

    pub fn detector_names() -> [&'static str; 3] {
        ["T", "Y", "W"]
    }
}
