//! Constraint solver: given a composite state and a detector spin subset,
//! construct the spatial projector that the detector detects, search subset
//! triples for complete solutions, and repair the bundled scenario where
//! its printed data are inconsistent.
//!
//! For a state `ψ = Σ_m φ_m ⊗ |m⟩` and subset `S`, a projector `R`
//! satisfies `(I ⊗ P_S)ψ = (R ⊗ I)ψ` exactly iff it fixes every nonzero
//! `φ_m` with `m ∈ S` and annihilates every nonzero `φ_m` with `m ∉ S`.
//! That is feasible exactly when the two spans are orthogonal and disjoint;
//! zero components impose no constraint. The remaining freedom (rank
//! completion orthogonal to every `φ_m`) never affects the detection
//! identity but decides which derived properties are mutually incompatible,
//! so the completion basis is an explicit, documented policy.

use crate::audit::{self, ConditionReport};
use crate::linalg::{gram_schmidt, hermitian_eig, CompositeSpace, Operator, Space, StateVector, C64};
use crate::scenario::{self, PrintedData, Scenario, Variant};
use crate::spin::{SpinSubset, SpinSystem};
use crate::{Error, Result, ToleranceConfig};
use std::fmt;

/// Cross-span overlap below this is treated as zero when testing
/// feasibility; completions whose residual falls below it are discarded.
const SPAN_TOL: f64 = 1e-8;

/// Candidate sequence for rank completion.
///
/// `Index` walks the computational basis in index order and keeps every
/// derived direction inside a single slit when the constrained spans are
/// slit-pure (it reproduces the which-slit projector for the first
/// detector subset). `PairedMix` walks `(e_i + e_{(i+stride) mod d})/√2`
/// first, deliberately mixing remote basis directions so that derived
/// properties come out mutually incompatible; distinct strides give
/// distinct, mutually skew completions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompletionBasis {
    Index,
    PairedMix { stride: usize },
}

impl CompletionBasis {
    /// Deterministic per-slot policy used by [`solve_triple`]: the first
    /// slot completes along the plain basis, later slots along paired
    /// mixtures with slot-dependent stride.
    pub fn for_slot(slot: usize, spatial_dim: usize) -> Self {
        if slot == 0 {
            return CompletionBasis::Index;
        }
        let mut stride = (spatial_dim / 2 + slot - 1) % spatial_dim;
        if stride == 0 {
            stride = 1;
        }
        CompletionBasis::PairedMix { stride }
    }

    fn candidates(&self, space: Space) -> Vec<StateVector> {
        let d = space.dim();
        let mut out = Vec::new();
        if let CompletionBasis::PairedMix { stride } = *self {
            let inv = C64::new(1.0 / 2f64.sqrt(), 0.0);
            for i in 0..d {
                let mut v = StateVector::basis_vector(space, i)
                    .add(&StateVector::basis_vector(space, (i + stride) % d));
                v = v.scale(inv);
                out.push(v);
            }
        }
        for i in 0..d {
            out.push(StateVector::basis_vector(space, i));
        }
        out
    }
}

/// A detection constraint: the state, the detector subset, the requested
/// projector rank (clamped to the feasible range; `None` means minimal),
/// and the completion policy.
#[derive(Debug, Clone)]
pub struct DetectionConstraint {
    pub psi: StateVector,
    pub subset: SpinSubset,
    pub target_rank: Option<usize>,
    pub completion: CompletionBasis,
}

/// Why a constraint has no exact solution, naming the offending pair of
/// spin components and the measured overlap.
#[derive(Debug, Clone, PartialEq)]
pub struct Infeasibility {
    /// spin slot whose component must be fixed
    pub fixed_slot: usize,
    /// spin slot whose component must be annihilated
    pub annihilated_slot: usize,
    /// |⟨φ̂_fixed, φ̂_annihilated⟩| for the worst pair
    pub overlap: f64,
    /// smallest principal angle between the two constrained spans (radians)
    pub min_principal_angle: f64,
}

impl fmt::Display for Infeasibility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "components at spin slots {} (must fix) and {} (must annihilate) overlap by {:.6e} (smallest principal angle {:.6e} rad)",
            self.fixed_slot, self.annihilated_slot, self.overlap, self.min_principal_angle
        )
    }
}

/// Residual certificates attached to a derived projector.
#[derive(Debug, Clone, Copy)]
pub struct SolutionCertificate {
    /// `‖(I ⊗ P_S)ψ - (R ⊗ I)ψ‖ / ‖ψ‖`
    pub detection_residual: f64,
    pub hermiticity_defect: f64,
    pub idempotency_defect: f64,
    /// worst measured overlap between the fixed and annihilated spans
    pub cross_gram_max: f64,
    /// worst overlap of a completion direction with any state component
    pub completion_overlap_max: f64,
}

/// A derived property: the spatial projector plus certificates and the
/// size of the unconstrained solution family.
#[derive(Debug, Clone)]
pub struct SolverSolution {
    pub projector: Operator,
    pub rank: usize,
    /// dimension of the span the detection identity pins to 1
    pub fixed_dim: usize,
    /// dimension of the subspace unconstrained by the state
    pub freedom_dim: usize,
    pub certificate: SolutionCertificate,
}

fn spatial_components(
    psi: &StateVector,
    spaces: CompositeSpace,
    tol: &ToleranceConfig,
) -> Result<(Vec<StateVector>, Vec<bool>, f64)> {
    if psi.space() != spaces.space() {
        return Err(Error::SpaceMismatch {
            left: psi.space(),
            right: spaces.space(),
            context: "detection constraint state",
        });
    }
    let norm = psi.norm();
    if norm <= tol.abs_tol {
        return Err(Error::NearZeroNorm { norm });
    }
    let mut comps = Vec::with_capacity(spaces.spin_dim);
    let mut present = Vec::with_capacity(spaces.spin_dim);
    for slot in 0..spaces.spin_dim {
        let c = psi.spatial_component(spaces, slot);
        present.push(c.norm() > tol.abs_tol * norm);
        comps.push(c);
    }
    Ok((comps, present, norm))
}

/// Construct the spatial projector detected by `I ⊗ P_subset` on `ψ`.
pub fn derive_property(
    constraint: &DetectionConstraint,
    spaces: CompositeSpace,
    tol: &ToleranceConfig,
) -> Result<SolverSolution> {
    let (comps, present, psi_norm) = spatial_components(&constraint.psi, spaces, tol)?;
    let space = Space::Spatial(spaces.spatial_dim);
    let subset = constraint.subset;

    let fixed_raw: Vec<(usize, StateVector)> = (0..spaces.spin_dim)
        .filter(|&s| present[s] && subset.contains(s))
        .map(|s| (s, comps[s].clone()))
        .collect();
    let ann_raw: Vec<(usize, StateVector)> = (0..spaces.spin_dim)
        .filter(|&s| present[s] && !subset.contains(s))
        .map(|s| (s, comps[s].clone()))
        .collect();

    // feasibility: worst pairwise overlap of unit components across the two
    // groups, plus the principal-angle test on the orthonormalized spans
    let mut worst = Infeasibility {
        fixed_slot: 0,
        annihilated_slot: 0,
        overlap: 0.0,
        min_principal_angle: std::f64::consts::FRAC_PI_2,
    };
    for (fs, fv) in &fixed_raw {
        let fu = fv.normalized(tol.abs_tol)?;
        for (as_, av) in &ann_raw {
            let au = av.normalized(tol.abs_tol)?;
            let ov = fu.inner(&au)?.norm();
            if ov > worst.overlap {
                worst.fixed_slot = *fs;
                worst.annihilated_slot = *as_;
                worst.overlap = ov;
            }
        }
    }

    let fixed_vecs: Vec<StateVector> = fixed_raw.iter().map(|(_, v)| v.clone()).collect();
    let ann_vecs: Vec<StateVector> = ann_raw.iter().map(|(_, v)| v.clone()).collect();
    let (fixed_basis, fixed_dim, _) = gram_schmidt(&fixed_vecs, tol);
    let (ann_basis, ann_dim, _) = gram_schmidt(&ann_vecs, tol);

    if fixed_dim > 0 && ann_dim > 0 {
        // cross Gram of orthonormal bases; largest singular value is the
        // cosine of the smallest principal angle
        let mut mtm = Operator::zeros(Space::Spatial(ann_dim));
        let mut cross = vec![C64::new(0.0, 0.0); fixed_dim * ann_dim];
        for (i, fv) in fixed_basis.iter().enumerate() {
            for (j, av) in ann_basis.iter().enumerate() {
                cross[i * ann_dim + j] = fv.inner(av)?;
            }
        }
        for a in 0..ann_dim {
            for b in 0..ann_dim {
                let mut acc = C64::new(0.0, 0.0);
                for i in 0..fixed_dim {
                    acc += cross[i * ann_dim + a].conj() * cross[i * ann_dim + b];
                }
                mtm.set(a, b, acc);
            }
        }
        let eig = hermitian_eig(&mtm, 1e-9)?;
        let sigma_max = eig
            .eigenvalues
            .last()
            .copied()
            .unwrap_or(0.0)
            .max(0.0)
            .sqrt()
            .min(1.0);
        worst.min_principal_angle = sigma_max.acos();
        if worst.overlap > SPAN_TOL || worst.min_principal_angle < 1e-8 {
            return Err(Error::Infeasible(worst));
        }
    }

    // span of every present component: its complement is the freedom space
    let all_vecs: Vec<StateVector> = fixed_vecs.iter().chain(&ann_vecs).cloned().collect();
    let (all_basis, all_dim, _) = gram_schmidt(&all_vecs, tol);
    let freedom_dim = spaces.spatial_dim - all_dim;

    let max_rank = fixed_dim + freedom_dim;
    let rank = constraint
        .target_rank
        .unwrap_or(fixed_dim)
        .clamp(fixed_dim, max_rank);

    // rank completion: orthogonal to every state component by construction
    let mut directions = fixed_basis.clone();
    let mut completion_overlap_max: f64 = 0.0;
    if rank > fixed_dim {
        'cand: for cand in constraint.completion.candidates(space) {
            if directions.len() >= rank {
                break;
            }
            let mut w = cand;
            for _ in 0..2 {
                for u in all_basis.iter().chain(directions.iter()) {
                    let c = u.inner(&w)?;
                    w = w.sub(&u.scale(c));
                }
            }
            let n = w.norm();
            if n <= SPAN_TOL {
                continue 'cand;
            }
            let w = w.scale(C64::new(1.0 / n, 0.0));
            for u in &all_basis {
                completion_overlap_max = completion_overlap_max.max(u.inner(&w)?.norm());
            }
            directions.push(w);
        }
    }
    let rank = directions.len();

    let projector = Operator::from_dyads(space, &directions)?;

    // detection residual measured componentwise (equals the composite-level
    // residual exactly, by the Kronecker index convention)
    let mut err2 = 0.0;
    for slot in 0..spaces.spin_dim {
        let rphi = projector.apply(&comps[slot])?;
        let target = if subset.contains(slot) {
            comps[slot].clone()
        } else {
            StateVector::zeros(space)
        };
        err2 += rphi.sub(&target).norm_squared();
    }
    let certificate = SolutionCertificate {
        detection_residual: err2.sqrt() / psi_norm,
        hermiticity_defect: projector.hermiticity_defect(),
        idempotency_defect: projector.idempotency_defect(),
        cross_gram_max: worst.overlap,
        completion_overlap_max,
    };
    Ok(SolverSolution {
        projector,
        rank,
        fixed_dim,
        freedom_dim,
        certificate,
    })
}

/// Target ranks used for the bundled scenario's subsets (matching the
/// printed property ranks 5, 3, 5).
pub fn bundled_ranks() -> [Option<usize>; 3] {
    [Some(5), Some(3), Some(5)]
}

/// Outcome of deriving a full property triple.
#[derive(Debug)]
pub struct TripleOutcome {
    pub per_subset: [std::result::Result<SolverSolution, Infeasibility>; 3],
    /// full condition battery, present when all three derivations succeeded
    pub report: Option<ConditionReport>,
}

impl TripleOutcome {
    pub fn solutions(&self) -> Option<[&SolverSolution; 3]> {
        match &self.per_subset {
            [Ok(a), Ok(b), Ok(c)] => Some([a, b, c]),
            _ => None,
        }
    }
}

/// Derive properties for three subsets (slot-wise completion policy) and
/// evaluate the full condition battery on the result.
pub fn solve_triple(
    psi: &StateVector,
    spaces: CompositeSpace,
    spin: &SpinSystem,
    subsets: [SpinSubset; 3],
    ranks: [Option<usize>; 3],
    tol: &ToleranceConfig,
) -> Result<TripleOutcome> {
    let mut per_subset: [std::result::Result<SolverSolution, Infeasibility>; 3] = [
        Err(placeholder_infeasibility()),
        Err(placeholder_infeasibility()),
        Err(placeholder_infeasibility()),
    ];
    for (slot, subset) in subsets.iter().enumerate() {
        let constraint = DetectionConstraint {
            psi: psi.clone(),
            subset: *subset,
            target_rank: ranks[slot],
            completion: CompletionBasis::for_slot(slot, spaces.spatial_dim),
        };
        per_subset[slot] = match derive_property(&constraint, spaces, tol) {
            Ok(s) => Ok(s),
            Err(Error::Infeasible(i)) => Err(i),
            Err(e) => return Err(e),
        };
    }
    let report = match &per_subset {
        [Ok(a), Ok(b), Ok(c)] => {
            let scn = Scenario {
                variant: Variant::Repaired,
                spin: *spin,
                spaces,
                slit_property: a.projector.clone(),
                second_property: b.projector.clone(),
                third_property: c.projector.clone(),
                subsets,
                psi: psi.clone(),
            };
            Some(audit::evaluate_conditions_labeled(&scn, tol, "solver"))
        }
        _ => None,
    };
    Ok(TripleOutcome { per_subset, report })
}

fn placeholder_infeasibility() -> Infeasibility {
    Infeasibility {
        fixed_slot: 0,
        annihilated_slot: 0,
        overlap: f64::NAN,
        min_principal_angle: f64::NAN,
    }
}

/// Compact per-triple summary produced by the enumeration.
#[derive(Debug, Clone)]
pub struct TripleSummary {
    pub subsets: [SpinSubset; 3],
    /// spatial-factor commutator norms between the three derived
    /// projectors: (first,second), (first,third), (third,second)
    pub incompatibility_norms: [f64; 3],
    pub detection_residuals: [f64; 3],
    /// min over properties of `min(‖Rψ‖, ‖ψ - Rψ‖)/‖ψ‖`
    pub c10_margin: f64,
    pub ranks: [usize; 3],
    pub freedom_dim: usize,
}

impl TripleSummary {
    pub fn passes(&self, tol: &ToleranceConfig) -> bool {
        self.incompatibility_norms
            .iter()
            .all(|&x| x > tol.audit_warn_tol)
            && self
                .detection_residuals
                .iter()
                .all(|&x| x <= tol.abs_tol)
            && self.c10_margin > tol.audit_warn_tol
    }
}

/// Options for [`enumerate_solutions`].
#[derive(Debug, Clone)]
pub struct EnumerationOptions {
    pub ranks: [Option<usize>; 3],
    /// prune empty/full subsets, subsets that trivialize the detected
    /// component (C.10 precheck), and non-canonical triples whose first
    /// subset omits the top occupied spin slot (complement duality)
    pub prune: bool,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        Self {
            ranks: [None; 3],
            prune: true,
        }
    }
}

/// Exhaustively test all spin-subset triples against conditions C.1–C.10,
/// returning every passing triple in ascending bitmask order.
///
/// Detector-detector commutators (C.7–C.9) vanish exactly for subset
/// projectors, so only incompatibility (C.1–C.3), the detection identities
/// (C.4–C.6) and the nontriviality condition (C.10) are evaluated.
pub fn enumerate_solutions(
    psi: &StateVector,
    spaces: CompositeSpace,
    opts: &EnumerationOptions,
    tol: &ToleranceConfig,
) -> Result<Vec<TripleSummary>> {
    let spin_dim = spaces.spin_dim;
    assert!(spin_dim <= 16, "enumeration is exponential in the spin dimension");
    let (comps, present, psi_norm) = spatial_components(psi, spaces, tol)?;

    let full_mask: u32 = (1u32 << spin_dim) - 1;
    let top_slot = (0..spin_dim).find(|&s| present[s]);

    // per-slot derivation over all candidate masks
    struct Derived {
        solution: SolverSolution,
        c10: f64,
    }
    let mut per_slot: Vec<Vec<Option<Derived>>> = Vec::with_capacity(3);
    for slot in 0..3 {
        let mut table: Vec<Option<Derived>> = Vec::with_capacity(full_mask as usize + 1);
        for mask in 0..=full_mask {
            let subset = SpinSubset::from_mask(mask, spin_dim);
            if opts.prune {
                if subset.is_empty() || subset.is_full() {
                    table.push(None);
                    continue;
                }
                if slot == 0 {
                    if let Some(t) = top_slot {
                        if !subset.contains(t) {
                            table.push(None);
                            continue;
                        }
                    }
                }
            }
            // C.10 precheck: the detected component must be neither 0 nor ψ
            let mut sel2 = 0.0;
            for s in 0..spin_dim {
                if subset.contains(s) {
                    sel2 += comps[s].norm_squared();
                }
            }
            let sel = sel2.sqrt() / psi_norm;
            let rest = (psi_norm * psi_norm - sel2).max(0.0).sqrt() / psi_norm;
            if opts.prune && (sel <= tol.audit_warn_tol || rest <= tol.audit_warn_tol) {
                table.push(None);
                continue;
            }
            let constraint = DetectionConstraint {
                psi: psi.clone(),
                subset,
                target_rank: opts.ranks[slot],
                completion: CompletionBasis::for_slot(slot, spaces.spatial_dim),
            };
            match derive_property(&constraint, spaces, tol) {
                Ok(solution) => {
                    let c10 = c10_margin(&solution.projector, &comps, psi_norm, spin_dim);
                    table.push(Some(Derived { solution, c10 }));
                }
                Err(Error::Infeasible(_)) => table.push(None),
                Err(e) => return Err(e),
            }
        }
        per_slot.push(table);
    }

    // pairwise commutator-norm tables between surviving masks
    let survivors: Vec<Vec<u32>> = per_slot
        .iter()
        .map(|t| {
            (0..=full_mask)
                .filter(|&m| t[m as usize].is_some())
                .collect()
        })
        .collect();
    let pair_table = |a: usize, b: usize| -> Vec<Vec<f64>> {
        survivors[a]
            .iter()
            .map(|&ma| {
                let ra = &per_slot[a][ma as usize].as_ref().unwrap().solution.projector;
                survivors[b]
                    .iter()
                    .map(|&mb| {
                        let rb =
                            &per_slot[b][mb as usize].as_ref().unwrap().solution.projector;
                        ra.commutator(rb).expect("same space").frobenius_norm()
                    })
                    .collect()
            })
            .collect()
    };
    let t01 = pair_table(0, 1);
    let t02 = pair_table(0, 2);
    let t21 = pair_table(2, 1);

    let mut hits = Vec::new();
    for (ia, &ma) in survivors[0].iter().enumerate() {
        let da = per_slot[0][ma as usize].as_ref().unwrap();
        if da.solution.certificate.detection_residual > tol.abs_tol {
            continue;
        }
        for (ib, &mb) in survivors[1].iter().enumerate() {
            let db = per_slot[1][mb as usize].as_ref().unwrap();
            if db.solution.certificate.detection_residual > tol.abs_tol
                || t01[ia][ib] <= tol.audit_warn_tol
            {
                continue;
            }
            for (ic, &mc) in survivors[2].iter().enumerate() {
                let dc = per_slot[2][mc as usize].as_ref().unwrap();
                if dc.solution.certificate.detection_residual > tol.abs_tol
                    || t02[ia][ic] <= tol.audit_warn_tol
                    || t21[ic][ib] <= tol.audit_warn_tol
                {
                    continue;
                }
                let c10 = da.c10.min(db.c10).min(dc.c10);
                if c10 <= tol.audit_warn_tol {
                    continue;
                }
                hits.push(TripleSummary {
                    subsets: [
                        SpinSubset::from_mask(ma, spin_dim),
                        SpinSubset::from_mask(mb, spin_dim),
                        SpinSubset::from_mask(mc, spin_dim),
                    ],
                    incompatibility_norms: [t01[ia][ib], t02[ia][ic], t21[ic][ib]],
                    detection_residuals: [
                        da.solution.certificate.detection_residual,
                        db.solution.certificate.detection_residual,
                        dc.solution.certificate.detection_residual,
                    ],
                    c10_margin: c10,
                    ranks: [da.solution.rank, db.solution.rank, dc.solution.rank],
                    freedom_dim: da.solution.freedom_dim,
                });
            }
        }
    }
    hits.sort_by_key(|h| (h.subsets[0].mask(), h.subsets[1].mask(), h.subsets[2].mask()));
    Ok(hits)
}

fn c10_margin(projector: &Operator, comps: &[StateVector], psi_norm: f64, spin_dim: usize) -> f64 {
    // min(‖Rψ‖, ‖ψ - Rψ‖)/‖ψ‖ computed componentwise
    let mut rp2 = 0.0;
    let mut rest2 = 0.0;
    for slot in 0..spin_dim {
        let rphi = projector.apply(&comps[slot]).expect("same space");
        rp2 += rphi.norm_squared();
        rest2 += comps[slot].sub(&rphi).norm_squared();
    }
    (rp2.sqrt() / psi_norm).min(rest2.sqrt() / psi_norm)
}

/// Result of repairing the bundled scenario.
#[derive(Debug)]
pub struct RepairOutcome {
    pub scenario: Scenario,
    /// derived replacement for the second property
    pub second: SolverSolution,
    /// derived replacement for the third property
    pub third: SolverSolution,
    /// verification of the printed third-property projector as a detector
    /// target on the repaired state (it fails; that is why it is replaced)
    pub printed_third_residual: f64,
    /// Frobenius distance between the printed and derived third property
    pub third_replacement_distance: f64,
    /// Frobenius distance each repaired channel moved under Löwdin
    pub channel_moves: Vec<(usize, f64)>,
    /// the repaired preparation pipeline
    pub pipeline: scenario::PipelineRun,
}

/// Build the repaired scenario variant.
///
/// The which-slit projector and detector subsets are kept; the prepared
/// state is rebuilt through the pipeline with Löwdin-orthonormalized
/// channels; the second property is solver-derived (the printed vectors are
/// defective beyond repair-in-place); the printed third property is kept
/// only if it verifies as a detector target on the repaired state — it does
/// not, so it too is solver-derived and the measured residual recorded.
pub fn repair_scenario(printed: &PrintedData, tol: &ToleranceConfig) -> Result<RepairOutcome> {
    let spaces = printed.spaces;
    let spin = printed.spin;
    let subsets = scenario::detector_subsets(&spin);

    let lit_channels = scenario::build_channels(printed, Variant::Literal, tol)?;
    let rep_channels = scenario::build_channels(printed, Variant::Repaired, tol)?;
    let channel_moves: Vec<(usize, f64)> = (0..8)
        .filter(|&s| !rep_channels.blocked[s])
        .map(|s| {
            (
                s,
                rep_channels.vectors[s]
                    .sub(&lit_channels.vectors[s])
                    .norm(),
            )
        })
        .collect();

    let pipeline = scenario::run_pipeline(printed, &rep_channels, None, tol)?;
    let psi = pipeline.stages[2].vector.clone();

    let (slit, _) = scenario::which_slit_projector(spaces);

    // verify the printed third property against its detector identity on
    // the repaired state before deciding to replace it
    let (_, printed_third) = scenario::build_third_property(printed, tol)?;
    let printed_third_residual = {
        let det = crate::linalg::lift_spin(&spin.subset_projector(subsets[2]), spaces)?;
        let lifted = crate::linalg::lift_spatial(&printed_third, spaces)?;
        let check = audit::check_detector(&det, &lifted, &psi, tol)?;
        check.residual
    };

    let second = derive_property(
        &DetectionConstraint {
            psi: psi.clone(),
            subset: subsets[1],
            target_rank: Some(3),
            completion: CompletionBasis::for_slot(1, spaces.spatial_dim),
        },
        spaces,
        tol,
    )?;
    let third = derive_property(
        &DetectionConstraint {
            psi: psi.clone(),
            subset: subsets[2],
            target_rank: Some(5),
            completion: CompletionBasis::for_slot(2, spaces.spatial_dim),
        },
        spaces,
        tol,
    )?;
    let third_replacement_distance = third.projector.sub(&printed_third).frobenius_norm();

    let scenario = Scenario {
        variant: Variant::Repaired,
        spin,
        spaces,
        slit_property: slit,
        second_property: second.projector.clone(),
        third_property: third.projector.clone(),
        subsets,
        psi,
    };
    Ok(RepairOutcome {
        scenario,
        second,
        third,
        printed_third_residual,
        third_replacement_distance,
        channel_moves,
        pipeline,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::{build_psi_literal, PrintedData, SLOT_M5_2, SLOT_M7_2};

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    #[test]
    fn which_slit_subset_recovers_slit_projector() {
        let p = PrintedData::build();
        let psi = build_psi_literal(&p);
        let subsets = scenario::detector_subsets(&p.spin);
        let sol = derive_property(
            &DetectionConstraint {
                psi,
                subset: subsets[0],
                target_rank: Some(5),
                completion: CompletionBasis::Index,
            },
            p.spaces,
            &tol(),
        )
        .unwrap();
        let (slit, _) = scenario::which_slit_projector(p.spaces);
        assert!(sol.projector.max_abs_diff(&slit) < 1e-12);
        assert_eq!(sol.rank, 5);
        assert_eq!(sol.fixed_dim, 3);
        assert_eq!(sol.freedom_dim, 4);
        assert!(sol.certificate.detection_residual < 1e-12);
    }

    #[test]
    fn second_subset_feasible_on_literal_state() {
        let p = PrintedData::build();
        let psi = build_psi_literal(&p);
        let subsets = scenario::detector_subsets(&p.spin);
        let sol = derive_property(
            &DetectionConstraint {
                psi,
                subset: subsets[1],
                target_rank: Some(3),
                completion: CompletionBasis::for_slot(1, 10),
            },
            p.spaces,
            &tol(),
        )
        .unwrap();
        assert!(sol.certificate.detection_residual < 1e-12);
        assert!(sol.projector.is_projector(1e-12));
        assert_eq!(sol.rank, 3);
    }

    #[test]
    fn third_subset_infeasible_on_literal_state_names_pair() {
        // the printed m = -5/2 and m = -7/2 channels overlap, so no exact
        // projector can fix one and annihilate the other
        let p = PrintedData::build();
        let psi = build_psi_literal(&p);
        let subsets = scenario::detector_subsets(&p.spin);
        let err = derive_property(
            &DetectionConstraint {
                psi,
                subset: subsets[2],
                target_rank: Some(5),
                completion: CompletionBasis::for_slot(2, 10),
            },
            p.spaces,
            &tol(),
        );
        match err {
            Err(Error::Infeasible(inf)) => {
                assert_eq!(inf.fixed_slot, SLOT_M5_2);
                assert_eq!(inf.annihilated_slot, SLOT_M7_2);
                // oracle: 0.217688/1.120189 = 0.194331...
                assert!((inf.overlap - 0.19433117717386697).abs() < 1e-9);
            }
            other => panic!("expected infeasibility, got {other:?}"),
        }
    }

    #[test]
    fn product_state_is_infeasible_for_bundled_subsets() {
        let p = PrintedData::build();
        let seed = StateVector::basis_vector(Space::Spatial(10), 0);
        let psi = seed.tensor_vec(&p.spin.sx_top_eigenvector()).unwrap();
        let subsets = scenario::detector_subsets(&p.spin);
        let out = solve_triple(&psi, p.spaces, &p.spin, subsets, bundled_ranks(), &tol()).unwrap();
        assert!(out.solutions().is_none());
        for r in &out.per_subset {
            let inf = r.as_ref().err().expect("every subset splits the single spatial direction");
            assert!((inf.overlap - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn product_state_single_channel_detection() {
        // ψ ⊗ |m=+j⟩ with the subset {+j}: the derived property is the
        // rank-1 projector onto ψ (plus requested completion)
        let spin = SpinSystem::with_two_j(3);
        let spaces = CompositeSpace::new(4, 4);
        let seed = StateVector::from_real(Space::Spatial(4), &[0.6, 0.0, 0.8, 0.0]);
        let psi = seed
            .tensor_vec(&StateVector::basis_vector(Space::Spin(4), 0))
            .unwrap();
        let sol = derive_property(
            &DetectionConstraint {
                psi,
                subset: SpinSubset::from_slots(&[0], 4),
                target_rank: None,
                completion: CompletionBasis::Index,
            },
            spaces,
            &tol(),
        )
        .unwrap();
        assert_eq!(sol.rank, 1);
        assert!(sol.certificate.detection_residual < 1e-12);
        let expect = Operator::from_dyads(Space::Spatial(4), &[seed]).unwrap();
        assert!(sol.projector.max_abs_diff(&expect) < 1e-12);
        let _ = spin;
    }

    #[test]
    fn repair_produces_consistent_scenario() {
        let p = PrintedData::build();
        let t = tol();
        let rep = repair_scenario(&p, &t).unwrap();
        // the repaired state has the exact norm bookkeeping 100/128
        assert!((rep.scenario.psi.norm_squared() - 0.78125).abs() < 1e-12);
        // derived properties carry clean certificates
        for sol in [&rep.second, &rep.third] {
            assert!(sol.certificate.detection_residual <= t.abs_tol);
            assert!(sol.certificate.hermiticity_defect <= 1e-12);
            assert!(sol.certificate.idempotency_defect <= 1e-12);
        }
        // the printed third property fails its detector identity, which is
        // why it was replaced (the distance is macroscopic)
        assert!(rep.printed_third_residual > 1e-3);
        assert!(rep.third_replacement_distance > 0.1);
        // ranks mirror the printed construction
        assert_eq!(rep.second.rank, 3);
        assert_eq!(rep.third.rank, 5);
    }

    #[test]
    fn scale_and_phase_invariance_of_derivation() {
        let p = PrintedData::build();
        let t = tol();
        let rep = repair_scenario(&p, &t).unwrap();
        let subsets = scenario::detector_subsets(&p.spin);
        let base = derive_property(
            &DetectionConstraint {
                psi: rep.scenario.psi.clone(),
                subset: subsets[1],
                target_rank: Some(3),
                completion: CompletionBasis::for_slot(1, 10),
            },
            p.spaces,
            &t,
        )
        .unwrap();
        for c in [C64::new(2.0, 0.0), C64::new(-1.0, 0.0), C64::new(0.0, 1.0)] {
            let scaled = derive_property(
                &DetectionConstraint {
                    psi: rep.scenario.psi.scale(c),
                    subset: subsets[1],
                    target_rank: Some(3),
                    completion: CompletionBasis::for_slot(1, 10),
                },
                p.spaces,
                &t,
            )
            .unwrap();
            assert!(scaled.projector.max_abs_diff(&base.projector) < 1e-10);
            assert!((scaled.certificate.detection_residual - base.certificate.detection_residual).abs() < 1e-10);
        }
    }
}
