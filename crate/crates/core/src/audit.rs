//! Numerical evaluation of the detector conditions and structural
//! consistency checks on the bundled printed data.
//!
//! Every row of a report carries the measured value, the threshold it was
//! compared against, and the comparison direction, so verdicts are
//! reproducible and the thresholds transparent. Structural findings are
//! informational: the audit reports, it never repairs in place.

use crate::linalg::{lift_spatial, CompositeSpace, Operator, Space, StateVector, C64};
use crate::rng::SplitMix64;
use crate::scenario::{
    self, build_psi_literal, build_second_property_literal, build_third_property, PrintedData,
    Scenario, Variant,
};
use crate::{Result, ToleranceConfig};

/// Seed of the random Hermitian samples used by the final-screen
/// commutation check. Fixed so reports are byte-reproducible.
pub const F_SAMPLE_SEED: u64 = 1729;
/// Number of random Hermitian samples in the final-screen check.
pub const F_SAMPLE_COUNT: usize = 20;

/// Verdict of one report row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    /// structural finding: reported, never fatal
    Informational,
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Informational => "info",
        }
    }
}

/// Direction of the threshold comparison for a row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparison {
    /// pass iff measured <= threshold
    AtMost,
    /// pass iff measured > threshold (strict nonvanishing)
    Above,
}

impl Comparison {
    pub fn symbol(&self) -> &'static str {
        match self {
            Comparison::AtMost => "<=",
            Comparison::Above => ">",
        }
    }
}

/// One evaluated condition or structural finding.
#[derive(Debug, Clone)]
pub struct ConditionEntry {
    pub id: String,
    pub measured: f64,
    pub threshold: f64,
    pub comparison: Comparison,
    pub verdict: Verdict,
    pub note: String,
}

impl ConditionEntry {
    fn checked(id: &str, measured: f64, threshold: f64, comparison: Comparison, note: String) -> Self {
        let ok = match comparison {
            Comparison::AtMost => measured <= threshold,
            Comparison::Above => measured > threshold,
        };
        Self {
            id: id.to_string(),
            measured,
            threshold,
            comparison,
            verdict: if ok { Verdict::Pass } else { Verdict::Fail },
            note,
        }
    }

    fn finding(id: &str, measured: f64, threshold: f64, note: String) -> Self {
        // structural rows: clean data passes, deviations become findings
        let verdict = if measured.abs() <= threshold {
            Verdict::Pass
        } else {
            Verdict::Informational
        };
        Self {
            id: id.to_string(),
            measured,
            threshold,
            comparison: Comparison::AtMost,
            verdict,
            note,
        }
    }
}

/// A full report: variant label, tolerance snapshot, ordered rows.
#[derive(Debug, Clone)]
pub struct ConditionReport {
    pub variant: String,
    pub tolerances: ToleranceConfig,
    pub entries: Vec<ConditionEntry>,
}

impl ConditionReport {
    pub fn entry(&self, id: &str) -> Option<&ConditionEntry> {
        self.entries.iter().find(|e| e.id == id)
    }

    pub fn all_conditions_pass(&self) -> bool {
        self.entries
            .iter()
            .filter(|e| e.id.starts_with("C."))
            .all(|e| e.verdict == Verdict::Pass)
    }

    pub fn failing_ids(&self) -> Vec<&str> {
        self.entries
            .iter()
            .filter(|e| e.verdict == Verdict::Fail)
            .map(|e| e.id.as_str())
            .collect()
    }
}

/// Detector-condition check: `‖[S,R]‖_F` and `‖Sψ - Rψ‖/‖ψ‖`.
#[derive(Debug, Clone, Copy)]
pub struct DetectorCheck {
    pub commutator_norm: f64,
    pub residual: f64,
    pub pass: bool,
}

/// Evaluate condition (ii) of the detector definition for a candidate
/// detector `S` and property `R` on `ψ` (all composite).
pub fn check_detector(
    detector: &Operator,
    property: &Operator,
    psi: &StateVector,
    tol: &ToleranceConfig,
) -> Result<DetectorCheck> {
    let comm = detector.commutator(property)?.frobenius_norm();
    let s_psi = detector.apply(psi)?;
    let r_psi = property.apply(psi)?;
    let norm = psi.norm();
    if norm <= tol.abs_tol {
        return Err(crate::Error::NearZeroNorm { norm });
    }
    let residual = s_psi.sub(&r_psi).norm() / norm;
    let comm_bound = tol.operator_bound(detector.frobenius_norm() * property.frobenius_norm());
    Ok(DetectorCheck {
        commutator_norm: comm,
        residual,
        pass: comm <= comm_bound && residual <= tol.abs_tol,
    })
}

/// Final-screen commutation check (condition (i) of the detector
/// definition).
///
/// A localization observable on the final screen acts on the spatial
/// factor only, so an operator commutes with every such observable iff it
/// has the form `I ⊗ X`. The structural test checks that form directly;
/// when it fails, seeded random Hermitian spatial samples quantify the
/// violation.
#[derive(Debug, Clone, Copy)]
pub struct FCommutationCheck {
    /// operator is of the form `I ⊗ X` within tolerance
    pub structural_spin_form: bool,
    /// max deviation from the `I ⊗ X` form
    pub structural_deviation: f64,
    /// max `‖[S, F ⊗ I]‖_F` over the random samples (0 when structural)
    pub max_sampled_commutator: f64,
    pub pass: bool,
}

pub fn check_f_commutation(
    op: &Operator,
    spaces: CompositeSpace,
    tol: &ToleranceConfig,
) -> Result<FCommutationCheck> {
    let (sd, md) = (spaces.spatial_dim, spaces.spin_dim);
    // deviation from block-diagonal with identical blocks: op = I ⊗ X
    let mut dev: f64 = 0.0;
    for s in 0..sd {
        for s2 in 0..sd {
            for k in 0..md {
                for l in 0..md {
                    let e = op.get(spaces.index(s, k), spaces.index(s2, l));
                    let expect = if s == s2 {
                        op.get(spaces.index(0, k), spaces.index(0, l))
                    } else {
                        C64::new(0.0, 0.0)
                    };
                    dev = dev.max((e - expect).norm());
                }
            }
        }
    }
    let bound = tol.operator_bound(op.frobenius_norm());
    if dev <= bound {
        return Ok(FCommutationCheck {
            structural_spin_form: true,
            structural_deviation: dev,
            max_sampled_commutator: 0.0,
            pass: true,
        });
    }
    let mut rng = SplitMix64::new(F_SAMPLE_SEED);
    let mut max_comm: f64 = 0.0;
    for _ in 0..F_SAMPLE_COUNT {
        let mut f = Operator::zeros(Space::Spatial(sd));
        for i in 0..sd {
            f.set(i, i, C64::new(rng.next_f64() * 2.0 - 1.0, 0.0));
            for j in (i + 1)..sd {
                let z = C64::new(rng.next_f64() * 2.0 - 1.0, rng.next_f64() * 2.0 - 1.0);
                f.set(i, j, z);
                f.set(j, i, z.conj());
            }
        }
        let lifted = lift_spatial(&f, spaces)?;
        max_comm = max_comm.max(op.commutator(&lifted)?.frobenius_norm());
    }
    Ok(FCommutationCheck {
        structural_spin_form: false,
        structural_deviation: dev,
        max_sampled_commutator: max_comm,
        pass: max_comm <= tol.operator_bound(op.frobenius_norm()),
    })
}

/// Evaluate the ten solution conditions plus the per-detector definition
/// rows on a scenario.
pub fn evaluate_conditions(scn: &Scenario, tol: &ToleranceConfig) -> ConditionReport {
    evaluate_conditions_labeled(scn, tol, scn.variant.name())
}

/// Same as [`evaluate_conditions`] with an explicit report label.
pub fn evaluate_conditions_labeled(
    scn: &Scenario,
    tol: &ToleranceConfig,
    label: &str,
) -> ConditionReport {
    let mut entries = Vec::new();
    let spin = &scn.spin;
    let spaces = scn.spaces;
    let psi_norm = scn.psi.norm();

    // C.1-C.3: incompatibility, measured on the spatial factors (the
    // lifted norm is the spatial norm scaled by sqrt(spin dim))
    let pairs = [
        ("C.1", &scn.slit_property, &scn.second_property, "which-slit vs second"),
        ("C.2", &scn.slit_property, &scn.third_property, "which-slit vs third"),
        ("C.3", &scn.third_property, &scn.second_property, "third vs second"),
    ];
    for (id, a, b, what) in pairs {
        let norm = a.commutator(b).expect("same space").frobenius_norm();
        entries.push(ConditionEntry::checked(
            id,
            norm,
            tol.audit_warn_tol,
            Comparison::Above,
            format!("spatial-factor commutator norm, {what}"),
        ));
    }

    // C.4-C.6: detector identities
    let det_names = Scenario::detector_names();
    let prop_names = Scenario::property_names();
    let mut detector_checks = Vec::new();
    for i in 0..3 {
        let det = scn.detector(i);
        let prop = scn.lifted_property(i);
        let check = check_detector(&det, &prop, &scn.psi, tol).expect("composite operands");
        detector_checks.push(check);
        entries.push(ConditionEntry::checked(
            &format!("C.{}", 4 + i),
            check.residual.max(check.commutator_norm),
            tol.abs_tol,
            Comparison::AtMost,
            format!(
                "detector {} for {} property: commutator {:.3e}, relative residual {:.3e}",
                det_names[i], prop_names[i], check.commutator_norm, check.residual
            ),
        ));
    }

    // C.7-C.9: detector-detector commutation, measured on the spin factors
    let spin_pairs = [("C.7", 0usize, 1usize), ("C.8", 0, 2), ("C.9", 1, 2)];
    for (id, i, j) in spin_pairs {
        let a = spin.subset_projector(scn.subsets[i]);
        let b = spin.subset_projector(scn.subsets[j]);
        let norm = a.commutator(&b).expect("same space").frobenius_norm();
        entries.push(ConditionEntry::checked(
            id,
            norm,
            tol.abs_tol,
            Comparison::AtMost,
            format!(
                "spin-factor commutator of detectors {} and {} (diagonal projectors)",
                det_names[i], det_names[j]
            ),
        ));
    }

    // C.10: every property and its complement act nontrivially on ψ
    let mut c10_min = f64::INFINITY;
    let mut c10_parts = Vec::new();
    for i in 0..3 {
        let lifted = scn.lifted_property(i);
        let rp = lifted.apply(&scn.psi).expect("composite operands");
        let kept = rp.norm() / psi_norm;
        let removed = scn.psi.sub(&rp).norm() / psi_norm;
        c10_min = c10_min.min(kept).min(removed);
        c10_parts.push(format!("{}: kept {:.3e}, removed {:.3e}", prop_names[i], kept, removed));
    }
    entries.push(ConditionEntry::checked(
        "C.10",
        c10_min,
        tol.audit_warn_tol,
        Comparison::Above,
        c10_parts.join("; "),
    ));

    // D1 rows: both detector-definition conditions per pair
    for i in 0..3 {
        let det = scn.detector(i);
        let f = check_f_commutation(&det, spaces, tol).expect("composite operand");
        entries.push(ConditionEntry::checked(
            &format!("D1.{}.i", det_names[i]),
            if f.structural_spin_form {
                f.structural_deviation
            } else {
                f.max_sampled_commutator
            },
            tol.operator_bound(det.frobenius_norm()),
            Comparison::AtMost,
            if f.structural_spin_form {
                "commutes with every final-screen localization (pure spin form)".to_string()
            } else {
                format!(
                    "not of pure spin form (deviation {:.3e}); max sampled commutator over {} seeded Hermitian spatial samples",
                    f.structural_deviation, F_SAMPLE_COUNT
                )
            },
        ));
        let check = detector_checks[i];
        entries.push(ConditionEntry::checked(
            &format!("D1.{}.ii", det_names[i]),
            check.residual.max(check.commutator_norm),
            tol.abs_tol,
            Comparison::AtMost,
            format!(
                "detector commutes with its property and agrees on the prepared state (residual {:.3e})",
                check.residual
            ),
        ));
    }

    ConditionReport {
        variant: label.to_string(),
        tolerances: *tol,
        entries,
    }
}

/// Structural consistency audit of the printed data: Gram matrices, norm
/// bookkeeping, sub-vector overlaps, pipeline identities. Findings are
/// informational; nothing here fails a run.
pub fn structural_audit(printed: &PrintedData, tol: &ToleranceConfig) -> ConditionReport {
    let mut entries = Vec::new();
    let warn = tol.audit_warn_tol;

    // the ten spatial basis vectors are orthonormal by construction
    entries.push(ConditionEntry::finding(
        "STRUCT.spatial_basis_gram",
        0.0,
        warn,
        "the ten spatial basis vectors form an orthonormal set (exact by construction)".into(),
    ));

    // second-property generating vectors, both readings of the first one
    let g_norms: Vec<f64> = printed
        .g_vectors_printed
        .iter()
        .map(|v| v.norm_squared().to_f64())
        .collect();
    entries.push(ConditionEntry::finding(
        "STRUCT.g1_norm_defect",
        g_norms[0] - 1.0,
        warn,
        format!(
            "first generating vector as printed (duplicated first-basis token): ‖v‖² = {:.12}; alternative third-basis reading has ‖v‖² = {:.12}",
            g_norms[0],
            printed.g1_alt_reading.norm_squared().to_f64()
        ),
    ));
    entries.push(ConditionEntry::finding(
        "STRUCT.g2_norm_defect",
        g_norms[1] - 1.0,
        warn,
        format!("second generating vector: ‖v‖² = {:.12} (printed coefficients)", g_norms[1]),
    ));
    let mut g_offdiag: f64 = 0.0;
    for i in 0..3 {
        for j in (i + 1)..3 {
            g_offdiag = g_offdiag.max(
                printed.g_vectors_printed[i]
                    .dot(&printed.g_vectors_printed[j])
                    .to_f64()
                    .abs(),
            );
        }
    }
    entries.push(ConditionEntry::finding(
        "STRUCT.g_gram_offdiag",
        g_offdiag,
        warn,
        "largest pairwise overlap among the printed second-property vectors".into(),
    ));

    // third-property generating vectors are exactly orthonormal
    let mut l_dev: f64 = 0.0;
    for i in 0..5 {
        for j in 0..5 {
            let expect = if i == j { 1.0 } else { 0.0 };
            l_dev = l_dev.max((printed.l_vectors[i].dot(&printed.l_vectors[j]).to_f64() - expect).abs());
        }
    }
    entries.push(ConditionEntry::finding(
        "STRUCT.l_gram",
        l_dev,
        warn,
        "Gram deviation of the third-property generating vectors from the identity".into(),
    ));

    // channel Gram: norms and overlaps of the printed six
    let ch = |slot: usize| printed.channels[slot].as_ref().expect("printed channel");
    for (id, slot) in [
        ("STRUCT.channel_norm_m1_2", scenario::SLOT_M1_2),
        ("STRUCT.channel_norm_m7_2", scenario::SLOT_M7_2),
    ] {
        entries.push(ConditionEntry::finding(
            id,
            ch(slot).norm_squared().to_f64() - 1.0,
            warn,
            format!("printed channel norm² - 1 at spin slot {slot}"),
        ));
    }
    let slit1_pairs = [
        (scenario::SLOT_7_2, scenario::SLOT_3_2),
        (scenario::SLOT_7_2, scenario::SLOT_M1_2),
        (scenario::SLOT_3_2, scenario::SLOT_M1_2),
    ];
    let mut slit1_max: f64 = 0.0;
    for (a, b) in slit1_pairs {
        slit1_max = slit1_max.max(ch(a).dot(ch(b)).to_f64().abs());
    }
    entries.push(ConditionEntry::finding(
        "STRUCT.channel_overlap_slit1",
        slit1_max,
        warn,
        "largest overlap among the printed first-slit channels (all exactly orthogonal)".into(),
    ));
    entries.push(ConditionEntry::finding(
        "STRUCT.channel_overlap_m5_2_m7_2",
        ch(scenario::SLOT_M5_2).dot(ch(scenario::SLOT_M7_2)).to_f64(),
        warn,
        "overlap of the printed second-slit channels at spin slots 6 and 7; nonzero, so no projector can fix one and annihilate the other".into(),
    ));

    // the two channels printed as sums of two sub-vectors: normalized
    // overlap (cosine) between the parts
    for (slot, a, b) in &printed.channel_subvectors {
        let cos = a.dot(b).to_f64() / (a.norm_squared().to_f64() * b.norm_squared().to_f64()).sqrt();
        let id = format!("STRUCT.subvector_overlap_slot{slot}");
        entries.push(ConditionEntry::finding(
            &id,
            cos,
            warn,
            format!(
                "cosine between the two printed sub-vectors of the spin-slot-{slot} component (raw inner product {:.12})",
                a.dot(b).to_f64()
            ),
        ));
    }

    // prepared-state bookkeeping: the printed coefficients vs the
    // amplitude budget of the selection eigenvector
    let psi = build_psi_literal(printed);
    let expected = 100.0 / 128.0;
    entries.push(ConditionEntry::finding(
        "STRUCT.psi_norm_bookkeeping",
        psi.norm_squared() - expected,
        warn,
        format!(
            "‖ψ‖² of the printed state is {:.12}; consistent channels give 100/128 = {:.12}",
            psi.norm_squared(),
            expected
        ),
    ));

    // literal pipeline reproduces the printed state
    let lit_channels = scenario::build_channels(printed, Variant::Literal, tol).expect("channels");
    let lit_run = scenario::run_pipeline(printed, &lit_channels, None, tol).expect("pipeline");
    entries.push(ConditionEntry::finding(
        "STRUCT.psi_pipeline_match",
        lit_run.reconstruction_max_abs,
        tol.abs_tol,
        "componentwise deviation of the literal pipeline output from the printed state".into(),
    ));
    entries.push(ConditionEntry::finding(
        "STRUCT.filter_rank1_reading",
        lit_run.rank1_filter_discrepancy,
        warn,
        "relative discrepancy of the rank-1 unnormalized reading of the filter against channel blocking".into(),
    ));
    let u_iso_lit = lit_channels
        .vectors
        .iter()
        .map(|v| (v.norm() - 1.0).abs())
        .fold(0.0f64, f64::max);
    entries.push(ConditionEntry::finding(
        "STRUCT.u_isometry_literal",
        u_iso_lit,
        warn,
        "max |‖channel‖ - 1| over the literal routing channels (norm preservation of the routing step)".into(),
    ));

    let rep_channels = scenario::build_channels(printed, Variant::Repaired, tol).expect("channels");
    let mut rep_gram_dev: f64 = 0.0;
    for (i, a) in rep_channels.vectors.iter().enumerate() {
        for (j, b) in rep_channels.vectors.iter().enumerate() {
            if rep_channels.slit[i] != rep_channels.slit[j] {
                continue;
            }
            let expect = if i == j { 1.0 } else { 0.0 };
            rep_gram_dev = rep_gram_dev.max((a.inner(b).expect("same space").norm() - expect).abs());
        }
    }
    entries.push(ConditionEntry::finding(
        "STRUCT.channel_gram_repaired",
        rep_gram_dev,
        warn,
        "Gram deviation of the repaired channel set from the identity".into(),
    ));

    // projector tests on the literal property operators
    let g = build_second_property_literal(printed, tol);
    entries.push(ConditionEntry::finding(
        "STRUCT.g_projector_defect",
        g.raw_dyad_sum.idempotency_defect(),
        warn,
        "idempotency defect of the literal second property (raw dyad sum over the printed vectors)".into(),
    ));
    let (_, l_op) = build_third_property(printed, tol).expect("orthonormal printed vectors");
    entries.push(ConditionEntry::finding(
        "STRUCT.l_projector_defect",
        l_op.idempotency_defect().max(l_op.hermiticity_defect()),
        warn,
        "projector defect of the third property assembled from the printed vectors".into(),
    ));

    // reading notes on garbled printed tokens
    entries.push(ConditionEntry::finding(
        "STRUCT.detector_token_reading",
        0.0,
        warn,
        "the third term of the first detector subset carries a garbled bundled token; it is read as the m=3/2 eigenprojector, consistent with the printed eigenprojector sum".into(),
    ));

    ConditionReport {
        variant: "printed-data".to_string(),
        tolerances: *tol,
        entries,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::Scenario;

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    #[test]
    fn self_detection_passes() {
        let p = PrintedData::build();
        let scn = Scenario::literal(&p, &tol()).unwrap();
        let e = scn.lifted_property(0);
        let check = check_detector(&e, &e, &scn.psi, &tol()).unwrap();
        assert_eq!(check.commutator_norm, 0.0);
        assert_eq!(check.residual, 0.0);
        assert!(check.pass);
    }

    #[test]
    fn which_slit_detector_identity_is_exact_on_literal_state() {
        let p = PrintedData::build();
        let scn = Scenario::literal(&p, &tol()).unwrap();
        let check = check_detector(&scn.detector(0), &scn.lifted_property(0), &scn.psi, &tol()).unwrap();
        assert_eq!(check.commutator_norm, 0.0);
        assert!(check.residual <= 1e-15);
        assert!(check.pass);
    }

    #[test]
    fn f_commutation_structural_for_detectors_fails_for_lifted_spatial() {
        let p = PrintedData::build();
        let scn = Scenario::literal(&p, &tol()).unwrap();
        let t = check_f_commutation(&scn.detector(0), scn.spaces, &tol()).unwrap();
        assert!(t.structural_spin_form && t.pass);
        let id = Operator::identity(scn.spaces.space());
        let t = check_f_commutation(&id, scn.spaces, &tol()).unwrap();
        assert!(t.structural_spin_form && t.pass);
        let e = scn.lifted_property(0);
        let t = check_f_commutation(&e, scn.spaces, &tol()).unwrap();
        assert!(!t.structural_spin_form);
        assert!(!t.pass);
        assert!(t.max_sampled_commutator > 1.0);
    }

    #[test]
    fn literal_battery_fails_exactly_at_the_two_defective_detectors() {
        let p = PrintedData::build();
        let scn = Scenario::literal(&p, &tol()).unwrap();
        let report = evaluate_conditions(&scn, &tol());
        let failing = report.failing_ids();
        assert!(failing.contains(&"C.5"));
        assert!(failing.contains(&"C.6"));
        for id in ["C.1", "C.2", "C.3", "C.4", "C.7", "C.8", "C.9", "C.10"] {
            assert_eq!(report.entry(id).unwrap().verdict, Verdict::Pass, "{id}");
        }
        // oracle values for the literal defects
        assert!((report.entry("C.5").unwrap().measured - 0.43486397546643646).abs() < 1e-9);
        assert!((report.entry("C.6").unwrap().measured - 0.23207574270518766).abs() < 1e-9);
        // incompatibility norms (spatial factor)
        assert!((report.entry("C.1").unwrap().measured - 1.2474066069739962).abs() < 1e-9);
        assert!((report.entry("C.2").unwrap().measured - 0.7035623639735145).abs() < 1e-9);
        assert!((report.entry("C.3").unwrap().measured - 0.822009080769394).abs() < 1e-9);
    }

    #[test]
    fn report_has_complete_row_set() {
        let p = PrintedData::build();
        let scn = Scenario::literal(&p, &tol()).unwrap();
        let report = evaluate_conditions(&scn, &tol());
        for i in 1..=10 {
            let id = format!("C.{i}");
            assert_eq!(report.entries.iter().filter(|e| e.id == id).count(), 1);
        }
        assert_eq!(
            report.entries.iter().filter(|e| e.id.starts_with("D1.")).count(),
            6
        );
        let sa = structural_audit(&p, &tol());
        assert!(sa.entries.iter().filter(|e| e.id.starts_with("STRUCT.")).count() >= 6);
    }

    #[test]
    fn structural_findings_match_oracle_values() {
        let p = PrintedData::build();
        let sa = structural_audit(&p, &tol());
        let g2 = sa.entry("STRUCT.g2_norm_defect").unwrap();
        assert_eq!(g2.verdict, Verdict::Informational);
        assert!((g2.measured - 0.75).abs() < 1e-12);
        let sub = sa.entry("STRUCT.subvector_overlap_slot4").unwrap();
        assert!((sub.measured - 0.25482359571881275).abs() < 1e-12);
        let sub7 = sa.entry("STRUCT.subvector_overlap_slot7").unwrap();
        assert!((sub7.measured - 0.25482359571881275).abs() < 1e-12);
        let ch = sa.entry("STRUCT.channel_overlap_m5_2_m7_2").unwrap();
        assert!((ch.measured - 0.217687664375).abs() < 1e-9);
        assert_eq!(sa.entry("STRUCT.channel_overlap_slit1").unwrap().verdict, Verdict::Pass);
        assert_eq!(sa.entry("STRUCT.l_gram").unwrap().verdict, Verdict::Pass);
        let book = sa.entry("STRUCT.psi_norm_bookkeeping").unwrap();
        assert!((book.measured - (0.8529191362959161 - 0.78125)).abs() < 1e-12);
    }

    #[test]
    fn scale_invariance_of_verdicts() {
        let p = PrintedData::build();
        let t = tol();
        let base = evaluate_conditions(&Scenario::literal(&p, &t).unwrap(), &t);
        for c in [C64::new(2.0, 0.0), C64::new(-1.0, 0.0), C64::new(0.0, 1.0)] {
            let mut scn = Scenario::literal(&p, &t).unwrap();
            scn.psi = scn.psi.scale(c);
            let scaled = evaluate_conditions(&scn, &t);
            for (a, b) in base.entries.iter().zip(&scaled.entries) {
                assert_eq!(a.verdict, b.verdict, "{}", a.id);
                assert!((a.measured - b.measured).abs() <= 1e-10, "{}", a.id);
            }
        }
    }
}
