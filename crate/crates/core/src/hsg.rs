//! Hidden-subgroup sampling circuits and classical period inference.
//!
//! The circuit prepares a uniform superposition on the IN register,
//! entangles it with the OUT register through the table oracle, applies
//! the generalized Fourier transform of the hypothesized group (a tensor
//! product of per-factor transforms: `H (x) H` for `[2,2]`, the 4-point
//! transform for `[4]`), and samples IN.  Character orthogonality then
//! confines the IN outcomes to the annihilator of the hidden subgroup,
//! and [`infer_period`] inverts that relation.
//!
//! The OUT register is never measured mid-circuit; tracing it out at
//! sampling time yields the same IN marginal, which the tests pin down.

use std::collections::BTreeMap;

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::groups::{FunctionTable, GroupSpec};
use crate::qsim::{MeasurementRecord, RegisterLayout, Statevector};

/// IN/OUT samples drawn from one circuit configuration.
#[derive(Clone, Debug)]
pub struct HsgSampleSet {
    pub group: GroupSpec,
    pub records: Vec<MeasurementRecord>,
    pub shots: usize,
}

impl HsgSampleSet {
    /// Multiset of records, keyed by (IN, OUT) values.
    pub fn counts(&self) -> BTreeMap<(BitString, BitString), usize> {
        let mut map = BTreeMap::new();
        for r in &self.records {
            *map.entry((r.in_bits, r.out_bits)).or_insert(0) += 1;
        }
        map
    }

    /// Multiset of IN outcomes only.
    pub fn in_counts(&self) -> BTreeMap<BitString, usize> {
        let mut map = BTreeMap::new();
        for r in &self.records {
            *map.entry(r.in_bits).or_insert(0) += 1;
        }
        map
    }

    /// CSV export: `in_bits,out_bits,count`, sorted.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("in_bits,out_bits,count\n");
        for ((i, o), c) in self.counts() {
            out.push_str(&format!("{i},{o},{c}\n"));
        }
        out
    }
}

/// A (group, period) guess together with how much of the sample mass is
/// consistent with it.  `under_determined` marks sample sets that leave
/// more than one exact candidate open, in which case the smallest one is
/// reported.
#[derive(Clone, Debug)]
pub struct SymmetryHypothesis {
    pub group: GroupSpec,
    pub period: Option<BitString>,
    pub confidence: f64,
    pub under_determined: bool,
}

/// Builds the circuit state right before measurement.
pub fn circuit_state(
    f: &FunctionTable,
    g: &GroupSpec,
) -> Result<(Statevector, RegisterLayout)> {
    if f.n() != g.n_bits() {
        return Err(Error::WidthMismatch {
            expected: g.n_bits(),
            actual: f.n(),
        });
    }
    let n = f.n();
    let m = f.m();
    let layout = RegisterLayout::standard(n, m);
    let mut state = Statevector::zero((n + m) as usize);
    for q in 0..n as usize {
        state.hadamard(q)?;
    }
    state.oracle(&layout, f)?;
    // generalized Fourier transform: per-factor blocks on IN
    for &(off, w) in g.spans() {
        let qubits: Vec<usize> = (off..off + w).map(|q| q as usize).collect();
        state.qft(&qubits)?;
    }
    Ok((state, layout))
}

/// Runs the circuit and samples `shots` (IN, OUT) records.
pub fn run(
    f: &FunctionTable,
    g: &GroupSpec,
    shots: usize,
    seed: u64,
) -> Result<HsgSampleSet> {
    let (state, layout) = circuit_state(f, g)?;
    let records = state.sample(&layout, shots, seed)?;
    Ok(HsgSampleSet {
        group: g.clone(),
        records,
        shots,
    })
}

/// Infers a generalized period from weighted IN outcomes.
///
/// Exact stage: keep every non-identity `r` annihilated by all observed
/// outcomes.  A single survivor is the period.  Several survivors mean the
/// samples do not yet pin the subgroup down; the smallest survivor is
/// returned with the `under_determined` flag set.  No survivor at all
/// (outcomes inconsistent with every candidate) falls back to the
/// candidate covering the largest fraction of sample mass, ties broken
/// towards the smallest element.
pub fn infer_from_outcomes(
    g: &GroupSpec,
    weighted: &[(BitString, usize)],
) -> Result<SymmetryHypothesis> {
    let mut exact: Vec<BitString> = Vec::new();
    for r in g.elements() {
        if r.is_zero() {
            continue;
        }
        let mut ok = true;
        for &(y, _) in weighted {
            if !g.annihilates(y, r)? {
                ok = false;
                break;
            }
        }
        if ok {
            exact.push(r);
        }
    }
    if !exact.is_empty() {
        return Ok(SymmetryHypothesis {
            group: g.clone(),
            period: Some(exact[0]),
            confidence: 1.0,
            under_determined: exact.len() > 1,
        });
    }
    // fallback: maximal consistent sample mass
    let total: usize = weighted.iter().map(|&(_, c)| c).sum();
    let mut best: Option<(BitString, usize)> = None;
    for r in g.elements() {
        if r.is_zero() {
            continue;
        }
        let mut mass = 0usize;
        for &(y, c) in weighted {
            if g.annihilates(y, r)? {
                mass += c;
            }
        }
        match best {
            Some((_, best_mass)) if mass <= best_mass => {}
            _ => best = Some((r, mass)),
        }
    }
    let (period, mass) = best.expect("groups have non-identity elements");
    Ok(SymmetryHypothesis {
        group: g.clone(),
        period: Some(period),
        confidence: if total == 0 { 0.0 } else { mass as f64 / total as f64 },
        under_determined: false,
    })
}

/// Infers a generalized period from a sample set.  Deterministic given the
/// sample multiset.
pub fn infer_period(samples: &HsgSampleSet) -> Result<SymmetryHypothesis> {
    let weighted: Vec<(BitString, usize)> = samples.in_counts().into_iter().collect();
    infer_from_outcomes(&samples.group, &weighted)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    fn toy() -> FunctionTable {
        FunctionTable::new(2, 1, vec![1, 1, 0, 0]).unwrap()
    }

    fn group(s: &str) -> GroupSpec {
        s.parse().unwrap()
    }

    fn in_probs(f: &FunctionTable, g: &GroupSpec) -> Vec<f64> {
        let (state, layout) = circuit_state(f, g).unwrap();
        state.marginal(layout.in_qubits()).unwrap()
    }

    #[test]
    fn toy_distribution_under_z2z2() {
        let p = in_probs(&toy(), &group("2,2"));
        assert!((p[0b00] - 0.5).abs() < 1e-12);
        assert!((p[0b10] - 0.5).abs() < 1e-12);
        assert!(p[0b01].abs() < 1e-12);
        assert!(p[0b11].abs() < 1e-12);
    }

    #[test]
    fn toy_distribution_under_z4() {
        let p = in_probs(&toy(), &group("4"));
        assert!((p[0] - 0.5).abs() < 1e-12);
        assert!((p[1] - 0.25).abs() < 1e-12);
        assert!(p[2].abs() < 1e-12);
        assert!((p[3] - 0.25).abs() < 1e-12);
    }

    #[test]
    fn constant_table_always_samples_zero() {
        let f = FunctionTable::constant(2, 1, 1).unwrap();
        let set = run(&f, &group("2,2"), 500, 3).unwrap();
        assert!(set.records.iter().all(|r| r.in_bits == bs("00")));
    }

    #[test]
    fn infer_exact_simon_case() {
        let g = group("2,2");
        let hyp =
            infer_from_outcomes(&g, &[(bs("00"), 5), (bs("10"), 4)]).unwrap();
        assert_eq!(hyp.period, Some(bs("01")));
        assert_eq!(hyp.confidence, 1.0);
        assert!(!hyp.under_determined);
    }

    #[test]
    fn infer_z4_fallback_ties_break_low() {
        // inconsistent set {00, 01, 11}: every candidate covers only the
        // 00 mass, so the tie breaks to the smallest element
        let g = group("4");
        let hyp = infer_from_outcomes(
            &g,
            &[(bs("00"), 2), (bs("01"), 1), (bs("11"), 1)],
        )
        .unwrap();
        assert_eq!(hyp.period, Some(bs("01")));
        assert!((hyp.confidence - 0.5).abs() < 1e-12);
        assert!(!hyp.under_determined);
    }

    #[test]
    fn infer_flags_under_determined_sets() {
        let g = group("2,2");
        let hyp = infer_from_outcomes(&g, &[(bs("00"), 7)]).unwrap();
        assert_eq!(hyp.period, Some(bs("01")));
        assert_eq!(hyp.confidence, 1.0);
        assert!(hyp.under_determined);
    }

    #[test]
    fn infer_is_order_independent() {
        let g = group("2,2");
        let a = infer_from_outcomes(&g, &[(bs("10"), 3), (bs("00"), 2)]).unwrap();
        let b = infer_from_outcomes(&g, &[(bs("00"), 2), (bs("10"), 3)]).unwrap();
        assert_eq!(a.period, b.period);
        assert_eq!(a.confidence, b.confidence);
    }

    #[test]
    fn end_to_end_toy_inference() {
        let set = run(&toy(), &group("2,2"), 300, 9).unwrap();
        let hyp = infer_period(&set).unwrap();
        assert_eq!(hyp.period, Some(bs("01")));
        assert!(!hyp.under_determined);

        // wrong hypothesized group: the Z4 stage cannot be exact
        let set = run(&toy(), &group("4"), 300, 9).unwrap();
        let hyp = infer_period(&set).unwrap();
        assert_eq!(hyp.period, Some(bs("01")));
        assert!(hyp.confidence < 1.0);
    }

    #[test]
    fn csv_export_is_sorted_and_stable() {
        let set = run(&toy(), &group("2,2"), 50, 5).unwrap();
        let csv = set.to_csv();
        assert!(csv.starts_with("in_bits,out_bits,count\n"));
        assert_eq!(csv, run(&toy(), &group("2,2"), 50, 5).unwrap().to_csv());
        let lines: Vec<&str> = csv.lines().skip(1).collect();
        let mut sorted = lines.clone();
        sorted.sort();
        assert_eq!(lines, sorted);
    }

    #[test]
    fn width_mismatch_is_rejected() {
        let f3 = FunctionTable::constant(3, 1, 0).unwrap();
        assert!(circuit_state(&f3, &group("2,2")).is_err());
    }
}
