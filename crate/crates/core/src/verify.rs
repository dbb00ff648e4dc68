//! Cross-check harness: executable equalities between the enumeration,
//! presentation and character paths, with machine-readable reports.

use crate::characters::{weight_multiplicities_a1, weight_multiplicities_b2};
use crate::error::Error;
use crate::partitions::{
    self, all_of_degree, enumerate_admissible, enumerate_sl2, find_leading_term_divisor,
    satisfies_dc, semi_infinite_multiplicities, ColoredPartition, DominantWeight, Sl2Weight,
    WeightedCount,
};
use crate::presentation::{
    graded_quotient_dims, ideal_generators_a1, ideal_generators_b2, lowering_closure,
    pivot_monomials, theta_power_coefficient, ArithmeticMode, GradedPolynomial, IdealTruncation,
    Mono,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;
use std::collections::BTreeMap;
use std::time::Instant;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckStatus {
    Pass,
    Fail,
    ResourceLimited,
    StabilizationFailed,
    /// A recorded discrepancy that does not block acceptance.
    Finding,
}

/// One compared cell: the values of every computation path at a fixed
/// (weight, degree).
#[derive(Clone, Debug, Serialize)]
pub struct Cell {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weight: Option<[i64; 2]>,
    pub degree: i64,
    pub values: Vec<i64>,
    pub agree: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub id: String,
    pub params: serde_json::Value,
    pub status: CheckStatus,
    /// labels of the value columns in each cell
    pub columns: Vec<String>,
    pub cells: Vec<Cell>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_mismatch: Option<Cell>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
}

impl CheckReport {
    pub fn failed(&self) -> bool {
        matches!(self.status, CheckStatus::Fail)
    }

    pub fn resource_limited(&self) -> bool {
        matches!(
            self.status,
            CheckStatus::ResourceLimited | CheckStatus::StabilizationFailed
        )
    }

    pub fn summary_line(&self) -> String {
        let status = match self.status {
            CheckStatus::Pass => "PASS",
            CheckStatus::Fail => "FAIL",
            CheckStatus::ResourceLimited => "RESOURCE-LIMITED",
            CheckStatus::StabilizationFailed => "STABILIZATION-FAILED",
            CheckStatus::Finding => "FINDING",
        };
        let mismatch = self
            .first_mismatch
            .as_ref()
            .map(|c| {
                format!(
                    " first mismatch at (weight {:?}, degree {}): {:?}",
                    c.weight, c.degree, c.values
                )
            })
            .unwrap_or_default();
        format!("{:<24} {:<20} {}{}", self.id, self.params, status, mismatch)
    }

    /// Summary line plus per-degree rows; weight-refined cells are summed
    /// per degree, keeping the cell-level agreement flag.
    pub fn render_table(&self) -> String {
        let mut s = self.summary_line();
        s.push('\n');
        let mut by_degree: BTreeMap<i64, (Vec<i64>, bool)> = BTreeMap::new();
        for c in &self.cells {
            let entry = by_degree
                .entry(c.degree)
                .or_insert_with(|| (vec![0; c.values.len()], true));
            for (acc, v) in entry.0.iter_mut().zip(&c.values) {
                *acc += v;
            }
            entry.1 &= c.agree;
        }
        if !by_degree.is_empty() {
            s.push_str(&format!("    columns: {}\n", self.columns.join(" | ")));
            for (degree, (vals, agree)) in by_degree {
                let vals: Vec<String> = vals.iter().map(|v| v.to_string()).collect();
                s.push_str(&format!(
                    "    degree {degree:>2}: {}{}\n",
                    vals.join(" | "),
                    if agree { "" } else { "   << MISMATCH" }
                ));
            }
        }
        for n in &self.notes {
            s.push_str(&format!("    note: {n}\n"));
        }
        s
    }
}

/// Comparison key: optional doubled weight plus degree.
type CellKey = (Option<[i64; 2]>, i64);

/// Turn a weighted table into comparison keys; `refined` keeps the weights,
/// otherwise the per-degree totals are compared.
fn table_keys(t: &WeightedCount, refined: bool) -> BTreeMap<CellKey, i64> {
    let mut out = BTreeMap::new();
    if refined {
        for (w, d, m) in t.entries() {
            *out.entry((Some(w.doubled()), d)).or_insert(0) += m as i64;
        }
    } else {
        for (d, m) in t.totals() {
            out.insert((None, d), m as i64);
        }
    }
    out
}

fn compare_columns(
    tables: &[BTreeMap<CellKey, i64>],
    seed_degrees: Option<i64>,
) -> (Vec<Cell>, Option<Cell>) {
    let mut keys: std::collections::BTreeSet<CellKey> = std::collections::BTreeSet::new();
    if let Some(n_max) = seed_degrees {
        for d in 0..=n_max {
            keys.insert((None, d));
        }
    }
    for t in tables {
        keys.extend(t.keys().copied());
    }
    let mut cells = Vec::new();
    let mut first = None;
    for key in keys {
        let values: Vec<i64> = tables.iter().map(|t| t.get(&key).copied().unwrap_or(0)).collect();
        let agree = values.windows(2).all(|w| w[0] == w[1]);
        let cell = Cell { weight: key.0, degree: key.1, values, agree };
        if !agree && first.is_none() {
            first = Some(cell.clone());
        }
        cells.push(cell);
    }
    (cells, first)
}

fn finish(
    id: &str,
    params: serde_json::Value,
    columns: Vec<String>,
    cells: Vec<Cell>,
    first_mismatch: Option<Cell>,
    notes: Vec<String>,
    started: Instant,
) -> CheckReport {
    let status = if first_mismatch.is_some() { CheckStatus::Fail } else { CheckStatus::Pass };
    CheckReport {
        id: id.into(),
        params,
        status,
        columns,
        cells,
        first_mismatch,
        notes,
        timing_ms: Some(started.elapsed().as_millis() as u64),
    }
}

fn error_report(id: &str, params: serde_json::Value, e: &Error, started: Instant) -> CheckReport {
    let status = match e {
        Error::ResourceLimit { .. } => CheckStatus::ResourceLimited,
        Error::StabilizationFailed { .. } => CheckStatus::StabilizationFailed,
        _ => CheckStatus::Fail,
    };
    CheckReport {
        id: id.into(),
        params,
        status,
        columns: vec![],
        cells: vec![],
        first_mismatch: None,
        notes: vec![e.to_string()],
        timing_ms: Some(started.elapsed().as_millis() as u64),
    }
}

fn mode_tag(mode: &ArithmeticMode) -> serde_json::Value {
    match mode {
        ArithmeticMode::Rational => json!("rational"),
        ArithmeticMode::Modular(p) => json!({"modular": p}),
        ArithmeticMode::Both(p) => json!({"both": p}),
    }
}

/// Admissible-count vs quotient-dimension equality for the level-k
/// subspace presentation, per degree (per weight when `refined`).
pub fn check_w_basis(
    lambda: &DominantWeight,
    n_max: u32,
    mode: &ArithmeticMode,
    refined: bool,
) -> CheckReport {
    let started = Instant::now();
    let params = json!({
        "lambda": [lambda.k0, lambda.k1, lambda.k2],
        "n_max": n_max,
        "mode": mode_tag(mode),
    });
    let ideal = match ideal_generators_b2(lambda, n_max) {
        Ok(i) => i,
        Err(e) => return error_report("w-basis", params, &e, started),
    };
    check_w_basis_against(lambda, n_max, mode, refined, &ideal, "w-basis", started)
}

fn check_w_basis_against(
    lambda: &DominantWeight,
    n_max: u32,
    mode: &ArithmeticMode,
    refined: bool,
    ideal: &IdealTruncation,
    id: &str,
    started: Instant,
) -> CheckReport {
    let params = json!({
        "lambda": [lambda.k0, lambda.k1, lambda.k2],
        "n_max": n_max,
        "mode": mode_tag(mode),
    });
    let mut enumerated = WeightedCount::new();
    for n in 0..=n_max {
        for pi in enumerate_admissible(lambda, n) {
            let (w, d) = partitions::weight_degree(&pi);
            enumerated.add(w, d, 1);
        }
    }
    let dims = match graded_quotient_dims(ideal, n_max, mode, None) {
        Ok(q) => q.per_weight,
        Err(e) => return error_report(id, params, &e, started),
    };
    let cols = vec!["enumeration".into(), "quotient-dim".into()];
    let tables = [table_keys(&enumerated, refined), table_keys(&dims, refined)];
    let seed = (!refined).then_some(n_max as i64);
    let (cells, first) = compare_columns(&tables, seed);
    finish(id, params, cols, cells, first, vec![], started)
}

/// The three-path coincidence at weight k*L0: B2 enumeration, A1 quotient
/// dimensions, and A1 character dimensions agree per degree.
pub fn check_a1_coincidence(k: u32, n_max: u32, mode: &ArithmeticMode) -> CheckReport {
    let started = Instant::now();
    let params = json!({"k": k, "n_max": n_max, "mode": mode_tag(mode)});
    let id = "a1-coincidence";
    let lambda = DominantWeight::new(k, 0, 0);

    let mut b2_counts: BTreeMap<CellKey, i64> = BTreeMap::new();
    for n in 0..=n_max {
        b2_counts.insert((None, n as i64), enumerate_admissible(&lambda, n).len() as i64);
    }

    let a1_dims = match ideal_generators_a1(k, n_max)
        .and_then(|ideal| graded_quotient_dims(&ideal, n_max, mode, None))
    {
        Ok(q) => table_keys(&q.per_weight, false),
        Err(e) => return error_report(id, params, &e, started),
    };

    let characters = match weight_multiplicities_a1(&Sl2Weight::new(k, 0), n_max as usize) {
        Ok(t) => table_keys(&t, false),
        Err(e) => return error_report(id, params, &e, started),
    };

    let cols = vec!["b2-enumeration".into(), "a1-quotient-dim".into(), "a1-character".into()];
    let (cells, first) =
        compare_columns(&[b2_counts, a1_dims, characters], Some(n_max as i64));
    finish(id, params, cols, cells, first, vec![], started)
}

/// Per-(weight, degree) equality of the A1 admissible monomial counts with
/// the Weyl-Kac multiplicities.
pub fn check_sl2_monomial_bases(lambda: &Sl2Weight, n_max: u32) -> CheckReport {
    let started = Instant::now();
    let params = json!({"lambda": [lambda.k0, lambda.k1], "n_max": n_max});
    let id = "sl2-bases";
    let mut counts = WeightedCount::new();
    for n in 0..=n_max {
        let t = enumerate_sl2(lambda, n);
        for (w, d, m) in t.entries() {
            counts.add(w, d, m);
        }
    }
    let characters = match weight_multiplicities_a1(lambda, n_max as usize) {
        // the enumeration produces relative weights
        Ok(t) => t.shift_weights(-lambda.finite_part()),
        Err(e) => return error_report(id, params, &e, started),
    };
    let cols = vec!["enumeration".into(), "character".into()];
    let tables = [table_keys(&counts, true), table_keys(&characters, true)];
    let (cells, first) = compare_columns(&tables, None);
    finish(id, params, cols, cells, first, vec![], started)
}

/// Stabilized semi-infinite multiplicities against the B2 character.
pub fn check_semi_infinite(lambda: &DominantWeight, n_max: u32) -> CheckReport {
    let started = Instant::now();
    let params = json!({"lambda": [lambda.k0, lambda.k1, lambda.k2], "n_max": n_max});
    let id = "semi-infinite";
    let stabilized = match semi_infinite_multiplicities(lambda, n_max, None) {
        Ok(t) => t,
        Err(e) => return error_report(id, params, &e, started),
    };
    let characters = match weight_multiplicities_b2(lambda, n_max as usize) {
        Ok(t) => t,
        Err(e) => return error_report(id, params, &e, started),
    };
    let cols = vec!["semi-infinite".into(), "character".into()];
    let tables = [table_keys(&stabilized, true), table_keys(&characters, true)];
    let (cells, first) = compare_columns(&tables, None);
    finish(id, params, cols, cells, first, vec![], started)
}

fn random_partition(rng: &mut ChaCha8Rng, max_degree: u32) -> ColoredPartition {
    let mut exponents: BTreeMap<u32, [u32; 3]> = BTreeMap::new();
    let mut budget = rng.gen_range(0..=max_degree);
    while budget > 0 {
        let depth = rng.gen_range(1..=budget);
        let color = rng.gen_range(0..3usize);
        exponents.entry(depth).or_insert([0, 0, 0])[color] += 1;
        budget -= depth;
        if rng.gen_ratio(1, 4) {
            break;
        }
    }
    ColoredPartition::from_exponents(exponents)
}

/// Property check: the difference conditions hold exactly when no
/// leading-term factor divides. Exhaustive to degree 8, plus seeded random
/// partitions to degree `random_max_degree`, plus an injected violation as a
/// negative control.
pub fn check_leading_terms(
    k: u32,
    samples: u32,
    seed: u64,
    random_max_degree: u32,
) -> CheckReport {
    let started = Instant::now();
    let params = json!({"k": k, "samples": samples, "seed": seed});
    let id = "leading-terms";
    let mut cells = Vec::new();
    let mut first = None;
    let mut notes = Vec::new();

    let mut record = |degree: i64, checked: i64, mismatches: i64, first: &mut Option<Cell>| {
        let cell = Cell {
            weight: None,
            degree,
            values: vec![checked, mismatches],
            agree: mismatches == 0,
        };
        if mismatches != 0 && first.is_none() {
            *first = Some(cell.clone());
        }
        cells.push(cell);
    };

    for n in 0..=8u32 {
        let mut checked = 0i64;
        let mut bad = 0i64;
        for pi in all_of_degree(n) {
            checked += 1;
            let dc = satisfies_dc(&pi, k);
            let div = find_leading_term_divisor(&pi, k);
            if dc != div.is_none() {
                bad += 1;
            }
            if let Some(f) = div {
                if !pi.divides(&f.factor) {
                    bad += 1;
                }
            }
        }
        record(n as i64, checked, bad, &mut first);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checked = 0i64;
    let mut bad = 0i64;
    for _ in 0..samples {
        let pi = random_partition(&mut rng, random_max_degree);
        checked += 1;
        let dc = satisfies_dc(&pi, k);
        let div = find_leading_term_divisor(&pi, k);
        if dc != div.is_none() {
            bad += 1;
        }
    }
    record(-1, checked, bad, &mut first);
    notes.push(format!(
        "random sample encoded as degree -1; {samples} partitions to degree {random_max_degree}"
    ));

    // negative control: one concentrated exponent above the level must be
    // flagged by the divisor scan
    let injected =
        ColoredPartition::from_exponents([(1, [0, 0, k + 1])]);
    let detected =
        !satisfies_dc(&injected, k) && find_leading_term_divisor(&injected, k).is_some();
    record(-2, 1, if detected { 0 } else { 1 }, &mut first);
    notes.push("injected violation encoded as degree -2".into());

    finish(id, params, vec!["checked".into(), "mismatches".into()], cells, first, notes, started)
}

/// Observed dimension of the closed relation family per coefficient degree,
/// recorded against the stated (2k+1). Differences are findings, not
/// failures.
pub fn check_relation_module(k: u32, n_max: u32) -> CheckReport {
    let started = Instant::now();
    let params = json!({"k": k, "n_max": n_max});
    let id = "relation-module";
    let mut cells = Vec::new();
    let mut notes = Vec::new();
    let stated = (2 * k + 1) as i64;
    let mut observed_values = std::collections::BTreeSet::new();
    for n in (k + 1)..=n_max {
        let theta = match theta_power_coefficient(k, -(n as i64), crate::presentation::AlphabetKind::B2) {
            Ok(t) => t,
            Err(e) => return error_report(id, params, &e, started),
        };
        let closure = match lowering_closure(&[theta], crate::presentation::AlphabetKind::B2, 2 * k + 4) {
            Ok(c) => c,
            Err(e) => return error_report(id, params, &e, started),
        };
        let observed = closure.len() as i64;
        observed_values.insert(observed);
        cells.push(Cell {
            weight: None,
            degree: n as i64,
            values: vec![stated, observed],
            agree: stated == observed,
        });
    }
    let status = if cells.iter().all(|c| c.agree) {
        CheckStatus::Pass
    } else {
        notes.push(format!(
            "observed relation-family dimension {:?} differs from the stated {stated}; recorded as a finding",
            observed_values
        ));
        CheckStatus::Finding
    };
    CheckReport {
        id: id.into(),
        params,
        status,
        columns: vec!["stated".into(), "observed".into()],
        cells,
        first_mismatch: None,
        notes,
        timing_ms: Some(started.elapsed().as_millis() as u64),
    }
}

/// Audit of the straightening order: every pivot monomial should be
/// divisible by a leading-term factor or by the leading monomial of an
/// initial-condition generator. Mismatches are findings.
pub fn check_pivot_audit(lambda: &DominantWeight, n_max: u32) -> CheckReport {
    let started = Instant::now();
    let params = json!({"lambda": [lambda.k0, lambda.k1, lambda.k2], "n_max": n_max});
    let id = "pivot-audit";
    let k = lambda.level();
    let ideal = match ideal_generators_b2(lambda, n_max) {
        Ok(i) => i,
        Err(e) => return error_report(id, params, &e, started),
    };
    // leading monomials of the initial-condition families
    let mut ic_leads: Vec<Mono> = Vec::new();
    if lambda.k0 < n_max {
        ic_leads.push(Mono::new([(1, 2, lambda.k0 + 1)]));
    }
    if lambda.k0 + lambda.k2 < n_max {
        let top = GradedPolynomial::monomial(Mono::new([(1, 2, lambda.k0 + lambda.k2 + 1)]));
        match lowering_closure(&[top], crate::presentation::AlphabetKind::B2, 2 * k + 4) {
            Ok(cl) => {
                for g in cl {
                    if let Some(lm) = g.leading_mono() {
                        ic_leads.push(lm.clone());
                    }
                }
            }
            Err(e) => return error_report(id, params, &e, started),
        }
    }

    let mut cells = Vec::new();
    let mut notes = Vec::new();
    let mut all_explained = true;
    for n in 1..=n_max {
        let pivots = match pivot_monomials(&ideal, n) {
            Ok(p) => p,
            Err(e) => return error_report(id, params, &e, started),
        };
        let mut unexplained = 0i64;
        for p in &pivots {
            let pi = p.to_partition();
            let by_dc = find_leading_term_divisor(&pi, k).is_some();
            let by_ic = ic_leads.iter().any(|l| p.divisible_by(l));
            if !by_dc && !by_ic {
                unexplained += 1;
                if notes.len() < 20 {
                    notes.push(format!("unexplained pivot at degree {n}: {pi}"));
                }
            }
        }
        all_explained &= unexplained == 0;
        cells.push(Cell {
            weight: None,
            degree: n as i64,
            values: vec![pivots.len() as i64, unexplained],
            agree: unexplained == 0,
        });
    }
    CheckReport {
        id: id.into(),
        params,
        status: if all_explained { CheckStatus::Pass } else { CheckStatus::Finding },
        columns: vec!["pivots".into(), "unexplained".into()],
        cells,
        first_mismatch: None,
        notes,
        timing_ms: Some(started.elapsed().as_millis() as u64),
    }
}

/// Negative controls: a corrupted ideal (one generator dropped) must fail
/// the basis check, and an injected difference-condition violation must be
/// detected. The report passes iff both controls behave.
pub fn check_negative_controls(lambda: &DominantWeight, n_max: u32) -> CheckReport {
    let started = Instant::now();
    let params = json!({"lambda": [lambda.k0, lambda.k1, lambda.k2], "n_max": n_max});
    let id = "negative-controls";
    let mut notes = Vec::new();

    let ideal = match ideal_generators_b2(lambda, n_max) {
        Ok(i) => i,
        Err(e) => return error_report(id, params, &e, started),
    };
    if ideal.generators.is_empty() {
        return error_report(
            id,
            params,
            &Error::InvalidArgument("no generators to drop at this cut".into()),
            started,
        );
    }
    let mut generators = ideal.generators.clone();
    let dropped = generators.remove(generators.len() - 1);
    notes.push(format!(
        "dropped generator of degree {:?}",
        dropped.degree().unwrap_or(0)
    ));
    let corrupted = IdealTruncation { ring: ideal.ring, generators, degree_cut: ideal.degree_cut };
    let inner = check_w_basis_against(
        lambda,
        n_max,
        &ArithmeticMode::Rational,
        false,
        &corrupted,
        "w-basis-corrupted",
        Instant::now(),
    );
    let corrupted_detected = inner.failed();
    if let Some(c) = &inner.first_mismatch {
        notes.push(format!(
            "corrupted ideal mismatch located at degree {}: {:?}",
            c.degree, c.values
        ));
    }

    let k = lambda.level();
    let injected = ColoredPartition::from_exponents([(2, [0, 0, k + 1])]);
    let injection_detected =
        !satisfies_dc(&injected, k) && find_leading_term_divisor(&injected, k).is_some();

    let cells = vec![
        Cell {
            weight: None,
            degree: 0,
            values: vec![i64::from(corrupted_detected)],
            agree: corrupted_detected,
        },
        Cell {
            weight: None,
            degree: 1,
            values: vec![i64::from(injection_detected)],
            agree: injection_detected,
        },
    ];
    let ok = corrupted_detected && injection_detected;
    CheckReport {
        id: id.into(),
        params,
        status: if ok { CheckStatus::Pass } else { CheckStatus::Fail },
        columns: vec!["control-detected".into()],
        cells,
        first_mismatch: None,
        notes,
        timing_ms: Some(started.elapsed().as_millis() as u64),
    }
}
