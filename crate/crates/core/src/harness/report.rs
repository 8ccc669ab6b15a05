use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::generate::{resample_seed, BuiltinFamily, InstanceSpec};
use super::pipeline::{
    check_all_pairs, decode_file_bytes, encode_constraint, prepare_family, Adjacency,
    PreparedConstraint,
};
use crate::baseline::{trivial_decode, trivial_encode};
use crate::bounds::scheme_exponent;
use crate::error::{Error, Result};
use crate::family::Family;
use crate::labeling::trivial_bound;
use crate::partition::{depth_bound, BalanceMode, HierarchyParams};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunParams {
    pub hierarchy: HierarchyParams,
    /// Resamples allowed when a generated instance fails the general-position gate.
    pub max_resamples: u32,
    /// Re-derive every certificate from the sign matrix.
    pub audit: bool,
    /// Also run the trivial scheme on the same graph.
    pub baseline: bool,
}

impl Default for RunParams {
    fn default() -> Self {
        Self {
            hierarchy: HierarchyParams::default(),
            max_resamples: 16,
            audit: false,
            baseline: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstraintReport {
    pub reduced_dim: usize,
    pub signature: (usize, usize),
    pub complement: bool,
    pub depth: u32,
    pub depth_bound: u32,
    pub nodes: usize,
    pub retries: u32,
    pub strict_balance: bool,
    pub max_bits: usize,
    pub mean_bits: f64,
    pub closed_form_bound: f64,
    pub adjusted_bound: f64,
    pub within_budget: bool,
    pub exponent_estimate: f64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrivialReport {
    pub bits: usize,
    pub expected_bits: usize,
    pub mismatches: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub instance: Option<InstanceSpec>,
    pub n: usize,
    pub q: usize,
    pub balance: BalanceMode,
    pub max_retries: u32,
    pub constraints: Vec<ConstraintReport>,
    pub max_bits: usize,
    pub mean_bits: f64,
    pub trivial_bound: usize,
    pub label_file_bytes: usize,
    pub edge_density: f64,
    pub pairs_checked: u64,
    pub mismatches: u64,
    pub orientation_disagreements: u64,
    pub certificates_ok: Option<bool>,
    pub trivial: Option<TrivialReport>,
    pub resamples: u32,
    pub wall_time_ms: f64,
}

impl RunReport {
    pub fn success(&self) -> bool {
        self.mismatches == 0
            && self.orientation_disagreements == 0
            && self.certificates_ok != Some(false)
            && self
                .trivial
                .as_ref()
                .is_none_or(|t| t.mismatches == 0 && t.bits == t.expected_bits)
    }

    /// Aligned human-readable rendering.
    pub fn to_text(&self) -> String {
        let mut rows: Vec<(String, String)> = Vec::new();
        let mut row = |k: &str, v: String| rows.push((k.to_string(), v));
        if let Some(s) = &self.instance {
            row("family", s.family.clone());
            row("seed", s.seed.to_string());
        }
        row("n", self.n.to_string());
        row("q", self.q.to_string());
        row("balance", format_balance(&self.balance));
        for (i, c) in self.constraints.iter().enumerate() {
            let p = if self.constraints.len() > 1 {
                format!("[{i}] ")
            } else {
                String::new()
            };
            row(&format!("{p}Q"), c.reduced_dim.to_string());
            row(
                &format!("{p}signature"),
                format!("({}, {})", c.signature.0, c.signature.1),
            );
            row(
                &format!("{p}depth"),
                format!("{} (bound {})", c.depth, c.depth_bound),
            );
            row(&format!("{p}nodes"), c.nodes.to_string());
            row(&format!("{p}retries"), c.retries.to_string());
            row(&format!("{p}strict balance"), c.strict_balance.to_string());
            row(
                &format!("{p}closed-form bound"),
                format!("{:.1}", c.closed_form_bound),
            );
            row(
                &format!("{p}format bound"),
                format!("{:.1}", c.adjusted_bound),
            );
        }
        row("max bits/vertex", self.max_bits.to_string());
        row("mean bits/vertex", format!("{:.2}", self.mean_bits));
        row("trivial bound", self.trivial_bound.to_string());
        row("label file bytes", self.label_file_bytes.to_string());
        row("edge density", format!("{:.4}", self.edge_density));
        row("pairs checked", self.pairs_checked.to_string());
        row("mismatches", self.mismatches.to_string());
        row(
            "orientation disagreements",
            self.orientation_disagreements.to_string(),
        );
        if let Some(ok) = self.certificates_ok {
            row("certificate audit", if ok { "pass" } else { "FAIL" }.into());
        }
        if let Some(t) = &self.trivial {
            row(
                "trivial bits/vertex",
                format!("{} (expected {})", t.bits, t.expected_bits),
            );
            row("trivial mismatches", t.mismatches.to_string());
        }
        row("resamples", self.resamples.to_string());
        row("wall time", format!("{:.1} ms", self.wall_time_ms));
        let width = rows.iter().map(|r| r.0.len()).max().unwrap_or(0);
        rows.iter()
            .map(|(k, v)| format!("{k:<width$}  {v}\n"))
            .collect()
    }
}

pub fn format_balance(b: &BalanceMode) -> String {
    match b {
        BalanceMode::Relaxed { beta } => format!("relaxed (beta = {beta})"),
        BalanceMode::Strict => "strict".into(),
    }
}

/// Generates the instance, resampling while the gate rejects it.
pub fn gated_instance(
    spec: &InstanceSpec,
    max_resamples: u32,
) -> Result<(Family, Vec<Vec<Rational>>, Vec<PreparedConstraint>, u32)> {
    let builtin = BuiltinFamily::from_spec(spec)?;
    let family = builtin.family();
    let mut k = 0;
    loop {
        let points = builtin.points(spec.n, resample_seed(spec.seed, k));
        match prepare_family(&family, &points) {
            Ok(prepared) => return Ok((family, points, prepared, k)),
            Err(Error::GeneralPosition(..)) if k < max_resamples => k += 1,
            Err(e) => return Err(e),
        }
    }
}

/// Generates, encodes, serializes, decodes every pair from the serialized labels alone
/// and compares with direct evaluation.
pub fn run_roundtrip(spec: &InstanceSpec, params: &RunParams) -> Result<RunReport> {
    let start = Instant::now();
    let (family, points, prepared, resamples) = gated_instance(spec, params.max_resamples)?;
    let mut report = verify_instance(&family, &points, prepared, params)?;
    report.instance = Some(spec.clone());
    report.resamples = resamples;
    report.wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(report)
}

/// Round trip on given points whose constraints are already prepared.
pub fn verify_instance(
    family: &Family,
    points: &[Vec<Rational>],
    prepared: Vec<PreparedConstraint>,
    params: &RunParams,
) -> Result<RunReport> {
    let start = Instant::now();
    let n = points.len();
    let truth = Adjacency::direct(family, points)?;
    let mut constraints = Vec::new();
    let mut certificates_ok = params.audit.then_some(true);
    let mut bytes = Vec::new();
    let mut totals = vec![0usize; n];
    for c in prepared {
        let enc = encode_constraint(c, params.hierarchy)?;
        if params.audit
            && enc
                .hierarchy
                .brute_force_audit(&enc.constraint.signs)
                .is_err()
        {
            certificates_ok = Some(false);
        }
        let h = &enc.hierarchy;
        let s = &enc.stats;
        constraints.push(ConstraintReport {
            reduced_dim: enc.constraint.reduced.dim(),
            signature: enc.constraint.reduced.signature(),
            complement: enc.constraint.complement,
            depth: h.depth(),
            depth_bound: depth_bound(n, h.q(), params.hierarchy.balance),
            nodes: h.nodes().len(),
            retries: h.total_retries(),
            strict_balance: h.all_strict(),
            max_bits: s.max_bits,
            mean_bits: s.mean_bits,
            closed_form_bound: s.closed_form_bound,
            adjusted_bound: s.adjusted_bound,
            within_budget: s.within_budget(),
            exponent_estimate: s.exponent_estimate,
        });
        for (t, l) in totals.iter_mut().zip(&enc.labels) {
            *t += l.len();
        }
        crate::labeling::write_label_section(&mut bytes, &enc.labels)?;
    }
    // from here on only the serialized labels are consulted
    let sections = decode_file_bytes(&bytes)?;
    let check = check_all_pairs(&sections, &truth)?;
    drop(sections);
    let trivial = if params.baseline && n >= 2 {
        let labels = trivial_encode(&truth.to_sign_matrix())?;
        let mismatches = (0..n)
            .into_par_iter()
            .map(|i| {
                let mut m = 0u64;
                for j in 0..n {
                    if i != j && trivial_decode(&labels[i], &labels[j])? != truth.get(i, j) {
                        m += 1;
                    }
                }
                Ok(m)
            })
            .sum::<Result<u64>>()?;
        Some(TrivialReport {
            bits: labels.iter().map(|l| l.len()).max().unwrap_or(0),
            expected_bits: trivial_bound(n),
            mismatches,
        })
    } else {
        None
    };
    Ok(RunReport {
        instance: None,
        n,
        q: family.q,
        balance: params.hierarchy.balance,
        max_retries: params.hierarchy.max_retries,
        constraints,
        max_bits: totals.iter().copied().max().unwrap_or(0),
        mean_bits: totals.iter().sum::<usize>() as f64 / n.max(1) as f64,
        trivial_bound: trivial_bound(n),
        label_file_bytes: bytes.len(),
        edge_density: truth.edge_density(),
        pairs_checked: check.pairs,
        mismatches: check.mismatches,
        orientation_disagreements: check.asymmetric,
        certificates_ok,
        trivial,
        resamples: 0,
        wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingRow {
    pub n: usize,
    pub depth: u32,
    pub max_bits: usize,
    pub mean_bits: f64,
    pub trivial_bound: usize,
    pub closed_form_bound: f64,
    pub adjusted_bound: f64,
    pub mismatches: u64,
    pub wall_time_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingReport {
    pub family: String,
    pub reduced_dim: usize,
    pub balance: BalanceMode,
    pub rows: Vec<ScalingRow>,
    /// Least-squares slope of `ln(max_bits)` against `ln(n)`.
    pub slope: f64,
    pub intercept: f64,
    /// `log2(2^Q - 1) / Q`.
    pub target_exponent: f64,
}

impl ScalingReport {
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in &self.rows {
            w.serialize(r)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{:>8} {:>6} {:>10} {:>12} {:>10} {:>12}\n",
            "n", "depth", "max bits", "mean bits", "trivial", "mismatches"
        );
        for r in &self.rows {
            out += &format!(
                "{:>8} {:>6} {:>10} {:>12.2} {:>10} {:>12}\n",
                r.n, r.depth, r.max_bits, r.mean_bits, r.trivial_bound, r.mismatches
            );
        }
        out += &format!(
            "fitted slope {:.4}; target exponent log2(2^Q-1)/Q = {:.6} (Q = {})\n",
            self.slope, self.target_exponent, self.reduced_dim
        );
        out
    }
}

/// Least-squares fit `y = slope * x + intercept`.
pub fn fit_line(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// Round trips over a geometric grid of sizes and fits the growth of the label length.
pub fn run_scaling(base: &InstanceSpec, ns: &[usize], params: &RunParams) -> Result<ScalingReport> {
    if ns.len() < 4 {
        return Err(Error::Domain("scaling needs at least four sizes".into()));
    }
    let mut rows = Vec::new();
    let mut reduced_dim = 0;
    for &n in ns {
        let spec = InstanceSpec { n, ..base.clone() };
        let params = RunParams {
            baseline: false,
            ..*params
        };
        let r = run_roundtrip(&spec, &params)?;
        if r.mismatches > 0 {
            return Err(Error::Mismatch {
                count: r.mismatches,
            });
        }
        let c = &r.constraints[0];
        reduced_dim = c.reduced_dim;
        rows.push(ScalingRow {
            n,
            depth: r.constraints.iter().map(|c| c.depth).max().unwrap_or(0),
            max_bits: r.max_bits,
            mean_bits: r.mean_bits,
            trivial_bound: r.trivial_bound,
            closed_form_bound: r.constraints.iter().map(|c| c.closed_form_bound).sum(),
            adjusted_bound: r.constraints.iter().map(|c| c.adjusted_bound).sum(),
            mismatches: r.mismatches,
            wall_time_ms: r.wall_time_ms,
        });
    }
    let xs: Vec<f64> = rows.iter().map(|r| (r.n as f64).ln()).collect();
    let ys: Vec<f64> = rows.iter().map(|r| (r.max_bits as f64).ln()).collect();
    let (slope, intercept) = fit_line(&xs, &ys);
    Ok(ScalingReport {
        family: base.family.clone(),
        reduced_dim,
        balance: params.hierarchy.balance,
        rows,
        slope,
        intercept,
        target_exponent: scheme_exponent(reduced_dim.max(1) as u32),
    })
}
