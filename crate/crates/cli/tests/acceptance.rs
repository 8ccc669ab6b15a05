//! End-to-end acceptance run: one line per criterion, non-zero exit on any failure.

use std::fmt::Write as _;
use std::process::Command;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sagl::bounds::{family_count_bound, scheme_exponent, warren_region_bound};
use sagl::family::{congruence_diagonalize, BilinearForm, EdgeSign, ReducedPredicate, SignMatrix};
use sagl::harness::{
    check_all_pairs, decode_file_bytes, encode_constraint, fit_line, gated_instance, Adjacency,
    BuiltinFamily, InstanceSpec,
};
use sagl::labeling::{trivial_bound, write_label_section};
use sagl::partition::{is_strict, HierarchyParams};
use sagl::rational::{int, ratio};
use sagl::{trivial_decode, trivial_encode, Rational};

const WARREN: &str = include_str!("../../core/tests/data/warren_oracle.csv");
const FAMILY: &str = include_str!("../../core/tests/data/family_oracle.csv");

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn reduction_fidelity() -> Outcome {
    let start = Instant::now();
    let mut out = String::new();
    for (name, q, sig) in [("unit-disk", 4, (3, 1)), ("disk", 5, (4, 1))] {
        let fam = BuiltinFamily::from_spec(&InstanceSpec::new(name, 1, 0))
            .unwrap()
            .family();
        let (pred, _) = fam.constraints[0].encoded_predicate();
        let r = ReducedPredicate::new(&pred).map_err(|e| e.to_string())?;
        ensure(r.dim() == q && r.signature() == sig, || {
            format!("{name}: Q={} signature {:?}", r.dim(), r.signature())
        })?;
        write!(out, "{name} Q={q} signature {sig:?}; ").unwrap();
    }
    let t = start.elapsed().as_secs_f64();
    ensure(t < 1.0, || format!("took {t:.3} s"))?;
    Ok(format!("{out}{:.0} ms", t * 1e3))
}

fn exponents() -> Outcome {
    let start = Instant::now();
    let (a, b) = (
        format!("{:.6}", scheme_exponent(4)),
        format!("{:.6}", scheme_exponent(5)),
    );
    let t = start.elapsed().as_secs_f64();
    ensure(a == "0.976723" && b == "0.990839", || {
        format!("got {a}, {b}")
    })?;
    ensure(t < 1e-3, || format!("took {t:e} s"))?;
    Ok(format!("Q=4 {a}, Q=5 {b}"))
}

/// Everything measured on one criterion-3 instance.
struct Instance {
    label: String,
    q: usize,
    n: usize,
    pairs: u64,
    mismatches: u64,
    asymmetric: u64,
    cli_mismatches: Result<u64, String>,
    audit: Result<(), String>,
    max_bits: usize,
}

fn run_instance(spec: &InstanceSpec, dir: &std::path::Path) -> Result<Instance, String> {
    let err = |e: sagl::Error| e.to_string();
    let (family, points, prepared, _) = gated_instance(spec, 16).map_err(err)?;
    let n = points.len();
    let truth = Adjacency::direct(&family, &points).map_err(err)?;
    let mut bytes = Vec::new();
    let mut audit = Ok(());
    let mut totals = vec![0usize; n];
    let mut q = 0;
    for c in prepared {
        let enc = encode_constraint(c, HierarchyParams::default()).map_err(err)?;
        let h = &enc.hierarchy;
        q = h.q();
        let problems = h.audit().check();
        if !problems.is_empty() {
            audit = Err(problems.join("; "));
        } else if let Err(e) = h.brute_force_audit(&enc.constraint.signs) {
            audit = Err(e);
        } else if q == 1 {
            for node in h.nodes() {
                if let Some(s) = &node.split {
                    if !is_strict(&s.assignment.loads(), node.members.len()) {
                        audit = Err(format!(
                            "Q=1 node {} loads {:?} not strict",
                            node.id,
                            s.assignment.loads()
                        ));
                    }
                }
            }
        }
        for (t, l) in totals.iter_mut().zip(&enc.labels) {
            *t += l.len();
        }
        write_label_section(&mut bytes, &enc.labels).map_err(err)?;
    }
    let sections = decode_file_bytes(&bytes).map_err(err)?;
    let check = check_all_pairs(&sections, &truth).map_err(err)?;
    let label = format!("{} n={} seed={}", spec.family, n, spec.seed);
    let path = dir.join(format!(
        "{}-{}-{}-{}.sagl",
        spec.family, spec.dim, n, spec.seed
    ));
    std::fs::write(&path, &bytes).map_err(|e| e.to_string())?;
    Ok(Instance {
        cli_mismatches: fresh_decode(&path, &truth),
        label,
        q,
        n,
        pairs: check.pairs,
        mismatches: check.mismatches,
        asymmetric: check.asymmetric,
        audit,
        max_bits: totals.into_iter().max().unwrap_or(0),
    })
}

/// Decodes the whole matrix in a separate process that sees only the label file.
fn fresh_decode(path: &std::path::Path, truth: &Adjacency) -> Result<u64, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_sagl"))
        .args(["decode", "--all", "--labels"])
        .arg(path)
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(String::from_utf8_lossy(&out.stderr).into_owned());
    }
    let text = String::from_utf8(out.stdout).map_err(|e| e.to_string())?;
    let rows: Vec<&[u8]> = text.lines().map(str::as_bytes).collect();
    let n = truth.n();
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err("decode output has the wrong shape".into());
    }
    let mut bad = 0;
    for i in 0..n {
        for j in 0..n {
            let expected = if i == j {
                b'-'
            } else if truth.get(i, j) {
                b'1'
            } else {
                b'0'
            };
            bad += (rows[i][j] != expected) as u64;
        }
    }
    Ok(bad)
}

fn roundtrips(instances: &[Instance], secs: f64) -> Outcome {
    let mut pairs = 0;
    for r in instances {
        ensure(r.mismatches == 0, || {
            format!("{}: {} mismatches", r.label, r.mismatches)
        })?;
        ensure(r.pairs as usize == r.n * (r.n - 1) / 2, || {
            format!("{}: {} pairs checked", r.label, r.pairs)
        })?;
        pairs += r.pairs;
    }
    ensure(secs <= 300.0, || format!("took {secs:.1} s"))?;
    Ok(format!(
        "{} instances, {pairs} pairs, 0 mismatches, {secs:.1} s",
        instances.len()
    ))
}

fn symmetry(instances: &[Instance]) -> Outcome {
    for r in instances {
        ensure(r.asymmetric == 0, || {
            format!("{}: {} orientation disagreements", r.label, r.asymmetric)
        })?;
        match &r.cli_mismatches {
            Ok(0) => {}
            Ok(k) => return Err(format!("{}: fresh decode differs on {k} entries", r.label)),
            Err(e) => return Err(format!("{}: fresh decode failed: {e}", r.label)),
        }
    }
    Ok("both orientations agree; fresh-process decode of every label file matches".into())
}

fn certificates(instances: &[Instance]) -> Outcome {
    for r in instances {
        r.audit.clone().map_err(|e| format!("{}: {e}", r.label))?;
    }
    let q1 = instances.iter().filter(|r| r.q == 1).count();
    ensure(q1 > 0, || "no Q=1 instance".into())?;
    Ok(format!(
        "brute-force audits pass, beta=2 loads hold, {q1} Q=1 hierarchies strictly balanced"
    ))
}

fn diagonalizer_suite() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let rand_rational = |rng: &mut ChaCha8Rng| {
        if rng.gen_bool(0.3) {
            int(0)
        } else {
            ratio(rng.gen_range(-9..=9), rng.gen_range(1..=6))
        }
    };
    for case in 0..100 {
        let dim = rng.gen_range(2..=12);
        let mut m = vec![vec![int(0); dim]; dim];
        for i in 0..dim {
            for j in i..dim {
                let v = rand_rational(&mut rng);
                m[i][j] = v.clone();
                m[j][i] = v;
            }
        }
        let form = BilinearForm { matrix: m };
        let d = congruence_diagonalize(&form);
        ensure(d.reconstruct(dim) == form.matrix, || {
            format!("case {case}: multiply-back differs")
        })?;
        let sig = d.signature();
        for _ in 0..10 {
            let p = random_invertible(dim, &mut rng);
            let other = congruence_diagonalize(&congruent(&form, &p));
            ensure(other.signature() == sig, || {
                format!("case {case}: signature changed")
            })?;
        }
    }
    let t = start.elapsed().as_secs_f64();
    ensure(t < 30.0, || format!("took {t:.1} s"))?;
    Ok(format!("100 matrices, 1000 congruences, {t:.2} s"))
}

/// Unit upper-triangular with its columns permuted.
fn random_invertible(dim: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<Rational>> {
    let mut perm: Vec<usize> = (0..dim).collect();
    for i in (1..dim).rev() {
        perm.swap(i, rng.gen_range(0..=i));
    }
    let mut p = vec![vec![int(0); dim]; dim];
    for i in 0..dim {
        p[i][perm[i]] = int(1);
        for j in i + 1..dim {
            p[i][perm[j]] = ratio(rng.gen_range(-5..=5), rng.gen_range(1..=3));
        }
    }
    p
}

fn congruent(m: &BilinearForm, p: &[Vec<Rational>]) -> BilinearForm {
    let n = m.dim();
    let mul = |a: &[Vec<Rational>], b: &[Vec<Rational>]| -> Vec<Vec<Rational>> {
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).fold(int(0), |acc, k| acc + &a[i][k] * &b[k][j]))
                    .collect()
            })
            .collect()
    };
    let pt: Vec<Vec<Rational>> = (0..n)
        .map(|i| (0..n).map(|j| p[j][i].clone()).collect())
        .collect();
    BilinearForm {
        matrix: mul(&mul(&pt, &m.matrix), p),
    }
}

fn baseline() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for n in [2usize, 5, 100, 1000] {
        let signs = SignMatrix::from_fn(n, |_, _| {
            if rng.gen() {
                EdgeSign::Positive
            } else {
                EdgeSign::Negative
            }
        });
        let labels = trivial_encode(&signs).map_err(|e| e.to_string())?;
        let expected = (n - 1).div_ceil(2) + (n as f64).log2().ceil() as usize;
        ensure(expected == trivial_bound(n), || {
            format!("n={n}: bound formula")
        })?;
        for l in &labels {
            ensure(l.len() == expected, || {
                format!("n={n}: label of {} bits, expected {expected}", l.len())
            })?;
        }
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    let got = trivial_decode(&labels[i], &labels[j]).map_err(|e| e.to_string())?;
                    ensure(got == signs.is_edge(i, j), || {
                        format!("n={n}: pair ({i},{j}) wrong")
                    })?;
                }
            }
        }
    }
    Ok("n in {2,5,100,1000}: exact decode, lengths 2, 5, 57, 510".into())
}

fn growth(instances: &[Instance]) -> Outcome {
    let rows: Vec<&Instance> = instances
        .iter()
        .filter(|r| r.label.starts_with("dot-product") && r.q == 2)
        .collect();
    let ns: Vec<usize> = rows.iter().map(|r| r.n).collect();
    ensure(ns == [64, 256, 1024, 4096], || {
        format!("unexpected sizes {ns:?}")
    })?;
    let xs: Vec<f64> = rows.iter().map(|r| (r.n as f64).ln()).collect();
    let ys: Vec<f64> = rows.iter().map(|r| (r.max_bits as f64).ln()).collect();
    let (slope, _) = fit_line(&xs, &ys);
    let top = rows[3].max_bits;
    let bits: Vec<usize> = rows.iter().map(|r| r.max_bits).collect();
    let msg = format!(
        "max bits {bits:?}, slope {slope:.4} (strict-balance target {:.4}), {top} < {} bits at n=4096",
        scheme_exponent(2),
        trivial_bound(4096)
    );
    ensure(slope < 0.95 && top < trivial_bound(4096), || msg.clone())?;
    Ok(msg)
}

fn split_sci(s: &str) -> (f64, i64) {
    let (m, e) = s.split_once('e').unwrap();
    (
        m.parse().unwrap(),
        e.trim_start_matches('+').parse().unwrap(),
    )
}

fn rel_diff(a: &str, b: &str) -> f64 {
    let ((ma, ea), (mb, eb)) = (split_sci(a), split_sci(b));
    ((ma - mb * 10f64.powi((eb - ea) as i32)) / ma).abs()
}

fn rows(text: &str) -> impl Iterator<Item = Vec<&str>> {
    text.lines()
        .skip(1)
        .filter(|l| !l.is_empty())
        .map(|l| l.split(',').collect())
}

fn bound_oracles() -> Outcome {
    let mut count = 0;
    for r in rows(WARREN) {
        let a: Vec<u64> = r[..3].iter().map(|v| v.parse().unwrap()).collect();
        let v = warren_region_bound(a[0], a[1], a[2]).map_err(|e| e.to_string())?;
        ensure(rel_diff(&v.scientific, r[3]) < 5e-12, || {
            format!("warren{a:?}: {} vs {}", v.scientific, r[3])
        })?;
        count += 1;
    }
    ensure(count == 20, || format!("{count} warren tuples"))?;
    for r in rows(FAMILY) {
        let a: Vec<u64> = r[..4].iter().map(|v| v.parse().unwrap()).collect();
        let v = family_count_bound(a[0], a[1], a[2], a[3]).map_err(|e| e.to_string())?;
        ensure(rel_diff(&v.value.scientific, r[4]) < 5e-12, || {
            format!("family{a:?}: {}", v.value.scientific)
        })?;
    }
    Ok("20 warren tuples and 6 family tuples agree to 12 significant digits".into())
}

fn main() {
    let dir = tempfile::tempdir().expect("temporary directory");
    let mut specs = Vec::new();
    for n in [32, 128, 512] {
        for seed in 1..=3 {
            specs.push(InstanceSpec::new("unit-disk", n, seed));
        }
    }
    for dim in [1, 2] {
        for n in [64, 256, 1024, 4096] {
            specs.push(InstanceSpec::dot_product(dim, n, 1));
        }
    }
    let start = Instant::now();
    let instances: Result<Vec<Instance>, String> =
        specs.iter().map(|s| run_instance(s, dir.path())).collect();
    let secs = start.elapsed().as_secs_f64();

    let on = |f: &dyn Fn(&[Instance]) -> Outcome| match &instances {
        Ok(v) => f(v),
        Err(e) => Err(format!("instance run failed: {e}")),
    };
    let results: Vec<Outcome> = vec![
        reduction_fidelity(),
        exponents(),
        on(&|v| roundtrips(v, secs)),
        on(&symmetry),
        on(&certificates),
        diagonalizer_suite(),
        baseline(),
        on(&growth),
        bound_oracles(),
    ];
    let mut failed = 0;
    for (i, r) in results.iter().enumerate() {
        match r {
            Ok(msg) => println!("criterion {}: PASS {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {}: FAIL {msg}", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
