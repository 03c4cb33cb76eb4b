use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use mubh_core::cover::{certify_fusion, double_cover, fusion_four, verify_cover_tables};
use mubh_core::hadamard::{
    build_mubh, bush_violation, check_unbiased, is_bush_type, regular_sum, BushLayout, HadamardError, HadamardMatrix,
    Unbiasedness,
};
use mubh_core::mubh_scheme::{
    build_five_class, build_three_class, extract_mubh, five_class_closed_form, gramian, gramian_relaxed, GramianBundle,
};
use mubh_core::scheme::{is_deza, is_srg, is_uniform, quotient_scheme, verify_scheme, Scheme};
use mubh_core::spectral::{
    closed_form_krein, closed_form_pq, idempotents_from_q, krein_bound_check, krein_params, q_structure, EigenData,
    Family, KreinTensor,
};
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::format::{self, FormatError};
use crate::report;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("verification failed: {0}")]
    Verify(String),
    #[error("CERTIFICATION FAILURE: {0}")]
    Certification(String),
}

impl CliError {
    /// 0 pass, 1 failed predicate on user input, 2 usage or parameters, 3 certification failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Verify(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Certification(_) => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

fn usage(e: impl ToString) -> CliError {
    CliError::Usage(e.to_string())
}

fn certification(e: impl ToString) -> CliError {
    CliError::Certification(e.to_string())
}

fn io(e: FormatError) -> CliError {
    CliError::Usage(e.to_string())
}

fn hadamard_param_error(e: HadamardError) -> CliError {
    match e {
        HadamardError::ZeroN | HadamardError::BlockNotPowerOfTwo(_) | HadamardError::CountOutOfRange { .. } => usage(e),
        other => certification(other),
    }
}

fn matrix_name(t: usize) -> String {
    format!("H_{t}.mat")
}

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| usage(format!("{}: {e}", dir.display())))
}

fn write_family(dir: &Path, hs: &[HadamardMatrix]) -> Result<Vec<PathBuf>> {
    create_dir(dir)?;
    hs.iter()
        .enumerate()
        .map(|(t, h)| {
            let path = dir.join(matrix_name(t + 1));
            format::write_file(&path, &format::sign_to_text(h.body())).map_err(io)?;
            Ok(path)
        })
        .collect()
}

/// Loads sign matrices and checks `HHᵗ = NI`; a failing matrix is reported through `fail`.
fn load_hadamards(paths: &[PathBuf], fail: fn(String) -> CliError) -> Result<Vec<HadamardMatrix>> {
    paths
        .iter()
        .map(|p| {
            let text = format::read_file(p).map_err(io)?;
            let body = format::parse_sign(&text).map_err(|e| fail(format!("{}: {e}", p.display())))?;
            HadamardMatrix::new(body).map_err(|e| fail(format!("{} is not Hadamard: {e}", p.display())))
        })
        .collect()
}

/// `H_1.mat, H_2.mat, …` in a directory, in numeric order.
fn family_paths(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut found = Vec::new();
    let entries = fs::read_dir(dir).map_err(|e| usage(format!("{}: {e}", dir.display())))?;
    for entry in entries {
        let name = entry.map_err(|e| usage(e.to_string()))?.file_name();
        let name = name.to_string_lossy();
        if let Some(t) = name.strip_prefix("H_").and_then(|s| s.strip_suffix(".mat")).and_then(|s| s.parse().ok()) {
            found.push(t);
        }
    }
    found.sort_unstable();
    if found.is_empty() {
        return Err(usage(format!("{}: no H_<k>.mat files", dir.display())));
    }
    if found.iter().enumerate().any(|(i, &t): (usize, &usize)| t != i + 1) {
        return Err(usage(format!("{}: matrix files are not numbered H_1 … H_{}", dir.display(), found.len())));
    }
    Ok(found.iter().map(|&t| dir.join(matrix_name(t))).collect())
}

/// Bush layout, Bush type, regularity and pairwise unbiasedness (with a
/// Bush-type witness `L = HKᵗ/2n`). The error names the first failing predicate.
fn family_checks(hs: &[HadamardMatrix], names: &[String]) -> std::result::Result<(usize, Value), String> {
    let first = hs.first().ok_or("no matrices given")?;
    let layout = BushLayout::from_order(first.order()).map_err(|e| format!("{}: {e}", names[0]))?;
    let n = layout.n();
    let mut matrices = Vec::new();
    for (h, name) in hs.iter().zip(names) {
        if h.order() != layout.order() {
            return Err(format!("{name} has order {}, expected {}", h.order(), layout.order()));
        }
        if let Some(v) = bush_violation(h).map_err(|e| e.to_string())? {
            return Err(format!("{name} is not Bush-type: {v}"));
        }
        let sum = regular_sum(h).ok_or_else(|| format!("{name} is not regular"))?;
        matrices.push(json!({"file": name, "order": h.order(), "hadamard": true, "bush_type": true, "row_sum": sum}));
    }
    let mut pairs = Vec::new();
    for a in 0..hs.len() {
        for b in a + 1..hs.len() {
            match check_unbiased(&hs[a], &hs[b]).map_err(|e| e.to_string())? {
                Unbiasedness::Biased { row, col, value, root } => {
                    return Err(format!(
                        "{} and {} are not unbiased: entry ({row}, {col}) of HK^t is {value}, expected ±{root}",
                        names[a], names[b]
                    ))
                }
                Unbiasedness::Unbiased(l) => {
                    if !is_bush_type(&l).map_err(|e| e.to_string())? {
                        return Err(format!("witness HK^t/2n of {} and {} is not Bush-type", names[a], names[b]));
                    }
                }
            }
            pairs.push(json!({"a": names[a], "b": names[b], "unbiased": true, "witness_bush_type": true}));
        }
    }
    Ok((n, json!({"matrices": matrices, "pairs": pairs})))
}

fn file_names(paths: &[PathBuf]) -> Vec<String> {
    paths
        .iter()
        .map(|p| p.file_name().map_or_else(|| p.display().to_string(), |s| s.to_string_lossy().into()))
        .collect()
}

fn write_report(path: &Path, v: &Value) -> Result<()> {
    format::write_file(path, &report::to_text(v)).map_err(io)
}

pub fn construct(n: usize, m: usize, out: &Path) -> Result<Value> {
    let start = Instant::now();
    let family = build_mubh(n, m).map_err(hadamard_param_error)?;
    let paths = write_family(out, &family)?;
    let reloaded = load_hadamards(&paths, CliError::Certification)?;
    if reloaded != family {
        return Err(certification("reloaded matrices differ from the written ones"));
    }
    let (_, checks) = family_checks(&reloaded, &file_names(&paths)).map_err(certification)?;
    let bound = krein_bound_check(n, m);
    let doc = json!({
        "command": "construct",
        "parameters": {"n": n, "m": m, "family": "mubh"},
        "verdict": "certified",
        "order": 4 * n * n,
        "files": file_names(&paths),
        "checks": checks,
        "krein_bound": {"value": report::rat(&bound.value), "pass": bound.pass, "max_m": 2 * n - 1},
        "elapsed_ms": report::elapsed_ms(start),
    });
    write_report(&out.join("report.json"), &doc)?;
    Ok(doc)
}

pub enum Source {
    Params { n: usize, m: usize },
    Dir(PathBuf),
}

fn bundle_for(family: Family, source: &Source) -> Result<GramianBundle> {
    let (hs, n, user) = match source {
        Source::Params { n, m } => (build_mubh(*n, *m).map_err(hadamard_param_error)?, *n, false),
        Source::Dir(dir) => {
            let paths = family_paths(dir)?;
            let hs = load_hadamards(&paths, CliError::Verify)?;
            let (n, _) = family_checks(&hs, &file_names(&paths)).map_err(CliError::Verify)?;
            (hs, n, true)
        }
    };
    if hs.len() < 2 && family == Family::Class3 {
        return Err(usage("the three-class scheme needs m >= 2 matrices"));
    }
    let bundle = if hs.len() >= 2 { gramian(&hs, n) } else { gramian_relaxed(&hs, n) };
    bundle.map_err(|e| if user { CliError::Verify(e.to_string()) } else { certification(e) })
}

fn eigen_report(eig: &EigenData, krein: &KreinTensor) -> Value {
    json!({
        "P": report::rat_table(&eig.p),
        "Q": report::rat_table(&eig.q),
        "multiplicities": report::rat_list(&eig.multiplicities),
        "idempotents_certified": true,
        "krein": {
            "admissible": krein.is_admissible(),
            "min_entry": report::rat(&krein.min_entry()),
            "matrices": report::krein_matrices(krein),
        },
    })
}

fn certify_eigen(scheme: &Scheme, n: usize, m: usize, family: Family) -> Result<(EigenData, KreinTensor)> {
    let cf = closed_form_pq(n, m, family).map_err(certification)?;
    let eig = idempotents_from_q(scheme, &cf.q).map_err(certification)?;
    if let Some(p) = &cf.p {
        if *p != eig.p {
            return Err(certification(format!("{family}: derived P differs from the closed-form P")));
        }
    }
    let krein = krein_params(&eig);
    Ok((eig, krein))
}

/// The tabulated `B_i*` must equal the computed one at the tabulated index.
fn display_check(krein: &KreinTensor, n: usize, m: usize, family: Family) -> Result<Value> {
    match closed_form_krein(n, m, family).map_err(certification)? {
        None => Ok(Value::Null),
        Some((index, display)) => {
            if krein.krein_matrix(index) != display {
                return Err(certification(format!("{family}: computed B_{index}* differs from its closed form")));
            }
            Ok(json!({"index": index, "matches": true, "matrix": report::rat_table(&display)}))
        }
    }
}

fn graph_json(found: Option<(u64, u64, u64, u64)>) -> Value {
    found.map_or(Value::Null, |(v, k, a, b)| json!([v, k, a, b]))
}

/// Builds, verifies and certifies one scheme family and writes it to `out`.
pub fn build_scheme(family: Family, source: &Source, out: &Path, report_path: Option<&Path>) -> Result<Value> {
    let start = Instant::now();
    let bundle = bundle_for(family, source)?;
    let (n, m) = (bundle.n, bundle.m);
    let mut doc = Map::new();
    doc.insert("command".into(), json!("build-scheme"));
    doc.insert("parameters".into(), json!({"n": n, "m": m, "family": family.name()}));

    let scheme = match family {
        Family::Class3 => {
            let scheme = build_three_class(&bundle).map_err(certification)?;
            doc.insert("closed_form_match".into(), json!(true));
            let (eig, krein) = certify_eigen(&scheme, n, m, family)?;
            doc.insert("spectral".into(), eigen_report(&eig, &krein));
            doc.insert("krein_display".into(), display_check(&krein, n, m, family)?);
            doc.insert("q_structure".into(), report::q_flags(&q_structure(&krein, &[0, 1, 2, 3])));
            scheme
        }
        Family::Class5 => {
            let five = build_five_class(&bundle).map_err(certification)?;
            let closed = five_class_closed_form(n, m).is_some_and(|t| &t == five.tensor());
            if !closed {
                return Err(certification("five-class tensor differs from its closed form"));
            }
            doc.insert("closed_form_match".into(), json!(true));
            let (eig, krein) = certify_eigen(&five.scheme, n, m, family)?;
            doc.insert("spectral".into(), eigen_report(&eig, &krein));
            doc.insert("krein_display".into(), display_check(&krein, n, m, family)?);
            let bound = krein_bound_check(n, m);
            if krein.get(1, 2, 1) != &bound.value {
                return Err(certification("computed q_12^1 differs from (2n-m-1)/(m+1)"));
            }
            doc.insert(
                "krein_bound".into(),
                json!({"q_12^1": report::rat(krein.get(1, 2, 1)), "value": report::rat(&bound.value), "pass": bound.pass}),
            );
            let fibers = quotient_scheme(&five.scheme, &[0, 1, 2]).map_err(certification)?.fibers;
            let uni = is_uniform(five.rels(), &fibers).map_err(certification)?;
            doc.insert(
                "uniformity".into(),
                json!({"uniform": uni.uniform, "counterexample": uni.counterexample.map(|c| c.to_string())}),
            );
            let a4 = five.rels().relation(4);
            let a5 = five.rels().relation(5);
            doc.insert(
                "graphs".into(),
                json!({
                    "srg_A4": graph_json(is_srg(&a4)),
                    "srg_A5": graph_json(is_srg(&a5)),
                    "deza_A4": graph_json(is_deza(&a4).map_err(certification)?),
                    "deza_A5": graph_json(is_deza(&a5).map_err(certification)?),
                }),
            );
            five.scheme
        }
        Family::Class8 | Family::Fusion4 => {
            let five = build_five_class(&bundle).map_err(certification)?;
            let cover = double_cover(&five).map_err(certification)?;
            if family == Family::Class8 {
                let r = verify_cover_tables(&cover).map_err(certification)?;
                doc.insert("spectral".into(), eigen_report(&r.eigen, &r.krein));
                doc.insert(
                    "krein_display".into(),
                    json!({"index": r.krein_match.index, "ordering": r.krein_match.ordering, "matches": true}),
                );
                doc.insert(
                    "uniformity".into(),
                    json!({"uniform": r.uniformity.uniform, "counterexample": r.uniformity.counterexample.map(|c| c.to_string())}),
                );
                cover.scheme
            } else {
                let fusion = fusion_four(&cover).map_err(certification)?;
                let r = certify_fusion(&fusion, n, m).map_err(certification)?;
                doc.insert("spectral".into(), eigen_report(&r.eigen, &r.krein));
                doc.insert("q_structure".into(), report::q_flags(&r.structure));
                fusion
            }
        }
    };

    format::write_file(out, &format::scheme_to_text(scheme.rels())).map_err(io)?;
    doc.insert("scheme_file".into(), json!(out.display().to_string()));
    doc.insert("size".into(), json!(scheme.size()));
    doc.insert("classes".into(), json!(scheme.classes()));
    doc.insert("valencies".into(), json!(scheme.tensor().valencies()));
    doc.insert("intersection_tensor".into(), report::tensor(scheme.tensor()));
    doc.insert("verdict".into(), json!("certified"));
    doc.insert("elapsed_ms".into(), json!(report::elapsed_ms(start)));
    let doc = Value::Object(doc);
    let default_report = out.with_extension("json");
    write_report(report_path.unwrap_or(&default_report), &doc)?;
    Ok(doc)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum What {
    Mubh,
    Scheme,
}

/// Runs every applicable predicate on user files. Failures are `Verify` errors
/// naming the offending rows, pair or triple.
pub fn verify(what: What, files: &[PathBuf]) -> Result<Value> {
    let start = Instant::now();
    if files.is_empty() {
        return Err(usage("no input files"));
    }
    let doc = match what {
        What::Mubh => {
            let hs = load_hadamards(files, CliError::Verify)?;
            let (n, checks) = family_checks(&hs, &file_names(files)).map_err(CliError::Verify)?;
            json!({"what": "mubh", "n": n, "m": hs.len(), "checks": checks})
        }
        What::Scheme => {
            let [file] = files else {
                return Err(usage("verify --what scheme takes exactly one file"));
            };
            let text = format::read_file(file).map_err(io)?;
            let rels = format::parse_scheme(&text).map_err(|e| match e {
                FormatError::Scheme(s) => CliError::Verify(s.to_string()),
                other => usage(other),
            })?;
            let tensor = verify_scheme(&rels).map_err(|e| CliError::Verify(e.to_string()))?;
            json!({
                "what": "scheme",
                "size": rels.size(),
                "classes": rels.classes(),
                "valencies": tensor.valencies(),
                "intersection_tensor": report::tensor(&tensor),
            })
        }
    };
    let mut doc = doc;
    doc["command"] = json!("verify");
    doc["verdict"] = json!("pass");
    doc["elapsed_ms"] = json!(report::elapsed_ms(start));
    Ok(doc)
}

/// Recovers the Hadamard family from a five-class scheme file and re-certifies it.
pub fn extract(scheme_file: &Path, n: usize, m: usize, out: &Path) -> Result<Value> {
    let start = Instant::now();
    let text = format::read_file(scheme_file).map_err(io)?;
    let rels = format::parse_scheme(&text).map_err(|e| match e {
        FormatError::Scheme(s) => CliError::Verify(s.to_string()),
        other => usage(other),
    })?;
    if rels.classes() != 5 {
        return Err(certification(format!("expected a 5-class scheme, file has {} classes", rels.classes())));
    }
    let ex = extract_mubh(&rels, n, m).map_err(certification)?;
    let paths = write_family(out, &ex.hadamards)?;
    let reloaded = load_hadamards(&paths, CliError::Certification)?;
    let (_, checks) = family_checks(&reloaded, &file_names(&paths)).map_err(certification)?;
    let bundle = if m >= 2 { gramian(&reloaded, n) } else { gramian_relaxed(&reloaded, n) };
    let regenerated = build_five_class(&bundle.map_err(certification)?).map_err(certification)?;
    let normalized = rels.permuted(&ex.permutation).map_err(certification)?;
    if regenerated.rels() != &normalized {
        return Err(certification("regenerated scheme differs from the input under the recorded permutation"));
    }
    let doc = json!({
        "command": "extract",
        "parameters": {"n": n, "m": m, "family": Family::Class5.name()},
        "verdict": "certified",
        "files": file_names(&paths),
        "checks": checks,
        "permutation": ex.permutation,
        "regenerated_matches": true,
        "elapsed_ms": report::elapsed_ms(start),
    });
    write_report(&out.join("report.json"), &doc)?;
    Ok(doc)
}
