//! JSON report helpers. Every rational is written as a `"num/den"` string and
//! every count as a JSON integer, so reports never contain floats.

use std::time::Instant;

use mubh_core::matrix::{RatMatrix, Rational};
use mubh_core::scheme::IntersectionTensor;
use mubh_core::spectral::{KreinTensor, QStructure};
use serde_json::{json, Value};

pub fn rat(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn rat_table(m: &RatMatrix) -> Value {
    (0..m.rows()).map(|i| m.row(i).iter().map(rat).collect::<Vec<_>>()).collect()
}

pub fn rat_list(v: &[Rational]) -> Value {
    v.iter().map(rat).collect()
}

/// `tensor[i][j][k] = p_ij^k`.
pub fn tensor(t: &IntersectionTensor) -> Value {
    let w = t.classes() + 1;
    (0..w).map(|i| (0..w).map(|j| (0..w).map(|k| t.get(i, j, k)).collect::<Vec<_>>()).collect::<Vec<_>>()).collect()
}

/// All Krein matrices `B_i*`, with `B_i*[j][k] = q_ij^k`.
pub fn krein_matrices(k: &KreinTensor) -> Value {
    (0..=k.classes()).map(|i| rat_table(&k.krein_matrix(i))).collect()
}

pub fn q_flags(s: &QStructure) -> Value {
    json!({
        "q_polynomial": s.q_polynomial,
        "q_bipartite": s.q_bipartite,
        "q_antipodal": s.q_antipodal,
    })
}

pub fn elapsed_ms(start: Instant) -> u64 {
    start.elapsed().as_millis() as u64
}

pub fn to_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports are plain JSON values");
    s.push('\n');
    s
}
