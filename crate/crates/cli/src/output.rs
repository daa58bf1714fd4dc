//! Output sinks and CSV projections. JSON is canonical; CSV is a lossy
//! convenience view over the same report value.

use crate::config::RunConfig;
use anyhow::Context;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputKind {
    Json,
    Csv,
}

pub fn emit(cfg: &RunConfig, text: &str) -> anyhow::Result<()> {
    match &cfg.out {
        Some(path) => {
            std::fs::write(path, text).with_context(|| format!("writing {path}"))?;
        }
        None => println!("{text}"),
    }
    Ok(())
}

fn arr<'v>(value: &'v Value, key: &str) -> anyhow::Result<&'v Vec<Value>> {
    value
        .get(key)
        .and_then(Value::as_array)
        .ok_or_else(|| anyhow::anyhow!("missing array field {key}"))
}

pub fn spectrum_csv(value: &Value) -> anyhow::Result<String> {
    let eig = arr(value, "eigenvalues")?;
    let res = arr(value, "residuals")?;
    let mut s = String::from("index,eigenvalue,residual\n");
    for (i, (e, r)) in eig.iter().zip(res).enumerate() {
        s.push_str(&format!("{i},{},{}\n", e, r));
    }
    Ok(s)
}

pub fn validation_csv(value: &Value) -> anyhow::Result<String> {
    let checks = arr(value, "checks")?;
    let mut s = String::from("check,pass,detail\n");
    for c in checks {
        s.push_str(&format!(
            "{},{},{:?}\n",
            c.get("name").and_then(Value::as_str).unwrap_or(""),
            c.get("pass").and_then(Value::as_bool).unwrap_or(false),
            c.get("detail").and_then(Value::as_str).unwrap_or(""),
        ));
    }
    Ok(s)
}

pub fn map_verify_csv(value: &Value) -> anyhow::Result<String> {
    let ed = arr(value, "ed")?;
    let predicted = arr(value, "predicted")?;
    let naive = arr(value, "naive_predicted")?;
    let mut s = String::from("index,ed,predicted,naive_predicted\n");
    for (i, ((a, b), c)) in ed.iter().zip(predicted).zip(naive).enumerate() {
        s.push_str(&format!("{i},{a},{b},{c}\n"));
    }
    Ok(s)
}

pub fn gap_scan_csv(value: &Value) -> anyhow::Result<String> {
    let points = arr(value, "points")?;
    let argmin = value
        .get("argmin_index")
        .and_then(Value::as_u64)
        .unwrap_or(u64::MAX);
    let mut s = String::from("ratio,ed_gap,chain_gap,argmin\n");
    for (i, p) in points.iter().enumerate() {
        let ed = p
            .get("ed_gap")
            .and_then(Value::as_f64)
            .map(|g| g.to_string())
            .unwrap_or_default();
        s.push_str(&format!(
            "{},{},{},{}\n",
            p.get("ratio").and_then(Value::as_f64).unwrap_or(f64::NAN),
            ed,
            p.get("chain_gap")
                .and_then(Value::as_f64)
                .unwrap_or(f64::NAN),
            if i as u64 == argmin { "*" } else { "" },
        ));
    }
    Ok(s)
}

pub fn wilson_csv(value: &Value) -> anyhow::Result<String> {
    let loops = arr(value, "loops")?;
    let mut s = String::from("height,width,area,edge_count,gamma,ed_value,trial_value\n");
    for l in loops {
        let gammas = arr(l, "gamma_grid")?;
        let values = arr(l, "ed_values")?;
        let h = l.get("height").and_then(Value::as_u64).unwrap_or(0);
        let w = l.get("width").and_then(Value::as_u64).unwrap_or(0);
        let area = l.get("area").and_then(Value::as_u64).unwrap_or(0);
        let lcount = l.get("edge_count").and_then(Value::as_u64).unwrap_or(0);
        let trial = l.get("trial").cloned().unwrap_or(Value::Null);
        let tn = trial
            .get("num_coeffs")
            .and_then(Value::as_array)
            .and_then(|v| Some((v.first()?.as_i64()?, v.get(1)?.as_i64()?)));
        let td = trial
            .get("den_coeffs")
            .and_then(Value::as_array)
            .and_then(|v| Some((v.first()?.as_i64()?, v.get(1)?.as_i64()?)));
        for (g, val) in gammas.iter().zip(values) {
            let g = g.as_f64().unwrap_or(f64::NAN);
            let tv = match (tn, td) {
                (Some((n0, n2)), Some((d0, d2))) => {
                    let g2 = g * g;
                    ((n0 as f64 + n2 as f64 * g2) / (d0 as f64 + d2 as f64 * g2)).to_string()
                }
                _ => String::new(),
            };
            s.push_str(&format!(
                "{h},{w},{area},{lcount},{g},{},{tv}\n",
                val.as_f64().unwrap_or(f64::NAN)
            ));
        }
    }
    Ok(s)
}
