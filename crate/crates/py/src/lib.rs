//! Thin Python bindings: every entry point takes and returns JSON strings,
//! so the Python side needs no bespoke types.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde::Deserialize;
use serde_json::json;

use jacrank::charsum::{self, Base, CurveSpec};
use jacrank::criteria::{self, Route};
use jacrank::cyclo;
use jacrank::ff::{make_field, FieldSpec, FqElem};
use jacrank::zeta;

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

#[derive(Deserialize)]
struct CurveFile {
    p: u64,
    h: usize,
    m: u64,
    exponents: Vec<u64>,
    branch: Vec<serde_json::Value>,
    base: BaseFile,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum BaseFile {
    Name(String),
    Superelliptic { m0: u64, f0: Vec<serde_json::Value> },
}

fn elem(field: &FieldSpec, v: &serde_json::Value) -> PyResult<FqElem> {
    match v {
        serde_json::Value::Number(n) => Ok(field.from_int(
            n.as_i64().ok_or_else(|| err("field element out of range"))?,
        )),
        serde_json::Value::Array(xs) => {
            if xs.len() > field.h {
                return Err(err("too many coefficients for the field degree"));
            }
            let mut coeffs = vec![0u64; field.h];
            for (i, x) in xs.iter().enumerate() {
                let n = x.as_i64().ok_or_else(|| err("non-integer coefficient"))?;
                coeffs[i] = n.rem_euclid(field.p as i64) as u64;
            }
            Ok(FqElem { coeffs })
        }
        _ => Err(err("field element must be an integer or coefficient array")),
    }
}

fn parse_curve(text: &str) -> PyResult<CurveSpec> {
    let cf: CurveFile = serde_json::from_str(text).map_err(err)?;
    let field = make_field(cf.p, cf.h).map_err(err)?;
    let branch = cf
        .branch
        .iter()
        .map(|v| elem(&field, v))
        .collect::<PyResult<Vec<_>>>()?;
    let base = match cf.base {
        BaseFile::Name(s) if s == "P1" => Base::P1,
        BaseFile::Name(s) => return Err(err(format!("unknown base {s:?}"))),
        BaseFile::Superelliptic { m0, f0 } => Base::Superelliptic {
            m0,
            f0: f0.iter().map(|v| elem(&field, v)).collect::<PyResult<Vec<_>>>()?,
        },
    };
    CurveSpec::new(field, cf.m, cf.exponents, branch, base).map_err(err)
}

/// Deuring polynomial mod p with its roots in F_{p^2}.
#[pyfunction]
fn deuring_json(p: u64) -> PyResult<String> {
    let d = criteria::deuring(p).map_err(err)?;
    Ok(json!({"p": p, "field": d.field, "coeffs": d.coeffs, "roots": d.roots}).to_string())
}

/// Jacobi sum over F_{p^h} (h defaults to the order of p mod m).
#[pyfunction]
#[pyo3(signature = (m, p, a, h=None))]
fn jacobi_json(m: u64, p: u64, a: Vec<u64>, h: Option<usize>) -> PyResult<String> {
    let e = criteria::exponent_data(m, &a, p).map_err(err)?;
    let field = make_field(p, h.unwrap_or(e.h)).map_err(err)?;
    let j = charsum::jacobi_sum(&field, m, &a).map_err(err)?;
    let valuations = cyclo::valuations_auto(&j, m, p).map_err(err)?;
    Ok(json!({
        "field": field, "m": m, "a": a,
        "J": j.coeffs, "abs_square": j.abs_square(), "valuations": valuations,
    })
    .to_string())
}

/// Stickelberger exponent data and the Thm 6.5 verdicts.
#[pyfunction]
fn stickelberger_json(m: u64, p: u64, a: Vec<u64>) -> PyResult<String> {
    let e = criteria::exponent_data(m, &a, p).map_err(err)?;
    Ok(json!({
        "m": m, "p": p, "a": a, "h": e.h, "b": e.b,
        "c_h": e.c_h, "e_h": e.e_h, "d_u": &e.d_u[1..], "o_t": e.o_t,
        "theta": e.theta_multiset(),
        "not_supersingular": criteria::not_supersingular_test(&e),
        "not_prank0": criteria::not_prank0_test(&e),
    })
    .to_string())
}

/// Brute-force zeta data for a curve-spec JSON document.
#[pyfunction]
#[pyo3(signature = (curve, threads=1, max_terms=1_000_000_000))]
fn zeta_json(curve: &str, threads: usize, max_terms: u128) -> PyResult<String> {
    let c = parse_curve(curve)?;
    let z = zeta::zeta_numerator(&c, threads, max_terms).map_err(err)?;
    Ok(json!({
        "field": c.field, "counts": z.counts, "l_coeffs": z.l_coeffs,
        "genus": z.genus, "prank": z.prank, "supersingular": z.supersingular,
    })
    .to_string())
}

/// Multi-route p-rank verdicts with the agreement flag.
#[pyfunction]
#[pyo3(signature = (curve, route="all", threads=1, max_terms=1_000_000_000))]
fn prank_json(curve: &str, route: &str, threads: usize, max_terms: u128) -> PyResult<String> {
    let c = parse_curve(curve)?;
    let routes = match route {
        "criterion" => vec![Route::Criterion],
        "oracle" => vec![Route::Oracle],
        "cartier" => vec![Route::Cartier],
        "all" => vec![Route::Criterion, Route::Oracle, Route::Cartier],
        other => return Err(err(format!("unknown route {other:?}"))),
    };
    let mut verdicts = Vec::new();
    for r in routes {
        match criteria::run_route(&c, r, threads, max_terms) {
            Ok(v) => verdicts.push(v),
            Err(jacrank::Error::WrongShape(_)) if route == "all" => {}
            Err(e) => return Err(err(e)),
        }
    }
    let agree = criteria::routes_agree(&verdicts);
    Ok(json!({"field": c.field, "verdicts": verdicts, "agree": agree}).to_string())
}

#[pymodule]
fn jacrank_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(deuring_json, m)?)?;
    m.add_function(wrap_pyfunction!(jacobi_json, m)?)?;
    m.add_function(wrap_pyfunction!(stickelberger_json, m)?)?;
    m.add_function(wrap_pyfunction!(zeta_json, m)?)?;
    m.add_function(wrap_pyfunction!(prank_json, m)?)?;
    Ok(())
}
