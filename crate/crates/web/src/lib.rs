//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Each export takes plain values and returns a JSON string. The `*_json`
//! functions do the work and are what the native tests call.

use bslab_core::arithmetic::{census, is_kronecker, mahler_measure, roots, CensusQuery, IntPolynomial};
use bslab_core::hyperbolic::{thin_part_report, HeatQuery, HyperbolicCylinder};
use serde_json::json;
use wasm_bindgen::prelude::*;

/// Largest census degree offered in the browser.
pub const DEMO_MAX_DEGREE: usize = 7;

/// Measure, roots and Kronecker status of a polynomial given leading
/// coefficient first, e.g. `"1 1 0 -1 -1 -1 -1 -1 0 1 1"`.
pub fn measure_json(coefficients: &str) -> Result<String, String> {
    let p = IntPolynomial::parse(coefficients).map_err(|e| e.to_string())?;
    let m = mahler_measure(&p).map_err(|e| e.to_string())?;
    let rs: Vec<[f64; 2]> = roots(&p).map_err(|e| e.to_string())?.iter().map(|z| [z.re, z.im]).collect();
    Ok(json!({
        "polynomial": p.to_string(),
        "degree": p.degree(),
        "mahler_measure": m,
        "kronecker": is_kronecker(&p),
        "roots": rs,
    })
    .to_string())
}

/// Monic integer polynomials of degree `n` with measure at most `theta`.
pub fn census_json(n: usize, theta: f64) -> Result<String, String> {
    if n > DEMO_MAX_DEGREE {
        return Err(format!("degree {n} is above the demo limit {DEMO_MAX_DEGREE}"));
    }
    let c = census(&CensusQuery::new(n, theta).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let entries: Vec<_> = c.entries.iter().map(|e| json!([e.polynomial.to_string(), e.measure])).collect();
    Ok(json!({
        "degree": n,
        "theta": theta,
        "count": c.count(),
        "min_m_above_1": c.min_m_above_1(),
        "entries": entries,
    })
    .to_string())
}

/// Thin-part report of the cylinder with core length `tau`, plus `f_t` on
/// a radial profile out to `rho_max`.
pub fn thin_part_json(tau: f64, t: f64, epsilon: f64, rho_max: f64) -> Result<String, String> {
    let c = HyperbolicCylinder::new(tau).map_err(|e| e.to_string())?;
    let q = HeatQuery::new(t, 2, 1e-12, epsilon).map_err(|e| e.to_string())?;
    let report = thin_part_report(&c, &q).map_err(|e| e.to_string())?;
    if !(rho_max > 0.0 && rho_max.is_finite()) {
        return Err(format!("rho_max = {rho_max} must be positive"));
    }
    let profile: Vec<[f64; 2]> = (0..=100)
        .map(|i| {
            let rho = rho_max * i as f64 / 100.0;
            let f = bslab_core::hyperbolic::f_t_cylinder(&c, rho, &q).unwrap_or(f64::NAN);
            [rho, f]
        })
        .collect();
    let mut v = serde_json::to_value(report).expect("plain record");
    v["profile"] = json!(profile);
    Ok(v.to_string())
}

#[wasm_bindgen]
pub fn measure(coefficients: &str) -> Result<String, JsError> {
    measure_json(coefficients).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn small_census(n: usize, theta: f64) -> Result<String, JsError> {
    census_json(n, theta).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn thin_part(tau: f64, t: f64, epsilon: f64, rho_max: f64) -> Result<String, JsError> {
    thin_part_json(tau, t, epsilon, rho_max).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::Value;

    fn parse(s: &str) -> Value {
        serde_json::from_str(s).unwrap()
    }

    #[test]
    fn lehmer_measure() {
        let v = parse(&measure_json("1 1 0 -1 -1 -1 -1 -1 0 1 1").unwrap());
        assert!((v["mahler_measure"].as_f64().unwrap() - 1.176280818).abs() < 1e-8);
        assert_eq!(v["roots"].as_array().unwrap().len(), 10);
        assert_eq!(v["kronecker"], false);
        assert!(measure_json("2 1").is_err());
        assert!(measure_json("x").is_err());
    }

    #[test]
    fn linear_census() {
        let v = parse(&census_json(1, 1.0).unwrap());
        assert_eq!(v["count"], 3);
        assert!(census_json(DEMO_MAX_DEGREE + 1, 1.1).is_err());
    }

    #[test]
    fn thin_part_profile_decreases() {
        let v = parse(&thin_part_json(0.1, 1.0, 0.5, 3.0).unwrap());
        assert!(v["ratio"].as_f64().unwrap() > 0.0);
        let prof = v["profile"].as_array().unwrap();
        assert_eq!(prof.len(), 101);
        let f: Vec<f64> = prof.iter().map(|p| p[1].as_f64().unwrap()).collect();
        assert!(f.windows(2).all(|w| w[1] <= w[0] + 1e-15));
        assert!(thin_part_json(0.6, 1.0, 0.5, 3.0).is_err());
    }
}
