//! JSON records printed by the subcommands.
//!
//! Non-finite numbers become `null`. Finite doubles are written in their
//! shortest round-trip form, so re-parsing gives back the same bits.

use pointprob_core::calibrate::{CalibrationRow, Method};
use pointprob_core::monotone::{MonotoneReport, StrongMonotoneReport};
use pointprob_core::oracle::{Inversion, McEstimate, Pmf};
use pointprob_core::tilting::{EssentialBounds, Side};
use pointprob_core::{EstimateResult, MgfInterval, MomentSummary, TailEstimate};
use serde_json::{json, Value};

pub fn num(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}

fn opt(x: Option<f64>) -> Value {
    x.map_or(Value::Null, num)
}

fn bound(b: Option<i64>) -> Value {
    b.map_or(Value::Null, |v| json!(v))
}

pub fn domain(i: &MgfInterval) -> Value {
    json!({
        "lo": num(i.lo),
        "hi": num(i.hi),
        "lo_open": i.lo_open,
        "hi_open": i.hi_open,
    })
}

pub fn summary(
    label: Option<&str>,
    s: &MomentSummary,
    bounds: &EssentialBounds,
    dom: &MgfInterval,
) -> Value {
    let mut v = json!({
        "label": label,
        "mu": num(s.mu),
        "sigma_sq": num(s.sigma_sq),
        "eta": num(s.eta),
        "tau": opt(s.tau),
        "ess_inf": bound(bounds.lower),
        "ess_sup": bound(bounds.upper),
        "mgf_domain": domain(dom),
    });
    if s.tau.is_none() {
        v["note"] = json!("degenerate model: zero variance, tau undefined");
    }
    v
}

fn gaussian_fields(r: &EstimateResult) -> Value {
    json!({
        "t": num(r.t),
        "sigma": num(r.sigma),
        "tau": num(r.tau),
        "epsilon": opt(r.epsilon),
        "flags": {
            "sigma_large_enough": r.flags.sigma_large_enough,
            "tau_small_enough": r.flags.tau_small_enough,
            "epsilon_le_pi": r.flags.epsilon_le_pi,
        },
    })
}

pub fn gaussian(n: i64, r: &EstimateResult) -> Value {
    json!({
        "method": "gaussian",
        "n": n,
        "estimate": num(r.estimate),
        "log_estimate": num(r.log_estimate),
        "error_term": num(r.error_term),
        "diagnostics": gaussian_fields(r),
    })
}

pub fn tilted(n: i64, tail: &TailEstimate, t_x: f64, tilted_check: &MonotoneReport) -> Value {
    let sol = &tail.solution;
    let mut diag = gaussian_fields(&tail.estimate);
    diag["t"] = num(t_x);
    diag["theta"] = num(sol.theta);
    diag["psi"] = num(sol.psi_at_theta);
    diag["rate"] = num(tail.rate);
    diag["sigma_y"] = num(sol.tilted_moments.sigma());
    diag["eta_y"] = num(sol.tilted_moments.eta);
    diag["tau_y"] = opt(sol.tilted_moments.tau);
    diag["residual"] = num(sol.residual);
    diag["iterations"] = json!(sol.iterations);
    diag["tilted_monotone"] = json!(tilted_check.is_monotone);
    json!({
        "method": "tilted",
        "n": n,
        "estimate": num(tail.estimate.estimate),
        "log_estimate": num(tail.estimate.log_estimate),
        "error_term": num(tail.estimate.error_term),
        "diagnostics": diag,
    })
}

pub fn exact(n: i64, pmf: &Pmf, eps: f64) -> Value {
    json!({
        "method": "exact",
        "n": n,
        "estimate": num(pmf.get(n)),
        "defect": num(pmf.tail_defect),
        "eps": num(eps),
        "window": [pmf.offset, pmf.end()],
    })
}

pub fn inversion(n: i64, inv: &Inversion) -> Value {
    json!({
        "method": "invert",
        "n": n,
        "estimate": num(inv.probability),
        "imag_residual": num(inv.imag_residual),
        "quad_points": inv.quad_points,
    })
}

pub fn monte_carlo(n: i64, mc: &McEstimate, seed: u64) -> Value {
    json!({
        "method": "mc",
        "n": n,
        "estimate": num(mc.probability),
        "stderr": num(mc.stderr),
        "samples": mc.samples,
        "seed": seed,
    })
}

pub fn monotone(r: &MonotoneReport) -> Value {
    json!({
        "is_monotone": r.is_monotone,
        "worst_increase": num(r.worst_increase),
        "worst_location": num(r.worst_location),
        "grid_size": r.grid_size,
        "tolerance": num(r.tolerance),
        "note": "grid check on [0, pi]; a pass is evidence, not a proof",
    })
}

pub fn strong_monotone(component: usize, family: &str, r: &StrongMonotoneReport) -> Value {
    json!({
        "component": component,
        "distribution": family,
        "all_monotone": r.all_monotone,
        "per_theta": r.per_theta.iter().map(|(theta, rep)| json!({
            "theta": num(*theta),
            "is_monotone": rep.is_monotone,
            "worst_increase": num(rep.worst_increase),
            "worst_location": num(rep.worst_location),
        })).collect::<Vec<_>>(),
    })
}

pub fn boundary(side: Side, value: Option<i64>, probability: f64) -> Value {
    json!({
        "side": side.name(),
        "value": bound(value),
        "probability": num(probability),
    })
}

fn cell(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("{x}")
    }
}

pub fn calibration_header(method: Method) -> String {
    format!(
        "model\tn\tt\texact\testimate\tabs_error\t{}\tratio\trel_error",
        method.error_column()
    )
}

pub fn calibration_row(r: &CalibrationRow) -> String {
    format!(
        "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
        r.model,
        r.n,
        cell(r.t),
        cell(r.exact),
        cell(r.estimate),
        cell(r.abs_error),
        cell(r.error_term),
        cell(r.ratio),
        cell(r.rel_error)
    )
}

/// Closing row: the largest ratio in the ratio column, other cells empty.
pub fn calibration_footer(max_ratio: Option<f64>) -> String {
    let v = max_ratio.map_or_else(|| "nan".to_string(), cell);
    format!("max_ratio\t\t\t\t\t\t\t{v}\t")
}
