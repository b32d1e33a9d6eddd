//! Norm sources: `builtin:<label>` shorthands and JSON spec files.

use std::path::Path;

use isoplane::{NormParseError, NormSpec};

use crate::CliError;

/// The builtin labels, with a one-line description each.
pub const BUILTINS: &[(&str, &str)] = &[
    ("builtin:l1", "the l1 plane (diamond unit ball)"),
    ("builtin:l2", "the Euclidean plane (round unit ball)"),
    ("builtin:linf", "the sup-norm plane (square unit ball)"),
    ("builtin:lp?p=<v>", "the lp plane for p in [1, inf], e.g. builtin:lp?p=1.5"),
    ("builtin:hex", "the hexagonal linf-l1 mixed plane"),
];

/// Resolve a `--norm` source: a builtin label or a path to a JSON document.
pub fn load_norm(src: &str) -> Result<(String, NormSpec), CliError> {
    if let Some(name) = src.strip_prefix("builtin:") {
        return builtin(name);
    }
    let path = Path::new(src);
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Failure(format!("cannot read norm file {src}: {e}")))?;
    let spec = NormSpec::from_json_str(&text).map_err(|e| match e {
        NormParseError::Json(err) => CliError::Failure(format!(
            "malformed norm document {src} (line {}, column {}): {err}",
            err.line(),
            err.column()
        )),
        NormParseError::Spec(err) => CliError::Failure(format!("invalid norm in {src}: {err}")),
    })?;
    let label = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| src.to_string());
    Ok((label, spec))
}

fn builtin(name: &str) -> Result<(String, NormSpec), CliError> {
    let spec = match name {
        "l1" => NormSpec::l1(),
        "l2" => NormSpec::l2(),
        "linf" => NormSpec::linf(),
        "hex" => NormSpec::hexagonal(),
        other => {
            if let Some(raw) = other.strip_prefix("lp?p=") {
                let p = if raw == "inf" {
                    f64::INFINITY
                } else {
                    raw.parse::<f64>().map_err(|_| {
                        CliError::Usage(format!("cannot parse exponent in builtin:lp?p={raw}"))
                    })?
                };
                NormSpec::lp(p)
                    .map_err(|e| CliError::Failure(format!("invalid builtin exponent: {e}")))?
            } else {
                return Err(CliError::Usage(format!(
                    "unknown builtin norm {name:?}; see `isoplane list-norms`"
                )));
            }
        }
    };
    Ok((format!("builtin:{name}"), spec))
}
