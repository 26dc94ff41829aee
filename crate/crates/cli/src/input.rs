use std::path::Path;

use serde::de::DeserializeOwned;

use crate::error::CliError;

/// Parses a JSON file, reporting the line and column of the first problem.
pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Unreadable {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| CliError::Malformed {
        path: path.to_path_buf(),
        line: e.line(),
        column: e.column(),
        message: strip_position(&e.to_string()),
    })
}

fn strip_position(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(i) => msg[..i].to_string(),
        None => msg.to_string(),
    }
}

/// Parses `az,colat` in radians.
pub fn parse_point(s: &str) -> Result<hemifill::SpherePointF64, CliError> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [az, colat] = parts.as_slice() else {
        return Err(CliError::Usage(format!("point `{s}` must be `azimuth,colatitude`")));
    };
    let num = |x: &str| {
        x.parse::<f64>()
            .map_err(|_| CliError::Usage(format!("point `{s}`: `{x}` is not a number")))
    };
    hemifill::sphere::SpherePoint::new(num(az)?, num(colat)?).map_err(|e| CliError::Usage(format!("point `{s}`: {e}")))
}

pub fn parse_list(s: &str) -> Result<Vec<usize>, CliError> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("`{x}` is not a positive integer")))
        })
        .collect()
}
