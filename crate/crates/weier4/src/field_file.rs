//! Text serialization for sampled scalar fields.
//!
//! Layout: a header line `h <spacing> <role> <rows> <cols>` followed by
//! the values in row-major order, one grid row per line. Roles are
//! `nu`, `K`, and `kappa`.

use std::io::Write;

use weier4_core::correspond::{FieldRole, ScalarField};

use crate::error::{AppError, AppResult};

pub fn role_name(role: FieldRole) -> &'static str {
    match role {
        FieldRole::Nu => "nu",
        FieldRole::GaussK => "K",
        FieldRole::NormalKappa => "kappa",
    }
}

fn role_from_name(name: &str) -> AppResult<FieldRole> {
    match name {
        "nu" => Ok(FieldRole::Nu),
        "K" => Ok(FieldRole::GaussK),
        "kappa" => Ok(FieldRole::NormalKappa),
        other => Err(AppError::Invalid(format!(
            "field file: unknown role `{other}` (expected nu, K, or kappa)"
        ))),
    }
}

pub fn write_field(out: &mut dyn Write, field: &ScalarField) -> AppResult<()> {
    writeln!(
        out,
        "h {:.16e} {} {} {}",
        field.h(),
        role_name(field.role()),
        field.rows(),
        field.cols()
    )?;
    let cols = field.cols();
    for row in field.values().chunks(cols) {
        let mut line = String::new();
        for (i, v) in row.iter().enumerate() {
            if i > 0 {
                line.push(' ');
            }
            line.push_str(&format!("{v:.16e}"));
        }
        writeln!(out, "{line}")?;
    }
    Ok(())
}

pub fn parse_field(text: &str) -> AppResult<ScalarField> {
    let mut tokens = text.split_whitespace();
    let magic = tokens
        .next()
        .ok_or_else(|| AppError::Invalid("field file: empty input".into()))?;
    if magic != "h" {
        return Err(AppError::Invalid(format!(
            "field file: header must start with `h`, got `{magic}`"
        )));
    }
    let mut next = |what: &str| {
        tokens
            .next()
            .ok_or_else(|| AppError::Invalid(format!("field file: missing {what}")))
            .map(|s| s.to_string())
    };
    let h: f64 = next("spacing")?
        .parse()
        .map_err(|_| AppError::Invalid("field file: bad spacing".into()))?;
    let role = role_from_name(&next("role")?)?;
    let rows: usize = next("row count")?
        .parse()
        .map_err(|_| AppError::Invalid("field file: bad row count".into()))?;
    let cols: usize = next("column count")?
        .parse()
        .map_err(|_| AppError::Invalid("field file: bad column count".into()))?;
    let mut values = Vec::with_capacity(rows * cols);
    for tok in tokens.by_ref() {
        let v: f64 = tok
            .parse()
            .map_err(|_| AppError::Invalid(format!("field file: bad value `{tok}`")))?;
        values.push(v);
    }
    if values.len() != rows * cols {
        return Err(AppError::Invalid(format!(
            "field file: expected {} values, found {}",
            rows * cols,
            values.len()
        )));
    }
    ScalarField::new(role, h, rows, cols, values).map_err(AppError::Core)
}

pub fn read_field(path: &std::path::Path) -> AppResult<ScalarField> {
    let text = std::fs::read_to_string(path)?;
    parse_field(&text)
}

pub fn save_field(path: &std::path::Path, field: &ScalarField) -> AppResult<()> {
    let mut buf = Vec::new();
    write_field(&mut buf, field)?;
    std::fs::write(path, buf)?;
    Ok(())
}
