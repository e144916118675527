// Copyright 2026 The dpleak Authors
// SPDX-License-Identifier: Apache-2.0

//! Text formats: channel-matrix CSV, prior specs and prior files.
//!
//! Matrix CSV: the first record is an empty cell followed by the output
//! labels; every following record is an input label followed by its entries.
//! Entries may be plain decimals or fractions `a/b`.

use std::io::{Read, Write};
use std::path::Path;

use crate::channel::{Alphabet, ChannelMatrix, PriorDistribution};
use crate::error::{Error, Result};

/// Parses a decimal or an `a/b` fraction.
pub fn parse_number(s: &str) -> Result<f64> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a number: {s:?}"));
    match s.split_once('/') {
        Some((a, b)) => {
            let a: f64 = a.trim().parse().map_err(|_| bad())?;
            let b: f64 = b.trim().parse().map_err(|_| bad())?;
            if b == 0.0 {
                return Err(bad());
            }
            Ok(a / b)
        }
        None => s.parse().map_err(|_| bad()),
    }
}

/// Formats with 17 significant digits, positional when the exponent is
/// moderate and scientific otherwise.
pub fn format_sig17(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if !(-6..=16).contains(&exp) {
        return sci;
    }
    let negative = mantissa.starts_with('-');
    let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
    let mut out = String::new();
    if negative {
        out.push('-');
    }
    if exp < 0 {
        out.push_str("0.");
        out.extend(std::iter::repeat_n('0', (-exp - 1) as usize));
        out.push_str(&digits);
    } else {
        let int_len = exp as usize + 1;
        out.push_str(&digits[..int_len]);
        out.push('.');
        out.push_str(&digits[int_len..]);
    }
    out
}

/// Raw parse without the stochasticity check, so callers can list violations.
pub fn parse_matrix_raw<R: Read>(reader: R) -> Result<(Alphabet, Alphabet, Vec<Vec<f64>>)> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(reader);
    let mut records = rdr.records();
    let header = records
        .next()
        .ok_or_else(|| Error::Parse("empty matrix file".into()))??;
    if header.get(0).is_some_and(|c| !c.is_empty()) {
        return Err(Error::Parse("header must start with an empty cell".into()));
    }
    let output = Alphabet::new(header.iter().skip(1).map(str::to_string))?;
    let mut in_labels = Vec::new();
    let mut rows = Vec::new();
    for rec in records {
        let rec = rec?;
        if rec.iter().all(str::is_empty) {
            continue;
        }
        if rec.len() != output.len() + 1 {
            return Err(Error::Parse(format!(
                "row {:?} has {} entries, expected {}",
                rec.get(0).unwrap_or(""),
                rec.len().saturating_sub(1),
                output.len()
            )));
        }
        in_labels.push(rec[0].to_string());
        rows.push(
            rec.iter()
                .skip(1)
                .map(parse_number)
                .collect::<Result<Vec<_>>>()?,
        );
    }
    Ok((Alphabet::new(in_labels)?, output, rows))
}

pub fn parse_matrix<R: Read>(reader: R) -> Result<ChannelMatrix> {
    let (input, output, rows) = parse_matrix_raw(reader)?;
    ChannelMatrix::new(input, output, rows)
}

pub fn read_matrix(path: impl AsRef<Path>) -> Result<ChannelMatrix> {
    parse_matrix(std::fs::File::open(path)?)
}

pub fn write_matrix<W: Write>(m: &ChannelMatrix, writer: W) -> Result<()> {
    let mut wtr = csv::WriterBuilder::new().from_writer(writer);
    let mut header = vec![String::new()];
    header.extend(m.output().labels().iter().cloned());
    wtr.write_record(&header)?;
    for (label, row) in m.input().labels().iter().zip(m.rows()) {
        let mut rec = vec![label.clone()];
        rec.extend(row.iter().map(|&x| format_sig17(x)));
        wtr.write_record(&rec)?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn write_matrix_file(m: &ChannelMatrix, path: impl AsRef<Path>) -> Result<()> {
    write_matrix(m, std::fs::File::create(path)?)
}

/// Prior file: one `label,probability` pair per line, in any label order.
pub fn parse_prior_file(text: &str, alphabet: &Alphabet) -> Result<PriorDistribution> {
    let mut probs = vec![None; alphabet.len()];
    for line in text.lines().map(str::trim) {
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (label, p) = line
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("expected label,probability: {line:?}")))?;
        let i = alphabet
            .index_of(label.trim())
            .ok_or_else(|| Error::Parse(format!("unknown label {label:?}")))?;
        probs[i] = Some(parse_number(p)?);
    }
    let probs = probs
        .into_iter()
        .enumerate()
        .map(|(i, p)| p.ok_or_else(|| Error::Parse(format!("missing {}", alphabet.label(i)))))
        .collect::<Result<Vec<_>>>()?;
    PriorDistribution::new(alphabet.clone(), probs)
}

/// `uniform`, `file:PATH` or inline `p=0.1,0.2,...` (in alphabet order).
pub fn parse_prior_spec(spec: &str, alphabet: &Alphabet) -> Result<PriorDistribution> {
    let spec = spec.trim();
    if spec == "uniform" {
        Ok(PriorDistribution::uniform(alphabet.clone()))
    } else if let Some(path) = spec.strip_prefix("file:") {
        parse_prior_file(&std::fs::read_to_string(path)?, alphabet)
    } else if let Some(list) = spec.strip_prefix("p=") {
        let probs = list
            .split(',')
            .map(parse_number)
            .collect::<Result<Vec<_>>>()?;
        PriorDistribution::new(alphabet.clone(), probs)
    } else {
        Err(Error::Parse(format!("unknown prior spec {spec:?}")))
    }
}
