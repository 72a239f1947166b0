//! Trajectory and report files. Every float is written with Rust's shortest
//! round-trip formatting, so parsing a file gives back the exact bits.

use std::fs;
use std::io::Write;
use std::path::Path;

use polygen_core::engine::{OrderingRule, Trajectory};
use polygen_core::numerics::OrderedVector;
use polygen_core::Complex64;
use serde::Serialize;

use crate::error::{CliError, CliResult};

pub fn format_float(x: f64) -> String {
    format!("{x:?}")
}

/// `re` for real values, otherwise `re+imi` / `re-imi`.
pub fn format_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format_float(z.re)
    } else if z.im.is_sign_negative() {
        format!("{}-{}i", format_float(z.re), format_float(-z.im))
    } else {
        format!("{}+{}i", format_float(z.re), format_float(z.im))
    }
}

pub fn rule_name(rule: OrderingRule) -> String {
    match rule {
        OrderingRule::Lexicographic => "lexicographic".into(),
        OrderingRule::Contiguity => "contiguity".into(),
        OrderingRule::FixedMu(idx) => format!("fixed-mu {}", idx.mu()),
        OrderingRule::Random { seed } => format!("random (seed {seed})"),
    }
}

/// Top-generation states written out as vectors in the presentation order.
#[derive(Debug, Clone, Serialize)]
pub struct Presented {
    pub generation: usize,
    pub presentation: OrderingRule,
    pub times: Vec<Complex64>,
    pub non_generic: Vec<bool>,
    /// Ambiguity of the lifts below, or of the presentation order itself.
    pub ambiguous: Vec<bool>,
    pub states: Vec<OrderedVector>,
}

impl Presented {
    pub fn new(traj: &Trajectory, rule: OrderingRule) -> CliResult<Self> {
        let (states, flags) = traj.ordered(rule)?;
        let ambiguous = traj
            .meta
            .ambiguous
            .iter()
            .zip(&flags)
            .map(|(a, b)| *a || *b)
            .collect();
        Ok(Presented {
            generation: traj.meta.depth,
            presentation: rule,
            times: traj.meta.times.clone(),
            non_generic: traj.meta.non_generic.clone(),
            ambiguous,
            states,
        })
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn arity(&self) -> usize {
        self.states.first().map_or(0, OrderedVector::len)
    }

    fn comment(&self) -> String {
        format!(
            "# generation {}: unordered zero sets, columns in {} order\n",
            self.generation,
            rule_name(self.presentation)
        )
    }
}

fn csv_bytes<F>(comment: Option<String>, header: Vec<String>, rows: F) -> CliResult<Vec<u8>>
where
    F: Fn(&mut csv::Writer<&mut Vec<u8>>) -> csv::Result<()>,
{
    let mut buf = comment.map(String::into_bytes).unwrap_or_default();
    {
        let mut w = csv::Writer::from_writer(&mut buf);
        w.write_record(&header).and_then(|_| rows(&mut w)).map_err(csv_error)?;
        w.flush().map_err(|e| CliError::io("<csv buffer>", e))?;
    }
    Ok(buf)
}

fn csv_error(e: csv::Error) -> CliError {
    CliError::io("<csv buffer>", std::io::Error::other(e))
}

/// `ell,t,flag_nongeneric,flag_ambiguous,re_x1,im_x1,...`.
pub fn trajectory_csv(p: &Presented) -> CliResult<Vec<u8>> {
    let mut header: Vec<String> = ["ell", "t", "flag_nongeneric", "flag_ambiguous"].map(String::from).to_vec();
    for n in 1..=p.arity() {
        header.push(format!("re_x{n}"));
        header.push(format!("im_x{n}"));
    }
    csv_bytes(Some(p.comment()), header, |w| {
        for (ell, state) in p.states.iter().enumerate() {
            let mut row = vec![
                ell.to_string(),
                format_complex(p.times[ell]),
                u8::from(p.non_generic[ell]).to_string(),
                u8::from(p.ambiguous[ell]).to_string(),
            ];
            for z in state.as_slice() {
                row.push(format_float(z.re));
                row.push(format_float(z.im));
            }
            w.write_record(&row)?;
        }
        Ok(())
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Part {
    Re,
    Im,
}

impl Part {
    pub fn of(self, z: Complex64) -> f64 {
        match self {
            Part::Re => z.re,
            Part::Im => z.im,
        }
    }

    pub fn prefix(self) -> &'static str {
        match self {
            Part::Re => "re",
            Part::Im => "im",
        }
    }
}

/// `ell,re_x1,...,re_xN` (or the imaginary parts).
pub fn series_csv(p: &Presented, part: Part) -> CliResult<Vec<u8>> {
    let mut header = vec!["ell".to_string()];
    header.extend((1..=p.arity()).map(|n| format!("{}_x{n}", part.prefix())));
    csv_bytes(Some(p.comment()), header, |w| {
        for (ell, state) in p.states.iter().enumerate() {
            let mut row = vec![ell.to_string()];
            row.extend(state.as_slice().iter().map(|&z| format_float(part.of(z))));
            w.write_record(&row)?;
        }
        Ok(())
    })
}

pub fn json_bytes<T: Serialize>(value: &T) -> CliResult<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(value).map_err(|e| CliError::io("<json buffer>", e.into()))?;
    bytes.push(b'\n');
    Ok(bytes)
}

/// Write through a temporary file in the target directory, then rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> CliResult<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| CliError::io(dir, e))?;
    tmp.write_all(bytes)
        .and_then(|_| tmp.as_file().sync_all())
        .map_err(|e| CliError::io(tmp.path(), e))?;
    tmp.persist(path).map_err(|e| CliError::io(path, e.error))?;
    Ok(())
}
