//! The JSON semigroup spec format.
//!
//! A single object: `{"generators": [{"num": [[re,im],...],
//! "den": [[re,im],...]}, ...], "name": "..."}`. Coefficients ascend in
//! degree; omitting "den" means the constant 1 (a polynomial map).

use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::Deserialize;

use semithermo::num_complex::Complex64;
use semithermo::{RationalMap, SemigroupSpec};

#[derive(Debug, Deserialize)]
pub struct SpecFile {
    pub generators: Vec<GeneratorSpec>,
    #[serde(default)]
    pub name: Option<String>,
}

#[derive(Debug, Deserialize)]
pub struct GeneratorSpec {
    pub num: Vec<[f64; 2]>,
    #[serde(default)]
    pub den: Option<Vec<[f64; 2]>>,
}

/// Parses and validates a spec file into a semigroup.
pub fn parse_spec(path: &Path) -> Result<(SemigroupSpec, Option<String>)> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read spec file {}", path.display()))?;
    let file: SpecFile = serde_json::from_str(&text)
        .with_context(|| format!("parse error in {}", path.display()))?;
    if file.generators.is_empty() {
        bail!("validation error: generators list is empty");
    }
    let mut maps = Vec::with_capacity(file.generators.len());
    for (i, g) in file.generators.iter().enumerate() {
        let num: Vec<Complex64> = g.num.iter().map(|c| Complex64::new(c[0], c[1])).collect();
        let den: Vec<Complex64> = match &g.den {
            Some(d) => d.iter().map(|c| Complex64::new(c[0], c[1])).collect(),
            None => vec![Complex64::new(1.0, 0.0)],
        };
        let map = RationalMap::new(num, den)
            .with_context(|| format!("validation error in generator {}", i + 1))?;
        maps.push(map);
    }
    let spec = SemigroupSpec::new(maps).context("validation error")?;
    Ok((spec, file.name))
}
