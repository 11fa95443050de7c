//! File formats, verification suites and command plumbing for the `gcs`
//! binary.
//!
//! - [`seedfile`]: the seed JSON document (`"format": 1`).
//! - [`report`]: the verification report JSON document.
//! - [`suites`]: the checks behind `gcs verify`.

pub mod report;
pub mod seedfile;
pub mod suites;

use std::collections::BTreeMap;

use gcs_core::band::{self, BandPoint};
use gcs_core::double;
use gcs_core::engine::GeneralizedSeed;
use gcs_core::exact::{Coord, Evaluator, SparsePolynomial};
use gcs_core::rng_from_seed;

use seedfile::{Family, SeedFile};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Format(String),
    #[error("{0}: {1}")]
    Io(String, std::io::Error),
    #[error("{0}")]
    Core(gcs_core::Error),
}

impl From<gcs_core::Error> for CliError {
    fn from(e: gcs_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    /// Process exit code: every error is a configuration error.
    pub fn exit_code(&self) -> i32 {
        2
    }
}

const SPECIAL_STRING: &str = "(1, c~_{d-1}, ..., c~_1, 1), the pencil coefficients in reverse";

/// Build the seed of a family together with the index conventions it uses.
pub fn build_seed_file(family: Family, n: usize, k: Option<usize>) -> Result<SeedFile, CliError> {
    let mut conv = BTreeMap::new();
    conv.insert("special_string".to_string(), SPECIAL_STRING.to_string());
    match family {
        Family::Double => {
            let seed = double::build_seed_bar(n)?;
            conv.insert("trailing_phi".into(), "phi_{N-s+1} = g_{n-s+1,n-s+1}, s = 1..n-1".into());
            Ok(SeedFile::from_seed(&seed, family, None, conv))
        }
        Family::Band => {
            let k = k.ok_or_else(|| CliError::Config("--k is required for the band family".into()))?;
            let seed = band::build_band_seed(k, n)?;
            conv.insert("corner".into(), "a~_11 = a_11".into());
            let mut rng = rng_from_seed(0);
            let pts = (0..3).map(|_| BandPoint::random(k, n, 1000, &mut rng)).collect::<Result<Vec<_>, _>>()?;
            let (tall, long) = (band::resolve_tall(&pts)?, band::resolve_long(&pts)?);
            let show = |c: Option<String>, rows: usize, passing: usize| match c {
                Some(c) => c,
                None if rows == 0 => "no ledger rows for these (k, n)".into(),
                None => format!("unresolved: {passing} candidates pass"),
            };
            conv.insert("tall_ledger".into(), show(tall.chosen().map(|c| c.to_string()), tall.rows, tall.passing.len()));
            conv.insert("long_ledger".into(), show(long.chosen().map(|c| c.to_string()), long.rows, long.passing.len()));
            Ok(SeedFile::from_seed(&seed, family, Some(k), conv))
        }
    }
}

/// Find a vertex by label, by cluster variable name, or by id.
pub fn resolve_vertex(seed: &GeneralizedSeed, key: &str) -> Result<usize, CliError> {
    seed.find(key)
        .or_else(|| seed.find_name(key))
        .or_else(|| key.parse::<usize>().ok().filter(|&i| i < seed.len()))
        .ok_or_else(|| CliError::Config(format!("no vertex {key:?}")))
}

/// A mutated variable and the number of terms of its polynomial expansion,
/// or why the expansion failed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularityStep {
    pub label: String,
    pub outcome: Result<usize, gcs_core::Error>,
}

/// Mutate along `vertices` in order. With `check_regular`, every new
/// variable is expanded as a polynomial by exact division.
pub fn mutate_file(
    file: &SeedFile,
    vertices: &[String],
    check_regular: bool,
    term_limit: usize,
) -> Result<(SeedFile, Vec<RegularityStep>), CliError> {
    if check_regular && file.n > 3 {
        return Err(CliError::Config(format!("--check-regular expands polynomials symbolically and needs n <= 3, got n = {}", file.n)));
    }
    let mut seed = file.to_seed()?;
    let ks = vertices.iter().map(|v| resolve_vertex(&seed, v)).collect::<Result<Vec<_>, _>>()?;
    let n = seed.n;
    let nv = 2 * n * n;
    let mut ev = Evaluator::new(move |c: Coord| SparsePolynomial::var(nv, c.index(n)));
    ev.set_term_limit(Some(term_limit));
    let mut steps = Vec::new();
    for k in ks {
        seed = seed.mutate(k).map_err(|e| match e {
            gcs_core::Error::VertexKind { .. } => CliError::Config(format!("vertex {} is not mutable", seed.quiver.vertex(k).label)),
            e => e.into(),
        })?;
        if check_regular {
            let outcome = ev.eval(&seed.cluster[k]).map(|p| p.num_terms());
            steps.push(RegularityStep { label: seed.quiver.vertex(k).label.clone(), outcome });
        }
    }
    Ok((SeedFile::from_seed(&seed, file.family, file.k, file.conventions.clone()), steps))
}
