//! Shared argument interpretation: catalog lattice names and space-time
//! code constructors.

use crate::error::{CliError, Result};
use latticeforge_core::CatalogLattice;
use latticeforge_stc::{alamouti_code, golden_code, iterated_construct, SpaceTimeCodeSpec};
use num_complex::Complex64;

/// Resolves a catalog name. `n` is required for the Zn and Dn families and
/// rejected elsewhere.
pub fn catalog(name: &str, n: Option<usize>) -> Result<CatalogLattice> {
    let fixed = |cat: CatalogLattice| match n {
        None => Ok(cat),
        Some(_) => Err(CliError::Config(format!(
            "--n only applies to the Zn and Dn families, not {name}"
        ))),
    };
    match name.to_ascii_lowercase().as_str() {
        "zn" | "z" => Ok(CatalogLattice::Zn(dim_for(name, n)?)),
        "dn" | "d" => Ok(CatalogLattice::Dn(dim_for(name, n)?)),
        "a2" => fixed(CatalogLattice::A2),
        "e8" => fixed(CatalogLattice::E8),
        "k12" => fixed(CatalogLattice::K12),
        "leech24" | "leech" => fixed(CatalogLattice::Leech24),
        other => Err(CliError::Config(format!(
            "unknown lattice `{other}`, expected Zn, Dn, A2, E8, K12, or Leech24"
        ))),
    }
}

fn dim_for(name: &str, n: Option<usize>) -> Result<usize> {
    n.ok_or_else(|| CliError::Config(format!("family {name} needs a dimension: pass --n")))
}

/// Display label for a catalog entry, echoed in outputs.
pub fn catalog_label(cat: CatalogLattice) -> String {
    match cat {
        CatalogLattice::Zn(n) => format!("Z{n}"),
        CatalogLattice::Dn(n) => format!("D{n}"),
        CatalogLattice::A2 => "A2".into(),
        CatalogLattice::E8 => "E8".into(),
        CatalogLattice::K12 => "K12".into(),
        CatalogLattice::Leech24 => "Leech24".into(),
    }
}

/// Builds a named space-time code over the given (or default) alphabet.
///
/// `iterated-alamouti` is the conjugation iteration of the Alamouti code at
/// theta = i, the instance whose conditional decoding partition is studied
/// by `stc analyze`.
pub fn build_code(kind: &str, alphabet: Option<Vec<i64>>) -> Result<SpaceTimeCodeSpec> {
    match kind.to_ascii_lowercase().as_str() {
        "alamouti" => Ok(alamouti_code(&alphabet.unwrap_or_else(|| vec![-1, 1]))?),
        "golden" => Ok(golden_code(&alphabet.unwrap_or_else(|| vec![-1, 0, 1]))?),
        "iterated-alamouti" | "iterated_alamouti" => {
            let base = alamouti_code(&alphabet.unwrap_or_else(|| vec![-1, 1]))?;
            Ok(iterated_construct(
                &base,
                &|z: Complex64| z.conj(),
                Complex64::new(0.0, 1.0),
            )?)
        }
        other => Err(CliError::Config(format!(
            "unknown code `{other}`, expected alamouti, golden, or iterated-alamouti"
        ))),
    }
}
