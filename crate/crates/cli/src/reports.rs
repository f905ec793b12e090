//! Serializable report bodies. Field order is fixed by declaration order,
//! all maps are sorted, so reports are byte-reproducible modulo the
//! timestamp field.

use serde::Serialize;

use crate::{Cli, Format};

#[derive(Serialize)]
pub struct ConfigEcho {
    pub subcommand: String,
    pub gcm_source: String,
    pub format: String,
    pub out: Option<String>,
}

impl ConfigEcho {
    pub fn new(cli: &Cli, source: &str, subcommand: &str) -> Self {
        let format = match cli.format {
            Some(Format::Tsv) => "tsv",
            Some(Format::Json) => "json",
            None => "default",
        };
        ConfigEcho {
            subcommand: subcommand.to_string(),
            gcm_source: source.to_string(),
            format: format.to_string(),
            out: cli.out.clone(),
        }
    }
}

#[derive(Serialize)]
pub struct Enveloped<T: Serialize> {
    pub config: ConfigEcho,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
    pub payload: T,
}

#[derive(Serialize)]
pub struct GcmReport {
    pub config: ConfigEcho,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
    pub labels: Vec<String>,
    pub matrix: Vec<Vec<i64>>,
    pub symmetrizer: Option<Vec<i64>>,
    pub symmetrizable: bool,
}

#[derive(Serialize)]
pub struct RootRow {
    pub beta: Vec<i64>,
    pub mult: u64,
    pub is_real: bool,
}

#[derive(Serialize)]
pub struct RootsReport {
    pub config: ConfigEcho,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
    pub depth: usize,
    pub with_mults: bool,
    pub roots: Vec<RootRow>,
}

#[derive(Serialize)]
pub struct CharRow {
    pub m: Vec<i64>,
    pub coeff: i64,
}

#[derive(Serialize)]
pub struct CharReport {
    pub config: ConfigEcho,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
    pub anchor: Vec<i64>,
    pub depth: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub w: Option<String>,
    pub rows: Vec<CharRow>,
}

#[derive(Serialize)]
pub struct DimRow {
    pub m: Vec<i64>,
    pub gram_dim: usize,
    pub char_coeff: i64,
    pub equal: bool,
}

#[derive(Serialize)]
pub struct DimsReport {
    pub config: ConfigEcho,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
    pub lambda: Vec<i64>,
    pub depth: usize,
    pub rows: Vec<DimRow>,
    pub pass: bool,
}

#[derive(Serialize)]
pub struct SparseCoeff {
    pub m1: Vec<i64>,
    pub s: usize,
    pub m2: Vec<i64>,
    pub t: usize,
    pub value: String,
}

#[derive(Serialize)]
pub struct QuadricSpaceRow {
    pub i: String,
    pub j: String,
    pub m: Vec<i64>,
    pub kernel_dim: usize,
    pub sym_kernel_dim: Option<usize>,
    pub quadrics: Vec<Vec<SparseCoeff>>,
}

#[derive(Serialize)]
pub struct QuadricsReport {
    pub config: ConfigEcho,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
    pub depth: usize,
    pub vanish_on_extremal_points: bool,
    pub spaces: Vec<QuadricSpaceRow>,
}

#[derive(Serialize)]
pub struct SplittingPiece {
    pub lambda: Vec<i64>,
    pub m: Vec<i64>,
    pub matrix: Vec<Vec<u64>>,
}

#[derive(Serialize)]
pub struct CompatRow {
    pub w: String,
    pub compatible: bool,
}

#[derive(Serialize)]
pub struct CanonicalRow {
    pub i: String,
    pub bounded: bool,
}

#[derive(Serialize)]
pub struct SplittingReport {
    pub config: ConfigEcho,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
    pub p: u64,
    pub deg_bound: usize,
    pub depth_bound: usize,
    pub found: bool,
    pub pieces: Vec<SplittingPiece>,
    pub compatible_ideals: Vec<CompatRow>,
    pub canonical_degree: Vec<CanonicalRow>,
}
