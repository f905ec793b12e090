//! `kmlab`: exact Kac-Moody computations at truncated depth from the shell.
//!
//! Exit codes: 0 success, 1 mathematical falsification (with certificate),
//! 2 usage or validation error.

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use kmlab_core::chars;
use kmlab_core::error::KmError;
use kmlab_core::families;
use kmlab_core::frobenius;
use kmlab_core::gcm::Gcm;
use kmlab_core::modules::Module;
use kmlab_core::presets;
use kmlab_core::ring;
use kmlab_core::weyl;

mod reports;
use reports::*;

#[derive(Parser)]
#[command(name = "kmlab", version, about = "exact Kac-Moody flag combinatorics at truncated depth")]
struct Cli {
    /// Preset name from the catalog (A1, A2, B2, G2, A1~1, A2~2, HYP)
    #[arg(long, global = true)]
    preset: Option<String>,
    /// GCM input JSON file: {"labels": [...], "matrix": [[...]]}
    #[arg(long, global = true)]
    gcm: Option<String>,
    /// Output format
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write the report to this path (also printed to stdout)
    #[arg(long, global = true)]
    out: Option<String>,
    /// Suppress the timestamp field for byte-reproducible reports
    #[arg(long, global = true)]
    no_timestamp: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Tsv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a GCM and print its symmetrizer
    Gcm {
        #[command(subcommand)]
        action: GcmAction,
    },
    /// Positive roots of height ≤ depth
    Roots {
        #[arg(long)]
        depth: usize,
        /// Include imaginary roots with Peterson multiplicities
        #[arg(long)]
        mults: bool,
    },
    /// Characters: `char l` for L(λ), `char demazure` for L_w(λ)
    Char {
        #[command(subcommand)]
        which: CharKind,
    },
    /// Gram-rank dimensions cross-checked against the character
    Dims {
        #[arg(long, value_delimiter = ',')]
        lambda: Vec<i64>,
        #[arg(long)]
        depth: usize,
    },
    /// Distributive-lattice check: ⋂_{w∈S} L^w(λ) = Σ_{v∈S'} L^v(λ)
    LatticeCheck {
        #[arg(long, value_delimiter = ',')]
        lambda: Vec<i64>,
        /// Weyl elements: words joined by ',', letters by '.', e.g. "1.2,2.1"
        #[arg(short = 'S', long = "set")]
        s: String,
        #[arg(long)]
        depth: usize,
        #[arg(long, default_value_t = 4)]
        search_len: usize,
    },
    /// Thick-Demazure containment against the Bruhat order
    OrderCheck {
        #[arg(long, value_delimiter = ',')]
        lambda: Vec<i64>,
        #[arg(long)]
        max_len: usize,
        #[arg(long)]
        depth: usize,
    },
    /// Plücker quadrics; with --present, the degree-2 presentation check
    Pluecker {
        #[arg(long)]
        depth: usize,
        #[arg(long)]
        present: bool,
    },
    /// Frobenius splitting certificate on the window
    Frobenius {
        #[arg(long)]
        prime: u64,
        #[arg(long)]
        deg: usize,
        #[arg(long)]
        depth: usize,
        /// Compatibility constraints: words joined by ',', letters by '.'
        #[arg(long)]
        compat: Option<String>,
        #[arg(long)]
        canonical: bool,
    },
    /// Truncated Weyl-Kac character identity
    Weylkac {
        #[arg(long, value_delimiter = ',')]
        lambda: Vec<i64>,
        #[arg(long)]
        depth: usize,
    },
}

#[derive(Subcommand)]
enum GcmAction {
    /// Validate the selected source (preset, file, or positional path)
    Check {
        /// Preset name or path to a GCM JSON file
        src: Option<String>,
    },
}

#[derive(Subcommand)]
enum CharKind {
    /// Character of L(λ)
    #[command(alias = "L")]
    L {
        #[arg(long, value_delimiter = ',')]
        lambda: Vec<i64>,
        #[arg(long)]
        depth: usize,
    },
    /// Character of the thin Demazure module L_w(λ)
    Demazure {
        #[arg(long, value_delimiter = ',')]
        lambda: Vec<i64>,
        /// Reduced word, letters joined by '.' or ','
        #[arg(long)]
        w: String,
        #[arg(long)]
        depth: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn catalog() -> Result<presets::Catalog, KmError> {
    match std::env::var("KMLAB_PRESETS") {
        Ok(path) => {
            let text = std::fs::read_to_string(path)?;
            presets::Catalog::from_json(&text)
        }
        Err(_) => Ok(presets::builtin_catalog()),
    }
}

fn load_gcm(cli: &Cli) -> Result<(Gcm, String), KmError> {
    if let Some(name) = &cli.preset {
        let g = catalog()?.lookup(name)?;
        return Ok((g, format!("preset:{name}")));
    }
    if let Some(path) = &cli.gcm {
        let text = std::fs::read_to_string(path)?;
        let g = presets::gcm_from_json(&text)?;
        return Ok((g, format!("file:{path}")));
    }
    Err(KmError::Parse(
        "no GCM source; pass --preset or --gcm".to_string(),
    ))
}

fn parse_word(gcm: &Gcm, text: &str) -> Result<Vec<usize>, KmError> {
    if text.is_empty() || text == "e" {
        return Ok(vec![]);
    }
    text.split(['.', ','])
        .filter(|t| !t.is_empty())
        .map(|t| gcm.index_of(t))
        .collect()
}

/// Words joined by ',', letters joined by '.'; `e` is the identity.
fn parse_word_list(gcm: &Gcm, text: &str) -> Result<Vec<Vec<usize>>, KmError> {
    text.split(',')
        .filter(|t| !t.is_empty())
        .map(|w| {
            if w == "e" {
                return Ok(vec![]);
            }
            w.split('.')
                .filter(|t| !t.is_empty())
                .map(|t| gcm.index_of(t))
                .collect()
        })
        .collect()
}

fn emit(cli: &Cli, text: &str) -> Result<(), KmError> {
    let mut stdout = std::io::stdout().lock();
    stdout.write_all(text.as_bytes())?;
    if !text.ends_with('\n') {
        stdout.write_all(b"\n")?;
    }
    if let Some(path) = &cli.out {
        let mut data = text.as_bytes().to_vec();
        if !text.ends_with('\n') {
            data.push(b'\n');
        }
        std::fs::write(path, data)?;
    }
    Ok(())
}

fn timestamp(cli: &Cli) -> Option<String> {
    if cli.no_timestamp {
        None
    } else {
        Some(chrono::Utc::now().to_rfc3339())
    }
}

fn json<T: Serialize>(v: &T) -> Result<String, KmError> {
    Ok(serde_json::to_string_pretty(v)?)
}

fn run(cli: &Cli) -> Result<ExitCode, KmError> {
    let format = cli.format.unwrap_or(match &cli.command {
        Command::Char { .. } | Command::Roots { .. } => Format::Tsv,
        _ => Format::Json,
    });
    match &cli.command {
        Command::Gcm { action } => {
            let GcmAction::Check { src } = action;
            let (g, source) = match src {
                Some(s) => {
                    if std::path::Path::new(s).exists() {
                        let text = std::fs::read_to_string(s)?;
                        (presets::gcm_from_json(&text)?, format!("file:{s}"))
                    } else {
                        (catalog()?.lookup(s)?, format!("preset:{s}"))
                    }
                }
                None => load_gcm(cli)?,
            };
            let report = GcmReport {
                config: ConfigEcho::new(cli, &source, "gcm check"),
                timestamp: timestamp(cli),
                labels: g.labels.clone(),
                matrix: g.matrix.clone(),
                symmetrizer: g.symmetrizer.clone(),
                symmetrizable: g.symmetrizer.is_some(),
            };
            emit(cli, &json(&report)?)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Roots { depth, mults } => {
            let (g, source) = load_gcm(cli)?;
            let table = if *mults {
                chars::peterson_mults(&g, *depth)?
            } else {
                chars::real_roots(&g, *depth)
            };
            match format {
                Format::Tsv => {
                    let mut text = String::new();
                    let cols: Vec<String> =
                        (1..=g.rank()).map(|i| format!("m_{i}")).collect();
                    text.push_str(&format!("{}\tmult\treal\n", cols.join("\t")));
                    for (beta, data) in &table.entries {
                        let coords: Vec<String> =
                            beta.iter().map(|x| x.to_string()).collect();
                        text.push_str(&format!(
                            "{}\t{}\t{}\n",
                            coords.join("\t"),
                            data.mult,
                            data.is_real
                        ));
                    }
                    emit(cli, &text)?;
                }
                Format::Json => {
                    let report = RootsReport {
                        config: ConfigEcho::new(cli, &source, "roots"),
                        timestamp: timestamp(cli),
                        depth: *depth,
                        with_mults: *mults,
                        roots: table
                            .entries
                            .iter()
                            .map(|(beta, d)| RootRow {
                                beta: beta.clone(),
                                mult: d.mult,
                                is_real: d.is_real,
                            })
                            .collect(),
                    };
                    emit(cli, &json(&report)?)?;
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Char { which } => {
            let (g, source) = load_gcm(cli)?;
            let (poly, name, word) = match which {
                CharKind::L { lambda, depth } => {
                    (chars::char_l(&g, lambda, *depth)?, "char L", None)
                }
                CharKind::Demazure { lambda, w, depth } => {
                    let word = parse_word(&g, w)?;
                    let elem = weyl::canonicalize(&g, &word);
                    (
                        chars::char_demazure(&g, lambda, &elem, *depth)?,
                        "char demazure",
                        Some(elem.display(&g)),
                    )
                }
            };
            match format {
                Format::Tsv => {
                    let mut text = String::new();
                    let cols: Vec<String> =
                        (1..=g.rank()).map(|i| format!("m_{i}")).collect();
                    text.push_str(&format!("{}\tcoeff\n", cols.join("\t")));
                    for (m, c) in poly.terms() {
                        let coords: Vec<String> = m.iter().map(|x| x.to_string()).collect();
                        text.push_str(&format!("{}\t{}\n", coords.join("\t"), c));
                    }
                    emit(cli, &text)?;
                }
                Format::Json => {
                    let report = CharReport {
                        config: ConfigEcho::new(cli, &source, name),
                        timestamp: timestamp(cli),
                        anchor: poly.anchor.clone(),
                        depth: poly.depth_bound,
                        w: word,
                        rows: poly
                            .terms()
                            .map(|(m, c)| CharRow {
                                m: m.clone(),
                                coeff: *c,
                            })
                            .collect(),
                    };
                    emit(cli, &json(&report)?)?;
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Dims { lambda, depth } => {
            let (g, source) = load_gcm(cli)?;
            let chi = chars::char_l(&g, lambda, *depth)?;
            let mut module = Module::new(g.clone(), lambda.clone())?;
            let mut rows = Vec::new();
            let mut pass = true;
            for m in ring::depth_vectors(g.rank(), *depth) {
                let dim = module.dim_weight(&m);
                let coeff = chi.coeff(&m);
                if dim == 0 && coeff == 0 {
                    continue;
                }
                let equal = dim as i64 == coeff;
                pass &= equal;
                rows.push(DimRow {
                    m,
                    gram_dim: dim,
                    char_coeff: coeff,
                    equal,
                });
            }
            let report = DimsReport {
                config: ConfigEcho::new(cli, &source, "dims"),
                timestamp: timestamp(cli),
                lambda: lambda.clone(),
                depth: *depth,
                rows,
                pass,
            };
            emit(cli, &json(&report)?)?;
            Ok(exit_for(pass))
        }
        Command::LatticeCheck {
            lambda,
            s,
            depth,
            search_len,
        } => {
            let (g, source) = load_gcm(cli)?;
            let words = parse_word_list(&g, s)?;
            let elems: Vec<weyl::WeylElement> = words
                .iter()
                .map(|w| weyl::canonicalize(&g, w))
                .collect();
            if elems.is_empty() {
                return Err(KmError::Parse("-S needs at least one word".to_string()));
            }
            let mut module =
                Module::with_char_oracle(g.clone(), lambda.clone(), *depth)?;
            let rep = families::verify_distributive(&mut module, &elems, *depth, *search_len)?;
            let pass = rep.pass;
            let report = Enveloped {
                config: ConfigEcho::new(cli, &source, "lattice-check"),
                timestamp: timestamp(cli),
                payload: rep,
            };
            emit(cli, &json(&report)?)?;
            Ok(exit_for(pass))
        }
        Command::OrderCheck {
            lambda,
            max_len,
            depth,
        } => {
            let (g, source) = load_gcm(cli)?;
            let mut module =
                Module::with_char_oracle(g.clone(), lambda.clone(), *depth)?;
            let rep = families::verify_containment_order(&mut module, *max_len, *depth)?;
            let pass = rep.pass;
            let report = Enveloped {
                config: ConfigEcho::new(cli, &source, "order-check"),
                timestamp: timestamp(cli),
                payload: rep,
            };
            emit(cli, &json(&report)?)?;
            Ok(exit_for(pass))
        }
        Command::Pluecker { depth, present } => {
            let (g, source) = load_gcm(cli)?;
            if *present {
                let mut r = ring::RingTruncation::build(g.clone(), 3, *depth)?;
                let rep = ring::verify_degree2_presentation(&mut r)?;
                let pass = rep.pass;
                let report = Enveloped {
                    config: ConfigEcho::new(cli, &source, "pluecker --present"),
                    timestamp: timestamp(cli),
                    payload: rep,
                };
                emit(cli, &json(&report)?)?;
                return Ok(exit_for(pass));
            }
            let mut r = ring::RingTruncation::build(g.clone(), 2, *depth)?;
            let quadrics = ring::pluecker_quadrics(&r)?;
            let vanish = ring::quadrics_vanish_on_extremal(&mut r, &quadrics, 4)?;
            let report = QuadricsReport {
                config: ConfigEcho::new(cli, &source, "pluecker"),
                timestamp: timestamp(cli),
                depth: *depth,
                vanish_on_extremal_points: vanish,
                spaces: quadrics
                    .spaces
                    .iter()
                    .map(|qs| QuadricSpaceRow {
                        i: g.labels[qs.i].clone(),
                        j: g.labels[qs.j].clone(),
                        m: qs.m.clone(),
                        kernel_dim: qs.kernel.len(),
                        sym_kernel_dim: qs.sym_kernel_dim,
                        quadrics: qs
                            .kernel
                            .iter()
                            .map(|q| {
                                qs.labels
                                    .iter()
                                    .zip(q)
                                    .filter(|(_, c)| !num::Zero::is_zero(*c))
                                    .map(|(((m1, s), (m2, t)), c)| SparseCoeff {
                                        m1: m1.clone(),
                                        s: *s,
                                        m2: m2.clone(),
                                        t: *t,
                                        value: c.to_string(),
                                    })
                                    .collect()
                            })
                            .collect(),
                    })
                    .collect(),
            };
            emit(cli, &json(&report)?)?;
            Ok(exit_for(vanish))
        }
        Command::Frobenius {
            prime,
            deg,
            depth,
            compat,
            canonical,
        } => {
            let (g, source) = load_gcm(cli)?;
            let compat_elems: Vec<weyl::WeylElement> = match compat {
                Some(text) => parse_word_list(&g, text)?
                    .iter()
                    .map(|w| weyl::canonicalize(&g, w))
                    .collect(),
                None => vec![],
            };
            let r = ring::RingTruncation::build_integral(g.clone(), *deg, *depth)?;
            let mut fp = frobenius::reduce_mod_p(r, *prime)?;
            let opts = frobenius::SplittingOptions {
                compat: compat_elems.clone(),
                canonical: *canonical,
            };
            let cand = frobenius::find_splitting(&mut fp, &opts)?;
            let (found, maps, compat_ok, canon_ok) = match &cand {
                None => (false, vec![], vec![], vec![]),
                Some(c) => {
                    let mut compat_ok = Vec::new();
                    for w in &compat_elems {
                        let ideal = frobenius::fp_demazure_ideal(&mut fp, w)?;
                        compat_ok.push(CompatRow {
                            w: w.display(&g),
                            compatible: frobenius::check_compatibility(&mut fp, c, &ideal)?,
                        });
                    }
                    let mut canon_ok = Vec::new();
                    if *canonical {
                        for i in 0..g.rank() {
                            canon_ok.push(CanonicalRow {
                                i: g.labels[i].clone(),
                                bounded: frobenius::check_canonical_degree(&mut fp, c, i)?,
                            });
                        }
                    }
                    let maps = c
                        .maps
                        .iter()
                        .map(|((la, m), mat)| SplittingPiece {
                            lambda: la.clone(),
                            m: m.clone(),
                            matrix: mat.clone(),
                        })
                        .collect();
                    (true, maps, compat_ok, canon_ok)
                }
            };
            let pass = found
                && compat_ok.iter().all(|c| c.compatible)
                && canon_ok.iter().all(|c| c.bounded);
            let report = SplittingReport {
                config: ConfigEcho::new(cli, &source, "frobenius"),
                timestamp: timestamp(cli),
                p: *prime,
                deg_bound: *deg,
                depth_bound: *depth,
                found,
                pieces: maps,
                compatible_ideals: compat_ok,
                canonical_degree: canon_ok,
            };
            emit(cli, &json(&report)?)?;
            Ok(exit_for(pass))
        }
        Command::Weylkac { lambda, depth } => {
            let (g, source) = load_gcm(cli)?;
            let rep = chars::check_weyl_kac(&g, lambda, *depth)?;
            let pass = rep.equal;
            let report = Enveloped {
                config: ConfigEcho::new(cli, &source, "weylkac"),
                timestamp: timestamp(cli),
                payload: rep,
            };
            emit(cli, &json(&report)?)?;
            Ok(exit_for(pass))
        }
    }
}

fn exit_for(pass: bool) -> ExitCode {
    if pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
