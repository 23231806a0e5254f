//! Command-line front end.

use std::fmt::Write as _;
use std::io::Write as _;
use std::ops::RangeInclusive;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::gluing::{self, GluingConfig};
use crate::index;
use crate::invariants::{self, builtin_oracle_g1};
use crate::pants::{self, FaceLattice, IsoCertificate};
use crate::strata::{self, DegenerationPoset};
use crate::surface_types::{self, MarkedTopType};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "bordered-moduli", version, about = "Moduli of bordered Riemann surfaces: strata, indices, invariants, gluing checks")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct TypeArgs {
    #[arg(long)]
    pub g: u32,
    #[arg(long)]
    pub h: u32,
    #[arg(long, default_value_t = 0)]
    pub n: u32,
    /// Boundary marked points per circle; defaults to none.
    #[arg(long, value_delimiter = ',')]
    pub m: Vec<u32>,
}

impl TypeArgs {
    fn marked(&self) -> Result<MarkedTopType> {
        let m = if self.m.is_empty() { vec![0; self.h as usize] } else { self.m.clone() };
        if m.len() != self.h as usize {
            return Err(Error::domain("m", format!("{} entries for h = {}", m.len(), self.h)));
        }
        MarkedTopType::new(self.g, self.h, self.n, m)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum StrataView {
    Counts,
    Graphs,
    Poset,
    Dot,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Topological types of symmetric surfaces of genus g̃.
    Classify {
        #[arg(long)]
        gtilde: u32,
    },
    /// Boundary strata of a moduli space; h = 0 gives the closed case.
    Strata {
        #[command(flatten)]
        ty: TypeArgs,
        #[arg(long, value_enum, default_value_t = StrataView::Counts)]
        show: StrataView,
    },
    /// Real dimension of the moduli space of domains.
    Dim {
        #[command(flatten)]
        ty: TypeArgs,
    },
    /// Fredholm index of the linearized operator.
    Index {
        #[arg(long, allow_hyphen_values = true)]
        mu: BigInt,
        #[arg(long = "N")]
        big_n: u32,
        #[arg(long)]
        g: u32,
        #[arg(long)]
        h: u32,
    },
    /// Virtual dimension of the moduli space of stable maps.
    Vdim {
        #[arg(long, allow_hyphen_values = true)]
        mu: BigInt,
        #[arg(long = "N")]
        big_n: u32,
        #[command(flatten)]
        ty: TypeArgs,
    },
    /// Pants decompositions and associahedron identifications.
    Pants {
        #[arg(long)]
        check_k5: bool,
        #[arg(long)]
        gtilde: Option<u32>,
        #[arg(long, default_value_t = 0)]
        ntilde: u32,
        /// `g,h,n` of a bordered surface.
        #[arg(long, value_delimiter = ',', num_args = 1)]
        bordered: Vec<u32>,
        /// Components of the moduli of discs with this many boundary points.
        #[arg(long)]
        disc: Option<u32>,
        /// Face lattice of the associahedron of this dimension.
        #[arg(long)]
        associahedron: Option<u32>,
        #[arg(long)]
        dot: bool,
    },
    /// Multiple-cover invariant C(g;h|d;n|a).
    Invariant {
        #[arg(long)]
        g: u32,
        #[arg(long)]
        h: u32,
        #[arg(long)]
        d: u32,
        #[arg(long, value_delimiter = ',')]
        n: Vec<u32>,
        #[arg(long, allow_hyphen_values = true)]
        a: Option<i64>,
        /// Range `AMIN..AMAX` of a.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_range)]
        table: Option<RangeInclusive<i64>>,
    },
    /// Numerical checks of the local gluing estimates.
    VerifyGluing {
        #[arg(long, value_delimiter = ',')]
        r_list: Vec<f64>,
        #[arg(long, value_delimiter = ',')]
        p: Vec<f64>,
        /// Radial and angular resolution of the pregluing grid.
        #[arg(long)]
        resolution: Option<usize>,
        #[arg(long)]
        beta_resolution: Option<usize>,
    },
}

fn parse_range(s: &str) -> std::result::Result<RangeInclusive<i64>, String> {
    let (lo, hi) = s.split_once("..").ok_or_else(|| format!("expected AMIN..AMAX, got {s:?}"))?;
    let lo: i64 = lo.trim().parse().map_err(|e| format!("bad lower bound: {e}"))?;
    let hi: i64 = hi.trim().trim_start_matches('=').parse().map_err(|e| format!("bad upper bound: {e}"))?;
    if lo > hi {
        return Err(format!("empty range {lo}..{hi}"));
    }
    Ok(lo..=hi)
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports always serialize");
    s.push('\n');
    s
}

fn poset_for(ty: &TypeArgs) -> Result<(MarkedTopType, DegenerationPoset)> {
    if ty.h == 0 {
        if !ty.m.is_empty() {
            return Err(Error::domain("m", "closed surfaces carry no boundary points"));
        }
        let poset = strata::enumerate_closed_strata(ty.g, ty.n)?;
        let t = MarkedTopType { base: surface_types::TopType { g: ty.g, h: 0 }, n: ty.n, m: Vec::new() };
        return Ok((t, poset));
    }
    let t = ty.marked()?;
    let poset = strata::enumerate_strata(&t)?;
    Ok((t, poset))
}

fn strata_report(ty: &TypeArgs, show: StrataView, format: Format) -> Result<String> {
    let (_, poset) = poset_for(ty)?;
    if show == StrataView::Dot {
        let name = format!("strata g={} h={} n={} m={:?}", ty.g, ty.h, ty.n, ty.m);
        return Ok(FaceLattice::from(&poset).to_dot(&name));
    }
    let counts = poset.counts_by_dim();
    let dims: Vec<usize> = counts.iter().map(|&(_, c)| c).collect();
    let dim_values: Vec<i64> = counts.iter().map(|&(d, _)| d).collect();
    Ok(match format {
        Format::Json => {
            let mut report = json!({
                "g": ty.g,
                "h": ty.h,
                "n": ty.n,
                "m": ty.m,
                "total": poset.len(),
                "dim_values": dim_values,
                "dims": dims,
            });
            if matches!(show, StrataView::Graphs | StrataView::Poset) {
                report["strata"] = serde_json::to_value(&poset.strata).expect("graphs serialize");
                report["stratum_dims"] = json!(poset.dims);
            }
            if show == StrataView::Poset {
                report["covers"] = serde_json::to_value(&poset.covers).expect("covers serialize");
            }
            to_json(&report)
        }
        Format::Csv => {
            let mut out = String::new();
            match show {
                StrataView::Counts => {
                    out.push_str("dim,count\n");
                    for (d, c) in &counts {
                        let _ = writeln!(out, "{d},{c}");
                    }
                }
                StrataView::Graphs => {
                    out.push_str("index,dim,graph\n");
                    for (i, s) in poset.strata.iter().enumerate() {
                        let _ = writeln!(out, "{i},{},\"{}\"", poset.dims[i], s.to_json().replace('"', "\"\""));
                    }
                }
                _ => {
                    out.push_str("upper,lower,move\n");
                    for c in &poset.covers {
                        let _ = writeln!(out, "{},{},{:?}", c.upper, c.lower, c.kind);
                    }
                }
            }
            out
        }
        Format::Table => {
            let mut out = String::new();
            let _ = writeln!(out, "{} strata", poset.len());
            let _ = writeln!(out, "{:>5} {:>8}", "dim", "count");
            for (d, c) in &counts {
                let _ = writeln!(out, "{d:>5} {c:>8}");
            }
            if show != StrataView::Counts {
                for (i, s) in poset.strata.iter().enumerate() {
                    let _ = writeln!(out, "[{i}] dim {} {}", poset.dims[i], s.to_json());
                }
            }
            if show == StrataView::Poset {
                for c in &poset.covers {
                    let _ = writeln!(out, "{} -> {} ({:?})", c.upper, c.lower, c.kind);
                }
            }
            out
        }
    })
}

fn kv_report(format: Format, pairs: &[(&str, String)]) -> String {
    match format {
        Format::Json => {
            let map: serde_json::Map<String, serde_json::Value> =
                pairs.iter().map(|(k, v)| (k.to_string(), json_scalar(v))).collect();
            to_json(&map)
        }
        Format::Csv => {
            let keys: Vec<&str> = pairs.iter().map(|(k, _)| *k).collect();
            let vals: Vec<&str> = pairs.iter().map(|(_, v)| v.as_str()).collect();
            format!("{}\n{}\n", keys.join(","), vals.join(","))
        }
        Format::Table => pairs.iter().map(|(k, v)| format!("{k}: {v}\n")).collect(),
    }
}

fn json_scalar(v: &str) -> serde_json::Value {
    match v.parse::<i64>() {
        Ok(i) => json!(i),
        Err(_) => match v {
            "true" => json!(true),
            "false" => json!(false),
            _ => json!(v),
        },
    }
}

fn pants_report(cmd: &Command, format: Format) -> Result<String> {
    let Command::Pants { check_k5, gtilde, ntilde, bordered, disc, associahedron, dot } = cmd else {
        unreachable!()
    };
    if let Some(dim) = associahedron {
        let k = pants::associahedron(*dim);
        if *dot {
            return Ok(k.to_dot(&format!("K{}", dim + 2)));
        }
        let f: Vec<String> = k.f_vector().iter().map(|x| x.to_string()).collect();
        return Ok(match format {
            Format::Json => to_json(&json!({ "dimension": dim, "f_vector": k.f_vector() })),
            _ => kv_report(format, &[("dimension", dim.to_string()), ("f_vector", f.join(" "))]),
        });
    }
    if *check_k5 {
        let cert = pants::check_k5_identification()?;
        return Ok(match format {
            Format::Json => to_json(&json!({ "space": "(0,3)", "polytope": "K5", "certificate": cert })),
            _ => {
                let status = match &cert {
                    IsoCertificate::Isomorphic { .. } => "isomorphic".to_string(),
                    IsoCertificate::NotIsomorphic { reason, .. } => format!("not isomorphic: {reason}"),
                };
                kv_report(format, &[("space", "(0,3)".into()), ("polytope", "K5".into()), ("result", status)])
            }
        });
    }
    if let Some(m) = disc {
        let count = pants::disc_component_count(*m)?;
        let enumerated = pants::disc_components_from_strata(*m)?;
        if BigInt::from(enumerated) != count {
            return Err(Error::InternalConsistency(format!("{enumerated} enumerated components, expected {count}")));
        }
        return Ok(kv_report(format, &[("m", m.to_string()), ("components", count.to_string())]));
    }
    if !bordered.is_empty() {
        let [g, h, n] = bordered[..] else {
            return Err(Error::domain("bordered", "expected g,h,n"));
        };
        let (curves, pants) = pants::pants_counts_bordered(g, h, n)?;
        return Ok(kv_report(
            format,
            &[("g", g.to_string()), ("h", h.to_string()), ("n", n.to_string()), ("curves", curves.to_string()), ("pants", pants.to_string())],
        ));
    }
    if let Some(gt) = gtilde {
        let (curves, pants) = pants::pants_counts(*gt, *ntilde)?;
        return Ok(kv_report(
            format,
            &[("g_tilde", gt.to_string()), ("n_tilde", ntilde.to_string()), ("curves", curves.to_string()), ("pants", pants.to_string())],
        ));
    }
    Err(Error::domain("pants", "give one of --check-k5, --gtilde, --bordered, --disc, --associahedron"))
}

fn gluing_report(cmd: &Command, format: Format) -> Result<(String, bool)> {
    let Command::VerifyGluing { r_list, p, resolution, beta_resolution } = cmd else { unreachable!() };
    let mut cfg = GluingConfig::default();
    if !r_list.is_empty() {
        cfg.scaling_r = r_list.clone();
    }
    if !p.is_empty() {
        cfg.p_list = p.clone();
    }
    if let Some(n) = resolution {
        cfg.scaling.nr = *n;
        cfg.scaling.nt = (*n / 4).max(8);
    }
    if let Some(n) = beta_resolution {
        cfg.beta_resolution = *n;
    }
    let report = gluing::verify_gluing(&cfg)?;
    let text = match format {
        Format::Json => to_json(&report),
        Format::Csv => {
            let mut out = String::from("seeds,p,r,norm\n");
            for s in &report.scaling {
                for (r, n) in s.fit.r.iter().zip(&s.fit.norms) {
                    let _ = writeln!(out, "{},{},{r:e},{n:e}", s.seeds, s.fit.p);
                }
            }
            out
        }
        Format::Table => {
            let mark = |ok: bool| if ok { "PASS" } else { "FAIL" };
            let mut out = String::new();
            for b in &report.beta {
                let _ = writeln!(
                    out,
                    "{} cutoff energy r={:e}: {:.6} vs {:.6} (rel {:.2e}, tol {})",
                    mark(b.passed),
                    b.r,
                    b.energy,
                    b.expected,
                    b.rel_error,
                    b.tolerance
                );
            }
            for s in &report.scaling {
                let slope = s.fit.slope.map_or("degenerate".to_string(), |v| format!("{v:.4}"));
                let _ = writeln!(out, "{} scaling {} p={}: slope {} (need >= {:.4})", mark(s.passed), s.seeds, s.fit.p, slope, s.required);
            }
            for i in &report.interp {
                let r = &i.report;
                let _ = writeln!(
                    out,
                    "{} interpolation {} t={:e}: sup {:.3e}/{:.3e}, gradient ratio {:.4}, seam {:.2e}",
                    mark(r.passed),
                    i.seeds,
                    i.t,
                    r.sup_grid,
                    r.sup_expected,
                    r.grad_ratio,
                    r.seam_grad
                );
            }
            let c = &report.cutsection;
            let _ = writeln!(out, "{} cutsection p={}: slope {:.3} (bound {:.3}, best effort)", mark(c.passed), c.p, c.slope, c.bound);
            let _ = writeln!(out, "{}", if report.passed { "all checks passed" } else { "some checks failed" });
            out
        }
    };
    Ok((text, report.passed))
}

/// Runs one parsed command and returns the report text and whether every
/// verification in it passed.
pub fn execute(cli: &Cli) -> Result<(String, bool)> {
    let format = cli.format;
    let text = match &cli.command {
        Command::Classify { gtilde } => {
            let types = surface_types::classify_symmetric(*gtilde);
            let rows = types
                .iter()
                .map(|s| Ok((*s, surface_types::quotient_type(*s)?)))
                .collect::<Result<Vec<_>>>()?;
            match format {
                Format::Json => to_json(&json!({
                    "g_tilde": gtilde,
                    "count": rows.len(),
                    "types": rows.iter().map(|(s, q)| json!({ "type": s, "quotient": q })).collect::<Vec<_>>(),
                })),
                _ => {
                    let sep = if format == Format::Csv { "," } else { " " };
                    let mut out = format!("g_tilde{sep}h{sep}k{sep}quotient\n");
                    for (s, q) in &rows {
                        let q = match q {
                            surface_types::QuotientType::Orientable { g, h } => format!("orientable g={g} h={h}"),
                            surface_types::QuotientType::Nonorientable { crosscaps, h } => {
                                format!("nonorientable crosscaps={crosscaps} h={h}")
                            }
                        };
                        let _ = writeln!(out, "{}{sep}{}{sep}{}{sep}{q}", s.g_tilde, s.h, s.k);
                    }
                    out
                }
            }
        }
        Command::Strata { ty, show } => strata_report(ty, *show, format)?,
        Command::Dim { ty } => {
            let t = ty.marked()?;
            kv_report(format, &[("moduli_dim", index::moduli_dim(&t).to_string())])
        }
        Command::Index { mu, big_n, g, h } => {
            let idx = index::fredholm_index_smooth(mu, *big_n, *g, *h)?;
            kv_report(format, &[("fredholm_index", idx.to_string())])
        }
        Command::Vdim { mu, big_n, ty } => {
            let t = ty.marked()?;
            let report = index::index_report(mu, *big_n, &t, None)?;
            match format {
                Format::Json => to_json(&report),
                _ => kv_report(
                    format,
                    &[
                        ("maslov", report.maslov.to_string()),
                        ("N", report.ambient_half_dim.to_string()),
                        ("fredholm_index", report.fredholm_index.to_string()),
                        ("moduli_dim", report.moduli_dim.to_string()),
                        ("virtual_dim", report.virtual_dim.to_string()),
                    ],
                ),
            }
        }
        cmd @ Command::Pants { .. } => pants_report(cmd, format)?,
        Command::Invariant { g, h, d, n, a, table } => {
            let oracle = builtin_oracle_g1();
            let range = match (a, table) {
                (_, Some(r)) => r.clone(),
                (Some(a), None) => *a..=*a,
                (None, None) => return Err(Error::domain("a", "give --a or --table")),
            };
            let rows = invariants::invariant_table(*g, *h, *d, n, range, &oracle)?;
            match format {
                Format::Json if table.is_none() => to_json(&rows[0]),
                Format::Json => to_json(&rows),
                Format::Csv => invariants::table_to_csv(&rows),
                Format::Table if table.is_none() => format!("{}\n", rows[0].value),
                Format::Table => rows.iter().map(|r| format!("a={:<4} {}\n", r.a, r.value)).collect(),
            }
        }
        cmd @ Command::VerifyGluing { .. } => return gluing_report(cmd, format),
    };
    Ok((text, true))
}

fn configure_threads() -> Result<()> {
    let Ok(value) = std::env::var("MODULI_THREADS") else { return Ok(()) };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::domain("MODULI_THREADS", format!("expected a positive integer, got {value:?}")))?;
    // A pool that is already configured keeps its size.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

/// Parses `argv`, runs the command, writes the report and returns the
/// process exit code: 0 on success, 2 on domain, validation or unsupported
/// errors, 3 on consistency failures.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return e.exit_code();
    }
    match execute(&cli) {
        Ok((text, passed)) => {
            let written = match &cli.output {
                Some(path) => std::fs::write(path, &text).map_err(|e| format!("cannot write {}: {e}", path.display())),
                None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| e.to_string()),
            };
            if let Err(msg) = written {
                eprintln!("error: {msg}");
                return 2;
            }
            if passed {
                0
            } else {
                eprintln!("error: verification failed");
                3
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
