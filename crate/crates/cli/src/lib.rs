//! Command-line front end: spec files in, reproducible CSV/PGM/report
//! artifacts plus a hash manifest out.

pub mod manifest;
pub mod specfile;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};

use semithermo::geometry::{
    box_dimension_points, osc_check, osc_report_text, render_fiber, render_global, shrink_rate,
    Disc, GridImage, GridSpec, ImageKind, WordRule,
};
use semithermo::measures::{
    atoms_csv, birkhoff_diagnostics, clt_report_text, conformal_atoms,
};
use semithermo::multifractal::{spectrum_csv, spectrum_table};
use semithermo::numeric::fmt_g17;
use semithermo::pressure::{bowen_root, pressure_curve, pressure_curve_csv};
use semithermo::{Cx, SemigroupSpec};

pub use manifest::{verify_manifest, Manifest};
pub use specfile::parse_spec;

#[derive(Parser, Debug)]
#[command(
    name = "semithermo",
    version,
    about = "Pressure, dimension, spectra, and renders for rational semigroups"
)]
pub struct Cli {
    /// Semigroup spec file (JSON).
    #[arg(long, value_name = "PATH")]
    pub spec: PathBuf,

    /// Output directory for artifacts and the manifest.
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,

    /// PRNG seed; required by stochastic subcommands.
    #[arg(long, value_name = "U64")]
    pub seed: Option<u64>,

    /// Preimage-tree depth.
    #[arg(long, value_name = "N", default_value_t = 8)]
    pub depth: usize,

    /// Worker thread cap (default: all cores; SEMITHERMO_THREADS as fallback).
    #[arg(long, value_name = "K")]
    pub threads: Option<usize>,

    /// Named tolerance override, e.g. --tol tol_t=5e-4 (repeatable).
    #[arg(long = "tol", value_name = "NAME=VALUE")]
    pub tolerances: Vec<String>,

    #[command(subcommand)]
    pub command: Command,
}

/// Currently overridable named tolerances.
const KNOWN_TOLERANCES: &[&str] = &["tol_t"];

fn parse_tolerances(raw: &[String]) -> Result<BTreeMap<String, f64>> {
    let mut out = BTreeMap::new();
    for item in raw {
        let (name, value) = item
            .split_once('=')
            .ok_or_else(|| anyhow!("tolerance override must look like name=value, got {item:?}"))?;
        let name = name.trim();
        if !KNOWN_TOLERANCES.contains(&name) {
            bail!("unknown tolerance {name:?}; known: {}", KNOWN_TOLERANCES.join(", "));
        }
        out.insert(name.to_string(), value.trim().parse::<f64>()?);
    }
    Ok(out)
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Pressure curve over a t grid, cross-checked at two base points.
    Pressure {
        /// Comma-separated grid, e.g. 0,0.2,0.4.
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        t_grid: Option<Vec<f64>>,
        /// Base point "re,im" (default: auto-selected repelling point).
        #[arg(long)]
        base_point: Option<String>,
        #[arg(long)]
        base_point_alt: Option<String>,
        /// Trailing level increments averaged per estimate.
        #[arg(long, default_value_t = 3)]
        k_avg: usize,
    },
    /// Bowen root of the pressure: the Hausdorff dimension of the Julia set.
    Dimension {
        /// Bisection width (overrides --tol tol_t=...; default 1e-3).
        #[arg(long)]
        tol_t: Option<f64>,
        #[arg(long)]
        base_point: Option<String>,
    },
    /// Multifractal spectrum rows over a q grid at reference parameter t.
    Spectrum {
        #[arg(long)]
        t: f64,
        /// Comma-separated grid in [0,1]; must contain 0 and 1.
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        q_grid: Option<Vec<f64>>,
        #[arg(long)]
        base_point: Option<String>,
    },
    /// Chaos-game render of the global Julia set.
    RenderGlobal {
        /// Pixel grid, e.g. 1024x1024.
        #[arg(long, default_value = "1024x1024")]
        grid: String,
        /// re_min,re_max,im_min,im_max (default: auto).
        #[arg(long)]
        bbox: Option<String>,
        #[arg(long, default_value_t = 2_000_000)]
        iterations: usize,
        /// Also write the occupied pixel centers as a CSV point cloud.
        #[arg(long)]
        points_csv: bool,
    },
    /// Escape-time render of a fiber Julia set.
    RenderFiber {
        /// const:i | periodic:p1p2... | random
        #[arg(long)]
        word_rule: String,
        #[arg(long, default_value = "1024x1024")]
        grid: String,
        #[arg(long)]
        bbox: Option<String>,
        #[arg(long, default_value_t = 40)]
        max_iter: u8,
    },
    /// Box-counting dimension of a PGM occupancy image or CSV point cloud.
    Boxdim {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 2)]
        k_min: u32,
        #[arg(long, default_value_t = 9)]
        k_max: u32,
        /// Pixel value counted as occupied (PGM input).
        #[arg(long, default_value_t = 255)]
        threshold: u8,
    },
    /// Open Set Condition check on a round disc.
    OscCheck {
        /// cx,cy,r
        #[arg(long)]
        disc: String,
        #[arg(long, default_value_t = 256)]
        n_boundary: usize,
        #[arg(long, default_value_t = 1024)]
        n_interior: usize,
    },
    /// Exponential shrinking rate of pulled-back balls.
    ShrinkRate {
        #[arg(long, default_value_t = 0.05)]
        radius: f64,
        #[arg(long, default_value_t = 6)]
        n_max: usize,
        #[arg(long)]
        base_point: Option<String>,
    },
    /// Atomic conformal-measure approximation.
    Conformal {
        #[arg(long)]
        t: f64,
        #[arg(long)]
        s: f64,
        /// Tree depth for the atoms (default: --depth).
        #[arg(long)]
        n_max: Option<usize>,
    },
    /// Central-limit diagnostics of log-derivative block sums.
    DiagnoseClt {
        #[arg(long)]
        t: f64,
        #[arg(long, default_value_t = 50)]
        n_block: usize,
        #[arg(long, default_value_t = 20_000)]
        n_samples: usize,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Pressure { .. } => "pressure",
            Command::Dimension { .. } => "dimension",
            Command::Spectrum { .. } => "spectrum",
            Command::RenderGlobal { .. } => "render-global",
            Command::RenderFiber { .. } => "render-fiber",
            Command::Boxdim { .. } => "boxdim",
            Command::OscCheck { .. } => "osc-check",
            Command::ShrinkRate { .. } => "shrink-rate",
            Command::Conformal { .. } => "conformal",
            Command::DiagnoseClt { .. } => "diagnose-clt",
        }
    }

    fn is_stochastic(&self) -> bool {
        match self {
            Command::RenderGlobal { .. } | Command::OscCheck { .. }
            | Command::DiagnoseClt { .. } => true,
            Command::RenderFiber { word_rule, .. } => word_rule.trim() == "random",
            _ => false,
        }
    }
}

fn parse_finite(s: &str) -> Result<f64> {
    let x: f64 = s.trim().parse()?;
    if !x.is_finite() {
        bail!("value {s:?} is not a finite number");
    }
    Ok(x)
}

fn parse_point(s: &str) -> Result<Cx> {
    let parts: Vec<&str> = s.split(',').collect();
    match parts.as_slice() {
        [re] => Ok(Cx::new(parse_finite(re)?, 0.0)),
        [re, im] => Ok(Cx::new(parse_finite(re)?, parse_finite(im)?)),
        _ => bail!("expected a point as re or re,im, got {s:?}"),
    }
}

fn parse_bbox(s: &str) -> Result<(f64, f64, f64, f64)> {
    let v: Vec<f64> = s
        .split(',')
        .map(parse_finite)
        .collect::<Result<_>>()
        .with_context(|| format!("bad bbox {s:?}"))?;
    if v.len() != 4 {
        bail!("bbox needs four numbers re_min,re_max,im_min,im_max");
    }
    Ok((v[0], v[1], v[2], v[3]))
}

fn parse_grid(s: &str) -> Result<(usize, usize)> {
    let (w, h) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| anyhow!("grid must look like 1024x768, got {s:?}"))?;
    Ok((w.trim().parse()?, h.trim().parse()?))
}

fn parse_word_rule(s: &str) -> Result<WordRule> {
    let s = s.trim();
    if s == "random" {
        // seed is injected by the caller
        return Ok(WordRule::SeededRandom(0));
    }
    if let Some(i) = s.strip_prefix("const:") {
        return Ok(WordRule::Constant(i.trim().parse()?));
    }
    if let Some(p) = s.strip_prefix("periodic:") {
        let pat: Vec<u8> = p
            .trim()
            .chars()
            .map(|c| {
                c.to_digit(10)
                    .map(|d| d as u8)
                    .ok_or_else(|| anyhow!("periodic pattern must be digits, got {c:?}"))
            })
            .collect::<Result<_>>()?;
        return Ok(WordRule::Periodic(pat));
    }
    bail!("word rule must be const:i, periodic:p1p2..., or random; got {s:?}")
}

fn parse_disc(s: &str) -> Result<Disc> {
    let v: Vec<f64> = s
        .split(',')
        .map(parse_finite)
        .collect::<Result<_>>()
        .with_context(|| format!("bad disc {s:?}"))?;
    if v.len() != 3 || v[2] <= 0.0 {
        bail!("disc needs cx,cy,r with r > 0");
    }
    Ok(Disc::new(v[0], v[1], v[2]))
}

/// Auto bounding box: iterate the polynomial inverse-image radius bound
/// to a fixed point; the Julia set lives inside that disc.
fn auto_bbox(spec: &SemigroupSpec) -> BBox {
    let r = match spec.escape_radius() {
        Some(r0) => {
            let mut r = r0;
            for _ in 0..40 {
                r = spec
                    .generators()
                    .iter()
                    .map(|g| {
                        let d = g.degree() as f64;
                        let lead = g.numerator().last().unwrap().norm();
                        let lower: f64 =
                            g.numerator()[..g.degree()].iter().map(|c| c.norm()).sum();
                        ((r + lower) / lead).powf(1.0 / d).max(1.0)
                    })
                    .fold(0.0, f64::max);
            }
            r * 1.1
        }
        None => 2.5,
    };
    (-r, r, -r, r)
}

fn resolve_base_points(
    spec: &SemigroupSpec,
    primary: &Option<String>,
    alt: &Option<String>,
) -> Result<(Cx, Cx)> {
    let candidates = spec.base_point_candidates();
    let primary = match primary {
        Some(s) => parse_point(s)?,
        None => *candidates
            .first()
            .ok_or_else(|| anyhow!("no admissible base point found; pass --base-point"))?,
    };
    let alt = match alt {
        Some(s) => parse_point(s)?,
        None => *candidates
            .iter()
            .find(|c| c.chordal(&primary) > 0.05)
            .ok_or_else(|| anyhow!("no alternate base point found; pass --base-point-alt"))?,
    };
    Ok((primary, alt))
}

fn resolve_base_point(spec: &SemigroupSpec, arg: &Option<String>) -> Result<Cx> {
    match arg {
        Some(s) => parse_point(s),
        None => spec
            .base_point_candidates()
            .first()
            .copied()
            .ok_or_else(|| anyhow!("no admissible base point found; pass --base-point")),
    }
}

/// Escape-time data remapped for PGM output: non-escaping pixels become
/// 255, escaping pixels keep their escape step.
fn fiber_pgm(img: &GridImage) -> Vec<u8> {
    let max_iter = match img.kind {
        ImageKind::EscapeTime { max_iter } => max_iter,
        ImageKind::Occupancy => return img.to_pgm(),
    };
    let mut copy = img.clone();
    for v in copy.data.iter_mut() {
        *v = if *v >= max_iter { 255 } else { (*v).min(254) };
    }
    copy.to_pgm()
}

type BBox = (f64, f64, f64, f64);

fn read_boxdim_input(path: &Path, threshold: u8) -> Result<(Vec<Cx>, BBox)> {
    let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("");
    match ext {
        "pgm" => {
            let bytes = std::fs::read(path)?;
            // bbox in pixel units; box dimension is scale invariant
            let probe = GridImage::from_pgm(&bytes, (0.0, 1.0, 0.0, 1.0), ImageKind::Occupancy)
                .map_err(|e| anyhow!("{e}"))?;
            let (w, h) = (probe.width() as f64, probe.height() as f64);
            let img = GridImage::from_pgm(&bytes, (0.0, w, 0.0, h), ImageKind::Occupancy)
                .map_err(|e| anyhow!("{e}"))?;
            let mut pts = Vec::new();
            for py in 0..img.height() {
                for px in 0..img.width() {
                    if img.get(px, py) >= threshold {
                        pts.push(img.center_of(px, py));
                    }
                }
            }
            Ok((pts, (0.0, w, 0.0, h)))
        }
        "csv" => {
            let text = std::fs::read_to_string(path)?;
            let mut pts = Vec::new();
            for line in text.lines() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let mut it = line.split(',');
                let (Some(a), Some(b)) = (it.next(), it.next()) else { continue };
                let (Ok(re), Ok(im)) = (a.trim().parse::<f64>(), b.trim().parse::<f64>())
                else {
                    continue; // header row
                };
                pts.push(Cx::new(re, im));
            }
            if pts.is_empty() {
                bail!("no points parsed from {}", path.display());
            }
            let (mut x0, mut x1, mut y0, mut y1) =
                (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
            for p in &pts {
                x0 = x0.min(p.re());
                x1 = x1.max(p.re());
                y0 = y0.min(p.im());
                y1 = y1.max(p.im());
            }
            let pad = 0.01 * ((x1 - x0).max(y1 - y0)).max(1e-9);
            Ok((pts, (x0 - pad, x1 + pad, y0 - pad, y1 + pad)))
        }
        other => bail!("boxdim input must be .pgm or .csv, got .{other}"),
    }
}

pub fn run(cli: Cli) -> Result<()> {
    let threads = cli.threads.or_else(|| {
        std::env::var("SEMITHERMO_THREADS").ok().and_then(|v| v.parse().ok())
    });
    if let Some(k) = threads {
        // ignore the error when a pool already exists (repeated calls in tests)
        let _ = rayon::ThreadPoolBuilder::new().num_threads(k).build_global();
    }

    if cli.command.is_stochastic() && cli.seed.is_none() {
        bail!(
            "subcommand {} is stochastic: a --seed is required for reproducibility",
            cli.command.name()
        );
    }
    let tolerances = parse_tolerances(&cli.tolerances)?;

    let (spec, _name) = parse_spec(&cli.spec)?;
    std::fs::create_dir_all(&cli.out)
        .with_context(|| format!("cannot create {}", cli.out.display()))?;

    let mut params: BTreeMap<String, String> = BTreeMap::new();
    let manifest = |params: BTreeMap<String, String>| {
        Manifest::new(cli.command.name(), &cli.spec, cli.seed, cli.depth, params)
    };

    match &cli.command {
        Command::Pressure { t_grid, base_point, base_point_alt, k_avg } => {
            let grid = t_grid
                .clone()
                .unwrap_or_else(|| (0..13).map(|k| k as f64 * 0.2).collect());
            let (xi, xi_alt) = resolve_base_points(&spec, base_point, base_point_alt)?;
            let curve = pressure_curve(&spec, xi, xi_alt, &grid, cli.depth, *k_avg)?;
            params.insert("t_grid".into(), join_floats(&grid));
            params.insert("base_point".into(), format!("{xi}"));
            params.insert("base_point_alt".into(), format!("{xi_alt}"));
            params.insert("k_avg".into(), k_avg.to_string());
            let mut m = manifest(params)?;
            let mut csv = String::new();
            csv.push_str(&format!("# base_point = {xi}\n"));
            csv.push_str(&format!("# base_point_alt = {xi_alt}\n"));
            csv.push_str(&format!(
                "# cross_check_gap = {}\n",
                fmt_g17(curve.cross_check_gap)
            ));
            csv.push_str(&format!(
                "# monotonicity_violations = {}\n# convexity_violations = {}\n",
                curve.monotonicity_violations.len(),
                curve.convexity_violations.len()
            ));
            csv.push_str(&pressure_curve_csv(&curve));
            m.write_artifact(&cli.out, "pressure.csv", csv.as_bytes())?;
            m.finish(&cli.out)?;
        }
        Command::Dimension { tol_t, base_point } => {
            let xi = resolve_base_point(&spec, base_point)?;
            let tol_t = tol_t
                .or_else(|| tolerances.get("tol_t").copied())
                .unwrap_or(semithermo::tol::DEFAULT_TOL_T);
            let res = bowen_root(&spec, xi, cli.depth, tol_t)?;
            params.insert("tol_t".into(), fmt_g17(tol_t));
            params.insert("base_point".into(), format!("{xi}"));
            let mut m = manifest(params)?;
            let csv = format!(
                "h,bracket_lo,bracket_hi,residual,depth\n{},{},{},{},{}\n",
                fmt_g17(res.h),
                fmt_g17(res.bracket.0),
                fmt_g17(res.bracket.1),
                fmt_g17(res.residual),
                res.depth
            );
            m.write_artifact(&cli.out, "bowen.csv", csv.as_bytes())?;
            m.finish(&cli.out)?;
        }
        Command::Spectrum { t, q_grid, base_point } => {
            let q = q_grid.clone().unwrap_or_else(|| vec![0.0, 0.25, 0.5, 0.75, 1.0]);
            let xi = resolve_base_point(&spec, base_point)?;
            let table = spectrum_table(&spec, xi, *t, &q, cli.depth)?;
            params.insert("t".into(), fmt_g17(*t));
            params.insert("q_grid".into(), join_floats(&q));
            params.insert("base_point".into(), format!("{xi}"));
            let mut m = manifest(params)?;
            m.write_artifact(&cli.out, "spectrum.csv", spectrum_csv(&table, cli.seed).as_bytes())?;
            m.finish(&cli.out)?;
        }
        Command::RenderGlobal { grid, bbox, iterations, points_csv } => {
            let (w, h) = parse_grid(grid)?;
            let bb = match bbox {
                Some(s) => parse_bbox(s)?,
                None => auto_bbox(&spec),
            };
            let gs = GridSpec::new(bb, w, h)?;
            let img = render_global(&spec, *iterations, cli.seed.unwrap(), gs)?;
            params.insert("grid".into(), format!("{w}x{h}"));
            params.insert("bbox".into(), join_floats(&[bb.0, bb.1, bb.2, bb.3]));
            params.insert("iterations".into(), iterations.to_string());
            params.insert("points_csv".into(), points_csv.to_string());
            let mut m = manifest(params)?;
            m.write_artifact(&cli.out, "global.pgm", &img.to_pgm())?;
            if *points_csv {
                m.write_artifact(&cli.out, "global_points.csv", img.points_csv().as_bytes())?;
            }
            m.finish(&cli.out)?;
        }
        Command::RenderFiber { word_rule, grid, bbox, max_iter } => {
            if *max_iter == 255 {
                bail!("--max-iter must be at most 254 (255 marks the non-escaping set)");
            }
            let mut rule = parse_word_rule(word_rule)?;
            if let WordRule::SeededRandom(_) = rule {
                rule = WordRule::SeededRandom(cli.seed.unwrap());
            }
            let (w, h) = parse_grid(grid)?;
            let bb = match bbox {
                Some(s) => parse_bbox(s)?,
                None => auto_bbox(&spec),
            };
            let gs = GridSpec::new(bb, w, h)?;
            let img = render_fiber(&spec, &rule, gs, *max_iter)?;
            params.insert("word_rule".into(), word_rule.clone());
            params.insert("grid".into(), format!("{w}x{h}"));
            params.insert("bbox".into(), join_floats(&[bb.0, bb.1, bb.2, bb.3]));
            params.insert("max_iter".into(), max_iter.to_string());
            let mut m = manifest(params)?;
            m.write_artifact(&cli.out, "fiber.pgm", &fiber_pgm(&img))?;
            m.finish(&cli.out)?;
        }
        Command::Boxdim { input, k_min, k_max, threshold } => {
            let (pts, bb) = read_boxdim_input(input, *threshold)?;
            let fit = box_dimension_points(&pts, bb, *k_min..=*k_max)?;
            params.insert("input".into(), file_name(input));
            params.insert("k_min".into(), k_min.to_string());
            params.insert("k_max".into(), k_max.to_string());
            params.insert("threshold".into(), threshold.to_string());
            let mut m = manifest(params)?;
            let mut csv = String::new();
            csv.push_str(&format!("# slope = {}\n", fmt_g17(fit.slope)));
            csv.push_str(&format!("# r2 = {}\n", fmt_g17(fit.r2)));
            csv.push_str("k,count\n");
            for (k, n) in &fit.counts {
                csv.push_str(&format!("{k},{n}\n"));
            }
            m.write_artifact(&cli.out, "boxdim.csv", csv.as_bytes())?;
            m.finish(&cli.out)?;
        }
        Command::OscCheck { disc, n_boundary, n_interior } => {
            let d = parse_disc(disc)?;
            let report = osc_check(&spec, d, *n_boundary, *n_interior, cli.seed.unwrap())?;
            params.insert("disc".into(), disc.clone());
            params.insert("n_boundary".into(), n_boundary.to_string());
            params.insert("n_interior".into(), n_interior.to_string());
            let mut m = manifest(params)?;
            m.write_artifact(&cli.out, "osc_report.txt", osc_report_text(&report).as_bytes())?;
            m.finish(&cli.out)?;
        }
        Command::ShrinkRate { radius, n_max, base_point } => {
            let xi = resolve_base_point(&spec, base_point)?;
            let fit = shrink_rate(&spec, xi, *radius, *n_max)?;
            params.insert("radius".into(), fmt_g17(*radius));
            params.insert("n_max".into(), n_max.to_string());
            params.insert("base_point".into(), format!("{xi}"));
            let mut m = manifest(params)?;
            let mut csv = String::new();
            csv.push_str(&format!("# alpha_hat = {}\n", fmt_g17(fit.alpha_hat)));
            csv.push_str(&format!("# c_hat = {}\n", fmt_g17(fit.c_hat)));
            csv.push_str(&format!("# r2 = {}\n", fmt_g17(fit.r2)));
            csv.push_str("k,diameter\n");
            for (k, d) in fit.diameters.iter().enumerate() {
                csv.push_str(&format!("{},{}\n", k + 1, fmt_g17(*d)));
            }
            m.write_artifact(&cli.out, "shrink.csv", csv.as_bytes())?;
            m.finish(&cli.out)?;
        }
        Command::Conformal { t, s, n_max } => {
            let n = n_max.unwrap_or(cli.depth);
            let xi = resolve_base_point(&spec, &None)?;
            let measure = conformal_atoms(&spec, xi, *t, *s, n)?;
            params.insert("t".into(), fmt_g17(*t));
            params.insert("s".into(), fmt_g17(*s));
            params.insert("n_max".into(), n.to_string());
            params.insert("base_point".into(), format!("{xi}"));
            params.insert("tail_bound".into(), fmt_g17(measure.tail_bound));
            let mut m = manifest(params)?;
            m.write_artifact(&cli.out, "atoms.csv", atoms_csv(&measure).as_bytes())?;
            m.finish(&cli.out)?;
        }
        Command::DiagnoseClt { t, n_block, n_samples } => {
            let report =
                birkhoff_diagnostics(&spec, *t, *n_block, *n_samples, cli.seed.unwrap())?;
            params.insert("t".into(), fmt_g17(*t));
            params.insert("n_block".into(), n_block.to_string());
            params.insert("n_samples".into(), n_samples.to_string());
            let mut m = manifest(params)?;
            m.write_artifact(&cli.out, "clt_report.txt", clt_report_text(&report).as_bytes())?;
            m.finish(&cli.out)?;
        }
    }
    Ok(())
}

fn join_floats(xs: &[f64]) -> String {
    xs.iter().map(|x| fmt_g17(*x)).collect::<Vec<_>>().join(",")
}

fn file_name(p: &Path) -> String {
    p.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default()
}
